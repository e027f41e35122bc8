import os
import time
from dataclasses import dataclass
from typing import Any, Dict, List, Optional

from logger import logger, run_log
from .pipeline import load_datasets, load_encoded_cache, prepare_folds, resolve_out_dir
from .results import aggregate, run_summary, write_checkpoint, write_metrics, write_summary
from .settings import ConfigError, ExperimentConfig, apply_overrides
from .training import ProgressReporter, ResumePoint, RunMetrics, train_fold


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    runs: List[RunMetrics]
    summary: Dict[str, Any]
    out_dir: Optional[str] = None


def _train_all(cfg: ExperimentConfig, data_dir: Optional[str], reporter: Optional[ProgressReporter],
               resume: Optional[ResumePoint]) -> List[RunMetrics]:
    main, test = load_datasets(cfg, data_dir)
    cache = load_encoded_cache(cfg, main, test) if cfg.encoded_dir else None
    logger.info(f"Experiment '{cfg.name}': {cfg.runs} run(s) on {main.provenance} "
                f"({len(main)} samples, {main.n_classes} classes)")
    if resume is None:
        return [train_fold(cfg, fold_data, run, reporter)
                for run in range(cfg.runs)
                for fold_data in prepare_folds(cfg, main, test, run, cache)]

    folds = [f for f in prepare_folds(cfg, main, test, resume.run, cache) if f.fold == resume.fold]
    if not folds:
        raise ConfigError(f"Run {resume.run} has no fold {resume.fold} under the '{cfg.split}' split")
    return [train_fold(cfg, folds[0], resume.run, reporter, resume)]


def run_experiment(cfg: ExperimentConfig, out_dir: Optional[str] = None, data_dir: Optional[str] = None,
                   reporter: Optional[ProgressReporter] = None, write_files: bool = True,
                   resume: Optional[ResumePoint] = None) -> ExperimentResult:
    """
    Independent runs (each with its own splits, encoders and initial weights);
    k-fold cross-validation adds one sub-run per fold. With write_files the
    out_dir receives metrics.csv, summary.json, run.log and one checkpoint
    per (run, fold).

    A resume point continues only its own (run, fold) for the configured
    epochs or iterations, under the seed it was trained with.
    """
    if resume is not None and cfg.seed != resume.seed:
        logger.warning(f"Resuming with the checkpoint seed {resume.seed} instead of {cfg.seed}")
        cfg = apply_overrides(cfg, seed=resume.seed)

    started = time.monotonic()
    if not write_files:
        results = _train_all(cfg, data_dir, reporter, resume)
        summary = {'runs': [run_summary(m) for m in results], 'aggregate': aggregate(results),
                   'wall_clock': time.monotonic() - started}
        return ExperimentResult(config=cfg, runs=results, summary=summary)

    out_dir = resolve_out_dir(out_dir, cfg.name)
    with run_log(os.path.join(out_dir, 'run.log')):
        results = _train_all(cfg, data_dir, reporter, resume)
        extra = {'wall_clock': time.monotonic() - started}
        write_metrics(os.path.join(out_dir, 'metrics.csv'), results)
        for m in results:
            write_checkpoint(out_dir, cfg, m)
        summary = write_summary(os.path.join(out_dir, 'summary.json'), cfg, results, extra)
        logger.info(f"Experiment '{cfg.name}' finished in {extra['wall_clock']:.1f}s; results in {out_dir}")
    return ExperimentResult(config=cfg, runs=results, summary=summary, out_dir=out_dir)
