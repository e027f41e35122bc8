from typing import Any, Dict, List, Optional

from db import check_run_cancellation, complete_run_job, update_run_progress
from logger import logger
from .evaluation import EvalResult
from .experiment import run_experiment
from .settings import ExperimentConfig
from .sweep import sweep
from .training import ResumePoint, RunCancelled


class JobReporter:
    """Mirrors evaluation progress into the run_jobs table and polls for cancellation."""

    def __init__(self, job_id: int):
        self.job_id = job_id

    def on_evaluation(self, run: int, fold: int, iteration: int, total: int, result: EvalResult) -> None:
        update_run_progress(self.job_id, iteration, phase='training', current_run=run, current_fold=fold,
                            total_iterations=total, last_loss=result.loss, last_accuracy=result.accuracy)

    def cancelled(self) -> bool:
        return check_run_cancellation(self.job_id)


def execute_job(job_id: int, kind: str, cfg: ExperimentConfig, out_dir: Optional[str] = None,
                grid: Optional[Dict[str, List[Any]]] = None, data_dir: Optional[str] = None,
                resume: Optional[ResumePoint] = None) -> Any:
    """Run a train or sweep job and record its final status; failures are re-raised."""
    reporter = JobReporter(job_id)
    try:
        if kind == 'sweep':
            result = sweep(cfg, grid or {}, out_dir=out_dir, data_dir=data_dir, reporter=reporter)
        else:
            result = run_experiment(cfg, out_dir=out_dir, data_dir=data_dir, reporter=reporter, resume=resume)
    except RunCancelled:
        logger.warning(f"Run job {job_id} cancelled.")
        complete_run_job(job_id, status='failed', errors=['Run cancelled by user'])
        raise
    except Exception as e:
        logger.error(f"Run job {job_id} failed: {e}", exc_info=True)
        complete_run_job(job_id, status='failed', errors=[str(e)])
        raise
    complete_run_job(job_id, status='completed')
    logger.info(f"Run job {job_id} completed")
    return result


def experiment_background_task(job_id: int, kind: str, cfg: ExperimentConfig, out_dir: Optional[str] = None,
                               grid: Optional[Dict[str, List[Any]]] = None) -> None:
    """Entry point for FastAPI background tasks: the job row already holds the outcome."""
    try:
        execute_job(job_id, kind, cfg, out_dir=out_dir, grid=grid)
    except Exception:
        pass
