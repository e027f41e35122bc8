"""Command line entry point: train, eval, encode, sweep and serve."""

import argparse
import json
import os
import sys
from typing import List, Optional

import numpy as np

from config import VERSION
from db import create_run_job, init_db
from encoders import save_encoded
from harness import (
    ENCODED_TEST_FILE, ENCODED_TRAIN_FILE, ExperimentConfig, SampleEncoder, apply_overrides, evaluate, execute_job,
    get_preset, load_config, load_datasets, parse_config, parse_grid, preset_names, read_resume_point,
    resolve_out_dir
)
from harness.pipeline import STREAM_ENCODER, STREAM_EVAL
from logger import logger
from network import load_checkpoint, load_checkpoint_extra


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="snn", description="First-to-spike spiking network experiments")
    sub = parser.add_subparsers(dest="command", required=True)

    def experiment_args(p: argparse.ArgumentParser, config_required: bool = True) -> None:
        source = p.add_mutually_exclusive_group(required=config_required)
        source.add_argument("--config", help="JSON experiment config")
        source.add_argument("--preset", choices=preset_names(), help="Named experiment preset")
        p.add_argument("--seed", type=int, help="Override the config seed")
        p.add_argument("--runs", type=int, help="Override the number of independent runs")
        p.add_argument("--workers", type=int, help="Threads simulating a mini-batch")
        p.add_argument("--out-dir", help="Directory for result files")
        p.add_argument("--data-dir", help="Dataset directory (default: SNN_DATA_DIR)")

    p_train = sub.add_parser("train", help="Train and evaluate an experiment")
    experiment_args(p_train, config_required=False)
    p_train.add_argument("--resume", metavar="CHECKPOINT",
                         help="Continue the run and fold of a checkpoint written by train")
    p_train.add_argument("--encoded", metavar="DIR", help="Spike trains written by encode, used instead of encoding")

    p_eval = sub.add_parser("eval", help="Evaluate a saved checkpoint on the test data")
    p_eval.add_argument("--checkpoint", required=True, help="checkpoint_run*_fold*.json written by train")
    experiment_args(p_eval, config_required=False)

    experiment_args(sub.add_parser("encode", help="Write the encoded spike trains of a dataset"))

    p_sweep = sub.add_parser("sweep", help="Grid sweep over config fields")
    experiment_args(p_sweep)
    p_sweep.add_argument("--encoded", metavar="DIR", help="Spike trains written by encode, used instead of encoding")
    p_sweep.add_argument("--grid", action="append", required=True, metavar="KEY=V1,V2",
                         help="Grid axis; repeat for a multi-dimensional grid")

    p_serve = sub.add_parser("serve", help="Start the run registry API")
    p_serve.add_argument("--port", "-p", type=int, help="Port to run the server on")
    return parser


def resolve_config(args: argparse.Namespace, base: Optional[ExperimentConfig] = None) -> ExperimentConfig:
    if args.config:
        cfg = load_config(args.config)
    elif args.preset:
        cfg = get_preset(args.preset)
    else:
        cfg = base
    return apply_overrides(cfg, seed=args.seed, runs=args.runs, workers=args.workers,
                           encoded_dir=getattr(args, 'encoded', None))


def cmd_train(args: argparse.Namespace) -> None:
    """Without --config or --preset a resumed run keeps the config stored in its checkpoint."""
    resume = read_resume_point(args.resume) if args.resume else None
    if resume is None and not (args.config or args.preset):
        raise ValueError("train needs --config, --preset or --resume")
    cfg = resolve_config(args, base=parse_config(resume.config) if resume else None)
    out_dir = resolve_out_dir(args.out_dir, cfg.name)
    init_db()
    job_id = create_run_job(kind='train', preset=args.preset, config=cfg.model_dump(mode='json'), out_dir=out_dir)
    result = execute_job(job_id, 'train', cfg, out_dir=out_dir, data_dir=args.data_dir, resume=resume)
    accuracy = result.summary['aggregate']['accuracy']
    print(f"test accuracy {accuracy['mean']:.4f} ± {accuracy['sem']:.4f} over {accuracy['n']} run(s); "
          f"results in {out_dir}")


def cmd_sweep(args: argparse.Namespace) -> None:
    cfg = resolve_config(args)
    grid = parse_grid(args.grid)
    out_dir = resolve_out_dir(args.out_dir, f"{cfg.name}-sweep")
    init_db()
    job_id = create_run_job(kind='sweep', preset=args.preset, config=cfg.model_dump(mode='json'), out_dir=out_dir)
    rows = execute_job(job_id, 'sweep', cfg, out_dir=out_dir, grid=grid, data_dir=args.data_dir)
    print(f"{len(rows)} sweep point(s) written to {out_dir}")


def cmd_eval(args: argparse.Namespace) -> None:
    params, _ = load_checkpoint(args.checkpoint)
    extra = load_checkpoint_extra(args.checkpoint)
    if 'config' not in extra or 'encoder' not in extra:
        raise ValueError(f"{args.checkpoint} does not carry the config and encoder needed for evaluation")
    cfg = resolve_config(args, base=parse_config(extra['config']))

    main, test = load_datasets(cfg, args.data_dir)
    dataset = test if test is not None else main
    encoder = SampleEncoder.from_dict(cfg, extra['encoder'])
    if encoder.n_inputs != params.sizes[0]:
        raise ValueError(f"Encoder yields {encoder.n_inputs} inputs but the network expects {params.sizes[0]}")

    logger.info(f"Evaluating {args.checkpoint} on {len(dataset)} samples of {dataset.provenance}")
    result = evaluate(params, encoder.encode_dataset(dataset), cfg, (cfg.seed, 0, 0, STREAM_EVAL))

    out_dir = resolve_out_dir(args.out_dir, f"{cfg.name}-eval")
    with open(os.path.join(out_dir, 'eval.json'), 'w', encoding='utf-8') as f:
        json.dump({'version': VERSION, 'checkpoint': args.checkpoint, 'dataset': dataset.provenance,
                   'result': result.to_dict()}, f, indent=2)
    print(f"accuracy {result.accuracy:.4f}, loss {result.loss:.4f}, null rate {result.null_rate:.4f}")


def cmd_encode(args: argparse.Namespace) -> None:
    """Encoders are fitted on the full main dataset with the run-0 encoder stream."""
    cfg = resolve_config(args)
    main, test = load_datasets(cfg, args.data_dir)
    encoder = SampleEncoder.fit(cfg, main, np.random.default_rng((cfg.seed, 0, 0, STREAM_ENCODER)))
    out_dir = resolve_out_dir(args.out_dir, f"{cfg.name}-encoded")
    meta = {'version': VERSION, 'encoder': encoder.to_dict(), 'dataset': main.provenance}

    save_encoded(os.path.join(out_dir, ENCODED_TRAIN_FILE), encoder.encode_dataset(main),
                 encoder.n_inputs, cfg.dt, meta)
    if test is not None:
        save_encoded(os.path.join(out_dir, ENCODED_TEST_FILE), encoder.encode_dataset(test),
                     encoder.n_inputs, cfg.dt, {**meta, 'dataset': test.provenance})
    logger.info(f"Encoded {cfg.dataset} with {encoder.n_inputs} input neurons into {out_dir}")


def cmd_serve(args: argparse.Namespace) -> None:
    from server import serve
    serve(args.port)


COMMANDS = {
    'train': cmd_train,
    'eval': cmd_eval,
    'encode': cmd_encode,
    'sweep': cmd_sweep,
    'serve': cmd_serve,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        COMMANDS[args.command](args)
    except Exception as e:
        logger.error(f"{args.command} failed: {e}", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
