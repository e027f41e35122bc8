import json
import os
from typing import Any, Dict, List, Optional

from fastapi import APIRouter, BackgroundTasks, HTTPException
from pydantic import BaseModel, field_validator, model_validator

from db import create_run_job, get_latest_run_job, get_run_status, list_run_jobs, stop_run_job
from harness import ConfigError, experiment_background_task, get_preset, parse_config, parse_grid, preset_names
from harness.pipeline import resolve_out_dir
from logger import logger

router = APIRouter(prefix="/api/experiments", tags=["experiments"])
presets_router = APIRouter(prefix="/api/presets", tags=["experiments"])


class ExperimentRequest(BaseModel):
    preset: Optional[str] = None
    config: Optional[Dict[str, Any]] = None
    kind: str = 'train'
    grid: List[str] = []
    seed: Optional[int] = None
    runs: Optional[int] = None
    out_dir: Optional[str] = None

    @field_validator('kind')
    @classmethod
    def validate_kind(cls, v):
        if v not in ['train', 'sweep']:
            raise ValueError('kind must be one of: train, sweep')
        return v

    @model_validator(mode='after')
    def validate_source(self):
        if (self.preset is None) == (self.config is None):
            raise ValueError('give exactly one of preset and config')
        if self.kind == 'sweep' and not self.grid:
            raise ValueError('a sweep needs at least one grid axis')
        return self


@presets_router.get("")
async def list_presets() -> List[Dict[str, Any]]:
    """Preset names with their resolved configs"""
    return [{"name": name, "config": get_preset(name).model_dump(mode='json')} for name in preset_names()]


@router.post("")
async def start_experiment(data: ExperimentRequest, background_tasks: BackgroundTasks) -> Dict[str, Any]:
    """Validate the request, register a job and train in the background"""
    try:
        base = get_preset(data.preset) if data.preset else parse_config(data.config)
        overrides = {k: v for k, v in (('seed', data.seed), ('runs', data.runs)) if v is not None}
        cfg = parse_config({**base.model_dump(), **overrides}) if overrides else base
        grid = parse_grid(data.grid) if data.kind == 'sweep' else None
    except ConfigError as e:
        raise HTTPException(status_code=400, detail=str(e))

    out_dir = resolve_out_dir(data.out_dir, f"{cfg.name}-{data.kind}")
    job_id = create_run_job(kind=data.kind, preset=data.preset, config=cfg.model_dump(mode='json'),
                            out_dir=out_dir)
    logger.info(f"Queued {data.kind} job {job_id} for '{cfg.name}' into {out_dir}")
    background_tasks.add_task(experiment_background_task, job_id, data.kind, cfg, out_dir, grid)
    return {"message": "Experiment started", "job_id": job_id, "out_dir": out_dir}


@router.get("")
async def list_experiments(limit: int = 50, status: Optional[str] = None) -> List[Dict[str, Any]]:
    if status is not None and status not in ['running', 'completed', 'failed']:
        raise HTTPException(status_code=400, detail="status must be one of: running, completed, failed")
    return list_run_jobs(limit=limit, status=status)


@router.get("/latest")
async def get_latest_experiment() -> Dict[str, Any]:
    """Most recently registered job, whatever its status"""
    job = get_latest_run_job()
    if not job:
        raise HTTPException(status_code=404, detail="No experiments registered")
    return job


@router.get("/{job_id}")
async def get_experiment(job_id: int) -> Dict[str, Any]:
    job = get_run_status(job_id)
    if not job:
        raise HTTPException(status_code=404, detail="Experiment not found")
    return job


@router.post("/{job_id}/stop")
async def stop_experiment(job_id: int) -> Dict[str, str]:
    """Request cancellation; the run stops at its next evaluation"""
    if not get_run_status(job_id):
        raise HTTPException(status_code=404, detail="Experiment not found")
    if not stop_run_job(job_id):
        raise HTTPException(status_code=400, detail="Experiment is not running")
    return {"message": "Stop requested"}


@router.get("/{job_id}/summary")
async def get_experiment_summary(job_id: int) -> Dict[str, Any]:
    job = get_run_status(job_id)
    if not job:
        raise HTTPException(status_code=404, detail="Experiment not found")
    if job['status'] != 'completed':
        raise HTTPException(status_code=400, detail=f"Experiment is {job['status']}")

    filename = 'sweep.json' if job['kind'] == 'sweep' else 'summary.json'
    path = os.path.join(job['out_dir'] or '', filename)
    if not os.path.exists(path):
        raise HTTPException(status_code=404, detail=f"{filename} not found in {job['out_dir']}")
    with open(path, 'r', encoding='utf-8') as f:
        return json.load(f)
