import json
import sqlite3
from typing import Optional, Dict, Any, List
from .connection import get_db_connection

def create_run_job(kind: str = 'train', preset: Optional[str] = None, config: Optional[Dict[str, Any]] = None,
                   out_dir: Optional[str] = None, total_iterations: int = 0) -> int:
    """Create a new run job and return its ID"""
    conn = get_db_connection()
    cursor = conn.execute(
        '''INSERT INTO run_jobs (kind, preset, config, out_dir, total_iterations, status)
           VALUES (?, ?, ?, ?, ?, 'running')''',
        (kind, preset, json.dumps(config) if config is not None else None, out_dir, total_iterations)
    )
    assert cursor.lastrowid is not None
    job_id = cursor.lastrowid
    conn.commit()
    conn.close()
    return job_id

def update_run_progress(job_id: int, current_iteration: int, errors: Optional[List[str]] = None,
                        conn: Optional[sqlite3.Connection] = None, **kwargs: Any) -> None:
    """Update run job progress with flexible metrics"""
    own_conn = conn is None
    if own_conn:
        conn = get_db_connection()
    errors_json = json.dumps(errors) if errors else None

    updates = ["current_iteration = ?", "errors = ?"]
    params: List[Any] = [current_iteration, errors_json]

    # Only these columns can be updated via kwargs; values stay parameterized
    allowed_metrics = [
        'phase', 'current_run', 'current_fold', 'total_iterations', 'last_loss', 'last_accuracy'
    ]

    for key, value in kwargs.items():
        if key in allowed_metrics and value is not None:
            updates.append(f"{key} = ?")
            params.append(value)

    params.append(job_id)

    sql = f"UPDATE run_jobs SET {', '.join(updates)} WHERE id = ?"
    conn.execute(sql, params)
    if own_conn:
        conn.commit()
        conn.close()

def complete_run_job(job_id: int, status: str = 'completed', errors: Optional[List[str]] = None,
                     conn: Optional[sqlite3.Connection] = None) -> None:
    """Mark run job as completed or failed"""
    own_conn = conn is None
    if own_conn:
        conn = get_db_connection()
    errors_json = json.dumps(errors) if errors else None

    conn.execute(
        '''UPDATE run_jobs
           SET status = ?, completed_at = CURRENT_TIMESTAMP, errors = ?
           WHERE id = ?''',
        (status, errors_json, job_id)
    )
    if own_conn:
        conn.commit()
        conn.close()

def _parse_job(job: Any) -> Optional[Dict[str, Any]]:
    if not job:
        return None
    result = dict(job)
    for key in ('errors', 'config'):
        if result.get(key):
            try:
                result[key] = json.loads(result[key])
            except (json.JSONDecodeError, TypeError):
                pass
    result['cancel_requested'] = bool(result.get('cancel_requested'))
    return result

def get_run_status(job_id: int) -> Optional[Dict[str, Any]]:
    """Get status of a specific run job"""
    conn = get_db_connection()
    job = conn.execute(
        '''SELECT * FROM run_jobs WHERE id = ?''',
        (job_id,)
    ).fetchone()
    conn.close()
    return _parse_job(job)

def get_latest_run_job() -> Optional[Dict[str, Any]]:
    """Get the most recent run job"""
    conn = get_db_connection()
    job = conn.execute(
        '''SELECT * FROM run_jobs ORDER BY id DESC LIMIT 1'''
    ).fetchone()
    conn.close()
    return _parse_job(job)

def list_run_jobs(limit: int = 50, status: Optional[str] = None) -> List[Dict[str, Any]]:
    """Most recent run jobs first"""
    conn = get_db_connection()
    if status:
        rows = conn.execute(
            '''SELECT * FROM run_jobs WHERE status = ? ORDER BY id DESC LIMIT ?''',
            (status, limit)
        ).fetchall()
    else:
        rows = conn.execute(
            '''SELECT * FROM run_jobs ORDER BY id DESC LIMIT ?''',
            (limit,)
        ).fetchall()
    conn.close()
    return [_parse_job(row) for row in rows]

def stop_run_job(job_id: int) -> bool:
    """Request cancellation of a running job"""
    conn = get_db_connection()
    cursor = conn.execute(
        '''UPDATE run_jobs SET cancel_requested = 1 WHERE id = ? AND status = 'running' ''',
        (job_id,)
    )
    rowcount = cursor.rowcount
    conn.commit()
    conn.close()
    return rowcount > 0

def check_run_cancellation(job_id: int) -> bool:
    """Check if cancellation has been requested for the job"""
    conn = get_db_connection()
    row = conn.execute(
        '''SELECT cancel_requested FROM run_jobs WHERE id = ?''',
        (job_id,)
    ).fetchone()
    conn.close()
    return bool(row['cancel_requested']) if row else False
