import pytest

from db.connection import SCHEMA_VERSION, init_db
from db.jobs import (
    check_run_cancellation, complete_run_job, create_run_job, get_latest_run_job, get_run_status, list_run_jobs,
    stop_run_job, update_run_progress
)


def test_init_db_creates_run_jobs(test_db):
    """init_db creates the run registry and records the schema version"""
    tables = [t[0] for t in test_db.execute(
        "SELECT name FROM sqlite_master WHERE type='table' AND name NOT LIKE 'sqlite_%'"
    ).fetchall()]
    assert 'run_jobs' in tables
    assert test_db.execute('PRAGMA user_version').fetchone()[0] == SCHEMA_VERSION


def test_init_db_is_idempotent(test_db):
    """Running init_db twice keeps existing rows"""
    job_id = create_run_job(kind='train', preset='xor')
    init_db()
    assert get_run_status(job_id) is not None


def test_create_and_get_run_job(test_db):
    """A new job starts running with its config stored as JSON"""
    job_id = create_run_job(kind='sweep', preset='iris', config={'eta0': 0.1}, out_dir='/tmp/iris',
                            total_iterations=30)
    job = get_run_status(job_id)
    assert job['status'] == 'running'
    assert job['kind'] == 'sweep'
    assert job['config'] == {'eta0': 0.1}
    assert job['out_dir'] == '/tmp/iris'
    assert job['total_iterations'] == 30
    assert job['cancel_requested'] is False


def test_missing_job(test_db):
    assert get_run_status(12345) is None
    assert check_run_cancellation(12345) is False


def test_invalid_kind_rejected(test_db):
    """The kind column only accepts train, eval and sweep"""
    import sqlite3
    with pytest.raises(sqlite3.IntegrityError):
        create_run_job(kind='predict')


def test_update_run_progress(test_db):
    """Progress metrics are written, unknown kwargs are ignored"""
    job_id = create_run_job()
    update_run_progress(job_id, 40, phase='training', current_run=2, current_fold=1, last_loss=0.42,
                        last_accuracy=0.9, status='completed')
    job = get_run_status(job_id)
    assert job['current_iteration'] == 40
    assert job['phase'] == 'training'
    assert job['current_run'] == 2
    assert job['current_fold'] == 1
    assert job['last_loss'] == pytest.approx(0.42)
    assert job['last_accuracy'] == pytest.approx(0.9)
    assert job['status'] == 'running'


def test_complete_run_job(test_db):
    ok = create_run_job()
    bad = create_run_job()
    complete_run_job(ok)
    complete_run_job(bad, status='failed', errors=['boom'])

    assert get_run_status(ok)['status'] == 'completed'
    assert get_run_status(ok)['completed_at'] is not None
    assert get_run_status(bad)['status'] == 'failed'
    assert get_run_status(bad)['errors'] == ['boom']


def test_list_run_jobs(test_db):
    """Most recent first, optionally filtered by status"""
    first = create_run_job(preset='xor')
    second = create_run_job(preset='iris')
    complete_run_job(first)

    jobs = list_run_jobs()
    assert [j['id'] for j in jobs] == [second, first]
    assert [j['id'] for j in list_run_jobs(status='completed')] == [first]
    assert len(list_run_jobs(limit=1)) == 1
    assert get_latest_run_job()['id'] == second


def test_stop_run_job(test_db):
    """Only running jobs can be asked to stop"""
    job_id = create_run_job()
    assert check_run_cancellation(job_id) is False
    assert stop_run_job(job_id) is True
    assert check_run_cancellation(job_id) is True
    assert get_run_status(job_id)['cancel_requested'] is True

    done = create_run_job()
    complete_run_job(done)
    assert stop_run_job(done) is False
