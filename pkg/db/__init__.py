from .connection import get_db_connection, init_db
from .jobs import (
    create_run_job, update_run_progress, complete_run_job,
    get_run_status, get_latest_run_job, list_run_jobs,
    stop_run_job, check_run_cancellation
)
