import sqlite3
from config import DB_PATH

# Schema version for migration tracking
SCHEMA_VERSION = 2

def get_db_connection() -> sqlite3.Connection:
    conn = sqlite3.connect(DB_PATH, timeout=30, check_same_thread=False)
    conn.row_factory = sqlite3.Row
    # Ensure WAL mode is active for this connection
    conn.execute('PRAGMA journal_mode=WAL')
    return conn

def init_db() -> None:
    conn = get_db_connection()

    # Run registry: one row per train / eval / sweep invocation
    conn.execute('''
        CREATE TABLE IF NOT EXISTS run_jobs (
            id INTEGER PRIMARY KEY AUTOINCREMENT,
            kind TEXT DEFAULT 'train' CHECK(kind IN ('train', 'eval', 'sweep')),
            preset TEXT,
            status TEXT DEFAULT 'running' CHECK(status IN ('running', 'completed', 'failed')),
            config TEXT,
            out_dir TEXT,
            started_at TIMESTAMP DEFAULT CURRENT_TIMESTAMP,
            completed_at TIMESTAMP,
            total_iterations INTEGER DEFAULT 0,
            current_iteration INTEGER DEFAULT 0,
            current_run INTEGER DEFAULT 0,
            current_fold INTEGER DEFAULT 0,
            phase TEXT,
            last_loss REAL,
            last_accuracy REAL,
            errors TEXT,
            cancel_requested BOOLEAN DEFAULT 0
        )
    ''')

    current_version = conn.execute('PRAGMA user_version').fetchone()[0]

    if current_version < 2:
        # Migration 2: per-evaluation metric columns
        for col, col_type in [('last_loss', 'REAL'), ('last_accuracy', 'REAL'),
                              ('current_run', 'INTEGER DEFAULT 0'), ('current_fold', 'INTEGER DEFAULT 0')]:
            try:
                conn.execute(f'ALTER TABLE run_jobs ADD COLUMN {col} {col_type}')
            except sqlite3.OperationalError:
                pass  # Column already exists

    # Index on run_jobs.status for fast polling queries
    conn.execute('CREATE INDEX IF NOT EXISTS idx_run_jobs_status ON run_jobs(status)')

    if current_version < SCHEMA_VERSION:
        conn.execute(f'PRAGMA user_version = {SCHEMA_VERSION}')

    conn.commit()
    conn.close()
