import os
import sqlite3
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

os.environ["TESTING"] = "1"
os.environ.setdefault("SNN_LOG_FILE", "")

import db.connection
import db.jobs


class NonClosingConnection:
    """Lets the registry code call close() on the shared in-memory connection"""

    def __init__(self, conn):
        self._conn = conn

    def close(self):
        pass

    def __getattr__(self, name):
        return getattr(self._conn, name)


_registry = sqlite3.connect(":memory:", check_same_thread=False, timeout=30)
_registry.row_factory = sqlite3.Row


def registry_connection():
    return NonClosingConnection(_registry)


# every module that opened its own connection now shares the in-memory registry
for module in (db.connection, db.jobs):
    module.get_db_connection = registry_connection
db.connection.init_db()


@pytest.fixture
def test_db():
    """Empty run registry"""
    _registry.execute("DELETE FROM run_jobs")
    _registry.commit()
    yield _registry


@pytest.fixture
def test_client(test_db):
    from fastapi.testclient import TestClient
    from server import app

    yield TestClient(app)


@pytest.fixture
def xor_config():
    """XOR preset cut down to 3 epochs of one run on one thread"""
    from harness import apply_overrides, get_preset
    return apply_overrides(get_preset('xor'), epochs=3, runs=1, workers=1)

