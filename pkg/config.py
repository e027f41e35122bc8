import os
import logging
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

# --- CONFIGURATION ---
VERSION = "1.0.0"

# Use environment variables with defaults
DATA_DIR = os.environ.get("SNN_DATA_DIR", "./data_files")
RESULTS_DIR = os.environ.get("SNN_RESULTS_DIR", "./results")
DB_PATH = os.environ.get("SNN_DB_PATH", "runs.db")

# Logging
LOG_LEVEL_STR = os.environ.get("SNN_LOG_LEVEL", "INFO").upper()
LOG_LEVEL = getattr(logging, LOG_LEVEL_STR, logging.INFO)
LOG_FILE = os.environ.get("SNN_LOG_FILE", "snn.log")

# Worker threads used to simulate the samples of a mini-batch
try:
    WORKERS = max(1, int(os.environ.get("SNN_WORKERS", "1")))
except ValueError:
    WORKERS = 1

SNN_ENV = os.environ.get("SNN_ENV", "development").lower()
TESTING = bool(os.environ.get("TESTING"))

# Production guard: refuse to start against a missing dataset directory
if SNN_ENV == "production" and not TESTING and not os.path.isdir(DATA_DIR):
    raise RuntimeError(
        f"FATAL: Running in production mode but SNN_DATA_DIR ({DATA_DIR}) does not exist.\n"
        "Point it at the directory holding the MNIST IDX files and the Iris/Wisconsin CSVs:\n"
        "  export SNN_DATA_DIR=/path/to/datasets\n"
        "Then restart."
    )

# Dataset file names looked up under DATA_DIR
MNIST_FILES = {
    'train_images': 'train-images-idx3-ubyte',
    'train_labels': 'train-labels-idx1-ubyte',
    'test_images': 't10k-images-idx3-ubyte',
    'test_labels': 't10k-labels-idx1-ubyte',
}
IRIS_FILE = 'iris.data'
WISCONSIN_FILE = 'breast-cancer-wisconsin.data'


def get_dataset_path(filename: str, data_dir: str = None) -> str:
    """
    Resolve a dataset file under the data directory. A gzip-compressed
    sibling (filename + '.gz') is returned when the plain file is absent.
    """
    base = data_dir or DATA_DIR
    path = os.path.join(base, filename)
    if not os.path.exists(path) and os.path.exists(path + '.gz'):
        return path + '.gz'
    return path
