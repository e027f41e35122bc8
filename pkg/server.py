import socket

from fastapi import FastAPI

from config import TESTING, VERSION
from db import init_db
from routes import experiments
from logger import logger

app = FastAPI(title="SNN First-to-Spike Runs", version=VERSION)

# the test suite initialises its own in-memory registry
if not TESTING:
    init_db()

app.include_router(experiments.presets_router)
app.include_router(experiments.router)


@app.get("/api/health")
async def health() -> dict:
    return {"status": "ok", "version": VERSION}


def is_port_in_use(port: int) -> bool:
    with socket.socket(socket.AF_INET, socket.SOCK_STREAM) as s:
        try:
            s.bind(("0.0.0.0", port))
            return False
        except socket.error:
            return True


def find_available_port(start_port: int, max_attempts: int = 100) -> int:
    port = start_port
    while is_port_in_use(port) and port < start_port + max_attempts:
        port += 1
    return port


def serve(port: int = None) -> None:
    import uvicorn

    if port is None:
        port = find_available_port(8600)
        logger.info(f"No port specified, using first available port: {port}")
    elif is_port_in_use(port):
        logger.warning(f"Warning: Port {port} is already in use. Uvicorn may fail to start.")
    uvicorn.run(app, host="0.0.0.0", port=port)


if __name__ == "__main__":
    import argparse

    parser = argparse.ArgumentParser(description="SNN run registry server")
    parser.add_argument("--port", "-p", type=int, help="Port to run the server on")
    args = parser.parse_args()
    serve(args.port)
