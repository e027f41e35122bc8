"""JSON checkpoints holding a network and, optionally, its optimiser state."""

import json
import logging
import os
from typing import Any, Dict, Optional, Tuple

import numpy as np

from srm.kernels import EscapeNoiseParams, KernelParams
from .topology import LayerSpec, NetworkParams

logger = logging.getLogger(__name__)

CHECKPOINT_FORMAT = "snn-checkpoint"
CHECKPOINT_VERSION = 1


class CheckpointError(ValueError):
    pass


def params_to_dict(params: NetworkParams) -> Dict[str, Any]:
    return {
        "layers": [{"size": layer.size, "kind": layer.kind} for layer in params.layers],
        "weights": [w.tolist() for w in params.weights],
        "delays": None if params.delays is None else params.delays.tolist(),
        "kernel": params.kernel.to_dict(),
        "noise": params.noise.to_dict(),
        "seed": params.seed,
    }


def params_from_dict(data: Dict[str, Any]) -> NetworkParams:
    try:
        layers = [LayerSpec(int(l["size"]), l["kind"]) for l in data["layers"]]
        weights = [np.array(w, dtype=float).reshape(layers[i + 1].size, layers[i].size)
                   for i, w in enumerate(data["weights"])]
        delays = data.get("delays")
        return NetworkParams(
            layers=layers,
            weights=weights,
            delays=None if delays is None else np.array(delays, dtype=float),
            kernel=KernelParams.from_dict(data["kernel"]),
            noise=EscapeNoiseParams.from_dict(data["noise"]),
            seed=int(data.get("seed", 0)),
        )
    except (KeyError, TypeError, IndexError, ValueError) as e:
        raise CheckpointError(f"Invalid network description: {e}") from e


def save_checkpoint(path: str, params: NetworkParams, optimizer: Optional[Dict[str, Any]] = None,
                    extra: Optional[Dict[str, Any]] = None) -> None:
    doc = {
        "format": CHECKPOINT_FORMAT,
        "version": CHECKPOINT_VERSION,
        "network": params_to_dict(params),
        "optimizer": optimizer,
    }
    if extra:
        doc["extra"] = extra
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(doc, f)
    logger.debug("Saved checkpoint to %s", path)


def _read_checkpoint(path: str) -> Dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as f:
            doc = json.load(f)
    except json.JSONDecodeError as e:
        raise CheckpointError(f"Checkpoint {path} is not valid JSON: {e}") from e

    if not isinstance(doc, dict) or doc.get("format") != CHECKPOINT_FORMAT:
        raise CheckpointError(f"{path} is not a network checkpoint")
    if doc.get("version") != CHECKPOINT_VERSION:
        raise CheckpointError(f"Unsupported checkpoint version {doc.get('version')} in {path}")
    return doc


def load_checkpoint(path: str) -> Tuple[NetworkParams, Optional[Dict[str, Any]]]:
    """Returns the network and the optimiser state dict (None if it was not saved)."""
    doc = _read_checkpoint(path)
    return params_from_dict(doc.get("network") or {}), doc.get("optimizer")


def load_checkpoint_extra(path: str) -> Dict[str, Any]:
    """The free-form block stored next to the weights (run config, fitted encoder)."""
    return _read_checkpoint(path).get("extra") or {}
