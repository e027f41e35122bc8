"""Encoded-sample cache files so an encoding can be shared between runs."""

import json
import logging
import os
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

from network.topology import SpikeTrain

logger = logging.getLogger(__name__)

ENCODED_FORMAT = "snn-encoded"
ENCODED_VERSION = 1


class EncodingFileError(ValueError):
    pass


@dataclass
class EncodedSample:
    spikes: List[SpikeTrain]
    label: int


def sample_to_pairs(sample: EncodedSample) -> List[List[float]]:
    return [[j, t] for j, train in enumerate(sample.spikes) for t in train]


def save_encoded(path: str, samples: Sequence[EncodedSample], n_inputs: int, dt: float,
                 meta: Optional[Dict[str, Any]] = None) -> None:
    doc = {
        "format": ENCODED_FORMAT,
        "version": ENCODED_VERSION,
        "n_inputs": n_inputs,
        "dt": dt,
        "meta": meta or {},
        "samples": [{"label": int(s.label), "spikes": sample_to_pairs(s)} for s in samples],
    }
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(doc, f)
    logger.debug("Wrote %d encoded samples to %s", len(samples), path)


def load_encoded(path: str) -> Tuple[List[EncodedSample], Dict[str, Any]]:
    """Returns the samples and the file header (n_inputs, dt, meta)."""
    try:
        with open(path, "r", encoding="utf-8") as f:
            doc = json.load(f)
    except json.JSONDecodeError as e:
        raise EncodingFileError(f"{path} is not valid JSON: {e}") from e

    if not isinstance(doc, dict) or doc.get("format") != ENCODED_FORMAT:
        raise EncodingFileError(f"{path} is not an encoded-sample file")
    if doc.get("version") != ENCODED_VERSION:
        raise EncodingFileError(f"Unsupported encoded-sample version {doc.get('version')}")

    try:
        n_inputs = int(doc["n_inputs"])
        samples = []
        for i, entry in enumerate(doc["samples"]):
            spikes: List[SpikeTrain] = [[] for _ in range(n_inputs)]
            for j, t in entry["spikes"]:
                if not 0 <= int(j) < n_inputs:
                    raise EncodingFileError(f"Sample {i} references input {j} of {n_inputs}")
                spikes[int(j)].append(float(t))
            samples.append(EncodedSample(spikes=[sorted(s) for s in spikes], label=int(entry["label"])))
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, EncodingFileError):
            raise
        raise EncodingFileError(f"Malformed encoded-sample file {path}: {e}") from e

    header = {"n_inputs": n_inputs, "dt": float(doc.get("dt", 0.1)), "meta": doc.get("meta", {})}
    return samples, header
