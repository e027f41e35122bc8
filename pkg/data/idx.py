"""Big-endian IDX files (MNIST), optionally gzip-compressed."""

import gzip
from typing import Tuple

import numpy as np

from logger import logger
from .dataset import Dataset, IdxCountMismatchError, IdxMagicError, IdxTruncatedError

IMAGES_MAGIC = 0x00000803
LABELS_MAGIC = 0x00000801


def _read_bytes(path: str) -> bytes:
    opener = gzip.open if path.endswith('.gz') else open
    with opener(path, 'rb') as f:
        return f.read()


def _parse(raw: bytes, path: str, magic: int) -> Tuple[Tuple[int, ...], np.ndarray]:
    n_dims = magic & 0xFF
    header_len = 4 * (1 + n_dims)
    if len(raw) < 4:
        raise IdxTruncatedError(f"{path}: file too short for an IDX header")

    found = int(np.frombuffer(raw[:4], dtype='>u4')[0])
    if found != magic:
        raise IdxMagicError(f"{path}: magic number 0x{found:08x}, expected 0x{magic:08x}")
    if len(raw) < header_len:
        raise IdxTruncatedError(f"{path}: header truncated")

    dims = tuple(int(d) for d in np.frombuffer(raw[4:header_len], dtype='>u4'))
    expected = header_len + int(np.prod(dims))
    if len(raw) != expected:
        raise IdxTruncatedError(f"{path}: {len(raw)} bytes, header declares {expected}")
    return dims, np.frombuffer(raw[header_len:], dtype=np.uint8).reshape(dims)


def load_idx(images_path: str, labels_path: str) -> Dataset:
    """Pixels stay on the 0-255 scale; encoders decide on normalisation."""
    dims, images = _parse(_read_bytes(images_path), images_path, IMAGES_MAGIC)
    _, labels = _parse(_read_bytes(labels_path), labels_path, LABELS_MAGIC)
    if dims[0] != labels.shape[0]:
        raise IdxCountMismatchError(f"{images_path} holds {dims[0]} images but {labels_path} holds {labels.shape[0]} labels")

    logger.info(f"Loaded {dims[0]} IDX samples of {dims[1]}x{dims[2]} pixels from {images_path}")
    return Dataset(
        features=images.reshape(dims[0], -1).astype(float),
        labels=labels.astype(int),
        n_classes=10,
        provenance=f"mnist:{images_path}",
        image_shape=(dims[1], dims[2]),
    )
