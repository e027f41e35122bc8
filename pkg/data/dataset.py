from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np


class DatasetError(ValueError):
    pass


class IdxMagicError(DatasetError):
    pass


class IdxTruncatedError(DatasetError):
    pass


class IdxCountMismatchError(DatasetError):
    pass


class CsvFormatError(DatasetError):
    def __init__(self, path: str, line: int, message: str):
        super().__init__(f"{path}:{line}: {message}")
        self.path = path
        self.line = line


@dataclass
class Dataset:
    features: np.ndarray
    labels: np.ndarray
    n_classes: int
    provenance: str
    image_shape: Optional[Tuple[int, int]] = None
    dropped: int = 0

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=float)
        self.labels = np.asarray(self.labels, dtype=int)
        if self.features.ndim != 2:
            raise DatasetError(f"Features must be a 2-D array (got shape {self.features.shape})")
        if len(self.features) != len(self.labels):
            raise DatasetError(f"{len(self.features)} feature rows but {len(self.labels)} labels")
        if self.labels.size and (self.labels.min() < 0 or self.labels.max() >= self.n_classes):
            raise DatasetError(f"Labels must lie in [0, {self.n_classes})")

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    def class_counts(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.n_classes)

    def take(self, indices: Sequence[int], tag: Optional[str] = None) -> "Dataset":
        indices = np.asarray(indices, dtype=int)
        return Dataset(
            features=self.features[indices],
            labels=self.labels[indices],
            n_classes=self.n_classes,
            provenance=tag or self.provenance,
            image_shape=self.image_shape,
        )

    def image(self, index: int) -> np.ndarray:
        if self.image_shape is None:
            raise DatasetError(f"{self.provenance} does not hold images")
        return self.features[index].reshape(self.image_shape)


def xor_dataset() -> Dataset:
    features = np.array([[0, 0], [0, 1], [1, 0], [1, 1]], dtype=float)
    return Dataset(features=features, labels=np.array([0, 1, 1, 0]), n_classes=2, provenance="xor")
