"""Stratified k-fold / hold-out splitting and seeded mini-batch order."""

from dataclasses import dataclass
from typing import Iterator, List, Sequence, Tuple, Union

import numpy as np

from .dataset import Dataset, DatasetError

KFOLD = "kfold"
HOLDOUT = "holdout"


@dataclass(frozen=True)
class SplitPlan:
    kind: str
    k: int = 3
    validation_size: int = 0
    seed: int = 0

    def __post_init__(self):
        if self.kind not in (KFOLD, HOLDOUT):
            raise ValueError(f"Unknown split kind '{self.kind}'")


def _class_allocation(counts: np.ndarray, total: int) -> np.ndarray:
    """Largest-remainder share of `total` per class, proportional to class size."""
    exact = total * counts / counts.sum()
    quota = np.floor(exact).astype(int)
    order = np.argsort(-(exact - quota), kind="stable")
    quota[order[:total - quota.sum()]] += 1
    return quota


def stratified_k_fold(ds: Dataset, k: int, rng: np.random.Generator) -> List[np.ndarray]:
    """Index arrays of k disjoint folds whose class counts differ by at most one sample."""
    if k < 2:
        raise DatasetError(f"k-fold splitting needs k >= 2 (got {k})")
    counts = ds.class_counts()
    present = counts[counts > 0]
    if present.size and present.min() < k:
        raise DatasetError(f"Smallest class has {present.min()} samples, fewer than k={k}")

    folds: List[List[int]] = [[] for _ in range(k)]
    offset = 0
    for c in range(ds.n_classes):
        members = rng.permutation(np.flatnonzero(ds.labels == c))
        # continue dealing where the last class stopped so fold sizes stay level
        for i, idx in enumerate(members):
            folds[(offset + i) % k].append(int(idx))
        offset += members.size
    return [np.sort(np.array(f, dtype=int)) for f in folds]


def stratified_holdout(ds: Dataset, size: int, rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
    """(train, validation) index arrays with a class-proportional validation set of `size`."""
    if not 0 < size < len(ds):
        raise DatasetError(f"Validation size must be within (0, {len(ds)}) (got {size})")
    quota = _class_allocation(ds.class_counts(), size)
    chosen = []
    for c in range(ds.n_classes):
        members = rng.permutation(np.flatnonzero(ds.labels == c))
        chosen.extend(members[:quota[c]].tolist())
    validation = np.sort(np.array(chosen, dtype=int))
    train = np.setdiff1d(np.arange(len(ds)), validation)
    return train, validation


def stratified_split(ds: Dataset, plan: SplitPlan,
                     rng: np.random.Generator) -> Union[List[np.ndarray], Tuple[np.ndarray, np.ndarray]]:
    if plan.kind == KFOLD:
        return stratified_k_fold(ds, plan.k, rng)
    return stratified_holdout(ds, plan.validation_size, rng)


def subset_indices(ds: Dataset, n: int, rng: np.random.Generator) -> np.ndarray:
    """Sorted indices of a class-proportional subsample of n samples (all of them when n >= len(ds))."""
    if n >= len(ds):
        return np.arange(len(ds))
    _, chosen = stratified_holdout(ds, n, rng)
    return chosen


def subset(ds: Dataset, n: int, rng: np.random.Generator) -> Dataset:
    if n >= len(ds):
        return ds
    return ds.take(subset_indices(ds, n, rng), tag=f"{ds.provenance}[{n}]")


def minibatch_iter(n_samples: Union[int, Dataset], batch_size: int, seed: Union[int, Sequence[int]],
                   epoch: int = 0) -> List[np.ndarray]:
    """One epoch of batches in an order fixed by (seed, epoch); the last batch may be short."""
    if batch_size < 1:
        raise ValueError(f"batch_size must be at least 1 (got {batch_size})")
    n = len(n_samples) if isinstance(n_samples, Dataset) else int(n_samples)
    key = tuple(seed) if isinstance(seed, (tuple, list)) else (seed,)
    order = np.random.default_rng((*key, epoch)).permutation(n)
    return [order[i:i + batch_size] for i in range(0, n, batch_size)]


def iterate_batches(n_samples: Union[int, Dataset], batch_size: int,
                    seed: Union[int, Sequence[int]]) -> Iterator[Tuple[int, np.ndarray]]:
    """Endless (epoch, batch) stream."""
    epoch = 0
    while True:
        for batch in minibatch_iter(n_samples, batch_size, seed, epoch):
            yield epoch, batch
        epoch += 1
