"""Delimited-text datasets (Iris, Wisconsin breast cancer) and the synthetic XOR set."""

import csv
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np

from logger import logger
from .dataset import CsvFormatError, Dataset, DatasetError


@dataclass(frozen=True)
class CsvSchema:
    name: str
    feature_columns: Tuple[int, ...]
    label_column: int
    labels: Dict[str, int] = field(default_factory=dict)
    missing: str = "?"
    delimiter: str = ","

    @property
    def n_classes(self) -> int:
        return len(set(self.labels.values()))


# setosa / versicolor / virginica in this order, so classes 1 and 2 are the non-separable pair
IRIS_SCHEMA = CsvSchema(
    name="iris",
    feature_columns=(0, 1, 2, 3),
    label_column=4,
    labels={"Iris-setosa": 0, "Iris-versicolor": 1, "Iris-virginica": 2},
)

# id, nine cytology scores, class (2 benign, 4 malignant)
WISCONSIN_SCHEMA = CsvSchema(
    name="wisconsin",
    feature_columns=tuple(range(1, 10)),
    label_column=10,
    labels={"2": 0, "4": 1},
)


def load_csv(path: str, schema: CsvSchema) -> Dataset:
    """Rows holding the missing-value marker are dropped and counted; any other bad row is an error."""
    rows: List[List[float]] = []
    labels: List[int] = []
    dropped = 0
    n_columns = max(max(schema.feature_columns), schema.label_column) + 1

    with open(path, "r", encoding="utf-8", newline="") as f:
        for line_no, row in enumerate(csv.reader(f, delimiter=schema.delimiter), start=1):
            row = [cell.strip() for cell in row]
            if not any(row):
                continue
            if len(row) < n_columns:
                raise CsvFormatError(path, line_no, f"expected at least {n_columns} columns, got {len(row)}")

            wanted = [row[c] for c in schema.feature_columns] + [row[schema.label_column]]
            if schema.missing in wanted:
                dropped += 1
                continue

            label = row[schema.label_column]
            if label not in schema.labels:
                raise CsvFormatError(path, line_no, f"unknown label '{label}'")
            try:
                rows.append([float(row[c]) for c in schema.feature_columns])
            except ValueError as e:
                raise CsvFormatError(path, line_no, f"non-numeric feature ({e})") from e
            labels.append(schema.labels[label])

    if not rows:
        raise DatasetError(f"{path} holds no usable rows")

    logger.info(f"Loaded {len(rows)} {schema.name} samples from {path} ({dropped} dropped for missing values)")
    return Dataset(
        features=np.array(rows),
        labels=np.array(labels),
        n_classes=schema.n_classes,
        provenance=f"{schema.name}:{path}",
        dropped=dropped,
    )
