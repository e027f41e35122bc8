from .dataset import (
    Dataset, DatasetError, IdxMagicError, IdxTruncatedError, IdxCountMismatchError,
    CsvFormatError, xor_dataset
)
from .idx import load_idx
from .tabular import CsvSchema, IRIS_SCHEMA, WISCONSIN_SCHEMA, load_csv
from .splits import (
    KFOLD, HOLDOUT, SplitPlan, stratified_k_fold, stratified_holdout, stratified_split,
    subset, subset_indices, minibatch_iter, iterate_batches
)
