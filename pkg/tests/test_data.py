import gzip

import numpy as np
import pytest

from data import (
    IRIS_SCHEMA, WISCONSIN_SCHEMA, CsvFormatError, CsvSchema, Dataset, DatasetError, IdxCountMismatchError,
    IdxMagicError, IdxTruncatedError, SplitPlan, iterate_batches, load_csv, load_idx, minibatch_iter,
    stratified_holdout, stratified_k_fold, stratified_split, subset, xor_dataset
)


def _idx_bytes(magic, dims, payload):
    header = np.array([magic, *dims], dtype='>u4').tobytes()
    return header + np.asarray(payload, dtype=np.uint8).tobytes()


def _write_mnist(tmp_path, n=5, rows=4, cols=3, n_labels=None, gz=False):
    images = np.arange(n * rows * cols, dtype=np.uint8).reshape(n, rows, cols)
    labels = np.arange(n, dtype=np.uint8) % 10
    img_raw = _idx_bytes(0x803, (n, rows, cols), images)
    lbl_raw = _idx_bytes(0x801, (n_labels or n,), np.arange(n_labels or n) % 10)
    suffix = '.gz' if gz else ''
    img_path, lbl_path = tmp_path / f"images{suffix}", tmp_path / f"labels{suffix}"
    if gz:
        img_path.write_bytes(gzip.compress(img_raw))
        lbl_path.write_bytes(gzip.compress(lbl_raw))
    else:
        img_path.write_bytes(img_raw)
        lbl_path.write_bytes(lbl_raw)
    return str(img_path), str(lbl_path), images, labels


def _labelled(counts):
    labels = np.concatenate([np.full(n, c) for c, n in enumerate(counts)])
    return Dataset(features=np.arange(len(labels), dtype=float)[:, None], labels=labels,
                   n_classes=len(counts), provenance="synthetic")


# IDX

def test_load_idx(tmp_path):
    img, lbl, images, labels = _write_mnist(tmp_path)
    ds = load_idx(img, lbl)
    assert len(ds) == 5
    assert ds.image_shape == (4, 3)
    assert ds.n_classes == 10
    assert np.array_equal(ds.image(2), images[2])
    assert np.array_equal(ds.labels, labels)
    assert ds.features.max() == images.max()


def test_load_idx_gzip(tmp_path):
    img, lbl, images, _ = _write_mnist(tmp_path, gz=True)
    assert np.array_equal(load_idx(img, lbl).image(4), images[4])


def test_idx_bad_magic(tmp_path):
    img, lbl, _, _ = _write_mnist(tmp_path)
    with pytest.raises(IdxMagicError):
        load_idx(lbl, img)


def test_idx_truncated(tmp_path):
    img, lbl, _, _ = _write_mnist(tmp_path)
    raw = open(img, 'rb').read()
    short = tmp_path / "short"
    short.write_bytes(raw[:-1])
    with pytest.raises(IdxTruncatedError):
        load_idx(str(short), lbl)
    tiny = tmp_path / "tiny"
    tiny.write_bytes(raw[:2])
    with pytest.raises(IdxTruncatedError):
        load_idx(str(tiny), lbl)


def test_idx_count_mismatch(tmp_path):
    img, lbl, _, _ = _write_mnist(tmp_path, n_labels=4)
    with pytest.raises(IdxCountMismatchError):
        load_idx(img, lbl)


# CSV

def test_load_iris(tmp_path):
    path = tmp_path / "iris.data"
    path.write_text(
        "5.1,3.5,1.4,0.2,Iris-setosa\n"
        "7.0,3.2,4.7,1.4,Iris-versicolor\n"
        "6.3,3.3,6.0,2.5,Iris-virginica\n"
        "\n"
    )
    ds = load_csv(str(path), IRIS_SCHEMA)
    assert len(ds) == 3
    assert ds.n_classes == 3
    assert list(ds.labels) == [0, 1, 2]
    assert ds.features[1] == pytest.approx([7.0, 3.2, 4.7, 1.4])


def test_load_wisconsin_drops_missing_rows(tmp_path):
    path = tmp_path / "wisconsin.data"
    path.write_text(
        "1000025,5,1,1,1,2,1,3,1,1,2\n"
        "1057013,8,4,5,1,2,?,7,3,1,4\n"
        "1017122,8,10,10,8,7,10,9,7,1,4\n"
    )
    ds = load_csv(str(path), WISCONSIN_SCHEMA)
    assert len(ds) == 2
    assert ds.dropped == 1
    assert ds.n_features == 9
    assert list(ds.labels) == [0, 1]


def test_csv_errors_carry_line_numbers(tmp_path):
    path = tmp_path / "bad.data"
    path.write_text("5.1,3.5,1.4,0.2,Iris-setosa\n5.1,abc,1.4,0.2,Iris-setosa\n")
    with pytest.raises(CsvFormatError) as exc:
        load_csv(str(path), IRIS_SCHEMA)
    assert exc.value.line == 2

    path.write_text("5.1,3.5,1.4,0.2,Iris-unknown\n")
    with pytest.raises(CsvFormatError) as exc:
        load_csv(str(path), IRIS_SCHEMA)
    assert exc.value.line == 1

    path.write_text("5.1,3.5\n")
    with pytest.raises(CsvFormatError):
        load_csv(str(path), IRIS_SCHEMA)


def test_csv_without_rows(tmp_path):
    path = tmp_path / "empty.data"
    path.write_text("\n\n")
    with pytest.raises(DatasetError):
        load_csv(str(path), IRIS_SCHEMA)


def test_csv_custom_delimiter(tmp_path):
    path = tmp_path / "semi.data"
    path.write_text("1;2;yes\n3;4;no\n")
    schema = CsvSchema(name="semi", feature_columns=(0, 1), label_column=2, labels={"no": 0, "yes": 1},
                       delimiter=";")
    ds = load_csv(str(path), schema)
    assert list(ds.labels) == [1, 0]


# datasets and splits

def test_xor_dataset():
    ds = xor_dataset()
    assert list(ds.labels) == [0, 1, 1, 0]
    assert ds.features.tolist() == [[0, 0], [0, 1], [1, 0], [1, 1]]


def test_dataset_validation():
    with pytest.raises(DatasetError):
        Dataset(features=np.zeros((3, 2)), labels=[0, 1], n_classes=2, provenance="x")
    with pytest.raises(DatasetError):
        Dataset(features=np.zeros((2, 2)), labels=[0, 2], n_classes=2, provenance="x")
    with pytest.raises(DatasetError):
        xor_dataset().image(0)


def test_stratified_k_fold_balances_classes():
    ds = _labelled([50, 50, 50])
    folds = stratified_k_fold(ds, 3, np.random.default_rng(0))
    assert len(folds) == 3
    combined = np.concatenate(folds)
    assert len(combined) == 150 and len(set(combined.tolist())) == 150
    for fold in folds:
        counts = np.bincount(ds.labels[fold], minlength=3)
        assert np.all(np.abs(counts - 50 / 3) <= 1)


def test_stratified_k_fold_uneven_classes():
    ds = _labelled([458, 241])
    folds = stratified_k_fold(ds, 3, np.random.default_rng(1))
    sizes = [len(f) for f in folds]
    assert max(sizes) - min(sizes) <= 1
    for c, total in enumerate([458, 241]):
        per_fold = [np.count_nonzero(ds.labels[f] == c) for f in folds]
        assert max(per_fold) - min(per_fold) <= 1
        assert sum(per_fold) == total


def test_stratified_k_fold_rejects_tiny_classes():
    with pytest.raises(DatasetError):
        stratified_k_fold(_labelled([10, 2]), 3, np.random.default_rng(0))
    with pytest.raises(DatasetError):
        stratified_k_fold(_labelled([10, 10]), 1, np.random.default_rng(0))


def test_stratified_holdout():
    ds = _labelled([600, 300, 100])
    train, validation = stratified_holdout(ds, 100, np.random.default_rng(0))
    assert len(validation) == 100
    assert len(np.intersect1d(train, validation)) == 0
    assert len(train) + len(validation) == len(ds)
    assert list(np.bincount(ds.labels[validation], minlength=3)) == [60, 30, 10]
    with pytest.raises(DatasetError):
        stratified_holdout(ds, len(ds), np.random.default_rng(0))


def test_stratified_split_dispatch():
    ds = _labelled([30, 30])
    assert len(stratified_split(ds, SplitPlan(kind="kfold", k=3), np.random.default_rng(0))) == 3
    train, validation = stratified_split(ds, SplitPlan(kind="holdout", validation_size=10), np.random.default_rng(0))
    assert len(validation) == 10
    with pytest.raises(ValueError):
        SplitPlan(kind="random")


def test_subset_is_stratified():
    ds = _labelled([500, 500])
    small = subset(ds, 100, np.random.default_rng(2))
    assert len(small) == 100
    assert list(small.class_counts()) == [50, 50]
    assert subset(ds, 5000, np.random.default_rng(2)) is ds


def test_minibatch_order_is_seeded():
    a = minibatch_iter(10, 4, (3, 1), epoch=2)
    b = minibatch_iter(10, 4, (3, 1), epoch=2)
    assert [x.tolist() for x in a] == [x.tolist() for x in b]
    assert [len(x) for x in a] == [4, 4, 2]
    assert sorted(np.concatenate(a).tolist()) == list(range(10))
    other = minibatch_iter(10, 4, (3, 1), epoch=3)
    assert [x.tolist() for x in other] != [x.tolist() for x in a]


def test_iterate_batches_crosses_epochs():
    stream = iterate_batches(xor_dataset(), 4, 7)
    epochs = [next(stream)[0] for _ in range(3)]
    assert epochs == [0, 1, 2]
    with pytest.raises(ValueError):
        minibatch_iter(4, 0, 0)
