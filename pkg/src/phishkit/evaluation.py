"""Preprocessing, splitting, and the four detection metrics.

The false-alarm rate defaults to the standard fp/(fp+tn); the "paper" mode
divides by the phishing count instead, for fidelity to a variant definition
that normalizes every rate by the positive class.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .dataset import Dataset
from .errors import (DegenerateTestSet, EmptyDataset, InsufficientData,
                     LengthMismatch, UnknownCategory)

PFA_STANDARD = "standard"
PFA_POSITIVES = "paper"


@dataclass(frozen=True)
class Standardizer:
    """Per-column affine transform fitted on training rows only."""

    means: np.ndarray
    stds: np.ndarray


def fit_standardizer(train: Dataset) -> Standardizer:
    """Population mean/std per column; constant columns get std 1 so the
    transform maps them to zero instead of dividing by zero."""
    train.require_rows()
    means = train.features.mean(axis=0)
    stds = train.features.std(axis=0)
    stds = np.where(stds == 0.0, 1.0, stds)
    return Standardizer(means=means, stds=stds)


def apply_standardizer(standardizer: Standardizer, data: Dataset) -> Dataset:
    scaled = (data.features - standardizer.means) / standardizer.stds
    return Dataset(scaled, data.labels)


@dataclass(frozen=True)
class SplitSpec:
    train_fraction: float = 0.7
    rng_seed: int = 0
    stratified: bool = True

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError("train_fraction must lie in (0, 1)")


def split_dataset(data: Dataset, spec: SplitSpec) -> tuple[Dataset, Dataset]:
    """Disjoint, exhaustive, seed-deterministic split; stratified keeps each
    class's train share within one row of the requested fraction."""
    data.require_rows()
    rng = np.random.default_rng(spec.rng_seed)
    train_idx: list[np.ndarray] = []
    test_idx: list[np.ndarray] = []
    if spec.stratified:
        for cls in (0, 1):
            members = np.flatnonzero(data.labels == cls)
            if members.size < 2:
                raise InsufficientData(
                    "stratified split needs >= 2 rows of class %d, got %d"
                    % (cls, members.size))
            order = rng.permutation(members)
            k = int(round(members.size * spec.train_fraction))
            train_idx.append(order[:k])
            test_idx.append(order[k:])
    else:
        if data.n_rows < 2:
            raise InsufficientData("need >= 2 rows to split")
        order = rng.permutation(data.n_rows)
        k = int(round(data.n_rows * spec.train_fraction))
        train_idx.append(order[:k])
        test_idx.append(order[k:])
    train = np.sort(np.concatenate(train_idx))
    test = np.sort(np.concatenate(test_idx))
    return data.subset(train), data.subset(test)


@dataclass(frozen=True)
class ConfusionMatrix:
    """Counts with phishing as the positive class."""

    tp: int
    fp: int
    tn: int
    fn: int

    def __post_init__(self):
        if min(self.tp, self.fp, self.tn, self.fn) < 0:
            raise ValueError("confusion counts must be non-negative")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


def confusion(predictions, labels) -> ConfusionMatrix:
    predictions = np.asarray(predictions, dtype=np.int64)
    labels = np.asarray(labels, dtype=np.int64)
    if predictions.shape != labels.shape:
        raise LengthMismatch(
            "%d predictions vs %d labels"
            % (predictions.shape[0], labels.shape[0]))
    return ConfusionMatrix(
        tp=int(np.sum((predictions == 1) & (labels == 1))),
        fp=int(np.sum((predictions == 1) & (labels == 0))),
        tn=int(np.sum((predictions == 0) & (labels == 0))),
        fn=int(np.sum((predictions == 0) & (labels == 1))),
    )


@dataclass(frozen=True)
class Metrics:
    p_d: float
    p_fa: float
    p_md: float
    accuracy: float

    def as_row(self) -> tuple[float, float, float, float]:
        return (self.p_d, self.p_fa, self.p_md, self.accuracy)


def compute_metrics(cm: ConfusionMatrix,
                    pfa_denominator: str = PFA_STANDARD) -> Metrics:
    """Detection rate, false-alarm rate, miss rate, and overall accuracy.

    p_md is stored as the exact float complement of p_d so the two always sum
    to exactly 1.0 (a rational identity that naive float division loses).
    """
    positives = cm.tp + cm.fn
    negatives = cm.fp + cm.tn
    if positives == 0 or negatives == 0:
        raise DegenerateTestSet(
            "confusion matrix needs both classes (positives=%d, negatives=%d)"
            % (positives, negatives))
    p_d = float(Fraction(cm.tp, positives))
    p_md = 1.0 - p_d
    if pfa_denominator == PFA_STANDARD:
        p_fa = float(Fraction(cm.fp, negatives))
    elif pfa_denominator == PFA_POSITIVES:
        p_fa = float(Fraction(cm.fp, positives))
    else:
        raise ValueError("unknown pfa denominator %r" % (pfa_denominator,))
    accuracy = float(Fraction(cm.tp + cm.tn, cm.total))
    return Metrics(p_d=p_d, p_fa=p_fa, p_md=p_md, accuracy=accuracy)


def fit_nominal_mapping(table) -> list[dict]:
    """Per-column category -> number mapping, categories numbered in sorted
    order so the same table always yields the same mapping."""
    if not table:
        raise EmptyDataset("cannot fit a mapping on an empty table")
    n_cols = len(table[0])
    mapping: list[dict] = []
    for col in range(n_cols):
        values = sorted({str(row[col]) for row in table})
        mapping.append({value: float(i) for i, value in enumerate(values)})
    return mapping


def encode_nominal(table, labels, mapping: list[dict] | None = None) -> Dataset:
    """Convert nominal columns to numbers.

    With mapping=None the mapping is derived from the table itself; passing a
    fitted mapping applies the training-time conversion to new data, raising
    UnknownCategory for unseen values.
    """
    if mapping is None:
        mapping = fit_nominal_mapping(table)
    rows = []
    for row in table:
        encoded = []
        for col, value in enumerate(row):
            key = str(value)
            if key not in mapping[col]:
                raise UnknownCategory(
                    "value %r unseen in column %d" % (key, col))
            encoded.append(mapping[col][key])
        rows.append(encoded)
    return Dataset(np.asarray(rows, dtype=np.float64), labels)
