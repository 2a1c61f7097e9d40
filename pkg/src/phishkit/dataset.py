"""Feature matrix plus binary labels, the unit every classifier trains on."""

from __future__ import annotations

import numpy as np

from .errors import EmptyDataset, LengthMismatch


class Dataset:
    """n rows of real-valued features with labels in {0, 1} (1 = phishing)."""

    def __init__(self, features, labels):
        features = np.asarray(features, dtype=np.float64)
        labels = np.asarray(labels, dtype=np.int64)
        if features.ndim != 2:
            raise ValueError("features must be a 2-D matrix")
        if labels.ndim != 1:
            raise ValueError("labels must be a flat sequence")
        if features.shape[0] != labels.shape[0]:
            raise LengthMismatch(
                "%d feature rows vs %d labels"
                % (features.shape[0], labels.shape[0]))
        if not np.all(np.isfinite(features)):
            raise ValueError("features contain non-finite entries")
        if labels.size and not np.isin(labels, (0, 1)).all():
            raise ValueError("labels must be 0 or 1")
        self.features = features
        self.labels = labels

    @property
    def n_rows(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    def class_counts(self) -> tuple[int, int]:
        return int(np.sum(self.labels == 0)), int(np.sum(self.labels == 1))

    def has_both_classes(self) -> bool:
        counts = self.class_counts()
        return counts[0] > 0 and counts[1] > 0

    def signed_labels(self) -> np.ndarray:
        """Labels as {-1, +1} with +1 = phishing, the SVM's view."""
        return np.where(self.labels == 1, 1.0, -1.0)

    def subset(self, indices) -> "Dataset":
        indices = np.asarray(indices, dtype=np.int64)
        return Dataset(self.features[indices], self.labels[indices])

    def require_rows(self):
        if self.n_rows == 0:
            raise EmptyDataset("dataset has no rows")

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return (self.features.shape == other.features.shape
                and np.array_equal(self.features, other.features)
                and np.array_equal(self.labels, other.labels))

    def __repr__(self):
        n0, n1 = self.class_counts()
        return "Dataset(%d rows, %d features, %d legitimate / %d phishing)" % (
            self.n_rows, self.n_features, n0, n1)
