"""Logistic regression trained by full-batch gradient descent.

The hypothesis is the sigmoid of an affine score; the loss is L2-regularized
cross-entropy with the bias left unpenalized. Weights start at zero, which
keeps training deterministic without a seed (the problem is convex).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..dataset import Dataset
from ..errors import DimensionMismatch, NonFiniteLoss, SingleClassData

CLAMP = 1e-12

DEFAULT_LEARNING_RATE = 0.1
DEFAULT_EPOCHS = 2000


def sigmoid(z):
    """Numerically stable logistic function, elementwise on arrays."""
    z = np.asarray(z, dtype=np.float64)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    expz = np.exp(z[~pos])
    out[~pos] = expz / (1.0 + expz)
    if out.ndim == 0:
        return float(out)
    return out


@dataclass
class LogisticModel:
    weights: np.ndarray  # bias first, then one weight per feature
    lam: float = 0.0
    learning_rate: float = DEFAULT_LEARNING_RATE
    epochs: int = DEFAULT_EPOCHS
    loss_history: list[float] = field(default_factory=list, repr=False)

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=np.float64)
        if self.weights.ndim != 1:
            raise ValueError("weights must be a flat vector")
        if not np.all(np.isfinite(self.weights)):
            raise ValueError("weights must be finite")

    @property
    def n_features(self) -> int:
        return self.weights.shape[0] - 1


def _check_row(model: LogisticModel, x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.shape[0] != model.n_features:
        raise DimensionMismatch(
            "expected %d features, got shape %r" % (model.n_features, x.shape))
    return x


def lr_hypothesis(model: LogisticModel, x) -> float:
    """P(phishing | x) under the model."""
    x = _check_row(model, x)
    return float(sigmoid(model.weights[0] + x @ model.weights[1:]))


def lr_predict(model: LogisticModel, x) -> int:
    """1 above probability 0.5; exactly 0.5 resolves to 0."""
    return int(lr_hypothesis(model, x) > 0.5)


def lr_cost(weights, X, y, lam: float) -> float:
    """Regularized cross-entropy; hypothesis clamped away from 0/1 in the logs."""
    weights = np.asarray(weights, dtype=np.float64)
    m = X.shape[0]
    h = sigmoid(weights[0] + X @ weights[1:])
    h = np.clip(h, CLAMP, 1.0 - CLAMP)
    data_term = -np.mean(y * np.log(h) + (1.0 - y) * np.log(1.0 - h))
    reg_term = lam / (2.0 * m) * float(weights[1:] @ weights[1:])
    return float(data_term + reg_term)


def lr_gradient(weights, X, y, lam: float) -> np.ndarray:
    """Analytic gradient of lr_cost with respect to all weights."""
    weights = np.asarray(weights, dtype=np.float64)
    m = X.shape[0]
    h = sigmoid(weights[0] + X @ weights[1:])
    residual = h - y
    grad = np.empty_like(weights)
    grad[0] = residual.sum() / m
    grad[1:] = X.T @ residual / m + (lam / m) * weights[1:]
    return grad


def lr_train(data: Dataset, lam: float = 0.0,
             learning_rate: float = DEFAULT_LEARNING_RATE,
             epochs: int = DEFAULT_EPOCHS) -> LogisticModel:
    """Full-batch gradient descent from zero weights.

    Raises SingleClassData when only one class is present and NonFiniteLoss
    when the loss diverges (learning rate too large for the given lambda).
    """
    if not data.has_both_classes():
        raise SingleClassData("training data must contain both classes")
    if lam < 0:
        raise ValueError("lambda must be non-negative")
    if learning_rate <= 0 or epochs <= 0:
        raise ValueError("learning_rate and epochs must be positive")

    X = data.features
    y = data.labels.astype(np.float64)
    weights = np.zeros(data.n_features + 1)
    losses: list[float] = []
    for _ in range(epochs):
        weights = weights - learning_rate * lr_gradient(weights, X, y, lam)
        loss = lr_cost(weights, X, y, lam)
        if not np.isfinite(loss) or not np.all(np.isfinite(weights)):
            raise NonFiniteLoss(
                "loss diverged at epoch %d; lower the learning rate"
                % (len(losses) + 1,))
        losses.append(loss)
    return LogisticModel(weights=weights, lam=lam,
                         learning_rate=learning_rate, epochs=epochs,
                         loss_history=losses)
