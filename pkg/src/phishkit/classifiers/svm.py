"""Soft-margin kernel SVM trained by sequential minimal optimization.

The dual is solved by repeatedly optimizing one pair of multipliers
analytically (Platt's scheme) with fully deterministic pair selection, so the
same data always produces the same model. The decision function is the usual
support-vector expansion; a score of exactly zero classifies as phishing.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from ..dataset import Dataset
from ..errors import ConvergenceWarning, DimensionMismatch, SingleClassData

KERNEL_KINDS = ("linear", "polynomial", "rbf", "sigmoid")

DEFAULT_C = 1.0
DEFAULT_TOL = 1e-3
DEFAULT_MAX_SWEEPS = 5000
SUPPORT_ALPHA_MIN = 1e-8
_STEP_EPS = 1e-12


@dataclass(frozen=True)
class KernelSpec:
    """Kernel family and shape parameters.

    gamma defaults to 1/10 (one over the feature count); coef0 defaults to 1
    for the polynomial kernel and 0 for the sigmoid kernel.
    """

    kind: str = "rbf"
    degree: int = 3
    gamma: float = 0.1
    coef0: float | None = None

    def __post_init__(self):
        if self.kind not in KERNEL_KINDS:
            raise ValueError("unknown kernel kind %r" % (self.kind,))
        if self.degree < 1:
            raise ValueError("degree must be >= 1")
        if not (np.isfinite(self.gamma) and self.gamma > 0):
            raise ValueError("gamma must be finite and positive")
        if self.coef0 is None:
            object.__setattr__(
                self, "coef0", 1.0 if self.kind == "polynomial" else 0.0)


def kernel_matrix(spec: KernelSpec, A, B) -> np.ndarray:
    """K[i, j] = k(A[i], B[j]) for row matrices A and B."""
    A = np.atleast_2d(np.asarray(A, dtype=np.float64))
    B = np.atleast_2d(np.asarray(B, dtype=np.float64))
    if A.shape[1] != B.shape[1]:
        raise DimensionMismatch(
            "kernel needs equal dimensions, got %d vs %d"
            % (A.shape[1], B.shape[1]))
    inner = A @ B.T
    if spec.kind == "linear":
        return inner
    if spec.kind == "polynomial":
        return (spec.gamma * inner + spec.coef0) ** spec.degree
    if spec.kind == "sigmoid":
        return np.tanh(spec.gamma * inner + spec.coef0)
    # rbf; clip tiny negative squared distances from cancellation so that
    # k(x, x) is exactly 1.
    sq_a = np.sum(A * A, axis=1)[:, np.newaxis]
    sq_b = np.sum(B * B, axis=1)[np.newaxis, :]
    sq_dist = np.maximum(sq_a + sq_b - 2.0 * inner, 0.0)
    return np.exp(-spec.gamma * sq_dist)


def kernel_eval(spec: KernelSpec, a, b) -> float:
    """k(a, b) for two single rows."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise DimensionMismatch(
            "kernel needs equal dimensions, got %r vs %r" % (a.shape, b.shape))
    return float(kernel_matrix(spec, a[np.newaxis, :], b[np.newaxis, :])[0, 0])


@dataclass
class SvmModel:
    """Dual solution: all training multipliers plus the support expansion.

    alphas holds one multiplier per training row (zeros included); the
    support_* arrays keep just the rows with alpha above SUPPORT_ALPHA_MIN,
    which is all the decision function needs. A model loaded from disk only
    carries the support expansion.
    """

    kernel: KernelSpec = field(default_factory=KernelSpec)
    c_penalty: float = DEFAULT_C
    alphas: np.ndarray = field(default_factory=lambda: np.zeros(0))
    bias: float = 0.0
    support_vectors: np.ndarray = field(
        default_factory=lambda: np.zeros((0, 0)))
    support_labels: np.ndarray = field(default_factory=lambda: np.zeros(0))
    support_alphas: np.ndarray = field(default_factory=lambda: np.zeros(0))
    converged: bool = True

    def __post_init__(self):
        self.alphas = np.asarray(self.alphas, dtype=np.float64)
        self.support_vectors = np.asarray(self.support_vectors,
                                          dtype=np.float64)
        self.support_labels = np.asarray(self.support_labels,
                                         dtype=np.float64)
        self.support_alphas = np.asarray(self.support_alphas,
                                         dtype=np.float64)
        if self.c_penalty <= 0:
            raise ValueError("c_penalty must be positive")

    @property
    def n_features(self) -> int:
        return self.support_vectors.shape[1] if self.support_vectors.size else 0


def svm_decision(model: SvmModel, x) -> float:
    """Signed score: sum of alpha_i y_i k(x_i, x) over support vectors, plus bias."""
    x = np.asarray(x, dtype=np.float64)
    if model.support_alphas.size == 0:
        return float(model.bias)
    if x.ndim != 1 or x.shape[0] != model.n_features:
        raise DimensionMismatch(
            "expected %d features, got shape %r" % (model.n_features, x.shape))
    k = kernel_matrix(model.kernel, model.support_vectors,
                      x[np.newaxis, :])[:, 0]
    return float(np.sum(model.support_alphas * model.support_labels * k)
                 + model.bias)


def svm_predict(model: SvmModel, x) -> int:
    """Phishing on or above the separating surface (decision >= 0)."""
    return int(svm_decision(model, x) >= 0.0)


def svm_decision_batch(model: SvmModel, X) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if model.support_alphas.size == 0:
        return np.full(X.shape[0], model.bias)
    k = kernel_matrix(model.kernel, X, model.support_vectors)
    return k @ (model.support_alphas * model.support_labels) + model.bias


def svm_predict_batch(model: SvmModel, X) -> np.ndarray:
    return (svm_decision_batch(model, X) >= 0.0).astype(np.int64)


class _Smo:
    """One SMO training run over a precomputed Gram matrix."""

    def __init__(self, K, y, c_penalty, tol):
        self.K = K
        self.y = y
        self.C = c_penalty
        self.tol = tol
        self.n = y.shape[0]
        self.alpha = np.zeros(self.n)
        self.b = 0.0
        # Error cache: E_i = f(x_i) - y_i; with all alphas zero f is zero.
        self.errors = -y.copy()

    def _take_step(self, i1: int, i2: int) -> bool:
        if i1 == i2:
            return False
        a1, a2 = self.alpha[i1], self.alpha[i2]
        y1, y2 = self.y[i1], self.y[i2]
        e1, e2 = self.errors[i1], self.errors[i2]
        s = y1 * y2
        if s > 0:
            low = max(0.0, a1 + a2 - self.C)
            high = min(self.C, a1 + a2)
        else:
            low = max(0.0, a2 - a1)
            high = min(self.C, self.C + a2 - a1)
        if high - low < _STEP_EPS:
            return False
        k11 = self.K[i1, i1]
        k12 = self.K[i1, i2]
        k22 = self.K[i2, i2]
        eta = k11 + k22 - 2.0 * k12
        if eta > 0:
            a2_new = a2 + y2 * (e1 - e2) / eta
            a2_new = min(max(a2_new, low), high)
        else:
            # Flat or concave direction (possible with the sigmoid kernel):
            # evaluate the dual objective at both clip ends and move to the
            # better one. e - b is the kernel expansion minus the label.
            f1 = y1 * (e1 - self.b) - a1 * k11 - s * a2 * k12
            f2 = y2 * (e2 - self.b) - s * a1 * k12 - a2 * k22
            l1 = a1 + s * (a2 - low)
            h1 = a1 + s * (a2 - high)
            obj_low = (l1 * f1 + low * f2 + 0.5 * l1 * l1 * k11
                       + 0.5 * low * low * k22 + s * low * l1 * k12)
            obj_high = (h1 * f1 + high * f2 + 0.5 * h1 * h1 * k11
                        + 0.5 * high * high * k22 + s * high * h1 * k12)
            if obj_low < obj_high - _STEP_EPS:
                a2_new = low
            elif obj_low > obj_high + _STEP_EPS:
                a2_new = high
            else:
                return False
        if abs(a2_new - a2) < _STEP_EPS * (a2_new + a2 + _STEP_EPS):
            return False
        a1_new = a1 + s * (a2 - a2_new)

        # Choose the threshold that zeroes the error of an interior multiplier
        # (decision convention: f(x) = sum alpha_i y_i k(x_i, x) + b).
        d1 = y1 * (a1_new - a1)
        d2 = y2 * (a2_new - a2)
        b1 = self.b - e1 - d1 * k11 - d2 * k12
        b2 = self.b - e2 - d1 * k12 - d2 * k22
        if 0.0 < a1_new < self.C:
            b_new = b1
        elif 0.0 < a2_new < self.C:
            b_new = b2
        else:
            b_new = 0.5 * (b1 + b2)

        self.errors += d1 * self.K[i1] + d2 * self.K[i2] + (b_new - self.b)
        self.alpha[i1] = a1_new
        self.alpha[i2] = a2_new
        self.b = b_new
        return True

    def _examine(self, i2: int) -> int:
        y2 = self.y[i2]
        a2 = self.alpha[i2]
        r2 = self.errors[i2] * y2
        if not ((r2 < -self.tol and a2 < self.C)
                or (r2 > self.tol and a2 > 0)):
            return 0
        nonbound = np.flatnonzero((self.alpha > 0) & (self.alpha < self.C))
        if nonbound.size > 1:
            # Second-choice heuristic: the partner with the largest |E1 - E2|.
            i1 = int(nonbound[np.argmax(np.abs(self.errors[nonbound]
                                               - self.errors[i2]))])
            if self._take_step(i1, i2):
                return 1
        for i1 in nonbound:
            if self._take_step(int(i1), i2):
                return 1
        for i1 in range(self.n):
            if self._take_step(i1, i2):
                return 1
        return 0

    def run(self, max_sweeps: int) -> bool:
        num_changed = 0
        examine_all = True
        for _ in range(max_sweeps):
            num_changed = 0
            if examine_all:
                for i2 in range(self.n):
                    num_changed += self._examine(i2)
            else:
                for i2 in np.flatnonzero((self.alpha > 0)
                                         & (self.alpha < self.C)):
                    num_changed += self._examine(int(i2))
            if examine_all:
                if num_changed == 0:
                    return True
                examine_all = False
            elif num_changed == 0:
                examine_all = True
        return False


def svm_train(data: Dataset, spec: KernelSpec | None = None,
              c_penalty: float = DEFAULT_C, tol: float = DEFAULT_TOL,
              max_sweeps: int = DEFAULT_MAX_SWEEPS) -> SvmModel:
    """Solve the soft-margin dual by SMO and keep the support vectors.

    If the sweep budget runs out before the KKT conditions hold within tol
    (conceivable with the non-PSD sigmoid kernel), the best-so-far model is
    returned with converged=False and a ConvergenceWarning is emitted.
    """
    if spec is None:
        spec = KernelSpec()
    if not data.has_both_classes():
        raise SingleClassData("training data must contain both classes")
    if c_penalty <= 0:
        raise ValueError("c_penalty must be positive")
    if tol <= 0:
        raise ValueError("tol must be positive")

    y = data.signed_labels()
    K = kernel_matrix(spec, data.features, data.features)
    smo = _Smo(K, y, c_penalty, tol)
    converged = smo.run(max_sweeps)
    if not converged:
        warnings.warn(
            "SMO stopped after %d sweeps with KKT violations above %g; "
            "returning best-so-far model" % (max_sweeps, tol),
            ConvergenceWarning)

    keep = np.flatnonzero(smo.alpha > SUPPORT_ALPHA_MIN)
    return SvmModel(
        kernel=spec,
        c_penalty=c_penalty,
        alphas=smo.alpha,
        bias=smo.b,
        support_vectors=data.features[keep],
        support_labels=y[keep],
        support_alphas=smo.alpha[keep],
        converged=converged,
    )


def kkt_residual(model: SvmModel, data: Dataset) -> float:
    """Largest violation of the KKT optimality conditions on the training set.

    For each row: alpha == 0 demands y*f >= 1, alpha == C demands y*f <= 1,
    interior alphas demand y*f == 1. Requires the full per-row alphas, so the
    data must be the set the model was trained on.
    """
    if model.alphas.shape[0] != data.n_rows:
        raise DimensionMismatch(
            "model holds %d alphas but the data has %d rows"
            % (model.alphas.shape[0], data.n_rows))
    margins = data.signed_labels() * svm_decision_batch(model, data.features)

    residual = 0.0
    for alpha, margin in zip(model.alphas, margins):
        if alpha <= SUPPORT_ALPHA_MIN:
            residual = max(residual, 1.0 - margin)
        elif alpha >= model.c_penalty - SUPPORT_ALPHA_MIN:
            residual = max(residual, margin - 1.0)
        else:
            residual = max(residual, abs(margin - 1.0))
    return residual
