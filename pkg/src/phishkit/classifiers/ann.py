"""Feed-forward network trained by backpropagation and full-batch descent.

Hidden layers use one configurable activation (relu, tanh or sigmoid); the
output layer is always a single sigmoid unit read as P(phishing). The cost is
cross-entropy plus an L2 penalty over connection weights only; biases are
never regularized.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..dataset import Dataset
from ..errors import DimensionMismatch, NonFiniteLoss, SingleClassData

CLAMP = 1e-12

ACTIVATIONS = ("relu", "tanh", "sigmoid")
DEFAULT_LEARNING_RATE = 0.01
DEFAULT_EPOCHS = 2000
INIT_SCALE = 0.5  # weights start uniform in [-INIT_SCALE, INIT_SCALE]


def _sigmoid(z):
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    expz = np.exp(z[~pos])
    out[~pos] = expz / (1.0 + expz)
    return out


def _activate(name: str, z):
    if name == "relu":
        return np.maximum(z, 0.0)
    if name == "tanh":
        return np.tanh(z)
    if name == "sigmoid":
        return _sigmoid(z)
    raise ValueError("unknown activation %r" % (name,))


def _activate_grad(name: str, a):
    # All three derivatives follow from the activation output alone; for relu
    # the output shares the sign of the pre-activation (gate 0 at exactly 0).
    if name == "relu":
        return (a > 0.0).astype(np.float64)
    if name == "tanh":
        return 1.0 - a * a
    if name == "sigmoid":
        return a * (1.0 - a)
    raise ValueError("unknown activation %r" % (name,))


@dataclass
class AnnModel:
    layer_sizes: list[int]
    activation: str
    weights: list[np.ndarray]  # weights[l]: (layer_sizes[l+1], layer_sizes[l])
    biases: list[np.ndarray]   # biases[l]: (layer_sizes[l+1],)
    lam: float = 0.0
    learning_rate: float = DEFAULT_LEARNING_RATE
    epochs: int = DEFAULT_EPOCHS
    rng_seed: int = 0
    loss_history: list[float] = field(default_factory=list, repr=False)

    def __post_init__(self):
        self.layer_sizes = [int(s) for s in self.layer_sizes]
        if len(self.layer_sizes) < 2:
            raise ValueError("need at least input and output layers")
        if self.layer_sizes[-1] != 1:
            raise ValueError("output layer must hold a single unit")
        if self.activation not in ACTIVATIONS:
            raise ValueError("unknown activation %r" % (self.activation,))
        self.weights = [np.asarray(w, dtype=np.float64) for w in self.weights]
        self.biases = [np.asarray(b, dtype=np.float64) for b in self.biases]
        expected = list(zip(self.layer_sizes[1:], self.layer_sizes[:-1]))
        shapes = [w.shape for w in self.weights]
        if shapes != expected:
            raise ValueError(
                "weight shapes %r inconsistent with layers %r"
                % (shapes, self.layer_sizes))
        if [b.shape for b in self.biases] != [(s,) for s in self.layer_sizes[1:]]:
            raise ValueError("bias shapes inconsistent with layers")

    @property
    def n_features(self) -> int:
        return self.layer_sizes[0]


def _forward_batch(model: AnnModel, X: np.ndarray) -> list[np.ndarray]:
    """Per-layer activations for a batch; index 0 is the input itself."""
    activations = [X]
    last = len(model.weights) - 1
    for l, (W, b) in enumerate(zip(model.weights, model.biases)):
        z = activations[-1] @ W.T + b
        name = "sigmoid" if l == last else model.activation
        activations.append(_activate(name, z))
    return activations


def ann_forward(model: AnnModel, x) -> tuple[list[np.ndarray], float]:
    """Activations of every layer for one input row, plus the output probability."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.shape[0] != model.n_features:
        raise DimensionMismatch(
            "expected %d features, got shape %r" % (model.n_features, x.shape))
    batch = _forward_batch(model, x[np.newaxis, :])
    activations = [a[0] for a in batch]
    return activations, float(activations[-1][0])


def ann_predict(model: AnnModel, x) -> int:
    """1 above probability 0.5; exactly 0.5 resolves to 0."""
    _, prob = ann_forward(model, x)
    return int(prob > 0.5)


def _weight_penalty(model: AnnModel, m: int) -> float:
    return model.lam / (2.0 * m) * sum(
        float(np.sum(W * W)) for W in model.weights)


def ann_cost(model: AnnModel, data: Dataset) -> float:
    """Cross-entropy over the dataset plus the L2 penalty on connection weights."""
    data.require_rows()
    X = data.features
    y = data.labels.astype(np.float64)
    h = _forward_batch(model, X)[-1][:, 0]
    h = np.clip(h, CLAMP, 1.0 - CLAMP)
    data_term = -np.mean(y * np.log(h) + (1.0 - y) * np.log(1.0 - h))
    return float(data_term) + _weight_penalty(model, data.n_rows)


def ann_gradients(model: AnnModel,
                  data: Dataset) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Backpropagated gradients of ann_cost for every weight matrix and bias."""
    X = data.features
    y = data.labels.astype(np.float64)
    m = data.n_rows
    activations = _forward_batch(model, X)

    grads_w = [np.empty_like(W) for W in model.weights]
    grads_b = [np.empty_like(b) for b in model.biases]

    # Sigmoid output with cross-entropy: the delta collapses to (h - y) / m.
    delta = (activations[-1] - y[:, np.newaxis]) / m
    for l in range(len(model.weights) - 1, -1, -1):
        grads_w[l] = delta.T @ activations[l] + (model.lam / m) * model.weights[l]
        grads_b[l] = delta.sum(axis=0)
        if l > 0:
            upstream = delta @ model.weights[l]
            delta = upstream * _activate_grad(model.activation, activations[l])
    return grads_w, grads_b


def init_parameters(layer_sizes: list[int],
                    rng_seed: int) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Seeded uniform weights in [-0.5, 0.5]; biases zero."""
    rng = np.random.default_rng(rng_seed)
    weights = []
    biases = []
    for fan_in, fan_out in zip(layer_sizes[:-1], layer_sizes[1:]):
        weights.append(rng.uniform(-INIT_SCALE, INIT_SCALE, (fan_out, fan_in)))
        biases.append(np.zeros(fan_out))
    return weights, biases


def ann_train(data: Dataset, layer_sizes: list[int], activation: str = "relu",
              lam: float = 0.0, learning_rate: float = DEFAULT_LEARNING_RATE,
              epochs: int = DEFAULT_EPOCHS, rng_seed: int = 0) -> AnnModel:
    """Full-batch gradient descent on the regularized cross-entropy.

    Deterministic given rng_seed. Raises SingleClassData or NonFiniteLoss
    under the same conditions as logistic training.
    """
    if not data.has_both_classes():
        raise SingleClassData("training data must contain both classes")
    if layer_sizes[0] != data.n_features:
        raise DimensionMismatch(
            "input layer %d does not match %d features"
            % (layer_sizes[0], data.n_features))
    if lam < 0:
        raise ValueError("lambda must be non-negative")
    if learning_rate <= 0 or epochs <= 0:
        raise ValueError("learning_rate and epochs must be positive")

    weights, biases = init_parameters(layer_sizes, rng_seed)
    model = AnnModel(layer_sizes=list(layer_sizes), activation=activation,
                     weights=weights, biases=biases, lam=lam,
                     learning_rate=learning_rate, epochs=epochs,
                     rng_seed=rng_seed)
    losses: list[float] = []
    for _ in range(epochs):
        grads_w, grads_b = ann_gradients(model, data)
        for l in range(len(model.weights)):
            model.weights[l] = model.weights[l] - learning_rate * grads_w[l]
            model.biases[l] = model.biases[l] - learning_rate * grads_b[l]
        loss = ann_cost(model, data)
        if not np.isfinite(loss):
            raise NonFiniteLoss(
                "loss diverged at epoch %d; lower the learning rate"
                % (len(losses) + 1,))
        losses.append(loss)
    model.loss_history = losses
    return model
