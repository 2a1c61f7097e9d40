"""Experiment grids: regularization sweeps, architecture and kernel grids,
and the best-per-family comparison, all on a single seeded split.

Every cell standardizes with statistics fitted on the training portion only,
trains one model, and reports the four metrics on the held-out portion. Grid
defaults are sized for desk-scale corpora (thousands of rows), not for the
op-level training defaults.
"""

from __future__ import annotations

from dataclasses import dataclass

from .classifiers import (KernelSpec, ann_predict, ann_train, lr_predict,
                          lr_train, svm_predict_batch, svm_train)
from .dataset import Dataset
from .errors import PhishkitError
from .evaluation import (Metrics, SplitSpec, apply_standardizer,
                         compute_metrics, confusion, fit_standardizer,
                         split_dataset)

GRID_ARCHITECTURES = ((100,), (100, 100))
GRID_ACTIVATIONS = ("relu", "tanh", "sigmoid")
COMPARISON_KERNELS = (
    ("linear", KernelSpec(kind="linear")),
    ("cubic", KernelSpec(kind="polynomial", degree=3)),
    ("rbf", KernelSpec(kind="rbf")),
    ("sigmoid", KernelSpec(kind="sigmoid")),
)
DEFAULT_LAMBDA_GRID = (0.0, 0.006, 0.06, 0.1, 0.4, 0.7, 1.0)

# Grid-scale training defaults; plenty for the separable synthetic corpora.
GRID_ANN_EPOCHS = 300
GRID_ANN_LEARNING_RATE = 0.1
GRID_LR_EPOCHS = 2000
GRID_LR_LEARNING_RATE = 0.1


@dataclass(frozen=True)
class SweepResult:
    parameter_values: tuple[float, ...]
    metrics_per_value: tuple[Metrics, ...]

    def __post_init__(self):
        if len(self.parameter_values) != len(self.metrics_per_value):
            raise ValueError("one metrics row per parameter value required")
        values = self.parameter_values
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ValueError("parameter values must be strictly increasing")


@dataclass(frozen=True)
class ExperimentRow:
    name: str
    hyperparameters: dict
    metrics: Metrics


def prepare_split(data: Dataset, split: SplitSpec):
    """Split, then standardize both sides with train-fitted statistics."""
    train, test = split_dataset(data, split)
    standardizer = fit_standardizer(train)
    return (apply_standardizer(standardizer, train),
            apply_standardizer(standardizer, test), standardizer)


def evaluate_model(kind: str, model, test: Dataset,
                   pfa_denominator: str = "standard") -> Metrics:
    if kind == "svm":
        predictions = svm_predict_batch(model, test.features)
    elif kind == "lr":
        predictions = [lr_predict(model, row) for row in test.features]
    elif kind == "ann":
        predictions = [ann_predict(model, row) for row in test.features]
    else:
        raise ValueError("unknown model kind %r" % (kind,))
    return compute_metrics(confusion(predictions, test.labels),
                           pfa_denominator)


def _train_for_lambda(kind, train, lam, learning_rate, epochs, layer_sizes,
                      activation, rng_seed):
    if kind == "lr":
        return lr_train(train, lam=lam, learning_rate=learning_rate,
                        epochs=epochs)
    if kind == "ann":
        sizes = [train.n_features, *layer_sizes, 1]
        return ann_train(train, sizes, activation=activation, lam=lam,
                         learning_rate=learning_rate, epochs=epochs,
                         rng_seed=rng_seed)
    raise ValueError("regularization sweeps apply to lr or ann, not %r"
                     % (kind,))


def regularization_sweep(data: Dataset, kind: str, lambda_grid,
                         split: SplitSpec,
                         learning_rate: float = GRID_LR_LEARNING_RATE,
                         epochs: int = GRID_LR_EPOCHS,
                         hidden_layers=(100,), activation: str = "relu",
                         rng_seed: int = 0) -> SweepResult:
    """Train one model per penalty value on the same split and collect the
    four metrics. Training failures are re-raised naming the offending value."""
    grid = tuple(float(v) for v in lambda_grid)
    if not grid:
        raise ValueError("lambda grid must be non-empty")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("lambda grid must be strictly increasing")
    train, test, _ = prepare_split(data, split)
    rows = []
    for lam in grid:
        try:
            model = _train_for_lambda(kind, train, lam, learning_rate, epochs,
                                      hidden_layers, activation, rng_seed)
        except PhishkitError as exc:
            raise type(exc)("at lambda=%g: %s" % (lam, exc)) from exc
        rows.append(evaluate_model(kind, model, test))
    return SweepResult(parameter_values=grid, metrics_per_value=tuple(rows))


def ann_grid(data: Dataset, split: SplitSpec,
             architectures=GRID_ARCHITECTURES,
             activations=GRID_ACTIVATIONS, lam: float = 0.0,
             learning_rate: float = GRID_ANN_LEARNING_RATE,
             epochs: int = GRID_ANN_EPOCHS,
             rng_seed: int = 0) -> list[ExperimentRow]:
    """Every architecture x activation cell on one split, best cell last used
    by the family comparison."""
    train, test, _ = prepare_split(data, split)
    rows = []
    for hidden in architectures:
        for activation in activations:
            sizes = [train.n_features, *hidden, 1]
            model = ann_train(train, sizes, activation=activation, lam=lam,
                              learning_rate=learning_rate, epochs=epochs,
                              rng_seed=rng_seed)
            rows.append(ExperimentRow(
                name="(%s) / %s" % (",".join(map(str, hidden)), activation),
                hyperparameters={"hidden_layers": tuple(hidden),
                                 "activation": activation, "lam": lam,
                                 "learning_rate": learning_rate,
                                 "epochs": epochs, "rng_seed": rng_seed},
                metrics=evaluate_model("ann", model, test),
            ))
    return rows


def kernel_comparison(data: Dataset, split: SplitSpec,
                      kernels=COMPARISON_KERNELS, c_penalty: float = 1.0,
                      tol: float = 1e-3) -> list[ExperimentRow]:
    """One SVM per kernel on one split."""
    train, test, _ = prepare_split(data, split)
    rows = []
    for name, spec in kernels:
        model = svm_train(train, spec, c_penalty=c_penalty, tol=tol)
        rows.append(ExperimentRow(
            name="%s svm" % name,
            hyperparameters={"kernel": spec, "c_penalty": c_penalty,
                             "tol": tol},
            metrics=evaluate_model("svm", model, test),
        ))
    return rows


def best_row(rows: list[ExperimentRow]) -> ExperimentRow:
    """Highest accuracy; earlier rows win ties so the result is deterministic."""
    best = rows[0]
    for row in rows[1:]:
        if row.metrics.accuracy > best.metrics.accuracy:
            best = row
    return best


def model_comparison(data: Dataset, split: SplitSpec,
                     lambda_grid=DEFAULT_LAMBDA_GRID,
                     rng_seed: int = 0) -> list[ExperimentRow]:
    """Best configuration per family: ANN by grid cell, SVM by kernel, LR by
    penalty value, all selected by accuracy on the shared held-out split."""
    ann_best = best_row(ann_grid(data, split, rng_seed=rng_seed))

    svm_best = best_row(kernel_comparison(data, split))

    sweep = regularization_sweep(data, "lr", lambda_grid, split)
    lr_by_acc = list(zip(sweep.parameter_values, sweep.metrics_per_value))
    lr_lam, lr_metrics = lr_by_acc[0]
    for lam, metrics in lr_by_acc[1:]:
        if metrics.accuracy > lr_metrics.accuracy:
            lr_lam, lr_metrics = lam, metrics

    return [
        ExperimentRow(name="ann %s" % ann_best.name,
                      hyperparameters=ann_best.hyperparameters,
                      metrics=ann_best.metrics),
        ExperimentRow(name=svm_best.name,
                      hyperparameters=svm_best.hyperparameters,
                      metrics=svm_best.metrics),
        ExperimentRow(name="lr lambda=%g" % lr_lam,
                      hyperparameters={"lam": lr_lam,
                                       "learning_rate": GRID_LR_LEARNING_RATE,
                                       "epochs": GRID_LR_EPOCHS},
                      metrics=lr_metrics),
    ]


def sweep_to_csv(sweep: SweepResult) -> str:
    lines = ["param,p_d,p_fa,p_md,accuracy"]
    for value, metrics in zip(sweep.parameter_values,
                              sweep.metrics_per_value):
        lines.append("%g,%.4f,%.4f,%.4f,%.4f"
                     % (value, *metrics.as_row()))
    return "\n".join(lines) + "\n"


def rows_to_csv(rows: list[ExperimentRow]) -> str:
    lines = ["param,p_d,p_fa,p_md,accuracy"]
    for row in rows:
        lines.append("%s,%.4f,%.4f,%.4f,%.4f"
                     % (row.name.replace(",", ";"), *row.metrics.as_row()))
    return "\n".join(lines) + "\n"


def rows_to_report(title: str, rows: list[ExperimentRow]) -> str:
    """Plain-text table: one algorithm per line with percentage metrics."""
    width = max([len(row.name) for row in rows] + [len("algorithm")])
    header = "%-*s  %8s %8s %8s %9s" % (width, "algorithm", "p_d", "p_fa",
                                        "p_md", "accuracy")
    lines = [title, "=" * len(header), header, "-" * len(header)]
    for row in rows:
        p_d, p_fa, p_md, acc = row.metrics.as_row()
        lines.append("%-*s  %7.2f%% %7.2f%% %7.2f%% %8.2f%%"
                     % (width, row.name, 100 * p_d, 100 * p_fa, 100 * p_md,
                        100 * acc))
    return "\n".join(lines) + "\n"
