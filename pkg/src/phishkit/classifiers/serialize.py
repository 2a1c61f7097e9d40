"""Versioned JSON model files, lossless for float64 parameters.

Parameter arrays are written as decimal strings with 17 significant digits so
a reloaded model reproduces bit-identical predictions. A fitted standardizer
can ride along with the model, since predictions are meaningless without the
scaling used at training time.
"""

from __future__ import annotations

import json

import numpy as np

from ..errors import CorruptModelFile, UnsupportedVersion
from .ann import AnnModel
from .logistic import LogisticModel
from .svm import KernelSpec, SvmModel

FORMAT_VERSION = 1


def _encode_array(values) -> list:
    arr = np.asarray(values, dtype=np.float64)
    flat = [format(v, ".17e") for v in arr.reshape(-1)]
    return [list(arr.shape), flat]


def _decode_array(entry) -> np.ndarray:
    try:
        shape, flat = entry
        arr = np.array([float(v) for v in flat], dtype=np.float64)
        return arr.reshape([int(s) for s in shape])
    except (TypeError, ValueError) as exc:
        raise CorruptModelFile("bad parameter array: %s" % exc)


def _standardizer_doc(standardizer):
    if standardizer is None:
        return None
    return {"means": _encode_array(standardizer.means),
            "stds": _encode_array(standardizer.stds)}


def _model_doc(model) -> dict:
    if isinstance(model, LogisticModel):
        return {
            "kind": "lr",
            "hyperparameters": {
                "lam": model.lam,
                "learning_rate": model.learning_rate,
                "epochs": model.epochs,
            },
            "parameters": {"weights": _encode_array(model.weights)},
        }
    if isinstance(model, AnnModel):
        return {
            "kind": "ann",
            "hyperparameters": {
                "layer_sizes": model.layer_sizes,
                "activation": model.activation,
                "lam": model.lam,
                "learning_rate": model.learning_rate,
                "epochs": model.epochs,
                "rng_seed": model.rng_seed,
            },
            "parameters": {
                "weights": [_encode_array(w) for w in model.weights],
                "biases": [_encode_array(b) for b in model.biases],
            },
        }
    if isinstance(model, SvmModel):
        return {
            "kind": "svm",
            "hyperparameters": {
                "kernel": {
                    "kind": model.kernel.kind,
                    "degree": model.kernel.degree,
                    "gamma": model.kernel.gamma,
                    "coef0": model.kernel.coef0,
                },
                "c_penalty": model.c_penalty,
                "converged": model.converged,
            },
            "parameters": {
                "bias": format(model.bias, ".17e"),
                "support_alphas": _encode_array(model.support_alphas),
                "support_labels": _encode_array(model.support_labels),
                "support_vectors": _encode_array(model.support_vectors),
            },
        }
    raise TypeError("not a serializable model: %r" % (type(model),))


def serialize_model(model, standardizer=None) -> str:
    """Render a trained model (optionally with its standardizer) as JSON text."""
    doc = _model_doc(model)
    doc["format_version"] = FORMAT_VERSION
    doc["standardizer"] = _standardizer_doc(standardizer)
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def save_model(path, model, standardizer=None):
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(serialize_model(model, standardizer))


def deserialize_model(text: str):
    """Parse model JSON back into (model, standardizer-or-None)."""
    from ..evaluation import Standardizer

    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CorruptModelFile("model file is not valid JSON: %s" % exc)
    if not isinstance(doc, dict):
        raise CorruptModelFile("model file must hold a JSON object")
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise UnsupportedVersion(
            "model format version %r not supported" % (version,))

    try:
        kind = doc["kind"]
        hyper = doc["hyperparameters"]
        params = doc["parameters"]
    except KeyError as exc:
        raise CorruptModelFile("missing model file field: %s" % exc)

    try:
        if kind == "lr":
            model = LogisticModel(
                weights=_decode_array(params["weights"]),
                lam=float(hyper["lam"]),
                learning_rate=float(hyper["learning_rate"]),
                epochs=int(hyper["epochs"]),
            )
        elif kind == "ann":
            model = AnnModel(
                layer_sizes=[int(s) for s in hyper["layer_sizes"]],
                activation=str(hyper["activation"]),
                weights=[_decode_array(w) for w in params["weights"]],
                biases=[_decode_array(b) for b in params["biases"]],
                lam=float(hyper["lam"]),
                learning_rate=float(hyper["learning_rate"]),
                epochs=int(hyper["epochs"]),
                rng_seed=int(hyper["rng_seed"]),
            )
        elif kind == "svm":
            spec = KernelSpec(
                kind=str(hyper["kernel"]["kind"]),
                degree=int(hyper["kernel"]["degree"]),
                gamma=float(hyper["kernel"]["gamma"]),
                coef0=float(hyper["kernel"]["coef0"]),
            )
            alphas = _decode_array(params["support_alphas"])
            model = SvmModel(
                kernel=spec,
                c_penalty=float(hyper["c_penalty"]),
                alphas=alphas,
                bias=float(params["bias"]),
                support_vectors=_decode_array(params["support_vectors"]),
                support_labels=_decode_array(params["support_labels"]),
                support_alphas=alphas,
                converged=bool(hyper.get("converged", True)),
            )
        else:
            raise CorruptModelFile("unknown model kind %r" % (kind,))
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptModelFile("malformed %r model file: %s" % (kind, exc))

    standardizer = None
    std_doc = doc.get("standardizer")
    if std_doc is not None:
        try:
            standardizer = Standardizer(
                means=_decode_array(std_doc["means"]),
                stds=_decode_array(std_doc["stds"]),
            )
        except (KeyError, TypeError) as exc:
            raise CorruptModelFile("malformed standardizer block: %s" % exc)
    return model, standardizer


def load_model(path):
    with open(path, "r", encoding="utf-8") as handle:
        return deserialize_model(handle.read())
