"""The three classifiers, their shared prediction surface, and model files."""

from .ann import (AnnModel, ann_cost, ann_forward, ann_gradients, ann_predict,
                  ann_train, init_parameters)
from .logistic import (LogisticModel, lr_cost, lr_gradient, lr_hypothesis,
                       lr_predict, lr_train, sigmoid)
from .serialize import (deserialize_model, load_model, save_model,
                        serialize_model)
from .svm import (KernelSpec, SvmModel, kernel_eval, kernel_matrix,
                  kkt_residual, svm_decision, svm_decision_batch, svm_predict,
                  svm_predict_batch, svm_train)

__all__ = [
    "AnnModel", "KernelSpec", "LogisticModel", "SvmModel",
    "ann_cost", "ann_forward", "ann_gradients", "ann_predict", "ann_train",
    "deserialize_model", "init_parameters", "kernel_eval", "kernel_matrix",
    "kkt_residual", "load_model", "lr_cost", "lr_gradient", "lr_hypothesis",
    "lr_predict", "lr_train", "save_model", "serialize_model", "sigmoid",
    "svm_decision", "svm_decision_batch", "svm_predict", "svm_predict_batch",
    "svm_train",
]
