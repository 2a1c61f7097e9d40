"""Shared test utilities: email builders, random generators, numeric oracles."""

from pathlib import Path

import numpy as np

from phishkit.classifiers import AnnModel, ann_cost
from phishkit.dataset import Dataset
from phishkit.emails import Attachment, Link, ParsedEmail, make_link

FIXTURES = Path(__file__).parent / "fixtures"


def make_email(sender="someone@nowhere.example", subject="", body="",
               links=(), attachments=()):
    """ParsedEmail built directly, bypassing byte-level parsing."""
    domain = sender.rsplit("@", 1)[1] if "@" in sender else ""
    return ParsedEmail(
        sender_address=sender,
        sender_domain=domain,
        subject=subject,
        date=None,
        body_text=body,
        links=list(links),
        attachments=list(attachments),
    )


def link(url, wrapped=False, display=None):
    base = make_link(url, display_text=display, wrapped=wrapped)
    return base


def attachment(filename):
    stem, dot, ext = filename.rpartition(".")
    return Attachment(filename=filename, extension=ext.lower() if dot and stem else "")


_WORDS = ("meeting", "invoice", "schedule", "report", "account", "update now",
          "verify now", "hello", "deadline", "budget")
_HOSTS = ("files.dropbox.com", "goo.gl", "self.example", "fresh-site.example",
          "boundary.example", "193.27.14.5", "plain.example")
_SENDERS = ("a@und.edu", "b@dropbox.com", "c@weird.example", "d@mailhub.example")
_EXTS = ("pdf", "exe", "txt", "dll", "docx")


def random_email(rng: np.random.Generator) -> ParsedEmail:
    """A randomized ParsedEmail drawing from fixture-known hosts."""
    body = " ".join(rng.choice(_WORDS, size=rng.integers(0, 6)))
    links = []
    for _ in range(rng.integers(0, 3)):
        scheme = "http" if rng.random() < 0.5 else "https"
        host = rng.choice(_HOSTS)
        url = "%s://%s/p%d" % (scheme, host, rng.integers(0, 5))
        links.append(make_link(url, wrapped=bool(rng.random() < 0.3)))
    attachments = [attachment("file%d.%s" % (i, rng.choice(_EXTS)))
                   for i in range(rng.integers(0, 3))]
    return make_email(sender=str(rng.choice(_SENDERS)),
                      subject=str(rng.choice(_WORDS)),
                      body=body, links=links, attachments=attachments)


def central_difference(f, x0, eps=1e-5):
    """Central finite-difference gradient of a scalar function of a vector."""
    x0 = np.asarray(x0, dtype=np.float64)
    grad = np.zeros_like(x0)
    for i in range(x0.size):
        up = x0.copy()
        up[i] += eps
        down = x0.copy()
        down[i] -= eps
        grad[i] = (f(up) - f(down)) / (2.0 * eps)
    return grad


def relative_error(analytic, numeric) -> float:
    analytic = np.asarray(analytic)
    numeric = np.asarray(numeric)
    denom = max(np.linalg.norm(analytic) + np.linalg.norm(numeric), 1e-12)
    return float(np.linalg.norm(analytic - numeric) / denom)


def pack_params(weights, biases):
    return np.concatenate([w.ravel() for w in weights]
                          + [b.ravel() for b in biases])


def unpack_params(flat, layer_sizes):
    weights, biases, k = [], [], 0
    for fan_in, fan_out in zip(layer_sizes[:-1], layer_sizes[1:]):
        weights.append(flat[k:k + fan_out * fan_in].reshape(fan_out, fan_in))
        k += fan_out * fan_in
    for fan_out in layer_sizes[1:]:
        biases.append(flat[k:k + fan_out])
        k += fan_out
    return weights, biases


def ann_cost_of_flat(flat, layer_sizes, activation, lam, data: Dataset):
    weights, biases = unpack_params(flat, layer_sizes)
    model = AnnModel(layer_sizes=list(layer_sizes), activation=activation,
                     weights=weights, biases=biases, lam=lam)
    return ann_cost(model, data)


def separable_blobs(rng: np.random.Generator, n_per_class: int, dim: int = 10,
                    gap: float = 2.0) -> Dataset:
    """Two linearly separable Gaussian blobs with a guaranteed margin."""
    direction = rng.normal(size=dim)
    direction /= np.linalg.norm(direction)
    base = rng.normal(scale=0.5, size=(2 * n_per_class, dim))
    shift = np.outer(np.repeat([-gap, gap], n_per_class), direction)
    labels = np.repeat([0, 1], n_per_class)
    return Dataset(base + shift, labels)


def xor_dataset() -> Dataset:
    X = np.zeros((4, 10))
    X[1, 1] = 1.0
    X[2, 0] = 1.0
    X[3, 0] = 1.0
    X[3, 1] = 1.0
    return Dataset(X, [0, 1, 1, 0])
