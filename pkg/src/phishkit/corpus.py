"""Corpus preparation: dedup, class balancing, synthetic data, CSV round-trip.

The dataset CSV schema is fixed: header f1..f10,label, one row per email,
label in {0, 1}. Indicator files hold 0/1 entries; standardized files hold
decimals under the same header.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .dataset import Dataset
from .emails import ParsedEmail
from .errors import NonBinaryFeatureValue, SchemaMismatch, SingleClassData

CSV_HEADER = "f1,f2,f3,f4,f5,f6,f7,f8,f9,f10,label"
N_FEATURES = 10

LABEL_NAMES = {"legitimate": 0, "phishing": 1}


def dedup_key(email: ParsedEmail) -> str:
    """Digest of the case-folded, whitespace-collapsed subject and body."""
    normalized = " ".join((email.subject + " " + email.body_text)
                          .casefold().split())
    return hashlib.sha256(normalized.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class LabeledEmail:
    email: ParsedEmail
    label: str  # "legitimate" | "phishing"
    dedup_key: str = ""

    def __post_init__(self):
        if self.label not in LABEL_NAMES:
            raise ValueError("label must be legitimate or phishing")
        if not self.dedup_key:
            object.__setattr__(self, "dedup_key", dedup_key(self.email))


def dedup(corpus: list[LabeledEmail]) -> tuple[list[LabeledEmail], int]:
    """Keep the first occurrence per dedup key, preserving order."""
    seen: set[str] = set()
    kept: list[LabeledEmail] = []
    for item in corpus:
        if item.dedup_key in seen:
            continue
        seen.add(item.dedup_key)
        kept.append(item)
    return kept, len(corpus) - len(kept)


def balance_classes(corpus: list[LabeledEmail],
                    rng_seed: int) -> list[LabeledEmail]:
    """Downsample the majority class (seeded, uniform) to the minority count.

    Retained records are untouched and keep their original relative order.
    """
    by_class = {"legitimate": [], "phishing": []}
    for i, item in enumerate(corpus):
        by_class[item.label].append(i)
    if not by_class["legitimate"] or not by_class["phishing"]:
        raise SingleClassData("balancing needs both classes present")
    target = min(len(by_class["legitimate"]), len(by_class["phishing"]))
    rng = np.random.default_rng(rng_seed)
    keep: list[int] = []
    for label in ("legitimate", "phishing"):
        members = np.asarray(by_class[label])
        if members.size > target:
            members = rng.choice(members, size=target, replace=False)
        keep.extend(members.tolist())
    return [corpus[i] for i in sorted(keep)]


@dataclass(frozen=True)
class SyntheticSpec:
    """Per-class firing probability for each of the ten indicators."""

    n_per_class: int
    phishing_probs: tuple[float, ...]
    legitimate_probs: tuple[float, ...]
    rng_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "phishing_probs",
                           tuple(float(p) for p in self.phishing_probs))
        object.__setattr__(self, "legitimate_probs",
                           tuple(float(p) for p in self.legitimate_probs))
        if self.n_per_class < 1:
            raise ValueError("n_per_class must be >= 1")
        for probs in (self.phishing_probs, self.legitimate_probs):
            if len(probs) != N_FEATURES:
                raise ValueError("need %d probabilities per class"
                                 % N_FEATURES)
            if any(not 0.0 <= p <= 1.0 for p in probs):
                raise ValueError("probabilities must lie in [0, 1]")

    @classmethod
    def from_json(cls, text: str) -> "SyntheticSpec":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaMismatch("synthetic spec is not valid JSON: %s" % exc)
        known = {"n_per_class", "phishing_probs", "legitimate_probs",
                 "rng_seed"}
        if not isinstance(doc, dict) or set(doc) - known:
            raise SchemaMismatch("synthetic spec keys must be %s"
                                 % ", ".join(sorted(known)))
        missing = known - {"rng_seed"} - set(doc)
        if missing:
            raise SchemaMismatch("missing synthetic spec keys: %s"
                                 % ", ".join(sorted(missing)))
        return cls(
            n_per_class=int(doc["n_per_class"]),
            phishing_probs=tuple(doc["phishing_probs"]),
            legitimate_probs=tuple(doc["legitimate_probs"]),
            rng_seed=int(doc.get("rng_seed", 0)),
        )

    @classmethod
    def load(cls, path) -> "SyntheticSpec":
        with open(path, "r", encoding="utf-8") as handle:
            return cls.from_json(handle.read())


def default_synthetic_spec() -> SyntheticSpec:
    """The shipped defaults: a plausible separation between the two classes."""
    with resources.files("phishkit.data").joinpath(
            "synthetic_spec.json").open("r", encoding="utf-8") as handle:
        return SyntheticSpec.from_json(handle.read())


def generate_synthetic_corpus(spec: SyntheticSpec) -> Dataset:
    """Bernoulli indicator rows: legitimate block first, then phishing."""
    rng = np.random.default_rng(spec.rng_seed)
    legit = (rng.random((spec.n_per_class, N_FEATURES))
             < np.asarray(spec.legitimate_probs)).astype(np.float64)
    phish = (rng.random((spec.n_per_class, N_FEATURES))
             < np.asarray(spec.phishing_probs)).astype(np.float64)
    features = np.vstack([legit, phish])
    labels = np.concatenate([np.zeros(spec.n_per_class, dtype=np.int64),
                             np.ones(spec.n_per_class, dtype=np.int64)])
    return Dataset(features, labels)


def _format_value(value: float) -> str:
    if value == int(value):
        return str(int(value))
    return repr(float(value))


def save_dataset(path, data: Dataset) -> None:
    """Write the CSV schema above; integral values are written without a
    decimal point, everything else with full round-trip precision."""
    if data.n_features != N_FEATURES:
        raise SchemaMismatch("dataset must have %d feature columns, got %d"
                             % (N_FEATURES, data.n_features))
    lines = [CSV_HEADER]
    for row, label in zip(data.features, data.labels):
        lines.append(",".join([_format_value(v) for v in row]
                              + [str(int(label))]))
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write("\n".join(lines) + "\n")


def load_dataset(path, binary: bool = False) -> Dataset:
    """Read the CSV schema back; binary=True additionally enforces that every
    feature value is exactly 0 or 1 (raw indicator files)."""
    with open(path, "r", encoding="utf-8") as handle:
        lines = [line.rstrip("\n") for line in handle]
    lines = [line for line in lines if line]
    if not lines or lines[0] != CSV_HEADER:
        raise SchemaMismatch("expected header %r" % (CSV_HEADER,))
    features = []
    labels = []
    for lineno, line in enumerate(lines[1:], start=2):
        cells = line.split(",")
        if len(cells) != N_FEATURES + 1:
            raise SchemaMismatch("line %d has %d columns, expected %d"
                                 % (lineno, len(cells), N_FEATURES + 1))
        try:
            row = [float(cell) for cell in cells[:N_FEATURES]]
        except ValueError:
            raise SchemaMismatch("line %d holds a non-numeric feature"
                                 % lineno)
        if cells[-1] not in ("0", "1"):
            raise SchemaMismatch("line %d label %r is not 0 or 1"
                                 % (lineno, cells[-1]))
        if binary and any(v not in (0.0, 1.0) for v in row):
            raise NonBinaryFeatureValue(
                "line %d holds a non-indicator feature value" % lineno)
        features.append(row)
        labels.append(int(cells[-1]))
    if not features:
        return Dataset(np.zeros((0, N_FEATURES)), np.zeros(0, dtype=np.int64))
    return Dataset(np.asarray(features), np.asarray(labels))


@dataclass(frozen=True)
class CorpusManifest:
    """Sidecar describing how a stored corpus was produced."""

    n_legitimate: int
    n_phishing: int
    sources: tuple[str, ...] = ()
    dedup_kept: int = 0
    dedup_removed: int = 0
    rng_seed: int = 0

    def to_json(self) -> str:
        doc = {
            "counts": {"legitimate": self.n_legitimate,
                       "phishing": self.n_phishing},
            "sources": list(self.sources),
            "dedup": {"kept": self.dedup_kept, "removed": self.dedup_removed},
            "rng_seed": self.rng_seed,
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "CorpusManifest":
        doc = json.loads(text)
        return cls(
            n_legitimate=int(doc["counts"]["legitimate"]),
            n_phishing=int(doc["counts"]["phishing"]),
            sources=tuple(doc.get("sources", ())),
            dedup_kept=int(doc.get("dedup", {}).get("kept", 0)),
            dedup_removed=int(doc.get("dedup", {}).get("removed", 0)),
            rng_seed=int(doc.get("rng_seed", 0)),
        )

    @classmethod
    def for_dataset(cls, data: Dataset, sources=(),
                    rng_seed: int = 0) -> "CorpusManifest":
        n0, n1 = data.class_counts()
        return cls(n_legitimate=n0, n_phishing=n1, sources=tuple(sources),
                   dedup_kept=data.n_rows, dedup_removed=0, rng_seed=rng_seed)
