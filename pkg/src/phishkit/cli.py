"""Command-line surface: extract, gen-corpus, train, evaluate, sweep, classify.

Exit codes: 0 success, 1 usage error, 2 data error, 3 training divergence.
Identical flags and inputs produce byte-identical outputs; nothing reads the
clock or the network unless --live-resolvers is passed.
"""

from __future__ import annotations

import argparse
import email as email_lib
import sys

import numpy as np

from . import corpus as corpus_mod
from .classifiers import (KernelSpec, ann_forward, ann_train, load_model,
                          lr_hypothesis, lr_train, save_model, svm_decision,
                          svm_train)
from .classifiers import ann as ann_mod
from .classifiers import logistic as logistic_mod
from .dataset import Dataset
from .emails import parse_email, parse_mbox
from .errors import NonFiniteLoss, PhishkitError
from .evaluation import (Metrics, SplitSpec, apply_standardizer,
                         compute_metrics, confusion, fit_standardizer,
                         split_dataset)
from .experiments import regularization_sweep, sweep_to_csv
from .features import FeatureConfig, default_config, extract_vector
from .resolvers import FixtureResolver, LiveResolver, ResolverFixture

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_DIVERGED = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; the contract here is 1.
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="phishkit",
                     description="Phishing-email detection toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    extract = sub.add_parser("extract",
                             help="mailbox -> feature-vector CSV")
    extract.add_argument("--input", required=True, help="mbox file")
    extract.add_argument("--output", required=True, help="dataset CSV")
    extract.add_argument("--feature-config", help="feature config JSON")
    extract.add_argument("--fixtures", help="resolver fixture JSON")
    extract.add_argument("--live-resolvers", action="store_true",
                         help="ask the network instead of fixtures")
    extract.add_argument("--default-label", type=int, choices=(0, 1),
                         default=0,
                         help="label for messages without an X-Label header")

    gen = sub.add_parser("gen-corpus", help="synthesize an indicator corpus")
    gen.add_argument("--output", required=True, help="dataset CSV")
    gen.add_argument("--spec", help="synthetic spec JSON (shipped default "
                                    "when omitted)")
    gen.add_argument("--seed", type=int, help="override the spec's rng seed")
    gen.add_argument("--n-per-class", type=int,
                     help="override the spec's per-class row count")

    train = sub.add_parser("train", help="fit a model on a dataset CSV")
    train.add_argument("--input", required=True, help="dataset CSV")
    train.add_argument("--output", required=True, help="model JSON")
    train.add_argument("--model", required=True, choices=("lr", "ann", "svm"))
    train.add_argument("--lambda", dest="lam", type=float, default=0.0)
    train.add_argument("--lr", dest="learning_rate", type=float)
    train.add_argument("--epochs", type=int)
    train.add_argument("--layers", default="100,100",
                       help="hidden layer sizes, e.g. 100,100")
    train.add_argument("--activation", default="relu",
                       choices=("relu", "tanh", "sigmoid"))
    train.add_argument("--kernel", default="rbf",
                       choices=("linear", "poly", "rbf", "sigmoid"))
    train.add_argument("--degree", type=int, default=3)
    train.add_argument("--gamma", type=float, default=0.1)
    train.add_argument("--c", dest="c_penalty", type=float, default=1.0)
    train.add_argument("--seed", type=int, default=0)
    train.add_argument("--train-fraction", type=float, default=1.0,
                       help="train on a stratified fraction of the input")
    train.add_argument("--test-output",
                       help="write the held-out remainder as a dataset CSV")

    evaluate = sub.add_parser("evaluate", help="metrics of a model on a CSV")
    evaluate.add_argument("--model-file", required=True)
    evaluate.add_argument("--input", required=True, help="dataset CSV")
    evaluate.add_argument("--output", help="metrics CSV")
    evaluate.add_argument("--pfa-denominator", default="standard",
                          choices=("standard", "paper"))

    sweep = sub.add_parser("sweep", help="metrics across a lambda grid")
    sweep.add_argument("--input", required=True, help="dataset CSV")
    sweep.add_argument("--output", required=True, help="sweep CSV")
    sweep.add_argument("--model", default="lr", choices=("lr", "ann"))
    sweep.add_argument("--grid", required=True,
                       help="start:stop:step or comma list, e.g. 0:1:0.1")
    sweep.add_argument("--lr", dest="learning_rate", type=float, default=0.1)
    sweep.add_argument("--epochs", type=int, default=2000)
    sweep.add_argument("--layers", default="100",
                       help="hidden layer sizes for --model ann")
    sweep.add_argument("--activation", default="relu",
                       choices=("relu", "tanh", "sigmoid"))
    sweep.add_argument("--seed", type=int, default=0)
    sweep.add_argument("--train-fraction", type=float, default=0.7)

    classify = sub.add_parser("classify", help="verdict for one .eml file")
    classify.add_argument("--model-file", required=True)
    classify.add_argument("--input", required=True, help=".eml file")
    classify.add_argument("--feature-config")
    classify.add_argument("--fixtures")
    classify.add_argument("--live-resolvers", action="store_true")

    return parser


def _resolver(args):
    if args.live_resolvers:
        return LiveResolver()
    if args.fixtures:
        return FixtureResolver(ResolverFixture.load(args.fixtures))
    return FixtureResolver()


def _feature_config(args) -> FeatureConfig:
    if args.feature_config:
        return FeatureConfig.load(args.feature_config)
    return default_config()


def _parse_layers(text: str) -> list[int]:
    try:
        layers = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise _UsageError("--layers expects comma-separated integers")
    if not layers or any(size < 1 for size in layers):
        raise _UsageError("--layers needs positive integers")
    return layers


def _parse_grid(text: str) -> list[float]:
    try:
        if ":" in text:
            start_s, stop_s, step_s = text.split(":")
            start, stop, step = float(start_s), float(stop_s), float(step_s)
            if step <= 0 or stop < start:
                raise ValueError
            count = int(round((stop - start) / step)) + 1
            values = [start + i * step for i in range(count)]
            return [v for v in values if v <= stop + 1e-12]
        values = [float(part) for part in text.split(",") if part.strip()]
        if not values:
            raise ValueError
        return values
    except ValueError:
        raise _UsageError("--grid expects start:stop:step or a comma list")


def _cmd_extract(args) -> int:
    config = _feature_config(args)
    resolver = _resolver(args)
    with open(args.input, "rb") as handle:
        raw_messages = parse_mbox(handle.read(), source_path=args.input)
    features = []
    labels = []
    for raw in raw_messages:
        parsed = parse_email(raw)
        vector = extract_vector(parsed, config, resolver)
        features.append(vector.values())
        labels.append(_label_from_headers(raw.data, args.default_label))
    data = Dataset(np.asarray(features, dtype=np.float64).reshape(
        len(features), corpus_mod.N_FEATURES) if features
        else np.zeros((0, corpus_mod.N_FEATURES)),
        np.asarray(labels, dtype=np.int64))
    corpus_mod.save_dataset(args.output, data)
    print("wrote %d rows to %s" % (data.n_rows, args.output))
    return EXIT_OK


def _label_from_headers(data: bytes, default_label: int) -> int:
    msg = email_lib.message_from_bytes(data)
    value = (msg.get("X-Label") or "").strip().lower()
    if value in corpus_mod.LABEL_NAMES:
        return corpus_mod.LABEL_NAMES[value]
    return default_label


def _cmd_gen_corpus(args) -> int:
    if args.spec:
        spec = corpus_mod.SyntheticSpec.load(args.spec)
    else:
        spec = corpus_mod.default_synthetic_spec()
    overrides = {}
    if args.seed is not None:
        overrides["rng_seed"] = args.seed
    if args.n_per_class is not None:
        overrides["n_per_class"] = args.n_per_class
    if overrides:
        spec = corpus_mod.SyntheticSpec(
            n_per_class=overrides.get("n_per_class", spec.n_per_class),
            phishing_probs=spec.phishing_probs,
            legitimate_probs=spec.legitimate_probs,
            rng_seed=overrides.get("rng_seed", spec.rng_seed),
        )
    data = corpus_mod.generate_synthetic_corpus(spec)
    corpus_mod.save_dataset(args.output, data)
    manifest = corpus_mod.CorpusManifest.for_dataset(
        data, sources=("synthetic",), rng_seed=spec.rng_seed)
    with open(args.output + ".manifest.json", "w", encoding="utf-8",
              newline="\n") as handle:
        handle.write(manifest.to_json())
    print("wrote %d rows to %s" % (data.n_rows, args.output))
    return EXIT_OK


def _cmd_train(args) -> int:
    data = corpus_mod.load_dataset(args.input)
    data.require_rows()
    if args.train_fraction < 1.0:
        split = SplitSpec(train_fraction=args.train_fraction,
                          rng_seed=args.seed)
        train, test = split_dataset(data, split)
        if args.test_output:
            corpus_mod.save_dataset(args.test_output, test)
    else:
        train = data
        if args.test_output:
            raise _UsageError("--test-output needs --train-fraction < 1")

    standardizer = fit_standardizer(train)
    train_std = apply_standardizer(standardizer, train)

    if args.model == "lr":
        model = lr_train(
            train_std, lam=args.lam,
            learning_rate=args.learning_rate
            if args.learning_rate is not None else logistic_mod.DEFAULT_LEARNING_RATE,
            epochs=args.epochs if args.epochs is not None
            else logistic_mod.DEFAULT_EPOCHS)
    elif args.model == "ann":
        layers = [train_std.n_features, *_parse_layers(args.layers), 1]
        model = ann_train(
            train_std, layers, activation=args.activation, lam=args.lam,
            learning_rate=args.learning_rate
            if args.learning_rate is not None else ann_mod.DEFAULT_LEARNING_RATE,
            epochs=args.epochs if args.epochs is not None
            else ann_mod.DEFAULT_EPOCHS,
            rng_seed=args.seed)
    else:
        kind = "polynomial" if args.kernel == "poly" else args.kernel
        spec = KernelSpec(kind=kind, degree=args.degree, gamma=args.gamma)
        model = svm_train(train_std, spec, c_penalty=args.c_penalty)

    save_model(args.output, model, standardizer)
    print("trained %s on %d rows -> %s"
          % (args.model, train.n_rows, args.output))
    return EXIT_OK


def _predictions(model, features) -> list[int]:
    from .classifiers import (AnnModel, LogisticModel, SvmModel, ann_predict,
                              lr_predict, svm_predict_batch)

    if isinstance(model, SvmModel):
        return list(svm_predict_batch(model, features))
    if isinstance(model, LogisticModel):
        return [lr_predict(model, row) for row in features]
    if isinstance(model, AnnModel):
        return [ann_predict(model, row) for row in features]
    raise TypeError("unknown model type %r" % (type(model),))


def _metrics_csv(name: str, metrics: Metrics) -> str:
    return ("param,p_d,p_fa,p_md,accuracy\n"
            "%s,%.4f,%.4f,%.4f,%.4f\n" % (name, *metrics.as_row()))


def _cmd_evaluate(args) -> int:
    model, standardizer = load_model(args.model_file)
    data = corpus_mod.load_dataset(args.input)
    data.require_rows()
    if standardizer is not None:
        data = apply_standardizer(standardizer, data)
    predictions = _predictions(model, data.features)
    metrics = compute_metrics(confusion(predictions, data.labels),
                              args.pfa_denominator)
    print("p_d=%.4f p_fa=%.4f p_md=%.4f accuracy=%.4f" % metrics.as_row())
    if args.output:
        kind = {"LogisticModel": "lr", "AnnModel": "ann",
                "SvmModel": "svm"}[type(model).__name__]
        with open(args.output, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(_metrics_csv(kind, metrics))
    return EXIT_OK


def _cmd_sweep(args) -> int:
    data = corpus_mod.load_dataset(args.input)
    grid = _parse_grid(args.grid)
    split = SplitSpec(train_fraction=args.train_fraction, rng_seed=args.seed)
    sweep = regularization_sweep(
        data, args.model, grid, split, learning_rate=args.learning_rate,
        epochs=args.epochs, hidden_layers=_parse_layers(args.layers),
        activation=args.activation, rng_seed=args.seed)
    with open(args.output, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(sweep_to_csv(sweep))
    print("wrote %d sweep rows to %s"
          % (len(sweep.parameter_values), args.output))
    return EXIT_OK


def _cmd_classify(args) -> int:
    from .emails import RawEmail

    model, standardizer = load_model(args.model_file)
    config = _feature_config(args)
    resolver = _resolver(args)
    with open(args.input, "rb") as handle:
        raw = RawEmail(source_path=args.input, data=handle.read())
    parsed = parse_email(raw)
    vector = extract_vector(parsed, config, resolver)
    x = np.asarray(vector.values(), dtype=np.float64)
    if standardizer is not None:
        x = (x - standardizer.means) / standardizer.stds

    from .classifiers import AnnModel, LogisticModel, SvmModel

    if isinstance(model, LogisticModel):
        score = lr_hypothesis(model, x)
        verdict = "phishing" if score > 0.5 else "legitimate"
    elif isinstance(model, AnnModel):
        _, score = ann_forward(model, x)
        verdict = "phishing" if score > 0.5 else "legitimate"
    elif isinstance(model, SvmModel):
        score = svm_decision(model, x)
        verdict = "phishing" if score >= 0.0 else "legitimate"
    else:
        raise TypeError("unknown model type %r" % (type(model),))

    fired = ",".join(vector.fired()) or "-"
    print("%s score=%.6f fired=%s" % (verdict, score, fired))
    return EXIT_OK


_COMMANDS = {
    "extract": _cmd_extract,
    "gen-corpus": _cmd_gen_corpus,
    "train": _cmd_train,
    "evaluate": _cmd_evaluate,
    "sweep": _cmd_sweep,
    "classify": _cmd_classify,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print("usage error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print("usage error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    except NonFiniteLoss as exc:
        print("training diverged: %s" % exc, file=sys.stderr)
        return EXIT_DIVERGED
    except PhishkitError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_DATA
    except FileNotFoundError as exc:
        print("error: no such file: %s" % exc.filename, file=sys.stderr)
        return EXIT_DATA


def entrypoint():
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
