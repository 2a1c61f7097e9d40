"""Phishing-email detection toolkit.

Parses raw emails, extracts ten suspicion indicators, and trains/evaluates
three from-scratch classifiers over them.
"""

from .classifiers import (AnnModel, KernelSpec, LogisticModel, SvmModel,
                          ann_cost, ann_forward, ann_predict, ann_train,
                          deserialize_model, kernel_eval, load_model,
                          lr_hypothesis, lr_predict, lr_train, save_model,
                          serialize_model, sigmoid, svm_decision, svm_predict,
                          svm_train)
from .corpus import (CorpusManifest, LabeledEmail, SyntheticSpec,
                     balance_classes, dedup, default_synthetic_spec,
                     generate_synthetic_corpus, load_dataset, save_dataset)
from .dataset import Dataset
from .emails import (Attachment, Link, ParsedEmail, RawEmail, extract_links,
                     parse_email, parse_mbox)
from .evaluation import (ConfusionMatrix, Metrics, SplitSpec, Standardizer,
                         apply_standardizer, compute_metrics, confusion,
                         encode_nominal, fit_standardizer, split_dataset)
from .experiments import (SweepResult, ann_grid, kernel_comparison,
                          model_comparison, regularization_sweep)
from .features import (FEATURE_NAMES, FeatureConfig, FeatureVector,
                       default_config, extract_vector)
from .resolvers import (CertificateInfo, DomainAge, FixtureResolver,
                        LiveResolver, RedirectResult, Resolver,
                        ResolverFixture, TrafficRank)

__version__ = "0.1.0"
