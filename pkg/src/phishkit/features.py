"""The ten email heuristics, each mapping a parsed email to a 0/1 indicator.

Encoding: 1 means the suspicious condition of that feature fired, 0 means
legitimate or not applicable. Vacuous cases (no links, no attachments)
default to 0, except f7/f8 where an unresolvable rank or age on an existing
link counts as suspicious: an unvisited, unaged host is exactly the signal
those two rules look for. An email with no links at all cannot fire them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields, replace
from importlib import resources

from .emails import ParsedEmail
from .errors import ResolutionFailed, SchemaMismatch, TooManyHops
from .resolvers import Resolver, canonical_url

DEFAULT_BLACKLIST = ["click now", "verify now", "valid in 24h", "update now"]
DEFAULT_TRUSTED_CAS = ["godaddy", "comodo", "symantec"]
DEFAULT_CREDIBLE_DOMAINS = [
    "und.edu", "dropbox.com", "microsoft.com", "google.com",
    "github.com", "paypal.com",
]
DEFAULT_SHORTENERS = ["goo.gl", "j.mp", "bit.ly", "tinyurl.com"]
DEFAULT_BAD_EXTENSIONS = ["exe", "dll"]


@dataclass(frozen=True)
class FeatureConfig:
    """Tunable constants behind the ten rules; defaults ship the published values.

    rank_inclusive selects whether a traffic rank exactly at the threshold
    still counts as legitimate (the default) or not.
    """

    blacklist_keywords: list[str] = field(
        default_factory=lambda: list(DEFAULT_BLACKLIST))
    trusted_cas: list[str] = field(
        default_factory=lambda: list(DEFAULT_TRUSTED_CAS))
    credible_domains: list[str] = field(
        default_factory=lambda: list(DEFAULT_CREDIBLE_DOMAINS))
    shortener_hosts: list[str] = field(
        default_factory=lambda: list(DEFAULT_SHORTENERS))
    suspicious_extensions: list[str] = field(
        default_factory=lambda: list(DEFAULT_BAD_EXTENSIONS))
    rank_threshold: int = 150_000
    min_age_days: int = 365
    rank_inclusive: bool = True

    def __post_init__(self):
        if self.rank_threshold <= 0:
            raise ValueError("rank_threshold must be positive")
        if self.min_age_days <= 0:
            raise ValueError("min_age_days must be positive")

    @classmethod
    def from_json(cls, text: str) -> "FeatureConfig":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaMismatch("feature config is not valid JSON: %s" % exc)
        if not isinstance(doc, dict):
            raise SchemaMismatch("feature config must be a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = set(doc) - known
        if unknown:
            raise SchemaMismatch(
                "unknown feature config keys: %s" % ", ".join(sorted(unknown)))
        required = known - {"rank_inclusive"}
        missing = required - set(doc)
        if missing:
            raise SchemaMismatch(
                "missing feature config keys: %s" % ", ".join(sorted(missing)))
        return cls(**doc)

    @classmethod
    def load(cls, path) -> "FeatureConfig":
        with open(path, "r", encoding="utf-8") as handle:
            return cls.from_json(handle.read())

    def to_json(self) -> str:
        doc = {f.name: getattr(self, f.name) for f in fields(self)}
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def default_config() -> FeatureConfig:
    """The shipped default configuration (also available as a data file)."""
    with resources.files("phishkit.data").joinpath(
            "feature_config.json").open("r", encoding="utf-8") as handle:
        return FeatureConfig.from_json(handle.read())


FEATURE_NAMES = (
    "f1_no_https",
    "f2_untrusted_ca",
    "f3_blacklist_keyword",
    "f4_redirect_mismatch",
    "f5_hidden_link",
    "f6_ip_address_host",
    "f7_unpopular_host",
    "f8_young_domain",
    "f9_unknown_sender_domain",
    "f10_bad_attachment",
)


@dataclass(frozen=True)
class FeatureVector:
    """The ten indicators, in the fixed order of FEATURE_NAMES, plus a label."""

    f1_no_https: int
    f2_untrusted_ca: int
    f3_blacklist_keyword: int
    f4_redirect_mismatch: int
    f5_hidden_link: int
    f6_ip_address_host: int
    f7_unpopular_host: int
    f8_young_domain: int
    f9_unknown_sender_domain: int
    f10_bad_attachment: int
    label: str | None = None  # "legitimate" | "phishing" | None

    def __post_init__(self):
        for name in FEATURE_NAMES:
            if getattr(self, name) not in (0, 1):
                raise ValueError("%s must be 0 or 1" % name)
        if self.label not in (None, "legitimate", "phishing"):
            raise ValueError("label must be legitimate/phishing or unset")

    def values(self) -> tuple[int, ...]:
        return tuple(getattr(self, name) for name in FEATURE_NAMES)

    def fired(self) -> tuple[str, ...]:
        return tuple(name for name in FEATURE_NAMES if getattr(self, name) == 1)

    def with_label(self, label: str) -> "FeatureVector":
        return replace(self, label=label)


def f1_ssl(email: ParsedEmail, config: FeatureConfig,
           resolver: Resolver) -> int:
    """1 when the email carries at least one plain-http link."""
    return int(any(link.scheme == "http" for link in email.links))


def f2_ca(email: ParsedEmail, config: FeatureConfig, resolver: Resolver) -> int:
    """1 when some https link's certificate is absent, self-signed, or issued
    by an authority outside the trusted list (case-insensitive substring)."""
    trusted = [ca.lower() for ca in config.trusted_cas]
    for link in email.links:
        if link.scheme != "https":
            continue
        try:
            cert = resolver.fetch_certificate(link.host)
        except ResolutionFailed:
            return 1
        if not cert.present or cert.self_signed:
            return 1
        issuer = (cert.issuer_name or "").lower()
        if not any(ca in issuer for ca in trusted):
            return 1
    return 0


def f3_blacklist(email: ParsedEmail, config: FeatureConfig,
                 resolver: Resolver) -> int:
    """1 when subject or body contains any blacklist keyword (case-folded)."""
    haystack = (email.subject + "\n" + email.body_text).casefold()
    return int(any(word.casefold() in haystack
                   for word in config.blacklist_keywords))


def f4_redirect(email: ParsedEmail, config: FeatureConfig,
                resolver: Resolver) -> int:
    """1 when any link lands somewhere other than where it points.

    A link whose landing cannot be verified (failed or runaway resolution)
    is not trusted, so failures count as suspicious.
    """
    for link in email.links:
        if link.scheme not in ("http", "https"):
            continue
        try:
            result = resolver.resolve_redirects(link.raw_url)
        except (ResolutionFailed, TooManyHops):
            return 1
        if canonical_url(result.final_url) != canonical_url(link.raw_url):
            return 1
    return 0


def f5_hidden(email: ParsedEmail, config: FeatureConfig,
              resolver: Resolver) -> int:
    """1 when any link uses a shortener host or hides behind an image/text."""
    shorteners = {host.lower() for host in config.shortener_hosts}
    return int(any(
        link.host in shorteners or link.wrapped_in_image_or_text
        for link in email.links))


def f6_clear_ip(email: ParsedEmail, config: FeatureConfig,
                resolver: Resolver) -> int:
    """1 when any link addresses its host as a bare IP address."""
    return int(any(link.host_is_ip_literal for link in email.links))


def f7_traffic(email: ParsedEmail, config: FeatureConfig,
               resolver: Resolver) -> int:
    """1 when no linked host is popular enough to clear the rank threshold."""
    if not email.links:
        return 0
    for link in email.links:
        rank = resolver.lookup_traffic_rank(link.host).rank
        if rank is None:
            continue
        popular = (rank <= config.rank_threshold if config.rank_inclusive
                   else rank < config.rank_threshold)
        if popular:
            return 0
    return 1


def f8_age(email: ParsedEmail, config: FeatureConfig,
           resolver: Resolver) -> int:
    """1 when no linked domain is demonstrably older than the minimum age."""
    if not email.links:
        return 0
    for link in email.links:
        age = resolver.lookup_domain_age(link.host).age_days
        if age is not None and age >= config.min_age_days:
            return 0
    return 1


def f9_sender(email: ParsedEmail, config: FeatureConfig,
              resolver: Resolver) -> int:
    """1 when the sender's domain is not on the credible-domain list."""
    credible = {domain.lower() for domain in config.credible_domains}
    return int(email.sender_domain.lower() not in credible)


def f10_attachment(email: ParsedEmail, config: FeatureConfig,
                   resolver: Resolver) -> int:
    """1 when any attachment carries a suspicious extension."""
    bad = {ext.lower() for ext in config.suspicious_extensions}
    return int(any(att.extension in bad for att in email.attachments))


ALL_FEATURES = (f1_ssl, f2_ca, f3_blacklist, f4_redirect, f5_hidden,
                f6_clear_ip, f7_traffic, f8_age, f9_sender, f10_attachment)


def extract_vector(email: ParsedEmail, config: FeatureConfig,
                   resolver: Resolver) -> FeatureVector:
    """Apply all ten rules; label stays unset."""
    indicators = [rule(email, config, resolver) for rule in ALL_FEATURES]
    return FeatureVector(*indicators)
