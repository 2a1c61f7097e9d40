"""Answers to the four network-dependent questions the features ask.

One interface, two implementations: FixtureResolver replays recorded answers
from a JSON document (what every test uses), LiveResolver asks the network
best-effort. "Unknown" is a first-class answer everywhere; the feature layer
decides what it means.
"""

from __future__ import annotations

import json
import ssl
import socket
import threading
import urllib.error
import urllib.request
from dataclasses import dataclass, field
from datetime import date, datetime
from typing import Callable
from urllib.parse import urljoin, urlsplit, urlunsplit

from .errors import ResolutionFailed, SchemaMismatch, TooManyHops

DEFAULT_MAX_HOPS = 10
DEFAULT_TIMEOUT = 5.0


@dataclass(frozen=True)
class RedirectResult:
    requested_url: str
    final_url: str
    hop_count: int


@dataclass(frozen=True)
class CertificateInfo:
    present: bool
    issuer_name: str | None = None
    self_signed: bool = False

UNKNOWN_CERTIFICATE = CertificateInfo(present=False)


@dataclass(frozen=True)
class TrafficRank:
    rank: int | None = None  # None = unranked / unknown

UNKNOWN_RANK = TrafficRank()


@dataclass(frozen=True)
class DomainAge:
    creation_date: date | None = None
    age_days: int | None = None

UNKNOWN_AGE = DomainAge()


def canonical_url(url: str) -> str:
    """Lowercase scheme/host, drop default ports, normalize an empty path."""
    parts = urlsplit(url)
    scheme = parts.scheme.lower()
    host = (parts.hostname or "").lower()
    if host and ":" in host:
        host = "[%s]" % host
    port = parts.port
    if port is not None and not (
        (scheme == "http" and port == 80) or (scheme == "https" and port == 443)
    ):
        host = "%s:%d" % (host, port)
    path = parts.path or "/"
    return urlunsplit((scheme, host, path, parts.query, parts.fragment))


def _parse_iso_date(text: str) -> date:
    try:
        return date.fromisoformat(text)
    except ValueError:
        return datetime.fromisoformat(text.replace("Z", "+00:00")).date()


class Resolver:
    """Interface shared by the fixture and live implementations."""

    def resolve_redirects(self, url: str,
                          max_hops: int = DEFAULT_MAX_HOPS) -> RedirectResult:
        raise NotImplementedError

    def fetch_certificate(self, host: str) -> CertificateInfo:
        raise NotImplementedError

    def lookup_traffic_rank(self, host: str) -> TrafficRank:
        raise NotImplementedError

    def lookup_domain_age(self, domain: str) -> DomainAge:
        raise NotImplementedError


_FIXTURE_KEYS = {"redirects", "certificates", "ranks", "ages", "reference_now"}


@dataclass
class ResolverFixture:
    """Recorded answers. Lookups are total: a missing key means "unknown".

    In the redirects map a value of None simulates a failed resolution for
    that URL; a missing key means "no redirect" (identity).
    """

    redirects: dict[str, str | None] = field(default_factory=dict)
    certificates: dict[str, CertificateInfo] = field(default_factory=dict)
    ranks: dict[str, int] = field(default_factory=dict)
    ages: dict[str, date] = field(default_factory=dict)
    reference_now: date = date(2018, 6, 20)

    @classmethod
    def from_json(cls, text: str) -> "ResolverFixture":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaMismatch("resolver fixture is not valid JSON: %s" % exc)
        if not isinstance(doc, dict):
            raise SchemaMismatch("resolver fixture must be a JSON object")
        unknown = set(doc) - _FIXTURE_KEYS
        if unknown:
            raise SchemaMismatch(
                "unknown resolver fixture keys: %s" % ", ".join(sorted(unknown)))
        certificates = {}
        for host, entry in doc.get("certificates", {}).items():
            certificates[host] = CertificateInfo(
                present=bool(entry.get("present", True)),
                issuer_name=entry.get("issuer_name"),
                self_signed=bool(entry.get("self_signed", False)),
            )
        ages = {
            domain: _parse_iso_date(value)
            for domain, value in doc.get("ages", {}).items()
        }
        reference_now = _parse_iso_date(doc.get("reference_now", "2018-06-20"))
        return cls(
            redirects=dict(doc.get("redirects", {})),
            certificates=certificates,
            ranks={host: int(rank) for host, rank in doc.get("ranks", {}).items()},
            ages=ages,
            reference_now=reference_now,
        )

    @classmethod
    def load(cls, path) -> "ResolverFixture":
        with open(path, "r", encoding="utf-8") as handle:
            return cls.from_json(handle.read())


class FixtureResolver(Resolver):
    """Pure, deterministic resolver over a ResolverFixture. Safe to share."""

    def __init__(self, fixture: ResolverFixture | None = None):
        self.fixture = fixture if fixture is not None else ResolverFixture()

    def resolve_redirects(self, url: str,
                          max_hops: int = DEFAULT_MAX_HOPS) -> RedirectResult:
        if max_hops < 1:
            raise ValueError("max_hops must be >= 1")
        current = url
        hops = 0
        while True:
            nxt = self.fixture.redirects.get(current, current)
            if nxt is None:
                raise ResolutionFailed("recorded failure for %r" % (url,))
            if canonical_url(nxt) == canonical_url(current):
                return RedirectResult(requested_url=url, final_url=current,
                                      hop_count=hops)
            hops += 1
            if hops > max_hops:
                raise TooManyHops(
                    "%r redirected more than %d times" % (url, max_hops))
            current = nxt

    def fetch_certificate(self, host: str) -> CertificateInfo:
        return self.fixture.certificates.get(host, UNKNOWN_CERTIFICATE)

    def lookup_traffic_rank(self, host: str) -> TrafficRank:
        rank = self.fixture.ranks.get(host)
        return TrafficRank(rank=rank) if rank is not None else UNKNOWN_RANK

    def lookup_domain_age(self, domain: str) -> DomainAge:
        created = self.fixture.ages.get(domain)
        if created is None:
            return UNKNOWN_AGE
        age_days = (self.fixture.reference_now - created).days
        return DomainAge(creation_date=created, age_days=max(age_days, 0))


class _NoRedirect(urllib.request.HTTPRedirectHandler):
    def redirect_request(self, req, fp, code, msg, headers, newurl):
        return None


class LiveResolver(Resolver):
    """Best-effort network resolver with a per-run, per-key answer cache.

    Traffic rank and domain age have no universally available public service,
    so both are pluggable callables; when absent the answer is "unknown".
    reference_now is injected so age computation never reads the clock during
    a lookup.
    """

    def __init__(self, timeout: float = DEFAULT_TIMEOUT,
                 rank_lookup: Callable[[str], int | None] | None = None,
                 age_lookup: Callable[[str], date | None] | None = None,
                 reference_now: date | None = None):
        self.timeout = timeout
        self.rank_lookup = rank_lookup
        self.age_lookup = age_lookup
        self.reference_now = reference_now or date.today()
        self._cache: dict = {}
        self._lock = threading.Lock()
        self._key_locks: dict = {}

    def _cached(self, key, compute):
        # Per-key locking: concurrent queries for the same key produce one
        # outbound request; queries for distinct keys proceed in parallel.
        with self._lock:
            if key in self._cache:
                return self._cache[key]
            key_lock = self._key_locks.setdefault(key, threading.Lock())
        with key_lock:
            with self._lock:
                if key in self._cache:
                    return self._cache[key]
            value = compute()
            with self._lock:
                self._cache[key] = value
            return value

    def resolve_redirects(self, url: str,
                          max_hops: int = DEFAULT_MAX_HOPS) -> RedirectResult:
        if max_hops < 1:
            raise ValueError("max_hops must be >= 1")
        result = self._cached(("redirect", url, max_hops),
                              lambda: self._follow(url, max_hops))
        if isinstance(result, Exception):
            raise result
        return result

    def _follow(self, url: str, max_hops: int):
        opener = urllib.request.build_opener(_NoRedirect)
        current = url
        hops = 0
        try:
            while True:
                request = urllib.request.Request(current, method="GET")
                try:
                    response = opener.open(request, timeout=self.timeout)
                    response.close()
                    return RedirectResult(requested_url=url,
                                          final_url=current, hop_count=hops)
                except urllib.error.HTTPError as exc:
                    if exc.code in (301, 302, 303, 307, 308):
                        location = exc.headers.get("Location")
                        if not location:
                            return ResolutionFailed(
                                "redirect without Location from %r" % (current,))
                        hops += 1
                        if hops > max_hops:
                            return TooManyHops(
                                "%r redirected more than %d times"
                                % (url, max_hops))
                        current = urljoin(current, location)
                    else:
                        # Non-redirect status codes still identify the landing URL.
                        return RedirectResult(requested_url=url,
                                              final_url=current, hop_count=hops)
        except (urllib.error.URLError, socket.timeout, OSError,
                ValueError) as exc:
            return ResolutionFailed("GET %r failed: %s" % (url, exc))

    def fetch_certificate(self, host: str) -> CertificateInfo:
        result = self._cached(("certificate", host),
                              lambda: self._handshake(host))
        if isinstance(result, Exception):
            raise result
        return result

    def _handshake(self, host: str):
        context = ssl.create_default_context()
        try:
            with socket.create_connection((host, 443), timeout=self.timeout) as sock:
                with context.wrap_socket(sock, server_hostname=host) as tls:
                    cert = tls.getpeercert()
        except ssl.SSLCertVerificationError as exc:
            if "self-signed" in str(exc) or "self signed" in str(exc):
                return CertificateInfo(present=True, issuer_name=None,
                                       self_signed=True)
            return CertificateInfo(present=True, issuer_name=None,
                                   self_signed=False)
        except (OSError, ssl.SSLError) as exc:
            return ResolutionFailed("TLS handshake with %r failed: %s"
                                    % (host, exc))
        issuer = {key: value for pairs in cert.get("issuer", ())
                  for key, value in pairs}
        subject = {key: value for pairs in cert.get("subject", ())
                   for key, value in pairs}
        issuer_name = issuer.get("organizationName") or issuer.get("commonName")
        return CertificateInfo(present=True, issuer_name=issuer_name,
                               self_signed=bool(issuer) and issuer == subject)

    def lookup_traffic_rank(self, host: str) -> TrafficRank:
        if self.rank_lookup is None:
            return UNKNOWN_RANK

        def compute():
            try:
                rank = self.rank_lookup(host)
            except Exception:
                return UNKNOWN_RANK
            return TrafficRank(rank=rank) if rank is not None else UNKNOWN_RANK

        return self._cached(("rank", host), compute)

    def lookup_domain_age(self, domain: str) -> DomainAge:
        if self.age_lookup is None:
            return UNKNOWN_AGE

        def compute():
            try:
                created = self.age_lookup(domain)
            except Exception:
                return UNKNOWN_AGE
            if created is None:
                return UNKNOWN_AGE
            return DomainAge(creation_date=created,
                             age_days=max((self.reference_now - created).days, 0))

        return self._cached(("age", domain), compute)
