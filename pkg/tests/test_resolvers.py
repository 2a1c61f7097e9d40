"""Fixture resolver behavior and schema handling."""

from datetime import date

import pytest

from phishkit.errors import ResolutionFailed, SchemaMismatch, TooManyHops
from phishkit.resolvers import (FixtureResolver, ResolverFixture,
                                canonical_url)


def chain_fixture(n_hops: int) -> FixtureResolver:
    redirects = {"http://c/%d" % i: "http://c/%d" % (i + 1)
                 for i in range(n_hops)}
    return FixtureResolver(ResolverFixture(redirects=redirects))


class TestRedirects:
    def test_identity_mapping(self):
        resolver = FixtureResolver(ResolverFixture(
            redirects={"http://a/x": "http://a/x"}))
        result = resolver.resolve_redirects("http://a/x")
        assert result.hop_count == 0
        assert result.final_url == "http://a/x"

    def test_missing_key_means_no_redirect(self):
        result = FixtureResolver().resolve_redirects("http://nowhere/x")
        assert result.hop_count == 0

    def test_single_hop(self):
        resolver = FixtureResolver(ResolverFixture(
            redirects={"http://s/1": "http://evil/2"}))
        result = resolver.resolve_redirects("http://s/1")
        assert result.final_url == "http://evil/2"
        assert result.hop_count == 1

    def test_chain_exceeding_max_hops(self):
        resolver = chain_fixture(4)
        with pytest.raises(TooManyHops):
            resolver.resolve_redirects("http://c/0", max_hops=3)

    def test_chain_at_max_hops_passes(self):
        resolver = chain_fixture(4)
        result = resolver.resolve_redirects("http://c/0", max_hops=4)
        assert result.hop_count == 4

    def test_recorded_failure(self):
        resolver = FixtureResolver(ResolverFixture(
            redirects={"http://broken/x": None}))
        with pytest.raises(ResolutionFailed):
            resolver.resolve_redirects("http://broken/x")

    def test_hop_zero_iff_canonical_equal(self):
        resolver = FixtureResolver(ResolverFixture(
            redirects={"http://A.example:80/x": "http://a.example/x"}))
        result = resolver.resolve_redirects("http://A.example:80/x")
        assert result.hop_count == 0


class TestCanonicalUrl:
    def test_lowercases_scheme_and_host(self):
        assert canonical_url("HTTP://Example.COM/Path") == \
            "http://example.com/Path"

    def test_drops_default_port(self):
        assert canonical_url("https://a.example:443/x") == \
            canonical_url("https://a.example/x")
        assert canonical_url("https://a.example:8443/x") != \
            canonical_url("https://a.example/x")

    def test_empty_path_normalized(self):
        assert canonical_url("http://a.example") == \
            canonical_url("http://a.example/")


class TestCertificates:
    def test_known_host(self, fixture_resolver):
        info = fixture_resolver.fetch_certificate("files.dropbox.com")
        assert info.present
        assert "Comodo" in info.issuer_name
        assert not info.self_signed

    def test_unknown_host_is_absent(self, fixture_resolver):
        info = fixture_resolver.fetch_certificate("no-such-host.example")
        assert not info.present
        assert info.issuer_name is None

    def test_self_signed_host(self, fixture_resolver):
        assert fixture_resolver.fetch_certificate("self.example").self_signed


class TestRankAndAge:
    def test_in_threshold_rank(self):
        resolver = FixtureResolver(ResolverFixture(
            ranks={"popular.com": 512}))
        assert resolver.lookup_traffic_rank("popular.com").rank == 512

    def test_out_of_threshold_rank(self):
        resolver = FixtureResolver(ResolverFixture(
            ranks={"rare.com": 3_000_000}))
        assert resolver.lookup_traffic_rank("rare.com").rank == 3_000_000

    def test_unknown_rank_absent(self, fixture_resolver):
        assert fixture_resolver.lookup_traffic_rank("unseen.example").rank is None

    def test_age_arithmetic(self):
        resolver = FixtureResolver(ResolverFixture(
            ages={"old.example": date(2017, 5, 16)},
            reference_now=date(2018, 6, 20)))
        age = resolver.lookup_domain_age("old.example")
        assert age.age_days == 400
        assert age.creation_date == date(2017, 5, 16)

    def test_unknown_age_absent(self, fixture_resolver):
        age = fixture_resolver.lookup_domain_age("unseen.example")
        assert age.creation_date is None
        assert age.age_days is None

    def test_created_today_is_zero_days(self):
        resolver = FixtureResolver(ResolverFixture(
            ages={"new.example": date(2018, 6, 20)},
            reference_now=date(2018, 6, 20)))
        assert resolver.lookup_domain_age("new.example").age_days == 0


class TestFixtureFile:
    def test_loads_reference_now(self, resolver_fixture):
        assert resolver_fixture.reference_now == date(2018, 6, 20)

    def test_unknown_top_level_key_rejected(self):
        with pytest.raises(SchemaMismatch):
            ResolverFixture.from_json('{"redirects": {}, "bogus": 1}')

    def test_non_json_rejected(self):
        with pytest.raises(SchemaMismatch):
            ResolverFixture.from_json("not json")

    def test_determinism(self, fixture_resolver):
        first = fixture_resolver.resolve_redirects("http://hop.example/a")
        second = fixture_resolver.resolve_redirects("http://hop.example/a")
        assert first == second
        assert first.hop_count == 2
