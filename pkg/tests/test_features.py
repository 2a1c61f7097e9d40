"""The ten feature rules and their composition."""

import numpy as np
import pytest

from phishkit.errors import SchemaMismatch
from phishkit.features import (ALL_FEATURES, FEATURE_NAMES, FeatureConfig,
                               FeatureVector, default_config, extract_vector,
                               f1_ssl, f2_ca, f3_blacklist, f4_redirect,
                               f5_hidden, f6_clear_ip, f7_traffic, f8_age,
                               f9_sender, f10_attachment)
from phishkit.resolvers import FixtureResolver, ResolverFixture

from helpers import attachment, link, make_email, random_email


class TestF1Ssl:
    def test_https_only_is_clean(self, config, empty_resolver):
        email = make_email(links=[link("https://a.example/x")])
        assert f1_ssl(email, config, empty_resolver) == 0

    def test_http_fires(self, config, empty_resolver):
        email = make_email(links=[link("http://a.example/x")])
        assert f1_ssl(email, config, empty_resolver) == 1

    def test_no_links_is_clean(self, config, empty_resolver):
        assert f1_ssl(make_email(), config, empty_resolver) == 0


class TestF2Ca:
    def test_trusted_issuer_substring(self, config, fixture_resolver):
        email = make_email(links=[link("https://files.dropbox.com/s/abc")])
        assert f2_ca(email, config, fixture_resolver) == 0

    def test_self_signed_fires(self, config, fixture_resolver):
        email = make_email(links=[link("https://self.example/login")])
        assert f2_ca(email, config, fixture_resolver) == 1

    def test_absent_certificate_fires(self, config, fixture_resolver):
        email = make_email(links=[link("https://no-cert.example/")])
        assert f2_ca(email, config, fixture_resolver) == 1

    def test_untrusted_issuer_fires(self, config, fixture_resolver):
        email = make_email(links=[link("https://secure-pay.example/login")])
        assert f2_ca(email, config, fixture_resolver) == 1

    def test_http_links_not_checked(self, config, fixture_resolver):
        email = make_email(links=[link("http://no-cert.example/")])
        assert f2_ca(email, config, fixture_resolver) == 0


class TestF3Blacklist:
    def test_keyword_in_body(self, config, empty_resolver):
        email = make_email(body="please Verify Now")
        assert f3_blacklist(email, config, empty_resolver) == 1

    def test_clean_body(self, config, empty_resolver):
        email = make_email(body="meeting at noon")
        assert f3_blacklist(email, config, empty_resolver) == 0

    def test_keyword_in_subject_only(self, config, empty_resolver):
        email = make_email(subject="Update NOW", body="nothing else")
        assert f3_blacklist(email, config, empty_resolver) == 1


class TestF4Redirect:
    def test_identity_clean(self, config, fixture_resolver):
        email = make_email(links=[link("https://files.dropbox.com/s/abc")])
        assert f4_redirect(email, config, fixture_resolver) == 0

    def test_one_hop_fires(self, config, fixture_resolver):
        email = make_email(links=[link("http://tracking.mailer.example/r/1")])
        assert f4_redirect(email, config, fixture_resolver) == 1

    def test_resolution_failure_fires(self, config, fixture_resolver):
        email = make_email(links=[link("http://broken.example/x")])
        assert f4_redirect(email, config, fixture_resolver) == 1

    def test_runaway_chain_fires(self, config):
        redirects = {"http://c/%d" % i: "http://c/%d" % (i + 1)
                     for i in range(20)}
        resolver = FixtureResolver(ResolverFixture(redirects=redirects))
        email = make_email(links=[link("http://c/0")])
        assert f4_redirect(email, config, resolver) == 1


class TestF5Hidden:
    def test_shortener_host(self, config, empty_resolver):
        email = make_email(links=[link("https://goo.gl/abc")])
        assert f5_hidden(email, config, empty_resolver) == 1

    def test_plain_visible_url(self, config, empty_resolver):
        email = make_email(links=[link("https://a.example/x")])
        assert f5_hidden(email, config, empty_resolver) == 0

    def test_image_wrapped(self, config, empty_resolver):
        email = make_email(links=[link("https://a.example/x", wrapped=True)])
        assert f5_hidden(email, config, empty_resolver) == 1


class TestF6ClearIp:
    def test_ip_literal(self, config, empty_resolver):
        email = make_email(links=[link("https://50.10.125.26/index.php")])
        assert f6_clear_ip(email, config, empty_resolver) == 1

    def test_named_host(self, config, empty_resolver):
        email = make_email(links=[link("https://example.com")])
        assert f6_clear_ip(email, config, empty_resolver) == 0

    def test_no_links(self, config, empty_resolver):
        assert f6_clear_ip(make_email(), config, empty_resolver) == 0


class TestF7Traffic:
    def test_popular_host_clean(self, config, fixture_resolver):
        email = make_email(links=[link("https://files.dropbox.com/s/abc")])
        assert f7_traffic(email, config, fixture_resolver) == 0

    def test_rare_host_fires(self, config, fixture_resolver):
        email = make_email(links=[link("https://rare-blog.example/post/7")])
        assert f7_traffic(email, config, fixture_resolver) == 1

    def test_rank_exactly_at_threshold_is_clean(self, config, fixture_resolver):
        email = make_email(links=[link("https://boundary.example/article")])
        assert f7_traffic(email, config, fixture_resolver) == 0

    def test_strict_variant_fires_at_threshold(self, fixture_resolver):
        strict = FeatureConfig(rank_inclusive=False)
        email = make_email(links=[link("https://boundary.example/article")])
        assert f7_traffic(email, strict, fixture_resolver) == 1

    def test_unknown_rank_with_link_fires(self, config, fixture_resolver):
        email = make_email(links=[link("https://unseen.example/x")])
        assert f7_traffic(email, config, fixture_resolver) == 1

    def test_no_links_clean(self, config, fixture_resolver):
        assert f7_traffic(make_email(), config, fixture_resolver) == 0


class TestF8Age:
    def test_old_domain_clean(self, config, fixture_resolver):
        email = make_email(links=[link("https://files.dropbox.com/s/abc")])
        assert f8_age(email, config, fixture_resolver) == 0

    def test_young_domain_fires(self, config, fixture_resolver):
        email = make_email(links=[link("https://fresh-site.example/start")])
        assert f8_age(email, config, fixture_resolver) == 1

    def test_unknown_age_with_link_fires(self, config, fixture_resolver):
        email = make_email(links=[link("https://unseen.example/x")])
        assert f8_age(email, config, fixture_resolver) == 1

    def test_age_exactly_one_year_clean(self, config, fixture_resolver):
        email = make_email(links=[link("https://boundary.example/article")])
        assert f8_age(email, config, fixture_resolver) == 0


class TestF9Sender:
    def test_credible_domain(self, config, empty_resolver):
        email = make_email(sender="a@dropbox.com")
        assert f9_sender(email, config, empty_resolver) == 0

    def test_strange_domain_fires(self, config, empty_resolver):
        email = make_email(sender="a@sharing.dboxfile.com")
        assert f9_sender(email, config, empty_resolver) == 1

    def test_university_domain(self, config, empty_resolver):
        email = make_email(sender="a@und.edu")
        assert f9_sender(email, config, empty_resolver) == 0

    def test_match_is_case_insensitive(self, empty_resolver):
        cfg = FeatureConfig(credible_domains=["Dropbox.COM"])
        email = make_email(sender="a@dropbox.com")
        assert f9_sender(email, cfg, empty_resolver) == 0


class TestF10Attachment:
    def test_exe_fires(self, config, empty_resolver):
        email = make_email(attachments=[attachment("invoice.exe")])
        assert f10_attachment(email, config, empty_resolver) == 1

    def test_pdf_clean(self, config, empty_resolver):
        email = make_email(attachments=[attachment("report.pdf")])
        assert f10_attachment(email, config, empty_resolver) == 0

    def test_no_attachments_clean(self, config, empty_resolver):
        assert f10_attachment(make_email(), config, empty_resolver) == 0


class TestExtractVector:
    def test_clean_email_all_zero(self, config, fixture_resolver):
        vector = extract_vector(make_email(sender="a@und.edu", body="hello"),
                                config, fixture_resolver)
        assert vector.values() == (0,) * 10

    def test_vector_dimension_and_order(self, config, fixture_resolver):
        vector = extract_vector(random_email(np.random.default_rng(5)),
                                config, fixture_resolver)
        assert len(vector.values()) == 10
        assert len(FEATURE_NAMES) == 10
        assert vector.label is None

    def test_phishing_fixture_fires_expected_subset(self, config,
                                                    fixture_resolver):
        email = make_email(
            sender="security@sharing.dboxfile.com",
            body="please verify now at http://193.27.14.5/renew",
            links=[link("http://193.27.14.5/renew")],
            attachments=[attachment("payload.exe")])
        vector = extract_vector(email, config, fixture_resolver)
        assert vector.f1_no_https == 1
        assert vector.f3_blacklist_keyword == 1
        assert vector.f6_ip_address_host == 1
        assert vector.f10_bad_attachment == 1

    def test_matches_componentwise_application(self, config, fixture_resolver):
        rng = np.random.default_rng(77)
        for _ in range(60):
            email = random_email(rng)
            vector = extract_vector(email, config, fixture_resolver)
            componentwise = tuple(rule(email, config, fixture_resolver)
                                  for rule in ALL_FEATURES)
            assert vector.values() == componentwise

    def test_deterministic_under_fixture_resolver(self, config,
                                                  fixture_resolver):
        rng = np.random.default_rng(99)
        for _ in range(20):
            email = random_email(rng)
            assert extract_vector(email, config, fixture_resolver) == \
                extract_vector(email, config, fixture_resolver)


class TestFeatureIndependence:
    def test_body_never_changes_f9_f10(self, config, fixture_resolver):
        rng = np.random.default_rng(11)
        for _ in range(20):
            email = random_email(rng)
            mutated = make_email(sender=email.sender_address,
                                 subject=email.subject,
                                 body=email.body_text + " extra words",
                                 links=email.links,
                                 attachments=email.attachments)
            before = extract_vector(email, config, fixture_resolver)
            after = extract_vector(mutated, config, fixture_resolver)
            assert before.f9_unknown_sender_domain == after.f9_unknown_sender_domain
            assert before.f10_bad_attachment == after.f10_bad_attachment

    def test_removing_links_forces_vacuous_defaults(self, config,
                                                    fixture_resolver):
        rng = np.random.default_rng(13)
        for _ in range(20):
            email = random_email(rng)
            stripped = make_email(sender=email.sender_address,
                                  subject=email.subject, body=email.body_text,
                                  attachments=email.attachments)
            vector = extract_vector(stripped, config, fixture_resolver)
            assert vector.f1_no_https == 0
            assert vector.f2_untrusted_ca == 0
            assert vector.f4_redirect_mismatch == 0
            assert vector.f5_hidden_link == 0
            assert vector.f6_ip_address_host == 0
            assert vector.f7_unpopular_host == 0
            assert vector.f8_young_domain == 0

    def test_f3_monotone_under_keyword_addition(self, config, empty_resolver):
        rng = np.random.default_rng(17)
        for _ in range(20):
            email = random_email(rng)
            more = make_email(sender=email.sender_address,
                              subject=email.subject,
                              body=email.body_text + " click now",
                              links=email.links,
                              attachments=email.attachments)
            assert f3_blacklist(more, config, empty_resolver) >= \
                f3_blacklist(email, config, empty_resolver)
            assert f3_blacklist(more, config, empty_resolver) == 1

    def test_f10_monotone_under_attachment_addition(self, config,
                                                    empty_resolver):
        rng = np.random.default_rng(19)
        for _ in range(20):
            email = random_email(rng)
            more = make_email(sender=email.sender_address,
                              subject=email.subject, body=email.body_text,
                              links=email.links,
                              attachments=list(email.attachments)
                              + [attachment("extra.exe")])
            assert f10_attachment(more, config, empty_resolver) == 1


class TestFeatureConfig:
    def test_defaults_carry_published_constants(self, config):
        assert "verify now" in config.blacklist_keywords
        assert "click now" in config.blacklist_keywords
        assert "valid in 24h" in config.blacklist_keywords
        assert "update now" in config.blacklist_keywords
        assert {"godaddy", "comodo", "symantec"} <= set(config.trusted_cas)
        assert {"goo.gl", "j.mp"} <= set(config.shortener_hosts)
        assert {"exe", "dll"} <= set(config.suspicious_extensions)
        assert config.rank_threshold == 150_000
        assert config.min_age_days == 365

    def test_json_roundtrip(self, config):
        assert FeatureConfig.from_json(config.to_json()) == config

    def test_unknown_key_rejected(self):
        with pytest.raises(SchemaMismatch):
            FeatureConfig.from_json('{"bogus": 1}')

    def test_missing_key_rejected(self):
        with pytest.raises(SchemaMismatch):
            FeatureConfig.from_json('{"rank_threshold": 10}')

    def test_shipped_file_equals_code_defaults(self):
        assert default_config() == FeatureConfig()


class TestFeatureVector:
    def test_rejects_non_binary_component(self):
        with pytest.raises(ValueError):
            FeatureVector(2, 0, 0, 0, 0, 0, 0, 0, 0, 0)

    def test_fired_names(self):
        vector = FeatureVector(1, 0, 0, 0, 0, 0, 0, 0, 0, 1)
        assert vector.fired() == ("f1_no_https", "f10_bad_attachment")

    def test_with_label(self):
        vector = FeatureVector(*([0] * 10)).with_label("phishing")
        assert vector.label == "phishing"
