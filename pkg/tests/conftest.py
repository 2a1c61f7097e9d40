import pytest

from phishkit.features import default_config
from phishkit.resolvers import FixtureResolver, ResolverFixture

from helpers import FIXTURES


@pytest.fixture(scope="session")
def resolver_fixture() -> ResolverFixture:
    return ResolverFixture.load(FIXTURES / "resolver_fixture.json")


@pytest.fixture(scope="session")
def fixture_resolver(resolver_fixture) -> FixtureResolver:
    return FixtureResolver(resolver_fixture)


@pytest.fixture(scope="session")
def config():
    return default_config()


@pytest.fixture(scope="session")
def empty_resolver() -> FixtureResolver:
    return FixtureResolver()
