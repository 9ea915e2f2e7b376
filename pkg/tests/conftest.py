import pytest

from opmeans.verify import SuiteConfig, run_suite


@pytest.fixture(scope="session")
def default_suite_report():
    """Single full run of the default suite, shared by the acceptance tests."""
    return run_suite(SuiteConfig())
