from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from qcanon import acceptance

settings.register_profile("qcanon", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("qcanon")


def evaluate(x, at: Fraction) -> Fraction:
    """Numeric value of a Laurent polynomial or rational function at v = at."""
    if hasattr(x, "num"):
        return evaluate(x.num, at) / evaluate(x.den, at)
    return sum((Fraction(c) * at ** k for k, c in x.items()), Fraction(0))


@pytest.fixture(autouse=True, scope="module")
def _fresh_caches():
    acceptance.reset_caches()
    yield
