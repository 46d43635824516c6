import pytest

from qcanon import linalg
from qcanon.arith import LaurentPoly, RationalFunc, as_rf
from qcanon.cartan import a1xa1, type_a
from qcanon.errors import ConsistencyError
from qcanon.hwmodule import HWModule
from qcanon.rmatrix import (commutor, commutor_oracle, linearity_residuals, minimal_polynomial, normalized,
                            schur_weyl_demo, ybe_check)

V = LaurentPoly.v()
PAIRS = [
    (type_a(1), (1,), (1,)),
    (type_a(1), (2,), (1,)),
    (type_a(2), (1, 0), (0, 1)),
    (a1xa1(), (1, 0), (0, 1)),
]


@pytest.mark.parametrize("d,a,b", PAIRS)
def test_theta_commutor_matches_oracle(d, a, b):
    ma, mb = HWModule(d, a), HWModule(d, b)
    r = commutor(ma, mb)
    assert normalized(r)
    assert not linearity_residuals(r)
    assert r.equals(commutor_oracle(ma, mb))


def test_v1v1_trace():
    """Eigenvalue 1 on the three-dimensional summand and -v^2 on the trivial one."""
    m = HWModule(type_a(1), (1,))
    full = commutor(m, m).matrix()
    assert len(full) == 4
    assert sum((full[k][k] for k in range(4)), RationalFunc(0)) == as_rf(3 - V ** 2)


def test_wrong_twist_is_rejected():
    m = HWModule(type_a(1), (1,))
    with pytest.raises(ConsistencyError):
        commutor(m, m, twist_sign=-1)
    bad = commutor(m, m, verify=False, twist_sign=-1)
    assert linearity_residuals(bad)


@pytest.mark.parametrize("d,anchors", [
    (type_a(1), [(1,), (1,), (1,)]),
    (type_a(1), [(2,), (1,), (1,)]),
    (type_a(2), [(1, 0), (1, 0), (1, 0)]),
    (type_a(2), [(1, 0), (0, 1), (1, 0)]),
])
def test_yang_baxter(d, anchors):
    rep = ybe_check(d, anchors)
    assert rep["equal"]
    assert rep["max_residual_degree"] == 0


def test_ybe_dimensions():
    assert ybe_check(type_a(1), [(1,)] * 3)["dim"] == 8
    assert ybe_check(type_a(2), [(1, 0)] * 3)["dim"] == 27


def test_schur_weyl():
    rep = schur_weyl_demo(2, 3)
    assert rep["braid_holds"]
    assert rep["minimal_polynomial_degree"] == 2
    assert rep["minimal_polynomial"] == ["-v^2", "v^2 - 1", "1"]  # (x - 1)(x + v^2)
    assert set(rep["eigenvalues"]) == {"1", "-v^2"}


def test_schur_weyl_rank_one_four_factors():
    rep = schur_weyl_demo(1, 4)
    assert rep["braid_holds"]
    assert rep["dim"] == 16


def test_minimal_polynomial_of_diagonal():
    one, two = as_rf(1), as_rf(2)
    zero = RationalFunc(0)
    poly = minimal_polynomial([[one, zero], [zero, two]])
    assert poly == [two, as_rf(-3), one]
