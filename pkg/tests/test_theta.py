import pytest

from qcanon import theta as T
from qcanon.arith import LaurentPoly, RationalFunc, as_rf, qfact
from qcanon.cartan import a1xa1, dims_of_height, type_a
from qcanon.hwmodule import HWModule
from qcanon.tensor import TensorModule, act_tensor, bar_tensor

V = LaurentPoly.v()


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_rank_one_closed_form(n):
    """Theta_n = (-1)^n v^{-n(n-1)/2} (v - v^-1)^n [n]! F^(n) (x) E^(n) on sl2."""
    comp = T.theta(type_a(1), (n,))
    assert comp.pivots == (((0, n),),)
    expected = (-1) ** n * V ** (-n * (n - 1) // 2) * (V - V ** -1) ** n * qfact(n)
    assert comp.coeffs == ((as_rf(expected),),)


@pytest.mark.parametrize("d", [type_a(1), type_a(2), a1xa1()], ids=["A1", "A2", "A1xA1"])
def test_theta_zero_is_identity(d):
    comp = T.theta(d, d.zero())
    assert comp.pivots == ((),)
    assert comp.coeffs == ((RationalFunc(1),),)


@pytest.mark.parametrize("d", [type_a(1), type_a(2), a1xa1()], ids=["A1", "A2", "A1xA1"])
@pytest.mark.parametrize("h", [1, 2, 3])
def test_dual_basis_matches_intertwiner(d, h):
    for nu in dims_of_height(d.rank, h):
        assert T.components_equal(d, T.theta(d, nu), T.theta_by_intertwiner(d, nu))


@pytest.mark.parametrize("d", [type_a(1), type_a(2)], ids=["A1", "A2"])
def test_inverse_is_bar(d):
    for h in range(1, 4):
        for nu in dims_of_height(d.rank, h):
            assert T.check_inverse(d, nu)
            assert T.components_equal(d, T.theta_inverse(d, nu), T.theta(d, nu).bar())


def test_wrong_convention_fails_oracle():
    d = type_a(1)
    assert not T.components_equal(d, T.theta(d, (1,), sign=1, vexp=1), T.theta_by_intertwiner(d, (1,)))
    assert not T.components_equal(d, T.theta(d, (1,), sign=-1, vexp=-1), T.theta_by_intertwiner(d, (1,)))


def test_convention_resolves_uniquely():
    assert T.resolve_convention(type_a(2), 2) == [(T.CONVENTION["theta_sign"], T.CONVENTION["theta_v_exponent"])]


BAR_GEN = {"E": "E", "F": "F", "K": "Kinv", "Kinv": "K"}


def _bar_conj(gen, i, x):
    """(bar Delta)(u) x computed as bar(Delta(bar u) bar x); bar swaps K and K^-1."""
    return bar_tensor(act_tensor(BAR_GEN[gen], i, bar_tensor(x)))


@pytest.mark.parametrize("anchors", [[(1,), (1,)], [(2,), (1,)]])
def test_intertwines_on_tensor_products(anchors):
    """u Theta = Theta (bar Delta)(u) on every pure tensor."""
    d = type_a(1)
    tm = TensorModule([HWModule(d, a) for a in anchors])
    for key in tm.basis_keys():
        x = tm.pure(key)
        for gen in ("E", "F", "K", "Kinv"):
            assert act_tensor(gen, 0, T.apply_theta(x)) == T.apply_theta(_bar_conj(gen, 0, x))


def test_apply_inverse_roundtrip():
    d = type_a(2)
    tm = TensorModule([HWModule(d, (1, 0)), HWModule(d, (0, 1))])
    for key in tm.basis_keys():
        x = tm.pure(key)
        assert T.apply_theta_inverse(T.apply_theta(x)) == x
