from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from qcanon.arith import LaurentPoly, RationalFunc, as_rf, qbinom, qint
from qcanon.cartan import a1xa1, kronecker, type_a
from qcanon.errors import DepthError
from qcanon.freudenthal import freudenthal_dims
from qcanon.hwmodule import (HWModule, ModuleVector, act_e, act_f, act_k, bar_module, factor_cb,
                             shapovalov)

V = LaurentPoly.v()


def weyl_dim_type_a(anchor):
    """Weyl dimension formula for type A_n in fundamental-weight coordinates."""
    n = len(anchor)
    num = Fraction(1)
    for i, j in combinations(range(n + 1), 2):
        num *= Fraction(sum(a + 1 for a in anchor[i:j]), j - i)
    return num


@pytest.mark.parametrize("anchor", [(1,), (2,), (5,), (1, 0), (0, 1), (1, 1), (2, 1), (2, 2), (1, 0, 1)])
def test_total_dim_matches_weyl(anchor):
    m = HWModule(type_a(len(anchor)), anchor)
    assert m.total_dim() == weyl_dim_type_a(anchor)


def test_adjoint_a2_middle_multiplicity():
    m = HWModule(type_a(2), (1, 1))
    assert m.dim((1, 1)) == 2
    assert m.dims() == {(0, 0): 1, (1, 0): 1, (0, 1): 1, (1, 1): 2, (2, 1): 1, (1, 2): 1, (2, 2): 1}


@pytest.mark.parametrize("anchor", [(1, 0), (1, 1), (3, 1), (2, 2)])
def test_dims_match_freudenthal(anchor):
    d = type_a(2)
    assert HWModule(d, anchor).dims() == freudenthal_dims(d, anchor)


def test_a1xa1_is_tensor_product_shape():
    m = HWModule(a1xa1(), (2, 1))
    assert m.total_dim() == 6
    assert all(x == 1 for x in m.dims().values())


def test_sl2_shapovalov_norms():
    # (F^(k) v, F^(k) v) on V(n) is qbinom(n, k) times v^{-k(n-k)}
    for n in range(1, 5):
        m = HWModule(type_a(1), (n,))
        for k in range(n + 1):
            x = act_f(0, k, m.highest())
            expected = as_rf(qbinom(n, k) * V ** (-k * (n - k)))
            assert shapovalov(x, x) == expected


def test_v2_first_norm():
    m = HWModule(type_a(1), (2,))
    x = act_f(0, 1, m.highest())
    assert shapovalov(x, x) == as_rf(1 + V ** -2)


def test_sl2_action_on_string():
    m = HWModule(type_a(1), (3,))
    v0 = m.highest()
    x = act_f(0, 1, v0)
    # E F v = [3] v
    assert act_e(0, 1, x) == v0.scale(as_rf(qint(3)))
    assert act_f(0, 4, v0).is_zero()
    assert act_k(0, 1, x) == x.scale(as_rf(V ** 1))


small = st.dictionaries(st.integers(-2, 2), st.integers(-3, 3), max_size=3).map(LaurentPoly)


def random_vector(m, data):
    coords = {}
    for nu, k in m.basis_index():
        c = data.draw(small)
        if c:
            coords.setdefault(nu, [RationalFunc(0)] * m.dim(nu))[k] = as_rf(c)
    return ModuleVector(m, coords)


@pytest.mark.parametrize("anchor", [(1, 1), (2, 0)])
@given(data=st.data())
def test_contravariance(anchor, data):
    """(F_i x, y) = (x, v K_i^-1 E_i y)"""
    m = HWModule(type_a(2), anchor)
    x, y = random_vector(m, data), random_vector(m, data)
    for i in range(2):
        lhs = shapovalov(act_f(i, 1, x), y)
        rhs = shapovalov(x, act_k(i, -1, act_e(i, 1, y)).scale(as_rf(V)))
        assert lhs == rhs


def test_form_symmetric():
    m = HWModule(type_a(2), (1, 1))
    for nu in m.dims():
        g = m.gram(nu)
        assert all(g[a][b] == g[b][a] for a in range(len(g)) for b in range(len(g)))


def test_factor_cb_bar_invariant_and_almost_orthonormal():
    from qcanon.arith import in_negative_lattice
    m = HWModule(type_a(2), (1, 1))
    cb = factor_cb(m)
    assert len(cb) == 8
    for b in cb:
        assert bar_module(b) == b
        assert in_negative_lattice(shapovalov(b, b), constant=1)


def test_depth_truncation_and_errors():
    d = kronecker()
    m = HWModule(d, (1, 0), depth=(2, 2))
    assert m.dim((0, 1)) == 0
    assert m.dim((1, 0)) == m.dim((1, 1)) == 1
    with pytest.raises(DepthError):
        HWModule(d, (1, 0))
    with pytest.raises(DepthError):
        act_f(0, 3, m.highest())


def test_trivial_module():
    m = HWModule(kronecker(), (0, 0))
    assert m.total_dim() == 1


def test_render():
    m = HWModule(type_a(1), (1,))
    assert m.highest().render() == "[1]v"
    assert act_f(0, 1, m.highest()).render() == "[1]F(1)v"
