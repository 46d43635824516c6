import pytest
from hypothesis import given, strategies as st

from qcanon import linalg
from qcanon.arith import LaurentPoly, RationalFunc, as_rf

V = LaurentPoly.v()
entry = st.dictionaries(st.integers(-2, 2), st.integers(-3, 3), max_size=3).map(lambda t: as_rf(LaurentPoly(t)))
square3 = st.lists(st.lists(entry, min_size=3, max_size=3), min_size=3, max_size=3)


@given(square3)
def test_inverse_or_singular(m):
    if linalg.rank(m) == 3:
        inv = linalg.inverse(m)
        assert linalg.mat_equal(linalg.matmul(m, inv), linalg.identity(3))
    else:
        with pytest.raises(linalg.SingularMatrixError):
            linalg.inverse(m)


@given(square3, st.lists(entry, min_size=3, max_size=3))
def test_solve(m, x):
    if linalg.rank(m) < 3:
        return
    b = linalg.matvec(m, x)
    assert linalg.solve(m, b) == x


def test_echelon_express():
    one, zero = as_rf(1), RationalFunc(0)
    basis = linalg.EchelonBasis(2)
    assert basis.add([one, as_rf(V)])
    assert not basis.add([as_rf(V), as_rf(V ** 2)])
    assert basis.rank == 1
    assert basis.express([as_rf(2), as_rf(2 * V)]) == [as_rf(2)]
    assert not basis.contains([one, zero])


def test_rank_of_rank_one_matrix():
    row = [as_rf(1), as_rf(V), as_rf(V ** 2)]
    assert linalg.rank([row, linalg.scale(as_rf(V + 1), row)]) == 1
