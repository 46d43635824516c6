"""
Root-system oracles for finite type: positive roots, Kostant's partition
function and Freudenthal's multiplicity recursion.

These live apart from the module builder on purpose; they never look at
F-words or Gram matrices, so agreement with them is an independent check.
"""

from __future__ import annotations

from functools import lru_cache

from .cartan import CartanDatum, DimVector, dim_add, dim_sub, dims_below, is_nonneg, sym_form, tr
from .errors import DepthError, UnsupportedError

_ROOT_CAP = 400


@lru_cache(maxsize=None)
def positive_roots(d: CartanDatum) -> tuple:
    """Positive roots as dimension vectors, by height, via alpha_i-strings."""
    if not d.is_finite_type():
        raise UnsupportedError("positive roots are only enumerated for finite type")
    simple = [d.simple(i) for i in range(d.rank)]
    roots = set(simple)
    layer = list(simple)
    while layer:
        nxt = []
        for beta in layer:
            for i in range(d.rank):
                if beta == simple[i]:
                    continue
                # q = how far down the alpha_i-string goes, p = q - <beta, alpha_i>
                q = 0
                while True:
                    lower = dim_sub(beta, d.simple(i, q + 1))
                    if is_nonneg(lower) and lower in roots:
                        q += 1
                    else:
                        break
                p = q - sym_form(d, beta, simple[i])
                up = dim_add(beta, simple[i])
                if p > 0 and up not in roots:
                    roots.add(up)
                    nxt.append(up)
        layer = nxt
        if len(roots) > _ROOT_CAP:
            raise UnsupportedError("root enumeration did not terminate")
    return tuple(sorted(roots, key=lambda b: (tr(b), b)))


def kostant_partition(d: CartanDatum, nu: DimVector) -> int:
    """Number of ways to write nu as an unordered sum of positive roots (= dim f_nu)."""
    nu = tuple(nu)
    roots = positive_roots(d)
    ways = {d.zero(): 1}
    boxes = list(dims_below(nu))
    for beta in roots:
        for mu in boxes:  # increasing height: unbounded multiplicity of beta
            prev = dim_sub(mu, beta)
            if is_nonneg(prev) and prev in ways:
                ways[mu] = ways.get(mu, 0) + ways[prev]
    return ways.get(nu, 0)


def freudenthal_dims(d: CartanDatum, anchor, depth: DimVector | None = None) -> dict:
    """
    Weight multiplicities of L(anchor) at anchor - nu for all nu <= depth
    (all weights if depth is None).  Only nonzero multiplicities are returned.
    """
    anchor = tuple(anchor)
    if any(x < 0 for x in anchor):
        raise ValueError("highest weight must be dominant")
    roots = positive_roots(d)
    if depth is None:
        # the lowest weight is w0(anchor); every weight depth is bounded by it
        bound = _depth_bound(d, anchor)
    else:
        bound = tuple(depth)
    mult: dict = {}
    for nu in dims_below(bound):
        if not any(nu):
            mult[nu] = 1
            continue
        lhs = 2 * (sum(n * a for n, a in zip(nu, anchor)) + tr(nu)) - sym_form(d, nu, nu)
        rhs = 0
        for beta in roots:
            k = 1
            while True:
                mu = dim_sub(nu, tuple(k * b for b in beta))
                if not is_nonneg(mu):
                    break
                m = mult.get(mu, 0)
                if m:
                    # (lambda + k beta, beta) with lambda + k beta = anchor - mu
                    rhs += m * (sum(b * a for b, a in zip(beta, anchor)) - sym_form(d, mu, beta))
                k += 1
        rhs *= 2
        if lhs == 0:
            if rhs != 0:
                raise DepthError(f"Freudenthal recursion cannot close at depth {nu}")
            continue
        if rhs % lhs:
            raise ArithmeticError(f"non-integral multiplicity at {nu}")
        if rhs // lhs:
            mult[nu] = rhs // lhs
    return mult


def _depth_bound(d: CartanDatum, anchor) -> DimVector:
    # walk down alpha_i-strings until the set of weights stops growing
    seen = {d.zero()}
    frontier = [d.zero()]
    while frontier:
        nxt = []
        for nu in frontier:
            for i in range(d.rank):
                pair = anchor[i] - sum(d.a(i, j) * nu[j] for j in range(d.rank))
                for k in range(1, max(pair, 0) + 1):
                    mu = dim_add(nu, d.simple(i, k))
                    if mu not in seen:
                        seen.add(mu)
                        nxt.append(mu)
        frontier = nxt
        if len(seen) > 100000:
            raise DepthError("weight set too large")
    return tuple(max(nu[i] for nu in seen) for i in range(d.rank))
