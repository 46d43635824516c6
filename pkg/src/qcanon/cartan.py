"""
Symmetric Cartan data, dimension vectors and weights.

A datum is a loop-free graph on an ordered vertex list; ``a_ij`` is 2 on the
diagonal and minus the number of edges between ``i`` and ``j`` otherwise.
Dimension vectors are plain integer tuples in vertex order.  A weight is
carried as ``(anchor, depth)`` meaning ``anchor - sum depth_j alpha_j`` where
the anchor is given by its pairings with the simple coroots.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .errors import ConfigError

DimVector = tuple


@dataclass(frozen=True)
class CartanDatum:
    vertices: tuple
    edges: tuple = ()  # ((i, j, count), ...) with i < j as vertex positions
    matrix: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = len(self.vertices)
        if len(set(self.vertices)) != n:
            raise ConfigError("duplicate vertex labels")
        a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
        for i, j, c in self.edges:
            if i == j:
                raise ConfigError(f"loop at vertex {self.vertices[i]!r}")
            if c < 0:
                raise ConfigError("edge multiplicities must be nonnegative")
            a[i][j] -= c
            a[j][i] -= c
        object.__setattr__(self, "matrix", tuple(tuple(r) for r in a))

    @classmethod
    def from_edges(cls, vertices: Sequence, edges: Iterable[tuple]) -> "CartanDatum":
        labels = [str(x) for x in vertices]
        pos = {x: k for k, x in enumerate(labels)}
        merged: dict = {}
        for e in edges:
            a, b = str(e[0]), str(e[1])
            c = int(e[2]) if len(e) > 2 else 1
            if a not in pos or b not in pos:
                raise ConfigError(f"edge {a}-{b} references an unknown vertex")
            i, j = sorted((pos[a], pos[b]))
            if i == j:
                raise ConfigError(f"loop at vertex {a!r}")
            merged[(i, j)] = merged.get((i, j), 0) + c
        return cls(tuple(labels), tuple((i, j, c) for (i, j), c in sorted(merged.items()) if c))

    @property
    def rank(self) -> int:
        return len(self.vertices)

    def index(self, label) -> int:
        try:
            return self.vertices.index(str(label))
        except ValueError:
            raise ConfigError(f"unknown vertex {label!r}") from None

    def a(self, i: int, j: int) -> int:
        return self.matrix[i][j]

    def edge_mult(self, i: int, j: int) -> int:
        return 0 if i == j else -self.matrix[i][j]

    def zero(self) -> DimVector:
        return (0,) * self.rank

    def simple(self, i: int, k: int = 1) -> DimVector:
        return tuple(k if j == i else 0 for j in range(self.rank))

    def is_finite_type(self) -> bool:
        """Positive definiteness of the Cartan matrix (leading minors)."""
        from fractions import Fraction

        n = self.rank
        m = [[Fraction(x) for x in row] for row in self.matrix]
        for k in range(n):
            if m[k][k] <= 0:
                return False
            for r in range(k + 1, n):
                f = m[r][k] / m[k][k]
                for c in range(k, n):
                    m[r][c] -= f * m[k][c]
        return True

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [[self.vertices[i], self.vertices[j], c] for i, j, c in self.edges],
        }


def cartan_matrix(d: CartanDatum) -> list[list[int]]:
    return [list(r) for r in d.matrix]


def sym_form(d: CartanDatum, nu: DimVector, mu: DimVector) -> int:
    a = d.matrix
    return sum(nu[i] * a[i][j] * mu[j] for i in range(d.rank) if nu[i] for j in range(d.rank) if mu[j])


def pairing(d: CartanDatum, anchor: Sequence[int], depth: DimVector, i: int) -> int:
    """<anchor - sum depth_j alpha_j, alpha_i^vee>"""
    return anchor[i] - sum(d.matrix[i][j] * depth[j] for j in range(d.rank))


@dataclass(frozen=True)
class Weight:
    anchor: tuple
    depth: tuple

    def pairing(self, d: CartanDatum, i: int) -> int:
        return pairing(d, self.anchor, self.depth, i)


def weight_pairing(d: CartanDatum, lam: Weight, i: int) -> int:
    return lam.pairing(d, i)


def weight_sub(lam: Weight, nu: DimVector) -> Weight:
    return Weight(lam.anchor, dim_add(lam.depth, nu))


def twist_exponent(d: CartanDatum, anchor1, nu1: DimVector, anchor2, nu2: DimVector) -> int:
    """
    Exponent of the diagonal grading twist between a vector of depth ``nu1``
    below ``anchor1`` and one of depth ``nu2`` below ``anchor2``:
    ``(nu1, nu2) - sum nu2_i <anchor1, i> - sum nu1_i <anchor2, i>``.
    It equals ``(lam1, lam2) - (anchor1, anchor2)`` for the two weights.
    """
    return (sym_form(d, nu1, nu2)
            - sum(n * a for n, a in zip(nu2, anchor1))
            - sum(n * a for n, a in zip(nu1, anchor2)))


# --- dimension vectors -------------------------------------------------------

def dim_add(a: DimVector, b: DimVector) -> DimVector:
    return tuple(x + y for x, y in zip(a, b))


def dim_sub(a: DimVector, b: DimVector) -> DimVector:
    return tuple(x - y for x, y in zip(a, b))


def dim_le(a: DimVector, b: DimVector) -> bool:
    return all(x <= y for x, y in zip(a, b))


def is_nonneg(a: DimVector) -> bool:
    return all(x >= 0 for x in a)


def tr(a: DimVector) -> int:
    return sum(a)


def dims_below(bound: DimVector) -> Iterator[DimVector]:
    """All nu <= bound, sorted by total height then lexicographically."""
    boxes = sorted(product(*(range(b + 1) for b in bound)), key=lambda x: (sum(x), x))
    yield from boxes


def dims_of_height(n_vertices: int, height: int) -> list[DimVector]:
    out = []

    def rec(prefix, left, k):
        if k == n_vertices - 1:
            out.append(tuple(prefix + [left]))
            return
        for x in range(left, -1, -1):
            rec(prefix + [x], left - x, k + 1)

    if n_vertices == 0:
        return [()] if height == 0 else []
    rec([], height, 0)
    return sorted(out)


# --- parsing -------------------------------------------------------------------

def load_datum(path: str | Path) -> CartanDatum:
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"Cartan file not found: {p}")
    text = p.read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{p}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return datum_from_json(data, source=str(p))


def datum_from_json(data, source: str = "<json>") -> CartanDatum:
    if not isinstance(data, dict):
        raise ConfigError(f"{source}: top level must be an object")
    verts = data.get("vertices")
    if not isinstance(verts, list) or not verts:
        raise ConfigError(f"{source}: 'vertices' must be a nonempty list")
    for k, x in enumerate(verts):
        if not isinstance(x, (str, int)):
            raise ConfigError(f"{source}: vertices[{k}] must be a string")
    labels = [str(x) for x in verts]
    if len(set(labels)) != len(labels):
        raise ConfigError(f"{source}: duplicate vertex labels")
    edges = data.get("edges", [])
    if not isinstance(edges, list):
        raise ConfigError(f"{source}: 'edges' must be a list")
    parsed = []
    for k, e in enumerate(edges):
        if not isinstance(e, list) or len(e) not in (2, 3):
            raise ConfigError(f"{source}: edges[{k}] must be [u, v] or [u, v, count]")
        for slot in (0, 1):
            if str(e[slot]) not in labels:
                raise ConfigError(f"{source}: edges[{k}][{slot}] references unknown vertex {e[slot]!r}")
        if str(e[0]) == str(e[1]):
            raise ConfigError(f"{source}: edges[{k}] is a loop at {e[0]!r}")
        if len(e) == 3 and (not isinstance(e[2], int) or e[2] < 0):
            raise ConfigError(f"{source}: edges[{k}][2] must be a nonnegative integer")
        parsed.append(e)
    return CartanDatum.from_edges(labels, parsed)


def parse_weights(text: str, d: CartanDatum) -> list[tuple]:
    """'1,0;0,1' -> [(1, 0), (0, 1)]; each coordinate must be a nonnegative int."""
    out = []
    for w, chunk in enumerate(text.split(";")):
        parts = [s.strip() for s in chunk.split(",")]
        if len(parts) != d.rank:
            raise ConfigError(f"weight {w + 1} ({chunk!r}) has {len(parts)} coordinates, expected {d.rank}")
        coords = []
        for c, s in enumerate(parts):
            try:
                x = int(s)
            except ValueError:
                raise ConfigError(f"weight {w + 1}, coordinate {c + 1}: {s!r} is not an integer") from None
            if x < 0:
                raise ConfigError(
                    f"weight {w + 1}, coordinate {c + 1} (vertex {d.vertices[c]}): {x} is negative; "
                    "weights must be dominant")
            coords.append(x)
        out.append(tuple(coords))
    return out


def parse_dimvector(text: str, d: CartanDatum) -> DimVector:
    parts = [s.strip() for s in text.split(",")]
    if len(parts) != d.rank:
        raise ConfigError(f"depth {text!r} has {len(parts)} coordinates, expected {d.rank}")
    try:
        vals = tuple(int(s) for s in parts)
    except ValueError:
        raise ConfigError(f"depth {text!r} must be comma-separated integers") from None
    if any(x < 0 for x in vals):
        raise ConfigError(f"depth {text!r} has a negative coordinate")
    return vals


# --- named data ------------------------------------------------------------------

def type_a(m: int) -> CartanDatum:
    return CartanDatum.from_edges([str(k) for k in range(1, m + 1)],
                                  [(str(k), str(k + 1), 1) for k in range(1, m)])


def a1xa1() -> CartanDatum:
    return CartanDatum.from_edges(["1", "2"], [])


def kronecker() -> CartanDatum:
    return CartanDatum.from_edges(["1", "2"], [("1", "2", 2)])


NAMED = {
    "A1": lambda: type_a(1),
    "A2": lambda: type_a(2),
    "A3": lambda: type_a(3),
    "A1xA1": a1xa1,
    "Kronecker": kronecker,
}


def named_datum(name: str) -> CartanDatum:
    for key, make in NAMED.items():
        if key.lower() == name.lower():
            return make()
    if name.startswith("A") and name[1:].isdigit():
        return type_a(int(name[1:]))
    raise ConfigError(f"unknown Cartan type {name!r}; known: {', '.join(NAMED)} or A<n>")
