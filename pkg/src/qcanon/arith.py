"""
Exact scalars: Laurent polynomials in ``v`` with integer coefficients,
rational functions in ``v`` over the rationals, the bar involution
``v -> v^-1`` and balanced quantum integers.

Everything here is an immutable value.  Integer coefficients are Python
ints, so there is no overflow however large Gram inversions get.

>>> v = LaurentPoly.v()
>>> (v - v**-1) * (v + v**-1)
LaurentPoly('v^2 - v^-2')
>>> qbinom(4, 2)
LaurentPoly('v^4 + v^2 + 2 + v^-2 + v^-4')
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Mapping, Union

__all__ = [
    "LaurentPoly",
    "RationalFunc",
    "Scalar",
    "as_rf",
    "bar",
    "qint",
    "qfact",
    "qbinom",
    "series_at_infinity",
    "in_negative_lattice",
]


class LaurentPoly:
    """Element of Z[v, v^-1], stored as a sparse exponent -> coefficient map."""

    __slots__ = ("_t", "_hash")

    def __init__(self, terms: Mapping[int, int] | int | None = None):
        if terms is None:
            self._t = {}
        elif isinstance(terms, int):
            self._t = {0: terms} if terms else {}
        else:
            self._t = {int(e): int(c) for e, c in terms.items() if c}
        self._hash = None

    @classmethod
    def _raw(cls, t: dict) -> "LaurentPoly":
        # caller guarantees no zero coefficients
        p = cls.__new__(cls)
        p._t = t
        p._hash = None
        return p

    @classmethod
    def v(cls, k: int = 1) -> "LaurentPoly":
        return cls._raw({k: 1})

    @classmethod
    def monomial(cls, k: int, c: int = 1) -> "LaurentPoly":
        return cls._raw({k: c}) if c else cls._raw({})

    # --- structure -----------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._t)

    def items(self):
        """(exponent, coefficient) pairs in ascending exponent order."""
        return sorted(self._t.items())

    def is_zero(self) -> bool:
        return not self._t

    def __bool__(self) -> bool:
        return bool(self._t)

    def min_exp(self) -> int:
        return min(self._t)

    def max_exp(self) -> int:
        return max(self._t)

    def coeff(self, k: int) -> int:
        return self._t.get(k, 0)

    def is_constant(self) -> bool:
        return not self._t or (len(self._t) == 1 and 0 in self._t)

    def constant(self) -> int:
        return self._t.get(0, 0)

    def is_monomial(self) -> bool:
        return len(self._t) == 1

    def content(self) -> int:
        g = 0
        for c in self._t.values():
            g = gcd(g, c)
        return g

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._t.items()))
        return self._hash

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self._t == other._t
        if isinstance(other, int):
            return self._t == ({0: other} if other else {})
        if isinstance(other, RationalFunc):
            return other == self
        return NotImplemented

    # --- ring operations ---------------------------------------------------
    def __add__(self, other):
        if isinstance(other, int):
            other = LaurentPoly(other)
        elif not isinstance(other, LaurentPoly):
            return NotImplemented
        if not other._t:
            return self
        if not self._t:
            return other
        t = dict(self._t)
        for e, c in other._t.items():
            s = t.get(e, 0) + c
            if s:
                t[e] = s
            else:
                t.pop(e, None)
        return LaurentPoly._raw(t)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw({e: -c for e, c in self._t.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = LaurentPoly(other)
        elif not isinstance(other, LaurentPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if not other:
                return LaurentPoly._raw({})
            return LaurentPoly._raw({e: c * other for e, c in self._t.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        a, b = self._t, other._t
        if not a or not b:
            return LaurentPoly._raw({})
        if len(b) == 1:
            (eb, cb), = b.items()
            return LaurentPoly._raw({e + eb: c * cb for e, c in a.items()})
        if len(a) == 1:
            (ea, ca), = a.items()
            return LaurentPoly._raw({e + ea: c * ca for e, c in b.items()})
        t: dict = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = e1 + e2
                t[e] = t.get(e, 0) + c1 * c2
        return LaurentPoly._raw({e: c for e, c in t.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self._t) != 1:
                raise ValueError("only monomials are invertible in Z[v, v^-1]")
            (e, c), = self._t.items()
            if c not in (1, -1):
                raise ValueError("only unit monomials are invertible in Z[v, v^-1]")
            return LaurentPoly._raw({e * n: c ** (-n)})
        result = LaurentPoly(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, other):
        return as_rf(self) / other

    def __rtruediv__(self, other):
        return as_rf(other) / self

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by v^k."""
        if not k:
            return self
        return LaurentPoly._raw({e + k: c for e, c in self._t.items()})

    def bar(self) -> "LaurentPoly":
        return LaurentPoly._raw({-e: c for e, c in self._t.items()})

    def divexact(self, other: "LaurentPoly | int") -> "LaurentPoly":
        """Exact quotient in Z[v, v^-1]; raises ``ArithmeticError`` otherwise."""
        if isinstance(other, int):
            other = LaurentPoly(other)
        if not other._t:
            raise ZeroDivisionError("division by zero Laurent polynomial")
        if not self._t:
            return self
        if len(other._t) == 1:
            (eb, cb), = other._t.items()
            t = {}
            for e, c in self._t.items():
                q, r = divmod(c, cb)
                if r:
                    raise ArithmeticError("inexact division")
                t[e - eb] = q
            return LaurentPoly._raw(t)
        rem = dict(self._t)
        top_b = other.max_exp()
        lc_b = other._t[top_b]
        low_b = other.min_exp()
        quot: dict = {}
        low_a = self.min_exp()
        while rem:
            top = max(rem)
            if top - top_b < low_a - low_b:
                raise ArithmeticError("inexact division")
            q, r = divmod(rem[top], lc_b)
            if r:
                raise ArithmeticError("inexact division")
            k = top - top_b
            quot[k] = q
            for e, c in other._t.items():
                s = rem.get(e + k, 0) - q * c
                if s:
                    rem[e + k] = s
                else:
                    rem.pop(e + k, None)
        return LaurentPoly._raw(quot)

    # --- rendering ---------------------------------------------------------
    def __str__(self) -> str:
        if not self._t:
            return "0"
        parts = []
        for e, c in sorted(self._t.items(), reverse=True):
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if e == 0:
                body = str(a)
            else:
                mono = "v" if e == 1 else f"v^{e}"
                body = mono if a == 1 else f"{a}*{mono}"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"LaurentPoly('{self}')"

    def to_json(self) -> dict:
        return {str(e): c for e, c in sorted(self._t.items(), reverse=True)}

    @classmethod
    def from_json(cls, data: Mapping[str, int]) -> "LaurentPoly":
        return cls({int(k): int(c) for k, c in data.items()})

    _TERM = re.compile(r"([+-]?)(?:(\d+)\*)?v(?:\^(-?\d+))?|([+-]?)(\d+)")

    @classmethod
    def parse(cls, text: str) -> "LaurentPoly":
        """Inverse of ``str``: accepts sums like ``'3*v^2 - v + 2 - v^-1'``."""
        s = text.replace(" ", "")
        if not s:
            raise ValueError("empty Laurent polynomial")
        t: dict = {}
        pos = 0
        while pos < len(s):
            m = cls._TERM.match(s, pos)
            if not m or m.end() == pos or (pos > 0 and s[pos] not in "+-"):
                raise ValueError(f"cannot parse Laurent polynomial {text!r} at {pos}")
            if m.group(5) is not None:
                sign = -1 if m.group(4) == "-" else 1
                e, c = 0, int(m.group(5))
            else:
                sign = -1 if m.group(1) == "-" else 1
                c = int(m.group(2)) if m.group(2) else 1
                e = int(m.group(3)) if m.group(3) else 1
            t[e] = t.get(e, 0) + sign * c
            pos = m.end()
        return cls(t)


# --- dense integer polynomial helpers (low degree first) -------------------

def _to_dense(p: LaurentPoly) -> tuple[int, list]:
    lo = p.min_exp()
    hi = p.max_exp()
    d = [0] * (hi - lo + 1)
    for e, c in p._t.items():
        d[e - lo] = c
    return lo, d


def _from_dense(d: list, shift: int = 0) -> LaurentPoly:
    return LaurentPoly._raw({i + shift: c for i, c in enumerate(d) if c})


def _content(d: list) -> int:
    g = 0
    for c in d:
        g = gcd(g, c)
    return g


def _primitive(d: list) -> list:
    g = _content(d)
    if g > 1:
        d = [c // g for c in d]
    if d and d[-1] < 0:
        d = [-c for c in d]
    return d


def _trim(d: list) -> list:
    while d and d[-1] == 0:
        d.pop()
    return d


def _prem(a: list, b: list) -> list:
    """Pseudo-remainder of a by b over Z."""
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    while len(a) - 1 >= db and a:
        la = a[-1]
        k = len(a) - 1 - db
        a = [c * lb for c in a]
        for i, c in enumerate(b):
            a[i + k] -= la * c
        _trim(a)
    return a


def _poly_gcd(a: list, b: list) -> list:
    """Primitive gcd in Z[v] (positive leading coefficient)."""
    a = _primitive(_trim(list(a)))
    b = _primitive(_trim(list(b)))
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _trim(_prem(a, b))
        a, b = b, (_primitive(r) if r else r)
    return _primitive(a)


def _poly_divexact(a: list, b: list) -> list:
    a = list(a)
    db = len(b) - 1
    q = [0] * (len(a) - db)
    for k in range(len(a) - 1 - db, -1, -1):
        c, r = divmod(a[k + db], b[-1])
        if r:
            raise ArithmeticError("inexact polynomial division")
        q[k] = c
        if c:
            for i, bc in enumerate(b):
                a[i + k] -= c * bc
    if any(a):
        raise ArithmeticError("inexact polynomial division")
    return q


_ZERO = LaurentPoly()
_ONE = LaurentPoly(1)


class RationalFunc:
    """
    Element of Q(v) in lowest terms.

    Normal form: the denominator is a genuine polynomial in ``v`` with nonzero
    constant term and positive leading coefficient, numerator and denominator
    share no polynomial factor and no integer content.  Two equal functions
    therefore have identical stored data.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: "LaurentPoly | int" = 0, den: "LaurentPoly | int" = 1):
        if isinstance(num, int):
            num = LaurentPoly(num)
        if isinstance(den, int):
            den = LaurentPoly(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        self.num, self.den = _normalize(num, den)
        self._hash = None

    @classmethod
    def _raw(cls, num: LaurentPoly, den: LaurentPoly) -> "RationalFunc":
        r = cls.__new__(cls)
        r.num = num
        r.den = den
        r._hash = None
        return r

    @classmethod
    def from_laurent(cls, p: LaurentPoly) -> "RationalFunc":
        return cls._raw(p, _ONE)

    def is_laurent(self) -> bool:
        return self.den == _ONE

    def to_laurent(self) -> LaurentPoly:
        if not self.is_laurent():
            raise ArithmeticError(f"{self} is not a Laurent polynomial")
        return self.num

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __eq__(self, other):
        if isinstance(other, RationalFunc):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, LaurentPoly)):
            return self.den == _ONE and self.num == other
        return NotImplemented

    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if not other.num._t:
            return self
        if not self.num._t:
            return other
        if self.den == _ONE and other.den == _ONE:
            return RationalFunc._raw(self.num + other.num, _ONE)
        if self.den == other.den:
            return RationalFunc(self.num + other.num, self.den)
        return RationalFunc(self.num * other.den + other.num * self.den,
                            self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunc._raw(-self.num, self.den)

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if not self.num._t or not other.num._t:
            return RationalFunc._raw(_ZERO, _ONE)
        if self.den == _ONE and other.den == _ONE:
            return RationalFunc._raw(self.num * other.num, _ONE)
        return RationalFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if not other.num._t:
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, n: int):
        if n < 0:
            return RationalFunc(1) / (self ** (-n))
        result = RationalFunc._raw(_ONE, _ONE)
        for _ in range(n):
            result = result * self
        return result

    def inverse(self) -> "RationalFunc":
        return RationalFunc(1) / self

    def bar(self) -> "RationalFunc":
        if self.den == _ONE:
            return RationalFunc._raw(self.num.bar(), _ONE)
        return RationalFunc(self.num.bar(), self.den.bar())

    def __str__(self) -> str:
        if self.den == _ONE:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self) -> str:
        return f"RationalFunc('{self}')"

    def to_json(self):
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, data) -> "RationalFunc":
        return cls(LaurentPoly.from_json(data["num"]), LaurentPoly.from_json(data["den"]))

    @classmethod
    def parse(cls, text: str) -> "RationalFunc":
        s = text.strip()
        m = re.fullmatch(r"\((.*)\)/\((.*)\)", s)
        if m:
            return cls(LaurentPoly.parse(m.group(1)), LaurentPoly.parse(m.group(2)))
        return cls(LaurentPoly.parse(s))


Scalar = Union[int, LaurentPoly, RationalFunc]


def _coerce(x) -> RationalFunc | None:
    if isinstance(x, RationalFunc):
        return x
    if isinstance(x, LaurentPoly):
        return RationalFunc._raw(x, _ONE)
    if isinstance(x, int):
        return RationalFunc._raw(LaurentPoly(x), _ONE)
    return None


def as_rf(x: Scalar) -> RationalFunc:
    r = _coerce(x)
    if r is None:
        raise TypeError(f"cannot use {type(x).__name__} as a scalar")
    return r


def _normalize(num: LaurentPoly, den: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    if num.is_zero():
        return _ZERO, _ONE
    lo_n, n = _to_dense(num)
    lo_d, d = _to_dense(den)
    shift = lo_n - lo_d
    if len(d) > 1 and len(n) > 1:
        g = _poly_gcd(n, d)
        if len(g) > 1:
            n = _poly_divexact(n, g)
            d = _poly_divexact(d, g)
    c = gcd(_content(n), _content(d))
    if c > 1:
        n = [x // c for x in n]
        d = [x // c for x in d]
    if d[-1] < 0:
        n = [-x for x in n]
        d = [-x for x in d]
    return _from_dense(n, shift), _from_dense(d)


def bar(x):
    """Bar involution v -> v^-1 on any scalar (ints are fixed)."""
    if isinstance(x, int):
        return x
    return x.bar()


@lru_cache(maxsize=None)
def qint(n: int) -> LaurentPoly:
    """Balanced quantum integer [n] = (v^n - v^-n)/(v - v^-1)."""
    if n < 0:
        raise ValueError(f"qint expects n >= 0, got {n}")
    return LaurentPoly({n - 1 - 2 * m: 1 for m in range(n)})


def qint_signed(n: int) -> LaurentPoly:
    """[n] for any integer n, with [-n] = -[n]."""
    return qint(n) if n >= 0 else -qint(-n)


@lru_cache(maxsize=None)
def qfact(n: int) -> LaurentPoly:
    if n < 0:
        raise ValueError(f"qfact expects n >= 0, got {n}")
    out = LaurentPoly(1)
    for k in range(1, n + 1):
        out = out * qint(k)
    return out


@lru_cache(maxsize=None)
def qbinom(n: int, k: int) -> LaurentPoly:
    if n < 0 or not 0 <= k <= n:
        raise ValueError(f"qbinom expects 0 <= k <= n, got n={n}, k={k}")
    return qfact(n).divexact(qfact(k) * qfact(n - k))


def series_at_infinity(x: Scalar, order: int) -> dict[int, Fraction]:
    """
    Expansion of ``x`` as a series in v^-1, i.e. sum_{k <= top} c_k v^k,
    returning all coefficients with k >= -order.
    """
    x = as_rf(x)
    if x.is_zero():
        return {}
    num, den = x.num, x.den
    top_d = den.max_exp()
    lead = den.coeff(top_d)
    # x = num * v^-top_d / (lead * (1 + sum_{j>0} d_j v^-j))
    tail = {top_d - e: Fraction(c, lead) for e, c in den._t.items() if e != top_d}
    top_n = num.max_exp() - top_d
    if top_n < -order:
        return {}
    length = top_n + order + 1
    # coefficients of 1 / (1 + tail) in powers of v^-1
    inv = [Fraction(0)] * length
    inv[0] = Fraction(1)
    for m in range(1, length):
        s = Fraction(0)
        for j, dj in tail.items():
            if j <= m:
                s += dj * inv[m - j]
        inv[m] = -s
    out: dict[int, Fraction] = {}
    for e, c in num._t.items():
        base = e - top_d
        for m in range(length):
            k = base - m
            if k < -order:
                break
            if inv[m]:
                out[k] = out.get(k, Fraction(0)) + Fraction(c, lead) * inv[m]
    return {k: c for k, c in out.items() if c}


def in_negative_lattice(x: Scalar, order: int = 10, constant: int = 0) -> bool:
    """
    True when ``x`` lies in ``constant + v^-1 Z[[v^-1]]`` up to the given
    truncation order (integrality checked on the truncated coefficients).
    """
    s = series_at_infinity(x, order)
    for k, c in s.items():
        if k > 0:
            return False
        if c.denominator != 1:
            return False
    return s.get(0, 0) == constant


def laurent_sum(items: Iterable[LaurentPoly]) -> LaurentPoly:
    out = LaurentPoly()
    for p in items:
        out = out + p
    return out
