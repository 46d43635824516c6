"""
qcanon: exact computations with integrable highest-weight modules of
quantum groups for symmetric Cartan data.

The half algebra f and its bilinear form, highest-weight modules L(Lambda),
the quasi-R-matrix Theta, the involution Psi and the canonical basis of
tensor products, commutors and the Yang-Baxter equation.  All arithmetic is
exact over Z[v, v^-1] and Q(v).
"""

from .arith import LaurentPoly, RationalFunc, qbinom, qfact, qint
from .cartan import CartanDatum, load_datum, named_datum, type_a
from .errors import ConfigError, ConsistencyError, DepthError, QCanonError, UnsupportedError
from .hwmodule import HWModule, build
from .tensor import TensorModule, TensorVector

__version__ = "0.1.0"
