"""Finite-dimensional unital associative algebras with exact rational scalars.

Everything downstream works over a validated ``BaseAlgebra``: structure
constants are checked for associativity and a two-sided unit at construction
time, so tensor contractions elsewhere never need to re-check algebra laws.
Scalars are ``fractions.Fraction`` throughout; every identity in the package
is an exact equality, never a tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

ZERO = Fraction(0)
ONE = Fraction(1)


class AlgebraError(ValueError):
    """Base class for algebra construction and arithmetic failures."""


class AssociativityViolation(AlgebraError):
    def __init__(self, i, j, k):
        self.witness = (i, j, k)
        super().__init__(
            "associativity fails on basis triple "
            "(e%d*e%d)*e%d != e%d*(e%d*e%d)" % (i, j, k, i, j, k))


class UnitViolation(AlgebraError):
    def __init__(self, i):
        self.witness = i
        super().__init__("unit is not a two-sided identity on e%d" % i)


class DimensionMismatch(AlgebraError):
    pass


class ParseError(AlgebraError):
    pass


def parse_rational(value) -> Fraction:
    """Parse 'p/q' (or 'p', or an int) into an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    try:
        return Fraction(str(value))
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError("bad rational %r: %s" % (value, exc)) from None


def format_rational(q: Fraction) -> str:
    return str(q)


@dataclass(frozen=True)
class BaseAlgebra:
    """Unital associative algebra given by structure constants.

    ``table[i][j][k]`` is the coefficient of e_k in e_i * e_j and ``unit``
    is the coefficient vector of 1_B.  Instances are immutable and are
    only produced by :func:`algebra_from_table`, which validates the axioms.
    """

    dim: int
    table: tuple
    unit: tuple

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.dim, self.table, self.unit))
            object.__setattr__(self, "_hash", h)
        return h

    def mul_basis(self, i: int, j: int) -> tuple:
        return self.table[i][j]

    def zero(self) -> "AlgElement":
        return AlgElement(self, (ZERO,) * self.dim)

    def one(self) -> "AlgElement":
        return AlgElement(self, self.unit)

    def basis(self, i: int) -> "AlgElement":
        coeffs = [ZERO] * self.dim
        coeffs[i] = ONE
        return AlgElement(self, tuple(coeffs))

    def element(self, coeffs) -> "AlgElement":
        coeffs = tuple(parse_rational(c) for c in coeffs)
        if len(coeffs) != self.dim:
            raise DimensionMismatch(
                "expected %d coefficients, got %d" % (self.dim, len(coeffs)))
        return AlgElement(self, coeffs)

    @property
    def is_scalar(self) -> bool:
        return self.dim == 1


def algebra_from_table(dim, table, unit) -> BaseAlgebra:
    """Validate structure constants and return the algebra.

    Associativity and the unit axioms are checked exhaustively on all basis
    triples/elements; violations carry the witnessing indices.
    """
    if dim <= 0:
        raise DimensionMismatch("dim must be positive")
    if len(table) != dim or any(len(row) != dim for row in table) or any(
            len(cell) != dim for row in table for cell in row):
        raise DimensionMismatch("table must have shape dim^3")
    if len(unit) != dim:
        raise DimensionMismatch("unit vector must have length dim")
    tab = tuple(tuple(tuple(parse_rational(c) for c in cell) for cell in row)
                for row in table)
    unit_vec = tuple(parse_rational(c) for c in unit)

    def mul_vec(u, v):
        out = [ZERO] * dim
        for i, ci in enumerate(u):
            if not ci:
                continue
            for j, cj in enumerate(v):
                if not cj:
                    continue
                cij = ci * cj
                for k, ck in enumerate(tab[i][j]):
                    if ck:
                        out[k] += cij * ck
        return tuple(out)

    basis_vecs = []
    for i in range(dim):
        v = [ZERO] * dim
        v[i] = ONE
        basis_vecs.append(tuple(v))
    for i, j, k in product(range(dim), repeat=3):
        left = mul_vec(mul_vec(basis_vecs[i], basis_vecs[j]), basis_vecs[k])
        right = mul_vec(basis_vecs[i], mul_vec(basis_vecs[j], basis_vecs[k]))
        if left != right:
            raise AssociativityViolation(i, j, k)
    for i in range(dim):
        if mul_vec(unit_vec, basis_vecs[i]) != basis_vecs[i] or \
                mul_vec(basis_vecs[i], unit_vec) != basis_vecs[i]:
            raise UnitViolation(i)
    return BaseAlgebra(dim, tab, unit_vec)


@dataclass(frozen=True)
class AlgElement:
    """Element of a BaseAlgebra, stored as a coefficient vector."""

    algebra: BaseAlgebra
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != self.algebra.dim:
            raise DimensionMismatch("coefficient vector has wrong length")

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.algebra, self.coeffs))
            object.__setattr__(self, "_hash", h)
        return h

    def __add__(self, other: "AlgElement") -> "AlgElement":
        self._check(other)
        return AlgElement(self.algebra,
                          tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "AlgElement") -> "AlgElement":
        self._check(other)
        return AlgElement(self.algebra,
                          tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "AlgElement":
        return AlgElement(self.algebra, tuple(-a for a in self.coeffs))

    def scale(self, q) -> "AlgElement":
        q = parse_rational(q)
        return AlgElement(self.algebra, tuple(q * a for a in self.coeffs))

    def is_zero(self) -> bool:
        return all(not c for c in self.coeffs)

    def _check(self, other):
        if self.algebra is not other.algebra and self.algebra != other.algebra:
            raise DimensionMismatch("elements live in different algebras")


def alg_mul(a: AlgElement, b: AlgElement) -> AlgElement:
    """Bilinear product via the structure constants."""
    if a.algebra != b.algebra:
        raise DimensionMismatch("elements live in different algebras")
    alg = a.algebra
    out = [ZERO] * alg.dim
    for i, ci in enumerate(a.coeffs):
        if not ci:
            continue
        row = alg.table[i]
        for j, cj in enumerate(b.coeffs):
            if not cj:
                continue
            cij = ci * cj
            for k, ck in enumerate(row[j]):
                if ck:
                    out[k] += cij * ck
    return AlgElement(alg, tuple(out))


# Ready-made algebras used across the test and verification suites.

def scalar_algebra() -> BaseAlgebra:
    return algebra_from_table(1, [[[1]]], [1])


def upper_triangular_algebra() -> BaseAlgebra:
    """2x2 upper-triangular matrices on the basis (e11, e12, e22)."""
    dim = 3
    # basis index: 0 -> e11, 1 -> e12, 2 -> e22
    pairs = {(0, 0): 0, (0, 1): 1, (1, 2): 1, (2, 2): 2}
    table = [[[0] * dim for _ in range(dim)] for _ in range(dim)]
    for (i, j), k in pairs.items():
        table[i][j][k] = 1
    return algebra_from_table(dim, table, [1, 0, 1])


def diagonal_algebra(dim: int) -> BaseAlgebra:
    table = [[[0] * dim for _ in range(dim)] for _ in range(dim)]
    for i in range(dim):
        table[i][i][i] = 1
    return algebra_from_table(dim, table, [1] * dim)


def algebra_to_json(alg: BaseAlgebra):
    if alg.is_scalar and alg == scalar_algebra():
        return "scalar"
    return {
        "dim": alg.dim,
        "unit": [format_rational(c) for c in alg.unit],
        "table": [[[format_rational(c) for c in cell] for cell in row]
                  for row in alg.table],
    }


def algebra_from_json(doc) -> BaseAlgebra:
    if doc == "scalar":
        return scalar_algebra()
    if not isinstance(doc, dict) or not {"dim", "unit", "table"} <= set(doc):
        raise ParseError("algebra document needs dim, unit and table")
    return algebra_from_table(doc["dim"], doc["table"], doc["unit"])
