from fractions import Fraction

import pytest

from octrans.algebra import (AssociativityViolation, DimensionMismatch,
                             ParseError, UnitViolation, alg_mul,
                             algebra_from_json, algebra_from_table,
                             algebra_to_json, diagonal_algebra,
                             parse_rational, scalar_algebra,
                             upper_triangular_algebra)


def test_scalar_algebra():
    alg = algebra_from_table(1, [[[1]]], [1])
    a = alg.element(["2/3"])
    b = alg.element(["3/4"])
    assert alg_mul(a, b).coeffs == (Fraction(1, 2),)


def test_upper_triangular_accepted():
    alg = upper_triangular_algebra()
    assert alg.dim == 3
    e11, e12, e22 = (alg.basis(i) for i in range(3))
    assert alg_mul(e12, e12).is_zero()
    assert alg_mul(e11, e12) == e12
    assert alg_mul(e12, e22) == e12
    assert alg_mul(alg.one(), e12) == e12 == alg_mul(e12, alg.one())


def test_associativity_violation_witnessed():
    # e1*e1 = e2, e1*e2 = 0 but e2*e1 = e1 breaks (e1 e1) e1 = e1 (e1 e1)
    table = [[[0, 1], [0, 0]], [[1, 0], [0, 0]]]
    with pytest.raises(AssociativityViolation) as exc:
        algebra_from_table(2, table, [1, 0])
    assert len(exc.value.witness) == 3


def test_unit_violation():
    table = [[[1, 0], [0, 0]], [[0, 0], [0, 0]]]
    with pytest.raises(UnitViolation):
        algebra_from_table(2, table, [1, 0])


def test_unit_laws_on_basis():
    alg = diagonal_algebra(3)
    for i in range(3):
        e = alg.basis(i)
        assert alg_mul(alg.one(), e) == e
        assert alg_mul(e, alg.one()) == e


def test_bilinearity(rng, ut3):
    for _ in range(20):
        q = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
        a = ut3.element([rng.randint(-3, 3) for _ in range(3)])
        b = ut3.element([rng.randint(-3, 3) for _ in range(3)])
        assert alg_mul(a.scale(q), b) == alg_mul(a, b).scale(q)
        assert alg_mul(a, b.scale(q)) == alg_mul(a, b).scale(q)


def test_element_length_checked():
    alg = scalar_algebra()
    with pytest.raises(DimensionMismatch):
        alg.element(["1", "2"])


def test_json_round_trip():
    alg = upper_triangular_algebra()
    doc = algebra_to_json(alg)
    assert algebra_from_json(doc) == alg
    assert algebra_from_json("scalar") == scalar_algebra()
    assert algebra_to_json(scalar_algebra()) == "scalar"


def test_parse_rational_errors():
    assert parse_rational("-7/2") == Fraction(-7, 2)
    with pytest.raises(ParseError):
        parse_rational("1/0")
    with pytest.raises(ParseError):
        parse_rational("x")
