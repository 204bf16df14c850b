import random
from fractions import Fraction

import pytest

from octrans.algebra import scalar_algebra, upper_triangular_algebra
from octrans.series import MultiSeries, right_unit_pad


def rnd_group(rng, alg, order, span=2):
    d = alg.dim
    comps = [alg.unit]
    for n in range(1, order + 1):
        comps.append(tuple(Fraction(rng.randint(-span, span),
                                    rng.randint(1, 3))
                           for _ in range(d ** (n + 1))))
    return MultiSeries(alg, order, tuple(comps))


def rnd_comp(rng, alg, order, span=2):
    """Random composition-group element: zero constant, identity linear part."""
    from octrans.series import identity_series
    d = alg.dim
    comps = [(Fraction(0),) * d, identity_series(alg, order).comps[1]]
    for n in range(2, order + 1):
        comps.append(tuple(Fraction(rng.randint(-span, span),
                                    rng.randint(1, 3))
                           for _ in range(d ** (n + 1))))
    return MultiSeries(alg, order, tuple(comps))


def rnd_moments(rng, alg, order):
    """Lawful random moment series: padded random half maps (mean 1)."""
    return right_unit_pad(rnd_group(rng, alg, order - 1))


@pytest.fixture
def rng():
    return random.Random(20240809)


@pytest.fixture
def scalar():
    return scalar_algebra()


@pytest.fixture
def ut3():
    return upper_triangular_algebra()
