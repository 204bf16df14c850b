from fractions import Fraction

import pytest

from conftest import rnd_group, rnd_moments
from octrans.algebra import diagonal_algebra
from octrans.ncpart import (ColoredWord, CumulantFamily, MeanNotUnit, NCError,
                            SizeTooLarge, WordTooLong,
                            conditional_cumulants_nc,
                            cumulants_from_moments_nc, enumerate_nc,
                            family_from_k_series, k_series_from_family,
                            kappa_eval, kreweras, make_partition,
                            mixed_moment, moments_from_cumulants_nc,
                            product_moment_series, rotate_partition)
from octrans.series import from_scalar_coeffs, right_unit_pad

F = Fraction
CATALAN = [1, 1, 2, 5, 14, 42, 132, 429, 1430]


class TestEnumeration:
    def test_catalan_counts(self):
        for n in range(1, 9):
            assert len(enumerate_nc(n)) == CATALAN[n]

    def test_cap(self):
        with pytest.raises(SizeTooLarge):
            enumerate_nc(13)

    def test_all_noncrossing_and_deterministic(self):
        first = enumerate_nc(5)
        again = enumerate_nc(5)
        assert [p.blocks for p in first] == [p.blocks for p in again]
        for p in first:
            make_partition(5, p.blocks)  # revalidates

    def test_crossing_rejected(self):
        with pytest.raises(NCError):
            make_partition(4, [[1, 3], [2, 4]])

    def test_nesting_and_irreducibility(self):
        p = make_partition(4, [[1, 4], [2, 3]])
        inner = p.blocks.index((2, 3))
        outer = p.blocks.index((1, 4))
        assert p.parent[inner] == outer
        assert p.parent[outer] == -1
        assert p.is_irreducible()
        assert not make_partition(2, [[1], [2]]).is_irreducible()


class TestKreweras:
    def test_examples(self):
        assert kreweras(make_partition(2, [[1, 2]])).blocks == ((1,), (2,))
        assert kreweras(make_partition(2, [[1], [2]])).blocks == ((1, 2),)
        assert kreweras(make_partition(3, [[1, 3], [2]])).blocks == \
            ((1, 2), (3,))

    def test_size_complement_and_rotation(self):
        for n in range(1, 8):
            for p in enumerate_nc(n):
                kr = kreweras(p)  # size complement asserted inside
                assert kreweras(kr) == rotate_partition(p)

    def test_size_complement_n8(self):
        for p in enumerate_nc(8):
            kreweras(p)


class TestKappaEval:
    def test_single_block(self, scalar):
        fam = family_from_k_series(from_scalar_coeffs([1, F(5)], order=1))
        p = make_partition(2, [[1, 2]])
        val = kappa_eval(p, fam, [scalar.one()])
        assert val.coeffs == (F(5),)

    def test_nested(self, scalar):
        fam = family_from_k_series(from_scalar_coeffs([1, F(7), 0], order=2))
        p = make_partition(3, [[1, 3], [2]])
        val = kappa_eval(p, fam, [scalar.one(), scalar.one()])
        assert val.coeffs == (F(7),)

    def test_all_singletons(self, scalar):
        fam = family_from_k_series(from_scalar_coeffs([1, 0, 0], order=2))
        p = make_partition(3, [[1], [2], [3]])
        args = [scalar.element([2]), scalar.element([3])]
        assert kappa_eval(p, fam, args).coeffs == (F(6),)

    def test_mean_must_be_unit(self, scalar):
        with pytest.raises(MeanNotUnit):
            CumulantFamily(scalar, 1, (None, (F(2),)))


class TestConversions:
    def test_point_mass(self, scalar):
        fam = family_from_k_series(from_scalar_coeffs([1, 0, 0, 0]))
        mom = moments_from_cumulants_nc(fam, 4)
        assert mom.scalar_coeffs() == [1, 1, 1, 1, 1]

    def test_second_moment(self, scalar):
        c = F(3, 2)
        fam = family_from_k_series(from_scalar_coeffs([1, c, 0, 0]))
        assert moments_from_cumulants_nc(fam, 2).scalar_coeffs()[2] == 1 + c

    def test_motzkin_moments(self):
        # kappa_2 = 1, all higher zero: moments count short-block partitions
        fam = family_from_k_series(from_scalar_coeffs([1, 1, 0, 0]))
        mom = moments_from_cumulants_nc(fam, 4)
        assert mom.scalar_coeffs() == [1, 1, 2, 4, 9]

    def test_extraction_examples(self):
        ones = from_scalar_coeffs([1, 1, 1, 1])
        fam = cumulants_from_moments_nc(ones)
        assert k_series_from_family(fam, 2).scalar_coeffs() == [1, 0, 0]
        two = right_unit_pad(from_scalar_coeffs([1, 2]))
        fam2 = cumulants_from_moments_nc(two)
        assert fam2.kappa[2] == (F(1),)

    def test_round_trips(self, rng, scalar, ut3):
        for alg, order in ((scalar, 4), (ut3, 4)):
            k = rnd_group(rng, alg, order)
            mom = moments_from_cumulants_nc(family_from_k_series(k),
                                            order + 1)
            assert k_series_from_family(cumulants_from_moments_nc(mom),
                                        order) == k
            mm = rnd_moments(rng, alg, order)
            cumulants_from_moments_nc(mm)  # forward round trip asserted

    def test_mean_checked(self, rng, scalar):
        bad = from_scalar_coeffs([1, 2, 1])
        with pytest.raises(MeanNotUnit):
            cumulants_from_moments_nc(bad)


class TestConditional:
    def test_degenerate(self, rng, ut3):
        mom = rnd_moments(rng, ut3, 3)
        fam_c = conditional_cumulants_nc(mom, mom)
        fam = cumulants_from_moments_nc(mom)
        assert fam_c.kappa == fam.kappa

    def test_point_mass_psi(self):
        psi = moments_from_cumulants_nc(
            family_from_k_series(from_scalar_coeffs([1, 0])), 2)
        phi = right_unit_pad(from_scalar_coeffs([1, 2]))
        fam_c = conditional_cumulants_nc(phi, psi)
        assert fam_c.kappa[2] == (F(1),)

    def test_round_trip(self, rng, scalar, ut3):
        for alg, order in ((scalar, 4), (ut3, 3)):
            k = rnd_group(rng, alg, order - 1)
            kc = rnd_group(rng, alg, order - 1)
            psi = moments_from_cumulants_nc(family_from_k_series(k), order)
            phi = moments_from_cumulants_nc(
                family_from_k_series(k), order,
                outer_fam=family_from_k_series(kc))
            fam_c = conditional_cumulants_nc(phi, psi)
            assert k_series_from_family(fam_c, order - 1) == kc


def _word(alg, *vars_):
    return ColoredWord(alg.one(), tuple((v, alg.one()) for v in vars_))


class TestMixedMoments:
    def test_means_multiply(self, rng, scalar, ut3):
        for alg in (scalar, ut3):
            ma = rnd_moments(rng, alg, 2)
            mb = rnd_moments(rng, alg, 2)
            for kind in ("free", "cfree", "monotone", "cmonotone"):
                pv, sv = mixed_moment(kind, ma, mb, _word(alg, 0, 1))
                assert pv == alg.one() and sv == alg.one()

    def test_free_abab(self, scalar):
        k = from_scalar_coeffs([1, 1, 0, 0])
        m = moments_from_cumulants_nc(family_from_k_series(k), 4)
        pv, sv = mixed_moment("free", m, m, _word(scalar, 0, 1, 0, 1))
        assert pv.coeffs == (F(3),) and sv.coeffs == (F(3),)

    def test_monotone_abab(self, scalar):
        ma = from_scalar_coeffs([1, 1, 2, 0, 0])
        mb = moments_from_cumulants_nc(
            family_from_k_series(from_scalar_coeffs([1, 0, 0, 0])), 4)
        pv, sv = mixed_moment("monotone", ma, mb, _word(scalar, 0, 1, 0, 1))
        assert sv.coeffs == (F(2),)

    def test_free_two_routes_alternating_words(self, rng, scalar):
        # the centering expansion is asserted against the partition sum
        # inside the oracle for every psi evaluation
        ka = rnd_group(rng, scalar, 4)
        kb = rnd_group(rng, scalar, 4)
        ma = moments_from_cumulants_nc(family_from_k_series(ka), 4)
        mb = moments_from_cumulants_nc(family_from_k_series(kb), 4)
        for length in range(2, 9):
            word = _word(scalar, *[t % 2 for t in range(length)])
            mixed_moment("free", ma, mb, word)

    def test_monotone_matches_cfree_realization(self, rng):
        # a conditionally monotone pair has the same mixed phi-moments as a
        # conditionally free pair whose first variable is a psi point mass
        alg = diagonal_algebra(2)
        order = 2
        ka, kb, kca, kcb = (rnd_group(rng, alg, order) for _ in range(4))
        fa, fb = family_from_k_series(ka), family_from_k_series(kb)
        ma = moments_from_cumulants_nc(fa, order + 1)
        mb = moments_from_cumulants_nc(fb, order + 1)
        pa = moments_from_cumulants_nc(fa, order + 1,
                                       outer_fam=family_from_k_series(kca))
        pb = moments_from_cumulants_nc(fb, order + 1,
                                       outer_fam=family_from_k_series(kcb))
        pm = moments_from_cumulants_nc(
            family_from_k_series(rnd_group(rng, alg, order, span=0)),
            order + 1)
        phi_mono, psi_mono = product_moment_series(
            "cmonotone", order, ma, mb, a_phi=pa, b_phi=pb, reverse=True)
        kc_a = k_series_from_family(conditional_cumulants_nc(pa, pm), order)
        kc_b = k_series_from_family(conditional_cumulants_nc(pb, mb), order)
        phi_real, _ = product_moment_series(
            "cfree", order, pm, mb, a_phi=pa, b_phi=pb, reverse=True,
            cross_check=False)
        # realization for the phi-state: first operand's psi becomes trivial
        assert phi_mono == phi_real

    def test_word_cap(self, rng, scalar):
        m = rnd_moments(rng, scalar, 2)
        long_word = _word(scalar, *([0, 1] * 7))
        with pytest.raises(WordTooLong):
            mixed_moment("free", m, m, long_word)

    def test_mean_checked(self, scalar):
        bad = from_scalar_coeffs([1, 2, 0])
        good = from_scalar_coeffs([1, 1, 0])
        with pytest.raises(MeanNotUnit):
            mixed_moment("free", bad, good, _word(scalar, 0, 1))
