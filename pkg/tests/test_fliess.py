import random
from fractions import Fraction

import pytest

from octrans.fliess import (AlphabetMismatch, ArityMismatch, NotInvertible,
                            WordSeries, at_product, feedback, ff_compose,
                            shuffle, star, star_inverse, star_unit, ws_one,
                            ws_word, wordseries_from_json, wordseries_to_json,
                            _words_of_length)

F = Fraction
A, L = 2, 4


def rnd_series(rng, nonzero_const=True):
    data = {}
    for n in range(L + 1):
        for w in _words_of_length(A, n):
            if rng.random() < 0.5:
                data[w] = F(rng.randint(-2, 2), rng.randint(1, 2))
    if nonzero_const:
        data[()] = F(rng.randint(1, 3))
    return WordSeries.make(A, L, data)


@pytest.fixture
def rng():
    return random.Random(17)


class TestShuffle:
    def test_letters(self):
        x0, x1 = ws_word(A, L, (0,)), ws_word(A, L, (1,))
        assert shuffle(x0, x1).as_dict() == {(0, 1): F(1), (1, 0): F(1)}
        assert shuffle(x0, x0).as_dict() == {(0, 0): F(2)}

    def test_word_recursion(self):
        out = shuffle(ws_word(A, L, (0, 1)), ws_word(A, L, (0,)))
        assert out.as_dict() == {(0, 0, 1): F(2), (0, 1, 0): F(1)}

    def test_commutative_associative(self, rng):
        a, b, c = (rnd_series(rng) for _ in range(3))
        assert shuffle(a, b) == shuffle(b, a)
        assert shuffle(shuffle(a, b), c) == shuffle(a, shuffle(b, c))

    def test_alphabet_checked(self):
        with pytest.raises(AlphabetMismatch):
            shuffle(ws_one(2, L), ws_one(3, L))


class TestCompose:
    def test_empty_word(self, rng):
        d = rnd_series(rng)
        one = ws_one(2, L)
        assert ff_compose(one, (d,)) == ws_one(A, L)

    def test_single_letter(self, rng):
        d = rnd_series(rng)
        out = ff_compose(ws_word(2, L, (1,)), (d,))
        expected = {(0,) + w: c for w, c in d.terms if len(w) < L}
        assert out.as_dict() == expected

    def test_two_letters(self, rng):
        from octrans.fliess import _prepend
        d = rnd_series(rng)
        lhs = ff_compose(ws_word(2, L, (1, 1)), (d,))
        rhs = _prepend(0, shuffle(d, _prepend(0, shuffle(d, ws_one(A, L)))))
        assert lhs == rhs

    def test_associative(self, rng):
        c = rnd_series(rng)
        d = rnd_series(rng)
        e = rnd_series(rng)
        assert ff_compose(ff_compose(c, (d,)), (e,)) == \
            ff_compose(c, (ff_compose(d, (e,)),))

    def test_arity_checked(self, rng):
        c = rnd_series(rng)  # alphabet 2 needs a 1-tuple
        with pytest.raises(ArityMismatch):
            ff_compose(c, (c, c))


class TestFeedback:
    def test_x0_words_fixed(self, rng):
        f = (rnd_series(rng),)
        w = ws_word(A, L, (0, 0, 0))
        assert feedback(w, f) == w
        assert feedback(ws_one(A, L), f) == ws_one(A, L)

    def test_unit_insertion(self):
        f = (ws_one(A, L),)
        x1 = ws_word(A, L, (1,))
        assert feedback(x1, f) == x1

    def test_distributivity_over_composition(self, rng):
        for _ in range(5):
            c, e = rnd_series(rng), rnd_series(rng)
            f = (rnd_series(rng),)
            assert ff_compose(c, (feedback(e, f),)) == \
                feedback(ff_compose(c, (e,)), f)


class TestStarGroup:
    def test_unit(self, rng):
        f = (rnd_series(rng),)
        u = star_unit(A, L)
        assert star(f, u) == f
        assert star(u, f) == f

    def test_associativity_and_inverse(self, rng):
        f, g, h = ((rnd_series(rng),) for _ in range(3))
        assert star(star(f, g), h) == star(f, star(g, h))
        inv = star_inverse(g)
        assert star(g, inv) == star_unit(A, L)

    def test_inverse_needs_constant(self, rng):
        bad = (rnd_series(rng, nonzero_const=False),)
        if bad[0].constant():
            bad = (WordSeries.make(A, L, {(1,): F(1)}),)
        with pytest.raises(NotInvertible):
            star_inverse(bad)


class TestIdentities:
    def test_matching_chain(self, rng):
        for _ in range(4):
            c, cp, d, dp = (rnd_series(rng) for _ in range(4))
            cd = ff_compose(c, (d,))
            cpdp = ff_compose(cp, (dp,))
            inv = star_inverse((cpdp,))
            lhs = star((ff_compose(c, (feedback(d, inv),)),), (cpdp,))[0]
            mid = shuffle(cd, cpdp)
            inv2 = star_inverse((cd,))
            rhs = star((ff_compose(cp, (feedback(dp, inv2),)),), (cd,))[0]
            assert lhs == mid == rhs

    def test_translation_family_sharp(self, rng):
        for _ in range(4):
            c, cp, d = (rnd_series(rng) for _ in range(3))
            cpd = ff_compose(cp, (d,))
            inv = star_inverse((cpd,))
            lhs = star((ff_compose(c, (feedback(d, inv),)),), (cpd,))[0]
            assert lhs == ff_compose(shuffle(c, cp), (d,))

    def test_at_product(self, rng):
        for _ in range(4):
            c, d, dp = (rnd_series(rng) for _ in range(3))
            assert at_product(at_product(c, d), dp) == \
                at_product(c, shuffle(d, dp))

    def test_degenerate_unit(self, rng):
        one = ws_one(2, L)
        d = rnd_series(rng)
        cd = ff_compose(one, (d,))
        assert cd == ws_one(A, L)


def test_json_round_trip(rng):
    s = rnd_series(rng)
    assert wordseries_from_json(wordseries_to_json(s)) == s
