"""Formal series on words: shuffle, composition, multiplicative feedback.

Series live over a fixed alphabet x_0..x_m and are truncated at a maximal
word length.  Composition substitutes the letters of the outer alphabet by
x_0-guarded shuffles with the inner tuple; feedback rewrites every letter
x_i (i >= 1) by shuffling in the i-th component of the feedback operand.
The star product F * G = (F <~ G) shuffled with G makes the invertible
tuples a group acting on series from the right through feedback.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .algebra import ZERO, ONE, parse_rational, format_rational


class FliessError(ValueError):
    pass


class AlphabetMismatch(FliessError):
    pass


class ArityMismatch(FliessError):
    pass


class NotInvertible(FliessError):
    pass


@dataclass(frozen=True)
class WordSeries:
    """Truncated formal series on words over x_0..x_{alphabet-1}."""

    alphabet: int
    max_len: int
    terms: tuple  # sorted tuple of (word tuple, Fraction)

    @staticmethod
    def make(alphabet, max_len, data) -> "WordSeries":
        clean = {}
        for word, c in (data.items() if isinstance(data, dict) else data):
            word = tuple(word)
            if len(word) > max_len:
                continue
            if any(not 0 <= a < alphabet for a in word):
                raise AlphabetMismatch("letter out of range in %s" % (word,))
            c = parse_rational(c)
            if c:
                clean[word] = clean.get(word, ZERO) + c
        clean = {w: c for w, c in clean.items() if c}
        return WordSeries(alphabet, max_len, tuple(sorted(clean.items())))

    def coeff(self, word) -> Fraction:
        word = tuple(word)
        for w, c in self.terms:
            if w == word:
                return c
        return ZERO

    def as_dict(self):
        return dict(self.terms)

    def constant(self) -> Fraction:
        return self.coeff(())


def ws_zero(alphabet, max_len) -> WordSeries:
    return WordSeries.make(alphabet, max_len, {})


def ws_one(alphabet, max_len) -> WordSeries:
    return WordSeries.make(alphabet, max_len, {(): ONE})


def ws_word(alphabet, max_len, word) -> WordSeries:
    return WordSeries.make(alphabet, max_len, {tuple(word): ONE})


def ws_add(a: WordSeries, b: WordSeries) -> WordSeries:
    _check(a, b)
    data = dict(a.terms)
    for w, c in b.terms:
        data[w] = data.get(w, ZERO) + c
    return WordSeries.make(a.alphabet, a.max_len, data)


def ws_scale(a: WordSeries, q) -> WordSeries:
    q = parse_rational(q)
    return WordSeries.make(a.alphabet, a.max_len,
                           {w: q * c for w, c in a.terms})


def ws_sub(a, b):
    return ws_add(a, ws_scale(b, -1))


def _check(a, b):
    if a.alphabet != b.alphabet:
        raise AlphabetMismatch("series use different alphabets")
    if a.max_len != b.max_len:
        raise AlphabetMismatch("series use different truncation lengths")


@lru_cache(maxsize=None)
def _shuffle_words(u, v):
    """Shuffle of two words as a dict word -> integer multiplicity."""
    if not u:
        return {v: 1}
    if not v:
        return {u: 1}
    out = {}
    for w, m in _shuffle_words(u[1:], v).items():
        key = (u[0],) + w
        out[key] = out.get(key, 0) + m
    for w, m in _shuffle_words(u, v[1:]).items():
        key = (v[0],) + w
        out[key] = out.get(key, 0) + m
    return out


def shuffle(a: WordSeries, b: WordSeries) -> WordSeries:
    _check(a, b)
    data = {}
    for u, cu in a.terms:
        for v, cv in b.terms:
            if len(u) + len(v) > a.max_len:
                continue
            w = cu * cv
            for word, m in _shuffle_words(u, v).items():
                data[word] = data.get(word, ZERO) + w * m
    return WordSeries.make(a.alphabet, a.max_len, data)


def _prepend(letter, s: WordSeries) -> WordSeries:
    return WordSeries.make(s.alphabet, s.max_len,
                           {(letter,) + w: c for w, c in s.terms
                            if len(w) + 1 <= s.max_len})


def ff_compose(c, d) -> WordSeries:
    """Composition c o d: c over an alphabet of size len(d)+1, d a tuple.

    psi_d(x'_0)(e) = x_0 e and psi_d(x'_i)(e) = x_0 (d_i shuffled with e);
    the empty word passes through.
    """
    d = tuple(d)
    if not d:
        raise ArityMismatch("inner tuple must not be empty")
    alphabet = d[0].alphabet
    max_len = d[0].max_len
    for di in d:
        if di.alphabet != alphabet or di.max_len != max_len:
            raise AlphabetMismatch("inner tuple components disagree")
    if c.alphabet != len(d) + 1:
        raise ArityMismatch("outer alphabet must have len(d)+1 letters")
    out = {}
    for eta, coeff in c.terms:
        val = ws_one(alphabet, max_len)
        for letter in reversed(eta):
            if letter == 0:
                val = _prepend(0, val)
            else:
                val = _prepend(0, shuffle(d[letter - 1], val))
        for w, cv in val.terms:
            out[w] = out.get(w, ZERO) + coeff * cv
    return WordSeries.make(alphabet, max_len, out)


def feedback(e: WordSeries, f) -> WordSeries:
    """Multiplicative feedback e <~ f with f a tuple of alphabet-1 series."""
    f = tuple(f)
    if len(f) != e.alphabet - 1:
        raise ArityMismatch("feedback operand needs alphabet-1 components")
    for fi in f:
        if fi.alphabet != e.alphabet or fi.max_len != e.max_len:
            raise AlphabetMismatch("feedback components disagree")
    out = {}
    for eta, coeff in e.terms:
        val = ws_one(e.alphabet, e.max_len)
        for letter in reversed(eta):
            if letter == 0:
                val = _prepend(0, val)
            else:
                val = _prepend(letter, shuffle(f[letter - 1], val))
        for w, cv in val.terms:
            out[w] = out.get(w, ZERO) + coeff * cv
    return WordSeries.make(e.alphabet, e.max_len, out)


def star(f, g):
    """Group product (componentwise): (F * G)_i = (F_i <~ G) shuffle G_i."""
    f, g = tuple(f), tuple(g)
    if len(f) != len(g):
        raise ArityMismatch("tuples of different length")
    return tuple(shuffle(feedback(fi, g), gi) for fi, gi in zip(f, g))


def star_unit(alphabet, max_len, m=None):
    m = alphabet - 1 if m is None else m
    return tuple(ws_one(alphabet, max_len) for _ in range(m))


def star_inverse(g):
    """Inverse for the star product, solved degree by degree.

    Requires every component constant (G_i, empty) to be nonzero; the
    two-sided round trip is asserted.
    """
    g = tuple(g)
    alphabet = g[0].alphabet
    max_len = g[0].max_len
    consts = [gi.constant() for gi in g]
    if any(not c for c in consts):
        raise NotInvertible("star inverse needs nonzero constant terms")
    unit = star_unit(alphabet, max_len)
    data = [dict() for _ in g]
    data_ws = None
    for length in range(0, max_len + 1):
        data_ws = tuple(WordSeries.make(alphabet, max_len, d) for d in data)
        residual = star(data_ws, g)
        for i in range(len(g)):
            res = residual[i].as_dict()
            for word in _words_of_length(alphabet, length):
                deficit = (unit[i].coeff(word)) - res.get(word, ZERO)
                if deficit:
                    mult = consts[i]
                    for a in word:
                        if a >= 1:
                            mult *= consts[a - 1]
                    data[i][word] = data[i].get(word, ZERO) + deficit / mult
    out = tuple(WordSeries.make(alphabet, max_len, d) for d in data)
    if star(out, g) != unit or star(g, out) != unit:
        raise NotInvertible("star inverse round trip failed")
    return out


def _words_of_length(alphabet, n):
    if n == 0:
        yield ()
        return
    for w in _words_of_length(alphabet, n - 1):
        for a in range(alphabet):
            yield w + (a,)


def at_product(c: WordSeries, d: WordSeries) -> WordSeries:
    """c @ d: the fixed point y = c <~ (d o y) over the two-letter alphabet.

    d is a series over a two-letter outer alphabet acting through
    composition; the fixed point is reached after max_len+1 iterations
    and stability is asserted.
    """
    if c.alphabet != 2 or d.alphabet != 2:
        raise AlphabetMismatch("the @ product is wired for one-input series")
    y = c
    for _ in range(c.max_len + 1):
        y = feedback(c, (ff_compose(d, (y,)),))
    again = feedback(c, (ff_compose(d, (y,)),))
    if again != y:
        raise FliessError("@ fixed point did not stabilize")
    return y


# -- serialization ------------------------------------------------------------

def wordseries_to_json(s: WordSeries):
    terms = {}
    for w, c in s.terms:
        key = "".join("x%d" % a for a in w)
        terms[key] = format_rational(c)
    return {"alphabet": s.alphabet, "max_len": s.max_len, "terms": terms}


def wordseries_from_json(doc) -> WordSeries:
    terms = {}
    for key, val in doc["terms"].items():
        word = tuple(int(p) for p in key.split("x") if p != "")
        terms[word] = parse_rational(val)
    return WordSeries.make(doc["alphabet"], doc["max_len"], terms)
