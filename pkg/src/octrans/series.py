"""Truncated series of multilinear maps on a base algebra.

A :class:`MultiSeries` of order N over an algebra B stores, for each arity
n = 0..N, a dense coefficient tensor ``comps[n]`` of length dim**(n+1) laid
out row-major in (j, i1, ..., in), meaning

    component_n(e_{i1}, ..., e_{in}) = sum_j comps[n][j, i1..in] * e_j.

Arity 0 is an element of B.  All arities above N are dropped.  On top of the
raw tensors this module provides the two group structures (Cauchy product on
series starting with 1_B, composition on series with zero constant term and
identity linear part), the right action of the latter on the former, the
operator kinds built from translations by the identity map, the twisted
star products, e-transforms, and crossed products of pairs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .algebra import (AlgElement, BaseAlgebra, ZERO, ONE, alg_mul,
                      algebra_from_json, algebra_to_json, format_rational,
                      parse_rational)


class SeriesError(ValueError):
    pass


class OrderMismatch(SeriesError):
    pass


class AlgebraMismatch(SeriesError):
    pass


class NotUnital(SeriesError):
    """Degree-0 component is not 1_B where a group element is required."""


class NotCompositional(SeriesError):
    """Nonzero constant term where a composition operand is required."""


class LinearPartNotIdentity(SeriesError):
    """Linear part differs from the identity map of B (Gamma_x is rejected)."""


class StarInverseCheckFailed(SeriesError):
    def __init__(self, degree):
        self.degree = degree
        super().__init__("star inverse round-trip fails at degree %d" % degree)


class FixedPointNotStable(SeriesError):
    def __init__(self, degree):
        self.degree = degree
        super().__init__("fixed point still moving at degree %d; "
                         "operator is not degree-raising" % degree)


class OperatorMismatch(SeriesError):
    pass


def _compositions(n, k):
    """All ways to write n as an ordered sum of k positive integers."""
    if k == 1:
        yield (n,)
        return
    for first in range(1, n - k + 2):
        for rest in _compositions(n - first, k - 1):
            yield (first,) + rest


@dataclass(frozen=True)
class MultiSeries:
    algebra: BaseAlgebra
    order: int
    comps: tuple  # comps[n]: tuple of Fractions, length dim**(n+1)

    def __post_init__(self):
        d = self.algebra.dim
        if len(self.comps) != self.order + 1:
            raise OrderMismatch("need order+1 components")
        for n, comp in enumerate(self.comps):
            if len(comp) != d ** (n + 1):
                raise OrderMismatch("component %d has wrong size" % n)

    # -- probes -----------------------------------------------------------

    def coeff(self, n: int, j: int, idx: tuple) -> Fraction:
        d = self.algebra.dim
        flat = 0
        for i in idx:
            flat = flat * d + i
        return self.comps[n][j * d ** n + flat]

    def constant(self) -> AlgElement:
        return AlgElement(self.algebra, self.comps[0])

    def is_unital(self) -> bool:
        return self.comps[0] == self.algebra.unit

    def has_zero_constant(self) -> bool:
        return all(not c for c in self.comps[0])

    def linear_is_identity(self) -> bool:
        return self.comps[1] == _identity_tensor(self.algebra)

    def eval_basis(self, n: int, idx: tuple) -> AlgElement:
        """Value of component n on the basis tuple idx, as an element of B."""
        d = self.algebra.dim
        flat = 0
        for i in idx:
            flat = flat * d + i
        comp = self.comps[n]
        step = d ** n
        return AlgElement(self.algebra,
                          tuple(comp[j * step + flat] for j in range(d)))

    def eval_elements(self, n: int, args) -> AlgElement:
        """Multilinear evaluation of component n on AlgElements."""
        d = self.algebra.dim
        if len(args) != n:
            raise OrderMismatch("component %d expects %d arguments" % (n, n))
        out = [ZERO] * d
        comp = self.comps[n]
        step = d ** n
        supports = [[(i, c) for i, c in enumerate(a.coeffs) if c]
                    for a in args]
        for combo in product(*supports):
            w = ONE
            flat = 0
            for i, c in combo:
                w *= c
                flat = flat * d + i
            for j in range(d):
                c = comp[j * step + flat]
                if c:
                    out[j] += w * c
        return AlgElement(self.algebra, tuple(out))

    def truncate(self, order: int) -> "MultiSeries":
        if order > self.order:
            raise OrderMismatch("cannot raise truncation order")
        return MultiSeries(self.algebra, order, self.comps[:order + 1])

    def scalar_coeffs(self):
        """Shorthand [c0; c1, ..., cN] for dim-1 algebras."""
        if self.algebra.dim != 1:
            raise AlgebraMismatch("scalar shorthand needs a dim-1 algebra")
        return [comp[0] for comp in self.comps]


def _identity_tensor(alg: BaseAlgebra):
    d = alg.dim
    out = [ZERO] * (d * d)
    for i in range(d):
        out[i * d + i] = ONE
    return tuple(out)


def _zero_comp(alg, n):
    return (ZERO,) * (alg.dim ** (n + 1))


def zero_series(alg: BaseAlgebra, order: int) -> MultiSeries:
    return MultiSeries(alg, order, tuple(_zero_comp(alg, n)
                                         for n in range(order + 1)))


def one_series(alg: BaseAlgebra, order: int) -> MultiSeries:
    comps = [alg.unit] + [_zero_comp(alg, n) for n in range(1, order + 1)]
    return MultiSeries(alg, order, tuple(comps))


def identity_series(alg: BaseAlgebra, order: int) -> MultiSeries:
    """The identity map I of B as an element of the composition group."""
    if order < 1:
        raise OrderMismatch("identity series needs order >= 1")
    comps = [_zero_comp(alg, 0), _identity_tensor(alg)]
    comps += [_zero_comp(alg, n) for n in range(2, order + 1)]
    return MultiSeries(alg, order, tuple(comps))


def geometric_identity_series(alg: BaseAlgebra, order: int) -> MultiSeries:
    """E = I + I*I + ... truncated; arity n maps (x1..xn) to x1 x2...xn."""
    comps = [_zero_comp(alg, 0)]
    d = alg.dim
    for n in range(1, order + 1):
        comp = [ZERO] * (d ** (n + 1))
        step = d ** n
        for flat, idx in enumerate(product(range(d), repeat=n)):
            val = alg.basis(idx[0])
            for i in idx[1:]:
                val = alg_mul(val, alg.basis(i))
            for j in range(d):
                if val.coeffs[j]:
                    comp[j * step + flat] = val.coeffs[j]
        comps.append(tuple(comp))
    return MultiSeries(alg, order, tuple(comps))


def from_scalar_coeffs(coeffs, order=None) -> MultiSeries:
    """Build a dim-1 series from the shorthand [c0; c1, c2, ...]."""
    from .algebra import scalar_algebra
    alg = scalar_algebra()
    vals = [parse_rational(c) for c in coeffs]
    if order is None:
        order = len(vals) - 1
    vals += [ZERO] * (order + 1 - len(vals))
    return MultiSeries(alg, order, tuple((v,) for v in vals[:order + 1]))


def _check_pair(a: MultiSeries, b: MultiSeries):
    if a.algebra != b.algebra:
        raise AlgebraMismatch("series live over different algebras")
    if a.order != b.order:
        raise OrderMismatch("series have different truncation orders")


def series_add(a: MultiSeries, b: MultiSeries) -> MultiSeries:
    _check_pair(a, b)
    return MultiSeries(a.algebra, a.order,
                       tuple(tuple(x + y for x, y in zip(ca, cb))
                             for ca, cb in zip(a.comps, b.comps)))


def series_sub(a: MultiSeries, b: MultiSeries) -> MultiSeries:
    _check_pair(a, b)
    return MultiSeries(a.algebra, a.order,
                       tuple(tuple(x - y for x, y in zip(ca, cb))
                             for ca, cb in zip(a.comps, b.comps)))


def series_scale(a: MultiSeries, q) -> MultiSeries:
    q = parse_rational(q)
    return MultiSeries(a.algebra, a.order,
                       tuple(tuple(q * x for x in comp) for comp in a.comps))


def cauchy_product(a: MultiSeries, b: MultiSeries) -> MultiSeries:
    """(A.B)^(n)(x1..xn) = sum_{p+q=n} A^(p)(x1..xp) * B^(q)(x_{p+1}..xn)."""
    _check_pair(a, b)
    alg, d, order = a.algebra, a.algebra.dim, a.order
    tab = alg.table
    comps = []
    for n in range(order + 1):
        out = [ZERO] * (d ** (n + 1))
        stepn = d ** n
        for p in range(n + 1):
            q = n - p
            ap, bq = a.comps[p], b.comps[q]
            stepp, stepq = d ** p, d ** q
            for ia in range(stepp):
                for aa in range(d):
                    ca = ap[aa * stepp + ia]
                    if not ca:
                        continue
                    rowa = tab[aa]
                    base_i = ia * stepq
                    for ib in range(stepq):
                        flat = base_i + ib
                        for bb in range(d):
                            cb = bq[bb * stepq + ib]
                            if not cb:
                                continue
                            w = ca * cb
                            cell = rowa[bb]
                            for j in range(d):
                                ck = cell[j]
                                if ck:
                                    out[j * stepn + flat] += w * ck
        comps.append(tuple(out))
    return MultiSeries(alg, order, tuple(comps))


def cauchy_inverse(a: MultiSeries) -> MultiSeries:
    """Two-sided inverse for the Cauchy product, by graded recursion."""
    if not a.is_unital():
        raise NotUnital("Cauchy inverse needs degree-0 component 1_B")
    alg, d, order = a.algebra, a.algebra.dim, a.order
    tab = alg.table
    inv = [alg.unit]
    for n in range(1, order + 1):
        out = [ZERO] * (d ** (n + 1))
        stepn = d ** n
        # X_n = -sum_{p=1..n} A_p . X_{n-p}  (left division by A_0 = 1)
        for p in range(1, n + 1):
            q = n - p
            ap, xq = a.comps[p], inv[q]
            stepp, stepq = d ** p, d ** q
            for ia in range(stepp):
                for aa in range(d):
                    ca = ap[aa * stepp + ia]
                    if not ca:
                        continue
                    rowa = tab[aa]
                    base_i = ia * stepq
                    for ib in range(stepq):
                        flat = base_i + ib
                        for bb in range(d):
                            cb = xq[bb * stepq + ib]
                            if not cb:
                                continue
                            w = ca * cb
                            cell = rowa[bb]
                            for j in range(d):
                                ck = cell[j]
                                if ck:
                                    out[j * stepn + flat] -= w * ck
        inv.append(tuple(out))
    return MultiSeries(alg, order, tuple(inv))


def compose(a: MultiSeries, beta: MultiSeries) -> MultiSeries:
    """(A o beta)^(n) = sum A^(k) o (beta^(q1) x ... x beta^(qk)).

    The degree-0 component of A passes through unchanged; beta must have
    zero constant term.
    """
    _check_pair(a, beta)
    if not beta.has_zero_constant():
        raise NotCompositional("composition operand has a constant term")
    alg, d, order = a.algebra, a.algebra.dim, a.order
    comps = [a.comps[0]]
    for n in range(1, order + 1):
        out = [ZERO] * (d ** (n + 1))
        stepn = d ** n
        for k in range(1, n + 1):
            ak = a.comps[k]
            stepk = d ** k
            if all(not c for c in ak):
                continue
            for q in _compositions(n, k):
                # factors[t][(a_t, block_t)] = beta_{q_t}[a_t; block_t]
                block_steps = [d ** qt for qt in q]
                for blocks in product(*[range(s) for s in block_steps]):
                    flat = 0
                    for bt, s in zip(blocks, block_steps):
                        flat = flat * s + bt
                    for avec_flat in range(stepk):
                        w = ONE
                        rem = avec_flat
                        ok = True
                        # decode a-tuple most-significant first
                        for t in range(k):
                            at = (avec_flat // d ** (k - 1 - t)) % d
                            c = beta.comps[q[t]][at * block_steps[t] + blocks[t]]
                            if not c:
                                ok = False
                                break
                            w *= c
                        if not ok:
                            continue
                        for j in range(d):
                            c = ak[j * stepk + avec_flat]
                            if c:
                                out[j * stepn + flat] += c * w
        comps.append(tuple(out))
    return MultiSeries(alg, order, tuple(comps))


def comp_inverse(beta: MultiSeries) -> MultiSeries:
    """Compositional inverse of an element of Gamma (linear part I)."""
    if not beta.has_zero_constant():
        raise NotCompositional("compositional inverse needs zero constant term")
    if not beta.linear_is_identity():
        raise LinearPartNotIdentity(
            "compositional inverse needs linear part exactly I")
    alg, order = beta.algebra, beta.order
    gamma = identity_series(alg, order)
    # gamma_n = -sum_{k>=2} beta_k o (gamma blocks), solved degree by degree.
    for n in range(2, order + 1):
        partial = compose(beta, gamma)
        comps = list(gamma.comps)
        comps[n] = tuple(g - p for g, p in
                         zip(gamma.comps[n], partial.comps[n]))
        gamma = MultiSeries(alg, order, tuple(comps))
    return gamma


def act(a: MultiSeries, beta: MultiSeries) -> MultiSeries:
    """Right action of Gamma on the Cauchy group: (1+alpha).beta = 1+alpha o beta."""
    if not a.is_unital():
        raise NotUnital("the action is defined on series starting with 1_B")
    return compose(a, beta)


# -- operator kinds -------------------------------------------------------

_CLOSED_KINDS = ("lambda", "rho", "lambda_inv_sharp", "lambda_inv_sharp_rho",
                 "const_unit")


@dataclass(frozen=True)
class OOperator:
    """Evaluator from the Cauchy group to the composition group.

    The closed kinds are the translations by the identity map and their
    sharp-inverses; ``sharp`` composes two operators with the group-level
    # product.  Every kind is degree-raising: the degree-n part of the
    output depends only on input degrees below n.
    """

    kind: str
    left: "OOperator | None" = None
    right: "OOperator | None" = None

    def __call__(self, g: MultiSeries) -> MultiSeries:
        ident = identity_series(g.algebra, g.order)
        if self.kind == "lambda":
            return cauchy_product(ident, g)
        if self.kind == "rho":
            return cauchy_product(g, ident)
        if self.kind == "lambda_inv_sharp":
            return cauchy_product(ident, cauchy_inverse(g))
        if self.kind == "lambda_inv_sharp_rho":
            return cauchy_product(cauchy_product(g, ident), cauchy_inverse(g))
        if self.kind == "const_unit":
            return ident
        if self.kind == "sharp":
            s, t = self.left, self.right
            tg = t(g)
            return compose(s(act(g, comp_inverse(tg))), tg)
        raise OperatorMismatch("unknown operator kind %r" % self.kind)

    def label(self) -> str:
        if self.kind == "sharp":
            return "(%s # %s)" % (self.left.label(), self.right.label())
        return self.kind


def o_operator(kind: str) -> OOperator:
    if kind not in _CLOSED_KINDS:
        raise OperatorMismatch("unknown operator kind %r" % kind)
    return OOperator(kind)


def sharp_group(s: OOperator, t: OOperator) -> OOperator:
    """Group-level # product: g -> S(g.T(g)^{-1o}) o T(g)."""
    return OOperator("sharp", s, t)


def star(t: OOperator, a: MultiSeries, b: MultiSeries) -> MultiSeries:
    """Twisted product (A . T(B)) * B on the Cauchy group."""
    return cauchy_product(act(a, t(b)), b)


def star_opposite(t: OOperator, a: MultiSeries, b: MultiSeries) -> MultiSeries:
    """Twisted product B * (A . T(B)) of the opposite Cauchy group.

    The left translation by the identity map is an operator for the
    opposite group only, so its twisted products multiply on the left.
    Both flavours coincide over a one-dimensional base algebra.
    """
    return cauchy_product(b, act(a, t(b)))


def star_inverse(t: OOperator, a: MultiSeries) -> MultiSeries:
    """A^{-1*} . T(A)^{-1o}; the two-sided round trip is asserted."""
    inv = act(cauchy_inverse(a), comp_inverse(t(a)))
    unit = one_series(a.algebra, a.order)
    for candidate in (star(t, a, inv), star(t, inv, a)):
        if candidate != unit:
            raise StarInverseCheckFailed(_first_mismatch(candidate, unit))
    return inv


def _first_mismatch(a: MultiSeries, b: MultiSeries) -> int:
    for n, (ca, cb) in enumerate(zip(a.comps, b.comps)):
        if ca != cb:
            return n
    return -1


def e_transform(t: OOperator, g: MultiSeries) -> MultiSeries:
    """Unique fixed point x = g . T(x), by order+1 iterations.

    One extra iteration asserts stability; failure signals an operator
    that is not degree-raising.
    """
    if not g.is_unital():
        raise NotUnital("e-transform acts on series starting with 1_B")
    x = g
    for _ in range(g.order + 1):
        x = act(g, t(x))
    check = act(g, t(x))
    if check != x:
        raise FixedPointNotStable(_first_mismatch(check, x))
    return x


def e_inverse(t: OOperator, g: MultiSeries) -> MultiSeries:
    """g . T(g)^{-1o}, the inverse of the e-transform."""
    return act(g, comp_inverse(t(g)))


# -- crossed products -----------------------------------------------------

@dataclass(frozen=True)
class CrossedPair:
    """Element (k, h) of the crossed product group twisted by ``op``."""

    k: MultiSeries
    h: MultiSeries
    op: OOperator

    def __post_init__(self):
        _check_pair(self.k, self.h)


def _check_crossed(t: OOperator, *pairs):
    for p in pairs:
        if p.op != t:
            raise OperatorMismatch("crossed pair is twisted by %s, not %s"
                                   % (p.op.label(), t.label()))


def crossed_mul(t: OOperator, p: CrossedPair, q: CrossedPair) -> CrossedPair:
    """(k1, h1)(k2, h2) = (k1 *_T k2, (h1 . T(k2)) * h2)."""
    _check_crossed(t, p, q)
    return CrossedPair(star(t, p.k, q.k),
                       cauchy_product(act(p.h, t(q.k)), q.h), t)


def crossed_mul_opposite(t: OOperator, p: CrossedPair,
                         q: CrossedPair) -> CrossedPair:
    """Crossed product of the opposite group: both slots multiply on the left."""
    _check_crossed(t, p, q)
    return CrossedPair(star_opposite(t, p.k, q.k),
                       cauchy_product(q.h, act(p.h, t(q.k))), t)


def crossed_inverse_opposite(t: OOperator, p: CrossedPair) -> CrossedPair:
    _check_crossed(t, p)
    k_inv = star_inverse(t, p.k)
    h_inv = cauchy_inverse(act(p.h, t(k_inv)))
    return CrossedPair(k_inv, h_inv, t)


def crossed_unit(alg: BaseAlgebra, order: int, t: OOperator) -> CrossedPair:
    u = one_series(alg, order)
    return CrossedPair(u, u, t)


def crossed_inverse(t: OOperator, p: CrossedPair) -> CrossedPair:
    _check_crossed(t, p)
    k_inv = star_inverse(t, p.k)
    h_inv = cauchy_inverse(act(p.h, t(k_inv)))
    return CrossedPair(k_inv, h_inv, t)


def relative_e(t: OOperator, p: CrossedPair) -> CrossedPair:
    """(k, h) -> (e_T(k), h . T(e_T(k))): the relative transform."""
    _check_crossed(t, p)
    k_new = e_transform(t, p.k)
    return CrossedPair(k_new, act(p.h, t(k_new)), t)


def relative_e_inverse(t: OOperator, p: CrossedPair) -> CrossedPair:
    _check_crossed(t, p)
    k_old = e_inverse(t, p.k)
    return CrossedPair(k_old, act(p.h, comp_inverse(t(p.k))), t)


# -- unit padding / stripping --------------------------------------------

def right_unit_pad(k: MultiSeries) -> MultiSeries:
    """1 + K*I as a series one order higher than K (components are exact)."""
    alg, d, order = k.algebra, k.algebra.dim, k.order
    comps = [alg.unit]
    for n in range(1, order + 2):
        # (K*I)^(n)(x1..xn) = K^(n-1)(x1..x_{n-1}) * x_n
        src = k.comps[n - 1]
        steps, stepn = d ** (n - 1), d ** n
        out = [ZERO] * (d ** (n + 1))
        for ia in range(steps):
            for a in range(d):
                ca = src[a * steps + ia]
                if not ca:
                    continue
                rowa = k.algebra.table[a]
                for b in range(d):
                    flat = ia * d + b
                    cell = rowa[b]
                    for j in range(d):
                        ck = cell[j]
                        if ck:
                            out[j * stepn + flat] += ca * ck
        comps.append(tuple(out))
    return MultiSeries(alg, order + 1, tuple(comps))


def strip_right_unit(s: MultiSeries) -> MultiSeries:
    """Recover K from 1 + K*I by evaluating the last slot at 1_B.

    The reconstruction K*I is compared with the input; a mismatch means the
    input was not of the stated shape.
    """
    if not s.is_unital():
        raise NotUnital("expected a series of the form 1 + K*I")
    alg, d = s.algebra, s.algebra.dim
    order = s.order - 1
    comps = []
    for n in range(order + 1):
        src = s.comps[n + 1]
        stepn = d ** n
        out = [ZERO] * (d ** (n + 1))
        for ia in range(stepn):
            for j in range(d):
                val = ZERO
                for b in range(d):
                    cu = alg.unit[b]
                    if cu:
                        val += cu * src[j * stepn * d + ia * d + b]
                out[j * stepn + ia] = val
        comps.append(tuple(out))
    k = MultiSeries(alg, order, tuple(comps))
    if right_unit_pad(k) != s:
        raise SeriesError("series is not of the form 1 + K*I")
    return k


# -- serialization --------------------------------------------------------

def series_to_json(s: MultiSeries):
    return {
        "algebra": algebra_to_json(s.algebra),
        "order": s.order,
        "components": [[format_rational(c) for c in comp] for comp in s.comps],
    }


def series_from_json(doc, algebra: BaseAlgebra | None = None) -> MultiSeries:
    alg = algebra if algebra is not None else algebra_from_json(doc["algebra"])
    order = doc["order"]
    comps = [tuple(parse_rational(c) for c in comp)
             for comp in doc["components"]]
    return MultiSeries(alg, order, tuple(comps))


def components_from_json(components, alg: BaseAlgebra, order: int) -> MultiSeries:
    comps = [tuple(parse_rational(c) for c in comp) for comp in components]
    if len(comps) != order + 1:
        raise OrderMismatch("expected %d components" % (order + 1))
    return MultiSeries(alg, order, tuple(comps))
