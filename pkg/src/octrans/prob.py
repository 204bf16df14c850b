"""Distributions, transforms and the four multiplicative convolutions.

The cumulant series K of a variable x collects kappa_{n+1}(x b_1, ..., b_n x)
at arity n; its moment series (starting with 1) is the fixed point of

    C = (1 + K*I) . lambda(C),

so K and C determine each other through the e-transform of the left
translation by I.  The T-transform is the lambda e-inverse of K, the
H-transform the lambda star-inverse of T^{-1}.E.  Every transform with two
published routes is computed both ways and the results are compared
exactly; a mismatch raises rather than warns.

Operand order for the monotone kinds: convolving (a, b) returns the
transform of the product b.a, with a the fully dominated variable.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import BaseAlgebra
from .ncpart import (MeanNotUnit, conditional_cumulants_nc,
                     cumulants_from_moments_nc, family_from_k_series,
                     k_series_from_family, moments_from_cumulants_nc,
                     product_moment_series)
from .series import (CrossedPair, MultiSeries, act, cauchy_inverse,
                     cauchy_product, comp_inverse, crossed_mul,
                     crossed_mul_opposite, e_inverse, e_transform,
                     geometric_identity_series, identity_series, o_operator,
                     one_series, relative_e, right_unit_pad, series_sub, star,
                     star_inverse, star_opposite, strip_right_unit)

LAMBDA = o_operator("lambda")
RHO = o_operator("rho")
FREE_OP = o_operator("lambda_inv_sharp_rho")


class ProbError(ValueError):
    pass


class OracleMismatch(ProbError):
    def __init__(self, degree):
        self.degree = degree
        super().__init__("series route disagrees with the partition oracle "
                         "at degree %d" % degree)


class RouteMismatch(ProbError):
    def __init__(self, what, degree):
        self.degree = degree
        super().__init__("the two published routes for %s disagree at "
                         "degree %d" % (what, degree))


class KindMismatch(ProbError):
    pass


class SubordinationIdentityFailed(ProbError):
    def __init__(self, what, degree):
        self.degree = degree
        super().__init__("subordination identity %s fails at degree %d"
                         % (what, degree))


def _first_diff(a: MultiSeries, b: MultiSeries) -> int:
    for n in range(min(a.order, b.order) + 1):
        if a.comps[n] != b.comps[n]:
            return n
    return -1


def _require(cond_series_pair, what):
    a, b = cond_series_pair
    if a != b:
        raise RouteMismatch(what, _first_diff(a, b))


@dataclass(frozen=True)
class OVDistribution:
    """Moment data of one variable under one or two states.

    ``phi_moments`` is the moment series under the conditional state and
    ``psi_moments`` the series under the defining state; for unconditional
    work psi may be omitted and phi plays both roles.  Means are required
    to equal 1_B (the linear component of a lawful moment series is I).
    """

    algebra: BaseAlgebra
    order: int
    phi_moments: MultiSeries
    psi_moments: MultiSeries | None
    source: str = "moments"

    def __post_init__(self):
        for s in (self.phi_moments, self.psi_moments):
            if s is None:
                continue
            if not s.is_unital() or not s.linear_is_identity():
                raise MeanNotUnit("distribution means must equal 1_B")

    @property
    def psi(self) -> MultiSeries:
        return self.psi_moments if self.psi_moments is not None \
            else self.phi_moments

    @property
    def phi(self) -> MultiSeries:
        return self.phi_moments

    def is_conditional(self) -> bool:
        return self.psi_moments is not None


def distribution_from_moments(phi: MultiSeries,
                              psi: MultiSeries | None = None) -> OVDistribution:
    return OVDistribution(phi.algebra, phi.order, phi, psi, "moments")


def distribution_from_cumulants(k: MultiSeries,
                                kc: MultiSeries | None = None) -> OVDistribution:
    """Distribution with cumulant provenance; moments via the partition sum.

    ``k`` is the psi-cumulant series; ``kc`` the conditional one.  The
    moment series carry one more exact order than the cumulant input.
    """
    order = k.order + 1
    fam = family_from_k_series(k)
    psi = moments_from_cumulants_nc(fam, order)
    if kc is None:
        return OVDistribution(k.algebra, order, psi, None, "cumulants")
    phi = moments_from_cumulants_nc(fam, order,
                                    outer_fam=family_from_k_series(kc))
    return OVDistribution(k.algebra, order, phi, psi, "cumulants")


@dataclass(frozen=True)
class TransformPair:
    """A (main, conditional) transform pair: (K,K^c), (T,T^c) or (H,H^c)."""

    role: str
    main: MultiSeries
    conditional: MultiSeries

    def __post_init__(self):
        if self.role not in ("K", "T", "H"):
            raise KindMismatch("unknown transform role %r" % self.role)


# -- cumulants and moments -------------------------------------------------

def cumulants(dist: OVDistribution, cross_check: bool = True) -> MultiSeries:
    """Cumulant series K from 1 + K*I = e-inverse_lambda of the psi-moments.

    The result is one order lower than the moment input.  The partition
    oracle recomputes K independently; disagreement raises OracleMismatch.
    """
    padded = e_inverse(LAMBDA, dist.psi)
    k = strip_right_unit(padded)
    if cross_check:
        fam = cumulants_from_moments_nc(dist.psi)
        alt = k_series_from_family(fam, k.order)
        if alt != k:
            raise OracleMismatch(_first_diff(alt, k))
    return k


def conditional_cumulants(dist: OVDistribution) -> TransformPair:
    """(K, K^c) from a two-state distribution via the partition extraction."""
    k = cumulants(dist)
    fam_c = conditional_cumulants_nc(dist.phi, dist.psi)
    kc = k_series_from_family(fam_c, k.order)
    return TransformPair("K", k, kc)


def moments(k: MultiSeries, check: bool = True) -> MultiSeries:
    """Moment series from cumulants, one order above the input.

    Route one is the fixed point C = (1+K*I) . lambda(C); route two the
    double inverse ((1+K*I)^{-1})^{-1 star_lambda}.  Both are computed.
    """
    padded = right_unit_pad(k)
    mom = e_transform(LAMBDA, padded)
    if check:
        alt = star_inverse(LAMBDA, cauchy_inverse(padded))
        _require((mom, alt), "moments")
    return mom


def phi_moments_from_pair(pair: TransformPair) -> MultiSeries:
    """phi-moment series of a (K, K^c) pair by the conditional partition sum."""
    if pair.role != "K":
        raise KindMismatch("phi moments need a (K, K^c) pair")
    fam = family_from_k_series(pair.main)
    fam_c = family_from_k_series(pair.conditional)
    return moments_from_cumulants_nc(fam, pair.main.order + 1, outer_fam=fam_c)


# -- T-transforms -----------------------------------------------------------

def t_transform(k: MultiSeries) -> MultiSeries:
    """T = K . (I*K)^{-1 o}, the lambda e-inverse of K."""
    return e_inverse(LAMBDA, k)


def cumulants_from_t(t: MultiSeries) -> MultiSeries:
    """K as the fixed point K = T . lambda(K)."""
    return e_transform(LAMBDA, t)


def conditional_t(pair: TransformPair, check: bool = True) -> TransformPair:
    """(T, T^c) from (K, K^c): the inverse of the relative lambda transform.

    Direct route: T = t_transform(K), T^c = K^c . (I*K)^{-1 o}.  Checked
    against the crossed-product route (componentwise Cauchy inverse, then
    the crossed inverse, per the factorization theorem's definition).
    """
    if pair.role != "K":
        raise KindMismatch("conditional_t consumes a (K, K^c) pair")
    k, kc = pair.main, pair.conditional
    t = t_transform(k)
    tc = act(kc, comp_inverse(LAMBDA(k)))
    if check:
        # ((T,T^c)^{-1.})^{-1 crossed_lambda} must reproduce (K, K^c)
        inv = CrossedPair(cauchy_inverse(t), cauchy_inverse(tc), LAMBDA)
        back = _crossed_inverse_lambda(inv)
        _require((back.k, k), "conditional T (main)")
        _require((back.h, kc), "conditional T (conditional)")
    return TransformPair("T", t, tc)


def conditional_t_inverse(pair: TransformPair) -> TransformPair:
    """(K, K^c) = relative lambda transform of (T, T^c)."""
    if pair.role != "T":
        raise KindMismatch("expected a (T, T^c) pair")
    out = relative_e(LAMBDA, CrossedPair(pair.main, pair.conditional, LAMBDA))
    return TransformPair("K", out.k, out.h)


def _crossed_inverse_lambda(p: CrossedPair) -> CrossedPair:
    """Inverse in the lambda crossed product (star-lambda laws hold here)."""
    k_inv = star_inverse(LAMBDA, p.k)
    h_inv = cauchy_inverse(act(p.h, LAMBDA(k_inv)))
    return CrossedPair(k_inv, h_inv, LAMBDA)


# -- H-transforms -----------------------------------------------------------

def _one_minus_shift(h: MultiSeries) -> MultiSeries:
    """(1 - I*H) as a unital series."""
    alg, order = h.algebra, h.order
    return series_sub(one_series(alg, order),
                      cauchy_product(identity_series(alg, order), h))


def h_transform(k: MultiSeries, check: bool = True) -> MultiSeries:
    """H from K by the fixed point H = K . rho((1 - I*H)^{-1}).

    Checked against the definition H = (T^{-1} . E)^{-1 star_lambda}
    with E = I + I*I + ... truncated.
    """
    h = k
    for _ in range(k.order + 1):
        h = act(k, RHO(cauchy_inverse(_one_minus_shift(h))))
    again = act(k, RHO(cauchy_inverse(_one_minus_shift(h))))
    _require((again, h), "H fixed point stability")
    if check:
        t = t_transform(k)
        sigma = act(cauchy_inverse(t),
                    geometric_identity_series(k.algebra, k.order))
        alt = star_inverse(LAMBDA, sigma)
        _require((h, alt), "H transform")
    return h


def k_from_h(h: MultiSeries) -> MultiSeries:
    """Invert the H fixed point: K = H . (rho((1-I*H)^{-1}))^{-1 o}."""
    shift = RHO(cauchy_inverse(_one_minus_shift(h)))
    return act(h, comp_inverse(shift))


def conditional_h(pair: TransformPair, check: bool = True) -> TransformPair:
    """(H, H^c) = relative lambda transform of (T.E, T^c.E).

    Checked against H^c = K^c . rho((1 - I*H)^{-1}) from the cumulant pair.
    """
    if pair.role != "T":
        raise KindMismatch("conditional_h consumes a (T, T^c) pair")
    t, tc = pair.main, pair.conditional
    ee = geometric_identity_series(t.algebra, t.order)
    out = relative_e(LAMBDA, CrossedPair(act(t, ee), act(tc, ee), LAMBDA))
    h, hc = out.k, out.h
    if check:
        kpair = conditional_t_inverse(pair)
        alt = act(kpair.conditional,
                  RHO(cauchy_inverse(_one_minus_shift(h))))
        _require((hc, alt), "conditional H")
    return TransformPair("H", h, hc)


def kc_from_hc(hc: MultiSeries, h: MultiSeries) -> MultiSeries:
    """Invert H^c = K^c . rho((1-I*H)^{-1})."""
    shift = RHO(cauchy_inverse(_one_minus_shift(h)))
    return act(hc, comp_inverse(shift))


# -- convolutions ------------------------------------------------------------

def multiplicative_convolve(kind: str, a, b):
    """Transform-level product for the four independences.

    free:      T_a, T_b            -> T_{ab}
    cfree:     (T,T^c) pairs       -> (T,T^c) of ab
    monotone:  H_a, H_b            -> H_{ba}   (note the operand order)
    cmonotone: (H,H^c) pairs       -> (H,H^c) of ba
    """
    if kind == "free":
        if not isinstance(a, MultiSeries) or not isinstance(b, MultiSeries):
            raise KindMismatch("free convolution consumes T series")
        return star(FREE_OP, a, b)
    if kind == "monotone":
        if not isinstance(a, MultiSeries) or not isinstance(b, MultiSeries):
            raise KindMismatch("monotone convolution consumes H series")
        return star_opposite(LAMBDA, a, b)
    if kind == "cfree":
        if not (isinstance(a, TransformPair) and a.role == "T"
                and isinstance(b, TransformPair) and b.role == "T"):
            raise KindMismatch("cfree convolution consumes (T, T^c) pairs")
        out = crossed_mul(FREE_OP, CrossedPair(a.main, a.conditional, FREE_OP),
                          CrossedPair(b.main, b.conditional, FREE_OP))
        return TransformPair("T", out.k, out.h)
    if kind == "cmonotone":
        if not (isinstance(a, TransformPair) and a.role == "H"
                and isinstance(b, TransformPair) and b.role == "H"):
            raise KindMismatch("cmonotone convolution consumes (H, H^c) pairs")
        out = crossed_mul_opposite(
            LAMBDA, CrossedPair(a.main, a.conditional, LAMBDA),
            CrossedPair(b.main, b.conditional, LAMBDA))
        return TransformPair("H", out.k, out.h)
    raise KindMismatch("unknown convolution kind %r" % kind)


# -- subordination -----------------------------------------------------------

@dataclass(frozen=True)
class Subordination:
    k_left: MultiSeries   # K_{a -| b}
    k_right: MultiSeries  # K_{a |- b}
    h_left: MultiSeries   # H_{a -| b}
    h_right: MultiSeries  # H_{a |- b}


def _iterate(seed, step, order, what):
    x = seed
    for _ in range(order + 1):
        x = step(x)
    if step(x) != x:
        raise SubordinationIdentityFailed(what + " fixed point", -1)
    return x


def subordination(ka: MultiSeries, kb: MultiSeries,
                  check: bool = True) -> Subordination:
    """One-sided subordination series for free multiplication.

    K_{a-|b} = K_a .rho (K_b .lambda K_{a-|b}),
    K_{a|-b} = K_b .lambda (K_a .rho K_{a|-b}),
    H_{a|-b} = H_a .rho (H_b .lambda H_{a|-b}),
    H_{a-|b} = H_b .lambda (H_a .rho H_{a-|b});
    the splitting identities against the full convolution are asserted.
    """
    order = ka.order
    k_left = _iterate(ka, lambda x: act(ka, RHO(act(kb, LAMBDA(x)))),
                      order, "K left")
    k_right = _iterate(kb, lambda x: act(kb, LAMBDA(act(ka, RHO(x)))),
                       order, "K right")
    ha, hb = h_transform(ka), h_transform(kb)
    h_right = _iterate(ha, lambda x: act(ha, RHO(act(hb, LAMBDA(x)))),
                       order, "H right")
    h_left = _iterate(hb, lambda x: act(hb, LAMBDA(act(ha, RHO(x)))),
                      order, "H left")
    sub = Subordination(k_left, k_right, h_left, h_right)
    if check:
        check_subordination_identities(ka, kb, sub)
    return sub


def check_subordination_identities(ka, kb, sub: Subordination):
    """The coupled relations between the one-sided series and the products.

    The lambda-twisted products are the opposite-group ones (left
    translation is an operator of the opposite group only).
    """
    k_ab = cumulants_from_t(multiplicative_convolve(
        "free", t_transform(ka), t_transform(kb)))
    ha, hb = h_transform(ka, check=False), h_transform(kb, check=False)
    h_ab = h_transform(k_ab, check=False)
    pairs = [
        ("K_ab = K_b *_lambda K_left",
         star_opposite(LAMBDA, kb, sub.k_left), k_ab),
        ("K_ab = K_a *_rho K_right", star(RHO, ka, sub.k_right), k_ab),
        ("K_left = K_a .rho K_right", act(ka, RHO(sub.k_right)), sub.k_left),
        ("K_right = K_b .lambda K_left", act(kb, LAMBDA(sub.k_left)),
         sub.k_right),
        ("H_left = H_b .lambda H_right", act(hb, LAMBDA(sub.h_right)),
         sub.h_left),
        ("H_right = H_a .rho H_left", act(ha, RHO(sub.h_left)), sub.h_right),
        ("H_ab = H_b *_lambda H_right",
         star_opposite(LAMBDA, hb, sub.h_right), h_ab),
        ("H_ab = H_a *_rho H_left", star(RHO, ha, sub.h_left), h_ab),
    ]
    for what, lhs, rhs in pairs:
        if lhs != rhs:
            raise SubordinationIdentityFailed(what, _first_diff(lhs, rhs))


def conditional_product_identities(pair_a: TransformPair,
                                   pair_b: TransformPair,
                                   sub: Subordination):
    """The conditional splitting identities for c-free pairs (K, K^c).

    K^c_{ab} = (K^c_a .rho K_{a|-b}) * (K^c_b .lambda K_{a-|b}) and its
    H-counterpart H^c_{ab} = (H^c_a .rho H_{a-|b}) * (H^c_b .lambda H_{a|-b}).
    """
    if pair_a.role != "K" or pair_b.role != "K":
        raise KindMismatch("expected (K, K^c) pairs")
    tpa, tpb = conditional_t(pair_a, check=False), conditional_t(pair_b,
                                                                 check=False)
    t_ab = multiplicative_convolve("cfree", tpa, tpb)
    k_ab_pair = conditional_t_inverse(t_ab)
    kc_ab = cauchy_product(act(pair_a.conditional, RHO(sub.k_right)),
                           act(pair_b.conditional, LAMBDA(sub.k_left)))
    if kc_ab != k_ab_pair.conditional:
        raise SubordinationIdentityFailed(
            "K^c_ab splitting", _first_diff(kc_ab, k_ab_pair.conditional))
    hpa = conditional_h(tpa, check=False)
    hpb = conditional_h(tpb, check=False)
    h_ab_pair = conditional_h(t_ab, check=False)
    hc_ab = cauchy_product(act(hpa.conditional, RHO(sub.h_left)),
                           act(hpb.conditional, LAMBDA(sub.h_right)))
    if hc_ab != h_ab_pair.conditional:
        raise SubordinationIdentityFailed(
            "H^c_ab splitting", _first_diff(hc_ab, h_ab_pair.conditional))


# -- oracle-facing pushbacks -------------------------------------------------

def psi_moments_from_t(t: MultiSeries) -> MultiSeries:
    return moments(cumulants_from_t(t), check=False)


def product_via_free(ka: MultiSeries, kb: MultiSeries) -> MultiSeries:
    """psi-moments of ab via the T-transform factorization pipeline."""
    t_ab = multiplicative_convolve("free", t_transform(ka), t_transform(kb))
    return psi_moments_from_t(t_ab)


def oracle_free_product(dist_a: OVDistribution, dist_b: OVDistribution,
                        order: int, cross_check=False):
    return product_moment_series("free", order, dist_a.psi, dist_b.psi,
                                 cross_check=cross_check)
