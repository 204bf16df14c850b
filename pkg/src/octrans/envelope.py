"""Lie modules and truncated universal envelopes on PBW bases.

A Lie module bundles two finite-dimensional Lie algebras g and a with a
right action of a on g by derivations; all axioms are verified on basis
triples at construction.  Envelopes are realized on PBW monomials up to a
degree cap D: elements are dicts {monomial: Fraction}, the product
straightens words with the bracket rewriting, the coproduct makes
generators primitive, and the action of U(a) on U(g) extends the module
action by derivations in each slot.  Products drop monomials above D;
identities are only ever evaluated where total degree stays within D,
which keeps the truncation faithful.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product

from .algebra import ZERO, ONE, parse_rational

MAX_PBW_BASIS = 10 ** 4


class HopfError(ValueError):
    pass


class JacobiViolation(HopfError):
    def __init__(self, which, i, j, k):
        self.witness = (which, i, j, k)
        super().__init__("Jacobi identity fails in %s on basis (%d, %d, %d)"
                         % (which, i, j, k))


class DerivationViolation(HopfError):
    def __init__(self, i, j, k):
        self.witness = (i, j, k)
        super().__init__("action is not by derivations on ([x%d,x%d], a%d)"
                         % (i, j, k))


class ModuleViolation(HopfError):
    def __init__(self, i, j, k):
        self.witness = (i, j, k)
        super().__init__("module law fails on (x%d, [a%d,a%d])" % (i, j, k))


class TooLarge(HopfError):
    pass


class DegreeOverflow(HopfError):
    pass


# -- linear algebra over dicts ---------------------------------------------

def vec_add(u, v):
    out = dict(u)
    for k, c in v.items():
        c2 = out.get(k, ZERO) + c
        if c2:
            out[k] = c2
        else:
            out.pop(k, None)
    return out

def vec_scale(u, q):
    if not q:
        return {}
    return {k: q * c for k, c in u.items()}

def vec_sub(u, v):
    return vec_add(u, vec_scale(v, -ONE))

def vec_eq(u, v):
    return vec_sub(u, v) == {}


@dataclass(frozen=True)
class LieAlgebra:
    """Structure constants bracket[i][j] = vector of [x_i, x_j]."""

    dim: int
    bracket: tuple  # bracket[i][j]: tuple of Fractions, length dim

    def brk(self, i, j):
        return {k: c for k, c in enumerate(self.bracket[i][j]) if c}

    def brk_elems(self, u, v):
        out = {}
        for i, ci in u.items():
            for j, cj in v.items():
                w = ci * cj
                for k, ck in self.brk(i, j).items():
                    c2 = out.get(k, ZERO) + w * ck
                    if c2:
                        out[k] = c2
                    else:
                        out.pop(k, None)
        return out

    @property
    def is_abelian(self):
        return all(not c for row in self.bracket for cell in row for c in cell)


def lie_algebra_from_constants(dim, bracket) -> LieAlgebra:
    brk = tuple(tuple(tuple(parse_rational(c) for c in cell) for cell in row)
                for row in bracket)
    lie = LieAlgebra(dim, brk)
    for i in range(dim):
        for j in range(dim):
            anti = tuple(-c for c in brk[j][i])
            if brk[i][j] != anti:
                raise JacobiViolation("antisymmetry", i, j, j)
    for i, j, k in product(range(dim), repeat=3):
        total = {}
        for (a, b, c) in ((i, j, k), (j, k, i), (k, i, j)):
            total = vec_add(total, lie.brk_elems(lie.brk(a, b), {c: ONE}))
        if total:
            raise JacobiViolation("bracket", i, j, k)
    return lie


@dataclass(frozen=True)
class LieModule:
    """Right Lie module (g, <|, a): a acts on g by derivations."""

    g: LieAlgebra
    a: LieAlgebra
    action: tuple  # action[i][j]: tuple over g-basis, x_i <| a_j

    def act_gen(self, i, j):
        return {k: c for k, c in enumerate(self.action[i][j]) if c}

    def act_elems(self, u, v):
        """(sum u_i x_i) <| (sum v_j a_j)."""
        out = {}
        for i, ci in u.items():
            for j, cj in v.items():
                w = ci * cj
                for k, ck in self.act_gen(i, j).items():
                    c2 = out.get(k, ZERO) + w * ck
                    if c2:
                        out[k] = c2
                    else:
                        out.pop(k, None)
        return out


def lie_module_from_constants(g_dim, g_bracket, a_dim, a_bracket,
                              action) -> LieModule:
    """Validate the two brackets, the derivation law and the module law."""
    g = lie_algebra_from_constants(g_dim, g_bracket)
    a = lie_algebra_from_constants(a_dim, a_bracket)
    act = tuple(tuple(tuple(parse_rational(c) for c in cell) for cell in row)
                for row in action)
    mod = LieModule(g, a, act)
    for i, j in product(range(g_dim), repeat=2):
        for k in range(a_dim):
            lhs = mod.act_elems(g.brk(i, j), {k: ONE})
            rhs = vec_add(g.brk_elems(mod.act_gen(i, k), {j: ONE}),
                          g.brk_elems({i: ONE}, mod.act_gen(j, k)))
            if not vec_eq(lhs, rhs):
                raise DerivationViolation(i, j, k)
    for i in range(g_dim):
        for j, k in product(range(a_dim), repeat=2):
            lhs = mod.act_elems({i: ONE}, a.brk(j, k))
            rhs = vec_sub(mod.act_elems(mod.act_gen(i, j), {k: ONE}),
                          mod.act_elems(mod.act_gen(i, k), {j: ONE}))
            if not vec_eq(lhs, rhs):
                raise ModuleViolation(i, j, k)
    return mod


# -- truncated PBW envelope --------------------------------------------------

class PBW:
    """Truncated universal envelope of a Lie algebra on sorted monomials.

    Elements are dicts {tuple of generator indices (nondecreasing): Fraction};
    () is the unit.  Multiplication concatenates and straightens with the
    bracket; monomials above the cap are dropped from results.
    """

    def __init__(self, lie: LieAlgebra, cap: int):
        self.lie = lie
        self.cap = cap
        self.basis = [()]
        prev = [()]
        for _ in range(cap):
            nxt = []
            for mono in prev:
                lo = mono[-1] if mono else 0
                for i in range(lo, lie.dim):
                    nxt.append(mono + (i,))
            self.basis.extend(nxt)
            prev = nxt
            if len(self.basis) > MAX_PBW_BASIS:
                raise TooLarge("PBW basis exceeds %d monomials" % MAX_PBW_BASIS)
        self._straight = {}
        self._coprod = {}

    def unit(self):
        return {(): ONE}

    def gen(self, i):
        return {(i,): ONE}

    def element_of_lie(self, vec):
        return {(i,): c for i, c in vec.items() if c}

    def straighten(self, word):
        """Normal-order an arbitrary word; drops monomials above the cap."""
        if word in self._straight:
            return self._straight[word]
        out = self._straighten_inner(word)
        out = {m: c for m, c in out.items() if len(m) <= self.cap}
        self._straight[word] = out
        return out

    def _straighten_inner(self, word):
        for t in range(len(word) - 1):
            i, j = word[t], word[t + 1]
            if i > j:
                swapped = word[:t] + (j, i) + word[t + 2:]
                out = dict(self._straighten_inner(swapped))
                for k, c in self.lie.brk(i, j).items():
                    sub = self._straighten_inner(word[:t] + (k,) + word[t + 2:])
                    out = vec_add(out, vec_scale(sub, c))
                return out
        return {word: ONE}

    def mul(self, u, v):
        out = {}
        for m1, c1 in u.items():
            for m2, c2 in v.items():
                if len(m1) + len(m2) > self.cap and not self._can_shorten():
                    continue
                w = c1 * c2
                for m, c in self.straighten(m1 + m2).items():
                    c2_ = out.get(m, ZERO) + w * c
                    if c2_:
                        out[m] = c2_
                    else:
                        out.pop(m, None)
        return out

    def _can_shorten(self):
        # straightening can only lower degree through brackets
        return not self.lie.is_abelian

    def coproduct(self, mono):
        """List of (left, right, multiplicity); generators are primitive."""
        if mono in self._coprod:
            return self._coprod[mono]
        n = len(mono)
        agg = {}
        for r in range(n + 1):
            for subset in combinations(range(n), r):
                left = tuple(mono[i] for i in subset)
                right = tuple(mono[i] for i in range(n) if i not in subset)
                agg[(left, right)] = agg.get((left, right), 0) + 1
        out = tuple((l, r, Fraction(m)) for (l, r), m in sorted(agg.items()))
        self._coprod[mono] = out
        return out

    def coproduct_elem(self, u):
        out = {}
        for mono, c in u.items():
            for l, r, m in self.coproduct(mono):
                key = (l, r)
                c2 = out.get(key, ZERO) + c * m
                if c2:
                    out[key] = c2
                else:
                    out.pop(key, None)
        return out

    def antipode_mono(self, mono):
        sign = -ONE if len(mono) % 2 else ONE
        return vec_scale(self.straighten(tuple(reversed(mono))), sign)

    def antipode(self, u):
        out = {}
        for mono, c in u.items():
            out = vec_add(out, vec_scale(self.antipode_mono(mono), c))
        return out

    def counit(self, u):
        return u.get((), ZERO)

    def degrees(self, u):
        return {len(m) for m in u}


class Envelope:
    """The pair (U(g), U(a)) with the extended action of U(a) on U(g)."""

    def __init__(self, module: LieModule, cap: int):
        self.module = module
        self.cap = cap
        self.Hg = PBW(module.g, cap)
        self.Ha = PBW(module.a, cap)
        self._act_gen = {}

    def _act_by_gen(self, mono, j):
        """Monomial of U(g) acted on by the a-generator j, by derivation."""
        key = (mono, j)
        if key in self._act_gen:
            return self._act_gen[key]
        out = {}
        for t in range(len(mono)):
            for k, c in self.module.act_gen(mono[t], j).items():
                word = mono[:t] + (k,) + mono[t + 1:]
                out = vec_add(out, vec_scale(self.Hg.straighten(word), c))
        self._act_gen[key] = out
        return out

    def act(self, u, v):
        """u <|< v for u in U(g), v in U(a); unit of U(a) acts as identity."""
        out = {}
        for amono, ca in v.items():
            cur = vec_scale(u, ca)
            for j in amono:
                nxt = {}
                for gmono, cg in cur.items():
                    nxt = vec_add(nxt, vec_scale(self._act_by_gen(gmono, j),
                                                 cg))
                cur = nxt
            out = vec_add(out, cur)
        return out

    def check_hopf_module_laws(self, max_total=None):
        """(h1 h2) <|< k and Delta/antipode compatibility on basis samples."""
        cap = self.cap if max_total is None else max_total
        gens_a = range(self.module.a.dim)
        for m1 in self.Hg.basis:
            if not 0 < len(m1) <= cap - 1:
                continue
            for m2 in self.Hg.basis:
                if not 0 < len(m2) <= cap - len(m1):
                    continue
                for j in gens_a:
                    k = {(j,): ONE}
                    lhs = self.act(self.Hg.mul({m1: ONE}, {m2: ONE}), k)
                    rhs = {}
                    # Delta(a_j) = a_j x 1 + 1 x a_j
                    rhs = vec_add(
                        self.Hg.mul(self.act({m1: ONE}, k), {m2: ONE}),
                        self.Hg.mul({m1: ONE}, self.act({m2: ONE}, k)))
                    if not vec_eq(lhs, rhs):
                        raise HopfError("extended action is not Hopf-module "
                                        "compatible on %s,%s,a%d"
                                        % (m1, m2, j))
        for m in self.Hg.basis:
            if not 0 < len(m) <= cap:
                continue
            for j in gens_a:
                k = {(j,): ONE}
                lhs = self.Hg.antipode(self.act({m: ONE}, k))
                rhs = self.act(self.Hg.antipode({m: ONE}), k)
                if not vec_eq(lhs, rhs):
                    raise HopfError("antipode does not commute with the "
                                    "action on %s,a%d" % (m, j))
        return True


def envelope(module: LieModule, cap: int) -> Envelope:
    env = Envelope(module, cap)
    env.check_hopf_module_laws()
    return env


# -- concrete modules ---------------------------------------------------------

def _hom_offsets(dim_b, max_arity, start):
    """Index layout for the graded space  sum_n Hom(B^n, B), n = start..A."""
    offsets = {}
    total = 0
    for n in range(start, max_arity + 1):
        offsets[n] = total
        total += dim_b ** (n + 1)
    return offsets, total


def end_operad_module(dim_b: int, max_arity: int):
    """The endomorphism-operad module with unit translations.

    g is the span of all multilinear maps B^n -> B for n = 1..A with the
    commutator of the concatenation product p.q (p applied to the first
    arguments, q to the rest, outputs multiplied in B); a is the span for
    n = 2..A with the commutator of Gerstenhaber insertion; the action of
    a on g is insertion.  Arities above A are truncated to zero, which
    keeps every law exact.  Returns (module, s, t) with s = -lambda and
    t = rho as g -> a matrices (rows over g, columns over a).
    """
    total_weight = sum(dim_b ** (n + 1) for n in range(1, max_arity + 1))
    if total_weight > 64:
        raise TooLarge("end_operad_module capped at total dimension 64")
    from .algebra import alg_mul, diagonal_algebra, scalar_algebra
    alg = scalar_algebra() if dim_b == 1 else diagonal_algebra(dim_b)
    d = dim_b

    g_off, g_dim = _hom_offsets(d, max_arity, 1)
    a_off, a_dim = _hom_offsets(d, max_arity, 2)

    def pack(offsets, n, j, idx):
        flat = 0
        for i in idx:
            flat = flat * d + i
        return offsets[n] + j * d ** n + flat

    def unpack(offsets, pos):
        for n, off in offsets.items():
            size = d ** (n + 1)
            if off <= pos < off + size:
                rem = pos - off
                j, flat = divmod(rem, d ** n)
                idx = tuple(flat // d ** (n - 1 - t) % d for t in range(n))
                return n, j, idx
        raise IndexError(pos)

    def dot(b1, b2):
        """(p . q)(x_1..x_{n1+n2}) = p(first args) * q(rest) in B."""
        (n1, j1, idx1), (n2, j2, idx2) = b1, b2
        n = n1 + n2
        if n > max_arity:
            return {}
        prod = alg_mul(alg.basis(j1), alg.basis(j2))
        return {pack(g_off, n, j, idx1 + idx2): c
                for j, c in enumerate(prod.coeffs) if c}

    def insert(b1, b2, offsets):
        """Gerstenhaber insertion p <| q summed over the slots of p."""
        (n1, j1, idx1), (n2, j2, idx2) = b1, b2
        n = n1 + n2 - 1
        if n > max_arity:
            return {}
        out = {}
        for slot in range(n1):
            if idx1[slot] != j2:
                continue
            key = pack(offsets, n, j1, idx1[:slot] + idx2 + idx1[slot + 1:])
            out[key] = out.get(key, ZERO) + ONE
        return out

    g_basis = [unpack(g_off, p) for p in range(g_dim)]
    a_basis = [unpack(a_off, p) for p in range(a_dim)]

    g_tab = [[[ZERO] * g_dim for _ in range(g_dim)] for _ in range(g_dim)]
    for p, bp in enumerate(g_basis):
        for q, bq in enumerate(g_basis):
            for k, c in vec_sub(dot(bp, bq), dot(bq, bp)).items():
                g_tab[p][q][k] = c
    a_tab = [[[ZERO] * a_dim for _ in range(a_dim)] for _ in range(a_dim)]
    for p, bp in enumerate(a_basis):
        for q, bq in enumerate(a_basis):
            for k, c in vec_sub(insert(bp, bq, a_off),
                                insert(bq, bp, a_off)).items():
                a_tab[p][q][k] = c
    act_tab = [[[ZERO] * g_dim for _ in range(a_dim)] for _ in range(g_dim)]
    for p, bp in enumerate(g_basis):
        for q, bq in enumerate(a_basis):
            for k, c in insert(bp, bq, g_off).items():
                act_tab[p][q][k] = c
    module = lie_module_from_constants(g_dim, g_tab, a_dim, a_tab, act_tab)

    # translations by the identity map I = sum_j E_{j,(j)}
    s_mat = [[ZERO] * a_dim for _ in range(g_dim)]  # -lambda: p -> -(I.p)
    t_mat = [[ZERO] * a_dim for _ in range(g_dim)]  # rho:     p -> p.I
    for p, bp in enumerate(g_basis):
        for j in range(d):
            ident = (1, j, (j,))
            for pos, c in dot(ident, bp).items():
                n, jj, idx = unpack(g_off, pos)
                s_mat[p][pack(a_off, n, jj, idx)] -= c
            for pos, c in dot(bp, ident).items():
                n, jj, idx = unpack(g_off, pos)
                t_mat[p][pack(a_off, n, jj, idx)] += c
    return module, tuple(map(tuple, s_mat)), tuple(map(tuple, t_mat))


def lie_module_to_json(module: LieModule):
    from .algebra import format_rational
    fmt = format_rational
    return {
        "g_dim": module.g.dim,
        "a_dim": module.a.dim,
        "g_bracket": [[[fmt(c) for c in cell] for cell in row]
                      for row in module.g.bracket],
        "a_bracket": [[[fmt(c) for c in cell] for cell in row]
                      for row in module.a.bracket],
        "action": [[[fmt(c) for c in cell] for cell in row]
                   for row in module.action],
    }


def lie_module_from_json(doc) -> LieModule:
    return lie_module_from_constants(doc["g_dim"], doc["g_bracket"],
                                     doc["a_dim"], doc["a_bracket"],
                                     doc["action"])


def gl_matrix_lie(n: int) -> LieAlgebra:
    """gl_n with basis E_{ab} ordered row-major; [E_ab, E_cd]."""
    dim = n * n

    def idx(a, b):
        return a * n + b

    bracket = [[[ZERO] * dim for _ in range(dim)] for _ in range(dim)]
    for a, b, c, d in product(range(n), repeat=4):
        i, j = idx(a, b), idx(c, d)
        vec = [ZERO] * dim
        if b == c:
            vec[idx(a, d)] += ONE
        if d == a:
            vec[idx(c, b)] -= ONE
        bracket[i][j] = vec
    return lie_algebra_from_constants(dim, bracket)


def gl2_triangular_module():
    """(gl2, ad, gl2) with the Rota-Baxter projector pair.

    gl2 splits into upper-triangular and strictly-lower subalgebras;
    r = -(projection onto strictly-lower) is a weight-one Rota-Baxter
    operator and r_hat = -id - r its partner; both are returned as
    matrices g -> a (a = g here, adjoint action).
    """
    lie = gl_matrix_lie(2)
    dim = lie.dim
    action = [[list(lie.bracket[i][j]) for j in range(dim)]
              for i in range(dim)]
    bracket = [[list(lie.bracket[i][j]) for j in range(dim)]
               for i in range(dim)]
    module = lie_module_from_constants(dim, bracket, dim, bracket, action)
    lower = {2}  # E_21 has row-major index 2
    r = [[ZERO] * dim for _ in range(dim)]
    r_hat = [[ZERO] * dim for _ in range(dim)]
    for i in range(dim):
        if i in lower:
            r[i][i] = -ONE
        else:
            r_hat[i][i] = -ONE
    return module, tuple(map(tuple, r)), tuple(map(tuple, r_hat))
