"""Noncrossing-partition combinatorics and brute-force moment oracles.

This module is the ground truth the transform layer is checked against.
It enumerates noncrossing partitions with their nesting forests, computes
Kreweras complements, converts between operator-valued moments and
cumulants by explicit partition sums, and evaluates mixed moments of two
variables straight from the defining factorization properties of free,
conditionally free, monotone and conditionally monotone independence.

Moment conventions: the moment series of a variable x under a state is the
series starting with 1_B whose arity-n component is

    (b_1, ..., b_n) -> state(x b_1 x b_2 ... x b_n),

and a cumulant family stores, for each arity m, the map

    (b_1, ..., b_{m-1}) -> kappa_m(x b_1, x b_2, ..., b_{m-1} x).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

from .algebra import AlgElement, BaseAlgebra, ZERO, ONE, alg_mul
from .series import MultiSeries, one_series, right_unit_pad, strip_right_unit

WORD_CAP = 12


class NCError(ValueError):
    pass


class SizeTooLarge(NCError):
    pass


class ArityMissing(NCError):
    pass


class MeanNotUnit(NCError):
    pass


class WordTooLong(NCError):
    pass


@dataclass(frozen=True)
class NCPartition:
    """Noncrossing partition of {1..n} with its nesting forest.

    ``blocks`` are sorted by minimum, each block ascending; ``parent[b]``
    is the index of the innermost block enclosing block b (-1 if outer).
    """

    n: int
    blocks: tuple
    parent: tuple

    def is_irreducible(self) -> bool:
        if self.n == 0:
            return False
        first = next(i for i, b in enumerate(self.blocks) if 1 in b)
        return self.n in self.blocks[first]

    def outer_blocks(self):
        return frozenset(b for b in range(len(self.blocks))
                         if self.parent[b] < 0)

    def __str__(self):
        return "{" + ", ".join("{" + ",".join(map(str, b)) + "}"
                               for b in self.blocks) + "}"


def _nesting_parents(blocks):
    order = sorted(range(len(blocks)), key=lambda b: blocks[b][0])
    parent = [-1] * len(blocks)
    stack = []
    for b in order:
        lo = blocks[b][0]
        while stack and blocks[stack[-1]][-1] < lo:
            stack.pop()
        if stack:
            parent[b] = stack[-1]
        stack.append(b)
    return tuple(parent)


def make_partition(n, blocks) -> NCPartition:
    """Validate and normalize a partition given as an iterable of blocks."""
    blocks = tuple(sorted((tuple(sorted(b)) for b in blocks),
                          key=lambda b: b[0]))
    seen = sorted(x for b in blocks for x in b)
    if seen != list(range(1, n + 1)):
        raise NCError("blocks do not partition {1..%d}" % n)
    for b1 in blocks:
        for b2 in blocks:
            if b1 >= b2:
                continue
            for a in b1:
                for c in b1:
                    for b in b2:
                        for d in b2:
                            if a < b < c < d:
                                raise NCError("crossing quadruple %s"
                                              % ((a, b, c, d),))
    return NCPartition(n, blocks, _nesting_parents(blocks))


@lru_cache(maxsize=None)
def _nc_blocks(points):
    """All noncrossing partitions of an increasing tuple, as block tuples."""
    if not points:
        return ((),)
    first, rest = points[0], points[1:]
    out = []
    m = len(rest)
    for mask in range(1 << m):
        idxs = [i for i in range(m) if mask >> i & 1]
        block = (first,) + tuple(rest[i] for i in idxs)
        gaps = []
        prev = -1
        for i in idxs:
            gaps.append(rest[prev + 1:i])
            prev = i
        gaps.append(rest[prev + 1:])
        for combo in product(*[_nc_blocks(g) for g in gaps]):
            blocks = (block,)
            for part in combo:
                blocks += part
            out.append(blocks)
    return tuple(out)


def enumerate_nc(n: int):
    """All noncrossing partitions of [n], in a fixed deterministic order."""
    if not 1 <= n <= WORD_CAP:
        raise SizeTooLarge("noncrossing enumeration capped at n <= %d" % WORD_CAP)
    result = []
    for blocks in _nc_blocks(tuple(range(1, n + 1))):
        blocks = tuple(sorted(blocks, key=lambda b: b[0]))
        result.append(NCPartition(n, blocks, _nesting_parents(blocks)))
    return result


def kreweras(pi: NCPartition) -> NCPartition:
    """Kreweras complement on the interleaving {1, 1^, ..., n, n^}.

    i^ and j^ (i < j) may be joined iff no block of pi has points both
    inside {i+1..j} and outside it; the complement is the transitive
    closure of that relation.  |pi| + |Kr(pi)| = n + 1 is asserted.
    """
    n = pi.n
    owner = {}
    for b, block in enumerate(pi.blocks):
        for x in block:
            owner[x] = b
    root = list(range(n + 1))

    def find(x):
        while root[x] != x:
            root[x] = root[root[x]]
            x = root[x]
        return x

    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            inside = set(range(i + 1, j + 1))
            ok = True
            for b in {owner[x] for x in inside}:
                if any(y not in inside for y in pi.blocks[b]):
                    ok = False
                    break
            if ok:
                root[find(i)] = find(j)
    groups = {}
    for i in range(1, n + 1):
        groups.setdefault(find(i), []).append(i)
    blocks = tuple(sorted((tuple(b) for b in groups.values()),
                          key=lambda b: b[0]))
    comp = NCPartition(n, blocks, _nesting_parents(blocks))
    assert len(pi.blocks) + len(comp.blocks) == n + 1
    return comp


def rotate_partition(pi: NCPartition) -> NCPartition:
    """Cyclic shift i -> i-1 (mod n), the defect of Kr o Kr."""
    n = pi.n
    blocks = [tuple(sorted((x - 2) % n + 1 for x in b)) for b in pi.blocks]
    return make_partition(n, blocks)


# -- cumulant families ----------------------------------------------------

@dataclass(frozen=True)
class CumulantFamily:
    """Multilinear cumulant data kappa_1..kappa_M (kappa_1 = 1_B enforced).

    ``kappa[m]`` (1-based; entry 0 unused) is the flat tensor of the map
    (b_1, ..., b_{m-1}) -> kappa_m(x b_1, x b_2, ..., b_{m-1} x), laid out
    like a MultiSeries component with m-1 inputs.
    """

    algebra: BaseAlgebra
    max_arity: int
    kappa: tuple

    def __post_init__(self):
        if self.kappa[1] != self.algebra.unit:
            raise MeanNotUnit("kappa_1 must equal 1_B")

    def block_value(self, size: int, gaps) -> AlgElement:
        """kappa_size evaluated on the size-1 interleaving coefficients."""
        if size > self.max_arity:
            raise ArityMissing("family lacks arity %d" % size)
        tensor = self.kappa[size]
        d = self.algebra.dim
        out = [ZERO] * d
        step = d ** (size - 1)
        supports = [[(i, c) for i, c in enumerate(g.coeffs) if c]
                    for g in gaps]
        for combo in product(*supports):
            w = ONE
            flat = 0
            for i, c in combo:
                w *= c
                flat = flat * d + i
            for j in range(d):
                c = tensor[j * step + flat]
                if c:
                    out[j] += w * c
        return AlgElement(self.algebra, tuple(out))


def family_from_k_series(k: MultiSeries) -> CumulantFamily:
    """Read kappa_{n+1} off the arity-n component of the cumulant series K."""
    if not k.is_unital():
        raise MeanNotUnit("cumulant series must start with 1_B")
    kappa = [None, k.algebra.unit]
    for n in range(1, k.order + 1):
        kappa.append(k.comps[n])
    return CumulantFamily(k.algebra, k.order + 1, tuple(kappa))


def k_series_from_family(fam: CumulantFamily, order: int) -> MultiSeries:
    if order + 1 > fam.max_arity:
        raise ArityMissing("family only reaches arity %d" % fam.max_arity)
    comps = [fam.algebra.unit] + [fam.kappa[n + 1] for n in range(1, order + 1)]
    return MultiSeries(fam.algebra, order, tuple(comps))


def kappa_eval(pi: NCPartition, fam: CumulantFamily, args,
               outer_fam: CumulantFamily | None = None,
               block_fams=None) -> AlgElement:
    """Nested evaluation of the partitioned cumulant on a gap word.

    ``args`` are the n-1 coefficients between the n legs.  Interval blocks
    are contracted innermost-first: a block whose legs are consecutive in
    the current word evaluates through its family on the current gap
    coefficients, and the value multiplies into the word at the block's
    site.  ``outer_fam`` switches depth-0 blocks to a second family
    (conditional cumulants on outer blocks); ``block_fams`` overrides the
    family per block index (colored partition sums).
    """
    n = pi.n
    if len(args) != n - 1:
        raise NCError("need n-1 interleaving coefficients")
    alg = fam.algebra
    unit = alg.one()
    coeffs = [unit] + list(args) + [unit]
    positions = list(range(1, n + 1))
    remaining = dict(enumerate(pi.blocks))
    depth0 = pi.outer_blocks()

    while positions:
        chosen = None
        for b, legs in remaining.items():
            ids = sorted(positions.index(x) for x in legs)
            if ids[-1] - ids[0] == len(ids) - 1:
                chosen = (b, ids)
                break
        assert chosen is not None
        b, ids = chosen
        lo, hi = ids[0], ids[-1]
        gaps = coeffs[lo + 1:hi + 1]
        if block_fams is not None:
            use = block_fams[b]
        elif outer_fam is not None and b in depth0:
            use = outer_fam
        else:
            use = fam
        value = use.block_value(len(ids), gaps)
        merged = alg_mul(alg_mul(coeffs[lo], value), coeffs[hi + 1])
        coeffs[lo:hi + 2] = [merged]
        del positions[lo:hi + 1]
        del remaining[b]
    return coeffs[0]


def _map_tensor(alg, n_inputs, evaluator):
    """Flat tensor of a multilinear map with n_inputs B-arguments."""
    d = alg.dim
    step = d ** n_inputs
    out = [ZERO] * (d * step)
    for flat, idx in enumerate(product(range(d), repeat=n_inputs)):
        val = evaluator([alg.basis(i) for i in idx])
        for j in range(d):
            if val.coeffs[j]:
                out[j * step + flat] = val.coeffs[j]
    return tuple(out)


def moments_from_cumulants_nc(fam: CumulantFamily, order: int,
                              outer_fam: CumulantFamily | None = None) -> MultiSeries:
    """Moment series from cumulants by the noncrossing partition sum.

    With ``outer_fam`` set, outer blocks evaluate through it while inner
    blocks use ``fam`` (phi-moments of a conditional pair); otherwise all
    blocks use ``fam``.
    """
    alg = fam.algebra
    if order == 0:
        return one_series(alg, 0)
    maps = []
    for n in range(1, order + 1):
        pis = enumerate_nc(n)

        def ev(args, pis=pis):
            total = alg.zero()
            for pi in pis:
                total = total + kappa_eval(pi, fam, args, outer_fam=outer_fam)
            return total

        maps.append(_map_tensor(alg, n - 1, ev))
    half = MultiSeries(alg, order - 1, tuple(maps))
    return right_unit_pad(half)


def cumulants_from_moments_nc(moments: MultiSeries,
                              order: int | None = None) -> CumulantFamily:
    """Invert the partition sum: extract kappa_n recursively for n <= order."""
    alg = moments.algebra
    if order is None:
        order = moments.order
    if not moments.is_unital() or not moments.linear_is_identity():
        raise MeanNotUnit("moment series must start 1 + I b_1 + ...")
    half = strip_right_unit(moments.truncate(order))
    kappa = [None, alg.unit]
    for n in range(2, order + 1):
        pis = [pi for pi in enumerate_nc(n) if len(pi.blocks) > 1]
        partial = CumulantFamily(alg, n - 1, tuple(kappa))

        def ev(args, pis=pis, partial=partial, n=n):
            total = alg.zero()
            for pi in pis:
                total = total + kappa_eval(pi, partial, args)
            return half.eval_elements(n - 1, args) - total

        kappa.append(_map_tensor(alg, n - 1, ev))
    fam = CumulantFamily(alg, order, tuple(kappa))
    if moments_from_cumulants_nc(fam, order) != moments.truncate(order):
        raise NCError("moment/cumulant round trip failed")
    return fam


def conditional_cumulants_nc(phi_moments: MultiSeries,
                             psi_moments: MultiSeries,
                             order: int | None = None) -> CumulantFamily:
    """Extract the conditional family: outer blocks kappa^c, inner kappa^psi."""
    alg = phi_moments.algebra
    if order is None:
        order = min(phi_moments.order, psi_moments.order)
    for s in (phi_moments, psi_moments):
        if not s.is_unital() or not s.linear_is_identity():
            raise MeanNotUnit("both means must equal 1_B")
    psi_fam = cumulants_from_moments_nc(psi_moments, order)
    half = strip_right_unit(phi_moments.truncate(order))
    kappa = [None, alg.unit]
    for n in range(2, order + 1):
        pis = [pi for pi in enumerate_nc(n) if len(pi.blocks) > 1]
        partial = CumulantFamily(alg, n - 1, tuple(kappa))

        def ev(args, pis=pis, partial=partial, n=n):
            total = alg.zero()
            for pi in pis:
                total = total + kappa_eval(pi, psi_fam, args,
                                           outer_fam=partial)
            return half.eval_elements(n - 1, args) - total

        kappa.append(_map_tensor(alg, n - 1, ev))
    fam = CumulantFamily(alg, order, tuple(kappa))
    if moments_from_cumulants_nc(psi_fam, order, outer_fam=fam) != \
            phi_moments.truncate(order):
        raise NCError("conditional moment/cumulant round trip failed")
    return fam


# -- mixed-moment oracles -------------------------------------------------

@dataclass(frozen=True)
class ColoredWord:
    """Word  c_0 x_{v_1} c_1 x_{v_2} c_2 ... x_{v_k} c_k  in two variables.

    ``letters`` is the sequence of (variable id, following coefficient);
    ``leading`` is c_0.  Variable ids are 0 (first operand) and 1 (second).
    """

    leading: AlgElement
    letters: tuple


class VariableData:
    """Single-variable moment series under one or two states."""

    def __init__(self, psi: MultiSeries, phi: MultiSeries | None = None):
        for s in (psi, phi):
            if s is not None and (not s.is_unital()
                                  or not s.linear_is_identity()):
                raise MeanNotUnit("single-variable mean must equal 1_B")
        self.psi = psi
        self.phi = phi if phi is not None else psi

    def run_value(self, state: str, leading, coeffs) -> AlgElement:
        series = self.psi if state == "psi" else self.phi
        if len(coeffs) > series.order:
            raise ArityMissing("single-variable moments only reach arity %d"
                               % series.order)
        return alg_mul(leading, series.eval_elements(len(coeffs), list(coeffs)))


def _centered_moments(base: MultiSeries) -> MultiSeries:
    """Moment series of x-1 from the series of x, by inclusion-exclusion.

    Component n maps (b_1..b_n) to state((x-1) b_1 (x-1) b_2 ... (x-1) b_n).
    """
    alg = base.algebra
    d = alg.dim
    comps = [alg.unit]
    for n in range(1, base.order + 1):
        step = d ** n
        out = [ZERO] * (d ** (n + 1))
        for flat, idx in enumerate(product(range(d), repeat=n)):
            args = [alg.basis(i) for i in idx]
            total = alg.zero()
            for mask in range(1 << n):
                kept = [i for i in range(n) if mask >> i & 1]
                sign = 1 if (n - len(kept)) % 2 == 0 else -1
                if not kept:
                    term = args[0]
                    for c in args[1:]:
                        term = alg_mul(term, c)
                else:
                    pre = alg.one()
                    for i in range(kept[0]):
                        pre = alg_mul(pre, args[i])
                    merged = []
                    bounds = kept + [n]
                    for t in range(len(kept)):
                        c = args[bounds[t]]
                        for i in range(bounds[t] + 1, bounds[t + 1]):
                            c = alg_mul(c, args[i])
                        merged.append(c)
                    term = alg_mul(pre,
                                   base.eval_elements(len(kept), merged))
                total = total + (term if sign > 0 else -term)
            for j in range(d):
                if total.coeffs[j]:
                    out[j * step + flat] = total.coeffs[j]
        comps.append(tuple(out))
    return MultiSeries(alg, base.order, tuple(comps))


def _merge_runs(runs):
    """Merge adjacent same-variable runs into a canonical hashable tuple.

    A run (var, lead, coeffs) stands for lead * (x coeffs[0]) ... (x coeffs[-1]);
    every run has one coefficient per letter, so coeffs is never empty.
    """
    merged = []
    for var, lead, coeffs in runs:
        if merged and merged[-1][0] == var:
            pvar, plead, pcoeffs = merged[-1]
            glue = alg_mul(pcoeffs[-1], lead)
            merged[-1] = (pvar, plead, pcoeffs[:-1] + (glue,) + coeffs)
        else:
            merged.append((var, lead, coeffs))
    return tuple(merged)


def _word_runs(word: ColoredWord):
    if not word.letters:
        return None
    unit = word.leading.algebra.one()
    runs = []
    cur_var = None
    cur_lead = word.leading
    cur = []
    for var, coeff in word.letters:
        if cur_var is not None and var != cur_var:
            runs.append((cur_var, cur_lead, tuple(cur)))
            cur_lead = unit
            cur = []
        cur_var = var
        cur.append(coeff)
    runs.append((cur_var, cur_lead, tuple(cur)))
    return _merge_runs(runs)


class MixedMomentOracle:
    """Mixed (phi, psi) moments computed from the independence definitions.

    free/cfree: psi-centering expansion (the alternating all-centered term
    vanishes under psi and factorizes under phi); the psi-values are also
    recomputed through the color-homogeneous noncrossing partition sum and
    the two routes are asserted equal.  monotone/cmonotone: the extraction
    recursion; runs of variable 1 are extracted, so variable 0 is the left
    factor of the product convention a.b with a fully dominated by b.
    """

    def __init__(self, kind: str, a: VariableData, b: VariableData,
                 cross_check: bool = True):
        if kind not in ("free", "cfree", "monotone", "cmonotone"):
            raise NCError("unknown independence kind %r" % kind)
        self.kind = kind
        self.data = (a, b)
        self.alg = a.psi.algebra
        self.cross_check = cross_check
        self._memo = {}
        self._fams = {}

    def word_value(self, word: ColoredWord, state: str) -> AlgElement:
        if len(word.letters) > WORD_CAP:
            raise WordTooLong("mixed words capped at %d letters" % WORD_CAP)
        if self.kind in ("monotone", "cmonotone"):
            return self._monotone_word(word, state)
        runs = _word_runs(word)
        if runs is None:
            return word.leading
        val = self._free(runs, state)
        if state == "psi" and self.cross_check:
            alt = self._partition_sum(word)
            assert val == alt, "centering and partition routes disagree"
        return val

    # ---- shared helpers -------------------------------------------------

    def _single(self, run, state):
        key = ("s", state, run)
        if key not in self._memo:
            var, lead, coeffs = run
            self._memo[key] = self.data[var].run_value(state, lead, coeffs)
        return self._memo[key]

    def _fold(self, word_runs):
        """Collapse scalar insertions into neighbouring runs.

        Returns (runs, standalone): ``standalone`` is the word's value when
        no runs remain (a pure coefficient), else None.
        """
        runs = []
        pending = None
        for tag, payload in word_runs:
            if tag == "scalar":
                pending = payload if pending is None else alg_mul(pending,
                                                                  payload)
            else:
                var, lead, coeffs = payload
                if pending is not None:
                    lead = alg_mul(pending, lead)
                    pending = None
                runs.append((var, lead, coeffs))
        if pending is not None:
            if not runs:
                return (), pending
            var, lead, coeffs = runs[-1]
            runs[-1] = (var, lead,
                        coeffs[:-1] + (alg_mul(coeffs[-1], pending),))
        return _merge_runs(runs), None

    def _value_of(self, runs, state, engine):
        if len(runs) == 1:
            return self._single(runs[0], state)
        return engine(runs, state)

    # ---- free / conditionally free --------------------------------------

    def _free(self, runs, state):
        key = ("f", state, runs)
        if key in self._memo:
            return self._memo[key]
        if len(runs) == 1:
            val = self._single(runs[0], state)
        else:
            n = len(runs)
            psi_vals = [self._single(r, "psi") for r in runs]
            total = self.alg.zero()
            if state == "phi":
                prod = None
                for r, pv in zip(runs, psi_vals):
                    centered = self._single(r, "phi") - pv
                    prod = centered if prod is None else alg_mul(prod, centered)
                total = total + prod
            for mask in range(1, 1 << n):
                sign = 1 if bin(mask).count("1") % 2 else -1
                word_runs = []
                for i, r in enumerate(runs):
                    if mask >> i & 1:
                        word_runs.append(("scalar", psi_vals[i]))
                    else:
                        word_runs.append(("run", r))
                sub_runs, standalone = self._fold(word_runs)
                value = standalone if standalone is not None else \
                    self._value_of(sub_runs, state, self._free)
                total = total + value.scale(sign)
            val = total
        self._memo[key] = val
        return val

    def _psi_family(self, var):
        if var not in self._fams:
            self._fams[var] = cumulants_from_moments_nc(self.data[var].psi)
        return self._fams[var]

    def _partition_sum(self, word: ColoredWord) -> AlgElement:
        """Sum over noncrossing partitions with color-homogeneous blocks."""
        letters = word.letters
        n = len(letters)
        colors = [v for v, _ in letters]
        fams = (self._psi_family(0), self._psi_family(1))
        args = [c for _, c in letters[:-1]]
        tail = letters[-1][1]
        total = self.alg.zero()
        for pi in enumerate_nc(n):
            block_fams = []
            ok = True
            for block in pi.blocks:
                cs = {colors[x - 1] for x in block}
                if len(cs) != 1:
                    ok = False
                    break
                block_fams.append(fams[cs.pop()])
            if not ok:
                continue
            total = total + kappa_eval(pi, fams[0], args,
                                       block_fams=block_fams)
        return alg_mul(alg_mul(word.leading, total), tail)

    # ---- monotone / conditionally monotone ------------------------------

    # The monotone theorems concern the centered variables a-1 and b-1
    # (monotone independence is not shift-invariant), so every letter is
    # expanded as x = 1 + (x-1) and the extraction recursion runs on words
    # in the centered letters, whose single-variable values come from the
    # centered moment series.

    def _centered(self, var, state):
        key = ("cs", var, state)
        if key not in self._memo:
            data = self.data[var]
            base = data.psi if state == "psi" else data.phi
            self._memo[key] = _centered_moments(base)
        return self._memo[key]

    def _single_c(self, run, state):
        key = ("sc", state, run)
        if key not in self._memo:
            var, lead, coeffs = run
            series = self._centered(var, state)
            if len(coeffs) > series.order:
                raise ArityMissing(
                    "single-variable moments only reach arity %d"
                    % series.order)
            self._memo[key] = alg_mul(
                lead, series.eval_elements(len(coeffs), list(coeffs)))
        return self._memo[key]

    def _monotone_word(self, word: ColoredWord, state: str) -> AlgElement:
        letters = word.letters
        total = self.alg.zero()
        for mask in range(1 << len(letters)):
            word_runs = []
            for i, (var, coeff) in enumerate(letters):
                if mask >> i & 1:
                    word_runs.append(("run", (var, self.alg.one(), (coeff,))))
                else:
                    word_runs.append(("scalar", coeff))
            sub_runs, standalone = self._fold(word_runs)
            if standalone is not None:
                total = total + alg_mul(word.leading, standalone)
            else:
                total = total + alg_mul(word.leading,
                                        self._mono_value(sub_runs, state))
        return total

    def _mono_value(self, runs, state):
        key = ("m", state, runs)
        if key in self._memo:
            return self._memo[key]
        if len(runs) == 1:
            val = self._single_c(runs[0], state)
            self._memo[key] = val
            return val
        idx = next((i for i, r in enumerate(runs) if r[0] == 1), None)
        assert idx is not None, "merged multi-run word must contain variable 1"
        run = runs[idx]
        psi_val = self._single_c(run, "psi")
        n = len(runs)
        if state == "psi":
            val = self._replace(runs, idx, psi_val, state)
        elif idx == 0:
            val = alg_mul(self._single_c(run, "phi"),
                          self._mono_value(runs[1:], "phi"))
        elif idx == n - 1:
            val = alg_mul(self._mono_value(runs[:idx], "phi"),
                          self._single_c(run, "phi"))
        else:
            phi_val = self._single_c(run, "phi")
            left = self._mono_value(runs[:idx], "phi")
            right = self._mono_value(runs[idx + 1:], "phi")
            split = alg_mul(alg_mul(left, phi_val - psi_val), right)
            val = split + self._replace(runs, idx, psi_val, state)
        self._memo[key] = val
        return val

    def _replace(self, runs, idx, value, state):
        word_runs = [("scalar", value) if i == idx else ("run", r)
                     for i, r in enumerate(runs)]
        sub_runs, standalone = self._fold(word_runs)
        if standalone is not None:
            return standalone
        return self._mono_value(sub_runs, state)


def mixed_moment(kind: str, a_psi: MultiSeries, b_psi: MultiSeries,
                 word: ColoredWord, a_phi: MultiSeries | None = None,
                 b_phi: MultiSeries | None = None):
    """Exact (phi, psi) mixed moment of a two-variable word.

    For the one-state kinds pass only psi data; phi defaults to psi and the
    two returned values coincide.
    """
    oracle = MixedMomentOracle(kind, VariableData(a_psi, a_phi),
                               VariableData(b_psi, b_phi))
    return (oracle.word_value(word, "phi"), oracle.word_value(word, "psi"))


def product_moment_series(kind: str, order: int, a_psi, b_psi,
                          a_phi=None, b_phi=None, reverse=False,
                          cross_check=True):
    """Moment series (phi, psi) of the product variable, from the oracle.

    The product is a.b (letters 0 then 1) or b.a when ``reverse`` is set,
    matching the operand order of the monotone theorems.
    """
    alg = a_psi.algebra
    d = alg.dim
    oracle = MixedMomentOracle(kind, VariableData(a_psi, a_phi),
                               VariableData(b_psi, b_phi),
                               cross_check=cross_check)
    pair = (1, 0) if reverse else (0, 1)
    # states are right-module maps, so only words ending in 1_B are needed;
    # the last slot is restored by right-unit padding.
    phi_maps, psi_maps = [], []
    for n in range(1, order + 1):
        step = d ** (n - 1)
        phi_out = [ZERO] * (d * step)
        psi_out = [ZERO] * (d * step)
        for flat, idx in enumerate(product(range(d), repeat=n - 1)):
            letters = []
            for t in range(n):
                letters.append((pair[0], alg.one()))
                letters.append((pair[1],
                                alg.basis(idx[t]) if t < n - 1 else alg.one()))
            word = ColoredWord(alg.one(), tuple(letters))
            pv = oracle.word_value(word, "phi")
            sv = oracle.word_value(word, "psi")
            for j in range(d):
                if pv.coeffs[j]:
                    phi_out[j * step + flat] = pv.coeffs[j]
                if sv.coeffs[j]:
                    psi_out[j * step + flat] = sv.coeffs[j]
        phi_maps.append(tuple(phi_out))
        psi_maps.append(tuple(psi_out))
    return (right_unit_pad(MultiSeries(alg, order - 1, tuple(phi_maps))),
            right_unit_pad(MultiSeries(alg, order - 1, tuple(psi_maps))))
