import random
from fractions import Fraction

import pytest

from octrans.algebra import ONE
from octrans.envelope import (end_operad_module, envelope,
                              gl2_triangular_module,
                              lie_module_from_constants, vec_add, vec_eq,
                              vec_scale, vec_sub)
from octrans.hopf import (EnvMap, NotEpsCocycle, NotOLieOperator,
                          antipode_of_twisted, cocycle_from_matrix,
                          compose_maps, conv_inverse, convolve,
                          double_inverse_exchange_holds, e_closed_inverse,
                          e_map, exp_sharp, go_extend, identity_map,
                          precompose_antipode, sharp,
                          sharp_inverse, sol_map, star_t, unit_map,
                          verify_classical_sts, verify_composition_grading,
                          verify_e_transform, verify_exp_identity,
                          verify_group_morphism, verify_morphism_group,
                          verify_inverses, verify_matching_hopf,
                          verify_postlie_axioms, verify_sts, verify_ybe)

F = Fraction


@pytest.fixture(scope="module")
def operad13():
    module, s_mat, t_mat = end_operad_module(1, 3)
    return envelope(module, 3), s_mat, t_mat


def _rnd_matrix(rng, module):
    return tuple(tuple(F(rng.randint(-2, 2), rng.randint(1, 2))
                       for _ in range(module.a.dim))
                 for _ in range(module.g.dim))


class TestGoExtend:
    def test_primitive_initialization(self, operad13):
        env, s_mat, t_mat = operad13
        rho = go_extend(t_mat, env)
        assert rho.value((0,)) == {(0,): ONE}   # rho(p1) = p2

    def test_trivial_action(self):
        z = [[[0, 0]] * 2 for _ in range(2)]
        mod = lie_module_from_constants(2, z, 2, z, z)
        env = envelope(mod, 3)
        ident = ((ONE, F(0)), (F(0), ONE))
        t = go_extend(ident, env)
        assert t.value((0, 1)) == env.Ha.mul(t.value((0,)), t.value((1,)))

    def test_not_o_lie_rejected(self):
        # +id fails the operator identity on the adjoint module (only -id
        # satisfies it when the bracket is nonzero)
        module, _, _ = gl2_triangular_module()
        env = envelope(module, 2)
        plus_id = tuple(tuple(ONE if i == j else F(0) for j in range(4))
                        for i in range(4))
        with pytest.raises(NotOLieOperator):
            go_extend(plus_id, env)

    def test_extension_block_formula_n2(self, operad13):
        # [rho](p1 p1) = rho(p1)^2 - rho(p1 . p1)
        env, _, t_mat = operad13
        rho = go_extend(t_mat, env, check=False)
        direct = rho.value((0, 0))
        expected = vec_sub(env.Ha.mul(rho.value((0,)), rho.value((0,))),
                           {(1,): ONE})
        assert vec_eq(direct, expected)

    @pytest.mark.xfail(
        reason="the two-letter block expansion carries a minus sign, and at "
               "three letters the corrections involve iterated insertions "
               "rather than plain concatenation products", strict=True)
    def test_unsigned_block_formula(self, operad13):
        env, _, t_mat = operad13
        rho = go_extend(t_mat, env, check=False)
        direct = rho.value((0, 0))
        claimed = vec_add(env.Ha.mul(rho.value((0,)), rho.value((0,))),
                          {(1,): ONE})
        assert vec_eq(direct, claimed)

    @pytest.mark.xfail(
        reason="insertion multiplicities at letters of arity two and above "
               "differ from the concatenation product", strict=True)
    def test_signed_block_formula_beyond_two_letters(self):
        module, _, t_mat = end_operad_module(1, 5)
        env = envelope(module, 3)
        rho = go_extend(t_mat, env, check=False)
        direct = rho.value((0, 0, 0))
        r1 = rho.value((0,))
        total = env.Ha.mul(env.Ha.mul(r1, r1), r1)              # singletons
        total = vec_sub(total, vec_scale(env.Ha.mul({(1,): ONE}, r1),
                                         F(3)))                 # pair+single
        total = vec_add(total, {(2,): ONE})                     # one block
        assert vec_eq(direct, total)


class TestStarT:
    def test_unit(self, operad13):
        env, _, t_mat = operad13
        rho = go_extend(t_mat, env, check=False)
        e = {(0, 1): ONE}
        assert star_t(rho, e, env.Hg.unit()) == e

    def test_counit_operator_gives_product(self, operad13):
        env, _, t_mat = operad13
        eps = unit_map(env)
        e, f = {(0,): ONE}, {(1,): ONE}
        assert star_t(eps, e, f) == env.Hg.mul(e, f)

    def test_primitive_commutator(self, operad13):
        # x *_T y - y *_T x integrates the deformed bracket on primitives
        env, _, t_mat = operad13
        rho = go_extend(t_mat, env, check=False)
        mod = env.module
        for x in range(mod.g.dim):
            for y in range(mod.g.dim):
                ex, ey = {(x,): ONE}, {(y,): ONE}
                comm = vec_sub(star_t(rho, ex, ey), star_t(rho, ey, ex))

                def t_of(vec):
                    out = {}
                    for i, c in vec.items():
                        for j, cc in enumerate(t_mat[i]):
                            if cc:
                                out[(j,)] = out.get((j,), F(0)) + c * cc
                    return out

                bracket = vec_add(
                    vec_sub(env.Hg.element_of_lie(
                        mod.act_elems({x: ONE},
                                      {j: c for (j,), c in
                                       t_of({y: ONE}).items()})),
                            env.Hg.element_of_lie(
                        mod.act_elems({y: ONE},
                                      {j: c for (j,), c in
                                       t_of({x: ONE}).items()}))),
                    env.Hg.element_of_lie(mod.g.brk(x, y)))
                assert vec_eq(comm, bracket)


class TestSharp:
    def test_unit(self, operad13):
        env, _, t_mat = operad13
        rho = go_extend(t_mat, env, check=False)
        eps = unit_map(env)
        assert sharp(rho, eps) == rho
        assert sharp(eps, rho) == rho

    def test_associativity(self, operad13):
        env, _, _ = operad13
        rng = random.Random(3)
        maps = [exp_sharp(cocycle_from_matrix(_rnd_matrix(rng, env.module),
                                              env)) for _ in range(3)]
        assert sharp(sharp(maps[0], maps[1]), maps[2]) == \
            sharp(maps[0], sharp(maps[1], maps[2]))

    def test_o_hopf_inverse(self, operad13):
        env, _, t_mat = operad13
        rho = go_extend(t_mat, env, check=False)
        assert sharp(rho, precompose_antipode(rho)) == unit_map(env)
        assert sharp_inverse(rho) == precompose_antipode(rho)

    def test_exchange_probe_documents_failure(self, operad13):
        env, _, t_mat = operad13
        assert not double_inverse_exchange_holds(env, t_mat)


class TestEulerian:
    def test_sol1_on_primitives_and_squares(self):
        z = [[[0]] for _ in range(1)]
        mod = lie_module_from_constants(1, [[[0]]], 1, [[[0]]], [[[0]]])
        env = envelope(mod, 3)
        sol1 = sol_map(env, 1)
        assert sol1.value((0,)) == {(0,): ONE}
        assert sol1.value((0, 0)) == {}

    def test_exp_of_zero(self, operad13):
        env, _, _ = operad13
        zero = EnvMap(env, "a", {})
        assert exp_sharp(zero) == unit_map(env)

    def test_exp_requires_cocycle(self, operad13):
        env, _, t_mat = operad13
        rho = go_extend(t_mat, env, check=False)
        with pytest.raises(NotEpsCocycle):
            exp_sharp(rho)  # values are not primitive


class TestEMap:
    def test_examples(self, operad13):
        env, _, t_mat = operad13
        rho = go_extend(t_mat, env, check=False)
        et = e_map(rho)
        assert et.value((0,)) == {(0,): ONE}
        x, y = (0,), (1,)
        expected = vec_add({(0, 1): ONE},
                           vec_add(env.act({x: ONE}, rho.value(y)),
                                   env.act({y: ONE}, rho.value(x))))
        assert vec_eq(et.value((0, 1)), expected)

    def test_counit_operator_gives_identity(self, operad13):
        env, _, _ = operad13
        assert e_map(unit_map(env)) == identity_map(env)

    def test_closed_inverse(self, operad13):
        env, _, t_mat = operad13
        rho = go_extend(t_mat, env, check=False)
        ident = identity_map(env)
        assert compose_maps(e_map(rho), e_closed_inverse(rho)) == ident
        assert compose_maps(e_closed_inverse(rho), e_map(rho)) == ident

    def test_twisted_antipode(self, operad13):
        env, _, t_mat = operad13
        rho = go_extend(t_mat, env, check=False)
        antipode_of_twisted(rho)  # both antipode laws asserted inside


class TestVerifyRegistry:
    def test_sts_and_matching(self, operad13):
        env, s_mat, t_mat = operad13
        assert all(r.passed for r in verify_sts(env, s_mat, t_mat))
        assert all(r.passed for r in verify_matching_hopf(env, s_mat, t_mat))

    def test_inverse_e_exp_grading(self, operad13):
        env, s_mat, t_mat = operad13
        assert all(r.passed for r in verify_inverses(env, t_mat))
        assert all(r.passed for r in verify_e_transform(env, t_mat))
        assert all(r.passed for r in verify_exp_identity(env, t_mat))
        rng = random.Random(5)
        coc = cocycle_from_matrix(_rnd_matrix(rng, env.module), env)
        assert all(r.passed
                   for r in verify_composition_grading(env, coc, 3))

    def test_postlie_group_morphism_go_group(self, operad13):
        env, _, _ = operad13
        rng = random.Random(7)

        def rnd_cocycle():
            return EnvMap(env, "a", {
                m: {(j,): F(rng.randint(-1, 1), rng.randint(1, 2))
                    for j in range(env.module.a.dim)}
                for m in env.Hg.basis if m})

        triples = [tuple(rnd_cocycle() for _ in range(3))]
        assert all(r.passed for r in verify_postlie_axioms(env, triples))

        def rnd_exp():
            return exp_sharp(cocycle_from_matrix(_rnd_matrix(rng, env.module),
                                                 env))

        assert all(r.passed for r in verify_group_morphism(
            env, [(rnd_exp(), rnd_exp())]))
        assert all(r.passed for r in verify_morphism_group(
            env, [(rnd_exp(), rnd_exp(), rnd_exp())]))

    def test_classical_sts_small(self):
        module, r_mat, rhat_mat = gl2_triangular_module()
        env = envelope(module, 3)
        assert all(r.passed
                   for r in verify_classical_sts(env, r_mat, rhat_mat,
                                                 samples=1))

    def test_ybe_small(self, operad13):
        env, _, _ = operad13
        rng = random.Random(11)
        triples = [tuple(exp_sharp(cocycle_from_matrix(
            _rnd_matrix(rng, env.module), env)) for _ in range(3))]
        assert all(r.passed for r in verify_ybe(env, triples))

    def test_report_shape(self, operad13):
        env, s_mat, t_mat = operad13
        docs = [r.as_dict() for r in verify_sts(env, s_mat, t_mat)]
        for doc in docs:
            assert doc["status"] in ("pass", "fail")
            assert doc["property"].startswith("sts")


def test_convolution_group_of_coalgebra_morphisms(operad13):
    env, _, t_mat = operad13
    rho = go_extend(t_mat, env, check=False)
    inv = conv_inverse(rho)
    assert convolve(rho, inv) == unit_map(env)
    sk_rho = EnvMap(env, "a", {m: env.Ha.antipode(rho.value(m))
                               for m in env.Hg.basis})
    assert inv == sk_rho
