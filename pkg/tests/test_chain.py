import itertools
import random
from fractions import Fraction
from functools import reduce

import pytest

from sqwalk.algebra import BinaryMatrix, make_algebra, normal_bases
from sqwalk.chain import (
    Distribution,
    TransitionMatrix,
    WalkSpec,
    block_equivalence_check,
    build_add_only,
    build_modp,
    build_square_add,
    char_poly,
    evolve,
    frobenius_matched_map,
    intertwiner_check,
    is_aperiodic,
    is_irreducible,
    power_ordering,
    simulate,
    stationary,
    tv_distance,
)
from sqwalk.chain import _stationary_exact
from sqwalk.gf2poly import BinaryPolynomial, cyclotomic, is_squarefree

from _oracles import char_poly_leverrier, eval_poly, poly_mul

P = BinaryPolynomial.parse
F = Fraction
H = F(1, 2)
S = F(1, 6)

# the two reference 8x8 walk matrices on the field of order 8, states in
# the order 0, 1, r, r^2, r^3, r^4, r^5, r^6 (r = x, modulus x^3+x+1)
POWER_BASIS_MATRIX = [
    [H, S, S, S, 0, 0, 0, 0],
    [S, H, 0, 0, S, 0, 0, S],
    [S, 0, 0, H, 0, S, 0, S],
    [0, 0, S, S, 0, H, S, 0],
    [0, S, 0, S, 0, 0, S, H],
    [S, 0, H, 0, S, S, 0, 0],
    [0, S, S, 0, H, 0, S, 0],
    [0, 0, 0, 0, S, S, H, S],
]
NORMAL_BASIS_MATRIX = [
    [H, 0, 0, 0, S, 0, S, S],
    [0, H, S, S, 0, S, 0, 0],
    [0, S, 0, H, S, 0, S, 0],
    [0, S, 0, 0, S, H, 0, S],
    [S, 0, S, 0, 0, S, 0, H],
    [0, S, H, 0, 0, 0, S, S],
    [S, 0, 0, S, H, S, 0, 0],
    [S, 0, S, S, 0, 0, H, 0],
]


@pytest.fixture
def f8():
    return make_algebra(P("0,1,3"))


@pytest.fixture
def f16():
    return make_algebra(cyclotomic(5))


def field_basis(alg, bits_list):
    return [alg.element(b) for b in bits_list]


def k8_power(f8):
    return build_square_add(f8, field_basis(f8, [1, 2, 4]))


def k8_normal(f8):
    return build_square_add(f8, field_basis(f8, [3, 7, 5]))


class TestTransitionMatrix:
    def test_row_sum_enforced(self):
        with pytest.raises(ValueError, match="sums to"):
            TransitionMatrix(["a", "b"], [{0: H}, {0: H, 1: H}])

    def test_entry_range_enforced(self):
        with pytest.raises(ValueError):
            TransitionMatrix(["a"], [{0: F(3, 2)}])

    def test_bad_index(self):
        with pytest.raises(ValueError):
            TransitionMatrix(["a"], [{1: F(1)}])

    def test_entry_and_dense(self):
        K = TransitionMatrix(["a", "b"], [{1: F(1)}, {0: H, 1: H}])
        assert K.entry(0, 1) == 1
        assert K.entry(0, 0) == 0
        assert K.dense() == [[0, 1], [H, H]]

    def test_permuted_round_trip(self, f8):
        K = k8_power(f8)
        order, labels = power_ordering(f8)
        disp = K.permuted(order, labels)
        inverse_order = [order.index(i) for i in range(8)]
        assert disp.permuted(inverse_order, K.states) == K


class TestDistribution:
    def test_validation(self):
        with pytest.raises(ValueError):
            Distribution(["a", "b"], [H, H + H])
        with pytest.raises(ValueError):
            Distribution(["a", "b"], [F(3, 2), F(-1, 2)])

    def test_point_and_uniform(self):
        d = Distribution.point_mass(["a", "b", "c"], 1)
        assert d.values == (0, 1, 0)
        u = Distribution.uniform(["a", "b", "c"])
        assert u.values == (F(1, 3),) * 3


class TestTvDistance:
    def test_identical(self):
        u = Distribution.uniform(["a", "b"])
        assert tv_distance(u, u) == 0

    def test_point_vs_uniform(self):
        states = [str(i) for i in range(8)]
        point = Distribution.point_mass(states, 0)
        assert tv_distance(point, Distribution.uniform(states)) == F(7, 8)

    def test_one_step_from_zero(self, f8):
        # |1/2-1/8| + 3|1/6-1/8| + 4/8, halved: exactly 1/2
        K = k8_power(f8)
        v1 = evolve(Distribution.point_mass(K.states, 0), K, 1)
        assert tv_distance(v1, Distribution.uniform(K.states)) == H

    def test_mismatched_states(self):
        with pytest.raises(ValueError):
            tv_distance(Distribution.uniform(["a"]), Distribution.uniform(["b"]))


class TestBuildSquareAdd:
    def test_power_basis_reference_matrix(self, f8):
        order, labels = power_ordering(f8)
        disp = k8_power(f8).permuted(order, labels)
        assert disp.dense() == POWER_BASIS_MATRIX
        assert disp.states == ("0", "1", "r", "r^2", "r^3", "r^4", "r^5", "r^6")

    def test_normal_basis_reference_matrix(self, f8):
        order, labels = power_ordering(f8)
        disp = k8_normal(f8).permuted(order, labels)
        assert disp.dense() == NORMAL_BASIS_MATRIX

    def test_row_profile(self, f16):
        K = build_square_add(f16, field_basis(f16, [1, 2, 4, 8]))
        for row in K.rows:
            assert sorted(row.values()) == [F(1, 8)] * 4 + [H]

    def test_dependent_basis_rejected(self, f8):
        with pytest.raises(ValueError, match="dependent"):
            build_square_add(f8, field_basis(f8, [1, 2, 3]))

    def test_wrong_count_rejected(self, f8):
        with pytest.raises(ValueError):
            build_square_add(f8, field_basis(f8, [1, 2]))

    def test_factorization_squaring_then_add(self, f8):
        # each row of the squaring walk is the add-only row at the squared state
        for bits in ([1, 2, 4], [3, 7, 5]):
            K = build_square_add(f8, field_basis(f8, bits))
            T = build_add_only(f8, field_basis(f8, bits))
            for a in range(8):
                sq = (f8.element(a) * f8.element(a)).bits
                assert K.rows[a] == T.rows[sq]


class TestBuildAddOnly:
    def test_lazy_diagonal(self, f8):
        T = build_add_only(f8, field_basis(f8, [1, 2, 4]))
        for a in range(8):
            assert T.entry(a, a) == H

    def test_symmetric(self, f8):
        T = build_add_only(f8, field_basis(f8, [3, 7, 5]))
        for i in range(8):
            for j in range(8):
                assert T.entry(i, j) == T.entry(j, i)

    def test_hypercube_up_to_relabeling(self, f8):
        # coordinates over the normal basis turn the walk into the
        # standard-basis walk on bit vectors
        T_norm = build_add_only(f8, field_basis(f8, [3, 7, 5]))
        T_std = build_add_only(f8, field_basis(f8, [1, 2, 4]))
        Binv = BinaryMatrix((3, 7, 5)).inverse()
        L = [Binv.apply(s) for s in range(8)]
        assert intertwiner_check(T_norm, T_std, L)


class TestBuildModp:
    def test_p5_rows(self):
        K = build_modp(5)
        assert K.rows[0] == {1: H, 4: H}
        assert K.rows[2] == {0: H, 3: H}

    def test_p2_rejected(self):
        with pytest.raises(ValueError):
            build_modp(2)

    def test_composite_rejected(self):
        with pytest.raises(ValueError):
            build_modp(15)

    def test_cap(self):
        with pytest.raises(ValueError):
            build_modp(20011)


class TestEvolve:
    def test_zero_steps(self, f8):
        K = k8_power(f8)
        v0 = Distribution.point_mass(K.states, 3)
        assert evolve(v0, K, 0) == v0

    def test_one_step_is_step_law(self, f8):
        K = k8_power(f8)
        v1 = evolve(Distribution.point_mass(K.states, 0), K, 1)
        expected = {0: H, 1: S, 2: S, 4: S}
        assert v1.values == tuple(expected.get(i, F(0)) for i in range(8))

    def test_rows_recovered(self, f8):
        K = k8_normal(f8)
        for i in range(8):
            v = evolve(Distribution.point_mass(K.states, i), K, 1)
            assert v.values == tuple(K.entry(i, j) for j in range(8))

    def test_two_steps_match_convolution(self, f8):
        # brute force over the 4x4 grid of (eps_1, eps_2)
        K = k8_power(f8)
        fb = f8.modulus.bits
        law = {0: H, 1: S, 2: S, 4: S}
        expected = [F(0)] * 8
        for e1, p1 in law.items():
            x1 = e1  # starting at 0: first step lands on eps_1
            for e2, p2 in law.items():
                sq = (f8.element(x1) * f8.element(x1)).bits
                expected[sq ^ e2] += p1 * p2
        v2 = evolve(Distribution.point_mass(K.states, 0), K, 2)
        assert v2.values == tuple(expected)

    def test_matrix_powers_stay_stochastic(self, f8):
        # Distribution validates nonnegativity and total mass exactly,
        # so evolving every point mass checks the power rows
        K = k8_power(f8)
        for i in range(8):
            evolve(Distribution.point_mass(K.states, i), K, 5)

    def test_state_mismatch(self, f8):
        K = k8_power(f8)
        with pytest.raises(ValueError):
            evolve(Distribution.uniform([str(i) for i in range(8)]), K, 1)


class TestCharPoly:
    def test_identity(self):
        n = 8
        I = TransitionMatrix(
            [str(i) for i in range(n)], [{i: F(1)} for i in range(n)])
        expected = reduce(poly_mul, [[F(-1), F(1)]] * n)
        assert char_poly(I) == tuple(expected)

    def test_power_basis_spectrum(self, f8):
        # lambda^3 (lambda-1)(lambda-2/3)(lambda^3-4/27)
        expected = reduce(poly_mul, [
            [0, 0, 0, F(1)],
            [F(-1), F(1)],
            [F(-2, 3), F(1)],
            [F(-4, 27), 0, 0, F(1)],
        ])
        assert char_poly(k8_power(f8)) == tuple(expected)

    def test_normal_basis_spectrum(self, f8):
        # lambda (lambda-1)(lambda^3-1/27)(lambda^3-8/27)
        expected = reduce(poly_mul, [
            [0, F(1)],
            [F(-1), F(1)],
            [F(-1, 27), 0, 0, F(1)],
            [F(-8, 27), 0, 0, F(1)],
        ])
        assert char_poly(k8_normal(f8)) == tuple(expected)

    def test_similarity_invariance(self, f8):
        K = k8_power(f8)
        order, labels = power_ordering(f8)
        assert char_poly(K) == char_poly(K.permuted(order, labels))

    def test_against_leverrier_oracle(self):
        rng = random.Random(31)
        for n in (2, 3, 4, 5, 6):
            for _ in range(8):
                M = [
                    [F(rng.randrange(-6, 7), rng.randrange(1, 5))
                     for _ in range(n)]
                    for _ in range(n)
                ]
                from sqwalk._linalg import char_poly_exact
                assert char_poly_exact(M) == char_poly_leverrier(M)

    def test_one_is_eigenvalue_of_stochastic(self, f8):
        for K in (k8_power(f8), build_modp(13)):
            assert eval_poly(char_poly(K), F(1)) == 0

    def test_cap(self):
        with pytest.raises(ValueError):
            char_poly(build_modp(67))


class TestStationary:
    def test_f8_uniform_unique(self, f8):
        pi, unique = stationary(k8_power(f8))
        assert unique
        assert pi == Distribution.uniform(pi.states)

    def test_doubly_stochastic_uniform(self, f8):
        pi, unique = stationary(build_add_only(f8, field_basis(f8, [1, 2, 4])))
        assert unique
        assert pi.values == (F(1, 8),) * 8

    def test_identity_multi(self):
        I = TransitionMatrix(["a", "b", "c"], [{i: F(1)} for i in range(3)])
        basis, unique = stationary(I)
        assert not unique
        assert len(basis) == 3

    def test_modp5_by_hand(self):
        # balance equations collapse to nu_0 = 1/3, everything else 1/6
        pi, unique = stationary(build_modp(5))
        assert unique
        assert pi.values == (F(1, 3), S, S, S, S)

    def test_modular_route_matches_exact(self):
        # 211 states forces the CRT path; compare with dense elimination
        K = build_modp(211)
        pi, unique = stationary(K)
        assert unique
        exact_pi, exact_unique = _stationary_exact(K)
        assert exact_unique
        assert pi == exact_pi

    def test_stationary_really_is_stationary(self):
        K = build_modp(101)
        pi, unique = stationary(K)
        assert unique
        assert evolve(pi, K, 1) == pi

    def test_uniform_unique_small_squarefree_exhaustive(self):
        for deg in (2, 3, 4, 5):
            for bits in range(1 << deg, 1 << (deg + 1)):
                f = BinaryPolynomial(bits)
                if not is_squarefree(f):
                    continue
                alg = make_algebra(f)
                basis = [alg.element(1 << i) for i in range(deg)]
                pi, unique = stationary(build_square_add(alg, basis))
                assert unique, str(f)
                assert pi.values == (F(1, alg.q),) * alg.q, str(f)

    def test_uniform_unique_degree_twelve(self):
        # too big for dense elimination; uniform checked by exact evolve,
        # uniqueness by irreducibility + aperiodicity
        alg = make_algebra(P("0,3,12"))
        basis = [alg.element(1 << i) for i in range(12)]
        K = build_square_add(alg, basis)
        u = Distribution.uniform(K.states)
        assert evolve(u, K, 1) == u
        assert is_irreducible(K)
        assert is_aperiodic(K)


class TestErgodicity:
    def test_square_add_walks(self, f8, f16):
        for K in (k8_power(f8),
                  build_square_add(f16, field_basis(f16, [1, 2, 4, 8]))):
            assert is_irreducible(K)
            assert is_aperiodic(K)

    def test_identity_reducible_but_aperiodic(self):
        I = TransitionMatrix(["a", "b"], [{0: F(1)}, {1: F(1)}])
        assert not is_irreducible(I)
        assert is_aperiodic(I)

    def test_cycle_periodic(self):
        C = TransitionMatrix(
            ["a", "b", "c"], [{1: F(1)}, {2: F(1)}, {0: F(1)}])
        assert is_irreducible(C)
        assert not is_aperiodic(C)

    def test_two_state_flip(self):
        C = TransitionMatrix(["a", "b"], [{1: F(1)}, {0: F(1)}])
        assert not is_aperiodic(C)

    def test_transient_class_ignored(self):
        # 0 drains into the aperiodic class {1}; period of the chain is 1
        K = TransitionMatrix(["a", "b"], [{0: H, 1: H}, {1: F(1)}])
        assert is_aperiodic(K)
        assert not is_irreducible(K)


class TestSimulate:
    def test_zero_steps(self, f8):
        spec = WalkSpec.field_walk(f8, field_basis(f8, [1, 2, 4]))
        d = simulate(spec, 0, 1000, seed=5)
        assert d.values[0] == 1

    def test_deterministic(self, f8):
        spec = WalkSpec.field_walk(f8, field_basis(f8, [1, 2, 4]))
        a = simulate(spec, 10, 30000, seed=99)
        b = simulate(spec, 10, 30000, seed=99)
        assert a == b

    def test_thread_count_invariant(self, f8):
        spec = WalkSpec.field_walk(f8, field_basis(f8, [1, 2, 4]))
        a = simulate(spec, 5, 200000, seed=7, threads=1)
        b = simulate(spec, 5, 200000, seed=7, threads=4)
        assert a == b

    def test_matches_exact_evolution(self, f8):
        spec = WalkSpec.field_walk(f8, field_basis(f8, [1, 2, 4]))
        empirical = simulate(spec, 20, 10 ** 6, seed=424242)
        exact = evolve(
            Distribution.point_mass(empirical.states, 0), k8_power(f8), 20)
        assert tv_distance(empirical, exact) < F(1, 100)

    def test_error_shrinks_with_trials(self, f8):
        spec = WalkSpec.field_walk(f8, field_basis(f8, [1, 2, 4]))
        exact = evolve(
            Distribution.point_mass(spec.state_labels(), 0), k8_power(f8), 12)
        small = tv_distance(simulate(spec, 12, 10 ** 4, seed=8), exact)
        large = tv_distance(simulate(spec, 12, 10 ** 6, seed=8), exact)
        assert large < small

    def test_modp_walk(self):
        spec = WalkSpec.modp_walk(13)
        empirical = simulate(spec, 12, 200000, seed=3)
        exact = evolve(
            Distribution.point_mass(empirical.states, 0), build_modp(13), 12)
        assert tv_distance(empirical, exact) < F(1, 100)

    def test_bad_seed(self, f8):
        spec = WalkSpec.field_walk(f8, field_basis(f8, [1, 2, 4]))
        with pytest.raises(ValueError):
            simulate(spec, 1, 10, seed=-1)


class TestIntertwiner:
    def test_identity(self, f8):
        K = k8_power(f8)
        assert intertwiner_check(K, K, range(8))

    def test_f16_normal_bases_equivalent(self, f16):
        nb1, nb2 = normal_bases(f16)
        K1 = build_square_add(f16, field_basis(f16, nb1))
        K2 = build_square_add(f16, field_basis(f16, nb2))
        L = frobenius_matched_map(f16, nb1, nb2)
        assert intertwiner_check(K1, K2, L)

    def test_f8_power_vs_normal_never_equivalent(self, f8):
        # distinct spectra rule out every bijection; checked exhaustively
        K1 = k8_power(f8)
        K2 = k8_normal(f8)
        assert not any(
            intertwiner_check(K1, K2, perm)
            for perm in itertools.permutations(range(8)))

    def test_non_bijection_rejected(self, f8):
        K = k8_power(f8)
        with pytest.raises(ValueError):
            intertwiner_check(K, K, [0] * 8)

    def test_matched_map_needs_squaring_order(self, f16):
        nb1, nb2 = normal_bases(f16)
        with pytest.raises(ValueError, match="squaring order"):
            frobenius_matched_map(f16, tuple(reversed(nb1)), nb2)

    def test_matched_map_rejects_dependent_orbit(self, f16):
        # (6, 11, 7, 10) is a Frobenius orbit but not a basis
        nb1, _ = normal_bases(f16)
        with pytest.raises(ValueError, match="normal basis"):
            frobenius_matched_map(f16, (6, 11, 7, 10), nb1)


class TestBlockEquivalence:
    def test_f8_normal_basis(self, f8):
        assert block_equivalence_check(f8, field_basis(f8, [3, 7, 5]))

    def test_f16_normal_basis(self, f16):
        nb1, _ = normal_bases(f16)
        assert block_equivalence_check(f16, field_basis(f16, nb1))

    def test_non_normal_rejected(self, f8):
        with pytest.raises(ValueError, match="not normal"):
            block_equivalence_check(f8, field_basis(f8, [1, 2, 4]))

    def test_agreement_only_at_multiples(self, f8):
        # from a start the squaring map moves, the walks split at n=1
        # and rejoin at n=d; equality off multiples is not guaranteed
        basis = field_basis(f8, [3, 7, 5])
        K = build_square_add(f8, basis)
        T = build_add_only(f8, basis)
        v3 = Distribution.point_mass(K.states, 3)
        assert evolve(v3, K, 1) != evolve(v3, T, 1)
        assert evolve(v3, K, 2) != evolve(v3, T, 2)
        assert evolve(v3, K, 3) == evolve(v3, T, 3)

    def test_zero_start_agrees_at_every_step(self, f8):
        # 0 is fixed by squaring and squaring permutes the equal-weight
        # basis, so each noise term keeps its law and the rows from 0
        # coincide at all n, not just multiples of d
        basis = field_basis(f8, [3, 7, 5])
        K = build_square_add(f8, basis)
        T = build_add_only(f8, basis)
        v0 = Distribution.point_mass(K.states, 0)
        for n in range(1, 5):
            assert evolve(v0, K, n) == evolve(v0, T, n)
