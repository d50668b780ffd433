import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from kindrings import (
    AlgebraElement,
    BudgetExceededError,
    RingMatrix,
    StarHomomorphism,
    StarHomomorphismError,
    UsageError,
    conjugation_map,
    convolve,
    enumerate_projections,
    from_matrix,
    full_equivalence_groupoid,
    groupoid_from_group_action,
    is_bisection,
    is_diagonal,
    is_diagonal_preserving,
    is_normalizer_pair,
    is_projection,
    parse_ring_spec,
    star,
    to_matrix,
)
from kindrings.algebra import identity_homomorphism

from strategies import random_groupoid

ZZ = parse_ring_spec("Z")
ZI = parse_ring_spec("Z[i]")
Z2 = parse_ring_spec("Z[1/2]")
Z5 = parse_ring_spec("Z[1/5]")
R2 = full_equivalence_groupoid(2)


def ind(g, ring, *arrows):
    return AlgebraElement.indicator(g, ring, list(arrows))


def random_element(rnd, g, ring, max_height=3, density=0.6):
    pool = ring.enumerate_elements(max_height)
    return AlgebraElement(g, ring, {a: rnd.choice(pool) for a in g.arrows if rnd.random() < density})


def oracle_convolve(f, g):
    """Sum f(a) g(b) over every composable pair, grouped by the composite."""
    G = f.groupoid
    out = {}
    for a, b in itertools.product(G.arrows, repeat=2):
        c = G.compose(a, b)
        if c is not None:
            out[c] = out.get(c, f.ring.zero()) + f(a) * g(b)
    return AlgebraElement(G, f.ring, out)


class TestConvolve:
    def test_matrix_unit_product(self):
        assert convolve(ind(R2, ZZ, "(1,2)"), ind(R2, ZZ, "(2,1)")) == ind(R2, ZZ, "(1,1)")

    def test_scalars(self):
        f = ind(R2, ZZ, "(1,1)").scale(2)
        g = ind(R2, ZZ, "(1,2)").scale(3)
        assert f * g == ind(R2, ZZ, "(1,2)").scale(6)

    @settings(max_examples=60)
    @given(st.randoms(use_true_random=False), st.sampled_from([ZZ, ZI]))
    def test_against_oracle(self, rnd, ring):
        G = random_groupoid(rnd)
        f, g = random_element(rnd, G, ring), random_element(rnd, G, ring)
        assert convolve(f, g) == oracle_convolve(f, g)

    @settings(max_examples=40)
    @given(st.randoms(use_true_random=False))
    def test_identity_and_bilinearity(self, rnd):
        G = random_groupoid(rnd)
        f, g, h = (random_element(rnd, G, ZI) for _ in range(3))
        one = AlgebraElement.identity(G, ZI)
        assert one * f == f == f * one
        assert f * (g + h) == f * g + f * h
        assert (f + g) * h == f * h + g * h
        r = ZI.parse_element("2-i")
        assert (f.scale(r)) * g == (f * g).scale(r)

    def test_mismatch(self):
        with pytest.raises(UsageError):
            convolve(ind(R2, ZZ, "(1,1)"), ind(R2, ZI, "(1,1)"))
        with pytest.raises(UsageError):
            convolve(ind(R2, ZZ, "(1,1)"), ind(full_equivalence_groupoid(3), ZZ, "(1,1)"))

    def test_rejects_foreign_arrow(self):
        with pytest.raises(UsageError):
            AlgebraElement(R2, ZZ, {"(3,3)": 1})


class TestStar:
    def test_examples(self):
        assert star(ind(R2, ZZ, "(1,2)")) == ind(R2, ZZ, "(2,1)")
        i_e11 = ind(R2, ZI, "(1,1)").scale(ZI.parse_element("i"))
        assert star(i_e11) == i_e11.scale(-1)

    @settings(max_examples=60)
    @given(st.randoms(use_true_random=False), st.sampled_from([ZZ, ZI]))
    def test_involution(self, rnd, ring):
        G = random_groupoid(rnd)
        f, g = random_element(rnd, G, ring), random_element(rnd, G, ring)
        assert star(star(f)) == f
        assert star(f * g) == star(g) * star(f)
        assert star(f + g) == star(f) + star(g)


class TestDiagonal:
    def test_examples(self):
        assert is_diagonal(ind(R2, ZZ, "(1,1)", "(2,2)"))
        assert not is_diagonal(ind(R2, ZZ, "(1,2)"))
        assert is_diagonal(AlgebraElement.zero(R2, ZZ))

    @settings(max_examples=40)
    @given(st.randoms(use_true_random=False))
    def test_star_subalgebra(self, rnd):
        G = random_groupoid(rnd)
        pool = ZI.enumerate_elements(2)
        f, g = (AlgebraElement(G, ZI, {u: rnd.choice(pool) for u in G.units}) for _ in range(2))
        assert is_diagonal(f * g) and is_diagonal(star(f)) and is_diagonal(f + g)


class TestProjections:
    def test_examples(self):
        assert is_projection(ind(R2, ZZ, "(1,1)"))
        half = AlgebraElement(R2, Z2, {a: "1/2" for a in R2.arrows})
        assert is_projection(half) and not is_diagonal(half)
        assert not is_projection(ind(R2, ZZ, "(1,2)"))

    def test_integers_on_pair_groupoid(self):
        got = enumerate_projections(ZZ, R2, 2)
        expected = [
            AlgebraElement.zero(R2, ZZ),
            ind(R2, ZZ, "(1,1)"),
            ind(R2, ZZ, "(2,2)"),
            AlgebraElement.identity(R2, ZZ),
        ]
        assert sorted(got, key=lambda f: f.sort_key) == got
        assert set(map(lambda f: to_matrix(f), got)) == set(map(to_matrix, expected))
        assert all(is_diagonal(f) for f in got)

    def test_oracle_over_all_integer_matrices(self):
        # direct search over every 2x2 matrix with entries in [-2, 2]
        vals = range(-2, 3)
        oracle = set()
        for a, b, c, d in itertools.product(vals, repeat=4):
            A = RingMatrix(ZZ, [[a, b], [c, d]])
            if A * A.adjoint() == A:
                oracle.add(A)
        assert oracle == {to_matrix(f) for f in enumerate_projections(ZZ, R2, 2)}

    def test_dyadic_oracle(self):
        vals = [Fraction(p, q) for q in (1, 2) for p in range(-2, 3)]
        vals = sorted({v for v in vals if max(abs(v.numerator), v.denominator) <= 2})
        oracle = set()
        for entries in itertools.product(vals, repeat=4):
            A = RingMatrix(Z2, [entries[:2], entries[2:]])
            if A * A.adjoint() == A:
                oracle.add(A)
        got = enumerate_projections(Z2, R2, 2)
        assert oracle == {to_matrix(f) for f in got}
        half = AlgebraElement(R2, Z2, {a: "1/2" for a in R2.arrows})
        assert half in got
        assert any(not is_diagonal(f) for f in got)

    def test_single_unit(self):
        g = full_equivalence_groupoid(1)
        got = enumerate_projections(ZZ, g, 1)
        assert got == [AlgebraElement.zero(g, ZZ), AlgebraElement.identity(g, ZZ)]

    def test_isotropy_idempotents_over_z(self):
        # Z/2 on a point: only 0 and 1 over Z, plus (1 +- g)/2 once 1/2 is available
        g = groupoid_from_group_action([[0, 1], [1, 0]], ["p"])
        assert len(enumerate_projections(ZZ, g, 2)) == 2
        assert len(enumerate_projections(Z2, g, 2)) == 4

    @pytest.mark.parametrize("spec", ["Z", "Z[i]", "Z[sqrt -5]", "Z[sqrt 2]"])
    def test_kind_rings_have_diagonal_projections(self, spec):
        ring = parse_ring_spec(spec)
        assert all(is_diagonal(f) for f in enumerate_projections(ring, R2, 1))

    def test_budget(self):
        with pytest.raises(BudgetExceededError) as exc:
            enumerate_projections(ZI, full_equivalence_groupoid(3), 3, budget=1000)
        assert exc.value.budget == 1000


class TestNormalizers:
    def test_examples(self):
        f = ind(R2, ZZ, "(1,2)", "(2,1)")
        assert is_normalizer_pair(f, f)
        J = AlgebraElement.indicator(R2, ZZ, R2.arrows)
        assert not is_normalizer_pair(J, ind(R2, ZZ, "(1,1)"))
        zero = AlgebraElement.zero(R2, ZZ)
        assert is_normalizer_pair(zero, zero)

    @settings(max_examples=60)
    @given(st.randoms(use_true_random=False))
    def test_unimodular_bisections(self, rnd):
        G = random_groupoid(rnd)
        units = [x for x in ZI.enumerate_elements(1) if x.norm_sq() == 1]
        arrows = list(G.arrows)
        rnd.shuffle(arrows)
        U = []
        for a in arrows:
            if is_bisection(G, U + [a]) and rnd.random() < 0.7:
                U.append(a)
        f = AlgebraElement(G, ZI, {a: rnd.choice(units) for a in U})
        assert is_normalizer_pair(f, star(f))


class TestMatrixRealisation:
    def test_examples(self):
        A = to_matrix(ind(R2, ZZ, "(1,2)"))
        assert A == RingMatrix(ZZ, [[0, 1], [0, 0]])
        assert to_matrix(AlgebraElement.identity(R2, ZZ)).is_identity()

    @settings(max_examples=50)
    @given(st.randoms(use_true_random=False), st.integers(1, 4))
    def test_round_trip_and_diagonal(self, rnd, n):
        G = full_equivalence_groupoid(n)
        f = random_element(rnd, G, ZI)
        assert from_matrix(to_matrix(f)) == f
        assert is_diagonal(f) == to_matrix(f).is_diagonal()

    def test_rejects_other_groupoids(self):
        g = groupoid_from_group_action([[0, 1], [1, 0]], ["p", "q"])
        with pytest.raises(UsageError):
            to_matrix(AlgebraElement.zero(g, ZZ))
        with pytest.raises(UsageError):
            from_matrix(RingMatrix.identity(ZZ, 3), R2)


class TestHomomorphisms:
    def test_identity(self):
        assert is_diagonal_preserving(identity_homomorphism(R2, ZZ))

    def test_swap_conjugation(self):
        h = conjugation_map(RingMatrix(ZZ, [[0, 1], [1, 0]]))
        assert is_diagonal_preserving(h)
        assert h.images["(1,1)"] == ind(R2, ZZ, "(2,2)")

    def test_rotation_conjugation(self):
        U = RingMatrix.parse(Z5, [["3/5", "4/5"], ["-4/5", "3/5"]])
        h = conjugation_map(U)
        assert not is_diagonal_preserving(h)
        p = h.images["(1,1)"]
        assert to_matrix(p) == RingMatrix.parse(Z5, [["9/25", "-12/25"], ["-12/25", "16/25"]])
        assert is_projection(p) and not is_diagonal(p)

    def test_broken_map_names_pair(self):
        images = {a: ind(R2, ZZ, a) for a in R2.arrows}
        images["(1,2)"] = ind(R2, ZZ, "(1,2)").scale(2)
        with pytest.raises(StarHomomorphismError) as exc:
            is_diagonal_preserving(StarHomomorphism(R2, R2, ZZ, images))
        assert exc.value.pair is not None

    def test_incomplete_presentation(self):
        with pytest.raises(UsageError):
            StarHomomorphism(R2, R2, ZZ, {"(1,1)": ind(R2, ZZ, "(1,1)")})

    def test_apply_linear_extension(self):
        h = conjugation_map(RingMatrix(ZZ, [[0, 1], [1, 0]]))
        f = AlgebraElement(R2, ZZ, {"(1,1)": 2, "(1,2)": 3})
        assert to_matrix(h(f)) == RingMatrix(ZZ, [[0, 0], [3, 2]])


def test_random_groupoid_sizes():
    for seed in range(30):
        g = random_groupoid(random.Random(seed))
        assert len(g.units) <= 5 and len(g.arrows) <= 16
