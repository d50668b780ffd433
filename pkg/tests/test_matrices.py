import itertools

import pytest
from hypothesis import given, settings, strategies as st

from kindrings import (
    RingMatrix,
    RingVector,
    UsageError,
    conjugation_map,
    householder_from_vector,
    is_diagonal_preserving,
    non_monomial_unitary_from_vector,
    parse_ring_spec,
    to_matrix,
)
from kindrings.matrices import matrix_unit

from strategies import RING_SPECS, elements_of

ZZ = parse_ring_spec("Z")
ZI = parse_ring_spec("Z[i]")
Z2 = parse_ring_spec("Z[1/2]")
Z5 = parse_ring_spec("Z[1/5]")
Z2I = parse_ring_spec("Z[1/2][i]")


def M(ring, rows):
    return RingMatrix.parse(ring, rows)


class TestArithmetic:
    def test_matrix_units(self):
        assert matrix_unit(ZZ, 2, 0, 1) * matrix_unit(ZZ, 2, 1, 0) == matrix_unit(ZZ, 2, 0, 0)

    def test_adjoint(self):
        assert M(ZI, [["0", "i"], ["0", "0"]]).adjoint() == M(ZI, [["0", "0"], ["-i", "0"]])

    @given(st.sampled_from(RING_SPECS).flatmap(lambda s: st.lists(elements_of(s, 2), min_size=4, max_size=4)))
    def test_identity_and_adjoint_laws(self, xs):
        ring = xs[0].spec
        A = RingMatrix(ring, [xs[:2], xs[2:]])
        B = RingMatrix(ring, [xs[1::-1], xs[:1:-1]])
        assert A * RingMatrix.identity(ring, 2) == A
        assert A.adjoint().adjoint() == A
        assert (A * B).adjoint() == B.adjoint() * A.adjoint()

    def test_mismatch(self):
        with pytest.raises(UsageError):
            RingMatrix.identity(ZZ, 2) * RingMatrix.identity(ZZ, 3)
        with pytest.raises(UsageError):
            RingMatrix.identity(ZZ, 2) + RingMatrix.identity(ZI, 2)
        with pytest.raises(UsageError):
            RingMatrix(ZZ, [[1, 2]])


class TestPredicates:
    def test_unitary(self):
        assert RingMatrix(ZZ, [[0, 1], [1, 0]]).is_unitary()
        assert M(Z5, [["3/5", "4/5"], ["-4/5", "3/5"]]).is_unitary()
        assert not RingMatrix(ZZ, [[1, 1], [0, 1]]).is_unitary()

    def test_monomial(self):
        assert M(ZI, [["i", "0"], ["0", "-1"]]).is_monomial()
        assert not M(Z5, [["3/5", "4/5"], ["-4/5", "3/5"]]).is_monomial()
        assert not RingMatrix.zeros(ZZ, 2).is_monomial()

    def test_unit_vector(self):
        assert RingVector(ZZ, [0, 1, 0]).is_unit_vector()
        assert RingVector.parse(Z2, ["1/2"] * 4).is_unit_vector()
        assert not RingVector(ZZ, [1, 1]).is_unit_vector()


def brute_force_unitaries(ring, n):
    pool = ring.enumerate_elements(1)
    out = []
    for entries in itertools.product(pool, repeat=n * n):
        U = RingMatrix(ring, [entries[r * n:(r + 1) * n] for r in range(n)])
        if U.is_unitary():
            out.append(U)
    return out


class TestMonomialStructure:
    @pytest.mark.parametrize("ring", [ZZ, ZI])
    def test_products_and_adjoints_stay_monomial(self, ring):
        us = brute_force_unitaries(ring, 2)
        assert all(U.is_monomial() for U in us)
        for U, V in itertools.product(us, repeat=2):
            assert (U * V).is_monomial() and U.adjoint().is_monomial()

    @pytest.mark.parametrize("ring", [ZZ, ZI])
    def test_conjugation_by_monomial_keeps_diagonals(self, ring):
        D = RingMatrix(ring, [[2, 0], [0, 3]])
        for U in brute_force_unitaries(ring, 2):
            assert (U * D * U.adjoint()).is_diagonal()
            assert is_diagonal_preserving(conjugation_map(U))

    def test_bridge_on_dyadic_unitaries(self):
        # every 2x2 unitary over Z[1/2][i] at height 2: preserving iff monomial
        pool = Z2I.enumerate_elements(2)
        rows = [
            r for r in itertools.product(pool, repeat=2)
            if r[0].norm_sq() + r[1].norm_sq() == 1
        ]
        seen = 0
        for r, s in itertools.product(rows, repeat=2):
            U = RingMatrix(Z2I, [r, s])
            if not U.is_unitary():
                continue
            seen += 1
            h = conjugation_map(U)
            assert is_diagonal_preserving(h) == U.is_monomial()
            if not U.is_monomial():
                assert any(
                    not (U * matrix_unit(Z2I, 2, i, i) * U.adjoint()).is_diagonal() for i in range(2)
                )
        assert seen > 32


class TestHouseholder:
    def test_basis_vector(self):
        assert householder_from_vector(RingVector(ZZ, [1, 0])) == RingMatrix(ZZ, [[-1, 0], [0, 1]])
        assert householder_from_vector(RingVector.parse(ZI, ["i", "0"])) == RingMatrix(ZI, [[-1, 0], [0, 1]])

    def test_dyadic_quarter(self):
        U = householder_from_vector(RingVector.parse(Z2, ["1/2"] * 4))
        expected = RingMatrix(Z2, [[Z2.parse_element("1/2") if i == j else Z2.parse_element("-1/2")
                                    for j in range(4)] for i in range(4)])
        assert U == expected
        assert U * U == RingMatrix.identity(Z2, 4)

    def test_fifths(self):
        U = householder_from_vector(RingVector.parse(Z5, ["3/5", "4/5"]))
        assert U == M(Z5, [["7/25", "-24/25"], ["-24/25", "-7/25"]])

    def test_rejects_non_unit(self):
        with pytest.raises(UsageError):
            householder_from_vector(RingVector(ZZ, [1, 1]))


class TestNonMonomial:
    def test_degenerate_block(self):
        v = RingVector.parse(Z2I, ["(1+i)/2", "(1-i)/2"])
        assert householder_from_vector(v) == M(Z2I, [["0", "-i"], ["i", "0"]])
        U = non_monomial_unitary_from_vector(v)
        assert U == M(Z2I, [["(1+i)/2", "-(1+i)/2"], ["(1-i)/2", "(1-i)/2"]])
        assert U.is_unitary() and all(x for row in U.rows for x in row)

    def test_degenerate_block_embeds_in_identity(self):
        v = RingVector.parse(Z2, ["0", "1/2", "0", "1/2", "1/2", "1/2"])
        U = non_monomial_unitary_from_vector(v)
        assert U.is_unitary() and not U.is_monomial()

    def test_householder_when_generic(self):
        v = RingVector.parse(Z2, ["1/2"] * 4)
        assert non_monomial_unitary_from_vector(v) == householder_from_vector(v)

    def test_single_nonzero(self):
        with pytest.raises(UsageError):
            non_monomial_unitary_from_vector(RingVector(ZZ, [0, 1]))


class TestConjugationMap:
    def test_identity(self):
        h = conjugation_map(RingMatrix.identity(ZZ, 2))
        assert all(to_matrix(h.images[a]) == matrix_unit(ZZ, 2, int(a[1]) - 1, int(a[3]) - 1)
                   for a in h.source.arrows)

    def test_swap(self):
        h = conjugation_map(RingMatrix(ZZ, [[0, 1], [1, 0]]))
        assert to_matrix(h.images["(1,1)"]) == matrix_unit(ZZ, 2, 1, 1)

    def test_rotation(self):
        h = conjugation_map(M(Z5, [["3/5", "4/5"], ["-4/5", "3/5"]]))
        h.verify()
        assert to_matrix(h.images["(1,1)"]) == M(Z5, [["9/25", "-12/25"], ["-12/25", "16/25"]])

    def test_non_unitary(self):
        with pytest.raises(UsageError):
            conjugation_map(RingMatrix(ZZ, [[1, 1], [0, 1]]))


SEEDS = [
    (Z2, ["1/2", "1/2", "1/2", "1/2"]),
    (Z5, ["3/5", "4/5"]),
    (Z2I, ["(1+i)/2", "(1-i)/2"]),
    (Z2I, ["1/2", "i/2", "-1/2", "-i/2"]),
    (parse_ring_spec("Q"), ["2/3", "2/3", "1/3"]),
    (ZI, ["i", "0"]),
]


@settings(max_examples=80)
@given(st.sampled_from(SEEDS), st.integers(0, 2), st.randoms(use_true_random=False))
def test_reflections_of_padded_permuted_unit_vectors(seed, pad, rnd):
    ring, entries = seed
    units = [x for x in ring.enumerate_elements(1) if x.norm_sq() == 1]
    xs = [ring.parse_element(e) * rnd.choice(units) for e in entries] + [ring.zero()] * pad
    rnd.shuffle(xs)
    v = RingVector(ring, xs)
    assert v.is_unit_vector()
    U = householder_from_vector(v)
    assert U.is_self_adjoint() and U.is_unitary()
    if len(v.nonzero_indices()) >= 2:
        W = non_monomial_unitary_from_vector(v)
        assert W.is_unitary() and not W.is_monomial()
