import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from covchain.bounds import is_nearly_thin, table_from_sizes
from covchain.ideals import (
    OMEGA,
    DimensionError,
    DownSet,
    UpSet,
    complement_candidate,
    downset_canonicalize,
    downset_complement,
    downset_contains,
    downset_intersect,
    downset_union,
    fin_set,
    ideal,
    ideal_complement,
    ideal_dim,
    ideal_fdim,
    ideal_leq,
    ideal_meet,
    ideal_norm,
    omega_set,
    upset_complement,
    upset_contains,
    upset_minimize,
    vec_leq,
)

from conftest import downsets, grid, ideals_of, upsets

W = OMEGA


def minimal_non_members(D: DownSet, hi: int) -> set:
    """Brute force: non-members none of whose lower neighbours is a non-member."""
    out = set()
    for v in grid(D.dim, hi):
        if downset_contains(D, v):
            continue
        lower = (v[:i] + (v[i] - 1,) + v[i + 1 :] for i in range(D.dim) if v[i] > 0)
        if all(downset_contains(D, u) for u in lower):
            out.add(v)
    return out


class TestOrder:
    def test_leq_examples(self):
        assert ideal_leq((1, 4), (W, 4))
        assert not ideal_leq((W, 3), (1, 4))
        assert ideal_leq((W, 3), (W, 3))

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            ideal_leq((1, 2), (1, 2, 3))

    def test_omega_above_every_int(self):
        assert W > 10**100 and not W < 5 and W == W
        assert sorted([3, W, 0]) == [0, 3, W]

    def test_ideal_parsing(self):
        assert ideal("w", 3, "ω") == (W, 3, W)
        with pytest.raises(ValueError):
            ideal(-1)

    def test_measures(self):
        I = (W, 3, 0, W)
        assert omega_set(I) == {0, 3} and fin_set(I) == {1, 2}
        assert ideal_dim(I) == 2 and ideal_fdim(I) == 2 and ideal_norm(I) == 3
        assert ideal_norm((W, W)) == 0

    def test_meet_examples(self):
        assert ideal_meet((W, 4), (1, W)) == (1, 4)
        assert ideal_meet((W, 4), (W, 3)) == (W, 3)
        assert ideal_meet((2, W), (2, W)) == (2, W)

    def test_meet_by_membership(self):
        I, J = (W, 4), (1, W)
        M = DownSet(2, frozenset([ideal_meet(I, J)]))
        for v in grid(2, 5):
            assert downset_contains(M, v) == (vec_leq(v, I) and vec_leq(v, J))

    @given(st.integers(1, 3).flatmap(lambda d: st.tuples(ideals_of(d), ideals_of(d), ideals_of(d))))
    def test_meet_is_glb(self, triple):
        I, J, K = triple
        M = ideal_meet(I, J)
        assert ideal_leq(M, I) and ideal_leq(M, J)
        if ideal_leq(K, I) and ideal_leq(K, J):
            assert ideal_leq(K, M)

    @given(st.integers(1, 3).flatmap(lambda d: st.tuples(ideals_of(d), ideals_of(d))))
    def test_leq_entails_omega_inclusion(self, pair):
        I, J = pair
        if ideal_leq(I, J):
            assert omega_set(I) <= omega_set(J)
            if ideal_dim(I) == ideal_dim(J):
                assert omega_set(I) == omega_set(J)


class TestDownSets:
    def test_canonicalize(self):
        assert downset_canonicalize([(1, 4), (W, 4)]) == downset_canonicalize([(W, 4)])
        assert downset_canonicalize([(1, 4), (1, 4)]).ideals == {(1, 4)}
        assert downset_canonicalize([], 3).is_empty()

    def test_intersect_halving(self):
        D = downset_intersect(downset_canonicalize([(W, 4)]), downset_canonicalize([(1, W), (W, 3)]))
        assert D.ideals == {(1, 4), (W, 3)}
        for v in itertools.product(range(11), range(6)):
            assert downset_contains(D, v) == (v[1] <= 4 and (v[0] <= 1 or v[1] <= 3))

    def test_intersect_trivial(self):
        D = downset_canonicalize([(1, 4), (W, 3)])
        assert downset_intersect(D, DownSet.full(2)) == D
        assert downset_intersect(D, DownSet.empty(2)).is_empty()

    def test_contains(self, halving_downsets):
        D5 = halving_downsets[5]
        assert downset_contains(D5, (9, 0))
        assert not downset_contains(D5, (10, 0))
        assert downset_contains(D5, (1, 4))

    def test_union(self):
        U = downset_union(downset_canonicalize([(1, 4)]), downset_canonicalize([(W, 4)]))
        assert U.ideals == {(W, 4)}

    @given(downsets())
    def test_antichain(self, D):
        assert D.is_antichain()

    @given(st.integers(1, 3).flatmap(lambda d: st.tuples(downsets(d, d), downsets(d, d))))
    def test_intersect_membership(self, pair):
        A, B = pair
        C = downset_intersect(A, B)
        assert C.is_antichain()
        for v in grid(A.dim, 6):
            assert downset_contains(C, v) == (downset_contains(A, v) and downset_contains(B, v))

    @given(st.integers(1, 3).flatmap(lambda d: st.tuples(downsets(d, d), downsets(d, d))))
    def test_union_membership(self, pair):
        A, B = pair
        C = downset_union(A, B)
        for v in grid(A.dim, 6):
            assert downset_contains(C, v) == (downset_contains(A, v) or downset_contains(B, v))


class TestUpSets:
    def test_minimize(self):
        assert upset_minimize([(2, 4), (3, 4)]).basis == {(2, 4)}
        assert upset_minimize([(0, 5), (2, 4)]).basis == {(0, 5), (2, 4)}
        assert len(upset_minimize([], 2)) == 0

    @given(upsets())
    def test_antichain(self, U):
        assert U.is_antichain()

    def test_contains(self):
        U = upset_minimize([(0, 5), (2, 4)])
        assert upset_contains(U, (3, 4)) and not upset_contains(U, (1, 4))


class TestComplements:
    def test_ideal_complement(self):
        assert ideal_complement((1, 4)).basis == {(2, 0), (0, 5)}
        assert ideal_complement((W, W)).basis == frozenset()
        assert ideal_complement((0, W)).basis == {(1, 0)}
        # brute force over the 7x7 grid
        D = downset_canonicalize([(1, 4)])
        assert minimal_non_members(D, 6) == {(2, 0), (0, 5)}

    def test_downset_complement_halving(self):
        D1 = downset_canonicalize([(1, 4), (W, 3)])
        U = downset_complement(D1)
        assert U.basis == {(2, 4), (0, 5)}
        assert minimal_non_members(D1, 6) == {(2, 4), (0, 5)}
        assert downset_complement(DownSet.full(3)).basis == frozenset()
        assert downset_complement(DownSet.empty(2)).basis == {(0, 0)}

    def test_upset_complement_halving(self):
        assert upset_complement(upset_minimize([(0, 5), (2, 4)])).ideals == {(1, 4), (W, 3)}
        assert upset_complement(upset_minimize([(0, 5)])).ideals == {(W, 4)}
        assert upset_complement(UpSet.full(3)).is_empty()
        assert upset_complement(UpSet.empty(2)) == DownSet.full(2)

    def test_halving_chain_round_trip(self, halving_downsets):
        for D in halving_downsets:
            assert upset_complement(downset_complement(D)) == D

    @given(downsets(max_value=4))
    def test_complement_partitions_grid(self, D):
        U = downset_complement(D)
        assert U.is_antichain()
        for v in grid(D.dim, 6):
            assert downset_contains(D, v) != upset_contains(U, v)

    @given(downsets(max_value=4))
    def test_complement_involution(self, D):
        assert upset_complement(downset_complement(D)) == D

    @given(upsets(max_value=4))
    def test_upset_involution(self, U):
        assert downset_complement(upset_complement(U)) == U

    @given(downsets(max_value=3, max_dim=2))
    def test_basis_matches_brute_force(self, D):
        # all finite components are <= 3 so every minimal non-member lies in {0..4}^d
        assert downset_complement(D).basis == minimal_non_members(D, 4)


class TestNearlyThinCandidate:
    IDEALS = [(1, 4, 6, 7), (2, 6, 4, 8), (3, 1, 7, 6), (3, 1, 7, 6), (4, 5, 3, 0)]
    TABLE = table_from_sizes((2, 4, 6, 8))
    # frozen from minimal_non_members over {0..9}^4
    BASIS = {
        (0, 0, 0, 9), (0, 0, 5, 8), (0, 0, 7, 7), (0, 0, 8, 0), (0, 2, 7, 0), (0, 5, 5, 0),
        (0, 7, 0, 0), (2, 0, 5, 7), (2, 2, 5, 0), (3, 0, 0, 7), (3, 2, 0, 1), (3, 2, 4, 0),
        (3, 6, 0, 0), (4, 0, 0, 1), (4, 0, 4, 0), (5, 0, 0, 0),
    }

    def choice(self, *one_based):
        return complement_candidate(self.IDEALS, [i - 1 for i in one_based])

    def test_basis_frozen(self):
        D = downset_canonicalize(self.IDEALS, 4)
        assert downset_complement(D).basis == self.BASIS

    def test_basis_brute_force(self):
        D = downset_canonicalize(self.IDEALS, 4)
        assert minimal_non_members(D, 9) == self.BASIS

    def test_violating_candidate_is_dominated(self):
        v, w = (2, 7, 7, 7), (2, 0, 7, 7)
        assert not is_nearly_thin(v, self.TABLE)
        assert v not in self.BASIS
        assert vec_leq(w, v) and w != v
        assert any(vec_leq(b, w) for b in self.BASIS)

    def test_candidates_from_choices(self):
        v, w = self.choice(3, 2, 4, 1, 2), self.choice(3, 3, 4, 1, 4)
        assert v == (4, 7, 7, 7) and w == (4, 0, 7, 7)
        assert vec_leq(w, v) and w != v
        assert not is_nearly_thin(v, self.TABLE) and is_nearly_thin(w, self.TABLE)

    def test_every_basis_vector_nearly_thin(self):
        assert all(is_nearly_thin(b, self.TABLE) for b in self.BASIS)

    def test_candidate_rejects_omega_choice(self):
        with pytest.raises(ValueError):
            complement_candidate([(W, 1)], [0])
