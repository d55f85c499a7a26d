"""Orientation pipeline, verification, and the brute-force subset oracle."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stardecomp.decompose import (
    ProfileError,
    Star,
    StarDecomposition,
    StarProfile,
    Witness,
    balanced_profile,
    brute_force_condition,
    check_condition_U,
    decompose,
    orient_with_outdegree_bounds,
    orient_with_outdegrees,
    read_decomposition,
    stars_from_orientation,
    verify_decomposition,
    write_decomposition,
)
from stardecomp.graph import (
    GraphError,
    complete_graph,
    cycle_graph,
    edges_within,
    reject_to_simple,
    sample_simple,
)


def _random_profile(rng, N, m, k):
    """Random nonnegative j with k * sum(j) = m, or None if k does not divide m."""
    if m % k:
        return None
    total = m // k
    j = np.zeros(N, dtype=int)
    for v in rng.integers(0, N, size=total):
        j[v] += 1
    return StarProfile(k=k, j_of=tuple(int(x) for x in j))


class TestProfiles:
    def test_balanced_profile(self):
        p = balanced_profile(8, 3, 2, A=frozenset(range(6)))
        # d = 3, k = 2: s = 0, r = 3, so A carries one star each
        assert p.j_of == (1, 1, 1, 1, 1, 1, 0, 0)
        assert p.total_quota() == 12  # = Nd/2

    def test_balanced_profile_r0(self):
        p = balanced_profile(10, 4, 2, A=frozenset())
        assert p.j_of == (1,) * 10

    def test_divisibility_errors(self):
        with pytest.raises(ProfileError):
            balanced_profile(7, 3, 2, A=frozenset())
        with pytest.raises(ProfileError):
            balanced_profile(8, 3, 2, A=frozenset(range(5)))  # wrong |A|
        with pytest.raises(ProfileError):
            balanced_profile(8, 3, 2, A=frozenset({9}))

    def test_invalid_profiles(self):
        with pytest.raises(ProfileError):
            StarProfile(k=0, j_of=(1,))
        with pytest.raises(ProfileError):
            StarProfile(k=2, j_of=(-1, 1))


class TestDecompose:
    def test_eulerian_case_always_succeeds(self):
        # 2k | d: an Eulerian orientation realizes the quota at every vertex.
        for seed in range(5):
            G = sample_simple(10, 4, seed=seed)
            prof = balanced_profile(10, 4, 2, A=frozenset())
            result = decompose(G, 2, prof)
            assert isinstance(result, StarDecomposition)
            ok, why = verify_decomposition(G, 2, prof, result)
            assert ok, why

    def test_k4(self):
        G = complete_graph(4)
        prof = balanced_profile(4, 3, 2, A=frozenset(range(3)))
        result = decompose(G, 2, prof)
        assert isinstance(result, StarDecomposition)
        assert len(result.stars) == 3

    def test_cycle_k1(self):
        G = cycle_graph(6)
        prof = balanced_profile(6, 2, 1, A=frozenset())
        result = decompose(G, 1, prof)
        assert isinstance(result, StarDecomposition)
        assert len(result.stars) == 6

    def test_witness_on_overloaded_vertex(self):
        # all quota on vertex 0 of a 6-cycle: subsets avoiding 0 have no quota
        G = cycle_graph(6)
        prof = StarProfile(k=2, j_of=(3, 0, 0, 0, 0, 0))
        result = decompose(G, 2, prof)
        assert isinstance(result, Witness)
        assert result.lhs > result.rhs
        assert edges_within(G, result.U) == result.lhs
        holds_u, _ = check_condition_U(G, prof, result.U)
        assert not holds_u

    def test_profile_mismatch_errors(self):
        G = cycle_graph(4)
        with pytest.raises(ProfileError):
            decompose(G, 2, StarProfile(k=2, j_of=(1, 1, 1, 1)))  # quota != m
        with pytest.raises(ProfileError):
            decompose(G, 3, StarProfile(k=2, j_of=(1, 1)))

    def test_bounded_orientation(self):
        G = cycle_graph(4)
        prof = StarProfile(k=2, j_of=(1, 1, 1, 1))  # quota 8 >= 4 edges
        result = orient_with_outdegree_bounds(G, prof)
        assert not isinstance(result, Witness)
        out = [0] * G.N
        for tail in result.tails:
            out[tail] += 1
        assert all(out[v] <= prof.quota(v) for v in range(G.N))


class TestAgreementWithBruteForce:
    @given(st.integers(0, 60))
    @settings(max_examples=40, deadline=None)
    def test_random_cubic_instances(self, seed):
        rng = np.random.default_rng(seed)
        N = int(rng.choice([4, 6, 8]))
        G = reject_to_simple(N, 3, seed=seed) if N > 3 else None
        k = int(rng.choice([2, 3]))
        prof = _random_profile(rng, N, len(G.edges), k)
        if prof is None:
            return
        flow = decompose(G, k, prof)
        brute = brute_force_condition(G, prof)
        assert isinstance(flow, StarDecomposition) == (brute is True)
        if brute is not True:
            assert brute.lhs > brute.rhs

    def test_witness_is_lexicographically_first(self):
        G = cycle_graph(5)
        prof = StarProfile(k=1, j_of=(0, 0, 5, 0, 0))
        brute = brute_force_condition(G, prof)
        assert brute is not True
        # {0, 1} is the first subset (in lex order) with an uncovered edge
        assert sorted(brute.U) == [0, 1]

    def test_brute_cap(self):
        G = sample_simple(26, 3, seed=0)
        with pytest.raises(GraphError):
            brute_force_condition(G, StarProfile(k=3, j_of=(1,) * 26))


class TestVerification:
    def _setup(self):
        G = sample_simple(10, 4, seed=2)
        prof = balanced_profile(10, 4, 2, A=frozenset())
        D = decompose(G, 2, prof)
        return G, prof, D

    def test_detects_duplicate_edge(self):
        G, prof, D = self._setup()
        bad = StarDecomposition(stars=D.stars[:-1] + (D.stars[0],))
        ok, why = verify_decomposition(G, 2, prof, bad)
        assert not ok and why is not None

    def test_detects_wrong_star_size(self):
        G, prof, D = self._setup()
        s0 = D.stars[0]
        bad = StarDecomposition(stars=(Star(s0.center, s0.edge_ids[:1]),) + D.stars[1:])
        ok, why = verify_decomposition(G, 2, prof, bad)
        assert not ok and "expected 2" in why

    def test_detects_non_incident_edge(self):
        G, prof, D = self._setup()
        s0 = D.stars[0]
        for eid, (u, v) in enumerate(G.edges):
            if s0.center not in (u, v):
                bad_star = Star(s0.center, (s0.edge_ids[0], eid))
                break
        bad = StarDecomposition(stars=(bad_star,) + D.stars[1:])
        ok, why = verify_decomposition(G, 2, prof, bad)
        assert not ok

    def test_detects_wrong_center_count(self):
        G, prof, D = self._setup()
        wrong = StarProfile(k=2, j_of=(2, 0) + prof.j_of[2:])
        ok, why = verify_decomposition(G, 2, wrong, D)
        assert not ok


class TestConditionU:
    def test_complement_equivalence_under_equality_profile(self):
        G = sample_simple(12, 4, seed=9)
        prof = balanced_profile(12, 4, 2, A=frozenset())
        rng = np.random.default_rng(0)
        for _ in range(50):
            U = frozenset(int(v) for v in rng.choice(12, size=rng.integers(0, 13), replace=False))
            holds_u, holds_uc = check_condition_U(G, prof, U)
            # with total quota = m the two inequalities are equivalent
            assert holds_u == check_condition_U(G, prof, frozenset(range(12)) - U)[1]


class TestSerialization:
    def test_round_trip(self, tmp_path):
        G = sample_simple(10, 4, seed=2)
        prof = balanced_profile(10, 4, 2, A=frozenset())
        D = decompose(G, 2, prof)
        path = tmp_path / "dec.txt"
        write_decomposition(path, D)
        D2 = read_decomposition(path)
        assert D2 == D
        ok, why = verify_decomposition(G, 2, prof, D2)
        assert ok, why

    def test_malformed(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("1: 1 2\nnot a star\n")
        with pytest.raises(GraphError, match="line 2"):
            read_decomposition(path)
