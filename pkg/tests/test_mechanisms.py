import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wavebandit.errors import ContractViolation
from wavebandit.mechanisms import (
    MechanismKind,
    allocate,
    assignment_probs,
    exploration,
    exploration_reweight,
    ra,
    temper,
    tempered,
    thompson,
)
from wavebandit.posterior import PosteriorState
from wavebandit.seeding import make_rng


class TestMechanismKind:
    def test_tempered_requires_gamma(self):
        with pytest.raises(ContractViolation):
            MechanismKind("tempered")
        with pytest.raises(ContractViolation):
            MechanismKind("tempered", 1.5)

    def test_gamma_only_for_tempered(self):
        with pytest.raises(ContractViolation):
            MechanismKind("thompson", 0.2)

    def test_unknown_tag(self):
        with pytest.raises(ContractViolation):
            MechanismKind("ucb")

    def test_ids_follow_canonical_order(self):
        assert [m.mech_id for m in (ra(), thompson(), exploration(), tempered())] == [0, 1, 2, 3]


class TestAssignmentProbs:
    def test_ra_is_uniform_and_ignores_state(self):
        state = PosteriorState.from_arrays([50, 1, 1], [1, 50, 50])
        probs = assignment_probs(ra(), state, 1, None)
        assert np.array_equal(probs, np.full(3, 1 / 3))

    def test_thompson_symmetry(self):
        state = PosteriorState.from_arrays([5, 5, 5], [5, 5, 5])
        probs = assignment_probs(thompson(), state, 100_000, make_rng(0))
        assert np.all(np.abs(probs - 1 / 3) < 0.01)

    def test_exploration_hand_value(self):
        expected = np.array([25, 21, 16]) / 62
        got = exploration_reweight(np.array([0.5, 0.3, 0.2]))
        assert np.all(np.abs(got - expected) < 1e-12)

    def test_exploration_degenerate_falls_back(self):
        p = np.array([1.0, 0.0, 0.0])
        assert np.array_equal(exploration_reweight(p), p)

    def test_exploration_zeroes_certain_arms(self):
        got = exploration_reweight(np.array([0.5, 0.5, 0.0]))
        assert got[2] == 0.0
        assert got[0] == got[1] == 0.5

    def test_exploration_permutation_equivariant(self, rng):
        for _ in range(20):
            p = rng.dirichlet(np.ones(4))
            perm = rng.permutation(4)
            assert np.allclose(
                exploration_reweight(p[perm]), exploration_reweight(p)[perm], atol=1e-12
            )

    def test_tempered_hand_value(self):
        got = temper(np.array([1.0, 0.0, 0.0]), 0.2)
        expected = np.array([0.8 + 0.2 / 3, 0.2 / 3, 0.2 / 3])
        assert np.all(np.abs(got - expected) < 1e-12)

    def test_tempered_gamma_one_is_ra(self):
        state = PosteriorState.from_arrays([50, 1, 1], [1, 50, 50])
        probs = assignment_probs(tempered(1.0), state, 1000, make_rng(1))
        assert np.array_equal(probs, np.full(3, 1 / 3))

    def test_tempered_gamma_zero_is_thompson(self):
        state = PosteriorState.from_arrays([8, 2, 4], [3, 7, 4])
        p_thompson = assignment_probs(thompson(), state, 10_000, make_rng(2))
        p_blend = assignment_probs(tempered(0.0), state, 10_000, make_rng(2))
        assert np.array_equal(p_blend, p_thompson)

    def test_all_kinds_stay_on_simplex(self, rng):
        kinds = [ra(), thompson(), exploration(), tempered(0.2)]
        for _ in range(10):
            state = PosteriorState.from_arrays(rng.uniform(1, 60, 3), rng.uniform(1, 60, 3))
            for kind in kinds:
                probs = assignment_probs(kind, state, 2000, rng)
                assert np.all((probs >= 0) & (probs <= 1))
                assert abs(probs.sum() - 1.0) < 1e-9

    def test_adaptive_kinds_need_rng(self):
        state = PosteriorState.uniform_prior(3)
        with pytest.raises(ContractViolation):
            assignment_probs(thompson(), state, 100, None)
        with pytest.raises(ContractViolation):
            assignment_probs(thompson(), state, 0, make_rng(0))


class TestAllocate:
    def test_degenerate_simplex_both_policies(self):
        probs = np.array([1.0, 0.0, 0.0])
        assert np.array_equal(allocate(probs, 10, "iid", make_rng(0)), [10, 0, 0])
        assert np.array_equal(allocate(probs, 10, "largest-remainder"), [10, 0, 0])

    def test_largest_remainder_exact_proportions(self):
        counts = allocate(np.array([0.5, 0.3, 0.2]), 10, "largest-remainder")
        assert np.array_equal(counts, [5, 3, 2])

    def test_largest_remainder_rounding_ties_to_lowest_index(self):
        counts = allocate(np.array([0.25, 0.25, 0.25, 0.25]), 6, "largest-remainder")
        assert np.array_equal(counts, [2, 2, 1, 1])

    def test_largest_remainder_deterministic(self):
        probs = np.array([0.41, 0.33, 0.26])
        a = allocate(probs, 17, "largest-remainder")
        b = allocate(probs, 17, "largest-remainder")
        assert np.array_equal(a, b)

    def test_iid_concentration(self):
        counts = allocate(np.full(3, 1 / 3), 100_000, "iid", make_rng(3))
        assert np.all(np.abs(counts - 100_000 / 3) < 0.01 * 100_000 / 3)
        assert counts.sum() == 100_000

    def test_iid_needs_rng(self):
        with pytest.raises(ContractViolation):
            allocate(np.array([0.5, 0.5]), 10, "iid", None)

    def test_rejects_bad_inputs(self):
        with pytest.raises(ContractViolation):
            allocate(np.array([0.5, 0.5]), 0, "iid", make_rng(0))
        with pytest.raises(ContractViolation):
            allocate(np.array([0.5, 0.5]), 10, "round-robin", make_rng(0))

    @given(
        st.lists(st.floats(0.01, 1.0), min_size=2, max_size=6),
        st.integers(1, 500),
        st.booleans(),
    )
    @settings(max_examples=100)
    def test_counts_always_sum_to_n(self, weights, n, use_iid):
        probs = np.array(weights) / np.sum(weights)
        if use_iid:
            counts = allocate(probs, n, "iid", make_rng(0))
        else:
            counts = allocate(probs, n, "largest-remainder")
        assert counts.sum() == n
        assert np.all(counts >= 0)
