import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spinframes import (
    ALL_BELL_STATES,
    Angle,
    BellState,
    CHSHSetting,
    DomainError,
    JointDistribution,
    JointSetting,
    Outcome,
    PHI_MINUS,
    PHI_PLUS,
    PSI_PLUS,
    SINGLET,
    SymmetryPlane,
    TSIRELSON_BOUND,
    UndefinedConditionalError,
    X_AXIS,
    XY_PLANE,
    Y_AXIS,
    ZX_PLANE,
    ZY_PLANE,
    build_exact_ensemble,
    chsh_classical_max,
    chsh_grid_max,
    chsh_quantum_max,
    chsh_scan,
    chsh_value,
    conditional_average,
    correlation,
    enumerate_classical_strategies,
    joint_distribution,
)

TRIPLETS = (PSI_PLUS, PHI_PLUS, PHI_MINUS)
COMMON_ANGLES = [Angle.from_degrees(10.0 * k) for k in range(19)]


def in_plane(state: BellState, alice_deg: float, bob_deg: float) -> JointSetting:
    return JointSetting.in_plane(
        state.plane, Angle.from_degrees(alice_deg), Angle.from_degrees(bob_deg)
    )


class TestBellStates:
    def test_labels_and_planes(self):
        assert SINGLET.plane is ZX_PLANE
        assert PSI_PLUS.plane is XY_PLANE
        assert PHI_PLUS.plane is ZX_PLANE
        assert PHI_MINUS.plane is ZY_PLANE

    def test_from_label_aliases(self):
        assert BellState.from_label("psi+") is PSI_PLUS
        assert BellState.from_label("PHI-") is PHI_MINUS
        assert BellState.from_label("triplet_phi_plus") is PHI_PLUS
        assert BellState.from_label("psi-") is SINGLET

    def test_unknown_label_lists_valid_ones(self):
        with pytest.raises(DomainError, match="singlet"):
            BellState.from_label("werner")

    def test_rejects_product_state(self):
        with pytest.raises(DomainError):
            BellState("product", np.array([1.0, 0.0, 0.0, 0.0]), ZX_PLANE)

    def test_rejects_unnormalized(self):
        with pytest.raises(DomainError):
            BellState("big", np.array([0.0, 1.0, -1.0, 0.0]), ZX_PLANE)

    def test_equality_ignores_global_phase(self):
        flipped = BellState("singlet", -SINGLET.amplitudes, ZX_PLANE)
        assert flipped == SINGLET

    def test_correlation_tensors_are_diagonal_signatures(self):
        expected = {
            "singlet": (-1.0, -1.0, -1.0),
            "triplet_psi_plus": (1.0, 1.0, -1.0),
            "triplet_phi_plus": (1.0, -1.0, 1.0),
            "triplet_phi_minus": (-1.0, 1.0, 1.0),
        }
        for state in ALL_BELL_STATES:
            t = state.correlation_tensor
            assert np.abs(t - np.diag(expected[state.label])).max() <= 1e-12


class TestPlanes:
    def test_direction_parametrization(self):
        v = ZX_PLANE.direction(Angle.from_degrees(90.0))
        assert v.dot(X_AXIS) == pytest.approx(1.0, abs=1e-12)

    def test_contains(self):
        assert XY_PLANE.contains(X_AXIS)
        assert not XY_PLANE.contains(ZX_PLANE.direction(Angle.from_degrees(30.0)))

    def test_rejects_skew_axes(self):
        with pytest.raises(DomainError):
            SymmetryPlane("bad", X_AXIS, X_AXIS)

    def test_setting_outside_plane_rejected(self):
        with pytest.raises(DomainError, match="plane"):
            JointSetting(X_AXIS, Y_AXIS, plane=ZX_PLANE)


class TestJointDistribution:
    def test_probabilities_validated(self):
        with pytest.raises(DomainError):
            JointDistribution(0.5, 0.5, 0.5, -0.5)
        with pytest.raises(DomainError):
            JointDistribution(0.3, 0.3, 0.3, 0.3)

    def test_undefined_conditional(self):
        d = JointDistribution(0.5, 0.5, 0.0, 0.0)
        with pytest.raises(UndefinedConditionalError):
            d.conditional_bob_mean(Outcome.DOWN)

    def test_marginals_are_unbiased_for_bell_states(self):
        for state in ALL_BELL_STATES:
            d = joint_distribution(state, in_plane(state, 17.0, 136.0))
            assert d.alice_marginal.p_up == pytest.approx(0.5, abs=1e-12)
            assert d.bob_marginal.p_up == pytest.approx(0.5, abs=1e-12)


class TestCorrelations:
    def test_triplet_plane_correlation_is_cosine(self):
        for state in TRIPLETS:
            for theta in COMMON_ANGLES:
                setting = JointSetting.in_plane(state.plane, Angle(0.0), theta)
                assert abs(correlation(state, setting) - math.cos(theta.radians)) <= 1e-12

    def test_singlet_correlation_is_minus_cosine_in_every_plane(self):
        for plane in (XY_PLANE, ZX_PLANE, ZY_PLANE):
            for theta in COMMON_ANGLES:
                setting = JointSetting.in_plane(plane, Angle(0.0), theta)
                assert abs(correlation(SINGLET, setting) + math.cos(theta.radians)) <= 1e-12

    def test_only_offset_matters_in_plane(self):
        for state in TRIPLETS:
            a = correlation(state, in_plane(state, 20.0, 80.0))
            b = correlation(state, in_plane(state, 140.0, 200.0))
            assert a == pytest.approx(b, abs=1e-12)

    def test_conservation_at_equal_settings(self):
        for state in TRIPLETS:
            for theta in COMMON_ANGLES:
                setting = JointSetting.in_plane(state.plane, theta, theta)
                d = joint_distribution(state, setting)
                assert d.p_pm <= 1e-12 and d.p_mp <= 1e-12
        for theta in COMMON_ANGLES:
            setting = JointSetting.in_plane(ZX_PLANE, theta, theta)
            d = joint_distribution(SINGLET, setting)
            assert d.p_pp <= 1e-12 and d.p_mm <= 1e-12

    def test_conditional_average_is_cosine(self):
        for state in TRIPLETS:
            for theta in COMMON_ANGLES:
                setting = JointSetting.in_plane(state.plane, Angle(0.0), theta)
                got = conditional_average(state, setting, Outcome.UP)
                assert abs(got - math.cos(theta.radians)) <= 1e-12


@settings(max_examples=150, deadline=None)
@given(
    state_idx=st.integers(0, 3),
    alice=st.floats(0.0, 2 * math.pi),
    bob1=st.floats(0.0, 2 * math.pi),
    bob2=st.floats(0.0, 2 * math.pi),
)
def test_no_signalling(state_idx, alice, bob1, bob2):
    state = ALL_BELL_STATES[state_idx]
    d1 = joint_distribution(
        state, JointSetting.in_plane(state.plane, Angle(alice), Angle(bob1))
    )
    d2 = joint_distribution(
        state, JointSetting.in_plane(state.plane, Angle(alice), Angle(bob2))
    )
    assert abs(d1.alice_marginal.p_up - d2.alice_marginal.p_up) <= 1e-12


@settings(max_examples=150, deadline=None)
@given(
    state_idx=st.integers(0, 3),
    alice1=st.floats(0.0, 2 * math.pi),
    alice2=st.floats(0.0, 2 * math.pi),
    bob=st.floats(0.0, 2 * math.pi),
)
def test_no_signalling_reverse(state_idx, alice1, alice2, bob):
    state = ALL_BELL_STATES[state_idx]
    d1 = joint_distribution(
        state, JointSetting.in_plane(state.plane, Angle(alice1), Angle(bob))
    )
    d2 = joint_distribution(
        state, JointSetting.in_plane(state.plane, Angle(alice2), Angle(bob))
    )
    assert abs(d1.bob_marginal.p_up - d2.bob_marginal.p_up) <= 1e-12


class TestEnsemble:
    def test_sixty_degrees_eight_trials(self):
        table = build_exact_ensemble(Angle.from_degrees(60.0), 8)
        assert table.bob_up_given_alice_up == 6
        assert table.bob_down_given_alice_up == 2
        assert table.conditional_average() == Fraction(1, 2)

    def test_ninety_degrees_two_trials(self):
        table = build_exact_ensemble(Angle.from_degrees(90.0), 2)
        assert table.bob_up_given_alice_up == 1
        assert table.bob_down_given_alice_up == 1
        assert table.conditional_average() == Fraction(0)

    def test_all_outcomes_are_unit_magnitude(self):
        table = build_exact_ensemble(Angle.from_degrees(60.0), 16)
        assert all(a in (Outcome.UP, Outcome.DOWN) for a, _ in table.trials)
        assert all(b in (Outcome.UP, Outcome.DOWN) for _, b in table.trials)

    def test_incompatible_n_names_minimal_multiple(self):
        with pytest.raises(DomainError, match="multiple of 4"):
            build_exact_ensemble(Angle.from_degrees(60.0), 7)

    def test_irrational_probability_rejected(self):
        with pytest.raises(DomainError, match="rational"):
            build_exact_ensemble(Angle(1.0), 10)

    def test_zero_angle_all_up(self):
        table = build_exact_ensemble(Angle(0.0), 5)
        assert table.bob_up_given_alice_up == 5
        assert table.conditional_average() == Fraction(1)

    def test_average_matches_cosine_exactly_when_rational(self):
        table = build_exact_ensemble(Angle.from_degrees(60.0), 400)
        assert table.conditional_average() == Fraction(1, 2)
        assert float(table.conditional_average()) == 0.5


class TestCHSH:
    def test_classical_enumeration_is_complete_and_integer(self):
        strategies = enumerate_classical_strategies()
        assert len(strategies) == 16
        values = [s for _, s in strategies]
        assert all(isinstance(v, int) for v in values)
        assert all(abs(v) <= 2 for v in values)
        assert max(values) == 2 and min(values) == -2

    def test_classical_max_is_exactly_two(self):
        assert chsh_classical_max() == 2.0

    def test_singlet_standard_settings(self):
        setting = CHSHSetting(
            Angle(0.0),
            Angle.from_degrees(90.0),
            Angle.from_degrees(45.0),
            Angle.from_degrees(135.0),
            ZX_PLANE,
        )
        assert chsh_value(SINGLET, setting) == pytest.approx(-TSIRELSON_BOUND, abs=1e-12)

    def test_triplet_standard_settings(self):
        for state in TRIPLETS:
            setting = CHSHSetting(
                Angle(0.0),
                Angle.from_degrees(90.0),
                Angle.from_degrees(45.0),
                Angle.from_degrees(135.0),
                state.plane,
            )
            assert chsh_value(state, setting) == pytest.approx(TSIRELSON_BOUND, abs=1e-12)

    def test_grid_max_stays_under_quantum_bound(self):
        for state in ALL_BELL_STATES:
            value, setting = chsh_grid_max(state, Angle(math.radians(3.0)))
            assert value <= TSIRELSON_BOUND + 1e-9
            assert chsh_value(state, setting) == pytest.approx(value, abs=1e-12)

    def test_quantum_max_hits_tsirelson(self):
        for state in ALL_BELL_STATES:
            value, setting = chsh_quantum_max(state)
            assert abs(value - TSIRELSON_BOUND) <= 1e-6
            assert chsh_value(state, setting) == pytest.approx(value, abs=1e-12)

    def test_scan_never_exceeds_quantum_bound(self):
        for state in ALL_BELL_STATES:
            points = chsh_scan(state, Angle(math.radians(1.0)))
            assert len(points) == 360
            assert max(abs(s) for _, s in points) <= TSIRELSON_BOUND + 1e-9

    def test_scan_of_triplet_peaks_at_45_degrees(self):
        points = chsh_scan(PHI_PLUS, Angle(math.radians(1.0)))
        by_angle = {round(a.degrees): s for a, s in points}
        assert by_angle[45] == pytest.approx(TSIRELSON_BOUND, abs=1e-12)

    def test_classical_strategies_never_beat_two(self):
        # a local deterministic strategy produces E(a,b) = A(a)B(b)
        for (aa, aap, bb, bbp), s in enumerate_classical_strategies():
            assert s == aa * bb - aa * bbp + aap * bb + aap * bbp
            assert s <= 2
