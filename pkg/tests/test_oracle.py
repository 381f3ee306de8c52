import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings, strategies as st

from bellswitch.elements import SwitchSettings, apply_switch
from bellswitch.oracle import (
    DOUBLE_HH,
    PAIR_OCCUPATIONS,
    FockBasis,
    FockState,
    PumpedHamiltonian,
    TruncationError,
    default_scaling_base,
    embed,
    error_scaling_study,
    propagate_exact,
    truncation_leakage,
    validate_switch,
)
from bellswitch.state import BellLabel, PairState, RectLabel, bell_vector, make_downconversion_state


def taylor_propagate(matrix, vec, t, terms=60):
    """Independent route: partial sums of exp(-iHt) v until the terms vanish."""
    out = vec.astype(np.complex128).copy()
    term = out.copy()
    for k in range(1, terms):
        term = (-1j * t / k) * (matrix @ term)
        out += term
        if np.max(np.abs(term)) < 1e-300:
            break
    return out


def random_fock_state(basis, rng, scale=1.0):
    amps = rng.normal(size=basis.dim) + 1j * rng.normal(size=basis.dim)
    return FockState(basis, scale * amps / np.linalg.norm(amps))


class TestBasis:
    @pytest.mark.parametrize("n_max", [0, 1, 2, 3])
    def test_dimension(self, n_max):
        assert FockBasis(n_max).dim == (n_max + 1) ** 4

    def test_lexicographic_and_stable(self):
        b = FockBasis(2)
        assert list(b.states) == sorted(b.states)
        assert b.states[0] == (0, 0, 0, 0) and b.states[1] == (0, 0, 0, 1)
        assert FockBasis(2).states == b.states

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            FockBasis(-1)


class TestHamiltonian:
    @pytest.mark.parametrize("kappa", [0.3, 0.2 - 0.7j, 1j])
    def test_hermitian(self, kappa):
        h = PumpedHamiltonian(kappa, FockBasis(2))
        assert h.is_hermitian(1e-12)

    def test_selection_rule(self):
        b = FockBasis(2)
        h = PumpedHamiltonian(0.4 + 0.1j, b)
        rows, cols = np.nonzero(h.matrix)
        for i, j in zip(rows, cols):
            d = np.subtract(b.states[i], b.states[j])
            assert tuple(d) in {(1, 0, 1, 0), (-1, 0, -1, 0)}

    def test_matrix_elements(self):
        b = FockBasis(3)
        kappa = 0.3 + 0.2j
        h = PumpedHamiltonian(kappa, b).matrix
        i, j = b.index[(2, 1, 3, 0)], b.index[(1, 1, 2, 0)]
        assert h[i, j] == pytest.approx(kappa * math.sqrt(2 * 3))
        assert h[j, i] == pytest.approx(np.conj(kappa) * math.sqrt(6))

    def test_for_injection(self):
        mu = 0.01 - 0.02j
        h = PumpedHamiltonian.for_injection(mu, FockBasis(1))
        assert -1j * h.kappa == pytest.approx(mu)


class TestEmbed:
    def test_hh(self):
        b = FockBasis(2)
        f = embed(make_downconversion_state(0.1, (1, 0, 0, 0)), b)
        assert f.amp((0, 0, 0, 0)) == 1
        assert f.amp((1, 0, 1, 0)) == pytest.approx(0.1)
        assert np.count_nonzero(f.amplitudes) == 2

    def test_vacuum(self):
        f = embed(PairState.vacuum(), FockBasis(1))
        assert f.amp((0, 0, 0, 0)) == 1 and f.norm_sq == 1

    def test_singlet(self):
        eps = 0.1
        f = embed(make_downconversion_state(eps, bell_vector(BellLabel.PSI_MINUS)), FockBasis(2))
        # psi- has HV component -1/sqrt2 and VH component +1/sqrt2
        assert f.amp((1, 0, 0, 1)) == pytest.approx(-eps / math.sqrt(2))
        assert f.amp((0, 1, 1, 0)) == pytest.approx(eps / math.sqrt(2))
        assert f.amp((1, 0, 1, 0)) == 0 and f.amp((0, 1, 0, 1)) == 0

    def test_needs_room_for_a_pair(self):
        with pytest.raises(ValueError):
            embed(PairState.vacuum(), FockBasis(0))

    def test_round_trip(self):
        s = make_downconversion_state(0.2, (0.1, -0.3j, 0.5, 0.7))
        back = embed(s, FockBasis(2)).to_pair_state()
        assert back.vacuum_amp == s.vacuum_amp
        np.testing.assert_array_equal(back.pair_amps, s.pair_amps)


class TestPropagation:
    def test_zero_time_identity(self):
        b = FockBasis(2)
        f = random_fock_state(b, np.random.default_rng(1))
        out = propagate_exact(f, PumpedHamiltonian(0.3, b), 0.0)
        np.testing.assert_array_equal(out.amplitudes, f.amplitudes)

    def test_vacuum_first_order_term(self):
        mu = 0.001
        b = FockBasis(3)
        out = propagate_exact(embed(PairState.vacuum(), b), PumpedHamiltonian.for_injection(mu, b), 1.0)
        assert abs(out.amp((1, 0, 1, 0)) - mu) <= 5e-7
        # second-order double pair: (-iHt)^2/2 |0> -> mu^2 * sqrt(1*1*2*2)/2 |2020> = mu^2
        assert out.amp(DOUBLE_HH) == pytest.approx(mu ** 2, rel=1e-5)

    @pytest.mark.parametrize("seed", range(5))
    def test_unitary_on_random_states(self, seed):
        rng = np.random.default_rng(seed)
        b = FockBasis(2)
        f = random_fock_state(b, rng)
        h = PumpedHamiltonian(rng.normal() + 1j * rng.normal(), b)
        out = propagate_exact(f, h, 0.7, leakage_tol=None)
        assert out.norm_sq == pytest.approx(f.norm_sq, abs=1e-10)

    @pytest.mark.parametrize("kappa, t", [(0.3, 1.0), (0.05 - 0.2j, 2.5), (1j, 0.1)])
    def test_against_taylor_series_and_scipy(self, kappa, t):
        b = FockBasis(3)
        rng = np.random.default_rng(7)
        f = random_fock_state(b, rng)
        h = PumpedHamiltonian(kappa, b)
        ours = propagate_exact(f, h, t, leakage_tol=None).amplitudes
        taylor = taylor_propagate(h.matrix, f.amplitudes, t)
        expm = scipy.linalg.expm(-1j * t * np.asarray(h.matrix)) @ f.amplitudes
        np.testing.assert_allclose(ours, taylor, rtol=0, atol=1e-12)
        np.testing.assert_allclose(ours, expm, rtol=0, atol=1e-12)

    def test_h_parity_conserved(self):
        b = FockBasis(2)
        s = make_downconversion_state(0.01, (0.3, 0.5, -0.4j, 0.2))
        out = propagate_exact(embed(s, b), PumpedHamiltonian.for_injection(0.01, b), 1.0)
        for occ, a in zip(b.states, out.amplitudes):
            if occ[0] - occ[2] != embed_difference(occ):
                assert abs(a) <= 1e-12

    def test_equal_h_occupations_stay_equal(self):
        b = FockBasis(2)
        s = make_downconversion_state(0.01, (0.6, 0, 0, 0.8))
        out = propagate_exact(embed(s, b), PumpedHamiltonian.for_injection(-0.012, b), 1.0)
        for occ, a in zip(b.states, out.amplitudes):
            if occ[0] != occ[2]:
                assert abs(a) <= 1e-12

    def test_v_modes_are_spectators(self):
        b = FockBasis(2)
        s = make_downconversion_state(0.01, (0.3, 0.5, -0.4j, 0.2))
        out = propagate_exact(embed(s, b), PumpedHamiltonian.for_injection(0.01j, b), 1.0)
        before = v_marginal(embed(s, b))
        after = v_marginal(out)
        for key in set(before) | set(after):
            assert after.get(key, 0) == pytest.approx(before.get(key, 0), abs=1e-12)

    def test_truncation_error(self):
        b = FockBasis(2)
        with pytest.raises(TruncationError, match="increase n_max"):
            propagate_exact(embed(PairState.vacuum(), b), PumpedHamiltonian.for_injection(0.5, b), 1.0)

    def test_leakage_small_in_weak_regime(self):
        b = FockBasis(2)
        f = embed(make_downconversion_state(1e-2, (0.5, 0.5, 0.5, 0.5)), b)
        assert truncation_leakage(f, PumpedHamiltonian.for_injection(-1e-2, b), 1.0) < 1e-7

    def test_basis_mismatch(self):
        with pytest.raises(ValueError):
            propagate_exact(embed(PairState.vacuum(), FockBasis(2)),
                            PumpedHamiltonian(0.1, FockBasis(3)), 1.0)


def embed_difference(occ):
    # Starting states have n1H - n2H equal to (1-1)=0, (1-0)=1 or (0-1)=-1 depending
    # on the V occupation: HV pairs give +1 (V in mode 2), VH pairs give -1.
    return occ[3] - occ[1]


def v_marginal(f: FockState) -> dict:
    out = {}
    for occ, a in zip(f.basis.states, f.amplitudes):
        key = (occ[1], occ[3])
        out[key] = out.get(key, 0.0) + abs(a) ** 2
    return out


class TestValidateSwitch:
    def test_zero_mu_exact(self):
        s = make_downconversion_state(1e-3, (1, 0, 0, 0))
        assert validate_switch(s, 0).max_deviation == 0

    def test_pi_condition_small(self):
        r = validate_switch(make_downconversion_state(1e-3, (1, 0, 0, 0)), -2e-3, 2)
        assert r.max_deviation <= 1e-5
        assert r.norm_error <= 1e-10

    def test_report_fields(self):
        s = make_downconversion_state(1e-2, (0.5, 0.5, 0.5, 0.5))
        r = validate_switch(s, 3e-3)
        assert set(r.pair_deviations) == {"vacuum", "HH", "HV", "VH", "VV"}
        first = apply_switch(s, SwitchSettings(3e-3))
        assert r.first_order.to_pair_state().pair_amps == pytest.approx(first.pair_amps)
        # exact HH double pair to second order: 2*mu*a_HH + mu^2
        assert r.double_pair_amp == pytest.approx(2 * 3e-3 * 5e-3 + 9e-6, rel=1e-3)
        # vacuum moves by -conj(mu) a_HH - |mu|^2/2 to second order
        assert r.vacuum_depletion == pytest.approx(abs(-3e-3 * 5e-3 - 4.5e-6), rel=1e-3)

    def test_needs_nmax_2(self):
        with pytest.raises(TruncationError, match="increase n_max"):
            validate_switch(PairState.vacuum(), 0.01, 1)

    def test_decade_ratio(self):
        base, mu = make_downconversion_state(1e-2, (0.3, 0.5j, -0.2, 0.7)), 1e-2 + 5e-3j
        small = PairState(1, base.pair_amps / 10)
        ratio = validate_switch(base, mu).max_deviation / validate_switch(small, mu / 10).max_deviation
        assert 50 <= ratio <= 200

    def test_pi_condition_pure_hh_is_third_order(self):
        # At mu = -2 eps alpha on a pure HH input the second-order vacuum and double-pair
        # terms cancel, leaving a cubic error.
        s = make_downconversion_state(1e-3, (1, 0, 0, 0))
        d1 = validate_switch(s, -2e-3).max_deviation
        d2 = validate_switch(PairState(1, s.pair_amps / 10), -2e-4).max_deviation
        assert 500 <= d1 / d2 <= 2000

    @pytest.mark.parametrize("scale", [1e-2, 3e-3, 1e-3])
    def test_truncation_insensitive(self, scale):
        base, mu = default_scaling_base()
        s = PairState(1, scale * base.pair_amps)
        r2 = validate_switch(s, scale * mu, 2)
        r3 = validate_switch(s, scale * mu, 3)
        for key in r2.pair_deviations:
            assert abs(r2.pair_deviations[key] - r3.pair_deviations[key]) < 1e-9
        assert r3.max_deviation == pytest.approx(r2.max_deviation, rel=1e-3)


class TestScalingStudy:
    def test_exponent_two(self):
        study = error_scaling_study([1e-2, 1e-3, 1e-4])
        assert 1.8 <= study.exponent <= 2.2
        assert study.within()
        assert len(study.rows()) == 3

    def test_single_scale(self):
        with pytest.raises(ValueError, match="need >= 2 points"):
            error_scaling_study([1e-3])

    def test_zero_mu_exact(self):
        study = error_scaling_study([1e-2, 1e-3], PairState(1, [0.5] * 4), 0)
        assert study.exact and study.exponent is None
        assert all(d == 0 for d in study.deviations)

    @pytest.mark.parametrize("scales", [[1e-3, 1e-2], [1e-2, -1e-3], [1e-2, 1e-2]])
    def test_bad_scales(self, scales):
        with pytest.raises(ValueError):
            error_scaling_study(scales)

    @settings(max_examples=10, deadline=None)
    @given(st.complex_numbers(min_magnitude=0.2, max_magnitude=1.0, allow_nan=False, allow_infinity=False),
           st.sampled_from([RectLabel.HV, RectLabel.VH]))
    def test_exponent_two_with_spectator_pairs(self, mu, spectator):
        base = PairState(1, np.eye(4)[spectator] * 0.7 + np.eye(4)[0] * 0.3)
        study = error_scaling_study([1e-2, 1e-3, 1e-4], base, mu)
        assert 1.8 <= study.exponent <= 2.2


def test_pair_occupations_cover_rect_labels():
    assert set(PAIR_OCCUPATIONS) == set(RectLabel)
    for occ in PAIR_OCCUPATIONS.values():
        assert occ[0] + occ[1] == 1 and occ[2] + occ[3] == 1
