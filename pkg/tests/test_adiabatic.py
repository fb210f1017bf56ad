import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from hubbard_renyi import adiabatic as ad
from hubbard_renyi.adiabatic import TrotterSchedule
from hubbard_renyi.hubbard import exact_ground_state
from hubbard_renyi.noise import NoiseModel
from hubbard_renyi.simcore import PAULI, ShotRecord

X, Z, I2 = PAULI["X"], PAULI["Z"], PAULI["I"]
XI, IX, ZZ = np.kron(X, I2), np.kron(I2, X), np.kron(Z, Z)


def trotter_oracle(n_steps, delta, tau):
    # Independent route: matrix exponentials of the hopping and interaction terms.
    psi = np.full(4, 0.5, dtype=complex)
    for m in range(1, n_steps + 1):
        psi = expm(1j * delta * (XI + IX)) @ psi
        psi = expm(-0.5j * m * delta**2 / tau * ZZ) @ psi
    return psi


@pytest.mark.parametrize("U", [0, 1, 2, 3, 4, 5, 6])
def test_method_i_matches_expm_oracle(U):
    s = TrotterSchedule.method_i(U)
    got = ad.prepare_state(s).amplitudes
    assert np.allclose(got, trotter_oracle(s.n_steps, s.delta, s.tau), atol=1e-12)


@pytest.mark.parametrize("U", [1, 2.5, 5])
def test_method_ii_matches_expm_oracle(U):
    s = TrotterSchedule.method_ii(U)
    assert np.allclose(ad.prepare_state(s).amplitudes, trotter_oracle(5, 0.25, 1.25 / U), atol=1e-12)


def test_presets():
    s = TrotterSchedule.method_i(6)
    assert (s.delta, s.tau, s.n_steps) == (0.1, 0.1, 6)
    assert s.hardware_feasible
    assert not TrotterSchedule.method_i(7).hardware_feasible
    s = TrotterSchedule.method_ii(5)
    assert s.n_steps == 5 and s.tau == pytest.approx(0.25)
    assert [s.zz_angle(m) for m in range(1, 6)] == pytest.approx([0.25 * m for m in range(1, 6)])


def test_method_i_at_zero_is_just_hadamards():
    c = ad.build_prep_circuit(TrotterSchedule.method_i(0))
    assert [g.kind for g in c] == ["H", "H"]


@given(n=st.integers(0, 30))
def test_gate_count_is_two_plus_three_per_step(n):
    s = TrotterSchedule("I", 1.0, 0.1, 0.1, n)
    assert len(ad.build_prep_circuit(s)) == 2 + 3 * n


def test_non_integer_steps_rejected_for_presets():
    with pytest.raises(ValueError):
        TrotterSchedule.method_i(2.55)
    assert TrotterSchedule.method_i(2.55, strict=False).n_steps == 3


def test_invalid_schedules():
    with pytest.raises(ValueError):
        TrotterSchedule("III", 1, 0.1, 0.1, 1)
    with pytest.raises(ValueError):
        TrotterSchedule("I", 1, 0.0, 0.1, 1)
    with pytest.raises(ValueError):
        TrotterSchedule.method_i(-1)


def test_method_ii_at_zero_is_reference_sequence():
    s = TrotterSchedule.method_ii(0.0)
    assert s.tau == np.inf and s.n_steps == 5
    assert all(s.zz_angle(m) == 0 for m in range(1, 6))


@given(steps=st.lists(st.integers(0, 40), min_size=1, max_size=6))
@settings(max_examples=30)
def test_checkpoints_bitwise_equal_to_direct(steps):
    delta, tau = 0.07, 0.9
    states = ad.evolve_checkpoints(delta, tau, steps)
    for n in steps:
        direct = ad.prepare_state(TrotterSchedule("I", 1.0, delta, tau, n))
        assert np.array_equal(states[n].amplitudes, direct.amplitudes)


def test_slow_sweep_reaches_ground_state():
    s = TrotterSchedule.method_i(4.0, delta=0.02, tau=20.0)
    assert ad.ground_overlap(s) > 0.999


def test_energy_at_zero_is_minus_two():
    assert ad.estimate_energy(TrotterSchedule.method_i(0)).h_expect == pytest.approx(-2.0, abs=1e-10)
    assert ad.theory_energy(TrotterSchedule.method_ii(0.0)) == pytest.approx(-2.0, abs=1e-10)


@pytest.mark.parametrize("U", [1.0, 3.0, 5.0])
def test_exact_energy_matches_direct_expectation(U):
    s = TrotterSchedule.method_ii(U)
    psi = ad.prepare_state(s).amplitudes
    h = -(XI + IX) + 0.5 * U * ZZ
    assert ad.theory_energy(s) == pytest.approx(float(np.real(psi.conj() @ h @ psi)), abs=1e-12)
    assert ad.theory_energy(s) >= exact_ground_state(U).ground_energy - 1e-12


def test_energy_from_records():
    # |++> measured in Z: uniform; after H on both: all in 00
    z = ShotRecord(2, {"00": 25, "01": 25, "10": 25, "11": 25})
    x = ShotRecord(2, {"00": 100})
    e = ad.energy_from_records(2.0, z, x)
    assert (e.x1, e.x2, e.z1z2) == (1.0, 1.0, 0.0)
    assert e.h_expect == -2.0
    z = ShotRecord(2, {"01": 30, "10": 10})
    assert ad.energy_from_records(1.0, z, x).z1z2 == -1.0


def test_shot_estimates_are_seeded():
    s = TrotterSchedule.method_ii(3.0)
    a = ad.estimate_energy(s, shots=2000, seed=5)
    assert a == ad.estimate_energy(s, shots=2000, seed=5)
    assert abs(a.h_expect - ad.theory_energy(s)) < 0.2


def test_noisy_offset_correction_reduces_error():
    noise = NoiseModel()
    offset = ad.measure_offset(noise, shots=2500, seed=11)
    assert offset > 0
    schedules = [TrotterSchedule.method_ii(U) for U in (1, 2, 3, 4, 5)]
    raw = [(s.U, ad.estimate_energy(s, shots=2500, seed=i, noise=noise).h_expect) for i, s in enumerate(schedules)]
    fixed = ad.apply_energy_correction(raw, "II", offset)
    theory = [ad.theory_energy(s) for s in schedules]
    err_raw = np.mean([abs(h - t) for (_, h), t in zip(raw, theory)])
    err_fixed = np.mean([abs(h - t) for (_, h), t in zip(fixed, theory)])
    assert err_fixed < err_raw


def test_linear_correction_is_bit_exact():
    pts = [(0.0, -1.9), (1.0, -1.95), (2.5, -2.3)]
    out = ad.apply_energy_correction(pts, "I", 0.063)
    assert out == [(U, h - 0.063 * U) for U, h in pts]
    with pytest.raises(ValueError):
        ad.apply_energy_correction([], "I", 0.063)
    with pytest.raises(ValueError):
        ad.apply_energy_correction(pts, "III", 0.063)
