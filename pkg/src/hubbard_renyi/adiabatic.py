"""Digitized adiabatic preparation of the Hubbard-dimer ground state.

Each Trotter step m applies exp(i delta X) to both qubits followed by
exp(-i m delta^2/(2 tau) Z1 Z2), i.e. Rx(-2 delta) twice and
Rzz(m delta^2 / tau).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .compiler import DEFAULT_SIGNS, lower_circuit
from .hubbard import exact_ground_state
from .simcore import (
    Circuit,
    H,
    Rx,
    Rzz,
    ShotRecord,
    StateVector,
    apply_gate,
    expectation_pauli,
    run_circuit,
    sample_shots,
)

METHOD_I_DELTA = 0.1
METHOD_I_TAU = 0.1
METHOD_II_DELTA = 0.25
METHOD_II_STEPS = 5
HARDWARE_MAX_STEPS = 6
INTEGRALITY_TOLERANCE = 1e-9


@dataclass(frozen=True)
class TrotterSchedule:
    method: str
    U: float
    delta: float
    tau: float
    n_steps: int

    def __post_init__(self):
        if self.method not in ("I", "II"):
            raise ValueError(f"method must be 'I' or 'II', got {self.method!r}")
        if not self.delta > 0:
            raise ValueError("delta must be positive")
        if not self.tau > 0:
            raise ValueError("tau must be positive")
        if self.n_steps < 0:
            raise ValueError("n_steps must be non-negative")

    @classmethod
    def method_i(cls, U: float, delta: float = METHOD_I_DELTA, tau: float = METHOD_I_TAU,
                 strict: bool = True) -> "TrotterSchedule":
        """Fixed delta and tau; the step count U tau / delta grows with U.

        With ``strict`` the step count must be an integer to within 1e-9;
        otherwise it is rounded to the nearest integer.
        """
        exact = U * tau / delta
        n = int(round(exact))
        if strict and abs(n - exact) > INTEGRALITY_TOLERANCE:
            raise ValueError(f"U*tau/delta = {exact} is not an integer step count")
        return cls("I", float(U), float(delta), float(tau), n)

    @classmethod
    def method_ii(cls, U: float, delta: float = METHOD_II_DELTA,
                  n_steps: int = METHOD_II_STEPS) -> "TrotterSchedule":
        """Fixed step count; tau = n_steps delta / U.

        U = 0 gives tau = inf and zero interaction angles, which is the
        reference sequence used to measure the error offset.
        """
        tau = n_steps * delta / U if U > 0 else math.inf
        return cls("II", float(U), float(delta), tau, int(n_steps))

    @property
    def hardware_feasible(self) -> bool:
        return self.n_steps <= HARDWARE_MAX_STEPS

    def zz_angle(self, m: int) -> float:
        return zz_angle(m, self.delta, self.tau)

    def with_U(self, U: float) -> "TrotterSchedule":
        if self.method == "I":
            return TrotterSchedule.method_i(U, self.delta, self.tau)
        return TrotterSchedule.method_ii(U, self.delta, self.n_steps)


def zz_angle(m: int, delta: float, tau: float) -> float:
    return m * delta * delta / tau


def step_gates(m: int, delta: float, tau: float, qubits: Sequence[int] = (0, 1)) -> list:
    a, b = qubits
    return [Rx(a, -2 * delta), Rx(b, -2 * delta), Rzz(a, b, zz_angle(m, delta, tau))]


def build_prep_circuit(schedule: TrotterSchedule) -> Circuit:
    circuit = Circuit(2, [H(0), H(1)])
    for m in range(1, schedule.n_steps + 1):
        circuit.extend(step_gates(m, schedule.delta, schedule.tau))
    return circuit


def prepare_state(schedule: TrotterSchedule) -> StateVector:
    return run_circuit(build_prep_circuit(schedule))


def evolve_checkpoints(delta: float, tau: float, checkpoints: Iterable[int]) -> dict[int, StateVector]:
    """States after each requested number of Trotter steps, from one sweep.

    The interaction angle of step m does not depend on the target U, so the
    circuits for all targets share a prefix. Results are bitwise identical
    to :func:`prepare_state` for the matching step counts.
    """
    wanted = sorted(set(int(n) for n in checkpoints))
    state = run_circuit(Circuit(2, [H(0), H(1)]))
    out = {}
    m = 0
    for n in wanted:
        while m < n:
            m += 1
            for g in step_gates(m, delta, tau):
                state = apply_gate(state, g)
        out[n] = state
    return out


@dataclass
class EnergyEstimate:
    U: float
    h_expect: float
    x1: float
    x2: float
    z1z2: float
    corrected: float | None = None


def _energy(U, x1, x2, z1z2) -> EnergyEstimate:
    return EnergyEstimate(U=U, h_expect=-(x1 + x2) + 0.5 * U * z1z2, x1=x1, x2=x2, z1z2=z1z2)


def _parity(record: ShotRecord, qubits: Sequence[int]) -> float:
    freqs = record.frequencies()
    idx = np.arange(freqs.size)
    n = record.num_qubits
    sign = np.ones(freqs.size)
    for q in qubits:
        sign *= 1 - 2 * ((idx >> (n - 1 - q)) & 1)
    return float(freqs @ sign)


def energy_from_records(U: float, z_record: ShotRecord, x_record: ShotRecord) -> EnergyEstimate:
    """<H> from a Z-basis record and a record taken after H on both qubits."""
    return _energy(U, _parity(x_record, [0]), _parity(x_record, [1]), _parity(z_record, [0, 1]))


def estimate_energy(schedule: TrotterSchedule, shots: int | None = None, seed: int = 0,
                    noise=None, signs=DEFAULT_SIGNS) -> EnergyEstimate:
    """Estimate <H> = -(<X1> + <X2>) + (U/2) <Z1 Z2> for the prepared state.

    ``shots=None`` without noise gives exact expectation values. With a
    :class:`~hubbard_renyi.noise.NoiseModel` the lowered circuits are run as
    noisy trajectories (2500 shots if ``shots`` is not given).
    """
    U = schedule.U
    prep = build_prep_circuit(schedule)
    if noise is None and shots is None:
        state = run_circuit(prep)
        return _energy(U, expectation_pauli(state, "XI"), expectation_pauli(state, "IX"),
                       expectation_pauli(state, "ZZ"))

    x_circuit = prep + Circuit(2, [H(0), H(1)])
    z_seed, x_seed = np.random.SeedSequence(seed).spawn(2)
    if noise is None:
        z_rec = sample_shots(run_circuit(prep), shots, z_seed)
        x_rec = sample_shots(run_circuit(x_circuit), shots, x_seed)
    else:
        from .noise import run_noisy

        shots = 2500 if shots is None else shots
        z_rec = run_noisy(lower_circuit(prep, signs).native_circuit, noise, shots, seed=z_seed)
        x_rec = run_noisy(lower_circuit(x_circuit, signs).native_circuit, noise, shots, seed=x_seed)
    return energy_from_records(U, z_rec, x_rec)


def theory_energy(schedule: TrotterSchedule) -> float:
    """Noiseless <H> of the Trotterized state (the expected curve, not the exact one)."""
    return estimate_energy(schedule).h_expect


def measure_offset(noise, shots: int = 2500, seed: int = 0, delta: float = METHOD_II_DELTA,
                   n_steps: int = METHOD_II_STEPS, signs=DEFAULT_SIGNS) -> float:
    """Energy error of the Method II gate sequence run at U = 0.

    At U = 0 the ideal result is known exactly (the non-interacting ground
    state), so the measured deviation isolates hardware error.
    """
    ref = TrotterSchedule.method_ii(0.0, delta, n_steps)
    measured = estimate_energy(ref, shots=shots, seed=seed, noise=noise, signs=signs).h_expect
    return measured - theory_energy(ref)


def apply_energy_correction(points: Sequence[tuple[float, float]], method: str,
                            correction_param: float) -> list[tuple[float, float]]:
    """Remove a linear drift (Method I, slope per unit U) or a constant offset (Method II)."""
    if not points:
        raise ValueError("no points to correct")
    if method == "I":
        return [(U, h - correction_param * U) for U, h in points]
    if method == "II":
        return [(U, h - correction_param) for U, h in points]
    raise ValueError(f"method must be 'I' or 'II', got {method!r}")


def ground_overlap(schedule: TrotterSchedule) -> float:
    """|<exact ground|prepared>|^2."""
    g = exact_ground_state(schedule.U).ground_state
    return abs(np.vdot(g, prepare_state(schedule).amplitudes)) ** 2

