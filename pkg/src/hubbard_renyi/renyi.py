"""Second Renyi entropy from an ancilla-controlled swap on two state copies.

Register layout (MSB first): ancilla, A1, B1, A2, B2. The ancilla is
prepared and read out in the X basis around CSwap(ancilla, A1, A2), so
P(anc=0) - P(anc=1) = <Psi|<Psi| Swap_A |Psi>|Psi> = Tr(rho_A^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .adiabatic import TrotterSchedule, build_prep_circuit
from .compiler import DEFAULT_SIGNS, lower_circuit, lower_gate
from .noise import SpamModel, correct_spam, run_noisy
from .simcore import (
    CSwap,
    Circuit,
    H,
    ShotRecord,
    SimulationError,
    StateVector,
    probabilities,
    run_circuit,
)


@dataclass(frozen=True)
class SwapTestLayout:
    ancilla: int = 0
    copy1: tuple[int, int] = (1, 2)
    copy2: tuple[int, int] = (3, 4)

    def __post_init__(self):
        if sorted((self.ancilla, *self.copy1, *self.copy2)) != [0, 1, 2, 3, 4]:
            raise ValueError("layout indices must be a permutation of 0..4")

    @property
    def num_qubits(self) -> int:
        return 5

    @property
    def swapped(self) -> tuple[int, int]:
        """The A qubits of the two copies."""
        return self.copy1[0], self.copy2[0]

    @property
    def data_qubits(self) -> tuple[int, ...]:
        return (*self.copy1, *self.copy2)


STANDARD_LAYOUT = SwapTestLayout()


@dataclass
class R2Estimate:
    r2: float | None
    std_err: float
    p0: float
    p1: float
    yield_fraction: float
    post_selected: bool
    kept_shots: float = math.inf

    @property
    def defined(self) -> bool:
        return self.r2 is not None


def _bit(outcome: int, qubit: int, n: int = 5) -> int:
    return (outcome >> (n - 1 - qubit)) & 1


def zero_weight_set(layout: SwapTestLayout = STANDARD_LAYOUT) -> frozenset[int]:
    """Outcomes an ideal swap test can never produce.

    The ancilla-1 branch is antisymmetric under exchanging the A qubits of
    two identical copies, so it has no weight where the A bits agree or
    where the B bits agree.
    """
    (a1, b1), (a2, b2) = layout.copy1, layout.copy2
    out = set()
    for x in range(32):
        if _bit(x, layout.ancilla) and (_bit(x, a1) == _bit(x, a2) or _bit(x, b1) == _bit(x, b2)):
            out.add(x)
    return frozenset(out)


def measurement_circuit(layout: SwapTestLayout = STANDARD_LAYOUT, final_hadamards: bool = True) -> Circuit:
    anc = layout.ancilla
    c = Circuit(5, [H(anc), CSwap(anc, *layout.swapped), H(anc)])
    if final_hadamards:
        c.extend(H(q) for q in layout.data_qubits)
    return c


def build_swap_test_circuit(schedule: TrotterSchedule, final_hadamards: bool = True,
                            layout: SwapTestLayout = STANDARD_LAYOUT) -> Circuit:
    prep = build_prep_circuit(schedule)
    c = Circuit(5)
    for copy in (layout.copy1, layout.copy2):
        c.extend(g.remap(copy) for g in prep)
    return c + measurement_circuit(layout, final_hadamards)


def two_copy_state(psi, layout: SwapTestLayout = STANDARD_LAYOUT) -> StateVector:
    """Ancilla |0> with ``psi`` loaded on both copies."""
    psi = psi.amplitudes if isinstance(psi, StateVector) else np.asarray(psi, dtype=complex)
    full = np.kron(np.kron(np.array([1, 0], dtype=complex), psi), psi).reshape((2,) * 5)
    # kron order is (anc, A1, B1, A2, B2); move onto the layout's qubits
    order = [layout.ancilla, *layout.copy1, *layout.copy2]
    full = np.moveaxis(full, range(5), order)
    return StateVector(5, full.reshape(-1))


def swap_a_expectation(psi) -> float:
    """<Psi|<Psi| Swap_A |Psi>|Psi> computed by direct index exchange."""
    psi = psi.amplitudes if isinstance(psi, StateVector) else np.asarray(psi, dtype=complex)
    pp = np.einsum("ij,kl->ijkl", psi.reshape(2, 2), psi.reshape(2, 2))  # (A1, B1, A2, B2)
    swapped = np.transpose(pp, (2, 1, 0, 3))
    return float(np.real(np.vdot(pp, swapped)))


def _estimate(probs: np.ndarray, shots: float, post_select: bool, layout: SwapTestLayout) -> R2Estimate:
    probs = np.asarray(probs, dtype=float)
    if probs.size != 32:
        raise SimulationError("a swap-test record needs 5 qubits")
    total = probs.sum()
    if total <= 0:
        raise SimulationError("empty record")
    probs = probs / total
    keep = np.ones(32, dtype=bool)
    if post_select:
        keep[list(zero_weight_set(layout))] = False
    kept = probs * keep
    yield_fraction = float(kept.sum())
    kept_shots = shots * yield_fraction
    if yield_fraction <= 0:
        return R2Estimate(None, math.nan, 0.0, 0.0, 0.0, post_select, 0.0)
    anc = np.array([_bit(x, layout.ancilla) for x in range(32)], dtype=bool)
    p1 = float(kept[anc].sum() / yield_fraction)
    p0 = 1.0 - p1
    r2 = p0 - p1
    std_err = math.sqrt(max(0.0, 1.0 - r2 * r2) / kept_shots) if math.isfinite(kept_shots) else 0.0
    return R2Estimate(r2, std_err, p0, p1, yield_fraction, post_select, kept_shots)


def estimate_r2(record: ShotRecord, post_select: bool = False,
                layout: SwapTestLayout = STANDARD_LAYOUT) -> R2Estimate:
    if record.num_qubits != 5:
        raise SimulationError("a swap-test record needs 5 qubits")
    if record.total_shots == 0:
        raise SimulationError("empty record")
    return _estimate(record.to_array(), record.total_shots, post_select, layout)


def estimate_r2_from_distribution(probs, post_select: bool = False, shots: float = math.inf,
                                  layout: SwapTestLayout = STANDARD_LAYOUT) -> R2Estimate:
    """Estimate from an outcome distribution (exact, or SPAM-corrected data).

    ``shots`` is only used for the standard error; infinite means exact.
    """
    return _estimate(probs, shots, post_select, layout)


def exact_swap_test_probabilities(schedule: TrotterSchedule | None = None, psi=None,
                                  final_hadamards: bool = True,
                                  layout: SwapTestLayout = STANDARD_LAYOUT) -> np.ndarray:
    """Noiseless outcome distribution, from a schedule or from a given 2-qubit state."""
    if (schedule is None) == (psi is None):
        raise ValueError("give exactly one of schedule or psi")
    if schedule is not None:
        state = run_circuit(build_swap_test_circuit(schedule, final_hadamards, layout))
    else:
        state = run_circuit(measurement_circuit(layout, final_hadamards), two_copy_state(psi, layout))
    return probabilities(state)


def run_swap_test(schedule: TrotterSchedule, noise=None, shots: int | None = None, seed: int = 0,
                  final_hadamards: bool = True, spam: SpamModel | None = None,
                  signs=DEFAULT_SIGNS, layout: SwapTestLayout = STANDARD_LAYOUT) -> ShotRecord | np.ndarray:
    """Outcome data for one swap-test experiment.

    Without noise and shots the exact distribution is returned. Otherwise the
    lowered circuit is sampled (with trajectory noise if given), and SPAM
    flips are applied to the record when ``spam`` is set.
    """
    circuit = build_swap_test_circuit(schedule, final_hadamards, layout)
    if noise is None and shots is None:
        return probabilities(run_circuit(circuit))
    from .noise import NoiseModel, apply_spam

    shots = 2500 if shots is None else shots
    run_seed, spam_seed = np.random.SeedSequence(seed).spawn(2)
    native = lower_circuit(circuit, signs).native_circuit
    record = run_noisy(native, noise or NoiseModel(0.0, 0.0), shots, seed=run_seed)
    if spam is not None:
        record = apply_spam(record, spam, seed=spam_seed)
    return record


def analyze_record(record: ShotRecord, spam: SpamModel | None = None,
                   layout: SwapTestLayout = STANDARD_LAYOUT) -> tuple[R2Estimate, R2Estimate]:
    """SPAM-correct (optional) then estimate raw and post-selected R2."""
    if spam is None:
        return estimate_r2(record, False, layout), estimate_r2(record, True, layout)
    probs = correct_spam(record.frequencies(), spam)
    shots = record.total_shots
    return (estimate_r2_from_distribution(probs, False, shots, layout),
            estimate_r2_from_distribution(probs, True, shots, layout))


def cswap_truth_table(noise=None, shots: int = 2000, seed: int = 0, signs=DEFAULT_SIGNS) -> np.ndarray:
    """8x8 table T[input, output] for the lowered C-Swap on (control, t1, t2).

    Noiseless tables are exact probabilities; noisy ones are shot frequencies.
    """
    native = lower_gate(CSwap(0, 1, 2), signs).native_circuit
    table = np.zeros((8, 8))
    children = np.random.SeedSequence(seed).spawn(8)
    for i in range(8):
        start = StateVector.basis(3, i)
        if noise is None:
            table[i] = probabilities(run_circuit(native, start))
        else:
            table[i] = run_noisy(native, noise, shots, seed=children[i], initial_state=start).frequencies()
    return table


IDEAL_CSWAP_OUTPUT = [0, 1, 2, 3, 4, 6, 5, 7]


def truth_table_metrics(table: np.ndarray) -> tuple[float, float]:
    """(average success probability, control-qubit correctness)."""
    success = float(np.mean([table[i, IDEAL_CSWAP_OUTPUT[i]] for i in range(8)]))
    control = float(np.mean([table[i, 4 * (i >> 2):4 * (i >> 2) + 4].sum() for i in range(8)]))
    return success, control


def random_two_qubit_states(n: int, seed: int = 0) -> list[np.ndarray]:
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        v = rng.normal(size=4) + 1j * rng.normal(size=4)
        out.append(v / np.linalg.norm(v))
    return out


BELL = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
