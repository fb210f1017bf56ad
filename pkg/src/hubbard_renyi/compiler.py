"""Lowering of logical gates to the trapped-ion native set {R, Rz, XX}."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .simcore import Circuit, Gate, R, Rz, SimulationError, XX

PI = np.pi
# Phase offset in the Fredkin template, arcsin(sqrt(2/3)).
FREDKIN_P = float(np.arcsin(np.sqrt(2.0 / 3.0)))

Signs = tuple[int, int, int]
DEFAULT_SIGNS: Signs = (1, 1, 1)
ALL_SIGNS: list[Signs] = list(product((1, -1), repeat=3))


class LoweringError(SimulationError):
    pass


@dataclass
class LoweringResult:
    native_circuit: Circuit
    entangling_count: int
    single_qubit_count: int
    depth: int

    @property
    def rz_count(self) -> int:
        """Rz gates among the single-qubit rotations (applied as phase advances)."""
        return self.native_circuit.count("Rz")

    @classmethod
    def from_circuit(cls, native: Circuit) -> "LoweringResult":
        return cls(
            native_circuit=native,
            entangling_count=native.count("XX"),
            single_qubit_count=native.count("R") + native.count("Rz"),
            depth=parallel_depth(native),
        )


def _rx(q, theta):
    return R(q, theta, 0.0)


def _ry(q, theta):
    return R(q, theta, PI / 2)


def _check_signs(signs):
    if len(signs) != 3 or any(s not in (1, -1) for s in signs):
        raise LoweringError(f"sign parameters must each be +1 or -1, got {signs}")


def _cnot(control: int, target: int, s: int) -> list[Gate]:
    # Mølmer-Sørensen CNOT; s is the sign of the pair's XX angle.
    return [
        _ry(control, PI / 2),
        XX(control, target, s * PI / 4),
        _rx(control, -s * PI / 2),
        _rx(target, -s * PI / 2),
        _ry(control, -PI / 2),
    ]


def _fredkin(c: int, t1: int, t2: int, signs: Signs) -> list[Gate]:
    """Seven-XX controlled swap; alpha, beta, gamma are the XX signs on
    (c, t1), (t1, t2) and (c, t2)."""
    a, b, g = signs
    abg = a * b * g
    P = FREDKIN_P
    return [
        _ry(t2, b * PI / 2),
        XX(t1, t2, b * PI / 4),
        _rx(c, g * PI / 2),
        Rz(t1, -b * PI / 2),
        Rz(t2, -PI / 2),
        Rz(c, -PI / 2),
        _rx(t1, -PI / 4 + (1 - b) * PI / 4),
        _rx(t2, -b * PI / 2 + PI / 4),
        XX(t1, t2, b * PI / 8),
        XX(c, t2, g * PI / 8),
        R(c, -2 * PI / 3, (g + 1) / 2 * PI - P),
        XX(c, t1, a * PI / 4),
        R(c, -abg * 2 * PI / 3, (a * b + 1) / 2 * PI - abg * P),
        XX(c, t2, g * PI / 8),
        R(c, PI, -abg * PI / 4),
        XX(c, t1, a * PI / 4),
        Rz(t1, -b * PI / 2),
        _ry(t2, b * PI / 2),
        XX(t1, t2, b * PI / 4),
        _ry(t2, -b * PI / 2),
        Rz(t2, -PI / 2),
    ]


def lower_gates(gate: Gate, signs: Signs = DEFAULT_SIGNS) -> list[Gate]:
    """Native gate list for ``gate``.

    Two-qubit logical gates use ``signs[0]`` as their XX sign; CSwap uses all
    three.
    """
    _check_signs(signs)
    k, q = gate.kind, gate.qubits
    if gate.is_native:
        return [gate]
    if k == "Rx":
        return [_rx(q[0], gate.params[0])]
    if k == "Ry":
        return [_ry(q[0], gate.params[0])]
    if k == "H":
        return [Rz(q[0], PI), _ry(q[0], PI / 2)]
    if k == "CNOT":
        return _cnot(q[0], q[1], signs[0])
    if k == "Rzz":
        return [*_cnot(q[0], q[1], signs[0]), Rz(q[1], gate.params[0]), *_cnot(q[0], q[1], signs[0])]
    if k == "Swap":
        i, j = q
        return [*_cnot(i, j, signs[0]), *_cnot(j, i, signs[0]), *_cnot(i, j, signs[0])]
    if k == "CSwap":
        return _fredkin(q[0], q[1], q[2], signs)
    raise LoweringError(f"cannot lower gate kind {k!r}")


def lower_gate(gate: Gate, signs: Signs = DEFAULT_SIGNS) -> LoweringResult:
    n = max(gate.qubits) + 1
    return LoweringResult.from_circuit(Circuit(n, lower_gates(gate, signs)))


def lower_circuit(circuit: Circuit, signs: Signs = DEFAULT_SIGNS) -> LoweringResult:
    native = Circuit(circuit.num_qubits)
    for g in circuit:
        native.extend(lower_gates(g, signs))
    return LoweringResult.from_circuit(native)


def unitary_distance(u: np.ndarray, v: np.ndarray) -> float:
    """1 - |Tr(U^dag V)| / dim; zero exactly when U and V differ by a global phase."""
    u = np.asarray(u)
    v = np.asarray(v)
    if u.shape != v.shape or u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise LoweringError(f"dimension mismatch: {u.shape} vs {v.shape}")
    dim = u.shape[0]
    return max(0.0, 1.0 - abs(np.trace(u.conj().T @ v)) / dim)


def phase_aligned_deviation(u: np.ndarray, v: np.ndarray) -> float:
    """Max entry deviation between U and V after removing the best global phase."""
    tr = np.trace(u.conj().T @ v)
    phase = tr / abs(tr) if abs(tr) > 0 else 1.0
    return float(np.max(np.abs(u * phase - v)))


def ideal_unitary(gate: Gate) -> np.ndarray:
    """Dense unitary of ``gate`` embedded on qubits 0..max(qubits)."""
    n = max(gate.qubits) + 1
    return Circuit(n, [gate]).unitary()


def verify_lowering(gate: Gate, signs: Signs = DEFAULT_SIGNS) -> float:
    """Phase-aligned max deviation between the lowered and ideal unitary."""
    native = lower_gate(gate, signs).native_circuit
    return phase_aligned_deviation(native.unitary(), ideal_unitary(gate))


def parallel_depth(circuit: Circuit) -> int:
    """Greedy layer count, with Rz treated as free (a frame update, not a pulse)."""
    frontier = [0] * circuit.num_qubits
    depth = 0
    for g in circuit:
        if g.kind == "Rz":
            continue
        layer = max(frontier[q] for q in g.qubits) + 1
        for q in g.qubits:
            frontier[q] = layer
        depth = max(depth, layer)
    return depth

