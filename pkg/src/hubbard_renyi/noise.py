"""Stochastic Pauli gate noise and readout (SPAM) error models.

Gate noise is simulated by trajectories: every shot is its own pure state,
and after each native pulse a uniformly random non-identity Pauli hits the
gate's qubits with probability p1 (R gates) or p2 (XX gates). Rz gates are
frame updates and stay noiseless.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .simcore import (
    PAULI,
    Circuit,
    ShotRecord,
    SimulationError,
    StateVector,
    apply_matrix,
    gate_matrix,
)

DEFAULT_P1 = 1 - 0.991
DEFAULT_P2 = 1 - 0.985
DEFAULT_DETECTION_FIDELITY = 0.994
CHUNK_SHOTS = 4096

_PAULI_CYCLE = [PAULI["I"], PAULI["X"], PAULI["Y"], PAULI["Z"]]


@dataclass(frozen=True)
class NoiseModel:
    p1: float = DEFAULT_P1
    p2: float = DEFAULT_P2
    seed: int = 0

    def __post_init__(self):
        for name in ("p1", "p2"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {p}")

    def probability(self, kind: str) -> float:
        if kind == "R":
            return self.p1
        if kind == "XX":
            return self.p2
        return 0.0


@lru_cache(maxsize=4096)
def _embedded_transpose(matrix_key, qubits, num_qubits):
    # Transposed full-register unitary, so a batch of row states updates as psi @ M.
    # Dense matmul beats strided tensor updates for the small registers used here.
    m = np.array(matrix_key, dtype=complex).reshape(2 ** len(qubits), -1)
    return apply_matrix(np.eye(2**num_qubits, dtype=complex), m, qubits, num_qubits)


def _gate_step(gate, num_qubits):
    m = gate_matrix(gate)
    return _embedded_transpose(tuple(m.ravel()), gate.qubits, num_qubits)


def _apply_random_paulis(psi, qubits, num_qubits, hit, rng):
    """Apply a uniform non-identity Pauli on ``qubits`` to the rows in ``hit``."""
    k = len(qubits)
    labels = rng.integers(1, 4**k, size=hit.size)
    for pos, q in enumerate(qubits):
        digit = (labels // 4 ** (k - 1 - pos)) % 4
        for p in (1, 2, 3):
            rows = hit[digit == p]
            if rows.size:
                step = _embedded_transpose(tuple(_PAULI_CYCLE[p].ravel()), (q,), num_qubits)
                psi[rows] = psi[rows] @ step


def _run_chunk(circuit, noise, n_shots, initial, rng):
    n = circuit.num_qubits
    psi = np.tile(initial, (n_shots, 1))
    for g in circuit:
        psi = psi @ _gate_step(g, n)
        p = noise.probability(g.kind)
        if p > 0:
            hit = np.flatnonzero(rng.random(n_shots) < p)
            if hit.size:
                _apply_random_paulis(psi, g.qubits, n, hit, rng)
    probs = np.abs(psi) ** 2
    cdf = np.cumsum(probs, axis=1)
    u = rng.random(n_shots)[:, None] * cdf[:, -1:]
    outcomes = np.minimum((cdf < u).sum(axis=1), 2**n - 1)
    return np.bincount(outcomes, minlength=2**n)


def run_noisy(circuit: Circuit, noise: NoiseModel, n_shots: int, seed=None,
              initial_state: StateVector | None = None) -> ShotRecord:
    """Sample ``n_shots`` noisy trajectories of a native circuit.

    Shots are processed in fixed-size chunks, each with its own child seed
    spawned from ``seed`` (``noise.seed`` when omitted), so the result is a
    deterministic function of the seed.
    """
    if not circuit.is_native:
        bad = sorted({g.kind for g in circuit if not g.is_native})
        raise SimulationError(f"run_noisy needs a lowered circuit; found {bad}")
    if n_shots <= 0:
        raise SimulationError("n_shots must be positive")
    if initial_state is None:
        initial_state = StateVector.zero(circuit.num_qubits)
    if initial_state.num_qubits != circuit.num_qubits:
        raise SimulationError("initial state does not match the circuit register")
    seed = noise.seed if seed is None else seed
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    n_chunks = -(-n_shots // CHUNK_SHOTS)
    counts = np.zeros(2**circuit.num_qubits, dtype=np.int64)
    for i, child in enumerate(ss.spawn(n_chunks)):
        size = min(CHUNK_SHOTS, n_shots - i * CHUNK_SHOTS)
        counts += _run_chunk(circuit, noise, size, initial_state.amplitudes, np.random.default_rng(child))
    return ShotRecord.from_array(counts, circuit.num_qubits)


@dataclass
class SpamModel:
    """Per-qubit confusion matrices C[r, s] = P(read r | true s)."""

    matrices: list[np.ndarray] = field(default_factory=list)

    def __post_init__(self):
        mats = [np.asarray(m, dtype=float) for m in self.matrices]
        for q, m in enumerate(mats):
            if m.shape != (2, 2):
                raise ValueError(f"confusion matrix for qubit {q} is not 2x2")
            if np.any(m < 0) or np.any(m > 1) or not np.allclose(m.sum(axis=0), 1.0, atol=1e-12):
                raise ValueError(f"confusion matrix for qubit {q} is not column-stochastic")
        self.matrices = mats

    @classmethod
    def symmetric(cls, num_qubits: int, fidelity: float = DEFAULT_DETECTION_FIDELITY) -> "SpamModel":
        e = 1.0 - fidelity
        return cls([np.array([[fidelity, e], [e, fidelity]]) for _ in range(num_qubits)])

    @classmethod
    def identity(cls, num_qubits: int) -> "SpamModel":
        return cls.symmetric(num_qubits, 1.0)

    @property
    def num_qubits(self) -> int:
        return len(self.matrices)

    def full_matrix(self) -> np.ndarray:
        out = np.ones((1, 1))
        for m in self.matrices:
            out = np.kron(out, m)
        return out

    def to_json(self) -> str:
        return json.dumps([m.tolist() for m in self.matrices])

    @classmethod
    def from_json(cls, text: str) -> "SpamModel":
        return cls([np.array(m, dtype=float) for m in json.loads(text)])

    @classmethod
    def load(cls, path) -> "SpamModel":
        with open(path) as fh:
            return cls.from_json(fh.read())


def _check_dims(n_entries: int, spam: SpamModel):
    if n_entries != 2**spam.num_qubits:
        raise ValueError(f"{n_entries} outcomes do not match a {spam.num_qubits}-qubit SPAM model")


def apply_spam(data, spam: SpamModel, seed=None):
    """Corrupt readout.

    A probability vector is multiplied by the full confusion matrix. A
    :class:`ShotRecord` is resampled shot by shot, flipping each bit with
    the probability given by that qubit's matrix.
    """
    if isinstance(data, ShotRecord):
        _check_dims(2**data.num_qubits, spam)
        rng = np.random.default_rng(seed)
        n = data.num_qubits
        counts = data.to_array()
        outcomes = np.repeat(np.arange(counts.size), counts)
        bits = (outcomes[:, None] >> (n - 1 - np.arange(n))) & 1
        flip_p = np.stack([1.0 - np.diag(m)[bits[:, q]] for q, m in enumerate(spam.matrices)], axis=1)
        bits = bits ^ (rng.random(bits.shape) < flip_p)
        new = bits @ (1 << (n - 1 - np.arange(n)))
        return ShotRecord.from_array(np.bincount(new, minlength=counts.size), n)
    p = np.asarray(data, dtype=float)
    _check_dims(p.size, spam)
    return spam.full_matrix() @ p


def correct_spam(probs, spam: SpamModel, clip: bool = True) -> np.ndarray:
    """Apply the inverse confusion matrix to an averaged outcome distribution.

    Finite-shot data can leave the probability simplex after inversion;
    with ``clip`` negative entries are zeroed and the result renormalized.
    """
    p = np.asarray(probs, dtype=float)
    _check_dims(p.size, spam)
    if abs(p.sum() - 1.0) > 1e-6 or np.any(p < -1e-6):
        raise ValueError("input is not a probability distribution")
    inv = np.ones((1, 1))
    for m in spam.matrices:
        if abs(np.linalg.det(m)) < 1e-12:
            raise np.linalg.LinAlgError("singular confusion matrix")
        inv = np.kron(inv, np.linalg.inv(m))
    out = inv @ p
    if clip:
        out = np.clip(out, 0.0, None)
        out = out / out.sum()
    return out


def total_variation(p: Sequence[float], q: Sequence[float]) -> float:
    return 0.5 * float(np.abs(np.asarray(p) - np.asarray(q)).sum())
