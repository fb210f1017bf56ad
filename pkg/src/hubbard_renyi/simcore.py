"""Dense state-vector simulation of small qubit registers.

Basis indices are MSB-first: qubit 0 is the most significant bit, so on a
5-qubit register the outcome ``10000`` (decimal 16) has only qubit 0 set.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

MAX_QUBITS = 20
NORM_TOLERANCE = 1e-9

NATIVE_KINDS = frozenset({"R", "Rz", "XX"})
LOGICAL_KINDS = frozenset({"H", "CNOT", "Swap", "CSwap", "Rx", "Ry", "Rzz"})
ENTANGLING_KINDS = frozenset({"XX", "CNOT", "Swap", "CSwap", "Rzz"})

# kind -> (number of qubits, number of angle parameters)
_ARITY = {
    "R": (1, 2),
    "Rz": (1, 1),
    "Rx": (1, 1),
    "Ry": (1, 1),
    "H": (1, 0),
    "XX": (2, 1),
    "CNOT": (2, 0),
    "Swap": (2, 0),
    "Rzz": (2, 1),
    "CSwap": (3, 0),
}

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


class SimulationError(ValueError):
    """Invalid gate, register or state."""


@dataclass(frozen=True)
class Gate:
    """A single gate instance.

    ``params`` holds angles in radians: ``(theta, phi)`` for R, ``(theta,)``
    for the other rotations, ``(chi,)`` for XX, and nothing for H, CNOT, Swap
    and CSwap.
    """

    kind: str
    qubits: tuple[int, ...]
    params: tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind not in _ARITY:
            raise SimulationError(f"unknown gate kind {self.kind!r}")
        nq, npar = _ARITY[self.kind]
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        if len(self.qubits) != nq:
            raise SimulationError(f"{self.kind} acts on {nq} qubit(s), got {self.qubits}")
        if len(self.params) != npar:
            raise SimulationError(f"{self.kind} takes {npar} parameter(s), got {self.params}")
        if len(set(self.qubits)) != len(self.qubits):
            raise SimulationError(f"duplicate qubit indices in {self.kind}{self.qubits}")
        if any(q < 0 for q in self.qubits):
            raise SimulationError(f"negative qubit index in {self.kind}{self.qubits}")

    @property
    def is_native(self) -> bool:
        return self.kind in NATIVE_KINDS

    @property
    def is_entangling(self) -> bool:
        return self.kind in ENTANGLING_KINDS

    def matrix(self) -> np.ndarray:
        return gate_matrix(self)

    def inverse(self) -> "Gate":
        if self.kind == "R":
            theta, phi = self.params
            return Gate("R", self.qubits, (-theta, phi))
        if self.params:
            return Gate(self.kind, self.qubits, tuple(-p for p in self.params))
        return self  # H, CNOT, Swap, CSwap are involutions

    def remap(self, mapping: Sequence[int] | dict) -> "Gate":
        return Gate(self.kind, tuple(mapping[q] for q in self.qubits), self.params)

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "qubits": list(self.qubits)}
        if self.kind == "R":
            d["theta"], d["phi"] = self.params
        elif self.params:
            d["angle"] = self.params[0]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Gate":
        kind = d["kind"]
        if kind == "R":
            params = (d["theta"], d["phi"])
        elif "angle" in d:
            params = (d["angle"],)
        else:
            params = ()
        return cls(kind, tuple(d["qubits"]), params)

    def __repr__(self):
        args = ", ".join([*(str(q) for q in self.qubits), *(f"{p:.6g}" for p in self.params)])
        return f"{self.kind}({args})"


# Constructors, named after the gates.

def R(q: int, theta: float, phi: float) -> Gate:
    return Gate("R", (q,), (theta, phi))


def Rz(q: int, theta: float) -> Gate:
    return Gate("Rz", (q,), (theta,))


def Rx(q: int, theta: float) -> Gate:
    return Gate("Rx", (q,), (theta,))


def Ry(q: int, theta: float) -> Gate:
    return Gate("Ry", (q,), (theta,))


def H(q: int) -> Gate:
    return Gate("H", (q,))


def XX(i: int, j: int, chi: float) -> Gate:
    return Gate("XX", (i, j), (chi,))


def CNOT(control: int, target: int) -> Gate:
    return Gate("CNOT", (control, target))


def Swap(i: int, j: int) -> Gate:
    return Gate("Swap", (i, j))


def Rzz(i: int, j: int, theta: float) -> Gate:
    return Gate("Rzz", (i, j), (theta,))


def CSwap(control: int, i: int, j: int) -> Gate:
    return Gate("CSwap", (control, i, j))


def gate_matrix(gate: Gate) -> np.ndarray:
    """Unitary of ``gate`` on its own qubits, first listed qubit most significant.

    Conventions: Rx(t) = exp(-i t X/2) and likewise Ry, Rz; R(t, p) rotates by
    t about cos(p) X + sin(p) Y; XX(chi) = exp(-i chi X(x)X);
    Rzz(t) = exp(-i t Z(x)Z / 2).
    """
    k = gate.kind
    if k == "R":
        theta, phi = gate.params
        c, s = np.cos(theta / 2), np.sin(theta / 2)
        return np.array(
            [[c, -1j * np.exp(-1j * phi) * s], [-1j * np.exp(1j * phi) * s, c]], dtype=complex
        )
    if k == "Rx":
        return gate_matrix(R(0, gate.params[0], 0.0))
    if k == "Ry":
        return gate_matrix(R(0, gate.params[0], np.pi / 2))
    if k == "Rz":
        t = gate.params[0]
        return np.diag([np.exp(-0.5j * t), np.exp(0.5j * t)])
    if k == "H":
        return np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
    if k == "XX":
        chi = gate.params[0]
        return np.cos(chi) * np.eye(4, dtype=complex) - 1j * np.sin(chi) * np.kron(PAULI["X"], PAULI["X"])
    if k == "Rzz":
        t = gate.params[0]
        return np.diag(np.exp(-0.5j * t * np.array([1, -1, -1, 1])))
    if k == "CNOT":
        return np.eye(4, dtype=complex)[[0, 1, 3, 2]]
    if k == "Swap":
        return np.eye(4, dtype=complex)[[0, 2, 1, 3]]
    if k == "CSwap":
        return np.eye(8, dtype=complex)[[0, 1, 2, 3, 4, 6, 5, 7]]
    raise SimulationError(f"no matrix for gate kind {k!r}")


def apply_matrix(amplitudes: np.ndarray, matrix: np.ndarray, qubits: Sequence[int], num_qubits: int) -> np.ndarray:
    """Apply ``matrix`` to ``qubits`` of a (possibly batched) amplitude array.

    ``amplitudes`` has shape ``(..., 2**num_qubits)``; leading axes are treated
    as independent states.
    """
    k = len(qubits)
    batch = amplitudes.shape[:-1]
    nb = len(batch)
    t = amplitudes.reshape(batch + (2,) * num_qubits)
    axes = [nb + q for q in qubits]
    t = np.moveaxis(t, axes, range(nb + num_qubits - k, nb + num_qubits))
    moved_shape = t.shape
    t = t.reshape(moved_shape[: nb + num_qubits - k] + (2**k,)) @ matrix.T
    t = np.moveaxis(t.reshape(moved_shape), range(nb + num_qubits - k, nb + num_qubits), axes)
    return t.reshape(batch + (2**num_qubits,))


def _check_qubits(qubits: Iterable[int], num_qubits: int):
    for q in qubits:
        if not 0 <= q < num_qubits:
            raise SimulationError(f"qubit index {q} out of range for {num_qubits}-qubit register")


@dataclass
class StateVector:
    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if not 1 <= self.num_qubits <= MAX_QUBITS:
            raise SimulationError(f"register size must be in 1..{MAX_QUBITS}, got {self.num_qubits}")
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if self.amplitudes.size != 2**self.num_qubits:
            raise SimulationError(
                f"expected {2 ** self.num_qubits} amplitudes, got {self.amplitudes.size}"
            )

    @classmethod
    def zero(cls, num_qubits: int) -> "StateVector":
        amps = np.zeros(2**num_qubits, dtype=complex)
        amps[0] = 1.0
        return cls(num_qubits, amps)

    @classmethod
    def basis(cls, num_qubits: int, index: int | str) -> "StateVector":
        if isinstance(index, str):
            if len(index) != num_qubits:
                raise SimulationError(f"bitstring {index!r} does not have {num_qubits} bits")
            index = int(index, 2)
        amps = np.zeros(2**num_qubits, dtype=complex)
        amps[index] = 1.0
        return cls(num_qubits, amps)

    @classmethod
    def from_amplitudes(cls, amplitudes) -> "StateVector":
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        n = int(round(np.log2(amps.size)))
        return cls(n, amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def copy(self) -> "StateVector":
        return StateVector(self.num_qubits, self.amplitudes.copy())

    def tensor(self, other: "StateVector") -> "StateVector":
        return StateVector(self.num_qubits + other.num_qubits, np.kron(self.amplitudes, other.amplitudes))

    def overlap(self, other: "StateVector") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))


def apply_gate(state: StateVector, gate: Gate) -> StateVector:
    """Return ``U_gate |state>`` as a new state.

    Raises if the gate does not fit the register or if the norm drifts by
    more than ``NORM_TOLERANCE``; no silent renormalization is done.
    """
    _check_qubits(gate.qubits, state.num_qubits)
    out = apply_matrix(state.amplitudes, gate_matrix(gate), gate.qubits, state.num_qubits)
    drift = abs(np.linalg.norm(out) - np.linalg.norm(state.amplitudes))
    if drift > NORM_TOLERANCE:
        raise SimulationError(f"norm drift {drift:.3e} after {gate!r}")
    return StateVector(state.num_qubits, out)


@dataclass
class Circuit:
    num_qubits: int
    gates: list[Gate] = field(default_factory=list)

    def __post_init__(self):
        if self.num_qubits < 1:
            raise SimulationError("a circuit needs at least one qubit")
        self.gates = list(self.gates)
        for g in self.gates:
            _check_qubits(g.qubits, self.num_qubits)

    def append(self, gate: Gate) -> "Circuit":
        _check_qubits(gate.qubits, self.num_qubits)
        self.gates.append(gate)
        return self

    def extend(self, gates: Iterable[Gate]) -> "Circuit":
        for g in gates:
            self.append(g)
        return self

    def __len__(self):
        return len(self.gates)

    def __iter__(self) -> Iterator[Gate]:
        return iter(self.gates)

    def __add__(self, other: "Circuit") -> "Circuit":
        if other.num_qubits != self.num_qubits:
            raise SimulationError("cannot concatenate circuits on different registers")
        return Circuit(self.num_qubits, self.gates + other.gates)

    def remap(self, mapping: Sequence[int], num_qubits: int) -> "Circuit":
        """Relabel qubit q as ``mapping[q]`` on a register of ``num_qubits``."""
        return Circuit(num_qubits, [g.remap(mapping) for g in self.gates])

    @property
    def is_native(self) -> bool:
        return all(g.is_native for g in self.gates)

    @property
    def entangling_count(self) -> int:
        return sum(g.is_entangling for g in self.gates)

    def count(self, kind: str) -> int:
        return sum(g.kind == kind for g in self.gates)

    def layers(self) -> list[list[Gate]]:
        """Greedy earliest-layer partition into sets of gates on disjoint qubits."""
        frontier = [0] * self.num_qubits
        layers: list[list[Gate]] = []
        for g in self.gates:
            idx = max(frontier[q] for q in g.qubits)
            if idx == len(layers):
                layers.append([])
            layers[idx].append(g)
            for q in g.qubits:
                frontier[q] = idx + 1
        return layers

    def unitary(self) -> np.ndarray:
        dim = 2**self.num_qubits
        u = np.eye(dim, dtype=complex)
        for g in self.gates:
            u = apply_matrix(u.T, gate_matrix(g), g.qubits, self.num_qubits).T
        return u

    def inverse(self) -> "Circuit":
        return Circuit(self.num_qubits, [g.inverse() for g in reversed(self.gates)])

    def to_jsonl(self) -> str:
        return "".join(json.dumps(g.to_dict()) + "\n" for g in self.gates)

    @classmethod
    def from_jsonl(cls, text: str, num_qubits: int | None = None) -> "Circuit":
        gates = [Gate.from_dict(json.loads(line)) for line in text.splitlines() if line.strip()]
        if num_qubits is None:
            num_qubits = 1 + max((q for g in gates for q in g.qubits), default=0)
        return cls(num_qubits, gates)


def run_circuit(circuit: Circuit, state: StateVector | None = None) -> StateVector:
    if state is None:
        state = StateVector.zero(circuit.num_qubits)
    if state.num_qubits != circuit.num_qubits:
        raise SimulationError("state and circuit registers differ")
    for g in circuit:
        state = apply_gate(state, g)
    return state


def probabilities(state: StateVector) -> np.ndarray:
    return np.abs(state.amplitudes) ** 2


def bitstring(index: int, num_qubits: int) -> str:
    return format(index, f"0{num_qubits}b")


@dataclass
class ShotRecord:
    """Histogram of measured bitstrings (MSB-first, qubit 0 leftmost)."""

    num_qubits: int
    counts: dict[str, int]

    def __post_init__(self):
        clean = {}
        for key, value in self.counts.items():
            if len(key) != self.num_qubits or set(key) - {"0", "1"}:
                raise SimulationError(f"outcome {key!r} is not a {self.num_qubits}-bit string")
            if int(value) < 0:
                raise SimulationError(f"negative count for outcome {key!r}")
            if int(value):
                clean[key] = clean.get(key, 0) + int(value)
        self.counts = dict(sorted(clean.items()))

    @property
    def total_shots(self) -> int:
        return sum(self.counts.values())

    def to_array(self) -> np.ndarray:
        arr = np.zeros(2**self.num_qubits, dtype=np.int64)
        for key, value in self.counts.items():
            arr[int(key, 2)] = value
        return arr

    @classmethod
    def from_array(cls, counts, num_qubits: int | None = None) -> "ShotRecord":
        counts = np.asarray(counts)
        if num_qubits is None:
            num_qubits = int(round(np.log2(counts.size)))
        return cls(num_qubits, {bitstring(i, num_qubits): int(c) for i, c in enumerate(counts) if c})

    def frequencies(self) -> np.ndarray:
        total = self.total_shots
        if total == 0:
            raise SimulationError("empty shot record")
        return self.to_array() / total

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["outcome", "count"])
        for key, value in self.counts.items():
            writer.writerow([key, value])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, num_qubits: int | None = None) -> "ShotRecord":
        rows = [line for line in text.splitlines() if line.strip() and not line.startswith("#")]
        reader = csv.DictReader(rows)
        if reader.fieldnames != ["outcome", "count"]:
            raise SimulationError(f"expected header 'outcome,count', got {reader.fieldnames}")
        counts = {}
        for row in reader:
            counts[row["outcome"].strip()] = int(row["count"])
        if num_qubits is None:
            if not counts:
                raise SimulationError("cannot infer register size from an empty CSV record")
            num_qubits = len(next(iter(counts)))
        return cls(num_qubits, counts)

    def to_json(self) -> str:
        return json.dumps({"num_qubits": self.num_qubits, "counts": self.counts})

    @classmethod
    def from_json(cls, text: str) -> "ShotRecord":
        obj = json.loads(text)
        return cls(int(obj["num_qubits"]), {k: int(v) for k, v in obj["counts"].items()})

    @classmethod
    def load(cls, path) -> "ShotRecord":
        with open(path) as fh:
            text = fh.read()
        if text.lstrip().startswith("{"):
            return cls.from_json(text)
        return cls.from_csv(text)


def sample_shots(state: StateVector, n_shots: int, seed: int) -> ShotRecord:
    """Multinomial draw of ``n_shots`` computational-basis outcomes."""
    if n_shots <= 0:
        raise SimulationError("n_shots must be positive")
    p = probabilities(state)
    rng = np.random.default_rng(seed)
    counts = rng.multinomial(n_shots, p / p.sum())
    return ShotRecord.from_array(counts, state.num_qubits)


def pauli_operator(label: str) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for ch in label:
        out = np.kron(out, PAULI[ch])
    return out


def expectation_pauli(state: StateVector, label: str) -> float:
    """<state| P |state> for a Pauli string such as ``"XI"`` or ``"ZZ"``."""
    label = label.upper()
    if len(label) != state.num_qubits or set(label) - set("IXYZ"):
        raise SimulationError(f"malformed Pauli label {label!r} for {state.num_qubits} qubits")
    psi = state.amplitudes
    for q, ch in enumerate(label):
        if ch != "I":
            psi = apply_matrix(psi, PAULI[ch], (q,), state.num_qubits)
    value = np.vdot(state.amplitudes, psi)
    if abs(value.imag) > 1e-10:
        raise SimulationError(f"non-real Pauli expectation {value}")
    return float(value.real)
