"""Two-site Fermi-Hubbard model in the two-qubit first-quantized encoding.

Basis states |00>, |01>, |10>, |11> are the Slater determinants
{1up 1dn}, {1up 2dn}, {2up 1dn}, {2up 2dn}; qubit 0 carries the spin-up
electron's site, qubit 1 the spin-down electron's. Energies are in units of
the hopping t.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .simcore import PAULI, StateVector

_I, _X, _Z = PAULI["I"], PAULI["X"], PAULI["Z"]

DEGENERACY_GAP = 1e-10


class DegenerateGroundStateError(ValueError):
    pass


@dataclass(frozen=True)
class HubbardParams:
    U: float
    t: float = 1.0

    def __post_init__(self):
        if self.t != 1.0:
            raise ValueError("energies are measured in units of t; t must be 1")


@dataclass
class SpectralResult:
    eigenvalues: np.ndarray
    ground_state: np.ndarray
    ground_energy: float


def _params(p) -> HubbardParams:
    return p if isinstance(p, HubbardParams) else HubbardParams(float(p))


def qubit_hamiltonian(params: HubbardParams | float) -> np.ndarray:
    """-(X(x)I + I(x)X) + (U/2) Z(x)Z as a real symmetric 4x4 matrix."""
    U = _params(params).U
    h = -(np.kron(_X, _I) + np.kron(_I, _X)) + 0.5 * U * np.kron(_Z, _Z)
    return h.real.copy()


def determinant_hamiltonian(params: HubbardParams | float) -> np.ndarray:
    """Hamiltonian in the Slater-determinant basis; equals the qubit form plus U/2."""
    U = _params(params).U
    t = 1.0
    return np.array(
        [
            [U, -t, -t, 0],
            [-t, 0, 0, -t],
            [-t, 0, 0, -t],
            [0, -t, -t, U],
        ],
        dtype=float,
    )


def exact_ground_state(params: HubbardParams | float) -> SpectralResult:
    h = qubit_hamiltonian(params)
    w, v = np.linalg.eigh(h)
    if w[1] - w[0] < DEGENERACY_GAP:
        raise DegenerateGroundStateError(f"ground level is degenerate (gap {w[1] - w[0]:.3e})")
    g = v[:, 0].astype(complex)
    lead = g[np.flatnonzero(np.abs(g) > 1e-12)[0]]
    g = g * (abs(lead) / lead)
    return SpectralResult(eigenvalues=w, ground_state=g, ground_energy=float(w[0]))


def ground_energy_closed_form(U: float) -> float:
    """Lowest eigenvalue of the qubit Hamiltonian, -sqrt(U^2 + 16) / 2."""
    return -0.5 * np.sqrt(U * U + 16.0)


def determinant_ground_energy(U: float) -> float:
    """Lowest eigenvalue of the determinant-basis matrix, (U - sqrt(U^2 + 16)) / 2."""
    return 0.5 * (U - np.sqrt(U * U + 16.0))


def reduced_density_matrix(state) -> np.ndarray:
    """rho_A for a two-qubit pure state, tracing out qubit 1 (subsystem B)."""
    psi = state.amplitudes if isinstance(state, StateVector) else np.asarray(state, dtype=complex)
    m = psi.reshape(2, 2)
    return m @ m.conj().T


def reduced_purity(state) -> float:
    rho = reduced_density_matrix(state)
    return float(np.real(np.trace(rho @ rho)))


def exact_r2(params: HubbardParams | float) -> float:
    return reduced_purity(exact_ground_state(params).ground_state)


def exact_curve(U_values) -> list[tuple[float, float, float]]:
    """(U, R2_exact, E_exact) rows."""
    return [(float(U), exact_r2(U), exact_ground_state(U).ground_energy) for U in U_values]


def exact_curve_csv(U_values) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["U", "R2_exact", "E_exact"])
    for row in exact_curve(U_values):
        w.writerow([repr(x) for x in row])
    return buf.getvalue()
