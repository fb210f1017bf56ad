"""State-vector simulation of adiabatic state preparation and swap-test
Renyi-entropy measurement for the two-site Hubbard model on trapped ions."""

from .adiabatic import TrotterSchedule, estimate_energy, prepare_state
from .compiler import lower_circuit, lower_gate
from .hubbard import exact_ground_state, exact_r2, qubit_hamiltonian
from .noise import NoiseModel, SpamModel, apply_spam, correct_spam, run_noisy
from .renyi import R2Estimate, build_swap_test_circuit, estimate_r2, run_swap_test
from .simcore import Circuit, Gate, ShotRecord, StateVector, run_circuit

__version__ = "0.1.0"
