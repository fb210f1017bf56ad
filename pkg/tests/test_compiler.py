import numpy as np
import pytest

from hubbard_renyi.adiabatic import TrotterSchedule
from hubbard_renyi.compiler import (
    ALL_SIGNS,
    LoweringError,
    ideal_unitary,
    lower_circuit,
    lower_gate,
    parallel_depth,
    unitary_distance,
    verify_lowering,
)
from hubbard_renyi.renyi import build_swap_test_circuit
from hubbard_renyi.simcore import CNOT, XX, Circuit, Gate, H, Rx, Ry, Rz, Rzz, SimulationError, Swap, CSwap


def fredkin_reference():
    u = np.eye(8)
    u[[5, 6]] = u[[6, 5]]
    return u


@pytest.mark.parametrize("signs", ALL_SIGNS)
def test_cswap_template_all_signs(signs):
    res = lower_gate(CSwap(0, 1, 2), signs)
    assert res.entangling_count == 7
    assert res.single_qubit_count == 14
    assert res.native_circuit.is_native
    assert unitary_distance(res.native_circuit.unitary(), fredkin_reference()) < 1e-10


@pytest.mark.parametrize("signs", ALL_SIGNS)
@pytest.mark.parametrize(
    "gate",
    [H(0), Rx(0, 0.37), Ry(0, -1.2), CNOT(0, 1), CNOT(1, 0), Swap(0, 1), Rzz(0, 1, 0.81)],
    ids=repr,
)
def test_logical_gates_lower_exactly(gate, signs):
    assert verify_lowering(gate, signs) < 1e-10


def test_entangling_counts():
    assert lower_gate(CNOT(0, 1)).entangling_count == 1
    assert lower_gate(Rzz(0, 1, 0.3)).entangling_count == 2
    assert lower_gate(Swap(0, 1)).entangling_count == 3
    assert lower_gate(H(0)).entangling_count == 0


def test_native_gates_pass_through():
    g = XX(0, 1, 0.2)
    assert list(lower_gate(g).native_circuit) == [g]


def test_unitary_distance_ignores_global_phase():
    u = fredkin_reference()
    assert unitary_distance(np.exp(0.7j) * u, u) < 1e-15
    assert unitary_distance(np.eye(8), u) > 0.1
    with pytest.raises(ValueError):
        unitary_distance(np.eye(2), np.eye(4))


def test_ideal_unitary_is_literal_fredkin():
    assert np.allclose(ideal_unitary(CSwap(0, 1, 2)), fredkin_reference())


def test_bad_signs_rejected():
    with pytest.raises((LoweringError, SimulationError, ValueError)):
        lower_gate(CSwap(0, 1, 2), (1, 0, 1))


def test_method_ii_full_circuit_entangling_count():
    for U in (1.0, 3.0, 5.0):
        res = lower_circuit(build_swap_test_circuit(TrotterSchedule.method_ii(U)))
        assert res.entangling_count == 27


def test_method_i_entangling_count_grows_with_steps():
    counts = [lower_circuit(build_swap_test_circuit(TrotterSchedule.method_i(U))).entangling_count
              for U in range(7)]
    assert counts == sorted(counts)
    # two copies, 2 XX per Rzz step, plus the 7 of the C-Swap
    assert counts == [7 + 4 * n for n in range(7)]


def test_depth_ignores_rz_and_parallelizes():
    c = Circuit(3, [Rz(0, 1.0), XX(0, 1, 0.1), Rx(2, 0.3), Rz(2, 0.1), XX(1, 2, 0.2)])
    assert parallel_depth(c) == 2
    assert parallel_depth(Circuit(2, [Rz(0, 0.1), Rz(1, 0.2)])) == 0


def test_lowered_circuit_matches_logical():
    c = Circuit(3, [H(0), CSwap(0, 1, 2), Rzz(1, 2, 0.4), Gate("Ry", (2,), (0.2,))])
    res = lower_circuit(c)
    assert unitary_distance(res.native_circuit.unitary(), c.unitary()) < 1e-10
