# %% [markdown]
# # Controlled swap with XX gates
#
# The trapped-ion native set is R(theta, phi), Rz and the Molmer-Sorensen
# XX(chi). A controlled swap needs seven XX pulses here.

# %%
import numpy as np

from hubbard_renyi.compiler import ALL_SIGNS, lower_gate, unitary_distance
from hubbard_renyi.simcore import CSwap

res = lower_gate(CSwap(0, 1, 2))
for g in res.native_circuit:
    print(g)
print("XX:", res.entangling_count, "rotations:", res.single_qubit_count, "depth:", res.depth)

# %% [markdown]
# Each XX pulse can be calibrated with either sign; the template adapts its
# single-qubit rotations so all eight combinations give the same unitary.

# %%
target = np.eye(8)
target[[5, 6]] = target[[6, 5]]
for signs in ALL_SIGNS:
    print(signs, f"{unitary_distance(lower_gate(CSwap(0, 1, 2), signs).native_circuit.unitary(), target):.1e}")

# %%
from hubbard_renyi.noise import NoiseModel
from hubbard_renyi.renyi import cswap_truth_table, truth_table_metrics

table = cswap_truth_table(NoiseModel(), shots=2000, seed=0)
print(np.round(table, 2))
print("success %.3f, control correct %.3f" % truth_table_metrics(table))
