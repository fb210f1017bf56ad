# %% [markdown]
# # Two-site Hubbard model on two qubits
#
# One electron of each spin on two sites. Qubit 0 holds the site of the
# spin-up electron, qubit 1 the spin-down one, so the Hamiltonian becomes
# -(XI + IX) + (U/2) ZZ.

# %%
import numpy as np

from hubbard_renyi.hubbard import exact_ground_state, exact_r2, qubit_hamiltonian

print(qubit_hamiltonian(2.0))

# %% [markdown]
# At U = 0 the ground state is |++>, a product state with purity 1. For large
# U the electrons avoid each other and the state tends to (|01> + |10>)/sqrt 2,
# which has purity 1/2.

# %%
for U in (0.0, 1.0, 4.0, 10.0, 100.0):
    g = exact_ground_state(U)
    print(f"U={U:6.1f}  E0={g.ground_energy:+.4f}  R2={exact_r2(U):.4f}  psi={np.round(g.ground_state.real, 3)}")

# %%
curve = [(U, exact_r2(U)) for U in np.arange(0, 10.01, 1.0)]
for U, r2 in curve:
    print(f"{U:4.1f} {'#' * int(60 * r2)}")
