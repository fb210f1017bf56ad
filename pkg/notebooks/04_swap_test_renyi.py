# %% [markdown]
# # Second Renyi entropy from a swap test
#
# Two copies of the prepared state sit on qubits (1, 2) and (3, 4); the
# ancilla on qubit 0 controls a swap of the A halves (qubits 1 and 3).
# P(ancilla = 0) - P(ancilla = 1) equals Tr(rho_A^2).

# %%
from hubbard_renyi.adiabatic import TrotterSchedule
from hubbard_renyi.hubbard import exact_r2
from hubbard_renyi.renyi import (
    analyze_record,
    estimate_r2_from_distribution,
    exact_swap_test_probabilities,
    run_swap_test,
    zero_weight_set,
)
from hubbard_renyi.noise import NoiseModel

for U in range(1, 6):
    s = TrotterSchedule.method_ii(U)
    r2 = estimate_r2_from_distribution(exact_swap_test_probabilities(s)).r2
    print(f"U={U} theory R2={r2:.4f} exact={exact_r2(U):.4f}")

# %% [markdown]
# With Hadamards on the data qubits, the ancilla = 1 branch is antisymmetric
# under exchanging the copies, so twelve of the 32 outcomes never occur
# without errors. Throwing those shots away removes part of the noise.

# %%
print(sorted(zero_weight_set()))
noise = NoiseModel()
for U in range(1, 6):
    s = TrotterSchedule.method_ii(U)
    raw, post = analyze_record(run_swap_test(s, noise=noise, shots=2500, seed=U))
    print(f"U={U} raw={raw.r2:.3f} post={post.r2:.3f} kept={post.yield_fraction:.2f}")
