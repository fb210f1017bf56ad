# %% [markdown]
# # Trotter error and circuit depth
#
# epsilon_R2 averages (R2_exact - R2_sim)^2 / R2_exact over U = 0..10.
# Slower ramps (larger tau) reduce the diabatic error roughly as tau^-2, and
# smaller steps reduce the Trotter error. The depth of the circuit
# grows as tau / delta.

# %%
from hubbard_renyi import analysis

tau_pts = analysis.error_scan("eps_r2", "tau", analysis.TAU_GRID, analysis.TAU_SCAN_DELTA)
for p in tau_pts:
    print(f"tau={p.parameter:5.2f} eps_R2={p.value:.3e}")
print("slope", round(analysis.loglog_fit(tau_pts).slope, 2))

# %%
delta_pts = analysis.error_scan("eps_r2", "delta", analysis.DELTA_GRID, analysis.DELTA_SCAN_TAU)
print("eps_R2 vs delta slope", round(analysis.loglog_fit(delta_pts).slope, 2))
psi_pts = analysis.error_scan("eps_psi", "delta", analysis.DELTA_GRID, analysis.DELTA_SCAN_TAU)
print("eps_Psi vs delta slope", round(analysis.loglog_fit(psi_pts).slope, 2))

# %%
depth = analysis.depth_scan("tau", analysis.DEPTH_TAU_GRID, 0.05)
print([int(p.value) for p in depth], "slope", round(analysis.loglog_fit(depth).slope, 3))
