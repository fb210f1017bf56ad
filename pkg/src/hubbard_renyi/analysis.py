"""Trotter-error and circuit-depth scaling studies.

Error metrics average over targets U = 0, 0.1, ..., 10. For a given
(delta, tau) every target shares the same sequence of Trotter steps, so a
whole grid costs a single sweep to the largest U.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .adiabatic import TrotterSchedule, build_prep_circuit, evolve_checkpoints
from .compiler import lower_circuit
from .hubbard import exact_ground_state, reduced_purity

DEFAULT_U_GRID = tuple(round(0.1 * k, 10) for k in range(101))

# epsilon_R2 follows tau^-2 only while diabatic error dominates; at
# delta = 0.05 the Trotter floor takes over near tau ~ 8.
TAU_GRID = (0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 5.0)
TAU_SCAN_DELTA = 0.05
# Below delta ~ 0.04 the tau = 10 diabatic floor hides the Trotter scaling.
DELTA_GRID = (0.04, 0.05, 0.08, 0.12, 0.2, 0.3)
DELTA_SCAN_TAU = 10.0

DEPTH_TAU_GRID = (2.0, 3.0, 5.0, 8.0, 12.0, 20.0, 35.0, 50.0)
DEPTH_DELTA_GRID = (0.02, 0.03, 0.05, 0.08, 0.12, 0.2, 0.3)
DEPTH_U_TARGET = 10.0


@dataclass(frozen=True)
class ScalingPoint:
    parameter: float
    value: float


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    r_squared: float

    def to_dict(self) -> dict:
        return {"slope": self.slope, "intercept": self.intercept, "r_squared": self.r_squared}


def step_count(U: float, delta: float, tau: float) -> int:
    return int(round(U * tau / delta))


def trotter_sweep(delta: float, tau: float, grid: Sequence[float] = DEFAULT_U_GRID):
    """Prepared 2-qubit states for every U in ``grid`` (rounded step counts)."""
    steps = [step_count(U, delta, tau) for U in grid]
    states = evolve_checkpoints(delta, tau, steps)
    return [states[n] for n in steps]


def _r2_sim(state, via: str) -> float:
    if via == "purity":
        return reduced_purity(state)
    if via == "swap":
        from .renyi import estimate_r2_from_distribution, exact_swap_test_probabilities

        return estimate_r2_from_distribution(exact_swap_test_probabilities(psi=state)).r2
    raise ValueError(f"unknown R2 route {via!r}")


def r2_errors(delta: float, tau: float, grid: Sequence[float] = DEFAULT_U_GRID, via: str = "purity") -> np.ndarray:
    """Pointwise (R2_exact - R2_sim)^2 / R2_exact over ``grid``."""
    out = []
    for U, state in zip(grid, trotter_sweep(delta, tau, grid)):
        exact = reduced_purity(exact_ground_state(U).ground_state)
        out.append((exact - _r2_sim(state, via)) ** 2 / exact)
    return np.array(out)


def epsilon_r2(delta: float, tau: float, grid: Sequence[float] = DEFAULT_U_GRID, via: str = "purity") -> float:
    return float(np.mean(r2_errors(delta, tau, grid, via)))


def epsilon_psi(delta: float, tau: float, grid: Sequence[float] = DEFAULT_U_GRID) -> float:
    """Mean of 1 - |<exact|sim>|^2 over ``grid``."""
    vals = []
    for U, state in zip(grid, trotter_sweep(delta, tau, grid)):
        g = exact_ground_state(U).ground_state
        vals.append(1.0 - abs(np.vdot(g, state.amplitudes)) ** 2)
    return float(np.mean(vals))


def circuit_depth(delta: float, tau: float, U_target: float = DEPTH_U_TARGET) -> int:
    """Parallel depth of the lowered circuit evolving to ``U_target``."""
    schedule = TrotterSchedule.method_i(U_target, delta, tau, strict=False)
    return lower_circuit(build_prep_circuit(schedule)).depth


def depth_scan(vary: str, values: Iterable[float], fixed: float, U_target: float = DEPTH_U_TARGET) -> list[ScalingPoint]:
    """Depth vs ``tau`` (``fixed`` = delta) or vs ``delta`` (``fixed`` = tau)."""
    if vary == "tau":
        return [ScalingPoint(v, circuit_depth(fixed, v, U_target)) for v in values]
    if vary == "delta":
        return [ScalingPoint(v, circuit_depth(v, fixed, U_target)) for v in values]
    raise ValueError(f"can only vary 'tau' or 'delta', not {vary!r}")


def error_scan(metric: str, vary: str, values: Iterable[float], fixed: float,
               grid: Sequence[float] = DEFAULT_U_GRID) -> list[ScalingPoint]:
    fn = {"eps_r2": epsilon_r2, "eps_psi": epsilon_psi}[metric]
    if vary == "tau":
        return [ScalingPoint(v, fn(fixed, v, grid)) for v in values]
    if vary == "delta":
        return [ScalingPoint(v, fn(v, fixed, grid)) for v in values]
    raise ValueError(f"can only vary 'tau' or 'delta', not {vary!r}")


def loglog_fit(points: Sequence[ScalingPoint]) -> FitResult:
    """Least-squares line through (log parameter, log value)."""
    if len(points) < 3:
        raise ValueError("need at least 3 points for a fit")
    x = np.array([p.parameter for p in points], dtype=float)
    y = np.array([p.value for p in points], dtype=float)
    if np.any(x <= 0) or np.any(y <= 0):
        raise ValueError("log-log fit needs positive parameters and values")
    lx, ly = np.log(x), np.log(y)
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    # a flat line leaves only rounding noise in ss_tot
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 1e-20 else 1.0
    return FitResult(float(slope), float(intercept), min(1.0, max(0.0, r2)))
