"""Threshold root-finding, curve scans, the max-entropy locus, and the
nonsymmetric-state search.

Four named curves describe Eve's information as a function of the noise:

==========  =====================================================
honest      c22 = -(1-ε), forced when full tomography is possible
maxent      c22 = -(1-ε)², the entropy-maximizing state
minconc     feasibility-clipped minimizer of |c22| (best raw-data attack)
hsw         collective-readout bound along the max-entropy locus
==========  =====================================================
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import NoFeasibleSample, NoSignChange, NotPositive, OutOfRange
from .infotheory import (
    hsw_optimal,
    mi_alice_bob,
    mi_eve_analytic,
    mi_eve_optimal,
    optimal_c22,
)
from .linalg import von_neumann_entropy
from .povm import OptimizerConfig, optimize_povm
from .states import (
    FamilyPoint,
    bell_diagonal_state,
    conditioned_ancilla_from_state,
    general_state,
)

MAX_BISECTIONS = 64


@dataclass(frozen=True)
class CurveId:
    """A named c22 rule; ``hsw`` swaps in the collective-readout functional."""

    tag: str
    c22_rule: Callable[[float], float]


def _honest_c22(epsilon: float) -> float:
    return -(1 - epsilon)


def _maxent_c22(epsilon: float) -> float:
    return -((1 - epsilon) ** 2)


CURVES = {
    "honest": CurveId("honest", _honest_c22),
    "maxent": CurveId("maxent", _maxent_c22),
    "minconc": CurveId("minconc", optimal_c22),
    "hsw": CurveId("hsw", _maxent_c22),
}


def eve_curve(curve: str, epsilon: float) -> float:
    """Eve's information along a named curve, for ε in the plot range [0, 1/2]."""
    if curve not in CURVES:
        raise ValueError(f"unknown curve {curve!r}; expected one of {sorted(CURVES)}")
    if not 0.0 <= epsilon <= 0.5:
        raise OutOfRange(f"epsilon={epsilon} outside [0, 1/2]")
    if curve == "hsw":
        return hsw_optimal(epsilon)
    return mi_eve_analytic(CURVES[curve].c22_rule(epsilon))


@dataclass(frozen=True)
class ThresholdResult:
    curve: str
    epsilon_star: float
    residual: float
    iterations: int

    @property
    def qber(self) -> float:
        return self.epsilon_star / 2


def bisect_sign_change(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tolerance: float,
    max_iterations: int = MAX_BISECTIONS,
) -> tuple[float, float, int]:
    """Bisection on a sign change of ``f`` over [lo, hi].

    Returns (root, |f(root)|, iterations).  The bracket is validated before
    iterating; ``NoSignChange`` is raised if both ends share a sign.
    Bisection is used deliberately: the information curves have divergent
    slope near the branch points and robustness beats speed here.
    """
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo, 0.0, 0
    if fhi == 0.0:
        return hi, 0.0, 0
    if np.sign(flo) == np.sign(fhi):
        raise NoSignChange(
            f"f({lo})={flo:.3e} and f({hi})={fhi:.3e} have the same sign"
        )
    mid, fmid, it = lo, flo, 0
    for it in range(1, max_iterations + 1):
        mid = 0.5 * (lo + hi)
        fmid = f(mid)
        if abs(fmid) <= tolerance:
            break
        if np.sign(fmid) == np.sign(flo):
            lo, flo = mid, fmid
        else:
            hi = mid
    return mid, abs(fmid), it


def find_threshold(curve: str, tolerance: float = 1e-9) -> ThresholdResult:
    """Noise value where Alice-Bob information crosses Eve's curve."""
    if tolerance < 1e-12:
        raise OutOfRange(f"tolerance={tolerance} below 1e-12")

    def gap(epsilon: float) -> float:
        return mi_alice_bob(epsilon) - eve_curve(curve, epsilon)

    root, residual, iterations = bisect_sign_change(gap, 0.0, 0.5, tolerance)
    return ThresholdResult(
        curve=curve, epsilon_star=root, residual=residual, iterations=iterations
    )


def max_entropy_c22(epsilon: float) -> float:
    """Numerically maximize the state entropy over the feasible c22 interval."""
    if not 0.0 <= epsilon <= 1.0:
        raise OutOfRange(f"epsilon={epsilon} outside [0, 1]")
    lo, hi = -1.0, 2 * epsilon - 1
    if hi - lo < 1e-9:
        return -1.0

    def neg_entropy(c22: float) -> float:
        return -von_neumann_entropy(bell_diagonal_state(FamilyPoint(epsilon, c22)))

    res = minimize_scalar(
        neg_entropy, bounds=(lo, hi), method="bounded", options={"xatol": 1e-10}
    )
    return float(res.x)


class ScanRow(NamedTuple):
    epsilon: float
    i_ab: float
    i_honest: float
    i_maxent: float
    i_minconc: float
    i_hsw: float


def scan_curves(grid) -> list[ScanRow]:
    """Evaluate all five information curves on an ε grid within [0, 1/2]."""
    rows = []
    for epsilon in grid:
        epsilon = float(epsilon)
        rows.append(
            ScanRow(
                epsilon=epsilon,
                i_ab=mi_alice_bob(epsilon),
                i_honest=eve_curve("honest", epsilon),
                i_maxent=eve_curve("maxent", epsilon),
                i_minconc=eve_curve("minconc", epsilon),
                i_hsw=eve_curve("hsw", epsilon),
            )
        )
    return rows


@dataclass(frozen=True)
class SearchReport:
    """Outcome of the random search over nonsymmetric states.

    ``best_value`` is evidence, not proof: samples within 1e-6 of the
    symmetric optimum are counted in ``near_optimum_count`` but no
    conclusion is drawn from them.
    """

    epsilon: float
    trials: int
    accepted: int
    best_value: float
    best_parameters: tuple[float, ...]
    symmetric_optimum: float
    seed: int
    near_optimum_count: int


_SEVEN = ("c02", "c20", "c12", "c21", "c22", "c23", "c32")


def nonsymmetric_search(
    epsilon: float,
    trials: int,
    seed: int,
    optimizer: OptimizerConfig | None = None,
) -> SearchReport:
    """Search the seven hidden coefficients for an advantage over the
    symmetric family.

    Trial 0 probes the symmetric optimum itself; the rest alternate between
    uniform draws on [-1, 1]^7 and local Gaussian perturbations around the
    symmetric optimum, rejecting unphysical draws.  Every accepted state is
    purified, conditioned on Alice's outcomes, and handed to the POVM
    optimizer; the best value found is reported against the symmetric
    optimum.
    """
    if not 0.0 <= epsilon <= 1.0:
        raise OutOfRange(f"epsilon={epsilon} outside [0, 1]")
    if trials < 1:
        raise OutOfRange(f"trials={trials} must be >= 1")

    center = np.zeros(7)
    center[4] = optimal_c22(epsilon)
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    symmetric = mi_eve_optimal(epsilon)
    base_cfg = optimizer or OptimizerConfig(restarts=4, max_iterations=300)

    accepted = 0
    best_value = -np.inf
    best_parameters = tuple(center)
    near_optimum = 0

    for trial in range(trials):
        if trial == 0:
            draw = center.copy()
        elif trial % 2:
            draw = np.clip(center + rng.normal(scale=0.05, size=7), -1.0, 1.0)
        else:
            draw = rng.uniform(-1.0, 1.0, size=7)
        try:
            rho = general_state(epsilon, *draw)
        except NotPositive:
            continue
        accepted += 1
        ensemble = conditioned_ancilla_from_state(rho)
        cfg = OptimizerConfig(
            restarts=base_cfg.restarts,
            max_iterations=base_cfg.max_iterations,
            step_tolerance=base_cfg.step_tolerance,
            seed=int(rng.integers(2**63)),
            outcome_budget=base_cfg.outcome_budget,
        )
        result = optimize_povm(ensemble, cfg)
        if result.info > best_value:
            best_value = result.info
            best_parameters = tuple(float(v) for v in draw)
        if abs(result.info - symmetric) <= 1e-6:
            near_optimum += 1

    if accepted == 0:
        raise NoFeasibleSample(
            f"no physical state found in {trials} draws at epsilon={epsilon}"
        )
    return SearchReport(
        epsilon=epsilon,
        trials=trials,
        accepted=accepted,
        best_value=float(best_value),
        best_parameters=best_parameters,
        symmetric_optimum=symmetric,
        seed=seed,
        near_optimum_count=near_optimum,
    )
