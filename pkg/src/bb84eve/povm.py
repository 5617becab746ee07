"""Measurements: the analytic optimum, its degenerate variants, evaluation,
and an independent numerical optimizer.

The analytic measurement is written in the orthonormal ancilla basis, where
ancilla ket j is √w_j times basis vector j.  In the interior of the feasible
region its four kets are orthonormal (a von Neumann measurement); on the
boundary, vanishing-weight components are dropped and the remaining dyads
still resolve the identity on the ensemble's support.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, OutOfRange
from .infotheory import mutual_information
from .states import (
    AncillaEnsemble,
    FamilyPoint,
    ZERO_WEIGHT,
    bell_weights,
    require_feasible,
)

POSITIVITY_TOL = 1e-10
COMPLETENESS_TOL = 1e-9


@dataclass(frozen=True)
class Povm:
    """A positive operator-valued measure: elements plus outcome labels."""

    elements: tuple[np.ndarray, ...]
    labels: tuple[str, ...]

    @property
    def dim(self) -> int:
        return self.elements[0].shape[0]

    def total(self) -> np.ndarray:
        out = np.zeros_like(self.elements[0])
        for el in self.elements:
            out = out + el
        return out


def validate_povm(povm: Povm, support: np.ndarray | None = None) -> None:
    """Check positivity of every element and completeness on ``support``.

    ``support`` defaults to the full identity; pass the projector onto a
    subspace for measurements defined only there.
    """
    if len(povm.elements) != len(povm.labels):
        raise DimensionMismatch("one label per element required")
    for label, el in zip(povm.labels, povm.elements):
        smallest = float(np.linalg.eigvalsh((el + el.conj().T) / 2)[0])
        if smallest < -POSITIVITY_TOL:
            raise ValueError(
                f"element {label} has negative eigenvalue {smallest:.3e}"
            )
    target = np.eye(povm.dim) if support is None else support
    defect = float(np.max(np.abs(povm.total() - target)))
    if defect > COMPLETENESS_TOL:
        raise ValueError(f"elements sum to identity only within {defect:.3e}")


def analytic_povm(point: FamilyPoint) -> Povm:
    """The measurement that attains Eve's accessible information.

    Four rank-one dyads built from kets with components
    (1/2, ±√(w1/(1-c22)), ∓i/2, ∓i√(w3/(1-c22))) along the ancilla axes.
    Components whose weight vanishes (boundary points) are set to zero;
    should the surviving dyads still leave a gap on the ensemble support
    (only possible at the fully degenerate corner c22 = 1), the gap is
    filled with basis projectors.
    """
    require_feasible(point)
    w = bell_weights(point)
    alive = w > ZERO_WEIGHT
    one_minus = 1.0 - point.c22
    h1 = 0.5 if alive[0] else 0.0
    h3 = 0.5 if alive[2] else 0.0
    sa = np.sqrt(w[0] / one_minus) if alive[0] and alive[1] else 0.0
    sb = np.sqrt(w[2] / one_minus) if alive[2] and alive[3] else 0.0
    kets = np.array(
        [
            [h1, sa, -1j * h3, -1j * sb],
            [h1, -sa, -1j * h3, 1j * sb],
            [h1, 1j * sb, 1j * h3, -sa],
            [h1, -1j * sb, 1j * h3, sa],
        ],
        dtype=complex,
    )
    elements = [np.outer(k, k.conj()) for k in kets]
    labels = ["P1", "P2", "P3", "P4"]

    support = np.diag(alive.astype(complex))
    defect = support - sum(elements)
    if np.max(np.abs(defect)) > ZERO_WEIGHT:
        gap, basis = np.linalg.eigh((defect + defect.conj().T) / 2)
        for idx in np.nonzero(gap > ZERO_WEIGHT)[0]:
            v = basis[:, idx]
            elements.append(gap[idx] * np.outer(v, v.conj()))
            labels.append(f"pad{idx}")

    keep = [i for i, el in enumerate(elements) if np.trace(el).real > 1e-14]
    out = Povm(
        elements=tuple(elements[i] for i in keep),
        labels=tuple(labels[i] for i in keep),
    )
    validate_povm(out, support=support)
    return out


def accessible_info(ensemble: AncillaEnsemble, m: Povm) -> float:
    """Mutual information between the ensemble label and the outcome of ``m``."""
    if m.dim != ensemble.states[0].shape[0]:
        raise DimensionMismatch(
            f"POVM dimension {m.dim} does not match states of shape "
            f"{ensemble.states[0].shape}"
        )
    states = np.stack(ensemble.states)
    elements = np.stack(m.elements)
    cond = np.einsum("aij,kji->ak", states, elements).real
    joint = ensemble.priors[:, None] * np.clip(cond, 0.0, None)
    return mutual_information(joint)


def conjugate_povm(m: Povm) -> Povm:
    """Entrywise complex conjugate; an involution, valid whenever ``m`` is."""
    return Povm(
        elements=tuple(el.conj() for el in m.elements),
        labels=m.labels,
    )


def convex_combine(m1: Povm, m2: Povm, weight: float) -> Povm:
    """Outcome-wise mixture weight·m1 + (1-weight)·m2."""
    if not 0.0 <= weight <= 1.0:
        raise OutOfRange(f"weight={weight} outside [0, 1]")
    if len(m1.elements) != len(m2.elements) or m1.dim != m2.dim:
        raise DimensionMismatch("POVMs must share outcome count and dimension")
    return Povm(
        elements=tuple(
            weight * a + (1 - weight) * b
            for a, b in zip(m1.elements, m2.elements)
        ),
        labels=m1.labels,
    )


def canonical_optimal_povm(point: FamilyPoint) -> Povm:
    """Equal-weight mix of the analytic measurement and its conjugate.

    All optima along that segment give the same information; the midpoint
    has real elements and is the reproducible representative.
    """
    m = analytic_povm(point)
    return convex_combine(m, conjugate_povm(m), 0.5)


@dataclass(frozen=True)
class OptimizerConfig:
    """Knobs for the numerical search; defaults suit four-state ensembles."""

    restarts: int = 8
    max_iterations: int = 500
    step_tolerance: float = 1e-10
    seed: int = 0
    outcome_budget: int = 16


@dataclass(frozen=True)
class OptimizeResult:
    povm: Povm
    info: float
    restart_values: tuple[float, ...]
    iterations: int


def _random_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def _random_start(rng: np.random.Generator, n: int, d: int) -> np.ndarray:
    """n kets from stacked random-unitary columns; their dyads sum to identity."""
    blocks = []
    while sum(b.shape[0] for b in blocks) < n:
        blocks.append(_random_unitary(rng, d).T)
    kets = np.concatenate(blocks)[:n]
    return kets / np.sqrt(n / d)


def _kets_from_povm(m: Povm, n: int, d: int) -> np.ndarray:
    """Decompose POVM elements into at most n rank-one kets, zero-padded."""
    kets = []
    for el in m.elements:
        lam, vec = np.linalg.eigh((el + el.conj().T) / 2)
        for i in np.nonzero(lam > 1e-14)[0]:
            kets.append(np.sqrt(lam[i]) * vec[:, i])
    if len(kets) > n:
        raise OutOfRange(
            f"seed POVM needs {len(kets)} kets, budget is {n}"
        )
    out = np.zeros((n, d), dtype=complex)
    for i, k in enumerate(kets):
        out[i] = k
    return out


def _retract(kets: np.ndarray) -> np.ndarray:
    """Rescale ket batches so each batch's dyads sum to the identity."""
    grams = np.einsum("rki,rkj->rij", kets, kets.conj())
    lam, vec = np.linalg.eigh(grams)
    inv_sqrt = np.einsum(
        "rij,rj,rkj->rik", vec, 1.0 / np.sqrt(np.clip(lam, 1e-14, None)), vec.conj()
    )
    return np.einsum("rij,rkj->rki", inv_sqrt, kets)


def _batch_info_and_ratios(
    kets: np.ndarray, states: np.ndarray, priors: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Per-restart accessible information and log-likelihood-ratio table."""
    cond = np.einsum("rki,aij,rkj->rak", kets.conj(), states, kets).real
    cond = np.clip(cond, 0.0, None)
    joint = priors[None, :, None] * cond
    outcome = joint.sum(axis=1)  # (R, K)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(
            joint > 0.0,
            np.log2(cond) - np.log2(outcome[:, None, :]),
            0.0,
        )
    values = (joint * ratios).sum(axis=(1, 2))
    return values, ratios


def _ascend(
    kets: np.ndarray,
    states: np.ndarray,
    priors: np.ndarray,
    max_iterations: int,
    step_tolerance: float,
) -> tuple[np.ndarray, np.ndarray, int]:
    """Monotone projected gradient ascent on a batch of ket sets.

    Returns the best kets and value seen per batch entry plus the number
    of iterations spent.  Step sizes adapt by accept/reject, so recorded
    values never decrease.
    """
    values, ratios = _batch_info_and_ratios(kets, states, priors)
    best_values = values.copy()
    best_kets = kets.copy()
    eta = np.full(kets.shape[0], 0.25)
    stalled = np.zeros(kets.shape[0], dtype=int)
    iterations = 0

    for iterations in range(1, max_iterations + 1):
        grad = np.einsum(
            "rak,aij,rkj->rki", priors[None, :, None] * ratios, states, kets
        )
        trial = _retract(kets + eta[:, None, None] * grad)
        trial_values, trial_ratios = _batch_info_and_ratios(trial, states, priors)

        improved = trial_values > values + 1e-15
        gain = np.where(improved, trial_values - values, 0.0)
        kets[improved] = trial[improved]
        values[improved] = trial_values[improved]
        ratios[improved] = trial_ratios[improved]
        eta = np.where(improved, np.minimum(eta * 1.5, 64.0), eta * 0.5)

        record = values > best_values
        best_values[record] = values[record]
        best_kets[record] = kets[record]

        stalled = np.where(gain < step_tolerance, stalled + 1, 0)
        if np.all(stalled >= 10):
            break

    return best_kets, best_values, iterations


def optimize_povm(
    ensemble: AncillaEnsemble,
    cfg: OptimizerConfig = OptimizerConfig(),
    seed_povms: tuple[Povm, ...] = (),
) -> OptimizeResult:
    """Numerical search for the information-maximizing measurement.

    Seesaw iteration: (a) from the current measurement, build the outcome
    likelihood table and its log-ratio ranking matrices; (b) push every
    outcome ket along its ranked ascent direction and restore completeness
    by inverse-square-root rescaling.  Restarts run batched from seeds
    derived from (seed, restart index) and results merge by max, so the
    outcome is schedule-independent and deterministic; the winning restart
    gets a second, solo ascent to polish the value.

    Extra starting measurements (e.g. the analytic optimum) can be passed
    via ``seed_povms``; the search then returns at least their value.
    """
    if cfg.restarts < 1:
        raise OutOfRange("restarts must be >= 1")
    states = np.stack(ensemble.states).astype(complex)
    priors = np.asarray(ensemble.priors, dtype=float)
    d = states.shape[-1]
    n = cfg.outcome_budget
    if n < d:
        raise OutOfRange(f"outcome budget {n} below dimension {d}")

    children = np.random.SeedSequence(cfg.seed).spawn(cfg.restarts)
    starts = [_random_start(np.random.default_rng(s), n, d) for s in children]
    starts.extend(_kets_from_povm(m, n, d) for m in seed_povms)
    kets = _retract(np.stack(starts))

    best_kets, best_values, iterations = _ascend(
        kets, states, priors, cfg.max_iterations, cfg.step_tolerance
    )
    winner = int(np.argmax(best_values))
    polished, polished_values, extra = _ascend(
        best_kets[winner : winner + 1].copy(),
        states,
        priors,
        cfg.max_iterations,
        cfg.step_tolerance,
    )
    if polished_values[0] > best_values[winner]:
        best_values[winner] = polished_values[0]
        best_kets[winner] = polished[0]

    final = best_kets[winner]
    elements = tuple(np.outer(k, k.conj()) for k in final)
    povm = Povm(elements=elements, labels=tuple(f"k{i}" for i in range(n)))
    return OptimizeResult(
        povm=povm,
        info=float(best_values[winner]),
        restart_values=tuple(float(v) for v in best_values),
        iterations=iterations + extra,
    )
