"""Constructions of every state family in the analysis.

Covers the unbiased-noise state, the one-parameter symmetric (Bell-diagonal)
family and its seven-parameter generalization, four-qubit purifications,
Eve's conditioned ancilla ensembles, and the Alice-Bob joint probability
table with its Monte Carlo sampler.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InfeasiblePoint, NotPositive, OutOfRange
from .linalg import PAULI, bell_basis, eig_hermitian

OUTCOMES = ("z+", "z-", "x+", "x-")

FEASIBILITY_SLACK = 1e-12
ZERO_WEIGHT = 1e-12
NEGATIVE_EIG = 1e-10

_BELL = bell_basis()

_SINGLE_QUBIT_KETS = {
    "z+": np.array([1, 0], dtype=complex),
    "z-": np.array([0, 1], dtype=complex),
    "x+": np.array([1, 1], dtype=complex) / np.sqrt(2),
    "x-": np.array([1, -1], dtype=complex) / np.sqrt(2),
}


@dataclass(frozen=True)
class FamilyPoint:
    """A member of the symmetric family: noise ``epsilon`` and hidden ``c22``."""

    epsilon: float
    c22: float

    def is_feasible(self, slack: float = FEASIBILITY_SLACK) -> bool:
        if not -slack <= self.epsilon <= 1 + slack:
            return False
        return -1 - slack <= self.c22 <= 2 * self.epsilon - 1 + slack


def require_feasible(point: FamilyPoint) -> None:
    if not point.is_feasible():
        raise InfeasiblePoint(
            f"(epsilon={point.epsilon}, c22={point.c22}) violates "
            "-1 <= c22 <= 2*epsilon - 1 with 0 <= epsilon <= 1"
        )


@dataclass(frozen=True)
class AncillaEnsemble:
    """Eve's four equally likely ancilla states, one per Alice outcome."""

    states: tuple[np.ndarray, ...]
    labels: tuple[str, ...] = OUTCOMES

    @property
    def priors(self) -> np.ndarray:
        return np.full(len(self.states), 1.0 / len(self.states))

    def average_state(self) -> np.ndarray:
        out = np.zeros_like(self.states[0])
        for p, rho in zip(self.priors, self.states):
            out = out + p * rho
        return out


def outcome_kets() -> tuple[np.ndarray, ...]:
    """Single-qubit kets in the fixed outcome order (z+, z-, x+, x-)."""
    return tuple(_SINGLE_QUBIT_KETS[o] for o in OUTCOMES)


def outcome_projectors() -> tuple[np.ndarray, ...]:
    return tuple(np.outer(k, k.conj()) for k in outcome_kets())


def pauli_coefficients(rho: np.ndarray) -> np.ndarray:
    """Expansion coefficients c[j, k] = tr(ρ σ_j ⊗ σ_k), real for Hermitian ρ."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise DimensionMismatch("expected a two-qubit (4x4) operator")
    c = np.empty((4, 4))
    for j, sj in enumerate(PAULI):
        for k, sk in enumerate(PAULI):
            c[j, k] = np.trace(rho @ np.kron(sj, sk)).real
    return c


def state_from_pauli(c: np.ndarray) -> np.ndarray:
    """Assemble (1/4) Σ c[j,k] σ_j ⊗ σ_k from a real 4x4 coefficient array."""
    c = np.asarray(c, dtype=float)
    if c.shape != (4, 4):
        raise DimensionMismatch("coefficient array must be 4x4")
    rho = np.zeros((4, 4), dtype=complex)
    for j, sj in enumerate(PAULI):
        for k, sk in enumerate(PAULI):
            if c[j, k] != 0.0:
                rho += c[j, k] * np.kron(sj, sk)
    return rho / 4


def bell_weights(point: FamilyPoint) -> np.ndarray:
    """Bell-basis weights of the symmetric state at ``point``.

    The weights are ((3-2ε-c22)/4, (1+c22)/4, (-1+2ε-c22)/4, (1+c22)/4);
    they are the squared norms of Eve's four ancilla kets.
    """
    require_feasible(point)
    e, c = point.epsilon, point.c22
    w = np.array([3 - 2 * e - c, 1 + c, -1 + 2 * e - c, 1 + c]) / 4
    return np.clip(w, 0.0, None)  # strip feasibility-slack dust


def unbiased_noise_state(epsilon: float) -> np.ndarray:
    """(1-ε)·singlet + ε/4·identity, the state Alice and Bob test for."""
    if not 0 <= epsilon <= 1:
        raise OutOfRange(f"epsilon={epsilon} outside [0, 1]")
    singlet = np.outer(_BELL[0], _BELL[0].conj())
    return (1 - epsilon) * singlet + epsilon / 4 * np.eye(4, dtype=complex)


def bell_diagonal_state(point: FamilyPoint) -> np.ndarray:
    """Weighted sum of Bell projectors with the weights of ``bell_weights``."""
    w = bell_weights(point)
    rho = np.zeros((4, 4), dtype=complex)
    for wj, ket in zip(w, _BELL):
        rho += wj * np.outer(ket, ket.conj())
    return rho


_FREE_NAMES = ("c02", "c20", "c12", "c21", "c22", "c23", "c32")


def general_state(
    epsilon: float,
    c02: float = 0.0,
    c20: float = 0.0,
    c12: float = 0.0,
    c21: float = 0.0,
    c22: float = 0.0,
    c23: float = 0.0,
    c32: float = 0.0,
) -> np.ndarray:
    """Two-qubit state with the tomographic constraints fixed and the seven
    hidden coefficients free.

    Positivity is the only physical requirement on the hidden coefficients;
    there is no closed-form region for the nonsymmetric family, so the check
    is by eigenvalue.  Raises ``NotPositive`` (with the offending eigenvalue)
    if the choice is unphysical.
    """
    if not 0 <= epsilon <= 1:
        raise OutOfRange(f"epsilon={epsilon} outside [0, 1]")
    free = (c02, c20, c12, c21, c22, c23, c32)
    for name, value in zip(_FREE_NAMES, free):
        if not -1 <= value <= 1:
            raise OutOfRange(f"{name}={value} outside [-1, 1]")
    c = np.zeros((4, 4))
    c[0, 0] = 1.0
    c[1, 1] = c[3, 3] = -(1 - epsilon)
    c[0, 2], c[2, 0] = c02, c20
    c[1, 2], c[2, 1] = c12, c21
    c[2, 2] = c22
    c[2, 3], c[3, 2] = c23, c32
    rho = state_from_pauli(c)
    smallest = float(np.linalg.eigvalsh(rho)[0])
    if smallest < -NEGATIVE_EIG:
        raise NotPositive(
            f"coefficient choice is unphysical: smallest eigenvalue {smallest:.6e}",
            min_eigenvalue=smallest,
        )
    return rho


def purification(point: FamilyPoint) -> tuple[np.ndarray, np.ndarray]:
    """Four-qubit purification of the symmetric state.

    Returns the sixteen-dimensional ket (index order AB ⊗ E) together with
    the four unnormalized ancilla kets as rows: row j is √w_j e_j along the
    fixed orthonormal ancilla axes, so the kets are mutually orthogonal with
    squared norms equal to the Bell weights.  Zero-weight rows are exact
    zero vectors.
    """
    w = bell_weights(point)
    amps = np.sqrt(w)
    amps[w <= ZERO_WEIGHT] = 0.0
    ancilla = np.diag(amps).astype(complex)
    psi = np.zeros(16, dtype=complex)
    for j in range(4):
        psi += np.kron(_BELL[j], ancilla[j])
    return psi, ancilla


def conditioned_ancilla(point: FamilyPoint) -> AncillaEnsemble:
    """Eve's four ancilla states conditioned on Alice's measurement result.

    Each state is the sum of two rank-one terms in the ancilla kets (sign
    pattern fixed by Alice's outcome), has unit trace, rank at most two,
    and occurs with probability 1/4.
    """
    _, e = purification(point)
    pairs = {
        "z+": (e[0] + e[1], e[2] + e[3]),
        "z-": (e[0] - e[1], e[2] - e[3]),
        "x+": (e[0] - e[3], e[1] + e[2]),
        "x-": (e[0] + e[3], e[1] - e[2]),
    }
    states = tuple(
        np.outer(u, u.conj()) + np.outer(v, v.conj())
        for u, v in (pairs[label] for label in OUTCOMES)
    )
    return AncillaEnsemble(states=states)


def purify_state(rho: np.ndarray) -> np.ndarray:
    """Purification of an arbitrary two-qubit state via eigendecomposition.

    The ancilla is four-dimensional; the returned ket is sixteen-dimensional
    with index order AB ⊗ E.
    """
    spec = eig_hermitian(rho)
    lam = np.clip(spec.eigenvalues, 0.0, None)
    psi = np.zeros(16, dtype=complex)
    basis = np.eye(4, dtype=complex)
    for m in range(4):
        if lam[m] > ZERO_WEIGHT:
            psi += np.sqrt(lam[m]) * np.kron(spec.eigenvectors[:, m], basis[m])
    return psi


def conditioned_ancilla_from_state(rho: np.ndarray) -> AncillaEnsemble:
    """Conditioned ancilla ensemble for an arbitrary two-qubit state.

    Projects Alice's outcome kets onto the purification and traces out Bob.
    Alice's marginal gives probability 1/2 for every outcome within its
    basis, so the four states again carry prior 1/4 each.
    """
    psi = purify_state(rho).reshape(2, 2, 4)  # (A, B, E)
    states = []
    for ket in outcome_kets():
        v = np.einsum("i,ibe->be", ket.conj(), psi)  # (B, E)
        cond = v.T @ v.conj()  # sum over Bob of |v_b><v_b| on E
        states.append(cond / np.trace(cond).real)
    return AncillaEnsemble(states=tuple(states))


def joint_table(rho: np.ndarray) -> np.ndarray:
    """Joint outcome probabilities p[bob, alice] for random x/z measurements.

    Both parties pick the x or z basis with probability 1/2, giving the
    overall factor 1/4 on each projective probability.  Row and column
    order is (z+, z-, x+, x-).
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise DimensionMismatch("expected a two-qubit (4x4) state")
    projectors = outcome_projectors()
    p = np.empty((4, 4))
    for b, pb in enumerate(projectors):
        for a, pa in enumerate(projectors):
            p[b, a] = 0.25 * np.trace(rho @ np.kron(pa, pb)).real
    return p


def simulate_raw_data(point: FamilyPoint, n: int, seed: int) -> np.ndarray:
    """Empirical joint table from n i.i.d. measurement rounds.

    Deterministic for a fixed seed; every call owns its generator.
    """
    if n < 1:
        raise OutOfRange(f"sample count n={n} must be >= 1")
    p = joint_table(bell_diagonal_state(point))
    rng = np.random.default_rng(seed)
    counts = rng.multinomial(n, p.ravel()).reshape(4, 4)
    return counts / n
