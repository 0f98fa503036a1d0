"""Detection operators and success probabilities of the discriminator.

The measurement family has one free angle omega1 in [0, pi/2].  With
x = 1 + 3 cos^2(omega1) in [1, 4], the per-subspace success probability is

    P(x) = 1 - eta1 * x / 4 - eta2 / x,

and the averaged and pure-state figures of merit are fixed multiples of it,
so all three share the same optimal operating point:

    x0 = 2 sqrt(eta2 / eta1)   clipped to [1, 4].

The interior optimum value is P(x0) = 1 - sqrt(eta1 eta2); the endpoint
values (3/4) eta2 at x = 4 and (3/4) eta1 at x = 1 take over for eta1 below
1/5 and above 4/5, and the three formulas agree at the regime boundaries.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractError, DegeneratePriorsError, DomainError
from .jordan import build_gh_bases
from .spaces import TAU_NORM, check_dimension, mean_density_operators

PROB_SLACK = 1e-12


@dataclass(frozen=True)
class Priors:
    """A-priori probabilities of the two inputs."""

    eta1: float
    eta2: float

    def __post_init__(self) -> None:
        if self.eta1 < 0 or self.eta2 < 0:
            raise DomainError("priors must be nonnegative")
        if abs(self.eta1 + self.eta2 - 1.0) > 1e-12:
            raise DomainError("priors must sum to 1")

    @classmethod
    def from_eta1(cls, eta1: float) -> "Priors":
        return cls(eta1, 1.0 - eta1)

    def require_nondegenerate(self) -> None:
        if self.eta1 <= 0.0 or self.eta1 >= 1.0:
            raise DegeneratePriorsError(
                "priors 0 and 1 make the discrimination trivial; no interior optimum"
            )


@dataclass(frozen=True)
class MeasurementTriple:
    """POVM elements for outcomes "1", "2" and "fail"."""

    pi1: np.ndarray
    pi2: np.ndarray
    pi0: np.ndarray
    omega1: float

    def elements(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self.pi1, self.pi2, self.pi0


@dataclass(frozen=True)
class RegimeResult:
    """Optimal success probability and its operating point."""

    value: float
    regime: str  # "low" | "middle" | "high"
    x_star: float
    omega1_star: float


def check_omega1(omega1: float) -> float:
    omega1 = float(omega1)
    if not 0.0 <= omega1 <= np.pi / 2 + 1e-12:
        raise DomainError(f"omega1 must lie in [0, pi/2], got {omega1}")
    return omega1


def clamp_probability(p: float) -> float:
    """Clip numerical noise off a probability; raise on real violations."""
    if p < -PROB_SLACK or p > 1.0 + PROB_SLACK:
        raise ContractError(f"value {p} is not a probability")
    return min(max(p, 0.0), 1.0)


def x_from_omega1(omega1: float) -> float:
    return 1.0 + 3.0 * np.cos(check_omega1(omega1)) ** 2


def omega1_from_x(x: float) -> float:
    if not 1.0 <= x <= 4.0:
        raise DomainError(f"x must lie in [1, 4], got {x}")
    return float(np.arccos(np.sqrt((x - 1.0) / 3.0)))


def omega2_constraint(omega1: float) -> float:
    """Second splitter angle enforcing the no-click condition.

    Returns omega2 in [0, pi/2] with cos^2(omega2) = 1 / (1 + 3 cos^2(omega1)).
    """
    x = x_from_omega1(omega1)
    return float(np.arccos(np.sqrt(1.0 / x)))


def reciprocal_pair(g: np.ndarray, h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Unit vectors in span(g, h) orthogonal to h (resp. g).

    Requires the overlap <g|h> to be -1/2 (the value the paired bases are
    built to have); then g_perp = (2 g + h)/sqrt(3) and symmetrically.
    """
    overlap = np.vdot(g, h)
    if abs(overlap + 0.5) > 1e-6:
        raise ContractError(f"expected overlap -1/2, got {overlap}")
    g_perp = (2.0 * g + h) / np.sqrt(3.0)
    h_perp = (2.0 * h + g) / np.sqrt(3.0)
    return g_perp, h_perp


def _dyad(v: np.ndarray) -> np.ndarray:
    return np.outer(v, v.conj())


def subspace_povm(g: np.ndarray, h: np.ndarray, omega1: float) -> MeasurementTriple:
    """Detection operators restricted to the two-dimensional span of (g, h).

    pi1 = sin^2(omega1) |g_perp><g_perp|, pi2 = (4 cos^2(omega1) / x)
    |h_perp><h_perp|, and pi0 completes the projector onto span(g, h).
    pi1 annihilates h and pi2 annihilates g by construction.
    """
    omega1 = check_omega1(omega1)
    g_perp, h_perp = reciprocal_pair(g, h)
    x = x_from_omega1(omega1)
    pi1 = np.sin(omega1) ** 2 * _dyad(g_perp)
    pi2 = (4.0 * np.cos(omega1) ** 2 / x) * _dyad(h_perp)
    # Identity on the span: g_perp and h are an orthonormal pair spanning it.
    p_span = _dyad(g_perp) + _dyad(h)
    return MeasurementTriple(pi1=pi1, pi2=pi2, pi0=p_span - pi1 - pi2, omega1=omega1)


def total_povm(n: int, omega1: float) -> MeasurementTriple:
    """Three-outcome POVM on the full three-register space."""
    check_dimension(n)
    omega1 = check_omega1(omega1)
    pairs = build_gh_bases(n)
    g_perp = (2.0 * pairs.g + pairs.h) / np.sqrt(3.0)
    h_perp = (2.0 * pairs.h + pairs.g) / np.sqrt(3.0)
    x = x_from_omega1(omega1)
    pi1 = np.sin(omega1) ** 2 * (g_perp.T @ g_perp.conj())
    pi2 = (4.0 * np.cos(omega1) ** 2 / x) * (h_perp.T @ h_perp.conj())
    pi0 = np.eye(n**3, dtype=complex) - pi1 - pi2
    return MeasurementTriple(pi1=pi1, pi2=pi2, pi0=pi0, omega1=omega1)


def success_curve_x(x: float, priors: Priors) -> float:
    """Per-subspace success probability as a function of x in [1, 4]."""
    if not 1.0 <= x <= 4.0:
        raise DomainError(f"x must lie in [1, 4], got {x}")
    return clamp_probability(1.0 - priors.eta1 * x / 4.0 - priors.eta2 / x)


def _regime(priors: Priors) -> tuple[str, float]:
    priors.require_nondegenerate()
    if priors.eta1 < 0.2:
        return "low", 4.0
    if priors.eta1 > 0.8:
        return "high", 1.0
    x0 = 2.0 * np.sqrt(priors.eta2 / priors.eta1)
    return "middle", float(np.clip(x0, 1.0, 4.0))


def optimal_subspace(priors: Priors) -> RegimeResult:
    """Maximum of the per-subspace success curve over the angle family."""
    regime, x_star = _regime(priors)
    if regime == "low":
        value = 0.75 * priors.eta2
    elif regime == "high":
        value = 0.75 * priors.eta1
    else:
        value = 1.0 - np.sqrt(priors.eta1 * priors.eta2)
    return RegimeResult(
        value=clamp_probability(value),
        regime=regime,
        x_star=x_star,
        omega1_star=omega1_from_x(x_star),
    )


def average_success(n: int, omega1: float, priors: Priors) -> float:
    """Success probability of identifying the averaged input states."""
    check_dimension(n)
    omega1 = check_omega1(omega1)
    s2 = np.sin(omega1) ** 2
    c2 = np.cos(omega1) ** 2
    value = (n - 1) * priors.eta1 * s2 / (2 * n) + 2 * (n - 1) * priors.eta2 * c2 / (
        n * (1 + 3 * c2)
    )
    return clamp_probability(value)


def optimal_average(n: int, priors: Priors) -> RegimeResult:
    """Optimum of :func:`average_success` over the angle family."""
    check_dimension(n)
    regime, x_star = _regime(priors)
    scale = (n - 1) / (2.0 * n)
    if regime == "low":
        value = scale * priors.eta2
    elif regime == "high":
        value = scale * priors.eta1
    else:
        value = (2.0 * (n - 1) / (3.0 * n)) * (1.0 - np.sqrt(priors.eta1 * priors.eta2))
    return RegimeResult(
        value=clamp_probability(value),
        regime=regime,
        x_star=x_star,
        omega1_star=omega1_from_x(x_star),
    )


def pure_success(
    psi1: np.ndarray,
    psi2: np.ndarray,
    omega1: float,
    priors: Priors,
    n: int,
) -> float:
    """Success probability when the two program states are fixed pure states.

    Equals (eta1 sin^2(omega1) / 2 + 2 eta2 cos^2(omega1) / x) times
    (1 - |<psi1|psi2>|^2); the prefactor carries no dependence on n.
    """
    check_dimension(n)
    omega1 = check_omega1(omega1)
    psi1 = np.asarray(psi1, dtype=complex)
    psi2 = np.asarray(psi2, dtype=complex)
    if psi1.shape != (n,) or psi2.shape != (n,):
        raise ContractError(f"states must be vectors of length {n}")
    for psi in (psi1, psi2):
        if abs(np.linalg.norm(psi) - 1.0) > TAU_NORM:
            raise ContractError("states must be unit vectors")
    overlap_sq = abs(np.vdot(psi1, psi2)) ** 2
    s2 = np.sin(omega1) ** 2
    c2 = np.cos(omega1) ** 2
    prefactor = 0.5 * priors.eta1 * s2 + 2.0 * priors.eta2 * c2 / (1 + 3 * c2)
    return clamp_probability(prefactor * (1.0 - overlap_sq))


def optimal_pure(overlap_sq: float, priors: Priors) -> RegimeResult:
    """Optimal success probability for fixed pure inputs.

    Depends only on the priors and the squared overlap, not on the qudit
    dimension.
    """
    if not 0.0 <= overlap_sq <= 1.0:
        raise DomainError(f"overlap_sq must lie in [0, 1], got {overlap_sq}")
    regime, x_star = _regime(priors)
    if regime == "low":
        value = 0.5 * priors.eta2
    elif regime == "high":
        value = 0.5 * priors.eta1
    else:
        value = (2.0 / 3.0) * (1.0 - np.sqrt(priors.eta1 * priors.eta2))
    return RegimeResult(
        value=clamp_probability(value * (1.0 - overlap_sq)),
        regime=regime,
        x_star=x_star,
        omega1_star=omega1_from_x(x_star),
    )


def average_success_trace(n: int, omega1: float, priors: Priors) -> float:
    """Operator-level evaluation of :func:`average_success` (cross-check)."""
    povm = total_povm(n, omega1)
    rho1, rho2 = mean_density_operators(n)
    value = priors.eta1 * np.trace(povm.pi1 @ rho1).real + priors.eta2 * np.trace(
        povm.pi2 @ rho2
    ).real
    return clamp_probability(value)


def pure_success_expectation(
    psi1: np.ndarray, psi2: np.ndarray, omega1: float, priors: Priors, n: int
) -> float:
    """Operator-level evaluation of :func:`pure_success` (cross-check)."""
    povm = total_povm(n, omega1)
    big1 = np.kron(np.kron(psi1, psi1), psi2)
    big2 = np.kron(np.kron(psi1, psi2), psi2)
    value = priors.eta1 * np.vdot(big1, povm.pi1 @ big1).real + priors.eta2 * np.vdot(
        big2, povm.pi2 @ big2
    ).real
    return clamp_probability(value)
