"""Idealized linear-optics realization of the measurement.

A network is an ordered list of two-mode layers plus one per-mode phase
layer.  Lines of the serialized form read as the factorization of the
network unitary from left to right:

    U = layer[0] @ layer[1] @ ... @ layer[-1] @ diag(exp(i * phases))

so the phase layer is the final (rightmost) factor and acts on the input
ports; the first listed two-mode layer is the leftmost factor.  Each layer
embeds the block

    [[sin(w) e^{i phi}, cos(w) e^{i phi}],
     [cos(w) e^{i theta}, -sin(w) e^{i theta}]]

at its mode pair.  Such a block factors as a phase diagonal times a real
splitter, so it can absorb an arbitrary phase diagonal on its right (input
side) but not on its left; the phase layer therefore sits on the input
side, and the triangular elimination below reaches every unitary with at
most N(N-1)/2 two-mode layers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ContractError, DomainError
from .povm import Priors, check_omega1, omega2_constraint, success_curve_x, x_from_omega1
from .spaces import TAU_NORM

_ANGLE_FORMAT = "{:.17g}"


def two_mode_unitary(omega: float, phi: float, theta: float) -> np.ndarray:
    """The 2x2 block realized by one four-port interferometer."""
    s, c = np.sin(omega), np.cos(omega)
    return np.array(
        [
            [s * np.exp(1j * phi), c * np.exp(1j * phi)],
            [c * np.exp(1j * theta), -s * np.exp(1j * theta)],
        ]
    )


def beamsplitter(omega: float) -> np.ndarray:
    """Real beamsplitter block; transmittance sin^2(omega)."""
    s, c = np.sin(omega), np.cos(omega)
    return np.array([[s, c], [c, -s]])


@dataclass(frozen=True)
class TwoModeLayer:
    """A two-mode block acting on the 0-based mode pair (mode_a, mode_b)."""

    mode_a: int
    mode_b: int
    omega: float
    phi: float = 0.0
    theta: float = 0.0

    def __post_init__(self) -> None:
        if self.mode_a == self.mode_b:
            raise DomainError("layer modes must differ")

    def embed(self, num_modes: int) -> np.ndarray:
        mat = np.eye(num_modes, dtype=complex)
        block = two_mode_unitary(self.omega, self.phi, self.theta)
        a, b = self.mode_a, self.mode_b
        mat[a, a], mat[a, b] = block[0, 0], block[0, 1]
        mat[b, a], mat[b, b] = block[1, 0], block[1, 1]
        return mat


@dataclass(frozen=True)
class Interferometer:
    """An ordered mesh of two-mode layers with input-port phases."""

    num_modes: int
    layers: tuple[TwoModeLayer, ...] = ()
    phases: tuple[float, ...] = field(default=())

    def __post_init__(self) -> None:
        phases = self.phases if self.phases else (0.0,) * self.num_modes
        if len(phases) != self.num_modes:
            raise DomainError("one phase per mode required")
        object.__setattr__(self, "phases", tuple(float(p) for p in phases))
        object.__setattr__(self, "layers", tuple(self.layers))
        for layer in self.layers:
            if not (0 <= layer.mode_a < self.num_modes and 0 <= layer.mode_b < self.num_modes):
                raise DomainError("layer modes outside the network")

    def unitary(self) -> np.ndarray:
        mat = np.diag(np.exp(1j * np.asarray(self.phases)))
        for layer in reversed(self.layers):
            mat = layer.embed(self.num_modes) @ mat
        return mat

    def to_text(self) -> str:
        """Serialize as BS lines followed by PHASE lines (1-based modes)."""
        lines = [f"MODES {self.num_modes}"]
        for layer in self.layers:
            angles = " ".join(
                _ANGLE_FORMAT.format(v) for v in (layer.omega, layer.phi, layer.theta)
            )
            lines.append(f"BS {layer.mode_a + 1} {layer.mode_b + 1} {angles}")
        for mode, phase in enumerate(self.phases):
            if phase != 0.0:
                lines.append(f"PHASE {mode + 1} {_ANGLE_FORMAT.format(phase)}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Interferometer":
        num_modes = None
        layers: list[TwoModeLayer] = []
        phases: dict[int, float] = {}
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if parts[0] == "MODES":
                num_modes = int(parts[1])
            elif parts[0] == "BS":
                a, b = int(parts[1]) - 1, int(parts[2]) - 1
                omega, phi, theta = (float(v) for v in parts[3:6])
                layers.append(TwoModeLayer(a, b, omega, phi, theta))
            elif parts[0] == "PHASE":
                phases[int(parts[1]) - 1] = float(parts[2])
            else:
                raise DomainError(f"unrecognized line: {raw!r}")
        if num_modes is None:
            raise DomainError("missing MODES header")
        phase_list = [phases.get(m, 0.0) for m in range(num_modes)]
        return cls(num_modes=num_modes, layers=tuple(layers), phases=tuple(phase_list))


def discriminator_network(omega1: float) -> tuple[np.ndarray, Interferometer]:
    """Six-port device distinguishing one paired-basis vector pair.

    Ports: inputs (g_perp, h, vacuum), outputs (D1, D2, F).  Two cascaded
    splitters: the first couples the g_perp port to the vacuum port at
    omega1, the second couples the h port to the vacuum port at omega2.

    In these bases the columns are

        U3 e_gperp = (-sin w1, cos w1 cos w2, -cos w1 sin w2)
        U3 e_h     = (0, sin w2, cos w2)

    with cos^2 w2 = 1 / (1 + 3 cos^2 w1).  The sign of the sin w2 entries is
    fixed by the no-click condition: injecting the superposition
    (sqrt(3)/2) g_perp - (1/2) h must produce zero amplitude at D2, which
    forces sin w2 = +sqrt(3) cos w1 cos w2 in this column convention.  The
    Born probabilities then reproduce the subspace POVM expectations exactly.
    """
    omega1 = check_omega1(omega1)
    omega2 = omega2_constraint(omega1)
    first = TwoModeLayer(0, 2, omega=omega1, phi=np.pi, theta=0.0)
    second = TwoModeLayer(1, 2, omega=omega2, phi=0.0, theta=0.0)
    # Listed order is the matrix product order; `first` acts on the input
    # state first, hence sits rightmost.
    net = Interferometer(num_modes=3, layers=(second, first))
    return net.unitary(), net


def discriminator_port_state(which: str) -> np.ndarray:
    """Port amplitudes representing the injected g, h or g_perp state."""
    if which == "g":
        return np.array([np.sqrt(3.0) / 2.0, -0.5, 0.0], dtype=complex)
    if which == "h":
        return np.array([0.0, 1.0, 0.0], dtype=complex)
    if which == "g_perp":
        return np.array([1.0, 0.0, 0.0], dtype=complex)
    raise DomainError(f"unknown input {which!r}")


def reck_decompose(matrix: np.ndarray) -> Interferometer:
    """Triangular mesh synthesis of an arbitrary unitary.

    Left-multiplies the target by inverses of two-mode blocks to null the
    strict lower triangle column by column (pivot row = diagonal row); the
    surviving diagonal becomes the input phase layer.  Emits at most
    N(N-1)/2 layers; entries that are already zero are skipped.
    """
    mat = np.array(matrix, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ContractError("input must be a square matrix")
    dim = mat.shape[0]
    if np.abs(mat.conj().T @ mat - np.eye(dim)).max() > 1e-8:
        raise ContractError("input matrix is not unitary")

    layers: list[TwoModeLayer] = []
    for col in range(dim - 1):
        for row in range(col + 1, dim):
            if abs(mat[row, col]) <= 1e-14:
                continue
            phi = float(np.angle(mat[col, col]))
            theta = float(np.angle(mat[row, col]))
            omega = float(np.arctan2(abs(mat[col, col]), abs(mat[row, col])))
            s, c = np.sin(omega), np.cos(omega)
            top = s * np.exp(-1j * phi) * mat[col] + c * np.exp(-1j * theta) * mat[row]
            bot = c * np.exp(-1j * phi) * mat[col] - s * np.exp(-1j * theta) * mat[row]
            mat[col], mat[row] = top, bot
            layers.append(TwoModeLayer(col, row, omega=omega, phi=phi, theta=theta))

    phases = tuple(float(a) for a in np.angle(np.diag(mat)))
    phases = tuple(0.0 if abs(a) < 1e-14 else a for a in phases)
    return Interferometer(num_modes=dim, layers=tuple(layers), phases=phases)


def prepare_state_network(amplitudes: np.ndarray, n: int) -> Interferometer:
    """Cascade preparing a target state from a photon in the first mode.

    The first column of the composed unitary equals ``amplitudes``; the
    remaining columns are an arbitrary unitary completion.  Mode k keeps its
    final amplitude at layer (k, k+1) and hands the residual weight onward.
    """
    amps = np.asarray(amplitudes, dtype=complex)
    if amps.shape != (n,):
        raise ContractError(f"expected {n} amplitudes, got shape {amps.shape}")
    if abs(np.linalg.norm(amps) - 1.0) > TAU_NORM:
        raise ContractError("amplitudes must have unit norm")

    if abs(abs(amps[0]) - 1.0) < 1e-14:
        phase = float(np.angle(amps[0]))
        phases = [0.0] * n
        phases[0] = 0.0 if abs(phase) < 1e-14 else phase
        return Interferometer(num_modes=n, layers=(), phases=tuple(phases))

    physical: list[TwoModeLayer] = []
    residual = 1.0
    for k in range(n - 1):
        if residual < 1e-14:
            break
        if k < n - 2:
            ratio = min(abs(amps[k]) / residual, 1.0)
            omega = float(np.arcsin(ratio))
            phi = float(np.angle(amps[k])) if abs(amps[k]) > 0 else 0.0
            physical.append(TwoModeLayer(k, k + 1, omega=omega, phi=phi, theta=0.0))
            residual *= np.cos(omega)
        else:
            omega = float(np.arctan2(abs(amps[k]), abs(amps[k + 1])))
            phi = float(np.angle(amps[k])) if abs(amps[k]) > 0 else 0.0
            theta = float(np.angle(amps[k + 1])) if abs(amps[k + 1]) > 0 else 0.0
            physical.append(TwoModeLayer(k, k + 1, omega=omega, phi=phi, theta=theta))
    return Interferometer(num_modes=n, layers=tuple(reversed(physical)))


def _shot_uniforms(seed: int, shots: int, per_shot: int = 1) -> np.ndarray:
    """Uniforms derived from (seed, shot index) via keyed counter-based RNG."""
    out = np.empty((shots, per_shot))
    for k in range(shots):
        gen = np.random.Generator(np.random.Philox(key=[seed, k]))
        out[k] = gen.random(per_shot)
    return out


@dataclass(frozen=True)
class ClickStats:
    """Outcome tallies of a single-photon sampling run."""

    shots: int
    seed: int
    counts: dict[str, int]

    def __post_init__(self) -> None:
        if sum(self.counts.values()) != self.shots:
            raise ContractError("counts must sum to shots")


def output_distribution(net: Interferometer, input_state: np.ndarray) -> np.ndarray:
    """Born probabilities over output modes for a single-photon input."""
    amps = np.asarray(input_state, dtype=complex)
    if amps.shape != (net.num_modes,):
        raise ContractError(
            f"input has {amps.shape} amplitudes, network has {net.num_modes} modes"
        )
    if abs(np.linalg.norm(amps) - 1.0) > TAU_NORM:
        raise ContractError("input must be a unit vector")
    probs = np.abs(net.unitary() @ amps) ** 2
    return probs / probs.sum()


def simulate_clicks(
    net: Interferometer,
    input_state: np.ndarray,
    shots: int,
    seed: int,
    labels: tuple[str, ...] | None = None,
) -> ClickStats:
    """Sample i.i.d. output-mode clicks; deterministic given the seed."""
    if shots < 1:
        raise DomainError("shots must be >= 1")
    probs = output_distribution(net, input_state)
    if labels is None:
        labels = tuple(f"m{i + 1}" for i in range(net.num_modes))
    if len(labels) != net.num_modes:
        raise ContractError("one label per output mode required")
    edges = np.cumsum(probs)
    draws = _shot_uniforms(seed, shots)[:, 0]
    outcomes = np.searchsorted(edges, draws, side="right")
    outcomes = np.minimum(outcomes, net.num_modes - 1)
    tallies = np.bincount(outcomes, minlength=net.num_modes)
    return ClickStats(
        shots=shots, seed=seed, counts={lab: int(c) for lab, c in zip(labels, tallies)}
    )


@dataclass(frozen=True)
class DiscriminationRun:
    """Tallies of a priors-weighted run through the six-port device."""

    shots: int
    seed: int
    counts: dict[str, int]
    input_counts: dict[str, int]
    successes: int

    @property
    def empirical_success(self) -> float:
        return self.successes / self.shots


def simulate_discriminator(
    omega1: float, priors: Priors, shots: int, seed: int
) -> DiscriminationRun:
    """Sample the six-port discriminator with inputs drawn from the priors.

    A shot succeeds when a g input clicks D1 or an h input clicks D2; the
    expected success rate is the per-subspace curve at x = 1 + 3 cos^2 w1.
    """
    if shots < 1:
        raise DomainError("shots must be >= 1")
    net = discriminator_network(omega1)[1]
    dist_g = output_distribution(net, discriminator_port_state("g"))
    dist_h = output_distribution(net, discriminator_port_state("h"))
    edges_g, edges_h = np.cumsum(dist_g), np.cumsum(dist_h)

    draws = _shot_uniforms(seed, shots, per_shot=2)
    pick_h = draws[:, 0] >= priors.eta1
    outcomes = np.where(
        pick_h,
        np.searchsorted(edges_h, draws[:, 1], side="right"),
        np.searchsorted(edges_g, draws[:, 1], side="right"),
    )
    outcomes = np.minimum(outcomes, 2)
    tallies = np.bincount(outcomes, minlength=3)
    successes = int(((~pick_h) & (outcomes == 0)).sum() + (pick_h & (outcomes == 1)).sum())
    return DiscriminationRun(
        shots=shots,
        seed=seed,
        counts={"D1": int(tallies[0]), "D2": int(tallies[1]), "F": int(tallies[2])},
        input_counts={"g": int((~pick_h).sum()), "h": int(pick_h.sum())},
        successes=successes,
    )


def analytic_discriminator_probabilities(omega1: float, priors: Priors) -> dict[str, float]:
    """Exact outcome probabilities of the priors-weighted six-port run."""
    net = discriminator_network(omega1)[1]
    dist_g = output_distribution(net, discriminator_port_state("g"))
    dist_h = output_distribution(net, discriminator_port_state("h"))
    mixed = priors.eta1 * dist_g + priors.eta2 * dist_h
    return {
        "D1": float(mixed[0]),
        "D2": float(mixed[1]),
        "F": float(mixed[2]),
        "success": success_curve_x(x_from_omega1(omega1), priors),
    }
