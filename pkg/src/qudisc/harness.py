"""Random-state sampling, Monte Carlo estimates, and the verification suite.

Averages over "completely unknown" states are taken with respect to the
unitarily invariant measure: normalized vectors of i.i.d. standard complex
Gaussians.  Monte Carlo success estimates average the exact per-pair success
probability (each draw contributes its conditional value, not a sampled
outcome), which keeps the estimator unbiased with far lower variance.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import stats as sps

from . import optics, povm, spaces
from .errors import DomainError
from .jordan import build_gh_bases, density_from_jordan, jordan_angles
from .povm import Priors


def _rng(seed: int, stream: int = 0) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=[seed, stream]))


def haar_state(n: int, seed: int, stream: int = 0) -> np.ndarray:
    """Unit vector drawn from the unitarily invariant measure."""
    if int(n) != n or n < 1:
        raise DomainError(f"dimension must be a positive integer, got {n!r}")
    rng = _rng(seed, stream)
    z = rng.normal(size=n) + 1j * rng.normal(size=n)
    return z / np.linalg.norm(z)


def _haar_pair(n: int, seed: int, trial: int) -> tuple[np.ndarray, np.ndarray]:
    rng = _rng(seed, trial)
    z = rng.normal(size=(2, n)) + 1j * rng.normal(size=(2, n))
    z /= np.linalg.norm(z, axis=1, keepdims=True)
    return z[0], z[1]


def empirical_mean_density(n: int, which: int, trials: int, seed: int) -> np.ndarray:
    """Monte Carlo average of the projector onto the three-register input."""
    spaces.check_dimension(n)
    if which not in (1, 2):
        raise DomainError("which must be 1 or 2")
    if trials < 1:
        raise DomainError("trials must be >= 1")
    acc = np.zeros((n**3, n**3), dtype=complex)
    for t in range(trials):
        psi1, psi2 = _haar_pair(n, seed, t)
        middle = psi1 if which == 1 else psi2
        big = np.kron(np.kron(psi1, middle), psi2)
        acc += np.outer(big, big.conj())
    return acc / trials


@dataclass(frozen=True)
class OverlapIdentity:
    """Both operator-side sums and the closed form they should equal."""

    sum_g: float
    sum_h: float
    closed_form: float


def overlap_identity_check(psi1: np.ndarray, psi2: np.ndarray, n: int) -> OverlapIdentity:
    """Summed squared overlaps of the inputs with the reciprocal families.

    Both sums equal (1 - |<psi1|psi2>|^2) / 2 for any pure pair.
    """
    psi1 = np.asarray(psi1, dtype=complex)
    psi2 = np.asarray(psi2, dtype=complex)
    if psi1.shape != (n,) or psi2.shape != (n,):
        raise DomainError(f"states must have dimension {n}")
    pairs = build_gh_bases(n)
    g_perp = (2.0 * pairs.g + pairs.h) / np.sqrt(3.0)
    h_perp = (2.0 * pairs.h + pairs.g) / np.sqrt(3.0)
    big1 = np.kron(np.kron(psi1, psi1), psi2)
    big2 = np.kron(np.kron(psi1, psi2), psi2)
    sum_g = float((np.abs(g_perp.conj() @ big1) ** 2).sum())
    sum_h = float((np.abs(h_perp.conj() @ big2) ** 2).sum())
    closed = 0.5 * (1.0 - abs(np.vdot(psi1, psi2)) ** 2)
    return OverlapIdentity(sum_g=sum_g, sum_h=sum_h, closed_form=closed)


@dataclass(frozen=True)
class McEstimate:
    """Monte Carlo estimate with its standard error."""

    mean: float
    stderr: float
    trials: int
    seed: int


def mc_success(
    n: int, omega1: float, priors: Priors, trials: int, seed: int
) -> McEstimate:
    """Monte Carlo average of the pure-state success over random pairs.

    Each trial contributes its exact conditional success probability, which
    depends on the drawn pair only through the squared overlap.
    """
    spaces.check_dimension(n)
    if trials < 100:
        raise DomainError("trials must be >= 100")
    omega1 = float(omega1)
    s2 = np.sin(omega1) ** 2
    c2 = np.cos(omega1) ** 2
    prefactor = 0.5 * priors.eta1 * s2 + 2.0 * priors.eta2 * c2 / (1 + 3 * c2)
    values = np.empty(trials)
    for t in range(trials):
        psi1, psi2 = _haar_pair(n, seed, t)
        values[t] = prefactor * (1.0 - abs(np.vdot(psi1, psi2)) ** 2)
    stderr = float(values.std(ddof=1) / np.sqrt(trials)) if trials > 1 else 0.0
    return McEstimate(mean=float(values.mean()), stderr=stderr, trials=trials, seed=seed)


@dataclass(frozen=True)
class Tolerances:
    """Comparison thresholds used by the verification suite."""

    tight: float = 1e-12  # exact algebraic identities
    op: float = 1e-10  # operator-level identities with more accumulation
    rank: float = 1e-8  # SVD rank threshold
    scan: float = 1e-6  # closed-form optima vs. brute-force grid scans


@dataclass(frozen=True)
class CheckResult:
    name: str
    scope: str
    passed: bool
    deviation: float
    tolerance: float
    claim: str


@dataclass
class VerificationReport:
    n_max: int
    results: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def add(self, name: str, scope: str, deviation: float, tolerance: float, claim: str) -> None:
        self.results.append(
            CheckResult(
                name=name,
                scope=scope,
                passed=bool(deviation <= tolerance),
                deviation=float(deviation),
                tolerance=float(tolerance),
                claim=claim,
            )
        )

    def to_text(self) -> str:
        lines = []
        for r in self.results:
            lines.append(f"check: {r.name} [{r.scope}]")
            lines.append(f"  claim: {r.claim}")
            lines.append(f"  worst_deviation: {r.deviation:.3e}")
            lines.append(f"  tolerance: {r.tolerance:.3e}")
            lines.append(f"  status: {'pass' if r.passed else 'FAIL'}")
        counts = sum(r.passed for r in self.results)
        lines.append(f"summary: {counts}/{len(self.results)} checks passed")
        lines.append(f"overall: {'pass' if self.passed else 'FAIL'}")
        return "\n".join(lines) + "\n"


def _checks_for_n(n: int, tol: Tolerances, report: VerificationReport) -> None:
    scope = f"n={n}"
    table = spaces.dimension_table(n)
    constructive = spaces.constructive_dimension_table(n)
    report.add(
        "dimension_formulas", scope,
        max(abs(getattr(table, f) - getattr(constructive, f))
            for f in ("sigma", "s0", "s1", "s2", "s3", "s4", "s5", "s6", "i0")),
        0, "closed-form subspace dimensions equal constructive SVD ranks",
    )

    sym2 = spaces.symmetric_basis_2(n)
    sym3 = spaces.symmetric_basis_3(n)
    dev = max(
        np.abs(sym2.conj() @ sym2.T - np.eye(len(sym2))).max(),
        np.abs(sym3.conj() @ sym3.T - np.eye(len(sym3))).max(),
    )
    report.add("symmetric_bases_orthonormal", scope, dev, tol.tight,
               "two- and three-fold symmetric bases have identity Gram matrices")

    swap = spaces.permutation_operator((1, 0), n)
    p_sigma = spaces.symmetric_projector(n, factors=2)
    dev = np.abs(p_sigma - (np.eye(n * n) + swap) / 2).max()
    dev = max(dev, np.abs(p_sigma @ p_sigma - p_sigma).max())
    report.add("symmetric_projector", scope, dev, tol.op,
               "two-fold symmetric projector is the permutation symmetrizer")

    dev = 0.0
    for perm in itertools.permutations(range(3)):
        op = spaces.permutation_operator(perm, n)
        dev = max(dev, np.abs(sym3 @ op.T - sym3).max())
    report.add("threefold_permutation_invariance", scope, dev, tol.tight,
               "three-fold symmetric vectors are fixed by all register permutations")

    rho1, rho2 = spaces.mean_density_operators(n)
    dev = max(
        abs(np.trace(rho1).real - 1), abs(np.trace(rho2).real - 1),
        max(0.0, -np.linalg.eigvalsh(rho1).min()),
        max(0.0, -np.linalg.eigvalsh(rho2).min()),
    )
    report.add("mean_densities_are_states", scope, dev, tol.tight,
               "averaged inputs are unit-trace positive operators")

    bases = {"S1": spaces.s1_product_basis(n), "S2": spaces.s2_product_basis(n)}
    dev = 0.0
    for side, rows in bases.items():
        for triple in spaces.triple_labels(n):
            vec = spaces.expand_u3(n, triple, side) @ rows
            target = sym3[spaces.triple_labels(n).index(triple)]
            dev = max(dev, np.linalg.norm(vec - target))
    report.add("symmetric_vector_expansions", scope, dev, tol.tight,
               "product-basis expansions reconstruct the symmetric vectors")

    pairs = build_gh_bases(n)
    stacked = np.vstack([pairs.g, pairs.h])
    gram = stacked.conj() @ stacked.T
    expected = np.block([
        [np.eye(table.i0), -0.5 * np.eye(table.i0)],
        [-0.5 * np.eye(table.i0), np.eye(table.i0)],
    ])
    report.add("paired_basis_structure", scope, np.abs(gram - expected).max(), tol.tight,
               "g/h families orthonormal with diagonal cross overlap -1/2")

    dev = np.abs(pairs.g.conj() @ sym3.T).max()
    dev = max(dev, np.abs(pairs.h.conj() @ sym3.T).max())
    report.add("paired_basis_off_symmetric", scope, dev, tol.tight,
               "g/h vectors are orthogonal to the fully symmetric subspace")

    cosines = jordan_angles(pairs.g, pairs.h)
    report.add("principal_angle_cosines", scope, np.abs(cosines - 0.5).max(), tol.tight,
               "all principal-angle cosines between the families equal 1/2")

    rho1_j, rho2_j = density_from_jordan(n)
    dev = max(np.abs(rho1_j - rho1).max(), np.abs(rho2_j - rho2).max())
    report.add("density_decomposition", scope, dev, tol.tight,
               "paired-basis decomposition rebuilds the averaged inputs")

    p0 = spaces.projector_from_rows(sym3)
    dev = max(
        np.abs(p0 + spaces.projector_from_rows(pairs.g)
               - spaces.projector_from_rows(bases["S1"])).max(),
        np.abs(p0 + spaces.projector_from_rows(pairs.h)
               - spaces.projector_from_rows(bases["S2"])).max(),
    )
    report.add("complement_spans", scope, dev, tol.op,
               "g (resp. h) dyads complete the symmetric projector to S1 (resp. S2)")

    grid = np.linspace(0.0, np.pi / 2, 50)
    dev_psd, dev_sum, dev_unamb = 0.0, 0.0, 0.0
    eye = np.eye(n**3)
    for omega1 in grid:
        triple = povm.total_povm(n, omega1)
        for op in triple.elements():
            dev_psd = max(dev_psd, max(0.0, -np.linalg.eigvalsh(op).min()))
        dev_sum = max(dev_sum, np.abs(sum(triple.elements()) - eye).max())
        dev_unamb = max(
            dev_unamb,
            abs(np.trace(triple.pi1 @ rho2).real),
            abs(np.trace(triple.pi2 @ rho1).real),
        )
    report.add("povm_positive", scope, dev_psd, tol.op,
               "all three detection operators are positive semidefinite on a 50-point grid")
    report.add("povm_complete", scope, dev_sum, tol.op,
               "detection operators sum to the identity")
    report.add("povm_unambiguous_mixed", scope, dev_unamb, tol.tight,
               "wrong-state expectation values vanish for the averaged inputs")

    priors = Priors.from_eta1(0.3)
    dev = 0.0
    for omega1 in grid[::7]:
        dev = max(dev, abs(
            povm.average_success(n, omega1, priors)
            - povm.average_success_trace(n, omega1, priors)
        ))
    report.add("average_success_closed_form", scope, dev, tol.op,
               "closed-form averaged success equals the trace evaluation")

    dev_pure, dev_unamb_pure, dev_identity = 0.0, 0.0, 0.0
    triple = povm.total_povm(n, 0.7)
    for trial in range(100):
        psi1, psi2 = _haar_pair(n, 977, trial)
        closed = povm.pure_success(psi1, psi2, 0.7, priors, n)
        operator = povm.pure_success_expectation(psi1, psi2, 0.7, priors, n)
        dev_pure = max(dev_pure, abs(closed - operator))
        big1 = np.kron(np.kron(psi1, psi1), psi2)
        big2 = np.kron(np.kron(psi1, psi2), psi2)
        dev_unamb_pure = max(
            dev_unamb_pure,
            np.linalg.norm(triple.pi1 @ big2),
            np.linalg.norm(triple.pi2 @ big1),
        )
        identity = overlap_identity_check(psi1, psi2, n)
        dev_identity = max(
            dev_identity,
            abs(identity.sum_g - identity.closed_form),
            abs(identity.sum_h - identity.closed_form),
        )
    report.add("pure_success_closed_form", scope, dev_pure, tol.op,
               "closed-form pure-state success equals the expectation value")
    report.add("povm_unambiguous_pure", scope, dev_unamb_pure, tol.op,
               "wrong-state detection amplitudes vanish for random pure pairs")
    report.add("reciprocal_overlap_identity", scope, dev_identity, tol.op,
               "summed reciprocal overlaps equal (1 - overlap^2)/2 for random pairs")


def _global_checks(n_max: int, tol: Tolerances, report: VerificationReport) -> None:
    scope = "global"
    etas = np.linspace(0.01, 0.99, 99)
    xs = np.arange(1.0, 4.0 + 1e-6, 1e-6)
    xs = xs[xs <= 4.0]
    dev = 0.0
    for eta1 in etas:
        priors = Priors.from_eta1(float(eta1))
        values = 1.0 - priors.eta1 * xs / 4.0 - priors.eta2 / xs
        dev = max(dev, abs(povm.optimal_subspace(priors).value - values.max()))
    report.add("regime_optima_vs_scan", scope, dev, tol.scan,
               "three-regime optimum matches a 1e-6 grid scan for 99 priors")

    dev = 0.0
    for boundary in (0.2, 0.8):
        eta1, eta2 = boundary, 1.0 - boundary
        dev = max(dev, abs(0.75 * max(eta1, eta2) - (1.0 - np.sqrt(eta1 * eta2))))
    report.add("regime_continuity", scope, dev, tol.tight,
               "endpoint and interior optimum formulas agree at the regime boundaries")

    priors = Priors.from_eta1(0.3)
    ns = range(2, max(5, n_max) + 1)
    ratios = []
    for n in ns:
        e = np.eye(n, dtype=complex)
        psi1, psi2 = e[0], (e[0] + e[1]) / np.sqrt(2)
        ratios.append(povm.pure_success(psi1, psi2, 0.8, priors, n) / 0.5)
    report.add("dimension_independence", scope, max(ratios) - min(ratios), tol.op,
               "normalized pure-state success is independent of the qudit dimension")

    pairs = build_gh_bases(2)
    g, h = pairs.g[0], pairs.h[0]
    dev = 0.0
    for omega1 in np.linspace(0.0, np.pi / 2, 20):
        _, net = optics.discriminator_network(omega1)
        triple = povm.subspace_povm(g, h, omega1)
        for which, state in (("g", g), ("h", h), ("g_perp", (2 * g + h) / np.sqrt(3))):
            probs = optics.output_distribution(net, optics.discriminator_port_state(which))
            expected = [np.vdot(state, op @ state).real for op in triple.elements()]
            dev = max(dev, np.abs(probs - np.array(expected)).max())
    report.add("network_born_rule", scope, dev, tol.tight,
               "six-port click probabilities equal the detection-operator expectations")

    dev = 0.0
    max_layers_ok = True
    for dim in range(2, 9):
        rng = _rng(4242, dim)
        z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        q, r = np.linalg.qr(z)
        target = q * (np.diag(r) / np.abs(np.diag(r)))
        net = optics.reck_decompose(target)
        max_layers_ok &= len(net.layers) <= dim * (dim - 1) // 2
        dev = max(dev, np.abs(net.unitary() - target).max())
    report.add("mesh_synthesis_roundtrip", scope, dev if max_layers_ok else np.inf,
               tol.op, "triangular mesh synthesis reproduces random unitaries up to size 8")

    shots = 20_000
    _, net = optics.discriminator_network(povm.omega1_from_x(2.0))
    probs = optics.output_distribution(net, optics.discriminator_port_state("g"))
    stats_run = optics.simulate_clicks(
        net, optics.discriminator_port_state("g"), shots, seed=31
    )
    freq = np.array([stats_run.counts[k] for k in ("m1", "m2", "m3")]) / shots
    tv = 0.5 * np.abs(freq - probs).sum()
    report.add("sampled_click_convergence", scope, tv, 5 * np.sqrt(3 / shots),
               "empirical click frequencies converge at the statistical rate")

    trials = 10_000
    dev_sigma = 0.0
    for (n, eta1) in ((2, 0.5), (3, 0.1), (min(5, max(2, n_max)), 0.9)):
        priors_i = Priors.from_eta1(eta1)
        omega1 = 0.8
        est = mc_success(n, omega1, priors_i, trials=trials, seed=55)
        target = povm.average_success(n, omega1, priors_i)
        if est.stderr > 0:
            dev_sigma = max(dev_sigma, abs(est.mean - target) / est.stderr)
    report.add("mc_success_consistency", scope, dev_sigma, 3.0,
               "Monte Carlo success estimates sit within three standard errors")

    emp = empirical_mean_density(2, 1, trials=20_000, seed=77)
    rho1, _ = spaces.mean_density_operators(2)
    report.add("empirical_mean_density", scope, np.abs(emp - rho1).max(), 0.01,
               "sampled projector average converges to the analytic input state")

    samples = np.abs([haar_state(3, 123, t)[0] for t in range(10_000)]) ** 2
    pvalue = sps.kstest(samples, sps.beta(1, 2).cdf).pvalue
    report.add("haar_first_component_law", scope, max(0.0, 1e-3 - pvalue), 0.0,
               "squared first component of random states follows the Beta(1, n-1) law")


def verify_all(n_max: int, tolerances: Tolerances | None = None) -> VerificationReport:
    """Run every invariant check for n = 2..n_max plus the global checks.

    Failures are recorded in the report, not raised.  The worker count for
    the per-n suites honors the QUDISC_THREADS environment variable.
    """
    if int(n_max) != n_max or n_max < 2:
        raise DomainError(f"n_max must be an integer >= 2, got {n_max!r}")
    tol = tolerances or Tolerances()
    report = VerificationReport(n_max=n_max)

    workers = int(os.environ.get("QUDISC_THREADS", "1"))
    ns = list(range(2, n_max + 1))
    if workers > 1:
        partials = [VerificationReport(n_max=n_max) for _ in ns]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(lambda args: _checks_for_n(args[0], tol, args[1]),
                          zip(ns, partials)))
        for partial in partials:
            report.results.extend(partial.results)
    else:
        for n in ns:
            _checks_for_n(n, tol, report)
    _global_checks(n_max, tol, report)
    return report
