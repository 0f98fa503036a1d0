"""Hilbert spaces, symmetric subspaces, and averaged input states.

The device acts on three n-dimensional registers A, B, C.  Basis labels are
1-based tuples over {1..n} (register A is the slowest-varying factor); flat
array indices are 0-based row-major.  All operators are dense complex
matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement, permutations

import numpy as np

from .errors import DomainError

# Default tolerances: norm checks, operator identities, SVD rank threshold.
TAU_NORM = 1e-10
TAU_OP = 1e-10
TAU_RANK = 1e-8


def check_dimension(n: int) -> int:
    if int(n) != n or int(n) < 2:
        raise DomainError(f"qudit dimension must be an integer >= 2, got {n!r}")
    return int(n)


@dataclass(frozen=True)
class SpaceSpec:
    """A tensor power of the single-qudit space."""

    n: int
    factors: int

    def __post_init__(self) -> None:
        check_dimension(self.n)
        if self.factors not in (1, 2, 3):
            raise DomainError(f"factors must be 1, 2 or 3, got {self.factors}")

    @property
    def dim(self) -> int:
        return self.n**self.factors

    def flat_index(self, labels: tuple[int, ...]) -> int:
        return flatten_index(labels, self.n, factors=self.factors)

    def labels(self, index: int) -> tuple[int, ...]:
        """Inverse of :meth:`flat_index`."""
        if not 0 <= index < self.dim:
            raise DomainError(f"flat index {index} outside [0, {self.dim})")
        out = []
        for _ in range(self.factors):
            index, r = divmod(index, self.n)
            out.append(r + 1)
        return tuple(reversed(out))


def flatten_index(labels: tuple[int, ...], n: int, factors: int | None = None) -> int:
    """Row-major flat index of a 1-based basis tuple (first register slowest)."""
    check_dimension(n)
    if factors is not None and len(labels) != factors:
        raise DomainError(f"expected {factors} labels, got {len(labels)}")
    idx = 0
    for a in labels:
        if int(a) != a or not 1 <= a <= n:
            raise DomainError(f"basis label {a!r} outside 1..{n}")
        idx = idx * n + (int(a) - 1)
    return idx


def basis_ket(labels: tuple[int, ...], n: int) -> np.ndarray:
    """Computational basis vector |labels> on n^len(labels) dimensions."""
    vec = np.zeros(n ** len(labels), dtype=complex)
    vec[flatten_index(labels, n)] = 1.0
    return vec


def pair_labels(n: int) -> list[tuple[int, int]]:
    """Ordered pairs (i, j), i <= j, in lexicographic order."""
    check_dimension(n)
    return list(combinations_with_replacement(range(1, n + 1), 2))


def triple_labels(n: int) -> list[tuple[int, int, int]]:
    """Ordered triples (i, j, k), i <= j <= k, in lexicographic order."""
    check_dimension(n)
    return list(combinations_with_replacement(range(1, n + 1), 3))


def _symmetrized_ket(labels: tuple[int, ...], n: int) -> np.ndarray:
    """Equal superposition of the distinct permutations of ``labels``."""
    perms = sorted(set(permutations(labels)))
    vec = np.zeros(n ** len(labels), dtype=complex)
    for p in perms:
        vec[flatten_index(p, n)] += 1.0
    return vec / np.sqrt(len(perms))


def symmetric_basis_2(n: int) -> np.ndarray:
    """Orthonormal basis of the two-fold symmetric subspace.

    Returns an array of shape (n(n+1)/2, n^2); row order follows
    :func:`pair_labels`.
    """
    check_dimension(n)
    return np.array([_symmetrized_ket(p, n) for p in pair_labels(n)])


def symmetric_basis_3(n: int) -> np.ndarray:
    """Orthonormal basis of the three-fold symmetric subspace.

    Returns an array of shape (n(n+1)(n+2)/6, n^3); row order follows
    :func:`triple_labels`.  Each row is invariant under all six register
    permutations.
    """
    check_dimension(n)
    return np.array([_symmetrized_ket(t, n) for t in triple_labels(n)])


def permutation_operator(perm: tuple[int, ...], n: int) -> np.ndarray:
    """Unitary permuting the registers: register r of the output takes the
    input register perm[r] (perm is 0-based over the factors)."""
    factors = len(perm)
    dim = n**factors
    op = np.zeros((dim, dim), dtype=complex)
    spec = SpaceSpec(n, factors)
    for col in range(dim):
        labels = spec.labels(col)
        permuted = tuple(labels[perm[r]] for r in range(factors))
        op[spec.flat_index(permuted), col] = 1.0
    return op


def projector_from_rows(rows: np.ndarray) -> np.ndarray:
    """Sum of dyads of an orthonormal family given as stacked row vectors."""
    return rows.T @ rows.conj()


def symmetric_projector(n: int, factors: int = 2) -> np.ndarray:
    """Projector onto the symmetric subspace of 2 or 3 tensor factors."""
    if factors == 2:
        return projector_from_rows(symmetric_basis_2(n))
    if factors == 3:
        return projector_from_rows(symmetric_basis_3(n))
    raise DomainError(f"factors must be 2 or 3, got {factors}")


def mean_density_operators(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Averaged input density operators on the three-register space.

    The first operator fills the AB symmetric subspace uniformly and is
    maximally mixed on C; the second fills the BC symmetric subspace and is
    maximally mixed on A.  Both have unit trace.
    """
    check_dimension(n)
    weight = 2.0 / (n**2 * (n + 1))
    p_sigma = symmetric_projector(n, factors=2)
    eye = np.eye(n, dtype=complex)
    rho1 = weight * np.kron(p_sigma, eye)
    rho2 = weight * np.kron(eye, p_sigma)
    return rho1, rho2


@dataclass(frozen=True)
class DimensionTable:
    """Dimensions of the subspace hierarchy at qudit dimension n.

    sigma: two-fold symmetric subspace.
    s0: three-fold symmetric subspace, the common part of s1 and s2.
    s1, s2: symmetric-AB (resp. BC) times the remaining register.
    s3: span of s1 and s2.
    s4, s5: orthogonal complements of s0 in s1 (resp. s2).
    s6: orthogonal complement of s0 in s3.
    i0: number of paired basis vectors spanning s4 and s5 (= dim s4).
    """

    n: int
    sigma: int
    s0: int
    s1: int
    s2: int
    s3: int
    s4: int
    s5: int
    s6: int
    i0: int


def dimension_table(n: int) -> DimensionTable:
    """Closed-form subspace dimensions."""
    check_dimension(n)
    sigma = n * (n + 1) // 2
    s0 = n * (n + 1) * (n + 2) // 6
    s1 = n**2 * (n + 1) // 2
    s3 = n * (n + 1) * (5 * n - 2) // 6
    i0 = n * (n + 1) * (n - 1) // 3
    return DimensionTable(
        n=n, sigma=sigma, s0=s0, s1=s1, s2=s1, s3=s3,
        s4=s1 - s0, s5=s1 - s0, s6=2 * i0, i0=i0,
    )


def s1_product_basis(n: int) -> np.ndarray:
    """Orthonormal basis of S1: symmetric AB pairs tensored with C.

    Row order: pair index (lexicographic) major, C label minor.
    """
    sym2 = symmetric_basis_2(n)
    eye = np.eye(n)
    return np.array([np.kron(u, eye[a]) for u in sym2 for a in range(n)])


def s2_product_basis(n: int) -> np.ndarray:
    """Orthonormal basis of S2: A label tensored with symmetric BC pairs.

    Row order: A label major, pair index (lexicographic) minor.
    """
    sym2 = symmetric_basis_2(n)
    eye = np.eye(n)
    return np.array([np.kron(eye[a], u) for a in range(n) for u in sym2])


def _svd_rank(rows: np.ndarray) -> int:
    return int(np.linalg.matrix_rank(rows, tol=TAU_RANK))


def constructive_dimension_table(n: int) -> DimensionTable:
    """Subspace dimensions recomputed as SVD ranks of explicitly built spans."""
    check_dimension(n)
    sym2 = symmetric_basis_2(n)
    sym3 = symmetric_basis_3(n)
    b1 = s1_product_basis(n)
    b2 = s2_product_basis(n)
    p0 = projector_from_rows(sym3)
    p1 = projector_from_rows(b1)
    p2 = projector_from_rows(b2)

    stacked = np.vstack([b1, b2])
    s3 = _svd_rank(stacked)
    vh = np.linalg.svd(stacked)[2]
    p3 = projector_from_rows(vh[:s3])

    return DimensionTable(
        n=n,
        sigma=_svd_rank(sym2),
        s0=_svd_rank(sym3),
        s1=_svd_rank(b1),
        s2=_svd_rank(b2),
        s3=s3,
        s4=_svd_rank(p1 - p0),
        s5=_svd_rank(p2 - p0),
        s6=_svd_rank(p3 - p0),
        i0=_svd_rank(p1 - p0),
    )


def _pair_index(i: int, j: int, n: int) -> int:
    return pair_labels(n).index((min(i, j), max(i, j)))


def expand_u3(n: int, triple: tuple[int, int, int], side: str) -> np.ndarray:
    """Coefficients of a three-fold symmetric basis vector over S1 or S2.

    For side "S1" the coefficients refer to :func:`s1_product_basis` order,
    for side "S2" to :func:`s2_product_basis` order.  Triples must satisfy
    i <= j <= k; the fully repeated triple i = j = k expands trivially to a
    single product basis vector.
    """
    check_dimension(n)
    i, j, k = triple
    if not (1 <= i <= j <= k <= n):
        raise DomainError(f"triple {triple} is not ordered within 1..{n}")
    if side not in ("S1", "S2"):
        raise DomainError(f"side must be 'S1' or 'S2', got {side!r}")

    npairs = n * (n + 1) // 2
    coeffs = np.zeros(npairs * n, dtype=complex)
    c_major = np.sqrt(2.0 / 3.0)
    c_minor = np.sqrt(1.0 / 3.0)

    def s1_slot(pair: tuple[int, int], c_label: int) -> int:
        return _pair_index(*pair, n) * n + (c_label - 1)

    def s2_slot(a_label: int, pair: tuple[int, int]) -> int:
        return (a_label - 1) * npairs + _pair_index(*pair, n)

    if side == "S1":
        if i == j == k:
            coeffs[s1_slot((i, i), i)] = 1.0
        elif i == j:
            coeffs[s1_slot((i, k), i)] = c_major
            coeffs[s1_slot((i, i), k)] = c_minor
        elif j == k:
            coeffs[s1_slot((i, j), j)] = c_major
            coeffs[s1_slot((j, j), i)] = c_minor
        else:
            for pair, c in (((i, j), k), ((i, k), j), ((j, k), i)):
                coeffs[s1_slot(pair, c)] = c_minor
    else:
        if i == j == k:
            coeffs[s2_slot(i, (i, i))] = 1.0
        elif i == j:
            coeffs[s2_slot(i, (i, k))] = c_major
            coeffs[s2_slot(k, (i, i))] = c_minor
        elif j == k:
            coeffs[s2_slot(j, (i, j))] = c_major
            coeffs[s2_slot(i, (j, j))] = c_minor
        else:
            for a, pair in ((k, (i, j)), (j, (i, k)), (i, (j, k))):
                coeffs[s2_slot(a, pair)] = c_minor
    return coeffs
