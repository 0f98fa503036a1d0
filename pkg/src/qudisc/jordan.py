"""Paired bases for the two non-symmetric subspaces and their angle structure.

The orthogonal complements of the fully symmetric subspace inside S1 and S2
admit explicit orthonormal bases {g_i} and {h_i} whose cross overlaps are
diagonal with constant value -1/2.  Diagonal cross overlaps are exactly the
canonical (Jordan) basis condition, so each pair (g_i, h_i) spans its own
two-dimensional subspace T_i and the discrimination problem splits over the
T_i independently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractError
from .spaces import (
    TAU_OP,
    check_dimension,
    basis_ket,
    dimension_table,
    projector_from_rows,
    symmetric_basis_3,
)

CASE_LOW = "i=j<k"
CASE_HIGH = "i<j=k"
CASE_DISTINCT = "i<j<k"
CASE_DISTINCT_PRIMED = "i<j<k'"


@dataclass(frozen=True)
class JordanPairSet:
    """Paired orthonormal families spanning S4 (g) and S5 (h).

    g and h are stacked row vectors of shape (i0, n^3); labels[m] records the
    originating case and ordered triple of row m.
    """

    n: int
    g: np.ndarray
    h: np.ndarray
    labels: tuple[tuple[str, tuple[int, int, int]], ...]

    def __len__(self) -> int:
        return len(self.labels)


def _sym_pair_ket(i: int, j: int, n: int) -> np.ndarray:
    if i == j:
        return basis_ket((i, i), n)
    return (basis_ket((i, j), n) + basis_ket((j, i), n)) / np.sqrt(2)


def build_gh_bases(n: int) -> JordanPairSet:
    """Construct the i0 = n(n+1)(n-1)/3 paired basis vectors.

    Enumeration is lexicographic in the ordered triple (i, j, k); triples with
    three distinct labels contribute two pairs (unprimed before primed).
    """
    check_dimension(n)
    eye = np.eye(n)
    c1 = np.sqrt(1.0 / 3.0)
    c2 = np.sqrt(2.0 / 3.0)
    a = (3.0 - np.sqrt(3.0)) / 6.0
    b = (3.0 + np.sqrt(3.0)) / 6.0
    c = np.sqrt(3.0) / 3.0

    def pair_with_c(i: int, j: int, k: int) -> np.ndarray:
        return np.kron(_sym_pair_ket(i, j, n), eye[k - 1])

    def a_with_pair(i: int, j: int, k: int) -> np.ndarray:
        return np.kron(eye[i - 1], _sym_pair_ket(j, k, n))

    g_rows, h_rows, labels = [], [], []
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            for k in range(j, n + 1):
                if i == j == k:
                    continue
                if i == j:
                    g_rows.append(c1 * pair_with_c(i, k, i) - c2 * basis_ket((i, i, k), n))
                    h_rows.append(c1 * a_with_pair(i, i, k) - c2 * basis_ket((k, i, i), n))
                    labels.append((CASE_LOW, (i, j, k)))
                elif j == k:
                    g_rows.append(c1 * pair_with_c(i, j, j) - c2 * basis_ket((j, j, i), n))
                    h_rows.append(c1 * a_with_pair(j, i, j) - c2 * basis_ket((i, j, j), n))
                    labels.append((CASE_HIGH, (i, j, k)))
                else:
                    g_rows.append(
                        a * pair_with_c(i, j, k) - b * pair_with_c(i, k, j) + c * pair_with_c(j, k, i)
                    )
                    h_rows.append(
                        a * a_with_pair(k, i, j) - b * a_with_pair(j, i, k) + c * a_with_pair(i, j, k)
                    )
                    labels.append((CASE_DISTINCT, (i, j, k)))
                    g_rows.append(
                        a * pair_with_c(i, k, j) - b * pair_with_c(i, j, k) + c * pair_with_c(j, k, i)
                    )
                    h_rows.append(
                        a * a_with_pair(j, i, k) - b * a_with_pair(k, i, j) + c * a_with_pair(i, j, k)
                    )
                    labels.append((CASE_DISTINCT_PRIMED, (i, j, k)))

    pair_set = JordanPairSet(
        n=n, g=np.array(g_rows), h=np.array(h_rows), labels=tuple(labels)
    )
    assert len(pair_set) == dimension_table(n).i0
    return pair_set


def overlap_matrix(pair_set: JordanPairSet) -> np.ndarray:
    """Cross-Gram matrix G[i, j] = <g_i|h_j>."""
    if pair_set.g.shape != pair_set.h.shape:
        raise ContractError("g and h families must have matching shapes")
    return pair_set.g.conj() @ pair_set.h.T


def jordan_angles(family_a: np.ndarray, family_b: np.ndarray) -> np.ndarray:
    """Cosines of the principal angles between two orthonormal families.

    Computed as the singular values of the cross-Gram matrix, in descending
    order.  Raises ContractError if either family is not orthonormal.
    """
    for name, family in (("first", family_a), ("second", family_b)):
        gram = family.conj() @ family.T
        if np.abs(gram - np.eye(len(family))).max() > TAU_OP:
            raise ContractError(f"{name} family is not orthonormal")
    if family_a.shape[1] != family_b.shape[1]:
        raise ContractError("families live on different spaces")
    cross = family_a.conj() @ family_b.T
    return np.linalg.svd(cross, compute_uv=False)


def density_from_jordan(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Rebuild the averaged input states from the paired-basis decomposition.

    Each state is the uniform mixture over the symmetric projector plus the
    dyads of its own family, with weight 2 / (n^2 (n+1)); the results equal
    :func:`qudisc.spaces.mean_density_operators` entrywise.
    """
    check_dimension(n)
    weight = 2.0 / (n**2 * (n + 1))
    p0 = projector_from_rows(symmetric_basis_3(n))
    pairs = build_gh_bases(n)
    rho1 = weight * (p0 + projector_from_rows(pairs.g))
    rho2 = weight * (p0 + projector_from_rows(pairs.h))
    return rho1, rho2


__all__ = [
    "JordanPairSet",
    "build_gh_bases",
    "overlap_matrix",
    "jordan_angles",
    "density_from_jordan",
    "CASE_LOW",
    "CASE_HIGH",
    "CASE_DISTINCT",
    "CASE_DISTINCT_PRIMED",
]
