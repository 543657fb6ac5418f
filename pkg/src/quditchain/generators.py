"""SU(d) generator construction from level projectors.

The d*d-1 traceless Hermitian generators split into three families built
from the projectors P(k, j) = |k-1><j-1| (indices are 1-based at the API
boundary):

    theta(k, j) = P(k, j) + P(j, k)                      for 1 <= k < j <= d
    beta(k, j)  = -i (P(k, j) - P(j, k))                 for 1 <= k < j <= d
    eta(r)      = sqrt(2/(r(r+1))) (sum_{j<=r} P(j, j) - r P(r+1, r+1))

For d=2 this yields the Pauli matrices (X, Y, Z) and for d=3 the eight
Gell-Mann matrices in their conventional order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import sqrt

import numpy as np


def projector(k: int, j: int, d: int) -> np.ndarray:
    """Matrix unit |k-1><j-1| on a d-level system."""
    if d < 2:
        raise ValueError("d must be >= 2")
    if not (1 <= k <= d and 1 <= j <= d):
        raise ValueError(f"projector indices ({k}, {j}) out of range for d={d}")
    m = np.zeros((d, d), dtype=complex)
    m[k - 1, j - 1] = 1.0
    return m


def _check_pair(k: int, j: int, d: int):
    if d < 2:
        raise ValueError("d must be >= 2")
    if not (1 <= k < j <= d):
        raise ValueError(f"need 1 <= k < j <= d, got (k={k}, j={j}, d={d})")


def theta(k: int, j: int, d: int) -> np.ndarray:
    """Symmetric off-diagonal generator; theta(1, 2, 2) is Pauli X."""
    _check_pair(k, j, d)
    return projector(k, j, d) + projector(j, k, d)


def beta(k: int, j: int, d: int) -> np.ndarray:
    """Antisymmetric off-diagonal generator; beta(1, 2, 2) is Pauli Y."""
    _check_pair(k, j, d)
    return -1j * (projector(k, j, d) - projector(j, k, d))


def eta(r: int, d: int) -> np.ndarray:
    """Diagonal generator; eta(1, 2) is Pauli Z."""
    if d < 2:
        raise ValueError("d must be >= 2")
    if not (1 <= r <= d - 1):
        raise ValueError(f"need 1 <= r <= d-1, got (r={r}, d={d})")
    m = np.zeros((d, d), dtype=complex)
    for jj in range(1, r + 1):
        m += projector(jj, jj, d)
    m -= r * projector(r + 1, r + 1, d)
    return sqrt(2.0 / (r * (r + 1))) * m


@dataclass(frozen=True)
class GeneratorSet:
    """The complete family of d*d-1 generators for one qudit."""

    d: int
    theta: dict[tuple[int, int], np.ndarray] = field(repr=False)
    beta: dict[tuple[int, int], np.ndarray] = field(repr=False)
    eta: dict[int, np.ndarray] = field(repr=False)

    def ordered(self) -> list[tuple[str, np.ndarray]]:
        """(name, matrix) pairs in the conventional order: for each j,
        theta/beta pairs with k < j followed by eta(j-1). For d=3 this is
        exactly lambda_1 .. lambda_8."""
        out: list[tuple[str, np.ndarray]] = []
        for j in range(2, self.d + 1):
            for k in range(1, j):
                out.append((f"theta({k},{j})", self.theta[(k, j)]))
                out.append((f"beta({k},{j})", self.beta[(k, j)]))
            out.append((f"eta({j - 1})", self.eta[j - 1]))
        return out

    def __len__(self) -> int:
        return len(self.theta) + len(self.beta) + len(self.eta)


def generator_set(d: int) -> GeneratorSet:
    """Build all theta/beta/eta generators for a d-level system."""
    if d < 2:
        raise ValueError("d must be >= 2")
    thetas = {(k, j): theta(k, j, d) for j in range(2, d + 1) for k in range(1, j)}
    betas = {(k, j): beta(k, j, d) for j in range(2, d + 1) for k in range(1, j)}
    etas = {r: eta(r, d) for r in range(1, d)}
    return GeneratorSet(d=d, theta=thetas, beta=betas, eta=etas)
