"""Nearest-neighbour transfer Hamiltonian for qudit chains.

The chain couples every adjacent pair of sites through all theta/beta
generator pairs:

    H = sum_{i=1}^{n-1} (J_i / 2) sum_{1<=k<j<=d} (theta_kj theta_kj + beta_kj beta_kj)

acting on sites (i, i+1). Each (k, j) term equals twice the swap of the
two-site patterns |k-1, j-1> and |j-1, k-1>, so the chain hops level
patterns between neighbours. With the coupling profile
J_i = sqrt(i (n - i)) / 2 the single-excitation block is the spin-(n-1)/2
angular momentum x-matrix, which is what makes end-to-end transfer exact.

Every pair 1 <= k < j <= d takes part in the sum: dropping the pairs that
touch the top level would leave |d-1> unable to hop at all.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import sqrt

import numpy as np

from .generators import beta, eta, theta
from .linalg import DEFAULT_DIM_CAP, DimensionError, kron, kron_all


def default_coupling(i: int, n: int) -> float:
    """Coupling strength of link i (1-based) on an n-site chain."""
    if not (1 <= i <= n - 1):
        raise ValueError(f"link index {i} out of range for n={n}")
    return sqrt(i * (n - i)) / 2.0


@dataclass(frozen=True)
class ChainSpec:
    """Chain geometry: d levels per site, n sites, n-1 link couplings.

    Omitting ``couplings`` selects the transfer profile
    J_i = sqrt(i (n - i)) / 2.
    """

    d: int
    n: int
    couplings: tuple[float, ...] = None  # type: ignore[assignment]

    def __post_init__(self):
        if self.d < 2:
            raise ValueError("d must be >= 2")
        if self.n < 2:
            raise ValueError("chain length n must be >= 2")
        if self.couplings is None:
            object.__setattr__(
                self, "couplings", tuple(default_coupling(i, self.n) for i in range(1, self.n))
            )
        else:
            object.__setattr__(self, "couplings", tuple(float(j) for j in self.couplings))
        if len(self.couplings) != self.n - 1:
            raise ValueError(
                f"expected {self.n - 1} couplings for n={self.n}, got {len(self.couplings)}"
            )
        if any(j <= 0 for j in self.couplings):
            raise ValueError("all couplings must be positive")

    @property
    def dim(self) -> int:
        return self.d**self.n


@dataclass(frozen=True)
class ChainHamiltonian:
    spec: ChainSpec
    matrix: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.spec.dim


def two_site_term(k: int, j: int, d: int) -> np.ndarray:
    """theta x theta + beta x beta for one generator pair on two sites.

    Equals 2 (|k-1, j-1><j-1, k-1| + |j-1, k-1><k-1, j-1|) in the two-site
    basis: a swap of the pattern, with no diagonal part.
    """
    th = theta(k, j, d)
    be = beta(k, j, d)
    return kron(th, th) + kron(be, be)


def embed_pair(term: np.ndarray, link: int, spec: ChainSpec,
               max_dim: int = DEFAULT_DIM_CAP) -> np.ndarray:
    """Lift a two-site operator onto sites (link-1, link) of the chain.

    ``link`` is 1-based like the coupling index, so link i acts on 0-based
    sites i-1 and i.
    """
    d, n = spec.d, spec.n
    term = np.asarray(term, dtype=complex)
    if term.shape != (d * d, d * d):
        raise ValueError(f"two-site term has shape {term.shape}, expected {(d * d, d * d)}")
    if not (1 <= link <= n - 1):
        raise ValueError(f"link {link} out of range for n={n}")
    mats = []
    if link - 1 > 0:
        mats.append(np.eye(d ** (link - 1), dtype=complex))
    mats.append(term)
    if n - link - 1 > 0:
        mats.append(np.eye(d ** (n - link - 1), dtype=complex))
    return kron_all(mats, max_dim=max_dim)


def build_hamiltonian(spec: ChainSpec, max_dim: int = DEFAULT_DIM_CAP) -> ChainHamiltonian:
    """Assemble the full chain Hamiltonian as a dense Hermitian matrix."""
    if spec.dim > max_dim:
        raise DimensionError(
            f"chain dimension {spec.d}^{spec.n} = {spec.dim} exceeds the cap {max_dim}"
        )
    d, n = spec.d, spec.n
    pair = np.zeros((d * d, d * d), dtype=complex)
    for j in range(2, d + 1):
        for k in range(1, j):
            pair += two_site_term(k, j, d)
    h = np.zeros((spec.dim, spec.dim), dtype=complex)
    for link in range(1, n):
        h += (spec.couplings[link - 1] / 2.0) * embed_pair(pair, link, spec, max_dim=max_dim)
    return ChainHamiltonian(spec=spec, matrix=h)


def embed_single(op: np.ndarray, site: int, d: int, n: int,
                 max_dim: int = DEFAULT_DIM_CAP) -> np.ndarray:
    """Lift a single-site operator onto 0-based ``site`` of an n-site chain."""
    op = np.asarray(op, dtype=complex)
    if op.shape != (d, d):
        raise ValueError(f"single-site operator has shape {op.shape}, expected {(d, d)}")
    if not (0 <= site < n):
        raise ValueError(f"site {site} out of range for n={n}")
    mats = []
    if site > 0:
        mats.append(np.eye(d**site, dtype=complex))
    mats.append(op)
    if n - site - 1 > 0:
        mats.append(np.eye(d ** (n - site - 1), dtype=complex))
    return kron_all(mats, max_dim=max_dim)


def total_charge(r: int, d: int, n: int) -> np.ndarray:
    """Conserved charge sum_i eta_r applied at every site."""
    out = np.zeros((d**n, d**n), dtype=complex)
    g = eta(r, d)
    for site in range(n):
        out += embed_single(g, site, d, n)
    return out


def symmetry_commutator_norm(h: ChainHamiltonian, r: int) -> float:
    """Frobenius norm of [H, sum_i eta_r(i)]; zero for the chain Hamiltonian."""
    d, n = h.spec.d, h.spec.n
    if not (1 <= r <= d - 1):
        raise ValueError(f"need 1 <= r <= d-1, got r={r}, d={d}")
    charge = total_charge(r, d, n)
    comm = h.matrix @ charge - charge @ h.matrix
    return float(np.linalg.norm(comm))


def mirror_permutation(d: int, n: int) -> np.ndarray:
    """Permutation matrix reversing site order, |q0 ... q_{n-1}> -> |q_{n-1} ... q0>."""
    dim = d**n
    perm = np.zeros((dim, dim), dtype=complex)
    for idx in range(dim):
        digits = []
        rem = idx
        for _ in range(n):
            digits.append(rem % d)
            rem //= d
        # digits are least-significant first, i.e. already in reversed site
        # order, so folding them back most-significant first mirrors the ket
        mirrored = 0
        for q in digits:
            mirrored = mirrored * d + q
        perm[idx, mirrored] = 1.0
    return perm


@lru_cache(maxsize=64)
def chain_eigensystem(spec: ChainSpec) -> tuple[np.ndarray, np.ndarray]:
    """Cached eigendecomposition (eigenvalues, eigenvectors) of the chain."""
    h = build_hamiltonian(spec)
    evals, vecs = np.linalg.eigh(h.matrix)
    evals.setflags(write=False)
    vecs.setflags(write=False)
    return evals, vecs
