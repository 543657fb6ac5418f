"""Dense complex linear algebra primitives for qudit registers.

Everything downstream (generators, Hamiltonians, channels, the transfer
engine) works with plain ``numpy.ndarray`` matrices of dtype complex128.
Site 0 of a register is the leftmost and most significant digit, so a basis
ket |q0 q1 ... q_{n-1}> lives at index sum(q_s * d**(n-1-s)).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

#: Largest Hilbert-space dimension the dense backend will materialise.
DEFAULT_DIM_CAP = 4096

_HERMITIAN_TOL = 1e-10
_NORM_TOL = 1e-12


class DimensionError(ValueError):
    """Raised when an operation would exceed the dense dimension cap or mix
    incompatible matrix shapes."""


def kron(a: np.ndarray, b: np.ndarray, max_dim: int = DEFAULT_DIM_CAP) -> np.ndarray:
    """Kronecker product with a guard on the result size.

    The (i, j) block of the result is a[i, j] * b, which matches the
    big-endian site convention used for basis indices.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.ndim != 2 or b.ndim != 2:
        raise ValueError("kron expects 2-d matrices")
    rows = a.shape[0] * b.shape[0]
    cols = a.shape[1] * b.shape[1]
    if rows > max_dim or cols > max_dim:
        raise DimensionError(
            f"kron result {rows}x{cols} exceeds the dimension cap {max_dim}"
        )
    return np.kron(a, b)


def kron_all(mats: list[np.ndarray], max_dim: int = DEFAULT_DIM_CAP) -> np.ndarray:
    """Left-to-right Kronecker product of a nonempty list of matrices."""
    if not mats:
        raise ValueError("kron_all needs at least one matrix")
    out = np.asarray(mats[0], dtype=complex)
    for m in mats[1:]:
        out = kron(out, m, max_dim=max_dim)
    return out


def mat_exp_hermitian(h: np.ndarray, t: float) -> np.ndarray:
    """Unitary exp(-i*h*t) of a Hermitian matrix via eigendecomposition.

    Diagonalising keeps the result unitary to machine precision, which the
    transfer engine relies on when it chains many evolution steps.

    Raises:
        ValueError: if ``h`` is not Hermitian within 1e-10.
    """
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError("matrix exponential needs a square matrix")
    if np.abs(h - h.conj().T).max() > _HERMITIAN_TOL:
        raise ValueError("matrix is not Hermitian within 1e-10")
    evals, vecs = np.linalg.eigh(h)
    return (vecs * np.exp(-1j * evals * t)) @ vecs.conj().T


def vn_entropy(matrix: np.ndarray, base: float = 2.0) -> float:
    """Von Neumann entropy -tr(rho log rho) of a density matrix, in bits by
    default. Eigenvalues below 1e-12 are treated as exact zeros."""
    evals = np.linalg.eigvalsh(np.asarray(matrix, dtype=complex))
    evals = evals[evals > 1e-12]
    return float(-(evals * (np.log(evals) / np.log(base))).sum())


@dataclass(frozen=True)
class PureState:
    """Normalized amplitude vector of an n-qudit register with d levels."""

    d: int
    n: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.d < 2:
            raise ValueError("qudit dimension d must be >= 2")
        if self.n < 1:
            raise ValueError("need at least one qudit")
        amps = np.ascontiguousarray(self.amplitudes, dtype=complex)
        if amps.shape != (self.d**self.n,):
            raise DimensionError(
                f"amplitude vector has shape {amps.shape}, expected ({self.d**self.n},)"
            )
        norm_sq = float(np.vdot(amps, amps).real)
        if abs(norm_sq - 1.0) > _NORM_TOL:
            raise ValueError(f"state is not normalized: sum |a_i|^2 = {norm_sq!r}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.d**self.n

    def density(self) -> "DensityMatrix":
        return DensityMatrix(self.d, self.n, np.outer(self.amplitudes, self.amplitudes.conj()))

    def overlap(self, other: "PureState") -> complex:
        if self.dim != other.dim:
            raise DimensionError("states live in different Hilbert spaces")
        return complex(np.vdot(self.amplitudes, other.amplitudes))


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, trace-one, positive-semidefinite operator on n qudits."""

    d: int
    n: int
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.d < 2:
            raise ValueError("qudit dimension d must be >= 2")
        if self.n < 1:
            raise ValueError("need at least one qudit")
        dim = self.d**self.n
        mat = np.ascontiguousarray(self.matrix, dtype=complex)
        if mat.shape != (dim, dim):
            raise DimensionError(f"matrix has shape {mat.shape}, expected ({dim}, {dim})")
        if np.abs(mat - mat.conj().T).max() > _NORM_TOL:
            raise ValueError("density matrix is not Hermitian within 1e-12")
        trace = complex(np.trace(mat))
        if abs(trace - 1.0) > _NORM_TOL:
            raise ValueError(f"density matrix trace is {trace!r}, expected 1")
        if np.linalg.eigvalsh(mat).min() < -1e-10:
            raise ValueError("density matrix has a negative eigenvalue beyond -1e-10")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    @property
    def dim(self) -> int:
        return self.d**self.n


def partial_trace(rho: DensityMatrix, keep: tuple[int, ...] | list[int]) -> DensityMatrix:
    """Reduced density matrix on the listed sites, in the listed order.

    Args:
        rho: state of an n-qudit register.
        keep: nonempty sequence of distinct site indices below n.
    """
    keep = tuple(keep)
    if not keep:
        raise ValueError("keep must name at least one site")
    if len(set(keep)) != len(keep):
        raise ValueError(f"duplicate sites in keep: {keep}")
    if any(s < 0 or s >= rho.n for s in keep):
        raise ValueError(f"site out of range in keep: {keep}")
    d, n = rho.d, rho.n
    tensor = rho.matrix.reshape([d] * (2 * n))
    for site in sorted(set(range(n)) - set(keep), reverse=True):
        tensor = np.trace(tensor, axis1=site, axis2=site + tensor.ndim // 2)
    # axes currently follow ascending site order; permute to the caller's order
    ascending = sorted(keep)
    perm = [ascending.index(s) for s in keep]
    m = len(keep)
    tensor = tensor.transpose(perm + [m + p for p in perm])
    return DensityMatrix(d, m, tensor.reshape(d**m, d**m))


def reduced_from_pure(state: PureState, keep: tuple[int, ...] | list[int]) -> DensityMatrix:
    """Partial trace of |psi><psi| without forming the full outer product."""
    keep = tuple(keep)
    if not keep:
        raise ValueError("keep must name at least one site")
    if len(set(keep)) != len(keep):
        raise ValueError(f"duplicate sites in keep: {keep}")
    if any(s < 0 or s >= state.n for s in keep):
        raise ValueError(f"site out of range in keep: {keep}")
    d, n = state.d, state.n
    ascending = sorted(keep)
    tensor = state.amplitudes.reshape([d] * n)
    order = ascending + [s for s in range(n) if s not in keep]
    tensor = tensor.transpose(order).reshape(d ** len(keep), -1)
    reduced = tensor @ tensor.conj().T
    perm = [ascending.index(s) for s in keep]
    m = len(keep)
    reduced = reduced.reshape([d] * (2 * m)).transpose(perm + [m + p for p in perm])
    return DensityMatrix(d, m, reduced.reshape(d**m, d**m))
