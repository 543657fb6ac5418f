"""Kraus channels for qudit decoherence: phase damping and Weyl channels.

Phase damping on a d-level system uses binomially weighted powers of the
clock matrix Z = diag(1, omega, ..., omega^(d-1)):

    E_i = sqrt( C(d-1, i) ((1-p)/2)^i ((1+p)/2)^(d-1-i) ) Z^i,  i = 0..d-1

so p=1 is the identity channel and p=0 dephases hardest. Completeness
sum_i E_i^dag E_i = I follows from the binomial theorem because each Z^i is
unitary.

The Weyl channel applies clock/shift products Z^n X^m with probabilities
pi[m, n]; phase damping is the special case where only the m=0 row of pi is
populated, with the binomial weights above.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

import numpy as np

from .hamiltonian import embed_single
from .linalg import DensityMatrix
from .states import gate_set

_COMPLETENESS_TOL = 1e-12


@dataclass(frozen=True)
class KrausChannel:
    """A completely positive trace-preserving map given by d x d Kraus operators."""

    d: int
    ops: tuple[np.ndarray, ...] = field(repr=False)

    def __post_init__(self):
        if self.d < 2:
            raise ValueError("d must be >= 2")
        ops = tuple(np.asarray(op, dtype=complex) for op in self.ops)
        if not ops:
            raise ValueError("a channel needs at least one Kraus operator")
        for op in ops:
            if op.shape != (self.d, self.d):
                raise ValueError(f"Kraus operator has shape {op.shape}, expected {(self.d, self.d)}")
        total = sum(op.conj().T @ op for op in ops)
        if np.abs(total - np.eye(self.d)).max() > _COMPLETENESS_TOL:
            raise ValueError("Kraus operators do not satisfy sum E^dag E = I within 1e-12")
        object.__setattr__(self, "ops", ops)


@dataclass(frozen=True)
class WeylSpec:
    """Probability table pi[m, n] for applying Z^n X^m."""

    d: int
    pi: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.d < 2:
            raise ValueError("d must be >= 2")
        pi = np.asarray(self.pi, dtype=float)
        if pi.shape != (self.d, self.d):
            raise ValueError(f"pi has shape {pi.shape}, expected {(self.d, self.d)}")
        if pi.min() < -1e-15 or pi.max() > 1 + 1e-15:
            raise ValueError("pi entries must lie in [0, 1]")
        if abs(pi.sum() - 1.0) > 1e-12:
            raise ValueError(f"pi entries must sum to 1, got {pi.sum()!r}")
        pi = pi.copy()
        pi.setflags(write=False)
        object.__setattr__(self, "pi", pi)


def phase_damping_weights(p: float, d: int) -> list[float]:
    """Binomial weight of each Z power: C(d-1, i) ((1-p)/2)^i ((1+p)/2)^(d-1-i)."""
    if not (0.0 <= p <= 1.0):
        raise ValueError(f"p must lie in [0, 1], got {p}")
    if d < 2:
        raise ValueError("d must be >= 2")
    lo, hi = (1.0 - p) / 2.0, (1.0 + p) / 2.0
    return [comb(d - 1, i) * lo**i * hi ** (d - 1 - i) for i in range(d)]


def phase_damping(p: float, d: int) -> KrausChannel:
    """Qudit phase-damping channel; p=1 is noiseless, p=0 dephases hardest."""
    weights = phase_damping_weights(p, d)
    clock = gate_set(d).clock
    ops = []
    power = np.eye(d, dtype=complex)
    for i in range(d):
        ops.append(np.sqrt(weights[i]) * power)
        power = power @ clock
    return KrausChannel(d=d, ops=tuple(ops))


def weyl_channel(spec: WeylSpec) -> KrausChannel:
    """Channel applying Z^n X^m with probability pi[m, n]."""
    d = spec.d
    gates = gate_set(d)
    zpow = [np.linalg.matrix_power(gates.clock, k) for k in range(d)]
    xpow = [np.linalg.matrix_power(gates.shift, k) for k in range(d)]
    ops = []
    for m in range(d):
        for n in range(d):
            if spec.pi[m, n] > 0.0:
                ops.append(np.sqrt(spec.pi[m, n]) * (zpow[n] @ xpow[m]))
    return KrausChannel(d=d, ops=tuple(ops))


def binomial_weyl_spec(p: float, d: int) -> WeylSpec:
    """WeylSpec whose m=0 row carries the phase-damping weights."""
    pi = np.zeros((d, d))
    pi[0, :] = phase_damping_weights(p, d)
    return WeylSpec(d=d, pi=pi)


def apply_channel(rho: DensityMatrix, ch: KrausChannel) -> DensityMatrix:
    """sum_i E_i rho E_i^dag on a state whose dimension matches the channel."""
    if rho.dim != ch.d:
        raise ValueError(
            f"state dimension {rho.dim} does not match channel dimension {ch.d}"
        )
    out = np.zeros_like(rho.matrix)
    for op in ch.ops:
        out += op @ rho.matrix @ op.conj().T
    return DensityMatrix(rho.d, rho.n, out)


def apply_channel_at(rho: DensityMatrix, ch: KrausChannel, site: int) -> DensityMatrix:
    """Apply a single-qudit channel to one site of a register."""
    if ch.d != rho.d:
        raise ValueError(f"channel is {ch.d}-level but register qudits are {rho.d}-level")
    if not (0 <= site < rho.n):
        raise ValueError(f"site {site} out of range for n={rho.n}")
    out = np.zeros_like(rho.matrix)
    for op in ch.ops:
        big = embed_single(op, site, rho.d, rho.n, max_dim=rho.dim)
        out += big @ rho.matrix @ big.conj().T
    return DensityMatrix(rho.d, rho.n, out)


def process_matrix(ch: KrausChannel) -> np.ndarray:
    """Natural (row-stacked) superoperator sum_i E_i kron conj(E_i).

    Kraus decompositions are not unique, so channel equality is decided by
    comparing these d^2 x d^2 matrices.
    """
    out = np.zeros((ch.d**2, ch.d**2), dtype=complex)
    for op in ch.ops:
        out += np.kron(op, op.conj())
    return out
