"""Qudit basis states, generalized Bell states and the gates that build them.

A generalized Bell state on two d-level qudits is labelled by a phase index
p and a shift index q:

    |psi_pq> = (1/sqrt(d)) sum_j exp(2 pi i j p / d) |j> |(j + q) mod d>

There are d^2 of them and they form an orthonormal, maximally entangled
basis of the two-qudit space.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import PureState, kron


@dataclass(frozen=True)
class BellLabel:
    """Phase/shift label (p, q) of a generalized Bell state."""

    p: int
    q: int
    d: int

    def __post_init__(self):
        if self.d < 2:
            raise ValueError("d must be >= 2")
        if not (0 <= self.p <= self.d - 1 and 0 <= self.q <= self.d - 1):
            raise ValueError(f"need 0 <= p, q <= d-1, got (p={self.p}, q={self.q}, d={self.d})")


@dataclass(frozen=True)
class GateSet:
    """Single- and two-qudit gates: Fourier H, cyclic shift X, clock Z and
    the modular-addition CNOT."""

    d: int
    fourier: np.ndarray = field(repr=False)
    shift: np.ndarray = field(repr=False)
    clock: np.ndarray = field(repr=False)
    cnot: np.ndarray = field(repr=False)


def basis_state(digits: list[int] | tuple[int, ...], d: int) -> PureState:
    """Computational basis ket |q0 q1 ... q_{n-1}> (site 0 most significant)."""
    digits = list(digits)
    if d < 2:
        raise ValueError("d must be >= 2")
    if not digits:
        raise ValueError("need at least one digit")
    if any(not (0 <= q < d) for q in digits):
        raise ValueError(f"digit out of range for d={d}: {digits}")
    n = len(digits)
    idx = 0
    for q in digits:
        idx = idx * d + q
    amps = np.zeros(d**n, dtype=complex)
    amps[idx] = 1.0
    return PureState(d=d, n=n, amplitudes=amps)


def generalized_bell(label: BellLabel) -> PureState:
    """Maximally entangled two-qudit state |psi_pq>."""
    d = label.d
    amps = np.zeros(d * d, dtype=complex)
    for j in range(d):
        amps[j * d + (j + label.q) % d] = np.exp(2j * np.pi * j * label.p / d)
    return PureState(d=d, n=2, amplitudes=amps / np.sqrt(d))


def gate_set(d: int) -> GateSet:
    """Construct the d-level gate set.

    fourier[r, c] = omega^(r c) / sqrt(d) with omega = exp(2 pi i / d);
    shift |m> = |(m+1) mod d>; clock |m> = omega^m |m>;
    cnot |a>|b> = |a>|(a+b) mod d>.
    """
    if d < 2:
        raise ValueError("d must be >= 2")
    omega = np.exp(2j * np.pi / d)
    fourier = np.array([[omega ** (r * c) for c in range(d)] for r in range(d)]) / np.sqrt(d)
    shift = np.zeros((d, d), dtype=complex)
    for m in range(d):
        shift[(m + 1) % d, m] = 1.0
    clock = np.diag([omega**m for m in range(d)])
    cnot = np.zeros((d * d, d * d), dtype=complex)
    for a in range(d):
        for b in range(d):
            cnot[a * d + (a + b) % d, a * d + b] = 1.0
    return GateSet(d=d, fourier=fourier, shift=shift, clock=clock, cnot=cnot)


def bell_via_circuit(label: BellLabel, order: str = "circuit") -> PureState:
    """Prepare |psi_pq> from |00> with the four-gate recipe.

    The gate sequence is shift^q on the second qudit, Fourier on the first,
    clock^p on the first, then CNOT. ``order`` selects how the sequence is
    read:

      * ``"circuit"`` (default): apply the gates chronologically in that
        order. This reproduces ``generalized_bell`` exactly, including
        phases.
      * ``"operator"``: compose the same list as an operator product, i.e.
        apply it right to left. Then CNOT hits |00> first, where it is the
        identity, and the result is the unentangled (1/sqrt(d)) sum_j |j, q>.
    """
    if order not in ("circuit", "operator"):
        raise ValueError(f"order must be 'circuit' or 'operator', got {order!r}")
    d = label.d
    g = gate_set(d)
    eye = np.eye(d, dtype=complex)
    sequence = [
        np.linalg.matrix_power(kron(eye, g.shift), label.q),
        kron(g.fourier, eye),
        np.linalg.matrix_power(kron(g.clock, eye), label.p),
        g.cnot,
    ]
    if order == "operator":
        sequence.reverse()
    amps = np.zeros(d * d, dtype=complex)
    amps[0] = 1.0
    for gate in sequence:
        amps = gate @ amps
    return PureState(d=d, n=2, amplitudes=amps)


def embed_in_chain(state: PureState, start: int, n: int) -> PureState:
    """Place an m-qudit state at sites [start, start+m) of an n-site chain,
    padding every other site with |0>."""
    if start < 0 or start + state.n > n:
        raise ValueError(
            f"cannot place {state.n} qudit(s) at site {start} of an n={n} chain"
        )
    d = state.d
    amps = state.amplitudes
    if start > 0:
        pre = np.zeros(d**start, dtype=complex)
        pre[0] = 1.0
        amps = np.kron(pre, amps)
    tail = n - start - state.n
    if tail > 0:
        post = np.zeros(d**tail, dtype=complex)
        post[0] = 1.0
        amps = np.kron(amps, post)
    return PureState(d=d, n=n, amplitudes=amps)
