"""Motional-state constructions and phase-space diagnostics.

Coherent states, the displaced-even-coherent ("cat") target state, overlap
fidelity, motional parity, and a parity-kernel Wigner evaluation on a grid.
All constructions enforce the truncation-honesty invariant: amplitude mass in
the top ten Fock levels above 1e-8 raises TruncationError instead of silently
returning a clipped state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import BasisMismatchError, TruncationError
from .model import FockBasis, displacement_matrix

__all__ = [
    "StateVector",
    "CatParams",
    "coherent_state",
    "cat_state",
    "fidelity",
    "parity",
    "wigner_grid",
]

#: Maximum allowed probability mass in the top ten Fock levels.
TAIL_MASS_TOL = 1e-8


@dataclass
class StateVector:
    """A vector over a FockBasis, optionally tagged as normalized.

    ``amplitudes[2n+s]`` is the amplitude on motional level n and internal
    level s (s = 0 lower, s = 1 upper) when spin_dim = 2; for spin_dim = 1 the
    index is the motional level directly.
    """

    amplitudes: np.ndarray
    basis: FockBasis
    normalized: bool = False
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.ndim != 1 or self.amplitudes.shape[0] != self.basis.dim:
            raise BasisMismatchError(
                f"amplitude vector of length {self.amplitudes.shape} does not "
                f"match basis dimension {self.basis.dim}"
            )
        if not np.all(np.isfinite(self.amplitudes)):
            raise ValueError("amplitudes must be finite")
        if self.normalized and abs(self.norm - 1.0) > 1e-12:
            raise ValueError(
                f"state tagged normalized but has norm {self.norm!r}"
            )

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalize(self) -> "StateVector":
        n = self.norm
        if n == 0:
            raise ValueError("cannot normalize the zero vector")
        return StateVector(
            amplitudes=self.amplitudes / n,
            basis=self.basis,
            normalized=True,
            meta=dict(self.meta),
        )

    def tail_mass(self) -> float:
        """Probability mass on the top ten motional levels."""
        k = 10 * self.basis.spin_dim
        v = self.amplitudes
        total = np.sum(np.abs(v) ** 2)
        if total == 0:
            return 0.0
        return float(np.sum(np.abs(v[-k:]) ** 2) / total)


@dataclass(frozen=True)
class CatParams:
    """Parameters of the cat-construction recipe.

    The evolution time is tied to the effective laser frequency by
    t * omega_l = 4*pi; omit ``t`` to have it computed.
    """

    eta: float
    omega_l: float
    t: Optional[float] = None

    def __post_init__(self):
        if not (self.omega_l > 0):
            raise ValueError(f"omega_l must be > 0, got {self.omega_l}")
        if self.t is None:
            object.__setattr__(self, "t", 4.0 * math.pi / self.omega_l)
        elif abs(self.t * self.omega_l - 4.0 * math.pi) > 1e-9 * 4.0 * math.pi:
            raise ValueError(
                f"t*omega_l = {self.t * self.omega_l} violates the recipe "
                f"invariant t*omega_l = 4*pi"
            )


def _require_motional(basis: FockBasis, what: str) -> None:
    if basis.spin_dim != 1:
        raise BasisMismatchError(f"{what} requires a motional-only (spin_dim = 1) basis")


def _coherent_amplitudes(gamma: complex, cutoff: int) -> np.ndarray:
    """Amplitudes gamma^n e^{-|gamma|^2/2}/sqrt(n!) without overflow."""
    a = np.empty(cutoff, dtype=complex)
    a[0] = math.exp(-0.5 * abs(gamma) ** 2)
    for n in range(1, cutoff):
        a[n] = a[n - 1] * gamma / math.sqrt(n)
    return a


def coherent_state(gamma: complex, basis: FockBasis) -> StateVector:
    """The coherent state |gamma> in a truncated Fock basis.

    Amplitudes follow the closed form gamma^n e^{-|gamma|^2/2}/sqrt(n!); a
    truncation deficit inside the tail-mass budget is renormalized away, and a
    larger one raises TruncationError.
    """
    _require_motional(basis, "coherent_state")
    a = _coherent_amplitudes(complex(gamma), basis.cutoff)
    tail = float(np.sum(np.abs(a[-10:]) ** 2))
    if tail > TAIL_MASS_TOL:
        raise TruncationError(
            f"coherent state |gamma|={abs(gamma):.3g} has tail mass {tail:.3e} "
            f"at cutoff {basis.cutoff}; increase the cutoff"
        )
    a = a / np.linalg.norm(a)
    return StateVector(amplitudes=a, basis=basis, normalized=True)


def cat_state(eta: float, basis: FockBasis) -> StateVector:
    """The normalized superposition of |i*eta> and the vacuum.

    Built directly as (|i*eta> + |0>) / sqrt(2 + 2 e^{-eta^2/2}); the
    construction is additionally cross-checked against the displaced pair
    D(i*eta/2)(|i*eta/2> + |-i*eta/2>), which equals it identically — an
    overlap below 1 - 1e-9 raises TruncationError (the only way the identity
    can fail numerically). The achieved overlap is stored in
    ``meta["identity_overlap"]``.
    """
    _require_motional(basis, "cat_state")
    if eta < 0:
        raise ValueError("eta must be >= 0")
    g1 = 1j * eta
    direct = _coherent_amplitudes(g1, basis.cutoff)
    direct[0] += 1.0  # add the vacuum component
    tail = float(np.sum(np.abs(direct[-10:]) ** 2) / np.sum(np.abs(direct) ** 2))
    if tail > TAIL_MASS_TOL:
        raise TruncationError(
            f"cat state at eta={eta} has tail mass {tail:.3e} at cutoff "
            f"{basis.cutoff}; increase the cutoff"
        )
    direct = direct / np.linalg.norm(direct)

    half = 0.5j * eta
    pair = _coherent_amplitudes(half, basis.cutoff) + _coherent_amplitudes(-half, basis.cutoff)
    displaced = displacement_matrix(half, basis).entries @ pair
    displaced = displaced / np.linalg.norm(displaced)
    overlap = float(abs(np.vdot(displaced, direct)))
    if overlap < 1.0 - 1e-9:
        raise TruncationError(
            f"displaced-pair identity overlap {overlap!r} below 1 - 1e-9 at "
            f"cutoff {basis.cutoff}; increase the cutoff"
        )
    return StateVector(
        amplitudes=direct,
        basis=basis,
        normalized=True,
        meta={"identity_overlap": overlap},
    )


def fidelity(u: StateVector, v: StateVector) -> float:
    """|<u|v>|^2 after normalizing both states. Bases must match exactly."""
    if u.basis != v.basis:
        raise BasisMismatchError(
            f"fidelity between different bases: {u.basis} vs {v.basis}"
        )
    un = u.amplitudes / np.linalg.norm(u.amplitudes)
    vn = v.amplitudes / np.linalg.norm(v.amplitudes)
    return float(abs(np.vdot(un, vn)) ** 2)


def parity(v: StateVector) -> float:
    """Expectation of (-1)^n over the motional index, traced over spin."""
    a = v.amplitudes / np.linalg.norm(v.amplitudes)
    probs = np.abs(a) ** 2
    if v.basis.spin_dim == 2:
        probs = probs[0::2] + probs[1::2]
    signs = np.where(np.arange(probs.size) % 2 == 0, 1.0, -1.0)
    return float(np.dot(signs, probs))


def wigner_grid(v: StateVector, xs: np.ndarray, ps: np.ndarray) -> np.ndarray:
    """Wigner function W(x + i p) of a motional state on a rectangular grid.

    Uses the parity form W(alpha) = (2/pi) * sum_n (-1)^n |<n|D(-alpha)|v>|^2.
    Returns shape (len(ps), len(xs)): row i is momentum ps[i], column j is
    position xs[j]. Integrates to ~1 (dx dp measure) over a grid that contains
    the state's support.

    The displaced amplitudes are generated for all grid points at once by the
    column recurrence D(g)|j> = (a^dag - conj(g)) D(g)|j-1> / sqrt(j), seeded
    with the coherent column D(g)|0>, accumulating only the Fock components
    where v has support.
    """
    _require_motional(v.basis, "wigner_grid")
    xs = np.asarray(xs, dtype=float)
    ps = np.asarray(ps, dtype=float)
    if xs.ndim != 1 or ps.ndim != 1 or xs.size == 0 or ps.size == 0:
        raise ValueError("xs and ps must be nonempty 1-D grids")
    amps = v.amplitudes / np.linalg.norm(v.amplitudes)
    cutoff = v.basis.cutoff

    # trim trailing numerically-zero support of v
    support = np.nonzero(np.abs(amps) > 1e-14)[0]
    j_max = int(support[-1]) if support.size else 0

    alpha = (xs[None, :] + 1j * ps[:, None]).ravel()  # grid points, row-major
    gamma = -alpha
    G = gamma.size

    # column 0: coherent amplitudes of each gamma, shape (G, cutoff)
    col = np.empty((G, cutoff), dtype=complex)
    col[:, 0] = np.exp(-0.5 * np.abs(gamma) ** 2)
    for n in range(1, cutoff):
        col[:, n] = col[:, n - 1] * gamma / math.sqrt(n)

    signs = np.where(np.arange(cutoff) % 2 == 0, 1.0, -1.0)
    u = amps[0] * col  # accumulate sum_j v_j * D(gamma)|j>
    gconj = np.conj(gamma)[:, None]
    for j in range(1, j_max + 1):
        nxt = np.empty_like(col)
        nxt[:, 0] = -gconj[:, 0] * col[:, 0]
        nxt[:, 1:] = (
            np.sqrt(np.arange(1, cutoff))[None, :] * col[:, :-1] - gconj * col[:, 1:]
        )
        col = nxt / math.sqrt(j)
        if amps[j] != 0:
            u += amps[j] * col

    W = (2.0 / math.pi) * (signs[None, :] * np.abs(u) ** 2).sum(axis=1)
    return W.reshape(ps.size, xs.size)
