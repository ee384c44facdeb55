"""Model parameters, truncated Fock(+spin) basis, and Hamiltonian builders.

Physical setting: a single trapped ion driven by a pair of Raman lasers, described
in trap-frequency units. The drive strength is the Rabi frequency ``rabi`` (called
Omega below), the ion-motion coupling is the Lamb-Dicke parameter ``lamb_dicke``
(eta), and ``detuning`` (Delta) is the scaled two-photon detuning. Two equivalent
Hamiltonians are provided:

* the lab-frame form
  ``H = (Delta/2) sigma_z + a^dag a + (Omega/2)(sigma_+ e^{i eta x} + sigma_- e^{-i eta x})``
  with ``x = a + a^dag``, and
* the transformed form
  ``H_I = (Omega/2) sigma_z + a^dag a + [g (a + a^dag) + eps] sigma_x + g^2``
  with ``g = eta/2`` and ``eps = -Delta/2``,

connected by the combined unitary built in :func:`transform_uv`. Both are realized
as dense matrices over a truncated Fock ladder tensored with the two internal
levels.

Basis ordering convention (fixed package-wide): basis index ``i = 2*n + s`` where
``n`` is the Fock label and ``s`` is the spin label, ``s = 0`` for the lower
internal state ("down") and ``s = 1`` for the upper one ("up"). Spin operators are
2x2 tiles in (down, up) ordering, so ``sigma_z = diag(-1, +1)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .errors import BasisMismatchError, InvalidBasisError, IonSeriesError

__all__ = [
    "ModelParams",
    "DerivedParams",
    "FockBasis",
    "OperatorMatrix",
    "derive_params",
    "ladder_matrix",
    "displacement_matrix",
    "build_h_lab",
    "build_h_transformed",
    "transform_uv",
    "sigma_z",
    "sigma_x",
    "sigma_plus",
    "sigma_minus",
    "HERMITICITY_TOL",
]

#: Hermiticity budget for every Hamiltonian builder output (entrywise max).
HERMITICITY_TOL = 1e-12


def _require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class ModelParams:
    """Dimensionless drive/trap parameters (all energies in trap-frequency units).

    rabi : Omega >= 0, the Rabi frequency of the two-photon drive.
    lamb_dicke : eta >= 0, the combined Lamb-Dicke parameter of the two beams.
    detuning : Delta, the scaled detuning (may have either sign).
    """

    rabi: float
    lamb_dicke: float
    detuning: float

    def __post_init__(self):
        rabi = _require_finite("rabi", self.rabi)
        lamb_dicke = _require_finite("lamb_dicke", self.lamb_dicke)
        detuning = _require_finite("detuning", self.detuning)
        if rabi < 0:
            raise ValueError(f"rabi must be >= 0, got {rabi}")
        if lamb_dicke < 0:
            raise ValueError(f"lamb_dicke must be >= 0, got {lamb_dicke}")
        object.__setattr__(self, "rabi", rabi)
        object.__setattr__(self, "lamb_dicke", lamb_dicke)
        object.__setattr__(self, "detuning", detuning)


@dataclass(frozen=True)
class DerivedParams:
    """Coupling g = lamb_dicke/2 and flipped half-detuning eps = -detuning/2."""

    g: float
    eps: float


def derive_params(p: ModelParams) -> DerivedParams:
    """Map (rabi, lamb_dicke, detuning) to the derived pair (g, eps) exactly."""
    return DerivedParams(g=p.lamb_dicke / 2.0, eps=-p.detuning / 2.0)


@dataclass(frozen=True)
class FockBasis:
    """Truncated Fock ladder (indices 0..cutoff-1), optionally tensored with spin.

    spin_dim = 1 describes a motional-only space; spin_dim = 2 adds the two
    internal levels with the interleaved index convention ``i = 2*n + s``.
    """

    cutoff: int
    spin_dim: int = 2

    def __post_init__(self):
        if int(self.cutoff) != self.cutoff or self.cutoff < 2:
            raise InvalidBasisError(f"cutoff must be an integer >= 2, got {self.cutoff!r}")
        if self.spin_dim not in (1, 2):
            raise InvalidBasisError(f"spin_dim must be 1 or 2, got {self.spin_dim!r}")
        object.__setattr__(self, "cutoff", int(self.cutoff))
        object.__setattr__(self, "spin_dim", int(self.spin_dim))

    @property
    def dim(self) -> int:
        return self.cutoff * self.spin_dim

    def motional(self) -> "FockBasis":
        """The spin-stripped (spin_dim = 1) version of this basis."""
        return FockBasis(cutoff=self.cutoff, spin_dim=1)


@dataclass
class OperatorMatrix:
    """Dense operator over a FockBasis.

    ``entries`` is a square complex (or real) ndarray whose side equals
    ``basis.dim``. ``meta`` carries construction diagnostics (e.g. the
    unitarity defect of a truncated displacement).
    """

    entries: np.ndarray
    basis: FockBasis
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.entries = np.asarray(self.entries)
        if self.entries.ndim != 2 or self.entries.shape[0] != self.entries.shape[1]:
            raise ValueError(f"entries must be square, got shape {self.entries.shape}")
        if self.entries.shape[0] != self.basis.dim:
            raise BasisMismatchError(
                f"entries dim {self.entries.shape[0]} != basis dim {self.basis.dim}"
            )

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def hermiticity_defect(self) -> float:
        """Entrywise max |H - H^dagger|."""
        return float(np.max(np.abs(self.entries - self.entries.conj().T)))


# ---------------------------------------------------------------------------
# spin tiles, (down, up) ordering
# ---------------------------------------------------------------------------

def sigma_z() -> np.ndarray:
    return np.diag([-1.0, 1.0])


def sigma_x() -> np.ndarray:
    return np.array([[0.0, 1.0], [1.0, 0.0]])


def sigma_plus() -> np.ndarray:
    """Raising tile |up><down|."""
    out = np.zeros((2, 2))
    out[1, 0] = 1.0
    return out


def sigma_minus() -> np.ndarray:
    """Lowering tile |down><up|."""
    out = np.zeros((2, 2))
    out[0, 1] = 1.0
    return out


# ---------------------------------------------------------------------------
# motional-sector operators
# ---------------------------------------------------------------------------

def _annihilation(cutoff: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1.0, cutoff)), 1)


def ladder_matrix(basis: FockBasis) -> OperatorMatrix:
    """The annihilation operator on the motional sector of ``basis``.

    Matrix elements <n-1|a|n> = sqrt(n). The returned operator always lives in
    the motional (spin_dim = 1) basis; builders tensor it with spin tiles as
    needed.
    """
    if basis.cutoff < 2:
        raise InvalidBasisError("ladder_matrix needs cutoff >= 2")
    return OperatorMatrix(_annihilation(basis.cutoff), basis.motional())


def displacement_matrix(gamma: complex, basis: FockBasis) -> OperatorMatrix:
    """Displacement operator exp(gamma a^dag - conj(gamma) a) on the motional sector.

    Computed by scaling-and-squaring matrix exponential of the (skew-Hermitian)
    generator in the truncated basis. The caller is responsible for choosing a
    cutoff with |gamma|^2 << cutoff; truncation quality is reported via
    ``meta["unitarity_defect"]``, the entrywise defect of D D^dag - I on the
    top-left k x k block with k = cutoff - ceil(8 |gamma|^2).
    """
    cutoff = basis.cutoff
    a = _annihilation(cutoff)
    gamma = complex(gamma)
    generator = gamma * a.conj().T - np.conj(gamma) * a
    if gamma == 0:
        entries = np.eye(cutoff, dtype=complex)
    else:
        entries = expm(generator)
    k = max(1, cutoff - math.ceil(8.0 * abs(gamma) ** 2))
    block = entries[:k, :k]
    defect = float(np.max(np.abs(block @ block.conj().T - np.eye(k))))
    return OperatorMatrix(entries, basis.motional(), meta={"unitarity_defect": defect, "block": k})


# ---------------------------------------------------------------------------
# Hamiltonian builders (spin_dim = 2, interleaved index 2n + s)
# ---------------------------------------------------------------------------

def _require_spin2(basis: FockBasis, who: str) -> None:
    if basis.spin_dim != 2:
        raise BasisMismatchError(f"{who} requires spin_dim = 2, got {basis.spin_dim}")


def _check_hermitian(H: np.ndarray, who: str) -> None:
    defect = float(np.max(np.abs(H - H.conj().T)))
    if defect >= HERMITICITY_TOL:
        raise IonSeriesError(f"{who} produced a non-Hermitian matrix (defect {defect:.3e})")


def build_h_lab(p: ModelParams, basis: FockBasis) -> OperatorMatrix:
    """Lab-frame Hamiltonian on the interleaved spin-motional basis.

    H = (Delta/2) sigma_z + a^dag a
        + (Omega/2)(sigma_+ e^{i eta x} + sigma_- e^{-i eta x}),   x = a + a^dag.
    """
    _require_spin2(basis, "build_h_lab")
    cutoff = basis.cutoff
    a = _annihilation(cutoff)
    x = a + a.T
    eplus = expm(1j * p.lamb_dicke * x)
    number = np.diag(np.arange(float(cutoff)))
    eye_m = np.eye(cutoff)
    H = (
        np.kron(eye_m, (p.detuning / 2.0) * sigma_z()).astype(complex)
        + np.kron(number, np.eye(2))
        + (p.rabi / 2.0) * (np.kron(eplus, sigma_plus()) + np.kron(eplus.conj().T, sigma_minus()))
    )
    _check_hermitian(H, "build_h_lab")
    return OperatorMatrix(H, basis)


def build_h_transformed(p: ModelParams, basis: FockBasis) -> OperatorMatrix:
    """Transformed-frame Hamiltonian (real symmetric in this basis).

    H_I = (Omega/2) sigma_z + a^dag a + [g (a + a^dag) + eps] sigma_x + g^2.
    """
    _require_spin2(basis, "build_h_transformed")
    d = derive_params(p)
    cutoff = basis.cutoff
    a = _annihilation(cutoff)
    x = a + a.T
    number = np.diag(np.arange(float(cutoff)))
    eye_m = np.eye(cutoff)
    H = (
        np.kron(eye_m, (p.rabi / 2.0) * sigma_z())
        + np.kron(number, np.eye(2))
        + np.kron(d.g * x + d.eps * eye_m, sigma_x())
        + d.g**2 * np.eye(basis.dim)
    )
    _check_hermitian(H, "build_h_transformed")
    return OperatorMatrix(H, basis)


def transform_uv(p: ModelParams, basis: FockBasis) -> OperatorMatrix:
    """Combined unitary connecting the two frames: H_I = (UV)^dag H_lab (UV).

    The spin-block structure (rows/columns in (up, down) block order) is
    ``U = ((D, -D), (D^dag, D^dag))`` with ``D`` the displacement by
    ``i*lamb_dicke/2``, and ``V = (1/sqrt(2)) e^{-i pi a^dag a / 2}`` (a quarter
    phase-space rotation). Neither factor alone is normalized; the product UV is
    unitary (up to truncation, reported as ``meta["unitarity_defect"]`` over the
    whole matrix).
    """
    _require_spin2(basis, "transform_uv")
    cutoff = basis.cutoff
    D = displacement_matrix(0.5j * p.lamb_dicke, basis).entries
    rotation = np.diag((-1j) ** np.arange(cutoff))
    DR = D @ rotation / math.sqrt(2.0)
    DdR = D.conj().T @ rotation / math.sqrt(2.0)
    dim = basis.dim
    UV = np.zeros((dim, dim), dtype=complex)
    n = np.arange(cutoff)
    up = 2 * n + 1
    dn = 2 * n
    UV[np.ix_(up, up)] = DR
    UV[np.ix_(up, dn)] = -DR
    UV[np.ix_(dn, up)] = DdR
    UV[np.ix_(dn, dn)] = DdR
    defect = float(np.max(np.abs(UV.conj().T @ UV - np.eye(dim))))
    return OperatorMatrix(UV, basis, meta={"unitarity_defect": defect})
