"""Independent validation layer: dense diagonalization over the truncated basis.

Every analytic object in this package (closed forms, terminated series, RWA
spectra) is checked against direct numerical diagonalization of the same
Hamiltonian. This module owns that machinery: the eigensolver wrapper, eigenpair
matching with degeneracy awareness, cutoff-convergence reporting, and the
combined validator for series eigensolutions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .errors import NonHermitianError, TruncationError
from .model import FockBasis, ModelParams, OperatorMatrix, build_h_transformed

__all__ = [
    "Spectrum",
    "EigenPair",
    "ConvergenceReport",
    "ValidationReport",
    "hermitian_eigensystem",
    "nearest_eigenpair",
    "cutoff_convergence",
    "validate_series_solution",
    "DEGENERACY_TOL",
]

#: Two eigenvalues closer than this are treated as one degenerate level.
DEGENERACY_TOL = 1e-8


@dataclass
class Spectrum:
    """Ascending eigenvalues (and optionally the matching eigenvector columns)."""

    eigenvalues: np.ndarray
    eigenvectors: Optional[np.ndarray]
    cutoff: int

    def interior(self) -> np.ndarray:
        """The trusted (lowest-third) eigenvalues; the rest feel the truncation."""
        k = len(self.eigenvalues) // 3
        return self.eigenvalues[:k]


class EigenPair(NamedTuple):
    value: float
    vector: Optional[np.ndarray]
    gap_to_next: float


@dataclass
class ConvergenceReport:
    target_energy: float
    estimates: list  # of (cutoff, nearest eigenvalue, gap) tuples
    converged: bool
    final_error: float


@dataclass
class ValidationReport:
    """Outcome of checking one series solution against the diagonalization oracle.

    ``passed`` requires all three gates: eigenvalue distance < 1e-6, Rayleigh
    residual < 1e-7, and overlap with the (possibly degenerate) eigenspace
    > 0.999. ``inconclusive`` marks runs where the basis was too small to decide
    (tail mass of the reconstructed vector not negligible); such runs are not
    failures and carry a ``recommended_cutoff``.
    """

    residual: float
    eigen_gap: float
    overlap: float
    passed: bool
    inconclusive: bool = False
    recommended_cutoff: Optional[int] = None


def hermitian_eigensystem(H: OperatorMatrix, want_vectors: bool = False) -> Spectrum:
    """Full ascending eigensystem of a Hermitian operator.

    Rejects inputs whose Hermiticity defect exceeds 1e-10 (with the defect in the
    error). Eigenvectors, when requested, are orthonormal columns matched to the
    eigenvalue order.
    """
    M = np.asarray(H.entries)
    defect = float(np.max(np.abs(M - M.conj().T)))
    if defect >= 1e-10:
        raise NonHermitianError(
            f"matrix is not Hermitian (defect {defect:.3e} >= 1e-10)", defect=defect
        )
    if want_vectors:
        w, v = np.linalg.eigh(M)
        return Spectrum(w, v, cutoff=H.basis.cutoff)
    w = np.linalg.eigvalsh(M)
    return Spectrum(w, None, cutoff=H.basis.cutoff)


def nearest_eigenpair(s: Spectrum, target: float) -> EigenPair:
    """The eigenvalue nearest to ``target``; ties break toward the smaller one.

    ``gap_to_next`` is the distance from ``target`` to the *second*-nearest
    eigenvalue, so a near-zero gap flags a (quasi-)degenerate match.
    """
    w = np.asarray(s.eigenvalues)
    if w.size == 0:
        raise ValueError("empty spectrum")
    dist = np.abs(w - target)
    # stable argmin returns the first (= smaller eigenvalue, ascending order) tie
    idx = int(np.argmin(dist))
    vector = s.eigenvectors[:, idx].copy() if s.eigenvectors is not None else None
    if w.size == 1:
        gap = float("inf")
    else:
        rest = np.delete(dist, idx)
        gap = float(np.min(rest))
    return EigenPair(value=float(w[idx]), vector=vector, gap_to_next=gap)


def cutoff_convergence(
    p: ModelParams, target: float, cutoffs: Sequence[int]
) -> ConvergenceReport:
    """Track the eigenvalue nearest to ``target`` across increasing cutoffs.

    ``converged`` iff the last two nearest-eigenvalue estimates differ by less
    than 1e-8; ``final_error`` is that last difference.
    """
    cutoffs = [int(c) for c in cutoffs]
    if len(cutoffs) < 2:
        raise ValueError("need at least 2 cutoffs")
    if any(b <= a for a, b in zip(cutoffs, cutoffs[1:])):
        raise ValueError(f"cutoffs must be strictly increasing, got {cutoffs}")
    estimates = []
    for cut in cutoffs:
        spec = hermitian_eigensystem(build_h_transformed(p, FockBasis(cut)))
        pair = nearest_eigenpair(spec, target)
        estimates.append((cut, pair.value, abs(pair.value - target)))
    final_error = abs(estimates[-1][1] - estimates[-2][1])
    return ConvergenceReport(
        target_energy=float(target),
        estimates=estimates,
        converged=bool(final_error < 1e-8),
        final_error=float(final_error),
    )


def validate_series_solution(sol, basis: FockBasis) -> ValidationReport:
    """Check a terminated series solution against direct diagonalization.

    Reconstructs the solution as a Fock-space vector, then tests (i) that the
    transformed Hamiltonian at the solution's parameters has an eigenvalue
    within 1e-6 of the solution energy, (ii) that the Rayleigh residual
    ||H v - E v|| is below 1e-7, and (iii) that the vector overlaps the matched
    eigenspace (all eigenvalues within the degeneracy tolerance of the nearest
    one) with norm > 0.999. A basis too small to represent the vector yields an
    inconclusive report instead of a failure.
    """
    from .series import series_to_fock  # deferred to avoid an import cycle

    H = build_h_transformed(sol.params, basis)
    try:
        state = series_to_fock(sol, basis)
    except TruncationError:
        return ValidationReport(
            residual=float("nan"),
            eigen_gap=float("nan"),
            overlap=0.0,
            passed=False,
            inconclusive=True,
            recommended_cutoff=2 * basis.cutoff,
        )
    v = state.amplitudes
    tail = float(np.sum(np.abs(v[-10 * basis.spin_dim :]) ** 2))
    if tail > 1e-8:
        return ValidationReport(
            residual=float("nan"),
            eigen_gap=float("nan"),
            overlap=0.0,
            passed=False,
            inconclusive=True,
            recommended_cutoff=2 * basis.cutoff,
        )
    E = float(sol.energy)
    residual = float(np.linalg.norm(H.entries @ v - E * v))
    spec = hermitian_eigensystem(H, want_vectors=True)
    pair = nearest_eigenpair(spec, E)
    eigen_gap = abs(pair.value - E)
    degenerate = np.abs(spec.eigenvalues - pair.value) < DEGENERACY_TOL
    subspace = spec.eigenvectors[:, degenerate]
    overlap = float(np.linalg.norm(subspace.conj().T @ v))
    passed = bool(eigen_gap < 1e-6 and residual < 1e-7 and overlap > 0.999)
    return ValidationReport(
        residual=residual, eigen_gap=float(eigen_gap), overlap=overlap, passed=passed
    )
