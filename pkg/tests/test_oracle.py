"""Diagonalization oracle: eigensystem wrapper, matching, convergence, validation."""

import numpy as np
import pytest

from ionseries.errors import NonHermitianError
from ionseries.model import FockBasis, ModelParams, OperatorMatrix, build_h_transformed
from ionseries.oracle import (
    Spectrum,
    cutoff_convergence,
    hermitian_eigensystem,
    nearest_eigenpair,
    validate_series_solution,
)
from ionseries.series import case1_closed_form


P_ANCHOR = ModelParams(rabi=1.9595917942265424, lamb_dicke=0.2, detuning=0.0)


class TestEigensystem:
    def test_rejects_non_hermitian_with_defect(self):
        M = OperatorMatrix(np.array([[0.0, 1.0], [0.0, 0.0]]), FockBasis(2, spin_dim=1))
        with pytest.raises(NonHermitianError) as exc_info:
            hermitian_eigensystem(M)
        assert exc_info.value.defect == pytest.approx(1.0, abs=0.0)

    def test_eigenvalues_ascending(self):
        spec = hermitian_eigensystem(build_h_transformed(P_ANCHOR, FockBasis(40)))
        assert np.all(np.diff(spec.eigenvalues) >= 0)

    def test_reconstruction_bound(self):
        H = build_h_transformed(P_ANCHOR, FockBasis(150))
        spec = hermitian_eigensystem(H, want_vectors=True)
        R = spec.eigenvectors @ np.diag(spec.eigenvalues) @ spec.eigenvectors.conj().T
        assert np.linalg.norm(R - H.entries) < 1e-8 * np.linalg.norm(H.entries)

    def test_vectors_orthonormal(self):
        spec = hermitian_eigensystem(
            build_h_transformed(P_ANCHOR, FockBasis(40)), want_vectors=True
        )
        V = spec.eigenvectors
        assert np.max(np.abs(V.conj().T @ V - np.eye(V.shape[1]))) < 1e-12

    def test_interior_is_lowest_third(self):
        spec = Spectrum(np.arange(9.0), None, cutoff=9)
        assert np.array_equal(spec.interior(), np.array([0.0, 1.0, 2.0]))


class TestNearestEigenpair:
    def test_picks_nearest_and_reports_gap_to_second(self):
        spec = Spectrum(np.array([0.3, 0.99, 2.0]), None, cutoff=3)
        pair = nearest_eigenpair(spec, 1.0)
        assert pair.value == 0.99
        assert pair.gap_to_next == pytest.approx(0.7, rel=1e-15)
        assert pair.vector is None

    def test_tie_breaks_toward_smaller_eigenvalue(self):
        spec = Spectrum(np.array([0.0, 2.0]), None, cutoff=2)
        assert nearest_eigenpair(spec, 1.0).value == 0.0

    def test_single_eigenvalue_has_infinite_gap(self):
        spec = Spectrum(np.array([1.5]), None, cutoff=1)
        assert nearest_eigenpair(spec, 1.0).gap_to_next == float("inf")

    def test_empty_spectrum_rejected(self):
        with pytest.raises(ValueError):
            nearest_eigenpair(Spectrum(np.array([]), None, cutoff=0), 1.0)


class TestCutoffConvergence:
    def test_exact_solution_energy_converges(self):
        report = cutoff_convergence(P_ANCHOR, 1.0, [60, 80, 100])
        assert report.converged
        assert report.final_error == 0.0
        assert [c for c, _, _ in report.estimates] == [60, 80, 100]
        assert all(gap < 1e-12 for _, _, gap in report.estimates)

    def test_truncation_drift_is_flagged(self):
        # a mid-spectrum eigenvalue of a strongly-coupled model still moves
        # between cutoffs 30 and 40, so the report must not claim convergence
        p = ModelParams(rabi=2.0, lamb_dicke=1.8, detuning=0.0)
        ref = hermitian_eigensystem(build_h_transformed(p, FockBasis(200)))
        target = float(ref.interior()[40])
        report = cutoff_convergence(p, target, [30, 40])
        assert not report.converged
        assert report.final_error > 1e-3

    def test_cutoffs_must_increase(self):
        with pytest.raises(ValueError):
            cutoff_convergence(P_ANCHOR, 1.0, [60, 60])
        with pytest.raises(ValueError):
            cutoff_convergence(P_ANCHOR, 1.0, [100])


class TestValidateSeriesSolution:
    def test_closed_form_solution_passes(self):
        sol = case1_closed_form(0.2, 0.0, 1)
        report = validate_series_solution(sol, FockBasis(150))
        assert report.passed
        assert not report.inconclusive
        assert report.eigen_gap < 1e-10
        assert report.residual < 1e-10
        assert report.overlap > 0.999

    def test_wrong_energy_fails_conclusively(self):
        sol = case1_closed_form(0.2, 0.0, 1)
        sol.energy += 0.01
        report = validate_series_solution(sol, FockBasis(150))
        assert not report.passed
        assert not report.inconclusive
        assert report.eigen_gap == pytest.approx(0.01, abs=1e-4)

    def test_too_small_basis_is_inconclusive(self):
        sol = case1_closed_form(0.2, 0.0, 1)
        report = validate_series_solution(sol, FockBasis(8))
        assert report.inconclusive
        assert not report.passed
        assert report.recommended_cutoff == 16

    def test_tail_heavy_reconstruction_is_inconclusive(self):
        # a wider displaced solution that fits degree-wise but leaves tail mass
        sol = case1_closed_form(1.2, 0.4, 1)
        report = validate_series_solution(sol, FockBasis(12))
        assert report.inconclusive
        assert report.recommended_cutoff == 24
