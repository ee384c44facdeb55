"""Terminated coherent-state (Bargmann) series eigensolutions.

In the Bargmann representation the transformed Hamiltonian acts on pairs of
analytic functions of one complex variable alpha (one function per internal
level), with the ladder operators realized as multiplication by alpha and
d/d alpha. Writing each component as ``exp(-z*alpha)`` times a power series with
coefficients ``b_n`` (upper level) and ``c_n`` (lower level) turns the eigenvalue
problem into a pair of coupled two-step recurrences. For special parameter
combinations the series terminates at a finite order N: the eigenvalue is then
exactly ``E = N + branch*eps`` with ``z = branch*g``, and the surviving
polynomial maps to a finite superposition of displaced Fock states.

This module implements those recurrences, the closed forms for termination
orders 1 and 2, the constraint quadratic behind order 2, the energy identity
shared by both order-1 branches, a numerical solver for general termination
order, the zero-coupling special case, and the conversion from Bargmann
polynomials to Fock-space vectors.

Termination structure used throughout: requesting ``b_n = c_n = 0`` for all
``n > N`` reduces (by the recurrences' two-step memory) to three residuals
``(b_{N+1}, c_{N+1}, c_N - branch*b_N)``. At the exact energy these three have
rank 2 — combining the two recurrences at step N gives
``g(N+1)(b_{N+1} +/- c_{N+1}) = (rabi/2)(c_N -/+ b_N)`` — so the independent
pair ``(c_N - branch*b_N, b_{N+1})`` characterizes the constraint manifold,
which at fixed lamb_dicke is a one-dimensional curve in (rabi, eps, c0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import (
    ConstraintInfeasibleError,
    DegenerateCaseError,
    DegenerateQuadraticError,
    IonSeriesError,
    NoSolutionFoundError,
    PoleError,
    SingularRecurrenceError,
    TruncationError,
)
from .model import FockBasis, ModelParams, derive_params, displacement_matrix
from .states import StateVector

__all__ = [
    "SeriesCoefficients",
    "SeriesSolution",
    "QuadraticCoeffs",
    "SpecialCaseSolution",
    "recurrence_coefficients",
    "case1_closed_form",
    "energy_identity_case1",
    "implied_detuning_case1",
    "appendix_quadratic",
    "case2_closed_form",
    "eq7_residual",
    "terminate_general",
    "special_case_small_eta",
    "series_to_fock",
    "bargmann_to_fock",
]

#: Relative denominator floor below which rational constraint forms raise
#: PoleError: a denominator is "at a pole" when it is this small compared to
#: the corresponding numerator scale (with an absolute floor of 1).
POLE_TOL = 1e-12


def _at_pole(denominator: float, numerator: float) -> bool:
    return abs(denominator) < POLE_TOL * max(1.0, abs(numerator))


def _norm_branch(branch) -> int:
    """Normalize a branch designator to +1 or -1."""
    if branch in (1, +1, "+", "plus"):
        return 1
    if branch in (-1, "-", "minus"):
        return -1
    raise ValueError(f"branch must be +1 or -1 (or '+'/'-'), got {branch!r}")


# ---------------------------------------------------------------------------
# recurrences
# ---------------------------------------------------------------------------

@dataclass
class SeriesCoefficients:
    """Series coefficients b_0..b_nmax (upper level) and c_0..c_nmax (lower level).

    ``z`` is the exponential prefactor parameter, ``energy`` the trial eigenvalue
    the coefficients were generated with. b_0 = 1 is the normalization convention.
    """

    b: np.ndarray
    c: np.ndarray
    z: float
    energy: float

    def __post_init__(self):
        self.b = np.asarray(self.b, dtype=float)
        self.c = np.asarray(self.c, dtype=float)
        if self.b.shape != self.c.shape or self.b.ndim != 1:
            raise ValueError("b and c must be 1-D arrays of equal length")
        if not (np.all(np.isfinite(self.b)) and np.all(np.isfinite(self.c))):
            raise ValueError("series coefficients must be finite")


def _raw_recurrence(
    E: float, z: float, rabi: float, g: float, eps: float, c0: float, n_max: int
) -> Tuple[np.ndarray, np.ndarray]:
    """Generate b_0..b_{n_max}, c_0..c_{n_max} from the two coupled recurrences.

    Seeds: b_0 = 1, c_0 = c0, and both coefficients vanish at negative index.
    """
    b = np.zeros(n_max + 1)
    c = np.zeros(n_max + 1)
    b[0] = 1.0
    c[0] = c0
    for n in range(n_max):
        b_prev = b[n - 1] if n >= 1 else 0.0
        c_prev = c[n - 1] if n >= 1 else 0.0
        denom = g * (n + 1)
        b[n + 1] = (
            (E + rabi / 2.0 - n - g * g) * c[n]
            + (g * z - eps) * b[n]
            - g * b_prev
            + z * c_prev
        ) / denom
        c[n + 1] = (
            (E - rabi / 2.0 - n - g * g) * b[n]
            + (g * z - eps) * c[n]
            - g * c_prev
            + z * b_prev
        ) / denom
    return b, c


def recurrence_coefficients(
    E: float, z: float, p: ModelParams, n_max: int, c0: float
) -> SeriesCoefficients:
    """Run the coupled series recurrences for n = 0..n_max-1.

    Requires g = lamb_dicke/2 > 0 (the update divides by g) and n_max >= 2.
    """
    d = derive_params(p)
    if d.g == 0:
        raise SingularRecurrenceError(
            "lamb_dicke = 0 makes the recurrence singular; "
            "use special_case_small_eta for the zero-coupling regime"
        )
    if n_max < 2:
        raise ValueError(f"n_max must be >= 2, got {n_max}")
    b, c = _raw_recurrence(float(E), float(z), p.rabi, d.g, d.eps, float(c0), int(n_max))
    return SeriesCoefficients(b=b, c=c, z=float(z), energy=float(E))


def _termination_residual(b: np.ndarray, c: np.ndarray, order: int, branch: int) -> float:
    return float(
        max(abs(b[order + 1]), abs(c[order + 1]), abs(c[order] - branch * b[order]))
    )


@dataclass
class SeriesSolution:
    """A terminated series eigensolution of the transformed Hamiltonian.

    energy = order + branch*eps holds by construction; termination_residual is
    the max-norm of (b_{N+1}, c_{N+1}, c_N - branch*b_N) re-evaluated through the
    recurrences. ``jacobian_rank`` and ``oracle_gap`` are filled by the numeric
    solver when available.
    """

    order: int
    branch: int
    params: ModelParams
    energy: float
    coeffs: SeriesCoefficients
    termination_residual: float
    jacobian_rank: Optional[int] = None
    oracle_gap: Optional[float] = None

    def __post_init__(self):
        if self.order < 1:
            raise ValueError(f"order must be >= 1, got {self.order}")
        self.branch = _norm_branch(self.branch)
        d = derive_params(self.params)
        expected = self.order + self.branch * d.eps
        if abs(self.energy - expected) > 1e-12 * max(1.0, abs(expected)):
            raise ValueError(
                f"energy {self.energy} != order + branch*eps = {expected}"
            )

    @property
    def c0(self) -> float:
        return float(self.coeffs.c[0])


def _solution_from_point(
    order: int, branch: int, eta: float, rabi: float, eps: float, c0: float
) -> SeriesSolution:
    """Assemble a SeriesSolution at an explicit constraint point."""
    energy = order + branch * eps
    z = branch * (eta / 2.0)
    params = ModelParams(rabi=rabi, lamb_dicke=eta, detuning=-2.0 * eps)
    coeffs = recurrence_coefficients(energy, z, params, n_max=order + 1, c0=c0)
    residual = _termination_residual(coeffs.b, coeffs.c, order, branch)
    return SeriesSolution(
        order=order,
        branch=branch,
        params=params,
        energy=float(energy),
        coeffs=coeffs,
        termination_residual=residual,
    )


# ---------------------------------------------------------------------------
# order 1 closed form
# ---------------------------------------------------------------------------

def case1_closed_form(eta: float, eps: float, branch) -> SeriesSolution:
    """Order-1 terminated solution at given (lamb_dicke, eps) on one branch.

    The constraint fixes rabi = 2*sqrt(1 + 2*branch*eps - eta^2); the energy is
    E = 1 + branch*eps with z = branch*g. Raises ConstraintInfeasibleError when
    the radicand is negative and SingularRecurrenceError at eta = 0 (handled by
    special_case_small_eta instead).
    """
    branch = _norm_branch(branch)
    if eta == 0:
        raise SingularRecurrenceError(
            "eta = 0 is singular for the series recurrence; "
            "use special_case_small_eta"
        )
    if eta < 0:
        raise ValueError("eta must be positive")
    g = eta / 2.0
    radicand = 1.0 + 2.0 * branch * eps - eta * eta
    if radicand < 0:
        raise ConstraintInfeasibleError(
            f"order-1 constraint infeasible: 1 + 2*({branch})*eps - eta^2 = "
            f"{radicand:.6g} < 0"
        )
    rabi = 2.0 * math.sqrt(radicand)
    g2 = g * g
    se = branch * eps
    numer = 1.0 - rabi / 2.0 + 2.0 * se - 2.0 * g2
    denom = 1.0 + rabi / 2.0 + 2.0 * se - 2.0 * g2
    if _at_pole(denom, numer):
        raise PoleError(
            "order-1 coefficient denominator vanished",
            location=f"1 + rabi/2 + 2*branch*eps - 2g^2 at eta={eta}, eps={eps}",
            value=abs(denom),
        )
    # branch +: c0 = numer/denom; branch -: the mirrored formula carries a sign
    c0 = (numer / denom) if branch == 1 else -(numer / denom)
    return _solution_from_point(1, branch, eta, rabi, eps, c0)


def energy_identity_case1(rabi: float, eta: float) -> float:
    """The single energy expression shared by both order-1 branches.

    E = 1/2 + eta^2/2 + rabi^2/8. Together with E = 1 + branch*eps this inverts
    to the implied detuning exposed by :func:`implied_detuning_case1`.
    """
    return 0.5 + 0.5 * eta * eta + rabi * rabi / 8.0


def implied_detuning_case1(rabi: float, eta: float, branch) -> float:
    """The eps value at which the order-1 constraint holds for given (rabi, eta)."""
    branch = _norm_branch(branch)
    return branch * (rabi * rabi / 8.0 - 0.5 + 0.5 * eta * eta)


# ---------------------------------------------------------------------------
# order 2: constraint quadratic and closed form
# ---------------------------------------------------------------------------

@dataclass
class QuadraticCoeffs:
    """Coefficients of the order-2 constraint quadratic A*X^2 + B*X + C = 0.

    X = eps - g^2 on the plus branch; the minus branch satisfies the mirrored
    equation A*Y^2 - B*Y + C = 0 with Y = eps + g^2 (same A, B, C).
    """

    A: float
    B: float
    C: float
    discriminant: float


def appendix_quadratic(rabi: float, eta: float) -> QuadraticCoeffs:
    """Constraint quadratic for order-2 termination, derived from the recurrences.

    A = 8(1 - g^2); B and C are polynomials in (rabi, g) fixed by eliminating c0
    from the two independent termination conditions. Degenerates (A = 0) at
    g = 1, which is rejected.
    """
    g = eta / 2.0
    g2 = g * g
    if abs(1.0 - g2) < 1e-14:
        raise DegenerateQuadraticError("leading coefficient 8(1 - g^2) vanishes at g = 1")
    W2 = rabi * rabi
    A = 8.0 * (1.0 - g2)
    B = 12.0 - 28.0 * g2 + 16.0 * g2 * g2 - 1.5 * W2 * (1.0 - g2)
    C = (
        4.0
        - 24.0 * g2
        + 28.0 * g2 * g2
        - 8.0 * g2 * g2 * g2
        - 1.25 * W2
        + 2.75 * W2 * g2
        - 1.5 * W2 * g2 * g2
        + (W2 * W2 / 16.0) * (1.0 - g2)
    )
    return QuadraticCoeffs(A=A, B=B, C=C, discriminant=B * B - 4.0 * A * C)


def _affine_conditions(
    order: int, branch: int, rabi: float, g: float, eps: float
) -> Tuple[float, float, float, float]:
    """The two independent termination conditions as affine functions of c0.

    Returns (t0, t_slope, u0, u_slope) where
    T(c0) = t0 + t_slope*c0 is c_N - branch*b_N and
    U(c0) = u0 + u_slope*c0 is b_{N+1}.
    Both are exactly affine because every coefficient generated by the
    recurrences is affine in the seed c0.
    """
    E = order + branch * eps
    z = branch * g
    b0v, c0v = _raw_recurrence(E, z, rabi, g, eps, 0.0, order + 1)
    b1v, c1v = _raw_recurrence(E, z, rabi, g, eps, 1.0, order + 1)
    t0 = c0v[order] - branch * b0v[order]
    t1 = c1v[order] - branch * b1v[order]
    u0 = b0v[order + 1]
    u1 = b1v[order + 1]
    return t0, t1 - t0, u0, u1 - u0


def case2_closed_form(rabi: float, eta: float, branches=(1, -1)) -> list:
    """All order-2 terminated solutions at given (rabi, lamb_dicke).

    Solves each branch's constraint quadratic independently (plus branch in
    X = eps - g^2, minus branch in Y = eps + g^2), recovers c0 from the linear
    condition c_2 = branch*b_2, and regenerates all coefficients through the
    recurrences. Returns an empty list when the discriminant is negative
    (no real isolated solution at this parameter pair). The two branches yield
    identical energy sets.
    """
    if eta <= 0:
        raise SingularRecurrenceError("case2_closed_form requires eta > 0")
    q = appendix_quadratic(rabi, eta)
    if q.discriminant < 0:
        return []
    g = eta / 2.0
    g2 = g * g
    root = math.sqrt(q.discriminant)
    solutions = []
    for branch in branches:
        branch = _norm_branch(branch)
        for sign in (1.0, -1.0):
            if branch == 1:
                X = (-q.B + sign * root) / (2.0 * q.A)
                eps = X + g2
            else:
                # A*Y^2 - B*Y + C = 0
                Y = (q.B + sign * root) / (2.0 * q.A)
                eps = Y - g2
            t0, t_slope, _, _ = _affine_conditions(2, branch, rabi, g, eps)
            if _at_pole(t_slope, t0):
                raise PoleError(
                    "c0 determination degenerate at an order-2 root",
                    location=f"d(c_2 - branch*b_2)/dc0 at rabi={rabi}, eta={eta}, eps={eps}",
                    value=abs(t_slope),
                )
            c0 = -t0 / t_slope
            solutions.append(_solution_from_point(2, branch, eta, rabi, eps, c0))
    return solutions


def eq7_residual(rabi: float, eta: float, eps: float, branch) -> float:
    """Order-2 constraint residual in ratio form.

    The two independent termination conditions each determine c0 as a ratio of
    affine coefficients; the residual is |c0_from(c_2 - branch*b_2) -
    c0_from(b_3)|, which vanishes exactly on the constraint manifold. Either
    determination's denominator falling below 1e-14 raises PoleError with the
    offending location (the poles are real: they are roots of the respective
    denominators in eps).
    """
    branch = _norm_branch(branch)
    if eta <= 0:
        raise SingularRecurrenceError("eq7_residual requires eta > 0")
    g = eta / 2.0
    t0, t_slope, u0, u_slope = _affine_conditions(2, branch, rabi, g, eps)
    if _at_pole(t_slope, t0):
        raise PoleError(
            "pole of the c0 ratio from the c_2 - branch*b_2 condition",
            location=f"rabi={rabi}, eta={eta}, eps={eps}, branch={branch:+d}",
            value=abs(t_slope),
        )
    if _at_pole(u_slope, u0):
        raise PoleError(
            "pole of the c0 ratio from the b_3 condition",
            location=f"rabi={rabi}, eta={eta}, eps={eps}, branch={branch:+d}",
            value=abs(u_slope),
        )
    return abs((-t0 / t_slope) - (-u0 / u_slope))


# ---------------------------------------------------------------------------
# general-order numerical termination solver
# ---------------------------------------------------------------------------

_HEURISTIC_SEEDS = (
    (0.8, -0.3, 0.5),
    (0.8, -1.0, -0.8),
    (1.6, -0.3, -0.8),
    (1.6, -1.0, 0.5),
    (0.3, -0.6, 0.5),
    (2.4, -0.6, -0.8),
    (1.0, -1.4, 0.5),
    (2.0, -0.1, -0.8),
)


def terminate_general(
    order: int,
    branch,
    eta: float,
    guess: Optional[Tuple[float, float, float]] = None,
    *,
    fix: Optional[str] = None,
    tol: float = 1e-10,
    step_tol: float = 1e-12,
    max_iter: int = 200,
    n_starts: int = 8,
    seed: int = 0,
    validate: bool = True,
    cutoff: int = 150,
) -> SeriesSolution:
    """Numerically terminate the series at a given order.

    Finds (rabi, eps, c0) such that generating the coefficients with
    E = order + branch*eps and z = branch*g makes the residual vector
    (b_{N+1}, c_{N+1}, c_N - branch*b_N) vanish in max-norm below ``tol``.

    The residual system has rank 2, so at fixed lamb_dicke the solutions form
    one-dimensional curves; the default (damped Gauss-Newton with minimum-norm
    least-squares steps and finite-difference Jacobians) converges to the
    nearest manifold point. Pass ``fix="eps"`` or ``fix="rabi"`` to pin that
    parameter at its value in ``guess`` and recover the isolated point the
    closed forms parametrize (needed for exact anchor recovery).

    ``guess`` is (rabi, eps, c0); without one, 8 heuristic seeds are tried.
    When ``validate`` is set, the solution's energy is checked to be an
    eigenvalue of the transformed Hamiltonian (cutoff ``cutoff``) within 1e-6.
    Raises NoSolutionFoundError (with the per-start residual trace) if nothing
    converges; converged points with rabi < 0 are rejected as out of domain.
    """
    branch = _norm_branch(branch)
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    if eta <= 0:
        raise SingularRecurrenceError("terminate_general requires eta > 0")
    if fix not in (None, "eps", "rabi"):
        raise ValueError(f'fix must be None, "eps", or "rabi", got {fix!r}')
    if fix is not None and guess is None:
        raise ValueError("fix requires an explicit guess supplying the pinned value")
    g = eta / 2.0

    def residual_full(x: np.ndarray) -> np.ndarray:
        rabi, eps, c0 = x
        E = order + branch * eps
        b, c = _raw_recurrence(E, branch * g, rabi, g, eps, c0, order + 1)
        return np.array(
            [b[order + 1], c[order + 1], c[order] - branch * b[order]]
        )

    if fix == "eps":
        pinned_index, free_index = 1, (0, 2)
    elif fix == "rabi":
        pinned_index, free_index = 0, (1, 2)
    else:
        pinned_index, free_index = None, (0, 1, 2)

    def embed(xfree: np.ndarray, pinned_value: float) -> np.ndarray:
        full = np.empty(3)
        if pinned_index is not None:
            full[pinned_index] = pinned_value
        full[list(free_index)] = xfree
        return full

    rng = np.random.default_rng(seed)
    if guess is not None:
        base = np.asarray(guess, dtype=float)
        starts = [base]
        for _ in range(max(0, n_starts - 1)):
            starts.append(base * (1.0 + 0.02 * rng.standard_normal(3)) + 0.01 * rng.standard_normal(3))
    else:
        # the minus branch's manifold mirrors the plus one in eps
        starts = [np.array([s[0], branch * s[1], s[2]]) for s in _HEURISTIC_SEEDS]
        starts = starts[:n_starts]

    trace = []
    for start in starts:
        pinned_value = float(start[pinned_index]) if pinned_index is not None else 0.0
        x = np.asarray(start, dtype=float)[list(free_index)]
        F = residual_full(embed(x, pinned_value))
        norm = np.linalg.norm(F)
        converged = False
        for _ in range(max_iter):
            if np.max(np.abs(F)) < tol:
                converged = True
                break
            # central finite-difference Jacobian, column per free unknown
            J = np.empty((3, len(x)))
            for k in range(len(x)):
                h = 1e-7 * max(1.0, abs(x[k]))
                xp = x.copy()
                xm = x.copy()
                xp[k] += h
                xm[k] -= h
                J[:, k] = (
                    residual_full(embed(xp, pinned_value))
                    - residual_full(embed(xm, pinned_value))
                ) / (2.0 * h)
            step = np.linalg.lstsq(J, -F, rcond=None)[0]
            if not np.all(np.isfinite(step)):
                break
            lam = 1.0
            improved = False
            for _ in range(30):
                x_new = x + lam * step
                F_new = residual_full(embed(x_new, pinned_value))
                norm_new = np.linalg.norm(F_new)
                if np.isfinite(norm_new) and norm_new < norm:
                    x, F, norm = x_new, F_new, norm_new
                    improved = True
                    break
                lam *= 0.5
            if not improved or np.linalg.norm(lam * step) < step_tol:
                break
        if np.max(np.abs(F)) < tol:
            converged = True
        trace.append(float(np.max(np.abs(F))))
        if not converged:
            continue
        full = embed(x, pinned_value)
        rabi, eps, c0 = (float(full[0]), float(full[1]), float(full[2]))
        if rabi < 0:
            trace[-1] = float("inf")  # out-of-domain convergence point
            continue
        sol = _solution_from_point(order, branch, eta, rabi, eps, c0)
        # Rank of the full residual Jacobian at the converged point: 2, because
        # one linear dependency ties the three residuals together on the
        # manifold, leaving a one-dimensional solution curve in (rabi, eps, c0).
        J_full = np.empty((3, 3))
        for k in range(3):
            h = 1e-7 * max(1.0, abs(full[k]))
            xp = full.copy()
            xm = full.copy()
            xp[k] += h
            xm[k] -= h
            J_full[:, k] = (residual_full(xp) - residual_full(xm)) / (2.0 * h)
        svals = np.linalg.svd(J_full, compute_uv=False)
        sol.jacobian_rank = int(np.sum(svals > 1e-6 * max(svals[0], 1e-300)))
        if validate:
            from .oracle import hermitian_eigensystem, nearest_eigenpair
            from .model import build_h_transformed

            spec = hermitian_eigensystem(
                build_h_transformed(sol.params, FockBasis(cutoff))
            )
            gap = abs(nearest_eigenpair(spec, sol.energy).value - sol.energy)
            if gap > 1e-6:
                trace[-1] = float("inf")
                continue
            sol.oracle_gap = float(gap)
        return sol
    raise NoSolutionFoundError(
        f"no order-{order} termination point found for branch {branch:+d}, "
        f"eta={eta} after {len(starts)} start(s)",
        residual_trace=trace,
    )


# ---------------------------------------------------------------------------
# zero-coupling special case
# ---------------------------------------------------------------------------

@dataclass
class SpecialCaseSolution:
    """One of the two zero-coupling (eta -> 0) solutions.

    ``b0, b1, c0, c1`` are the linear-polynomial coefficients of the two
    components; ``psi_os`` is the corresponding lab-frame two-component state
    supported on the lowest two Fock levels.
    """

    energy: float
    b0: float
    b1: float
    c0: float
    c1: float
    psi_os: StateVector


def special_case_small_eta(rabi: float, eps: float) -> Tuple[SpecialCaseSolution, SpecialCaseSolution]:
    """Both zero-coupling solutions at given (rabi, eps).

    Energies are E = 1 +/- sqrt(eps^2 + rabi^2/4) with z = 0. Coefficient
    convention: b0 = 1, b1 = 0, and c0/b0 = c1/b1 = (E - rabi/2 - 1)/eps (the
    c-coefficients inherit the ratio; with b1 = 0 this gives c1 = 0). At
    eps = 0 the ratio is replaced by its limit: (b0, c0) = (1, 0) on the plus
    solution and (0, 1) on the minus one. The lab-frame state places
    (b0 - c0)/sqrt(2) on the upper level and (b0 + c0)/sqrt(2) on the lower
    level of Fock index 0, and -i(b1 + c1)/sqrt(2) on both levels of index 1,
    then normalizes.
    """
    if rabi < 0:
        raise ValueError("rabi must be >= 0")
    R = math.sqrt(eps * eps + rabi * rabi / 4.0)
    if R == 0:
        raise DegenerateCaseError(
            "rabi = 0 and eps = 0 leave the zero-coupling doublet undefined"
        )
    basis = FockBasis(cutoff=2, spin_dim=2)
    out = []
    for sign in (1, -1):
        energy = 1.0 + sign * R
        if eps != 0:
            ratio = (sign * R - rabi / 2.0) / eps
            b0, c0 = 1.0, ratio
        else:
            b0, c0 = (1.0, 0.0) if sign == 1 else (0.0, 1.0)
        b1 = c1 = 0.0
        amps = np.zeros(4, dtype=complex)
        amps[1] = (b0 - c0) / math.sqrt(2.0)  # upper level, Fock 0
        amps[0] = (b0 + c0) / math.sqrt(2.0)  # lower level, Fock 0
        amps[3] = -1j * (b1 + c1) / math.sqrt(2.0)  # upper level, Fock 1
        amps[2] = -1j * (b1 + c1) / math.sqrt(2.0)  # lower level, Fock 1
        amps = amps / np.linalg.norm(amps)
        psi_os = StateVector(amplitudes=amps, basis=basis, normalized=True)
        out.append(
            SpecialCaseSolution(energy=energy, b0=b0, b1=b1, c0=c0, c1=c1, psi_os=psi_os)
        )
    return out[0], out[1]


# ---------------------------------------------------------------------------
# Bargmann polynomial -> Fock vector
# ---------------------------------------------------------------------------

def bargmann_to_fock(poly: Sequence[float], z: float, basis: FockBasis) -> np.ndarray:
    """Fock amplitudes (up to overall normalization) of exp(-z*alpha) * P(alpha).

    Steps: (i) Taylor-shift the polynomial to powers of (alpha + z); (ii) map
    (alpha + z)^m to sqrt(m!) |m>, since exp(-z*alpha)(alpha + z)^m is (up to an
    m-independent factor) the displaced number state D(-z) sqrt(m!) |m>; (iii)
    apply the displacement by -z. Returns the raw (unnormalized) motional
    vector, length basis.cutoff.
    """
    if basis.spin_dim != 1:
        basis = basis.motional()
    poly = np.asarray(poly, dtype=complex)
    deg = len(poly) - 1
    if deg >= basis.cutoff:
        raise TruncationError(
            f"polynomial degree {deg} does not fit in cutoff {basis.cutoff}"
        )
    shifted = np.zeros(deg + 1, dtype=complex)
    for m in range(deg + 1):
        total = 0.0 + 0.0j
        for n in range(m, deg + 1):
            total += poly[n] * math.comb(n, m) * (-z) ** (n - m)
        shifted[m] = total
    fock = np.zeros(basis.cutoff, dtype=complex)
    for m in range(deg + 1):
        fock[m] = shifted[m] * math.sqrt(math.factorial(m))
    D = displacement_matrix(-z, basis).entries
    return D @ fock


def series_to_fock(sol: SeriesSolution, basis: FockBasis) -> StateVector:
    """Normalized Fock-space vector of a terminated series solution.

    Maps each component's Bargmann polynomial through the Taylor-shift /
    displaced-number-state construction and interleaves upper (b) and lower (c)
    components. The basis must have spin_dim = 2 and comfortably contain the
    displaced support; a tail-mass violation raises TruncationError.
    """
    if basis.spin_dim != 2:
        raise ValueError("series_to_fock needs a spin_dim = 2 basis")
    if basis.cutoff < sol.order + 10:
        raise TruncationError(
            f"cutoff {basis.cutoff} too small for order {sol.order} solution"
        )
    n_keep = sol.order + 1
    up = bargmann_to_fock(sol.coeffs.b[:n_keep], sol.coeffs.z, basis.motional())
    dn = bargmann_to_fock(sol.coeffs.c[:n_keep], sol.coeffs.z, basis.motional())
    amps = np.zeros(basis.dim, dtype=complex)
    amps[1::2] = up
    amps[0::2] = dn
    norm = np.linalg.norm(amps)
    if norm == 0:
        raise IonSeriesError("series solution mapped to the zero vector")
    amps = amps / norm
    tail = float(np.sum(np.abs(amps[-10 * basis.spin_dim :]) ** 2))
    if tail > 1e-8:
        raise TruncationError(
            f"tail mass {tail:.3e} above the truncation budget at cutoff {basis.cutoff}"
        )
    return StateVector(amplitudes=amps, basis=basis, normalized=True)
