"""Riemannian conjugate-gradient optimization of IRS phase vectors.

The feasible set is the complex circle manifold: vectors q with
|q_n| = 1 for every element.  The objective being maximized is the
effective uplink channel gain |l + theta q|^2 where theta = A diag(h).
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._cg_kernels import cg_optimize
from .channels import complex_normal

_EMPTY_TRAJ = np.empty((0, 0), dtype=np.complex128)


@dataclass(frozen=True)
class EffectiveChannel:
    """Combined channel theta = A diag(h) plus the direct link l."""

    theta: np.ndarray  # (n_bs, n_irs)
    l: np.ndarray      # (n_bs,)


@dataclass(frozen=True)
class OptimizerSettings:
    """Stopping and line-search knobs for the CG phase optimizer.

    max_iters defaults to 10 N^2 when left unset, matching the expected
    O(N^2) iteration count of the conjugate-gradient scheme.
    """

    grad_tol: float = 1e-6
    max_iters: Optional[int] = None
    armijo_shrink: float = 0.5
    armijo_slope: float = 1e-4
    initial_step: float = 1.0

    def __post_init__(self):
        if self.grad_tol <= 0:
            raise ValueError("grad_tol must be positive")
        if self.max_iters is not None and self.max_iters < 1:
            raise ValueError("max_iters must be a positive integer")
        if not 0 < self.armijo_shrink < 1:
            raise ValueError("armijo_shrink must lie in (0,1)")
        if not 0 < self.armijo_slope < 1:
            raise ValueError("armijo_slope must lie in (0,1)")
        if self.initial_step <= 0:
            raise ValueError("initial_step must be positive")


@dataclass(frozen=True)
class PhaseOptimum:
    """Result of optimize_phases; converged=False means max_iters was hit."""

    q: np.ndarray
    gain: float
    iterations: int
    converged: bool
    grad_norm: float
    trajectory: Optional[np.ndarray] = None


def effective_channel(A, h, l=None) -> EffectiveChannel:
    """Fold the sensor->IRS channel into the IRS->BS matrix: theta = A diag(h).

    The direct link l defaults to zero when omitted.
    """
    A = np.asarray(A, dtype=np.complex128)
    h = np.asarray(h, dtype=np.complex128)
    if A.ndim != 2 or h.ndim != 1 or A.shape[1] != h.shape[0]:
        raise ValueError(f"shape mismatch: A {A.shape} vs h {h.shape}")
    if l is None:
        l = np.zeros(A.shape[0], dtype=np.complex128)
    else:
        l = np.asarray(l, dtype=np.complex128)
        if l.ndim != 1 or l.shape[0] != A.shape[0]:
            raise ValueError(f"direct link length {l.shape} does not match A {A.shape}")
    return EffectiveChannel(theta=A * h[np.newaxis, :], l=l)


def _check_q(q, ec: EffectiveChannel) -> np.ndarray:
    q = np.asarray(q, dtype=np.complex128)
    if q.shape != (ec.theta.shape[1],):
        raise ValueError(f"phase vector length {q.shape} vs theta {ec.theta.shape}")
    return q


def objective(q, ec: EffectiveChannel) -> float:
    """Minimization objective -|l + theta q|^2."""
    q = _check_q(q, ec)
    r = ec.l + ec.theta @ q
    return -float(np.vdot(r, r).real)


def channel_gain(q, ec: EffectiveChannel) -> float:
    """Effective uplink gain |l + theta q|^2."""
    return -objective(q, ec)


def euclidean_grad(q, ec: EffectiveChannel) -> np.ndarray:
    """Euclidean gradient -2 theta^H theta q - 2 theta^H l of the objective."""
    q = _check_q(q, ec)
    return -2.0 * (ec.theta.conj().T @ (ec.theta @ q + ec.l))


def project_tangent(v, q) -> np.ndarray:
    """Project v onto the tangent space at q: v - Re(v q*) q elementwise."""
    v = np.asarray(v, dtype=np.complex128)
    q = np.asarray(q, dtype=np.complex128)
    if v.shape != q.shape:
        raise ValueError("length mismatch")
    return v - (v.real * q.real + v.imag * q.imag) * q


def riemannian_grad(q, ec: EffectiveChannel) -> np.ndarray:
    return project_tangent(euclidean_grad(q, ec), q)


def retract(y) -> np.ndarray:
    """Map y back onto the manifold by elementwise normalization."""
    y = np.asarray(y, dtype=np.complex128)
    m = np.abs(y)
    if y.size and m.min() == 0.0:
        raise ValueError("retract undefined for zero-modulus elements")
    return y / m


def transport(p, q_next) -> np.ndarray:
    """Carry tangent vector p into the tangent space at q_next."""
    return project_tangent(p, q_next)


def optimize_phases(ec: EffectiveChannel, settings: Optional[OptimizerSettings] = None,
                    rng: Optional[np.random.Generator] = None,
                    q0: Optional[np.ndarray] = None,
                    trace: bool = False) -> PhaseOptimum:
    """Run Riemannian CG from a random (or given) start point.

    Non-convergence within max_iters is reported through the result
    flag, never raised.  The returned trajectory (when trace=True) holds
    the start point and every accepted iterate.
    """
    settings = settings or OptimizerSettings()
    n = ec.theta.shape[1]
    if n == 0:
        gain = float(np.vdot(ec.l, ec.l).real)
        q = np.empty(0, dtype=np.complex128)
        tr = q.reshape(1, 0) if trace else None
        return PhaseOptimum(q=q, gain=gain, iterations=0, converged=True,
                            grad_norm=0.0, trajectory=tr)
    if q0 is None:
        if rng is None:
            raise ValueError("need either q0 or rng for the start point")
        q0 = complex_normal(rng, n)
    q0 = _check_q(q0, ec)
    max_iters = settings.max_iters if settings.max_iters is not None else 10 * n * n
    if trace:
        traj = np.zeros((max_iters + 1, n), dtype=np.complex128)
    else:
        traj = _EMPTY_TRAJ
    q, gain, iters, converged, gnorm = cg_optimize(
        ec.theta, ec.l, q0, settings.grad_tol, max_iters,
        settings.armijo_shrink, settings.armijo_slope, settings.initial_step,
        traj, trace,
    )
    return PhaseOptimum(q=q, gain=float(gain), iterations=int(iters),
                        converged=bool(converged), grad_norm=float(gnorm),
                        trajectory=traj[: iters + 1] if trace else None)


def analytic_optimum_miso(l_scalar: complex, a_row, h):
    """Closed-form optimum for a single-antenna BS.

    With one BS antenna the gain is |l + sum_n a_n h_n q_n|^2, maximized
    by rotating every term onto the phase of l; the triangle inequality
    makes (|l| + sum_n |a_n h_n|)^2 an upper bound for any unit-modulus q.
    """
    a_row = np.asarray(a_row, dtype=np.complex128)
    h = np.asarray(h, dtype=np.complex128)
    if a_row.shape != h.shape or a_row.ndim != 1:
        raise ValueError("a_row and h must be equal-length vectors")
    terms = a_row * h
    target = np.angle(l_scalar)
    q = np.exp(1j * (target - np.angle(terms)))
    gain = (abs(l_scalar) + np.abs(terms).sum()) ** 2
    return q, float(gain)
