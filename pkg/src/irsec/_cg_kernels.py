"""Conjugate-gradient kernels for phase optimization on the circle manifold.

Two interchangeable implementations of the same algorithm: a scalar-loop
version compiled with numba when available, and a vectorized numpy
fallback.  Both maximize |l + theta q|^2 over unit-modulus q via
Riemannian CG with Polak-Ribiere(+) directions, tangent-space transport,
normalization retraction, and monotone Armijo backtracking.

Call signature (both paths):
    (theta, l, q0, grad_tol, max_iters, shrink, slope, step0, traj, record)
    -> (q, gain, iters, converged, grad_norm)

``traj`` is a preallocated (cap, n) complex buffer; when ``record`` is
true, row 0 holds the start point and row s the s-th accepted iterate.
"""

import numpy as np

from ._accel import NUMBA_ENABLED, njit

_STEP_FLOOR = 1e-18
_MOD_FLOOR = 1e-30
# double precision cannot represent objective decreases below ~eps|f|;
# demanding them would jitter forever at the optimum, so such steps are
# rejected and the search stops (reported via the converged flag)
_STALL_REL = 1e-15


def _cg_core_loops(theta, l, q0, grad_tol, max_iters, shrink, slope, step0,
                   traj, record):
    nb = theta.shape[0]
    n = theta.shape[1]

    q = np.empty(n, np.complex128)
    for k in range(n):
        q[k] = q0[k] / abs(q0[k])

    # residual r = l + theta q and objective f = -|r|^2
    r = np.empty(nb, np.complex128)
    f = 0.0
    for b in range(nb):
        s = l[b]
        for k in range(n):
            s = s + theta[b, k] * q[k]
        r[b] = s
        f -= s.real * s.real + s.imag * s.imag

    # Riemannian gradient: project -2 theta^H r onto the tangent space
    g = np.empty(n, np.complex128)
    gnorm2 = 0.0
    for k in range(n):
        acc = 0.0 + 0.0j
        for b in range(nb):
            acc = acc + theta[b, k].conjugate() * r[b]
        e = -2.0 * acc
        t = e - (e.real * q[k].real + e.imag * q[k].imag) * q[k]
        g[k] = t
        gnorm2 += t.real * t.real + t.imag * t.imag

    p = np.empty(n, np.complex128)
    for k in range(n):
        p[k] = -g[k]

    if record and traj.shape[0] > 0:
        for k in range(n):
            traj[0, k] = q[k]

    tol2 = grad_tol * grad_tol
    step = step0
    iters = 0
    converged = gnorm2 <= tol2

    qn = np.empty(n, np.complex128)
    rn = np.empty(nb, np.complex128)
    gn = np.empty(n, np.complex128)

    while (not converged) and iters < max_iters:
        # directional derivative along p; reset to steepest descent if uphill
        d = 0.0
        for k in range(n):
            d += g[k].real * p[k].real + g[k].imag * p[k].imag
        if d >= 0.0:
            for k in range(n):
                p[k] = -g[k]
            d = -gnorm2

        # Armijo backtracking on the retracted step
        s = step
        fn = f
        accepted = False
        while s > _STEP_FLOOR:
            ok = True
            for k in range(n):
                y = q[k] + s * p[k]
                m = abs(y)
                if m < _MOD_FLOOR:
                    ok = False
                    break
                qn[k] = y / m
            if ok:
                fn = 0.0
                for b in range(nb):
                    acc = l[b]
                    for k in range(n):
                        acc = acc + theta[b, k] * qn[k]
                    rn[b] = acc
                    fn -= acc.real * acc.real + acc.imag * acc.imag
                if fn <= f + slope * s * d and f - fn > _STALL_REL * abs(f):
                    accepted = True
                    break
            s *= shrink
        if not accepted:
            break
        iters += 1

        # new Riemannian gradient at qn
        gn_norm2 = 0.0
        for k in range(n):
            acc = 0.0 + 0.0j
            for b in range(nb):
                acc = acc + theta[b, k].conjugate() * rn[b]
            e = -2.0 * acc
            t = e - (e.real * qn[k].real + e.imag * qn[k].imag) * qn[k]
            gn[k] = t
            gn_norm2 += t.real * t.real + t.imag * t.imag

        # PR+ coefficient with the old gradient transported to qn
        num = 0.0
        for k in range(n):
            tg = g[k] - (g[k].real * qn[k].real + g[k].imag * qn[k].imag) * qn[k]
            diff = gn[k] - tg
            num += gn[k].real * diff.real + gn[k].imag * diff.imag
        beta = num / gnorm2
        if beta < 0.0:
            beta = 0.0

        for k in range(n):
            tp = p[k] - (p[k].real * qn[k].real + p[k].imag * qn[k].imag) * qn[k]
            p[k] = -gn[k] + beta * tp
            q[k] = qn[k]
            g[k] = gn[k]
        f = fn
        gnorm2 = gn_norm2
        step = 2.0 * s
        if record and iters < traj.shape[0]:
            for k in range(n):
                traj[iters, k] = q[k]
        converged = gnorm2 <= tol2

    return q, -f, iters, converged, np.sqrt(gnorm2)


def cg_optimize_numpy(theta, l, q0, grad_tol, max_iters, shrink, slope, step0,
                      traj, record):
    """Vectorized twin of the loop kernel; identical control flow."""
    q = q0 / np.abs(q0)
    r = l + theta @ q
    f = -float(np.vdot(r, r).real)
    th_h = theta.conj().T

    def rgrad(rv, qv):
        e = -2.0 * (th_h @ rv)
        return e - (e.real * qv.real + e.imag * qv.imag) * qv

    g = rgrad(r, q)
    gnorm2 = float(np.vdot(g, g).real)
    p = -g

    if record and traj.shape[0] > 0:
        traj[0] = q

    tol2 = grad_tol * grad_tol
    step = step0
    iters = 0
    converged = gnorm2 <= tol2

    while (not converged) and iters < max_iters:
        d = float(np.vdot(g, p).real)
        if d >= 0.0:
            p = -g
            d = -gnorm2

        s = step
        fn = f
        qn = q
        rn = r
        accepted = False
        while s > _STEP_FLOOR:
            y = q + s * p
            m = np.abs(y)
            if m.min() >= _MOD_FLOOR:
                qn = y / m
                rn = l + theta @ qn
                fn = -float(np.vdot(rn, rn).real)
                if fn <= f + slope * s * d and f - fn > _STALL_REL * abs(f):
                    accepted = True
                    break
            s *= shrink
        if not accepted:
            break
        iters += 1

        gn = rgrad(rn, qn)
        gn_norm2 = float(np.vdot(gn, gn).real)
        tg = g - (g.real * qn.real + g.imag * qn.imag) * qn
        beta = max(0.0, float(np.vdot(gn, gn - tg).real) / gnorm2)
        tp = p - (p.real * qn.real + p.imag * qn.imag) * qn
        p = -gn + beta * tp
        q, r, f, g, gnorm2 = qn, rn, fn, gn, gn_norm2
        step = 2.0 * s
        if record and iters < traj.shape[0]:
            traj[iters] = q
        converged = gnorm2 <= tol2

    return q, -f, iters, converged, float(np.sqrt(gnorm2))


if NUMBA_ENABLED:
    _cg_core_jit = njit(cache=True)(_cg_core_loops)

    def cg_optimize_numba(theta, l, q0, grad_tol, max_iters, shrink, slope,
                          step0, traj, record):
        return _cg_core_jit(
            np.ascontiguousarray(theta, dtype=np.complex128),
            np.ascontiguousarray(l, dtype=np.complex128),
            np.ascontiguousarray(q0, dtype=np.complex128),
            float(grad_tol), int(max_iters), float(shrink), float(slope),
            float(step0), traj, record,
        )

    cg_optimize = cg_optimize_numba
else:
    cg_optimize_numba = None
    cg_optimize = cg_optimize_numpy
