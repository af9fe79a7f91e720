"""Hot recursion kernels.

The three-term recurrence has to be stepped site by site, which is the one
place where plain numpy loops hurt (random decaying potentials carry tables
with ~10^4-10^5 sites).  The kernels are compiled with numba when available
and fall back to the identical pure-numpy code otherwise.

All Jost-type kernels work with the scaled variable t(n) = theta(n, z) / zeta^n.
Backward stepping of t is stable: the unwanted second solution corresponds to
t ~ zeta^(-2n), which decays in the direction of decreasing n, and on the
spectral cut both branches stay bounded.  The tail initialisation t = 1 is
exact for finitely supported potentials.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit
except ImportError:          # pragma: no cover - numba is a declared dependency
    njit = None


def _jost_scaled_impl(V, zeta, two_z, n_keep):
    # rows n = -1 .. n_keep of t(n); row index n + 1
    L = V.shape[0]
    npts = zeta.shape[0]
    out = np.ones((n_keep + 2, npts), np.complex128)
    if L == 0:
        return out
    z2 = zeta * zeta
    t_next = np.ones(npts, np.complex128)   # t(L)
    t_cur = np.ones(npts, np.complex128)    # t(L-1), exact: the free equation
    for n in range(L - 1, -1, -1):          # pins theta(n) = zeta^n for n >= L-1
        t_prev = (two_z - 2.0 * V[n]) * zeta * t_cur - z2 * t_next
        if n - 1 <= n_keep:
            out[n] = t_prev
        t_next = t_cur
        t_cur = t_prev
    return out


def _decay_scan_impl(V, zeta, two_z, bounds, rho_minus_2):
    """Roll the Jost recursion over all points at once, tracking the worst
    excess of |t(n) - 1| over bounds[n] and the empirical envelope constant.

    Returns (worst_violation, c_empirical)."""
    L = V.shape[0]
    npts = zeta.shape[0]
    z2 = zeta * zeta
    t_next = np.ones(npts, np.complex128)
    t_cur = np.ones(npts, np.complex128)
    worst = -np.inf
    c_emp = 0.0
    for n in range(L - 1, -1, -1):
        t_prev = (two_z - 2.0 * V[n]) * zeta * t_cur - z2 * t_next
        if n >= 1:                      # t_prev holds site n-1, checked on Z_+
            dev = 0.0
            for k in range(npts):
                d = abs(t_prev[k] - 1.0)
                if d > dev:
                    dev = d
            v = dev - bounds[n - 1]
            if v > worst:
                worst = v
            scaled = dev * (1.0 + (n - 1)) ** rho_minus_2
            if scaled > c_emp:
                c_emp = scaled
        t_next = t_cur
        t_cur = t_prev
    return worst, c_emp


if njit is not None:
    _jost_scaled = njit(cache=True)(_jost_scaled_impl)
    _decay_scan = njit(cache=True)(_decay_scan_impl)
else:                         # pragma: no cover
    _jost_scaled = _jost_scaled_impl
    _decay_scan = _decay_scan_impl


def jost_scaled(V, zeta, two_z, n_keep):
    """Scaled Jost values t(n) = theta(n)/zeta^n for n = -1..n_keep.

    Shape (n_keep + 2, len(zeta)); row index n + 1.  n_keep = -1 returns
    only t(-1), whose value is the Jost function Omega(z) = zeta * theta(-1).
    """
    V = np.ascontiguousarray(V, dtype=np.float64)
    zeta = np.ascontiguousarray(np.atleast_1d(zeta), dtype=np.complex128)
    two_z = np.ascontiguousarray(np.broadcast_to(two_z, zeta.shape), dtype=np.complex128)
    return _jost_scaled(V, zeta, two_z, int(n_keep))


def jost_function_values(V, zeta, two_z):
    """Omega(z) = t(-1) on a batch of spectral points."""
    return jost_scaled(V, zeta, two_z, -1)[0]


def decay_scan(V, zeta, two_z, bounds, rho):
    V = np.ascontiguousarray(V, dtype=np.float64)
    zeta = np.ascontiguousarray(np.atleast_1d(zeta), dtype=np.complex128)
    two_z = np.ascontiguousarray(np.broadcast_to(two_z, zeta.shape), dtype=np.complex128)
    bounds = np.ascontiguousarray(bounds, dtype=np.float64)
    return _decay_scan(V, zeta, two_z, bounds, float(rho) - 2.0)


def regular_values(V, two_z, n_max):
    """Forward recursion for the regular solution, rows n = -1..n_max.

    Boundary pair (0, 1); real input gives a real table.
    """
    two_z = np.atleast_1d(np.asarray(two_z))
    V = np.asarray(V, dtype=float)
    Vp = np.zeros(max(n_max + 1, 1))
    k = min(len(V), n_max + 1)
    Vp[:k] = V[:k]
    out = np.zeros((n_max + 2, two_z.shape[0]), dtype=np.result_type(two_z.dtype, np.float64))
    out[1] = 1.0
    for n in range(0, n_max):
        out[n + 2] = (two_z - 2.0 * Vp[n]) * out[n + 1] - out[n]
    return out
