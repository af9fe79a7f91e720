"""Jost function, phase shift, bound states, thresholds, Levinson residual.

Everything downstream keys off the Jost function Omega(z) = zeta(z) theta(-1, z),
which in the scaled recursion is simply the value t(-1).  On the cut
Omega = a e^(i eta) defines the amplitude and the (unwrapped) phase shift,
and s = conj(Omega)/Omega = e^(-2 i eta) is the scattering matrix.  Zeros of
Omega on the real axis outside [-1, 1] are the eigenvalues of H; zeros at the
endpoints are threshold resonances and contribute the half-integer
corrections in Levinson's relation
    eta(+1) - eta(-1) = pi (N + Delta_- + Delta_+).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import NumericsError
from .model import GridSpec, OffAxisPoint, Potential, SpectralPoint, hamiltonian_truncation
from .solutions import SolutionSequence

#: relative tolerance on Wronskian constancy
WRONSKIAN_RTOL = 1e-10

#: scan points per spectral side in the bound-state search
SCAN_POINTS = 512

#: innermost scan offset from the threshold
SCAN_FLOOR = 1e-9


def wronskian(u: SolutionSequence, v: SolutionSequence) -> complex:
    """Common value of (u(n) v(n+1) - u(n+1) v(n)) / 2; raises when the
    sequences are not solutions at the same point (the value drifts)."""
    if abs(complex(u.point.two_z) - complex(v.point.two_z)) > 0:
        raise NumericsError("not solutions: different spectral points")
    a, b = u.values, v.values
    k = min(len(a), len(b))
    w = 0.5 * (a[: k - 1] * b[1:k] - a[1:k] * b[: k - 1])
    # drift is measured against the product scale: w itself may cancel to 0
    scale = max(float(np.max(np.abs(a[:k])) * np.max(np.abs(b[:k]))), 1e-300)
    if np.max(np.abs(w - w[0])) > WRONSKIAN_RTOL * scale:
        raise NumericsError("not solutions: Wronskian is not constant")
    return complex(w[0])


def jost_function(p: Potential, point) -> complex:
    """Omega(z) = zeta(z) theta(-1, z); real for real z outside (-1, 1)."""
    val = _kernels.jost_function_values(
        p.values, np.array([point.zeta], complex), np.array([point.two_z]))[0]
    if isinstance(point, OffAxisPoint) or (
            isinstance(point, SpectralPoint) and point.is_threshold):
        return complex(val.real)
    return complex(val)


# ---------------------------------------------------------------------------
# grids of scattering data
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScatteringData:
    """Scattering quantities sampled on the theta-midpoint grid.

    Arrays are ordered by increasing lambda.  eta is unwrapped from the
    lambda = -1 end with its first value reduced to (-pi, pi].
    """

    theta: np.ndarray
    lam: np.ndarray
    zeta: np.ndarray
    omega: np.ndarray
    amplitude: np.ndarray
    eta: np.ndarray
    smatrix: np.ndarray
    omega_minus: float
    omega_plus: float
    delta_minus: float
    delta_plus: float
    s_minus: float
    s_plus: float
    bound_states: np.ndarray
    count_n: int
    meta: dict = field(default_factory=dict)

    @property
    def m_theta(self) -> int:
        return len(self.theta)

    def point(self, j: int) -> SpectralPoint:
        return SpectralPoint(lam=float(self.lam[j]), theta=float(self.theta[j]),
                             zeta=complex(self.zeta[j]))


def classify_thresholds(p: Potential, tol_threshold: float):
    """Threshold corrections from Omega(+-1).

    Delta = 1/2 when |Omega| < tol, 0 when |Omega| > 10 tol; the band
    in between is refused as unstable.  The limiting scattering-matrix
    values are +1 (generic) and -1 (resonant).
    """
    om_p = jost_function(p, SpectralPoint.threshold(+1)).real
    om_m = jost_function(p, SpectralPoint.threshold(-1)).real
    out = []
    for om in (om_m, om_p):
        mag = abs(om)
        if tol_threshold / 10.0 < mag < 10.0 * tol_threshold:
            raise NumericsError(
                f"ambiguous threshold: |Omega| = {mag:.3e} near tolerance "
                f"{tol_threshold:.1e}")
        out.append(0.5 if mag < tol_threshold else 0.0)
    delta_minus, delta_plus = out
    s_minus = -1.0 if delta_minus == 0.5 else 1.0
    s_plus = -1.0 if delta_plus == 0.5 else 1.0
    return delta_minus, delta_plus, s_minus, s_plus, om_m, om_p


def bound_states(p: Potential, g: GridSpec):
    """All zeros of Omega on [-z_max, -1) u (1, z_max], with the count
    cross-checked against a large tridiagonal eigensolve.

    The scan grid is geometric, accumulating at the thresholds where zeros
    cluster; each sign change is bisected down to tol_root.
    """
    z_max = g.effective_z_max(p)
    roots = []
    for sgn in (1.0, -1.0):
        offs = np.geomspace(z_max - 1.0, SCAN_FLOOR, SCAN_POINTS)
        z = sgn * (1.0 + offs)
        om = _omega_off_axis(p, z)
        idx = np.where(np.diff(np.sign(om)) != 0)[0]
        if idx.size == 0:
            continue
        lo, hi, flo = z[idx].copy(), z[idx + 1].copy(), om[idx].copy()
        while np.max(np.abs(hi - lo)) > g.tol_root:
            mid = 0.5 * (lo + hi)
            fm = _omega_off_axis(p, mid)
            same = (fm > 0) == (flo > 0)
            lo = np.where(same, mid, lo)
            flo = np.where(same, fm, flo)
            hi = np.where(same, hi, mid)
        roots.extend((0.5 * (lo + hi)).tolist())
    roots = np.sort(np.asarray(roots))

    size = 2000
    trunc = hamiltonian_truncation(p, size)
    evals = trunc.eigenvalues()
    band = 1.0 + 10.0 * g.tol_root
    outside = evals[np.abs(evals) > band]
    if outside.size and np.max(np.abs(outside)) > z_max:
        raise NumericsError(f"z_max too small: eigenvalue at {np.max(np.abs(outside)):.6f}")
    if outside.size != roots.size:
        raise NumericsError(
            f"oracle mismatch: {roots.size} Jost zeros vs {outside.size} "
            f"matrix eigenvalues outside the band")
    return roots, int(roots.size)


def _omega_off_axis(p: Potential, z: np.ndarray) -> np.ndarray:
    z = np.atleast_1d(np.asarray(z, float))
    zeta = np.sign(z) / (np.abs(z) + np.sqrt(z * z - 1.0))
    om = _kernels.jost_function_values(p.values, zeta.astype(complex),
                                       (2.0 * z).astype(complex))
    return om.real


def scattering_grid(p: Potential, g: GridSpec) -> ScatteringData:
    """Assemble all scattering data on the theta-midpoint grid."""
    m = g.m_theta
    j = np.arange(m)
    theta = ((j + 0.5) * np.pi / m)[::-1].copy()      # ascending lambda
    lam = np.cos(theta)
    zeta = np.exp(-1j * theta)
    omega = _kernels.jost_function_values(p.values, zeta, 2.0 * lam + 0j)
    amplitude = np.abs(omega)
    if np.min(amplitude) == 0.0:
        raise NumericsError("interior zero of the Jost function")
    raw = np.angle(omega)
    eta = np.unwrap(raw)
    jump = np.max(np.abs(np.diff(eta)), initial=0.0)
    if jump >= np.pi / 2:
        raise NumericsError(f"grid too coarse: phase jump {jump:.3f} >= pi/2")
    smatrix = np.conj(omega) / omega
    dm, dp, s_m, s_p, om_m, om_p = classify_thresholds(p, g.tol_threshold)
    roots, count = bound_states(p, g)
    return ScatteringData(
        theta=theta, lam=lam, zeta=zeta, omega=omega, amplitude=amplitude,
        eta=eta, smatrix=smatrix, omega_minus=om_m, omega_plus=om_p,
        delta_minus=dm, delta_plus=dp, s_minus=s_m, s_plus=s_p,
        bound_states=roots, count_n=count,
        meta={"m_theta": m, "potential": p.content_hash(),
              "tol_threshold": g.tol_threshold, "tol_root": g.tol_root})


def eta_endpoints(d: ScatteringData):
    """Unwrapped phase limits at lambda = -1 and +1, linearly extrapolated
    in theta from the two nearest nodes (eta is smooth in theta there)."""
    th, eta = d.theta, d.eta
    eta_m1 = eta[0] + (eta[1] - eta[0]) * (np.pi - th[0]) / (th[1] - th[0])
    eta_p1 = eta[-1] + (eta[-2] - eta[-1]) * (0.0 - th[-1]) / (th[-2] - th[-1])
    return float(eta_m1), float(eta_p1)


def levinson_residual(d: ScatteringData) -> float:
    """|eta(+1) - eta(-1) - pi (N + Delta_- + Delta_+)|."""
    eta_m1, eta_p1 = eta_endpoints(d)
    target = np.pi * (d.count_n + d.delta_minus + d.delta_plus)
    return float(abs((eta_p1 - eta_m1) - target))
