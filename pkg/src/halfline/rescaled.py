"""The rescaled energy representation and pseudo-differential comparisons.

The substitution lambda = tanh(beta) maps the spectral interval onto the
line; composing with the sine transform gives a unitary map R from the site
space to functions of beta, under which H0 becomes multiplication by
tanh(beta) and the conjugate operator becomes the momentum D = -i d/dbeta.
The coupling operator U then agrees, up to a compact remainder, with the
zeroth-order symbol
    -tanh(pi D) + i tanh(X/2) sech(pi D),
and the shift operator with tanh(X) - i sech(X) tanh(pi D).  "Compact" is
operationalised as finite-rank approximability of the sampled difference
(singular values dropping below a fraction of the largest) together with
stability of the leading singular value under grid refinement; a smallness
test would be wrong, the remainders are O(1).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import NumericsError
from .model import GridSpec, Potential
from .scattering import ScatteringData
from .specops import (OperatorMatrix, cos_sin_coupling, quadrature_grid,
                      scattering_operator, sine_transform, wave_operator)

#: interior-block Gram tolerance before the window is declared too small
GRAM_GUARD = 1e-4


@dataclass(frozen=True)
class BetaGrid:
    """Uniform midpoint grid on [-beta_max, beta_max] with DFT frequencies."""

    m_beta: int
    beta_max: float
    h: float
    beta: np.ndarray
    xi: np.ndarray

    @classmethod
    def make(cls, m_beta: int, beta_max: float) -> "BetaGrid":
        if m_beta % 2 != 0:
            raise NumericsError("m_beta must be even")
        h = 2.0 * beta_max / m_beta
        beta = -beta_max + (np.arange(m_beta) + 0.5) * h
        xi = 2.0 * np.pi * np.fft.fftfreq(m_beta, d=h)
        return cls(m_beta=m_beta, beta_max=beta_max, h=h, beta=beta, xi=xi)


def beta_grid(m_beta: int, beta_max: float) -> BetaGrid:
    return BetaGrid.make(m_beta, beta_max)


def fourier_multiplier_matrix(bg: BetaGrid, symbol: np.ndarray) -> np.ndarray:
    """Dense matrix of a(D) on the periodised grid, a given on the DFT bins."""
    spec = np.fft.fft(np.eye(bg.m_beta), axis=0)
    return np.fft.ifft(symbol[:, None] * spec, axis=0)


def _odd_symbol(bg: BetaGrid, fn) -> np.ndarray:
    s = fn(bg.xi)
    s[bg.m_beta // 2] = 0.0      # odd symbols vanish at the unpaired Nyquist bin
    return s


def tanh_pi_d_matrix(bg: BetaGrid) -> np.ndarray:
    return fourier_multiplier_matrix(bg, _odd_symbol(bg, lambda x: np.tanh(np.pi * x)))


def sech_pi_d_matrix(bg: BetaGrid) -> np.ndarray:
    with np.errstate(over="ignore"):
        sym = 1.0 / np.cosh(np.pi * bg.xi)
    return fourier_multiplier_matrix(bg, sym)


def pdo_composite(bg: BetaGrid) -> OperatorMatrix:
    """-tanh(pi D) + i tanh(X/2) sech(pi D) on the beta grid."""
    e = -tanh_pi_d_matrix(bg) + 1j * (np.tanh(bg.beta / 2.0)[:, None] * sech_pi_d_matrix(bg))
    return OperatorMatrix(e, "beta-grid", "beta-grid",
                          {"m_beta": bg.m_beta, "beta_max": bg.beta_max})


def shift_symbol_composite(bg: BetaGrid) -> OperatorMatrix:
    """tanh(X) - i sech(X) tanh(pi D), the symbol form of the shift."""
    with np.errstate(over="ignore"):
        sech_b = 1.0 / np.cosh(bg.beta)
    e = np.diag(np.tanh(bg.beta)).astype(complex) \
        - 1j * (sech_b[:, None] * tanh_pi_d_matrix(bg))
    return OperatorMatrix(e, "beta-grid", "beta-grid",
                          {"m_beta": bg.m_beta, "beta_max": bg.beta_max})


def b_weight(t: np.ndarray) -> np.ndarray:
    """sqrt(2) cosh(t/2) / sqrt(cosh t): the bounded conjugation weight that
    turns the hyperbolic principal-value kernel into a pure symbol."""
    return np.sqrt(2.0) * np.cosh(t / 2.0) / np.sqrt(np.cosh(t))


def hyperbolic_pv_matrix(bg: BetaGrid) -> OperatorMatrix:
    """Skip-diagonal discretisation of the kernel
    (i/pi) sech^(1/2)(beta) cosh^(1/2)(gamma) / sinh(gamma - beta)."""
    b = bg.beta
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        ker = (1j / np.pi) * np.sqrt(1.0 / np.cosh(b))[:, None] \
            * np.sqrt(np.cosh(b))[None, :] / np.sinh(b[None, :] - b[:, None])
    np.fill_diagonal(ker, 0.0)
    return OperatorMatrix(ker * bg.h, "beta-grid", "beta-grid",
                          {"m_beta": bg.m_beta, "beta_max": bg.beta_max})


def pv_kernel_action_gap(bg: BetaGrid, centers=(-2.0, 0.0, 1.5)) -> float:
    """Worst relative difference between the weight-conjugated symbol and the
    direct principal-value kernel on Gaussian bumps."""
    P = pdo_composite(bg).entries
    K = hyperbolic_pv_matrix(bg).entries
    w = b_weight(bg.beta)
    conj = w[:, None] * P / w[None, :]
    worst = 0.0
    for c in centers:
        g = np.exp(-(bg.beta - c) ** 2)
        worst = max(worst, float(np.linalg.norm((conj - K) @ g) / np.linalg.norm(g)))
    return worst


# ---------------------------------------------------------------------------
# the rescale matrix R
# ---------------------------------------------------------------------------

def energy_rescale_matrix(bg: BetaGrid, n_site: int) -> OperatorMatrix:
    """R[k, n] = sqrt(h) sech(beta_k) psi_sin(n, tanh beta_k), evaluated
    directly at lambda = tanh(beta_k) with theta(beta) = 2 atan(e^(-beta))."""
    if n_site > bg.m_beta // 4:
        raise NumericsError("beta window too small: n_site exceeds m_beta/4")
    theta_b = 2.0 * np.arctan(np.exp(-bg.beta))
    with np.errstate(over="ignore"):
        sech_b = 1.0 / np.cosh(bg.beta)
    e = np.sqrt(2.0 * bg.h / np.pi) * np.sqrt(sech_b)[:, None] \
        * np.sin(np.outer(theta_b, np.arange(1, n_site + 1)))
    gram = e.T @ e
    nb = n_site // 2
    defect = float(np.max(np.abs((gram - np.eye(n_site))[:nb, :nb])))
    if defect > GRAM_GUARD:
        raise NumericsError(f"beta window too small: interior Gram defect {defect:.2e}")
    return OperatorMatrix(e, "beta-grid", "site",
                          {"m_beta": bg.m_beta, "beta_max": bg.beta_max,
                           "n_site": n_site, "gram_defect": defect})


# ---------------------------------------------------------------------------
# singular-value reports
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SingularReport:
    """Singular values of a sampled remainder plus the finite-rank summary."""

    singular_values: np.ndarray
    meta: dict = field(default_factory=dict)

    @property
    def s1(self) -> float:
        return float(self.singular_values[0]) if self.singular_values.size else 0.0

    def rank_at(self, frac: float = 0.1) -> int:
        """Smallest r with s_(r+1) <= frac * s_1."""
        sv = self.singular_values
        if sv.size == 0 or sv[0] == 0.0:
            return 0
        return int(np.searchsorted(-sv, -frac * sv[0]))


def _sv_report(mat: np.ndarray, **meta) -> SingularReport:
    sv = np.linalg.svd(mat, compute_uv=False)
    return SingularReport(singular_values=sv, meta=meta)


def coupling_symbol_remainder(g: GridSpec, m_beta: int | None = None) -> SingularReport:
    """Singular values of R U R^* minus the symbol composite, pulled back to
    the site space through R (where the truncation is faithful)."""
    bg = beta_grid(m_beta or g.m_beta, g.beta_max)
    R = energy_rescale_matrix(bg, g.n_site).entries
    grid = quadrature_grid(g.m_theta)
    U = cos_sin_coupling(grid, g.n_site).entries
    P = pdo_composite(bg).entries
    diff = U - R.conj().T @ P @ R
    rep = _sv_report(diff, m_beta=bg.m_beta, beta_max=bg.beta_max,
                     n_site=g.n_site, m_theta=g.m_theta)
    return rep


def coupling_symbol_stability(g: GridSpec) -> dict:
    """Leading-singular-value stability under doubling of the beta grid."""
    base = coupling_symbol_remainder(g)
    fine = coupling_symbol_remainder(g, m_beta=2 * g.m_beta)
    if base.s1 > 0 and fine.s1 > 10.0 * base.s1:
        raise NumericsError("not convergent: leading singular value grows under refinement")
    rel = abs(fine.s1 - base.s1) / base.s1 if base.s1 > 0 else 0.0
    return {"base": base, "refined": fine, "rel_change": rel}


def wave_symbol_remainder(d: ScatteringData, p: Potential, g: GridSpec,
                          m_theta: int | None = None) -> SingularReport:
    """Remainder of the wave-operator formula with the symbol factor:
    W - 1 - (1/2)(1 + R^*[symbol]R)(S - 1) on the interior site block."""
    from .scattering import scattering_grid
    if m_theta is not None and m_theta != g.m_theta:
        g2 = replace(g, m_theta=m_theta)
        d = scattering_grid(p, g2)
        g = g2
    grid = quadrature_grid(g.m_theta)
    n = g.n_site
    W = wave_operator(d, p, grid, n, tol_threshold=g.tol_threshold).entries
    S = scattering_operator(d, grid, n).entries
    bg = beta_grid(g.m_beta, g.beta_max)
    R = energy_rescale_matrix(bg, n).entries
    P = pdo_composite(bg).entries
    inner = np.eye(n) + R.conj().T @ P @ R
    K = W - np.eye(n) - 0.5 * inner @ (S - np.eye(n))
    nb = n // 2
    return _sv_report(K[:nb, :nb], m_theta=g.m_theta, n_site=n,
                      m_beta=g.m_beta, potential=p.content_hash())


def wave_symbol_stability(d: ScatteringData, p: Potential, g: GridSpec) -> dict:
    base = wave_symbol_remainder(d, p, g)
    fine = wave_symbol_remainder(d, p, g, m_theta=2 * g.m_theta)
    if base.s1 > 0 and fine.s1 > 10.0 * base.s1:
        raise NumericsError("not convergent: leading singular value grows under refinement")
    rel = abs(fine.s1 - base.s1) / base.s1 if base.s1 > 0 else 0.0
    return {"base": base, "refined": fine, "rel_change": rel}


def shift_identity_check(g: GridSpec, m_beta: int | None = None) -> dict:
    """Both halves of the shift-operator comparison: the exact identity
    T = H0 + i (1-H0^2)^(1/2) U^* on the theta grid, and the compact
    remainder against tanh(X) - i sech(X) tanh(pi D) through R."""
    from .specops import shift_identity_residual
    exact = shift_identity_residual(g)
    bg = beta_grid(m_beta or g.m_beta, g.beta_max)
    R = energy_rescale_matrix(bg, g.n_site).entries
    P = shift_symbol_composite(bg).entries
    T = np.diag(np.ones(g.n_site - 1), -1)
    rep = _sv_report(T - R.conj().T @ P @ R, m_beta=bg.m_beta, n_site=g.n_site)
    return {"exact_residual": exact["composite"],
            "naive_product_residual": exact["naive_product"],
            "symbol_remainder": rep}


# ---------------------------------------------------------------------------
# discrete Weyl pair
# ---------------------------------------------------------------------------

def weyl_commutation_defect(bg: BetaGrid, shift_steps: int, mod_steps: int) -> float:
    """Max defect of e^(itX) e^(isD) = e^(-ist) e^(isD) e^(itX) for the
    grid-commensurate pair s = shift_steps * h, t = mod_steps * 2 pi/(m h).

    The circular shift and the diagonal modulation satisfy the relation
    exactly (including wrap-around) for commensurate parameters.
    """
    m = bg.m_beta
    s = shift_steps * bg.h
    t = mod_steps * 2.0 * np.pi / (m * bg.h)
    C = np.roll(np.eye(m), shift_steps, axis=1)    # (C f)[k] = f[k + p]
    M = np.diag(np.exp(1j * t * bg.beta))
    lhs = M @ C
    rhs = np.exp(-1j * s * t) * (C @ M)
    return float(np.max(np.abs(lhs - rhs)))


def rescale_intertwining_defect(bg: BetaGrid, n_site: int) -> float:
    """Max-norm of R H0 - tanh(X) R on interior columns (exact identity of
    the sine recursion under lambda = tanh beta)."""
    R = energy_rescale_matrix(bg, n_site).entries
    H0 = (np.diag(np.ones(n_site - 1), 1) + np.diag(np.ones(n_site - 1), -1)) / 2.0
    lhs = R @ H0
    rhs = np.tanh(bg.beta)[:, None] * R
    return float(np.max(np.abs((lhs - rhs)[:, : n_site - 1])))
