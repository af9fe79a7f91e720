import numpy as np
import pytest

import halfline as hl
from conftest import closed_form_omega


@pytest.fixture(scope="module")
def grid512():
    return hl.quadrature_grid(512)


@pytest.fixture(scope="module")
def pack075(grid_default, scatter_cache):
    p = hl.rank_one(0.75)
    d = scatter_cache(p, grid_default)
    grid = hl.quadrature_grid(grid_default.m_theta)
    return p, d, grid


class TestQuadrature:
    def test_weights_sum_to_two(self):
        # midpoint rule: the total weight converges to 2 at second order
        errs = [abs(np.sum(hl.quadrature_grid(m).weights) - 2.0) for m in (64, 128)]
        assert errs[1] < errs[0] / 3.5
        assert errs[1] < 1e-4

    def test_nodes_strictly_interior_and_sorted(self):
        g = hl.quadrature_grid(32)
        assert np.all(np.diff(g.lam) > 0)
        assert np.all(np.abs(g.lam) < 1.0)


class TestTransforms:
    def test_small_gram_exact(self):
        g = hl.quadrature_grid(8)
        F = hl.sine_transform(g, 4).entries
        C = hl.cosine_transform(g, 4).entries
        assert np.max(np.abs(F.T @ F - np.eye(4))) < 1e-12
        assert np.max(np.abs(C.T @ C - np.eye(4))) < 1e-12

    def test_large_gram_exact(self, grid512):
        F = hl.sine_transform(grid512, 128).entries
        assert np.max(np.abs(F.T @ F - np.eye(128))) < 1e-10

    def test_entries_match_kernel_definition(self):
        g = hl.quadrature_grid(16)
        F = hl.sine_transform(g, 3).entries
        C = hl.cosine_transform(g, 3).entries
        sw = g.sqrt_weights
        psi_sin = np.sqrt(2 / np.pi) * np.sin(np.outer(g.theta, [1, 2, 3])) \
            / (1 - g.lam[:, None] ** 2) ** 0.25
        psi_cos = np.sqrt(2 / np.pi) * np.cos(np.outer(g.theta, [1, 2, 3])) \
            / (1 - g.lam[:, None] ** 2) ** 0.25
        assert np.max(np.abs(F - sw[:, None] * psi_sin)) < 1e-14
        assert np.max(np.abs(C - sw[:, None] * psi_cos)) < 1e-14

    def test_sine_diagonalizes_free_hamiltonian(self, grid512):
        F = hl.sine_transform(grid512, 64).entries
        off = 0.5 * np.ones(63)
        H0 = np.diag(off, 1) + np.diag(off, -1)
        resid = F @ H0 - grid512.lam[:, None] * F
        assert np.max(np.abs(resid[:, :63])) < 1e-12   # all but the cut column

    def test_site_count_guard(self):
        with pytest.raises(hl.NumericsError, match="grid too small"):
            hl.sine_transform(hl.quadrature_grid(8), 5)


class TestCouplingOperator:
    def test_potential_independent_bitwise(self, grid512):
        u1 = hl.cos_sin_coupling(grid512, 64).entries
        u2 = hl.cos_sin_coupling(hl.quadrature_grid(512), 64).entries
        assert np.array_equal(u1, u2)

    def test_co_isometry_defect_small_and_shrinking(self):
        # UU^* = 1 holds in infinite volume; the truncation defect decays
        # like 1/n_site (U is co-isometric, not unitary: U^*U has a
        # macroscopic rank-one defect from the missing constant mode)
        defects = []
        for (m, n) in ((512, 64), (512, 128), (1024, 256)):
            g = hl.quadrature_grid(m)
            U = hl.cos_sin_coupling(g, n).entries
            D = U @ U.conj().T - np.eye(n)
            defects.append(np.max(np.abs(D[: n // 2, : n // 2])))
        assert defects[0] < 2e-2
        assert defects[2] < defects[0]

    def test_adjoint_order_not_unitary(self, grid512):
        U = hl.cos_sin_coupling(grid512, 64).entries
        D = U.conj().T @ U - np.eye(64)
        assert abs(D[0, 0]) > 0.5    # constant-mode defect is O(1)


class TestWaveTransforms:
    def test_free_equals_sine(self, grid_default, scatter_cache):
        p = hl.zero_potential()
        d = scatter_cache(p, grid_default)
        grid = hl.quadrature_grid(grid_default.m_theta)
        Fp, Fm = hl.jost_transforms(d, p, grid, 64)
        F = hl.sine_transform(grid, 64).entries
        assert np.max(np.abs(Fp.entries - F)) < 1e-12
        assert np.max(np.abs(Fm.entries - F)) < 1e-12

    def test_resonant_grid_guard(self, grid_default, scatter_cache):
        # amplitude dips toward 0 near a resonant threshold; a tolerance
        # above the nodal minimum must be refused
        p = hl.rank_one(0.5)
        d = scatter_cache(p, grid_default)
        grid = hl.quadrature_grid(grid_default.m_theta)
        with pytest.raises(hl.NumericsError, match="resonant grid"):
            hl.jost_transforms(d, p, grid, 64, tol_threshold=1e-2)

    def test_kernel_value_against_closed_form(self, pack075):
        p, d, grid = pack075
        Fp, _ = hl.jost_transforms(d, p, grid, 8)
        j = 200
        om = closed_form_omega(0.75, d.zeta[j])
        a = abs(om)
        sigma_m = np.conj(om) / a
        expected = np.sqrt(grid.weights[j]) * np.sqrt(2 / np.pi) \
            * (1 - d.lam[j] ** 2) ** 0.25 * sigma_m / a   # phi(0) = 1
        assert Fp.entries[j, 0] == pytest.approx(expected, rel=1e-12)


class TestWaveOperator:
    def test_free_identity(self, grid_default, scatter_cache):
        p = hl.zero_potential()
        d = scatter_cache(p, grid_default)
        grid = hl.quadrature_grid(grid_default.m_theta)
        W = hl.wave_operator(d, p, grid, 64)
        assert np.max(np.abs(W.entries - np.eye(64))) < 1e-12

    def test_isometry_generic(self, pack075):
        p, d, grid = pack075
        W = hl.wave_operator(d, p, grid, 128)
        assert hl.wave_isometry_defect(W) < 1e-6

    def test_isometry_two_site(self, grid_default, scatter_cache):
        p = hl.table_potential([0.3, -0.2], rho=3.0)
        d = scatter_cache(p, grid_default)
        W = hl.wave_operator(d, p, hl.quadrature_grid(512), 128)
        assert hl.wave_isometry_defect(W) < 1e-6

    def test_isometry_resonant_degrades(self, grid_default, scatter_cache):
        # threshold resonance slows the co-isometry convergence to ~1e-4
        p = hl.rank_one(0.5)
        d = scatter_cache(p, grid_default)
        W = hl.wave_operator(d, p, hl.quadrature_grid(512), 128)
        assert hl.wave_isometry_defect(W) < 5e-4

    def test_completeness_against_projector(self, pack075):
        p, d, grid = pack075
        W = hl.wave_operator(d, p, grid, 128)
        assert hl.completeness_defect(W, p) < 1e-4


class TestScatteringOperator:
    def test_free_identity(self, grid_default, scatter_cache):
        p = hl.zero_potential()
        d = scatter_cache(p, grid_default)
        S = hl.scattering_operator(d, hl.quadrature_grid(512), 64)
        assert np.max(np.abs(S.entries - np.eye(64))) < 1e-12

    def test_commutes_with_free_hamiltonian(self, pack075):
        p, d, grid = pack075
        S = hl.scattering_operator(d, grid, 128).entries
        off = 0.5 * np.ones(127)
        H0 = np.diag(off, 1) + np.diag(off, -1)
        comm = S @ H0 - H0 @ S
        assert np.max(np.abs(comm[:64, :64])) < 1e-6

    def test_unitary_defect_interior(self, pack075):
        p, d, grid = pack075
        S = hl.scattering_operator(d, grid, 128).entries
        D = S.conj().T @ S - np.eye(128)
        assert np.max(np.abs(D[:64, :64])) < 1e-5

    def test_consistent_with_wave_operator_product(self, pack075):
        p, d, grid = pack075
        S = hl.scattering_operator(d, grid, 128).entries
        Wm = hl.wave_operator(d, p, grid, 128, sign=-1).entries
        Wp = hl.wave_operator(d, p, grid, 128, sign=+1).entries
        D = S - Wp.conj().T @ Wm
        assert np.max(np.abs(D[:64, :64])) < 2e-6


class TestCorrectionOperator:
    def test_free_vanishes(self, grid_default, scatter_cache):
        p = hl.zero_potential()
        d = scatter_cache(p, grid_default)
        c = hl.correction_operator(d, p, hl.quadrature_grid(512), 64)
        assert np.max(np.abs(c.times_sine.entries)) < 1e-13

    def test_rank_one_vanishes_on_sites(self, pack075):
        # the tail is exact from site 0 on, so the kernel is zero there
        p, d, grid = pack075
        c = hl.correction_operator(d, p, grid, 64)
        assert np.max(np.abs(c.times_sine.entries)) < 1e-13

    def test_two_site_structure(self, grid_default, scatter_cache):
        p = hl.table_potential([0.3, -0.2], rho=3.0)
        d = scatter_cache(p, grid_default)
        c = hl.correction_operator(d, p, hl.quadrature_grid(512), 64)
        rows = np.max(np.abs(c.times_sine.entries), axis=1)
        assert rows[0] > 0.1                      # site 0 feels the tail
        assert np.max(rows[1:]) < 1e-13           # exact beyond the support
        assert np.isfinite(c.hilbert_schmidt_norm)

    def test_long_table_decays(self, grid_default, scatter_cache):
        n = np.arange(21)
        p = hl.table_potential(0.5 * (1.0 + n) ** -3.0, rho=3.0)
        d = scatter_cache(p, grid_default)
        c = hl.correction_operator(d, p, hl.quadrature_grid(512), 64)
        rows = np.max(np.abs(c.times_sine.entries), axis=1)
        assert rows[0] > rows[5] > rows[15]
        assert np.max(rows[21:]) < 1e-13


class TestWaveIdentity:
    def test_free_residual_at_floor(self, scatter_cache):
        g = hl.GridSpec(m_theta=256, n_site=64)
        p = hl.zero_potential()
        d = scatter_cache(p, g)
        assert hl.wave_identity_residual(d, p, g) < 1e-10

    def test_rank_one_meets_gate(self, grid_default, scatter_cache):
        p = hl.rank_one(0.75)
        d = scatter_cache(p, grid_default)
        assert hl.wave_identity_residual(d, p, grid_default) < 1e-7

    def test_second_order_refinement(self, scatter_cache):
        # quadrature-limited residual falls at least 4x per m doubling
        p = hl.table_potential([0.3, -0.2], rho=3.0)
        g1 = hl.GridSpec(m_theta=256, n_site=64)
        g2 = hl.GridSpec(m_theta=512, n_site=64)
        r1 = hl.wave_identity_residual(scatter_cache(p, g1), p, g1)
        r2 = hl.wave_identity_residual(scatter_cache(p, g2), p, g2)
        assert r1 / r2 >= 4.0


class TestPrincipalValue:
    def test_kernel_entries_definition(self):
        g = hl.quadrature_grid(16)
        A = hl.coupling_pv_matrix(g).entries
        j, k = 3, 11
        lam = g.lam
        expect = 2.0 * (1j / (2 * np.pi)) * (1 - lam[j] ** 2) ** 0.25 \
            / (lam[k] - lam[j]) / (1 - lam[k] ** 2) ** 0.25 \
            * np.sqrt(g.weights[j] * g.weights[k])
        assert A[j, k] == pytest.approx(expect, rel=1e-14)
        assert A[j, j] == 0.0

    def test_action_gap_small_and_shrinking(self):
        gaps = [hl.pv_action_gap(hl.quadrature_grid(m), m // 4) for m in (256, 512)]
        assert gaps[1] < 1e-2
        assert gaps[1] < 0.7 * gaps[0]


class TestShiftIdentity:
    def test_composite_exact(self):
        res = hl.shift_identity_residual(hl.GridSpec())
        assert res["composite"] < 1e-10

    def test_naive_product_carries_leakage(self):
        res = hl.shift_identity_residual(hl.GridSpec())
        assert res["naive_product"] > res["composite"]
