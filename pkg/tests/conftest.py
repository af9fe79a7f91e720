import numpy as np
import pytest

import halfline as hl

# canonical test potentials
RANK_ONE_FAMILY = (0.25, -0.25, 0.5, -0.5, 0.75, -0.75, 1.5)
TWO_SITE = (0.3, -0.2)
RANDOM_SEEDS = tuple(range(10))
RANDOM_AMPLITUDE = 1.5


@pytest.fixture(scope="session")
def grid_default():
    return hl.GridSpec()          # m_theta=512, n_site=128, m_beta=1024


@pytest.fixture(scope="session")
def scatter_cache():
    """Memoised scattering data keyed by (potential hash, m_theta)."""
    cache = {}

    def get(p, g):
        key = (p.content_hash(), g.m_theta, g.tol_threshold)
        if key not in cache:
            cache[key] = hl.scattering_grid(p, g)
        return cache[key]

    return get


@pytest.fixture(scope="session")
def suite_potentials():
    pots = [hl.rank_one(v) for v in RANK_ONE_FAMILY]
    pots.append(hl.table_potential(TWO_SITE, rho=3.0))
    return pots


@pytest.fixture(scope="session")
def random_potentials():
    return [hl.random_decaying(s, amplitude=RANDOM_AMPLITUDE) for s in RANDOM_SEEDS]


def closed_form_omega(v0, zeta):
    """Rank-one Jost function 1 - 2 v0 zeta (single backward step)."""
    return 1.0 - 2.0 * v0 * np.asarray(zeta)


def closed_form_bound_state(v0):
    """Zero of 1 - 2 v0 zeta inside the disk, when |v0| > 1/2."""
    if abs(v0) <= 0.5:
        return None
    zeta = 1.0 / (2.0 * v0)
    return 0.5 * (zeta + 1.0 / zeta)
