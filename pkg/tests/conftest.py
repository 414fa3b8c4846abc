"""Shared fixtures; the expensive computations run once per session."""
from __future__ import annotations

import pytest
from hypothesis import settings

# several properties call sympy or run quadratures; wall-clock deadlines only add flakiness
settings.register_profile("trigsurf", deadline=None, max_examples=50)
settings.load_profile("trigsurf")

# Oracle values, 30 digits, from mpmath: alpha and beta from mpmath.beta,
# gamma by tanh-sinh quadrature after removing both endpoint singularities
# with u**3 substitutions.
ALPHA = 0.883319375142724978656844749824
BETA = 1.21432532394379080590997084489
GAMMA = 0.701091052662727130587509539525
B_TWO_THIRDS_SIXTH = 6.67747604713383230737199817411    # B(2/3, 1/6)
B_THIRD_SIXTH = 8.41309263195272556705011447430         # B(1/3, 1/6)


@pytest.fixture(scope="session")
def period_matrix():
    from trigsurf.periods import assemble_period_matrix
    return assemble_period_matrix()


@pytest.fixture(scope="session")
def homology_result():
    from trigsurf.homology import verify_homological_triviality
    return verify_homological_triviality()


@pytest.fixture(scope="session")
def base_mesh():
    from trigsurf.mesh import build_mesh
    return build_mesh(radius=1.5, refinement=0, theta=0.0)


@pytest.fixture(scope="session")
def conjugate_mesh():
    import math
    from trigsurf.mesh import build_mesh
    return build_mesh(radius=1.5, refinement=0, theta=math.pi / 2)
