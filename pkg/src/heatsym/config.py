"""Default tolerances and sampling densities.

Every number here is an engineering choice, not a theorem: the library
functions take explicit overrides and these are just the defaults they
fall back on.
"""

from __future__ import annotations

# Relative tolerance for adaptive quadrature, with an absolute floor so
# integrals that are genuinely zero terminate.
QUAD_REL_TOL = 1e-12
QUAD_ABS_FLOOR = 1e-14

# Bracket width at which root refinement stops.
ROOT_TOL = 1e-12

# Points per sphere or curve when sampling a boundary.
BOUNDARY_SAMPLES = 200

# Finite-difference steps for the heat-residual check.  The spatial step
# follows the solution's own length scale sqrt(t); the time step is kept
# small enough that the second-order time error sits well below the
# fourth-order space error, so halving h shows the spatial order cleanly.
def fd_space_step(t: float) -> float:
    return max(1.0e-3, 5.0e-2 * t ** 0.5)


def fd_time_step(t: float) -> float:
    return max(1.0e-8, 1.0e-5 * t)


# Time offset standing in for 0+ when initial slices of kernel-smoothed
# derivatives are needed, as a fraction of the squared support radius.
INITIAL_SLICE_FRACTION = 1e-6

# Seed for the pseudo-random members of the rotation catalog.
DEFAULT_SEED = 1234
