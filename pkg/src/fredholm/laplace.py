"""Dirichlet problem for the Laplace equation on the unit disc, solved
through the double-layer boundary integral equation.

On the circle the double-layer kernel collapses to the constant 1/(4 pi),
so the density mu satisfies the second-kind equation

    mu(phi) = 2 f(phi) - (1/2 pi) I mu(theta) dtheta

whose discretization has the constant matrix A_ij = -dtheta/(2 pi).  The
layered network solves for mu; the harmonic potential is then

    u(x) = I mu(theta) k(r, phi, theta) dtheta

with the polar kernel k below.  Near the boundary that integrand peaks
sharply, so evaluation uses the smoothed rearrangement

    u = sum_j (mu_j - mu*) [k - 1/(4 pi)] dtheta + mu*/2 + P*,

where mu* interpolates mu at the radial projection of the query and
P* = (dtheta/(4 pi)) sum_j mu_j.  The bracket vanishes identically at
r = 1, which makes boundary queries exact up to interpolation error
instead of numerically explosive.
"""

from dataclasses import dataclass
from typing import Callable, Sequence, Tuple

import numpy as np

from .errors import DomainError, ValidationError
from .grid import Grid1D, uniform_grid
from .network import build_network, forward
from .operator import DiscreteOperator, FieProblem, KMSchedule, discretize

__all__ = [
    "DiscBoundaryProblem", "BoundaryDensity", "PotentialField",
    "polar_double_layer_kernel", "build_bie", "solve_density",
    "boundary_project", "evaluate_potential",
]

TWO_PI = 2.0 * np.pi


def polar_double_layer_kernel(r, phi, theta):
    """Double-layer kernel of the unit circle in polar form:
    (1 - r cos(theta - phi)) / (2 pi (1 - 2 r cos(theta - phi) + r^2)).

    Finite for 0 <= r < 1; on the boundary it equals 1/(4 pi) except at
    theta = phi where the expression is 0/0 and callers must use the
    limit value 1/(4 pi) themselves.  Broadcasts over array arguments.
    """
    r = np.asarray(r, dtype=float)
    phi = np.asarray(phi, dtype=float)
    theta = np.asarray(theta, dtype=float)
    if np.any((r < 0.0) | (r > 1.0) | ~np.isfinite(r)):
        raise ValidationError("radius outside [0, 1]")
    c = np.cos(theta - phi)
    den = 1.0 - 2.0 * r * c + r * r
    if np.any(den == 0.0):
        raise DomainError(
            "kernel evaluated exactly at its boundary singularity "
            "(r=1, theta=phi); use the limit value 1/(4 pi)")
    return (1.0 - r * c) / (TWO_PI * den)


@dataclass(frozen=True, eq=False)
class DiscBoundaryProblem:
    """Dirichlet data f(phi) on the unit circle plus solver settings."""

    boundary: Callable
    theta_n: int
    layers: int
    schedule: KMSchedule

    def __post_init__(self):
        if self.theta_n < 2:
            raise ValidationError(f"theta_n {self.theta_n} must be >= 2")
        if self.layers < 1:
            raise ValidationError(f"layers {self.layers} must be >= 1")
        object.__setattr__(
            self, "grid",
            uniform_grid(0.0, TWO_PI, self.theta_n, scheme="left",
                         topology="periodic"))


@dataclass(frozen=True, eq=False)
class BoundaryDensity:
    """Double-layer density samples on the periodic theta grid."""

    grid: Grid1D
    values: np.ndarray

    def __post_init__(self):
        if self.values.shape != (self.grid.n,):
            raise ValidationError(
                f"density shape {self.values.shape} != ({self.grid.n},)")
        if not np.all(np.isfinite(self.values)):
            raise ValidationError("density values must be finite")
        self.values.setflags(write=False)

    @property
    def mean_weighted(self) -> float:
        """P* = (dtheta / 4 pi) * sum mu, the projected-potential term."""
        return float(self.grid.spacing / (2.0 * TWO_PI)
                     * np.sum(self.values))


@dataclass(frozen=True, eq=False)
class PotentialField:
    """Potential values at polar query points, with the boundary
    projection data used by the smoothed evaluation."""

    r: np.ndarray
    phi: np.ndarray
    values: np.ndarray
    phi_star: np.ndarray
    mu_star: np.ndarray

    def __post_init__(self):
        for arr in (self.r, self.phi, self.values, self.phi_star,
                    self.mu_star):
            arr.setflags(write=False)


def build_bie(problem: DiscBoundaryProblem) -> DiscreteOperator:
    """Discretize the boundary integral equation on the theta grid.

    The matrix is the constant -dtheta/(2 pi); the source is 2 f(theta).
    """
    f = problem.boundary

    def kernel(x, z):
        x = np.asarray(x, dtype=float)
        z = np.asarray(z, dtype=float)
        return np.broadcast_to(-1.0 / TWO_PI, np.broadcast_shapes(x.shape,
                                                                  z.shape))

    def source(x):
        return 2.0 * np.asarray(f(np.asarray(x, dtype=float)), dtype=float)

    fie = FieProblem(kernel=kernel, source=source, a=0.0, b=TWO_PI)
    return discretize(fie, problem.grid)


def solve_density(problem: DiscBoundaryProblem) -> BoundaryDensity:
    """Forward pass of the layered network for the density mu."""
    op = build_bie(problem)
    net = build_network(op, problem.layers, problem.schedule)
    field = forward(net)
    return BoundaryDensity(grid=op.grid, values=field.values.copy())


def _interp_density(density: BoundaryDensity, phi: np.ndarray) -> np.ndarray:
    """Linear interpolation of mu on the periodic grid; phi already
    wrapped to [0, 2 pi)."""
    th = density.grid.nodes
    th_ext = np.append(th, TWO_PI)
    mu_ext = np.append(density.values, density.values[0])
    return np.interp(phi, th_ext, mu_ext)


def boundary_project(density: BoundaryDensity, x: float,
                     y: float) -> Tuple[float, float]:
    """Radial projection of a Cartesian point in the disc.

    Returns (phi*, mu*): the projection angle in [0, 2 pi) and the
    interpolated density there.  The origin projects to phi* = 0 by
    convention; the potential is projection-independent there.
    """
    if x * x + y * y > 1.0 + 1e-12:
        raise ValidationError(f"point ({x}, {y}) outside the unit disc")
    phi = 0.0 if x == 0.0 and y == 0.0 else float(np.mod(np.arctan2(y, x),
                                                         TWO_PI))
    mu = float(_interp_density(density, np.asarray([phi]))[0])
    return phi, mu


def evaluate_potential(density: BoundaryDensity,
                       queries: Sequence[Tuple[float, float]]
                       ) -> PotentialField:
    """Smoothed double-layer potential at polar points (r, phi).

    Radii must lie in [0, 1]; angles wrap.  Boundary queries (r = 1) use
    the degenerate form mu*/2 + P* directly since the smoothed bracket is
    identically zero there.
    """
    q = np.asarray(queries, dtype=float)
    if q.ndim == 1:
        q = q.reshape(1, -1)
    if q.ndim != 2 or q.shape[1] != 2:
        raise ValidationError("queries must be (r, phi) pairs")
    r = q[:, 0].copy()
    phi_raw = q[:, 1].copy()
    if np.any(~np.isfinite(r) | (r < 0.0) | (r > 1.0)):
        raise ValidationError("query radius outside [0, 1]")
    if np.any(~np.isfinite(phi_raw)):
        raise ValidationError("query angle must be finite")
    phi = np.mod(phi_raw, TWO_PI)
    phi_star = np.where(r == 0.0, 0.0, phi)
    mu_star = _interp_density(density, phi_star)
    p_star = density.mean_weighted

    th = density.grid.nodes
    dth = density.grid.spacing
    mu = density.values
    values = 0.5 * mu_star + p_star
    interior = r < 1.0
    if interior.any():
        ri = r[interior, None]
        ki = polar_double_layer_kernel(ri, phi[interior, None],
                                       th[None, :])
        diff = mu[None, :] - mu_star[interior, None]
        values[interior] += (diff * (ki - 1.0 / (2.0 * TWO_PI))).sum(axis=1) * dth
    if not np.all(np.isfinite(values)):
        raise DomainError("non-finite potential value")
    return PotentialField(r=r, phi=phi, values=values,
                          phi_star=phi_star, mu_star=mu_star)
