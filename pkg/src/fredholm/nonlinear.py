"""Outer re-linearization loop for nonlinear integral equations.

The problem is u(x) = g(x) + I K(x,z) G(u(z)) dz with a pointwise
nonlinearity G.  Each outer pass freezes the previous iterate inside G,
forming the linear equation

    f = g_n + I K f,    g_n = g + I K (G(f_prev) - f_prev),

solves it with the layered network, then rebuilds the source from the new
iterate.  The kernel matrix is discretized once and shared by every pass.
With G(u) = u the correction vanishes and the loop reproduces the linear
solve exactly, pass after pass.
"""

from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from .errors import DomainError, ValidationError
from .grid import Grid1D
from .network import SolutionField, build_network, forward
from .operator import DiscreteOperator, FieProblem, KMSchedule, discretize

__all__ = [
    "NonlinearProblem", "IterationTrace",
    "linearized_source", "solve_nonlinear", "evaluate_nonlinear",
]


@dataclass(frozen=True)
class NonlinearProblem:
    """Kernel, source, pointwise nonlinearity and domain.

    ``nonlinearity(u)`` must broadcast over arrays.  Whether it stays
    Lipschitz along the iterates is the caller's lookout; the trace of
    update sizes makes a drifting loop visible.
    """

    kernel: Callable
    source: Callable
    nonlinearity: Callable
    a: float
    b: float

    def __post_init__(self):
        if not (np.isfinite(self.a) and np.isfinite(self.b) and self.a < self.b):
            raise ValidationError(f"invalid domain [{self.a}, {self.b}]")

    def linear_problem(self) -> FieProblem:
        return FieProblem(kernel=self.kernel, source=self.source,
                          a=self.a, b=self.b)


@dataclass(frozen=True, eq=False)
class IterationTrace:
    """Record of the outer loop: consecutive-iterate sup-norm deltas and
    the source vector used by every pass."""

    outer_iterations: int
    deltas: Tuple[float, ...]
    sources: Tuple[np.ndarray, ...]

    def __post_init__(self):
        if any(not (np.isfinite(d) and d >= 0.0) for d in self.deltas):
            raise ValidationError(f"invalid deltas {self.deltas}")
        for s in self.sources:
            s.setflags(write=False)


def _apply_nonlinearity(problem: NonlinearProblem, values: np.ndarray,
                        where: str) -> np.ndarray:
    with np.errstate(all="ignore"):
        gu = np.asarray(problem.nonlinearity(values), dtype=float)
    gu = np.broadcast_to(gu, values.shape)
    bad = ~np.isfinite(gu)
    if bad.any():
        i = int(np.argmax(bad))
        raise DomainError(
            f"nonlinearity left its domain {where} at node {i} "
            f"(iterate value {values[i]!r})")
    return gu


def linearized_source(problem: NonlinearProblem, base: DiscreteOperator,
                      prev_values: np.ndarray) -> np.ndarray:
    """Source of the next linear pass: g + A (G(f_prev) - f_prev).

    ``base`` must be the discretization of the problem's linear part, so
    its source vector is the original g.
    """
    prev = np.asarray(prev_values, dtype=float)
    if prev.shape != (base.n,):
        raise ValidationError(
            f"iterate shape {prev.shape} does not match grid ({base.n},)")
    gu = _apply_nonlinearity(problem, prev, "in the source update")
    return base.source + base.matrix @ (gu - prev)


def solve_nonlinear(problem: NonlinearProblem, grid: Grid1D, layers: int,
                    schedule: KMSchedule, outer_iterations: int,
                    delta_tol: Optional[float] = None
                    ) -> Tuple[SolutionField, IterationTrace]:
    """Run the outer loop: passes n = 0..outer_iterations, one linear
    network solve each.

    ``delta_tol`` optionally stops early once the sup-norm change between
    passes drops below it; by default the full budget runs.  Divergence
    (non-finite layer values) and nonlinearity domain violations raise.
    """
    if outer_iterations < 1:
        raise ValidationError(
            f"outer_iterations {outer_iterations} must be >= 1")
    base = discretize(problem.linear_problem(), grid)
    current = base
    sources = [base.source]
    deltas = []
    prev = None
    field = None
    for n in range(outer_iterations + 1):
        net = build_network(current, layers, schedule)
        field = forward(net)
        vals = field.values
        if prev is not None:
            deltas.append(float(np.max(np.abs(vals - prev))))
            if delta_tol is not None and deltas[-1] < delta_tol:
                prev = vals
                break
        prev = vals
        if n < outer_iterations:
            g_next = linearized_source(problem, base, vals)
            sources.append(g_next)
            current = DiscreteOperator(grid=grid, matrix=base.matrix,
                                       source=g_next, problem=base.problem)
    trace = IterationTrace(outer_iterations=outer_iterations,
                           deltas=tuple(deltas),
                           sources=tuple(sources))
    return field, trace


def evaluate_nonlinear(problem: NonlinearProblem, base: DiscreteOperator,
                       field: SolutionField, points) -> np.ndarray:
    """Evaluate the solved field off-grid through the full nonlinear map:
    u(x) = g(x) + sum_j K(x, z_j) G(f(z_j)) dz.

    Interval queries must stay inside [a, b].
    """
    pts = np.asarray(points, dtype=float).ravel()
    grid = base.grid
    bad = (pts < grid.a) | (pts > grid.b) | ~np.isfinite(pts)
    if bad.any():
        raise ValidationError(
            f"query point {pts[np.argmax(bad)]!r} outside [{grid.a}, {grid.b}]")
    gu = _apply_nonlinearity(problem, np.asarray(field.values, dtype=float),
                             "in off-grid evaluation")
    rows = np.asarray(problem.kernel(pts[:, None], grid.nodes[None, :]),
                      dtype=float)
    rows = np.broadcast_to(rows, (pts.size, base.n)) * grid.spacing
    g_pts = np.broadcast_to(np.asarray(problem.source(pts), dtype=float),
                            pts.shape)
    out = g_pts + rows @ gu
    if not np.all(np.isfinite(out)):
        raise DomainError("non-finite value in off-grid evaluation")
    return out
