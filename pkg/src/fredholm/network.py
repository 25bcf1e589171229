"""Training-free layered realization of the damped fixed-point iteration.

An M-layer network over a discrete operator (A, g) emits

    h_1 = kappa_1 * g
    h_m = W_m h_{m-1} + kappa_m * g,    W_m = kappa_m A + (1 - kappa_m) I

for m = 2..M, which is exactly M damped steps started from zero.  Weights
and biases are assembled from the kernel matrix; nothing is trained.  A
final evaluation layer applies one undamped step at arbitrary points,

    f(x) = g(x) + sum_j K(x, z_j) h_M[j] dz,

so off-grid values come from the same quadrature that built A.  The module
also carries the a priori error accounting: contraction-based geometric
bounds, layer planning against a target accuracy, and the slower
exponential estimate available to damped schedules.
"""

import math
from dataclasses import dataclass, replace
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import (BoundUnavailableError, DivergenceError,
                     SingularSystemError, ValidationError)
from .grid import Grid1D
from .operator import (DiscreteOperator, KMSchedule, estimate_contraction,
                       estimate_derivative_bound, residual_norm)

__all__ = [
    "SolutionField", "FixedPointNet", "ErrorBudget",
    "build_network", "forward", "query", "dense_solve",
    "budget_from_operator", "error_bound", "plan_layers",
    "km_error_estimate", "layer_sweep",
]


@dataclass(frozen=True, eq=False)
class SolutionField:
    """Samples of the iterate on the grid, optionally with the per-layer
    history that produced them."""

    grid: Grid1D
    values: np.ndarray
    history: Optional[Tuple[np.ndarray, ...]] = None

    def __post_init__(self):
        self.values.setflags(write=False)
        if self.history is not None:
            for h in self.history:
                h.setflags(write=False)


class FixedPointNet:
    """Explicit-weight network equivalent to M damped fixed-point steps.

    Immutable after construction.  For a constant relaxation the single
    hidden weight matrix is shared by all layers, and for kappa = 1 it is
    the operator matrix itself, so memory stays one N x N block plus two
    N-vectors no matter how deep the network is.
    """

    def __init__(self, op: DiscreteOperator, layers: int, schedule: KMSchedule):
        if not isinstance(layers, (int, np.integer)) or layers < 1:
            raise ValidationError(f"layer count {layers!r} must be >= 1")
        if schedule.sequence is not None and len(schedule.sequence) < layers:
            raise ValidationError(
                f"schedule length {len(schedule.sequence)} shorter than "
                f"{layers} layers")
        self.op = op
        self.layers = int(layers)
        self.schedule = schedule
        self._weights = {}
        self._biases = {}
        if schedule.is_constant():
            self._weight_for(schedule.constant)

    def _weight_for(self, kappa: float) -> np.ndarray:
        w = self._weights.get(kappa)
        if w is None:
            if kappa == 1.0:
                w = self.op.matrix
            else:
                w = kappa * self.op.matrix
                idx = np.arange(self.op.n)
                w[idx, idx] += 1.0 - kappa
                w.setflags(write=False)
            self._weights[kappa] = w
        return w

    def weight(self, m: int) -> np.ndarray:
        """Hidden weight matrix of layer m (2-based; layer 1 has none)."""
        if not 2 <= m <= self.layers:
            raise ValidationError(f"layer {m} has no hidden weight")
        return self._weight_for(self.schedule.at(m))

    def bias(self, m: int) -> np.ndarray:
        """Bias vector kappa_m * g of layer m (1-based)."""
        if not 1 <= m <= self.layers:
            raise ValidationError(f"layer {m} outside 1..{self.layers}")
        kappa = self.schedule.at(m)
        b = self._biases.get(kappa)
        if b is None:
            b = kappa * self.op.source
            b.setflags(write=False)
            self._biases[kappa] = b
        return b

    @property
    def first_layer_output(self) -> np.ndarray:
        return self.bias(1)

    def __repr__(self):
        return (f"FixedPointNet(n={self.op.n}, layers={self.layers}, "
                f"schedule={self.schedule!r})")


def build_network(op: DiscreteOperator, layers: int,
                  schedule: KMSchedule) -> FixedPointNet:
    """Assemble the network for ``layers`` damped steps of ``op``."""
    return FixedPointNet(op, layers, schedule)


def forward(net: FixedPointNet, keep_history: bool = False) -> SolutionField:
    """Run all hidden layers and return the final grid iterate.

    Raises DivergenceError the moment any layer produces a non-finite
    value, naming the layer; that is the signature of iterating an
    expansive operator undamped.
    """
    op = net.op
    h = net.bias(1).copy()
    if not np.all(np.isfinite(h)):
        raise DivergenceError("non-finite values at layer 1")
    history: List[np.ndarray] = [h] if keep_history else []
    with np.errstate(all="ignore"):
        for m in range(2, net.layers + 1):
            h = net.weight(m) @ h + net.bias(m)
            if not np.all(np.isfinite(h)):
                raise DivergenceError(f"non-finite values at layer {m}")
            if keep_history:
                history.append(h)
    return SolutionField(grid=op.grid, values=h,
                         history=tuple(history) if keep_history else None)


def query(net: FixedPointNet, field: SolutionField,
          points: Sequence[float]) -> np.ndarray:
    """Evaluate the solution at arbitrary points.

    Applies one undamped step through fresh kernel rows K(x, z_j) dz, so a
    converged field queried at a grid node reproduces the node value up to
    one extra contraction factor.  Interval problems reject points outside
    [a, b]; periodic ones wrap them.
    """
    op = net.op
    if op.problem is None:
        raise ValidationError(
            "operator carries no continuous problem; off-grid evaluation "
            "is unavailable")
    if field.values.shape != (op.n,):
        raise ValidationError(
            f"field of size {field.values.shape} does not match grid of "
            f"size {op.n}")
    pts = np.asarray(points, dtype=float).ravel()
    grid = op.grid
    if grid.topology == "periodic":
        pts = grid.a + np.mod(pts - grid.a, grid.length)
    else:
        bad = (pts < grid.a) | (pts > grid.b) | ~np.isfinite(pts)
        if bad.any():
            raise ValidationError(
                f"query point {pts[np.argmax(bad)]!r} outside "
                f"[{grid.a}, {grid.b}]")
    rows = np.asarray(op.problem.kernel(pts[:, None], grid.nodes[None, :]),
                      dtype=float)
    rows = np.broadcast_to(rows, (pts.size, op.n)) * grid.spacing
    g_pts = np.broadcast_to(
        np.asarray(op.problem.source(pts), dtype=float), pts.shape)
    out = g_pts + rows @ field.values
    if not np.all(np.isfinite(out)):
        raise DivergenceError("non-finite value in query evaluation")
    return out


def dense_solve(op: DiscreteOperator) -> Tuple[SolutionField, float]:
    """Solve (I - A) f = g directly.

    This is the exact limit of the undamped iteration and serves as the
    oracle separating iteration error from quadrature error.  Returns the
    field together with a 1-norm condition estimate of I - A; a singular
    or numerically unusable system raises SingularSystemError.
    """
    n = op.n
    m = np.eye(n) - op.matrix
    try:
        f = np.linalg.solve(m, op.source)
        with np.errstate(all="ignore"):
            cond = float(np.linalg.cond(m, 1))
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(f"I - A is singular: {exc}") from exc
    if not (np.all(np.isfinite(f)) and np.isfinite(cond)):
        raise SingularSystemError(
            f"I - A numerically singular (condition estimate {cond:g})")
    return SolutionField(grid=op.grid, values=f), cond


@dataclass(frozen=True)
class ErrorBudget:
    """Ingredients of the a priori error accounting.

    q is the sup-norm contraction estimate, derivative_bound the slope
    constant of the integrand, residual the size of the first correction
    ||A g||.  quadrature_term is the one-shot Riemann-sum error
    derivative_bound * (b - a)^2 / (2 n).
    """

    q: float
    derivative_bound: float
    a: float
    b: float
    n: int
    residual: float
    target_eps: Optional[float] = None
    planned_layers: Optional[int] = None

    def __post_init__(self):
        vals = (self.q, self.derivative_bound, self.residual)
        if not all(np.isfinite(v) and v >= 0.0 for v in vals):
            raise ValidationError(f"budget entries must be finite and "
                                  f"non-negative, got {vals}")
        if not (np.isfinite(self.a) and np.isfinite(self.b) and self.a < self.b):
            raise ValidationError(f"invalid interval [{self.a}, {self.b}]")
        if self.n < 1:
            raise ValidationError(f"grid size {self.n} must be >= 1")

    @property
    def quadrature_term(self) -> float:
        return self.derivative_bound * (self.b - self.a) ** 2 / (2.0 * self.n)

    @property
    def seed_constant(self) -> float:
        """C = quadrature term + residual, the M-independent factor."""
        return self.quadrature_term + self.residual


def budget_from_operator(op: DiscreteOperator,
                         target_eps: Optional[float] = None) -> ErrorBudget:
    """Measure q, the derivative bound and the residual on the operator.

    When a target accuracy is given and the operator contracts, the
    matching layer plan is attached.
    """
    budget = ErrorBudget(
        q=estimate_contraction(op),
        derivative_bound=estimate_derivative_bound(op),
        a=op.grid.a, b=op.grid.b, n=op.grid.n,
        residual=residual_norm(op))
    if target_eps is not None:
        planned = plan_layers(budget, target_eps) if budget.q < 1.0 else None
        budget = replace(budget, target_eps=float(target_eps),
                         planned_layers=planned)
    return budget


def _require_contraction(budget: ErrorBudget):
    if budget.q >= 1.0:
        raise BoundUnavailableError(
            f"contraction estimate q={budget.q:.6g} is not below 1; the "
            f"geometric bound does not apply")


def error_bound(budget: ErrorBudget, layers: int) -> float:
    """A priori sup-norm error after ``layers`` undamped steps:
    (q^M / (1 - q)) * (quadrature term + residual)."""
    if layers < 0:
        raise ValidationError(f"layer count {layers} must be >= 0")
    _require_contraction(budget)
    return (budget.q ** layers / (1.0 - budget.q)) * budget.seed_constant


def plan_layers(budget: ErrorBudget, eps: float) -> int:
    """Smallest layer count whose error bound is at most eps.

    Closed form M >= [ln(eps (1-q)) - ln C] / ln q, rounded up with a
    small tolerance so that eps = error_bound(M) maps back to exactly M,
    then verified against the bound directly.  Targets looser than the
    zero-layer bound plan zero layers.
    """
    _require_contraction(budget)
    if not (np.isfinite(eps) and eps > 0.0):
        raise ValidationError(f"target accuracy {eps!r} must be positive")
    c = budget.seed_constant
    if c == 0.0 or error_bound(budget, 0) <= eps:
        return 0
    if budget.q == 0.0:
        layers = 1
    else:
        x = (math.log(eps * (1.0 - budget.q)) - math.log(c)) / math.log(budget.q)
        layers = max(0, math.ceil(x - 1e-9))
    while error_bound(budget, layers) > eps:
        layers += 1
    while layers > 0 and error_bound(budget, layers - 1) <= eps:
        layers -= 1
    return layers


def km_error_estimate(budget: ErrorBudget, schedule: KMSchedule,
                      layers: int) -> float:
    """Exponential estimate for the damped iteration:
    (e^(1-q) / (1-q)) * residual * e^(-(1-q) v_M), v_M = sum of the first
    M relaxations (v_0 = 0)."""
    if layers < 0:
        raise ValidationError(f"layer count {layers} must be >= 0")
    _require_contraction(budget)
    v = schedule.partial_sum(layers)
    s = 1.0 - budget.q
    return (math.exp(s) / s) * budget.residual * math.exp(-s * v)


def layer_sweep(op: DiscreteOperator, schedule: KMSchedule, max_layers: int,
                exact: Optional[Callable] = None,
                points: Optional[Sequence[float]] = None
                ) -> List[Tuple[int, float]]:
    """Error (or update size) as a function of depth.

    For each m = 1..max_layers the m-layer iterate is composed with the
    evaluation layer at ``points`` (grid nodes by default) and compared
    with ``exact``; without an exact solution the sup-norm update
    ||h_m - h_(m-1)|| is tabulated instead.  The iterate is built
    incrementally, so the sweep costs one forward pass overall.
    """
    if max_layers < 1:
        raise ValidationError(f"max_layers {max_layers} must be >= 1")
    net = build_network(op, max_layers, schedule)
    if exact is not None:
        if op.problem is None:
            raise ValidationError(
                "error sweep needs the continuous problem for evaluation")
        pts = np.asarray(op.grid.nodes if points is None else points,
                         dtype=float).ravel()
        rows = np.asarray(op.problem.kernel(pts[:, None],
                                            op.grid.nodes[None, :]),
                          dtype=float)
        rows = np.broadcast_to(rows, (pts.size, op.n)) * op.grid.spacing
        g_pts = np.broadcast_to(np.asarray(op.problem.source(pts), dtype=float),
                                pts.shape)
        target = np.asarray(exact(pts), dtype=float)
    table: List[Tuple[int, float]] = []
    h_prev = np.zeros(op.n)
    h = net.bias(1).copy()
    with np.errstate(all="ignore"):
        for m in range(1, max_layers + 1):
            if m > 1:
                h_prev, h = h, net.weight(m) @ h + net.bias(m)
            if not np.all(np.isfinite(h)):
                raise DivergenceError(f"non-finite values at layer {m}")
            if exact is not None:
                vals = g_pts + rows @ h
                table.append((m, float(np.max(np.abs(vals - target)))))
            else:
                table.append((m, float(np.max(np.abs(h - h_prev)))))
    return table
