"""Finite-difference reference solver for the Laplace equation on the
unit disc, in polar coordinates.

Second-order central differences discretize u_rr + u_r/r + u_tt/r^2 = 0
on rings r_i = i/Nr (i = 1..Nr-1) with Ntheta periodic angular nodes; the
outer ring is Dirichlet data and the center is closed by one extra
unknown equal to the average of the first ring (the discrete mean-value
property).  The sparse system is solved with BiCGSTAB under a diagonal
preconditioner, started from zero so repeated runs are bit-identical.
Plain point relaxation is impractical here: the angular coupling
1/(r dtheta)^2 blows up near the center and stalls it.
"""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import ConvergenceError, ValidationError

__all__ = ["PolarGrid", "solve_fd", "compare_fields", "FieldStats"]


@dataclass(frozen=True, eq=False)
class PolarGrid:
    """FD solution on the polar grid: interior rings, boundary ring and
    center value, plus solver diagnostics."""

    nr: int
    nt: int
    values: np.ndarray          # (nr-1, nt) at r_i = i/nr, theta_j
    center: float
    boundary_values: np.ndarray
    iterations: int
    residual: float

    def __post_init__(self):
        self.values.setflags(write=False)
        self.boundary_values.setflags(write=False)

    @property
    def spacing_r(self) -> float:
        return 1.0 / self.nr

    @property
    def spacing_theta(self) -> float:
        return 2.0 * np.pi / self.nt

    @property
    def radii(self) -> np.ndarray:
        return np.arange(1, self.nr) / self.nr

    @property
    def theta(self) -> np.ndarray:
        return np.arange(self.nt) * self.spacing_theta


def _assemble(nr: int, nt: int, f: np.ndarray):
    """Sparse 5-point system over (nr-1)*nt ring unknowns + 1 center."""
    dr = 1.0 / nr
    dth = 2.0 * np.pi / nt
    n_unknowns = (nr - 1) * nt + 1
    ic = n_unknowns - 1

    i = np.arange(1, nr)
    r = i * dr
    crp = 1.0 / dr ** 2 + 1.0 / (2.0 * r * dr)
    crm = 1.0 / dr ** 2 - 1.0 / (2.0 * r * dr)
    ct = 1.0 / (r * dth) ** 2
    dg = -(2.0 / dr ** 2 + 2.0 / (r * dth) ** 2)

    ii, jj = np.meshgrid(i, np.arange(nt), indexing="ij")
    k = ((ii - 1) * nt + jj).ravel()
    ii = ii.ravel()
    jj = jj.ravel()

    rows = [k, k, k]
    cols = [k,
            ((ii - 1) * nt + (jj - 1) % nt),
            ((ii - 1) * nt + (jj + 1) % nt)]
    vals = [np.repeat(dg, nt), np.repeat(ct, nt), np.repeat(ct, nt)]

    b = np.zeros(n_unknowns)
    outward = ii < nr - 1
    rows.append(k[outward])
    cols.append((ii[outward] * nt + jj[outward]))
    vals.append(np.repeat(crp, nt)[outward])
    at_boundary = ~outward
    b[k[at_boundary]] = -np.repeat(crp, nt)[at_boundary] * f[jj[at_boundary]]

    inward = ii > 1
    rows.append(k[inward])
    cols.append(((ii[inward] - 2) * nt + jj[inward]))
    vals.append(np.repeat(crm, nt)[inward])
    at_center = ~inward
    rows.append(k[at_center])
    cols.append(np.full(at_center.sum(), ic))
    vals.append(np.repeat(crm, nt)[at_center])

    # center closure: u_c - mean(first ring) = 0
    rows.append(np.concatenate(([ic], np.full(nt, ic))))
    cols.append(np.concatenate(([ic], np.arange(nt))))
    vals.append(np.concatenate(([1.0], np.full(nt, -1.0 / nt))))

    a = sp.coo_matrix(
        (np.concatenate(vals),
         (np.concatenate(rows), np.concatenate(cols))),
        shape=(n_unknowns, n_unknowns)).tocsr()
    return a, b


def solve_fd(boundary_f, nr: int, nt: int, tol: float = 1e-10,
             maxiter: int = None) -> PolarGrid:
    """Solve the Dirichlet problem with data ``boundary_f(theta)``.

    Deterministic for fixed (grid, tol).  Raises ConvergenceError with
    the final relative residual if the iteration cap is hit or the
    method breaks down.
    """
    if nr < 8 or nt < 8:
        raise ValidationError(f"grid {nr}x{nt} too coarse; need >= 8 cells "
                              f"in each direction")
    if not (np.isfinite(tol) and tol > 0.0):
        raise ValidationError(f"tolerance {tol!r} must be positive")
    th = np.arange(nt) * (2.0 * np.pi / nt)
    f = np.broadcast_to(np.asarray(boundary_f(th), dtype=float),
                        th.shape).copy()
    if not np.all(np.isfinite(f)):
        raise ValidationError("boundary data must be finite at every node")

    a, b = _assemble(nr, nt, f)
    diag = a.diagonal()
    precond = spla.LinearOperator(a.shape, matvec=lambda x: x / diag)
    count = [0]

    def tick(_xk):
        count[0] += 1

    x, info = spla.bicgstab(a, b, x0=np.zeros_like(b), rtol=tol, atol=0.0,
                            M=precond, maxiter=maxiter, callback=tick)
    scale = float(np.max(np.abs(b)))
    residual = float(np.max(np.abs(a @ x - b)) / scale) if scale > 0 else 0.0
    if info != 0 or not np.all(np.isfinite(x)):
        reason = ("iteration cap reached" if info > 0
                  else "method broke down")
        raise ConvergenceError(
            f"FD solve on {nr}x{nt} did not converge ({reason}) after "
            f"{count[0]} iterations; relative residual {residual:.3e}")
    return PolarGrid(nr=nr, nt=nt,
                     values=x[:-1].reshape(nr - 1, nt),
                     center=float(x[-1]),
                     boundary_values=f,
                     iterations=count[0],
                     residual=residual)


@dataclass(frozen=True)
class FieldStats:
    """Elementwise comparison summary of two same-shape fields."""

    max_abs: float
    mean_abs: float
    argmax: tuple


def compare_fields(a, b) -> FieldStats:
    """Exact elementwise difference statistics; shapes must match."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValidationError(
            f"field shapes {a.shape} and {b.shape} do not match")
    diff = np.abs(a - b)
    flat = int(np.argmax(diff)) if diff.size else 0
    return FieldStats(
        max_abs=float(diff.max()) if diff.size else 0.0,
        mean_abs=float(diff.mean()) if diff.size else 0.0,
        argmax=tuple(np.unravel_index(flat, a.shape)) if diff.size else ())
