"""Real observables compatible with a metric: ``G.T @ Theta == Theta @ G``.

For a fixed positive-definite ``Theta`` the solutions are exactly
``Theta^-1 S`` with ``S`` symmetric, so the space has dimension
``N(N+1)/2``. Requiring the same ``G`` for every ``z`` is much more
restrictive and is solved by stacking the constraints at enough sample
points to pin down polynomials of degree ``N - 1`` in ``z``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionFailure, DomainError, NotPositiveDefinite
from .metric import MetricPoly, metric_poly
from .oracle import eigvals

NULL_TOL = 1e-9


@dataclass(frozen=True)
class ObservableBasis:
    n: int
    basis: tuple

    @property
    def dim(self) -> int:
        return len(self.basis)

    def as_array(self) -> np.ndarray:
        return np.array(self.basis).reshape(self.dim, self.n, self.n)

    def project(self, g) -> np.ndarray:
        """Frobenius projection of ``g`` onto the span (basis is orthonormal)."""
        b = self.as_array()
        if not self.dim:
            return np.zeros((self.n, self.n))
        w = np.tensordot(b, np.asarray(g), axes=([1, 2], [0, 1]))
        return np.tensordot(w, b, axes=1)

    def residual(self, g) -> float:
        g = np.asarray(g, dtype=float)
        return float(np.abs(g - self.project(g)).max())


def constraint_matrix(theta) -> np.ndarray:
    """Rows: strict-upper entries of ``G.T Theta - Theta G`` as linear forms in vec(G).

    ``vec`` is row-major, so ``G[c, d]`` sits in column ``c*N + d``. The
    lower triangle is the negated upper one and the diagonal vanishes
    identically, leaving ``N(N-1)/2`` conditions.
    """
    theta = np.asarray(theta, dtype=float)
    n = theta.shape[0]
    rows = []
    for a in range(n):
        for b in range(a + 1, n):
            row = np.zeros((n, n))
            row[:, a] += theta[:, b]  # (G^T Theta)_ab = sum_c G_ca Theta_cb
            row[:, b] -= theta[a, :]  # (Theta G)_ab = sum_c Theta_ac G_cb
            rows.append(row.ravel())
    return np.array(rows).reshape(-1, n * n)


def nullspace(a, tol: float = NULL_TOL) -> np.ndarray:
    """Nullspace basis (columns) by Gaussian elimination with full pivoting.

    A pivot counts as zero once it falls below ``tol`` times the largest
    absolute entry of ``a``.
    """
    a = np.array(a, dtype=float)
    m, n = a.shape
    if m == 0:
        return np.eye(n)
    scale = max(float(np.abs(a).max()), np.finfo(float).tiny)
    cols = np.arange(n)
    rank = 0
    for k in range(min(m, n)):
        sub = np.abs(a[k:, k:])
        i, j = np.unravel_index(np.argmax(sub), sub.shape)
        if sub[i, j] <= tol * scale:
            break
        i, j = i + k, j + k
        a[[k, i]] = a[[i, k]]
        a[:, [k, j]] = a[:, [j, k]]
        cols[[k, j]] = cols[[j, k]]
        a[k] /= a[k, k]
        others = np.arange(m) != k
        a[others] -= np.outer(a[others, k], a[k])
        rank += 1
    free = n - rank
    basis = np.zeros((n, free))
    # reduced form [I  F; 0 0] in permuted columns: x_pivot = -F x_free
    basis[cols[:rank], :] = -a[:rank, rank:]
    basis[cols[rank:], np.arange(free)] = 1.0
    return basis


def _canonical_basis(vecs: np.ndarray, n: int) -> tuple:
    """Orthonormalise and order by descending diagonal weight."""
    if vecs.shape[1] == 0:
        return ()
    q, _ = np.linalg.qr(vecs)
    diag = np.zeros(n * n)
    diag[np.arange(n) * (n + 1)] = 1.0
    w = q.T @ (q * diag[:, None])
    vals, rot = np.linalg.eigh(w)
    order = np.argsort(-vals, kind="stable")
    q = q @ rot[:, order]
    out = []
    for col in q.T:
        j = int(np.argmax(np.abs(col) > 1e-9))
        col = col if col[j] >= 0 else -col
        m = col.reshape(n, n)
        m.flags.writeable = False
        out.append(m)
    return tuple(out)


def _require_pd(theta: np.ndarray) -> None:
    if theta.ndim != 2 or theta.shape[0] != theta.shape[1]:
        raise DomainError(f"square metric required, got {theta.shape}")
    if np.abs(theta - theta.T).max() > 1e-12 * max(1.0, np.abs(theta).max()):
        raise NotPositiveDefinite("metric is not symmetric")
    try:
        np.linalg.cholesky(theta)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite("metric is not positive definite") from exc


def solve_at(theta, tol: float = NULL_TOL) -> ObservableBasis:
    """Basis of real ``G`` with ``G.T Theta = Theta G`` for one metric.

    Raises DimensionFailure if the nullspace is not ``N(N+1)/2``-dimensional.
    """
    theta = np.asarray(theta, dtype=float)
    _require_pd(theta)
    n = theta.shape[0]
    ns = nullspace(constraint_matrix(theta), tol)
    if ns.shape[1] != n * (n + 1) // 2:
        raise DimensionFailure(f"expected dimension {n * (n + 1) // 2}, got {ns.shape[1]}")
    return ObservableBasis(n=n, basis=_canonical_basis(ns, n))


def z_samples(n: int) -> np.ndarray:
    """``N + 1`` distinct points in (0, 1)."""
    return np.arange(1, n + 2) / (n + 2)


def solve_z_independent(
    n: int, metric: MetricPoly | None = None, tol: float = NULL_TOL
) -> ObservableBasis:
    """Observables satisfying the constraint for every z at once.

    Constraint coefficients are polynomials of degree at most ``N - 1`` in
    ``z``, so vanishing at ``N + 1`` distinct samples forces them to vanish
    identically.
    """
    metric = metric if metric is not None else metric_poly(n)
    if metric.n != n:
        raise DomainError(f"metric is {metric.n}x{metric.n}, expected N={n}")
    blocks = []
    for z in z_samples(n):
        theta = metric.at_z(z)
        _require_pd(theta)
        blocks.append(constraint_matrix(theta))
    ns = nullspace(np.vstack(blocks), tol)
    return ObservableBasis(n=n, basis=_canonical_basis(ns, n))


def reality_check(g, tol: float = 1e-9) -> bool:
    """True iff every oracle eigenvalue of ``g`` has ``|Im| < tol``."""
    return bool(np.all(np.abs(eigvals(np.asarray(g)).imag) < tol))


def dieudonne_residual(g, theta) -> float:
    g, theta = np.asarray(g), np.asarray(theta)
    return float(np.abs(g.T @ theta - theta @ g).max())


def f_pattern(a: float, d: float, h: float) -> np.ndarray:
    """Three-parameter z-independent observable family at N = 3."""
    return np.array([[a, d, h], [d, a + h, d], [h, d, a]], dtype=float)


def f_pattern_residual(g) -> float:
    """Distance of a 3x3 matrix from the ``f_pattern`` family (max-norm).

    Fits ``a, d, h`` by least squares and returns the largest entry of the
    leftover.
    """
    g = np.asarray(g, dtype=float)
    if g.shape != (3, 3):
        raise DomainError("f_pattern is defined for 3x3 matrices")
    design = np.array([f_pattern(*e).ravel() for e in np.eye(3)]).T
    coef, *_ = np.linalg.lstsq(design, g.ravel(), rcond=None)
    return float(np.abs(design @ coef - g.ravel()).max())


def n2_rule_residual(g, z: float) -> float:
    """``|(c - b) - z (a - d)|`` for ``G = [[a, b], [c, d]]``."""
    (a, b), (c, d) = np.asarray(g, dtype=float)
    return abs((c - b) - z * (a - d))
