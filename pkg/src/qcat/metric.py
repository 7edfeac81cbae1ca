"""Left eigenvectors ("ketkets"), their coefficient matrices, and the metric.

Row ``i`` (1-indexed) of a :class:`KetketSet` is the eigenvector of ``H.T``
at energy ``(N + 1 - 2i) r``, listed from the top of the ladder down. Each
component is a homogeneous (u, v) polynomial of degree ``N - 1`` produced by
the three-term recurrence of the tridiagonal eigenproblem, so stacking the
rows gives the expansion

    rows = sum_j  u**(N-j) (-v)**(j-1) M(j),   M(1) = I,  M(N) = J.

The metric is the (normalised) sum of outer products of the rows. Reduced to
``z = sqrt(1 - lam)`` it is a matrix polynomial of degree ``N - 1``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb, sqrt

import numpy as np

from .errors import ConsistencyFailure, DomainError, NotPositiveDefinite, PatternFailure
from .polyring import (
    DEFAULT_TOL,
    MAX_DIM,
    UV,
    HomogPoly,
    ZPoly,
    homog_const,
    homog_r,
    hp_div_uv,
    hp_eval_uv,
    reduce_to_z,
    uv_values,
)

CONSISTENCY_TOL = 1e-9
PATTERN_TOL = 1e-10


@dataclass(frozen=True)
class KetketSet:
    n: int
    rows: tuple

    def energy_index(self, i: int) -> int:
        """Ladder index ``n`` of 0-based row ``i`` (energy ``(2n + 1 - N) r``)."""
        return self.n - 1 - i

    def evaluate(self, lam: float) -> np.ndarray:
        """Numeric rows at ``lam`` in [0, 1]; row ``i`` is one left eigenvector."""
        u, v = uv_values(lam)
        return np.array([[hp_eval_uv(p, u, v) for p in row] for row in self.rows])


@dataclass(frozen=True)
class CoeffMatrices:
    n: int
    mats: tuple

    def __getitem__(self, j: int) -> np.ndarray:
        """``M(j)`` for 1 <= j <= N."""
        if not 1 <= j <= self.n:
            raise IndexError(j)
        return self.mats[j - 1]

    def reconstruct(self, lam: float) -> np.ndarray:
        u, v = uv_values(lam)
        n = self.n
        return sum(u ** (n - j) * (-v) ** (j - 1) * self[j] for j in range(1, n + 1))


@dataclass(frozen=True)
class MetricPoly:
    n: int
    entries: tuple

    def coeff_tensor(self) -> np.ndarray:
        """Array ``T`` of shape (N, N, N) with ``Theta(z) = sum_k z**k T[k]``."""
        n = self.n
        out = np.zeros((n, n, n))
        for a in range(n):
            for b in range(n):
                out[:, a, b] = self.entries[a][b].padded(n)
        return out

    def at_z(self, z: float) -> np.ndarray:
        t = self.coeff_tensor()
        return np.tensordot(z ** np.arange(self.n), t, axes=1)

    def __getitem__(self, ab):
        a, b = ab
        return self.entries[a][b]


def _check_dim(n: int) -> None:
    if int(n) != n or not 2 <= n <= MAX_DIM:
        raise DomainError(f"ketkets need 2 <= N <= {MAX_DIM}, got {n}")


@lru_cache(maxsize=None)
def _ketkets(n: int, tol: float) -> KetketSet:
    _check_dim(n)
    deg = n - 1
    r = homog_r()
    coupling = [sqrt(k * (n - k)) for k in range(1, n)]  # index k-1
    rows = []
    for i in range(1, n + 1):
        e = 2 * (n - i) + 1 - n
        seed = HomogPoly.monomial(n - i, i - 1, sqrt(comb(deg, i - 1)) * (-1) ** (i - 1))
        psi = [seed]
        for k in range(1, n):
            num = (homog_const(2 * k - 1 - n) - e * r) * psi[k - 1]
            if k > 1:
                num = num + coupling[k - 2] * (UV * psi[k - 2])
            psi.append(hp_div_uv(num, tol) / coupling[k - 1])
        last = coupling[n - 2] * (UV * psi[n - 2]) + (homog_const(n - 1) - e * r) * psi[n - 1]
        resid = float(np.abs(last.coeffs).max())
        scale = max(1.0, max(p.scale() for p in psi))
        if resid > CONSISTENCY_TOL * scale:
            raise ConsistencyFailure(f"row {i}: closing equation residual {resid:.3e}")
        rows.append(tuple(psi))
    return KetketSet(n=n, rows=tuple(rows))


def ketkets(n: int, tol: float = DEFAULT_TOL) -> KetketSet:
    """Exact left eigenvectors of the chain Hamiltonian as (u, v) polynomials.

    Row ``i`` starts from ``sqrt(C(N-1, i-1)) u**(N-i) (-v)**(i-1)`` and the
    remaining components follow from

        psi[k+1] = (c[k-1] psi[k-1] + (d[k] - E) psi[k]) / c[k],

    with ``c[k] = sqrt(k(N-k)) uv``, ``d[k] = 2k-1-N`` and ``E`` a multiple of
    ``r``, all written homogeneously. The last row of the eigen-equation is
    not used by the recurrence and is checked afterwards.

    Raises
    ------
    DivisionResidue
        A division by ``uv`` left a remainder.
    ConsistencyFailure
        The closing equation is violated.
    """
    _check_dim(n)
    return _ketkets(int(n), float(tol))


@lru_cache(maxsize=None)
def _coefficient_matrices(n: int) -> CoeffMatrices:
    kk = ketkets(n)
    mats = []
    for j in range(1, n + 1):
        m = np.array([[(-1) ** (j - 1) * p.coeffs[j - 1] for p in row] for row in kk.rows])
        m.flags.writeable = False
        mats.append(m)
    if np.abs(mats[0] - np.eye(n)).max() > PATTERN_TOL:
        raise PatternFailure("M(1) is not the identity")
    if np.abs(mats[-1] - np.eye(n)[::-1]).max() > PATTERN_TOL:
        raise PatternFailure("M(N) is not the exchange matrix")
    return CoeffMatrices(n=n, mats=tuple(mats))


def coefficient_matrices(n: int) -> CoeffMatrices:
    """Matrices ``M(1)..M(N)`` of the stacked-ketket expansion."""
    _check_dim(n)
    return _coefficient_matrices(int(n))


@lru_cache(maxsize=None)
def _metric_poly(n: int, tol: float) -> MetricPoly:
    rows = ketkets(n).rows
    norm = 2.0 ** -(n - 1)
    entries = [[None] * n for _ in range(n)]
    for a in range(n):
        for b in range(a, n):
            acc = sum((row[a] * row[b] for row in rows[1:]), rows[0][a] * rows[0][b])
            entries[a][b] = entries[b][a] = reduce_to_z(acc * norm, tol)
    for a in range(n):
        if abs(entries[a][a].coeff(0) - 1.0) > PATTERN_TOL:
            raise PatternFailure(f"diagonal entry {a} has constant term {entries[a][a].coeff(0)}")
    return MetricPoly(n=n, entries=tuple(tuple(r) for r in entries))


def metric_poly(n: int, tol: float = DEFAULT_TOL) -> MetricPoly:
    """Metric ``2**-(N-1) sum_i psi_i psi_i^T`` as a matrix of z-polynomials.

    The ``2**-(N-1)`` factor makes ``Theta(z=0)`` the identity.
    """
    _check_dim(n)
    return _metric_poly(int(n), float(tol))


def metric_at(n: int, lam: float) -> np.ndarray:
    """Numeric metric for ``0 < lam <= 1``."""
    if not 0.0 < lam <= 1.0:
        raise DomainError(f"metric defined for lambda in (0, 1], got {lam}")
    return metric_poly(n).at_z(np.sqrt(1.0 - lam))


def inner_product_s(f, g, theta) -> complex | float:
    """Metric-weighted inner product ``sum_mn conj(f_m) Theta_mn g_n``."""
    f, g, theta = np.asarray(f), np.asarray(g), np.asarray(theta)
    if f.shape != g.shape or theta.shape != (f.size, f.size):
        raise DomainError(f"shape mismatch: f{f.shape}, g{g.shape}, theta{theta.shape}")
    out = np.conj(f) @ theta @ g
    return out.item() if np.iscomplexobj(out) and out.imag != 0 else float(np.real(out))


def dyson_factor(theta, tol: float = 1e-12) -> tuple[np.ndarray, np.ndarray]:
    """Symmetric square root ``Omega`` of a PD metric and its inverse."""
    theta = np.asarray(theta, dtype=float)
    if np.abs(theta - theta.T).max() > 1e-12 * max(1.0, np.abs(theta).max()):
        raise NotPositiveDefinite("metric is not symmetric")
    w, q = np.linalg.eigh(theta)
    if w.min() <= tol * max(1.0, w.max()):
        raise NotPositiveDefinite(f"smallest metric eigenvalue {w.min():.3e}")
    root = np.sqrt(w)
    return (q * root) @ q.T, (q / root) @ q.T


def dyson_hermitize(h, theta, tol: float = 1e-12) -> np.ndarray:
    """``Omega h Omega^-1`` with ``Omega = Theta**(1/2)``.

    Symmetric whenever ``h.T @ theta == theta @ h``.

    Evaluated as ``Omega^-1 (Theta h) Omega^-1``, which is the same matrix
    but loses about an order of magnitude less symmetry to rounding when
    ``Theta`` is badly conditioned; any asymmetry left is the Dieudonne
    residual ``Theta h - h.T Theta`` seen through ``Omega^-1``.
    """
    theta = np.asarray(theta, dtype=float)
    _, omega_inv = dyson_factor(theta, tol)
    return omega_inv @ (theta @ np.asarray(h)) @ omega_inv
