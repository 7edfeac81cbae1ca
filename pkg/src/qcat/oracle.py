"""Brute-force dense linear algebra used as an independent check.

Nothing here imports the polynomial or metric code. The eigensolver is a
plain Householder-Hessenberg reduction followed by single-shift complex QR
with Wilkinson shifts; eigenvectors come from back substitution on the Schur
form. It runs either in complex128 or, when handed an mpmath object array
(or an explicit ``dps``), in mpmath multiprecision with the same code path.
"""
from __future__ import annotations

import cmath
import math
from contextlib import nullcontext
from dataclasses import dataclass

import mpmath
import numpy as np

from .errors import ConvergenceFailure, DomainError

MAX_DIM = 64
DEFAULT_DPS = 60
SWEEPS_PER_DIM = 100


@dataclass(frozen=True)
class EigenResult:
    values: np.ndarray
    vectors: np.ndarray | None = None
    sweeps: int = 0


class _Arith:
    """Scalar helpers for one working precision."""

    def __init__(self, dps):
        self.mp = dps is not None
        if self.mp:
            self.eps = mpmath.mpf(2) ** (-mpmath.mp.prec + 2)
            self.zero = mpmath.mpc(0)
            self.sqrt = mpmath.sqrt
            self.hypot = mpmath.hypot
        else:
            self.eps = np.finfo(float).eps
            self.zero = 0j
            self.sqrt = cmath.sqrt
            self.hypot = math.hypot

    def array(self, a):
        if not self.mp:
            return np.array(a, dtype=complex)
        out = np.empty(a.shape, dtype=object)
        for idx, x in np.ndenumerate(a):
            out[idx] = mpmath.mpc(x)
        return out

    def eye(self, n):
        if not self.mp:
            return np.eye(n, dtype=complex)
        out = np.empty((n, n), dtype=object)
        out[:] = mpmath.mpc(0)
        for i in range(n):
            out[i, i] = mpmath.mpc(1)
        return out

    def norm(self, x):
        if self.mp:
            return self.sqrt(sum(abs(e) ** 2 for e in x)).real
        return math.hypot(*(abs(e) for e in x))


def _hessenberg(h, q, ar, small):
    """Householder reduction in place; columns below ``small`` count as zero."""
    n = h.shape[0]
    for k in range(n - 2):
        x = h[k + 1 :, k].copy()
        if all(abs(e) <= small for e in x[1:]):
            h[k + 2 :, k] = ar.zero
            continue
        x = x / max(abs(e) for e in x)
        alpha = ar.norm(x)
        phase = x[0] / abs(x[0]) if abs(x[0]) > ar.eps else 1
        x[0] = x[0] + phase * alpha
        x = x * (1 / ar.norm(x))
        xc = x.conj()
        h[k + 1 :, :] -= np.outer(x, xc @ h[k + 1 :, :]) * 2
        h[:, k + 1 :] -= np.outer(h[:, k + 1 :] @ x, xc) * 2
        q[:, k + 1 :] -= np.outer(q[:, k + 1 :] @ x, xc) * 2
        h[k + 2 :, k] = ar.zero


def _givens(x, y, ar):
    if y == 0:
        return 1, ar.zero
    scale = abs(x) + abs(y)
    x, y = x / scale, y / scale
    if abs(x) <= ar.eps**2:
        return 0, y.conjugate() / abs(y)
    nrm = ar.hypot(abs(x), abs(y))
    return abs(x) / nrm, (x / abs(x)) * y.conjugate() / nrm


def _wilkinson(t, hi, ar):
    a, b = t[hi - 1, hi - 1], t[hi - 1, hi]
    c, d = t[hi, hi - 1], t[hi, hi]
    half = (a - d) / 2
    disc = ar.sqrt(half * half + b * c)
    m1, m2 = (a + d) / 2 + disc, (a + d) / 2 - disc
    return m1 if abs(m1 - d) <= abs(m2 - d) else m2


def _qr_sweep(t, z, lo, hi, mu, ar):
    for k in range(lo, hi + 1):
        t[k, k] -= mu
    rots = []
    for k in range(lo, hi):
        c, s = _givens(t[k, k], t[k + 1, k], ar)
        rk, rk1 = t[k, k:].copy(), t[k + 1, k:].copy()
        # ndarray on the left: mpc * ndarray makes mpmath try str() coercion
        t[k, k:] = rk * c + rk1 * s
        t[k + 1, k:] = rk * (-s.conjugate()) + rk1 * c
        rots.append((c, s))
    for k, (c, s) in zip(range(lo, hi), rots):
        rows = slice(0, min(k + 2, hi) + 1)
        ck, ck1 = t[rows, k].copy(), t[rows, k + 1].copy()
        t[rows, k] = ck * c + ck1 * s.conjugate()
        t[rows, k + 1] = ck * (-s) + ck1 * c
        zk, zk1 = z[:, k].copy(), z[:, k + 1].copy()
        z[:, k] = zk * c + zk1 * s.conjugate()
        z[:, k + 1] = zk * (-s) + zk1 * c
    for k in range(lo, hi + 1):
        t[k, k] += mu


def _schur(a, ar, budget):
    n = a.shape[0]
    t = a.copy()
    z = ar.eye(n)
    anorm = ar.norm(t.ravel())
    small = ar.eps * (anorm if anorm else 1)
    _hessenberg(t, z, ar, small)
    hi, sweeps, stuck = n - 1, 0, 0
    while hi > 0:
        lo = hi
        while lo > 0 and abs(t[lo, lo - 1]) > small:
            lo -= 1
        if lo > 0:
            t[lo, lo - 1] = ar.zero
        if lo == hi:
            hi -= 1
            stuck = 0
            continue
        if sweeps >= budget:
            raise ConvergenceFailure(
                f"QR did not converge in {budget} sweeps",
                best_residual=float(abs(t[hi, hi - 1])),
            )
        if stuck and stuck % 10 == 0:
            mu = t[hi, hi] + abs(t[hi, hi - 1]) * (0.75 + 0.5j)
        else:
            mu = _wilkinson(t, hi, ar)
        _qr_sweep(t, z, lo, hi, mu, ar)
        sweeps += 1
        stuck += 1
    return t, z, sweeps, small


def _schur_vectors(t, z, small, ar):
    n = t.shape[0]
    y = ar.eye(n)
    for k in range(n):
        lam = t[k, k]
        for i in range(k - 1, -1, -1):
            acc = sum((t[i, j] * y[j, k] for j in range(i + 1, k + 1)), ar.zero)
            den = t[i, i] - lam
            if abs(den) < small:
                den = small
            y[i, k] = -acc / den
    x = z @ y
    for k in range(n):
        col = x[:, k]
        col = col / ar.norm(col)
        j = int(np.argmax([abs(e) for e in col]))
        x[:, k] = col * (abs(col[j]) / col[j])
    return x


def _pow2_scale(x, e: int):
    """``x * 2**e`` in two steps so that neither factor overflows."""
    half = e // 2
    return (x * math.ldexp(1.0, half)) * math.ldexp(1.0, e - half)


def sort_spectrum(values, vectors=None, digits: int = 10):
    """Sort by real part, then imaginary part, ignoring noise below ``10**-digits``."""
    values = np.asarray(values, dtype=complex)
    keys = sorted(
        range(len(values)),
        key=lambda i: (round(values[i].real, digits), round(values[i].imag, digits)),
    )
    vals = values[keys]
    if vectors is None:
        return vals, None
    return vals, np.asarray(vectors)[:, keys]


def dense_eigen(a, want_vectors: bool = False, dps: int | None = None) -> EigenResult:
    """Full eigendecomposition by Hessenberg reduction plus shifted QR.

    Parameters
    ----------
    a : (N, N) array_like
        Real or complex matrix; an object array of mpmath numbers switches to
        multiprecision.
    want_vectors : bool
        Also return unit right eigenvectors as columns.
    dps : int, optional
        Decimal digits for the multiprecision path. Defaults to 60 for
        object input; ``None`` with numeric input means complex128.

    Raises
    ------
    ConvergenceFailure
        If more than ``100 * N`` QR sweeps are needed.
    """
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError(f"square matrix required, got shape {a.shape}")
    n = a.shape[0]
    if n > MAX_DIM:
        raise DomainError(f"N={n} exceeds oracle limit {MAX_DIM}")
    if a.dtype == object and dps is None:
        dps = DEFAULT_DPS
    ctx = mpmath.workdps(dps) if dps is not None else nullcontext()
    with ctx:
        ar = _Arith(dps)
        work = ar.array(a)
        shift = 0
        if not ar.mp:
            # exact power-of-two rescaling keeps tiny or huge entries in range
            peak = float(np.abs(work).max())
            if peak > 0 and math.isfinite(peak):
                shift = -math.frexp(peak)[1]
                work = _pow2_scale(work, shift)
                # subnormals sit ~1e-292 below the backward-error floor and
                # make complex division overflow
                work[np.abs(work) < np.finfo(float).tiny] = 0.0
        t, z, sweeps, small = _schur(work, ar, SWEEPS_PER_DIM * n)
        vals = _pow2_scale(np.array([complex(t[k, k]) for k in range(n)]), -shift)
        vecs = None
        if want_vectors:
            x = _schur_vectors(t, z, small, ar)
            vecs = np.array([[complex(e) for e in row] for row in x])
    vals, vecs = sort_spectrum(vals, vecs)
    return EigenResult(values=vals, vectors=vecs, sweeps=sweeps)


def eigvals(a, dps: int | None = None) -> np.ndarray:
    return dense_eigen(a, dps=dps).values


def char_poly(a) -> np.ndarray:
    """Monic characteristic polynomial, highest power first (Faddeev-LeVerrier).

    Returns ``[1, c_{N-1}, ..., c_0]`` with ``det(tI - A) = sum c_k t^k``.
    """
    a = np.asarray(a)
    n = a.shape[0]
    if n > 16:
        raise DomainError("Faddeev-LeVerrier limited to N <= 16")
    dtype = complex if np.iscomplexobj(a) else float
    a = a.astype(dtype)
    coeffs = [dtype(1)]
    m = np.zeros_like(a)
    eye = np.eye(n, dtype=dtype)
    c = dtype(1)
    for k in range(1, n + 1):
        m = a @ m + c * eye
        c = -np.trace(a @ m) / k
        coeffs.append(c)
    return np.array(coeffs)


def det_elim(a) -> complex | float:
    """Determinant via Gaussian elimination with partial pivoting."""
    u = np.array(a, dtype=complex if np.iscomplexobj(a) else float)
    n = u.shape[0]
    det = 1.0
    for k in range(n):
        p = k + int(np.argmax(np.abs(u[k:, k])))
        if u[p, k] == 0:
            return 0.0 * det
        if p != k:
            u[[k, p]] = u[[p, k]]
            det = -det
        det *= u[k, k]
        u[k + 1 :, k:] -= np.outer(u[k + 1 :, k] / u[k, k], u[k, k:])
    return det


def matrix_power_norm(a, k: int, dps: int | None = None) -> float:
    """Max-norm of ``A**k`` by repeated multiplication.

    Object (mpmath) input is multiplied at ``dps`` digits, default 60.
    """
    if k < 1:
        raise DomainError("power must be >= 1")
    a = np.asarray(a)
    if a.dtype == object and dps is None:
        dps = DEFAULT_DPS
    with mpmath.workdps(dps) if dps is not None else nullcontext():
        p = a.copy()
        for _ in range(k - 1):
            p = p @ a
        return float(max(abs(e) for e in p.ravel()))
