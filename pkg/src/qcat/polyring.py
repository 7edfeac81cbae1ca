"""Homogeneous polynomials in (u, v) and their reduction to polynomials in z.

The variables are tied to the coupling distance ``lam`` through

    r = sqrt(lam),  u = sqrt(1 - r),  v = sqrt(1 + r),  z = u v = sqrt(1 - lam)

so ``u**2 + v**2 == 2`` and ``v**2 - u**2 == 2 r`` identically. Keeping every
polynomial homogeneous makes the ketket recurrence a closed computation: the
division by ``uv`` is exact or it signals a real failure.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import DivisionResidue, DomainError, ResidualR

DEFAULT_TOL = 1e-10
MAX_DIM = 16
MAX_DEGREE = 2 * (MAX_DIM - 1)
ZTRIM = 1e-12


class HomogPoly:
    """Homogeneous polynomial ``sum_m coeffs[m] * u**(d-m) * v**m``.

    Coefficients are stored in a read-only float array of length ``d + 1``.
    Supports ``+``, ``-``, scalar and polynomial ``*`` and evaluation by
    calling with ``lam``.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = np.array(coeffs, dtype=float)
        if c.ndim != 1 or c.size == 0:
            raise ValueError("coefficients must be a non-empty 1-d sequence")
        if c.size - 1 > MAX_DEGREE:
            raise DomainError(f"degree {c.size - 1} exceeds cap {MAX_DEGREE}")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        c.flags.writeable = False
        self.coeffs = c

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    @classmethod
    def zero(cls, degree: int) -> "HomogPoly":
        return cls(np.zeros(degree + 1))

    @classmethod
    def monomial(cls, upow: int, vpow: int, c: float = 1.0) -> "HomogPoly":
        out = np.zeros(upow + vpow + 1)
        out[vpow] = c
        return cls(out)

    def coeff(self, upow: int, vpow: int) -> float:
        """Coefficient of ``u**upow * v**vpow`` (zero if the degree differs)."""
        if upow + vpow != self.degree or upow < 0 or vpow < 0:
            return 0.0
        return float(self.coeffs[vpow])

    def scale(self) -> float:
        return max(1.0, float(np.abs(self.coeffs).max()))

    def isclose(self, other: "HomogPoly", tol: float = 1e-12) -> bool:
        return self.degree == other.degree and bool(
            np.all(np.abs(self.coeffs - other.coeffs) <= tol)
        )

    def __add__(self, other):
        return hp_add(self, other)

    def __sub__(self, other):
        return hp_add(self, -other)

    def __neg__(self):
        return HomogPoly(-self.coeffs)

    def __mul__(self, other):
        if isinstance(other, HomogPoly):
            return hp_mul(self, other)
        return HomogPoly(self.coeffs * float(other))

    __rmul__ = __mul__

    def __truediv__(self, c):
        return HomogPoly(self.coeffs / float(c))

    def __call__(self, lam):
        return hp_eval(self, lam)

    def __repr__(self):
        d = self.degree
        terms = []
        for m, c in enumerate(self.coeffs):
            if c == 0.0:
                continue
            mono = "*".join(
                f"{name}^{p}" if p > 1 else name
                for name, p in (("u", d - m), ("v", m))
                if p > 0
            )
            terms.append(f"{c:+.6g}" + (f"*{mono}" if mono else ""))
        return f"HomogPoly(deg={d}: {' '.join(terms) or '0'})"


U = HomogPoly([1.0, 0.0])
V = HomogPoly([0.0, 1.0])
UV = HomogPoly([0.0, 1.0, 0.0])


def hp_add(p: HomogPoly, q: HomogPoly) -> HomogPoly:
    if p.degree != q.degree:
        raise ValueError(f"degree mismatch: {p.degree} vs {q.degree}")
    return HomogPoly(p.coeffs + q.coeffs)


def hp_mul(p: HomogPoly, q: HomogPoly) -> HomogPoly:
    return HomogPoly(np.convolve(p.coeffs, q.coeffs))


def homog_const(c: float) -> HomogPoly:
    """The constant ``c`` written as ``(c/2)(u**2 + v**2)``."""
    return HomogPoly([c / 2.0, 0.0, c / 2.0])


def homog_r() -> HomogPoly:
    """``r = sqrt(lam)`` written as ``(v**2 - u**2)/2``."""
    return HomogPoly([-0.5, 0.0, 0.5])


def hp_div_uv(p: HomogPoly, tol: float = DEFAULT_TOL) -> HomogPoly:
    """Exact quotient ``p / (u v)``.

    The pure powers ``u**d`` and ``v**d`` must vanish to within
    ``tol * max(1, max|coeff|)``; they are dropped and the remaining
    coefficients shift down by one degree in each variable.
    """
    if p.degree < 2:
        raise ValueError("need degree >= 2 to divide by uv")
    lim = tol * p.scale()
    head, tail = p.coeffs[0], p.coeffs[-1]
    if abs(head) > lim or abs(tail) > lim:
        raise DivisionResidue(
            f"pure-power residue u^d={head:.3e}, v^d={tail:.3e} exceeds {lim:.3e}"
        )
    return HomogPoly(p.coeffs[1:-1])


def uv_values(lam: float) -> tuple[float, float]:
    if not (0.0 <= lam <= 1.0):
        raise DomainError(f"lambda={lam} outside [0, 1]")
    r = np.sqrt(lam)
    # 1 - r = (1 - lam)/(1 + r) avoids cancellation as lam -> 1
    return float(np.sqrt((1.0 - lam) / (1.0 + r))), float(np.sqrt(1.0 + r))


def hp_eval_uv(p: HomogPoly, u: float, v: float) -> float:
    d = p.degree
    m = np.arange(d + 1)
    return float(np.sum(p.coeffs * u ** (d - m) * v**m))


def hp_eval(p: HomogPoly, lam: float) -> float:
    u, v = uv_values(lam)
    return hp_eval_uv(p, u, v)


class ZPoly:
    """Polynomial in ``z``; ``coeffs[k]`` multiplies ``z**k``.

    Trailing coefficients with magnitude below 1e-12 are trimmed, so the zero
    polynomial has an empty coefficient array and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = np.array(coeffs, dtype=float).ravel()
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        k = c.size
        while k > 0 and abs(c[k - 1]) < ZTRIM:
            k -= 1
        c = c[:k].copy()
        c.flags.writeable = False
        self.coeffs = c

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def coeff(self, k: int) -> float:
        return float(self.coeffs[k]) if 0 <= k < self.coeffs.size else 0.0

    def padded(self, length: int) -> np.ndarray:
        out = np.zeros(length)
        out[: self.coeffs.size] = self.coeffs
        return out

    def isclose(self, other: "ZPoly", tol: float = 1e-12) -> bool:
        n = max(self.coeffs.size, other.coeffs.size)
        return bool(np.all(np.abs(self.padded(n) - other.padded(n)) <= tol))

    def __call__(self, z):
        return np.polynomial.polynomial.polyval(z, self.coeffs) if self.coeffs.size else 0.0 * z

    def __add__(self, other):
        n = max(self.coeffs.size, other.coeffs.size)
        return ZPoly(self.padded(n) + other.padded(n))

    def __mul__(self, other):
        if isinstance(other, ZPoly):
            if not self.coeffs.size or not other.coeffs.size:
                return ZPoly([])
            return ZPoly(np.convolve(self.coeffs, other.coeffs))
        return ZPoly(self.coeffs * float(other))

    __rmul__ = __mul__

    def __repr__(self):
        return f"ZPoly({self.coeffs.tolist()})"


# Elements of R[z][r] / (r^2 - (1 - z^2)) are pairs (P, Q) meaning P(z) + r Q(z).


@lru_cache(maxsize=None)
def _one_minus_sr_pow(p: int, sign: int) -> tuple[tuple[float, ...], tuple[float, ...]]:
    """``(1 + sign*r)**p`` reduced to ``P(z) + r Q(z)``."""
    P = np.zeros(2 * p + 1)
    Q = np.zeros(2 * p + 1)
    P[0] = 1.0
    one_minus_z2 = np.zeros(3)
    one_minus_z2[0], one_minus_z2[2] = 1.0, -1.0
    for _ in range(p):
        # (P + rQ)(1 + s r) = P + s(1 - z^2)Q + r(Q + s P)
        rq = np.convolve(one_minus_z2, Q)[: P.size]
        P, Q = P + sign * rq, Q + sign * P
    return tuple(P), tuple(Q)


def reduce_to_z(p: HomogPoly, tol: float = DEFAULT_TOL) -> ZPoly:
    """Rewrite an even-degree (u, v) polynomial as a pure polynomial in z.

    Each monomial ``u**a v**b`` becomes ``z**min(a, b)`` times a power of
    ``(1 - r)`` or ``(1 + r)``; ``r**2`` is eliminated via ``1 - z**2``.
    Raises ResidualR if the part odd in r does not cancel.
    """
    d = p.degree
    if d % 2:
        raise ValueError(f"reduce_to_z needs even degree, got {d}")
    P = np.zeros(d + 1)
    Q = np.zeros(d + 1)
    for m, c in enumerate(p.coeffs):
        if c == 0.0:
            continue
        a, b = d - m, m
        k = min(a, b)
        sign = -1 if a > b else 1
        Pm, Qm = _one_minus_sr_pow(abs(a - b) // 2, sign)
        P[k : k + len(Pm)] += c * np.asarray(Pm)
        Q[k : k + len(Qm)] += c * np.asarray(Qm)
    scale = p.scale()
    resid = float(np.abs(Q).max()) if Q.size else 0.0
    if resid > tol * scale:
        raise ResidualR(f"r-dependent residue {resid:.3e} exceeds {tol * scale:.3e}")
    P[np.abs(P) < ZTRIM * scale] = 0.0
    return ZPoly(P)
