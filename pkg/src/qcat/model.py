"""Tridiagonal N x N crypto-Hermitian chain Hamiltonians and their spectra.

The one-parameter chain has diagonal ``2k - 1 - N`` (k = 1..N) and
antisymmetric couplings ``+-sqrt(k (N - k)) * sqrt(1 - lam)``. Its spectrum is
the equidistant ladder ``(2n + 1 - N) * sqrt(lam)``: real for ``lam > 0``,
totally degenerate at the exceptional point ``lam = 0`` and purely imaginary
beyond it.
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import mpmath
import numpy as np

from .errors import DomainError


class ExtrapolationWarning(UserWarning):
    """Multi-parameter form requested beyond N = 2 and N = 4; coupling placement is extrapolated."""


@dataclass(frozen=True)
class ModelParams:
    n: int
    lam: float = 0.0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise DomainError(f"dimension must be an integer >= 2, got {self.n}")
        if not math.isfinite(self.lam):
            raise DomainError(f"lambda must be finite, got {self.lam}")


@dataclass(frozen=True)
class EnergyList:
    values: np.ndarray
    real_flag: bool

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class MultiParamCoeffs:
    """Quadratic coefficients ``[A, B, ...]``, innermost coupling first."""

    coeffs: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, i):
        return self.coeffs[i]


def couplings(n: int) -> np.ndarray:
    """Bare coupling strengths ``sqrt(k (N - k))`` for k = 1..N-1."""
    k = np.arange(1, n)
    return np.sqrt(k * (n - k))


def _tridiag(diag, upper, dtype) -> np.ndarray:
    n = len(diag)
    h = np.zeros((n, n), dtype=dtype)
    if dtype is object:
        h[:] = mpmath.mpf(0)
    for k in range(n):
        h[k, k] = diag[k]
    for k in range(n - 1):
        h[k, k + 1] = upper[k]
        h[k + 1, k] = -upper[k]
    return h


def _mp_couplings(n: int) -> list:
    return [mpmath.sqrt(k * (n - k)) for k in range(1, n)]


def coupling_scale(lam: float) -> complex | float:
    """``sqrt(1 - lam)``; imaginary for ``lam > 1``."""
    if lam <= 1.0:
        return math.sqrt(1.0 - lam)
    return 1j * math.sqrt(lam - 1.0)


def build_chain(n: int, lam: float, dps: int | None = None) -> np.ndarray:
    """Chain Hamiltonian H(lam); float array for lam <= 1, complex otherwise.

    With ``dps`` set, entries are mpmath numbers computed at that many
    decimal digits (object array). Near ``lam = 0`` the eigenvalues are so
    ill-conditioned that rounding the entries to double already moves them
    by far more than 1e-9 once N >= 8.
    """
    p = ModelParams(n, lam)
    if dps is not None:
        with mpmath.workdps(dps):
            w = mpmath.sqrt(1 - mpmath.mpf(p.lam))
            diag = [mpmath.mpf(2 * k - 1 - n) for k in range(1, n + 1)]
            return _tridiag(diag, [c * w for c in _mp_couplings(n)], object)
    w = coupling_scale(p.lam)
    diag = 2.0 * np.arange(1, n + 1) - 1.0 - n
    dtype = float if isinstance(w, float) else complex
    return _tridiag(diag, couplings(n) * w, dtype)


def analytic_spectrum(n: int, lam: float) -> EnergyList:
    """Closed-form energies ``(2n + 1 - N) sqrt(lam)``, principal root."""
    p = ModelParams(n, lam)
    root = cmath.sqrt(p.lam)
    ladder = 2.0 * np.arange(n) + 1.0 - n
    # ladder is ascending and root is either real or +i*|.|, so already sorted
    return EnergyList(values=ladder * root, real_flag=p.lam >= 0.0)


def build_qc_limit(n: int, dps: int | None = None) -> np.ndarray:
    """Fully degenerate (nilpotent) matrix at the quantum-catastrophe instant.

    Diagonal runs ``N-1, N-3, ..., 1-N``; this is ``-H(0).T``, which is
    similar to ``H(0)`` via the alternating-sign diagonal matrix.
    """
    ModelParams(n, 0.0)
    if dps is not None:
        with mpmath.workdps(dps):
            diag = [mpmath.mpf(n + 1 - 2 * k) for k in range(1, n + 1)]
            return _tridiag(diag, _mp_couplings(n), object)
    diag = n + 1.0 - 2.0 * np.arange(1, n + 1)
    return _tridiag(diag, couplings(n), float)


def multiparam_radicands(n: int, lam: float, coeffs: MultiParamCoeffs) -> np.ndarray:
    """Per-coupling radicands of the multi-parameter family (length N-1)."""
    ModelParams(n, lam)
    if n % 2:
        raise DomainError("multi-parameter forms are defined for even N only")
    if len(coeffs) != n // 2:
        raise DomainError(f"N={n} needs {n // 2} coefficients, got {len(coeffs)}")
    if n == 2:
        return np.array([1.0 - coeffs[0] * lam])
    k = np.arange(1, n)
    depth = np.abs(k - n // 2)
    x = np.asarray(coeffs.coeffs)[depth]
    return 1.0 - lam - x * lam**2


def build_multiparam(
    n: int, lam: float, coeffs: MultiParamCoeffs | Sequence[float], real: bool = False
) -> np.ndarray:
    """Multi-parameter Hamiltonian with couplings ``sqrt(k(N-k)) sqrt(1 - lam - X lam^2)``.

    The coefficient ``X`` of coupling ``k`` is ``coeffs[|k - N/2|]``: the
    central coupling takes the first coefficient, the next pair outward the
    second, and so on. N = 2 uses ``sqrt(1 - A lam)`` instead. Uses the chain
    orientation (diagonal ascending), which is isospectral to the reversed
    printing convention.

    With ``real=True`` a negative radicand raises DomainError; otherwise the
    matrix turns complex.
    """
    if not isinstance(coeffs, MultiParamCoeffs):
        coeffs = MultiParamCoeffs(tuple(coeffs))
    rad = multiparam_radicands(n, lam, coeffs)
    if n not in (2, 4):
        warnings.warn(
            f"N={n}: coefficient-to-coupling assignment is an extrapolation",
            ExtrapolationWarning,
            stacklevel=2,
        )
    diag = 2.0 * np.arange(1, n + 1) - 1.0 - n
    if np.all(rad >= 0.0):
        return _tridiag(diag, couplings(n) * np.sqrt(rad), float)
    if real:
        raise DomainError(f"negative radicand {rad.min():.6g} with real matrix requested")
    return _tridiag(diag, couplings(n) * np.sqrt(rad.astype(complex)), complex)


def sign_gauge(n: int) -> np.ndarray:
    """``diag(+1, -1, +1, ...)``; conjugation flips every off-diagonal sign."""
    return np.diag((-1.0) ** np.arange(n))
