"""Quantum-catastrophe diagnostics: reality scans, EP collapse, layer geometry.

Spectra near the exceptional point are extremely ill-conditioned, so scans
and nilpotency checks build the Hamiltonian and run the oracle in mpmath
(``dps`` decimal digits) by default. Metric conditioning is measured in
double precision from the z-polynomial form.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, MissingBounds, QcatError
from .metric import metric_at
from .model import EnergyList, MultiParamCoeffs, build_chain, build_multiparam
from .oracle import dense_eigen, matrix_power_norm

REALITY_TOL = 1e-9
SCAN_DPS = 50
LAYER_BAND = 1e-9
LAYER_MARGIN = 0.05
KNOWN_BOUNDS = {4: (0.5, 2.0 / 3.0)}


@dataclass(frozen=True)
class ScanRow:
    lam: float
    energies: EnergyList | None
    all_real: bool | None
    near_ep: bool = False
    theta_min_eig: float | None = None
    theta_cond: float | None = None
    error: str | None = None


def classify_reality(values, tol: float = REALITY_TOL) -> tuple[bool, bool]:
    """``(all_real, near_ep)``; near-EP when max ``|Im|`` is within 10x of ``tol``."""
    worst = float(np.abs(np.asarray(values).imag).max())
    return worst < tol, tol / 10 <= worst < 10 * tol


def metric_conditioning(n: int, lam: float) -> tuple[float, float]:
    w = np.linalg.eigvalsh(metric_at(n, lam))
    wmin = float(w.min())
    return wmin, float(w.max() / wmin) if wmin > 0 else math.inf


def _scan_one(n: int, lam: float, tol: float, dps: int | None) -> ScanRow:
    try:
        vals = dense_eigen(build_chain(n, lam, dps=dps)).values
    except QcatError as exc:
        return ScanRow(lam=lam, energies=None, all_real=None, error=f"{type(exc).__name__}: {exc}")
    real, near = classify_reality(vals, tol)
    wmin = cond = None
    if 0.0 < lam <= 1.0:
        wmin, cond = metric_conditioning(n, lam)
    return ScanRow(
        lam=lam,
        energies=EnergyList(values=vals, real_flag=real),
        all_real=real,
        near_ep=near,
        theta_min_eig=wmin,
        theta_cond=cond,
    )


def spectrum_scan(
    n: int, lambdas: Iterable[float], tol: float = REALITY_TOL, dps: int | None = SCAN_DPS
) -> list[ScanRow]:
    """Oracle spectrum and metric conditioning per grid point, in grid order.

    Oracle failures are recorded on the row instead of aborting the scan.
    """
    lambdas = [float(x) for x in lambdas]
    if not lambdas:
        raise DomainError("empty lambda grid")
    return [_scan_one(n, lam, tol, dps) for lam in lambdas]


def _max_pair_cosine(vectors: np.ndarray) -> float:
    cols = vectors / np.linalg.norm(vectors, axis=0)
    best = 0.0
    for i, j in combinations(range(cols.shape[1]), 2):
        best = max(best, abs(np.vdot(cols[:, i], cols[:, j])))
    return best


@dataclass(frozen=True)
class EPRow:
    lam: float
    spread: float
    cos_right: float
    cos_left: float
    theta_min_eig: float


@dataclass(frozen=True)
class EPReport:
    n: int
    rows: tuple
    spread_decreasing: bool
    cosine_increasing: bool
    theta_decreasing: bool

    @property
    def monotone(self) -> bool:
        return self.spread_decreasing and self.cosine_increasing and self.theta_decreasing


def _strict(seq: Sequence[float], increasing: bool) -> bool:
    pairs = zip(seq, seq[1:])
    return all((b > a) if increasing else (b < a) for a, b in pairs)


def ep_collapse_report(n: int, lambdas: Sequence[float], dps: int | None = SCAN_DPS) -> EPReport:
    """Energy spread, eigenvector alignment and metric floor along ``lam -> 0``.

    ``cos_right``/``cos_left`` are the largest pairwise ``|cosine|`` between
    oracle eigenvectors of ``H`` and of ``H.T``; both tend to 1 as the
    eigenvectors coalesce. Trend flags are strict on the given sequence,
    which should be decreasing.
    """
    lambdas = [float(x) for x in lambdas]
    if not lambdas or any(not 0.0 < x <= 1.0 for x in lambdas):
        raise DomainError("EP report needs lambda values in (0, 1]")
    rows = []
    for lam in lambdas:
        h = build_chain(n, lam, dps=dps)
        right = dense_eigen(h, want_vectors=True)
        left = dense_eigen(h.T.copy(), want_vectors=True)
        spread = float(right.values.real.max() - right.values.real.min())
        wmin, _ = metric_conditioning(n, lam)
        rows.append(
            EPRow(
                lam=lam,
                spread=spread,
                cos_right=_max_pair_cosine(right.vectors),
                cos_left=_max_pair_cosine(left.vectors),
                theta_min_eig=wmin,
            )
        )
    return EPReport(
        n=n,
        rows=tuple(rows),
        spread_decreasing=_strict([r.spread for r in rows], increasing=False),
        cosine_increasing=_strict([r.cos_right for r in rows], True)
        and _strict([r.cos_left for r in rows], True),
        theta_decreasing=_strict([r.theta_min_eig for r in rows], increasing=False),
    )


def nilpotency_check(n: int, tol: float = 1e-8, dps: int | None = SCAN_DPS) -> bool:
    """True iff ``H(0)**N`` vanishes and ``H(0)**(N-1)`` does not.

    In double precision the cancellation in ``H(0)**N`` leaves ~1e-7 at
    N = 10, hence the multiprecision default.
    """
    if not 2 <= n <= 12:
        raise DomainError("nilpotency check supports 2 <= N <= 12")
    h = build_chain(n, 0.0, dps=dps)
    return matrix_power_norm(h, n, dps) < tol and matrix_power_norm(h, n - 1, dps) > 1e-6


@dataclass(frozen=True)
class LayerSpec:
    """Single-inequality layer ``-mu**2 <= combo . coeffs <= nu**2``."""

    n: int
    combo: tuple
    mu: float | None = None
    nu: float | None = None

    @property
    def bounds(self) -> tuple[float, float]:
        if self.mu is None or self.nu is None:
            raise MissingBounds(f"mu/nu not known for N={self.n}; supply them")
        return -self.mu**2, self.nu**2


def layer_combo(n: int) -> tuple:
    """Signed binomial weights ``C(N-2, J-1)/2, -C(N-2, J-2), ...`` on (A, B, ...)."""
    j = n // 2
    out = [math.comb(n - 2, j - 1) / 2]
    out += [float((-1) ** m * math.comb(n - 2, j - 1 - m)) for m in range(1, j)]
    return tuple(out)


def layer_spec(n: int, mu: float | None = None, nu: float | None = None) -> LayerSpec:
    if n not in (4, 6, 8):
        raise DomainError(f"layer inequalities are available for N in (4, 6, 8), got {n}")
    if mu is None and nu is None and n in KNOWN_BOUNDS:
        mu, nu = KNOWN_BOUNDS[n]
    return LayerSpec(n=n, combo=layer_combo(n), mu=mu, nu=nu)


def layer_value(spec: LayerSpec, coeffs: MultiParamCoeffs | Sequence[float]) -> float:
    c = coeffs.coeffs if isinstance(coeffs, MultiParamCoeffs) else tuple(coeffs)
    if len(c) != len(spec.combo):
        raise DomainError(f"N={spec.n} needs {len(spec.combo)} coefficients, got {len(c)}")
    return float(sum(w * x for w, x in zip(spec.combo, c)))


def layer_check(
    spec: LayerSpec, coeffs: MultiParamCoeffs | Sequence[float], band: float = LAYER_BAND
) -> str:
    """``"inside"``, ``"outside"`` or ``"boundary"`` (within ``band`` of an edge)."""
    lo, hi = spec.bounds
    x = layer_value(spec, coeffs)
    if abs(x - lo) <= band or abs(x - hi) <= band:
        return "boundary"
    return "inside" if lo < x < hi else "outside"


@dataclass(frozen=True)
class LayerSample:
    coeffs: tuple
    value: float
    layer: str
    all_real: bool | None
    skipped: bool

    @property
    def agrees(self) -> bool:
        return self.skipped or (self.layer == "inside") == self.all_real


@dataclass(frozen=True)
class LayerValidation:
    lam: float
    margin: float
    samples: tuple = field(default=())

    @property
    def checked(self) -> int:
        return sum(not s.skipped for s in self.samples)

    @property
    def disagreements(self) -> list:
        return [s for s in self.samples if not s.agrees]


def layer_cross_validate(
    samples: Iterable[Sequence[float]],
    lambda_small: float = 1e-3,
    margin: float = LAYER_MARGIN,
    tol: float = REALITY_TOL,
) -> LayerValidation:
    """Compare the N = 4 layer inequality with oracle spectral reality.

    Samples closer than ``margin`` to a layer edge are skipped: the
    inequality describes the ``lam -> 0`` geometry and the finite-``lam``
    boundary is shifted at O(lam).
    """
    if not 0.0 < lambda_small <= 0.01:
        raise DomainError("lambda_small must lie in (0, 0.01]")
    spec = layer_spec(4)
    lo, hi = spec.bounds
    out = []
    for c in samples:
        c = tuple(float(x) for x in c)
        x = layer_value(spec, c)
        if min(abs(x - lo), abs(x - hi)) < margin:
            out.append(LayerSample(c, x, layer_check(spec, c), None, skipped=True))
            continue
        vals = dense_eigen(build_multiparam(4, lambda_small, c)).values
        real, _ = classify_reality(vals, tol)
        out.append(LayerSample(c, x, layer_check(spec, c), real, skipped=False))
    return LayerValidation(lam=lambda_small, margin=margin, samples=tuple(out))
