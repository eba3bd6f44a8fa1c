"""Closed-form information algebra for jointly Gaussian variables.

Scalar variables are represented as linear combinations of a shared basis of
independent unit-variance Gaussians, so covariances are Gram matrices of
coefficient rows and every (conditional) mutual information reduces to
log-determinants:

    I(A; B | C) = 0.5 * log2( det S[AC] * det S[BC] / (det S[C] * det S[ABC]) )

Degenerate variable sets (zero vectors, linearly dependent rows, as produced
by extreme power splits) are handled by reducing each set to an independent
spanning subset first; mutual information depends only on the generated
sigma-algebra, so the reduction is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .channels import GaussianIC, GaussianVirtualParams
from .errors import UnknownAxisError

_RANK_TOL = 1e-10


@dataclass(frozen=True)
class GaussSystem:
    """Named scalar Gaussian variables over one independent standard basis."""

    coeffs: Mapping[str, np.ndarray]

    def vector(self, name: str) -> np.ndarray:
        try:
            return np.asarray(self.coeffs[name], dtype=np.float64)
        except KeyError:
            raise UnknownAxisError("no such variable", axis=name,
                                   have=sorted(self.coeffs)) from None

    def _logdet(self, names: Iterable[str]) -> float:
        rows = [self.vector(n) for n in names]
        if not rows:
            return 0.0
        m = np.vstack(rows)
        keep = _independent_rows(m)
        if not keep:
            return 0.0
        reduced = m[keep]
        sign, logdet = np.linalg.slogdet(reduced @ reduced.T)
        if sign <= 0:
            return -math.inf
        return float(logdet)

    def mi_bits(
        self,
        target: Iterable[str],
        second: Iterable[str],
        given: Iterable[str] = (),
    ) -> float:
        t, s, g = tuple(target), tuple(second), tuple(given)
        value = 0.5 / math.log(2.0) * (
            self._logdet(t + g) + self._logdet(s + g)
            - self._logdet(g) - self._logdet(t + s + g)
        )
        return max(value, 0.0)


def _independent_rows(m: np.ndarray, tol: float = _RANK_TOL) -> list[int]:
    """Indices of a maximal linearly independent subset of the rows.

    Greedy Gram-Schmidt in row order (deterministic).  Dependent rows are
    deterministic functions of the kept ones, so the generated sigma-algebra
    -- and hence any mutual information -- is unchanged by dropping them.
    """
    basis: list[np.ndarray] = []
    keep: list[int] = []
    for i, row in enumerate(m):
        v = row.astype(np.float64, copy=True)
        for b in basis:
            v -= (v @ b) * b
        norm = float(np.linalg.norm(v))
        if norm > tol * max(1.0, float(np.linalg.norm(row))):
            basis.append(v / norm)
            keep.append(i)
    return keep


def half_log2(x: float) -> float:
    return 0.5 * math.log2(x)


def tin_rates(g: GaussianIC) -> tuple[float, float]:
    """Per-user rates when each receiver absorbs the cross signal as noise."""
    r1 = half_log2(1.0 + g.p1 / (1.0 + g.a**2 * g.p2))
    r2 = half_log2(1.0 + g.p2 / (1.0 + g.b**2 * g.p1))
    return r1, r2


def split_system(g: GaussianIC, lam1: float, lam2: float) -> GaussSystem:
    """Gaussian inputs with a common/private power split.

    ``W_i`` carries power ``lam_i * P_i`` (the common layer); the private
    remainder ``(1 - lam_i) P_i`` rides on top.  Basis order:
    (S1, V1, S2, V2, Z1, Z2).
    """
    s1 = math.sqrt(max(0.0, (1.0 - lam1) * g.p1))
    v1 = math.sqrt(max(0.0, lam1 * g.p1))
    s2 = math.sqrt(max(0.0, (1.0 - lam2) * g.p2))
    v2 = math.sqrt(max(0.0, lam2 * g.p2))
    x1 = np.array([s1, v1, 0.0, 0.0, 0.0, 0.0])
    w1 = np.array([0.0, v1, 0.0, 0.0, 0.0, 0.0])
    x2 = np.array([0.0, 0.0, s2, v2, 0.0, 0.0])
    w2 = np.array([0.0, 0.0, 0.0, v2, 0.0, 0.0])
    z1 = np.array([0.0, 0.0, 0.0, 0.0, 1.0, 0.0])
    z2 = np.array([0.0, 0.0, 0.0, 0.0, 0.0, 1.0])
    y1 = x1 + g.a * x2 + z1
    y2 = g.b * x1 + x2 + z2
    return GaussSystem({"X1": x1, "W1": w1, "X2": x2, "W2": w2, "Y1": y1, "Y2": y2})


# ---------------------------------------------------------------------------
# Regime conditions in closed form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GaussianVeryWeakReport:
    """Gaussian very-weak-interference test with raw-unit margins."""

    in_regime: bool
    margin1: float  # 1/(b^2 P1 + 1) - a^2
    margin2: float  # 1/(a^2 P2 + 1) - b^2


def very_weak_gaussian(g: GaussianIC) -> GaussianVeryWeakReport:
    m1 = 1.0 / (g.b**2 * g.p1 + 1.0) - g.a**2
    m2 = 1.0 / (g.a**2 * g.p2 + 1.0) - g.b**2
    return GaussianVeryWeakReport(in_regime=(m1 >= 0.0 and m2 >= 0.0),
                                  margin1=m1, margin2=m2)


@dataclass(frozen=True)
class GaussianNoisyReport:
    """Gaussian noisy-interference test with a side-channel certificate.

    ``margin`` is the slack of the closed-form condition
    ``|a|(b^2 P1 + 1) + |b|(a^2 P2 + 1) <= 1``.  ``certificate`` carries side
    channel parameters that satisfy both the noise-budget inequalities and
    the alignment equalities ``eta1*rho1 = a^2 P2 + 1`` and
    ``eta2*rho2 = b^2 P1 + 1`` (so the side outputs are conditionally
    independent of the own input given the true output at Gaussian inputs).
    ``search_feasible`` reports whether an independent grid search over the
    correlation pair also found such a certificate.
    """

    in_regime: bool
    margin: float
    certificate: GaussianVirtualParams | None
    search_feasible: bool


def _alignment_targets(g: GaussianIC) -> tuple[float, float]:
    return g.a**2 * g.p2 + 1.0, g.b**2 * g.p1 + 1.0


def _certificate_ok(g: GaussianIC, rho1: float, rho2: float) -> GaussianVirtualParams | None:
    k1, k2 = _alignment_targets(g)
    if rho1 <= 0.0 or rho2 <= 0.0:
        return None
    eta1 = k1 / rho1
    eta2 = k2 / rho2
    ok1 = abs(g.b * eta1) <= math.sqrt(max(0.0, 1.0 - rho2**2)) + 1e-15
    ok2 = abs(g.a * eta2) <= math.sqrt(max(0.0, 1.0 - rho1**2)) + 1e-15
    if ok1 and ok2:
        return GaussianVirtualParams(eta1=eta1, eta2=eta2, rho1=rho1, rho2=rho2)
    return None


def _noisy_margin(g: GaussianIC) -> float:
    k1, k2 = _alignment_targets(g)
    return 1.0 - (abs(g.b) * k1 + abs(g.a) * k2)


def noisy_gaussian(g: GaussianIC, search_points: int = 256) -> GaussianNoisyReport:
    k1, k2 = _alignment_targets(g)
    margin = _noisy_margin(g)
    in_regime = margin >= 0.0

    certificate: GaussianVirtualParams | None = None
    if in_regime:
        # Constructive choice: rho1^2 may sit anywhere in
        # [|b| k1, 1 - |a| k2]; take the midpoint.
        rho1 = math.sqrt((abs(g.b) * k1 + 1.0 - abs(g.a) * k2) / 2.0)
        rho2 = math.sqrt(max(0.0, 1.0 - rho1**2))
        certificate = _certificate_ok(g, rho1, rho2)

    # Independent cross-check: scan the correlation square for any pair that
    # admits aligned side channels within the noise budget.
    grid = np.linspace(1.0 / search_points, 1.0, search_points)
    r1g, r2g = np.meshgrid(grid, grid, indexing="ij")
    ok = (
        (abs(g.b) * k1 / r1g <= np.sqrt(1.0 - r2g**2) + 1e-15)
        & (abs(g.a) * k2 / r2g <= np.sqrt(1.0 - r1g**2) + 1e-15)
    )
    search_feasible = bool(ok.any())

    return GaussianNoisyReport(in_regime=in_regime, margin=margin,
                               certificate=certificate,
                               search_feasible=search_feasible)


def noisy_sum_capacity(g: GaussianIC) -> float | None:
    """Exact sum capacity when the noisy-interference condition holds.

    Returns ``None`` outside the regime (the value would then only be an
    achievable rate, not a capacity).
    """
    if _noisy_margin(g) < 0.0:
        return None
    r1, r2 = tin_rates(g)
    return r1 + r2
