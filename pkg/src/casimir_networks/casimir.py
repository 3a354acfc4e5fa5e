"""Casimir force between two plane mirrors from imaginary-frequency quadrature.

The force on mirror 1 (positive = attraction) is

    F = hbar A / (2 pi^2) sum_p int_0^inf dxi int_{xi/c}^inf dkappa0 kappa0^2 f_p

with f = rho/(1 - rho) and rho = rbar_1 r_2 exp(-2 kappa0 L), the reflection
amplitudes being those seen from inside the cavity.  In the dimensionless
variables y = xi L / c and u = 2 kappa0 L this reads

    F / F_Cas = 15/pi^4 sum_p int_0^inf dy int_{2y}^inf du u^2 f_p,

with F_Cas = hbar c pi^2 A / (240 L^4).  Both integrals are cut at
u = 30 ln 10 (exp(-u) < 1e-30, beyond double precision relevance) and
evaluated with nested adaptive Gauss-Kronrod panels, outer axis y.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .constants import C, HBAR
from .errors import DivergenceError, QuadratureError
from .media import Axis, Drude, FrequencyPoint, Plasma, Pol, Tabulated, TransverseMode
from .netalg import HalfSpace, LayerStack, Mirror, PerfectMirror, mirror_reflection
from .quadrature import integrate_batch

U_MAX = 30 * math.log(10.0)
NORM = 15.0 / math.pi**4
POLS = (Pol.TE, Pol.TM)


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-8
    abs_tol: float = 1e-15  # floor on the reduction factor eta
    max_subdivisions: int = 200  # panels per integral
    rule: str = "gk15"
    threads: int = 1

    def __post_init__(self):
        if not 1e-14 < self.rel_tol < 1e-2:
            raise ValueError(f"rel_tol must lie in (1e-14, 1e-2), got {self.rel_tol}")
        if self.abs_tol < 0:
            raise ValueError("abs_tol must be >= 0")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")
        if self.rule != "gk15":
            raise ValueError(f"unknown node rule {self.rule!r} (only 'gk15')")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")


@dataclass(frozen=True)
class CavityConfig:
    """Two mirrors facing each other across a vacuum gap ``L`` (m), area ``A`` (m^2).

    mirror1 sits left of the gap (its right port faces the cavity), mirror2
    right of it.  The plane-parallel idealisation assumes A >> L^2.
    """

    mirror1: Mirror
    mirror2: Mirror
    L: float
    A: float = 1.0
    quadrature: QuadratureSpec = field(default_factory=QuadratureSpec)

    def __post_init__(self):
        if not self.L > 0:
            raise ValueError(f"gap L must be > 0, got {self.L}")
        if not self.A > 0:
            raise ValueError(f"area A must be > 0, got {self.A}")

    def with_length(self, L: float) -> CavityConfig:
        return replace(self, L=L)


@dataclass(frozen=True)
class ForceResult:
    F: float
    pressure: float
    eta: float
    err_estimate: float
    evaluations: int
    F_TE: float
    F_TM: float
    L: float
    A: float
    converged: bool = True

    def as_dict(self) -> dict:
        """Flat record in SI units (m, m^2, N, Pa)."""
        return {
            "L": self.L,
            "A": self.A,
            "F": self.F,
            "pressure": self.pressure,
            "eta": self.eta,
            "err_estimate": self.err_estimate,
            "evaluations": self.evaluations,
            "F_TE": self.F_TE,
            "F_TM": self.F_TM,
            "converged": self.converged,
        }


def casimir_ideal(L: float, A: float) -> float:
    """Force between perfect mirrors, hbar c pi^2 A / (240 L^4)."""
    if not (L > 0 and A > 0):
        raise ValueError("L and A must be > 0")
    return HBAR * C * math.pi**2 * A / (240.0 * L**4)


def closed_loop_f(rho):
    """f = rho / (1 - rho)."""
    rho_a = np.asarray(rho)
    if np.any(rho_a == 1):
        raise DivergenceError("closed loop function diverges at rho = 1")
    out = rho_a / (1 - rho_a)
    return out[()] if out.ndim == 0 else out


def loop_rho(mirror1: Mirror, mirror2: Mirror, L: float, mode: TransverseMode):
    """Open loop function rbar_1 r_2 exp(-2 kappa0 L) on the imaginary axis."""
    if mode.freq.axis is not Axis.IMAGINARY:
        raise ValueError("loop_rho is defined on the imaginary axis only")
    xi = np.asarray(mode.freq.value, dtype=float)
    kappa0 = np.sqrt(np.asarray(mode.k, dtype=float) ** 2 + xi**2 / C**2)
    r1 = mirror_reflection(mirror1, mode, "right")
    r2 = mirror_reflection(mirror2, mode, "left")
    out = r1 * r2 * np.exp(-2 * kappa0 * L)
    return out[()] if out.ndim == 0 else out


def _is_transparent(m: Mirror) -> bool:
    return isinstance(m, LayerStack) and not m.layers


def _frequency_scales(m: Mirror) -> list:
    """Characteristic imaginary frequencies (rad/s) of the media in a mirror."""
    if isinstance(m, PerfectMirror):
        return []
    media = [m.medium] if isinstance(m, HalfSpace) else [l.medium for l in m.layers]
    out = []
    for med in media:
        if isinstance(med, (Plasma, Drude)):
            out.append(med.omega_p)
        if isinstance(med, Drude):
            out.append(med.gamma)
        if isinstance(med, Tabulated):
            out.extend([med.xi[0], med.xi[-1]])
    return out


def _integrand(config: CavityConfig, y, u):
    """15/pi^4 u^2 f_p at (y, u), shape (n, 2) for (TE, TM)."""
    L = config.L
    xi = C * y / L
    kappa0 = u / (2 * L)
    k = np.sqrt(np.clip((u - 2 * y) * (u + 2 * y), 0.0, None)) / (2 * L)
    freq = FrequencyPoint(Axis.IMAGINARY, xi)
    out = np.empty((len(y), 2))
    decay = np.exp(-u)
    for j, pol in enumerate(POLS):
        mode = TransverseMode(freq, k, pol)
        r1 = mirror_reflection(config.mirror1, mode, "right")
        r2 = mirror_reflection(config.mirror2, mode, "left")
        rho = np.real(r1 * r2) * decay
        out[:, j] = NORM * u**2 * rho / (1 - rho)
    return out


def _integrand_threaded(config: CavityConfig, y, u, threads: int):
    if threads <= 1 or len(y) < 2048:
        return _integrand(config, y, u)
    chunks = np.array_split(np.arange(len(y)), threads)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(lambda idx: _integrand(config, y[idx], u[idx]), chunks))
    return np.concatenate(parts, axis=0)


def _outer_edges(config: CavityConfig) -> np.ndarray:
    ymax = U_MAX / 2
    pts = [0.0, ymax, 1.0, 2.0, 4.0, 8.0, 16.0]
    pts += [10.0**e for e in range(-8, 0)]
    for w in _frequency_scales(config.mirror1) + _frequency_scales(config.mirror2):
        pts.append(w * config.L / C)
    pts = np.unique([p for p in pts if 0 <= p <= ymax])
    return pts


_INNER_OFFSETS = np.array([0.0, 1e-4, 1e-3, 1e-2, 0.1, 0.5, 2.0, 8.0, 24.0])


def _inner_edges(y: float, u_scales: Sequence[float]) -> np.ndarray:
    lo = 2 * y
    pts = np.concatenate([lo + _INNER_OFFSETS, [U_MAX], [s for s in u_scales if lo < s < U_MAX]])
    pts = np.unique(pts[(pts >= lo) & (pts <= U_MAX)])
    if len(pts) < 2:
        pts = np.array([lo, max(U_MAX, lo + 1e-12)])
    return pts


def _eta_integral(config: CavityConfig):
    """Returns (eta_TE, eta_TM, error, evaluations, converged)."""
    q = config.quadrature
    scales = _frequency_scales(config.mirror1) + _frequency_scales(config.mirror2)
    u_scales = [2 * w * config.L / C for w in scales]
    inner_rel = q.rel_tol / 10
    inner_abs = q.abs_tol / U_MAX
    counter = {"n": 0, "inner_ok": True}

    def outer(pid, y):
        edges = [_inner_edges(yy, u_scales) for yy in y]
        res = integrate_batch(
            lambda ipid, u: _integrand_threaded(config, y[ipid], u, q.threads),
            edges, ncomp=2, rel_tol=inner_rel, abs_tol=inner_abs, max_panels=q.max_subdivisions,
        )
        counter["n"] += res.evaluations
        counter["inner_ok"] &= bool(np.all(res.converged))
        return res.value, res.error

    res = integrate_batch(outer, [_outer_edges(config)], ncomp=2, rel_tol=q.rel_tol,
                          abs_tol=q.abs_tol, max_panels=q.max_subdivisions)
    eta_te, eta_tm = res.value[0]
    err = math.hypot(float(res.error[0]), float(res.inner_error[0]))
    return float(eta_te), float(eta_tm), err, counter["n"], bool(res.converged[0]) and counter["inner_ok"]


def force(config: CavityConfig) -> ForceResult:
    """Casimir force on mirror 1 (newtons, positive = attraction)."""
    f_cas = casimir_ideal(config.L, config.A)
    if _is_transparent(config.mirror1) or _is_transparent(config.mirror2):
        return ForceResult(0.0, 0.0, 0.0, 0.0, 0, 0.0, 0.0, config.L, config.A)
    eta_te, eta_tm, err, n, ok = _eta_integral(config)
    F_te, F_tm = eta_te * f_cas, eta_tm * f_cas
    F = F_te + F_tm
    result = ForceResult(F, F / config.A, F / f_cas, err * f_cas, n, F_te, F_tm,
                         config.L, config.A, ok)
    if not ok:
        raise QuadratureError(
            f"quadrature did not converge within {config.quadrature.max_subdivisions} panels per axis",
            partial=result,
        )
    return result


def lifshitz_force(model1, model2, L: float, A: float = 1.0,
                   quad: QuadratureSpec | None = None) -> ForceResult:
    """Force between two semi-infinite media (bulk Fresnel reflection)."""
    return force(CavityConfig(HalfSpace(model1), HalfSpace(model2), L, A, quad or QuadratureSpec()))


def reduction_factor(config: CavityConfig) -> float:
    """eta = F / F_Cas."""
    return force(config).eta


@dataclass
class SweepRow:
    L: float
    F: float
    pressure: float
    eta: float
    dFdL: float
    err_estimate: float
    monotone: bool  # F below the previous row and dFdL < 0


@dataclass
class SweepTable:
    rows: list
    monotone: bool

    def as_records(self) -> list:
        return [vars(r).copy() for r in self.rows]


def sweep_length(config: CavityConfig, L_values: Sequence[float], rel_step: float = 1e-3) -> SweepTable:
    """Force at each gap length plus a central-difference dF/dL.

    Monotonicity (F strictly decreasing, dF/dL < 0) is checked and reported
    per row and globally; violations are flagged, not raised.
    """
    L_values = [float(L) for L in L_values]
    if not L_values:
        raise ValueError("L_values must not be empty")
    if any(L <= 0 for L in L_values):
        raise ValueError("all L values must be > 0")
    if any(b <= a for a, b in zip(L_values, L_values[1:])):
        raise ValueError("L_values must be strictly increasing")
    rows = []
    prev = math.inf
    for L in L_values:
        res = force(config.with_length(L))
        h = rel_step * L
        fp = force(config.with_length(L + h)).F
        fm = force(config.with_length(L - h)).F
        dfdl = (fp - fm) / (2 * h)
        ok = res.F < prev and dfdl < 0
        rows.append(SweepRow(L, res.F, res.pressure, res.eta, dfdl, res.err_estimate, ok))
        prev = res.F
    return SweepTable(rows, all(r.monotone for r in rows))
