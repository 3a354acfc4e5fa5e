"""Self-check suite of physical invariants, run by ``casimir-net validate``.

Each check draws seeded random networks, measures the worst deviation from
an identity or bound and compares it with a fixed tolerance.  Fresnel
amplitudes are looked up through :mod:`netalg` at call time, so a corrupted
implementation is caught here rather than hidden behind a cached reference.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import casimir, netalg, qnoise
from .constants import C
from .media import Axis, Dielectric, Drude, FrequencyPoint, Plasma, Pol, TransverseMode, kappa

SEED = 20240917
MAX_T_ENTRY = 30.0  # conditioning bound for checks that difference transfer entries


@dataclass
class CheckResult:
    name: str
    tolerance: float
    worst: float
    passed: bool
    cases: int
    seconds: float

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return (f"{tag}  {self.name:<28} worst={self.worst:.3e}  tol={self.tolerance:.1e}"
                f"  cases={self.cases}  ({self.seconds:.2f} s)")


# ---------------------------------------------------------------- generators

def random_medium(rng, lossless: bool = False):
    kind = rng.integers(0, 2 if lossless else 3)
    lam = rng.uniform(100e-9, 500e-9)
    if kind == 0:
        return Dielectric(float(rng.uniform(1.5, 10.0)))
    if kind == 1:
        return Plasma.from_wavelength(lam)
    wp = 2 * math.pi * C / lam
    return Drude(wp, float(wp * 10 ** rng.uniform(-3, -1)))


def random_mode(rng, axis: Axis, pol: Pol | None = None, log_freq=(13, 16.5)) -> TransverseMode:
    """Random mode, log10 of xi or omega drawn from ``log_freq`` (ordinary sector on the real axis).

    Low frequencies make metallic |eps| huge and transfer entries scale with
    it; see :func:`conditioned_stacks`.
    """
    pol = pol or (Pol.TE if rng.random() < 0.5 else Pol.TM)
    if axis is Axis.IMAGINARY:
        xi = 10 ** rng.uniform(*log_freq)
        k = 10 ** rng.uniform(5, 8)
        return TransverseMode(FrequencyPoint.imaginary(xi), k, pol)
    omega = 10 ** rng.uniform(max(log_freq[0], 14), log_freq[1])
    k = rng.uniform(0, 0.99) * omega / C
    return TransverseMode(FrequencyPoint.real(omega), k, pol)


def random_stack(rng, mode: TransverseMode, n_min: int = 1, n_max: int = 8,
                 lossless: bool = False, depth=(0.02, 0.5)) -> netalg.LayerStack:
    """Layers whose optical depth |kappa ell| at ``mode`` lies in ``depth``."""
    layers = []
    for _ in range(int(rng.integers(n_min, n_max + 1))):
        med = random_medium(rng, lossless)
        kap = abs(complex(kappa(med, mode)))
        layers.append((med, float(rng.uniform(*depth)) / kap))
    return netalg.LayerStack(tuple(layers))


def conditioned_stacks(rng, axis: Axis, count: int = 1, lossless: bool = False, n_max: int = 8):
    """Draw a mode and ``count`` stacks whose transfer entries, and those of
    their left-to-right composition, stay below MAX_T_ENTRY.

    Identities built from differences of transfer entries (determinant,
    T Phi T^dagger - Phi) lose about |T|^2 ulps; rejecting badly conditioned
    draws keeps the absolute tolerances meaningful.
    """
    while True:
        mode = random_mode(rng, axis, log_freq=(14.5, 16.5))
        stacks = [random_stack(rng, mode, lossless=lossless, n_max=n_max) for _ in range(count)]
        joined = netalg.LayerStack(sum((s.layers for s in stacks), ()))
        mats = [netalg.stack_transfer(s, mode) for s in stacks + [joined]]
        mats += [netalg.partial_transfer(s, mode) for s in stacks]
        if max(np.abs(T.matrix).max() for T in mats) <= MAX_T_ENTRY:
            return mode, stacks


# -------------------------------------------------------------------- checks

def check_reciprocity(rng, n: int):
    worst = 0.0
    for i in range(n):
        mode, (stack,) = conditioned_stacks(rng, Axis.IMAGINARY if i % 2 else Axis.REAL)
        T = netalg.partial_transfer(stack, mode)
        expected = T.kappa_right / T.kappa_left
        worst = max(worst, abs(T.det - expected) / abs(expected))
    return worst


def check_lossless_unitarity(rng, n: int):
    """|r|^2 + |t|^2 = 1 and r t* + t r* = 0 for lossless slabs on the ordinary sector."""
    worst = 0.0
    for _ in range(n):
        mode = random_mode(rng, Axis.REAL)
        med = random_medium(rng, lossless=True)
        ell = float(rng.uniform(0.01, 5.0)) / abs(complex(kappa(med, mode)))
        S = netalg.slab(med, ell, mode)
        worst = max(worst,
                    abs(abs(S.r) ** 2 + abs(S.t) ** 2 - 1),
                    abs(S.r * np.conj(S.t) + S.t * np.conj(S.r)))
    return worst


def check_slab_bounds(rng, n: int):
    """0 < t < 1, 0 < -r < 1 and |r +- t| <= 1 on the imaginary axis; returns worst violation."""
    worst = 0.0
    for _ in range(n):
        mode = random_mode(rng, Axis.IMAGINARY)
        med = random_medium(rng)
        ell = float(rng.uniform(0.01, 5.0)) / float(kappa(med, mode))
        S = netalg.slab(med, ell, mode)
        r, t = float(np.real(S.r)), float(np.real(S.t))
        worst = max(worst, -t, t - 1, r, -r - 1, abs(r + t) - 1, abs(r - t) - 1)
    return worst


def check_passivity(rng, n: int):
    worst = 0.0
    for i in range(n):
        mode = random_mode(rng, Axis.IMAGINARY if i % 2 else Axis.REAL)
        S = netalg.stack_scattering(random_stack(rng, mode), mode)
        l1, _ = qnoise.passivity_eigenvalues(S)
        worst = max(worst, float(l1) - 1)
    return worst


def check_airy_diagonal(rng, n: int):
    amp = rng.uniform(0, 0.999, size=(2, n)) * np.exp(2j * np.pi * rng.random((2, n)))
    alpha = rng.uniform(0, 2, size=(2, n)) + 1j * rng.uniform(-10, 10, size=(2, n))
    cm = qnoise.cavity_matrix(amp[0], amp[1], alpha[0], alpha[1])
    g = qnoise.airy(amp[0] * amp[1] * np.exp(-2 * (alpha[0] + alpha[1])))
    return float(max(np.abs(cm.G[:, 0, 0] - g).max(), np.abs(cm.G[:, 1, 1] - g).max()))


def check_noise_closure(rng, n: int):
    worst = 0.0
    for i in range(n):
        mode, (sa, sb) = conditioned_stacks(rng, Axis.IMAGINARY if i % 2 else Axis.REAL, 2, n_max=4)
        TA, TB = netalg.stack_transfer(sa, mode), netalg.stack_transfer(sb, mode)
        lhs = qnoise.compose_noise(TA, qnoise.noise_norm_t(TA), qnoise.noise_norm_t(TB))
        rhs = qnoise.noise_norm_t(netalg.compose_t(TA, TB))
        worst = max(worst, float(np.abs(lhs - rhs).max()))
    return worst


def check_lossless_noise(rng, n: int):
    worst = 0.0
    for _ in range(n):
        mode, (stack,) = conditioned_stacks(rng, Axis.REAL, lossless=True)
        S = netalg.stack_scattering(stack, mode)
        T = netalg.stack_transfer(stack, mode)
        worst = max(worst, float(np.abs(qnoise.noise_norm_s(S)).max()),
                    float(np.abs(qnoise.noise_norm_t(T)).max()))
    return worst


def check_loop_stability(rng, n: int):
    """|rho| < 1 on the imaginary axis; returns max(|rho|) - 1 (must be negative)."""
    worst = -1.0
    for _ in range(n):
        mode = random_mode(rng, Axis.IMAGINARY)
        m1 = random_stack(rng, mode, n_max=3, depth=(0.02, 3.0))
        m2 = random_stack(rng, mode, n_max=3, depth=(0.02, 3.0))
        kappa0 = math.hypot(mode.k, mode.freq.value / C)
        L = float(rng.uniform(0.01, 3.0)) / kappa0
        rho = casimir.loop_rho(m1, m2, L, mode)
        worst = max(worst, abs(rho) - 1)
    return worst


def check_perfect_mirror_quadrature(rng, n: int):
    worst = 0.0
    for L in (1e-8, 1e-7, 1e-6, 1e-5)[:n]:
        cfg = casimir.CavityConfig(netalg.PerfectMirror(), netalg.PerfectMirror(), L, 1e-4)
        res = casimir.force(cfg)
        worst = max(worst, abs(res.F / casimir.casimir_ideal(L, 1e-4) - 1))
    return worst


# name, tolerance, case count, check; a zero tolerance means worst must be < 0
CHECKS: list[tuple[str, float, int, Callable]] = [
    ("reciprocity det T", 1e-10, 400, check_reciprocity),
    ("lossless unitarity", 1e-12, 300, check_lossless_unitarity),
    ("slab bounds (imag axis)", 1e-12, 300, check_slab_bounds),
    ("passivity S^dagger S <= 1", 1e-12, 300, check_passivity),
    ("Airy diagonal", 1e-12, 2000, check_airy_diagonal),
    ("noise composition", 1e-11, 200, check_noise_closure),
    ("lossless zero noise", 1e-12, 200, check_lossless_noise),
    ("loop stability |rho| < 1", 0.0, 300, check_loop_stability),
    ("perfect-mirror quadrature", 1e-6, 4, check_perfect_mirror_quadrature),
]


def run_checks(seed: int = SEED) -> list[CheckResult]:
    results = []
    for i, (name, tol, n, fn) in enumerate(CHECKS):
        rng = np.random.default_rng([seed, i])
        t0 = time.perf_counter()
        try:
            worst = float(fn(rng, n))
        except Exception as exc:  # a crash counts as a failed check
            worst = math.inf
            name = f"{name} [{type(exc).__name__}: {exc}]"
        dt = time.perf_counter() - t0
        passed = worst < tol if tol == 0.0 else worst <= tol
        results.append(CheckResult(name, tol, worst, passed, n, dt))
    return results


def report(results: list[CheckResult]) -> str:
    lines = [r.line() for r in results]
    n_ok = sum(r.passed for r in results)
    lines.append(f"{n_ok}/{len(results)} checks passed")
    return "\n".join(lines)
