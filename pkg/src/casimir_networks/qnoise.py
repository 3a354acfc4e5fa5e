"""Optical theorem for lossy networks, cavity commutators and passivity checks.

Noise amplitudes of a lossy network are only defined up to a canonical
transformation of the noise modes, so they are represented here by their
Hermitian norm matrices:

* scattering picture: ``N_S = I - S S^dagger``
* transfer picture:   ``N_T = T Phi T^dagger - Phi`` with ``Phi = diag(1, -1)``

All functions accept stacked matrices of shape ``(..., 2, 2)``.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import IO, Sequence

import numpy as np
from scipy.linalg import sqrtm

from .constants import C
from .errors import DivergenceError, OscillationThresholdError, PoleError
from .media import Axis, Dielectric, FrequencyPoint, Medium, Plasma, Pol, TransverseMode, Vacuum
from .netalg import PHI, ScatteringMatrix, TransferMatrix, _fresnel_r, _response


def _dagger(m):
    return np.conj(np.swapaxes(m, -1, -2))


def noise_norm_s(S: ScatteringMatrix) -> np.ndarray:
    """Optical theorem, scattering picture: S' S'^dagger = I - S S^dagger."""
    m = S.matrix
    return np.eye(2) - m @ _dagger(m)


def noise_norm_t(T: TransferMatrix) -> np.ndarray:
    """Optical theorem, transfer picture: T' T'^dagger = T Phi T^dagger - Phi."""
    m = T.matrix
    return m @ PHI @ _dagger(m) - PHI


def compose_noise(TA: TransferMatrix, NA, NB) -> np.ndarray:
    """Transfer-picture norm of A followed by B: N_A + T_A N_B T_A^dagger."""
    m = TA.matrix
    return np.asarray(NA) + m @ np.asarray(NB) @ _dagger(m)


def noise_amplitudes(N) -> np.ndarray:
    """One admissible noise-amplitude matrix: the Hermitian square root of ``N``.

    Any ``sqrt(N) U`` with ``U`` unitary is equally valid; only the norm is
    physical.
    """
    return sqrtm(np.asarray(N))


@dataclass(frozen=True)
class CavityCommutators:
    G: np.ndarray  # (..., 2, 2) Hermitian commutator matrix of the intracavity fields
    g: np.ndarray | float  # Airy function, the common diagonal value


def cavity_matrix(rbar1, r2, alpha1, alpha2) -> CavityCommutators:
    """Commutator matrix of the fields inside a Fabry-Perot cavity.

    ``rbar1``/``r2`` are the mirror reflections seen from inside, ``alpha1``,
    ``alpha2`` the propagation exponents kappa0 L1 and kappa0 L2 from each
    mirror to the observation point.
    """
    rbar1, r2, alpha1, alpha2 = np.broadcast_arrays(*(np.asarray(v, dtype=complex)
                                                      for v in (rbar1, r2, alpha1, alpha2)))
    rho = rbar1 * r2 * np.exp(-2 * (alpha1 + alpha2))
    D = 1 - rho
    if np.any(D == 0):
        raise OscillationThresholdError("D = 1 - rbar1 r2 exp(-2 alpha) vanishes")
    M = np.stack([
        np.stack([rho, rbar1 * np.exp(-2 * alpha1)], axis=-1),
        np.stack([r2 * np.exp(-2 * alpha2), rho], axis=-1),
    ], axis=-2) / D[..., None, None]
    G = np.eye(2) + M + _dagger(M)
    f = rho / D
    g = 1 + 2 * f.real
    return CavityCommutators(G, g[()] if g.ndim == 0 else g)


def airy(rho):
    """Airy function g = (1 - |rho|^2) / |1 - rho|^2."""
    rho = np.asarray(rho, dtype=complex)
    if np.any(rho == 1):
        raise DivergenceError("Airy function diverges at rho = 1")
    g = (1 - np.abs(rho) ** 2) / np.abs(1 - rho) ** 2
    return g[()] if g.ndim == 0 else g


def passivity_eigenvalues(S: ScatteringMatrix):
    """Eigenvalues (l1 >= l2) of S^dagger S; the network is passive iff l1 <= 1."""
    m = S.matrix
    ev = np.linalg.eigvalsh(_dagger(m) @ m)
    return ev[..., 1], ev[..., 0]


def symmetric_eigen(S: ScatteringMatrix):
    """For a port-symmetric network: s_plus, s_minus = r +- t and the matching
    noise weights |s'_+-|^2 read from the noise norm on the (1, +-1) modes."""
    s_plus, s_minus = S.r + S.t, S.r - S.t
    N = noise_norm_s(S)
    w_plus = 0.5 * (N[..., 0, 0] + N[..., 0, 1] + N[..., 1, 0] + N[..., 1, 1]).real
    w_minus = 0.5 * (N[..., 0, 0] - N[..., 0, 1] - N[..., 1, 0] + N[..., 1, 1]).real
    return s_plus, s_minus, w_plus, w_minus


# ------------------------------------------------------------ evanescent sector

@dataclass
class PlasmonScan:
    points: list  # (omega, k, |r|) with |r| > threshold, sorted by (omega, k)
    maximum: tuple | None  # (omega, k, |r|) of the largest sampled |r|
    resonances: list  # (k, omega_res) refined per k column where a real root exists
    sampled: int


def _interface_abs_r(model: Medium, omega, k, pol: Pol):
    mode = TransverseMode(FrequencyPoint(Axis.REAL, omega), k, pol)
    e0, k0, _ = _response(Vacuum(), mode)
    e1, k1, _ = _response(model, mode)
    try:
        r = _fresnel_r(e0, k0, None, e1, k1, None, pol, mode)
    except PoleError:
        with np.errstate(divide="ignore", invalid="ignore"):
            q = e0 / e1 if pol is Pol.TM else 1.0
            den = k0 + q * k1
            r = np.where(den == 0, np.inf, (q * k1 - k0) / np.where(den == 0, 1, den))
    return np.abs(r)


def plasmon_condition(model: Medium, omega, k):
    """eps(omega) kappa0 + kappa1, whose zero is the TM surface mode (z = -1)."""
    mode = TransverseMode(FrequencyPoint(Axis.REAL, omega), k, Pol.TM)
    _, k0, _ = _response(Vacuum(), mode)
    e1, k1, _ = _response(model, mode)
    return e1 * k0 + k1


def resonance_frequency(model: Medium, k: float, omega_lo: float, omega_hi: float,
                        tol: float = 1e-13) -> float:
    """Bisection for the real root of the surface-mode condition in [omega_lo, omega_hi].

    Only meaningful for lossless media (the condition is then real in the
    evanescent sector).
    """
    h = lambda w: float(np.real(plasmon_condition(model, w, k)))
    a, b = omega_lo, omega_hi
    ha, hb = h(a), h(b)
    if ha == 0:
        return a
    if ha * hb > 0:
        raise ValueError("surface-mode condition has no sign change in the bracket")
    while b - a > tol * b:
        mid = 0.5 * (a + b)
        hm = h(mid)
        if hm == 0:
            return mid
        if (hm > 0) == (ha > 0):
            a, ha = mid, hm
        else:
            b = mid
    return 0.5 * (a + b)


def plasmon_scan(model: Medium, omega_range: Sequence[float], k_range: Sequence[float],
                 n_omega: int = 200, n_k: int = 50, pol: Pol = Pol.TM,
                 threshold: float = 1 + 1e-10) -> PlasmonScan:
    """Scan |r| of a vacuum/medium interface over evanescent real-axis modes (omega < c k).

    Returns every sampled mode with |r| > ``threshold``, the sampled maximum and, for
    lossless media, the surface-mode frequency refined by bisection in each
    k column.  The default threshold sits just above 1 because total
    internal reflection gives |r| = 1 up to rounding.
    """
    if n_omega < 2 or n_k < 1:
        raise ValueError("grid sizes must be n_omega >= 2, n_k >= 1")
    w0, w1 = map(float, omega_range)
    k0, k1 = map(float, k_range)
    if not (0 < w0 < w1) or not (0 < k0 <= k1):
        raise ValueError("empty or invalid omega/k range")
    omegas = np.linspace(w0, w1, n_omega)
    ks = np.linspace(k0, k1, n_k) if n_k > 1 else np.array([k0])
    W, K = np.meshgrid(omegas, ks, indexing="ij")
    evanescent = W < C * K
    absr = np.full(W.shape, np.nan)
    absr[evanescent] = _interface_abs_r(model, W[evanescent], K[evanescent], pol)
    sel = evanescent & (absr > threshold)
    pts = sorted(zip(W[sel].tolist(), K[sel].tolist(), absr[sel].tolist()))
    maximum = None
    if np.any(evanescent):
        i = np.nanargmax(np.where(evanescent, absr, -np.inf))
        maximum = (float(W.flat[i]), float(K.flat[i]), float(absr.flat[i]))

    resonances = []
    lossless = isinstance(model, (Plasma, Dielectric))
    if pol is Pol.TM and lossless:
        for j, k in enumerate(ks):
            col = omegas[evanescent[:, j]]
            if len(col) < 2:
                continue
            h = np.real(plasmon_condition(model, col, k))
            change = np.nonzero(np.sign(h[:-1]) * np.sign(h[1:]) < 0)[0]
            if change.size:
                i = int(change[0])
                resonances.append((float(k), resonance_frequency(model, k, col[i], col[i + 1])))
    return PlasmonScan(pts, maximum, resonances, int(evanescent.sum()))


def write_plasmon_csv(scan: PlasmonScan, out: IO[str]) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["omega", "k", "abs_r_tm"])
    for omega, k, a in scan.points:
        w.writerow([f"{omega:.16e}", f"{k:.16e}", f"{a:.16e}"])
