"""Scattering/transfer calculus for plane dielectric networks.

Conventions
-----------
* ``S = [[r, tbar], [t, rbar]]``: ``r`` reflects a wave incident from the
  left port, ``rbar`` one incident from the right, ``t`` transmits left to
  right and ``tbar`` right to left.
* ``T = [[a, b], [c, d]]`` maps the right-port field column onto the left-port
  one, so stacking A then B (left to right) is the product ``T_A @ T_B``.
* A :class:`LayerStack` lists its layers from the left port to the right
  port, with vacuum on both sides.

Every amplitude may be a numpy array; operations broadcast elementwise.

Interface transmission phases
-----------------------------
The interface transfer matrix carries square-root prefactors.  They are
built from per-medium principal roots (``sqrt(kappa_1)/sqrt(kappa_0)`` and
``sqrt(eps_0)/sqrt(eps_1)``) so that chains of interfaces telescope exactly;
reflection amplitudes and determinants do not depend on this choice.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .constants import C
from .errors import (
    CompositionMismatchError,
    NoTransferRepresentationError,
    PoleError,
    ResonanceError,
    SingularTransferError,
)
from .media import (
    Axis,
    FrequencyPoint,
    Medium,
    Pol,
    TransverseMode,
    Vacuum,
    epsilon,
    kappa_from_eps_imag,
    kappa_from_eps_real,
    kappa_imag,
)

# projectors and exchange matrix of the 2x2 calculus
PI_PLUS = np.array([[1, 0], [0, 0]], dtype=complex)
PI_MINUS = np.array([[0, 0], [0, 1]], dtype=complex)
ETA = np.array([[0, 1], [1, 0]], dtype=complex)
PHI = PI_PLUS - PI_MINUS

JUNCTION_RTOL = 1e-12
T_PATH_MAX_DEPTH = 300.0


def _stack2(m11, m12, m21, m22):
    m11, m12, m21, m22 = np.broadcast_arrays(m11, m12, m21, m22)
    return np.stack([np.stack([m11, m12], axis=-1), np.stack([m21, m22], axis=-1)], axis=-2)


@dataclass(frozen=True)
class ScatteringMatrix:
    r: complex | np.ndarray
    t: complex | np.ndarray
    rbar: complex | np.ndarray
    tbar: complex | np.ndarray

    @property
    def matrix(self) -> np.ndarray:
        return _stack2(self.r, self.tbar, self.t, self.rbar)

    @property
    def tilde(self) -> np.ndarray:
        """Output-exchanged form eta @ S = [[t, rbar], [r, tbar]]."""
        return _stack2(self.t, self.rbar, self.r, self.tbar)

    @classmethod
    def from_matrix(cls, m) -> ScatteringMatrix:
        m = np.asarray(m)
        return cls(m[..., 0, 0], m[..., 1, 0], m[..., 1, 1], m[..., 0, 1])

    @classmethod
    def transparent(cls) -> ScatteringMatrix:
        return cls(0j, 1 + 0j, 0j, 1 + 0j)

    @property
    def is_reciprocal(self) -> bool:
        return bool(np.allclose(self.t, self.tbar, rtol=1e-12, atol=0))


@dataclass(frozen=True)
class TransferMatrix:
    """Transfer matrix plus the kappa values of the media at its two ports.

    ``kappa_left``/``kappa_right`` may be None when unknown (e.g. built from
    an abstract S-matrix); junction checks are then skipped.
    """

    a: complex | np.ndarray
    b: complex | np.ndarray
    c: complex | np.ndarray
    d: complex | np.ndarray
    kappa_left: complex | np.ndarray | None = None
    kappa_right: complex | np.ndarray | None = None

    @property
    def matrix(self) -> np.ndarray:
        return _stack2(self.a, self.b, self.c, self.d)

    @property
    def det(self):
        return self.a * self.d - self.b * self.c

    @classmethod
    def from_matrix(cls, m, kappa_left=None, kappa_right=None) -> TransferMatrix:
        m = np.asarray(m)
        return cls(m[..., 0, 0], m[..., 0, 1], m[..., 1, 0], m[..., 1, 1], kappa_left, kappa_right)

    @classmethod
    def identity(cls, kappa=None) -> TransferMatrix:
        return cls(1 + 0j, 0j, 0j, 1 + 0j, kappa, kappa)

    def inverse(self) -> TransferMatrix:
        det = self.det
        return TransferMatrix(self.d / det, -self.b / det, -self.c / det, self.a / det,
                              self.kappa_right, self.kappa_left)


@dataclass(frozen=True)
class Layer:
    medium: Medium
    thickness: float

    def __post_init__(self):
        if not self.thickness > 0:
            raise ValueError(f"layer thickness must be > 0, got {self.thickness}")


@dataclass(frozen=True)
class LayerStack:
    """Mirror made of homogeneous layers between two vacuum ports (left to right)."""

    layers: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(
            l if isinstance(l, Layer) else Layer(*l) for l in self.layers))

    @classmethod
    def of(cls, *layers) -> LayerStack:
        return cls(tuple(layers))

    def reversed(self) -> LayerStack:
        return LayerStack(self.layers[::-1])

    def __len__(self):
        return len(self.layers)


@dataclass(frozen=True)
class HalfSpace:
    """Semi-infinite medium (bulk mirror); its reflection is the vacuum/medium Fresnel amplitude."""

    medium: Medium


@dataclass(frozen=True)
class PerfectMirror:
    """Idealised mirror with r = rbar = -1 (unit loop reflection r1 r2 = 1)."""


Mirror = Union[LayerStack, HalfSpace, PerfectMirror]


# ---------------------------------------------------------------- conversions

def s_to_t(S: ScatteringMatrix, kappa_left=None, kappa_right=None) -> TransferMatrix:
    t = np.asarray(S.t)
    if np.any(t == 0):
        raise NoTransferRepresentationError(
            "t = 0: no transfer representation (bulk limit); use bulk_reflection instead")
    return TransferMatrix(1 / S.t, -S.rbar / S.t, S.r / S.t,
                          (S.t * S.tbar - S.r * S.rbar) / S.t, kappa_left, kappa_right)


def t_to_s(T: TransferMatrix) -> ScatteringMatrix:
    if np.any(np.asarray(T.a) == 0):
        raise SingularTransferError("a = 0: transfer matrix has no scattering representation")
    return ScatteringMatrix(T.c / T.a, 1 / T.a, -T.b / T.a, T.det / T.a)


# ----------------------------------------------------------- medium response

def _response(medium, mode: TransverseMode):
    """(eps, kappa, chi_xi2) of a Medium or an already evaluated permittivity.

    chi_xi2 is only meaningful on the imaginary axis (None otherwise).
    """
    x = mode.freq.value
    if mode.freq.axis is Axis.IMAGINARY:
        if isinstance(medium, Medium):
            chi = medium.chi_xi2(x)
            return medium.eps_imag(x), kappa_imag(medium, x, mode.k), chi
        eps = np.asarray(medium, dtype=float)
        return eps, kappa_from_eps_imag(eps, x, mode.k), (eps - 1.0) * np.asarray(x, dtype=float) ** 2
    eps = epsilon(medium, mode.freq) if isinstance(medium, Medium) else np.asarray(medium, dtype=complex)
    return eps, kappa_from_eps_real(eps, x, mode.k), None


def _fresnel_r(eps0, kap0, chi0, eps1, kap1, chi1, pol: Pol, mode=None):
    """Reflection r = (1 - z)/(1 + z) for a wave incident from medium 0 onto medium 1."""
    if pol is Pol.TE:
        if chi0 is not None:
            # imaginary axis: kappa0^2 - kappa1^2 = (chi0 - chi1)/c^2, no cancellation
            with np.errstate(invalid="ignore", divide="ignore"):
                r = (np.asarray(chi0) - chi1) / C**2 / (kap0 + kap1) ** 2
            den = kap0 + kap1
        else:
            den = kap0 + kap1
            with np.errstate(invalid="ignore", divide="ignore"):
                r = (kap0 - kap1) / den
    else:
        with np.errstate(invalid="ignore", divide="ignore"):
            q = np.divide(eps0, eps1)  # eps1 = inf (xi = 0 metal) gives q = 0, r = -1
            den = kap0 + q * kap1
            r = (q * kap1 - kap0) / den
    if np.any(np.asarray(den) == 0):
        same = np.asarray(eps0 == eps1) & (np.asarray(den) == 0)
        if np.all(same | (np.asarray(den) != 0)):
            return np.where(same, 0.0, r)
        raise PoleError("z = -1: Fresnel denominator vanishes (surface-plasmon pole)", mode)
    return r


def _interface_r(medium0, medium1, mode: TransverseMode):
    eps0, kap0, chi0 = _response(medium0, mode)
    eps1, kap1, chi1 = _response(medium1, mode)
    return _fresnel_r(eps0, kap0, chi0, eps1, kap1, chi1, mode.pol, mode), kap0, kap1, eps0, eps1


# ------------------------------------------------------- elementary networks

def _interface_t(eps0, kap0, eps1, kap1, pol: Pol) -> TransferMatrix:
    z = kap1 / kap0 if pol is Pol.TE else (eps1 * kap0) / (eps0 * kap1)
    if pol is Pol.TE:
        pref = 0.5
    else:
        pref = 0.5 * (kap1 / kap0) * np.sqrt(eps0 + 0j) / np.sqrt(eps1 + 0j)
    return TransferMatrix(pref * (1 + z), pref * (1 - z), pref * (1 - z), pref * (1 + z), kap0, kap1)


def interface(eps0, eps1, mode: TransverseMode):
    """Fresnel interface from medium 0 (left) to medium 1 (right).

    ``eps0``/``eps1`` are evaluated permittivities at ``mode.freq`` (or Medium
    objects).  Returns ``(S, T)`` with r = (1 - z)/(1 + z) = -rbar and
    det T = kappa1/kappa0.
    """
    r, kap0, kap1, e0, e1 = _interface_r(eps0, eps1, mode)
    T = _interface_t(e0, kap0, e1, kap1, mode.pol)
    if np.any(np.asarray(T.a) == 0):
        raise PoleError("z = -1: interface transfer matrix is singular", mode)
    S = t_to_s(T)
    # reflection from the numerically stable formula, transmissions from T
    S = ScatteringMatrix(r, S.t, -r, S.tbar)
    return S, T


def propagation(eps, ell: float, mode: TransverseMode) -> TransferMatrix:
    """Propagation over ``ell`` metres: T = diag(exp(alpha), exp(-alpha)), alpha = kappa ell."""
    if np.any(np.asarray(ell) < 0):
        raise ValueError("propagation length must be >= 0")
    _, kap, _ = _response(eps, mode)
    alpha = kap * ell
    zero = np.zeros_like(alpha)
    return TransferMatrix(np.exp(alpha), zero, zero, np.exp(-alpha), kap, kap)


def compose_t(TA: TransferMatrix, TB: TransferMatrix) -> TransferMatrix:
    """Network A followed (to the right) by network B: T_A @ T_B."""
    if TA.kappa_right is not None and TB.kappa_left is not None:
        kr, kl = np.asarray(TA.kappa_right), np.asarray(TB.kappa_left)
        scale = np.maximum(np.abs(kr), np.abs(kl))
        if np.any(np.abs(kr - kl) > JUNCTION_RTOL * scale):
            raise CompositionMismatchError("junction kappa differs between the composed networks")
    return TransferMatrix(
        TA.a * TB.a + TA.b * TB.c,
        TA.a * TB.b + TA.b * TB.d,
        TA.c * TB.a + TA.d * TB.c,
        TA.c * TB.b + TA.d * TB.d,
        TA.kappa_left,
        TB.kappa_right,
    )


def compose_s(SA: ScatteringMatrix, SB: ScatteringMatrix) -> ScatteringMatrix:
    """Scattering-picture composition (A on the left of B)."""
    D = 1 - SA.rbar * SB.r
    if np.any(np.asarray(D) == 0):
        raise ResonanceError("1 - rbar_A r_B = 0: multiple-reflection series diverges")
    return ScatteringMatrix(
        SA.r + SA.t * SA.tbar * SB.r / D,
        SA.t * SB.t / D,
        SB.rbar + SA.rbar * SB.t * SB.tbar / D,
        SA.tbar * SB.tbar / D,
    )


# ---------------------------------------------------------- composed networks

def _slab_from_interface(r_int, alpha):
    e1 = np.exp(-alpha)
    e2 = e1 * e1
    den = 1 - r_int**2 * e2
    if np.any(np.asarray(den) == 0):
        raise ResonanceError("sinh(beta + alpha) = 0: lossless slab resonance")
    r = r_int * (1 - e2) / den
    t = (1 - r_int**2) * e1 / den
    return r, t


def slab(medium, ell: float, mode: TransverseMode) -> ScatteringMatrix:
    """Symmetric reciprocal slab of thickness ``ell`` in vacuum.

    Closed form r = -sinh(alpha)/sinh(beta + alpha), t = sinh(beta)/sinh(beta + alpha),
    evaluated as r_int (1 - e^{-2 alpha})/(1 - r_int^2 e^{-2 alpha}) and
    (1 - r_int^2) e^{-alpha}/(1 - r_int^2 e^{-2 alpha}) with e^{-beta} = -r_int,
    which never overflows.
    """
    r_int, _, kap1, _, _ = _interface_r(Vacuum(), medium, mode)
    r, t = _slab_from_interface(r_int, kap1 * ell)
    return ScatteringMatrix(r, t, r, t)


def slab_transfer(medium, ell: float, mode: TransverseMode) -> TransferMatrix:
    """Slab transfer matrix T_int @ T_prop @ T_int^-1 (vacuum ports)."""
    vac = Vacuum()
    e0, k0, _ = _response(vac, mode)
    e1, k1, _ = _response(medium, mode)
    Ti = _interface_t(e0, k0, e1, k1, mode.pol)
    return compose_t(compose_t(Ti, propagation(medium, ell, mode)), Ti.inverse())


def _mode_arrays(mode: TransverseMode):
    return np.broadcast_arrays(np.asarray(mode.freq.value, dtype=float), np.asarray(mode.k, dtype=float))


def stack_scattering(stack: LayerStack, mode: TransverseMode, method: str = "s") -> ScatteringMatrix:
    """S-matrix of a multilayer, folding slabs left to right.

    ``method="s"`` (default) folds :func:`compose_s`; ``method="t"`` multiplies
    slab transfer matrices and converts back, using the S path wherever the
    total optical depth exceeds 300 (where T products would overflow).
    """
    if method not in ("s", "t"):
        raise ValueError("method must be 's' or 't'")
    if not stack.layers:
        x, _ = _mode_arrays(mode)
        one = np.ones_like(x) + 0j
        return ScatteringMatrix(0 * one, one, 0 * one, one)
    if method == "s":
        S = slab(stack.layers[0].medium, stack.layers[0].thickness, mode)
        for layer in stack.layers[1:]:
            S = compose_s(S, slab(layer.medium, layer.thickness, mode))
        return S
    depth = 0.0
    T = None
    for layer in stack.layers:
        _, kap, _ = _response(layer.medium, mode)
        depth = depth + np.real(kap) * layer.thickness
        Tl = slab_transfer(layer.medium, layer.thickness, mode)
        T = Tl if T is None else compose_t(T, Tl)
    deep = np.asarray(depth) > T_PATH_MAX_DEPTH
    if not np.any(deep):
        return t_to_s(T)
    S_s = stack_scattering(stack, mode, "s")
    with np.errstate(all="ignore"):
        S_t = t_to_s(T)
    pick = lambda u, v: np.where(deep, u, v)
    return ScatteringMatrix(pick(S_s.r, S_t.r), pick(S_s.t, S_t.t),
                            pick(S_s.rbar, S_t.rbar), pick(S_s.tbar, S_t.tbar))


def stack_transfer(stack: LayerStack, mode: TransverseMode, elementary: bool = True) -> TransferMatrix:
    """Transfer matrix of a stack.

    With ``elementary=True`` the product runs over the individual interfaces
    and propagations (vacuum|1, prop 1, 1|2, ..., n|vacuum); otherwise over
    slab transfer matrices.
    """
    vac = Vacuum()
    x, _ = _mode_arrays(mode)
    _, k0, _ = _response(vac, mode)
    if not stack.layers:
        return TransferMatrix.identity(k0)
    if not elementary:
        T = slab_transfer(stack.layers[0].medium, stack.layers[0].thickness, mode)
        for layer in stack.layers[1:]:
            T = compose_t(T, slab_transfer(layer.medium, layer.thickness, mode))
        return T
    return partial_transfer(stack, mode, close=True)


def partial_transfer(stack: LayerStack, mode: TransverseMode, close: bool = False) -> TransferMatrix:
    """Elementary-network product vacuum|1 prop1 1|2 ... prop n, optionally closed by n|vacuum.

    Without closing, the right port lies inside the last medium, so
    det T = kappa_n / kappa_vacuum.
    """
    media = [Vacuum()] + [l.medium for l in stack.layers]
    T = None
    for i, layer in enumerate(stack.layers):
        e0, k0, _ = _response(media[i], mode)
        e1, k1, _ = _response(media[i + 1], mode)
        Ti = _interface_t(e0, k0, e1, k1, mode.pol)
        T = Ti if T is None else compose_t(T, Ti)
        T = compose_t(T, propagation(layer.medium, layer.thickness, mode))
    if close and stack.layers:
        e0, k0, _ = _response(media[-1], mode)
        e1, k1, _ = _response(Vacuum(), mode)
        T = compose_t(T, _interface_t(e0, k0, e1, k1, mode.pol))
    return T


def bulk_reflection(model: Medium, mode: TransverseMode):
    """Fresnel reflection of a semi-infinite medium seen from vacuum."""
    r, *_ = _interface_r(Vacuum(), model, mode)
    return r[()] if isinstance(r, np.ndarray) else r


def mirror_reflection(mirror: Mirror, mode: TransverseMode, side: str):
    """Reflection amplitude of a mirror for a wave coming from ``side`` ('left' or 'right')."""
    if isinstance(mirror, PerfectMirror):
        x, _ = _mode_arrays(mode)
        return -np.ones_like(x)
    if isinstance(mirror, HalfSpace):
        return np.asarray(bulk_reflection(mirror.medium, mode))
    S = stack_scattering(mirror, mode)
    return np.asarray(S.r if side == "left" else S.rbar)
