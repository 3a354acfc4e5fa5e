"""Optical response of homogeneous media and the longitudinal wavevector.

All permittivities are relative (vacuum = 1) and non-magnetic.  Frequencies
are angular, in rad/s.  On the imaginary axis the frequency is written
``omega = i xi`` with ``xi >= 0`` and every supported model returns a real
permittivity ``>= 1``.

The functions accept scalars or numpy arrays (broadcasting applies); the
quadrature engine relies on the array path.
"""

from __future__ import annotations

import enum
import io
import math
from dataclasses import dataclass
from typing import IO, Union

import numpy as np

from .constants import C
from .errors import PoleError, TabulatedFormatError, UnsupportedAxisError


class Axis(enum.Enum):
    REAL = "real"
    IMAGINARY = "imaginary"


class Pol(enum.Enum):
    TE = "TE"
    TM = "TM"


@dataclass(frozen=True)
class FrequencyPoint:
    """A frequency on either the real (omega) or imaginary (xi) axis."""

    axis: Axis
    value: float | np.ndarray

    def __post_init__(self):
        if np.any(np.asarray(self.value) < 0):
            raise ValueError("frequency value must be >= 0")

    @classmethod
    def real(cls, omega) -> FrequencyPoint:
        return cls(Axis.REAL, omega)

    @classmethod
    def imaginary(cls, xi) -> FrequencyPoint:
        return cls(Axis.IMAGINARY, xi)


@dataclass(frozen=True)
class TransverseMode:
    """Mode label: frequency, transverse wavevector modulus |k| (rad/m), polarization."""

    freq: FrequencyPoint
    k: float | np.ndarray
    pol: Pol

    def __post_init__(self):
        if np.any(np.asarray(self.k) < 0):
            raise ValueError("transverse wavevector k must be >= 0")

    @property
    def sector(self):
        """'imaginary', or 'ordinary'/'evanescent' on the real axis (elementwise for arrays)."""
        if self.freq.axis is Axis.IMAGINARY:
            return "imaginary"
        ordinary = np.asarray(self.freq.value) >= C * np.asarray(self.k)
        if ordinary.ndim == 0:
            return "ordinary" if ordinary else "evanescent"
        return np.where(ordinary, "ordinary", "evanescent")

    def with_pol(self, pol: Pol) -> TransverseMode:
        return TransverseMode(self.freq, self.k, pol)


class Medium:
    """Base for the medium models.

    Subclasses provide ``chi_xi2`` = (eps(i xi) - 1) * xi**2, which stays
    finite at xi = 0 for every model and is what the wavevector needs, plus
    the real-axis permittivity.
    """

    def chi_xi2(self, xi):
        raise NotImplementedError

    def eps_imag(self, xi):
        xi = np.asarray(xi, dtype=float)
        chi_xi2 = self.chi_xi2(xi)
        with np.errstate(divide="ignore", invalid="ignore"):
            chi = np.where(xi == 0, np.where(chi_xi2 > 0, np.inf, 0.0), chi_xi2 / xi**2)
        return 1.0 + chi

    def eps_real(self, omega):
        raise NotImplementedError

    @property
    def has_pole_at_zero(self) -> bool:
        return False


@dataclass(frozen=True)
class Vacuum(Medium):
    def chi_xi2(self, xi):
        return np.zeros_like(np.asarray(xi, dtype=float))

    def eps_imag(self, xi):
        return np.ones_like(np.asarray(xi, dtype=float))

    def eps_real(self, omega):
        return np.ones_like(np.asarray(omega, dtype=float)) + 0j


@dataclass(frozen=True)
class Dielectric(Medium):
    """Dispersionless lossless dielectric with constant relative permittivity."""

    eps_r: float

    def __post_init__(self):
        if not self.eps_r > 1:
            raise ValueError(f"Dielectric eps_r must be > 1, got {self.eps_r}")

    def chi_xi2(self, xi):
        xi = np.asarray(xi, dtype=float)
        return (self.eps_r - 1.0) * xi**2

    def eps_imag(self, xi):
        return np.full_like(np.asarray(xi, dtype=float), self.eps_r)

    def eps_real(self, omega):
        return np.full_like(np.asarray(omega, dtype=float), self.eps_r) + 0j


@dataclass(frozen=True)
class Plasma(Medium):
    """Lossless plasma model, eps(omega) = 1 - omega_p**2 / omega**2."""

    omega_p: float

    def __post_init__(self):
        if not self.omega_p > 0:
            raise ValueError("Plasma omega_p must be > 0")

    @classmethod
    def from_wavelength(cls, lambda_p: float) -> Plasma:
        return cls(2 * math.pi * C / lambda_p)

    @property
    def plasma_wavelength(self) -> float:
        return 2 * math.pi * C / self.omega_p

    def chi_xi2(self, xi):
        return np.full_like(np.asarray(xi, dtype=float), self.omega_p**2)

    def eps_real(self, omega):
        omega = np.asarray(omega, dtype=float)
        with np.errstate(divide="ignore"):
            return 1.0 - self.omega_p**2 / omega**2 + 0j

    @property
    def has_pole_at_zero(self) -> bool:
        return True


@dataclass(frozen=True)
class Drude(Medium):
    """Drude metal, eps(i xi) = 1 + omega_p**2 / (xi (xi + gamma)).

    On the real axis (exp(-i omega t) convention)
    eps(omega) = 1 - omega_p**2 / (omega (omega + i gamma)), with Im eps > 0.
    """

    omega_p: float
    gamma: float

    def __post_init__(self):
        if not self.omega_p > 0:
            raise ValueError("Drude omega_p must be > 0")
        if not self.gamma > 0:
            raise ValueError("Drude gamma must be > 0")

    @classmethod
    def from_wavelength(cls, lambda_p: float, gamma: float) -> Drude:
        return cls(2 * math.pi * C / lambda_p, gamma)

    def chi_xi2(self, xi):
        xi = np.asarray(xi, dtype=float)
        return self.omega_p**2 * xi / (xi + self.gamma)

    def eps_imag(self, xi):
        xi = np.asarray(xi, dtype=float)
        with np.errstate(divide="ignore"):
            return 1.0 + self.omega_p**2 / (xi * (xi + self.gamma))

    def eps_real(self, omega):
        omega = np.asarray(omega, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            return 1.0 - self.omega_p**2 / (omega * (omega + 1j * self.gamma))

    @property
    def has_pole_at_zero(self) -> bool:
        return True


@dataclass(frozen=True)
class Tabulated(Medium):
    """eps(i xi) sampled on the imaginary axis.

    Interpolation is linear in (log xi, log(eps - 1)).  Outside the table the
    susceptibility follows a xi**-2 tail matched to the nearest end sample, so
    the medium stays transparent at high frequency and plasma-like at low
    frequency.
    """

    xi: tuple
    eps: tuple

    def __post_init__(self):
        xi = np.asarray(self.xi, dtype=float)
        eps = np.asarray(self.eps, dtype=float)
        if xi.ndim != 1 or xi.shape != eps.shape:
            raise TabulatedFormatError("xi and eps must be 1-D sequences of equal length")
        if len(xi) < 2:
            raise TabulatedFormatError(f"need at least 2 samples, got {len(xi)}")
        if np.any(xi <= 0):
            raise TabulatedFormatError("xi samples must be > 0")
        bad = np.nonzero(np.diff(xi) <= 0)[0]
        if bad.size:
            i = int(bad[0]) + 1
            raise TabulatedFormatError(f"xi not strictly increasing at sample {i + 1} (xi={xi[i]:g})")
        low = np.nonzero(eps < 1)[0]
        if low.size:
            i = int(low[0])
            raise TabulatedFormatError(f"eps < 1 at sample {i + 1} (eps={eps[i]:g})")

    def chi_xi2(self, xi):
        xs = np.asarray(self.xi, dtype=float)
        chi = np.maximum(np.asarray(self.eps, dtype=float) - 1.0, 1e-300)
        xi = np.asarray(xi, dtype=float)
        with np.errstate(divide="ignore"):
            lx = np.log(np.clip(xi, xs[0], xs[-1]))
        inside = np.exp(np.interp(lx, np.log(xs), np.log(chi))) * np.clip(xi, xs[0], xs[-1]) ** 2
        below = chi[0] * xs[0] ** 2
        above = chi[-1] * xs[-1] ** 2
        return np.where(xi < xs[0], below, np.where(xi > xs[-1], above, inside))

    def eps_real(self, omega):
        raise UnsupportedAxisError("tabulated data is defined on the imaginary axis only")

    @property
    def has_pole_at_zero(self) -> bool:
        return True


MediumModel = Union[Vacuum, Dielectric, Plasma, Drude, Tabulated]


def epsilon(model: Medium, freq: FrequencyPoint):
    """Relative permittivity of ``model`` at ``freq``.

    Returns a real array (imaginary axis) or a complex array (real axis).
    Raises PoleError for Plasma/Drude/Tabulated at zero frequency.
    """
    value = np.asarray(freq.value, dtype=float)
    if model.has_pole_at_zero and np.any(value == 0):
        raise PoleError(f"{type(model).__name__} permittivity has a pole at zero frequency", freq)
    if freq.axis is Axis.IMAGINARY:
        return model.eps_imag(value)[()]
    return model.eps_real(value)[()]


def kappa_imag(model: Medium, xi, k):
    """Array kernel: kappa on the imaginary axis, real and >= 0.

    Uses chi_xi2 so the xi -> 0 limit is exact (Plasma: kappa -> sqrt(k^2 + wp^2/c^2)).
    """
    xi = np.asarray(xi, dtype=float)
    k = np.asarray(k, dtype=float)
    return np.sqrt(k**2 + (xi**2 + model.chi_xi2(xi)) / C**2)


def kappa_from_eps_real(eps, omega, k):
    """Array kernel: real-axis kappa = sqrt(k^2 - eps omega^2/c^2), Re kappa >= 0.

    Where kappa is purely imaginary (lossless ordinary waves) the root with
    Im kappa < 0 is taken, so that k_z = i kappa is positive for rightward
    waves; lossy media continue this branch.
    """
    omega = np.asarray(omega, dtype=float)
    k = np.asarray(k, dtype=float)
    w = np.asarray(eps, dtype=complex) * omega**2 / C**2 - k**2
    # normalise -0.0 imaginary parts, which would flip the branch cut
    w = w.real + 1j * (w.imag + 0.0)
    return -1j * np.sqrt(w)


def kappa_from_eps_imag(eps, xi, k):
    xi = np.asarray(xi, dtype=float)
    return np.sqrt(np.asarray(eps) * xi**2 / C**2 + np.asarray(k, dtype=float) ** 2)


def kappa(model: Medium, mode: TransverseMode):
    """Longitudinal wavevector parameter with the Re kappa > 0 branch.

    Imaginary axis: sqrt(eps xi^2/c^2 + k^2), real.  Real axis:
    sqrt(k^2 - eps omega^2/c^2), complex (see :func:`kappa_from_eps_real`).
    """
    if mode.freq.axis is Axis.IMAGINARY:
        return kappa_imag(model, mode.freq.value, mode.k)[()]
    eps = epsilon(model, mode.freq)
    return kappa_from_eps_real(eps, mode.freq.value, mode.k)[()]


def load_tabulated(source: Union[str, bytes, IO]) -> Tabulated:
    """Parse the two-column ``xi  eps(i xi)`` text format.

    ``source`` may be a text/binary stream, a bytes object or a str with the
    file contents.  Lines starting with '#' and blank lines are skipped.
    """
    if isinstance(source, bytes):
        text = source.decode("utf-8")
    elif isinstance(source, str):
        text = source
    else:
        data = source.read()
        text = data.decode("utf-8") if isinstance(data, bytes) else data

    xs, es = [], []
    for lineno, raw in enumerate(io.StringIO(text), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise TabulatedFormatError(f"line {lineno}: expected 2 columns, got {len(parts)}: {line!r}")
        try:
            x, e = float(parts[0]), float(parts[1])
        except ValueError:
            raise TabulatedFormatError(f"line {lineno}: not a pair of floats: {line!r}") from None
        if not (math.isfinite(x) and math.isfinite(e)):
            raise TabulatedFormatError(f"line {lineno}: non-finite value: {line!r}")
        if xs and x <= xs[-1]:
            raise TabulatedFormatError(f"line {lineno}: xi={x:g} not greater than previous {xs[-1]:g}")
        if e < 1:
            raise TabulatedFormatError(f"line {lineno}: eps={e:g} < 1")
        xs.append(x)
        es.append(e)
    return Tabulated(tuple(xs), tuple(es))
