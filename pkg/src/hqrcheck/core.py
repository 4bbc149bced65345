"""Truncated power series, harmonic maps f = h + conj(g), and circle sampling.

Everything in the package is built from :class:`CoefficientSeries`, a finite
list of Taylor coefficients ``c_0 .. c_N`` of an analytic function on the unit
disk.  A :class:`HarmonicMap` pairs two of them as ``f = h + conj(g)`` with the
normalization ``g(0) = 0``.

Circle evaluation uses the FFT: the values of ``sum c_n z^n`` at the ``M``
equispaced points of ``|z| = r`` are a discrete Fourier transform of
``c_n r^n`` (folded modulo ``M`` when ``N >= M``), which is exact up to
rounding for polynomials.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.fft import next_fast_len

from .errors import DegenerateDilatation

EPS_ZERO = 1e-12
EPS_MARGIN = 1e-9
DEFAULT_DEGREE = 256
MIN_GRID = 1024
OVERSAMPLING = 8


@dataclass(frozen=True, eq=False)
class CoefficientSeries:
    """Truncated analytic function ``sum_{n<=N} c_n z^n``."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=complex)).copy()
        if c.ndim != 1 or c.size == 0:
            raise ValueError("coefficients must be a non-empty 1-d sequence")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def __len__(self):
        return self.coeffs.size

    def __getitem__(self, n):
        return self.coeffs[n]

    def __add__(self, other: CoefficientSeries) -> CoefficientSeries:
        a, b = self.coeffs, other.coeffs
        n = max(a.size, b.size)
        out = np.zeros(n, dtype=complex)
        out[: a.size] += a
        out[: b.size] += b
        return CoefficientSeries(out)

    def __sub__(self, other: CoefficientSeries) -> CoefficientSeries:
        return self + (-other)

    def __neg__(self) -> CoefficientSeries:
        return CoefficientSeries(-self.coeffs)

    def scale(self, factor: complex) -> CoefficientSeries:
        return CoefficientSeries(factor * self.coeffs)

    def shift(self, constant: complex) -> CoefficientSeries:
        """Add ``constant`` to the constant term."""
        c = self.coeffs.copy()
        c[0] += constant
        return CoefficientSeries(c)

    def times_power(self, m: int) -> CoefficientSeries:
        """Multiply by ``z**m``."""
        return CoefficientSeries(np.concatenate([np.zeros(m, dtype=complex), self.coeffs]))

    def allclose(self, other: CoefficientSeries, atol: float = 1e-14) -> bool:
        n = max(len(self), len(other))
        a = np.zeros(n, dtype=complex)
        b = np.zeros(n, dtype=complex)
        a[: len(self)] = self.coeffs
        b[: len(other)] = other.coeffs
        return bool(np.max(np.abs(a - b)) <= atol)


@dataclass(frozen=True, eq=False)
class HarmonicMap:
    """``f = h + conj(g)`` on the unit disk with ``g(0) = 0``.

    ``u = Re f`` and ``v = Im f``; ``F = h + g`` is the analytic function with
    ``Re F = u``.
    """

    h: CoefficientSeries
    g: CoefficientSeries = field(default_factory=lambda: CoefficientSeries([0.0]))

    def __post_init__(self):
        if abs(self.g.coeffs[0]) > EPS_ZERO:
            raise ValueError("g(0) must be 0")

    @property
    def degree(self) -> int:
        return max(self.h.degree, self.g.degree)

    @property
    def u0(self) -> float:
        return float(self.h.coeffs[0].real)

    @property
    def v0(self) -> float:
        return float(self.h.coeffs[0].imag)

    @property
    def analytic_part(self) -> CoefficientSeries:
        """``F = h + g``, analytic with ``Re F = Re f``."""
        return self.h + self.g

    def negated(self) -> HarmonicMap:
        return HarmonicMap(-self.h, -self.g)

    def __call__(self, z):
        """Pointwise values of f at (arrays of) interior points."""
        return evaluate(self.h, z) + np.conj(evaluate(self.g, z))


@dataclass(frozen=True, eq=False)
class CircleSamples:
    """Values on the ``M`` points ``r * exp(2 pi i j / M)``."""

    radius: float
    values: np.ndarray

    def __post_init__(self):
        if not 0.0 <= self.radius < 1.0:
            raise ValueError(f"radius must lie in [0, 1), got {self.radius}")
        if np.asarray(self.values).size < 1:
            raise ValueError("need at least one sample")

    @property
    def grid_size(self) -> int:
        return int(np.asarray(self.values).size)

    @property
    def theta(self) -> np.ndarray:
        return 2 * np.pi * np.arange(self.grid_size) / self.grid_size

    @property
    def points(self) -> np.ndarray:
        return self.radius * np.exp(1j * self.theta)

    def map(self, fn) -> CircleSamples:
        return CircleSamples(self.radius, fn(self.values))


@dataclass(frozen=True)
class QuasiregularityEstimate:
    k_hat: float
    K_hat: float
    attained_at: tuple
    valid: bool


def default_grid_size(degree: int) -> int:
    """max(1024, 8 (N+1)), rounded up to a length with only small prime factors."""
    return next_fast_len(max(MIN_GRID, OVERSAMPLING * (degree + 1)))


def _check_radius(r):
    if not 0.0 <= r < 1.0:
        raise ValueError(f"radius must satisfy 0 <= r < 1, got {r}")


def derivative(s: CoefficientSeries) -> CoefficientSeries:
    if s.degree == 0:
        return CoefficientSeries([0.0])
    n = np.arange(1, s.degree + 1)
    return CoefficientSeries(n * s.coeffs[1:])


def antiderivative(s: CoefficientSeries) -> CoefficientSeries:
    n = np.arange(1, s.degree + 2)
    return CoefficientSeries(np.concatenate([[0.0], s.coeffs / n]))


def evaluate(s: CoefficientSeries, z):
    """Horner evaluation at arbitrary points (scalar or array)."""
    z = np.asarray(z, dtype=complex)
    acc = np.full(z.shape, s.coeffs[-1], dtype=complex)
    for c in s.coeffs[-2::-1]:
        acc = acc * z + c
    return acc if acc.ndim else complex(acc)


def _circle_values(coeffs: np.ndarray, r: float, M: int) -> np.ndarray:
    n = np.arange(coeffs.size)
    with np.errstate(under="ignore"):
        weighted = coeffs * float(r) ** n
    pad = (-weighted.size) % M
    folded = np.concatenate([weighted, np.zeros(pad, dtype=complex)]).reshape(-1, M).sum(axis=0)
    return M * np.fft.ifft(folded)


def eval_analytic(s: CoefficientSeries, r: float, M: int) -> CircleSamples:
    _check_radius(r)
    if M < 1:
        raise ValueError("M must be >= 1")
    return CircleSamples(r, _circle_values(s.coeffs, r, int(M)))


def eval_harmonic(fmap: HarmonicMap, r: float, M: int) -> CircleSamples:
    hv = eval_analytic(fmap.h, r, M).values
    gv = eval_analytic(fmap.g, r, M).values
    return CircleSamples(r, hv + np.conj(gv))


def conjugate_of_real_part(U: CoefficientSeries) -> CoefficientSeries:
    """Analytic completion of ``u = Re U`` whose imaginary part vanishes at 0."""
    return U.shift(-1j * U.coeffs[0].imag)


def dilatation_samples(fmap: HarmonicMap, r: float, M: int) -> CircleSamples:
    hp = eval_analytic(derivative(fmap.h), r, M)
    gp = eval_analytic(derivative(fmap.g), r, M).values
    bad = np.flatnonzero(np.abs(hp.values) < EPS_ZERO)
    if bad.size:
        j = int(bad[0])
        raise DegenerateDilatation(j, hp.points[j])
    # zeros of h' strictly inside the circle show up as a nonzero winding number
    if M > 1 and winding_number(hp.values) != 0:
        j = int(np.argmin(np.abs(hp.values)))
        raise DegenerateDilatation(j, hp.points[j])
    return CircleSamples(r, gp / hp.values)


def winding_number(values: np.ndarray) -> int:
    """Winding number about 0 of a closed sampled curve."""
    steps = np.angle(np.roll(values, -1) / values)
    return int(round(float(np.sum(steps)) / (2 * np.pi)))


def estimate_quasiregularity(fmap: HarmonicMap, r_seq, M: int | None = None) -> QuasiregularityEstimate:
    """Sampled sup of ``|g'/h'|`` over the circles in ``r_seq``.

    By the maximum principle the sup over ``|z| <= max(r_seq)`` sits on the
    outermost circle; inner circles are sampled anyway so that a vanishing h'
    inside is caught.
    """
    r_seq = list(r_seq)
    if not r_seq:
        raise ValueError("r_seq must be non-empty")
    if any(b <= a for a, b in zip(r_seq, r_seq[1:])):
        raise ValueError("r_seq must be strictly increasing")
    if M is None:
        M = default_grid_size(fmap.degree)
    k_hat, where = 0.0, (r_seq[-1], 0.0)
    for r in r_seq:
        w = np.abs(dilatation_samples(fmap, r, M).values)
        j = int(np.argmax(w))
        if w[j] >= k_hat:
            k_hat, where = float(w[j]), (r, 2 * np.pi * j / M)
    valid = k_hat < 1.0 - EPS_MARGIN
    K_hat = (1 + k_hat) / (1 - k_hat) if k_hat < 1.0 else math.inf
    return QuasiregularityEstimate(k_hat, K_hat, where, valid)
