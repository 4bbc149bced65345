"""Integral means on circles, the Zygmund functional and radial profiles.

All circle integrals use the equal-weight periodic trapezoidal rule, i.e. the
plain average of the samples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import CircleSamples, CoefficientSeries, HarmonicMap, default_grid_size, eval_analytic

DOUBLING_RTOL = 1e-8
MONOTONE_SLACK = 1e-12
QUANTITIES = ("mean_of_f", "mean_of_u", "mean_of_v", "mean_of_F", "zygmund_of_u")


def _values(samples):
    return samples.values if isinstance(samples, CircleSamples) else np.asarray(samples)


def integral_mean(samples, p: float) -> float:
    """``M_p``: the L^p average of |values|; ``p = math.inf`` gives the max."""
    a = np.abs(_values(samples))
    if p == math.inf:
        return float(np.max(a))
    if not p > 0:
        raise ValueError(f"p must be positive, got {p}")
    if p == 1:
        return float(np.mean(a))
    if p == 2:
        return float(math.sqrt(np.mean(a * a)))
    return float(np.mean(a**p) ** (1.0 / p))


def pth_power_mean(samples, p: float) -> float:
    """``M_p^p``: mean of |values|^p without the final root."""
    if not p > 0 or p == math.inf:
        raise ValueError(f"p must be a positive finite number, got {p}")
    return float(np.mean(np.abs(_values(samples)) ** p))


def m2_exact(s: CoefficientSeries, r: float) -> float:
    """Parseval: ``M_2(r, sum c_n z^n) = sqrt(sum |c_n|^2 r^(2n))``."""
    if not 0.0 <= r < 1.0:
        raise ValueError("need 0 <= r < 1")
    n = np.arange(len(s))
    with np.errstate(under="ignore"):
        return float(math.sqrt(np.sum(np.abs(s.coeffs) ** 2 * r ** (2 * n))))


def zygmund_functional(u_samples) -> float:
    """Normalized ``(1/2pi) int |u| log+ |u| dtheta``; log+ is exactly 0 for |u| <= 1."""
    a = np.abs(np.real(_values(u_samples)))
    big = a > 1.0
    return float(np.sum(a[big] * np.log(a[big])) / a.size)


@dataclass(frozen=True)
class CircleData:
    """h and g sampled on one circle; f, u, v and F are derived from them."""

    radius: float
    h: np.ndarray
    g: np.ndarray

    @property
    def f(self):
        return self.h + np.conj(self.g)

    @property
    def F(self):
        return self.h + self.g

    @property
    def u(self):
        return np.real(self.h + self.g)

    @property
    def v(self):
        return np.imag(self.h) - np.imag(self.g)


def circle_data(fmap: HarmonicMap, r: float, M: int | None = None) -> CircleData:
    if M is None:
        M = default_grid_size(fmap.degree)
    return CircleData(r, eval_analytic(fmap.h, r, M).values, eval_analytic(fmap.g, r, M).values)


def quantity(data: CircleData, name: str, p: float) -> float:
    if name == "mean_of_f":
        return integral_mean(data.f, p)
    if name == "mean_of_u":
        return integral_mean(data.u, p)
    if name == "mean_of_v":
        return integral_mean(data.v, p)
    if name == "mean_of_F":
        return integral_mean(data.F, p)
    if name == "zygmund_of_u":
        return zygmund_functional(data.u)
    raise ValueError(f"unknown quantity {name!r}; choose from {', '.join(QUANTITIES)}")


def default_radii(count: int = 10) -> list[float]:
    return [1.0 - 2.0**-j for j in range(1, count + 1)]


@dataclass(frozen=True)
class RadialProfile:
    radii: tuple
    values: tuple
    quantity_tag: str
    doubling_delta: tuple = field(default=())

    def __post_init__(self):
        if len(self.radii) != len(self.values):
            raise ValueError("radii and values differ in length")
        if any(b <= a for a, b in zip(self.radii, self.radii[1:])):
            raise ValueError("radii must be strictly increasing")
        if not all(math.isfinite(v) for v in self.values):
            raise ValueError("profile values must be finite")

    @property
    def under_resolved(self) -> bool:
        return any(
            d > DOUBLING_RTOL * max(abs(v), 1e-300) for d, v in zip(self.doubling_delta, self.values)
        )


def radial_profile(fmap: HarmonicMap, name: str, p: float, radii=None, M: int | None = None) -> RadialProfile:
    """Tabulate one circle quantity over increasing radii, with a grid-doubling check."""
    if name not in QUANTITIES:
        raise ValueError(f"unknown quantity {name!r}; choose from {', '.join(QUANTITIES)}")
    if name != "zygmund_of_u" and not (p == math.inf or p > 0):
        raise ValueError(f"p must be positive, got {p}")
    radii = default_radii() if radii is None else list(radii)
    if M is None:
        M = default_grid_size(fmap.degree)
    values, deltas = [], []
    for r in radii:
        coarse = quantity(circle_data(fmap, r, M), name, p)
        fine = quantity(circle_data(fmap, r, 2 * M), name, p)
        values.append(fine)
        deltas.append(abs(fine - coarse))
    tag = name if name == "zygmund_of_u" else f"{name}[p={p:g}]"
    return RadialProfile(tuple(radii), tuple(values), tag, tuple(deltas))


def monotone_flag(profile: RadialProfile) -> bool:
    v = profile.values
    return all(b >= a - MONOTONE_SLACK * max(1.0, abs(a)) for a, b in zip(v, v[1:]))
