"""Laplacian identities behind the main Zygmund-type bound, with independent oracles.

For a harmonic map ``f = h + conj(g)`` with ``u = Re f > 0``::

    Lap(u log u) = |h' + g'|^2 / u
    Lap |f|      = (|f|^2 (|h'|^2 + |g'|^2) - 2 Re(conj(h') g' f^2)) / |f|^3

The finite-difference stencil and the disk form of Green's identity are used
to check these closed forms without sharing any code path with them.
"""

from __future__ import annotations

import numpy as np

from .core import EPS_ZERO, HarmonicMap, derivative, evaluate
from .errors import NonpositiveU, ZeroModulus

DEFAULT_STEP = 1e-3


def _parts(fmap: HarmonicMap, z):
    z = np.asarray(z, dtype=complex)
    h = evaluate(fmap.h, z)
    g = evaluate(fmap.g, z)
    hp = evaluate(derivative(fmap.h), z)
    gp = evaluate(derivative(fmap.g), z)
    return h, g, hp, gp


def laplacian_ulogu_exact(fmap: HarmonicMap, z):
    h, g, hp, gp = _parts(fmap, z)
    u = np.real(h + g)
    if np.any(u <= EPS_ZERO):
        raise NonpositiveU(f"u <= 0 at z = {np.asarray(z).ravel()[np.argmin(np.ravel(u))]}")
    out = np.abs(hp + gp) ** 2 / u
    return out if np.ndim(out) else float(out)


def laplacian_absf_exact(fmap: HarmonicMap, z):
    h, g, hp, gp = _parts(fmap, z)
    f = h + np.conj(g)
    af = np.abs(f)
    if np.any(af <= EPS_ZERO):
        raise ZeroModulus("f vanishes at a requested point")
    num = af**2 * (np.abs(hp) ** 2 + np.abs(gp) ** 2) - 2 * np.real(np.conj(hp) * gp * f**2)
    out = num / af**3
    return out if np.ndim(out) else float(out)


def laplacian_fd(field, z, step: float = DEFAULT_STEP):
    """Five-point stencil ``(sum of 4 neighbours - 4 phi(z)) / step^2``."""
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z) + step >= 1.0):
        raise ValueError("stencil leaves the unit disk; move inward or shrink the step")
    out = (
        field(z + step) + field(z - step) + field(z + 1j * step) + field(z - 1j * step) - 4 * field(z)
    ) / step**2
    return out if np.ndim(out) else float(out)


def laplacian_fd_extrapolated(field, z, step: float = DEFAULT_STEP):
    """Richardson combination of the stencil at ``step`` and ``step/2``; O(step^4)."""
    coarse = laplacian_fd(field, z, step)
    fine = laplacian_fd(field, z, step / 2)
    return (4 * fine - coarse) / 3


def green_identity_residual(
    field,
    r: float,
    M: int,
    ring_count: int,
    laplacian=None,
    dr: float = 1e-4,
    step: float = DEFAULT_STEP,
) -> float:
    """Relative mismatch of ``r * int dphi/dr dtheta`` and ``iint_{|z|<=r} Lap phi``.

    The radial derivative is a central difference in r; the area integral uses
    Gauss-Legendre rings in the radius and the trapezoidal rule in angle.
    ``laplacian`` defaults to the five-point stencil of ``field``.
    """
    if not 0.0 < r < 1.0 - dr:
        raise ValueError("need 0 < r < 1 - dr")
    theta = 2 * np.pi * np.arange(M) / M
    e = np.exp(1j * theta)
    dphi = (field((r + dr) * e) - field((r - dr) * e)) / (2 * dr)
    lhs = r * 2 * np.pi * float(np.mean(dphi))

    if laplacian is None:
        def laplacian(pts):
            return laplacian_fd(field, pts, step)

    x, w = np.polynomial.legendre.leggauss(ring_count)
    rho = 0.5 * r * (x + 1)
    wr = 0.5 * r * w
    pts = rho[:, None] * e[None, :]
    ring_means = np.mean(laplacian(pts), axis=1)
    rhs = float(np.sum(wr * rho * 2 * np.pi * ring_means))
    return abs(lhs - rhs) / max(abs(lhs), 1.0)
