"""Parameterized test mappings with known guarantees.

Each family builds a :class:`~hqrcheck.core.HarmonicMap` plus the metadata
the verifier dispatches on: the analytic dilatation bound ``k``, proven lower
or upper bounds on ``u``, whether ``v(0) = 0``, and a coefficient bound used
for the truncation tail ``B r^(N+1) / (1 - r)``.

Degrees are chosen from the largest radius of interest so that the tail is
below ``TAIL_TOL``; :func:`build` does this when given ``r_max``.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import roots_jacobi

from .core import DEFAULT_DEGREE, CoefficientSeries, HarmonicMap, antiderivative, derivative, eval_analytic

TAIL_TOL = 1e-13
R_CAP = 0.999
SHIFT_SAFETY = 1e-6


@dataclass(frozen=True)
class FamilySpec:
    family_id: str
    params: dict = field(default_factory=dict)
    degree: int = DEFAULT_DEGREE

    def key(self):
        return (self.family_id, tuple(sorted(self.params.items())), self.degree)

    def flat_params(self) -> str:
        return ";".join(f"{k}={_fmt(v)}" for k, v in sorted(self.params.items()))


def _fmt(v):
    return repr(float(v))


@dataclass(frozen=True, eq=False)
class ZooMember:
    spec: FamilySpec
    map: HarmonicMap
    coeff_bound: float
    k: float | None = None
    m: int = 0
    u_lower: float | None = None
    u_upper: float | None = None
    im_h_lower: float | None = None
    guarantee_radius: float = 1.0
    decreasing: bool = False

    @property
    def v0_zero(self) -> bool:
        return abs(self.map.v0) <= 1e-12

    @property
    def K(self) -> float | None:
        return None if self.k is None else (1 + self.k) / (1 - self.k)

    def tail_bound(self, r: float) -> float:
        """Bound on |truncated - full| for h, g, f or F on the circle of radius r."""
        N = self.spec.degree
        with np.errstate(under="ignore"):
            return float(self.coeff_bound * r ** (N + 1) / (1 - r))

    def metadata(self) -> dict:
        meta = {"u0": self.map.u0, "v0": self.map.v0, "degree": float(self.spec.degree)}
        if self.k is not None:
            meta["k"] = self.k
            meta["K"] = self.K
        for name in ("u_lower", "u_upper", "im_h_lower"):
            val = getattr(self, name)
            if val is not None:
                meta[name] = float(val)
        return meta


def required_degree(r: float, coeff_bound: float, tol: float = TAIL_TOL) -> int:
    if r <= 0:
        return 1
    return max(1, int(math.ceil(math.log(tol * (1 - r) / max(coeff_bound, 1e-300)) / math.log(r))))


def _check(cond, msg):
    if not cond:
        raise ValueError(msg)


def _halfplane_coeffs(N: int) -> np.ndarray:
    """(1+z)/(1-z) = 1 + 2 sum_{n>=1} z^n."""
    c = np.full(N + 1, 2.0, dtype=complex)
    c[0] = 1.0
    return c


def _sqrt_halfplane_coeffs(N: int) -> np.ndarray:
    """sqrt((1+z)/(1-z)) = (1+z) (1-z^2)^(-1/2); both parities share binom(2j,j)/4^j."""
    j = np.arange(1, N // 2 + 1)
    t = np.concatenate([[1.0], np.cumprod((2 * j - 1) / (2 * j))])
    return np.repeat(t, 2)[: N + 1].astype(complex)


# -- map families -------------------------------------------------------------


def make_shifted_halfplane(c: float, k: float, N: int = DEFAULT_DEGREE, experimental: bool = False) -> HarmonicMap:
    """h = (c + k) + (1+z)/(1-z), g = k (h - h(0)); then omega = k and u = c + (1+k) Re((1+z)/(1-z))."""
    _check(c > 0 if experimental else c >= 1, f"c must be >= 1, got {c}")
    _check(0 <= k < 1, f"k must lie in [0, 1), got {k}")
    h = CoefficientSeries(_halfplane_coeffs(N)).shift(c + k)
    g = (h - CoefficientSeries([h.coeffs[0]])).scale(k)
    return HarmonicMap(h, g)


@functools.lru_cache(maxsize=None)
def _variable_dilatation_floor(k: float, m: int, R: float = R_CAP) -> float:
    """min over |z| <= R of Re P + k Re G_m, where P = (1+z)/(1-z) and G_m' = z^m P'."""
    N = required_degree(R, 2.0, 1e-15)
    P = CoefficientSeries(_halfplane_coeffs(N))
    G = antiderivative(derivative(P).times_power(m))
    M = 8 * (N + 1)
    vals = eval_analytic(P, R, M).values.real + k * eval_analytic(G, R, M).values.real
    return float(vals.min())


def make_variable_dilatation(c: float, k: float, m: int, N: int = DEFAULT_DEGREE) -> HarmonicMap:
    """omega(z) = k z^m.  For m >= 1 the constant term is raised so that u >= c on |z| <= R_CAP."""
    _check(c >= 1, f"c must be >= 1, got {c}")
    _check(0 <= k < 1, f"k must lie in [0, 1), got {k}")
    _check(m >= 0 and int(m) == m, f"m must be a non-negative integer, got {m}")
    m = int(m)
    if m == 0:
        return make_shifted_halfplane(c, k, N)
    # u = A + Re P + k Re G_m with h = A + P
    A = c if k == 0 else c - _variable_dilatation_floor(float(k), m) + SHIFT_SAFETY
    h = CoefficientSeries(_halfplane_coeffs(N)).shift(A)
    g = antiderivative(derivative(h).times_power(m).scale(k))
    return HarmonicMap(h, g)


def _cos_moment_rule(alpha: float, N: int, panels: int = 64, oversample: float = 1.0):
    """Nodes and weights for int_0^pi theta^(-alpha) q(theta) dtheta, q oscillating up to cos(N theta).

    Gauss-Jacobi absorbs the singularity on the first panel; the remaining
    panels are plain Gauss-Legendre.
    """
    width = np.pi / panels
    q = int(math.ceil(oversample * (0.6 * N * width + 30)))
    x, w = roots_jacobi(q, 0.0, -alpha)
    nodes = [0.5 * width * (1 + x)]
    weights = [(0.5 * width) ** (1 - alpha) * w]
    x, w = np.polynomial.legendre.leggauss(q)
    for j in range(1, panels):
        a = j * width
        t = a + 0.5 * width * (1 + x)
        nodes.append(t)
        weights.append(0.5 * width * w * t ** (-alpha))
    return np.concatenate(nodes), np.concatenate(weights)


def _jacobi_cos_moments(alpha: float, N: int, oversample: float = 1.0) -> np.ndarray:
    """int_0^pi theta^(-alpha) cos(n theta) dtheta for n = 0..N."""
    theta, w = _cos_moment_rule(alpha, N, oversample=oversample)
    out = np.empty(N + 1)
    for start in range(0, N + 1, 256):
        n = np.arange(start, min(start + 256, N + 1))
        out[start : start + n.size] = np.cos(np.outer(n, theta)) @ w
    return out


@functools.lru_cache(maxsize=32)
def poisson_coefficients(alpha: float, N: int) -> np.ndarray:
    """Cosine coefficients a_n = (1/pi) int_{-pi}^{pi} |theta|^(-alpha) cos(n theta) dtheta."""
    a = (2 / np.pi) * _jacobi_cos_moments(alpha, N)
    a.setflags(write=False)
    return a


def poisson_mean(alpha: float) -> float:
    """(1/2pi) int |theta|^(-alpha) dtheta over [-pi, pi], in closed form."""
    return math.pi ** (-alpha) / (1 - alpha)


def make_poisson_family(alpha: float, c: float, N: int = DEFAULT_DEGREE) -> HarmonicMap:
    """u = c + Poisson extension of |theta|^(-alpha); h is its analytic completion, g = 0."""
    _check(0 < alpha < 1, f"alpha must lie in (0, 1), got {alpha}")
    _check(c >= 0, f"c must be >= 0, got {c}")
    a = poisson_coefficients(float(alpha), int(N)).astype(complex)
    coeffs = a.copy()
    coeffs[0] = c + a[0] / 2
    return HarmonicMap(CoefficientSeries(coeffs))


def make_quadrant_family(c: float, k: float, N: int = DEFAULT_DEGREE) -> HarmonicMap:
    """h = A + e^{i pi/4} sqrt((1+z)/(1-z)) maps into a shifted quadrant; g = k (h - h(0)).

    With Re A = c + k/sqrt 2 and Im A = c this gives u >= c and Im h >= c.
    """
    _check(c >= 1, f"c must be >= 1, got {c}")
    _check(0 <= k < 1, f"k must lie in [0, 1), got {k}")
    rot = np.exp(0.25j * np.pi)
    Qs = CoefficientSeries(rot * _sqrt_halfplane_coeffs(N))
    h = Qs.shift(c + k / math.sqrt(2) + 1j * c)
    g = (Qs - CoefficientSeries([Qs.coeffs[0]])).scale(k)
    return HarmonicMap(h, g)


def make_imaginary_halfplane(c: float, k: float, N: int = DEFAULT_DEGREE) -> HarmonicMap:
    """h = i (c + (1+z)/(1-z)), g = k (h - h(0)); Im h >= c while u changes sign."""
    _check(c > 0, f"c must be > 0, got {c}")
    _check(0 <= k < 1, f"k must lie in [0, 1), got {k}")
    h = CoefficientSeries(1j * _halfplane_coeffs(N)).shift(1j * c)
    g = (h - CoefficientSeries([h.coeffs[0]])).scale(k)
    return HarmonicMap(h, g)


# -- coefficient families ------------------------------------------------------

COEFFICIENT_RULES = {
    "harmonic_tail": lambda x, rho: 1.0 / (x + 1.0),
    "log_damped": lambda x, rho: 1.0 / ((x + 1.0) * np.log(x + 2.0) ** 2),
    "geometric": lambda x, rho: rho**x,
}


def make_coefficient_family(rule: str, N: int, rho: float = 0.5) -> CoefficientSeries:
    """Nonnegative decreasing coefficients a_0..a_N following ``rule``."""
    if rule not in COEFFICIENT_RULES:
        raise ValueError(f"unknown rule {rule!r}; choose from {', '.join(COEFFICIENT_RULES)}")
    if rule == "geometric":
        _check(0 < rho < 1, f"rho must lie in (0, 1), got {rho}")
    n = np.arange(N + 1, dtype=float)
    return CoefficientSeries(COEFFICIENT_RULES[rule](n, rho))


def make_coefficient_pair(rule: str, N: int, rho: float = 0.5) -> HarmonicMap:
    """h and g share the rule's coefficients, except b_0 = 0 as g(0) = 0."""
    a = make_coefficient_family(rule, N, rho)
    b = a.coeffs.copy()
    b[0] = 0.0
    return HarmonicMap(a, CoefficientSeries(b))


# -- registry -------------------------------------------------------------------


@dataclass(frozen=True)
class Family:
    family_id: str
    domains: dict
    defaults: dict
    guarantees: str


FAMILIES = {
    f.family_id: f
    for f in [
        Family("shifted-halfplane", {"c": "[1, inf)", "k": "[0, 1)"}, {"c": 1.0, "k": 0.0},
               "u >= c >= 1 on D; omega = k; v(0) = 0"),
        Family("variable-dilatation", {"c": "[1, inf)", "k": "[0, 1)", "m": "{0, 1, 2, ...}"},
               {"c": 1.0, "k": 0.0, "m": 1.0},
               "omega = k z^m; u >= c on |z| <= 0.999 (all of D when m = 0 or k = 0); v(0) = 0"),
        Family("poisson", {"alpha": "(0, 1)", "c": "[0, inf)"}, {"alpha": 0.5, "c": 1.0},
               "u = c + P[|theta|^-alpha] > c; g = 0; v(0) = 0"),
        Family("quadrant", {"c": "[1, inf)", "k": "[0, 1)"}, {"c": 1.0, "k": 0.0},
               "u >= c; Im h >= c > 0; omega = k"),
        Family("imaginary-halfplane", {"c": "(0, inf)", "k": "[0, 1)"}, {"c": 2.0, "k": 0.3},
               "Im h >= c > 0; omega = k; u changes sign"),
        Family("negative-shifted-halfplane", {"c": "[1, inf)", "k": "[0, 1)"}, {"c": 1.0, "k": 0.0},
               "u <= -c <= -1; omega = k; v(0) = 0"),
        Family("negative-variable-dilatation", {"c": "[1, inf)", "k": "[0, 1)", "m": "{0, 1, ...}"},
               {"c": 1.0, "k": 0.0, "m": 1.0}, "u <= -c on |z| <= 0.999; omega = k z^m; v(0) = 0"),
        Family("negative-poisson", {"alpha": "(0, 1)", "c": "[0, inf)"}, {"alpha": 0.5, "c": 1.0},
               "u < -c; g = 0; v(0) = 0"),
        Family("harmonic-tail", {}, {}, "a_n = b_n = 1/(n+1) (b_0 = 0); decreasing"),
        Family("log-damped", {}, {}, "a_n = b_n = 1/((n+1) log^2(n+2)) (b_0 = 0); decreasing"),
        Family("geometric", {"rho": "(0, 1)"}, {"rho": 0.5}, "a_n = b_n = rho^n (b_0 = 0); decreasing"),
    ]
}

_NEG_PREFIX = "negative-"


def _coeff_bound(family_id: str, p: dict) -> float:
    base = family_id.removeprefix(_NEG_PREFIX)
    if base in ("shifted-halfplane", "imaginary-halfplane", "variable-dilatation"):
        return 2.0 * (1 + p["k"])
    if base == "quadrant":
        return 1.0 + p["k"]
    if base == "poisson":
        return 2 * poisson_mean(p["alpha"])
    if base == "log-damped":
        return 2.0 / math.log(2) ** 2
    return 2.0


def resolve_params(family_id: str, params: dict | None = None) -> dict:
    if family_id not in FAMILIES:
        raise ValueError(f"unknown family {family_id!r}; choose from {', '.join(FAMILIES)}")
    fam = FAMILIES[family_id]
    params = dict(params or {})
    unknown = set(params) - set(fam.defaults)
    if unknown:
        raise ValueError(f"family {family_id} takes no parameter(s) {sorted(unknown)}")
    out = dict(fam.defaults)
    out.update({k: float(v) for k, v in params.items()})
    return out


def build(family_id: str, params: dict | None = None, r_max: float | None = None,
          degree: int | None = None, experimental: bool = False) -> ZooMember:
    """Construct a family member; the degree follows ``r_max`` unless given."""
    p = resolve_params(family_id, params)
    if degree is None:
        degree = DEFAULT_DEGREE
        if r_max is not None:
            degree = max(DEFAULT_DEGREE, required_degree(r_max, _coeff_bound(family_id, p)))
    spec = FamilySpec(family_id, p, int(degree))
    if family_id.startswith(_NEG_PREFIX):
        return make_negative_variant(spec)
    return _build_base(spec, experimental)


def _build_base(spec: FamilySpec, experimental: bool = False) -> ZooMember:
    fid, p, N = spec.family_id, spec.params, spec.degree
    B = _coeff_bound(fid, p)
    if fid == "shifted-halfplane":
        fmap = make_shifted_halfplane(p["c"], p["k"], N, experimental)
        return ZooMember(spec, fmap, B, k=p["k"], u_lower=p["c"])
    if fid == "variable-dilatation":
        m = int(p["m"])
        fmap = make_variable_dilatation(p["c"], p["k"], m, N)
        whole = m == 0 or p["k"] == 0
        return ZooMember(spec, fmap, B, k=p["k"], m=m, u_lower=p["c"],
                         guarantee_radius=1.0 if whole else R_CAP)
    if fid == "poisson":
        fmap = make_poisson_family(p["alpha"], p["c"], N)
        return ZooMember(spec, fmap, B, k=0.0, u_lower=p["c"])
    if fid == "quadrant":
        fmap = make_quadrant_family(p["c"], p["k"], N)
        return ZooMember(spec, fmap, B, k=p["k"], u_lower=p["c"], im_h_lower=p["c"])
    if fid == "imaginary-halfplane":
        fmap = make_imaginary_halfplane(p["c"], p["k"], N)
        return ZooMember(spec, fmap, B, k=p["k"], im_h_lower=p["c"])
    if fid in ("harmonic-tail", "log-damped", "geometric"):
        rule = fid.replace("-", "_") if fid != "harmonic-tail" else "harmonic_tail"
        fmap = make_coefficient_pair(rule, N, p.get("rho", 0.5))
        return ZooMember(spec, fmap, B, decreasing=True)
    raise ValueError(f"unknown family {fid!r}")


def make_negative_variant(spec: FamilySpec) -> ZooMember:
    """e^{i pi} f of the underlying family: h -> -h, g -> -g, so u <= -1 when the base has u >= 1."""
    base_id = spec.family_id.removeprefix(_NEG_PREFIX)
    base = _build_base(FamilySpec(base_id, spec.params, spec.degree))
    neg_spec = FamilySpec(_NEG_PREFIX + base_id, spec.params, spec.degree)
    return ZooMember(
        neg_spec, base.map.negated(), base.coeff_bound, k=base.k, m=base.m,
        u_lower=None if base.u_upper is None else -base.u_upper,
        u_upper=None if base.u_lower is None else -base.u_lower,
        im_h_lower=None, guarantee_radius=base.guarantee_radius,
    )


def rule_term(rule: str, p: float, rho: float = 0.5):
    """Continuous summand x -> (x+1)^(p-2) a(x)^p, for integral-test tails."""
    a = COEFFICIENT_RULES[rule]
    return lambda x: (x + 1.0) ** (p - 2.0) * a(x, rho) ** p
