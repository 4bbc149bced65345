"""One checker per inequality, each returning an :class:`InequalityReport`.

Strict checks compare ``lhs <= rhs`` up to an explicit error budget::

    budget = 10 * (grid-doubling delta + truncation bound) + 1e-12 * scale

where the grid-doubling delta is the change in both sides when the circle grid
goes from M to 2M points.  Checks whose constants are only known to exist
(Riesz, Kolmogorov, Liu-Zhu) record the empirical ratio and never fail.
"""

from __future__ import annotations

import cmath
import math

import numpy as np
from scipy import integrate

from .core import (
    CoefficientSeries,
    HarmonicMap,
    conjugate_of_real_part,
    default_grid_size,
    estimate_quasiregularity,
)
from .errors import HypothesisViolated
from .means import (
    DOUBLING_RTOL,
    circle_data,
    integral_mean,
    pth_power_mean,
    zygmund_functional,
)
from .report import InequalityReport
from .zoo import COEFFICIENT_RULES, FamilySpec, ZooMember, rule_term

SAFETY = 10.0
ROUNDING = 1e-12
HYP_TOL = 1e-9
ZYGMUND_CONSTANT = 3 * math.e

STRICT = ("zygmund-hqr", "zygmund-classical", "riesz-p2", "kalaj-1", "kalaj-2", "converse")
REPORT_ONLY = ("riesz-ratio", "kolmogorov-classical", "liu-zhu", "lemma-f", "hl-sum", "dhr3-iii")
THEOREMS = STRICT + REPORT_ONLY


class _Subject:
    """Uniform view of a ZooMember, a bare HarmonicMap or a bare series."""

    def __init__(self, obj):
        if isinstance(obj, ZooMember):
            self.map = obj.map
            self.spec = obj.spec
            self.k = obj.k
            self.member = obj
        elif isinstance(obj, HarmonicMap):
            self.map = obj
            self.spec = FamilySpec("custom", {}, obj.degree)
            self.k = None
            self.member = None
        elif isinstance(obj, CoefficientSeries):
            self.map = HarmonicMap(obj)
            self.spec = FamilySpec("custom", {}, obj.degree)
            self.k = 0.0
            self.member = None
        else:
            raise TypeError(f"cannot verify a {type(obj).__name__}")

    def tail(self, r):
        return 0.0 if self.member is None else self.member.tail_bound(r)

    def grid(self, M):
        return default_grid_size(self.map.degree) if M is None else int(M)


def _two_grids(compute, M):
    """Evaluate (lhs, rhs) at M and 2M; return the finer pair and the change."""
    l1, r1 = compute(M)
    l2, r2 = compute(2 * M)
    return l2, r2, abs(l2 - l1) + abs(r2 - r1)


def _budget(lhs, rhs, delta, trunc):
    scale = max(abs(lhs), abs(rhs), 1.0)
    return SAFETY * (delta + trunc) + ROUNDING * scale


def _strict_verdict(lhs, rhs, delta, budget, two_sided=False):
    margin = rhs - lhs
    scale = max(abs(lhs), abs(rhs), 1e-300)
    ok = abs(margin) <= budget if two_sided else margin >= -budget
    decisive = abs(margin) > budget if not two_sided else True
    if delta > DOUBLING_RTOL * scale and not decisive:
        return "under-resolved"
    return "pass" if ok else "fail"


def _report(theorem_id, subj, r, p, lhs, rhs, delta, trunc, meta, two_sided=False):
    budget = _budget(lhs, rhs, delta, trunc)
    verdict = _strict_verdict(lhs, rhs, delta, budget, two_sided)
    meta = dict(meta)
    meta["doubling_delta"] = delta
    meta["truncation_bound"] = trunc
    return InequalityReport(theorem_id, subj.spec, r, p, lhs, rhs, rhs - lhs, budget, verdict, meta)


def _ratio_report(theorem_id, subj, r, p, lhs, rhs, delta, meta):
    ratio = lhs / rhs if rhs != 0 else (0.0 if lhs == 0 else math.inf)
    meta = dict(meta)
    meta["doubling_delta"] = delta
    return InequalityReport(theorem_id, subj.spec, r, p, lhs, rhs, ratio, SAFETY * delta,
                            "report-only", meta)


def _base_meta(subj):
    meta = {} if subj.member is None else subj.member.metadata()
    meta.setdefault("u0", subj.map.u0)
    meta.setdefault("v0", subj.map.v0)
    return meta


def _dilatation_K(subj, r, M, meta):
    est = estimate_quasiregularity(subj.map, [r], M)
    meta["k_hat"] = est.k_hat
    meta["K_hat"] = est.K_hat
    if not est.valid:
        raise HypothesisViolated("quasiregular", f"sampled |omega| reaches {est.k_hat:.6g}")
    if subj.k is not None:
        return (1 + subj.k) / (1 - subj.k)
    return est.K_hat


def _require_v0(subj):
    if abs(subj.map.v0) > 1e-12:
        raise HypothesisViolated("v0_zero", f"v(0) = {subj.map.v0:.6g}")


# -- main Zygmund-type bound ------------------------------------------------------


def check_zygmund_hqr(subject, r: float, M: int | None = None, experimental: bool = False) -> InequalityReport:
    """M_1(r,f) <= K^2 Z(u) + |u(0)| (1 - K^2 log|u(0)|), Z the normalized |u| log+ |u| mean.

    ``experimental`` drops the |u| >= 1 hypothesis and never fails: it records
    the margin for maps with u >= C, C < 1.
    """
    subj = _Subject(subject)
    M = subj.grid(M)
    meta = _base_meta(subj)
    K = _dilatation_K(subj, r, M, meta)
    _require_v0(subj)
    u = circle_data(subj.map, r, M).u
    meta["u_min"], meta["u_max"] = float(u.min()), float(u.max())
    if not experimental and not (u.min() >= 1 - HYP_TOL or u.max() <= -1 + HYP_TOL):
        raise HypothesisViolated("u_ge_1", f"u ranges over [{u.min():.6g}, {u.max():.6g}]")
    u0 = abs(subj.map.u0)
    if u0 == 0:
        raise HypothesisViolated("u0_nonzero")
    K2 = K * K
    meta["K_used"] = K

    def sides(MM):
        d = circle_data(subj.map, r, MM)
        return integral_mean(d.f, 1), K2 * zygmund_functional(d.u) + u0 * (1 - K2 * math.log(u0))

    lhs, rhs, delta = _two_grids(sides, M)
    trunc = subj.tail(r) * (1 + K2 * (1 + math.log(max(abs(meta["u_min"]), abs(meta["u_max"]), 1.0))))
    rep = _report("zygmund-hqr", subj, r, None, lhs, rhs, delta, trunc, meta)
    if experimental:
        rep = InequalityReport(rep.theorem_id, rep.family, r, None, lhs, rhs, rep.margin,
                               rep.error_budget, "report-only", {**rep.metadata, "experimental": 1.0})
    return rep


# -- classical conjugate-function theorems ----------------------------------------


def _analytic(subject):
    """The analytic function whose real part is u, and the reporting subject."""
    if isinstance(subject, CoefficientSeries):
        return subject, _Subject(subject)
    subj = _Subject(subject)
    return subj.map.analytic_part, subj


def _conjugate_pair(U, r, M):
    """Samples of u = Re U and of its conjugate normalized by v(0) = 0."""
    V = conjugate_of_real_part(U)
    d = circle_data(HarmonicMap(V), r, M)
    return np.real(d.h), np.imag(d.h)


def check_zygmund_classical(subject, r: float, M: int | None = None) -> InequalityReport:
    """M_1(r, v) <= Z(u) + 3e for u = Re U and its normalized conjugate v."""
    U, subj = _analytic(subject)
    M = subj.grid(M)

    def sides(MM):
        u, v = _conjugate_pair(U, r, MM)
        return integral_mean(v, 1), zygmund_functional(u) + ZYGMUND_CONSTANT

    lhs, rhs, delta = _two_grids(sides, M)
    return _report("zygmund-classical", subj, r, None, lhs, rhs, delta, 3 * subj.tail(r), _base_meta(subj))


def check_riesz_ratio(subject, p: float, r: float, M: int | None = None) -> InequalityReport:
    """Report-only ratio M_p(r, v) / M_p(r, u)."""
    if not 1 < p < math.inf:
        raise ValueError(f"the Riesz ratio needs 1 < p < inf, got {p}")
    U, subj = _analytic(subject)
    M = subj.grid(M)

    def sides(MM):
        u, v = _conjugate_pair(U, r, MM)
        return integral_mean(v, p), integral_mean(u, p)

    lhs, rhs, delta = _two_grids(sides, M)
    return _ratio_report("riesz-ratio", subj, r, p, lhs, rhs, delta, _base_meta(subj))


def check_riesz_identity(subject, r: float, M: int | None = None) -> InequalityReport:
    """Exact p = 2 case: M_2(v)^2 + u(0)^2 = M_2(u)^2, checked two-sided."""
    U, subj = _analytic(subject)
    M = subj.grid(M)
    u0 = float(U.coeffs[0].real)

    def sides(MM):
        u, v = _conjugate_pair(U, r, MM)
        return integral_mean(v, 2) ** 2 + u0 * u0, integral_mean(u, 2) ** 2

    lhs, rhs, delta = _two_grids(sides, M)
    trunc = 2 * subj.tail(r) * math.sqrt(max(rhs, 1.0))
    return _report("riesz-p2", subj, r, 2.0, lhs, rhs, delta, trunc, _base_meta(subj), two_sided=True)


def check_kolmogorov_classical(subject, p: float, r: float, M: int | None = None) -> InequalityReport:
    """Report-only ratio M_p(r, v) / M_1(r, u) for 0 < p < 1."""
    if not 0 < p < 1:
        raise ValueError(f"the Kolmogorov ratio needs 0 < p < 1, got {p}")
    U, subj = _analytic(subject)
    M = subj.grid(M)

    def sides(MM):
        u, v = _conjugate_pair(U, r, MM)
        return integral_mean(v, p), integral_mean(u, 1)

    lhs, rhs, delta = _two_grids(sides, M)
    return _ratio_report("kolmogorov-classical", subj, r, p, lhs, rhs, delta, _base_meta(subj))


# -- quasiregular analogues -------------------------------------------------------


def kalaj_constants(p: float) -> tuple[float, float]:
    """(sec(p pi / 2), cos(p pi / 2))."""
    c = math.cos(p * math.pi / 2)
    return 1.0 / c, c


def _pmean_shift(x, t, p):
    """Bound on the change of mean |x|^p when every sample moves by at most t (0 < p < 1)."""
    if t == 0:
        return 0.0
    a = np.abs(x)
    far = a > 2 * t
    bound = np.full(a.shape, t**p)
    bound[far] = p * (a[far] - t) ** (p - 1) * t
    return float(np.mean(bound))


def check_kolmogorov_hqr(subject, p: float, r: float, M: int | None = None):
    """Both Kolmogorov-type inequalities for harmonic K-quasiregular maps with u > 0.

    First:  M_p^p(v) <= sec(p pi/2) (K^2 M_1(u)^p - (K^2 - 1) M_p^p(u))
    Second: (2 - K^2) M_1(u)^p <= (2 - K^2) M_p^p(u) + cos(p pi/2) M_p^p(v)
    """
    if not 0 < p < 1:
        raise ValueError(f"need 0 < p < 1, got {p}")
    subj = _Subject(subject)
    M = subj.grid(M)
    meta = _base_meta(subj)
    K = _dilatation_K(subj, r, M, meta)
    _require_v0(subj)
    u = circle_data(subj.map, r, M).u
    meta["u_min"] = float(u.min())
    if u.min() <= 0:
        raise HypothesisViolated("u_positive", f"min u = {u.min():.6g}")
    K2 = K * K
    sec, cos = kalaj_constants(p)
    meta.update(K_used=K, sec=sec, cos=cos)

    def first(MM):
        d = circle_data(subj.map, r, MM)
        return pth_power_mean(d.v, p), sec * (K2 * integral_mean(d.u, 1) ** p - (K2 - 1) * pth_power_mean(d.u, p))

    def second(MM):
        d = circle_data(subj.map, r, MM)
        lhs = (2 - K2) * integral_mean(d.u, 1) ** p
        return lhs, (2 - K2) * pth_power_mean(d.u, p) + cos * pth_power_mean(d.v, p)

    t = subj.tail(r)
    d = circle_data(subj.map, r, M)
    m1 = integral_mean(d.u, 1)
    trunc = (1 + K2) * sec * (_pmean_shift(d.v, t, p) + _pmean_shift(d.u, t, p) + p * m1 ** (p - 1) * t)
    out = []
    for tid, fn in (("kalaj-1", first), ("kalaj-2", second)):
        lhs, rhs, delta = _two_grids(fn, M)
        out.append(_report(tid, subj, r, p, lhs, rhs, delta, trunc, meta))
    return tuple(out)


def check_liu_zhu_ratio(subject, p: float, r: float, M: int | None = None) -> InequalityReport:
    """Report-only ratio M_p(r, v) / M_p(r, u) for u >= 0, v(0) = 0, 1 < p <= 2."""
    if not 1 < p <= 2:
        raise ValueError(f"need 1 < p <= 2, got {p}")
    subj = _Subject(subject)
    M = subj.grid(M)
    meta = _base_meta(subj)
    _dilatation_K(subj, r, M, meta)
    _require_v0(subj)
    u = circle_data(subj.map, r, M).u
    if u.min() < -HYP_TOL:
        raise HypothesisViolated("u_nonnegative", f"min u = {u.min():.6g}")

    def sides(MM):
        d = circle_data(subj.map, r, MM)
        return integral_mean(d.v, p), integral_mean(d.u, p)

    lhs, rhs, delta = _two_grids(sides, M)
    return _ratio_report("liu-zhu", subj, r, p, lhs, rhs, delta, meta)


# -- converse direction -----------------------------------------------------------

STABLE_GROWTH = 0.05


def check_lemma_F(subject, radii, M: int | None = None) -> InequalityReport:
    """Report-only: M_1(r, F) profile for F = h + g when Im h keeps one sign.

    The profile counts as bounded when its relative increase over the last two
    radii is below 5%.
    """
    subj = _Subject(subject)
    radii = list(radii)
    M = subj.grid(M)
    im_min, signs = math.inf, set()
    F_prof, f_prof = [], []
    for r in radii:
        d = circle_data(subj.map, r, M)
        im = np.imag(d.h)
        im_min = min(im_min, float(np.min(np.abs(im))))
        signs.update(np.unique(np.sign(im)).tolist())
        F_prof.append(integral_mean(d.F, 1))
        f_prof.append(integral_mean(d.f, 1))
    if im_min == 0 or len(signs) > 1:
        raise HypothesisViolated("im_h_nonvanishing", f"min |Im h| = {im_min:.3g}")

    def growth(prof):
        return (prof[-1] - prof[-2]) / abs(prof[-2]) if len(prof) > 1 else 0.0

    meta = _base_meta(subj)
    meta.update(
        min_abs_im_h=im_min,
        F_growth=growth(F_prof),
        f_growth=growth(f_prof),
        F_bounded=float(growth(F_prof) < STABLE_GROWTH),
        f_bounded=float(growth(f_prof) < STABLE_GROWTH),
    )
    for r, a, b in zip(radii, F_prof, f_prof):
        meta[f"M1_F@{r!r}"] = a
        meta[f"M1_f@{r!r}"] = b
    lhs, rhs = F_prof[-1], f_prof[-1]
    return InequalityReport("lemma-f", subj.spec, radii[-1], 1.0, lhs, rhs, rhs - lhs, 0.0,
                            "report-only", meta)


def check_converse_bound(subject, r: float, M: int | None = None) -> InequalityReport:
    """Z(u) <= (pi/2) M_1(r, F) + |h(0) log h(0)| for u >= 1, principal branch of log."""
    subj = _Subject(subject)
    M = subj.grid(M)
    meta = _base_meta(subj)
    u = circle_data(subj.map, r, M).u
    meta["u_min"] = float(u.min())
    if u.min() < 1 - HYP_TOL:
        raise HypothesisViolated("u_ge_1", f"min u = {u.min():.6g}")
    h0 = complex(subj.map.h.coeffs[0])
    if h0.imag == 0 and h0.real <= 0:
        raise HypothesisViolated("h0_off_branch_cut", f"h(0) = {h0}")
    const = abs(h0 * cmath.log(h0))
    meta["h0_log_h0"] = const

    def sides(MM):
        d = circle_data(subj.map, r, MM)
        return zygmund_functional(d.u), 0.5 * math.pi * integral_mean(d.F, 1) + const

    lhs, rhs, delta = _two_grids(sides, M)
    trunc = subj.tail(r) * (2 + math.log(max(float(u.max()), 1.0)))
    return _report("converse", subj, r, None, lhs, rhs, delta, trunc, meta)


# -- coefficient sums -------------------------------------------------------------


def integral_tail(term, start: float, rtol: float = 1e-13) -> float:
    """int_start^inf term(x) dx, summed over dyadic intervals until they stop contributing."""
    a = max(float(start), 1.0)
    total = integrate.quad(term, start, a)[0] if a > start else 0.0
    for _ in range(2000):
        piece = integrate.quad(term, a, 2 * a)[0]
        total += piece
        if abs(piece) <= rtol * abs(total):
            break
        a *= 2
    return float(total)


def hl_coefficient_sum(a: CoefficientSeries, p: float, cutoff: int, term=None):
    """Partial sum of (n+1)^(p-2) |a_n|^p for n <= cutoff, plus an integral-test tail.

    ``term`` is a decreasing continuous extension of the summand; without it no
    tail bound is available and ``None`` is returned in its place.
    """
    if not p > 0:
        raise ValueError(f"p must be positive, got {p}")
    if cutoff > a.degree:
        raise ValueError(f"cutoff {cutoff} exceeds the degree {a.degree}")
    n = np.arange(cutoff + 1, dtype=float)
    partial = float(np.sum((n + 1) ** (p - 2) * np.abs(a.coeffs[: cutoff + 1]) ** p))
    if term is None:
        return partial, None
    return partial, integral_tail(term, cutoff)


def _rule_of(subj):
    if subj.member is None:
        return None, 0.5
    fid = subj.spec.family_id
    rule = {"harmonic-tail": "harmonic_tail", "log-damped": "log_damped", "geometric": "geometric"}.get(fid)
    return rule, subj.spec.params.get("rho", 0.5)


def check_hl_sum(subject, p: float, cutoff: int) -> InequalityReport:
    """Report-only two-series sum of (n+1)^(p-2) (|a_n|^p + |b_n|^p)."""
    subj = _Subject(subject)
    rule, rho = _rule_of(subj)
    term = None if rule is None else rule_term(rule, p, rho)
    sa, ta = hl_coefficient_sum(subj.map.h, p, cutoff, term)
    sb, tb = hl_coefficient_sum(subj.map.g, p, cutoff, term)
    tail = None if ta is None else ta + tb
    meta = {"cutoff": float(cutoff), "partial_h": sa, "partial_g": sb}
    lhs = sa + sb
    rhs = lhs if tail is None else lhs + tail
    return InequalityReport("hl-sum", subj.spec, None, p, lhs, rhs, rhs - lhs,
                            0.0 if tail is None else tail, "report-only", meta)


def _nonincreasing(x):
    return bool(np.all(np.diff(x) <= 1e-15 * np.maximum(1.0, np.abs(x[:-1]))))


def check_dhr3_iii(subject, cutoff: int) -> InequalityReport:
    """Report-only: partial sums of (a_n + b_n)/(n+1) for real decreasing coefficients.

    b_0 = 0 is forced by g(0) = 0, so monotonicity of b is checked from n = 1.
    The Cauchy flag compares the partial sums at cutoff/2 and cutoff against
    the integral-test tail at cutoff/2.
    """
    subj = _Subject(subject)
    a, b = subj.map.h.coeffs, subj.map.g.coeffs
    if np.any(np.abs(a.imag) > 0) or np.any(np.abs(b.imag) > 0):
        raise HypothesisViolated("real_coefficients")
    a, b = a.real, b.real
    if np.any(a < 0) or np.any(b < 0) or not _nonincreasing(a) or not _nonincreasing(b[1:]):
        raise HypothesisViolated("decreasing_coefficients")
    if cutoff > min(a.size, b.size) - 1:
        raise ValueError(f"cutoff {cutoff} exceeds the degree")
    n = np.arange(cutoff + 1, dtype=float)
    terms = (a[: cutoff + 1] + b[: cutoff + 1]) / (n + 1)
    partial = float(np.sum(terms))
    half = cutoff // 2
    partial_half = float(np.sum(terms[: half + 1]))
    meta = {"cutoff": float(cutoff), "partial_half": partial_half}
    rule, rho = _rule_of(subj)
    tail = None
    if rule is not None:
        coef = COEFFICIENT_RULES[rule]

        def term(x):
            return 2 * coef(x, rho) / (x + 1)

        tail = integral_tail(term, cutoff)
        tail_half = integral_tail(term, half)
        meta["tail_bound"] = tail
        meta["tail_bound_half"] = tail_half
        meta["cauchy"] = float(partial - partial_half <= tail_half)
    rhs = partial if tail is None else partial + tail
    return InequalityReport("dhr3-iii", subj.spec, None, 1.0, partial, rhs, rhs - partial,
                            0.0 if tail is None else tail, "report-only", meta)
