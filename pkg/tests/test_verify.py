import json
import math

import numpy as np
import pytest

from hqrcheck.core import CoefficientSeries, HarmonicMap
from hqrcheck.errors import HypothesisViolated
from hqrcheck.means import circle_data, integral_mean, zygmund_functional
from hqrcheck.report import CSV_COLUMNS, JSON_FIELDS, InequalityReport, to_csv, to_json
from hqrcheck.suite import run_suite, strict_failures
from hqrcheck.verify import (
    ZYGMUND_CONSTANT,
    check_converse_bound,
    check_dhr3_iii,
    check_hl_sum,
    check_kolmogorov_classical,
    check_kolmogorov_hqr,
    check_lemma_F,
    check_liu_zhu_ratio,
    check_riesz_identity,
    check_riesz_ratio,
    check_zygmund_classical,
    check_zygmund_hqr,
    hl_coefficient_sum,
    kalaj_constants,
)
from hqrcheck.zoo import FamilySpec, build, make_coefficient_family


def S(*c):
    return CoefficientSeries(list(c))


def test_zygmund_hqr_on_two_plus_z():
    rep = check_zygmund_hqr(HarmonicMap(S(2, 1)), 0.9)
    assert rep.verdict == "pass" and rep.margin >= 0
    # K = 1: rhs = Z(u) + 2 (1 - log 2); lhs = M_1(2 + z) by a dense grid
    z = 0.9 * np.exp(2j * np.pi * np.arange(20000) / 20000)
    u = 2 + z.real
    assert rep.lhs == pytest.approx(np.mean(np.abs(2 + z)), abs=1e-10)
    assert rep.rhs == pytest.approx(np.mean(u * np.log(u)) + 2 * (1 - math.log(2)), abs=1e-10)


def test_zygmund_hqr_u0_one_term():
    # u(0) = 1: the additive term is exactly 1 (u dips below 1, so only the experimental mode runs)
    fmap = HarmonicMap(S(1, 0.5))
    rep = check_zygmund_hqr(fmap, 0.5, experimental=True)
    z = zygmund_functional(circle_data(fmap, 0.5, 2048).u)
    assert rep.rhs - z == pytest.approx(1.0, abs=1e-14)


def test_zygmund_hqr_halfplane_k_half():
    member = build("shifted-halfplane", {"c": 1.0, "k": 0.5}, r_max=0.99)
    rep = check_zygmund_hqr(member, 0.99)
    assert rep.margin >= -rep.error_budget and rep.verdict == "pass"
    assert rep.metadata["K_used"] == 3.0
    assert rep.metadata["k_hat"] == pytest.approx(0.5, abs=1e-12)


def test_zygmund_hqr_hypotheses():
    with pytest.raises(HypothesisViolated) as exc:
        check_zygmund_hqr(HarmonicMap(S(0.5, 0.1)), 0.5)
    assert exc.value.hypothesis == "u_ge_1"
    with pytest.raises(HypothesisViolated) as exc:
        check_zygmund_hqr(HarmonicMap(S(2 + 1j, 0.1)), 0.5)
    assert exc.value.hypothesis == "v0_zero"
    with pytest.raises(HypothesisViolated) as exc:
        check_zygmund_hqr(HarmonicMap(S(3, 1), S(0, 1.2)), 0.5)
    assert exc.value.hypothesis == "quasiregular"


def test_zygmund_hqr_experimental_is_report_only():
    member = build("shifted-halfplane", {"c": 0.5, "k": 0.2}, r_max=0.9, experimental=True)
    rep = check_zygmund_hqr(member, 0.9, experimental=True)
    assert rep.verdict == "report-only" and rep.metadata["experimental"] == 1.0


def test_negation_symmetry():
    for fid in ("shifted-halfplane", "variable-dilatation", "poisson"):
        params = {"alpha": 0.5} if fid == "poisson" else {"k": 0.2}
        pos = check_zygmund_hqr(build(fid, params, r_max=0.9), 0.9)
        neg = check_zygmund_hqr(build("negative-" + fid, params, r_max=0.9), 0.9)
        assert abs(pos.lhs - neg.lhs) <= 1e-10 and abs(pos.rhs - neg.rhs) <= 1e-10


def test_zygmund_classical_examples():
    rep = check_zygmund_classical(S(0), 0.5)
    assert rep.lhs == 0 and rep.rhs == pytest.approx(3 * math.e) and rep.verdict == "pass"
    r = 0.7
    rep = check_zygmund_classical(S(1, 1), r)
    # |sin| has kinks, so the trapezoidal error is O(M^-2) and sits inside the doubling delta
    assert abs(rep.lhs - 2 * r / math.pi) <= rep.metadata["doubling_delta"]
    assert rep.verdict == "pass"
    member = build("poisson", {"alpha": 0.9, "c": 1.0}, r_max=0.99)
    rep = check_zygmund_classical(member, 0.99)
    assert rep.verdict == "pass"
    assert ZYGMUND_CONSTANT == 3 * math.e


def test_riesz_ratio_examples():
    rng = np.random.default_rng(3)
    c = rng.normal(size=30) + 1j * rng.normal(size=30)
    c[0] = 0
    rep = check_riesz_ratio(CoefficientSeries(c), 2, 0.8)
    assert rep.margin <= 1 + 1e-9 and rep.verdict == "report-only"
    r = 0.6
    rep = check_riesz_ratio(S(3, 1), 2, r)
    m2u = math.sqrt(9 + r * r / 2)
    assert rep.margin == pytest.approx(math.sqrt(1 - 9 / m2u**2), abs=1e-9)
    rep = check_riesz_ratio(build("shifted-halfplane", r_max=0.9), 1.5, 0.9)
    assert math.isfinite(rep.margin)
    for p in (1.0, math.inf):
        with pytest.raises(ValueError):
            check_riesz_ratio(S(3, 1), p, 0.5)


def test_riesz_identity_strict():
    rep = check_riesz_identity(build("shifted-halfplane", {"k": 0.5}, r_max=0.99), 0.99)
    assert rep.verdict == "pass" and abs(rep.margin) <= rep.error_budget


def test_kolmogorov_classical_examples():
    rep = check_kolmogorov_classical(S(1), 0.5, 0.9)
    assert rep.margin == 0.0
    member = build("shifted-halfplane", r_max=0.999)
    ratios = [check_kolmogorov_classical(member, 0.5, r).margin for r in (0.5, 0.9, 0.99, 0.999)]
    assert all(math.isfinite(x) for x in ratios) and max(ratios) < 10
    assert math.isfinite(check_kolmogorov_classical(member, 0.9, 0.9).margin)
    with pytest.raises(ValueError):
        check_kolmogorov_classical(member, 1.0, 0.5)


def test_kalaj_constants():
    sec, cos = kalaj_constants(0.5)
    assert abs(sec - math.sqrt(2)) <= 4e-16
    assert abs(cos - 1 / math.sqrt(2)) <= 2e-16


def test_kalaj_reduces_for_analytic_maps():
    member = build("shifted-halfplane", {"k": 0.0}, r_max=0.9)
    first, second = check_kolmogorov_hqr(member, 0.5, 0.9)
    d = circle_data(member.map, 0.9, 2 * 8192)
    assert first.rhs == pytest.approx(math.sqrt(2) * integral_mean(d.u, 1) ** 0.5, rel=1e-12)
    assert first.verdict == second.verdict == "pass"


def test_kalaj_half_plane_k02():
    member = build("shifted-halfplane", {"k": 0.2}, r_max=0.9)
    for rep in check_kolmogorov_hqr(member, 0.5, 0.9):
        assert rep.margin >= -rep.error_budget


def test_kalaj_hypotheses():
    with pytest.raises(HypothesisViolated):
        check_kolmogorov_hqr(build("imaginary-halfplane", r_max=0.9), 0.5, 0.9)
    with pytest.raises(ValueError):
        check_kolmogorov_hqr(build("shifted-halfplane"), 1.5, 0.5)


def test_liu_zhu_examples():
    rng = np.random.default_rng(4)
    c = rng.normal(size=20) * 0.01
    c[0] = 0.0
    # u >= 0 with u(0) = 0 forces u = 0, so the Parseval bound is exercised through the Riesz ratio
    rep = check_riesz_ratio(CoefficientSeries(c), 2, 0.5)
    assert rep.margin <= 1 + 1e-9
    rep = check_liu_zhu_ratio(build("shifted-halfplane", {"k": 0.5}, r_max=0.9), 2, 0.9)
    assert math.isfinite(rep.margin) and rep.metadata["K_hat"] == pytest.approx(3.0)
    rep = check_liu_zhu_ratio(build("shifted-halfplane", {"k": 0.2}, r_max=0.9), 1.5, 0.9)
    assert rep.verdict == "report-only"


def test_lemma_F_examples():
    h = S(2j, 1j, 0.5j)
    rep = check_lemma_F(HarmonicMap(h), [0.3, 0.6])
    assert rep.lhs == rep.rhs
    member = build("imaginary-halfplane", {"c": 2.0, "k": 0.3}, r_max=0.99)
    rep = check_lemma_F(member, [0.5, 0.9, 0.99])
    assert rep.metadata["min_abs_im_h"] >= 2 - 1e-9
    assert rep.verdict == "report-only"
    with pytest.raises(HypothesisViolated):
        check_lemma_F(HarmonicMap(S(0, 1)), [0.5])


def test_converse_examples():
    rep = check_converse_bound(HarmonicMap(S(1)), 0.5)
    assert rep.lhs == 0 and rep.rhs == pytest.approx(math.pi / 2) and rep.verdict == "pass"
    assert check_converse_bound(HarmonicMap(S(2, 1)), 0.5).verdict == "pass"
    member = build("quadrant", {"c": 1.0, "k": 0.2}, r_max=0.99)
    rep = check_converse_bound(member, 0.99)
    assert rep.verdict == "pass" and math.isfinite(rep.metadata["h0_log_h0"])
    with pytest.raises(HypothesisViolated):
        check_converse_bound(HarmonicMap(S(0.5, 0.1)), 0.5)


def test_hl_sum_examples():
    cutoff = 10_000
    a = make_coefficient_family("harmonic_tail", cutoff)
    partial, tail = hl_coefficient_sum(a, 2.0, cutoff, lambda x: (x + 1) ** -2)
    assert 0 <= math.pi**2 / 6 - partial <= tail
    assert tail == pytest.approx(1 / (cutoff + 1), rel=1e-9)
    for p in (0.5, 1, 2):
        assert hl_coefficient_sum(S(1), p, 0) == (1.0, None)
    g = make_coefficient_family("geometric", 200, 0.5)
    partial, _ = hl_coefficient_sum(g, 1.0, 100)
    # sum rho^n / (n+1) = log 2 for rho = 1/2; tail beyond 100 is at most sum rho^n
    assert 0 <= math.log(2) / 0.5 - partial <= 0.5**101 / 0.5


def test_hl_sum_report():
    rep = check_hl_sum(build("harmonic-tail", degree=10_000), 2.0, 10_000)
    assert rep.verdict == "report-only"
    # h and g share a_n = 1/(n+1) except b_0 = 0
    assert rep.lhs <= 2 * math.pi**2 / 6 - 1 <= rep.rhs


def test_dhr3_iii_examples():
    member = build("log-damped", degree=10_000)
    rep = check_dhr3_iii(member, 10_000)
    assert rep.metadata["cauchy"] == 1.0
    # b_0 = 0; a_n = b_n = 0 beyond n = 0 leaves a_0
    rep = check_dhr3_iii(HarmonicMap(S(1.5, 0, 0), S(0, 0, 0)), 2)
    assert rep.lhs == 1.5
    rep = check_dhr3_iii(build("harmonic-tail", degree=10_000), 10_000)
    assert rep.lhs <= 2 * math.pi**2 / 6 - 1 <= rep.rhs
    with pytest.raises(HypothesisViolated):
        check_dhr3_iii(HarmonicMap(S(1, 2)), 1)


def test_report_serialization():
    spec = FamilySpec("custom", {"b": 2.0, "a": 1.0}, 10)
    rep = InequalityReport("converse", spec, 0.5, None, 1.0, 2.0, 1.0, 1e-12, "pass", {"z": math.nan})
    data = json.loads(to_json([rep]))
    assert tuple(data[0]) == JSON_FIELDS
    assert data[0]["params"] == {"a": 1.0, "b": 2.0} and data[0]["metadata"]["z"] is None
    head, row = to_csv([rep]).splitlines()
    assert tuple(head.split(",")) == CSV_COLUMNS
    assert row.startswith("converse,custom,a=1.0;b=2.0,0.5,,1.0,2.0,1.0,1e-12,pass")
    with pytest.raises(ValueError):
        InequalityReport("x", spec, 0.5, None, 1, 1, 0, 0, "maybe")


def test_reproducible_bit_for_bit():
    member = build("variable-dilatation", {"k": 0.5, "m": 3.0}, r_max=0.9)
    a = check_zygmund_hqr(member, 0.9)
    b = check_zygmund_hqr(build("variable-dilatation", {"k": 0.5, "m": 3.0}, r_max=0.9), 0.9)
    assert (a.lhs, a.rhs) == (b.lhs, b.rhs)


def test_suite_small_grid_passes():
    fams = [("shifted-halfplane", {"c": 1.0, "k": 0.5}), ("log-damped", {})]
    reports = run_suite(radii=(0.5, 0.9), families=fams)
    assert reports and not strict_failures(reports)
    assert {r.theorem_id for r in reports} >= {"zygmund-hqr", "kalaj-1", "converse", "dhr3-iii"}
