"""The standard verification grid: families x radii x exponents, dispatched on family guarantees."""

from __future__ import annotations

from . import verify, zoo
from .errors import HypothesisViolated
from .report import InequalityReport, sort_reports

RADII = (0.5, 0.9, 0.99)
KS = (0.0, 0.2, 0.5)
MS = (0, 1, 3)
ALPHAS = (0.5, 0.9)
KALAJ_PS = (0.3, 0.5, 0.7)
KOLMOGOROV_PS = (0.3, 0.5, 0.7)
RIESZ_PS = (1.5, 3.0)
LIU_ZHU_PS = (1.5, 2.0)
HL_PS = (0.5, 1.5, 2.0)
COEFF_CUTOFF = 10_000


def map_family_grid(ks=KS, ms=MS, alphas=ALPHAS):
    """(family_id, params) pairs of the map families on the standard grid."""
    cells = []
    for k in ks:
        cells.append(("shifted-halfplane", {"c": 1.0, "k": k}))
        cells.append(("negative-shifted-halfplane", {"c": 1.0, "k": k}))
        cells.append(("quadrant", {"c": 1.0, "k": k}))
        cells.append(("imaginary-halfplane", {"c": 2.0, "k": k}))
        for m in ms:
            cells.append(("variable-dilatation", {"c": 1.0, "k": k, "m": float(m)}))
            cells.append(("negative-variable-dilatation", {"c": 1.0, "k": k, "m": float(m)}))
    for a in alphas:
        cells.append(("poisson", {"alpha": a, "c": 1.0}))
        cells.append(("negative-poisson", {"alpha": a, "c": 1.0}))
    return cells


def coefficient_family_grid():
    return [("harmonic-tail", {}), ("log-damped", {}), ("geometric", {"rho": 0.5})]


def applicable(theorem_id: str, member: zoo.ZooMember, r: float | None = None) -> bool:
    """Whether the member's guarantees cover the theorem's hypotheses (at radius r)."""
    if member.decreasing:
        return theorem_id in ("hl-sum", "dhr3-iii")
    if theorem_id in ("hl-sum", "dhr3-iii"):
        return False
    covered = r is None or r <= member.guarantee_radius
    if theorem_id == "zygmund-hqr":
        big = (member.u_lower is not None and member.u_lower >= 1) or (
            member.u_upper is not None and member.u_upper <= -1)
        return big and member.v0_zero and member.k is not None and covered
    if theorem_id in ("kalaj-1", "kalaj-2"):
        return (member.u_lower is not None and member.u_lower > 0 and member.v0_zero
                and member.k is not None and covered)
    if theorem_id == "liu-zhu":
        return member.u_lower is not None and member.u_lower >= 0 and member.v0_zero and covered
    if theorem_id == "converse":
        return member.u_lower is not None and member.u_lower >= 1 and covered
    if theorem_id == "lemma-f":
        return member.im_h_lower is not None and member.im_h_lower > 0
    return theorem_id in ("zygmund-classical", "riesz-p2", "riesz-ratio", "kolmogorov-classical")


def _violation_report(theorem_id, member, r, p, exc: HypothesisViolated) -> InequalityReport:
    # a zoo guarantee that does not survive sampling is itself a failure
    meta = member.metadata()
    meta["hypothesis_violated"] = 1.0
    meta[f"violated_{exc.hypothesis}"] = 1.0
    nan = float("nan")
    return InequalityReport(theorem_id, member.spec, r, p, nan, nan, nan, 0.0, "fail", meta)


def dispatch(theorem_id: str, subject, r: float | None, p: float | None = None,
             radii=RADII, experimental: bool = False, M: int | None = None) -> InequalityReport:
    """Run one checker; HypothesisViolated propagates."""
    if theorem_id == "zygmund-hqr":
        return verify.check_zygmund_hqr(subject, r, M, experimental=experimental)
    if theorem_id == "zygmund-classical":
        return verify.check_zygmund_classical(subject, r, M)
    if theorem_id == "riesz-p2":
        return verify.check_riesz_identity(subject, r, M)
    if theorem_id == "riesz-ratio":
        return verify.check_riesz_ratio(subject, p, r, M)
    if theorem_id == "kolmogorov-classical":
        return verify.check_kolmogorov_classical(subject, p, r, M)
    if theorem_id in ("kalaj-1", "kalaj-2"):
        first, second = verify.check_kolmogorov_hqr(subject, p, r, M)
        return first if theorem_id == "kalaj-1" else second
    if theorem_id == "liu-zhu":
        return verify.check_liu_zhu_ratio(subject, p, r, M)
    if theorem_id == "converse":
        return verify.check_converse_bound(subject, r, M)
    if theorem_id == "lemma-f":
        return verify.check_lemma_F(subject, radii, M)
    if theorem_id == "hl-sum":
        return verify.check_hl_sum(subject, p, COEFF_CUTOFF)
    if theorem_id == "dhr3-iii":
        return verify.check_dhr3_iii(subject, COEFF_CUTOFF)
    raise ValueError(f"unknown theorem {theorem_id!r}; choose from {', '.join(verify.THEOREMS)}")


def check_member(theorem_id: str, member: zoo.ZooMember, r: float | None, p: float | None = None,
                 radii=RADII, experimental: bool = False, M: int | None = None) -> list[InequalityReport]:
    try:
        return [dispatch(theorem_id, member, r, p, radii, experimental, M)]
    except HypothesisViolated as exc:
        return [_violation_report(theorem_id, member, r, p, exc)]


def exponents(theorem_id: str):
    return {
        "riesz-ratio": RIESZ_PS,
        "kolmogorov-classical": KOLMOGOROV_PS,
        "kalaj-1": KALAJ_PS,
        "kalaj-2": KALAJ_PS,
        "liu-zhu": LIU_ZHU_PS,
        "hl-sum": HL_PS,
    }.get(theorem_id, (None,))


def run_suite(theorems=None, radii=RADII, families=None, degree=None, M=None,
              experimental=False) -> list[InequalityReport]:
    """Run every requested theorem on every applicable member of the standard grid.

    ``families`` is a list of (family_id, params); by default the whole grid.
    Members are built per radius so that truncation tracks the radius.
    """
    theorems = list(verify.THEOREMS if theorems is None else theorems)
    radii = tuple(sorted(radii))
    if families is None:
        families = map_family_grid() + coefficient_family_grid()
    reports = []
    for fid, params in families:
        if fid in ("harmonic-tail", "log-damped", "geometric"):
            member = zoo.build(fid, params, degree=degree or COEFF_CUTOFF)
            for tid in theorems:
                if applicable(tid, member):
                    for p in exponents(tid):
                        reports += check_member(tid, member, None, p, M=M)
            continue
        if "lemma-f" in theorems:
            member = zoo.build(fid, params, r_max=radii[-1], degree=degree)
            if applicable("lemma-f", member):
                reports += check_member("lemma-f", member, radii[-1], radii=radii, M=M)
        for r in radii:
            member = zoo.build(fid, params, r_max=r, degree=degree)
            for tid in theorems:
                if tid == "lemma-f" or not applicable(tid, member, r):
                    continue
                for p in exponents(tid):
                    reports += check_member(tid, member, r, p, experimental=experimental, M=M)
    return sort_reports(reports)


def strict_failures(reports):
    return [r for r in reports if r.theorem_id in verify.STRICT and r.verdict != "pass"]
