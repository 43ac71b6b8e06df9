"""Ground-truth battery: known (process, potential) pairs, the identities their
verdicts must satisfy, and the inequality checks that apply to them.

Every identity compares two independently computed memberships. A comparison
is ``ok`` when both sides agree, ``violation`` when both are decided and
disagree, and ``unresolved`` when either side is Inconclusive.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import kato
from . import levy_model as lm
from . import potentials as P
from .classifier import classify, hitting_transform
from .errors import LevyKatoError
from .levy_model import Product
from .potential import harnack_check, potential_density


@dataclass
class Case:
    name: str
    spec: object
    q: object
    K: str
    calK: str
    numeric: bool = True


def kato_cases():
    """Pairs with their known memberships in the time class and the space class."""
    bm, cp = lm.brownian(), lm.cp([1.0], [1.0])
    sub = lm.stable_subordinator(0.5)
    return [
        Case("brownian+comb", bm, P.comb(), "In", "Out"),
        Case("brownian+power0.5", bm, P.power(0.5), "In", "In"),
        Case("brownian+constant", bm, P.constant(1.0), "In", "In"),
        Case("brownian+power1", bm, P.power(1.0), "Out", "Out"),
        Case("stable0.5+comb", lm.stable(0.5), P.comb(), "Out", "Out"),
        Case("stable0.5+indicator", lm.stable(0.5), P.indicator(0.0, 1.0), "In", "In"),
        Case("stable1.5+comb", lm.stable(1.5), P.comb(), "In", "Out"),
        Case("drift+log", lm.drift(1.0), P.log_singular(), "In", "In"),
        Case("drift+comb", lm.drift(1.0), P.comb(), "Out", "Out"),
        Case("cp+constant", cp, P.constant(1.0), "In", "Out"),
        Case("cp+power0.5", cp, P.power(0.5), "Out", "Out"),
        Case("subordinator0.5+power0.25", sub, P.power(0.25, side="right"), "In", "In"),
        Case("subordinator0.5+power0.75", sub, P.power(0.75, side="right"), "Out", "Out"),
        Case("brownian x cp+comb", Product([bm, cp]), P.comb(), "In", "Out", numeric=False),
        Case("drift x cp+comb", Product([lm.drift(1.0), cp]), P.comb(), "Out", "Out", numeric=False),
        Case("stable0.5 x cp+indicator", Product([lm.stable(0.5), cp]), P.indicator(0.0, 1.0), "In", "In",
             numeric=False),
        Case("space_time+p0.5", lm.space_time(), kato.space_time_potential(0.5), "In", "In", numeric=False),
        Case("space_time+p1", lm.space_time(), kato.space_time_potential(1.0), "Out", "Out", numeric=False),
        Case("brownian3d+power1", lm.brownian(dimension=3), P.aizenman_simon(1.0, 3), "In", "In", numeric=False),
        Case("brownian3d+power2", lm.brownian(dimension=3), P.aizenman_simon(2.0, 3), "Out", "Out",
             numeric=False),
    ]


def classification_cases():
    """``(name, spec, expected label)``; the space-time pair expects a label without regular points."""
    return [
        ("brownian", lm.brownian(), "C"),
        ("stable0.5", lm.stable(0.5), "A"),
        ("stable1.0", lm.stable(1.0), "A"),
        ("stable1.5", lm.stable(1.5), "C"),
        ("drift_plus_jumps", lm.drift_plus_jumps(), "B"),
        ("cp", lm.cp([1.0], [1.0]), "CompoundPoisson"),
        ("dyadic_jumps_1.5", lm.dyadic_jumps(1.5), "C"),
        ("dyadic_jumps_0.75", lm.dyadic_jumps(0.75), "A"),
        ("space_time", lm.space_time(), "not_regular"),
    ]


NOT_REGULAR = ("A", "Aprime", "D_gt1_H0")


def run_classification():
    rows = []
    for name, spec, want in classification_cases():
        try:
            got = classify(spec).label
        except LevyKatoError as exc:
            got = f"error: {exc}"
        ok = got in NOT_REGULAR if want == "not_regular" else got == want
        rows.append({"name": name, "expected": want, "label": got, "ok": ok})
    return rows


def compare(name, lhs, rhs):
    if "Inconclusive" in (lhs, rhs):
        status = "unresolved"
    else:
        status = "ok" if lhs == rhs else "violation"
    return {"identity": name, "lhs": lhs, "rhs": rhs, "status": status}


def _within(name, k, c):
    # the space class is contained in the time class
    if "Inconclusive" in (k, c):
        return {"identity": name, "lhs": c, "rhs": k, "status": "unresolved"}
    return {"identity": name, "lhs": c, "rhs": k, "status": "violation" if (c == "In" and k == "Out") else "ok"}


@dataclass
class PairResult:
    case: str
    label: str
    verdict: object
    profiles: dict = field(default_factory=dict)
    identities: list = field(default_factory=list)
    seconds: float = 0.0

    def to_dict(self):
        return {"case": self.case, "label": self.label, "verdict": self.verdict.to_dict(),
                "numeric": {k: p.to_dict() for k, p in self.profiles.items()},
                "identities": self.identities}


def run_pair(case: Case, config=None):
    cfg = config or kato.DEFAULT
    t0 = time.perf_counter()
    v = kato.verdict(case.q, case.spec, cfg)
    ids = [compare("expected_time_class", v.membership_K, case.K),
           compare("expected_space_class", v.membership_calK, case.calK),
           _within("space_class_within_time_class", v.membership_K, v.membership_calK)]
    if v.label in ("A", "B", "Aprime", "Bprime"):
        ids.append(compare("classes_equal_without_regular_points", v.membership_K, v.membership_calK))
    profiles = {}
    if case.numeric:
        s, q = case.spec, case.q
        profiles["time"] = kato.eval_time_condition(q, s, config=cfg)
        profiles["timespace"] = kato.eval_timespace_condition(q, s, config=cfg)
        profiles["space_lam1"] = kato.eval_space_condition(q, s, cfg.lam, config=cfg)
        for lam in cfg.lam_pair:
            profiles[f"space_lam{lam:g}"] = kato.eval_space_condition(q, s, lam, config=cfg)
        for t in cfg.trunc_times:
            profiles[f"trunc_t{t:g}"] = kato.eval_trunc_space_condition(q, s, cfg.trunc_lam, t, config=cfg)
        m = {k: p.membership for k, p in profiles.items()}
        ids.append(compare("time_iff_timespace", m["time"], m["timespace"]))
        for t in cfg.trunc_times:
            ids.append(compare(f"space_iff_truncated_space_t{t:g}", m["space_lam1"], m[f"trunc_t{t:g}"]))
        for lam in cfg.lam_pair:
            ids.append(compare(f"space_lambda_robust_{lam:g}", m["space_lam1"], m[f"space_lam{lam:g}"]))
        ids.append(_within("numeric_space_within_time", m["time"], m["space_lam1"]))
        if v.label in ("A", "B"):
            ids.append(compare("numeric_classes_equal", m["time"], m["space_lam1"]))
        ids.append(compare("time_route_agrees", m["time"], v.membership_K))
        ids.append(compare("space_route_agrees", m["space_lam1"], v.membership_calK))
    if not v.lattice_ok:
        ids.append({"identity": "lattice", "lhs": v.membership_K, "rhs": v.membership_calK,
                    "status": "violation"})
    return PairResult(case.name, v.label, v, profiles, ids, time.perf_counter() - t0)


def run_kato_battery(cases=None, config=None):
    results = [run_pair(c, config) for c in (cases or kato_cases())]
    counts = {"ok": 0, "violation": 0, "unresolved": 0}
    for r in results:
        for i in r.identities:
            counts[i["status"]] += 1
    labels = sorted({r.label for r in results})
    conditions = sorted({p.condition for r in results for p in
                         list(r.profiles.values()) + list(r.verdict.profiles.values())})
    return {"pairs": [r.to_dict() for r in results], "counts": counts, "labels_covered": labels,
            "conditions_covered": conditions, "n_pairs": len(results)}


# --------------------------------------------------------------------------
# inequality checks
# --------------------------------------------------------------------------

def _report(kind, case, rep):
    return {"check": kind, "case": case, "holds": bool(rep.holds), "slack": rep.slack,
            "details": rep.details}


def run_inequalities(config=None):
    """Bound and sandwich checks on the line pairs, Harnack on regular-point kernels."""
    cfg = config or kato.DEFAULT
    out = []
    for c in kato_cases():
        if not c.numeric:
            continue
        unimodal = isinstance(c.spec, lm.Triplet) and c.spec.symmetric \
            and isinstance(c.spec.nu, (lm.ZeroMeasure, lm.StableMeasure))
        if unimodal:
            for t, r in ((0.05, 0.1), (0.01, 0.05)):
                rep = kato.unimodal_bound_check(c.q, c.spec, t, r, t0=1.0, config=cfg)
                if math.isfinite(rep.details["lhs"]) and math.isfinite(rep.details["rhs"]):
                    out.append(_report("unimodal_time_bound", c.name, rep))
        for lam, t in ((1.0, math.inf), (1.0, 2.0), (2.0, math.inf)):
            rep = kato.sandwich_check(c.q, c.spec, lam, t, config=cfg)
            if all(math.isfinite(rep.details[k]) for k in ("lower", "middle", "upper")):
                out.append(_report("resolvent_sandwich", c.name, rep))
    grid = np.linspace(-4.0, 4.0, 801)
    for name, spec in (("brownian", lm.brownian()), ("stable1.5", lm.stable(1.5)),
                       ("dyadic_jumps_1.5", lm.dyadic_jumps(1.5))):
        cls = classify(spec)
        if cls.label != "C":
            continue
        kern = potential_density(spec, 1.0, grid)
        rep = harnack_check(kern, hitting_transform(kern, cls))
        out.append(_report("harnack", name, rep))
    return out


def run_all(config=None):
    cls = run_classification()
    kb = run_kato_battery(config=config)
    ineq = run_inequalities(config)
    ok = all(r["ok"] for r in cls) and kb["counts"]["violation"] == 0 and kb["counts"]["unresolved"] == 0 \
        and all(r["holds"] for r in ineq)
    return {"classification": cls, "kato": kb, "inequalities": ineq, "passed": bool(ok)}
