"""Kato-class conditions for one-dimensional Levy processes.

Each condition is a profile: a supremum over starting points x of an
integral of ``|q|`` against a kernel, recorded along a parameter (time, ball
radius or discount rate) tending to its limit. The numeric limit rule turns
a profile into ``In``/``Out``/``Inconclusive``:

* ``zero``: the last three values decrease and the last one is below
  ``eps_rel`` times the first;
* ``positive``: the last three values agree to within ``plateau``
  (relative), or some value is infinite;
* otherwise inconclusive.

Integrals ``int K(z) |q|(x + z) dz`` are taken piece by piece. Every piece
of q is cut at the kernel's kinks and graded geometrically, with ratio 2 on
a ladder tied to the kernel's natural scale, towards the kinks and towards
the singular ends of q. Nodes are held as offsets from those anchor points,
so distances down to ``2^-70`` times the scale stay exact. Whether an
integrable singularity really is integrable is decided from the decay of the
contributions of the innermost dyadic panels.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate
from scipy.special import erf, erfc, exp1, gammainc, gammaincc
from scipy.special import gamma as gamma_fn

from . import kernels
from .classifier import classify, is_compound_poisson
from .errors import (DimensionUnsupported, NotUnimodal, SpecError, SupSearchExhausted)
from .levy_model import (AtomicMeasure, Decomposition, LaplaceExponent, Product, StableMeasure,
                         Subordinator, Triplet, ZeroMeasure)
from .potential import BoundReport
from .potentials import Potential
from .quadrature import dyadic_decay, gl_rule

LADDER = 2.0 ** np.arange(-70, 71)
GL_X, GL_W = gl_rule(8)

CONDITION_IDS = ("TimeSmall", "SpaceSmall", "TruncSpace", "TimeSpace", "ClosedForm", "UniformL1")


@dataclass(frozen=True)
class KatoConfig:
    """Defaults for profile grids, the sup search and the limit rule."""

    lam: float = 1.0
    lam_pair: tuple = (0.5, 2.0)
    trunc_times: tuple = (0.5, 2.0)
    trunc_lam: float = 1.0
    rho_max: float = 0.2
    r_max: float = 0.5
    per_decade: int = 1
    eps_rel: float = 1e-3
    plateau: float = 0.01
    window_points: int = 64
    top: int = 3
    refine_rounds: int = 2
    threads: int | None = None

    def __post_init__(self):
        positive = (self.lam, self.trunc_lam, self.rho_max, self.r_max, self.eps_rel, self.plateau)
        if min(positive) <= 0 or min(self.lam_pair) <= 0 or min(self.trunc_times) <= 0:
            raise SpecError("tolerances, rates and grid bounds must be positive")
        if self.per_decade < 1 or self.window_points < 2 or self.top < 1:
            raise SpecError("grid sizes must be positive")


DEFAULT = KatoConfig()


def _n_threads(cfg):
    if cfg.threads:
        return max(1, int(cfg.threads))
    env = os.environ.get("LEVY_KATO_THREADS")
    return max(1, int(env)) if env and env.isdigit() else 1


def _map(fn, items, cfg):
    n = _n_threads(cfg)
    if n == 1 or len(items) < 2:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


# --------------------------------------------------------------------------
# profiles and the limit rule
# --------------------------------------------------------------------------

def _num(v):
    v = float(v)
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    if math.isnan(v):
        return "nan"
    return v


@dataclass
class Profile:
    condition: str
    parameter: str
    params: list
    values: list
    argmax: list
    decision: str
    meta: dict = field(default_factory=dict)

    @property
    def membership(self):
        return {"zero": "In", "positive": "Out", "finite": "In", "infinite": "Out"}.get(self.decision,
                                                                                       "Inconclusive")

    def to_dict(self):
        return {"condition": self.condition, "parameter": self.parameter,
                "params": [_num(p) for p in self.params], "values": [_num(v) for v in self.values],
                "argmax": [None if a is None else _num(a) for a in self.argmax],
                "decision": self.decision, "membership": self.membership,
                "meta": {k: (_num(v) if isinstance(v, float) else v) for k, v in self.meta.items()}}


def limit_decision(values, eps_rel=1e-3, plateau=0.01):
    """``zero``, ``positive`` or ``inconclusive`` for a profile ordered towards the limit."""
    v = np.asarray(values, dtype=float)
    if v.size == 0 or np.any(np.isnan(v)):
        return "inconclusive"
    if np.any(np.isinf(v)):
        return "positive"
    if np.all(v == 0):
        return "zero"
    if v.size < 3:
        return "inconclusive"
    last = v[-3:]
    if last[1] <= last[0] and last[2] <= last[1] and last[2] < last[0] and v[-1] < eps_rel * v[0]:
        return "zero"
    top = float(np.max(last))
    if top > 0 and float(np.max(last) - np.min(last)) <= plateau * top:
        return "positive"
    return "inconclusive"


def _profile(condition, parameter, params, results, cfg, meta=None):
    vals = [r[0] for r in results]
    args = [r[1] for r in results]
    return Profile(condition, parameter, [float(p) for p in params], [float(v) for v in vals],
                   args, limit_decision(vals, cfg.eps_rel, cfg.plateau), dict(meta or {}))


# --------------------------------------------------------------------------
# parameter grids
# --------------------------------------------------------------------------

def rho_min(q: Potential):
    """Smallest scale resolved for q.

    Potentials built from pieces narrower than ``1e-9`` (the truncated comb)
    are only meaningful at scales well above their finest piece, where the
    truncation is invisible.
    """
    w = q.min_width()
    return max(1e-14, 1e5 * w) if w < 1e-9 else 1e-14


def resolved_bounded(q: Potential):
    """Bounded without structure below the resolution floor.

    The truncated comb has a finite sup but stands in for the infinite comb,
    so the shortcuts for bounded potentials do not apply to it.
    """
    return q.bounded and q.min_width() >= 1e-9


def scale_grid(q, top, cfg=DEFAULT):
    lo = rho_min(q)
    if lo >= top:
        raise SpecError("potential too fine for the configured grid")
    n = int(math.ceil(math.log10(top / lo) * cfg.per_decade)) + 1
    return np.geomspace(top, lo, n)


def time_grid(spec, q, cfg=DEFAULT):
    """Times whose natural spatial scale runs over ``scale_grid``."""
    rhos = scale_grid(q, cfg.rho_max, cfg)
    return np.array([1.0 / abs(spec.psi_scalar(1.0 / r)) for r in rhos])


def radius_grid(q, cfg=DEFAULT):
    return scale_grid(q, cfg.r_max, cfg)


def weight_grid():
    return 10.0 ** -np.arange(0, 17, dtype=float)


# --------------------------------------------------------------------------
# integration of |q| against a kernel
# --------------------------------------------------------------------------

class _QData:
    """Per-potential arrays for the vectorised fast path."""

    def __init__(self, q: Potential):
        self.q = q
        simple = [i for i, pc in enumerate(q.pieces) if pc.kind in ("const", "linear")]
        self.simple = np.array(simple, dtype=int)
        self.A = np.array([q.pieces[i].a for i in simple])
        self.B = np.array([q.pieces[i].b for i in simple])
        self.C = np.array([q.pieces[i].c for i in simple])
        self.S = np.array([q.pieces[i].slope if q.pieces[i].kind == "linear" else 0.0 for i in simple])
        self.other = [pc for i, pc in enumerate(q.pieces) if i not in set(simple)]
        self.simple_pieces = [q.pieces[i] for i in simple]


_QCACHE: dict = {}


def _qdata(q):
    key = id(q)
    hit = _QCACHE.get(key)
    if hit is None or hit.q is not q:
        hit = _QData(q)
        _QCACHE[key] = hit
    return hit


def _piece_at(pc, x, base, off):
    """``|q|`` of one piece at ``y = x + base + off`` (interior points only)."""
    if pc.kind == "const":
        return np.full(off.shape, pc.c)
    if pc.kind == "linear":
        return pc.c + pc.slope * ((base - (pc.a - x)) + off)
    if pc.kind in ("power", "log"):
        d = np.abs((base - (pc.s - x)) + off)
        with np.errstate(divide="ignore"):
            if pc.kind == "power":
                return pc.c * d ** (-pc.p)
            return -pc.c * np.log(d)
    return np.abs(np.asarray(pc.fn(x + base + off), dtype=float))


def _nearest_kink(kinks, u, v):
    d = np.maximum(np.maximum(u - kinks, kinks - v), 0.0)
    return float(kinks[int(np.argmin(d))])


def _side_integral(kern, pc, x, p, side, da, db, special, scale):
    """Integral over ``z = p + side*d``, ``d in (da, db)``; graded from d = 0."""
    if db <= da:
        return 0.0
    lad = scale * LADDER
    if special:
        start = lad[0]
        if start >= db:
            return 0.0
        edges = np.concatenate([[start], lad[(lad > start) & (lad < db)], [db]])
    else:
        edges = np.concatenate([[da], lad[(lad > da) & (lad < db)], [db]])
    edges = np.unique(edges)
    a, b = edges[:-1], edges[1:]
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    d = (mid[:, None] + half[:, None] * GL_X[None, :]).ravel()
    off = side * d
    vals = kern(p + off) * _piece_at(pc, x, p, off)
    contrib = (vals.reshape(a.size, GL_X.size) * GL_W[None, :]).sum(axis=1) * half
    total = float(contrib.sum())
    if special and contrib.size >= 3:
        verdict = dyadic_decay(contrib[:16][::-1], window=8, ratio_max=0.98, growth_min=0.995)
        if verdict.summable is False:
            return math.inf
        total += verdict.tail_estimate
    return total


def _segment(kern, pc, x, u, v, su, sv, kinks, scale):
    near = _nearest_kink(kinks, u, v)
    special = {}
    if su:
        special[u] = True
    if sv:
        special[v] = True
    anchors = sorted(set(list(special) + [near]))
    total = 0.0
    for i, p in enumerate(anchors):
        r_lo = u if i == 0 else max(u, 0.5 * (anchors[i - 1] + p))
        r_hi = v if i == len(anchors) - 1 else min(v, 0.5 * (p + anchors[i + 1]))
        if r_hi <= r_lo:
            continue
        sp = special.get(p, False)
        lo_off, hi_off = r_lo - p, r_hi - p
        # right of p: distances (max(lo_off, 0), hi_off); left: (max(-hi_off, 0), -lo_off)
        for side, da, db in ((1.0, max(lo_off, 0.0), hi_off), (-1.0, max(-hi_off, 0.0), -lo_off)):
            if db <= da:
                continue
            total += _side_integral(kern, pc, x, p, side, da, db, sp and da == 0.0, scale)
            if math.isinf(total):
                return total
    return total


def integrate_kernel(kern, q: Potential, x, lo=-math.inf, hi=math.inf):
    """``int_lo^hi K(z) |q|(x + z) dz``."""
    kinks = np.array(sorted(kern.kinks), dtype=float)
    scale = float(kern.scale)
    reach = scale * LADDER[-1]
    lo = max(lo, float(kinks[0]) - reach)
    hi = min(hi, float(kinks[-1]) + reach)
    if not lo < hi:
        return 0.0
    kset = set(kinks.tolist())
    qd = _qdata(q)
    total = 0.0
    general = list(qd.other)
    if qd.simple.size:
        a = np.maximum(qd.A - x, lo)
        b = np.minimum(qd.B - x, hi)
        ok = b > a
        dist = np.min(np.maximum(np.maximum(a[:, None] - kinks[None, :], kinks[None, :] - b[:, None]), 0.0),
                      axis=1)
        fast = ok & (dist > 4.0 * (b - a))
        if fast.any():
            fa, fb = a[fast], b[fast]
            half = 0.5 * (fb - fa)
            mid = 0.5 * (fb + fa)
            z = mid[:, None] + half[:, None] * GL_X[None, :]
            qv = qd.C[fast][:, None] + qd.S[fast][:, None] * ((z + x) - qd.A[fast][:, None])
            kv = kern(z.ravel()).reshape(z.shape)
            total += float(((kv * qv) * GL_W[None, :]).sum(axis=1).dot(half))
        general += [qd.simple_pieces[i] for i in np.nonzero(ok & ~fast)[0]]
    for pc in general:
        pa, pb = pc.a - x, pc.b - x
        u, v = max(pa, lo), min(pb, hi)
        if not u < v:
            continue
        sing = pc.singular_points
        su0 = pa >= lo and pc.a in sing
        sv0 = pb <= hi and pc.b in sing
        cuts = [u] + [k for k in kinks.tolist() if u < k < v] + [v]
        n = len(cuts) - 1
        for i in range(n):
            s, e = cuts[i], cuts[i + 1]
            su = (su0 and i == 0) or s in kset
            sv = (sv0 and i == n - 1) or e in kset
            total += _segment(kern, pc, x, s, e, su, sv, kinks, scale)
            if math.isinf(total):
                return total
    return total


# --------------------------------------------------------------------------
# sup over starting points
# --------------------------------------------------------------------------

def _candidates(q, kinks, scale, radius, n_grid):
    feats = q.features()
    if feats.size == 0:
        return np.array([0.0]), None
    offs = [0.0, scale, -scale]
    if math.isfinite(radius):
        offs += [0.5 * radius, -0.5 * radius]
    c = (feats[:, None, None] - np.asarray(kinks)[None, :, None] - np.asarray(offs)[None, None, :]).ravel()
    w = 2.0 * max(scale, radius if math.isfinite(radius) else scale)
    grid = np.linspace(feats.min() - w, feats.max() + w, n_grid)
    return np.unique(np.concatenate([c, grid])), grid


def sup_search(F, q, kinks, scale, radius=math.inf, x_search=None, cfg=DEFAULT):
    """``(sup F, argmax)`` over structured candidates with local refinement."""
    if x_search is not None:
        xs = np.unique(np.asarray(x_search, dtype=float))
        grid = None
    else:
        xs, grid = _candidates(q, kinks, scale, radius, cfg.window_points)
    vals = np.array([F(x) for x in xs])
    if np.any(np.isinf(vals)):
        i = int(np.argmax(np.isinf(vals)))
        return math.inf, float(xs[i])
    best_x = float(xs[int(np.argmax(vals))])
    best = float(np.max(vals))
    if x_search is None and q.features().size:
        h = 0.5 * min(scale, radius) if math.isfinite(radius) else 0.5 * scale
        order = np.argsort(vals)[::-1][:cfg.top]
        starts = [float(xs[i]) for i in order]
        for _ in range(cfg.refine_rounds):
            nxt = []
            for c in starts:
                loc = c + np.linspace(-h, h, 9)
                lv = np.array([F(y) for y in loc])
                if np.any(np.isinf(lv)):
                    return math.inf, float(loc[int(np.argmax(np.isinf(lv)))])
                j = int(np.argmax(lv))
                nxt.append(float(loc[j]))
                if lv[j] > best:
                    best, best_x = float(lv[j]), float(loc[j])
            starts = nxt
            h *= 0.25
        if grid is not None and best_x in (float(grid[0]), float(grid[-1])):
            step = grid[1] - grid[0]
            beyond = best_x - step if best_x == float(grid[0]) else best_x + step
            if F(beyond) > best * (1 + 1e-9):
                raise SupSearchExhausted(f"supremum still increasing at the search boundary x={best_x:.6g}")
    return best, best_x


def _check_line(q, spec):
    if q.dimension != 1:
        raise SpecError("line conditions need a one-dimensional potential")
    if spec.dimension != 1:
        raise SpecError("line conditions need a one-dimensional spec")


def _kernel_sup(kern, q, lo, hi, x_search, cfg):
    radius = max(abs(lo), abs(hi))
    return sup_search(lambda x: integrate_kernel(kern, q, x, lo, hi), q, kern.kinks, kern.scale,
                      radius, x_search, cfg)


# --------------------------------------------------------------------------
# compound Poisson closed forms
# --------------------------------------------------------------------------

def _cp_parts(spec):
    if not (isinstance(spec, Triplet) and isinstance(spec.nu, AtomicMeasure) and spec.dimension == 1):
        raise SpecError("closed-form compound Poisson profiles need atomic jumps on the line")
    locs = spec.nu.locations[:, 0]
    masses = spec.nu.masses
    return locs, masses / masses.sum(), float(masses.sum())


def cp_occupation(spec, lam, t, nmax=None):
    """Atoms ``s -> int_0^t e^{-lam u} P(X_u = s) du`` of a compound Poisson process."""
    locs, probs, rate = _cp_parts(spec)
    total = (1.0 - math.exp(-lam * t)) / lam if lam > 0 and math.isfinite(t) else (
        1.0 / lam if lam > 0 else t)
    n_top = nmax or 400
    n = np.arange(n_top + 1)
    with np.errstate(over="ignore", under="ignore"):
        logw = n * math.log(rate) - (n + 1) * math.log(lam + rate)
        w = np.exp(logw)
        if math.isfinite(t):
            w = w * gammainc(n + 1, (lam + rate) * t)
    csum = np.cumsum(w)
    stop = int(np.searchsorted(csum, total * (1 - 1e-13))) + 1
    stop = min(stop, n_top + 1)
    dist = {0.0: 1.0}
    atoms: dict = {}
    for k in range(stop):
        for s, pr in dist.items():
            atoms[s] = atoms.get(s, 0.0) + w[k] * pr
        nxt: dict = {}
        for s, pr in dist.items():
            for loc, pj in zip(locs, probs):
                key = round(s + loc, 12)
                nxt[key] = nxt.get(key, 0.0) + pr * pj
        dist = {s: p for s, p in nxt.items() if p > 1e-18}
    return atoms


def _cp_sup(q, atoms, radius):
    pts = [(s, m) for s, m in atoms.items() if abs(s) < radius and m > 0]
    if q.is_zero or not pts:
        return 0.0, 0.0
    if not q.bounded:
        return math.inf, pts[0][0]
    ys = []
    for pc in q.pieces:
        a = pc.a if math.isfinite(pc.a) else (pc.b - 1.0 if math.isfinite(pc.b) else -1.0)
        b = pc.b if math.isfinite(pc.b) else a + 2.0
        eps = 1e-9 * max(1.0, b - a)
        ys += [0.5 * (a + b), a + eps, b - eps]
    ys = np.array(ys)
    xs = np.unique((ys[:, None] - np.array([s for s, _ in pts])[None, :]).ravel())
    tot = np.zeros(xs.shape)
    for s, m in pts:
        tot += m * q(xs + s)
    i = int(np.argmax(tot))
    return float(tot[i]), float(xs[i])


def _cp_profile(condition, parameter, params, q, spec, lam_of, t_of, r_of, cfg):
    res = []
    for p in params:
        atoms = cp_occupation(spec, lam_of(p), t_of(p))
        res.append(_cp_sup(q, atoms, r_of(p)))
    return _profile(condition, parameter, params, res, cfg, {"route": "compound_poisson_closed_form"})


# --------------------------------------------------------------------------
# numeric conditions
# --------------------------------------------------------------------------

def eval_time_condition(q, spec, t_grid=None, x_search=None, lam=0.0, config=None):
    """``sup_x int |q|(x + z) G_t^lam(dz)`` along decreasing t."""
    cfg = config or DEFAULT
    _check_line(q, spec)
    if is_compound_poisson(spec):
        ts = np.asarray(t_grid if t_grid is not None else np.geomspace(cfg.rho_max, 1e-10, 11), dtype=float)
        return _cp_profile("TimeSmall", "t", ts, q, spec, lambda p: lam, lambda p: p, lambda p: math.inf, cfg)
    ts = np.asarray(t_grid if t_grid is not None else time_grid(spec, q, cfg), dtype=float)

    def one(t):
        return _kernel_sup(kernels.line_kernel(spec, lam, t), q, -math.inf, math.inf, x_search, cfg)
    return _profile("TimeSmall", "t", ts, _map(one, list(ts), cfg), cfg, {"lam": float(lam)})


def eval_lambda_limit(q, spec, t=1.0, lam_grid=None, x_search=None, config=None):
    """``sup_x G_t^lam |q|(x)`` along increasing lam (t may be inf)."""
    cfg = config or DEFAULT
    _check_line(q, spec)
    if lam_grid is None:
        lam_grid = 1.0 / (np.geomspace(cfg.rho_max, 1e-10, 11) if is_compound_poisson(spec)
                          else time_grid(spec, q, cfg))
    lams = np.asarray(lam_grid, dtype=float)
    if is_compound_poisson(spec):
        return _cp_profile("TimeSmall", "lam", lams, q, spec, lambda p: p, lambda p: t, lambda p: math.inf, cfg)

    def one(lam):
        return _kernel_sup(kernels.line_kernel(spec, lam, t), q, -math.inf, math.inf, x_search, cfg)
    return _profile("TimeSmall", "lam", lams, _map(one, list(lams), cfg), cfg,
                    {"t": float(t), "form": "lambda_to_infinity"})


def eval_space_condition(q, spec, lam=1.0, r_grid=None, x_search=None, config=None):
    """``sup_x int_{B(0,r)} |q|(x + z) G^lam(z) dz`` along decreasing r."""
    cfg = config or DEFAULT
    _check_line(q, spec)
    if lam <= 0:
        raise SpecError("lambda must be positive")
    rs = np.asarray(r_grid if r_grid is not None else radius_grid(q, cfg), dtype=float)
    if is_compound_poisson(spec):
        return _cp_profile("SpaceSmall", "r", rs, q, spec, lambda p: lam, lambda p: math.inf, lambda p: p, cfg)
    kern = kernels.line_kernel(spec, lam, math.inf)

    def one(r):
        return _kernel_sup(kern, q, -r, r, x_search, cfg)
    return _profile("SpaceSmall", "r", rs, _map(one, list(rs), cfg), cfg, {"lam": float(lam)})


def eval_trunc_space_condition(q, spec, lam=1.0, t=1.0, r_grid=None, x_search=None, config=None):
    """``sup_x int_{B(0,r)} |q|(x + z) G_t^lam(z) dz`` along decreasing r, fixed t."""
    cfg = config or DEFAULT
    _check_line(q, spec)
    if lam < 0 or not t > 0 or not math.isfinite(t):
        raise SpecError("need lam >= 0 and finite t > 0")
    rs = np.asarray(r_grid if r_grid is not None else radius_grid(q, cfg), dtype=float)
    if is_compound_poisson(spec):
        return _cp_profile("TruncSpace", "r", rs, q, spec, lambda p: lam, lambda p: t, lambda p: p, cfg)
    kern = kernels.line_kernel(spec, lam, t)

    def one(r):
        return _kernel_sup(kern, q, -r, r, x_search, cfg)
    return _profile("TruncSpace", "r", rs, _map(one, list(rs), cfg), cfg, {"lam": float(lam), "t": float(t)})


def eval_timespace_condition(q, spec, r_grid=None, x_search=None, config=None):
    """``sup_x int_{B(0,r)} |q|(x + z) G_r^0(z) dz``: time and radius shrink together."""
    cfg = config or DEFAULT
    _check_line(q, spec)
    if is_compound_poisson(spec):
        rs = np.asarray(r_grid if r_grid is not None else np.geomspace(cfg.rho_max, 1e-10, 11), dtype=float)
        return _cp_profile("TimeSpace", "r", rs, q, spec, lambda p: 0.0, lambda p: p, lambda p: p, cfg)
    rs = np.asarray(r_grid if r_grid is not None else time_grid(spec, q, cfg), dtype=float)

    def one(r):
        return _kernel_sup(kernels.line_kernel(spec, 0.0, r), q, -r, r, x_search, cfg)
    return _profile("TimeSpace", "r", rs, _map(one, list(rs), cfg), cfg)


# --------------------------------------------------------------------------
# Lebesgue criteria
# --------------------------------------------------------------------------

def lebesgue_sup(q, r, x_search=None):
    """``(sup_x int_{x-r}^{x+r} |q|, argmax)``."""
    if q.is_zero:
        return 0.0, 0.0
    feats = q.features()
    if x_search is not None:
        xs = np.asarray(x_search, dtype=float)
    elif feats.size == 0:
        xs = np.array([0.0])
    else:
        xs = np.unique(np.concatenate([feats, feats - r, feats + r]))
    vals = q.lebesgue(xs, r)
    if np.any(np.isinf(vals)):
        i = int(np.argmax(np.isinf(vals)))
        return math.inf, float(xs[i])
    best = float(np.max(vals))
    bx = float(xs[int(np.argmax(vals))])
    if x_search is None and feats.size:
        h = 0.5 * r
        for c in xs[np.argsort(vals)[::-1][:3]]:
            loc = c + np.linspace(-h, h, 17)
            lv = q.lebesgue(loc, r)
            j = int(np.argmax(lv))
            if lv[j] > best:
                best, bx = float(lv[j]), float(loc[j])
    return best, bx


def uniform_l1(q, x_search=None, config=None):
    """``sup_x int_{B(x,1)} |q|``; finite is necessary for membership in the time class."""
    cfg = config or DEFAULT
    v, x = lebesgue_sup(q, 1.0, x_search)
    return Profile("UniformL1", "r", [1.0], [v], [x], "finite" if math.isfinite(v) else "infinite",
                   {"note": "necessary condition"})


def lebesgue_profile(q, r_grid=None, x_search=None, config=None, condition="ClosedForm"):
    """``sup_x int_{B(x,r)} |q|`` along decreasing r."""
    cfg = config or DEFAULT
    rs = np.asarray(r_grid if r_grid is not None else radius_grid(q, cfg), dtype=float)
    res = [lebesgue_sup(q, r, x_search) for r in rs]
    return _profile(condition, "r", rs, res, cfg, {"criterion": "lebesgue"})


def weight_profile(q, phi, r_grid=None, x_search=None, config=None):
    """``sup_x int_0^r |q|(x + z) w(z) dz`` with the subordinator weight w."""
    cfg = config or DEFAULT
    if isinstance(phi, Subordinator):
        phi = phi.phi
    if not isinstance(phi, LaplaceExponent):
        raise SpecError("need a Laplace exponent")
    kern = kernels.weight_kernel(phi)
    rs = np.asarray(r_grid if r_grid is not None else weight_grid(), dtype=float)

    def one(r):
        return sup_search(lambda x: integrate_kernel(kern, q, x, 0.0, r), q, kern.kinks, min(kern.scale, r), r,
                          x_search, cfg)
    return _profile("ClosedForm", "r", rs, _map(one, list(rs), cfg), cfg, {"criterion": "subordinator_weight"})


# --------------------------------------------------------------------------
# closed-form characterizations and the verdict
# --------------------------------------------------------------------------

@dataclass
class KatoVerdict:
    label: str
    membership_K: str
    membership_calK: str
    characterization_used: str
    expected_relation: str
    lattice_ok: bool
    profiles: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def to_dict(self):
        return {"label": self.label, "membership_K": self.membership_K,
                "membership_calK": self.membership_calK,
                "characterization_used": self.characterization_used,
                "expected_relation": self.expected_relation, "lattice_ok": self.lattice_ok,
                "profiles": {k: p.to_dict() for k, p in self.profiles.items()}, "notes": list(self.notes)}


def expected_relation(label):
    """Whether the two classes coincide for every q, given the label."""
    if label in ("C", "Cprime", "CompoundPoisson"):
        return "not_equivalent"
    return "equivalent"


def weight_applicable(spec):
    """Subordinators whose exponent family satisfies the weight criterion hypotheses."""
    return isinstance(spec, Subordinator) and spec.phi.unbounded and spec.phi.zero_drift and \
        spec.phi.family in ("stable", "shifted_stable", "log", "u_over_log")


def closed_form_characterization(q, classification, phi=None, config=None):
    """``(membership_K, membership_calK, justification, profiles)`` from the label alone.

    A-type labels without a subordinator exponent return Inconclusive for the
    numeric route to resolve.
    """
    cfg = config or DEFAULT
    label = classification.label if hasattr(classification, "label") else str(classification)
    profiles = {}
    if label == "CompoundPoisson":
        k = "In" if resolved_bounded(q) else "Out"
        c = "In" if q.is_zero else "Out"
        return k, c, "compound Poisson: time class = bounded functions, space class = {0}", profiles
    uni = uniform_l1(q, config=cfg)
    profiles["UniformL1"] = uni
    if label in ("B", "Bprime", "C", "Cprime"):
        leb = lebesgue_profile(q, config=cfg)
        profiles["ClosedForm"] = leb
        plain = leb.membership
        if label in ("B", "Bprime"):
            return plain, plain, "finite variation with nonzero drift: both classes = Lebesgue criterion" + (
                " along V" if label == "Bprime" else ""), profiles
        k = "In" if uni.decision == "finite" else "Out"
        return k, plain, "0 regular for {0}: space class = Lebesgue criterion, time class = uniform local " \
                         "integrability" + (" along V" if label == "Cprime" else ""), profiles
    if phi is not None:
        wp = weight_profile(q, phi, config=cfg)
        profiles["ClosedForm"] = wp
        m = wp.membership
        return m, m, "subordinator weight criterion", profiles
    if resolved_bounded(q):
        return "In", "In", "bounded potential of a non-Poisson process", profiles
    if uni.decision == "infinite":
        return "Out", "Out", "uniform local integrability fails", profiles
    return "Inconclusive", "Inconclusive", "no closed form for this label", profiles


def verdict(q, spec, config=None, conditions=("closed",)):
    """Classify, decide both memberships and check the consistency lattice.

    ``conditions`` may add numeric profiles for audit: ``time``, ``space``,
    ``timespace``, ``trunc``.
    """
    cfg = config or DEFAULT
    cls = classify(spec)
    label = cls.label
    notes = []
    phi = spec.phi if weight_applicable(spec) else None
    if label == "D_gt1_H0":
        k, c, just, profiles = _multi_dim(q, spec, cfg)
    else:
        k, c, just, profiles = closed_form_characterization(q, cls, phi, cfg)
        if label == "A" and phi is None and k == "Inconclusive" and spec.dimension == 1:
            tp = eval_time_condition(q, spec, config=cfg)
            profiles["TimeSmall"] = tp
            k = c = tp.membership
            just = "points polar: classes coincide; decided by the time condition"
            if k == "Inconclusive":
                sp = eval_space_condition(q, spec, cfg.lam, config=cfg)
                profiles["SpaceSmall"] = sp
                k = c = sp.membership
                just = "points polar: classes coincide; decided by the space condition"
        elif label == "Aprime" and k == "Inconclusive":
            just = "prime case without a closed form"
    if spec.dimension == 1 and q.dimension == 1:
        extra = {"time": lambda: eval_time_condition(q, spec, config=cfg),
                 "space": lambda: eval_space_condition(q, spec, cfg.lam, config=cfg),
                 "timespace": lambda: eval_timespace_condition(q, spec, config=cfg),
                 "trunc": lambda: eval_trunc_space_condition(q, spec, cfg.trunc_lam, cfg.trunc_times[0],
                                                             config=cfg)}
        ids = {"time": "TimeSmall", "space": "SpaceSmall", "timespace": "TimeSpace", "trunc": "TruncSpace"}
        for name in conditions:
            if name in extra and ids[name] not in profiles:
                profiles[ids[name]] = extra[name]()
    lattice_ok = True
    if c == "In" and k == "Out":
        lattice_ok = False
        notes.append("space class In but time class Out")
    uni = profiles.get("UniformL1")
    if uni is not None and uni.decision == "infinite" and k == "In":
        lattice_ok = False
        notes.append("time class In without uniform local integrability")
    rel = expected_relation(label)
    if rel == "equivalent" and "Inconclusive" not in (k, c) and k != c:
        notes.append("classes differ although the label forces equality")
        lattice_ok = False
    return KatoVerdict(label, k, c, just, rel, lattice_ok, profiles, notes)


# --------------------------------------------------------------------------
# radial potentials in R^d
# --------------------------------------------------------------------------

def sphere_area(d):
    return 2.0 * math.pi ** (d / 2.0) / gamma_fn(d / 2.0)


def ball_volume(d, r=1.0):
    return math.pi ** (d / 2.0) / gamma_fn(d / 2.0 + 1.0) * r ** d


def _moment1(q, u1, u2):
    """``int_u1^u2 f(u) u du`` for a radial profile f."""
    tot = 0.0
    for pc in q.pieces:
        a, b = max(u1, pc.a), min(u2, pc.b)
        if not a < b:
            continue
        if pc.kind == "const":
            tot += pc.c * (b * b - a * a) / 2.0
        elif pc.kind == "power" and pc.s == 0.0:
            e = 2.0 - pc.p
            if abs(e) < 1e-14:
                tot += pc.c * (math.log(b) - math.log(a)) if a > 0 else math.inf
            elif e < 0 and a == 0:
                return math.inf
            else:
                tot += pc.c * (b ** e - a ** e) / e
        else:
            tot += integrate.quad(lambda u: float(pc.values(np.array([u]))[0]) * u, a, b, limit=200)[0]
    return tot


def _sphere_average(q, d, rho0, s):
    """Mean of ``f(|x + s theta|)`` over unit vectors theta, ``|x| = rho0``."""
    if rho0 == 0.0:
        return q(np.asarray(s, dtype=float))
    s = np.atleast_1d(np.asarray(s, dtype=float))
    out = np.empty(s.shape)
    if d == 3:
        for i, si in enumerate(s):
            out[i] = _moment1(q, abs(rho0 - si), rho0 + si) / (2.0 * rho0 * si)
        return out
    norm = math.sqrt(math.pi) * gamma_fn((d - 1) / 2.0) / gamma_fn(d / 2.0)
    th, wt = gl_rule(64)
    for i, si in enumerate(s):
        theta = 0.5 * math.pi * (th + 1.0)
        u = np.sqrt(np.maximum(rho0 * rho0 + si * si + 2 * rho0 * si * np.cos(theta), 0.0))
        out[i] = 0.5 * math.pi * float(np.sum(wt * q(u) * np.sin(theta) ** (d - 2))) / norm
    return out


def radial_integral(q, kernel_fn, d, radius, rho0=0.0):
    """``int_{|z - x| < radius} f(|z|) K(|z - x|) dz`` with ``|x| = rho0``.

    Dyadic shells towards ``|z - x| = 0`` decide integrability there.
    """
    if not q.radial and q.dimension == 1:
        raise SpecError("need a radial potential")
    hi_support = q.support[1]
    R = min(radius, rho0 + hi_support)
    if R <= 0:
        return 0.0
    feats = [f for f in q.features().tolist()] + [0.0]
    brk = sorted({b for f in feats for b in (abs(rho0 - f), rho0 + f) if 0 < b < R})
    edges = np.unique(np.concatenate([R * 2.0 ** -np.arange(0, 90, dtype=float)[::-1], brk, [R]]))
    a, b = edges[:-1], edges[1:]
    xg, wg = gl_rule(16)
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    s = (mid[:, None] + half[:, None] * xg[None, :]).ravel()
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        vals = np.asarray(kernel_fn(s), dtype=float) * s ** (d - 1) * _sphere_average(q, d, rho0, s)
    vals = np.nan_to_num(vals, nan=0.0)
    contrib = (vals.reshape(a.size, xg.size) * wg[None, :]).sum(axis=1) * half
    total = float(contrib.sum())
    verdict_ = dyadic_decay(contrib[:16][::-1], window=8, ratio_max=0.98, growth_min=0.995)
    if verdict_.summable is False or math.isinf(total):
        return math.inf
    return sphere_area(d) * (total + verdict_.tail_estimate)


def _radial_sup(q, kernel_fn, d, radius):
    hi = q.support[1]
    best, bx = -1.0, 0.0
    for rho0 in (0.0, 0.25 * hi, 0.5 * hi, hi):
        v = radial_integral(q, kernel_fn, d, radius, rho0)
        if v > best:
            best, bx = v, rho0
        if math.isinf(v):
            break
    return best, bx


def _check_radial(q, d):
    if d < 2:
        raise DimensionUnsupported("radial weights need d >= 2; the line is handled by the closed forms")
    if q.dimension != d:
        raise SpecError("potential dimension does not match d")


def aizenman_simon_weights(q, d, t_grid=None, config=None):
    """``sup_x int_{|z-x| < sqrt t} |q(z)| w(|z - x|) dz`` with the Newtonian weight.

    ``w(s) = s^{2-d}`` for ``d >= 3`` and ``log(1/s)`` for ``d = 2``.
    """
    cfg = config or DEFAULT
    _check_radial(q, d)
    ts = np.asarray(t_grid if t_grid is not None else np.geomspace(cfg.rho_max, 1e-12, 12), dtype=float)
    if d == 2:
        wfn = lambda s: np.log(1.0 / s)
    else:
        wfn = lambda s: s ** (2.0 - d)
    res = [_radial_sup(q, wfn, d, math.sqrt(t)) for t in ts]
    return _profile("TimeSmall", "t", ts, res, cfg, {"weight": "newtonian", "d": d})


def brownian_radial_kernel(d, a=1.0, t=math.inf):
    """Radial ``G_t^0`` of Brownian motion with ``psi = a |xi|^2`` in ``R^d``, ``d >= 2``."""
    if d == 2:
        if not math.isfinite(t):
            raise SpecError("planar Brownian motion is recurrent; need finite t")
        return lambda s: exp1(np.asarray(s, dtype=float) ** 2 / (4 * a * t)) / (4 * math.pi * a)
    k = (d - 2) / 2.0
    c = gamma_fn(k) / (4 * math.pi ** (d / 2.0) * a)
    if not math.isfinite(t):
        return lambda s: c * np.asarray(s, dtype=float) ** (2.0 - d)
    return lambda s: c * np.asarray(s, dtype=float) ** (2.0 - d) * gammaincc(
        k, np.asarray(s, dtype=float) ** 2 / (4 * a * t))


def stable_radial_kernel(alpha, d=3, scale=1.0, t=math.inf):
    """Radial ``G_t^0`` of the isotropic stable process with ``psi = scale |xi|^alpha``.

    Finite t is available for ``alpha = 1`` (d = 3) and ``alpha = 2``.
    """
    if alpha == 2.0:
        return brownian_radial_kernel(d, scale, t)
    if not math.isfinite(t):
        if d <= alpha:
            raise SpecError("recurrent: need finite t")
        c = gamma_fn((d - alpha) / 2.0) / (2 ** alpha * math.pi ** (d / 2.0) * gamma_fn(alpha / 2.0)) / scale
        return lambda s: c * np.asarray(s, dtype=float) ** (alpha - d)
    if alpha == 1.0 and d == 3:
        T = scale * t
        return lambda s: (1.0 / np.asarray(s, dtype=float) ** 2 - 1.0 / (T * T + np.asarray(s, dtype=float) ** 2)) \
            / (2 * math.pi ** 2 * scale)
    raise SpecError("no closed-form truncated kernel for this index")


def _isotropic(spec):
    """``(alpha, scale)`` for isotropic Brownian or stable specs."""
    if not isinstance(spec, Triplet) or np.any(spec.gamma != 0):
        raise NotUnimodal("need a symmetric Brownian or isotropic stable spec")
    d = spec.dimension
    if isinstance(spec.nu, ZeroMeasure):
        a = spec.A[0, 0]
        if a > 0 and np.allclose(spec.A, a * np.eye(d)):
            return 2.0, float(a)
    if isinstance(spec.nu, StableMeasure) and np.all(spec.A == 0):
        return spec.nu.alpha, spec.nu.scale
    raise NotUnimodal("spec is not isotropic unimodal")


def radial_time_condition(q, spec, t_grid=None, config=None):
    """Time condition for a radial q in ``R^d`` through the closed-form radial kernel."""
    cfg = config or DEFAULT
    d = spec.dimension
    _check_radial(q, d)
    alpha, sc = _isotropic(spec)
    ts = np.asarray(t_grid if t_grid is not None else np.geomspace(cfg.rho_max, 1e-12, 12), dtype=float)
    res = [_radial_sup(q, stable_radial_kernel(alpha, d, sc, t), d, math.inf) for t in ts]
    return _profile("TimeSmall", "t", ts, res, cfg, {"route": "radial_closed_form", "d": d})


def _multi_dim(q, spec, cfg):
    profiles = {}
    if isinstance(spec, Product) and q.params.get("type") == "space_time_demo":
        demo = space_time_demo(q.params["p"], spec, cfg)
        profiles.update(demo["profiles"])
        m = demo["time_dependent"].membership
        return m, m, "space-time embedding: time-dependent conditions", profiles
    if q.radial and q.dimension == spec.dimension:
        try:
            alpha, _ = _isotropic(spec)
        except NotUnimodal:
            alpha = None
        if alpha == 2.0:
            prof = aizenman_simon_weights(q, spec.dimension, config=cfg)
            profiles["ClosedForm"] = prof
            return prof.membership, prof.membership, "Newtonian-weight criterion for Brownian motion", profiles
    if resolved_bounded(q):
        return "In", "In", "bounded potential of a non-Poisson process", profiles
    if q.radial and q.dimension == spec.dimension:
        d = q.dimension
        v = sphere_area(d) * _radial_l1(q, d)
        uni = Profile("UniformL1", "r", [1.0], [v], [0.0], "finite" if math.isfinite(v) else "infinite")
        profiles["UniformL1"] = uni
        if uni.decision == "infinite":
            return "Out", "Out", "uniform local integrability fails", profiles
    return "Inconclusive", "Inconclusive", "no closed form for this spec and potential", profiles


def _radial_l1(q, d):
    tot = 0.0
    for pc in q.pieces:
        a, b = max(0.0, pc.a), min(1.0, pc.b)
        if not a < b:
            continue
        if pc.kind == "const":
            tot += pc.c * (b ** d - a ** d) / d
        elif pc.kind == "power" and pc.s == 0.0:
            e = d - pc.p
            if e <= 0 and a == 0:
                return math.inf
            tot += pc.c * (math.log(b / a) if e == 0 else (b ** e - a ** e) / e)
        else:
            tot += integrate.quad(lambda u: float(pc.values(np.array([u]))[0]) * u ** (d - 1), a, b)[0]
    return tot


# --------------------------------------------------------------------------
# time-dependent potentials through the space-time process
# --------------------------------------------------------------------------

def space_time_potential(p):
    """``q(s, x) = |s|^{-p} 1_{|s|<1} 1_{[-1,1]}(x)`` on time-space."""
    return Potential([], "ClosedForm", {"type": "space_time_demo", "p": p}, dimension=2,
                     label=f"space_time({p})")


def _time_weight_integral(p, s, top, g):
    """``int_0^top |s + u|^{-p} 1_{|s+u|<1} g(u) du``."""
    if p >= 1 and -top < s <= 0:
        return math.inf
    lo_u, hi_u = max(0.0, -1.0 - s), min(top, 1.0 - s)
    if not lo_u < hi_u:
        return 0.0
    pts = [u for u in (-s,) if lo_u < u < hi_u]
    f = lambda u: abs(s + u) ** (-p) * g(u) if s + u != 0 else 0.0
    return integrate.quad(f, lo_u, hi_u, points=pts or None, limit=400)[0]


def space_time_demo(p, spec=None, config=None, grid=None):
    """Both forms of the time-dependent condition for the demo potential.

    ``time_dependent``: ``sup_{s,x} E^x int_0^t |q(s+u, X_u)| du``;
    ``ball_truncated``: ``sup_{s,x} E^x int_0^r 1_{B(x,r)}(X_u) |q(s+u, X_u)| du``.
    The space sup is attained at x = 0 (both factors are symmetric and
    unimodal in x); the time shift s is searched over ``[-t, 0]``.
    """
    cfg = config or DEFAULT
    a = 1.0
    if spec is not None:
        comp = spec.components[0] if isinstance(spec, Product) else spec
        a = float(comp.A[0, 0])
    grid = np.asarray(grid if grid is not None else np.geomspace(cfg.rho_max, 1e-12, 12), dtype=float)

    def occupancy(width):
        return lambda u: float(erf(width / (2.0 * math.sqrt(a * u)))) if u > 0 else 1.0

    def best(top, g):
        ss = -top * np.linspace(0.0, 1.0, 41)
        vals = [_time_weight_integral(p, s, top, g) for s in ss]
        i = int(np.argmax(vals))
        return float(vals[i]), float(ss[i])

    tprof = _profile("TimeSmall", "t", grid, [best(t, occupancy(1.0)) for t in grid], cfg,
                     {"form": "time_dependent", "p": p})
    bprof = _profile("TimeSpace", "r", grid, [best(r, occupancy(r)) for r in grid], cfg,
                     {"form": "ball_truncated", "p": p})
    return {"time_dependent": tprof, "ball_truncated": bprof,
            "agree": tprof.membership == bprof.membership,
            "profiles": {"TimeSmall": tprof, "TimeSpace": bprof}}


# --------------------------------------------------------------------------
# inequality checks
# --------------------------------------------------------------------------

def _sup_line(kern, q, lo=-math.inf, hi=math.inf, cfg=DEFAULT):
    return _kernel_sup(kern, q, lo, hi, None, cfg)[0]


def unimodal_bound_check(q, spec, t, r, t0=math.inf, config=None):
    """Check ``sup G_t^0|q| <= (1 + t/(|B(0,1/2)| r^d G_{t0}(r))) sup int_{B(x,r)} |q| G_{t0}``."""
    cfg = config or DEFAULT
    if not 0 < t < t0:
        raise SpecError("need 0 < t < t0")
    alpha, sc = _isotropic(spec)
    d = spec.dimension
    if d == 1:
        if not math.isfinite(t0):
            raise SpecError("the line needs a finite t0")
        lhs = _sup_line(kernels.line_kernel(spec, 0.0, t), q, cfg=cfg)
        k0 = kernels.line_kernel(spec, 0.0, t0)
        g_r = float(0.5 * (k0(np.array([r]))[0] + k0(np.array([-r]))[0]))
        ball = _sup_line(k0, q, -r, r, cfg=cfg)
    else:
        lhs = _radial_sup(q, stable_radial_kernel(alpha, d, sc, t), d, math.inf)[0]
        kt0 = stable_radial_kernel(alpha, d, sc, t0)
        g_r = float(kt0(np.array([r]))[0])
        ball = _radial_sup(q, kt0, d, r)[0]
    factor = 1.0 + t / (ball_volume(d, 0.5) * r ** d * g_r)
    rhs = factor * ball
    # both sides infinite: the bound holds but carries no information
    slack = 0.0 if math.isinf(lhs) and math.isinf(rhs) else rhs - lhs
    return BoundReport("unimodal_time_bound", bool(slack >= -1e-9 * max(1.0, abs(rhs))), float(slack),
                       {"lhs": lhs, "rhs": rhs, "factor": factor, "ball_integral": ball, "t": t, "r": r,
                        "t0": t0, "d": d})


def _radial_psi_star_inverse(spec, s):
    alpha, sc = _isotropic(spec)
    # psi is radial and increasing: psi*(u) = sc u^alpha
    return (s / sc) ** (1.0 / alpha)


def lower_bound_fit(q, spec, t_values=(1e-1, 1e-2, 1e-3), config=None):
    """Fit ``c`` in ``c sup int_{B(x,r)} |q| G^0 <= sup int_0^t P_u |q|``, ``r = 1/(psi*)^-(1/t)``."""
    alpha, sc = _isotropic(spec)
    d = spec.dimension
    if d < 3:
        raise DimensionUnsupported("the lower bound is stated for d >= 3")
    g0 = stable_radial_kernel(alpha, d, sc, math.inf)
    rows = []
    for t in t_values:
        r = 1.0 / _radial_psi_star_inverse(spec, 1.0 / t)
        lhs = _radial_sup(q, stable_radial_kernel(alpha, d, sc, t), d, math.inf)[0]
        rhs = _radial_sup(q, g0, d, r)[0]
        rows.append({"t": t, "r": r, "time": lhs, "ball": rhs, "ratio": lhs / rhs if rhs > 0 else math.inf})
    c = min(row["ratio"] for row in rows)
    return BoundReport("lower_bound_fit", bool(c > 0), float(c), {"rows": rows, "fitted_c": c})


def sandwich_check(q, spec, lam=1.0, t=math.inf, config=None):
    """``(1-1/e) sup G_t^lam|q| <= sup G_{1/lam}^0|q| <= e sup G_t^lam|q|`` for ``t >= 1/lam``."""
    cfg = config or DEFAULT
    if lam <= 0 or t < 1.0 / lam:
        raise SpecError("need lam > 0 and t >= 1/lam")
    _check_line(q, spec)
    if is_compound_poisson(spec):
        outer = _cp_sup(q, cp_occupation(spec, lam, t), math.inf)[0]
        mid = _cp_sup(q, cp_occupation(spec, 0.0, 1.0 / lam), math.inf)[0]
    else:
        outer = _sup_line(kernels.line_kernel(spec, lam, t), q, cfg=cfg)
        mid = _sup_line(kernels.line_kernel(spec, 0.0, 1.0 / lam), q, cfg=cfg)
    low = (1 - math.exp(-1)) * outer
    high = math.e * outer
    slack = min(mid - low, high - mid)
    tol = 1e-6 * max(1.0, abs(mid))
    return BoundReport("resolvent_sandwich", bool(slack >= -tol), float(slack),
                       {"lower": low, "middle": mid, "upper": high, "lam": lam, "t": t})


def doubling_check(q, spec, r, lam=1.0, t=math.inf, shifts=13, config=None):
    """``sup_{x,y} int_{B(x,r)} |q| G_t^lam(y, dz) <= sup_x int_{B(x,2r)} |q| G_t^lam(x, dz)``."""
    cfg = config or DEFAULT
    _check_line(q, spec)
    kern = kernels.line_kernel(spec, lam, t)
    rhs = _sup_line(kern, q, -2 * r, 2 * r, cfg)
    lhs = 0.0
    for c in np.linspace(-3 * r, 3 * r, shifts):
        lhs = max(lhs, _sup_line(kern, q, c - r, c + r, cfg))
    slack = rhs - lhs
    return BoundReport("ball_doubling", bool(slack >= -1e-6 * max(1.0, rhs)), float(slack),
                       {"lhs": lhs, "rhs": rhs, "r": r, "lam": lam, "t": t})
