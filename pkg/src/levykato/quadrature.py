"""Numerical integration helpers.

Three tools are used throughout the package:

* ``adaptive_gl``: vectorised adaptive Gauss-Legendre on a finite interval.
  The integrand is called with whole arrays of nodes, which keeps the cost
  of evaluating characteristic exponents low.
* ``fourier_half_line``: the cosine/sine transform over ``(0, inf)`` computed
  with QUADPACK's Fourier routine (QAWF) through ``scipy.integrate.quad``.
  QAWF integrates cycle by cycle and extrapolates, which is what slowly
  decaying symbols such as ``1/(1 + s^2)`` need.
* ``dyadic_decay``: a verdict on whether a sequence of contributions over
  dyadic shells is summable, used for finite-variation tests and for
  detecting non-integrable singularities.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate


@lru_cache(maxsize=16)
def gl_rule(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def gl_fixed(f, edges, n=8):
    """Composite Gauss-Legendre over consecutive ``edges`` (vectorised).

    Returns the per-panel integrals.
    """
    edges = np.asarray(edges, dtype=float)
    a, b = edges[:-1], edges[1:]
    x, w = gl_rule(n)
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    nodes = mid[:, None] + half[:, None] * x[None, :]
    vals = f(nodes.ravel()).reshape(nodes.shape)
    return (vals * w[None, :]).sum(axis=1) * half


def adaptive_gl(f, a, b, rtol=1e-10, atol=1e-14, n=10, max_panels=20000, init_panels=1):
    """Adaptive Gauss-Legendre integration of a vectorised ``f`` over [a, b].

    Each panel is estimated once with an ``n``-point rule and once as two
    halves; panels whose two estimates disagree are split. Returns
    ``(value, error_estimate)``.
    """
    if b == a:
        return 0.0, 0.0
    sign = 1.0
    if b < a:
        a, b = b, a
        sign = -1.0
    width = b - a
    todo = np.linspace(a, b, init_panels + 1)
    lo, hi = todo[:-1], todo[1:]
    total = 0.0
    err_total = 0.0
    n_used = 0
    x, w = gl_rule(n)
    while lo.size:
        mid = 0.5 * (lo + hi)
        e3 = np.stack([lo, mid, hi], axis=1)
        left = _panel(f, e3[:, 0], e3[:, 1], x, w)
        right = _panel(f, e3[:, 1], e3[:, 2], x, w)
        whole = _panel(f, lo, hi, x, w)
        fine = left + right
        err = np.abs(fine - whole)
        running = abs(total + fine.sum())
        tol = np.maximum(atol, rtol * running) * (hi - lo) / width
        ok = (err <= tol) | ((hi - lo) < 1e-15 * max(1.0, abs(a), abs(b)))
        n_used += lo.size
        if n_used > max_panels:
            ok[:] = True
        total += fine[ok].sum()
        err_total += err[ok].sum()
        lo = np.concatenate([lo[~ok], mid[~ok]])
        hi = np.concatenate([mid[~ok], hi[~ok]])
    return sign * total, err_total


def _panel(f, lo, hi, x, w):
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    nodes = mid[:, None] + half[:, None] * x[None, :]
    vals = np.asarray(f(nodes.ravel()), dtype=float).reshape(nodes.shape)
    return (vals * w[None, :]).sum(axis=1) * half


def fourier_half_line(re_part, im_part, x, epsabs=1e-13, epsrel=1e-10, limit=400):
    """``(1/pi) * int_0^inf [cos(x s) re_part(s) + sin(x s) im_part(s)] ds``.

    ``re_part``/``im_part`` are scalar callables; ``im_part`` may be None for
    real symbols. At ``x == 0`` a plain improper integral of ``re_part`` is
    used. Returns ``(value, abs_error, ok)``.
    """
    ok = True
    if x == 0.0:
        val, err, info = _quad_full(re_part, 0.0, np.inf, epsabs=epsabs, epsrel=epsrel, limit=limit)
        ok = info
        return val / math.pi, err / math.pi, ok
    w = abs(x)
    val, err, ok1 = _transform(re_part, "cos", w, epsabs)
    total, etot = val, err
    ok = ok1
    if im_part is not None:
        val2, err2, ok2 = _transform(im_part, "sin", w, epsabs)
        total += math.copysign(1.0, x) * val2
        etot += err2
        ok = ok and ok2
    return total / math.pi, etot / math.pi, ok


def _quad_full(f, a, b, **kw):
    out = integrate.quad(f, a, b, full_output=1, **kw)
    val, err = out[0], out[1]
    ier_ok = len(out) < 4
    return val, err, ier_ok


def _transform(f, kind, w, epsabs):
    if w >= 1.0:
        return _quad_weighted(f, kind, w, epsabs)
    # At low frequency the first QAWF cycle is long compared with the scale
    # on which the symbol varies, and QAWF loses that structure. The first
    # half period carries no sign change, so it is integrated directly on
    # geometric panels and QAWF takes over from there.
    half = math.pi / w
    trig = math.cos if kind == "cos" else math.sin
    g = lambda s: f(s) * trig(w * s)
    edges = [0.0] + list(np.geomspace(min(1e-3, 0.5 * half), half, 12 + int(4 * math.log10(max(half, 10.0)))))
    head, herr, ok = 0.0, 0.0, True
    for a, b in zip(edges[:-1], edges[1:]):
        v, e, panel_ok = _quad_full(g, a, b, epsabs=epsabs, epsrel=1e-10, limit=200)
        head += v
        herr += e
        ok = ok and panel_ok
    # an absolute tolerance far below the size of single cycles cannot be met
    tail, terr, tail_ok = _quad_weighted(f, kind, w, max(epsabs, 1e-11 * abs(head)), half)
    return head + tail, herr + terr, ok and tail_ok


def _quad_weighted(f, kind, w, epsabs, a=0.0):
    # QAWF occasionally overflows in its extrapolation table for symbols that
    # decay very fast; retrying with a looser absolute tolerance avoids it.
    for tol, limlst in ((epsabs, 100), (max(epsabs, 1e-12), 50), (max(epsabs, 1e-11), 30), (1e-10, 20)):
        out = integrate.quad(f, a, np.inf, weight=kind, wvar=w, epsabs=tol,
                             limlst=limlst, limit=200, full_output=1)
        val, err = out[0], out[1]
        if math.isfinite(val) and abs(val) < 1e100:
            break
    else:
        return val, math.inf, False
    ok = len(out) < 4
    if not ok and math.isfinite(val):
        # QAWF reports roundoff trouble on cycles whose contribution is
        # already below epsabs; accept when the error estimate is small.
        ok = err <= max(1e-8, 1e-6 * abs(val))
    return val, err, ok


def fourier_tail(f, a, kind, w, epsabs=1e-13):
    """``int_a^inf f(r) cos(w r) dr`` (or sin) through QAWF with retries."""
    val, err, ok = _quad_weighted(f, kind, w, epsabs, a)
    return val


@dataclass(frozen=True)
class DecayVerdict:
    summable: bool | None
    ratio: float
    tail_estimate: float
    partial_sum: float


def dyadic_decay(contributions, window=8, ratio_max=0.999, growth_min=1.0):
    """Decide summability of nonnegative contributions indexed by dyadic level.

    The geometric-mean ratio of consecutive terms over the last ``window``
    levels is compared with ``ratio_max``. A ratio at or above ``growth_min``
    means the terms do not decay, so the series diverges. Between the two
    the result is None (undecided). Zero tails count as summable.
    """
    c = np.asarray(contributions, dtype=float)
    s = float(np.sum(c))
    tail = c[-(window + 1):]
    if np.all(tail <= 0.0) or c[-1] <= 1e-300:
        return DecayVerdict(True, 0.0, 0.0, s)
    pos = tail[tail > 0]
    if pos.size < 2 or np.any(tail <= 0):
        # isolated zero shells: use the positive ones only
        pos = c[c > 0][-(window + 1):]
        if pos.size < 2:
            return DecayVerdict(True, 0.0, float(c[-1]), s)
    ratio = float(np.exp(np.mean(np.diff(np.log(pos)))))
    if ratio >= growth_min:
        return DecayVerdict(False, ratio, math.inf, s)
    if ratio <= ratio_max:
        return DecayVerdict(True, ratio, float(c[-1]) * ratio / (1.0 - ratio), s)
    return DecayVerdict(None, ratio, float(c[-1]) * ratio / (1.0 - ratio), s)
