"""Kernels on the whole line as callables, for integration against potentials.

Fourier-inverted kernels are sampled on geometric nodes ``+-rho * 10^k`` around
the natural scale ``rho`` of the process and interpolated monotonically in
log-log coordinates. Below the first node the kernel continues as a power law
(this captures the singularity of polar cases); beyond the last positive node
it continues as a power law when the tail is integrable and is zero otherwise.

Strictly stable specs reuse one base kernel through the exact scaling
``G_t^lam(z) = s^{1-1/a} G_{t/s}^{lam s}(z s^{-1/a})``. Pure drift has the
closed form ``e^{-lam z/v}/|v|`` on ``z/v in (0, t)``.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.interpolate import PchipInterpolator

from .classifier import is_compound_poisson
from .errors import AtomAtOrigin, QuadratureFailure, SpecError
from .levy_model import LaplaceExponent, StableMeasure, Subordinator, Triplet, ZeroMeasure
from .potential import kernel_values

_CACHE: dict = {}

BASE_RANGE = (1e-7, 1e8, 16)
GENERIC_RANGE = (1e-5, 1e6, 8)


class LineKernel:
    """Base class: a nonnegative kernel on the line with its natural scale."""

    scale: float = 1.0
    kinks: tuple = (0.0,)

    def __call__(self, z):
        raise NotImplementedError

    def singular_at_zero(self):
        return False


class InterpolatedKernel(LineKernel):
    def __init__(self, pos_nodes, pos_vals, neg_nodes, neg_vals, scale, mass_hint=None):
        self.scale = float(scale)
        self.kinks = (0.0,)
        self._pos = _side(pos_nodes, pos_vals)
        self._neg = _side(neg_nodes, neg_vals)
        self.mass_hint = mass_hint

    def __call__(self, z):
        z = np.asarray(z, dtype=float)
        out = np.zeros(z.shape)
        pos = z > 0
        neg = z < 0
        if self._pos is not None and pos.any():
            out[pos] = _eval_side(self._pos, z[pos])
        if self._neg is not None and neg.any():
            out[neg] = _eval_side(self._neg, -z[neg])
        zero = z == 0
        if zero.any():
            # the value at 0 is a limit from the larger side; only used on null sets
            lim = [_eval_side(s, np.array([1e-300]))[0] for s in (self._pos, self._neg) if s is not None]
            out[zero] = max(lim) if lim else 0.0
        return out

    def singular_at_zero(self):
        return any(s is not None and s["s0"] < -0.02 for s in (self._pos, self._neg))


def _side(nodes, vals):
    nodes = np.asarray(nodes, dtype=float)
    vals = np.asarray(vals, dtype=float)
    if nodes.size == 0:
        return None
    vmax = float(np.max(vals)) if vals.size else 0.0
    if vmax <= 0:
        return None
    keep = vals > 1e-13 * vmax
    # the usable range is the run of positive values starting at the smallest node
    if not keep[0]:
        first = int(np.argmax(keep))
    else:
        first = 0
    stop = first + int(np.argmin(keep[first:])) if not keep[first:].all() else nodes.size
    n, v = nodes[first:stop], vals[first:stop]
    if n.size < 3:
        return None
    ln, lv = np.log(n), np.log(v)
    interp = PchipInterpolator(ln, lv, extrapolate=False)
    # end slopes by least squares over about one decade, to damp node noise
    m = max(2, min(n.size // 4, int(np.sum(ln - ln[0] <= math.log(10.0)))))
    s0 = max(float(np.polyfit(ln[:m], lv[:m], 1)[0]), -0.999)
    s1 = float((lv[-1] - lv[-2]) / (ln[-1] - ln[-2]))
    tail = s1 < -1.05 and stop == nodes.size
    return {"interp": interp, "ln": ln, "lv": lv, "s0": s0, "s1": s1, "tail": tail,
            "zmin": n[0], "zmax": n[-1], "cut_below": first > 0}


def _eval_side(side, r):
    out = np.zeros(r.shape)
    lr = np.log(np.maximum(r, 1e-300))
    inside = (r >= side["zmin"]) & (r <= side["zmax"])
    out[inside] = np.exp(side["interp"](lr[inside]))
    below = r < side["zmin"]
    if below.any() and not side["cut_below"]:
        out[below] = np.exp(side["lv"][0] + side["s0"] * (lr[below] - side["ln"][0]))
    above = r > side["zmax"]
    if above.any() and side["tail"]:
        out[above] = np.exp(side["lv"][-1] + side["s1"] * (lr[above] - side["ln"][-1]))
    return out


class ScaledKernel(LineKernel):
    """``amp * base(z / sigma)``."""

    def __init__(self, base, amp, sigma):
        self.base, self.amp, self.sigma = base, float(amp), float(sigma)
        self.scale = base.scale * self.sigma
        self.kinks = tuple(k * self.sigma for k in base.kinks)

    def __call__(self, z):
        return self.amp * self.base(np.asarray(z, dtype=float) / self.sigma)

    def singular_at_zero(self):
        return self.base.singular_at_zero()


class DriftKernel(LineKernel):
    """``G_t^lam`` of deterministic motion with velocity v."""

    def __init__(self, v, lam, t):
        if v == 0:
            raise SpecError("zero velocity has no density")
        self.v, self.lam, self.t = float(v), float(lam), float(t)
        self.scale = abs(v) * (t if math.isfinite(t) else 1.0 / max(lam, 1e-300))
        end = self.v * self.t if math.isfinite(t) else None
        self.kinks = (0.0,) if end is None else (0.0, end)

    def __call__(self, z):
        z = np.asarray(z, dtype=float)
        u = z / self.v
        ok = (u > 0) & (u < self.t)
        return np.where(ok, np.exp(-self.lam * np.where(ok, u, 0.0)) / abs(self.v), 0.0)


class FunctionKernel(LineKernel):
    """Closed-form kernel ``fn(z)`` (used for subordinator weights)."""

    def __init__(self, fn, scale=1.0, singular=True):
        self.fn = fn
        self.scale = scale
        self._singular = singular

    def __call__(self, z):
        return np.asarray(self.fn(np.asarray(z, dtype=float)), dtype=float)

    def singular_at_zero(self):
        return self._singular


# --------------------------------------------------------------------------

def self_similar_index(spec):
    """Index a if ``spec`` is strictly a-stable (no drift), else None."""
    if isinstance(spec, Subordinator):
        return spec.phi.params[0][1] if spec.phi.family == "stable" else None
    if isinstance(spec, Triplet) and spec.dimension == 1 and spec.gamma[0] == 0:
        if isinstance(spec.nu, ZeroMeasure) and spec.A[0, 0] > 0:
            return 2.0
        if isinstance(spec.nu, StableMeasure) and spec.A[0, 0] == 0:
            return spec.nu.alpha
    return None


def pure_drift_velocity(spec):
    if isinstance(spec, Triplet) and spec.dimension == 1 and isinstance(spec.nu, ZeroMeasure) \
            and spec.A[0, 0] == 0 and spec.gamma[0] != 0:
        return float(spec.gamma[0])
    return None


def natural_scale(spec, lam, t):
    """``rho`` with ``|psi(1/rho)| = 1/tau``, ``tau = min(t, 1/lam)``."""
    tau = min(t, 1.0 / lam) if lam > 0 else t
    if not math.isfinite(tau):
        raise SpecError("need lam > 0 or finite t")
    target = 1.0 / tau
    f = lambda u: abs(spec.psi_scalar(u))
    lo, hi = -60.0, 60.0
    if f(math.exp(hi)) < target:
        return math.exp(-hi)
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if f(math.exp(mid)) >= target:
            hi = mid
        else:
            lo = mid
    return math.exp(-hi)


def line_kernel(spec, lam, t, fine=None):
    """Cached ``G_t^lam`` on the line (``t = inf`` for the resolvent kernel)."""
    if spec.dimension != 1:
        raise SpecError("line kernels need a one-dimensional spec")
    if is_compound_poisson(spec):
        raise AtomAtOrigin("compound Poisson kernels have an atom; use the closed form")
    if lam < 0 or t <= 0 or (lam == 0 and not math.isfinite(t)):
        raise SpecError("need lam >= 0, t > 0 and not both lam = 0, t = inf")
    v = pure_drift_velocity(spec)
    if v is not None:
        return DriftKernel(v, lam, t)
    a = self_similar_index(spec)
    if a is not None:
        if lam == 0:
            s, base = t, (0.0, 1.0)
        else:
            s = 1.0 / lam
            base = (1.0, t / s if math.isfinite(t) else math.inf)
        kern = _computed(spec, base[0], base[1], BASE_RANGE)
        return ScaledKernel(kern, s ** (1.0 - 1.0 / a), s ** (1.0 / a))
    return _computed(spec, lam, t, fine or GENERIC_RANGE)


def _computed(spec, lam, t, rng):
    key = (spec.key(), float(lam), float(t), rng)
    if key in _CACHE:
        return _CACHE[key]
    rho = natural_scale(spec, lam, t)
    lo, hi, per = rng
    n = int(round(math.log10(hi / lo) * per)) + 1
    nodes = rho * np.geomspace(lo, hi, n)
    kind = "resolvent" if not math.isfinite(t) else "truncated"
    pos, perr = kernel_values(spec, kind, lam, t, nodes)
    if spec.symmetric:
        neg, nerr = pos, perr
    elif isinstance(spec, Subordinator):
        neg, nerr = np.zeros_like(pos), np.zeros_like(perr)
    else:
        neg, nerr = kernel_values(spec, kind, lam, t, -nodes)
    # QUADPACK's error estimate is pessimistic at low frequency, so values far
    # above the noise floor of the whole kernel are kept as well
    floor = 1e-9 * max(float(np.max(pos)), float(np.max(neg)))
    pos = np.where((pos > 2.0 * perr) | (pos > floor), pos, 0.0)
    neg = np.where((neg > 2.0 * nerr) | (neg > floor), neg, 0.0)
    if not (pos > 0).any() and not (neg > 0).any():
        raise QuadratureFailure("kernel vanished on all nodes")
    mass = (1.0 - math.exp(-lam * t)) / lam if lam > 0 else t
    kern = InterpolatedKernel(nodes, pos, nodes, neg, rho, mass)
    _CACHE[key] = kern
    return kern


def weight_kernel(phi: LaplaceExponent):
    """``w(z) = phi'(1/z) / (z^2 phi(1/z)^2)`` on ``z > 0``, zero elsewhere."""
    def fn(z):
        out = np.zeros(z.shape)
        pos = z > 0
        u = 1.0 / z[pos]
        with np.errstate(over="ignore", invalid="ignore"):
            val = np.asarray(phi.dphi(u), dtype=float) / (z[pos] ** 2 * np.asarray(phi.phi(u), dtype=float) ** 2)
        out[pos] = np.nan_to_num(val, nan=0.0, posinf=0.0)
        return out
    k = FunctionKernel(fn, scale=1.0, singular=True)
    k.kinks = (0.0,)
    return k


def clear_cache():
    _CACHE.clear()
