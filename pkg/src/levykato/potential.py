"""Transition densities and (truncated) lambda-potential kernels in one dimension.

Every kernel is the inverse Fourier transform of a symbol ``F``:

* transition density ``p(t, .)``:  ``F = exp(-t psi)``
* potential density ``G^lam``:      ``F = 1 / (lam + psi)``
* truncated kernel ``G_t^lam``:     ``F = (1 - exp(-t (lam + psi))) / (lam + psi)``

and ``G(x) = (1/pi) int_0^inf [cos(x s) Re F(s) + sin(x s) Im F(s)] ds``, which
uses ``F(-s) = conj F(s)``. The oscillatory integrals are evaluated with
QUADPACK's Fourier routine, one call per abscissa.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .classifier import RegularityConfig, is_compound_poisson, regularity_integral
from .errors import (AtomAtOrigin, CaseAViolation, MissingDerivative, QuadratureFailure,
                     SpecError, TailNotIntegrable)
from .levy_model import LaplaceExponent, Subordinator
from .quadrature import adaptive_gl, fourier_half_line, gl_rule

CLIP_REL = 1e-10


@dataclass
class KernelGrid:
    grid: np.ndarray
    values: np.ndarray
    lam: float
    t: float
    mass_estimate: float
    quadrature_error: np.ndarray
    kind: str

    def to_csv(self) -> str:
        rows = ["x,value,err"]
        rows += [f"{x:.17g},{v:.17g},{e:.3g}" for x, v, e in zip(self.grid, self.values, self.quadrature_error)]
        return "\n".join(rows) + "\n"


def _symbol(spec, kind, lam, t):
    """Scalar callable s -> F(s) for the requested kernel."""
    psi = spec.psi_scalar
    big = 1e150

    if kind == "density":
        def F(s):
            v = psi(s)
            if t * v.real > 700.0:
                return 0j
            return cmath.exp(-t * v)
        return F
    if kind == "resolvent":
        def F(s):
            w = lam + psi(s)
            if abs(w.real) > big or abs(w.imag) > big:
                return 0j
            return 1.0 / w
        return F
    if kind == "truncated":
        def F(s):
            w = lam + psi(s)
            if abs(w.real) > big or abs(w.imag) > big:
                return 0j
            z = t * w
            if abs(z) < 1e-5:
                return t * (1.0 - z / 2.0 + z * z / 6.0)
            if z.real > 700.0:
                return 1.0 / w
            return (1.0 - cmath.exp(-z)) / w
        return F
    raise SpecError(f"unknown kernel kind {kind!r}")


def kernel_point(spec, kind, lam, t, x, symmetric=None):
    """One kernel value with its QUADPACK error estimate: ``(value, err, ok)``."""
    F = _symbol(spec, kind, lam, t)
    sym = spec.symmetric if symmetric is None else symmetric
    re = lambda s: F(s).real
    im = None if sym else (lambda s: F(s).imag)
    return fourier_half_line(re, im, float(x))


def kernel_values(spec, kind, lam, t, xs):
    xs = np.asarray(xs, dtype=float)
    F = _symbol(spec, kind, lam, t)
    re = lambda s: F(s).real
    im = None if spec.symmetric else (lambda s: F(s).imag)
    vals = np.empty(xs.shape)
    errs = np.empty(xs.shape)
    cache = {}
    for i, x in enumerate(xs.ravel()):
        key = abs(x) if im is None else x
        if key not in cache:
            cache[key] = fourier_half_line(re, im, float(key))
        v, e, ok = cache[key]
        vals.flat[i] = v
        errs.flat[i] = e
    return vals, errs


def _clip(values, errs):
    vmax = float(np.max(np.abs(values))) if values.size else 0.0
    neg = values < 0
    tolerated = (np.abs(values) <= CLIP_REL * vmax) | (np.abs(values) <= 2.0 * errs)
    if np.any(neg & ~tolerated):
        i = int(np.argmax(neg & ~tolerated))
        raise QuadratureFailure(f"negative kernel value {values.flat[i]:.3e} beyond the error estimate")
    return np.where(neg, 0.0, values)


def _trapezoid(x, y):
    x = np.asarray(x, dtype=float)
    if x.size < 2:
        return 0.0
    return float(np.sum(0.5 * (y[1:] + y[:-1]) * np.diff(x)))


def _check_density_route(spec):
    if spec.dimension != 1:
        raise SpecError("kernels are computed for one-dimensional specs only")
    if is_compound_poisson(spec):
        raise AtomAtOrigin("compound Poisson law has an atom at the origin and no density")


def _check_tail(spec, t):
    """``exp(-t Re psi)`` must decay for the density to exist as a Fourier integral."""
    for s in (1e4, 1e6, 1e8, 1e10, 1e12):
        if t * spec.psi_scalar(s).real > 40.0:
            return
    raise TailNotIntegrable(f"exp(-t Re psi) does not decay at t={t}")


def _grid(grid):
    g = np.asarray(grid, dtype=float)
    if g.ndim != 1 or g.size == 0 or np.any(np.diff(g) <= 0):
        raise SpecError("grid must be a strictly increasing 1D array")
    return g


def transition_density(spec, t, grid) -> KernelGrid:
    """``p(t, x)`` on ``grid`` by Fourier inversion of ``exp(-t psi)``."""
    g = _grid(grid)
    if t <= 0:
        raise SpecError("t must be positive")
    _check_density_route(spec)
    _check_tail(spec, t)
    vals, errs = kernel_values(spec, "density", 0.0, t, g)
    vals = _clip(vals, errs)
    return KernelGrid(g, vals, 0.0, t, _trapezoid(g, vals), errs, "density")


def potential_density(spec, lam, grid, config: RegularityConfig | None = None) -> KernelGrid:
    """``G^lam(x)`` on ``grid``; requires a convergent regularity integral."""
    g = _grid(grid)
    if lam <= 0:
        raise SpecError("lambda must be positive")
    _check_density_route(spec)
    diag = regularity_integral(spec, lam, config)
    if diag.verdict != "Converges":
        raise CaseAViolation(f"int Re 1/(lam + psi) does not converge ({diag.verdict})")
    vals, errs = kernel_values(spec, "resolvent", lam, math.inf, g)
    vals = _clip(vals, errs)
    return KernelGrid(g, vals, lam, math.inf, _trapezoid(g, vals), errs, "resolvent")


def truncated_potential(spec, lam, t, grid, method="fourier") -> KernelGrid:
    """``G_t^lam(x) = int_0^t e^{-lam u} p(u, x) du`` on ``grid``.

    ``method``: ``"fourier"`` inverts the closed-form symbol directly;
    ``"time"`` integrates transition-density slices over u on geometric
    panels; ``"subtraction"`` uses ``G^lam - e^{-lam t} p(t, .) * G^lam``.
    """
    g = _grid(grid)
    if lam < 0 or t <= 0:
        raise SpecError("need lam >= 0 and t > 0")
    _check_density_route(spec)
    if method == "fourier":
        vals, errs = kernel_values(spec, "truncated", lam, t, g)
    elif method == "time":
        vals, errs = _truncated_by_time(spec, lam, t, g)
    elif method == "subtraction":
        vals, errs = _truncated_by_subtraction(spec, lam, t, g)
    else:
        raise SpecError(f"unknown method {method!r}")
    vals = _clip(vals, errs)
    return KernelGrid(g, vals, lam, t, _trapezoid(g, vals), errs, "truncated")


def _truncated_by_time(spec, lam, t, g, n_gl=8, u_min_rel=1e-3):
    # the head [0, u_min] comes from the closed-form symbol, which loses accuracy for very small t
    u_min = u_min_rel * t
    head, herr = kernel_values(spec, "truncated", lam, u_min, g)
    edges = np.geomspace(u_min, t, int(math.ceil(math.log2(t / u_min))) + 1)
    xg, wg = gl_rule(n_gl)
    vals = head.copy()
    errs = herr.copy()
    for a, b in zip(edges[:-1], edges[1:]):
        us = 0.5 * (a + b) + 0.5 * (b - a) * xg
        for u, w in zip(us, wg):
            _check_tail(spec, u)
            p, e = kernel_values(spec, "density", 0.0, u, g)
            vals += 0.5 * (b - a) * w * math.exp(-lam * u) * p
            errs += 0.5 * (b - a) * w * e
    return vals, errs


def _truncated_by_subtraction(spec, lam, t, g, half_width=None, n=4001):
    if lam <= 0:
        raise SpecError("the subtraction form needs lam > 0")
    L = half_width or max(30.0, 4.0 * float(np.max(np.abs(g))))
    y = np.linspace(-L, L, n)
    h = y[1] - y[0]
    Glam, e1 = kernel_values(spec, "resolvent", lam, math.inf, y)
    p, e2 = kernel_values(spec, "density", 0.0, t, y)
    conv = np.convolve(p, Glam, mode="same") * h
    diff = Glam - math.exp(-lam * t) * conv
    vals = np.interp(g, y, diff)
    errs = np.interp(g, y, e1 + math.exp(-lam * t) * np.convolve(e2, Glam, mode="same") * h) + h * h
    return vals, errs


def subordinator_weight(phi, z) -> KernelGrid:
    """``w(z) = phi'(1/z) / (z^2 phi(1/z)^2)`` for ``0 < z <= 1``.

    Two-sided comparable with the potential density of the subordinator,
    not equal to it.
    """
    if isinstance(phi, Subordinator):
        phi = phi.phi
    if not isinstance(phi, LaplaceExponent):
        raise SpecError("need a Laplace exponent")
    z = np.asarray(z, dtype=float)
    if np.any(z <= 0) or np.any(z > 1):
        raise SpecError("weight grid must lie in (0, 1]")
    u = 1.0 / z
    try:
        d = np.asarray(phi.dphi(u), dtype=float)
    except MissingDerivative:
        raise
    f = np.asarray(phi.phi(u), dtype=float)
    w = d / (z * z * f * f)
    return KernelGrid(z, w, 0.0, math.inf, _trapezoid(z, w), np.zeros_like(w), "weight")


def weight_function(phi):
    """Vectorised ``z -> w(z)``, zero for ``z <= 0``."""
    if isinstance(phi, Subordinator):
        phi = phi.phi

    def w(z):
        z = np.asarray(z, dtype=float)
        out = np.zeros(z.shape)
        pos = z > 0
        u = 1.0 / z[pos]
        out[pos] = np.asarray(phi.dphi(u), dtype=float) / (z[pos] ** 2 * np.asarray(phi.phi(u), dtype=float) ** 2)
        return out
    return w


# --------------------------------------------------------------------------
# inequality checks on kernels
# --------------------------------------------------------------------------

@dataclass
class BoundReport:
    name: str
    holds: bool
    slack: float
    details: dict


def harnack_check(kernel: KernelGrid, hitting, max_pairs=400) -> BoundReport:
    """``G(x) <= M G(y)`` for ``|x - y| <= 1`` with ``M = sup_{|z|<=1} 1/h(z)``.

    The slack is ``min (M G(y) + eps - G(x))`` over sampled pairs, where eps is
    the propagated quadrature error of the two values.
    """
    g, v, e = kernel.grid, kernel.values, kernel.quadrature_error
    near = np.abs(hitting.grid) <= 1.0
    M = float(np.max(1.0 / np.maximum(hitting.values[near], 1e-300)))
    step = max(1, g.size // max_pairs)
    idx = np.arange(0, g.size, step)
    slack = math.inf
    worst = None
    for i in idx:
        js = np.nonzero(np.abs(g - g[i]) <= 1.0)[0]
        eps = M * e[js] + e[i]
        s = M * v[js] + eps - v[i]
        k = int(np.argmin(s))
        if s[k] < slack:
            slack = float(s[k])
            worst = (float(g[i]), float(g[js[k]]))
    return BoundReport("harnack", slack >= 0.0, slack, {"M": M, "worst_pair": worst})


def mass_of(kernel: KernelGrid) -> float:
    return kernel.mass_estimate


def integrate_against(kernel_fn, q, lo, hi, rtol=1e-8):
    """``int_lo^hi kernel_fn(z) q(z) dz`` by adaptive Gauss-Legendre."""
    val, err = adaptive_gl(lambda z: kernel_fn(z) * q(z), lo, hi, rtol=rtol, atol=1e-14, n=10)
    return val, err
