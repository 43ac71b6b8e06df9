"""Path simulation for the supported Levy families and Monte Carlo estimates of
occupation functionals.

Samplers produce increments over a step ``dt`` for a block of paths. Exact
generators are used for Gaussian parts, finite jump measures, symmetric stable
laws (Chambers-Mallows-Stuck) and stable subordinators (Kanter). Other
infinite-activity measures keep the jumps of size at least ``eps_jump`` and
replace the rest by their mean, which is the compensating drift.

Functionals are Riemann sums over the grid ``k dt, k = 1..K``. The weight of
grid point k is the exact integral of the discount over ``((k-1) dt, k dt]``,
so ``q = 1`` reproduces ``t`` and ``(1 - e^{-lam T}) / lam`` exactly.

Random streams come from ``SeedSequence([seed, chunk])`` for fixed-size
chunks of paths, so results do not depend on the number of worker threads.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .errors import HorizonTooShort, SamplerMismatch, SpecError
from .levy_model import (AtomicMeasure, Decomposition, DensityMeasure, DyadicAtoms, ExponentialJumps,
                         Product, StableMeasure, Subordinator, Triplet, ZeroMeasure, eval_psi)
from .potentials import Potential

CHUNK = 1024
TIME_BLOCK = 512
MAX_JUMP_RATE = 2e3


# --------------------------------------------------------------------------
# Samplers
# --------------------------------------------------------------------------

class _Part:
    """One independent summand of the increment, shape ``(n, b, d)``."""

    def sample(self, rng, n, b, dt):
        raise NotImplementedError


class _Gaussian(_Part):
    def __init__(self, drift, cov2):
        self.drift = np.asarray(drift, dtype=float)
        w, v = np.linalg.eigh(np.asarray(cov2, dtype=float))
        self.root = v * np.sqrt(np.clip(w, 0.0, None))
        self.zero_cov = not np.any(w > 0)

    def sample(self, rng, n, b, dt):
        out = np.broadcast_to(self.drift * dt, (n, b, self.drift.size)).copy()
        if not self.zero_cov:
            g = rng.standard_normal((n, b, self.drift.size))
            out += math.sqrt(dt) * g @ self.root.T
        return out


def symmetric_stable_standard(rng, alpha, size):
    """Draws with ``E e^{i xi S} = e^{-|xi|^alpha}`` (Chambers-Mallows-Stuck)."""
    v = rng.uniform(-0.5 * math.pi, 0.5 * math.pi, size)
    if alpha == 1.0:
        return np.tan(v)
    w = rng.standard_exponential(size)
    return (np.sin(alpha * v) / np.cos(v) ** (1.0 / alpha)
            * (np.cos(v - alpha * v) / w) ** ((1.0 - alpha) / alpha))


def positive_stable_standard(rng, alpha, size):
    """Draws with ``E e^{-u S} = e^{-u^alpha}``, ``0 < alpha < 1`` (Kanter)."""
    u = rng.uniform(0.0, math.pi, size)
    w = rng.standard_exponential(size)
    return (np.sin(alpha * u) / np.sin(u) ** (1.0 / alpha)
            * (np.sin((1.0 - alpha) * u) / w) ** ((1.0 - alpha) / alpha))


class _Stable(_Part):
    """Isotropic stable with exponent ``scale |xi|^alpha``."""

    def __init__(self, alpha, scale, dimension):
        self.alpha, self.scale, self.d = float(alpha), float(scale), int(dimension)

    def sample(self, rng, n, b, dt):
        c = (self.scale * dt) ** (1.0 / self.alpha)
        if self.d == 1:
            return c * symmetric_stable_standard(rng, self.alpha, (n, b, 1))
        # sub-Gaussian form: sqrt(2 S) G with S positive (alpha/2)-stable
        s = positive_stable_standard(rng, 0.5 * self.alpha, (n, b, 1))
        return c * np.sqrt(2.0 * s) * rng.standard_normal((n, b, self.d))


class _PositiveStable(_Part):
    """Subordinator with ``phi(u) = delta ((u + m)^alpha - m^alpha)``; m > 0 by rejection."""

    def __init__(self, alpha, delta=1.0, m=0.0):
        self.alpha, self.delta, self.m = float(alpha), float(delta), float(m)

    def sample(self, rng, n, b, dt):
        c = (self.delta * dt) ** (1.0 / self.alpha)
        size = n * b
        out = c * positive_stable_standard(rng, self.alpha, size)
        if self.m > 0:
            # accept with probability e^{-m x}; redraw the rejected ones
            bad = rng.uniform(size=size) > np.exp(-self.m * out)
            while bad.any():
                k = int(bad.sum())
                fresh = c * positive_stable_standard(rng, self.alpha, k)
                out[bad] = fresh
                still = rng.uniform(size=k) > np.exp(-self.m * fresh)
                idx = np.flatnonzero(bad)
                bad[idx[~still]] = False
        return out.reshape(n, b, 1)


class _Jumps(_Part):
    """Compound Poisson with total rate ``rate`` and jump law ``draw``."""

    def __init__(self, rate, draw, dimension):
        self.rate, self.draw, self.d = float(rate), draw, int(dimension)

    def sample(self, rng, n, b, dt):
        counts = rng.poisson(self.rate * dt, size=n * b)
        total = int(counts.sum())
        out = np.zeros((n * b, self.d))
        if total:
            z = np.asarray(self.draw(rng, total), dtype=float).reshape(total, self.d)
            idx = np.repeat(np.arange(n * b), counts)
            for j in range(self.d):
                out[:, j] = np.bincount(idx, weights=z[:, j], minlength=n * b)
        return out.reshape(n, b, self.d)


@dataclass
class PathSampler:
    """Sum of independent parts, optionally stacked into product coordinates."""

    family: str
    dimension: int
    parts: list = field(default_factory=list)
    blocks: list | None = None
    exact: bool = True
    eps_jump: float | None = None
    truncation_bias: float = 0.0
    small_jump_std: float = 0.0

    def increments(self, rng, n, b, dt):
        if self.blocks is not None:
            return np.concatenate([s.increments(rng, n, b, dt) for s in self.blocks], axis=2)
        out = np.zeros((n, b, self.dimension))
        for p in self.parts:
            out += p.sample(rng, n, b, dt)
        return out

    def to_dict(self):
        return {"family": self.family, "dimension": self.dimension, "exact": self.exact,
                "eps_jump": self.eps_jump, "truncation_bias": _num(self.truncation_bias),
                "small_jump_std": _num(self.small_jump_std)}


def _num(v):
    v = float(v)
    return v if math.isfinite(v) else ("inf" if v > 0 else "-inf")


def _atomic_draw(measure: AtomicMeasure):
    p = measure.masses / measure.masses.sum()
    locs = measure.locations
    return lambda rng, k: locs[rng.choice(p.size, size=k, p=p)]


def _density_tables(measure: DensityMeasure, eps):
    """Inverse-CDF tables for the one-sided components restricted to ``|z| >= eps``."""
    tables = []
    comps = measure._components()
    for j, (side, lo, hi, f) in enumerate(comps):
        a = max(lo, eps)
        if a >= hi:
            continue
        piece = measure.pieces[j] if j < len(measure.pieces) else None
        if piece is not None and piece.decay == 0 and math.isfinite(hi):
            mass = piece.moment(1.0, a, hi)
            e = piece.exponent
            tables.append((side, mass, ("power", e, a, hi)))
            continue
        top = hi
        if not math.isfinite(top):
            decay = piece.decay if piece is not None else 0.0
            top = a + 60.0 / decay if decay > 0 else a * 1e9
        r = np.geomspace(a, top, 6001)
        dens = r * np.asarray(f(r), dtype=float)
        cdf = np.concatenate([[0.0], np.cumsum(0.5 * (dens[1:] + dens[:-1]) * np.diff(np.log(r)))])
        mass = float(cdf[-1])
        if mass > 0:
            tables.append((side, mass, ("table", cdf / mass, np.log(r))))
    return tables


def _draw_table(rng, spec, k):
    u = rng.uniform(size=k)
    if spec[0] == "power":
        _, e, a, b = spec
        if abs(e + 1.0) < 1e-12:
            return a * (b / a) ** u
        p = e + 1.0
        return (a ** p + u * (b ** p - a ** p)) ** (1.0 / p)
    _, cdf, logr = spec
    return np.exp(np.interp(u, cdf, logr))


def _small_moments(measure, eps):
    """``int_{|z|<eps} |z| nu``, ``int_{|z|<eps} z^2 nu`` and ``int_{eps<=|z|<1} z nu``."""
    if isinstance(measure, DensityMeasure):
        abs1 = sq = comp = 0.0
        comps = measure._components()
        for j, (side, lo, hi, f) in enumerate(comps):
            piece = measure.pieces[j] if j < len(measure.pieces) else None
            if piece is not None:
                m1 = piece.moment(2.0, 0.0, eps)
                m2 = piece.moment(3.0, 0.0, eps)
                mc = piece.moment(2.0, eps, 1.0) if eps < 1.0 else 0.0
            else:
                g1 = lambda r: r * float(f(r))
                g2 = lambda r: r * r * float(f(r))
                b = min(hi, eps)
                m1 = integrate.quad(g1, lo, b, limit=200)[0] if lo < b else 0.0
                m2 = integrate.quad(g2, lo, b, limit=200)[0] if lo < b else 0.0
                a2, b2 = max(lo, eps), min(hi, 1.0)
                mc = integrate.quad(g1, a2, b2, limit=200)[0] if a2 < b2 else 0.0
            abs1 += m1
            sq += m2
            comp += side * mc
        return abs1, sq, comp
    if isinstance(measure, DyadicAtoms):
        # atoms +-2^n with weight 2^{-n alpha} below 1: geometric sums over 2^n < eps
        n0 = min(math.ceil(math.log2(eps)) - 1, 0)
        a = measure.alpha

        def geo(k):
            r = k - a
            return 2.0 * 2.0 ** (n0 * r) / (1.0 - 2.0 ** -r) if r > 0 else math.inf
        return geo(1.0), geo(2.0), 0.0
    raise SpecError(f"no truncation rule for {type(measure).__name__}")


def _big_rate(measure, eps):
    if isinstance(measure, DensityMeasure):
        return sum(m for _, m, _ in _density_tables(measure, eps))
    ns = np.arange(math.ceil(math.log2(eps)), measure.n_max + 1)
    return float(2.0 * measure.weight(2.0 ** ns).sum())


def _choose_eps(measure, t, target_se):
    """Largest ``2^-k`` with truncation bias ``t int_{|z|<eps}|z| nu <= 0.1 target_se``,
    subject to at most ``MAX_JUMP_RATE`` expected large jumps per unit time."""
    best = 1.0
    for k in range(0, 60):
        eps = 2.0 ** -k
        if _big_rate(measure, eps) > MAX_JUMP_RATE:
            break
        best = eps
        abs1, _, _ = _small_moments(measure, eps)
        if t * abs1 <= 0.1 * target_se:
            break
    return best


def _truncated_part(measure, eps):
    if isinstance(measure, DensityMeasure):
        tables = _density_tables(measure, eps)
        rate = sum(m for _, m, _ in tables)
        probs = np.array([m for _, m, _ in tables]) / rate if rate > 0 else np.zeros(0)

        def draw(rng, k):
            which = rng.choice(len(tables), size=k, p=probs)
            out = np.empty(k)
            for j, (side, _, spec) in enumerate(tables):
                sel = which == j
                out[sel] = side * _draw_table(rng, spec, int(sel.sum()))
            return out
        return _Jumps(rate, draw, 1) if rate > 0 else None
    ns = np.arange(math.ceil(math.log2(eps)), measure.n_max + 1)
    w = measure.weight(2.0 ** ns)
    rate = float(2.0 * w.sum())
    p = w / w.sum()

    def draw_atoms(rng, k):
        return 2.0 ** ns[rng.choice(ns.size, size=k, p=p)] * rng.choice((-1.0, 1.0), size=k)
    return _Jumps(rate, draw_atoms, 1)


def sampler_for(spec, eps_jump=None, t=1.0, target_se=1e-3, gaussian_small=None) -> PathSampler:
    """Sampler for ``spec``; ``eps_jump`` forces the small-jump truncation level.

    ``gaussian_small`` replaces the dropped small jumps by a centred Gaussian
    with their variance; by default it is used for infinite variation only.
    """
    if isinstance(spec, Product):
        blocks = [sampler_for(c, eps_jump, t, target_se, gaussian_small) for c in spec.components]
        return PathSampler("Product", spec.dimension, blocks=blocks, exact=all(b.exact for b in blocks),
                           truncation_bias=sum(b.truncation_bias for b in blocks))
    if isinstance(spec, Subordinator):
        fam, p = spec.phi.family, dict(spec.phi.params)
        if fam == "stable":
            return PathSampler("StableSubordinator", 1, [_PositiveStable(p["alpha"])])
        if fam == "shifted_stable":
            return PathSampler("StableSubordinator", 1, [_PositiveStable(p["alpha"], p["delta"], p["m"])])
        raise SpecError(f"no sampler for the subordinator family {fam!r}")
    if isinstance(spec, Decomposition):
        z = sampler_for(spec.Z, eps_jump, t, target_se, gaussian_small)
        e = spec.direction

        class _Line(_Part):
            def sample(self, rng, n, b, dt):
                return z.increments(rng, n, b, dt) * e

        y = spec.Y
        parts = [_Line(), _Jumps(y.total_mass(), _atomic_draw(y), spec.dimension)]
        return PathSampler("Decomposition", spec.dimension, parts, exact=z.exact,
                           truncation_bias=z.truncation_bias)
    if not isinstance(spec, Triplet):
        raise SpecError(f"no sampler for {type(spec).__name__}")
    d = spec.dimension
    nu = spec.nu
    gamma = spec.gamma.copy()
    parts = []
    family = "Brownian"
    exact, eps, bias, sd = True, None, 0.0, 0.0
    if isinstance(nu, ZeroMeasure):
        family = "Brownian" if np.any(spec.A != 0) else "Drift"
    elif isinstance(nu, (AtomicMeasure, ExponentialJumps)):
        family = "CompoundPoisson"
        # finite measure: drift gamma_0 plus every jump
        gamma = gamma - np.asarray(nu.small_first_moment(), dtype=float)
        if isinstance(nu, AtomicMeasure):
            parts.append(_Jumps(nu.total_mass(), _atomic_draw(nu), d))
        else:
            sgn, rate = float(nu.side), nu.rate
            parts.append(_Jumps(nu.mass, lambda rng, k: sgn * rng.exponential(1.0 / rate, k), 1))
    elif isinstance(nu, StableMeasure):
        family = "Stable1D" if d == 1 else "StableIsotropic"
        parts.append(_Stable(nu.alpha, nu.scale, d))
    elif isinstance(nu, (DensityMeasure, DyadicAtoms)):
        fv = nu.variation().finite
        family = "DriftPlusFiniteVariationJumps" if fv else "TruncatedJumps"
        eps = float(eps_jump) if eps_jump is not None else _choose_eps(nu, t, target_se)
        bias, sq, comp = _small_moments(nu, eps)
        sd = math.sqrt(sq)
        if gaussian_small if gaussian_small is not None else not fv:
            extra_cov = 0.5 * sq * np.eye(d)
        else:
            extra_cov = None
        part = _truncated_part(nu, eps)
        if part is not None:
            parts.append(part)
        # small jumps replaced by their mean; large jumps inside the unit ball compensated
        gamma = gamma - comp
        exact = False
    else:
        raise SpecError(f"no sampler for {type(nu).__name__}")
    cov2 = 2.0 * spec.A
    if isinstance(nu, (DensityMeasure, DyadicAtoms)) and extra_cov is not None:
        cov2 = cov2 + 2.0 * extra_cov
    parts.insert(0, _Gaussian(gamma, cov2))
    if family == "Brownian" and not np.any(spec.A != 0):
        family = "Drift"
    return PathSampler(family, d, parts, exact=exact, eps_jump=eps, truncation_bias=bias, small_jump_std=sd)


# --------------------------------------------------------------------------
# Estimates
# --------------------------------------------------------------------------

@dataclass
class MCEstimate:
    value: float
    se: float
    n_paths: int
    dt: float
    steps: int
    horizon: float
    seed: int
    sampler: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    @property
    def interval(self):
        return (self.value - 3.0 * self.se, self.value + 3.0 * self.se)

    def to_dict(self):
        lo, hi = self.interval
        return {"value": self.value, "se": self.se, "interval": [lo, hi], "n_paths": self.n_paths,
                "dt": self.dt, "steps": self.steps, "horizon": self.horizon, "seed": self.seed,
                "sampler": self.sampler, **self.extra}


def _evaluator(q, dimension):
    if isinstance(q, Potential):
        if not q.pieces and not q.is_zero:
            raise SpecError(f"potential {q.label} has no pointwise form")
        if q.dimension != dimension and not (q.radial and dimension > 1):
            raise SpecError("potential and process dimensions differ")
        if dimension == 1:
            return lambda y: np.abs(q(y[..., 0]))
        return lambda y: np.abs(q(np.linalg.norm(y, axis=-1)))
    if callable(q):
        if dimension == 1:
            return lambda y: np.abs(np.asarray(q(y[..., 0]), dtype=float))
        return lambda y: np.abs(np.asarray(q(y), dtype=float))
    raise SpecError("q must be a Potential or a callable")


def _threads():
    try:
        return max(1, int(os.environ.get("LEVY_KATO_THREADS", "0")) or min(8, os.cpu_count() or 1))
    except ValueError:
        return 1


def _run(sampler, n_paths, seed, steps, dt, per_step):
    """Per-path sums of ``per_step(k0, positions)`` over all steps, by chunks.

    ``per_step`` returns an array ``(n, m)`` of contributions for the block of
    steps starting at index ``k0`` (1-based); the result is ``(n_paths, m)``.
    """
    n_chunks = -(-n_paths // CHUNK)

    def chunk(c):
        n = min(CHUNK, n_paths - c * CHUNK)
        rng = np.random.default_rng(np.random.SeedSequence([int(seed), c]))
        pos = np.zeros((n, 1, sampler.dimension))
        acc = None
        k0 = 1
        while k0 <= steps:
            b = min(TIME_BLOCK, steps - k0 + 1)
            path = pos + np.cumsum(sampler.increments(rng, n, b, dt), axis=1)
            part = per_step(k0, path)
            acc = part if acc is None else acc + part
            pos = path[:, -1:, :]
            k0 += b
        return acc

    with ThreadPoolExecutor(max_workers=_threads()) as ex:
        parts = list(ex.map(chunk, range(n_chunks)))
    return np.concatenate(parts, axis=0)


def _stats(values):
    n = values.shape[0]
    mean = values.mean(axis=0)
    se = values.std(axis=0, ddof=1) / math.sqrt(n) if n > 1 else np.full(mean.shape, math.inf)
    return mean, se


def estimate_time_functional(sampler, q, x=0.0, t=1.0, n_paths=100000, seed=0, dt=None):
    """``E^x int_0^t |q(X_u)| du`` as ``dt * sum_{k=1..K} |q(X_{k dt} + x)|``."""
    if t <= 0 or n_paths < 1:
        raise SpecError("need t > 0 and n_paths >= 1")
    steps = max(1, int(round(t / (dt or t / 1000.0))))
    step = t / steps
    f = _evaluator(q, sampler.dimension)
    x = np.broadcast_to(np.asarray(x, dtype=float), (sampler.dimension,))

    def per_step(k0, path):
        return step * f(path + x).sum(axis=1, keepdims=True)

    vals = _run(sampler, n_paths, seed, steps, step, per_step)
    mean, se = _stats(vals)
    return MCEstimate(float(mean[0]), float(se[0]), int(n_paths), step, steps, float(t), int(seed),
                      sampler.to_dict())


def estimate_space_functional(sampler, q, x=0.0, lam=1.0, r=math.inf, horizon=None, n_paths=10000,
                              seed=0, dt=None, max_doublings=3):
    """``E^x int_0^T e^{-lam u} 1_{B(x,r)}(X_u) |q(X_u)| du`` on the grid ``k dt``.

    ``r`` may be a sequence; all radii then share the same paths and the
    result is a list. With ``horizon=None`` the horizon starts at ``6 / lam``
    and doubles until ``e^{-lam T} / lam < 0.01 * value``; an explicit horizon
    that violates the bound raises :class:`HorizonTooShort`.
    """
    if lam <= 0:
        raise SpecError("lam must be positive")
    radii = np.atleast_1d(np.asarray(r, dtype=float))
    if np.any(radii <= 0):
        raise SpecError("radii must be positive")
    T = float(horizon) if horizon is not None else 6.0 / lam
    rmin = float(radii.min())
    f = _evaluator(q, sampler.dimension)
    x = np.broadcast_to(np.asarray(x, dtype=float), (sampler.dimension,))
    for attempt in range(max_doublings + 1):
        base = T / 1000.0 if dt is None else dt
        step0 = min(base, rmin * rmin / 16.0) if math.isfinite(rmin) else base
        steps = max(1, int(math.ceil(T / step0)))
        step = T / steps
        scale = (math.exp(lam * step) - 1.0) / lam

        def per_step(k0, path, step=step, scale=scale):
            k = np.arange(k0, k0 + path.shape[1])
            w = scale * np.exp(-lam * k * step)
            qv = f(path + x) * w
            dist = np.linalg.norm(path, axis=-1)
            return np.stack([(qv * (dist < rr)).sum(axis=1) for rr in radii], axis=1)

        vals = _run(sampler, n_paths, seed, steps, step, per_step)
        mean, se = _stats(vals)
        tail = math.exp(-lam * T) / lam
        ok = bool(np.all(tail < 0.01 * mean))
        if ok:
            break
        if horizon is not None or attempt == max_doublings:
            raise HorizonTooShort(f"tail bound {tail:.3g} exceeds 1% of the estimate at T = {T:g}")
        T *= 2.0
    out = [MCEstimate(float(m), float(s), int(n_paths), step, steps, T, int(seed), sampler.to_dict(),
                      {"radius": _num(rr), "lam": float(lam), "tail_bound": tail})
           for m, s, rr in zip(mean, se, radii)]
    return out if np.ndim(r) else out[0]


# --------------------------------------------------------------------------
# Sampler validation
# --------------------------------------------------------------------------

def _frequencies(spec, t, dimension, count=16):
    """Frequencies where ``t |psi|`` runs over roughly ``[0.05, 3]``."""
    def mag(s):
        arg = np.array([s]) if dimension == 1 else np.full((1, dimension), s / math.sqrt(dimension))
        return t * abs(complex(np.asarray(eval_psi(spec, arg)).reshape(-1)[0]))

    targets = np.geomspace(0.05, 3.0, count)
    out = []
    for target in targets:
        lo, hi = -20.0, 20.0
        if mag(math.exp(hi)) < target:
            # bounded exponent (finite jump measure): fall back to a fixed range
            return np.geomspace(0.1, 10.0, count)
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            if mag(math.exp(mid)) >= target:
                hi = mid
            else:
                lo = mid
        out.append(math.exp(hi))
    return np.array(out)


def validate_sampler(sampler, spec, t=1.0, n_paths=100000, seed=0, xi=None, raise_on_fail=True):
    """Compare the empirical characteristic function of ``X_t`` with ``e^{-t psi}``.

    Flags frequencies whose deviation exceeds ``4 / sqrt(n)``; raises
    :class:`SamplerMismatch` (carrying the report) when any are flagged.
    """
    d = sampler.dimension
    xs = _frequencies(spec, t, d) if xi is None else np.asarray(xi, dtype=float)
    n_chunks = -(-n_paths // CHUNK)
    samples = []
    for c in range(n_chunks):
        n = min(CHUNK, n_paths - c * CHUNK)
        rng = np.random.default_rng(np.random.SeedSequence([int(seed), c]))
        samples.append(sampler.increments(rng, n, 1, t)[:, 0, :])
    X = np.concatenate(samples, axis=0)
    direction = np.ones(d) / math.sqrt(d)
    proj = X @ direction
    ecf = np.array([np.mean(np.exp(1j * s * proj)) for s in xs])
    freq = xs if d == 1 else xs[:, None] * direction
    target = np.exp(-t * np.asarray(eval_psi(spec, freq), dtype=complex).reshape(-1))
    dev = np.abs(ecf - target)
    thr = 4.0 / math.sqrt(n_paths)
    report = {"xi": xs.tolist(), "ecf_re": ecf.real.tolist(), "ecf_im": ecf.imag.tolist(),
              "target_re": target.real.tolist(), "target_im": target.imag.tolist(),
              "deviation": dev.tolist(), "threshold": thr, "max_deviation": float(dev.max()),
              "flagged": [int(i) for i in np.flatnonzero(dev > thr)], "passed": bool(np.all(dev <= thr)),
              "n_paths": int(n_paths), "t": float(t), "sampler": sampler.to_dict()}
    if raise_on_fail and not report["passed"]:
        raise SamplerMismatch(f"empirical characteristic function deviates by {dev.max():.3g} > {thr:.3g}",
                              report)
    return report
