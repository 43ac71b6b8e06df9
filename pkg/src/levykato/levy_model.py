"""Levy processes: triplets, Levy measures, Laplace exponents, scaling tests.

Convention: ``E exp(i<xi, X_t>) = exp(-t psi(xi))`` with

    psi(xi) = -i<gamma, xi> + <xi, A xi>
              + int (1 - e^{i<xi,z>} + i<xi,z> 1_{|z|<1}) nu(dz).

With this normalisation a Brownian spec with ``A = a`` has variance ``2 a t``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy import integrate, special
from scipy.interpolate import PchipInterpolator

from .errors import (EmptyGrid, MissingDerivative, NonIntegrableMeasure,
                     QuadratureFailure, SpecError)
from .quadrature import dyadic_decay, fourier_tail

FV_LEVELS = 20


class Undefined:
    """Marker for a drift that does not exist (infinite variation)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Undefined"

    def __bool__(self):
        return False


UNDEFINED = Undefined()


def _sin_minus_id(x):
    """sin(x) - x without cancellation for small |x|."""
    x = np.asarray(x, dtype=float)
    out = np.sin(x) - x
    small = np.abs(x) < 1e-2
    xs = x[small]
    out[small] = -xs ** 3 / 6.0 + xs ** 5 / 120.0 - xs ** 7 / 5040.0
    return out


def _one_minus_cos(x):
    return 2.0 * np.sin(0.5 * np.asarray(x, dtype=float)) ** 2


# --------------------------------------------------------------------------
# Levy measures
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class VariationFacts:
    """Outcome of the test for ``int (|z| ^ 1) nu(dz) < inf``."""

    finite: bool | None
    small_abs_moment: float
    shell_integrals: tuple = ()
    ratio: float = 0.0
    method: str = "analytic"


class LevyMeasure:
    dimension: int = 1
    symmetric: bool = True

    def psi(self, xi):
        raise NotImplementedError

    def psi_scalar(self, x: float) -> complex:
        return complex(self.psi(np.array([x]))[0])

    def total_mass(self) -> float:
        raise NotImplementedError

    def small_first_moment(self):
        """``int z 1_{|z|<1} nu(dz)``; only meaningful with finite variation."""
        raise NotImplementedError

    def variation(self) -> VariationFacts:
        raise NotImplementedError

    def key(self) -> str:
        raise NotImplementedError

    def far_mass(self) -> float:
        """``nu(|z| >= 1)``."""
        raise NotImplementedError


@dataclass(frozen=True)
class ZeroMeasure(LevyMeasure):
    dimension: int = 1

    symmetric = True

    def psi(self, xi):
        xi = np.asarray(xi, dtype=float)
        shape = xi.shape if self.dimension == 1 else xi.shape[:-1]
        return np.zeros(shape, dtype=complex)

    def psi_scalar(self, x):
        return 0j

    def total_mass(self):
        return 0.0

    def far_mass(self):
        return 0.0

    def small_first_moment(self):
        return np.zeros(self.dimension)

    def variation(self):
        return VariationFacts(True, 0.0)

    def key(self):
        return f"zero({self.dimension})"


class AtomicMeasure(LevyMeasure):
    """Finitely many atoms ``sum_j m_j delta_{z_j}``."""

    def __init__(self, locations, masses):
        loc = np.asarray(locations, dtype=float)
        if loc.ndim == 1:
            loc = loc[:, None]
        m = np.asarray(masses, dtype=float).ravel()
        if loc.shape[0] != m.size or m.size == 0:
            raise SpecError("atoms need one mass per location")
        if np.any(m <= 0) or not np.all(np.isfinite(m)):
            raise SpecError("atom masses must be positive and finite")
        if np.any(np.linalg.norm(loc, axis=1) == 0):
            raise SpecError("atoms cannot sit at the origin")
        self.locations = loc
        self.masses = m
        self.dimension = loc.shape[1]
        norms = np.linalg.norm(loc, axis=1)
        self._inner = norms < 1.0
        self.symmetric = self._check_symmetric()

    def _check_symmetric(self):
        pairs = {}
        for z, m in zip(map(tuple, np.round(self.locations, 14)), self.masses):
            pairs[z] = pairs.get(z, 0.0) + m
        for z, m in pairs.items():
            mz = tuple(-c for c in z)
            if not math.isclose(pairs.get(mz, 0.0), m, rel_tol=1e-12):
                return False
        return True

    def psi(self, xi):
        xi = np.asarray(xi, dtype=float)
        if self.dimension == 1:
            dots = xi[..., None] * self.locations[:, 0]
        else:
            dots = xi @ self.locations.T
        comp = np.where(self._inner, dots, 0.0)
        terms = (_one_minus_cos(dots) - 1j * np.sin(dots) + 1j * comp) * self.masses
        return terms.sum(axis=-1)

    def psi_scalar(self, x):
        s = 0j
        for z, m, inner in zip(self.locations[:, 0], self.masses, self._inner):
            d = x * z
            s += m * (2.0 * math.sin(0.5 * d) ** 2 - 1j * math.sin(d) + (1j * d if inner else 0.0))
        return s

    def total_mass(self):
        return float(self.masses.sum())

    def far_mass(self):
        return float(self.masses[~self._inner].sum())

    def small_first_moment(self):
        return (self.locations[self._inner] * self.masses[self._inner, None]).sum(axis=0)

    def variation(self):
        norms = np.linalg.norm(self.locations, axis=1)
        return VariationFacts(True, float((np.minimum(norms, 1.0) * self.masses).sum()))

    def key(self):
        return "atoms(" + ",".join(f"{tuple(z)}:{m!r}" for z, m in zip(self.locations.tolist(), self.masses)) + ")"


@dataclass(frozen=True)
class PowerPiece:
    """``coef * |z|^exponent * exp(-decay |z|)`` on the interval ``(a, b)``.

    The interval lies on one side of 0 (``0 <= a`` or ``b <= 0``).
    """

    coef: float
    exponent: float
    a: float
    b: float
    decay: float = 0.0

    def __post_init__(self):
        if not self.a < self.b:
            raise SpecError(f"empty interval ({self.a}, {self.b})")
        if self.a < 0 < self.b:
            raise SpecError("a density piece must not straddle the origin")
        if self.coef <= 0 or self.decay < 0:
            raise SpecError("density pieces need coef > 0 and decay >= 0")

    @property
    def side(self):
        return 1.0 if self.a >= 0 else -1.0

    @property
    def lo(self):
        return self.a if self.a >= 0 else -self.b

    @property
    def hi(self):
        return self.b if self.a >= 0 else -self.a

    def radial(self, r):
        r = np.asarray(r, dtype=float)
        return self.coef * r ** self.exponent * np.exp(-self.decay * r)

    def moment(self, s, lo, hi):
        """``int_lo^hi r^(s-1) * density(r) dr`` in closed form (``lo, hi`` radial)."""
        lo, hi = max(lo, self.lo), min(hi, self.hi)
        if hi <= lo:
            return 0.0
        p = self.exponent + s
        if lo == 0.0 and p <= 0:
            return math.inf
        if self.decay == 0.0:
            if math.isinf(hi):
                if p >= 0:
                    return math.inf
                return self.coef * (-(lo ** p) / p)
            if p == 0:
                return self.coef * math.log(hi / lo)
            return self.coef * (hi ** p - lo ** p) / p
        lam = self.decay
        if p > 0:
            g = special.gamma(p)
            up = special.gammainc(p, lam * hi) if math.isfinite(hi) else 1.0
            return self.coef * g * (up - special.gammainc(p, lam * lo)) / lam ** p
        val, err = integrate.quad(lambda r: r ** (p - 1) * math.exp(-lam * r), lo, hi, limit=200)
        return self.coef * val


class DensityMeasure(LevyMeasure):
    """Absolutely continuous Levy measure on the line.

    Either a list of :class:`PowerPiece` objects or a callable density with
    its support intervals. The exponent is computed by quadrature and cached
    as a monotone interpolant in ``log |xi|`` for fast repeated evaluation.
    """

    dimension = 1
    TABLE_MIN, TABLE_MAX, PER_DECADE = 1e-4, 1e10, 32

    def __init__(self, pieces: Sequence[PowerPiece] = (), density: Callable | None = None,
                 support: Sequence[tuple] = (), label: str | None = None):
        self.pieces = tuple(pieces)
        self.density = density
        self.support = tuple((float(a), float(b)) for a, b in support)
        if not self.pieces and density is None:
            raise SpecError("density measure needs pieces or a callable")
        if density is not None and not self.support:
            raise SpecError("a callable density needs support intervals")
        for a, b in self.support:
            if a < 0 < b:
                raise SpecError("support intervals must not straddle the origin")
        self.label = label
        self._check_levy()
        self.symmetric = self._is_symmetric()
        self._table = None

    # one-sided radial components as (side, lo, hi, radial density)
    def _components(self):
        out = [(p.side, p.lo, p.hi, p.radial) for p in self.pieces]
        for a, b in self.support:
            if a >= 0:
                out.append((1.0, a, b, lambda r, f=self.density: np.asarray(f(np.asarray(r)), dtype=float)))
            else:
                out.append((-1.0, -b, -a, lambda r, f=self.density: np.asarray(f(-np.asarray(r)), dtype=float)))
        return out

    def _is_symmetric(self):
        if self.density is not None:
            return False
        plus = sorted((p.coef, p.exponent, p.lo, p.hi, p.decay) for p in self.pieces if p.side > 0)
        minus = sorted((p.coef, p.exponent, p.lo, p.hi, p.decay) for p in self.pieces if p.side < 0)
        return plus == minus

    def _check_levy(self):
        for p in self.pieces:
            if p.moment(3.0, 0.0, 1.0) == math.inf or p.moment(1.0, 1.0, math.inf) == math.inf:
                raise NonIntegrableMeasure(
                    f"int min(1, z^2) nu(dz) diverges for piece {p}")
        for side, lo, hi, f in self._components()[len(self.pieces):]:
            near = _quad_checked(lambda r: r * r * float(f(r)), lo, min(hi, 1.0)) if lo < 1 else 0.0
            far = _quad_checked(lambda r: float(f(r)), max(lo, 1.0), hi) if hi > 1 else 0.0
            if not (math.isfinite(near) and math.isfinite(far)):
                raise NonIntegrableMeasure("int min(1, z^2) nu(dz) diverges")

    def key(self):
        if self.density is not None:
            return f"density({self.label or id(self.density)},{self.support})"
        return "density(" + ";".join(repr(p) for p in self.pieces) + ")"

    def total_mass(self):
        tot = 0.0
        for p in self.pieces:
            tot += p.moment(1.0, 0.0, math.inf)
        for side, lo, hi, f in self._components()[len(self.pieces):]:
            tot += _quad_checked(lambda r: float(f(r)), lo, hi)
        return tot

    def far_mass(self):
        tot = 0.0
        for p in self.pieces:
            tot += p.moment(1.0, 1.0, math.inf)
        for side, lo, hi, f in self._components()[len(self.pieces):]:
            if hi > 1:
                tot += _quad_checked(lambda r: float(f(r)), max(lo, 1.0), hi)
        return tot

    def _shell_integrals(self):
        """``int_{2^{-k-1} < |z| <= 2^{-k}} |z| nu(dz)`` for k = 0..FV_LEVELS-1."""
        c = np.zeros(FV_LEVELS)
        for k in range(FV_LEVELS):
            lo, hi = 2.0 ** (-k - 1), 2.0 ** (-k)
            for p in self.pieces:
                c[k] += p.moment(2.0, lo, hi)
            for side, plo, phi, f in self._components()[len(self.pieces):]:
                a, b = max(lo, plo), min(hi, phi)
                if b > a:
                    c[k] += _quad_checked(lambda r: r * float(f(r)), a, b)
        return c

    def variation(self):
        if self.pieces and self.density is None:
            m = sum(p.moment(2.0, 0.0, 1.0) for p in self.pieces)
            shells = self._shell_integrals()
            if math.isfinite(m):
                return VariationFacts(True, m + self.far_mass(), tuple(shells), method="analytic")
            return VariationFacts(False, math.inf, tuple(shells), method="analytic")
        shells = self._shell_integrals()
        verdict = dyadic_decay(shells, window=8, ratio_max=0.999)
        total = verdict.partial_sum + verdict.tail_estimate + self.far_mass()
        return VariationFacts(verdict.summable if verdict.summable is not None else False,
                              total if verdict.summable else math.inf,
                              tuple(shells), verdict.ratio, method="dyadic")

    def small_first_moment(self):
        s = 0.0
        for p in self.pieces:
            s += p.side * p.moment(2.0, 0.0, 1.0)
        for side, lo, hi, f in self._components()[len(self.pieces):]:
            if lo < 1:
                s += side * _quad_checked(lambda r: r * float(f(r)), lo, min(hi, 1.0))
        return np.array([s])

    # -- exponent -----------------------------------------------------------
    def psi_direct(self, x: float) -> complex:
        """Exponent of the jump part at one frequency by adaptive quadrature."""
        if x == 0.0:
            return 0j
        w = abs(x)
        re = im = 0.0
        comps = [(p.side, p, None) for p in self.pieces]
        comps += [(side, None, f) for side, lo, hi, f in self._components()[len(self.pieces):]]
        for (side, piece, f), (_, lo, hi, _) in zip(comps, self._components()):
            if piece is not None:
                r_part, i_part = _piece_psi(piece, w)
            else:
                r_part, i_part = _one_sided_psi(f, lo, hi, w)
            re += r_part
            # the piece on the negative half-line sees frequency -x
            im += i_part * (1.0 if x * side > 0 else -1.0)
        return complex(re, im)

    def _build_table(self):
        cached = _TABLES.get(self.key())
        if cached is not None:
            self._table = cached
            return
        xs = table_grid(self.TABLE_MIN, self.TABLE_MAX, self.PER_DECADE)
        vals = np.array([self.psi_direct(x) for x in xs])
        self._table = ExponentTable(xs, vals, lambda w: _cached_direct(self, w))
        if self.density is None:
            _TABLES[self.key()] = self._table

    def psi(self, xi):
        if self._table is None:
            self._build_table()
        return self._table(xi)

    def psi_scalar(self, x):
        if self._table is None:
            self._build_table()
        return self._table.scalar(x)


def table_grid(lo, hi, per_decade):
    n = int(round(math.log10(hi / lo) * per_decade)) + 1
    return np.geomspace(lo, hi, n)


class ExponentTable:
    """Cubic Hermite table of an exponent on a uniform grid in ``log |xi|``.

    Stores ``log Re psi`` and ``Im psi / xi``. Above the grid the real part
    continues as a power law with the end slope and ``Im psi / xi`` is held;
    below the grid ``fallback(|xi|)`` is called. Values at negative ``xi`` are
    conjugates.
    """

    def __init__(self, xs, values, fallback):
        values = np.asarray(values, dtype=complex)
        if np.any(values.real <= 0):
            raise QuadratureFailure("nonpositive real part while tabulating the exponent")
        lx = np.log(xs)
        re_i = PchipInterpolator(lx, np.log(values.real))
        im_i = PchipInterpolator(lx, values.imag / xs)
        self.xs = xs
        self.fallback = fallback
        self._re, self._im = re_i, im_i
        # plain Python lists keep the scalar path free of numpy overhead
        self._l0 = float(lx[0])
        self._h = float(lx[1] - lx[0])
        self._n = len(xs)
        self._ry, self._rd = re_i(lx).tolist(), re_i.derivative()(lx).tolist()
        self._iy, self._id = im_i(lx).tolist(), im_i.derivative()(lx).tolist()

    def __call__(self, xi):
        if np.ndim(xi) == 0:
            return np.asarray(self.scalar(float(xi)))
        xi = np.asarray(xi, dtype=float)
        xs = self.xs
        w = np.abs(xi)
        out = np.zeros(xi.shape, dtype=complex)
        inside = (w >= xs[0]) & (w <= xs[-1])
        lw = np.log(w[inside])
        out[inside] = np.exp(self._re(lw)) + 1j * self._im(lw) * w[inside]
        above = w > xs[-1]
        if above.any():
            du = np.log(w[above]) - math.log(xs[-1])
            out[above] = np.exp(self._ry[-1] + self._rd[-1] * du) + 1j * self._iy[-1] * w[above]
        for idx in zip(*np.nonzero(~inside & ~above & (w > 0))):
            out[idx] = self.fallback(float(w[idx]))
        neg = xi < 0
        out[neg] = np.conj(out[neg])
        return out

    def scalar(self, x):
        if x == 0.0:
            return 0j
        h, n = self._h, self._n
        w = abs(x)
        u = (math.log(w) - self._l0) / h
        k = int(u)
        if u < 0:
            v = self.fallback(w)
        elif k >= n - 1:
            du = (u - (n - 1)) * h
            v = complex(math.exp(self._ry[-1] + self._rd[-1] * du), self._iy[-1] * w)
        else:
            ry, rd, iy, idv = self._ry, self._rd, self._iy, self._id
            s = u - k
            s2, s3 = s * s, s * s * s
            h00, h10, h01, h11 = 2 * s3 - 3 * s2 + 1, s3 - 2 * s2 + s, -2 * s3 + 3 * s2, s3 - s2
            re = math.exp(h00 * ry[k] + h10 * h * rd[k] + h01 * ry[k + 1] + h11 * h * rd[k + 1])
            im = (h00 * iy[k] + h10 * h * idv[k] + h01 * iy[k + 1] + h11 * h * idv[k + 1]) * w
            v = complex(re, im)
        return v if x > 0 else v.conjugate()


_TABLES: dict = {}


@lru_cache(maxsize=4096)
def _cached_direct(measure, w):
    return measure.psi_direct(w)


def _quad_checked(f, a, b):
    if b <= a:
        return 0.0
    val, err, *rest = integrate.quad(f, a, b, limit=200, full_output=1)
    if rest and len(rest) > 1 and err > 1e-6 * max(1.0, abs(val)):
        if not math.isfinite(val) or err > abs(val):
            return math.inf
    return val


def _scaled(moment, n, log_w):
    """``w^n / n! * moment`` evaluated in log space."""
    if moment <= 0.0:
        return 0.0
    return math.exp(n * log_w - math.lgamma(n + 1) + math.log(moment))


def _piece_psi(piece: PowerPiece, w, terms=14):
    """Exponent parts of one power piece at frequency w > 0.

    Where ``w r <= 1`` the kernels are expanded in power series and
    integrated against closed-form moments; the oscillatory remainder is a
    difference of half-line Fourier transforms.
    """
    lo, hi = piece.lo, piece.hi
    head_end = min(hi, max(lo, 1.0 / w))
    re = im = 0.0
    if head_end > lo:
        lw = math.log(w)
        for k in range(1, terms):
            re += (-1) ** (k + 1) * _scaled(piece.moment(2 * k + 1, lo, head_end), 2 * k, lw)
            im -= (-1) ** k * _scaled(piece.moment(2 * k + 2, lo, head_end), 2 * k + 1, lw)
        # linear term of sin survives only beyond |z| = 1
        if head_end > 1.0:
            im -= w * piece.moment(2.0, max(lo, 1.0), head_end)
    start = head_end
    if hi > start:
        c0, p0, d0 = piece.coef, piece.exponent, piece.decay
        f = (lambda r: c0 * r ** p0) if d0 == 0.0 else (lambda r: c0 * r ** p0 * math.exp(-d0 * r))
        extends = piece.exponent < 0 or piece.decay > 0
        mass = piece.moment(1.0, start, hi)
        if extends and (math.isinf(hi) or w * (hi - start) > 50.0):
            cos_part = _quad_osc(f, start, math.inf, "cos", w)
            sin_part = _quad_osc(f, start, math.inf, "sin", w)
            if math.isfinite(hi):
                cos_part -= _quad_osc(f, hi, math.inf, "cos", w)
                sin_part -= _quad_osc(f, hi, math.inf, "sin", w)
        else:
            cos_part = _quad_osc(f, start, hi, "cos", w)
            sin_part = _quad_osc(f, start, hi, "sin", w)
        re += mass - cos_part
        comp = w * piece.moment(2.0, start, min(hi, 1.0)) if start < 1.0 else 0.0
        im -= sin_part - comp
    return re, im


def _one_sided_psi(f, lo, hi, w):
    """Real and imaginary exponent parts of a measure ``f(r) dr`` on (lo, hi), w > 0.

    Re = int (1 - cos w r) f,  Im = -int (sin w r - w r 1_{r<1}) f.
    """
    head_end = min(hi, max(lo, 1.0 / w))
    re = im = 0.0
    if head_end > lo:
        cut = [] if not (lo < 1.0 < head_end) else [1.0]
        re += _quad_pts(lambda r: float(_one_minus_cos(w * r)) * float(f(r)), lo, head_end, cut)
        im -= _quad_pts(lambda r: (math.sin(w * r) - (w * r if r < 1.0 else 0.0)) * float(f(r)),
                        lo, head_end, cut)
    start = max(lo, head_end)
    if hi > start:
        mass = _quad_pts(lambda r: float(f(r)), start, hi, [1.0] if start < 1.0 < hi else [])
        g = lambda r: float(f(r))
        cos_part = _quad_osc(g, start, hi, "cos", w)
        sin_part = _quad_osc(g, start, hi, "sin", w)
        re += mass - cos_part
        comp = 0.0
        if start < 1.0:
            comp = w * _quad_pts(lambda r: r * float(f(r)), start, min(hi, 1.0), [])
        im -= sin_part - comp
    return re, im


def _quad_pts(g, a, b, pts):
    if b <= a:
        return 0.0
    kw = dict(limit=400, epsabs=1e-14, epsrel=1e-10, full_output=1)
    if math.isinf(b):
        if pts:
            v1 = integrate.quad(g, a, pts[0], **kw)[0]
            return v1 + integrate.quad(g, pts[0], b, **kw)[0]
        return integrate.quad(g, a, b, **kw)[0]
    if pts:
        kw["points"] = pts
    if a == 0.0:
        # geometric split towards the (possibly singular) origin
        edges = [b * 2.0 ** -k for k in range(0, 60, 4)] + [0.0]
        return sum(integrate.quad(g, lo, hi, **{**kw, "points": [p for p in pts if lo < p < hi] or None})[0]
                   for hi, lo in zip(edges[:-1], edges[1:]))
    return integrate.quad(g, a, b, **kw)[0]


def _quad_osc(f, a, b, kind, w):
    def g(r):
        return f(r) if r > 0.0 else 0.0
    if math.isinf(b):
        # rescale so that one oscillation has unit frequency
        return fourier_tail(lambda u: g(u / w) / w, a * w, kind, 1.0)
    return integrate.quad(g, a, b, weight=kind, wvar=w, limit=400, epsabs=1e-13, epsrel=1e-10,
                          full_output=1)[0]


def stable_density_constant(alpha: float, dimension: int = 1) -> float:
    """Constant c with ``int (1 - cos<xi,z>) c |z|^{-d-alpha} dz = |xi|^alpha``."""
    d = dimension
    return (alpha * 2.0 ** (alpha - 1.0) * special.gamma((d + alpha) / 2.0)
            / (math.pi ** (d / 2.0) * special.gamma(1.0 - alpha / 2.0)))


@dataclass(frozen=True)
class StableMeasure(LevyMeasure):
    """Isotropic alpha-stable measure with exponent ``scale * |xi|^alpha``."""

    alpha: float
    scale: float = 1.0
    dimension: int = 1

    symmetric = True

    def __post_init__(self):
        if not 0.0 < self.alpha < 2.0:
            raise SpecError("stable index must lie in (0, 2)")
        if self.scale <= 0:
            raise SpecError("stable scale must be positive")

    def psi(self, xi):
        xi = np.asarray(xi, dtype=float)
        r = np.abs(xi) if self.dimension == 1 else np.linalg.norm(xi, axis=-1)
        return (self.scale * r ** self.alpha).astype(complex)

    def psi_scalar(self, x):
        return complex(self.scale * abs(x) ** self.alpha)

    def density_constant(self):
        return self.scale * stable_density_constant(self.alpha, self.dimension)

    def total_mass(self):
        return math.inf

    def far_mass(self):
        d = self.dimension
        sphere = 2.0 * math.pi ** (d / 2.0) / special.gamma(d / 2.0)
        return self.density_constant() * sphere / self.alpha

    def small_first_moment(self):
        return np.zeros(self.dimension)

    def variation(self):
        if self.alpha < 1.0:
            d = self.dimension
            sphere = 2.0 * math.pi ** (d / 2.0) / special.gamma(d / 2.0)
            inner = self.density_constant() * sphere / (1.0 - self.alpha)
            return VariationFacts(True, inner + self.far_mass())
        return VariationFacts(False, math.inf)

    def key(self):
        return f"stable({self.alpha!r},{self.scale!r},{self.dimension})"


@dataclass(frozen=True)
class DyadicAtoms(LevyMeasure):
    """Symmetric atoms at ``+-2^n``, n in Z, with weights f(2^n).

    ``f(s) = s^{-alpha}`` for ``s <= 1`` and
    ``f(s) = e^m exp(-m s^beta) s^{-delta}`` for ``s > 1``.
    The exponent is real and comparable with ``min(|xi|^2, |xi|^alpha)``.
    """

    alpha: float
    m: float = 1.0
    beta: float = 1.0
    delta: float = 1.0
    small_cut: float = 1e-3

    dimension = 1
    symmetric = True

    def __post_init__(self):
        if not 0.0 < self.alpha < 2.0:
            raise SpecError("alpha must lie in (0, 2)")
        if self.m <= 0 or not 0.0 < self.beta <= 1.0 or self.delta <= 0:
            raise SpecError("need m > 0, beta in (0, 1], delta > 0")

    def weight(self, s):
        s = np.asarray(s, dtype=float)
        small = s <= 1.0
        out = np.empty_like(s)
        out[small] = s[small] ** (-self.alpha)
        big = s[~small]
        out[~small] = np.exp(self.m - self.m * big ** self.beta) * big ** (-self.delta)
        return out

    @property
    def n_max(self):
        # large atoms contribute at most 4 f(2^n); drop them once negligible
        n = 1
        while self.weight(2.0 ** n) > 1e-16 * self.weight(1.0) or n < 4:
            n += 1
        return n

    def psi(self, xi):
        xi = np.abs(np.asarray(xi, dtype=float))
        out = np.zeros(xi.shape)
        nz = xi > 0
        x = xi[nz]
        if x.size == 0:
            return out.astype(complex)
        # explicit atoms for n0 < n <= n_max, Taylor tail for n <= n0
        n0 = np.minimum(np.floor(np.log2(self.small_cut / x)), 0.0)
        n_low = int(n0.min()) + 1
        ns = np.arange(n_low, self.n_max + 1)
        s = 2.0 ** ns
        f = self.weight(s)
        arg = np.outer(x, s)
        terms = 2.0 * f * _one_minus_cos(arg)
        terms[ns[None, :] <= n0[:, None]] = 0.0
        total = terms.sum(axis=1)
        # sum_{n<=n0} 2 s^{-a} (x^2 s^2 / 2 - x^4 s^4 / 24), s = 2^n
        a = self.alpha
        r2, r4 = 2.0 ** (2.0 - a), 2.0 ** (4.0 - a)
        g2 = r2 ** n0 / (1.0 - 1.0 / r2)
        g4 = r4 ** n0 / (1.0 - 1.0 / r4)
        total += x ** 2 * g2 - x ** 4 * g4 / 12.0
        out[nz] = total
        return out.astype(complex)

    def psi_scalar(self, x):
        table = _TABLES.get(self.key())
        if table is None:
            xs = table_grid(1e-4, 1e10, 64)
            table = ExponentTable(xs, self.psi(xs), lambda w: complex(self.psi(np.array([w]))[0]))
            _TABLES[self.key()] = table
        return table.scalar(x)

    def brute_force_psi(self, x, n_min=-200):
        """Direct summation over atoms, used as an independent reference."""
        ns = np.arange(n_min, self.n_max + 1)
        s = 2.0 ** ns
        return float(np.sum(2.0 * self.weight(s) * _one_minus_cos(x * s)))

    def total_mass(self):
        return math.inf

    def far_mass(self):
        ns = np.arange(0, self.n_max + 1)
        return float(2.0 * self.weight(2.0 ** ns).sum())

    def small_first_moment(self):
        return np.zeros(1)

    def variation(self):
        if self.alpha < 1.0:
            ns = np.arange(-1, -400, -1)
            inner = 2.0 * float(np.sum(self.weight(2.0 ** ns) * 2.0 ** ns))
            return VariationFacts(True, inner + self.far_mass())
        return VariationFacts(False, math.inf)

    def key(self):
        return f"dyadic({self.alpha!r},{self.m!r},{self.beta!r},{self.delta!r})"


@dataclass(frozen=True)
class ExponentialJumps(LevyMeasure):
    """``mass * rate * exp(-rate |z|)`` on one half-line (finite measure)."""

    mass: float
    rate: float
    side: int = 1

    dimension = 1
    symmetric = False

    def __post_init__(self):
        if self.mass <= 0 or self.rate <= 0 or self.side not in (1, -1):
            raise SpecError("exponential jumps need mass > 0, rate > 0, side = +-1")

    def _compensator(self):
        r = self.rate
        return self.mass * (1.0 - math.exp(-r) * (1.0 + r)) / r

    def psi(self, xi):
        x = self.side * np.asarray(xi, dtype=float)
        r = self.rate
        return self.mass * (1.0 - r / (r - 1j * x)) + 1j * x * self._compensator()

    def psi_scalar(self, x):
        x = self.side * x
        r = self.rate
        return self.mass * (1.0 - r / (r - 1j * x)) + 1j * x * self._compensator()

    def total_mass(self):
        return self.mass

    def far_mass(self):
        return self.mass * math.exp(-self.rate)

    def small_first_moment(self):
        return np.array([self.side * self._compensator()])

    def variation(self):
        return VariationFacts(True, self._compensator() + self.far_mass())

    def key(self):
        return f"exp({self.mass!r},{self.rate!r},{self.side})"


# --------------------------------------------------------------------------
# Laplace exponents of subordinators
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class LaplaceExponent:
    """Laplace exponent ``phi`` of a subordinator, ``E e^{-u X_t} = e^{-t phi(u)}``.

    ``phi`` must accept complex arguments in the right half-plane so that the
    characteristic exponent ``psi(xi) = phi(-i xi)`` is available.
    """

    family: str
    params: tuple = ()
    phi_fn: Callable | None = field(default=None, compare=False)
    dphi_fn: Callable | None = field(default=None, compare=False)
    unbounded: bool = True
    zero_drift: bool = True
    sbf_shift: float | None = 0.0

    def phi(self, u):
        fam, p = self.family, dict(self.params)
        u = np.asarray(u) if not np.isscalar(u) else u
        if fam == "stable":
            return u ** p["alpha"]
        if fam == "shifted_stable":
            a, d, m = p["alpha"], p["delta"], p["m"]
            return d * ((u + m) ** a - m ** a)
        if fam == "log":
            return np.log1p(u ** p["alpha"])
        if fam == "u_over_log":
            return u / np.log1p(u ** p["alpha"])
        if self.phi_fn is None:
            raise SpecError(f"unknown Laplace exponent family {fam!r}")
        return self.phi_fn(u)

    def dphi(self, u):
        fam, p = self.family, dict(self.params)
        u = np.asarray(u, dtype=float)
        if fam == "stable":
            a = p["alpha"]
            return a * u ** (a - 1.0)
        if fam == "shifted_stable":
            a, d, m = p["alpha"], p["delta"], p["m"]
            return d * a * (u + m) ** (a - 1.0)
        if fam == "log":
            a = p["alpha"]
            ua = u ** a
            return a * u ** (a - 1.0) / (1.0 + ua)
        if fam == "u_over_log":
            a = p["alpha"]
            ua = u ** a
            L = np.log1p(ua)
            return (L - a * ua / (1.0 + ua)) / L ** 2
        if self.dphi_fn is None:
            raise MissingDerivative(f"no derivative available for Laplace exponent {fam!r}")
        return self.dphi_fn(u)

    def psi(self, xi):
        xi = np.asarray(xi, dtype=float)
        out = np.zeros(xi.shape, dtype=complex)
        nz = xi != 0
        out[nz] = self.phi(-1j * xi[nz].astype(complex))
        return out

    def psi_scalar(self, x):
        if x == 0.0:
            return 0j
        return complex(self.phi(complex(0.0, -x)))

    def is_bounded(self):
        return not self.unbounded

    def key(self):
        if self.family == "custom":
            return f"custom({id(self.phi_fn)})"
        return f"{self.family}{self.params}"

    def bernstein_checks(self, grid=None, rtol=1e-8):
        """Sampled necessary conditions for a Bernstein function.

        Returns a dict of booleans: nonnegative, nondecreasing, concave,
        third divided differences nonnegative, and ``phi(0+) = 0``.
        """
        u = np.geomspace(1e-3, 1e3, 61) if grid is None else np.asarray(grid, dtype=float)
        f = np.asarray(self.phi(u), dtype=float)
        scale = np.max(np.abs(f))
        d1 = np.diff(f) / np.diff(u)
        d2 = np.diff(d1) / (u[2:] - u[:-2])
        d3 = np.diff(d2) / (u[3:] - u[:-3])
        tol = rtol * scale
        small = float(np.asarray(self.phi(1e-12), dtype=float))
        return {
            "nonnegative": bool(np.all(f >= -tol)),
            "nondecreasing": bool(np.all(d1 >= -tol / np.diff(u))),
            "concave": bool(np.all(d2 <= tol / np.diff(u)[1:] ** 2)),
            "third_difference": bool(np.all(d3 >= -tol / np.diff(u)[2:] ** 3)),
            "zero_at_origin": abs(small) < 1e-4,
        }


def stable_subordinator_exponent(alpha):
    if not 0.0 < alpha < 1.0:
        raise SpecError("stable subordinator index must lie in (0, 1)")
    return LaplaceExponent("stable", (("alpha", float(alpha)),))


def shifted_stable_exponent(alpha, delta=1.0, m=0.0):
    if not 0.0 < alpha < 1.0 or delta <= 0 or m < 0:
        raise SpecError("need alpha in (0, 1), delta > 0, m >= 0")
    return LaplaceExponent("shifted_stable", (("alpha", float(alpha)), ("delta", float(delta)), ("m", float(m))))


def log_exponent(alpha):
    if not 0.0 < alpha <= 1.0:
        raise SpecError("log subordinator index must lie in (0, 1]")
    return LaplaceExponent("log", (("alpha", float(alpha)),))


def u_over_log_exponent(alpha):
    if not 0.0 < alpha < 1.0:
        raise SpecError("index must lie in (0, 1)")
    return LaplaceExponent("u_over_log", (("alpha", float(alpha)),))


def custom_exponent(phi, dphi=None, unbounded=True, zero_drift=True, sbf_shift=None):
    return LaplaceExponent("custom", (), phi, dphi, unbounded, zero_drift, sbf_shift)


# --------------------------------------------------------------------------
# Process specs
# --------------------------------------------------------------------------

class ProcessSpec:
    dimension: int = 1
    name: str | None = None

    def psi(self, xi):
        raise NotImplementedError

    def psi_scalar(self, x: float) -> complex:
        return complex(self.psi(np.array([x]))[0])

    @property
    def symmetric(self) -> bool:
        return False

    def key(self) -> str:
        raise NotImplementedError


class Triplet(ProcessSpec):
    """Levy triplet ``(gamma, A, nu)`` in dimension d."""

    def __init__(self, gamma=0.0, A=0.0, nu: LevyMeasure | None = None, name=None, h0=None):
        g = np.atleast_1d(np.asarray(gamma, dtype=float))
        d = g.size
        a = np.asarray(A, dtype=float)
        if a.ndim == 0:
            a = a * np.eye(d)
        if a.shape != (d, d):
            raise SpecError(f"A must be {d}x{d}")
        if not np.allclose(a, a.T):
            raise SpecError("A must be symmetric")
        if np.linalg.eigvalsh(a).min() < -1e-12 * max(1.0, np.abs(a).max()):
            raise SpecError("A must be nonnegative definite")
        nu = ZeroMeasure(d) if nu is None else nu
        if nu.dimension != d:
            raise SpecError("measure dimension does not match gamma")
        self.gamma = g
        self.A = a
        self.nu = nu
        self.dimension = d
        self.name = name
        self.h0 = h0

    @property
    def symmetric(self):
        return bool(np.all(self.gamma == 0) and self.nu.symmetric)

    def psi(self, xi):
        xi = np.asarray(xi, dtype=float)
        if self.dimension == 1:
            base = -1j * self.gamma[0] * xi + self.A[0, 0] * xi * xi
        else:
            base = -1j * (xi @ self.gamma) + np.einsum("...i,ij,...j->...", xi, self.A, xi)
        return base + self.nu.psi(xi)

    def psi_scalar(self, x):
        return complex(self.A[0, 0] * x * x, -self.gamma[0] * x) + self.nu.psi_scalar(x)

    def key(self):
        return f"triplet({self.gamma.tolist()},{self.A.tolist()},{self.nu.key()})"

    def __repr__(self):
        return f"Triplet(name={self.name!r}, gamma={self.gamma.tolist()}, A={self.A.tolist()}, nu={self.nu.key()})"


class Subordinator(ProcessSpec):
    """Subordinator given by its Laplace exponent (no drift, no killing)."""

    dimension = 1

    def __init__(self, phi: LaplaceExponent, name=None):
        self.phi = phi
        self.name = name

    def psi(self, xi):
        return self.phi.psi(xi)

    def psi_scalar(self, x):
        return self.phi.psi_scalar(x)

    def key(self):
        return f"sub({self.phi.key()})"

    def __repr__(self):
        return f"Subordinator({self.phi.key()})"


class Product(ProcessSpec):
    """Independent one-dimensional components stacked into R^d."""

    def __init__(self, components: Sequence[ProcessSpec], name=None):
        if len(components) < 2 or any(c.dimension != 1 for c in components):
            raise SpecError("a product needs at least two one-dimensional components")
        self.components = tuple(components)
        self.dimension = len(components)
        self.name = name

    @property
    def symmetric(self):
        return all(c.symmetric for c in self.components)

    def psi(self, xi):
        xi = np.asarray(xi, dtype=float)
        return sum(c.psi(xi[..., k]) for k, c in enumerate(self.components))

    def key(self):
        return "product(" + ",".join(c.key() for c in self.components) + ")"


class Decomposition(ProcessSpec):
    """Declared split ``X = Y + Z``: Z one-dimensional along the line spanned by
    ``direction``; Y compound Poisson with atoms off that line."""

    def __init__(self, direction, Y: AtomicMeasure, Z: ProcessSpec, name=None):
        e = np.asarray(direction, dtype=float)
        if e.ndim != 1 or e.size < 2 or np.linalg.norm(e) == 0:
            raise SpecError("direction must be a nonzero vector of length >= 2")
        e = e / np.linalg.norm(e)
        if Z.dimension != 1:
            raise SpecError("the Z part must be one-dimensional")
        if Y.dimension != e.size:
            raise SpecError("Y atoms must live in the ambient dimension")
        proj = Y.locations - np.outer(Y.locations @ e, e)
        if np.any(np.linalg.norm(proj, axis=1) < 1e-12):
            raise SpecError("Y must not charge the declared line")
        self.direction = e
        self.Y = Y
        self.Z = Z
        self.dimension = e.size
        self.name = name

    def psi(self, xi):
        xi = np.asarray(xi, dtype=float)
        dots = xi @ self.Y.locations.T
        y_part = ((_one_minus_cos(dots) - 1j * np.sin(dots)) * self.Y.masses).sum(axis=-1)
        return self.Z.psi(xi @ self.direction) + y_part

    def key(self):
        return f"decomp({self.direction.tolist()},{self.Y.key()},{self.Z.key()})"


# --------------------------------------------------------------------------
# Builders
# --------------------------------------------------------------------------

def brownian(a=1.0, dimension=1):
    return Triplet(np.zeros(dimension), a * np.eye(dimension), None, name="brownian")


def stable(alpha, scale=1.0, dimension=1):
    return Triplet(np.zeros(dimension), np.zeros((dimension, dimension)),
                   StableMeasure(alpha, scale, dimension), name="stable")


def dyadic_jumps(alpha, m=1.0, beta=1.0, delta=1.0):
    """Pure-jump process with the symmetric dyadic atoms of :class:`DyadicAtoms`."""
    return Triplet(0.0, 0.0, DyadicAtoms(alpha, m, beta, delta), name="dyadic_jumps")


# the JSON family list also knows this process as "example511"
example511 = dyadic_jumps


def cp(locations, masses):
    """Compound Poisson process: gamma chosen so that the drift gamma_0 vanishes."""
    nu = AtomicMeasure(locations, masses)
    return Triplet(nu.small_first_moment(), np.zeros((nu.dimension, nu.dimension)), nu, name="cp")


def drift(velocity):
    v = np.atleast_1d(np.asarray(velocity, dtype=float))
    return Triplet(v, np.zeros((v.size, v.size)), None, name="drift")


def drift_plus_jumps(gamma=1.0, exponent=-1.5, coef=1.0, upper=1.0):
    """Drift plus one-sided power-law jumps ``coef z^exponent`` on (0, upper)."""
    nu = DensityMeasure([PowerPiece(coef, exponent, 0.0, upper)])
    return Triplet(gamma, 0.0, nu, name="drift_plus_jumps")


def space_time(a=1.0):
    """The pair (B_t, t): Brownian first coordinate, unit-speed time second."""
    return Product([brownian(a), drift(1.0)], name="space_time")


def stable_subordinator(alpha):
    return Subordinator(stable_subordinator_exponent(alpha), name="stable_subordinator")


def shifted_stable_sub(alpha, delta=1.0, m=0.0):
    return Subordinator(shifted_stable_exponent(alpha, delta, m), name="shifted_stable_sub")


def log_sub(alpha):
    return Subordinator(log_exponent(alpha), name="log_sub")


def u_over_log_sub(alpha):
    return Subordinator(u_over_log_exponent(alpha), name="u_over_log_sub")


# --------------------------------------------------------------------------
# Operations
# --------------------------------------------------------------------------

def eval_psi(spec: ProcessSpec, xi):
    """Characteristic exponent of ``spec`` at ``xi`` (scalar or array)."""
    arr = np.asarray(xi, dtype=float)
    if spec.dimension > 1 and arr.shape[-1:] != (spec.dimension,):
        raise SpecError(f"xi must have trailing dimension {spec.dimension}")
    out = spec.psi(arr)
    if np.ndim(out) == 0 or (spec.dimension == 1 and arr.ndim == 0):
        return complex(np.asarray(out).reshape(-1)[0])
    return out


def drift_gamma0(spec: Triplet):
    """``gamma_0 = gamma - int z 1_{|z|<1} nu(dz)`` or UNDEFINED (infinite variation)."""
    if isinstance(spec, Subordinator):
        return np.zeros(1) if spec.phi.zero_drift else UNDEFINED
    if not isinstance(spec, Triplet):
        raise SpecError("drift_gamma0 needs a triplet")
    facts = spec.nu.variation()
    if not facts.finite:
        return UNDEFINED
    return spec.gamma - np.asarray(spec.nu.small_first_moment(), dtype=float)


def finite_variation(spec) -> VariationFacts:
    if isinstance(spec, Subordinator):
        return VariationFacts(True, math.nan, method="subordinator")
    return spec.nu.variation()


def psi_star(spec, u, n=2001):
    """``sup_{|x| <= u} |psi(x)|`` on a sampled grid (one-dimensional specs)."""
    xs = np.linspace(0.0, u, n)
    return float(np.max(np.abs(spec.psi(np.concatenate([xs, -xs])))))


def psi_star_inverse(spec, s, lo=1e-12, hi=1e12):
    """Generalised inverse ``inf{u : psi*(u) >= s}`` by bisection in log u."""
    if psi_star(spec, hi) < s:
        return math.inf
    a, b = math.log(lo), math.log(hi)
    for _ in range(80):
        m = 0.5 * (a + b)
        if psi_star(spec, math.exp(m), n=401) >= s:
            b = m
        else:
            a = m
    return math.exp(b)


# --------------------------------------------------------------------------
# Weak scaling conditions
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ScalingWitness:
    kind: str
    alpha: float
    theta: float
    constant: float
    theta_grid: tuple
    eta_grid: tuple


@dataclass(frozen=True)
class Refuted:
    kind: str
    alpha: float
    theta: float
    constant: float
    theta_at: float
    eta_at: float
    reason: str


def check_scaling(f, kind, alpha, theta, grid=None, eta_max=1e4, n_eta=41, floor=1e-8):
    """Best scaling constant of ``f`` on a sampled (theta, eta) lattice.

    WLSC: ``f(eta th) >= c eta^alpha f(th)``; WUSC: ``f(eta th) <= C eta^alpha f(th)``,
    for ``eta >= 1`` and ``th > theta``. The extreme ratio is a witness unless it
    sits at the largest eta and is still moving, which indicates that no finite
    constant exists.
    """
    if kind not in ("WLSC", "WUSC"):
        raise SpecError("kind must be WLSC or WUSC")
    if grid is None:
        base = np.geomspace(1e-4, 1e4, 33) if theta == 0 else theta * np.geomspace(1.0, 1e4, 33)
        grid = base[base > theta] if theta > 0 else base
        if theta > 0:
            grid = np.concatenate([[theta * (1 + 1e-9)], grid])
    th = np.asarray(grid, dtype=float)
    th = th[th > theta]
    if th.size == 0:
        raise EmptyGrid("no sample points above the threshold")
    eta = np.geomspace(1.0, eta_max, n_eta)
    num = np.asarray(f(np.outer(th, eta)), dtype=float)
    den = np.asarray(f(th), dtype=float)[:, None] * eta[None, :] ** alpha
    ratio = num / den
    if kind == "WLSC":
        i, j = np.unravel_index(np.argmin(ratio), ratio.shape)
        c = float(ratio[i, j])
        moving = j == ratio.shape[1] - 1 and ratio[i, -2] - ratio[i, -1] > 1e-9 * ratio[i, -2]
        bad = c <= floor or c > 1.0 + 1e-12
    else:
        i, j = np.unravel_index(np.argmax(ratio), ratio.shape)
        c = float(ratio[i, j])
        moving = j == ratio.shape[1] - 1 and ratio[i, -1] - ratio[i, -2] > 1e-9 * ratio[i, -2]
        bad = c >= 1.0 / floor or c < 1.0 - 1e-12
    if moving or bad:
        reason = "extreme ratio still moving at the largest multiplier" if moving else "constant outside legal range"
        return Refuted(kind, alpha, theta, c, float(th[i]), float(eta[j]), reason)
    return ScalingWitness(kind, alpha, theta, c, tuple(th), tuple(eta))
