"""Potentials ``q`` as unions of simple pieces.

A potential is stored through ``|q|`` on the line as a list of pieces, each
supported on an interval ``(a, b)``:

* ``const``: ``c``
* ``power``: ``c |y - s|^{-p}`` with the singular point ``s`` at an end
* ``log``:   ``c log(1/|y - s|)`` with ``|y - s| <= 1`` on the piece
* ``linear``: ``c + slope (y - a)``, nonnegative on the piece
* ``callable``: any vectorised nonnegative function, with declared singular
  points at the ends

Pieces carry antiderivatives where they exist in closed form, so plain
Lebesgue integrals over balls are exact. Singular points and breakpoints
are exposed for quadrature splitting and for the sup search over x.
Radial potentials in ``R^d`` keep their profile ``f(|z|)`` as pieces on the
half-line.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate

from .errors import SpecError

INF = math.inf


@dataclass(frozen=True)
class Piece:
    a: float
    b: float
    kind: str = "const"
    c: float = 1.0
    p: float = 0.0
    s: float = 0.0
    slope: float = 0.0
    fn: Callable | None = field(default=None, compare=False)
    singular: tuple = ()

    def __post_init__(self):
        if not self.a < self.b:
            raise SpecError("piece needs a < b")
        if self.c < 0 or (self.kind == "linear" and self.c + self.slope * (self.b - self.a) < 0):
            raise SpecError("pieces store |q| and must be nonnegative")
        if self.kind in ("power", "log") and self.a < self.s < self.b:
            raise SpecError("the singular point must not lie inside a piece")
        if self.kind == "log" and max(abs(self.a - self.s), abs(self.b - self.s)) > 1.0:
            raise SpecError("log pieces must stay within distance 1 of their centre")

    @property
    def singular_points(self):
        if self.kind in ("power", "log") and self.s in (self.a, self.b):
            if self.kind == "log" or self.p > 0:
                return (self.s,)
        return tuple(self.singular)

    def values(self, y):
        y = np.asarray(y, dtype=float)
        inside = (y > self.a) & (y < self.b)
        out = np.zeros(y.shape)
        if not inside.any():
            return out
        yi = y[inside]
        if self.kind == "const":
            out[inside] = self.c
        elif self.kind == "power":
            with np.errstate(divide="ignore"):
                out[inside] = self.c * np.abs(yi - self.s) ** (-self.p)
        elif self.kind == "log":
            with np.errstate(divide="ignore"):
                out[inside] = -self.c * np.log(np.abs(yi - self.s))
        elif self.kind == "linear":
            out[inside] = self.c + self.slope * (yi - self.a)
        else:
            out[inside] = np.abs(np.asarray(self.fn(yi), dtype=float))
        return out

    def sup_abs(self):
        if self.kind == "const":
            return self.c
        if self.kind == "linear":
            return max(self.c, self.c + self.slope * (self.b - self.a))
        if self.kind == "power":
            if self.p <= 0:
                far = max(abs(self.a - self.s), abs(self.b - self.s))
                return self.c * far ** (-self.p)
            near = min(abs(self.a - self.s), abs(self.b - self.s))
            return INF if near == 0 else self.c * near ** (-self.p)
        if self.kind == "log":
            near = min(abs(self.a - self.s), abs(self.b - self.s))
            return INF if near == 0 else -self.c * math.log(near)
        if self.singular_points:
            return INF
        lo = self.a if math.isfinite(self.a) else -1e6
        hi = self.b if math.isfinite(self.b) else 1e6
        return float(np.max(self.values(np.linspace(lo, hi, 4001)[1:-1])))

    def integral(self, lo, hi):
        """``int_lo^hi`` of the piece, vectorised; may be ``inf``."""
        lo = np.maximum(np.asarray(lo, dtype=float), self.a)
        hi = np.minimum(np.asarray(hi, dtype=float), self.b)
        lo, hi = np.broadcast_arrays(lo, hi)
        out = np.zeros(lo.shape)
        ok = hi > lo
        if not ok.any():
            return out
        l, h = lo[ok], hi[ok]
        if self.kind == "const":
            out[ok] = self.c * (h - l)
        elif self.kind == "linear":
            out[ok] = self.c * (h - l) + 0.5 * self.slope * ((h - self.a) ** 2 - (l - self.a) ** 2)
        elif self.kind in ("power", "log"):
            out[ok] = self._radial_antiderivative(np.abs(h - self.s), np.abs(l - self.s))
        else:
            out[ok] = [integrate.quad(lambda y: float(self.values(np.array([y]))[0]), u, v,
                                      points=[pt for pt in self.singular_points if u < pt < v] or None,
                                      limit=200)[0] for u, v in zip(l, h)]
        return out

    def _radial_antiderivative(self, u1, u0):
        # integral over distance from the singular point between u0 and u1
        lo, hi = np.minimum(u0, u1), np.maximum(u0, u1)
        if self.kind == "log":
            F = lambda u: np.where(u > 0, u - u * np.log(np.where(u > 0, u, 1.0)), 0.0)
            return self.c * (F(hi) - F(lo))
        q = 1.0 - self.p
        if abs(q) < 1e-14:
            with np.errstate(divide="ignore"):
                return self.c * (np.log(hi) - np.log(lo))
        with np.errstate(divide="ignore"):
            val = self.c * (hi ** q - lo ** q) / q
        if q < 0:
            val = np.where(lo == 0, INF, val)
        return val

    def scaled(self, k):
        return Piece(self.a, self.b, self.kind, self.c * k, self.p, self.s, self.slope * k,
                     None if self.fn is None else (lambda y, f=self.fn: k * np.asarray(f(y))),
                     self.singular)

    def restricted(self, a, b):
        a, b = max(a, self.a), min(b, self.b)
        if not a < b:
            return None
        if self.kind == "linear":
            return Piece(a, b, "linear", self.c + self.slope * (a - self.a), slope=self.slope)
        sing = tuple(x for x in self.singular if x in (a, b))
        return Piece(a, b, self.kind, self.c, self.p, self.s, self.slope, self.fn, sing)


class Potential:
    """``|q|`` on the line (or its radial profile in ``R^d``)."""

    def __init__(self, pieces, variant="ClosedForm", params=None, dimension=1, radial=False, label=None):
        self.pieces = tuple(pieces)
        self.variant = variant
        self.params = dict(params or {})
        self.dimension = int(dimension)
        self.radial = bool(radial) or self.dimension > 1
        self.label = label or variant

    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        out = np.zeros(y.shape)
        for pc in self.pieces:
            out += pc.values(y)
        return out

    @property
    def is_zero(self):
        return all(pc.c == 0 and pc.slope == 0 and pc.kind != "callable" for pc in self.pieces)

    def sup_abs(self):
        if not self.pieces:
            return 0.0
        # overlapping pieces add up; a bound is enough for the bounded test
        return float(sum(pc.sup_abs() for pc in self.pieces))

    @property
    def bounded(self):
        return math.isfinite(self.sup_abs())

    @property
    def support(self):
        if not self.pieces:
            return (0.0, 0.0)
        return (min(pc.a for pc in self.pieces), max(pc.b for pc in self.pieces))

    def features(self):
        """Finite breakpoints and singular points, sorted."""
        pts = set()
        for pc in self.pieces:
            for v in (pc.a, pc.b) + pc.singular_points:
                if math.isfinite(v):
                    pts.add(float(v))
        return np.array(sorted(pts))

    def min_width(self):
        widths = [pc.b - pc.a for pc in self.pieces if math.isfinite(pc.b - pc.a)]
        return min(widths) if widths else INF

    def lebesgue(self, x, r):
        """``int_{x-r}^{x+r} |q|`` for an array of centres x."""
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape)
        for pc in self.pieces:
            out = out + pc.integral(x - r, x + r)
        return out

    def to_dict(self):
        return {"variant": self.variant, "params": self.params, "dimension": self.dimension}

    def __repr__(self):
        return f"Potential({self.label}, {len(self.pieces)} pieces)"


# --------------------------------------------------------------------------
# builders
# --------------------------------------------------------------------------

def zero():
    return Potential([], "ClosedForm", {"type": "zero"}, label="zero")


def constant(c=1.0):
    return Potential([Piece(-INF, INF, "const", abs(c))], "ClosedForm", {"type": "constant", "c": c},
                     label=f"constant({c})")


def indicator(a, b, c=1.0):
    return Potential([Piece(a, b, "const", abs(c))], "ClosedForm", {"type": "indicator", "a": a, "b": b, "c": c},
                     label=f"indicator({a},{b})")


def power(p, center=0.0, radius=1.0, side="both", c=1.0):
    """``c |y - center|^{-p}`` on ``|y - center| < radius`` (one or both sides)."""
    if side not in ("both", "right", "left"):
        raise SpecError("side must be both, right or left")
    pcs = []
    if side in ("both", "right"):
        pcs.append(Piece(center, center + radius, "power", abs(c), p, center))
    if side in ("both", "left"):
        pcs.append(Piece(center - radius, center, "power", abs(c), p, center))
    return Potential(pcs, "ClosedForm", {"type": "power", "p": p, "center": center, "radius": radius,
                                         "side": side, "c": c}, label=f"power({p},{side})")


def log_singular(center=0.0, radius=0.5, c=1.0):
    """``c log(1/|y - center|)`` on ``|y - center| < radius <= 1``."""
    if not 0 < radius <= 1:
        raise SpecError("radius must lie in (0, 1]")
    pcs = [Piece(center, center + radius, "log", abs(c), s=center),
           Piece(center - radius, center, "log", abs(c), s=center)]
    return Potential(pcs, "ClosedForm", {"type": "log", "center": center, "radius": radius, "c": c},
                     label="log")


def comb(blocks=40):
    """``sum_k 2^k 1_{(k, k + 2^-k)}``, k = 1..blocks; every block has mass 1."""
    if blocks < 1:
        raise SpecError("need at least one block")
    pcs = [Piece(float(k), k + 2.0 ** -k, "const", 2.0 ** k) for k in range(1, blocks + 1)]
    return Potential(pcs, "CounterexampleComb", {"type": "comb", "blocks": blocks}, label=f"comb({blocks})")


def comb_block(k):
    return (float(k), k + 2.0 ** -k, 2.0 ** k)


def grid_sampled(xs, values, rule="linear"):
    """Samples on a grid; ``rule`` is ``linear`` or ``step`` (left-continuous steps).

    Absolute values are interpolated, so sign changes between nodes are not resolved.
    """
    xs = np.asarray(xs, dtype=float)
    v = np.abs(np.asarray(values, dtype=float))
    if xs.ndim != 1 or xs.size < 2 or xs.size != v.size or np.any(np.diff(xs) <= 0):
        raise SpecError("grid needs matching, strictly increasing samples")
    if rule not in ("linear", "step"):
        raise SpecError("rule must be linear or step")
    pcs = []
    for i in range(xs.size - 1):
        a, b = float(xs[i]), float(xs[i + 1])
        if rule == "step":
            if v[i] > 0:
                pcs.append(Piece(a, b, "const", float(v[i])))
        elif v[i] > 0 or v[i + 1] > 0:
            pcs.append(Piece(a, b, "linear", float(v[i]), slope=float((v[i + 1] - v[i]) / (b - a))))
    return Potential(pcs, "GridSampled", {"type": "grid", "x": xs.tolist(), "values": v.tolist(), "rule": rule},
                     label="grid")


def closed_form(fn, support, singular=(), label="closed_form"):
    """Any vectorised function on ``support = (a, b)``; singular points must be ends."""
    a, b = map(float, support)
    sing = tuple(float(s) for s in singular)
    if any(a < s < b for s in sing):
        pcs = []
        cuts = [a] + sorted(s for s in sing if a < s < b) + [b]
        for u, v in zip(cuts[:-1], cuts[1:]):
            pcs.append(Piece(u, v, "callable", fn=fn, singular=tuple(s for s in sing if s in (u, v))))
    else:
        pcs = [Piece(a, b, "callable", fn=fn, singular=tuple(s for s in sing if s in (a, b)))]
    return Potential(pcs, "ClosedForm", {"type": "callable"}, label=label)


def aizenman_simon(p, dimension=3, radius=1.0, c=1.0):
    """Radial ``c |z|^{-p} 1_{|z| < radius}`` in ``R^d`` (the profile is stored on [0, radius))."""
    if dimension == 1:
        q = power(p, 0.0, radius, "both", c)
        q.variant = "AizenmanSimonTest"
        return q
    pc = Piece(0.0, radius, "power", abs(c), p, 0.0)
    return Potential([pc], "AizenmanSimonTest", {"type": "aizenman_simon", "p": p, "d": dimension,
                                                 "radius": radius, "c": c},
                     dimension=dimension, radial=True, label=f"radial_power({p},d={dimension})")


def radial_ball(dimension=3, radius=1.0, c=1.0):
    pc = Piece(0.0, radius, "const", abs(c))
    return Potential([pc], "AizenmanSimonTest", {"type": "ball", "d": dimension, "radius": radius, "c": c},
                     dimension=dimension, radial=True, label=f"ball(d={dimension})")


def sum_of(*qs):
    dims = {q.dimension for q in qs}
    if len(dims) > 1:
        raise SpecError("cannot add potentials of different dimensions")
    pcs = [pc for q in qs for pc in q.pieces]
    return Potential(pcs, "ClosedForm", {"type": "sum", "terms": [q.params for q in qs]},
                     dimension=qs[0].dimension, radial=qs[0].radial, label="sum")


def product(q1, q2):
    """Pointwise product; constant factors scale, anything else becomes a callable piece."""
    if q1.dimension != q2.dimension:
        raise SpecError("cannot multiply potentials of different dimensions")
    pcs = []
    for u in q1.pieces:
        for v in q2.pieces:
            a, b = max(u.a, v.a), min(u.b, v.b)
            if not a < b:
                continue
            if u.kind == "const":
                r = v.restricted(a, b)
                pcs.append(r.scaled(u.c))
            elif v.kind == "const":
                r = u.restricted(a, b)
                pcs.append(r.scaled(v.c))
            else:
                sing = tuple(s for s in set(u.singular_points + v.singular_points) if s in (a, b))
                if any(a < s < b for s in u.singular_points + v.singular_points):
                    raise SpecError("product singularities must sit at piece ends")
                pcs.append(Piece(a, b, "callable", fn=lambda y, u=u, v=v: u.values(y) * v.values(y),
                                 singular=sing))
    return Potential(pcs, "ClosedForm", {"type": "product", "factors": [q1.params, q2.params]},
                     dimension=q1.dimension, radial=q1.radial, label="product")
