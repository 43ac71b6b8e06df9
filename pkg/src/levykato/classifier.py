"""Regularity/polarity classification of Levy processes.

One-dimensional processes fall into exactly one of

* ``CompoundPoisson``: ``A = 0``, finite Levy measure, zero drift ``gamma_0``;
* ``B``: ``A = 0``, finite variation and ``gamma_0 != 0``;
* ``C``: ``A != 0`` or ``int Re 1/(lam + psi) < inf`` (0 regular for {0});
* ``A``: the remaining case, where ``{0}`` is polar.

Processes in ``R^d``, ``d > 1``, are either concentrated (up to finitely
many jumps) on a declared line V, giving the primed labels, or satisfy the
non-degeneracy hypothesis, in which case points are polar (``D_gt1_H0``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InconclusiveIntegral, MissingDecomposition, SpecError, WrongCase
from .levy_model import (UNDEFINED, Decomposition, DensityMeasure, Product, StableMeasure,
                         Subordinator, Triplet, drift_gamma0)
from .quadrature import adaptive_gl

LABELS = ("CompoundPoisson", "A", "B", "C", "Aprime", "Bprime", "Cprime", "D_gt1_H0")
PRIME = {"A": "Aprime", "B": "Bprime", "C": "Cprime"}


@dataclass(frozen=True)
class RegularityConfig:
    r0: float = 1.0
    ratio: float = 2.0
    max_levels: int = 80
    window: int = 8
    cauchy_tol: float = 1e-8
    slope_min: float = 0.02
    growth_min: float = 0.01
    rtol: float = 1e-10
    panel_cap: int = 64


@dataclass
class DivergenceDiagnostic:
    radii: list
    partial_integrals: list
    slope: float
    growth: float
    verdict: str
    lam: float
    quadrature_error: float = 0.0

    @property
    def limit(self):
        return self.partial_integrals[-1] if self.verdict == "Converges" else math.inf

    def to_dict(self):
        return {"radii": self.radii, "partial_integrals": self.partial_integrals,
                "slope": self.slope, "growth": self.growth, "verdict": self.verdict,
                "lambda": self.lam, "quadrature_error": self.quadrature_error}


@dataclass
class Classification:
    label: str
    evidence: dict = field(default_factory=dict)

    @property
    def regular(self):
        return self.label in ("C", "Cprime")

    def to_dict(self):
        ev = {}
        for k, v in self.evidence.items():
            if isinstance(v, DivergenceDiagnostic):
                v = v.to_dict()
            elif isinstance(v, np.ndarray):
                v = v.tolist()
            ev[k] = v
        return {"label": self.label, "evidence": ev}


def _psi_fn(psi):
    if hasattr(psi, "psi"):
        return psi.psi
    return psi


def regularity_integral(psi, lam=1.0, config: RegularityConfig | None = None) -> DivergenceDiagnostic:
    """Partial integrals ``I(R) = int_0^R Re 1/(lam + psi(z)) dz`` on geometric radii.

    The full-line integral is twice the half-line value because
    ``psi(-z)`` is the conjugate of ``psi(z)``.
    """
    cfg = config or RegularityConfig()
    if lam <= 0:
        raise SpecError("lambda must be positive")
    f = _psi_fn(psi)

    def integrand(z):
        return np.real(1.0 / (lam + f(z)))

    radii, partial = [], []
    total, err_total = 0.0, 0.0
    lo = 0.0
    verdict = None
    for k in range(cfg.max_levels + 1):
        hi = cfg.r0 * cfg.ratio ** k
        inc, err = adaptive_gl(integrand, lo, hi, rtol=cfg.rtol, atol=1e-300, n=10,
                               max_panels=cfg.panel_cap, init_panels=4)
        total += max(inc, 0.0)
        err_total += err
        radii.append(hi)
        partial.append(total)
        lo = hi
        if k >= cfg.window and inc < cfg.cauchy_tol * total:
            verdict = "Converges"
            break
    slope, growth = _tail_trend(radii, partial, cfg.window)
    if verdict is None:
        diverging = slope > cfg.slope_min or growth >= cfg.growth_min
        verdict = "Diverges" if diverging else "Inconclusive"
    return DivergenceDiagnostic(radii, partial, slope, growth, verdict, lam, err_total)


def _tail_trend(radii, partial, window):
    r = np.log(np.asarray(radii[-window:]))
    i = np.asarray(partial[-window:])
    if i.size < 2 or np.any(i <= 0):
        return 0.0, 0.0
    li = np.log(i)
    slope = float(np.polyfit(r, li, 1)[0])
    growth = float(np.min(np.diff(i) / i[:-1]))
    return slope, growth


# --------------------------------------------------------------------------

def _triplet_facts(spec: Triplet):
    facts = spec.nu.variation()
    mass = spec.nu.total_mass()
    g0 = drift_gamma0(spec)
    a_nonzero = bool(np.any(np.abs(spec.A) > 0))
    return facts, mass, g0, a_nonzero


def _is_zero(v, ref):
    return bool(np.all(np.abs(v) <= 1e-12 * max(1.0, float(np.max(np.abs(ref))))))


def is_compound_poisson(spec) -> bool:
    """Cheap structural test: zero Gaussian part, finite measure, zero drift."""
    if isinstance(spec, Subordinator):
        return not spec.phi.unbounded
    if isinstance(spec, Triplet):
        if np.any(spec.A != 0):
            return False
        mass = spec.nu.total_mass()
        if not math.isfinite(mass):
            return False
        return _is_zero(drift_gamma0(spec), spec.gamma)
    if isinstance(spec, Product):
        return all(is_compound_poisson(c) for c in spec.components)
    if isinstance(spec, Decomposition):
        return is_compound_poisson(spec.Z)
    return False


def classify(spec, lam=1.0, config: RegularityConfig | None = None) -> Classification:
    """Assign exactly one label; see the module docstring."""
    if lam <= 0:
        raise SpecError("lambda must be positive")
    if isinstance(spec, Product):
        return _classify_product(spec, lam, config)
    if isinstance(spec, Decomposition):
        inner = classify(spec.Z, lam, config)
        ev = {"subspace_V": spec.direction.tolist(), "Z": inner.to_dict(),
              "Y_mass": spec.Y.total_mass()}
        if inner.label == "CompoundPoisson":
            return Classification("CompoundPoisson", ev)
        return Classification(PRIME[inner.label], ev)
    if spec.dimension > 1:
        return _classify_multi(spec)
    if isinstance(spec, Subordinator):
        ev = {"gamma0": [0.0], "finite_variation": True, "A_nonzero": False,
              "laplace_family": spec.phi.family}
        if not spec.phi.unbounded:
            return Classification("CompoundPoisson", ev)
        return _by_integral(spec, lam, config, ev)
    facts, mass, g0, a_nonzero = _triplet_facts(spec)
    ev = {"gamma0": None if g0 is UNDEFINED else np.asarray(g0).tolist(),
          "finite_variation": bool(facts.finite), "A_nonzero": a_nonzero,
          "total_mass": mass, "variation_method": facts.method}
    if a_nonzero:
        return Classification("C", ev)
    if math.isfinite(mass) and _is_zero(g0, spec.gamma):
        return Classification("CompoundPoisson", ev)
    if facts.finite and not _is_zero(g0, spec.gamma):
        return Classification("B", ev)
    return _by_integral(spec, lam, config, ev)


def _by_integral(spec, lam, config, ev):
    diag = regularity_integral(spec, lam, config)
    ev["regularity_integral"] = diag
    if diag.verdict == "Diverges":
        return Classification("A", ev)
    if diag.verdict == "Converges":
        return Classification("C", ev)
    raise InconclusiveIntegral("regularity integral neither converged nor diverged", diag)


def _classify_product(spec: Product, lam, config):
    comps = [classify(c, lam, config) for c in spec.components]
    labels = [c.label for c in comps]
    ev = {"components": [c.to_dict() for c in comps]}
    non_cp = [i for i, l in enumerate(labels) if l != "CompoundPoisson"]
    if not non_cp:
        return Classification("CompoundPoisson", ev)
    if len(non_cp) == 1:
        i = non_cp[0]
        e = np.zeros(spec.dimension)
        e[i] = 1.0
        ev["subspace_V"] = e.tolist()
        return Classification(PRIME[labels[i]], ev)
    finite = all(_finite_no_gauss(c) for c in spec.components)
    if finite:
        g0 = np.array([_gamma0_1d(c) for c in spec.components])
        ev["subspace_V"] = (g0 / np.linalg.norm(g0)).tolist()
        return Classification("Bprime", ev)
    ev["h0"] = True
    return Classification("D_gt1_H0", ev)


def _finite_no_gauss(c):
    if isinstance(c, Triplet):
        return not np.any(c.A != 0) and math.isfinite(c.nu.total_mass())
    if isinstance(c, Subordinator):
        return not c.phi.unbounded
    return False


def _gamma0_1d(c):
    if isinstance(c, Subordinator):
        return 0.0
    return float(np.asarray(drift_gamma0(c))[0])


def _classify_multi(spec: Triplet):
    if not isinstance(spec, Triplet):
        raise SpecError("unsupported multi-dimensional spec")
    rank = int(np.linalg.matrix_rank(spec.A))
    ev = {"A_rank": rank, "dimension": spec.dimension}
    if rank >= 2 or spec.h0 is True or isinstance(spec.nu, StableMeasure):
        ev["h0"] = True
        return Classification("D_gt1_H0", ev)
    mass = spec.nu.total_mass()
    if rank == 0 and math.isfinite(mass) and not isinstance(spec.nu, DensityMeasure):
        g0 = np.asarray(drift_gamma0(spec))
        ev["gamma0"] = g0.tolist()
        if _is_zero(g0, spec.gamma):
            return Classification("CompoundPoisson", ev)
        # drift along gamma_0 plus finitely many jumps: concentrated on that line
        ev["subspace_V"] = (g0 / np.linalg.norm(g0)).tolist()
        return Classification("Bprime", ev)
    raise MissingDecomposition(
        "d > 1 spec without declared hypothesis status; supply a decomposition (V, Y, Z) or h0=true")


# --------------------------------------------------------------------------

@dataclass
class HittingGrid:
    grid: np.ndarray
    values: np.ndarray
    lam: float
    label: str
    continuous_at_zero: bool
    shape_only: bool

    @property
    def sup_off_zero(self):
        mask = self.grid != 0
        return float(np.max(self.values[mask])) if mask.any() else 0.0


def hitting_transform(kernel, classification: Classification) -> HittingGrid:
    """``h^lam(x) = E^0 exp(-lam T_x)`` on the kernel's grid.

    In case C the kernel is normalised by its value at 0. In case B the value
    at 0 is not the limit of nearby values, so the grid maximum is used and
    the result is only a shape. In the polar cases the transform vanishes.
    """
    label = classification.label
    g = np.asarray(kernel.grid, dtype=float)
    v = np.asarray(kernel.values, dtype=float)
    if label == "CompoundPoisson":
        raise WrongCase("compound Poisson processes have no potential density")
    if label in ("A", "Aprime", "D_gt1_H0"):
        return HittingGrid(g, np.zeros_like(v), kernel.lam, label, True, False)
    if label in ("C", "Cprime"):
        g0 = float(np.interp(0.0, g, v))
        h = np.clip(v / g0, 0.0, None)
        if np.any(g == 0):
            h[g == 0] = 1.0
        return HittingGrid(g, np.minimum(h, 1.0 + 1e-9), kernel.lam, label, True, False)
    mask = g != 0
    h = v / np.max(v[mask])
    return HittingGrid(g, np.clip(h, 0.0, 1.0), kernel.lam, label, False, True)
