"""Command line entry point ``levykato``.

Subcommands: classify, kernel, kato-check, simulate, battery. JSON outputs
carry ``schema_version`` and are written with sorted keys, so a run is
byte-reproducible given its inputs, config and seed.

Exit codes: 0 definitive result, 1 input error, 2 Inconclusive, 3 a battery
or consistency check failed.
"""
from __future__ import annotations

import argparse
import dataclasses
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import battery, kato, montecarlo, schema
from .classifier import classify
from .errors import InconclusiveIntegral, LevyKatoError, SpecError
from .potential import potential_density, transition_density, truncated_potential

EXIT_OK, EXIT_INPUT, EXIT_INCONCLUSIVE, EXIT_FAILED = 0, 1, 2, 3


@dataclass(frozen=True)
class RunConfig:
    """Analysis settings; ``kato`` holds the grid and limit-rule defaults."""

    kato: kato.KatoConfig = field(default_factory=kato.KatoConfig)
    mc_paths: int = 100000
    seed: int = 0
    kernel_halfwidth: float = 8.0
    kernel_points: int = 4001

    def __post_init__(self):
        if self.mc_paths < 1 or self.kernel_points < 2 or not self.kernel_halfwidth > 0:
            raise SpecError("config: mc_paths, kernel_points and kernel_halfwidth must be positive")

    @classmethod
    def from_dict(cls, obj):
        if not isinstance(obj, dict):
            raise SpecError("config: expected a JSON object")
        obj = {k: v for k, v in obj.items() if k != "schema_version"}
        kfields = {f.name for f in dataclasses.fields(kato.KatoConfig)}
        own = {f.name for f in dataclasses.fields(cls)} - {"kato"}
        unknown = set(obj) - kfields - own
        if unknown:
            raise SpecError(f"config: unknown field(s) {sorted(unknown)}")
        kargs = {k: tuple(v) if isinstance(v, list) else v for k, v in obj.items() if k in kfields}
        try:
            return cls(kato.KatoConfig(**kargs), **{k: v for k, v in obj.items() if k in own})
        except TypeError as exc:
            raise SpecError(f"config: {exc}") from exc


def _config(args):
    if getattr(args, "config", None):
        return RunConfig.from_dict(schema.load_json(args.config))
    return RunConfig()


def _emit(text, out):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _float(s):
    v = float(s)
    if math.isnan(v):
        raise argparse.ArgumentTypeError("nan is not allowed")
    return v


def cmd_classify(args):
    spec = schema.parse_spec(schema.load_json(args.spec))
    try:
        cls = classify(spec, args.lam)
    except InconclusiveIntegral as exc:
        diag = exc.diagnostic.to_dict() if exc.diagnostic is not None else None
        _emit(schema.dumps({"label": "Inconclusive", "evidence": {"regularity_integral": diag}}), args.out)
        return EXIT_INCONCLUSIVE
    _emit(schema.dumps(cls.to_dict()), args.out)
    return EXIT_OK


def cmd_kernel(args):
    cfg = _config(args)
    spec = schema.parse_spec(schema.load_json(args.spec))
    h = args.halfwidth if args.halfwidth is not None else cfg.kernel_halfwidth
    n = args.points if args.points is not None else cfg.kernel_points
    grid = np.linspace(-h, h, n)
    if args.kind == "resolvent":
        kg = potential_density(spec, args.lam, grid)
    elif args.kind == "truncated":
        kg = truncated_potential(spec, args.lam, args.t, grid)
    else:
        kg = transition_density(spec, args.t, grid)
    _emit(kg.to_csv(), args.out)
    return EXIT_OK


def cmd_kato_check(args):
    cfg = _config(args)
    if args.battery:
        return cmd_battery(args)
    if not (args.spec and args.q):
        raise SpecError("kato-check needs --spec and --q (or --battery)")
    spec = schema.parse_spec(schema.load_json(args.spec))
    q = schema.parse_potential(schema.load_json(args.q))
    conds = tuple(c for c in (args.conditions or "closed").split(",") if c)
    v = kato.verdict(q, spec, cfg.kato, conds)
    _emit(schema.dumps(v.to_dict()), args.out)
    if not v.lattice_ok:
        return EXIT_FAILED
    if "Inconclusive" in (v.membership_K, v.membership_calK):
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def cmd_simulate(args):
    cfg = _config(args)
    spec = schema.parse_spec(schema.load_json(args.spec))
    q = schema.parse_potential(schema.load_json(args.q))
    paths = args.paths if args.paths is not None else cfg.mc_paths
    seed = args.seed if args.seed is not None else cfg.seed
    sampler = montecarlo.sampler_for(spec, eps_jump=args.eps_jump, t=args.t)
    x = args.x if spec.dimension == 1 else [args.x] * spec.dimension
    if args.lam is None:
        est = montecarlo.estimate_time_functional(sampler, q, x, args.t, paths, seed, args.dt)
        kind = "time"
    else:
        r = args.r if args.r is not None else math.inf
        est = montecarlo.estimate_space_functional(sampler, q, x, args.lam, r, args.horizon, paths, seed, args.dt)
        kind = "space"
    _emit(schema.dumps({"functional": kind, "x": args.x, "t": args.t, **est.to_dict()}), args.out)
    return EXIT_OK


def cmd_battery(args):
    cfg = _config(args)
    res = battery.run_all(cfg.kato)
    _emit(schema.dumps(res), args.out)
    return EXIT_OK if res["passed"] else EXIT_FAILED


def build_parser():
    p = argparse.ArgumentParser(prog="levykato", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, spec=True):
        if spec:
            sp.add_argument("--spec", required=True, help="process spec JSON")
        sp.add_argument("--config", help="run config JSON")
        sp.add_argument("--out", help="output path (default stdout)")

    c = sub.add_parser("classify", help="label the process")
    common(c)
    c.add_argument("--lam", type=_float, default=1.0)
    c.set_defaults(func=cmd_classify)

    k = sub.add_parser("kernel", help="kernel on a symmetric grid as CSV")
    common(k)
    k.add_argument("--kind", choices=("resolvent", "truncated", "transition"), default="resolvent")
    k.add_argument("--lam", type=_float, default=1.0)
    k.add_argument("--t", type=_float, default=1.0)
    k.add_argument("--halfwidth", type=_float)
    k.add_argument("--points", type=int)
    k.set_defaults(func=cmd_kernel)

    v = sub.add_parser("kato-check", help="membership verdict for a potential")
    common(v, spec=False)
    v.add_argument("--spec")
    v.add_argument("--q")
    v.add_argument("--conditions", help="extra numeric profiles: time,space,timespace,trunc")
    v.add_argument("--battery", action="store_true", help="run the ground-truth battery instead")
    v.set_defaults(func=cmd_kato_check)

    s = sub.add_parser("simulate", help="Monte Carlo estimate of an occupation functional")
    common(s)
    s.add_argument("--q", required=True)
    s.add_argument("--x", type=_float, default=0.0)
    s.add_argument("--t", type=_float, default=1.0)
    s.add_argument("--paths", type=int)
    s.add_argument("--seed", type=int)
    s.add_argument("--dt", type=_float)
    s.add_argument("--lam", type=_float, help="estimate the discounted ball functional instead")
    s.add_argument("--r", type=_float)
    s.add_argument("--horizon", type=_float)
    s.add_argument("--eps-jump", type=_float)
    s.set_defaults(func=cmd_simulate)

    b = sub.add_parser("battery", help="run the ground-truth battery")
    common(b, spec=False)
    b.set_defaults(func=cmd_battery)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SpecError as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return EXIT_INPUT
    except InconclusiveIntegral as exc:
        sys.stderr.write(f"inconclusive: {exc}\n")
        return EXIT_INCONCLUSIVE
    except LevyKatoError as exc:
        sys.stderr.write(f"{type(exc).__name__}: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
