"""Command-line front end: run the bundled example problems, custom
integrations from seed files, deviation estimates between trajectories, and
continuous-limit probes.  Trajectories are exchanged as small CSV files
with '#'-prefixed metadata lines."""
from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, fields
from pathlib import Path

from .core import (Constant, DomainError, FunctionOfX, IdentityInY, Jet, Point,
                   RhsEvalPolicy, RootPolicy, RootSelection, SchemeKind,
                   SchemeSpec, Stencil, StopReason, Trajectory, Uniform,
                   seed_stencil_from_function)
from .limits import LimitProbe, probe_limit
from .reference import (EXACT_SOLUTIONS, chi, exact_eval, exact_jet,
                        fifth_order_invariant_system, rk4_integrate,
                        scaled_schwarzian_system, schwarzian_rate_system)
from .schemes import integrate

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3

TAN_RECIPROCAL_POLE = 2.0 / (5.0 * math.pi)

#: named right-hand sides usable as --forcing for the fourth-order scheme
NAMED_FORCINGS = {
    "cos": math.cos,
    "sin": math.sin,
    "zero": lambda x: 0.0,
}


class ConfigError(ValueError):
    """Invalid run configuration (maps to exit status 2)."""


# --- CSV exchange -------------------------------------------------------------

def _fmt(v: float) -> str:
    return format(v, ".17g")


def write_trajectory_csv(path, traj: Trajectory) -> None:
    lines = [f"# scheme: {traj.scheme_id}",
             f"# h: {_fmt(traj.h_nominal)}",
             f"# stop: {traj.stop.value}",
             "x,y"]
    lines += [f"{_fmt(p.x)},{_fmt(p.y)}" for p in traj.points]
    Path(path).write_text("\n".join(lines) + "\n")


def read_trajectory_csv(path) -> Trajectory:
    meta = {"scheme": "unknown", "h": "0", "stop": StopReason.COMPLETED.value}
    pts = []
    header_seen = False
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, value = line[1:].partition(":")
            meta[key.strip()] = value.strip()
            continue
        if not header_seen:
            if line != "x,y":
                raise ConfigError(f"{path}: expected header 'x,y', got {line!r}")
            header_seen = True
            continue
        sx, _, sy = line.partition(",")
        pts.append(Point(float(sx), float(sy)))
    if not pts:
        raise ConfigError(f"{path}: no data rows")
    return Trajectory(tuple(pts), StopReason(meta["stop"]), meta["scheme"],
                      float(meta["h"]))


def _seed_from_csv(path, arity: int) -> Stencil:
    traj = read_trajectory_csv(path)
    if len(traj.points) < arity:
        raise ConfigError(f"{path}: need at least {arity} rows, got {len(traj.points)}")
    return Stencil(traj.points[:arity])


def _seed_from_trajectory(traj: Trajectory, stride: int, n: int) -> Stencil:
    pts = [traj.points[k * stride] for k in range(n)]
    return Stencil(tuple(pts))


# --- run configuration for `solve` ---------------------------------------------

@dataclass
class RunConfig:
    """Flat key=value configuration; command-line flags override file values."""

    scheme: str = ""
    forcing: str = ""
    c: float | None = None
    h: float | None = None
    steps: int | None = None
    rhs_eval: str = "new-point"
    root_policy: str = "nearest"
    seed: str = ""
    out: str = ""

    _FIELD_TYPES = {"scheme": str, "forcing": str, "c": float, "h": float,
                    "steps": int, "rhs_eval": str, "root_policy": str,
                    "seed": str, "out": str}

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        cfg = cls()
        for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, eq, value = line.partition("=")
            if not eq:
                raise ConfigError(f"{path}:{lineno}: expected key = value")
            key = key.strip().replace("-", "_")
            if key not in cls._FIELD_TYPES:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            setattr(cfg, key, cls._FIELD_TYPES[key](value.strip()))
        return cfg

    def to_file(self, path) -> None:
        lines = []
        for f in fields(self):
            v = getattr(self, f.name)
            if v not in ("", None):
                lines.append(f"{f.name.replace('_', '-')} = {v}")
        Path(path).write_text("\n".join(lines) + "\n")

    def override(self, **kwargs) -> "RunConfig":
        for key, value in kwargs.items():
            if value is not None:
                setattr(self, key, value)
        return self

    def build_spec(self) -> SchemeSpec:
        try:
            kind = SchemeKind(self.scheme)
        except ValueError:
            raise ConfigError(f"unknown scheme {self.scheme!r}") from None
        if self.h is None or self.h == 0:
            raise ConfigError("h must be set and nonzero")
        forcing = self.forcing or ("const" if kind is not SchemeKind.SLY4 else "")
        if forcing == "const":
            term = Constant(self.c if self.c is not None else 0.0)
        elif forcing == "y":
            term = IdentityInY()
        elif forcing in NAMED_FORCINGS:
            term = FunctionOfX(NAMED_FORCINGS[forcing], forcing)
        else:
            raise ConfigError(f"unknown forcing {self.forcing!r}")
        try:
            rhs = RhsEvalPolicy(self.rhs_eval)
            sel = {"nearest": RootSelection.NEAREST_TO_PREDICTION,
                   "smallest": RootSelection.SMALLEST_REAL,
                   "largest": RootSelection.LARGEST_REAL}[self.root_policy]
        except (ValueError, KeyError):
            raise ConfigError("invalid rhs-eval or root-policy") from None
        try:
            return SchemeSpec(kind, term, Uniform(self.h), RootPolicy(sel), rhs)
        except ValueError as e:
            raise ConfigError(str(e)) from None


# --- example runs ---------------------------------------------------------------

def _write_summary(out_dir: Path | None, lines: list[str]) -> None:
    text = "\n".join(lines)
    print(text)
    if out_dir is not None:
        (out_dir / "summary.txt").write_text(text + "\n")


def _maybe_write(out_dir: Path | None, name: str, traj: Trajectory) -> None:
    if out_dir is not None:
        write_trajectory_csv(out_dir / name, traj)


def _chi_against_exact(traj: Trajectory, sol, x_max: float | None = None) -> float | None:
    cand, ref = [], []
    for p in traj.points:
        if x_max is not None and not (p.x <= x_max):
            continue
        try:
            ref.append(exact_eval(sol, p.x))
        except DomainError:
            continue
        cand.append(p.y)
    if not cand:
        return None
    return chi(cand, ref)


def _stride(h: float, h_ref: float) -> int:
    stride = round(h / h_ref)
    if stride < 1 or abs(stride * h_ref - h) > 1e-12 * abs(h):
        raise ConfigError("h must be a positive integer multiple of h-ref")
    return stride


def run_example(example_id: str, h: float | None, steps: int | None,
                out_dir: Path | None, h_ref: float = 1e-5,
                x0: float | None = None) -> list[str]:
    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)
    lines = [f"example: {example_id}"]

    if example_id == "1":
        h = 0.01 if h is None else h
        x0 = 1.0 if x0 is None else x0
        x_end = x0 + 1.5
        steps = steps if steps is not None else round((x_end - x0) / h) - 3
        system = schwarzian_rate_system(math.cos)
        init = (1.0, -1.0, -2.5, 5.0)
        stride = _stride(h, h_ref)
        ref = rk4_integrate(system, init, x0, h_ref, round((x_end - x0) / h_ref))
        seed = _seed_from_trajectory(ref, stride, 4)
        spec = SchemeSpec(SchemeKind.SLY4, FunctionOfX(math.cos, "cos"), Uniform(h))
        inv = integrate(spec, seed, steps)
        base = rk4_integrate(system, init, x0, h, steps + 3)
        ref_at_lattice = [ref.points[n * stride].y for n in range(len(inv.points))]
        lines += [f"invariant stop: {inv.stop.value}",
                  f"baseline stop: {base.stop.value}",
                  f"invariant endpoint: x = {_fmt(inv.points[-1].x)}, y = {_fmt(inv.points[-1].y)}",
                  f"chi vs fine reference: {chi(inv, ref_at_lattice):.6g}"]
        _maybe_write(out_dir, "invariant.csv", inv)
        _maybe_write(out_dir, "baseline.csv", base)

    elif example_id in ("2-log", "2-arctanh"):
        if example_id == "2-log":
            h = 1e-4 if h is None else h
            x0 = -1.0 if x0 is None else x0
            c = 0.5
            sol = EXACT_SOLUTIONS["log-abs"]()
            steps = steps if steps is not None else round(1.05 * abs(x0) / abs(h))
        else:
            h = 0.01 if h is None else h
            x0 = -0.9 if x0 is None else x0
            c = 2.0
            sol = EXACT_SOLUTIONS["arctanh"]()
            steps = steps if steps is not None else round(1.8 / abs(h)) - 2
        seed = seed_stencil_from_function(sol.eval_fn, x0, h, 3)
        spec = SchemeSpec(SchemeKind.SLX3, Constant(c), Uniform(h))
        inv = integrate(spec, seed, steps)
        jet = exact_jet(sol, x0)
        base = rk4_integrate(scaled_schwarzian_system(lambda x, y: c),
                             jet.d[:3], x0, h, steps + 2)
        value = _chi_against_exact(inv, sol)
        lines += [f"invariant stop: {inv.stop.value}",
                  f"invariant last x: {_fmt(inv.points[-1].x)}",
                  f"baseline stop: {base.stop.value}",
                  f"baseline last x: {_fmt(base.points[-1].x)}",
                  f"chi vs exact: {value:.6g}"]
        _maybe_write(out_dir, "invariant.csv", inv)
        _maybe_write(out_dir, "baseline.csv", base)

    elif example_id == "3":
        h = 0.001 if h is None else h
        x0 = 0.0 if x0 is None else x0
        steps = steps if steps is not None else round(0.3 / h)
        system = scaled_schwarzian_system(lambda x, y: y)
        init = (10.0, -1.0, -10.0)
        stride = _stride(h, h_ref)
        ref = rk4_integrate(system, init, x0, h_ref, 2 * stride)
        seed = _seed_from_trajectory(ref, stride, 3)
        spec = SchemeSpec(SchemeKind.SLX3, IdentityInY(), Uniform(h))
        inv = integrate(spec, seed, steps)
        base = rk4_integrate(system, init, x0, h, steps + 2)
        n = min(len(inv.points), len(base.points))
        lines += [f"invariant stop: {inv.stop.value}",
                  f"invariant last x: {_fmt(inv.points[-1].x)}",
                  f"baseline stop: {base.stop.value}",
                  f"baseline last x: {_fmt(base.points[-1].x)}",
                  f"chi vs baseline (common prefix): {chi(inv.ys[:n], base.ys[:n]):.6g}"]
        _maybe_write(out_dir, "invariant.csv", inv)
        _maybe_write(out_dir, "baseline.csv", base)

    elif example_id == "4":
        h = 0.1 if h is None else h
        x0 = -1.0 if x0 is None else x0
        steps = steps if steps is not None else 40
        sol = EXACT_SOLUTIONS["one-over-one-minus-exp"]()
        seed = seed_stencil_from_function(sol.eval_fn, x0, h, 5)
        spec = SchemeSpec(SchemeKind.H5, Constant(0.0), Uniform(h))
        inv = integrate(spec, seed, steps)
        base = rk4_integrate(fifth_order_invariant_system(0.0),
                             exact_jet(sol, x0).d[:5], x0, h, steps + 4)
        devs = []
        for p in inv.points:
            try:
                devs.append(abs(p.y - exact_eval(sol, p.x)))
            except DomainError:
                continue  # the lattice can land on the pole itself
        rho = 2.0 + math.exp(h) + math.exp(-h)
        ys = inv.ys
        r_dev = max(abs(_cross_ratio_of(ys[k:k + 4]) - rho)
                    for k in range(len(ys) - 3))
        lines += [f"invariant stop: {inv.stop.value}",
                  f"invariant last x: {_fmt(inv.points[-1].x)}",
                  f"baseline stop: {base.stop.value}",
                  f"max deviation from exact: {max(devs):.6g}",
                  f"max cross-ratio deviation: {r_dev:.6g}",
                  f"exact discrete solution: {'yes' if max(devs) <= 1e-9 else 'no'}",
                  f"chi vs exact: {_chi_against_exact(inv, sol):.6g}"]
        _maybe_write(out_dir, "invariant.csv", inv)
        _maybe_write(out_dir, "baseline.csv", base)

    elif example_id == "5":
        h = 0.001 if h is None else h
        x0 = 0.1 if x0 is None else x0
        steps = steps if steps is not None else 60
        sol = EXACT_SOLUTIONS["tan-reciprocal"]()
        seed = seed_stencil_from_function(sol.eval_fn, x0, h, 5)
        spec = SchemeSpec(SchemeKind.H5, Constant(0.0), Uniform(h))
        inv = integrate(spec, seed, steps)
        # fixed-step RK4 with a coarse step can hop the pole on garbage values;
        # 1e-5 keeps the blow-up on the near side
        h_base = min(h, 1e-5)
        base = rk4_integrate(fifth_order_invariant_system(0.0),
                             exact_jet(sol, x0).d[:5], x0, h_base,
                             round(2.0 * (TAN_RECIPROCAL_POLE - x0) / h_base))
        beyond = inv.points[-1].x > TAN_RECIPROCAL_POLE
        value = _chi_against_exact(inv, sol, x_max=TAN_RECIPROCAL_POLE - 2 * h)
        lines += [f"invariant stop: {inv.stop.value}",
                  f"invariant last x: {_fmt(inv.points[-1].x)}",
                  f"first pole: {_fmt(TAN_RECIPROCAL_POLE)}",
                  f"beyond singularity: {'yes' if beyond else 'no'}",
                  f"baseline stop: {base.stop.value}",
                  f"baseline last x: {_fmt(base.points[-1].x)}",
                  f"chi vs exact before pole: {value:.6g}"]
        _maybe_write(out_dir, "invariant.csv", inv)
        _maybe_write(out_dir, "baseline.csv", base)

    else:
        raise ConfigError(f"unknown example id {example_id!r}")

    _write_summary(out_dir, lines)
    return lines


def _cross_ratio_of(window) -> float:
    a0, a1, a2, a3 = window
    return ((a3 - a1) * (a2 - a0)) / ((a3 - a2) * (a1 - a0))


# --- subcommand drivers ----------------------------------------------------------

def cmd_example(args) -> int:
    out_dir = Path(args.out) if args.out else None
    run_example(args.id, args.h, args.steps, out_dir, args.h_ref, args.x0)
    return EXIT_OK


def cmd_solve(args) -> int:
    cfg = RunConfig.from_file(args.config) if args.config else RunConfig()
    cfg.override(scheme=args.scheme, forcing=args.forcing, c=args.c, h=args.h,
                 steps=args.steps, rhs_eval=args.rhs_eval,
                 root_policy=args.root_policy, seed=args.seed, out=args.out)
    if not cfg.seed:
        raise ConfigError("a seed file is required")
    if not cfg.out:
        raise ConfigError("an output path is required")
    if cfg.steps is None or cfg.steps < 1:
        raise ConfigError("steps must be a positive integer")
    spec = cfg.build_spec()
    seed = _seed_from_csv(cfg.seed, spec.arity)
    traj = integrate(spec, seed, cfg.steps)
    write_trajectory_csv(cfg.out, traj)
    print(f"wrote {len(traj.points)} points to {cfg.out} (stop: {traj.stop.value})")
    return EXIT_OK


def cmd_chi(args) -> int:
    a = read_trajectory_csv(args.a)
    if args.b in EXACT_SOLUTIONS:
        sol = EXACT_SOLUTIONS[args.b]()
        try:
            ref = [exact_eval(sol, p.x) for p in a.points]
        except DomainError as e:
            raise ConfigError(f"exact solution undefined on the trajectory: {e}") from None
    else:
        b = read_trajectory_csv(args.b)
        if len(b.points) != len(a.points):
            raise ConfigError(f"length mismatch: {len(a.points)} vs {len(b.points)}")
        ref = list(b.ys)
    value = chi(a, ref)
    print(f"{value:.6f}" if value == 0.0 else f"{value:.6g}")
    return EXIT_OK


def _jet_function(name: str):
    if name == "exp":
        return lambda x: Jet(x, (math.exp(x),) * 6)
    if name in EXACT_SOLUTIONS:
        sol = EXACT_SOLUTIONS[name]()
        return sol.jet_fn
    raise ConfigError(f"unknown test function {name!r}")


def cmd_limit(args) -> int:
    hs = tuple(args.h0 * args.ratio ** k for k in range(args.levels))
    probe = LimitProbe(args.invariant, _jet_function(args.function), args.x0, hs)
    report = probe_limit(probe)
    print(f"{'h':>12} {'value':>24} {'target':>24} {'error':>12}")
    for h, v, t, e in zip(report.hs, report.values, report.targets, report.errors):
        print(f"{h:12.4e} {v:24.16e} {t:24.16e} {e:12.4e}")
    print(f"estimated order: {report.estimated_order:.3f}")
    print(f"limit value: {report.limit_value:.16e}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="invdisc",
        description="Projective-invariant difference schemes for ODEs")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("example", help="run one of the bundled example problems")
    p.add_argument("id", choices=["1", "2-log", "2-arctanh", "3", "4", "5"])
    p.add_argument("--h", type=float, default=None)
    p.add_argument("--steps", type=int, default=None)
    p.add_argument("--x0", type=float, default=None, help="override the start abscissa")
    p.add_argument("--out", default=None, help="directory for CSVs and summary")
    p.add_argument("--h-ref", dest="h_ref", type=float, default=1e-5,
                   help="step of the seeding/reference RK4 run")
    p.set_defaults(fn=cmd_example)

    p = sub.add_parser("solve", help="integrate a scheme from a seed file")
    p.add_argument("--config", default=None, help="key = value configuration file")
    p.add_argument("--scheme", choices=[k.value for k in SchemeKind], default=None)
    p.add_argument("--forcing", default=None,
                   help="const, y, or a named function of x (cos, sin, zero)")
    p.add_argument("--c", type=float, default=None)
    p.add_argument("--h", type=float, default=None)
    p.add_argument("--steps", type=int, default=None)
    p.add_argument("--rhs-eval", dest="rhs_eval",
                   choices=[v.value for v in RhsEvalPolicy], default=None)
    p.add_argument("--root-policy", dest="root_policy",
                   choices=["nearest", "smallest", "largest"], default=None)
    p.add_argument("--seed", default=None, help="CSV file; first rows feed the stencil")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("chi", help="deviation between two trajectories")
    p.add_argument("a")
    p.add_argument("b", help="CSV path or exact-solution id "
                            f"({', '.join(EXACT_SOLUTIONS)})")
    p.set_defaults(fn=cmd_chi)

    p = sub.add_parser("limit", help="continuous-limit probe of one invariant")
    p.add_argument("--invariant", required=True,
                   choices=["l3", "l4", "l5", "m3", "m4", "m5", "h5"])
    p.add_argument("--function", required=True)
    p.add_argument("--x0", type=float, required=True)
    p.add_argument("--h0", type=float, default=0.01)
    p.add_argument("--levels", type=int, default=5)
    p.add_argument("--ratio", type=float, default=0.5)
    p.set_defaults(fn=cmd_limit)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as e:
        print(f"i/o error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
