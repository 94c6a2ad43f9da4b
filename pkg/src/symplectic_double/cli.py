"""Command-line front end.

Exit codes: 0 when every check passes, 1 on a verification failure, 2 on
malformed input.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import double as dbl
from . import fenchel_nielsen as fn
from . import quantum, sl2, surface, tropical
from .double import DoubleSeed
from .presets import PRESETS, polygon_preset, quiver_preset
from .quiver import Quiver, mutate_quiver
from .verdict import Verdict

DEFAULT_RNG_SEED = 20240601


class InputError(Exception):
    """Raised for anything wrong with the user's input."""


@dataclass
class RunReport:
    command: str
    digest: str
    checks: list[dict] = field(default_factory=list)
    result: object = None
    timings: bool = False

    def add(self, v: Verdict, seconds: float | None = None) -> None:
        entry = v.to_json()
        if self.timings and seconds is not None:
            entry["wall_time"] = round(seconds, 6)
        self.checks.append(entry)

    def run(self, fn_: Callable[[], Verdict]) -> Verdict:
        t0 = time.perf_counter()
        v = fn_()
        self.add(v, time.perf_counter() - t0)
        return v

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.checks)

    def to_json(self) -> dict:
        out = {"command": self.command, "input_digest": self.digest, "passed": self.passed,
               "checks": sorted(self.checks, key=lambda c: c["name"])}
        if self.result is not None:
            out["result"] = self.result
        return out

    def render(self) -> str:
        lines = []
        if self.result is not None:
            lines.append(self.result if isinstance(self.result, str) else json.dumps(self.result, indent=2))
        for c in sorted(self.checks, key=lambda c: c["name"]):
            line = f"{'PASS' if c['passed'] else 'FAIL'}  {c['name']}"
            if c.get("witness"):
                line += f"  ({c['witness']})"
            if "wall_time" in c:
                line += f"  [{c['wall_time']:.3f}s]"
            lines.append(line)
        return "\n".join(lines)


def _digest(*parts) -> str:
    h = hashlib.sha256()
    for p in parts:
        h.update(json.dumps(p, sort_keys=True, default=str).encode())
    return h.hexdigest()[:16]


def _load_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise InputError(f"{path}: no such file") from None
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: line {e.lineno}, column {e.colno}: {e.msg}") from None


def _with_path(path: str, loader):
    try:
        return loader(_load_json(path))
    except InputError:
        raise
    except (ValueError, KeyError, TypeError, IndexError) as e:
        raise InputError(f"{path}: {e}") from None


def _quiver(args) -> Quiver:
    if getattr(args, "seed", None):
        return _with_path(args.seed, Quiver.from_json)
    if getattr(args, "preset", None):
        return quiver_preset(args.preset)
    raise InputError("give a quiver with --seed FILE or --preset NAME")


def _index(q: Quiver, k: str) -> int:
    key = k if k in q.labels else int(k) if k.lstrip("-").isdigit() else k
    try:
        return q.index(key)
    except IndexError as e:
        raise InputError(str(e)) from None


def _rationals(text: str) -> list[Fraction]:
    try:
        return [Fraction(x.strip()) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"not a comma-separated list of rationals: {text!r}") from None


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------

def cmd_quiver_mutate(args, report: RunReport):
    q = _quiver(args)
    k = _index(q, args.at)
    out = mutate_quiver(q, k)
    report.result = out.to_json()


def cmd_double_mutate(args, report: RunReport):
    q = _quiver(args)
    m = dbl.mutate_double(DoubleSeed(q), _index(q, args.at))
    if args.emit:
        try:
            with open(args.emit, "w", encoding="utf-8") as fh:
                json.dump(m.to_json(), fh, indent=2)
        except OSError as e:
            raise InputError(f"{args.emit}: {e.strerror}") from None
    report.result = m.to_json() if args.json else "\n".join(f"{c} = {f.render()}" for c, f in m.substitution.items())


DOUBLE_CHECKS = {
    "involution": dbl.check_involution,
    "form": dbl.check_form_invariance,
    "k2": dbl.k2_check,
    "poisson": dbl.check_bracket_preservation,
}
SEED_CHECKS = {"casimir": dbl.check_casimirs, "duality": dbl.check_bracket_form_duality}


def _double_suite(report: RunReport, q: Quiver, checks=None) -> None:
    s = DoubleSeed(q)
    checks = checks or list(DOUBLE_CHECKS) + list(SEED_CHECKS)
    for name in checks:
        if name in DOUBLE_CHECKS:
            for k in range(q.rank):
                report.run(lambda: DOUBLE_CHECKS[name](s, k))
        else:
            report.run(lambda: SEED_CHECKS[name](s))


def cmd_double_verify(args, report: RunReport):
    checks = [c.strip() for c in args.checks.split(",")] if args.checks else None
    known = set(DOUBLE_CHECKS) | set(SEED_CHECKS)
    for c in checks or ():
        if c not in known:
            raise InputError(f"unknown check {c!r} (choose from {', '.join(sorted(known))})")
    _double_suite(report, _quiver(args), checks)


def cmd_quantum_mutate(args, report: RunReport):
    q = _quiver(args)
    s = DoubleSeed(q)
    k = _index(q, args.at)
    imgs = quantum.q_mutate_generators(s, k, args.order)
    report.result = {name: f.render() for name, f in imgs.items()} if args.json else \
        "\n".join(f"{name} = {f.render()}" for name, f in imgs.items())
    if args.verify:
        report.run(lambda: quantum.check_q_equals_one(s, k, args.order))
        report.run(lambda: quantum.q_conjugation_check(s, k, args.truncate, args.order))


def _triangulation(path: str) -> surface.Triangulation:
    return _with_path(path, surface.Triangulation.from_json)


def cmd_surface_flip(args, report: RunReport):
    t = _triangulation(args.tri)
    try:
        out = surface.flip(t, args.edge)
    except surface.FlipError as e:
        raise InputError(str(e)) from None
    report.result = out.to_json()
    report.run(lambda: surface.flip_consistency_check(t, args.edge))


def cmd_surface_flip_graph(args, report: RunReport):
    if args.m < 3:
        raise InputError("--m must be at least 3")
    g = surface.polygon_flip_graph(args.m)
    if args.emit == "graphml":
        report.result = g.graphml()
    elif args.count:
        report.result = len(g.nodes) if args.json else str(len(g.nodes))
    else:
        report.result = {"nodes": [[list(d) for d in n] for n in g.nodes],
                         "edges": [[a, b, lab] for a, b, lab in g.edges]}


def cmd_oracle_check_flip(args, report: RunReport):
    dc = _with_path(args.config, sl2.DoubleConfig.from_json)
    if args.tri:
        t = _triangulation(args.tri)
    else:
        t = surface.Triangulation.fan(dc.m)
    if t.polygon != dc.m:
        raise InputError(f"triangulation is not of the {dc.m}-gon")
    edges = [args.edge] if args.edge else t.internal_edges
    for e in edges:
        if e not in t.internal_edges:
            raise InputError(f"{e!r} is not an internal edge")
        try:
            report.run(lambda: sl2.flip_oracle_check(dc, t, e))
        except sl2.DegenerateError as err:
            raise InputError(str(err)) from None
    report.run(lambda: sl2.mirror_monomial_check(dc, t))


def cmd_oracle_glue(args, report: RunReport):
    d = _rationals(args.d)
    if len(d) < 3:
        raise InputError("--d needs at least 3 values")
    res = sl2.glue_solve(d)
    report.result = res.to_json()
    report.add(Verdict("glue-feasible", res.kind != "infeasible",
                       None if res.kind != "infeasible" else f"alternating sum = {res.certificate}"))


def cmd_oracle_casimir(args, report: RunReport):
    ls = _rationals(args.l)
    if len(ls) % 2:
        raise InputError("the Casimir needs an even number of sides")
    report.result = str(sl2.casimir(ls))


def cmd_trop_mutate(args, report: RunReport):
    q = _quiver(args)
    k = _index(q, args.at)
    try:
        p = tropical.TropPoint.parse(args.point)
        out = tropical.trop_mutate(p, q, k)
    except ValueError as e:
        raise InputError(str(e)) from None
    report.result = out.render()
    if p.is_integral():
        report.run(lambda: tropical.trop_limit_check(DoubleSeed(q), k, p))


def cmd_fn_coords(args, report: RunReport):
    rng = random.Random(args.seed_rng)
    if args.rep:
        r = _with_path(args.rep, fn.GluedRep.from_json)
    else:
        r = fn.random_glued_rep(fn.theta_graph(), rng)
    try:
        coords = fn.coordinates(r)
    except (ValueError, sl2.DegenerateError) as e:
        raise InputError(str(e)) from None
    report.result = [{"edge": e, "M": str(m), "B": str(b)} for e, (m, b) in enumerate(coords)]
    for v in fn.invariance_checks(r, rng):
        report.add(v)


def cmd_verify_all(args, report: RunReport):
    rng = random.Random(args.seed_rng)
    name = args.preset
    if name == "theta":
        g = fn.theta_graph()
        rank, _ = fn.lagrangian_lattice(g)
        report.add(Verdict("lattice-rank", rank == g.genus, None if rank == g.genus else f"rank {rank}"))
        for i in range(5):
            r = fn.random_glued_rep(g, rng)
            for v in fn.invariance_checks(r, rng):
                v.name = f"{v.name}#{i}"
                report.add(v)
        return
    q = quiver_preset(name)
    s = DoubleSeed(q)
    _double_suite(report, q)
    if q.rank == 2:
        report.run(lambda: dbl.check_pentagon(s))
        pts = [tropical.TropPoint(tuple(rng.randint(-9, 9) for _ in range(2)),
                                  tuple(rng.randint(-9, 9) for _ in range(2))) for _ in range(50)]
        report.add(Verdict("trop-pentagon", all(tropical.check_pentagon(p) for p in pts)))
    for k in range(q.rank):
        report.run(lambda: quantum.check_q_equals_one(s, k))
        report.run(lambda: quantum.q_conjugation_check(s, k, args.truncate))
        pts = [tropical.TropPoint(tuple(rng.randint(-9, 9) for _ in range(q.rank)),
                                  tuple(rng.randint(-9, 9) for _ in range(q.rank))) for _ in range(20)]
        report.add(Verdict(f"trop-involution[k={k}]", all(tropical.check_involution(p, q, k) for p in pts)))
        lim = [tropical.trop_limit_check(s, k, p) for p in pts]
        bad = next((v for v in lim if not v), None)
        report.add(Verdict(f"trop-limit[k={k}]", bad is None, bad.witness if bad else None))
    t = polygon_preset(name)
    dc = sl2.random_double_config(t.polygon, rng)
    for e in t.internal_edges:
        report.run(lambda: surface.flip_consistency_check(t, e))
        report.run(lambda: sl2.flip_oracle_check(dc, t, e))
    report.run(lambda: sl2.mirror_x_check(dc))


# --------------------------------------------------------------------------
# argument parsing
# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable report")
    common.add_argument("--seed-rng", type=int, default=DEFAULT_RNG_SEED, help="seed for randomized checks")
    common.add_argument("--truncate", type=int, default=6, help="series truncation for quantum checks")
    common.add_argument("--timings", action="store_true", help="include wall times in the report")

    def seed_opts(p):
        p.add_argument("--seed", help="quiver JSON file")
        p.add_argument("--preset", choices=[x for x in PRESETS if x != "theta"])

    parser = argparse.ArgumentParser(prog="symplectic-double",
                                     description="Exact mutation formulas and verification suites for the symplectic double.",
                                     epilog="exit codes: 0 all checks pass, 1 a check failed, 2 bad input")
    sub = parser.add_subparsers(dest="group", required=True)

    g = sub.add_parser("quiver").add_subparsers(dest="action", required=True)
    p = g.add_parser("mutate", parents=[common])
    seed_opts(p)
    p.add_argument("--at", required=True)
    p.set_defaults(func=cmd_quiver_mutate)

    g = sub.add_parser("double").add_subparsers(dest="action", required=True)
    p = g.add_parser("mutate", parents=[common])
    seed_opts(p)
    p.add_argument("--at", required=True)
    p.add_argument("--emit", help="also write the substitution to this JSON file")
    p.set_defaults(func=cmd_double_mutate)
    p = g.add_parser("verify", parents=[common])
    seed_opts(p)
    p.add_argument("--checks", help="comma-separated subset of involution,form,k2,poisson,casimir,duality")
    p.set_defaults(func=cmd_double_verify)

    g = sub.add_parser("quantum").add_subparsers(dest="action", required=True)
    p = g.add_parser("mutate", parents=[common])
    seed_opts(p)
    p.add_argument("--at", required=True)
    p.add_argument("--order", choices=("direct", "inverse"), default="direct")
    p.add_argument("--verify", action="store_true", help="check the images at q=1 and by series expansion")
    p.set_defaults(func=cmd_quantum_mutate)

    g = sub.add_parser("surface").add_subparsers(dest="action", required=True)
    p = g.add_parser("flip", parents=[common])
    p.add_argument("--tri", required=True, help="triangulation JSON file")
    p.add_argument("--edge", required=True)
    p.set_defaults(func=cmd_surface_flip)
    p = g.add_parser("flip-graph", parents=[common])
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--count", action="store_true")
    p.add_argument("--emit", choices=("json", "graphml"), default="json")
    p.set_defaults(func=cmd_surface_flip_graph)

    g = sub.add_parser("oracle").add_subparsers(dest="action", required=True)
    p = g.add_parser("check-flip", parents=[common])
    p.add_argument("--config", required=True, help="front/back vector configuration JSON")
    p.add_argument("--tri", help="triangulation JSON (default: fan at vertex 1)")
    p.add_argument("--edge")
    p.set_defaults(func=cmd_oracle_check_flip)
    p = g.add_parser("glue", parents=[common])
    p.add_argument("--d", required=True, help="comma-separated side differences")
    p.set_defaults(func=cmd_oracle_glue)
    p = g.add_parser("casimir", parents=[common])
    p.add_argument("--l", required=True, help="comma-separated side lengths")
    p.set_defaults(func=cmd_oracle_casimir)

    g = sub.add_parser("trop").add_subparsers(dest="action", required=True)
    p = g.add_parser("mutate", parents=[common])
    seed_opts(p)
    p.add_argument("--at", required=True)
    p.add_argument("--point", required=True, help='pairs "x1,b1;x2,b2;..."')
    p.set_defaults(func=cmd_trop_mutate)

    g = sub.add_parser("fn").add_subparsers(dest="action", required=True)
    p = g.add_parser("coords", parents=[common])
    p.add_argument("--rep", help="glued representation JSON (default: random theta-graph rep)")
    p.set_defaults(func=cmd_fn_coords)

    p = sub.add_parser("verify-all", parents=[common])
    p.add_argument("--preset", choices=PRESETS, required=True)
    p.set_defaults(func=cmd_verify_all)
    return parser


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2
    command = " ".join([args.group] + ([args.action] if getattr(args, "action", None) else []))
    inputs = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "json", "timings")}
    report = RunReport(command, _digest(inputs), timings=args.timings)
    if args.truncate < 2:
        print("error: --truncate must be at least 2", file=err)
        return 2
    try:
        args.func(args, report)
    except InputError as e:
        print(f"error: {e}", file=err)
        return 2
    if args.json:
        print(json.dumps(report.to_json(), sort_keys=True, indent=2), file=out)
    else:
        text = report.render()
        if text:
            print(text, file=out)
    return 0 if report.passed else 1


def main() -> None:
    sys.exit(run())
