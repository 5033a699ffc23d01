"""``plgroup`` command line.

Maps are read as JSON (inline text, ``@file`` or a plain path) and every
result is written as deterministic JSON to ``--out`` or stdout.
Exit status: 0 ok, 1 domain error (``ErrorName: message`` on stderr), 2 usage.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import serialize as S
from .commutation import bump, noncommute_witness
from .encoding import SampleConfig, category_experiment, decode
from .errors import CertificateFailure, PLGroupError
from .escape_hoelder import (
    HoelderExponent,
    PQMap,
    SeparatedFamily,
    escape_hoelder,
    verify_escape_hoelder,
)
from .escape_lipschitz import IntervalFamily, escape_lipschitz, verify_escape_lip
from .factorization import factor_one_break
from .line_circle import (
    compose_circle,
    compose_line,
    embed_circle,
    embed_interval,
    invert_circle,
    invert_line,
)
from .pl_core import PLMap, compose, evaluate, invert, slope_ratio


class UsageError(Exception):
    pass


def load_json(arg: str):
    if arg.startswith("@"):
        with open(arg[1:]) as fh:
            return json.load(fh)
    if os.path.exists(arg):
        with open(arg) as fh:
            return json.load(fh)
    try:
        return json.loads(arg)
    except json.JSONDecodeError as exc:
        raise UsageError(f"cannot read JSON from {arg!r}: {exc}") from exc


def _need(args, name):
    value = getattr(args, name)
    if value is None:
        raise UsageError(f"--{name.replace('_', '-')} is required")
    return value


def _kind(data) -> str:
    if data.get("periodic"):
        return "circle"
    if "left_slope" in data:
        return "line"
    return "interval"


_READ = {"interval": S.map_from_json, "line": S.line_from_json, "circle": S.circle_from_json}
_WRITE = {"interval": S.map_to_json, "line": S.line_to_json, "circle": S.circle_to_json}
_COMPOSE = {"interval": compose, "line": compose_line, "circle": compose_circle}
_INVERT = {"interval": invert, "line": invert_line, "circle": invert_circle}


def _map(args, name):
    data = load_json(_need(args, name))
    kind = _kind(data)
    return kind, _READ[kind](data)


def _interval_map(args, name="f") -> PLMap:
    kind, f = _map(args, name)
    if kind != "interval":
        raise UsageError(f"--{name} must be a map of [0,1]")
    return f


def _intervals(args):
    return [S.interval_from_json(J) for J in load_json(_need(args, "intervals"))]


def _adversaries(args, count, reader, default):
    if args.adversaries is None:
        return [default() for _ in range(count)]
    data = load_json(args.adversaries)
    if isinstance(data, dict):
        data = [data]
    return [reader(d) for d in data]


# -- commands ----------------------------------------------------------------


def cmd_compose(args):
    kf, f = _map(args, "f")
    kg, g = _map(args, "g")
    if kf != kg:
        raise UsageError(f"cannot compose a {kf} map with a {kg} map")
    return _WRITE[kf](_COMPOSE[kf](f, g))


def cmd_invert(args):
    kind, f = _map(args, "f")
    return _WRITE[kind](_INVERT[kind](f))


def cmd_eval(args):
    kind, f = _map(args, "f")
    x = S.parse_rat(_need(args, "x"))
    value = evaluate(f, x) if kind == "interval" else f(x)
    return {"x": S.rat(x), "value": S.rat(value)}


def cmd_slope_ratio(args):
    f = _interval_map(args)
    x = S.parse_rat(_need(args, "x"))
    return {"x": S.rat(x), "slope_ratio": S.rat(slope_ratio(f, x))}


def cmd_factor(args):
    return S.factorization_to_json(factor_one_break(_interval_map(args)))


def cmd_validate(args):
    data = load_json(_need(args, "f"))
    f = decode(S.points_from_json(data["breaks"]))
    return {"valid": True, "breaks": f.num_breaks}


def _config(args) -> SampleConfig:
    return SampleConfig(seed=args.seed, denominator_bound=args.denominator_bound, trials=args.trials)


def cmd_sample_category(args):
    f = _interval_map(args)
    return S.report_to_json(category_experiment(f, _need(args, "m"), _config(args)))


def cmd_escape_lip(args):
    J = IntervalFamily(tuple(_intervals(args)))
    gs = _adversaries(args, len(J), S.map_from_json, PLMap.identity)
    return S.cert_to_json(escape_lipschitz(_need(args, "n"), J, gs))


def cmd_escape_hoelder(args):
    eps = HoelderExponent.parse(_need(args, "epsilon"))
    J = SeparatedFamily(tuple(_intervals(args)))
    gs = _adversaries(args, len(J), S.pq_from_json, lambda: PQMap.identity(0, 1))
    return S.cert_to_json(escape_hoelder(_need(args, "n"), eps, J, gs))


def cmd_verify_cert(args):
    stored = load_json(_need(args, "cert"))
    cert = S.cert_from_json(stored)
    if stored["kind"] == "escape-lip":
        checked = verify_escape_lip(cert.f, cert.n, cert.intervals, cert.adversaries)
        rebuilt = escape_lipschitz(cert.n, cert.intervals, cert.adversaries)
    else:
        checked = verify_escape_hoelder(cert.f, cert.n, cert.eps, cert.intervals, cert.adversaries)
        rebuilt = escape_hoelder(cert.n, cert.eps, cert.intervals, cert.adversaries)
    if S.cert_to_json(checked) != stored or S.cert_to_json(rebuilt) != stored:
        raise CertificateFailure(-1, "global", "stored certificate differs from recomputation")
    return {"kind": stored["kind"], "verified": True, "intervals": len(cert.intervals)}


def cmd_bump(args):
    return S.map_to_json(bump(S.interval_from_json(load_json(_need(args, "U")))))


def cmd_witness(args):
    f = _interval_map(args)
    W = S.interval_from_json(load_json(_need(args, "W")))
    w = noncommute_witness(f, W)
    return {"witness": None if w is None else S.witness_to_json(w)}


def cmd_embed(args):
    f = _interval_map(args)
    if args.circle:
        return S.circle_to_json(embed_circle(f))
    return S.line_to_json(embed_interval(f))


COMMANDS = {
    "compose": cmd_compose,
    "invert": cmd_invert,
    "eval": cmd_eval,
    "slope-ratio": cmd_slope_ratio,
    "factor": cmd_factor,
    "validate": cmd_validate,
    "sample-category": cmd_sample_category,
    "escape-lip": cmd_escape_lip,
    "escape-hoelder": cmd_escape_hoelder,
    "verify-cert": cmd_verify_cert,
    "bump": cmd_bump,
    "witness": cmd_witness,
    "embed": cmd_embed,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="plgroup", description="Exact PL homeomorphism toolkit.")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--f")
    parser.add_argument("--g")
    parser.add_argument("--x")
    parser.add_argument("--n", type=int)
    parser.add_argument("--m", type=int)
    parser.add_argument("--epsilon")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--trials", type=int, default=1000)
    parser.add_argument("--denominator-bound", type=int, default=10**6)
    parser.add_argument("--intervals")
    parser.add_argument("--adversaries")
    parser.add_argument("--cert")
    parser.add_argument("--U")
    parser.add_argument("--W")
    parser.add_argument("--circle", action="store_true")
    parser.add_argument("--out")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        result = COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"plgroup: error: {exc}", file=sys.stderr)
        return 2
    except (PLGroupError, ValueError, KeyError, TypeError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    text = S.dumps(result)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
