"""JSON forms of maps, witnesses, reports and certificates.

Rationals are written as reduced ``"p/q"`` strings (``"p"`` when ``q == 1``).
Everything emitted by :func:`dumps` is deterministic, so equal objects give
byte-identical text.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction

from .commutation import CuvProbeResult, NonCommuteWitness
from .encoding import CategoryReport
from .escape_hoelder import (
    HoelderCertificate,
    HoelderExponent,
    HoelderRecord,
    PLFunction,
    PQMap,
    SeparatedFamily,
)
from .escape_lipschitz import IntervalFamily, LipEscapeCertificate, LipRecord
from .factorization import Factorization
from .line_circle import CentralizerProbe, CircleMap, LineMap
from .pl_core import Interval, PLMap, Point

_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")


def rat(x) -> str:
    return str(Fraction(x))


def parse_rat(text) -> Fraction:
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str) or not _RATIONAL.match(text.strip()):
        raise ValueError(f"not a rational literal: {text!r}")
    value = Fraction(text.strip())
    return value


def dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _pairs(points) -> list:
    return [[rat(p.x), rat(p.y)] for p in points]


def points_from_json(data) -> tuple:
    return tuple(Point(parse_rat(x), parse_rat(y)) for x, y in data)


# -- maps --------------------------------------------------------------------


def map_to_json(f: PLMap) -> dict:
    return {"breaks": _pairs(f.breaks)}


def map_from_json(data) -> PLMap:
    return PLMap(points_from_json(data["breaks"]))


def interval_to_json(J: Interval) -> list:
    return [rat(J.lo), rat(J.hi)]


def interval_from_json(data) -> Interval:
    lo, hi = data
    return Interval(parse_rat(lo), parse_rat(hi))


def line_to_json(f: LineMap) -> dict:
    out = {
        "breaks": _pairs(f.breaks),
        "left_slope": rat(f.left_slope),
        "right_slope": rat(f.right_slope),
    }
    if not f.breaks:
        out["intercept"] = rat(f(0))
    return out


def line_from_json(data) -> LineMap:
    left, right = parse_rat(data["left_slope"]), parse_rat(data["right_slope"])
    if data["breaks"]:
        return LineMap(points_from_json(data["breaks"]), left, right)
    return LineMap(((Fraction(0), parse_rat(data["intercept"])),), left, right)


def circle_to_json(f: CircleMap) -> dict:
    out = {"breaks": _pairs(f.breaks), "periodic": True}
    if not f.breaks:
        out["intercept"] = rat(f(0))
    return out


def circle_from_json(data) -> CircleMap:
    if data["breaks"]:
        return CircleMap(points_from_json(data["breaks"]))
    return CircleMap(((Fraction(0), parse_rat(data["intercept"])),))


def pq_to_json(f: PQMap) -> dict:
    nodes = f.profile.nodes
    out = {"derivative_breaks": _pairs(nodes[1:-1]), "boundary": [rat(nodes[0].y), rat(nodes[-1].y)]}
    if (f.lo, f.hi) != (0, 1):
        out["domain"] = [rat(f.lo), rat(f.hi)]
    return out


def pq_from_json(data) -> PQMap:
    lo, hi = (parse_rat(v) for v in data.get("domain", ["0", "1"]))
    v_lo, v_hi = (parse_rat(v) for v in data["boundary"])
    nodes = ((lo, v_lo),) + points_from_json(data["derivative_breaks"]) + ((hi, v_hi),)
    return PQMap(PLFunction(nodes))


def factorization_to_json(fac: Factorization) -> dict:
    return {"factors": [map_to_json(g) for g in fac.factors]}


# -- witnesses and reports ---------------------------------------------------


def witness_to_json(w: NonCommuteWitness) -> dict:
    return {"W": interval_to_json(w.W), "z": rat(w.z), "left": rat(w.left), "right": rat(w.right)}


def witness_from_json(data) -> NonCommuteWitness:
    return NonCommuteWitness(
        interval_from_json(data["W"]),
        parse_rat(data["z"]),
        parse_rat(data["left"]),
        parse_rat(data["right"]),
    )


def cuv_to_json(res: CuvProbeResult) -> dict:
    out = {"holds": res.holds, "probes": res.probes}
    if res.violation is not None:
        v = res.violation
        out["violation"] = {
            "U_sub": interval_to_json(v.U_sub),
            "W_sub": interval_to_json(v.W_sub),
            "guided": v.guided,
        }
    return out


def centralizer_to_json(res: CentralizerProbe) -> dict:
    out = {"commutes": res.commutes, "probes": res.probes}
    if res.witness is not None:
        w = res.witness
        out["witness"] = {
            "support": interval_to_json(w.g_support),
            "z": rat(w.z),
            "left": rat(w.left),
            "right": rat(w.right),
        }
    return out


def report_to_json(rep: CategoryReport) -> dict:
    return {
        "n": rep.n,
        "m": rep.m,
        "trials": rep.trials,
        "maximal_count": rep.maximal_count,
        "deficient": [
            {"trial": d.trial, "g": map_to_json(d.g), "breaks": d.breaks} for d in rep.deficient
        ],
    }


# -- certificates ------------------------------------------------------------


def lip_cert_to_json(cert: LipEscapeCertificate) -> dict:
    return {
        "kind": "escape-lip",
        "n": cert.n,
        "intervals": [interval_to_json(J) for J in cert.intervals],
        "adversaries": [map_to_json(g) for g in cert.adversaries],
        "f": map_to_json(cert.f),
        "bilipschitz_constant": rat(cert.bilipschitz_constant),
        "records": [
            {
                "k": r.k,
                "case": r.case,
                "side": r.side,
                "witness_points": [rat(v) for v in r.witness_points],
                "quotient": rat(r.quotient),
            }
            for r in cert.records
        ],
    }


def lip_cert_from_json(data) -> LipEscapeCertificate:
    return LipEscapeCertificate(
        f=map_from_json(data["f"]),
        n=int(data["n"]),
        intervals=IntervalFamily(tuple(interval_from_json(J) for J in data["intervals"])),
        adversaries=tuple(map_from_json(g) for g in data["adversaries"]),
        records=tuple(
            LipRecord(
                r["k"],
                r["case"],
                r["side"],
                tuple(parse_rat(v) for v in r["witness_points"]),
                parse_rat(r["quotient"]),
            )
            for r in data["records"]
        ),
        bilipschitz_constant=parse_rat(data["bilipschitz_constant"]),
    )


def hoelder_cert_to_json(cert: HoelderCertificate) -> dict:
    return {
        "kind": "escape-hoelder",
        "n": cert.n,
        "epsilon": str(cert.eps),
        "intervals": [interval_to_json(J) for J in cert.intervals],
        "adversaries": [pq_to_json(g) for g in cert.adversaries],
        "f": pq_to_json(cert.f),
        "hoelder_constant": cert.constant,
        "records": [
            {
                "k": r.k,
                "case": r.case,
                "side": r.side,
                "witness": [rat(v) for v in r.witness],
                "lhs": rat(r.lhs),
                "rhs_base": rat(r.rhs_base),
                "comparison": [rat(r.lhs_power), rat(r.rhs_power)],
            }
            for r in cert.records
        ],
    }


def hoelder_cert_from_json(data) -> HoelderCertificate:
    return HoelderCertificate(
        f=pq_from_json(data["f"]),
        n=int(data["n"]),
        eps=HoelderExponent.parse(data["epsilon"]),
        intervals=SeparatedFamily(tuple(interval_from_json(J) for J in data["intervals"])),
        adversaries=tuple(pq_from_json(g) for g in data["adversaries"]),
        records=tuple(
            HoelderRecord(
                r["k"],
                r["case"],
                r["side"],
                tuple(parse_rat(v) for v in r["witness"]),
                parse_rat(r["lhs"]),
                parse_rat(r["rhs_base"]),
                parse_rat(r["comparison"][0]),
                parse_rat(r["comparison"][1]),
            )
            for r in data["records"]
        ),
        constant=int(data["hoelder_constant"]),
    )


def cert_to_json(cert) -> dict:
    if isinstance(cert, LipEscapeCertificate):
        return lip_cert_to_json(cert)
    return hoelder_cert_to_json(cert)


def cert_from_json(data):
    kind = data.get("kind")
    if kind == "escape-lip":
        return lip_cert_from_json(data)
    if kind == "escape-hoelder":
        return hoelder_cert_from_json(data)
    raise ValueError(f"unknown certificate kind {kind!r}")
