"""Acceptance criteria, one test each; every test prints a PASS/FAIL line."""

import json
from fractions import Fraction as F

import pytest

from conftest import full_nodes, grid, interp
from plgroup import serialize as S
from plgroup.commutation import cuv_commutator_probe, cuv_direct, guided_violation, noncommute_witness, probe_commutes
from plgroup.encoding import SampleConfig, category_experiment, deficiency_explained, random_map, rng_for
from plgroup.escape_hoelder import (
    HoelderExponent,
    PQMap,
    compose_hoelder_bound,
    rational_power,
    escape_hoelder,
    global_hoelder_constant,
    separated_family,
    wiggle_map,
)
from plgroup.escape_lipschitz import IntervalFamily, escape_lipschitz
from plgroup.factorization import factor_one_break, peel
from plgroup.line_circle import (
    CircleMap,
    LineMap,
    bump_line,
    centralizer_membership_probe,
    compose_circle,
    compose_line,
    embed_circle,
    embed_interval,
    invert_circle,
    invert_line,
    is_periodic,
    periodic_bump,
)
from plgroup.pl_core import (
    Interval,
    PLMap,
    bilipschitz_constant,
    break_points,
    compose,
    evaluate,
    invert,
    make_pl,
    max_slope_on,
    slope_ratio,
    support,
)

BOUND = 10**6
SEED = 20240611


def report(capsys, number, ok, detail):
    with capsys.disabled():
        print(f"\n{'PASS' if ok else 'FAIL'} criterion {number}: {detail}")
    assert ok, detail


def draw(stream, max_breaks, bound=BOUND, seed=SEED):
    rng = rng_for(seed, stream)
    return random_map(int(rng.integers(0, max_breaks, endpoint=True)), rng, bound)


@pytest.fixture(scope="module")
def triples():
    return [(draw(3 * i, 8), draw(3 * i + 1, 8), draw(3 * i + 2, 8)) for i in range(1000)]


def test_criterion_1_algebra(capsys, triples):
    failures = 0
    for f, g, h in triples:
        fg = compose(f, g)
        ok = compose(fg, h) == compose(f, compose(g, h))
        ok &= compose(f, invert(f)).is_identity() and compose(invert(f), f).is_identity()
        pts = grid(f, g, fg, extra=[evaluate(invert(g), y) for y in break_points(f)])
        nf, ng = full_nodes(f.breaks), full_nodes(g.breaks)
        ok &= all(evaluate(fg, x) == interp(nf, interp(ng, x)) for x in pts)
        ok &= all(
            slope_ratio(fg, x) == slope_ratio(f, evaluate(g, x)) * slope_ratio(g, x) for x in pts if 0 < x < 1
        )
        failures += not ok
    report(capsys, 1, failures == 0, f"algebra laws on {len(triples)} samples, {failures} failures")


def test_criterion_2_break_bound(capsys, triples):
    failures = 0
    for f, g, _ in triples:
        fg = compose(f, g)
        allowed = {evaluate(invert(g), y) for y in break_points(f)} | set(break_points(g))
        if fg.num_breaks > f.num_breaks + g.num_breaks or not set(break_points(fg)) <= allowed:
            failures += 1
    f = make_pl([(F(1, 2), F(1, 4))])
    g = make_pl([(F(1, 3), F(1, 2))])
    cancel = compose(f, g).num_breaks
    ok = failures == 0 and cancel == 1
    report(capsys, 2, ok, f"break bound failures {failures}; cancellation pair gives {cancel} break(s) < 2")


def test_criterion_3_category(capsys):
    f = make_pl([(F(1, 2), F(1, 4))])
    fractions, unexplained = [], 0
    for m in (1, 2, 3):
        rep = category_experiment(f, m, SampleConfig(seed=SEED, trials=1000, denominator_bound=BOUND))
        fractions.append(rep.fraction_maximal)
        unexplained += sum(not deficiency_explained(f, d.g) for d in rep.deficient)
    ok = all(fr >= F(99, 100) for fr in fractions) and unexplained == 0
    shown = ", ".join(f"m={m}: {float(fr):.3f}" for m, fr in zip((1, 2, 3), fractions))
    report(capsys, 3, ok, f"maximal fraction {shown}; unexplained deficient trials {unexplained}")


def test_criterion_4_factorization(capsys):
    failures = 0
    for i in range(200):
        f = draw(10_000 + i, 20)
        fac = factor_one_break(f)
        ok = fac.product() == f and len(fac) == f.num_breaks
        ok &= all(g.num_breaks == 1 for g in fac.factors)
        cur = f
        while not cur.is_identity():
            nxt, _ = peel(cur)
            ok &= nxt.num_breaks == cur.num_breaks - 1
            cur = nxt
        failures += not ok
    report(capsys, 4, failures == 0, f"200 factorizations, {failures} failures")


def _lip_adversaries(n, J, stream):
    """Cycle through identity, a gentle random map and maps steep on J_k."""
    out = []
    for k, Jk in enumerate(J):
        kind = k % 4
        if kind == 0:
            out.append(PLMap.identity())
        elif kind == 1:
            # one break at the midpoint, slopes well inside (1/n, n)
            m = Jk.midpoint
            out.append(make_pl([(m, m * F(n + 1, n + 2))]))
        elif kind == 2:
            # slope (n+1) + 1/3 on J_k: case 1 on the map side
            s = F(3 * n + 4, 3)
            a = Jk.lo
            out.append(PLMap.from_nodes([(a, a / s), (Jk.hi, a / s + s * Jk.length)]))
        else:
            out.append(draw(stream + k, 6))
    return out


def _lip_family():
    return IntervalFamily(tuple(Interval(F(k, 10), F(k + 1, 10)) for k in range(10)))


def test_criterion_5_lipschitz_escape(capsys):
    problems, cases = [], set()
    for n in (2, 3, 5):
        J = _lip_family()
        advs = _lip_adversaries(n, J, 50_000 + 100 * n)
        cert = escape_lipschitz(n, J, advs)
        if not cert.bilipschitz_constant <= n * n + 1:
            problems.append(f"n={n} bilipschitz {cert.bilipschitz_constant}")
        for rec, Jk in zip(cert.records, J):
            cases.add(rec.case)
            if not rec.quotient > n:
                problems.append(f"n={n} k={rec.k} quotient {rec.quotient}")
            if rec.case == 2 and max_slope_on(cert.f, Jk) != n * n:
                problems.append(f"n={n} k={rec.k} max slope {max_slope_on(cert.f, Jk)}")
    base = escape_lipschitz(2, IntervalFamily((Interval(F(0), F(1)),)), [PLMap.identity()])
    q = base.records[0].quotient
    ok = not problems and cases == {1, 2} and q == 4
    report(capsys, 5, ok, f"n in (2,3,5), cases seen {sorted(cases)}, identity quotient {q}; {problems or 'no problems'}")


def _hoelder_adversaries(fam, eps):
    """Identity, a mild wiggle (certified Hoelder) and a wild wiggle (refuted)."""
    out = []
    for k, Jk in enumerate(fam):
        kind = k % 3
        if kind == 0:
            out.append(PQMap.identity())
        elif kind == 1:
            out.append(wiggle_map(Jk, rational_power(Jk.length, eps) / 16))
        else:
            out.append(wiggle_map(Interval(Jk.lo, Jk.lo + Jk.length / 4), F(1, 2)))
    return out


@pytest.fixture(scope="module")
def hoelder_certs():
    out = []
    for n, eps in ((1, HoelderExponent(1, 2)), (2, HoelderExponent(1, 2)), (1, HoelderExponent(1, 3))):
        fam = separated_family([F(1, r) ** eps.q for r in range(4, 9)], start=F(0))
        out.append(escape_hoelder(n, eps, fam, _hoelder_adversaries(fam, eps)))
    return out


def test_criterion_6_hoelder_escape(capsys, hoelder_certs):
    problems, cases = [], set()
    for cert in hoelder_certs:
        n, eps, f = cert.n, cert.eps, cert.f
        C = 2 * ((n + 1) ** 4 + 1) * (n + 1) ** 4
        if cert.constant != C or global_hoelder_constant(n) != C:
            problems.append(f"constant {cert.constant} != {C}")
        for rec, Jk in zip(cert.records, cert.intervals):
            cases.add(rec.case)
            ell = Jk.length
            if f.derivative_at(Jk.lo) != 1 or f.derivative_at(Jk.hi) != 1:
                problems.append(f"junction at {Jk}")
            if rec.case == 2 and f.profile.integral(Jk.lo, Jk.hi) != ell:
                problems.append(f"area on {Jk}")
            for s in f.profile.segment_slopes(Jk.lo, Jk.hi):
                if abs(s) ** eps.q * ell ** (eps.q - eps.p) > F(C) ** eps.q:
                    problems.append(f"slope {s} on {Jk}")
            if rec.case == 2:
                target = F(n * (n + 1))
                if rec.lhs ** eps.q != rec.lhs_power or target**eps.q * rec.rhs_base**eps.p != rec.rhs_power:
                    problems.append(f"record powers on {Jk}")
            if not rec.lhs_power > rec.rhs_power:
                problems.append(f"comparison on {Jk}")
    half = HoelderExponent(1, 2)
    base = escape_hoelder(1, half, separated_family([F(1, 16)], start=F(0)), [PQMap.identity()])
    r = base.records[0]
    ok = not problems and cases == {1, 2} and (r.lhs_power, r.rhs_power) == (16, F(1, 8))
    report(capsys, 6, ok, f"3 parameter sets, cases {sorted(cases)}, base comparison {r.lhs_power} > {r.rhs_power}; {problems or 'no problems'}")


def test_criterion_7_commutation(capsys):
    bad_witness = 0
    for i in range(100):
        f, extra = draw(70_000 + i, 6), 0
        while f.is_identity():
            extra += 1
            f = draw(70_000 + i + 1000 * extra, 6)
        comp = support(f)[0]
        rng = rng_for(SEED, 71_000 + i)
        lo = comp.lo + comp.length * F(int(rng.integers(0, 50)), 100)
        hi = lo + comp.length * F(int(rng.integers(1, 50)), 100)
        W = Interval(lo, hi)
        w = noncommute_witness(f, W)
        g = w.g if w else None
        if not (w and w.left == evaluate(f, evaluate(g, w.z)) and w.right == evaluate(g, evaluate(f, w.z)) and w.left != w.right):
            bad_witness += 1
    bad_cuv, trues = 0, 0
    for i in range(100):
        f = draw(80_000 + i, 6)
        rng = rng_for(SEED, 81_000 + i)
        a, b = sorted(F(int(v), 64) for v in rng.choice(65, size=2, replace=False))
        U = Interval(a, b)
        if i % 2 == 0:
            pad = F(int(rng.integers(0, 8)), 64)
            V = Interval(max(F(0), evaluate(f, a) - pad), min(F(1), evaluate(f, b) + pad))
        else:
            c, d = sorted(F(int(v), 64) for v in rng.choice(65, size=2, replace=False))
            V = Interval(c, d)
        if V.lo == 0 and V.hi == 1:
            V = Interval(F(0), F(63, 64))
        direct = cuv_direct(f, U, V)
        res = cuv_commutator_probe(f, U, V, SampleConfig(seed=SEED), probes=50)
        if direct:
            trues += 1
            bad_cuv += not res.holds
        else:
            v = guided_violation(f, U, V)
            bad_cuv += v is None or probe_commutes(f, v.U_sub, v.W_sub)
    ok = bad_witness == 0 and bad_cuv == 0 and 0 < trues < 100
    report(capsys, 7, ok, f"witness failures {bad_witness}/100; C(U,V) failures {bad_cuv}/100 ({trues} inclusions)")


def test_criterion_8_line_circle(capsys):
    hom = 0
    for i in range(100):
        f, g = draw(90_000 + 2 * i, 6), draw(90_001 + 2 * i, 6)
        ok = embed_interval(compose(f, g)) == compose_line(embed_interval(f), embed_interval(g))
        ok &= embed_interval(invert(f)) == invert_line(embed_interval(f))
        hom += not ok
    per = 0
    h = CircleMap.identity()
    lifted = LineMap.identity()
    for i in range(100):
        rng = rng_for(SEED, 95_000 + i)
        kind = i % 3
        if kind == 0:
            step = embed_circle(draw(96_000 + i, 4))
        elif kind == 1:
            a, b = sorted(F(int(v), 32) for v in rng.choice(65, size=2, replace=False))
            step = periodic_bump(Interval(a, b))
        else:
            step = CircleMap.translation(F(int(rng.integers(-16, 17)), 16))
        if i % 7 == 6:
            step = invert_circle(step)
        h = compose_circle(step, h)
        lifted = compose_line(step.unroll(6), lifted)
        sample = [F(k, 5) for k in range(-10, 11)]
        ok = is_periodic(h.unroll(3), (-4, 4)) and all(h(x) == lifted(x) for x in sample)
        per += not ok
    cfg = SampleConfig(seed=SEED)
    central = all(
        centralizer_membership_probe(embed_interval(draw(97_000 + i, 5)), cfg, probes=50).commutes for i in range(5)
    )
    central &= all(
        centralizer_membership_probe(embed_circle(draw(98_000 + i, 5)), cfg, probes=50).commutes for i in range(5)
    )
    tr = centralizer_membership_probe(LineMap.translation(2), cfg, probes=50)
    w = tr.witness
    t = LineMap.translation(2)
    g = bump_line(w.g_support) if w else None
    witnessed = bool(w) and w.left == t(g(w.z)) and w.right == g(t(w.z)) and w.left != w.right
    ok = hom == 0 and per == 0 and central and not tr.commutes and witnessed
    report(capsys, 8, ok, f"homomorphism failures {hom}; periodicity failures {per}; embedded maps central {central}; x+2 witness {witnessed}")


def test_criterion_9_round_trips(capsys, hoelder_certs):
    bad = 0
    for i in range(1000):
        f = draw(200_000 + i, 8)
        text = S.dumps(S.map_to_json(f))
        back = S.map_from_json(json.loads(text))
        bad += back != f or S.dumps(S.map_to_json(back)) != text
    certs = list(hoelder_certs)
    for n in (2, 3, 5):
        J = _lip_family()
        certs.append(escape_lipschitz(n, J, _lip_adversaries(n, J, 50_000 + 100 * n)))
    for cert in certs:
        text = S.dumps(S.cert_to_json(cert))
        bad += S.dumps(S.cert_to_json(S.cert_from_json(json.loads(text)))) != text
    half = HoelderExponent(1, 2)
    ms = (compose_hoelder_bound(1, half), compose_hoelder_bound(2, half))
    ok = bad == 0 and ms == (5, 17)
    report(capsys, 9, ok, f"1000 maps and {len(certs)} certificates, {bad} mismatches; m_1, m_2 = {ms}")
