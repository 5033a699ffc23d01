import json
from fractions import Fraction as F

import pytest
from hypothesis import given, settings

from conftest import pl_maps
from plgroup import serialize as S
from plgroup.commutation import noncommute_witness
from plgroup.encoding import SampleConfig, category_experiment
from plgroup.escape_hoelder import HoelderExponent, PQMap, SeparatedFamily, escape_hoelder, wiggle_map
from plgroup.escape_lipschitz import IntervalFamily, escape_lipschitz
from plgroup.line_circle import CircleMap, LineMap, embed_circle, embed_interval
from plgroup.pl_core import Interval, PLMap, make_pl

f = make_pl([(F(1, 2), F(1, 4))])


def again(obj, to, frm):
    text = S.dumps(to(obj))
    assert S.dumps(to(frm(json.loads(text)))) == text
    return text


def test_rational_format():
    assert S.rat(F(2, 4)) == "1/2" and S.rat(F(4)) == "4"
    assert S.parse_rat("3/9") == F(1, 3) and S.parse_rat("-2") == -2
    for bad in ("0.5", "1/2/3", "", "abc", 0.5):
        with pytest.raises(ValueError):
            S.parse_rat(bad)


def test_map_format():
    assert S.map_to_json(f) == {"breaks": [["1/2", "1/4"]]}
    assert S.map_to_json(PLMap.identity()) == {"breaks": []}


@settings(max_examples=200, deadline=None)
@given(pl_maps(max_breaks=8))
def test_map_round_trip(g):
    again(g, S.map_to_json, S.map_from_json)
    assert S.map_from_json(S.map_to_json(g)) == g


def test_line_and_circle_round_trip():
    for g in (LineMap.translation(F(5, 2)), embed_interval(f), LineMap.identity()):
        again(g, S.line_to_json, S.line_from_json)
        assert S.line_from_json(S.line_to_json(g)) == g
    for g in (CircleMap.translation(F(1, 3)), embed_circle(f), CircleMap.identity()):
        again(g, S.circle_to_json, S.circle_from_json)
        assert S.circle_from_json(S.circle_to_json(g)) == g


def test_pq_round_trip():
    g = wiggle_map(Interval(F(1, 8), F(1, 4)), F(1, 3))
    again(g, S.pq_to_json, S.pq_from_json)
    local = PQMap.identity(F(1, 4), F(1, 2))
    assert S.pq_to_json(local)["domain"] == ["1/4", "1/2"]
    assert S.pq_from_json(S.pq_to_json(local)) == local


def test_witness_round_trip():
    w = noncommute_witness(f, Interval(F(1, 4), F(3, 4)))
    again(w, S.witness_to_json, S.witness_from_json)


def test_report_is_deterministic():
    a = S.dumps(S.report_to_json(category_experiment(f, 2, SampleConfig(trials=50, seed=7))))
    b = S.dumps(S.report_to_json(category_experiment(f, 2, SampleConfig(trials=50, seed=7))))
    assert a == b


def test_certificate_round_trips():
    lip = escape_lipschitz(3, IntervalFamily((Interval(F(0), F(1, 2)), Interval(F(1, 2), F(1)))),
                           [PLMap.identity(), make_pl([(F(1, 5), F(4, 5))])])
    text = again(lip, S.cert_to_json, S.cert_from_json)
    assert json.loads(text)["kind"] == "escape-lip"
    half = HoelderExponent(1, 2)
    hol = escape_hoelder(1, half, SeparatedFamily((Interval(F(0), F(1, 16)),)), [PQMap.identity()])
    text = again(hol, S.cert_to_json, S.cert_from_json)
    assert json.loads(text)["records"][0]["comparison"] == ["16", "1/8"]


def test_unknown_kind():
    with pytest.raises(ValueError):
        S.cert_from_json({"kind": "other"})
