import json

import pytest

from koszul_lab import verify
from koszul_lab.errors import CharacteristicBoundError
from koszul_lab.verify import Check, SuiteReport, characteristic_bound, run_suite, suite_green


def test_bounds():
    assert characteristic_bound("green", 6) == 5
    assert characteristic_bound("green", 8) == 6
    assert characteristic_bound("green", 4) == 5
    assert characteristic_bound("geometric") == 7
    assert characteristic_bound("restriction") == 5


@pytest.mark.parametrize("p", [2, 3, 4, 9])
def test_refuses_outside_hypotheses(p):
    with pytest.raises(CharacteristicBoundError):
        suite_green(p, 1)


def test_geometric_refuses_p5():
    with pytest.raises(CharacteristicBoundError):
        run_suite("geometric", 5, 1)


def test_two_refused_even_when_forced():
    with pytest.raises(CharacteristicBoundError):
        suite_green(2, 1, force=True)


def test_forced_run_records_observations():
    rep = suite_green(3, 1, genus=4, force=True)
    js = rep.to_json()
    assert js["forced"] and js["status"] == "observation"
    assert all(c["pass"] is None for c in js["checks"])
    assert rep.passed


def test_report_is_deterministic():
    a = json.dumps(suite_green(101, 4).to_json(), sort_keys=True)
    b = json.dumps(suite_green(101, 4).to_json(), sort_keys=True)
    assert a == b


def test_green_report_contents():
    js = suite_green(101, 4).to_json()
    assert js["status"] == "pass"
    assert js["elapsed_ms"] is None
    names = [c["name"] for c in js["checks"]]
    assert names == ["dim M_1", "dim M_2", "dim M_3", "b_2,1", "b_3,1"]
    assert js["model"]["curve"]["genus"] == 6 and js["model"]["curve"]["variant"] == "grass"
    assert "failure_models" not in js


def test_timing_flag():
    assert suite_green(101, 4, genus=4, timing=True).elapsed_ms >= 0


def test_failed_check_attaches_models(g4):
    rep = SuiteReport("green", g4.field.spec(), 0)
    rep.check("bogus", 1, 2)
    verify._finish(rep, {"curve": g4}, 0.0, False)
    js = rep.to_json()
    assert js["status"] == "fail"
    assert js["failure_models"]["curve"]["generators"]


def test_json_round_trip():
    rep = suite_green(101, 4, genus=4)
    again = SuiteReport.from_json(json.loads(json.dumps(rep.to_json())))
    assert again.to_json() == rep.to_json()


def test_text_rendering():
    rep = SuiteReport("x", {"p": 7, "m": 1}, 3, [Check("a", [1, 2], [1, 2], True), Check("bb", 0, 1, False)])
    text = rep.to_text()
    assert "FAIL" in text.splitlines()[-1]
    assert "1,2" in text


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_suite("nope", 101, 1)
