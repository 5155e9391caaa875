import math

import pytest

import almosc


@pytest.fixture(scope="module")
def example1():
    return almosc.example_toml("example1")


def test_examples_are_bundled():
    assert almosc.example_names() == ["example1", "example2", "example3"]
    with pytest.raises(almosc.InputError):
        almosc.example_toml("example9")


def test_verify_examples():
    for name in almosc.example_names():
        res = almosc.verify_example(name, n=200)
        assert res["ok"], res
        assert res["residual_exact_zero"]
        assert res["matches_closed_form"]
        assert res["verdict"] == res["expected_verdict"]


def test_simulate_returns_the_alternating_solution(example1):
    res = almosc.simulate(example1, n=50)
    assert res["n0"] == 1
    assert res["k"] == 1
    assert res["mode"] == "exact"
    assert res["residual_exact_zero"]
    assert res["n"][0] == 1
    assert res["x"][:4] == [1.0, -1.0, 1.0, -1.0]
    assert res["x_exact"][1] == "-1"


def test_simulate_float_mode(example1):
    res = almosc.simulate(example1, n=50, mode="float")
    assert res["mode"] == "float"
    assert res["x_exact"][0] is None
    assert res["max_residual"] <= 1e-9


def test_classify_tags(example1):
    verdict = almosc.classify(example1, n=400)
    assert verdict["tag"] == "XOscillatoryEvidence"
    assert verdict["reports"]["x"]["evidence"] is True
    verdict3 = almosc.classify(almosc.example_toml("example3"), n=400)
    assert verdict3["tag"] == "TendsToZeroEvidence"


def test_check_reports_divergence(example1):
    report = almosc.check(example1, n=100)
    assert report["criterion1"]["verdict"] == "DivergentEvidence"
    assert report["criterion2_combined"] == "DivergentEvidence"
    assert math.isclose(report["criterion1"]["last"], 8.8208958864428411, rel_tol=1e-9)


def test_check_accepts_overrides(example1):
    report = almosc.check(example1, n=30, d="1/2", M=2, p="n")
    assert report["criterion1"]["N"] == 30


def test_expression_evaluation():
    assert almosc.eval_seq("n^2 + 1", 4) == 17.0
    assert almosc.eval_seq_exact("1 / (n * (n + 1))", 3) == "1/12"
    with pytest.raises(almosc.InputError):
        almosc.eval_seq("2 +", 1)
    with pytest.raises(almosc.EvalError):
        almosc.eval_seq("1 / (n - 1)", 1)


def test_f_min_and_power_diff():
    assert math.isclose(almosc.f_min(1, 1, "3", "1"), 1.8898815748423097, rel_tol=1e-12)
    assert math.isclose(almosc.f_min("2", "3", "5", "3"), 4.610539557408639, rel_tol=1e-12)
    assert almosc.power_diff_holds(3, 2, "5/3")
    assert almosc.power_diff_holds("7/2", "7/2", "3")
    with pytest.raises(almosc.InputError):
        almosc.power_diff_holds(1, 2, "3")


def test_q_values(example1):
    assert math.isclose(almosc.q_star(example1, 1, 1), 13.0 / 486.0, rel_tol=1e-15)
    assert math.isclose(almosc.q_dstar(example1, 1), 1.0111963017675157, rel_tol=1e-12)


def test_spec_errors_surface_as_python_exceptions():
    with pytest.raises(almosc.InputError):
        almosc.simulate("r = \"1\"\n")
    # Bad init shape: needs k + 2 seed values.
    bad = (
        'r = "1"\nq = "1"\ne = "1"\nc = 0\nk = 1\ngamma = "1"\nalpha = "3"\n'
        "[init]\nn0 = 1\nx = [1]\n"
    )
    with pytest.raises(almosc.InputError):
        almosc.simulate(bad)
