import json
import math

import pytest

import wiener_approx as wa


def test_lattice_counts():
    assert wa.ball_count(1, math.inf, 2) == 9
    assert wa.ball_count(1, 1.0, 2) == 5
    assert wa.inverse_count(10, math.inf, 2) == 2
    assert wa.enumerate_shell(1, 1.0, 2) == [[-1, 0], [0, -1], [0, 1], [1, 0]]
    assert wa.lr_norm([3, 4], 2.0) == 5.0


def test_weight_object():
    w = wa.Weight("pow:s=2")
    assert w(2.0) == 0.25
    assert w.spec == "pow:s=2"
    assert w.family == "doubling"
    with pytest.raises(wa.InvalidArgument):
        wa.Weight("wave:s=1")


def test_sigma_worked_instance():
    res = wa.sigma_m(1.0, 2.0, 2.0, 1, wa.Weight("geom:b=2"), 1)
    assert res["argmax"] == 3
    assert res["value"] == pytest.approx(math.sqrt(4 / 12 + 1 / 6), rel=1e-14)
    assert not res["at_infinity"]


def test_width_and_prediction():
    w = wa.Weight("pow:s=1")
    assert wa.basis_width(2.0, 1.0, 2.0, 1, w, 4) == 0.5
    p = wa.predict_sigma(2.0, 2.0, 2.0, 2, wa.Weight("pow:s=2"), 64)
    assert p == pytest.approx(1 / 64, rel=1e-12)


def test_divergence_is_raised():
    with pytest.raises(wa.DivergentSeries):
        wa.sigma_m(1.0, 2.0, 2.0, 2, wa.Weight("pow:s=1"), 1)


def test_spectral_examples():
    terms = [([0], 3 + 0j), ([1], 4j)]
    assert wa.sp_norm(terms, 1, 2.0) == 5.0
    assert wa.sp_norm(terms, 1, math.inf) == 4.0
    f = [([0], 1.0), ([1], 0.5), ([-1], 0.5), ([2], 0.25)]
    assert wa.greedy_residual(f, 1, 1, 1.0) == 1.25
    assert wa.greedy_residual([([0, 0], 1 + 1j)], 2, 0, 2.0, grid=True) == pytest.approx(math.sqrt(2))


def test_cli_roundtrip():
    code, out, err = wa.run_cli(["exact", "--psi", "pow:s=1", "--p", "inf", "--q", "inf", "--m", "3"])
    assert code == 0, err
    header, row = out.strip().splitlines()
    assert dict(zip(header.split(","), row.split(",")))["sigma"] == "0.5"
    code, out, _ = wa.run_cli(["lattice", "--r", "inf", "--d", "2", "--s", "1", "--format", "json"])
    assert code == 0
    assert json.loads(out)["rows"][0]["V"] == 9
    code, _, err = wa.run_cli(["exact", "--p", "0", "--m", "1"])
    assert code == 1 and "p" in err
