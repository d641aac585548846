"""Smoke tests for the python bindings (qrmc._core via the qrmc package)."""

import math

import numpy as np
import pytest

import qrmc


def test_measure_basics():
    m = qrmc.Measure(mu=2.0, dim=1)
    assert m.pdf(0.0) == pytest.approx(0.5, abs=1e-14)
    assert m.cdf(0.0) == pytest.approx(0.5, abs=1e-14)
    assert m.inv_cdf(0.75) == pytest.approx(math.sqrt(1.0 / 3.0), abs=1e-14)
    u = np.linspace(1e-6, 1 - 1e-6, 1001)
    x = np.array([m.inv_cdf(v) for v in u])
    back = np.array([m.cdf(v) for v in x])
    assert np.max(np.abs(back - u)) < 1e-12

    cauchy = qrmc.Measure(mu=1.0, dim=1)
    assert cauchy.pdf(0.0) == pytest.approx(1.0 / math.pi, abs=1e-14)

    with pytest.raises(ValueError):
        qrmc.Measure(mu=-1.0, dim=1)


def test_measure_sampling():
    m = qrmc.Measure(mu=2.0, dim=2, center=[1.0, -1.0])
    samples = m.sample(20000, seed=7)
    assert samples.shape == (20000, 2)
    med = np.median(samples, axis=0)
    assert abs(med[0] - 1.0) < 0.05
    assert abs(med[1] + 1.0) < 0.05


def test_index_sets_and_cardinalities():
    assert qrmc.cardinality_total(3, 6) == 84
    assert qrmc.cardinality_total(4, 5) == 126
    assert qrmc.cardinality_hyperbolic(3, 4) == 50
    assert qrmc.cardinality_hyperbolic(4, 2) == 48
    assert qrmc.cardinality_total(2, 20) == 231

    g = qrmc.MultiIndexSet.hyperbolic(2, 19)
    assert len(g) == 99
    assert g.is_downward_closed()
    idx = g.indices()
    assert idx.shape == (99, 2)
    assert (idx[0] == [0, 0]).all()

    assert qrmc.christoffel(qrmc.MultiIndexSet.full([100])) == 201.0


def test_basis_evaluation():
    m = qrmc.Measure(mu=2.0, dim=1)
    assert qrmc.cosine_eval(0, 0.3) == 1.0
    assert qrmc.cosine_eval(2, 0.5) == pytest.approx(-math.sqrt(2.0), abs=1e-14)
    assert qrmc.phi_eval([1], np.array([0.0]), m) == pytest.approx(0.0, abs=1e-14)

    g = qrmc.MultiIndexSet.full([4])
    coeffs = np.zeros(len(g))
    coeffs[0] = 1.0
    assert qrmc.eval_series(coeffs, np.array([2.5]), m, g) == pytest.approx(1.0)


def test_solve_and_metrics():
    bench = qrmc.SinBenchmark(dim=1)
    assert qrmc.exact_solution(0.0, np.zeros(1), bench) == pytest.approx(1.6)

    gamma = qrmc.MultiIndexSet.full([30])
    measure = qrmc.Measure(mu=2.0, dim=1)
    table = qrmc.solve(bench, gamma, measure, steps=10, paths=4000, damping=0.0,
                       seed=42)
    value = table.evaluate(0, np.zeros(1))
    assert abs(value - 1.6) < 0.2

    report = qrmc.mse_metrics(table, bench, eval_seed=1, eval_points=500)
    assert math.isfinite(report.mse_av)
    assert report.mse_av < -1.0
    assert report.mse_av <= report.mse_max + 1e-12
    assert report.stat_error_indicator == pytest.approx(61.0 / 4000.0)


def test_solve_determinism_and_modes():
    bench = qrmc.SinBenchmark(dim=2)
    gamma = qrmc.MultiIndexSet.hyperbolic(2, 4)
    measure = qrmc.Measure(mu=2.0, dim=2)
    a = qrmc.solve(bench, gamma, measure, steps=4, paths=1500, damping=2.1, seed=5)
    b = qrmc.solve(bench, gamma, measure, steps=4, paths=1500, damping=2.1, seed=5,
                   memory_mode="recompute", workers=1)
    for i in range(4):
        assert (a.coefficients(i) == b.coefficients(i)).all()
    assert a.to_json() == b.to_json()

    c = qrmc.solve(bench, gamma, measure, steps=4, paths=1500, damping=2.1, seed=6)
    assert not (a.coefficients(0) == c.coefficients(0)).all()


def test_table_round_trip(tmp_path):
    bench = qrmc.SinBenchmark(dim=1)
    table = qrmc.solve(bench, qrmc.MultiIndexSet.full([10]),
                       qrmc.Measure(mu=2.0, dim=1), steps=3, paths=500, seed=1)
    path = tmp_path / "table.json"
    table.save(str(path))
    loaded = qrmc.load_table(str(path))
    assert loaded.steps == table.steps
    for i in range(table.steps):
        assert (loaded.coefficients(i) == table.coefficients(i)).all()


def test_confidence_interval():
    lo, hi = qrmc.confidence_interval([1.0, 2.0, 3.0, 2.0, 1.5], level=0.99)
    assert lo < 1.9 < hi
    with pytest.raises(ValueError):
        qrmc.confidence_interval([1.0])
