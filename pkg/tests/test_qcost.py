import itertools
import math

import numpy as np
import pytest

from leversketch.errors import NonPositiveDimension
from leversketch.qcost import (
    CostModelInputs,
    QueryLedger,
    crossover,
    quantum_pipeline_cost,
    report_csv_row,
    report_to_json,
    sampling_query_model,
    tmat,
)


class TestTmat:
    def test_cube_normalization(self):
        assert abs(tmat(2, 2, 2, 2.372) - 2**2.372) <= 1e-12
        n = 17
        assert abs(tmat(n, n, n, 2.372) - n**2.372) <= 1e-9

    def test_permutation_symmetry_exact(self):
        rng = np.random.default_rng(0)
        for _ in range(100):
            a, b, c = (int(v) for v in rng.integers(1, 10_000, size=3))
            base = tmat(a, b, c)
            for perm in itertools.permutations((a, b, c)):
                assert tmat(*perm) == base

    def test_rectangular_value(self):
        # tmat(d, d, N) = N * d^(omega-1) for N >= d
        assert abs(tmat(4, 4, 16, 2.372) - 16 * 4**1.372) <= 1e-10

    def test_divide_rule_without_min_switch(self):
        # splitting the largest dimension scales linearly
        assert abs(tmat(8, 4, 2) - 2 * tmat(4, 4, 2)) <= 1e-12
        assert abs(tmat(1000, 10, 10) - 10 * tmat(100, 10, 10)) <= 1e-9

    def test_schoolbook_omega(self):
        assert tmat(5, 7, 3, omega=3.0) == 5 * 7 * 3

    def test_nonpositive_rejected(self):
        with pytest.raises(NonPositiveDimension):
            tmat(0, 1, 1)


class TestPipelineCost:
    def test_headline_example_exact(self):
        report = quantum_pipeline_cost(CostModelInputs(n=10**6, d=100, eps=0.1))
        assert report.rows_quantum == 1e5
        assert report.rows_classical == 1e6

    def test_explicit_m_boundary(self):
        n = 4096
        report = quantum_pipeline_cost(CostModelInputs(n=n, d=16, eps=0.5, m=n))
        assert report.rows_quantum == float(n)

    def test_square_matrix_no_advantage(self):
        for n in (64, 1024):
            report = quantum_pipeline_cost(CostModelInputs(n=n, d=n, eps=0.5))
            assert report.rows_quantum >= n

    def test_monotonicity(self):
        base = dict(d=64, eps=0.25)
        rows = [
            quantum_pipeline_cost(CostModelInputs(n=n, **base)).rows_quantum
            for n in (2**10, 2**12, 2**14)
        ]
        assert rows[0] < rows[1] < rows[2]
        rows_d = [
            quantum_pipeline_cost(CostModelInputs(n=2**16, d=d, eps=0.25)).rows_quantum
            for d in (8, 32, 128)
        ]
        assert rows_d[0] < rows_d[1] < rows_d[2]
        rows_eps = [
            quantum_pipeline_cost(CostModelInputs(n=2**16, d=16, eps=e)).rows_quantum
            for e in (0.5, 0.25, 0.1)
        ]
        assert rows_eps[0] < rows_eps[1] < rows_eps[2]

    def test_ridge_sd_lowers_queries(self):
        full = quantum_pipeline_cost(CostModelInputs(n=2**16, d=64, eps=0.25))
        shrunk = quantum_pipeline_cost(
            CostModelInputs(n=2**16, d=64, eps=0.25, sd=8.0, lam=1.0)
        )
        assert shrunk.rows_quantum < full.rows_quantum

    def test_time_terms(self):
        i = CostModelInputs(n=2**14, d=16, N=4, eps=0.25, r=3)
        report = quantum_pipeline_cost(i)
        t = report.time_terms
        assert t["sampling"] == 3 * math.sqrt(2**14 * 16) / 0.25
        assert t["pinv_per_eps"] == 16**2.372 / 0.25
        assert t["pinv"] == 16**2.372
        assert t["multiply"] == 4 * 16 ** (2.372 - 1.0) / 0.25
        assert report.time_quantum == t["sampling"] + t["pinv_per_eps"] + t["multiply"]

    def test_single_log_policy(self):
        plain = quantum_pipeline_cost(CostModelInputs(n=2**20, d=100, eps=0.1))
        logged = quantum_pipeline_cost(
            CostModelInputs(n=2**20, d=100, eps=0.1, log_policy="single_log")
        )
        factor = math.log2(2**20 + 2)
        assert abs(logged.rows_quantum - plain.rows_quantum * factor) <= 1e-6

    def test_input_validation(self):
        with pytest.raises(NonPositiveDimension):
            CostModelInputs(n=0, d=1)
        with pytest.raises(ValueError):
            CostModelInputs(n=4, d=2, r=3)
        with pytest.raises(ValueError):
            CostModelInputs(n=4, d=2, omega=1.9)
        with pytest.raises(ValueError):
            CostModelInputs(n=4, d=2, log_policy="double")


class TestCrossover:
    def test_d100_eps01(self):
        # oracle: smallest power of 2 with sqrt(n d)/eps < n, i.e. n > d/eps^2 = 1e4
        n_star = crossover(CostModelInputs(n=2, d=100, eps=0.1))
        assert n_star == 16384

    def test_immediate_advantage(self):
        assert crossover(CostModelInputs(n=2, d=1, eps=0.999)) == 2

    def test_consistency_around_crossover(self):
        inputs = CostModelInputs(n=2, d=100, eps=0.1)
        n_star = crossover(inputs)
        at = quantum_pipeline_cost(
            CostModelInputs(n=n_star, d=100, eps=0.1)
        ).rows_quantum
        before = quantum_pipeline_cost(
            CostModelInputs(n=n_star // 2, d=100, eps=0.1)
        ).rows_quantum
        assert at < n_star
        assert before >= n_star // 2

    def test_log_policy_shifts_upward(self):
        plain = crossover(CostModelInputs(n=2, d=100, eps=0.1))
        logged = crossover(CostModelInputs(n=2, d=100, eps=0.1, log_policy="single_log"))
        assert logged >= plain

    def test_none_when_out_of_range(self):
        # d/eps^2 beyond the 2^60 search bound
        assert crossover(CostModelInputs(n=2, d=2**50, eps=0.001)) is None


class TestQueryLedger:
    def test_stage_sums(self):
        ledger = QueryLedger()
        ledger.record("leverage_scores", 100)
        ledger.record("sketch_apply", 40)
        ledger.record("sketch_apply", 40)
        ledger.record("objective", 100)
        assert ledger.total == 280
        assert ledger.stages["sketch_apply"] == 80

    def test_merge(self):
        a = QueryLedger({"x": 5})
        b = QueryLedger({"x": 2, "y": 1})
        merged = a.merged(b)
        assert merged.total == 8 and merged.stages == {"x": 7, "y": 1}

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            QueryLedger().record("stage", -1)


class TestSerialization:
    def test_json_fields(self):
        report = quantum_pipeline_cost(CostModelInputs(n=1024, d=8, eps=0.5))
        payload = report_to_json(report)
        assert payload["rows_classical"] == 1024.0
        assert payload["rows_quantum"] == math.sqrt(1024 * 8) / 0.5
        assert "time_quantum_terms" in payload

    def test_csv_row(self):
        report = quantum_pipeline_cost(
            CostModelInputs(n=1024, d=8, N=2, eps=0.5, sd=4.0, lam=0.1)
        )
        row = report_csv_row(report)
        fields = row.split(",")
        assert fields[0] == "1024" and fields[1] == "8" and fields[2] == "2"
        assert "sampling=" in row and fields[-1] == "none"

    def test_sampling_query_model(self):
        assert sampling_query_model(100, 25) == 50.0
        with pytest.raises(NonPositiveDimension):
            sampling_query_model(0, 5)
