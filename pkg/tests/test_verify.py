import json

import numpy as np
import pytest

from odenorm import generators as gen
from odenorm.errors import ValidationError
from odenorm.verify import SUITES, RunConfig, replay, run, run_suite


def test_case_rng_is_addressable():
    a = gen.random_step(gen.case_rng(7, 3))
    b = gen.random_step(gen.case_rng(7, 3))
    assert a == b
    assert gen.random_step(gen.case_rng(7, 4)) != a


def test_generator_ranges():
    for case in range(200):
        rng = gen.case_rng(1, case)
        part = gen.random_partition(rng)
        assert 1 <= part.n_cells <= 32
        f = gen.random_step(rng, part)
        assert np.all((np.abs(f.values) >= 1e-3) & (np.abs(f.values) <= 1e3))
        p = gen.random_exponent(rng, part, gen.DUALITY_EXPONENTS)
        assert 1.05 <= p.ess_inf and p.ess_sup <= 8.0
        fam = gen.random_disjoint_family(rng, part)
        assert 1 <= len(fam) <= 8
        assert np.all(np.sum([g.values != 0 for g in fam], axis=0) <= 1)
        assert np.all(gen.random_matrix(rng) >= 0)


@pytest.mark.parametrize("suite", list(SUITES))
def test_suites_pass_on_fixed_seed(suite):
    report = run_suite(suite, RunConfig(cases=100, seed=11))
    assert report["cases"] == 100
    assert report["failures"] == []


def test_reports_are_deterministic():
    cfg = RunConfig(cases=30, seed=5)
    assert json.dumps(run("all", cfg)) == json.dumps(run("all", cfg))


def test_unknown_suite():
    with pytest.raises(ValidationError):
        run("nope", RunConfig())


def test_run_config_validation():
    with pytest.raises(ValidationError):
        RunConfig(cases=0)
    with pytest.raises(ValidationError):
        RunConfig(tol=-1)


def test_failures_carry_inputs_and_replay(monkeypatch):
    import odenorm.verify as verify

    monkeypatch.setattr(verify, "HOLDER_TOL", -1e9)  # every case now fails
    report = run_suite("holder", RunConfig(cases=3, seed=2))
    assert [f["case"] for f in report["failures"]] == [0, 1, 2]
    first = report["failures"][0]
    assert set(first["inputs"]) == {"f", "g", "p"}
    again = replay(json.loads(json.dumps(first)), RunConfig())
    assert again["results"][0]["reproduced"]
    assert again["results"][0]["detail"] == first["detail"]
    assert replay(report, RunConfig())["replayed"] == 3


def test_replay_rejects_malformed_records():
    with pytest.raises(ValidationError):
        replay({"suite": "holder"}, RunConfig())
