"""Property suites behind ``odenorm verify``.

A suite is a pair of functions: ``generate(rng)`` draws JSON-ready inputs
and ``check(inputs, cfg)`` returns ``(ok, detail)``.  Reports list failures
with their full inputs, and :func:`replay` re-runs a failure from those
inputs alone.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import generators as gen
from .duality import conjugate, exact_norming_pairing, holder_check, norming_pairing
from .errors import ValidationError
from .function_model import Density, Exponent, StepFunction
from .nakano import equivalence_ratio
from .phi_solver import SolveConfig, disjoint_estimates_check, sup_bound_check
from .sequence_space import (
    disjoint_matrix_sum_check,
    nesting_inequality_check,
    transpose_contraction_check,
)
from .weighted_embedding import WeightedSpec, weight_isometry_check

__all__ = ["RunConfig", "SUITES", "run_suite", "run", "replay"]

HOLDER_TOL = 1e-9
PAIRING_TOL = 1e-8
NAKANO_TOL = 1e-9
ESTIMATE_TOL = 1e-9
MIXED_TOL = 1e-12
ISOMETRY_TOL = 1e-9


@dataclass(frozen=True)
class RunConfig:
    tol: float = 1e-10
    grid: int = 1024
    ladder_base: float = 0.5
    seed: int = 0
    cases: int = 1000

    def __post_init__(self):
        if not self.tol > 0:
            raise ValidationError("tol must be positive")
        if self.grid < 1:
            raise ValidationError("grid must be >= 1")
        if self.cases < 1:
            raise ValidationError("cases must be >= 1")

    def solve_config(self):
        return SolveConfig(abs_tol=self.tol, ladder_base=self.ladder_base)


def _step(d, kind=StepFunction):
    return kind.from_dict(d)


# holder


def _holder_generate(rng):
    part = gen.random_partition(rng)
    return {
        "f": gen.random_step(rng, part).to_dict(),
        "g": gen.random_step(rng).to_dict(),
        "p": gen.random_exponent(rng, gen.random_partition(rng), gen.DUALITY_EXPONENTS).to_dict(),
    }


def _holder_check(inputs, cfg):
    pair = conjugate(_step(inputs["p"], Exponent))
    rep = holder_check(_step(inputs["f"]), _step(inputs["g"]), pair, cfg)
    return rep.holds(HOLDER_TOL), {"lhs": rep.lhs, "rhs": rep.rhs, "slack": rep.slack}


# pairing


def _pairing_generate(rng):
    part = gen.random_partition(rng)
    return {
        "x": gen.random_step(rng, part).to_dict(),
        "p": gen.random_exponent(rng, part, gen.DUALITY_EXPONENTS).to_dict(),
    }


def _pairing_check(inputs, cfg):
    x = _step(inputs["x"])
    p = _step(inputs["p"], Exponent)
    exact = exact_norming_pairing(x, p, cfg)
    literal = norming_pairing(x, p, cfg)
    detail = {
        "pairing": exact.pairing,
        "norm_x": exact.norm_x,
        "norm_g": exact.norm_Jx,
        "relative_defect": exact.relative_defect,
        "duality_map_relative_defect": literal.relative_defect,
    }
    ok = exact.defect <= PAIRING_TOL * exact.scale and abs(exact.norm_Jx - 1.0) <= PAIRING_TOL
    return ok, detail


# nakano band


def _nakano_generate(rng):
    part = gen.random_partition(rng)
    return {
        "f": gen.random_step(rng, part).to_dict(),
        "p": gen.random_exponent(rng, part).to_dict(),
    }


def _nakano_check(inputs, cfg):
    ratio = equivalence_ratio(_step(inputs["f"]), _step(inputs["p"], Exponent), cfg)
    return 0.5 - NAKANO_TOL <= ratio <= 2.0 + NAKANO_TOL, {"ratio": ratio}


# estimates and sup bound


def _estimates_generate(rng):
    part = gen.random_partition(rng)
    return {
        "family": [f.to_dict() for f in gen.random_disjoint_family(rng, part)],
        "p": gen.random_exponent(rng, part).to_dict(),
    }


def _estimates_check(inputs, cfg):
    fs = [_step(d) for d in inputs["family"]]
    p = _step(inputs["p"], Exponent)
    rep = disjoint_estimates_check(fs, p, cfg)
    total = StepFunction(p.partition, np.sum([f.values for f in fs], axis=0))
    sup = sup_bound_check(total, p, cfg)
    detail = dict(rep._asdict(), sup_bound=sup.bound)
    ok = rep.holds(ESTIMATE_TOL) and sup.norm <= sup.bound + ESTIMATE_TOL
    return ok, detail


# mixed norms


def _mixed_generate(rng):
    p, r = np.sort(rng.uniform(1.0, 6.0, 2))
    a = gen.random_matrix(rng)
    parts = int(rng.integers(1, 5))
    owner = rng.integers(0, parts, a.shape)
    split = [np.where(owner == i, a, 0.0).tolist() for i in range(parts)]
    abc = rng.uniform(0.0, 1.0, 3).tolist()
    return {"matrix": a.tolist(), "parts": split, "abc": abc, "p": float(p), "r": float(r)}


def _mixed_check(inputs, cfg):
    p, r = inputs["p"], inputs["r"]
    reports = {
        "transpose": transpose_contraction_check(inputs["matrix"], p, r),
        "disjoint_sum": disjoint_matrix_sum_check(inputs["parts"], p, r),
        "nesting": nesting_inequality_check(*inputs["abc"], p, r),
    }
    detail = {name: rep.slack for name, rep in reports.items()}
    return all(rep.slack >= -MIXED_TOL for rep in reports.values()), detail


# weighted isometry


def _isometry_generate(rng):
    part = gen.random_partition(rng)
    return {
        "f": gen.random_step(rng, part).to_dict(),
        "w": gen.random_density(rng, part).to_dict(),
        "p": gen.random_exponent(rng, part, (1.0, 6.0)).to_dict(),
    }


def _isometry_check(inputs, cfg):
    spec = WeightedSpec(_step(inputs["p"], Exponent), _step(inputs["w"], Density))
    rep = weight_isometry_check(_step(inputs["f"]), spec, cfg)
    return rep.defect <= ISOMETRY_TOL, dict(rep._asdict(), defect=rep.defect)


SUITES = {
    "holder": (_holder_generate, _holder_check),
    "pairing": (_pairing_generate, _pairing_check),
    "nakano-band": (_nakano_generate, _nakano_check),
    "estimates": (_estimates_generate, _estimates_check),
    "mixed": (_mixed_generate, _mixed_check),
    "isometry": (_isometry_generate, _isometry_check),
}


def _suite(name):
    try:
        return SUITES[name]
    except KeyError:
        raise ValidationError(
            f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all"
        ) from None


def run_suite(name, run_cfg):
    """Run ``run_cfg.cases`` cases of one suite; failures keep their inputs."""
    generate, check = _suite(name)
    cfg = run_cfg.solve_config()
    failures = []
    for case in range(run_cfg.cases):
        inputs = generate(gen.case_rng(run_cfg.seed, case))
        ok, detail = check(inputs, cfg)
        if not ok:
            failures.append({
                "suite": name, "seed": run_cfg.seed, "case": case,
                "inputs": inputs, "detail": detail,
            })
    return {"suite": name, "seed": run_cfg.seed, "cases": run_cfg.cases, "failures": failures}


def run(name, run_cfg):
    """One suite, or every suite in order for ``name == "all"``."""
    if name == "all":
        return {"suite": "all", "reports": [run_suite(s, run_cfg) for s in SUITES]}
    return run_suite(name, run_cfg)


def _failures_in(record):
    if "reports" in record:
        return [f for rep in record["reports"] for f in rep["failures"]]
    if "failures" in record:
        return list(record["failures"])
    return [record]


def replay(record, run_cfg):
    """Re-run recorded failures from their stored inputs."""
    cfg = run_cfg.solve_config()
    out = []
    for failure in _failures_in(record):
        try:
            _, check = _suite(failure["suite"])
            inputs = failure["inputs"]
        except (KeyError, TypeError):
            raise ValidationError("replay record lacks suite or inputs") from None
        ok, detail = check(inputs, cfg)
        out.append({
            "suite": failure["suite"], "seed": failure.get("seed"), "case": failure.get("case"),
            "reproduced": not ok, "detail": detail,
        })
    return {"replayed": len(out), "results": out}
