"""End-to-end solve: descent, dual extraction, construction, certification.

run_solve() is the library entry point behind the CLI. It also
recertifies the chosen profile from the raw matrices and performs the
dual-route consistency checks (strong duality and the stationarity
bounds) whenever the descent actually reached a stationary point. A
non-stationary certificate whose construction then misses the
guarantee is a solver failure (the iteration budget was too small),
not a violated guarantee.
"""

import csv
import json
import math
import os
import time
from dataclasses import dataclass

from .construct import construct_output
from .descent import SolverConfig, run_descent
from .duals import compute_lambda_mu, solve_dual
from .errors import (
    AnashError,
    GuaranteeViolationError,
    InvariantViolationError,
    SolverFailureError,
    UsageError,
)
from .instances import InstanceSpec, generate
from .oracle import certify

CSV_MAGIC = "#anash-v1"
CSV_COLUMNS = (
    "family",
    "n",
    "seed",
    "extra",
    "delta",
    "case_label",
    "achieved_epsilon",
    "iterations",
    "lambda",
    "mu",
    "P",
    "status",
    "error",
)
DUAL_GAP_TOL = 1e-6
BOUND_SLACK = 1e-6


@dataclass(frozen=True)
class RunRecord:
    instance: InstanceSpec
    delta: float
    case_label: str
    achieved_epsilon: float
    iterations: int
    lam: float
    mu: float
    P: float
    status: str
    wall_time_ms: float
    error: str = ""


def make_config(delta=None, max_iterations=None, seed=0):
    """SolverConfig with the environment override ANASH_MAX_ITERS applied."""
    if delta is None:
        delta = SolverConfig.delta
    env = os.environ.get("ANASH_MAX_ITERS")
    if max_iterations is None and env:
        try:
            max_iterations = int(env)
        except ValueError:
            raise UsageError(
                f"ANASH_MAX_ITERS must be an integer, got {env!r}"
            ) from None
    return SolverConfig(
        delta=float(delta), max_iterations=max_iterations, rng_seed=seed
    )


def _check_dual_route(certificate, duals, params, config):
    """Consistency checks that hold at every stationary point."""
    gap = abs(duals.dual_objective - certificate.gamma)
    if gap > DUAL_GAP_TOL:
        raise InvariantViolationError(
            f"strong duality gap {gap:.3e} between gamma="
            f"{certificate.gamma!r} and dual objective="
            f"{duals.dual_objective!r}"
        )
    g = certificate.g_value
    lam, mu, P = params.lam, params.mu, duals.P
    cap = min(P * lam, (1.0 - P) * mu) + config.delta + BOUND_SLACK
    if g > cap:
        raise InvariantViolationError(
            f"stationary regret g = {g!r} exceeds min(P*lambda, (1-P)*mu) "
            f"+ delta = {cap!r}"
        )
    if lam > 0.0 and mu > 0.0 and lam + mu > 1e-9:
        harmonic = lam * mu / (lam + mu) + config.delta + BOUND_SLACK
        if g > harmonic:
            raise InvariantViolationError(
                f"stationary regret g = {g!r} exceeds lambda*mu/(lambda+mu) "
                f"+ delta = {harmonic!r}"
            )
        quarter = (lam + mu) / 4.0 + config.delta + BOUND_SLACK
        if g > quarter:
            raise InvariantViolationError(
                f"stationary regret g = {g!r} exceeds (lambda+mu)/4 "
                f"+ delta = {quarter!r}"
            )


def run_solve(game, config=None, instance=None):
    """Solve one game. Returns (RunRecord, ConstructionTrace)."""
    if config is None:
        config = make_config()
    if instance is None:
        instance = InstanceSpec(family="from-file", n=game.n)
    t0 = time.perf_counter()
    certificate = run_descent(game, config)
    duals = solve_dual(game, certificate.profile, config.br_tol)
    params = compute_lambda_mu(game, certificate.profile, duals)
    if certificate.stationary:
        _check_dual_route(certificate, duals, params, config)
    try:
        trace = construct_output(game, certificate, duals, params, config)
    except GuaranteeViolationError as exc:
        if not certificate.stationary:
            raise SolverFailureError(
                f"descent hit the iteration cap of {config.max_iterations} "
                "before reaching a stationary point, and the best iterate "
                f"misses the guarantee: {exc}"
            ) from exc
        raise
    ok, report = certify(
        game, trace.chosen.profile, 1.0 / 3.0 + config.delta + BOUND_SLACK
    )
    if not ok:
        raise GuaranteeViolationError(
            f"independent certification found max regret "
            f"{report.max_regret!r} above 1/3 + delta",
            trace=trace,
        )
    wall_ms = (time.perf_counter() - t0) * 1000.0
    record = RunRecord(
        instance=instance,
        delta=config.delta,
        case_label=trace.case_label,
        achieved_epsilon=report.max_regret,
        iterations=certificate.iterations_used,
        lam=params.lam,
        mu=params.mu,
        P=duals.P,
        status="ok",
        wall_time_ms=wall_ms,
    )
    return record, trace


def record_row(record):
    """CSV cells for a record; wall time is excluded on purpose so the
    file is byte-identical across repeat runs."""
    spec = record.instance
    return [
        spec.family,
        str(spec.n),
        str(spec.seed),
        json.dumps(spec.extra, sort_keys=True) if spec.extra else "",
        repr(record.delta),
        record.case_label,
        repr(record.achieved_epsilon),
        str(record.iterations),
        repr(record.lam),
        repr(record.mu),
        repr(record.P),
        record.status,
        record.error,
    ]


def _error_record(spec, delta, exc):
    status = {
        GuaranteeViolationError: "guarantee-violation",
        SolverFailureError: "solver-failure",
    }.get(type(exc), "error")
    return RunRecord(
        instance=spec,
        delta=delta,
        case_label="",
        achieved_epsilon=math.nan,
        iterations=0,
        lam=math.nan,
        mu=math.nan,
        P=math.nan,
        status=status,
        wall_time_ms=0.0,
        error=f"{type(exc).__name__}: {exc}",
    )


def run_batch(specs, config, out_path):
    """Solve every spec, write one CSV, and return summary counts.

    Individual failures are recorded and do not stop the batch.
    """
    records = []
    for spec in specs:
        try:
            game = generate(spec)
            record, _ = run_solve(game, config, instance=spec)
        except AnashError as exc:
            record = _error_record(spec, config.delta, exc)
        records.append(record)
    with open(out_path, "w", newline="", encoding="utf-8") as fh:
        fh.write(CSV_MAGIC + "\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for record in records:
            writer.writerow(record_row(record))
    done = [r for r in records if r.status == "ok"]
    cases = {}
    for r in done:
        cases[r.case_label] = cases.get(r.case_label, 0) + 1
    summary = {
        "total": len(records),
        "solved": len(done),
        "guarantee_violations": sum(
            1 for r in records if r.status == "guarantee-violation"
        ),
        "failures": sum(
            1 for r in records if r.status not in ("ok", "guarantee-violation")
        ),
        "max_epsilon": max((r.achieved_epsilon for r in done), default=math.nan),
        "mean_iterations": (
            sum(r.iterations for r in done) / len(done) if done else math.nan
        ),
        "cases": cases,
    }
    return summary


def trace_document(record, trace):
    """JSON-ready description of a run for the CLI's --json output."""
    def strat(ms):
        return [float(v) for v in ms.probs]

    doc = {
        "delta": record.delta,
        "case_label": trace.case_label,
        "lambda": trace.lam,
        "mu": trace.mu,
        "P": trace.duals.P,
        "gamma": trace.certificate.gamma,
        "stationary_regret": trace.certificate.g_value,
        "stationary": trace.certificate.stationary,
        "iterations": record.iterations,
        "achieved_epsilon": record.achieved_epsilon,
        "wall_time_ms": record.wall_time_ms,
        "chosen_index": trace.chosen_index,
        "candidates": [
            {
                "description": c.description,
                "row": strat(c.profile.row),
                "col": strat(c.profile.col),
                "row_regret": c.report.row_regret,
                "col_regret": c.report.col_regret,
                "max_regret": c.report.max_regret,
            }
            for c in trace.candidates
        ],
        "row_strategy": strat(trace.chosen.profile.row),
        "col_strategy": strat(trace.chosen.profile.col),
    }
    params = trace.params
    if params is not None:
        fields = {}
        for name in params.__dataclass_fields__:
            val = getattr(params, name)
            if hasattr(val, "probs"):
                fields[name] = strat(val)
            else:
                fields[name] = val
        doc["case_params"] = fields
    return doc
