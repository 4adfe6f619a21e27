import csv
import math

import pytest

from anash.errors import SolverFailureError, UsageError
from anash.instances import InstanceSpec, generate
from anash.pipeline import (
    CSV_COLUMNS,
    CSV_MAGIC,
    make_config,
    record_row,
    run_batch,
    run_solve,
    trace_document,
)


def test_run_solve_record_coherent():
    spec = InstanceSpec("uniform-random", n=5, seed=1)
    config = make_config(delta=0.05)
    record, trace = run_solve(generate(spec), config, spec)
    assert record.status == "ok"
    assert record.instance == spec
    assert record.delta == 0.05
    assert record.achieved_epsilon <= 1.0 / 3.0 + 0.05 + 1e-6
    assert record.achieved_epsilon == trace.chosen.report.max_regret
    assert record.iterations >= 1
    assert record.case_label == trace.case_label
    assert record.wall_time_ms > 0.0


def test_run_solve_default_instance_spec():
    game = generate(InstanceSpec("uniform-random", n=3, seed=0))
    record, _ = run_solve(game, make_config(delta=0.05))
    assert record.instance.family == "from-file"


def test_run_solve_raises_on_starved_budget():
    # one iteration cannot reach stationarity on this sparse game, and
    # every profile seen that early still misses the guarantee
    game = generate(InstanceSpec("win-lose", n=5, seed=181, extra={"p": 0.15}))
    config = make_config(delta=0.001, max_iterations=1)
    with pytest.raises(SolverFailureError, match="iteration cap"):
        run_solve(game, config)


def test_make_config_env_override(monkeypatch):
    monkeypatch.setenv("ANASH_MAX_ITERS", "17")
    assert make_config(delta=0.05).max_iterations == 17
    # an explicit argument wins over the environment
    assert make_config(delta=0.05, max_iterations=3).max_iterations == 3
    monkeypatch.setenv("ANASH_MAX_ITERS", "seventeen")
    with pytest.raises(UsageError):
        make_config(delta=0.05)


def test_record_row_excludes_wall_time():
    spec = InstanceSpec("uniform-random", n=3, seed=2)
    record, _ = run_solve(generate(spec), make_config(delta=0.05), spec)
    row = record_row(record)
    assert len(row) == len(CSV_COLUMNS)
    assert not any(str(record.wall_time_ms) in cell for cell in row)
    # floats are serialized with repr so equal values stay byte-equal
    assert row[6] == repr(record.achieved_epsilon)


def batch_specs():
    return [
        InstanceSpec("uniform-random", n=3, seed=0),
        InstanceSpec("constant-sum", n=3, seed=1),
        InstanceSpec("planted-pure-ne", n=4, seed=2),
    ]


def test_run_batch_writes_csv(tmp_path):
    out = tmp_path / "runs.csv"
    summary = run_batch(batch_specs(), make_config(delta=0.05), out)
    assert summary["total"] == 3
    assert summary["solved"] == 3
    assert summary["failures"] == 0
    assert summary["max_epsilon"] <= 1.0 / 3.0 + 0.05 + 1e-6
    lines = out.read_text().splitlines()
    assert lines[0] == CSV_MAGIC
    reader = csv.reader(lines[1:])
    header = next(reader)
    assert tuple(header) == CSV_COLUMNS
    assert len(list(reader)) == 3


def test_run_batch_byte_identical(tmp_path):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    run_batch(batch_specs(), make_config(delta=0.05), a)
    run_batch(batch_specs(), make_config(delta=0.05), b)
    assert a.read_bytes() == b.read_bytes()


def test_run_batch_records_failures_and_continues(tmp_path):
    specs = [
        InstanceSpec("uniform-random", n=3, seed=0),
        InstanceSpec("no-such-family", n=3, seed=0),
    ]
    out = tmp_path / "runs.csv"
    summary = run_batch(specs, make_config(delta=0.05), out)
    assert summary["total"] == 2
    assert summary["solved"] == 1
    assert summary["failures"] == 1
    rows = list(csv.reader(out.read_text().splitlines()[2:]))
    failed = rows[1]
    assert failed[CSV_COLUMNS.index("status")] == "error"
    assert "UsageError" in failed[CSV_COLUMNS.index("error")]
    assert math.isnan(float(failed[CSV_COLUMNS.index("achieved_epsilon")]))


def test_trace_document_fields():
    spec = InstanceSpec("uniform-random", n=4, seed=3)
    record, trace = run_solve(generate(spec), make_config(delta=0.05), spec)
    doc = trace_document(record, trace)
    assert doc["case_label"] == trace.case_label
    assert doc["stationary"] is True
    assert len(doc["candidates"]) == len(trace.candidates)
    assert doc["row_strategy"] == pytest.approx(
        list(trace.chosen.profile.row.probs)
    )
    assert sum(doc["row_strategy"]) == pytest.approx(1.0, abs=1e-12)
    if trace.params is not None:
        assert "case_params" in doc
