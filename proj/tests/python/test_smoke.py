import json
import math

import blicket


def test_version():
    assert blicket.__version__ == "0.1.0"


def test_generate_is_deterministic():
    a = blicket.generate("iid", 30, seed=5)
    b = blicket.generate("iid", 30, seed=5)
    assert a == b
    lines = a.strip().split("\n")
    assert len(lines) == 30
    first = json.loads(lines[0])
    assert first["problem_id"] == "iid-000000"
    assert len(first["context"]) == 6
    assert len(first["queries"]) == 4


def test_solve_and_evaluate():
    data = blicket.generate("iid", 30, seed=5)
    preds = blicket.solve(data, "rw")
    assert len(preds.strip().split("\n")) == 30
    metrics = blicket.evaluate(data, preds)
    assert metrics["n_problems"] == 30
    assert 0.0 <= metrics["query_accuracy"] <= 1.0
    assert sum(sum(row) for row in metrics["confusion"]) == 120


def test_fold_selection():
    data = blicket.generate("iid", 30, seed=5)
    preds = blicket.solve(data, "always_on", fold="test")
    metrics = blicket.evaluate(data, preds, fold="test")
    assert metrics["n_problems"] == 6


def test_unknown_solver_raises():
    data = blicket.generate("iid", 10, seed=1)
    try:
        blicket.solve(data, "nope")
    except ValueError as e:
        assert "nope" in str(e)
    else:
        raise AssertionError("expected ValueError")


def test_label_query_canonical():
    context = [([0], True), ([1], False), ([0, 1], True)]
    assert blicket.label_query(context, 2, [0]) == "activated"
    assert blicket.label_query(context, 2, [1]) == "inactivated"
    backward = [([0], True), ([1], False), ([0, 1], True), ([0, 2], True)]
    assert blicket.label_query(backward, 3, [2]) == "undetermined"


def test_acyclicity_identities():
    assert blicket.acyclicity([[0.0, 1.0], [0.0, 0.0]]) == 0.0
    swap = blicket.acyclicity([[0.0, 1.0], [1.0, 0.0]])
    assert abs(swap - (2.0 * math.cosh(1.0) - 2.0)) < 1e-10


def test_default_config_round_trips():
    cfg = json.loads(blicket.default_config())
    assert cfg["rw"]["theta"] == 0.5
    assert cfg["opt"]["hidden"] == 8
    data = blicket.generate("iid", 10, seed=1)
    preds = blicket.solve(data, "rw", config=blicket.default_config())
    assert len(preds.strip().split("\n")) == 10
