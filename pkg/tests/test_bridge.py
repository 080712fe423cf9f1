import sys
import time

import pytest

from itnkit.bridge import BridgeSpawnError, BridgeSpec, run_batch
from conftest import FIXTURES

STUBS = FIXTURES / "bridge"


def spec(stub, **kw):
    return BridgeSpec((sys.executable, str(STUBS / stub)), **kw)


def test_spec_validation():
    with pytest.raises(ValueError):
        BridgeSpec(())
    with pytest.raises(ValueError):
        BridgeSpec(("x",), timeout_per_item=0)
    with pytest.raises(ValueError):
        BridgeSpec(("x",), max_batch=0)
    assert BridgeSpec.from_json({"command": "a b"}).command == ("a", "b")


def test_echo_round_trip_in_order():
    items = [(str(i), f"line {i} ünïcode") for i in range(500)]
    results = run_batch(items, spec("echo_model.py", max_batch=16))
    assert [(r.id, r.text) for r in results] == items
    assert all(r.ok for r in results)


def test_duplicate_ids_each_get_a_result():
    items = [("a", "one"), ("a", "two"), ("b", "three")]
    results = run_batch(items, spec("echo_model.py"))
    assert [(r.id, r.text) for r in results] == items


def test_dropped_responses_time_out_individually():
    items = [(str(i), f"t{i}") for i in range(30)]
    results = run_batch(items, spec("drop_every_7th.py", timeout_per_item=0.5, max_batch=8))
    failed = [r.id for r in results if not r.ok]
    assert failed == ["6", "13", "20", "27"]
    assert {r.error for r in results if not r.ok} == {"timeout"}
    assert all(r.text == f"t{r.id}" for r in results if r.ok)


def test_slow_model_times_out():
    start = time.monotonic()
    results = run_batch([("1", "x"), ("2", "y")], spec("sleeper.py", timeout_per_item=0.2))
    assert [r.error for r in results] == ["timeout", "timeout"]
    assert time.monotonic() - start < 4


def crasher_items():
    return [("a", "fine"), ("b", "CRASH"), ("c", "after"), ("d", "GARBLE"), ("e", "REFUSE"), ("f", "last")]


def test_crash_restarts_and_isolates_failures():
    results = {r.id: r for r in run_batch(crasher_items(), spec("crasher.py", max_batch=1))}
    assert results["a"].text == "FINE"
    assert results["b"].error == "model crashed"
    assert results["c"].text == "AFTER"
    assert results["d"].error == "malformed response"
    assert results["e"].error and results["e"].error not in ("timeout", "model crashed")
    assert results["f"].text == "LAST"


def test_crash_without_restart_fails_the_rest():
    results = run_batch(crasher_items(), spec("crasher.py", max_batch=1, restart_on_crash=False))
    assert results[0].ok
    assert [r.error for r in results[1:]] == ["model crashed"] * 5


def test_jobs_preserve_order():
    items = [(str(i), str(i)) for i in range(100)]
    results = run_batch(items, spec("echo_model.py"), jobs=3)
    assert [(r.id, r.text) for r in results] == items


def test_missing_executable():
    with pytest.raises(BridgeSpawnError):
        run_batch([("1", "x")], BridgeSpec(("/nonexistent/model",)))


def test_empty_input():
    assert run_batch([], spec("echo_model.py")) == []
