"""Unit tests for the suite context and the registry."""

import math

import numpy as np
import pytest

from conelab.errors import ConfigError, ModelError
from conelab.suites import ALL, SUITES, Suite, SuiteContext, list_suites, refused, resolve, run_suite
from conelab.utils.config import ConeLabConfig


@pytest.fixture
def ctx() -> SuiteContext:
    """Context of a throwaway suite."""
    return SuiteContext("demo", ConeLabConfig(seed=1), np.random.default_rng(0))


def test_suite_order() -> None:
    """Test that suites run in the documented order."""
    names = list_suites()
    assert names[0] == "geometry-oracles"
    assert names[-1] == "bootstrap"
    assert len(names) == len(set(names)) == 9


def test_resolve() -> None:
    """Test selecting one suite, all suites and an unknown name."""
    assert [s.name for s in resolve("bootstrap")] == ["bootstrap"]
    assert resolve(ALL) == list(SUITES)
    assert [s.name for s in resolve("bootstrap, decay-engine")] == ["decay-engine", "bootstrap"]
    with pytest.raises(ConfigError, match="unknown suite 'nope'"):
        resolve("nope")


def test_check_records_value(ctx: SuiteContext) -> None:
    """Test that a check stores its value, tolerance and zeroed timing."""
    assert ctx.check("small", "x = x", 1e-3, lambda: 1e-4) == 1e-4
    record = ctx.result.records[0]
    assert record.passed
    assert record.suite == "demo"
    assert record.seconds == 0.0


def test_check_exception_becomes_inf(ctx: SuiteContext) -> None:
    """Test that a raising check fails with value inf and later checks still run."""

    def boom() -> float:
        msg = "level not attained"
        raise ModelError(msg)

    assert ctx.check("raises", "-", 1.0, boom) == math.inf
    ctx.check("after", "-", 1.0, lambda: 0.0)
    assert [r.passed for r in ctx.result.records] == [False, True]
    assert ctx.result.failures == 1


def test_flag(ctx: SuiteContext) -> None:
    """Test that flags record 0 when they hold and 1 otherwise."""
    assert ctx.flag("yes", "-", lambda: True)
    assert not ctx.flag("no", "-", lambda: False)
    assert [r.value for r in ctx.result.records] == [0.0, 1.0]


def test_curve_and_certificate(ctx: SuiteContext) -> None:
    """Test that curves and certificates are kept by name."""
    ctx.curve("c", [1, 2], [3.0, 4.0], xlabel="r", logy=True)
    ctx.certify("numbers", {"k": 1})
    assert ctx.result.series["c"].x == [1.0, 2.0]
    assert ctx.result.series["c"].logy
    assert ctx.result.certificates["numbers"] == {"k": 1}


def test_refused() -> None:
    """Test that only the named error counts as a refusal."""

    def raise_model() -> None:
        msg = "bad"
        raise ModelError(msg)

    assert refused(raise_model, ModelError)
    assert not refused(lambda: None, ModelError)


def test_aborted_suite_keeps_records() -> None:
    """Test that an exception escaping a suite is recorded after the checks before it."""

    def broken(ctx: SuiteContext) -> None:
        ctx.check("first", "-", 1.0, lambda: 0.0)
        msg = "suite crashed"
        raise RuntimeError(msg)

    suite = Suite("bootstrap", "crash", broken)
    result = run_suite(suite, ConeLabConfig(seed=1))
    assert [r.check for r in result.records] == ["first", "suite-completed"]
    assert result.failures == 1
