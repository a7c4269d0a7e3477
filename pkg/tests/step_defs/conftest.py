"""Shared fixtures and steps for BDD tests."""

import logging

import pytest
from pytest_bdd import parsers, then

import hurstnoise

ERRORS = {
    "parameter": hurstnoise.ParameterError,
    "domain": hurstnoise.DomainError,
    "sample-too-small": hurstnoise.SampleTooSmallError,
    "numerical": hurstnoise.NumericalError,
}


@pytest.fixture(autouse=True)
def restore_root_logger():
    """The CLI reconfigures the root logger; undo it after each scenario."""
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    yield
    root.handlers[:] = handlers
    root.setLevel(level)


@pytest.fixture
def capture(ctx):
    """Run a call, storing its result or the hurstnoise error it raised in ctx."""

    def run(func, *args, **kwargs):
        try:
            ctx["result"] = func(*args, **kwargs)
            ctx["error"] = None
        except hurstnoise.HurstNoiseError as e:
            ctx["result"] = None
            ctx["error"] = e
        return ctx["result"]

    return run


@then(parsers.parse("a {kind} error should be raised"))
def check_error(ctx, kind):
    assert isinstance(ctx["error"], ERRORS[kind]), ctx["error"]
