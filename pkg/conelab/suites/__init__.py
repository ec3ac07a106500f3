"""Experiment suites: each turns one area of the theory into pass/fail records."""

from conelab.suites.base import Suite, SuiteContext, refused
from conelab.suites.registry import ALL, SUITES, list_suites, resolve, run_suite

__all__ = ["ALL", "SUITES", "Suite", "SuiteContext", "list_suites", "refused", "resolve", "run_suite"]
