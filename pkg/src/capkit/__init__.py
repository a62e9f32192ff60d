"""Exact verification of class-number, capitulation and cohomology identities for cyclic extensions."""

from .checks import CATALOG, CHECK_IDS, VerificationReport, run_checks
from .fixtures import Fixture, FixtureError, load_fixture, parse_fixture

__all__ = [
    "CATALOG",
    "CHECK_IDS",
    "Fixture",
    "FixtureError",
    "VerificationReport",
    "load_fixture",
    "parse_fixture",
    "run_checks",
]

__version__ = "0.1.0"
