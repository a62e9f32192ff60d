import sys
from pathlib import Path

import pytest

HERE = Path(__file__).parent
ROOT = HERE.parent
sys.path.insert(0, str(HERE))

from capkit.analysis import Analysis, FieldContext  # noqa: E402
from capkit.fixtures import load_fixture  # noqa: E402

FIXTURE_DIR = ROOT / "fixtures"
CORPUS = sorted(p.stem for p in FIXTURE_DIR.glob("*.toml"))

_loaded: dict = {}


def corpus_context(name: str) -> FieldContext:
    """Shared FieldContext per fixture so class and unit groups are built once per session."""
    if name not in _loaded:
        path = FIXTURE_DIR / f"{name}.toml" if (FIXTURE_DIR / f"{name}.toml").exists() else HERE / "data" / f"{name}.toml"
        _loaded[name] = FieldContext(load_fixture(path))
    return _loaded[name]


def analysis(name: str, variant: str = "base") -> Analysis:
    ctx = corpus_context(name)
    return Analysis(ctx, ctx.fixture.variant(variant))


@pytest.fixture(scope="session")
def gaussian():
    return corpus_context("gaussian").fixture


@pytest.fixture(scope="session")
def hcf():
    return corpus_context("hcf_m5").fixture


@pytest.fixture(scope="session")
def zeta5():
    return corpus_context("zeta5").fixture
