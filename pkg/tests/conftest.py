from __future__ import annotations

from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from rdiffsys import GaussianRational, RPoly
from rdiffsys.poly import var

DATA = Path(__file__).resolve().parents[1] / "src" / "rdiffsys" / "data"

settings.register_profile(
    "default",
    max_examples=200,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
    derandomize=True,
)
settings.load_profile("default")

BASE_VARS = ["z1", "z2", "w1", "~z1", "~z2", "~w1"]
Z_VARS = ["z1", "z2", "~z1", "~z2"]


@pytest.fixture
def data_dir() -> Path:
    return DATA


def P(name: str) -> RPoly:
    return RPoly.variable(name)


small_ints = st.integers(min_value=-4, max_value=4)

gaussians = st.builds(
    lambda a, b, d: GaussianRational(a, b) / d,
    small_ints,
    small_ints,
    st.integers(min_value=1, max_value=3),
)

nonzero_gaussians = gaussians.filter(bool)


def monomials(names=BASE_VARS, max_deg=3):
    return st.lists(st.sampled_from(names), max_size=max_deg).map(
        lambda vs: tuple(sorted({var(v): vs.count(v) for v in vs}.items()))
    )


def polys(names=BASE_VARS, max_deg=3, max_terms=4):
    return st.lists(st.tuples(monomials(names, max_deg), gaussians), max_size=max_terms).map(
        lambda ts: sum((RPoly.monomial(m) * c for m, c in ts), RPoly())
    )


def nonzero_polys(names=BASE_VARS, max_deg=3, max_terms=4):
    return polys(names, max_deg, max_terms).filter(bool)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for k in sorted(results):
            terminalreporter.write_line(results[k])
