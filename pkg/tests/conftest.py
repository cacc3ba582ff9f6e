import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


def complex_st(radius: float = 5.0):
    f = st.floats(-radius, radius, allow_nan=False, allow_infinity=False)
    return st.builds(complex, f, f)


def random_roots(rng: np.random.Generator, n: int, radius: float = 5.0) -> np.ndarray:
    """Uniform in the disc of the given radius."""
    return radius * np.sqrt(rng.uniform(size=n)) * np.exp(2j * np.pi * rng.uniform(size=n))


def random_coeffs(rng: np.random.Generator, n: int, modulus: float = 10.0) -> np.ndarray:
    return rng.uniform(0, modulus, n) * np.exp(2j * np.pi * rng.uniform(size=n))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            if rep.when != "call":
                continue
            props = dict(rep.user_properties)
            if "criterion" in props:
                lines.append((props["criterion"], outcome, props.get("detail", "")))
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for num, outcome, detail in sorted(lines, key=lambda t: t[0]):
        mark = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {num:>2}: {mark}  {detail}")
