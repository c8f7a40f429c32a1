import sys

import pytest

from stratpl.oracle.model import Puncture, PuncturedDiscConfig
from stratpl.scalars import parse_mode


@pytest.fixture(scope="session")
def Q12():
    return parse_mode("cyclotomic:12")


@pytest.fixture(scope="session")
def Qst():
    return parse_mode("symbolic:s,t,u")


def disc(a_weights, x_weight=None):
    """A punctures at 0, 1, ...; X (if given) last, to the right."""
    a = tuple(Puncture(i, w) for i, w in enumerate(a_weights))
    x = Puncture(len(a), x_weight) if x_weight is not None else None
    return PuncturedDiscConfig(a, x)


@pytest.fixture(scope="session")
def classical(Qst):
    """Generic weights s (A) and t (X): the classical one-cycle datum."""
    from stratpl.oracle.datum import base_datum
    s, t = Qst.gen("s"), Qst.gen("t")
    return base_datum(disc([s], t))


@pytest.fixture(scope="session")
def four(Q12):
    """Three A punctures and X with weights in mu_12, alpha1 != 1."""
    from stratpl.oracle.datum import base_datum
    z = Q12.zeta
    return base_datum(disc([z(1), z(2), z(7)], z(5)))


@pytest.fixture(scope="session")
def resonant():
    """alpha1 == 1 with resonant A weights s, 1/s: nonzero aux groups."""
    from stratpl.oracle.datum import base_datum
    F = parse_mode("symbolic:s")
    s = F.gens[0]
    return base_datum(disc([s, 1 / s], F.one))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
