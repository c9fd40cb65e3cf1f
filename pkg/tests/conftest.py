import random
import sys

import pytest

from hermite_ct.diffop import DiffOp
from hermite_ct.field import ParamField
from hermite_ct.parser import parse_diffop, parse_xrat
from hermite_ct.polys import XPoly, XRat

INTRO = "(x^2-1)*Dx^2 + (x - 2*p*(x^2-1))*Dx + p^2*(x^2-1) - p*x - n^2"


@pytest.fixture
def Kpn():
    return ParamField(["n", "p"])


@pytest.fixture
def QQx():
    return ParamField()


@pytest.fixture
def m_intro(Kpn):
    return parse_diffop(INTRO, Kpn)


def xr(text, field):
    return parse_xrat(text, field)


def random_xpoly(rng, field, deg, height=5):
    return XPoly(field, [rng.randint(-height, height) for _ in range(deg + 1)])


def random_xrat(rng, field, deg=4, height=5):
    num = random_xpoly(rng, field, rng.randint(0, deg), height)
    den = XPoly(field, [0])
    while not den:
        den = random_xpoly(rng, field, rng.randint(0, deg), height)
    return XRat(num, den)


def random_op(rng, field, r=None, d=None, height=5):
    """Random operator with polynomial coefficients, order r, coefficient degree <= d."""
    r = rng.randint(1, 3) if r is None else r
    d = rng.randint(0, 4) if d is None else d
    coeffs = [random_xpoly(rng, field, rng.randint(0, d), height) for _ in range(r)]
    lead = XPoly(field, [0])
    while not lead:
        lead = random_xpoly(rng, field, rng.randint(0, d), height)
    return DiffOp(field, [XRat(c) for c in coeffs] + [XRat(lead)])


@pytest.fixture
def rng():
    return random.Random(1234)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
