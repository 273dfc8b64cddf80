"""Shared instance fixtures; session-scoped so expensive builds happen once."""

import pytest

from tatesplice.arith import PrimeField, VariableContext, parse_polynomial
from tatesplice.freecomplex import BaseRing
from tatesplice.groebner import buchberger
from tatesplice.harness import ProblemInstance, run_build
from tatesplice.koszul import LiftMatrix

P = 32003


class Bundle:
    """Parsed data for one instance: rings, sequences, lift matrix."""

    def __init__(self, variables, f_strs, g_strs, window, dmax):
        self.field = PrimeField(P)
        self.ctx = VariableContext(variables)
        self.f = [parse_polynomial(s, self.ctx, self.field) for s in f_strs]
        self.g = [parse_polynomial(s, self.ctx, self.field) for s in g_strs]
        self.ring_S = BaseRing(self.ctx, self.field)
        self.gb_J = buchberger(self.f)
        self.gb_I = buchberger(self.g)
        self.ring_R = BaseRing(self.ctx, self.field, self.gb_I)
        self.ring_M = BaseRing(self.ctx, self.field, self.gb_J)
        self.lift = LiftMatrix.from_lift(self.f, self.g, self.gb_J)
        self.instance = ProblemInstance(
            field_char=P,
            variables=list(variables),
            f=list(f_strs),
            g=list(g_strs),
            window=window,
            max_internal_degree=dmax,
        )


@pytest.fixture(scope="session")
def inst_t():
    """f = (x, y), g = (x^2, y^2), M = k: the socle-splice example."""
    return Bundle(["x", "y"], ["x", "y"], ["x^2", "y^2"], (-4, 5), 10)


@pytest.fixture(scope="session")
def inst_c():
    """f = (x^2, y^2, z^2), g = (x^3, y^3): codimensions 3 and 2."""
    return Bundle(["x", "y", "z"], ["x^2", "y^2", "z^2"], ["x^3", "y^3"], (-4, 6), 12)


@pytest.fixture(scope="session")
def inst_h():
    """Hypersurface degeneration: f = (x, y), g = x^2 + y^2."""
    return Bundle(["x", "y"], ["x", "y"], ["x^2 + y^2"], (-4, 5), 10)


@pytest.fixture(scope="session")
def inst_52():
    return Bundle(
        ["x1", "x2", "x3", "x4", "x5"],
        ["x1^2", "x2^2", "x3^2", "x4^2", "x5^2"],
        ["x1^3", "x2^3"],
        (-1, 2),
        4,
    )


@pytest.fixture(scope="session")
def inst_41():
    return Bundle(
        ["x1", "x2", "x3", "x4"],
        ["x1^2", "x2^2", "x3^2", "x4^2"],
        ["x1^3"],
        (-2, 3),
        5,
    )


@pytest.fixture(scope="session")
def build_t(inst_t):
    return run_build(inst_t.instance)


@pytest.fixture(scope="session")
def build_c(inst_c):
    return run_build(inst_c.instance)


@pytest.fixture(scope="session")
def build_h(inst_h):
    return run_build(inst_h.instance)


@pytest.fixture(scope="session")
def build_52(inst_52):
    return run_build(inst_52.instance)


@pytest.fixture(scope="session")
def build_41(inst_41):
    return run_build(inst_41.instance)
