import os

import pytest

from bertinilab.gf import field_new
from bertinilab.hirzebruch import Surface, Bidegree, Section, Monomial, section_basis

FULL = bool(os.environ.get("BERTINILAB_FULL_PROPS"))


def scale(default: int, full: int) -> int:
    return full if FULL else default


def make_section(surface: Surface, bid: Bidegree, mono_coeffs: dict) -> Section:
    """Section from a {(alpha, beta, gamma, delta): coeff} dict."""
    basis = section_basis(surface, bid)
    cs = [surface.field.zero] * len(basis)
    for mono, c in mono_coeffs.items():
        cs[basis.index(Monomial(*mono))] = c
    return Section(surface, bid, tuple(cs))


@pytest.fixture(scope="session")
def F2():
    return field_new(2, 1)


@pytest.fixture(scope="session")
def F3():
    return field_new(3, 1)


@pytest.fixture(scope="session")
def S0(F2):
    return Surface(0, F2)
