import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from getzler.exterior import FormElement

rationals = st.fractions(min_value=-6, max_value=6, max_denominator=4)


@st.composite
def forms(draw, n, degrees=None, max_terms=4):
    degrees = list(range(n + 1)) if degrees is None else list(degrees)
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        d = draw(st.sampled_from(degrees))
        idx = draw(st.lists(st.integers(1, n), min_size=d, max_size=d, unique=True))
        terms[tuple(sorted(idx))] = draw(rationals)
    return FormElement(n, terms)


@pytest.fixture
def rng():
    return random.Random(1234)


def theta_model(n=2, theta=Fraction(3)):
    from getzler.product import build_model
    return build_model(n, 0, {(1, 2): FormElement.basis(n, 1, 2, coeff=theta)})
