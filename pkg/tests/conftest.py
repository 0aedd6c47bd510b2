import pathlib
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from pseudo.cfmodule import BimoduleStructure
from pseudo.classical import current_algebra, matrix_algebra
from pseudo.conformal import free_rank_one
from pseudo.polyring import Poly

settings.register_profile(
    "exact",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
    max_examples=60,
)
settings.load_profile("exact")

INPUTS = pathlib.Path(__file__).resolve().parent.parent / "inputs"


@pytest.fixture(scope="session")
def inputs_dir() -> pathlib.Path:
    return INPUTS


@pytest.fixture(scope="session")
def cur1():
    return free_rank_one()


@pytest.fixture(scope="session")
def mat2():
    return current_algebra(matrix_algebra(2))


@pytest.fixture(scope="session")
def cur1_regular(cur1):
    return BimoduleStructure.regular(cur1)


@pytest.fixture(scope="session")
def mat2_regular(mat2):
    return BimoduleStructure.regular(mat2)


def rationals(max_num: int = 4, max_den: int = 3) -> st.SearchStrategy:
    return st.builds(
        Fraction,
        st.integers(min_value=-max_num, max_value=max_num),
        st.integers(min_value=1, max_value=max_den),
    )


def polys(
    variables: tuple[str, ...], max_degree: int = 3, max_terms: int = 4
) -> st.SearchStrategy:
    """Random sparse polynomials over a fixed variable tuple."""
    exponents = st.tuples(
        *[st.integers(min_value=0, max_value=max_degree) for _ in variables]
    )
    term = st.tuples(exponents, rationals())
    return st.lists(term, max_size=max_terms).map(
        lambda pairs: _poly_from_pairs(variables, pairs)
    )


def _poly_from_pairs(variables, pairs) -> Poly:
    total = Poly.zero(variables)
    for exps, coeff in pairs:
        total = total + Poly.monomial(variables, exps, coeff)
    return total
