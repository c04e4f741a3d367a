import pytest
from hypothesis import settings

from defectus import Poly, field_make
from defectus.rng import HashStream

settings.register_profile("suite", max_examples=25, deadline=None,
                          derandomize=True)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def f2():
    return field_make(2, 1)


@pytest.fixture(scope="session")
def f3():
    return field_make(3, 1)


@pytest.fixture(scope="session")
def f5():
    return field_make(5, 1)


@pytest.fixture(scope="session")
def f7():
    return field_make(7, 1)


@pytest.fixture(scope="session")
def f101():
    return field_make(101, 1)


def random_poly(field, nvars, max_degree, stream: HashStream,
                homogeneous=False):
    """Uniform coefficients on every monomial slot (zero draws allowed)."""
    from defectus.polynomials import monomials_exact, monomials_upto
    mons = (monomials_exact(nvars, max_degree) if homogeneous
            else monomials_upto(nvars, max_degree))
    terms = {}
    for m in mons:
        idx = stream.randint(field.q)
        if idx:
            terms[m] = field.element_from_index(idx)
    return Poly(field, nvars, terms)


def random_point(field, nvars, stream: HashStream):
    return tuple(field.element_from_index(stream.randint(field.q))
                 for _ in range(nvars))
