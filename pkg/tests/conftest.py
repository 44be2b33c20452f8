import pathlib
import random

import pytest

from torgrowth.laurent import LaurentPoly

DATA = pathlib.Path(__file__).parent / "data"


@pytest.fixture
def trefoil_text() -> str:
    return (DATA / "trefoil.txt").read_text()


@pytest.fixture
def fig8_text() -> str:
    return (DATA / "fig8.txt").read_text()


@pytest.fixture
def hopf_text() -> str:
    return (DATA / "hopf.txt").read_text()


def random_laurent(rng: random.Random, nvars: int, max_terms: int = 3,
                   exp_range: tuple[int, int] = (-2, 2), coeff_max: int = 3) -> LaurentPoly:
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        e = tuple(rng.randint(*exp_range) for _ in range(nvars))
        terms[e] = terms.get(e, 0) + rng.randint(-coeff_max, coeff_max)
    return LaurentPoly(nvars, terms)


def random_nonzero_laurent(rng: random.Random, nvars: int, **kw) -> LaurentPoly:
    while True:
        p = random_laurent(rng, nvars, **kw)
        if not p.is_zero():
            return p
