import random

import pytest

from gsft.groups import cyclic, dihedral, make_group, product, symmetric
from gsft.groupring import GRElem
from gsft.polymat import GRPoly, MatGR, MatGRPoly


@pytest.fixture(scope="session")
def c2():
    return make_group(cyclic(2))


@pytest.fixture(scope="session")
def c3():
    return make_group(cyclic(3))


@pytest.fixture(scope="session")
def c4():
    return make_group(cyclic(4))


@pytest.fixture(scope="session")
def klein():
    return make_group(product(cyclic(2), cyclic(2)))


@pytest.fixture(scope="session")
def s3():
    return make_group(symmetric(3))


@pytest.fixture(scope="session")
def s4():
    return make_group(symmetric(4))


@pytest.fixture(scope="session")
def d4():
    return make_group(dihedral(4))


def random_grelem(rng: random.Random, group, max_coeff=2, max_terms=2, nonneg=True):
    x = GRElem.zero(group)
    for _ in range(rng.randint(0, max_terms)):
        idx = rng.randrange(group.order)
        c = rng.randint(1, max_coeff)
        if not nonneg and rng.random() < 0.5:
            c = -c
        x.coeffs[idx] += c
    return x


def random_matgr(rng: random.Random, group, size, max_coeff=2, max_terms=2, nonneg=True):
    return MatGR(
        group,
        [
            [random_grelem(rng, group, max_coeff, max_terms, nonneg) for _ in range(size)]
            for _ in range(size)
        ],
    )


def random_nzc_poly_matrix(rng: random.Random, group, size, max_deg=3, max_coeff=2):
    """Random NZC matrix over Z+G[t]: constant terms only above the
    diagonal, so the constant digraph is acyclic by construction."""
    rows = []
    for i in range(size):
        row = []
        for j in range(size):
            terms = {}
            for _ in range(rng.randint(0, 2)):
                deg = rng.randint(0 if j > i else 1, max_deg)
                coeff = random_grelem(rng, group, max_coeff, 1, nonneg=True)
                if coeff.is_zero():
                    continue
                terms[deg] = terms.get(deg, GRElem.zero(group)) + coeff
            row.append(GRPoly(group, terms))
        rows.append(row)
    return MatGRPoly(group, rows)
