import random

import pytest

from gsft.groupring import (
    GRElem,
    GroupMismatchError,
    augment,
    kappa_project,
    opposite,
    u_element,
    u_multiple,
    render_grelem,
)
from gsft.groups import cyclic, make_group

from conftest import random_grelem


def brute_mul(x, y):
    """Independent convolution oracle: expand all coefficient pairs."""
    g = x.group
    out = [0] * g.order
    for i in range(g.order):
        for j in range(g.order):
            out[g.mul[i][j]] += x.coeffs[i] * y.coeffs[j]
    return GRElem(g, out)


def test_c2_gg_is_e(c2):
    g = GRElem.basis(c2, 1)
    assert g * g == GRElem.one(c2)


def test_c2_e_plus_g_squared(c2):
    x = GRElem.one(c2) + GRElem.basis(c2, 1)
    expect = GRElem(c2, [2, 2])
    assert x * x == expect
    assert brute_mul(x, x) == expect


def test_s4_abc_is_e(s4):
    a = GRElem.from_name(s4, "(143)")
    b = GRElem.from_name(s4, "(123)")
    c = GRElem.from_name(s4, "(12)(34)")
    assert a * b * c == GRElem.one(s4)


def test_mul_matches_brute_oracle(s3, klein):
    rng = random.Random(7)
    for group in (s3, klein):
        for _ in range(30):
            x = random_grelem(rng, group, max_coeff=3, max_terms=3, nonneg=False)
            y = random_grelem(rng, group, max_coeff=3, max_terms=3, nonneg=False)
            assert x * y == brute_mul(x, y)


def test_mul_associative_distributive(s3):
    rng = random.Random(11)
    for _ in range(20):
        x, y, z = (
            random_grelem(rng, s3, max_coeff=2, max_terms=3, nonneg=False)
            for _ in range(3)
        )
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z


def test_group_mismatch(c2, c3):
    with pytest.raises(GroupMismatchError):
        GRElem.one(c2) * GRElem.one(c3)


def test_augment(c2, s4):
    assert augment(u_element(s4)) == 24
    assert augment(GRElem.zero(c2)) == 0
    assert augment(GRElem.basis(c2, 1, 5)) == 5


def test_augment_multiplicative(s3):
    rng = random.Random(3)
    for _ in range(20):
        x = random_grelem(rng, s3, nonneg=False)
        y = random_grelem(rng, s3, nonneg=False)
        assert augment(x * y) == augment(x) * augment(y)
        assert augment(x + y) == augment(x) + augment(y)


def test_kappa_abelian_is_bijective_on_basis(c4):
    for i in c4.elements():
        k = kappa_project(GRElem.basis(c4, i))
        assert sum(map(abs, k.coeffs)) == 1


def test_kappa_trace_property_s4(s4):
    a = GRElem.from_name(s4, "(143)")
    b = GRElem.from_name(s4, "(123)")
    assert kappa_project(a * b) == kappa_project(b * a)
    rng = random.Random(5)
    for _ in range(15):
        x = random_grelem(rng, s4, nonneg=False)
        y = random_grelem(rng, s4, nonneg=False)
        assert kappa_project(x * y) == kappa_project(y * x)


def test_kappa_separates_d_from_e(s4):
    a = GRElem.from_name(s4, "(143)")
    b = GRElem.from_name(s4, "(123)")
    c = GRElem.from_name(s4, "(12)(34)")
    d = GRElem.from_name(s4, "(13)(24)")
    assert kappa_project(a * b * c) == kappa_project(GRElem.one(s4))
    assert kappa_project(a * b * c) != kappa_project(d)


def test_opposite(c4, s4):
    u = u_element(s4)
    assert opposite(u) == u
    sigma = GRElem.basis(c4, 1)
    assert opposite(sigma) == GRElem.basis(c4, 3)
    a = GRElem.from_name(s4, "(143)")
    assert opposite(a) == GRElem.from_name(s4, "(134)")


def test_opposite_antihomomorphism(s3):
    rng = random.Random(13)
    for _ in range(20):
        x = random_grelem(rng, s3, nonneg=False)
        y = random_grelem(rng, s3, nonneg=False)
        assert opposite(x * y) == opposite(y) * opposite(x)
        assert opposite(opposite(x)) == x


def test_positivity_closed_under_product(s3):
    rng = random.Random(17)
    for _ in range(10):
        x = u_element(s3) + random_grelem(rng, s3, nonneg=True)
        y = u_element(s3) + random_grelem(rng, s3, nonneg=True)
        assert x.is_gpositive() and y.is_gpositive()
        assert (x * y).is_gpositive()


def test_u_multiple(c2):
    u = u_element(c2)
    assert u_multiple(u.scale(3)) == 3
    assert u_multiple(GRElem.basis(c2, 1, 5)) is None
    assert u_multiple(GRElem.zero(c2)) == 0


def test_render(c4):
    x = GRElem(c4, [2, 1, 0, -3])
    assert render_grelem(x) == "2*e+g-3*g^3"
    assert render_grelem(GRElem.zero(c4)) == "0"
