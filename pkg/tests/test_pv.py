import random
from fractions import Fraction

import pytest

from weylcones import catalog
from weylcones import linalg as la
from weylcones.errors import DomainError
from weylcones.liealg import exp_nilpotent, invert, random_group_element
from weylcones.orbits import min_infl
from weylcones.sl2 import canonical_data
from weylcones.pv import (
    RelativeInvariant,
    b_forms,
    build_pv,
    catalog_invariants,
    dense_orbit_check,
    generic_torus,
    is_rational_square,
    isotropic_directions,
    modular_character,
    quotient_coords,
    regularity_check,
    split_extra_subspaces,
    _infinitesimal_character,
)

CATALOG = [
    ("gl3", (2, 1), None),
    ("sp4", (2, 2), False),
    ("sp4", (2, 2), True),
    ("gl4", (3, 1), None),
    ("sp6", (4, 2), False),
    ("sp6", (4, 2), True),
]

EXPECTED_DIM = {"gl3": 1, "sp4": 3, "gl4": 4, "sp6": 5}


def make_pv(key):
    group, partition, split = key
    x, alg = catalog.representative(group, partition, split)
    data = canonical_data(x, alg)
    return x, alg, build_pv(data)


def xi_of_x(x, alg, pv):
    return quotient_coords(alg.coords(x), pv.basis, pv.data.u2_basis)


# -- construction -------------------------------------------------------------------


@pytest.mark.parametrize("key", CATALOG)
def test_pv_dimensions(key):
    _x, _alg, pv = make_pv(key)
    assert pv.dim == EXPECTED_DIM[key[0]]


@pytest.mark.parametrize("key", CATALOG)
def test_action_is_representation(key):
    # verified on construction; build_pv raises on failure
    make_pv(key)


def test_pv_dim_equals_grading_count():
    for key in CATALOG:
        group, partition, split = key
        x, alg = catalog.representative(group, partition, split)
        data = canonical_data(x, alg)
        pv = build_pv(data)
        assert pv.dim == data.dims()["u_prime"] - data.dims()["u_second"]


# -- dense orbits --------------------------------------------------------------------


@pytest.mark.parametrize("key", CATALOG)
def test_zero_is_never_generic(key):
    _x, _alg, pv = make_pv(key)
    generic, _sd = dense_orbit_check(pv, [0] * pv.dim)
    assert not generic


@pytest.mark.parametrize("key", CATALOG)
def test_image_of_x_is_generic(key):
    x, alg, pv = make_pv(key)
    generic, _sd = dense_orbit_check(pv, xi_of_x(x, alg, pv))
    assert generic


def test_sp4_rank_one_form_not_generic():
    key = ("sp4", (2, 2), False)
    x, alg, pv = make_pv(key)
    # find a coordinate vector whose discriminant vanishes: a rank-1 form
    inv = catalog_invariants(pv)[0]
    rng = random.Random(1)
    found = 0
    for _ in range(200):
        xi = [Fraction(rng.randint(-4, 4)) for _ in range(pv.dim)]
        if any(xi) and inv.poly.eval(xi) == 0:
            generic, _sd = dense_orbit_check(pv, xi)
            assert not generic
            found += 1
            if found >= 5:
                break
    assert found >= 5


def test_projection_of_dense_class_is_generic():
    # images of random dense-class elements are generic points
    rng = random.Random(5)
    for key in CATALOG[:4]:
        x, alg, pv = make_pv(key)
        for _ in range(20):
            g = random_group_element(alg, rng)
            x2 = la.mmul(la.mmul(g, x), invert(g))
            try:
                xi = quotient_coords(alg.coords(x2), pv.basis, pv.data.u2_basis)
            except DomainError:
                continue  # the conjugate left u'; not a point of this chart
            generic, _sd = dense_orbit_check(pv, xi)
            assert generic


# -- relative invariants ---------------------------------------------------------------


@pytest.mark.parametrize("key", CATALOG)
def test_catalog_invariant_count(key):
    _x, _alg, pv = make_pv(key)
    invs = catalog_invariants(pv)
    assert len(invs) == catalog.EXPECTED_PV[(key[0], key[1])]["invariants"]


@pytest.mark.parametrize("key", CATALOG)
def test_invariants_are_infinitesimally_invariant(key):
    # _infinitesimal_character raises unless W.p = c p exactly for every W
    _x, _alg, pv = make_pv(key)
    for inv in catalog_invariants(pv):
        assert _infinitesimal_character(pv, inv.poly) == inv.character


@pytest.mark.parametrize("key", CATALOG)
def test_invariants_vanish_on_non_generic_points(key):
    _x, _alg, pv = make_pv(key)
    invs = catalog_invariants(pv)
    rng = random.Random(23)
    seen = 0
    for _ in range(400):
        xi = [Fraction(rng.randint(-3, 3)) for _ in range(pv.dim)]
        generic, _sd = dense_orbit_check(pv, xi)
        if not generic:
            seen += 1
            assert any(inv.poly.eval(xi) == 0 for inv in invs)
    assert seen > 10


def test_gl3_invariant_is_coordinate():
    key = ("gl3", (2, 1), None)
    _x, _alg, pv = make_pv(key)
    inv = catalog_invariants(pv)[0]
    assert inv.poly.degree() == 1


def test_sp4_character_proportional_to_modular_character():
    key = ("sp4", (2, 2), False)
    x, alg, pv = make_pv(key)
    inv = catalog_invariants(pv)[0]
    delta = modular_character(pv.data, 2)  # u' = u'' + the weight-2 piece here
    # d(chi) and delta are proportional by an exact rational scalar
    ratio = None
    for a, b in zip(inv.character, delta):
        if b == 0:
            assert a == 0
            continue
        r = Fraction(a, 1) / b
        assert ratio is None or r == ratio
        ratio = r
    assert ratio is not None and ratio != 0


# -- regularity ------------------------------------------------------------------------


def test_regularity_rejects_zero_poly():
    key = ("gl3", (2, 1), None)
    _x, _alg, pv = make_pv(key)
    from weylcones.exppoly import Poly

    zero = RelativeInvariant(Poly(pv.dim), tuple(), "zero")
    with pytest.raises(DomainError):
        regularity_check(pv, zero)


@pytest.mark.parametrize("key", CATALOG)
def test_regularity_of_basic_invariant_product(key):
    _x, _alg, pv = make_pv(key)
    invs = catalog_invariants(pv)
    poly = invs[0].poly
    char = invs[0].character
    for inv in invs[1:]:
        poly = poly * inv.poly
        char = la.vadd(char, inv.character)
    product = RelativeInvariant(poly, char, "product")
    assert regularity_check(pv, product)


def test_gl3_and_sp4_single_invariants_regular():
    for key in [("gl3", (2, 1), None), ("sp4", (2, 2), False)]:
        _x, _alg, pv = make_pv(key)
        assert regularity_check(pv, catalog_invariants(pv)[0])


# -- symmetric forms ---------------------------------------------------------------------


def test_rational_square_classifier():
    assert is_rational_square(Fraction(4))
    assert is_rational_square(Fraction(9, 16))
    assert not is_rational_square(Fraction(-4))
    assert not is_rational_square(Fraction(2))
    assert not is_rational_square(Fraction(0))


@pytest.mark.parametrize(
    "group,partition", [("sp4", (2, 2)), ("sp6", (4, 2))]
)
def test_b_forms_split_classification(group, partition):
    for split in (True, False):
        x, alg = catalog.representative(group, partition, split)
        forms = b_forms(x, alg)
        assert forms.split == split
        assert forms.gram_upper == la.transpose(forms.gram_upper)


def test_b_forms_rejects_gl():
    x, alg = catalog.representative("gl3", (2, 1))
    with pytest.raises(DomainError):
        b_forms(x, alg)


def test_isotropic_directions_are_isotropic():
    x, alg = catalog.representative("sp4", (2, 2), True)
    forms = b_forms(x, alg)
    for d in isotropic_directions(forms.gram_upper):
        val = la.dot(la.mvec(forms.gram_upper, d), d)
        assert val == 0


def test_split_subspace_properties():
    # X U+ = U+^perp = U- is asserted inside; also check b- nonisotropic line (sp6)
    x, alg = catalog.representative("sp6", (4, 2), True)
    extras = split_extra_subspaces(x, alg)
    assert [len(s) for s in extras] == [2, 4, 2, 4]
    names = catalog.named_subspaces(x, alg)
    # Im X / V0 is a nonisotropic line for b+: Im X is not among U+, W+
    for s in (extras[1], extras[3]):
        assert not la.span_eq(s, names["ImX"])


def test_anisotropic_has_no_split_subspaces():
    x, alg = catalog.representative("sp4", (2, 2), False)
    assert split_extra_subspaces(x, alg) == []


# -- modular characters ---------------------------------------------------------------


@pytest.mark.parametrize("key", CATALOG)
def test_modular_character_additivity(key):
    group, partition, split = key
    x, alg = catalog.representative(group, partition, split)
    data = canonical_data(x, alg)
    whole = modular_character(data, 1)          # u
    low = modular_character(data, 1, 2)         # u / u'
    mid = modular_character(data, 2, 3)         # u' / u''
    high = modular_character(data, 3)           # u''
    assert whole == la.vadd(la.vadd(low, mid), high)


def test_modular_character_zero_space():
    x, alg = catalog.representative("gl3", (2, 1))
    data = canonical_data(x, alg)
    assert all(v == 0 for v in modular_character(data, 9))


def test_modular_character_gl3_u_is_positive_root_sum():
    # trace of ad on u = sum of the three positive-weight root functionals:
    # on a diagonal Levi element diag(a, b, c) it evaluates to 2a - 2c... the
    # catalog basis is weight-sorted so check against an explicit element
    x, alg = catalog.representative("gl3", (2, 1))
    data = canonical_data(x, alg)
    delta = modular_character(data, 1)
    # pick the Levi element h = diag(1, 0, -1) = the triple's neutral element
    h_coords = la.solve(la.mat_vecs_as_columns(data.levi_basis), alg.coords(data.triple.h))
    assert h_coords is not None
    val = sum((c * d for c, d in zip(h_coords, delta)), Fraction(0))
    # ad h traces: weights of u = {E12: 1-0, E13: 1-(-1), E23: 0-(-1)} sum = 4
    assert val == 4


def test_modular_character_requires_stable_window():
    x, alg = catalog.representative("gl3", (2, 1))
    data = canonical_data(x, alg)
    with pytest.raises(DomainError):
        modular_character(data, -2)


# -- generic tori -----------------------------------------------------------------------


@pytest.mark.parametrize("key", CATALOG)
def test_generic_torus_dimensions(key):
    group, partition, split = key
    x, alg, pv = None, None, None
    x, alg = catalog.representative(group, partition, split)
    pv = build_pv(canonical_data(x, alg))
    xi = xi_of_x(x, alg, pv)
    expected = catalog.EXPECTED_PV[(group, partition)]["torus_dim"][split]
    assert generic_torus(pv, xi)["dim"] == expected


def test_generic_torus_rejects_non_generic():
    x, alg = catalog.representative("sp4", (2, 2), False)
    pv = build_pv(canonical_data(x, alg))
    with pytest.raises(DomainError):
        generic_torus(pv, [0] * pv.dim)


def test_gl3_torus_acts_by_homotheties():
    x, alg = catalog.representative("gl3", (2, 1))
    data = canonical_data(x, alg)
    pv = build_pv(data)
    xi = xi_of_x(x, alg, pv)
    designated = (data.flag[1], data.flag[0])  # V+ / V-
    report = generic_torus(pv, xi, designated=designated)
    assert report["dim"] == 1
    assert report["homothety"]
    assert any(m != la.mscale(0, m) for m in report["designated_action"])


def test_sp4_split_torus_acts_on_quotient():
    x, alg = catalog.representative("sp4", (2, 2), True)
    data = canonical_data(x, alg)
    pv = build_pv(data)
    xi = xi_of_x(x, alg, pv)
    designated = (tuple(la.eye(4)), data.flag[0])  # V / V0
    report = generic_torus(pv, xi, designated=designated)
    assert report["dim"] == 1
    # the split special orthogonal action is not a homothety
    assert not report["homothety"]


# -- dimension bookkeeping across the refined diagram ------------------------------------


@pytest.mark.parametrize("group,partition", [("sp4", (2, 2)), ("sp6", (4, 2))])
def test_subquotient_dimension_split(group, partition):
    # dim V = dim V_P' + dim V^P' for diagram vertices with N' inside u'
    for split in (False, True):
        x, alg = catalog.representative(group, partition, split)
        gamma = exp_nilpotent(x)
        data = canonical_data(x, alg)
        pv = build_pv(data)
        u1 = [la.mat_to_vec(m) for m in data.matrices(data.u1_basis)]
        u2 = [la.mat_to_vec(m) for m in data.matrices(data.u2_basis)]
        diagram, _report = min_infl(gamma, alg, samples=10, probes=50)
        for i, v in enumerate(diagram.vertices):
            nbasis = diagram.ngamma_basis(i)
            nvecs = [la.mat_to_vec(z) for z in nbasis]
            if not la.span_subset(nvecs, u1):
                continue
            inside = la.span_intersect(la.span_sum(nvecs, u2), u1)
            dim_lower = la.span_dim(inside) - la.span_dim(u2)
            assert 0 <= dim_lower <= pv.dim
