import random
from fractions import Fraction

import pytest

from weylcones import catalog
from weylcones import linalg as la
from weylcones.errors import DomainError
from weylcones.liealg import (
    exp_nilpotent,
    gl,
    invert,
    is_nilpotent,
    jordan_type,
    jordan_type_unipotent,
    log_unipotent,
    random_group_element,
    sp,
    standard_omega,
)
from weylcones.sl2 import (
    alternative_triple,
    canonical_data,
    flag_by_formulas,
    flag_formula_check,
    jm_triple,
    symplectic_perp,
)

CATALOG = [
    ("gl3", (2, 1), None),
    ("sp4", (2, 2), False),
    ("sp4", (2, 2), True),
    ("gl4", (3, 1), None),
    ("sp6", (4, 2), False),
    ("sp6", (4, 2), True),
]


def _diag_entries(h):
    n = len(h)
    assert all(h[i][j] == 0 for i in range(n) for j in range(n) if i != j)
    return sorted(h[i][i] for i in range(n))


# -- jordan types -------------------------------------------------------------------


def test_jordan_type_zero():
    assert jordan_type(la.zeros(4, 4)) == (1, 1, 1, 1)


def test_jordan_type_regular_block():
    x = la.mat([[0, 1, 0], [0, 0, 1], [0, 0, 0]])
    assert jordan_type(x) == (3,)


def test_jordan_type_sp4_square_zero():
    x, alg = catalog.representative("sp4", (2, 2), False)
    assert jordan_type(x) == (2, 2)
    ker = la.nullspace(x)
    im = la.transpose(x)
    assert la.span_eq(la.row_space_signature(ker), la.row_space_signature(list(im)))


def test_jordan_type_rejects_non_nilpotent():
    with pytest.raises(DomainError):
        jordan_type(la.eye(3))


def test_exp_log_roundtrip():
    rng = random.Random(0)
    for _ in range(20):
        n = rng.choice([3, 4])
        x = la.mat(
            [
                [Fraction(rng.randint(-3, 3), rng.randint(1, 2)) if j > i else Fraction(0) for j in range(n)]
                for i in range(n)
            ]
        )
        u = exp_nilpotent(x)
        assert log_unipotent(u) == x
        assert jordan_type_unipotent(u) == jordan_type(x) if is_nilpotent(x) else True


# -- triples ------------------------------------------------------------------------


def test_triple_single_block_size_two():
    x = la.mat([[0, 1], [0, 0]])
    triple = jm_triple(x, gl(2))
    assert _diag_entries(triple.h) == [-1, 1]
    assert triple.verify()


def test_triple_gl3_eigenvalues():
    x, alg = catalog.representative("gl3", (2, 1))
    triple = jm_triple(x, alg)
    assert triple.verify()
    assert sorted(la.nullspace(la.msub(triple.h, la.mscale(k, la.eye(3)))) != [] for k in (-1, 0, 1))
    eigs = []
    for k in (-1, 0, 1):
        eigs += [k] * len(la.nullspace(la.msub(triple.h, la.mscale(k, la.eye(3)))))
    assert sorted(eigs) == [-1, 0, 1]


def test_triple_sp4_eigenvalues_and_membership():
    x, alg = catalog.representative("sp4", (2, 2), False)
    triple = jm_triple(x, alg)
    assert triple.verify()
    assert alg.contains(triple.h) and alg.contains(triple.y)
    eigs = []
    for k in (-1, 1):
        eigs += [k] * len(la.nullspace(la.msub(triple.h, la.mscale(k, la.eye(4)))))
    assert sorted(eigs) == [-1, -1, 1, 1]


@pytest.mark.parametrize("key", CATALOG)
def test_triples_on_random_conjugates(key):
    group, partition, split = key
    x, alg = catalog.representative(group, partition, split)
    rng = random.Random(11)
    for _ in range(8):
        g = random_group_element(alg, rng)
        x2 = la.mmul(la.mmul(g, x), invert(g))
        assert alg.contains(x2)
        triple = jm_triple(x2, alg)
        assert triple.verify()
        assert alg.contains(triple.h) and alg.contains(triple.y)


@pytest.mark.parametrize("key", CATALOG)
def test_grading_independent_of_triple(key):
    group, partition, split = key
    x, alg = catalog.representative(group, partition, split)
    d1 = canonical_data(x, alg)
    d2 = canonical_data(x, alg, rng=random.Random(41))
    if d1.triple.h == d2.triple.h:
        d2 = canonical_data(x, alg, rng=random.Random(97))
    assert la.span_eq(d1.q_basis, d2.q_basis)
    assert la.span_eq(d1.u_basis, d2.u_basis)
    assert la.span_eq(d1.u1_basis, d2.u1_basis)
    assert la.span_eq(d1.u2_basis, d2.u2_basis)
    assert [tuple(f) for f in d1.flag] == [tuple(f) for f in d2.flag]


def test_alternative_triple_differs_but_agrees_on_filtration():
    x, alg = catalog.representative("gl4", (3, 1))
    t1 = jm_triple(x, alg)
    t2 = alternative_triple(x, alg, seed=5)
    assert t2.verify()
    assert t1.h != t2.h


@pytest.mark.parametrize("key", CATALOG)
def test_equivariance_of_canonical_data(key):
    group, partition, split = key
    x, alg = catalog.representative(group, partition, split)
    base = canonical_data(x, alg)
    rng = random.Random(3)
    for _ in range(10):
        g = random_group_element(alg, rng)
        g_inv = invert(g)
        x2 = la.mmul(la.mmul(g, x), g_inv)
        moved = canonical_data(x2, alg)
        # translate the base flag by g and compare exactly
        expected = [
            la.row_space_signature([la.mvec(g, v) for v in sub]) for sub in base.flag
        ]
        assert [tuple(f) for f in moved.flag] == [tuple(f) for f in expected]
        # q is Ad(g)-translated as well
        moved_q = {tuple(v) for v in moved.q_basis}
        translated = la.row_space_signature(
            [
                alg.coords(la.mmul(la.mmul(g, alg.from_coords(v)), g_inv))
                for v in base.q_basis
            ]
        )
        assert moved_q == set(translated)


# -- canonical flags and gradings ------------------------------------------------------


def test_gl3_dims_and_flag():
    x, alg = catalog.representative("gl3", (2, 1))
    data = canonical_data(x, alg)
    d = data.dims()
    assert (d["u"], d["u_prime"], d["u_second"]) == (3, 1, 0)
    names = catalog.named_subspaces(x, alg)
    assert la.span_eq(data.flag[0], names["ImX"])
    assert la.span_eq(data.flag[1], names["KerX"])


def test_sp4_dims_and_flag():
    x, alg = catalog.representative("sp4", (2, 2), False)
    data = canonical_data(x, alg)
    d = data.dims()
    assert (d["u_prime"], d["u_second"]) == (3, 0)
    assert len(data.flag) == 1 and len(data.flag[0]) == 2
    names = catalog.named_subspaces(x, alg)
    assert la.span_eq(data.flag[0], names["KerX"])
    assert la.span_eq(data.flag[0], names["ImX"])


def test_gl4_dims_and_flag():
    x, alg = catalog.representative("gl4", (3, 1))
    data = canonical_data(x, alg)
    assert data.dims()["u_prime"] - data.dims()["u_second"] == 4
    flags = flag_by_formulas(x, (3, 1))
    assert [tuple(f) for f in data.flag] == [tuple(f) for f in flags]


def test_sp6_dims_and_flag():
    x, alg = catalog.representative("sp6", (4, 2), False)
    data = canonical_data(x, alg)
    assert data.dims()["u_prime"] - data.dims()["u_second"] == 5
    assert [len(f) for f in data.flag] == [1, 3, 5]


@pytest.mark.parametrize("key", CATALOG)
def test_flag_formulas(key):
    group, partition, split = key
    x, alg = catalog.representative(group, partition, split)
    report = flag_formula_check(x, alg)
    assert report["flag_matches"] and report["alternative_expressions"]


def test_flag_formulas_on_conjugates():
    rng = random.Random(19)
    for key in CATALOG[:4]:
        group, partition, split = key
        x, alg = catalog.representative(group, partition, split)
        g = random_group_element(alg, rng)
        x2 = la.mmul(la.mmul(g, x), invert(g))
        report = flag_formula_check(x2, alg)
        assert report["flag_matches"] and report["alternative_expressions"]


def test_symplectic_self_duality():
    x, alg = catalog.representative("sp6", (4, 2), False)
    data = canonical_data(x, alg)
    r = len(data.flag)
    for i, sub in enumerate(data.flag):
        assert la.span_eq(symplectic_perp(sub, alg.omega), data.flag[r - 1 - i])


def test_canonical_u_contained_in_diagram_parabolics():
    # the positive part of the grading lies in every membership parabolic
    from weylcones.orbits import enumerate_p_infl

    for key in [("gl3", (2, 1), None), ("gl4", (3, 1), None)]:
        group, partition, split = key
        x, alg = catalog.representative(group, partition, split)
        gamma = exp_nilpotent(x)
        data = canonical_data(x, alg)
        u_vecs = [la.mat_to_vec(m) for m in data.matrices(data.u_basis)]
        diagram = enumerate_p_infl(gamma, alg, probes=30)
        for v in diagram.vertices:
            p_vecs = [la.mat_to_vec(z) for z in v.lie_p()]
            assert la.span_subset(u_vecs, p_vecs)
