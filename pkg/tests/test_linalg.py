import random
from fractions import Fraction

from weylcones import linalg as la


def rand_mat(rng, n, m, lo=-5, hi=5):
    return la.mat([[Fraction(rng.randint(lo, hi), rng.randint(1, 3)) for _ in range(m)] for _ in range(n)])


def test_rref_identity():
    m = la.eye(3)
    red, pivots = la.rref(m)
    assert red == m
    assert pivots == (0, 1, 2)


def test_rank_and_det():
    m = la.mat([[1, 2], [2, 4]])
    assert la.rank(m) == 1
    assert la.det(m) == 0
    m2 = la.mat([[1, 2], [3, 5]])
    assert la.det(m2) == -1
    assert la.rank(m2) == 2


def test_solve_and_nullspace_consistency():
    rng = random.Random(7)
    for _ in range(25):
        a = rand_mat(rng, 3, 4)
        ns = la.nullspace(a)
        for v in ns:
            assert all(x == 0 for x in la.mvec(a, v))
        x = la.vec([rng.randint(-3, 3) for _ in range(4)])
        b = la.mvec(a, x)
        sol = la.solve(a, b)
        assert sol is not None
        assert la.mvec(a, sol) == b
        assert la.rank(a) + len(ns) == 4


def test_solve_inconsistent():
    a = la.mat([[1, 0], [1, 0]])
    assert la.solve(a, la.vec([1, 2])) is None


def test_span_operations():
    u = la.vec([1, 0, 0])
    v = la.vec([0, 1, 0])
    w = la.vec([1, 1, 0])
    assert la.span_eq([u, v], [u, w])
    assert la.span_contains([u, v], w)
    assert not la.span_contains([u], v)
    inter = la.span_intersect([u, v], [w, la.vec([0, 0, 1])])
    assert la.span_eq(inter, [w])
    s = la.span_sum([u], [v])
    assert la.span_dim(s) == 2


def test_intersection_random_dims():
    rng = random.Random(3)
    for _ in range(20):
        a = [la.vec([rng.randint(-3, 3) for _ in range(5)]) for _ in range(3)]
        b = [la.vec([rng.randint(-3, 3) for _ in range(5)]) for _ in range(3)]
        inter = la.span_intersect(a, b)
        for v in inter:
            assert la.span_contains(a, v) and la.span_contains(b, v)
        dim_sum = la.span_dim(la.span_sum(a, b))
        assert la.span_dim(a) + la.span_dim(b) == dim_sum + len(inter)


def test_orthogonal_complement_and_projection():
    g = la.eye(3)
    basis = [la.vec([1, 1, 0])]
    comp = la.orthogonal_complement(basis, g)
    assert la.span_dim(comp) == 2
    for v in comp:
        assert la.dot(v, basis[0]) == 0
    p = la.project_onto(la.vec([1, 0, 0]), basis, g)
    assert p == la.vec([Fraction(1, 2), Fraction(1, 2), 0])


def test_gram_det_orthogonal_factorization():
    g = la.eye(4)
    a = [la.vec([1, 1, 0, 0])]
    b = [la.vec([0, 0, 1, 2]), la.vec([0, 0, 0, 1])]
    combined = la.gram_det(a + b, g)
    assert combined == la.gram_det(a, g) * la.gram_det(b, g)


def test_mat_vec_roundtrip():
    m = la.mat([[1, 2, 3], [4, 5, 6]])
    assert la.vec_to_mat(la.mat_to_vec(m), 2, 3) == m
