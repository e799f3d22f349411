import itertools
import random
from collections import Counter
from fractions import Fraction

import pytest

from weylcones import catalog
from weylcones import linalg as la
from weylcones.errors import DomainError
from weylcones.liealg import (
    exp_nilpotent,
    gl,
    invert,
    jordan_type,
    random_group_element,
    sp,
)
from weylcones.orbits import (
    FlagParabolic,
    enumerate_p_infl,
    generic_induced_oracle,
    induce_partition,
    largest_ngamma,
    levi_embedding,
    min_infl,
    p_infl_member,
    symplectic_collapse,
    transitivity_check,
    truncation_class,
    verify_ngamma,
    _partitions,
)


def compositions(n):
    for k in range(1, n + 1):
        for cuts in itertools.combinations(range(1, n), k - 1):
            parts, prev = [], 0
            for c in list(cuts) + [n]:
                parts.append(c - prev)
                prev = c
            yield tuple(parts)


def symplectic_partitions(m):
    return [
        p
        for p in _partitions(m)
        if all(k % 2 == 0 or v % 2 == 0 for k, v in Counter(p).items())
    ]


# -- flag parabolics ---------------------------------------------------------------


def test_flag_validation():
    alg = gl(3)
    e = la.eye(3)
    with pytest.raises(DomainError):
        FlagParabolic.make(alg, [e])  # not proper
    with pytest.raises(DomainError):
        FlagParabolic.make(alg, [[e[0]], [e[1]]])  # not nested
    p = FlagParabolic.make(alg, [[e[0]], [e[0], e[1]]])
    assert p.dims == (1, 2)


def test_symplectic_flag_must_be_self_dual():
    alg = sp(4)
    e = la.eye(4)
    # an isotropic line needs its perp in the flag
    with pytest.raises(DomainError):
        FlagParabolic.make(alg, [[e[0]]])
    with pytest.raises(DomainError):
        FlagParabolic.make(alg, [[e[0]], [e[0], e[1]]])
    # the line <e1> with its perp <e1,e2,e3> is fine
    p = FlagParabolic.make(alg, [[e[0]], [e[0], e[1], e[2]]])
    assert p.dims == (1, 3)
    # a full isotropic flag closed under perp is fine too
    q = FlagParabolic.make(alg, [[e[0]], [e[0], e[1]], [e[0], e[1], e[2]]])
    assert q.dims == (1, 2, 3)


def test_lie_p_and_n_dimensions():
    alg = gl(4)
    e = la.eye(4)
    p = FlagParabolic.make(alg, [[e[0], e[1]]])
    assert len(p.lie_p()) == 12 and len(p.lie_n()) == 4
    full = FlagParabolic(alg, ())
    assert len(full.lie_p()) == 16 and len(full.lie_n()) == 0
    siegel = FlagParabolic.make(sp(4), [[e[0], e[1]]])
    assert len(siegel.lie_p()) == 7 and len(siegel.lie_n()) == 3


def test_std_subset_bridge():
    e = la.eye(4)
    p = FlagParabolic.make(gl(4), [[e[0]], [e[0], e[1], e[2]]])
    assert p.std_subset() == frozenset({2})
    siegel = FlagParabolic.make(sp(4), [[e[0], e[1]]])
    assert siegel.std_subset() == frozenset({1})
    klingen = FlagParabolic.make(sp(4), [[e[0]], [e[0], e[1], e[2]]])
    assert klingen.std_subset() == frozenset({2})


# -- membership --------------------------------------------------------------------


def test_p_infl_group_always():
    x, alg = catalog.representative("gl3", (2, 1))
    gamma = exp_nilpotent(x)
    assert p_infl_member(gamma, FlagParabolic(alg, ()))


def test_p_infl_gl3_examples():
    x, alg = catalog.representative("gl3", (2, 1))
    gamma = exp_nilpotent(x)
    names = catalog.named_subspaces(x, alg)
    assert p_infl_member(gamma, FlagParabolic.make(alg, [names["V-"]]))
    assert p_infl_member(gamma, FlagParabolic.make(alg, [names["V+"]]))
    borel = FlagParabolic.make(alg, [names["ImX"], names["KerX"]])
    assert not p_infl_member(gamma, borel)


def test_p_infl_requires_membership():
    x, alg = catalog.representative("gl3", (2, 1))
    gamma = exp_nilpotent(x)
    e = la.eye(3)
    p = FlagParabolic.make(alg, [[e[2]]])  # not gamma-stable
    with pytest.raises(DomainError):
        p_infl_member(gamma, p)


# -- the six catalog diagrams -------------------------------------------------------


@pytest.mark.parametrize("key", catalog.ALL_CASE_KEYS)
def test_catalog_diagrams_match_figures(key):
    group, partition, split = key
    x, alg = catalog.representative(group, partition, split)
    gamma = exp_nilpotent(x)
    if group.startswith("sp"):
        diagram, _report = min_infl(gamma, alg, probes=200)
    else:
        diagram = enumerate_p_infl(gamma, alg, probes=200)
    result = catalog.diagram_matches_expected(diagram, group, partition, split, x, alg)
    assert result["ok"], result


def test_full_split_diagram_strictly_contains_refined():
    x, alg = catalog.representative("sp4", (2, 2), True)
    gamma = exp_nilpotent(x)
    refined, report = min_infl(gamma, alg, probes=100)
    assert len(report["full_vertex_dims"]) > len(refined.vertices)
    # the vertices removed are exactly those whose coset meets the anisotropic class
    removed = len(report["full_vertex_dims"]) - len(refined.vertices)
    met_aniso = sum(1 for v in report["met_labels"].values() if "anisotropic" in v)
    assert removed == met_aniso


def test_truncation_class_order_justified_by_shape_inclusion():
    # anisotropic < split because the full membership sets nest by flag shape
    for group, partition in [("sp4", (2, 2)), ("sp6", (4, 2))]:
        shapes = {}
        for split in (False, True):
            x, alg = catalog.representative(group, partition, split)
            gamma = exp_nilpotent(x)
            _refined, report = min_infl(gamma, alg, samples=10, probes=50)
            shapes[split] = Counter(report["full_vertex_dims"])
        assert all(shapes[True][k] >= v for k, v in shapes[False].items())
        assert sum(shapes[True].values()) > sum(shapes[False].values())


def test_upward_closure_checked_internally():
    # enumerate_p_infl asserts closure; reaching here without error is the test
    x, alg = catalog.representative("gl4", (3, 1))
    diagram = enumerate_p_infl(exp_nilpotent(x), alg, probes=50)
    flags = {v.flag for v in diagram.vertices}
    for v in diagram.vertices:
        for k in range(len(v.flag)):
            for sub in itertools.combinations(v.flag, k):
                assert tuple(sorted(sub, key=len)) in flags


def test_equivariance_under_conjugation():
    x, alg = catalog.representative("gl3", (2, 1))
    gamma = exp_nilpotent(x)
    base = enumerate_p_infl(gamma, alg, probes=50)
    rng = random.Random(7)
    for _ in range(10):
        g = random_group_element(alg, rng)
        g_inv = invert(g)
        conj = la.mmul(la.mmul(g, gamma), g_inv)
        moved = enumerate_p_infl(conj, alg, probes=50)
        expected = {
            tuple(la.row_space_signature([la.mvec(g, v) for v in sub]) for sub in vert.flag)
            for vert in base.vertices
        }
        got = {
            tuple(la.row_space_signature(list(sub)) for sub in vert.flag)
            for vert in moved.vertices
        }
        assert expected == got


def test_truncation_class_labels():
    for split, label in [(True, "split"), (False, "anisotropic")]:
        for group, part in [("sp4", (2, 2)), ("sp6", (4, 2))]:
            x, alg = catalog.representative(group, part, split)
            assert truncation_class(x, alg) == label
    x, alg = catalog.representative("gl3", (2, 1))
    assert truncation_class(x, alg) == "single"


# -- N^[gamma] ----------------------------------------------------------------------


def test_verify_ngamma_trivial_group():
    x, alg = catalog.representative("gl3", (2, 1))
    gamma = exp_nilpotent(x)
    names = catalog.named_subspaces(x, alg)
    p = FlagParabolic.make(alg, [names["V-"]])
    assert verify_ngamma(gamma, p, [])


def test_verify_ngamma_full_radical_fails_on_gl3_lower_vertex():
    # the canonical flag moves along the coset, so the full nilradical cannot
    # carry the constancy property; this is what forces the figure arrow to G
    x, alg = catalog.representative("gl3", (2, 1))
    gamma = exp_nilpotent(x)
    names = catalog.named_subspaces(x, alg)
    p = FlagParabolic.make(alg, [names["V-"]])
    assert not verify_ngamma(gamma, p, p.lie_n())
    assert largest_ngamma(gamma, p) == []


def test_verify_ngamma_self_assignments_hold():
    # vertices without arrows keep their own nilradical: property must hold
    x, alg = catalog.representative("gl4", (3, 1))
    gamma = exp_nilpotent(x)
    names = catalog.named_subspaces(x, alg)
    for symbols in [("V-",), ("V+",), ("V-", "V+")]:
        p = FlagParabolic.make(alg, [names[s] for s in symbols])
        assert verify_ngamma(gamma, p, p.lie_n(), samples=30)


def test_verify_ngamma_rejects_non_normal():
    x, alg = catalog.representative("gl3", (2, 1))
    gamma = exp_nilpotent(x)
    names = catalog.named_subspaces(x, alg)
    p = FlagParabolic.make(alg, [names["V-"]])
    bad = [catalog._mat(3, {(1, 3): 1})]  # a line that is not Ad p stable
    with pytest.raises(DomainError):
        verify_ngamma(gamma, p, bad)


def test_split_sp6_custom_groups():
    x, alg = catalog.representative("sp6", (4, 2), True)
    gamma = exp_nilpotent(x)
    names = catalog.named_subspaces(x, alg)
    from weylcones.sl2 import symplectic_perp

    for symbols in [("U-", "U+"), ("W-", "W+"), ("V-", "U-", "U+", "V+")]:
        nprime = catalog.custom_nprime(x, alg, symbols, names)
        p = FlagParabolic.make(alg, [names[s] for s in symbols])
        assert verify_ngamma(gamma, p, nprime, samples=30)
        # exhaustion over flag nilradicals: N' is not one of them
        nv = [la.mat_to_vec(z) for z in nprime]
        for k in range(len(p.flag) + 1):
            for sub in itertools.combinations(p.flag, k):
                perped = {
                    tuple(la.row_space_signature(symplectic_perp(s, alg.omega)))
                    for s in sub
                }
                if perped != set(sub):
                    continue
                radical = FlagParabolic(alg, tuple(sorted(sub, key=len))).lie_n()
                assert not la.span_eq(nv, [la.mat_to_vec(z) for z in radical])


def test_largest_ngamma_finds_custom_candidate():
    x, alg = catalog.representative("sp6", (4, 2), True)
    gamma = exp_nilpotent(x)
    names = catalog.named_subspaces(x, alg)
    p = FlagParabolic.make(alg, [names["U-"], names["U+"]])
    custom = catalog.custom_nprime(x, alg, ("U-", "U+"), names)
    best = largest_ngamma(gamma, p, samples=20, extra_candidates=[custom])
    assert la.span_eq(
        [la.mat_to_vec(z) for z in best], [la.mat_to_vec(z) for z in custom]
    )


# -- induction ----------------------------------------------------------------------


def test_induce_identity_levi():
    assert induce_partition("gl", (3,), [(2, 1)]) == (2, 1)


def test_induce_gl3_examples():
    assert induce_partition("gl", (1, 1, 1), [(1,), (1,), (1,)]) == (3,)
    assert induce_partition("gl", (2, 1), [(2,), (1,)]) == (3,)
    assert induce_partition("gl", (2, 1), [(1, 1), (1,)]) == (2, 1)


def test_induce_dimension_mismatch():
    with pytest.raises(DomainError):
        induce_partition("gl", (2, 1), [(3,), (1,)])
    with pytest.raises(DomainError):
        induce_partition("sp", ((1,), 1), [(1,), (1, 1, 1)])


def test_symplectic_collapse_values():
    assert symplectic_collapse((3, 1)) == (2, 2)
    assert symplectic_collapse((5, 1)) == (4, 2)
    assert symplectic_collapse((3, 3)) == (3, 3)
    assert symplectic_collapse((4, 2)) == (4, 2)


def test_sp4_siegel_oracle_agreement():
    levi = ((2,), 0)
    for part in [(2,), (1, 1)]:
        rule = induce_partition("sp", levi, [part])
        gamma, p, _alg = levi_embedding("sp", levi, [part])
        assert rule == generic_induced_oracle(gamma, p, seed=3)


def test_oracle_on_group_is_jordan_type():
    gamma, p, alg = levi_embedding("gl", (4,), [(3, 1)])
    assert generic_induced_oracle(gamma, p) == (3, 1)


def test_oracle_rule_agreement_gl_n_le_5():
    checked = 0
    for n in range(2, 6):
        for comp in compositions(n):
            if len(comp) == 1:
                continue
            for parts in itertools.product(*[list(_partitions(b)) for b in comp]):
                rule = induce_partition("gl", comp, parts)
                gamma, p, _alg = levi_embedding("gl", comp, parts)
                assert rule == generic_induced_oracle(gamma, p, seed=checked) == rule
                checked += 1
    assert checked > 50


def test_oracle_rule_agreement_sp():
    checked = 0
    for n in (2, 3):
        for total_gl in range(1, n + 1):
            half = n - total_gl
            for comp in compositions(total_gl):
                gl_parts = [list(_partitions(b)) for b in comp]
                sp_parts = [symplectic_partitions(2 * half)] if half else []
                for parts in itertools.product(*(gl_parts + sp_parts)):
                    levi = (tuple(comp), half)
                    rule = induce_partition("sp", levi, list(parts))
                    gamma, p, _alg = levi_embedding("sp", levi, list(parts))
                    assert rule == generic_induced_oracle(gamma, p, seed=7000 + checked)
                    checked += 1
    assert checked >= 20


def test_transitivity_gl_chains():
    assert transitivity_check("gl", (1, 1, 1, 1), (2, 2), [(1,)] * 4)
    assert transitivity_check("gl", (2, 1, 1), (2, 2), [(2,), (1,), (1,)])
    assert transitivity_check("gl", (1, 1, 1), (2, 1), [(1,)] * 3)
    for comp, outer in [((1, 1, 2), (2, 2)), ((1, 2, 1), (3, 1)), ((1, 1, 1, 1), (2, 2))]:
        for parts in itertools.product(*[list(_partitions(b)) for b in comp]):
            assert transitivity_check("gl", comp, outer, list(parts))


def test_transitivity_sp_chains():
    assert transitivity_check("sp", ((1, 1), 0), ((2,), 0), [(1,), (1,)])
    assert transitivity_check("sp", ((1,), 1), ((1,), 1), [(1,), (2,)])
    for parts in itertools.product(_partitions(1), _partitions(1), symplectic_partitions(2)):
        assert transitivity_check("sp", ((1, 1), 1), ((2,), 1), list(parts))


# -- sampling stability ------------------------------------------------------------


def test_oracle_deterministic_and_seed_stable():
    levi = (2, 2)
    parts = [(2,), (2,)]
    gamma, p, _ = levi_embedding("gl", levi, parts)
    vals = {generic_induced_oracle(gamma, p, seed=s) for s in range(20)}
    assert vals == {(4,)}


def test_min_infl_reports_met_labels():
    x, alg = catalog.representative("sp4", (2, 2), False)
    refined, report = min_infl(exp_nilpotent(x), alg, probes=50)
    assert report["label"] == "anisotropic"
    assert all("anisotropic" in v for v in report["met_labels"].values())
