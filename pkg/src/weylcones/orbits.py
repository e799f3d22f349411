"""Induction of conjugacy classes and membership diagrams over flag varieties.

A parabolic is the stabiliser of a flag of subspaces (self-dual in the
symplectic case).  The inflation-membership test for gamma in P asks that the
range of Ad(gamma) - id on Lie(P) contain the nilradical; the set of all such
parabolics containing a fixed unipotent gamma is closed upward and finite,
and is enumerated here from the modular lattice generated by kernels and
images of powers of X = log(gamma), augmented by the isotropic-line
subspaces in split symplectic cases and probed by randomised flags.

Induction of unipotent classes is computed combinatorially (padded sums of
partitions, with the symplectic dominance collapse) and certified against a
generic-coset-element oracle.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg as la
from .errors import CompletenessError, ConfigurationError, ConsistencyError, DomainError
from .liealg import (
    MatrixLieAlgebra,
    exp_nilpotent,
    gl,
    is_nilpotent,
    jordan_type,
    jordan_type_unipotent,
    log_unipotent,
    mat_power,
    sp,
)
from .sl2 import canonical_data, flag_by_formulas, symplectic_perp

Subspace = tuple[la.Vec, ...]


def subspace_sig(vectors) -> Subspace:
    return la.row_space_signature(list(vectors))


# ---------------------------------------------------------------------------------
# flags and their stabilisers


@dataclass(frozen=True)
class FlagParabolic:
    """Stabiliser of a flag of proper nonzero subspaces, as exact data."""

    alg: MatrixLieAlgebra
    flag: tuple[Subspace, ...]

    @staticmethod
    def make(alg: MatrixLieAlgebra, subspaces) -> "FlagParabolic":
        sigs = sorted({subspace_sig(s) for s in subspaces}, key=len)
        for s in sigs:
            if not 0 < len(s) < alg.n:
                raise DomainError("flag members must be proper and nonzero")
        for a, b in itertools.pairwise(sigs):
            if not la.span_subset(a, b):
                raise DomainError("flag members must be nested")
        if alg.kind == "sp":
            perps = {subspace_sig(symplectic_perp(s, alg.omega)) for s in sigs}
            if perps != set(sigs):
                raise DomainError("symplectic flags must be self-dual")
        return FlagParabolic(alg, tuple(sigs))

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.flag)

    def is_contained_in(self, other: "FlagParabolic") -> bool:
        """P <= P' iff the flag of P refines (contains) the flag of P'."""
        return set(other.flag) <= set(self.flag)

    def stabilises(self, g: la.Mat) -> bool:
        for s in self.flag:
            for v in s:
                if not la.span_contains(s, la.mvec(g, v)):
                    return False
        return True

    def _constraint_rows(self, strict: bool) -> list[la.Vec]:
        """Linear conditions on vec(Z): Z V_i <= V_i (resp. Z V_i <= V_(i-1))."""
        n = self.alg.n
        rows = []
        chain = list(self.flag)
        lower: list[Subspace] = [chain[i - 1] if i else () for i in range(len(chain))]
        pairs = list(zip(chain, lower if strict else chain))
        if strict:
            pairs.append(((tuple(la.eye(n))), chain[-1] if chain else ()))
        for source, target in pairs:
            ann = la.nullspace(tuple(target)) if target else list(la.eye(n))
            for k_vec in ann:
                for b_vec in source:
                    row = [Fraction(0)] * (n * n)
                    for i in range(n):
                        if k_vec[i] == 0:
                            continue
                        for j in range(n):
                            if b_vec[j] != 0:
                                row[i * n + j] += k_vec[i] * b_vec[j]
                    rows.append(tuple(row))
        return rows

    def _member_rows(self) -> list[la.Vec]:
        n = self.alg.n
        rows = []
        if self.alg.kind == "sp":
            omega = self.alg.omega
            for i in range(n):
                for j in range(n):
                    row = [Fraction(0)] * (n * n)
                    for k in range(n):
                        row[k * n + i] += omega[k][j]
                        row[k * n + j] += omega[i][k]
                    rows.append(tuple(row))
        return rows

    def lie_p(self) -> list[la.Mat]:
        rows = self._constraint_rows(strict=False) + self._member_rows()
        n = self.alg.n
        return [la.vec_to_mat(v, n, n) for v in la.nullspace(tuple(rows))] if rows else list(gl(n).basis)

    def lie_n(self) -> list[la.Mat]:
        if not self.flag:
            return []
        rows = self._constraint_rows(strict=True) + self._member_rows()
        n = self.alg.n
        return [la.vec_to_mat(v, n, n) for v in la.nullspace(tuple(rows))]

    def std_subset(self) -> frozenset[int]:
        """Simple-root subset of the standard parabolic with this flag type."""
        n = self.alg.n
        if self.alg.kind == "gl":
            cuts = set(self.dims)
            return frozenset(range(1, n)) - cuts
        half = n // 2
        cuts = {d for d in self.dims if d <= half}
        return frozenset(range(1, half + 1)) - cuts


def p_infl_member(gamma: la.Mat, p: FlagParabolic) -> bool:
    """Does the range of Ad(gamma) - id on Lie(P) contain Lie(N)?"""
    if not p.stabilises(gamma):
        raise DomainError("gamma does not lie in the parabolic")
    if p.alg.kind == "sp" and not p.alg.group_contains(gamma):
        raise DomainError("gamma does not preserve the symplectic form")
    gamma_inv = _inverse(gamma)
    cols = []
    for z in p.lie_p():
        img = la.msub(la.mmul(la.mmul(gamma, z), gamma_inv), z)
        cols.append(la.mat_to_vec(img))
    range_basis = la.row_space_signature(cols)
    n_vecs = [la.mat_to_vec(z) for z in p.lie_n()]
    return la.span_subset(n_vecs, range_basis)


def _inverse(g: la.Mat) -> la.Mat:
    from .liealg import invert

    return invert(g)


# ---------------------------------------------------------------------------------
# the membership diagram


@dataclass
class InflDiagram:
    """Finite poset of flag parabolics containing gamma, with decorations."""

    alg: MatrixLieAlgebra
    gamma: la.Mat
    vertices: list[FlagParabolic]
    hasse: list[tuple[int, int]]                    # (smaller flag, larger flag) covers
    ngamma: dict[int, tuple]                        # idx -> ("self",) | ("parabolic", idx) | ("custom", basis)
    truncation_label: str

    def index_of(self, p: FlagParabolic) -> int:
        return self.vertices.index(p)

    def arrows(self) -> dict[int, int]:
        return {
            i: spec[1]
            for i, spec in self.ngamma.items()
            if spec[0] == "parabolic" and spec[1] != i
        }

    def subdiagram(self, keep: list[int]) -> "InflDiagram":
        """Induced diagram on a vertex subset (poset order recomputed)."""
        old = {v: i for i, v in enumerate(keep)}
        verts = [self.vertices[i] for i in keep]
        hasse = _hasse_edges(verts)
        ngamma = {}
        for new_i, old_i in enumerate(keep):
            spec = self.ngamma.get(old_i, ("self",))
            if spec[0] == "parabolic":
                tgt = spec[1]
                ngamma[new_i] = ("parabolic", old[tgt]) if tgt in old else ("custom", None)
            else:
                ngamma[new_i] = spec
        return InflDiagram(self.alg, self.gamma, verts, hasse, ngamma, self.truncation_label)

    def vertex_dims(self) -> list[tuple[int, ...]]:
        return sorted(v.dims for v in self.vertices)

    def ngamma_basis(self, i: int) -> list[la.Mat]:
        """The group N^[gamma] at vertex i, as a matrix basis."""
        spec = self.ngamma[i]
        if spec[0] == "self":
            return self.vertices[i].lie_n()
        if spec[0] == "parabolic":
            return self.vertices[spec[1]].lie_n()
        return list(spec[1] or [])

    def ngamma_key(self, i: int):
        """Canonical signature of N^[gamma] at vertex i (groups equal iff keys equal)."""
        basis = self.ngamma_basis(i)
        return tuple(la.row_space_signature([la.mat_to_vec(z) for z in basis]))

    def standard_assignment(self) -> list[tuple[frozenset[int], object]]:
        """(standard-parabolic subset, N^[gamma] key) pairs for the truncation
        characteristic functions; flags are moved to standard position by type."""
        return [(v.std_subset(), self.ngamma_key(i)) for i, v in enumerate(self.vertices)]

    def override_ngamma(self, i: int, basis: list[la.Mat]):
        self.ngamma[i] = ("custom", list(basis))

    def to_json(self) -> dict:
        fr = lambda vec: [str(x) for x in vec]
        verts = []
        for i, v in enumerate(self.vertices):
            spec = self.ngamma[i]
            if spec[0] == "parabolic":
                ng = {"kind": "parabolic", "target": spec[1]}
            elif spec[0] == "self":
                ng = {"kind": "self"}
            else:
                ng = {
                    "kind": "custom",
                    "basis": [[fr(row) for row in z] for z in (spec[1] or [])],
                }
            verts.append(
                {
                    "dims": list(v.dims),
                    "flag": [[fr(vec) for vec in sub] for sub in v.flag],
                    "ngamma": ng,
                }
            )
        return {
            "truncation_class": self.truncation_label,
            "vertices": verts,
            "hasse": [list(e) for e in self.hasse],
            "arrows": [[i, j] for i, j in sorted(self.arrows().items())],
        }

    def to_dot(self) -> str:
        lines = ["digraph infl {", "  rankdir=BT;"]
        for i, v in enumerate(self.vertices):
            label = "{" + ",".join(str(d) for d in v.dims) + "}" if v.flag else "G"
            shape = ' shape=box' if self.ngamma[i][0] == "custom" else ""
            lines.append(f'  v{i} [label="{label}"{shape}];')
        arrows = self.arrows()
        for i, j in self.hasse:
            lines.append(f"  v{j} -> v{i} [dir=none];")
        for i, j in sorted(arrows.items()):
            lines.append(f'  v{i} -> v{j} [style=dashed, label="N\'"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _hasse_edges(vertices: list[FlagParabolic]) -> list[tuple[int, int]]:
    less = {}
    for i, a in enumerate(vertices):
        for j, b in enumerate(vertices):
            if i != j and b.is_contained_in(a) and a != b:
                # a has the smaller flag: P_a >= P_b ... store strict flag inclusion
                less.setdefault(j, set()).add(i)
    edges = []
    for j, ups in less.items():
        for i in ups:
            # cover: no k with flag(vertices[j]) > flag(k) > flag(vertices[i])
            if not any(k in less.get(j, set()) and i in less.get(k, set()) for k in range(len(vertices)) if k not in (i, j)):
                edges.append((i, j))
    return sorted(edges)


def _ker(x, k):
    return subspace_sig(la.nullspace(mat_power(x, k)))


def _im(x, k):
    return subspace_sig(la.transpose(mat_power(x, k)))


def _x_stable(x: la.Mat, s: Subspace) -> bool:
    return all(la.span_contains(s, la.mvec(x, v)) for v in s)


def candidate_pool(x: la.Mat, alg: MatrixLieAlgebra, extra=()) -> list[Subspace]:
    """Closure of {Ker X^i, Im X^j} + extra under sum, intersection, perp and X."""
    n = alg.n
    pool: set[Subspace] = set()
    for k in range(1, n):
        for s in (_ker(x, k), _im(x, k)):
            if 0 < len(s) < n:
                pool.add(s)
    for s in extra:
        sig = subspace_sig(s)
        if 0 < len(sig) < n:
            pool.add(sig)
    changed = True
    while changed:
        changed = False
        current = sorted(pool)
        for a, b in itertools.combinations(current, 2):
            for s in (
                subspace_sig(la.span_sum(a, b)),
                subspace_sig(la.span_intersect(a, b)),
            ):
                if 0 < len(s) < n and s not in pool:
                    pool.add(s)
                    changed = True
        for a in current:
            images = [subspace_sig([la.mvec(x, v) for v in a])]
            if alg.kind == "sp":
                images.append(subspace_sig(symplectic_perp(a, alg.omega)))
            for s in images:
                if 0 < len(s) < n and s not in pool:
                    pool.add(s)
                    changed = True
        if len(pool) > 64:
            raise ConsistencyError("candidate subspace pool failed to stay small")
    return sorted(pool)


def _chains(pool: list[Subspace], alg: MatrixLieAlgebra, x: la.Mat) -> list[FlagParabolic]:
    stable = [s for s in pool if _x_stable(x, s)]
    by_dim = sorted(stable, key=len)
    chains: list[tuple[Subspace, ...]] = [()]
    for s in by_dim:
        new = []
        for c in chains:
            if not c or (len(c[-1]) < len(s) and la.span_subset(c[-1], s)):
                new.append(c + (s,))
        chains.extend(new)
    out = []
    seen = set()
    for c in chains:
        if not c:
            members = frozenset()
        else:
            members = frozenset(c)
        if members in seen:
            continue
        seen.add(members)
        if alg.kind == "sp":
            perped = frozenset(subspace_sig(symplectic_perp(s, alg.omega)) for s in members)
            if perped != members:
                continue
        try:
            out.append(FlagParabolic.make(alg, members) if members else FlagParabolic(alg, ()))
        except DomainError:
            continue
    return out


def enumerate_p_infl(
    gamma: la.Mat,
    alg: MatrixLieAlgebra,
    extra_subspaces=(),
    probes: int = 500,
    seed: int = 0xC0FFEE,
    truncation_label: str = "single",
) -> InflDiagram:
    """All flag parabolics P with gamma in P^infl, as a decorated Hasse diagram."""
    x = log_unipotent(gamma)
    pool = candidate_pool(x, alg, extra_subspaces)
    vertices = [p for p in _chains(pool, alg, x) if p.stabilises(gamma) and p_infl_member(gamma, p)]
    vertices.sort(key=lambda p: (len(p.flag), p.dims, p.flag))

    # upward closure: every subflag stabiliser must already be present
    vertex_set = {v.flag for v in vertices}
    for v in vertices:
        for k in range(len(v.flag)):
            for sub in itertools.combinations(v.flag, k):
                if alg.kind == "sp":
                    perped = {subspace_sig(symplectic_perp(s, alg.omega)) for s in sub}
                    if perped != set(sub):
                        continue
                assert tuple(sorted(sub, key=len)) in vertex_set, "diagram not closed upward"

    _probe_completeness(gamma, x, alg, vertices, probes, seed)

    data = canonical_data(x, alg)
    u1 = [la.mat_to_vec(m) for m in data.matrices(data.u1_basis)]
    ngamma = {i: _ngamma_rule(v, vertices, u1) for i, v in enumerate(vertices)}
    return InflDiagram(alg, gamma, vertices, _hasse_edges(vertices), ngamma, truncation_label)


def _ngamma_rule(p: FlagParabolic, vertices, u1_vecs) -> tuple:
    """Smallest parabolic P' >= P whose nilradical lies inside u'(gamma)."""
    passing = []
    for k in range(len(p.flag) + 1):
        for sub in itertools.combinations(p.flag, k):
            if p.alg.kind == "sp":
                perped = {subspace_sig(symplectic_perp(s, p.alg.omega)) for s in sub}
                if perped != set(sub):
                    continue
            cand = FlagParabolic(p.alg, tuple(sorted(sub, key=len)))
            n_vecs = [la.mat_to_vec(z) for z in cand.lie_n()]
            if la.span_subset(n_vecs, u1_vecs):
                passing.append(cand)
    # keep the maximal flags (= minimal parabolics) among the passing subflags
    maximal = [
        c for c in passing
        if not any(set(c.flag) < set(o.flag) for o in passing)
    ]
    assert maximal, "the empty flag always passes"
    if len(maximal) > 1:
        raise ConsistencyError(f"no unique smallest parabolic with radical in u' above {p.dims}")
    target = maximal[0]
    if target.flag == p.flag:
        return ("self",)
    idx = next(i for i, v in enumerate(vertices) if v.flag == target.flag)
    return ("parabolic", idx)


def _probe_completeness(gamma, x, alg, vertices, probes, seed):
    rng = random.Random(seed)
    n = alg.n
    known = {v.flag for v in vertices}
    for _ in range(probes):
        v = tuple(Fraction(rng.randint(-5, 5), rng.randint(1, 2)) for _ in range(n))
        spans = [v]
        w = v
        for _ in range(n):
            w = la.mvec(x, w)
            spans.append(w)
        base = subspace_sig(spans)
        if not 0 < len(base) < n:
            continue
        candidates = []
        if alg.kind == "gl":
            candidates.append((base,))
        else:
            perp = subspace_sig(symplectic_perp(base, alg.omega))
            if base == perp:
                candidates.append((base,))
            elif la.span_subset(base, perp) and _x_stable(x, perp):
                candidates.append(tuple(sorted((base, perp), key=len)))
        for flag in candidates:
            try:
                p = FlagParabolic.make(alg, flag)
            except DomainError:
                continue
            if not p.stabilises(gamma):
                continue
            if p_infl_member(gamma, p) and p.flag not in known:
                raise CompletenessError(
                    f"random probe found a membership flag outside the lattice: dims {p.dims}"
                )


# ---------------------------------------------------------------------------------
# induction of unipotent classes


def _is_symplectic_partition(parts: tuple[int, ...]) -> bool:
    from collections import Counter

    return all(k % 2 == 0 or v % 2 == 0 for k, v in Counter(parts).items())


def _partitions(total: int):
    if total == 0:
        yield ()
        return
    def gen(rest, maxpart):
        if rest == 0:
            yield ()
            return
        for first in range(min(rest, maxpart), 0, -1):
            for tail in gen(rest - first, first):
                yield (first,) + tail
    yield from gen(total, total)


def _dominates(lam: tuple[int, ...], mu: tuple[int, ...]) -> bool:
    """lam >= mu in dominance order (equal sizes)."""
    s1 = s2 = 0
    for i in range(max(len(lam), len(mu))):
        s1 += lam[i] if i < len(lam) else 0
        s2 += mu[i] if i < len(mu) else 0
        if s1 < s2:
            return False
    return True


def symplectic_collapse(parts: tuple[int, ...]) -> tuple[int, ...]:
    """Largest symplectic partition dominated by the given one."""
    parts = tuple(sorted((p for p in parts if p), reverse=True))
    if _is_symplectic_partition(parts):
        return parts
    candidates = [q for q in _partitions(sum(parts)) if _is_symplectic_partition(q) and _dominates(parts, q)]
    best = [q for q in candidates if not any(q != r and _dominates(r, q) for r in candidates)]
    assert len(best) == 1, "the symplectic collapse must be a unique dominance maximum"
    return best[0]


def _padded_sum(partitions) -> tuple[int, ...]:
    width = max((len(p) for p in partitions), default=0)
    out = [0] * width
    for p in partitions:
        for i, v in enumerate(p):
            out[i] += v
    return tuple(sorted((v for v in out if v), reverse=True))


def induce_partition(kind: str, levi, partitions) -> tuple[int, ...]:
    """Combinatorial induction of unipotent classes to the full group.

    kind "gl": levi is a composition (a_1..a_k) of n, partitions one per block.
    kind "sp": levi is (gl_blocks, sp_halfrank); each gl block contributes its
    partition twice, the symplectic factor once, followed by the collapse.
    """
    if kind == "gl":
        blocks = list(levi)
        parts = [tuple(p) for p in partitions]
        if len(parts) != len(blocks) or any(sum(p) != b for p, b in zip(parts, blocks)):
            raise DomainError("partition data inconsistent with the Levi composition")
        return _padded_sum(parts)
    if kind == "sp":
        gl_blocks, sp_half = levi
        gl_parts = [tuple(p) for p in partitions[: len(gl_blocks)]]
        sp_part = tuple(partitions[len(gl_blocks)]) if sp_half else ()
        if len(gl_parts) != len(gl_blocks) or any(
            sum(p) != b for p, b in zip(gl_parts, gl_blocks)
        ):
            raise DomainError("partition data inconsistent with the Levi composition")
        if sum(sp_part) != 2 * sp_half:
            raise DomainError("symplectic factor partition has the wrong size")
        if sp_part and not _is_symplectic_partition(sp_part):
            raise DomainError("symplectic factor class must be a symplectic partition")
        doubled = gl_parts + gl_parts + ([sp_part] if sp_part else [])
        return symplectic_collapse(_padded_sum(doubled))
    raise ConfigurationError(f"unsupported group kind {kind!r}")


# -- generic-element oracle ---------------------------------------------------------


def _jordan_block_matrix(partition, offset, n):
    entries = {}
    pos = offset
    for part in partition:
        for i in range(part - 1):
            entries[(pos + i, pos + i + 1)] = Fraction(1)
        pos += part
    m = [[Fraction(0)] * n for _ in range(n)]
    for (i, j), v in entries.items():
        m[i][j] = v
    return la.mat(m)


def _sp_partition_rep(partition) -> tuple[la.Mat, la.Mat]:
    """Nilpotent X of the given symplectic Jordan type together with its form.

    Even parts m: one chain b_1 <- ... <- b_m with omega(b_i, b_j) =
    (-1)^i [i+j = m+1]; odd parts come in pairs (m, m): two chains paired by
    omega(b_i, b'_j) = (-1)^i [i+j = m+1].
    """
    parts = sorted(partition, reverse=True)
    n = sum(parts)
    x = [[Fraction(0)] * n for _ in range(n)]
    omega = [[Fraction(0)] * n for _ in range(n)]
    odd_stash = None
    pos = 0
    for m in parts:
        if m % 2 == 0:
            for i in range(m - 1):
                x[pos + i][pos + i + 1] = Fraction(1)
            for i in range(1, m + 1):
                j = m + 1 - i
                omega[pos + i - 1][pos + j - 1] = Fraction((-1) ** i)
            pos += m
        elif odd_stash is None:
            odd_stash = pos
            for i in range(m - 1):
                x[pos + i][pos + i + 1] = Fraction(1)
            pos += m
        else:
            start = odd_stash
            odd_stash = None
            for i in range(m - 1):
                x[pos + i][pos + i + 1] = Fraction(1)
            for i in range(1, m + 1):
                j = m + 1 - i
                omega[start + i - 1][pos + j - 1] = Fraction((-1) ** i)
                omega[pos + j - 1][start + i - 1] = Fraction(-((-1) ** i))
            pos += m
    assert odd_stash is None, "odd parts must have even multiplicity"
    return la.mat(x), la.mat(omega)


def levi_embedding(kind: str, levi, partitions):
    """(gamma, flag parabolic, algebra) realising the Levi class inside G."""
    if kind == "gl":
        blocks = list(levi)
        n = sum(blocks)
        x = la.zeros(n, n)
        offset = 0
        for block, part in zip(blocks, partitions):
            x = la.madd(x, _jordan_block_matrix(tuple(part), offset, n))
            offset += block
        alg = gl(n)
        flags = []
        run = 0
        for b in blocks[:-1]:
            run += b
            flags.append([tuple(Fraction(1 if i == j else 0) for i in range(n)) for j in range(run)])
        p = FlagParabolic.make(alg, flags) if flags else FlagParabolic(alg, ())
        return exp_nilpotent(x), p, alg
    if kind == "sp":
        gl_blocks, sp_half = levi
        a_total = sum(gl_blocks)
        n = 2 * a_total + 2 * sp_half
        x = [[Fraction(0)] * n for _ in range(n)]
        omega = [[Fraction(0)] * n for _ in range(n)]
        offset = 0
        # GL blocks occupy (offset..offset+a) and the dual window at the end
        for block, part in zip(gl_blocks, partitions):
            xb = _jordan_block_matrix(tuple(part), 0, block)
            dual_lo = n - offset - block
            for i in range(block):
                omega[offset + i][n - 1 - offset - i] = Fraction(1)
                omega[n - 1 - offset - i][offset + i] = Fraction(-1)
                for j in range(block):
                    if xb[i][j]:
                        x[offset + i][offset + j] = xb[i][j]
                        # dual action -X^T in the flipped basis
                        x[n - 1 - offset - j][n - 1 - offset - i] = -xb[i][j]
            offset += block
        if sp_half:
            xm, om = _sp_partition_rep(tuple(partitions[len(gl_blocks)]))
            for i in range(2 * sp_half):
                for j in range(2 * sp_half):
                    if xm[i][j]:
                        x[offset + i][offset + j] = xm[i][j]
                    if om[i][j]:
                        omega[offset + i][offset + j] = om[i][j]
        alg = sp(n, la.mat(omega))
        x = la.mat(x)
        assert alg.contains(x)
        flags = []
        run = 0
        for b in gl_blocks:
            run += b
            iso = [tuple(Fraction(1 if i == j else 0) for i in range(n)) for j in range(run)]
            flags.append(iso)
        if flags:
            closed = []
            for f in flags:
                closed.append(f)
                closed.append(symplectic_perp(f, alg.omega))
            p = FlagParabolic.make(alg, [s for s in closed if 0 < la.span_dim(s) < n])
        else:
            p = FlagParabolic(alg, ())
        return exp_nilpotent(x), p, alg
    raise ConfigurationError(f"unsupported group kind {kind!r}")


def generic_induced_oracle(
    gamma: la.Mat, p: FlagParabolic, seed: int = 0xC0FFEE, agreements: int = 5, cap: int = 200
) -> tuple[int, ...]:
    """Jordan type of gamma * exp(Z) for generic rational Z in Lie(N).

    Repeats with fresh samples until the type is seen `agreements` times in a
    row (the dense-orbit type dominates all others, so ties break upward).
    """
    rng = random.Random(seed)
    n_basis = p.lie_n()
    if not n_basis:
        return jordan_type_unipotent(gamma)
    streak: tuple[int, ...] | None = None
    count = 0
    for _ in range(cap):
        z = la.zeros(p.alg.n, p.alg.n)
        for b in n_basis:
            z = la.madd(z, la.mscale(Fraction(rng.randint(-20, 20), 2 ** rng.randint(0, 2)), b))
        candidate = jordan_type_unipotent(la.mmul(gamma, exp_nilpotent(z)))
        if candidate == streak:
            count += 1
            if count >= agreements:
                return candidate
        else:
            if streak is None or _dominates(candidate, streak):
                streak, count = candidate, 1
            else:
                count = 0 if _dominates(streak, candidate) else count
    raise ConsistencyError("generic induced type did not stabilise")


def transitivity_check(kind: str, inner_levi, outer_levi, partitions) -> bool:
    """Ind in one step equals Ind through an intermediate Levi."""
    one_step = induce_partition(kind, inner_levi, partitions)
    if kind == "gl":
        blocks = list(inner_levi)
        outer = list(outer_levi)
        grouped = []
        idx = 0
        for b in outer:
            acc = []
            size = 0
            while size < b:
                acc.append(idx)
                size += blocks[idx]
                idx += 1
            assert size == b, "outer composition must coarsen the inner one"
            grouped.append(acc)
        mid_parts = [
            induce_partition("gl", [blocks[i] for i in grp], [partitions[i] for i in grp])
            for grp in grouped
        ]
        two_step = induce_partition("gl", outer, mid_parts)
        return one_step == two_step
    if kind == "sp":
        # inner (gl blocks; half) -> outer (coarser gl blocks; larger half)
        in_blocks, in_half = inner_levi
        out_blocks, out_half = outer_levi
        idx = 0
        mid_parts = []
        for b in out_blocks:
            acc = []
            size = 0
            while size < b:
                acc.append(idx)
                size += in_blocks[idx]
                idx += 1
            assert size == b
            mid_parts.append(
                induce_partition("gl", [in_blocks[i] for i in acc], [partitions[i] for i in acc])
            )
        rest_blocks = in_blocks[idx:]
        rest_parts = [partitions[i] for i in range(idx, len(in_blocks))]
        sp_part = partitions[len(in_blocks)] if in_half else ()
        mid_sp = induce_partition("sp", (rest_blocks, in_half), rest_parts + ([sp_part] if in_half else []))
        assert sum(mid_sp) == 2 * out_half
        two_step = induce_partition("sp", (out_blocks, out_half), mid_parts + [mid_sp])
        return one_step == two_step
    raise ConfigurationError(kind)


# ---------------------------------------------------------------------------------
# truncation classes and the refined diagrams


def truncation_class(x: la.Mat, alg: MatrixLieAlgebra) -> str:
    """Rational class label of a nilpotent element.

    For the symplectic catalog partitions, "split" or "anisotropic" according
    to the isotropy of the symmetric forms b+-; general linear classes (and
    symplectic ones without a splitting datum) form a single class.
    """
    if alg.kind != "sp":
        return "single"
    from .pv import b_forms

    try:
        return "split" if b_forms(x, alg).split else "anisotropic"
    except DomainError:
        return "single"


LABEL_ORDER = {"anisotropic": 0, "split": 1, "single": 0}


def _coset_labels(
    gamma: la.Mat, p: FlagParabolic, partition, samples: int, rng: random.Random
) -> set[str]:
    """Truncation classes met by the rational coset gamma N(F), by sampling."""
    alg = p.alg
    n_basis = p.lie_n()
    labels = set()
    x0 = log_unipotent(gamma)
    labels.add(truncation_class(x0, alg))
    for _ in range(samples):
        z = la.zeros(alg.n, alg.n)
        for b in n_basis:
            z = la.madd(z, la.mscale(Fraction(rng.randint(-20, 20), 2 ** rng.randint(0, 3)), b))
        u = la.mmul(gamma, exp_nilpotent(z))
        if jordan_type_unipotent(u) != partition:
            continue
        labels.add(truncation_class(log_unipotent(u), alg))
    return labels


def min_infl(
    gamma: la.Mat,
    alg: MatrixLieAlgebra,
    samples: int = 50,
    seed: int = 0xC0FFEE,
    probes: int = 200,
) -> tuple[InflDiagram, dict]:
    """The refined diagram: vertices whose coset's minimal truncation class is
    the class of gamma itself.  Returns (diagram, report)."""
    x = log_unipotent(gamma)
    label = truncation_class(x, alg)
    extra = []
    if label == "split":
        from .pv import split_extra_subspaces

        extra = split_extra_subspaces(x, alg)
    full = enumerate_p_infl(
        gamma, alg, extra_subspaces=extra, probes=probes, truncation_label=label
    )
    partition = jordan_type(x)
    rng = random.Random(seed)
    keep = []
    met_report = {}
    for i, p in enumerate(full.vertices):
        met = _coset_labels(gamma, p, partition, samples, rng)
        met_report[i] = sorted(met)
        minimal = min(met, key=lambda s: LABEL_ORDER[s])
        if minimal == label:
            keep.append(i)
    refined = full.subdiagram(keep)
    report = {
        "full_vertex_dims": full.vertex_dims(),
        "kept": [full.vertices[i].dims for i in keep],
        "met_labels": met_report,
        "label": label,
    }
    return refined, report


# ---------------------------------------------------------------------------------
# verification of the distinguished unipotent subgroups N^[gamma]


def _orbit_dimension(u: la.Mat, p: FlagParabolic) -> int:
    cols = [la.mat_to_vec(la.msub(la.mmul(z, u), la.mmul(u, z))) for z in p.lie_p()]
    return la.span_dim(cols)


def _is_ad_stable(p_basis: list[la.Mat], w_vecs: list[la.Vec], n: int) -> bool:
    span = list(w_vecs)
    for z in p_basis:
        for wv in w_vecs:
            w = la.vec_to_mat(wv, n, n)
            if not la.span_contains(span, la.mat_to_vec(la.bracket(z, w))):
                return False
    return True


def verify_ngamma(
    gamma: la.Mat,
    p: FlagParabolic,
    nprime: list[la.Mat],
    samples: int = 50,
    seed: int = 0xC0FFEE,
) -> bool:
    """Property check for a candidate N': all elements of gamma N' in the
    dense class share the canonical parabolic of gamma.

    Dense-class membership of a sample is certified by its Jordan type plus
    agreement of the orbit dimension under P with that of gamma.
    """
    alg = p.alg
    n = alg.n
    if nprime and not _is_ad_stable(p.lie_p(), [la.mat_to_vec(z) for z in nprime], n):
        raise DomainError("candidate N' is not a normal subalgebra of p")
    x0 = log_unipotent(gamma)
    partition = jordan_type(x0)
    reference_flag = tuple(flag_by_formulas(x0, partition))
    reference_dim = _orbit_dimension(gamma, p)
    rng = random.Random(seed)
    for _ in range(samples):
        z = la.zeros(n, n)
        for b in nprime:
            z = la.madd(z, la.mscale(Fraction(rng.randint(-20, 20), 2 ** rng.randint(0, 3)), b))
        u = la.mmul(gamma, exp_nilpotent(z))
        if jordan_type_unipotent(u) != partition:
            continue
        if _orbit_dimension(u, p) != reference_dim:
            continue
        flag = tuple(flag_by_formulas(log_unipotent(u), partition))
        if flag != reference_flag:
            return False
    return True


def largest_ngamma(
    gamma: la.Mat,
    p: FlagParabolic,
    samples: int = 50,
    seed: int = 0xC0FFEE,
    extra_candidates=(),
) -> list[la.Mat]:
    """Largest subspace with the constancy property from a searched family.

    The family consists of all sums of H-graded pieces of Lie(N) and of the
    supplied extra candidate subspaces (needed where N^[gamma] is not graded,
    as for the split sp6 vertices), filtered by Ad P-stability.  The result
    is the unique dimension-maximal member passing the sampled property; a
    tie between different spaces is reported as an inconsistency.
    """
    alg = p.alg
    n = alg.n
    x = log_unipotent(gamma)
    data = canonical_data(x, alg)
    n_vecs = [la.mat_to_vec(z) for z in p.lie_n()]
    generators: list[list[la.Vec]] = []
    for k, basis in sorted(data.graded.items()):
        piece = la.span_intersect(
            n_vecs, [la.mat_to_vec(alg.from_coords(v)) for v in basis]
        )
        if piece:
            generators.append(piece)
    for cand in extra_candidates:
        vecs = [la.mat_to_vec(z) for z in cand]
        if vecs and la.span_subset(vecs, n_vecs):
            generators.append(list(la.row_space_signature(vecs)))
    p_basis = p.lie_p()
    best: list[list[la.Vec]] = [[]]
    best_dim = 0
    for r in range(1, len(generators) + 1):
        for combo in itertools.combinations(range(len(generators)), r):
            vecs = []
            for k in combo:
                vecs.extend(generators[k])
            vecs = list(la.row_space_signature(vecs))
            if not _is_ad_stable(p_basis, vecs, n):
                continue
            mats = [la.vec_to_mat(v, n, n) for v in vecs]
            if verify_ngamma(gamma, p, mats, samples, seed):
                if len(vecs) > best_dim:
                    best = [vecs]
                    best_dim = len(vecs)
                elif len(vecs) == best_dim and not any(
                    la.span_eq(vecs, b) for b in best
                ):
                    best.append(vecs)
    if len(best) > 1:
        raise ConsistencyError("no unique largest subgroup with the constancy property")
    return [la.vec_to_mat(v, n, n) for v in best[0]]
