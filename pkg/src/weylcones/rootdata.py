"""Root systems of type A and C with the standard parabolic lattice.

Realizations (all rational, inner product = standard dot product, so short
roots have squared length 2):

  * type A_n: ambient space Q^(n+1), simple roots e_i - e_(i+1); the centre
    direction a_G is spanned by the all-ones vector.
  * type C_n: ambient space Q^n, simple roots e_i - e_(i+1) and 2 e_n; a_G = 0.

A standard parabolic P is encoded by the subset S of simple-root indices
occurring in its Levi component (S empty = minimal parabolic, S full = the
group itself), and

  a_P   = {H : alpha_i(H) = 0 for i in S},
  a_P^G = a_P orthogonal to a_G.

For a nested pair Q <= P we carry the relative fundamental roots Delta_Q^P
(projections of the Levi simple roots onto a_Q), their coroots (projections of
the simple coroots), and the two dual bases: the fundamental weights (dual to
the coroots inside a_Q^P) and coweights (dual to Delta_Q^P).  Measures on
every a_Q^P are the Lebesgue measures induced by the single fixed inner
product, which makes them Fubini-compatible across nested splittings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from . import linalg as la
from .errors import ConfigurationError, DomainError

Subset = frozenset


@dataclass(frozen=True)
class StdParabolic:
    """Standard parabolic, identified with the simple-root subset of its Levi."""

    rank: int
    subset: frozenset[int]

    def __post_init__(self):
        if not self.subset <= frozenset(range(1, self.rank + 1)):
            raise DomainError(f"subset {set(self.subset)} not within 1..{self.rank}")

    @property
    def corank(self) -> int:
        """dim a_P^G = rank - |S|."""
        return self.rank - len(self.subset)

    @property
    def epsilon(self) -> int:
        """(-1)^(dim a_P^G)."""
        return -1 if self.corank % 2 else 1

    def is_contained_in(self, other: "StdParabolic") -> bool:
        return self.subset <= other.subset

    def key(self) -> tuple[int, ...]:
        return tuple(sorted(self.subset))

    def __repr__(self):
        inner = ",".join(str(i) for i in sorted(self.subset))
        return f"P[{inner}]"


@dataclass(frozen=True)
class AVector:
    """A rational vector tagged with the parabolic subspace it lives in.

    The same realization serves elements of a_P and, via the fixed inner
    product, linear functionals on it.
    """

    datum: "RootDatum"
    parabolic: StdParabolic
    coords: la.Vec

    def __post_init__(self):
        for i in sorted(self.parabolic.subset):
            if self.datum.pairing(self.datum.simple_roots[i - 1], self.coords) != 0:
                raise DomainError(
                    f"vector {self.coords} does not lie in a_P for {self.parabolic}"
                )

    def pair(self, other: "AVector | la.Vec") -> Fraction:
        v = other.coords if isinstance(other, AVector) else other
        return self.datum.pairing(self.coords, v)


ALinear = AVector


@dataclass(frozen=True)
class PairData:
    """Relative data for a nested pair Q <= P."""

    indices: tuple[int, ...]            # S_P minus S_Q, sorted
    space_basis: tuple[la.Vec, ...]     # basis of a_Q^P
    roots: tuple[la.Vec, ...]           # Delta_Q^P
    coroots: tuple[la.Vec, ...]
    weights: tuple[la.Vec, ...]         # dual to the coroots in a_Q^P
    coweights: tuple[la.Vec, ...]       # dual to Delta_Q^P in a_Q^P
    eta_sq: Fraction                    # 1 / det Gram(coroots)
    etahat_sq: Fraction                 # 1 / det Gram(coweights)

    @property
    def dim(self) -> int:
        return len(self.indices)

    @property
    def eta(self) -> float:
        return math.sqrt(float(self.eta_sq))

    @property
    def etahat(self) -> float:
        return math.sqrt(float(self.etahat_sq))


class RootDatum:
    """Simple roots, coroots, weights and the parabolic lattice for A_n / C_n."""

    def __init__(self, type_label: str, rank: int):
        if type_label not in ("A", "C") or not 1 <= rank <= 3:
            raise ConfigurationError(f"unsupported root datum {type_label}_{rank}")
        self.type_label = type_label
        self.rank = rank
        self.dim = rank + 1 if type_label == "A" else rank
        self.gram = la.eye(self.dim)
        e = lambda i: tuple(Fraction(1 if j == i else 0) for j in range(self.dim))
        if type_label == "A":
            self.simple_roots = tuple(
                la.vsub(e(i), e(i + 1)) for i in range(rank)
            )
            self.simple_coroots = self.simple_roots
            ones = tuple(Fraction(1) for _ in range(self.dim))
            self.center_basis = (ones,)
            n1 = Fraction(self.dim)
            self.fund_weights = tuple(
                tuple(
                    (Fraction(1) if j <= i else Fraction(0)) - Fraction(i + 1, n1)
                    for j in range(self.dim)
                )
                for i in range(rank)
            )
            self.fund_coweights = self.fund_weights
        else:
            roots = [la.vsub(e(i), e(i + 1)) for i in range(rank - 1)]
            roots.append(la.vscale(2, e(rank - 1)))
            self.simple_roots = tuple(roots)
            self.simple_coroots = tuple(
                la.vscale(Fraction(2, la.dot(a, a)), a) for a in self.simple_roots
            )
            self.center_basis = ()
            self.fund_weights = tuple(
                tuple(Fraction(1 if j <= i else 0) for j in range(self.dim))
                for i in range(rank)
            )
            cw = [
                tuple(Fraction(1 if j <= i else 0) for j in range(self.dim))
                for i in range(rank - 1)
            ]
            cw.append(tuple(Fraction(1, 2) for _ in range(self.dim)))
            self.fund_coweights = tuple(cw)
        self._check_tables()

    # -- construction-time sanity -------------------------------------------------

    def _check_tables(self):
        for i in range(self.rank):
            for j in range(self.rank):
                c = self.pairing(self.simple_roots[i], self.simple_coroots[j])
                assert c == self.cartan_matrix()[i][j]
                assert self.pairing(self.fund_weights[i], self.simple_coroots[j]) == (
                    1 if i == j else 0
                )
                assert self.pairing(self.simple_roots[i], self.fund_coweights[j]) == (
                    1 if i == j else 0
                )
            for g in self.center_basis:
                assert self.pairing(self.fund_weights[i], g) == 0

    def cartan_matrix(self) -> la.Mat:
        n = self.rank
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                if i == j:
                    row.append(Fraction(2))
                elif abs(i - j) == 1:
                    if self.type_label == "C" and {i, j} == {n - 2, n - 1}:
                        # alpha_(n-1) short, alpha_n long
                        row.append(Fraction(-2 if i == n - 1 else -1))
                    else:
                        row.append(Fraction(-1))
                else:
                    row.append(Fraction(0))
            rows.append(tuple(row))
        return tuple(rows)

    def pairing(self, u: la.Vec, v: la.Vec) -> Fraction:
        return la.dot(la.mvec(self.gram, u), v)

    # -- parabolic lattice ---------------------------------------------------------

    def parabolic(self, indices) -> StdParabolic:
        return StdParabolic(self.rank, frozenset(indices))

    @property
    def minimal_parabolic(self) -> StdParabolic:
        return self.parabolic(())

    @property
    def group(self) -> StdParabolic:
        return self.parabolic(range(1, self.rank + 1))

    def all_parabolics(self) -> list[StdParabolic]:
        idx = range(1, self.rank + 1)
        out = []
        for k in range(self.rank + 1):
            for subset in combinations(idx, k):
                out.append(self.parabolic(subset))
        return out

    def parabolics_between(self, q: StdParabolic, p: StdParabolic) -> list[StdParabolic]:
        if not q.is_contained_in(p):
            raise DomainError(f"{q} is not contained in {p}")
        extra = sorted(p.subset - q.subset)
        out = []
        for k in range(len(extra) + 1):
            for more in combinations(extra, k):
                out.append(self.parabolic(q.subset | frozenset(more)))
        return out

    @lru_cache(maxsize=None)
    def _a_basis(self, subset: Subset, mod_center: bool) -> tuple[la.Vec, ...]:
        rows = [la.mvec(self.gram, self.simple_roots[i - 1]) for i in sorted(subset)]
        if mod_center:
            rows += [la.mvec(self.gram, g) for g in self.center_basis]
        if not rows:
            return tuple(la.eye(self.dim))
        return tuple(la.nullspace(tuple(rows)))

    def a_basis(self, p: StdParabolic) -> tuple[la.Vec, ...]:
        """Basis of a_P (centre included)."""
        return self._a_basis(p.subset, False)

    def ag_basis(self, p: StdParabolic) -> tuple[la.Vec, ...]:
        """Basis of a_P^G."""
        return self._a_basis(p.subset, True)

    def proj_a(self, v: la.Vec, p: StdParabolic) -> la.Vec:
        """Orthogonal projection onto a_P."""
        return la.project_onto(v, self.a_basis(p), self.gram)

    def proj_ag(self, v: la.Vec, p: StdParabolic) -> la.Vec:
        """Orthogonal projection onto a_P^G."""
        return la.project_onto(v, self.ag_basis(p), self.gram)

    @lru_cache(maxsize=None)
    def _pair(self, sq: Subset, sp: Subset) -> PairData:
        q = StdParabolic(self.rank, sq)
        indices = tuple(sorted(sp - sq))
        roots = tuple(self.proj_a(self.simple_roots[i - 1], q) for i in indices)
        coroots = tuple(self.proj_a(self.simple_coroots[i - 1], q) for i in indices)
        space = tuple(la.row_space_signature(coroots))
        if indices:
            assert la.span_eq(space, roots), "pair roots and coroots must span a_Q^P"
        weights = self._dual_basis(coroots, space)
        coweights = self._dual_basis(roots, space)
        eta_sq = 1 / la.gram_det(coroots, self.gram)
        etahat_sq = 1 / la.gram_det(coweights, self.gram)
        return PairData(indices, space, roots, coroots, weights, coweights, eta_sq, etahat_sq)

    def _dual_basis(self, vectors, space_basis) -> tuple[la.Vec, ...]:
        """Basis of span(space_basis) pairing to the identity against vectors."""
        k = len(vectors)
        if k == 0:
            return ()
        rows = tuple(tuple(self.pairing(v, b) for b in space_basis) for v in vectors)
        out = []
        for i in range(k):
            rhs = tuple(Fraction(1 if j == i else 0) for j in range(k))
            coeffs = la.solve(rows, rhs)
            assert coeffs is not None
            w = tuple(Fraction(0) for _ in range(self.dim))
            for c, b in zip(coeffs, space_basis):
                w = la.vadd(w, la.vscale(c, b))
            out.append(w)
        for i in range(k):
            for j in range(k):
                assert self.pairing(vectors[i], out[j]) == (1 if i == j else 0)
        return tuple(out)

    def pair(self, q: StdParabolic, p: StdParabolic) -> PairData:
        """Relative data for Q <= P; pair(Q, G) gives the absolute objects of Q."""
        if not q.is_contained_in(p):
            raise DomainError(f"{q} is not contained in {p}")
        return self._pair(q.subset, p.subset)

    # -- operations of the module contract ------------------------------------------

    def project(self, v: la.Vec, q: StdParabolic, p: StdParabolic) -> tuple[la.Vec, la.Vec]:
        """Split v in a_Q as (v^P, v_P) with v^P in a_Q^P and v_P in a_P."""
        if not q.is_contained_in(p):
            raise DomainError(f"{q} is not contained in {p}")
        v_p = self.proj_a(v, p)
        v_up = la.vsub(v, v_p)
        assert la.span_contains(self.pair(q, p).space_basis, v_up)
        return v_up, v_p

    def fundamental_data(self, q: StdParabolic, p: StdParabolic | None = None):
        """(Delta_Q^P, hat Delta_Q^P, coroots, coweights) for the pair Q <= P."""
        data = self.pair(q, p if p is not None else self.group)
        return data.roots, data.weights, data.coroots, data.coweights

    def measure_constants(self, q: StdParabolic, p: StdParabolic | None = None):
        """(eta, etahat) for a_Q^P; exact squares live on the PairData."""
        data = self.pair(q, p if p is not None else self.group)
        return data.eta, data.etahat

    def to_json(self) -> dict:
        fr = lambda x: str(x)
        return {
            "type": self.type_label,
            "rank": self.rank,
            "simple_roots": [[fr(x) for x in r] for r in self.simple_roots],
            "coroots": [[fr(x) for x in r] for r in self.simple_coroots],
            "gram": [[fr(x) for x in r] for r in self.gram],
        }


@lru_cache(maxsize=None)
def build_root_datum(type_label: str, rank: int) -> RootDatum:
    """Root datum for the split group of the given type and rank (<= 3)."""
    return RootDatum(type_label, rank)


GROUP_LABELS = {
    "a1": ("A", 1), "a2": ("A", 2), "a3": ("A", 3),
    "c1": ("C", 1), "c2": ("C", 2), "c3": ("C", 3),
    "gl2": ("A", 1), "gl3": ("A", 2), "gl4": ("A", 3),
    "sp2": ("C", 1), "sp4": ("C", 2), "sp6": ("C", 3),
}


def datum_for_label(label: str) -> RootDatum:
    key = label.lower()
    if key not in GROUP_LABELS:
        raise ConfigurationError(f"unknown group label {label!r}")
    return build_root_datum(*GROUP_LABELS[key])
