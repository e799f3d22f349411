"""Chamber and dual-cone indicator functions, their compactly supported
signed combinations, truncation indicators, and the polytope weight factors.

All indicator evaluations are exact rational comparisons with strict
inequalities; boundary points count as outside.  The weight factor v_Q is
computed through the family evaluator (the regularised value of the frugal
exponential family attached to X), with Monte-Carlo integration of the
indicator sum available as an independent oracle in weylcones.mc.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from . import linalg as la
from .errors import ConsistencyError, DomainError
from .gqfamily import GQFamily
from .rootdata import RootDatum, StdParabolic


def tau(rd: RootDatum, q: StdParabolic, p: StdParabolic, h: la.Vec) -> int:
    """1 iff alpha(H) > 0 for every relative fundamental root of Q in P."""
    return int(all(rd.pairing(r, h) > 0 for r in rd.pair(q, p).roots))


def hat_tau(rd: RootDatum, q: StdParabolic, p: StdParabolic, h: la.Vec) -> int:
    """1 iff varpi(H) > 0 for every relative fundamental weight of Q in P."""
    return int(all(rd.pairing(w, h) > 0 for w in rd.pair(q, p).weights))


def gamma_prime(rd: RootDatum, q: StdParabolic, h: la.Vec, x: la.Vec) -> int:
    """sum over P >= Q of  eps_P tau_Q^P(H) hat_tau_P(H - X)."""
    total = 0
    diff = la.vsub(h, x)
    for p in rd.parabolics_between(q, rd.group):
        term = tau(rd, q, p, h) and hat_tau(rd, p, rd.group, diff)
        if term:
            total += p.epsilon
    return total


def gamma_dprime(rd: RootDatum, q: StdParabolic, h: la.Vec, x: la.Vec) -> int:
    """sum over P >= Q of  eps_P tau_Q^P(H - X) hat_tau_P(H)."""
    total = 0
    diff = la.vsub(h, x)
    for p in rd.parabolics_between(q, rd.group):
        term = tau(rd, q, p, diff) and hat_tau(rd, p, rd.group, h)
        if term:
            total += p.epsilon
    return total


def v_weight(rd: RootDatum, q: StdParabolic, x: la.Vec, top: StdParabolic | None = None,
             tol: float = 1e-9, seed: int = 0) -> float:
    """Total integral of Gamma'_Q(., X), via the family evaluator.

    Computed as the regularised value at 0 of the frugal exponential family
    with exponents X_P on the interval [Q, top].
    """
    top = top if top is not None else rd.group
    if q == top:
        return 1.0
    fam = GQFamily.exponential(rd, q, x, top)
    return fam.c_prime_value(random.Random(seed), tol)


@dataclass(frozen=True)
class TruncationParam:
    """A point of a_P0; the value at any standard P is its projection."""

    datum: RootDatum
    point: la.Vec

    def at(self, p: StdParabolic) -> la.Vec:
        return self.datum.proj_a(self.point, p)

    def at_modcenter(self, p: StdParabolic) -> la.Vec:
        return self.datum.proj_ag(self.point, p)


def w_factor(rd: RootDatum, p: StdParabolic, t: TruncationParam, h: la.Vec,
             tol: float = 1e-9, seed: int = 0) -> float:
    """Weight factor w_P^T at an abstract H in a_P^G.

    Returns v_P(T_P - H) and cross-checks it against the expansion
    sum over P' >= P of eps_P^(P') v_P^(P')(H^(P')) v_(P')(T_(P')); a
    disagreement beyond tolerance raises ConsistencyError.
    """
    g = rd.group
    h = rd.proj_ag(h, p)
    direct = v_weight(rd, p, la.vsub(t.at_modcenter(p), h), tol=tol, seed=seed)
    total = 0.0
    for p2 in rd.parabolics_between(p, g):
        h_rel = la.project_onto(h, rd.pair(p, p2).space_basis, rd.gram)
        sign = -1 if len(p2.subset - p.subset) % 2 else 1
        inner = v_weight(rd, p, h_rel, top=p2, tol=tol, seed=seed)
        outer = v_weight(rd, p2, t.at_modcenter(p2), tol=tol, seed=seed)
        total += sign * inner * outer
    if abs(direct - total) > tol * max(1.0, abs(direct)):
        raise ConsistencyError(
            f"w_P^T expansions disagree: direct {direct!r} vs sum {total!r}"
        )
    return direct


def hat_tau_trunc(rd: RootDatum, p: StdParabolic, t: TruncationParam, h: la.Vec) -> int:
    """Signed truncation indicator: eps_P * hat_tau_P(H_P - T_P); 1 at P = G."""
    if p == rd.group:
        return 1
    h_p = rd.proj_a(h, p)
    return p.epsilon * hat_tau(rd, p, rd.group, la.vsub(h_p, t.at(p)))


def chi_truncation(
    rd: RootDatum,
    assignment: list[tuple[StdParabolic, object]],
    nprime_key: object,
    t: TruncationParam,
    h: la.Vec,
) -> int:
    """Sum of hat_tau_trunc over the parabolics assigned to the group N'.

    `assignment` lists (standard parabolic, N'-label) pairs as produced by the
    orbit module once flags are moved to standard position.
    """
    total = 0
    for p, key in assignment:
        if key == nprime_key:
            total += hat_tau_trunc(rd, p, t, h)
    return total


def sample_offwall(rd: RootDatum, q: StdParabolic, rng: random.Random,
                   avoid_shifts: list[la.Vec] | None = None, lo: int = -9, hi: int = 9) -> la.Vec:
    """Random rational H in a_Q^G with every relevant pairing nonzero.

    The walls are alpha(H) = 0 and varpi(H - X) = 0 over all P in [Q, G] and
    all shifts X in avoid_shifts (plus X = 0).
    """
    shifts = [tuple(Fraction(0) for _ in range(rd.dim))]
    if avoid_shifts:
        shifts += list(avoid_shifts)
    basis = rd.ag_basis(q)
    vectors = []
    for p in rd.parabolics_between(q, rd.group):
        vectors.extend(rd.pair(q, p).roots)
        vectors.extend(rd.pair(p, rd.group).weights)
    while True:
        h = tuple(Fraction(0) for _ in range(rd.dim))
        for b in basis:
            h = la.vadd(h, la.vscale(Fraction(rng.randint(lo, hi), rng.randint(1, 3)), b))
        ok = True
        for v in vectors:
            for s in shifts:
                if rd.pairing(v, la.vsub(h, s)) == 0:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return h
