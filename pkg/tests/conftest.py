import random
from fractions import Fraction

from weylcones import linalg as la


def gap_sample(rd, q, walls, rng: random.Random, gap=Fraction(1, 3), hi=4):
    """Rational vector in a_Q^G whose pairing with every wall covector is
    bounded away from zero (keeps float identity checks well conditioned)."""
    basis = rd.ag_basis(q)
    while True:
        lam = tuple(Fraction(0) for _ in range(rd.dim))
        for b in basis:
            lam = la.vadd(lam, la.vscale(Fraction(rng.randint(-hi, hi), rng.randint(1, 2)), b))
        if all(abs(rd.pairing(lam, w)) >= gap for w in walls):
            return lam
