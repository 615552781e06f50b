"""Monomial fractional ideals of the semigroup ring R = k[t^s : s in S].

An ideal is stored by its minimal generator exponents e_1 < ... < e_k;
the underlying module is the union of the shifted copies e_i + S inside
k[t, t^-1].  Every nonzero monomial fractional ideal is regular (it
contains t^z for all large z).  Colon, product, trace, conductor and
enumeration are exact integer combinatorics; this module serves as the
independent oracle for the homological computations elsewhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .semigroup import NumericalSemigroup


@dataclass(frozen=True)
class MonomialFractionalIdeal:
    semigroup: NumericalSemigroup
    generators: tuple[int, ...]

    def __post_init__(self):
        if not self.generators:
            raise ValueError("monomial fractional ideals are nonzero")

    def contains(self, z: int) -> bool:
        return any(self.semigroup.contains(z - e) for e in self.generators)

    @property
    def min_exponent(self) -> int:
        return self.generators[0]

    def exponent_threshold(self) -> int:
        """Least T with [T, infinity) inside the exponent set."""
        t = self.generators[-1] + self.semigroup.conductor_threshold
        while t > self.min_exponent and self.contains(t - 1):
            t -= 1
        return t

    def members(self, lo: int, hi: int) -> list[int]:
        return [z for z in range(lo, hi) if self.contains(z)]

    def __str__(self) -> str:
        return "gen{" + ",".join(map(str, self.generators)) + "}"


MFI = MonomialFractionalIdeal


def minimalize(S: NumericalSemigroup, exponents) -> tuple[int, ...]:
    """Drop exponents reachable from a smaller one by adding a member of S."""
    out: list[int] = []
    for e in sorted(set(exponents)):
        if not any(S.contains(e - f) for f in out):
            out.append(e)
    return tuple(out)


def make_ideal(S: NumericalSemigroup, exponents) -> MFI:
    return MFI(S, minimalize(S, exponents))


def unit_ideal(S: NumericalSemigroup) -> MFI:
    """R itself, as the fractional ideal generated by t^0."""
    return MFI(S, (0,))


def equals(A: MFI, B: MFI) -> bool:
    return A.semigroup is B.semigroup and A.generators == B.generators


def contains_ideal(A: MFI, B: MFI) -> bool:
    """True iff B is a subset of A as exponent sets."""
    return all(A.contains(e) for e in B.generators)


def colon(N: MFI, M: MFI) -> MFI:
    """The fractional ideal (N : M) = {z : z + e in N for all gens e of M}.

    Members are scanned on the window from min(N) - min(M) up to
    T(N) - min(M), where T(N) is the threshold of N's exponent set;
    above the window everything belongs, so all minimal generators are
    seen by the scan.
    """
    if N.semigroup is not M.semigroup:
        raise ValueError("colon requires ideals over the same semigroup")
    S = N.semigroup
    lo = N.min_exponent - M.min_exponent
    hi = N.exponent_threshold() - M.min_exponent
    found = [z for z in range(lo, hi) if all(N.contains(z + e) for e in M.generators)]
    found.extend(range(hi, hi + S.multiplicity))
    return make_ideal(S, found)


def product(A: MFI, B: MFI) -> MFI:
    if A.semigroup is not B.semigroup:
        raise ValueError("product requires ideals over the same semigroup")
    return make_ideal(A.semigroup, [a + b for a in A.generators for b in B.generators])


def trace_ideal(M: MFI) -> MFI:
    """(R : M) M, the ideal of R generated by all images of maps M -> R."""
    return product(colon(unit_ideal(M.semigroup), M), M)


def normalization_ideal(S: NumericalSemigroup) -> MFI:
    """The integral closure k[t] of R, as the fractional ideal with exponent set N."""
    return make_ideal(S, range(S.multiplicity))


def conductor(S: NumericalSemigroup) -> MFI:
    """(R : k[t]); its exponent set is exactly [frobenius + 1, infinity)."""
    return colon(unit_ideal(S), normalization_ideal(S))


def normalize(M: MFI) -> MFI:
    """Shift so the least generator exponent is 0."""
    a = M.min_exponent
    return MFI(M.semigroup, tuple(e - a for e in M.generators))


def shift(M: MFI, a: int) -> MFI:
    return MFI(M.semigroup, tuple(e + a for e in M.generators))


def intersect(A: MFI, B: MFI) -> MFI:
    """Exponent-set intersection, again a monomial fractional ideal."""
    if A.semigroup is not B.semigroup:
        raise ValueError("intersect requires ideals over the same semigroup")
    S = A.semigroup
    lo = max(A.min_exponent, B.min_exponent)
    hi = max(A.exponent_threshold(), B.exponent_threshold()) + S.multiplicity
    return make_ideal(S, [z for z in range(lo, hi) if A.contains(z) and B.contains(z)])


def enumerate_ideals(S: NumericalSemigroup) -> list[MFI]:
    """All normalized monomial fractional ideals of S, up to shift.

    These are the sets {0} + A with A an antichain of gaps under the
    divisibility order a <= b iff b - a in S.  Listed by size, then
    lexicographically.
    """
    gaps = S.gaps
    out = []
    for k in range(len(gaps) + 1):
        for combo in combinations(gaps, k):
            ok = all(
                not S.contains(b - a) for a, b in combinations(combo, 2)
            )
            if ok:
                out.append(MFI(S, (0,) + combo))
    out.sort(key=lambda m: (len(m.generators), m.generators))
    return out
