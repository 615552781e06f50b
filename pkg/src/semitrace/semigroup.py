"""Numerical semigroups S of N: membership, gaps, Frobenius number,
Apery sets, symmetry, and exhaustive enumeration by genus.

A numerical semigroup is a cofinite additive submonoid of the natural
numbers.  It models the graded ring R = k[t^s : s in S]; the Frobenius
number and conductor threshold of S are the combinatorial shadow of the
conductor ideal of that ring.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd


class SemigroupError(ValueError):
    """Raised for inputs that do not define a numerical semigroup."""


@dataclass(frozen=True)
class NumericalSemigroup:
    """Immutable numerical semigroup.

    generators: minimal generating set, sorted.
    frobenius: largest integer not in S (-1 when S = N).
    gaps: sorted positive integers outside S.
    _table: membership for 0 <= d < conductor_threshold; every d at or
    above the threshold is a member.
    """

    generators: tuple[int, ...]
    frobenius: int
    gaps: tuple[int, ...]
    _table: tuple[bool, ...] = field(repr=False)

    @property
    def multiplicity(self) -> int:
        return self.generators[0]

    @property
    def conductor_threshold(self) -> int:
        return self.frobenius + 1

    @property
    def genus(self) -> int:
        return len(self.gaps)

    def contains(self, d: int) -> bool:
        if d < 0:
            return False
        if d >= self.conductor_threshold:
            return True
        return self._table[d]

    def members(self, lo: int, hi: int) -> list[int]:
        """Members of S in [lo, hi)."""
        return [d for d in range(lo, hi) if self.contains(d)]

    def apery_set(self, m: int) -> list[int]:
        """Least member of each residue class mod m; requires m in S, m > 0."""
        if m <= 0 or not self.contains(m):
            raise SemigroupError(f"Apery set needs a positive member, got {m}")
        out: list[int | None] = [None] * m
        found = 0
        d = 0
        while found < m:
            if out[d % m] is None and self.contains(d):
                out[d % m] = d
                found += 1
            d += 1
        return [x for x in out if x is not None]

    def factorize(self, s: int) -> tuple[int, ...]:
        """Write a member as a sum of generators, deterministically:
        repeatedly strip the first generator leaving a member."""
        if s < 0 or not self.contains(s):
            raise SemigroupError(f"{s} is not a member")
        out = []
        while s:
            g = next(g for g in self.generators if s - g >= 0 and self.contains(s - g))
            out.append(g)
            s -= g
        return tuple(out)

    def is_symmetric(self) -> bool:
        """True iff z in S exactly when frobenius - z is not, for all z.

        Equivalent to genus == (frobenius + 1) / 2; corresponds to the
        semigroup ring being Gorenstein.
        """
        f = self.frobenius
        return all(self.contains(z) != self.contains(f - z) for z in range(-1, f + 1))

    def key(self) -> tuple[int, ...]:
        return self.generators

    def __str__(self) -> str:
        return "<" + ",".join(map(str, self.generators)) + ">"


def _minimal_generators(contains, threshold: int, multiplicity: int) -> tuple[int, ...]:
    # minimal generators are members not expressible as a sum of two
    # positive members; none exceed max(threshold + m, 2m) - 1
    top = max(threshold + multiplicity, 2 * multiplicity)
    gens = []
    for s in range(1, top):
        if not contains(s):
            continue
        if any(contains(x) and contains(s - x) for x in range(1, s // 2 + 1)):
            continue
        gens.append(s)
    return tuple(gens)


def _build(table: list[bool], frobenius: int) -> NumericalSemigroup:
    threshold = frobenius + 1
    table = table[:threshold]
    gaps = tuple(d for d in range(1, threshold) if not table[d])

    def contains(d: int) -> bool:
        if d < 0:
            return False
        if d >= threshold:
            return True
        return table[d]

    mult = 1 if threshold == 0 else next(d for d in range(1, threshold + 2) if contains(d))
    gens = _minimal_generators(contains, threshold, mult)
    return NumericalSemigroup(gens, frobenius, gaps, tuple(table))


def from_generators(gens: list[int] | tuple[int, ...]) -> NumericalSemigroup:
    """Semigroup generated by gens; generators are re-minimalized.

    Membership is found by a dynamic-programming scan; the Frobenius
    number is certified by locating a run of `multiplicity` consecutive
    members, after which every larger integer is a member.
    """
    gens = sorted(set(int(g) for g in gens))
    if not gens or gens[0] <= 0:
        raise SemigroupError("generators must be positive integers")
    g = 0
    for x in gens:
        g = gcd(g, x)
    if g != 1:
        raise SemigroupError(f"gcd of generators is {g}, not 1")
    if gens[0] == 1:
        return _build([True], -1)
    m, top = gens[0], gens[-1]
    bound = top * top + top
    table = [False] * (bound + 1)
    table[0] = True
    for d in range(1, bound + 1):
        table[d] = any(d >= x and table[d - x] for x in gens)
    run = 0
    start = None
    for d in range(bound + 1):
        run = run + 1 if table[d] else 0
        if run == m:
            start = d - m + 1
            break
    if start is None:
        raise SemigroupError("membership scan bound too small")  # unreachable
    frobenius = max(d for d in range(start) if not table[d])
    return _build(table, frobenius)


def from_gaps(gaps: list[int] | tuple[int, ...]) -> NumericalSemigroup:
    """Semigroup with the given gap set; raises if the complement is not closed."""
    gaps = sorted(set(int(z) for z in gaps))
    if not gaps:
        return _build([True], -1)
    if gaps[0] <= 0:
        raise SemigroupError("gaps must be positive")
    frobenius = gaps[-1]
    table = [d not in set(gaps) for d in range(frobenius + 1)]

    def contains(d):
        return d >= 0 and (d > frobenius or table[d])

    for z in gaps:
        ok = any(contains(x) and contains(z - x) for x in range(1, z))
        if ok:
            raise SemigroupError(f"complement of gaps is not closed: {z} is forced")
    return _build(table, frobenius)


def enumerate_by_genus(gmax: int) -> list[NumericalSemigroup]:
    """All numerical semigroups of genus <= gmax, each exactly once.

    Walks the standard tree: the children of S are S minus one minimal
    generator exceeding the Frobenius number.  Levels are emitted in
    genus order and sorted by generator tuple, so the output order is
    deterministic.
    """
    if gmax < 0:
        return []
    out: list[NumericalSemigroup] = []
    level = [from_generators([1])]
    for _ in range(gmax + 1):
        level.sort(key=lambda s: s.generators)
        out.extend(level)
        nxt = []
        for s in level:
            for g in s.generators:
                if g > s.frobenius:
                    nxt.append(from_gaps(sorted(s.gaps + (g,))))
        level = nxt
    return out
