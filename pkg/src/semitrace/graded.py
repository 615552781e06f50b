"""Graded free modules, degree-preserving maps, finitely presented
graded modules, minimal free resolutions, syzygies, and the transpose.

Over R = k[t^s : s in S] every graded piece R_d is at most
one-dimensional, so a degree-preserving map between graded free modules
is completely described by a scalar matrix together with the generator
degrees of source and target: the entry (i, j) stands for
coeff * t^(a_j - b_i).  Exponents are never stored; they are forced by
the shifts.  Composition is then plain matrix multiplication over F_p,
and all kernel and homology computations reduce to linear algebra on
degree slices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .field import PrimeField, SpanTracker
from .fracideal import MonomialFractionalIdeal, minimalize as minimalize_exponents
from .semigroup import NumericalSemigroup


@dataclass(frozen=True)
class GradedFreeModule:
    """The free module with one generator of degree a for each shift a."""

    shifts: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.shifts)

    def active(self, d: int, S: NumericalSemigroup) -> list[int]:
        """Indices of generators alive in degree d (those with d - a_i in S)."""
        return [i for i, a in enumerate(self.shifts) if S.contains(d - a)]


@dataclass(frozen=True, eq=False)
class TermMatrix:
    """A degree-preserving map between graded free modules.

    coeffs has one row per target generator and one column per source
    generator; a nonzero entry requires source_shift - target_shift in S.
    """

    source: GradedFreeModule
    target: GradedFreeModule
    coeffs: np.ndarray
    semigroup: NumericalSemigroup
    field: PrimeField

    def __post_init__(self):
        r, c = self.coeffs.shape
        if r != self.target.rank or c != self.source.rank:
            raise ValueError(
                f"coefficient shape {self.coeffs.shape} does not match "
                f"ranks {self.target.rank} x {self.source.rank}"
            )
        for i, j in zip(*np.nonzero(self.coeffs)):
            e = self.source.shifts[j] - self.target.shifts[i]
            if not self.semigroup.contains(e):
                raise ValueError(
                    f"entry ({i},{j}) carries exponent {e} outside the semigroup"
                )

    def slice(self, d: int) -> np.ndarray:
        """Scalar matrix of the degree-d component, in active coordinates."""
        rows = self.target.active(d, self.semigroup)
        cols = self.source.active(d, self.semigroup)
        return self.coeffs[np.ix_(rows, cols)]

    def is_minimal(self) -> bool:
        """No unit entries: every nonzero entry has a positive exponent."""
        for i, j in zip(*np.nonzero(self.coeffs)):
            if self.source.shifts[j] == self.target.shifts[i]:
                return False
        return True

    def to_json_dict(self) -> dict:
        return {
            "source_shifts": list(self.source.shifts),
            "target_shifts": list(self.target.shifts),
            "coeffs": self.coeffs.tolist(),
        }


def term_matrix(
    S: NumericalSemigroup,
    field: PrimeField,
    source_shifts,
    target_shifts,
    coeffs,
) -> TermMatrix:
    src = GradedFreeModule(tuple(source_shifts))
    tgt = GradedFreeModule(tuple(target_shifts))
    return TermMatrix(src, tgt, field.matrix(coeffs, tgt.rank, src.rank), S, field)


def identity_map(F: GradedFreeModule, S: NumericalSemigroup, field: PrimeField) -> TermMatrix:
    return TermMatrix(F, F, field.identity(F.rank), S, field)


def compose(f: TermMatrix, g: TermMatrix) -> TermMatrix:
    """f after g; exponents add automatically because shifts force them."""
    if f.source.shifts != g.target.shifts:
        raise ValueError("compose: source of f must equal target of g")
    return TermMatrix(g.source, f.target, f.field.matmul(f.coeffs, g.coeffs), f.semigroup, f.field)


@dataclass(frozen=True)
class SliceData:
    """Degree slice of a finitely presented module: a basis of the
    cokernel of the relation slice, given by the non-pivot coordinates
    of the rref of the relation span."""

    degree: int
    active: tuple[int, ...]
    reducer: np.ndarray
    reducer_pivots: tuple[int, ...]
    basis: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coords(self, v: np.ndarray, field: PrimeField) -> np.ndarray:
        """Coordinates of a vector (in active-generator coordinates)."""
        w = field.reduce_mod_rows(v, self.reducer, list(self.reducer_pivots))
        return w[list(self.basis)]


class FPGradedModule:
    """A finitely presented graded module: the cokernel of a term matrix.

    Instances are immutable in use; slice and action data are memoized.
    """

    def __init__(self, presentation: TermMatrix, minimal: bool = False):
        self.presentation = presentation
        self.minimal = minimal and presentation.is_minimal()
        self._slices: dict[int, SliceData] = {}
        self._actions: dict[tuple[int, int], np.ndarray] = {}
        self._scalars: dict[tuple[int, int], int] = {}
        self._uniserial: bool | None = None
        self._diffs: list[TermMatrix] = []

    @property
    def semigroup(self) -> NumericalSemigroup:
        return self.presentation.semigroup

    @property
    def field(self) -> PrimeField:
        return self.presentation.field

    @property
    def gen_shifts(self) -> tuple[int, ...]:
        return self.presentation.target.shifts

    @property
    def rel_shifts(self) -> tuple[int, ...]:
        return self.presentation.source.shifts

    def is_zero_presented(self) -> bool:
        return len(self.gen_shifts) == 0

    def signature(self) -> tuple:
        return (self.gen_shifts, self.rel_shifts, self.presentation.coeffs.tobytes())

    def slice(self, d: int) -> SliceData:
        got = self._slices.get(d)
        if got is None:
            S = self.semigroup
            active = tuple(self.presentation.target.active(d, S))
            rel = self.presentation.slice(d)
            reducer, pivots = self.field.rref(rel.T)
            reducer = reducer[: len(pivots)]
            basis = tuple(k for k in range(len(active)) if k not in pivots)
            got = SliceData(d, active, reducer, tuple(pivots), basis)
            self._slices[d] = got
        return got

    def action_matrix(self, d: int, s: int) -> np.ndarray:
        """Matrix of multiplication by t^s from slice d to slice d+s.

        Requires s in S; active generator sets only grow along such
        shifts, so the coordinate transport is an inclusion followed by
        normal-form reduction.
        """
        got = self._actions.get((d, s))
        if got is None:
            src = self.slice(d)
            tgt = self.slice(d + s)
            if src.dim == 0 or tgt.dim == 0:
                got = self.field.zeros(tgt.dim, src.dim)
            else:
                pos = {g: k for k, g in enumerate(tgt.active)}
                V = self.field.zeros(src.dim, len(tgt.active))
                for r, local in enumerate(src.basis):
                    V[r, pos[src.active[local]]] = 1
                if tgt.reducer.shape[0]:
                    V = (V - V[:, list(tgt.reducer_pivots)] @ tgt.reducer) % self.field.p
                got = V[:, list(tgt.basis)].T
            self._actions[(d, s)] = got
        return got

    def hilbert_function(self, d: int) -> int:
        return self.slice(d).dim

    def is_uniserial(self) -> bool:
        """True when every degree slice has dimension at most one (as
        for monomial fractional ideals and their cyclic quotients);
        slices are constant past max(shifts) + conductor threshold, so a
        window scan decides it."""
        if self._uniserial is None:
            shifts = self.gen_shifts + self.rel_shifts
            if not shifts:
                self._uniserial = True
            else:
                lo = min(self.gen_shifts)
                hi = max(shifts) + self.semigroup.conductor_threshold
                self._uniserial = all(
                    self.slice(d).dim <= 1 for d in range(lo, hi + 1)
                )
        return self._uniserial

    def action_scalar(self, d: int, s: int) -> int:
        """The single entry of the t^s action between (at most
        one-dimensional) slices; 0 when either slice vanishes."""
        key = (d, s)
        got = self._scalars.get(key)
        if got is None:
            act = self.action_matrix(d, s)
            got = int(act[0, 0]) if act.size else 0
            self._scalars[key] = got
        return got


def free_module(S: NumericalSemigroup, field: PrimeField, shifts) -> FPGradedModule:
    """A free module presented with no relations."""
    tgt = GradedFreeModule(tuple(shifts))
    pres = TermMatrix(GradedFreeModule(()), tgt, field.zeros(tgt.rank, 0), S, field)
    return FPGradedModule(pres, minimal=True)


def shift_module(M: FPGradedModule, a: int) -> FPGradedModule:
    """M(a): the module with M(a)_d = M_(d+a); generator degrees drop by a."""
    pres = M.presentation
    out = TermMatrix(
        GradedFreeModule(tuple(x - a for x in pres.source.shifts)),
        GradedFreeModule(tuple(x - a for x in pres.target.shifts)),
        pres.coeffs,
        pres.semigroup,
        pres.field,
    )
    return FPGradedModule(out, minimal=M.minimal)


def direct_sum(parts: list[tuple[FPGradedModule, int]]) -> FPGradedModule:
    """Direct sum of shifted copies: parts are (N, a) standing for N(a)."""
    if not parts:
        raise ValueError("direct_sum of nothing; build a zero module explicitly")
    S = parts[0][0].semigroup
    field = parts[0][0].field
    gens: list[int] = []
    rels: list[int] = []
    blocks = []
    for N, a in parts:
        gens.extend(x - a for x in N.gen_shifts)
        rels.extend(x - a for x in N.rel_shifts)
        blocks.append(N.presentation.coeffs)
    coeffs = field.zeros(len(gens), len(rels))
    r0 = c0 = 0
    for b in blocks:
        r, c = b.shape
        coeffs[r0 : r0 + r, c0 : c0 + c] = b
        r0 += r
        c0 += c
    pres = TermMatrix(GradedFreeModule(tuple(rels)), GradedFreeModule(tuple(gens)), coeffs, S, field)
    return FPGradedModule(pres, minimal=all(N.minimal for N, _ in parts))


def _minimal_generator_scan(
    field: PrimeField,
    S: NumericalSemigroup,
    source_shifts: tuple[int, ...],
    rows_fn,
    d_lo: int,
    d_hi: int,
) -> list[tuple[int, np.ndarray]]:
    """Degreewise scan emitting minimal generators of a kernel submodule.

    rows_fn(d, active) returns the slice matrix whose kernel is wanted,
    with one column per active source generator.  At each degree the
    span of t^(d - d_h) times the previously found generators equals the
    degree-d piece of the submodule they generate, so reducing the slice
    kernel against it leaves exactly the new minimal generators (graded
    Nakayama).
    """
    gens: list[tuple[int, np.ndarray]] = []
    rank = len(source_shifts)
    for d in range(d_lo, d_hi + 1):
        active = [j for j in range(rank) if S.contains(d - source_shifts[j])]
        if not active:
            continue
        K = field.kernel_basis(rows_fn(d, active))
        if K.shape[1] == 0:
            continue
        span = SpanTracker(field, len(active))
        for dh, vec in gens:
            if d > dh and S.contains(d - dh):
                span.add(vec[active])
        for k in range(K.shape[1]):
            w = span.add(K[:, k])
            if w is not None:
                full = np.zeros(rank, dtype=np.int64)
                full[active] = w
                gens.append((d, full))
    return gens


def kernel(f: TermMatrix, extra_margin: int = 0) -> TermMatrix:
    """Minimal generators of ker(f), returned as a map into source(f).

    The scan runs from the least source shift up to
    max(all shifts) + 2 * conductor_threshold: beyond
    max(all shifts) + c every slice of source, target and map is
    constant and multiplication by any member of S is an isomorphism
    between slices, so higher-degree kernel elements are shifts of
    lower-degree ones.  extra_margin widens the scan for certificate
    tests and must find nothing new.
    """
    S, field = f.semigroup, f.field
    src = f.source
    if src.rank == 0:
        return TermMatrix(GradedFreeModule(()), src, field.zeros(0, 0), S, field)
    shifts = src.shifts + f.target.shifts
    d_lo = min(src.shifts)
    d_hi = max(shifts) + 2 * S.conductor_threshold + extra_margin

    def rows_fn(d, active):
        rows = f.target.active(d, S)
        return f.coeffs[np.ix_(rows, active)]

    gens = _minimal_generator_scan(field, S, src.shifts, rows_fn, d_lo, d_hi)
    kshifts = tuple(d for d, _ in gens)
    coeffs = (
        np.stack([v for _, v in gens], axis=1)
        if gens
        else field.zeros(src.rank, 0)
    )
    return TermMatrix(GradedFreeModule(kshifts), src, coeffs, S, field)


def present(M: MonomialFractionalIdeal, field: PrimeField) -> FPGradedModule:
    """Present a monomial fractional ideal: generators at its exponent
    degrees, relations the kernel of evaluation onto the ideal.

    Each degree slice of the ideal is 0- or 1-dimensional, so the
    evaluation slice is a row of ones over the active generators.
    """
    S = M.semigroup
    e = M.generators
    d_lo, d_hi = e[0], e[-1] + 2 * S.conductor_threshold

    def rows_fn(d, active):
        return np.ones((1, len(active)), dtype=np.int64)

    gens = _minimal_generator_scan(field, S, e, rows_fn, d_lo, d_hi)
    F0 = GradedFreeModule(e)
    kshifts = tuple(d for d, _ in gens)
    coeffs = np.stack([v for _, v in gens], axis=1) if gens else field.zeros(len(e), 0)
    pres = TermMatrix(GradedFreeModule(kshifts), F0, coeffs, S, field)
    return FPGradedModule(pres, minimal=True)


def pairwise_overlap_relations(
    M: MonomialFractionalIdeal, field: PrimeField
) -> list[tuple[int, np.ndarray]]:
    """Binomial syzygies of an ideal presentation, one per minimal
    element of each pairwise overlap (e_i + S) meet (e_j + S).

    Independent construction used to cross-check present().
    """
    S = M.semigroup
    e = M.generators
    out = []
    for i in range(len(e)):
        for j in range(i + 1, len(e)):
            lo = max(e[i], e[j])
            hi = lo + S.conductor_threshold + S.multiplicity
            members = [
                z
                for z in range(lo, hi)
                if S.contains(z - e[i]) and S.contains(z - e[j])
            ]
            for d in minimalize_exponents(S, members):
                v = np.zeros(len(e), dtype=np.int64)
                v[i] = 1
                v[j] = field.p - 1
                out.append((d, v))
    out.sort(key=lambda t: (t[0], tuple(t[1])))
    return out


def quotient_module(
    S: NumericalSemigroup, field: PrimeField, ideal: MonomialFractionalIdeal
) -> FPGradedModule:
    """R/I for a monomial ideal I of R (all generator exponents in S)."""
    if any(not S.contains(g) for g in ideal.generators):
        raise ValueError("quotient needs an ideal contained in R")
    pres = term_matrix(
        S, field, ideal.generators, (0,), np.ones((1, len(ideal.generators)), dtype=np.int64)
    )
    return minimalize(FPGradedModule(pres))


def _prune_redundant_columns(
    field: PrimeField, S: NumericalSemigroup, col_shifts: list[int], coeffs: np.ndarray
) -> list[int]:
    """Indices of relation columns that minimally generate the column span."""
    order = sorted(range(len(col_shifts)), key=lambda j: (col_shifts[j], j))
    kept: list[int] = []
    for j in order:
        tracker = SpanTracker(field, coeffs.shape[0])
        for j2 in kept:
            if S.contains(col_shifts[j] - col_shifts[j2]):
                tracker.add(coeffs[:, j2])
        if not tracker.contains(coeffs[:, j]):
            kept.append(j)
    return sorted(kept)


def minimalize(M: FPGradedModule) -> FPGradedModule:
    """Cancel unit entries and redundant relations; the result presents
    an isomorphic module, re-checked by comparing Hilbert functions on a
    window past all shifts."""
    pres = M.presentation
    S, field = pres.semigroup, pres.field
    b = list(pres.target.shifts)
    a = list(pres.source.shifts)
    C = pres.coeffs.copy()
    while True:
        hit = None
        for i in range(len(b)):
            for j in range(len(a)):
                if C[i, j] != 0 and a[j] == b[i]:
                    hit = (i, j)
                    break
            if hit:
                break
        if hit is None:
            break
        i, j = hit
        C[:, j] = C[:, j] * field.inv(int(C[i, j])) % field.p
        for j2 in range(len(a)):
            if j2 != j and C[i, j2] != 0:
                C[:, j2] = (C[:, j2] - C[i, j2] * C[:, j]) % field.p
        C = np.delete(np.delete(C, i, axis=0), j, axis=1)
        del b[i]
        del a[j]
    keep = _prune_redundant_columns(field, S, a, C)
    out = FPGradedModule(
        term_matrix(S, field, [a[j] for j in keep], b, C[:, keep]), minimal=True
    )
    if b or a:
        lo = min(b + a, default=0)
        hi = max(b + a, default=0) + S.conductor_threshold
        for d in range(lo, hi + 1):
            if M.hilbert_function(d) != out.hilbert_function(d):
                raise RuntimeError("minimalize changed the Hilbert function")
    return out


@dataclass(frozen=True, eq=False)
class Resolution:
    """A minimal graded free resolution F_n -> ... -> F_0 of a module."""

    modules: tuple[GradedFreeModule, ...]
    differentials: tuple[TermMatrix, ...]
    minimal: bool

    def __post_init__(self):
        for s in range(1, len(self.differentials)):
            prod = self.differentials[s - 1].field.matmul(
                self.differentials[s - 1].coeffs, self.differentials[s].coeffs
            )
            if np.any(prod):
                raise ValueError(f"resolution differentials {s} and {s + 1} do not compose to zero")
        if self.minimal and not all(d.is_minimal() for d in self.differentials):
            raise ValueError("resolution flagged minimal but has unit entries")

    @property
    def betti(self) -> tuple[int, ...]:
        return tuple(m.rank for m in self.modules)


def _resolution_diffs(M: FPGradedModule, n: int) -> list[TermMatrix]:
    if not M._diffs:
        M._diffs.append(minimalize(M).presentation)
    while len(M._diffs) < n:
        M._diffs.append(kernel(M._diffs[-1]))
    return M._diffs[:n]


def resolve(M: FPGradedModule, n: int) -> Resolution:
    """Minimal free resolution out to homological degree n."""
    if n < 0:
        raise ValueError("resolution length must be nonnegative")
    diffs = _resolution_diffs(M, max(n, 1))
    modules = (diffs[0].target,) + tuple(d.source for d in diffs[:n])
    return Resolution(modules, tuple(diffs[:n]), minimal=True)


def syzygy(M: FPGradedModule, n: int) -> FPGradedModule:
    """The n-th syzygy module, presented by consecutive differentials of
    the minimal resolution."""
    if n < 1:
        raise ValueError("syzygy index must be at least 1")
    diffs = _resolution_diffs(M, n + 1)
    return FPGradedModule(diffs[n], minimal=True)


def transpose(M: FPGradedModule) -> FPGradedModule:
    """Cokernel of the dual of a minimal presentation.

    Generator degrees are the negated relation degrees; the coefficient
    matrix is transposed, and the support constraint carries over since
    (-b) - (-a) = a - b.
    """
    f = minimalize(M).presentation
    gens = tuple(-x for x in f.source.shifts)
    rels = tuple(-x for x in f.target.shifts)
    pres = TermMatrix(
        GradedFreeModule(rels), GradedFreeModule(gens), f.coeffs.T.copy(), f.semigroup, f.field
    )
    return FPGradedModule(pres, minimal=True)


def is_mcm(M: FPGradedModule) -> bool:
    """Torsion-freeness via the conductor-power test.

    Over a one-dimensional domain a finitely generated module is maximal
    Cohen-Macaulay iff it has no nonzero element killed by t^s for large
    s.  Slices are constant from max(shifts) + c on, so torsion lives
    below that bound and one multiplication into the stable range per
    degree decides it.
    """
    pres = M.presentation
    S = M.semigroup
    if pres.target.rank == 0:
        return True
    shifts = pres.target.shifts + pres.source.shifts
    B = max(shifts) + S.conductor_threshold
    for d in range(min(pres.target.shifts), B):
        sl = M.slice(d)
        if sl.dim == 0:
            continue
        s = B - d
        while not S.contains(s):
            s += 1
        act = M.action_matrix(d, s)
        if M.field.rank(act) < sl.dim:
            return False
    return True


def submodule_membership(
    field: PrimeField,
    S: NumericalSemigroup,
    rank: int,
    generators: list[tuple[int, np.ndarray]],
    probe_degree: int,
    probe: np.ndarray,
) -> bool:
    """Is the probe element inside the graded submodule of a free module
    spanned by the given homogeneous generators?"""
    tracker = SpanTracker(field, rank)
    for dh, vec in generators:
        if probe_degree == dh or (probe_degree > dh and S.contains(probe_degree - dh)):
            tracker.add(vec)
    return tracker.contains(probe)
