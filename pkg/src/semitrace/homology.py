"""Ext and Tor of finitely presented graded modules, their annihilator
ideals, and stable Hom dimensions.

Ext^i(M, N) is computed from a minimal free resolution of M: the terms
Hom(F_s, N) are direct sums of shifted copies of N, the induced maps act
blockwise through multiplication matrices on the degree slices of N, and
the degree-d slice functor is exact, so homology is taken slice by
slice.

Finite length is certified through stabilization: past the degree where
every involved slice has become constant (all shifts plus the conductor
threshold), multiplication by members of S gives isomorphisms of the
whole three-term complex, so the homology is constant there and must
vanish for the result to have finite length.  The computation clamps
degrees to the stabilization point, which both performs the vanishing
check and collapses the stable range to a single slice.
"""

from __future__ import annotations

import numpy as np

from .field import PrimeField
from .fracideal import MonomialFractionalIdeal, make_ideal, unit_ideal
from .graded import (
    FPGradedModule,
    GradedFreeModule,
    direct_sum,
    free_module,
    kernel,
    minimalize,
    _resolution_diffs,
)
from .semigroup import NumericalSemigroup


def hom_free_into(F: GradedFreeModule, N: FPGradedModule) -> FPGradedModule:
    """Hom(F, N) as a module: one copy of N shifted by each generator
    degree of F (Hom(R(-a), N) = N(a))."""
    if F.rank == 0:
        return free_module(N.semigroup, N.field, ())
    return direct_sum([(N, a) for a in F.shifts])


def tensor_free(F: GradedFreeModule, N: FPGradedModule) -> FPGradedModule:
    """F tensor N: one copy of N shifted the other way (R(-a) tensor N = N(-a))."""
    if F.rank == 0:
        return free_module(N.semigroup, N.field, ())
    return direct_sum([(N, -a) for a in F.shifts])


class CapExceeded(RuntimeError):
    """A resolution stage passed the configured rank cap."""


class HomComplex:
    """Degreewise slices of Hom(F_., N) (kind 'ext') or F_. tensor N
    (kind 'tor') for a fixed resolution of M, shared by all homological
    positions.

    Stages are extended lazily; a rank_cap bounds the free ranks that
    may enter a computation, so that the exponential growth of minimal
    resolutions over large-embedding-dimension rings is caught instead
    of consuming unbounded time.
    """

    def __init__(
        self,
        M: FPGradedModule,
        N: FPGradedModule,
        kind: str,
        rank_cap: int | None = None,
    ):
        if kind not in ("ext", "tor"):
            raise ValueError(f"unknown homology kind {kind!r}")
        self.M = M
        self.N = N
        self.kind = kind
        self.rank_cap = rank_cap
        self.S: NumericalSemigroup = M.semigroup
        self.field: PrimeField = M.field
        self._offsets: dict[int, tuple[int, ...]] = {}
        self._entries: dict[int, list[tuple[int, int, int]]] = {}
        self._stab: dict[int, int] = {}
        self._dims: dict[tuple[int, int], tuple[tuple[int, ...], tuple[int, ...], int]] = {}
        self._slices: dict[tuple[int, int], np.ndarray] = {}
        self._ranks: dict[tuple[int, int], int] = {}
        self._reductions: dict[tuple, tuple] = {}
        self._homology: dict[int, FiniteLengthGradedModule] = {}

    # -- resolution bookkeeping -------------------------------------------

    def _stage_shifts(self, s: int) -> tuple[int, ...]:
        """Generator degrees of F_s, extending the resolution on demand."""
        diffs = self.M._diffs
        if not diffs:
            _resolution_diffs(self.M, 1)
        while len(diffs) < s:
            prev = diffs[-1]
            if self.rank_cap is not None and prev.source.rank > self.rank_cap:
                raise CapExceeded(
                    f"stage {len(diffs)} rank {prev.source.rank} exceeds cap {self.rank_cap}"
                )
            diffs.append(kernel(prev))
        if s == 0:
            return diffs[0].target.shifts
        shifts = diffs[s - 1].source.shifts
        if self.rank_cap is not None and len(shifts) > self.rank_cap:
            raise CapExceeded(f"stage {s} rank {len(shifts)} exceeds cap {self.rank_cap}")
        return shifts

    def max_feasible_index(self, i_max: int) -> int:
        """Largest i <= i_max with every needed stage under the rank cap."""
        hi = 0
        for i in range(1, i_max + 1):
            try:
                self._stage_shifts(i + 1)
            except CapExceeded:
                break
            hi = i
        return hi

    def offsets(self, s: int) -> tuple[int, ...]:
        got = self._offsets.get(s)
        if got is None:
            shifts = self._stage_shifts(s)
            got = shifts if self.kind == "ext" else tuple(-a for a in shifts)
            self._offsets[s] = got
        return got

    def entries(self, s: int) -> list[tuple[int, int, int]]:
        """Nonzero (target block, source block, scalar) triples of the
        s-th induced map (terms s-1 -> s for ext, s -> s-1 for tor)."""
        got = self._entries.get(s)
        if got is None:
            self._stage_shifts(s)
            d_s = self.M._diffs[s - 1]
            tau = d_s.coeffs.T if self.kind == "ext" else d_s.coeffs
            got = [
                (int(u), int(v), int(tau[u, v])) for u, v in zip(*np.nonzero(tau))
            ]
            self._entries[s] = got
        return got

    # -- degreewise data with stable-range clamping -------------------------

    def stab(self, s: int) -> int:
        """Degree from which every block slice of term s is constant."""
        got = self._stab.get(s)
        if got is None:
            shifts_N = self.N.gen_shifts + self.N.rel_shifts
            offs = self.offsets(s)
            c = self.S.conductor_threshold
            if not shifts_N or not offs:
                got = 0
            else:
                got = max(nu - o for nu in shifts_N for o in offs) + c
            self._stab[s] = got
        return got

    def term_dims(self, s: int, d: int):
        """Per-block slice dimensions of term s at degree d, with block
        starts and the total."""
        key = (s, min(d, self.stab(s)))
        got = self._dims.get(key)
        if got is None:
            dims = []
            starts = []
            total = 0
            for o in self.offsets(s):
                starts.append(total)
                k = self.N.slice(key[1] + o).dim
                dims.append(k)
                total += k
            got = (tuple(dims), tuple(starts), total)
            self._dims[key] = got
        return got

    def _clamp_map(self, s: int, d: int) -> int:
        return min(d, max(self.stab(s - 1), self.stab(s)))

    def map_slice(self, s: int, d: int) -> np.ndarray:
        """Degree-d slice of the s-th induced map, assembled from block
        multiplication matrices of N.  Slices are constant past the
        stabilization degree and cached accordingly."""
        d = self._clamp_map(s, d)
        key = (s, d)
        got = self._slices.get(key)
        if got is None:
            if self.kind == "ext":
                src_s, tgt_s = s - 1, s
            else:
                src_s, tgt_s = s, s - 1
            src_off = self.offsets(src_s)
            tgt_off = self.offsets(tgt_s)
            _, src_starts, src_total = self.term_dims(src_s, d)
            _, tgt_starts, tgt_total = self.term_dims(tgt_s, d)
            got = np.zeros((tgt_total, src_total), dtype=np.int64)
            if src_total and tgt_total:
                N = self.N
                if N.is_uniserial():
                    # every block is a scalar: one fancy assignment
                    rows = []
                    cols = []
                    vals = []
                    scal = N.action_scalar
                    for u, v, coeff in self.entries(s):
                        e = d + src_off[v]
                        a = scal(e, tgt_off[u] - src_off[v])
                        if a:
                            rows.append(tgt_starts[u])
                            cols.append(src_starts[v])
                            vals.append(coeff * a)
                    if rows:
                        got[rows, cols] = np.mod(vals, self.field.p)
                else:
                    act_of = N.action_matrix
                    for u, v, coeff in self.entries(s):
                        act = act_of(d + src_off[v], tgt_off[u] - src_off[v])
                        if act.size:
                            r0, c0 = tgt_starts[u], src_starts[v]
                            got[r0 : r0 + act.shape[0], c0 : c0 + act.shape[1]] += (
                                coeff * act
                            )
                    got %= self.field.p
            self._slices[key] = got
        return got

    def map_rank(self, s: int, d: int) -> int:
        d = self._clamp_map(s, d)
        key = (s, d)
        got = self._ranks.get(key)
        if got is None:
            if self.kind == "ext":
                src_s, tgt_s = s - 1, s
            else:
                src_s, tgt_s = s, s - 1
            if not self.term_dims(src_s, d)[2] or not self.term_dims(tgt_s, d)[2]:
                got = 0
            else:
                got = len(self._reduce(s, d, False)[1])
            self._ranks[key] = got
        return got

    def _reduce(self, s: int, d: int, transposed: bool):
        """Cached rref of a map slice (or of its transpose)."""
        d = self._clamp_map(s, d)
        key = (s, d, transposed)
        got = self._reductions.get(key)
        if got is None:
            mat = self.map_slice(s, d)
            got = self.field.rref_reduced(mat.T if transposed else mat)
            self._reductions[key] = got
        return got

    def in_map_index(self, i: int) -> int:
        return i if self.kind == "ext" else i + 1

    def out_map_index(self, i: int) -> int:
        return i + 1 if self.kind == "ext" else i

    def mid_action(self, i: int, d: int, s: int) -> np.ndarray:
        """Block-diagonal action of t^s on term i from degree d."""
        offs = self.offsets(i)
        _, _, src_total = self.term_dims(i, d)
        _, _, tgt_total = self.term_dims(i, d + s)
        out = np.zeros((tgt_total, src_total), dtype=np.int64)
        r0 = c0 = 0
        for o in offs:
            act = self.N.action_matrix(d + o, s)
            out[r0 : r0 + act.shape[0], c0 : c0 + act.shape[1]] = act
            r0 += act.shape[0]
            c0 += act.shape[1]
        return out

    # -- homology ----------------------------------------------------------

    def window(self, i: int) -> tuple[int, int]:
        """Degree window for position i: from the least degree where the
        middle term can be nonzero to the stabilization point of all
        three terms."""
        gen_shifts = self.N.gen_shifts
        mid = self.offsets(i)
        if not gen_shifts or not mid:
            return (0, -1)
        lo = min(nu - o for nu in gen_shifts for o in mid)
        hi = max(self.stab(i - 1), self.stab(i), self.stab(i + 1))
        return (lo, hi)

    def homology(self, i: int) -> FiniteLengthGradedModule:
        if i < 1:
            raise ValueError("homological index must be at least 1")
        got = self._homology.get(i)
        if got is None:
            got = self._compute(i)
            self._homology[i] = got
        return got

    def _compute(self, i: int) -> FiniteLengthGradedModule:
        lo, hi = self.window(i)
        dims: dict[int, int] = {}
        out_idx, in_idx = self.out_map_index(i), self.in_map_index(i)
        for d in range(lo, hi + 1):
            _, _, mid_total = self.term_dims(i, d)
            if mid_total == 0:
                continue
            dim = mid_total - self.map_rank(out_idx, d) - self.map_rank(in_idx, d)
            if dim < 0:
                raise RuntimeError(f"maps do not form a complex at degree {d}")
            if dim:
                if d >= hi:
                    raise RuntimeError(
                        f"finite-length certificate failed: constant nonzero "
                        f"slice from degree {d} on"
                    )
                dims[d] = dim
        return FiniteLengthGradedModule(self, i, (lo, hi), dims)


class FiniteLengthGradedModule:
    """A certified finite-length Ext/Tor value: per-degree dimensions,
    lazily realized coset-representative bases, and multiplication
    actions.

    window spans from the first possibly-nonzero degree to the
    stabilization degree; the construction verified that the constant
    stable slice vanishes, so dimensions are zero outside the window.
    """

    def __init__(
        self,
        complex_: HomComplex,
        position: int,
        window: tuple[int, int],
        dims: dict[int, int],
    ):
        self._cx = complex_
        self._pos = position
        self.window = window
        self._dims = dims
        self.semigroup = complex_.S
        self.field = complex_.field
        self.certified = True
        self._detail: dict[int, tuple[np.ndarray, np.ndarray]] = {}
        self._action_cache: dict[tuple[int, int], np.ndarray] = {}
        self._gen_actions: dict[int, dict[int, np.ndarray]] | None = None

    def dim(self, d: int) -> int:
        return self._dims.get(d, 0)

    @property
    def dims(self) -> list[int]:
        lo, hi = self.window
        return [self.dim(d) for d in range(lo, hi + 1)]

    def total_dim(self) -> int:
        return sum(self._dims.values())

    def support(self) -> list[int]:
        return sorted(self._dims)

    def is_zero(self) -> bool:
        return not self._dims

    def _basis(self, d: int) -> tuple[np.ndarray, np.ndarray]:
        """(representatives, image rows) at degree d, both row matrices
        in middle-term coordinates."""
        got = self._detail.get(d)
        if got is None:
            cx, field = self._cx, self.field
            out_idx, in_idx = cx.out_map_index(self._pos), cx.in_map_index(self._pos)
            out_sl = cx.map_slice(out_idx, d)
            r_out, pivots_out = cx._reduce(out_idx, d, False)
            K = field.kernel_from_rref(r_out, pivots_out, out_sl.shape[1])
            r_in, pivots_in = cx._reduce(in_idx, d, True)
            im_rows = r_in[: len(pivots_in)]
            if K.shape[1]:
                kred = K.T.copy()
                if im_rows.shape[0]:
                    kred = (kred - kred[:, pivots_in] @ im_rows) % field.p
                r2, piv2 = field.rref(kred)
                reps = r2[: len(piv2)]
            else:
                reps = field.zeros(0, out_sl.shape[1])
            if reps.shape[0] != self.dim(d):
                raise RuntimeError(f"representative count mismatch at degree {d}")
            got = (reps, im_rows)
            self._detail[d] = got
        return got

    def action_matrix(self, d: int, s: int) -> np.ndarray:
        """Action of t^s (s in S) from the degree-d slice to degree d+s,
        computed directly by moving representatives and re-expressing
        them in the target basis."""
        key = (d, s)
        got = self._action_cache.get(key)
        if got is not None:
            return got
        n, m = self.dim(d), self.dim(d + s)
        if n == 0 or s == 0:
            out = self.field.identity(n) if s == 0 else self.field.zeros(m, n)
            self._action_cache[key] = out
            return out
        reps, _ = self._basis(d)
        mover = self._cx.mid_action(self._pos, d, s)
        moved = self.field.matmul(reps, mover.T)
        if m == 0:
            # target slice is zero: moved classes must die in the image
            out = self.field.zeros(0, n)
            if np.any(moved):
                _, t_im = self._basis(d + s)
                for r in range(moved.shape[0]):
                    if self.field.solve(t_im.T, moved[r]) is None:
                        raise RuntimeError("moved class escaped the image at a zero slice")
            self._action_cache[key] = out
            return out
        t_reps, t_im = self._basis(d + s)
        basis = np.concatenate([t_reps, t_im], axis=0)
        out = self.field.zeros(m, n)
        for r in range(moved.shape[0]):
            x = self.field.solve(basis.T, moved[r])
            if x is None:
                raise RuntimeError("moved representative left the certified complex")
            out[:, r] = x[:m]
        self._action_cache[key] = out
        return out

    @property
    def actions(self) -> dict[int, dict[int, np.ndarray]]:
        """Multiplication matrices for every semigroup generator, on the
        support degrees."""
        if self._gen_actions is None:
            self._gen_actions = {
                g: {d: self.action_matrix(d, g) for d in self.support()}
                for g in self.semigroup.generators
            }
        return self._gen_actions

    def composite_action(self, d: int, s: int) -> np.ndarray:
        """Action of t^s assembled as a product of generator actions
        along a factorization of s."""
        A = self.field.identity(self.dim(d))
        deg = d
        for g in self.semigroup.factorize(s):
            if A.shape[0] == 0:
                break
            A = self.field.matmul(self.action_matrix(deg, g), A)
            deg += g
        return A

    def killed_by(self, s: int) -> bool:
        """Does t^s annihilate the whole module?"""
        sup = self.support()
        if not sup:
            return True
        if s == 0:
            return False
        top = sup[-1]
        return all(
            d + s > top or not np.any(self.composite_action(d, s)) for d in sup
        )

    def to_json_dict(self) -> dict:
        return {
            "window": [self.window[0], self.window[1]],
            "dims": self.dims,
            "annihilator": list(annihilator(self).generators),
        }


def ext(
    i: int,
    M: FPGradedModule,
    N: FPGradedModule,
    rank_cap: int | None = None,
) -> FiniteLengthGradedModule:
    """Ext^i(M, N) for i >= 1, certified finite length."""
    if i < 1:
        raise ValueError("ext index must be at least 1")
    return HomComplex(M, N, "ext", rank_cap).homology(i)


def tor(
    i: int,
    M: FPGradedModule,
    N: FPGradedModule,
    rank_cap: int | None = None,
) -> FiniteLengthGradedModule:
    """Tor_i(M, N) for i >= 1, certified finite length."""
    if i < 1:
        raise ValueError("tor index must be at least 1")
    return HomComplex(M, N, "tor", rank_cap).homology(i)


def annihilator(H: FiniteLengthGradedModule) -> MonomialFractionalIdeal:
    """The annihilator of a certified finite-length module, as a
    monomial ideal of R.

    Every graded piece of R is one-dimensional, so the annihilator is
    the monomial ideal of all s in S with t^s H = 0.  Members beyond the
    degree span of H qualify automatically; the rest are tested through
    the action matrices.
    """
    if not H.certified:
        raise ValueError("annihilator needs a certified finite-length module")
    S = H.semigroup
    sup = H.support()
    if not sup:
        return unit_ideal(S)
    span = sup[-1] - sup[0]
    members = [s for s in S.members(0, span + 1) if H.killed_by(s)]
    top = span + 1
    members.extend(S.members(top, top + S.conductor_threshold + S.multiplicity))
    return make_ideal(S, members)


def ideal_annihilates(H: FiniteLengthGradedModule, I: MonomialFractionalIdeal) -> bool:
    """Does every element of the monomial ideal I kill H?  Enough to
    test the generators."""
    return all(H.killed_by(int(e)) for e in I.generators)


def _coker_projection(Mfp: FPGradedModule, e: int) -> np.ndarray:
    """Matrix of the projection from the ambient free slice onto the
    cokernel slice of Mfp at degree e, in active coordinates."""
    sl = Mfp.slice(e)
    field = Mfp.field
    n = len(sl.active)
    V = field.identity(n)
    if sl.reducer.shape[0]:
        V = (V - V[:, list(sl.reducer_pivots)] @ sl.reducer) % field.p
    return V[:, list(sl.basis)].T


def stable_hom_dim(M: FPGradedModule) -> int:
    """Total dimension of Hom(M, M) modulo maps factoring through the
    free cover F_0.

    Hom(M, M)_d is the kernel of Hom(F_0, M)_d -> Hom(F_1, M)_d; the
    factoring maps are the image of the kernel of
    Hom(F_0, F_0)_d -> Hom(F_1, F_0)_d under postcomposition with the
    projection F_0 -> M.  A nonvanishing stable slice reports failure of
    finite-dimensionality.
    """
    Mm = minimalize(M)
    S, field = Mm.semigroup, Mm.field
    f = Mm.presentation
    b, a = f.target.shifts, f.source.shifts
    if len(b) == 0:
        return 0
    F0free = free_module(S, field, b)
    cx = HomComplex(Mm, Mm, "ext")
    cx_free = HomComplex(Mm, F0free, "ext")
    shifts_M = Mm.gen_shifts + Mm.rel_shifts
    relevant = [nu - o for o in b + a for nu in shifts_M]
    relevant += [nu - o for o in b + a for nu in b]
    c = S.conductor_threshold
    lo, hi = min(relevant), max(relevant) + c
    total = 0
    for d in range(lo, hi + 1):
        mid_dims = [Mm.slice(d + o).dim for o in b]
        if sum(mid_dims) == 0:
            continue
        K = field.kernel_basis(cx.map_slice(1, d))
        K2 = field.kernel_basis(cx_free.map_slice(1, d))
        free_dims = [F0free.slice(d + o).dim for o in b]
        P = field.zeros(sum(mid_dims), sum(free_dims))
        r0 = c0 = 0
        for o, md, fd in zip(b, mid_dims, free_dims):
            P[r0 : r0 + md, c0 : c0 + fd] = _coker_projection(Mm, d + o)
            r0 += md
            c0 += fd
        PK = field.matmul(P, K2)
        dim_d = K.shape[1] - field.rank(PK.T)
        if dim_d < 0 or field.rank(np.concatenate([K, PK], axis=1).T) != K.shape[1]:
            raise RuntimeError("factoring maps escaped Hom(M, M) at degree %d" % d)
        if d >= hi and dim_d:
            raise RuntimeError("stable Hom failed the finite-dimension certificate")
        total += dim_d
    return total
