"""Exact dense linear algebra over a prime field F_p.

Field elements are plain integer residues in [0, p); matrices are numpy
int64 arrays with all entries reduced mod p.  Every routine is
deterministic: pivots are chosen as the leftmost nonzero column with the
smallest row index, kernel vectors are normalized to leading coefficient
1, and solve() sets free variables to zero.

With p <= 32003 and slice dimensions in the hundreds, intermediate
products stay far below 2**63, so int64 arithmetic is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np
from numba import njit

DEFAULT_PRIME = 32003


@njit(cache=True)
def _rref_inplace(a: np.ndarray, p: int, inv_table: np.ndarray) -> np.ndarray:
    """Row-reduce a modulo p in place; returns the pivot column array.

    Reduction is lazy: pivot rows are kept reduced, other rows
    accumulate values bounded by min(rows, cols) * p**2, far inside
    int64 for p < 2**20, and a final pass reduces everything.
    """
    rows, cols = a.shape
    pivots = np.empty(min(rows, cols), np.int64)
    npiv = 0
    for c in range(cols):
        if npiv == rows:
            break
        pr = -1
        for i in range(npiv, rows):
            if a[i, c] % p != 0:
                pr = i
                break
        if pr < 0:
            continue
        if pr != npiv:
            for j in range(cols):
                tmp = a[npiv, j]
                a[npiv, j] = a[pr, j]
                a[pr, j] = tmp
        inv = inv_table[a[npiv, c] % p]
        for j in range(c, cols):
            v = a[npiv, j] % p
            a[npiv, j] = v * inv % p
        for i in range(rows):
            if i == npiv:
                continue
            f = a[i, c] % p
            if f != 0:
                for j in range(c, cols):
                    a[i, j] -= f * a[npiv, j]
        pivots[npiv] = c
        npiv += 1
    for i in range(rows):
        for j in range(cols):
            a[i, j] %= p
    return pivots[:npiv]


def pow_mod_range(p: int) -> np.ndarray:
    """Inverses of 1..p-1 mod p via the standard recurrence
    inv[a] = -(p // a) * inv[p mod a]."""
    inv = [0] * p
    inv[1] = 1
    for a in range(2, p):
        inv[a] = (p - (p // a) * inv[p % a]) % p
    return np.array(inv[1:], dtype=np.int64)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class PrimeField:
    """Arithmetic context for F_p, p a configured odd prime."""

    p: int = DEFAULT_PRIME
    _inv_table: dict = dc_field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.p < 3 or self.p % 2 == 0 or not _is_prime(self.p):
            raise ValueError(f"modulus must be an odd prime, got {self.p}")
        # keep p**2 * cols comfortably inside int64 for dot products
        if self.p > 1 << 20:
            raise ValueError(f"modulus too large for exact int64 kernels: {self.p}")

    @property
    def inv_table(self) -> np.ndarray:
        """Inverse lookup table: inv_table[a] = a**-1 mod p (0 slot unused)."""
        got = self._inv_table.get("t")
        if got is None:
            got = np.zeros(self.p, dtype=np.int64)
            got[1:] = pow_mod_range(self.p)
            self._inv_table["t"] = got
        return got

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in F_p")
        return int(self.inv_table[a])

    def matrix(self, data, rows: int | None = None, cols: int | None = None) -> np.ndarray:
        """Build a reduced matrix from nested lists or an array.

        rows/cols disambiguate empty shapes, e.g. a 0 x 3 matrix.
        """
        a = np.asarray(data, dtype=np.int64)
        if a.size == 0:
            return np.zeros((rows or 0, cols or 0), dtype=np.int64)
        if a.ndim != 2:
            raise ValueError("matrix data must be two-dimensional")
        return np.mod(a, self.p)

    def zeros(self, rows: int, cols: int) -> np.ndarray:
        return np.zeros((rows, cols), dtype=np.int64)

    def identity(self, n: int) -> np.ndarray:
        return np.eye(n, dtype=np.int64)

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return np.mod(a @ b, self.p)

    def rref(self, m: np.ndarray) -> tuple[np.ndarray, list[int]]:
        """Reduced row echelon form and pivot column list.

        Idempotent; pivoting is the first nonzero entry scanning the
        leftmost unfinished column downward.
        """
        a = np.ascontiguousarray(np.mod(np.asarray(m, dtype=np.int64), self.p))
        if a is m or not a.flags.owndata:
            a = a.copy()
        if a.size == 0:
            return a, []
        pivots = _rref_inplace(a, self.p, self.inv_table)
        return a, [int(c) for c in pivots]

    def rref_reduced(self, m: np.ndarray) -> tuple[np.ndarray, list[int]]:
        """rref for int64 input already reduced mod p (skips the mod pass)."""
        a = np.ascontiguousarray(m)
        if a is m or not a.flags.owndata:
            a = a.copy()
        if a.size == 0:
            return a, []
        pivots = _rref_inplace(a, self.p, self.inv_table)
        return a, [int(c) for c in pivots]

    def rank(self, m: np.ndarray) -> int:
        return len(self.rref(m)[1])

    def kernel_from_rref(self, r: np.ndarray, pivots: list[int], cols: int) -> np.ndarray:
        """Kernel basis read off an already-computed rref."""
        mask = np.ones(cols, dtype=bool)
        mask[pivots] = False
        free = np.nonzero(mask)[0]
        basis = np.zeros((cols, len(free)), dtype=np.int64)
        basis[free, np.arange(len(free))] = 1
        if pivots and len(free):
            basis[np.asarray(pivots)[:, None], np.arange(len(free))[None, :]] = (
                -r[: len(pivots)][:, free]
            ) % self.p
        for k in range(basis.shape[1]):
            col = basis[:, k]
            lead = int(np.nonzero(col)[0][0])
            if col[lead] != 1:
                basis[:, k] = col * self.inv(int(col[lead])) % self.p
        return basis

    def kernel_basis(self, m: np.ndarray) -> np.ndarray:
        """Columns form the deterministic basis of {v : m v = 0}.

        One basis vector per free column of the rref, ordered by free
        column index, each normalized to leading coefficient 1.
        """
        r, pivots = self.rref(m)
        return self.kernel_from_rref(r, pivots, m.shape[1])

    def solve(self, m: np.ndarray, b: np.ndarray) -> np.ndarray | None:
        """One solution of m x = b with free variables zero, or None."""
        rows, cols = m.shape
        b = np.mod(np.asarray(b, dtype=np.int64).reshape(rows), self.p)
        aug = np.concatenate([m, b[:, None]], axis=1)
        r, pivots = self.rref(aug)
        if cols in pivots:
            return None
        x = np.zeros(cols, dtype=np.int64)
        for i, pc in enumerate(pivots):
            x[pc] = r[i, cols]
        return x

    def row_space(self, m: np.ndarray) -> np.ndarray:
        """Nonzero rows of the rref: a canonical basis of the row space."""
        r, pivots = self.rref(m)
        return r[: len(pivots)]

    def reduce_mod_rows(self, v: np.ndarray, rows: np.ndarray, pivots: list[int]) -> np.ndarray:
        """Normal form of v against rref rows (leading 1 at each pivot)."""
        v = np.mod(np.asarray(v, dtype=np.int64), self.p)
        if rows.shape[0] == 0:
            return v
        coeffs = v[list(pivots)]
        return (v - coeffs @ rows) % self.p


class SpanTracker:
    """Incrementally maintained row space in echelon form (each added
    row has a unit pivot not occurring in earlier rows), with sequential
    normal-form reduction.

    Used for the degreewise "already generated" bookkeeping in syzygy
    scans and subquotient bases.
    """

    __slots__ = ("field", "width", "rows", "pivots")

    def __init__(self, field: PrimeField, width: int):
        self.field = field
        self.width = width
        self.rows: list[np.ndarray] = []
        self.pivots: list[int] = []

    def reduce(self, v: np.ndarray) -> np.ndarray:
        v = np.mod(np.asarray(v, dtype=np.int64), self.field.p)
        p = self.field.p
        for row, piv in zip(self.rows, self.pivots):
            c = v[piv]
            if c:
                v = (v - c * row) % p
        return v

    def add(self, v: np.ndarray) -> np.ndarray | None:
        """Reduce v; if independent, absorb it and return the normal form."""
        w = self.reduce(v)
        nz = np.nonzero(w)[0]
        if nz.size == 0:
            return None
        lead = int(nz[0])
        w = w * self.field.inv(int(w[lead])) % self.field.p
        self.rows.append(w)
        self.pivots.append(lead)
        return w

    def contains(self, v: np.ndarray) -> bool:
        return not np.any(self.reduce(v))

    @property
    def dim(self) -> int:
        return len(self.pivots)
