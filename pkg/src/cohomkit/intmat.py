"""Exact integer matrix routines: Smith normal form over Z, Howell form over Z/L.

All heavy lifting for subgroup arithmetic in finite abelian groups reduces to
two primitives:

* ``smith_normal_form`` -- U @ A @ V = D over Z with U, V unimodular and a
  divisibility chain on the diagonal.  Pure-Python integers, so intermediate
  swell can never overflow silently.
* ``howell_form`` -- a canonical row form for subgroups of (Z/L)^n.  Unlike a
  Hermite form, the Howell form is closed under the annihilator rows (L/d)*r,
  which makes span membership and kernel extraction exact over Z/L.

numpy is used as a container for Howell-form arithmetic; every operation there
is integer arithmetic mod L with values bounded by L, so int64 never wraps.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with g = gcd(a, b) >= 0 and g = s*a + t*b."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


class OverflowAbort(ArithmeticError):
    """Raised when a fixed-width fast path would exceed its safe range."""


# ---------------------------------------------------------------------------
# Smith normal form over Z (pure Python, arbitrary precision)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SmithDecomposition:
    """U @ A @ V = D with U, V unimodular, D diagonal, d1 | d2 | ..."""

    U: tuple[tuple[int, ...], ...]
    D: tuple[tuple[int, ...], ...]
    V: tuple[tuple[int, ...], ...]

    @property
    def diagonal(self) -> tuple[int, ...]:
        m = len(self.D)
        n = len(self.D[0]) if m else 0
        return tuple(self.D[i][i] for i in range(min(m, n)))


def _det_unimodular(M: list[list[int]]) -> int:
    # fraction-free Bareiss; exact for the small square matrices we feed it
    n = len(M)
    A = [row[:] for row in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k]:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1] if n else 1


def smith_normal_form(A) -> SmithDecomposition:
    """Smith normal form of an integer matrix (list of rows or ndarray)."""
    M = [[int(x) for x in row] for row in A]
    m = len(M)
    n = len(M[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def row_op(i, j, q):  # row_i -= q * row_j
        Mi, Mj = M[i], M[j]
        Ui, Uj = U[i], U[j]
        for c in range(n):
            Mi[c] -= q * Mj[c]
        for c in range(m):
            Ui[c] -= q * Uj[c]

    def col_op(i, j, q):  # col_i -= q * col_j
        for r in range(m):
            M[r][i] -= q * M[r][j]
        for r in range(n):
            V[r][i] -= q * V[r][j]

    def swap_rows(i, j):
        M[i], M[j] = M[j], M[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in range(m):
            M[r][i], M[r][j] = M[r][j], M[r][i]
        for r in range(n):
            V[r][i], V[r][j] = V[r][j], V[r][i]

    def negate_row(i):
        M[i] = [-x for x in M[i]]
        U[i] = [-x for x in U[i]]

    t = 0
    while True:
        # find pivot: smallest nonzero |entry| in the trailing block
        piv = None
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = M[i][j]
                if v and (best is None or abs(v) < best):
                    best = abs(v)
                    piv = (i, j)
        if piv is None:
            break
        i0, j0 = piv
        swap_rows(t, i0)
        swap_cols(t, j0)
        if M[t][t] < 0:
            negate_row(t)
        # clear row and column t
        dirty = False
        for i in range(t + 1, m):
            if M[i][t]:
                q = M[i][t] // M[t][t]
                row_op(i, t, q)
                if M[i][t]:
                    dirty = True
        for j in range(t + 1, n):
            if M[t][j]:
                q = M[t][j] // M[t][t]
                col_op(j, t, q)
                if M[t][j]:
                    dirty = True
        if dirty:
            continue
        # enforce divisibility of the remaining block by M[t][t]
        d = M[t][t]
        offender = None
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if M[i][j] % d:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            row_op(t, offender, -1)  # pull offending row up, redo pivot
            continue
        t += 1

    # divisibility chain on the diagonal is guaranteed by construction
    diag = [M[i][i] for i in range(min(m, n))]
    for a, b in zip(diag, diag[1:]):
        assert b == 0 or (a != 0 and b % a == 0), diag
    assert abs(_det_unimodular(U)) == 1
    assert abs(_det_unimodular(V)) == 1
    return SmithDecomposition(
        U=tuple(tuple(r) for r in U),
        D=tuple(tuple(r) for r in M),
        V=tuple(tuple(r) for r in V),
    )


# ---------------------------------------------------------------------------
# Howell form over Z/L
# ---------------------------------------------------------------------------


def _unit_lifting(a: int, L: int) -> int:
    """A unit u mod L with u*a % L == gcd(a, L)."""
    a %= L
    if a == 0:
        return 1
    g = gcd(a, L)
    a1 = a // g
    L1 = L // g
    _, s, _ = xgcd(a1, L1)
    u = s % L
    # adjust u by multiples of L1 until it is a unit mod L
    while gcd(u, L) != 1:
        u = (u + L1) % L
    assert (u * a) % L == g
    return u


class ModSpan:
    """Row span of integer vectors in (Z/L)^n, kept in canonical Howell form.

    Supports exact membership tests, representation of members as combinations
    of the *original* generators, canonical coset representatives, and the
    left kernel of the generator matrix.
    """

    def __init__(self, rows, L: int, n: int | None = None, track: bool = False):
        rows = np.asarray(rows, dtype=np.int64)
        if rows.ndim == 1:
            rows = rows.reshape(1, -1) if rows.size else rows.reshape(0, 0)
        if rows.ndim != 2:
            raise ValueError("generators must form a matrix")
        if rows.shape[0] == 0:
            if n is None:
                raise ValueError("empty generator list needs explicit width")
            rows = rows.reshape(0, n)
        elif n is not None and rows.shape[1] != n:
            raise ValueError(f"generator width {rows.shape[1]} != ambient width {n}")
        self.L = int(L)
        assert self.L >= 1
        self.n = rows.shape[1]
        self.ngen = rows.shape[0]
        self.track = track
        if track:
            aug = np.eye(self.ngen, dtype=np.int64)
            work = np.concatenate([rows % self.L, aug], axis=1)
        else:
            work = rows % self.L
        self._width = work.shape[1]
        self._pivots: list[int] = []  # pivot columns, increasing
        self._basis: list[np.ndarray] = []
        for r in work:
            self._add_row(r.copy())
        self._canonicalize()
        self.basis = (
            np.array([b[: self.n] for b in self._basis], dtype=np.int64)
            if self._basis
            else np.zeros((0, self.n), dtype=np.int64)
        )

    # -- construction ------------------------------------------------------

    def _leading(self, row):
        nz = np.flatnonzero(row)
        return int(nz[0]) if nz.size else -1

    def _add_row(self, row):
        row %= self.L
        while True:
            j = self._leading(row)
            if j < 0:
                return
            # reduce against existing pivot at column j if present
            pos = None
            for idx, p in enumerate(self._pivots):
                if p == j:
                    pos = idx
                    break
                if p > j:
                    break
            if pos is None:
                g = gcd(int(row[j]), self.L)
                u = _unit_lifting(int(row[j]), self.L)
                row = (u * row) % self.L
                assert row[j] == g
                insert_at = 0
                while insert_at < len(self._pivots) and self._pivots[insert_at] < j:
                    insert_at += 1
                self._pivots.insert(insert_at, j)
                self._basis.insert(insert_at, row)
                ann = self.L // g
                if ann > 1:
                    self._add_row((ann * row) % self.L)
                return
            d = int(self._basis[pos][j])
            v = int(row[j])
            if v % d == 0:
                row = (row - (v // d) * self._basis[pos]) % self.L
                continue
            g, s, t = xgcd(d, v)
            new = (s * self._basis[pos] + t * row) % self.L
            old = self._basis[pos]
            row = (row - (v // g) * new) % self.L
            self._pivots.pop(pos)
            self._basis.pop(pos)
            self._add_row(new)
            self._add_row((old - (d // g) * new) % self.L)
            # fall through: keep reducing the remainder of `row`

    def _canonicalize(self):
        # entries above each pivot reduced mod the pivot value
        for idx in range(len(self._basis) - 1, -1, -1):
            j = self._pivots[idx]
            d = int(self._basis[idx][j])
            for k in range(idx):
                v = int(self._basis[k][j])
                q = v // d
                if q:
                    self._basis[k] = (self._basis[k] - q * self._basis[idx]) % self.L

    # -- queries -----------------------------------------------------------

    def reduce(self, v) -> np.ndarray:
        """Canonical coset representative of v modulo this span."""
        v = np.asarray(v, dtype=np.int64) % self.L
        if self.track:
            v = np.concatenate([v, np.zeros(self.ngen, dtype=np.int64)])
        row = v.copy()
        for idx, j in enumerate(self._pivots):
            if j >= self.n:
                break
            val = row[j]
            if val:
                d = self._basis[idx][j]
                row = (row - (int(val) // int(d)) * self._basis[idx]) % self.L
        return row[: self.n]

    def contains(self, v) -> bool:
        return not self.reduce(v).any()

    def solve(self, v):
        """Coefficients c (over the original generators) with c @ gens = v, or None."""
        if not self.track:
            raise ValueError("span was built without coefficient tracking")
        v = np.asarray(v, dtype=np.int64) % self.L
        row = np.concatenate([v, np.zeros(self.ngen, dtype=np.int64)])
        for idx, j in enumerate(self._pivots):
            if j >= self.n:
                break
            val = row[j]
            if val:
                d = self._basis[idx][j]
                row = (row - (int(val) // int(d)) * self._basis[idx]) % self.L
        if row[: self.n].any():
            return None
        return (-row[self.n :]) % self.L

    def kernel(self) -> np.ndarray:
        """Rows generating {c in (Z/L)^ngen : c @ gens == 0}."""
        if not self.track:
            raise ValueError("span was built without coefficient tracking")
        rows = [b[self.n :] for b, p in zip(self._basis, self._pivots) if p >= self.n]
        if not rows:
            return np.zeros((0, self.ngen), dtype=np.int64)
        return np.array(rows, dtype=np.int64) % self.L

    def size(self) -> int:
        """Number of elements of the span inside (Z/L)^n."""
        total = 1
        for b, p in zip(self._basis, self._pivots):
            if p < self.n:
                total *= self.L // gcd(int(b[p]), self.L)
        return total


def howell_form(rows, L: int, n: int | None = None) -> np.ndarray:
    """Canonical Howell basis of the span of ``rows`` in (Z/L)^n."""
    return ModSpan(rows, L, n=n).basis


def left_kernel(rows, L: int) -> np.ndarray:
    """Generators of {x : x @ rows == 0 mod L}."""
    return ModSpan(rows, L, track=True).kernel()


def kernel_mod(A, L: int) -> np.ndarray:
    """Generators (as rows) of {x : A @ x == 0 mod L}."""
    A = np.asarray(A, dtype=np.int64)
    return left_kernel(A.T, L)


def solve_mod(A, b, L: int):
    """One solution x of A @ x == b (mod L), or None."""
    A = np.asarray(A, dtype=np.int64)
    span = ModSpan(A.T, L, n=A.shape[0], track=True)
    c = span.solve(np.asarray(b, dtype=np.int64))
    return c if c is None else c % L


def _prime_power_factors(L: int) -> list[tuple[int, int]]:
    out = []
    m = L
    p = 2
    while p * p <= m:
        if m % p == 0:
            pe = 1
            while m % p == 0:
                m //= p
                pe *= p
            out.append((p, pe))
        p += 1
    if m > 1:
        out.append((m, m))
    return out


def _kernel_prime_power(A: np.ndarray, p: int, pe: int) -> np.ndarray:
    """Rows spanning {x : A @ x == 0 mod p^e}; dense batched elimination."""
    m, s = A.shape
    e = 0
    t = pe
    while t > 1:
        t //= p
        e += 1
    cap = s * (e + 1) + 1
    B = np.zeros((cap, m + s), dtype=np.int64)
    B[:s, :m] = A.T % pe
    B[:s, m:] = np.eye(s, dtype=np.int64)
    count = s
    used = np.zeros(cap, dtype=bool)
    while True:
        progressed = False
        for col in range(m):
            act = np.flatnonzero(~used[:count])
            colvals = B[act, col]
            nz = act[colvals != 0]
            if nz.size == 0:
                continue
            progressed = True
            # minimal p-adic valuation pivot
            v = 0
            pv = 1
            while True:
                mask = (B[nz, col] // pv) % p != 0
                if mask.any():
                    r = int(nz[np.flatnonzero(mask)[0]])
                    break
                pv *= p
                v += 1
            unit = int(B[r, col]) // pv
            inv = pow(unit % pe, -1, pe)
            B[r] = (B[r] * inv) % pe
            others = nz[nz != r]
            if others.size:
                q = B[others, col] // pv
                B[others] = (B[others] - q[:, None] * B[r][None, :]) % pe
            used[r] = True
            if v > 0:
                assert count < cap
                B[count] = ((pe // pv) * B[r]) % pe
                count += 1
        if not progressed:
            break
    live = np.flatnonzero(~used[:count])
    rows = B[live]
    assert not rows[:, :m].any(), "kernel elimination left unreduced rows"
    out = rows[:, m:]
    return out[out.any(axis=1)] if out.size else out.reshape(0, s)


def kernel_uniform(A, L: int) -> np.ndarray:
    """Rows generating {x : A @ x == 0 mod L}; scales to thousands of rows.

    Splits L into prime powers, eliminates each with vectorized numpy ops,
    and recombines the kernels through the CRT idempotents.
    """
    A = np.asarray(A, dtype=np.int64) % L
    m, s = A.shape
    if s == 0:
        return np.zeros((0, 0), dtype=np.int64)
    if m == 0 or not A.any() or L == 1:
        return np.eye(s, dtype=np.int64) % L
    factors = _prime_power_factors(L)
    if len(factors) == 1:
        p, pe = factors[0]
        return _kernel_prime_power(A, p, pe)
    # CRT: generators are c_p * (kernel mod p^e) with c_p the idempotent
    # congruent to 1 mod p^e and 0 mod the complementary factor.
    gens = []
    for p, pe in factors:
        K = _kernel_prime_power(A % pe, p, pe)
        Mp = L // pe
        cp = (Mp * pow(Mp, -1, pe)) % L
        if K.size:
            gens.append((K * cp) % L)
    if not gens:
        return np.zeros((0, s), dtype=np.int64)
    return np.concatenate(gens, axis=0)

