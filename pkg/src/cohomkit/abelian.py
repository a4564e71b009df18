"""Finite abelian groups as products of cyclic factors, with exact arithmetic.

A group is a tuple of cyclic-factor orders, an element is a reduced residue
vector, a morphism is an integer matrix (rows indexed by target factors).
Groups are *not* normalized to invariant-factor form: cokernels come out in
whatever presentation the computation produces, and two presentations are
compared through the multiset of their primary cyclic factors.

Kernels, cokernels, images and membership questions all route through the
Howell-form machinery of :mod:`cohomkit.intmat`, with cyclic orders encoded
as lattice rows over Z/L, L the lcm of all involved orders.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from math import gcd, lcm, prod

import numpy as np

from .intmat import ModSpan, OverflowAbort

_MAX_CARD = 1 << 62


@dataclass(frozen=True)
class FinAbGroup:
    orders: tuple[int, ...]

    def __post_init__(self):
        if any(n < 1 for n in self.orders):
            raise ValueError(f"cyclic factor orders must be >= 1: {self.orders}")
        if prod(self.orders, start=1) > _MAX_CARD:
            raise OverflowAbort(f"group cardinality exceeds {_MAX_CARD}")

    @property
    def rank(self) -> int:
        return len(self.orders)

    @property
    def cardinality(self) -> int:
        return prod(self.orders, start=1)

    @property
    def exponent(self) -> int:
        e = 1
        for n in self.orders:
            e = lcm(e, n)
        return e

    @property
    def is_trivial(self) -> bool:
        return all(n == 1 for n in self.orders)

    def zero(self) -> "AbElement":
        return AbElement(self, (0,) * self.rank)

    def element(self, coords) -> "AbElement":
        return AbElement(self, tuple(int(c) % n for c, n in zip(coords, self.orders)))

    def generators(self) -> list["AbElement"]:
        gens = []
        for i, n in enumerate(self.orders):
            if n > 1:
                gens.append(self.element([int(j == i) for j in range(self.rank)]))
        return gens

    def elements(self):
        for coords in itertools.product(*(range(n) for n in self.orders)):
            yield AbElement(self, coords)

    def random_element(self, rng) -> "AbElement":
        return AbElement(self, tuple(rng.randrange(n) for n in self.orders))

    def order_lattice(self) -> np.ndarray:
        """Rows n_i * e_i spanning the identifications of the residue vectors."""
        return np.diag(np.array(self.orders, dtype=np.int64))

    def __repr__(self):
        if self.is_trivial:
            return "FinAbGroup(trivial)"
        return "FinAbGroup(%s)" % " x ".join(f"C{n}" for n in self.orders if n > 1)


@dataclass(frozen=True)
class AbElement:
    parent: FinAbGroup
    coords: tuple[int, ...]

    def __post_init__(self):
        assert len(self.coords) == self.parent.rank
        assert all(0 <= c < n for c, n in zip(self.coords, self.parent.orders))

    def __add__(self, other: "AbElement") -> "AbElement":
        assert self.parent == other.parent
        return AbElement(
            self.parent,
            tuple((a + b) % n for a, b, n in zip(self.coords, other.coords, self.parent.orders)),
        )

    def __neg__(self) -> "AbElement":
        return AbElement(self.parent, tuple((-a) % n for a, n in zip(self.coords, self.parent.orders)))

    def __sub__(self, other: "AbElement") -> "AbElement":
        return self + (-other)

    def __mul__(self, k: int) -> "AbElement":
        return AbElement(self.parent, tuple((a * k) % n for a, n in zip(self.coords, self.parent.orders)))

    __rmul__ = __mul__

    @property
    def is_zero(self) -> bool:
        return not any(self.coords)

    def order(self) -> int:
        o = 1
        for a, n in zip(self.coords, self.parent.orders):
            if a:
                o = lcm(o, n // gcd(a, n))
        return o


class AbHom:
    """Morphism between finite abelian groups, stored as an integer matrix.

    matrix[i][j] is the coefficient of target factor i on source generator j;
    well-definedness (matrix[i][j] * n_j == 0 mod m_i) is checked eagerly.
    """

    def __init__(self, source: FinAbGroup, target: FinAbGroup, matrix):
        self.source = source
        self.target = target
        M = np.asarray(matrix, dtype=np.int64).reshape(target.rank, source.rank)
        tmods = np.array(target.orders, dtype=np.int64).reshape(-1, 1)
        self.matrix = M % tmods if M.size else M
        smods = np.array(source.orders, dtype=np.int64)
        if M.size and ((self.matrix * smods.reshape(1, -1)) % tmods).any():
            raise ValueError("matrix does not define a homomorphism on the given orders")

    def __call__(self, x: AbElement) -> AbElement:
        assert x.parent == self.source
        return self.target.element(self.apply_coords(np.array(x.coords, dtype=np.int64)))

    def apply_coords(self, coords: np.ndarray) -> np.ndarray:
        """Vectorized application; coords has shape (..., source.rank)."""
        out = coords @ self.matrix.T
        mods = np.array(self.target.orders, dtype=np.int64)
        return out % mods if out.size else out.reshape(coords.shape[:-1] + (self.target.rank,))

    def compose(self, other: "AbHom") -> "AbHom":
        assert other.target == self.source
        return AbHom(other.source, self.target, self.matrix @ other.matrix)

    def __add__(self, other: "AbHom") -> "AbHom":
        assert self.source == other.source and self.target == other.target
        return AbHom(self.source, self.target, self.matrix + other.matrix)

    def __neg__(self):
        return AbHom(self.source, self.target, -self.matrix)

    @property
    def is_zero(self) -> bool:
        return not self.matrix.any()

    @staticmethod
    def identity(A: FinAbGroup) -> "AbHom":
        return AbHom(A, A, np.eye(A.rank, dtype=np.int64))

    @staticmethod
    def zero(source: FinAbGroup, target: FinAbGroup) -> "AbHom":
        return AbHom(source, target, np.zeros((target.rank, source.rank), dtype=np.int64))

    def __repr__(self):
        return f"AbHom({self.source} -> {self.target})"


# ---------------------------------------------------------------------------
# Presentations of subquotients S/T inside an ambient product of cyclics
# ---------------------------------------------------------------------------


def _snf_row_tracked(M: np.ndarray):
    """Diagonalize M by row and column ops; track row ops and their inverse.

    Returns (diag, U, Uinv) with U @ M @ V == diag(...) for some unimodular V.

    Runs in int64 and retries with exact Python integers if entries threaten
    to overflow (the retry also covers U/Uinv growth).
    """
    for dtype in (np.int64, object):
        try:
            return _snf_row_tracked_impl(M.astype(dtype), dtype)
        except OverflowAbort:
            continue
    raise AssertionError("unreachable")


def _snf_row_tracked_impl(A, dtype):
    p, m = A.shape
    U = np.eye(p, dtype=dtype)
    Uinv = np.eye(p, dtype=dtype)
    guard = dtype is np.int64

    def check():
        if guard:
            bound = 1 << 60
            if A.size and abs(A).max() > bound:
                raise OverflowAbort("snf entries too large for int64")
            if abs(U).max() > bound or abs(Uinv).max() > bound:
                raise OverflowAbort("snf transform too large for int64")

    t = 0
    while t < min(p, m):
        block = A[t:, t:]
        nz = np.nonzero(block)
        if nz[0].size == 0:
            break
        absvals = abs(block[nz])
        k = int(np.argmin(absvals))
        i0, j0 = int(nz[0][k]) + t, int(nz[1][k]) + t
        if i0 != t:
            A[[t, i0]] = A[[i0, t]]
            U[[t, i0]] = U[[i0, t]]
            Uinv[:, [t, i0]] = Uinv[:, [i0, t]]
        if j0 != t:
            A[:, [t, j0]] = A[:, [j0, t]]
        if A[t, t] < 0:
            A[t] = -A[t]
            U[t] = -U[t]
            Uinv[:, t] = -Uinv[:, t]
        piv = A[t, t]
        col = A[t + 1 :, t]
        dirty = False
        if col.size and np.any(col):
            q = col // piv
            A[t + 1 :] -= np.outer(q, A[t])
            U[t + 1 :] -= np.outer(q, U[t])
            Uinv[:, t] += Uinv[:, t + 1 :] @ q
            if np.any(A[t + 1 :, t]):
                dirty = True
        row = A[t, t + 1 :]
        if row.size and np.any(row):
            q = row // piv
            A[:, t + 1 :] -= np.outer(A[:, t], q)
            if np.any(A[t, t + 1 :]):
                dirty = True
        check()
        if dirty:
            continue
        rest = A[t + 1 :, t + 1 :]
        if rest.size:
            bad = np.nonzero(rest % piv)
            if bad[0].size:
                i = int(bad[0][0]) + t + 1
                A[t] += A[i]
                U[t] += U[i]
                Uinv[:, i] -= Uinv[:, t]
                check()
                continue
        t += 1
    diag = [int(A[i, i]) for i in range(min(p, m))]
    return diag, np.asarray(U), np.asarray(Uinv)


def _relative_kernel(b_rows: np.ndarray, t_rows: np.ndarray, L: int) -> np.ndarray:
    """Rows c with sum_i c_i * b_rows[i] lying in span(t_rows) over Z/L."""
    p, n = b_rows.shape
    stacked = []
    eye = np.eye(p, dtype=np.int64)
    stacked.append(np.concatenate([b_rows % L, eye], axis=1))
    if t_rows.size:
        zeros = np.zeros((t_rows.shape[0], p), dtype=np.int64)
        stacked.append(np.concatenate([t_rows % L, zeros], axis=1))
    allrows = np.concatenate(stacked, axis=0)
    span = ModSpan(allrows, L, n=n + p)
    out = [b[n:] for b, piv in zip(span._basis, span._pivots) if piv >= n]
    if not out:
        return np.zeros((0, p), dtype=np.int64)
    return np.array(out, dtype=np.int64) % L


class Presentation:
    """S/T for subgroups T <= S of an ambient product of cyclic groups.

    Provides the quotient as a :class:`FinAbGroup`, coordinates of members,
    and representative lifts of classes.  The internal consistency check
    |S| / |T| == |group| guards the whole reduction pipeline.
    """

    def __init__(self, ambient_orders, s_gens, t_gens=()):
        self.ambient_orders = tuple(int(n) for n in ambient_orders)
        n = len(self.ambient_orders)
        self.L = 1
        for o in self.ambient_orders:
            self.L = lcm(self.L, o)
        lattice = np.diag(np.array(self.ambient_orders, dtype=np.int64))

        def as_rows(gens):
            arr = np.asarray(list(gens), dtype=np.int64)
            if arr.size == 0:
                return arr.reshape(0, n)
            return arr.reshape(-1, n)

        s_rows = as_rows(s_gens)
        t_rows = as_rows(t_gens)
        self.s_span = ModSpan(np.concatenate([s_rows, lattice]), self.L, n=n)
        self.t_span = ModSpan(np.concatenate([t_rows, lattice]), self.L, n=n)
        for row in self.t_span.basis:
            if not self.s_span.contains(row):
                raise ValueError("denominator subgroup is not contained in numerator")
        B = self.s_span.basis
        p = B.shape[0]
        if p == 0:
            self._keep = []
            self.group = FinAbGroup(())
            self._U = np.zeros((0, 0), dtype=np.int64)
            self._Uinv = np.zeros((0, 0), dtype=np.int64)
            self._diag = []
        else:
            K = _relative_kernel(B, self.t_span.basis, self.L)
            rel = np.concatenate([K, self.L * np.eye(p, dtype=np.int64)], axis=0)
            diag, U, Uinv = _snf_row_tracked(rel.T)  # relations as columns
            self._diag = [d if d else self.L for d in diag] + [self.L] * (p - len(diag))
            self._U, self._Uinv = U, Uinv
            self._keep = [i for i, d in enumerate(self._diag) if d > 1]
            self.group = FinAbGroup(tuple(self._diag[i] for i in self._keep))
        expected = self.s_span.size() // self.t_span.size()
        if self.group.cardinality != expected:
            raise AssertionError(
                f"presentation size mismatch: {self.group.cardinality} != {expected}"
            )

    # -- conversions --------------------------------------------------------

    def _basis_coords(self, vec) -> np.ndarray:
        """Coefficients of vec over the Howell basis of S (vec must lie in S)."""
        v = np.asarray(vec, dtype=np.int64) % self.L
        B = self.s_span.basis
        coeffs = np.zeros(B.shape[0], dtype=np.int64)
        row = v.copy()
        for idx, j in enumerate(self.s_span._pivots):
            val = row[j]
            if val:
                d = B[idx][j]
                q = int(val) // int(d)
                coeffs[idx] = q
                row = (row - q * B[idx]) % self.L
        if row.any():
            raise ValueError("vector is not a member of the subgroup")
        return coeffs

    def class_coords(self, vec) -> AbElement:
        c = self._basis_coords(vec)
        if not len(self._keep):
            return self.group.zero()
        y = (self._U @ c.astype(self._U.dtype))
        return self.group.element([int(y[i]) % self._diag[i] for i in self._keep])

    def rep(self, cls: AbElement) -> np.ndarray:
        """An ambient representative vector of the class."""
        assert cls.parent == self.group
        p = self.s_span.basis.shape[0]
        y = np.zeros(p, dtype=self._Uinv.dtype if p else np.int64)
        for slot, i in enumerate(self._keep):
            y[i] = cls.coords[slot]
        c = (self._Uinv @ y) if p else y
        c = np.asarray(c, dtype=object) if c.dtype == object else c
        vec = np.zeros(len(self.ambient_orders), dtype=np.int64)
        B = self.s_span.basis
        for i in range(p):
            vec = (vec + (int(c[i]) % self.L) * B[i]) % self.L
        return vec % np.array(self.ambient_orders, dtype=np.int64)

    def contains(self, vec) -> bool:
        return self.s_span.contains(vec)

    def is_zero_class(self, vec) -> bool:
        return self.t_span.contains(vec)


# ---------------------------------------------------------------------------
# Kernel / cokernel / image / preimage
# ---------------------------------------------------------------------------


def _scaled_matrix(h: AbHom, L: int) -> np.ndarray:
    scales = np.array([L // m for m in h.target.orders], dtype=np.int64).reshape(-1, 1)
    return (h.matrix * scales) % L


def kernel(h: AbHom) -> tuple[FinAbGroup, AbHom]:
    """(K, incl) with incl injective, h . incl == 0, image(incl) = Ker h."""
    L = 1
    for o in h.source.orders + h.target.orders:
        L = lcm(L, o)
    A = _scaled_matrix(h, L)
    span = ModSpan(A.T, L, n=A.shape[0], track=True)
    krows = span.kernel()
    pres = Presentation(h.source.orders, krows)
    K = pres.group
    cols = [pres.rep(g) for g in _pres_generators(pres)]
    incl = AbHom(K, h.source, np.array(cols, dtype=np.int64).T if cols else np.zeros((h.source.rank, 0)))
    return K, incl


def _pres_generators(pres: Presentation) -> list[AbElement]:
    G = pres.group
    return [G.element([int(i == j) for j in range(G.rank)]) for i in range(G.rank)]


def cokernel(h: AbHom) -> tuple[FinAbGroup, AbHom]:
    """(Q, proj) with proj surjective and Ker proj = Im h."""
    n = h.target.rank
    pres = Presentation(h.target.orders, np.eye(n, dtype=np.int64), h.matrix.T)
    Q = pres.group
    cols = []
    for j in range(n):
        e = np.zeros(n, dtype=np.int64)
        e[j] = 1
        cols.append(pres.class_coords(e).coords)
    proj = AbHom(h.target, Q, np.array(cols, dtype=np.int64).T if n else np.zeros((Q.rank, 0)))
    return Q, proj


def image_size(h: AbHom) -> int:
    L = 1
    for o in h.target.orders:
        L = lcm(L, o)
    lattice = h.target.order_lattice()
    span = ModSpan(np.concatenate([h.matrix.T % L, lattice]), L, n=h.target.rank)
    latt = ModSpan(lattice, L, n=h.target.rank)
    return span.size() // latt.size()


def solve_preimage(h: AbHom, t: AbElement):
    """Some s with h(s) == t, or None when t is outside the image."""
    assert t.parent == h.target
    L = 1
    for o in h.source.orders + h.target.orders:
        L = lcm(L, o)
    A = _scaled_matrix(h, L)
    scales = np.array([L // m for m in h.target.orders], dtype=np.int64)
    b = (np.array(t.coords, dtype=np.int64) * scales) % L
    span = ModSpan(A.T, L, n=A.shape[0], track=True)
    c = span.solve(b)
    if c is None:
        return None
    return h.source.element(c)


# ---------------------------------------------------------------------------
# Tensor, exterior square, duals, direct sums
# ---------------------------------------------------------------------------


class TensorProduct:
    """A (x) B as a product of cyclic factors Z/gcd(n_i, m_j), (i, j) lex."""

    def __init__(self, A: FinAbGroup, B: FinAbGroup):
        self.left = A
        self.right = B
        self.group = FinAbGroup(tuple(gcd(n, m) for n in A.orders for m in B.orders))

    def index(self, i: int, j: int) -> int:
        return i * self.right.rank + j

    def pair(self, a: AbElement, b: AbElement) -> AbElement:
        assert a.parent == self.left and b.parent == self.right
        coords = np.outer(np.array(a.coords, dtype=np.int64), np.array(b.coords, dtype=np.int64))
        return self.group.element(coords.reshape(-1))

    def pair_coords(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Vectorized pure-tensor coordinates; inputs shaped (..., rank)."""
        out = a[..., :, None] * b[..., None, :]
        out = out.reshape(out.shape[:-2] + (self.group.rank,))
        return out % np.array(self.group.orders, dtype=np.int64)


class ExteriorSquare:
    """Wedge square of A: factors Z/gcd(n_i, n_j) for i < j."""

    def __init__(self, A: FinAbGroup):
        self.base = A
        pairs = [(i, j) for i in range(A.rank) for j in range(A.rank) if i < j]
        self.pairs = pairs
        self.group = FinAbGroup(tuple(gcd(A.orders[i], A.orders[j]) for i, j in pairs))

    def index(self, i: int, j: int) -> int:
        assert i < j
        return self.pairs.index((i, j))

    def wedge(self, a: AbElement, b: AbElement) -> AbElement:
        assert a.parent == self.base and b.parent == self.base
        coords = [
            a.coords[i] * b.coords[j] - a.coords[j] * b.coords[i] for i, j in self.pairs
        ]
        return self.group.element(coords)


class DualPairing:
    """Characters of A with values in Z/exp(A); the pairing is perfect."""

    def __init__(self, A: FinAbGroup):
        self.base = A
        self.group = FinAbGroup(A.orders)
        self.modulus = A.exponent

    def pairing(self, chi: AbElement, a: AbElement) -> int:
        assert chi.parent == self.group and a.parent == self.base
        e = self.modulus
        total = 0
        for c, x, n in zip(chi.coords, a.coords, self.base.orders):
            total += c * x * (e // n)
        return total % e


def direct_sum(A: FinAbGroup, B: FinAbGroup) -> tuple[FinAbGroup, AbHom, AbHom, AbHom, AbHom]:
    """(S, inl, inr, prl, prr) for S = A + B."""
    S = FinAbGroup(A.orders + B.orders)
    ia = np.concatenate([np.eye(A.rank, dtype=np.int64), np.zeros((B.rank, A.rank), np.int64)])
    ib = np.concatenate([np.zeros((A.rank, B.rank), np.int64), np.eye(B.rank, dtype=np.int64)])
    inl = AbHom(A, S, ia)
    inr = AbHom(B, S, ib)
    prl = AbHom(S, A, ia.T)
    prr = AbHom(S, B, ib.T)
    return S, inl, inr, prl, prr


# ---------------------------------------------------------------------------
# Comparison helpers
# ---------------------------------------------------------------------------


def primary_multiset(A: FinAbGroup) -> Counter:
    out: Counter = Counter()
    for n in A.orders:
        m = n
        p = 2
        while p * p <= m:
            if m % p == 0:
                e = 0
                while m % p == 0:
                    m //= p
                    e += 1
                out[p**e] += 1
            p += 1
        if m > 1:
            out[m] += 1
    return out


def same_invariants(A: FinAbGroup, B: FinAbGroup) -> bool:
    """Abstract isomorphism test via primary cyclic factor multisets."""
    return primary_multiset(A) == primary_multiset(B)


def invariant_factors(A: FinAbGroup) -> list[int]:
    by_prime: dict[int, list[int]] = {}
    for q, mult in primary_multiset(A).items():
        p = min(f for f in range(2, q + 1) if q % f == 0)
        by_prime.setdefault(p, []).extend([q] * mult)
    for p in by_prime:
        by_prime[p].sort(reverse=True)
    depth = max((len(v) for v in by_prime.values()), default=0)
    out = []
    for i in range(depth):
        f = 1
        for p in by_prime:
            if i < len(by_prime[p]):
                f *= by_prime[p][i]
        out.append(f)
    return out


def is_cyclic(A: FinAbGroup) -> bool:
    return len(invariant_factors(A)) <= 1
