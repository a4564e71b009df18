"""Cohomology groups of table groups, presented by Smith normal form.

Cocycles are parameterized by their generator slices: the bar cocycle
condition with first argument restricted to a generating set X determines the
condition for arbitrary first arguments (induction over words), so a cocycle
is determined by the values u(x, w), x in X.  The remaining conditions become
linear constraints on the slice vector; for large groups the constraints are
sampled and the resulting kernel basis is certified by re-checking *every*
generator-slot condition on the reconstructed tables, so the result is exact
regardless of the sample.

Class arithmetic (equality, membership of coboundaries, enumeration) happens
on slice coordinates, where the coboundary subgroup is a Howell span.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm

import numpy as np

from .abelian import AbElement, AbHom, Presentation
from .cochain import Cochain, differential, zero_cochain
from .groups import FiniteGroup, GModule, generated_subgroup
from .intmat import ModSpan, kernel_uniform as _kernel_uniform


class BoundExceeded(RuntimeError):
    """A computation was rejected because it would exceed the work bound."""


def minimal_generating_set(G: FiniteGroup) -> list[int]:
    gens: list[int] = []
    span = {0}
    for g in G.elements():
        if g not in span:
            gens.append(g)
            span = set(generated_subgroup(G, gens).members)
            if len(span) == G.size:
                break
    return gens


@dataclass
class CohomologyClass:
    parent: "CohomologyGroup"
    coords: AbElement
    rep: Cochain

    def __eq__(self, other) -> bool:
        return self.parent is other.parent and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords.coords)

    @property
    def is_zero(self) -> bool:
        return self.coords.is_zero


class CohomologyGroup:
    """H^r(G, M) with explicit cocycle representatives and class decisions."""

    def __init__(self, module: GModule, degree: int, work_bound: int = 1 << 26, rng_seed: int = 0):
        if degree < 0:
            raise ValueError("degree must be >= 0")
        if degree > 2:
            raise ValueError("cohomology presentations are implemented for degrees 0..2")
        self.module = module
        self.degree = degree
        G = module.group
        self.n = G.size
        self.k = module.ab.rank
        self.L = 1
        for o in module.ab.orders:
            self.L = lcm(self.L, o)
        self.L = max(self.L, 1)
        self._rng = np.random.default_rng(rng_seed)
        if degree == 0:
            self._init_degree0()
            return
        if self.n == 1:
            self._init_trivial_group()
            return
        self.X = minimal_generating_set(G)
        self.W = self.n ** (degree - 1)
        self.s = len(self.X) * self.W * self.k
        if self.n * self.W * max(self.k, 1) * max(self.s, 1) > work_bound:
            raise BoundExceeded(
                f"slice tableau of {self.n * self.W * self.k * self.s} entries exceeds bound {work_bound}"
            )
        self._build_tree()
        self._build_expansion()
        self._compute_cocycles()
        self._compute_coboundaries()
        ambient = tuple(self.module.ab.orders) * (len(self.X) * self.W) if self.k else ()
        self.presentation = Presentation(ambient, self._z_rows, self._b_rows)
        self.group = self.presentation.group

    # -- degree 0 ------------------------------------------------------------

    def _init_degree0(self):
        M = self.module
        rows = []
        eye = np.eye(self.k, dtype=np.int64)
        for g in M.group.elements():
            rows.append(M.act[g] - eye)
        A = np.concatenate(rows, axis=0) if rows else np.zeros((0, self.k))
        scales = []
        for _ in M.group.elements():
            scales.extend([self.L // o for o in M.ab.orders])
        A = (A * np.array(scales, dtype=np.int64).reshape(-1, 1)) % self.L
        span = ModSpan(A.T, self.L, n=A.shape[0], track=True)
        self._z_rows = span.kernel()
        self._b_rows = np.zeros((0, self.k), dtype=np.int64)
        self.presentation = Presentation(self.module.ab.orders, self._z_rows, self._b_rows)
        self.group = self.presentation.group
        self.X = []
        self.W = 1
        self.s = self.k

    def _init_trivial_group(self):
        # over the trivial group the full bar complex alternates: d is zero
        # from even degrees and the identity from odd degrees
        self.X = []
        self.W = 1
        self.s = self.k
        eye = np.eye(self.k, dtype=np.int64)
        empty = np.zeros((0, self.k), dtype=np.int64)
        if self.degree % 2 == 0:
            self._z_rows, self._b_rows = eye, eye
        else:
            self._z_rows, self._b_rows = empty, empty
        self.presentation = Presentation(self.module.ab.orders, self._z_rows, self._b_rows)
        self.group = self.presentation.group

    # -- tree / expansion ----------------------------------------------------

    def _build_tree(self):
        G = self.module.group
        self.order: list[int] = list(self.X)
        self.parent: dict[int, tuple[int, int]] = {}
        visited = set(self.X)
        frontier = list(self.X)
        while frontier:
            nxt = []
            for g in frontier:
                for xi, x in enumerate(self.X):
                    f = G.op(x, g)
                    if f not in visited:
                        visited.add(f)
                        self.parent[f] = (xi, g)
                        self.order.append(f)
                        nxt.append(f)
            frontier = nxt
        assert len(visited) == self.n, "generating set failed to reach the whole group"

    def _slice_index(self, xi: int, w: int, i: int) -> int:
        return (xi * self.W + w) * self.k + i

    def _w_tuple(self, w: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.degree - 1):
            out.append(w % self.n)
            w //= self.n
        return tuple(reversed(out))

    def _w_index(self, tup) -> int:
        w = 0
        for t in tup:
            w = w * self.n + int(t)
        return w

    def _correction_columns(self, x: int, g: int):
        """Slice terms of u(x*g, w) beyond act[x] u(g, w), as (sign, w-index array)."""
        G = self.module.group
        r = self.degree
        n = self.n
        if r == 1:
            return [(1, np.zeros(1, dtype=np.int64))]
        # r == 2: +u(x, g*w)  - u(x, g)
        w_idx = np.arange(n, dtype=np.int64)
        fused = G.mul[g, w_idx]
        return [(1, fused), (-1, np.full(n, g, dtype=np.int64))]

    def _build_expansion(self):
        n, W, k, s = self.n, self.W, self.k, self.s
        E = np.zeros((n, W, k, s), dtype=np.int64)
        for xi, x in enumerate(self.X):
            for w in range(W):
                for i in range(k):
                    E[x, w, i, self._slice_index(xi, w, i)] = 1
        act = self.module.act
        for f in self.order:
            if f not in self.parent:
                continue
            xi, g = self.parent[f]
            x = self.X[xi]
            block = np.einsum("ij,wjs->wis", act[x], E[g]) % self.L
            for sign, wmap in self._correction_columns(x, g):
                if self.degree == 1:
                    block[0] += sign * E[x, 0]
                else:
                    block += sign * E[x][wmap]
            E[f] = block % self.L
        self._E = E

    def _corrections_for_pair(self, x: int, xi: int, g: int):
        """Right-hand side of the condition u(x g, w) = act[x] u(g, w) + corr."""
        block = np.einsum("ij,wjs->wis", self.module.act[x], self._E[g]) % self.L
        for sign, wmap in self._correction_columns(x, g):
            if self.degree == 1:
                block[0] += sign * self._E[x, 0]
            else:
                block += sign * self._E[x][wmap]
        return block % self.L

    def _pair_rows(self, xi: int, g: int) -> np.ndarray:
        G = self.module.group
        x = self.X[xi]
        f = G.op(x, g)
        rhs = self._corrections_for_pair(x, xi, g)
        rows = (self._E[f] - rhs) % self.L
        return rows.reshape(self.W * self.k, self.s)

    # -- cocycles ------------------------------------------------------------

    def _all_pairs(self):
        G = self.module.group
        tree = {(xi, g) for f, (xi, g) in self.parent.items()}
        return [
            (xi, g)
            for xi in range(len(self.X))
            for g in G.elements()
            if (xi, g) not in tree
        ]

    def _compute_cocycles(self):
        pairs = self._all_pairs()
        per_pair = self.W * self.k
        target_rows = max(3 * self.s, 64)
        if len(pairs) * per_pair <= max(target_rows * 2, 4096):
            chosen = list(pairs)
        else:
            take = min(len(pairs), max(2, target_rows // max(per_pair, 1)))
            idx = self._rng.permutation(len(pairs))[:take]
            chosen = [pairs[i] for i in idx]
        used = set(chosen)
        for _ in range(12):
            rows = (
                np.concatenate([self._pair_rows(xi, g) for xi, g in chosen], axis=0)
                if chosen
                else np.zeros((0, self.s), dtype=np.int64)
            )
            kern = _kernel_uniform(rows, self.L)
            bad = self._violating_pairs(kern)
            if not bad:
                self._z_rows = kern
                return
            added = 0
            for p in bad:
                if p not in used:
                    used.add(p)
                    chosen.append(p)
                    added += 1
                    if added >= 64:
                        break
        raise AssertionError("cocycle sampling failed to converge")

    def _violating_pairs(self, kern: np.ndarray) -> list[tuple[int, int]]:
        """Exact certificate: re-check every generator-slot condition."""
        if kern.size == 0:
            return []
        tables = self._tables_from_slices(kern)  # (b, n, W, k)
        G = self.module.group
        bad = []
        for xi, x in enumerate(self.X):
            lhs_idx = G.mul[x, np.arange(self.n)]
            lhs = tables[:, lhs_idx]  # (b, n, W, k) value at (x*g, w)
            acted = np.einsum("ij,bgwj->bgwi", self.module.act[x], tables) % self.L
            if self.degree == 1:
                corr = tables[:, x][:, None]  # broadcast over g
                rhs = (acted + corr) % self.L
            else:
                fused = G.mul  # fused[g, w] = g*w
                corr1 = tables[:, x][:, fused]  # (b, n, W, k): u(x, g*w)
                corr2 = tables[:, x][:, :, None, :]  # u(x, g), broadcast over w
                rhs = (acted + corr1 - corr2) % self.L
            diff = (lhs - rhs) % self.L
            for g in np.unique(np.nonzero(diff)[1]):
                bad.append((xi, int(g)))
        return bad

    def _tables_from_slices(self, slices: np.ndarray) -> np.ndarray:
        """Reconstruct full cochain tables from slice vectors (batched)."""
        b = slices.shape[0]
        n, W, k = self.n, self.W, self.k
        T = np.zeros((b, n, W, k), dtype=np.int64)
        for xi, x in enumerate(self.X):
            block = slices[:, (xi * W * k) : ((xi + 1) * W * k)].reshape(b, W, k)
            T[:, x] = block
        act = self.module.act
        G = self.module.group
        for f in self.order:
            if f not in self.parent:
                continue
            xi, g = self.parent[f]
            x = self.X[xi]
            block = np.einsum("ij,bwj->bwi", act[x], T[:, g]) % self.L
            for sign, wmap in self._correction_columns(x, g):
                if self.degree == 1:
                    block[:, 0] += sign * T[:, x, 0]
                else:
                    block += sign * T[:, x][:, wmap]
            T[:, f] = block % self.L
        return T

    # -- coboundaries ----------------------------------------------------------

    def _compute_coboundaries(self):
        r = self.degree
        gens = []
        if r == 1:
            for i in range(self.k):
                c = zero_cochain(self.module, 0)
                c.table[i] = 1
                gens.append(c)
        else:
            for g in range(self.n):
                for i in range(self.k):
                    c = zero_cochain(self.module, 1)
                    c.table[g, i] = 1
                    gens.append(c)
        rows = [self.slice_coords(differential(c)) for c in gens]
        self._b_rows = (
            np.array(rows, dtype=np.int64) if rows else np.zeros((0, self.s), dtype=np.int64)
        )

    # -- public API ------------------------------------------------------------

    @property
    def size(self) -> int:
        return self.group.cardinality

    @property
    def z_rows(self) -> np.ndarray:
        """Generators of the cocycle subgroup, in slice coordinates."""
        return self._z_rows

    @property
    def b_rows(self) -> np.ndarray:
        """Generators of the coboundary subgroup, in slice coordinates."""
        return self._b_rows

    @property
    def ambient_orders(self) -> tuple[int, ...]:
        return tuple(self.module.ab.orders) * (self.s // max(self.k, 1)) if self.k else ()

    def slice_coords(self, c: Cochain) -> np.ndarray:
        """Slice coordinate vector of a cochain table."""
        if self.degree == 0 or self.n == 1:
            return np.asarray(c.table, dtype=np.int64).reshape(self.s)
        t = c.table.reshape(self.n, self.W, self.k)
        out = np.zeros(self.s, dtype=np.int64)
        for xi, x in enumerate(self.X):
            out[(xi * self.W * self.k) : ((xi + 1) * self.W * self.k)] = t[x].reshape(-1)
        return out

    def is_cocycle(self, c: Cochain) -> bool:
        """Exact check via every generator-slot condition (degree 1, 2)."""
        if self.degree == 0:
            return all(
                (self.module.apply(g, c.table) == c.table).all()
                for g in self.module.group.elements()
            )
        if self.n == 1:
            return self.degree % 2 == 0 or not c.table.any()
        vec = self.slice_coords(c)
        tables = self._tables_from_slices(vec.reshape(1, -1))
        if (tables[0].reshape(c.table.shape) != c.table).any():
            return False
        return not self._violating_pairs(vec.reshape(1, -1))

    def class_of(self, c: Cochain) -> CohomologyClass:
        assert self.is_cocycle(c), "not a cocycle"
        coords = self.presentation.class_coords(self.slice_coords(c))
        return CohomologyClass(self, coords, c)

    def rep(self, coords: AbElement) -> Cochain:
        vec = self.presentation.rep(coords)
        shape = (self.n,) * self.degree + (self.k,)
        if self.degree == 0 or self.n == 1:
            return Cochain(self.module, self.degree, vec.reshape(shape))
        table = self._tables_from_slices(vec.reshape(1, -1))[0]
        return Cochain(self.module, self.degree, table.reshape(shape))

    def classes(self, cap: int = 20000) -> list[CohomologyClass]:
        if self.size > cap:
            raise BoundExceeded(f"{self.size} classes exceed enumeration cap {cap}")
        out = []
        for coords in self.group.elements():
            out.append(CohomologyClass(self, coords, self.rep(coords)))
        return out

    def is_coboundary(self, c: Cochain) -> bool:
        assert self.is_cocycle(c), "membership test requires a cocycle"
        return self.presentation.is_zero_class(self.slice_coords(c))

    def cocycles(self, cap: int = 1 << 16) -> list[Cochain]:
        """Every cocycle, by enumerating the slice-coordinate span."""
        mods = np.array(
            (tuple(self.module.ab.orders) * (self.s // max(self.k, 1)))[: self.s],
            dtype=np.int64,
        )
        if self.s == 0:
            return [zero_cochain(self.module, self.degree)]
        span = self.presentation.s_span
        lattice = self.presentation.t_span  # contains the order lattice
        total = span.size()
        out_vecs = {tuple(np.zeros(self.s, dtype=np.int64))}
        frontier = [np.zeros(self.s, dtype=np.int64)]
        basis = [b % mods for b in span.basis]
        while frontier:
            v = frontier.pop()
            for b in basis:
                w = (v + b) % mods
                t = tuple(int(x) for x in w)
                if t not in out_vecs:
                    if len(out_vecs) > cap:
                        raise BoundExceeded(f"more than {cap} cocycles")
                    out_vecs.add(t)
                    frontier.append(np.array(t, dtype=np.int64))
        out = []
        shape = (self.n,) * self.degree + (self.k,)
        for t in sorted(out_vecs):
            vec = np.array(t, dtype=np.int64)
            if self.degree == 0 or self.n == 1:
                out.append(Cochain(self.module, self.degree, vec.reshape(shape)))
            else:
                table = self._tables_from_slices(vec.reshape(1, -1))[0]
                out.append(Cochain(self.module, self.degree, table.reshape(shape)))
        return out

    def classes_equal(self, c1: Cochain, c2: Cochain) -> bool:
        return self.is_coboundary(c1 - c2)

    def coboundary_witness(self, c: Cochain):
        """A cochain b with d(b) == c exactly, or None."""
        if self.degree == 0:
            return None
        vec = self.slice_coords(c) % self.L
        lattice = np.kron(
            np.eye(self.s // self.k, dtype=np.int64) if self.k else np.zeros((0, 0)),
            np.diag(np.array(self.module.ab.orders, dtype=np.int64)),
        ).reshape(-1, self.s) if self.s else np.zeros((0, 0), dtype=np.int64)
        gens = np.concatenate([self._b_rows, lattice]) if self.s else self._b_rows
        span = ModSpan(gens, self.L, n=self.s, track=True)
        sol = span.solve(vec)
        if sol is None:
            return None
        sol = sol[: self._b_rows.shape[0]]  # coefficients of the basis coboundaries
        shape = (self.n,) * (self.degree - 1) + (self.k,)
        witness = Cochain(self.module, self.degree - 1, np.asarray(sol, dtype=np.int64).reshape(shape))
        d = differential(witness)
        assert (d.table == c.table).all(), "coboundary witness mismatch"
        return witness


def cohomology(module: GModule, degree: int, work_bound: int = 1 << 26) -> CohomologyGroup:
    return CohomologyGroup(module, degree, work_bound=work_bound)


# ---------------------------------------------------------------------------
# Short exact sequences and connecting maps
# ---------------------------------------------------------------------------


@dataclass
class ShortExactSequence:
    sub: GModule
    mid: GModule
    quot: GModule
    incl: AbHom
    proj: AbHom

    def __post_init__(self):
        from .abelian import image_size, kernel

        assert self.sub.group is self.mid.group is self.quot.group
        G = self.mid.group
        for g in G.elements():
            mods_mid = np.array(self.mid.ab.orders, dtype=np.int64).reshape(-1, 1)
            assert (
                (self.incl.matrix @ self.sub.act[g]) % mods_mid
                == (self.mid.act[g] @ self.incl.matrix) % mods_mid
            ).all(), "inclusion not equivariant"
            mods_q = np.array(self.quot.ab.orders, dtype=np.int64).reshape(-1, 1)
            assert (
                (self.proj.matrix @ self.mid.act[g]) % mods_q
                == (self.quot.act[g] @ self.proj.matrix) % mods_q
            ).all(), "projection not equivariant"
        K, _ = kernel(self.incl)
        assert K.cardinality == 1, "inclusion must be injective"
        assert image_size(self.proj) == self.quot.ab.cardinality, "projection must be surjective"
        assert self.proj.compose(self.incl).is_zero, "composition must vanish"
        K2, _ = kernel(self.proj)
        assert K2.cardinality == self.sub.ab.cardinality, "sequence not exact in the middle"

    def section_of_proj(self):
        """Cached set-theoretic section of proj (pointwise preimages)."""
        from .abelian import solve_preimage

        cache: dict[tuple, np.ndarray] = {}

        def lift(coords) -> np.ndarray:
            key = tuple(int(x) for x in coords)
            if key not in cache:
                pre = solve_preimage(self.proj, self.quot.ab.element(key))
                assert pre is not None
                cache[key] = np.array(pre.coords, dtype=np.int64)
            return cache[key]

        return lift

    def pull_back(self):
        """Exact pointwise preimage under the (injective) inclusion."""
        from .abelian import solve_preimage

        cache: dict[tuple, np.ndarray] = {}

        def pull(coords) -> np.ndarray:
            key = tuple(int(x) for x in coords)
            if key not in cache:
                pre = solve_preimage(self.incl, self.mid.ab.element(key))
                assert pre is not None, "element does not come from the subobject"
                cache[key] = np.array(pre.coords, dtype=np.int64)
            return cache[key]

        return pull


def connecting_cochain(ses: ShortExactSequence, c: Cochain) -> Cochain:
    """delta at the cochain level: lift, differentiate, pull back."""
    assert c.module is ses.quot or c.module.ab == ses.quot.ab
    lift = ses.section_of_proj()
    pull = ses.pull_back()
    n = ses.mid.group.size
    r = c.degree
    flatq = c.table.reshape(-1, ses.quot.ab.rank)
    lifted = np.array([lift(v) for v in flatq], dtype=np.int64)
    b = Cochain(ses.mid, r, lifted.reshape((n,) * r + (ses.mid.ab.rank,)))
    db = differential(b)
    flatm = db.table.reshape(-1, ses.mid.ab.rank)
    pulled = np.array([pull(v) for v in flatm], dtype=np.int64)
    return Cochain(ses.sub, r + 1, pulled.reshape((n,) * (r + 1) + (ses.sub.ab.rank,)))


def connecting_map(
    ses: ShortExactSequence, r: int, Hq: CohomologyGroup | None = None, Hs: CohomologyGroup | None = None
):
    """The connecting homomorphism H^r(G, quot) -> H^{r+1}(G, sub) on classes."""
    Hq = Hq or cohomology(ses.quot, r)
    Hs = Hs or cohomology(ses.sub, r + 1)

    def delta(cls: CohomologyClass) -> CohomologyClass:
        return Hs.class_of(connecting_cochain(ses, cls.rep))

    return delta, Hq, Hs


# ---------------------------------------------------------------------------
# Independent oracle: cohomology of cyclic groups via norm and augmentation
# ---------------------------------------------------------------------------


def cyclic_cohomology_size(M: GModule, degree: int) -> int:
    """|H^r| for a cyclic table group, from fixed points, norms and kernels."""
    G = M.group
    gen = None
    for g in G.elements():
        if G.order_of(g) == G.size:
            gen = g
            break
    assert gen is not None, "group is not cyclic"
    k = M.ab.rank
    eye = np.eye(k, dtype=np.int64)
    norm = np.zeros((k, k), dtype=np.int64)
    x = 0
    for _ in range(G.size):
        norm += M.act[x]
        x = G.op(x, gen)
    sigma_minus_1 = M.act[gen] - eye
    from .abelian import image_size, kernel

    mods = M.ab.orders
    h_norm = AbHom(M.ab, M.ab, norm)
    h_sig = AbHom(M.ab, M.ab, sigma_minus_1)
    if degree == 0:
        K, _ = kernel(h_sig)
        return K.cardinality
    if degree % 2 == 1:
        Kn, _ = kernel(h_norm)
        return Kn.cardinality // image_size(h_sig)
    Ks, _ = kernel(h_sig)
    return Ks.cardinality // image_size(h_norm)
