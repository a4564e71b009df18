"""Crossed-product central extensions F = Z x_Phi (M + M) and their twists.

The multiplication is (z,a)(z',a') = (z + z' + Phi(a,a'), a + a') with
Phi((x,y),(x',y')) = phi(x (x) y') for an equivariant phi: M (x) M -> Z.
Everything operates on coordinate arrays so exhaustive sweeps over |F| up to
2^14 stay cheap; a table-group materialization is available below 2^9.

The twisted-form calculus (twisted cocycle condition, the connecting map in
closed form, conjugacy witnesses, odd-power conjugators) lives here too; each
closed form ships next to a definitional evaluation so tests can compare the
two paths on every input.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm

import numpy as np

from .abelian import (
    AbElement,
    AbHom,
    FinAbGroup,
    TensorProduct,
    kernel,
    solve_preimage,
)
from .cochain import Cochain, ComposedPairing, cup, differential, pointwise_tensor, zero_cochain
from .cohomology import cohomology
from .groups import (
    FiniteGroup,
    GModule,
    InducedModule,
    Subgroup,
    induced_module,
    quotient_module,
    tensor_module,
)
from .intmat import ModSpan, kernel_uniform


def pullback_module(M: GModule, Q: FiniteGroup, hom: np.ndarray) -> GModule:
    """Module over Q obtained from a surjection Q -> M.group given elementwise."""
    act = M.act[np.asarray(hom, dtype=np.int64)]
    return GModule(Q, M.ab, act)


def transport_datum(datum: "BKDatum", Q: FiniteGroup, hom: np.ndarray) -> "BKDatum":
    """The same crossed-product data with cocycles living on another quotient.

    `hom` sends each element of Q to an element of the original quotient; the
    modules are pulled back and the pairing tensor is reused verbatim.
    """
    import dataclasses

    hom = np.asarray(hom, dtype=np.int64)
    for a in Q.elements():
        for b in Q.elements():
            assert hom[Q.op(a, b)] == datum.ggroup.op(int(hom[a]), int(hom[b])), (
                "transport requires a homomorphism"
            )
    Zq = pullback_module(datum.Zmod, Q, hom)
    Mq = pullback_module(datum.Msum, Q, hom)
    Mmodq = pullback_module(datum.Mmod, Q, hom)
    MMq = pullback_module(datum.MMmod, Q, hom)
    cp = CrossedProduct(Zq, Mq, datum.cp.phi_tensor)
    return dataclasses.replace(
        datum, ggroup=Q, Zmod=Zq, Msum=Mq, Mmod=Mmodq, MMmod=MMq, cp=cp
    )


@dataclass
class CPElement:
    z: AbElement
    a: AbElement


class CrossedProduct:
    """The group F for modules over an acting group Q, with coordinate ops."""

    def __init__(self, Zmod: GModule, Msum: GModule, phi_tensor: np.ndarray):
        assert Zmod.group is Msum.group
        self.Q = Zmod.group
        self.Zmod = Zmod
        self.Msum = Msum
        self.kz = Zmod.ab.rank
        self.ka = Msum.ab.rank
        # Phi(a, a')_k = sum_{i,j} phi_tensor[k, i, j] a_i a'_j
        self.phi_tensor = np.asarray(phi_tensor, dtype=np.int64).reshape(self.kz, self.ka, self.ka)
        self.zmods = np.array(Zmod.ab.orders, dtype=np.int64)
        self.amods = np.array(Msum.ab.orders, dtype=np.int64)
        self._check_equivariance()

    def _check_equivariance(self):
        for q in self.Q.elements():
            moved = np.einsum("kij,ia,jb->kab", self.phi_tensor, self.Msum.act[q], self.Msum.act[q])
            expect = np.einsum("lk,kij->lij", self.Zmod.act[q], self.phi_tensor)
            if ((moved - expect) % self.zmods.reshape(-1, 1, 1)).any():
                raise ValueError("pairing is not equivariant for the given action")

    @property
    def order(self) -> int:
        return self.Zmod.ab.cardinality * self.Msum.ab.cardinality

    # -- coordinate arithmetic (vectorized over leading axes) ----------------

    def pair(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = np.einsum("kij,...i,...j->...k", self.phi_tensor, a, b)
        return out % self.zmods

    def mul(self, z1, a1, z2, a2):
        z = (np.asarray(z1) + np.asarray(z2) + self.pair(a1, a2)) % self.zmods
        a = (np.asarray(a1) + np.asarray(a2)) % self.amods
        return z, a

    def inv(self, z, a):
        zi = (self.pair(a, a) - np.asarray(z)) % self.zmods
        ai = (-np.asarray(a)) % self.amods
        return zi, ai

    def power(self, z, a, k: int):
        zz = np.zeros_like(np.asarray(z))
        aa = np.zeros_like(np.asarray(a))
        if k < 0:
            z, a = self.inv(z, a)
            k = -k
        for _ in range(k):
            zz, aa = self.mul(zz, aa, z, a)
        return zz, aa

    def conjugate(self, z, a, zp, ap):
        """(z,a)(z',a')(z,a)^-1 = (z' + Phi(a,a') - Phi(a',a), a')."""
        zc = (np.asarray(zp) + self.pair(a, ap) - self.pair(ap, a)) % self.zmods
        return zc, np.asarray(ap) % self.amods

    def commutator(self, z, a, zp, ap):
        """[(z,a),(z',a')] = (Phi(a,a') - Phi(a',a), 0)."""
        zc = (self.pair(a, ap) - self.pair(ap, a)) % self.zmods
        return zc, np.zeros_like(np.asarray(ap))

    def act(self, q: int, z, a):
        return self.Zmod.apply(q, np.asarray(z)), self.Msum.apply(q, np.asarray(a))

    def element(self, z, a) -> CPElement:
        return CPElement(self.Zmod.ab.element(z), self.Msum.ab.element(a))

    # -- structured subgroup computations -------------------------------------

    def antisym_radical(self) -> np.ndarray:
        """Rows spanning {a : Phi(a, b) == Phi(b, a) for all b}."""
        anti = (self.phi_tensor - self.phi_tensor.transpose(0, 2, 1)) % self.zmods.reshape(-1, 1, 1)
        L = 1
        for o in tuple(self.Zmod.ab.orders) + tuple(self.Msum.ab.orders):
            L = lcm(L, o)
        # one condition row per (probe index j, Z coordinate k)
        A = anti.transpose(2, 0, 1).reshape(self.ka * self.kz, self.ka)
        scales = np.tile(np.array([L // int(o) for o in self.Zmod.ab.orders], dtype=np.int64), self.ka)
        A = (A * scales.reshape(-1, 1)) % L
        return kernel_uniform(A, L)

    def center_structured(self) -> list[np.ndarray]:
        """Generators (as (z,a)-coordinate rows) of the center, via the radical."""
        rad = self.antisym_radical()
        gens = []
        for i, o in enumerate(self.Zmod.ab.orders):
            row = np.zeros(self.kz + self.ka, dtype=np.int64)
            row[i] = 1
            gens.append(row)
        for r in rad:
            row = np.zeros(self.kz + self.ka, dtype=np.int64)
            row[self.kz :] = r % self.amods
            gens.append(row)
        return gens

    def derived_structured(self) -> list[np.ndarray]:
        """Generators of [F, F] inside Z: antisymmetrizations of basis pairs."""
        gens = []
        eye = np.eye(self.ka, dtype=np.int64)
        for i in range(self.ka):
            for j in range(self.ka):
                z = (self.pair(eye[i], eye[j]) - self.pair(eye[j], eye[i])) % self.zmods
                if z.any():
                    gens.append(z)
        return gens

    def center_and_derived_brute(self):
        """Element lists by brute force; requires |F| <= 2^8."""
        if self.order > 256:
            raise ValueError("brute-force center needs |F| <= 256")
        elems = list(self._all_elements())
        center = []
        for z, a in elems:
            ok = True
            for z2, a2 in elems:
                l = self.mul(z, a, z2, a2)
                r = self.mul(z2, a2, z, a)
                if (l[0] != r[0]).any() or (l[1] != r[1]).any():
                    ok = False
                    break
            if ok:
                center.append((tuple(z), tuple(a)))
        derived_gens = set()
        for z, a in elems:
            for z2, a2 in elems:
                c = self.commutator(z, a, z2, a2)
                derived_gens.add((tuple(int(v) for v in c[0]), tuple(int(v) for v in c[1])))
        # close the generated subgroup
        derived = {((0,) * self.kz, (0,) * self.ka)}
        frontier = list(derived_gens)
        while frontier:
            g = frontier.pop()
            for h in list(derived):
                z, a = self.mul(np.array(g[0]), np.array(g[1]), np.array(h[0]), np.array(h[1]))
                t = (tuple(int(v) for v in z), tuple(int(v) for v in a))
                if t not in derived:
                    derived.add(t)
                    frontier.append(t)
        return center, sorted(derived)

    def _all_elements(self):
        from itertools import product as iproduct

        for zc in iproduct(*(range(o) for o in self.Zmod.ab.orders)):
            for ac in iproduct(*(range(o) for o in self.Msum.ab.orders)):
                yield np.array(zc, dtype=np.int64), np.array(ac, dtype=np.int64)

    def as_table_group(self, cap: int = 512) -> tuple[FiniteGroup, "CPIndex"]:
        if self.order > cap:
            raise ValueError(f"|F| = {self.order} exceeds table cap {cap}")
        idx = CPIndex(self)
        n = self.order
        Z = idx.z_coords  # (nz, kz)
        A = idx.a_coords  # (na, ka)
        na = A.shape[0]
        mul = np.zeros((n, n), dtype=np.int64)
        zi, ai = np.divmod(np.arange(n), na)
        for e1 in range(n):
            z1, a1 = Z[zi[e1]], A[ai[e1]]
            z_all = (z1[None, :] + Z[zi] + self.pair(a1[None, :], A[ai])) % self.zmods
            a_all = (a1[None, :] + A[ai]) % self.amods
            mul[e1] = idx.z_index(z_all) * na + idx.a_index(a_all)
        G = FiniteGroup(mul, name=f"F{self.order}")
        return G, idx


class CPIndex:
    """Deterministic element indexing: index = z-index * |Msum| + a-index."""

    def __init__(self, cp: CrossedProduct):
        self.cp = cp
        self.z_coords = _all_coords(cp.Zmod.ab)
        self.a_coords = _all_coords(cp.Msum.ab)
        self.z_strides = _mixed_radix_strides(cp.Zmod.ab.orders)
        self.a_strides = _mixed_radix_strides(cp.Msum.ab.orders)

    def z_index(self, coords) -> np.ndarray:
        c = np.asarray(coords, dtype=np.int64)
        return (c @ self.z_strides).astype(np.int64)

    def a_index(self, coords) -> np.ndarray:
        c = np.asarray(coords, dtype=np.int64)
        return (c @ self.a_strides).astype(np.int64)

    def index_of(self, z, a) -> int:
        return int(self.z_index(np.asarray(z).reshape(1, -1))[0]) * self.a_coords.shape[0] + int(
            self.a_index(np.asarray(a).reshape(1, -1))[0]
        )

    def coords_of(self, idx: int):
        na = self.a_coords.shape[0]
        return self.z_coords[idx // na], self.a_coords[idx % na]


def _all_coords(A: FinAbGroup) -> np.ndarray:
    from itertools import product as iproduct

    rows = list(iproduct(*(range(o) for o in A.orders)))
    if not rows:
        return np.zeros((1, 0), dtype=np.int64)
    return np.array(rows, dtype=np.int64)


def _mixed_radix_strides(orders) -> np.ndarray:
    k = len(orders)
    strides = np.zeros(k, dtype=np.int64)
    acc = 1
    for i in range(k - 1, -1, -1):
        strides[i] = acc
        acc *= orders[i]
    return strides


# ---------------------------------------------------------------------------
# The induced-module instance
# ---------------------------------------------------------------------------


@dataclass
class BKDatum:
    """All data of one crossed-product instance built from (A, g)."""

    A: FinAbGroup
    ggroup: FiniteGroup
    Mmod: InducedModule
    MMmod: GModule
    tensorMM: TensorProduct
    AA: TensorProduct
    j: AbHom
    Z: FinAbGroup
    phi: AbHom
    Zmod: GModule
    Msum: GModule
    cp: CrossedProduct
    x_proj: AbHom
    y_proj: AbHom
    x_inj: AbHom
    y_inj: AbHom

    @property
    def phi_pairing(self) -> ComposedPairing:
        return ComposedPairing(self.tensorMM, self.phi)


def build_bk(A: FinAbGroup, ggroup: FiniteGroup) -> BKDatum:
    """Crossed product from the base module and the Galois quotient."""
    H1 = Subgroup.make(ggroup, [0])
    M = induced_module(ggroup, H1, A)
    MM, tensorMM = tensor_module(M, M)
    AA = TensorProduct(A, A)
    ka = A.rank
    kaa = AA.group.rank
    m = M.n_cosets
    rows = np.zeros((MM.ab.rank, kaa), dtype=np.int64)
    for c1 in range(m):
        for c2 in range(m):
            for t in range(kaa):
                i, j = divmod(t, ka)
                rows[tensorMM.index(c1 * ka + i, c2 * ka + j), t] = 1
    j_hom = AbHom(AA.group, MM.ab, rows)
    Zmod, phi, _pres = quotient_module(MM, j_hom.matrix.T)
    Z = Zmod.ab
    km = M.ab.rank
    Msum_group = FinAbGroup(tuple(M.ab.orders) * 2)
    acts = np.zeros((ggroup.size, 2 * km, 2 * km), dtype=np.int64)
    for g in ggroup.elements():
        acts[g, :km, :km] = M.act[g]
        acts[g, km:, km:] = M.act[g]
    Msum = GModule(ggroup, Msum_group, acts)
    # Phi((x,y),(x',y')) = phi(x (x) y')
    kz = Z.rank
    phi_tensor = np.zeros((kz, 2 * km, 2 * km), dtype=np.int64)
    for i in range(km):
        for jj in range(km):
            phi_tensor[:, i, km + jj] = phi.matrix[:, tensorMM.index(i, jj)]
    cp = CrossedProduct(Zmod, Msum, phi_tensor)
    eye = np.eye(km, dtype=np.int64)
    zero = np.zeros((km, km), dtype=np.int64)
    x_proj = AbHom(Msum_group, M.ab, np.concatenate([eye, zero], axis=1))
    y_proj = AbHom(Msum_group, M.ab, np.concatenate([zero, eye], axis=1))
    x_inj = AbHom(M.ab, Msum_group, np.concatenate([eye, zero], axis=0))
    y_inj = AbHom(M.ab, Msum_group, np.concatenate([zero, eye], axis=0))
    return BKDatum(
        A=A, ggroup=ggroup, Mmod=M, MMmod=MM, tensorMM=tensorMM, AA=AA, j=j_hom,
        Z=Z, phi=phi, Zmod=Zmod, Msum=Msum, cp=cp,
        x_proj=x_proj, y_proj=y_proj, x_inj=x_inj, y_inj=y_inj,
    )


def pairing_is_nondegenerate(phi: AbHom, tensor: TensorProduct) -> bool:
    """Both radicals of (x, y) -> phi(x (x) y) vanish."""
    M = tensor.left
    km = M.rank
    kz = phi.target.rank
    left = np.zeros((kz * km, km), dtype=np.int64)
    right = np.zeros((kz * km, km), dtype=np.int64)
    for j in range(km):
        for i in range(km):
            left[j * kz : (j + 1) * kz, i] = phi.matrix[:, tensor.index(i, j)]
            right[j * kz : (j + 1) * kz, i] = phi.matrix[:, tensor.index(j, i)]
    torders = tuple(phi.target.orders) * km
    lk, _ = kernel(AbHom(M, FinAbGroup(torders), left))
    rk, _ = kernel(AbHom(M, FinAbGroup(torders), right))
    return lk.cardinality == 1 and rk.cardinality == 1


def is_nondegenerate(datum: BKDatum) -> bool:
    return pairing_is_nondegenerate(datum.phi, datum.tensorMM)


def center_equals_embedded_Z(datum: BKDatum) -> dict:
    """Structured check Z(F) = [F,F] = Z; brute-forced too when |F| <= 2^8."""
    cp = datum.cp
    report: dict = {"Z_size": cp.Zmod.ab.cardinality}
    La = 1
    for o in cp.Msum.ab.orders:
        La = lcm(La, o)
    rad = cp.antisym_radical()
    alat = np.diag(cp.amods)
    radspan = ModSpan(np.concatenate([rad, alat]) if rad.size else alat, La, n=cp.ka)
    alat_span = ModSpan(alat, La, n=cp.ka)
    report["radical_size"] = radspan.size() // alat_span.size()
    report["center_is_Z"] = report["radical_size"] == 1
    Lz = 1
    for o in cp.Zmod.ab.orders:
        Lz = lcm(Lz, o)
    dgens = cp.derived_structured()
    zlat = np.diag(cp.zmods)
    dspan = ModSpan(
        np.concatenate([np.array(dgens).reshape(-1, cp.kz), zlat]) if dgens else zlat,
        Lz,
        n=cp.kz,
    )
    zlat_span = ModSpan(zlat, Lz, n=cp.kz)
    report["derived_size"] = dspan.size() // zlat_span.size()
    report["derived_is_Z"] = report["derived_size"] == report["Z_size"]
    if cp.order <= 256:
        center, derived = cp.center_and_derived_brute()
        report["brute_center_size"] = len(center)
        report["brute_derived_size"] = len(derived)
        report["brute_center_is_Z"] = (
            len(center) == report["Z_size"] and all(not any(a) for _, a in center)
        )
        report["brute_derived_is_Z"] = len(derived) == report["Z_size"]
    report["ok"] = report["center_is_Z"] and report["derived_is_Z"] and all(
        report.get(k, True) for k in ("brute_center_is_Z", "brute_derived_is_Z")
    )
    return report


# ---------------------------------------------------------------------------
# Twisted forms
# ---------------------------------------------------------------------------


class TwistedForm:
    """The crossed product with its action twisted by a 1-cocycle into M + M."""

    def __init__(self, datum: BKDatum, twist: Cochain | None = None):
        self.datum = datum
        self.cp = datum.cp
        if twist is None:
            twist = zero_cochain(datum.Msum, 1)
        assert twist.degree == 1 and twist.module.ab == datum.Msum.ab
        self.twist = twist
        H1 = cohomology(datum.Msum, 1)
        assert H1.is_cocycle(twist), "twisting datum must be a cocycle"

    def act(self, q: int, z, a):
        """sigma ._a (z, alpha) in closed form."""
        cp = self.cp
        zs, als = cp.act(q, z, a)
        t = self.twist.table[q]
        corr = (cp.pair(t, als) - cp.pair(als, t)) % cp.zmods
        return (zs + corr) % cp.zmods, als

    def act_definitional(self, q: int, z, a):
        """(0, a_sigma) * sigma(z,a) * (0, a_sigma)^-1."""
        cp = self.cp
        zs, als = cp.act(q, z, a)
        t = self.twist.table[q]
        z1, a1 = cp.mul(np.zeros_like(zs), t, zs, als)
        ti = cp.inv(np.zeros_like(zs), t)
        return cp.mul(z1, a1, *ti)


def twisted_cocycle_condition_formula(tf: TwistedForm, z: Cochain, a: Cochain) -> bool:
    """d z + phi_*(tx u y + x u ty + x u y + d(x (x) ty)) == 0 and a a cocycle."""
    d = tf.datum
    H1sum = cohomology(d.Msum, 1)
    if not H1sum.is_cocycle(a):
        return False
    x = a.mapped(d.x_proj, d.Mmod)
    y = a.mapped(d.y_proj, d.Mmod)
    tx = tf.twist.mapped(d.x_proj, d.Mmod)
    ty = tf.twist.mapped(d.y_proj, d.Mmod)
    t = d.tensorMM
    w = (
        cup(tx, y, t, d.MMmod)
        + cup(x, ty, t, d.MMmod)
        + cup(x, y, t, d.MMmod)
        + differential(pointwise_tensor(x, ty, t, d.MMmod))
    )
    lhs = differential(z) + w.mapped(d.phi, d.Zmod)
    return lhs.is_zero


def twisted_cocycle_condition_definitional(tf: TwistedForm, z: Cochain, a: Cochain) -> bool:
    """f_s (s ._a f_t) f_{st}^{-1} == 1 for all s, t."""
    cp = tf.cp
    Q = cp.Q
    for s in Q.elements():
        for t in Q.elements():
            zt, at = tf.act(s, z.table[t], a.table[t])
            z1, a1 = cp.mul(z.table[s], a.table[s], zt, at)
            st = Q.op(s, t)
            zi, ai = cp.inv(z.table[st], a.table[st])
            zr, ar = cp.mul(z1, a1, zi, ai)
            if zr.any() or ar.any():
                return False
    return True


def delta_twisted_formula(tf: TwistedForm, a: Cochain) -> Cochain:
    """phi_*((x + tx) u (y + ty) - tx u ty) as a 2-cochain valued in Z."""
    d = tf.datum
    x = a.mapped(d.x_proj, d.Mmod)
    y = a.mapped(d.y_proj, d.Mmod)
    tx = tf.twist.mapped(d.x_proj, d.Mmod)
    ty = tf.twist.mapped(d.y_proj, d.Mmod)
    t = d.tensorMM
    w = cup(x + tx, y + ty, t, d.MMmod) - cup(tx, ty, t, d.MMmod)
    return w.mapped(d.phi, d.Zmod)


def delta_twisted_definitional(tf: TwistedForm, a: Cochain) -> Cochain:
    """Connecting value from the lift (0, a): f_s (s ._a f_t) f_{st}^{-1}."""
    cp = tf.cp
    Q = cp.Q
    n = Q.size
    out = np.zeros((n, n, cp.kz), dtype=np.int64)
    zero = np.zeros(cp.kz, dtype=np.int64)
    for s in Q.elements():
        for t in Q.elements():
            zt, at = tf.act(s, zero, a.table[t])
            z1, a1 = cp.mul(zero, a.table[s], zt, at)
            st = Q.op(s, t)
            zi, ai = cp.inv(zero, a.table[st])
            zr, ar = cp.mul(z1, a1, zi, ai)
            assert not ar.any(), "connecting value must be central"
            out[s, t] = zr
    return Cochain(tf.datum.Zmod, 2, out)


def cohomologous_witness(tf: TwistedForm, f, fp, alpha: AbElement):
    """The comparison cocycle c for twisted cocycles f, f' with a' = a + d alpha.

    Returns (c, verdict, conjugator) where verdict is True when c is a
    coboundary, in which case conjugator = (zeta, alpha) satisfies
    f'_s = (zeta, alpha)^{-1} f_s (s ._a (zeta, alpha)) for every s.
    """
    d = tf.datum
    z, a = f
    zp, ap = fp
    assert alpha.parent == d.Msum.ab
    # d alpha must match a' - a
    dalpha = differential(Cochain(d.Msum, 0, np.array(alpha.coords)))
    assert (ap - a) == dalpha, "alpha does not connect the two cocycles"
    xi = d.x_proj(alpha)
    eta = d.y_proj(alpha)
    x = a.mapped(d.x_proj, d.Mmod)
    tx = tf.twist.mapped(d.x_proj, d.Mmod)
    ty = tf.twist.mapped(d.y_proj, d.Mmod)
    yp = ap.mapped(d.y_proj, d.Mmod)
    t = d.tensorMM
    eta_c = Cochain(d.Mmod, 0, np.array(eta.coords))
    xi_c = Cochain(d.Mmod, 0, np.array(xi.coords))
    w = (
        -cup(x + tx, eta_c, t, d.MMmod)
        + cup(xi_c, yp + ty, t, d.MMmod)
        + pointwise_tensor(differential(xi_c), ty, t, d.MMmod)
    )
    c = (zp - z) + w.mapped(d.phi, d.Zmod)
    H1z = cohomology(d.Zmod, 1)
    assert H1z.is_cocycle(c), "comparison cochain failed to be a cocycle"
    zeta_c = H1z.coboundary_witness(c)
    if zeta_c is None:
        return c, False, None
    zeta = d.Zmod.ab.element(zeta_c.table)
    # pointwise identity f'_s = (zeta,alpha)^{-1} f_s (s ._a (zeta,alpha))
    cp = tf.cp
    zcoords = np.array(zeta.coords, dtype=np.int64)
    acoords = np.array(alpha.coords, dtype=np.int64)
    for s in tf.cp.Q.elements():
        zi, ai = cp.inv(zcoords, acoords)
        z1, a1 = cp.mul(zi, ai, z.table[s], a.table[s])
        zs, as_ = tf.act(s, zcoords, acoords)
        z2, a2 = cp.mul(z1, a1, zs, as_)
        assert (z2 == zp.table[s]).all() and (a2 == ap.table[s]).all(), (
            "conjugation witness failed the pointwise identity"
        )
    return c, True, (zeta, alpha)


def kernel_module(Mmod: GModule, h: AbHom) -> tuple[GModule, AbHom]:
    """Kernel of an equivariant hom as a module, with its inclusion."""
    K, incl = kernel(h)
    acts = np.zeros((Mmod.group.size, K.rank, K.rank), dtype=np.int64)
    gens = [K.element([int(i == j) for j in range(K.rank)]) for i in range(K.rank)]
    for g in Mmod.group.elements():
        cols = []
        for gen in gens:
            moved = Mmod.ab.element(Mmod.apply(g, np.array(incl(gen).coords)))
            pre = solve_preimage(incl, moved)
            assert pre is not None, "kernel is not stable under the action"
            cols.append(pre.coords)
        acts[g] = np.array(cols, dtype=np.int64).T
    return GModule(Mmod.group, K, acts), incl


def lambda_prime_extraction(tf: TwistedForm, z: Cochain, a: Cochain, eps: Cochain):
    """lambda with j_* lambda = d eps + tx u y + x u ty + x u y + d(x (x) ty)."""
    d = tf.datum
    x = a.mapped(d.x_proj, d.Mmod)
    y = a.mapped(d.y_proj, d.Mmod)
    tx = tf.twist.mapped(d.x_proj, d.Mmod)
    ty = tf.twist.mapped(d.y_proj, d.Mmod)
    t = d.tensorMM
    w = (
        differential(eps)
        + cup(tx, y, t, d.MMmod)
        + cup(x, ty, t, d.MMmod)
        + cup(x, y, t, d.MMmod)
        + differential(pointwise_tensor(x, ty, t, d.MMmod))
    )
    return w


def phi_section(datum: BKDatum):
    """A cached pointwise section of phi."""
    cache: dict[tuple, np.ndarray] = {}

    def lift(coords) -> np.ndarray:
        key = tuple(int(v) for v in coords)
        if key not in cache:
            pre = solve_preimage(datum.phi, datum.Z.element(key))
            assert pre is not None, "phi must be surjective"
            cache[key] = np.array(pre.coords, dtype=np.int64)
        return cache[key]

    return lift


# ---------------------------------------------------------------------------
# Odd powers and q-relevability
# ---------------------------------------------------------------------------


@dataclass
class QRelevabilityReport:
    q: int
    sigma: int
    eligible_size: int       # |{a : sigma a = q a}|
    relevable_size: int      # elements of that subgroup with a conjugating lift
    generated: bool          # relevable elements generate the subgroup
    power_identity_checked: int


def q_power_closed_form(cp: CrossedProduct, a: np.ndarray, q: int):
    """(0,a)^q = (q(q-1)/2 * Phi(a,a), q a)."""
    half = (q * (q - 1)) // 2
    z = (half * cp.pair(a, a)) % cp.zmods
    return z, (q * np.asarray(a)) % cp.amods


def q_power_and_relevable(cp: CrossedProduct, sigma: int, q: int, rng=None) -> QRelevabilityReport:
    if q % 2 == 0:
        raise ValueError("q must be odd")
    # power identity, exhaustively when |M + M| is small, sampled otherwise
    card = cp.Msum.ab.cardinality
    checked = 0
    if card <= 64:
        coords = _all_coords(cp.Msum.ab)
    else:
        rng = rng or np.random.default_rng(0)
        coords = rng.integers(0, np.maximum(cp.amods, 1), size=(200, cp.ka))
    for a in coords:
        z1, a1 = cp.power(np.zeros(cp.kz, dtype=np.int64), np.asarray(a, dtype=np.int64), q)
        z2, a2 = q_power_closed_form(cp, np.asarray(a, dtype=np.int64), q)
        assert (z1 == z2).all() and (a1 == a2).all(), "odd power identity failed"
        checked += 1
    # the subgroup {a : sigma a = q a}
    L = 1
    for o in cp.Msum.ab.orders:
        L = lcm(L, o)
    mat = (cp.Msum.act[sigma] - q * np.eye(cp.ka, dtype=np.int64)) % np.array(
        cp.Msum.ab.orders, dtype=np.int64
    ).reshape(-1, 1)
    scales = np.array([L // o for o in cp.Msum.ab.orders], dtype=np.int64).reshape(-1, 1)
    eligible = kernel_uniform((mat * scales) % L, L)
    span = ModSpan(np.concatenate([eligible, np.diag(cp.amods)]), L, n=cp.ka)
    lattice = ModSpan(np.diag(cp.amods), L, n=cp.ka)
    eligible_size = span.size() // lattice.size()
    # enumerate the subgroup and test relevability of each element
    elems = _enumerate_span(span, cp.amods)
    relevable = []
    km = cp.ka // 2
    for a in elems:
        if _is_relevable(cp, sigma, q, a):
            relevable.append(a)
            # the explicit conjugator a' = ((q+1)/2 x, y)
            ap = a.copy()
            ap[:km] = (((q + 1) // 2) * ap[:km]) % cp.amods[:km]
            zq, aq = q_power_closed_form(cp, a, q)
            zc, ac = cp.conjugate(np.zeros(cp.kz, dtype=np.int64), ap, np.zeros(cp.kz, dtype=np.int64), (q * a) % cp.amods)
            assert (zc == zq).all() and (ac == aq).all(), "explicit conjugator failed"
    rel_rows = (
        np.array(relevable, dtype=np.int64).reshape(len(relevable), cp.ka)
        if relevable
        else np.zeros((0, cp.ka), dtype=np.int64)
    )
    rel_span = ModSpan(np.concatenate([rel_rows, np.diag(cp.amods)]), L, n=cp.ka)
    generated = rel_span.size() == span.size()
    return QRelevabilityReport(
        q=q,
        sigma=sigma,
        eligible_size=eligible_size,
        relevable_size=len(relevable),
        generated=generated,
        power_identity_checked=checked,
    )


def _is_relevable(cp: CrossedProduct, sigma: int, q: int, a: np.ndarray) -> bool:
    """Exists a lift (z, a) with (z,a)^q conjugate to sigma.(z,a)."""
    qa = (q * a) % cp.amods
    sa = cp.Msum.apply(sigma, a)
    if (sa != qa).any():
        return False
    # conjugates of (w, qa) are w + V where V = {Phi(qa, c) - Phi(c, qa)}
    V = ((np.einsum("kij,j->ki", cp.phi_tensor, qa) - np.einsum("kij,i->kj", cp.phi_tensor, qa)).T) % cp.zmods
    # need z with sigma z - q z - q(q-1)/2 Phi(a,a) in span(V)
    img = (cp.Zmod.act[sigma] - q * np.eye(cp.kz, dtype=np.int64)).T  # rows: images of basis
    half = (q * (q - 1)) // 2
    target = (half * cp.pair(a, a)) % cp.zmods
    L = 1
    for o in cp.Zmod.ab.orders:
        L = lcm(L, o)
    span = ModSpan(
        np.concatenate([V, img % L, np.diag(cp.zmods)]), L, n=cp.kz
    )
    return span.contains(target)


def _enumerate_span(span: ModSpan, mods: np.ndarray) -> list[np.ndarray]:
    """All elements of a span (reduced mod the coordinate orders)."""
    out = {tuple(np.zeros(len(mods), dtype=np.int64))}
    frontier = [np.zeros(len(mods), dtype=np.int64)]
    basis = [b % mods for b in span.basis]
    while frontier:
        v = frontier.pop()
        for b in basis:
            w = (v + b) % mods
            t = tuple(int(x) for x in w)
            if t not in out:
                out.add(t)
                frontier.append(np.array(t, dtype=np.int64))
    return [np.array(t, dtype=np.int64) for t in sorted(out)]
