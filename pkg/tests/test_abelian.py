"""Groups-as-cyclic-products: homs, kernels, cokernels, pairings."""

import itertools
import random

import numpy as np
import pytest

from cohomkit.abelian import (
    AbHom,
    DualPairing,
    ExteriorSquare,
    FinAbGroup,
    Presentation,
    TensorProduct,
    cokernel,
    image_size,
    invariant_factors,
    is_cyclic,
    kernel,
    same_invariants,
    solve_preimage,
)

Z4 = FinAbGroup((4,))


def test_kernel_of_doubling_on_z4():
    K, incl = kernel(AbHom(Z4, Z4, [[2]]))
    assert K.cardinality == 2
    assert incl(K.element([1])).coords == (2,)  # the x2 embedding


def test_kernel_trivial_and_full():
    K0, incl0 = kernel(AbHom.zero(Z4, Z4))
    assert K0.cardinality == 4
    K1, _ = kernel(AbHom.identity(FinAbGroup((2, 2))))
    assert K1.cardinality == 1


def test_cokernel_of_diagonal_inclusion():
    C2 = FinAbGroup((2,))
    C24 = FinAbGroup((2, 2, 2, 2))
    j = AbHom(C2, C24, [[1], [1], [1], [1]])
    Q, proj = cokernel(j)
    assert same_invariants(Q, FinAbGroup((2, 2, 2)))
    assert proj.compose(j).is_zero
    assert image_size(proj) == Q.cardinality


def test_cokernel_surjective_and_zero():
    s = AbHom(FinAbGroup((4,)), FinAbGroup((2,)), [[1]])
    assert cokernel(s)[0].cardinality == 1
    Q0, p0 = cokernel(AbHom.zero(FinAbGroup((2,)), FinAbGroup((2, 2))))
    assert Q0.cardinality == 4 and image_size(p0) == 4


@pytest.mark.parametrize(
    "a,b,card",
    [((4,), (6,), 2), ((2,), (3,), 1), ((2, 2, 2), (2, 2, 2), 2**9)],
)
def test_tensor_cardinalities(a, b, card):
    assert TensorProduct(FinAbGroup(a), FinAbGroup(b)).group.cardinality == card


def test_tensor_bilinear_on_generators():
    A, B = FinAbGroup((4, 2)), FinAbGroup((6,))
    t = TensorProduct(A, B)
    for a1 in A.generators():
        for a2 in A.generators():
            for b in B.generators():
                lhs = t.pair(a1 + a2, b)
                rhs = t.pair(a1, b) + t.pair(a2, b)
                assert lhs == rhs


@pytest.mark.parametrize(
    "orders,card", [((2, 2, 2), 8), ((5,), 1), ((2, 4), 2)]
)
def test_exterior_square_cardinalities(orders, card):
    assert ExteriorSquare(FinAbGroup(orders)).group.cardinality == card


def test_exterior_alternating():
    A = FinAbGroup((2, 4))
    w = ExteriorSquare(A)
    for a in A.elements():
        assert w.wedge(a, a).is_zero
        for b in A.elements():
            assert (w.wedge(a, b) + w.wedge(b, a)).is_zero


def test_dual_pairing_perfect_small_groups():
    # every abelian group of order <= 64, as unordered factor tuples
    seen = set()
    tuples = [()]
    for _ in range(3):
        tuples += [t + (o,) for t in tuples for o in (2, 3, 4, 5, 7, 8, 9) if _prod(t) * o <= 64]
    for t in tuples:
        key = tuple(sorted(t))
        if key in seen:
            continue
        seen.add(key)
        A = FinAbGroup(key)
        d = DualPairing(A)
        for chi in d.group.elements():
            if all(d.pairing(chi, a) == 0 for a in A.elements()):
                assert chi.is_zero


def _prod(t):
    out = 1
    for x in t:
        out *= x
    return out


def test_dual_nondegenerate_z6():
    A = FinAbGroup((6,))
    d = DualPairing(A)
    killers = [chi for chi in d.group.elements() if all(d.pairing(chi, a) == 0 for a in A.elements())]
    assert killers == [d.group.zero()]


def test_solve_preimage():
    h = AbHom(Z4, Z4, [[2]])
    s = solve_preimage(h, Z4.element([2]))
    assert s is not None and h(s).coords == (2,)
    assert solve_preimage(h, Z4.element([1])) is None
    assert solve_preimage(AbHom.identity(Z4), Z4.element([3])).coords == (3,)


def test_kernel_image_product_exhaustive():
    rng = random.Random(7)
    for _ in range(120):
        src = FinAbGroup(tuple(rng.choice([1, 2, 3, 4, 6]) for _ in range(rng.randint(1, 3))))
        tgt = FinAbGroup(tuple(rng.choice([1, 2, 3, 4, 6]) for _ in range(rng.randint(1, 3))))
        assert src.cardinality <= 256
        M = np.zeros((tgt.rank, src.rank), dtype=np.int64)
        for i, m in enumerate(tgt.orders):
            for j, n in enumerate(src.orders):
                g = m // np.gcd(m, n)
                M[i, j] = g * rng.randrange(0, np.gcd(m, n))
        h = AbHom(src, tgt, M)
        K, incl = kernel(h)
        assert K.cardinality * image_size(h) == src.cardinality
        # incl is injective and h . incl = 0
        assert h.compose(incl).is_zero
        assert image_size(incl) == K.cardinality


def test_hom_additivity_random_sampling():
    rng = random.Random(9)
    src, tgt = FinAbGroup((4, 6)), FinAbGroup((2, 12))
    h = AbHom(src, tgt, [[1, 0], [3, 2]])
    for _ in range(50):
        a, b = src.random_element(rng), src.random_element(rng)
        assert h(a + b) == h(a) + h(b)


def test_hom_rejects_ill_defined_matrix():
    with pytest.raises(ValueError):
        AbHom(FinAbGroup((2,)), FinAbGroup((4,)), [[1]])  # 2*1 != 0 mod 4


def test_invariant_factors_and_comparisons():
    assert invariant_factors(FinAbGroup((2, 3))) == [6]
    assert invariant_factors(FinAbGroup((2, 4, 8, 3, 9, 5))) == [360, 12, 2]
    assert is_cyclic(FinAbGroup((2, 3))) and not is_cyclic(FinAbGroup((2, 2)))
    assert same_invariants(FinAbGroup((6,)), FinAbGroup((2, 3)))
    assert not same_invariants(FinAbGroup((8,)), FinAbGroup((2, 4)))


def test_presentation_roundtrip_random():
    rng = random.Random(3)
    for _ in range(80):
        orders = tuple(rng.choice([2, 3, 4]) for _ in range(rng.randint(1, 3)))
        n = len(orders)
        sg = [[rng.randrange(8) for _ in range(n)] for _ in range(rng.randint(0, 3))]
        tg = []
        pres = Presentation(orders, sg, tg)
        for cls in pres.group.elements():
            v = pres.rep(cls)
            assert pres.class_coords(v) == cls


def test_presentation_quotient_sizes():
    # (Z/4)^2 / <(2,0)> has order 8
    pres = Presentation((4, 4), np.eye(2, dtype=np.int64), [[2, 0]])
    assert pres.group.cardinality == 8
    assert pres.is_zero_class([2, 0]) and not pres.is_zero_class([0, 2])
