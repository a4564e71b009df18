"""The compatibility-square battery over the whole fixture family."""

import numpy as np
import pytest

from cohomkit.abelian import FinAbGroup
from cohomkit.cochain import Cochain, cup
from cohomkit.fixtures import shapiro_fixtures
from cohomkit.groups import LocalizationContext, Subgroup, named_group
from cohomkit.squares import SQUARE_NAMES, ShapiroSquares, verify_shapiro_squares

FIXTURES = shapiro_fixtures()


@pytest.mark.parametrize("fx", FIXTURES, ids=[f.name for f in FIXTURES])
def test_all_squares_pass(fx):
    for D in fx.decompositions:
        ctx = LocalizationContext(fx.G, fx.H, D)
        results = verify_shapiro_squares(fx.G, fx.H, fx.A, ctx=ctx)
        assert [r.name for r in results] == list(SQUARE_NAMES)
        for r in results:
            assert r.status == "pass", (fx.name, r.name, r.detail, r.witness)


def test_global_squares_without_context_skip_local():
    C2 = named_group("C2")
    res = verify_shapiro_squares(C2, Subgroup.make(C2, [0]), FinAbGroup((2,)))
    statuses = {r.name: r.status for r in res}
    assert statuses["cup"] == "pass" and statuses["j"] == "pass"
    assert statuses["cup-local"] == "skipped"
    assert statuses["loc-H2"] == "skipped"


def test_localization_with_full_group_reduces_to_global():
    S3 = named_group("S3")
    from cohomkit.groups import alternating_subgroup_s3

    A3 = alternating_subgroup_s3(S3)
    ctx = LocalizationContext(S3, A3, Subgroup.make(S3, list(S3.elements())))
    res = verify_shapiro_squares(S3, A3, FinAbGroup((3,)), ctx=ctx)
    assert all(r.status == "pass" for r in res)
    assert ctx.e == 1


def _twistless_cup(x, y, pairing, target_module):
    """A broken cup product that forgets the action twist on the right factor."""
    n = x.module.group.size
    xflat = x.table.reshape(-1, x.module.ab.rank)
    yflat = y.table.reshape(-1, y.module.ab.rank)
    out = pairing.pair_coords(
        xflat[:, None, :], np.broadcast_to(yflat[None, :, :], (xflat.shape[0],) + yflat.shape)
    )
    shape = (n,) * (x.degree + y.degree) + (pairing.group.rank,)
    return Cochain(target_module, x.degree + y.degree, out.reshape(shape))


def test_mutated_cup_breaks_leibniz_with_witness():
    """The verification layer must notice a cup product missing its twist."""
    from cohomkit.cochain import differential, shapiro_inverse_1
    from cohomkit.cohomology import cohomology
    from cohomkit.groups import (
        alternating_subgroup_s3,
        coset_section,
        induced_module,
        subgroup_group,
        tensor_module,
        trivial_module,
    )

    S3 = named_group("S3")
    A3 = alternating_subgroup_s3(S3)
    A = FinAbGroup((3,))
    M = induced_module(S3, A3, A)
    MM, tens = tensor_module(M, M)
    sec = coset_section(S3, A3)
    Hgrp, _ = subgroup_group(A3)
    H1 = cohomology(trivial_module(Hgrp, A), 1)
    witnesses = []
    for ca in H1.classes():
        x = shapiro_inverse_1(ca.rep, sec, M)
        for cb in H1.classes():
            y = shapiro_inverse_1(cb.rep, sec, M)
            prod = _twistless_cup(x, y, tens, MM)
            lhs = differential(prod)
            rhs = _twistless_cup(differential(x), y, tens, MM) - _twistless_cup(
                x, differential(y), tens, MM
            )
            if lhs != rhs:
                bad = np.argwhere((lhs.table - rhs.table) % 3 != 0)[0]
                witnesses.append((ca.coords.coords, cb.coords.coords, tuple(int(v) for v in bad)))
    assert witnesses, "the Leibniz check must flag the twistless cup product"
