#!/usr/bin/env python3
"""Survey the crossed-product family: orders, structure, multipliers.

Usage: python scripts/bk_survey.py [--max-order N]
"""

import argparse
import time

from cohomkit import FinAbGroup, build_bk, named_group
from cohomkit.brauer import b0_closed_form, b0_closed_form_cp, b0_oracle, br_nr_bk
from cohomkit.crossed import center_equals_embedded_Z, is_nondegenerate
from cohomkit.report import fmt_group

FAMILY = [((2,), "1"), ((2,), "C2"), ((2,), "C3"), ((3,), "C2"), ((2, 2), "C2")]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-order", type=int, default=1 << 15)
    args = ap.parse_args()
    for orders, gname in FAMILY:
        d = build_bk(FinAbGroup(orders), named_group(gname))
        if d.cp.order > args.max_order:
            print(f"A={orders} g={gname}: |F| = {d.cp.order} skipped")
            continue
        t0 = time.time()
        rep = center_equals_embedded_Z(d)
        nd = is_nondegenerate(d)
        brnr = br_nr_bk(d)
        b0 = b0_closed_form_cp(d)
        line = (
            f"A={orders} g={gname}: |M|={d.Mmod.ab.cardinality} Z={fmt_group(d.Z)} "
            f"|F|={d.cp.order} nondeg={nd} Z(F)=Z:{rep['center_is_Z']} "
            f"[F,F]=Z:{rep['derived_is_Z']} BrNr={fmt_group(brnr.quotient)} B0={fmt_group(b0)}"
        )
        if d.cp.order <= 256:
            F, _ = d.cp.as_table_group(cap=512)
            line += f" B0-oracle={fmt_group(b0_oracle(F))} B0-table={fmt_group(b0_closed_form(F))}"
        print(line, "(%.1fs)" % (time.time() - t0))


if __name__ == "__main__":
    main()
