#!/usr/bin/env python3
"""Search small Klein-four modules for a nonzero cyclic-restriction kernel.

The first hit (Z/8 with the faithful unit action) is pinned as a regression
in tests/test_brauer.py.
"""

import itertools

import numpy as np

from cohomkit import FinAbGroup, named_group
from cohomkit.brauer import sha_cyclic
from cohomkit.groups import GModule
from cohomkit.report import fmt_group

K4 = named_group("C2xC2")


def try_module(orders, m1, m2, degree):
    A = FinAbGroup(orders)
    k = A.rank
    m1 = np.array(m1, dtype=np.int64).reshape(k, k)
    m2 = np.array(m2, dtype=np.int64).reshape(k, k)
    acts = np.zeros((4, k, k), dtype=np.int64)
    acts[0] = np.eye(k)
    acts[1], acts[2], acts[3] = m1, m2, (m1 @ m2)
    try:
        M = GModule(K4, A, acts)
    except Exception:
        return None
    rep = sha_cyclic(M, degree)
    return rep if rep.kernel.cardinality > 1 else None


def main():
    found = 0
    # faithful actions on Z/8 through the full unit group
    for u1, u2 in itertools.combinations([3, 5, 7], 2):
        for r in (1, 2):
            rep = try_module((8,), [[u1]], [[u2]], r)
            if rep:
                print(f"Z/8 units ({u1},{u2}) degree {r}: kernel {fmt_group(rep.kernel)} of {fmt_group(rep.total)}")
                found += 1
    # involution pairs on (Z/4)^1 and (Z/2)^2 for contrast
    for orders in [(4,), (2, 2)]:
        k = len(orders)
        hits = 0
        for m1 in itertools.product(range(max(orders)), repeat=k * k):
            for m2 in itertools.product(range(max(orders)), repeat=k * k):
                rep = try_module(orders, m1, m2, 1)
                if rep:
                    hits += 1
        print(f"{orders}: {hits} modules with nonzero kernel")
    print("total faithful hits:", found)


if __name__ == "__main__":
    main()
