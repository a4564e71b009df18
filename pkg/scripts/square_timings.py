#!/usr/bin/env python3
"""Time the compatibility-square battery across the fixture family."""

import time

from cohomkit.fixtures import shapiro_fixtures
from cohomkit.groups import LocalizationContext
from cohomkit.squares import verify_shapiro_squares

total = 0.0
for fx in shapiro_fixtures():
    for D in fx.decompositions:
        ctx = LocalizationContext(fx.G, fx.H, D)
        t0 = time.time()
        results = verify_shapiro_squares(fx.G, fx.H, fx.A, ctx=ctx)
        dt = time.time() - t0
        total += dt
        worst = max((r.status for r in results), key=lambda s: ("pass", "skipped", "fail").index(s))
        checked = sum(r.checked for r in results)
        print(f"{fx.name:24s} |D|={D.size}: {worst} ({checked} comparisons, {dt:.2f}s)")
print(f"total {total:.1f}s")
