#!/usr/bin/env python3
"""One-off generator for multiples_gamma.json.

Produces a synthetic 5x1000 error-rate matrix for the divisibility
concepts (k = 5, 7, 11, 13, 17) over the examples 1..1000, shaped like
an empirical misjudgement table: rates are quantized to 1/20 steps (as
if estimated from 20 trials), near zero for small numbers, and grow
with the size of the number being tested.  Divisibility by 5 is easy at
any size (look at the last digit), so that row stays at zero.
"""

import json
import random

KS = [5, 7, 11, 13, 17]
X_MAX = 1000

rng = random.Random(20240517)

rows = []
for k in KS:
    row = []
    for x in range(1, X_MAX + 1):
        if k == 5:
            rate = 0.0
        else:
            # Difficulty ramps with the magnitude of x and the divisor.
            base = min(0.9, max(0.0, 0.18 * (len(str(x)) - 1) + 0.01 * (k - 5)))
            noisy = base + rng.gauss(0.0, 0.08)
            rate = min(0.9, max(0.0, round(noisy * 20) / 20))
        row.append(rate)
    rows.append(row)


def fmt(v):
    return "1" if v == 1 else ("0" if v == 0 else repr(v))


lines = ["["]
for i, row in enumerate(rows):
    body = ", ".join(fmt(v) for v in row)
    lines.append("  [" + body + ("]," if i + 1 < len(rows) else "]"))
lines.append("]")

with open("multiples_gamma.json", "w") as f:
    f.write("\n".join(lines) + "\n")

flat = [v for row in rows for v in row]
print("rows:", len(rows), "cols:", len(rows[0]))
print("min:", min(flat), "max:", max(flat))
print("row means:", [round(sum(r) / len(r), 4) for r in rows])
