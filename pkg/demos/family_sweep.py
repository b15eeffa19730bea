"""Check every cyclic-family instance up to K = 8.

For each (K, r) with (K-r) dividing K the MAIS should have K-r vertices,
the acyclic-subset bound should equal the closed form, and the composite
coding region should meet it.
"""
import sys

from dcshuffle import verify_family

K_max = int(sys.argv[1]) if len(sys.argv) > 1 else 8
print(f"{'K':>3} {'r':>3} {'g':>3} {'MAIS':>5}  closed-form  verdict")
for row in verify_family(K_max):
    print(f"{row.K:>3} {row.r:>3} {row.g:>3} {row.mais_size:>5}  "
          f"{str(row.outer_closed_form):>11}  {row.verdict.status}")
