"""Monte-Carlo scan of the triangle count in K4-free subgraphs of G(n, p), p = n^-a.

Run:  python demos/phase_scan_k3_k4.py [n] [trials]
"""
import sys

from turanlab.graphs import complete
from turanlab.randomsim import phase_scan, scan_csv

n = int(sys.argv[1]) if len(sys.argv) > 1 else 10
trials = int(sys.argv[2]) if len(sys.argv) > 2 else 30
rows = phase_scan(complete(3), complete(4), n, ["0", "1/4", "2/5", "1/2", "3/4", "1", "3/2"], trials, seed=7)
print(scan_csv(rows), end="")

print("\nnormalized maximum, from dense to sparse:")
for r in rows:
    bar = "#" * round(200 * r.normalized_pi)
    print(f"  a={str(r.exponent):>4}  p={r.p:.3f}  {r.normalized_pi:.4f} {bar}")
