"""Triangles of K7 that avoid a Fano-plane covering, exactly and by a simple construction.

Run:  python demos/fano_versus_crossing.py
"""
from turanlab.covering import count_covering_instances, covering_type, fano_covering
from turanlab.extremal import ex_exact, exx_exact
from turanlab.graphs import complete, enumerate_copies

K3 = complete(3)
fano = covering_type(fano_covering())
pool = enumerate_copies(K3, complete(7))
print("triangle decompositions of K7 (Fano instances):", count_covering_instances(fano, pool))

left = {0, 1, 2, 3}
crossing = [c for c in pool if c.vertices & left and c.vertices - left]
print("triangles meeting both sides of a 4+3 split:", len(crossing),
      "| Fano instances among them:", count_covering_instances(fano, crossing))

best = exx_exact(7, K3, [fano])
print("exact maximum Fano-free triangle set:", best.value, "of", len(pool))

# forbidding K4 itself is a stronger condition
print("ex(7, K3, K4) =", ex_exact(7, K3, complete(4)).value)
