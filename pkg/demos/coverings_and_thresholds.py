"""Walk from 2-density to covering types to threshold exponents for triangles and K4.

Run:  python demos/coverings_and_thresholds.py
"""
from turanlab.covering import build_special_covering, enumerate_covering_types, t_density, t_resolution
from turanlab.density import fe_density_closed_form, two_density
from turanlab.graphs import complete, cycle

K3, K4 = complete(3), complete(4)

for name, g in [("K3", K3), ("K4", K4), ("C4", cycle(4)), ("C5", cycle(5))]:
    print(f"m2({name}) = {two_density(g).value}")

# one triangle glued onto each edge of K4, with fresh apex vertices
fe = build_special_covering(K3, K4)
print("\nspecial covering of K4 by triangles:", len(fe.copies), "copies")
print("  direct T-density  :", t_density(fe).value)
print("  closed form       :", fe_density_closed_form(K3, K4))

print("\nall covering types of K4 by triangles:")
for ty in enumerate_covering_types(K3, K4):
    print(f"  {ty.copy_count} copies, union {ty.union_vertices} vertices / {ty.union_edges} edges,"
          f" T-density {ty.density}")

res = t_resolution(K3, K4)
print("\nresolution: base exponent", res.base_exponent,
      "thresholds", [str(x) for x in res.threshold_exponents])
