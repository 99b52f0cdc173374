"""Which Kaluza-Klein metrics on T1M admit a complete-lift soliton.

For a space form of dimension n and a metric with parameters (a, c, d) the
answer splits into four cases according to n and whether d vanishes.  When
d != 0 and n > 2 the admissible curvatures are roots of a quadratic, so the
discriminant decides whether a soliton exists at all.
"""

import numpy as np

from gnat.soliton import classify_complete_lift, discriminant, eq1_residual
from gnat.unit_tangent import KKSpec

print(f"{'n':>2} {'a':>5} {'c':>5} {'d':>6} {'case':>5} {'kappa':>9} {'lambda':>9} {'disc':>8}  admissible")
for n in (2, 3):
    for a, c, d in [(1.0, 0.0, 0.0), (1.0, 0.0, 1.0), (1.0, -0.9, 0.5), (1.0, -0.9, -0.05)]:
        kk = KKSpec(a, 0.0, c, d)
        for row in classify_complete_lift(n, kk):
            kappa = "any" if row.kappa is None else f"{row.kappa:.4f}"
            lam = "-" if row.lam is None else f"{row.lam:.4f}"
            print(f"{n:>2} {a:>5} {c:>5} {d:>6} {row.case_tag:>5} {kappa:>9} {lam:>9} "
                  f"{discriminant(n, kk):>8.3f}  {row.admissible}")

# %% every admissible root satisfies the defining quadratic to rounding error
kk = KKSpec(1.0, 0.0, 0.0, 1.0)
roots = [r.kappa for r in classify_complete_lift(3, kk)]
print("roots", np.round(roots, 6), "residuals", [f"{eq1_residual(3, kk, k):.1e}" for k in roots])
