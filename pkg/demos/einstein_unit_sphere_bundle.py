"""The unit tangent sphere bundle of the round 2-sphere.

With the Sasaki metric, T1S2 is a quotient of the round 3-sphere of radius 2,
so its Ricci tensor is half the metric.  We measure Ric - G/2 with the
finite-difference oracle at random points and then show that no other
constant fits.
"""

import numpy as np

from gnat.base_manifolds import SpaceForm
from gnat.soliton import SolitonCandidate, soliton_residual
from gnat.unit_tangent import KKSpec

sphere = SpaceForm(2, 1.0)
sasaki = KKSpec.sasaki()

# %% residual of the Einstein equation with the correct constant
report = soliton_residual(SolitonCandidate("T1M", sphere, sasaki, None, 0.5), samples=30, seed=1)
print("lambda = 1/2 blocks:", {k: f"{v:.2e}" for k, v in report.blocks.items()}, "->", report.to_dict()["verdict"])

# %% scan nearby constants: the residual grows linearly away from 1/2
for lam in np.linspace(0.3, 0.7, 5):
    rep = soliton_residual(SolitonCandidate("T1M", sphere, sasaki, None, float(lam)), samples=30, seed=1)
    print(f"lambda = {lam:.2f}  max residual {rep.max_abs:.3e}")
