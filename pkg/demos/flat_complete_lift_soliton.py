"""An expanding soliton on the unit tangent bundle of flat 3-space.

The position field x -> x is homothetic on R^3.  Its complete lift to T1R^3
with the Sasaki metric is a Ricci soliton with lambda = 1, even though the
metric itself is not Einstein.  Perturbing lambda breaks the horizontal block
by exactly the size of the perturbation.
"""

import numpy as np

from gnat.base_manifolds import NamedField, SpaceForm
from gnat.soliton import classify_complete_lift, complete_lift_candidate, soliton_residual, soliton_sign
from gnat.unit_tangent import KKSpec

flat = SpaceForm(3, 0.0)
sasaki = KKSpec.sasaki()
position = NamedField.linear(np.eye(3), label="position")

# %% what the classification predicts for this metric
for row in classify_complete_lift(3, sasaki, 0.0):
    print("predicted:", row.to_dict())

# %% numerical check of the prediction and of two wrong constants
for lam in (1.0, 1.1, 0.0):
    rep = soliton_residual(complete_lift_candidate(flat, sasaki, position, lam), seed=3)
    print(f"lambda = {lam:.1f} ({soliton_sign(lam)}): blocks "
          + ", ".join(f"{k} {v:.3e}" for k, v in sorted(rep.blocks.items())))
