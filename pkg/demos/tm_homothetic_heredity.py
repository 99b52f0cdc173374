"""Solitons on TM over flat space and what they induce on the base.

Over a flat base, a metric a g^s + b g^h + c g^v on TM is Ricci flat, so a
soliton is the same thing as a homothetic field.  We build one from affine
data, confirm it with the oracle, and then project it to a soliton on the
base along the zero section.
"""

import numpy as np

from gnat.base_manifolds import NamedField, SpaceForm
from gnat.soliton import SolitonCandidate, comb_soliton_check, heredity_project, soliton_residual
from gnat.tangent_bundle import ABCSpec, HomotheticDataTM, build_homothetic_TM

rng = np.random.default_rng(5)
n, lam = 3, 0.4
abc = ABCSpec(1.0, 0.5, 0.3)
flat = SpaceForm(n, 0.0)

A, P = rng.normal(size=(2, n, n))
zeta = NamedField.affine(lam * (abc.a + abc.c) * np.eye(n) + (A - A.T), rng.normal(size=n))
xi = NamedField.affine(rng.normal(size=(n, n)), rng.normal(size=n))
Z = build_homothetic_TM(HomotheticDataTM(zeta, P - P.T, xi, lam), abc)

# %% the lifted field is homothetic and the bundle metric is Ricci flat
print("TM check:", comb_soliton_check(abc, flat, Z, lam, seed=2).to_dict())

# %% project to the base and test the induced soliton there
res = heredity_project(abc.to_gnatural(), n, Z, lam)
rep = soliton_residual(SolitonCandidate("base", flat, None, res.Z0, res.lam), seed=2)
print(f"base soliton: case {res.case}, lambda {res.lam:.4f}, max residual {rep.max_abs:.2e}")
