"""Numerical verification of g-natural metrics on tangent and unit tangent bundles."""

from .errors import *  # noqa: F401,F403
from .core_tensor import DEFAULT_CONFIG, DiffConfig, MetricField
from .base_manifolds import NamedField, SpaceForm
from .tangent_bundle import ABCSpec, GNaturalSpec, LiftedField
from .unit_tangent import HVFrameVector, KKSpec, T1Chart

__version__ = "0.1.0"
