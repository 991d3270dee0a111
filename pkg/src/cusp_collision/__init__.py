"""Numerical toolkit for body-wall collision in compressible non-Newtonian flow."""
from .geometry import CuspRegion, SolidProfile, gap, in_cusp
from .testfield import GradTensor, TestField, make_cutoffs, shape_fn

__all__ = ["CuspRegion", "SolidProfile", "gap", "in_cusp", "GradTensor", "TestField",
           "make_cutoffs", "shape_fn"]
__version__ = "0.1.0"
