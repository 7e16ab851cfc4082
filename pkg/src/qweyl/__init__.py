"""Exact computer algebra for the quantum Weyl algebra A_q(3).

The submodules build on each other: ``scalars`` (exact coefficient rings),
``weyl`` (normal-ordered differential operators), ``aq`` (the abstract
algebra), ``realization`` (the concrete operator realization and its theta
expansion), ``spq6`` (the symplectic covariance check), ``freeparticle``
(plane-wave momenta and the induced field), ``oracle`` (floating-point
cross-checks), ``reference`` and ``report``/``cli`` (comparison and output).
"""

from .aq import AqElement, normal_form
from .scalars import GaussianRational, LaurentQ, ParamPoly, ThetaSeries, theta_inverse, theta_sqrt
from .weyl import CoordPoly, DiffOp, power_of_M

__all__ = [
    "AqElement",
    "CoordPoly",
    "DiffOp",
    "GaussianRational",
    "LaurentQ",
    "ParamPoly",
    "ThetaSeries",
    "normal_form",
    "power_of_M",
    "theta_inverse",
    "theta_sqrt",
]

__version__ = "0.1.0"
