"""Trapped-flux signal simulation for a superconducting spherical rotor.

The package models point flux sources pinned to a spinning superconducting
sphere and the flux they thread through an external pick-up loop: the
magnetostatic potential and field of a single source, the position-to-flux
transfer curve in several exact and approximate representations, the
rigid-body kinematics that move sources relative to the loop, and a
streaming multi-source signal generator with envelope and spectral analysis.
"""

__version__ = "0.1.0"

from . import errors, field, kinematics, signal, specfun, transfer

__all__ = ["errors", "field", "kinematics", "signal", "specfun", "transfer", "__version__"]
