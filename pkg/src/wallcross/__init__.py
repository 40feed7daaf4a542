"""Mutations of almost toric fibrations on del Pezzo surfaces.

The pieces fit together as follows: ``markov`` and ``atlas`` build base
diagrams B(a^2, b^2, c^2) by mutation, ``chart`` carries disc potentials
across walls, ``classes`` identifies the terms of a potential with relative
homology classes, ``tropical`` draws the corresponding tropical discs,
``numeric`` solves for holomorphic discs directly and ``floer`` checks
non-vanishing of Floer cohomology.  ``presets`` loads the shipped geometry.
"""

from .errors import CertificationError, ValidationError

__version__ = "0.1.0"

__all__ = ["CertificationError", "ValidationError", "__version__"]
