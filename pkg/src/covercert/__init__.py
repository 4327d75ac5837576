"""covercert: exact verification of uniform-cover volume inequalities.

Core layout:

* :mod:`covercert.polytope` — exact rational polytopes (volumes, sections,
  projections) plus a float path for general subspaces
* :mod:`covercert.covers` — s-uniform covers of [n], enumeration, weights
* :mod:`covercert.inequalities` — exact inequality checkers
* :mod:`covercert.certifier` — affine cross-polytope certificates
* :mod:`covercert.functional` — log-concave integral checks
* :mod:`covercert.isotropic` — John systems, Ball and dual-Ball inequalities
* :mod:`covercert.service` / :mod:`covercert.cli` — HTTP and command surfaces
"""

__version__ = "0.1.0"

from .covers import Cover, WeightedCover
from .errors import CoverCertError
from .polytope import Polytope

__all__ = ["Cover", "CoverCertError", "Polytope", "WeightedCover", "__version__"]
