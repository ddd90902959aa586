"""Curvature and singular-point geometry of frontal surfaces.

Core layers:

- ``jets``: truncated bivariate Taylor arithmetic (the derivative engine);
- ``expr`` / ``surfaces``: the formula language and surface gallery;
- ``core``: charts, Gauss maps, area density, singular-point classification;
- ``curvature``: frame-based fundamental data, K/H, branch limits;
- ``invariants``: orthogonal adapted normalization and edge invariants;
- ``frames``: principal vectors, curvature-line frames, Frenet system;
- ``ribaucour``: envelope construction and pair verification;
- ``acceptance`` / ``cli``: the verification suite and command line.
"""

from .core import FrontalChart, SingularPointReport
from .curvature import curvature_sample, fundamental_data, limit_profile
from .invariants import edge_invariants, normalize_orthogonal_adapted
from .jets import Jet2, JetVec3, NumericPolicy
from .surfaces import gallery_names, gallery_surface, load_surface

__version__ = "0.1.0"

__all__ = [
    "FrontalChart",
    "SingularPointReport",
    "curvature_sample",
    "fundamental_data",
    "limit_profile",
    "edge_invariants",
    "normalize_orthogonal_adapted",
    "Jet2",
    "JetVec3",
    "NumericPolicy",
    "gallery_names",
    "gallery_surface",
    "load_surface",
    "__version__",
]
