"""Equivariant linear layers for permutation symmetries, built from irreducible decompositions.

Every layer is a sum of scalar multiples of fixed isomorphisms between
isomorphic irreducible components of the input, so the parameters are one
scalar per ordered pair of same-class components.  A brute-force oracle
computes the space of equivariant maps directly and is used to check every
closed-form count.
"""

from .exceptions import (   # noqa: F401
    DimensionError,
    InvalidInputError,
    LayoutError,
    ResourceError,
    SchurLayersError,
    TransitivityError,
    UnsupportedError,
)
from .groups import *  # noqa: F401,F403
from .schur import *  # noqa: F401,F403
from .deepsets import *  # noqa: F401,F403
from .graph import *  # noqa: F401,F403
from .weight_space import *  # noqa: F401,F403
from .wreath import *  # noqa: F401,F403
from .oracle import *  # noqa: F401,F403
from .spaces import basis_layers, decompose, layer_matrix, layout, schur_layer  # noqa: F401
from .estimators import IrrepDecomposer, SchurLayer, WreathLayer  # noqa: F401

__version__ = "0.1.0"
