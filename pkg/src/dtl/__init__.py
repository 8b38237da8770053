"""Rank-3 Drinfeld modules, their T-isogeny chains and the associated recursive towers."""

from .drinfeld import DrinfeldModule, are_isomorphic, j_invariant, make_module, phi_of, torsion_structure
from .ffield import AmbientTooSmall, FieldSpec, extension, make_field
from .identities import IdentityCertificate, Status, verify_all
from .isogeny import Branch, IsogenyChain, kernel_module_structure, theorem_chains
from .skew import SkewPoly, kernel, right_divmod, right_gcd, skew_mul
from .towers import compare_towers, enumerate_level, fiber_degrees, tower

__version__ = "0.1.0"
