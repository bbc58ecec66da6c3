"""Separable cones over Lorentz and ellipsoidal cones: positive maps, faces,
separable-ball radii, numerical oracles and the multi-qubit ball."""

from .faces import (TypeIFaceSpec, face_intersection_witness, pairing, type1_face_element,
                    type2_face_map, type2_generator, type2_membership, z1_embed)
from .lorentz import (EllipsoidSpec, InvalidDimension, LorentzAutomorphism, Membership, boost,
                      ellipsoid_membership, lorentz_membership, minkowski)
from .maps import (ExtremeClass, ExtremeTag, NotPositive, PartitionedMap, PositivityCertificate,
                   canonical_extreme, certify_positivity, classify_extreme, positivity_witness)
from .oracle import (SeparableDecomposition, Verdict, decompose_separable, dual_witness,
                     random_search_fmax, touching_witness)
from .qubit import Hermitian2, MultiQubitState, herm2_to_lorentz, lorentz_to_herm2, verify_multiqubit_ball
from .radii import (Branch, RadiusReport, ball_ball_radius, dual_objective, f_max, matrix_ball_radius,
                    multiqubit_bound, multiqubit_bound_recursive, separable_ball_radius)

__version__ = "0.1.0"
