"""kreinkit: finite-dimensional J-normal projections, J-unitary orbits and
covering maps over a fixed pseudo-regular range."""

from .core import (Classification, KreinFrame, classify, hermitian_split,
                   j_adjoint, j_inner)
from .errors import (CertificationError, KreinKitError, PreconditionError,
                     SchemaError)
from .fixed_range import (FixedRangeFamily, deck_distance, oblique_projection,
                          oblique_projection_direct, restricted_isomorphism)
from .generate import (feasible_profiles, make_rng, perturb_within_radius,
                       random_idempotent, random_j_antihermitian,
                       random_j_unitary, random_neutral_dual_pair,
                       random_normal_projection, random_pseudo_regular)
from .orbits import (ConnectResult, OrbitSectionContext, TangentSplit,
                     TangentVector, biorthogonal_basis, commutant_projection,
                     connect, kato_gap, neutral_link, orbit_connector,
                     orbit_section, same_orbit, selfadjoint_section,
                     submersion_differential, submersion_differential_fd,
                     tangent_split, tangent_vector, unitary_polar_section)
from .projections import (NormalProjection, neutral_pair_projection,
                          normal_family_member, selfadjoint_projection_onto)
from .subspaces import (SignatureProfile, Subspace, column_space, intersection,
                        join, null_space, principal_angles, subspaces_close)
from .unitary import (JUnitary, ando_block_unitary, angular_of_image,
                      connectivity_path, connectivity_path_many,
                      exp_antihermitian, log_near_identity)

__version__ = "0.1.0"

__all__ = [
    "KreinFrame", "Classification", "classify", "hermitian_split",
    "j_adjoint", "j_inner",
    "KreinKitError", "PreconditionError", "CertificationError", "SchemaError",
    "Subspace", "SignatureProfile", "column_space", "null_space",
    "intersection", "join", "principal_angles", "subspaces_close",
    "NormalProjection", "selfadjoint_projection_onto",
    "neutral_pair_projection", "normal_family_member",
    "JUnitary", "ando_block_unitary", "angular_of_image", "log_near_identity",
    "exp_antihermitian", "connectivity_path", "connectivity_path_many",
    "kato_gap", "unitary_polar_section", "selfadjoint_section",
    "biorthogonal_basis", "neutral_link", "OrbitSectionContext",
    "orbit_section", "same_orbit", "orbit_connector", "connect",
    "ConnectResult", "commutant_projection", "TangentVector", "tangent_vector",
    "TangentSplit", "tangent_split", "submersion_differential",
    "submersion_differential_fd",
    "FixedRangeFamily", "oblique_projection", "oblique_projection_direct",
    "restricted_isomorphism", "deck_distance",
    "make_rng", "random_j_unitary", "random_j_antihermitian",
    "random_pseudo_regular", "random_normal_projection",
    "random_neutral_dual_pair", "random_idempotent", "perturb_within_radius",
    "feasible_profiles",
    "__version__",
]
