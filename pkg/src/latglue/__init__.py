"""latglue: exact integer lattices, discriminant forms, and gluing.

The library half is generic: even lattices over Z with exact arithmetic,
their discriminant quadratic forms, the overlattice/isotropic-subgroup
dictionary, isometry groups of small definite lattices, and orbit
machinery.  The driver half re-derives a specific classification of
polarized rank-3 invariant-lattice data and verifies it against the
shipped transcription of the printed tables.
"""

from .discforms import (
    DiscElement,
    DiscriminantGroup,
    FiniteAbelianMap,
    GlueError,
    IsotropicSubgroup,
    b_value,
    discriminant_group,
    enumerate_isotropic_subgroups,
    extend_to_overlattice,
    extends_to_overlattice,
    forms_isometric,
    glue_extension_check,
    glue_subgroup,
    induced_map,
    is_anti_isometry,
    overlattice_from_isotropic,
    overlattice_with_basis,
    preserves_form,
    pullback_form,
    q_value,
    solve_psi_bar,
    with_generators,
)
from .isometries import (
    Isometry,
    IsometryGroup,
    admits_order3,
    coinvariant_lattice,
    invariant_lattice,
    isometry_between,
    orbit_witness,
    orbits,
    orthogonal_group,
    reduced_binary_form,
    torsion_exponent_check,
    vectors_of_norm,
)
from .lattices import IntegerLattice, LatticeError, Sublattice, is_primitive_vector

__all__ = [
    "DiscElement",
    "DiscriminantGroup",
    "FiniteAbelianMap",
    "GlueError",
    "IntegerLattice",
    "Isometry",
    "IsometryGroup",
    "IsotropicSubgroup",
    "LatticeError",
    "Sublattice",
    "admits_order3",
    "b_value",
    "coinvariant_lattice",
    "discriminant_group",
    "enumerate_isotropic_subgroups",
    "extend_to_overlattice",
    "extends_to_overlattice",
    "forms_isometric",
    "glue_extension_check",
    "glue_subgroup",
    "induced_map",
    "invariant_lattice",
    "is_anti_isometry",
    "is_primitive_vector",
    "isometry_between",
    "orbit_witness",
    "orbits",
    "orthogonal_group",
    "overlattice_from_isotropic",
    "overlattice_with_basis",
    "preserves_form",
    "pullback_form",
    "q_value",
    "reduced_binary_form",
    "solve_psi_bar",
    "torsion_exponent_check",
    "vectors_of_norm",
    "with_generators",
]
