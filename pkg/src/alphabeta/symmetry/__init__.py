"""Symmetry algebras, automorphisms, isometry checks and group-level lifts."""
from .automorphisms import (AutomorphismMatrix, automorphism_residual, exp_derivation,
                            fixes_X, fixing_residual, is_automorphism, is_orthogonal,
                            orthogonality_residual)
from .derivations import (DerivationBasis, SymmetryReport, closure_residual,
                          derivation_algebra, k_prime, leibniz_operator, leibniz_residual,
                          skew_derivations, x_fixing_derivations)
from .invariance import (ProbeResult, ScalingResult, admissibility_scaling, converse_probe,
                         isometry_invariance_check, random_orthogonal, sphere_samples)
from .lifts import (GroupAutomorphism, commutation_check, differential_at_identity,
                    field_invariance_check, homomorphism_residual, lift_to_group)

__all__ = [
    "AutomorphismMatrix",
    "DerivationBasis",
    "GroupAutomorphism",
    "ProbeResult",
    "ScalingResult",
    "SymmetryReport",
    "admissibility_scaling",
    "automorphism_residual",
    "closure_residual",
    "commutation_check",
    "converse_probe",
    "derivation_algebra",
    "differential_at_identity",
    "exp_derivation",
    "field_invariance_check",
    "fixes_X",
    "fixing_residual",
    "homomorphism_residual",
    "is_automorphism",
    "is_orthogonal",
    "isometry_invariance_check",
    "k_prime",
    "leibniz_operator",
    "leibniz_residual",
    "lift_to_group",
    "orthogonality_residual",
    "random_orthogonal",
    "skew_derivations",
    "sphere_samples",
    "x_fixing_derivations",
]
