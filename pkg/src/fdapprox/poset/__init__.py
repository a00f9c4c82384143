"""Conditions, extension recipes, density operations and amalgamations."""
from .amalgamation import (V_HALF, amalgamate_anticommuting, amalgamate_disjoint, amalgamate_including,
                           amalgamate_type1, amalgamate_type2, amalgamate_type3, anticommuting_unitary,
                           convenient_position)
from .condition import (DEFAULT_WIDTH_CAP, Condition, condition_from_lower_parts, generated_subalgebra,
                        has_f_witness, j_sigma, random_condition, sample_f_membership, transport_condition,
                        trivial_condition, validate_condition)
from .density import dominate_column, extend_domain, grow_column, mirror_order
from .recipe import (Compose, Identity, Mirror, Recipe, UCopy, check_extension, compose, extension_report,
                     recipe_from_json)

__all__ = [
    "Compose", "Condition", "DEFAULT_WIDTH_CAP", "Identity", "Mirror", "Recipe", "UCopy", "V_HALF",
    "amalgamate_anticommuting", "amalgamate_disjoint", "amalgamate_including", "amalgamate_type1",
    "amalgamate_type2", "amalgamate_type3", "anticommuting_unitary", "check_extension", "compose",
    "condition_from_lower_parts", "convenient_position", "dominate_column", "extend_domain",
    "extension_report", "generated_subalgebra", "grow_column", "has_f_witness", "j_sigma", "mirror_order",
    "random_condition", "recipe_from_json", "sample_f_membership", "transport_condition",
    "trivial_condition", "validate_condition",
]
