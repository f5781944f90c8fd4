"""Exact-arithmetic engine for periodic graded modules with structure operations."""

from .intmat import IMat, kernel_basis, lattice_contains, lattice_equal, smith_normal_form
from .modules import (
    CrtHom,
    CrtModule,
    CrtOperation,
    ExactnessReport,
    GradedAbelianGroup,
    RelationReport,
    check_acyclicity,
    check_relations,
    identity_hom,
    module_from_json,
    module_to_json,
)
from .bases import (
    ALGEBRAS,
    degree_table,
    free_module,
    hom_exists,
    make_base_module,
    shift,
)

__all__ = [
    "ALGEBRAS",
    "CrtHom",
    "CrtModule",
    "CrtOperation",
    "ExactnessReport",
    "GradedAbelianGroup",
    "IMat",
    "RelationReport",
    "check_acyclicity",
    "check_relations",
    "degree_table",
    "free_module",
    "hom_exists",
    "identity_hom",
    "kernel_basis",
    "lattice_contains",
    "lattice_equal",
    "make_base_module",
    "module_from_json",
    "module_to_json",
    "shift",
    "smith_normal_form",
]
