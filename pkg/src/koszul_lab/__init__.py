"""Exact Koszul cohomology of canonical curves and K3 surfaces over finite fields."""

from .exactla import Subspace, kernel_basis, rank
from .field import Field, get_field, univariate_roots
from .gradedring import GradedRing, ProjectiveModel, quotient_piece
from .koszul import BettiTable, betti_table, koszul_cohomology, koszul_dim, subspace_cohomology_image
from .models import gen_canonical, gen_k3_g6, gen_nodal_sextic, hyperplane_section, load_model, save_model
from .pencils import brill_noether_numbers, enumerate_pencils, special_subspace

__version__ = "0.1.0"

__all__ = [
    "BettiTable",
    "Field",
    "GradedRing",
    "ProjectiveModel",
    "Subspace",
    "betti_table",
    "brill_noether_numbers",
    "enumerate_pencils",
    "gen_canonical",
    "gen_k3_g6",
    "gen_nodal_sextic",
    "get_field",
    "hyperplane_section",
    "kernel_basis",
    "koszul_cohomology",
    "koszul_dim",
    "load_model",
    "quotient_piece",
    "rank",
    "save_model",
    "special_subspace",
    "subspace_cohomology_image",
    "univariate_roots",
]
