"""Exact Hilbert series and largeness diagnostics for Hamiltonian torus
and SL2 modules."""

from .certify import GorensteinVerdict, stanley_check
from .errors import CapacityError, ReconstructionError, SchemaError
from .laurent import LaurentCharacter
from .series import HilbertSeries, TruncatedSeries, expand, reconstruct
from .sl2 import (
    SL2Classification,
    SL2Module,
    ab_series,
    character,
    classify_largeness,
    jacobian_rank_probe,
    koszul_quotient_series,
    module_rep_matrices,
    moment_components_sl2,
    rep_matrices,
)
from .torus import (
    ReductionTrace,
    TorusLargenessReport,
    WeightMatrix,
    invariant_series_dp,
    is_stable,
    largeness_report,
    minimal_generators,
    moment_components,
    quotient_series,
    shell_diagnostics,
    shell_hilbert,
    stable_reduction,
)

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "GorensteinVerdict",
    "HilbertSeries",
    "LaurentCharacter",
    "ReconstructionError",
    "ReductionTrace",
    "SchemaError",
    "SL2Classification",
    "SL2Module",
    "TorusLargenessReport",
    "TruncatedSeries",
    "WeightMatrix",
    "ab_series",
    "character",
    "classify_largeness",
    "expand",
    "invariant_series_dp",
    "is_stable",
    "jacobian_rank_probe",
    "koszul_quotient_series",
    "largeness_report",
    "minimal_generators",
    "module_rep_matrices",
    "moment_components",
    "moment_components_sl2",
    "quotient_series",
    "reconstruct",
    "rep_matrices",
    "shell_diagnostics",
    "shell_hilbert",
    "stable_reduction",
    "stanley_check",
]
