"""Numerical laboratory for the quantum Talbot effect on the two-sphere."""
from .errors import ContractViolation, DomainError, NoInverseError, PoleError, ResourceBudgetError, TalbotError
from .gauss_sums import (
    FourAStar,
    GaussTriple,
    four_a_star,
    gauss_modulus_sq,
    gauss_sum,
    gauss_vanishes,
    mod_inverse,
    phase_normalized_gauss,
)
from .legendre_kernel import (
    BranchConvention,
    PolarForm,
    generating_function,
    generating_series,
    legendre_eval,
    normalization_constant,
    polar_form,
)
from .evolution import (
    RationalTime,
    WavePacketParams,
    dft_coefficient_identity_check,
    limit_profile,
    psi_rational,
    psi_series,
    summand_magnitude,
)
from .singularity_atlas import (
    SingularityKind,
    SingularityReport,
    singular_points,
    talbot_predicate,
    verify_blowup_numerically,
)
from .diophantine import Convergent, continued_fraction, convergents, error_indicator
from .valleys import ValleySlice, scan_zeros, shadow_mask, v0_slices
from .carpet import CarpetGrid, optical_carpet, paraxial_field, quantum_carpet, slice_profile

__version__ = "0.1.0"
