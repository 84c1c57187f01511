"""Compound matrices, total positivity classes and sign-variation checks."""

from .classify import JPartition, PositivityClass, classify, detect_js
from .cones import (
    BasicCone,
    ExteriorBasicCone,
    IceCreamCone,
    SpannedCone,
    TMembershipResult,
    adjoint,
    cone_from_json,
    cone_to_json,
    contains,
    max_angle,
    t_chain_membership,
    t_membership,
)
from .errors import ClassificationError, InputError, NumericError, ResourceError, TotposError
from .exterior import (
    CompoundMatrix,
    MultiVector,
    apply_compound,
    compound,
    hodge,
    kronecker_eigs,
    minor,
    subset_rank,
    subset_unrank,
    subsets,
    wedge,
)
from .generators import (
    generate,
    permutation_similar,
    random_stp,
    rotation3,
    signature_conjugate,
    vandermonde,
)
from .signs import Region, SignVariation, m_membership, s_minus, s_plus, sign_variation
from .spectral import SpectralReport, VdpReport, eigen, gk_verify, perron_root, vdp_check

__version__ = "0.1.0"
