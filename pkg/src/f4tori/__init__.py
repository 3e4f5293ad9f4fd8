"""Exact-arithmetic kernels and deciders for maximal tori in F4 and O(q) over Q."""

from .albert import (
    RealCompositionSignature,
    RealFormF4,
    check_composition_axioms,
    real_form_from_signature,
    torus_generator,
)
from .etale import (
    CubicEtale,
    Datum,
    EtaleInvolution,
    InvolutionFactor,
    LStructuredFactor,
    canonical_trace_form,
    phi_algebra,
    rho_data,
    trace_form,
    validate_datum,
)
from .places import REAL, hilbert_symbol, is_square_local, square_class
from .polynomials import (
    IsolatingInterval,
    Polynomial,
    discriminant,
    isolate_real_roots,
    parse_polynomial,
    resultant,
    sign_at_root,
    sturm_real_root_count,
)
from .quadforms import (
    DiagonalForm,
    WittInvariants,
    equivalent,
    invariants_of,
    is_isotropic_global,
    is_trivial_clifford,
    orthogonal_sum,
    realize_invariants,
    witt_split,
)
from .realizability import (
    Verdict,
    connectedness,
    exists_local_assignment,
    f4_classify_global,
    f4_local,
    lgp_trivial_clifford,
    local_orth_realizable,
    split_place_test,
)

__version__ = "0.1.0"

__all__ = [
    "CubicEtale", "Datum", "DiagonalForm", "EtaleInvolution",
    "InvolutionFactor", "IsolatingInterval", "LStructuredFactor",
    "Polynomial", "REAL", "RealCompositionSignature", "RealFormF4",
    "Verdict", "WittInvariants", "canonical_trace_form",
    "check_composition_axioms", "connectedness", "discriminant",
    "equivalent", "exists_local_assignment", "f4_classify_global",
    "f4_local", "hilbert_symbol", "invariants_of", "is_isotropic_global",
    "is_square_local", "is_trivial_clifford", "isolate_real_roots",
    "lgp_trivial_clifford", "local_orth_realizable", "orthogonal_sum",
    "parse_polynomial", "phi_algebra", "real_form_from_signature",
    "realize_invariants", "resultant", "rho_data", "sign_at_root",
    "split_place_test", "square_class", "sturm_real_root_count",
    "torus_generator", "trace_form", "validate_datum", "witt_split",
]
