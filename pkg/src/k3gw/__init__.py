"""Exact reduced descendent Gromov-Witten invariants of K3 surfaces.

The package computes, in exact rational arithmetic, the generating series of
reduced descendent invariants of a K3 surface in primitive curve classes:
the residue kernels A_k, B_k, C_kl built from the Weierstrass function, the
bracket calculus that removes unit and section-class insertions through the
holomorphic anomaly equation, the polynomiality of normalized invariants in
the descendent indexes, and a Virasoro-type constraint solver.
"""

from .exact import QQ, Rational
from .qmod import (
    G2,
    G4,
    G6,
    QExpansion,
    QMod,
    commutator_wt_check,
    d_q,
    delta_logderiv,
    delta_series,
    eisenstein_reduce,
    modular_basis,
)
from .series import LaurentSeries, kernel_z1_minus_z2, double_residue, ls_sqrt, residue
from .kernels import (
    A_series,
    B_series,
    C_series,
    p0_coefficient,
    reconstruct_A,
    reconstruct_B,
    reconstruct_C,
    residue_vs_p0_check,
    wp_fourier,
    wp_z,
)
from .engine import (
    Engine,
    F,
    ONE,
    PT,
    SeriesValue,
    W,
    av,
    bv,
    canonical_key,
    coefficient_at,
    maulik_closed_form,
    splitting_check,
)
from .polyfit import FamilySpec, Ins, PolyQ, fit_polynomial, normalized_bracket, verify_table
from .virasoro import W_TABLE, pochhammer_coeff, solve_w
from .dsl import bracket_to_text, parse_bracket, resolve_beta

__version__ = "0.1.0"
