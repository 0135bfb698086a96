"""Exact lattice computations for reflections between K3^[2]-type transcendental
lattices: discriminant actions, their (r, s, l) realizations, derived vs
twisted verdicts, and brute-force verifiers."""

from .actions import (
    Action,
    ActionError,
    admissible_actions,
    compose,
    equivalent,
    induced_action,
    negate,
    predicted_rho_action,
    rho_action,
)
from .classifier import (
    BLift,
    MukaiVector,
    Verdict,
    VerdictKind,
    blift_equiv,
    blift_is_trivial,
    classify,
    kernel_rank,
    line_bundle_vector,
    pk_picard_gram,
    pushforward_rank,
    tau,
    twist_pair,
    twisted_mukai_vector,
)
from .decompose import (
    RSL,
    DecompositionChain,
    DecompositionError,
    coprime_splits,
    decompose,
    decompose_div1,
    decompose_div2,
    fallback_search,
)
from .discriminant import DiscElement, DiscGroup, GluedComplement, disc_group, gamma, glue, quad
from .k3 import K3HalfLattice, RatIsometry, class_of, is_integral_on, model, reflection, rho_r
from .lattice import (
    IntLattice,
    LatticeError,
    Sublattice,
    contains,
    divisibility,
    is_primitive,
    orthogonal_complement,
    pair,
    smith_normal_form,
)
from .oracle import (
    VerificationReport,
    enumerate_disc_autos,
    run_suite,
    solve_congruence,
    verify_disc_structure,
    verify_rho_closed_form,
)

__version__ = "0.1.0"
