"""Exact algebraic invariants and replayable certificates for finite-group
extensions of shifts of finite type, presented by matrices over ZG and
ZG[t]."""

from .groups import (
    FiniteGroup,
    GroupSpec,
    GroupConstructionError,
    conjugacy_classes,
    cyclic,
    dihedral,
    explicit_table,
    make_group,
    product,
    symmetric,
    trivial_group,
)
from .groupring import (
    ConjElem,
    GRElem,
    augment,
    gr_mul,
    kappa_project,
    opposite,
    u_element,
    u_multiple,
)
from .polymat import (
    GRPoly,
    MatGR,
    MatGRPoly,
    bar_matrix,
    bar_poly_matrix,
    block_matrix,
    direct_sum,
    eval_poly_matrix,
    tilde_lift,
    transpose_opposite,
)
from .intlinalg import (
    PerronData,
    SNFResult,
    charpoly,
    nilpotent_triangularize,
    perron_eigendata,
    primitive_test_int,
    smith_normal_form,
)
from .invariants import (
    TraceData,
    det_poly,
    extend_traces,
    g_primitive_test,
    kappa_series,
    kappa_series_equal,
    perron_limit_check,
    trace_series,
    u_power_test,
    weight_subgroup,
    weight_subgroups,
    zeta_series,
)
from .equivalence import (
    AmalgResult,
    ChainBuilder,
    DiamondResult,
    Move,
    MoveChain,
    SEWitness,
    SSEWitness,
    absorb_step,
    amalg_nilpotent,
    apply_move,
    box_construct,
    box_matrix,
    core,
    diamond_normalize,
    forced_se_lift,
    nzc_check,
    sse_step_chain,
    verify_chain,
    verify_se,
    verify_sse,
    vf_reps,
)
from .constructions import (
    FamilyParams,
    embed_assemble,
    family_bk,
    family_ck_fk,
    higman_linearize,
    kl_default_ef,
    kl_pair,
    nk1_example_c4,
)
from .oracle import LabeledGraph, periodic_weights, skew_fixed_count

__version__ = "0.1.0"
