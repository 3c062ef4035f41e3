"""Exact rotation intervals and period sets for Markov sigma-space liftings."""

from .space import (
    B,
    R,
    SInterval,
    SPoint,
    OrderedInterval,
    dist,
    format_point,
    hull,
    interior_contains_branchpoint,
    median,
    mod1,
    parse_point,
    re,
    retract_to,
)
from .sigmamap import (
    DerivedMapHandle,
    PiecewiseAffineLifting,
    build_lifting,
    f0,
    f0_handle,
    parse_map,
    power_shift,
    power_shift_eval,
    rho_estimate,
    shift_lifting,
    shifted_lifting,
)
from .markov import (
    BasicInterval,
    BasicPartition,
    MarkovGraph,
    basic_intervals,
    covers,
    loop_sign,
    markov_graph,
    partition_of,
    signed_cover,
    to_dot,
)
from .rotation import RotationInterval, loop_rotation, rotation_interval
from .periods import (
    Blocks,
    LiftedOrbit,
    TruncatedPeriodSet,
    blocks,
    classify_orbit,
    enumerate_orbits,
    has_increasing_block_structure,
    node_orbit_periods,
    orbit_from_point,
    orbit_type_3star,
    periods_for_rotation,
    periods_mod1,
    reindex_shift,
    solve_loop_fixed_points,
    theorem_shape,
    verify_exact_period,
)
from .orderings import (
    PeriodSetExpr,
    ShValue,
    TWO_INF,
    baldwin_le,
    baldwin_tail,
    is_tail,
    is_union_of_tails,
    lambda_set,
    m_interval,
    misiurewicz_expr,
    parse_period_expr,
    sh_le,
    sh_tail,
)
from .treemap import (
    OrbitTreeRestriction,
    TreeMarkovMap,
    interval_map_tree,
    orbit_tree_restriction,
    star_map_tree,
    tree_true_periods,
)
from .constructions import (
    branch_family,
    circle_collapse,
    embed_star_map,
    example_5_1,
    example_5_2,
    example_6_1,
    example_6_3,
    example_6_4,
    glued_orbit_points,
    stefan_interval_map,
)
