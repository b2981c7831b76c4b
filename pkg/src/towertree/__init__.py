"""Towers of finite sets and groups, their trees, and the maps between them.

The library makes the tower <-> tree correspondence executable at desk
scale: towers convert to rooted simplicial trees and back, morphisms to
non-expansive metrically proper tree maps and back, end spaces carry
exact ultrametrics, and Mittag-Leffler behavior is decided with witnesses
wherever a truncated instance can decide it.
"""

from .errors import (
    DepthExhausted,
    DifferentTowers,
    DifferentTrees,
    ElementNotInLevel,
    EmptyCore,
    IndexOutOfRange,
    InvalidParameter,
    NotLevelMorphism,
    NotML,
    NotProper,
    ParseError,
    SourceTargetMismatch,
    TowerTreeError,
    UnsupportedMode,
    ValidationError,
    VertexNotFound,
    WindowOverflow,
)
from .towers import (
    EQUIV_INCONCLUSIVE,
    EQUIVALENT,
    EXTENSIONAL,
    FAILS,
    GENERATOR,
    HOLDS,
    INCONCLUSIVE,
    NOT_EQUIVALENT,
    BondComposite,
    EquivalenceVerdict,
    Levelization,
    LevelStabilization,
    MLFailure,
    MLReport,
    SolenoidOracle,
    Tower,
    TowerMorphism,
    compose_bonding,
    compose_morphisms,
    identity_morphism,
    is_extendable,
    is_level_morphism,
    levelize_morphism,
    ml_verdict,
    morphisms_equivalent,
    natural_key,
    surjective_core,
    windowed_solenoid_tower,
)
from .trees import (
    ROOT,
    Branch,
    RootedTree,
    TreePoint,
    Vertex,
    ancestor_point_at,
    branches,
    distance,
    dot_of_tree,
    geodesic_data,
    geodesic_point,
    is_geodesically_complete,
    max_geodesic_subtree,
    meet_point,
    point_of,
    sphere,
    subtree_at,
    tower_of_tree,
    tree_of_tower,
)
from .maps import (
    HomotopyReport,
    NonexpansiveVerdict,
    PropernessReport,
    Retraction,
    TreeMap,
    XiSchedule,
    check_nonexpansive,
    compose_tree_maps,
    extract_morphism,
    homotopy_properness,
    identity_tree_map,
    induce_tree_map,
    properness_witness,
    retraction_map,
    simplicial_of_level,
    xi_schedule,
)
from .ends import (
    GRID,
    RATIONAL,
    AgreementDepth,
    CorrespondenceRow,
    EndCorrespondence,
    UltrametricSpace,
    UltrametricVerdict,
    agreement,
    bilipschitz_bounds,
    certified_ln_sign,
    certified_neg_log_floor,
    end_space_of,
    grid_space,
    rational_space,
    simplicialize,
    tree_of_ultrametric,
    tu_distance,
    verify_ultrametric,
)
from .groups import (
    ConditionReport,
    CoreIso,
    GroupLevelMorphism,
    GroupTower,
    IsometryVerdict,
    IsoVerdict,
    ScaleHom,
    TableGroup,
    TableHom,
    Thread,
    WindowedZ,
    as_tower_morphism,
    check_condition_E,
    check_condition_M,
    check_translation_isometry,
    core_iso_construction,
    identity_group_morphism,
    is_group_tower_iso,
    limit_threads,
    ml_projection_check,
    thread_distance,
    thread_inverse,
    thread_product,
    underlying_tower,
)
from .generate import (
    BiHolderRow,
    BiHolderTable,
    NonRetractReport,
    gen_biholder,
    gen_example_nonretract,
    gen_random_grid_space,
    gen_random_group_tower,
    gen_random_rational_space,
    gen_random_tower,
    gen_solenoid,
    random_morphism,
)
from .formats import (
    emit_distance_matrix,
    emit_group_tower,
    emit_morphism,
    emit_tower,
    parse_distance_matrix,
    parse_group_tower,
    parse_morphism,
    parse_tower,
)
from .report import AnalysisReport, build_report, emit_report, parse_report, render_text

__version__ = "0.1.0"
