"""Rate regions, outer bounds and constant-gap certificates for the K-user cyclic Gaussian interference channel."""

from .channel import (
    ChannelInstance,
    HkParams,
    OuterParams,
    PowerSplit,
    Regime,
    classify_regime,
    etw_closed_form,
    etw_split,
    hk_params,
    make_channel,
    outer_params,
    useful_inequalities,
)
from .fourier_motzkin import eliminate_variable, polymatroid_system, project_to_rates, remove_redundant
from .gdof import dsym_formula, dsym_numeric, gdof_sweep, symmetric_channel
from .polyhedra import (
    LpResult,
    LpStatus,
    certified_gap,
    contains_point,
    lp_max,
    region_includes,
    regions_equal,
    slice_2d,
    symmetric_max,
)
from .regions import (
    GapReport,
    achievable_region,
    family_gaps,
    mac_intersection,
    marginalize_split,
    outer_region,
    strong_region,
    ts_region_3,
)
from .system import InequalitySystem, Row

__version__ = "0.1.0"
