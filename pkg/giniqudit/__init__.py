"""
gini-qudit - 奇数维有限量子系统的 Gini 不确定关系

估计 Gini 不确定常数 η_d，寻找最小不确定 fiducial 态，
构造位移生成的相干态族，并运行展开、噪声与熵比较实验。
"""

__version__ = "1.0.0"

from .qudit.core import (
    DensityMatrix,
    Dimension,
    DimensionError,
    GiniQuditError,
    ProbDist,
    PureState,
    StateError,
)
from .models import (
    GiniQuditConfig,
    NoiseConfig,
    OutputConfig,
    ParallelConfig,
    ParameterError,
    SearchConfig,
    SweepConfig,
)
from .qudit.phase_space import (
    CoherentFamily,
    ExpansionCoefficients,
    GroupElement,
    PhasePoint,
    expand,
    noise_experiment,
    reconstruct,
)
from .qudit.serialization import SerializationError
from .uncertainty import (
    EntropyReport,
    GiniReport,
    entropy_report,
    gini_pairwise,
    gini_report,
    gini_sorted,
)
from .search import (
    EtaEstimate,
    estimate_eta,
    eta_tilde,
    find_min_uncertainty_state,
    gaussian_state,
    special_state,
)
from .schema import ConfigError
from .experiments import InvariantViolation
from .logging import get_logger, configure_logging

__all__ = [
    # 版本
    "__version__",
    # 态与维数
    "Dimension",
    "PureState",
    "DensityMatrix",
    "ProbDist",
    # 相空间
    "PhasePoint",
    "GroupElement",
    "CoherentFamily",
    "ExpansionCoefficients",
    "expand",
    "reconstruct",
    "noise_experiment",
    # 不确定性
    "GiniReport",
    "EntropyReport",
    "gini_sorted",
    "gini_pairwise",
    "gini_report",
    "entropy_report",
    # 搜索
    "EtaEstimate",
    "eta_tilde",
    "special_state",
    "gaussian_state",
    "estimate_eta",
    "find_min_uncertainty_state",
    # 配置
    "GiniQuditConfig",
    "SearchConfig",
    "NoiseConfig",
    "SweepConfig",
    "OutputConfig",
    "ParallelConfig",
    # 错误
    "GiniQuditError",
    "DimensionError",
    "StateError",
    "ParameterError",
    "SerializationError",
    "ConfigError",
    "InvariantViolation",
    # 日志
    "get_logger",
    "configure_logging",
]
