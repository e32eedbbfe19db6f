"""
奇数维 qudit 的线性代数与离散相空间

相空间与序列化分别在 giniqudit.qudit.phase_space 和
giniqudit.qudit.serialization 中。
"""

from .core import (
    DensityMatrix,
    Dimension,
    DimensionError,
    GiniQuditError,
    ProbDist,
    PureState,
    StateError,
    density_from_pure,
    fourier_matrix,
    hermitian_eig,
    mix,
    momentum_amplitudes,
    momentum_state,
    normalize,
    position_state,
)

__all__ = [
    "DensityMatrix",
    "Dimension",
    "DimensionError",
    "GiniQuditError",
    "ProbDist",
    "PureState",
    "StateError",
    "density_from_pure",
    "fourier_matrix",
    "hermitian_eig",
    "mix",
    "momentum_amplitudes",
    "momentum_state",
    "normalize",
    "position_state",
]
