"""
已发表的参考数据（四位小数，按原样保存）

- MIN_UNCERTAINTY_FIDUCIALS: d = 3, 5, 7 的最小 Gini 不确定态
- EXAMPLE_STATE_D3: d = 3 的展开示例态（未归一化，‖s‖ ≈ 1.05）
- EXPANSION_COMPONENTS_D3: 该示例态的 9 个展开分量 s_{α,β}|α,β⟩_g，
  以发表时的对称标签 (α, β) ∈ {−1, 0, 1}² 为键

标签约定：
- 发表的 d = 3 fiducial 分量顺序与示例态、分量表相反（宇称 r → −r），
  reference_fiducial(3, aligned=True) 负责反转；Δ 不受影响。
- 分量表的第一个标签与本库 D(α,β) 的符号相反：本库的 (α, β) 分量
  对应表中的 (−α, β)，见 published_label()。
"""

from typing import Dict, List, Tuple

import numpy as np

from .qudit.core import Dimension, PureState, normalize

MIN_UNCERTAINTY_FIDUCIALS: Dict[int, List[complex]] = {
    3: [
        -0.2395 + 0.1773j,
        -0.3749 - 0.7941j,
        0.3735 + 0.0232j,
    ],
    5: [
        -0.1665 + 0.2964j,
        0.5752 - 0.5821j,
        -0.3445 + 0.2167j,
        0.1598 + 0.0086j,
        -0.1092 - 0.1072j,
    ],
    7: [
        0.3479 - 0.0613j,
        -0.1256 - 0.0417j,
        -0.0054 + 0.8010j,
        0.1875 + 0.1370j,
        -0.1618 - 0.1764j,
        -0.3214 + 0.0283j,
        -0.0125 + 0.0228j,
    ],
}

EXAMPLE_STATE_D3: List[complex] = [
    0.5040 - 0.1526j,
    0.3283 + 0.1757j,
    0.8324 + 0.0231j,
]

EXPANSION_COMPONENTS_D3: Dict[Tuple[int, int], List[complex]] = {
    (-1, -1): [0.2527 - 0.0295j, 0.0844 + 0.0181j, 0.1074 - 0.0148j],
    (-1, 0): [0.0893 + 0.0016j, 0.2093 + 0.0081j, 0.0664 + 0.0255j],
    (-1, 1): [0.0923 + 0.0310j, 0.1222 - 0.0029j, 0.2869 - 0.0008j],
    (0, -1): [0.0672 - 0.0952j, -0.0361 - 0.0161j, 0.0217 + 0.0447j],
    (0, 0): [-0.0338 - 0.0055j, 0.0270 + 0.0757j, 0.0234 - 0.0140j],
    (0, 1): [-0.0108 - 0.0733j, -0.0488 + 0.0791j, 0.2180 + 0.0109j],
    (1, -1): [0.0688 + 0.0071j, -0.0191 + 0.0136j, -0.0126 - 0.0266j],
    (1, 0): [0.0151 - 0.0175j, 0.0169 + 0.0517j, -0.0159 - 0.0094j],
    (1, 1): [-0.0367 + 0.0287j, -0.0274 - 0.0517j, 0.1370 + 0.0078j],
}

# 发表数据只有四位小数
PUBLISHED_PRECISION = 5e-4


def reference_dimensions() -> List[int]:
    return sorted(MIN_UNCERTAINTY_FIDUCIALS)


def reference_fiducial(d: int, aligned: bool = False) -> PureState:
    """
    重新归一化后的发表 fiducial。

    Args:
        d: 3, 5 或 7
        aligned: d = 3 时把分量顺序反转，与示例态和分量表对齐
    """
    if d not in MIN_UNCERTAINTY_FIDUCIALS:
        raise KeyError(f"没有 d={d} 的参考态，可用: {reference_dimensions()}")
    vector = np.array(MIN_UNCERTAINTY_FIDUCIALS[d], dtype=complex)
    if aligned and d == 3:
        vector = vector[::-1]
    return normalize(vector, Dimension(d))


def example_state_d3() -> np.ndarray:
    """示例态原样返回（不归一化）"""
    return np.array(EXAMPLE_STATE_D3, dtype=complex)


def published_label(dim: Dimension, alpha: int, beta: int) -> Tuple[int, int]:
    """本库的 (α, β) 分量在分量表中的对称标签 (−α, β)"""
    return dim.to_symmetric(-alpha), dim.to_symmetric(beta)


def published_component(alpha: int, beta: int) -> np.ndarray:
    """本库 (α, β) 分量对应的发表向量"""
    label = published_label(Dimension(3), alpha, beta)
    return np.array(EXPANSION_COMPONENTS_D3[label], dtype=complex)
