"""
Qudit 线性代数基础

提供奇数维 d 系统的基本对象：
- Dimension: 维数及 Z_d 上的算术（2^{-1}、ω 的幂）
- PureState / DensityMatrix / ProbDist: 不可变的态与概率分布
- 有限傅里叶变换与厄米矩阵特征分解

下标约定：内部统一使用 0…d-1，对称标签 r ∈ {-(d-1)/2,…,(d-1)/2} 映射为 r mod d。
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Sequence, Tuple, Union

import numpy as np

logger = logging.getLogger("giniqudit.core")

# 输入态的归一化容差：超过则拒绝，未超过则精确重新归一化
NORM_TOLERANCE = 1e-8
# 厄米性 / 迹 / 概率和的校验容差
MATRIX_TOLERANCE = 1e-10
# 半正定判据：最小特征值下限
PSD_TOLERANCE = 1e-10

JACOBI_OFF_DIAGONAL_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100

ArrayLike = Union[Sequence[complex], np.ndarray]


class GiniQuditError(Exception):
    """gini-qudit 错误基类"""
    pass


class DimensionError(GiniQuditError, ValueError):
    """维数非法（偶数、小于 3）或维数不匹配"""
    pass


class StateError(GiniQuditError, ValueError):
    """态、密度矩阵或概率分布不满足不变量"""
    pass


def readonly_array(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class Dimension:
    """奇数维 d ≥ 3"""
    d: int

    def __post_init__(self):
        if isinstance(self.d, bool) or not isinstance(self.d, (int, np.integer)):
            raise DimensionError(f"维数必须是整数，得到 {type(self.d).__name__}")
        if self.d < 3 or self.d % 2 == 0:
            raise DimensionError(f"维数必须是不小于 3 的奇数，得到 d={self.d}")
        object.__setattr__(self, "d", int(self.d))

    @property
    def half(self) -> int:
        """Z_d 中的 2^{-1} = (d+1)/2"""
        return (self.d + 1) // 2

    @property
    def omega(self) -> complex:
        return complex(np.exp(2j * np.pi / self.d))

    @property
    def omega_powers(self) -> np.ndarray:
        """ω^k, k = 0…d-1"""
        return _omega_powers(self.d)

    def reduce(self, r: int) -> int:
        return int(r) % self.d

    def to_symmetric(self, r: int) -> int:
        """0…d-1 下标 → 对称标签"""
        r = self.reduce(r)
        return r if r <= (self.d - 1) // 2 else r - self.d

    def from_symmetric(self, label: int) -> int:
        """对称标签 → 0…d-1 下标"""
        return self.reduce(label)

    def check_same(self, other: "Dimension") -> None:
        if self.d != other.d:
            raise DimensionError(f"维数不匹配: {self.d} != {other.d}")


@lru_cache(maxsize=None)
def _omega_powers(d: int) -> np.ndarray:
    k = np.arange(d)
    return readonly_array(np.exp(2j * np.pi * k / d))


def as_vector(values: ArrayLike, dim: Dimension) -> np.ndarray:
    vector = np.asarray(values, dtype=complex).reshape(-1)
    if vector.shape[0] != dim.d:
        raise DimensionError(f"向量长度 {vector.shape[0]} 与维数 {dim.d} 不符")
    if not np.all(np.isfinite(vector)):
        raise StateError("向量包含非有限数值")
    return vector


@dataclass(frozen=True)
class PureState:
    """
    位置基下的纯态振幅。

    构造时要求 |‖amplitudes‖ - 1| ≤ 1e-8，随后精确重新归一化。
    任意非零向量请使用 normalize()。
    """
    amplitudes: np.ndarray
    dim: Dimension

    def __post_init__(self):
        vector = as_vector(self.amplitudes, self.dim)
        norm = float(np.linalg.norm(vector))
        if abs(norm - 1.0) > NORM_TOLERANCE:
            raise StateError(f"态未归一化: ‖s‖ = {norm:.12g}")
        object.__setattr__(self, "amplitudes", readonly_array(vector / norm))

    @property
    def d(self) -> int:
        return self.dim.d

    def overlap(self, other: "PureState") -> complex:
        """⟨self|other⟩"""
        self.dim.check_same(other.dim)
        return complex(np.vdot(self.amplitudes, other.amplitudes))


def normalize(values: ArrayLike, dim: Dimension) -> PureState:
    """把任意非零向量归一化为 PureState（用于四位小数的参考数据等）。"""
    vector = as_vector(values, dim)
    norm = float(np.linalg.norm(vector))
    if norm == 0.0:
        raise StateError("零向量无法归一化")
    if abs(norm - 1.0) > NORM_TOLERANCE:
        logger.debug("renormalizing vector with norm %.12g", norm)
    return PureState(vector / norm, dim)


@dataclass(frozen=True)
class DensityMatrix:
    """d×d 厄米、迹为 1、半正定的复矩阵"""
    entries: np.ndarray
    dim: Dimension

    def __post_init__(self):
        matrix = np.asarray(self.entries, dtype=complex)
        d = self.dim.d
        if matrix.shape != (d, d):
            raise DimensionError(f"密度矩阵形状 {matrix.shape} 与维数 {d} 不符")
        if not np.all(np.isfinite(matrix)):
            raise StateError("密度矩阵包含非有限数值")
        asymmetry = float(np.max(np.abs(matrix - matrix.conj().T)))
        if asymmetry > MATRIX_TOLERANCE:
            raise StateError(f"密度矩阵不是厄米矩阵 (偏差 {asymmetry:.3g})")
        # 精确厄米化
        matrix = 0.5 * (matrix + matrix.conj().T)
        trace = complex(np.trace(matrix))
        if abs(trace - 1.0) > MATRIX_TOLERANCE:
            raise StateError(f"密度矩阵的迹不为 1: {trace:.12g}")
        smallest = float(np.linalg.eigvalsh(matrix)[0])
        if smallest < -PSD_TOLERANCE:
            raise StateError(f"密度矩阵不是半正定的 (最小特征值 {smallest:.3g})")
        object.__setattr__(self, "entries", readonly_array(matrix))

    @property
    def d(self) -> int:
        return self.dim.d

    def purity(self) -> float:
        """tr ρ²"""
        return float(np.real(np.trace(self.entries @ self.entries)))

    def conjugate_by(self, unitary: np.ndarray) -> "DensityMatrix":
        """U ρ U†"""
        return DensityMatrix(unitary @ self.entries @ unitary.conj().T, self.dim)


@dataclass(frozen=True)
class ProbDist:
    """非负、和为 1 的长度 d 概率向量"""
    probs: np.ndarray

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=float).reshape(-1)
        if probs.size == 0:
            raise StateError("概率分布不能为空")
        if not np.all(np.isfinite(probs)):
            raise StateError("概率分布包含非有限数值")
        if float(probs.min()) < -MATRIX_TOLERANCE:
            raise StateError(f"概率分布含负值: {float(probs.min()):.3g}")
        total = float(probs.sum())
        if abs(total - 1.0) > MATRIX_TOLERANCE:
            raise StateError(f"概率和不为 1: {total:.12g}")
        # 舍入误差产生的微小负值截断为 0
        object.__setattr__(self, "probs", readonly_array(np.clip(probs, 0.0, None)))

    @classmethod
    def from_vector(cls, values: Sequence[float]) -> "ProbDist":
        return cls(np.asarray(values, dtype=float))

    @property
    def d(self) -> int:
        return int(self.probs.shape[0])


@lru_cache(maxsize=64)
def _fourier(d: int) -> np.ndarray:
    r = np.arange(d)
    exponents = np.outer(r, r) % d
    return readonly_array(_omega_powers(d)[exponents] / math.sqrt(d))


def fourier_matrix(dim: Dimension) -> np.ndarray:
    """F[r][s] = ω^{rs} / √d（只读数组）"""
    return _fourier(dim.d)


def momentum_amplitudes(amplitudes: np.ndarray) -> np.ndarray:
    """⟨P;r|s⟩ = (F† s)_r，走 FFT 路径"""
    return np.fft.fft(amplitudes, norm="ortho")


def position_state(dim: Dimension, r: int) -> PureState:
    vector = np.zeros(dim.d, dtype=complex)
    vector[dim.reduce(r)] = 1.0
    return PureState(vector, dim)


def momentum_state(dim: Dimension, r: int) -> PureState:
    """|P;r⟩ = F|X;r⟩，即 F 的第 r 列"""
    return PureState(np.array(fourier_matrix(dim)[:, dim.reduce(r)]), dim)


def density_from_pure(state: Union[PureState, ArrayLike], dim: Union[Dimension, None] = None) -> DensityMatrix:
    """ρ = |s⟩⟨s|"""
    if not isinstance(state, PureState):
        if dim is None:
            raise DimensionError("原始向量需要同时给出维数")
        state = PureState(np.asarray(state, dtype=complex), dim)
    a = state.amplitudes
    return DensityMatrix(np.outer(a, a.conj()), state.dim)


def mix(states: Sequence[Tuple[float, DensityMatrix]]) -> DensityMatrix:
    """凸组合 Σ p_i ρ_i"""
    if not states:
        raise StateError("混合态至少需要一个分量")
    dim = states[0][1].dim
    weights = np.array([float(w) for w, _ in states])
    if np.any(weights < 0.0):
        raise StateError(f"混合权重不能为负: {weights.tolist()}")
    total = float(weights.sum())
    if abs(total - 1.0) > 1e-12:
        raise StateError(f"混合权重之和不为 1: {total:.15g}")
    entries = np.zeros((dim.d, dim.d), dtype=complex)
    for weight, rho in states:
        dim.check_same(rho.dim)
        entries += weight * rho.entries
    return DensityMatrix(entries, dim)


def _as_hermitian(m: Union[DensityMatrix, np.ndarray]) -> np.ndarray:
    if isinstance(m, DensityMatrix):
        return np.array(m.entries)
    matrix = np.asarray(m, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise DimensionError(f"需要方阵，得到形状 {matrix.shape}")
    if float(np.max(np.abs(matrix - matrix.conj().T))) > MATRIX_TOLERANCE:
        raise StateError("特征分解只接受厄米矩阵")
    return 0.5 * (matrix + matrix.conj().T)


def _jacobi_eigh(matrix: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """复厄米矩阵的循环 Jacobi 旋转"""
    a = np.array(matrix, dtype=complex)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)

    for sweep in range(JACOBI_MAX_SWEEPS):
        off = float(np.linalg.norm(a - np.diag(np.diag(a))))
        if off < JACOBI_OFF_DIAGONAL_TOL:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r < JACOBI_OFF_DIAGONAL_TOL * 1e-3:
                    continue
                phase = apq / r
                theta = (a[q, q].real - a[p, p].real) / (2.0 * r)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                # 先消去 a[p,q] 的相位，再做实 Jacobi 旋转
                g = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ g
                a[idx, :] = g.conj().T @ a[idx, :]
                v[:, idx] = v[:, idx] @ g
    else:
        logger.warning("Jacobi eigensolver stopped after %d sweeps", JACOBI_MAX_SWEEPS)

    return np.real(np.diag(a)), v


def hermitian_eig(
    m: Union[DensityMatrix, np.ndarray],
    method: str = "eigh",
) -> Tuple[np.ndarray, List[PureState]]:
    """
    厄米矩阵的特征分解。

    Args:
        m: 密度矩阵或厄米数组
        method: "eigh"（LAPACK）或 "jacobi"（循环 Jacobi 旋转）

    Returns:
        (降序特征值, 对应的单位特征向量)
    """
    matrix = _as_hermitian(m)
    dim = m.dim if isinstance(m, DensityMatrix) else Dimension(matrix.shape[0])

    if method == "eigh":
        values, vectors = np.linalg.eigh(matrix)
    elif method == "jacobi":
        values, vectors = _jacobi_eigh(matrix)
    else:
        raise ValueError(f"未知的特征分解方法: {method}")

    order = np.argsort(-values, kind="stable")
    values = values[order]
    states = [normalize(vectors[:, i], dim) for i in order]
    return values, states
