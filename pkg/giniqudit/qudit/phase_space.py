"""
离散相空间 Z_d × Z_d

位移算符 D(α,β)、Heisenberg-Weyl 群乘法、相干态族 Σ(|f⟩)、单位分解与展开。

D(α,β)|X;κ⟩ = ω^{2^{-1}αβ + ακ} |X;κ+β⟩
"""

import logging
import threading
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple, Union

import numpy as np

from ..models import ParameterError
from ..parallel import derive_rng, map_ordered
from .core import (
    ArrayLike,
    Dimension,
    DimensionError,
    PureState,
    as_vector,
    readonly_array,
)

logger = logging.getLogger("giniqudit.phase_space")


@dataclass(frozen=True)
class PhasePoint:
    """相空间点 (α, β)，分量按 mod d 约化"""
    alpha: int
    beta: int
    dim: Dimension

    def __post_init__(self):
        object.__setattr__(self, "alpha", self.dim.reduce(self.alpha))
        object.__setattr__(self, "beta", self.dim.reduce(self.beta))

    def shifted(self, kappa: int, lam: int) -> "PhasePoint":
        return PhasePoint(self.alpha + kappa, self.beta + lam, self.dim)

    def negated(self) -> "PhasePoint":
        return PhasePoint(-self.alpha, -self.beta, self.dim)


def all_points(dim: Dimension) -> Iterator[PhasePoint]:
    """按 α 优先顺序遍历 d² 个相空间点"""
    for alpha in range(dim.d):
        for beta in range(dim.d):
            yield PhasePoint(alpha, beta, dim)


def _displacement_phases(dim: Dimension, alpha: int, beta: int) -> np.ndarray:
    kappa = np.arange(dim.d)
    exponents = (dim.half * alpha * beta + alpha * kappa) % dim.d
    return dim.omega_powers[exponents]


def displace(dim: Dimension, p: PhasePoint, vector: np.ndarray) -> np.ndarray:
    """D(α,β)·vector，O(d)"""
    dim.check_same(p.dim)
    return np.roll(_displacement_phases(dim, p.alpha, p.beta) * vector, p.beta)


def displacement_matrix(dim: Dimension, p: PhasePoint) -> np.ndarray:
    """按闭式作用直接构造 D(α,β)，不做矩阵幂"""
    dim.check_same(p.dim)
    d = dim.d
    kappa = np.arange(d)
    matrix = np.zeros((d, d), dtype=complex)
    matrix[(kappa + p.beta) % d, kappa] = _displacement_phases(dim, p.alpha, p.beta)
    return matrix


def clock_matrix(dim: Dimension, alpha: int) -> np.ndarray:
    """Z^α = Σ_m ω^{αm} |X;m⟩⟨X;m|"""
    m = np.arange(dim.d)
    return np.diag(dim.omega_powers[(alpha * m) % dim.d])


def shift_matrix(dim: Dimension, beta: int) -> np.ndarray:
    """X^β = Σ_m |X;m+β⟩⟨X;m|"""
    d = dim.d
    m = np.arange(d)
    matrix = np.zeros((d, d), dtype=complex)
    matrix[(m + beta) % d, m] = 1.0
    return matrix


@dataclass(frozen=True)
class GroupElement:
    """Heisenberg-Weyl 群元 D(α,β)·ω^γ"""
    point: PhasePoint
    gamma: int = 0

    def __post_init__(self):
        object.__setattr__(self, "gamma", self.point.dim.reduce(self.gamma))

    @property
    def dim(self) -> Dimension:
        return self.point.dim

    @classmethod
    def identity(cls, dim: Dimension) -> "GroupElement":
        return cls(PhasePoint(0, 0, dim), 0)

    @classmethod
    def of(cls, dim: Dimension, alpha: int, beta: int, gamma: int = 0) -> "GroupElement":
        return cls(PhasePoint(alpha, beta, dim), gamma)

    def inverse(self) -> "GroupElement":
        return GroupElement(self.point.negated(), -self.gamma)

    def matrix(self) -> np.ndarray:
        return self.dim.omega_powers[self.gamma] * displacement_matrix(self.dim, self.point)


def compose(a: GroupElement, b: GroupElement) -> GroupElement:
    """
    群乘法：(α₁+α₂, β₁+β₂, γ₁+γ₂+2^{-1}(α₁β₂−α₂β₁)) mod d
    """
    a.dim.check_same(b.dim)
    dim = a.dim
    a1, b1 = a.point.alpha, a.point.beta
    a2, b2 = b.point.alpha, b.point.beta
    gamma = a.gamma + b.gamma + dim.half * (a1 * b2 - a2 * b1)
    return GroupElement(PhasePoint(a1 + a2, b1 + b2, dim), gamma)


def covariance_phase(p: PhasePoint, kappa: int, lam: int, mu: int = 0) -> int:
    """
    [D(κ,λ)ω^μ]|α,β⟩_f = ω^ν |α+κ,β+λ⟩_f 中的 ν = μ + 2^{-1}(κβ − λα)
    """
    dim = p.dim
    return dim.reduce(mu + dim.half * (kappa * p.beta - lam * p.alpha))


@dataclass
class CoherentFamily:
    """
    相干态族 Σ(|f⟩) = {D(α,β)|f⟩}

    成员按需计算并按相空间点缓存；缓存写入由锁串行化，写入后只读。
    """
    fiducial: PureState
    _cache: Dict[Tuple[int, int], PureState] = field(default_factory=dict, init=False, repr=False)
    _stacked: Optional[np.ndarray] = field(default=None, init=False, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, init=False, repr=False)

    @property
    def dim(self) -> Dimension:
        return self.fiducial.dim

    def member(self, p: PhasePoint) -> PureState:
        """|α,β⟩_f = D(α,β)|f⟩"""
        self.dim.check_same(p.dim)
        key = (p.alpha, p.beta)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        with self._lock:
            cached = self._cache.get(key)
            if cached is None:
                cached = PureState(displace(self.dim, p, self.fiducial.amplitudes), self.dim)
                self._cache[key] = cached
        return cached

    def members(self) -> Iterator[Tuple[PhasePoint, PureState]]:
        for p in all_points(self.dim):
            yield p, self.member(p)

    def stacked(self) -> np.ndarray:
        """形状 (d², d) 的成员数组，行序为 α 优先"""
        if self._stacked is None:
            rows = np.array([state.amplitudes for _, state in self.members()])
            with self._lock:
                if self._stacked is None:
                    self._stacked = readonly_array(rows)
        return self._stacked


def member(fam: CoherentFamily, p: PhasePoint) -> PureState:
    return fam.member(p)


def identity_resolution_defect(fam: CoherentFamily) -> float:
    """‖(1/d) Σ |α,β⟩⟨α,β| − I‖_max"""
    rows = fam.stacked()
    d = fam.dim.d
    frame = rows.T @ rows.conj() / d
    return float(np.max(np.abs(frame - np.eye(d))))


@dataclass(frozen=True)
class ExpansionCoefficients:
    """s_{α,β}，行下标 α，列下标 β"""
    coeffs: np.ndarray
    dim: Dimension

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=complex)
        if coeffs.shape != (self.dim.d, self.dim.d):
            raise DimensionError(f"展开系数形状 {coeffs.shape} 与维数 {self.dim.d} 不符")
        object.__setattr__(self, "coeffs", readonly_array(coeffs))

    def at(self, p: PhasePoint) -> complex:
        return complex(self.coeffs[p.alpha, p.beta])

    def l1_norm(self) -> float:
        """Σ |s_{α,β}|"""
        return float(np.sum(np.abs(self.coeffs)))


def _vector_of(s: Union[PureState, ArrayLike], dim: Dimension) -> np.ndarray:
    if isinstance(s, PureState):
        dim.check_same(s.dim)
        return np.asarray(s.amplitudes)
    return as_vector(s, dim)


def expand(fam: CoherentFamily, s: Union[PureState, ArrayLike]) -> ExpansionCoefficients:
    """s_{α,β} = (1/d)·⟨α,β|_f s⟩；输入可以是未归一化向量"""
    dim = fam.dim
    vector = _vector_of(s, dim)
    coeffs = fam.stacked().conj() @ vector / dim.d
    return ExpansionCoefficients(coeffs.reshape(dim.d, dim.d), dim)


def reconstruct(fam: CoherentFamily, c: ExpansionCoefficients) -> np.ndarray:
    """Σ s_{α,β}|α,β⟩_f"""
    fam.dim.check_same(c.dim)
    return c.coeffs.reshape(-1) @ fam.stacked()


def component_vectors(fam: CoherentFamily, c: ExpansionCoefficients) -> np.ndarray:
    """形状 (d, d, d)：[α, β] 处为 s_{α,β}|α,β⟩_f"""
    fam.dim.check_same(c.dim)
    d = fam.dim.d
    return (c.coeffs.reshape(-1, 1) * fam.stacked()).reshape(d, d, d)


def error_bound(c: ExpansionCoefficients, epsilon: float) -> float:
    """噪声误差范数的上界 ε·Σ|s_{α,β}|"""
    return float(epsilon) * c.l1_norm()


@dataclass(frozen=True)
class NoiseResult:
    """噪声实验结果"""
    epsilon: float
    seed: int
    per_trial: List[float]
    bound: float

    @property
    def average(self) -> float:
        return float(np.mean(self.per_trial)) if self.per_trial else 0.0


def noise_experiment(
    fam: CoherentFamily,
    s: Union[PureState, ArrayLike],
    epsilon: float,
    trials: int,
    seed: int,
    threads: int = 1,
) -> NoiseResult:
    """
    系数乘性噪声 (1+λ_{α,β})，λ ~ U(−ε, ε)。

    每次试验 t 使用独立的 (seed, t) 随机流，结果与线程调度无关。
    误差向量 |e⟩ = Σ λ_{α,β} s_{α,β} |α,β⟩_f。
    """
    if epsilon < 0:
        raise ParameterError(f"epsilon 不能为负: {epsilon}")
    if trials < 1:
        raise ParameterError(f"trials 至少为 1: {trials}")

    coefficients = expand(fam, s)
    flat = coefficients.coeffs.reshape(-1)
    rows = fam.stacked()
    d = fam.dim.d

    def run_trial(trial: int) -> float:
        rng = derive_rng(seed, trial)
        lam = rng.uniform(-epsilon, epsilon, size=d * d)
        error = (lam * flat) @ rows
        return float(np.linalg.norm(error))

    per_trial = map_ordered(run_trial, list(range(trials)), threads)
    result = NoiseResult(
        epsilon=float(epsilon),
        seed=seed,
        per_trial=per_trial,
        bound=error_bound(coefficients, epsilon),
    )
    logger.debug(
        "noise experiment d=%d epsilon=%g trials=%d average=%.6g",
        d, epsilon, trials, result.average,
    )
    return result
