"""
不确定性泛函

位置/动量测量分布、Gini 指数（排序式与两两差式）、G_XP、不确定性间隙 Δ，
以及对应的 Shannon 熵量。

    G(p)  = 1 − 2/(d+1) · Σ_k (d−k) p_(k)     p 升序排列
          = Σ_{r,s} |p_r − p_s| / (2(d+1))
    G_XP  = G_X + G_P
    Δ     = 2(d−1)/(d+1) − G_XP
"""

import math
from dataclasses import dataclass
from typing import Any, Dict, Tuple

import numpy as np

from .qudit.core import (
    DensityMatrix,
    Dimension,
    ProbDist,
    PureState,
    fourier_matrix,
    hermitian_eig,
    momentum_amplitudes,
)
from .qudit.phase_space import CoherentFamily

# 0·ln 0 = 0 的截断
ENTROPY_FLOOR = 1e-300
# 混合态谱分解中忽略的特征值
EIGENVALUE_FLOOR = 1e-12


def max_gini(dim: Dimension) -> float:
    """点分布的 Gini 指数 (d−1)/(d+1)"""
    return (dim.d - 1) / (dim.d + 1)


def prob_position(rho: DensityMatrix) -> ProbDist:
    """P_X(r|ρ) = ⟨X;r|ρ|X;r⟩"""
    return ProbDist(np.real(np.diag(rho.entries)))


def prob_momentum(rho: DensityMatrix) -> ProbDist:
    """P_P(r|ρ) = ⟨P;r|ρ|P;r⟩，即 F†ρF 的对角元"""
    f = fourier_matrix(rho.dim)
    # diag(F† ρ F)_r = Σ_{i,j} conj(F_ir) ρ_ij F_jr
    probs = np.real(np.einsum("ir,ij,jr->r", f.conj(), rho.entries, f))
    return ProbDist(probs)


def pure_probabilities(state: PureState) -> Tuple[ProbDist, ProbDist]:
    """纯态的 (P_X, P_P)，动量分布走 FFT"""
    a = state.amplitudes
    return (
        ProbDist(np.abs(a) ** 2),
        ProbDist(np.abs(momentum_amplitudes(a)) ** 2),
    )


def _gini_sorted_array(probs: np.ndarray) -> float:
    d = probs.shape[0]
    ordered = np.sort(probs, kind="stable")
    weights = np.arange(d, 0, -1)
    return 1.0 - 2.0 / (d + 1) * float(weights @ ordered)


def gini_sorted(p: ProbDist) -> float:
    """升序排列后的线性公式，O(d log d)"""
    return _gini_sorted_array(p.probs)


def gini_pairwise(p: ProbDist) -> float:
    """两两差的双重求和，O(d²)"""
    probs = p.probs
    d = probs.shape[0]
    return float(np.abs(probs[:, None] - probs[None, :]).sum()) / (2.0 * (d + 1))


def lorenz_curve(p: ProbDist) -> np.ndarray:
    """
    Lorenz 曲线：升序概率的累积和，前置 0，长度 d+1。

    与 Gini 指数的关系 G = 1 − 2/(d+1) · Σ_{j=1}^{d} L_j。
    """
    return np.insert(np.cumsum(np.sort(p.probs, kind="stable")), 0, 0.0)


@dataclass(frozen=True)
class GiniReport:
    """单个态的 G_X、G_P、G_XP 与 Δ"""
    g_x: float
    g_p: float
    g_xp: float
    delta: float
    dim: Dimension

    @classmethod
    def from_indices(cls, g_x: float, g_p: float, dim: Dimension) -> "GiniReport":
        g_xp = g_x + g_p
        return cls(g_x=g_x, g_p=g_p, g_xp=g_xp, delta=2.0 * max_gini(dim) - g_xp, dim=dim)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "d": self.dim.d,
            "g_x": self.g_x,
            "g_p": self.g_p,
            "g_xp": self.g_xp,
            "delta": self.delta,
        }


def gini_report(rho: DensityMatrix) -> GiniReport:
    return GiniReport.from_indices(
        gini_sorted(prob_position(rho)),
        gini_sorted(prob_momentum(rho)),
        rho.dim,
    )


def gini_report_pure(state: PureState) -> GiniReport:
    """纯态的 GiniReport，不构造密度矩阵"""
    px, pp = pure_probabilities(state)
    return GiniReport.from_indices(gini_sorted(px), gini_sorted(pp), state.dim)


def gxp_of_amplitudes(amplitudes: np.ndarray) -> float:
    """
    单位向量振幅的 G_XP，搜索热路径使用。

    不做任何校验；调用方保证 ‖amplitudes‖ = 1。
    """
    px = np.abs(amplitudes) ** 2
    pp = np.abs(np.fft.fft(amplitudes, norm="ortho")) ** 2
    return _gini_sorted_array(px) + _gini_sorted_array(pp)


def shannon_entropy(p: ProbDist) -> float:
    """自然对数下的 Shannon 熵，p < 1e-300 的项记 0"""
    probs = p.probs[p.probs >= ENTROPY_FLOOR]
    return float(-np.sum(probs * np.log(probs)))


@dataclass(frozen=True)
class EntropyReport:
    """E_X、E_P 与熵不确定性超出量 E_X + E_P − ln d"""
    e_x: float
    e_p: float
    excess: float

    def to_dict(self) -> Dict[str, Any]:
        return {"e_x": self.e_x, "e_p": self.e_p, "excess": self.excess}


def _entropy_report(px: ProbDist, pp: ProbDist) -> EntropyReport:
    e_x = shannon_entropy(px)
    e_p = shannon_entropy(pp)
    return EntropyReport(e_x=e_x, e_p=e_p, excess=e_x + e_p - math.log(px.d))


def entropy_report(rho: DensityMatrix) -> EntropyReport:
    return _entropy_report(prob_position(rho), prob_momentum(rho))


def entropy_report_pure(state: PureState) -> EntropyReport:
    return _entropy_report(*pure_probabilities(state))


def mixture_bound(rho: DensityMatrix) -> Tuple[float, float]:
    """
    混合态 G_XP 与其本征态 G_XP 最大值的比较。

    Returns:
        (G_XP(ρ), max_i G_XP(|e_i⟩⟨e_i|))，只取 λ_i > 1e-12 的本征态
    """
    values, vectors = hermitian_eig(rho)
    candidates = [
        gini_report_pure(vector).g_xp
        for value, vector in zip(values, vectors)
        if value > EIGENVALUE_FLOOR
    ]
    return gini_report(rho).g_xp, max(candidates)


@dataclass(frozen=True)
class FamilyReport:
    """相干态族全部 d² 个成员的 Δ"""
    fiducial: GiniReport
    deltas: np.ndarray  # 形状 (d, d)，[α, β]

    @property
    def spread(self) -> float:
        """max |Δ(成员) − Δ(fiducial)|"""
        return float(np.max(np.abs(self.deltas - self.fiducial.delta)))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "fiducial": self.fiducial.to_dict(),
            "delta_min": float(self.deltas.min()),
            "delta_max": float(self.deltas.max()),
            "spread": self.spread,
        }


def family_report(fam: CoherentFamily) -> FamilyReport:
    d = fam.dim.d
    deltas = np.empty((d, d))
    for p, state in fam.members():
        deltas[p.alpha, p.beta] = gini_report_pure(state).delta
    return FamilyReport(fiducial=gini_report_pure(fam.fiducial), deltas=deltas)


def family_gini_spread(fam: CoherentFamily) -> float:
    """整个相干态族上 Δ 的最大偏差；位移不变性要求它为 0"""
    return family_report(fam).spread

