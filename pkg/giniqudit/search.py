"""
η_d 估计与最小不确定态搜索

- sample_haar_state / sample_mixed_state: Haar 随机纯态与诱导混合态
- eta_tilde / special_state: 解析上界 η̃_d 及取到它的态 |X;0⟩ + |P;a⟩
- local_refine: 单位球面上的坐标模式搜索（无导数）
- estimate_eta / find_min_uncertainty_state: 随机采样 + 细化

G_XP 是若干光滑函数的最大值（排序线性泛函），在折点处仍总有上升方向，
因此对最大化而言坐标模式搜索不会卡在折点上。
"""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np

from .models import ParameterError, SearchConfig
from .parallel import derive_rng, map_ordered
from .qudit.core import DensityMatrix, Dimension, PureState, momentum_state, position_state
from .qudit.serialization import state_to_dict
from .uncertainty import gini_report_pure, gxp_of_amplitudes, max_gini

logger = logging.getLogger("giniqudit.search")


def sample_haar_state(dim: Dimension, rng: np.random.Generator) -> PureState:
    """d 个独立标准复高斯振幅归一化后即为 Haar 随机纯态"""
    z = rng.standard_normal(dim.d) + 1j * rng.standard_normal(dim.d)
    return PureState(z / np.linalg.norm(z), dim)


def sample_mixed_state(dim: Dimension, rank: int, rng: np.random.Generator) -> DensityMatrix:
    """
    秩为 rank 的随机密度矩阵（纯化后求偏迹诱导的测度）。

    ψ 为 d×rank 复高斯矩阵，ρ = ψψ† / tr(ψψ†)。
    """
    if not 1 <= rank <= dim.d:
        raise ParameterError(f"rank 必须在 1…{dim.d} 之间: {rank}")
    psi = rng.standard_normal((dim.d, rank)) + 1j * rng.standard_normal((dim.d, rank))
    psi = psi / np.linalg.norm(psi)
    return DensityMatrix(psi @ psi.conj().T, dim)


def eta_tilde(dim: Dimension) -> float:
    """η̃_d = (d−1)/(d+1) · √d/(1+√d)"""
    root = math.sqrt(dim.d)
    return max_gini(dim) * root / (1.0 + root)


def special_gxp(dim: Dimension) -> float:
    """special_state 的 G_XP 闭式 (d−1)/(d+1) · (1 + 1/(1+√d))"""
    return max_gini(dim) * (1.0 + 1.0 / (1.0 + math.sqrt(dim.d)))


def special_state(dim: Dimension, a: int = 0) -> PureState:
    """
    √(√d/(2√d+2)) · (|X;0⟩ + |P;a⟩)

    前置因子吸收了重叠 ⟨X;0|P;a⟩ = 1/√d，结果已归一化。
    """
    root = math.sqrt(dim.d)
    prefactor = math.sqrt(root / (2.0 * root + 2.0))
    vector = position_state(dim, 0).amplitudes + momentum_state(dim, a).amplitudes
    return PureState(prefactor * vector, dim)


GAUSSIAN_PERIODS = 3


def gaussian_state(dim: Dimension) -> PureState:
    """
    周期化离散高斯 ψ(r) ∝ Σ_k exp(−π(r + kd)²/d)，r 取对称代表 −(d−1)/2…(d−1)/2。

    宽度 √(d/π) 使它成为 DFT 的本征向量，P_X 与 P_P 相同。
    """
    d = dim.d
    r = np.arange(d)
    r = np.where(r <= (d - 1) // 2, r, r - d).astype(float)
    shifts = np.arange(-GAUSSIAN_PERIODS, GAUSSIAN_PERIODS + 1) * d
    psi = np.exp(-math.pi * (r[:, None] + shifts[None, :]) ** 2 / d).sum(axis=1)
    return PureState((psi / np.linalg.norm(psi)).astype(complex), dim)


def gxp_of_state(state: PureState) -> float:
    """搜索目标函数 G_XP，走 FFT 路径"""
    return gxp_of_amplitudes(state.amplitudes)


@dataclass
class RefinementTrace:
    """模式搜索过程记录"""
    accepted: List[float] = field(default_factory=list)  # 依次接受的 G_XP，严格递增
    step_halvings: int = 0
    evaluations: int = 0
    final_step: float = 0.0


def _to_real(amplitudes: np.ndarray) -> np.ndarray:
    return np.concatenate([amplitudes.real, amplitudes.imag])


def _to_complex(x: np.ndarray, d: int) -> np.ndarray:
    return x[:d] + 1j * x[d:]


def local_refine(
    start: PureState,
    cfg: SearchConfig,
    trace: bool = False,
) -> Union[PureState, Tuple[PureState, RefinementTrace]]:
    """
    单位球面上的机会式坐标模式搜索。

    沿 2d 个实坐标（实部、虚部）做 ±step 扰动并重新归一化，G_XP 严格增大即接受；
    整轮无改进则步长减半，步长低于 step_min 或求值次数达到上限时停止。
    没有接受任何移动时原样返回 start。

    Args:
        start: 起点
        cfg: 搜索配置（step_init, step_min, max_evaluations）
        trace: 是否同时返回 RefinementTrace
    """
    d = start.d
    x = _to_real(np.asarray(start.amplitudes))
    best = gxp_of_amplitudes(start.amplitudes)
    record = RefinementTrace(accepted=[best], evaluations=1)

    step = cfg.step_init
    moved = False
    while step >= cfg.step_min and record.evaluations < cfg.max_evaluations:
        improved = False
        for i in range(2 * d):
            for sign in (1.0, -1.0):
                candidate = x.copy()
                candidate[i] += sign * step
                norm = float(np.linalg.norm(candidate))
                if norm == 0.0:
                    continue
                candidate /= norm
                value = gxp_of_amplitudes(_to_complex(candidate, d))
                record.evaluations += 1
                if value > best:
                    x, best = candidate, value
                    record.accepted.append(value)
                    improved = moved = True
                    break
            if record.evaluations >= cfg.max_evaluations:
                logger.debug("refinement hit evaluation cap %d", cfg.max_evaluations)
                break
        if not improved:
            step /= 2.0
            record.step_halvings += 1

    record.final_step = step
    result = PureState(_to_complex(x, d), start.dim) if moved else start
    logger.debug(
        "refined d=%d: g_xp %.12g -> %.12g after %d evaluations",
        d, record.accepted[0], best, record.evaluations,
    )
    if trace:
        return result, record
    return result


@dataclass(frozen=True)
class EtaEstimate:
    """η_d 的数值估计"""
    d: Dimension
    sup_gxp_estimate: float
    eta_hat: float
    eta_tilde: float
    n_samples: int
    refined: bool
    best_state: PureState
    seed: int
    random_max: float  # 仅 Haar 样本的最大 G_XP
    n_refined: int = 0

    @property
    def delta_gap(self) -> float:
        """η̂_d − η̃_d"""
        return self.eta_hat - self.eta_tilde

    def to_dict(self) -> Dict[str, Any]:
        return {
            "d": self.d.d,
            "sup_gxp_estimate": self.sup_gxp_estimate,
            "eta_hat": self.eta_hat,
            "eta_tilde": self.eta_tilde,
            "delta_gap": self.delta_gap,
            "n_samples": self.n_samples,
            "refined": self.refined,
            "seed": self.seed,
            "random_max": self.random_max,
            "n_refined": self.n_refined,
            "best_state": state_to_dict(self.best_state),
        }


def sample_pool(dim: Dimension, n: int, seed: int, threads: int = 1) -> List[PureState]:
    """第 i 个样本使用随机流 (seed, i)，因此前 n 个样本与 n 的取值无关"""
    return map_ordered(lambda i: sample_haar_state(dim, derive_rng(seed, i)), range(n), threads)


def refinement_starts(values: List[float], k: int) -> List[int]:
    """到达时位于前 k 名的候选下标：之前严格更大的值少于 k 个"""
    starts: List[int] = []
    leaders: List[float] = []  # 目前为止最大的 k 个值，降序
    for i, value in enumerate(values):
        if sum(1 for v in leaders if v > value) < k:
            starts.append(i)
        leaders = sorted(leaders + [value], reverse=True)[:k]
    return starts


def estimate_eta(dim: Dimension, cfg: Optional[SearchConfig] = None, threads: int = 1) -> EtaEstimate:
    """
    估计 sup G_XP 与 η̂_d = 2(d−1)/(d+1) − sup G_XP。

    候选池 = special_state(a=0) + gaussian_state + n_random 个 Haar 样本，按此顺序排列。
    refine 时候选 i 成为细化起点，当且仅当它之前 G_XP 严格更大的候选少于 n_restarts 个；
    起点集合随 n_random 与 n_restarts 单调增大，因此 η̂_d 不会随二者增大而变大。
    固定种子下结果逐位可复现。
    """
    cfg = cfg or SearchConfig()
    cfg.validate()

    samples = sample_pool(dim, cfg.n_random, cfg.seed, threads)
    fixed = [special_state(dim), gaussian_state(dim)]
    pool = fixed + samples
    values = [gxp_of_state(s) for s in pool]
    random_max = max(values[len(fixed):])

    best_index = int(np.argmax(values))
    best_state, best_value = pool[best_index], values[best_index]

    if cfg.refine and cfg.n_restarts > 0:
        starts = refinement_starts(values, cfg.n_restarts)
        refined = map_ordered(lambda i: local_refine(pool[i], cfg), starts, threads)
        for state in refined:
            value = gxp_of_state(state)
            if value > best_value:
                best_state, best_value = state, value
    else:
        starts = []

    estimate = EtaEstimate(
        d=dim,
        sup_gxp_estimate=best_value,
        eta_hat=2.0 * max_gini(dim) - best_value,
        eta_tilde=eta_tilde(dim),
        n_samples=cfg.n_random,
        refined=cfg.refine,
        best_state=best_state,
        seed=cfg.seed,
        random_max=random_max,
        n_refined=len(starts),
    )
    logger.debug(
        "d=%d eta_hat=%.12g eta_tilde=%.12g random_max=%.12g",
        dim.d, estimate.eta_hat, estimate.eta_tilde, random_max,
    )
    return estimate


def find_min_uncertainty_state(
    dim: Dimension,
    cfg: Optional[SearchConfig] = None,
    threads: int = 1,
) -> Tuple[PureState, float]:
    """
    最小 Gini 不确定态 |g⟩ 及其 Δ（总是开启细化）。

    全局相位与位移的规范自由度不固定，返回任一代表元。
    """
    cfg = replace(cfg or SearchConfig(), refine=True)
    estimate = estimate_eta(dim, cfg, threads)
    return estimate.best_state, gini_report_pure(estimate.best_state).delta
