"""
实验命令主体

每个 run_* 对应一个 CLI 子命令：计算、执行不变量检查、写 CSV/JSON 输出，
再在输出旁写入运行清单。任何检查失败都抛出 InvariantViolation。

CSV：逗号分隔、\\n 换行、必有表头，浮点数 17 位有效数字。
"""

import csv
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence

import numpy as np

from .logging import get_logger
from .manifest import ManifestWriter, RunManifest, manifest_path_for
from .models import ParameterError, SearchConfig, SweepConfig
from .parallel import derive_rng, map_ordered
from .qudit.core import (
    Dimension,
    DimensionError,
    GiniQuditError,
    ProbDist,
    PureState,
    fourier_matrix,
)
from .qudit.phase_space import (
    CoherentFamily,
    GroupElement,
    PhasePoint,
    all_points,
    clock_matrix,
    component_vectors,
    compose,
    covariance_phase,
    displacement_matrix,
    expand,
    identity_resolution_defect,
    noise_experiment,
    reconstruct,
    shift_matrix,
)
from .qudit.serialization import (
    coeffs_to_dict,
    read_json_file,
    state_from_dict,
    state_to_dict,
    vector_from_dict,
    vector_to_pairs,
    write_json_file,
)
from .reference import MIN_UNCERTAINTY_FIDUCIALS, reference_fiducial
from .search import (
    eta_tilde,
    estimate_eta,
    find_min_uncertainty_state,
    sample_haar_state,
    sample_pool,
)
from .uncertainty import (
    entropy_report_pure,
    family_report,
    gini_pairwise,
    gini_report_pure,
    gini_sorted,
    max_gini,
)

logger = logging.getLogger("giniqudit.experiments")

# 结构性检查的数值容差
EXACT_TOLERANCE = 1e-12
RECONSTRUCTION_TOLERANCE = 1e-10
ENTROPY_TOLERANCE = 1e-10
# 与发表态比较 Δ 时允许的余量
REFERENCE_MARGIN = 1e-6


class InvariantViolation(GiniQuditError):
    """运行时不变量检查失败"""

    def __init__(self, check: str, detail: str = ""):
        self.check = check
        self.detail = detail
        super().__init__(f"{check}: {detail}" if detail else check)


class CheckRecorder:
    """记录通过的检查；失败立即抛出 InvariantViolation"""

    def __init__(self):
        self.passed: List[str] = []

    def require(self, check: str, condition: bool, detail: str = "") -> None:
        if not condition:
            logger.debug("check %s failed: %s", check, detail)
            raise InvariantViolation(check, detail)
        if check not in self.passed:
            self.passed.append(check)


@dataclass
class RunResult:
    """一次命令运行的结果"""
    command: str
    outputs: List[Path]
    manifest_path: Optional[Path]
    checks: List[str]
    summary: Dict[str, Any] = field(default_factory=dict)


def format_number(value: Any) -> str:
    """CSV 数值格式：整数原样，浮点 17 位有效数字"""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_number(v) for v in row])
    return path


def _finish(
    command: str,
    outputs: List[Path],
    config: Dict[str, Any],
    seed: Optional[int],
    recorder: CheckRecorder,
    summary: Dict[str, Any],
) -> RunResult:
    manifest = RunManifest(
        command=command,
        config=config,
        seed=seed,
        output_paths=[str(p) for p in outputs],
        checks=list(recorder.passed),
    )
    manifest_path = ManifestWriter().save(manifest, manifest_path_for(outputs[0]))
    get_logger().run_log(f"{command} finished, wrote {', '.join(str(p) for p in outputs)}", command, seed=seed)
    return RunResult(
        command=command,
        outputs=outputs,
        manifest_path=manifest_path,
        checks=list(recorder.passed),
        summary=summary,
    )


def _check_report(recorder: CheckRecorder, report, dim: Dimension) -> None:
    upper = max_gini(dim) + EXACT_TOLERANCE
    recorder.require(
        "gini_range",
        -EXACT_TOLERANCE <= report.g_x <= upper and -EXACT_TOLERANCE <= report.g_p <= upper,
        f"d={dim.d} g_x={report.g_x!r} g_p={report.g_p!r}",
    )
    recorder.require(
        "delta_definition",
        abs(report.delta - (2.0 * max_gini(dim) - report.g_x - report.g_p)) <= EXACT_TOLERANCE,
        f"d={dim.d} delta={report.delta!r}",
    )


# ==================== gxp-hist ====================

def run_gxp_histogram(d: int, n_samples: int, seed: int, out: Path, threads: int = 1) -> RunResult:
    """n 个 Haar 随机纯态的 G_XP，行 index,g_xp，末行 max"""
    dim = Dimension(d)
    if n_samples < 1:
        raise ParameterError(f"samples 至少为 1: {n_samples}")
    get_logger().run_log(f"sampling {n_samples} random states", "gxp-hist", d=d, seed=seed)

    recorder = CheckRecorder()
    values = []
    for state in sample_pool(dim, n_samples, seed, threads):
        report = gini_report_pure(state)
        _check_report(recorder, report, dim)
        values.append(report.g_xp)

    rows: List[Sequence[Any]] = [(i, v) for i, v in enumerate(values)]
    rows.append(("max", max(values)))
    path = write_csv(out, ("index", "g_xp"), rows)

    return _finish(
        "gxp-hist",
        [path],
        {"d": d, "samples": n_samples},
        seed,
        recorder,
        {"max": max(values), "samples": n_samples},
    )


# ==================== eta-sweep ====================

def _check_estimate(recorder: CheckRecorder, estimate) -> None:
    recorder.require(
        "eta_nonnegative",
        estimate.eta_hat >= -EXACT_TOLERANCE,
        f"d={estimate.d.d} eta_hat={estimate.eta_hat!r}",
    )
    recorder.require(
        "eta_below_tilde",
        estimate.eta_hat <= estimate.eta_tilde + EXACT_TOLERANCE,
        f"d={estimate.d.d} eta_hat={estimate.eta_hat!r} eta_tilde={estimate.eta_tilde!r}",
    )


def run_eta_sweep(sweep: SweepConfig, cfg: SearchConfig, out: Path, threads: int = 1) -> RunResult:
    """每个奇数 d 一行：d,n_samples,sup_gxp,eta_hat,eta_tilde,delta_gap,seed"""
    dims = sweep.dimensions()
    cfg.validate()
    get_logger().run_log(f"eta sweep over d={dims[0]}..{dims[-1]}", "eta-sweep", seed=cfg.seed)

    # 扫描在 d 之间并行，单个 d 内串行
    estimates = map_ordered(lambda d: estimate_eta(Dimension(d), cfg, 1), dims, threads)

    recorder = CheckRecorder()
    rows = []
    for estimate in estimates:
        _check_estimate(recorder, estimate)
        rows.append((
            estimate.d.d,
            estimate.n_samples,
            estimate.sup_gxp_estimate,
            estimate.eta_hat,
            estimate.eta_tilde,
            estimate.delta_gap,
            estimate.seed,
        ))
    path = write_csv(
        out,
        ("d", "n_samples", "sup_gxp", "eta_hat", "eta_tilde", "delta_gap", "seed"),
        rows,
    )

    return _finish(
        "eta-sweep",
        [path],
        {"d_min": sweep.d_min, "d_max": sweep.d_max, "search": cfg.to_dict()},
        cfg.seed,
        recorder,
        {"rows": len(rows), "max_abs_gap": max(abs(r[5]) for r in rows)},
    )


# ==================== find-g ====================

def reference_comparison(g: PureState, delta: float) -> Optional[Dict[str, Any]]:
    """d ∈ {3,5,7} 时与发表的最小不确定态比较 Δ"""
    if g.d not in MIN_UNCERTAINTY_FIDUCIALS:
        return None
    reference_delta = gini_report_pure(reference_fiducial(g.d)).delta
    return {
        "reference_delta": reference_delta,
        "difference": delta - reference_delta,
        "dominates": delta <= reference_delta + REFERENCE_MARGIN,
    }


def run_find_g(d: int, cfg: SearchConfig, out: Path, threads: int = 1) -> RunResult:
    """最小 Gini 不确定态、其 GiniReport、相干态族报告与参考态比较（JSON）"""
    dim = Dimension(d)
    get_logger().run_log("searching minimum uncertainty state", "find-g", d=d, seed=cfg.seed)

    g, delta = find_min_uncertainty_state(dim, cfg, threads)
    report = gini_report_pure(g)
    family = family_report(CoherentFamily(g))

    recorder = CheckRecorder()
    _check_report(recorder, report, dim)
    recorder.require(
        "eta_below_tilde",
        delta <= eta_tilde(dim) + EXACT_TOLERANCE,
        f"d={d} delta={delta!r}",
    )
    recorder.require(
        "family_invariance",
        family.spread < RECONSTRUCTION_TOLERANCE,
        f"d={d} spread={family.spread!r}",
    )

    reference = reference_comparison(g, delta)
    payload = {
        "d": d,
        "state": state_to_dict(g),
        "gini": report.to_dict(),
        "entropy": entropy_report_pure(g).to_dict(),
        "eta_tilde": eta_tilde(dim),
        "family": family.to_dict(),
        "reference": reference,
        "search": cfg.to_dict(),
    }
    path = write_json_file(out, payload)

    summary = {"delta": delta, "eta_tilde": eta_tilde(dim)}
    if reference is not None:
        summary["reference_delta"] = reference["reference_delta"]
    return _finish("find-g", [path], {"d": d, "search": cfg.to_dict()}, cfg.seed, recorder, summary)


# ==================== expand ====================

def _load_family_and_vector(d: int, fiducial_path: Path, state_path: Path):
    dim = Dimension(d)
    fiducial = state_from_dict(read_json_file(fiducial_path), renormalize=True)
    state_dim, vector = vector_from_dict(read_json_file(state_path))
    for name, other in (("fiducial", fiducial.dim), ("state", state_dim)):
        if other.d != dim.d:
            raise DimensionError(f"{name} 的维数 {other.d} 与 --d {dim.d} 不符")
    return CoherentFamily(fiducial), vector


def run_expand(d: int, fiducial_path: Path, state_path: Path, out: Path) -> RunResult:
    """展开系数、d² 个分量向量 s_{α,β}|α,β⟩ 与重构残差（JSON）"""
    get_logger().run_log("expanding state in coherent family", "expand", d=d)
    fam, vector = _load_family_and_vector(d, fiducial_path, state_path)
    dim = fam.dim

    coefficients = expand(fam, vector)
    components = component_vectors(fam, coefficients)
    residual = float(np.max(np.abs(reconstruct(fam, coefficients) - vector)))
    defect = identity_resolution_defect(fam)

    recorder = CheckRecorder()
    recorder.require("identity_resolution", defect < RECONSTRUCTION_TOLERANCE, f"defect={defect!r}")
    recorder.require("reconstruction", residual < RECONSTRUCTION_TOLERANCE, f"residual={residual!r}")

    payload = {
        "d": d,
        "coefficients": coeffs_to_dict(coefficients),
        "components": [
            {
                "alpha": p.alpha,
                "beta": p.beta,
                "label": [dim.to_symmetric(p.alpha), dim.to_symmetric(p.beta)],
                "vector": vector_to_pairs(components[p.alpha, p.beta]),
            }
            for p in all_points(dim)
        ],
        "l1_norm": coefficients.l1_norm(),
        "residual": residual,
        "identity_resolution_defect": defect,
    }
    path = write_json_file(out, payload)
    return _finish(
        "expand",
        [path],
        {"d": d, "fiducial": str(fiducial_path), "state": str(state_path)},
        None,
        recorder,
        {"residual": residual, "l1_norm": coefficients.l1_norm()},
    )


# ==================== noise ====================

def run_noise(
    d: int,
    fiducial_path: Path,
    state_path: Path,
    epsilon: float,
    trials: int,
    seed: int,
    out: Path,
    threads: int = 1,
) -> RunResult:
    """每次试验的误差范数，行 trial,error_norm，末行 average"""
    get_logger().run_log(f"noise experiment epsilon={epsilon} trials={trials}", "noise", d=d, seed=seed)
    fam, vector = _load_family_and_vector(d, fiducial_path, state_path)

    result = noise_experiment(fam, vector, epsilon, trials, seed, threads)

    recorder = CheckRecorder()
    worst = max(result.per_trial)
    recorder.require(
        "noise_bound",
        worst <= result.bound + EXACT_TOLERANCE,
        f"max error {worst!r} > bound {result.bound!r}",
    )

    rows: List[Sequence[Any]] = [(i, v) for i, v in enumerate(result.per_trial)]
    rows.append(("average", result.average))
    path = write_csv(out, ("trial", "error_norm"), rows)

    return _finish(
        "noise",
        [path],
        {
            "d": d,
            "fiducial": str(fiducial_path),
            "state": str(state_path),
            "epsilon": epsilon,
            "trials": trials,
        },
        seed,
        recorder,
        {"average": result.average, "bound": result.bound},
    )


# ==================== entropy-compare ====================

def run_entropy_compare(sweep: SweepConfig, cfg: SearchConfig, out: Path, threads: int = 1) -> RunResult:
    """每个奇数 d：最小 Gini 态的 Δ 与熵不确定性超出量，行 d,delta,entropic_excess"""
    dims = sweep.dimensions()
    get_logger().run_log(f"entropy comparison over d={dims[0]}..{dims[-1]}", "entropy-compare", seed=cfg.seed)

    found = map_ordered(lambda d: find_min_uncertainty_state(Dimension(d), cfg, 1), dims, threads)

    recorder = CheckRecorder()
    rows = []
    for d, (g, delta) in zip(dims, found):
        # |0,0⟩_g 就是 |g⟩ 本身
        excess = entropy_report_pure(g).excess
        recorder.require("entropic_nonnegative", excess >= -ENTROPY_TOLERANCE, f"d={d} excess={excess!r}")
        rows.append((d, delta, excess))
    path = write_csv(out, ("d", "delta", "entropic_excess"), rows)

    return _finish(
        "entropy-compare",
        [path],
        {"d_min": sweep.d_min, "d_max": sweep.d_max, "search": cfg.to_dict()},
        cfg.seed,
        recorder,
        {"rows": len(rows), "min_excess": min(r[2] for r in rows)},
    )


# ==================== verify ====================

def _max_abs(matrix: np.ndarray) -> float:
    return float(np.max(np.abs(matrix)))


def verify_dimension(dim: Dimension, seed: int, cases: int, recorder: CheckRecorder) -> None:
    """单个 d 上的结构性不变量检查"""
    d = dim.d
    identity = np.eye(d)
    f = fourier_matrix(dim)
    recorder.require("fourier_unitarity", _max_abs(f @ f.conj().T - identity) < EXACT_TOLERANCE, f"d={d}")

    half = dim.half
    for p in all_points(dim):
        matrix = displacement_matrix(dim, p)
        recorder.require(
            "displacement_unitarity",
            _max_abs(matrix @ matrix.conj().T - identity) < EXACT_TOLERANCE,
            f"d={d} point=({p.alpha},{p.beta})",
        )
        recorder.require(
            "displacement_adjoint",
            _max_abs(matrix.conj().T - displacement_matrix(dim, p.negated())) < EXACT_TOLERANCE,
            f"d={d} point=({p.alpha},{p.beta})",
        )
        # D(α,β) = Z^α X^β ω^{−2⁻¹αβ}
        phase = dim.omega_powers[dim.reduce(-half * p.alpha * p.beta)]
        product = clock_matrix(dim, p.alpha) @ shift_matrix(dim, p.beta) * phase
        recorder.require(
            "clock_shift_product",
            _max_abs(product - matrix) < EXACT_TOLERANCE,
            f"d={d} point=({p.alpha},{p.beta})",
        )

    rng = derive_rng(seed, d)
    fiducial = sample_haar_state(dim, rng)
    fam = CoherentFamily(fiducial)
    defect = identity_resolution_defect(fam)
    recorder.require("identity_resolution", defect < RECONSTRUCTION_TOLERANCE, f"d={d} defect={defect!r}")
    reference_delta = gini_report_pure(fiducial).delta

    for _ in range(cases):
        a = GroupElement.of(dim, *(int(v) for v in rng.integers(0, d, size=3)))
        b = GroupElement.of(dim, *(int(v) for v in rng.integers(0, d, size=3)))
        recorder.require(
            "group_law",
            _max_abs(compose(a, b).matrix() - a.matrix() @ b.matrix()) < EXACT_TOLERANCE,
            f"d={d}",
        )

        p = PhasePoint(int(rng.integers(d)), int(rng.integers(d)), dim)
        kappa, lam, mu = (int(v) for v in rng.integers(0, d, size=3))
        nu = covariance_phase(p, kappa, lam, mu)
        lhs = GroupElement.of(dim, kappa, lam, mu).matrix() @ fam.member(p).amplitudes
        rhs = dim.omega_powers[nu] * fam.member(p.shifted(kappa, lam)).amplitudes
        recorder.require("covariance", _max_abs(lhs - rhs) < EXACT_TOLERANCE, f"d={d}")

        displaced = gini_report_pure(fam.member(p)).delta
        recorder.require(
            "displacement_invariance",
            abs(displaced - reference_delta) < EXACT_TOLERANCE,
            f"d={d} delta {displaced!r} != {reference_delta!r}",
        )

        probs = ProbDist(rng.dirichlet(np.ones(d)))
        recorder.require(
            "gini_equivalence",
            abs(gini_sorted(probs) - gini_pairwise(probs)) < EXACT_TOLERANCE,
            f"d={d}",
        )


def run_verify(dims: Sequence[int], seed: int, cases: int, out: Optional[Path] = None) -> RunResult:
    """对每个 d 执行结构性检查；第一个失败的检查抛出 InvariantViolation"""
    if cases < 1:
        raise ParameterError(f"cases 至少为 1: {cases}")
    recorder = CheckRecorder()
    for d in dims:
        get_logger().run_log("verifying structural invariants", "verify", d=d, seed=seed)
        verify_dimension(Dimension(d), seed, cases, recorder)

    summary = {"dimensions": list(dims), "checks": len(recorder.passed)}
    if out is None:
        return RunResult("verify", [], None, list(recorder.passed), summary)

    path = write_json_file(out, {"dimensions": list(dims), "seed": seed, "cases": cases, "checks": recorder.passed})
    return _finish("verify", [path], {"dimensions": list(dims), "cases": cases}, seed, recorder, summary)

