"""
与已发表结果对照的集成测试

覆盖 展开 → JSON 输出 → 分量表比对、搜索 → 参考态比对、大 d 下 η̂ 的上下界。
"""

import json
from dataclasses import replace

import numpy as np
import pytest

from giniqudit.experiments import run_entropy_compare, run_expand, run_find_g, run_noise
from giniqudit.models import SearchConfig, SweepConfig
from giniqudit.qudit.core import Dimension
from giniqudit.qudit.serialization import pairs_to_array
from giniqudit.reference import (
    EXPANSION_COMPONENTS_D3,
    PUBLISHED_PRECISION,
    reference_dimensions,
    reference_fiducial,
)
from giniqudit.search import estimate_eta, gaussian_state, gxp_of_state, local_refine
from giniqudit.uncertainty import gini_report_pure


@pytest.mark.integration
class TestExpansionTable:
    """d = 3 示例态展开与发表的分量表"""

    def test_expand_output_matches_table(self, temp_dir, reference_inputs):
        """expand 输出的 9 个分量与表一致（标签 (α, β) → (−α, β)）"""
        fiducial_path, state_path = reference_inputs
        result = run_expand(3, fiducial_path, state_path, temp_dir / "expand.json")
        data = json.loads(result.outputs[0].read_text(encoding="utf-8"))

        seen = set()
        for component in data["components"]:
            alpha, beta = component["label"]
            key = (-alpha, beta)
            seen.add(key)
            expected = np.array(EXPANSION_COMPONENTS_D3[key], dtype=complex)
            actual = pairs_to_array(component["vector"])
            assert np.max(np.abs(actual - expected)) < PUBLISHED_PRECISION, key
        assert seen == set(EXPANSION_COMPONENTS_D3)

    def test_noise_on_published_example(self, temp_dir, reference_inputs):
        """ε = 0.3 时平均误差范数在 0.05 到 0.2 之间，且不超过界"""
        fiducial_path, state_path = reference_inputs
        result = run_noise(3, fiducial_path, state_path, 0.3, 200, 11, temp_dir / "noise.csv")
        assert 0.05 < result.summary["average"] < 0.2
        assert result.summary["average"] <= result.summary["bound"]


@pytest.mark.integration
@pytest.mark.slow
class TestMinimumUncertaintyStates:
    """搜索得到的最小不确定态与参考态"""

    @pytest.mark.parametrize("d", reference_dimensions())
    def test_refining_reference_never_worse(self, d):
        """从参考态出发细化，Δ 不增"""
        start = reference_fiducial(d)
        refined = local_refine(start, SearchConfig(max_evaluations=20_000))
        assert gxp_of_state(refined) >= gxp_of_state(start)
        assert gini_report_pure(refined).delta <= gini_report_pure(start).delta + 1e-12

    @pytest.mark.parametrize("d", reference_dimensions())
    def test_default_search_dominates_reference(self, d, temp_dir):
        """默认搜索的 Δ 不大于参考态的 Δ"""
        result = run_find_g(d, SearchConfig(), temp_dir / f"g{d}.json")
        data = json.loads(result.outputs[0].read_text(encoding="utf-8"))
        assert data["reference"]["difference"] <= 1e-6
        assert data["reference"]["dominates"]
        assert data["gini"]["delta"] <= data["reference"]["reference_delta"] + 1e-6

    def test_min_state_has_entropic_excess(self, temp_dir):
        """d = 3…31 的最小 Gini 态的熵不确定性超出量都大于 0.01"""
        cfg = SearchConfig(n_random=100, n_restarts=2, max_evaluations=20_000)
        result = run_entropy_compare(SweepConfig(3, 31), cfg, temp_dir / "entropy.csv")
        assert result.summary["min_excess"] > 0.01


@pytest.mark.integration
@pytest.mark.slow
class TestLargeDimensionBounds:
    """大 d 下 η̂_d 的可证明界；η̃ − η̂ 本身只作为观测值输出"""

    @pytest.mark.parametrize("d", [41, 61, 81, 101])
    def test_between_zero_and_tilde(self, d):
        """0 ≤ η̂_d ≤ η̃_d，且不超过离散高斯态的 Δ"""
        dim = Dimension(d)
        cfg = replace(SearchConfig(), n_random=100, n_restarts=1, max_evaluations=5_000)
        estimate = estimate_eta(dim, cfg)
        assert estimate.eta_hat >= -1e-12
        assert estimate.eta_hat <= estimate.eta_tilde + 1e-12
        assert estimate.eta_hat <= gini_report_pure(gaussian_state(dim)).delta + 1e-12
