"""
测试 experiments.py 命令主体、CSV/JSON 输出与不变量检查
"""

import csv
import json

import pytest

from giniqudit.experiments import (
    CheckRecorder,
    InvariantViolation,
    format_number,
    reference_comparison,
    run_entropy_compare,
    run_eta_sweep,
    run_expand,
    run_find_g,
    run_gxp_histogram,
    run_noise,
    run_verify,
    write_csv,
)
from giniqudit.manifest import ManifestWriter, verify_outputs
from giniqudit.models import ParameterError, SearchConfig, SweepConfig
from giniqudit.qudit.core import Dimension, DimensionError
from giniqudit.qudit.serialization import SerializationError, state_to_dict, write_json_file
from giniqudit.reference import reference_fiducial
from giniqudit.search import sample_haar_state
from giniqudit.parallel import derive_rng
from giniqudit.uncertainty import gini_report_pure

FAST_SEARCH = SearchConfig(n_random=20, n_restarts=1, step_min=1e-3, max_evaluations=2_000, seed=3)


def read_rows(path):
    with open(path, newline="", encoding="utf-8") as handle:
        return list(csv.reader(handle))


class TestHelpers:
    """测试格式化与检查记录"""

    def test_format_number(self):
        """整数原样，浮点 17 位有效数字"""
        assert format_number(3) == "3"
        assert format_number(0.1) == "0.10000000000000001"
        assert format_number(True) == "true"
        assert format_number("max") == "max"

    def test_write_csv_line_endings(self, temp_dir):
        """逗号分隔、\\n 换行、带表头"""
        path = write_csv(temp_dir / "x.csv", ("a", "b"), [(1, 0.5)])
        assert path.read_bytes() == b"a,b\n1,0.5\n"

    def test_recorder(self):
        """通过的检查按名记录一次，失败时抛出"""
        recorder = CheckRecorder()
        recorder.require("x", True)
        recorder.require("x", True)
        assert recorder.passed == ["x"]
        with pytest.raises(InvariantViolation) as excinfo:
            recorder.require("y", False, "detail")
        assert excinfo.value.check == "y"
        assert "detail" in str(excinfo.value)


class TestGxpHistogram:
    """测试 gxp-hist"""

    def test_rows_and_summary(self, temp_dir):
        """n 行数据加一行 max"""
        result = run_gxp_histogram(5, 12, 0, temp_dir / "hist.csv")
        rows = read_rows(result.outputs[0])
        assert rows[0] == ["index", "g_xp"]
        assert len(rows) == 1 + 12 + 1
        assert rows[-1][0] == "max"
        assert float(rows[-1][1]) == max(float(r[1]) for r in rows[1:-1])
        assert result.manifest_path.exists()
        assert "gini_range" in result.checks

    def test_single_sample(self, temp_dir):
        """n = 1 时唯一的行等于该态的 G_XP"""
        result = run_gxp_histogram(3, 1, 8, temp_dir / "one.csv")
        rows = read_rows(result.outputs[0])
        expected = gini_report_pure(sample_haar_state(Dimension(3), derive_rng(8, 0))).g_xp
        assert float(rows[1][1]) == expected

    def test_deterministic(self, temp_dir):
        """固定种子两次运行文件逐字节相同，与线程数无关"""
        a = run_gxp_histogram(7, 30, 5, temp_dir / "a.csv", threads=1)
        b = run_gxp_histogram(7, 30, 5, temp_dir / "b.csv", threads=4)
        assert a.outputs[0].read_bytes() == b.outputs[0].read_bytes()

    def test_manifest_valid(self, temp_dir):
        """清单中的校验和与输出一致"""
        result = run_gxp_histogram(3, 4, 0, temp_dir / "hist.csv")
        manifest = ManifestWriter().load(result.manifest_path)
        assert manifest.command == "gxp-hist"
        assert manifest.seed == 0
        assert verify_outputs(manifest) == []

    @pytest.mark.boundary
    def test_invalid(self, temp_dir):
        """非法参数"""
        with pytest.raises(ParameterError):
            run_gxp_histogram(3, 0, 0, temp_dir / "x.csv")
        with pytest.raises(DimensionError):
            run_gxp_histogram(4, 5, 0, temp_dir / "x.csv")


class TestEtaSweep:
    """测试 eta-sweep"""

    def test_rows(self, temp_dir):
        """每个奇数 d 一行，η̂ ≤ η̃"""
        result = run_eta_sweep(SweepConfig(3, 9), FAST_SEARCH, temp_dir / "sweep.csv", threads=2)
        rows = read_rows(result.outputs[0])
        assert rows[0] == ["d", "n_samples", "sup_gxp", "eta_hat", "eta_tilde", "delta_gap", "seed"]
        assert [int(r[0]) for r in rows[1:]] == [3, 5, 7, 9]
        for row in rows[1:]:
            assert float(row[3]) <= float(row[4]) + 1e-12
            assert int(row[6]) == FAST_SEARCH.seed
        assert set(result.checks) >= {"eta_nonnegative", "eta_below_tilde"}

    def test_invalid_range(self, temp_dir):
        """非法扫描范围"""
        with pytest.raises(ParameterError):
            run_eta_sweep(SweepConfig(9, 3), FAST_SEARCH, temp_dir / "x.csv")


class TestFindG:
    """测试 find-g"""

    def test_payload(self, temp_dir):
        """JSON 包含态、Gini 报告、熵报告、族报告与参考比较"""
        result = run_find_g(3, FAST_SEARCH, temp_dir / "g.json")
        data = json.loads(result.outputs[0].read_text(encoding="utf-8"))
        assert data["d"] == 3
        assert data["state"]["d"] == 3
        assert data["gini"]["delta"] <= data["eta_tilde"] + 1e-12
        assert data["family"]["spread"] < 1e-10
        assert data["entropy"]["excess"] >= -1e-10
        assert data["reference"]["reference_delta"] == pytest.approx(
            gini_report_pure(reference_fiducial(3)).delta
        )
        assert "family_invariance" in result.checks

    def test_no_reference_for_d9(self, temp_dir):
        """d=9 没有参考态"""
        result = run_find_g(9, FAST_SEARCH, temp_dir / "g9.json")
        assert json.loads(result.outputs[0].read_text(encoding="utf-8"))["reference"] is None

    def test_reference_comparison(self):
        """参考态自身与自身比较"""
        g = reference_fiducial(5)
        delta = gini_report_pure(g).delta
        comparison = reference_comparison(g, delta)
        assert comparison["dominates"] is True
        assert comparison["difference"] == pytest.approx(0.0, abs=1e-15)


class TestExpand:
    """测试 expand"""

    def test_payload(self, temp_dir, reference_inputs):
        """系数、d² 个分量与残差"""
        fiducial_path, state_path = reference_inputs
        result = run_expand(3, fiducial_path, state_path, temp_dir / "expand.json")
        data = json.loads(result.outputs[0].read_text(encoding="utf-8"))
        assert len(data["components"]) == 9
        assert data["residual"] < 1e-10
        assert data["identity_resolution_defect"] < 1e-10
        assert data["coefficients"]["d"] == 3
        assert {tuple(c["label"]) for c in data["components"]} == {
            (a, b) for a in (-1, 0, 1) for b in (-1, 0, 1)
        }
        assert result.checks == ["identity_resolution", "reconstruction"]

    def test_fiducial_origin_coefficient(self, temp_dir, reference_inputs):
        """state = fiducial 时 s_{0,0} = 1/3"""
        fiducial_path, _ = reference_inputs
        result = run_expand(3, fiducial_path, fiducial_path, temp_dir / "self.json")
        data = json.loads(result.outputs[0].read_text(encoding="utf-8"))
        re, im = data["coefficients"]["coeffs"][0][0]
        assert re == pytest.approx(1 / 3, abs=1e-12)
        assert im == pytest.approx(0.0, abs=1e-12)

    def test_dimension_mismatch(self, temp_dir, reference_inputs):
        """文件维数与 d 不符"""
        fiducial_path, state_path = reference_inputs
        with pytest.raises(DimensionError):
            run_expand(5, fiducial_path, state_path, temp_dir / "x.json")

    def test_missing_file(self, temp_dir, reference_inputs):
        """输入文件不存在"""
        fiducial_path, _ = reference_inputs
        with pytest.raises(SerializationError):
            run_expand(3, fiducial_path, temp_dir / "absent.json", temp_dir / "x.json")


class TestNoise:
    """测试 noise"""

    def test_reference_example(self, temp_dir, reference_inputs):
        """d=3, ε=0.3, 10 次试验：平均误差 < 0.15 且每行不超过上界"""
        fiducial_path, state_path = reference_inputs
        result = run_noise(3, fiducial_path, state_path, 0.3, 10, 0, temp_dir / "noise.csv")
        rows = read_rows(result.outputs[0])
        assert rows[0] == ["trial", "error_norm"]
        assert len(rows) == 1 + 10 + 1
        assert rows[-1][0] == "average"
        assert float(rows[-1][1]) < 0.15
        assert result.summary["bound"] >= max(float(r[1]) for r in rows[1:-1])

    def test_zero_epsilon(self, temp_dir, reference_inputs):
        """ε = 0 时全为 0"""
        fiducial_path, state_path = reference_inputs
        result = run_noise(3, fiducial_path, state_path, 0.0, 4, 0, temp_dir / "zero.csv")
        assert all(float(r[1]) == 0.0 for r in read_rows(result.outputs[0])[1:])

    def test_matched_seeds_ordering(self, temp_dir, reference_inputs):
        """相同种子 avg(0.3) < avg(0.5)"""
        fiducial_path, state_path = reference_inputs
        small = run_noise(3, fiducial_path, state_path, 0.3, 10, 1, temp_dir / "a.csv")
        large = run_noise(3, fiducial_path, state_path, 0.5, 10, 1, temp_dir / "b.csv")
        assert small.summary["average"] < large.summary["average"]

    def test_negative_epsilon(self, temp_dir, reference_inputs):
        """负 ε"""
        fiducial_path, state_path = reference_inputs
        with pytest.raises(ParameterError):
            run_noise(3, fiducial_path, state_path, -0.3, 10, 0, temp_dir / "x.csv")


class TestEntropyCompare:
    """测试 entropy-compare"""

    def test_rows(self, temp_dir):
        """每行熵超出量非负，d=3 行与 find-g 一致"""
        result = run_entropy_compare(SweepConfig(3, 5), FAST_SEARCH, temp_dir / "entropy.csv")
        rows = read_rows(result.outputs[0])
        assert rows[0] == ["d", "delta", "entropic_excess"]
        assert [int(r[0]) for r in rows[1:]] == [3, 5]
        assert all(float(r[2]) >= -1e-10 for r in rows[1:])

        find_g = run_find_g(3, FAST_SEARCH, temp_dir / "g.json")
        data = json.loads(find_g.outputs[0].read_text(encoding="utf-8"))
        assert float(rows[1][1]) == data["gini"]["delta"]


class TestVerify:
    """测试 verify"""

    def test_all_checks_pass(self):
        """d = 3, 5, 7 上所有结构性检查通过"""
        result = run_verify([3, 5, 7], seed=0, cases=5)
        assert set(result.checks) == {
            "fourier_unitarity",
            "displacement_unitarity",
            "displacement_adjoint",
            "clock_shift_product",
            "identity_resolution",
            "group_law",
            "covariance",
            "displacement_invariance",
            "gini_equivalence",
        }
        assert result.manifest_path is None

    def test_with_report(self, temp_dir):
        """给出 --out 时写 JSON 与清单"""
        result = run_verify([3], seed=1, cases=2, out=temp_dir / "verify.json")
        data = json.loads(result.outputs[0].read_text(encoding="utf-8"))
        assert data["dimensions"] == [3]
        assert result.manifest_path.exists()

    def test_invalid_cases(self):
        """cases < 1"""
        with pytest.raises(ParameterError):
            run_verify([3], seed=0, cases=0)


class TestFiducialFile:
    """测试 fiducial 文件的重新归一化"""

    def test_unnormalized_fiducial_accepted(self, temp_dir, reference_inputs):
        """四位小数的 fiducial 文件按原样写入也能使用"""
        _, state_path = reference_inputs
        raw = state_to_dict(reference_fiducial(3, aligned=True))
        raw["amplitudes"] = [[round(re, 4), round(im, 4)] for re, im in raw["amplitudes"]]
        fiducial_path = write_json_file(temp_dir / "raw.json", raw)
        result = run_expand(3, fiducial_path, state_path, temp_dir / "expand.json")
        assert result.summary["residual"] < 1e-10
