"""
并行执行测试

测试线程数解析、有序映射与随机流派生。
"""

import threading

import numpy as np
import pytest

from giniqudit.models import ParameterError
from giniqudit.parallel import THREADS_ENV_VAR, derive_rng, map_ordered, resolve_threads


class TestResolveThreads:
    """线程数解析：参数 > 环境变量 > 配置 > 自动"""

    def test_explicit_value(self, monkeypatch):
        """显式参数优先于环境变量"""
        monkeypatch.setenv(THREADS_ENV_VAR, "8")
        assert resolve_threads(3) == 3

    def test_environment_variable(self, monkeypatch):
        """未给参数时读取环境变量"""
        monkeypatch.setenv(THREADS_ENV_VAR, "6")
        assert resolve_threads(None, configured=2) == 6

    def test_configured_value(self):
        """环境变量未设置时使用配置值"""
        assert resolve_threads(None, configured=2) == 2

    def test_zero_means_auto(self):
        """0 表示自动，至少为 1"""
        assert resolve_threads(0) >= 1
        assert resolve_threads() >= 1

    @pytest.mark.boundary
    def test_negative_rejected(self):
        """负数被拒绝"""
        with pytest.raises(ParameterError):
            resolve_threads(-1)

    def test_invalid_environment(self, monkeypatch):
        """环境变量不是整数"""
        monkeypatch.setenv(THREADS_ENV_VAR, "many")
        with pytest.raises(ParameterError):
            resolve_threads()


class TestMapOrdered:
    """有序并行映射"""

    def test_serial(self):
        """threads=1 时串行"""
        assert map_ordered(lambda x: x * x, [1, 2, 3]) == [1, 4, 9]

    def test_parallel_preserves_order(self):
        """多线程时结果按输入顺序返回"""
        assert map_ordered(lambda x: -x, range(50), threads=8) == [-x for x in range(50)]

    def test_uses_worker_threads(self):
        """多线程时在工作线程中执行"""
        names = map_ordered(lambda _: threading.current_thread().name, range(4), threads=2)
        assert any(name != threading.main_thread().name for name in names)

    def test_exception_propagates(self):
        """任务异常原样抛出"""
        def boom(x):
            if x == 3:
                raise ValueError("boom")
            return x

        with pytest.raises(ValueError, match="boom"):
            map_ordered(boom, range(5), threads=3)

    def test_empty(self):
        """空输入"""
        assert map_ordered(lambda x: x, [], threads=4) == []


class TestDeriveRng:
    """随机流派生"""

    def test_same_key_same_stream(self):
        """相同的键得到逐位相同的序列"""
        assert np.array_equal(derive_rng(7, 1, 2).random(10), derive_rng(7, 1, 2).random(10))

    def test_different_index_different_stream(self):
        """不同下标的流互不相同"""
        assert not np.array_equal(derive_rng(7, 1).random(10), derive_rng(7, 2).random(10))

    def test_different_seed_different_stream(self):
        """不同种子的流互不相同"""
        assert not np.array_equal(derive_rng(1, 0).random(10), derive_rng(2, 0).random(10))

    @pytest.mark.boundary
    def test_negative_rejected(self):
        """负的种子或下标被拒绝"""
        with pytest.raises(ParameterError):
            derive_rng(-1)
        with pytest.raises(ParameterError):
            derive_rng(0, -5)
