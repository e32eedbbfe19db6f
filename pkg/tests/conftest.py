"""
gini-qudit 测试共享 fixtures

为所有测试提供统一的 fixtures 和测试工具。
"""

import logging
import shutil
import tempfile
from pathlib import Path
from typing import Callable

import numpy as np
import pytest
from click.testing import CliRunner

from giniqudit import schema
from giniqudit.logging import LOGGER_NAME, GiniQuditLogger
from giniqudit.parallel import THREADS_ENV_VAR
from giniqudit.qudit.core import DensityMatrix, Dimension, PureState
from giniqudit.qudit.serialization import state_to_dict, vector_to_pairs, write_json_file
from giniqudit.reference import example_state_d3, reference_fiducial
from giniqudit.search import sample_haar_state, sample_mixed_state


# =============================================================================
# 环境隔离
# =============================================================================

@pytest.fixture(autouse=True)
def isolated_environment(monkeypatch, tmp_path):
    """屏蔽全局配置文件与线程数环境变量，并在每个测试后重置日志单例"""
    monkeypatch.setattr(schema, "GLOBAL_CONFIG_PATH", tmp_path / "no-global-config.json")
    monkeypatch.delenv(THREADS_ENV_VAR, raising=False)
    yield
    logger = logging.getLogger(LOGGER_NAME)
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()
    GiniQuditLogger._instance = None
    GiniQuditLogger._config = None


# =============================================================================
# CLI Fixtures
# =============================================================================

@pytest.fixture
def runner():
    """Click CLI 测试运行器"""
    return CliRunner()


@pytest.fixture
def isolated_filesystem(runner):
    """隔离的文件系统"""
    with runner.isolated_filesystem() as fs:
        yield Path(fs)


@pytest.fixture
def temp_dir():
    """临时目录 fixture"""
    tmp = Path(tempfile.mkdtemp())
    yield tmp
    shutil.rmtree(tmp, ignore_errors=True)


# =============================================================================
# Factory Fixtures
# =============================================================================

@pytest.fixture
def rng():
    """固定种子的随机数发生器"""
    return np.random.default_rng(20240611)


@pytest.fixture
def dim_factory() -> Callable[[int], Dimension]:
    """维数工厂"""
    return Dimension


@pytest.fixture
def random_state_factory(rng) -> Callable[[int], PureState]:
    """Haar 随机纯态工厂"""
    def _factory(d: int) -> PureState:
        return sample_haar_state(Dimension(d), rng)

    return _factory


@pytest.fixture
def random_density_factory(rng) -> Callable[..., DensityMatrix]:
    """随机混合态工厂，默认满秩"""
    def _factory(d: int, rank: int = 0) -> DensityMatrix:
        return sample_mixed_state(Dimension(d), rank or d, rng)

    return _factory


@pytest.fixture
def reference_inputs(temp_dir):
    """
    d = 3 的展开输入文件：

    - fiducial.json: 发表的最小不确定态（分量顺序已对齐）
    - state.json: 未归一化的示例向量
    """
    fiducial_path = write_json_file(
        temp_dir / "fiducial.json",
        state_to_dict(reference_fiducial(3, aligned=True)),
    )
    state_path = write_json_file(
        temp_dir / "state.json",
        {"d": 3, "amplitudes": vector_to_pairs(example_state_d3())},
    )
    return fiducial_path, state_path
