"""
并行执行与随机流派生

- resolve_threads: 解析工作线程数（参数 > 环境变量 GINI_QUDIT_THREADS > 自动）
- map_ordered: 线程池映射，结果按输入顺序返回
- derive_rng: 以 (seed, *indices) 为键的 Philox 计数器随机流

每个任务的随机流只取决于它的下标，因此输出与线程数和调度顺序无关。
"""

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Sequence, TypeVar

import numpy as np

from .models import ParameterError

logger = logging.getLogger("giniqudit.parallel")

THREADS_ENV_VAR = "GINI_QUDIT_THREADS"

T = TypeVar("T")
R = TypeVar("R")


def _auto_threads() -> int:
    return max(1, os.cpu_count() or 1)


def resolve_threads(requested: Optional[int] = None, configured: int = 0) -> int:
    """
    解析工作线程数：参数 > 环境变量 > 配置文件 > 自动。

    Args:
        requested: 显式指定的线程数；0 表示自动
        configured: 配置文件中的线程数，环境变量未设置时使用

    Returns:
        正整数线程数
    """
    if requested is None:
        raw = os.environ.get(THREADS_ENV_VAR, "").strip()
        if not raw:
            requested = configured
        else:
            try:
                requested = int(raw)
            except ValueError:
                raise ParameterError(f"{THREADS_ENV_VAR} 必须是整数，得到 {raw!r}")

    if requested < 0:
        raise ParameterError(f"线程数不能为负: {requested}")
    if requested == 0:
        return _auto_threads()
    return requested


def map_ordered(fn: Callable[[T], R], items: Sequence[T], threads: int = 1) -> List[R]:
    """
    并行执行 fn(item)，按输入顺序返回结果。

    threads <= 1 或只有一个元素时直接串行执行。任务中的异常原样抛出。
    """
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]

    workers = min(threads, len(items))
    logger.debug("dispatching %d tasks to %d workers", len(items), workers)
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(fn, items))


def derive_rng(seed: int, *indices: int) -> np.random.Generator:
    """
    由 (seed, *indices) 派生独立的 64 位计数器随机流。

    相同的键总是得到逐位相同的序列。
    """
    if seed < 0:
        raise ParameterError(f"seed 不能为负: {seed}")
    if any(index < 0 for index in indices):
        raise ParameterError(f"随机流下标不能为负: {indices}")
    sequence = np.random.SeedSequence([int(seed), *(int(i) for i in indices)])
    return np.random.Generator(np.random.Philox(sequence))
