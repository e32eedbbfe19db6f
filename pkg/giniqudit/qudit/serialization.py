"""
JSON 序列化

所有格式中复数都写成 [re, im] 对，下标采用 0…d-1 约定：
- PureState:            {"d": d, "amplitudes": [[re, im], ...]}
- DensityMatrix:        {"d": d, "entries": [[[re, im], ...], ...]}（行优先）
- ExpansionCoefficients:{"d": d, "coeffs": [[[re, im], ...], ...]}（行 α，列 β）

浮点数按 Python float 的 repr 输出（最短无损表示）。
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Sequence, Tuple, Union

import numpy as np

from .core import DensityMatrix, Dimension, GiniQuditError, PureState, normalize
from .phase_space import ExpansionCoefficients


class SerializationError(GiniQuditError, ValueError):
    """JSON 负载格式错误"""
    pass


def complex_to_pair(z: complex) -> List[float]:
    return [float(np.real(z)), float(np.imag(z))]


def vector_to_pairs(vector: Sequence[complex]) -> List[List[float]]:
    return [complex_to_pair(z) for z in np.asarray(vector).reshape(-1)]


def matrix_to_pairs(matrix: np.ndarray) -> List[List[List[float]]]:
    return [vector_to_pairs(row) for row in np.asarray(matrix)]


def pairs_to_array(pairs: Any) -> np.ndarray:
    """[re, im] 嵌套列表 → 复数组；最内层必须是长度为 2 的实数对"""
    try:
        array = np.asarray(pairs, dtype=float)
    except (TypeError, ValueError) as e:
        raise SerializationError(f"复数数组格式错误: {e}")
    if array.ndim == 0 or array.shape[-1] != 2:
        raise SerializationError(f"复数必须写成 [re, im]，得到形状 {array.shape}")
    return array[..., 0] + 1j * array[..., 1]


def _require(data: Any, *keys: str) -> None:
    if not isinstance(data, dict):
        raise SerializationError(f"需要 JSON 对象，得到 {type(data).__name__}")
    missing = [k for k in keys if k not in data]
    if missing:
        raise SerializationError(f"缺少字段: {', '.join(missing)}")


def _dimension_of(data: Dict[str, Any]) -> Dimension:
    d = data["d"]
    if isinstance(d, bool) or not isinstance(d, int):
        raise SerializationError(f"字段 d 必须是整数，得到 {d!r}")
    return Dimension(d)


def state_to_dict(state: PureState) -> Dict[str, Any]:
    return {"d": state.d, "amplitudes": vector_to_pairs(state.amplitudes)}


def vector_from_dict(data: Any) -> Tuple[Dimension, np.ndarray]:
    """读取不做归一化的向量"""
    _require(data, "d", "amplitudes")
    dim = _dimension_of(data)
    vector = pairs_to_array(data["amplitudes"])
    if vector.shape != (dim.d,):
        raise SerializationError(f"amplitudes 长度 {vector.shape} 与 d={dim.d} 不符")
    return dim, vector


def state_from_dict(data: Any, renormalize: bool = False) -> PureState:
    """
    解析 PureState。

    Args:
        data: JSON 对象
        renormalize: True 时接受任意非零向量并重新归一化（四位小数的发布数据）
    """
    dim, vector = vector_from_dict(data)
    if renormalize:
        return normalize(vector, dim)
    return PureState(vector, dim)


def density_to_dict(rho: DensityMatrix) -> Dict[str, Any]:
    return {"d": rho.d, "entries": matrix_to_pairs(rho.entries)}


def density_from_dict(data: Any) -> DensityMatrix:
    _require(data, "d", "entries")
    dim = _dimension_of(data)
    return DensityMatrix(pairs_to_array(data["entries"]), dim)


def coeffs_to_dict(c: ExpansionCoefficients) -> Dict[str, Any]:
    return {"d": c.dim.d, "coeffs": matrix_to_pairs(c.coeffs)}


def coeffs_from_dict(data: Any) -> ExpansionCoefficients:
    _require(data, "d", "coeffs")
    dim = _dimension_of(data)
    return ExpansionCoefficients(pairs_to_array(data["coeffs"]), dim)


def read_json_file(path: Union[str, Path]) -> Any:
    path = Path(path)
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise SerializationError(f"文件不存在: {path}")
    except json.JSONDecodeError as e:
        raise SerializationError(f"{path} 不是合法 JSON: {e}")


def write_json_file(path: Union[str, Path], data: Any) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
    return path
