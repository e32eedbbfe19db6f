"""
配置模式验证

提供 .giniquditrc 配置文件的 JSON Schema（draft-07 子集）验证与加载。
"""

import json
import logging
import re
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from .models import GiniQuditConfig
from .qudit.core import GiniQuditError

logger = logging.getLogger("giniqudit.schema")

LOCAL_CONFIG_NAME = ".giniquditrc"
GLOBAL_CONFIG_PATH = Path.home() / ".gini-qudit" / "config.json"


class ConfigError(GiniQuditError):
    """配置文件未通过 schema 校验"""

    def __init__(self, path: Path, errors: List["ValidationError"]):
        self.path = path
        self.errors = errors
        super().__init__(f"{path}: " + "; ".join(str(e) for e in errors))


_POSITIVE_INT = {"type": "integer", "minimum": 1}

GINIQUDITRC_SCHEMA: Dict[str, Any] = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "title": "GiniQuditConfig",
    "description": "gini-qudit configuration file schema",
    "type": "object",
    "properties": {
        "version": {"type": "string", "pattern": r"^\d+\.\d+$"},
        "search": {
            "type": "object",
            "properties": {
                "n_random": _POSITIVE_INT,
                "n_restarts": {"type": "integer", "minimum": 0},
                "refine": {"type": "boolean"},
                "step_init": {"type": "number", "exclusiveMinimum": 0},
                "step_min": {"type": "number", "exclusiveMinimum": 0},
                "seed": {"type": "integer", "minimum": 0},
                "max_evaluations": _POSITIVE_INT,
            },
            "additionalProperties": False,
        },
        "noise": {
            "type": "object",
            "properties": {
                "epsilon": {"type": "number", "minimum": 0},
                "trials": _POSITIVE_INT,
            },
            "additionalProperties": False,
        },
        "sweep": {
            "type": "object",
            "properties": {
                "d_min": {"type": "integer", "minimum": 3},
                "d_max": {"type": "integer", "minimum": 3},
            },
            "additionalProperties": False,
        },
        "output": {
            "type": "object",
            "properties": {"out_dir": {"type": "string"}},
            "additionalProperties": False,
        },
        "parallel": {
            "type": "object",
            "properties": {"threads": {"type": "integer", "minimum": 0}},
            "additionalProperties": False,
        },
        "logging": {
            "type": "object",
            "properties": {
                "level": {
                    "type": "string",
                    "enum": ["debug", "info", "warning", "error", "critical"],
                },
                "console_enabled": {"type": "boolean"},
                "file_enabled": {"type": "boolean"},
                "file_path": {"type": "string"},
                "max_size_mb": {"type": "integer", "minimum": 1, "maximum": 100},
                "backup_count": {"type": "integer", "minimum": 0, "maximum": 10},
                "json_format": {"type": "boolean"},
            },
            "additionalProperties": False,
        },
    },
    "additionalProperties": False,
}


class ValidationError:
    """验证错误"""
    def __init__(self, path: str, message: str):
        self.path = path
        self.message = message

    def __str__(self) -> str:
        return f"{self.path}: {self.message}"


def _matches(value: Any, type_name: str) -> bool:
    if type_name == "null":
        return value is None
    if type_name == "string":
        return isinstance(value, str)
    if type_name == "boolean":
        return isinstance(value, bool)
    if type_name == "integer":
        return isinstance(value, int) and not isinstance(value, bool)
    if type_name == "number":
        return isinstance(value, (int, float)) and not isinstance(value, bool)
    if type_name == "object":
        return isinstance(value, dict)
    if type_name == "array":
        return isinstance(value, list)
    return False


def validate_type(value: Any, expected_type: Any, path: str) -> List[ValidationError]:
    """验证值类型，expected_type 可以是类型名或类型名列表"""
    names = expected_type if isinstance(expected_type, list) else [expected_type]
    if any(_matches(value, name) for name in names):
        return []
    expected = names[0] if len(names) == 1 else f"one of {names}"
    return [ValidationError(path, f"expected {expected}, got {type(value).__name__}")]


def validate_schema(data: Any, schema: Dict[str, Any], path: str = "") -> List[ValidationError]:
    """
    验证数据是否符合 schema。

    Args:
        data: 要验证的数据
        schema: JSON Schema
        path: 当前路径（用于错误消息）

    Returns:
        验证错误列表
    """
    where = path or "root"

    if "type" in schema:
        type_errors = validate_type(data, schema["type"], where)
        if type_errors:
            return type_errors

    errors: List[ValidationError] = []

    if isinstance(data, dict):
        properties = schema.get("properties", {})
        for key, value in data.items():
            key_path = f"{path}.{key}" if path else key
            if key in properties:
                errors.extend(validate_schema(value, properties[key], key_path))
            elif schema.get("additionalProperties") is False:
                errors.append(ValidationError(key_path, "unknown property"))

    if isinstance(data, (int, float)) and not isinstance(data, bool):
        if "minimum" in schema and data < schema["minimum"]:
            errors.append(ValidationError(where, f"must be >= {schema['minimum']}"))
        if "maximum" in schema and data > schema["maximum"]:
            errors.append(ValidationError(where, f"must be <= {schema['maximum']}"))
        if "exclusiveMinimum" in schema and data <= schema["exclusiveMinimum"]:
            errors.append(ValidationError(where, f"must be > {schema['exclusiveMinimum']}"))

    if isinstance(data, str) and "pattern" in schema:
        if not re.match(schema["pattern"], data):
            errors.append(ValidationError(where, f"must match {schema['pattern']}"))

    if "enum" in schema and data not in schema["enum"]:
        errors.append(ValidationError(where, f"must be one of {schema['enum']}"))

    return errors


def validate_config(config: Dict[str, Any]) -> Tuple[bool, List[ValidationError]]:
    """
    验证配置字典。

    Returns:
        (是否有效, 错误列表)
    """
    errors = validate_schema(config, GINIQUDITRC_SCHEMA)
    return len(errors) == 0, errors


def validate_config_file(path: Path) -> Tuple[bool, List[ValidationError]]:
    """验证配置文件"""
    if not path.exists():
        return False, [ValidationError("file", f"config file not found: {path}")]

    try:
        config = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        return False, [ValidationError("file", f"invalid JSON: {e}")]

    return validate_config(config)


def format_validation_errors(errors: List[ValidationError]) -> str:
    """格式化验证错误为用户友好的消息"""
    if not errors:
        return "✓ 配置有效"

    lines = ["✗ 配置验证失败:"]
    for error in errors:
        lines.append(f"  • {error}")
    return "\n".join(lines)


def find_config_file(cwd: Optional[Path] = None) -> Optional[Path]:
    """查找配置文件：项目目录 > 全局目录"""
    local_config = (cwd or Path.cwd()) / LOCAL_CONFIG_NAME
    if local_config.exists():
        return local_config
    if GLOBAL_CONFIG_PATH.exists():
        return GLOBAL_CONFIG_PATH
    return None


def load_config(path: Optional[Path] = None) -> GiniQuditConfig:
    """
    加载配置。

    文件不存在或不是合法 JSON 时返回默认配置；
    JSON 合法但不符合 schema 时抛出 ConfigError。
    """
    path = path or find_config_file()
    if path is None:
        return GiniQuditConfig()

    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError:
        logger.warning("config file %s is not valid JSON, using defaults", path)
        return GiniQuditConfig()

    valid, errors = validate_config(data)
    if not valid:
        raise ConfigError(path, errors)

    logger.debug("loaded config from %s", path)
    return GiniQuditConfig.from_dict(data)
