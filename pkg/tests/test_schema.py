"""
测试 schema.py 配置验证与加载
"""

import json

import pytest

from giniqudit import schema
from giniqudit.logging import LogLevel
from giniqudit.models import GiniQuditConfig
from giniqudit.schema import (
    GINIQUDITRC_SCHEMA,
    LOCAL_CONFIG_NAME,
    ConfigError,
    ValidationError,
    find_config_file,
    format_validation_errors,
    load_config,
    validate_config,
    validate_config_file,
    validate_schema,
)


class TestValidateConfig:
    """测试配置验证"""

    def test_valid_minimal_config(self):
        """测试最小有效配置"""
        is_valid, errors = validate_config({"version": "1.0"})
        assert is_valid
        assert errors == []

    def test_valid_full_config(self):
        """测试完整有效配置"""
        config = {
            "version": "1.0",
            "search": {
                "n_random": 400,
                "n_restarts": 5,
                "refine": True,
                "step_init": 0.1,
                "step_min": 1e-6,
                "seed": 0,
                "max_evaluations": 100000,
            },
            "noise": {"epsilon": 0.3, "trials": 10},
            "sweep": {"d_min": 3, "d_max": 101},
            "output": {"out_dir": "results"},
            "parallel": {"threads": 0},
            "logging": {"level": "info", "json_format": True, "max_size_mb": 5},
        }
        is_valid, errors = validate_config(config)
        assert is_valid, format_validation_errors(errors)

    def test_unknown_property_rejected(self):
        """测试未知属性被拒绝"""
        is_valid, errors = validate_config({"unknown": 1})
        assert not is_valid
        assert any("unknown" in str(e) for e in errors)

    def test_nested_unknown_property(self):
        """测试嵌套未知属性"""
        is_valid, errors = validate_config({"search": {"samples": 10}})
        assert not is_valid
        assert errors[0].path.startswith("search")

    def test_invalid_type_rejected(self):
        """测试类型错误"""
        is_valid, errors = validate_config({"search": {"refine": "yes"}})
        assert not is_valid

    def test_boolean_is_not_integer(self):
        """布尔值不算整数"""
        is_valid, _ = validate_config({"search": {"seed": True}})
        assert not is_valid

    def test_integer_is_number(self):
        """整数可以作为 number"""
        is_valid, _ = validate_config({"noise": {"epsilon": 1}})
        assert is_valid

    @pytest.mark.boundary
    def test_minimum(self):
        """低于最小值"""
        assert not validate_config({"search": {"n_random": 0}})[0]
        assert validate_config({"search": {"n_random": 1}})[0]

    @pytest.mark.boundary
    def test_exclusive_minimum(self):
        """step_init 必须严格大于 0"""
        assert not validate_config({"search": {"step_init": 0}})[0]

    @pytest.mark.boundary
    def test_maximum(self):
        """超过最大值"""
        assert not validate_config({"logging": {"backup_count": 11}})[0]

    def test_enum_validation(self):
        """测试枚举值验证"""
        assert not validate_config({"logging": {"level": "verbose"}})[0]

    def test_version_pattern(self):
        """版本号格式"""
        assert not validate_config({"version": "one"})[0]

    def test_validate_schema_root_type(self):
        """根节点类型错误"""
        errors = validate_schema([], GINIQUDITRC_SCHEMA)
        assert len(errors) == 1


class TestValidateConfigFile:
    """测试配置文件验证"""

    def test_valid_file(self, temp_dir):
        """测试有效文件"""
        path = temp_dir / LOCAL_CONFIG_NAME
        path.write_text(json.dumps({"version": "1.0"}), encoding="utf-8")
        assert validate_config_file(path) == (True, [])

    def test_missing_file(self, temp_dir):
        """测试文件不存在"""
        is_valid, errors = validate_config_file(temp_dir / "missing.json")
        assert not is_valid
        assert errors[0].path == "file"

    def test_invalid_json(self, temp_dir):
        """测试无效 JSON"""
        path = temp_dir / LOCAL_CONFIG_NAME
        path.write_text("{broken", encoding="utf-8")
        is_valid, errors = validate_config_file(path)
        assert not is_valid
        assert "invalid JSON" in str(errors[0])


class TestFormatValidationErrors:
    """测试错误格式化"""

    def test_no_errors(self):
        """无错误"""
        assert format_validation_errors([]) == "✓ 配置有效"

    def test_with_errors(self):
        """有错误"""
        message = format_validation_errors([ValidationError("search.seed", "too small")])
        assert message.startswith("✗ 配置验证失败:")
        assert "search.seed: too small" in message


class TestLoadConfig:
    """测试配置查找与加载"""

    def test_defaults_without_file(self, temp_dir, monkeypatch):
        """无配置文件时返回默认配置"""
        monkeypatch.chdir(temp_dir)
        assert find_config_file() is None
        assert load_config() == GiniQuditConfig()

    def test_local_file_found(self, temp_dir):
        """项目目录下的配置文件"""
        path = temp_dir / LOCAL_CONFIG_NAME
        path.write_text("{}", encoding="utf-8")
        assert find_config_file(temp_dir) == path

    def test_global_file_fallback(self, temp_dir, monkeypatch):
        """项目目录没有配置时使用全局配置"""
        global_path = temp_dir / "global.json"
        global_path.write_text("{}", encoding="utf-8")
        monkeypatch.setattr(schema, "GLOBAL_CONFIG_PATH", global_path)
        assert find_config_file(temp_dir / "elsewhere") == global_path

    def test_load_values(self, temp_dir):
        """加载合法配置"""
        path = temp_dir / LOCAL_CONFIG_NAME
        path.write_text(json.dumps({"search": {"seed": 12}, "logging": {"level": "error"}}), encoding="utf-8")
        config = load_config(path)
        assert config.search.seed == 12
        assert config.logging.level == LogLevel.ERROR

    def test_invalid_json_falls_back(self, temp_dir):
        """非法 JSON 退回默认配置"""
        path = temp_dir / LOCAL_CONFIG_NAME
        path.write_text("not json", encoding="utf-8")
        assert load_config(path).search.seed == 0

    def test_schema_violation_raises(self, temp_dir):
        """不符合 schema 时抛出 ConfigError"""
        path = temp_dir / LOCAL_CONFIG_NAME
        path.write_text(json.dumps({"noise": {"trials": 0}}), encoding="utf-8")
        with pytest.raises(ConfigError) as excinfo:
            load_config(path)
        assert excinfo.value.path == path
        assert excinfo.value.errors
