"""
gini-qudit 配置模型

定义搜索、噪声实验、扫描、输出与并行的配置数据类。
"""

from dataclasses import dataclass, field
from typing import Any, Dict

from .logging import LoggingConfig, LogLevel
from .qudit.core import GiniQuditError


class ParameterError(GiniQuditError, ValueError):
    """运行参数非法（负的 epsilon、trials < 1、d 范围错误等）"""
    pass


# 最小奇数维与默认扫描上限
MIN_DIMENSION = 3
DEFAULT_SWEEP_MAX = 101


@dataclass
class SearchConfig:
    """
    η_d 估计与最小不确定态搜索的配置

    n_random 默认取 400 个随机纯态；refine 打开时从最好的 n_restarts 个候选
    出发做单位球面上的模式搜索。
    """
    n_random: int = 400            # 随机纯态个数
    n_restarts: int = 5            # 局部细化的起点个数
    refine: bool = True            # 是否做模式搜索细化
    step_init: float = 0.1         # 初始步长
    step_min: float = 1e-6         # 步长下限，低于即停止
    seed: int = 0                  # 随机流根种子
    max_evaluations: int = 100_000 # 单次细化的目标函数求值上限

    def validate(self) -> None:
        if self.n_random < 1:
            raise ParameterError(f"n_random 至少为 1: {self.n_random}")
        if self.n_restarts < 0:
            raise ParameterError(f"n_restarts 不能为负: {self.n_restarts}")
        if not 0 < self.step_min < self.step_init:
            raise ParameterError(
                f"步长需满足 0 < step_min < step_init: {self.step_min}, {self.step_init}"
            )
        if self.seed < 0:
            raise ParameterError(f"seed 不能为负: {self.seed}")
        if self.max_evaluations < 1:
            raise ParameterError(f"max_evaluations 至少为 1: {self.max_evaluations}")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n_random": self.n_random,
            "n_restarts": self.n_restarts,
            "refine": self.refine,
            "step_init": self.step_init,
            "step_min": self.step_min,
            "seed": self.seed,
            "max_evaluations": self.max_evaluations,
        }


@dataclass
class NoiseConfig:
    """噪声实验配置"""
    epsilon: float = 0.3
    trials: int = 10

    def validate(self) -> None:
        if self.epsilon < 0:
            raise ParameterError(f"epsilon 不能为负: {self.epsilon}")
        if self.trials < 1:
            raise ParameterError(f"trials 至少为 1: {self.trials}")


@dataclass
class SweepConfig:
    """奇数 d 扫描范围（闭区间）"""
    d_min: int = MIN_DIMENSION
    d_max: int = DEFAULT_SWEEP_MAX

    def validate(self) -> None:
        for name, value in (("d_min", self.d_min), ("d_max", self.d_max)):
            if value < MIN_DIMENSION or value % 2 == 0:
                raise ParameterError(f"{name} 必须是不小于 3 的奇数: {value}")
        if self.d_min > self.d_max:
            raise ParameterError(f"d_min > d_max: {self.d_min} > {self.d_max}")

    def dimensions(self) -> list:
        self.validate()
        return list(range(self.d_min, self.d_max + 1, 2))


@dataclass
class OutputConfig:
    """输出目录配置"""
    out_dir: str = "."


@dataclass
class ParallelConfig:
    """并行配置，threads = 0 表示自动"""
    threads: int = 0


@dataclass
class GiniQuditConfig:
    """gini-qudit 根配置"""
    version: str = "1.0"
    search: SearchConfig = field(default_factory=SearchConfig)
    noise: NoiseConfig = field(default_factory=NoiseConfig)
    sweep: SweepConfig = field(default_factory=SweepConfig)
    output: OutputConfig = field(default_factory=OutputConfig)
    parallel: ParallelConfig = field(default_factory=ParallelConfig)
    logging: LoggingConfig = field(default_factory=LoggingConfig)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "GiniQuditConfig":
        """从（已通过 schema 校验的）字典构建，缺省字段取默认值"""
        search = SearchConfig(**data.get("search", {}))
        noise = NoiseConfig(**data.get("noise", {}))
        sweep = SweepConfig(**data.get("sweep", {}))
        output = OutputConfig(**data.get("output", {}))
        parallel = ParallelConfig(**data.get("parallel", {}))

        logging_data = dict(data.get("logging", {}))
        if "level" in logging_data:
            logging_data["level"] = LogLevel(logging_data["level"])
        logging_config = LoggingConfig(**logging_data)

        return cls(
            version=data.get("version", "1.0"),
            search=search,
            noise=noise,
            sweep=sweep,
            output=output,
            parallel=parallel,
            logging=logging_config,
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "version": self.version,
            "search": self.search.to_dict(),
            "noise": {"epsilon": self.noise.epsilon, "trials": self.noise.trials},
            "sweep": {"d_min": self.sweep.d_min, "d_max": self.sweep.d_max},
            "output": {"out_dir": self.output.out_dir},
            "parallel": {"threads": self.parallel.threads},
            "logging": {
                "level": self.logging.level.value,
                "console_enabled": self.logging.console_enabled,
                "file_enabled": self.logging.file_enabled,
                "file_path": self.logging.file_path,
                "json_format": self.logging.json_format,
            },
        }
