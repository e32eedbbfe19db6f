"""
gini-qudit CLI 命令

每个子命令对应一组实验：
gxp-hist, eta-sweep, find-g, expand, noise, entropy-compare, verify，
以及配置相关的 init 和 config。
"""

import json
from dataclasses import replace
from pathlib import Path
from typing import Callable, Optional, Tuple

import click

from . import __version__
from .experiments import (
    InvariantViolation,
    RunResult,
    run_entropy_compare,
    run_eta_sweep,
    run_expand,
    run_find_g,
    run_gxp_histogram,
    run_noise,
    run_verify,
)
from .logging import LogLevel, get_logger
from .models import GiniQuditConfig, ParameterError, SearchConfig, SweepConfig
from .parallel import resolve_threads
from .qudit.core import DimensionError, GiniQuditError
from .schema import (
    LOCAL_CONFIG_NAME,
    ConfigError,
    find_config_file,
    format_validation_errors,
    load_config,
    validate_config_file,
)

LOG_LEVELS = [level.value for level in LogLevel]


def _odd_dimension(ctx: click.Context, param: click.Parameter, value: Optional[int]) -> Optional[int]:
    if value is None:
        return value
    if value < 3 or value % 2 == 0:
        raise click.BadParameter(f"必须是不小于 3 的奇数，得到 {value}")
    return value


def _odd_dimensions(ctx: click.Context, param: click.Parameter, values: Tuple[int, ...]) -> Tuple[int, ...]:
    for value in values:
        _odd_dimension(ctx, param, value)
    return values


def search_options(fn: Callable) -> Callable:
    """搜索相关的公共选项"""
    fn = click.option("--threads", type=int, default=None, help="工作线程数，0 为自动")(fn)
    fn = click.option("--seed", type=int, default=None, help="随机种子")(fn)
    fn = click.option("--refine/--no-refine", default=None, help="是否做模式搜索细化")(fn)
    fn = click.option("--restarts", type=int, default=None, help="细化起点个数")(fn)
    fn = click.option("--samples", type=int, default=None, help="随机纯态个数")(fn)
    return fn


@click.group()
@click.version_option(version=__version__, prog_name="gini-qudit")
@click.option("--log-level", type=click.Choice(LOG_LEVELS), default=None, help="日志级别")
@click.option("--log-json", is_flag=True, help="JSON 格式日志")
@click.option("--log-file", type=click.Path(dir_okay=False), default=None, help="同时写入日志文件")
@click.pass_context
def cli(ctx: click.Context, log_level: Optional[str], log_json: bool, log_file: Optional[str]):
    """gini-qudit - 奇数维 qudit 的 Gini 不确定关系实验"""
    ctx.ensure_object(dict)
    ctx.obj.update(log_level=log_level, log_json=log_json, log_file=log_file)


def _setup(ctx: click.Context) -> GiniQuditConfig:
    """加载配置文件并按命令行参数配置日志"""
    try:
        config = load_config()
    except ConfigError as e:
        click.echo(format_validation_errors(e.errors), err=True)
        ctx.exit(1)

    logging_config = config.logging
    options = ctx.find_root().obj or {}
    if options.get("log_level"):
        logging_config = replace(logging_config, level=LogLevel(options["log_level"]))
    if options.get("log_json"):
        logging_config = replace(logging_config, json_format=True)
    if options.get("log_file"):
        logging_config = replace(logging_config, file_enabled=True, file_path=options["log_file"])
    get_logger().configure(logging_config)
    return config


def _search_config(
    config: GiniQuditConfig,
    samples: Optional[int],
    restarts: Optional[int],
    refine: Optional[bool],
    seed: Optional[int],
) -> SearchConfig:
    overrides = {
        "n_random": samples,
        "n_restarts": restarts,
        "refine": refine,
        "seed": seed,
    }
    return replace(config.search, **{k: v for k, v in overrides.items() if v is not None})


def _output(config: GiniQuditConfig, out: Optional[str], default_name: str) -> Path:
    if out:
        return Path(out)
    return Path(config.output.out_dir) / default_name


def _execute(ctx: click.Context, run: Callable[[], RunResult]) -> RunResult:
    """
    执行命令主体并统一处理错误：

    - 参数/维数错误 → 用法错误（退出码 2）
    - 不变量检查失败 → ✗ <检查名>（退出码 2）
    - 其他库错误 → ✗ <消息>（退出码 1）
    """
    try:
        result = run()
    except (ParameterError, DimensionError) as e:
        raise click.UsageError(str(e), ctx=ctx)
    except InvariantViolation as e:
        click.echo(f"✗ 不变量检查失败: {e.check}", err=True)
        if e.detail:
            click.echo(f"  {e.detail}", err=True)
        ctx.exit(2)
    except GiniQuditError as e:
        click.echo(f"✗ {e}", err=True)
        ctx.exit(1)

    for path in result.outputs:
        click.echo(f"✓ 已写入: {path}")
    if result.manifest_path is not None:
        click.echo(f"✓ 运行清单: {result.manifest_path}")
    for key, value in result.summary.items():
        click.echo(f"  {key}: {value}")
    return result


@cli.command("gxp-hist")
@click.option("--d", "d", type=int, default=7, show_default=True, callback=_odd_dimension, help="维数（奇数）")
@click.option("--samples", type=int, default=None, help="随机纯态个数")
@click.option("--seed", type=int, default=None, help="随机种子")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="输出 CSV")
@click.option("--threads", type=int, default=None, help="工作线程数，0 为自动")
@click.pass_context
def gxp_hist(ctx, d, samples, seed, out, threads):
    """随机纯态的 G_XP 分布（CSV）"""
    config = _setup(ctx)
    cfg = _search_config(config, samples, None, None, seed)
    _execute(ctx, lambda: run_gxp_histogram(
        d,
        cfg.n_random,
        cfg.seed,
        _output(config, out, f"gxp_hist_d{d}.csv"),
        resolve_threads(threads, config.parallel.threads),
    ))


@cli.command("eta-sweep")
@click.option("--d-min", type=int, default=None, callback=_odd_dimension, help="起始维数（奇数）")
@click.option("--d-max", type=int, default=None, callback=_odd_dimension, help="终止维数（奇数）")
@search_options
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="输出 CSV")
@click.pass_context
def eta_sweep(ctx, d_min, d_max, samples, restarts, refine, seed, threads, out):
    """η̂_d、η̃_d 与差值随 d 的变化（CSV）"""
    config = _setup(ctx)
    sweep = SweepConfig(d_min or config.sweep.d_min, d_max or config.sweep.d_max)
    cfg = _search_config(config, samples, restarts, refine, seed)
    _execute(ctx, lambda: run_eta_sweep(
        sweep,
        cfg,
        _output(config, out, f"eta_sweep_{sweep.d_min}_{sweep.d_max}.csv"),
        resolve_threads(threads, config.parallel.threads),
    ))


@cli.command("find-g")
@click.option("--d", "d", type=int, required=True, callback=_odd_dimension, help="维数（奇数）")
@search_options
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="输出 JSON")
@click.pass_context
def find_g(ctx, d, samples, restarts, refine, seed, threads, out):
    """最小 Gini 不确定态 |g⟩（JSON）"""
    config = _setup(ctx)
    cfg = _search_config(config, samples, restarts, refine, seed)
    _execute(ctx, lambda: run_find_g(
        d,
        cfg,
        _output(config, out, f"find_g_d{d}.json"),
        resolve_threads(threads, config.parallel.threads),
    ))


@cli.command()
@click.option("--d", "d", type=int, required=True, callback=_odd_dimension, help="维数（奇数）")
@click.option("--fiducial", "fiducial_path", type=click.Path(exists=True, dir_okay=False), required=True,
              help="fiducial 态 JSON")
@click.option("--state", "state_path", type=click.Path(exists=True, dir_okay=False), required=True,
              help="待展开的向量 JSON")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="输出 JSON")
@click.pass_context
def expand(ctx, d, fiducial_path, state_path, out):
    """在相干态族中展开任意向量（JSON）"""
    config = _setup(ctx)
    _execute(ctx, lambda: run_expand(
        d,
        Path(fiducial_path),
        Path(state_path),
        _output(config, out, f"expand_d{d}.json"),
    ))


@cli.command()
@click.option("--d", "d", type=int, required=True, callback=_odd_dimension, help="维数（奇数）")
@click.option("--fiducial", "fiducial_path", type=click.Path(exists=True, dir_okay=False), required=True,
              help="fiducial 态 JSON")
@click.option("--state", "state_path", type=click.Path(exists=True, dir_okay=False), required=True,
              help="待展开的向量 JSON")
@click.option("--epsilon", type=float, default=None, help="噪声幅度 ε")
@click.option("--trials", type=int, default=None, help="试验次数")
@click.option("--seed", type=int, default=None, help="随机种子")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="输出 CSV")
@click.option("--threads", type=int, default=None, help="工作线程数，0 为自动")
@click.pass_context
def noise(ctx, d, fiducial_path, state_path, epsilon, trials, seed, out, threads):
    """展开系数乘性噪声下的误差范数（CSV）"""
    config = _setup(ctx)
    noise_config = replace(
        config.noise,
        **{k: v for k, v in (("epsilon", epsilon), ("trials", trials)) if v is not None},
    )
    run_seed = config.search.seed if seed is None else seed

    def run() -> RunResult:
        noise_config.validate()
        return run_noise(
            d,
            Path(fiducial_path),
            Path(state_path),
            noise_config.epsilon,
            noise_config.trials,
            run_seed,
            _output(config, out, f"noise_d{d}.csv"),
            resolve_threads(threads, config.parallel.threads),
        )

    _execute(ctx, run)


@cli.command("entropy-compare")
@click.option("--d-min", type=int, default=None, callback=_odd_dimension, help="起始维数（奇数）")
@click.option("--d-max", type=int, default=None, callback=_odd_dimension, help="终止维数（奇数）")
@search_options
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="输出 CSV")
@click.pass_context
def entropy_compare(ctx, d_min, d_max, samples, restarts, refine, seed, threads, out):
    """最小 Gini 态的熵不确定性超出量（CSV）"""
    config = _setup(ctx)
    sweep = SweepConfig(d_min or config.sweep.d_min, d_max or config.sweep.d_max)
    cfg = _search_config(config, samples, restarts, refine, seed)
    _execute(ctx, lambda: run_entropy_compare(
        sweep,
        cfg,
        _output(config, out, f"entropy_compare_{sweep.d_min}_{sweep.d_max}.csv"),
        resolve_threads(threads, config.parallel.threads),
    ))


@cli.command()
@click.option("--d", "dims", type=int, multiple=True, callback=_odd_dimensions,
              help="要检查的维数，可重复；默认 3 5 7")
@click.option("--cases", type=int, default=20, show_default=True, help="每个维数的随机用例数")
@click.option("--seed", type=int, default=0, show_default=True, help="随机种子")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="可选的 JSON 报告")
@click.pass_context
def verify(ctx, dims, cases, seed, out):
    """检查结构性不变量（幺正性、群乘法、协变性、单位分解、Gini 定义等价）"""
    _setup(ctx)
    dims = dims or (3, 5, 7)
    result = _execute(ctx, lambda: run_verify(dims, seed, cases, Path(out) if out else None))
    click.echo(f"✓ 全部 {len(result.checks)} 项检查通过")


@cli.command()
@click.option("-y", "--yes", is_flag=True, help="覆盖已有配置文件")
def init(yes: bool):
    """初始化 gini-qudit 配置"""
    config_path = Path(LOCAL_CONFIG_NAME)

    if config_path.exists() and not yes:
        if not click.confirm("配置文件已存在，是否覆盖？"):
            click.echo("取消初始化")
            return

    config_path.write_text(
        json.dumps(GiniQuditConfig().to_dict(), indent=2, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )
    click.echo(f"✓ 配置文件已创建: {LOCAL_CONFIG_NAME}")


@cli.command()
@click.option("--validate", "validate_only", is_flag=True, help="只验证配置文件")
@click.pass_context
def config(ctx, validate_only: bool):
    """查看或验证当前配置"""
    path = find_config_file()
    if path is None:
        click.echo("未找到配置文件，使用默认配置")
        if not validate_only:
            click.echo(json.dumps(GiniQuditConfig().to_dict(), indent=2, ensure_ascii=False))
        return

    valid, errors = validate_config_file(path)
    click.echo(f"配置文件: {path}")
    click.echo(format_validation_errors(errors))
    if not valid:
        ctx.exit(1)
    if not validate_only:
        click.echo(json.dumps(load_config(path).to_dict(), indent=2, ensure_ascii=False))


def main():
    cli(obj={})


if __name__ == "__main__":
    main()
