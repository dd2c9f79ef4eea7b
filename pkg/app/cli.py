"""命令行接口

提供 StringCone 的命令行工具：势函数、ς、弦锥、面判定、Ψ、trail、
猜想扫描、D4 核验与约化单词枚举。
"""

import csv
import io
import json
from functools import wraps
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import typer
from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from app.config import get_settings, validate_settings
from app.core.cluster_engine import CONVENTIONS, potential
from app.core.d4_example import D4_WORD, verify_d4
from app.core.lie_core import longest_element, reduced_words
from app.core.polyhedral import (
    brute_force_redundancy,
    classify_redundancy,
    scan_conjectures,
    system_from_string_system,
)
from app.core.schemas import (
    ConventionFlags,
    D4Result,
    OutputFormat,
    PolynomialResult,
    PsiResult,
    RedundancyResult,
    RunConfig,
    ScanCaps,
    ScanSummarySchema,
    StringSystemResult,
    TrailDump,
    WordsResult,
)
from app.core.special_words import enumerate_trails, nice_words
from app.core.stringcone import in_cone, psi, string_system, varsigma
from app.utils.exceptions import AcceptanceError, ConfigurationError, handle_exception
from app.utils.helpers import ensure_dir, format_vector, parse_int_sequence
from app.utils.logger import get_logger, setup_logger

# 创建CLI应用
app = typer.Typer(
    name="stringcone",
    help="🧮 StringCone - 弦锥不等式与冗余分析",
    add_completion=False,
)

console = Console()
err_console = Console(stderr=True)
logger = get_logger(__name__)


# ==================== 公共选项与工具 ====================


TYPE_OPTION = typer.Option(None, "--type", "-t", help="Cartan类型，如 A2、D4、E6")
WORD_OPTION = typer.Option(None, "--word", "-w", help='约化单词，如 "2 1 2"')
LETTER_OPTION = typer.Option(None, "--letter", "-l", help="字母（节点编号）")
FORMAT_OPTION = typer.Option(None, "--format", "-f", help="输出格式 json|text|csv")
OUTPUT_OPTION = typer.Option(None, "--output", "-o", help="输出文件路径")
CONVENTION_OPTION = typer.Option(None, "--convention", help="箭头约定 standard|reversed|unfiltered")
CONFIG_OPTION = typer.Option(None, "--config", "-c", help="从 YAML/JSON 读取 RunConfig")
SAVE_CONFIG_OPTION = typer.Option(None, "--save-config", help="把本次 RunConfig 写到文件")


def _handle_errors(func: Callable[..., Any]) -> Callable[..., Any]:
    """把异常转换为红色提示与对应退出码"""

    @wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        try:
            return func(*args, **kwargs)
        except typer.Exit:
            raise
        except Exception as e:
            error = handle_exception(e)
            err_console.print(f"❌ {error}", style="red", markup=False)
            logger.error(f"Command {func.__name__} failed: {error}")
            raise typer.Exit(error.exit_code)

    return wrapper


def _build_config(
    type_label: Optional[str],
    words: Optional[List[str]] = None,
    letters: Optional[List[int]] = None,
    output_format: Optional[OutputFormat] = None,
    output: Optional[Path] = None,
    convention: Optional[str] = None,
    config_file: Optional[Path] = None,
    save_config: Optional[Path] = None,
    seed: Optional[int] = None,
    caps: Optional[ScanCaps] = None,
) -> RunConfig:
    """命令行参数优先；未给出的字段取自 --config 文件"""
    setup_logger(get_settings().log)
    base: Dict[str, Any] = RunConfig.load(config_file).model_dump(mode="json") if config_file else {}
    overrides: Dict[str, Any] = {
        "type": type_label,
        "words": words or None,
        "letters": letters or None,
        "output": str(output) if output else None,
        "seed": seed,
        "caps": caps.model_dump() if caps else None,
    }
    data = {**base, **{k: v for k, v in overrides.items() if v is not None}}
    if output_format is not None:
        data["format"] = OutputFormat(output_format).value
    if convention is not None:
        if convention not in CONVENTIONS:
            raise ConfigurationError(f"Unknown convention: {convention}", config_key="convention")
        chosen = CONVENTIONS[convention]
        data["conventions"] = ConventionFlags(
            type_ii_reversed=chosen.type_ii_reversed,
            type_ii_requires_adjacency=chosen.type_ii_requires_adjacency,
        ).model_dump()
    if "type" not in data:
        raise ConfigurationError("Missing --type", config_key="type")
    config = RunConfig.model_validate(data)
    if save_config:
        config.save(save_config)
    return config


def _require_letter(config: RunConfig) -> int:
    if len(config.letters) != 1:
        raise ConfigurationError("Exactly one --letter is required", config_key="letters")
    return config.letters[0]


def _write(config: RunConfig, text: str) -> None:
    if config.output:
        path = Path(config.output)
        if path.parent != Path("."):
            ensure_dir(path.parent)
        path.write_text(text if text.endswith("\n") else text + "\n", encoding="utf-8")
        err_console.print(f"✅ 已写入 {path}", style="green")
    else:
        typer.echo(text)


def _emit(
    config: RunConfig,
    payload: Any,
    text: Optional[Callable[[], Any]] = None,
    rows: Optional[List[List[str]]] = None,
) -> None:
    """按 RunConfig.format 输出；text 渲染器返回 rich 可打印对象"""
    if config.format == OutputFormat.JSON:
        data = payload.model_dump(mode="json") if hasattr(payload, "model_dump") else payload
        _write(config, json.dumps(data, sort_keys=True, ensure_ascii=False, indent=2))
    elif config.format == OutputFormat.CSV:
        if rows is None:
            raise ConfigurationError("CSV output is not available for this command", config_key="format")
        buffer = io.StringIO()
        csv.writer(buffer, lineterminator="\n").writerows(rows)
        _write(config, buffer.getvalue().rstrip("\n"))
    else:
        renderable = text() if text is not None else json.dumps(payload.model_dump(mode="json"), indent=2)
        if config.output:
            capture = Console(record=True, width=160)
            capture.print(renderable, markup=False)
            _write(config, capture.export_text())
        else:
            console.print(renderable, markup=False)


# ==================== 命令 ====================


@app.command("potential")
@_handle_errors
def potential_command(
    type_label: Optional[str] = TYPE_OPTION,
    word: Optional[str] = WORD_OPTION,
    letter: Optional[int] = LETTER_OPTION,
    output_format: Optional[OutputFormat] = FORMAT_OPTION,
    output: Optional[Path] = OUTPUT_OPTION,
    convention: Optional[str] = CONVENTION_OPTION,
    config_file: Optional[Path] = CONFIG_OPTION,
    save_config: Optional[Path] = SAVE_CONFIG_OPTION,
):
    """势函数 W_letter 在 Σ_i 坐标中的表达式"""
    config = _build_config(
        type_label, [word] if word else None, [letter] if letter else None, output_format, output, convention,
        config_file, save_config,
    )
    _emit_polynomial(config, lambda c, i, l: potential(c, i, l, config.conventions.to_convention()))


@app.command("varsigma")
@_handle_errors
def varsigma_command(
    type_label: Optional[str] = TYPE_OPTION,
    word: Optional[str] = WORD_OPTION,
    letter: Optional[int] = LETTER_OPTION,
    output_format: Optional[OutputFormat] = FORMAT_OPTION,
    output: Optional[Path] = OUTPUT_OPTION,
    convention: Optional[str] = CONVENTION_OPTION,
    config_file: Optional[Path] = CONFIG_OPTION,
    save_config: Optional[Path] = SAVE_CONFIG_OPTION,
):
    """弦坐标中的 ς_{i,letter}"""
    config = _build_config(
        type_label, [word] if word else None, [letter] if letter else None, output_format, output, convention,
        config_file, save_config,
    )
    _emit_polynomial(config, lambda c, i, l: varsigma(c, i, l, config.conventions.to_convention()))


def _emit_polynomial(config: RunConfig, compute: Callable) -> None:
    c, i, letter = config.cartan, config.word(), _require_letter(config)
    polynomial = compute(c, i, letter)
    payload = PolynomialResult(
        type=config.type, word=list(i.letters), letter=letter, text=str(polynomial), **polynomial.to_json()
    )
    rows = [["coefficient", "exponent"]] + [[t.coeff, " ".join(str(e) for e in t.exp)] for t in payload.terms]
    _emit(config, payload, lambda: str(polynomial), rows)


@app.command("cone")
@_handle_errors
def cone_command(
    type_label: Optional[str] = TYPE_OPTION,
    word: Optional[str] = WORD_OPTION,
    output_format: Optional[OutputFormat] = FORMAT_OPTION,
    output: Optional[Path] = OUTPUT_OPTION,
    convention: Optional[str] = CONVENTION_OPTION,
    config_file: Optional[Path] = CONFIG_OPTION,
    save_config: Optional[Path] = SAVE_CONFIG_OPTION,
):
    """所有字母的 ς 与弦锥不等式"""
    config = _build_config(
        type_label, [word] if word else None, None, output_format, output, convention, config_file, save_config
    )
    strings = string_system(config.cartan, config.word(), config.conventions.to_convention())
    payload = StringSystemResult(type=config.type, **strings.to_json())

    def render() -> Table:
        table = Table(title=f"{config.type} 弦锥 ({strings.form_count} 条不等式)")
        table.add_column("字母", style="cyan")
        table.add_column("ς", style="magenta")
        table.add_column("不等式", style="green")
        for data in strings.letters:
            forms = "\n".join(format_vector(form.form) for form in data.inequalities)
            table.add_row(str(data.letter), str(data.polynomial), forms)
        return table

    rows = [["letter", "index", "coefficient", "form"]] + [
        [str(f.letter), str(f.index), str(f.coefficient), " ".join(str(v) for v in f.form)]
        for f in strings.inequalities()
    ]
    _emit(config, payload, render, rows)


@app.command("facets")
@_handle_errors
def facets_command(
    type_label: Optional[str] = TYPE_OPTION,
    word: Optional[str] = WORD_OPTION,
    letters: Optional[List[int]] = typer.Option(None, "--letter", "-l", help="字母，可重复；默认全部"),
    output_format: Optional[OutputFormat] = FORMAT_OPTION,
    output: Optional[Path] = OUTPUT_OPTION,
    convention: Optional[str] = CONVENTION_OPTION,
    check: bool = typer.Option(False, "--check", help="用双重描述法独立复核"),
    config_file: Optional[Path] = CONFIG_OPTION,
    save_config: Optional[Path] = SAVE_CONFIG_OPTION,
):
    """冗余分类：面、冗余与重复不等式"""
    config = _build_config(
        type_label, [word] if word else None, letters, output_format, output, convention, config_file, save_config
    )
    strings = string_system(config.cartan, config.word(), config.conventions.to_convention())
    system = system_from_string_system(strings, config.selected_letters)
    report = classify_redundancy(system)
    if check:
        oracle = brute_force_redundancy(system)
        if not oracle.agrees_with(report):
            raise AcceptanceError("Double description disagrees with Farkas classification", ["facets --check"])
        err_console.print(f"✅ 双重描述复核一致 ({len(oracle.rays)} 条极射线)", style="green")

    payload = RedundancyResult(
        type=config.type, word=list(config.word().letters), letters=config.selected_letters, **report.to_dict()
    )

    def render() -> Panel:
        table = Table(title=f"{report.facet_count} 个面，{len(report.redundant)} 条冗余")
        table.add_column("#", style="cyan")
        table.add_column("不等式", style="magenta")
        table.add_column("字母")
        table.add_column("状态", style="green")
        for entry in report.entries:
            status = entry.status.value + (" (跨字母)" if entry.cross_letter else "")
            letters_text = ",".join(str(l) for l in sorted(entry.inequality.letters))
            table.add_row(str(entry.index), format_vector(entry.inequality.form), letters_text, status)
        return Panel.fit(table, title=f"{config.type} {config.word()}", border_style="blue")

    _emit(config, payload, render, report.to_csv_rows())


@app.command("psi")
@_handle_errors
def psi_command(
    type_label: Optional[str] = TYPE_OPTION,
    source: str = typer.Option(..., "--from", help="源单词"),
    target: str = typer.Option(..., "--to", help="目标单词"),
    point: str = typer.Option(..., "--point", "-p", help='整点，如 "1 1 0"'),
    output_format: Optional[OutputFormat] = FORMAT_OPTION,
    output: Optional[Path] = OUTPUT_OPTION,
    convention: Optional[str] = CONVENTION_OPTION,
):
    """沿辫子移动路径把弦参数从一个单词映到另一个单词"""
    config = _build_config(type_label, [source, target], None, output_format, output, convention)
    c, i, j = config.cartan, config.word(0), config.word(1)
    t = parse_int_sequence(point)
    mapping = psi(c, i, j)
    image = mapping(t)
    flags = config.conventions.to_convention()
    payload = PsiResult(
        type=config.type,
        source=list(i.letters),
        target=list(j.letters),
        point=list(t),
        image=list(image),
        steps=[f"{step.kind.value}@{step.position}" for step in mapping.steps],
        in_source_cone=in_cone(string_system(c, i, flags), t),
        in_target_cone=in_cone(string_system(c, j, flags), image),
    )
    rows = [["point", "image"], [" ".join(map(str, t)), " ".join(map(str, image))]]
    _emit(config, payload, lambda: f"Ψ{format_vector(t)} = {format_vector(image)}", rows)


@app.command("trails")
@_handle_errors
def trails_command(
    type_label: Optional[str] = TYPE_OPTION,
    word: Optional[str] = WORD_OPTION,
    letter: Optional[int] = LETTER_OPTION,
    output_format: Optional[OutputFormat] = FORMAT_OPTION,
    output: Optional[Path] = OUTPUT_OPTION,
):
    """极小权 i-trail 及其线性形式（与 trop(ς) 对照）"""
    config = _build_config(type_label, [word] if word else None, [letter] if letter else None, output_format, output)
    c, i, chosen = config.cartan, config.word(), _require_letter(config)
    trails = enumerate_trails(c, i, chosen)
    forms = sorted({trail.form for trail in trails})
    expected = set(string_system(c, i).letter(chosen).tropical.forms)
    payload = TrailDump(
        type=config.type,
        word=list(i.letters),
        letter=chosen,
        trails=[trail.to_json() for trail in trails],
        forms=[list(form) for form in forms],
        matches_varsigma=set(forms) == expected,
    )
    rows = [["c", "d"]] + [[" ".join(map(str, t.exponents)), " ".join(map(str, t.form))] for t in trails]
    _emit(config, payload, lambda: "\n".join(format_vector(form) for form in forms), rows)


@app.command("scan")
@_handle_errors
def scan_command(
    type_label: Optional[str] = TYPE_OPTION,
    words: Optional[List[str]] = typer.Option(None, "--word", "-w", help="显式单词，可重复；默认枚举"),
    letters: Optional[List[int]] = typer.Option(None, "--letter", "-l", help="字母，可重复；默认全部"),
    records: Optional[Path] = typer.Option(None, "--records", "-r", help="JSON行记录文件（续跑）"),
    cap: Optional[int] = typer.Option(None, "--cap", help="单词数上限，0 表示不限"),
    seed: Optional[int] = typer.Option(None, "--seed", help="抽样随机种子"),
    threads: Optional[int] = typer.Option(None, "--threads", help="工作进程数，默认 STRINGCONE_THREADS"),
    output_format: Optional[OutputFormat] = FORMAT_OPTION,
    output: Optional[Path] = OUTPUT_OPTION,
    config_file: Optional[Path] = CONFIG_OPTION,
    save_config: Optional[Path] = SAVE_CONFIG_OPTION,
):
    """扫描多重性/冗余猜想"""
    defaults = ScanCaps.from_settings()
    caps = ScanCaps(
        word_cap=defaults.word_cap if cap is None else cap,
        threads=defaults.threads if threads is None else threads,
    )
    config = _build_config(
        type_label, words, letters, output_format, output, None, config_file, save_config, seed, caps
    )
    report = scan_conjectures(
        config.cartan,
        words=config.word_objects or None,
        letters=config.selected_letters,
        output=records,
        cap=config.caps.word_cap,
        seed=config.seed,
        threads=config.caps.threads,
    )
    payload = ScanSummarySchema(**report.summary())

    def render() -> Table:
        table = Table(title=f"{config.type} 猜想扫描")
        table.add_column("项目", style="cyan")
        table.add_column("值", style="magenta")
        table.add_row("记录数", str(payload.records))
        table.add_row("续跑记录", str(payload.resumed))
        table.add_row("多重性自由", str(payload.multiplicity_free))
        table.add_row("含冗余", str(payload.with_redundancy))
        table.add_row("μ2 反例", str(len(payload.mu2_counterexamples)))
        table.add_row("mult2 反例", str(len(payload.mult2_counterexamples)))
        return table

    rows = [["key", "multiplicity_free", "redundant", "conj_mu2", "conj_mult2"]] + [
        [r["key"], str(r["multiplicity_free"]), str(len(r["redundant"])), r["conj_mu2"], r["conj_mult2"]]
        for r in report.records
    ]
    _emit(config, payload, render, rows)


@app.command("verify-d4")
@_handle_errors
def verify_d4_command(
    output_format: Optional[OutputFormat] = FORMAT_OPTION,
    output: Optional[Path] = OUTPUT_OPTION,
):
    """D4 算例全套核验，失败时退出码为 1"""
    config = _build_config("D4", [" ".join(map(str, D4_WORD.letters))], None, output_format, output)
    report = verify_d4(config.cartan, config.word())
    payload = D4Result(**report.to_dict())

    def render() -> Table:
        table = Table(title=f"D4 核验 {D4_WORD}")
        table.add_column("检查", style="cyan")
        table.add_column("结果")
        table.add_column("说明", style="magenta")
        for check in report.checks:
            mark = "✅" if check.passed else ("❌" if check.asserted else "⚠️")
            table.add_row(check.name, mark, check.detail)
        return table

    rows = [["name", "passed", "asserted", "detail"]] + [
        [c.name, str(c.passed), str(c.asserted), c.detail] for c in report.checks
    ]
    _emit(config, payload, render, rows)
    if not report.ok:
        raise AcceptanceError("D4 verification failed", [check.name for check in report.failed])


@app.command("words")
@_handle_errors
def words_command(
    type_label: Optional[str] = TYPE_OPTION,
    limit: Optional[int] = typer.Option(None, "--limit", "-n", help="最多输出多少个"),
    nice: bool = typer.Option(False, "--nice", help="只输出 nice 单词"),
    output_format: Optional[OutputFormat] = FORMAT_OPTION,
    output: Optional[Path] = OUTPUT_OPTION,
):
    """按字典序枚举 w₀ 的约化单词"""
    config = _build_config(type_label, None, None, output_format, output)
    c = config.cartan
    if nice:
        found = nice_words(c)[:limit] if limit else nice_words(c)
    else:
        found = list(reduced_words(c, longest_element(c), limit=limit))
    payload = WordsResult(type=config.type, count=len(found), words=[list(w.letters) for w in found], nice=nice)
    rows = [["word"]] + [[str(w)] for w in found]
    _emit(config, payload, lambda: "\n".join(str(w) for w in found), rows)


@app.command()
def config(
    show: bool = typer.Option(False, "--show", "-s", help="显示当前配置"),
    validate: bool = typer.Option(False, "--validate", "-v", help="验证配置"),
):
    """配置管理"""
    settings = get_settings()

    if validate:
        if validate_settings():
            console.print("✅ 配置验证通过", style="green")
            return
        console.print("❌ 配置验证失败", style="red")
        raise typer.Exit(2)

    if show:
        table = Table(title="StringCone 配置信息")
        table.add_column("配置项", style="cyan")
        table.add_column("值", style="magenta")

        # 应用配置
        table.add_row("应用名称", settings.app_name)
        table.add_row("版本", settings.app_version)
        table.add_row("调试模式", str(settings.debug))

        # 约定配置
        table.add_row("第(ii)类箭头反转", str(settings.conventions.type_ii_reversed))
        table.add_row("第(ii)类箭头要求相邻", str(settings.conventions.type_ii_requires_adjacency))
        table.add_row("simply-braided 根", settings.conventions.simply_braided_root)
        table.add_row("trail 起止权", settings.conventions.trail_endpoints)
        table.add_row("子词部分乘积", settings.conventions.subword_partial_product)

        # 扫描配置
        table.add_row("工作进程数", str(settings.scan.threads))
        table.add_row("单词上限", str(settings.scan.word_cap))
        table.add_row("抽样种子", str(settings.scan.sample_seed))

        # 日志配置
        table.add_row("日志级别", settings.log.level)
        table.add_row("JSON日志", str(settings.log.json_format))

        console.print(table)
    else:
        console.print("使用 --show 显示配置或 --validate 验证配置")


@app.command()
def version():
    """显示版本信息"""
    from app import __version__

    version_info = Table(title="StringCone 版本信息")
    version_info.add_column("组件", style="cyan")
    version_info.add_column("版本", style="magenta")

    version_info.add_row("StringCone", __version__)

    for module_name in ("pydantic", "numpy", "sympy", "networkx", "joblib"):
        try:
            module = __import__(module_name)
            version_info.add_row(module_name, str(getattr(module, "__version__", getattr(module, "VERSION", "?"))))
        except ImportError:
            pass

    console.print(version_info)


def main():
    """CLI入口点"""
    app()


if __name__ == "__main__":
    main()
