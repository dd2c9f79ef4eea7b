"""配置、Schema、异常与工具函数单元测试"""

import json
from fractions import Fraction

import pytest

from app.config.settings import AppSettings, ConventionSettings, LogSettings, get_settings, validate_settings
from app.core.cluster_engine import CONVENTIONS
from app.core.exact_poly import LaurentPolynomial
from app.core.lie_core import Word
from app.core.schemas import (
    SCHEMA_VERSION,
    ConventionFlags,
    OutputFormat,
    PolynomialResult,
    RunConfig,
    ScanRecordSchema,
    schema_validator,
    validate_schema,
)
from app.utils.exceptions import (
    AcceptanceError,
    CartanTypeError,
    ConfigurationError,
    ConventionError,
    LetterRangeError,
    NonLaurentError,
    StringConeException,
    WordParseError,
    handle_exception,
)
from app.utils.helpers import (
    append_jsonl,
    chunked,
    format_duration,
    format_vector,
    fraction_to_str,
    parse_fraction,
    parse_int_sequence,
    parse_type_string,
    read_jsonl,
)
from app.utils.logger import get_logger, log_execution_time


class TestSettings:
    """应用配置测试类"""

    def test_defaults(self):
        """测试默认配置"""
        config = AppSettings()
        assert config.app_name == "StringCone"
        assert config.scan.threads >= 1
        assert config.conventions.simply_braided_root == "direct"
        assert config.conventions.subword_partial_product == "j"

    def test_environment_override(self, monkeypatch):
        """测试环境变量覆盖"""
        monkeypatch.setenv("STRINGCONE_THREADS", "4")
        monkeypatch.setenv("STRINGCONE_CONVENTION_TYPE_II_REVERSED", "true")
        config = AppSettings()
        assert config.scan.threads == 4
        assert config.conventions.type_ii_reversed is True

    def test_invalid_log_level(self):
        """测试未知日志级别"""
        with pytest.raises(ValueError):
            LogSettings(level="verbose")
        assert LogSettings(level="debug").level == "DEBUG"

    def test_invalid_convention_literal(self):
        """测试约定取值受限"""
        with pytest.raises(ValueError):
            ConventionSettings(trail_endpoints="sideways")

    def test_global_instance(self):
        """测试全局配置实例与验证"""
        assert get_settings() is get_settings()
        assert validate_settings()


class TestRunConfig:
    """运行配置测试类"""

    def test_parses_word_strings(self):
        """测试单词可以写成字符串"""
        config = RunConfig(type="d4", words=["2 1 4 2 3 2 4 2 1 2 3 4"], letters=[2])
        assert config.type == "D4"
        assert config.word() == Word((2, 1, 4, 2, 3, 2, 4, 2, 1, 2, 3, 4))
        assert config.selected_letters == [2]

    def test_defaults_from_settings(self, conventions):
        """测试约定默认值来自全局配置"""
        conventions.type_ii_reversed = True
        config = RunConfig(type="A2")
        assert config.conventions.type_ii_reversed is True
        assert config.conventions.to_convention() == CONVENTIONS["reversed"]
        assert config.selected_letters == [1, 2]

    def test_invalid_type(self):
        """测试无效类型"""
        with pytest.raises(CartanTypeError):
            RunConfig(type="B2")

    def test_letter_out_of_range(self):
        """测试字母越界"""
        with pytest.raises(LetterRangeError):
            RunConfig(type="A2", letters=[3])
        with pytest.raises(LetterRangeError):
            RunConfig(type="A2", words=[[1, 2, 3]])

    def test_missing_word(self):
        """测试请求不存在的单词"""
        with pytest.raises(WordParseError):
            RunConfig(type="A2").word()

    def test_extra_fields_forbidden(self):
        """测试未知字段被拒绝"""
        with pytest.raises(ValueError):
            RunConfig(type="A2", colour="blue")

    @pytest.mark.parametrize("suffix", [".yaml", ".json"])
    def test_save_and_load(self, temp_dir, suffix):
        """测试写出后原样读回"""
        config = RunConfig(
            type="A2",
            words=[[1, 2, 1]],
            letters=[1],
            format=OutputFormat.CSV,
            conventions=ConventionFlags(type_ii_requires_adjacency=False),
            seed=7,
        )
        path = config.save(temp_dir / f"run{suffix}")
        loaded = RunConfig.load(path)
        assert loaded == config
        assert loaded.format == "csv"

    def test_serialization_is_deterministic(self):
        """测试相同输入序列化为相同文本"""
        first = RunConfig(type="A2", words=[[1, 2, 1]], seed=1).to_json_text()
        second = RunConfig(type="A2", words=[[1, 2, 1]], seed=1).to_json_text()
        assert first == second
        assert json.loads(first)["schema_version"] == SCHEMA_VERSION

    def test_load_errors(self, temp_dir):
        """测试文件不存在或内容不是映射"""
        with pytest.raises(ConfigurationError):
            RunConfig.load(temp_dir / "missing.yaml")
        path = temp_dir / "list.yaml"
        path.write_text("- 1\n- 2\n", encoding="utf-8")
        with pytest.raises(ConfigurationError):
            RunConfig.load(path)


class TestResultSchemas:
    """输出Schema测试类"""

    def test_polynomial_result(self):
        """测试多项式输出结构"""
        p = LaurentPolynomial.variable(3, 3, 1, chart="x")
        payload = {"type": "A2", "word": [1, 2, 1], "letter": 1, "text": str(p), **p.to_json()}
        result = validate_schema(payload, PolynomialResult)
        assert result.is_valid
        assert [term["exp"] for term in result.validated_data["terms"]] == [[0, 0, 1]]

    def test_invalid_scan_record(self):
        """测试缺字段的扫描记录"""
        result = validate_schema({"key": "A2:1 2 1:1"}, ScanRecordSchema)
        assert not result.is_valid
        assert any(error.startswith("type") for error in result.errors)

    def test_partition(self):
        """测试合法记录原样保留"""
        good = {
            "key": "A2:1 2 1:1",
            "type": "A2",
            "word": [1, 2, 1],
            "letter": 1,
            "monomials": 1,
            "multiplicity_free": True,
            "redundant": [],
            "coefficient_gt1": [],
            "conj_mu2": "agree",
            "conj_mult2": "agree",
            "mult2_counterexamples": [],
            "nomulti_violation": False,
            "cross_letter": False,
        }
        bad = dict(good, conj_mu2="maybe")
        valid, invalid = schema_validator.partition([good, bad], ScanRecordSchema)
        assert valid == [good]
        assert len(invalid) == 1

    def test_unsupported_version_warns(self):
        """测试未知Schema版本产生警告"""
        result = validate_schema({"schema_version": "9.9", "key": "x"}, ScanRecordSchema)
        assert result.warnings


class TestExceptions:
    """异常体系测试类"""

    def test_exit_codes(self):
        """测试退出码：用法 2、约定违例 3、验收失败 1"""
        assert CartanTypeError("bad", "B", 2).exit_code == 2
        assert NonLaurentError("bad").exit_code == 3
        assert isinstance(NonLaurentError("bad"), ConventionError)
        assert AcceptanceError("bad", ["frozen"]).exit_code == 1

    def test_message_and_dict(self):
        """测试文本与字典形式"""
        error = LetterRangeError(5, 4)
        assert str(error).startswith("[LETTER_RANGE_ERROR]")
        assert error.to_dict()["details"] == {"letter": 5, "rank": 4}

    @pytest.mark.parametrize(
        "exc,code,exit_code",
        [
            (ValueError("x"), "VALUE_ERROR", 2),
            (FileNotFoundError("x"), "FILE_NOT_FOUND", 2),
            (ZeroDivisionError("x"), "CONVENTION_ERROR", 3),
            (RuntimeError("x"), "INTERNAL_ERROR", 1),
        ],
    )
    def test_handle_exception(self, exc, code, exit_code):
        """测试通用异常的转换"""
        converted = handle_exception(exc)
        assert isinstance(converted, StringConeException)
        assert converted.error_code == code
        assert converted.exit_code == exit_code

    def test_passthrough(self):
        """测试自定义异常原样返回"""
        error = ConfigurationError("x")
        assert handle_exception(error) is error


class TestHelpers:
    """工具函数测试类"""

    def test_parse_int_sequence(self):
        """测试各种分隔符"""
        assert parse_int_sequence("(1,1,0)") == (1, 1, 0)
        assert parse_int_sequence("2 1; 4") == (2, 1, 4)
        assert parse_int_sequence("-1 2") == (-1, 2)

    def test_parse_type_string(self):
        """测试类型字符串"""
        assert parse_type_string("e_6") == ("E", 6)
        with pytest.raises(WordParseError):
            parse_type_string("D4x")

    def test_fractions(self):
        """测试分数与字符串互转"""
        assert fraction_to_str(Fraction(3, 1)) == "3"
        assert fraction_to_str(Fraction(-1, 2)) == "-1/2"
        assert parse_fraction("-1/2") == Fraction(-1, 2)
        with pytest.raises(WordParseError):
            parse_fraction("1/0")

    def test_formatting(self):
        """测试格式化"""
        assert format_vector((0, 1, -1)) == "(0,1,-1)"
        assert format_duration(0.25) == "250ms"
        assert format_duration(90) == "1m 30s"

    def test_jsonl_round_trip(self, temp_dir):
        """测试JSON行追加与读取，损坏行被跳过"""
        path = temp_dir / "records.jsonl"
        assert append_jsonl(path, [{"a": 1}, {"b": 2}]) == 2
        with path.open("a", encoding="utf-8") as handle:
            handle.write("{broken\n")
        assert list(read_jsonl(path)) == [{"a": 1}, {"b": 2}]
        assert list(read_jsonl(temp_dir / "absent.jsonl")) == []

    def test_chunked(self):
        """测试分块"""
        assert list(chunked([1, 2, 3, 4, 5], 2)) == [[1, 2], [3, 4], [5]]


class TestLogger:
    """日志装饰器测试类"""

    def test_log_execution_time_passes_through(self):
        """测试装饰器不改变返回值与异常"""

        @log_execution_time("double")
        def double(x):
            return 2 * x

        @log_execution_time()
        def fail():
            raise ConventionError("boom")

        assert double(3) == 6
        assert double.__name__ == "double"
        with pytest.raises(ConventionError):
            fail()

    def test_get_logger_binds_component(self):
        """测试日志器绑定模块名与组件名"""
        messages = []
        bound = get_logger("app.core.cluster_engine")
        sink_id = bound.add(lambda message: messages.append(message.record["extra"]), level="DEBUG")
        try:
            bound.debug("trace")
        finally:
            bound.remove(sink_id)
        assert messages[0]["name"] == "app.core.cluster_engine"
        assert messages[0]["component"] == "cluster_engine"
