"""基础Schema定义

所有输入输出Schema共用的版本号、枚举与基类。
"""

from enum import Enum

from pydantic import BaseModel, ConfigDict, Field


class SchemaVersion(str, Enum):
    """Schema版本枚举"""

    V1_0 = "1.0"


class OutputFormat(str, Enum):
    """输出格式枚举"""

    JSON = "json"  # 机器可读
    TEXT = "text"  # 终端表格
    CSV = "csv"  # 逐条不等式


class ConjectureVerdict(str, Enum):
    """猜想比较结果"""

    AGREE = "agree"
    COUNTEREXAMPLE = "counterexample"


class BaseSchema(BaseModel):
    """所有Schema的基础类

    不带时间戳：相同输入必须序列化为相同字节。
    """

    schema_version: SchemaVersion = Field(default=SchemaVersion.V1_0, description="Schema版本")

    model_config = ConfigDict(use_enum_values=True, extra="forbid")
