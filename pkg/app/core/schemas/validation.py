"""Schema验证工具

校验外部读入的数据（续跑时的扫描记录、运行配置文件）是否符合Schema。
"""

from typing import Any, Dict, Iterable, List, Optional, Tuple, Type

from pydantic import BaseModel, ValidationError

from .base import BaseSchema, SchemaVersion


class ValidationResult(BaseModel):
    """验证结果"""

    is_valid: bool
    errors: List[str] = []
    warnings: List[str] = []
    schema_version: Optional[str] = None
    validated_data: Optional[Dict[str, Any]] = None


class SchemaValidator:
    """Schema验证器"""

    def __init__(self):
        self.supported_versions = [v.value for v in SchemaVersion]

    def validate_schema(self, data: Dict[str, Any], schema_class: Type[BaseSchema]) -> ValidationResult:
        """验证数据是否符合指定Schema

        Args:
            data: 要验证的数据
            schema_class: Schema类

        Returns:
            验证结果
        """
        result = ValidationResult(is_valid=False)
        schema_version = str(data.get("schema_version", SchemaVersion.V1_0.value))
        if schema_version not in self.supported_versions:
            result.warnings.append(f"Unsupported schema version: {schema_version}")
        try:
            instance = schema_class.model_validate(data)
        except ValidationError as e:
            result.errors = [f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in e.errors()]
            return result
        result.is_valid = True
        result.schema_version = schema_version
        result.validated_data = instance.model_dump(mode="json")
        return result

    def partition(
        self, records: Iterable[Dict[str, Any]], schema_class: Type[BaseSchema]
    ) -> Tuple[List[Dict[str, Any]], List[ValidationResult]]:
        """把记录分为合法与不合法两组；合法记录原样返回"""
        valid: List[Dict[str, Any]] = []
        invalid: List[ValidationResult] = []
        for record in records:
            result = self.validate_schema(record, schema_class)
            if result.is_valid:
                valid.append(record)
            else:
                invalid.append(result)
        return valid, invalid


# 全局验证器实例
schema_validator = SchemaValidator()


def validate_schema(data: Dict[str, Any], schema_class: Type[BaseSchema]) -> ValidationResult:
    """便捷函数：验证Schema"""
    return schema_validator.validate_schema(data, schema_class)


__all__ = ["ValidationResult", "SchemaValidator", "schema_validator", "validate_schema"]
