"""
Base model for value types whose validators raise tensor-core errors.

pydantic reports every validator failure as a ValidationError. Constructing a
DomainModel directly re-raises the domain error the validator raised
(ShapeError, GeometryError, OneHotError, ...), so callers catch it by type.
model_validate and model_validate_json keep pydantic's ValidationError; they
are the paths that read untrusted input.
"""

from typing import Any

from pydantic import BaseModel, ValidationError


def domain_error(error: ValidationError) -> ValueError | None:
    """The ValueError subclass a validator raised, when that caused the failure."""
    for detail in error.errors():
        cause = detail.get("ctx", {}).get("error")
        if isinstance(cause, ValueError) and type(cause) is not ValueError:
            return cause
    return None


class DomainModel(BaseModel):
    def __init__(self, /, **data: Any) -> None:
        try:
            super().__init__(**data)
        except ValidationError as e:
            cause = domain_error(e)
            if cause is None:
                raise
            raise cause from None
