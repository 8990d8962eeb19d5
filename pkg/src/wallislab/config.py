"""
Runtime settings read from the environment
"""

import logging
import os
from typing import Dict, Mapping, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .exceptions import DomainError

# Environment variable -> Settings field
ENV_VARS: Dict[str, str] = {
    "WALLISLAB_MAX_EVALS": "max_evals",
    "WALLISLAB_WORKING_DPS": "working_dps",
    "WALLISLAB_LOG_LEVEL": "log_level",
    "WALLISLAB_ENCLOSURE_DIGITS": "enclosure_digits",
}


class Settings(BaseModel):
    """Knobs shared by the quadrature engine, the checkers and the CLI."""

    model_config = ConfigDict(frozen=True)

    max_evals: int = Field(500_000, gt=0, description="Integrand evaluations per integrate call")
    working_dps: int = Field(40, ge=30, le=200, description="Quadrature working precision")
    log_level: str = Field("WARNING", pattern=r"^(DEBUG|INFO|WARNING|ERROR|CRITICAL)$")
    enclosure_digits: int = Field(20, ge=1, le=1000, description="Starting pi enclosure digits")
    max_escalations: int = Field(4, ge=0, le=8)

    @property
    def log_level_value(self) -> int:
        return logging.getLevelName(self.log_level)


def get_settings(environ: Optional[Mapping[str, str]] = None) -> Settings:
    """
    Build Settings from environment variables.

    Args:
        environ: Mapping to read instead of ``os.environ``

    Returns:
        Validated settings

    Raises:
        DomainError: if a variable holds an invalid value
    """
    env = os.environ if environ is None else environ
    values = {}
    for var, field_name in ENV_VARS.items():
        raw = env.get(var)
        if raw is not None and raw.strip():
            values[field_name] = raw.strip().upper() if field_name == "log_level" else raw.strip()

    try:
        return Settings(**values)
    except ValidationError as e:
        bad = ", ".join(
            next(var for var, name in ENV_VARS.items() if name == err["loc"][0])
            for err in e.errors()
        )
        raise DomainError(f"invalid value in environment variable(s): {bad}") from e
