"""
Run configuration schema.

Config files are TOML with one table per concern:

    [model]        type = "classical" | "linear", n, alpha (+ alpha_imag) or matrix
    [field]        lambda, killing_rates
    [quadrature]   n
    [tolerances]   jet, quad
    [sampling]     count, seed
    suites = [...]
"""

import logging
import re
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from lcklab.config.settings import settings
from lcklab.core.base import SUITE_ORDER
from lcklab.core.exceptions import ConfigurationError
from lcklab.flows.quadrature import QuadratureRule

logger = logging.getLogger(__name__)

RECOMMENDED_MIN_QUADRATURE_N = 8


class ModelSpec(BaseModel):
    """Hopf model selection"""

    model_config = ConfigDict(extra="forbid")

    type: Literal["classical", "linear"] = "classical"
    n: int = Field(2, ge=2, le=4)
    alpha: float = Field(0.5, description="Real part of the scalar contraction")
    alpha_imag: float = 0.0
    matrix: Optional[List[List[float]]] = Field(None, description="Real 2n x 2n contraction for linear models")

    @model_validator(mode="after")
    def validate_contraction(self):
        """Scalar models need 0 < |alpha| < 1; linear models need a 2n x 2n matrix"""
        if self.type == "classical":
            if not 0.0 < abs(self.complex_alpha) < 1.0:
                raise ValueError(f"alpha must satisfy 0 < |alpha| < 1, got {self.complex_alpha}")
        else:
            size = 2 * self.n
            if self.matrix is None or len(self.matrix) != size or any(len(row) != size for row in self.matrix):
                raise ValueError(f"linear models need a {size}x{size} matrix")
        return self

    @property
    def complex_alpha(self) -> complex:
        return complex(self.alpha, self.alpha_imag)


class FieldSpec(BaseModel):
    """Homothety field A = (lambda / 2) E + diag(i r_j)"""

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    lam: float = Field(2.0, gt=0, alias="lambda")
    killing_rates: Optional[List[float]] = None


class QuadratureSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    n: int = Field(default_factory=lambda: settings.DEFAULT_QUADRATURE_N, ge=settings.MIN_QUADRATURE_N)

    @field_validator("n")
    @classmethod
    def warn_coarse(cls, v):
        """Coarse rules are allowed (negative controls) but flagged"""
        if v < RECOMMENDED_MIN_QUADRATURE_N:
            logger.warning(f"Quadrature with N={v} nodes is below {RECOMMENDED_MIN_QUADRATURE_N}; expect quadrature-limited failures")
        return v


class ToleranceSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    jet: float = Field(default_factory=lambda: settings.TOL_JET, gt=0)
    quad: float = Field(default_factory=lambda: settings.TOL_QUAD, gt=0)


class SamplingSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    count: int = Field(default_factory=lambda: settings.DEFAULT_SAMPLES, ge=1)
    seed: int = Field(default_factory=lambda: settings.DEFAULT_SEED)


class RunConfig(BaseModel):
    """A complete, validated run configuration"""

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    model: ModelSpec = Field(default_factory=ModelSpec)
    field: FieldSpec = Field(default_factory=FieldSpec)
    quadrature: QuadratureSpec = Field(default_factory=QuadratureSpec)
    tolerances: ToleranceSpec = Field(default_factory=ToleranceSpec)
    sampling: SamplingSpec = Field(default_factory=SamplingSpec)
    suites: List[str] = Field(default_factory=lambda: list(SUITE_ORDER))
    source: Optional[str] = Field(None, exclude=True)

    @field_validator("suites")
    @classmethod
    def validate_suites(cls, v):
        """Only known suite identifiers"""
        unknown = [name for name in v if name not in SUITE_ORDER]
        if unknown:
            raise ValueError(f"Unknown suites: {', '.join(unknown)}")
        return v

    @classmethod
    def from_toml(cls, path: str) -> "RunConfig":
        config_path = Path(path)
        if not config_path.is_file():
            raise ConfigurationError(f"Config file not found: {path}")
        text = config_path.read_text(encoding="utf-8")
        return cls.from_text(text, source=str(path))

    @classmethod
    def from_text(cls, text: str, source: Optional[str] = None) -> "RunConfig":
        """Parse and validate TOML text, mapping failures to ConfigurationError with line/field."""
        try:
            data = tomllib.loads(text)
        except tomllib.TOMLDecodeError as exc:
            match = re.search(r"line (\d+)", str(exc))
            raise ConfigurationError(f"Invalid TOML: {exc}", line=int(match.group(1)) if match else None) from exc
        return cls.from_mapping(data, text=text, source=source)

    @classmethod
    def from_mapping(cls, data: Dict[str, Any], text: str = "", source: Optional[str] = None) -> "RunConfig":
        try:
            config = cls.model_validate(data)
        except ValidationError as exc:
            error = exc.errors()[0]
            location = ".".join(str(part) for part in error["loc"])
            raise ConfigurationError(
                f"Invalid configuration at '{location}': {error['msg']}",
                field=location,
                line=_line_of(text, error["loc"]),
            ) from exc
        return config.model_copy(update={"source": source})

    def with_overrides(
        self,
        samples: Optional[int] = None,
        quadrature_n: Optional[int] = None,
        seed: Optional[int] = None,
        tol_jet: Optional[float] = None,
        tol_quad: Optional[float] = None,
    ) -> "RunConfig":
        """Apply CLI flags on top of the file values, revalidating the result."""
        data = self.model_dump(by_alias=True)
        if samples is not None:
            data["sampling"]["count"] = samples
        if seed is not None:
            data["sampling"]["seed"] = seed
        if quadrature_n is not None:
            data["quadrature"]["n"] = quadrature_n
        if tol_jet is not None:
            data["tolerances"]["jet"] = tol_jet
        if tol_quad is not None:
            data["tolerances"]["quad"] = tol_quad
        return RunConfig.from_mapping(data, source=self.source)

    def quadrature_rule(self) -> QuadratureRule:
        return QuadratureRule(self.quadrature.n)

    def echo(self) -> Dict[str, Any]:
        """Config as recorded in reports."""
        return self.model_dump(mode="json", by_alias=True)


def _line_of(text: str, loc) -> Optional[int]:
    """Line of the offending key inside its table, or of the table header itself."""
    keys = [part for part in loc if isinstance(part, str)]
    if not text or not keys:
        return None
    table, key = ".".join(keys[:-1]), keys[-1]
    assignment = re.compile(rf"^\s*{re.escape(key)}\s*=")
    header = re.compile(r"^\s*\[([^\[\]]+)\]\s*$")
    current = ""
    for number, line in enumerate(text.splitlines(), start=1):
        match = header.match(line)
        if match:
            current = match.group(1).strip()
            if current == ".".join(keys):
                return number
        elif current == table and assignment.match(line):
            return number
    return None
