"""Settings and JSON input models.

All numeric defaults live here. Input documents read by the CLI are validated
by the models below before they reach the numerical modules.
"""

import json
from pathlib import Path
from typing import Annotated, Any, Literal

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, model_validator


def _as_pair(value: Any) -> Any:
    """Accept a bare real number wherever an [re, im] pair is expected."""
    if isinstance(value, int | float) and not isinstance(value, bool):
        return (float(value), 0.0)
    return value


ComplexPair = Annotated[tuple[float, float], BeforeValidator(_as_pair)]


def to_complex(pair: tuple[float, float]) -> complex:
    return complex(pair[0], pair[1])


def from_complex(value: complex) -> list[float]:
    return [float(value.real), float(value.imag)]


class Tolerances(BaseModel):
    """Numerical thresholds shared across modules."""

    model_config = ConfigDict(frozen=True)

    reality: float = Field(default=1e-8, gt=0)
    root_polish: float = Field(default=1e-10, gt=0)
    rank: float = Field(default=1e-10, gt=0)
    dedup_radius: float = Field(default=1e-6, gt=0)
    forward_residual: float = Field(default=1e-10, gt=0)
    boundary_band: float = Field(default=1e-6, gt=0)
    rank_one: float = Field(default=1e-9, gt=0)
    pairing: float = Field(default=1e-7, gt=0)
    valuation: float = Field(default=1e-10, gt=0)
    symmetry: float = Field(default=1e-10, gt=0)


class SolverConfig(BaseModel):
    """Multistart Newton settings for the inverse Wronski solver.

    Attributes:
        starts: Number of random starting points.
        seed: Base seed; start k draws from default_rng([seed, k]).
        max_iterations: Damped Newton iterations per start.
        polish_iterations: Undamped iterations applied after convergence.
        max_solutions: Stop early once this many distinct solutions are found.
    """

    model_config = ConfigDict(frozen=True)

    starts: int = Field(default=200, ge=1)
    seed: int = 0
    max_iterations: int = Field(default=80, ge=0)
    polish_iterations: int = Field(default=8, ge=0)
    max_solutions: int | None = Field(default=None, ge=1)


class DualityConvention(BaseModel):
    """Frozen reading of the bispectral dual substitution x^i(x∂)^j -> x^j e^{-i∂}.

    The defaults are the result of quasipoly.calibrate_convention: the shift
    runs forward (e^{+i∂}), coefficients stay left of the shift, and the
    discrete Wronskian of the dual kernel equals Y_V(x - 1).
    """

    model_config = ConfigDict(frozen=True)

    shift: Literal["plus", "minus"] = "plus"
    ordering: Literal["coefficient_left", "shift_left"] = "coefficient_left"
    y_shift: int = 1


class Settings(BaseModel):
    model_config = ConfigDict(frozen=True)

    tolerances: Tolerances = Field(default_factory=Tolerances)
    solver: SolverConfig = Field(default_factory=SolverConfig)
    duality: DualityConvention = Field(default_factory=DualityConvention)


DEFAULT_SETTINGS = Settings()


def load_settings(path: Path | None = None) -> Settings:
    """Load settings from a JSON file, falling back to defaults.

    Args:
        path: Optional JSON file with any subset of the Settings fields.

    Returns:
        Validated, frozen Settings.
    """
    if path is None:
        return DEFAULT_SETTINGS
    return Settings.model_validate(json.loads(path.read_text()))


# --- input documents -------------------------------------------------------


class MemberModel(BaseModel):
    base: ComplexPair | None = None
    exponent: ComplexPair | None = None
    poly: list[ComplexPair]


class QuasiExpSpaceModel(BaseModel):
    mode: Literal["multiplicative", "exponent"]
    members: list[MemberModel] = Field(min_length=1)

    @model_validator(mode="after")
    def _check_member_keys(self) -> "QuasiExpSpaceModel":
        key = "base" if self.mode == "multiplicative" else "exponent"
        for k, member in enumerate(self.members):
            if getattr(member, key) is None:
                raise ValueError(f"member {k} needs '{key}' in {self.mode} mode")
        return self


class QuasiPolyMemberModel(BaseModel):
    exponent: float
    poly: list[ComplexPair]


class QuasiPolySpaceModel(BaseModel):
    members: list[QuasiPolyMemberModel] = Field(min_length=1)


class TableEntryModel(BaseModel):
    i: int = Field(ge=0)
    j: int = Field(ge=0)
    c: ComplexPair


class InverseProblemModel(BaseModel):
    mode: Literal["discrete", "differential"]
    targets: list[ComplexPair]
    sites: list[ComplexPair]
    degrees: list[int]

    @model_validator(mode="after")
    def _check_lengths(self) -> "InverseProblemModel":
        if len(self.sites) != len(self.degrees):
            raise ValueError("sites and degrees must have equal length")
        return self


class StructuredParamsModel(BaseModel):
    kind: Literal["zd", "z", "qd"]
    sites: list[ComplexPair] = Field(min_length=1)
    weights: list[ComplexPair]

    @model_validator(mode="after")
    def _check_lengths(self) -> "StructuredParamsModel":
        if len(self.sites) != len(self.weights):
            raise ValueError("sites and weights must have equal length")
        return self


class CMPairModel(BaseModel):
    mode: Literal["multiplicative", "additive"]
    Z: list[list[ComplexPair]]
    Q: list[list[ComplexPair]]


class BetheConfigModel(BaseModel):
    N: int = Field(ge=1)
    n: int = Field(ge=1)
    z: list[float]
    Q: list[float]
    s: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def _check_shape(self) -> "BetheConfigModel":
        if len(self.z) != self.n:
            raise ValueError(f"expected {self.n} evaluation parameters, got {len(self.z)}")
        if len(self.Q) != self.N:
            raise ValueError(f"expected {self.N} twist values, got {len(self.Q)}")
        if self.s > self.n:
            raise ValueError("s must not exceed n")
        return self
