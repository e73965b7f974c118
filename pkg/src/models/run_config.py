"""Validated configuration of one CLI invocation."""

from enum import Enum

from pydantic import BaseModel, Field, field_validator, model_validator

from src.config import settings
from src.models.schemes import CFL_MAX, AcousticSchemeId, CaseId, FluxVariant, MaxwellSchemeId

EULER = "euler"


class Subcommand(Enum):
    RUN = "run"
    STABILITY = "stability"
    CONVERGENCE = "convergence"
    LOWMACH = "lowmach"
    CASES = "cases"


class Family(Enum):
    MAXWELL = "maxwell"
    ACOUSTICS = "acoustics"
    EULER = "euler"


class RunConfig(BaseModel):
    subcommand: Subcommand = Subcommand.RUN
    family: Family | None = Field(None, description="Equation family; inferred from the scheme")
    scheme: str | None = Field(None, description="Maxwell/acoustic scheme id or 'euler'")
    case: CaseId | None = None
    variant: FluxVariant = FluxVariant.EXTENDED

    # Grid and time
    nx: int | None = None
    ny: int | None = None
    cfl: float | None = None
    t_end: float | None = None
    gamma: float = Field(default_factory=lambda: settings.gamma)
    mach: list[float] = Field(default_factory=list, description="Vortex Mach numbers")

    # Output
    out: str = Field(default_factory=lambda: settings.output_dir)
    snapshots: int = Field(0, description="Intermediate snapshots per run; 0 = final state only")

    # Sweeps
    beta_samples: int = Field(default_factory=lambda: settings.beta_samples)
    levels: list[int] | None = Field(None, description="Refinement levels of a study")
    threads: int = 1
    full_scale: bool = False

    @field_validator("nx", "ny")
    @classmethod
    def _grid_size(cls, v: int | None) -> int | None:
        if v is not None and v < 2:
            raise ValueError(f"grid sizes must be >= 2, got {v}")
        return v

    @field_validator("cfl")
    @classmethod
    def _positive_cfl(cls, v: float | None) -> float | None:
        if v is not None and v <= 0:
            raise ValueError(f"cfl must be > 0, got {v}")
        return v

    @field_validator("t_end")
    @classmethod
    def _non_negative_time(cls, v: float | None) -> float | None:
        if v is not None and v < 0:
            raise ValueError(f"t_end must be >= 0, got {v}")
        return v

    @field_validator("threads")
    @classmethod
    def _threads(cls, v: int) -> int:
        if v < 1:
            raise ValueError(f"threads must be >= 1, got {v}")
        return v

    @field_validator("snapshots")
    @classmethod
    def _snapshots(cls, v: int) -> int:
        if v < 0:
            raise ValueError(f"snapshots must be >= 0, got {v}")
        return v

    @field_validator("beta_samples")
    @classmethod
    def _beta_samples(cls, v: int) -> int:
        if v < settings.min_beta_samples:
            raise ValueError(f"beta_samples must be >= {settings.min_beta_samples}, got {v}")
        return v

    @field_validator("mach")
    @classmethod
    def _mach(cls, v: list[float]) -> list[float]:
        if any(m <= 0 for m in v):
            raise ValueError(f"Mach numbers must be > 0, got {v}")
        return v

    @field_validator("levels")
    @classmethod
    def _levels(cls, v: list[int] | None) -> list[int] | None:
        if v is not None and (len(v) < 3 or any(n < 2 for n in v)):
            raise ValueError(f"need >= 3 refinement levels of >= 2 cells, got {v}")
        return v

    @model_validator(mode="after")
    def _resolve_scheme(self) -> "RunConfig":
        if self.scheme is None and self.case is not None:
            self.scheme = EULER
        if self.scheme is None:
            return self
        known = {s.value for s in MaxwellSchemeId} | {EULER}
        if self.scheme not in known:
            raise ValueError(f"unknown scheme {self.scheme!r}; expected one of {sorted(known)}")
        if self.family is None:
            self.family = Family.EULER if self.scheme == EULER else Family.MAXWELL
        if self.family is Family.ACOUSTICS:
            AcousticSchemeId(self.scheme)  # raises ValueError for schemes without an acoustic twin
        elif (self.family is Family.EULER) != (self.scheme == EULER):
            raise ValueError(
                f"scheme {self.scheme!r} does not belong to family {self.family.value}"
            )
        return self

    @property
    def maxwell_scheme(self) -> MaxwellSchemeId:
        if self.scheme is None or self.scheme == EULER:
            raise ValueError(f"{self.scheme!r} is not a Maxwell scheme")
        return MaxwellSchemeId(self.scheme)

    @property
    def acoustic_scheme(self) -> AcousticSchemeId:
        return AcousticSchemeId(self.maxwell_scheme.value)

    def effective_cfl(self, case_cfl: float | None = None) -> float:
        """Explicit cfl, else the case default, else cfl_safety x the scheme's CFL_max."""
        if self.cfl is not None:
            return self.cfl
        if self.scheme == EULER or self.scheme is None:
            if case_cfl is None:
                raise ValueError("Euler runs need a cfl or a case providing one")
            return case_cfl
        return settings.cfl_safety * CFL_MAX[self.maxwell_scheme]

    def echo(self) -> list[tuple[str, str]]:
        """key=value pairs of the explicitly relevant settings, in field order."""
        pairs: list[tuple[str, str]] = []
        for name, value in self.model_dump(mode="json").items():
            if value is None or value == []:
                continue
            if isinstance(value, bool):
                value = str(value).lower()
            elif isinstance(value, list):
                value = ",".join(str(v) for v in value)
            pairs.append((name, str(value)))
        return pairs
