import math
from enum import Enum


class MaxwellSchemeId(Enum):
    YEE_ORIGINAL = "yee"  # staggered original
    YEE_COLLOCATED = "yee-collocated"
    YEE_COLLOCATED_EXPLICIT = "yee-collocated-explicit"
    YEE_COLLOCATED_EXTENDED = "yee-collocated-extended"
    YEE_EXTENDED_STAGGERED = "yee-extended"  # B on nodes, E in cells
    CENTRAL = "central"
    CENTRAL_EXTENDED = "central-extended"
    UPWIND_SPLIT = "upwind"
    STAT_PRES_REFERENCE = "statpres"
    YEE_EXTENDED_3D = "yee-extended-3d"

    @property
    def is_sequential(self) -> bool:
        return self not in (MaxwellSchemeId.UPWIND_SPLIT, MaxwellSchemeId.STAT_PRES_REFERENCE)


class AcousticSchemeId(Enum):
    YEE_ORIGINAL = "yee"
    YEE_COLLOCATED_EXTENDED = "yee-collocated-extended"
    CENTRAL_EXTENDED = "central-extended"

    @property
    def maxwell(self) -> MaxwellSchemeId:
        return MaxwellSchemeId(self.value)


class FluxVariant(Enum):
    EXTENDED = "extended"  # multi-dimensional flux, low Mach compliant
    BASIC = "basic"  # edge-local divergence, comparison bed
    NO_DENOMINATOR = "no-denominator"


class CaseId(Enum):
    SOD = "sod"
    LAX = "lax"
    LEVEQUE = "leveque"
    GRESHO_VORTEX = "gresho"
    SMOOTH_VORTEX = "smooth-vortex"
    KELVIN_HELMHOLTZ = "kh"


# Stability limits of dt * c / dx with dx == dy.
CFL_MAX: dict[MaxwellSchemeId, float] = {
    MaxwellSchemeId.YEE_ORIGINAL: 1 / math.sqrt(2),
    MaxwellSchemeId.YEE_COLLOCATED: 1 / math.sqrt(2),
    MaxwellSchemeId.YEE_COLLOCATED_EXPLICIT: 1 / math.sqrt(2),
    MaxwellSchemeId.YEE_COLLOCATED_EXTENDED: 1.0,
    MaxwellSchemeId.YEE_EXTENDED_STAGGERED: 1.0,
    MaxwellSchemeId.CENTRAL: math.sqrt(2),
    MaxwellSchemeId.CENTRAL_EXTENDED: 2.0,
    MaxwellSchemeId.UPWIND_SPLIT: 0.5,
    MaxwellSchemeId.STAT_PRES_REFERENCE: 0.5,
    MaxwellSchemeId.YEE_EXTENDED_3D: 1.0,
}
