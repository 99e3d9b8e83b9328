from enum import Enum

from pydantic import BaseModel, Field, field_validator

from src.config import E8_NODES, PipelineConfig
from src.lattice.root_systems import GaugeGroupReport


# --- Enums ---
class IsometryReading(str, Enum):
    EXTENDED = "extended"  # +-Id on the E8 blocks for perturbed periods
    BLOCKWISE = "blockwise"  # identity on both E8 blocks


class MonodromyKind(str, Enum):
    TRIVIAL = "trivial"
    FLIP = "flip"


# --- Value Objects ---
class CheckResult(BaseModel):
    name: str
    passed: bool
    witness: str | None = None

    @classmethod
    def of(cls, name: str, passed: bool, witness: object = None) -> "CheckResult":
        """Keeps the witness only for failed checks."""
        return cls(name=name, passed=passed, witness=None if passed or witness is None else str(witness))


class SingularityEntry(BaseModel):
    block: str
    label: str
    rank: int
    nodes: list[int] = Field(default_factory=list)


class BettiReport(BaseModel):
    b2: int
    b3: int
    b1N: int
    invariant_h2: int
    beta_invariant_h2: int
    extended_invariant_h2: int | None = None
    methods_agree: bool = True


class FlatComparison(BaseModel):
    """Verdict of the flat model C^2 / Z_n x T^3 matching an A_(n-1) component."""

    n: int
    exponent_multipliers: dict[str, int]
    monodromy: MonodromyKind
    folded_label: str | None = None
    flat_model_valid: bool
    agrees: bool


class MonodromyEntry(BaseModel):
    block: str
    label: str
    reading: IsometryReading
    diagram_automorphisms: list[list[int]]
    kind: MonodromyKind
    folded_label: str | None = None
    flat_model: FlatComparison | None = None


class Conventions(BaseModel):
    numbering: str = "Bourbaki: 1-3-4-5-6-7-8 chain, node 2 attached to node 4"
    volume_normalization: str = (
        "vol_S = e^4567; the self-dual basis satisfies w^i ^ w^j = 2 delta_ij vol_S"
    )
    period_scaling: str = (
        "x2, x3 carry the squared scale l/4 so that effective norms agree; "
        "rescaling x by l/4 itself would give norm l^2/4"
    )
    isometry_reading: IsometryReading = IsometryReading.EXTENDED
    notes: list[str] = Field(default_factory=list)


class FieldContent(BaseModel):
    abelian_vector_multiplets: int
    nonabelian_factors: list[str]
    chiral_multiplets: int


class HolonomyReport(BaseModel):
    kind: int
    rotation_group_order: int
    structure: str
    label: str
    invariant_line: bool


# --- Reports ---
class OrbifoldReport(BaseModel):
    schema_version: str = PipelineConfig.REPORT_SCHEMA_VERSION
    kind: int
    keep1: list[int]
    keep2: list[int]
    singularities: list[SingularityEntry]
    gauge_group: GaugeGroupReport
    betti: BettiReport
    smooth: bool
    singular_points: int
    monodromy: list[MonodromyEntry]
    checks: list[CheckResult]
    conventions: Conventions = Field(default_factory=Conventions)
    field_content: FieldContent | None = None
    holonomy: HolonomyReport | None = None

    @property
    def valid(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed_checks(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def connected_labels(self) -> list[str]:
        return sorted(s.label for s in self.singularities)


class FlatModelReport(BaseModel):
    schema_version: str = PipelineConfig.REPORT_SCHEMA_VERSION
    kind: int
    n: int
    gamma_label: str
    gamma_order: int
    torus_group_order: int
    torus_group_abelian: bool
    torus_element_orders: list[int]
    exponent_multipliers: dict[str, int]
    monodromy: MonodromyKind
    folded_label: str | None = None
    checks: list[CheckResult]
    notes: list[str] = Field(default_factory=list)

    @property
    def valid(self) -> bool:
        return all(c.passed for c in self.checks)


class AcceptanceReport(BaseModel):
    schema_version: str = PipelineConfig.REPORT_SCHEMA_VERSION
    criteria: list[CheckResult]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.criteria)


# --- Requests ---
class BuildOptions(BaseModel):
    crosscheck: bool = PipelineConfig.CROSSCHECK
    flat_comparison: bool = False


class BuildRequest(BaseModel):
    kind: int
    keep1: list[int] = Field(default_factory=list)
    keep2: list[int] = Field(default_factory=list)
    options: BuildOptions = Field(default_factory=BuildOptions)

    @field_validator("kind")
    @classmethod
    def _known_kind(cls, value: int) -> int:
        if value not in (1, 2):
            raise ValueError(f"kind must be 1 or 2, got {value}")
        return value

    @field_validator("keep1", "keep2")
    @classmethod
    def _bourbaki_nodes(cls, value: list[int]) -> list[int]:
        unknown = sorted(set(value) - set(E8_NODES))
        if unknown:
            raise ValueError(f"unknown E8 nodes {unknown}; nodes are numbered 1..8")
        if len(set(value)) != len(value):
            raise ValueError(f"repeated nodes in {value}")
        return sorted(value)
