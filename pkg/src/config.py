import os
from enum import Enum
from fractions import Fraction
from typing import Final


class OrbifoldKind(Enum):
    # Enum Member = (number, generator names, group label)
    FIRST = (1, ("beta", "gamma"), "H1")
    SECOND = (2, ("beta_prime", "eta"), "H2")

    def __init__(self, number: int, generators: tuple[str, str], group_label: str):
        self.number = number
        self.generators = generators
        self.group_label = group_label

    @classmethod
    def from_number(cls, number: int) -> "OrbifoldKind":
        """Returns the kind for the CLI value 1 or 2."""
        for kind in cls:
            if kind.number == number:
                return kind
        raise ValueError(f"Unknown orbifold kind: {number}")


# Bourbaki numbering: 1-3-4-5-6-7-8 is a chain, node 2 hangs off node 4.
E8_BOURBAKI_EDGES: Final[tuple[tuple[int, int], ...]] = (
    (1, 3),
    (3, 4),
    (4, 5),
    (5, 6),
    (6, 7),
    (7, 8),
    (2, 4),
)

E8_NODES: Final[tuple[int, ...]] = (1, 2, 3, 4, 5, 6, 7, 8)


def _env_int(name: str, default: int) -> int:
    return int(os.getenv(name, str(default)))


class PipelineConfig:
    # --- Safety bounds ---
    SU2_CLOSURE_BOUND: int = _env_int("SU2_CLOSURE_BOUND", 240)
    TORUS_CLOSURE_BOUND: int = _env_int("TORUS_CLOSURE_BOUND", 64)

    # --- Generic orthogonal vector search ---
    ORTHOGONAL_SEARCH_HEIGHT: int = _env_int("ORTHOGONAL_SEARCH_HEIGHT", 3)
    ORTHOGONAL_SEARCH_MAX_HEIGHT: int = _env_int("ORTHOGONAL_SEARCH_MAX_HEIGHT", 6)

    # Coefficient height for candidate directions of invariant lines.
    INVARIANT_LINE_SEARCH_HEIGHT: int = _env_int("INVARIANT_LINE_SEARCH_HEIGHT", 3)

    # |u1.u1 + u2.u2| must stay below 4/9 so that no root outside the
    # E8 blocks becomes orthogonal to the perturbed periods.
    PERTURBATION_NORM_CAP: Final[Fraction] = Fraction(2, 5)

    # --- Verification ---
    FREENESS_GRID_DENOMINATOR: int = _env_int("FREENESS_GRID_DENOMINATOR", 8)
    CROSSCHECK: bool = os.getenv("ORBIFOLD_CROSSCHECK", "true").lower() in (
        "true",
        "1",
        "yes",
    )

    # --- Reports ---
    REPORT_SCHEMA_VERSION: Final[str] = "1.0"
    REPORT_DIR: str = os.getenv("REPORT_DIR", "reports")

    # --- Gauge theory ---
    # Rank of (-E8)^1 + (-E8)^2, the most the singularities can absorb.
    MAX_GAUGE_RANK: Final[int] = 16

    @staticmethod
    def flat_model_orders() -> list[int]:
        """Orders n of the cyclic flat models swept by verify-all."""
        return list(range(2, 9))
