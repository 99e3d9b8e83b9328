"""
Representative keep sets for every connected subdiagram type of E8, and the
catalog of orbifolds built from them.
"""

from itertools import combinations

from src.config import E8_BOURBAKI_EDGES, E8_NODES, OrbifoldKind
from src.lattice.lattices import IntegerLattice
from src.lattice.root_systems import shape_label
from src.orbifold.domain.models import BuildRequest, CheckResult, OrbifoldReport
from src.orbifold.domain.pipeline import run
from src.shared.telemetry import Telemetry

_telemetry = Telemetry("Catalog")

SMOOTH_LABEL = "0"

# Bourbaki nodes; 1-3-4-5-6-7-8 is the long chain, 2 hangs off 4.
REPRESENTATIVE_KEEP_SETS: dict[str, tuple[int, ...]] = {
    SMOOTH_LABEL: (),
    "A1": (1,),
    "A2": (1, 3),
    "A3": (1, 3, 4),
    "A4": (1, 3, 4, 5),
    "A5": (1, 3, 4, 5, 6),
    "A6": (1, 3, 4, 5, 6, 7),
    "A7": (1, 3, 4, 5, 6, 7, 8),
    "D4": (2, 3, 4, 5),
    "D5": (2, 3, 4, 5, 6),
    "D6": (2, 3, 4, 5, 6, 7),
    "D7": (2, 3, 4, 5, 6, 7, 8),
    "E6": (1, 2, 3, 4, 5, 6),
    "E7": (1, 2, 3, 4, 5, 6, 7),
    "E8": E8_NODES,
}

EXPECTED_CONNECTED_LABELS = frozenset(REPRESENTATIVE_KEEP_SETS)

# Pairs of labels, one per (-E8) block, beyond the diagonal ones.
_MIXED_ENTRIES: tuple[tuple[str, str], ...] = (
    (SMOOTH_LABEL, "E8"),
    ("A1", SMOOTH_LABEL),
    ("A2", "D4"),
    ("E7", "A1"),
    ("D5", "A3"),
)


def catalog_entries() -> list[tuple[str, str]]:
    diagonal = [(label, label) for label in REPRESENTATIVE_KEEP_SETS]
    return diagonal + list(_MIXED_ENTRIES)


def catalog(kind: OrbifoldKind, lattice: IntegerLattice) -> list[OrbifoldReport]:
    reports = []
    for first, second in catalog_entries():
        request = BuildRequest(
            kind=kind.number,
            keep1=list(REPRESENTATIVE_KEEP_SETS[first]),
            keep2=list(REPRESENTATIVE_KEEP_SETS[second]),
        )
        reports.append(run(request, lattice))
    _telemetry.log_info("catalog_built", kind=kind.number, entries=len(reports))
    return reports


def realized_connected_labels(reports: list[OrbifoldReport]) -> set[str]:
    labels = {label for r in reports for label in r.connected_labels()}
    if any(not r.singularities for r in reports):
        labels.add(SMOOTH_LABEL)
    return labels


def catalog_completeness(reports: list[OrbifoldReport]) -> CheckResult:
    realized = realized_connected_labels(reports)
    return CheckResult.of(
        "catalog_complete",
        realized == EXPECTED_CONNECTED_LABELS,
        sorted(realized ^ EXPECTED_CONNECTED_LABELS),
    )


def connected_subdiagram_labels() -> set[str]:
    """Types of all connected node subsets of the E8 diagram, by exhaustive search."""
    adjacency: dict[int, set[int]] = {k: set() for k in E8_NODES}
    for a, b in E8_BOURBAKI_EDGES:
        adjacency[a].add(b)
        adjacency[b].add(a)
    labels: set[str] = set()
    for size in range(1, len(E8_NODES) + 1):
        for nodes in combinations(E8_NODES, size):
            chosen = set(nodes)
            if _connected(chosen, adjacency):
                labels.add(shape_label({k: adjacency[k] & chosen for k in nodes}))
    return labels


def _connected(nodes: set[int], adjacency: dict[int, set[int]]) -> bool:
    start = min(nodes)
    seen, stack = {start}, [start]
    while stack:
        for w in adjacency[stack.pop()] & nodes:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen == nodes
