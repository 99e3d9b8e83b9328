import pytest

from src.config import E8_NODES
from src.lattice.lattices import IntegerLattice, make_k3_lattice
from src.orbifold.domain.models import BuildRequest, OrbifoldReport
from src.orbifold.domain.periods import PeriodTriple, periods_for_keep_sets, standard_periods
from src.orbifold.domain.pipeline import run


@pytest.fixture(scope="session")
def k3() -> IntegerLattice:
    """
    One K3 lattice per test session.
    Block roots are cached per lattice instance, so sharing it keeps the
    E8 enumerations to one per block.
    """
    return make_k3_lattice()


@pytest.fixture(scope="session")
def standard(k3) -> PeriodTriple:
    return standard_periods(k3)


@pytest.fixture(scope="session")
def a2_periods(k3) -> PeriodTriple:
    """Perturbed periods keeping an A2 in the first block and nothing in the second."""
    return periods_for_keep_sets(k3, (1, 3), ())


@pytest.fixture(scope="session")
def standard_report(k3) -> OrbifoldReport:
    return run(BuildRequest(kind=1, keep1=list(E8_NODES), keep2=list(E8_NODES)), k3)
