import pytest

from mutascan.catalog import sample_catalog, sample_references
from mutascan.config import Config
from mutascan.pipeline import train_model
from mutascan.seqio import Sequence
from mutascan.variants import apply_variants

# small and quick; the catalog decides most verdicts in these tests anyway
FAST = Config(hidden=(8,), mse_goal=1e-3, max_epochs=20_000)


@pytest.fixture(scope="session")
def refs():
    return sample_references()


@pytest.fixture(scope="session")
def catalog():
    return sample_catalog()


@pytest.fixture(scope="session")
def fast_model(catalog, refs):
    net, report, _ = train_model(catalog, refs, FAST)
    assert report.goal_met
    return net


def plant(reference, variants, pid="patient"):
    return Sequence.dna(pid, apply_variants(reference.residues, variants))


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
