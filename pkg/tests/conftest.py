import pytest

from qacm.cli import ScanConfig, run_classify


@pytest.fixture(scope="session")
def classify_report():
    """The desk-scale classification scan, computed once per session."""
    return run_classify(ScanConfig(c_max=6, point_seed=0, timestamp=False))
