import math
import os
from pathlib import Path

import numpy as np
import pytest

from zscrew import mangoldt as mg
from zscrew import moments as mo
from zscrew import report as rp
from zscrew import zerotable as zt

DATA_DIR = Path(__file__).resolve().parent.parent / "data"
ZEROS_PATH = os.environ.get("ZSCREW_ZEROS", str(DATA_DIR / "zeros_100k.txt"))


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "bigmem: needs the large sieve tier (memory-gated)")


@pytest.fixture(scope="session")
def zeros_path():
    if not os.path.exists(ZEROS_PATH):
        pytest.skip("zeros dataset not present: %s" % ZEROS_PATH)
    return ZEROS_PATH


@pytest.fixture(scope="session")
def zeros_table(zeros_path):
    return zt.load_zeros(zeros_path, 100_000)


@pytest.fixture(scope="session")
def tail(zeros_table):
    return zt.TailModel.for_table(zeros_table)


@pytest.fixture(scope="session")
def mang_small():
    return mg.build_table(10**6)


@pytest.fixture(scope="session")
def mang(zeros_path):
    return mg.build_table(10**7)


@pytest.fixture(scope="session")
def psi(mang):
    return mg.PsiPrime(mang)


@pytest.fixture(scope="session")
def datasets(mang, zeros_table):
    return rp.Datasets(mang=mang, zeros=zeros_table)


@pytest.fixture(scope="session")
def moment_seq(psi, zeros_table):
    hyb = mo.HybridPsi(psi, zeros_table)
    return mo.moment_sequence(hyb, 12, t_cut=60.0)


def _big_limit():
    import psutil

    avail = psutil.virtual_memory().available
    if avail >= 3.9e9:
        return 2**31
    if avail >= 1.3e9:
        return 500_000_000
    return 0


@pytest.fixture(scope="session")
def big_mang():
    limit = _big_limit()
    if limit == 0:
        pytest.skip("not enough memory for the large sieve tier")
    if limit < math.exp(20):
        pytest.skip("large tier below e^20; asymptotic check not meaningful")
    return mg.build_table(limit)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20260810)
