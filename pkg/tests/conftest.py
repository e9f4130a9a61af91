import pytest

from tlfnoise.ensemble import EnsembleDist
from tlfnoise.units import KELVIN_TO_ANGFREQ, BathSpec, Temperature, make_tlf_kelvin, kelvin_to_omega


# Single-TLF reference point: omega_t = 80 mK, eps = 0, k_B^2 J0 sin^2 = 6.25 K^-2.
@pytest.fixture
def fig2_tlf():
    return make_tlf_kelvin(0.0, 0.08)


@pytest.fixture
def fig2_bath(fig2_tlf):
    return BathSpec(6.25 / KELVIN_TO_ANGFREQ**2 / fig2_tlf.sin2, kelvin_to_omega(470.0))


@pytest.fixture
def t40():
    return Temperature(0.04)


# Ensemble reference point.
@pytest.fixture
def ens_bath():
    return BathSpec(0.047, kelvin_to_omega(470.0))


@pytest.fixture
def t10():
    return Temperature(0.01)


@pytest.fixture(params=[0, 1], ids=["alpha0", "alpha1"])
def dist(request):
    return EnsembleDist.from_kelvin(request.param)


_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture(scope="session")
def acceptance_log(request):
    return request.config.stash.setdefault(_ACCEPTANCE, [])


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
