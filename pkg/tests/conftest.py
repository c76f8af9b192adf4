import pytest

from welltime.packet import GaussianPacket, PacketSpectrum


class WrappedSpectrum(PacketSpectrum):
    """A Gaussian seen through the abstract interface only.

    Not a ``GaussianPacket`` instance, so the refraction routines take their
    generic quadrature path instead of the Gaussian kernels.
    """

    def __init__(self, packet: GaussianPacket):
        self._p = packet

    @property
    def k0(self):
        return self._p.k0

    def momentum_density(self, k):
        return self._p.momentum_density(k)

    def log_momentum_density(self, k):
        return self._p.log_momentum_density(k)

    def momentum_density_analytic(self, z):
        return self._p.momentum_density_analytic(z)

    def imag_axis_weight(self, k):
        return self._p.imag_axis_weight(k)

    def log_imag_axis_weight(self, k):
        return self._p.log_imag_axis_weight(k)

    def autocorrelation(self, zeta):
        return self._p.autocorrelation(zeta)

    def log_autocorrelation(self, zeta):
        return self._p.log_autocorrelation(zeta)

    def autocorrelation_even_derivative(self, j):
        return self._p.autocorrelation_even_derivative(j)

    @property
    def momentum_width(self):
        return self._p.momentum_width

    @property
    def autocorrelation_width(self):
        return self._p.autocorrelation_width


@pytest.fixture
def wrap():
    return WrappedSpectrum


ACCEPTANCE_LINES = {}


def record_acceptance(number: int, passed: bool, detail: str) -> None:
    line = "criterion %2d: %s  %s" % (number, "PASS" if passed else "FAIL", detail)
    ACCEPTANCE_LINES[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
