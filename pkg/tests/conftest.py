import numpy as np
import pytest

from nuevolve import (
    CoefficientSet,
    ConstantProfile,
    SinusoidProfile,
    build_su2_rep,
    build_su11_boson_rep,
)


@pytest.fixture(scope="session")
def su2_half():
    return build_su2_rep(0.5)


@pytest.fixture(scope="session")
def su2_one():
    return build_su2_rep(1.0)


@pytest.fixture(scope="session")
def su11_40():
    return build_su11_boson_rep(40)


@pytest.fixture(scope="session")
def su11_30():
    return build_su11_boson_rep(30)


def constant_coeffs(omega, alpha, beta) -> CoefficientSet:
    return CoefficientSet(
        omega=ConstantProfile(complex(omega)),
        alpha=ConstantProfile(complex(alpha)),
        beta=ConstantProfile(complex(beta)),
    )


@pytest.fixture(scope="session")
def swanson_coeffs():
    """Constant quadratic-boson scenario: omega=1, alpha=beta=0.2 (D=-2)."""
    return constant_coeffs(1.0, 0.2, 0.2)


@pytest.fixture(scope="session")
def su2_drive_coeffs():
    """Driven spin scenario: omega = 1 + 0.1 sin t, alpha = beta = 0.05 (D=+2)."""
    return CoefficientSet(
        omega=SinusoidProfile(amplitude=0.1, frequency=1.0, offset=1.0),
        alpha=ConstantProfile(0.05),
        beta=ConstantProfile(0.05),
    )


@pytest.fixture()
def rng():
    return np.random.default_rng(20240809)
