import math

import numpy as np
import pytest

from catpump.device import DerivedParams


def make_derived(eps2: complex, kappa_2: float, kappa_r: float = 4e7,
                 alpha_phase: float | None = None) -> DerivedParams:
    """Internally consistent DerivedParams for semiclassical tests."""
    g2 = math.sqrt(kappa_2 * kappa_r) / 2.0
    eps_d = eps2 * kappa_r / (-2j * g2) if g2 else 0j
    alpha_mag = math.sqrt(2.0 * abs(eps2) / kappa_2) if kappa_2 > 0 else 0.0
    alpha = alpha_mag * np.exp(1j * (alpha_phase or 0.0))
    xi_p = 1.0 if g2 else 0.0
    return DerivedParams(
        xi_p=xi_p, g2=complex(g2), eps2=complex(eps2), kappa_2=kappa_2,
        alpha_inf=complex(alpha), delta_d=0.0, delta_p=0.0,
        stark_q=0.0, stark_r=0.0, stark_s=0.0,
        eps_d=complex(eps_d), kappa_r=kappa_r)


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
