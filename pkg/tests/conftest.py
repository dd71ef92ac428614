import functools

import pytest

from phasepacf.models import ModelSpec, coeff_table
from phasepacf.phase import beta
from phasepacf.policy import TruncationPolicy

AR1 = ModelSpec(phi=(0.5,))
ARMA11 = ModelSpec(phi=(0.5,), theta=(0.4,))
MA1 = ModelSpec(theta=(0.5,))


@functools.lru_cache(maxsize=None)
def tables(spec: ModelSpec, n_max: int, policy: TruncationPolicy = TruncationPolicy()):
    """(CoeffTable, BetaTable) sized for the engines up to n_max; cached across tests."""
    ct = coeff_table(spec, policy.coeff_len(n_max, spec.d), gamma_len=n_max + 2)
    return ct, beta(ct, policy.beta_len(n_max) - 1, policy)


@pytest.fixture(scope="session")
def get_tables():
    return tables
