import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile(
    "default", max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

ROOT = Path(__file__).resolve().parents[1]
ALGEBRAS = ROOT / "algebras"


@pytest.fixture
def algebra_dir():
    return ALGEBRAS


def random_algebras(modes=("identity", "surjective", "nilpotent", "zero", "arbitrary"), lo=1, hi=4, field=None):
    """Hypothesis strategy drawing corpus algebras by seed."""
    from homlie.corpus import random_algebra
    from homlie.exactlin import QQ

    F = field or QQ

    def build(args):
        seed, mode = args
        return random_algebra(np.random.default_rng(seed), F, lo, hi, mode)[1]

    return st.tuples(st.integers(0, 10**6), st.sampled_from(modes)).map(build)
