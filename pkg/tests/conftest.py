import numpy as np
import pytest

from cfomimo import (CfoPrior, build_stats, generate_periodic_pilot,
                     generate_td_pilot, make_model)


def random_case(rng, l_t_max=2, l_r_max=2, n_max=12, allow_frozen=True):
    """One random (pilot, model, stats, prior) configuration for property tests."""
    l_t = int(rng.integers(1, l_t_max + 1))
    l_r = int(rng.integers(1, l_r_max + 1))
    m = int(rng.integers(2, max(3, n_max // l_t) + 1))
    scrambling = np.exp(2j * np.pi * rng.random(l_t * m))
    maker = generate_periodic_pilot if rng.random() < 0.5 else generate_td_pilot
    pilot = maker(l_t, m, rho=float(rng.uniform(0.5, 5.0)), scrambling=scrambling)
    rho_h = float(rng.uniform(0.0, 1.0 if allow_frozen else 0.999))
    model = make_model(
        l_t, l_r, rho_h,
        spatial="exponential" if rng.random() < 0.5 else "iid",
        spatial_a=float(rng.uniform(0.1, 0.9)),
        spatial_b=float(rng.uniform(0.1, 0.9)),
        sigma_h_sq=float(rng.uniform(0.5, 2.0)),
        mean="rician" if rng.random() < 0.5 else "zero",
        rician_k=float(rng.uniform(0.2, 3.0)))
    stats = build_stats(model, pilot.n)
    if rng.random() < 0.25:
        prior = CfoPrior.ml(float(rng.uniform(-0.2, 0.2)))
    else:
        prior = CfoPrior(float(rng.uniform(-0.2, 0.2)),
                         float(rng.uniform(1e-6, 1e-2)))
    return pilot, model, stats, prior


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
