"""Shared fixtures: the standard potential setup and the expensive runs.

The experiment reports are session-scoped so that the acceptance tests and
the structural tests consume the same objects instead of repeating
multi-minute simulations.
"""

import pytest

from frontlab.verify import build_setup, default_suite, run_comoving_trace, run_experiment

SUITE = {s.name: s for s in default_suite()}


@pytest.fixture(scope="session")
def setup():
    return build_setup(SUITE["wave_oracle"].potential)


@pytest.fixture(scope="session")
def potential(setup):
    return setup.potential


@pytest.fixture(scope="session")
def band(setup):
    return setup.band


@pytest.fixture(scope="session")
def consts(setup):
    return setup.consts


@pytest.fixture(scope="session")
def wave(setup):
    return setup.wave


@pytest.fixture(scope="session")
def wave_eps(setup):
    return setup.wave_eps


@pytest.fixture(scope="session")
def short_run(setup):
    """Cheap comoving step run (frame 0.4, T = 8) for module-level tests."""
    from dataclasses import replace

    spec = replace(SUITE["inequalities_c04"], name="short_run", T=8.0)
    return run_comoving_trace(spec, setup)


@pytest.fixture(scope="session")
def report_wave_oracle():
    return run_experiment(SUITE["wave_oracle"])


@pytest.fixture(scope="session")
def report_energy_identities():
    return run_experiment(SUITE["energy_identities"])


@pytest.fixture(scope="session")
def report_ineq_c04():
    return run_experiment(SUITE["inequalities_c04"])


@pytest.fixture(scope="session")
def report_ineq_c03():
    return run_experiment(SUITE["inequalities_c03"])


@pytest.fixture(scope="session")
def report_refinement():
    return run_experiment(SUITE["lyapunov_refinement"])


@pytest.fixture(scope="session")
def report_convergence_step():
    return run_experiment(SUITE["convergence_step"])


@pytest.fixture(scope="session")
def report_convergence_overshoot():
    return run_experiment(SUITE["convergence_overshoot"])


@pytest.fixture(scope="session")
def report_dichotomy():
    return run_experiment(SUITE["energy_dichotomy"])


@pytest.fixture(scope="session")
def report_repair():
    return run_experiment(SUITE["repair"])


def claims_by_name(report):
    """Map base claim name -> list of ClaimReports (qualifiers stripped)."""
    out = {}
    for c in report.claims:
        base = c.claim.split("[", 1)[0]
        out.setdefault(base, []).append(c)
    return out
