"""
Acceptance gate: the nine numbered checks with pinned tolerances.

Each test delegates to the corresponding selftest function (the same code
path the `rotwave selftest` command runs) and prints its one-line verdict.
"""

import pytest

from rotwave import selftest


def _run(number):
    res = selftest.CHECKS[number]()
    print(res.line())
    assert res.passed, res.detail


def test_criterion_1_eigenvalue_oracle():
    _run(1)


def test_criterion_2_propagator_isometry():
    _run(2)


def test_criterion_3_ode_oracle():
    _run(3)


def test_criterion_4_dispersive_decay():
    _run(4)


def test_criterion_5_kernel_projection():
    _run(5)


def test_criterion_6_qg_conservation():
    _run(6)


def test_criterion_7_energy_inequality():
    _run(7)


def test_criterion_8_singular_limit():
    _run(8)


def test_criterion_9_pressure_identities():
    _run(9)
