"""Acceptance criteria at their stated sizes and tolerances.

Each test prints one PASS/FAIL line (with its runtime) and then asserts
both the outcome and the time budget. ``python tests/test_acceptance.py``
prints the same lines without pytest.
"""

import random
import sys

import pytest

from openchain import verify
from openchain.chain import BoundaryParams

SEED = 20240611

CRITERIA = {
    1: ("exact steady state, four routes, N=1..6, 25 rate sets", 60,
        lambda rng: verify.check_steady_routes(range(1, 7), 25, rng)),
    2: ("transformed reference eigen-equations, N<=6, 5 points", 30,
        lambda rng: verify.check_transformed_reference(range(1, 7), 5, rng)),
    3: ("resolvent = limit = closed form at m=N, N<=6", 30,
        lambda rng: verify.check_map_consistency(range(1, 7), rng)),
    4: ("generic-m float map, N=4,6, tol 1e-10", 60,
        lambda rng: verify.check_generic_map([4, 6], BoundaryParams(0.3, 0.7, 0.9), 0.37, 0.61, 1e-10)),
    5: ("Hasse closed = paths = recursion, N<=5 plus 100 at N=8", 30,
        lambda rng: verify.check_hasse(5, 8, 100, 6, 10, rng)),
    6: ("structural identities, N<=5", 60,
        lambda rng: verify.check_structural(range(1, 6), 2, rng)),
    7: ("closed-form observables, N<=6", 10,
        lambda rng: verify.check_observables(range(1, 7), 2, rng)),
    8: ("Bethe/TQ coherence, N=2,3, tol 1e-12/1e-8/1e-10", 60,
        lambda rng: verify.check_bethe([2, 3], 2, [(0.5, 0.5), (0.3, 0.7)], 0.37, 1e-12, 1e-8, 1e-10)),
    9: ("generator spectrum from triangular spectrum, N<=6, tol 1e-10", 30,
        lambda rng: verify.check_spectrum_map(range(1, 7), 3, rng, 1e-10)),
}


def run_criterion(k: int):
    label, budget, fn = CRITERIA[k]
    result = fn(random.Random(SEED + k))
    ok = result.passed and result.seconds < budget
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {k}: {label} | {result.line()} | budget {budget}s"
    return result, budget, line


@pytest.mark.parametrize("k", sorted(CRITERIA))
def test_criterion(k, capsys):
    result, budget, line = run_criterion(k)
    with capsys.disabled():
        print("\n" + line)
    assert result.passed, result.failures
    assert result.seconds < budget


if __name__ == "__main__":
    lines = [run_criterion(k)[2] for k in sorted(CRITERIA)]
    print("\n".join(lines))
    sys.exit(0 if all(l.startswith("[PASS]") for l in lines) else 1)
