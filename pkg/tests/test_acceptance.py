"""Acceptance criteria: each test prints one PASS/FAIL line per criterion
(plus one per sub-check) and fails when any sub-check fails."""

import pytest

from pascal_adic import verify as V


def report(log, criterion, results):
    results = list(results)
    ok = all(r.passed for r in results)
    log(f"criterion {criterion:>2}: {'PASS' if ok else 'FAIL'}")
    for r in results:
        log("    " + r.line())
    failed = [f"{r.name}: {r.measured}" for r in results if not r.passed]
    assert not failed, "; ".join(failed)


def test_criterion_01_eigen_identity(acceptance_log):
    r = V._timed(1, "eigen identity, sizes up to 200", V.check_eigen_identity)
    r.passed &= r.seconds < 1.0
    report(acceptance_log, 1, [r])


def test_criterion_02_total_mass(acceptance_log):
    report(acceptance_log, 2, [V._timed(2, "total mass within 1e-12 by 60 terms", V.check_total_mass)])


def test_criterion_03_restriction_identity(acceptance_log):
    report(acceptance_log, 3, [V._timed(3, "restriction identity to depth 12", V.check_restriction)])


def test_criterion_04_extension_limit(acceptance_log):
    r = V._timed(4, "extension limit by n = 200", V.check_extension)
    r.passed &= r.seconds < 10.0
    report(acceptance_log, 4, [r])


def test_criterion_05_minimal_path_measure(acceptance_log):
    report(acceptance_log, 5, [V._timed(5, "minimal-path level measure", V.check_x_min)])


def test_criterion_06_tail_invariance(acceptance_log):
    report(acceptance_log, 6, [V._timed(6, "tail invariance and consistency", V.check_tail_invariance)])


def test_criterion_07_vershik_towers(acceptance_log):
    report(acceptance_log, 7, [V._timed(7, "Vershik towers to depth 8", V.check_towers)])


def test_criterion_08_countable_max_order(acceptance_log):
    report(acceptance_log, 8, V.criterion8_checks(64))


def test_criterion_09_continuum_order(acceptance_log):
    report(acceptance_log, 9, V.criterion9_checks(512, 1))


@pytest.mark.slow
def test_criterion_09_continuum_order_depth_2048(acceptance_log):
    report(acceptance_log, 9, V.criterion9_checks(2048, 2, " (slow)"))


def test_criterion_10_barriers(acceptance_log):
    report(acceptance_log, 10, [V._timed(10, "barrier certificates", V.check_barriers)])


def test_criterion_11_bands(acceptance_log):
    report(acceptance_log, 11, V.check_bands())


def test_criterion_12_two_sided_eigenvector(acceptance_log):
    report(acceptance_log, 12, [V._timed(12, "two-sided eigenvector on [-50, 50]", V.check_two_sided)])
