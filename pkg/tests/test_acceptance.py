"""
Acceptance suite: one test per criterion, each printing a single PASS/FAIL line.

Criteria 1-9 call the checks in qcanon.acceptance directly.  Criterion 10 runs
``qcanon selftest`` twice in fresh processes and compares the reports byte for byte.
"""

import subprocess
import sys
import time

import pytest

from qcanon import acceptance

BUDGET_SECONDS = {1: 60, 3: 120, 9: 300}


def _report(capsys, num, name, passed, seconds):
    with capsys.disabled():
        print(f"\n[criterion {num:2d}] {'PASS' if passed else 'FAIL'}  {name}  ({seconds:.2f} s)")


@pytest.mark.parametrize("num,name,fn", acceptance.CRITERIA, ids=[f"criterion_{n}" for n, _, _ in acceptance.CRITERIA])
def test_criterion(num, name, fn, capsys):
    acceptance.reset_caches()
    start = time.perf_counter()
    passed, details = fn()
    seconds = time.perf_counter() - start
    within = seconds < BUDGET_SECONDS.get(num, 600)
    _report(capsys, num, name, passed and within, seconds)
    assert passed, details
    assert within, f"criterion {num} took {seconds:.1f} s"


def test_criterion_10_determinism(capsys):
    cmd = [sys.executable, "-m", "qcanon", "selftest"]
    start = time.perf_counter()
    first = subprocess.run(cmd, capture_output=True, check=False)
    second = subprocess.run(cmd, capture_output=True, check=False)
    seconds = time.perf_counter() - start
    same = first.stdout == second.stdout and first.returncode == second.returncode == 0
    _report(capsys, 10, "determinism (two selftest runs)", same, seconds)
    assert first.returncode == 0, first.stderr.decode()
    assert first.stdout == second.stdout
    assert b'"theta_sign"' in first.stdout
