"""Runs every acceptance criterion at its stated tolerance; prints one line per criterion."""

import pytest

from calgrass.acceptance import CRITERIA, run_criterion
from calgrass.registry import default_registry

REG = default_registry()


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    result = run_criterion(number, REG, seed=0)
    with capsys.disabled():
        print(f"\n{result.line()} ({result.seconds:.1f}s)")
    assert result.passed, result.detail
