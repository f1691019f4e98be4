"""Shared fixtures: spec paths, random grid generation, CLI runner."""

from __future__ import annotations

import random
from fractions import Fraction
from pathlib import Path

import pytest

from gridfourier import GridSpec

PKG_ROOT = Path(__file__).resolve().parent.parent
SPECS_DIR = PKG_ROOT / "specs"


@pytest.fixture(scope="session")
def specs_dir() -> Path:
    return SPECS_DIR


def random_grid(
    rng: random.Random,
    m: int | None = None,
    n: int | None = None,
    ensure_bottom_row: bool = False,
    ensure_not_full: bool = False,
) -> GridSpec:
    """Random valid grid with positive rational weights summing to 1.

    Cells are kept independently (at least one overall); weights are random
    integer masses normalized by their total, so every kept cell has positive
    weight and the table is exact.
    """
    m = m if m is not None else rng.randint(2, 4)
    n = n if n is not None else rng.randint(2, 4)
    while True:
        cells = [[1 if rng.random() < 0.6 else 0 for _ in range(n)] for _ in range(m)]
        if ensure_bottom_row and not any(cells[0]):
            cells[0][rng.randrange(n)] = 1
        if ensure_not_full and all(all(row) for row in cells):
            cells[rng.randrange(m)][rng.randrange(n)] = 0
        if any(any(row) for row in cells):
            break
    masses = [[rng.randint(1, 9) if cells[j][i] else 0 for i in range(n)] for j in range(m)]
    total = sum(sum(row) for row in masses)
    weights = [[Fraction(masses[j][i], total) for i in range(n)] for j in range(m)]
    return GridSpec(m=m, n=n, cells=tuple(tuple(r) for r in cells), weights=tuple(tuple(r) for r in weights))


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20260822)


@pytest.fixture
def run_cli(capsys):
    """Run the CLI in-process; returns (exit_code, stdout, stderr)."""
    from gridfourier.cli import main

    def _run(argv: list[str]) -> tuple[int, str, str]:
        code = main(argv)
        captured = capsys.readouterr()
        return code, captured.out, captured.err

    return _run
