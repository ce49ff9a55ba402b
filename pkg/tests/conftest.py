"""Shared fixtures: the parameter grid and cached reproduction runs."""

from __future__ import annotations

import pytest

from edmfit import ClassId, VarianceParams
from edmfit.reproduce import TABLES, run_reproduction

P_GRID = (0.5, 1.0, 5.0, 20.0)
B_GRID = (0.5, 2.0)
R_MAX_GRID = 6


def grid_params() -> list[VarianceParams]:
    """Every family/r/p/b combination used by the grid invariants."""
    out = []
    for p in P_GRID:
        for r in range(2, R_MAX_GRID + 1):
            out.append(VarianceParams(ClassId.ABM, r, p))
        for r in range(1, R_MAX_GRID + 1):
            out.append(VarianceParams(ClassId.LMNS, r, p))
            for b in B_GRID:
                if p != b:
                    out.append(VarianceParams(ClassId.LMS, r, p, b))
    return out


@pytest.fixture(scope="session")
def reproduction_docs():
    """One reproduction run per table, shared across acceptance tests."""
    return {tid: run_reproduction(tid) for tid in sorted(TABLES)}
