from __future__ import annotations

import os
from dataclasses import dataclass

DEFAULT_GUESS_BUDGET = 10**7
DEFAULT_ORACLE_CAP = 9
DEFAULT_BRANCH_BOUND_CAP = 14


@dataclass(frozen=True)
class SolverConfig:
    guess_budget: int = DEFAULT_GUESS_BUDGET
    oracle_cap: int = DEFAULT_ORACLE_CAP
    branch_bound_cap: int = DEFAULT_BRANCH_BOUND_CAP

    def override(self, *, guess_budget: int | None = None, oracle_cap: int | None = None) -> SolverConfig:
        return SolverConfig(
            guess_budget=self.guess_budget if guess_budget is None else guess_budget,
            oracle_cap=self.oracle_cap if oracle_cap is None else oracle_cap,
            branch_bound_cap=self.branch_bound_cap,
        )


def load_config() -> SolverConfig:
    def get_int(key: str, default: int) -> int:
        raw = os.environ.get(key)
        if raw is None:
            return default
        try:
            value = int(raw.strip())
        except ValueError:
            return default
        return value if value > 0 else default

    return SolverConfig(
        guess_budget=get_int("LMAX_PTAS_GUESS_BUDGET", DEFAULT_GUESS_BUDGET),
        oracle_cap=get_int("LMAX_PTAS_ORACLE_CAP", DEFAULT_ORACLE_CAP),
        branch_bound_cap=get_int("LMAX_PTAS_BB_CAP", DEFAULT_BRANCH_BOUND_CAP),
    )
