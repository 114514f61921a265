"""Search budgets; every exhaustive procedure takes one of these."""

from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Budget:
    max_nodes: int = 20_000_000  # coloring-search branch nodes
    max_enumeration: int = 2_000_000  # line / copy enumeration size
    max_tries: int = 200  # rejection-sampling attempts
    max_cube_dim: int = 5  # largest cube dimension a provider will try
    max_ap_points: int = 40  # largest 1-D progression a provider will try
    max_doublings: int = 64  # radius-growth candidates
    max_base_candidates: int = 200_000  # base-cycle realization search

    def scaled(self, factor: float) -> "Budget":
        if factor <= 0:
            raise ValueError("budget factor must be positive")
        return replace(
            self,
            max_nodes=int(self.max_nodes * factor),
            max_enumeration=int(self.max_enumeration * factor),
        )


DEFAULT_BUDGET = Budget()
