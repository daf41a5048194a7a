"""Labeled linear inequality systems ``A x <= b`` over named variables."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

FAMILIES = (
    "individual",
    "adjacent_sum",
    "full_sum",
    "sum_plus_one",
    "box",
    "mac",
    # rows of a Fourier-Motzkin working system that still involve common rates
    "polymatroid",
    "nonneg",
)

FAMILY_ORDER = {name: pos for pos, name in enumerate(FAMILIES)}


@dataclass(frozen=True)
class Row:
    coeffs: tuple[int, ...]
    rhs: float
    family: str
    params: tuple[tuple[str, int], ...] = ()
    # indices of the original rows this one was combined from (Fourier-Motzkin)
    history: frozenset[int] = field(default=frozenset(), compare=False)

    @property
    def param_dict(self) -> dict[str, int]:
        return dict(self.params)


def make_row(coeffs: Sequence[int], rhs: float, family: str, params: Mapping[str, int] | None = None,
             history: Iterable[int] = ()) -> Row:
    return Row(
        tuple(int(c) for c in coeffs),
        float(rhs),
        family,
        tuple((params or {}).items()),
        frozenset(history),
    )


@dataclass(frozen=True)
class InequalitySystem:
    vars: tuple[str, ...]
    rows: tuple[Row, ...]

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        object.__setattr__(self, "rows", tuple(self.rows))
        n = len(self.vars)
        for row in self.rows:
            if len(row.coeffs) != n:
                raise ValueError(f"row {row} has {len(row.coeffs)} coefficients, expected {n}")
            if row.family not in FAMILY_ORDER:
                raise ValueError(f"unknown family tag {row.family!r}")

    @cached_property
    def A(self) -> np.ndarray:
        a = np.array([r.coeffs for r in self.rows], dtype=float).reshape(len(self.rows), len(self.vars))
        a.setflags(write=False)
        return a

    @cached_property
    def b(self) -> np.ndarray:
        b = np.array([r.rhs for r in self.rows], dtype=float)
        b.setflags(write=False)
        return b

    @property
    def dim(self) -> int:
        return len(self.vars)

    def __len__(self) -> int:
        return len(self.rows)

    def with_rows(self, rows: Iterable[Row]) -> InequalitySystem:
        return replace(self, rows=tuple(rows))

    def without_duplicates(self) -> InequalitySystem:
        """Drop repeated ``(coeffs, rhs)`` rows, keeping the first occurrence."""
        seen = set()
        kept = []
        for row in self.rows:
            key = (row.coeffs, row.rhs)
            if key not in seen:
                seen.add(key)
                kept.append(row)
        return self.with_rows(kept)

    def families(self, include_nonneg: bool = False) -> dict[tuple[int, ...], list[Row]]:
        """Rows grouped by coefficient vector, in first-appearance order."""
        groups: dict[tuple[int, ...], list[Row]] = {}
        for row in self.rows:
            if row.family == "nonneg" and not include_nonneg:
                continue
            groups.setdefault(row.coeffs, []).append(row)
        return groups

    def tightest(self) -> dict[tuple[int, ...], float]:
        """Smallest right-hand side per coefficient vector."""
        best: dict[tuple[int, ...], float] = {}
        for row in self.rows:
            if row.coeffs not in best or row.rhs < best[row.coeffs]:
                best[row.coeffs] = row.rhs
        return best


def rate_vars(k: int) -> tuple[str, ...]:
    return tuple(f"R{i + 1}" for i in range(k))


def empty_system(names: Sequence[str] = ()) -> InequalitySystem:
    return InequalitySystem(tuple(names), ())
