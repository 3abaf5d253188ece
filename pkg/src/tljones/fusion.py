"""Fusion combinatorics for the level-r self-dual label theory.

Labels live in {0, ..., r-2}; label 0 is the trivial (vacuum) label and
all marked points in this library carry label 1.  Dimensions of disk
spaces are walk counts on the label path graph, so everything here is
exact integer arithmetic except for the quantum integers, which are real
numbers evaluated through their sine closed form.
"""

from __future__ import annotations

import dataclasses
import functools
import math
from collections.abc import Mapping

from .errors import DomainError


@dataclasses.dataclass(frozen=True)
class FusionContext:
    """Root-of-unity order r plus the derived constants used everywhere."""

    r: int = 5

    def __post_init__(self) -> None:
        if not isinstance(self.r, int) or self.r < 3:
            raise DomainError(f"order r must be an integer >= 3, got {self.r!r}")

    @functools.cached_property
    def q(self) -> complex:
        """Primitive r-th root of unity exp(2*pi*i/r)."""
        return complex(math.cos(2.0 * math.pi / self.r), math.sin(2.0 * math.pi / self.r))

    @property
    def labels(self) -> tuple[int, ...]:
        return tuple(range(self.r - 1))

    def qint(self, k: int) -> float:
        """Quantum integer [k] = sin(k*pi/r)/sin(pi/r)."""
        return math.sin(k * math.pi / self.r) / math.sin(math.pi / self.r)

    @property
    def beta(self) -> float:
        """Loop weight [2]^2 = 4*cos^2(pi/r)."""
        return self.qint(2) ** 2

    def check_label(self, a: int) -> None:
        if not isinstance(a, int) or not 0 <= a <= self.r - 2:
            raise DomainError(f"label {a!r} outside 0..{self.r - 2}")


def admissible(a: int, b: int, c: int, ctx: FusionContext) -> bool:
    """Whether the labeled triple (a, b, c) bounds a nonzero pants space.

    The three conditions: total parity even, each label at most the sum of
    the other two, and total at most 2*(r-2).
    """
    for x in (a, b, c):
        ctx.check_label(x)
    if (a + b + c) % 2 != 0:
        return False
    if a > b + c or b > a + c or c > a + b:
        return False
    return a + b + c <= 2 * (ctx.r - 2)


def disk_dimension(n: int, boundary: int, ctx: FusionContext) -> int:
    """dim of the disk space with n interior label-1 points and the given boundary label.

    Counted as lattice walks of length n from 0 to `boundary` on the label
    path graph 0 - 1 - ... - (r-2), one +-1 step per point.
    """
    if not isinstance(n, int) or n < 0:
        raise DomainError(f"point count must be a nonnegative integer, got {n!r}")
    ctx.check_label(boundary)
    num = ctx.r - 1
    counts = [0] * num
    counts[0] = 1
    for _ in range(n):
        nxt = [0] * num
        for l in range(num):
            if l > 0:
                nxt[l] += counts[l - 1]
            if l < num - 1:
                nxt[l] += counts[l + 1]
        counts = nxt
    return counts[boundary]


@dataclasses.dataclass(frozen=True)
class SectorTable:
    """Map from cut-curve label tuples to sector dimensions."""

    dims: Mapping[tuple[int, ...], int]

    def __post_init__(self) -> None:
        norm = {}
        for key, value in dict(self.dims).items():
            tkey = tuple(key) if isinstance(key, (tuple, list)) else (int(key),)
            if not isinstance(value, int) or value < 0:
                raise DomainError(f"dimension for {tkey} must be a nonnegative integer")
            norm[tkey] = value
        object.__setattr__(self, "dims", norm)

    @property
    def total(self) -> int:
        return sum(self.dims.values())

    def __getitem__(self, key) -> int:
        tkey = tuple(key) if isinstance(key, (tuple, list)) else (int(key),)
        return self.dims[tkey]


def disk_sector_table(n: int, ctx: FusionContext) -> SectorTable:
    """Per-boundary-label dimension table of the n-point disk, zeros dropped."""
    dims = {}
    for l in ctx.labels:
        d = disk_dimension(n, l, ctx)
        if d:
            dims[(l,)] = d
    return SectorTable(dims)


def glue_decompose(inner: SectorTable, outer: SectorTable) -> SectorTable:
    """Combine two sector tables indexed by the same cut-curve labels.

    Gluing along the cut multiplies dimensions labelwise; the total of the
    result is the dimension of the unglued space.
    """
    if set(inner.dims) != set(outer.dims):
        raise DomainError(
            f"cut label sets differ: {sorted(inner.dims)} vs {sorted(outer.dims)}"
        )
    return SectorTable({key: inner.dims[key] * outer.dims[key] for key in inner.dims})


def qubit_pair_decomposition(outer_label: int, ctx: FusionContext) -> SectorTable:
    """Block table of the 6-point disk split into two marked triples.

    Keys are (outer_label, a, b) where a and b label the curves around the
    first and second triple; values multiply the two triple-disk dimensions
    by the pants dimension (0 or 1).  Zero blocks are dropped.
    """
    ctx.check_label(outer_label)
    dims = {}
    for a in ctx.labels:
        da = disk_dimension(3, a, ctx)
        if not da:
            continue
        for b in ctx.labels:
            db = disk_dimension(3, b, ctx)
            if not db or not admissible(outer_label, a, b, ctx):
                continue
            dims[(outer_label, a, b)] = da * db
    return SectorTable(dims)
