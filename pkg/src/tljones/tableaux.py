"""Two-row standard Young tableaux in their truncated (level-bounded) form.

A tableau is stored as its fusion path: the sequence of prefix row
differences m_0=0, m_1, ..., m_n, one entry per cell insertion.  Every
prefix must itself be a valid two-row diagram with row difference at most
r-2, which is exactly the walk constraint used by fusion.disk_dimension,
so tableau counts and disk dimensions agree by construction.  Cell
coordinates are derived on demand.
"""

from __future__ import annotations

import dataclasses
import math

from .errors import DomainError, IntegrityError
from .fusion import FusionContext

_ALPHA_SNAP_TOL = 1e-10


@dataclasses.dataclass(frozen=True, order=True)
class YoungDiagram:
    """Two-row integer partition (rows[0] >= rows[1] >= 0)."""

    rows: tuple[int, int]

    def __post_init__(self) -> None:
        if len(self.rows) != 2:
            raise DomainError("only two-row diagrams are supported")
        l1, l2 = self.rows
        if not (isinstance(l1, int) and isinstance(l2, int)) or l1 < l2 or l2 < 0:
            raise DomainError(f"invalid two-row diagram {self.rows!r}")

    @property
    def n(self) -> int:
        return self.rows[0] + self.rows[1]

    @property
    def row_difference(self) -> int:
        return self.rows[0] - self.rows[1]

    def is_admissible(self, ctx: FusionContext) -> bool:
        """Row-difference bound lambda_1 - lambda_2 <= r - 2."""
        return self.row_difference <= ctx.r - 2


@dataclasses.dataclass(frozen=True, order=True)
class StandardTableau:
    """Standard filling of a two-row diagram, stored as its fusion path."""

    path: tuple[int, ...]

    def __post_init__(self) -> None:
        p = self.path
        if len(p) < 1 or p[0] != 0:
            raise DomainError(f"fusion path must start at 0, got {p!r}")
        for a, b in zip(p, p[1:]):
            if abs(a - b) != 1 or b < 0:
                raise DomainError(f"not a +-1 walk on nonnegative labels: {p!r}")

    @property
    def n(self) -> int:
        return len(self.path) - 1

    @property
    def diagram(self) -> YoungDiagram:
        n, m = self.n, self.path[-1]
        return YoungDiagram(((n + m) // 2, (n - m) // 2))

    def row_of(self, entry: int) -> int:
        """Row (1 or 2) containing the given entry."""
        self._check_entry(entry)
        return 1 if self.path[entry] > self.path[entry - 1] else 2

    def col_of(self, entry: int) -> int:
        self._check_entry(entry)
        j, m = entry, self.path[entry]
        return (j + m) // 2 if self.path[entry] > self.path[entry - 1] else (j - m) // 2

    def rows_view(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Entries of row 1 and row 2, each in increasing order."""
        r1 = tuple(j for j in range(1, self.n + 1) if self.row_of(j) == 1)
        r2 = tuple(j for j in range(1, self.n + 1) if self.row_of(j) == 2)
        return r1, r2

    def _check_entry(self, entry: int) -> None:
        if not 1 <= entry <= self.n:
            raise DomainError(f"entry {entry} outside 1..{self.n}")

    @classmethod
    def from_rows(cls, row1, row2) -> "StandardTableau":
        n = len(row1) + len(row2)
        if sorted(list(row1) + list(row2)) != list(range(1, n + 1)):
            raise DomainError("rows must partition 1..n")
        in_row1 = set(row1)
        path = [0]
        for j in range(1, n + 1):
            path.append(path[-1] + (1 if j in in_row1 else -1))
        return cls(tuple(path))


def to_fusion_path(t: StandardTableau) -> tuple[int, ...]:
    """Label sequence of the curve around points 1..j, for j = 0..n."""
    return t.path


def enumerate_diagrams(n: int, ctx: FusionContext) -> tuple[YoungDiagram, ...]:
    """All admissible two-row diagrams with n cells, in lexicographic order."""
    if not isinstance(n, int) or n < 1:
        raise DomainError(f"cell count must be a positive integer, got {n!r}")
    out = []
    for l1 in range(math.ceil(n / 2), n + 1):
        d = YoungDiagram((l1, n - l1))
        if d.is_admissible(ctx):
            out.append(d)
    return tuple(out)


def enumerate_tableaux(diagram: YoungDiagram, ctx: FusionContext) -> tuple[StandardTableau, ...]:
    """All standard fillings whose every prefix stays admissible.

    Returned in the frozen basis order: fusion paths compared
    lexicographically, positionwise.
    """
    if not diagram.is_admissible(ctx):
        raise DomainError(f"diagram {diagram.rows} not admissible at r={ctx.r}")
    n, target = diagram.n, diagram.row_difference
    top = ctx.r - 2
    out: list[StandardTableau] = []

    def extend(path: list[int]) -> None:
        j = len(path) - 1
        m = path[-1]
        if j == n:
            if m == target:
                out.append(StandardTableau(tuple(path)))
            return
        remaining = n - j
        if abs(m - target) > remaining or (m - target - remaining) % 2 != 0:
            return
        for step in (-1, 1):  # smaller label first keeps lexicographic order
            nxt = m + step
            if 0 <= nxt <= top:
                path.append(nxt)
                extend(path)
                path.pop()

    extend([0])
    return tuple(out)


def swap_adjacent(t: StandardTableau, i: int) -> StandardTableau | None:
    """Tableau with entries i and i+1 exchanged, or None when not admissible.

    The swap is a standard tableau only when the two entries sit in distinct
    rows and columns; it additionally must keep every prefix difference
    inside 0..r-2, but that bound is the caller's to apply via `axial`.
    Here None means the swap is not even standard; the flipped path may
    still violate the level bound (checked against the path values).
    """
    if not 1 <= i <= t.n - 1:
        raise DomainError(f"generator index {i} outside 1..{t.n - 1}")
    if t.row_of(i) == t.row_of(i + 1) or t.col_of(i) == t.col_of(i + 1):
        return None
    flipped = list(t.path)
    flipped[i] = t.path[i - 1] + t.path[i + 1] - t.path[i]
    if flipped[i] < 0:
        return None
    return StandardTableau(tuple(flipped))


@dataclasses.dataclass(frozen=True)
class AxialData:
    """Local data of one generator on one tableau: distance d, weights, partner."""

    d: int
    alpha: float
    beta: float
    swapped: StandardTableau | None


def axial(t: StandardTableau, i: int, ctx: FusionContext) -> AxialData:
    """Axial distance and projector weights for entries i, i+1 of t.

    alpha = [d+1] / ([2][d]) with d the signed taxicab offset between the
    two cells; beta = sqrt(alpha*(1-alpha)) when the swapped tableau stays
    admissible at level r, else 0 (and alpha must land on 0 or 1).
    """
    if not 1 <= i <= t.n - 1:
        raise DomainError(f"generator index {i} outside 1..{t.n - 1}")
    r1, c1 = t.row_of(i), t.col_of(i)
    r2, c2 = t.row_of(i + 1), t.col_of(i + 1)
    d = c1 - c2 - (r1 - r2)
    alpha = ctx.qint(d + 1) / (ctx.qint(2) * ctx.qint(d))
    swapped = swap_adjacent(t, i)
    if swapped is not None and swapped.path[i] > ctx.r - 2:
        swapped = None
    if swapped is None:
        if min(abs(alpha), abs(alpha - 1.0)) > _ALPHA_SNAP_TOL:
            raise IntegrityError(
                f"inadmissible swap but alpha={alpha} not at 0 or 1 (t={t.path}, i={i})"
            )
        beta = 0.0
    else:
        beta = math.sqrt(max(alpha * (1.0 - alpha), 0.0))
    return AxialData(d=d, alpha=alpha, beta=beta, swapped=swapped)
