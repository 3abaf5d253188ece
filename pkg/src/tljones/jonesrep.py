"""Unitary braid generator matrices on tableau sectors.

Each two-row sector carries a projector e_i per adjacent strand pair,
assembled from the axial weights of the basis tableaux: alpha on the
diagonal, beta linking a tableau to its entry swap.  The braid generator
is the deformation g_i = q*I - (1+q)*e_i, unitary with spectrum {-1, q}.

Basis order is frozen: tableaux sorted by fusion path, lexicographically.
Fixture documents serialize the generator matrices in that order so a
rebuild can be compared byte for byte.
"""

from __future__ import annotations

import dataclasses
import functools
import json

import numpy as np

from .errors import DomainError, IntegrityError
from .fusion import FusionContext
from .tableaux import StandardTableau, YoungDiagram, axial, enumerate_tableaux

_BUILD_TOL = 1e-10

FIXTURE_ORDER = "frozen-lex-path"


@dataclasses.dataclass(frozen=True)
class BraidWord:
    """Word in the braid generators: letter +i is sigma_i, -i its inverse."""

    n_strands: int
    letters: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if not isinstance(self.n_strands, int) or self.n_strands < 2:
            raise DomainError(f"need at least 2 strands, got {self.n_strands!r}")
        object.__setattr__(self, "letters", tuple(self.letters))
        for letter in self.letters:
            if not isinstance(letter, int) or not 1 <= abs(letter) <= self.n_strands - 1:
                raise DomainError(
                    f"letter {letter!r} outside +-1..+-{self.n_strands - 1}"
                )

    def __len__(self) -> int:
        return len(self.letters)

    def __add__(self, other: "BraidWord") -> "BraidWord":
        if not isinstance(other, BraidWord):
            return NotImplemented
        if other.n_strands != self.n_strands:
            raise DomainError("cannot concatenate words on different strand counts")
        return BraidWord(self.n_strands, self.letters + other.letters)

    def inverse(self) -> "BraidWord":
        return BraidWord(self.n_strands, tuple(-l for l in reversed(self.letters)))


@dataclasses.dataclass(frozen=True, eq=False)
class SectorRep:
    """One irreducible sector: basis tableaux, projectors, braid generators."""

    ctx: FusionContext
    diagram: YoungDiagram
    basis: tuple[StandardTableau, ...]
    projectors: tuple[np.ndarray, ...]
    generators: tuple[np.ndarray, ...]
    inverses: tuple[np.ndarray, ...]

    @property
    def n(self) -> int:
        return self.diagram.n

    @property
    def dim(self) -> int:
        return len(self.basis)

    def index_of(self, t: StandardTableau) -> int:
        try:
            return self._index[t.path]
        except KeyError:
            raise DomainError(f"tableau {t.path} not in this sector") from None

    @functools.cached_property
    def _index(self) -> dict[tuple[int, ...], int]:
        return {t.path: k for k, t in enumerate(self.basis)}

    def generator(self, letter: int) -> np.ndarray:
        """Matrix of sigma_letter (negative letter means the inverse)."""
        if not isinstance(letter, int) or not 1 <= abs(letter) <= self.n - 1:
            raise DomainError(f"letter {letter!r} outside +-1..+-{self.n - 1}")
        return self.generators[letter - 1] if letter > 0 else self.inverses[-letter - 1]


def _freeze(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


def build_sector(diagram: YoungDiagram, ctx: FusionContext) -> SectorRep:
    """Assemble the sector of `diagram` and check its algebra numerically."""
    if not diagram.is_admissible(ctx):
        raise DomainError(f"diagram {diagram.rows} not admissible at r={ctx.r}")
    basis = enumerate_tableaux(diagram, ctx)
    dim, n = len(basis), diagram.n
    index = {t.path: k for k, t in enumerate(basis)}

    projectors = []
    for i in range(1, n):
        mat = np.zeros((dim, dim))
        for k, t in enumerate(basis):
            data = axial(t, i, ctx)
            mat[k, k] = data.alpha
            if data.swapped is not None:
                mat[index[data.swapped.path], k] = data.beta
        projectors.append(mat)

    _check_build(projectors, ctx)

    q = ctx.q
    generators = [q * np.eye(dim) - (1 + q) * e for e in projectors]
    inverses = [g.conj().T.copy() for g in generators]
    return SectorRep(
        ctx=ctx,
        diagram=diagram,
        basis=basis,
        projectors=tuple(_freeze(e) for e in projectors),
        generators=tuple(_freeze(g) for g in generators),
        inverses=tuple(_freeze(g) for g in inverses),
    )


def _check_build(projectors: list[np.ndarray], ctx: FusionContext) -> None:
    # construction-time guard; verify_relations is the full public check
    inv_beta = 1.0 / ctx.beta
    for i, e in enumerate(projectors):
        if np.abs(e - e.T).max() > _BUILD_TOL:
            raise IntegrityError(f"projector {i + 1} not symmetric")
        if np.abs(e @ e - e).max() > _BUILD_TOL:
            raise IntegrityError(f"projector {i + 1} not idempotent")
        if i > 0:
            f = projectors[i - 1]
            if np.abs(e @ f @ e - inv_beta * e).max() > _BUILD_TOL:
                raise IntegrityError(f"exchange relation fails at {i}, {i + 1}")


@functools.lru_cache(maxsize=None)
def sector_rep(r: int, rows: tuple[int, int]) -> SectorRep:
    """Cached sector builder keyed by root order and diagram rows."""
    return build_sector(YoungDiagram(tuple(rows)), FusionContext(r=r))


def evaluate(rep: SectorRep, word) -> np.ndarray:
    """Product of generator matrices, left to right.

    Acting on states, the rightmost letter applies first.
    """
    letters = word.letters if isinstance(word, BraidWord) else tuple(word)
    if isinstance(word, BraidWord) and word.n_strands != rep.n:
        raise DomainError(
            f"word on {word.n_strands} strands, sector has {rep.n}"
        )
    out = np.eye(rep.dim, dtype=complex)
    for letter in letters:
        out = out @ rep.generator(letter)
    return out


@dataclasses.dataclass(frozen=True)
class RelationReport:
    """Worst-case deviations from the defining relations, one per family."""

    tol: float
    hermitian: float
    idempotent: float
    exchange: float
    far_commute: float
    unitary: float
    braid: float
    spectrum: float
    torsion: float

    @property
    def max_deviation(self) -> float:
        return max(
            self.hermitian,
            self.idempotent,
            self.exchange,
            self.far_commute,
            self.unitary,
            self.braid,
            self.spectrum,
            self.torsion,
        )

    @property
    def ok(self) -> bool:
        return self.max_deviation <= self.tol


def _dev(a: np.ndarray) -> float:
    return float(np.abs(a).max()) if a.size else 0.0


def verify_relations(rep: SectorRep, tol: float = 1e-9) -> RelationReport:
    """Measure every defining relation of the image algebra on this sector."""
    es, gs = rep.projectors, rep.generators
    eye = np.eye(rep.dim)
    q = rep.ctx.q
    inv_beta = 1.0 / rep.ctx.beta

    hermitian = max((_dev(e - e.conj().T) for e in es), default=0.0)
    idempotent = max((_dev(e @ e - e) for e in es), default=0.0)
    exchange = 0.0
    braid = 0.0
    for i in range(len(es) - 1):
        e, f = es[i], es[i + 1]
        exchange = max(exchange, _dev(e @ f @ e - inv_beta * e), _dev(f @ e @ f - inv_beta * f))
        g, h = gs[i], gs[i + 1]
        braid = max(braid, _dev(g @ h @ g - h @ g @ h))
    far_commute = 0.0
    for i in range(len(es)):
        for j in range(i + 2, len(es)):
            far_commute = max(far_commute, _dev(es[i] @ es[j] - es[j] @ es[i]))
    unitary = max((_dev(g @ g.conj().T - eye) for g in gs), default=0.0)
    spectrum = 0.0
    for g in gs:
        for lam in np.linalg.eigvals(g):
            spectrum = max(spectrum, min(abs(lam + 1), abs(lam - q)))
    torsion = max(
        (_dev(np.linalg.matrix_power(g, 2 * rep.ctx.r) - eye) for g in gs),
        default=0.0,
    )
    return RelationReport(
        tol=tol,
        hermitian=hermitian,
        idempotent=idempotent,
        exchange=exchange,
        far_commute=far_commute,
        unitary=unitary,
        braid=braid,
        spectrum=spectrum,
        torsion=torsion,
    )


def eigenvalue_counts(rep: SectorRep, i: int, tol: float = 1e-8) -> tuple[int, int]:
    """Multiplicities of (-1, q) in the spectrum of sigma_i on this sector."""
    g = rep.generator(i)
    q = rep.ctx.q
    minus_one = 0
    at_q = 0
    for lam in np.linalg.eigvals(g):
        if abs(lam + 1) <= tol:
            minus_one += 1
        elif abs(lam - q) <= tol:
            at_q += 1
        else:
            raise IntegrityError(f"eigenvalue {lam} is neither -1 nor q")
    return minus_one, at_q


def prefix_label_projector(rep: SectorRep, position: int, label: int) -> np.ndarray:
    """Diagonal projector onto basis paths whose entry at `position` is `label`.

    The prefix labels are diagonal in the tableau basis, so this is a 0/1
    matrix.  `position` indexes the fusion path, 0..n.
    """
    if not 0 <= position <= rep.n:
        raise DomainError(f"position {position} outside 0..{rep.n}")
    rep.ctx.check_label(label)
    diag = np.array([1.0 if t.path[position] == label else 0.0 for t in rep.basis])
    return np.diag(diag)


def fixture_doc(rep: SectorRep) -> dict:
    """JSON-ready snapshot of the generator matrices in frozen basis order."""
    matrices = {}
    for i, g in enumerate(rep.generators, start=1):
        data = [[float(z.real), float(z.imag)] for z in g.ravel(order="C")]
        matrices[f"sigma_{i}"] = {"shape": [rep.dim, rep.dim], "data": data}
    return {
        "r": rep.ctx.r,
        "diagram": list(rep.diagram.rows),
        "order": FIXTURE_ORDER,
        "basis": [list(t.path) for t in rep.basis],
        "matrices": matrices,
    }


def matrices_from_doc(doc: dict) -> dict[str, np.ndarray]:
    """Rebuild complex matrices from a fixture document."""
    if doc.get("order") != FIXTURE_ORDER:
        raise DomainError(f"unknown basis order {doc.get('order')!r}")
    out = {}
    for name, entry in doc["matrices"].items():
        rows, cols = entry["shape"]
        flat = np.array([complex(re, im) for re, im in entry["data"]])
        if flat.size != rows * cols:
            raise DomainError(f"matrix {name}: shape and data length disagree")
        out[name] = flat.reshape(rows, cols)
    return out


def canonical_json(obj) -> str:
    """Deterministic rendering: sorted keys, no whitespace, trailing newline."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"
