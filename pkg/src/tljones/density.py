"""Numerical density certificates for finitely generated unitary groups.

Given block-diagonal unitary generators, three independent measurements
decide whether the generated subgroup is dense in the product of the
blockwise projective unitary groups:

  * the commutant of the generator set (scalars per block iff the blocks
    are irreducible and pairwise inequivalent),
  * the linear span of short generator words (full matrix algebra),
  * the real Lie algebra generated by the principal logarithms, closed
    under commutators (all traceless skew-Hermitian block matrices).

Every rank decision is guarded: the singular spectrum must show a clear
gap at the cut, otherwise the certificate refuses to commit.
"""

from __future__ import annotations

import dataclasses
import hashlib
import math

import numpy as np
import scipy.linalg

from .errors import DomainError, IntegrityError

_UNITARY_TOL = 1e-8
_EIG_CLUSTER_TOL = 1e-6
_SNAP_TOL = 1e-12
_CUT_TOL = 1e-9


def _require_unitary(u: np.ndarray) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {u.shape}")
    if np.abs(u @ u.conj().T - np.eye(u.shape[0])).max() > _UNITARY_TOL:
        raise DomainError("matrix is not unitary within 1e-8")
    return u


def principal_log(u: np.ndarray, traceless: bool = True) -> np.ndarray:
    """Skew-Hermitian logarithm with eigenphases in (-pi, pi].

    Eigenvalues on the negative real axis take phase +pi.  Eigenvalues in
    the narrow band just below the axis (phase within 1e-9 of -pi but too
    far from the axis to snap) are rejected: the branch there is ambiguous
    and downstream consumers must not silently pick a side.
    """
    u = _require_unitary(u)
    t, z = scipy.linalg.schur(u, output="complex")
    lam = np.diag(t)
    theta = np.angle(lam)
    snap = (np.abs(lam.imag) <= _SNAP_TOL) & (lam.real < 0)
    theta = np.where(snap, math.pi, theta)
    if np.any(theta < -math.pi + _CUT_TOL):
        raise DomainError("eigenvalue too close to the branch cut from below")
    x = (z * (1j * theta)) @ z.conj().T
    x = 0.5 * (x - x.conj().T)
    if traceless:
        x = x - (np.trace(x) / u.shape[0]) * np.eye(u.shape[0])
    return x


def commutant_dimension(
    mats, tol: float = 1e-8, gap_min: float = 10.0
) -> int:
    """Complex dimension of {X : XG = GX for every G}.

    Solved as one stacked linear system on vectorized X, with a singular
    gap guard at the rank cut.
    """
    mats = [np.asarray(g, dtype=complex) for g in mats]
    if not mats:
        raise DomainError("need at least one matrix")
    m = mats[0].shape[0]
    eye = np.eye(m)
    blocks = []
    for g in mats:
        if g.shape != (m, m):
            raise DomainError("matrices must share one square shape")
        blocks.append(np.kron(eye, g.T) - np.kron(g, eye))
    sv = np.linalg.svd(np.vstack(blocks), compute_uv=False)
    null = int(np.count_nonzero(sv <= tol))
    rank = m * m - null
    if 0 < rank < len(sv):
        gap = sv[rank - 1] / max(sv[rank], np.finfo(float).tiny)
        if gap < gap_min:
            raise IntegrityError(
                f"commutant rank cut ambiguous: gap {gap:.2f} below {gap_min}"
            )
    return null


def algebra_dimension(mats, tol: float = 1e-8, max_rounds: int = 0) -> int:
    """Dimension of the unital algebra spanned by generator words.

    Iterated to a fixed point: each round right-multiplies an orthonormal
    span basis by every generator and re-ranks; a round that adds nothing
    proves the span is the whole generated algebra.  The quadratic minimal
    polynomial of a unitary with two eigenvalues folds inverses into
    positive words, so positive words suffice.
    """
    mats = [np.asarray(g, dtype=complex) for g in mats]
    if not mats:
        raise DomainError("need at least one matrix")
    m = mats[0].shape[0]
    if max_rounds <= 0:
        max_rounds = m * m + 2
    pool = np.eye(m, dtype=complex).reshape(1, m, m)
    rank = 0
    for _ in range(max_rounds):
        rows = pool.reshape(len(pool), m * m)
        _, sv, vh = np.linalg.svd(rows, full_matrices=False)
        new_rank = int(np.count_nonzero(sv > tol * sv[0]))
        basis = vh[:new_rank].reshape(new_rank, m, m)
        if new_rank == rank:
            return rank
        rank = new_rank
        products = np.einsum("bij,gjk->bgik", basis, np.array(mats))
        pool = np.concatenate([basis, products.reshape(-1, m, m)])
    raise IntegrityError(f"word span did not stabilize in {max_rounds} rounds")


def _stack_real(x: np.ndarray) -> np.ndarray:
    return np.concatenate([x.real.ravel(), x.imag.ravel()])


class LieBasis:
    """Orthonormal basis of a real span of complex matrices.

    Inner product Re tr(X^H Y), realized by stacking real and imaginary
    parts.  Matrices are kept alongside their vectors so commutators can
    be formed without unstacking.
    """

    def __init__(self, shape: tuple[int, int], rank_tol: float = 1e-8):
        self.shape = shape
        self.rank_tol = rank_tol
        self._rows: list[np.ndarray] = []
        self._mats: list[np.ndarray] = []

    @property
    def dim(self) -> int:
        return len(self._rows)

    @property
    def mats(self) -> list[np.ndarray]:
        return list(self._mats)

    def add(self, x: np.ndarray) -> bool:
        """Orthogonalize against the basis; adjoin if a component is left."""
        v = _stack_real(np.asarray(x, dtype=complex))
        for _ in range(2):  # repeated projection keeps loss of orthogonality down
            for row in self._rows:
                v = v - np.dot(row, v) * row
        norm = float(np.linalg.norm(v))
        if norm <= self.rank_tol:
            return False
        v = v / norm
        half = self.shape[0] * self.shape[1]
        mat = v[:half].reshape(self.shape) + 1j * v[half:].reshape(self.shape)
        self._rows.append(v)
        self._mats.append(mat)
        return True


@dataclasses.dataclass(frozen=True)
class ClosureResult:
    """Commutator closure of a seed set: orthonormal span plus rank evidence."""

    basis: LieBasis
    gap: float
    tail: tuple[float, float]
    rounds: int

    @property
    def dim(self) -> int:
        return self.basis.dim

    @property
    def mats(self) -> list[np.ndarray]:
        return self.basis.mats


def lie_closure(
    seeds, rank_tol: float = 1e-8, gap_min: float = 10.0, max_rounds: int = 60
) -> ClosureResult:
    """Close the real span of the seeds under commutators.

    Each round re-orthonormalizes the candidate pool by one global SVD
    (rank cut guarded by a singular gap), then brackets every basis pair.
    The pool always carries the seeds, so the final SVD certifies the
    closure rank directly from seeds plus pairwise brackets.  Greedy
    vector-at-a-time adjoining is deliberately avoided: near the ambient
    ceiling its one-shot orthogonalization residuals sit close to the
    noise floor and can admit a phantom direction.
    """
    seeds = [np.asarray(x, dtype=complex) for x in seeds]
    if not seeds:
        raise DomainError("need at least one seed")
    shape = seeds[0].shape
    m = shape[0]
    seed_rows = np.array([_stack_real(x) for x in seeds])
    pool = seed_rows
    rank = -1
    for round_no in range(1, max_rounds + 1):
        _, sv, vh = np.linalg.svd(pool, full_matrices=False)
        new_rank = int(np.count_nonzero(sv > rank_tol))
        if new_rank < len(sv):
            kept = float(sv[new_rank - 1])
            dropped = float(sv[new_rank])
            gap = kept / max(dropped, np.finfo(float).tiny)
            if gap < gap_min:
                raise IntegrityError(
                    f"closure rank cut ambiguous: gap {gap:.2f} below {gap_min}"
                )
        else:
            kept, dropped, gap = float(sv[-1]), 0.0, math.inf
        half = m * m
        basis = vh[:new_rank, :half].reshape(-1, m, m) + 1j * vh[
            :new_rank, half:
        ].reshape(-1, m, m)
        if new_rank == rank:
            lie = LieBasis(shape, rank_tol=rank_tol)
            for mat in basis:
                lie.add(mat)
            if lie.dim != new_rank:
                raise IntegrityError("orthonormal rebuild lost rank")
            return ClosureResult(
                basis=lie, gap=float(gap), tail=(kept, dropped), rounds=round_no
            )
        rank = new_rank
        brackets = np.einsum("aij,bjk->abik", basis, basis)
        brackets = brackets - np.transpose(brackets, (1, 0, 2, 3))
        idx = np.triu_indices(new_rank, k=1)
        rows = [seed_rows, vh[:new_rank]]
        if idx[0].size:
            flat = brackets[idx]
            rows.append(
                np.concatenate(
                    [flat.real.reshape(len(flat), -1), flat.imag.reshape(len(flat), -1)],
                    axis=1,
                )
            )
        pool = np.vstack(rows)
    raise IntegrityError(f"commutator closure did not stabilize in {max_rounds} rounds")


@dataclasses.dataclass(frozen=True)
class DensityCertificate:
    """Outcome of the three density measurements on one generator set."""

    block_dims: tuple[int, ...]
    generator_count: int
    commutant_dim: int
    algebra_dim: int
    closure_dim: int
    expected_commutant: int
    expected_algebra: int
    expected_closure: int
    closure_gap: float
    closure_tail: tuple[float, float]
    seed_hash: str
    tol: float

    @property
    def dense(self) -> bool:
        return (
            self.commutant_dim == self.expected_commutant
            and self.algebra_dim == self.expected_algebra
            and self.closure_dim == self.expected_closure
        )

    def to_doc(self) -> dict:
        doc = dataclasses.asdict(self)
        doc["block_dims"] = list(self.block_dims)
        doc["closure_tail"] = list(self.closure_tail)
        doc["dense"] = self.dense
        return doc


def _eigenvalue_gate(g: np.ndarray) -> None:
    # density needs each generator to act with exactly two eigenvalues
    # whose ratio is not +-1; anything else is outside the certified domain
    clusters: list[complex] = []
    for lam in np.linalg.eigvals(g):
        if not any(abs(lam - c) <= _EIG_CLUSTER_TOL for c in clusters):
            clusters.append(complex(lam))
    if len(clusters) != 2:
        raise DomainError(
            f"generator has {len(clusters)} distinct eigenvalues, need exactly 2"
        )
    ratio = clusters[0] / clusters[1]
    if min(abs(ratio - 1), abs(ratio + 1)) <= _EIG_CLUSTER_TOL:
        raise DomainError("generator eigenvalue ratio is +-1, group cannot be dense")


def _seed_hash(blocks) -> str:
    h = hashlib.sha256()
    for b, gens in enumerate(blocks):
        for j, g in enumerate(gens):
            h.update(f"block={b};gen={j};dim={g.shape[0]};".encode())
            h.update(np.ascontiguousarray(g, dtype=complex).tobytes())
    return h.hexdigest()


def certify_density(
    blocks, tol: float = 1e-8, gap_min: float = 10.0
) -> DensityCertificate:
    """Measure commutant, word span, and Lie closure of block generators.

    `blocks[b][j]` is generator j restricted to block b; every block must
    list the same number of generators.  The certificate compares each
    measurement with the value a dense image forces and exposes `.dense`.
    """
    blocks = [[_require_unitary(g) for g in gens] for gens in blocks]
    if not blocks or not blocks[0]:
        raise DomainError("need at least one block with one generator")
    count = len(blocks[0])
    for gens in blocks:
        if len(gens) != count:
            raise DomainError("blocks disagree on the generator count")
        dim = gens[0].shape[0]
        if dim < 2:
            raise DomainError("blocks must be at least 2-dimensional")
        for g in gens:
            if g.shape[0] != dim:
                raise DomainError("generators within a block must share a shape")
            _eigenvalue_gate(g)

    dims = tuple(gens[0].shape[0] for gens in blocks)
    joint = [
        scipy.linalg.block_diag(*(blocks[b][j] for b in range(len(blocks))))
        for j in range(count)
    ]
    logs = [
        scipy.linalg.block_diag(
            *(principal_log(blocks[b][j]) for b in range(len(blocks)))
        )
        for j in range(count)
    ]

    commutant = commutant_dimension(joint, tol=tol, gap_min=gap_min)
    algebra = algebra_dimension(joint, tol=tol)
    closure = lie_closure(logs, rank_tol=tol, gap_min=gap_min)

    return DensityCertificate(
        block_dims=dims,
        generator_count=count,
        commutant_dim=commutant,
        algebra_dim=algebra,
        closure_dim=closure.dim,
        expected_commutant=len(blocks),
        expected_algebra=sum(d * d for d in dims),
        expected_closure=sum(d * d - 1 for d in dims),
        closure_gap=closure.gap,
        closure_tail=closure.tail,
        seed_hash=_seed_hash(blocks),
        tol=tol,
    )
