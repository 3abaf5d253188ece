"""Gate compilation into braid words.

Two compilation routes share one projective metric:

  * `sk_compile`: recursive balanced-commutator refinement over the 2-dim
    three-strand sector, seeded by a deduplicated word net.  Guarantees
    any requested accuracy, at the cost of word length growing by a fixed
    factor per refinement level.
  * `search_compile`: budgeted deterministic beam search over six-strand
    words scored jointly on a pair of sectors.  No accuracy guarantee;
    returns the best word seen within the evaluation budget, and the
    sequence of evaluated words does not depend on the budget, so a larger
    budget can only improve the result.

All distances are projective: global phase is quotiented out, and a
multi-sector distance is the sum of the per-sector distances.
"""

from __future__ import annotations

import dataclasses
import functools
import math

import numpy as np
from scipy.spatial import cKDTree

from .errors import DomainError, IntegrityError, PrecisionError, ResourceError
from .jonesrep import BraidWord, SectorRep, evaluate, sector_rep

_PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
_PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

_DEDUP_TOL = 1e-8
_NET_COVERAGE_LIMIT = 0.45


def operator_norm(a: np.ndarray) -> float:
    """Largest singular value."""
    return float(np.linalg.norm(np.asarray(a), 2))


def phase_align(u: np.ndarray, v: np.ndarray) -> tuple[complex, float]:
    """Unit phase w minimizing ||w*u - v|| in operator norm, with the norm.

    Both matrices must be unitary; then ||w*u - v|| = max_j |w - mu_j| over
    the eigenvalues mu_j of u^H v, a minimax on the unit circle whose
    optimum is at an eigenvalue direction, a normalized two-point midpoint,
    or a quarter turn from an eigenvalue (the antipodal case).
    """
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    if u.shape != v.shape or u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise DomainError(f"shape mismatch: {u.shape} vs {v.shape}")
    mu = np.linalg.eigvals(u.conj().T @ v)
    mu = mu / np.abs(mu)
    candidates = list(mu) + list(1j * mu) + list(-1j * mu)
    for j in range(len(mu)):
        for k in range(j + 1, len(mu)):
            s = mu[j] + mu[k]
            mag = abs(s)
            if mag > 1e-12:
                candidates.append(s / mag)
                candidates.append(-s / mag)
    best_w, best_d = 1.0 + 0j, math.inf
    for w in candidates:
        d = float(np.abs(w - mu).max())
        if d < best_d:
            best_w, best_d = complex(w), d
    return best_w, best_d


def projective_distance(u: np.ndarray, v: np.ndarray) -> float:
    """min over unit phases w of ||w*u - v||, operator norm."""
    return phase_align(u, v)[1]


@dataclasses.dataclass(frozen=True)
class GateTarget:
    """A unitary to compile, given per sector in the frozen tableau basis."""

    name: str
    sectors: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        frozen = []
        for s in self.sectors:
            s = np.array(s, dtype=complex)
            if s.ndim != 2 or s.shape[0] != s.shape[1]:
                raise DomainError("sector targets must be square")
            if np.abs(s @ s.conj().T - np.eye(s.shape[0])).max() > 1e-8:
                raise DomainError(f"sector target for {self.name!r} is not unitary")
            s.flags.writeable = False
            frozen.append(s)
        object.__setattr__(self, "sectors", tuple(frozen))

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(s.shape[0] for s in self.sectors)


def gate_distance(target: GateTarget, mats) -> float:
    """Sum of per-sector projective distances."""
    mats = tuple(mats)
    if len(mats) != len(target.sectors):
        raise DomainError("sector count mismatch")
    return sum(projective_distance(m, s) for m, s in zip(mats, target.sectors))


def braid_target(name: str, reps, word: BraidWord) -> GateTarget:
    """Target whose sectors are the images of `word`; mostly for testing."""
    return GateTarget(name=name, sectors=tuple(evaluate(r, word) for r in reps))


@dataclasses.dataclass(frozen=True)
class CompiledBraid:
    """A braid word with its achieved distance to the requested target."""

    word: BraidWord
    distance: float
    method: str
    evaluations: int = 0


def _inverse_letters(letters) -> tuple[int, ...]:
    return tuple(-l for l in reversed(letters))


# ---------------------------------------------------------------------------
# SU(2) geometry for the balanced commutator construction


def su2_lift(m: np.ndarray) -> np.ndarray:
    """Scale a 2x2 unitary into SU(2), sign fixed by nonnegative real trace."""
    m = np.asarray(m, dtype=complex)
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    u = m / np.exp(0.5j * np.angle(det))
    if u[0, 0].real + u[1, 1].real < 0:
        u = -u
    return u


def axis_angle(u: np.ndarray) -> tuple[np.ndarray, float]:
    """Rotation axis and angle of an SU(2) element, angle in [0, pi]."""
    a = 0.5 * (u[0, 0].real + u[1, 1].real)
    x = -0.5 * (u[0, 1].imag + u[1, 0].imag)
    y = 0.5 * (u[1, 0].real - u[0, 1].real)
    z = 0.5 * (u[1, 1].imag - u[0, 0].imag)
    vec = np.array([x, y, z])
    s = float(np.linalg.norm(vec))
    theta = 2.0 * math.atan2(s, a)
    if s < 1e-14:
        return np.array([0.0, 0.0, 1.0]), theta
    return vec / s, theta


def rotation_su2(axis, angle: float) -> np.ndarray:
    axis = np.asarray(axis, dtype=float)
    axis = axis / np.linalg.norm(axis)
    sigma = axis[0] * _PAULI_X + axis[1] * _PAULI_Y + axis[2] * _PAULI_Z
    return math.cos(angle / 2) * np.eye(2) - 1j * math.sin(angle / 2) * sigma


def balanced_commutator(delta: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Split delta in SU(2) as an exact group commutator V X V^H X^H.

    Equal-angle rotations about x and y commutate to angle theta when
    sin(theta/2) = 2 s^2 sqrt(1 - s^4) with s = sin(phi/2); the choice
    s^2 = sin(theta/4) solves that identity exactly, and a conjugation
    carries the commutator axis onto the axis of delta.
    """
    d_axis, theta = axis_angle(delta)
    if theta > math.pi * 0.999:
        raise DomainError("commutator split needs a rotation angle below pi")
    phi = 2.0 * math.asin(math.sqrt(math.sin(theta / 4.0)))
    v = rotation_su2([1.0, 0.0, 0.0], phi)
    x = rotation_su2([0.0, 1.0, 0.0], phi)
    k = v @ x @ v.conj().T @ x.conj().T
    k_axis, _ = axis_angle(k)
    cross = np.cross(k_axis, d_axis)
    cross_norm = float(np.linalg.norm(cross))
    dot = float(np.dot(k_axis, d_axis))
    if cross_norm < 1e-12:
        if dot >= 0:
            s = np.eye(2, dtype=complex)
        else:
            perp = np.array([1.0, 0.0, 0.0])
            if abs(k_axis[0]) > 0.9:
                perp = np.array([0.0, 1.0, 0.0])
            perp = perp - np.dot(perp, k_axis) * k_axis
            s = rotation_su2(perp, math.pi)
    else:
        s = rotation_su2(cross / cross_norm, math.atan2(cross_norm, dot))
    v, x = s @ v @ s.conj().T, s @ x @ s.conj().T
    if np.abs(v @ x @ v.conj().T @ x.conj().T - delta).max() > 1e-8:
        raise IntegrityError("balanced commutator reconstruction failed")
    return v, x


# ---------------------------------------------------------------------------
# Word net


def _fingerprint(u: np.ndarray) -> np.ndarray:
    # phase-normalize the first row on its dominant entry; when two entries
    # tie in magnitude within 1e-6 the chosen pivot can flip under tiny
    # perturbations, which only costs a missed bucket, never a false merge
    row = np.asarray(u)[0].copy()
    mags = np.abs(row)
    pivot = int(np.argmax(mags >= mags.max() - 1e-6))
    row = row * (row[pivot].conjugate() / mags[pivot])
    return np.concatenate([row.real, row.imag])


class WordNet:
    """Deduplicated table of short braid words and their sector images.

    Breadth-first over word length, never extending through an exact
    inverse letter; projective duplicates keep their shortest (then
    lexicographically first) representative.  The empty word is not an
    entry; lookups weigh the identity separately.
    """

    def __init__(
        self,
        rep: SectorRep,
        max_length: int,
        dedup_tol: float = _DEDUP_TOL,
        max_entries: int = 500_000,
    ):
        if max_length < 1:
            raise DomainError("net needs max_length >= 1")
        self.rep = rep
        self.max_length = max_length
        self.dedup_tol = dedup_tol
        self._coverage_cache: dict[tuple[int, int], float] = {}
        letters = []
        for i in range(1, rep.n):
            letters.extend([i, -i])
        self._letters = tuple(letters)

        words: list[tuple[int, ...]] = []
        mats: list[np.ndarray] = []
        prints: list[np.ndarray] = []
        coarse = max(1e-6, 100 * dedup_tol)

        level: list[tuple[tuple[int, ...], np.ndarray]] = [((), np.eye(rep.dim, dtype=complex))]
        for _ in range(max_length):
            candidates: list[tuple[tuple[int, ...], np.ndarray]] = []
            for w, m in level:
                for letter in self._letters:
                    if w and letter == -w[-1]:
                        continue
                    candidates.append((w + (letter,), m @ rep.generator(letter)))
            if not candidates:
                break
            cand_prints = np.array([_fingerprint(m) for _, m in candidates])
            keep = [True] * len(candidates)
            if words:
                accepted_tree = cKDTree(np.array(prints))
                near = accepted_tree.query_ball_point(cand_prints, r=coarse)
                for ci, hits in enumerate(near):
                    for hi in hits:
                        if projective_distance(candidates[ci][1], mats[hi]) < dedup_tol:
                            keep[ci] = False
                            break
            cand_tree = cKDTree(cand_prints)
            for ci, cj in sorted(cand_tree.query_pairs(r=coarse)):
                if keep[ci] and keep[cj]:
                    if projective_distance(candidates[ci][1], candidates[cj][1]) < dedup_tol:
                        keep[cj] = False  # ci precedes cj in generation order
            level = []
            for ci, (w, m) in enumerate(candidates):
                if not keep[ci]:
                    continue
                words.append(w)
                mats.append(m)
                prints.append(cand_prints[ci])
                level.append((w, m))
            if len(words) > max_entries:
                raise ResourceError(
                    f"net exceeded {max_entries} entries at length {len(w)}"
                )

        self.words = words
        self.mats = mats
        self._tree = cKDTree(np.array(prints))
        self._eye = np.eye(rep.dim, dtype=complex)

    @property
    def size(self) -> int:
        return len(self.words)

    def lookup(
        self, u: np.ndarray, k: int = 48, include_identity: bool = True
    ) -> tuple[tuple[int, ...], float]:
        """Best net word for u by projective distance.

        Fingerprint buckets preselect k candidates; the winner is decided
        by exact distance, ties by word length then letters.
        """
        k = min(k, self.size)
        _, idx = self._tree.query(_fingerprint(u), k=k)
        idx = np.atleast_1d(idx)
        best: tuple[float, int, tuple[int, ...]] | None = None
        for i in idx:
            w = self.words[int(i)]
            d = projective_distance(u, self.mats[int(i)])
            key = (d, len(w), w)
            if best is None or key < best:
                best = key
        if include_identity:
            d_id = projective_distance(u, self._eye)
            if best is None or (d_id, 0, ()) < best:
                best = (d_id, 0, ())
        assert best is not None
        return best[2], best[0]

    def coverage_radius(self, samples: int = 512, seed: int = 0) -> float:
        """Largest lookup distance over seeded Haar-random unitaries."""
        key = (samples, seed)
        if key not in self._coverage_cache:
            rng = np.random.default_rng(np.random.SeedSequence(seed))
            worst = 0.0
            dim = self.rep.dim
            for _ in range(samples):
                z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
                q, r = np.linalg.qr(z)
                q = q * (np.conj(np.diagonal(r)) / np.abs(np.diagonal(r)))
                worst = max(worst, self.lookup(q)[1])
            self._coverage_cache[key] = worst
        return self._coverage_cache[key]


def build_net(rep: SectorRep, max_length: int, **kwargs) -> WordNet:
    return WordNet(rep, max_length, **kwargs)


@functools.lru_cache(maxsize=4)
def default_net(max_length: int = 9) -> WordNet:
    """Shared net over the 2-dim three-strand sector at r=5."""
    return WordNet(sector_rep(5, (2, 1)), max_length)


# ---------------------------------------------------------------------------
# Solovay-Kitaev


def sk_compile(
    target: np.ndarray,
    epsilon: float,
    rep: SectorRep | None = None,
    net: WordNet | None = None,
    max_depth: int = 12,
) -> CompiledBraid:
    """Compile a single-qubit unitary to the requested projective accuracy.

    Depths are tried in order, each one re-measured against the target with
    a fresh evaluation of the produced word; the first word within epsilon
    wins.  Raises PrecisionError when max_depth refinements cannot reach
    epsilon, and when the base net is too coarse for the recursion to
    contract at all.
    """
    if epsilon <= 0:
        raise DomainError("epsilon must be positive")
    if (rep is None) != (net is None):
        raise DomainError("pass both rep and net, or neither")
    if rep is None:
        rep = sector_rep(5, (2, 1))
        net = default_net()
    if rep.dim != 2:
        raise DomainError("refinement needs a 2-dim sector")
    target = np.asarray(target, dtype=complex)
    if target.shape != (2, 2):
        raise DomainError("target must be 2x2")
    if np.abs(target @ target.conj().T - np.eye(2)).max() > 1e-8:
        raise DomainError("target is not unitary")
    coverage = net.coverage_radius()
    if coverage > _NET_COVERAGE_LIMIT:
        raise PrecisionError(
            f"net coverage radius {coverage:.3f} exceeds {_NET_COVERAGE_LIMIT}"
        )

    target_su2 = su2_lift(target)

    def recurse(u: np.ndarray, level: int) -> tuple[tuple[int, ...], np.ndarray]:
        if level == 0:
            letters, _ = net.lookup(u)
            return letters, su2_lift(evaluate(rep, letters))
        w_letters, w_mat = recurse(u, level - 1)
        delta = su2_lift(u @ w_mat.conj().T)
        v, x = balanced_commutator(delta)
        v_letters, v_mat = recurse(v, level - 1)
        x_letters, x_mat = recurse(x, level - 1)
        letters = (
            v_letters
            + x_letters
            + _inverse_letters(v_letters)
            + _inverse_letters(x_letters)
            + w_letters
        )
        mat = v_mat @ x_mat @ v_mat.conj().T @ x_mat.conj().T @ w_mat
        return letters, mat

    base_letters, base_dist = net.lookup(target_su2)
    if base_dist <= epsilon:
        return CompiledBraid(
            word=BraidWord(rep.n, base_letters), distance=base_dist, method="sk"
        )
    for depth in range(1, max_depth + 1):
        letters, _ = recurse(target_su2, depth)
        word = BraidWord(rep.n, letters)
        dist = projective_distance(evaluate(rep, word), target)
        if dist <= epsilon:
            return CompiledBraid(word=word, distance=dist, method="sk")
    raise PrecisionError(
        f"no word within {epsilon} after {max_depth} refinement levels"
    )


# ---------------------------------------------------------------------------
# Budgeted beam search


def search_compile(
    target: GateTarget,
    reps,
    budget: int,
    seed: int = 0,
    beam_width: int = 16,
    stall_rounds: int = 4,
    elite_count: int = 4,
) -> CompiledBraid:
    """Deterministic beam search for a word scored on every sector at once.

    The same seed always evaluates the same word sequence regardless of
    budget: the budget only truncates it, so the result improves
    monotonically with budget.  Stalls trigger a reseeded beam of elites
    plus random words.  Score below 1e-12 returns immediately.
    """
    reps = tuple(reps)
    if not reps:
        raise DomainError("need at least one sector")
    n = reps[0].n
    if any(r.n != n for r in reps):
        raise DomainError("sectors disagree on strand count")
    if target.dims != tuple(r.dim for r in reps):
        raise DomainError(
            f"target dims {target.dims} do not match sectors {tuple(r.dim for r in reps)}"
        )
    if budget < 0:
        raise DomainError("budget must be nonnegative")

    letters = []
    for i in range(1, n):
        letters.extend([i, -i])
    rng = np.random.default_rng(np.random.SeedSequence(seed))

    best_letters: tuple[int, ...] = ()
    best_dist = math.inf
    evaluations = 0

    def score(word_letters, mats) -> float:
        nonlocal best_letters, best_dist, evaluations
        d = sum(projective_distance(m, s) for m, s in zip(mats, target.sectors))
        evaluations += 1
        if d < best_dist - 1e-15:
            best_dist = d
            best_letters = word_letters
        return d

    identity_mats = tuple(np.eye(r.dim, dtype=complex) for r in reps)
    score((), identity_mats)

    beam = [((), identity_mats)]
    elites: list[tuple[float, tuple[int, ...], tuple[np.ndarray, ...]]] = []
    stall = 0
    prev_best = best_dist

    def random_entry():
        length = int(rng.integers(1, 13))
        w: list[int] = []
        mats = list(identity_mats)
        for _ in range(length):
            choices = [l for l in letters if not w or l != -w[-1]]
            letter = int(choices[rng.integers(0, len(choices))])
            w.append(letter)
            mats = [m @ r.generator(letter) for m, r in zip(mats, reps)]
        return tuple(w), tuple(mats)

    while evaluations < budget and best_dist >= 1e-12:
        children = []
        for w, mats in beam:
            for letter in letters:
                if w and letter == -w[-1]:
                    continue
                cw = w + (letter,)
                cmats = tuple(m @ r.generator(letter) for m, r in zip(mats, reps))
                d = score(cw, cmats)
                children.append((d, cw, cmats))
                if evaluations >= budget or best_dist < 1e-12:
                    break
            if evaluations >= budget or best_dist < 1e-12:
                break
        if not children:
            break
        children.sort(key=lambda c: (c[0], len(c[1]), c[1]))
        for d, cw, cmats in children[: max(elite_count, 1)]:
            if all(cw != e[1] for e in elites):
                elites.append((d, cw, cmats))
        elites.sort(key=lambda c: (c[0], len(c[1]), c[1]))
        del elites[elite_count:]

        if best_dist < prev_best - 1e-15:
            stall = 0
            prev_best = best_dist
        else:
            stall += 1
        if stall >= stall_rounds:
            stall = 0
            beam = [(w, mats) for _, w, mats in elites]
            while len(beam) < beam_width and evaluations < budget:
                w, mats = random_entry()
                score(w, mats)
                beam.append((w, mats))
        else:
            beam = [(cw, cmats) for _, cw, cmats in children[:beam_width]]

    return CompiledBraid(
        word=BraidWord(n, best_letters),
        distance=best_dist,
        method="search",
        evaluations=evaluations,
    )
