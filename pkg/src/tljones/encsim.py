"""Encoded qubit registers inside braid sector representations.

A register of k qubits (k even) lives in the 3k-strand sector whose
boundary diagram is square, (3k/2, 3k/2).  Each consecutive strand
triple carries one qubit: the triple fuses to total label 1, and the
two computational states are the fusion channels of the triple's
first strand pair (channel 0 is bit 0, channel 2 is bit 1).  Label 3
on a triple is the leakage channel; it is orthogonal to every
computational state and is detected, never corrected.

Measurement is projective and collapses the register state.  Reading a
qubit requires its triple to be leakage-free; simulation shots that
leak are flagged and excluded from the reported distribution.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .compiler import (
    CompiledBraid,
    GateTarget,
    gate_distance,
    search_compile,
    sk_compile,
)
from .errors import (
    DomainError,
    IntegrityError,
    LeakedQubitError,
    PrecisionError,
    ResourceError,
)
from .gates import named_gate, rz
from .jonesrep import BraidWord, SectorRep, evaluate, sector_rep

_RANK_TOL = 1e-8
_PHASE_TOL = 1e-8
_NORM_TOL = 1e-9
_FORCE_TOL = 1e-12
_LEAK_TOL = 1e-10

_MAX_REGISTER_QUBITS = 4
_MAX_REFERENCE_QUBITS = 10


# ---------------------------------------------------------------------------
# sector operators per strand triple


def register_sector(num_qubits: int) -> SectorRep:
    """Sector representation hosting a register of that many qubits."""
    if num_qubits <= 0:
        raise DomainError("register needs at least one qubit pair")
    if num_qubits % 2 != 0:
        raise DomainError("register size must be even: the host sector "
                          "boundary is the square diagram (3k/2, 3k/2)")
    if num_qubits > _MAX_REGISTER_QUBITS:
        raise ResourceError(
            f"register of {num_qubits} qubits needs the full projector family "
            f"on {3 * num_qubits} strands; desk scale stops at 4 qubits")
    half = 3 * num_qubits // 2
    return sector_rep(5, (half, half))


def _triple_projectors(rep: SectorRep, triple: int) -> tuple[np.ndarray, np.ndarray]:
    """First and second cap projectors of a strand triple (1-based)."""
    k = rep.n // 3
    if not 1 <= triple <= k:
        raise DomainError(f"triple index {triple} outside 1..{k}")
    a = 3 * (triple - 1)  # projector index of e_(3i-2), 0-based
    return rep.projectors[a], rep.projectors[a + 1]


def leakage_projector(rep: SectorRep, triple: int) -> np.ndarray:
    """Projector onto the label-3 subspace of one strand triple.

    The subspace is the joint kernel of the triple's two cap projectors,
    extracted from an SVD of their stack.
    """
    ea, eb = _triple_projectors(rep, triple)
    stack = np.vstack([ea, eb])
    _, sv, vh = np.linalg.svd(stack)
    rank = int(np.count_nonzero(sv > _RANK_TOL))
    kernel = vh[rank:].conj().T
    proj = kernel @ kernel.conj().T
    return np.ascontiguousarray(proj)


def _bit_projector(rep: SectorRep, triple: int, bit: int) -> np.ndarray:
    ea, _ = _triple_projectors(rep, triple)
    if bit == 0:
        return ea
    jw = leakage_projector(rep, triple)
    return np.eye(rep.dim) - ea - jw


def _prefix_projector(rep: SectorRep, position: int, label: int) -> np.ndarray:
    diag = np.array(
        [1.0 if t.path[position] == label else 0.0 for t in rep.basis]
    )
    return np.diag(diag).astype(complex)


# ---------------------------------------------------------------------------
# encoding frames


def _rank_one_vector(proj: np.ndarray, basis_dim: int) -> np.ndarray:
    """Unit vector spanning the range of a rank-1 Hermitian projector.

    Phase convention: the coefficient on the earliest supporting basis
    path is real positive.
    """
    vals, vecs = np.linalg.eigh(proj)
    if vals[-1] < 0.5 or (basis_dim > 1 and vals[-2] > _RANK_TOL):
        raise IntegrityError(
            "computational projector is not rank one: top eigenvalues "
            f"{vals[-1]:.3e}, {vals[-2]:.3e}")
    vec = vecs[:, -1]
    support = np.flatnonzero(np.abs(vec) > _PHASE_TOL)
    pivot = vec[support[0]]
    vec = vec * (pivot.conjugate() / abs(pivot))
    return vec / np.linalg.norm(vec)


def _joint_frame(rep: SectorRep, triples: tuple[int, ...],
                 prefix_constraints: tuple[tuple[int, int], ...]) -> np.ndarray:
    """Columns = joint eigenvectors picking out each bit assignment.

    Each column is the (asserted rank-1) product of the commuting bit
    projectors over the listed triples and the listed diagonal prefix
    constraints, column index int(bits, 2) with the first triple as the
    most significant bit.
    """
    base = np.eye(rep.dim, dtype=complex)
    for position, label in prefix_constraints:
        base = base @ _prefix_projector(rep, position, label)
    cols = []
    width = len(triples)
    for code in range(2 ** width):
        proj = base.copy()
        for slot, triple in enumerate(triples):
            bit = (code >> (width - 1 - slot)) & 1
            proj = proj @ _bit_projector(rep, triple, bit)
        cols.append(_rank_one_vector(proj, rep.dim))
    frame = np.column_stack(cols)
    gram = frame.conj().T @ frame
    if not np.allclose(gram, np.eye(frame.shape[1]), atol=1e-8):
        raise IntegrityError("encoding frame columns are not orthonormal")
    frame.setflags(write=False)
    return frame


def complementary_labeling(num_qubits: int) -> tuple[tuple[int, int], ...]:
    """Boundary labels pinned between triples: alternating 1, 0, 1, ...

    This is the minimal admissible choice; it makes encoding
    deterministic.  For two qubits the constraint is already implied by
    the triples carrying label 1.
    """
    return tuple(
        (3 * j, 1 if j % 2 == 1 else 0) for j in range(1, num_qubits)
    )


@lru_cache(maxsize=8)
def encoding_frame(num_qubits: int) -> np.ndarray:
    """Isometry from 2^k computational amplitudes into the host sector."""
    rep = register_sector(num_qubits)
    triples = tuple(range(1, num_qubits + 1))
    return _joint_frame(rep, triples, complementary_labeling(num_qubits))


@lru_cache(maxsize=8)
def pair_qubit_frame(rows: tuple[int, int]) -> np.ndarray:
    """Two-qubit computational frame inside a 6-strand sector.

    Unlike the register frame there is no vacuum constraint: the
    computational block is wherever both triples carry label 1, which
    exists in both 6-strand sectors.
    """
    rep = sector_rep(5, rows)
    if rep.n != 6:
        raise DomainError("pair frames live on 6-strand sectors")
    return _joint_frame(rep, (1, 2), ())


def two_qubit_target(gate: np.ndarray, name: str = "") -> GateTarget:
    """Compilation target realizing a 4x4 gate on both 6-strand sectors.

    Per sector the target acts as the gate on the computational block
    and as the identity on its orthocomplement, so the exact target
    commutes with every label projector.
    """
    gate = np.asarray(gate, dtype=complex)
    if gate.shape != (4, 4):
        raise DomainError("two-qubit gate must be 4x4")
    sectors = []
    for rows in ((3, 3), (4, 2)):
        frame = pair_qubit_frame(rows)
        dim = frame.shape[0]
        block = frame @ gate @ frame.conj().T
        sectors.append(block + np.eye(dim) - frame @ frame.conj().T)
    return GateTarget(name=name, sectors=tuple(sectors))


def pair_sector_reps() -> tuple[SectorRep, SectorRep]:
    """The two 6-strand sectors every adjacent-pair word acts through."""
    return sector_rep(5, (3, 3)), sector_rep(5, (4, 2))


def embed_word(word: BraidWord, qubit: int, num_qubits: int) -> BraidWord:
    """Shift a word on one qubit's strand triple into the register braid group.

    A 3-strand word lands on the triple of `qubit`; a 6-strand word
    lands on the adjacent pair (qubit, qubit+1).
    """
    span = word.n_strands // 3
    if word.n_strands % 3 != 0 or span not in (1, 2):
        raise DomainError("embeddable words act on 3 or 6 strands")
    if not 1 <= qubit <= num_qubits - span + 1:
        raise DomainError(
            f"{word.n_strands}-strand word at qubit {qubit} does not fit "
            f"in a {num_qubits}-qubit register")
    offset = 3 * (qubit - 1)
    letters = tuple(
        letter + offset if letter > 0 else letter - offset
        for letter in word.letters
    )
    return BraidWord(3 * num_qubits, letters)


# ---------------------------------------------------------------------------
# register states


@dataclass(frozen=True)
class EncodedRegister:
    """State vector of an encoded register, in the host sector basis."""

    rep: SectorRep
    k: int
    state: np.ndarray
    v_choice: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        state = np.asarray(self.state, dtype=complex).reshape(-1)
        if state.shape[0] != self.rep.dim:
            raise DomainError("state length does not match the sector dimension")
        norm = np.linalg.norm(state)
        if abs(norm - 1.0) > _NORM_TOL:
            raise DomainError(f"register state is not normalized: |psi| = {norm}")
        state = state / norm
        state.setflags(write=False)
        object.__setattr__(self, "state", state)
        if not self.v_choice:
            object.__setattr__(self, "v_choice", complementary_labeling(self.k))

    @property
    def num_qubits(self) -> int:
        return self.k


def encode(bits) -> EncodedRegister:
    """Encode a computational basis state; register width = len(bits)."""
    if isinstance(bits, str):
        bits = tuple(int(c) for c in bits)
    else:
        bits = tuple(int(b) for b in bits)
    if any(b not in (0, 1) for b in bits):
        raise DomainError("bits must be 0 or 1")
    k = len(bits)
    amps = np.zeros(2 ** k)
    amps[int("".join(map(str, bits)), 2)] = 1.0
    return encode_amplitudes(k, amps)


def encode_amplitudes(num_qubits: int, amplitudes) -> EncodedRegister:
    """Linear extension of encode to a normalized 2^k amplitude vector."""
    rep = register_sector(num_qubits)
    frame = encoding_frame(num_qubits)
    amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
    if amps.shape[0] != 2 ** num_qubits:
        raise DomainError(f"expected {2 ** num_qubits} amplitudes")
    norm = np.linalg.norm(amps)
    if abs(norm - 1.0) > _NORM_TOL:
        raise DomainError("amplitudes must be normalized")
    return EncodedRegister(rep, num_qubits, frame @ (amps / norm))


def apply_braid(register: EncodedRegister, word) -> EncodedRegister:
    """Act on the register by a braid word (rightmost letter first)."""
    if isinstance(word, BraidWord) and word.n_strands != register.rep.n:
        raise DomainError(
            f"word braids {word.n_strands} strands, register has {register.rep.n}")
    mat = evaluate(register.rep, word)
    return EncodedRegister(register.rep, register.k, mat @ register.state,
                           register.v_choice)


def leakage_probability(register: EncodedRegister) -> float:
    """Exact probability that a full label readout sees any leaked triple."""
    psi = register.state
    for triple in range(1, register.k + 1):
        jw = leakage_projector(register.rep, triple)
        psi = psi - jw @ psi
    return float(max(0.0, 1.0 - np.vdot(psi, psi).real))


# ---------------------------------------------------------------------------
# measurement


@dataclass(frozen=True)
class MeasurementRecord:
    """One projective measurement outcome and its Born probability."""

    kind: str  # "label" or "sigma_z"
    site: int
    outcome: int
    probability: float


def _as_rng(rng) -> np.random.Generator:
    if rng is None:
        raise DomainError("unforced measurement needs a seed or generator")
    return np.random.default_rng(rng)


def measure_label(register: EncodedRegister, site: int, rng=None,
                  force: int | None = None
                  ) -> tuple[MeasurementRecord, EncodedRegister]:
    """Projectively measure one triple's total label (1 or 3).

    With `force` the stated outcome is postselected; an outcome of
    near-zero probability cannot be forced.
    """
    jw = leakage_projector(register.rep, site)
    leaked_part = jw @ register.state
    p3 = float(np.vdot(leaked_part, leaked_part).real)
    p3 = min(max(p3, 0.0), 1.0)
    if force is not None:
        if force not in (1, 3):
            raise DomainError("triple labels are 1 or 3")
        prob = p3 if force == 3 else 1.0 - p3
        if prob < _FORCE_TOL:
            raise DomainError(
                f"cannot force label {force}: outcome probability {prob:.3e}")
        outcome = force
    else:
        outcome = 3 if _as_rng(rng).random() < p3 else 1
    if outcome == 3:
        new_state = leaked_part
        probability = p3
    else:
        new_state = register.state - leaked_part
        probability = 1.0 - p3
    new_state = new_state / np.linalg.norm(new_state)
    record = MeasurementRecord("label", site, outcome, probability)
    return record, EncodedRegister(register.rep, register.k, new_state,
                                   register.v_choice)


def measure_sigma_z(register: EncodedRegister, site: int, rng=None
                    ) -> tuple[MeasurementRecord, EncodedRegister]:
    """Projectively read one qubit in the computational basis.

    The triple must already be leakage-free; reading a leaked qubit is
    a precondition violation, not a random outcome.
    """
    jw = leakage_projector(register.rep, site)
    leaked = jw @ register.state
    p_leak = float(np.vdot(leaked, leaked).real)
    if p_leak > _LEAK_TOL:
        raise LeakedQubitError(
            f"triple {site} holds leakage weight {p_leak:.3e}; "
            "measure its label first")
    ea, _ = _triple_projectors(register.rep, site)
    zero_part = ea @ register.state
    p0 = float(np.vdot(zero_part, zero_part).real)
    p0 = min(max(p0, 0.0), 1.0)
    bit = 0 if _as_rng(rng).random() < p0 else 1
    if bit == 0:
        new_state = zero_part
        probability = p0
    else:
        new_state = register.state - zero_part - leaked
        probability = 1.0 - p0
    new_state = new_state / np.linalg.norm(new_state)
    record = MeasurementRecord("sigma_z", site, bit, probability)
    return record, EncodedRegister(register.rep, register.k, new_state,
                                   register.v_choice)


# ---------------------------------------------------------------------------
# circuits


@dataclass(frozen=True)
class GateOp:
    """One gate: kind "1q" or "2q", sites (1-based), named or raw matrix."""

    kind: str
    sites: tuple[int, ...]
    name: str | None = None
    matrix: np.ndarray | None = None
    params: tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind not in ("1q", "2q"):
            raise DomainError(f"gate kind must be '1q' or '2q', got {self.kind!r}")
        object.__setattr__(self, "sites", tuple(int(s) for s in self.sites))
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        arity = 1 if self.kind == "1q" else 2
        if len(self.sites) != arity:
            raise DomainError(f"{self.kind} gate needs {arity} site(s)")
        if arity == 2 and self.sites[1] != self.sites[0] + 1:
            raise DomainError(
                "two-qubit gates act on adjacent ascending pairs (q, q+1)")
        if (self.name is None) == (self.matrix is None):
            raise DomainError("give exactly one of gate name or matrix")
        if self.matrix is not None:
            mat = np.asarray(self.matrix, dtype=complex)
            if mat.shape != (2 ** arity,) * 2:
                raise DomainError(f"{self.kind} gate matrix must be "
                                  f"{2 ** arity}x{2 ** arity}")
            if np.abs(mat @ mat.conj().T - np.eye(2 ** arity)).max() > 1e-8:
                raise DomainError("gate matrix is not unitary")
            mat.setflags(write=False)
            object.__setattr__(self, "matrix", mat)
        else:
            resolved, named_arity = named_gate(self.name, self.params)
            del resolved
            if named_arity != arity:
                raise DomainError(
                    f"gate {self.name!r} is a {named_arity}-qubit gate, "
                    f"declared {self.kind}")

    def gate_matrix(self) -> np.ndarray:
        if self.matrix is not None:
            return np.array(self.matrix)
        return named_gate(self.name, self.params)[0]

    def to_doc(self) -> dict:
        doc: dict = {"kind": self.kind, "sites": list(self.sites)}
        if self.name is not None:
            doc["name"] = self.name
            if self.params:
                doc["params"] = list(self.params)
        else:
            doc["matrix"] = [[[float(z.real), float(z.imag)] for z in row]
                             for row in self.matrix]
        return doc

    @classmethod
    def from_doc(cls, doc: dict) -> "GateOp":
        matrix = None
        if "matrix" in doc:
            matrix = np.array(
                [[complex(cell[0], cell[1]) for cell in row]
                 for row in doc["matrix"]])
        return cls(kind=str(doc["kind"]), sites=tuple(doc["sites"]),
                   name=doc.get("name"), matrix=matrix,
                   params=tuple(doc.get("params", ())))


@dataclass(frozen=True)
class Circuit:
    """Gate list on a fixed-width register plus the readout qubits."""

    k: int
    gates: tuple[GateOp, ...]
    readout: tuple[int, ...] = ()

    def __post_init__(self):
        if self.k < 1:
            raise DomainError("circuit needs at least one qubit")
        gates = tuple(self.gates)
        object.__setattr__(self, "gates", gates)
        readout = tuple(int(q) for q in self.readout)
        if not readout:
            readout = tuple(range(1, self.k + 1))
        object.__setattr__(self, "readout", readout)
        for op in gates:
            if any(not 1 <= q <= self.k for q in op.sites):
                raise DomainError(f"gate {op.name or 'matrix'} touches sites "
                                  f"outside 1..{self.k}")
        if len(set(self.readout)) != len(self.readout):
            raise DomainError("readout qubits must be distinct")
        if any(not 1 <= q <= self.k for q in self.readout):
            raise DomainError("readout qubit outside the register")

    def to_doc(self) -> dict:
        return {
            "k": self.k,
            "gates": [op.to_doc() for op in self.gates],
            "readout": list(self.readout),
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "Circuit":
        try:
            k = int(doc["k"])
            gates = tuple(GateOp.from_doc(entry) for entry in doc.get("gates", ()))
            readout = tuple(doc.get("readout", ()))
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise DomainError(f"malformed circuit document: {exc}") from exc
        return cls(k, gates, readout)

    @classmethod
    def from_json(cls, text: str) -> "Circuit":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DomainError(f"circuit is not valid JSON: {exc}") from exc
        if not isinstance(doc, dict):
            raise DomainError("circuit document must be a JSON object")
        return cls.from_doc(doc)


def reference_qcm(circuit: Circuit) -> dict[str, float]:
    """Exact readout distribution from a dense statevector simulation.

    The reference model knows nothing about braids or leakage; it is
    the yardstick the encoded simulation is judged against.
    """
    k = circuit.k
    if k > _MAX_REFERENCE_QUBITS:
        raise ResourceError(f"dense reference capped at {_MAX_REFERENCE_QUBITS}"
                            f" qubits, circuit has {k}")
    psi = np.zeros((2,) * k, dtype=complex)
    psi[(0,) * k] = 1.0
    for op in circuit.gates:
        arity = len(op.sites)
        tensor = op.gate_matrix().reshape((2,) * (2 * arity))
        axes = [q - 1 for q in op.sites]
        psi = np.tensordot(tensor, psi, axes=(range(arity, 2 * arity), axes))
        psi = np.moveaxis(psi, range(arity), axes)
    probs = np.abs(psi) ** 2
    keep = [q - 1 for q in circuit.readout]
    drop = tuple(ax for ax in range(k) if ax not in keep)
    marginal = probs.sum(axis=drop) if drop else probs
    # surviving axes keep ascending qubit order; permute to readout order
    order = np.argsort(np.argsort(keep))
    marginal = np.transpose(marginal, axes=order)
    out: dict[str, float] = {}
    for idx in np.ndindex(marginal.shape):
        p = float(marginal[idx])
        if p > 1e-15:
            out["".join(str(b) for b in idx)] = p
    return out


# ---------------------------------------------------------------------------
# encoded simulation


@dataclass(frozen=True)
class SimulationResult:
    """Shot record of an encoded run, leaked shots kept apart."""

    k: int
    shots: int
    counts: dict[str, int]
    leaked_shots: int
    braid_length: int
    compile_report: tuple[dict, ...] = field(default_factory=tuple)

    @property
    def leakage_rate(self) -> float:
        return self.leaked_shots / self.shots if self.shots else 0.0

    @property
    def distribution(self) -> dict[str, float]:
        good = self.shots - self.leaked_shots
        if good <= 0:
            return {}
        return {key: count / good for key, count in sorted(self.counts.items())}

    def to_doc(self) -> dict:
        return {
            "k": self.k,
            "shots": self.shots,
            "counts": dict(sorted(self.counts.items())),
            "leaked_shots": self.leaked_shots,
            "leakage_rate": self.leakage_rate,
            "distribution": self.distribution,
            "braid_length": self.braid_length,
            "compile_report": list(self.compile_report),
        }


def _compile_op(op: GateOp, epsilon: float, budget: int,
                seed: int) -> CompiledBraid:
    """Compile one gate to a braid word on 3 or 6 strands."""
    if op.kind == "1q":
        return sk_compile(op.gate_matrix(), epsilon)
    target = two_qubit_target(op.gate_matrix(), name=op.name or "2q")
    return search_compile(target, pair_sector_reps(), budget=budget, seed=seed)


def compile_circuit(circuit: Circuit, epsilon: float = 1 / 30,
                    budget: int = 20000, seed: int = 0
                    ) -> tuple[BraidWord, tuple[dict, ...]]:
    """Compile every gate and splice the words into one register braid.

    Gate order reverses in the splice: the first gate's word sits at
    the right end so it acts on the state first.
    """
    seq = np.random.SeedSequence(seed)
    children = seq.spawn(len(circuit.gates) + 1)
    cache: dict[tuple, CompiledBraid] = {}
    words: list[BraidWord] = []
    reports: list[dict] = []
    for op, child in zip(circuit.gates, children):
        key = (op.kind, op.name, op.params,
               op.matrix.tobytes() if op.matrix is not None else None)
        if key not in cache:
            child_seed = int(child.generate_state(1, np.uint32)[0])
            cache[key] = _compile_op(op, epsilon, budget, child_seed)
        compiled = cache[key]
        words.append(embed_word(compiled.word, op.sites[0], circuit.k))
        reports.append({
            "gate": op.name or "matrix",
            "sites": list(op.sites),
            "method": compiled.method,
            "length": len(compiled.word),
            "distance": compiled.distance,
        })
    total = BraidWord(3 * circuit.k, ())
    for word in reversed(words):
        total = total + word
    return total, tuple(reports)


def simulate_circuit(circuit: Circuit, epsilon: float = 1 / 30,
                     budget: int = 20000, seed: int = 0,
                     shots: int = 10000) -> SimulationResult:
    """Run a circuit on the encoded register and sample measurement shots.

    The whole circuit becomes one braid before anything is measured
    (no mid-circuit label checks).  Every shot then measures each
    triple's label; a label-3 outcome anywhere marks the shot leaked
    and drops it from the counts.  Surviving shots read the readout
    qubits in order, with collapse.
    """
    if shots < 1:
        raise DomainError("need at least one shot")
    if circuit.k % 2 != 0:
        raise DomainError("encoded registers have even width")
    word, reports = compile_circuit(circuit, epsilon=epsilon, budget=budget,
                                    seed=seed)
    register = apply_braid(encode("0" * circuit.k), word)
    shot_seed = np.random.SeedSequence(seed).spawn(len(circuit.gates) + 1)[-1]
    rng = np.random.default_rng(shot_seed)
    counts: dict[str, int] = {}
    leaked_shots = 0
    for _ in range(shots):
        current = register
        leaked = False
        for triple in range(1, circuit.k + 1):
            record, current = measure_label(current, triple, rng)
            if record.outcome == 3:
                leaked = True
                break
        if leaked:
            leaked_shots += 1
            continue
        bits = []
        for qubit in circuit.readout:
            record, current = measure_sigma_z(current, qubit, rng)
            bits.append(record.outcome)
        key = "".join(str(b) for b in bits)
        counts[key] = counts.get(key, 0) + 1
    return SimulationResult(
        k=circuit.k,
        shots=shots,
        counts=counts,
        leaked_shots=leaked_shots,
        braid_length=len(word),
        compile_report=reports,
    )


def total_variation(p: dict[str, float], q: dict[str, float]) -> float:
    """Total variation distance between two outcome distributions."""
    keys = set(p) | set(q)
    return 0.5 * sum(abs(p.get(key, 0.0) - q.get(key, 0.0)) for key in keys)


# ---------------------------------------------------------------------------
# diagnostics for the leakage and operator-norm claims


def identity_probe(theta: float, epsilon: float | None = None,
                   max_tries: int = 8) -> BraidWord:
    """A 6-strand braid at dialable distance ~1.5*theta from the identity gate.

    Conjugates a compiled z-rotation on the second triple by the
    crossing that straddles the triple boundary; the commutator cancels
    to first order in theta.  The cancellation needs the compiled
    rotation's block phase to agree with its label-3 line phase, both
    of which are pinned (the determinant forces the block phase to a
    20th root of unity, the label line carries q^(exponent sum)); a
    compilation landing on the wrong residue is rejected and retried
    at a slightly tighter accuracy.
    """
    if theta <= 0 or theta > 1.0:
        raise DomainError("probe angle must be in (0, 1]")
    eps = epsilon if epsilon is not None else theta / 20
    rep21 = sector_rep(5, (2, 1))
    target = rz(theta)
    for _ in range(max_tries):
        u = sk_compile(target, eps)
        mat = evaluate(rep21, u.word)
        overlap = np.trace(target.conj().T @ mat)
        exponent_sum = sum(1 if letter > 0 else -1 for letter in u.word.letters)
        label_phase = np.exp(2j * math.pi * exponent_sum / 5)
        block_phase = overlap / abs(overlap)
        if abs(label_phase / block_phase - 1.0) < 0.5:
            inner = embed_word(u.word, 2, 2)
            return (BraidWord(6, (3,)) + inner + BraidWord(6, (-3,))
                    + inner.inverse())
        eps *= 0.8
    raise PrecisionError(
        "no phase-consistent rotation word found for the leakage probe")


def identity_gate_distance(word: BraidWord) -> float:
    """Distance of a 6-strand word to the do-nothing two-qubit gate."""
    target = two_qubit_target(np.eye(4), name="id")
    return gate_distance(
        target, tuple(evaluate(r, word) for r in pair_sector_reps()))


def block_restricted_error(sector_matrix: np.ndarray, gate: np.ndarray,
                           frame: np.ndarray) -> float:
    """Operator-norm error of a sector matrix against a gate, on the block.

    Minimizes |w * M P - F g F'| over unit phases w, where P = F F' is
    the computational projector.  Since F is an isometry this equals
    the norm of w * (M F) - F g, a thin matrix, scanned over the phase
    circle and polished by ternary search.
    """
    left = np.asarray(sector_matrix, dtype=complex) @ frame
    right = frame @ np.asarray(gate, dtype=complex)

    def err(phi: float) -> float:
        return float(np.linalg.svd(np.exp(1j * phi) * left - right,
                                   compute_uv=False)[0])

    grid = np.linspace(-math.pi, math.pi, 2048, endpoint=False)
    values = [err(phi) for phi in grid]
    best = int(np.argmin(values))
    lo = grid[best] - 2 * math.pi / 2048
    hi = grid[best] + 2 * math.pi / 2048
    for _ in range(40):
        third = (hi - lo) / 3
        if err(lo + third) < err(hi - third):
            hi = hi - third
        else:
            lo = lo + third
    return err(0.5 * (lo + hi))
