"""Projective metric, word net, refinement and search compilation."""

import math

import numpy as np
import pytest

from tljones.errors import DomainError, PrecisionError, ResourceError
from tljones.compiler import (
    CompiledBraid,
    GateTarget,
    WordNet,
    axis_angle,
    balanced_commutator,
    braid_target,
    build_net,
    default_net,
    gate_distance,
    operator_norm,
    phase_align,
    projective_distance,
    rotation_su2,
    search_compile,
    sk_compile,
    su2_lift,
)
from tljones.jonesrep import BraidWord, evaluate, sector_rep

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)


def rz(theta: float) -> np.ndarray:
    return np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])


def haar_unitary(rng, dim: int) -> np.ndarray:
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.conj(np.diagonal(r)) / np.abs(np.diagonal(r)))


class TestOperatorNorm:
    def test_known_values(self):
        assert operator_norm(np.array([[0.0, 2.0], [0.0, 0.0]])) == pytest.approx(2.0)
        assert operator_norm(np.eye(3)) == pytest.approx(1.0)


class TestProjectiveDistance:
    def test_antipodal_pair_needs_quarter_turn(self):
        # the optimum sits at +-i, where both eigenvalues are sqrt(2) away
        d = projective_distance(np.eye(2), np.diag([1.0 + 0j, -1.0]))
        assert d == pytest.approx(math.sqrt(2), abs=1e-12)

    def test_rotation_closed_form(self):
        # the half-turn phase makes Rz(2*pi) = -I projectively trivial, so
        # the distance is the smaller of the two bisector evaluations
        rng = np.random.default_rng(5)
        for _ in range(40):
            a, b = rng.uniform(-math.pi, math.pi, size=2)
            quarter = (a - b) / 4
            expected = 2 * min(abs(math.sin(quarter)), abs(math.cos(quarter)))
            assert projective_distance(rz(a), rz(b)) == pytest.approx(expected, abs=1e-12)

    def test_phase_invariance_and_symmetry(self):
        rng = np.random.default_rng(6)
        for _ in range(10):
            u, v = haar_unitary(rng, 3), haar_unitary(rng, 3)
            d = projective_distance(u, v)
            assert projective_distance(1j * u, v) == pytest.approx(d, abs=1e-10)
            assert projective_distance(v, u) == pytest.approx(d, abs=1e-10)
            assert projective_distance(u, u) < 1e-12

    def test_triangle_inequality(self):
        rng = np.random.default_rng(7)
        for _ in range(10):
            u, v, w = (haar_unitary(rng, 4) for _ in range(3))
            duw = projective_distance(u, w)
            assert duw <= projective_distance(u, v) + projective_distance(v, w) + 1e-9

    def test_phase_align_consistency(self):
        rng = np.random.default_rng(8)
        u, v = haar_unitary(rng, 5), haar_unitary(rng, 5)
        w, d = phase_align(u, v)
        assert abs(abs(w) - 1) < 1e-12
        assert operator_norm(w * u - v) == pytest.approx(d, abs=1e-10)

    def test_shape_mismatch(self):
        with pytest.raises(DomainError):
            projective_distance(np.eye(2), np.eye(3))


class TestSU2Geometry:
    def test_lift_det_and_trace(self):
        rng = np.random.default_rng(9)
        for _ in range(10):
            m = np.exp(2j * rng.uniform()) * haar_unitary(rng, 2)
            u = su2_lift(m)
            det = u[0, 0] * u[1, 1] - u[0, 1] * u[1, 0]
            assert abs(det - 1) < 1e-12
            assert (u[0, 0] + u[1, 1]).real >= -1e-12
            assert projective_distance(u, m) < 1e-10

    def test_axis_angle_round_trip(self):
        rng = np.random.default_rng(10)
        for _ in range(20):
            axis = rng.normal(size=3)
            axis /= np.linalg.norm(axis)
            angle = rng.uniform(0.05, math.pi - 0.05)
            n, theta = axis_angle(rotation_su2(axis, angle))
            assert theta == pytest.approx(angle, abs=1e-12)
            assert np.allclose(n, axis, atol=1e-12)

    def test_identity_axis_angle(self):
        n, theta = axis_angle(np.eye(2, dtype=complex))
        assert theta == 0.0
        assert np.allclose(n, [0, 0, 1])

    def test_balanced_commutator_exact(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            axis = rng.normal(size=3)
            axis /= np.linalg.norm(axis)
            delta = rotation_su2(axis, rng.uniform(1e-4, 1.5))
            v, x = balanced_commutator(delta)
            back = v @ x @ v.conj().T @ x.conj().T
            assert np.abs(back - delta).max() < 1e-10

    def test_balanced_commutator_angle_formula(self):
        delta = rotation_su2([0.0, 0.0, 1.0], 0.8)
        v, _ = balanced_commutator(delta)
        _, phi = axis_angle(v)
        assert phi == pytest.approx(2 * math.asin(math.sqrt(math.sin(0.2))), abs=1e-12)

    def test_balanced_commutator_identity(self):
        v, x = balanced_commutator(np.eye(2, dtype=complex))
        assert np.abs(v @ x @ v.conj().T @ x.conj().T - np.eye(2)).max() < 1e-12

    def test_near_pi_rejected(self):
        with pytest.raises(DomainError):
            balanced_commutator(rotation_su2([1.0, 0, 0], math.pi))


class TestWordNet:
    def test_level_one_entries(self):
        net = build_net(sector_rep(5, (2, 1)), 1)
        assert net.size == 4
        assert net.words == [(1,), (-1,), (2,), (-2,)]

    def test_braid_relation_deduplicated(self):
        net = build_net(sector_rep(5, (2, 1)), 3)
        assert (1, 2, 1) in net.words
        assert (2, 1, 2) not in net.words

    def test_no_empty_word_entry(self):
        net = build_net(sector_rep(5, (2, 1)), 3)
        assert () not in net.words
        assert all(w[1:].count(0) == 0 for w in net.words)

    def test_lookup_exact_member(self):
        rep = sector_rep(5, (2, 1))
        net = build_net(rep, 4)
        letters, dist = net.lookup(evaluate(rep, (1, 2, -1)))
        assert letters == (1, 2, -1)
        assert dist < 1e-10

    def test_lookup_torsion_word_prefers_identity(self):
        rep = sector_rep(5, (2, 1))
        net = build_net(rep, 4)
        image = evaluate(rep, (1,) * 10)  # generator order is ten
        letters, dist = net.lookup(image)
        assert letters == ()
        assert dist < 1e-10
        letters, dist = net.lookup(image, include_identity=False)
        assert letters != ()
        assert dist > 0.1

    def test_coverage_shrinks_with_length(self):
        rep = sector_rep(5, (2, 1))
        shallow = build_net(rep, 5).coverage_radius(samples=128)
        deep = default_net().coverage_radius(samples=128)
        assert deep <= shallow + 1e-12
        assert deep < 0.45

    def test_coverage_cached(self):
        net = default_net()
        assert net.coverage_radius(samples=64) == net.coverage_radius(samples=64)

    def test_entry_cap(self):
        with pytest.raises(ResourceError):
            build_net(sector_rep(5, (2, 1)), 6, max_entries=50)


class TestSkCompile:
    @pytest.mark.parametrize("eps", [0.1, 0.03, 0.01])
    def test_hadamard_within_epsilon(self, eps):
        cb = sk_compile(HADAMARD, eps)
        assert cb.distance <= eps
        assert cb.method == "sk"
        # re-evaluate independently of the compiler's own bookkeeping
        rep = sector_rep(5, (2, 1))
        assert projective_distance(evaluate(rep, cb.word), HADAMARD) <= eps

    def test_phase_gate_thirtieth(self):
        t_gate = np.diag([1.0 + 0j, np.exp(0.25j * math.pi)])
        cb = sk_compile(t_gate, 1 / 30)
        assert cb.distance <= 1 / 30

    def test_word_length_grows_with_accuracy(self):
        lengths = [len(sk_compile(HADAMARD, eps).word) for eps in (0.1, 0.03, 0.01)]
        assert lengths == sorted(lengths)
        assert lengths[0] < lengths[-1]

    def test_refinement_contraction_factor(self):
        # each extra level multiplies length by about five, never eight
        a = sk_compile(HADAMARD, 0.03)
        b = sk_compile(HADAMARD, 0.003)
        assert len(b.word) <= 8 * 8 * len(a.word)  # at most two extra levels here
        assert b.distance < a.distance

    def test_net_short_circuit(self):
        rep = sector_rep(5, (2, 1))
        target = evaluate(rep, (1, 2))
        cb = sk_compile(target, 1e-6)
        assert cb.word.letters == (1, 2)
        assert cb.distance < 1e-10

    def test_identity_target(self):
        cb = sk_compile(np.eye(2, dtype=complex), 0.01)
        assert cb.word.letters == ()
        assert cb.distance < 1e-12

    def test_coarse_net_rejected(self):
        rep = sector_rep(5, (2, 1))
        coarse = build_net(rep, 2)
        if coarse.coverage_radius() <= 0.45:
            pytest.skip("length-2 net unexpectedly fine")
        with pytest.raises(PrecisionError):
            sk_compile(HADAMARD, 0.01, rep=rep, net=coarse)

    def test_bad_inputs(self):
        with pytest.raises(DomainError):
            sk_compile(HADAMARD, 0.0)
        with pytest.raises(DomainError):
            sk_compile(np.eye(3, dtype=complex), 0.1)
        with pytest.raises(DomainError):
            sk_compile(2 * np.eye(2, dtype=complex), 0.1)
        with pytest.raises(DomainError):
            sk_compile(HADAMARD, 0.1, rep=sector_rep(5, (2, 1)), net=None)


@pytest.fixture(scope="module")
def six_strand_pair():
    return sector_rep(5, (3, 3)), sector_rep(5, (4, 2))


class TestGateTarget:
    def test_dims(self, six_strand_pair):
        tgt = braid_target("w", six_strand_pair, BraidWord(6, (1, 4)))
        assert tgt.dims == (5, 8)

    def test_rejects_non_unitary(self):
        with pytest.raises(DomainError):
            GateTarget(name="bad", sectors=(np.ones((2, 2)),))

    def test_gate_distance_zero_on_own_word(self, six_strand_pair):
        w = BraidWord(6, (2, -5, 1))
        tgt = braid_target("w", six_strand_pair, w)
        mats = [evaluate(r, w) for r in six_strand_pair]
        assert gate_distance(tgt, mats) < 1e-12

    def test_gate_distance_sums_sectors(self, six_strand_pair):
        tgt = braid_target("id", six_strand_pair, BraidWord(6))
        mats = [evaluate(r, BraidWord(6, (3,))) for r in six_strand_pair]
        total = gate_distance(tgt, mats)
        parts = [
            projective_distance(m, s) for m, s in zip(mats, tgt.sectors)
        ]
        assert total == pytest.approx(sum(parts))
        assert all(p > 0 for p in parts)

    def test_sector_count_mismatch(self, six_strand_pair):
        tgt = braid_target("id", six_strand_pair, BraidWord(6))
        with pytest.raises(DomainError):
            gate_distance(tgt, [np.eye(5)])


class TestSearchCompile:
    def test_finds_single_letter_exactly(self, six_strand_pair):
        tgt = braid_target("s3", six_strand_pair, BraidWord(6, (3,)))
        res = search_compile(tgt, six_strand_pair, budget=500)
        assert res.word.letters == (3,)
        assert res.distance < 1e-12
        assert res.method == "search"

    def test_budget_zero_returns_identity(self, six_strand_pair):
        tgt = braid_target("s3", six_strand_pair, BraidWord(6, (3,)))
        res = search_compile(tgt, six_strand_pair, budget=0)
        assert res.word.letters == ()
        assert res.distance > 0

    def test_deterministic(self, six_strand_pair):
        tgt = braid_target("w", six_strand_pair, BraidWord(6, (1, 4, -2)))
        a = search_compile(tgt, six_strand_pair, budget=800, seed=3)
        b = search_compile(tgt, six_strand_pair, budget=800, seed=3)
        assert a.word == b.word
        assert a.distance == b.distance
        assert a.evaluations == b.evaluations

    def test_budget_monotone(self, six_strand_pair):
        rng = np.random.default_rng(12)
        tgt = GateTarget(
            name="haar",
            sectors=(haar_unitary(rng, 5), haar_unitary(rng, 8)),
        )
        dists = [
            search_compile(tgt, six_strand_pair, budget=b, seed=0).distance
            for b in (50, 300, 1500)
        ]
        assert dists[0] >= dists[1] >= dists[2]

    def test_improves_on_identity(self, six_strand_pair):
        rng = np.random.default_rng(13)
        tgt = GateTarget(
            name="haar",
            sectors=(haar_unitary(rng, 5), haar_unitary(rng, 8)),
        )
        idle = gate_distance(tgt, [np.eye(5), np.eye(8)])
        res = search_compile(tgt, six_strand_pair, budget=2000, seed=1)
        assert res.distance < idle
        assert res.evaluations <= 2000

    def test_bad_inputs(self, six_strand_pair):
        tgt = braid_target("id", six_strand_pair, BraidWord(6))
        with pytest.raises(DomainError):
            search_compile(tgt, six_strand_pair, budget=-1)
        with pytest.raises(DomainError):
            search_compile(tgt, six_strand_pair[:1], budget=10)
        with pytest.raises(DomainError):
            search_compile(tgt, (sector_rep(5, (2, 1)),) * 2, budget=10)
