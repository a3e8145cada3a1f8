import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conjugate_channels import discrete as dc
from conjugate_channels.errors import (
    CarrierMismatch,
    DomainError,
    UnknownLabel,
    ZeroMassObservation,
    ZeroValidity,
)
from conjugate_channels.harness import random_instance
from conjugate_channels.numerics import SeededSampler


@pytest.fixture
def coin():
    omega = dc.FiniteDist({"a": 0.5, "b": 0.5})
    c = dc.DiscreteChannel({"a": {1: 0.8, 0: 0.2}, "b": {1: 0.3, 0: 0.7}}, [0, 1])
    return omega, c


def random_channel(rng, xs, ys):
    return dc.DiscreteChannel.from_matrix(xs, ys, rng.dirichlet(np.ones(len(ys)), size=len(xs)))


def random_state(rng, xs):
    return dc.FiniteDist.from_array(xs, rng.dirichlet(np.ones(len(xs))))


@st.composite
def instances(draw):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_instance(SeededSampler(seed).generator())


class TestFiniteDist:
    def test_normalisation_enforced(self):
        with pytest.raises(DomainError):
            dc.FiniteDist({"a": 0.5, "b": 0.6})
        with pytest.raises(DomainError):
            dc.FiniteDist({"a": 1.5, "b": -0.5})

    def test_sorted_space_and_pruning(self):
        w = dc.FiniteDist({"b": 1 - 1e-17, "a": 1e-17})
        assert w.space == ("a", "b")
        assert w("a") == 0.0 and w("b") == 1.0

    def test_unknown_label(self):
        with pytest.raises(UnknownLabel):
            dc.FiniteDist({"a": 1.0})("z")

    def test_dirac(self):
        assert dc.dirac("a", ["a", "b"]).as_dict() == {"a": 1.0, "b": 0.0}


class TestPushCompose:
    def test_push_example(self, coin):
        omega, c = coin
        out = dc.push(c, omega)
        assert out(1) == pytest.approx(0.55, abs=1e-15)
        assert out(0) == pytest.approx(0.45, abs=1e-15)
        assert (c >> omega).as_dict() == out.as_dict()

    def test_identity_and_dirac(self, coin):
        omega, c = coin
        np.testing.assert_array_equal(dc.push(dc.identity_channel(omega.space), omega).probs, omega.probs)
        np.testing.assert_allclose(dc.push(c, dc.dirac("a", omega.space)).probs, c("a").probs)

    def test_unit_laws(self, rng):
        c = random_channel(rng, ["p", "q", "r"], ["u", "v"])
        np.testing.assert_allclose(dc.compose(c, dc.identity_channel(c.input_space)).matrix, c.matrix, atol=1e-15)
        np.testing.assert_allclose(dc.compose(dc.identity_channel(c.output_space), c).matrix, c.matrix, atol=1e-15)

    def test_matrix_product_oracle(self, rng):
        c = random_channel(rng, ["a", "b"], ["x", "y"])
        d = random_channel(rng, ["x", "y"], ["m", "n"])
        m = np.array([[sum(c.matrix[i, k] * d.matrix[k, j] for k in range(2)) for j in range(2)] for i in range(2)])
        np.testing.assert_allclose((d @ c).matrix, m, atol=1e-14)

    def test_compose_then_push(self, rng):
        c = random_channel(rng, list("abc"), list("xyzw"))
        d = random_channel(rng, list("xyzw"), list("mn"))
        omega = random_state(rng, list("abc"))
        np.testing.assert_allclose(dc.push(d @ c, omega).probs, dc.push(d, dc.push(c, omega)).probs, atol=1e-14)

    def test_carrier_mismatch(self, coin):
        omega, c = coin
        with pytest.raises(CarrierMismatch):
            dc.push(c, dc.FiniteDist({"z": 1.0}))
        with pytest.raises(CarrierMismatch):
            dc.compose(c, c)


class TestTensorGraph:
    def test_copy(self):
        cp = dc.copy_channel(["a", "b"])
        assert cp("a").as_dict()[("a", "a")] == 1.0
        assert sum(cp("a").probs) == 1.0

    def test_tensor_of_identities(self):
        i2 = dc.tensor(dc.identity_channel("ab"), dc.identity_channel("xy"))
        np.testing.assert_array_equal(i2.matrix, np.eye(4))

    def test_graph_joint(self, coin):
        omega, c = coin
        joint = dc.push(dc.graph(c), omega).as_dict()
        expect = {("a", 1): 0.4, ("a", 0): 0.1, ("b", 1): 0.15, ("b", 0): 0.35}
        for k, v in expect.items():
            assert joint[k] == pytest.approx(v, abs=1e-15)

    def test_tuple_rows_stochastic(self, rng):
        c = random_channel(rng, list("ab"), list("xyz"))
        d = random_channel(rng, list("ab"), list("mn"))
        for ch in (dc.tuple_channel(c, d), dc.tensor(c, d)):
            np.testing.assert_allclose(ch.matrix.sum(axis=1), 1.0, atol=1e-12)

    def test_marginals_of_graph(self, coin):
        omega, c = coin
        joint = dc.push(dc.graph(c), omega)
        np.testing.assert_allclose(dc.marginal(joint, 0).probs, omega.probs, atol=1e-15)
        np.testing.assert_allclose(dc.marginal(joint, 1).probs, dc.push(c, omega).probs, atol=1e-15)

    def test_deterministic(self):
        assert dc.is_deterministic(dc.dirac("b", "abc"))[0]
        ok, err = dc.is_deterministic(dc.FiniteDist.uniform("ab"))
        assert not ok and err == pytest.approx(0.25)


class TestLogic:
    def test_validity(self, coin):
        omega, c = coin
        assert dc.validity(omega, dc.constant(omega.space)) == pytest.approx(1.0)
        r = dc.RandVarD({"a": 0.8, "b": 0.3})
        assert dc.validity(omega, r) == pytest.approx(0.55, abs=1e-15)

    def test_validity_of_indicator(self, rng):
        omega = random_state(rng, list("abcde"))
        event = ["a", "c", "d"]
        assert dc.validity(omega, dc.indicator(omega.space, event)) == pytest.approx(omega.mass(event), abs=1e-15)

    def test_pull(self, coin):
        omega, c = coin
        np.testing.assert_allclose(dc.pull(c, dc.constant(c.output_space)).values, 1.0, atol=1e-15)
        np.testing.assert_allclose((c << dc.point_predicate(c.output_space, 1)).values, [0.8, 0.3])

    def test_pull_composition(self, rng):
        c = random_channel(rng, list("abc"), list("xyz"))
        d = random_channel(rng, list("xyz"), list("mn"))
        r = dc.RandVarD.from_array(d.output_space, rng.random(2))
        np.testing.assert_allclose(dc.pull(d @ c, r).values, dc.pull(c, dc.pull(d, r)).values, atol=1e-14)

    def test_update(self, coin):
        omega, _ = coin
        r = dc.RandVarD({"a": 0.8, "b": 0.3})
        out = dc.update(omega, r)
        assert out("a") == pytest.approx(8 / 11, abs=1e-15)
        assert out("b") == pytest.approx(3 / 11, abs=1e-15)
        np.testing.assert_array_equal(dc.update(omega, dc.constant(omega.space)).probs, omega.probs)

    def test_update_errors(self, coin):
        omega, _ = coin
        with pytest.raises(ZeroValidity):
            dc.update(omega, dc.constant(omega.space, 0.0))
        with pytest.raises(DomainError):
            dc.update(omega, dc.RandVarD({"a": -1.0, "b": 1.0}))

    def test_and_scale(self):
        r = dc.RandVarD({"a": 0.8, "b": 0.3})
        s = dc.RandVarD({"a": 0.5, "b": 0.5})
        np.testing.assert_allclose(dc.rv_and(r, s).values, [0.4, 0.15])
        np.testing.assert_allclose((r & dc.constant(r.space)).values, r.values)
        np.testing.assert_allclose(dc.rv_scale(3.7, r).values, 3.7 * r.values)

    def test_scale_invariance(self, rng):
        omega = random_state(rng, list("abcd"))
        r = dc.RandVarD.from_array(omega.space, rng.random(4))
        np.testing.assert_allclose(dc.update(omega, 3.7 * r).probs, dc.update(omega, r).probs, atol=1e-15)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_updates_commute(self, seed):
        rng = SeededSampler(seed).generator()
        omega = random_state(rng, list("abcde"))
        r = dc.RandVarD.from_array(omega.space, 0.05 + rng.random(5))
        s = dc.RandVarD.from_array(omega.space, 0.05 + rng.random(5))
        rs = dc.update(dc.update(omega, r), s).probs
        sr = dc.update(dc.update(omega, s), r).probs
        fused = dc.update(omega, r & s).probs
        np.testing.assert_allclose(rs, fused, atol=1e-12)
        np.testing.assert_allclose(sr, fused, atol=1e-12)


class TestInversion:
    def test_example(self, coin):
        omega, c = coin
        post = dc.inversion(c, omega)(1)
        assert post("a") == pytest.approx(8 / 11, abs=1e-15)
        assert post("b") == pytest.approx(3 / 11, abs=1e-15)

    def test_identity(self, rng):
        omega = random_state(rng, list("abc"))
        inv = dc.inversion(dc.identity_channel(omega.space), omega)
        for y in omega.space:
            assert inv(y).as_dict() == dc.dirac(y, omega.space).as_dict()

    def test_zero_mass_observation(self):
        omega = dc.FiniteDist({"a": 1.0, "b": 0.0})
        c = dc.DiscreteChannel({"a": {"x": 1.0, "y": 0.0}, "b": {"x": 0.0, "y": 1.0}})
        inv = dc.inversion(c, omega)
        assert inv("x")("a") == 1.0
        with pytest.raises(ZeroMassObservation):
            inv("y")

    @settings(max_examples=80, deadline=None)
    @given(instances())
    def test_joint_equality(self, inst):
        omega, c = inst
        left = dc.push(dc.graph(c), omega)
        inv = dc.inversion(c, omega)
        predicted = dc.push(c, omega)
        for (x, y), v in left.as_dict().items():
            right = 0.0 if predicted(y) == 0 else predicted(y) * inv(y)(x)
            assert abs(v - right) <= 1e-12

    @settings(max_examples=80, deadline=None)
    @given(instances())
    def test_update_point_predicate(self, inst):
        omega, c = inst
        inv = dc.inversion(c, omega)
        for y in c.output_space:
            if y in inv.excluded:
                continue
            upd = dc.update(omega, dc.pull(c, dc.point_predicate(c.output_space, y)))
            np.testing.assert_allclose(upd.probs, inv(y).probs, atol=1e-12)

    @settings(max_examples=80, deadline=None)
    @given(instances(), st.integers(0, 1000))
    def test_adjunction(self, inst, k):
        omega, c = inst
        r = dc.RandVarD.from_array(c.output_space, SeededSampler(k).generator().random(len(c.output_space)))
        assert abs(dc.validity(omega, dc.pull(c, r)) - dc.validity(dc.push(c, omega), r)) <= 1e-12
