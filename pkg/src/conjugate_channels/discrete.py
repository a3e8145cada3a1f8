"""Exact finite-discrete probability: states, channels, predicates.

A carrier is a finite tuple of hashable, mutually orderable labels kept in
sorted order.  States and channels store dense numpy arrays aligned with
their carriers.  ``c >> omega`` is state transformation, ``c << r`` is
predicate transformation, ``d @ c`` is sequential composition (d after c).
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping

import numpy as np

from .errors import CarrierMismatch, DomainError, UnknownLabel, ZeroMassObservation, ZeroValidity

NORM_TOL = 1e-12
PRUNE_BELOW = 1e-15
ZERO_VALIDITY = 1e-300


def make_space(labels: Iterable) -> tuple:
    labels = tuple(labels)
    space = tuple(sorted(set(labels)))
    if not space:
        raise DomainError("a carrier must be non-empty")
    if len(space) != len(labels):
        raise DomainError("carrier labels must be distinct")
    return space


def _index(space, label):
    try:
        return space.index(label)
    except ValueError:
        raise UnknownLabel(label) from None


def _same_space(a, b, what="carriers"):
    if a != b:
        raise CarrierMismatch(f"{what} differ: {a!r} vs {b!r}")


class FiniteDist:
    """Probability distribution on a finite carrier.

    Weights below ``PRUNE_BELOW`` are set to zero and the rest renormalised;
    pruned labels stay in the carrier.
    """

    __slots__ = ("space", "_p")

    def __init__(self, weights: Mapping, space: Iterable | None = None):
        space = make_space(weights if space is None else space)
        p = np.zeros(len(space))
        for label, wt in weights.items():
            p[_index(space, label)] = float(wt)
        self._init(space, p)

    def _init(self, space, p):
        p = np.asarray(p, dtype=float)
        if p.shape != (len(space),) or np.any(~np.isfinite(p)) or np.any(p < 0):
            raise DomainError("weights must be finite and non-negative")
        if abs(p.sum() - 1.0) > NORM_TOL:
            raise DomainError(f"weights sum to {p.sum()!r}, not 1")
        p = np.where(p < PRUNE_BELOW, 0.0, p)
        p = p / p.sum()
        p.setflags(write=False)
        self.space = space
        self._p = p

    @classmethod
    def from_array(cls, space, probs) -> FiniteDist:
        obj = cls.__new__(cls)
        obj._init(make_space(space), probs)
        return obj

    @classmethod
    def uniform(cls, space) -> FiniteDist:
        space = make_space(space)
        return cls.from_array(space, np.full(len(space), 1.0 / len(space)))

    @property
    def probs(self) -> np.ndarray:
        return self._p

    @property
    def support(self) -> tuple:
        return tuple(x for x, p in zip(self.space, self._p) if p > 0)

    def __call__(self, label) -> float:
        return float(self._p[_index(self.space, label)])

    def __getitem__(self, label) -> float:
        return self(label)

    def as_dict(self) -> dict:
        return {x: float(p) for x, p in zip(self.space, self._p)}

    def mass(self, event: Iterable) -> float:
        event = set(event)
        return float(sum(p for x, p in zip(self.space, self._p) if x in event))

    def __repr__(self):
        terms = " + ".join(f"{p:.6g}|{x!r}>" for x, p in zip(self.space, self._p) if p > 0)
        return f"FiniteDist({terms})"


class RandVarD:
    """Real-valued function on a finite carrier; a predicate if its range lies in [0, 1]."""

    __slots__ = ("space", "_v")

    def __init__(self, values: Mapping, space: Iterable | None = None):
        space = make_space(values if space is None else space)
        if set(values) != set(space):
            raise CarrierMismatch("a random variable must be total on its carrier")
        v = np.array([float(values[x]) for x in space])
        self._init(space, v)

    def _init(self, space, v):
        v = np.asarray(v, dtype=float)
        if v.shape != (len(space),) or not np.all(np.isfinite(v)):
            raise DomainError("random-variable values must be finite")
        v.setflags(write=False)
        self.space = space
        self._v = v

    @classmethod
    def from_array(cls, space, values) -> RandVarD:
        obj = cls.__new__(cls)
        obj._init(make_space(space), values)
        return obj

    @property
    def values(self) -> np.ndarray:
        return self._v

    @property
    def is_predicate(self) -> bool:
        return bool(np.all((self._v >= 0) & (self._v <= 1)))

    def __call__(self, label) -> float:
        return float(self._v[_index(self.space, label)])

    def __and__(self, other: RandVarD) -> RandVarD:
        return rv_and(self, other)

    def __rmul__(self, a: float) -> RandVarD:
        return rv_scale(a, self)

    def __repr__(self):
        return "RandVarD(" + ", ".join(f"{x!r}: {v:.6g}" for x, v in zip(self.space, self._v)) + ")"


def constant(space, value: float = 1.0) -> RandVarD:
    space = make_space(space)
    return RandVarD.from_array(space, np.full(len(space), float(value)))


def indicator(space, event: Iterable) -> RandVarD:
    space = make_space(space)
    event = set(event)
    for e in event:
        _index(space, e)
    return RandVarD.from_array(space, [1.0 if x in event else 0.0 for x in space])


def point_predicate(space, y) -> RandVarD:
    return indicator(space, [y])


class DiscreteChannel:
    """Row-stochastic kernel ``input_space -> D(output_space)``."""

    __slots__ = ("input_space", "output_space", "_m")

    def __init__(self, kernel: Mapping, output_space: Iterable | None = None):
        """``kernel`` maps each input label to a FiniteDist or a weight mapping."""
        input_space = make_space(kernel)
        if output_space is None:
            outs = set()
            for row in kernel.values():
                outs.update(row.space if isinstance(row, FiniteDist) else row.keys())
            output_space = outs
        output_space = make_space(output_space)
        m = np.zeros((len(input_space), len(output_space)))
        for i, x in enumerate(input_space):
            row = kernel[x]
            row = row.as_dict() if isinstance(row, FiniteDist) else row
            for y, wt in row.items():
                m[i, _index(output_space, y)] = float(wt)
        self._init(input_space, output_space, m)

    def _init(self, input_space, output_space, m):
        m = np.asarray(m, dtype=float)
        if m.shape != (len(input_space), len(output_space)):
            raise DomainError("matrix shape does not match the carriers")
        if np.any(~np.isfinite(m)) or np.any(m < 0):
            raise DomainError("channel entries must be finite and non-negative")
        if np.any(np.abs(m.sum(axis=1) - 1.0) > NORM_TOL):
            raise DomainError("every channel row must sum to 1")
        m = np.where(m < PRUNE_BELOW, 0.0, m)
        m = m / m.sum(axis=1, keepdims=True)
        m.setflags(write=False)
        self.input_space = input_space
        self.output_space = output_space
        self._m = m

    @classmethod
    def from_matrix(cls, input_space, output_space, matrix) -> DiscreteChannel:
        obj = cls.__new__(cls)
        obj._init(make_space(input_space), make_space(output_space), matrix)
        return obj

    @property
    def matrix(self) -> np.ndarray:
        return self._m

    def __call__(self, x) -> FiniteDist:
        return FiniteDist.from_array(self.output_space, self._m[_index(self.input_space, x)])

    def __rshift__(self, omega: FiniteDist) -> FiniteDist:
        return push(self, omega)

    def __lshift__(self, r: RandVarD) -> RandVarD:
        return pull(self, r)

    def __matmul__(self, other: DiscreteChannel) -> DiscreteChannel:
        return compose(self, other)

    def __repr__(self):
        return f"DiscreteChannel({self.input_space!r} -> {self.output_space!r})"


class InvertedChannel(DiscreteChannel):
    """Bayesian inversion; remembers the outputs excluded for having zero mass."""

    __slots__ = ("excluded",)

    def __call__(self, y) -> FiniteDist:
        if y in self.excluded:
            raise ZeroMassObservation(f"observation {y!r} has zero predicted mass")
        return super().__call__(y)


def identity_channel(space) -> DiscreteChannel:
    space = make_space(space)
    return DiscreteChannel.from_matrix(space, space, np.eye(len(space)))


def dirac(x, space: Iterable | None = None) -> FiniteDist:
    """Point mass ``1|x>``; on ``space`` if given, else on ``{x}``."""
    space = make_space([x] if space is None else space)
    p = np.zeros(len(space))
    p[_index(space, x)] = 1.0
    return FiniteDist.from_array(space, p)


def push(c: DiscreteChannel, omega: FiniteDist) -> FiniteDist:
    _same_space(omega.space, c.input_space)
    return FiniteDist.from_array(c.output_space, omega.probs @ c.matrix)


def compose(d: DiscreteChannel, c: DiscreteChannel) -> DiscreteChannel:
    """``d after c``: first c, then d."""
    _same_space(c.output_space, d.input_space)
    return DiscreteChannel.from_matrix(c.input_space, d.output_space, c.matrix @ d.matrix)


def copy_channel(space) -> DiscreteChannel:
    space = make_space(space)
    pairs = [(x, y) for x in space for y in space]
    m = np.zeros((len(space), len(pairs)))
    for i, x in enumerate(space):
        m[i, pairs.index((x, x))] = 1.0
    return DiscreteChannel.from_matrix(space, pairs, m)


def tensor(c: DiscreteChannel, d: DiscreteChannel) -> DiscreteChannel:
    """Parallel composition on the product carrier (pairs of labels)."""
    ins = [(x, a) for x in c.input_space for a in d.input_space]
    outs = [(y, b) for y in c.output_space for b in d.output_space]
    # itertools.product order coincides with np.kron order
    return DiscreteChannel.from_matrix(ins, outs, np.kron(c.matrix, d.matrix))


def tuple_channel(c: DiscreteChannel, d: DiscreteChannel) -> DiscreteChannel:
    """``<c, d> = (c (x) d) after copy``."""
    _same_space(c.input_space, d.input_space, "tuple inputs")
    return compose(tensor(c, d), copy_channel(c.input_space))


def graph(c: DiscreteChannel) -> DiscreteChannel:
    """``<id, c>``."""
    return tuple_channel(identity_channel(c.input_space), c)


def product_state(omega: FiniteDist, rho: FiniteDist) -> FiniteDist:
    pairs = [(x, y) for x in omega.space for y in rho.space]
    return FiniteDist.from_array(pairs, np.outer(omega.probs, rho.probs).ravel())


def marginal(joint: FiniteDist, axis: int) -> FiniteDist:
    acc = {}
    for pair, p in zip(joint.space, joint.probs):
        acc[pair[axis]] = acc.get(pair[axis], 0.0) + p
    return FiniteDist.from_array(list(acc), [acc[k] for k in sorted(acc)])


def validity(omega: FiniteDist, r: RandVarD) -> float:
    _same_space(omega.space, r.space)
    return float(omega.probs @ r.values)


def pull(c: DiscreteChannel, r: RandVarD) -> RandVarD:
    _same_space(c.output_space, r.space)
    return RandVarD.from_array(c.input_space, c.matrix @ r.values)


def update(omega: FiniteDist, r: RandVarD) -> FiniteDist:
    """Conditioned state ``omega|_r``; ``r`` must be non-negative on the support."""
    _same_space(omega.space, r.space)
    if np.any(r.values[omega.probs > 0] < 0):
        raise DomainError("updating needs a non-negative random variable on the support")
    v = validity(omega, r)
    if not v > ZERO_VALIDITY:
        raise ZeroValidity(f"validity {v!r} is zero; cannot condition")
    return FiniteDist.from_array(omega.space, omega.probs * r.values / v)


def rv_and(r: RandVarD, s: RandVarD) -> RandVarD:
    _same_space(r.space, s.space)
    return RandVarD.from_array(r.space, r.values * s.values)


def rv_scale(a: float, r: RandVarD) -> RandVarD:
    return RandVarD.from_array(r.space, float(a) * r.values)


def inversion(c: DiscreteChannel, omega: FiniteDist) -> InvertedChannel:
    """Bayesian inversion ``Y -> X`` of ``c`` w.r.t. ``omega``.

    Rows are ``omega(x) c(x)(y) / (c >> omega)(y)``.  Outputs with zero
    predicted mass are left out of the input space and raise
    ``ZeroMassObservation`` when requested.
    """
    _same_space(omega.space, c.input_space)
    predicted = omega.probs @ c.matrix
    keep = predicted > ZERO_VALIDITY
    if not np.any(keep):  # pragma: no cover - predicted always sums to 1
        raise ZeroMassObservation("no observation has positive mass")
    joint = omega.probs[:, None] * c.matrix
    rows = (joint[:, keep] / predicted[keep]).T
    ys = [y for y, k in zip(c.output_space, keep) if k]
    inv = InvertedChannel.__new__(InvertedChannel)
    inv._init(make_space(ys), omega.space, rows)
    inv.excluded = frozenset(y for y, k in zip(c.output_space, keep) if not k)
    return inv


def is_deterministic(omega: FiniteDist, tol: float = 0.0) -> tuple[bool, float]:
    """Compare ``copy >> omega`` with ``omega (x) omega`` on every pair of labels."""
    copied = push(copy_channel(omega.space), omega)
    prod = product_state(omega, omega)
    err = float(np.max(np.abs(copied.probs - prod.probs)))
    return err <= tol, err
