"""Pauli noise channels and their graph-state-basis Z-error statistics.

A Pauli channel acting on one qubit of a graph state only shuffles the
graph-basis labels: Z flips the qubit's own bit, X flips the bits of all its
neighbors, Y flips both.  Each physical noise source therefore becomes a
``FlipSource``, a set of per-vertex flip probabilities, and the per-vertex
marginals that the hashing bounds consume follow from XOR-combining
independent sources.

Representation note: states are described only by their independent flip
sources, never by the full 2^N diagonal distribution, and the two-qubit edge
channel is likewise reduced to its per-vertex marginals.  This drops
cross-bit correlations on purpose; no quantity computed downstream depends
on them (the hashing bounds consume per-bit marginals only).  The oracle
module keeps the full joint distribution for small instances.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graphstate import Graph

_PROB_SUM_TOL = 1e-12
_DRIFT_TOL = 1e-9


class ChannelError(ValueError):
    """Raised for malformed channel parameters."""


@dataclass(frozen=True)
class PauliChannel:
    """Single-qubit Pauli channel with outcome probabilities (I, X, Y, Z)."""

    p_i: float
    p_x: float
    p_y: float
    p_z: float

    def __post_init__(self):
        probs = (self.p_i, self.p_x, self.p_y, self.p_z)
        if any(p < -_PROB_SUM_TOL or p > 1 + _PROB_SUM_TOL for p in probs):
            raise ChannelError(f"channel probabilities out of [0,1]: {probs}")
        if abs(sum(probs) - 1.0) > _PROB_SUM_TOL:
            raise ChannelError(f"channel probabilities sum to {sum(probs)}, not 1")

    @classmethod
    def depolarizing(cls, q: float) -> "PauliChannel":
        """Local depolarizing noise with strength parameter q (q=1 noiseless)."""
        if not 0.0 <= q <= 1.0:
            raise ChannelError(f"depolarizing parameter must be in [0,1], got {q}")
        e = (1.0 - q) / 4.0
        return cls(q + e, e, e, e)

    @classmethod
    def phase_flip(cls, p_z: float) -> "PauliChannel":
        """Pure Z noise applying a phase flip with probability p_z."""
        return cls(1.0 - p_z, 0.0, 0.0, p_z)

    @classmethod
    def biased(cls, p_x: float, p_z: float, p_y: float = 0.0) -> "PauliChannel":
        """Asymmetric channel with independent X/Z (and optional Y) weights."""
        return cls(1.0 - p_x - p_y - p_z, p_x, p_y, p_z)


@dataclass(frozen=True)
class EdgeZChannel:
    """Correlated two-qubit channel mixing Z_a, Z_b and Z_a Z_b, each (1-q)/3."""

    q: float

    def __post_init__(self):
        if not 0.0 <= self.q <= 1.0:
            raise ChannelError(f"edge channel parameter must be in [0,1], got {self.q}")


@dataclass(frozen=True)
class FlipSource:
    """One independent noise source as per-vertex bit-flip probabilities."""

    flip_prob: dict[int, float]

    @property
    def support(self) -> frozenset[int]:
        return frozenset(self.flip_prob)

    def __post_init__(self):
        for v, p in self.flip_prob.items():
            if not 0.0 <= p <= 1.0:
                raise ChannelError(f"flip probability {p} at vertex {v} out of [0,1]")


@dataclass(frozen=True)
class BitMarginal:
    """Per-vertex pair (P(bit=0), P(bit=1)); all the hashing bound ever needs."""

    vertex: int
    lambda0: float
    lambda1: float

    def __post_init__(self):
        assert abs(self.lambda0 + self.lambda1 - 1.0) <= _PROB_SUM_TOL

    @property
    def distribution(self) -> tuple[float, float]:
        return (self.lambda0, self.lambda1)


def channel_to_flip_source(g: Graph, v: int, ch: PauliChannel) -> FlipSource:
    """Translate a Pauli channel on vertex ``v`` into a flip source.

    The vertex's own bit flips with probability p_z + p_y, each neighbor's
    bit with probability p_x + p_y.
    """
    g._require(v)
    probs = {v: ch.p_z + ch.p_y}
    for u in g.neighbors(v):
        probs[u] = ch.p_x + ch.p_y
    return FlipSource(flip_prob=probs)


def edge_channel_to_flip_source(edge: tuple[int, int], q: float) -> FlipSource:
    """Marginal flip source of the two-qubit edge channel.

    Each endpoint's bit flips in two of the three equally weighted Z terms,
    so marginally with probability 2(1-q)/3.  The Z_a Z_b correlation is
    dropped (see the module note).
    """
    a, b = edge
    if a == b:
        raise ChannelError("edge channel needs two distinct vertices")
    p = 2.0 * (1.0 - EdgeZChannel(q).q) / 3.0
    return FlipSource(flip_prob={a: p, b: p})


def compose_depolarizing(q1: float, q2: float) -> float:
    """Strength of two local depolarizing maps in sequence (parameters multiply)."""
    for q in (q1, q2):
        if not 0.0 <= q <= 1.0:
            raise ChannelError(f"depolarizing parameter must be in [0,1], got {q}")
    return q1 * q2


def _clamp(p: float) -> float:
    assert -_DRIFT_TOL <= p <= 1.0 + _DRIFT_TOL, f"probability drifted to {p}"
    return min(1.0, max(0.0, p))


def flip_probability(sources: list[FlipSource], vertex: int) -> float:
    """Probability that ``vertex``'s bit is flipped by the XOR of all sources.

    Exact: the number of flips is odd with probability
    (1 - prod_s (1 - 2 p_s)) / 2 over the sources touching the vertex.
    """
    prod = 1.0
    for s in sources:
        p = s.flip_prob.get(vertex)
        if p is not None:
            prod *= 1.0 - 2.0 * p
    return _clamp((1.0 - prod) / 2.0)


def bit_marginals(g: Graph, sources: list[FlipSource]) -> list[BitMarginal]:
    """Per-vertex flip marginals of independent sources, for all vertices of g."""
    for s in sources:
        for v in s.flip_prob:
            g._require(v)
    out = []
    for v in g.vertices():
        p1 = flip_probability(sources, v)
        out.append(BitMarginal(vertex=v, lambda0=1.0 - p1, lambda1=p1))
    return out


def uniform_depolarizing_marginal(q: float, degree: int) -> tuple[float, float]:
    """Closed-form marginal of a vertex of given degree under uniform LDN q.

    The vertex's bit is hit by its own channel and one channel per neighbor,
    each contributing factor q to the XOR product: lambda1 = (1 - q^(d+1))/2.
    """
    p1 = _clamp((1.0 - q ** (degree + 1)) / 2.0)
    return (1.0 - p1, p1)


def uniform_edge_channel_marginal(q: float, degree: int) -> tuple[float, float]:
    """Closed-form marginal of a degree-d vertex with the edge channel on every edge."""
    p1 = _clamp((1.0 - (1.0 - 4.0 * (1.0 - q) / 3.0) ** degree) / 2.0)
    return (1.0 - p1, p1)


def pair_pattern_distribution(
    channels_a: list[PauliChannel], channels_b: list[PauliChannel]
) -> tuple[float, float, float, float]:
    """Exact 4-outcome Z-pattern distribution of a noisy two-qubit graph state.

    The pair a-b is the graph-state form of a Bell pair; patterns are indexed
    (mu_a, mu_b) as 2*mu_a + mu_b.  Unlike the marginal view this keeps the
    a-b correlation, which the bipartite hashing bound needs.
    """
    probs = [1.0, 0.0, 0.0, 0.0]

    def fold(outcomes):
        nonlocal probs
        new = [0.0, 0.0, 0.0, 0.0]
        for p, mask in outcomes:
            if p:
                for mu in range(4):
                    new[mu ^ mask] += p * probs[mu]
        probs = new

    for ch in channels_a:
        # X_a flips mu_b, Z_a flips mu_a, Y_a flips both
        fold([(ch.p_i, 0b00), (ch.p_x, 0b01), (ch.p_y, 0b11), (ch.p_z, 0b10)])
    for ch in channels_b:
        fold([(ch.p_i, 0b00), (ch.p_x, 0b10), (ch.p_y, 0b11), (ch.p_z, 0b01)])
    total = sum(probs)
    assert abs(total - 1.0) <= _DRIFT_TOL
    return tuple(_clamp(p) for p in probs)  # type: ignore[return-value]


def output_noise_factor(g: Graph, qubits: list[int], p: float) -> float:
    """Certified lower-bound fidelity multiplier for LDN(p) on output qubits.

    Each depolarizing source realizes the trivial total pattern at least
    with its all-identity weight, so the exact fidelity is bounded below by
    prod (1+3p)/4 over the listed qubits.  The argument needs every listed
    qubit to have at least one neighbor; isolated vertices are rejected.
    """
    if not 0.0 <= p <= 1.0:
        raise ChannelError(f"output noise parameter must be in [0,1], got {p}")
    factor = 1.0
    for v in qubits:
        if g.degree(v) == 0:
            raise ChannelError(
                f"output vertex {v} is isolated; the pattern-orthogonality bound does not apply"
            )
        factor *= (1.0 + 3.0 * p) / 4.0
    return factor
