"""Finite-size fidelity bounds for bipartite and multipartite hashing.

The protocol identifies, per purified string, the likely-subspace member the
input ensemble collapsed to.  Two failure modes shrink the success
probability at finite ensemble size n: the sample entropy can stray more
than a slack ``delta`` from the true entropy (bounded by a Bennett-type
concentration inequality), and the parity measurements can fail to single
out the string (bounded by 2^(-n*delta)).  Together:

    f = 1 - 2*exp(-n * (V/a^2) * h(a*delta/V)) - 2^(-n*delta)

with a = max_i |-log2(p_i) - S|, V = sum_i p_i log2(p_i)^2 - S^2 taken over
the nonzero outcomes, and h(u) = (1+u)*ln(1+u) by default (the
"simplified" mode; the "standard" mode keeps the usual -u term of the
Bennett rate function, for sensitivity checks).

For a two-colorable graph state one subprotocol per color runs on a shared
copy budget: requesting m outputs from n inputs leaves a total slack
Delta = (1 - sum_c S_c - m/n)/2 to distribute over the colors, and inside a
color every vertex with entropy below the color maximum automatically gets
the surplus (delta_k = delta_c + (S_c - S_k)/2).  The global bound is the
product of the per-vertex success probabilities.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .graphstate import Graph
from .noise import BitMarginal

SPLIT_GRID_STEPS = 200
SPLIT_REFINE_FACTOR = 20


class InfeasibleTargetError(ValueError):
    """The (n, m) target cannot be met: some slack parameter is not positive."""


class DistributionError(ValueError):
    """Malformed outcome distribution."""


def _validated(probs: Sequence[float]) -> list[float]:
    probs = [float(p) for p in probs]
    if any(p < -1e-12 or p > 1 + 1e-12 for p in probs):
        raise DistributionError(f"probabilities out of [0,1]: {probs}")
    if abs(sum(probs) - 1.0) > 1e-12:
        raise DistributionError(f"probabilities sum to {sum(probs)}, not 1")
    return [min(1.0, max(0.0, p)) for p in probs]


def entropy(probs: Sequence[float]) -> float:
    """Shannon entropy in bits, with 0*log(0) taken as 0."""
    probs = _validated(probs)
    return -sum(p * math.log2(p) for p in probs if p > 0.0)


def _spread_and_variance(probs: Sequence[float]) -> tuple[float, float, float]:
    """Entropy S, spread a = max |-log2 p - S| and variance V of -log2 p.

    Zero-probability outcomes are excluded so the logarithms stay finite.
    """
    s = entropy(probs)
    nonzero = [p for p in probs if p > 0.0]
    a = max(abs(-math.log2(p) - s) for p in nonzero)
    v = sum(p * math.log2(p) ** 2 for p in nonzero) - s * s
    return s, a, max(0.0, v)


def bennett_loss(probs: Sequence[float], n: int, delta: float, h_mode: str = "simplified") -> float:
    """Total failure weight 2*exp(-n (V/a^2) h(a delta/V)) + 2^(-n delta).

    Returned unclamped so callers can form high-precision products of many
    near-one success factors.  Degenerate deterministic distributions
    (S = 0, so a = V = 0) have no concentration failure mode and contribute
    only the identification term.
    """
    if n < 1:
        raise InfeasibleTargetError(f"need at least one input copy, got n={n}")
    if delta <= 0.0:
        raise InfeasibleTargetError(f"slack must be positive, got delta={delta}")
    s, a, v = _spread_and_variance(probs)
    if s == 0.0 or a == 0.0 or v == 0.0:
        concentration = 0.0
    else:
        u = a * delta / v
        if h_mode == "simplified":
            h = (1.0 + u) * math.log1p(u)
        elif h_mode == "standard":
            h = (1.0 + u) * math.log1p(u) - u
        else:
            raise ValueError(f"unknown h_mode {h_mode!r}")
        concentration = 2.0 * math.exp(-n * (v / (a * a)) * h)
    identification = 2.0 ** (-n * delta)
    return concentration + identification


def bennett_success(probs: Sequence[float], n: int, delta: float, h_mode: str = "simplified") -> float:
    """Lower bound on the success probability of identifying one string.

    Clamped into [0, 1]; strictly increasing in n and in delta wherever the
    bound is informative.
    """
    return max(0.0, 1.0 - bennett_loss(probs, n, delta, h_mode=h_mode))


@dataclass
class HashingRun:
    """One evaluation of the finite-size machinery."""

    n: int
    m: int
    delta_by_color: dict[int, float]
    delta_by_vertex: dict[int, float]
    fidelity_by_vertex: dict[int, float]
    fidelity: float


def bipartite_bound(probs: Sequence[float], n: int, m: int) -> HashingRun:
    """Finite-size bound for hashing an ensemble of Bell-diagonal pairs.

    The slack is derived from the target: delta = (1 - S - m/n)/2.  Raises
    :class:`InfeasibleTargetError` when the entropy already exceeds the
    requested yield.
    """
    if not 1 <= m <= n:
        raise InfeasibleTargetError(f"need 1 <= m <= n, got n={n} m={m}")
    s = entropy(probs)
    delta = 0.5 * (1.0 - s - m / n)
    if delta <= 0.0:
        raise InfeasibleTargetError(
            f"target m/n={m}/{n} unreachable: entropy {s:.6f} leaves slack {delta:.6f}"
        )
    f = bennett_success(probs, n, delta)
    return HashingRun(
        n=n,
        m=m,
        delta_by_color={0: delta},
        delta_by_vertex={0: delta},
        fidelity_by_vertex={0: f},
        fidelity=f,
    )


# -- multipartite machinery ----------------------------------------------------


@dataclass(frozen=True)
class MarginalClass:
    """A group of vertices sharing one binary marginal and one color."""

    lambda1: float
    color: int
    count: int

    @property
    def distribution(self) -> tuple[float, float]:
        return (1.0 - self.lambda1, self.lambda1)

    @property
    def entropy(self) -> float:
        return entropy(self.distribution)


def _group_classes(classes: Iterable[MarginalClass]):
    """Split into active colors (positive entropy) and the rest.

    A color whose every marginal is exactly deterministic needs no
    subprotocol at all: its strings are known without any measurement, it
    consumes none of the copy budget, and its vertices succeed with
    certainty.
    """
    by_color: dict[int, list[MarginalClass]] = {}
    for c in classes:
        if c.count < 0:
            raise DistributionError("class count must be nonnegative")
        if c.count:
            by_color.setdefault(c.color, []).append(c)
    s_color = {col: max(c.entropy for c in cls) for col, cls in by_color.items()}
    active = {col for col, s in s_color.items() if s > 0.0}
    return by_color, s_color, active


def multipartite_bound_classes(
    classes: Sequence[MarginalClass],
    n: int,
    m: int,
    delta_split: dict[int, float] | None = None,
    h_mode: str = "simplified",
) -> tuple[float, dict[int, float]]:
    """Global fidelity bound from per-class marginals.

    ``delta_split`` maps each active color to its fraction of the total
    slack (fractions must sum to 1); by default the slack is split equally.
    Returns (F, delta-by-color).  Classes with identical marginals are the
    natural unit here, so lattice-scale products cost one Bennett evaluation
    per class rather than per vertex.
    """
    if not 1 <= m <= n:
        raise InfeasibleTargetError(f"need 1 <= m <= n, got n={n} m={m}")
    by_color, s_color, active = _group_classes(classes)
    if not active:
        return 1.0, {}
    total_entropy = sum(s_color[c] for c in active)
    budget = 0.5 * (1.0 - total_entropy - m / n)
    if budget <= 0.0:
        raise InfeasibleTargetError(
            f"target m/n={m}/{n} unreachable: color entropies sum to {total_entropy:.6f}"
        )
    if delta_split is None:
        delta_split = {c: 1.0 / len(active) for c in active}
    if set(delta_split) != active:
        raise InfeasibleTargetError(
            f"split given for colors {sorted(delta_split)}, active colors are {sorted(active)}"
        )
    if abs(sum(delta_split.values()) - 1.0) > 1e-9:
        raise InfeasibleTargetError("split fractions must sum to 1")
    delta_color = {c: budget * delta_split[c] for c in active}
    if any(d <= 0.0 for d in delta_color.values()):
        raise InfeasibleTargetError("every active color needs a positive slack share")
    log_f = 0.0
    for color in sorted(active):
        for cls in by_color[color]:
            if cls.entropy == 0.0:
                continue
            delta_k = delta_color[color] + 0.5 * (s_color[color] - cls.entropy)
            loss = bennett_loss(cls.distribution, n, delta_k, h_mode=h_mode)
            if loss >= 1.0:
                return 0.0, delta_color
            log_f += cls.count * math.log1p(-loss)
    return math.exp(log_f), delta_color


def _classes_from_marginals(
    coloring: dict[int, int], marginals: Sequence[BitMarginal]
) -> list[MarginalClass]:
    counts: dict[tuple[float, int], int] = {}
    for marg in marginals:
        key = (marg.lambda1, coloring[marg.vertex])
        counts[key] = counts.get(key, 0) + 1
    return [MarginalClass(lambda1=lam, color=col, count=cnt) for (lam, col), cnt in sorted(counts.items())]


def _check_proper(g: Graph, coloring: dict[int, int]) -> None:
    for a, b in g.edges():
        if coloring[a] == coloring[b]:
            raise InfeasibleTargetError(f"improper coloring: edge ({a},{b}) inside one color")


def multipartite_bound(
    g: Graph,
    coloring: dict[int, int],
    marginals: Sequence[BitMarginal],
    n: int,
    m: int,
    delta_split: dict[int, float] | None = None,
    h_mode: str = "simplified",
) -> HashingRun:
    """Finite-size bound for multipartite hashing of a colored graph state.

    ``marginals`` must cover every vertex of ``g``.  The per-vertex slack and
    success probability are reported alongside the global product bound.
    """
    _check_proper(g, coloring)
    have = {marg.vertex for marg in marginals}
    missing = set(g.vertices()) - have
    if missing:
        raise DistributionError(f"marginals missing for vertices {sorted(missing)}")
    classes = _classes_from_marginals(coloring, marginals)
    fidelity, delta_color = multipartite_bound_classes(
        classes, n, m, delta_split=delta_split, h_mode=h_mode
    )
    by_color: dict[int, float] = {}
    for marg in marginals:
        c = coloring[marg.vertex]
        s_k = entropy(marg.distribution)
        by_color[c] = max(by_color.get(c, 0.0), s_k)
    delta_by_vertex: dict[int, float] = {}
    fidelity_by_vertex: dict[int, float] = {}
    for marg in marginals:
        c = coloring[marg.vertex]
        if c not in delta_color or entropy(marg.distribution) == 0.0:
            delta_by_vertex[marg.vertex] = 0.0
            fidelity_by_vertex[marg.vertex] = 1.0
            continue
        d_k = delta_color[c] + 0.5 * (by_color[c] - entropy(marg.distribution))
        delta_by_vertex[marg.vertex] = d_k
        fidelity_by_vertex[marg.vertex] = bennett_success(marg.distribution, n, d_k, h_mode=h_mode)
    return HashingRun(
        n=n,
        m=m,
        delta_by_color=delta_color,
        delta_by_vertex=delta_by_vertex,
        fidelity_by_vertex=fidelity_by_vertex,
        fidelity=fidelity,
    )


def _simplex_grid(colors: list[int], steps: int):
    """All integer compositions of ``steps`` over the colors, as fractions."""
    k = len(colors)
    if k == 1:
        yield {colors[0]: 1.0}
        return
    for cuts in itertools.combinations(range(1, steps), k - 1):
        parts = []
        prev = 0
        for c in cuts:
            parts.append(c - prev)
            prev = c
        parts.append(steps - prev)
        yield {col: p / steps for col, p in zip(colors, parts)}


def optimize_delta_split_classes(
    classes: Sequence[MarginalClass],
    n: int,
    m: int,
    h_mode: str = "simplified",
) -> tuple[dict[int, float], float]:
    """Grid-search the slack split across colors, maximizing the bound.

    Scans the split simplex in steps of 1/200, then refines once around the
    best cell at 1/20 of the step.  The equal split is always evaluated
    first and ties break toward it, so the result never falls below the
    equal-split baseline.
    """
    _, _, active = _group_classes(classes)
    colors = sorted(active)
    equal = {c: 1.0 / len(colors) for c in colors} if colors else {}
    best_f, _ = multipartite_bound_classes(classes, n, m, delta_split=equal or None, h_mode=h_mode)
    best_split = equal
    if len(colors) <= 1:
        return best_split, best_f

    def scan(candidates):
        nonlocal best_f, best_split
        for split in candidates:
            if any(frac <= 0.0 for frac in split.values()):
                continue
            try:
                f, _ = multipartite_bound_classes(classes, n, m, delta_split=split, h_mode=h_mode)
            except InfeasibleTargetError:
                continue
            if f > best_f:
                best_f, best_split = f, dict(split)

    scan(_simplex_grid(colors, SPLIT_GRID_STEPS))
    if len(colors) == 2:
        lo = best_split[colors[0]] - 1.0 / SPLIT_GRID_STEPS
        fine = SPLIT_GRID_STEPS * SPLIT_REFINE_FACTOR
        candidates = []
        for i in range(2 * SPLIT_REFINE_FACTOR + 1):
            x = lo + i / fine
            if 0.0 < x < 1.0:
                candidates.append({colors[0]: x, colors[1]: 1.0 - x})
        scan(candidates)
    return best_split, best_f


def optimize_delta_split(
    g: Graph,
    coloring: dict[int, int],
    marginals: Sequence[BitMarginal],
    n: int,
    m: int,
    h_mode: str = "simplified",
) -> tuple[dict[int, float], HashingRun]:
    """Best slack split plus the corresponding full run for a colored graph."""
    _check_proper(g, coloring)
    classes = _classes_from_marginals(coloring, marginals)
    split, _ = optimize_delta_split_classes(classes, n, m, h_mode=h_mode)
    run = multipartite_bound(g, coloring, marginals, n, m, delta_split=split or None, h_mode=h_mode)
    return split, run


def max_output_copies_classes(
    classes: Sequence[MarginalClass],
    n: int,
    threshold: float,
    optimize: bool = True,
    h_mode: str = "simplified",
) -> int:
    """Largest m with bound >= threshold, by binary search (0 if none)."""
    if not 0.0 < threshold < 1.0:
        raise ValueError(f"threshold must be in (0,1), got {threshold}")

    def value(m: int) -> float:
        try:
            if optimize:
                _, f = optimize_delta_split_classes(classes, n, m, h_mode=h_mode)
            else:
                f, _ = multipartite_bound_classes(classes, n, m, h_mode=h_mode)
            return f
        except InfeasibleTargetError:
            return -1.0

    if value(1) < threshold:
        return 0
    lo, hi = 1, n
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if value(mid) >= threshold:
            lo = mid
        else:
            hi = mid - 1
    return lo


def max_output_copies(
    g: Graph,
    coloring: dict[int, int],
    marginals: Sequence[BitMarginal],
    n: int,
    threshold: float,
) -> int:
    """Largest m the colored graph ensemble supports at the given fidelity."""
    _check_proper(g, coloring)
    classes = _classes_from_marginals(coloring, marginals)
    return max_output_copies_classes(classes, n, threshold)
