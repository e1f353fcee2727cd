"""Repeater scenarios: GHZ schemes A/B/C, the triangular network, cluster
building-block architectures under local or global storage, and the
from-Bell-pairs variant.

Conventions shared by all scenarios:

- Input-side resource-state noise is folded into the channel
  (``q_eff = q * p``); output-side resource noise multiplies the bound by
  ``(1+3p)/4`` per output qubit, only where output qubits exist.
- Scheme B performs the merge in a separate noisy step, which costs one
  extra output-noise layer on the two merge-touched qubits; with perfect
  resource states (p = 1) schemes B and C coincide.
- Infeasible sweep points are reported as results with fidelity 0 and the
  ``infeasible`` flag set, never silently dropped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import blocks
from .graphstate import Graph, build_graph, color_graph, merge_vertices
from .hashing import (
    InfeasibleTargetError,
    MarginalClass,
    bipartite_bound,
    max_output_copies_classes,
    multipartite_bound_classes,
    optimize_delta_split_classes,
)
from .noise import (
    PauliChannel,
    bit_marginals,
    channel_to_flip_source,
    pair_pattern_distribution,
    uniform_depolarizing_marginal,
    uniform_edge_channel_marginal,
)

GHZ_SCHEMES = ("A", "B", "C")

# Qubits a station must hold per copy in the 3-GHZ scenario: the multipartite
# scheme stores one qubit everywhere, the pair-based schemes store two at the
# middle station that holds one half of each Bell ensemble.
GHZ_PER_COPY = {"A": 1, "B": 2, "C": 2}

# Defaults for the triangular network, where several elementary states meet
# at each station.  Not pinned by the storage analysis, hence configurable.
TRIANGULAR_PER_COPY = {"A": 3, "B": 4, "C": 4}


class SchemeError(ValueError):
    """Unknown scheme / family or inconsistent scenario parameters."""


@dataclass(frozen=True)
class StorageModel:
    """Memory constraint: per-node capacity, or a global freely assignable pool."""

    mode: str
    capacity: int

    def __post_init__(self):
        if self.mode not in ("per-node", "global"):
            raise SchemeError(f"storage mode must be 'per-node' or 'global', got {self.mode!r}")
        if self.capacity < 1:
            raise SchemeError(f"storage capacity must be >= 1, got {self.capacity}")


@dataclass(frozen=True)
class Architecture:
    """A named repeater construction."""

    family: str
    dims: tuple[int, ...] = ()
    block_size: int = 1
    scheme: str | None = None

    def __post_init__(self):
        if self.family not in blocks.FAMILIES + ("ghz-star", "triangular"):
            raise SchemeError(f"unknown architecture family {self.family!r}")
        if self.dims and len(self.dims) not in (2, 3):
            raise SchemeError(f"architecture dims must be 2D or 3D, got {self.dims}")
        if self.block_size < 1:
            raise SchemeError(f"block size must be >= 1, got {self.block_size}")

    @property
    def dimensionality(self) -> int:
        return len(self.dims) if self.dims else 2


@dataclass
class SchemeResult:
    """Outcome of one scenario evaluation."""

    scheme: str
    fidelity: float
    m: int
    n_used: int
    storage: dict = field(default_factory=dict)
    infeasible: bool = False

    @classmethod
    def infeasible_point(cls, scheme: str, n_used: int = 0, storage: dict | None = None) -> "SchemeResult":
        return cls(scheme=scheme, fidelity=0.0, m=0, n_used=n_used, storage=storage or {}, infeasible=True)


# -- storage accounting --------------------------------------------------------


def storage_per_node(arch: Architecture) -> tuple[dict, int]:
    """Per-node-class qubits per copy and the bottleneck (maximum) cost."""
    if arch.family == "ghz-star":
        cost = GHZ_PER_COPY[arch.scheme or "A"]
        return ({"station": cost}, cost)
    if arch.family == "triangular":
        cost = TRIANGULAR_PER_COPY[arch.scheme or "A"]
        return ({"station": cost}, cost)
    dim = arch.dimensionality
    if arch.family == "bipartite":
        return ({"node": 2 * dim}, 2 * dim)
    b = arch.block_size
    hist = blocks.per_site_cost_histogram(arch.family, blocks.smallest_dims(arch.family, dim, b), b)
    classes = {f"{cost}-qubit sites": cost for cost in hist}
    return (classes, max(hist))


def allocate_global_storage(arch: Architecture, total_capacity: int) -> tuple[dict, int]:
    """Best common copy count when storage may be distributed freely.

    Every node gets exactly what its class needs per copy, so the copy count
    is total capacity divided by the summed per-copy cost of the lattice.
    """
    per_copy = blocks.per_copy_total(arch.family, arch.dims, arch.block_size)
    if total_capacity < per_copy:
        raise SchemeError(
            f"total capacity {total_capacity} is below the {per_copy} qubits one copy needs"
        )
    n = total_capacity // per_copy
    hist = blocks.per_site_cost_histogram(
        arch.family, blocks.smallest_dims(arch.family, arch.dimensionality, arch.block_size), arch.block_size
    ) if arch.family != "bipartite" else {2 * arch.dimensionality: 1}
    allocation = {f"{cost}-qubit sites": cost * n for cost in hist}
    return allocation, n


# -- GHZ schemes ----------------------------------------------------------------


def _ghz_channels(channel: str, q: float, p: float, q_params: dict | None):
    """Per-qubit channel lists for the star (index 0 = center) and for one
    Bell pair (index 0 = kept half, 1 = traveling half)."""
    params = q_params or {}
    resource = [] if p >= 1.0 else [PauliChannel.depolarizing(p)]
    if channel == "ldn":
        star = {v: [PauliChannel.depolarizing(q)] + resource for v in range(3)}
        pair = (
            [PauliChannel.depolarizing(q)] + resource,
            [PauliChannel.depolarizing(q)] + resource,
        )
    elif channel == "z":
        ch = PauliChannel.phase_flip(1.0 - q)
        star = {0: list(resource), 1: [ch] + resource, 2: [ch] + resource}
        pair = (list(resource), [ch] + resource)
    elif channel == "biased":
        ch = PauliChannel.biased(p_x=params.get("px", 1e-5), p_z=params.get("pz", 0.02))
        star = {0: list(resource), 1: [ch] + resource, 2: [ch] + resource}
        pair = (list(resource), [ch] + resource)
    else:
        raise SchemeError(f"unsupported channel {channel!r} for the GHZ scenario")
    return star, pair


def _star_classes(star_channels: dict[int, list[PauliChannel]]) -> list[MarginalClass]:
    """Flip marginals of the 3-star under independent per-qubit channels."""
    g = build_graph("ghz-star", s=3)
    coloring = color_graph(g)
    sources = [
        channel_to_flip_source(g, v, ch)
        for v, chans in star_channels.items()
        for ch in chans
    ]
    classes: dict[tuple[float, int], int] = {}
    for marg in bit_marginals(g, sources):
        key = (marg.lambda1, coloring[marg.vertex])
        classes[key] = classes.get(key, 0) + 1
    return [MarginalClass(lambda1=lam, color=c, count=n) for (lam, c), n in sorted(classes.items())]


def _output_factor(p: float, qubits: int) -> float:
    return ((1.0 + 3.0 * p) / 4.0) ** qubits


def ghz_scheme_fidelity(
    scheme: str,
    capacity: int,
    q: float,
    p: float = 1.0,
    m: int = 1,
    channel: str = "ldn",
    channel_params: dict | None = None,
    optimize_split: bool = False,
) -> SchemeResult:
    """Reachable-fidelity bound for distributing a 3-qubit GHZ state.

    Scheme A purifies the 3-party states directly with the multipartite
    protocol (one stored qubit per station per copy).  Schemes B and C
    purify two Bell ensembles (two stored qubits at the middle station) and
    merge; C does hashing plus merge in a single measurement-based step,
    B pays an extra noise layer on the two merge-touched qubits.
    """
    if scheme not in GHZ_SCHEMES:
        raise SchemeError(f"scheme must be one of {GHZ_SCHEMES}, got {scheme!r}")
    per_copy = GHZ_PER_COPY[scheme]
    n = capacity // per_copy
    storage = {"bottleneck": per_copy}
    if n < max(1, m):
        return SchemeResult.infeasible_point(scheme, n_used=n, storage=storage)
    star, pair = _ghz_channels(channel, q, p, channel_params)
    try:
        if scheme == "A":
            classes = _star_classes(star)
            if optimize_split:
                _, fid = optimize_delta_split_classes(classes, n, m)
            else:
                fid, _ = multipartite_bound_classes(classes, n, m)
            fid *= _output_factor(p, 3)
        else:
            dist = pair_pattern_distribution(list(pair[0]), list(pair[1]))
            run = bipartite_bound(dist, n, m)
            fid = run.fidelity**2 * _output_factor(p, 3)
            if scheme == "B":
                fid *= _output_factor(p, 2)
    except InfeasibleTargetError:
        return SchemeResult.infeasible_point(scheme, n_used=n, storage=storage)
    return SchemeResult(scheme=scheme, fidelity=fid, m=m, n_used=n, storage=storage)


def triangular_repeater(
    levels: int,
    capacity: int,
    q: float,
    p: float = 1.0,
    scheme: str = "A",
    per_copy: int | None = None,
) -> SchemeResult:
    """Long-distance GHZ bound on the triangular network.

    The per-copy elementary fidelity is evaluated exactly as in the 3-GHZ
    scenario (with the triangular per-station storage defaults) and raised
    to the number of elementary states consumed after ``levels`` doublings
    of the distance: 3^k for the multipartite scheme, 2^(k+1) for the
    pair-based ones.
    """
    if levels < 0:
        raise SchemeError(f"levels must be >= 0, got {levels}")
    if scheme not in GHZ_SCHEMES:
        raise SchemeError(f"scheme must be one of {GHZ_SCHEMES}, got {scheme!r}")
    cost = per_copy if per_copy is not None else TRIANGULAR_PER_COPY[scheme]
    n = capacity // cost
    storage = {"bottleneck": cost}
    if n < 1:
        return SchemeResult.infeasible_point(scheme, n_used=n, storage=storage)
    star, pair = _ghz_channels("ldn", q, p, None)
    exponent = 3**levels if scheme == "A" else 2 ** (levels + 1)
    try:
        if scheme == "A":
            fid, _ = multipartite_bound_classes(_star_classes(star), n, 1)
            fid *= _output_factor(p, 3)
        else:
            dist = pair_pattern_distribution(list(pair[0]), list(pair[1]))
            fid = bipartite_bound(dist, n, 1).fidelity ** 2 * _output_factor(p, 3)
            if scheme == "B":
                fid *= _output_factor(p, 2)
    except InfeasibleTargetError:
        return SchemeResult.infeasible_point(scheme, n_used=n, storage=storage)
    return SchemeResult(scheme=scheme, fidelity=fid**exponent, m=1, n_used=n, storage=storage)


# -- cluster architectures -------------------------------------------------------


def _cluster_classes(family: str, dim: int, b: int, q: float, count_blocks: int) -> list[MarginalClass]:
    classes = []
    for degree, color, per_block in blocks.degree_color_classes(family, dim, b):
        _, lam1 = uniform_depolarizing_marginal(q, degree)
        classes.append(MarginalClass(lambda1=lam1, color=color, count=per_block * count_blocks))
    return classes


def _bipartite_lattice_fidelity(q_pair_dist, n: int, m: int, edge_count: int) -> float:
    run = bipartite_bound(q_pair_dist, n, m)
    loss = 1.0 - run.fidelity
    if loss >= 1.0:
        return 0.0
    return math.exp(edge_count * math.log1p(-loss))


def _bipartite_lattice_max_m(q_pair_dist, n: int, threshold: float, edge_count: int) -> int:
    def value(m: int) -> float:
        try:
            return _bipartite_lattice_fidelity(q_pair_dist, n, m, edge_count)
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


def cluster_architecture_run(
    arch: Architecture,
    storage: StorageModel,
    q: float,
    m: int | None = None,
    threshold: float | None = None,
) -> SchemeResult:
    """Bound for building a periodic cluster state from one block family.

    Every block ensemble is purified with the multipartite protocol (the
    bipartite family with the pairwise protocol); the global bound is the
    product over all blocks of the lattice.  Marginals follow in closed form
    from block-graph degrees under uniform depolarizing noise q, so nothing
    lattice-sized is ever materialized.

    Exactly one of ``m`` (fixed output count) or ``threshold`` (return the
    largest m keeping the bound above it) must be given.
    """
    if (m is None) == (threshold is None):
        raise SchemeError("give exactly one of m= or threshold=")
    if not arch.dims:
        raise SchemeError("cluster architectures need lattice dims")
    dim = arch.dimensionality
    b = arch.block_size
    family = arch.family
    label = family if family == "bipartite" else f"{family}-b{b}"
    count = blocks.blocks_count(family, arch.dims, b)

    if storage.mode == "per-node":
        _, bottleneck = storage_per_node(arch)
        n = storage.capacity // bottleneck
        storage_info = {"mode": "per-node", "bottleneck": bottleneck}
    else:
        try:
            _, n = allocate_global_storage(arch, storage.capacity)
        except SchemeError:
            return SchemeResult.infeasible_point(label)
        storage_info = {
            "mode": "global",
            "per_copy_total": blocks.per_copy_total(family, arch.dims, b),
        }
    if n < 1 or (m is not None and n < m):
        return SchemeResult.infeasible_point(label, n_used=n, storage=storage_info)

    if family == "bipartite":
        dist = pair_pattern_distribution([PauliChannel.depolarizing(q)], [PauliChannel.depolarizing(q)])
        edge_count = count
        try:
            if m is not None:
                fid = _bipartite_lattice_fidelity(dist, n, m, edge_count)
                return SchemeResult(label, fid, m, n, storage_info)
            best = _bipartite_lattice_max_m(dist, n, threshold, edge_count)
        except InfeasibleTargetError:
            return SchemeResult.infeasible_point(label, n_used=n, storage=storage_info)
        if best == 0:
            return SchemeResult(label, 0.0, 0, n, storage_info)
        fid = _bipartite_lattice_fidelity(dist, n, best, edge_count)
        return SchemeResult(label, fid, best, n, storage_info)

    classes = _cluster_classes(family, dim, b, q, count)
    try:
        if m is not None:
            fid, _ = multipartite_bound_classes(classes, n, m)
            return SchemeResult(label, fid, m, n, storage_info)
        best = max_output_copies_classes(classes, n, threshold)
    except InfeasibleTargetError:
        return SchemeResult.infeasible_point(label, n_used=n, storage=storage_info)
    if best == 0:
        return SchemeResult(label, 0.0, 0, n, storage_info)
    _, fid = optimize_delta_split_classes(classes, n, best)
    return SchemeResult(label, fid, best, n, storage_info)


def from_bell_run(
    dims: tuple[int, ...],
    q: float,
    capacity: int,
    m: int | None = None,
    threshold: float | None = None,
) -> tuple[SchemeResult, SchemeResult]:
    """Compare connecting-then-purifying against purifying-then-connecting.

    Bell pairs are distributed with one half through a depolarizing channel
    of strength q.  The multipartite branch connects them into the cluster
    immediately (one stored qubit per site per copy) and inherits the
    correlated two-site Z channel on every lattice edge; the bipartite branch
    purifies each pair ensemble first (2*dim stored qubits per site) and
    connects noiselessly at the end.
    """
    if (m is None) == (threshold is None):
        raise SchemeError("give exactly one of m= or threshold=")
    dim = len(dims)
    sites = 1
    for d in dims:
        sites *= d
    edge_count = dim * sites

    n_multi = capacity
    _, lam1 = uniform_edge_channel_marginal(q, 2 * dim)
    half = sites // 2
    classes = [
        MarginalClass(lambda1=lam1, color=0, count=half),
        MarginalClass(lambda1=lam1, color=1, count=sites - half),
    ]
    try:
        if m is not None:
            fid, _ = multipartite_bound_classes(classes, n_multi, m)
            multi = SchemeResult("multipartite", fid, m, n_multi, {"bottleneck": 1})
        else:
            best = max_output_copies_classes(classes, n_multi, threshold)
            if best == 0:
                multi = SchemeResult("multipartite", 0.0, 0, n_multi, {"bottleneck": 1})
            else:
                _, fid = optimize_delta_split_classes(classes, n_multi, best)
                multi = SchemeResult("multipartite", fid, best, n_multi, {"bottleneck": 1})
    except InfeasibleTargetError:
        multi = SchemeResult.infeasible_point("multipartite", n_used=n_multi, storage={"bottleneck": 1})

    n_bip = capacity // (2 * dim)
    dist = pair_pattern_distribution([], [PauliChannel.depolarizing(q)])
    try:
        if n_bip < 1:
            raise InfeasibleTargetError("no room for a single copy")
        if m is not None:
            fid = _bipartite_lattice_fidelity(dist, n_bip, m, edge_count)
            bip = SchemeResult("bipartite", fid, m, n_bip, {"bottleneck": 2 * dim})
        else:
            best = _bipartite_lattice_max_m(dist, n_bip, threshold, edge_count)
            fid = _bipartite_lattice_fidelity(dist, n_bip, best, edge_count) if best else 0.0
            bip = SchemeResult("bipartite", fid, best, n_bip, {"bottleneck": 2 * dim})
    except InfeasibleTargetError:
        bip = SchemeResult.infeasible_point("bipartite", n_used=n_bip, storage={"bottleneck": 2 * dim})
    return multi, bip


# -- cover validation -------------------------------------------------------------


def validate_cover(
    cover: list[tuple[Graph, dict[int, tuple]]],
    target: Graph,
) -> tuple[bool, list[tuple]]:
    """Merge placed blocks and check the result against the target lattice.

    ``cover`` holds (block graph, placement) pairs, the placement mapping
    block vertex ids to target coordinates (as found in ``target.coords``).
    Wherever two or more placed qubits coincide they are merged pairwise in
    ascending block order; the trace of performed merges is returned together
    with the verdict.
    """
    if target.coords is None:
        raise SchemeError("target graph carries no coordinates")
    union_edges = []
    position: dict[int, tuple] = {}
    next_id = 0
    ids: dict[tuple[int, int], int] = {}
    for block_idx, (block, placement) in enumerate(cover):
        for v in block.vertices():
            if v not in placement:
                raise SchemeError(f"block {block_idx} vertex {v} has no placement")
            ids[(block_idx, v)] = next_id
            position[next_id] = placement[v]
            next_id += 1
        for a, b in block.edges():
            union_edges.append((ids[(block_idx, a)], ids[(block_idx, b)]))
    g = Graph(range(next_id), union_edges)
    g.coords = dict(position)

    by_coord: dict[tuple, list[int]] = {}
    for vid, coord in position.items():
        by_coord.setdefault(coord, []).append(vid)
    trace = []
    for coord in sorted(by_coord):
        group = sorted(by_coord[coord])
        survivor = group[0]
        for other in group[1:]:
            g = merge_vertices(g, survivor, other)
            trace.append((coord, survivor, other))

    achieved = {
        tuple(sorted((g.coords[a], g.coords[b]))) for a, b in g.edges()
    }
    wanted = {
        tuple(sorted((target.coords[a], target.coords[b]))) for a, b in target.edges()
    }
    achieved_sites = {g.coords[v] for v in g.vertices()}
    wanted_sites = {target.coords[v] for v in target.vertices()}
    ok = achieved == wanted and achieved_sites == wanted_sites
    return ok, trace


def family_cover(family: str, dims: tuple[int, ...], b: int = 1) -> list[tuple[Graph, dict[int, tuple]]]:
    """Materialize a family's cover as (graph, placement) pairs for validation."""
    groups = blocks.cover_blocks(family, dims, b)
    out = []
    for group in groups:
        sites = sorted({s for e in group for s in e})
        index = {s: i for i, s in enumerate(sites)}
        g = Graph(range(len(sites)), [(index[a], index[b]) for a, b in group])
        out.append((g, {i: s for s, i in index.items()}))
    return out
