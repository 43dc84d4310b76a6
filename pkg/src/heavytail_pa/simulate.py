"""Directed multigraph growth by degree-preferential attachment.

One edge is added per step.  With probability alpha a new node sends an
edge to an existing node chosen by in-degree; with probability beta an
edge is drawn between two existing nodes chosen independently by out-
and in-degree; with probability gamma an existing node chosen by
out-degree sends an edge to a new node.  The attachment probability for
a node w by in-degree in a graph with n edges and N nodes is

    (D_in(w) + delta_in) / (n + delta_in * N)

and symmetrically for out-degree.  Self-loops and parallel edges are
allowed; node ids are dense integers in creation order.

Sampling uses the exact mixture identity: since the in-degrees sum to
n, picking a uniform edge and returning its head hits node w with
probability D_in(w)/n, so a coin with success n/(n + delta*N) between
"uniform edge endpoint" and "uniform node" reproduces the formula above
exactly, in O(1) per draw.

The RNG is numpy's PCG64 (via default_rng); a graph is fully determined
by (seed spec, params, rng seed, target).
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from .errors import InvalidSeed, ResourceLimit
from .params import ModelParams, validate

MAGIC = b"DPAG"
FORMAT_VERSION = 1
DEFAULT_EDGE_BUDGET = 200_000_000


class GrowthCase(Enum):
    ALPHA = "alpha"
    BETA = "beta"
    GAMMA = "gamma"


@dataclass(frozen=True)
class GrowthStepOutcome:
    """What a single growth step did."""

    case: GrowthCase
    new_node: Optional[int]
    edge: tuple


@dataclass(frozen=True)
class SeedSpec:
    """Explicit initial graph: node count plus an edge list."""

    node_count: int
    tails: Sequence[int] = ()
    heads: Sequence[int] = ()

    @staticmethod
    def self_loop() -> "SeedSpec":
        """The default seed: one node carrying one self-loop."""
        return SeedSpec(node_count=1, tails=(0,), heads=(0,))

    @staticmethod
    def single_edge() -> "SeedSpec":
        """Two nodes joined by the edge 0 -> 1."""
        return SeedSpec(node_count=2, tails=(0,), heads=(1,))

    @staticmethod
    def nodes_only(node_count: int) -> "SeedSpec":
        """Isolated nodes, no edges (requires positive deltas to grow)."""
        return SeedSpec(node_count=node_count)


class DirectedMultigraph:
    """Append-only edge list with per-node degree arrays.

    Invariants maintained by every mutation:
    len(tails) == len(heads) == edge_count and
    sum(in_degree) == sum(out_degree) == edge_count.
    """

    def __init__(self, node_count: int = 0, capacity: int = 16):
        if node_count < 0:
            raise ValueError("node_count must be nonnegative")
        cap_e = max(capacity, 1)
        cap_n = max(node_count, 1)
        self._tails = np.empty(cap_e, np.int64)
        self._heads = np.empty(cap_e, np.int64)
        self._in = np.zeros(cap_n, np.int64)
        self._out = np.zeros(cap_n, np.int64)
        self.edge_count = 0
        self.node_count = node_count

    # -- construction ---------------------------------------------------

    @classmethod
    def from_edges(cls, node_count: int, tails, heads) -> "DirectedMultigraph":
        tails = np.asarray(tails, np.int64)
        heads = np.asarray(heads, np.int64)
        if tails.shape != heads.shape:
            raise ValueError("tails and heads must have equal length")
        g = cls(node_count, capacity=max(len(tails), 16))
        for t, h in zip(tails, heads):
            g.add_edge(int(t), int(h))
        return g

    def add_node(self) -> int:
        nid = self.node_count
        if nid >= self._in.shape[0]:
            self._in = np.concatenate([self._in, np.zeros(self._in.shape[0], np.int64)])
            self._out = np.concatenate([self._out, np.zeros(self._out.shape[0], np.int64)])
        self.node_count += 1
        return nid

    def add_edge(self, tail: int, head: int) -> None:
        if not (0 <= tail < self.node_count and 0 <= head < self.node_count):
            raise ValueError(f"edge ({tail}, {head}) references a missing node")
        n = self.edge_count
        if n >= self._tails.shape[0]:
            grow_to = 2 * self._tails.shape[0]
            self._tails = np.concatenate([self._tails, np.empty(grow_to - n, np.int64)])
            self._heads = np.concatenate([self._heads, np.empty(grow_to - n, np.int64)])
        self._tails[n] = tail
        self._heads[n] = head
        self._out[tail] += 1
        self._in[head] += 1
        self.edge_count += 1

    def reserve(self, edges: int, nodes: int) -> None:
        """Preallocate room for the given totals (amortizes growth loops)."""
        if edges > self._tails.shape[0]:
            extra = edges - self.edge_count
            self._tails = np.concatenate([self._tails[: self.edge_count], np.empty(extra, np.int64)])
            self._heads = np.concatenate([self._heads[: self.edge_count], np.empty(extra, np.int64)])
        if nodes > self._in.shape[0]:
            pad = nodes - self._in.shape[0]
            self._in = np.concatenate([self._in, np.zeros(pad, np.int64)])
            self._out = np.concatenate([self._out, np.zeros(pad, np.int64)])

    # -- views ------------------------------------------------------------

    @property
    def tails(self) -> np.ndarray:
        return self._tails[: self.edge_count]

    @property
    def heads(self) -> np.ndarray:
        return self._heads[: self.edge_count]

    @property
    def in_degree(self) -> np.ndarray:
        return self._in[: self.node_count]

    @property
    def out_degree(self) -> np.ndarray:
        return self._out[: self.node_count]

    def check_invariants(self) -> None:
        assert self.tails.shape == self.heads.shape == (self.edge_count,)
        assert int(self.in_degree.sum()) == self.edge_count
        assert int(self.out_degree.sum()) == self.edge_count
        assert np.array_equal(np.bincount(self.heads, minlength=self.node_count), self.in_degree)
        assert np.array_equal(np.bincount(self.tails, minlength=self.node_count), self.out_degree)

    # -- serialization -----------------------------------------------------

    def to_binary(self, path) -> None:
        """Little-endian binary: magic, u32 version, u64 N, u64 n, u32 arrays."""
        if self.node_count >= 2**32:
            raise ResourceLimit("node ids exceed the 32-bit wire format")
        with open(path, "wb") as fh:
            fh.write(MAGIC)
            fh.write(struct.pack("<IQQ", FORMAT_VERSION, self.node_count, self.edge_count))
            self.tails.astype("<u4").tofile(fh)
            self.heads.astype("<u4").tofile(fh)

    @classmethod
    def from_binary(cls, path) -> "DirectedMultigraph":
        with open(path, "rb") as fh:
            magic = fh.read(4)
            if magic != MAGIC:
                raise ValueError(f"bad magic {magic!r}")
            version, node_count, edge_count = struct.unpack("<IQQ", fh.read(20))
            if version != FORMAT_VERSION:
                raise ValueError(f"unsupported format version {version}")
            tails = np.fromfile(fh, dtype="<u4", count=edge_count).astype(np.int64)
            heads = np.fromfile(fh, dtype="<u4", count=edge_count).astype(np.int64)
        if len(tails) != edge_count or len(heads) != edge_count:
            raise ValueError("truncated graph file")
        g = cls(int(node_count), capacity=max(int(edge_count), 16))
        g._tails[:edge_count] = tails
        g._heads[:edge_count] = heads
        g.edge_count = int(edge_count)
        g._in[: g.node_count] = np.bincount(heads, minlength=g.node_count)
        g._out[: g.node_count] = np.bincount(tails, minlength=g.node_count)
        return g


def seed_graph(spec: Optional[SeedSpec] = None, params: Optional[ModelParams] = None) -> DirectedMultigraph:
    """Build the initial graph.

    When either delta is zero the dynamics need at least one edge to
    start from, so a zero-edge spec is rejected in that case.
    """
    if spec is None:
        spec = SeedSpec.self_loop()
    if spec.node_count < 1:
        raise InvalidSeed("the initial graph needs at least one node")
    if params is not None and len(spec.tails) == 0:
        if params.delta_in == 0 or params.delta_out == 0:
            raise InvalidSeed("a zero-edge seed needs delta_in > 0 and delta_out > 0")
    return DirectedMultigraph.from_edges(spec.node_count, spec.tails, spec.heads)


class _UniformStream:
    """Buffered uniform(0,1) draws from a numpy Generator.

    Block generation yields the same number sequence as repeated scalar
    random() calls, so buffered and unbuffered consumers of one seed
    stay draw-for-draw identical.
    """

    __slots__ = ("rng", "block", "buf", "pos")

    def __init__(self, rng: np.random.Generator, block: int = 1 << 16):
        self.rng = rng
        self.block = block
        self.buf = rng.random(block)
        self.pos = 0

    def take(self) -> float:
        if self.pos >= self.block:
            self.buf = self.rng.random(self.block)
            self.pos = 0
        v = self.buf[self.pos]
        self.pos += 1
        return v


def _checked_params(params: ModelParams) -> ModelParams:
    return validate(params)


def _choose(take, endpoint: np.ndarray, n: int, N: int, delta: float) -> int:
    """One preferential draw via the edge/node mixture.

    ``take`` yields uniforms; endpoint is the heads array for in-degree
    choices, tails for out-degree choices.  Exactly two uniforms are
    consumed.  Requires n > 0 or delta*N > 0.
    """
    if take() * (n + delta * N) < n:
        return int(endpoint[min(int(take() * n), n - 1)])
    return min(int(take() * N), N - 1)


def choose_by_in(graph: DirectedMultigraph, delta_in: float, rng: np.random.Generator) -> int:
    """Sample a node with probability (D_in + delta_in)/(n + delta_in*N)."""
    n, N = graph.edge_count, graph.node_count
    if N < 1:
        raise InvalidSeed("cannot choose from an empty graph")
    if n == 0 and delta_in * N <= 0:
        raise InvalidSeed("zero-edge graph with delta_in = 0 has no in-attachment law")
    return _choose(rng.random, graph._heads, n, N, delta_in)


def choose_by_out(graph: DirectedMultigraph, delta_out: float, rng: np.random.Generator) -> int:
    """Sample a node with probability (D_out + delta_out)/(n + delta_out*N)."""
    n, N = graph.edge_count, graph.node_count
    if N < 1:
        raise InvalidSeed("cannot choose from an empty graph")
    if n == 0 and delta_out * N <= 0:
        raise InvalidSeed("zero-edge graph with delta_out = 0 has no out-attachment law")
    return _choose(rng.random, graph._tails, n, N, delta_out)


def step(graph: DirectedMultigraph, params: ModelParams, rng: np.random.Generator) -> GrowthStepOutcome:
    """Advance the graph by one edge and report what happened.

    Draw order is fixed: case coin, then the out-choice if the case has
    one, then the in-choice if the case has one, each choice consuming
    exactly two uniforms.  A sequence of step() calls therefore
    reproduces grow() draw for draw.
    """
    n, N = graph.edge_count, graph.node_count
    take = rng.random
    r = take()
    if r < params.alpha:
        case = GrowthCase.ALPHA
        head = _choose(take, graph._heads, n, N, params.delta_in)
        tail = graph.add_node()
        new_node = tail
    elif r < params.alpha + params.beta:
        case = GrowthCase.BETA
        tail = _choose(take, graph._tails, n, N, params.delta_out)
        head = _choose(take, graph._heads, n, N, params.delta_in)
        new_node = None
    else:
        case = GrowthCase.GAMMA
        tail = _choose(take, graph._tails, n, N, params.delta_out)
        head = graph.add_node()
        new_node = head
    graph.add_edge(tail, head)
    return GrowthStepOutcome(case=case, new_node=new_node, edge=(tail, head))


def grow(
    graph: DirectedMultigraph,
    target_edges: int,
    params: ModelParams,
    rng: np.random.Generator,
    edge_budget: int = DEFAULT_EDGE_BUDGET,
) -> DirectedMultigraph:
    """Grow the graph in place until it has target_edges edges.

    The loop is an inlined version of step() consuming the identical
    uniform stream, so grow and repeated step are interchangeable.
    """
    params = _checked_params(params)
    if target_edges < graph.edge_count:
        raise ValueError("target_edges is below the current edge count")
    if target_edges > edge_budget:
        raise ResourceLimit(f"target {target_edges} exceeds the edge budget {edge_budget}")
    if graph.node_count < 1:
        raise InvalidSeed("the initial graph needs at least one node")
    if graph.edge_count == 0 and target_edges > graph.edge_count:
        if params.delta_in == 0 or params.delta_out == 0:
            raise InvalidSeed("growth from a zero-edge graph needs positive deltas")

    graph.reserve(target_edges, graph.node_count + (target_edges - graph.edge_count) + 1)
    tails, heads = graph._tails, graph._heads
    indeg, outdeg = graph._in, graph._out
    n = graph.edge_count
    N = graph.node_count
    alpha, beta = params.alpha, params.beta
    ab = alpha + beta
    din, dout = params.delta_in, params.delta_out
    stream = _UniformStream(rng)
    take = stream.take

    while n < target_edges:
        r = take()
        if r < alpha:
            # draw order matches step(): the in-choice precedes the new node
            if take() * (n + din * N) < n:
                w = heads[min(int(take() * n), n - 1)]
            else:
                w = min(int(take() * N), N - 1)
            v = N
            N += 1
        elif r < ab:
            if take() * (n + dout * N) < n:
                v = tails[min(int(take() * n), n - 1)]
            else:
                v = min(int(take() * N), N - 1)
            if take() * (n + din * N) < n:
                w = heads[min(int(take() * n), n - 1)]
            else:
                w = min(int(take() * N), N - 1)
        else:
            if take() * (n + dout * N) < n:
                v = tails[min(int(take() * n), n - 1)]
            else:
                v = min(int(take() * N), N - 1)
            w = N
            N += 1
        tails[n] = v
        heads[n] = w
        outdeg[v] += 1
        indeg[w] += 1
        n += 1

    graph.edge_count = n
    graph.node_count = N
    return graph


def simulate(
    target_edges: int,
    params: ModelParams,
    seed: int,
    seed_spec: Optional[SeedSpec] = None,
    edge_budget: int = DEFAULT_EDGE_BUDGET,
) -> DirectedMultigraph:
    """Convenience wrapper: seed graph + grow with a fresh PCG64 stream."""
    params = _checked_params(params)
    g = seed_graph(seed_spec, params)
    rng = np.random.default_rng(seed)
    return grow(g, target_edges, params, rng, edge_budget=edge_budget)
