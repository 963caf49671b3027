"""Channel/junction graph specifications, decomposition and matrix assembly.

A graph is a set of junction vertices carrying arbitrary weighted edges,
plus channels. A channel of base length ``e`` is a directed path of ``e``
vertices with a uniform diagonal ``alpha`` and uniform edge weight ``beta``
that leaves junction vertex ``source`` and enters ``target``. Lengthening by
``n`` replaces every channel length ``e`` by ``n * e``.

Matrix convention: ``A[i, j] != 0`` means an edge i -> j. Rows are laid out
channels first (in spec order, each channel in path order) followed by the
junction vertices in spec order.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Sequence

import jsonschema
import networkx as nx
import numpy as np

from .errors import CapExceeded, SpecError
from .numbers import ZERO, ExactComplex

DEFAULT_DIMENSION_CAP = 10**6

_COMPLEX = {
    "type": "array",
    "items": {"type": ["string", "number"]},
    "minItems": 2,
    "maxItems": 2,
}

SPEC_SCHEMA = {
    "type": "object",
    "required": ["junctions", "channels"],
    "properties": {
        "name": {"type": "string"},
        "junctions": {
            "type": "array",
            "minItems": 1,
            "items": {"type": "object", "required": ["id"], "properties": {"id": {"type": "string"}}},
        },
        "junction_edges": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["from", "to", "weight"],
                "properties": {"from": {"type": "string"}, "to": {"type": "string"}, "weight": _COMPLEX},
            },
        },
        "channels": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["from", "to", "e", "alpha", "beta"],
                "properties": {
                    "from": {"type": "string"},
                    "to": {"type": "string"},
                    "e": {"type": "integer", "minimum": 1},
                    "alpha": _COMPLEX,
                    "beta": _COMPLEX,
                },
            },
        },
    },
}


@dataclass(frozen=True)
class ChannelSpec:
    source: str
    target: str
    e: int
    alpha: ExactComplex
    beta: ExactComplex

    def __post_init__(self):
        object.__setattr__(self, "alpha", ExactComplex.coerce(self.alpha))
        object.__setattr__(self, "beta", ExactComplex.coerce(self.beta))

    def to_json(self) -> dict:
        return {
            "from": self.source,
            "to": self.target,
            "e": self.e,
            "alpha": self.alpha.to_pair(),
            "beta": self.beta.to_pair(),
        }


@dataclass(frozen=True)
class GraphSpec:
    junction_vertices: tuple[str, ...]
    weight_items: tuple[tuple[tuple[str, str], ExactComplex], ...]
    channels: tuple[ChannelSpec, ...]
    name: str = ""

    @classmethod
    def build(
        cls,
        junctions: Sequence[str],
        weights: Mapping[tuple[str, str], Any],
        channels: Iterable[ChannelSpec],
        name: str = "",
        validate: bool = True,
    ) -> "GraphSpec":
        items = tuple(
            (tuple(k), ExactComplex.coerce(v)) for k, v in weights.items() if not ExactComplex.coerce(v).is_zero()
        )
        spec = cls(tuple(junctions), items, tuple(channels), name)
        if validate:
            validate_spec(spec)
        return spec

    @property
    def junction_weights(self) -> dict[tuple[str, str], ExactComplex]:
        return dict(self.weight_items)

    @property
    def h(self) -> int:
        return len(self.channels)

    def dimension(self, n: int) -> int:
        return sum(n * c.e for c in self.channels) + len(self.junction_vertices)

    def to_json(self) -> dict:
        out = {
            "junctions": [{"id": v} for v in self.junction_vertices],
            "junction_edges": [
                {"from": i, "to": j, "weight": w.to_pair()} for (i, j), w in self.weight_items
            ],
            "channels": [c.to_json() for c in self.channels],
        }
        if self.name:
            out = {"name": self.name, **out}
        return out


def collapsed_digraph(spec: GraphSpec) -> nx.DiGraph:
    """Junction vertices plus one point ``("p", r)`` per channel."""
    g = nx.DiGraph()
    for v in spec.junction_vertices:
        g.add_node(("J", v))
    for (i, j), w in spec.weight_items:
        g.add_edge(("J", i), ("J", j), weight=w)
    for r, c in enumerate(spec.channels):
        g.add_edge(("J", c.source), ("p", r), weight=c.beta)
        g.add_edge(("p", r), ("J", c.target), weight=c.beta)
    return g


def validate_spec(spec: GraphSpec) -> None:
    ids = set(spec.junction_vertices)
    if len(ids) != len(spec.junction_vertices):
        raise SpecError("duplicate junction id")
    for (i, j), _ in spec.weight_items:
        for v in (i, j):
            if v not in ids:
                raise SpecError(f"dangling endpoint: junction edge {i}->{j} refers to unknown vertex {v!r}")
    for r, c in enumerate(spec.channels):
        if not isinstance(c.e, int) or c.e < 1:
            raise SpecError(f"channel {r + 1}: base length must be a positive integer, got {c.e!r}")
        if c.beta.is_zero():
            raise SpecError(f"zero channel weight: channel {r + 1} ({c.source}->{c.target}) has beta = 0")
        for v in (c.source, c.target):
            if v not in ids:
                raise SpecError(f"dangling endpoint: channel {r + 1} refers to unknown vertex {v!r}")
    g = collapsed_digraph(spec)
    if not nx.is_strongly_connected(g):
        comps = sorted(nx.strongly_connected_components(g), key=len)
        offending = sorted(_label(x) for x in comps[0])
        raise SpecError(f"non-irreducible graph: component {offending} is not strongly connected to the rest")


def _label(node) -> str:
    kind, key = node
    return f"channel {key + 1}" if kind == "p" else str(key)


def _parse_pair(value, where: str) -> ExactComplex:
    try:
        return ExactComplex.coerce(value)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise SpecError(f"{where}: cannot read complex value {value!r} ({exc})") from None


def spec_from_dict(doc: Mapping) -> GraphSpec:
    try:
        jsonschema.validate(doc, SPEC_SCHEMA)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise SpecError(f"schema violation at {path}: {exc.message}") from None
    weights: dict[tuple[str, str], ExactComplex] = {}
    for k, edge in enumerate(doc.get("junction_edges", [])):
        key = (edge["from"], edge["to"])
        w = _parse_pair(edge["weight"], f"junction edge {k + 1}")
        weights[key] = weights.get(key, ZERO) + w
    channels = [
        ChannelSpec(
            ch["from"],
            ch["to"],
            int(ch["e"]),
            _parse_pair(ch["alpha"], f"channel {r + 1} alpha"),
            _parse_pair(ch["beta"], f"channel {r + 1} beta"),
        )
        for r, ch in enumerate(doc["channels"])
    ]
    return GraphSpec.build([j["id"] for j in doc["junctions"]], weights, channels, doc.get("name", ""))


def parse_spec(text: str | bytes | Mapping) -> GraphSpec:
    """Parse and validate a graph-spec JSON document."""
    if isinstance(text, Mapping):
        return spec_from_dict(text)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"invalid JSON: {exc}") from None
    return spec_from_dict(doc)


# decomposition ---------------------------------------------------------------


@dataclass(frozen=True)
class Decomposition:
    spec: GraphSpec
    channels: tuple[ChannelSpec, ...]
    junctions: tuple[tuple[str, ...], ...]
    collapsed_graph: nx.DiGraph = field(compare=False)

    @property
    def h(self) -> int:
        return len(self.channels)

    @property
    def k(self) -> int:
        return len(self.junctions)

    def block_of(self, vertex: str) -> int:
        for b, block in enumerate(self.junctions):
            if vertex in block:
                return b
        raise KeyError(vertex)


def junction_blocks(spec: GraphSpec) -> tuple[tuple[str, ...], ...]:
    """Undirected connected components of the junction subgraph, in spec order."""
    g = nx.Graph()
    g.add_nodes_from(spec.junction_vertices)
    g.add_edges_from((i, j) for (i, j), _ in spec.weight_items if i != j)
    order = {v: k for k, v in enumerate(spec.junction_vertices)}
    blocks = [tuple(sorted(c, key=order.__getitem__)) for c in nx.connected_components(g)]
    blocks.sort(key=lambda b: order[b[0]])
    return tuple(blocks)


def decompose(spec: GraphSpec) -> Decomposition:
    return Decomposition(spec, spec.channels, junction_blocks(spec), collapsed_digraph(spec))


# assembly --------------------------------------------------------------------


@dataclass(frozen=True)
class AssembledMatrix:
    spec: GraphSpec
    n: int
    dimension: int
    entries: Mapping[tuple[int, int], ExactComplex] = field(compare=False)
    vertex_index: Mapping[tuple, int] = field(compare=False)

    def channel_rows(self, r: int) -> range:
        start = self.vertex_index[("c", r, 0)]
        return range(start, start + self.n * self.spec.channels[r].e)

    def junction_row(self, vertex: str) -> int:
        return self.vertex_index[("j", vertex)]

    def key_of(self, row: int) -> tuple:
        return self._inverse()[row]

    def _inverse(self):
        inv = [None] * self.dimension
        for key, row in self.vertex_index.items():
            inv[row] = key
        return inv

    def trace(self) -> ExactComplex:
        acc = ZERO
        for (i, j), w in self.entries.items():
            if i == j:
                acc = acc + w
        return acc

    def dense(self, cap: int = 5000) -> np.ndarray:
        if self.dimension > cap:
            raise CapExceeded(f"dense matrix of dimension {self.dimension} exceeds cap {cap}")
        a = np.zeros((self.dimension, self.dimension), dtype=np.complex128)
        for (i, j), w in self.entries.items():
            a[i, j] = w.to_complex()
        return a

    def exact_rows(self) -> list[dict[int, ExactComplex]]:
        rows: list[dict[int, ExactComplex]] = [dict() for _ in range(self.dimension)]
        for (i, j), w in self.entries.items():
            rows[i][j] = w
        return rows

    def digraph(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(range(self.dimension))
        g.add_edges_from(self.entries.keys())
        return g


def assemble(spec: GraphSpec, n: int, cap: int = DEFAULT_DIMENSION_CAP) -> AssembledMatrix:
    """Build A^(n) with exact entries."""
    if n < 1:
        raise ValueError("n must be at least 1")
    dim = spec.dimension(n)
    if dim > cap:
        raise CapExceeded(f"assembled dimension {dim} exceeds cap {cap}")
    index: dict[tuple, int] = {}
    row = 0
    for r, c in enumerate(spec.channels):
        for i in range(n * c.e):
            index[("c", r, i)] = row
            row += 1
    for v in spec.junction_vertices:
        index[("j", v)] = row
        row += 1
    entries: dict[tuple[int, int], ExactComplex] = {}
    for r, c in enumerate(spec.channels):
        length = n * c.e
        first, last = index[("c", r, 0)], index[("c", r, length - 1)]
        for i in range(first, last + 1):
            if not c.alpha.is_zero():
                entries[(i, i)] = c.alpha
            if i < last:
                entries[(i, i + 1)] = c.beta
        entries[(index[("j", c.source)], first)] = c.beta
        entries[(last, index[("j", c.target)])] = c.beta
    for (i, j), w in spec.weight_items:
        entries[(index[("j", i)], index[("j", j)])] = w
    return AssembledMatrix(spec, n, dim, entries, index)


# import from a plain adjacency matrix ------------------------------------------


def from_dense_matrix(matrix, ids: Sequence[str] | None = None, name: str = "") -> GraphSpec:
    """Recover channels from an unweighted adjacency matrix.

    Vertices with exactly one in-neighbour and one out-neighbour (self-loops
    aside) are channel vertices; maximal runs of them become channels whose
    ``alpha`` is the shared diagonal entry. Everything else is a junction
    vertex. Off-diagonal entries must be 0 or 1.
    """
    a = np.asarray(matrix)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise SpecError("adjacency matrix must be square")
    size = a.shape[0]
    ids = list(ids) if ids is not None else [f"v{i}" for i in range(size)]
    off = a.copy()
    np.fill_diagonal(off, 0)
    if not np.isin(off, (0, 1)).all():
        raise SpecError("from_dense_matrix only handles unweighted (0/1) adjacency matrices")
    succ = [list(np.nonzero(off[i])[0]) for i in range(size)]
    pred = [list(np.nonzero(off[:, i])[0]) for i in range(size)]
    is_channel = [len(succ[i]) == 1 and len(pred[i]) == 1 for i in range(size)]
    if all(is_channel):
        is_channel[0] = False  # a bare cycle: promote one vertex to a junction
    junctions = [i for i in range(size) if not is_channel[i]]
    weights: dict[tuple[str, str], ExactComplex] = {}
    for i in junctions:
        if a[i, i] != 0:
            weights[(ids[i], ids[i])] = ExactComplex.coerce(complex(a[i, i]))
        for j in succ[i]:
            if not is_channel[j]:
                weights[(ids[i], ids[j])] = ExactComplex.coerce(1)
    channels = []
    for i in junctions:
        for j in succ[i]:
            if not is_channel[j]:
                continue
            run = [j]
            while is_channel[succ[run[-1]][0]]:
                run.append(succ[run[-1]][0])
                if len(run) > size:
                    raise SpecError("channel run does not terminate at a junction")
            diag = {complex(a[v, v]) for v in run}
            if len(diag) != 1:
                raise SpecError(f"channel starting at {ids[j]} has non-uniform diagonal entries")
            channels.append(
                ChannelSpec(ids[i], ids[succ[run[-1]][0]], len(run), ExactComplex.coerce(diag.pop()), ExactComplex.coerce(1))
            )
    return GraphSpec.build([ids[i] for i in junctions], weights, channels, name)
