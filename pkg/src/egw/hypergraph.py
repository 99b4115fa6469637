"""Hypergraphs with the degree/neighborhood statistics the game analysis needs.

Vertices are opaque string ids.  Edges are vertex sets of size >= 1.
Duplicate edges are rejected unless explicitly admitted; when admitted,
every copy counts separately in neighborhood statistics.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import ValidationError


class Hypergraph:
    """Immutable vertex/edge incidence structure.

    ``vertices`` is an ordered tuple of unique ids; ``edges`` is a tuple of
    sorted vertex-index tuples.  The vertex order is preserved from
    construction so that serialized artifacts are reproducible.
    """

    __slots__ = ("vertices", "edges", "allow_duplicate_edges", "_index")

    def __init__(
        self,
        vertices: Sequence[str],
        edges: Iterable[Iterable[str]],
        allow_duplicate_edges: bool = False,
    ):
        self.vertices = tuple(vertices)
        self._index = {v: i for i, v in enumerate(self.vertices)}
        if len(self._index) != len(self.vertices):
            raise ValidationError("duplicate vertex ids")
        packed = []
        seen = set()
        for e in edges:
            idxs = []
            for v in e:
                if v not in self._index:
                    raise ValidationError(f"edge uses unknown vertex {v!r}")
                idxs.append(self._index[v])
            if len(set(idxs)) != len(idxs):
                raise ValidationError("duplicate vertex inside an edge")
            if not idxs:
                raise ValidationError("empty edge")
            key = tuple(sorted(idxs))
            if key in seen and not allow_duplicate_edges:
                raise ValidationError(f"duplicate edge {[self.vertices[i] for i in key]}")
            seen.add(key)
            packed.append(key)
        self.edges = tuple(packed)
        self.allow_duplicate_edges = allow_duplicate_edges

    # -- basic views ---------------------------------------------------

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def vertex_index(self, v: str) -> int:
        return self._index[v]

    def edge_ids(self, edge_no: int) -> tuple[str, ...]:
        return tuple(self.vertices[i] for i in self.edges[edge_no])

    def edge_id_sets(self) -> list[frozenset[str]]:
        return [frozenset(self.vertices[i] for i in e) for e in self.edges]

    def __eq__(self, other):
        return (
            isinstance(other, Hypergraph)
            and self.vertices == other.vertices
            and self.edges == other.edges
        )

    def __repr__(self):
        return f"Hypergraph({self.vertex_count} vertices, {self.edge_count} edges)"

    # -- serialization -------------------------------------------------

    def to_json_obj(self, n: int | None = None) -> dict:
        return {
            "n": n,
            "vertices": list(self.vertices),
            "edges": [list(self.edge_ids(i)) for i in range(self.edge_count)],
        }

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "Hypergraph":
        if "vertices" not in obj or "edges" not in obj:
            raise ValidationError("hypergraph JSON needs 'vertices' and 'edges'")
        return cls(obj["vertices"], obj["edges"])

    def to_dot(self, name: str = "board") -> str:
        """Star-expansion rendering: one point node per edge, linked to members."""
        lines = [f"graph {name} {{"]
        for v in self.vertices:
            lines.append(f'  "v:{v}" [label="{v}", shape=ellipse];')
        for i in range(self.edge_count):
            lines.append(f'  "e:{i}" [label="e{i}", shape=point];')
            for v in self.edge_ids(i):
                lines.append(f'  "e:{i}" -- "v:{v}";')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def digest(self) -> str:
        blob = json.dumps(self.to_json_obj(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:12]


@dataclass(frozen=True)
class Pairing:
    """A partition of vertices into unordered pairs, plus at most one leftover."""

    pairs: tuple[tuple[str, str], ...]
    leftover: str | None = None

    def __post_init__(self):
        norm = tuple(tuple(sorted(p)) for p in self.pairs)
        object.__setattr__(self, "pairs", tuple(sorted(norm)))
        seen: set[str] = set()
        for a, b in self.pairs:
            if a == b:
                raise ValidationError(f"pair ({a!r},{b!r}) is degenerate")
            for v in (a, b):
                if v in seen:
                    raise ValidationError(f"vertex {v!r} appears in two pairs")
                seen.add(v)
        if self.leftover is not None and self.leftover in seen:
            raise ValidationError("leftover vertex is also paired")

    def covered(self) -> set[str]:
        out = {v for p in self.pairs for v in p}
        if self.leftover is not None:
            out.add(self.leftover)
        return out

    def partner_map(self) -> dict[str, str]:
        f = {}
        for a, b in self.pairs:
            f[a] = b
            f[b] = a
        return f

    def validate_cover(self, vertices: Iterable[str], full: bool = False) -> None:
        """Check the pairing covers exactly the given vertex set.

        With ``full=True`` a leftover vertex is also rejected.
        """
        vs = set(vertices)
        cov = self.covered()
        if cov != vs:
            missing = sorted(vs - cov)[:5]
            extra = sorted(cov - vs)[:5]
            raise ValidationError(f"pairing cover mismatch (missing={missing}, extra={extra})")
        if full and self.leftover is not None:
            raise ValidationError("pairing has a leftover vertex but full cover was required")

    def to_json_obj(self) -> dict:
        return {"pairs": [list(p) for p in self.pairs], "leftover": self.leftover}

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "Pairing":
        return cls(tuple(tuple(p) for p in obj["pairs"]), obj.get("leftover"))


@dataclass(frozen=True)
class PairingStrategyMaker:
    """Data of a pairing strategy: optional first move plus a pairing.

    ``first_move`` present: Maker opens with that vertex and then mirrors.
    ``first_move`` absent: pure variant, Breaker starts and Maker only mirrors.
    """

    pairing: Pairing
    first_move: str | None = None

    @property
    def pure(self) -> bool:
        return self.first_move is None

    def validate_for_board(self, board: Hypergraph) -> None:
        if self.first_move is None:
            self.pairing.validate_cover(board.vertices)
        else:
            if self.first_move not in board.vertices:
                raise ValidationError("first move is not a board vertex")
            rest = set(board.vertices) - {self.first_move}
            self.pairing.validate_cover(rest)

    def to_json_obj(self) -> dict:
        obj = self.pairing.to_json_obj()
        obj["first_move"] = self.first_move
        return obj

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "PairingStrategyMaker":
        return cls(
            Pairing(tuple(tuple(p) for p in obj["pairs"]), obj.get("leftover")),
            obj.get("first_move"),
        )


# -- statistics ---------------------------------------------------------


@dataclass
class DegreeStats:
    by_vertex: dict[str, int]
    max_degree: int
    argmax: str | None = None


@dataclass
class NeighborhoodStats:
    by_edge: list[int]
    max_size: int


def degree_stats(h: Hypergraph) -> DegreeStats:
    """Edge-membership count for every vertex, and the maximum."""
    counts = [0] * h.vertex_count
    for e in h.edges:
        for i in e:
            counts[i] += 1
    by_vertex = {h.vertices[i]: counts[i] for i in range(h.vertex_count)}
    if counts:
        mx = max(counts)
        argmax = h.vertices[counts.index(mx)]
    else:
        mx, argmax = 0, None
    return DegreeStats(by_vertex, mx, argmax)


def neighborhood_stats(h: Hypergraph) -> NeighborhoodStats:
    """|N(e)| for every edge: the number of other edges meeting e.

    Duplicate edges (when admitted) count separately, since they carry
    distinct edge numbers.
    """
    incident: list[list[int]] = [[] for _ in range(h.vertex_count)]
    for eno, e in enumerate(h.edges):
        for i in e:
            incident[i].append(eno)
    sizes = []
    for eno, e in enumerate(h.edges):
        met: set[int] = set()
        for i in e:
            met.update(incident[i])
        met.discard(eno)
        sizes.append(len(met))
    return NeighborhoodStats(sizes, max(sizes) if sizes else 0)


def is_uniform(h: Hypergraph, n: int) -> bool:
    if n <= 0:
        raise ValidationError("uniformity parameter must be positive")
    return all(len(e) == n for e in h.edges)


def uniformity(h: Hypergraph) -> int | None:
    """The common edge size, or None if edges disagree or there are none."""
    sizes = {len(e) for e in h.edges}
    if len(sizes) == 1:
        return sizes.pop()
    return None


# -- transforms ---------------------------------------------------------

COPY_SUFFIX = "'"


def disjoint_double(h: Hypergraph) -> tuple[Hypergraph, dict[str, str]]:
    """H together with a fresh disjoint copy; returns the copy map as well.

    Vertex and edge counts double exactly and the maximum degree is
    unchanged, since the copy shares nothing with the original.
    """
    copy_map = {v: v + COPY_SUFFIX for v in h.vertices}
    vertices = list(h.vertices) + [copy_map[v] for v in h.vertices]
    edges = [list(h.edge_ids(i)) for i in range(h.edge_count)]
    edges += [[copy_map[v] for v in h.edge_ids(i)] for i in range(h.edge_count)]
    return Hypergraph(vertices, edges, allow_duplicate_edges=h.allow_duplicate_edges), copy_map


def mirror_closure(h: Hypergraph, pairing: Pairing) -> Hypergraph:
    """Close the edge set under the pairing involution f: E' = E u f(E).

    Set-union semantics: if f maps an edge onto itself (both members of a
    pair inside the edge, mirrored), only one copy is kept.  The pairing
    must cover every vertex with no leftover, so f is total.  The result
    satisfies max_degree(E') <= 2 * max_degree(E).
    """
    pairing.validate_cover(h.vertices, full=True)
    f = pairing.partner_map()
    seen = {frozenset(h.edge_ids(i)) for i in range(h.edge_count)}
    edges = [list(h.edge_ids(i)) for i in range(h.edge_count)]
    for i in range(h.edge_count):
        mirrored = frozenset(f[v] for v in h.edge_ids(i))
        if len(mirrored) != len(h.edges[i]):
            raise ValidationError("mirrored edge collapsed; pairing is not an involution")
        if mirrored not in seen:
            seen.add(mirrored)
            edges.append(sorted(mirrored))
    return Hypergraph(h.vertices, edges)
