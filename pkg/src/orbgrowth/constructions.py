"""Concrete lazy digraphs: trees of lobes, product digraphs and finite wrappers.

Tree-of-lobes vertices are addressed by the path of (lobe, position) steps
from the root through the block-cut-vertex tree. The root sits in ``m``
fresh lobes; every other vertex sits in the lobe it was entered through plus
``m - 1`` fresh ones, and inside each fresh lobe it occupies the lobe's
basepoint.
"""

from __future__ import annotations

import warnings
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path

from . import catalog
from .lazy import LazyRootedDigraph, VertexKey
from .perm import (
    FiniteOrbitalDigraph,
    FinitePermGroup,
    PermError,
    is_primitive,
    is_transitive,
    load_group,
    orbital_digraph,
    stabilizer_generators,
    stabilizer_suborbits,
)

__all__ = [
    "ConstructionError",
    "LobeSpec",
    "make_lobe",
    "complete_lobe",
    "petersen_lobe",
    "lobe_from_group",
    "load_lobe",
    "TreeOfLobes",
    "tree_of_lobes",
    "ProductDigraph",
    "product_wreath",
    "FiniteDigraph",
    "wrap_finite",
    "encode_varint",
    "decode_varint",
]


class ConstructionError(ValueError):
    pass


# -- varints -----------------------------------------------------------------


def encode_varint(x: int) -> bytes:
    if x < 0:
        raise ValueError("varints are unsigned")
    out = bytearray()
    while True:
        byte = x & 0x7F
        x >>= 7
        if x:
            out.append(byte | 0x80)
        else:
            out.append(byte)
            return bytes(out)


def decode_varint(data: bytes, pos: int = 0) -> tuple[int, int]:
    x = shift = 0
    while True:
        byte = data[pos]
        pos += 1
        x |= (byte & 0x7F) << shift
        if not byte & 0x80:
            return x, pos
        shift += 7


# -- lobes -------------------------------------------------------------------


@dataclass(frozen=True)
class LobeSpec:
    """A finite digraph used as the repeated block of a connectivity-one digraph."""

    n: int
    arcs: frozenset
    dist: tuple[tuple[int, ...], ...]
    distance_set: frozenset
    name: str = ""
    basepoint: int = 0
    group: FinitePermGroup | None = field(default=None, compare=False)
    vertex_transitive: bool = False
    arc_transitive: bool = False
    distance_transitive: bool = False
    primitive: bool = False

    @property
    def diameter(self) -> int:
        return max(self.distance_set)

    def out_adjacency(self) -> list[list[int]]:
        adj = [[] for _ in range(self.n)]
        for u, w in self.arcs:
            adj[u].append(w)
        return [sorted(a) for a in adj]

    def in_adjacency(self) -> list[list[int]]:
        adj = [[] for _ in range(self.n)]
        for u, w in self.arcs:
            adj[w].append(u)
        return [sorted(a) for a in adj]

    def distance_partition(self, point: int | None = None) -> list[int]:
        """Sizes of the distance classes around ``point`` (the basepoint by default)."""
        point = self.basepoint if point is None else point
        sizes = [0] * (self.diameter + 1)
        for d in self.dist[point]:
            sizes[d] += 1
        return sizes


def _undirected(n, arcs):
    adj = [set() for _ in range(n)]
    for u, w in arcs:
        adj[u].add(w)
        adj[w].add(u)
    return adj


def _bfs_dist(adj, s, skip=None):
    dist = {s: 0}
    q = deque([s])
    while q:
        x = q.popleft()
        for y in adj[x]:
            if y != skip and y not in dist:
                dist[y] = dist[x] + 1
                q.append(y)
    return dist


def make_lobe(
    n: int,
    arcs,
    group: FinitePermGroup | None = None,
    name: str = "",
    basepoint: int = 0,
) -> LobeSpec:
    """Validate a lobe and compute its symmetry flags from ``group``.

    The flags stay False when no automorphism group is supplied.
    """
    arcs = frozenset((int(u), int(w)) for u, w in arcs)
    if n < 3:
        raise ConstructionError(f"a lobe needs at least 3 vertices, got {n}")
    for u, w in arcs:
        if u == w:
            raise ConstructionError(f"loop at {u}")
        if not (0 <= u < n and 0 <= w < n):
            raise ConstructionError(f"arc ({u}, {w}) out of range")
    adj = _undirected(n, arcs)
    rows = []
    for s in range(n):
        d = _bfs_dist(adj, s)
        if len(d) != n:
            raise ConstructionError("lobe is not connected")
        rows.append(tuple(d[x] for x in range(n)))
    for v in range(n):
        start = 0 if v != 0 else 1
        if len(_bfs_dist(adj, start, skip=v)) != n - 1:
            raise ConstructionError(f"vertex {v} is a cut vertex; lobes need connectivity >= 2")
    dset = frozenset(d for row in rows for d in row if d > 0)

    vt = at = dt = prim = False
    if group is not None:
        if group.degree != n:
            raise ConstructionError("automorphism group degree does not match the lobe")
        for g in group.generators:
            if any((g(u), g(w)) not in arcs for u, w in arcs):
                raise ConstructionError(f"{g} is not an automorphism of the lobe")
        vt = is_transitive(group)
        if vt:
            u, w = min(arcs)
            at = orbital_digraph(group, u, w).arcs == arcs
            cells = stabilizer_suborbits(group, basepoint)
            classes = {}
            for x in range(n):
                classes.setdefault(rows[basepoint][x], set()).add(x)
            dt = sorted(map(frozenset, classes.values()), key=sorted) == sorted(cells, key=sorted)
            prim = is_primitive(group)[0]
    return LobeSpec(n, arcs, tuple(rows), dset, name, basepoint, group, vt, at, dt, prim)


def complete_lobe(size: int) -> LobeSpec:
    """The complete digraph on ``size`` vertices, arcs both ways."""
    if size < 3:
        raise ConstructionError(f"complete lobe needs at least 3 vertices, got {size}")
    arcs = [(u, w) for u in range(size) for w in range(size) if u != w]
    return make_lobe(size, arcs, catalog.symmetric(size), name=f"complete({size})")


def petersen_lobe() -> LobeSpec:
    return make_lobe(10, catalog.petersen_arcs(), catalog.petersen_group(), name="petersen")


def lobe_from_group(group: FinitePermGroup, alpha: int, beta: int, name: str = "") -> LobeSpec:
    """The orbital digraph of (alpha, beta) as a lobe, rooted at alpha."""
    if not is_transitive(group):
        raise ConstructionError("group is not transitive")
    if not is_primitive(group)[0]:
        raise ConstructionError("group is imprimitive")
    if all(g.is_identity() for g in stabilizer_generators(group, alpha)):
        raise ConstructionError("group is regular")
    od = orbital_digraph(group, alpha, beta)
    try:
        return make_lobe(group.degree, od.arcs, group, name=name or group.name, basepoint=alpha)
    except ConstructionError as exc:
        raise ConstructionError(f"orbital digraph unusable as a lobe: {exc}") from None


def _read_arcs(text: str):
    arcs = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ConstructionError(f"expected 'u v', got {line!r}")
        arcs.append((int(parts[0]), int(parts[1])))
    if not arcs:
        raise ConstructionError("empty arc list")
    n = 1 + max(max(a) for a in arcs)
    return n, arcs


def load_lobe(arc_path, group_path=None) -> LobeSpec:
    n, arcs = _read_arcs(Path(arc_path).read_text())
    group = load_group(group_path) if group_path else None
    return make_lobe(n, arcs, group, name=Path(arc_path).stem)


# -- tree of lobes -----------------------------------------------------------


class TreeOfLobes(LazyRootedDigraph):
    """Gamma(m, Lambda): every vertex in ``m`` lobes, connectivity one."""

    def __init__(self, m: int, lobe: LobeSpec):
        if m < 2:
            raise ConstructionError("tree of lobes needs m >= 2")
        self.m = m
        self.lobe = lobe
        self.root = b"\x00"
        self.descriptor = f"lobes(m={m}, lobe={lobe.name})"
        bp = lobe.basepoint
        # position <-> vertex choice: the basepoint is the entry, the rest are numbered in order
        self._others = [p for p in range(lobe.n) if p != bp]
        self._choice = {p: c for c, p in enumerate(self._others)}
        self._step_dist = [lobe.dist[bp][p] for p in self._others]
        self._fast = m <= 128 and lobe.n <= 129
        self._out = self._tables(lobe.out_adjacency())
        self._in = self._tables(lobe.in_adjacency())
        und = [sorted(set(a) | set(b)) for a, b in zip(lobe.out_adjacency(), lobe.in_adjacency())]
        self._und = self._tables(und)

    def _tables(self, adj):
        bp = self.lobe.basepoint
        # per position: (entry adjacent?, adjacent choices); for the basepoint only choices
        table = []
        for p in range(self.lobe.n):
            entry = bp in adj[p]
            choices = [self._choice[q] for q in adj[p] if q != bp]
            table.append((entry, choices))
        if not self._fast:
            return table, None
        # fast path: two-byte (lobe, choice) suffixes, fresh ones per lobe index and
        # sibling ones per (lobe index, choice)
        fresh = [[bytes((i, c)) for c in table[bp][1]] for i in range(self.m)]
        sibs = [
            [[bytes((j, s)) for s in table[p][1]] for p in self._others] for j in range(self.m)
        ]
        entry = [table[p][0] for p in self._others]
        return table, (fresh, sibs, entry)

    # keys: varint depth, then varint (lobe, choice) pairs
    def encode(self, steps) -> VertexKey:
        if self._fast and len(steps) < 128:
            return bytes([len(steps)] + [x for s in steps for x in s])
        out = bytearray(encode_varint(len(steps)))
        for j, c in steps:
            out += encode_varint(j) + encode_varint(c)
        return bytes(out)

    def decode(self, key: VertexKey) -> tuple[tuple[int, int], ...]:
        if self._fast and key[0] < 128:
            return tuple(zip(key[1::2], key[2::2]))
        k, pos = decode_varint(key)
        steps = []
        for _ in range(k):
            j, pos = decode_varint(key, pos)
            c, pos = decode_varint(key, pos)
            steps.append((j, c))
        if pos != len(key):
            raise ValueError("trailing bytes in address")
        return tuple(steps)

    def _neighbors(self, key, tables):
        table, fast = tables
        if fast is None or key[0] >= 127:
            return self._neighbors_slow(key, table)
        fresh, sibs, entry = fast
        k = key[0]
        if k == 0:
            return [bytes((1,)) + suf for i in range(self.m) for suf in fresh[i]]
        head = bytes((k + 1,)) + key[1:]
        out = [head + suf for i in range(self.m - 1) for suf in fresh[i]]
        j, c = key[-2], key[-1]
        stem = key[1:-2]
        if entry[c]:
            out.append(bytes((k - 1,)) + stem)
        prefix = bytes((k,)) + stem
        out += [prefix + suf for suf in sibs[j][c]]
        out.sort()
        return out

    def _neighbors_slow(self, key, table):
        if isinstance(table, tuple):
            table = table[0]
        steps = self.decode(key)
        fresh = table[self.lobe.basepoint][1]
        out = []
        lobes = self.m if not steps else self.m - 1
        for i in range(lobes):
            out += [self.encode(steps + ((i, c),)) for c in fresh]
        if steps:
            j, c = steps[-1]
            entry, sibs = table[self._others[c]]
            if entry:
                out.append(self.encode(steps[:-1]))
            out += [self.encode(steps[:-1] + ((j, s),)) for s in sibs]
        out.sort()
        return out

    def out_neighbors(self, v):
        return self._neighbors(v, self._out)

    def in_neighbors(self, v):
        return self._neighbors(v, self._in)

    def neighbors(self, v):
        return self._neighbors(v, self._und)

    def label(self, v: VertexKey) -> tuple[int, ...]:
        """Within-lobe distances along the block-cut-vertex-tree path from the root."""
        sd = self._step_dist
        return tuple(sd[c] for _, c in self.decode(v))

    def root_distance(self, v):
        return sum(self.label(v))

    def lobes_at(self, v: VertexKey) -> list[tuple]:
        """Identifiers of the lobes containing ``v`` as (owner address, lobe index)."""
        steps = self.decode(v)
        own = [(steps, i) for i in range(self.m if not steps else self.m - 1)]
        if steps:
            own.append((steps[:-1], steps[-1][0]))
        return own


def tree_of_lobes(m: int, lobe: LobeSpec) -> TreeOfLobes:
    if m < 2:
        raise ConstructionError("tree of lobes needs m >= 2")
    missing = [
        flag
        for flag in ("vertex_transitive", "arc_transitive", "primitive")
        if not getattr(lobe, flag)
    ]
    if missing:
        warnings.warn(
            f"lobe {lobe.name or '?'} is not {', '.join(missing)}; the digraph is built "
            "anyway but group-theoretic conclusions do not apply",
            stacklevel=2,
        )
    return TreeOfLobes(m, lobe)


# -- product digraphs --------------------------------------------------------


class ProductDigraph(LazyRootedDigraph):
    """Tuples of base vertices; adjacent when they differ by one base adjacency in one slot."""

    def __init__(self, base: LazyRootedDigraph, m: int):
        if m < 2:
            raise ConstructionError("product needs m >= 2")
        self.base = base
        self.m = m
        self.root = self.encode((base.root,) * m)
        self.descriptor = f"wreath(base={base.descriptor}, m={m})"

    @staticmethod
    def encode(coords) -> VertexKey:
        out = bytearray()
        for c in coords:
            if len(c) < 128:
                out.append(len(c))
            else:
                out += encode_varint(len(c))
            out += c
        return bytes(out)

    def decode(self, key: VertexKey) -> tuple[VertexKey, ...]:
        coords = []
        pos = 0
        while pos < len(key):
            if key[pos] < 128:
                n = key[pos]
                pos += 1
            else:
                n, pos = decode_varint(key, pos)
            coords.append(key[pos : pos + n])
            pos += n
        if len(coords) != self.m:
            raise ValueError(f"expected {self.m} coordinates, got {len(coords)}")
        return tuple(coords)

    def _moves(self, key, step):
        coords = self.decode(key)
        out = []
        for i, c in enumerate(coords):
            for w in step(c):
                out.append(self.encode(coords[:i] + (w,) + coords[i + 1 :]))
        out.sort()
        return out

    def out_neighbors(self, v):
        return self._moves(v, self.base.out_neighbors)

    def in_neighbors(self, v):
        return self._moves(v, self.base.in_neighbors)

    def neighbors(self, v):
        return self._moves(v, self.base.neighbors)

    def root_distance(self, v):
        parts = [self.base.root_distance(c) for c in self.decode(v)]
        if any(p is None for p in parts):
            return None
        return sum(parts)


def product_wreath(base: LazyRootedDigraph, m: int) -> ProductDigraph:
    if m < 2:
        raise ConstructionError("product needs m >= 2")
    return ProductDigraph(base, m)


# -- finite digraphs ---------------------------------------------------------


class FiniteDigraph(LazyRootedDigraph):
    """An explicit finite digraph behind the lazy interface; keys are 4-byte big-endian."""

    def __init__(self, digraph: FiniteOrbitalDigraph, group=None, name=""):
        self.digraph = digraph
        self.group = group
        self.n = digraph.n
        out = [[] for _ in range(self.n)]
        inn = [[] for _ in range(self.n)]
        for u, w in sorted(digraph.arcs):
            out[u].append(w)
            inn[w].append(u)
        self._out = [[self.key(w) for w in a] for a in out]
        self._in = [[self.key(u) for u in a] for a in inn]
        self._und = [sorted(set(a) | set(b)) for a, b in zip(self._out, self._in)]
        self.root = self.key(digraph.alpha)
        self.descriptor = name or f"finite(n={self.n})"

    @staticmethod
    def key(x: int) -> VertexKey:
        return x.to_bytes(4, "big")

    @staticmethod
    def point(key: VertexKey) -> int:
        return int.from_bytes(key, "big")

    def out_neighbors(self, v):
        return list(self._out[self.point(v)])

    def in_neighbors(self, v):
        return list(self._in[self.point(v)])

    def neighbors(self, v):
        return list(self._und[self.point(v)])

    def reroot(self, v):
        if self.group is None or not is_transitive(self.group):
            raise ConstructionError("re-rooting a finite digraph needs a transitive automorphism group")
        return super().reroot(v)


def wrap_finite(digraph: FiniteOrbitalDigraph, group: FinitePermGroup | None = None, name="") -> FiniteDigraph:
    adj = digraph.adjacency()
    if len(_bfs_dist(adj, digraph.alpha)) != digraph.n:
        raise ConstructionError("finite digraph is not connected")
    if group is not None:
        if group.degree != digraph.n:
            raise PermError("group degree does not match the digraph")
        for g in group.generators:
            if any((g(u), g(w)) not in digraph.arcs for u, w in digraph.arcs):
                raise ConstructionError(f"{g} is not an automorphism of the digraph")
    return FiniteDigraph(digraph, group, name)


def finite_from_arcs(n: int, arcs, root: int = 0) -> FiniteOrbitalDigraph:
    arcs = frozenset(arcs)
    beta = min((w for u, w in arcs if u == root), default=root)
    return FiniteOrbitalDigraph(n, arcs, root, beta)


def load_finite(arc_path, group_path=None) -> FiniteDigraph:
    n, arcs = _read_arcs(Path(arc_path).read_text())
    group = load_group(group_path) if group_path else None
    return wrap_finite(finite_from_arcs(n, arcs), group, name=f"finite({arc_path})")
