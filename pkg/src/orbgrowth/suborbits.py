"""Suborbits inside spheres, and the subdegree sequences built from them.

Each construction supplies a canonical invariant that is constant on
stabilizer orbits: distance labels for trees of lobes, the multiset of
coordinate invariants for products, exact orbit ids for finite digraphs with
a known group. Whether the invariant separates orbits exactly is recorded
per record, never assumed.
"""

from __future__ import annotations

import json
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from functools import lru_cache

from .constructions import FiniteDigraph, ProductDigraph, TreeOfLobes
from .lazy import LazyRootedDigraph, SphereTable, VertexKey, expand
from .perm import stabilizer_suborbits

__all__ = [
    "UnsupportedConstruction",
    "NonExactRecords",
    "SuborbitRecord",
    "SubdegreeMultiset",
    "SequenceView",
    "label_of",
    "count_labels",
    "invariant_function",
    "suborbit_partition",
    "subdegree_sequences",
    "lobe_composition_size",
    "fibonacci",
    "report_csv",
    "report_json",
]


class UnsupportedConstruction(TypeError):
    pass


class NonExactRecords(ValueError):
    pass


def label_of(graph: TreeOfLobes, v: VertexKey) -> tuple[int, ...]:
    """Within-lobe geodesic lengths along the lobe path from the root to ``v``."""
    if not isinstance(graph, TreeOfLobes):
        raise UnsupportedConstruction("distance labels exist only for trees of lobes")
    if v == graph.root:
        raise ValueError("the root has no label")
    return graph.label(v)


@lru_cache(maxsize=None)
def _count_labels(parts: tuple[int, ...], r: int) -> int:
    ways = [1] + [0] * r
    for total in range(1, r + 1):
        ways[total] = sum(ways[total - p] for p in parts if p <= total)
    return ways[r]


def count_labels(distance_set, r: int) -> int:
    """Number of compositions of ``r`` with parts from ``distance_set``."""
    parts = tuple(sorted(set(distance_set)))
    if not parts or parts[0] != 1:
        raise ValueError("distance set must be non-empty with minimum 1")
    return _count_labels(parts, r)


def fibonacci(r: int) -> int:
    """f_0 = f_1 = 1."""
    a, b = 1, 1
    for _ in range(r):
        a, b = b, a + b
    return a


def invariant_function(graph: LazyRootedDigraph):
    """Return ``(fn, exact)``: ``fn(v)`` is a hashable orbit invariant of ``v``."""
    if isinstance(graph, TreeOfLobes):
        sd = graph._step_dist
        if graph._fast and max(sd) < 256:
            table = bytes(sd[c] if c < len(sd) else 0 for c in range(256))

            def tree_label(v):
                if v[0] < 128:
                    return v[2::2].translate(table)
                return bytes(graph.label(v))

            return tree_label, graph.lobe.distance_transitive
        return (lambda v: bytes(graph.label(v))), graph.lobe.distance_transitive
    if isinstance(graph, ProductDigraph):
        base_fn, base_exact = invariant_function(graph.base)
        decode = graph.decode

        def product_invariant(v):
            return tuple(sorted(base_fn(c) for c in decode(v)))

        return product_invariant, base_exact
    if isinstance(graph, FiniteDigraph):
        root = graph.point(graph.root)
        if graph.group is not None:
            cell_of = {}
            for cell in stabilizer_suborbits(graph.group, root):
                for x in cell:
                    cell_of[x] = min(cell)
            return (lambda v: cell_of[graph.point(v)]), True
        dist = expand(graph, graph.n).dist
        return (lambda v: dist[v]), False
    raise UnsupportedConstruction(f"no suborbit invariant for {type(graph).__name__}")


@dataclass(frozen=True)
class SuborbitRecord:
    radius: int
    invariant: object
    size: int
    exact: bool
    representative: VertexKey = field(default=b"", compare=False)

    def invariant_display(self):
        return _display(self.invariant)


def _display(inv):
    if isinstance(inv, bytes):
        return list(inv)
    if isinstance(inv, tuple):
        return [_display(x) for x in inv]
    return inv


def suborbit_partition(graph: LazyRootedDigraph, table: SphereTable) -> list[SuborbitRecord]:
    """Split every sphere of ``table`` into invariant classes.

    Records come sorted by (radius, size, invariant). When ``exact`` is False
    the classes may merge several orbits, so counts are lower bounds.
    """
    fn, exact = invariant_function(graph)
    records = []
    for r, sphere in enumerate(table.spheres):
        invs = list(map(fn, sphere))
        counts = Counter(invs)
        # built back to front so the first vertex of each class wins
        reps = dict(zip(reversed(invs), reversed(sphere)))
        for inv, size in counts.items():
            records.append(SuborbitRecord(r, inv, size, exact, reps[inv]))
    records.sort(key=lambda rec: (rec.radius, rec.size, rec.invariant))
    return records


def lobe_composition_size(graph: TreeOfLobes, v: VertexKey) -> int:
    """Orbit size of ``v`` as a product over its lobe path.

    The first lobe contributes m times the lobe's distance class size, each
    later lobe (m - 1) times its class size.
    """
    if not isinstance(graph, TreeOfLobes):
        raise UnsupportedConstruction("composition sizes exist only for trees of lobes")
    if not graph.lobe.distance_transitive:
        raise ValueError("lobe is not distance-transitive")
    cells = graph.lobe.distance_partition()
    size = 1
    for i, d in enumerate(graph.label(v)):
        size *= (graph.m if i == 0 else graph.m - 1) * cells[d]
    return size


@dataclass(frozen=True)
class SubdegreeMultiset:
    """Multiplicities of subdegrees seen out to ``horizon``; each is a lower bound."""

    multiplicity: dict
    horizon: int
    recurring: frozenset

    def certified(self, size: int) -> str:
        mark = ">=" if size in self.recurring else ""
        return f"{mark}{self.multiplicity[size]}"


@dataclass(frozen=True)
class SequenceView:
    lower: tuple[int, ...]
    upper: tuple[int, ...]
    n: tuple[int, ...]
    N: tuple[int, ...]
    sphere_max: tuple[int, ...]
    horizon: int
    height: str

    @property
    def ball_counts(self) -> tuple[int, ...]:
        """Suborbits in each ball, the diagonal one included."""
        return tuple(1 + x for x in self.N)


def subdegree_sequences(records, horizon: int | None = None):
    """Assemble the subdegree multiset and the lower/upper sequences.

    ``n[r]`` counts suborbits in sphere r (``n[0] = 1``) and ``N[r]`` sums
    ``n[1..r]``. Ties in the lower sequence are broken by first radius, then
    invariant; only the values are kept.
    """
    records = list(records)
    if any(not rec.exact for rec in records):
        raise NonExactRecords("sequence assembly needs exact suborbit records")
    if horizon is None:
        horizon = max(rec.radius for rec in records)
    records = [rec for rec in records if rec.radius <= horizon]
    nontrivial = sorted(
        (rec for rec in records if rec.radius >= 1),
        key=lambda rec: (rec.size, rec.radius, rec.invariant),
    )
    lower = tuple(rec.size for rec in nontrivial)
    upper = tuple(sorted(set(lower)))
    mult = Counter(lower)
    per_sphere = defaultdict(list)
    for rec in records:
        per_sphere[rec.radius].append(rec.size)
    n = tuple(len(per_sphere[r]) for r in range(horizon + 1))
    N = []
    total = 0
    for r in range(horizon + 1):
        if r:
            total += n[r]
        N.append(total)
    sphere_max = tuple(max(per_sphere[r], default=0) for r in range(horizon + 1))
    if horizon >= 2:
        recurring = frozenset(set(per_sphere[horizon]) & set(per_sphere[horizon - 1]))
    else:
        recurring = frozenset()
    height = "greater than omega (evidence)" if recurring else "omega-consistent"
    multiset = SubdegreeMultiset(dict(sorted(mult.items())), horizon, recurring)
    view = SequenceView(lower, upper, n, tuple(N), sphere_max, horizon, height)
    return multiset, view


def report_csv(records) -> str:
    per = defaultdict(list)
    for rec in records:
        per[rec.radius].append(rec.size)
    lines = ["r,n_r,N_r,sizes"]
    total = 0
    for r in sorted(per):
        if r:
            total += len(per[r])
        lines.append(f"{r},{len(per[r])},{total},{';'.join(map(str, per[r]))}")
    return "\n".join(lines) + "\n"


def report_json(records, multiset=None, view=None) -> str:
    doc = {
        "records": [
            {
                "r": rec.radius,
                "invariant": rec.invariant_display(),
                "size": rec.size,
                "exact": rec.exact,
            }
            for rec in records
        ]
    }
    if multiset is not None:
        doc["multiset"] = {
            str(size): multiset.certified(size) for size in multiset.multiplicity
        }
        doc["horizon"] = multiset.horizon
    if view is not None:
        doc["lower"] = list(view.lower)
        doc["upper"] = list(view.upper)
        doc["n"] = list(view.n)
        doc["N"] = list(view.N)
        doc["height"] = view.height
    return json.dumps(doc, indent=2) + "\n"
