"""The bound and consistency suite behind ``orbgrowth verify``."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .constructions import FiniteDigraph, ProductDigraph, TreeOfLobes
from .growth import verify_growth_bounds
from .lazy import LazyRootedDigraph, SphereTable, check_sphere_bound, distance, expand
from .perm import paired_suborbit, stabilizer_suborbits
from .suborbits import (
    count_labels,
    fibonacci,
    lobe_composition_size,
    subdegree_sequences,
    suborbit_partition,
)

__all__ = ["CheckResult", "run_checks", "convolve", "is_distance_transitive"]


@dataclass
class CheckResult:
    name: str
    passed: bool | None  # None: not applicable
    detail: str = ""

    def line(self) -> str:
        status = {True: "PASS", False: "FAIL", None: "SKIP"}[self.passed]
        return f"{status} {self.name}: {self.detail}"


def convolve(sizes, m: int = 2) -> list[int]:
    """Sphere sizes of an m-fold product from the base sphere sizes."""
    out = list(sizes)
    for _ in range(m - 1):
        out = [sum(out[k] * sizes[r - k] for k in range(r + 1)) for r in range(len(sizes))]
    return out


def is_distance_transitive(graph) -> bool:
    # infinite distance-transitive digraphs of connectivity one have complete lobes
    if isinstance(graph, TreeOfLobes):
        return graph.lobe.distance_set == frozenset({1})
    return False


def run_checks(
    graph: LazyRootedDigraph,
    radius: int,
    seed: int = 0,
    budget: int | None = None,
    samples: int = 1000,
) -> list[CheckResult]:
    rng = random.Random(seed)
    table = expand(graph, radius, budget=budget)
    sizes = table.sizes()
    out = []

    if len(sizes) > 1 and sizes[1] >= 2:
        ok, bad = check_sphere_bound(table)
        out.append(CheckResult("sphere_bound", ok, "s_r <= s_1(s_1-1)^(r-1)" + (f"; fails at r={bad}" if bad else "")))

    out.append(_adjacency_symmetry(graph, table, rng, samples))
    deg_out, deg_in = len(graph.out_neighbors(graph.root)), len(graph.in_neighbors(graph.root))
    out.append(CheckResult("valency_balance", deg_out == deg_in, f"out {deg_out}, in {deg_in}"))
    out.append(_transitivity(graph, table, rng, budget))

    try:
        records = suborbit_partition(graph, table)
    except TypeError as exc:
        out.append(CheckResult("partition", None, str(exc)))
        return out
    per = {}
    for rec in records:
        per.setdefault(rec.radius, []).append(rec)
    sums_ok = all(sum(rec.size for rec in per[r]) == sizes[r] for r in per)
    out.append(CheckResult("partition_sums", sums_ok, "cell sizes sum to s_r"))

    if isinstance(graph, TreeOfLobes):
        out += _tree_checks(graph, per, table)
    if isinstance(graph, ProductDigraph):
        out += _product_checks(graph, table, rng, budget)
    if isinstance(graph, FiniteDigraph):
        out += _finite_checks(graph)

    exact = all(rec.exact for rec in records)
    if exact and not isinstance(graph, FiniteDigraph) and table.radius >= 2:
        _, view = subdegree_sequences(records, table.radius)
        dt = is_distance_transitive(graph)
        m = graph.m if isinstance(graph, TreeOfLobes) else None
        for b in verify_growth_bounds(view, sizes[1], dt, m, isinstance(graph, TreeOfLobes)):
            out.append(CheckResult(b.name, b.passed, f"{b.lhs:.6g} vs {b.rhs:.6g} {b.note}".strip()))
    return out


def _adjacency_symmetry(graph, table, rng, samples):
    verts = [v for s in table.spheres for v in s]
    picked = verts if len(verts) <= samples else rng.sample(verts, samples)
    for v in picked:
        for u in graph.out_neighbors(v):
            if v not in graph.in_neighbors(u):
                return CheckResult("adjacency_symmetry", False, f"{u.hex()} misses in-arc from {v.hex()}")
        for u in graph.in_neighbors(v):
            if v not in graph.out_neighbors(u):
                return CheckResult("adjacency_symmetry", False, f"{u.hex()} misses out-arc to {v.hex()}")
    return CheckResult("adjacency_symmetry", True, f"{len(picked)} sampled vertices")


def _transitivity(graph, table, rng, budget, count=5):
    r = min(table.radius, 4)
    verts = [v for s in table.spheres[: r + 1] for v in s]
    picked = rng.sample(verts, min(count, len(verts)))
    want = table.sizes()[: r + 1]
    for v in picked:
        try:
            other = graph.reroot(v)
        except ValueError as exc:
            return CheckResult("vertex_transitivity", None, str(exc))
        got = expand(other, r, budget=budget).sizes()
        if got != want:
            return CheckResult("vertex_transitivity", False, f"from {v.hex()}: {got} != {want}")
    return CheckResult("vertex_transitivity", True, f"{len(picked)} re-rooted vertices to radius {r}")


def _tree_checks(graph: TreeOfLobes, per, table: SphereTable):
    out = []
    lobe = graph.lobe
    radii = [r for r in sorted(per) if r >= 1]
    n = {r: len(per[r]) for r in radii}
    k_ok = all(n[r] == count_labels(lobe.distance_set, r) for r in radii)
    out.append(CheckResult("label_count", k_ok, "classes per sphere = compositions of r"))
    if lobe.distance_set == frozenset({1, 2}):
        fib = all(n[r] == fibonacci(r) for r in radii)
        rec = all(n[r + 1] == n[r] + n[r - 1] for r in radii if r >= 2 and r + 1 in n)
        out.append(CheckResult("fibonacci", fib and rec, f"n = {[n[r] for r in radii]}"))
    if lobe.distance_transitive:
        bad = [
            rec for r in radii for rec in per[r] if lobe_composition_size(graph, rec.representative) != rec.size
        ]
        out.append(CheckResult("composition", not bad, "orbit size = product over lobe path"))
    return out


def _product_checks(graph: ProductDigraph, table, rng, budget, pairs=100):
    base_sizes = expand(graph.base, table.radius, budget=budget).sizes()
    want = convolve(base_sizes, graph.m)[: table.radius + 1]
    out = [CheckResult("convolution", table.sizes() == want, f"s = {table.sizes()}")]
    inner = [v for s in table.spheres[: min(3, table.radius) + 1] for v in s]
    bad = 0
    for _ in range(pairs):
        u, v = rng.choice(inner), rng.choice(inner)
        cu, cv = graph.decode(u), graph.decode(v)
        parts = [distance(graph.base, a, b, 2 * table.radius) for a, b in zip(cu, cv)]
        if distance(graph, u, v, 2 * table.radius * graph.m) != sum(parts):
            bad += 1
    out.append(CheckResult("distance_additivity", bad == 0, f"{pairs} sampled pairs, {bad} mismatches"))
    return out


def _finite_checks(graph: FiniteDigraph):
    if graph.group is None:
        return [CheckResult("pairing", None, "no automorphism group supplied")]
    root = graph.point(graph.root)
    cells = stabilizer_suborbits(graph.group, root)
    bad = [c for c in cells if len(paired_suborbit(graph.group, root, c)) != len(c)]
    return [CheckResult("pairing", not bad, f"{len(cells)} suborbits")]
