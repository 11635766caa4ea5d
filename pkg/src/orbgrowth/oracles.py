"""Brute-force counterparts of the fast routines.

These enumerate whole groups, all set partitions or whole distance matrices,
so they only run on tiny inputs. They deliberately share no code with the
routines they check beyond the ``Permutation`` container.
"""

from __future__ import annotations

from collections import deque

from .perm import FinitePermGroup, SizeCapError


def all_elements(group: FinitePermGroup, limit: int = 200_000) -> list[tuple[int, ...]]:
    ident = tuple(range(group.degree))
    seen = {ident}
    queue = [ident]
    gens = [g.images for g in group.generators]
    for el in queue:
        for g in gens:
            nxt = tuple(g[x] for x in el)
            if nxt not in seen:
                if len(seen) >= limit:
                    raise SizeCapError(f"group order exceeds {limit}")
                seen.add(nxt)
                queue.append(nxt)
    return queue


def brute_orbit(group: FinitePermGroup, point: int) -> set:
    return {el[point] for el in all_elements(group)}


def brute_suborbits(group: FinitePermGroup, basepoint: int) -> list[frozenset]:
    stab = [el for el in all_elements(group) if el[basepoint] == basepoint]
    cells = []
    seen = set()
    for x in range(group.degree):
        if x not in seen:
            cell = frozenset(el[x] for el in stab)
            seen |= cell
            cells.append(cell)
    return sorted(cells, key=lambda c: (len(c), min(c)))


def brute_paired(group: FinitePermGroup, basepoint: int, beta: int) -> frozenset:
    """{gamma : (gamma, basepoint) lies in the orbit of (basepoint, beta)}."""
    return frozenset(
        el[basepoint] for el in all_elements(group) if el[beta] == basepoint
    )


def set_partitions(n: int):
    """All set partitions of range(n) as lists of lists (restricted growth strings)."""
    if n == 0:
        yield []
        return
    rgs = [0] * n

    def rec(i, top):
        if i == n:
            blocks = [[] for _ in range(top + 1)]
            for x, b in enumerate(rgs):
                blocks[b].append(x)
            yield blocks
            return
        for b in range(top + 2):
            rgs[i] = b
            yield from rec(i + 1, max(top, b))

    rgs[0] = 0
    yield from rec(1, 0)


def brute_is_primitive(group: FinitePermGroup) -> bool:
    """No nontrivial proper partition is preserved by every generator."""
    n = group.degree
    gens = [g.images for g in group.generators]
    for blocks in set_partitions(n):
        if len(blocks) in (1, n):
            continue
        label = [0] * n
        for i, b in enumerate(blocks):
            for x in b:
                label[x] = i
        invariant = True
        for g in gens:
            for b in blocks:
                if len({label[g[x]] for x in b}) != 1:
                    invariant = False
                    break
            if not invariant:
                break
        if invariant:
            return False
    return True


def brute_orbital_arcs(group: FinitePermGroup, alpha: int, beta: int) -> set:
    return {(el[alpha], el[beta]) for el in all_elements(group)}


def distance_matrix(n: int, arcs) -> list[list[int]]:
    """Undirected all-pairs distances by repeated BFS; -1 marks unreachable."""
    adj = [set() for _ in range(n)]
    for u, w in arcs:
        adj[u].add(w)
        adj[w].add(u)
    out = []
    for s in range(n):
        dist = [-1] * n
        dist[s] = 0
        q = deque([s])
        while q:
            x = q.popleft()
            for y in adj[x]:
                if dist[y] < 0:
                    dist[y] = dist[x] + 1
                    q.append(y)
        out.append(dist)
    return out


def compositions(parts, total: int) -> list[tuple[int, ...]]:
    """Every ordered tuple of elements of ``parts`` summing to ``total``."""
    if total == 0:
        return [()]
    out = []
    for p in sorted(parts):
        if p <= total:
            out += [(p,) + rest for rest in compositions(parts, total - p)]
    return out



def explicit_tree_of_lobes(m: int, n: int, arcs, depth: int):
    """A finite piece of the connectivity-one digraph with ``m`` lobes per vertex.

    Copies of the lobe (points ``0..n-1``, attached at point 0) are glued on
    integer vertices until every vertex at lobe-depth ``< depth`` carries all
    ``m`` of its lobes. Returns the undirected adjacency as a list of sets and
    each vertex's address: the (fresh-lobe index, lobe point) pairs leading to it.
    """
    adj = [set()]
    address = [()]
    todo = deque([(0, m)])
    while todo:
        v, fresh = todo.popleft()
        if len(address[v]) >= depth:
            continue
        for j in range(fresh):
            ids = [v] + list(range(len(adj), len(adj) + n - 1))
            for p in range(1, n):
                adj.append(set())
                address.append(address[v] + ((j, p),))
            for a, b in arcs:
                adj[ids[a]].add(ids[b])
                adj[ids[b]].add(ids[a])
            todo.extend((w, m - 1) for w in ids[1:])
    return adj, address


def explicit_product(adj, m: int = 2):
    """Undirected adjacency of the m-fold product on vertex tuples."""
    import itertools

    verts = list(itertools.product(range(len(adj)), repeat=m))
    index = {v: i for i, v in enumerate(verts)}
    out = [set() for _ in verts]
    for v, i in index.items():
        for slot in range(m):
            for w in adj[v[slot]]:
                out[i].add(index[v[:slot] + (w,) + v[slot + 1 :]])
    return out, verts


def bfs_distances(adj, source: int, radius: int) -> dict:
    dist = {source: 0}
    q = deque([source])
    while q:
        x = q.popleft()
        if dist[x] == radius:
            continue
        for y in adj[x]:
            if y not in dist:
                dist[y] = dist[x] + 1
                q.append(y)
    return dist


def bfs_sphere_sizes(adj, source: int, radius: int) -> list[int]:
    dist = bfs_distances(adj, source, radius)
    sizes = [0] * (radius + 1)
    for d in dist.values():
        sizes[d] += 1
    while sizes and sizes[-1] == 0:
        sizes.pop()
    return sizes
