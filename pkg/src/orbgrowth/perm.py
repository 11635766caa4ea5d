"""Finite permutation groups small enough to handle point by point.

Groups are given by generators acting on the dense point set ``0..n-1``.
Everything here works by orbit closure and Schreier generators; there is no
base and strong generating set machinery, which is fine at the degrees used
as lobes and oracles.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

__all__ = [
    "PermError",
    "IntransitiveError",
    "SizeCapError",
    "Permutation",
    "FinitePermGroup",
    "BlockSystem",
    "FiniteOrbitalDigraph",
    "DEFAULT_SIZE_CAP",
    "orbit",
    "orbits",
    "is_transitive",
    "stabilizer_generators",
    "stabilizer_suborbits",
    "paired_suborbit",
    "is_self_paired",
    "minimal_block_system",
    "is_primitive",
    "product_action_wreath",
    "orbital_digraph",
    "parse_group",
    "load_group",
    "format_group",
]

DEFAULT_SIZE_CAP = 10**6


class PermError(ValueError):
    pass


class IntransitiveError(PermError):
    def __init__(self, message, second_orbit=None):
        super().__init__(message)
        self.second_orbit = second_orbit


class SizeCapError(PermError):
    pass


@dataclass(frozen=True)
class Permutation:
    """A bijection of ``0..degree-1``; ``images[i]`` is the image of ``i``.

    Permutations act on the right, so ``(p * q)(x) == q(p(x))``.
    """

    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(self.images)
        if sorted(images) != list(range(len(images))):
            raise PermError(f"not a permutation: {images!r}")
        object.__setattr__(self, "images", images)

    @classmethod
    def identity(cls, degree: int) -> Permutation:
        return cls(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, degree: int, cycles: Iterable[Sequence[int]]) -> Permutation:
        images = list(range(degree))
        seen = set()
        for cycle in cycles:
            for x in cycle:
                if not 0 <= x < degree:
                    raise PermError(f"point {x} out of range for degree {degree}")
                if x in seen:
                    raise PermError(f"point {x} appears in two cycles")
                seen.add(x)
            for a, b in zip(cycle, list(cycle[1:]) + list(cycle[:1])):
                images[a] = b
        return cls(tuple(images))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        return self.images[point]

    def __mul__(self, other: Permutation) -> Permutation:
        if self.degree != other.degree:
            raise PermError("degree mismatch")
        o = other.images
        return Permutation(tuple(o[x] for x in self.images))

    def inverse(self) -> Permutation:
        inv = [0] * self.degree
        for i, x in enumerate(self.images):
            inv[x] = i
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        seen = set()
        out = []
        for start in range(self.degree):
            if start in seen or self.images[start] == start:
                continue
            cycle = [start]
            seen.add(start)
            x = self.images[start]
            while x != start:
                cycle.append(x)
                seen.add(x)
                x = self.images[x]
            out.append(tuple(cycle))
        return out

    def __str__(self):
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)


@dataclass(frozen=True)
class FinitePermGroup:
    degree: int
    generators: tuple[Permutation, ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        gens = tuple(
            g if isinstance(g, Permutation) else Permutation(tuple(g)) for g in self.generators
        )
        if not gens:
            raise PermError("a group needs at least one generator (identity allowed)")
        for g in gens:
            if g.degree != self.degree:
                raise PermError(f"generator {g} has degree {g.degree}, expected {self.degree}")
        object.__setattr__(self, "generators", gens)

    @classmethod
    def from_cycles(cls, degree: int, *generators: Iterable[Sequence[int]], name: str = ""):
        return cls(degree, tuple(Permutation.from_cycles(degree, g) for g in generators), name)

    def _check_point(self, point: int):
        if not 0 <= point < self.degree:
            raise PermError(f"point {point} out of range for degree {self.degree}")


@dataclass(frozen=True)
class BlockSystem:
    blocks: tuple[frozenset, ...]

    @property
    def block_size(self) -> int:
        return len(self.blocks[0])

    def is_trivial(self) -> bool:
        return len(self.blocks) == 1 or self.block_size == 1


@dataclass(frozen=True)
class FiniteOrbitalDigraph:
    n: int
    arcs: frozenset
    alpha: int
    beta: int

    def out_neighbors(self, v: int) -> list[int]:
        return sorted(w for (u, w) in self.arcs if u == v)

    def in_neighbors(self, v: int) -> list[int]:
        return sorted(u for (u, w) in self.arcs if w == v)

    @property
    def out_valency(self) -> int:
        return sum(1 for (u, _) in self.arcs if u == self.alpha)

    @property
    def in_valency(self) -> int:
        return sum(1 for (_, w) in self.arcs if w == self.alpha)

    def adjacency(self) -> list[set]:
        """Undirected adjacency sets."""
        adj = [set() for _ in range(self.n)]
        for u, w in self.arcs:
            adj[u].add(w)
            adj[w].add(u)
        return adj


def _closure(gens: Sequence[Permutation], seeds: Iterable[int]) -> set:
    seen = set(seeds)
    stack = list(seen)
    imgs = [g.images for g in gens]
    while stack:
        x = stack.pop()
        for im in imgs:
            y = im[x]
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


def orbit(group: FinitePermGroup, point: int) -> set:
    group._check_point(point)
    return _closure(group.generators, [point])


def orbits(group: FinitePermGroup) -> list[frozenset]:
    return _orbits_of(group.generators, group.degree)


def _orbits_of(gens: Sequence[Permutation], degree: int) -> list[frozenset]:
    seen = set()
    out = []
    for x in range(degree):
        if x not in seen:
            o = _closure(gens, [x])
            seen |= o
            out.append(frozenset(o))
    return out


def is_transitive(group: FinitePermGroup) -> bool:
    return len(orbit(group, 0)) == group.degree


def _require_transitive(group: FinitePermGroup):
    o = orbit(group, 0)
    if len(o) != group.degree:
        rest = min(set(range(group.degree)) - o)
        second = sorted(_closure(group.generators, [rest]))
        raise IntransitiveError(
            f"group is not transitive; second orbit {second}", second_orbit=second
        )


def _transversal(group: FinitePermGroup, point: int) -> dict[int, Permutation]:
    """Map each orbit point x to some element u_x with point^{u_x} = x."""
    trans = {point: Permutation.identity(group.degree)}
    queue = [point]
    for x in queue:
        ux = trans[x]
        for g in group.generators:
            y = g(x)
            if y not in trans:
                trans[y] = ux * g
                queue.append(y)
    return trans


def stabilizer_generators(group: FinitePermGroup, point: int) -> list[Permutation]:
    """Schreier generators u_x g u_{x^g}^{-1} of the point stabilizer."""
    group._check_point(point)
    trans = _transversal(group, point)
    gens = set()
    for x, ux in trans.items():
        for g in group.generators:
            s = ux * g * trans[g(x)].inverse()
            if not s.is_identity():
                gens.add(s.images)
    if not gens:
        return [Permutation.identity(group.degree)]
    return [Permutation(im) for im in sorted(gens)]


def stabilizer_suborbits(group: FinitePermGroup, basepoint: int) -> list[frozenset]:
    """Orbits of the stabilizer of ``basepoint``, ordered by (size, least point)."""
    group._check_point(basepoint)
    _require_transitive(group)
    cells = _orbits_of(stabilizer_generators(group, basepoint), group.degree)
    return sorted(cells, key=lambda c: (len(c), min(c)))


def paired_suborbit(group: FinitePermGroup, basepoint: int, suborbit) -> frozenset:
    """The suborbit paired with ``suborbit``: all gamma with (gamma, basepoint) in the orbital."""
    cells = stabilizer_suborbits(group, basepoint)
    suborbit = frozenset(suborbit)
    if suborbit not in cells:
        raise PermError(f"{sorted(suborbit)} is not a suborbit at {basepoint}")
    beta = min(suborbit)
    # g maps basepoint to beta, so g^{-1} sends (basepoint, beta) to (gamma, basepoint)
    g = _transversal(group, basepoint)[beta]
    gamma = g.inverse()(basepoint)
    for c in cells:
        if gamma in c:
            return c
    raise AssertionError("suborbits do not cover the domain")


def is_self_paired(group: FinitePermGroup, basepoint: int, suborbit) -> bool:
    return paired_suborbit(group, basepoint, suborbit) == frozenset(suborbit)


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True


def minimal_block_system(group: FinitePermGroup, a: int, b: int) -> BlockSystem:
    """Finest block system in which ``a`` and ``b`` share a block (Atkinson's closure)."""
    n = group.degree
    uf = _UnionFind(n)
    uf.union(a, b)
    pending = [(a, b)]
    imgs = [g.images for g in group.generators]
    while pending:
        x, y = pending.pop()
        for im in imgs:
            if uf.union(im[x], im[y]):
                pending.append((im[x], im[y]))
    classes: dict[int, set] = {}
    for x in range(n):
        classes.setdefault(uf.find(x), set()).add(x)
    blocks = sorted((frozenset(c) for c in classes.values()), key=min)
    return BlockSystem(tuple(blocks))


def is_primitive(group: FinitePermGroup) -> tuple[bool, BlockSystem | None]:
    """Return ``(True, None)`` or ``(False, witness)`` for a transitive group."""
    _require_transitive(group)
    for b in range(1, group.degree):
        system = minimal_block_system(group, 0, b)
        if len(system.blocks) > 1:
            return False, system
    return True, None


def _encode_tuple(coords: Sequence[int], n: int) -> int:
    x = 0
    for c in coords:
        x = x * n + c
    return x


def _decode_tuple(x: int, n: int, m: int) -> tuple[int, ...]:
    out = [0] * m
    for i in range(m - 1, -1, -1):
        x, out[i] = divmod(x, n)
    return tuple(out)


def product_action_wreath(
    base: FinitePermGroup, m: int, size_cap: int = DEFAULT_SIZE_CAP
) -> FinitePermGroup:
    """``base`` Wr Sym(m) in product action on base.degree**m points.

    Tuples are encoded big-endian mixed radix, coordinate 0 most significant.
    """
    if m < 2:
        raise PermError("product action needs m >= 2")
    n = base.degree
    size = n**m
    if size > size_cap:
        raise SizeCapError(f"{n}^{m} = {size} points exceeds cap {size_cap}")
    points = [_decode_tuple(x, n, m) for x in range(size)]
    gens = []
    for g in base.generators:
        im = g.images
        gens.append(tuple(_encode_tuple((im[p[0]],) + p[1:], n) for p in points))
    # (0 1) and the m-cycle generate Sym(m)
    gens.append(tuple(_encode_tuple((p[1], p[0]) + p[2:], n) for p in points))
    if m > 2:
        gens.append(tuple(_encode_tuple(p[1:] + p[:1], n) for p in points))
    name = f"{base.name or 'G'} Wr Sym({m})"
    return FinitePermGroup(size, tuple(Permutation(g) for g in gens), name)


def orbital_digraph(group: FinitePermGroup, alpha: int, beta: int) -> FiniteOrbitalDigraph:
    group._check_point(alpha)
    group._check_point(beta)
    if alpha == beta:
        raise PermError("diagonal orbital has no digraph")
    imgs = [g.images for g in group.generators]
    seen = {(alpha, beta)}
    stack = [(alpha, beta)]
    while stack:
        x, y = stack.pop()
        for im in imgs:
            arc = (im[x], im[y])
            if arc not in seen:
                seen.add(arc)
                stack.append(arc)
    return FiniteOrbitalDigraph(group.degree, frozenset(seen), alpha, beta)


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_group(text: str, name: str = "") -> FinitePermGroup:
    """Parse the plain text group format.

    Line 1 is ``degree n``; each further line is one generator in cycle
    notation such as ``(0 1 2 3)(4 5)``; ``()`` is the identity and ``#``
    starts a comment.
    """
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if not lines:
        raise PermError("empty group description")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "degree" or not head[1].isdigit():
        raise PermError(f"expected 'degree n' header, got {lines[0]!r}")
    degree = int(head[1])
    gens = []
    for line in lines[1:]:
        if _CYCLE_RE.sub("", line).strip():
            raise PermError(f"malformed generator line {line!r}")
        cycles = []
        for body in _CYCLE_RE.findall(line):
            pts = body.replace(",", " ").split()
            cycles.append([int(p) for p in pts])
        gens.append(Permutation.from_cycles(degree, [c for c in cycles if c]))
    if not gens:
        gens.append(Permutation.identity(degree))
    return FinitePermGroup(degree, tuple(gens), name)


def load_group(path) -> FinitePermGroup:
    path = Path(path)
    return parse_group(path.read_text(), name=path.stem)


def format_group(group: FinitePermGroup) -> str:
    lines = [f"degree {group.degree}"]
    if group.name:
        lines.insert(0, f"# {group.name}")
    lines += [str(g) for g in group.generators]
    return "\n".join(lines) + "\n"
