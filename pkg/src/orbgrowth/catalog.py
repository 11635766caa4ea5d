"""Small named permutation groups used as lobes and as test fixtures."""

from __future__ import annotations

from itertools import combinations

from .perm import FinitePermGroup, Permutation, product_action_wreath


def cyclic(n: int) -> FinitePermGroup:
    return FinitePermGroup.from_cycles(n, [tuple(range(n))], name=f"C{n}")


def dihedral(n: int) -> FinitePermGroup:
    """Symmetries of the n-gon; for n = 4 this is <(0 1 2 3), (1 3)>."""
    reflection = [(i, n - i) for i in range(1, (n + 1) // 2)]
    return FinitePermGroup.from_cycles(n, [tuple(range(n))], reflection, name=f"D{2 * n}")


def symmetric(n: int) -> FinitePermGroup:
    if n < 2:
        return FinitePermGroup(n, (Permutation.identity(n),), name=f"Sym({n})")
    return FinitePermGroup.from_cycles(n, [tuple(range(n))], [(0, 1)], name=f"Sym({n})")


def alternating(n: int) -> FinitePermGroup:
    # 3-cycles (0 1 k) generate Alt(n)
    gens = [[(0, 1, k)] for k in range(2, n)]
    return FinitePermGroup.from_cycles(n, *gens, name=f"Alt({n})")


def frobenius21() -> FinitePermGroup:
    """<x -> x+1, x -> 2x> on Z/7; the two 3-point suborbits are paired."""
    mult = Permutation(tuple(2 * x % 7 for x in range(7)))
    return FinitePermGroup(7, (Permutation.from_cycles(7, [tuple(range(7))]), mult), name="F21")


def petersen_vertices() -> list[frozenset]:
    """Petersen graph vertices as 2-subsets of {0..4}, in index order."""
    return [frozenset(p) for p in combinations(range(5), 2)]


def petersen_group() -> FinitePermGroup:
    """Sym(5) acting on the ten 2-subsets; this is the full automorphism group."""
    verts = petersen_vertices()
    index = {v: i for i, v in enumerate(verts)}

    def induced(images):
        return Permutation(tuple(index[frozenset(images[x] for x in v)] for v in verts))

    return FinitePermGroup(
        10, (induced((1, 2, 3, 4, 0)), induced((1, 0, 2, 3, 4))), name="Petersen"
    )


def petersen_arcs() -> list[tuple[int, int]]:
    verts = petersen_vertices()
    return [
        (i, j) for i, u in enumerate(verts) for j, w in enumerate(verts) if i != j and not (u & w)
    ]


def transitive_catalog() -> dict[str, FinitePermGroup]:
    """Transitive groups shipped for oracle runs (all of degree <= 60)."""
    groups = [
        cyclic(4),
        cyclic(5),
        cyclic(6),
        dihedral(4),
        dihedral(5),
        dihedral(6),
        symmetric(3),
        symmetric(4),
        symmetric(5),
        alternating(5),
        frobenius21(),
        petersen_group(),
        product_action_wreath(symmetric(3), 2),
        product_action_wreath(dihedral(5), 2),
        product_action_wreath(frobenius21(), 2),
    ]
    return {g.name: g for g in groups}
