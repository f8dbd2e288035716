"""Bridge between the geometric and algebraic sides.

A tagged triangulation determines an exchange matrix through its plain
companion (signed adjacency with the folded side copying its enclosing
loop), hence an initial seed.  Lockstep exploration then flips arc systems
and mutates seeds along the same position sequences, growing a bijection
between tagged arcs and cluster variables that anchors every oracle check.
"""

from __future__ import annotations

from dataclasses import dataclass

from .arcs import (
    DiskModel,
    TaggedArc,
    TaggedTriangulation,
    geometric_flip,
    ideal_of_tagged,
    strong_admissible_triangulation,
)
from .engine import (
    Exploration,
    LaurentPolynomial,
    Matrix,
    Seed,
    explore,
    initial_seed,
    mutate,
    signed_adjacency,
)
from .errors import LockstepDivergence, NotAdmissible


def b_matrix_of(triangulation: TaggedTriangulation) -> Matrix:
    """Exchange matrix indexed by the triangulation's arcs.

    Sign convention: in each counterclockwise triangle of the plain
    companion, the side following another contributes +1.  The opposite
    global sign gives a mutation-equivalent engine and identical
    denominators, so nothing downstream depends on the choice.
    """
    if not triangulation.is_admissible():
        raise NotAdmissible("exchange matrices need an admissible triangulation")
    ideal, arc_map = ideal_of_tagged(triangulation)
    order = list(ideal.geometry)
    ids = {code: k for k, code in enumerate(order)}
    folded = ideal.folded_sides()
    triangles = []
    for tri in ideal.triangles:
        edges = [e for e, _ in tri]
        if any(edges.count(e) == 2 for e in set(edges)):
            continue
        triangles.append(edges)
    b_ideal = signed_adjacency(triangles, list(range(len(order))), folded)
    n = len(order)
    perm = [ids[arc_map[a]] for a in triangulation.arcs]
    return tuple(tuple(b_ideal[perm[i]][perm[j]] for j in range(n))
                 for i in range(n))


@dataclass
class LockstepResult:
    reference: TaggedTriangulation
    seed: Seed
    cluster_count: int
    arc_variable: dict      # TaggedArc -> canonical polynomial key
    variables: dict         # key -> LaurentPolynomial


def lockstep_explore(model: DiskModel,
                     reference: TaggedTriangulation | None = None
                     ) -> LockstepResult:
    """Breadth-first closure flipping arcs and mutating seeds in lockstep.

    Raises :class:`LockstepDivergence` if the same arc ever pairs with two
    different variables, or if an already-visited cluster reappears with a
    different seed.
    """
    if reference is None:
        reference = strong_admissible_triangulation(model)
    seed0 = initial_seed(b_matrix_of(reference))
    n = seed0.rank
    arc_variable: dict[TaggedArc, object] = {}
    variables: dict[object, LaurentPolynomial] = {}
    for arc, x in zip(reference.arcs, seed0.cluster):
        arc_variable[arc] = x.key()
        variables[x.key()] = x
    start = tuple(reference.arcs)
    seen: dict[tuple, object] = {tuple(sorted(start)): seed0.cluster_key()}
    frontier = [(start, seed0)]
    while frontier:
        next_frontier = []
        for cluster, seed in frontier:
            for k in range(n):
                new_cluster = geometric_flip(cluster, k, model)
                new_seed = mutate(seed, k)
                arc, var = new_cluster[k], new_seed.cluster[k]
                key = var.key()
                if arc in arc_variable:
                    if arc_variable[arc] != key:
                        raise LockstepDivergence(
                            f"arc {arc} paired with two variables")
                else:
                    arc_variable[arc] = key
                    variables[key] = var
                ckey = tuple(sorted(new_cluster))
                skey = new_seed.cluster_key()
                if ckey in seen:
                    if seen[ckey] != skey:
                        raise LockstepDivergence(
                            "cluster revisited with a different seed")
                    continue
                seen[ckey] = skey
                next_frontier.append((new_cluster, new_seed))
        frontier = next_frontier
    return LockstepResult(reference, seed0, len(seen), arc_variable, variables)


def algebraic_exploration(reference: TaggedTriangulation,
                          cap: int = 10 ** 6) -> Exploration:
    return explore(initial_seed(b_matrix_of(reference)), cap=cap)
