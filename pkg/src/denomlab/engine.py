"""Exact cluster-algebra engine.

Laurent polynomials are dictionaries mapping integer exponent vectors to
non-zero integer coefficients; arithmetic is exact and the canonical form
(sorted term list) is unique per value, so structural equality is value
equality.  Seeds mutate by the standard exchange relation with exact
division; a non-exact division means the seed is corrupt and aborts the
run rather than producing garbage.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import CapExceeded, NonExactDivision, ZeroPolynomial

Exponent = tuple[int, ...]

FULL_EXPLORATION_CAP = 10 ** 6
_DIVISION_STEP_CAP = 10 ** 6


class LaurentPolynomial:
    """Multivariate Laurent polynomial with exact integer coefficients."""

    __slots__ = ("nvars", "terms", "_key")

    def __init__(self, nvars: int, terms: Mapping[Exponent, int]):
        self.nvars = nvars
        self.terms = {e: c for e, c in terms.items() if c != 0}
        self._key = None

    # -- constructors --------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "LaurentPolynomial":
        return cls(nvars, {})

    @classmethod
    def constant(cls, nvars: int, c: int) -> "LaurentPolynomial":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def generator(cls, nvars: int, i: int, power: int = 1) -> "LaurentPolynomial":
        e = [0] * nvars
        e[i] = power
        return cls(nvars, {tuple(e): 1})

    @classmethod
    def monomial(cls, nvars: int, exps: Sequence[int], coeff: int = 1) -> "LaurentPolynomial":
        return cls(nvars, {tuple(exps): coeff})

    # -- canonical form -------------------------------------------------

    def key(self):
        """Hashable canonical form: lexicographically sorted term list."""
        if self._key is None:
            self._key = tuple(sorted(self.terms.items()))
        return self._key

    def __eq__(self, other) -> bool:
        return isinstance(other, LaurentPolynomial) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def is_zero(self) -> bool:
        return not self.terms

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other: "LaurentPolynomial") -> "LaurentPolynomial":
        out = dict(self.terms)
        for e, c in other.terms.items():
            n = out.get(e, 0) + c
            if n:
                out[e] = n
            else:
                out.pop(e, None)
        return LaurentPolynomial(self.nvars, out)

    def __neg__(self) -> "LaurentPolynomial":
        return LaurentPolynomial(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "LaurentPolynomial") -> "LaurentPolynomial":
        return self + (-other)

    def __mul__(self, other: "LaurentPolynomial") -> "LaurentPolynomial":
        out: dict[Exponent, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                n = out.get(e, 0) + c1 * c2
                if n:
                    out[e] = n
                else:
                    del out[e]
        return LaurentPolynomial(self.nvars, out)

    def exact_div(self, divisor: "LaurentPolynomial") -> "LaurentPolynomial":
        """Exact division; raises :class:`NonExactDivision` on remainder."""
        if divisor.is_zero():
            raise ZeroPolynomial("division by zero polynomial")
        if self.is_zero():
            return LaurentPolynomial.zero(self.nvars)
        lead_d = max(divisor.terms)
        cd = divisor.terms[lead_d]
        rem = dict(self.terms)
        quo: dict[Exponent, int] = {}
        steps = 0
        while rem:
            steps += 1
            if steps > _DIVISION_STEP_CAP:
                raise NonExactDivision("division did not terminate")
            lead_r = max(rem)
            cr = rem[lead_r]
            if cr % cd != 0:
                raise NonExactDivision("leading coefficient does not divide")
            q_exp = tuple(a - b for a, b in zip(lead_r, lead_d))
            q_coeff = cr // cd
            quo[q_exp] = quo.get(q_exp, 0) + q_coeff
            for e, c in divisor.terms.items():
                t = tuple(a + b for a, b in zip(q_exp, e))
                n = rem.get(t, 0) - q_coeff * c
                if n:
                    rem[t] = n
                else:
                    rem.pop(t, None)
        return LaurentPolynomial(self.nvars, quo)

    # -- inspection -------------------------------------------------------

    def has_positive_coefficients(self) -> bool:
        return all(c > 0 for c in self.terms.values())

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items()):
            factors = [f"x{i}^{p}" if p != 1 else f"x{i}"
                       for i, p in enumerate(e) if p != 0]
            if not factors or abs(c) != 1:
                factors.insert(0, str(abs(c)))
            term = "*".join(factors)
            parts.append("-" + term if c < 0 else term)
        return " + ".join(parts)

    __repr__ = __str__


def denominator_vector(p: LaurentPolynomial) -> tuple[int, ...]:
    """Exponents of the monomial denominator in lowest terms.

    Entry i is the unique d_i with p = f / prod x_i^{d_i} and f a genuine
    polynomial not divisible by any variable.
    """
    if p.is_zero():
        raise ZeroPolynomial("zero polynomial has no denominator vector")
    mins = [min(e[i] for e in p.terms) for i in range(p.nvars)]
    return tuple(-m for m in mins)


# -- exchange matrices ------------------------------------------------------

Matrix = tuple[tuple[int, ...], ...]


def check_skew_symmetric(B: Matrix) -> None:
    n = len(B)
    for row in B:
        if len(row) != n:
            raise ValueError("matrix is not square")
    for i in range(n):
        for j in range(n):
            if B[i][j] != -B[j][i]:
                raise ValueError("matrix is not skew-symmetric")


def mutate_matrix(B: Matrix, k: int) -> Matrix:
    n = len(B)
    out = [list(row) for row in B]
    for i in range(n):
        for j in range(n):
            if i == k or j == k:
                out[i][j] = -B[i][j]
            else:
                out[i][j] = B[i][j] + (abs(B[i][k]) * B[k][j] + B[i][k] * abs(B[k][j])) // 2
    return tuple(tuple(row) for row in out)


def signed_adjacency(triangles: Iterable[Sequence[object]],
                     arc_order: Sequence[object],
                     folded_to_remaining: Mapping[object, object]) -> Matrix:
    """Exchange matrix of an ideal triangulation.

    ``triangles`` lists each triangle as its cyclically ordered (ccw) side
    labels; non-arc sides (boundary segments) may appear and are ignored.
    Self-folded triangles must be omitted by the caller; instead the folded
    side inherits the rows and columns of its remaining side through
    ``folded_to_remaining``.  Sign convention: the side following another in
    ccw order contributes +1.
    """
    index = {a: i for i, a in enumerate(arc_order)}
    n = len(arc_order)
    B = [[0] * n for _ in range(n)]

    def rep(side):
        return folded_to_remaining.get(side, side)

    for tri in triangles:
        sides = list(tri)
        for s in range(len(sides)):
            e, f = rep(sides[s]), rep(sides[(s + 1) % len(sides)])
            if e in index and f in index and e != f:
                B[index[e]][index[f]] += 1
                B[index[f]][index[e]] -= 1
    # Folded sides copy their remaining side and stay disconnected from it.
    for folded, remaining in folded_to_remaining.items():
        if folded not in index or remaining not in index:
            continue
        fi, ri = index[folded], index[remaining]
        for j in range(n):
            B[fi][j] = B[ri][j]
            B[j][fi] = B[j][ri]
        B[fi][ri] = B[ri][fi] = B[fi][fi] = 0
    out = tuple(tuple(row) for row in B)
    check_skew_symmetric(out)
    return out


# -- seeds -------------------------------------------------------------------


@dataclass(frozen=True)
class Seed:
    matrix: Matrix
    cluster: tuple[LaurentPolynomial, ...]

    @property
    def rank(self) -> int:
        return len(self.matrix)

    def cluster_key(self):
        return frozenset(x.key() for x in self.cluster)


def initial_seed(B: Matrix) -> Seed:
    check_skew_symmetric(B)
    n = len(B)
    gens = tuple(LaurentPolynomial.generator(n, i) for i in range(n))
    return Seed(B, gens)


def mutate(seed: Seed, k: int) -> Seed:
    """Seed mutation at index k with exact Laurent division."""
    n = seed.rank
    if not 0 <= k < n:
        raise IndexError(f"mutation index {k} out of range 0..{n - 1}")
    B = seed.matrix
    pos = LaurentPolynomial.constant(n, 1)
    neg = LaurentPolynomial.constant(n, 1)
    for i in range(n):
        b = B[i][k]
        if b > 0:
            pos = pos * _power(seed.cluster[i], b)
        elif b < 0:
            neg = neg * _power(seed.cluster[i], -b)
    new_var = (pos + neg).exact_div(seed.cluster[k])
    cluster = list(seed.cluster)
    cluster[k] = new_var
    return Seed(mutate_matrix(B, k), tuple(cluster))


def _power(p: LaurentPolynomial, e: int) -> LaurentPolynomial:
    out = LaurentPolynomial.constant(p.nvars, 1)
    base = p
    while e:
        if e & 1:
            out = out * base
        base = base * base
        e >>= 1
    return out


# -- exploration ---------------------------------------------------------------


@dataclass
class Exploration:
    """Result of a breadth-first walk of the exchange graph."""

    initial: Seed
    clusters: dict          # cluster key -> Seed (first representative found)
    variables: dict         # poly key -> LaurentPolynomial
    edges: set              # frozenset of two cluster keys
    depth_bounded: bool
    depth: int | None
    truncated: bool = False

    @property
    def cluster_count(self) -> int:
        return len(self.clusters)

    @property
    def variable_count(self) -> int:
        return len(self.variables)


def explore(seed: Seed, depth: int | None = None,
            cap: int = FULL_EXPLORATION_CAP) -> Exploration:
    """Breadth-first closure of a seed under mutation.

    ``depth=None`` demands full closure and raises :class:`CapExceeded`
    past ``cap`` clusters; a finite depth walks that many mutation layers
    and never raises.  Every variable met on the way is checked to be a
    Laurent polynomial with positive coefficients.
    """
    result = Exploration(
        initial=seed, clusters={}, variables={}, edges=set(),
        depth_bounded=depth is not None, depth=depth,
    )
    start_key = seed.cluster_key()
    result.clusters[start_key] = seed
    for x in seed.cluster:
        _register_variable(result, x)
    frontier = [(seed, start_key)]
    level = 0
    while frontier:
        if depth is not None and level >= depth:
            result.truncated = True
            break
        level += 1
        next_frontier = []
        for current, current_key in frontier:
            for k in range(current.rank):
                neighbor = mutate(current, k)
                nkey = neighbor.cluster_key()
                result.edges.add(frozenset((current_key, nkey)))
                if nkey in result.clusters:
                    continue
                if depth is None and len(result.clusters) >= cap:
                    raise CapExceeded(
                        f"full exploration exceeded {cap} clusters")
                result.clusters[nkey] = neighbor
                _register_variable(result, neighbor.cluster[k])
                next_frontier.append((neighbor, nkey))
        frontier = next_frontier
    return result


def _register_variable(result: Exploration, x: LaurentPolynomial) -> None:
    if not x.has_positive_coefficients():
        raise NonExactDivision(
            f"cluster variable with non-positive coefficients: {x}")
    result.variables.setdefault(x.key(), x)


# -- cluster monomials ----------------------------------------------------------


@dataclass(frozen=True)
class ClusterMonomial:
    """Product of variables from one cluster, with its denominator vector."""

    variable_ids: tuple[tuple[int, int], ...]   # sorted (variable id, exponent)
    denominator: tuple[int, ...]
    cluster_key: object
    exponents: tuple[int, ...]

    @property
    def degree(self) -> int:
        return sum(e for _, e in self.variable_ids)


def enumerate_monomials(exploration: Exploration, max_degree: int) -> list[ClusterMonomial]:
    """All cluster monomials of total degree <= max_degree, deduplicated.

    Two exponent vectors on different clusters that name the same multiset
    of variables are the same monomial and are reported once.
    """
    if max_degree < 0:
        raise ValueError("max_degree must be >= 0")
    var_ids = {key: i for i, key in enumerate(sorted(exploration.variables))}
    den = {key: denominator_vector(p) for key, p in exploration.variables.items()}
    seen: dict[tuple, ClusterMonomial] = {}
    n = exploration.initial.rank
    for ckey in sorted(exploration.clusters, key=_cluster_sort_key):
        seed = exploration.clusters[ckey]
        keys = [x.key() for x in seed.cluster]
        for exps in _bounded_exponents(n, max_degree):
            ids = tuple(sorted((var_ids[keys[i]], e)
                               for i, e in enumerate(exps) if e))
            if ids in seen:
                continue
            d = tuple(sum(e * den[keys[i]][j] for i, e in enumerate(exps))
                      for j in range(n))
            seen[ids] = ClusterMonomial(ids, d, ckey, exps)
    return list(seen.values())


def _cluster_sort_key(ckey) -> tuple:
    return tuple(sorted(ckey))


def _bounded_exponents(n: int, budget: int):
    """All exponent vectors of length n with component sum <= budget."""
    if n == 0:
        yield ()
        return
    for head in range(budget + 1):
        for tail in _bounded_exponents(n - 1, budget - head):
            yield (head,) + tail


def exploration_dump(exploration: Exploration) -> dict:
    """Serializable snapshot: clusters, variables with denominators, edges.

    Everything is sorted canonically, so dumps are diff-stable across runs
    regardless of exploration order.
    """
    var_ids = {key: i for i, key in enumerate(sorted(exploration.variables))}
    variables = []
    for key in sorted(exploration.variables):
        p = exploration.variables[key]
        variables.append({
            "id": var_ids[key],
            "denominator": list(denominator_vector(p)),
            "laurent": str(p),
        })
    clusters = sorted(
        sorted(var_ids[x.key()] for x in seed.cluster)
        for seed in exploration.clusters.values())
    cluster_index = {tuple(c): i for i, c in enumerate(clusters)}
    edges = set()
    key_to_cluster = {
        frozenset(k for k in ckey): tuple(sorted(
            var_ids[x.key()] for x in seed.cluster))
        for ckey, seed in exploration.clusters.items()}
    for edge in exploration.edges:
        a, b = tuple(edge)
        if a in key_to_cluster and b in key_to_cluster:
            edges.add(tuple(sorted((cluster_index[key_to_cluster[a]],
                                    cluster_index[key_to_cluster[b]]))))
    return {
        "clusters": clusters,
        "variables": variables,
        "edges": sorted(edges),
        "truncated": exploration.truncated,
    }


def catalan(n: int) -> int:
    """Independent count oracle for polygon triangulations."""
    from math import comb
    return comb(2 * n, n) // (n + 1)


def annulus_matrix(marked_out: int, marked_in: int) -> Matrix:
    """Exchange matrix of an annulus with the given marked-point counts.

    A cycle of length a+b with a edges oriented one way and b the other
    (acyclic overall, infinite mutation type); the rank matches the arc
    count of the annulus, e.g. (3, 1) gives the rank-4 seed used in the
    bounded-evidence scenario.
    """
    a, b = marked_out, marked_in
    n = a + b
    if min(a, b) < 1 or n < 3:
        raise ValueError("annulus needs at least one marked point per boundary")
    B = [[0] * n for _ in range(n)]
    for i in range(n):
        j = (i + 1) % n
        if i < a:
            B[i][j] += 1
            B[j][i] -= 1
        else:
            B[i][j] -= 1
            B[j][i] += 1
    return tuple(tuple(row) for row in B)
