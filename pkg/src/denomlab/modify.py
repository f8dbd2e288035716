"""Tag bookkeeping and the projections between tagged and plain arc systems.

The tag balance of a multiset at a puncture (plain ends minus notched
ends) drives a swap of that puncture's conjugate pair in the reference
triangulation; the set and multiset projections send notched companions to
their wrapping loops; and a projected multiset plus the balances recover
the original exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .arcs import (
    NOTCHED,
    PLAIN,
    DiskModel,
    PlainArc,
    TaggedArc,
    TaggedTriangulation,
    code_ends,
    tagged_arc,
    untag,
)
from .errors import (
    IncompatibleInput,
    InconsistentSignature,
    InternalConsistencyError,
    NotAdmissible,
    NotAPuncture,
    NotASet,
)


def _check_compatible(arcs: Sequence[TaggedArc], model: DiskModel) -> None:
    arcs = list(arcs)
    for i, a in enumerate(arcs):
        for b in arcs[i + 1:]:
            if not model.compatible(a, b):
                raise IncompatibleInput(f"{a} is incompatible with {b}")


def puncture_ends(arc: TaggedArc, model: DiskModel):
    """(puncture index, tag) for each end of the arc at a puncture."""
    out = []
    for k, mp in enumerate(code_ends(arc.code, model)):
        if mp[0] == "p":
            out.append((mp[1], arc.tags[k]))
    return out


def tag_balance(multiset: Sequence[TaggedArc], puncture: int,
                model: DiskModel) -> int:
    """Plain ends minus notched ends of the multiset at the puncture."""
    if not 0 <= puncture < model.p:
        raise NotAPuncture(f"no puncture {puncture} on this surface")
    total = 0
    for arc in multiset:
        for q, tag in puncture_ends(arc, model):
            if q == puncture:
                total += 1 if tag == PLAIN else -1
    return total


@dataclass(frozen=True)
class TagSignature:
    """Per-puncture tag data of a multiset: the tag sets and balances."""

    tags_present: tuple     # tuple of frozensets, indexed by puncture
    balance: tuple          # tuple of ints, indexed by puncture

    def to_dict(self) -> dict:
        return {
            "tags_present": [sorted(s) for s in self.tags_present],
            "balance": list(self.balance),
        }


def signature_of(multiset: Sequence[TaggedArc], model: DiskModel) -> TagSignature:
    tags = [set() for _ in range(model.p)]
    for arc in multiset:
        for q, tag in puncture_ends(arc, model):
            tags[q].add(tag)
    balance = tuple(tag_balance(multiset, q, model) for q in range(model.p))
    return TagSignature(tuple(frozenset(s) for s in tags), balance)


@dataclass(frozen=True)
class ModifiedTriangulation:
    """Reference triangulation with conjugate pairs swapped where the
    multiset leans notched, together with the relabeling bijection."""

    triangulation: TaggedTriangulation
    phi: dict


def modify_triangulation(reference: TaggedTriangulation,
                         multiset: Sequence[TaggedArc]) -> ModifiedTriangulation:
    model = reference.model
    if not reference.is_admissible():
        raise NotAdmissible("reference must be admissible")
    _check_compatible(multiset, model)
    pairs = reference.conjugate_pairs()
    phi = {a: a for a in reference.arcs}
    for q, (plain_member, notched_member) in pairs.items():
        if tag_balance(multiset, q, model) < 0:
            phi[plain_member] = notched_member
            phi[notched_member] = plain_member
    arcs = tuple(phi[a] for a in reference.arcs)
    out = TaggedTriangulation(model, arcs)
    if reference.is_strong_admissible() and not out.is_strong_admissible():
        raise InternalConsistencyError("swap broke strong admissibility")
    return ModifiedTriangulation(out, phi)


def circ_of_member(arc: TaggedArc, swap_to_loop: bool) -> PlainArc:
    """Plain companion of a reference arc: the wrapping loop for a notched
    pair member, the underlying curve otherwise."""
    if swap_to_loop:
        _, i, q, w = arc.code
        return PlainArc(("loop", i, q, w))
    return untag(arc)


def project_set_to_plain(arcs: Sequence[TaggedArc], model: DiskModel
                         ) -> frozenset:
    """The plain system of a compatible set of tagged arcs.

    Punctures seen only notched are retagged plain; at a puncture carrying
    both tags the notched partner becomes the loop wrapping its companion.
    """
    arcs = list(arcs)
    if len(set(arcs)) != len(arcs):
        raise NotASet("input has repeated arcs; use the multiset projection")
    _check_compatible(arcs, model)
    sig = signature_of(arcs, model)
    out = []
    for arc in arcs:
        ends = puncture_ends(arc, model)
        mixed_notched = [q for q, tag in ends
                         if tag == NOTCHED
                         and sig.tags_present[q] == frozenset({PLAIN, NOTCHED})]
        if mixed_notched:
            if len(mixed_notched) != 1 or arc.code[0] not in ("radius", "bridge"):
                raise InternalConsistencyError(
                    f"mixed-tag puncture with unexpected member {arc}")
            q = mixed_notched[0]
            pair = conjugate_partners(arc, q, model)
            if pair is None:
                raise InternalConsistencyError(
                    f"mixed tags at {q} without a conjugate pair: {arc}")
            out.append(PlainArc(wrapping_loop_code(pair[0], q, model)))
        else:
            out.append(untag(arc))
    result = frozenset(out)
    if len(result) != len(arcs):
        raise InternalConsistencyError("projection collapsed distinct arcs")
    for a in result:
        for b in result:
            if a < b and model.crossing_count(a.code, b.code) != 0:
                raise InternalConsistencyError("projection broke compatibility")
    return result


def conjugate_partners(arc: TaggedArc, puncture: int,
                       model: DiskModel) -> tuple[TaggedArc, TaggedArc] | None:
    """The conjugate pair at the puncture through this arc, if any.

    Members share the underlying curve and differ exactly in the tag at
    the puncture; exactly one member is 1-notched.  Radii pair at their
    puncture end; an arc joining the two punctures pairs at either end.
    """
    ends = code_ends(arc.code, model)
    for k, mp in enumerate(ends):
        if mp != ("p", puncture):
            continue
        other = list(arc.tags)
        other[k] = NOTCHED if arc.tags[k] == PLAIN else PLAIN
        try:
            partner = tagged_arc(arc.code, tuple(other))
        except ValueError:
            continue
        pair = (arc, partner) if arc.tags[k] == PLAIN else (partner, arc)
        notch_counts = sorted(m.tags.count(NOTCHED) for m in pair)
        if notch_counts.count(1) == 1:
            return pair
    return None


def wrapping_loop_code(pair_minus: TaggedArc, puncture: int,
                       model: DiskModel) -> tuple:
    """Plain loop enclosing the puncture, based at the pair's other end."""
    code = pair_minus.code
    if code[0] == "radius":
        _, i, q, w = code
        return ("loop", i, q, w)
    if code[0] == "bridge":
        return ("ploop", 1 - puncture, puncture)
    raise InternalConsistencyError(f"no wrapping loop for {code}")


def project_multiset_to_plain(multiset: Sequence[TaggedArc], model: DiskModel
                              ) -> tuple:
    """The plain multiset: conjugate pairs pair off into wrapping loops,
    leftover notched ends are retagged plain."""
    from collections import Counter
    arcs = list(multiset)
    _check_compatible(arcs, model)
    counter = Counter(arcs)
    out = []
    for q in range(model.p):
        for arc in sorted(counter):
            if counter[arc] <= 0:
                continue
            pair = conjugate_partners(arc, q, model)
            if pair is None:
                continue
            minus, bowtie = pair
            n_pairs = min(counter[minus], counter[bowtie])
            if n_pairs:
                counter[minus] -= n_pairs
                counter[bowtie] -= n_pairs
                out.extend([PlainArc(wrapping_loop_code(minus, q, model))]
                           * n_pairs)
    for arc in sorted(counter):
        out.extend([untag(arc)] * counter[arc])
    return tuple(sorted(out))


def recover_tagged_multiset(plain: Sequence[PlainArc], sig: TagSignature,
                            model: DiskModel) -> tuple:
    """Rebuild the tagged multiset from its plain projection and balances.

    Ends at punctures with negative balance become notched; every loop
    around a single puncture unfolds into the conjugate pair tagged plain
    at its base.  The recovered multiset must reproduce the given
    signature, otherwise the input was inconsistent.
    """
    for a in plain:
        for b in plain:
            if a < b and model.crossing_count(a.code, b.code) != 0:
                raise IncompatibleInput(f"{a} is incompatible with {b}")
    out = []
    for arc in plain:
        code = arc.code
        if code[0] == "loop":
            _, i, q, w = code
            out.append(tagged_arc(("radius", i, q, w), (PLAIN, PLAIN)))
            out.append(tagged_arc(("radius", i, q, w), (PLAIN, NOTCHED)))
            continue
        if code[0] == "ploop":
            _, qb, qe = code
            base_tag = NOTCHED if sig.balance[qb] < 0 else PLAIN
            for enclosed_tag in (PLAIN, NOTCHED):
                tags = [None, None]
                tags[qb] = base_tag
                tags[qe] = enclosed_tag
                out.append(tagged_arc(("bridge",), tuple(tags)))
            continue
        ends = code_ends(code, model)
        tags = []
        for k, mp in enumerate(ends):
            if mp[0] == "p" and sig.balance[mp[1]] < 0:
                tags.append(NOTCHED)
            else:
                tags.append(PLAIN)
        if code[0] in ("chord", "loop2"):
            out.append(tagged_arc(code, (PLAIN, PLAIN)))
        else:
            out.append(tagged_arc(code, tuple(tags)))
    result = tuple(sorted(out))
    got = signature_of(result, model)
    if got.balance != sig.balance:
        raise InconsistentSignature(
            f"recovered balances {got.balance} differ from {sig.balance}")
    _check_compatible(result, model)
    return result
