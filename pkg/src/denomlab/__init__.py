"""Exact combinatorial verification of denominator vectors for surface
cluster algebras: tagged arcs on punctured disks, their intersection
calculus, an exact Laurent mutation engine, and scenario runners checking
that cluster monomials are determined by their denominator vectors."""

from .arcs import (
    NOTCHED,
    PLAIN,
    DiskModel,
    PlainArc,
    TaggedArc,
    TaggedTriangulation,
    compatible,
    conjugate_pair_of,
    enumerate_arcs,
    geometric_clusters,
    geometric_flip,
    ideal_of_tagged,
    strong_admissible_triangulation,
    tagged_arc,
    untag,
    wrapping_loop,
)
from .engine import (
    ClusterMonomial,
    Exploration,
    LaurentPolynomial,
    Seed,
    annulus_matrix,
    catalan,
    denominator_vector,
    enumerate_monomials,
    explore,
    initial_seed,
    mutate,
    mutate_matrix,
    signed_adjacency,
)
from .intersect import (
    SegmentDecomposition,
    arc_segments,
    coincidence_term,
    crossing_count,
    intersection_vector,
    loop_adjustment,
    multiset_intersection_vector,
    plain_intersection,
    segment_counts,
    tag_mismatch,
    tagged_intersection,
)
from .modify import (
    ModifiedTriangulation,
    TagSignature,
    conjugate_partners,
    modify_triangulation,
    project_multiset_to_plain,
    project_set_to_plain,
    recover_tagged_multiset,
    signature_of,
    tag_balance,
)
from .oracle import LockstepResult, b_matrix_of, lockstep_explore
from .surfaces import (
    IdealTriangulation,
    MarkedSurface,
    admissible_triangulation,
    flip_ideal,
    make_strong_admissible,
    replay_type_ii_counts,
    validate_surface,
)
from .verify import (
    run_build_strong,
    run_injectivity,
    run_lemma_suite,
    run_negative_control,
    run_oracle,
    run_segments,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
