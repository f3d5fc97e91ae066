"""The constructive pipeline: paste a structure into the edges of a
high-girth hypergraph, stack pasted levels into a witness chain, and pull
sunflower certificates out of presentations of the top level.

The extraction walks the chain downwards.  At level k it reads the k-sets
of a presentation, derives one colouring per function assigning a
coordinate to each part, and looks for either a monochromatic copy of the
previous level inside a single part (then all its sets share one ground
element, which joins the centre and the recursion continues on the
stripped (k-1)-sets) or a transversal copy whose sets are pairwise
disjoint (then any copy of the target inside it is an empty-centre
sunflower).  When both searches fail the instance's dichotomy property is
refuted by this very presentation; a brute-force sweep still tries to
rescue a certificate, so a reported failure is a genuine counterexample
presentation with no sunflower copy at all.
"""

from __future__ import annotations

import itertools
import random
from typing import Optional

from .ksets import (
    Presentation,
    SunflowerCert,
    find_sunflower_copies,
    verify_sunflower_cert,
)
from .ramsey import find_short_cycle, gen_witness_hypergraph, PartitionedHypergraph
from .structures import (
    ClassSpec,
    Embedding,
    Structure,
    _iter_embedding_maps,
    are_isomorphic,
    find_embeddings,
    qf_type,
    satisfies_class,
)


class PastingError(ValueError):
    """Preconditions of the pasting construction are violated."""


class InternalConsistencyError(RuntimeError):
    """The pasted structure left its class; the construction forbids this,
    so reaching it signals a bug rather than bad input."""


class NonTransitiveClass(ValueError):
    """The chain construction needs a class with a single vertex type."""


class ExtractionFailed(RuntimeError):
    """Both extraction cases failed and brute force found no sunflower copy:
    the presentation is a counterexample to this instance's witness
    property."""

    def __init__(self, presentation: Presentation, level: int, message: str):
        super().__init__(message)
        self.presentation = presentation
        self.level = level


class PastedStructure:
    __slots__ = ("structure", "parts")

    def __init__(self, structure: Structure, parts):
        self.structure = structure
        self.parts = tuple(tuple(p) for p in parts)


class WitnessLevel:
    """One chain level: the structure, its part assignment (indexed by the
    vertices of the previous level) and the colouring count it absorbs."""

    __slots__ = ("structure", "parts", "colourings", "hypergraph_meta")

    def __init__(self, structure: Structure, parts=None,
                 colourings: Optional[int] = None, hypergraph_meta=None):
        self.structure = structure
        self.parts = None if parts is None else tuple(tuple(p) for p in parts)
        self.colourings = colourings
        self.hypergraph_meta = dict(hypergraph_meta or {})


class WitnessChain:
    __slots__ = ("klass", "levels", "seed")

    def __init__(self, klass: ClassSpec, levels, seed: Optional[int] = None):
        self.klass = klass
        self.levels = tuple(levels)
        self.seed = seed

    @property
    def target(self) -> Structure:
        return self.levels[0].structure

    @property
    def k(self) -> int:
        return len(self.levels)

    def top(self) -> Structure:
        return self.levels[-1].structure

    def __repr__(self):
        sizes = [lvl.structure.size for lvl in self.levels]
        return f"WitnessChain(k={self.k}, sizes={sizes})"


class TraceStep:
    __slots__ = ("level", "case", "part", "f", "shared", "copy")

    def __init__(self, level, case, part=None, f=None, shared=None, copy=()):
        self.level = level
        self.case = case
        self.part = part
        self.f = None if f is None else tuple(f)
        self.shared = shared
        self.copy = tuple(copy)

    def __repr__(self):
        return f"TraceStep(level={self.level}, case={self.case!r})"


class ExtractionTrace:
    __slots__ = ("steps",)

    def __init__(self, steps):
        self.steps = tuple(steps)


# ---------------------------------------------------------------------------
# Pasting


def paste(H: PartitionedHypergraph, B: Structure, K: ClassSpec) -> PastedStructure:
    """Replace every edge of H by a copy of B (edge vertices in ascending
    order carry B's vertices in index order) and nothing else.

    Needs girth >= 4, |B| = uniformity, and a single vertex type in B over
    the empty set, which is what makes overlapping copies agree.  The
    result is checked against the class: a failure here cannot come from
    the inputs and is raised as an internal inconsistency.
    """
    if B.signature != K.signature:
        raise PastingError("target and class signatures differ")
    if H.n != B.size:
        raise PastingError("hypergraph uniformity must equal the target size")
    if B.size >= 1:
        types = {qf_type(B, v, ()).positives for v in B.vertices}
        if len(types) > 1:
            raise PastingError("all target vertices must share one empty-base type")
    if find_short_cycle(H, 4) is not None:
        raise PastingError("hypergraph girth must be at least 4")
    if not satisfies_class(B, K):
        raise PastingError("target is not in the class")

    verts = H.vertices
    pos = {v: i for i, v in enumerate(verts)}
    rels = {name: set() for name in B.signature.names}
    for e in sorted(H.edges, key=sorted):
        evs = sorted(pos[v] for v in e)
        for name in B.signature.names:
            for t in B.relations[name]:
                rels[name].add(tuple(evs[x] for x in t))
    out = Structure(B.signature, len(verts), rels)
    if not satisfies_class(out, K):
        raise InternalConsistencyError("pasted structure left the class")
    parts = tuple(tuple(pos[v] for v in p) for p in H.parts)
    return PastedStructure(out, parts)


# ---------------------------------------------------------------------------
# Chain construction


def admitted_point_structures(K: ClassSpec) -> list[Structure]:
    """All one-vertex structures the class admits (loop atoms on or off)."""
    loops = [(name, tuple([0] * arity)) for name, arity in K.signature.relations]
    out = []
    for r in range(len(loops) + 1):
        for chosen in itertools.combinations(loops, r):
            rels = {}
            for name, t in chosen:
                rels.setdefault(name, set()).add(t)
            S = Structure(K.signature, 1, rels)
            if satisfies_class(S, K):
                out.append(S)
    return out


def class_is_transitive(K: ClassSpec) -> bool:
    """A forbidden-substructure class has one vertex type iff it admits
    exactly one one-vertex structure."""
    return len(admitted_point_structures(K)) == 1


def build_witness_chain(K: ClassSpec, B: Structure, k: int, seed: int,
                        c_override: Optional[int] = None,
                        c_cap: int = 32) -> WitnessChain:
    """Stack k levels: level 1 is the target itself (distinct 1-sets are
    pairwise disjoint, so any copy is a sunflower), and level j pastes
    level j-1 into a girth-4 hypergraph sized for j^(size of level j-1)
    colourings."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if B.size < 1:
        raise ValueError("target must have at least one vertex")
    if not satisfies_class(B, K):
        raise ValueError("target is not in the class")
    if not class_is_transitive(K):
        raise NonTransitiveClass("witness chains require a transitive class")
    levels = [WitnessLevel(B)]
    seed_rng = random.Random(f"chain|{seed}")
    for j in range(2, k + 1):
        prev = levels[-1].structure
        s_j = j ** prev.size
        level_seed = seed_rng.getrandbits(63)
        H = gen_witness_hypergraph(prev.size, s_j, 4, level_seed,
                                   c_override=c_override, c_cap=c_cap)
        pasted = paste(H, prev, K)
        levels.append(WitnessLevel(pasted.structure, pasted.parts, s_j, H.meta))
    return WitnessChain(K, levels, seed)


# ---------------------------------------------------------------------------
# Extraction


def _find_part_mono_copy(P: Presentation, D: Structure, part_vertices,
                         colour) -> Optional[tuple[int, ...]]:
    pool = sorted(part_vertices)

    def flt(depth, v, partial):
        return depth == 0 or colour(v) == colour(partial[0])

    for vmap in _iter_embedding_maps(D, P.base, candidate_filter=flt,
                                     candidates=[pool] * D.size):
        return vmap
    return None


def _find_disjoint_transversal_copy(P: Presentation, D: Structure,
                                    part_of) -> Optional[tuple[int, ...]]:
    sets = P.sets

    def flt(depth, v, partial):
        if any(part_of[v] == part_of[u] for u in partial):
            return False
        return all(sets[v].isdisjoint(sets[u]) for u in partial)

    for vmap in _iter_embedding_maps(D, P.base, candidate_filter=flt):
        return vmap
    return None


def extract_sunflower(chain: WitnessChain, P: Presentation,
                      level: Optional[int] = None,
                      ) -> tuple[SunflowerCert, ExtractionTrace]:
    """Extract a sunflower copy of the chain's target from a presentation of
    the chain's level-`level` structure on level-sets.

    Search order is deterministic: parts ascending, coordinate choices in
    lexicographic order, embeddings in canonical order; the first hit wins.
    Raises ExtractionFailed only after a brute-force sweep confirms the
    presentation contains no sunflower copy at all.
    """
    if level is None:
        level = chain.k
    if not 1 <= level <= chain.k:
        raise ValueError("level out of range")
    if P.k != level:
        raise ValueError(f"presentation must use {level}-sets at level {level}")
    C = chain.levels[level - 1].structure
    if P.base == C:
        iso = Embedding(C, P.base, range(C.size), validate=False)
    else:
        iso = are_isomorphic(C, P.base)
        if iso is None:
            raise ValueError("presentation base is not isomorphic to the level")

    B = chain.target
    steps: list[TraceStep] = []
    cert = _extract(chain, P, level, iso, steps)
    if cert is not None:
        return cert, ExtractionTrace(steps)
    rescue = find_sunflower_copies(P, B, limit=1)
    if rescue:
        steps.append(TraceStep(level, "fallback", copy=rescue[0].petals))
        return rescue[0], ExtractionTrace(steps)
    raise ExtractionFailed(P, level,
                           "no extraction case applies and no sunflower copy "
                           "exists: the presentation refutes this instance's "
                           "witness property")


def _extract(chain: WitnessChain, P: Presentation, level: int,
             iso: Embedding, steps: list) -> Optional[SunflowerCert]:
    B = chain.target
    if level == 1:
        embs = find_embeddings(B, P.base, limit=1)
        if not embs:
            return None
        petals = embs[0].map
        steps.append(TraceStep(1, "base", copy=petals))
        return SunflowerCert(petals, frozenset(), embs[0],
                             degenerate=len(petals) < 2)

    D = chain.levels[level - 2].structure
    parts = chain.levels[level - 1].parts
    n = D.size
    part_of = {}
    for i, part in enumerate(parts):
        for v in part:
            part_of[iso.map[v]] = i

    # A copy inside part i is monochromatic under the coordinate colouring
    # keyed by f iff it is so under f restricted to i, so the search over
    # coordinate functions collapses to one coordinate per part.
    for i in range(n):
        part_vertices = sorted(v for v, pi in part_of.items() if pi == i)
        for t in range(level):
            def colour(v, t=t):
                return P.sorted_set(v)[t]

            vmap = _find_part_mono_copy(P, D, part_vertices, colour)
            if vmap is None:
                continue
            shared = colour(vmap[0])
            stripped = [P.sets[v] - {shared} for v in vmap]
            sub = Presentation(P.base.induced(vmap), level - 1, stripped)
            f = tuple(t if j == i else 0 for j in range(n))
            steps.append(TraceStep(level, "mono", part=i, f=f,
                                   shared=shared, copy=vmap))
            if sub.base == D:
                sub_iso = Embedding(D, sub.base, range(D.size), validate=False)
            else:
                sub_iso = are_isomorphic(D, sub.base)
            if sub_iso is None:
                steps.pop()
                continue
            rec = _extract(chain, sub, level - 1, sub_iso, steps)
            if rec is None:
                steps.pop()
                continue
            petals = tuple(vmap[x] for x in rec.petals)
            emb = Embedding(B, P.base, petals, validate=False)
            return SunflowerCert(petals, rec.centre | {shared}, emb,
                                 degenerate=rec.degenerate)

    vmap = _find_disjoint_transversal_copy(P, D, part_of)
    if vmap is not None:
        pool = sorted(vmap)
        for bmap in _iter_embedding_maps(B, P.base, candidates=[pool] * B.size):
            steps.append(TraceStep(level, "transversal", copy=vmap))
            emb = Embedding(B, P.base, bmap, validate=False)
            return SunflowerCert(bmap, frozenset(), emb,
                                 degenerate=len(bmap) < 2)
    return None


def verify_certificate(cert: SunflowerCert, B: Structure, P: Presentation) -> bool:
    """True iff the petal sets pairwise meet exactly in the centre and the
    recorded map is an induced isomorphism of B onto the petal
    substructure."""
    return verify_sunflower_cert(cert, B, P)


def replay_trace(chain: WitnessChain, P: Presentation,
                 trace: ExtractionTrace) -> bool:
    """Re-run the checks recorded at every step of an extraction trace."""
    B = chain.target
    cur = P
    for step in trace.steps:
        if step.case == "fallback":
            return bool(find_sunflower_copies(cur, B, limit=1))
        if step.case == "base":
            sub = cur.base.induced(step.copy)
            return are_isomorphic(B, sub) is not None
        if step.case == "transversal":
            sets = [cur.sets[v] for v in step.copy]
            if any(a & b for a, b in itertools.combinations(sets, 2)):
                return False
            D = chain.levels[step.level - 2].structure
            if are_isomorphic(D, cur.base.induced(step.copy)) is None:
                return False
            return True
        if step.case == "mono":
            D = chain.levels[step.level - 2].structure
            if are_isomorphic(D, cur.base.induced(step.copy)) is None:
                return False
            if step.shared is None:
                return False
            if any(step.shared not in cur.sets[v] for v in step.copy):
                return False
            stripped = [cur.sets[v] - {step.shared} for v in step.copy]
            cur = Presentation(cur.base.induced(step.copy), step.level - 1, stripped)
            continue
        return False
    return True
