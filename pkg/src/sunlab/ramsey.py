"""Probabilistic machinery for partitioned witness hypergraphs.

The pipeline needs finite n-uniform hypergraphs, with vertices split into
n equal parts, rich enough that for any s vertex-colourings there is
either an edge inside a part that some colouring leaves monochromatic or
a transversal edge heterochromatic in every colouring.  Random generation
at edge probability p = c^(1-n+eps) makes this likely at astronomically
large part sizes; at desk scale the generator is honest about the gap and
the pipeline treats generation as Las Vegas, so this module also ships an
adversarial verifier that searches colouring tuples defeating an instance.

All threshold arithmetic is exact rational; only the final probability
bound is evaluated in floating point (it is advisory).
"""

from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction
from typing import Iterable, Iterator, Optional

from .structures import BudgetExceeded


class GenerationError(RuntimeError):
    """Sampling failed its post-checks on every attempt (never silent)."""


class PartitionedHypergraph:
    """An n-uniform hypergraph with vertices split into n equal parts."""

    __slots__ = ("n", "parts", "edges", "meta", "_part_of", "_vertices")

    def __init__(self, n: int, parts: Iterable[Iterable[int]],
                 edges: Iterable[Iterable[int]], meta: Optional[dict] = None):
        self.n = int(n)
        self.parts = tuple(tuple(sorted(int(v) for v in p)) for p in parts)
        if len(self.parts) != self.n:
            raise ValueError("need exactly n parts")
        sizes = {len(p) for p in self.parts}
        if len(sizes) != 1:
            raise ValueError("parts must have equal size")
        flat = [v for p in self.parts for v in p]
        if len(set(flat)) != len(flat):
            raise ValueError("parts must be disjoint")
        vertex_set = set(flat)
        self.edges = frozenset(frozenset(int(v) for v in e) for e in edges)
        for e in self.edges:
            if len(e) != self.n:
                raise ValueError("edges must have exactly n vertices")
            if not e <= vertex_set:
                raise ValueError("edge uses an unknown vertex")
        self.meta = dict(meta) if meta else {}
        self._vertices = tuple(sorted(vertex_set))
        self._part_of = {}
        for i, p in enumerate(self.parts):
            for v in p:
                self._part_of[v] = i

    @property
    def part_size(self) -> int:
        return len(self.parts[0])

    @property
    def vertices(self) -> tuple[int, ...]:
        return self._vertices

    def part_of(self, v: int) -> int:
        return self._part_of[v]

    def is_transversal(self, e: Iterable[int]) -> bool:
        return len({self._part_of[v] for v in e}) == self.n

    def within_part_edges(self) -> list[frozenset]:
        return sorted((e for e in self.edges
                       if len({self._part_of[v] for v in e}) == 1),
                      key=sorted)

    def transversal_edges(self) -> list[frozenset]:
        return sorted((e for e in self.edges if self.is_transversal(e)), key=sorted)

    def __repr__(self):
        return (f"PartitionedHypergraph(n={self.n}, c={self.part_size}, "
                f"edges={len(self.edges)})")


# ---------------------------------------------------------------------------
# Suitable-set parameter arithmetic (exact rationals)


def falling_binomial(x: Fraction, n: int) -> Fraction:
    """The generalized binomial coefficient binom(x, n) = x(x-1)...(x-n+1)/n!."""
    out = Fraction(1)
    for j in range(n):
        out *= (x - j)
    return out / math.factorial(n)


class SuitableParams:
    """Exact parameters (epsilon, a0, c_min) for the counting dichotomy:
    on n equal parts of size c >= c_min, any colouring yields either
    > a0 * c^n monochromatic n-sets inside some part or
    > (1 - a1) * c^n heterochromatic transversal n-sets."""

    __slots__ = ("n", "a1", "epsilon", "a0", "c_min")

    def __init__(self, n, a1, epsilon, a0, c_min):
        self.n = n
        self.a1 = a1
        self.epsilon = epsilon
        self.a0 = a0
        self.c_min = c_min

    def __repr__(self):
        return (f"SuitableParams(n={self.n}, a1={self.a1}, eps={self.epsilon}, "
                f"a0={self.a0}, c_min={self.c_min})")


def suitable_params(n: int, a1: Fraction) -> SuitableParams:
    """Derive (epsilon, a0, c_min) exactly.

    epsilon is the largest 1/2^t with (1 - n*epsilon)^n > 1 - a1; a0 is
    half the leading coefficient epsilon^n/n! of binom(x*epsilon, n), and
    c_min is found by exact upward search from the point where every
    factor of the falling product is positive and increasing, so the
    inequality holds for all larger c as well.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    a1 = Fraction(a1)
    if not (0 < a1 < 1):
        raise ValueError("a1 must lie strictly between 0 and 1")
    t = 1
    while True:
        eps = Fraction(1, 2 ** t)
        if (1 - n * eps) > 0 and (1 - n * eps) ** n > 1 - a1:
            break
        t += 1
        if t > 64:
            raise RuntimeError("no admissible epsilon of the form 1/2^t found")
    a0 = eps ** n / (2 * math.factorial(n))

    def holds(c: int) -> bool:
        return falling_binomial(c * eps, n) - a0 * Fraction(c) ** n > 0

    # Below the threshold every factor of the falling product is positive
    # and increasing in c, so the inequality is monotone there: gallop for
    # an upper bracket, then bisect for the exact least c.
    lo = (n - 1) * eps.denominator // eps.numerator + 1
    if holds(lo):
        return SuitableParams(n, a1, eps, a0, lo)
    hi = lo + 1
    while not holds(hi):
        hi = 2 * hi
    low, high = lo, hi
    while high - low > 1:
        mid = (low + high) // 2
        if holds(mid):
            high = mid
        else:
            low = mid
    return SuitableParams(n, a1, eps, a0, high)


def suitable_params_hold(sp: SuitableParams) -> bool:
    """Re-check both defining inequalities under exact arithmetic."""
    first = (1 - sp.n * sp.epsilon) ** sp.n > 1 - sp.a1
    second = (falling_binomial(sp.c_min * sp.epsilon, sp.n)
              - sp.a0 * Fraction(sp.c_min) ** sp.n > 0)
    positive = sp.c_min * sp.epsilon > sp.n - 1
    return first and second and positive and 0 < sp.a0 < 1


# ---------------------------------------------------------------------------
# Counting monochromatic part n-sets and heterochromatic transversals


def _set_partitions(n: int) -> Iterator[list[list[int]]]:
    """All set partitions of range(n), by restricted growth strings."""
    if n == 0:
        yield []
        return
    rgs = [0] * n

    def rec(i, maxval):
        if i == n:
            blocks: dict[int, list[int]] = {}
            for x, b in enumerate(rgs):
                blocks.setdefault(b, []).append(x)
            yield [blocks[b] for b in sorted(blocks)]
            return
        for b in range(maxval + 2):
            rgs[i] = b
            yield from rec(i + 1, max(maxval, b))

    yield from rec(1, 0)


def bell_number(n: int) -> int:
    """Bell numbers via the Bell triangle."""
    row = [1]
    for _ in range(n):
        new_row = [row[-1]]
        for x in row:
            new_row.append(new_row[-1] + x)
        row = new_row
    return row[0]


def _colour_counts(part: Iterable[int], colouring) -> dict:
    counts: dict = {}
    for v in part:
        q = colouring[v]
        counts[q] = counts.get(q, 0) + 1
    return counts


def mono_nset_count(part: Iterable[int], colouring, n: int) -> int:
    """Monochromatic n-subsets of one part under one colouring."""
    return sum(math.comb(c, n) for c in _colour_counts(part, colouring).values())


def hetero_transversal_count(parts, colouring) -> int:
    """Heterochromatic transversal n-sets, by Moebius inversion over the
    partition lattice of the part indices (exact and linear in the number
    of colours)."""
    n = len(parts)
    counts = [_colour_counts(p, colouring) for p in parts]
    total = 0
    for blocks in _set_partitions(n):
        coeff = 1
        for b in blocks:
            coeff *= (-1) ** (len(b) - 1) * math.factorial(len(b) - 1)
        term = 1
        for b in blocks:
            colours = set().union(*(counts[i].keys() for i in b))
            term *= sum(_prod(counts[i].get(q, 0) for i in b) for q in colours)
        total += coeff * term
    return total


def _prod(xs) -> int:
    out = 1
    for x in xs:
        out *= x
    return out


class SuitableCounts:
    __slots__ = ("mono", "hetero", "joint_mono", "joint_hetero", "jointly_suitable")

    def __init__(self, mono, hetero, joint_mono, joint_hetero):
        self.mono = mono                  # mono[r][i]
        self.hetero = hetero              # hetero[r]
        self.joint_mono = joint_mono      # per part, mono in every colouring
        self.joint_hetero = joint_hetero  # transversal, hetero in every colouring
        self.jointly_suitable = sum(joint_mono) + joint_hetero

    def __repr__(self):
        return (f"SuitableCounts(mono={self.mono}, hetero={self.hetero}, "
                f"jointly_suitable={self.jointly_suitable})")


def count_suitable(parts, colourings, budget: int = 10 ** 7) -> SuitableCounts:
    """Exact closed-form tallies: per-colouring monochromatic n-sets per
    part, per-colouring heterochromatic transversals, and the jointly
    suitable n-sets (monochromatic in each colouring inside one part, or
    transversal and heterochromatic in all colourings)."""
    n = len(parts)
    mono = [[mono_nset_count(p, chi, n) for p in parts] for chi in colourings]
    hetero = [hetero_transversal_count(parts, chi) for chi in colourings]

    vec_counts = []
    for p in parts:
        counts: dict = {}
        for v in p:
            vec = tuple(chi[v] for chi in colourings)
            counts[vec] = counts.get(vec, 0) + 1
        vec_counts.append(counts)

    joint_mono = [sum(math.comb(c, n) for c in counts.values())
                  for counts in vec_counts]

    total_combos = _prod(len(c) for c in vec_counts)
    if total_combos > budget:
        raise BudgetExceeded(f"{total_combos} vector combinations exceed budget")
    joint_hetero = 0
    s = len(colourings)
    for combo in itertools.product(*(c.items() for c in vec_counts)):
        vecs = [v for v, _ in combo]
        if all(len({vec[r] for vec in vecs}) == n for r in range(s)):
            joint_hetero += _prod(cnt for _, cnt in combo)
    return SuitableCounts(mono, hetero, joint_mono, joint_hetero)


def count_suitable_enumerate(parts, colourings) -> SuitableCounts:
    """The same tallies by direct enumeration of all n-subsets (oracle for
    small instances)."""
    n = len(parts)
    part_of = {}
    for i, p in enumerate(parts):
        for v in p:
            part_of[v] = i
    vertices = sorted(part_of)
    s = len(colourings)
    mono = [[0] * n for _ in range(s)]
    hetero = [0] * s
    joint_mono = [0] * n
    joint_hetero = 0
    for sub in itertools.combinations(vertices, n):
        owners = {part_of[v] for v in sub}
        inside = len(owners) == 1
        transversal = len(owners) == n
        mono_flags = []
        het_flags = []
        for r, chi in enumerate(colourings):
            cols = [chi[v] for v in sub]
            is_mono = len(set(cols)) == 1
            is_het = len(set(cols)) == n
            mono_flags.append(is_mono)
            het_flags.append(is_het)
            if inside and is_mono:
                mono[r][next(iter(owners))] += 1
            if transversal and is_het:
                hetero[r] += 1
        if inside and all(mono_flags):
            joint_mono[next(iter(owners))] += 1
        if transversal and all(het_flags):
            joint_hetero += 1
    return SuitableCounts(mono, hetero, joint_mono, joint_hetero)


def dichotomy_holds(parts, colouring, sp: SuitableParams) -> bool:
    """The counting dichotomy for one colouring on n equal parts: some part
    has > a0*c^n monochromatic n-sets, or there are > (1-a1)*c^n
    heterochromatic transversals.  Exact comparison."""
    n = sp.n
    c = len(parts[0])
    threshold_mono = sp.a0 * Fraction(c) ** n
    if any(mono_nset_count(p, colouring, n) > threshold_mono for p in parts):
        return True
    threshold_het = (1 - sp.a1) * Fraction(c) ** n
    return hetero_transversal_count(parts, colouring) > threshold_het


# ---------------------------------------------------------------------------
# The failure-probability bound


class GenParams:
    """Parameters of one generation run; p is the rational approximation of
    c^(1-n+epsilon) (12 significant digits) and must be < 1/2."""

    __slots__ = ("n", "s", "g", "epsilon", "c", "p")

    def __init__(self, n: int, s: int, g: int, epsilon: Fraction, c: int):
        self.n = n
        self.s = s
        self.g = g
        self.epsilon = Fraction(epsilon)
        self.c = c
        exponent = 1 - n + self.epsilon
        p_float = float(c) ** float(exponent)
        self.p = Fraction(p_float).limit_denominator(10 ** 12)
        if not self.p < Fraction(1, 2):
            raise ValueError(f"edge probability {float(self.p):.4f} not below 1/2; "
                             "increase c")

    def __repr__(self):
        return (f"GenParams(n={self.n}, s={self.s}, g={self.g}, "
                f"eps={self.epsilon}, c={self.c}, p~{float(self.p):.3g})")


def log_failure_bound(params: GenParams, a: Fraction) -> float:
    """Natural log of the bound on the probability that some s-tuple of
    colourings leaves fewer than c suitable edges."""
    n, s, c = params.n, params.s, params.c
    eps = float(params.epsilon)
    return (-float(a) * float(c) ** (1.0 + eps)
            + (c * n * s + c * n + 1) * math.log(c)
            + c * n * s * math.log(n))


def failure_bound(params: GenParams, a: Fraction) -> float:
    x = log_failure_bound(params, a)
    if x > 700:
        return math.inf
    return math.exp(x)


def potential_cycle_count(num_vertices: int, n: int, m: int) -> int:
    """Sequences v0 e0 ... v_{m-1} e_{m-1} with distinct vertices and each
    e_i an n-set containing {v_i, v_{i+1}} (edges may repeat): the
    expectation-counting universe for short cycles."""
    perm = 1
    for j in range(m):
        perm *= (num_vertices - j)
    return perm * math.comb(num_vertices - 2, n - 2) ** m


# ---------------------------------------------------------------------------
# Berge girth


def _find_cycle_of_length(H: PartitionedHypergraph, m: int) -> Optional[list[frozenset]]:
    """A Berge cycle with m distinct vertices and m distinct edges, or None.
    Canonical search order: the first vertex is the least of the cycle."""
    edges = sorted(H.edges, key=sorted)
    incident: dict[int, list[int]] = {v: [] for v in H.vertices}
    for idx, e in enumerate(edges):
        for v in e:
            incident[v].append(idx)

    for v0 in H.vertices:
        path = [v0]
        used_e: list[int] = []
        in_path = {v0}

        def rec(cur: int) -> Optional[list[int]]:
            depth = len(used_e)
            if depth == m - 1:
                for ei in incident[cur]:
                    if ei not in used_e and v0 in edges[ei]:
                        return used_e + [ei]
                return None
            for ei in incident[cur]:
                if ei in used_e:
                    continue
                for w in sorted(edges[ei]):
                    if w in in_path or w <= v0:
                        continue
                    path.append(w)
                    in_path.add(w)
                    used_e.append(ei)
                    found = rec(w)
                    if found is not None:
                        return found
                    used_e.pop()
                    in_path.discard(w)
                    path.pop()
            return None

        res = rec(v0)
        if res is not None:
            return [edges[i] for i in res]
    return None


def hypergraph_girth(H: PartitionedHypergraph, cap: Optional[int] = None):
    """Least m >= 2 admitting a Berge cycle, or math.inf if none of length
    <= cap exists (cap defaults to the trivial maximum)."""
    if cap is None:
        cap = min(len(H.edges), len(H.vertices))
    for m in range(2, cap + 1):
        if _find_cycle_of_length(H, m) is not None:
            return m
    return math.inf


def find_short_cycle(H: PartitionedHypergraph, g: int) -> Optional[list[frozenset]]:
    """Some Berge cycle of length < g, shortest first, or None."""
    for m in range(2, g):
        cyc = _find_cycle_of_length(H, m)
        if cyc is not None:
            return cyc
    return None


# ---------------------------------------------------------------------------
# Generation with cycle removal


def default_epsilon(g: int) -> Fraction:
    """The largest 1/2^t strictly below 1/g."""
    t = 1
    while Fraction(1, 2 ** t) >= Fraction(1, g):
        t += 1
    return Fraction(1, 2 ** t)


def gen_witness_hypergraph(n: int, s: int, g: int, seed: int,
                           c_override: Optional[int] = None,
                           threshold: float = 0.5, c_cap: int = 32,
                           floor: int = 1, max_attempts: int = 10,
                           strict_removals: bool = False,
                           ) -> PartitionedHypergraph:
    """Sample an n-uniform hypergraph on n parts of size c with edges drawn
    i.i.d. at p = c^(1-n+eps), then delete one edge per short cycle until
    the Berge girth reaches g.

    The theory certifies success only for part sizes far beyond desk
    scale, so c is chosen as the first power of two whose failure bound
    drops below `threshold`, capped at `c_cap`; the metadata records
    whether the bound actually certifies the instance.

    Ending with fewer than `floor` edges is an error after retries, never
    silent.  A removal count reaching c is also retried (the asymptotic
    regime keeps it below c), but at uniformity 3 and desk-scale c the
    expected short-cycle count always exceeds c, so when every attempt
    overshoots the best instance is returned with
    meta["removal_budget_met"] = False; pass strict_removals=True to make
    that an error instead.
    """
    if n < 2 or s < 1 or g < 2:
        raise ValueError("need n >= 2, s >= 1, g >= 2")
    eps = default_epsilon(g)
    sp = suitable_params(n, Fraction(1, 2 * s))
    a = min(sp.a0, Fraction(1, 2))

    def params_for(c: int) -> Optional[GenParams]:
        try:
            return GenParams(n, s, g, eps, c)
        except ValueError:
            return None

    if c_override is not None:
        params = params_for(c_override)
        if params is None:
            raise ValueError("c_override makes the edge probability >= 1/2")
        certified = (failure_bound(params, a) < threshold
                     and c_override >= sp.c_min)
    else:
        params = None
        certified = False
        c = 4
        while c <= c_cap:
            cand = params_for(c)
            if cand is not None:
                params = cand
                if failure_bound(cand, a) < threshold and c >= sp.c_min:
                    certified = True
                    break
            c *= 2
        if params is None:
            raise GenerationError("no admissible part size at or below the cap")

    c = params.c
    p_float = float(params.p)
    universe = list(range(n * c))
    parts = [universe[i * c:(i + 1) * c] for i in range(n)]

    last_error = None
    best = None
    for attempt in range(max_attempts):
        rng = random.Random(f"hypergraph|{n}|{s}|{g}|{seed}|{attempt}")
        edges = {frozenset(comb)
                 for comb in itertools.combinations(universe, n)
                 if rng.random() < p_float}
        removed = 0
        H = PartitionedHypergraph(n, parts, edges)
        while True:
            cyc = find_short_cycle(H, g)
            if cyc is None:
                break
            victim = max(cyc, key=sorted)
            edges.discard(victim)
            removed += 1
            H = PartitionedHypergraph(n, parts, edges)
        if len(edges) < floor:
            last_error = f"only {len(edges)} edges < floor {floor}"
            continue
        meta = {
            "n": n, "s": s, "g": g, "seed": seed, "attempt": attempt,
            "epsilon": str(eps), "c": c, "p": str(params.p),
            "removed_edges": removed, "edge_count": len(edges),
            "removal_budget_met": removed < c,
            "bound_certified": bool(certified),
            "a0": str(sp.a0), "c_min": sp.c_min,
            "log_failure_bound": log_failure_bound(params, a),
        }
        out = PartitionedHypergraph(n, parts, edges, meta)
        if removed < c:
            return out
        last_error = f"removed {removed} >= c = {c} edges"
        if best is None or removed < best.meta["removed_edges"]:
            best = out
    if best is not None and not strict_removals:
        return best
    raise GenerationError(f"all {max_attempts} attempts failed: {last_error}")


# ---------------------------------------------------------------------------
# Adversarial verification of the dichotomy property


def is_counterexample_tuple(H: PartitionedHypergraph, partitions) -> bool:
    """True iff the s partitions defeat the instance: no within-part edge is
    monochromatic under its colouring, and every transversal edge fails to
    be heterochromatic under at least one colouring."""
    whole = H.within_part_edges()
    trans = H.transversal_edges()
    block_of = []
    for p in partitions:
        m = {}
        for b, block in enumerate(p):
            for v in block:
                m[v] = b
        block_of.append(m)
    for m in block_of:
        for e in whole:
            if len({m[v] for v in e}) == 1:
                return False
    for e in trans:
        if all(len({m[v] for v in e}) == len(e) for m in block_of):
            return False
    return True


def witness_adversary(H: PartitionedHypergraph, s: int,
                      mode: str = "exhaustive", trials: int = 1000,
                      seed: int = 0, budget: int = 2 * 10 ** 10):
    """Search s-tuples of vertex partitions defeating the dichotomy.

    Colourings only matter through their kernels, so the search ranges
    over set partitions.  Exhaustive mode scans every partition once,
    keeps those with no monochromatic within-part edge together with the
    bitmask of transversal edges they kill, and then looks for at most s
    masks covering everything; it returns the first counterexample in
    canonical order, or None if the instance really is a witness.
    """
    verts = H.vertices
    V = len(verts)
    pos = {v: i for i, v in enumerate(verts)}
    whole = [tuple(pos[v] for v in e) for e in H.within_part_edges()]
    trans = [tuple(pos[v] for v in e) for e in H.transversal_edges()]
    full = (1 << len(trans)) - 1

    def blocks_of(rgs):
        blocks: dict[int, list[int]] = {}
        for i, b in enumerate(rgs):
            blocks.setdefault(b, []).append(verts[i])
        return tuple(tuple(blocks[b]) for b in sorted(blocks))

    def kill_mask(rgs) -> Optional[int]:
        for e in whole:
            if len({rgs[i] for i in e}) == 1:
                return None
        mask = 0
        for bit, e in enumerate(trans):
            if len({rgs[i] for i in e}) < len(e):
                mask |= 1 << bit
        return mask

    if mode == "random":
        rng = random.Random(f"adversary|{seed}")
        for _ in range(trials):
            tup = tuple(blocks_of([rng.randrange(V) for _ in range(V)])
                        for _ in range(s))
            if is_counterexample_tuple(H, tup):
                return list(tup)
        return None
    if mode != "exhaustive":
        raise ValueError(f"unknown mode {mode!r}")

    if bell_number(V) ** s > budget:
        raise BudgetExceeded(f"Bell({V})^{s} exceeds budget {budget}")

    mask_rep: dict[int, tuple] = {}
    for rgs in _iter_rgs(V):
        mask = kill_mask(rgs)
        if mask is None:
            continue
        if mask not in mask_rep:
            mask_rep[mask] = blocks_of(rgs)
        if mask == full:
            return [mask_rep[full]] * s

    if not mask_rep:
        return None
    masks = sorted(mask_rep, key=lambda m: (-bin(m).count("1"), m))

    def cover(start: int, acc_mask: int, chosen: list) -> Optional[list]:
        if acc_mask == full:
            return chosen
        if len(chosen) == s:
            return None
        for i in range(start, len(masks)):
            m = masks[i]
            if acc_mask | m != acc_mask:
                res = cover(i, acc_mask | m, chosen + [m])
                if res is not None:
                    return res
        return None

    solution = cover(0, 0, [])
    if solution is None:
        return None
    partitions = [mask_rep[m] for m in solution]
    while len(partitions) < s:
        partitions.append(partitions[-1])
    return partitions


def _iter_rgs(n: int) -> Iterator[list[int]]:
    rgs = [0] * n

    def rec(i, maxval):
        if i == n:
            yield rgs
            return
        for b in range(maxval + 2):
            rgs[i] = b
            yield from rec(i + 1, max(maxval, b))

    if n == 0:
        yield []
    else:
        yield from rec(1, 0)
