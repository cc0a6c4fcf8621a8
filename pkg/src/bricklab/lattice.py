"""Bounded exhaustive module universes and the torsion class lattice.

A universe is the list of isomorphism classes of indecomposables up to a
total-dimension bound, found by exhaustive enumeration of representations.
Completeness of the bound is user-asserted; lattice computations require
the flag and raise OutOfUniverse whenever a closure step produces a
summand the universe cannot identify, so a wrong assertion never yields a
silently wrong answer.

Torsion classes are enumerated by scanning every subset of indecomposables
for quotient-closure and extension-closure; extension middle terms are
scanned directly in block-triangular form rather than through Ext groups.
Every accepted subset is re-verified against the independent
trace-descent membership oracle, and the Hasse diagram edges get their
unique brick labels.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import endotop, homs, linalg, quiver, torsion
from .errors import (
    BudgetExceeded,
    CertificateFailure,
    IncompleteUniverse,
    MalformedInput,
    OutOfUniverse,
)
from .linalg import DEFAULT_BUDGET
from .quiver import Algebra, Representation


@dataclass
class ModuleUniverse:
    """Canonical list of indecomposables with total dimension <= the bound."""

    algebra: Algebra
    max_total_dim: int
    indecomposables: list[Representation]
    complete: bool = False
    _buckets: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        for i, rep in enumerate(self.indecomposables):
            self._buckets.setdefault(rep.dim_vector, []).append(i)

    @property
    def size(self) -> int:
        return len(self.indecomposables)

    def find_index(self, rep: Representation, budget: int = DEFAULT_BUDGET) -> int:
        """Index of the member isomorphic to rep; OutOfUniverse if none."""
        for i in self._buckets.get(rep.dim_vector, []):
            if homs.iso_test(rep, self.indecomposables[i], budget):
                return i
        raise OutOfUniverse(
            f"no universe member with dimension vector {rep.dim_vector}"
        )

    def summand_indices(self, rep: Representation, budget: int = DEFAULT_BUDGET) -> tuple[int, ...]:
        dec = homs.decompose(rep, budget)
        return tuple(sorted(self.find_index(s, budget) for s, _, _ in dec.summands))


def _dim_vectors(n_vertices: int, max_total: int):
    rng = range(max_total + 1)
    for dims in itertools.product(rng, repeat=n_vertices):
        if 1 <= sum(dims) <= max_total:
            yield dims


def _all_reps_of_dims(alg: Algebra, dims: dict, budget: int):
    """Every valid representation with the given dimension vector."""
    p = alg.p
    shapes = [(a.name, dims[a.target], dims[a.source]) for a in alg.arrows]
    entries = sum(r * c for _, r, c in shapes)
    if p**entries > budget:
        raise BudgetExceeded(
            f"{p}^{entries} representations at dimension vector {dims}"
        )
    for flat in linalg.all_vectors(entries, p):
        maps = {}
        offset = 0
        for name, r, c in shapes:
            maps[name] = flat[offset : offset + r * c].reshape(r, c)
            offset += r * c
        rep = Representation(alg, dims, maps)
        if not quiver.validate(alg, rep):
            yield rep


def build_universe(
    alg: Algebra,
    max_total_dim: int,
    budget: int = DEFAULT_BUDGET,
    complete: bool = False,
) -> ModuleUniverse:
    """Exhaustively enumerate indecomposables up to the bound, deduplicated."""
    found: list[Representation] = []
    buckets: dict = {}
    for dims_tuple in _dim_vectors(len(alg.vertices), max_total_dim):
        dims = dict(zip(alg.vertices, dims_tuple))
        for rep in _all_reps_of_dims(alg, dims, budget):
            if not homs.is_indecomposable(rep, budget):
                continue
            bucket = buckets.setdefault(rep.dim_vector, [])
            if any(homs.iso_test(rep, found[i], budget) for i in bucket):
                continue
            bucket.append(len(found))
            found.append(rep)
    found.sort(key=lambda r: (r.total_dim, r.dim_vector, r.key()))
    return ModuleUniverse(alg, max_total_dim, found, complete)


def enumerate_semibricks(
    universe: ModuleUniverse, budget: int = DEFAULT_BUDGET
) -> list[tuple[int, ...]]:
    """All basic semibricks as index sets (pairwise orthogonal bricks)."""
    bricks = [
        i
        for i, rep in enumerate(universe.indecomposables)
        if endotop.is_brick(rep, budget)
    ]
    orthogonal = {}
    for i, j in itertools.combinations(bricks, 2):
        a, b = universe.indecomposables[i], universe.indecomposables[j]
        orthogonal[(i, j)] = homs.hom_dim(a, b) == 0 and homs.hom_dim(b, a) == 0
    result = []
    for size in range(len(bricks) + 1):
        for subset in itertools.combinations(bricks, size):
            if all(orthogonal[(i, j)] for i, j in itertools.combinations(subset, 2)):
                result.append(subset)
    return result


def _quotient_table(universe: ModuleUniverse, budget: int) -> list[frozenset[int]]:
    """Q[i] = indices of summands of all quotients of member i."""
    table = []
    for rep in universe.indecomposables:
        summands: set[int] = set()
        for sub in quiver.all_subreps(rep):
            quot = quiver.sub_quotient(rep, sub).quot
            if quot.total_dim == 0:
                continue
            summands.update(universe.summand_indices(quot, budget))
        table.append(frozenset(summands))
    return table


def _extension_table(universe: ModuleUniverse, budget: int) -> list[list[frozenset[int]]]:
    """E[i][j] = summand indices over all middle terms of 0 -> X_j -> Z -> X_i -> 0.

    Middle terms are scanned in block upper-triangular form: the submodule
    occupies the leading coordinates and only the glue blocks vary.
    """
    alg = universe.algebra
    p = alg.p
    n = universe.size
    table = [[frozenset()] * n for _ in range(n)]
    for i, upper in enumerate(universe.indecomposables):
        for j, lower in enumerate(universe.indecomposables):
            shapes = [
                (a.name, lower.dims[a.target], upper.dims[a.source])
                for a in alg.arrows
            ]
            entries = sum(r * c for _, r, c in shapes)
            if p**entries > budget:
                raise BudgetExceeded(
                    f"{p}^{entries} glue blocks for an extension scan"
                )
            summands: set[int] = set()
            dims = {
                v: lower.dims[v] + upper.dims[v] for v in alg.vertices
            }
            for flat in linalg.all_vectors(entries, p):
                maps = {}
                offset = 0
                for a in alg.arrows:
                    lr, lc = lower.dims[a.target], lower.dims[a.source]
                    ur, uc = upper.dims[a.target], upper.dims[a.source]
                    glue = flat[offset : offset + lr * uc].reshape(lr, uc)
                    offset += lr * uc
                    mat = linalg.zeros(dims[a.target], dims[a.source])
                    mat[:lr, :lc] = lower.maps[a.name]
                    mat[:lr, lc:] = glue
                    mat[lr:, lc:] = upper.maps[a.name]
                    maps[a.name] = mat
                rep = Representation(alg, dims, maps)
                if quiver.validate(alg, rep):
                    continue
                summands.update(universe.summand_indices(rep, budget))
            table[i][j] = frozenset(summands)
    return table


@dataclass
class TorsionLattice:
    universe: ModuleUniverse
    classes: list[frozenset[int]]
    hasse: list[tuple[int, int]]
    labels: dict[tuple[int, int], int]


def torsion_class_of(
    universe: ModuleUniverse, generator: Representation, budget: int = DEFAULT_BUDGET
) -> frozenset[int]:
    """Members of the class generated by a module, via the membership oracle."""
    handle = torsion.TorsionHandle(generator)
    return frozenset(
        i
        for i, rep in enumerate(universe.indecomposables)
        if torsion.in_torsion(rep, handle).verdict
    )


def _generator_of(universe: ModuleUniverse, subset) -> Representation:
    members = [universe.indecomposables[i] for i in sorted(subset)]
    if not members:
        return quiver.zero_rep(universe.algebra)
    return quiver.direct_sum(members)


def enumerate_torsion_classes(
    universe: ModuleUniverse, budget: int = DEFAULT_BUDGET
) -> TorsionLattice:
    """Scan all subsets for quotient- and extension-closure; label the Hasse edges.

    Each accepted subset is cross-checked against the trace-descent
    membership oracle; a disagreement raises CertificateFailure.
    """
    if not universe.complete:
        raise IncompleteUniverse("torsion class enumeration needs complete = True")
    n = universe.size
    qtable = _quotient_table(universe, budget)
    etable = _extension_table(universe, budget)
    classes = []
    for bits in range(1 << n):
        subset = frozenset(i for i in range(n) if bits >> i & 1)
        if any(not qtable[i] <= subset for i in subset):
            continue
        if any(not etable[i][j] <= subset for i in subset for j in subset):
            continue
        classes.append(subset)
    classes.sort(key=lambda s: (len(s), tuple(sorted(s))))
    for subset in classes:
        oracle = torsion_class_of(universe, _generator_of(universe, subset), budget)
        if oracle != subset:
            raise CertificateFailure(
                "closure tables and the membership oracle disagree on a class"
            )
    hasse = []
    for li, lower in enumerate(classes):
        for ui, upper in enumerate(classes):
            if not lower < upper:
                continue
            if any(
                lower < mid < upper for mid in classes if mid not in (lower, upper)
            ):
                continue
            hasse.append((li, ui))
    hasse.sort()
    labels = {}
    for li, ui in hasse:
        lower, upper = classes[li], classes[ui]
        candidates = []
        for b in sorted(upper):
            if not endotop.is_brick(universe.indecomposables[b], budget):
                continue
            perp = frozenset(
                m
                for m in upper
                if homs.hom_dim(
                    universe.indecomposables[m], universe.indecomposables[b]
                )
                == 0
            )
            if perp == lower:
                candidates.append(b)
        if len(candidates) != 1:
            raise CertificateFailure(
                f"hasse edge has {len(candidates)} labeling bricks, expected 1"
            )
        labels[(li, ui)] = candidates[0]
    return TorsionLattice(universe, classes, hasse, labels)


def check_semibrick_bijection(
    universe: ModuleUniverse, budget: int = DEFAULT_BUDGET
) -> dict:
    """Basic semibricks <-> torsion classes, with top-brick recovery.

    Maps each basic semibrick X to the class generated by the direct sum
    of its members and asserts the map is a bijection onto the enumerated
    lattice, recovering X as the top bricks of that generator.
    """
    lattice = enumerate_torsion_classes(universe, budget)
    semibricks = enumerate_semibricks(universe, budget)
    assertions = []
    images = []
    recovery_ok = True
    for subset in semibricks:
        gen = _generator_of(universe, subset)
        cls = torsion_class_of(universe, gen, budget)
        images.append(cls)
        tops = endotop.top_bricks(gen, budget)
        recovered = (
            tuple(
                sorted(universe.find_index(b, budget) for b in tops.distinct())
            )
            == subset
        )
        multiplicity_free = all(c == 1 for _, c in tops.bricks)
        recovery_ok = recovery_ok and recovered and multiplicity_free
    class_set = set(lattice.classes)
    injective = len(set(images)) == len(images)
    into = all(c in class_set for c in images)
    surjective = set(images) == class_set
    assertions.append(("semibrick-count", len(semibricks) == len(lattice.classes)))
    assertions.append(("map-into-lattice", into))
    assertions.append(("injective", injective))
    assertions.append(("surjective", surjective))
    assertions.append(("top-brick-recovery", recovery_ok))
    return {
        "semibricks": [list(s) for s in semibricks],
        "classes": [sorted(c) for c in lattice.classes],
        "assertions": assertions,
        "ok": all(flag for _, flag in assertions),
    }


def check_lower_neighbors(
    universe: ModuleUniverse, M: Representation, budget: int = DEFAULT_BUDGET
) -> dict:
    """Lower neighbors of the class generated by M against its top bricks.

    Asserts the neighbors are exactly the perpendicular cuts at the top
    bricks, pairwise distinct with unique labeling bricks, and that every
    properly contained class sits inside one of them.
    """
    lattice = enumerate_torsion_classes(universe, budget)
    classes = lattice.classes
    cls = torsion_class_of(universe, M, budget)
    assertions = [("generated-class-in-lattice", cls in classes)]
    upper_idx = classes.index(cls)
    hasse_lower = sorted(li for li, ui in lattice.hasse if ui == upper_idx)
    tops = endotop.top_bricks(M, budget)
    cuts = []
    for brick in tops.distinct():
        b_idx = universe.find_index(brick, budget)
        cut = frozenset(
            m
            for m in cls
            if homs.hom_dim(
                universe.indecomposables[m], universe.indecomposables[b_idx]
            )
            == 0
        )
        cuts.append((b_idx, cut))
    distinct = len({cut for _, cut in cuts}) == len(cuts)
    assertions.append(("cuts-pairwise-distinct", distinct))
    cut_indices = set()
    cuts_are_classes = True
    for _, cut in cuts:
        if cut in classes:
            cut_indices.add(classes.index(cut))
        else:
            cuts_are_classes = False
    assertions.append(("cuts-are-classes", cuts_are_classes))
    assertions.append(("cuts-equal-lower-neighbors", cut_indices == set(hasse_lower)))
    label_unique = True
    for b_idx, cut in cuts:
        others = [
            c
            for c in cls
            if c != b_idx
            and endotop.is_brick(universe.indecomposables[c], budget)
            and frozenset(
                m
                for m in cls
                if homs.hom_dim(
                    universe.indecomposables[m], universe.indecomposables[c]
                )
                == 0
            )
            == cut
        ]
        if others:
            label_unique = False
    assertions.append(("label-unique", label_unique))
    containment = all(
        any(other <= cut for _, cut in cuts)
        for other in classes
        if other < cls
    )
    assertions.append(("proper-subclasses-contained", containment))
    return {
        "class": sorted(cls),
        "lower_neighbors": [sorted(classes[li]) for li in hasse_lower],
        "top_bricks": [b for b, _ in cuts],
        "assertions": assertions,
        "ok": all(flag for _, flag in assertions),
    }


def minimal_brick_between(
    universe: ModuleUniverse, lower, upper, budget: int = DEFAULT_BUDGET
) -> int:
    """A minimal-dimension member of upper minus lower; asserted to be a brick
    with zero Hom from every member of lower."""
    lower, upper = frozenset(lower), frozenset(upper)
    if not lower < upper:
        raise MalformedInput("lower is not properly contained in upper")
    diff = sorted(
        upper - lower,
        key=lambda i: (universe.indecomposables[i].total_dim, i),
    )
    pick = diff[0]
    rep = universe.indecomposables[pick]
    if not endotop.is_brick(rep, budget):
        raise CertificateFailure("minimal member of the difference is not a brick")
    for m in lower:
        if homs.hom_dim(universe.indecomposables[m], rep) != 0:
            raise CertificateFailure("a member of lower maps onto the minimal brick")
    return pick


def lattice_to_dot(lattice: TorsionLattice) -> str:
    """Hasse diagram in DOT form with brick labels on the edges."""
    lines = ["digraph torsion_lattice {"]
    for i, cls in enumerate(lattice.classes):
        label = "{" + ",".join(str(m) for m in sorted(cls)) + "}"
        lines.append(f'  T{i} [label="{label}"];')
    for (li, ui) in lattice.hasse:
        b = lattice.labels[(li, ui)]
        lines.append(f'  T{ui} -> T{li} [label="B{b}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def lattice_to_payload(lattice: TorsionLattice) -> dict:
    return {
        "indecomposables": [
            quiver.rep_to_payload(rep) for rep in lattice.universe.indecomposables
        ],
        "classes": [sorted(c) for c in lattice.classes],
        "hasse": [[li, ui] for li, ui in lattice.hasse],
        "labels": {f"{li},{ui}": b for (li, ui), b in lattice.labels.items()},
    }
