"""Oracles for finitely generated torsion classes.

Membership in the smallest torsion class containing a generator G is
decided by iterated trace descent: keep replacing N by its quotient modulo
the trace of G, and N belongs exactly when this reaches zero.  The
equivalence of this criterion with the filtration-level definition is a
stated proof obligation, discharged in the test suite by a brute force
over submodule lattices (never assumed silently).

The companions compute the largest submodule of M inside the class, the
largest submodule with no nonzero map to a fixed module B, the largest
submodule in the intersection of both, and a memoized search deciding
whether a module is filtered entirely by copies of B.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import homs, linalg, quiver
from .errors import MalformedInput
from .linalg import DEFAULT_BUDGET
from .quiver import Representation, SubRepresentation, sub_quotient

_filtered_by_cache: dict = {}


def clear_caches() -> None:
    _filtered_by_cache.clear()


@dataclass(frozen=True)
class TorsionHandle:
    """The smallest torsion class containing the generator module."""

    generator: Representation

    @property
    def label(self) -> str:
        return quiver.canonical_json(quiver.rep_to_payload(self.generator))

    def key(self) -> tuple:
        return self.generator.key()


@dataclass
class MembershipCertificate:
    """Replayable record of the iterated trace descent.

    stages[i] is (current module, trace submodule inside it); the last
    stage either is the zero module (verdict True) or has zero trace while
    being nonzero (verdict False).  Quotients are materialized canonically,
    so the certificate replays deterministically.
    """

    module: Representation
    handle: TorsionHandle
    stages: list[tuple[Representation, SubRepresentation]]
    verdict: bool


def in_torsion(N: Representation, handle: TorsionHandle) -> MembershipCertificate:
    """Decide N in T(G) by iterated trace-quotient descent."""
    G = handle.generator
    if N.algebra.key() != G.algebra.key():
        raise MalformedInput("membership test across different algebras")
    stages = []
    current = N
    while current.total_dim > 0:
        tr = homs.trace_submodule(G, current)
        stages.append((current, tr))
        if tr.total_dim == 0:
            return MembershipCertificate(N, handle, stages, False)
        current = sub_quotient(current, tr).quot
    stages.append((current, quiver.zero_sub(current)))
    return MembershipCertificate(N, handle, stages, True)


def _transport_rows(rows: np.ndarray, incl: quiver.Morphism, vertex: str, p: int) -> np.ndarray:
    """Rows in child coordinates -> rows in parent coordinates."""
    return (rows @ incl.blocks[vertex].T) % p


def torsion_part(M: Representation, handle: TorsionHandle) -> SubRepresentation:
    """The largest submodule of M lying in the torsion class.

    Ascending trace closure: take the trace of the generator, then keep
    adding the preimage of the trace in the successive quotients until the
    chain stabilizes.
    """
    G = handle.generator
    if M.algebra.key() != G.algebra.key():
        raise MalformedInput("torsion part across different algebras")
    alg = M.algebra
    p = alg.p
    current = quiver.zero_sub(M)
    while True:
        sq = sub_quotient(M, current)
        tr = homs.trace_submodule(G, sq.quot)
        if tr.total_dim == 0:
            return current
        spaces = {}
        for v in alg.vertices:
            spaces[v] = linalg.preimage(sq.proj.blocks[v], tr.spaces[v], p)
        current = SubRepresentation(M, spaces)


def _sub_as_rep(M: Representation, sub: SubRepresentation):
    sq = sub_quotient(M, sub)
    return sq.sub, sq.incl


def perp_part(M: Representation, B: Representation) -> SubRepresentation:
    """The largest submodule of M with no nonzero map to B.

    Descending reject closure: intersect kernels of all maps to B, then
    repeat inside the result until the Hom space vanishes.
    """
    if M.algebra.key() != B.algebra.key():
        raise MalformedInput("perp part across different algebras")
    alg = M.algebra
    p = alg.p
    current = quiver.full_sub(M)
    while current.total_dim > 0:
        rep, incl = _sub_as_rep(M, current)
        if homs.hom_basis(rep, B).dim == 0:
            break
        rej = homs.reject_submodule(rep, B)
        spaces = {
            v: linalg.Subspace.from_rows(
                _transport_rows(rej.spaces[v].basis, incl, v, p), p, M.dims[v]
            )
            for v in alg.vertices
        }
        nxt = SubRepresentation(M, spaces)
        if nxt.total_dim == current.total_dim:
            break
        current = nxt
    return current


def intersection_torsion_part(
    M: Representation, handle: TorsionHandle, B: Representation
) -> SubRepresentation:
    """Largest submodule of M in the torsion class that also avoids B.

    Alternates the two closure operators until a common fixpoint; both
    preserve every submodule lying in the intersection, so the fixpoint is
    the largest such submodule and lies in both classes.
    """
    alg = M.algebra
    p = alg.p
    current = quiver.full_sub(M)
    while True:
        rep, incl = _sub_as_rep(M, current)
        inner = perp_part(rep, B)
        spaces = {
            v: linalg.Subspace.from_rows(
                _transport_rows(inner.spaces[v].basis, incl, v, p), p, M.dims[v]
            )
            for v in alg.vertices
        }
        after_perp = SubRepresentation(M, spaces)
        rep2, incl2 = _sub_as_rep(M, after_perp)
        tors = torsion_part(rep2, handle)
        spaces2 = {
            v: linalg.Subspace.from_rows(
                _transport_rows(tors.spaces[v].basis, incl2, v, p), p, M.dims[v]
            )
            for v in alg.vertices
        }
        after_tors = SubRepresentation(M, spaces2)
        if after_tors.total_dim == current.total_dim:
            return after_tors
        current = after_tors


@dataclass
class FilteredByRecord:
    """Witness tower for a filtration with all factors a fixed brick."""

    module: Representation
    factor: Representation
    verdict: bool
    surjection_coeffs: list[tuple[int, ...]]


def is_filtered_by(
    F: Representation, B: Representation, budget: int = DEFAULT_BUDGET
) -> FilteredByRecord:
    """Does F admit a filtration with every factor isomorphic to B?

    Recursive search over surjections F -> B (exhaustive, in enumeration
    order, with backtracking on the kernels); failures are memoized by
    canonical serialization and a dimension-vector divisibility check
    fast-fails mismatched shapes.
    """
    if F.algebra.key() != B.algebra.key():
        raise MalformedInput("filtration factor over a different algebra")

    memo_hits: dict = _filtered_by_cache

    def search(rep: Representation) -> list[tuple[int, ...]] | None:
        if rep.total_dim == 0:
            return []
        if B.total_dim == 0:
            return None
        key = (rep.key(), B.key())
        if key in memo_hits:
            return memo_hits[key]
        result = None
        if _dims_divisible(rep, B):
            for coeffs, m in homs.iter_elements(homs.hom_basis(rep, B), budget):
                if not coeffs.any() or not m.is_surjective():
                    continue
                tail = search(sub_quotient(rep, m.kernel()).sub)
                if tail is not None:
                    result = [tuple(int(c) for c in coeffs)] + tail
                    break
        memo_hits[key] = result
        return result

    chain = search(F)
    return FilteredByRecord(F, B, chain is not None, chain or [])


def _dims_divisible(F: Representation, B: Representation) -> bool:
    if B.total_dim == 0:
        return False
    ratio = None
    for v in F.algebra.vertices:
        fb, bb = F.dims[v], B.dims[v]
        if bb == 0:
            if fb != 0:
                return False
            continue
        if fb % bb != 0:
            return False
        r = fb // bb
        if ratio is None:
            ratio = r
        elif ratio != r:
            return False
    return ratio is not None and ratio >= 0
