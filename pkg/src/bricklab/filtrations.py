"""Enumeration and verification of torsional brick chain filtrations.

A filtration 0 = M_0 < M_1 < ... < M_m = M is a brick chain filtration of
type (B_1, ..., B_m) when the B_i are bricks with Hom(B_i, B_j) = 0 for
i < j and each factor M_i/M_{i-1} is filtered entirely by copies of B_i;
it is torsional when each M_{i-1} lies in the torsion class generated by
M_i.  The enumeration recurses on one submodule per top brick B of M: the
largest submodule lying in T(M) while admitting no nonzero map to B.
That the complementary factor is filtered by copies of B is enforced at
runtime on every branch; a failure raises CertificateFailure and would be
a reportable finding, not something to repair silently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import endotop, homs, linalg, quiver
from .errors import CertificateFailure
from .linalg import DEFAULT_BUDGET
from .quiver import Morphism, Representation, SubRepresentation, sub_quotient
from .torsion import (
    FilteredByRecord,
    MembershipCertificate,
    TorsionHandle,
    in_torsion,
    intersection_torsion_part,
    is_filtered_by,
)

_phi_cache: dict = {}
_chain_cache: dict = {}


def clear_caches() -> None:
    _phi_cache.clear()
    _chain_cache.clear()


@dataclass
class BrickChain:
    """Ordered bricks with Hom(B_i, B_j) = 0 for i < j."""

    bricks: list[Representation]

    def check(self, budget: int = DEFAULT_BUDGET) -> str | None:
        """None when valid, otherwise a reason code."""
        for b in self.bricks:
            if not endotop.is_brick(b, budget):
                return "type-not-brick"
        for i in range(len(self.bricks)):
            for j in range(i + 1, len(self.bricks)):
                if homs.hom_dim(self.bricks[i], self.bricks[j]) != 0:
                    return "type-hom-condition"
        return None


@dataclass
class StepCertificate:
    torsionality: MembershipCertificate
    factor: FilteredByRecord


@dataclass
class TorsionalFiltration:
    """A chain of submodule witnesses with its type and step certificates."""

    module: Representation
    chain: list[SubRepresentation]
    chain_type: list[Representation]
    certificates: list[StepCertificate] | None = None

    @property
    def length(self) -> int:
        return len(self.chain) - 1

    def stage_key(self) -> tuple:
        return tuple(stage.key() for stage in self.chain)


@dataclass
class FiltrationCount:
    """phi(M) with the recursion trace that produced it."""

    module: Representation
    count: int
    trace: dict


@dataclass
class VerificationResult:
    ok: bool
    reason: str | None = None


def _transport_sub(
    stage: SubRepresentation, incl: Morphism, parent: Representation
) -> SubRepresentation:
    p = parent.algebra.p
    spaces = {
        v: linalg.Subspace.from_rows(
            (stage.spaces[v].basis @ incl.blocks[v].T) % p, p, parent.dims[v]
        )
        for v in parent.algebra.vertices
    }
    return SubRepresentation(parent, spaces)


def _restrict_sub(
    small: SubRepresentation, big: SubRepresentation, big_rep: Representation
) -> SubRepresentation:
    """Express a nested submodule in the coordinates of the bigger one."""
    p = big_rep.algebra.p
    spaces = {}
    for v in big_rep.algebra.vertices:
        rows = []
        for row in small.spaces[v].basis:
            coords = linalg.solve_in_rowspan(big.spaces[v].basis, row, p)
            if coords is None:
                raise CertificateFailure("chain stages are not nested")
            rows.append(coords)
        spaces[v] = linalg.Subspace.from_rows(
            np.array(rows, dtype=np.int64).reshape(len(rows), big.spaces[v].dim)
            if rows
            else np.zeros((0, big.spaces[v].dim), dtype=np.int64),
            p,
            ambient_dim=big.spaces[v].dim,
        )
    return SubRepresentation(big_rep, spaces)


def _branches(rep: Representation, budget: int):
    """Per top brick B: (B, the recursion submodule, its materialization)."""
    handle = TorsionHandle(rep)
    out = []
    seen = set()
    for brick, _ in endotop.top_bricks(rep, budget).bricks:
        sub = intersection_torsion_part(rep, handle, brick)
        if sub.total_dim >= rep.total_dim:
            raise CertificateFailure("recursion submodule is not proper")
        sq = sub_quotient(rep, sub)
        if not is_filtered_by(sq.quot, brick, budget).verdict:
            raise CertificateFailure(
                "factor of the recursion submodule is not filtered by its top brick"
            )
        if sub.key() in seen:
            raise CertificateFailure("two top bricks produced the same branch")
        seen.add(sub.key())
        out.append((brick, sub, sq))
    return out


def _chains(rep: Representation, budget: int):
    """All torsional brick chain filtrations of rep, as (stages, types)."""
    key = rep.key()
    cached = _chain_cache.get(key)
    if cached is not None:
        return cached
    if rep.total_dim == 0:
        result = [([quiver.zero_sub(rep)], [])]
        _chain_cache[key] = result
        return result
    result = []
    for brick, sub, sq in _branches(rep, budget):
        for sub_stages, sub_types in _chains(sq.sub, budget):
            stages = [_transport_sub(s, sq.incl, rep) for s in sub_stages]
            stages.append(quiver.full_sub(rep))
            result.append((stages, sub_types + [brick]))
    _chain_cache[key] = result
    return result


def _step_certificates(
    module: Representation,
    chain: list[SubRepresentation],
    chain_type: list[Representation],
    budget: int,
) -> list[StepCertificate]:
    certs = []
    for i in range(1, len(chain)):
        stage_rep_sq = sub_quotient(module, chain[i])
        stage_rep = stage_rep_sq.sub
        prev_inside = _restrict_sub(chain[i - 1], chain[i], stage_rep)
        inner_sq = sub_quotient(stage_rep, prev_inside)
        torsionality = in_torsion(inner_sq.sub, TorsionHandle(stage_rep))
        factor = is_filtered_by(inner_sq.quot, chain_type[i - 1], budget)
        certs.append(StepCertificate(torsionality, factor))
        if not torsionality.verdict or not factor.verdict:
            raise CertificateFailure("emitted filtration failed its own certificate")
    return certs


def enumerate_filtrations(
    M: Representation, budget: int = DEFAULT_BUDGET
) -> tuple[list[TorsionalFiltration], FiltrationCount]:
    """All torsional brick chain filtrations of M, each with certificates.

    The emitted count always equals the recursion count phi(M).
    """
    raw = _chains(M, budget)
    filtrations = []
    for stages, types in raw:
        certs = _step_certificates(M, stages, types, budget)
        filtrations.append(TorsionalFiltration(M, stages, types, certs))
    report = count_filtrations(M, budget)
    if report.count != len(filtrations):
        raise CertificateFailure("count recursion disagrees with the enumeration")
    return filtrations, report


def count_filtrations(M: Representation, budget: int = DEFAULT_BUDGET) -> FiltrationCount:
    """phi(M) by the recursion phi(M) = sum over top bricks of phi(M^(i))."""
    trace: dict = {}

    def worker(rep: Representation) -> int:
        key = rep.key()
        if key in _phi_cache:
            node = _phi_cache[key]
            trace.setdefault(node["label"], node)
            return node["count"]
        label = quiver.canonical_json(quiver.rep_to_payload(rep))
        if rep.total_dim == 0:
            node = {"label": label, "count": 1, "branches": []}
        else:
            branches = []
            total = 0
            for brick, sub, sq in _branches(rep, budget):
                child_count = worker(sq.sub)
                branches.append(
                    {
                        "brick": quiver.canonical_json(quiver.rep_to_payload(brick)),
                        "submodule": quiver.canonical_json(
                            quiver.subrep_to_payload(sub)
                        ),
                        "count": child_count,
                    }
                )
                total += child_count
            node = {"label": label, "count": total, "branches": branches}
        _phi_cache[key] = node
        trace[label] = node
        return node["count"]

    count = worker(M)
    return FiltrationCount(M, count, trace)


def verify_filtration(
    filt: TorsionalFiltration, budget: int = DEFAULT_BUDGET
) -> VerificationResult:
    """Re-check a filtration from scratch; accepts hand-written chains."""
    M = filt.module
    chain = filt.chain
    if not chain:
        return VerificationResult(False, "empty-chain")
    if chain[0].total_dim != 0 or not chain[-1].is_full():
        return VerificationResult(False, "chain-endpoints")
    for stage in chain:
        if stage.parent.key() != M.key():
            return VerificationResult(False, "chain-endpoints")
        if not stage.is_arrow_closed():
            return VerificationResult(False, "not-arrow-closed")
    for prev, nxt in zip(chain, chain[1:]):
        if not nxt.contains(prev):
            return VerificationResult(False, "not-nested")
        if nxt.total_dim <= prev.total_dim:
            return VerificationResult(False, "not-strict")
    if len(filt.chain_type) != len(chain) - 1:
        return VerificationResult(False, "type-length")
    reason = BrickChain(filt.chain_type).check(budget)
    if reason is not None:
        return VerificationResult(False, reason)
    for i in range(1, len(chain)):
        stage_rep = sub_quotient(M, chain[i]).sub
        prev_inside = _restrict_sub(chain[i - 1], chain[i], stage_rep)
        inner_sq = sub_quotient(stage_rep, prev_inside)
        if not is_filtered_by(inner_sq.quot, filt.chain_type[i - 1], budget).verdict:
            return VerificationResult(False, "factor-not-uniform")
        if not in_torsion(inner_sq.sub, TorsionHandle(stage_rep)).verdict:
            return VerificationResult(False, "stage-not-torsional")
    return VerificationResult(True)


def dual_filtration(
    filt: TorsionalFiltration, budget: int = DEFAULT_BUDGET
) -> TorsionalFiltration:
    """Transport a filtration through duality.

    Stages map to their annihilators in the dual module (inclusion order
    reverses) and the type dualizes in reversed order.  The brick chain
    conditions on the dual type are asserted; torsionality is NOT, since
    it can genuinely fail for the dual chain.
    """
    alg = filt.module.algebra
    opp, dual_rep = quiver.dualize(alg, filt.module)
    chain = [
        quiver.annihilator(stage, dual_rep) for stage in reversed(filt.chain)
    ]
    chain_type = [
        quiver.dualize(alg, b)[1] for b in reversed(filt.chain_type)
    ]
    reason = BrickChain(chain_type).check(budget)
    if reason is not None:
        raise CertificateFailure(f"dual type is not a brick chain: {reason}")
    return TorsionalFiltration(dual_rep, chain, chain_type, None)


def filtration_to_payload(filt: TorsionalFiltration) -> dict:
    return {
        "module": quiver.rep_to_payload(filt.module),
        "chain": [quiver.subrep_to_payload(stage) for stage in filt.chain],
        "type": [quiver.rep_to_payload(b) for b in filt.chain_type],
    }


def filtration_from_payload(
    algebra: quiver.Algebra, payload: dict
) -> TorsionalFiltration:
    module = quiver.rep_from_payload(algebra, payload["module"])
    chain = [
        quiver.subrep_from_payload(module, stage) for stage in payload["chain"]
    ]
    chain_type = [
        quiver.rep_from_payload(algebra, b) for b in payload.get("type", [])
    ]
    return TorsionalFiltration(module, chain, chain_type, None)
