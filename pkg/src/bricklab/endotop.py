"""Radicals of endomorphism algebras, bricks, semibricks and endotops.

The radical of End(M) is computed, by default, by exhaustive element
enumeration: an element lies in the radical exactly when the two-sided
ideal it generates is nilpotent, and that ideal test is pure linear
algebra on the structure constants.  A vectorized elementwise-nilpotency
prefilter discards the bulk of the candidates first (radical elements are
nilpotent, so nothing is lost).

For endomorphism algebras whose element count is large but still within
budget, an equivalent assembly is used instead: decompose the module,
then the radical consists of all maps between non-isomorphic summands
together with the non-invertible maps between isomorphic ones.  The
result is verified on the spot to be a nilpotent two-sided ideal, and the
test suite checks agreement of the two methods and a definition-level
oracle on small algebras.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import homs, linalg, quiver
from .errors import BudgetExceeded, CertificateFailure
from .homs import EndAlgebra, end_algebra, hom_basis
from .linalg import DEFAULT_BUDGET
from .quiver import Morphism, Representation, sub_quotient

_ENUMERATION_LIMIT = 1 << 12

_radical_cache: dict = {}
_brick_cache: dict = {}
_semibrick_cache: dict = {}
_tower_cache: dict = {}
_top_bricks_cache: dict = {}


def clear_caches() -> None:
    for cache in (
        _radical_cache,
        _brick_cache,
        _semibrick_cache,
        _tower_cache,
        _top_bricks_cache,
    ):
        cache.clear()


@dataclass
class RadicalBasis:
    """Basis of rad End(M) in End-basis coordinates (RREF rows)."""

    algebra: EndAlgebra
    basis: np.ndarray
    nilpotency_index: int

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def morphisms(self) -> list[Morphism]:
        return [self.algebra.element_morphism(row) for row in self.basis]


def _square_batch(mult: np.ndarray, p: int, xs: np.ndarray) -> np.ndarray:
    out = np.zeros_like(xs)
    for i in range(mult.shape[0]):
        out += xs[:, i : i + 1] * ((xs @ mult[i]) % p)
        out %= p
    return out


def _pair_products(mult: np.ndarray, p: int, left: np.ndarray, right: np.ndarray) -> np.ndarray:
    out = np.einsum("ai,bj,ijk->abk", left % p, right % p, mult)
    return (out % p).reshape(-1, mult.shape[0])


def _span_rows(rows: np.ndarray, p: int) -> np.ndarray:
    if rows.size == 0:
        return np.zeros((0, rows.shape[1] if rows.ndim == 2 else 0), dtype=np.int64)
    red, rk, _ = linalg.rref(rows, p)
    return red[:rk]


def _ideal_of(mult: np.ndarray, p: int, x: np.ndarray) -> np.ndarray:
    """RREF basis of the two-sided ideal generated by x (unital algebra)."""
    d = mult.shape[0]
    left = np.einsum("ijk,j->ik", mult, x) % p  # rows: b_i · x
    both = np.einsum("ik,kjl->ijl", left, mult) % p  # (b_i · x) · b_j
    return _span_rows(both.reshape(d * d, d), p)


def _subspace_power_nilpotency(mult: np.ndarray, p: int, ideal: np.ndarray):
    """(is_nilpotent, index) for the span-powering of an ideal basis."""
    if ideal.shape[0] == 0:
        return True, 1
    current = ideal
    index = 1
    while True:
        nxt = _span_rows(_pair_products(mult, p, current, ideal), p)
        index += 1
        if nxt.shape[0] == 0:
            return True, index
        if nxt.shape[0] == current.shape[0]:
            return False, index
        current = nxt


def _elementwise_nilpotent_mask(mult: np.ndarray, p: int, block: np.ndarray) -> np.ndarray:
    d = mult.shape[0]
    cur = block % p
    e = 1
    while e < max(d, 1):
        cur = _square_batch(mult, p, cur)
        e *= 2
    return ~cur.any(axis=1)


def _radical_rows_enumeration(E: EndAlgebra, budget: int) -> np.ndarray:
    d, p = E.dim, E.p
    span = np.zeros((0, d), dtype=np.int64)
    total = p**d
    chunk = 1 << 14
    for start in range(0, total, chunk):
        block = linalg.coefficient_block(d, p, start, min(start + chunk, total))
        mask = _elementwise_nilpotent_mask(E.mult, p, block)
        for x in block[mask]:
            if not x.any():
                continue
            if span.size and linalg.solve_in_rowspan(span, x, p) is not None:
                continue
            ideal = _ideal_of(E.mult, p, x)
            nil, _ = _subspace_power_nilpotency(E.mult, p, ideal)
            if nil:
                span = _span_rows(np.vstack([span, x[None, :]]), p)
    return span


def _radical_rows_split(E: EndAlgebra, budget: int) -> np.ndarray:
    """Assemble rad End(M) from a Krull-Schmidt decomposition of M."""
    M = E.module
    p = E.p
    dec = homs.decompose(M, budget)
    parts = dec.summands
    groups: list[int] = []
    reps: list[Representation] = []
    for rep, _, _ in parts:
        for gi, other in enumerate(reps):
            if homs.iso_test(rep, other, budget):
                groups.append(gi)
                break
        else:
            groups.append(len(reps))
            reps.append(rep)
    rows = []
    for si, (rep_s, incl_s, _) in enumerate(parts):
        for ti, (rep_t, _, proj_t) in enumerate(parts):
            hb = hom_basis(rep_t, rep_s)
            if hb.dim == 0:
                continue
            if groups[si] != groups[ti]:
                chosen = [hb.element(row) for row in np.eye(hb.dim, dtype=np.int64)]
            else:
                homs.check_budget(p, hb.dim, budget)
                non_inv = []
                for coeffs, m in homs.iter_elements(hb, budget):
                    if coeffs.any() and not m.is_invertible():
                        non_inv.append(coeffs)
                basis = _span_rows(np.array(non_inv, dtype=np.int64), p) if non_inv else None
                chosen = [hb.element(row) for row in basis] if basis is not None else []
            for f in chosen:
                lifted = incl_s.compose(f).compose(proj_t)
                coords = E.hom.coords(lifted)
                if coords is None:
                    raise CertificateFailure("summand map does not lift into End(M)")
                rows.append(coords)
    if not rows:
        return np.zeros((0, E.dim), dtype=np.int64)
    return _span_rows(np.array(rows, dtype=np.int64), p)


def _assert_nilpotent_ideal(E: EndAlgebra, rows: np.ndarray) -> int:
    """Check the span is a two-sided nilpotent ideal; return the index."""
    p = E.p
    if rows.shape[0]:
        eye = np.eye(E.dim, dtype=np.int64)
        for products in (
            _pair_products(E.mult, p, eye, rows),
            _pair_products(E.mult, p, rows, eye),
        ):
            for prod in products:
                if linalg.solve_in_rowspan(rows, prod, p) is None:
                    raise CertificateFailure("radical candidate is not an ideal")
    nil, index = _subspace_power_nilpotency(E.mult, p, rows)
    if not nil:
        raise CertificateFailure("radical candidate is not nilpotent")
    return index


def radical(E: EndAlgebra, budget: int = DEFAULT_BUDGET) -> RadicalBasis:
    """rad E = elements generating a nilpotent two-sided ideal."""
    key = E.module.key()
    cached = _radical_cache.get(key)
    if cached is not None:
        return cached
    d, p = E.dim, E.p
    if p**d > budget:
        raise BudgetExceeded(f"radical of a {d}-dimensional algebra over F_{p}")
    if d == 0:
        result = RadicalBasis(E, np.zeros((0, 0), dtype=np.int64), 1)
    else:
        if p**d <= _ENUMERATION_LIMIT:
            rows = _radical_rows_enumeration(E, budget)
        else:
            rows = _radical_rows_split(E, budget)
        index = _assert_nilpotent_ideal(E, rows)
        result = RadicalBasis(E, rows, index)
    _radical_cache[key] = result
    return result


def quotient_constants(E: EndAlgebra, ideal_rows: np.ndarray):
    """Structure constants of E modulo an ideal, on the free coordinates.

    Returns (mult, unit, projection, section) with the projection mapping
    E-coordinates onto the quotient coordinates.
    """
    p = E.p
    sub = linalg.Subspace.from_rows(ideal_rows, p, ambient_dim=E.dim) if ideal_rows.size else linalg.Subspace.zero(E.dim)
    proj = linalg.quotient_projection(sub, p)
    sec = linalg.complement_section(sub, p)
    q = proj.shape[0]
    mult = np.zeros((q, q, q), dtype=np.int64)
    for i in range(q):
        for j in range(q):
            prod = E.multiply(sec[:, i], sec[:, j])
            mult[i, j] = (proj @ prod) % p
    unit = (proj @ E.unit) % p
    return mult, unit, proj, sec


def radical_rows_of_constants(mult: np.ndarray, p: int, budget: int = DEFAULT_BUDGET) -> np.ndarray:
    """Enumeration radical on bare structure constants (no module attached)."""
    d = mult.shape[0]
    if p**d > budget:
        raise BudgetExceeded(f"radical of a {d}-dimensional algebra over F_{p}")
    span = np.zeros((0, d), dtype=np.int64)
    total = p**d
    chunk = 1 << 14
    for start in range(0, total, chunk):
        block = linalg.coefficient_block(d, p, start, min(start + chunk, total))
        mask = _elementwise_nilpotent_mask(mult, p, block)
        for x in block[mask]:
            if not x.any():
                continue
            if span.size and linalg.solve_in_rowspan(span, x, p) is not None:
                continue
            nil, _ = _subspace_power_nilpotency(mult, p, _ideal_of(mult, p, x))
            if nil:
                span = _span_rows(np.vstack([span, x[None, :]]), p)
    return span


def is_brick(M: Representation, budget: int = DEFAULT_BUDGET) -> bool:
    """True iff M is nonzero and every nonzero endomorphism is invertible."""
    if M.total_dim == 0:
        return False
    key = M.key()
    cached = _brick_cache.get(key)
    if cached is None:
        cached = True
        for coeffs, m in homs.iter_elements(hom_basis(M, M), budget):
            if coeffs.any() and not m.is_invertible():
                cached = False
                break
        _brick_cache[key] = cached
    return cached


def is_semibrick(M: Representation, budget: int = DEFAULT_BUDGET) -> bool:
    """True iff End(M) is semisimple (zero radical).

    This is the stabilization criterion for the endotop iteration; for
    basic modules it agrees with "direct sum of pairwise orthogonal
    bricks", and the equivalence with the decomposition-level reading is
    cross-checked in the test suite.
    """
    key = M.key()
    cached = _semibrick_cache.get(key)
    if cached is None:
        cached = radical(end_algebra(M), budget).dim == 0
        _semibrick_cache[key] = cached
    return cached


def endotop(M: Representation, budget: int = DEFAULT_BUDGET) -> tuple[Representation, Morphism]:
    """M modulo the radical of its endomorphism algebra acting on it.

    The acting submodule is the sum of the images of a radical basis
    (images of spans lie in sums of images, so a basis suffices).
    """
    rad = radical(end_algebra(M), budget)
    alg = M.algebra
    p = alg.p
    spaces = {v: linalg.Subspace.zero(M.dims[v]) for v in alg.vertices}
    for f in rad.morphisms():
        img = f.image()
        spaces = {
            v: linalg.subspace_sum(spaces[v], img.spaces[v], p) for v in alg.vertices
        }
    sq = sub_quotient(M, quiver.SubRepresentation(M, spaces))
    return sq.quot, sq.proj


@dataclass
class EndotopTower:
    """Iterated endotops of a module until the endomorphism ring is semisimple."""

    stages: list[tuple[Representation, Morphism | None]]

    @property
    def limit_index(self) -> int:
        return len(self.stages) - 1

    @property
    def limit(self) -> Representation:
        return self.stages[-1][0]

    def limit_map(self) -> Morphism:
        """The composite surjection from stage 0 onto the limit."""
        total = quiver.identity_morphism(self.stages[0][0])
        for _, surj in self.stages[1:]:
            total = surj.compose(total)
        return total


def endotop_tower(M: Representation, budget: int = DEFAULT_BUDGET) -> EndotopTower:
    key = M.key()
    cached = _tower_cache.get(key)
    if cached is not None:
        return cached
    stages: list[tuple[Representation, Morphism | None]] = [(M, None)]
    current = M
    while not is_semibrick(current, budget):
        nxt, surj = endotop(current, budget)
        if nxt.total_dim >= current.total_dim:
            raise CertificateFailure("endotop failed to decrease the dimension")
        stages.append((nxt, surj))
        current = nxt
    tower = EndotopTower(stages)
    _tower_cache[key] = tower
    return tower


@dataclass
class TopBrickSet:
    """Pairwise non-isomorphic top bricks of a module, with multiplicities."""

    module: Representation
    bricks: list[tuple[Representation, int]]

    def distinct(self) -> list[Representation]:
        return [b for b, _ in self.bricks]


def top_bricks(M: Representation, budget: int = DEFAULT_BUDGET) -> TopBrickSet:
    """Indecomposable summands of the stabilized endotop, up to isomorphism."""
    key = M.key()
    cached = _top_bricks_cache.get(key)
    if cached is not None:
        return cached
    limit = endotop_tower(M, budget).limit
    dec = homs.decompose(limit, budget)
    distinct: list[Representation] = []
    counts: list[int] = []
    for rep, _, _ in dec.summands:
        for i, other in enumerate(distinct):
            if homs.iso_test(rep, other, budget):
                counts[i] += 1
                break
        else:
            distinct.append(rep)
            counts.append(1)
    for rep in distinct:
        if not is_brick(rep, budget):
            raise CertificateFailure("stabilized endotop has a non-brick summand")
    for i, a in enumerate(distinct):
        for j, b in enumerate(distinct):
            if i != j and homs.hom_dim(a, b) != 0:
                raise CertificateFailure("distinct top bricks are not orthogonal")
    result = TopBrickSet(M, list(zip(distinct, counts)))
    _top_bricks_cache[key] = result
    return result
