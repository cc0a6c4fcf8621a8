"""Hom spaces, endomorphism algebras and exact module decomposition.

The intertwining conditions per arrow form one linear system over F_p whose
kernel is the Hom space; everything downstream (endomorphism structure
constants, trace and reject submodules, deterministic element searches,
Fitting splits and Krull-Schmidt decomposition) is built on that kernel.

Element searches enumerate all p^dim coefficient vectors of a Hom basis in
lexicographic order (most significant coefficient first), so every answer
is reproducible; budgets guard the enumeration size.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg, quiver
from .errors import BadWitness, BudgetExceeded, MalformedInput
from .linalg import DEFAULT_BUDGET
from .quiver import Morphism, Representation, SubRepresentation

_hom_cache: dict = {}
_end_cache: dict = {}
_decomp_cache: dict = {}
_iso_cache: dict = {}
_indec_cache: dict = {}


def clear_caches() -> None:
    for cache in (_hom_cache, _end_cache, _decomp_cache, _iso_cache, _indec_cache):
        cache.clear()


@dataclass
class HomBasis:
    """Basis of the intertwiner space Hom(source, target).

    ``flat`` holds the basis as RREF rows of flattened morphisms (vertex
    order, then row-major), so coordinates of any intertwiner are read off
    at the pivot columns.
    """

    source: Representation
    target: Representation
    morphisms: list[Morphism]
    flat: np.ndarray
    pivots: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.morphisms)

    def element(self, coeffs) -> Morphism:
        c = np.asarray(coeffs, dtype=np.int64) % self.source.algebra.p
        if c.shape != (self.dim,):
            raise MalformedInput("coefficient vector has the wrong length")
        flat = (c @ self.flat) % self.source.algebra.p if self.dim else self._zero_flat()
        return quiver.morphism_from_flat(self.source, self.target, flat)

    def _zero_flat(self) -> np.ndarray:
        return np.zeros(self.flat.shape[1], dtype=np.int64)

    def coords(self, morphism: Morphism):
        return linalg.rref_coords(
            self.flat, self.pivots, morphism.flatten(), self.source.algebra.p
        )


def hom_basis(M: Representation, N: Representation) -> HomBasis:
    """Solve the intertwining system; the kernel basis is canonical."""
    key = (M.key(), N.key())
    cached = _hom_cache.get(key)
    if cached is not None:
        return cached
    alg = M.algebra
    if alg.key() != N.algebra.key():
        raise MalformedInput("hom between modules over different algebras")
    p = alg.p
    offsets = {}
    total = 0
    for v in alg.vertices:
        offsets[v] = total
        total += N.dims[v] * M.dims[v]
    rows = []
    for a in alg.arrows:
        ma, na = M.maps[a.name], N.maps[a.name]
        n_t, m_s = N.dims[a.target], M.dims[a.source]
        if n_t * m_s == 0:
            continue
        block = np.zeros((n_t * m_s, total), dtype=np.int64)
        sl_t = slice(offsets[a.target], offsets[a.target] + N.dims[a.target] * M.dims[a.target])
        sl_s = slice(offsets[a.source], offsets[a.source] + N.dims[a.source] * M.dims[a.source])
        block[:, sl_t] += np.kron(linalg.identity(n_t), ma.T)
        block[:, sl_s] -= np.kron(na, linalg.identity(m_s))
        rows.append(block % p)
    system = np.vstack(rows) if rows else np.zeros((0, total), dtype=np.int64)
    ker = linalg.kernel(system, p)
    morphisms = [quiver.morphism_from_flat(M, N, row) for row in ker.basis]
    basis = HomBasis(M, N, morphisms, ker.basis, linalg.pivot_columns(ker))
    _hom_cache[key] = basis
    return basis


def hom_dim(M: Representation, N: Representation) -> int:
    return hom_basis(M, N).dim


@dataclass
class EndAlgebra:
    """End(M) with multiplication structure constants.

    mult[i, j, k] is the k-th coordinate of f_i composed after f_j (f_j is
    applied first); unit holds the coordinates of the identity.
    """

    module: Representation
    hom: HomBasis
    mult: np.ndarray
    unit: np.ndarray

    @property
    def dim(self) -> int:
        return self.hom.dim

    @property
    def p(self) -> int:
        return self.module.algebra.p

    def multiply(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return np.einsum("i,j,ijk->k", x % self.p, y % self.p, self.mult) % self.p

    def square_batch(self, xs: np.ndarray) -> np.ndarray:
        """Row-wise x*x for a batch of coordinate vectors."""
        out = np.zeros_like(xs)
        for i in range(self.dim):
            out += xs[:, i : i + 1] * ((xs @ self.mult[i]) % self.p)
            out %= self.p
        return out

    def products(self, left: np.ndarray, right: np.ndarray) -> np.ndarray:
        """All pairwise products of two coordinate row-batches, flattened."""
        out = np.einsum("ai,bj,ijk->abk", left % self.p, right % self.p, self.mult)
        return (out % self.p).reshape(-1, self.dim)

    def element_morphism(self, coords) -> Morphism:
        return self.hom.element(coords)

    def is_nilpotent_element(self, x: np.ndarray) -> bool:
        cur = np.asarray(x, dtype=np.int64) % self.p
        e = 1
        while e < max(self.dim, 1):
            cur = self.square_batch(cur[None, :])[0]
            e *= 2
        return not cur.any()


def end_algebra(M: Representation) -> EndAlgebra:
    key = M.key()
    cached = _end_cache.get(key)
    if cached is not None:
        return cached
    hb = hom_basis(M, M)
    d = hb.dim
    p = M.algebra.p
    mult = np.zeros((d, d, d), dtype=np.int64)
    for i in range(d):
        for j in range(d):
            prod = hb.morphisms[i].compose(hb.morphisms[j])
            coords = hb.coords(prod)
            if coords is None:
                raise MalformedInput("endomorphism composition left the basis span")
            mult[i, j] = coords
    unit = hb.coords(quiver.identity_morphism(M))
    if unit is None:
        raise MalformedInput("identity endomorphism outside the basis span")
    algebra = EndAlgebra(M, hb, mult % p, unit % p)
    _end_cache[key] = algebra
    return algebra


def trace_submodule(M: Representation, N: Representation) -> SubRepresentation:
    """Sum of the images of all maps M -> N (images of a basis suffice)."""
    hb = hom_basis(M, N)
    p = N.algebra.p
    spaces = {}
    for v in N.algebra.vertices:
        blocks = [f.blocks[v].T for f in hb.morphisms]
        if blocks:
            spaces[v] = linalg.Subspace.from_rows(
                np.vstack(blocks), p, ambient_dim=N.dims[v]
            )
        else:
            spaces[v] = linalg.Subspace.zero(N.dims[v])
    return SubRepresentation(N, spaces)


def reject_submodule(M: Representation, B: Representation) -> SubRepresentation:
    """Intersection of the kernels of all maps M -> B."""
    hb = hom_basis(M, B)
    p = M.algebra.p
    spaces = {}
    for v in M.algebra.vertices:
        blocks = [f.blocks[v] for f in hb.morphisms]
        if blocks:
            spaces[v] = linalg.kernel(np.vstack(blocks), p)
        else:
            spaces[v] = linalg.Subspace.full(M.dims[v])
    return SubRepresentation(M, spaces)


PREDICATES = (
    "invertible",
    "surjective",
    "injective",
    "neither-invertible-nor-nilpotent",
)


def _check_predicate(m: Morphism, predicate: str) -> bool:
    if predicate == "invertible":
        return m.is_invertible()
    if predicate == "surjective":
        return m.is_surjective()
    if predicate == "injective":
        return m.is_injective()
    if predicate == "neither-invertible-nor-nilpotent":
        return not m.is_invertible() and not m.is_nilpotent()
    raise MalformedInput(f"unknown predicate {predicate!r}")


def check_budget(p: int, dim: int, budget: int) -> None:
    if p**dim > budget:
        raise BudgetExceeded(f"{p}^{dim} coefficient vectors exceed budget {budget}")


def iter_elements(hb: HomBasis, budget: int = DEFAULT_BUDGET):
    """All elements of the Hom space in lexicographic coefficient order."""
    p = hb.source.algebra.p
    check_budget(p, hb.dim, budget)
    total = p**hb.dim
    chunk = 1 << 12
    for start in range(0, total, chunk):
        coeffs = linalg.coefficient_block(hb.dim, p, start, min(start + chunk, total))
        flats = (coeffs @ hb.flat) % p
        for c, flat in zip(coeffs, flats):
            yield c, quiver.morphism_from_flat(hb.source, hb.target, flat)


def find_element(hb: HomBasis, predicate: str, budget: int = DEFAULT_BUDGET):
    """First element satisfying the predicate in enumeration order, or None."""
    if predicate == "invertible" and hb.source.dim_vector != hb.target.dim_vector:
        return None
    if predicate == "injective":
        if any(
            hb.source.dims[v] > hb.target.dims[v] for v in hb.source.algebra.vertices
        ):
            return None
    if predicate == "surjective":
        if any(
            hb.source.dims[v] < hb.target.dims[v] for v in hb.source.algebra.vertices
        ):
            return None
    for _, m in iter_elements(hb, budget):
        if _check_predicate(m, predicate):
            return m
    return None


def fitting_split(M: Representation, f: Morphism):
    """Split M = ker(f^n) + im(f^n), n = total dimension of M.

    Returns two (representation, inclusion, projection) triples; raises
    BadWitness when f is invertible or nilpotent (nothing to split).
    """
    if f.source.key() != M.key() or f.target.key() != M.key():
        raise MalformedInput("splitting witness is not an endomorphism of M")
    alg = M.algebra
    p = alg.p
    g = f.power(max(M.total_dim, 1))
    ker = g.kernel()
    img = g.image()
    if ker.total_dim == 0:
        raise BadWitness("witness is invertible, kernel part vanishes")
    if img.total_dim == 0:
        raise BadWitness("witness is nilpotent, image part vanishes")
    if ker.total_dim + img.total_dim != M.total_dim:
        raise BadWitness("kernel and image of f^n do not split M")
    pieces = []
    proj_blocks_k, proj_blocks_i = {}, {}
    for v in alg.vertices:
        stacked = np.vstack([ker.spaces[v].basis, img.spaces[v].basis])
        if stacked.shape[0] != M.dims[v]:
            raise BadWitness("kernel and image of f^n do not split M")
        inv = linalg.inverse(stacked.T % p, p) if M.dims[v] else linalg.zeros(0, 0)
        k = ker.spaces[v].dim
        proj_blocks_k[v] = inv[:k]
        proj_blocks_i[v] = inv[k:]
    for part, proj_blocks in ((ker, proj_blocks_k), (img, proj_blocks_i)):
        dims = {v: part.spaces[v].dim for v in alg.vertices}
        incl_blocks = {v: part.spaces[v].basis.T for v in alg.vertices}
        maps = {}
        for a in alg.arrows:
            maps[a.name] = (
                proj_blocks[a.target] @ M.maps[a.name] @ incl_blocks[a.source]
            ) % p
        rep = Representation(alg, dims, maps)
        incl = Morphism(rep, M, incl_blocks)
        proj = Morphism(M, rep, proj_blocks)
        pieces.append((rep, incl, proj))
    return pieces[0], pieces[1]


@dataclass
class Decomposition:
    """Indecomposable summands with inclusion and projection witnesses."""

    module: Representation
    summands: list[tuple[Representation, Morphism, Morphism]]


def _coordinate_components(M: Representation):
    """Partition of the coordinates into arrow-connected components.

    A disconnected coordinate incidence graph splits the module as a
    direct sum along its components; this is a sound (not complete)
    decomposability witness that needs no endomorphism enumeration.
    """
    nodes = [
        (v, i) for v in M.algebra.vertices for i in range(M.dims[v])
    ]
    parent = {n: n for n in nodes}

    def find(n):
        while parent[n] != n:
            parent[n] = parent[parent[n]]
            n = parent[n]
        return n

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    for a in M.algebra.arrows:
        mat = M.maps[a.name]
        for i, j in zip(*np.nonzero(mat)):
            union((a.target, int(i)), (a.source, int(j)))
    groups: dict = {}
    for n in nodes:
        groups.setdefault(find(n), []).append(n)
    return list(groups.values())


def _component_split(M: Representation, component) -> tuple[Representation, Morphism, Morphism]:
    """Restrict M to a set of coordinates closed under all arrows."""
    alg = M.algebra
    chosen = {v: sorted(i for (w, i) in component if w == v) for v in alg.vertices}
    dims = {v: len(chosen[v]) for v in alg.vertices}
    maps = {
        a.name: M.maps[a.name][np.ix_(chosen[a.target], chosen[a.source])]
        for a in alg.arrows
    }
    rep = Representation(alg, dims, maps)
    incl_blocks = {}
    proj_blocks = {}
    for v in alg.vertices:
        incl = linalg.zeros(M.dims[v], dims[v])
        for col, row in enumerate(chosen[v]):
            incl[row, col] = 1
        incl_blocks[v] = incl
        proj_blocks[v] = incl.T
    return rep, Morphism(rep, M, incl_blocks), Morphism(M, rep, proj_blocks)


def is_indecomposable(M: Representation, budget: int = DEFAULT_BUDGET) -> bool:
    if M.total_dim == 0:
        return False
    key = M.key()
    cached = _indec_cache.get(key)
    if cached is None:
        if len(_coordinate_components(M)) > 1:
            cached = False
        else:
            witness = find_element(
                hom_basis(M, M), "neither-invertible-nor-nilpotent", budget
            )
            cached = witness is None
        _indec_cache[key] = cached
    return cached


def decompose(M: Representation, budget: int = DEFAULT_BUDGET) -> Decomposition:
    """Recursive Fitting decomposition into indecomposables, canonical order."""
    key = M.key()
    cached = _decomp_cache.get(key)
    if cached is not None:
        return cached

    def worker(rep, incl, proj, out):
        if rep.total_dim == 0:
            return
        components = _coordinate_components(rep)
        if len(components) > 1:
            for component in components:
                c_rep, c_incl, c_proj = _component_split(rep, component)
                worker(c_rep, incl.compose(c_incl), c_proj.compose(proj), out)
            return
        witness = find_element(
            hom_basis(rep, rep), "neither-invertible-nor-nilpotent", budget
        )
        if witness is None:
            _indec_cache[rep.key()] = True
            out.append((rep, incl, proj))
            return
        (k_rep, k_incl, k_proj), (i_rep, i_incl, i_proj) = fitting_split(rep, witness)
        worker(k_rep, incl.compose(k_incl), k_proj.compose(proj), out)
        worker(i_rep, incl.compose(i_incl), i_proj.compose(proj), out)

    out: list = []
    ident = quiver.identity_morphism(M)
    worker(M, ident, ident, out)
    out.sort(key=lambda item: (item[0].dim_vector, item[0].key()))
    result = Decomposition(M, out)
    _decomp_cache[key] = result
    return result


def iso_test(M: Representation, N: Representation, budget: int = DEFAULT_BUDGET) -> bool:
    """Exact isomorphism test via exhaustive search for an invertible map."""
    if M.dim_vector != N.dim_vector:
        return False
    if M.key() == N.key():
        return True
    key = (M.key(), N.key())
    cached = _iso_cache.get(key)
    if cached is None:
        cached = find_element(hom_basis(M, N), "invertible", budget) is not None
        _iso_cache[key] = cached
        _iso_cache[(N.key(), M.key())] = cached
    return cached
