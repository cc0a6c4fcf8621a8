"""Exact linear algebra over prime fields F_p.

Matrices are dense numpy integer arrays with entries reduced mod p, acting
on column vectors.  Subspaces of F_p^n are stored by their reduced row
echelon basis with zero rows dropped, so two equal subspaces have
bit-identical encodings and can be compared and hashed directly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import MalformedInput

DEFAULT_BUDGET = 1 << 20


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class PrimeField:
    """The prime field F_p; p is verified prime at construction."""

    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise MalformedInput(f"field modulus must be prime, got {self.p!r}")

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("inverting 0 in a prime field")
        return pow(a, self.p - 2, self.p)


def as_matrix(data, p: int) -> np.ndarray:
    """Coerce to a 2-d int64 array with entries reduced mod p."""
    m = np.asarray(data, dtype=np.int64)
    if m.ndim != 2:
        raise MalformedInput(f"expected a 2-d matrix, got shape {m.shape}")
    return m % p


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def mat_mul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    return (a @ b) % p


def mat_pow(a: np.ndarray, k: int, p: int) -> np.ndarray:
    """a**k mod p by repeated squaring (a square)."""
    result = identity(a.shape[0])
    base = a % p
    while k > 0:
        if k & 1:
            result = (result @ base) % p
        base = (base @ base) % p
        k >>= 1
    return result


def rref(mat: np.ndarray, p: int) -> tuple[np.ndarray, int, tuple[int, ...]]:
    """Reduced row echelon form.

    Returns (R, rank, pivot_columns); R has the same shape as the input
    and rref is idempotent.
    """
    m = np.array(mat, dtype=np.int64) % p
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            m[[r, pr]] = m[[pr, r]]
        inv = pow(int(m[r, c]), p - 2, p)
        m[r] = (m[r] * inv) % p
        col = m[:, c].copy()
        col[r] = 0
        m = (m - np.outer(col, m[r])) % p
        pivots.append(c)
        r += 1
    return m, r, tuple(pivots)


def rank(mat: np.ndarray, p: int) -> int:
    return rref(mat, p)[1]


def inverse(mat: np.ndarray, p: int) -> np.ndarray:
    """Inverse of a square matrix mod p; raises MalformedInput if singular."""
    n = mat.shape[0]
    if mat.shape != (n, n):
        raise MalformedInput("inverse of a non-square matrix")
    aug = np.hstack([mat % p, identity(n)])
    red, rk, _ = rref(aug, p)
    if rk < n or not np.array_equal(red[:, :n], identity(n)):
        raise MalformedInput("matrix is singular")
    return red[:, n:]


def is_invertible(mat: np.ndarray, p: int) -> bool:
    n, m = mat.shape
    return n == m and rank(mat, p) == n


def is_nilpotent(mat: np.ndarray, p: int) -> bool:
    """Nilpotency of a square matrix: x^n = 0 with n the matrix size."""
    n = mat.shape[0]
    if n == 0:
        return True
    power = mat % p
    e = 1
    while e < n:
        power = (power @ power) % p
        e *= 2
    return not power.any()


@dataclass(frozen=True)
class Subspace:
    """A subspace of F_p^n given by its RREF row basis (no zero rows)."""

    ambient_dim: int
    basis: np.ndarray

    def __post_init__(self):
        self.basis.setflags(write=False)

    @classmethod
    def from_rows(cls, rows, p: int, ambient_dim: int | None = None) -> "Subspace":
        m = np.asarray(rows, dtype=np.int64)
        if m.size == 0:
            if ambient_dim is None:
                raise MalformedInput("ambient dimension needed for an empty row list")
            return cls.zero(ambient_dim)
        if m.ndim != 2:
            raise MalformedInput(f"expected rows as a 2-d array, got shape {m.shape}")
        if ambient_dim is not None and m.shape[1] != ambient_dim:
            raise MalformedInput("row length does not match the ambient dimension")
        red, rk, _ = rref(m % p, p)
        return cls(m.shape[1], np.ascontiguousarray(red[:rk]))

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, zeros(0, ambient_dim))

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, identity(ambient_dim))

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def is_zero(self) -> bool:
        return self.dim == 0

    def is_full(self) -> bool:
        return self.dim == self.ambient_dim

    def key(self) -> tuple:
        return (self.ambient_dim, self.basis.shape[0], self.basis.tobytes())

    def __eq__(self, other) -> bool:
        return isinstance(other, Subspace) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def reduce_vector(self, vec: np.ndarray, p: int) -> np.ndarray:
        """Canonical representative of vec modulo this subspace."""
        v = np.asarray(vec, dtype=np.int64) % p
        for row, c in zip(self.basis, pivot_columns(self)):
            v = (v - v[c] * row) % p
        return v

    def contains(self, vec: np.ndarray, p: int) -> bool:
        return not self.reduce_vector(vec, p).any()

    def contains_space(self, other: "Subspace", p: int) -> bool:
        return all(self.contains(row, p) for row in other.basis)


def pivot_columns(sub: Subspace) -> tuple[int, ...]:
    cols = []
    for row in sub.basis:
        nz = np.nonzero(row)[0]
        cols.append(int(nz[0]))
    return tuple(cols)


def subspace_sum(a: Subspace, b: Subspace, p: int) -> Subspace:
    if a.ambient_dim != b.ambient_dim:
        raise MalformedInput("subspace sum across different ambient spaces")
    return Subspace.from_rows(
        np.vstack([a.basis, b.basis]), p, ambient_dim=a.ambient_dim
    )


def subspace_intersect(a: Subspace, b: Subspace, p: int) -> Subspace:
    """Intersection via the kernel of the stacked coefficient system."""
    if a.ambient_dim != b.ambient_dim:
        raise MalformedInput("subspace intersection across different ambient spaces")
    if a.dim == 0 or b.dim == 0:
        return Subspace.zero(a.ambient_dim)
    # Solve x·A = y·B: kernel of [A^T | -B^T] on the (x, y) coordinates.
    system = np.hstack([a.basis.T, (-(b.basis.T)) % p])
    ker = kernel(system, p)
    rows = (ker.basis[:, : a.dim] @ a.basis) % p
    return Subspace.from_rows(rows, p, ambient_dim=a.ambient_dim)


def kernel(mat: np.ndarray, p: int) -> Subspace:
    """Kernel {v : mat·v = 0} of a matrix acting on column vectors."""
    m = np.asarray(mat, dtype=np.int64) % p
    rows, cols = m.shape
    red, rk, pivots = rref(m, p)
    free = [c for c in range(cols) if c not in set(pivots)]
    if not free:
        return Subspace.zero(cols)
    vecs = zeros(len(free), cols)
    for i, f in enumerate(free):
        vecs[i, f] = 1
        for j, c in enumerate(pivots):
            vecs[i, c] = (-red[j, f]) % p
    return Subspace.from_rows(vecs, p, ambient_dim=cols)


def image(mat: np.ndarray, p: int) -> Subspace:
    """Column space of a matrix, as a subspace of the target."""
    return Subspace.from_rows(mat.T % p, p, ambient_dim=mat.shape[0])


def quotient_projection(sub: Subspace, p: int) -> np.ndarray:
    """Surjection F_p^n -> F_p^(n-r) whose kernel is exactly `sub`.

    The map sends v to the non-pivot coordinates of the canonical
    representative of v modulo the subspace.
    """
    n = sub.ambient_dim
    pivots = pivot_columns(sub)
    free = [c for c in range(n) if c not in set(pivots)]
    proj = zeros(len(free), n)
    for j, c in enumerate(free):
        proj[j, c] = 1
        for k, pc in enumerate(pivots):
            proj[j, pc] = (-sub.basis[k, c]) % p
    return proj


def complement_section(sub: Subspace, p: int) -> np.ndarray:
    """Right inverse of quotient_projection: columns are the free unit vectors."""
    n = sub.ambient_dim
    pivots = set(pivot_columns(sub))
    free = [c for c in range(n) if c not in pivots]
    sec = zeros(n, len(free))
    for j, c in enumerate(free):
        sec[c, j] = 1
    return sec


def preimage(mat: np.ndarray, target: Subspace, p: int) -> Subspace:
    """{x : mat·x in target}, a subspace of the source."""
    if mat.shape[0] != target.ambient_dim:
        raise MalformedInput("preimage target lives in the wrong ambient space")
    proj = quotient_projection(target, p)
    return kernel((proj @ mat) % p, p)


def solve_in_rowspan(basis_rref: np.ndarray, vec: np.ndarray, p: int):
    """Coordinates of vec in an RREF row basis, or None if outside the span."""
    v = np.asarray(vec, dtype=np.int64) % p
    coords = np.zeros(basis_rref.shape[0], dtype=np.int64)
    for i, row in enumerate(basis_rref):
        c = int(np.nonzero(row)[0][0])
        coords[i] = v[c]
        v = (v - v[c] * row) % p
    if v.any():
        return None
    return coords


def rref_coords(basis: np.ndarray, pivots: tuple[int, ...], vec: np.ndarray, p: int):
    """Coordinates of vec in an RREF basis with known pivots, or None.

    For an RREF basis the coordinate vector is just vec at the pivot
    columns; only the residual needs checking.
    """
    v = np.asarray(vec, dtype=np.int64) % p
    coords = v[list(pivots)] if pivots else np.zeros(0, dtype=np.int64)
    residual = (v - coords @ basis) % p if basis.size else v
    if residual.any():
        return None
    return coords


def coefficient_block(dim: int, p: int, start: int, stop: int) -> np.ndarray:
    """Rows start..stop-1 of the lexicographic list of F_p^dim vectors.

    Row for integer t is the base-p expansion of t, most significant digit
    first, so ascending t is ascending lexicographic order.
    """
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.empty((idx.size, dim), dtype=np.int64)
    for k in range(dim - 1, -1, -1):
        out[:, k] = idx % p
        idx = idx // p
    return out


def all_vectors(dim: int, p: int):
    """All of F_p^dim in lexicographic order, as an iterator of arrays."""
    total = p**dim
    chunk = 1 << 14
    for start in range(0, total, chunk):
        block = coefficient_block(dim, p, start, min(start + chunk, total))
        for row in block:
            yield row


def all_subspaces(ambient_dim: int, p: int) -> list[Subspace]:
    """Every subspace of F_p^n, built by closing under one-vector extensions."""
    zero = Subspace.zero(ambient_dim)
    found = {zero.key(): zero}
    frontier = [zero]
    vectors = [v for v in all_vectors(ambient_dim, p) if v.any()]
    while frontier:
        new_frontier = []
        for sub in frontier:
            for v in vectors:
                if sub.contains(v, p):
                    continue
                bigger = Subspace.from_rows(
                    np.vstack([sub.basis, v[None, :]]), p, ambient_dim
                )
                if bigger.key() not in found:
                    found[bigger.key()] = bigger
                    new_frontier.append(bigger)
        frontier = new_frontier
    return sorted(found.values(), key=lambda s: (s.dim, s.key()))
