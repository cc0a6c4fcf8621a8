"""Quivers with relations and their finite-dimensional representations.

An algebra is presented by a quiver and a list of relations (linear
combinations of composable paths); the path algebra itself is never
materialized, only relation evaluation on representations is needed.
A representation assigns a vector space dimension to each vertex and a
matrix of shape dims(target) x dims(source) to each arrow; matrices act
on column vectors.  Path convention: the path [a, b] means "apply a
first, then b".
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from . import linalg
from .errors import MalformedInput, NotClosed
from .linalg import Subspace


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str


@dataclass(frozen=True)
class Algebra:
    """A quotient of a path algebra, presented by quiver and relations.

    Relations are tuples of terms (coefficient, path); all paths of one
    relation must be composable and share source and target.
    """

    field: linalg.PrimeField
    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...]
    relations: tuple[tuple[tuple[int, tuple[str, ...]], ...], ...] = ()

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise MalformedInput("duplicate vertex names")
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise MalformedInput("duplicate arrow names")
        vset = set(self.vertices)
        for a in self.arrows:
            if a.source not in vset or a.target not in vset:
                raise MalformedInput(f"arrow {a.name} touches an unknown vertex")
        for rel in self.relations:
            if not rel:
                raise MalformedInput("empty relation")
            endpoints = None
            for coeff, path in rel:
                if not path:
                    raise MalformedInput("empty path in a relation")
                src, tgt = self.path_endpoints(path)
                if endpoints is None:
                    endpoints = (src, tgt)
                elif endpoints != (src, tgt):
                    raise MalformedInput("relation terms with mismatched endpoints")
                if coeff % self.field.p == 0:
                    raise MalformedInput("zero coefficient in a relation term")

    @property
    def p(self) -> int:
        return self.field.p

    def arrow(self, name: str) -> Arrow:
        for a in self.arrows:
            if a.name == name:
                return a
        raise MalformedInput(f"unknown arrow {name!r}")

    def path_endpoints(self, path: Iterable[str]) -> tuple[str, str]:
        """Source and target of a composable path; raises if not composable."""
        steps = [self.arrow(n) for n in path]
        for first, then in zip(steps, steps[1:]):
            if first.target != then.source:
                raise MalformedInput(f"path {list(path)} is not composable")
        return steps[0].source, steps[-1].target

    def opposite(self) -> "Algebra":
        """Opposite quiver: arrows and relation paths reversed."""
        arrows = tuple(Arrow(a.name, a.target, a.source) for a in self.arrows)
        relations = tuple(
            tuple((coeff, tuple(reversed(path))) for coeff, path in rel)
            for rel in self.relations
        )
        return Algebra(self.field, self.vertices, arrows, relations)

    def key(self) -> tuple:
        return (
            self.field.p,
            self.vertices,
            tuple((a.name, a.source, a.target) for a in self.arrows),
            self.relations,
        )


class Representation:
    """A module over the algebra: one space per vertex, one map per arrow."""

    __slots__ = ("algebra", "dims", "maps", "_key")

    def __init__(self, algebra: Algebra, dims: Mapping[str, int], maps: Mapping[str, object]):
        self.algebra = algebra
        p = algebra.p
        full_dims = {}
        for v in algebra.vertices:
            d = int(dims.get(v, 0))
            if d < 0:
                raise MalformedInput(f"negative dimension at vertex {v!r}")
            full_dims[v] = d
        for v in dims:
            if v not in full_dims:
                raise MalformedInput(f"dimension given for unknown vertex {v!r}")
        self.dims = full_dims
        full_maps = {}
        for name in maps:
            algebra.arrow(name)  # raises on unknown arrows
        for a in algebra.arrows:
            shape = (full_dims[a.target], full_dims[a.source])
            raw = maps.get(a.name)
            if raw is None:
                mat = linalg.zeros(*shape)
            else:
                mat = np.asarray(raw, dtype=np.int64)
                if mat.size == 0:
                    mat = mat.reshape(shape) if 0 in shape else mat
                if mat.ndim != 2 or mat.shape != shape:
                    raise MalformedInput(
                        f"map for arrow {a.name!r} has shape "
                        f"{mat.shape}, expected {shape}"
                    )
                mat = mat % p
            mat.setflags(write=False)
            full_maps[a.name] = mat
        self.maps = full_maps
        self._key = None

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    @property
    def dim_vector(self) -> tuple[int, ...]:
        return tuple(self.dims[v] for v in self.algebra.vertices)

    def map(self, arrow_name: str) -> np.ndarray:
        return self.maps[arrow_name]

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def key(self) -> tuple:
        if self._key is None:
            self._key = (
                self.algebra.key(),
                self.dim_vector,
                tuple(self.maps[a.name].tobytes() for a in self.algebra.arrows),
            )
        return self._key

    def __eq__(self, other) -> bool:
        return isinstance(other, Representation) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        dims = ",".join(f"{v}:{d}" for v, d in self.dims.items())
        return f"Representation({dims})"


def zero_rep(algebra: Algebra) -> Representation:
    return Representation(algebra, {}, {})


def simple(algebra: Algebra, vertex: str) -> Representation:
    if vertex not in algebra.vertices:
        raise MalformedInput(f"unknown vertex {vertex!r}")
    return Representation(algebra, {vertex: 1}, {})


def path_matrix(rep: Representation, path: Iterable[str]) -> np.ndarray:
    """Matrix of a composable path acting on rep ("apply first arrow first")."""
    alg = rep.algebra
    src, _ = alg.path_endpoints(path)
    mat = linalg.identity(rep.dims[src])
    for name in path:
        mat = (rep.maps[name] @ mat) % alg.p
    return mat


def validate(algebra: Algebra, rep: Representation) -> list[dict]:
    """Check shape conformity and relation vanishing.

    Raises MalformedInput when rep does not even have the right shape for
    the algebra; otherwise returns the list of violated relations (empty
    for a valid representation).
    """
    if rep.algebra.key() != algebra.key():
        raise MalformedInput("representation belongs to a different algebra")
    for a in algebra.arrows:
        expected = (rep.dims[a.target], rep.dims[a.source])
        if rep.maps[a.name].shape != expected:
            raise MalformedInput(
                f"map for arrow {a.name!r} has shape {rep.maps[a.name].shape},"
                f" expected {expected}"
            )
    violations = []
    for i, rel in enumerate(algebra.relations):
        src, tgt = algebra.path_endpoints(rel[0][1])
        total = linalg.zeros(rep.dims[tgt], rep.dims[src])
        for coeff, path in rel:
            total = (total + coeff * path_matrix(rep, path)) % algebra.p
        if total.any():
            violations.append({"relation": i, "matrix": total.tolist()})
    return violations


class Morphism:
    """An intertwiner between two representations of the same algebra."""

    __slots__ = ("source", "target", "blocks")

    def __init__(self, source: Representation, target: Representation, blocks: Mapping[str, object]):
        self.source = source
        self.target = target
        p = source.algebra.p
        full = {}
        for v in source.algebra.vertices:
            shape = (target.dims[v], source.dims[v])
            raw = blocks.get(v)
            if raw is None:
                mat = linalg.zeros(*shape)
            else:
                mat = np.asarray(raw, dtype=np.int64) % p
                if mat.shape != shape:
                    raise MalformedInput(
                        f"morphism block at vertex {v!r} has shape {mat.shape},"
                        f" expected {shape}"
                    )
            mat.setflags(write=False)
            full[v] = mat
        self.blocks = full

    @property
    def p(self) -> int:
        return self.source.algebra.p

    def is_intertwiner(self) -> bool:
        for a in self.source.algebra.arrows:
            lhs = (self.blocks[a.target] @ self.source.maps[a.name]) % self.p
            rhs = (self.target.maps[a.name] @ self.blocks[a.source]) % self.p
            if not np.array_equal(lhs, rhs):
                return False
        return True

    def is_zero(self) -> bool:
        return not any(b.any() for b in self.blocks.values())

    def compose(self, other: "Morphism") -> "Morphism":
        """self after other (other is applied first)."""
        if other.target.key() != self.source.key():
            raise MalformedInput("composition of non-composable morphisms")
        blocks = {
            v: (self.blocks[v] @ other.blocks[v]) % self.p
            for v in self.source.algebra.vertices
        }
        return Morphism(other.source, self.target, blocks)

    def add(self, other: "Morphism") -> "Morphism":
        blocks = {
            v: (self.blocks[v] + other.blocks[v]) % self.p
            for v in self.source.algebra.vertices
        }
        return Morphism(self.source, self.target, blocks)

    def scale(self, c: int) -> "Morphism":
        blocks = {v: (c * b) % self.p for v, b in self.blocks.items()}
        return Morphism(self.source, self.target, blocks)

    def power(self, k: int) -> "Morphism":
        if self.source.key() != self.target.key():
            raise MalformedInput("powers of a non-endomorphism")
        result = identity_morphism(self.source)
        for _ in range(k):
            result = self.compose(result)
        return result

    def image(self) -> "SubRepresentation":
        spaces = {
            v: linalg.image(self.blocks[v], self.p)
            for v in self.source.algebra.vertices
        }
        return SubRepresentation(self.target, spaces)

    def kernel(self) -> "SubRepresentation":
        spaces = {
            v: linalg.kernel(self.blocks[v], self.p)
            for v in self.source.algebra.vertices
        }
        return SubRepresentation(self.source, spaces)

    def is_invertible(self) -> bool:
        return all(
            linalg.is_invertible(self.blocks[v], self.p)
            for v in self.source.algebra.vertices
        )

    def is_surjective(self) -> bool:
        return all(
            linalg.rank(self.blocks[v], self.p) == self.target.dims[v]
            for v in self.source.algebra.vertices
        )

    def is_injective(self) -> bool:
        return all(
            linalg.rank(self.blocks[v], self.p) == self.source.dims[v]
            for v in self.source.algebra.vertices
        )

    def is_nilpotent(self) -> bool:
        if self.source.key() != self.target.key():
            return False
        return all(
            linalg.is_nilpotent(self.blocks[v], self.p)
            for v in self.source.algebra.vertices
        )

    def flatten(self) -> np.ndarray:
        """All block entries as one vector, vertex order then row-major."""
        parts = [self.blocks[v].reshape(-1) for v in self.source.algebra.vertices]
        if not parts:
            return np.zeros(0, dtype=np.int64)
        return np.concatenate(parts)


def identity_morphism(rep: Representation) -> Morphism:
    return Morphism(rep, rep, {v: linalg.identity(rep.dims[v]) for v in rep.algebra.vertices})


def zero_morphism(source: Representation, target: Representation) -> Morphism:
    return Morphism(source, target, {})


def morphism_from_flat(source: Representation, target: Representation, flat: np.ndarray) -> Morphism:
    blocks = {}
    offset = 0
    for v in source.algebra.vertices:
        n, m = target.dims[v], source.dims[v]
        blocks[v] = flat[offset : offset + n * m].reshape(n, m)
        offset += n * m
    return Morphism(source, target, blocks)


class SubRepresentation:
    """An arrow-stable choice of subspaces of a parent representation."""

    __slots__ = ("parent", "spaces", "_key")

    def __init__(self, parent: Representation, spaces: Mapping[str, Subspace]):
        self.parent = parent
        full = {}
        for v in parent.algebra.vertices:
            sub = spaces.get(v)
            if sub is None:
                sub = Subspace.zero(parent.dims[v])
            if sub.ambient_dim != parent.dims[v]:
                raise MalformedInput(
                    f"subspace at vertex {v!r} has ambient {sub.ambient_dim},"
                    f" expected {parent.dims[v]}"
                )
            full[v] = sub
        self.spaces = full
        self._key = None

    @property
    def total_dim(self) -> int:
        return sum(s.dim for s in self.spaces.values())

    @property
    def dim_vector(self) -> tuple[int, ...]:
        return tuple(self.spaces[v].dim for v in self.parent.algebra.vertices)

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def is_full(self) -> bool:
        return self.total_dim == self.parent.total_dim

    def key(self) -> tuple:
        if self._key is None:
            self._key = (
                self.parent.key(),
                tuple(self.spaces[v].key() for v in self.parent.algebra.vertices),
            )
        return self._key

    def __eq__(self, other) -> bool:
        return isinstance(other, SubRepresentation) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def is_arrow_closed(self) -> bool:
        p = self.parent.algebra.p
        for a in self.parent.algebra.arrows:
            src = self.spaces[a.source]
            if src.dim == 0:
                continue
            images = (src.basis @ self.parent.maps[a.name].T) % p
            tgt = self.spaces[a.target]
            if not all(tgt.contains(row, p) for row in images):
                return False
        return True

    def contains(self, other: "SubRepresentation") -> bool:
        p = self.parent.algebra.p
        return all(
            self.spaces[v].contains_space(other.spaces[v], p)
            for v in self.parent.algebra.vertices
        )


def zero_sub(rep: Representation) -> SubRepresentation:
    return SubRepresentation(rep, {})


def full_sub(rep: Representation) -> SubRepresentation:
    return SubRepresentation(
        rep, {v: Subspace.full(rep.dims[v]) for v in rep.algebra.vertices}
    )


def arrow_closure(rep: Representation, spaces: Mapping[str, Subspace]) -> SubRepresentation:
    """Smallest arrow-closed subrepresentation containing the given spaces."""
    p = rep.algebra.p
    current = {
        v: spaces.get(v, Subspace.zero(rep.dims[v])) for v in rep.algebra.vertices
    }
    changed = True
    while changed:
        changed = False
        for a in rep.algebra.arrows:
            src = current[a.source]
            if src.dim == 0:
                continue
            images = (src.basis @ rep.maps[a.name].T) % p
            bigger = linalg.subspace_sum(
                current[a.target],
                Subspace.from_rows(images, p, rep.dims[a.target]),
                p,
            )
            if bigger.dim != current[a.target].dim:
                current[a.target] = bigger
                changed = True
    return SubRepresentation(rep, current)


@dataclass
class SubQuotient:
    sub: Representation
    quot: Representation
    incl: Morphism
    proj: Morphism


def sub_quotient(rep: Representation, sub: SubRepresentation) -> SubQuotient:
    """Materialize a subrepresentation and its quotient with witnesses.

    Bases are canonical (RREF rows for the submodule, free coordinates for
    the quotient), so the result is deterministic in the input.
    """
    if sub.parent.key() != rep.key():
        raise MalformedInput("subrepresentation of a different parent")
    if not sub.is_arrow_closed():
        raise NotClosed("subspaces are not closed under the arrow maps")
    alg = rep.algebra
    p = alg.p
    incl_blocks = {v: sub.spaces[v].basis.T.copy() for v in alg.vertices}
    proj_blocks = {v: linalg.quotient_projection(sub.spaces[v], p) for v in alg.vertices}
    sections = {v: linalg.complement_section(sub.spaces[v], p) for v in alg.vertices}
    sub_dims = {v: sub.spaces[v].dim for v in alg.vertices}
    quot_dims = {v: rep.dims[v] - sub_dims[v] for v in alg.vertices}
    sub_maps = {}
    quot_maps = {}
    for a in alg.arrows:
        m = rep.maps[a.name]
        image_rows = (sub.spaces[a.source].basis @ m.T) % p
        coords = []
        for row in image_rows:
            c = linalg.solve_in_rowspan(sub.spaces[a.target].basis, row, p)
            if c is None:
                raise NotClosed("subspaces are not closed under the arrow maps")
            coords.append(c)
        if coords:
            sub_maps[a.name] = np.array(coords, dtype=np.int64).T
        else:
            sub_maps[a.name] = linalg.zeros(sub_dims[a.target], 0)
        quot_maps[a.name] = (proj_blocks[a.target] @ m @ sections[a.source]) % p
    sub_rep = Representation(alg, sub_dims, sub_maps)
    quot_rep = Representation(alg, quot_dims, quot_maps)
    incl = Morphism(sub_rep, rep, incl_blocks)
    proj = Morphism(rep, quot_rep, proj_blocks)
    return SubQuotient(sub_rep, quot_rep, incl, proj)


def direct_sum(reps: list[Representation]) -> Representation:
    """Block-diagonal direct sum; dimension vectors add."""
    if not reps:
        raise MalformedInput("direct sum of an empty list")
    alg = reps[0].algebra
    for r in reps[1:]:
        if r.algebra.key() != alg.key():
            raise MalformedInput("direct sum across different algebras")
    dims = {v: sum(r.dims[v] for r in reps) for v in alg.vertices}
    maps = {}
    for a in alg.arrows:
        blocks = [r.maps[a.name] for r in reps]
        mat = linalg.zeros(dims[a.target], dims[a.source])
        ro = co = 0
        for b in blocks:
            mat[ro : ro + b.shape[0], co : co + b.shape[1]] = b
            ro += b.shape[0]
            co += b.shape[1]
        maps[a.name] = mat
    return Representation(alg, dims, maps)


def dualize(algebra: Algebra, rep: Representation) -> tuple[Algebra, Representation]:
    """The dual module over the opposite algebra (transposed matrices)."""
    opp = algebra.opposite()
    maps = {a.name: rep.maps[a.name].T for a in algebra.arrows}
    return opp, Representation(opp, dict(rep.dims), maps)


def annihilator(sub: SubRepresentation, dual_rep: Representation | None = None) -> SubRepresentation:
    """The annihilator of a submodule inside the dual module.

    Sends the chain member U of M to the subspace of D M vanishing on U;
    reverses inclusion order, and the dual of the quotient M/U is the
    resulting submodule of D M.
    """
    parent = sub.parent
    p = parent.algebra.p
    if dual_rep is None:
        _, dual_rep = dualize(parent.algebra, parent)
    spaces = {
        v: linalg.kernel(sub.spaces[v].basis, p) for v in parent.algebra.vertices
    }
    return SubRepresentation(dual_rep, spaces)


def all_subreps(rep: Representation) -> list[SubRepresentation]:
    """Every subrepresentation, by exhaustive scan over subspace tuples.

    Desk-scale only: the per-vertex subspace lattices are enumerated in
    full and filtered by arrow closure.
    """
    alg = rep.algebra
    p = alg.p
    per_vertex = [linalg.all_subspaces(rep.dims[v], p) for v in alg.vertices]
    found = []

    def extend(i, chosen):
        if i == len(alg.vertices):
            cand = SubRepresentation(rep, dict(zip(alg.vertices, chosen)))
            if cand.is_arrow_closed():
                found.append(cand)
            return
        for s in per_vertex[i]:
            extend(i + 1, chosen + [s])

    extend(0, [])
    return found


# ---------------------------------------------------------------------------
# JSON interchange (bit-exact canonical form)

def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def algebra_to_payload(algebra: Algebra) -> dict:
    return {
        "field": {"p": algebra.p},
        "vertices": list(algebra.vertices),
        "arrows": [
            {"name": a.name, "from": a.source, "to": a.target} for a in algebra.arrows
        ],
        "relations": [
            {
                "terms": [
                    {"coeff": int(coeff), "path": list(path)} for coeff, path in rel
                ]
            }
            for rel in algebra.relations
        ],
    }


def algebra_from_payload(payload: Mapping) -> Algebra:
    try:
        fld = linalg.PrimeField(int(payload["field"]["p"]))
        vertices = tuple(str(v) for v in payload["vertices"])
        arrows = tuple(
            Arrow(str(a["name"]), str(a["from"]), str(a["to"]))
            for a in payload["arrows"]
        )
        relations = tuple(
            tuple(
                (int(t["coeff"]), tuple(str(s) for s in t["path"]))
                for t in rel["terms"]
            )
            for rel in payload.get("relations", [])
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInput(f"bad algebra payload: {exc}") from exc
    return Algebra(fld, vertices, arrows, relations)


def rep_to_payload(rep: Representation) -> dict:
    return {
        "dims": {v: rep.dims[v] for v in rep.algebra.vertices},
        "maps": {a.name: rep.maps[a.name].tolist() for a in rep.algebra.arrows},
    }


def rep_from_payload(algebra: Algebra, payload: Mapping) -> Representation:
    try:
        dims = {str(v): int(d) for v, d in payload["dims"].items()}
        maps = {str(a): m for a, m in payload.get("maps", {}).items()}
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise MalformedInput(f"bad module payload: {exc}") from exc
    return Representation(algebra, dims, maps)


def subrep_to_payload(sub: SubRepresentation) -> dict:
    return {
        "spaces": {
            v: sub.spaces[v].basis.tolist() for v in sub.parent.algebra.vertices
        }
    }


def subrep_from_payload(rep: Representation, payload: Mapping) -> SubRepresentation:
    p = rep.algebra.p
    try:
        spaces = {}
        for v, rows in payload["spaces"].items():
            spaces[str(v)] = Subspace.from_rows(
                np.array(rows, dtype=np.int64).reshape(len(rows), rep.dims[str(v)])
                if rows
                else np.zeros((0, rep.dims[str(v)]), dtype=np.int64),
                p,
                ambient_dim=rep.dims[str(v)],
            )
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise MalformedInput(f"bad submodule payload: {exc}") from exc
    return SubRepresentation(rep, spaces)
