"""Shared test utilities: corpus sampling and definition-level oracles.

The oracles here deliberately avoid the production code paths they check:
membership is a DFS over the full submodule lattice, the radical oracle is
the quasi-regularity definition with double enumeration, and the
filtration oracle tests every chain of submodules directly against the
filtration invariants instead of using the top-brick recursion.
"""

from __future__ import annotations

import itertools

import numpy as np

from bricklab import endotop, homs, linalg, quiver, torsion
from bricklab.linalg import DEFAULT_BUDGET
from bricklab.quiver import Representation, all_subreps, sub_quotient


def sample_rep(alg, rng, max_total=6, map_tries=200):
    """Random valid representation by rejection sampling.

    Per-vertex dimensions are capped (3 for p = 2, 2 for p >= 3) so every
    endomorphism algebra met along the recursion stays enumerable within
    the default budget.
    """
    p = alg.p
    cap = 3 if p == 2 else 2
    while True:
        dims = {v: rng.randrange(cap + 1) for v in alg.vertices}
        if not 1 <= sum(dims.values()) <= max_total:
            continue
        for _ in range(map_tries):
            maps = {
                a.name: [
                    [rng.randrange(p) for _ in range(dims[a.source])]
                    for _ in range(dims[a.target])
                ]
                for a in alg.arrows
            }
            rep = Representation(alg, dims, maps)
            if not quiver.validate(alg, rep):
                return rep


def random_subspace(ambient, p, rng, rows=None):
    if rows is None:
        rows = rng.randrange(ambient + 1)
    mat = np.array(
        [[rng.randrange(p) for _ in range(ambient)] for _ in range(rows)],
        dtype=np.int64,
    ).reshape(rows, ambient)
    return linalg.Subspace.from_rows(mat, p, ambient_dim=ambient)


def exhaustive_hom_count(M, N):
    """Number of intertwiners by scanning every vertexwise map tuple."""
    alg = M.algebra
    p = alg.p
    shapes = [(v, N.dims[v], M.dims[v]) for v in alg.vertices]
    entries = sum(r * c for _, r, c in shapes)
    count = 0
    for flat in linalg.all_vectors(entries, p):
        blocks = {}
        offset = 0
        for v, r, c in shapes:
            blocks[v] = flat[offset : offset + r * c].reshape(r, c)
            offset += r * c
        if quiver.Morphism(M, N, blocks).is_intertwiner():
            count += 1
    return count


def oracle_in_torsion(N, G, budget=DEFAULT_BUDGET, _memo=None):
    """Does N have a filtration with factors nonzero quotient modules of G?

    Bottom-up DFS over the submodule lattice of N.
    """
    memo = _memo if _memo is not None else {}

    def has_surjection(W):
        return (
            homs.find_element(homs.hom_basis(G, W), "surjective", budget) is not None
        )

    def rec(rep):
        if rep.total_dim == 0:
            return True
        key = (rep.key(), G.key())
        if key in memo:
            return memo[key]
        memo[key] = False
        for sub in all_subreps(rep):
            if sub.total_dim == 0:
                continue
            sq = sub_quotient(rep, sub)
            if has_surjection(sq.sub) and rec(sq.quot):
                memo[key] = True
                break
        return memo[key]

    return rec(N)


def left_mult_matrix(E, z):
    """Matrix of left multiplication by z on E, in basis coordinates."""
    return np.einsum("i,ijk->jk", z % E.p, E.mult).T % E.p


def oracle_radical_rows(E):
    """rad E = {x : 1 - y x is invertible for every y}, double enumeration."""
    d, p = E.dim, E.p
    members = []
    for x in linalg.all_vectors(d, p):
        ok = True
        for y in linalg.all_vectors(d, p):
            z = (E.unit - E.multiply(y, x)) % p
            if not linalg.is_invertible(left_mult_matrix(E, z), p):
                ok = False
                break
        if ok:
            members.append(x)
    rows = np.array(members, dtype=np.int64).reshape(len(members), d)
    red, rk, _ = linalg.rref(rows, p)
    return red[:rk]


def factor_brick_candidates(F, budget=DEFAULT_BUDGET):
    """Distinct bricks B (up to iso) with F filtered entirely by copies of B."""
    candidates = []
    for sub in all_subreps(F):
        quot = sub_quotient(F, sub).quot
        if quot.total_dim == 0:
            continue
        if not endotop.is_brick(quot, budget):
            continue
        if any(homs.iso_test(quot, c, budget) for c in candidates):
            continue
        if torsion.is_filtered_by(F, quot, budget).verdict:
            candidates.append(quot)
    return candidates


def oracle_filtration_set(M, budget=DEFAULT_BUDGET):
    """All torsional brick chain filtrations by brute force over chains.

    Returns a dict mapping stage-key tuples to the list of factor bricks.
    Each chain of submodules is tested directly against the invariants:
    every factor uniformly filtered by a single brick, the type a brick
    chain, every stage torsional in the next.
    """
    if M.total_dim == 0:
        return {(quiver.zero_sub(M).key(),): []}
    subs = all_subreps(M)
    full = quiver.full_sub(M)
    results = {}

    def materialize(stage):
        return sub_quotient(M, stage).sub

    def step_ok(prev, nxt):
        """Brick type of the factor nxt/prev if the step is torsional."""
        stage_rep = materialize(nxt)
        prev_inside = nxt_restrict(prev, nxt, stage_rep)
        inner = sub_quotient(stage_rep, prev_inside)
        if not torsion.in_torsion(inner.sub, torsion.TorsionHandle(stage_rep)).verdict:
            return None
        bricks = factor_brick_candidates(inner.quot, budget)
        assert len(bricks) <= 1, "factor filtered by two non-isomorphic bricks"
        return bricks[0] if bricks else None

    def nxt_restrict(small, big, big_rep):
        p = M.algebra.p
        spaces = {}
        for v in M.algebra.vertices:
            rows = [
                linalg.solve_in_rowspan(big.spaces[v].basis, row, p)
                for row in small.spaces[v].basis
            ]
            spaces[v] = linalg.Subspace.from_rows(
                np.array(rows, dtype=np.int64).reshape(len(rows), big.spaces[v].dim)
                if rows
                else np.zeros((0, big.spaces[v].dim), dtype=np.int64),
                p,
                ambient_dim=big.spaces[v].dim,
            )
        return quiver.SubRepresentation(big_rep, spaces)

    def dfs(chain, types):
        current = chain[-1]
        if current.key() == full.key():
            results[tuple(s.key() for s in chain)] = list(types)
            return
        for cand in subs:
            if cand.total_dim <= current.total_dim or not cand.contains(current):
                continue
            brick = step_ok(current, cand)
            if brick is None:
                continue
            if any(homs.hom_dim(b, brick) != 0 for b in types):
                continue
            dfs(chain + [cand], types + [brick])

    dfs([quiver.zero_sub(M)], [])
    return results
