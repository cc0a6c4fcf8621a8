"""Built-in algebra presentations and standard modules.

The shipped fixture corpus (bit-exact JSON files under ``bricklab/fixtures``)
covers:

* ``a2``    -- the quiver 1 <- 2, no relations;
* ``k2``    -- the Kronecker quiver, two arrows 2 -> 1;
* ``cn2``   -- cyclic quiver 1 <-> 2 with all paths of length 5 equal to zero;
* ``n2``    -- cyclic quiver 1 <-> 2 with all paths of length 3 equal to zero;
* ``node``  -- vertices {1, 2}, arrows a1, a2: 2 -> 1 and c: 1 -> 2, with
  both in-then-out compositions at vertex 1 and the path c then a1 equal to
  zero.  Its injective hull of the vertex-1 simple has socle layers
  1, 2+2, 1 (verified in the test suite before use);
* ``loop2`` -- a loop l at vertex 1, u: 2 -> 1 and d: 1 -> 2, with l·l·l·l,
  l-then-d and u-then-d equal to zero.  It carries the serial family
  ``layered_serial(n)`` whose endotop sheds exactly one socle layer per step.
"""

from __future__ import annotations

import json
from importlib import resources

from . import quiver
from .errors import MalformedInput
from .linalg import PrimeField
from .quiver import Algebra, Arrow, Representation

ALGEBRA_NAMES = ("a2", "k2", "cn2", "n2", "node", "loop2")


def _cycle_relations(length: int) -> tuple:
    """All paths of the given length in the cyclic quiver a: 1->2, b: 2->1."""
    from_1 = tuple("a" if i % 2 == 0 else "b" for i in range(length))
    from_2 = tuple("b" if i % 2 == 0 else "a" for i in range(length))
    return (((1, from_1),), ((1, from_2),))


def algebra(name: str, p: int = 2) -> Algebra:
    fld = PrimeField(p)
    if name == "a2":
        return Algebra(fld, ("1", "2"), (Arrow("a", "2", "1"),))
    if name == "k2":
        return Algebra(fld, ("1", "2"), (Arrow("a", "2", "1"), Arrow("b", "2", "1")))
    if name == "cn2":
        return Algebra(
            fld,
            ("1", "2"),
            (Arrow("a", "1", "2"), Arrow("b", "2", "1")),
            _cycle_relations(5),
        )
    if name == "n2":
        return Algebra(
            fld,
            ("1", "2"),
            (Arrow("a", "1", "2"), Arrow("b", "2", "1")),
            _cycle_relations(3),
        )
    if name == "node":
        return Algebra(
            fld,
            ("1", "2"),
            (Arrow("a1", "2", "1"), Arrow("a2", "2", "1"), Arrow("c", "1", "2")),
            (
                ((1, ("a1", "c")),),
                ((1, ("a2", "c")),),
                ((1, ("c", "a1")),),
            ),
        )
    if name == "loop2":
        return Algebra(
            fld,
            ("1", "2"),
            (Arrow("l", "1", "1"), Arrow("u", "2", "1"), Arrow("d", "1", "2")),
            (
                ((1, ("l", "d")),),
                ((1, ("u", "d")),),
                ((1, ("l", "l", "l", "l")),),
            ),
        )
    raise MalformedInput(f"unknown fixture algebra {name!r}")


def simple(alg: Algebra, vertex: str) -> Representation:
    return quiver.simple(alg, vertex)


def serial(alg: Algebra, socle_vertex: str, length: int) -> Representation:
    """Uniserial module over the cyclic quiver a: 1->2, b: 2->1.

    Basis z_1..z_length with z_1 the socle; composition factors alternate
    starting at socle_vertex, and each arrow shifts one layer down.
    """
    other = "2" if socle_vertex == "1" else "1"
    vertex_of = [socle_vertex if k % 2 == 1 else other for k in range(1, length + 1)]
    positions = {"1": [], "2": []}
    for k, v in enumerate(vertex_of):
        positions[v].append(k)
    local = {k: positions[v].index(k) for k, v in enumerate(vertex_of)}
    dims = {"1": len(positions["1"]), "2": len(positions["2"])}
    mats = {
        "a": [[0] * dims["1"] for _ in range(dims["2"])],
        "b": [[0] * dims["2"] for _ in range(dims["1"])],
    }
    for k in range(1, length):
        src_v = vertex_of[k]
        arrow = "a" if src_v == "1" else "b"
        mats[arrow][local[k - 1]][local[k]] = 1
    return Representation(alg, dims, mats)


def a2_projective(alg: Algebra) -> Representation:
    """P2 over the a2 fixture: top the vertex-2 simple, socle the vertex-1 one."""
    return Representation(alg, {"1": 1, "2": 1}, {"a": [[1]]})


def kronecker_regular(alg: Algebra, lam: int, size: int = 1) -> Representation:
    """Regular Kronecker module: a acts as the identity, b as a Jordan block."""
    p = alg.p
    jordan = [[0] * size for _ in range(size)]
    for i in range(size):
        jordan[i][i] = lam % p
        if i + 1 < size:
            jordan[i][i + 1] = 1
    eye = [[1 if i == j else 0 for j in range(size)] for i in range(size)]
    return Representation(alg, {"1": size, "2": size}, {"a": eye, "b": jordan})


def kronecker_preinjective(alg: Algebra) -> Representation:
    """The dimension (1,2) preinjective Kronecker module."""
    return Representation(alg, {"1": 1, "2": 2}, {"a": [[1, 0]], "b": [[0, 1]]})


def node_injective(alg: Algebra) -> Representation:
    """The vertex-1 injective over the node fixture: socle layers 1, 2+2, 1."""
    return Representation(
        alg,
        {"1": 2, "2": 2},
        {"a1": [[1, 0], [0, 0]], "a2": [[0, 1], [0, 0]], "c": [[0, 0], [0, 1]]},
    )


def layered_serial(alg: Algebra, n: int) -> Representation:
    """Serial module over loop2 with socle layers 1 (n times), then 2, then 1.

    Basis z_1..z_{n+2} with z_1 the socle; z_k sits at vertex 1 except
    z_{n+1} at vertex 2; l shifts z_j to z_{j-1} inside the vertex-1 chain,
    u sends z_{n+1} to z_n, d sends the top z_{n+2} to z_{n+1}.
    """
    if not 0 <= n <= 4:
        raise MalformedInput("layered_serial supports 0 <= n <= 4")
    d1 = n + 1
    l_mat = [[0] * d1 for _ in range(d1)]
    for j in range(2, n + 1):
        l_mat[j - 2][j - 1] = 1
    u_mat = [[0] for _ in range(d1)]
    if n >= 1:
        u_mat[n - 1][0] = 1
    d_mat = [[0] * d1]
    d_mat[0][n] = 1
    return Representation(alg, {"1": d1, "2": 1}, {"l": l_mat, "u": u_mat, "d": d_mat})


def module(name: str, p: int = 2) -> Representation:
    """Named standard modules used across the tests and the shipped files."""
    builders = {
        "a2_s1": lambda: simple(algebra("a2", p), "1"),
        "a2_s2": lambda: simple(algebra("a2", p), "2"),
        "a2_p2": lambda: a2_projective(algebra("a2", p)),
        "k2_r0": lambda: kronecker_regular(algebra("k2", p), 0),
        "k2_r1": lambda: kronecker_regular(algebra("k2", p), 1),
        "k2_r1_2": lambda: kronecker_regular(algebra("k2", p), 1, size=2),
        "k2_q2": lambda: kronecker_preinjective(algebra("k2", p)),
        "cn2_s2": lambda: simple(algebra("cn2", p), "2"),
        "cn2_h": lambda: serial(algebra("cn2", p), "1", 2),
        "cn2_m5": lambda: serial(algebra("cn2", p), "2", 5),
        "n2_m3": lambda: serial(algebra("n2", p), "1", 3),
        "node_i1": lambda: node_injective(algebra("node", p)),
        "loop2_m3": lambda: layered_serial(algebra("loop2", p), 3),
    }
    if name not in builders:
        raise MalformedInput(f"unknown fixture module {name!r}")
    return builders[name]()


MODULE_NAMES = (
    "a2_s1",
    "a2_s2",
    "a2_p2",
    "k2_r0",
    "k2_r1",
    "k2_r1_2",
    "k2_q2",
    "cn2_s2",
    "cn2_h",
    "cn2_m5",
    "n2_m3",
    "node_i1",
    "loop2_m3",
)


def fixture_text(filename: str) -> str:
    return (resources.files("bricklab") / "fixtures" / filename).read_text()


def write_fixture_files(directory) -> None:
    """Regenerate the shipped JSON corpus (canonical serializations, p = 2)."""
    from pathlib import Path

    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for name in ALGEBRA_NAMES:
        payload = quiver.algebra_to_payload(algebra(name))
        (directory / f"{name}.json").write_text(quiver.canonical_json(payload) + "\n")
    for name in MODULE_NAMES:
        payload = quiver.rep_to_payload(module(name))
        (directory / f"{name}.json").write_text(quiver.canonical_json(payload) + "\n")


def load_algebra_file(path) -> Algebra:
    try:
        payload = json.loads(open(path).read())
    except (OSError, json.JSONDecodeError) as exc:
        raise MalformedInput(f"cannot read algebra file {path}: {exc}") from exc
    return quiver.algebra_from_payload(payload)


def load_module_file(alg: Algebra, path) -> Representation:
    try:
        payload = json.loads(open(path).read())
    except (OSError, json.JSONDecodeError) as exc:
        raise MalformedInput(f"cannot read module file {path}: {exc}") from exc
    return quiver.rep_from_payload(alg, payload)
