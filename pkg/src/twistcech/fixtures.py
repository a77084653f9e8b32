"""Built-in groups, actions, nerves and the default verification grid.

The order-8 catalogue groups are constructed independently of the twisted
product (square symmetries as permutations, the literal quaternion table),
so isomorphism tests against built extensions are meaningful.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from .errors import InputError
from .extensions import (
    GammaAction,
    TwistedData,
    check_cocycle,
    check_gamma_action,
    make_twisted_data,
    trivial_action,
)
from .groups import FiniteGroup, cyclic_group, direct_product, permutation_group, validate_group
from .nerves import GammaNerve, Nerve, trivial_gamma_nerve, validate_gamma_nerve, validate_nerve


def _s3() -> FiniteGroup:
    perms = [tuple(p) for p in itertools.permutations(range(3))]
    return permutation_group(perms, label="S3")


def _d4() -> FiniteGroup:
    rot = (1, 2, 3, 0)
    flip = (3, 2, 1, 0)
    elems = {tuple(range(4))}
    frontier = [tuple(range(4))]
    while frontier:
        p = frontier.pop()
        for q in (rot, flip):
            comp = tuple(p[q[i]] for i in range(4))
            if comp not in elems:
                elems.add(comp)
                frontier.append(comp)
    return permutation_group(sorted(elems), label="D4")


def _q8() -> FiniteGroup:
    # elements 2*axis + sign with axes (1, i, j, k); sign 0 -> +, 1 -> -
    table = {"11": "1", "ii": "-1", "jj": "-1", "kk": "-1",
             "ij": "k", "jk": "i", "ki": "j", "ji": "-k", "kj": "-i", "ik": "-j",
             "1i": "i", "1j": "j", "1k": "k", "i1": "i", "j1": "j", "k1": "k"}
    axes = "1ijk"

    def mul(a: int, b: int) -> int:
        ax_a, sg_a = divmod(a, 2)
        ax_b, sg_b = divmod(b, 2)
        prod = table[axes[ax_a] + axes[ax_b]]
        neg = prod.startswith("-")
        ax = axes.index(prod[-1])
        sign = (sg_a + sg_b + (1 if neg else 0)) % 2
        return 2 * ax + sign

    rows = [[mul(a, b) for b in range(8)] for a in range(8)]
    return validate_group(rows, label="Q8")


GROUPS: dict[str, FiniteGroup] = {}
for _n in (2, 3, 4, 8):
    GROUPS[f"C{_n}"] = cyclic_group(_n, label=f"C{_n}")
GROUPS["C1"] = cyclic_group(1, label="C1")
GROUPS["C2xC2"] = direct_product(cyclic_group(2), cyclic_group(2), label="C2xC2")
GROUPS["S3"] = _s3()
GROUPS["D4"] = _d4()
GROUPS["Q8"] = _q8()


def group(name: str) -> FiniteGroup:
    if name not in GROUPS:
        raise InputError(f"unknown built-in group {name!r}")
    return GROUPS[name]


def inversion_action(gamma: FiniteGroup, g: FiniteGroup) -> GammaAction:
    """Each nontrivial element of an order-2 group acts by inversion."""
    if not g.is_abelian():
        raise InputError("inversion is only an automorphism of abelian groups")
    ident = tuple(range(g.order))
    inv = tuple(g.inv)
    tables = tuple(ident if gamma.element_order(t) <= 1 else inv for t in gamma.elements())
    return check_gamma_action(gamma, g, tables)


def q8_swap_action(gamma: FiniteGroup) -> GammaAction:
    """The order-2 outer automorphism of Q8 exchanging i and j (k -> -k)."""
    q8 = GROUPS["Q8"]
    swap = (0, 1, 4, 5, 2, 3, 7, 6)
    ident = tuple(range(8))
    tables = tuple(ident if gamma.element_order(t) <= 1 else swap for t in gamma.elements())
    return check_gamma_action(gamma, q8, tables)


def named_action(name: str, gamma: FiniteGroup, g: FiniteGroup) -> GammaAction:
    if name == "trivial":
        return trivial_action(gamma, g)
    if name == "inversion":
        return inversion_action(gamma, g)
    if name == "q8_swap":
        if g.label != "Q8":
            raise InputError("q8_swap acts on Q8 only")
        return q8_swap_action(gamma)
    raise InputError(f"unknown built-in action {name!r}")


def c_square_table(gamma: FiniteGroup, value: int) -> list[list[int]]:
    """2-cochain with c(t, t) = value at the order-2 element, else identity."""
    n = gamma.order
    table = [[0] * n for _ in range(n)]
    for t in gamma.elements():
        if gamma.element_order(t) == 2:
            table[t][t] = value
    return table


def c_q_data(action: GammaAction) -> TwistedData:
    """The square-element central twist on C4 under an order-2 action."""
    table = c_square_table(action.gamma, 2)
    return TwistedData(action, check_cocycle(action, table))


NERVES: dict[str, Nerve] = {
    "Y_TRI": validate_nerve(3, [(0, 1), (1, 2), (0, 2)]),
    "Y_FILLED_TRI": validate_nerve(3, [(0, 1, 2)]),
    "X_HEX_NERVE": validate_nerve(6, [(i, (i + 1) % 6) for i in range(6)]),
    "X_TWO_TRI_NERVE": validate_nerve(6, [(0, 1, 2), (3, 4, 5)]),
    "X_DODEC_NERVE": validate_nerve(12, [(i, (i + 1) % 12) for i in range(12)]),
    "Y_TET": validate_nerve(4, [(0, 1, 2, 3)]),
}


def nerve(name: str) -> Nerve:
    if name not in NERVES:
        raise InputError(f"unknown built-in nerve {name!r}")
    return NERVES[name]


def _hex_gamma_nerve() -> GammaNerve:
    c2 = GROUPS["C2"]
    shift = tuple((v + 3) % 6 for v in range(6))
    return validate_gamma_nerve(NERVES["X_HEX_NERVE"], c2, (tuple(range(6)), shift), require_free=True)


def _two_tri_gamma_nerve() -> GammaNerve:
    c2 = GROUPS["C2"]
    swap = tuple((v + 3) % 6 for v in range(6))
    return validate_gamma_nerve(NERVES["X_TWO_TRI_NERVE"], c2, (tuple(range(6)), swap), require_free=True)


def _dodec_gamma_nerve() -> GammaNerve:
    c4 = GROUPS["C4"]
    tables = tuple(tuple((v + 3 * t) % 12 for v in range(12)) for t in range(4))
    return validate_gamma_nerve(NERVES["X_DODEC_NERVE"], c4, tables, require_free=True)


GAMMA_NERVES: dict[str, GammaNerve] = {
    "X_HEX": _hex_gamma_nerve(),
    "X_TWO_TRI": _two_tri_gamma_nerve(),
    "X_DODEC": _dodec_gamma_nerve(),
    "Y_TRI_TRIVC2": trivial_gamma_nerve(NERVES["Y_TRI"], GROUPS["C2"]),
}


def gamma_nerve(name: str) -> GammaNerve:
    if name in GAMMA_NERVES:
        return GAMMA_NERVES[name]
    if name in NERVES:
        return trivial_gamma_nerve(NERVES[name], GROUPS["C1"])
    raise InputError(f"unknown built-in space {name!r}")


@dataclass(frozen=True)
class GridInstance:
    name: str
    space_name: str
    data: TwistedData

    @property
    def space(self) -> GammaNerve:
        return gamma_nerve(self.space_name)


def _c2_data(g_name: str, action_name: str, c_name: str) -> Optional[TwistedData]:
    c2 = GROUPS["C2"]
    g = GROUPS[g_name]
    try:
        action = named_action(action_name, c2, g)
    except InputError:
        return None
    if c_name == "trivial":
        return make_twisted_data(action)
    if c_name == "square":
        # the central square twist: C4 -> 2, Q8 -> -1, C2 -> the generator
        value = {"C4": 2, "Q8": 1, "C2": 1}.get(g_name)
        if value is None:
            return None
        try:
            return TwistedData(action, check_cocycle(action, c_square_table(c2, value)))
        except InputError:
            return None
    raise InputError(f"unknown twist name {c_name!r}")


def default_grid() -> list[GridInstance]:
    """The standard verification instances, all desk-scale."""
    out: list[GridInstance] = []
    c1 = GROUPS["C1"]
    for g_name in ("C2", "C4", "S3", "Q8"):
        data = make_twisted_data(trivial_action(c1, GROUPS[g_name]))
        out.append(GridInstance(f"circle/{g_name}", "Y_TRI", data))
    specs = [
        ("C2", "trivial", "trivial"),
        ("C2", "trivial", "square"),
        ("C4", "trivial", "trivial"),
        ("C4", "trivial", "square"),
        ("C4", "inversion", "trivial"),
        ("C4", "inversion", "square"),
        ("S3", "trivial", "trivial"),
        ("Q8", "trivial", "trivial"),
        ("Q8", "trivial", "square"),
        ("Q8", "q8_swap", "trivial"),
        ("Q8", "q8_swap", "square"),
    ]
    for space_name in ("X_HEX", "X_TWO_TRI"):
        for g_name, action_name, c_name in specs:
            data = _c2_data(g_name, action_name, c_name)
            if data is None:
                continue
            tag = f"{space_name}/{g_name},{action_name},{c_name}"
            out.append(GridInstance(tag, space_name, data))
    return out


def grid_instance(name: str) -> GridInstance:
    for inst in default_grid():
        if inst.name == name:
            return inst
    raise InputError(f"unknown grid instance {name!r}")
