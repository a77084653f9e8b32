"""Group extensions from twisted 2-cocycles.

A twisting of a finite group G by a finite group Gamma is a pair: an action
theta of Gamma on G by automorphisms, and a normalized 2-cochain c valued in
the centre of G satisfying the twisted cocycle identity

    theta_g0(c(g1,g2)) * c(g0, g1*g2) == c(g0,g1) * c(g0*g1, g2).

The twisted product glues G and Gamma into a group on the set G x Gamma via

    (a, g1) * (b, g2) == (a * theta_g1(b) * c(g1,g2), g1*g2),

and every extension of Gamma by G whose conjugation action lifts to a
homomorphism arises this way.  Cocycle values are stored as G-element
indices constrained to lie in the centre.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import (
    BudgetExceeded,
    CocycleNotCentral,
    CocycleViolation,
    CsNotCentral,
    InputError,
    InternalError,
    NotAOneCocycle,
    NotNormalized,
    SectionNotNormalised,
    ValueNotCentral,
)
from .groups import (
    Automorphism,
    FiniteGroup,
    GroupHom,
    Subgroup,
    center,
    check_automorphism,
    is_normal,
    subgroup_from_elements,
    validate_group,
)

H2_ENUM_GUARD = 10_000_000


@dataclass(frozen=True)
class GammaAction:
    """A homomorphism gamma -> Aut(g), stored as permutation tables."""

    gamma: FiniteGroup
    g: FiniteGroup
    theta: tuple[Automorphism, ...]

    def apply(self, gamma_elem: int, g_elem: int) -> int:
        return self.theta[gamma_elem].map[g_elem]

    def apply_inv(self, gamma_elem: int, g_elem: int) -> int:
        return self.theta[gamma_elem].inverse_map[g_elem]


def check_gamma_action(gamma: FiniteGroup, g: FiniteGroup, tables: Sequence[Sequence[int]]) -> GammaAction:
    if len(tables) != gamma.order:
        raise InputError("need one automorphism table per acting element")
    autos = tuple(check_automorphism(g, t) for t in tables)
    if autos[0].map != tuple(range(g.order)):
        raise InputError("identity must act as the identity automorphism")
    for a in gamma.elements():
        for b in gamma.elements():
            composed = tuple(autos[a].map[autos[b].map[x]] for x in g.elements())
            if composed != autos[gamma.mul[a][b]].map:
                raise InputError(f"theta is not a homomorphism at ({a},{b})")
    return GammaAction(gamma, g, autos)


def trivial_action(gamma: FiniteGroup, g: FiniteGroup) -> GammaAction:
    ident = tuple(range(g.order))
    return check_gamma_action(gamma, g, tuple(ident for _ in gamma.elements()))


@dataclass(frozen=True)
class TwoCocycle:
    """Normalized central 2-cocycle; values are G-element indices."""

    action: GammaAction
    table: tuple[tuple[int, ...], ...]

    def __call__(self, g1: int, g2: int) -> int:
        return self.table[g1][g2]

    def is_trivial(self) -> bool:
        return all(v == 0 for row in self.table for v in row)


@dataclass(frozen=True)
class GammaOneCochain:
    """A map gamma -> Z(G) with a(1) = 1, as G-element indices."""

    values: tuple[int, ...]

    def __call__(self, g: int) -> int:
        return self.values[g]


@dataclass(frozen=True)
class TwistedData:
    action: GammaAction
    cocycle: TwoCocycle

    @property
    def gamma(self) -> FiniteGroup:
        return self.action.gamma

    @property
    def g(self) -> FiniteGroup:
        return self.action.g

    def theta(self, gamma_elem: int, g_elem: int) -> int:
        return self.action.apply(gamma_elem, g_elem)

    def theta_inv(self, gamma_elem: int, g_elem: int) -> int:
        return self.action.apply_inv(gamma_elem, g_elem)

    def c(self, g1: int, g2: int) -> int:
        return self.cocycle.table[g1][g2]


def check_cocycle(action: GammaAction, table: Sequence[Sequence[int]]) -> TwoCocycle:
    """Verify normalization, centrality and the twisted cocycle identity."""
    gamma, g = action.gamma, action.g
    zset = set(center(g).embed)
    rows = tuple(tuple(int(v) for v in row) for row in table)
    if len(rows) != gamma.order or any(len(r) != gamma.order for r in rows):
        raise InputError("cocycle table must be |Gamma| x |Gamma|")
    for g1 in gamma.elements():
        for g2 in gamma.elements():
            if rows[g1][g2] not in zset:
                raise ValueNotCentral(g1, g2)
    for x in gamma.elements():
        if rows[x][0] != 0 or rows[0][x] != 0:
            raise NotNormalized(x)
    mul = g.mul
    for g0 in gamma.elements():
        for g1 in gamma.elements():
            for g2 in gamma.elements():
                lhs = mul[action.apply(g0, rows[g1][g2])][rows[g0][gamma.mul[g1][g2]]]
                rhs = mul[rows[g0][g1]][rows[gamma.mul[g0][g1]][g2]]
                if lhs != rhs:
                    raise CocycleViolation(g0, g1, g2)
    return TwoCocycle(action, rows)


def trivial_cocycle(action: GammaAction) -> TwoCocycle:
    n = action.gamma.order
    return TwoCocycle(action, tuple(tuple(0 for _ in range(n)) for _ in range(n)))


def make_twisted_data(action: GammaAction, table: Optional[Sequence[Sequence[int]]] = None) -> TwistedData:
    coc = trivial_cocycle(action) if table is None else check_cocycle(action, table)
    return TwistedData(action, coc)


def coboundary(action: GammaAction, cochain: GammaOneCochain) -> TwoCocycle:
    """delta a (g0,g1) = theta_g0(a(g1)) * a(g0 g1)^-1 * a(g0)."""
    gamma, g = action.gamma, action.g
    a = cochain.values
    if len(a) != gamma.order or a[0] != 0:
        raise InputError("1-cochain must assign a(1) = 1 and cover Gamma")
    zset = set(center(g).embed)
    if any(v not in zset for v in a):
        raise InputError("1-cochain values must be central")
    table = tuple(
        tuple(
            g.mul[g.mul[action.apply(g0, a[g1])][g.inv[a[gamma.mul[g0][g1]]]]][a[g0]]
            for g1 in gamma.elements()
        )
        for g0 in gamma.elements()
    )
    return check_cocycle(action, table)


def multiply_cocycles(a: TwoCocycle, b: TwoCocycle) -> TwoCocycle:
    g = a.action.g
    n = a.action.gamma.order
    table = tuple(tuple(g.mul[a.table[i][j]][b.table[i][j]] for j in range(n)) for i in range(n))
    return TwoCocycle(a.action, table)


@dataclass
class CocycleClassification:
    """H^2 for a fixed action: coset representatives of Z^2 by coboundaries."""

    action: GammaAction
    cocycles: list[tuple[tuple[int, ...], ...]]
    coboundaries: list[tuple[tuple[int, ...], ...]]
    representatives: list[tuple[tuple[int, ...], ...]]
    _class_of: dict[tuple[tuple[int, ...], ...], int]

    def __len__(self) -> int:
        return len(self.representatives)

    def class_of(self, cocycle: TwoCocycle | Sequence[Sequence[int]]) -> int:
        table = cocycle.table if isinstance(cocycle, TwoCocycle) else tuple(tuple(r) for r in cocycle)
        if table not in self._class_of:
            raise InputError("table is not a verified 2-cocycle for this action")
        return self._class_of[table]


def second_cohomology(action: GammaAction, *, guard: int = H2_ENUM_GUARD) -> CocycleClassification:
    """Classify central 2-cocycles up to coboundary by full enumeration.

    Representatives are the lexicographically minimal tables of each coset.
    Refuses (rather than sampling) when the normalized search space exceeds
    the guard.
    """
    gamma, g = action.gamma, action.g
    zelems = center(g).embed
    n = gamma.order
    free = (n - 1) * (n - 1)
    if len(zelems) ** free > guard:
        raise BudgetExceeded(f"|Z|^{free} exceeds enumeration guard {guard}")

    nontriv = [x for x in gamma.elements() if x != 0]
    cocycles = []
    for combo in itertools.product(zelems, repeat=free):
        table = [[0] * n for _ in range(n)]
        for k, (g1, g2) in enumerate(itertools.product(nontriv, nontriv)):
            table[g1][g2] = combo[k]
        try:
            cocycles.append(check_cocycle(action, table).table)
        except CocycleViolation:
            continue
    cobs = sorted(
        {
            coboundary(action, GammaOneCochain((0,) + combo)).table
            for combo in itertools.product(zelems, repeat=n - 1)
        }
    )
    reps: list[tuple[tuple[int, ...], ...]] = []
    class_of: dict[tuple[tuple[int, ...], ...], int] = {}
    for c in sorted(cocycles):
        if c in class_of:
            continue
        cid = len(reps)
        coset = []
        for b in cobs:
            prod = tuple(tuple(g.mul[c[i][j]][b[i][j]] for j in range(n)) for i in range(n))
            coset.append(prod)
        rep = min(coset)
        reps.append(rep)
        for t in coset:
            class_of[t] = cid
    # re-rank classes by their minimal representative for stable ids
    order = sorted(range(len(reps)), key=lambda i: reps[i])
    rank = {old: new for new, old in enumerate(order)}
    reps = [reps[i] for i in order]
    class_of = {t: rank[i] for t, i in class_of.items()}
    return CocycleClassification(action, sorted(cocycles), cobs, reps, class_of)


@dataclass(frozen=True)
class TwistedProductGroup:
    """The glued group on G x Gamma with its structural maps.

    Index layout: (g, gamma) -> g * |Gamma| + gamma, so the embedded copy of
    G is {g * |Gamma|} and the normalized section is gamma -> (1, gamma).
    """

    data: TwistedData
    group: FiniteGroup
    embed_g: GroupHom
    proj: GroupHom
    section: tuple[int, ...]

    def pair_index(self, g_elem: int, gamma_elem: int) -> int:
        return g_elem * self.data.gamma.order + gamma_elem

    def index_pair(self, idx: int) -> tuple[int, int]:
        return divmod(idx, self.data.gamma.order)


def build_twisted_product(data: TwistedData, label: Optional[str] = None) -> TwistedProductGroup:
    g, gamma = data.g, data.gamma
    ng, nq = g.order, gamma.order
    n = ng * nq

    def enc(a: int, x: int) -> int:
        return a * nq + x

    mul = [[0] * n for _ in range(n)]
    for a in g.elements():
        for x in gamma.elements():
            row = mul[enc(a, x)]
            for b in g.elements():
                tb = g.mul[a][data.theta(x, b)]
                for y in gamma.elements():
                    row[enc(b, y)] = enc(g.mul[tb][data.c(x, y)], gamma.mul[x][y])
    try:
        grp = validate_group(mul, label=label)
    except InputError as exc:  # the cocycle identity guarantees associativity
        raise InternalError(f"twisted product failed validation: {exc}") from exc
    if grp.relabeling is not None:
        raise InternalError("twisted product identity landed off index 0")
    embed = GroupHom(g, grp, tuple(enc(a, 0) for a in g.elements()))
    proj = GroupHom(grp, gamma, tuple(x % nq for x in range(n)))
    section = tuple(enc(0, x) for x in gamma.elements())
    return TwistedProductGroup(data, grp, embed, proj, section)


def gamma_hat(data: TwistedData, label: Optional[str] = None) -> tuple[TwistedProductGroup, GroupHom]:
    """The companion extension of Gamma by Z(G), with its embedding.

    Returns the twisted product over the centre and the embedding of its
    group into the full twisted product, compatible with both projections.
    """
    zsub = center(data.g)
    z = zsub.group
    restr = tuple(
        tuple(zsub.parent_to_sub[data.theta(x, zsub.embed[i])] for i in range(z.order))
        for x in data.gamma.elements()
    )
    zaction = check_gamma_action(data.gamma, z, restr)
    ztable = tuple(
        tuple(zsub.parent_to_sub[data.c(x, y)] for y in data.gamma.elements())
        for x in data.gamma.elements()
    )
    zdata = TwistedData(zaction, check_cocycle(zaction, ztable))
    small = build_twisted_product(zdata, label=label)
    big = build_twisted_product(data)
    mapping = tuple(
        big.pair_index(zsub.embed[z_elem], x)
        for z_elem in z.elements()
        for x in data.gamma.elements()
    )
    embedding = GroupHom(small.group, big.group, mapping)
    for a in small.group.elements():
        for b in small.group.elements():
            if embedding.map[small.group.mul[a][b]] != big.group.mul[embedding.map[a]][embedding.map[b]]:
                raise InternalError("gamma-hat embedding is not a homomorphism")
    for a in small.group.elements():
        if big.proj.map[embedding.map[a]] != small.proj.map[a]:
            raise InternalError("gamma-hat embedding does not commute with projections")
    return small, embedding


def cohomologous_iso(data: TwistedData, cochain: GammaOneCochain) -> GroupHom:
    """Isomorphism from the product for c to the product for c * delta(a).

    The underlying map is (g, gamma) -> (g * a(gamma)^-1, gamma); composing
    the isomorphisms for a and for its pointwise inverse gives the identity.
    """
    g, gamma = data.g, data.gamma
    delta = coboundary(data.action, cochain)
    src = build_twisted_product(data)
    dst = build_twisted_product(TwistedData(data.action, multiply_cocycles(data.cocycle, delta)))
    mapping = tuple(
        dst.pair_index(g.mul[a][g.inv[cochain.values[x]]], x)
        for a in g.elements()
        for x in gamma.elements()
    )
    hom = GroupHom(src.group, dst.group, mapping)
    for a in src.group.elements():
        for b in src.group.elements():
            if hom.map[src.group.mul[a][b]] != dst.group.mul[hom.map[a]][hom.map[b]]:
                raise InternalError("cohomologous products: explicit map failed to be a homomorphism")
    return hom


@dataclass(frozen=True)
class ExtractedData:
    """Result of reading (theta, c) off an extension with a chosen section."""

    data: TwistedData
    gamma: FiniteGroup
    normal: Subgroup
    section: tuple[int, ...]
    proj: GroupHom
    identification: GroupHom  # from build_twisted_product(data).group to the input group


def extract_twisted_data(
    ghat: FiniteGroup,
    normal_elements: Sequence[int],
    section: Sequence[int],
) -> ExtractedData:
    """Recover (theta, c) from an extension and a normalised section.

    ``section`` lists one element of ghat per coset of the normal subgroup;
    its order fixes the element order of the constructed quotient group.
    The first entry must be the identity.
    """
    sub = subgroup_from_elements(ghat, normal_elements)
    if not is_normal(ghat, sub.embed):
        raise InputError("the chosen subgroup is not normal")
    sec = tuple(int(x) for x in section)
    if len(sec) * sub.group.order != ghat.order:
        raise SectionNotNormalised(message="section size does not match the number of cosets")
    if sec[0] != 0:
        raise SectionNotNormalised(message="section must send the identity coset to the identity")

    coset_key = {}
    for idx, s in enumerate(sec):
        key = frozenset(ghat.mul[s][h] for h in sub.embed)
        if key in coset_key:
            raise SectionNotNormalised(message="two section elements lie in the same coset")
        coset_key[key] = idx

    def coset_of(x: int) -> int:
        key = frozenset(ghat.mul[x][h] for h in sub.embed)
        if key not in coset_key:
            raise SectionNotNormalised(message="section misses a coset")
        return coset_key[key]

    nq = len(sec)
    qmul = tuple(tuple(coset_of(ghat.mul[sec[a]][sec[b]]) for b in range(nq)) for a in range(nq))
    qinv = tuple(coset_of(ghat.inv[sec[a]]) for a in range(nq))
    gamma = FiniteGroup(nq, qmul, qinv, label=None)

    gset = set(sub.embed)
    theta_tables = []
    for x in gamma.elements():
        s = sec[x]
        tab = []
        for h in sub.embed:
            img = ghat.conjugate(s, h)
            if img not in gset:
                raise SectionNotNormalised(x, h)
            tab.append(sub.parent_to_sub[img])
        theta_tables.append(tab)
    action = check_gamma_action(gamma, sub.group, theta_tables)

    zset = set(center(sub.group).embed)
    ctable = []
    for a in gamma.elements():
        row = []
        for b in gamma.elements():
            defect = ghat.mul[ghat.mul[sec[a]][sec[b]]][ghat.inv[sec[gamma.mul[a][b]]]]
            if defect not in gset:
                raise InternalError("section defect escaped the normal subgroup")
            v = sub.parent_to_sub[defect]
            if v not in zset:
                raise CocycleNotCentral(a, b)
            row.append(v)
        ctable.append(row)
    data = TwistedData(action, check_cocycle(action, ctable))

    built = build_twisted_product(data)
    mapping = tuple(
        ghat.mul[sub.embed[a]][sec[x]] for a in sub.group.elements() for x in gamma.elements()
    )
    ident = GroupHom(built.group, ghat, mapping)
    for a in built.group.elements():
        for b in built.group.elements():
            if ident.map[built.group.mul[a][b]] != ghat.mul[ident.map[a]][ident.map[b]]:
                raise InternalError("identification with the twisted product failed")
    proj = GroupHom(ghat, gamma, tuple(coset_of(x) for x in ghat.elements()))
    return ExtractedData(data, gamma, sub, sec, proj, ident)


@dataclass(frozen=True)
class Recocycling:
    """A change of lift: theta' = Int_s . theta and c' = c * c_s."""

    old: TwistedData
    new: TwistedData
    s: tuple[int, ...]
    c_s: TwoCocycle


def recocycle(data: TwistedData, s: Sequence[int]) -> Recocycling:
    """Transport the twisting along a map s: Gamma -> G with s(1) = 1."""
    g, gamma = data.g, data.gamma
    sv = tuple(int(x) for x in s)
    if len(sv) != gamma.order or sv[0] != 0:
        raise InputError("recocycling map must cover Gamma with s(1) = 1")

    def inner(t: int) -> tuple[int, ...]:
        return tuple(g.conjugate(t, x) for x in g.elements())

    for a in gamma.elements():
        for b in gamma.elements():
            lhs = inner(g.mul[sv[a]][data.theta(a, sv[b])])
            rhs = inner(sv[gamma.mul[a][b]])
            if lhs != rhs:
                raise NotAOneCocycle(a, b)

    zset = set(center(g).embed)
    cs_table = []
    for a in gamma.elements():
        row = []
        for b in gamma.elements():
            v = g.mul[g.mul[sv[a]][data.theta(a, sv[b])]][g.inv[sv[gamma.mul[a][b]]]]
            if v not in zset:
                raise CsNotCentral(a, b)
            row.append(v)
        cs_table.append(row)

    theta_tables = tuple(
        tuple(g.conjugate(sv[x], data.theta(x, e)) for e in g.elements()) for x in gamma.elements()
    )
    new_action = check_gamma_action(gamma, g, theta_tables)
    c_s = check_cocycle(new_action, cs_table)
    new_c = check_cocycle(
        new_action,
        tuple(
            tuple(g.mul[data.c(a, b)][cs_table[a][b]] for b in gamma.elements())
            for a in gamma.elements()
        ),
    )
    return Recocycling(data, TwistedData(new_action, new_c), sv, c_s)
