"""The bridge between twisted cohomology on a cover and plain cohomology below.

For a free quotient X -> Y with descent data (section s, transitions t_ij),
a twisted cocycle upstairs is normalized so its vertex functions vanish at
the section, leaving one coefficient value per Y-edge.  Framed at the first
index these values satisfy the c-corrected law

    h_ij theta_{t_ij}(h_jk) c(t_ij, t_jk) == h_ik,

and pairing them with the transitions produces a plain cocycle (h_ij, t_ij)
valued in the glued product group.  Both constructions are implemented with
their inverses, together with the monodromy filtration of glued-group
classes over a fixed cover and the conjugation/quotient descriptions of its
fibres.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from .cech import (
    CechSystem,
    CohomologySet,
    DEFAULT_ENUM_BUDGET,
    TwistedOneCocycle,
    gauge,
    h1_twisted,
    make_cocycle,
    system_from_data,
    _edge_index,
)
from .errors import (
    BudgetExceeded,
    CarrierMismatch,
    InputError,
    InternalError,
    NotFree,
)
from .extensions import (
    TwistedData,
    TwistedProductGroup,
    build_twisted_product,
    check_cocycle,
    check_gamma_action,
    make_twisted_data,
    trivial_action,
)
from .groups import FiniteGroup, GroupHom, cyclic_group, subgroup_from_elements
from .nerves import (
    CoverDescent,
    MonodromyRep,
    Nerve,
    make_monodromy,
    monodromy,
    pi1,
    trivial_gamma_nerve,
)

_TRIVIAL_GROUP = cyclic_group(1, label="C1")


def plain_system(y: Nerve, coeff: FiniteGroup) -> CechSystem:
    """Untwisted coefficients over a nerve (trivial acting group)."""
    space = trivial_gamma_nerve(y, _TRIVIAL_GROUP)
    data = make_twisted_data(trivial_action(_TRIVIAL_GROUP, coeff))
    return system_from_data(space, data)


def plain_cocycle(y: Nerve, coeff: FiniteGroup, values: Sequence[int]) -> TwistedOneCocycle:
    system = plain_system(y, coeff)
    phi = (tuple(0 for _ in range(y.n_vertices)),)
    return make_cocycle(system, tuple(values), phi)


def plain_h1(y: Nerve, coeff: FiniteGroup, *, budget: int = DEFAULT_ENUM_BUDGET) -> CohomologySet:
    """Gauge classes of ordinary coefficient-group cocycles on a nerve."""
    return h1_twisted(plain_system(y, coeff), budget=budget)


def monodromy_of_plain_cocycle(y: Nerve, gamma: FiniteGroup, x: TwistedOneCocycle) -> MonodromyRep:
    """Monodromy of a plain group-valued cocycle: tree-normalized generators."""
    pres = pi1(y)
    parent, _ = y.spanning_forest()
    lam = [0] * y.n_vertices
    order = sorted(parent, key=lambda v: _parent_depth(parent, v))
    for v in order:
        p = parent[v]
        if p is not None:
            # f_p^-1 a_pv f_v == 1
            lam[v] = gamma.mul[gamma.inv[x.edge_value(p, v)]][lam[p]]
    assignment = [
        gamma.mul[gamma.mul[gamma.inv[lam[u]]][x.edge_value(u, v)]][lam[v]]
        for (u, v) in pres.generators
    ]
    return make_monodromy(gamma, pres, assignment)


def _parent_depth(parent, v) -> int:
    d = 0
    while parent[v] is not None:
        v = parent[v]
        d += 1
    return d


# ---------------------------------------------------------------------------
# c-twisted cocycles on the base
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CTwistedCocycleY:
    """Base-side edge data framed at the section, subject to the c-corrected law."""

    descent: CoverDescent
    data: TwistedData
    values: tuple[int, ...]  # aligned with the sorted edges of the base nerve

    def edge(self, i: int, j: int) -> int:
        """The value framed at the first index, for a stored (sorted) edge."""
        idx = _edge_index(self.descent.downstairs)
        if i < j:
            return self.values[idx[(i, j)]]
        raise InputError("c-twisted values are stored on sorted edges only")


def check_ctwisted(descent: CoverDescent, data: TwistedData, values: Sequence[int]) -> CTwistedCocycleY:
    y = descent.downstairs
    vals = tuple(int(v) for v in values)
    if len(vals) != len(y.edges):
        raise InputError("need one value per base edge")
    g, gamma = data.g, data.gamma
    idx = _edge_index(y)
    for (i, j, k) in y.triangles:
        tij = descent.transition(i, j)
        tjk = descent.transition(j, k)
        lhs = g.mul[g.mul[vals[idx[(i, j)]]][data.theta(tij, vals[idx[(j, k)]])]][data.c(tij, tjk)]
        if lhs != vals[idx[(i, k)]]:
            raise InputError(f"c-twisted cocycle law fails on triangle ({i},{j},{k})")
    return CTwistedCocycleY(descent, data, vals)


def descend(x: TwistedOneCocycle, descent: CoverDescent) -> CTwistedCocycleY:
    """Read a twisted cocycle upstairs as c-twisted edge data downstairs.

    The cocycle is first gauged so its vertex functions vanish along the
    section; the surviving edge values over each base edge are all equal to
    one coefficient element, recorded in the first-index frame.
    """
    space = x.system.space
    if space is not descent.upstairs and space != descent.upstairs:
        raise CarrierMismatch(message="cocycle lives on a different cover")
    if not space.free:
        raise NotFree(message="descent needs a free action upstairs")
    data = TwistedData(x.system.action, x.system.twist)
    y = descent.downstairs
    n_up = space.nerve.n_vertices
    h = [0] * n_up
    for i in range(y.n_vertices):
        s_i = descent.section[i]
        for t in data.gamma.elements():
            h[space.act(s_i, t)] = x.phi[t][s_i]
    xn = gauge(x, h)
    vals = []
    for (i, j) in y.edges:
        tij = descent.transition(i, j)
        up_val = xn.edge_value(space.act(descent.section[i], tij), descent.section[j])
        vals.append(data.theta(tij, up_val))
    return check_ctwisted(descent, data, vals)


def ascend(y_cocycle: CTwistedCocycleY) -> TwistedOneCocycle:
    """Rebuild the twisted cocycle upstairs from base-side edge data.

    Vertex functions are pinned to the canonical values forced by vanishing
    at the section; edge values over a base edge are spread along the fibre
    by the compatibility laws.
    """
    descent = y_cocycle.descent
    data = y_cocycle.data
    space = descent.upstairs
    y = descent.downstairs
    gamma, g = data.gamma, data.g
    system = system_from_data(space, data)

    sheet: dict[int, tuple[int, int]] = {}
    for i in range(y.n_vertices):
        s_i = descent.section[i]
        for t in gamma.elements():
            sheet[space.act(s_i, t)] = (i, t)

    phi = []
    for t in gamma.elements():
        row = []
        for v in range(space.nerve.n_vertices):
            _, tp = sheet[v]
            prod = gamma.mul[tp][t]
            row.append(data.theta_inv(prod, data.c(tp, t)))
        phi.append(tuple(row))

    edge_pos = _edge_index(space.nerve)
    a = [0] * len(space.nerve.edges)
    idx_y = _edge_index(y)
    for (i, j) in y.edges:
        tij = descent.transition(i, j)
        b_ij = data.theta_inv(tij, y_cocycle.values[idx_y[(i, j)]])
        for t in gamma.elements():
            u = space.act(descent.section[i], gamma.mul[tij][t])
            w = space.act(descent.section[j], t)
            val = g.mul[data.theta_inv(gamma.mul[tij][t], data.c(tij, t))][data.theta_inv(t, b_ij)]
            if u < w:
                a[edge_pos[(u, w)]] = val
            else:
                a[edge_pos[(w, u)]] = g.inv[val]
    return make_cocycle(system, tuple(a), tuple(phi))


# ---------------------------------------------------------------------------
# Glued-group cocycles on the base
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GhatCocycleY:
    """A plain cocycle on the base valued in the glued product group."""

    product: TwistedProductGroup
    cocycle: TwistedOneCocycle  # over plain_system(y, product.group)

    @property
    def base(self) -> Nerve:
        return self.cocycle.system.nerve

    def edge_pair(self, i: int, j: int) -> tuple[int, int]:
        return self.product.index_pair(self.cocycle.edge_value(i, j))


def ghat_cocycle(product: TwistedProductGroup, y: Nerve, values: Sequence[int]) -> GhatCocycleY:
    return GhatCocycleY(product, plain_cocycle(y, product.group, values))


def to_ghat_cocycle(y_cocycle: CTwistedCocycleY, product: Optional[TwistedProductGroup] = None) -> GhatCocycleY:
    """Pair the framed values with the transitions: edges carry (h_ij, t_ij)."""
    prod = product or build_twisted_product(y_cocycle.data)
    if prod.data != y_cocycle.data:
        raise CarrierMismatch(message="product group was built from different twisted data")
    descent = y_cocycle.descent
    y = descent.downstairs
    vals = [
        prod.pair_index(y_cocycle.values[k], descent.transition(i, j))
        for k, (i, j) in enumerate(y.edges)
    ]
    return ghat_cocycle(prod, y, vals)


def from_ghat_cocycle(x: GhatCocycleY, descent: CoverDescent) -> CTwistedCocycleY:
    """Inverse of the pairing for cocycles whose second parts are the transitions."""
    y = descent.downstairs
    if x.base != y:
        raise CarrierMismatch(message="cocycle base differs from the descent base")
    vals = []
    for (i, j) in y.edges:
        g_part, t_part = x.edge_pair(i, j)
        if t_part != descent.transition(i, j):
            raise InputError(f"edge ({i},{j}) does not carry the descent transition")
        vals.append(g_part)
    return check_ctwisted(descent, x.product.data, vals)


def induced_gamma_class(x: GhatCocycleY) -> tuple[TwistedOneCocycle, MonodromyRep]:
    """Push a glued-group cocycle to the quotient group, with its monodromy."""
    prod = x.product
    gamma = prod.data.gamma
    vals = tuple(prod.proj.map[v] for v in x.cocycle.a)
    gcoc = plain_cocycle(x.base, gamma, vals)
    rep = monodromy_of_plain_cocycle(x.base, gamma, gcoc)
    return gcoc, rep


def fiber_over_cover(
    descent: CoverDescent,
    product: TwistedProductGroup,
    *,
    budget: int = DEFAULT_ENUM_BUDGET,
) -> list[tuple[int, MonodromyRep]]:
    """Glued-group classes on the base whose induced cover is the given one.

    Cover classes are compared by the canonical conjugacy representative of
    their monodromy, the isomorphism invariant of principal covers.
    """
    target = monodromy(descent).canonical
    h1 = plain_h1(descent.downstairs, product.group, budget=budget)
    out = []
    for cid in range(len(h1)):
        rep = h1.representative(cid)
        _, mono = induced_gamma_class(GhatCocycleY(product, rep))
        if mono.canonical == target:
            out.append((cid, mono))
    return out



# ---------------------------------------------------------------------------
# Conjugation-coefficient description of a fibre
# ---------------------------------------------------------------------------


def _tree_data(y: Nerve):
    parent, tree = y.spanning_forest()
    order = sorted(parent, key=lambda v: _parent_depth(parent, v))
    tree_set = set(tree)
    nontree = [e for e in y.edges if e not in tree_set]
    return parent, order, tree_set, nontree


def grothendieck_fiber(
    base: GhatCocycleY,
    descent: CoverDescent,
    *,
    budget: int = DEFAULT_ENUM_BUDGET,
) -> list[TwistedOneCocycle]:
    """The fibre through a base class as conjugation-twisted classes.

    Cocycles valued in the coefficient group, with frame changes
    conjugated by the base cocycle, modulo gauge and modulo the covering
    transformation group of the induced cover (sections of the adjoint
    quotient bundle).  Returns one glued-group cocycle per class; their
    classes enumerate the fibre through the base class.
    """
    prod = base.product
    data = prod.data
    g, gamma = data.g, data.gamma
    y = base.base
    if y != descent.downstairs:
        raise CarrierMismatch(message="base cocycle and descent live on different nerves")
    _, mono = induced_gamma_class(base)
    if mono.canonical != monodromy(descent).canonical:
        raise InputError("base class does not induce the given cover")

    h1 = plain_h1(y, prod.group, budget=budget)
    # twisted-conjugation cocycles k <-> glued cocycles k * g0 with the same
    # quotient part on the nose, modulo coefficient-valued gauge
    parent, order, tree_set, nontree = _tree_data(y)
    edge_pos = _edge_index(y)
    count = g.order ** (len(nontree) + 1)  # +1 for the residual constant gauge
    if count > budget:
        raise BudgetExceeded(f"fibre enumeration of size {count} exceeds budget {budget}")

    def shifted(kvals: dict) -> TwistedOneCocycle:
        vals = []
        for (i, j) in y.edges:
            base_val = base.cocycle.edge_value(i, j)
            vals.append(prod.group.mul[prod.embed_g.map[kvals[(i, j)]]][base_val])
        return plain_cocycle(y, prod.group, vals)

    def conj(i: int, j: int, x: int) -> int:
        # Ad by the base edge value, inside the coefficient group
        e = prod.group.mul[prod.group.mul[base.cocycle.edge_value(i, j)][prod.embed_g.map[x]]][
            prod.group.inv[base.cocycle.edge_value(i, j)]
        ]
        a_part, t_part = prod.index_pair(e)
        if t_part != 0:
            raise InternalError("conjugation left the coefficient subgroup")
        return a_part

    candidates = []
    for combo in itertools.product(g.elements(), repeat=len(nontree)):
        kvals = {e: 0 for e in tree_set}
        for e, val in zip(nontree, combo):
            kvals[e] = val
        ok = True
        for (i, j, k) in y.triangles:
            lhs = g.mul[kvals[(i, j)]][conj(i, j, kvals[(j, k)])]
            if lhs != kvals[(i, k)]:
                ok = False
                break
        if ok:
            candidates.append(shifted(kvals))

    class_ids = sorted({h1.class_of(c) for c in candidates})

    # covering transformations: sections of the adjoint quotient bundle
    sections = []
    comp_roots = [c[0] for c in y.components()]
    for combo in itertools.product(gamma.elements(), repeat=len(comp_roots)):
        lam = [0] * y.n_vertices
        for root, val in zip(comp_roots, combo):
            lam[root] = val
        ok = True
        for v in order:
            p = parent[v]
            if p is not None:
                # lam_p == Ad_{t0_pj}(lam_j) for the base quotient part
                t0 = base.edge_pair(p, v)[1]
                lam[v] = gamma.mul[gamma.mul[gamma.inv[t0]][lam[p]]][t0]
        for (i, j) in y.edges:
            t0 = base.edge_pair(i, j)[1]
            if lam[i] != gamma.mul[gamma.mul[t0][lam[j]]][gamma.inv[t0]]:
                ok = False
                break
        if ok:
            sections.append(tuple(lam))

    def act_section(cid: int, lam: Sequence[int]) -> int:
        rep = h1.representative(cid)
        vals = []
        for idx, (i, j) in enumerate(y.edges):
            u_i = prod.section[lam[i]]
            u_j = prod.section[lam[j]]
            vals.append(prod.group.mul[prod.group.mul[prod.group.inv[u_i]][rep.a[idx]]][u_j])
        moved = plain_cocycle(y, prod.group, vals)
        return h1.class_of(moved)

    orbit_of: dict[int, int] = {}
    for cid in class_ids:
        if cid in orbit_of:
            continue
        orbit = {cid}
        frontier = [cid]
        while frontier:
            cur = frontier.pop()
            for lam in sections:
                nxt = act_section(cur, lam)
                if nxt not in orbit:
                    orbit.add(nxt)
                    frontier.append(nxt)
        for member in orbit:
            orbit_of[member] = min(orbit)
    reps = sorted(set(orbit_of.values()))
    return [h1.representative(cid) for cid in reps]


# ---------------------------------------------------------------------------
# Monodromy reduction and the normalizer embedding
# ---------------------------------------------------------------------------


@dataclass
class ConnectedReduction:
    monodromy_group: tuple[int, ...]
    sub_product: TwistedProductGroup
    embedding: GroupHom
    reduced: GhatCocycleY
    gauged_original: GhatCocycleY


def restrict_product(data: TwistedData, gamma_elements: Sequence[int]) -> tuple[TwistedProductGroup, GroupHom]:
    """The glued product over a subgroup of the acting group, with inclusion."""
    gsub = subgroup_from_elements(data.gamma, gamma_elements)
    theta_tables = tuple(
        tuple(data.theta(gsub.embed[t], x) for x in data.g.elements()) for t in gsub.group.elements()
    )
    action = check_gamma_action(gsub.group, data.g, theta_tables)
    ctable = tuple(
        tuple(data.c(gsub.embed[t1], gsub.embed[t2]) for t2 in gsub.group.elements())
        for t1 in gsub.group.elements()
    )
    sub_data = TwistedData(action, check_cocycle(action, ctable))
    sub_prod = build_twisted_product(sub_data)
    big = build_twisted_product(data)
    mapping = tuple(
        big.pair_index(a, gsub.embed[t])
        for a in data.g.elements()
        for t in gsub.group.elements()
    )
    incl = GroupHom(sub_prod.group, big.group, mapping)
    for a in sub_prod.group.elements():
        for b in sub_prod.group.elements():
            if incl.map[sub_prod.group.mul[a][b]] != big.group.mul[incl.map[a]][incl.map[b]]:
                raise InternalError("subgroup product inclusion is not a homomorphism")
    return sub_prod, incl


def connected_reduction(x: GhatCocycleY) -> ConnectedReduction:
    """Reduce a glued-group cocycle to the product over its monodromy group.

    The quotient part is gauged onto the monodromy image via constant-sheet
    gauge elements; the result has values in the subgroup product, and its
    extension along the inclusion recovers the input class.
    """
    prod = x.product
    gamma = prod.data.gamma
    y = x.base
    gcoc, mono = induced_gamma_class(x)
    gprime = mono.image

    parent, order, _, _ = _tree_data(y)
    lam = [0] * y.n_vertices
    for v in order:
        p = parent[v]
        if p is not None:
            lam[v] = gamma.mul[gamma.inv[gcoc.edge_value(p, v)]][lam[p]]
    vals = []
    for idx, (i, j) in enumerate(y.edges):
        u_i = prod.section[lam[i]]
        u_j = prod.section[lam[j]]
        vals.append(prod.group.mul[prod.group.mul[prod.group.inv[u_i]][x.cocycle.a[idx]]][u_j])
    gauged = ghat_cocycle(prod, y, vals)

    sub_prod, incl = restrict_product(prod.data, gprime)
    back = {incl.map[a]: a for a in sub_prod.group.elements()}
    sub_vals = []
    for v in gauged.cocycle.a:
        if v not in back:
            raise InternalError("gauged cocycle has values outside the monodromy product")
        sub_vals.append(back[v])
    reduced = ghat_cocycle(sub_prod, y, sub_vals)
    return ConnectedReduction(gprime, sub_prod, incl, reduced, gauged)


@dataclass
class NormalizerReport:
    normalizer: tuple[int, ...]
    full_monodromy_classes: list[int]
    orbits: list[list[int]]
    extension_class_of: dict[int, int]
    injective: bool
    collisions: list


def normalizer_embedding_check(
    y: Nerve,
    data: TwistedData,
    gamma_prime: Sequence[int],
    *,
    budget: int = DEFAULT_ENUM_BUDGET,
) -> NormalizerReport:
    """Classes with full monodromy in a subgroup, modulo its normalizer.

    Extension of structure group must identify two subgroup-product classes
    exactly when a normalizer element conjugates one onto the other.
    """
    gamma = data.gamma
    gset = sorted(set(int(t) for t in gamma_prime))
    sub_prod, incl = restrict_product(data, gset)
    big = build_twisted_product(data)
    normalizer = tuple(
        n
        for n in gamma.elements()
        if all(gamma.conjugate(n, t) in set(gset) for t in gset)
    )

    h1_small = plain_h1(y, sub_prod.group, budget=budget)
    full = []
    for cid in range(len(h1_small)):
        rep = h1_small.representative(cid)
        _, mono = induced_gamma_class(GhatCocycleY(sub_prod, rep))
        image_in_gamma = tuple(sorted(gset[t] for t in mono.image))
        if image_in_gamma == tuple(gset):
            full.append(cid)

    h1_big = plain_h1(y, big.group, budget=budget)
    ext_of = {}
    for cid in full:
        rep = h1_small.representative(cid)
        vals = tuple(incl.map[v] for v in rep.a)
        ext_of[cid] = h1_big.class_of(plain_cocycle(y, big.group, vals))

    def conj_by(n: int, cid: int) -> int:
        u = big.pair_index(0, n)
        back = {incl.map[a]: a for a in sub_prod.group.elements()}
        rep = h1_small.representative(cid)
        vals = []
        for v in rep.a:
            moved = big.group.mul[big.group.mul[big.group.inv[u]][incl.map[v]]][u]
            if moved not in back:
                raise InternalError("normalizer conjugation left the subgroup product")
            vals.append(back[moved])
        return h1_small.class_of(plain_cocycle(y, sub_prod.group, vals))

    orbit_of: dict[int, int] = {}
    orbits = []
    for cid in full:
        if cid in orbit_of:
            continue
        orbit = {cid}
        frontier = [cid]
        while frontier:
            cur = frontier.pop()
            for n in normalizer:
                nxt = conj_by(n, cur)
                if nxt not in orbit:
                    orbit.add(nxt)
                    frontier.append(nxt)
        for member in orbit:
            orbit_of[member] = len(orbits)
        orbits.append(sorted(orbit))

    collisions = []
    for c1 in full:
        for c2 in full:
            if orbit_of[c1] != orbit_of[c2] and ext_of[c1] == ext_of[c2]:
                collisions.append((c1, c2))
            if orbit_of[c1] == orbit_of[c2] and ext_of[c1] != ext_of[c2]:
                collisions.append(("orbit-not-identified", c1, c2))
    return NormalizerReport(
        normalizer, full, orbits, ext_of, not collisions, collisions
    )
