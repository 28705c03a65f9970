"""Admissible isotropy triples over RP^2 (and S^2), their Hilbert basis, and bundle classes.

A triple (W_{d-1}, W_{d0}, W_{d1}) lives in Rep of the stabilizers of three special points and
must satisfy:

  i)   W_{d-1} restricted to H is a multiple of chi,
  ii)  W_{d-1} and W_{di} agree on the pointwise stabilizer of the chain C(di),
  iii) W_{d0} and W_{d1} agree on the pointwise stabilizer of the fundamental domain D,
  iv)  W_{d1} is the g-conjugate of W_{d0} whenever some g carries d0 to d1.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Iterator, Literal, Sequence

import numpy as np

from . import hilbert
from .characters import (
    CharacterTable,
    MultiplicityVector,
    chi_orbits,
    chi_stabilizer,
    restriction_matrix,
    row_of_class_function,
    subgroup_table,
    table_json,
    transport_row,
)
from .config import REPORT_SCHEMA, Settings
from .cyclotomic import CycloNum
from .errors import ConsistencyError, ContextMismatchError, InvalidSpecError
from .geometry import (
    CoveringGroup,
    PolyhedralModel,
    RotationAssignment,
    Space,
    all_transporters,
    build_model,
    covering_group,
    make_assignment,
    restrict_assignment,
    rotation_a,
    stabilizer_chain,
    stabilizer_point,
)
from .groups import FiniteGroup, GroupHom, Subgroup, cyclic_group

logger = logging.getLogger(__name__)

Direction = Literal["toS2", "toRP2"]


@dataclass(frozen=True, eq=False)
class ClassificationContext:
    name: str
    assignment: RotationAssignment
    h: Subgroup
    chi: int
    g_chi: Subgroup
    local: RotationAssignment
    embedding: GroupHom
    h_local: Subgroup
    chi_local: int
    model: PolyhedralModel
    covering: CoveringGroup

    @property
    def chi_degree(self) -> int:
        table, _ = subgroup_table(self.h)
        return table.degrees[self.chi]

    @property
    def twin_regime(self) -> bool:
        return self.local.image_tag.is_zn_odd

    def describe(self) -> dict:
        return {
            "group": self.assignment.group.name,
            "order": self.assignment.group.order,
            "image": str(self.assignment.image_tag),
            "h_order": self.h.order,
            "chi": self.chi,
            "chi_degree": self.chi_degree,
            "g_chi_order": self.g_chi.order,
            "g_chi_image": str(self.local.image_tag),
            "model": self.model.tag,
        }


def build_context(assignment: RotationAssignment, chi: int, name: str = "") -> ClassificationContext:
    g = assignment.group
    h = assignment.kernel()
    h_table, h_emb = subgroup_table(h)
    if not 0 <= chi < h_table.size:
        raise InvalidSpecError(f"--chi {chi} is out of range; H has {h_table.size} irreducible characters")
    g_chi = chi_stabilizer(g, h, chi)
    local, embedding = restrict_assignment(assignment, g_chi)
    position = {embedding(x): x for x in range(local.group.order)}
    h_local = Subgroup.of(local.group, [position[x] for x in h.members])
    hl_table, hl_emb = subgroup_table(h_local)
    chi_local = transport_row(h_table, h_emb, chi, hl_table, embedding.compose(hl_emb))
    model = build_model(local)
    logger.info("context %s: |G|=%d |H|=%d chi=%d |G_chi|=%d image %s on %s",
                name or g.name, g.order, h.order, chi, g_chi.order, local.image_tag, model.tag)
    return ClassificationContext(name or g.name, assignment, h, chi, g_chi, local, embedding,
                                 h_local, chi_local, model, covering_group(local))


# -- stabilizers and constraints ---------------------------------------------------

@dataclass(frozen=True, eq=False)
class StabilizerTriple:
    space: Space
    ambient: FiniteGroup
    stab_minus: Subgroup
    stab_0: Subgroup
    stab_1: Subgroup
    chain_0: Subgroup
    chain_1: Subgroup
    domain: Subgroup
    transporter_g: int | None
    h_sub: Subgroup
    chi: int

    @property
    def points(self) -> tuple[Subgroup, Subgroup, Subgroup]:
        return self.stab_minus, self.stab_0, self.stab_1

    def describe(self) -> dict:
        return {
            "space": self.space,
            "stab_minus": self.stab_minus.describe(),
            "stab_0": self.stab_0.describe(),
            "stab_1": self.stab_1.describe(),
            "chain_0": self.chain_0.describe(),
            "chain_1": self.chain_1.describe(),
            "domain": self.domain.describe(),
            "transporter": None if self.transporter_g is None else self.ambient.label(self.transporter_g),
        }


@dataclass(frozen=True, eq=False)
class ConstraintSystem:
    stabilizers: StabilizerTriple
    tables: tuple[CharacterTable, CharacterTable, CharacterTable]
    offsets: tuple[int, int, int, int]
    matrix: np.ndarray
    forced_zero: tuple[int, ...]
    conjugation: tuple[int, ...] | None
    context: ClassificationContext | None = field(default=None)

    @property
    def n_vars(self) -> int:
        return self.offsets[-1]

    def split(self, x: Sequence[int]) -> tuple[tuple[int, ...], ...]:
        o = self.offsets
        return tuple(tuple(int(v) for v in x[o[k]:o[k + 1]]) for k in range(3))

    def dimension_weights(self) -> np.ndarray:
        """Weights whose dot product with a solution is its rank (dimension of W_{d-1})."""
        w = np.zeros(self.n_vars, dtype=np.int64)
        w[: self.offsets[1]] = self.tables[0].degrees
        return w


def _inclusion(small: Subgroup, big: Subgroup) -> GroupHom:
    """Inclusion between the abstract copies of two subgroups of one parent."""
    t_small, _ = subgroup_table(small)
    t_big, _ = subgroup_table(big)
    pos = {m: k for k, m in enumerate(big.members)}
    try:
        images = tuple(pos[m] for m in small.members)
    except KeyError as e:
        raise ConsistencyError("subgroup inclusion fails") from e
    return GroupHom(t_small.group, t_big.group, images)


def _restriction(big: Subgroup, small: Subgroup) -> np.ndarray:
    t_big, _ = subgroup_table(big)
    t_small, _ = subgroup_table(small)
    return restriction_matrix(t_big, t_small, _inclusion(small, big))


def stabilizer_triple(action, model: PolyhedralModel, h_sub: Subgroup, chi: int, space: Space) -> StabilizerTriple:
    stab_minus = stabilizer_point(action, model.d_minus, space)
    stab_0 = stabilizer_point(action, model.d0, space)
    stab_1 = stabilizer_point(action, model.d1, space)
    chain_0 = stabilizer_chain(action, model.chains["C0"], space)
    chain_1 = stabilizer_chain(action, model.chains["C1"], space)
    domain = stabilizer_chain(action, model.chains["D"], space)
    movers = all_transporters(action, model.d0, model.d1, space)
    st = StabilizerTriple(space, action.group, stab_minus, stab_0, stab_1, chain_0, chain_1, domain,
                          movers[0] if movers else None, h_sub, chi)
    if not (chain_0.issubset(stab_minus.intersection(stab_0)) and chain_1.issubset(stab_minus.intersection(stab_1))):
        raise ConsistencyError("chain stabilizer is not inside the endpoint stabilizers")
    if not domain.issubset(stab_0.intersection(stab_1)):
        raise ConsistencyError("domain stabilizer is not inside stab(d0) and stab(d1)")
    if not h_sub.issubset(stab_minus):
        raise ConsistencyError("H does not fix d-1")
    return st


def _conjugation_map(st: StabilizerTriple, g: int) -> tuple[int, ...]:
    """P with m_1[P[psi]] = m_0[psi]: (g.psi)(s) = psi(g^-1 s g) on stab_1."""
    amb = st.ambient
    t0, e0 = subgroup_table(st.stab_0)
    t1, e1 = subgroup_table(st.stab_1)
    pos0 = {e0(x): x for x in range(t0.group.order)}
    g_inv = amb.inverse(g)
    perm = []
    for row in range(t0.size):
        values = []
        for cl in t1.classes:
            s = e1(cl[0])
            back = amb.mul(amb.mul(g_inv, s), g)
            if back not in pos0:
                raise ConsistencyError("transporter does not conjugate stab(d1) onto stab(d0)")
            values.append(t0.value(row, pos0[back]))
        k = row_of_class_function(t1, values)
        if k is None:
            raise ConsistencyError("conjugated isotropy character is not irreducible")
        perm.append(k)
    if sorted(perm) != list(range(t1.size)):
        raise ConsistencyError("conjugation does not biject Irr(stab d0) onto Irr(stab d1)")
    return tuple(perm)


def _isotypical_mask(st: StabilizerTriple) -> list[bool]:
    """Which irreducibles of stab(d-1) restrict to H as a multiple of chi."""
    r = _restriction(st.stab_minus, st.h_sub)
    return [all(v == 0 for k, v in enumerate(row) if k != st.chi) and row[st.chi] > 0 for row in r]


def compile_constraints(st: StabilizerTriple, context: ClassificationContext | None = None) -> ConstraintSystem:
    tables = tuple(subgroup_table(s)[0] for s in st.points)
    sizes = [t.size for t in tables]
    offsets = (0, sizes[0], sizes[0] + sizes[1], sum(sizes))
    n = offsets[-1]
    rows: list[np.ndarray] = []

    def block(k: int, coeffs: np.ndarray) -> np.ndarray:
        v = np.zeros(n, dtype=np.int64)
        v[offsets[k]:offsets[k + 1]] = coeffs
        return v

    # i) non-isotypical irreducibles of stab(d-1) get multiplicity zero
    mask = _isotypical_mask(st)
    forced = tuple(k for k, ok in enumerate(mask) if not ok)
    for k in forced:
        rows.append(block(0, np.eye(sizes[0], dtype=np.int64)[k]))
    # ii) agreement along the chains
    for i, chain in ((1, st.chain_0), (2, st.chain_1)):
        r_minus = _restriction(st.stab_minus, chain)
        r_i = _restriction(st.points[i], chain)
        for j in range(r_minus.shape[1]):
            rows.append(block(0, r_minus[:, j]) - block(i, r_i[:, j]))
    # iii) agreement on the fundamental domain
    r0 = _restriction(st.stab_0, st.domain)
    r1 = _restriction(st.stab_1, st.domain)
    for j in range(r0.shape[1]):
        rows.append(block(1, r0[:, j]) - block(2, r1[:, j]))
    # iv) W_{d1} is the transported W_{d0}
    conjugation = None
    if st.transporter_g is not None:
        action_perms = set()
        for g in _movers(st):
            action_perms.add(_conjugation_map(st, g))
        if len(action_perms) != 1:
            raise ConsistencyError("different transporters induce different conjugations")
        conjugation = action_perms.pop()
        for psi, target in enumerate(conjugation):
            e0 = np.zeros(sizes[1], dtype=np.int64)
            e0[psi] = 1
            e1 = np.zeros(sizes[2], dtype=np.int64)
            e1[target] = 1
            rows.append(block(2, e1) - block(1, e0))
    matrix = np.array(rows, dtype=np.int64).reshape(len(rows), n)
    logger.debug("%s constraint system: %d equations in %d unknowns (%d forced zero)",
                 st.space, matrix.shape[0], n, len(forced))
    return ConstraintSystem(st, tables, offsets, matrix, forced, conjugation, context)


def _movers(st: StabilizerTriple) -> list[int]:
    # every g with g d0 = d1 is a stab(d1)-translate of the first one
    g = st.transporter_g
    return [st.ambient.mul(s, g) for s in st.stab_1.members]


def build_constraints(context: ClassificationContext, space: Space = "RP2") -> tuple[StabilizerTriple, ConstraintSystem]:
    if space == "RP2":
        action = context.local
        h_sub, chi = context.h_local, context.chi_local
    else:
        action = context.covering
        h_sub = Subgroup.of(action.group, [action.lift(h) for h in context.h_local.members])
        src, src_emb = subgroup_table(context.h_local)
        dst, dst_emb = subgroup_table(h_sub)
        chi = transport_row(src, src_emb, context.chi_local, dst, action.p1.compose(dst_emb))
    st = stabilizer_triple(action, context.model, h_sub, chi, space)
    return st, compile_constraints(st, context)


# -- triples ------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class AdmissibleTriple:
    system: ConstraintSystem
    m_minus: MultiplicityVector
    m_0: MultiplicityVector
    m_1: MultiplicityVector

    @classmethod
    def from_coords(cls, system: ConstraintSystem, x: Sequence[int]) -> AdmissibleTriple:
        parts = system.split(x)
        return cls(system, *(MultiplicityVector(t, p) for t, p in zip(system.tables, parts)))

    @property
    def coords(self) -> tuple[int, ...]:
        return self.m_minus.mults + self.m_0.mults + self.m_1.mults

    @property
    def rank(self) -> int:
        return self.m_minus.dimension

    def __add__(self, other: AdmissibleTriple) -> AdmissibleTriple:
        if other.system is not self.system:
            raise ContextMismatchError("cannot add triples of different constraint systems")
        return AdmissibleTriple(self.system, self.m_minus + other.m_minus, self.m_0 + other.m_0, self.m_1 + other.m_1)

    def __eq__(self, other) -> bool:
        return isinstance(other, AdmissibleTriple) and other.system is self.system and other.coords == self.coords

    def __hash__(self) -> int:
        return hash(self.coords)

    def to_json(self) -> dict:
        return {"rank": self.rank, "m_minus": list(self.m_minus.mults),
                "m_0": list(self.m_0.mults), "m_1": list(self.m_1.mults)}


def _element_character(w: MultiplicityVector, sub: Subgroup):
    """Character of w as a function on ambient elements of sub."""
    table, emb = subgroup_table(sub)
    pos = {emb(x): x for x in range(table.group.order)}
    values = w.character()

    def at(a: int) -> CycloNum:
        return values[table.class_of[pos[a]]]

    return at


def check_triple(st: StabilizerTriple, m_minus: MultiplicityVector, m_0: MultiplicityVector,
                 m_1: MultiplicityVector) -> list[str]:
    """Direct evaluation of conditions i)-iv) on characters; returns the failed conditions."""
    failures = []
    w_minus = _element_character(m_minus, st.stab_minus)
    w_0 = _element_character(m_0, st.stab_0)
    w_1 = _element_character(m_1, st.stab_1)
    h_table, h_emb = subgroup_table(st.h_sub)
    chi_deg = h_table.degrees[st.chi]
    if m_minus.dimension % chi_deg:
        failures.append("i")
    else:
        e = m_minus.dimension // chi_deg
        for x in range(h_table.group.order):
            if w_minus(h_emb(x)) != h_table.value(st.chi, x) * e:
                failures.append("i")
                break
    for name, chain, w_i in (("ii.0", st.chain_0, w_0), ("ii.1", st.chain_1, w_1)):
        if any(w_minus(c) != w_i(c) for c in chain.members):
            failures.append(name)
    if any(w_0(d) != w_1(d) for d in st.domain.members):
        failures.append("iii")
    g = st.transporter_g
    if g is not None:
        amb = st.ambient
        g_inv = amb.inverse(g)
        if any(w_1(s) != w_0(amb.mul(amb.mul(g_inv, s), g)) for s in st.stab_1.members):
            failures.append("iv")
    return failures


def _vectors_of_dimension(degrees: Sequence[int], allowed: Sequence[bool], d: int) -> Iterator[tuple[int, ...]]:
    n = len(degrees)

    def rec(k: int, remaining: int) -> Iterator[tuple[int, ...]]:
        if k == n:
            if remaining == 0:
                yield ()
            return
        top = remaining // degrees[k] if allowed[k] else 0
        for m in range(top + 1):
            for rest in rec(k + 1, remaining - m * degrees[k]):
                yield (m,) + rest

    yield from rec(0, d)


def enumerate_triples(cs: ConstraintSystem, max_rank: int) -> list[AdmissibleTriple]:
    """All non-zero admissible triples of rank <= max_rank, sorted by coordinates."""
    if max_rank < 1:
        raise InvalidSpecError("max_rank must be at least 1")
    allowed_minus = [k not in cs.forced_zero for k in range(cs.tables[0].size)]
    found = []
    for d in range(1, max_rank + 1):
        blocks = [
            list(_vectors_of_dimension(cs.tables[0].degrees, allowed_minus, d)),
            list(_vectors_of_dimension(cs.tables[1].degrees, [True] * cs.tables[1].size, d)),
            list(_vectors_of_dimension(cs.tables[2].degrees, [True] * cs.tables[2].size, d)),
        ]
        for a, b, c in itertools.product(*blocks):
            x = np.array(a + b + c, dtype=np.int64)
            if not np.any(cs.matrix @ x):
                found.append(tuple(int(v) for v in x))
    triples = [AdmissibleTriple.from_coords(cs, x) for x in sorted(found)]
    for t in triples:
        failed = check_triple(cs.stabilizers, t.m_minus, t.m_0, t.m_1)
        if failed:
            raise ConsistencyError(f"enumerated triple {t.coords} fails conditions {failed}")
    logger.debug("%d admissible triples up to rank %d", len(triples), max_rank)
    return triples


def hilbert_basis(cs: ConstraintSystem, cap: int | None = None) -> list[AdmissibleTriple]:
    keep = [k for k in range(cs.n_vars) if k not in cs.forced_zero]
    reduced = cs.matrix[:, keep]
    reduced = reduced[np.any(reduced, axis=1)]
    out = []
    for v in hilbert.hilbert_basis(reduced, cap):
        x = np.zeros(cs.n_vars, dtype=np.int64)
        x[keep] = v
        out.append(tuple(int(c) for c in x))
    triples = [AdmissibleTriple.from_coords(cs, x) for x in sorted(out)]
    for t in triples:
        if check_triple(cs.stabilizers, t.m_minus, t.m_0, t.m_1):
            raise ConsistencyError(f"Hilbert basis element {t.coords} is not admissible")
    return triples


def generated_up_to(cs: ConstraintSystem, basis: Sequence[AdmissibleTriple], max_rank: int) -> list[AdmissibleTriple]:
    gens = [np.array(t.coords, dtype=np.int64) for t in basis]
    combos = hilbert.combinations_up_to(gens, cs.dimension_weights(), max_rank)
    return [AdmissibleTriple.from_coords(cs, x) for x in sorted(combos)]


# -- transfer to the covering sphere ----------------------------------------------

def _pullback_rows(rp2_sub: Subgroup, s2_sub: Subgroup, p1: GroupHom) -> tuple[int, ...]:
    """map[k] = row of psi_k o p1 in Irr(S^2 stabilizer); p1 restricted must be an isomorphism."""
    t_rp2, e_rp2 = subgroup_table(rp2_sub)
    t_s2, e_s2 = subgroup_table(s2_sub)
    pos = {e_rp2(x): x for x in range(t_rp2.group.order)}
    images = [p1(e_s2(x)) for x in range(t_s2.group.order)]
    if sorted(images) != sorted(pos):
        raise ConsistencyError("p1 does not map the S2 stabilizer onto the RP2 stabilizer")
    out = []
    for row in range(t_rp2.size):
        values = [t_rp2.value(row, pos[p1(e_s2(cl[0]))]) for cl in t_s2.classes]
        k = row_of_class_function(t_s2, values)
        if k is None:
            raise ConsistencyError("pulled-back character is not irreducible")
        out.append(k)
    return tuple(out)


def p1_transfer(triple: AdmissibleTriple, direction: Direction, rp2: ConstraintSystem,
                s2: ConstraintSystem) -> AdmissibleTriple:
    p1 = s2.context.covering.p1 if s2.context is not None else None
    if p1 is None:
        raise ConsistencyError("S2 system has no covering context")
    maps = [_pullback_rows(a, b, p1) for a, b in zip(rp2.stabilizers.points, s2.stabilizers.points)]
    source, target = (rp2, s2) if direction == "toS2" else (s2, rp2)
    if triple.system is not source:
        raise ContextMismatchError(f"{direction} expects a triple of the {source.stabilizers.space} system")
    parts = []
    for block, mapping, vec in zip(range(3), maps, (triple.m_minus, triple.m_0, triple.m_1)):
        out = [0] * target.tables[block].size
        for k, m in enumerate(vec.mults):
            if direction == "toS2":
                out[mapping[k]] = m
            else:
                out[mapping.index(k)] = m
        parts.extend(out)
    result = AdmissibleTriple.from_coords(target, parts)
    failed = check_triple(target.stabilizers, result.m_minus, result.m_0, result.m_1)
    if failed:
        raise ConsistencyError(f"{direction} image fails conditions {failed}")
    return result


# -- bundle classes -------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class BundleClass:
    triple: AdmissibleTriple
    twin_bit: int | None
    chern_parity: int | None

    @property
    def rank(self) -> int:
        return self.triple.rank

    def to_json(self) -> dict:
        out = self.triple.to_json()
        if self.twin_bit is not None:
            out["twin_bit"] = self.twin_bit
            out["chern_parity"] = self.chern_parity
        return out


def _bundle_classes(cs: ConstraintSystem, triples: Sequence[AdmissibleTriple]) -> list[BundleClass]:
    context = cs.context
    if context is None or not context.twin_regime:
        return [BundleClass(t, None, None) for t in triples]
    odd = context.chi_degree % 2
    return [BundleClass(t, bit, bit * odd) for t in triples for bit in (0, 1)]


def classify_bundles(context: ClassificationContext, max_rank: int,
                     system: ConstraintSystem | None = None) -> list[BundleClass]:
    """삼중쌍마다 하나의 다발 류. G_chi 가 Z_n (n 홀수) 으로 작용하면 twin bit 0/1 로 두 개씩 만듭니다."""
    cs = system or build_constraints(context, "RP2")[1]
    return _bundle_classes(cs, enumerate_triples(cs, max_rank))


def direct_sum(c1: BundleClass, c2: BundleClass) -> BundleClass:
    if c1.triple.system is not c2.triple.system:
        raise ContextMismatchError("bundle classes come from different classification contexts")
    if (c1.twin_bit is None) != (c2.twin_bit is None):
        raise ContextMismatchError("one class carries a twin bit and the other does not")
    triple = c1.triple + c2.triple
    if c1.twin_bit is None:
        return BundleClass(triple, None, None)
    return BundleClass(triple, c1.twin_bit ^ c2.twin_bit, c1.chern_parity ^ c2.chern_parity)


def zero_class(cs: ConstraintSystem) -> BundleClass:
    zero = AdmissibleTriple.from_coords(cs, [0] * cs.n_vars)
    twin = cs.context is not None and cs.context.twin_regime
    return BundleClass(zero, 0 if twin else None, 0 if twin else None)


def line_bundle_report(context: ClassificationContext, max_rank: int = 4) -> dict:
    """Rank-one count of A_R(RP^2, id) for the image R = Z_n, and whether line bundles generate."""
    tag = context.local.image_tag
    if not tag.is_zn_odd:
        return {"applicable": False, "image": str(tag)}
    n = tag.n
    group = cyclic_group(n, name=f"Z{n}")
    assignment = make_assignment(group, [rotation_a(n)])
    image_context = build_context(assignment, 0, name=f"R=Z{n}")
    _, cs = build_constraints(image_context, "RP2")
    triples = enumerate_triples(cs, max_rank)
    rank_one = [t for t in triples if t.rank == 1]
    generated = {t.coords for t in generated_up_to(cs, rank_one, max_rank)}
    return {
        "applicable": True,
        "image": str(tag),
        "rank_one_count": len(rank_one),
        "expected": n,
        "checked_rank": max_rank,
        "generated_by_line_bundles": all(t.coords in generated for t in triples),
    }


def report(context: ClassificationContext, *, kind: str, body: dict) -> dict:
    return {
        "schema": REPORT_SCHEMA,
        "kind": kind,
        "context": context.describe(),
        **body,
    }


def semigroup_report(context: ClassificationContext, max_rank: int | None = None,
                     settings: Settings | None = None) -> dict:
    settings = settings or Settings()
    max_rank = settings.max_rank if max_rank is None else max_rank
    st, cs = build_constraints(context, "RP2")
    triples = enumerate_triples(cs, max_rank)
    basis = hilbert_basis(cs, settings.hilbert_cap)
    return report(context, kind="semigroup", body={
        "stabilizers": st.describe(),
        "equations": int(cs.matrix.shape[0]),
        "unknowns": cs.n_vars,
        "max_rank": max_rank,
        "triples": [t.to_json() for t in triples],
        "rank_counts": {str(r): sum(1 for t in triples if t.rank == r) for r in range(1, max_rank + 1)},
        "hilbert_basis": [t.to_json() for t in basis],
        "line_bundles": line_bundle_report(context),
    })


def classify_report(context: ClassificationContext, max_rank: int | None = None,
                    settings: Settings | None = None) -> dict:
    max_rank = (settings or Settings()).max_rank if max_rank is None else max_rank
    _, cs = build_constraints(context, "RP2")
    triples = enumerate_triples(cs, max_rank)
    classes = _bundle_classes(cs, triples)
    regime = "twin" if context.twin_regime else "injective"
    body = {
        "regime": regime,
        "max_rank": max_rank,
        "triples": len(triples),
        "classes": [c.to_json() for c in classes],
    }
    if context.twin_regime:
        body["twin_bit_sum_rule"] = {"rule": "xor", "authoritative": False}
    return report(context, kind="classify", body=body)


def stabilizers_report(context: ClassificationContext) -> dict:
    st_rp2, _ = build_constraints(context, "RP2")
    st_s2, _ = build_constraints(context, "S2")
    return report(context, kind="stabilizers", body={"RP2": st_rp2.describe(), "S2": st_s2.describe()})


def tables_report(context: ClassificationContext) -> dict:
    st, _ = build_constraints(context, "RP2")
    named = {"G": Subgroup.whole(context.assignment.group), "H": context.h,
             "stab_minus": st.stab_minus, "stab_0": st.stab_0, "stab_1": st.stab_1}
    return report(context, kind="table", body={
        "tables": {k: table_json(subgroup_table(s)[0]) for k, s in named.items()},
        "chi_orbits": chi_orbits(context.assignment.group, context.h),
    })
