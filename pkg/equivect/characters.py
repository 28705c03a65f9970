"""Irreducible characters over cyclotomic fields, restriction and the conjugation action on Irr(H)."""
from __future__ import annotations

import functools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .cyclotomic import CycloNum
from .errors import ConsistencyError
from .groups import (
    FiniteGroup,
    GroupHom,
    Subgroup,
    class_index,
    conjugacy_classes,
    element_order,
    exponent,
)

logger = logging.getLogger(__name__)

_ROUND = 1e-6


@dataclass(frozen=True, eq=False)
class CharacterTable:
    group: FiniteGroup
    classes: tuple[tuple[int, ...], ...]
    class_of: np.ndarray
    chars: tuple[tuple[CycloNum, ...], ...]
    degrees: tuple[int, ...]
    conductor: int

    @property
    def size(self) -> int:
        return len(self.chars)

    @property
    def class_sizes(self) -> list[int]:
        return [len(c) for c in self.classes]

    def value(self, row: int, x: int) -> CycloNum:
        return self.chars[row][self.class_of[x]]

    def inner(self, a: Sequence[CycloNum], b: Sequence[CycloNum]) -> CycloNum:
        """(1/|G|) sum over classes of |C| a(C) conj(b(C))."""
        total = CycloNum.zero(self.conductor)
        for size, x, y in zip(self.class_sizes, a, b):
            total = total + x * y.conj() * size
        return total / self.group.order

    def decompose(self, values: Sequence[CycloNum]) -> list[int]:
        """Multiplicities of a class function given per class; aborts on non-integers."""
        out = []
        for row in self.chars:
            m = self.inner(values, row)
            if not m.is_rational() or m.rational_value().denominator != 1 or m.rational_value() < 0:
                raise ConsistencyError(f"class function has multiplicity {m} on an irreducible")
            out.append(int(m.rational_value()))
        return out

    def class_function(self, values_per_element: Sequence[CycloNum]) -> list[CycloNum]:
        return [values_per_element[c[0]] for c in self.classes]

    def trivial_row(self) -> int:
        return 0


def _class_constants(g: FiniteGroup, classes, class_of) -> np.ndarray:
    r = len(classes)
    c = np.zeros((r, r, r), dtype=np.int64)
    for l, cl in enumerate(classes):
        z = cl[0]
        for x in range(g.order):
            y = g.mul(g.inverse(x), z)
            c[class_of[x], class_of[y], l] += 1
    return c


def _numeric_characters(g: FiniteGroup, classes, class_of, rng: np.random.Generator) -> np.ndarray:
    sizes = np.array([len(c) for c in classes], dtype=float)
    c = _class_constants(g, classes, class_of)
    r = len(classes)
    for attempt in range(32):
        weights = rng.standard_normal(r)
        combo = np.tensordot(weights, c.astype(float), axes=1)
        vals, vecs = np.linalg.eig(combo)
        gaps = np.abs(vals[:, None] - vals[None, :]) + np.eye(r)
        if gaps.min() > 1e-6:
            break
        logger.debug("eigenvalue collision on attempt %d, retrying", attempt)
    else:
        raise ConsistencyError("class matrices have no separating combination")
    out = np.empty((r, r), dtype=complex)
    idc = class_of[g.id_index]
    for k in range(r):
        w = vecs[:, k] / vecs[idc, k]
        deg = np.sqrt(g.order / np.sum(np.abs(w) ** 2 / sizes))
        out[k] = deg * w / sizes
    return out


def _exact_row(g: FiniteGroup, numeric: np.ndarray, classes, class_of, conductor: int) -> tuple[CycloNum, ...]:
    row = []
    for cl in classes:
        x = cl[0]
        o = element_order(g, x)
        powers = [class_of[g.power(x, j)] for j in range(o)]
        samples = numeric[powers]
        exact = CycloNum.zero(conductor)
        for k in range(o):
            mk = np.sum(samples * np.exp(-2j * np.pi * np.arange(o) * k / o)) / o
            rounded = round(mk.real)
            if abs(mk - rounded) > _ROUND or rounded < 0:
                raise ConsistencyError(f"eigenvalue multiplicity {mk} is not a non-negative integer")
            if rounded:
                exact = exact + CycloNum.root_of_unity(k, o, conductor) * rounded
        row.append(exact)
    return tuple(row)


def _sort_key(row: tuple[CycloNum, ...], degree: int):
    trivial = all(v == 1 for v in row)
    approx = tuple((-round(v.to_complex().real, 9), -round(v.to_complex().imag, 9)) for v in row)
    exact = tuple(v.sort_key() for v in row)
    return (degree, not trivial, approx, exact)


@functools.lru_cache(maxsize=None)
def character_table(g: FiniteGroup, seed: int = 0) -> CharacterTable:
    classes = tuple(conjugacy_classes(g))
    class_of = class_index(g, classes)
    conductor = exponent(g)
    if len(classes) == 1:
        rows = [(CycloNum.one(conductor),)]
    else:
        numeric = _numeric_characters(g, classes, class_of, np.random.default_rng(seed))
        rows = [_exact_row(g, numeric[k], classes, class_of, conductor) for k in range(len(classes))]
    degrees = []
    for row in rows:
        d = row[class_of[g.id_index]]
        if not d.is_rational() or d.rational_value().denominator != 1:
            raise ConsistencyError(f"character degree {d} is not an integer")
        degrees.append(int(d.rational_value()))
    order = sorted(range(len(rows)), key=lambda k: _sort_key(rows[k], degrees[k]))
    table = CharacterTable(g, classes, class_of, tuple(rows[k] for k in order),
                           tuple(degrees[k] for k in order), conductor)
    failures = check_table(table)
    if failures:
        raise ConsistencyError("; ".join(failures))
    logger.debug("character table of %r: degrees %s", g, table.degrees)
    return table


def check_table(table: CharacterTable) -> list[str]:
    failures = []
    if sum(d * d for d in table.degrees) != table.group.order:
        failures.append("sum of squared degrees differs from the group order")
    if len(table.chars) != len(table.classes):
        failures.append("number of irreducibles differs from the number of classes")
    for i, a in enumerate(table.chars):
        for j, b in enumerate(table.chars):
            if table.inner(a, b) != (1 if i == j else 0):
                failures.append(f"rows {i} and {j} are not orthonormal")
    # column orthogonality: sum_chi chi(C) conj(chi(D)) = delta |G|/|C|
    for c in range(len(table.classes)):
        for d in range(len(table.classes)):
            total = sum((row[c] * row[d].conj() for row in table.chars), CycloNum.zero(table.conductor))
            expect = Fraction(table.group.order, len(table.classes[c])) if c == d else 0
            if total != expect:
                failures.append(f"columns {c} and {d} are not orthogonal")
    return failures



def compare_with_numeric(table: CharacterTable, seed: int = 1) -> list[str]:
    """Match every exact row against a fresh Burnside eigen-decomposition drawn with another seed."""
    numeric = _numeric_characters(table.group, table.classes, table.class_of, np.random.default_rng(seed))
    exact = np.array([[v.to_complex() for v in row] for row in table.chars])
    unmatched = [k for k, row in enumerate(numeric) if np.abs(exact - row).max(axis=1).min() > _ROUND]
    return [f"numeric character {k} has no exact counterpart" for k in unmatched]

@functools.lru_cache(maxsize=None)
def subgroup_table(sub: Subgroup) -> tuple[CharacterTable, GroupHom]:
    """Table of the abstract copy of sub, with the embedding back into the parent."""
    group, embedding = sub.as_group()
    return character_table(group), embedding


@dataclass(frozen=True, eq=False)
class MultiplicityVector:
    table: CharacterTable
    mults: tuple[int, ...]

    def __post_init__(self):
        if len(self.mults) != self.table.size or any(m < 0 for m in self.mults):
            raise ConsistencyError("multiplicity vector does not match its table")

    @property
    def dimension(self) -> int:
        return sum(m * d for m, d in zip(self.mults, self.table.degrees))

    def __add__(self, other: MultiplicityVector) -> MultiplicityVector:
        return MultiplicityVector(self.table, tuple(a + b for a, b in zip(self.mults, other.mults)))

    def character(self) -> list[CycloNum]:
        out = []
        for c in range(len(self.table.classes)):
            total = CycloNum.zero(self.table.conductor)
            for m, row in zip(self.mults, self.table.chars):
                if m:
                    total = total + row[c] * m
            out.append(total)
        return out


def restriction_matrix(big: CharacterTable, small: CharacterTable, embedding: GroupHom) -> np.ndarray:
    """R[i, j] = <res chi_i, psi_j>; integer by Frobenius, aborts otherwise."""
    rows = []
    for chi in big.chars:
        values = [chi[big.class_of[embedding(cl[0])]] for cl in small.classes]
        rows.append(small.decompose(values))
    return np.array(rows, dtype=np.int64).reshape(big.size, small.size)


def restrict_multiplicities(w: MultiplicityVector, small: CharacterTable, embedding: GroupHom) -> MultiplicityVector:
    r = restriction_matrix(w.table, small, embedding)
    mults = np.asarray(w.mults, dtype=np.int64) @ r
    return MultiplicityVector(small, tuple(int(m) for m in mults))


def row_of_class_function(table: CharacterTable, values: Sequence[CycloNum]) -> int | None:
    """Index of the irreducible whose class values equal values (given per class), else None."""
    target = tuple(values)
    for k, row in enumerate(table.chars):
        if all(a == b for a, b in zip(row, target)):
            return k
    return None


def transport_row(src: CharacterTable, src_emb: GroupHom, row: int,
                  dst: CharacterTable, dst_emb: GroupHom) -> int:
    """Identify an irreducible of one copy of H with the matching row of another copy.

    Both embeddings must land in the same ambient group with the same image.
    """
    position = {src_emb(x): x for x in range(src.group.order)}
    try:
        values = [src.value(row, position[dst_emb(cl[0])]) for cl in dst.classes]
    except KeyError as e:
        raise ConsistencyError("the two copies of H have different images") from e
    k = row_of_class_function(dst, values)
    if k is None:
        raise ConsistencyError("transported character is not irreducible")
    return k


# -- conjugation action on Irr(H) ----------------------------------------------------

def conjugation_permutation(g_group: FiniteGroup, h_sub: Subgroup, g: int) -> tuple[int, ...]:
    """P with (g . chi_i) = chi_{P[i]}, where (g . chi)(h) = chi(g^-1 h g)."""
    table, emb = subgroup_table(h_sub)
    position = {emb(x): x for x in range(table.group.order)}
    g_inv = g_group.inverse(g)
    perm = []
    for row in range(table.size):
        values = []
        for cl in table.classes:
            h = emb(cl[0])
            conj = g_group.mul(g_group.mul(g_inv, h), g)
            if conj not in position:
                raise ConsistencyError("H is not normal in G")
            values.append(table.value(row, position[conj]))
        k = row_of_class_function(table, values)
        if k is None:
            raise ConsistencyError("conjugate of an irreducible character is not irreducible")
        perm.append(k)
    if sorted(perm) != list(range(table.size)):
        raise ConsistencyError("conjugation does not permute Irr(H)")
    return tuple(perm)


def conjugate_character(g_group: FiniteGroup, h_sub: Subgroup, row: int, g: int) -> int:
    return conjugation_permutation(g_group, h_sub, g)[row]


def chi_stabilizer(g_group: FiniteGroup, h_sub: Subgroup, row: int) -> Subgroup:
    members = [g for g in range(g_group.order) if conjugate_character(g_group, h_sub, row, g) == row]
    stab = Subgroup.of(g_group, members)
    if not h_sub.issubset(stab):
        raise ConsistencyError("G_chi does not contain H")
    return stab


def chi_orbits(g_group: FiniteGroup, h_sub: Subgroup) -> list[dict]:
    table, _ = subgroup_table(h_sub)
    perms = [conjugation_permutation(g_group, h_sub, g) for g in g_group.generators]
    seen: set[int] = set()
    orbits = []
    for row in range(table.size):
        if row in seen:
            continue
        orbit = {row}
        frontier = [row]
        while frontier:
            k = frontier.pop()
            for p in perms:
                if p[k] not in orbit:
                    orbit.add(p[k])
                    frontier.append(p[k])
        seen |= orbit
        orbits.append({"representative": row, "members": sorted(orbit), "size": len(orbit),
                       "degree": table.degrees[row]})
    return orbits


def is_chi_isotypical(w: MultiplicityVector, h_table: CharacterTable, h_embedding: GroupHom, chi: int) -> bool:
    """True iff the restriction of w to H is a non-negative multiple of chi."""
    res = restrict_multiplicities(w, h_table, h_embedding)
    return all(m == 0 for k, m in enumerate(res.mults) if k != chi)


# -- output ------------------------------------------------------------------------

def format_value(v: CycloNum) -> str:
    if v.is_rational():
        return str(v.rational_value())
    z = v.to_complex()
    if abs(z.imag) < 1e-12:
        return f"{z.real:.6g}"
    return f"{z.real:.6g}{z.imag:+.6g}i"


def table_json(table: CharacterTable) -> dict:
    g = table.group
    return {
        "group": g.name,
        "order": g.order,
        "conductor": table.conductor,
        "classes": [{"size": len(c), "representative": g.label(c[0]),
                     "element_order": element_order(g, c[0])} for c in table.classes],
        "degrees": list(table.degrees),
        "characters": [[v.to_json() for v in row] for row in table.chars],
        "display": [[format_value(v) for v in row] for row in table.chars],
    }


def format_table(table: CharacterTable) -> str:
    header = ["", *(f"{len(c)}x o{element_order(table.group, c[0])}" for c in table.classes)]
    body = [[f"X{k}", *(format_value(v) for v in row)] for k, row in enumerate(table.chars)]
    widths = [max(len(r[i]) for r in [header, *body]) for i in range(len(header))]
    lines = ["  ".join(cell.rjust(w) for cell, w in zip(r, widths)) for r in [header, *body]]
    return "\n".join(lines)
