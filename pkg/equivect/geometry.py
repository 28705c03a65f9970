"""Standard finite rotation groups, the equivariant polyhedra they act on, and exact
stabilizer/transporter searches on S^2 and RP^2."""
from __future__ import annotations

import functools
import itertools
import logging
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal, Protocol, Sequence

import numpy as np

from .cyclotomic import (
    CycloNum,
    ExactVec3,
    cos_2pi,
    cross,
    dot,
    golden_ratio,
    is_zero_vec,
    sin_2pi,
    span_rank,
    vec,
    vec_add,
    vec_json,
    vec_neg,
    vec_promote,
    vec_scale,
    vec_sub,
    vec_to_float,
)
from .errors import ConsistencyError, DegenerateChainError, InvalidSpecError, OutOfScopeError
from .groups import FiniteGroup, GroupHom, Subgroup, cyclic_group, direct_product, extend_on_generators

logger = logging.getLogger(__name__)

Space = Literal["S2", "RP2"]


class ExactMat3:
    __slots__ = ("rows", "conductor", "_key")

    def __init__(self, rows: Sequence[Sequence], conductor: int | None = None):
        entries = [[c if isinstance(c, CycloNum) else CycloNum.rational(c) for c in row] for row in rows]
        if len(entries) != 3 or any(len(r) != 3 for r in entries):
            raise InvalidSpecError("a rotation matrix must be 3x3")
        if conductor is None:
            conductor = math.lcm(*(c.conductor for r in entries for c in r))
        self.rows: tuple[tuple[CycloNum, ...], ...] = tuple(tuple(c.promote(conductor) for c in r) for r in entries)
        self.conductor = conductor
        self._key = None

    @classmethod
    def identity(cls, conductor: int = 1) -> ExactMat3:
        return cls.diag(1, 1, 1, conductor)

    @classmethod
    def diag(cls, a, b, c, conductor: int = 1) -> ExactMat3:
        return cls([[a, 0, 0], [0, b, 0], [0, 0, c]], conductor)

    @classmethod
    def from_columns(cls, u: ExactVec3, v: ExactVec3, w: ExactVec3) -> ExactMat3:
        return cls([[u[i], v[i], w[i]] for i in range(3)])

    @classmethod
    def from_json(cls, data) -> ExactMat3:
        try:
            return cls([[CycloNum.from_json(c) if isinstance(c, dict) else CycloNum.rational(Fraction(c))
                         for c in row] for row in data])
        except (KeyError, TypeError, ValueError) as e:
            raise InvalidSpecError(f"malformed exact matrix: {e}") from e

    def promote(self, conductor: int) -> ExactMat3:
        return self if conductor == self.conductor else ExactMat3(self.rows, conductor)

    def __matmul__(self, other):
        if isinstance(other, ExactMat3):
            a, b = (self, other) if self.conductor == other.conductor else self._common(other)
            return ExactMat3([[sum((a.rows[i][k] * b.rows[k][j] for k in range(1, 3)), a.rows[i][0] * b.rows[0][j])
                               for j in range(3)] for i in range(3)], a.conductor)
        return tuple(self.rows[i][0] * other[0] + self.rows[i][1] * other[1] + self.rows[i][2] * other[2]
                     for i in range(3))

    def _common(self, other: ExactMat3) -> tuple[ExactMat3, ExactMat3]:
        m = math.lcm(self.conductor, other.conductor)
        return self.promote(m), other.promote(m)

    def __neg__(self) -> ExactMat3:
        return ExactMat3([[-c for c in r] for r in self.rows], self.conductor)

    def transpose(self) -> ExactMat3:
        return ExactMat3([[self.rows[j][i] for j in range(3)] for i in range(3)], self.conductor)

    def det(self) -> CycloNum:
        r = self.rows
        return dot(r[0], cross(r[1], r[2]))

    def inverse(self) -> ExactMat3:
        r = self.rows
        d = self.det()
        if d.is_zero():
            raise ZeroDivisionError("singular matrix")
        cols = [cross(r[1], r[2]), cross(r[2], r[0]), cross(r[0], r[1])]
        return ExactMat3([[c[i] / d for c in cols] for i in range(3)], self.conductor)

    def is_orthogonal(self) -> bool:
        return self.transpose() @ self == ExactMat3.identity(self.conductor)

    def is_real(self) -> bool:
        return all(c.is_real() for r in self.rows for c in r)

    def key(self) -> tuple:
        if self._key is None:
            self._key = tuple(c.coeffs for r in self.rows for c in r)
        return self._key

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactMat3):
            return NotImplemented
        if other.conductor != self.conductor:
            a, b = self._common(other)
            return a.key() == b.key()
        return self.key() == other.key()

    def __hash__(self) -> int:
        # entry hashes do not depend on the conductor, matching the promoting __eq__
        return hash(tuple(hash(c) for r in self.rows for c in r))

    def to_numpy(self) -> np.ndarray:
        return np.array([[c.to_complex().real for c in r] for r in self.rows])

    def to_json(self) -> list[list[dict]]:
        return [[c.to_json() for c in r] for r in self.rows]

    def __repr__(self) -> str:
        return f"ExactMat3({np.array2string(self.to_numpy(), precision=4)})"


# -- standard subgroups -------------------------------------------------------------

@dataclass(frozen=True)
class ImageTag:
    kind: Literal["Z", "D", "T", "O", "I"]
    n: int = 0

    def __str__(self) -> str:
        return f"{self.kind}{self.n}" if self.kind in ("Z", "D") else self.kind

    @classmethod
    def parse(cls, text: str) -> ImageTag:
        text = text.strip()
        if text in ("T", "O", "I"):
            return cls(text)  # type: ignore[arg-type]
        if text[:1] in ("Z", "D") and text[1:].isdigit() and int(text[1:]) >= 1:
            return cls(text[0], int(text[1:]))  # type: ignore[arg-type]
        if text in ("SO2", "O2", "SO3"):
            raise OutOfScopeError(f"image {text} is infinite; only finite images are classified")
        raise InvalidSpecError(f"unknown image tag {text!r}")

    @property
    def order(self) -> int:
        return {"Z": self.n, "D": 2 * self.n, "T": 12, "O": 24, "I": 60}[self.kind]

    @property
    def bipyramid_size(self) -> int | None:
        """m of the bipyramid K_m this image acts on (None for the Platonic models)."""
        if self.kind not in ("Z", "D"):
            return None
        return 2 * self.n if self.n % 2 else self.n

    @property
    def conductor(self) -> int:
        if self.kind in ("T", "O"):
            return 4
        if self.kind == "I":
            return 20
        return math.lcm(4, self.bipyramid_size)

    @property
    def is_zn_odd(self) -> bool:
        return self.kind == "Z" and self.n % 2 == 1


def rotation_a(n: int, conductor: int | None = None) -> ExactMat3:
    """Rotation by 2 pi / n about the z-axis."""
    conductor = conductor or math.lcm(4, n)
    c, s = cos_2pi(1, n, conductor), sin_2pi(1, n, conductor)
    z = CycloNum.zero(conductor)
    return ExactMat3([[c, -s, z], [s, c, z], [z, z, 1]], conductor)


def rotation_b(conductor: int = 1) -> ExactMat3:
    """Rotation by pi about the x-axis."""
    return ExactMat3.diag(1, -1, -1, conductor)


def cyclic_coordinate_permutation(conductor: int = 1) -> ExactMat3:
    """(x, y, z) -> (z, x, y); maps e1 -> e2 -> e3 -> e1."""
    return ExactMat3([[0, 0, 1], [1, 0, 0], [0, 1, 0]], conductor)


# C b C^-1 = a_2 for this C, which turns a <b> image into the standard Z_2
D1_CONJUGATOR = ExactMat3([[0, 1, 0], [0, 0, 1], [1, 0, 0]])


def icosahedron_vertices(conductor: int = 20) -> list[ExactVec3]:
    phi = golden_ratio(conductor)
    out = []
    for s1, s2 in itertools.product((1, -1), repeat=2):
        base = (CycloNum.zero(conductor), CycloNum.rational(s1, conductor), phi * s2)
        for shift in range(3):
            out.append(tuple(base[(k - shift) % 3] for k in range(3)))
    return out


def _icosahedral_five_fold(conductor: int = 20) -> ExactMat3:
    # the rotation about u carrying its neighbour w1 to the adjacent neighbour w2
    phi = golden_ratio(conductor)
    u = vec(0, 1, phi, conductor)
    w1 = vec(0, -1, phi, conductor)
    w2 = vec(phi, 0, 1, conductor)
    f1 = ExactMat3.from_columns(u, w1, cross(u, w1))
    f2 = ExactMat3.from_columns(u, w2, cross(u, w2))
    return f2 @ f1.inverse()


def standard_rotations(tag: ImageTag, conductor: int | None = None) -> list[ExactMat3]:
    m = conductor or tag.conductor
    if tag.kind == "Z":
        return [rotation_a(tag.n, m)] if tag.n > 1 else [ExactMat3.identity(m)]
    if tag.kind == "D":
        return [rotation_a(tag.n, m), rotation_b(m)]
    if tag.kind == "T":
        return [cyclic_coordinate_permutation(m), ExactMat3.diag(-1, -1, 1, m)]
    if tag.kind == "O":
        return [cyclic_coordinate_permutation(m), rotation_a(4, m)]
    return [cyclic_coordinate_permutation(m), _icosahedral_five_fold(m)]


def matrix_closure(generators: Sequence[ExactMat3], conductor: int, cap: int = 200) -> list[ExactMat3]:
    gens = [g.promote(conductor) for g in generators]
    ident = ExactMat3.identity(conductor)
    seen = {ident}
    out = [ident]
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = x @ g
            if y not in seen:
                if len(out) >= cap:
                    raise OutOfScopeError("matrix group is not finite within the supported range")
                seen.add(y)
                out.append(y)
                queue.append(y)
    return out


@functools.lru_cache(maxsize=None)
def standard_group(tag: ImageTag, conductor: int) -> frozenset[ExactMat3]:
    group = frozenset(matrix_closure(standard_rotations(tag, conductor), conductor))
    if len(group) != tag.order:
        raise ConsistencyError(f"standard {tag} closes to {len(group)} elements")
    return group


def identify_image(matrices: Sequence[ExactMat3]) -> tuple[ImageTag, ExactMat3 | None]:
    """Exact comparison of the image set against Z_n, D_n, T, O, I in standard position.

    Returns the tag and, for the image <b> (= D_1), the conjugator that rewrites it as Z_2.
    """
    m_in = math.lcm(*(m.conductor for m in matrices))
    image = {m.promote(m_in) for m in matrices}
    k = len(image)
    z_axis_fixed = all(m.rows[2][2] == 1 for m in image)
    z_axis_kept = all(m.rows[2][2] == 1 or m.rows[2][2] == -1 for m in image)
    candidates = [ImageTag("Z", k)] if z_axis_fixed else []
    if k % 2 == 0 and k >= 4 and z_axis_kept:
        candidates.append(ImageTag("D", k // 2))
    candidates += [ImageTag(t) for t, order in (("T", 12), ("O", 24), ("I", 60)) if order == k]
    for tag in candidates:
        conductor = math.lcm(m_in, tag.conductor)
        if {m.promote(conductor) for m in image} == standard_group(tag, conductor):
            return tag, None
    if k == 2 and image == {ExactMat3.identity(m_in), rotation_b(m_in)}:
        return ImageTag("Z", 2), D1_CONJUGATOR
    raise OutOfScopeError("image of rho_bar is not a finite rotation group in standard position",
                          hint="conjugate the action so its image is one of Z_n, D_n, T, O, I as generated by a_n, b")


# -- actions -------------------------------------------------------------------------

class OrthogonalAction(Protocol):
    group: FiniteGroup
    matrices: tuple[ExactMat3, ...]
    conductor: int


@dataclass(frozen=True, eq=False)
class RotationAssignment:
    group: FiniteGroup
    matrices: tuple[ExactMat3, ...]
    image_tag: ImageTag
    conductor: int
    conjugator: ExactMat3 | None = None

    def act(self, x: int, p: ExactVec3) -> ExactVec3:
        return self.matrices[x] @ p

    def kernel(self) -> Subgroup:
        ident = ExactMat3.identity(self.conductor)
        return Subgroup.of(self.group, [x for x, m in enumerate(self.matrices) if m == ident])


def make_assignment(group: FiniteGroup, generator_matrices: Sequence[ExactMat3],
                    expected: ImageTag | None = None) -> RotationAssignment:
    """Extend rho_bar from generators, verify it is a homomorphism into SO(3) and identify its image."""
    if len(generator_matrices) != len(group.generators):
        raise InvalidSpecError(f"{len(group.generators)} generators but {len(generator_matrices)} rho_bar entries")
    m_in = math.lcm(1, *(m.conductor for m in generator_matrices))
    gens = [m.promote(m_in) for m in generator_matrices]
    one = CycloNum.one(m_in)
    for k, m in enumerate(gens):
        if not m.is_real() or not m.is_orthogonal() or m.det() != one:
            raise InvalidSpecError(f"rho_bar of generator {k} is not a real rotation matrix")
    mats = extend_on_generators(group, gens, lambda a, b: a @ b, ExactMat3.identity(m_in))
    for x in range(group.order):
        for k, s in enumerate(group.generators):
            if mats[group.mul(x, s)] != mats[x] @ gens[k]:
                raise InvalidSpecError("rho_bar does not extend to a homomorphism",
                                       hint="check that the rotation images satisfy the generator relations")
    return _finish_assignment(group, mats, expected)


def _finish_assignment(group: FiniteGroup, mats: Sequence[ExactMat3], expected: ImageTag | None) -> RotationAssignment:
    tag, conjugator = identify_image(mats)
    seen_tag = ImageTag("D", 1) if conjugator is not None else tag
    if expected is not None and expected != seen_tag and expected != tag:
        raise InvalidSpecError(f"image is {seen_tag}, spec expects {expected}")
    conductor = math.lcm(tag.conductor, *(m.conductor for m in mats))
    mats = [m.promote(conductor) for m in mats]
    if conjugator is not None:
        c = conjugator.promote(conductor)
        ct = c.transpose()
        mats = [c @ m @ ct for m in mats]
    logger.debug("rho_bar image %s (conductor %d%s)", tag, conductor, ", from D1" if conjugator else "")
    return RotationAssignment(group, tuple(mats), tag, conductor, conjugator)


def restrict_assignment(assignment: RotationAssignment, subgroup: Subgroup) -> tuple[RotationAssignment, GroupHom]:
    sub, embedding = subgroup.as_group()
    mats = [assignment.matrices[m] for m in subgroup.members]
    return _finish_assignment(sub, mats, None), embedding


@dataclass(frozen=True, eq=False)
class CoveringGroup:
    """G x Z acting on S^2 through rho_hat(g, g0^j) = rho_bar(g) (-id)^j."""
    base: RotationAssignment
    group: FiniteGroup
    matrices: tuple[ExactMat3, ...]
    p1: GroupHom

    @property
    def conductor(self) -> int:
        return self.base.conductor

    def act(self, x: int, p: ExactVec3) -> ExactVec3:
        return self.matrices[x] @ p

    def lift(self, g: int, j: int = 0) -> int:
        return 2 * g + j

    def kernel(self) -> Subgroup:
        ident = ExactMat3.identity(self.conductor)
        return Subgroup.of(self.group, [x for x, m in enumerate(self.matrices) if m == ident])


def covering_group(assignment: RotationAssignment) -> CoveringGroup:
    g = assignment.group
    gz = direct_product(g, cyclic_group(2, "Z"), name=f"{g.name or 'G'}xZ")
    mats = tuple(m if j == 0 else -m for m in assignment.matrices for j in (0, 1))
    p1 = GroupHom(gz, g, tuple(x // 2 for x in range(gz.order)))
    return CoveringGroup(assignment, gz, mats, p1)


# -- stabilizers -----------------------------------------------------------------

def _fixes(m: ExactMat3, p: ExactVec3, sign: int) -> bool:
    image = m @ p
    return all((a - b * sign).is_zero() for a, b in zip(image, p))


def stabilizer_point(action: OrthogonalAction, point: ExactVec3, space: Space) -> Subgroup:
    p = vec_promote(point, action.conductor)
    if is_zero_vec(p):
        raise InvalidSpecError("stabilizer of the zero vector")
    signs = (1,) if space == "S2" else (1, -1)
    members = [x for x, m in enumerate(action.matrices) if any(_fixes(m, p, s) for s in signs)]
    return Subgroup.of(action.group, members)


def stabilizer_chain(action: OrthogonalAction, chain: Sequence[ExactVec3], space: Space) -> Subgroup:
    """Pointwise stabilizer of a polyline. In RP2 mode one common sign must work for every point."""
    pts = [vec_promote(p, action.conductor) for p in chain]
    if span_rank(pts) < 2:
        raise DegenerateChainError("chain points span fewer than two dimensions")
    signs = (1,) if space == "S2" else (1, -1)
    members = [x for x, m in enumerate(action.matrices)
               if any(all(_fixes(m, p, s) for p in pts) for s in signs)]
    return Subgroup.of(action.group, members)


def all_transporters(action: OrthogonalAction, p: ExactVec3, q: ExactVec3, space: Space) -> list[int]:
    p = vec_promote(p, action.conductor)
    q = vec_promote(q, action.conductor)
    targets = [q] if space == "S2" else [q, vec_neg(q)]
    out = []
    for x, m in enumerate(action.matrices):
        image = m @ p
        if any(all((a - b).is_zero() for a, b in zip(image, t)) for t in targets):
            out.append(x)
    return out


def transporter(action: OrthogonalAction, p: ExactVec3, q: ExactVec3, space: Space) -> int | None:
    """Smallest element index carrying p to q (to +-q in RP2 mode), or None."""
    found = all_transporters(action, p, q, space)
    return found[0] if found else None


# -- polyhedral models ------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Cell:
    label: str
    vertices: tuple[str, ...]
    marker: ExactVec3
    curved: bool = False


@dataclass(frozen=True, eq=False)
class PolyhedralModel:
    tag: str
    conductor: int
    vertices: dict[str, ExactVec3]
    edges: tuple[Cell, ...]
    faces: tuple[Cell, ...]
    d_minus: ExactVec3
    d0: ExactVec3
    d1: ExactVec3
    chains: dict[str, tuple[ExactVec3, ...]]
    clutching_n: int | None = None
    extras: dict = field(default_factory=dict)

    def special_points(self) -> dict[str, ExactVec3]:
        return {"d-1": self.d_minus, "d0": self.d0, "d1": self.d1}

    def edge(self, label: str) -> Cell:
        return next(e for e in self.edges if e.label == label)


def _midpoint(a: ExactVec3, b: ExactVec3) -> ExactVec3:
    return vec_scale(vec_add(a, b), Fraction(1, 2))


def _mean(points: Sequence[ExactVec3]) -> ExactVec3:
    total = points[0]
    for p in points[1:]:
        total = vec_add(total, p)
    return vec_scale(total, Fraction(1, len(points)))


def _face_cells(faces: Sequence[tuple[str, tuple[str, ...]]], edges: Sequence[Cell]) -> tuple[Cell, ...]:
    by_ends = {frozenset(e.vertices): e for e in edges}
    out = []
    for label, vs in faces:
        rim = [by_ends[frozenset(pair)] for pair in ((vs[0], vs[1]), (vs[1], vs[2]), (vs[2], vs[0]))]
        out.append(Cell(label, vs, _mean([e.marker for e in rim])))
    return tuple(out)


def _bipyramid(m: int, conductor: int) -> tuple[dict[str, ExactVec3], tuple[Cell, ...], tuple[Cell, ...]]:
    verts = {f"v{i}": vec(cos_2pi(i, m, conductor), sin_2pi(i, m, conductor), 0, conductor) for i in range(m)}
    verts["S"] = vec(0, 0, -1, conductor)
    verts["N"] = vec(0, 0, 1, conductor)
    edges = []
    for i in range(m):
        a, b = f"v{i}", f"v{(i + 1) % m}"
        if m == 2:
            # K_2 equator edges are the half circles through (0, +-1, 0)
            edges.append(Cell(f"e{i}", (a, b), vec(0, 1 if i == 0 else -1, 0, conductor), curved=True))
        else:
            edges.append(Cell(f"e{i}", (a, b), _midpoint(verts[a], verts[b])))
    for pole in ("S", "N"):
        for i in range(m):
            edges.append(Cell(f"{pole.lower()}{i}", (pole, f"v{i}"), _midpoint(verts[pole], verts[f"v{i}"])))
    faces = []
    for pole in ("S", "N"):
        for i in range(m):
            a, b = f"v{i}", f"v{(i + 1) % m}"
            edge_set = [e for e in edges if set(e.vertices) <= {pole, a, b}]
            # for m = 2 both equator edges join v0 and v1; the face through e_i uses its own one
            rim = [e for e in edge_set if not e.curved or e.label == f"e{i}"]
            faces.append(Cell(f"f{pole}{i}", (pole, a, b), _mean([e.marker for e in rim])))
    return verts, tuple(edges), tuple(faces)


def _platonic(points: dict[str, ExactVec3], edge_len_sq: CycloNum,
              f_minus: tuple[str, str, str]) -> tuple[tuple[Cell, ...], tuple[Cell, ...]]:
    names = list(points)
    adjacent = set()
    edges = []
    for a, b in itertools.combinations(names, 2):
        d = vec_sub(points[a], points[b])
        if dot(d, d) == edge_len_sq:
            adjacent.add(frozenset((a, b)))
    ring = [(f_minus[i], f_minus[(i + 1) % 3]) for i in range(3)]
    labelled = {frozenset(pair): f"e{i}" for i, pair in enumerate(ring)}
    counter = itertools.count(3)
    for a, b in itertools.combinations(names, 2):
        if frozenset((a, b)) in adjacent:
            label = labelled.get(frozenset((a, b))) or f"e{next(counter)}"
            edges.append(Cell(label, (a, b), _midpoint(points[a], points[b])))
    tri = [t for t in itertools.combinations(names, 3)
           if all(frozenset(p) in adjacent for p in itertools.combinations(t, 2))]
    faces = []
    counter = itertools.count(3)
    for t in tri:
        ts = set(t)
        if ts == set(f_minus):
            faces.append(("f-1", tuple(f_minus)))
            continue
        shared = [i for i, pair in enumerate(ring) if set(pair) <= ts]
        faces.append((f"f{shared[0]}" if shared else f"f{next(counter)}", t))
    return tuple(edges), _face_cells(faces, edges)


def _nearest_first(model_v0: ExactVec3, a: ExactVec3, b: ExactVec3) -> tuple[ExactVec3, ExactVec3]:
    da = dot(vec_sub(a, model_v0), vec_sub(a, model_v0))
    db = dot(vec_sub(b, model_v0), vec_sub(b, model_v0))
    if da == db:
        raise ConsistencyError("both boundary points of the fundamental domain are equidistant from v0")
    return (a, b) if da.to_complex().real < db.to_complex().real else (b, a)


def build_model(assignment: RotationAssignment) -> PolyhedralModel:
    tag = assignment.image_tag
    m_cond = assignment.conductor
    if tag.kind in ("Z", "D"):
        m = tag.bipyramid_size
        verts, edges, faces = _bipyramid(m, m_cond)
        e0 = edges[0]
        v0, v1 = verts["v0"], verts["v1"]
        if tag.kind == "Z":
            domain = (v0, e0.marker, v1) if e0.curved else (v0, v1)
            d0, d1 = _nearest_first(v0, v0, v1)
        else:
            domain = (v0, e0.marker)
            d0, d1 = _nearest_first(v0, v0, e0.marker)
        d_minus = verts["S"]
        name = f"K_{m}"
    else:
        if tag.kind in ("T", "O"):
            points = {"v0": vec(1, 0, 0, m_cond), "v1": vec(0, 1, 0, m_cond), "v2": vec(0, 0, -1, m_cond),
                      "x-": vec(-1, 0, 0, m_cond), "y-": vec(0, -1, 0, m_cond), "z+": vec(0, 0, 1, m_cond)}
            edges, faces = _platonic(points, CycloNum.rational(2, m_cond), ("v0", "v1", "v2"))
            name = "K_octa"
        else:
            phi = golden_ratio(m_cond)
            fixed = {"v0": vec(0, 1, phi, m_cond), "v1": vec(phi, 0, 1, m_cond), "v2": vec(0, -1, phi, m_cond)}
            points = dict(fixed)
            rest = [p for p in icosahedron_vertices(m_cond) if p not in fixed.values()]
            points.update({f"w{k}": p for k, p in enumerate(rest)})
            edges, faces = _platonic(points, CycloNum.rational(4, m_cond), ("v0", "v1", "v2"))
            name = "K_icosa"
        verts = points
        v0, v1 = verts["v0"], verts["v1"]
        e0 = next(e for e in edges if e.label == "e0")
        if tag.kind == "T":
            domain = (v0, v1)
            d0, d1 = _nearest_first(v0, v0, v1)
        else:
            domain = (v0, e0.marker)
            d0, d1 = _nearest_first(v0, v0, e0.marker)
        d_minus = next(f for f in faces if f.label == "f-1").marker
    chains = {"D": tuple(domain), "C0": (d_minus, d0), "C1": (d_minus, d1)}
    model = PolyhedralModel(
        tag=name, conductor=m_cond, vertices=dict(verts), edges=edges, faces=faces,
        d_minus=d_minus, d0=d0, d1=d1, chains=chains,
        clutching_n=tag.n if tag.is_zn_odd else None,
    )
    logger.debug("%s for %s: %d vertices, %d edges, %d faces", name, tag, len(verts), len(edges), len(faces))
    return model


# -- model checks -------------------------------------------------------------------

def _vec_set(points) -> frozenset:
    return frozenset(tuple(points_i) for points_i in points)


def cells_permuted(model: PolyhedralModel, action: OrthogonalAction) -> bool:
    vset = _vec_set(model.vertices.values())
    eset = _vec_set(e.marker for e in model.edges)
    fset = _vec_set(f.marker for f in model.faces)
    for m in action.matrices:
        if (_vec_set(m @ v for v in model.vertices.values()) != vset
                or _vec_set(m @ e.marker for e in model.edges) != eset
                or _vec_set(m @ f.marker for f in model.faces) != fset):
            return False
    return True


def on_surface(model: PolyhedralModel, p: ExactVec3) -> bool:
    """p is a vertex, an edge marker, or lies in a (flat) face with barycentric weights in [0, 1]."""
    if p in model.vertices.values() or any(p == e.marker for e in model.edges):
        return True
    for f in model.faces:
        a, b, c = (model.vertices[v] for v in f.vertices)
        frame = ExactMat3.from_columns(a, b, c)
        if frame.det().is_zero():
            continue
        weights = frame.inverse() @ p
        total = weights[0] + weights[1] + weights[2]
        if total == 1 and all(w.is_zero() or w.to_complex().real > 0 for w in weights):
            return True
    return False


def _half_edges(model: PolyhedralModel) -> dict[frozenset, list[tuple[str, int]]]:
    pieces: dict[frozenset, list[tuple[str, int]]] = {}
    for e in model.edges:
        a, b = (model.vertices[v] for v in e.vertices)
        pieces.setdefault(frozenset((a, e.marker)), []).append((e.label, 0))
        pieces.setdefault(frozenset((e.marker, b)), []).append((e.label, 1))
        if not e.curved:
            pieces.setdefault(frozenset((a, b)), []).extend([(e.label, 0), (e.label, 1)])
    return pieces


def orbit_coverage(model: PolyhedralModel, covering: CoveringGroup,
                   names: Sequence[str] | None = None) -> tuple[set[tuple[str, int]], int]:
    """Edge halves met by the covering-group orbit of the named chains (default D, C0 and C1).

    Returns (covered, total).
    """
    pieces = _half_edges(model)
    covered: set[tuple[str, int]] = set()
    for chain in (model.chains[k] for k in (names or model.chains)):
        for m in covering.matrices:
            img = [m @ p for p in chain]
            for p, q in zip(img, img[1:]):
                covered.update(pieces.get(frozenset((p, q)), ()))
    return covered, 2 * len(model.edges)


def check_stabilizer_lift(model: PolyhedralModel, covering: CoveringGroup) -> list[str]:
    """p1 maps each S^2 stabilizer injectively onto the RP^2 stabilizer, for special points and chains."""
    failures = []
    base = covering.base
    targets: list[tuple[str, Sequence[ExactVec3]]] = [(k, [p]) for k, p in model.special_points().items()]
    targets += [(k, c) for k, c in model.chains.items()]
    for name, pts in targets:
        if len(pts) == 1:
            up = stabilizer_point(covering, pts[0], "S2")
            down = stabilizer_point(base, pts[0], "RP2")
        else:
            up = stabilizer_chain(covering, pts, "S2")
            down = stabilizer_chain(base, pts, "RP2")
        images = [covering.p1(x) for x in up.members]
        if sorted(set(images)) != list(down.members):
            failures.append(f"p1 image of the S2 stabilizer at {name} differs from the RP2 stabilizer")
        if len(set(images)) != len(images):
            failures.append(f"p1 is not injective on the S2 stabilizer at {name}")
    return failures


def check_model(model: PolyhedralModel, assignment: RotationAssignment, covering: CoveringGroup) -> list[str]:
    failures = []
    for name, p in model.special_points().items():
        if not on_surface(model, p):
            failures.append(f"special point {name} is off the surface")
    if model.d0 == model.d1:
        failures.append("d0 and d1 coincide")
    if not cells_permuted(model, covering):
        failures.append("covering group does not permute the cells")
    covered, total = orbit_coverage(model, covering)
    if len(covered) != total:
        failures.append(f"orbit of the fundamental domain covers {len(covered)} of {total} edge halves")
    if model.tag in ("K_octa", "K_icosa"):
        # on the Platonic models D alone is a fundamental domain for the covering group
        covered, total = orbit_coverage(model, covering, ("D",))
        if len(covered) != total:
            failures.append(f"orbit of D alone covers {len(covered)} of {total} edge halves")
    if [covering.p1(x) for x in covering.kernel().members] != list(assignment.kernel().members):
        failures.append("kernel of the S2 action differs from the kernel on RP2")
    failures += check_stabilizer_lift(model, covering)
    return failures


def model_json(model: PolyhedralModel) -> dict:
    def point(p):
        return {"approx": [round(x, 12) for x in vec_to_float(p)], "exact": vec_json(p)}

    return {
        "model": model.tag,
        "conductor": model.conductor,
        "vertices": {k: point(v) for k, v in model.vertices.items()},
        "edges": [{"label": e.label, "ends": list(e.vertices), "marker": point(e.marker), "curved": e.curved}
                  for e in model.edges],
        "faces": [{"label": f.label, "vertices": list(f.vertices), "marker": point(f.marker)} for f in model.faces],
        "special_points": {k: point(p) for k, p in model.special_points().items()},
        "chains": {k: [point(p) for p in c] for k, c in model.chains.items()},
    }
