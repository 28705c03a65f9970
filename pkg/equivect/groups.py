"""Finite groups as multiplication tables.

Elements are integer indices. A group built from generator permutations lists its elements in
breadth-first discovery order, so index 0 is always the identity and every other element has a
word pointer ``(parent, generator)`` with ``element = parent * generator``.
"""
from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence, TypeVar

import numpy as np
from sympy.combinatorics import Permutation

from .config import Settings
from .errors import ConsistencyError, GroupTooLargeError, InvalidSpecError

logger = logging.getLogger(__name__)

T = TypeVar("T")


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    mult: np.ndarray
    inv: np.ndarray
    id_index: int
    generators: tuple[int, ...]
    words: tuple[tuple[int, int] | None, ...]
    element_names: tuple[str, ...] | None = None
    name: str = ""

    @property
    def order(self) -> int:
        return int(self.mult.shape[0])

    def __len__(self) -> int:
        return self.order

    def mul(self, x: int, y: int) -> int:
        return int(self.mult[x, y])

    def inverse(self, x: int) -> int:
        return int(self.inv[x])

    def conjugate(self, x: int, by: int) -> int:
        """by * x * by^-1."""
        return int(self.mult[self.mult[by, x], self.inv[by]])

    def power(self, x: int, k: int) -> int:
        if k < 0:
            x, k = self.inverse(x), -k
        result, base = self.id_index, x
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def label(self, x: int) -> str:
        return self.element_names[x] if self.element_names else f"g{x}"

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mult, self.mult.T))

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name or 'anonymous'}, order={self.order})"

    # -- constructors ------------------------------------------------------
    @classmethod
    def from_table(cls, mult: np.ndarray, generators: Sequence[int] | None = None,
                   element_names: Sequence[str] | None = None, name: str = "") -> FiniteGroup:
        mult = np.asarray(mult, dtype=np.int64)
        n = mult.shape[0]
        id_candidates = [e for e in range(n) if np.array_equal(mult[e], np.arange(n))]
        if not id_candidates:
            raise InvalidSpecError("multiplication table has no identity")
        e = id_candidates[0]
        inv = np.empty(n, dtype=np.int64)
        for x in range(n):
            (hits,) = np.nonzero(mult[x] == e)
            if len(hits) != 1:
                raise InvalidSpecError(f"element {x} has no unique inverse")
            inv[x] = hits[0]
        if generators is None:
            generators = _greedy_generators(mult, e)
        words = _bfs_words(mult, e, list(generators))
        return cls(mult=mult, inv=inv, id_index=e, generators=tuple(generators), words=words,
                   element_names=tuple(element_names) if element_names else None, name=name)


def _greedy_generators(mult: np.ndarray, e: int) -> list[int]:
    gens: list[int] = []
    reached = {e}
    for x in range(mult.shape[0]):
        if x not in reached:
            gens.append(x)
            reached = _closure(mult, e, gens)
    return gens


def _closure(mult: np.ndarray, e: int, gens: Iterable[int]) -> set[int]:
    gens = list(gens)
    seen = {e}
    queue = deque([e])
    while queue:
        x = queue.popleft()
        for s in gens:
            y = int(mult[x, s])
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def _bfs_words(mult: np.ndarray, e: int, gens: list[int]) -> tuple[tuple[int, int] | None, ...]:
    words: list[tuple[int, int] | None] = [None] * mult.shape[0]
    seen = {e}
    queue = deque([e])
    while queue:
        x = queue.popleft()
        for k, s in enumerate(gens):
            y = int(mult[x, s])
            if y not in seen:
                seen.add(y)
                words[y] = (x, k)
                queue.append(y)
    if len(seen) != mult.shape[0]:
        raise InvalidSpecError("generators do not generate the whole group")
    return tuple(words)


def parse_permutation(raw, degree: int | None = None) -> Permutation:
    """One-line notation (list of ints) or cycle notation (list of lists), 0-based."""
    try:
        if raw and isinstance(raw[0], (list, tuple)):
            perm = Permutation([list(c) for c in raw], size=degree)
        else:
            perm = Permutation(list(raw), size=degree)
    except (ValueError, TypeError, IndexError) as e:
        raise InvalidSpecError(f"not a permutation: {raw!r}") from e
    return perm


def build_group(generator_permutations: Sequence, cap: int | None = None, name: str = "") -> FiniteGroup:
    """Closure of the given permutations under composition, (p*q)(x) = p(q(x))."""
    cap = Settings.group_cap if cap is None else cap
    perms = [parse_permutation(p) for p in generator_permutations]
    degree = max([p.size for p in perms] + [1])
    gens = [tuple(p.array_form + list(range(p.size, degree))) for p in perms]
    identity = tuple(range(degree))

    elements: list[tuple[int, ...]] = [identity]
    index = {identity: 0}
    words: list[tuple[int, int] | None] = [None]
    queue = deque([0])
    while queue:
        x = queue.popleft()
        px = elements[x]
        for k, s in enumerate(gens):
            y = tuple(px[s[p]] for p in range(degree))
            if y not in index:
                if len(elements) >= cap:
                    raise GroupTooLargeError(f"closure exceeds {cap} elements")
                index[y] = len(elements)
                elements.append(y)
                words.append((x, k))
                queue.append(index[y])

    arr = np.array(elements, dtype=np.int64).reshape(len(elements), degree)
    n = len(elements)
    mult = np.empty((n, n), dtype=np.int64)
    for i in range(n):
        composed = arr[i][arr]
        mult[i] = [index[tuple(row)] for row in composed.tolist()]
    inv = np.empty(n, dtype=np.int64)
    for i in range(n):
        inv[i] = int(np.nonzero(mult[i] == 0)[0][0])
    gen_indices = tuple(index[s] for s in gens)
    names = tuple(str(Permutation(list(el)).cyclic_form) for el in elements)
    logger.debug("closure of %d generators on %d points: order %d", len(gens), degree, n)
    return FiniteGroup(mult=mult, inv=inv, id_index=0, generators=gen_indices, words=tuple(words),
                       element_names=names, name=name)


def cyclic_group(n: int, name: str | None = None) -> FiniteGroup:
    if n < 1:
        raise InvalidSpecError(f"cyclic group order must be positive, got {n}")
    gen = list(range(1, n)) + [0] if n > 1 else [0]
    return build_group([gen], name=name or f"Z{n}")


def direct_product(a: FiniteGroup, b: FiniteGroup, name: str | None = None) -> FiniteGroup:
    """a x b with element (i, j) stored at index i*|b| + j."""
    nb = b.order
    mult = (a.mult[:, None, :, None] * nb + b.mult[None, :, None, :]).reshape(a.order * nb, a.order * nb)
    gens = [g * nb + b.id_index for g in a.generators] + [a.id_index * nb + h for h in b.generators]
    names = [f"({a.label(i)},{b.label(j)})" for i in range(a.order) for j in range(nb)]
    return FiniteGroup.from_table(mult, generators=gens, element_names=names,
                                  name=name or f"{a.name}x{b.name}")


def extend_on_generators(group: FiniteGroup, images: Sequence[T], mul: Callable[[T, T], T], identity: T) -> list[T]:
    """Extend generator images along the word pointers; no homomorphism check."""
    if len(images) != len(group.generators):
        raise InvalidSpecError(f"expected {len(group.generators)} generator images, got {len(images)}")
    out: list[T | None] = [None] * group.order
    out[group.id_index] = identity
    # BFS parents always precede children in index order only for build_group; walk the words instead
    pending = deque([group.id_index])
    children: dict[int, list[int]] = {}
    for y, w in enumerate(group.words):
        if w is not None:
            children.setdefault(w[0], []).append(y)
    while pending:
        x = pending.popleft()
        for y in children.get(x, ()):
            out[y] = mul(out[x], images[group.words[y][1]])
            pending.append(y)
    return out  # type: ignore[return-value]


@dataclass(frozen=True, eq=False)
class GroupHom:
    domain: FiniteGroup
    codomain: FiniteGroup
    images: tuple[int, ...]

    def __call__(self, x: int) -> int:
        return self.images[x]

    def is_homomorphism(self) -> bool:
        img = np.asarray(self.images)
        lhs = img[self.domain.mult]
        rhs = self.codomain.mult[img[:, None], img[None, :]]
        return bool(np.array_equal(lhs, rhs))

    def compose(self, other: GroupHom) -> GroupHom:
        """self after other."""
        return GroupHom(other.domain, self.codomain, tuple(self.images[i] for i in other.images))

    def image(self) -> Subgroup:
        return Subgroup.of(self.codomain, set(self.images))

    def is_injective(self) -> bool:
        return len(set(self.images)) == len(self.images)


@dataclass(frozen=True, eq=False)
class Subgroup:
    parent: FiniteGroup
    members: tuple[int, ...]
    closed: bool = field(default=True)

    @classmethod
    def of(cls, parent: FiniteGroup, members: Iterable[int]) -> Subgroup:
        ms = tuple(sorted(set(int(m) for m in members)))
        mset = set(ms)
        if parent.id_index not in mset:
            raise ConsistencyError("subgroup does not contain the identity")
        for x in ms:
            if parent.inverse(x) not in mset or any(parent.mul(x, y) not in mset for y in ms):
                raise ConsistencyError("member set is not closed")
        return cls(parent, ms, True)

    @classmethod
    def whole(cls, parent: FiniteGroup) -> Subgroup:
        return cls(parent, tuple(range(parent.order)), True)

    @classmethod
    def trivial(cls, parent: FiniteGroup) -> Subgroup:
        return cls(parent, (parent.id_index,), True)

    @property
    def order(self) -> int:
        return len(self.members)

    def __len__(self) -> int:
        return self.order

    def __contains__(self, x: int) -> bool:
        return x in self._set

    @property
    def _set(self) -> frozenset[int]:
        cached = self.__dict__.get("_member_set")
        if cached is None:
            cached = frozenset(self.members)
            object.__setattr__(self, "_member_set", cached)
        return cached

    def __eq__(self, other) -> bool:
        return isinstance(other, Subgroup) and other.parent is self.parent and other.members == self.members

    def __hash__(self) -> int:
        return hash((id(self.parent), self.members))

    def issubset(self, other: Subgroup) -> bool:
        return self._set <= other._set

    def intersection(self, other: Subgroup) -> Subgroup:
        return Subgroup(self.parent, tuple(sorted(self._set & other._set)), True)

    def is_normal(self) -> bool:
        g = self.parent
        return all(g.conjugate(k, x) in self._set for x in range(g.order) for k in self.members)

    def as_group(self) -> tuple[FiniteGroup, GroupHom]:
        """Abstract copy (index k stands for members[k]) plus its embedding into the parent."""
        pos = {m: k for k, m in enumerate(self.members)}
        sub = np.asarray(self.members)
        mult = np.vectorize(pos.__getitem__, otypes=[np.int64])(self.parent.mult[np.ix_(sub, sub)])
        names = [self.parent.label(m) for m in self.members] if self.parent.element_names else None
        group = FiniteGroup.from_table(mult, element_names=names, name=f"{self.parent.name}|sub{self.order}")
        return group, GroupHom(group, self.parent, self.members)

    def describe(self) -> dict:
        return {"order": self.order, "members": list(self.members),
                "labels": [self.parent.label(m) for m in self.members]}


def subgroup_generated(parent: FiniteGroup, indices: Iterable[int]) -> Subgroup:
    return Subgroup(parent, tuple(sorted(_closure(parent.mult, parent.id_index, indices))), True)


def kernel(h: GroupHom) -> Subgroup:
    e = h.codomain.id_index
    k = Subgroup(h.domain, tuple(x for x in range(h.domain.order) if h.images[x] == e), True)
    if not k.is_normal():
        raise ConsistencyError("kernel is not normal; the map is not a homomorphism")
    return k


def conjugacy_classes(g: FiniteGroup) -> list[tuple[int, ...]]:
    """Classes ordered by their smallest element, so the identity class comes first."""
    seen = np.full(g.order, False)
    classes = []
    for x in range(g.order):
        if seen[x]:
            continue
        cls = sorted({g.conjugate(x, y) for y in range(g.order)})
        seen[cls] = True
        classes.append(tuple(cls))
    return classes


def class_index(g: FiniteGroup, classes: Sequence[Sequence[int]]) -> np.ndarray:
    out = np.empty(g.order, dtype=np.int64)
    for c, members in enumerate(classes):
        out[list(members)] = c
    return out


def element_order(g: FiniteGroup, x: int) -> int:
    k, y = 1, x
    while y != g.id_index:
        y = g.mul(y, x)
        k += 1
    return k


def exponent(g: FiniteGroup) -> int:
    return math.lcm(*(element_order(g, x) for x in range(g.order)))


def power_map(g: FiniteGroup, k: int) -> np.ndarray:
    return np.array([g.power(x, k) for x in range(g.order)], dtype=np.int64)


def check_group_axioms(g: FiniteGroup, rng: np.random.Generator | None = None) -> list[str]:
    """Identity/inverse laws, and associativity (exhaustive up to order 64, 10^4 random triples above)."""
    failures = []
    n, e = g.order, g.id_index
    if not (np.array_equal(g.mult[e], np.arange(n)) and np.array_equal(g.mult[:, e], np.arange(n))):
        failures.append("identity law")
    if not np.all(g.mult[np.arange(n), g.inv] == e):
        failures.append("inverse law")
    if n <= 64:
        lhs = g.mult[g.mult[:, :, None], np.arange(n)[None, None, :]]
        rhs = g.mult[np.arange(n)[:, None, None], g.mult[None, :, :]]
        if not np.array_equal(lhs, rhs):
            failures.append("associativity")
    else:
        rng = rng or np.random.default_rng(0)
        a, b, c = rng.integers(0, n, size=(3, 10_000))
        if not np.array_equal(g.mult[g.mult[a, b], c], g.mult[a, g.mult[b, c]]):
            failures.append("associativity")
    return failures
