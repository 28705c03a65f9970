"""Minimal generating sets of {x >= 0 integer : A x = 0} by Contejean-Devie completion."""
from __future__ import annotations

import logging
from typing import Iterable, Sequence

import numpy as np

from .config import Settings
from .errors import HilbertBasisCapError

logger = logging.getLogger(__name__)


def minimalize(vectors: Iterable[np.ndarray]) -> list[np.ndarray]:
    """Componentwise-minimal elements of the given vectors."""
    out: list[np.ndarray] = []
    for v in vectors:
        if all(not np.all(v >= g) for g in out):
            out = [g for g in out if not np.all(g >= v)]
            out.append(v)
    return out


def hilbert_basis(a: np.ndarray, cap: int | None = None) -> list[np.ndarray]:
    """Hilbert basis of the monoid of non-negative integer solutions of a x = 0.

    Candidates start at the unit vectors; a non-solution x is extended by e_j only when
    <a x, a e_j> < 0, and anything dominating a found solution is discarded.
    """
    cap = Settings.hilbert_cap if cap is None else cap
    a = np.asarray(a, dtype=np.int64)
    n = a.shape[1]
    if a.shape[0] == 0:
        if n > cap:
            raise HilbertBasisCapError(f"Hilbert basis exceeds {cap} elements")
        return [np.eye(n, dtype=np.int64)[i] for i in range(n)]
    units = np.eye(n, dtype=np.int64)
    images = a.T  # images[j] = a e_j
    basis: list[np.ndarray] = []
    frontier = {tuple(u) for u in units}
    rounds = 0
    while frontier:
        rounds += 1
        candidates = [np.array(v, dtype=np.int64) for v in sorted(frontier)]
        solved = [v for v in candidates if not np.any(a @ v)]
        for v in solved:
            if all(not np.all(v >= b) for b in basis):
                basis.append(v)
        if len(basis) > cap:
            raise HilbertBasisCapError(f"Hilbert basis exceeds {cap} elements")
        nxt: set[tuple[int, ...]] = set()
        for v in candidates:
            av = a @ v
            if not np.any(av):
                continue
            for j in range(n):
                if int(av @ images[j]) < 0:
                    w = v + units[j]
                    if all(not np.all(w >= b) for b in basis):
                        nxt.add(tuple(int(x) for x in w))
        if len(nxt) > 50 * cap:
            raise HilbertBasisCapError(f"completion frontier exceeds {50 * cap} candidates")
        frontier = nxt
    logger.debug("Hilbert basis of %dx%d system: %d elements after %d rounds", a.shape[0], n, len(basis), rounds)
    return sorted(minimalize(basis), key=lambda v: tuple(v))


def combinations_up_to(generators: Sequence[np.ndarray], weights: np.ndarray, max_weight: int) -> set[tuple[int, ...]]:
    """All non-zero non-negative integer combinations of generators with weight . x <= max_weight."""
    if not generators:
        return set()
    zero = tuple(0 for _ in range(len(generators[0])))
    reached = {zero}
    for g in generators:
        wg = int(weights @ g)
        if wg <= 0:
            continue
        grown = set(reached)
        for base in reached:
            current = np.array(base) + g
            while int(weights @ current) <= max_weight:
                grown.add(tuple(int(x) for x in current))
                current = current + g
        reached = grown
    reached.discard(zero)
    return reached
