"""`equivect check` 의 불변식 검사 모음.

각 검사는 실패 메시지 목록을 돌려주며, 빈 목록이면 통과입니다.
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import clutching
from .characters import MultiplicityVector, check_table, compare_with_numeric, subgroup_table
from .config import Settings
from .errors import EquivectError
from .geometry import check_model
from .groups import Subgroup, check_group_axioms
from .semigroup import (
    ClassificationContext,
    ConstraintSystem,
    build_constraints,
    check_triple,
    classify_bundles,
    direct_sum,
    enumerate_triples,
    generated_up_to,
    hilbert_basis,
    line_bundle_report,
    p1_transfer,
    report,
    semigroup_report,
)

logger = logging.getLogger(__name__)


@dataclass
class CheckResult:
    name: str
    failures: list[str] = field(default_factory=list)
    skipped: str | None = None

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        out: dict = {"check": self.name, "ok": self.ok}
        if self.failures:
            out["failures"] = self.failures
        if self.skipped:
            out["skipped"] = self.skipped
        return out


def _groups_and_tables(context: ClassificationContext) -> list[str]:
    failures = check_group_axioms(context.assignment.group)
    st, _ = build_constraints(context, "RP2")
    subs = {"G": Subgroup.whole(context.assignment.group), "H": context.h, "G_chi": context.g_chi,
            "stab_minus": st.stab_minus, "stab_0": st.stab_0, "stab_1": st.stab_1}
    for name, sub in subs.items():
        table, _ = subgroup_table(sub)
        failures += [f"{name}: {f}" for f in check_table(table) + compare_with_numeric(table)]
    return failures


def _model(context: ClassificationContext) -> list[str]:
    return check_model(context.model, context.local, context.covering)


def _random_vectors(cs: ConstraintSystem, rng: np.random.Generator, count: int) -> list[np.ndarray]:
    return [rng.integers(0, 3, size=cs.n_vars) for _ in range(count)]


def _matrix_vs_checker(context: ClassificationContext, rng: np.random.Generator) -> list[str]:
    failures = []
    for space in ("RP2", "S2"):
        st, cs = build_constraints(context, space)
        for x in _random_vectors(cs, rng, 200):
            parts = cs.split(x)
            w = [MultiplicityVector(t, p) for t, p in zip(cs.tables, parts)]
            by_matrix = not np.any(cs.matrix @ x)
            by_checker = not check_triple(st, *w)
            if by_matrix != by_checker:
                failures.append(f"{space}: constraint matrix and direct checker disagree on {tuple(int(v) for v in x)}")
    return failures


def _closure(context: ClassificationContext, rng: np.random.Generator, max_rank: int) -> list[str]:
    _, cs = build_constraints(context, "RP2")
    triples = enumerate_triples(cs, max_rank)
    failures = []
    for _ in range(min(50, len(triples) ** 2)):
        a, b = (triples[int(i)] for i in rng.integers(0, len(triples), size=2))
        s = a + b
        if check_triple(cs.stabilizers, s.m_minus, s.m_0, s.m_1):
            failures.append(f"sum of {a.coords} and {b.coords} is not admissible")
    return failures


def _hilbert(context: ClassificationContext, max_rank: int, cap: int) -> list[str]:
    _, cs = build_constraints(context, "RP2")
    triples = {t.coords for t in enumerate_triples(cs, max_rank)}
    generated = {t.coords for t in generated_up_to(cs, hilbert_basis(cs, cap), max_rank)}
    if triples != generated:
        return [f"Hilbert basis generates {len(generated)} triples up to rank {max_rank}, enumeration finds {len(triples)}"]
    return []


def _p1(context: ClassificationContext, max_rank: int) -> list[str]:
    _, rp2 = build_constraints(context, "RP2")
    _, s2 = build_constraints(context, "S2")
    below = enumerate_triples(rp2, max_rank)
    above = {t.coords for t in enumerate_triples(s2, max_rank)}
    failures = []
    images = set()
    for t in below:
        up = p1_transfer(t, "toS2", rp2, s2)
        images.add(up.coords)
        if p1_transfer(up, "toRP2", rp2, s2).coords != t.coords:
            failures.append(f"round trip moves {t.coords}")
    if images != above:
        failures.append(f"P1 hits {len(images)} of {len(above)} S2 triples up to rank {max_rank}")
    return failures


def _class_counts(context: ClassificationContext, max_rank: int) -> list[str]:
    _, cs = build_constraints(context, "RP2")
    triples = enumerate_triples(cs, max_rank)
    classes = classify_bundles(context, max_rank, cs)
    factor = 2 if context.twin_regime else 1
    failures = []
    if len(classes) != factor * len(triples):
        failures.append(f"{len(classes)} classes for {len(triples)} triples")
    if context.twin_regime:
        parity = context.chi_degree % 2
        for c in classes:
            if c.chern_parity != c.twin_bit * parity:
                failures.append(f"parity {c.chern_parity} for twin bit {c.twin_bit}")
        if len(classes) >= 2:
            s = direct_sum(classes[0], classes[1])
            if s.twin_bit != classes[0].twin_bit ^ classes[1].twin_bit:
                failures.append("twin bits do not add mod 2")
    return failures


def _line_bundles(context: ClassificationContext) -> list[str]:
    data = line_bundle_report(context)
    failures = []
    if data["rank_one_count"] != data["expected"]:
        failures.append(f"{data['rank_one_count']} rank-one triples, expected {data['expected']}")
    if not data["generated_by_line_bundles"]:
        failures.append("some triple is not a sum of rank-one triples")
    return failures


def _clutching(context: ClassificationContext, rep_mats, settings: Settings) -> list[str]:
    demo = clutching.chern_demo(context, rep_mats, settings=settings)
    failures = []
    if not demo["agrees"]:
        failures.append("winding parities disagree with chi(id) mod 2")
    if demo["twisted"]["s2_winding"] != 0:
        failures.append("S2 winding of the twisted map is not zero")
    if demo["sigma_winding"] != demo["chi_degree"]:
        failures.append("sigma loop does not wind chi(id) times")
    if demo["random_maps"]["worst_residual"] > settings.tolerance:
        failures.append(f"random maps leave residual {demo['random_maps']['worst_residual']:.2e}")
    rep = clutching.build_rep_model(context, rep_mats)
    coarse = clutching.assemble_clutching(rep, "twisted", settings.samples)
    fine = clutching.assemble_clutching(rep, "twisted", 2 * coarse.samples)
    if (clutching.chern_from_winding(clutching.q_omega(coarse)).value
            != clutching.chern_from_winding(clutching.q_omega(fine)).value):
        failures.append("parity changes under refinement")
    loop = clutching.build_sigma_loop(rep, settings.samples)
    other = clutching.random_clutching(rep, np.random.default_rng(settings.seed), settings.samples)
    both = clutching.direct_sum_map(coarse, other)
    total = clutching.chern_from_winding(both).value
    parts = clutching.chern_from_winding(coarse).value + clutching.chern_from_winding(other).value
    if total != parts:
        failures.append("winding is not additive under direct sum")
    if clutching.chern_from_winding(clutching.direct_sum_map(loop, loop)).value != 2 * demo["sigma_winding"]:
        failures.append("sigma loop winding is not additive")
    return failures


def _determinism(context: ClassificationContext, max_rank: int, settings: Settings) -> list[str]:
    a = json.dumps(semigroup_report(context, max_rank, settings), sort_keys=True)
    b = json.dumps(semigroup_report(context, max_rank, settings), sort_keys=True)
    return [] if a == b else ["semigroup report differs between runs"]


def run_checks(context: ClassificationContext, rep_mats: Sequence[np.ndarray] | None = None,
               settings: Settings | None = None, max_rank: int | None = None) -> dict:
    settings = settings or Settings()
    max_rank = settings.max_rank if max_rank is None else max_rank
    rng = np.random.default_rng(settings.seed)
    suite: list[tuple[str, Callable[[], list[str]], str | None]] = [
        ("groups-and-tables", lambda: _groups_and_tables(context), None),
        ("polyhedral-model", lambda: _model(context), None),
        ("constraints-vs-checker", lambda: _matrix_vs_checker(context, rng), None),
        ("semigroup-closure", lambda: _closure(context, rng, max_rank), None),
        ("hilbert-basis", lambda: _hilbert(context, max_rank, settings.hilbert_cap), None),
        ("p1-bijection", lambda: _p1(context, max_rank), None),
        ("class-counts", lambda: _class_counts(context, max_rank), None),
        ("line-bundles", lambda: _line_bundles(context),
         None if context.twin_regime else "image is not Z_n with n odd"),
        ("clutching", lambda: _clutching(context, rep_mats, settings),
         None if context.twin_regime else "no clutching construction outside the Z_n-odd regime"),
        ("determinism", lambda: _determinism(context, max_rank, settings), None),
    ]
    # 검사 하나가 예외를 던져도 나머지는 계속 실행하고, 예외는 실패로 기록합니다
    results = []
    for name, fn, skip in suite:
        if skip:
            results.append(CheckResult(name, skipped=skip))
            continue
        try:
            failures = fn()
        except EquivectError as e:
            failures = [f"{type(e).__name__}: {e}"]
        results.append(CheckResult(name, failures))
        logger.info("[%s] %s", "PASS" if not failures else "FAIL", name)
    ok = all(r.ok for r in results)
    return report(context, kind="check", body={"ok": ok, "max_rank": max_rank,
                                                "checks": [r.to_json() for r in results]})
