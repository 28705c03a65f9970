import json

import pytest

from equivect.characters import MultiplicityVector
from equivect.config import Settings
from equivect.errors import ContextMismatchError, HilbertBasisCapError, InvalidSpecError
from equivect.geometry import ImageTag
from equivect.semigroup import (
    build_constraints,
    check_triple,
    classify_bundles,
    classify_report,
    direct_sum,
    enumerate_triples,
    generated_up_to,
    hilbert_basis,
    line_bundle_report,
    p1_transfer,
    semigroup_report,
    stabilizers_report,
    zero_class,
)


def coords(triples):
    return {t.coords for t in triples}


@pytest.mark.parametrize("name, n", [("z3", 3), ("z5", 5), ("z7", 7)])
def test_odd_cyclic_stabilizers(context, name, n):
    st, cs = build_constraints(context(name), "RP2")
    assert [s.order for s in st.points] == [n, 1, 1]
    assert st.transporter_g is not None
    assert cs.forced_zero == ()


@pytest.mark.parametrize("name, n", [("z3", 3), ("z5", 5), ("z7", 7)])
def test_odd_cyclic_rank_one(context, name, n):
    _, cs = build_constraints(context(name), "RP2")
    triples = enumerate_triples(cs, 1)
    assert len(triples) == n
    for t in triples:
        assert t.m_0.mults == (1,) and t.m_1.mults == (1,)


def test_z3_semigroup(context):
    _, cs = build_constraints(context("z3"), "RP2")
    triples = enumerate_triples(cs, 2)
    assert len(triples) == 9
    assert [t.rank for t in triples].count(2) == 6
    basis = hilbert_basis(cs)
    assert sorted(t.coords for t in basis) == [(0, 0, 1, 1, 1), (0, 1, 0, 1, 1), (1, 0, 0, 1, 1)]
    assert coords(generated_up_to(cs, basis, 3)) == coords(enumerate_triples(cs, 3))


def test_trivial_group(context):
    ctx = context("z1")
    classes = classify_bundles(ctx, 2)
    assert len(classes) == 4
    assert sorted((c.rank, c.twin_bit, c.chern_parity) for c in classes) == [
        (1, 0, 0), (1, 1, 1), (2, 0, 0), (2, 1, 1)]


def test_z4(context):
    ctx = context("z4")
    assert not ctx.twin_regime
    st, cs = build_constraints(ctx, "RP2")
    assert st.stab_minus.order == 4
    assert st.stab_0.order == 2 and st.stab_1.order == 2
    assert st.chain_0.order == 1
    assert st.domain.order == 2
    assert st.transporter_g is not None
    assert len(enumerate_triples(cs, 1)) == 8
    classes = classify_bundles(ctx, 1)
    assert len(classes) == 8
    assert all(c.twin_bit is None for c in classes)


def test_quaternion_isotypical(context):
    ctx = context("q8xz3", chi=4)
    assert ctx.chi_degree == 2
    assert ctx.twin_regime
    st, cs = build_constraints(ctx, "RP2")
    assert cs.tables[0].size == 15
    assert len(cs.forced_zero) == 12
    assert st.stab_0.order == 8
    triples = enumerate_triples(cs, 2)
    assert len(triples) == 3
    assert all(t.rank == 2 for t in triples)
    classes = classify_bundles(ctx, 2)
    assert len(classes) == 6
    assert all(c.chern_parity == 0 for c in classes)


def test_non_isotypical_block_is_rejected(context):
    st, cs = build_constraints(context("q8xz3", chi=4), "RP2")
    t = enumerate_triples(cs, 2)[0]
    bad = [0] * cs.tables[0].size
    bad[0] = 2
    failed = check_triple(st, MultiplicityVector(cs.tables[0], tuple(bad)), t.m_0, t.m_1)
    assert "i" in failed


def test_check_triple_reports_conditions(context):
    st, cs = build_constraints(context("z3"), "RP2")
    t0, t1, t2 = cs.tables
    failed = check_triple(st, MultiplicityVector(t0, (1, 0, 0)), MultiplicityVector(t1, (2,)),
                          MultiplicityVector(t2, (1,)))
    assert failed == ["ii.0", "iii", "iv"]


def test_image_from_d1(context):
    ctx = context("d3_over_z3", chi=0)
    assert ctx.g_chi.order == 6
    assert ctx.local.image_tag == ImageTag("Z", 2)
    assert ctx.local.conjugator is not None
    assert not ctx.twin_regime


def test_chi_stabilizer_drops_to_h(context):
    ctx = context("d3_over_z3", chi=1)
    assert ctx.g_chi.order == 3
    assert ctx.local.image_tag == ImageTag("Z", 1)
    assert ctx.twin_regime
    assert len(classify_bundles(ctx, 1)) == 2


def test_chi_out_of_range(context):
    with pytest.raises(InvalidSpecError):
        context("d3_over_z3", chi=7)


@pytest.mark.parametrize("name", ["z3", "z4", "d3", "tetra"])
def test_hilbert_basis_generates(context, name):
    _, cs = build_constraints(context(name), "RP2")
    assert coords(generated_up_to(cs, hilbert_basis(cs), 4)) == coords(enumerate_triples(cs, 4))


@pytest.mark.parametrize("name", ["z3", "z4", "d3", "octa"])
def test_sums_stay_admissible(context, name):
    _, cs = build_constraints(context(name), "RP2")
    triples = enumerate_triples(cs, 2)
    for a in triples[:6]:
        for b in triples[:6]:
            s = a + b
            assert not check_triple(cs.stabilizers, s.m_minus, s.m_0, s.m_1)


@pytest.mark.parametrize("name", ["z3", "z4", "d3", "d3_over_z3"])
def test_p1_transfer_is_a_bijection(context, name):
    ctx = context(name)
    _, rp2 = build_constraints(ctx, "RP2")
    _, s2 = build_constraints(ctx, "S2")
    below = enumerate_triples(rp2, 2)
    up = [p1_transfer(t, "toS2", rp2, s2) for t in below]
    assert coords(up) == coords(enumerate_triples(s2, 2))
    assert [p1_transfer(t, "toRP2", rp2, s2).coords for t in up] == [t.coords for t in below]
    with pytest.raises(ContextMismatchError):
        p1_transfer(up[0], "toS2", rp2, s2)


def test_triples_of_different_systems_do_not_add(context):
    _, a = build_constraints(context("z3"), "RP2")
    _, b = build_constraints(context("z3"), "RP2")
    with pytest.raises(ContextMismatchError):
        enumerate_triples(a, 1)[0] + enumerate_triples(b, 1)[0]


def test_direct_sum_of_classes(context):
    ctx = context("z3")
    _, cs = build_constraints(ctx, "RP2")
    classes = classify_bundles(ctx, 1, cs)
    one = next(c for c in classes if c.twin_bit == 1)
    s = direct_sum(one, one)
    assert s.twin_bit == 0 and s.chern_parity == 0
    assert s.rank == 2
    z = zero_class(cs)
    assert z.rank == 0
    assert direct_sum(z, one).twin_bit == 1


def test_line_bundle_report(context):
    data = line_bundle_report(context("q8xz3", chi=4), max_rank=3)
    assert data["applicable"]
    assert data["rank_one_count"] == data["expected"] == 3
    assert data["generated_by_line_bundles"]
    assert line_bundle_report(context("d4")) == {"applicable": False, "image": "D4"}


def test_enumerate_needs_positive_rank(context):
    _, cs = build_constraints(context("z3"), "RP2")
    with pytest.raises(InvalidSpecError):
        enumerate_triples(cs, 0)


def test_reports_are_deterministic(context):
    first = json.dumps(semigroup_report(context("d3"), 2), sort_keys=True)
    second = json.dumps(semigroup_report(context("d3"), 2), sort_keys=True)
    assert first == second


def test_report_shapes(context):
    ctx = context("z3")
    out = classify_report(ctx, 2)
    assert out["schema"] == "equivect-report/1"
    assert out["kind"] == "classify"
    assert out["regime"] == "twin"
    assert out["twin_bit_sum_rule"] == {"rule": "xor", "authoritative": False}
    assert len(out["classes"]) == 18
    stab = stabilizers_report(ctx)
    assert set(stab) >= {"RP2", "S2", "context"}
    # -a^2 carries v0 to v1 on the sphere
    assert stab["S2"]["transporter"] is not None


@pytest.mark.parametrize("name", ["z4", "d3", "d4", "tetra"])
def test_one_class_per_triple_without_twins(context, name):
    ctx = context(name)
    _, cs = build_constraints(ctx, "RP2")
    classes = classify_bundles(ctx, 3, cs)
    assert len(classes) == len(enumerate_triples(cs, 3))
    assert all(c.twin_bit is None and c.chern_parity is None for c in classes)


def test_report_uses_settings(context):
    ctx = context("z3")
    relaxed = semigroup_report(ctx, settings=Settings(max_rank=1))
    assert relaxed["max_rank"] == 1
    assert len(relaxed["hilbert_basis"]) == 3
    with pytest.raises(HilbertBasisCapError):
        semigroup_report(ctx, 1, Settings(hilbert_cap=2))
    assert classify_report(ctx, settings=Settings(max_rank=1))["triples"] == 3
