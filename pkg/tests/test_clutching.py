import numpy as np
import pytest

from conftest import spec_path
from equivect.clutching import (
    SampledClutchingMap,
    assemble_clutching,
    build_rep_model,
    build_sigma_loop,
    chern_demo,
    chern_from_winding,
    direct_sum_map,
    dump_map,
    q_omega,
    q_omega_inverse,
    random_clutching,
    reduced_clutching,
    residuals,
    round_samples,
    round_trip_error,
)
from equivect.errors import InvalidSpecError, OutOfScopeError, SamplingError, ToleranceError
from equivect.spec_io import load_spec, rep_matrices

SAMPLES = 600


def quaternion_rep(context):
    ctx = context("q8xz3", chi=4)
    return ctx, build_rep_model(ctx, rep_matrices(load_spec(spec_path("q8xz3"))))


def test_round_samples():
    assert round_samples(100, 3) == 102
    assert round_samples(600, 3) == 600
    assert round_samples(1, 5) == 10


def test_line_model(context):
    rep = build_rep_model(context("z3"))
    assert (rep.dimension, rep.chi_degree, rep.k, rep.n) == (1, 1, 1, 3)
    assert sorted(rep.rotation_power) == [0, 1, 2]


def test_no_model_outside_odd_cyclic(context):
    with pytest.raises(OutOfScopeError):
        build_rep_model(context("z4"))
    with pytest.raises(OutOfScopeError):
        build_rep_model(context("d3"))


def test_degree_two_needs_matrices(context):
    with pytest.raises(InvalidSpecError):
        build_rep_model(context("q8xz3", chi=4))


def test_twists_must_be_linear_and_trivial_on_h(context):
    with pytest.raises(InvalidSpecError):
        build_rep_model(context("z3"), twists=[7])
    assert build_rep_model(context("z3"), twists=[0, 1]).dimension == 2


@pytest.mark.parametrize("variant", ["trivial", "twisted"])
def test_equivariance_residuals(context, variant):
    rep = build_rep_model(context("z3"))
    phi_bar = assemble_clutching(rep, variant, SAMPLES)
    r = residuals(phi_bar, rep)
    assert set(r) == {"E1", "E2"}
    assert max(r.values()) < 1e-9
    r_rp2 = residuals(q_omega(phi_bar), rep)
    assert set(r_rp2) == {"E1'", "E2'"}
    assert max(r_rp2.values()) < 1e-9


def test_line_parities(context):
    rep = build_rep_model(context("z3"))
    twisted = assemble_clutching(rep, "twisted", SAMPLES)
    trivial = assemble_clutching(rep, "trivial", SAMPLES)
    assert chern_from_winding(q_omega(twisted)).value == 1
    assert chern_from_winding(twisted).value == 0
    assert chern_from_winding(q_omega(trivial)).value == 0
    assert chern_from_winding(reduced_clutching(rep, SAMPLES)).value == 1


def test_quaternion_parities(context):
    _, rep = quaternion_rep(context)
    assert rep.dimension == 2
    twisted = assemble_clutching(rep, "twisted", SAMPLES)
    assert max(residuals(twisted, rep).values()) < 1e-9
    assert chern_from_winding(q_omega(twisted)).value == 0
    assert chern_from_winding(reduced_clutching(rep, SAMPLES)).value == 0
    assert chern_from_winding(build_sigma_loop(rep, SAMPLES)).value == 2


def test_round_trip(context):
    rep = build_rep_model(context("z5"))
    phi_bar = assemble_clutching(rep, "twisted", SAMPLES)
    assert round_trip_error(phi_bar) < 1e-12
    with pytest.raises(InvalidSpecError):
        q_omega(q_omega(phi_bar))
    with pytest.raises(InvalidSpecError):
        q_omega_inverse(phi_bar)


def test_parity_survives_refinement(context):
    rep = build_rep_model(context("z7"))
    coarse = assemble_clutching(rep, "twisted", 700)
    fine = assemble_clutching(rep, "twisted", 1400)
    assert chern_from_winding(q_omega(coarse)).value == chern_from_winding(q_omega(fine)).value == 1


def test_random_maps_are_equivariant(context, rng):
    rep = build_rep_model(context("z3"), twists=[0, 2])
    for _ in range(3):
        phi_bar = random_clutching(rep, rng, SAMPLES)
        assert max(residuals(phi_bar, rep).values()) < 1e-9
        assert max(residuals(q_omega(phi_bar), rep).values()) < 1e-9
        assert chern_from_winding(q_omega(phi_bar)).value in (0, 1)


def test_winding_adds_under_direct_sum(context, rng):
    rep = build_rep_model(context("z3"))
    loop = build_sigma_loop(rep, SAMPLES)
    assert chern_from_winding(direct_sum_map(loop, loop)).value == 2
    twisted = assemble_clutching(rep, "twisted", SAMPLES)
    other = random_clutching(rep, rng, SAMPLES)
    total = chern_from_winding(direct_sum_map(twisted, other)).value
    assert total == chern_from_winding(twisted).value + chern_from_winding(other).value
    with pytest.raises(InvalidSpecError):
        direct_sum_map(loop, twisted)


def test_coarse_grid_is_refused(context):
    rep = build_rep_model(context("z3"))
    with pytest.raises(SamplingError):
        chern_from_winding(build_sigma_loop(rep, 3))


def test_dump_map(context):
    rep = build_rep_model(context("z3"))
    out = dump_map(q_omega(assemble_clutching(rep, "twisted", SAMPLES)))
    assert out["mode"] == "RP2"
    assert out["samples"] == SAMPLES
    assert out["winding"] == 1
    assert len(out["t"]) == SAMPLES
    assert len(out["det"]) == len(out["lift"])


def test_chern_demo(context):
    out = chern_demo(context("z3"), samples=SAMPLES, random_maps=2)
    assert out["kind"] == "chern-demo"
    assert out["agrees"]
    assert out["twisted"]["parity"] == 1
    assert out["trivial"]["parity"] == 0
    assert out["twisted"]["s2_winding"] == 0
    assert out["sigma_winding"] == 1
    assert out["random_maps"]["worst_residual"] < 1e-9


def test_chern_demo_degree_two(context):
    ctx, _ = quaternion_rep(context)
    out = chern_demo(ctx, rep_matrices(load_spec(spec_path("q8xz3"))), samples=SAMPLES, random_maps=1)
    assert out["agrees"]
    assert out["expected_parity"] == 0
    assert out["sigma_winding"] == 2


def test_matrices_of_another_degree_fall_back_to_linear_extension(context):
    mats = rep_matrices(load_spec(spec_path("q8xz3")))
    rep = build_rep_model(context("q8xz3", chi=0), mats)
    assert rep.dimension == 1


def test_round_trip_against_unitary_north(context):
    rep = build_rep_model(context("z5"))
    twisted = assemble_clutching(rep, "twisted", SAMPLES)
    # sigma and U(g) are unitary, so the northern copy is the pointwise adjoint
    north = twisted.south.conj().transpose(0, 2, 1)
    phi_bar = SampledClutchingMap("S2", twisted.n, twisted.t, twisted.south, north)
    assert max(residuals(phi_bar, rep).values()) < 1e-9
    back = q_omega_inverse(q_omega(phi_bar, 1e-9))
    assert np.abs(back.south - phi_bar.south).max() == 0
    assert np.abs(back.north - north).max() < 1e-9
    assert max(residuals(back, rep).values()) < 1e-9

    broken = north.copy()
    broken[3] = -broken[3]
    bad = SampledClutchingMap("S2", twisted.n, twisted.t, twisted.south, broken)
    assert residuals(bad)["E1"] > 1
    assert round_trip_error(bad) > 1
    with pytest.raises(ToleranceError):
        q_omega(bad, 1e-9)


def test_many_random_maps(context, rng):
    rep = build_rep_model(context("z3"), twists=[0, 1, 2])
    for _ in range(100):
        phi = q_omega(random_clutching(rep, rng, 120))
        assert max(residuals(phi, rep).values()) < 1e-9
        lifted = q_omega_inverse(phi)
        s2 = residuals(lifted, rep)
        assert s2["E1"] < 1e-9 and s2["E2"] < 1e-9
        assert np.abs(q_omega(lifted).south - phi.south).max() == 0
