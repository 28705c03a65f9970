"""Sampled equivariant clutching maps on the equator of K_2n and their Chern data.

Parameterization: the equator of K_2n is the loop t in [0, 2n) with vertex v_i at t = i. A map in
S2 mode carries two copies of the loop (the boundary of the southern and northern pieces); a map
in RP2 mode carries only the southern copy. The group acts by shifts: an element whose rotation
is a_n^k moves t to t + 2k, and the antipode g0 moves (S, t) to (N, t + n) with the identity on
fibers.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np
from scipy.linalg import block_diag, expm, logm

from .characters import subgroup_table
from .config import Settings
from .errors import ConsistencyError, InvalidSpecError, OutOfScopeError, SamplingError, ToleranceError
from .geometry import ExactMat3, rotation_a
from .groups import FiniteGroup, Subgroup, extend_on_generators
from .semigroup import ClassificationContext, report

logger = logging.getLogger(__name__)

Mode = Literal["S2", "RP2", "loop"]
Variant = Literal["trivial", "twisted"]

_REP_TOL = 1e-10
_TRACE_TOL = 1e-8
_STEP_GUARD = 0.5


@dataclass(frozen=True, eq=False)
class UnitaryRepModel:
    """W_{d-1} = sum_j lambda_j (x) V, with V extending chi and lambda_j linear characters trivial on H."""
    group: FiniteGroup
    h: Subgroup
    matrices: tuple[np.ndarray, ...]
    chi_degree: int
    k: int
    rotation_power: tuple[int, ...]
    n: int

    @property
    def dimension(self) -> int:
        return self.k * self.chi_degree

    def commutant(self, block: np.ndarray) -> np.ndarray:
        """Embed a k x k block as an element of Iso_H(W)."""
        return np.kron(np.asarray(block, dtype=complex), np.eye(self.chi_degree))

    def conjugate(self, x: int, values: np.ndarray) -> np.ndarray:
        u = self.matrices[x]
        return u @ values @ u.conj().T

    def validate(self) -> None:
        g = self.group
        eye = np.eye(self.dimension)
        for x in range(g.order):
            u = self.matrices[x]
            if np.abs(u.conj().T @ u - eye).max() > _REP_TOL:
                raise InvalidSpecError(f"representation matrix of {g.label(x)} is not unitary")
        for x in range(g.order):
            for y in g.generators:
                if np.abs(self.matrices[x] @ self.matrices[y] - self.matrices[g.mul(x, y)]).max() > _REP_TOL:
                    raise InvalidSpecError("representation matrices are not multiplicative")
        rng = np.random.default_rng(0)
        probe = self.commutant(rng.normal(size=(self.k, self.k)) + 1j * rng.normal(size=(self.k, self.k)))
        for h in self.h.members:
            u = self.matrices[h]
            if np.abs(u @ probe - probe @ u).max() > _REP_TOL:
                raise ConsistencyError("commutant block does not commute with H")


def _rotation_powers(context: ClassificationContext) -> tuple[int, ...]:
    local = context.local
    n = local.image_tag.n
    a = rotation_a(n, local.conductor)
    powers = {ExactMat3.identity(local.conductor): 0}
    current = ExactMat3.identity(local.conductor)
    for k in range(1, n):
        current = current @ a
        powers[current] = k
    try:
        return tuple(powers[m] for m in local.matrices)
    except KeyError as e:
        raise ConsistencyError("G_chi does not act through the powers of a_n") from e


def _linear_rows(context: ClassificationContext) -> list[int]:
    """Linear characters of G_chi that are trivial on H."""
    table = subgroup_table(Subgroup.whole(context.local.group))[0]
    return [row for row in range(table.size) if table.degrees[row] == 1
            and all(table.value(row, h).is_rational() and table.value(row, h).rational_value() == 1
                    for h in context.h_local.members)]


def build_rep_model(context: ClassificationContext, generator_matrices: Sequence[np.ndarray] | None = None,
                    twists: Sequence[int] | None = None, extension_row: int | None = None) -> UnitaryRepModel:
    """Unitary model of W_{d-1} for the Z_n-odd regime.

    generator_matrices, when given, are matrices of a representation of G (one per generator);
    its restriction to G_chi must restrict to chi on H. Without them chi must extend to a linear
    character of G_chi; extension_row picks which one.
    """
    if not context.twin_regime:
        raise OutOfScopeError(f"clutching needs G_chi acting through Z_n with n odd, got {context.local.image_tag}")
    local = context.local.group
    table = subgroup_table(Subgroup.whole(local))[0]
    h_table, h_emb = subgroup_table(context.h_local)
    # 행렬 차원이 chi(id) 와 다르면 다른 지표용 행렬이므로 선형 확장으로 대신합니다
    if generator_matrices is not None and np.asarray(generator_matrices[0]).shape[0] != context.chi_degree:
        logger.info("rep matrices have dimension %d but chi(id) = %d; using a linear extension of chi",
                    np.asarray(generator_matrices[0]).shape[0], context.chi_degree)
        generator_matrices = None
    if generator_matrices is not None:
        g = context.assignment.group
        gens = [np.asarray(m, dtype=complex) for m in generator_matrices]
        if len(gens) != len(g.generators):
            raise InvalidSpecError(f"{len(g.generators)} generators but {len(gens)} rep matrices")
        d = gens[0].shape[0]
        full = extend_on_generators(g, gens, lambda a, b: a @ b, np.eye(d, dtype=complex))
        v = [full[context.embedding(x)] for x in range(local.order)]
    else:
        candidates = [row for row in range(table.size) if table.degrees[row] == 1 and all(
            table.value(row, h_emb(x)) == h_table.value(context.chi_local, x) for x in range(h_table.group.order))]
        if not candidates:
            raise InvalidSpecError("chi does not extend to a linear character of G_chi; supply rep matrices")
        row = candidates[0] if extension_row is None else extension_row
        if row not in candidates:
            raise InvalidSpecError(f"row {row} does not extend chi")
        v = [np.array([[complex(table.value(row, x))]]) for x in range(local.order)]
        d = 1
    chi_values = [complex(h_table.value(context.chi_local, x)) for x in range(h_table.group.order)]
    traces = [np.trace(v[h_emb(x)]) for x in range(h_table.group.order)]
    if max(abs(a - b) for a, b in zip(traces, chi_values)) > _TRACE_TOL:
        raise InvalidSpecError("rep matrices do not restrict to chi on H")
    linear = _linear_rows(context)
    twists = [linear[0]] if twists is None else list(twists)
    if not twists or any(t not in linear for t in twists):
        raise InvalidSpecError(f"twists must be linear characters of G_chi trivial on H: {linear}")
    mats = tuple(block_diag(*(complex(table.value(t, x)) * v[x] for t in twists)) for x in range(local.order))
    model = UnitaryRepModel(local, context.h_local, mats, d, len(twists), _rotation_powers(context),
                            context.local.image_tag.n)
    model.validate()
    logger.debug("rep model: dim %d = %d x %d over |G_chi|=%d", model.dimension, model.k, d, local.order)
    return model


# -- sampled maps -------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SampledClutchingMap:
    mode: Mode
    n: int
    t: np.ndarray
    south: np.ndarray
    north: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    @property
    def samples(self) -> int:
        return len(self.t)

    @property
    def per_unit(self) -> int:
        """Grid points per unit of t."""
        return self.samples // (2 * self.n)

    def shift(self, values: np.ndarray, units: int) -> np.ndarray:
        """values(t + units) on the grid."""
        return np.roll(values, -units * self.per_unit, axis=0)


def round_samples(samples: int, n: int) -> int:
    step = 2 * n
    rounded = max(step, math.ceil(samples / step) * step)
    if rounded != samples:
        logger.debug("samples rounded %d -> %d (multiple of %d)", samples, rounded, step)
    return rounded


def _grid(n: int, samples: int) -> np.ndarray:
    return np.arange(samples) * (2 * n / samples)


def sigma(rep: UnitaryRepModel, t: np.ndarray) -> np.ndarray:
    """sigma(t) = diag(e^{2 pi i t}, 1, ..., 1) in the commutant, stacked over t."""
    out = np.tile(np.eye(rep.dimension, dtype=complex), (len(t), 1, 1))
    phase = np.exp(2j * np.pi * np.asarray(t))
    for c in range(rep.chi_degree):
        out[:, c, c] = phase
    return out


def build_sigma_loop(rep: UnitaryRepModel, samples: int | None = None) -> SampledClutchingMap:
    samples = samples or Settings.samples
    t = np.arange(samples) / samples
    return SampledClutchingMap("loop", 1, t, sigma(rep, t))


def _propagate(rep: UnitaryRepModel, base: np.ndarray, n: int) -> np.ndarray:
    """Phi(t) = g1^i base(t - 2i) g1^-i for t in [2i, 2i + 2)."""
    g1 = _element_with_power(rep, 1)
    u = np.eye(rep.dimension, dtype=complex)
    pieces = []
    for _ in range(n):
        pieces.append(u @ base @ u.conj().T)
        u = rep.matrices[g1] @ u
    return np.concatenate(pieces, axis=0)


def assemble_clutching(rep: UnitaryRepModel, variant: Variant = "twisted",
                       samples: int | None = None) -> SampledClutchingMap:
    n = rep.n
    samples = round_samples(samples or Settings.samples, n)
    per_unit = samples // (2 * n)
    t = _grid(n, samples)
    if variant == "trivial":
        south = np.tile(np.eye(rep.dimension, dtype=complex), (samples, 1, 1))
    elif variant == "twisted":
        local_t = t[: 2 * per_unit]
        # sigma on [0, 1], then sigma traversed backwards on [1, 2]
        base = sigma(rep, np.where(local_t < 1, local_t, 2 - local_t))
        south = _propagate(rep, base, n)
    else:
        raise InvalidSpecError(f"unknown clutching variant {variant!r}")
    north = np.linalg.inv(south)
    return SampledClutchingMap("S2", n, t, south, north, {"variant": variant})


def reduced_clutching(rep: UnitaryRepModel, samples: int | None = None) -> SampledClutchingMap:
    """Nonequivariant reduction: sigma on [0, 1], sigma(t - n)^-1 on [n, n + 1], identity elsewhere."""
    n = rep.n
    samples = round_samples(samples or Settings.samples, n)
    t = _grid(n, samples)
    values = np.tile(np.eye(rep.dimension, dtype=complex), (samples, 1, 1))
    first = t < 1
    values[first] = sigma(rep, t[first])
    second = (t >= n) & (t < n + 1)
    values[second] = np.linalg.inv(sigma(rep, t[second] - n))
    return SampledClutchingMap("RP2", n, t, values, meta={"variant": "reduced"})


def random_clutching(rep: UnitaryRepModel, rng: np.random.Generator, samples: int | None = None,
                     scale: float = 0.3) -> SampledClutchingMap:
    """Random commutant path on [0, 1] extended to [0, 2n) by the equivariance symmetries.

    Shifting by one unit is the composite of g0 c (t -> t + n, inverse) with g1^-m, m = (n - 1)/2:
    Phi(t + 1) = U(g1^-m) Phi(t)^-1 U(g1^m). The path A(t) = expm(t L + sin(pi t) Y) A0 is chosen
    so that A(1) matches that image of A(0).
    """
    n = rep.n
    samples = round_samples(samples or Settings.samples, n)
    per_unit = samples // (2 * n)
    t = _grid(n, samples)
    k = rep.k

    def random_block() -> np.ndarray:
        return scale * (rng.normal(size=(k, k)) + 1j * rng.normal(size=(k, k)))

    a0 = expm(random_block())
    c = _unit_shift_conjugator(rep)
    target = c @ rep.commutant(np.linalg.inv(a0)) @ np.linalg.inv(c)
    target_block = target[:: rep.chi_degree, :: rep.chi_degree]
    lg = logm(target_block @ np.linalg.inv(a0))
    y = random_block()
    unit = t[:per_unit]
    base = np.stack([rep.commutant(expm(s * lg + math.sin(math.pi * s) * y) @ a0) for s in unit])
    pieces = [base]
    for _ in range(2 * n - 1):
        pieces.append(c @ np.linalg.inv(pieces[-1]) @ np.linalg.inv(c))
    south = np.concatenate(pieces, axis=0)
    return q_omega_inverse(SampledClutchingMap("RP2", n, t, south, meta={"variant": "random"}))


def _element_with_power(rep: UnitaryRepModel, k: int) -> int:
    return rep.rotation_power.index(k % rep.n) if rep.n > 1 else rep.group.id_index


def _unit_shift_conjugator(rep: UnitaryRepModel) -> np.ndarray:
    m = (rep.n - 1) // 2
    return rep.matrices[_element_with_power(rep, -m)]


def direct_sum_map(a: SampledClutchingMap, b: SampledClutchingMap) -> SampledClutchingMap:
    """Block-diagonal sum of two maps sampled on the same grid."""
    if a.mode != b.mode or a.n != b.n or a.samples != b.samples:
        raise InvalidSpecError("maps live on different grids")

    def stack(x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return np.stack([block_diag(p, q) for p, q in zip(x, y)])

    north = stack(a.north, b.north) if a.north is not None and b.north is not None else None
    return SampledClutchingMap(a.mode, a.n, a.t, stack(a.south, b.south), north, {"variant": "sum"})


# -- q_Omega ---------------------------------------------------------------------------

def q_omega(phi_bar: SampledClutchingMap, tolerance: float | None = None) -> SampledClutchingMap:
    """S2-mode map on both boundary copies to the RP2-mode map on the southern copy."""
    if phi_bar.mode != "S2":
        raise InvalidSpecError("q_omega expects an S2-mode map")
    if tolerance is not None:
        r = residuals(phi_bar)
        if max(r.values()) > tolerance:
            raise ToleranceError(f"input violates E1/E2: {r}")
    # g0 is the identity on fibers, so Phi is the southern copy itself
    return SampledClutchingMap("RP2", phi_bar.n, phi_bar.t, phi_bar.south.copy(), meta=dict(phi_bar.meta))


def q_omega_inverse(phi: SampledClutchingMap) -> SampledClutchingMap:
    if phi.mode != "RP2":
        raise InvalidSpecError("q_omega_inverse expects an RP2-mode map")
    return SampledClutchingMap("S2", phi.n, phi.t, phi.south.copy(), np.linalg.inv(phi.south), dict(phi.meta))


def _sup(a: np.ndarray, b: np.ndarray) -> float:
    if len(a) == 0:
        return 0.0
    return float(np.linalg.norm(a - b, ord=2, axis=(-2, -1)).max())


def residuals(phi: SampledClutchingMap, rep: UnitaryRepModel | None = None) -> dict[str, float]:
    """Sup-norm residuals of E1/E2 (S2 mode) or E1'/E2' (RP2 mode)."""
    eye = np.eye(phi.south.shape[1])
    out: dict[str, float] = {}
    if phi.mode == "S2":
        out["E1"] = _sup(phi.north @ phi.south, eye)
        # g0: (S, t) -> (N, t + n)
        e2 = max(_sup(phi.shift(phi.north, phi.n), phi.south), _sup(phi.shift(phi.south, phi.n), phi.north))
        copies = (phi.south, phi.north)
    elif phi.mode == "RP2":
        out["E1'"] = _sup(phi.shift(phi.south, phi.n) @ phi.south, eye)
        e2 = 0.0
        copies = (phi.south,)
    else:
        raise InvalidSpecError("residuals are defined for S2 and RP2 maps")
    if rep is not None:
        for x in range(rep.group.order):
            k = rep.rotation_power[x]
            for values in copies:
                e2 = max(e2, _sup(phi.shift(values, 2 * k), rep.conjugate(x, values)))
    out["E2" if phi.mode == "S2" else "E2'"] = e2
    return out


def round_trip_error(phi_bar: SampledClutchingMap) -> float:
    back = q_omega_inverse(q_omega(phi_bar))
    return max(_sup(back.south, phi_bar.south), _sup(back.north, phi_bar.north))


# -- winding ------------------------------------------------------------------------

@dataclass(frozen=True)
class WindingTrace:
    value: int
    lift: np.ndarray
    det: np.ndarray


def _lift(values: np.ndarray, closed: bool) -> tuple[np.ndarray, np.ndarray]:
    det = np.linalg.det(values)
    if np.any(np.abs(det) < 1e-12):
        raise SamplingError("clutching map is singular on the grid")
    seq = np.concatenate([values, values[:1]]) if closed else values
    dets = np.concatenate([det, det[:1]]) if closed else det
    step = np.angle(dets[1:] / dets[:-1])
    if np.any(np.abs(step) >= math.pi / 2):
        raise SamplingError("argument of det jumps by more than pi/2 between samples")
    ratio = seq[1:] @ np.linalg.inv(seq[:-1])
    eye = np.eye(values.shape[1])
    if np.linalg.norm(ratio - eye, ord=2, axis=(-2, -1)).max() >= _STEP_GUARD:
        raise SamplingError("adjacent samples differ too much for a reliable lift")
    lift = np.angle(dets[0]) + np.concatenate([[0.0], np.cumsum(step)])
    return lift, dets


def chern_from_winding(phi: SampledClutchingMap) -> WindingTrace:
    """S2/loop mode: winding number of det over the loop. RP2 mode: parity bit."""
    if phi.mode in ("S2", "loop"):
        lift, dets = _lift(phi.south, closed=True)
        value = round((lift[-1] - lift[0]) / (2 * math.pi))
    else:
        half = phi.n * phi.per_unit
        # include t = n, which is the first sample of the second half
        lift, dets = _lift(phi.south[: half + 1], closed=False)
        value = round((lift[-1] + lift[0]) / (2 * math.pi)) % 2
    logger.debug("%s winding %d over %d samples", phi.mode, value, phi.samples)
    return WindingTrace(int(value), lift, dets)


def dump_map(phi: SampledClutchingMap) -> dict:
    trace = chern_from_winding(phi)
    return {
        "mode": phi.mode,
        "n": phi.n,
        "samples": phi.samples,
        "meta": phi.meta,
        "t": phi.t.tolist(),
        "det": [[float(d.real), float(d.imag)] for d in trace.det[: phi.samples]],
        "lift": trace.lift.tolist(),
        "winding": trace.value,
    }


def chern_demo(context: ClassificationContext, generator_matrices: Sequence[np.ndarray] | None = None,
               samples: int | None = None, tolerance: float | None = None, seed: int | None = None,
               random_maps: int = 3, settings: Settings | None = None) -> dict:
    settings = settings or Settings()
    samples = samples or settings.samples
    tolerance = settings.tolerance if tolerance is None else tolerance
    seed = settings.seed if seed is None else seed
    rep = build_rep_model(context, generator_matrices)
    out: dict = {"dimension": rep.dimension, "chi_degree": rep.chi_degree, "n": rep.n}
    for variant in ("trivial", "twisted"):
        phi_bar = assemble_clutching(rep, variant, samples)
        r = residuals(phi_bar, rep)
        if max(r.values()) > tolerance:
            raise ToleranceError(f"{variant} clutching map violates E1/E2: {r}")
        phi = q_omega(phi_bar, tolerance)
        r_rp2 = residuals(phi, rep)
        if max(r_rp2.values()) > 2 * tolerance:
            raise ToleranceError(f"q_omega image violates E1'/E2': {r_rp2}")
        out[variant] = {
            "residuals": {**r, **r_rp2},
            "s2_winding": chern_from_winding(phi_bar).value,
            "parity": chern_from_winding(phi).value,
            "round_trip": round_trip_error(phi_bar),
        }
    out["reduced_parity"] = chern_from_winding(reduced_clutching(rep, samples)).value
    out["sigma_winding"] = chern_from_winding(build_sigma_loop(rep, samples)).value
    out["expected_parity"] = rep.chi_degree % 2
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(random_maps):
        phi_bar = random_clutching(rep, rng, samples)
        phi = q_omega(phi_bar, tolerance)
        worst = max(worst, *residuals(phi_bar, rep).values(), *residuals(phi, rep).values(), round_trip_error(phi_bar))
    out["random_maps"] = {"count": random_maps, "worst_residual": worst}
    out["agrees"] = (out["twisted"]["parity"] == out["expected_parity"] == out["reduced_parity"]
                     and out["trivial"]["parity"] == 0)
    return report(context, kind="chern-demo", body=out)
