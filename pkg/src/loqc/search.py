"""Numerical feasibility scans and optimization for postcorrection schemes.

The object under study is the parametrized three-mode sign-shift network
(``multiport.general3``) fed with k = 0, 1, 2 signal photons plus one
ancilla photon on mode 1. For each detector outcome the surviving
mode-0 amplitude is a trigonometric polynomial in the three angles; the
closed forms here were expanded by hand once and are continuously
cross-checked against the operator-expansion simulator by the tests.

Feasibility of a correction scheme is judged by a proportionality
residual: the corrected amplitude triple must be proportional to the
target pattern (sign-flipped or identity) for the correction to act as a
unitary on the signal. The residual is scale-free,

    r(c, t) = 1 - |<t, c>|^2 / (|t|^2 |c|^2),

zero exactly on proportional triples. Where a parameter choice kills all
three corrected amplitudes the scheme applies no correction at all and
the residual falls back to the uncorrected mismatch of the case.

Verdicts are numerical certificates, not proofs: "infeasible" means the
residual exceeded the margin everywhere on a refined grid outside small
exclusion windows around degenerate angles.

All scans are deterministic: fixed grids, first-index argmin, and a
derivative-free-seeded SLSQP polish only where noted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .fock import FockState
from .measurement import DetectionPattern
from .multiport import SQRT2, evolve, general3

#: Grid points whose angles sit within this radius of a degenerate value
#: are excluded from infeasibility certificates.
DEGENERATE_EXCLUSION = 1e-3

_U = 1.0 - SQRT2              # signal back-reflection of the sign-shift core
_V = 2.0 ** -0.25             # signal <-> ancilla coupling
_W = math.sqrt(3.0 / SQRT2 - 2.0)
_R = 0.5 - 1.0 / SQRT2

TARGETS = {"sign_flip": (1.0, 1.0, -1.0), "restore": (1.0, 1.0, 1.0)}


# -- closed-form outcome amplitudes --------------------------------------

def _columns(t1, t2, t3):
    """Images of the signal (d) and ancilla (e) creation operators."""
    c1, s1 = np.cos(t1), np.sin(t1)
    c2, s2 = np.cos(t2), np.sin(t2)
    c3, s3 = np.cos(t3), np.sin(t3)
    d = (-c2, c1 * s2, s1 * s2)
    e = (s2 * c3, s1 * s3 + c1 * c2 * c3, -c1 * s3 + s1 * c2 * c3)
    return d, e


#: Detector outcomes with at most one photon per detector, per signal count.
OUTCOME_PATTERNS = {
    0: ((1, 0, 0), (0, 1, 0), (0, 0, 1)),
    1: ((2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 1, 1)),
    2: ((3, 0, 0), (2, 1, 0), (2, 0, 1), (1, 1, 1)),
}


def closed_form_amplitudes(angles: tuple[float, float, float]) -> dict:
    """Hand-expanded outcome amplitudes of the parametrized network.

    Keys are (signal photon count k, output occupation); values are the
    exact real amplitudes for input |k> x |1, 0>. Independent of the
    simulator path; the factorial weights of multiply-occupied modes are
    already folded in.
    """
    d, e = _columns(*angles)
    d1, d2, d3 = d
    e1, e2, e3 = e
    return {
        (0, (1, 0, 0)): e1,
        (0, (0, 1, 0)): e2,
        (0, (0, 0, 1)): e3,
        (1, (2, 0, 0)): SQRT2 * d1 * e1,
        (1, (1, 1, 0)): d1 * e2 + d2 * e1,
        (1, (1, 0, 1)): d1 * e3 + d3 * e1,
        (1, (0, 1, 1)): d2 * e3 + d3 * e2,
        (2, (3, 0, 0)): math.sqrt(3.0) * d1 ** 2 * e1,
        (2, (2, 1, 0)): d1 ** 2 * e2 + 2 * d1 * d2 * e1,
        (2, (2, 0, 1)): d1 ** 2 * e3 + 2 * d1 * d3 * e1,
        (2, (1, 1, 1)): SQRT2 * (d1 * d2 * e3 + d1 * d3 * e2 + d2 * d3 * e1),
    }


def parametrized_ns_amplitudes(angles: tuple[float, float, float]) -> dict:
    """The same outcome-amplitude table computed via the simulator."""
    transform = general3(*angles)
    table = {}
    for k, patterns in OUTCOME_PATTERNS.items():
        out = evolve(FockState.from_occupation((k, 1, 0)), transform, prune_tol=0.0)
        for pat in patterns:
            table[(k, pat)] = out.amplitude(pat)
    return table


def sign_shift_branch_amplitudes(t1, t2, t3):
    """Amplitudes of the heralded branch (one photon on detector 1, none
    on detector 2) for k = 0, 1, 2; accepts scalars or arrays."""
    d, e = _columns(t1, t2, t3)
    a0 = e[1]
    a1 = d[0] * e[1] + d[1] * e[0]
    a2 = d[0] * (d[0] * e[1] + 2 * d[1] * e[0])
    return a0, a1, a2


# -- case data ------------------------------------------------------------

@dataclass(frozen=True)
class CaseAmplitudes:
    """Per-photon-count coefficients of one detector case of the standard
    sign-shift network (signal counts k = 0, 1, 2).

    Case 2 (one photon on detector 1) lists the bare conditional
    amplitudes; it needs no correction. Cases 1 and 3 list the
    coefficients that multiply the correction-scan monomial families (the
    two-photon entry of case 1 folds in the photon-removal path weight).
    """

    case: int
    values: tuple[float, float, float]


_CASE_VALUES = {
    1: (_V, 2.0 * _U * _V, math.sqrt(3.0) * _U * _U * _V),
    2: (0.5, 0.5, -0.5),
    3: (_R, _U * _R + _V * _W, _U * _U * _R + 2.0 * _U * _V * _W),
}

_CASE_PATTERNS = {1: {1: 0, 2: 0}, 2: {1: 1, 2: 0}, 3: {1: 0, 2: 1}}


def case_amplitudes(case: int) -> CaseAmplitudes:
    if case not in _CASE_VALUES:
        raise ValueError(f"case must be 1, 2 or 3, got {case}")
    return CaseAmplitudes(case, _CASE_VALUES[case])


def case_detection_pattern(case: int) -> DetectionPattern:
    if case not in _CASE_PATTERNS:
        raise ValueError(f"case must be 1, 2 or 3, got {case}")
    return DetectionPattern(_CASE_PATTERNS[case])


# -- residuals -------------------------------------------------------------

def proportionality_residual(values, target) -> float:
    """Scale-free deviation of `values` from being proportional to `target`."""
    c = np.asarray(values, dtype=complex)
    t = np.asarray(target, dtype=complex)
    nc = float(np.vdot(c, c).real)
    nt = float(np.vdot(t, t).real)
    if nc <= 0.0:
        return 1.0
    return float(max(0.0, 1.0 - abs(np.vdot(t, c)) ** 2 / (nt * nc)))


def uncorrected_mismatch(case: int, target: str) -> float:
    """Residual of the raw case amplitudes against a target pattern."""
    return proportionality_residual(case_amplitudes(case).values, TARGETS[target])


def _grid_residual(parts: list[np.ndarray], target: np.ndarray, fallback: float) -> np.ndarray:
    c = np.stack([np.asarray(p, dtype=complex) for p in parts])
    nc = (np.abs(c) ** 2).sum(axis=0)
    nt = float(np.vdot(target, target).real)
    ip = np.abs((target.conj()[:, None] * c.reshape(len(parts), -1)).sum(axis=0)) ** 2
    ip = ip.reshape(nc.shape)
    alive = nc > 1e-30
    r = np.full(nc.shape, fallback, dtype=float)
    np.divide(ip, nt * nc, out=ip, where=alive)
    r[alive] = np.clip(1.0 - ip[alive], 0.0, 1.0)
    return r


@dataclass
class FeasibilityReport:
    """Result of one feasibility scan, serializable as a flat record."""

    scheme: str
    parameters: dict
    best_residual: float
    best_params: dict
    verdict: str
    extras: dict = field(default_factory=dict)

    def to_record(self) -> dict:
        return {
            "scheme": self.scheme,
            "parameters": dict(self.parameters),
            "best_residual": self.best_residual,
            "best_params": dict(self.best_params),
            "verdict": self.verdict,
            "extras": dict(self.extras),
        }


def _verdict(best: float, tolerance: float, margin: float) -> str:
    if best <= tolerance:
        return "feasible"
    if best > margin:
        return "infeasible"
    return "inconclusive"


# -- one-splitter correction ------------------------------------------------

def single_bs_corrected(case: int, x):
    """Corrected amplitude triple of the one-splitter scheme at angle x.

    Case 1 survivors carry 1..3 photons; the splitter faces an empty port
    and exactly one photon must leave through it. Case 3 survivors carry
    0..2 photons; the splitter faces a port prepared with one photon that
    must come back out.
    """
    coeff = case_amplitudes(case).values
    s, c = np.sin(x), np.cos(x)
    if case == 1:
        monos = (s, s * c, s * c ** 2)
    elif case == 3:
        monos = (-c, s ** 2 - c ** 2, 2 * s ** 2 * c - c ** 3)
    else:
        raise ValueError("only cases 1 and 3 have a one-splitter correction scan")
    return tuple(k * m for k, m in zip(coeff, monos))


def _excluded(axis: np.ndarray, points: tuple[float, ...]) -> np.ndarray:
    mask = np.ones(axis.shape, dtype=bool)
    for p in points:
        mask &= np.abs(axis - p) > DEGENERATE_EXCLUSION
    return mask


def single_bs_infeasibility(
    case: int,
    grid_step: float = 1e-2,
    *,
    target: str = "sign_flip",
    tolerance: float = 1e-6,
    margin: float = 1e-3,
    refine_rounds: int = 3,
    components: tuple[int, ...] = (0, 1, 2),
) -> FeasibilityReport:
    """Certify (or refute) the one-splitter correction over angle x in (0, pi).

    `components` selects which photon-count amplitudes the proportionality
    system constrains; a single component is trivially satisfiable.
    """
    if grid_step <= 0:
        raise ValueError("grid_step must be positive")
    if target not in TARGETS:
        raise ValueError(f"target must be one of {sorted(TARGETS)}")
    tvec = np.array([TARGETS[target][i] for i in components], dtype=complex)
    fallback = proportionality_residual(
        [case_amplitudes(case).values[i] for i in components], tvec
    )
    degenerate = (0.0, math.pi / 2, math.pi)

    def scan(lo: float, hi: float, step: float):
        xs = np.arange(lo, hi + step / 2, step)
        keep = _excluded(xs, degenerate) & (xs > 0) & (xs < math.pi)
        xs = xs[keep]
        if xs.size == 0:
            return None
        parts = [single_bs_corrected(case, xs)[i] for i in components]
        r = _grid_residual(parts, tvec, fallback)
        i = int(np.argmin(r))
        return float(r[i]), float(xs[i])

    best = scan(0.0, math.pi, grid_step)
    step = grid_step
    for _ in range(refine_rounds):
        step /= 10.0
        w = 100 * step  # ten previous-grid cells either side
        refined = scan(best[1] - w, best[1] + w, step)
        if refined is not None and refined[0] < best[0]:
            best = refined
    return FeasibilityReport(
        scheme=f"single_bs:case{case}:{target}",
        parameters={
            "grid_step": grid_step,
            "tolerance": tolerance,
            "margin": margin,
            "components": list(components),
            "refine_rounds": refine_rounds,
        },
        best_residual=best[0],
        best_params={"x": best[1]},
        verdict=_verdict(best[0], tolerance, margin),
        extras={"uncorrected_mismatch": fallback},
    )


# -- two-splitter correction -------------------------------------------------

def two_bs_corrected(x, y, phase: float = 0.0):
    """Corrected amplitude triple of the two-splitter scheme for case 3.

    The two angles enter through the product monomial family
    (sin x sin y, 2 sin x cos x sin y cos y, 3 sin x cos^2 x sin y cos^2 y);
    an optional phase shifter multiplies the k-photon component by
    e^{i k phase}.
    """
    coeff = case_amplitudes(3).values
    sx, cx, sy, cy = np.sin(x), np.cos(x), np.sin(y), np.cos(y)
    monos = (sx * sy, 2 * sx * cx * sy * cy, 3 * sx * cx ** 2 * sy * cy ** 2)
    out = []
    for k, (co, m) in enumerate(zip(coeff, monos)):
        out.append(co * m * np.exp(1j * k * phase))
    return tuple(out)


def two_bs_feasibility(
    case: int = 3,
    grid_step: float = 1e-2,
    *,
    target: str = "sign_flip",
    tolerance: float = 1e-6,
    margin: float = 1e-3,
    phases: tuple[float, ...] = (0.0, math.pi),
    refine_rounds: int = 3,
) -> FeasibilityReport:
    """Scan the two-splitter correction over (x, y) and optional phase."""
    if case != 3:
        raise ValueError("only case 3 has a two-splitter correction family")
    if grid_step <= 0:
        raise ValueError("grid_step must be positive")
    tvec = np.array(TARGETS[target], dtype=complex)
    fallback = uncorrected_mismatch(case, target)

    def scan(xlo, xhi, ylo, yhi, step):
        xs = np.arange(max(xlo, 0.0), min(xhi, math.pi) + step / 2, step)
        ys = np.arange(max(ylo, 0.0), min(yhi, math.pi) + step / 2, step)
        if xs.size == 0 or ys.size == 0:
            return None
        X, Y = np.meshgrid(xs, ys, indexing="ij")
        best = None
        for phi in phases:
            parts = list(two_bs_corrected(X, Y, phi))
            r = _grid_residual(parts, tvec, fallback)
            i = int(np.argmin(r))
            cand = (float(r.ravel()[i]), float(X.ravel()[i]), float(Y.ravel()[i]), float(phi))
            if best is None or cand[0] < best[0]:
                best = cand
        return best

    best = scan(0.0, math.pi, 0.0, math.pi, grid_step)
    step = grid_step
    for _ in range(refine_rounds):
        step /= 10.0
        w = 100 * step
        refined = scan(best[1] - w, best[1] + w, best[2] - w, best[2] + w, step)
        if refined is not None and refined[0] < best[0]:
            best = refined

    # constrained equal-angle slice
    ys = np.arange(0.0, math.pi + grid_step / 2, grid_step)
    slice_r = _grid_residual(list(two_bs_corrected(ys, ys, 0.0)), tvec, fallback)
    j = int(np.argmin(slice_r))

    return FeasibilityReport(
        scheme=f"two_bs:case{case}:{target}",
        parameters={
            "grid_step": grid_step,
            "tolerance": tolerance,
            "margin": margin,
            "phases": list(phases),
            "refine_rounds": refine_rounds,
        },
        best_residual=best[0],
        best_params={"x": best[1], "y": best[2], "phase": best[3]},
        verdict=_verdict(best[0], tolerance, margin),
        extras={
            "uncorrected_mismatch": fallback,
            "equal_angle_min_residual": float(slice_r[j]),
            "equal_angle_best_y": float(ys[j]),
        },
    )


# -- correction through a second sign-shift network ---------------------------

NS_IN_NS_PATTERNS = {1: ((2, 0), (0, 2), (1, 1)), 3: ((1, 0),)}

#: Coefficient triples entering the second-network proportionality systems.
#: Case 1 keeps the raw monomial weights of the survivors (1..3 photons);
#: case 3 uses the exact conditional amplitudes (0..2 photons).
_SECOND_GATE_INPUT = {
    1: (_V, _U * 2.0 ** 0.25, _U * _U * _V),
    3: _CASE_VALUES[3],
}


def second_gate_coefficients(case: int, pattern: tuple[int, int], t1, t2, t3):
    """Monomial coefficients of the second network's detector outcome.

    For survivors carrying n photons plus the fresh ancilla photon, these
    are the coefficients of the monomial with n_detected photons removed;
    the simulator amplitude equals the coefficient times
    sqrt(prod(out!)*2)/sqrt(n!) (tests pin this conversion).
    """
    d, e = _columns(t1, t2, t3)
    d1, d2, d3 = d
    e1, e2, e3 = e
    if case == 1 and pattern == (2, 0):
        return (d2 * e2,
                d2 ** 2 * e1 + 2 * d1 * d2 * e2,
                3 * d1 * d2 ** 2 * e1 + 3 * d1 ** 2 * d2 * e2)
    if case == 1 and pattern == (0, 2):
        return (d3 * e3,
                d3 ** 2 * e1 + 2 * d1 * d3 * e3,
                3 * d1 * d3 ** 2 * e1 + 3 * d1 ** 2 * d3 * e3)
    if case == 1 and pattern == (1, 1):
        return (d2 * e3 + d3 * e2,
                2 * (d1 * d2 * e3 + d1 * d3 * e2 + d2 * d3 * e1),
                3 * d1 ** 2 * (d2 * e3 + d3 * e2) + 6 * d1 * d2 * d3 * e1)
    if case == 3 and pattern == (1, 0):
        return (e2, d1 * e2 + d2 * e1, d1 ** 2 * e2 + 2 * d1 * d2 * e1)
    raise ValueError(f"unsupported case/pattern combination: case {case}, pattern {pattern}")


def ns_in_ns_products(case: int, pattern: tuple[int, int], t1, t2, t3):
    """Per-photon-count products (incoming coefficient x correction)."""
    coeffs = second_gate_coefficients(case, pattern, t1, t2, t3)
    incoming = _SECOND_GATE_INPUT[case]
    return tuple(i * c for i, c in zip(incoming, coeffs))


#: Parameters of the analytically known root family of the case-1
#: two-photons-on-detector-1 proportionality system: theta2 fixed, and
#: tan(theta3) * tan(theta1) a fixed ratio.
CANDIDATE_T2 = 2.466864691
CANDIDATE_TAN_RATIO = 0.6614985514


def candidate_root_family(samples: int = 21) -> list[tuple[float, float, float]]:
    """Sample the known solution family of the case-1 (2,0) system."""
    pts = []
    for t2 in (CANDIDATE_T2, -CANDIDATE_T2):
        for t1 in np.linspace(0.2, math.pi - 0.2, samples):
            tan = math.tan(t1)
            if abs(tan) < 1e-9:
                continue
            t3 = math.atan(CANDIDATE_TAN_RATIO / tan)
            pts.append((float(t1), float(t2), float(t3)))
    return pts


def ns_in_ns_feasibility(
    case: int,
    pattern: tuple[int, int] | DetectionPattern,
    grid_step: float = 2e-2,
    *,
    target: str = "sign_flip",
    tolerance: float = 1e-6,
    margin: float = 1e-3,
    refine_rounds: int = 3,
) -> FeasibilityReport:
    """Scan the second-network angle space for a working correction."""
    if isinstance(pattern, DetectionPattern):
        pattern = (pattern.count(1) or 0, pattern.count(2) or 0)
    pattern = (int(pattern[0]), int(pattern[1]))
    if case not in NS_IN_NS_PATTERNS or pattern not in NS_IN_NS_PATTERNS[case]:
        raise ValueError(
            f"unknown pattern {pattern} for case {case}; "
            f"supported: {NS_IN_NS_PATTERNS}"
        )
    if grid_step <= 0:
        raise ValueError("grid_step must be positive")
    tvec = np.array(TARGETS[target], dtype=complex)
    fallback = uncorrected_mismatch(case, target)

    def scan(lo: np.ndarray, hi: np.ndarray, step: float):
        axes = [np.arange(lo[i], hi[i] + step / 2, step) for i in range(3)]
        axes = [ax[(ax >= 0) & (ax <= 2 * math.pi)] for ax in axes]
        if any(ax.size == 0 for ax in axes):
            return None
        best = None
        t2g, t3g = np.meshgrid(axes[1], axes[2], indexing="ij")
        for t1 in axes[0]:  # slab over t1 keeps memory flat
            parts = list(ns_in_ns_products(case, pattern, t1, t2g, t3g))
            r = _grid_residual(parts, tvec, fallback)
            i = int(np.argmin(r))
            cand = (float(r.ravel()[i]), float(t1), float(t2g.ravel()[i]), float(t3g.ravel()[i]))
            if best is None or cand[0] < best[0]:
                best = cand
        return best

    lo = np.zeros(3)
    hi = np.full(3, 2 * math.pi)
    best = scan(lo, hi, grid_step)
    step = grid_step
    for _ in range(refine_rounds):
        step /= 10.0
        w = 100 * step
        center = np.array(best[1:])
        refined = scan(center - w, center + w, step)
        if refined is not None and refined[0] < best[0]:
            best = refined

    extras = {"uncorrected_mismatch": fallback}
    if case == 1 and pattern == (2, 0):
        fam = candidate_root_family()
        fam_r = [proportionality_residual(ns_in_ns_products(case, pattern, *p), tvec) for p in fam]
        j = int(np.argmin(fam_r))
        extras["candidate_family_best_residual"] = float(fam_r[j])
        extras["candidate_family_best_angles"] = list(fam[j])
        if fam_r[j] < best[0]:
            best = (float(fam_r[j]), *fam[j])

    return FeasibilityReport(
        scheme=f"ns_in_ns:case{case}:{pattern[0]},{pattern[1]}:{target}",
        parameters={
            "grid_step": grid_step,
            "tolerance": tolerance,
            "margin": margin,
            "refine_rounds": refine_rounds,
        },
        best_residual=best[0],
        best_params={"t1": best[1], "t2": best[2], "t3": best[3]},
        verdict=_verdict(best[0], tolerance, margin),
        extras=extras,
    )


# -- success-probability optimization ------------------------------------------

@dataclass
class OptimizationResult:
    objective: str
    angles: tuple[float, float, float]
    probability: float
    residual: float
    rounds: list[dict]
    grid_step: float
    refinement_rounds: int

    def to_record(self) -> dict:
        return {
            "objective": self.objective,
            "angles": list(self.angles),
            "probability": self.probability,
            "residual": self.residual,
            # known ceiling for heralding such a sign shift by
            # postselection alone; listed for comparison, not derived here
            "postselection_upper_bound": 0.5,
            "rounds": [dict(r) for r in self.rounds],
            "grid_step": self.grid_step,
            "refinement_rounds": self.refinement_rounds,
        }


def _sign_flip_score(t1, t2, t3, penalty: float):
    a0, a1, a2 = sign_shift_branch_amplitudes(t1, t2, t3)
    prob = np.minimum(np.minimum(a0 ** 2, a1 ** 2), a2 ** 2)
    r = _grid_residual([a0, a1, a2], np.array([1.0, 1.0, -1.0], dtype=complex), 1.0)
    return prob - penalty * r, prob, r


def optimize_success(
    objective: str = "ns_sign_flip",
    grid_step: float = 0.05,
    refinement_rounds: int = 3,
    *,
    penalty: float = 1.0,
    polish: bool = True,
) -> OptimizationResult:
    """Maximize the worst-case heralded-branch probability of the
    parametrized sign-shift network subject to the sign-flip
    proportionality constraint (penalty form on a refined grid, with a
    deterministic constrained polish from the incumbent).
    """
    if objective != "ns_sign_flip":
        raise ValueError(f"unknown objective {objective!r}")
    if grid_step <= 0:
        raise ValueError("grid_step must be positive")

    def scan(lo: np.ndarray, hi: np.ndarray, step: float):
        axes = [np.arange(max(lo[i], 0.0), min(hi[i], math.pi) + step / 2, step) for i in range(3)]
        if any(ax.size == 0 for ax in axes):
            return None
        best = None
        t2g, t3g = np.meshgrid(axes[1], axes[2], indexing="ij")
        for t1 in axes[0]:
            score, prob, r = _sign_flip_score(t1, t2g, t3g, penalty)
            i = int(np.argmax(score))
            cand = (float(score.ravel()[i]), float(t1), float(t2g.ravel()[i]),
                    float(t3g.ravel()[i]), float(prob.ravel()[i]), float(r.ravel()[i]))
            if best is None or cand[0] > best[0]:
                best = cand
        return best

    best = scan(np.zeros(3), np.full(3, math.pi), grid_step)
    rounds = [{"round": 0, "step": grid_step, "score": best[0],
               "probability": best[4], "residual": best[5]}]
    step = grid_step
    for n in range(refinement_rounds):
        step /= 10.0
        center = np.array(best[1:4])
        refined = scan(center - 10 * step, center + 10 * step, step)
        if refined is not None and refined[0] > best[0]:
            best = refined
        rounds.append({"round": n + 1, "step": step, "score": best[0],
                       "probability": best[4], "residual": best[5]})

    angles = tuple(best[1:4])
    prob, resid = best[4], best[5]
    if polish:
        polished = _polish_sign_flip(angles)
        if polished is not None:
            p_angles, p_prob, p_resid = polished
            if p_prob - penalty * p_resid >= best[0] - 1e-12:
                angles, prob, resid = p_angles, p_prob, p_resid
    return OptimizationResult(
        objective=objective,
        angles=tuple(float(a) for a in angles),
        probability=float(prob),
        residual=float(resid),
        rounds=rounds,
        grid_step=grid_step,
        refinement_rounds=refinement_rounds,
    )


def _polish_sign_flip(angles) -> tuple[tuple[float, float, float], float, float] | None:
    """Drive the incumbent onto the proportionality manifold with SLSQP.

    Variables are the three angles plus the common branch amplitude s;
    maximizing s^2 under a0 = a1 = s, a2 = -s maximizes the worst-case
    branch probability exactly on the constraint manifold.
    """

    def split(x):
        return x[:3], x[3]

    def neg_obj(x):
        return -x[3] ** 2

    def c0(x):
        th, s = split(x)
        return sign_shift_branch_amplitudes(*th)[0] - s

    def c1(x):
        th, s = split(x)
        return sign_shift_branch_amplitudes(*th)[1] - s

    def c2(x):
        th, s = split(x)
        return sign_shift_branch_amplitudes(*th)[2] + s

    s0 = sign_shift_branch_amplitudes(*angles)[0]
    x0 = np.array([*angles, s0])
    res = minimize(
        neg_obj, x0, method="SLSQP",
        constraints=[{"type": "eq", "fun": f} for f in (c0, c1, c2)],
        options={"maxiter": 300, "ftol": 1e-14},
    )
    if not res.success:
        return None
    th = tuple(float(v) for v in res.x[:3])
    a = sign_shift_branch_amplitudes(*th)
    prob = float(min(v * v for v in a))
    resid = proportionality_residual(a, (1.0, 1.0, -1.0))
    return th, prob, resid
