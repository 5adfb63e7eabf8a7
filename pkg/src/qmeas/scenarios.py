"""Named, parameterized scenarios with expected values and tolerances.

Each scenario turns a parameter map and a random generator into a table of
computed values, a table of expected values (value, tolerance, provenance,
anchor), and optional ``(x, y)`` curves for external plotting. Expected
values are closed forms in the parameters, so they remain checkable when the
defaults are overridden.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping

import numpy as np

from . import linalg as la
from .bayes import CoinData, DiscreteBelief, bayes_update, coin_estimators, grid_posterior
from .decay import DecayModel, decay_kraus, decay_trajectory, fit_decay_rates
from .discrimination import (
    StateEnsemble,
    helstrom,
    numeric_usd,
    optimal_usd,
    projective_usd,
    simulate_discrimination,
)
from .errors import QMeasError
from .interferometry import (
    MachZehnder,
    TwoPathConfig,
    default_phase_grid,
    duality_report,
    eraser_postselect,
    fringe_pattern,
    hardy_detection_probabilities,
    ifm_conclusive_fraction,
    ifm_defective_posterior,
    ifm_monte_carlo,
    ifm_single_pass,
    ifm_variable_splitter_search,
    markers_with_overlap,
    zeno_ifm,
)
from .measurement import naimark_dilation, outcome_probabilities, selective_update, MeasurementModel
from .states import KET_E, KET_G, DensityMatrix, PureState, fidelity_pure, pure_to_density, reduced_density
from .weak import (
    CouplingSpec,
    GaussianPointer,
    PrePostSelection,
    abl_probability,
    bayes_weak_value,
    box_projectors,
    extended_three_box_selection,
    hardy_weak_table,
    pointer_couple_exact,
    pointer_postselect,
    three_box_selection,
    weak_value,
)

PROVENANCES = ("paper", "trivial", "derived")
SIGMA_BAND = 3.0


@dataclass(frozen=True)
class Param:
    name: str
    kind: type  # int, float, str, or tuple (comma-separated floats)
    default: object
    help: str
    minimum: float | None = None

    def parse(self, text: str):
        try:
            if self.kind is tuple:
                value = tuple(float(x) for x in str(text).split(",") if x.strip())
            elif self.kind is int:
                value = int(text)
            elif self.kind is float:
                value = float(text)
            else:
                value = str(text)
        except ValueError as exc:
            raise QMeasError(f"parameter {self.name!r}: cannot parse {text!r} as {self.type_name}") from exc
        return self.coerce(value)

    def coerce(self, value):
        """Accept an already-typed value (from a config file) and range-check it."""
        if self.kind is tuple:
            if isinstance(value, str):
                return self.parse(value)
            value = tuple(float(x) for x in value)
            if not value:
                raise QMeasError(f"parameter {self.name!r} needs at least one value")
            items = value
        elif self.kind is int:
            if isinstance(value, bool) or not float(value).is_integer():
                raise QMeasError(f"parameter {self.name!r} must be an integer, got {value!r}")
            value = int(value)
            items = (value,)
        elif self.kind is float:
            value = float(value)
            if not np.isfinite(value):
                raise QMeasError(f"parameter {self.name!r} must be finite")
            items = (value,)
        else:
            value = str(value)
            items = ()
        if self.minimum is not None and any(x < self.minimum for x in items):
            raise QMeasError(f"parameter {self.name!r} must be >= {self.minimum}, got {value!r}")
        return value

    @property
    def type_name(self) -> str:
        return {int: "int", float: "float", str: "str", tuple: "float-list"}[self.kind]

    def describe(self) -> dict:
        default = list(self.default) if self.kind is tuple else self.default
        return {"name": self.name, "type": self.type_name, "default": default, "help": self.help}


@dataclass(frozen=True)
class Expected:
    value: float
    tolerance: float
    provenance: str
    anchor: str

    def __post_init__(self):
        if self.provenance not in PROVENANCES:
            raise QMeasError(f"unknown provenance {self.provenance!r}")

    def holds(self, value: float) -> bool:
        return bool(abs(value - self.value) <= self.tolerance)

    def as_dict(self) -> dict:
        return {"value": self.value, "tolerance": self.tolerance, "provenance": self.provenance, "anchor": self.anchor}


@dataclass
class Outcome:
    values: dict[str, float] = field(default_factory=dict)
    expected: dict[str, Expected] = field(default_factory=dict)
    curves: dict[str, dict[str, list[float]]] = field(default_factory=dict)

    def put(self, name: str, value, expected: Expected | None = None) -> None:
        self.values[name] = _number(value)
        if expected is not None:
            self.expected[name] = expected

    def curve(self, name: str, x, y) -> None:
        self.curves[name] = {"x": [float(v) for v in x], "y": [float(v) for v in y]}


def _number(value):
    if isinstance(value, (bool, np.bool_)):
        return int(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    return float(value) + 0.0  # folds -0.0 into 0.0


@dataclass(frozen=True)
class Scenario:
    name: str
    description: str
    anchors: tuple[str, ...]
    params: tuple[Param, ...]
    run: Callable[[dict, np.random.Generator], Outcome]

    def param(self, name: str) -> Param:
        for p in self.params:
            if p.name == name:
                return p
        known = ", ".join(p.name for p in self.params) or "none"
        raise QMeasError(f"scenario {self.name!r} has no parameter {name!r} (known: {known})")

    def resolve(self, overrides: Mapping[str, object] | None = None) -> dict:
        """Defaults updated with ``overrides``; unknown keys are rejected."""
        values = {p.name: p.default for p in self.params}
        for key, raw in (overrides or {}).items():
            values[key] = self.param(key).coerce(raw)
        return values

    def describe(self) -> dict:
        return {
            "name": self.name,
            "description": self.description,
            "params": [p.describe() for p in self.params],
            "anchors": list(self.anchors),
        }


@dataclass(frozen=True)
class ScenarioResult:
    scenario: str
    params: dict
    seed: int
    values: dict[str, float]
    expected: dict[str, Expected]
    curves: dict[str, dict[str, list[float]]]

    @property
    def passed(self) -> bool:
        return all(exp.holds(self.values[name]) for name, exp in self.expected.items())

    def failures(self) -> list[str]:
        out = []
        for name, exp in self.expected.items():
            got = self.values[name]
            if not exp.holds(got):
                out.append(
                    f"{self.scenario}.{name}: value {got!r} differs from expected {exp.value!r} "
                    f"by {abs(got - exp.value):.3e} > tolerance {exp.tolerance:.3e} ({exp.provenance}: {exp.anchor})"
                )
        return out

    def as_dict(self, include_curves: bool = True) -> dict:
        params = {k: list(v) if isinstance(v, tuple) else v for k, v in self.params.items()}
        out = {
            "scenario": self.scenario,
            "params": params,
            "seed": self.seed,
            "values": dict(self.values),
            "expected": {k: v.as_dict() for k, v in self.expected.items()},
            "pass": self.passed,
        }
        if include_curves and self.curves:
            out["curves"] = self.curves
        return out


def _binomial_band(p: float, n: int) -> float:
    return SIGMA_BAND * float(np.sqrt(p * (1 - p) / n))


# coin


def _run_coin(params: dict, rng: np.random.Generator) -> Outcome:
    data = CoinData(params["H"], params["N"])
    h, n = data.heads, data.tosses
    est = coin_estimators(data)
    flat = grid_posterior(data, "flat", params["grid"])
    bures = grid_posterior(data, "bures", params["grid"])
    out = Outcome()
    out.put("mean_flat", est.mean_flat, Expected(float(Fraction(h + 1, n + 2)), 1e-15, "paper", "flat-prior posterior mean (H+1)/(N+2)"))
    out.put("mean_bures", est.mean_bures, Expected((h + 0.5) / (n + 1), 1e-15, "paper", "Bures-prior mean (H+1/2)/(N+1)"))
    out.put("mean_flat_grid", flat.mean, Expected((h + 1) / (n + 2), 1e-6, "derived", "trapezoid integration of the flat posterior"))
    out.put("mean_bures_grid", bures.mean, Expected((h + 0.5) / (n + 1), 2e-3, "paper", "grid integration of the Bures posterior"))
    if n > 0:
        out.put("mle", est.mle, Expected(h / n, 0.0, "paper", "maximum likelihood estimate H/N"))
        out.put("naive_stderr", est.naive_stderr, Expected(float(np.sqrt(h * (n - h) / n**3)), 1e-15, "paper", "naive error bar sqrt(p(1-p)/N)"))
    coarse_flat = grid_posterior(data, "flat", params["curve_points"])
    coarse_bures = grid_posterior(data, "bures", params["curve_points"])
    out.curve("posterior_flat", coarse_flat.grid, coarse_flat.density)
    out.curve("posterior_bures", coarse_bures.grid, coarse_bures.density)
    return out


# disease


def _run_disease(params: dict, rng: np.random.Generator) -> Outcome:
    prev, sens, fpr = params["prevalence"], params["sensitivity"], params["false_positive"]
    for name in ("prevalence", "sensitivity", "false_positive"):
        if not 0.0 <= params[name] <= 1.0:
            raise QMeasError(f"{name} must lie in [0, 1]")
    post = bayes_update(DiscreteBelief(("disease", "healthy"), (prev, 1 - prev)), (sens, fpr))
    exact = prev * sens / (prev * sens + fpr * (1 - prev))
    out = Outcome()
    anchor = "Bayes rule for a rare condition: P(D|+) = p s / (p s + f (1 - p))"
    out.put("p_disease_given_positive", post["disease"], Expected(exact, 1e-12, "paper", anchor))
    out.put("p_healthy_given_positive", post["healthy"], Expected(1 - exact, 1e-12, "paper", anchor))
    return out


# decay


def _run_decay(params: dict, rng: np.random.Generator) -> Outcome:
    eta = params["eta_half"]
    plus = DensityMatrix(np.full((2, 2), 0.5))  # |+><+| with exact entries
    model = decay_kraus(eta)
    rho_nc, p_nc = selective_update(plus, model, "no_click")
    rho_c, p_c = selective_update(plus, model, "click") if eta > 0 else (None, 0.0)
    target = PureState.normalized([1.0, np.sqrt(1 - eta)])
    out = Outcome()
    anchor = "no-click Kraus update of |+> at emission probability eta"
    out.put("p_no_click", p_nc, Expected(1 - eta / 2, 4e-16, "paper", anchor))
    out.put("p_click", p_c, Expected(eta / 2, 4e-16, "paper", "click Kraus operator maps onto |g>"))
    out.put("no_click_fidelity", fidelity_pure(rho_nc, target), Expected(1.0, 1e-10, "paper", anchor))
    out.put("no_click_p_ground", rho_nc.matrix[0, 0].real, Expected(1 / (2 - eta), 1e-12, "paper", "no-click ground population 1/(2 - eta)"))
    if rho_c is not None:
        out.put("click_p_ground", rho_c.matrix[0, 0].real, Expected(1.0, 1e-12, "paper", "click Kraus operator maps onto |g>"))

    # atom entangled with the emitted field, (|e,0> + |g,1>)/sqrt(2)
    ent = pure_to_density(PureState.normalized(np.kron(KET_E, KET_G) + np.kron(KET_G, KET_E)), dims=(2, 2))
    atom = reduced_density(ent, 0).matrix
    ent_anchor = "partial trace of (|e,0> + |g,1>)/sqrt(2) over the field"
    out.put("atom_rho_gg", atom[0, 0].real, Expected(0.5, 1e-12, "paper", ent_anchor))
    out.put("atom_rho_ee", atom[1, 1].real, Expected(0.5, 1e-12, "paper", ent_anchor))
    out.put("atom_rho_ge_abs", abs(atom[0, 1]), Expected(0.0, 1e-12, "paper", ent_anchor))

    traj = decay_trajectory(plus, DecayModel(params["eta_step"], params["steps"]))
    pop_rate, coh_rate = fit_decay_rates(traj)
    out.put("population_rate", pop_rate, Expected(-np.log1p(-params["eta_step"]), 1e-9, "derived", "excited population decays as (1 - eta)^n"))
    out.put("coherence_rate", coh_rate, Expected(-0.5 * np.log1p(-params["eta_step"]), 1e-9, "derived", "coherence decays as (1 - eta)^(n/2)"))
    out.put("t2_over_t1", pop_rate / coh_rate, Expected(2.0, 0.02, "paper", "fitted decay constants: population rate / coherence rate = 2"))
    steps = np.arange(len(traj))
    out.curve("excited_population", steps, [r.matrix[1, 1].real for r in traj])
    out.curve("coherence_abs", steps, [abs(r.matrix[0, 1]) for r in traj])
    return out


# duality


def _run_duality(params: dict, rng: np.random.Generator) -> Outcome:
    out = Outcome()
    anchor = "which-path distinguishability and fringe visibility obey D^2 + V^2 = 1 for pure markers"
    for k, s in enumerate(params["overlaps"]):
        if not 0.0 <= s <= 1.0:
            raise QMeasError(f"overlap must lie in [0, 1], got {s}")
        ma, mb = markers_with_overlap(s)
        amp = 1 / np.sqrt(2)
        cfg = TwoPathConfig(amp, amp, ma, mb, default_phase_grid(params["phase_samples"]))
        rep = duality_report(cfg)
        out.put(f"distinguishability_{k}", rep.distinguishability, Expected(float(np.sqrt(1 - s * s)), 1e-9, "derived", "Helstrom distinguishability of the markers"))
        out.put(f"visibility_{k}", rep.visibility, Expected(s, 1e-9, "derived", "visibility equals the marker overlap"))
        out.put(f"d2_plus_v2_{k}", rep.distinguishability**2 + rep.visibility**2, Expected(1.0, 1e-9, "paper", anchor))
        fr = fringe_pattern(cfg)
        out.curve(f"fringe_{k}", fr.phases, fr.probabilities)
    return out


# eraser


def _run_eraser(params: dict, rng: np.random.Generator) -> Outcome:
    n = params["phase_samples"]
    if n % 2:
        raise QMeasError("phase_samples must be even so that phi + pi lies on the grid")
    rep = eraser_postselect(default_phase_grid(n))
    out = Outcome()
    anchor = "eraser: idler-conditioned visibility 1, unconditioned visibility 0"
    out.put("visibility_d1", rep.visibility_d1, Expected(1.0, 1e-9, "paper", anchor))
    out.put("visibility_d2", rep.visibility_d2, Expected(1.0, 1e-9, "paper", anchor))
    out.put("p_select_d1", rep.p_select[0], Expected(0.5, 1e-9, "paper", anchor))
    out.put("p_select_d2", rep.p_select[1], Expected(0.5, 1e-9, "paper", anchor))
    shift = float(np.max(np.abs(rep.pattern_d1 - np.roll(rep.pattern_d2, -n // 2))))
    out.put("max_pi_shift_mismatch", shift, Expected(0.0, 1e-9, "paper", "the two conditional patterns are pi apart"))
    out.put("unconditioned_ptp", float(np.ptp(rep.unconditioned)), Expected(0.0, 1e-10, "paper", "unconditioned signal pattern is flat"))
    out.put("unconditioned_mean", float(np.mean(rep.unconditioned)), Expected(0.5, 1e-12, "trivial", "half the signal reaches the detector"))
    out.curve("pattern_d1", rep.phases, rep.pattern_d1)
    out.curve("pattern_d2", rep.phases, rep.pattern_d2)
    out.curve("unconditioned", rep.phases, rep.unconditioned)
    return out


# helstrom and USD


def _pair(overlap: float) -> StateEnsemble:
    if not 0.0 <= overlap <= 1.0:
        raise QMeasError(f"overlap must lie in [0, 1], got {overlap}")
    return StateEnsemble((PureState(np.array([1.0, 0.0])), PureState(np.array([overlap, np.sqrt(1 - overlap**2)]))))


def _run_helstrom(params: dict, rng: np.random.Generator) -> Outcome:
    s = params["overlap"]
    rep = helstrom(_pair(s))
    p_err = 0.5 * (1 - np.sqrt(1 - s * s))
    out = Outcome()
    anchor = "minimum-error discrimination of two equiprobable pure states"
    out.put("p_error", rep.p_error, Expected(p_err, 1e-9, "paper", anchor))
    out.put("p_success", rep.p_success, Expected(1 - p_err, 1e-9, "paper", anchor))
    return out


def _run_usd(params: dict, rng: np.random.Generator) -> Outcome:
    s = params["overlap"]
    ens = _pair(s)
    out = Outcome()
    proj = projective_usd(ens)
    opt = optimal_usd(ens)
    num = numeric_usd(ens)
    out.put("projective_success", proj.p_success, Expected((1 - s * s) / 2, 1e-9, "paper", "von Neumann measurement that certifies one state"))
    out.put("optimal_success", opt.p_success, Expected(1 - s, 1e-9, "paper", "optimal unambiguous discrimination succeeds with 1 - |<a|b>|"))
    out.put("numeric_success", num.p_success, Expected(1 - s, 1e-6, "derived", "numerical optimum matches the closed form"))
    out.put("optimal_p_error", opt.p_error, Expected(0.0, 1e-12, "paper", "USD conclusive outcomes have zero error"))
    n = params["samples"]
    mc = simulate_discrimination(opt, ens, rng, n)
    out.put("mc_errors", mc.n_error, Expected(0, 0, "paper", "USD conclusive outcomes have zero error"))
    out.put("mc_success_fraction", mc.n_correct / n, Expected(1 - s, _binomial_band(1 - s, n), "derived", "binomial 3-sigma band"))
    return out


def _symmetric_ensemble(n: int, overlap: float) -> StateEnsemble:
    gram = (1 - overlap) * np.eye(n) + overlap * np.ones((n, n))
    if np.linalg.eigvalsh(gram).min() <= 0:
        raise QMeasError(f"pairwise overlap {overlap} is not realizable for {n} states")
    kets = np.linalg.cholesky(gram).conj().T
    return StateEnsemble(tuple(PureState.normalized(kets[:, k]) for k in range(n)))


def _run_usd_multi(params: dict, rng: np.random.Generator) -> Outcome:
    n, s = params["n_states"], params["overlap"]
    ens = _symmetric_ensemble(n, s)
    fast = numeric_usd(ens)
    slow = numeric_usd(ens, symmetric_shortcut=False)
    out = Outcome()
    anchor = "symmetric qutrit USD success above 1/n"
    out.put("p_success", fast.p_success, Expected(1 - s, 1e-9, "derived", "smallest Gram eigenvalue 1 - s for symmetric equiprobable states"))
    out.put("p_success_barrier", slow.p_success, Expected(1 - s, 1e-8, "derived", "interior-point optimum without the symmetry shortcut"))
    out.put("p_error", fast.p_error, Expected(0.0, 1e-9, "trivial", "USD conclusive outcomes have zero error"))
    out.put("beats_one_over_n", fast.p_success > 1 / n, Expected(1, 0, "paper", anchor))
    return out


# interaction-free measurement and Zeno


def _run_ifm(params: dict, rng: np.random.Generator) -> Outcome:
    mz = MachZehnder()
    single = ifm_single_pass(mz, "working").as_dict()
    out = Outcome()
    anchor = "balanced Mach-Zehnder with an absorber in one arm: (C, D, boom) = (1/4, 1/4, 1/2)"
    out.put("p_C", single["C"], Expected(0.25, 1e-12, "paper", anchor))
    out.put("p_D", single["D"], Expected(0.25, 1e-12, "paper", anchor))
    out.put("p_boom", single["boom"], Expected(0.5, 1e-12, "paper", anchor))
    out.put("conclusive_fraction", ifm_conclusive_fraction(mz), Expected(1 / 3, 1e-12, "paper", "repeat until D or boom: P(D) / (P(D) + P(boom)) = 1/3"))
    trials = params["trials"]
    stats = ifm_monte_carlo(mz, "working", rng, trials)
    out.put("mc_certified_fraction", stats.certified / trials, Expected(1 / 3, _binomial_band(1 / 3, trials), "paper", "binomial 3-sigma band around 1/3"))
    out.put("mc_unfinished", stats.inconclusive, Expected(0, 0, "trivial", "every run ends within the photon limit"))
    ns = list(range(0, params["n_clicks"] + 1))
    posts = [ifm_defective_posterior(n)["defective"] for n in ns]
    for n, p in zip(ns[1:], posts[1:]):
        out.put(f"posterior_defective_{n}", float(p), Expected(float(Fraction(2**n, 2**n + 1)), 0.0, "paper", "posterior P(defective | n C clicks) = 2^n / (2^n + 1)"))
    out.curve("posterior_defective", ns, [float(p) for p in posts])
    if params["splitter_points"] > 0:
        search = ifm_variable_splitter_search(params["splitter_points"])
        m = params["splitter_points"]
        out.put("splitter_best_efficiency", search.best_efficiency, Expected(m / (2 * m + 1), 1e-12, "derived", "dark-port splitters on the grid k/(m+1)"))
        out.put("splitter_near_half", search.best_efficiency >= 0.49, Expected(1, 0, "paper", "unbalanced splitters push the certified share towards 1/2"))
    return out


def _run_zeno(params: dict, rng: np.random.Generator) -> Outcome:
    out = Outcome()
    n = params["n"]
    res = zeno_ifm(n)
    closed = np.cos(np.pi / (2 * n)) ** (2 * n)
    anchor = "Zeno interrogation: P(absorb) = 1 - cos^(2n)(pi/2n)"
    out.put("p_explode", res.p_explode, Expected(1 - closed, 1e-12, "paper", anchor))
    out.put("p_detect", res.p_detect_working, Expected(closed, 1e-12, "derived", anchor))
    out.put("p_defective_error", res.p_detect_defective_error, Expected(0.0, 1e-12, "derived", "n rotations by pi/2n compose to pi/2"))
    big = params["n_large"]
    large = zeno_ifm(big)
    out.put("p_detect_large", large.p_detect_working, Expected(np.cos(np.pi / (2 * big)) ** (2 * big), 1e-12, "derived", anchor))
    out.put("p_detect_large_above_0995", large.p_detect_working > 0.995, Expected(1, 0, "paper", "cos^(2n)(pi/2n) -> 1 as n grows"))
    ns = np.arange(1, params["curve_max"] + 1)
    out.curve("p_detect_vs_passes", ns, [zeno_ifm(int(k)).p_detect_working for k in ns])
    return out


# Hardy


def _run_hardy(params: dict, rng: np.random.Generator) -> Outcome:
    probs = hardy_detection_probabilities()
    table = hardy_weak_table()
    out = Outcome()
    anchor = "Hardy paradox: P(D+ and D-) = 1/16"
    out.put("p_D_plus", probs["D+C-"] + probs["D+D-"], Expected(1 / 8, 1e-12, "paper", "Hardy paradox: P(D+) = 1/8"))
    out.put("p_joint_dark", probs["D+D-"], Expected(1 / 16, 1e-12, "paper", anchor))
    out.put("p_boom", probs["boom"], Expected(1 / 4, 1e-12, "derived", "P(I+ I-) = 1/4 before annihilation"))
    joints = {("I+", "O-"): 1, ("O+", "I-"): 1, ("I+", "I-"): 0, ("O+", "O-"): -1}
    for (p, e), val in joints.items():
        out.put(f"weak_{p}{e}", table.joints[(p, e)].real, Expected(val, 1e-12, "paper", "weak values of joint occupation projectors given D+ D-"))
    for lab, val in {"I+": 1, "I-": 1, "O+": 0, "O-": 0}.items():
        out.put(f"weak_{lab}", table.singles[lab].real, Expected(val, 1e-12, "paper", "weak values of single-particle occupation projectors given D+ D-"))
    return out


# three boxes


def _run_three_box(params: dict, rng: np.random.Generator) -> Outcome:
    boxes = box_projectors()
    abl = abl_probability(three_box_selection(), boxes)
    out = Outcome()
    for name, p, val in zip(("A", "B", "C"), abl, (0, 1, 0)):
        out.put(f"abl_{name}", p, Expected(val, 1e-12, "paper", "ABL rule for the three-box selection: (0, 1, 0)"))
    ext = extended_three_box_selection()
    total = 0j
    for name, proj, val in zip(("A'", "B", "C'"), boxes, (1, 1, -1)):
        wv = weak_value(proj.matrix, ext).value
        total += wv
        out.put(f"weak_{name}", wv.real, Expected(val, 1e-12, "paper", "extended three-box weak values (1, 1, -1)"))
        out.put(f"weak_{name}_imag", wv.imag, Expected(0.0, 1e-12, "trivial", "real weak values for real states"))
    out.put("weak_sum", total.real, Expected(1.0, 1e-12, "paper", "sum of weak values of a resolution of identity is 1"))
    return out


# weak pointer


def _run_weak_pointer(params: dict, rng: np.random.Generator) -> Outcome:
    sigma, g0 = params["sigma"], params["coupling"]
    sz = np.diag([1.0, -1.0])
    a_pre = params["pre_angle"]
    initial = PureState(np.array([np.cos(a_pre), np.sin(a_pre)]))
    b = params["post_angle"]
    final = PureState(np.array([np.cos(b), -np.exp(1j * params["post_phase"]) * np.sin(b)]))
    wv = weak_value(sz, PrePostSelection(initial, final))
    aw = wv.value
    out = Outcome()
    out.put("weak_value_re", aw.real)
    out.put("weak_value_im", aw.imag)
    out.put("p_postselect", wv.postselection_prob)

    expect_a = float(np.cos(2 * a_pre))
    for mult in (1, 2, 4):
        ptr = GaussianPointer.default(sigma * mult, max_shift=abs(g0), n_points=params["n_points"])
        joint = pointer_couple_exact(ptr, initial, sz, CouplingSpec(g0))
        out.put(
            f"unconditioned_shift_sigma{mult}",
            joint.unconditioned_mean_x,
            Expected(g0 * expect_a, 1e-8, "paper", "unconditioned pointer shift G<A>, independent of sigma"),
        )

    ptr = GaussianPointer.default(sigma, max_shift=abs(g0), n_points=params["n_points"])
    mx, mp = [], []
    for k, g in enumerate((g0, g0 / 2, g0 / 4)):
        res = pointer_postselect(pointer_couple_exact(ptr, initial, sz, CouplingSpec(g)), final)
        mx.append(res.mean_x)
        mp.append(res.mean_p)
        out.put(f"mean_x_over_G_{2**k}", res.mean_x / g)
        out.put(f"mean_p_scaled_{2**k}", res.mean_p * 2 * sigma**2 / g)
    limit_tol = 1e-3 * max(1.0, abs(aw))
    out.expected["mean_x_over_G_4"] = Expected(aw.real, limit_tol, "paper", "postselected mean_x / G -> Re a_w")
    out.expected["mean_p_scaled_4"] = Expected(aw.imag, limit_tol, "paper", "postselected mean_p 2 sigma^2 / G -> Im a_w")
    rich = "first-order Richardson ratio of the shift under G-halving"
    out.put("richardson_x", (mx[0] - mx[1]) / (mx[1] - mx[2]), Expected(2.0, 0.3, "paper", rich))
    out.put("richardson_p", (mp[0] - mp[1]) / (mp[1] - mp[2]), Expected(2.0, 0.3, "paper", rich))
    err_x = [abs(m / g - aw.real) for m, g in zip(mx, (g0, g0 / 2, g0 / 4))]
    err_p = [abs(m * 2 * sigma**2 / g - aw.imag) for m, g in zip(mp, (g0, g0 / 2, g0 / 4))]
    out.put("error_ratio_x", err_x[1] / err_x[2])
    out.put("error_ratio_p", err_p[1] / err_p[2])

    worst = 0.0
    for _ in range(params["random_instances"]):
        d = int(rng.integers(2, 5))
        a = la.random_hermitian(d, rng)
        sel = PrePostSelection(PureState(la.random_ket(d, rng)), PureState(la.random_ket(d, rng)))
        worst = max(worst, abs(bayes_weak_value(a, sel) - weak_value(a, sel).value))
    out.put("bayes_weak_value_max_diff", worst, Expected(0.0, 1e-12, "paper", "spectral conditional-expectation form equals <f|A|i>/<f|i>"))
    return out


# Naimark


def _run_naimark(params: dict, rng: np.random.Generator) -> Outcome:
    d, k = params["dim"], params["outcomes"]
    povm = la.random_povm(d, k, rng)
    dil = naimark_dilation(povm)
    model = MeasurementModel(tuple(la.psd_sqrt(e) for e in povm), tol=1e-9)
    worst = 0.0
    for _ in range(params["states"]):
        rho = DensityMatrix(la.random_density(d, rng))
        direct = np.array([np.trace(e @ rho.matrix).real for e in povm])
        worst = max(worst, float(np.max(np.abs(dil.probabilities(rho) - direct))))
        worst = max(worst, float(np.max(np.abs(outcome_probabilities(rho, model) - direct))))
    iso = float(np.max(np.abs(la.dagger(dil.isometry) @ dil.isometry - np.eye(d))))
    out = Outcome()
    anchor = "Naimark dilation: Tr(E_i rho) from ancilla projectors"
    out.put("max_probability_diff", worst, Expected(0.0, 1e-9, "paper", anchor))
    out.put("isometry_deviation", iso, Expected(0.0, 1e-9, "derived", "V^dagger V = I"))
    out.put("dilated_dim", d * k, Expected(d * k, 0, "trivial", "system times ancilla"))
    return out


SCENARIOS: dict[str, Scenario] = {
    s.name: s
    for s in (
        Scenario(
            "coin",
            "Coin-bias estimators and grid posteriors",
            ("coin bias: flat-prior posterior mean (H+1)/(N+2)", "Bures prior mean (H+1/2)/(N+1)"),
            (
                Param("H", int, 0, "observed heads", 0),
                Param("N", int, 0, "number of tosses", 0),
                Param("grid", int, 10_000, "posterior grid size", 101),
                Param("curve_points", int, 201, "grid size of the emitted posterior curves", 101),
            ),
            _run_coin,
        ),
        Scenario(
            "disease",
            "Posterior of a rare disease after a positive test",
            ("Bayes rule for a rare condition: P(D|+) = p s / (p s + f (1 - p))",),
            (
                Param("prevalence", float, 1e-6, "prior probability of disease", 0.0),
                Param("sensitivity", float, 0.99, "P(positive | disease)", 0.0),
                Param("false_positive", float, 1e-4, "P(positive | healthy)", 0.0),
            ),
            _run_disease,
        ),
        Scenario(
            "decay",
            "Photodetected spontaneous emission, entanglement with the field, T2 = 2 T1",
            ("no-click Kraus update at eta = 1/2: P = 3/4", "amplitude damping: T2 = 2 T1"),
            (
                Param("eta_half", float, 0.5, "emission probability for the single-step half-life", 0.0),
                Param("eta_step", float, 0.01, "per-step emission probability for the trajectory", 0.0),
                Param("steps", int, 500, "trajectory length", 2),
            ),
            _run_decay,
        ),
        Scenario(
            "duality",
            "Distinguishability and visibility for marked two-path interference",
            ("which-path information versus fringe visibility, D^2 + V^2 = 1",),
            (
                Param("overlaps", tuple, (0.0, 0.25, float(1 / np.sqrt(2)), 1.0), "marker overlaps |<A|B>|", 0.0),
                Param("phase_samples", int, 256, "phase grid size", 8),
            ),
            _run_duality,
        ),
        Scenario(
            "eraser",
            "Quantum eraser with post-selection on the idler splitter outputs",
            ("quantum eraser: fringes recovered by conditioning on the idler",),
            (Param("phase_samples", int, 256, "phase grid size (even)", 8),),
            _run_eraser,
        ),
        Scenario(
            "helstrom",
            "Minimum-error discrimination of two pure states",
            ("minimum-error measurement for two non-orthogonal states",),
            (Param("overlap", float, float(1 / np.sqrt(2)), "|<a|b>|", 0.0),),
            _run_helstrom,
        ),
        Scenario(
            "usd",
            "Unambiguous discrimination of two pure states, closed form, numeric, and sampled",
            ("unambiguous discrimination with an inconclusive outcome",),
            (
                Param("overlap", float, float(1 / np.sqrt(2)), "|<a|b>|", 0.0),
                Param("samples", int, 100_000, "Monte Carlo samples", 1),
            ),
            _run_usd,
        ),
        Scenario(
            "usd-multi",
            "Unambiguous discrimination of symmetric states with equal pairwise overlaps",
            ("symmetric qutrit USD with an inconclusive outcome",),
            (
                Param("n_states", int, 3, "number of states (and dimension)", 2),
                Param("overlap", float, 0.5, "pairwise overlap", 0.0),
            ),
            _run_usd_multi,
        ),
        Scenario(
            "ifm",
            "Interaction-free bomb testing: single pass, repeat until conclusive, posteriors, splitters",
            ("interaction-free measurement in a balanced Mach-Zehnder", "posterior 2^n / (2^n + 1) after n C clicks"),
            (
                Param("trials", int, 100_000, "Monte Carlo runs", 1),
                Param("n_clicks", int, 3, "largest number of C clicks for the posterior", 1),
                Param("splitter_points", int, 200, "variable-splitter grid size (0 skips the search)", 0),
            ),
            _run_ifm,
        ),
        Scenario(
            "zeno",
            "Zeno-enhanced interaction-free measurement",
            ("Zeno-enhanced interaction-free measurement",),
            (
                Param("n", int, 10, "passes for the explosion check", 1),
                Param("n_large", int, 500, "passes for the detection check", 1),
                Param("curve_max", int, 50, "largest pass count in the emitted curve", 1),
            ),
            _run_zeno,
        ),
        Scenario(
            "hardy",
            "Hardy's paradox detection statistics and weak occupation table",
            ("Hardy paradox joint dark-port probability 1/16", "Hardy weak occupation table (1, 1, 0, -1)"),
            (),
            _run_hardy,
        ),
        Scenario(
            "three-box",
            "Three-box paradox: strong (ABL) and weak occupation",
            ("three-box ABL and weak values",),
            (),
            _run_three_box,
        ),
        Scenario(
            "weak-pointer",
            "Gaussian pointer coupled to a qubit, with and without post-selection",
            ("pointer shift G<A> without post-selection", "weak value from the postselected pointer"),
            (
                Param("sigma", float, 1.0, "pointer position spread", 1e-6),
                Param("coupling", float, 0.01, "coupling strength G", 1e-12),
                Param("pre_angle", float, 0.7, "initial state (cos a, sin a)"),
                Param("post_angle", float, 0.6, "final state angle b"),
                Param("post_phase", float, 0.9, "final state (cos b, -e^{i phase} sin b)"),
                Param("n_points", int, 2048, "pointer grid size", 64),
                Param("random_instances", int, 50, "random checks of the Bayesian weak value", 0),
            ),
            _run_weak_pointer,
        ),
        Scenario(
            "naimark",
            "Naimark dilation of random POVMs",
            ("Naimark dilation of a POVM",),
            (
                Param("dim", int, 3, "system dimension", 1),
                Param("outcomes", int, 4, "number of POVM elements", 1),
                Param("states", int, 100, "random states to test", 1),
            ),
            _run_naimark,
        ),
    )
}


def get_scenario(name: str) -> Scenario:
    try:
        return SCENARIOS[name]
    except KeyError:
        raise QMeasError(f"unknown scenario {name!r}; choose from {', '.join(SCENARIOS)}") from None


def list_scenarios() -> list[dict]:
    return [s.describe() for s in SCENARIOS.values()]


def run_scenario(name: str, params: Mapping[str, object] | None = None, seed: int = 0) -> ScenarioResult:
    """Run one scenario deterministically from ``seed``."""
    scenario = get_scenario(name)
    resolved = scenario.resolve(params)
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    outcome = scenario.run(resolved, rng)
    return ScenarioResult(scenario.name, resolved, seed, outcome.values, outcome.expected, outcome.curves)


def verify_seeds(seed: int) -> dict[str, int]:
    """Per-scenario seeds split deterministically from one root seed."""
    children = np.random.SeedSequence(seed).spawn(len(SCENARIOS))
    return {name: int(child.generate_state(1, dtype=np.uint64)[0]) for name, child in zip(SCENARIOS, children)}
