"""Two-path interference, which-path markers, and interaction-free measurement.

Beamsplitter convention (used everywhere): a splitter with amplitude
transmission ``t`` and reflection ``r = sqrt(1 - t**2)`` is the symmetric
matrix ``[[t, i r], [i r, t]]``; reflection picks up a factor ``i``.

Mach-Zehnder layout: the photon enters port 0 of the first splitter. Arm 0
carries the transmitted amplitude and arm 1 (the reflected one, where an
absorbing object may sit) carries ``i r1``. After the second splitter,
output port 0 is detector ``D`` and port 1 is detector ``C``; for a balanced
empty interferometer ``D`` is dark.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import linalg as la
from .bayes import DiscreteBelief, sequential_update
from .discrimination import StateEnsemble, helstrom
from .errors import QMeasError
from .measurement import sample_outcome_indices
from .states import PureState

MIN_PHASE_SAMPLES = 8
DEFAULT_PHASE_SAMPLES = 256


def default_phase_grid(n: int = DEFAULT_PHASE_SAMPLES) -> np.ndarray:
    """``n`` phases on [0, 2 pi), so multiples of pi/2 are included when 4 | n."""
    return np.linspace(0.0, 2 * np.pi, n, endpoint=False)


def beamsplitter(t: float) -> np.ndarray:
    """Symmetric beamsplitter with amplitude transmission ``t`` in [0, 1]."""
    if not 0.0 <= t <= 1.0:
        raise QMeasError(f"transmission amplitude must lie in [0, 1], got {t}")
    r = np.sqrt(1.0 - t * t)
    return np.array([[t, 1j * r], [1j * r, t]])


def visibility(pattern: np.ndarray) -> float:
    """Fringe contrast ``(max - min)/(max + min)``; zero for an all-zero pattern."""
    hi, lo = float(np.max(pattern)), float(np.min(pattern))
    return 0.0 if hi + lo == 0 else (hi - lo) / (hi + lo)


@dataclass(frozen=True, eq=False)
class TwoPathConfig:
    """Path amplitudes, the marker state each path leaves behind, and phase samples."""

    amp_a: complex
    amp_b: complex
    marker_a: PureState
    marker_b: PureState
    phase_grid: np.ndarray = field(default_factory=default_phase_grid)

    def __post_init__(self):
        norm = abs(self.amp_a) ** 2 + abs(self.amp_b) ** 2
        if abs(norm - 1.0) > 1e-10:
            raise QMeasError(f"|amp_a|^2 + |amp_b|^2 = {norm!r}, expected 1")
        markers = [m if isinstance(m, PureState) else PureState(m) for m in (self.marker_a, self.marker_b)]
        if markers[0].dim != markers[1].dim:
            raise QMeasError("marker states must share a dimension")
        grid = np.asarray(self.phase_grid, dtype=float)
        if grid.ndim != 1 or grid.size < MIN_PHASE_SAMPLES:
            raise QMeasError(f"need at least {MIN_PHASE_SAMPLES} phase samples, got {grid.size}")
        object.__setattr__(self, "marker_a", markers[0])
        object.__setattr__(self, "marker_b", markers[1])
        object.__setattr__(self, "phase_grid", grid)

    @property
    def marker_overlap(self) -> complex:
        return self.marker_a.inner(self.marker_b)


@dataclass(frozen=True, eq=False)
class FringeReport:
    phases: np.ndarray
    probabilities: np.ndarray
    visibility: float
    distinguishability: float


def markers_with_overlap(overlap: float) -> tuple[PureState, PureState]:
    """Qubit markers ``|A> = |0>`` and ``|B> = s|0> + sqrt(1 - s^2)|1>``."""
    if not 0.0 <= overlap <= 1.0:
        raise QMeasError(f"overlap must lie in [0, 1], got {overlap}")
    return PureState(np.array([1.0, 0.0])), PureState(np.array([overlap, np.sqrt(1.0 - overlap**2)]))


def _fringe_probabilities(config: TwoPathConfig) -> np.ndarray:
    # detector projects the path onto (|a> + |b>)/sqrt(2); the marker is traced out
    a = config.amp_a * config.marker_a.amplitudes
    b = config.amp_b * config.marker_b.amplitudes
    phases = np.exp(1j * config.phase_grid)[:, None]
    amps = (a[None, :] + phases * b[None, :]) / np.sqrt(2)
    return np.sum(np.abs(amps) ** 2, axis=1)


def distinguishability(config: TwoPathConfig) -> float:
    """Best which-path bias ``1 - 2 P_err`` from a Helstrom measurement on the markers.

    The path weights act as priors, so unequal amplitudes are handled too.
    """
    wa, wb = abs(config.amp_a) ** 2, abs(config.amp_b) ** 2
    if min(wa, wb) == 0.0:
        return 1.0
    report = helstrom(StateEnsemble((config.marker_a, config.marker_b), (wa, wb)))
    return float(np.clip(1.0 - 2.0 * report.p_error, 0.0, 1.0))


def fringe_pattern(config: TwoPathConfig) -> FringeReport:
    """Detection probability versus phase behind a 50/50 recombination.

    ``P(phi) = (|a|^2 + |b|^2 + 2 Re(e^{i phi} a* b <A|B>)) / 2``; visibility
    is measured on the phase grid.
    """
    probs = np.clip(_fringe_probabilities(config), 0.0, 1.0)
    return FringeReport(config.phase_grid, probs, visibility(probs), distinguishability(config))


@dataclass(frozen=True)
class DualityReport:
    distinguishability: float
    visibility: float
    slack: float


def duality_report(config: TwoPathConfig) -> DualityReport:
    """Distinguishability ``D``, visibility ``V``, and ``1 - D^2 - V^2``."""
    fr = fringe_pattern(config)
    d, v = fr.distinguishability, fr.visibility
    return DualityReport(d, v, 1.0 - d * d - v * v)


@dataclass(frozen=True, eq=False)
class EraserReport:
    phases: np.ndarray
    pattern_d1: np.ndarray
    pattern_d2: np.ndarray
    p_select: tuple[float, float]
    unconditioned: np.ndarray
    visibility_d1: float
    visibility_d2: float
    idler_overlap_after_splitter: complex


def eraser_postselect(phase_grid: Sequence[float] | None = None) -> EraserReport:
    """Entangled signal/idler pair with the idler sent through a 50/50 eraser splitter.

    The source emits ``(|s1>|i1> + e^{i phi}|s2>|i2>)/sqrt(2)``. The idler
    detectors ``d1``, ``d2`` register the columns of the balanced splitter,
    ``|d1> = (|i1> + i|i2>)/sqrt(2)`` and ``|d2> = (i|i1> + |i2>)/sqrt(2)``.
    Signal patterns are probabilities that the signal detector
    ``(|s1> + |s2>)/sqrt(2)`` fires, conditioned on each idler result.
    """
    phases = default_phase_grid() if phase_grid is None else np.asarray(phase_grid, dtype=float)
    if phases.size < MIN_PHASE_SAMPLES:
        raise QMeasError(f"need at least {MIN_PHASE_SAMPLES} phase samples")
    bs = beamsplitter(1 / np.sqrt(2))
    idler_basis = [bs[:, 0], bs[:, 1]]
    signal_det = np.array([1.0, 1.0]) / np.sqrt(2)
    s1, s2 = la.basis_ket(2, 0), la.basis_ket(2, 1)
    i1, i2 = la.basis_ket(2, 0), la.basis_ket(2, 1)

    patterns = [np.empty(phases.size) for _ in idler_basis]
    selects = [np.empty(phases.size) for _ in idler_basis]
    unconditioned = np.empty(phases.size)
    for n, phi in enumerate(phases):
        psi = (np.kron(s1, i1) + np.exp(1j * phi) * np.kron(s2, i2)) / np.sqrt(2)
        joint = psi.reshape(2, 2)  # joint[signal, idler]
        unconditioned[n] = np.sum(np.abs(signal_det.conj() @ joint) ** 2)
        for k, d in enumerate(idler_basis):
            signal = joint @ d.conj()
            p_sel = float(np.vdot(signal, signal).real)
            selects[k][n] = p_sel
            patterns[k][n] = abs(np.vdot(signal_det, signal)) ** 2 / p_sel
    return EraserReport(
        phases=phases,
        pattern_d1=patterns[0],
        pattern_d2=patterns[1],
        p_select=(float(np.mean(selects[0])), float(np.mean(selects[1]))),
        unconditioned=unconditioned,
        visibility_d1=visibility(patterns[0]),
        visibility_d2=visibility(patterns[1]),
        idler_overlap_after_splitter=complex(np.vdot(bs @ i1, bs @ i2)),
    )


IFM_OUTCOMES = ("C", "D", "boom")


@dataclass(frozen=True)
class MachZehnder:
    """Two beamsplitters (amplitude transmissions) and what sits in arm 1."""

    bs1_transmission: float = float(np.sqrt(0.5))
    bs2_transmission: float = float(np.sqrt(0.5))
    obj: str = "none"

    def __post_init__(self):
        beamsplitter(self.bs1_transmission)
        beamsplitter(self.bs2_transmission)
        if self.obj not in ("none", "absorber"):
            raise QMeasError(f"object must be 'none' or 'absorber', got {self.obj!r}")

    def outcome_probabilities(self) -> dict[str, float]:
        """Probabilities of ``C``, ``D``, and ``boom`` (absorption in arm 1)."""
        arms = beamsplitter(self.bs1_transmission) @ np.array([1.0, 0.0])
        boom = 0.0
        if self.obj == "absorber":
            boom = float(abs(arms[1]) ** 2)
            arms = np.array([arms[0], 0.0])
        out = beamsplitter(self.bs2_transmission) @ arms
        return {"C": float(abs(out[1]) ** 2), "D": float(abs(out[0]) ** 2), "boom": boom}


def _with_bomb(mz: MachZehnder, bomb: str) -> MachZehnder:
    if bomb not in ("working", "defective"):
        raise QMeasError(f"bomb must be 'working' or 'defective', got {bomb!r}")
    return replace(mz, obj="absorber" if bomb == "working" else "none")


def ifm_single_pass(mz: MachZehnder, bomb: str) -> DiscreteBelief:
    """Outcome distribution over ``C``, ``D``, ``boom`` for one photon.

    A working bomb is a perfect absorber in arm 1; a defective one lets the
    photon through untouched.
    """
    probs = _with_bomb(mz, bomb).outcome_probabilities()
    total = sum(probs.values())
    return DiscreteBelief(IFM_OUTCOMES, tuple(probs[k] / total for k in IFM_OUTCOMES))


def ifm_conclusive_fraction(mz: MachZehnder) -> float:
    """For a working bomb, ``P(D) / (P(D) + P(boom))``: the share certified without exploding."""
    p = _with_bomb(mz, "working").outcome_probabilities()
    return p["D"] / (p["D"] + p["boom"])


@dataclass(frozen=True)
class IFMRun:
    outcome: str  # "certified_working", "exploded", or "max_iterations"
    photons: int


def ifm_repeat_until_conclusive(
    mz: MachZehnder, bomb: str, rng: np.random.Generator, max_iterations: int = 10_000
) -> IFMRun:
    """Send photons until ``D`` fires or the bomb explodes; ``C`` means try again."""
    single = ifm_single_pass(mz, bomb)
    probs = np.array(single.probs, dtype=float)
    for photons in range(1, max_iterations + 1):
        label = IFM_OUTCOMES[int(sample_outcome_indices(probs, rng, 1)[0])]
        if label == "D":
            return IFMRun("certified_working", photons)
        if label == "boom":
            return IFMRun("exploded", photons)
    return IFMRun("max_iterations", max_iterations)


@dataclass(frozen=True)
class IFMStatistics:
    certified: int
    exploded: int
    inconclusive: int

    @property
    def trials(self) -> int:
        return self.certified + self.exploded + self.inconclusive


def ifm_monte_carlo(
    mz: MachZehnder, bomb: str, rng: np.random.Generator, trials: int, max_iterations: int = 10_000
) -> IFMStatistics:
    """Many independent repeat-until-conclusive runs, advanced one photon at a time in lockstep."""
    probs = np.array(ifm_single_pass(mz, bomb).probs, dtype=float)
    active = trials
    certified = exploded = 0
    for _ in range(max_iterations):
        if active == 0:
            break
        draws = sample_outcome_indices(probs, rng, active)
        certified += int(np.sum(draws == 1))
        exploded += int(np.sum(draws == 2))
        active = int(np.sum(draws == 0))
    return IFMStatistics(certified, exploded, active)


def ifm_defective_posterior(
    n_c_clicks: int,
    prior_defective=Fraction(1, 2),
    p_c_working=Fraction(1, 2),
    p_c_defective=Fraction(1),
) -> DiscreteBelief:
    """Belief over ``("working", "defective")`` after ``n`` photons all reached ``C``.

    The default likelihoods are those of a balanced interferometer for
    photons that were not absorbed: a surviving photon reaches ``C`` with
    probability 1/2 if the bomb works and 1 if it is defective. Each ``C``
    click therefore doubles the odds of a defective bomb. Use
    :func:`ifm_c_likelihoods` for likelihoods of another interferometer.
    """
    if n_c_clicks < 0:
        raise QMeasError("n_c_clicks must be non-negative")
    prior = DiscreteBelief(("working", "defective"), (1 - prior_defective, prior_defective))
    return sequential_update(prior, [(p_c_working, p_c_defective)] * n_c_clicks)


def ifm_c_likelihoods(mz: MachZehnder, condition_on_survival: bool = True) -> tuple[float, float]:
    """``P(C | working)`` and ``P(C | defective)``, optionally given that no absorption occurred."""
    working = _with_bomb(mz, "working").outcome_probabilities()
    defective = _with_bomb(mz, "defective").outcome_probabilities()
    p_w = working["C"] / (1.0 - working["boom"]) if condition_on_survival else working["C"]
    return p_w, defective["C"]


@dataclass(frozen=True)
class SplitterSearch:
    best_efficiency: float
    best_t1_sq: float
    best_t2_sq: float
    candidates: int


def ifm_variable_splitter_search(points: int = 200, dark_tol: float = 1e-12) -> SplitterSearch:
    """Grid search over intensity transmissions ``(t1^2, t2^2)`` in (0, 1)^2.

    Only configurations where ``D`` stays dark for a defective bomb count as
    interaction-free measurements; among those, maximize the working-bomb
    conclusive fraction ``P(D)/(P(D) + P(boom))``.
    """
    xs = np.arange(1, points + 1) / (points + 1)
    best = (-1.0, np.nan, np.nan)
    candidates = 0
    for x1 in xs:
        for x2 in xs:
            mz = MachZehnder(float(np.sqrt(x1)), float(np.sqrt(x2)))
            if _with_bomb(mz, "defective").outcome_probabilities()["D"] > dark_tol:
                continue
            candidates += 1
            eff = ifm_conclusive_fraction(mz)
            if eff > best[0]:
                best = (eff, float(x1), float(x2))
    return SplitterSearch(best[0], best[1], best[2], candidates)


@dataclass(frozen=True)
class ZenoResult:
    p_detect_working: float
    p_explode: float
    p_detect_defective_error: float


def zeno_ifm(n_passes: int) -> ZenoResult:
    """Multi-pass interrogation: rotate by ``pi/(2n)`` then let the bomb absorb, ``n`` times.

    The photon is a qubit ``(|H>, |V>)``; each pass rotates it towards ``|V>``,
    the arm probed by the bomb. A working bomb absorbs the ``|V>`` amplitude
    every pass, so the photon survives in ``|H>`` with probability
    ``cos^{2n}(pi/2n)``. Without a bomb the rotations add up to ``|V>``, and
    ``p_detect_defective_error`` is the chance of still finding ``|H>``.
    """
    if n_passes < 1:
        raise QMeasError(f"n_passes must be >= 1, got {n_passes}")
    theta = np.pi / (2 * n_passes)
    rot = np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]])
    working = np.array([1.0, 0.0])
    defective = np.array([1.0, 0.0])
    exploded = 0.0
    for _ in range(n_passes):
        working = rot @ working
        exploded += working[1] ** 2
        working = np.array([working[0], 0.0])
        defective = rot @ defective
    return ZenoResult(float(working[0] ** 2), float(exploded), float(defective[0] ** 2))


HARDY_LABELS = ("O+O-", "O+I-", "I+O-", "I+I-", "boom")
_O, _I = la.basis_ket(2, 0), la.basis_ket(2, 1)


@dataclass(frozen=True, eq=False)
class HardyState:
    """Positron/electron path amplitudes plus the annihilation channel.

    Basis order is :data:`HARDY_LABELS`: the four ``kron(positron, electron)``
    path states with ``O = 0``, ``I = 1``, then ``boom``.
    """

    amplitudes: np.ndarray
    labels: tuple[str, ...] = HARDY_LABELS

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (5,):
            raise QMeasError("Hardy state needs 5 amplitudes")
        if abs(np.vdot(amps, amps).real - 1) > 1e-10:
            raise QMeasError("Hardy state is not normalized")
        object.__setattr__(self, "amplitudes", amps)

    def amplitude(self, label: str) -> complex:
        return complex(self.amplitudes[self.labels.index(label)])

    def pure_state(self) -> PureState:
        return PureState(self.amplitudes)


def hardy_initial_state() -> HardyState:
    """Each particle split evenly over its inner and outer arm: ``(O+ + I+)(O- + I-)/2``."""
    return HardyState(np.append(np.kron(_O + _I, _O + _I) / 2, 0.0))


def hardy_interaction() -> np.ndarray:
    """Unitary that sends ``|I+I->`` (both in the overlap region) to ``|boom>`` and back."""
    u = np.eye(5, dtype=complex)
    u[[3, 4]] = u[[4, 3]]
    return u


def hardy_evolution() -> HardyState:
    return HardyState(hardy_interaction() @ hardy_initial_state().amplitudes)


def hardy_port(kind: str) -> np.ndarray:
    """Single-particle output port: ``C = (O + I)/sqrt(2)``, ``D = (O - I)/sqrt(2)``."""
    if kind == "C":
        return (_O + _I) / np.sqrt(2)
    if kind == "D":
        return (_O - _I) / np.sqrt(2)
    raise QMeasError(f"port must be 'C' or 'D', got {kind!r}")


def hardy_joint_ket(positron: str, electron: str) -> np.ndarray:
    """Five-dimensional ket for a joint detection, zero on ``boom``."""
    return np.append(np.kron(hardy_port(positron), hardy_port(electron)), 0.0)


def hardy_detection_probabilities(state: HardyState | None = None) -> dict[str, float]:
    """Joint detector statistics ``"C+C-"``, ``"C+D-"``, ``"D+C-"``, ``"D+D-"``, and ``"boom"``."""
    psi = (state or hardy_evolution()).amplitudes
    out = {}
    for pos in "CD":
        for ele in "CD":
            out[f"{pos}+{ele}-"] = float(abs(np.vdot(hardy_joint_ket(pos, ele), psi)) ** 2)
    out["boom"] = float(abs(psi[4]) ** 2)
    return out


def hardy_conditional_electron(positron_port: str = "D", state: HardyState | None = None) -> PureState:
    """Electron path state (``O-``, ``I-``) given the positron fired ``positron_port``."""
    psi = (state or hardy_evolution()).amplitudes
    paths = psi[:4].reshape(2, 2)  # [positron, electron]
    return PureState.normalized(hardy_port(positron_port).conj() @ paths)
