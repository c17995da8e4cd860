"""Eavesdropper strategies, closed-form security quantities, and Monte Carlo
cross-validation of both.

Two attack surfaces are modeled.  Intercept-resend on the Bob-to-Alice leg:
Eve guesses each photon's step count, finishes the walk, measures, and
forwards a fresh photon prepared from her outcome.  Subset tampering on the
Alice-to-Bob leg: Eve applies a random nonzero OAM shift to x of the 3N
post-encoding photons, betting that none of them is a dummy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .noise import NoiseSpec, apply_unitary, noisy_evolve
from .protocol import (
    PhotonRecord,
    ProtocolParams,
    _prepare_state,
    _walk_segment,
    draw_step_count,
    measure_oam,
    message_operator,
)
from .walk import OamLabelMap, WalkConfig, evolve, initial_state, position_distribution


# --- intercept-resend ----------------------------------------------------------

def intercept_resend_eve(
    photon: PhotonRecord,
    config: WalkConfig,
    noise: NoiseSpec,
    rng: np.random.Generator,
) -> PhotonRecord:
    """Replace an in-transit photon with Eve's reconstruction.

    Eve guesses the step count uniformly on {2..t_r}, walks the intercepted
    state the remaining steps, measures its OAM, then prepares a fresh
    photon at the measured label walked her guessed number of steps.
    """
    t_r = config.require_t_r()
    lmap = OamLabelMap(config.k)
    t_guess = draw_step_count(t_r, rng)
    finished = _walk_segment(photon.state, config, noise, t_r - t_guess)
    ell_measured = measure_oam(finished, rng)
    photon.state = _prepare_state(config, noise, lmap.oam_to_position(ell_measured), t_guess)
    return photon


def analytic_detection_probability(config: WalkConfig) -> float:
    """Exact per-photon probability that an intercept-resent photon passes the
    receiver's recurrence check (noiseless channel).

    Enumerates Bob's true step count, Eve's guess, her measurement outcome,
    and the final measurement of her fresh photon; translation covariance
    reduces everything to the walk's single-trajectory distributions.
    """
    t_r = config.require_t_r()
    k = config.k
    u_steps = 2 * t_r
    state = initial_state(config, 0)
    q = np.empty((u_steps + 1, k))
    q[0] = position_distribution(state)
    for t in range(1, u_steps + 1):
        state = evolve(state, config, 1)
        q[t] = position_distribution(state)
    total = 0.0
    for t_true in range(2, t_r + 1):
        for t_guess in range(2, t_r + 1):
            # Eve measures displacement x with prob q[t_true + t_r - t_guess];
            # her fresh photon then needs displacement -x over the remaining walk.
            q_eve = q[t_true + t_r - t_guess]
            q_back = q[t_guess + t_r - t_true]
            total += sum(q_eve[x] * q_back[(-x) % k] for x in range(k))
    return total / (t_r - 1) ** 2


# --- closed forms ----------------------------------------------------------------

def _log_binom(n: int, r: int) -> float:
    return math.lgamma(n + 1) - math.lgamma(r + 1) - math.lgamma(n - r + 1)


def decrypt_log10_probability(n_quarter: int, t_r: int) -> float:
    """log10 of the probability that Eve guesses both the message subset and
    every message photon's step count."""
    if n_quarter < 1:
        raise ValueError(f"N must be >= 1, got {n_quarter}")
    if t_r < 2:
        raise ValueError(f"t_r must be >= 2, got {t_r}")
    log_p = -(_log_binom(3 * n_quarter, 2 * n_quarter) + 2 * n_quarter * math.log(t_r - 1))
    return log_p / math.log(10)


def decrypt_probability(n_quarter: int, t_r: int) -> float:
    """1 / (C(3N, 2N) (t_r - 1)^(2N)) as the correctly rounded float of the
    exact rational; underflows gracefully to 0.0 below the float range
    (decrypt_log10_probability stays finite there)."""
    if n_quarter < 1:
        raise ValueError(f"N must be >= 1, got {n_quarter}")
    if t_r < 2:
        raise ValueError(f"t_r must be >= 2, got {t_r}")
    denom = math.comb(3 * n_quarter, 2 * n_quarter) * (t_r - 1) ** (2 * n_quarter)
    return float(Fraction(1, denom))


def dummy_hit_distribution(x: int, n_quarter: int) -> np.ndarray:
    """P(y | x): probability that y of Eve's x tampered photons are dummies,
    among N dummies and 2N message photons.  Indexed by y = 0..x."""
    n = n_quarter
    if not 0 <= x <= 3 * n:
        raise ValueError(f"x must lie in 0..{3 * n}, got {x}")
    log_denom = _log_binom(3 * n, x)
    probs = np.zeros(x + 1)
    for y in range(max(0, x - 2 * n), min(n, x) + 1):
        probs[y] = math.exp(_log_binom(n, y) + _log_binom(2 * n, x - y) - log_denom)
    return probs


def detection_probability_noiseless(x: int, n_quarter: int) -> float:
    """Probability at least one tampered photon is a dummy: 1 - C(2N,x)/C(3N,x)."""
    n = n_quarter
    if x > 2 * n:
        return 1.0
    return 1.0 - math.exp(_log_binom(2 * n, x) - _log_binom(3 * n, x))


# --- strategy object plugged into run_protocol -----------------------------------

@dataclass
class EveStrategy:
    """kind 'intercept_resend_all': rebuild every Bob-to-Alice photon.
    kind 'tamper_subset': apply a random nonzero OAM shift to x of the
    post-encoding photons on their way back to Bob."""

    kind: str
    x: int = 0
    tampered_ids: list[int] = field(default_factory=list)

    def __post_init__(self):
        if self.kind not in ("intercept_resend_all", "tamper_subset"):
            raise ValueError(f"unknown strategy {self.kind!r}")

    def on_bob_to_alice(self, photons, config, noise, rng):
        if self.kind != "intercept_resend_all":
            return
        for photon in photons:
            intercept_resend_eve(photon, config, noise, rng)

    def on_alice_to_bob(self, photons, config, noise, rng):
        if self.kind != "tamper_subset":
            return
        if self.x > len(photons):
            raise ValueError(f"cannot tamper {self.x} of {len(photons)} photons")
        picked = rng.choice(len(photons), size=self.x, replace=False)
        self.tampered_ids = sorted(int(photons[i].id) for i in picked)
        for i in picked:
            shift = int(rng.integers(1, config.k))
            op = message_operator(shift, config.k)
            photon = photons[i]
            if photon.is_density:
                photon.state = apply_unitary(photon.state, op)
            else:
                photon.state = op @ photon.state


# --- Monte Carlo for the subset attack --------------------------------------------

@dataclass
class AttackReport:
    """Aggregated Monte Carlo results for the subset-tampering attack.

    detection_rate is the fraction of trials with at least one failed dummy;
    under channel noise that includes the noise baseline, so
    mean_dummy_failures is the statistic to compare against the noise-only
    expectation when judging whether the tampering is attributable.
    """

    trials: int
    x: int
    n_quarter: int
    detection_rate: float
    detection_se: float
    mean_dummy_failures: float
    y_counts: np.ndarray            # histogram of dummy hits per trial
    altered_counts: np.ndarray      # histogram of altered message digits per trial
    altered_undetected_counts: np.ndarray  # same, over trials with a clean dummy check
    analytic_detection: float       # noiseless closed form
    analytic_y: np.ndarray          # hypergeometric law

    def to_text(self) -> str:
        """Tab-separated report, one record per line (same convention as
        protocol transcripts)."""
        lines = [
            f"trials\t{self.trials}",
            f"x\t{self.x}",
            f"N\t{self.n_quarter}",
            f"detection-rate\t{self.detection_rate:.12g}\t{self.detection_se:.12g}",
            f"mean-dummy-failures\t{self.mean_dummy_failures:.12g}",
            f"analytic-detection-noiseless\t{self.analytic_detection:.12g}",
        ]
        for y, (count, p) in enumerate(zip(self.y_counts, self.analytic_y)):
            lines.append(f"dummy-hits\t{y}\t{int(count)}\t{p:.12g}")
        for count, freq in enumerate(self.altered_counts):
            if freq:
                lines.append(f"altered-digits\t{count}\t{int(freq)}")
        for count, freq in enumerate(self.altered_undetected_counts):
            if freq and count:
                lines.append(f"altered-digits-undetected\t{count}\t{int(freq)}")
        return "\n".join(lines) + "\n"


def displacement_distribution(config: WalkConfig, noise: NoiseSpec) -> np.ndarray:
    """Distribution of the decode displacement (measured minus intended
    position, mod k) for one photon carried through a full revival period
    under the channel noise.  Index 0 is the no-error outcome.

    Valid for any step split and any encoded digit because the encoding
    shift commutes with both the step unitary and the coin-local channels.
    """
    t_r = config.require_t_r()
    if noise.kind == "none":
        out = np.zeros(config.k)
        out[0] = 1.0
        return out
    rho = noisy_evolve(config, noise, t_r, position=0)
    k = config.k
    return (np.diag(rho)[:k] + np.diag(rho)[k:]).real


def optimal_attack_simulation(
    params: ProtocolParams,
    x: int,
    trials: int,
    rng: np.random.Generator,
) -> AttackReport:
    """Monte Carlo over protocol runs in which Eve shifts x random
    post-encoding photons.

    Per-photon decode outcomes are sampled from the exact displacement
    distribution (see displacement_distribution), which reproduces full
    state-level runs while supporting large trial counts.  Detection
    counts only Bob's dummy check; the earlier security phase precedes the
    encoding and is untouched by this strategy.
    """
    n_quarter = params.n // 4
    if not 0 <= x <= 3 * n_quarter:
        raise ValueError(f"x must lie in 0..{3 * n_quarter}, got {x}")
    k = params.config.k
    disp = displacement_distribution(params.config, params.noise)
    p_clean_ok = disp[0]
    # a tampered photon reads correctly only if the noise displacement
    # cancels Eve's uniform nonzero shift
    p_tamper_ok = disp[1:].sum() / (k - 1)

    y = rng.hypergeometric(n_quarter, 2 * n_quarter, x, size=trials) if x else np.zeros(trials, dtype=int)
    clean_dummies = n_quarter - y
    failed_clean = rng.binomial(clean_dummies, 1.0 - p_clean_ok)
    failed_tampered = rng.binomial(y, 1.0 - p_tamper_ok)
    failures = failed_clean + failed_tampered
    detected = failures > 0

    tampered_messages = x - y
    altered = rng.binomial(tampered_messages, 1.0 - p_tamper_ok)
    altered_undetected = np.where(detected, 0, altered)

    detection_rate = float(detected.mean())
    detection_se = math.sqrt(max(detection_rate * (1.0 - detection_rate), 1e-300) / trials)
    return AttackReport(
        trials=trials,
        x=x,
        n_quarter=n_quarter,
        detection_rate=detection_rate,
        detection_se=detection_se,
        mean_dummy_failures=float(failures.mean()),
        y_counts=np.bincount(y, minlength=x + 1),
        altered_counts=np.bincount(altered, minlength=1),
        altered_undetected_counts=np.bincount(altered_undetected, minlength=1),
        analytic_detection=detection_probability_noiseless(x, n_quarter),
        analytic_y=dummy_hit_distribution(x, n_quarter),
    )
