"""The six-step direct-communication protocol built on walk recurrence.

Bob prepares photons that have walked a random number of steps; the
receiver finishes each walk to its revival point, where the outcome is the
pre-agreed OAM label unless someone tampered in transit.  Message digits
are cyclic OAM shifts applied by Alice between the two walk segments;
they commute with the walk, so decoding works for every step split.

A protocol run is a deterministic function of (params, eve strategy):
all randomness flows from named substreams of the seed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .noise import NoiseSpec, apply_unitary, noisy_evolve, to_density
from .walk import (
    OamLabelMap,
    WalkConfig,
    initial_state,
    position_distribution,
    step_power,
)


class ProtocolError(ValueError):
    """A step was invoked outside the protocol's contract."""


# --- message codec ------------------------------------------------------------

def digits_per_byte(k: int) -> int:
    """Smallest d with k**d >= 256."""
    if k < 2:
        raise ValueError(f"codec base must be >= 2, got {k}")
    d, span = 1, k
    while span < 256:
        d += 1
        span *= k
    return d


def encode_message_text(text: bytes | str, k: int) -> list[int]:
    """Fixed-width base-k expansion of each byte, most significant digit first."""
    if isinstance(text, str):
        text = text.encode("utf-8")
    width = digits_per_byte(k)
    digits = []
    for byte in text:
        chunk = []
        for _ in range(width):
            chunk.append(byte % k)
            byte //= k
        digits.extend(reversed(chunk))
    return digits


def decode_message_text(digits: list[int], k: int) -> bytes:
    width = digits_per_byte(k)
    if len(digits) % width:
        raise ValueError(f"digit count {len(digits)} is not a multiple of {width}")
    out = bytearray()
    for i in range(0, len(digits), width):
        value = 0
        for d in digits[i:i + width]:
            if not 0 <= d < k:
                raise ValueError(f"digit {d} outside base {k}")
            value = value * k + d
        if value > 255:
            raise ValueError(f"digit group {digits[i:i + width]} exceeds one byte")
        out.append(value)
    return bytes(out)


# --- message operator ---------------------------------------------------------

def message_operator(digit: int, k: int) -> np.ndarray:
    """Identity on the coin tensored with a cyclic position shift by `digit`."""
    if not 0 <= digit < k:
        raise ValueError(f"digit {digit} outside 0..{k - 1}")
    shift = np.zeros((k, k), dtype=complex)
    for x in range(k):
        shift[(x + digit) % k, x] = 1.0
    return np.kron(np.eye(2), shift)


# --- photon bookkeeping --------------------------------------------------------

@dataclass
class PhotonRecord:
    """Per-photon protocol state.  Owned and mutated by a single run."""

    id: int
    ell: int
    t: int
    state: np.ndarray  # pure vector (2k,) or density matrix (2k, 2k)
    role: str | None = None  # security_sample | dummy | message
    encoded_digit: int | None = None

    @property
    def is_density(self) -> bool:
        return self.state.ndim == 2


@dataclass
class Transcript:
    """Ordered audit trail of one protocol run."""

    events: list[tuple] = field(default_factory=list)
    security_pass: bool | None = None
    dummy_pass: bool | None = None
    decoded_digits: list[int] | None = None
    aborted: bool = False

    def log(self, event: str, photon_id=None, role=None, ell=None, t=None, outcome=None):
        self.events.append((event, photon_id, role, ell, t, outcome))

    def to_text(self) -> str:
        """One event per line, tab-separated: event, photon-id, role, ell, t, outcome."""
        lines = []
        for row in self.events:
            lines.append("\t".join("-" if v is None else str(v) for v in row))
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ProtocolParams:
    """Run parameters: photon count n (multiple of 4), walk config with t_r,
    seed, channel noise, odd repetition count, and the message digits."""

    n: int
    config: WalkConfig
    seed: int = 0
    noise: NoiseSpec = NoiseSpec()
    repetitions: int = 1
    message_digits: tuple[int, ...] = ()

    def __post_init__(self):
        if self.n <= 0 or self.n % 4:
            raise ValueError(f"photon count must be a positive multiple of 4, got {self.n}")
        if self.repetitions < 1 or self.repetitions % 2 == 0:
            raise ValueError(f"repetitions must be odd, got {self.repetitions}")
        self.config.require_t_r()
        if len(self.message_digits) > self.n // 2:
            raise ProtocolError(
                f"{len(self.message_digits)} digits exceed capacity n/2 = {self.n // 2}"
            )
        for d in self.message_digits:
            if not 0 <= d < self.config.k:
                raise ValueError(f"digit {d} outside 0..{self.config.k - 1}")


def _walk_segment(state: np.ndarray, config: WalkConfig, noise: NoiseSpec, t: int) -> np.ndarray:
    """Continue a photon's walk for t steps (pure or mixed, per channel noise)."""
    if noise.kind == "none" and state.ndim == 1:
        return step_power(config, t) @ state
    rho = state if state.ndim == 2 else to_density(state)
    return noisy_evolve(config, noise, t, rho=rho)


def _prepare_state(config: WalkConfig, noise: NoiseSpec, position: int, t: int) -> np.ndarray:
    if noise.kind == "none":
        return step_power(config, t) @ initial_state(config, position)
    return noisy_evolve(config, noise, t, position=position)


def draw_step_count(t_r: int, rng: np.random.Generator) -> int:
    """Uniform draw from the allowed step counts {2..t_r}."""
    return int(rng.integers(2, t_r + 1))


def measure_oam(state: np.ndarray, rng: np.random.Generator) -> int:
    """Projective OAM measurement, coin traced out; returns the label."""
    if state.ndim == 2:
        k = state.shape[0] // 2
        probs = (np.diag(state)[:k] + np.diag(state)[k:]).real
    else:
        k = state.shape[0] // 2
        probs = position_distribution(state)
    probs = np.clip(probs, 0.0, None)
    probs = probs / probs.sum()
    x = int(rng.choice(k, p=probs))
    return OamLabelMap(k).position_to_oam(x)


# --- protocol steps ------------------------------------------------------------

def bob_prepare(params: ProtocolParams, rng: np.random.Generator) -> list[PhotonRecord]:
    """Step 1: n photons at pre-agreed labels, each walked a random number of
    steps t_i drawn uniformly from {2..t_r}."""
    config = params.config
    t_r = config.require_t_r()
    lmap = OamLabelMap(config.k)
    labels = lmap.labels()
    photons = []
    for i in range(params.n):
        ell = int(rng.choice(labels))
        t = draw_step_count(t_r, rng)
        state = _prepare_state(config, params.noise, lmap.oam_to_position(ell), t)
        photons.append(PhotonRecord(id=i, ell=ell, t=t, state=state))
    return photons


def alice_security_check(
    photons: list[PhotonRecord],
    sample_indices: list[int],
    disclosed_t: list[int],
    config: WalkConfig,
    noise: NoiseSpec,
    rng: np.random.Generator,
) -> bool:
    """Step 4: finish each sampled photon's walk to t_r and check the label."""
    if len(sample_indices) != len(photons) // 4:
        raise ProtocolError(
            f"security sample must be n/4 = {len(photons) // 4} photons, got {len(sample_indices)}"
        )
    if len(disclosed_t) != len(sample_indices):
        raise ProtocolError("disclosed step counts do not match the sample")
    t_r = config.require_t_r()
    by_id = {p.id: p for p in photons}
    for pid, t_i in zip(sample_indices, disclosed_t):
        photon = by_id[pid]
        photon.role = "security_sample"
        final = _walk_segment(photon.state, config, noise, t_r - t_i)
        if measure_oam(final, rng) != photon.ell:
            return False
    return True


def alice_encode(
    photons: list[PhotonRecord],
    digits: tuple[int, ...],
    config: WalkConfig,
    rng: np.random.Generator,
) -> tuple[list[int], list[int]]:
    """Step 5: encode digits into a random half of the remaining photons via
    cyclic OAM shifts; the untouched quarter become dummies."""
    n = 4 * len(photons) // 3
    capacity = n // 2
    if len(digits) > capacity:
        raise ProtocolError(f"{len(digits)} digits exceed capacity {capacity}")
    chosen = sorted(int(i) for i in rng.choice(len(photons), size=capacity, replace=False))
    message_ids, dummy_ids = [], []
    it = iter(digits)
    for idx, photon in enumerate(photons):
        if idx in chosen:
            photon.role = "message"
            digit = next(it, 0)  # unused capacity carries the identity shift
            photon.encoded_digit = digit
            op = message_operator(digit, config.k)
            if photon.is_density:
                photon.state = apply_unitary(photon.state, op)
            else:
                photon.state = op @ photon.state
            message_ids.append(photon.id)
        else:
            photon.role = "dummy"
            dummy_ids.append(photon.id)
    return message_ids, dummy_ids


def bob_decode(
    photons: list[PhotonRecord],
    dummy_ids: list[int],
    config: WalkConfig,
    noise: NoiseSpec,
    rng: np.random.Generator,
) -> tuple[list[int], bool]:
    """Step 6: finish every walk to t_r, measure, read digits off the message
    photons and check that every dummy recurred to its pre-agreed label."""
    t_r = config.require_t_r()
    lmap = OamLabelMap(config.k)
    dummy_set = set(dummy_ids)
    digits = []
    dummy_pass = True
    for photon in sorted(photons, key=lambda p: p.id):
        final = _walk_segment(photon.state, config, noise, t_r - photon.t)
        ell_out = measure_oam(final, rng)
        if photon.id in dummy_set:
            if ell_out != photon.ell:
                dummy_pass = False
        else:
            shift = (lmap.oam_to_position(ell_out) - lmap.oam_to_position(photon.ell)) % config.k
            digits.append(shift)
    return digits, dummy_pass


def majority_vote(digit_sequences: list[list[int]]) -> list[int]:
    """Per-position plurality over an odd number of equal-length sequences,
    ties broken toward the lowest digit."""
    if not digit_sequences or len(digit_sequences) % 2 == 0:
        raise ValueError("majority voting needs an odd number of sequences")
    length = len(digit_sequences[0])
    for seq in digit_sequences:
        if len(seq) != length:
            raise ValueError("sequences have mismatched lengths")
    voted = []
    for pos in range(length):
        counts: dict[int, int] = {}
        for seq in digit_sequences:
            counts[seq[pos]] = counts.get(seq[pos], 0) + 1
        best = max(counts.items(), key=lambda kv: (kv[1], -kv[0]))
        voted.append(best[0])
    return voted


def _rng_streams(seed: int, names: tuple[str, ...]) -> dict[str, np.random.Generator]:
    children = np.random.SeedSequence(seed).spawn(len(names))
    return {name: np.random.default_rng(child) for name, child in zip(names, children)}


_STREAMS = ("prepare", "sample", "alice_measure", "encode", "bob_measure", "eve")


def run_protocol(params: ProtocolParams, eve=None) -> Transcript:
    """Execute one full run.  `eve` may expose on_bob_to_alice(photons,
    config, noise, rng) and/or on_alice_to_bob(photons, config, noise, rng)
    hooks mutating the in-transit photons.  Abort on a failed security
    check is a normal verdict, not an error."""
    config = params.config
    t_r = config.require_t_r()
    rngs = _rng_streams(params.seed, _STREAMS)
    transcript = Transcript()

    # step 1: preparation
    photons = bob_prepare(params, rngs["prepare"])
    for p in photons:
        transcript.log("prepare", p.id, None, p.ell, p.t)

    # step 2: transmission to Alice (Eve may intercept here)
    if eve is not None and hasattr(eve, "on_bob_to_alice"):
        eve.on_bob_to_alice(photons, config, params.noise, rngs["eve"])
    for p in photons:
        transcript.log("send", p.id, None, None, None, "to_alice")

    # steps 2-3: Alice samples n/4 photons, Bob discloses their step counts
    sample = sorted(int(i) for i in rngs["sample"].choice(params.n, size=params.n // 4, replace=False))
    by_id = {p.id: p for p in photons}
    disclosed = [by_id[i].t for i in sample]
    for pid, t in zip(sample, disclosed):
        transcript.log("sample-request", pid, None, None, t)

    # step 4: security check; abort ends the run
    ok = alice_security_check(photons, sample, disclosed, config, params.noise, rngs["alice_measure"])
    transcript.security_pass = ok
    transcript.log("security-verdict", None, None, None, None, "pass" if ok else "abort")
    if not ok:
        transcript.aborted = True
        return transcript

    # step 5: encoding on the surviving 3n/4 photons
    remaining = [p for p in photons if p.role != "security_sample"]
    message_ids, dummy_ids = alice_encode(remaining, params.message_digits, config, rngs["encode"])
    for p in remaining:
        if p.role == "message":
            transcript.log("encode", p.id, p.role, p.ell, p.t, p.encoded_digit)

    # step 6: transmission back to Bob (Eve may tamper here), then decoding
    if eve is not None and hasattr(eve, "on_alice_to_bob"):
        eve.on_alice_to_bob(remaining, config, params.noise, rngs["eve"])
    for p in remaining:
        transcript.log("send", p.id, p.role, None, None, "to_bob")

    digits, dummy_pass = bob_decode(remaining, dummy_ids, config, params.noise, rngs["bob_measure"])
    for p in sorted(remaining, key=lambda q: q.id):
        transcript.log("decode", p.id, p.role, p.ell, p.t)
    transcript.dummy_pass = dummy_pass
    transcript.log("dummy-check-verdict", None, None, None, None, "pass" if dummy_pass else "fail")
    transcript.decoded_digits = digits[: len(params.message_digits)]
    return transcript


def run_with_repetitions(params: ProtocolParams, eve=None, max_attempts: int = 50) -> list[int] | None:
    """Repeat the protocol params.repetitions times (restarting aborted runs
    with fresh seeds) and majority-vote the decoded digits."""
    sequences = []
    attempt = 0
    while len(sequences) < params.repetitions:
        if attempt >= max_attempts:
            return None
        run_params = ProtocolParams(
            n=params.n, config=params.config, seed=params.seed + attempt,
            noise=params.noise, repetitions=1, message_digits=params.message_digits,
        )
        transcript = run_protocol(run_params, eve)
        attempt += 1
        if not transcript.aborted:
            sequences.append(transcript.decoded_digits)
    return majority_vote(sequences)
