"""Two-party entanglement-based qutrit key distribution, simulated end to end.

The source emits pairs in the form a|00> + b|12> + c|21>.  Each party
switches between three analyzer settings: 1 and 2 probe the Bell
inequality, 3 is the key setting with perfect correlations.  B's Bell
analyzers fold in the 1<->2 relabel so that the sampled statistics match
the canonical phase-basis tables on the Schmidt-diagonal form of the
source state.

Sampling is Monte-Carlo over exact Born-rule outcome tables; an enabled
intercept-resend eavesdropper is applied as an exact post-measurement
ensemble before sampling, never as an outcome heuristic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import bell
from .linalg import (
    DIM,
    MixedState,
    ValidationError,
    computational_basis,
    make_state,
    phase_basis,
    require_orthonormal,
)

# Tolerable noise fraction for secure three-level key distribution
# (an imported security threshold, not derived in this package).
NOISE_BOUND_QUTRIT = 0.225

# Reference experiment statistics used by the calibrated noise profile.
REFERENCE_COEFFICIENTS = (0.642, 0.546, 0.539)
REFERENCE_S3 = 2.688
REFERENCE_QTER = 14.0 / 150.0

_SWAP_12 = np.array([[1, 0, 0], [0, 0, 1], [0, 1, 0]], dtype=float)

# B's key outcome j is recorded as trit REMAP_B[j] so that ideal keys agree.
_KEY_REMAP_B = np.array([0, 2, 1], dtype=np.int8)


class InsufficientDataError(RuntimeError):
    """Not enough sifted data to perform the requested estimate."""


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SourceConfig:
    """Pair source and channel noise model.

    ``visibility`` mixes the pure source state with isotropic noise,
    ``background_fraction`` replaces a round's outcome pair with a uniform
    pair (accidental coincidences), and ``key_crosstalk`` does the same for
    key-setting rounds only, modelling unwanted-channel crosstalk in the
    key analyzers independently of the Bell channels.
    """

    coefficients: tuple = (1.0, 1.0, 1.0)
    visibility: float = 1.0
    background_fraction: float = 0.0
    detection_efficiency: float = 1.0
    key_crosstalk: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.visibility <= 1.0:
            raise ValidationError(f"visibility {self.visibility} outside [0, 1]")
        if not 0.0 <= self.background_fraction <= 1.0:
            raise ValidationError(
                f"background_fraction {self.background_fraction} outside [0, 1]")
        if not 0.0 < self.detection_efficiency <= 1.0:
            raise ValidationError(
                f"detection_efficiency {self.detection_efficiency} outside (0, 1]")
        if not 0.0 <= self.key_crosstalk <= 1.0:
            raise ValidationError(f"key_crosstalk {self.key_crosstalk} outside [0, 1]")
        make_state(self.coefficients)  # validates the coefficient triple


@dataclass(frozen=True)
class PartyConfig:
    """Setting choice distribution and the three analyzer bases (1, 2, key)."""

    setting_probabilities: tuple = (1 / 3, 1 / 3, 1 / 3)
    bases: tuple = ()

    def __post_init__(self):
        p = np.asarray(self.setting_probabilities, dtype=float)
        if p.shape != (3,) or np.any(p < 0) or abs(p.sum() - 1.0) > 1e-12:
            raise ValidationError(
                f"setting probabilities must be 3 non-negative reals summing to 1, got {p}")
        if len(self.bases) != 3:
            raise ValidationError("a party needs exactly 3 measurement bases")
        for basis in self.bases:
            require_orthonormal(basis)

    def basis(self, setting: int) -> np.ndarray:
        return self.bases[setting - 1]


@dataclass(frozen=True)
class EveConfig:
    """Intercept-resend adversary on one arm with a fixed measurement basis."""

    enabled: bool = False
    arm: str = "B"
    basis: np.ndarray | None = None

    def __post_init__(self):
        if self.arm not in ("A", "B"):
            raise ValidationError(f"eve arm must be 'A' or 'B', got {self.arm!r}")
        if self.enabled:
            basis = self.basis if self.basis is not None else computational_basis()
            require_orthonormal(basis)
            object.__setattr__(self, "basis", np.asarray(basis, dtype=complex))


def default_parties(bias_a=None, bias_b=None) -> tuple[PartyConfig, PartyConfig]:
    """Standard analyzer configuration for both observers.

    Bell settings use the canonical phase offsets; B's Bell bases absorb the
    1<->2 relabel of the source form, and both key settings are the
    computational basis (B's key trit is relabeled after measurement).
    """
    a1, a2, b1, b2 = bell.CANONICAL_OFFSETS
    alice = PartyConfig(
        setting_probabilities=tuple(bias_a) if bias_a is not None else (1 / 3, 1 / 3, 1 / 3),
        bases=(phase_basis("A", a1), phase_basis("A", a2), computational_basis()),
    )
    bob = PartyConfig(
        setting_probabilities=tuple(bias_b) if bias_b is not None else (1 / 3, 1 / 3, 1 / 3),
        bases=(
            phase_basis("B", b1) @ _SWAP_12,
            phase_basis("B", b2) @ _SWAP_12,
            computational_basis(),
        ),
    )
    return alice, bob


# ---------------------------------------------------------------------------
# Exact state-level machinery
# ---------------------------------------------------------------------------

def source_mixture(source: SourceConfig) -> MixedState:
    """The emitted two-qutrit ensemble before any eavesdropping."""
    return MixedState.isotropic(make_state(source.coefficients), source.visibility)


def post_eve_mixture(mixed: MixedState, eve: EveConfig) -> MixedState:
    """Exact ensemble after an intercept-resend measurement on one arm.

    Each pure component collapses into at most three product states, one
    per eavesdropper outcome; the isotropic part is invariant.  The result
    is separable on the intercepted cut.
    """
    if not eve.enabled:
        return mixed
    basis = eve.basis
    components = []
    for w, psi in mixed.components:
        for m in range(DIM):
            if eve.arm == "B":
                arm_vec = psi @ basis[m].conj()          # A-side conditional amplitude
            else:
                arm_vec = basis[m].conj() @ psi          # B-side conditional amplitude
            p = float(np.sum(np.abs(arm_vec) ** 2))
            if p <= 1e-15:
                continue
            unit = arm_vec / np.sqrt(p)
            if eve.arm == "B":
                post = np.outer(unit, basis[m])
            else:
                post = np.outer(basis[m], unit)
            components.append((w * p, post))
    return MixedState(components=tuple(components),
                      white_noise_weight=mixed.white_noise_weight)


def _setting_tables(source: SourceConfig, eve: EveConfig,
                    a: PartyConfig, b: PartyConfig) -> dict:
    """Exact outcome tables per setting pair, with outcome-level noise folded in.

    Background replaces any round's outcomes with a uniform pair; key
    crosstalk does the same on the (3, 3) pair only.  Both act at the
    probability level, so folding them into the tables is exact.
    """
    mixed = post_eve_mixture(source_mixture(source), eve)
    uniform = np.full((DIM, DIM), 1.0 / 9.0)
    tables = {}
    for sa in (1, 2, 3):
        for sb in (1, 2, 3):
            t = bell.outcome_distribution(mixed, a.basis(sa), b.basis(sb))
            t = (1.0 - source.background_fraction) * t \
                + source.background_fraction * uniform
            if sa == 3 and sb == 3 and source.key_crosstalk > 0.0:
                t = (1.0 - source.key_crosstalk) * t + source.key_crosstalk * uniform
            tables[(sa, sb)] = t
    return tables


def exact_session_s3(source: SourceConfig, eve: EveConfig = EveConfig(),
                     parties: tuple | None = None) -> float:
    """Exact S3 implied by a session configuration (no sampling)."""
    a, b = parties if parties is not None else default_parties()
    tables = _setting_tables(source, eve, a, b)
    return sum(float((coeff * tables[pair]).sum())
               for pair, coeff in bell.s3_coefficients().items())


def calibrate_noise(coefficients=REFERENCE_COEFFICIENTS,
                    target_s3: float = REFERENCE_S3,
                    target_qter: float = REFERENCE_QTER) -> tuple[float, float]:
    """Solve for (visibility, key_crosstalk) hitting target S3 and QTER.

    S3 scales linearly with visibility at fixed settings; the key error
    rate is 2/3 of the total uniform-noise weight seen by key rounds.
    Raises if the targets are outside the reachable region.
    """
    from .linalg import diagonal_state

    s3_pure = bell.s3(diagonal_state(coefficients), bell.canonical_settings()).s3
    visibility = target_s3 / s3_pure
    if not 0.0 < visibility <= 1.0:
        raise ValidationError(
            f"target S3 {target_s3} unreachable: pure-state value is {s3_pure:.4f}")
    correlated = 1.0 - 1.5 * target_qter       # required (1 - crosstalk) * visibility
    key_crosstalk = 1.0 - correlated / visibility
    if not 0.0 <= key_crosstalk <= 1.0:
        raise ValidationError(
            f"target QTER {target_qter} unreachable at visibility {visibility:.4f}")
    return visibility, key_crosstalk


def reference_source() -> SourceConfig:
    """Source calibrated to the reference experiment's S3 and QTER.

    Detection is 1/9: each probabilistic mode analyzer succeeds with
    probability 1/3, squared for a coincidence.
    """
    visibility, key_crosstalk = calibrate_noise()
    return SourceConfig(
        coefficients=REFERENCE_COEFFICIENTS,
        visibility=visibility,
        key_crosstalk=key_crosstalk,
        detection_efficiency=1.0 / 9.0,
    )


# ---------------------------------------------------------------------------
# Round records and sampling
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RoundRecord:
    round_id: int
    setting_a: int
    outcome_a: int | None
    setting_b: int
    outcome_b: int | None
    detected: bool


@dataclass
class Rounds:
    """Column-oriented store of protocol rounds (-1 marks absent outcomes)."""

    round_id: np.ndarray
    setting_a: np.ndarray
    outcome_a: np.ndarray
    setting_b: np.ndarray
    outcome_b: np.ndarray
    detected: np.ndarray

    def __len__(self) -> int:
        return len(self.round_id)

    def __getitem__(self, i: int) -> RoundRecord:
        det = bool(self.detected[i])
        return RoundRecord(
            round_id=int(self.round_id[i]),
            setting_a=int(self.setting_a[i]),
            outcome_a=int(self.outcome_a[i]) if det else None,
            setting_b=int(self.setting_b[i]),
            outcome_b=int(self.outcome_b[i]) if det else None,
            detected=det,
        )

    def __iter__(self):
        return (self[i] for i in range(len(self)))

    def subset(self, mask: np.ndarray) -> "Rounds":
        return Rounds(*(col[mask] for col in self._columns()))

    def _columns(self):
        return (self.round_id, self.setting_a, self.outcome_a,
                self.setting_b, self.outcome_b, self.detected)

    @classmethod
    def from_records(cls, records) -> "Rounds":
        records = list(records)
        return cls(
            round_id=np.array([r.round_id for r in records], dtype=np.int64),
            setting_a=np.array([r.setting_a for r in records], dtype=np.int8),
            outcome_a=np.array([-1 if r.outcome_a is None else r.outcome_a
                                for r in records], dtype=np.int8),
            setting_b=np.array([r.setting_b for r in records], dtype=np.int8),
            outcome_b=np.array([-1 if r.outcome_b is None else r.outcome_b
                                for r in records], dtype=np.int8),
            detected=np.array([r.detected for r in records], dtype=bool),
        )


def _sample_settings(rng, party: PartyConfig, n: int) -> np.ndarray:
    return rng.choice(np.array([1, 2, 3], dtype=np.int8), size=n,
                      p=np.asarray(party.setting_probabilities, dtype=float))


def sample_round(rng: np.random.Generator, source: SourceConfig, eve: EveConfig,
                 a: PartyConfig, b: PartyConfig, round_id: int = 0,
                 _tables: dict | None = None) -> RoundRecord:
    """Draw one protocol round; deterministic for a fixed generator state.

    Rebuilds the exact outcome tables on every call unless ``_tables`` is
    supplied; use :func:`run_session` for bulk sampling.
    """
    tables = _tables if _tables is not None else _setting_tables(source, eve, a, b)
    sa = int(_sample_settings(rng, a, 1)[0])
    sb = int(_sample_settings(rng, b, 1)[0])
    detected = bool(rng.random() < source.detection_efficiency)
    if not detected:
        return RoundRecord(round_id, sa, None, sb, None, False)
    flat = tables[(sa, sb)].ravel()
    idx = int(np.searchsorted(np.cumsum(flat), rng.random(), side="right"))
    idx = min(idx, 8)
    return RoundRecord(round_id, sa, idx // 3, sb, idx % 3, True)


def run_session(n_rounds: int, source: SourceConfig, eve: EveConfig,
                a: PartyConfig, b: PartyConfig, seed: int) -> Rounds:
    """Generate a full seeded measurement session.

    Vectorized over rounds: settings and detection are drawn per round,
    outcomes are drawn from the exact per-setting-pair tables.  Identical
    seeds and configurations reproduce the session bit for bit.
    """
    if n_rounds <= 0:
        raise ValidationError(f"n_rounds must be positive, got {n_rounds}")
    rng = np.random.default_rng(seed)
    tables = _setting_tables(source, eve, a, b)

    sa = _sample_settings(rng, a, n_rounds)
    sb = _sample_settings(rng, b, n_rounds)
    detected = rng.random(n_rounds) < source.detection_efficiency
    u = rng.random(n_rounds)

    out_a = np.full(n_rounds, -1, dtype=np.int8)
    out_b = np.full(n_rounds, -1, dtype=np.int8)
    for pair, table in tables.items():
        mask = (sa == pair[0]) & (sb == pair[1]) & detected
        if not mask.any():
            continue
        cdf = np.cumsum(table.ravel())
        idx = np.minimum(np.searchsorted(cdf, u[mask], side="right"), 8)
        out_a[mask] = idx // 3
        out_b[mask] = idx % 3

    return Rounds(
        round_id=np.arange(n_rounds, dtype=np.int64),
        setting_a=sa, outcome_a=out_a,
        setting_b=sb, outcome_b=out_b,
        detected=detected,
    )


# ---------------------------------------------------------------------------
# Sifting, estimation, keys
# ---------------------------------------------------------------------------

@dataclass
class SiftResult:
    key_rounds: Rounds
    bell_rounds: Rounds
    discarded: Rounds


def sift(rounds: Rounds) -> SiftResult:
    """Partition detected rounds into key, Bell-test and discarded sets.

    Key rounds have both parties on setting 3; Bell rounds have both on
    settings 1 or 2; mixed pairs are discarded.  Undetected rounds belong
    to none of the three sets.
    """
    det = rounds.detected
    key = det & (rounds.setting_a == 3) & (rounds.setting_b == 3)
    bell_mask = det & (rounds.setting_a <= 2) & (rounds.setting_b <= 2)
    disc = det & ~key & ~bell_mask
    return SiftResult(
        key_rounds=rounds.subset(key),
        bell_rounds=rounds.subset(bell_mask),
        discarded=rounds.subset(disc),
    )


def estimate_s3(bell_rounds: Rounds) -> tuple[float, float]:
    """Empirical S3 and its standard error from sifted Bell rounds.

    Probabilities are per-setting-pair frequencies; the uncertainty treats
    every outcome count as an independent Poisson variable propagated
    through the Bell expression.
    """
    s3_total = 0.0
    variance = 0.0
    for pair, coeff in bell.s3_coefficients().items():
        mask = (bell_rounds.setting_a == pair[0]) & (bell_rounds.setting_b == pair[1])
        n_pair = int(mask.sum())
        if n_pair == 0:
            raise InsufficientDataError(f"no rounds with setting pair {pair}")
        cells = 3 * bell_rounds.outcome_a[mask].astype(np.int64) \
            + bell_rounds.outcome_b[mask]
        counts = np.bincount(cells, minlength=9).reshape(DIM, DIM).astype(float)
        total = counts.sum()
        contribution = float((coeff * counts).sum() / total)
        s3_total += contribution
        variance += float((counts * ((coeff - contribution) / total) ** 2).sum())
    return s3_total, float(np.sqrt(variance))


def extract_keys(key_rounds: Rounds) -> tuple[np.ndarray, np.ndarray]:
    """Trit keys from key rounds; B's outcomes 1 and 2 are exchanged."""
    key_a = key_rounds.outcome_a.astype(np.int8)
    key_b = _KEY_REMAP_B[key_rounds.outcome_b]
    return key_a, key_b


def qter(key_a, key_b) -> float:
    """Fraction of positions where the two trit keys differ."""
    a = np.asarray(key_a)
    b = np.asarray(key_b)
    if a.shape != b.shape:
        raise ValidationError(f"key length mismatch: {a.shape} vs {b.shape}")
    if a.size == 0:
        raise InsufficientDataError("cannot compute a trit error rate on empty keys")
    return float(np.mean(a != b))


@dataclass(frozen=True)
class SecurityReport:
    secure: bool
    s3_estimate: float
    s3_sigma: float
    sigmas_above_classical: float
    qter: float
    noise_bound: float = NOISE_BOUND_QUTRIT

    def lines(self) -> list[str]:
        noise = "below" if self.qter < self.noise_bound else "ABOVE"
        return [
            f"S3 estimate        {self.s3_estimate:.4f} +- {self.s3_sigma:.4f}",
            f"classical bound    2.0000 ({self.sigmas_above_classical:.2f} sigma above)",
            f"QTER               {self.qter:.4f} ({noise} the {self.noise_bound:.3f} noise bound)",
            f"verdict            {'SECURE' if self.secure else 'NOT SECURE'}",
        ]


def security_verdict(s3_estimate: float, s3_sigma: float, qter_value: float) -> SecurityReport:
    """Secure if and only if the estimated S3 exceeds the classical bound 2."""
    margin = s3_estimate - bell.CLASSICAL_BOUND
    if s3_sigma > 0:
        sigmas = margin / s3_sigma
    else:
        sigmas = float(np.inf) if margin > 0 else (float(-np.inf) if margin < 0 else 0.0)
    return SecurityReport(
        secure=s3_estimate > bell.CLASSICAL_BOUND,
        s3_estimate=float(s3_estimate),
        s3_sigma=float(s3_sigma),
        sigmas_above_classical=float(sigmas),
        qter=float(qter_value),
    )


# ---------------------------------------------------------------------------
# Two-party message exchange
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Message:
    sender: str
    kind: str
    payload: object


class ClassicalChannel:
    """Public classical channel; every announcement lands in the transcript."""

    def __init__(self):
        self.messages: list[Message] = []

    def send(self, sender: str, kind: str, payload):
        self.messages.append(Message(sender=sender, kind=kind, payload=payload))
        return payload


class Party:
    """One observer's private measurement data and local computations."""

    def __init__(self, name: str, settings: np.ndarray, outcomes: np.ndarray,
                 detected: np.ndarray):
        self.name = name
        self.settings = settings
        self.outcomes = outcomes
        self.detected = detected

    def announce_settings(self, channel: ClassicalChannel) -> np.ndarray:
        return channel.send(self.name, "settings", self.settings.copy())

    def sift_masks(self, other_settings: np.ndarray):
        det = self.detected
        key = det & (self.settings == 3) & (other_settings == 3)
        bell_mask = det & (self.settings <= 2) & (other_settings <= 2)
        return key, bell_mask

    def announce_bell_outcomes(self, channel: ClassicalChannel,
                               other_settings: np.ndarray) -> np.ndarray:
        _, bell_mask = self.sift_masks(other_settings)
        return channel.send(self.name, "bell-outcomes", self.outcomes[bell_mask].copy())

    def key_trits(self, other_settings: np.ndarray) -> np.ndarray:
        key_mask, _ = self.sift_masks(other_settings)
        trits = self.outcomes[key_mask].astype(np.int8)
        if self.name == "B":
            trits = _KEY_REMAP_B[trits]
        return trits

    def estimate_bell(self, other_settings: np.ndarray,
                      announced_outcomes: np.ndarray) -> tuple[float, float]:
        _, bell_mask = self.sift_masks(other_settings)
        n = int(bell_mask.sum())
        if self.name == "A":
            sa, oa = self.settings[bell_mask], self.outcomes[bell_mask]
            sb, ob = other_settings[bell_mask], announced_outcomes
        else:
            sb, ob = self.settings[bell_mask], self.outcomes[bell_mask]
            sa, oa = other_settings[bell_mask], announced_outcomes
        joined = Rounds(
            round_id=np.arange(n, dtype=np.int64),
            setting_a=sa, outcome_a=oa,
            setting_b=sb, outcome_b=ob,
            detected=np.ones(n, dtype=bool),
        )
        return estimate_s3(joined)


@dataclass
class SessionResult:
    s3_estimate: float
    s3_sigma: float
    qter: float
    sifted_fractions: tuple
    key_a: np.ndarray
    key_b: np.ndarray
    secure: bool
    report: SecurityReport
    transcript: tuple
    n_rounds: int
    n_detected: int
    rounds: "Rounds" = None


def run_protocol(n_rounds: int, source: SourceConfig | None = None,
                 eve: EveConfig | None = None,
                 parties: tuple | None = None, seed: int = 0) -> SessionResult:
    """Full protocol session between two party objects over a logged channel.

    The physics layer produces each side's private data; everything either
    side learns about the other travels through the classical channel
    (setting announcements, B's Bell-round outcomes, the verdict, and B's
    key trits for the simulation-only error-rate comparison), so the
    transcript shows exactly what was made public.
    """
    source = source if source is not None else SourceConfig()
    eve = eve if eve is not None else EveConfig()
    a_cfg, b_cfg = parties if parties is not None else default_parties()

    rounds = run_session(n_rounds, source, eve, a_cfg, b_cfg, seed)
    alice = Party("A", rounds.setting_a, rounds.outcome_a, rounds.detected)
    bob = Party("B", rounds.setting_b, rounds.outcome_b, rounds.detected)
    channel = ClassicalChannel()

    settings_a = alice.announce_settings(channel)
    settings_b = bob.announce_settings(channel)

    announced = bob.announce_bell_outcomes(channel, settings_a)
    s3_hat, s3_sigma = alice.estimate_bell(settings_b, announced)

    key_a = alice.key_trits(settings_b)
    key_b_announced = channel.send("B", "key-comparison-diagnostic",
                                   bob.key_trits(settings_a))
    qter_value = qter(key_a, key_b_announced)

    report = security_verdict(s3_hat, s3_sigma, qter_value)
    channel.send("A", "verdict", {
        "secure": report.secure,
        "s3": s3_hat,
        "sigma": s3_sigma,
        "qter": qter_value,
    })

    sifted = sift(rounds)
    n = len(rounds)
    fractions = (len(sifted.key_rounds) / n, len(sifted.bell_rounds) / n,
                 len(sifted.discarded) / n)
    return SessionResult(
        s3_estimate=s3_hat,
        s3_sigma=s3_sigma,
        qter=qter_value,
        sifted_fractions=fractions,
        key_a=key_a,
        key_b=bob.key_trits(settings_a),
        secure=report.secure,
        report=report,
        transcript=tuple(channel.messages),
        n_rounds=n,
        n_detected=int(rounds.detected.sum()),
        rounds=rounds,
    )


# ---------------------------------------------------------------------------
# Transcript files
# ---------------------------------------------------------------------------

def write_transcript(path, rounds: Rounds, header: dict | None = None) -> None:
    """One round per line: round_id setting_a outcome_a setting_b outcome_b detected.

    Missing outcomes (undetected rounds) are written as '-'.  Header lines
    are '# key = value'.
    """
    with open(path, "w") as fh:
        for key, value in (header or {}).items():
            fh.write(f"# {key} = {value}\n")
        for i in range(len(rounds)):
            det = bool(rounds.detected[i])
            oa = str(rounds.outcome_a[i]) if det else "-"
            ob = str(rounds.outcome_b[i]) if det else "-"
            fh.write(f"{rounds.round_id[i]} {rounds.setting_a[i]} {oa} "
                     f"{rounds.setting_b[i]} {ob} {int(det)}\n")


def read_transcript(path) -> tuple[Rounds, dict]:
    """Parse a transcript file; raises ValidationError with the line number."""
    header = {}
    cols = {name: [] for name in
            ("round_id", "setting_a", "outcome_a", "setting_b", "outcome_b", "detected")}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if "=" in body:
                    key, _, value = body.partition("=")
                    header[key.strip()] = value.strip()
                continue
            parts = line.split()
            if len(parts) != 6:
                raise ValidationError(
                    f"{path}:{lineno}: expected 6 fields, got {len(parts)}")
            try:
                rid, sa, oa, sb, ob, det = parts
                detected = bool(int(det))
                cols["round_id"].append(int(rid))
                cols["setting_a"].append(int(sa))
                cols["setting_b"].append(int(sb))
                cols["outcome_a"].append(-1 if oa == "-" else int(oa))
                cols["outcome_b"].append(-1 if ob == "-" else int(ob))
                cols["detected"].append(detected)
            except ValueError as exc:
                raise ValidationError(f"{path}:{lineno}: {exc}") from exc
    return Rounds(
        round_id=np.array(cols["round_id"], dtype=np.int64),
        setting_a=np.array(cols["setting_a"], dtype=np.int8),
        outcome_a=np.array(cols["outcome_a"], dtype=np.int8),
        setting_b=np.array(cols["setting_b"], dtype=np.int8),
        outcome_b=np.array(cols["outcome_b"], dtype=np.int8),
        detected=np.array(cols["detected"], dtype=bool),
    ), header
