"""Command-line front end: reproducible experiments and plain-text reports.

Every report is human-readable with a trailing machine-readable block of
``name value`` lines (full precision) for golden-file tests and scripting.
Exit codes: 0 success, 2 validation error, 3 I/O error, 4 insufficient data.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, fields, replace

import numpy as np

from . import bell, protocol, reconcile, tritcrypt, trits
from .linalg import MixedState, ValidationError, diagonal_state, normalize_coefficients

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_IO = 3
EXIT_INSUFFICIENT_DATA = 4


@dataclass
class RunConfig:
    rounds: int = 100_000
    seed: int = 0
    coefficients: tuple = (1.0, 1.0, 1.0)
    visibility: float = 1.0
    background: float = 0.0
    detection: float = 1.0
    key_crosstalk: float = 0.0
    eve: bool = False
    eve_arm: str = "B"
    bias: tuple = (1 / 3, 1 / 3, 1 / 3)


def _parse_bool(s: str) -> bool:
    v = s.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ValidationError(f"expected a boolean, got {s!r}")


def _parse_triple(s: str) -> tuple:
    parts = [p for p in s.replace(",", " ").split() if p]
    if len(parts) != 3:
        raise ValidationError(f"expected 3 comma-separated values, got {s!r}")
    return tuple(float(p) for p in parts)


_CONFIG_PARSERS = {
    "rounds": int,
    "seed": int,
    "coefficients": _parse_triple,
    "visibility": float,
    "background": float,
    "detection": float,
    "key_crosstalk": float,
    "eve": _parse_bool,
    "eve_arm": str,
    "bias": _parse_triple,
}


def load_config_file(path) -> dict:
    """Parse ``key = value`` lines; '#' starts a comment."""
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValidationError(f"{path}:{lineno}: expected 'key = value'")
            key, _, value = line.partition("=")
            key = key.strip()
            if key not in _CONFIG_PARSERS:
                raise ValidationError(f"{path}:{lineno}: unknown config key {key!r}")
            try:
                values[key] = _CONFIG_PARSERS[key](value.strip())
            except ValidationError:
                raise
            except ValueError as exc:
                raise ValidationError(f"{path}:{lineno}: bad value for {key}: {exc}")
    return values


def resolve_config(args) -> RunConfig:
    """Defaults, then profile, then config file, then explicit flags."""
    config = RunConfig()
    if getattr(args, "profile", None) == "reference":
        visibility, crosstalk = protocol.calibrate_noise()
        config = replace(config,
                         coefficients=protocol.REFERENCE_COEFFICIENTS,
                         visibility=visibility,
                         key_crosstalk=crosstalk)
    if getattr(args, "config", None):
        config = replace(config, **load_config_file(args.config))
    overrides = {}
    for f in fields(RunConfig):
        value = getattr(args, f.name, None)
        if value is not None:
            overrides[f.name] = value
    return replace(config, **overrides)


def _source_from(config: RunConfig) -> protocol.SourceConfig:
    return protocol.SourceConfig(
        coefficients=config.coefficients,
        visibility=config.visibility,
        background_fraction=config.background,
        detection_efficiency=config.detection,
        key_crosstalk=config.key_crosstalk,
    )


def _eve_from(config: RunConfig) -> protocol.EveConfig:
    return protocol.EveConfig(enabled=config.eve, arm=config.eve_arm)


def _print_config(config: RunConfig) -> None:
    print("config:")
    for f in fields(RunConfig):
        value = getattr(config, f.name)
        if isinstance(value, tuple):
            value = ", ".join(f"{v:.6g}" for v in value)
        print(f"  {f.name} = {value}")


def _machine_block(pairs) -> None:
    print("-- machine readable --")
    for name, value in pairs:
        if isinstance(value, (bool, np.bool_)):
            value = int(value)
        if isinstance(value, (float, np.floating)):
            value = repr(float(value))
        print(f"{name} {value}")


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_bell(args) -> int:
    config = resolve_config(args)
    _source_from(config)  # range validation with field names
    _print_config(config)
    coeffs, divisor = normalize_coefficients(config.coefficients)
    effective = (1.0 - config.background) * config.visibility
    state = diagonal_state(coeffs)
    mixed = MixedState.isotropic(state, effective) if effective < 1.0 \
        else MixedState.pure(state)
    s3_exact = bell.s3(mixed, bell.canonical_settings()).s3
    result = bell.optimize_s3(mixed, family=args.family,
                              tolerance=args.tolerance, seed=config.seed)
    print()
    print(f"exact S3 at canonical settings  {s3_exact:.4f}")
    print(f"optimized S3 ({args.family} family)   {result.s3:.4f}"
          + ("" if result.converged else "  [not converged]"))
    print(f"classical bound 2.0000, quantum maximum {bell.QUANTUM_MAX:.4f}")
    _machine_block([
        ("s3_exact", s3_exact),
        ("s3_optimized", result.s3),
        ("optimizer_converged", result.converged),
        ("classical_bound", bell.CLASSICAL_BOUND),
        ("quantum_max", bell.QUANTUM_MAX),
        ("normalization_divisor", divisor),
    ])
    return EXIT_OK


def cmd_optimize(args) -> int:
    config = resolve_config(args)
    _source_from(config)  # range validation with field names
    _print_config(config)
    coeffs, _ = normalize_coefficients(config.coefficients)
    effective = (1.0 - config.background) * config.visibility
    state = diagonal_state(coeffs)
    mixed = MixedState.isotropic(state, effective) if effective < 1.0 \
        else MixedState.pure(state)
    result = bell.optimize_s3(mixed, family=args.family,
                              tolerance=args.tolerance, seed=config.seed,
                              restarts=args.restarts)
    print()
    print(f"optimized S3 ({args.family} family)  {result.s3:.4f}"
          + ("" if result.converged else "  [not converged]"))
    _machine_block([
        ("s3_optimized", result.s3),
        ("optimizer_converged", result.converged),
        ("family", result.family),
        ("params", ",".join(repr(p) for p in result.params)),
    ])
    return EXIT_OK


def _report_session(result: protocol.SessionResult) -> None:
    fk, fb, fd = result.sifted_fractions
    print()
    print(f"rounds             {result.n_rounds} ({result.n_detected} detected)")
    print(f"sifted fractions   key {fk:.4f}, bell {fb:.4f}, discarded {fd:.4f}")
    print(f"key length         {len(result.key_a)} trits")
    for line in result.report.lines():
        print(line)


def _session_machine_pairs(result: protocol.SessionResult) -> list:
    fk, fb, fd = result.sifted_fractions
    return [
        ("n_rounds", result.n_rounds),
        ("n_detected", result.n_detected),
        ("fraction_key", fk),
        ("fraction_bell", fb),
        ("fraction_discarded", fd),
        ("s3_estimate", result.s3_estimate),
        ("s3_sigma", result.s3_sigma),
        ("sigmas_above_classical", result.report.sigmas_above_classical),
        ("qter", result.qter),
        ("key_length", len(result.key_a)),
        ("secure", result.secure),
    ]


def cmd_simulate(args) -> int:
    config = resolve_config(args)
    _print_config(config)
    source = _source_from(config)
    eve = _eve_from(config)
    parties = protocol.default_parties(bias_a=config.bias, bias_b=config.bias)
    result = protocol.run_protocol(config.rounds, source=source, eve=eve,
                                   parties=parties, seed=config.seed)
    os.makedirs(args.out, exist_ok=True)
    transcript_path = os.path.join(args.out, "transcript.txt")
    key_a_path = os.path.join(args.out, "key_a.txt")
    key_b_path = os.path.join(args.out, "key_b.txt")
    header = {f.name: getattr(config, f.name) for f in fields(RunConfig)}
    protocol.write_transcript(transcript_path, result.rounds, header=header)
    trits.write_key_file(key_a_path, result.key_a, comments=("sifted key, party A",))
    trits.write_key_file(key_b_path, result.key_b, comments=("sifted key, party B",))
    _report_session(result)
    print(f"transcript         {transcript_path}")
    print(f"key files          {key_a_path}, {key_b_path}")
    _machine_block(_session_machine_pairs(result) + [
        ("transcript", transcript_path),
        ("key_a", key_a_path),
        ("key_b", key_b_path),
    ])
    return EXIT_OK


def cmd_sift(args) -> int:
    rounds, header = protocol.read_transcript(args.transcript)
    sifted = protocol.sift(rounds)
    n = len(rounds)
    if n == 0:
        raise protocol.InsufficientDataError(f"{args.transcript}: no rounds")
    s3_hat, s3_sigma = protocol.estimate_s3(sifted.bell_rounds)
    key_a, key_b = protocol.extract_keys(sifted.key_rounds)
    qter_value = protocol.qter(key_a, key_b)
    report = protocol.security_verdict(s3_hat, s3_sigma, qter_value)
    if header:
        print("transcript header:")
        for key, value in header.items():
            print(f"  {key} = {value}")
    fk = len(sifted.key_rounds) / n
    fb = len(sifted.bell_rounds) / n
    fd = len(sifted.discarded) / n
    print()
    print(f"rounds             {n} ({int(rounds.detected.sum())} detected)")
    print(f"sifted fractions   key {fk:.4f}, bell {fb:.4f}, discarded {fd:.4f}")
    print(f"key length         {len(key_a)} trits")
    for line in report.lines():
        print(line)
    pairs = [
        ("n_rounds", n),
        ("fraction_key", fk),
        ("fraction_bell", fb),
        ("fraction_discarded", fd),
        ("s3_estimate", s3_hat),
        ("s3_sigma", s3_sigma),
        ("sigmas_above_classical", report.sigmas_above_classical),
        ("qter", qter_value),
        ("key_length", len(key_a)),
        ("secure", report.secure),
    ]
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        key_a_path = os.path.join(args.out, "key_a.txt")
        key_b_path = os.path.join(args.out, "key_b.txt")
        trits.write_key_file(key_a_path, key_a, comments=("sifted key, party A",))
        trits.write_key_file(key_b_path, key_b, comments=("sifted key, party B",))
        print(f"key files          {key_a_path}, {key_b_path}")
        pairs += [("key_a", key_a_path), ("key_b", key_b_path)]
    _machine_block(pairs)
    return EXIT_OK


def cmd_reconcile(args) -> int:
    key_a = trits.read_key_file(args.key_a)
    key_b = trits.read_key_file(args.key_b)
    out_a, out_b, report = reconcile.parity_sift(key_a, key_b)
    os.makedirs(args.out, exist_ok=True)
    path_a = os.path.join(args.out, "reconciled_a.txt")
    path_b = os.path.join(args.out, "reconciled_b.txt")
    trits.write_key_file(path_a, out_a, comments=("reconciled key, party A",))
    trits.write_key_file(path_b, out_b, comments=("reconciled key, party B",))
    print(f"input length       {len(key_a)} trits")
    for line in report.lines():
        print(line)
    print(f"output files       {path_a}, {path_b}")
    _machine_block([
        ("input_length", len(key_a)),
        ("kept_blocks", report.kept_blocks),
        ("discarded_blocks", report.discarded_blocks),
        ("output_length", report.output_length),
        ("residual_mismatches", report.residual_mismatches),
        ("dropped_trailing", report.dropped_trailing),
        ("out_a", path_a),
        ("out_b", path_b),
    ])
    return EXIT_OK


def cmd_encrypt(args) -> int:
    key = trits.read_key_file(args.key_file)
    code = tritcrypt.encode(args.text)
    if key.size < code.size:
        raise ValidationError(
            f"key too short: {key.size} trits for a {code.size}-trit message "
            "(one-time pad requires a key at least as long)")
    cipher = tritcrypt.encrypt(code, key[:code.size])
    unused = int(key.size - code.size)
    print(f"cipher             {trits.format_trits(cipher, group=3)}")
    print(f"key trits used     {code.size} ({unused} unused)")
    _machine_block([
        ("cipher", trits.format_trits(cipher)),
        ("used_key_trits", int(code.size)),
        ("unused_key_trits", unused),
    ])
    return EXIT_OK


def cmd_decrypt(args) -> int:
    key = trits.read_key_file(args.key_file)
    cipher = trits.parse_trits(args.cipher)
    if cipher.size % 3 != 0:
        raise ValidationError(f"cipher length {cipher.size} is not a multiple of 3")
    if key.size < cipher.size:
        raise ValidationError(
            f"key too short: {key.size} trits for a {cipher.size}-trit cipher")
    code = tritcrypt.decrypt(cipher, key[:cipher.size])
    text = tritcrypt.decode(code)
    unused = int(key.size - cipher.size)
    print(f"text               {text}")
    print(f"key trits used     {cipher.size} ({unused} unused)")
    _machine_block([
        ("text", text),
        ("used_key_trits", int(cipher.size)),
        ("unused_key_trits", unused),
    ])
    return EXIT_OK


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

def _add_config_flags(parser, with_profile=False):
    parser.add_argument("--config", metavar="PATH",
                        help="config file of 'key = value' lines; flags override")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--coefficients", type=_parse_triple, default=None,
                        metavar="A,B,C", help="source state coefficients")
    parser.add_argument("--visibility", type=float, default=None)
    parser.add_argument("--background", type=float, default=None,
                        help="accidental-coincidence fraction")
    if with_profile:
        parser.add_argument("--rounds", type=int, default=None)
        parser.add_argument("--detection", type=float, default=None,
                            help="per-round coincidence detection probability")
        parser.add_argument("--key-crosstalk", dest="key_crosstalk", type=float,
                            default=None, help="key-setting crosstalk fraction")
        parser.add_argument("--eve", action="store_const", const=True, default=None,
                            help="enable the intercept-resend eavesdropper")
        parser.add_argument("--eve-arm", dest="eve_arm", choices=("A", "B"),
                            default=None)
        parser.add_argument("--bias", type=_parse_triple, default=None,
                            metavar="P1,P2,P3", help="setting-choice probabilities")
        parser.add_argument("--profile", choices=("reference",), default=None,
                            help="preset noise calibration")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qutrit-qkd",
        description="Qutrit entanglement QKD: Bell tests, protocol simulation, "
                    "key reconciliation, and the trinary one-time pad.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bell", help="exact and optimized Bell parameter")
    _add_config_flags(p)
    p.add_argument("--family", choices=("phase", "unitary"), default="phase")
    p.add_argument("--tolerance", type=float, default=1e-6)
    p.set_defaults(func=cmd_bell)

    p = sub.add_parser("optimize", help="optimize measurement settings")
    _add_config_flags(p)
    p.add_argument("--family", choices=("phase", "unitary"), default="phase")
    p.add_argument("--tolerance", type=float, default=1e-6)
    p.add_argument("--restarts", type=int, default=20)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("simulate", help="run a full protocol session")
    _add_config_flags(p, with_profile=True)
    p.add_argument("--out", default="qkd-out", metavar="DIR",
                   help="directory for the transcript and key files")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sift", help="sift and analyze a transcript file")
    p.add_argument("--transcript", required=True, metavar="PATH")
    p.add_argument("--out", default=None, metavar="DIR",
                   help="also write the sifted key files here")
    p.set_defaults(func=cmd_sift)

    p = sub.add_parser("reconcile", help="parity-sift two key files")
    p.add_argument("key_a", metavar="KEY_A")
    p.add_argument("key_b", metavar="KEY_B")
    p.add_argument("--out", default="qkd-out", metavar="DIR")
    p.set_defaults(func=cmd_reconcile)

    p = sub.add_parser("encrypt", help="one-time-pad encrypt a message")
    p.add_argument("text", metavar="TEXT")
    p.add_argument("--key-file", dest="key_file", required=True, metavar="PATH")
    p.set_defaults(func=cmd_encrypt)

    p = sub.add_parser("decrypt", help="one-time-pad decrypt a trit stream")
    p.add_argument("cipher", metavar="TRITS")
    p.add_argument("--key-file", dest="key_file", required=True, metavar="PATH")
    p.set_defaults(func=cmd_decrypt)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except protocol.InsufficientDataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INSUFFICIENT_DATA
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
