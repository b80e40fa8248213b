"""Command-line front end: capacity reports, simulation, surface data, verification.

Subcommands
-----------
``info``      closed-form branch table and information figures for one channel
``simulate``  seeded Monte Carlo round trips with empirical branch statistics
``surface``   CSV capacity surface of the two-pair 3 x 2 channel
``verify``    brute-force cross-checks; exits 2 when any check fails

Channel parameters come from flags or from a JSON config file (flags win).
Exit codes: 0 success, 1 validation error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from typing import Any, Sequence, TextIO

import numpy as np

from . import analysis, oracle, protocol
from .channel import ChannelSpec, random_channel_spec

_CONFIG_FIELDS = {
    "p", "q", "pairs", "alphas_sq", "alphas", "trials", "seed", "steps",
    "out", "format", "phase_divisor",
}


@dataclass
class RunConfig:
    """Resolved command configuration (file values overridden by flags)."""

    p: int = 3
    q: int = 2
    pairs: int | None = None
    alphas_sq: list[list[float]] | None = None
    alphas: list[list[float]] | None = None
    trials: int = 10000
    seed: int = 0
    steps: int = 50
    out: str | None = None
    format: str = "text"
    phase_divisor: str = "q-r"

    def to_channel_spec(self) -> ChannelSpec:
        if self.alphas_sq is not None and self.alphas is not None:
            raise ValueError("give either squared or raw coefficients, not both")
        if self.alphas_sq is not None:
            return ChannelSpec.from_squared(self.p, self.q, self.alphas_sq, pairs=self.pairs)
        if self.alphas is not None:
            table = np.array(self.alphas, dtype=float)
            if table.ndim == 1:
                table = table[None, :]
            if self.pairs is not None and self.pairs != table.shape[0]:
                raise ValueError(
                    f"pairs={self.pairs} does not match the {table.shape[0]} "
                    "coefficient rows given"
                )
            return ChannelSpec(table.shape[0], self.p, self.q, table)
        return ChannelSpec.maximal(self.pairs or 2, self.p, self.q)


def _parse_coefficient_rows(rows: Sequence[str]) -> list[list[float]]:
    try:
        return [[float(x) for x in row.split(",")] for row in rows]
    except ValueError as exc:
        raise ValueError(f"could not parse coefficient list: {exc}") from None


def _load_config_file(path: str) -> dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as exc:
        raise ValueError(f"cannot read config file: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ValueError(f"config file is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ValueError("config file must hold a JSON object")
    unknown = set(data) - _CONFIG_FIELDS
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    return data


def _resolve_config(args: argparse.Namespace) -> RunConfig:
    values: dict[str, Any] = {}
    if getattr(args, "config", None):
        values.update(_load_config_file(args.config))
    for field in _CONFIG_FIELDS:
        flag_value = getattr(args, field, None)
        if flag_value is not None:
            values[field] = flag_value
    if isinstance(values.get("alphas_sq"), list) and values["alphas_sq"] and \
            isinstance(values["alphas_sq"][0], str):
        values["alphas_sq"] = _parse_coefficient_rows(values["alphas_sq"])
    if isinstance(values.get("alphas"), list) and values["alphas"] and \
            isinstance(values["alphas"][0], str):
        values["alphas"] = _parse_coefficient_rows(values["alphas"])
    return RunConfig(**{k: values[k] for k in values if k in _CONFIG_FIELDS})


def _write_output(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)


def _channel_document(spec: ChannelSpec) -> dict[str, Any]:
    return {
        "pairs": spec.pairs,
        "sender_dim": spec.sender_dim,
        "receiver_dim": spec.receiver_dim,
        "alphas_sq": [[float(x) for x in row] for row in spec.alphas_squared],
    }


def _digits(results: Sequence[int]) -> str:
    return "".join(str(d) for d in results)


def cmd_info(config: RunConfig) -> int:
    spec = config.to_channel_spec()
    rep = analysis.report(spec)
    if config.format == "json":
        doc = {
            "channel": _channel_document(spec),
            "branches": [
                {
                    "results": list(row.results),
                    "probability": row.probability,
                    "message_count": row.message_count,
                    "log2_count": row.log2_count,
                }
                for row in rep.branch_rows
            ],
            "average_information_bits": rep.average_information,
            "classical_cost_bits": rep.classical_cost,
            "maximal_information_bits": rep.maximal_information,
        }
        text = json.dumps(doc, indent=2) + "\n"
    else:
        lines = [
            f"channel: pairs={spec.pairs} sender_dim={spec.sender_dim} "
            f"receiver_dim={spec.receiver_dim}",
            "alphas_sq: " + " ".join(
                "[" + ",".join(repr(float(x)) for x in row) + "]"
                for row in spec.alphas_squared
            ),
            "branch  probability            messages  bits",
        ]
        for row in rep.branch_rows:
            lines.append(
                f"{_digits(row.results):<7} {row.probability!r:<22} "
                f"{row.message_count:<9} {row.log2_count!r}"
            )
        lines.append(f"average_information_bits = {rep.average_information!r}")
        lines.append(f"classical_cost_bits      = {rep.classical_cost!r}")
        lines.append(f"maximal_information_bits = {rep.maximal_information!r}")
        text = "\n".join(lines) + "\n"
    _write_output(text, config.out)
    return 0


def cmd_simulate(config: RunConfig) -> int:
    spec = config.to_channel_spec()
    if config.trials < 1:
        raise ValueError(f"trials must be >= 1, got {config.trials}")
    rng = np.random.default_rng(config.seed)
    closed_form = protocol.branch_probabilities(spec)
    counts = {b.results: 0 for b in closed_form}
    successes = 0
    bits_total = 0.0
    for _ in range(config.trials):
        trace = protocol.run_protocol(spec, "random", rng=rng)
        counts[trace.branch.results] += 1
        successes += int(trace.success)
        bits_total += math.log2(
            analysis.branch_message_count(
                spec.sender_dim, spec.receiver_dim, trace.branch.results
            )
        )
    success_rate = successes / config.trials
    mean_bits = float(bits_total / config.trials)

    if config.format == "json":
        doc = {
            "channel": _channel_document(spec),
            "trials": config.trials,
            "seed": config.seed,
            "success_rate": success_rate,
            "mean_bits_per_trial": mean_bits,
            "average_information_bits": analysis.average_information(spec),
            "branches": [
                {
                    "results": list(b.results),
                    "probability": b.probability,
                    "count": counts[b.results],
                    "frequency": counts[b.results] / config.trials,
                }
                for b in closed_form
            ],
        }
        text = json.dumps(doc, indent=2) + "\n"
    else:
        lines = [
            f"channel: pairs={spec.pairs} sender_dim={spec.sender_dim} "
            f"receiver_dim={spec.receiver_dim}",
            f"trials={config.trials} seed={config.seed}",
            "branch  probability            count   frequency",
        ]
        for b in closed_form:
            freq = counts[b.results] / config.trials
            lines.append(
                f"{_digits(b.results):<7} {b.probability!r:<22} "
                f"{counts[b.results]:<7} {freq!r}"
            )
        lines.append(f"success_rate             = {success_rate!r}")
        lines.append(f"mean_bits_per_trial      = {mean_bits!r}")
        lines.append(
            f"average_information_bits = {analysis.average_information(spec)!r}"
        )
        text = "\n".join(lines) + "\n"
    _write_output(text, config.out)
    return 0


def cmd_surface(config: RunConfig) -> int:
    table = analysis.capacity_surface(config.steps)
    lines = ["alpha01_sq,alpha02_sq,i_ave"]
    for first, second, info in table:
        lines.append(f"{float(first)!r},{float(second)!r},{float(info)!r}")
    _write_output("\n".join(lines) + "\n", config.out)
    return 0


def _graded_spec(pairs: int, sender_dim: int, receiver_dim: int) -> ChannelSpec:
    # squared coefficients proportional to 1, 2, ..., q: ordered and nonzero
    q = receiver_dim
    row = [2.0 * (r + 1) / (q * (q + 1)) for r in range(q)]
    return ChannelSpec.from_squared(sender_dim, receiver_dim, [row] * pairs)


def cmd_verify(config: RunConfig, stream: TextIO | None = None) -> int:
    stream = stream or sys.stdout
    spec = config.to_channel_spec()
    p, q = config.p, config.q
    checks: list[tuple[str, bool, str]] = []

    dims = {(p, q)} | {(pp, qq) for pp in range(3, 6) for qq in range(2, pp)}
    worst = 0.0
    count = 0
    for pp, qq in sorted(dims):
        graded = _graded_spec(1, pp, qq)
        for k in range(graded.pairs):
            entries = protocol.purification_unitary(graded, k).entries
            worst = max(worst, float(np.max(np.abs(
                entries.conj().T @ entries - np.eye(entries.shape[0])))))
            count += 1
        for result in range(qq):
            for shift in range(pp):
                for phase in range(qq - result):
                    entries = protocol.encoding_operator(
                        pp, qq, result, shift, phase).entries
                    worst = max(worst, float(np.max(np.abs(
                        entries.conj().T @ entries - np.eye(pp)))))
                    count += 1
    checks.append((
        "unitarity",
        worst < 1e-12,
        f"max |U†U - I| = {worst:.3e} over {count} operators",
    ))

    if (p, q) == (3, 2):
        first = [
            protocol.encoding_operator(3, 2, 0, shift, phase).entries
            for shift in range(3) for phase in range(2)
        ]
        second = [
            protocol.encoding_operator(3, 2, 1, shift, 0).entries
            for shift in range(3)
        ]
        ok_first = all(
            np.array_equal(got, want)
            for got, want in zip(first, oracle.REFERENCE_ENCODINGS_3X2[0])
        )
        reference_second = {w.tobytes() for w in
                            (m.astype(complex) for m in oracle.REFERENCE_ENCODINGS_3X2[1])}
        ok_second = {m.tobytes() for m in second} == reference_second
        checks.append((
            "reference encodings (3x2)",
            ok_first and ok_second,
            "all nine closed-form matrices reproduced entrywise",
        ))

    worst_overlap = 0.0
    for result in range(q):
        worst_overlap = max(
            worst_overlap,
            oracle.brute_orthogonality(p, q, result, config.phase_divisor),
        )
    ortho_ok = worst_overlap < 1e-10
    detail = (
        f"max off-diagonal overlap {worst_overlap!r} "
        f"(phase divisor {config.phase_divisor!r})"
    )
    if not ortho_ok:
        detail += " -- this divisor convention is NON-ORTHOGONAL"
    checks.append(("branch-basis orthogonality", ortho_ok, detail))

    naive = oracle.brute_orthogonality(5, 3, 1, "q")
    corrected = oracle.brute_orthogonality(5, 3, 1, "q-r")
    checks.append((
        "phase-divisor counterexample (5x3, result 1)",
        abs(naive - 0.5) < 1e-10 and corrected < 1e-10,
        f"divisor 'q' overlap {naive!r} (non-orthogonal), divisor 'q-r' overlap {corrected!r}",
    ))

    corpus = [spec] + [
        random_channel_spec(np.random.default_rng(config.seed + i)) for i in range(100)
    ]
    prob_dev = 0.0
    info_dev = 0.0
    for candidate in corpus:
        closed = {b.results: b.probability
                  for b in protocol.branch_probabilities(candidate)}
        for digits, mass in oracle.brute_branch_probabilities(candidate):
            prob_dev = max(prob_dev, abs(closed[digits] - mass))
        info_dev = max(info_dev, abs(
            analysis.average_information(candidate)
            - oracle.brute_average_information(candidate)))
    checks.append((
        "branch-probability equivalence",
        prob_dev < 1e-10,
        f"max closed-form vs brute deviation {prob_dev:.3e} over {len(corpus)} channels",
    ))
    checks.append((
        "average-information equivalence",
        info_dev < 1e-10,
        f"max closed-form vs brute deviation {info_dev:.3e} over {len(corpus)} channels",
    ))

    all_passed = True
    for name, passed, detail in checks:
        all_passed &= passed
        stream.write(f"{'PASS' if passed else 'FAIL'} {name}: {detail}\n")
    stream.write(f"{'all checks passed' if all_passed else 'VERIFICATION FAILED'}\n")
    return 0 if all_passed else 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qdense",
        description="Probabilistic dense coding over asymmetric qudit channels.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    def add_common(sub: argparse.ArgumentParser) -> None:
        sub.add_argument("--config", help="JSON config file; flags override its values")
        sub.add_argument("--p", type=int, help="sender-side levels per pair (default 3)")
        sub.add_argument("--q", type=int, help="receiver-side levels per pair (default 2)")
        sub.add_argument("--pairs", type=int, help="number of entangled pairs")
        sub.add_argument(
            "--alphas-sq", nargs="+", metavar="ROW", dest="alphas_sq",
            help="squared coefficients, one comma-separated row per pair",
        )
        sub.add_argument(
            "--alphas", nargs="+", metavar="ROW",
            help="raw coefficients, one comma-separated row per pair",
        )
        sub.add_argument("--seed", type=int, help="seed for all randomness (default 0)")
        sub.add_argument("--out", help="output file (default stdout)")
        sub.add_argument("--format", choices=("text", "json"), help="output format")

    info = subparsers.add_parser("info", help="closed-form capacity report")
    add_common(info)

    simulate = subparsers.add_parser("simulate", help="Monte Carlo protocol rounds")
    add_common(simulate)
    simulate.add_argument("--trials", type=int, help="number of rounds (default 10000)")

    surface = subparsers.add_parser(
        "surface", help="CSV capacity surface of the two-pair 3x2 channel"
    )
    add_common(surface)
    surface.add_argument("--steps", type=int, help="grid points per axis (default 50)")

    verify = subparsers.add_parser("verify", help="run brute-force cross-checks")
    add_common(verify)
    verify.add_argument(
        "--phase-divisor", choices=("q-r", "q"), dest="phase_divisor",
        help="encoding phase divisor for the orthogonality check (default q-r)",
    )
    return parser


class _CliError(Exception):
    pass


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:  # argparse exits: --help is 0, usage errors nonzero
        return 0 if exc.code in (0, None) else 1
    try:
        config = _resolve_config(args)
        if args.command == "info":
            return cmd_info(config)
        if args.command == "simulate":
            return cmd_simulate(config)
        if args.command == "surface":
            return cmd_surface(config)
        return cmd_verify(config)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
