"""Command-line verification harness with deterministic text/JSON reports."""

from __future__ import annotations

import argparse
import datetime
import json
import sys

from . import __version__
from .channels import haar_random_unitary
from .probe import alternating_projection_probe, build_constraint_system
from .report import CertificateReport, Timer, check_exact_int, make_report
from .span import (
    estimate_span_dimension,
    span_dimension_formula,
    verify_group_combinatorics,
    verify_span_lemmas,
)
from .uniqueness import (
    certify_identity_uniqueness,
    cp_family_certificate,
    fig_circuits_certificate,
    switch_verification_suite,
    verify_corollary,
)

SUBCOMMANDS = ("switch-verify", "identity-verify", "corollary-verify",
               "span-verify", "counterexamples", "probe", "all")


def _default_span_samples(d: int) -> int:
    return 3 * span_dimension_formula(d) + 30


def _span_dimension_certificate(d: int, samples: int | None, seed: int) -> CertificateReport:
    timer = Timer()
    n = samples if samples is not None else _default_span_samples(d)
    est = estimate_span_dimension(d, n, seed=seed)
    checks = [check_exact_int("estimated_span_dimension", est,
                              span_dimension_formula(d))]
    return make_report(f"span_dimension_d{d}", checks, timer,
                       notes=(f"samples={n}",))


def _run_span(cfg) -> list[CertificateReport]:
    return [
        verify_span_lemmas(cfg.dim, seed=cfg.seed),
        _span_dimension_certificate(cfg.dim, cfg.samples, cfg.seed),
        verify_group_combinatorics(cfg.dim),
    ]


def _run_switch(cfg) -> list[CertificateReport]:
    return switch_verification_suite(cfg.dim, seed=cfg.seed,
                                     probe_starts=cfg.probe_starts,
                                     tol=cfg.tol_cert)


def _run_identity(cfg) -> list[CertificateReport]:
    return [certify_identity_uniqueness(cfg.dim, seed=cfg.seed)]


def _run_corollaries(cfg) -> list[CertificateReport]:
    rng_seed = cfg.seed
    certs = [verify_corollary("transpose", cfg.dim, trials=100, seed=rng_seed,
                              tol=cfg.tol_cert)]
    a = haar_random_unitary(cfg.dim, cfg.seed + 101)
    b = haar_random_unitary(cfg.dim, cfg.seed + 202)
    certs.append(verify_corollary("sandwich", cfg.dim, trials=100, seed=rng_seed,
                                  a=a, b=b, tol=cfg.tol_cert))
    if cfg.dim == 2:
        certs.append(verify_corollary("conjugate_qubit", 2, trials=100,
                                      seed=rng_seed, tol=cfg.tol_cert))
    return certs


def _run_counterexamples(cfg) -> list[CertificateReport]:
    return [
        fig_circuits_certificate(trials=100, seed=cfg.seed),
        cp_family_certificate(trials=50, seed=cfg.seed),
    ]


def _run_probe(cfg) -> list[CertificateReport]:
    certs = []
    sys_id = build_constraint_system("identity", cfg.dim, seed=cfg.seed)
    certs.append(alternating_projection_probe(
        sys_id, starts=cfg.probe_starts, seed=cfg.seed, feas_tol=cfg.tol_psd))
    if cfg.dim == 2:
        sys_sw = build_constraint_system("switch", 2, seed=cfg.seed)
        certs.append(alternating_projection_probe(
            sys_sw, starts=cfg.probe_starts, seed=cfg.seed, feas_tol=cfg.tol_psd))
        sys_cp = build_constraint_system("cp_family", 2, seed=cfg.seed)
        certs.append(alternating_projection_probe(
            sys_cp, starts=max(cfg.probe_starts, 10), seed=cfg.seed,
            feas_tol=cfg.tol_psd))
    return certs


_RUNNERS = {
    "switch-verify": _run_switch,
    "identity-verify": _run_identity,
    "corollary-verify": _run_corollaries,
    "span-verify": _run_span,
    "counterexamples": _run_counterexamples,
    "probe": _run_probe,
}


def _run_all(cfg) -> list[CertificateReport]:
    certs = []
    for name in ("span-verify", "identity-verify", "switch-verify",
                 "corollary-verify", "counterexamples", "probe"):
        certs.extend(_RUNNERS[name](cfg))
    return certs


_RUNNERS["all"] = _run_all


# --- deterministic serialization -------------------------------------------------


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "null"
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format(value, ".17g")
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_fmt(v) for v in value) + "]"
    if isinstance(value, dict):
        items = (f"{json.dumps(str(k))}: {_fmt(v)}" for k, v in value.items())
        return "{" + ", ".join(items) + "}"
    raise TypeError(f"cannot serialize {type(value).__name__}")


def render_json(report: dict) -> str:
    return _fmt(report) + "\n"


def render_text(report: dict) -> str:
    lines = [f"switchcert {report['version']} :: {report['subcommand']}"]
    cfg = report["config"]
    lines.append("config: " + ", ".join(f"{k}={v}" for k, v in cfg.items()))
    if "timestamp" in report:
        lines.append(f"timestamp: {report['timestamp']}")
    for cert in report["certificates"]:
        status = "PASS" if cert["passed"] else "FAIL"
        lines.append(f"[{status}] {cert['name']}  ({cert['runtime_ms']:.1f} ms)")
        for key, measured in cert["measured"].items():
            target = cert["target"][key]
            tol = cert["tolerance"][key]
            lines.append(f"    {key}: measured={measured!r} target={target!r} "
                         f"tol={tol!r}")
        for note in cert["notes"]:
            lines.append(f"    note: {note}")
    overall = "PASS" if report["passed"] else "FAIL"
    lines.append(f"overall: {overall}")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="switchcert",
        description="Numerical certificates for quantum-switch and one-slot "
                    "supermap constructions.")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name, help=f"run the {name} certificate group")
        p.add_argument("--dim", type=int, default=2, help="slot dimension d >= 2")
        p.add_argument("--seed", type=int, default=0, help="base RNG seed")
        p.add_argument("--tol-psd", type=float, default=1e-6, dest="tol_psd",
                       help="PSD feasibility tolerance for the projection probe")
        p.add_argument("--tol-cert", type=float, default=1e-9, dest="tol_cert",
                       help="distance tolerance for the Haar-sample certificates")
        p.add_argument("--samples", type=int, default=None,
                       help="sample count for span-dimension estimation")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--out", type=str, default=None,
                       help="write the report to this path instead of stdout")
        p.add_argument("--no-timestamp", action="store_true", dest="no_timestamp",
                       help="suppress timestamp and runtimes for reproducible diffs")
        p.add_argument("--probe-starts", type=int, default=10, dest="probe_starts",
                       help="number of perturbed starts per probe run")
    return parser


def _validate(cfg) -> None:
    if cfg.dim < 2:
        raise SystemExit("error: --dim must be at least 2")
    if cfg.tol_psd <= 0 or cfg.tol_cert <= 0:
        raise SystemExit("error: tolerances must be positive")
    if cfg.probe_starts < 1:
        raise SystemExit("error: --probe-starts must be at least 1")


def run(cfg) -> tuple[int, dict]:
    certificates = _RUNNERS[cfg.subcommand](cfg)
    include_runtime = not cfg.no_timestamp
    report = {
        "version": __version__,
        "subcommand": cfg.subcommand,
        "config": {
            "dim": cfg.dim,
            "seed": cfg.seed,
            "tol_psd": cfg.tol_psd,
            "tol_cert": cfg.tol_cert,
            "samples": cfg.samples,
            "probe_starts": cfg.probe_starts,
            "format": cfg.format,
        },
    }
    if not cfg.no_timestamp:
        report["timestamp"] = datetime.datetime.now(
            datetime.timezone.utc).isoformat()
    report["certificates"] = [c.to_dict(include_runtime=include_runtime)
                              for c in certificates]
    report["passed"] = all(c.passed for c in certificates)
    return (0 if report["passed"] else 1), report


def main(argv=None) -> int:
    cfg = build_parser().parse_args(argv)
    _validate(cfg)
    code, report = run(cfg)
    rendered = render_json(report) if cfg.format == "json" else render_text(report)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(rendered)
    else:
        sys.stdout.write(rendered)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
