"""Command-line front end: irreality sweeps, tomography runs, and the MZI demo.

Every run writes a manifest (command, resolved configuration, seed, version,
timestamp) next to its outputs; rerunning with the same configuration and
seed reproduces every CSV and JSON output byte for byte.  CSV files start
with a schema comment line so downstream parsers can pin the layout.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .core import ConfigurationError, ObservableSpec, QubitRegister
from .eraser import (
    ProtocolConfig,
    SweepRecord,
    TARGETS,
    irreality_curve,
    omega_state,
)
from .mzi import (
    MziConfig,
    detector_probabilities,
    extended_output_analysis,
    visibility,
)
from .tomography import (
    DatasetFormatError,
    IncompleteDataError,
    load_dataset,
    monte_carlo_irreality,
    project_to_physical,
    reconstruct_linear,
    simulate_counts,
    tomography_end_to_end,
)

OUT_DIR_ENV = "QREALITY_OUT_DIR"
THREADS_ENV = "QREALITY_THREADS"
DEFAULT_SEED = 42

SWEEP_SCHEMA = "qreality.sweep.v1"
MZI_SCHEMA = "qreality.mzi.v1"
RHO_SCHEMA = "qreality.rho-real.v1"

OMEGA_STATES = {
    "omega1z": ("b", "Cz"),
    "omega1x": ("b", "Cx"),
    "omega2z": ("d1", "Cz"),
    "omega2x": ("d1", "Cx"),
}


def _default_out_dir() -> str:
    return os.environ.get(OUT_DIR_ENV, "qreality_out")


def _thread_count() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _write_manifest(out_dir: Path, command: str, config: dict, seed) -> None:
    manifest = {
        "command": command,
        "config": config,
        "seed": seed,
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }
    with open(out_dir / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")


def _write_csv(path: Path, schema: str, header: list[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(f"# schema: {schema}\n")
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow(row)


def _fmt(value) -> str:
    return "" if value is None else repr(float(value))


def _write_json(path: Path, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def _theta_grid(parser, args) -> np.ndarray:
    lo, hi = args.theta_min, args.theta_max
    if args.degrees:
        lo, hi = np.radians(lo), np.radians(hi)
    if args.grid < 1:
        parser.error("--grid must be at least 1")
    if not (0.0 <= lo <= hi <= np.pi + 1e-12):
        parser.error("theta range must satisfy 0 <= min <= max <= pi")
    return np.linspace(lo, hi, args.grid)


def _tomo_for_record(record: SweepRecord, branch: str, shots, resamples, seeds):
    cfg = ProtocolConfig(
        theta=record.theta, alice_config=record.config, alice_branch=branch
    )
    omega, _ = omega_state(cfg, record.target)
    data = simulate_counts(omega, shots, seeds[0])
    observable = ObservableSpec.pauli(record.target, "Z")
    return monte_carlo_irreality(
        data, observable, resamples, seeds[1], register=omega.register
    )


def cmd_sweep(parser, args) -> int:
    grid = _theta_grid(parser, args)
    target = TARGETS.get(args.target)
    stage = 1 if target == "b" else 2
    if args.stage is not None and args.stage != stage:
        parser.error(f"--target {args.target} belongs to stage {stage}, not {args.stage}")
    if args.tomo and args.resamples < 2:
        parser.error("--resamples must be at least 2")
    if args.tomo and args.shots < 1:
        parser.error("--shots must be at least 1")
    configs = ("Cz", "Cx") if args.config == "both" else (args.config,)

    records: list[SweepRecord] = []
    for config in configs:
        template = ProtocolConfig(
            theta=0.0, alice_config=config, alice_branch=args.branch
        )
        records.extend(irreality_curve(template, args.target, grid))

    if args.tomo:
        child_seeds = np.random.SeedSequence(args.seed).generate_state(2 * len(records))
        jobs = [
            (rec, (int(child_seeds[2 * i]), int(child_seeds[2 * i + 1])))
            for i, rec in enumerate(records)
        ]
        workers = _thread_count()
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                results = list(
                    pool.map(
                        lambda job: _tomo_for_record(
                            job[0], args.branch, args.shots, args.resamples, job[1]
                        ),
                        jobs,
                    )
                )
        else:
            results = [
                _tomo_for_record(rec, args.branch, args.shots, args.resamples, seeds)
                for rec, seeds in jobs
            ]
        for rec, (mean, std) in zip(records, results):
            rec.irreality_tomo_mean = mean
            rec.irreality_tomo_std = std

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    header = [
        "theta",
        "config",
        "target",
        "irreality_analytic",
        "irreality_tomo_mean",
        "irreality_tomo_std",
        "selection_probability",
    ]
    rows = [
        [
            _fmt(r.theta),
            r.config,
            r.target,
            _fmt(r.irreality_analytic),
            _fmt(r.irreality_tomo_mean),
            _fmt(r.irreality_tomo_std),
            _fmt(r.selection_probability),
        ]
        for r in records
    ]
    _write_csv(out_dir / "sweep.csv", SWEEP_SCHEMA, header, rows)

    config_dict = {
        "target": target,
        "stage": stage,
        "configs": list(configs),
        "branch": args.branch,
        "grid": args.grid,
        "theta_min": float(grid[0]),
        "theta_max": float(grid[-1]),
        "tomo": bool(args.tomo),
        "shots": args.shots if args.tomo else None,
        "resamples": args.resamples if args.tomo else None,
        "threads": _thread_count(),
    }
    _write_json(
        out_dir / "summary.json",
        {
            "rows": len(records),
            "config": config_dict,
            "seed": args.seed,
            "version": __version__,
            "outputs": ["sweep.csv", "summary.json"],
        },
    )
    _write_manifest(out_dir, "sweep", config_dict, args.seed)
    print(f"seed: {args.seed}")
    print(f"wrote {out_dir / 'sweep.csv'} ({len(records)} rows)")
    return 0


def _ket_labels(register: QubitRegister) -> list[str]:
    n = register.n_qubits
    return [format(i, f"0{n}b") for i in range(register.dimension)]


def cmd_tomo(parser, args) -> int:
    if (args.dataset is None) == (not args.simulate):
        parser.error("provide exactly one of: a dataset file, or --simulate")

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    if args.simulate:
        target, config = OMEGA_STATES[args.state]
        theta = np.radians(args.theta) if args.degrees else args.theta
        cfg = ProtocolConfig(theta=float(theta), alice_config=config, alice_branch=args.branch)
        omega, _ = omega_state(cfg, target)
        result = tomography_end_to_end(omega, args.shots, args.seed)
        register = omega.register
        rho = result.rho_physical
        report = {
            "state": args.state,
            "theta": float(theta),
            "fidelity_to_truth": result.fidelity_to_truth,
            "purity": float(np.real(np.vdot(rho.entries, rho.entries))),
            "diagnostics": result.diagnostics,
        }
        config_dict = {
            "simulate": True,
            "state": args.state,
            "theta": float(theta),
            "branch": args.branch,
            "shots": args.shots,
        }
    else:
        data = load_dataset(args.dataset)
        if data.n_qubits == 3:
            register = QubitRegister(("b", "d1", "d2"))
        else:
            register = QubitRegister(tuple(f"q{i}" for i in range(data.n_qubits)))
        rho_linear = reconstruct_linear(data)
        rho = project_to_physical(rho_linear, register)
        eigs = np.linalg.eigvalsh((rho_linear + rho_linear.conj().T) / 2)
        report = {
            "dataset": str(args.dataset),
            "fidelity_to_truth": None,
            "purity": float(np.real(np.vdot(rho.entries, rho.entries))),
            "diagnostics": {
                "min_eigenvalue_linear": float(eigs.min()),
                "n_settings": len(data.settings),
                "shots_per_setting": data.shots_per_setting,
                "seed": data.seed,
            },
        }
        config_dict = {"simulate": False, "dataset": str(args.dataset)}

    _write_json(
        out_dir / "density_matrix.json",
        {
            "labels": list(register.labels),
            "real": rho.entries.real.tolist(),
            "imag": rho.entries.imag.tolist(),
        },
    )
    _write_json(out_dir / "report.json", report)

    kets = _ket_labels(register)
    rows = [
        [str(i), str(j), kets[i], kets[j], _fmt(rho.entries[i, j].real)]
        for i in range(register.dimension)
        for j in range(register.dimension)
    ]
    _write_csv(
        out_dir / "density_matrix_real.csv",
        RHO_SCHEMA,
        ["row", "col", "row_ket", "col_ket", "real"],
        rows,
    )
    _write_manifest(out_dir, "tomo", config_dict, args.seed)
    print(f"seed: {args.seed}")
    if report["fidelity_to_truth"] is not None:
        print(f"fidelity to truth: {report['fidelity_to_truth']:.6f}")
    print(f"purity: {report['purity']:.6f}")
    print(f"wrote {out_dir / 'density_matrix.json'}")
    return 0


def cmd_mzi(parser, args) -> int:
    if args.grid < 1:
        parser.error("--grid must be at least 1")
    cfg = MziConfig(
        phi=0.0,
        closed=not args.open,
        extended=args.extended,
        decohere_after_first_bs=args.decohere,
    )
    phis = np.linspace(0.0, 2 * np.pi, args.grid, endpoint=False)
    rows = []
    for phi, (p0, p1) in zip(phis, detector_probabilities(cfg, phis)):
        rows.append([_fmt(phi), _fmt(p0), _fmt(p1)])

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_csv(out_dir / "mzi.csv", MZI_SCHEMA, ["phi", "p0", "p1"], rows)

    summary = {
        "closed": cfg.closed,
        "extended": cfg.extended,
        "decohere_after_first_bs": cfg.decohere_after_first_bs,
        "visibility": visibility(cfg),
        "grid": args.grid,
    }
    if cfg.extended:
        analysis = extended_output_analysis(dataclasses.replace(cfg, phi=args.phi))
        summary["extended_analysis"] = {
            "phi": args.phi,
            "selection_probability": analysis.selection_probability,
            "entanglement_entropy": analysis.entanglement_entropy,
            "mutual_information": analysis.mutual_information,
            "ppt_separable": analysis.ppt_separable,
            "irreality_sigma_z_at_s1": analysis.irreality_sigma_z_at_s1,
        }
    _write_json(out_dir / "summary.json", summary)
    config_dict = {
        "closed": cfg.closed,
        "extended": cfg.extended,
        "decohere": cfg.decohere_after_first_bs,
        "grid": args.grid,
        "phi": args.phi,
    }
    _write_manifest(out_dir, "mzi", config_dict, None)
    print(f"visibility: {summary['visibility']:.9f}")
    print(f"wrote {out_dir / 'mzi.csv'}")
    return 0


def _selftest_checks():
    from .core import DensityMatrix, PureState, fidelity
    from .measures import binary_entropy, irreality as irr, von_neumann_entropy

    def closed_forms():
        for theta in (0.3, 0.9, np.pi / 2):
            cfg = ProtocolConfig(theta=theta, alice_config="Cx")
            omega, _ = omega_state(cfg, "d1")
            rep = irr(omega, ObservableSpec.pauli("d1", "Z"))
            expected = binary_entropy(np.cos(theta / 2) ** 2)
            assert abs(rep.irreality - expected) < 1e-9

    def cz_is_real():
        cfg = ProtocolConfig(theta=0.7, alice_config="Cz")
        omega, _ = omega_state(cfg, "b")
        assert irr(omega, ObservableSpec.pauli("b", "Z")).irreality < 1e-9

    def mzi_visibilities():
        assert abs(visibility(MziConfig(phi=0.0)) - 1.0) < 1e-9
        assert abs(visibility(MziConfig(phi=0.0, closed=False))) < 1e-9

    def inversion_roundtrip():
        cfg = ProtocolConfig(theta=1.1, alice_config="Cx")
        omega, _ = omega_state(cfg, "d1")
        from .tomography import all_settings, born_probabilities, reconstruct_from_frequencies

        freqs = np.stack([born_probabilities(omega, s) for s in all_settings(3)])
        rho_hat = reconstruct_from_frequencies(freqs, 3)
        rho = project_to_physical(rho_hat, omega.register)
        assert fidelity(rho, omega) > 1.0 - 1e-9

    def deterministic_counts():
        cfg = ProtocolConfig(theta=np.pi / 2, alice_config="Cx")
        omega, _ = omega_state(cfg, "d1")
        a = simulate_counts(omega, 500, 7).counts
        b = simulate_counts(omega, 500, 7).counts
        assert np.array_equal(a, b)

    def entropy_values():
        reg = QubitRegister(("q0",))
        mixed = DensityMatrix(reg, np.diag([0.75, 0.25]).astype(complex))
        assert abs(von_neumann_entropy(mixed) - binary_entropy(0.75)) < 1e-12
        pure = PureState(reg, [1.0, 0.0])
        assert von_neumann_entropy(pure.to_density()) < 1e-12

    return [
        ("eraser closed forms", closed_forms),
        ("Cz realism", cz_is_real),
        ("mzi visibilities", mzi_visibilities),
        ("tomography inversion roundtrip", inversion_roundtrip),
        ("deterministic counts", deterministic_counts),
        ("entropy reference values", entropy_values),
    ]


def cmd_selftest(parser, args) -> int:
    failures = 0
    for name, check in _selftest_checks():
        try:
            check()
        except Exception as exc:  # report and keep going
            failures += 1
            print(f"FAIL {name}: {exc}")
        else:
            print(f"ok   {name}")
    if failures:
        print(f"{failures} check(s) failed")
        return 1
    print("all checks passed")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qreality",
        description="Irreality sweeps, simulated tomography, and MZI demos.",
    )
    parser.add_argument("--version", action="version", version=f"qreality {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="irreality versus theta, CSV + JSON")
    sweep.add_argument("--target", choices=sorted(TARGETS), default="b")
    sweep.add_argument("--stage", type=int, choices=(1, 2), default=None)
    sweep.add_argument("--config", choices=("Cz", "Cx", "both"), default="both")
    sweep.add_argument("--branch", choices=("plus", "minus"), default="plus")
    sweep.add_argument("--grid", type=int, default=41)
    sweep.add_argument("--theta-min", type=float, default=0.0)
    sweep.add_argument("--theta-max", type=float, default=float(np.pi / 2))
    sweep.add_argument("--degrees", action="store_true", help="angles are in degrees")
    sweep.add_argument("--tomo", action="store_true", help="add simulated tomography columns")
    sweep.add_argument("--shots", type=int, default=10_000)
    sweep.add_argument("--resamples", type=int, default=100)
    sweep.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sweep.add_argument("--out-dir", default=_default_out_dir())

    tomo = sub.add_parser("tomo", help="reconstruct a state from counts")
    tomo.add_argument("dataset", nargs="?", default=None, help="counts JSON file")
    tomo.add_argument("--simulate", action="store_true")
    tomo.add_argument("--state", choices=sorted(OMEGA_STATES), default="omega2x")
    tomo.add_argument("--theta", type=float, default=float(np.pi / 2))
    tomo.add_argument("--degrees", action="store_true")
    tomo.add_argument("--branch", choices=("plus", "minus"), default="plus")
    tomo.add_argument("--shots", type=int, default=100_000)
    tomo.add_argument("--seed", type=int, default=DEFAULT_SEED)
    tomo.add_argument("--out-dir", default=_default_out_dir())

    mzi = sub.add_parser("mzi", help="interferometer phase sweep and marker analysis")
    mode = mzi.add_mutually_exclusive_group()
    mode.add_argument("--closed", action="store_true", help="second beam splitter in (default)")
    mode.add_argument("--open", action="store_true", help="second beam splitter removed")
    mzi.add_argument("--extended", action="store_true", help="enable path markers d1, d2")
    mzi.add_argument("--decohere", action="store_true", help="decohere the probe after the first beam splitter")
    mzi.add_argument("--phi", type=float, default=0.0, help="phase used for the marker analysis")
    mzi.add_argument("--grid", type=int, default=256)
    mzi.add_argument("--out-dir", default=_default_out_dir())

    sub.add_parser("selftest", help="run quick internal consistency checks")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "sweep": cmd_sweep,
        "tomo": cmd_tomo,
        "mzi": cmd_mzi,
        "selftest": cmd_selftest,
    }
    try:
        return handlers[args.command](parser, args)
    except (
        OSError,
        ConfigurationError,
        DatasetFormatError,
        IncompleteDataError,
        ValueError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
