"""``taxosim`` command line.

Exit codes: 0 success, 2 input/validation error, 3 internal error.
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import hashlib
import io
import json
import os
import shutil
import sys
import tempfile
from pathlib import Path

from . import __version__
from .bench import AlgorithmCombo, BenchConfig, CohortEngine, rank_report, run_benchmark, select_combos
from .cohort import PatientSet, SimilarityMatrix, cohort_to_csv, load_cohort, load_truth, truth_to_csv
from .concept import CsMeasure, LiVariant, cs
from .errors import EmptySet, TaxosimError
from .ic import IcMeasure
from .scale import apply_scale
from .taxonomy import read_taxonomy

EXIT_OK, EXIT_INPUT, EXIT_INTERNAL = 0, 2, 3


class InputError(TaxosimError):
    pass


def fmt(x: float) -> str:
    return f"{x:.10f}"


def _read(path) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _require_files(**paths) -> None:
    for flag, path in paths.items():
        if path is None:
            continue
        p = Path(path)
        if not p.is_file() or not os.access(p, os.R_OK):
            raise InputError(f"--{flag.replace('_', '-')}: cannot read {path}")


def _codes(text: str) -> tuple[str, ...]:
    codes = tuple(dict.fromkeys(c.strip() for c in text.split(";") if c.strip()))
    if not codes:
        raise EmptySet("empty code set")
    return codes


# commands -------------------------------------------------------------


def cmd_taxonomy_validate(args) -> int:
    _require_files(edges=args.edges)
    tax = read_taxonomy(args.edges)
    print(f"nodes={len(tax)} leaves={tax.total_leaves} max_depth={tax.max_depth}")
    return EXIT_OK


def cmd_cs(args) -> int:
    _require_files(edges=args.edges)
    tax = read_taxonomy(args.edges)
    measure = CsMeasure(args.cs)
    value = cs(tax, IcMeasure(args.ic), measure, args.code_a, args.code_b, LiVariant(args.li_variant))
    print(f"{fmt(value)} {measure.direction}")
    return EXIT_OK


def cmd_setsim(args) -> int:
    combo = AlgorithmCombo.parse(args.combo)
    set_a, set_b = _codes(args.a), _codes(args.b)
    override = args.constant_cs
    tax = None
    if override is None and combo.set.semantic:
        if args.edges is None:
            raise InputError("--edges is required for semantic set measures")
    if args.edges is not None and override is None:
        _require_files(edges=args.edges)
        tax = read_taxonomy(args.edges)
        tax.indices(set_a + set_b)
    config = BenchConfig(li_variant=args.li_variant, normalize=args.normalize, scale_log=args.scale_log)
    engine = CohortEngine(tax, [PatientSet("A", set_a), PatientSet("B", set_b)], config, override)
    raw = float(engine.raw_matrix(combo.set, combo.ic, combo.cs)[0, 1])
    score = apply_scale(raw, len(set_a), len(set_b), args.scale_log)
    print(f"raw={fmt(score.raw)} scaled={fmt(score.scaled)} size_a={score.size_a} size_b={score.size_b}")
    return EXIT_OK


def _digest(path) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def cmd_benchmark(args) -> int:
    _require_files(edges=args.edges, cohort=args.cohort, truth=args.truth)
    combos = select_combos(args.combos)
    config = BenchConfig(
        li_variant=args.li_variant,
        normalize=args.normalize,
        scale_log=args.scale_log,
        include_diagonal=args.include_diagonal,
    )
    tax = read_taxonomy(args.edges)
    cohort = load_cohort(_read(args.cohort), None if args.constant_cs is not None else tax, args.unknown_codes)
    truth = load_truth(_read(args.truth), [p.pseudonym for p in cohort])
    result = run_benchmark(
        tax, cohort, truth, combos, config, jobs=args.jobs, cs_override=args.constant_cs
    )

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    staging = Path(tempfile.mkdtemp(prefix=".taxosim-", dir=out.parent))
    try:
        files = []
        for combo_id, matrix in result.matrices.items():
            name = f"{combo_id}.csv"
            (staging / name).write_text(matrix.to_csv(), encoding="utf-8")
            files.append(name)
        ranking_csv, ranking_json = rank_report(result.results, config)
        (staging / "ranking.csv").write_text(ranking_csv, encoding="utf-8")
        (staging / "ranking.json").write_text(ranking_json, encoding="utf-8")
        if args.figures:
            from .plotting import plot_matrix, plot_ranking

            fig_dir = staging / "figures"
            fig_dir.mkdir()
            if len(result.results) > 1:
                plot_ranking(result.results, fig_dir / "ranking.svg")
            labels = [f"{p.pseudonym} ({len(p)})" for p in cohort]
            plot_matrix(truth.scores, fig_dir / "truth.svg", labels, "ground truth", 0.0, 10.0)
            best = result.ranked()[0][0]
            plot_matrix(result.matrices[best.id].values, fig_dir / "best.svg", labels, best.id)
        manifest = {
            "tool": "taxosim",
            "version": __version__,
            "created": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
            "inputs": {
                key: {"path": str(getattr(args, key)), "sha256": _digest(getattr(args, key))}
                for key in ("edges", "cohort", "truth")
            },
            "config": {k: v for k, v in sorted(vars(args).items()) if k != "func"},
            "patients": len(cohort),
            "combos": len(files),
            "files": sorted(files),
        }
        (staging / "run.json").write_text(json.dumps(manifest, indent=2, default=str) + "\n", encoding="utf-8")
        out.mkdir(exist_ok=True)
        for item in sorted(staging.iterdir()):
            target = out / item.name
            if target.is_dir():
                shutil.rmtree(target)
            os.replace(item, target)
    finally:
        shutil.rmtree(staging, ignore_errors=True)

    for k, (combo, r) in enumerate(result.ranked()[:5], start=1):
        print(f"{k}. {combo.id} r={'nan' if r is None else fmt(r)}")
    return EXIT_OK


def cmd_heatmap(args) -> int:
    from .plotting import plot_matrix, plot_ranking

    if (args.matrix is None) == (args.ranking is None):
        raise InputError("give exactly one of --matrix or --ranking")
    if args.matrix is not None:
        _require_files(matrix=args.matrix, cohort=args.cohort)
        m = SimilarityMatrix.from_csv(_read(args.matrix))
        labels = list(m.pseudonyms)
        if args.cohort:
            sizes = {p.pseudonym: len(p) for p in load_cohort(_read(args.cohort))}
            labels = [str(sizes.get(name, name)) for name in labels]
        plot_matrix(m.values, args.out, labels, args.title or Path(args.matrix).stem)
    else:
        _require_files(ranking=args.ranking)
        results = []
        for row in list(csv.reader(io.StringIO(_read(args.ranking))))[1:]:
            if len(row) == 2:
                results.append((AlgorithmCombo.parse(row[0]), None if row[1] == "nan" else float(row[1])))
        plot_ranking(results, args.out)
    print(args.out)
    return EXIT_OK


def cmd_synth(args) -> int:
    from .synthetic import icd_like_taxonomy, profile_truth, synthetic_cohort

    tax = icd_like_taxonomy(args.nodes, seed=args.seed)
    cohort, fractions = synthetic_cohort(tax, args.patients, seed=args.seed)
    truth = profile_truth(cohort, fractions)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "taxonomy.csv").write_text(tax.to_edge_list(), encoding="utf-8")
    (out / "cohort.csv").write_text(cohort_to_csv(cohort), encoding="utf-8")
    (out / "truth.csv").write_text(truth_to_csv(truth), encoding="utf-8")
    print(f"wrote {out}/taxonomy.csv, cohort.csv, truth.csv")
    return EXIT_OK


# parser ---------------------------------------------------------------


def _add_measure_opts(p: argparse.ArgumentParser) -> None:
    p.add_argument("--li-variant", choices=[v.value for v in LiVariant], default="original")
    p.add_argument("--normalize", choices=["run", "none"], default="run",
                   help="distance normalization for hierdist (default: per run)")
    p.add_argument("--scale-log", choices=["e", "2", "10"], default="e",
                   help="log base of the scale term (default: e)")
    p.add_argument("--constant-cs", type=float, default=None, help=argparse.SUPPRESS)


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    parser = argparse.ArgumentParser(prog="taxosim", description="Taxonomy-based semantic similarity benchmark.")
    parser.add_argument("--version", action="version", version=f"taxosim {__version__}")
    parser.add_argument("--config", help="key = value file; keys mirror flag names")
    sub = parser.add_subparsers(dest="command", required=True)
    subs: dict[str, argparse.ArgumentParser] = {}

    tx = sub.add_parser("taxonomy", help="taxonomy utilities")
    tx_sub = tx.add_subparsers(dest="action", required=True)
    p = tx_sub.add_parser("validate", help="parse and index an edge list")
    p.add_argument("--edges", required=True)
    p.set_defaults(func=cmd_taxonomy_validate)
    subs["taxonomy validate"] = p

    p = sub.add_parser("cs", help="concept similarity of two codes")
    p.add_argument("--edges", required=True)
    p.add_argument("--ic", choices=[m.value for m in IcMeasure], default="level")
    p.add_argument("--cs", required=True, choices=[m.value for m in CsMeasure])
    p.add_argument("--li-variant", choices=[v.value for v in LiVariant], default="original")
    p.add_argument("code_a")
    p.add_argument("code_b")
    p.set_defaults(func=cmd_cs)
    subs["cs"] = p

    p = sub.add_parser("setsim", help="set similarity of two code sets")
    p.add_argument("--edges")
    p.add_argument("--combo", required=True)
    p.add_argument("--a", required=True, help="codes separated by ';'")
    p.add_argument("--b", required=True, help="codes separated by ';'")
    _add_measure_opts(p)
    p.set_defaults(func=cmd_setsim)
    subs["setsim"] = p

    p = sub.add_parser("benchmark", help="run all combos against a ground truth")
    p.add_argument("--edges", required=True)
    p.add_argument("--cohort", required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--combos", default="all", help="'all', a combo id or a glob pattern")
    p.add_argument("--unknown-codes", choices=["error", "skip"], default="error")
    p.add_argument("--include-diagonal", action="store_true")
    p.add_argument("--jobs", type=int, default=1, help="worker processes (0 = auto)")
    p.add_argument("--figures", action=argparse.BooleanOptionalAction, default=True,
                   help="render SVG heatmaps under OUT/figures")
    _add_measure_opts(p)
    p.set_defaults(func=cmd_benchmark)
    subs["benchmark"] = p

    p = sub.add_parser("heatmap", help="render a matrix or ranking CSV as SVG")
    p.add_argument("--matrix")
    p.add_argument("--ranking")
    p.add_argument("--cohort", help="label axes with set sizes from this cohort")
    p.add_argument("--title")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_heatmap)
    subs["heatmap"] = p

    p = sub.add_parser("synth", help="write a synthetic taxonomy, cohort and truth")
    p.add_argument("--out", required=True)
    p.add_argument("--nodes", type=int, default=500)
    p.add_argument("--patients", type=int, default=29)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_synth)
    subs["synth"] = p
    return parser, subs


def read_config(path) -> dict[str, str]:
    values = {}
    for lineno, raw in enumerate(_read(path).splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith(("#", ";", "[")):
            continue
        sep = "=" if "=" in line else ":"
        key, ok, value = line.partition(sep)
        if not ok:
            raise InputError(f"{path}:{lineno}: expected 'key = value'")
        values[key.strip().lstrip("-").replace("_", "-")] = value.strip()
    return values


def _config_tokens(sub: argparse.ArgumentParser, values: dict[str, str]) -> list[str]:
    actions = {a.option_strings[0]: a for a in sub._actions if a.option_strings}
    tokens = []
    for key, value in values.items():
        flag = f"--{key}"
        action = actions.get(flag)
        if action is None:
            raise InputError(f"config key {key!r} is not an option of this command")
        if action.nargs == 0:
            if value.lower() in ("1", "true", "yes", "on"):
                tokens.append(flag)
            elif isinstance(action, argparse.BooleanOptionalAction):
                tokens.append(f"--no-{key}")
        else:
            tokens.extend([flag, value])
    return tokens


def _splice_config(argv: list[str], subs) -> list[str]:
    """Insert config-file options right after the subcommand so explicit flags win."""
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, rest = pre.parse_known_args(argv)
    if not known.config:
        return argv
    _require_files(config=known.config)
    values = read_config(known.config)
    width = 2 if rest[:1] == ["taxonomy"] else 1
    name = " ".join(rest[:width])
    if name not in subs:
        return rest
    return rest[:width] + _config_tokens(subs[name], values) + rest[width:]


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, subs = build_parser()
    try:
        argv = _splice_config(argv, subs)
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except TaxosimError as exc:
        print(f"{exc.name}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (OSError, ValueError, UnicodeDecodeError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:  # pragma: no cover - last resort
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
