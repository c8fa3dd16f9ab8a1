"""Command-line front end.

Exit codes: 0 success, 2 bad arguments, 3 image errors, 4 divergence,
5 benchmark rows failed (report still written).
"""

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .errors import DimensionMismatchError, DivergedError, ImageError, InvalidSpecError, UnstableRateError
from .field import DiffusionParams
from .imaging import load_image, save_image
from .metrics import psnr
from .pipeline import PipelineConfig, PipelineMethod, correct_document, estimate_background
from .synthetic import SyntheticSpec, default_corpus, generate_synthetic

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IMAGE = 3
EXIT_DIVERGED = 4
EXIT_BENCH_FAILED = 5

METHOD_ALIASES = {
    "combined": PipelineMethod.COMBINED,
    "incremental": PipelineMethod.INCREMENTAL_ONLY,
    "incremental_only": PipelineMethod.INCREMENTAL_ONLY,
    "flood": PipelineMethod.FLOOD_ONLY,
    "flood_only": PipelineMethod.FLOOD_ONLY,
}


class UsageError(Exception):
    pass


def _add_diffusion_flags(p):
    g = p.add_argument_group("diffusion")
    g.add_argument("--ks", type=int, default=5, help="coarse sampling rate (default 5)")
    g.add_argument("--eta", type=float, default=0.25, help="diffusion rate in (0, 0.25]")
    g.add_argument("--delta", type=float, default=0.01, help="convergence threshold")
    g.add_argument("--brightness", type=float, default=0.85, help="output brightness factor in [0, 1]")
    g.add_argument("--max-iters-coarse", type=int, default=1000)
    g.add_argument("--max-iters-fine", type=int, default=3000)
    g.add_argument("--method", choices=sorted(METHOD_ALIASES), default="combined")
    g.add_argument("--g-floor", type=float, default=1.0, help="lower bound on the background divisor")
    g.add_argument("--divergence-limit", type=float, default=1e6,
                   help="abort when any |G| exceeds this value")


def config_from_args(args):
    try:
        coarse = DiffusionParams(args.eta, args.delta, args.max_iters_coarse, args.divergence_limit)
        fine = DiffusionParams(args.eta, args.delta, args.max_iters_fine, args.divergence_limit)
        return PipelineConfig(
            ks=args.ks,
            brightness=args.brightness,
            method=METHOD_ALIASES[args.method],
            coarse_params=coarse,
            fine_params=fine,
            g_floor=args.g_floor,
        )
    except UnstableRateError as exc:
        raise UsageError(f"--eta: {exc}") from exc
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def build_parser():
    parser = argparse.ArgumentParser(
        prog="waterfill",
        description="Illumination correction of document images by water-filling.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("correct", help="remove shading from one or more images")
    p.add_argument("inputs", nargs="+", type=Path)
    p.add_argument("-o", "--output", type=Path, required=True,
                   help="output PNG, or a directory when several inputs are given")
    _add_diffusion_flags(p)
    p.add_argument("--dump-background", type=Path, help="write the final background as grayscale PNG")
    p.add_argument("--json", type=Path, help="write run metrics as JSON")
    p.add_argument("--snapshot-every", type=int, default=0, metavar="N",
                   help="dump the full-resolution surface every N iterations")
    p.add_argument("--snapshot-dir", type=Path)
    p.add_argument("--workers", type=int, default=os.cpu_count() or 1)

    p = sub.add_parser("background", help="write the estimated background layer")
    p.add_argument("input", type=Path)
    p.add_argument("-o", "--output", type=Path, required=True)
    _add_diffusion_flags(p)

    p = sub.add_parser("psnr", help="PSNR between two images of equal size")
    p.add_argument("a", type=Path)
    p.add_argument("b", type=Path)

    p = sub.add_parser("bench", help="benchmark on synthetic shaded documents")
    p.add_argument("specs", nargs="?", type=Path, help="JSON list of synthetic specs")
    p.add_argument("--default-corpus", action="store_true")
    p.add_argument("--corpus-size", type=int, default=20)
    p.add_argument("--ks-sweep", help="comma-separated sampling rates, e.g. 2,5,8,11,14")
    p.add_argument("--out-dir", type=Path, default=Path("bench-report"))
    p.add_argument("--no-plots", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    _add_diffusion_flags(p)

    p = sub.add_parser("synth", help="write synthetic ground-truth/distorted pairs")
    p.add_argument("specs", nargs="?", type=Path)
    p.add_argument("--default-corpus", action="store_true")
    p.add_argument("--corpus-size", type=int, default=20)
    p.add_argument("--out-dir", type=Path, required=True)
    return parser


def _validate_paths(args):
    if len(args.inputs) > 1 and args.output.suffix.lower() == ".png":
        raise UsageError("several inputs need -o to name a directory")
    if args.snapshot_every < 0:
        raise UsageError("--snapshot-every must be non-negative")
    if args.workers < 1:
        raise UsageError("--workers must be at least 1")


def _targets(args, src):
    """Output, background and snapshot paths for one input."""
    multi = len(args.inputs) > 1
    out = args.output / f"{src.stem}.png" if multi else args.output
    bg = None
    if args.dump_background:
        bg = args.dump_background / f"{src.stem}_background.png" if multi else args.dump_background
    snap_dir = args.snapshot_dir or out.parent
    return out, bg, snap_dir


def _correct_one(src, args, config):
    out, bg_path, snap_dir = _targets(args, src)
    snapshots = []

    def record(t, g):
        snapshots.append((t, g.copy()))

    img = load_image(src)
    result = correct_document(
        img, config, callback=record if args.snapshot_every else None,
        callback_every=args.snapshot_every,
    )
    out.parent.mkdir(parents=True, exist_ok=True)
    save_image(result.corrected, out)
    if bg_path:
        save_image(result.background, bg_path)
    if snapshots:
        snap_dir.mkdir(parents=True, exist_ok=True)
        for t, g in snapshots:
            save_image(g, snap_dir / f"{src.stem}_G_t{t:05d}.png")
        from .plotting import plot_snapshots

        plot_snapshots(snapshots, snap_dir / f"{src.stem}_snapshots.png")
    record_ = {"input": str(src), "output": str(out)}
    record_.update(result.metrics.to_dict())
    return record_


def cmd_correct(args):
    config = config_from_args(args)
    _validate_paths(args)
    if len(args.inputs) > 1:
        args.output.mkdir(parents=True, exist_ok=True)
        if args.dump_background:
            args.dump_background.mkdir(parents=True, exist_ok=True)

    def job(src):
        try:
            rec = _correct_one(src, args, config)
        except DivergedError as exc:
            print(f"FAIL {src}: diverged: {exc}", file=sys.stderr)
            return src, None, EXIT_DIVERGED
        except ImageError as exc:
            print(f"FAIL {src}: {exc}", file=sys.stderr)
            return src, None, EXIT_IMAGE
        print(
            f"ok   {src} -> {rec['output']} (coarse {rec['coarse_iterations']} it, "
            f"fine {rec['fine_iterations']} it, {rec['elapsed_ms']['total']} ms)",
            file=sys.stderr,
        )
        return src, rec, EXIT_OK

    workers = min(args.workers, len(args.inputs))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(job, args.inputs))
    else:
        results = [job(src) for src in args.inputs]

    records = [rec for _, rec, _ in results if rec is not None]
    if args.json and records:
        payload = records[0] if len(args.inputs) == 1 else records
        args.json.write_text(json.dumps(payload, indent=2) + "\n")
    return max(code for _, _, code in results)


def cmd_background(args):
    config = config_from_args(args)
    try:
        g = estimate_background(load_image(args.input), config)
        save_image(g, args.output)
    except DivergedError as exc:
        print(f"diverged: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    except ImageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_IMAGE
    return EXIT_OK


def cmd_psnr(args):
    try:
        result = psnr(load_image(args.a), load_image(args.b))
    except (ImageError, DimensionMismatchError) as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_IMAGE
    print(str(result) if result.is_infinite else f"{result.psnr_db:.4f}")
    return EXIT_OK


def load_specs(args):
    if args.default_corpus and args.specs is not None:
        raise UsageError("give either a spec file or --default-corpus, not both")
    if args.default_corpus:
        if args.corpus_size < 1:
            raise UsageError("--corpus-size must be at least 1")
        return default_corpus(args.corpus_size)
    if args.specs is None:
        raise UsageError("give a spec file or --default-corpus")
    try:
        raw = json.loads(args.specs.read_text())
    except FileNotFoundError as exc:
        raise UsageError(f"spec file not found: {args.specs}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{args.specs}: invalid JSON ({exc})") from exc
    if isinstance(raw, dict):
        raw = raw.get("specs", [])
    if not isinstance(raw, list) or not raw:
        raise UsageError(f"{args.specs}: no specs found")
    try:
        return [SyntheticSpec.from_dict(d) for d in raw]
    except InvalidSpecError as exc:
        raise UsageError(str(exc)) from exc


def _parse_sweep(text):
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"--ks-sweep: {exc}") from exc
    if not values or any(v < 1 for v in values):
        raise UsageError("--ks-sweep needs positive integers")
    return values


def cmd_bench(args):
    from . import bench

    config = config_from_args(args)
    sweep = _parse_sweep(args.ks_sweep) if args.ks_sweep else None
    specs = load_specs(args)
    args.out_dir.mkdir(parents=True, exist_ok=True)
    if sweep:
        reports = bench.sweep_sampling_rate(specs, config, sweep, args.workers)
        bench.write_sweep_csv(reports, args.out_dir / "sweep.csv")
    else:
        reports = [bench.run_benchmark(specs, config, args.workers)]
    rows = [r for rep in reports for r in rep.rows]
    bench.write_jsonl(rows, args.out_dir / "bench.jsonl")
    bench.write_csv(rows, args.out_dir / "bench.csv")
    if not args.no_plots:
        from .plotting import plot_ks_sweep, plot_psnr_bars

        if sweep:
            plot_ks_sweep(reports, args.out_dir / "sweep.png")
        for rep in reports:
            if rep.ok_rows:
                plot_psnr_bars(rep, args.out_dir / f"psnr_ks{rep.ks}.png")
    for rep in reports:
        s = rep.summary()
        print(
            f"ks={s['ks']:>3}  specs={s['n_specs']}  failed={s['n_failed']}  "
            f"psnr_in={s['psnr_in_db']:.2f} dB  psnr_out={s['psnr_out_db']:.2f} dB  "
            f"time={s['elapsed_ms']:.1f} ms"
        )
    for r in rows:
        if not r.ok:
            print(f"FAIL {r.spec_id} (ks={r.ks}): {r.error}", file=sys.stderr)
    return EXIT_BENCH_FAILED if any(not r.ok for r in rows) else EXIT_OK


def cmd_synth(args):
    specs = load_specs(args)
    args.out_dir.mkdir(parents=True, exist_ok=True)
    for i, spec in enumerate(specs):
        name = spec.spec_id or f"spec-{i:03d}"
        try:
            gt, distorted = generate_synthetic(spec)
        except InvalidSpecError as exc:
            raise UsageError(f"{name}: {exc}") from exc
        save_image(gt, args.out_dir / f"{name}_gt.png")
        save_image(distorted, args.out_dir / f"{name}_distorted.png")
    (args.out_dir / "specs.json").write_text(
        json.dumps([s.to_dict() for s in specs], indent=2) + "\n"
    )
    print(f"wrote {len(specs)} pairs to {args.out_dir}", file=sys.stderr)
    return EXIT_OK


COMMANDS = {
    "correct": cmd_correct,
    "background": cmd_background,
    "psnr": cmd_psnr,
    "bench": cmd_bench,
    "synth": cmd_synth,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"waterfill {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ImageError as exc:
        print(f"waterfill {args.command}: {exc}", file=sys.stderr)
        return EXIT_IMAGE


if __name__ == "__main__":
    sys.exit(main())
