"""Command-line interface.

Subcommands: filter, denoise, graph, augment.  Exit codes: 0 success,
1 usage error, 2 I/O failure, 3 parameter violation.  Step reports are
line-oriented key=value so scripts can parse them without a library.

--threads only fans work out across files in `augment`; per-image math is
vectorized and gives identical bytes whatever the thread count.
"""
from __future__ import annotations

import argparse
import shutil
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .denoise import denoise
from .extract import image_to_graph
from .io import (graph_to_image, read_image, write_graph_csv, write_graph_dot,
                 write_image, write_label_matrix)
from .merging import filter_image
from .params import DenoiseParams, FilterParams

IMAGE_EXTS = {".png", ".ppm", ".pnm"}


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad usage by default; the interface contract wants 1
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _add_filter_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--target-res", type=float, default=0.6, metavar="R",
                   help="resolution the merge loop stops at (default 0.6)")
    p.add_argument("--dr", type=float, default=0.1, help="per-step resolution decrement")
    p.add_argument("--d0", type=float, default=0.03,
                   help="smallest color distance perceived at full resolution")
    p.add_argument("--alpha", type=float, default=0.04, help="size-adjustment steepness")
    p.add_argument("--beta", type=float, default=10.0, help="size-adjustment offset")
    p.add_argument("--threshold", choices=["t1", "t2"], default="t2",
                   help="threshold form (default t2)")
    p.add_argument("--rm", type=float, default=0.1, help="t2 ramp floor")


def _add_denoise_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--lambda", dest="lam", type=float, default=1.0,
                   help="fidelity weight")
    p.add_argument("--sigmoid-alpha", type=float, default=50.0,
                   help="sharpness of the sigmoid edge surrogate")
    p.add_argument("--steps", type=int, default=200, help="descent iterations")
    p.add_argument("--step-size", type=float, default=1e-5, help="descent step size")


def _add_threads_arg(p: argparse.ArgumentParser) -> None:
    p.add_argument("--threads", type=int, default=1,
                   help="worker threads for batch work (per-image output is "
                        "identical for any value)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ragfilter",
                     description="Graph-driven image filtering and augmentation")
    sub = parser.add_subparsers(dest="command", required=True)

    f = sub.add_parser("filter", help="filter one image")
    f.add_argument("input")
    f.add_argument("output")
    _add_filter_args(f)
    f.add_argument("--denoise", action="store_true",
                   help="run the variational smoother before filtering")
    _add_denoise_args(f)
    f.add_argument("--export-graph", metavar="CSV", help="write the final edge table")
    f.add_argument("--export-dot", metavar="DOT", help="write a Graphviz rendering")
    f.add_argument("--export-labels", metavar="PATH",
                   help="write the final label matrix (one CSV row per pixel row)")
    f.add_argument("--report", metavar="PATH",
                   help="write per-step key=value lines instead of stdout only")
    f.add_argument("--progression", action="store_true",
                   help="also write one image per visited resolution")
    _add_threads_arg(f)
    f.set_defaults(func=cmd_filter)

    d = sub.add_parser("denoise", help="run only the variational smoother")
    d.add_argument("input")
    d.add_argument("output")
    _add_denoise_args(d)
    d.add_argument("--loss-history", metavar="PATH",
                   help="where to write the loss trace (default: <output>_loss.txt)")
    _add_threads_arg(d)
    d.set_defaults(func=cmd_denoise)

    g = sub.add_parser("graph", help="extract a region graph to CSV")
    g.add_argument("input")
    g.add_argument("output", help="edge CSV path")
    _add_filter_args(g)
    g.add_argument("--initial", action="store_true",
                   help="export the unfiltered full-resolution graph")
    g.add_argument("--export-dot", metavar="DOT")
    g.add_argument("--export-labels", metavar="PATH")
    _add_threads_arg(g)
    g.set_defaults(func=cmd_graph)

    a = sub.add_parser("augment", help="filter a whole directory tree")
    a.add_argument("input_dir")
    a.add_argument("output_dir")
    _add_filter_args(a)
    a.add_argument("--manifest", metavar="PATH",
                   help="pair manifest path (default: <output_dir>/manifest.csv)")
    _add_threads_arg(a)
    a.set_defaults(func=cmd_augment)

    return parser


def _filter_params(ns) -> FilterParams:
    return FilterParams(
        target_resolution=ns.target_res,
        dr=ns.dr,
        d0=ns.d0,
        alpha=ns.alpha,
        beta=ns.beta,
        threshold_form=ns.threshold,
        r_m=ns.rm,
    ).validate()


def _denoise_params(ns) -> DenoiseParams:
    return DenoiseParams(
        lam=ns.lam,
        sigmoid_alpha=ns.sigmoid_alpha,
        step_size=ns.step_size,
        max_iters=ns.steps,
    ).validate()


def _report_lines(reports) -> list[str]:
    lines = []
    for i, rep in enumerate(reports, start=1):
        lines.append(
            f"step={i} r={rep.resolution_after:.6f} tau={rep.threshold_value:.6f} "
            f"merges={rep.merges_performed} nodes={rep.node_count_after}")
    return lines


def cmd_filter(ns) -> int:
    x = read_image(ns.input)
    if ns.denoise:
        x = denoise(x, _denoise_params(ns)).image
    params = _filter_params(ns)
    out_path = Path(ns.output)

    progression = []
    def on_step(g, rep):
        if ns.progression:
            stem = out_path.with_suffix("")
            percent = round(rep.resolution_after * 100)
            target = Path(f"{stem}_r{percent}{out_path.suffix}")
            write_image(graph_to_image(g), target)
            progression.append(target)

    result = filter_image(x, params, on_step=on_step)
    write_image(result.image, out_path)

    if ns.export_graph:
        write_graph_csv(result.graph, ns.export_graph)
    if ns.export_dot:
        write_graph_dot(result.graph, ns.export_dot)
    if ns.export_labels:
        write_label_matrix(result.graph.labels, ns.export_labels)

    lines = _report_lines(result.reports)
    for line in lines:
        print(line)
    print(f"output={out_path} nodes={result.graph.node_count}")
    if ns.report:
        Path(ns.report).write_text("\n".join(lines) + "\n", encoding="ascii")
    return 0


def cmd_denoise(ns) -> int:
    x = read_image(ns.input)
    result = denoise(x, _denoise_params(ns))
    out_path = Path(ns.output)
    write_image(result.image, out_path)
    loss_path = Path(ns.loss_history) if ns.loss_history else \
        out_path.with_suffix("").with_name(out_path.with_suffix("").name + "_loss.txt")
    loss_path.write_text(
        "\n".join(f"{v:.17g}" for v in result.loss_history) + "\n", encoding="ascii")
    if result.increased_steps:
        print(f"warning: loss rose at {len(result.increased_steps)} step(s); "
              f"consider a smaller --step-size", file=sys.stderr)
    print(f"output={out_path} iters={len(result.loss_history) - 1} "
          f"final_loss={result.loss_history[-1]:.17g}")
    return 0


def cmd_graph(ns) -> int:
    x = read_image(ns.input)
    if ns.initial:
        g = image_to_graph(x)
    else:
        g = filter_image(x, _filter_params(ns)).graph
    write_graph_csv(g, ns.output)
    if ns.export_dot:
        write_graph_dot(g, ns.export_dot)
    if ns.export_labels:
        write_label_matrix(g.labels, ns.export_labels)
    print(f"output={ns.output} nodes={g.node_count} edges={g.edge_count}")
    return 0


def _augment_one(src: Path, in_root: Path, out_root: Path, params: FilterParams) -> tuple[str, str]:
    rel = src.relative_to(in_root)
    suffix = f"_r{round(params.target_resolution * 100)}"
    out_orig = out_root / rel
    out_filt = out_root / rel.with_name(rel.stem + suffix + rel.suffix)
    x = read_image(src)  # may raise; caller logs and skips
    result = filter_image(x, params)
    out_orig.parent.mkdir(parents=True, exist_ok=True)
    shutil.copyfile(src, out_orig)  # byte-identical original, no re-encode
    write_image(result.image, out_filt)
    return str(rel), str(rel.with_name(rel.stem + suffix + rel.suffix))


def cmd_augment(ns) -> int:
    in_root = Path(ns.input_dir)
    out_root = Path(ns.output_dir)
    if not in_root.is_dir():
        raise OSError(f"input directory not found: {in_root}")
    if in_root.resolve() == out_root.resolve():
        raise ValueError("output directory must differ from the input directory")
    if ns.threads < 1:
        raise ValueError(f"--threads must be >= 1, got {ns.threads}")
    params = _filter_params(ns)

    files = sorted(p for p in in_root.rglob("*")
                   if p.is_file() and p.suffix.lower() in IMAGE_EXTS)
    if not files:
        print("error: no images found", file=sys.stderr)
        return 2

    out_root.mkdir(parents=True, exist_ok=True)
    pairs: list[tuple[str, str]] = []
    failures = 0

    def run(src: Path):
        try:
            return _augment_one(src, in_root, out_root, params)
        except (OSError, ValueError) as e:
            print(f"warning: skipping {src}: {e}", file=sys.stderr)
            return None

    if ns.threads == 1:
        outcomes = [run(src) for src in files]
    else:
        with ThreadPoolExecutor(max_workers=ns.threads) as pool:
            outcomes = list(pool.map(run, files))
    for outcome in outcomes:
        if outcome is None:
            failures += 1
        else:
            pairs.append(outcome)

    if not pairs:
        print("error: every input failed", file=sys.stderr)
        return 2

    pairs.sort()
    manifest = Path(ns.manifest) if ns.manifest else out_root / "manifest.csv"
    manifest.write_text(
        "original,filtered\n" + "".join(f"{a},{b}\n" for a, b in pairs),
        encoding="utf-8")
    print(f"augmented={len(pairs)} skipped={failures} manifest={manifest}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        return ns.func(ns)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def entrypoint() -> None:
    sys.exit(main())
