"""Command line interface.

Subcommands:

* ``gc``         the statistic for channel sample files over one topology
* ``roc``        Monte Carlo ROC curves for a (topology x snr) grid
* ``link-value`` per-edge detection value of every link of a topology

Exit codes: 0 success, 2 input parse or configuration failure, 3 numerical
infeasibility, 4 output I/O failure.
"""

from __future__ import annotations

import dataclasses
import json
import sys

import click
import numpy as np

from . import __version__
from .config import ExperimentConfig, config_to_dict, load_config
from .dataio import (
    format_complex,
    format_sci,
    read_channel_file,
    render_link_value_csv,
    render_roc_csv,
    write_files_atomically,
)
from .coherence import ChannelData, gc_statistic, gc_threshold_test
from .errors import (
    ChannelFileError,
    ConfigError,
    ConvergenceError,
    DegenerateInputError,
    DimensionMismatchError,
    ExcessiveExclusionError,
    InfeasiblePartialMatrixError,
    InvalidInputError,
    InvalidThresholdError,
    SingularMatrixError,
    SubmatrixSingularError,
)
from .maxent import DEFAULT_MAX_ITER, DEFAULT_TOL, CompletionConfig
from .simulate import SignalModel, link_value_report, roc_from_scores, run_batch
from .svgplot import roc_overlay_svg
from .topology import Topology

EXIT_PARSE = 2
EXIT_INFEASIBLE = 3
EXIT_IO = 4

_PARSE_ERRORS = (
    ConfigError,
    ChannelFileError,
    InvalidInputError,
    InvalidThresholdError,
    DimensionMismatchError,
)
_NUMERIC_ERRORS = (
    InfeasiblePartialMatrixError,
    ConvergenceError,
    DegenerateInputError,
    SingularMatrixError,
    SubmatrixSingularError,
    ExcessiveExclusionError,
)


def _fail(code: int, message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _guarded(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except _PARSE_ERRORS as exc:
        _fail(EXIT_PARSE, str(exc))
    except _NUMERIC_ERRORS as exc:
        _fail(EXIT_INFEASIBLE, str(exc))
    except OSError as exc:
        _fail(EXIT_IO, str(exc))


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(version=__version__, prog_name="netcoherence")
def main() -> None:
    """Coherence-based multichannel detection over incomplete sensor networks."""


@main.command("gc")
@click.argument("channel_files", nargs=-1, required=True, type=click.Path())
@click.option(
    "--topology", "topology_text", required=True, help="Topology text, e.g. '3: 1-3,2-3'."
)
@click.option("--threshold", type=float, default=None, help="Print an H0/H1 decision line.")
@click.option("--tol", type=float, default=DEFAULT_TOL, show_default=True)
@click.option("--max-iter", type=int, default=DEFAULT_MAX_ITER, show_default=True)
def gc_command(channel_files, topology_text, threshold, tol, max_iter) -> None:
    """Compute the statistic for CHANNEL_FILES (one file per node, 're im' lines)."""

    def run():
        t = Topology.parse(topology_text)
        if len(channel_files) != t.node_count:
            raise InvalidInputError(
                f"topology has {t.node_count} nodes but {len(channel_files)} "
                "channel files were given"
            )
        data = ChannelData.from_vectors([read_channel_file(p) for p in channel_files])
        stat = gc_statistic(data, t, CompletionConfig(tol=tol, max_iter=max_iter))
        click.echo(f"value: {format_sci(stat.value)}")
        click.echo(f"gram_det: {format_sci(stat.gram_det)}")
        click.echo(f"surrogates_used: {stat.surrogates_used}")
        if stat.completion is not None:
            for (i, j), v in stat.completion.surrogates.items():
                click.echo(f"surrogate ({i},{j}): {format_complex(v)}")
            click.echo(f"zero_pattern_residual: {format_sci(stat.completion.zero_pattern_residual)}")
            click.echo(f"refinement_sweeps: {stat.completion.iterations}")
        else:
            click.echo(f"zero_pattern_residual: {format_sci(0.0)}")
        if stat.gram_det <= 1e-12:
            click.echo(
                "warning: Gram matrix is singular to working precision "
                "(channels are fully coherent); statistic pinned at 1",
                err=True,
            )
        if threshold is not None:
            click.echo(f"decision: {gc_threshold_test(stat, threshold).value}")

    _guarded(run)


def _seed_option(fn):
    return click.option(
        "--seed",
        type=click.IntRange(0, 2**64 - 1),
        default=None,
        help="Master seed (beats config master_seed and $COHERENCE_SEED).",
    )(fn)


def _common_experiment_options(fn):
    fn = click.option("--config", "config_path", required=True, type=click.Path())(fn)
    fn = click.option("--out", "out_dir", default=None, type=click.Path(), help="Output directory.")(fn)
    fn = _seed_option(fn)
    fn = click.option(
        "--format",
        "formats",
        default=None,
        help="Comma-separated subset of csv,json,svg (overrides config).",
    )(fn)
    fn = click.option("--workers", type=click.IntRange(1, 64), default=1, show_default=True)(fn)
    return fn


def _resolve(config_path, out_dir, seed, formats) -> ExperimentConfig:
    cfg = load_config(config_path, seed_override=seed)
    if formats is not None:
        wanted = [f.strip() for f in formats.split(",") if f.strip()]
        cfg = parse_formats_override(cfg, wanted)
    if out_dir is None:
        out_dir = cfg.out_dir
    if out_dir is None:
        raise ConfigError("no output directory: use --out or config out_dir")
    return dataclasses.replace(cfg, out_dir=str(out_dir))


def parse_formats_override(cfg: ExperimentConfig, wanted: list[str]) -> ExperimentConfig:
    bad = [f for f in wanted if f not in ("csv", "json", "svg")]
    if bad or not wanted:
        raise ConfigError(f"--format must name csv,json,svg; got {bad or wanted}")
    return dataclasses.replace(cfg, formats=tuple(dict.fromkeys(wanted)))


def _manifest(cfg: ExperimentConfig, results: list[dict]) -> str:
    doc = {
        "tool": {
            "name": "netcoherence",
            "version": __version__,
            "numpy": np.__version__,
            "generator": "Philox4x64, key = (master_seed << 64) | (hyp_bit << 63) | trial_index",
        },
        "config": config_to_dict(cfg),
        "results": results,
    }
    return json.dumps(doc, indent=2, sort_keys=True, allow_nan=True) + "\n"


@main.command("roc")
@_common_experiment_options
def roc_command(config_path, out_dir, seed, formats, workers) -> None:
    """Run the ROC experiment grid from a config file."""

    def run():
        cfg = _resolve(config_path, out_dir, seed, formats)
        completion = CompletionConfig(tol=cfg.tol, max_iter=cfg.max_iter)
        files: dict[str, str] = {}
        results = []
        svg_curves = []
        for ti, topo in enumerate(cfg.topologies):
            for si, snr in enumerate(cfg.snr_db):
                model = SignalModel.equal_snr(
                    cfg.n_samples, topo.node_count, snr, cfg.master_seed
                )
                batch = run_batch(model, topo, cfg.trials, completion, workers=workers)
                curve = roc_from_scores(batch)
                name = f"roc_t{ti}_s{si}.csv"
                if "csv" in cfg.formats:
                    files[name] = render_roc_csv(curve)
                results.append(
                    {
                        "file": name,
                        "topology": topo.to_text(),
                        "snr_db": snr,
                        "auc": curve.auc,
                        "trials": cfg.trials,
                        "h0_excluded": batch.h0_excluded,
                        "h1_excluded": batch.h1_excluded,
                        "max_zero_pattern_residual": batch.diagnostics.max_zero_pattern_residual,
                        "mean_refinement_sweeps": batch.diagnostics.mean_refinement_sweeps,
                    }
                )
                svg_curves.append(
                    (f"t{ti} {snr:g} dB", ti, si, curve.pfa, curve.pd)
                )
                click.echo(
                    f"t{ti} ({topo.to_text()}) at {snr:g} dB: auc = {curve.auc:.6f}, "
                    f"excluded {batch.h0_excluded}+{batch.h1_excluded}"
                )
        if "json" in cfg.formats:
            files["manifest.json"] = _manifest(cfg, results)
        if "svg" in cfg.formats:
            files["roc.svg"] = roc_overlay_svg(svg_curves, title="ROC overlay")
        written = write_files_atomically(cfg.out_dir, files)
        click.echo(f"wrote {len(written)} file(s) to {cfg.out_dir}")

    _guarded(run)


@main.command("link-value")
@_common_experiment_options
@click.option("--pfa", type=click.FloatRange(0.0, 1.0), default=0.1, show_default=True)
def link_value_command(config_path, out_dir, seed, formats, workers, pfa) -> None:
    """Per-edge link values (performance lost when each edge is removed)."""

    def run():
        cfg = _resolve(config_path, out_dir, seed, formats)
        completion = CompletionConfig(tol=cfg.tol, max_iter=cfg.max_iter)
        for topo in cfg.topologies:
            if not topo.is_connected():
                raise ConfigError(f"link-value needs connected topologies; got {topo.to_text()!r}")
        files: dict[str, str] = {}
        results = []
        for ti, topo in enumerate(cfg.topologies):
            for si, snr in enumerate(cfg.snr_db):
                model = SignalModel.equal_snr(
                    cfg.n_samples, topo.node_count, snr, cfg.master_seed
                )
                rows = link_value_report(
                    model, topo, cfg.trials, completion, pfa_target=pfa, workers=workers
                )
                name = f"link_value_t{ti}_s{si}.csv"
                if "csv" in cfg.formats:
                    files[name] = render_link_value_csv(rows, pfa_target=pfa)
                results.append(
                    {
                        "file": name,
                        "topology": topo.to_text(),
                        "snr_db": snr,
                        "pfa": pfa,
                        "edges": len(rows),
                        "critical_edges": sum(1 for r in rows if r.critical),
                    }
                )
                for row in rows:
                    i, j = row.edge
                    if row.critical:
                        click.echo(f"t{ti} s{si} edge {i}-{j}: critical (disconnects)")
                    else:
                        click.echo(
                            f"t{ti} s{si} edge {i}-{j}: pd_gain = {row.pd_gain_at_pfa:+.6f}, "
                            f"auc_gain = {row.auc_gain:+.6f}"
                        )
        if "json" in cfg.formats:
            files["manifest.json"] = _manifest(cfg, results)
        written = write_files_atomically(cfg.out_dir, files)
        click.echo(f"wrote {len(written)} file(s) to {cfg.out_dir}")

    _guarded(run)


if __name__ == "__main__":
    main()
