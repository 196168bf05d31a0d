"""Command-line entry point.

Subcommands mirror the pipeline stages (``normalize``, ``extract``,
``refine-emit``, ``run-all``) plus ``validate`` for auditing a Turtle graph
and ``agreement`` for annotation-matrix kappa values. Exit codes: 0 success,
1 input error, 2 invariant violation, 3 linking failure under strict mode.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import metrics, pipeline
from .corpus_io import CorpusError
from .kg_emit import GraphError, validate_graph
from .linking import LinkingUnavailable
from .preprocess import PreprocessError
from .turtle import TurtleParseError

EXIT_INPUT = 1
EXIT_INVARIANT = 2
EXIT_LINKING = 3

_PATH_KEYS = {"posts", "first_pass", "second_pass", "coref", "vectors", "patterns"}


def _build_config(ctx: click.Context, **overrides) -> pipeline.PipelineConfig:
    params = ctx.obj
    cfg = (
        pipeline.load_config(params["config"])
        if params.get("config")
        else pipeline.PipelineConfig()
    )
    if params.get("seed") is not None:
        cfg.seed = params["seed"]
    if params.get("jobs") is not None:
        cfg.jobs = params["jobs"]
    if params.get("out_dir") is not None:
        cfg.out_dir = Path(params["out_dir"])
    for key, value in overrides.items():
        if value is not None:
            setattr(cfg, key, Path(value) if key in _PATH_KEYS else value)
    return cfg


def _run(stage, cfg: pipeline.PipelineConfig) -> None:
    try:
        report = stage(cfg)
    except (CorpusError, PreprocessError, FileNotFoundError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_INPUT)
    except GraphError as exc:
        click.echo(f"invariant violation: {exc}", err=True)
        sys.exit(EXIT_INVARIANT)
    except LinkingUnavailable as exc:
        click.echo(f"linking service failure: {exc}", err=True)
        sys.exit(EXIT_LINKING)
    click.echo(json.dumps(report, indent=2, ensure_ascii=False))
    if report.get("violations"):
        sys.exit(EXIT_INVARIANT)


@click.group()
@click.option("--config", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--seed", type=int, default=None, help="Fixes all stochastic steps.")
@click.option("--jobs", type=int, default=None, help="Worker threads for parallel stages.")
@click.option("--out-dir", type=click.Path(file_okay=False), default=None)
@click.pass_context
def main(ctx: click.Context, config, seed, jobs, out_dir) -> None:
    ctx.obj = {"config": config, "seed": seed, "jobs": jobs, "out_dir": out_dir}


def _io_options(fn):
    for opt in reversed(
        [
            click.option("--posts", type=click.Path(), default=None),
            click.option("--first-pass", "first_pass", type=click.Path(), default=None),
            click.option("--second-pass", "second_pass", type=click.Path(), default=None),
            click.option("--coref", type=click.Path(), default=None),
            click.option("--vectors", type=click.Path(), default=None),
            click.option("--patterns", type=click.Path(), default=None),
            click.option("--dedup-threshold", "dedup_threshold", type=float, default=None),
            click.option("--linking-endpoint", "linking_endpoint", default=None),
            click.option("--linking-confidence", "linking_confidence", type=float, default=None),
            click.option("--no-linking", "no_linking", is_flag=True, default=False),
            click.option("--strict-linking", "strict_linking", is_flag=True, default=None),
            click.option(
                "--quantifiers",
                type=click.Choice(["annotate", "inline"]),
                default=None,
            ),
            click.option(
                "--keep-interrogative", "keep_interrogative", is_flag=True, default=None
            ),
        ]
    ):
        fn = opt(fn)
    return fn


def _apply_linking_flags(cfg, linking_endpoint, no_linking) -> None:
    if linking_endpoint:
        cfg.linking_endpoint = linking_endpoint
        cfg.linking_enabled = True
    if no_linking:
        cfg.linking_enabled = False


@main.command()
@_io_options
@click.pass_context
def normalize(ctx, no_linking, linking_endpoint, **overrides):
    """Normalize posts and drop near-duplicates."""
    cfg = _build_config(ctx, **overrides)
    _apply_linking_flags(cfg, linking_endpoint, no_linking)
    _run(pipeline.stage_normalize, cfg)


@main.command()
@_io_options
@click.pass_context
def extract(ctx, no_linking, linking_endpoint, **overrides):
    """Extract candidate entities and surface triples."""
    cfg = _build_config(ctx, **overrides)
    _apply_linking_flags(cfg, linking_endpoint, no_linking)
    _run(pipeline.stage_extract, cfg)


@main.command("refine-emit")
@_io_options
@click.pass_context
def refine_emit(ctx, no_linking, linking_endpoint, **overrides):
    """Refine entities, cluster relations, emit the Turtle graph."""
    cfg = _build_config(ctx, **overrides)
    _apply_linking_flags(cfg, linking_endpoint, no_linking)
    _run(pipeline.stage_refine_emit, cfg)


@main.command("run-all")
@_io_options
@click.pass_context
def run_all(ctx, no_linking, linking_endpoint, **overrides):
    """Run the three stages in sequence."""
    cfg = _build_config(ctx, **overrides)
    _apply_linking_flags(cfg, linking_endpoint, no_linking)

    def composed(config):
        report = {}
        report["normalize"] = pipeline.stage_normalize(config)
        report["extract"] = pipeline.stage_extract(config)
        report["refine_emit"] = pipeline.stage_refine_emit(config)
        report["violations"] = report["refine_emit"]["violations"]
        return report

    _run(composed, cfg)


@main.command()
@click.argument("ttl", type=click.Path(exists=True, dir_okay=False))
def validate(ttl):
    """Audit a reified-statement Turtle file."""
    try:
        report = validate_graph(ttl)
    except TurtleParseError as exc:
        click.echo(f"parse error: {exc}", err=True)
        sys.exit(EXIT_INPUT)
    click.echo(report.to_json())
    if not report.ok:
        sys.exit(EXIT_INVARIANT)


@main.command()
@click.argument("csv", type=click.Path(exists=True, dir_okay=False))
def agreement(csv):
    """Fleiss kappa over an item x category count matrix (CSV)."""
    try:
        matrix = metrics.load_annotation_csv(csv)
        kappa = metrics.fleiss_kappa(matrix)
    except (ValueError, metrics.DegenerateAgreementError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_INPUT)
    click.echo(
        json.dumps(
            {
                "fleiss_kappa": round(kappa, 6),
                "items": int(matrix.counts.shape[0]),
                "raters": matrix.n_raters,
            }
        )
    )


if __name__ == "__main__":
    main()
