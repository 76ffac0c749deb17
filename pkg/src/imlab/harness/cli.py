"""Command line interface: experiments, geometry ops, oracle queries.

Polygon files use the JSON wire format {"vertices": [[re, im], ...],
"boundary_resolution": r}; experiment configs are JSON documents (see
configs/ for shipped examples).
"""

from __future__ import annotations

import json
import sys

import click

from imlab import __version__
from imlab.geometry import (
    PlanarDomain,
    compactly_contained,
    envelope,
    erode,
    hausdorff,
)


def _load_polygon(path: str) -> PlanarDomain:
    with open(path, "r", encoding="utf-8") as fh:
        return PlanarDomain.from_json(fh.read())


@click.group()
@click.version_option(version=__version__, prog_name="imlab")
def main() -> None:
    """Numerical laboratory for invariant pseudodistances."""


@main.command()
@click.argument("config_path", type=click.Path(exists=True))
@click.option("--output-dir", default="out", show_default=True,
              help="Directory for report.csv / report.json / plot_data.csv.")
def run(config_path: str, output_dir: str) -> None:
    """Run a convergence experiment from a JSON config."""
    from imlab.harness.config import ExperimentConfig
    from imlab.harness.runner import HypothesisError, run_convergence_experiment

    config = ExperimentConfig.from_file(config_path)
    try:
        report = run_convergence_experiment(config)
    except HypothesisError as exc:
        click.echo(f"ABORT: {exc}", err=True)
        sys.exit(2)
    report.write(output_dir)
    click.echo(f"max tail gap: {report.summary['max_tail_gap']:.3e} "
               f"(tolerance {report.summary['tolerance']:.1e})")
    click.echo(f"reports written to {output_dir}/")
    sys.exit(0 if report.all_pass else 1)


@main.command()
@click.argument("config_path", type=click.Path(exists=True))
@click.option("--output", default="sandwich.json", show_default=True)
def sandwich(config_path: str, output: str) -> None:
    """Build, re-verify and evaluate an interleaving certificate."""
    from imlab.harness.config import ExperimentConfig
    from imlab.harness.runner import _build_sequence, _run_sandwich

    config = ExperimentConfig.from_file(config_path)
    if config.sandwich is None:
        click.echo("config lacks a 'sandwich' section", err=True)
        sys.exit(2)
    limit = config.build_limit_domain()
    dseq = _build_sequence(config, limit)
    summary = _run_sandwich(config, limit, dseq, config.solver_config())
    with open(output, "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=1)
    ok = summary["reverified"] and summary["chain_failures"] == 0
    click.echo(f"entries={summary['entries']} case2={summary['case2_events']} "
               f"reverified={summary['reverified']} failures={summary['chain_failures']}")
    sys.exit(0 if ok else 1)


@main.group()
def geom() -> None:
    """Compact-set geometry operations on polygon JSON files."""


@geom.command("envelope")
@click.argument("polygon", type=click.Path(exists=True))
@click.argument("eps", type=float)
def geom_envelope(polygon: str, eps: float) -> None:
    dom = _load_polygon(polygon)
    click.echo(envelope(dom, eps).to_json())


@geom.command("erode")
@click.argument("polygon", type=click.Path(exists=True))
@click.argument("eps", type=float)
def geom_erode(polygon: str, eps: float) -> None:
    result = erode(_load_polygon(polygon), eps)
    if result.domain is None:
        click.echo(json.dumps({"status": result.status}))
    else:
        payload = result.domain.as_dict()
        payload["status"] = result.status
        payload["component_count"] = result.component_count
        click.echo(json.dumps(payload))


@geom.command("hausdorff")
@click.argument("polygon_a", type=click.Path(exists=True))
@click.argument("polygon_b", type=click.Path(exists=True))
def geom_hausdorff(polygon_a: str, polygon_b: str) -> None:
    res = hausdorff(_load_polygon(polygon_a), _load_polygon(polygon_b))
    click.echo(json.dumps({
        "distance": res.distance,
        "directed_a_to_b": res.directed_a_to_b,
        "directed_b_to_a": res.directed_b_to_a,
        "resolution_bound": res.resolution_bound,
    }))


@geom.command("contained")
@click.argument("polygon_a", type=click.Path(exists=True))
@click.argument("polygon_b", type=click.Path(exists=True))
def geom_contained(polygon_a: str, polygon_b: str) -> None:
    res = compactly_contained(_load_polygon(polygon_a), _load_polygon(polygon_b))
    click.echo(json.dumps({"holds": res.holds, "margin": res.margin}))


@main.command()
@click.argument("polygon", type=click.Path(exists=True))
@click.option("--pair", required=True,
              help="z and w as 'zr,zi,wr,wi'.")
@click.option("--system", default="k", show_default=True,
              type=click.Choice(["c", "l", "k", "g"]))
@click.option("--basepoint", default=None, help="'x,y' interior basepoint.")
def oracle(polygon: str, pair: str, system: str, basepoint: str | None) -> None:
    """Conformal-oracle value of a system on a simply connected polygon."""
    from imlab.conformal import build_riemann_map, pullback_metric

    dom = _load_polygon(polygon)
    zr, zi, wr, wi = (float(t) for t in pair.split(","))
    z0 = None
    if basepoint:
        x, y = (float(t) for t in basepoint.split(","))
        z0 = complex(x, y)
    rmap = build_riemann_map(dom, z0)
    est = pullback_metric(rmap, complex(zr, zi), complex(wr, wi), system)
    click.echo(json.dumps({
        "system": system,
        "lower": est.lower,
        "upper": est.upper,
        "midpoint": est.midpoint,
        "map_accuracy": rmap.accuracy,
    }))


if __name__ == "__main__":
    main()
