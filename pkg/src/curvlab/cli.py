"""The curvlab command: verify, certify, tables, flow.

Exit codes: 0 success (flags allowed), 1 check failures, 2 usage errors,
3 I/O errors.
"""

from __future__ import annotations

import csv
import io
import sys

import click
import numpy as np

from . import __version__
from .certificate import alpha0_certificate
from .curvature_core import bianchi_project, decompose
from .errors import ArgumentError
from .lie_basis import wedge_count
from .model_spaces import sphere_product, w_cp2
from .potential_flow import fixed_point_residual, flow_run, flow_state
from .report import canonical_json, clusters_to_csv, render_report
from .shi_bounds import format_table, table_rows
from .spectral_decomp import (
    decomposition_dims,
    eigen_report,
    hessian_matrix,
    weyl_basis,
)
from .suite import DEFAULT_TOLERANCES, run_suite


def _parse_tolerances(pairs) -> dict:
    out = {}
    for pair in pairs:
        name, sep, value = pair.partition("=")
        if not sep or not name:
            raise click.UsageError(f"--tol expects NAME=VALUE, got {pair!r}")
        if name not in DEFAULT_TOLERANCES:
            known = ", ".join(sorted(DEFAULT_TOLERANCES))
            raise click.UsageError(f"unknown tolerance {name!r}; known: {known}")
        try:
            out[name] = float(value)
        except ValueError:
            raise click.UsageError(f"--tol value for {name!r} is not a number")
    return out


def _write_output(text: str, out) -> None:
    if out is None:
        click.echo(text, nl=False)
        return
    try:
        with open(out, "w") as fh:
            fh.write(text)
    except OSError as exc:
        click.echo(f"cannot write {out}: {exc}", err=True)
        sys.exit(3)


@click.group()
@click.version_option(version=__version__, prog_name="curvlab")
def main():
    """Verification toolkit for algebraic curvature operators on so(n)."""


@main.command()
@click.option(
    "--dim", "dims", multiple=True, type=int,
    help="Dimension to check; repeatable. Default: 4..11.",
)
@click.option("--seed", default=0, show_default=True, type=int)
@click.option(
    "--tol", "tols", multiple=True, metavar="NAME=VALUE",
    help="Tolerance override; repeatable.",
)
@click.option(
    "--jobs", type=int, envvar="CURVLAB_JOBS", default=1, show_default=True,
    help="Worker threads (env CURVLAB_JOBS).",
)
@click.option("--cluster-tol", default=1e-8, show_default=True, type=float)
@click.option("--out", type=click.Path(dir_okay=False), help="Write report here.")
@click.option(
    "--format", "fmt", default="json", show_default=True,
    type=click.Choice(["json", "markdown", "csv"]),
)
@click.option("--include-runtime", is_flag=True, help="Add runtime to the JSON.")
def verify(dims, seed, tols, jobs, cluster_tol, out, fmt, include_runtime):
    """Run the verification suite and emit its report."""
    try:
        report = run_suite(
            dims=dims or range(4, 12),
            seed=seed,
            tolerances=_parse_tolerances(tols),
            jobs=jobs,
            cluster_tol=cluster_tol,
        )
    except ArgumentError as exc:
        raise click.UsageError(str(exc))
    _write_output(render_report(report, fmt, include_runtime=include_runtime), out)
    counts = report.counts
    click.echo(
        f"checks: {counts['pass']} pass, {counts['fail']} fail, "
        f"{counts['flag']} flag",
        err=True,
    )
    sys.exit(report.exit_code)


def _certificate_markdown(cert) -> str:
    lines = [f"# angle-margin certificate (n={cert.n}, mode {cert.mode})", ""]
    lines.append("| field | value |")
    lines.append("| --- | --- |")
    payload = cert.to_json_dict()
    for key in sorted(payload):
        if key == "flags":
            continue
        lines.append(f"| {key} | {payload[key]} |")
    if cert.flags:
        lines.append("")
        lines.append("Flags:")
        for flag in cert.flags:
            lines.append(f"- {flag}")
    return "\n".join(lines) + "\n"


@main.command()
@click.option("--dim", default=11, show_default=True, type=int)
@click.option(
    "--mode", default="recomputed", show_default=True,
    type=click.Choice(["recomputed", "quoted", "paper-constants"]),
)
@click.option("--out", type=click.Path(dir_okay=False))
@click.option(
    "--format", "fmt", default="json", show_default=True,
    type=click.Choice(["json", "markdown"]),
)
def certify(dim, mode, out, fmt):
    """Emit the full angle-margin certificate chain for one dimension."""
    try:
        cert = alpha0_certificate(dim, mode)
    except ArgumentError as exc:
        raise click.UsageError(str(exc))
    if fmt == "json":
        text = canonical_json(cert.to_json_dict())
    else:
        text = _certificate_markdown(cert)
    _write_output(text, out)
    click.echo(f"verdict: {cert.verdict} ({len(cert.flags)} flags)", err=True)


def _blocks_table(n: int, split: int, fmt: str) -> str:
    table = decomposition_dims(n, split)
    rows = list(table.blocks.items())
    if fmt == "markdown":
        lines = [
            f"| block | dimension | (n={n}, split {table.k}+{table.l}, "
            f"total {table.weyl_total}) |",
            "| --- | --- | --- |",
        ]
        lines += [f"| {label} | {dim} | |" for label, dim in rows]
        return "\n".join(lines) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["block", "dimension"])
    writer.writerows(rows)
    return buf.getvalue()


@main.command()
@click.option(
    "--table", "which", default="shi", show_default=True,
    type=click.Choice(["shi", "hessian", "blocks"]),
)
@click.option(
    "--dim", "dims", multiple=True, type=int,
    help="shi: table rows (default 11 10 9 8); hessian/blocks: one dimension.",
)
@click.option("--split", default=None, type=int, help="blocks: the k of SO(k)xSO(l).")
@click.option("--cluster-tol", default=1e-8, show_default=True, type=float)
@click.option(
    "--format", "fmt", default="markdown", show_default=True,
    type=click.Choice(["markdown", "csv"]),
)
@click.option("--out", type=click.Path(dir_okay=False))
def tables(which, dims, split, cluster_tol, fmt, out):
    """Reproduce a catalogued table: derivative bounds, Hessian clusters,
    or decomposition dimensions."""
    try:
        if which == "shi":
            text = format_table(table_rows(tuple(dims) or (11, 10, 9, 8)), fmt)
        elif which == "hessian":
            if len(dims) != 1:
                raise click.UsageError("hessian table needs exactly one --dim")
            n = dims[0]
            basis = weyl_basis(n)
            rep = eigen_report(hessian_matrix(w_cp2(n), basis), cluster_tol)
            if fmt == "csv":
                text = clusters_to_csv(rep)
            else:
                lines = ["| mean | multiplicity |", "| --- | --- |"]
                lines += [f"| {mean!r} | {mult} |" for mean, mult in rep.clusters]
                text = "\n".join(lines) + "\n"
        else:
            if len(dims) != 1:
                raise click.UsageError("blocks table needs exactly one --dim")
            n = dims[0]
            text = _blocks_table(n, split if split is not None else n // 2, fmt)
    except ArgumentError as exc:
        raise click.UsageError(str(exc))
    _write_output(text, out)


@main.command()
@click.option("--dim", default=11, show_default=True, type=int)
@click.option("--steps", default=500, show_default=True, type=int)
@click.option("--dt", default=None, type=float, help="Fixed step; default adaptive.")
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--sample-every", default=10, show_default=True, type=int)
@click.option(
    "--start", default="random", show_default=True,
    type=click.Choice(["random", "product"]),
    help="random unit Weyl operator, or the Weyl part of a sphere product.",
)
@click.option("--out", type=click.Path(dir_okay=False), help="Trajectory CSV.")
def flow(dim, steps, dt, seed, sample_every, start, out):
    """Run the projected potential flow and dump the sampled trajectory."""
    try:
        if start == "product":
            w = decompose(sphere_product(dim // 2, dim - dim // 2)).weyl.mat
        else:
            rng = np.random.default_rng(seed)
            s = rng.standard_normal((wedge_count(dim),) * 2)
            w = decompose(bianchi_project(0.5 * (s + s.T)).mat).weyl.mat
        w = w / np.linalg.norm(w)
        state = flow_run(
            flow_state(w), steps=steps, dt=dt, sample_every=max(sample_every, 1)
        )
    except ArgumentError as exc:
        raise click.UsageError(str(exc))
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["t", "P", "residual"])
    writer.writerows(state.history)
    _write_output(buf.getvalue(), out)
    click.echo(
        f"final: t={state.t:.4f} P={state.potential:.12f} "
        f"residual={fixed_point_residual(state.w):.3e}",
        err=True,
    )


if __name__ == "__main__":
    main()
