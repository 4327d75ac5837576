"""Command-line client for the covercert service.

The CLI never computes anything itself: every command is an HTTP call.  By
default it mounts the FastAPI app in-process (no server needed); pass
--url to talk to a remote instance instead.

Exit codes: 0 = pass, 1 = inequality/verification failure, 2 = usage or
geometry error.
"""

from __future__ import annotations

import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import click
import httpx

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_ERROR = 2


@dataclass
class RunConfig:
    url: Optional[str]
    fmt: str
    tol: Optional[float]
    seed: int
    jobs: int
    budget: Optional[int]

    def client(self) -> httpx.Client:
        if self.url:
            return httpx.Client(base_url=self.url, timeout=600.0)
        # mount the app in-process; no server required
        import warnings

        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            from fastapi.testclient import TestClient

        from .service import app

        return TestClient(app, raise_server_exceptions=False)


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise click.ClickException(str(exc))


def _call(cfg: RunConfig, method: str, path: str, payload: Optional[dict] = None):
    with cfg.client() as client:
        try:
            resp = client.request(method, path, json=payload)
        except httpx.HTTPError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_ERROR)
    if resp.status_code >= 400:
        try:
            detail = resp.json()
        except json.JSONDecodeError:
            detail = {"error": "HTTPError", "message": resp.text}
        click.echo(
            f"error: {detail.get('error', resp.status_code)}: "
            f"{detail.get('message', detail)}",
            err=True,
        )
        sys.exit(EXIT_ERROR)
    return resp.json()


def _flatten(data: dict, prefix: str = ""):
    for key, value in data.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            yield from _flatten(value, f"{name}.")
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            for i, item in enumerate(value):
                yield from _flatten(item, f"{name}[{i}].")
        else:
            yield name, value


def _emit(cfg: RunConfig, data: dict):
    if cfg.fmt == "json":
        click.echo(json.dumps(data, indent=2, sort_keys=True))
    elif cfg.fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["key", "value"])
        for key, value in _flatten(data):
            writer.writerow([key, value])
        click.echo(buf.getvalue(), nl=False)
    else:  # table
        rows = list(_flatten(data))
        width = max(len(k) for k, _ in rows)
        for key, value in rows:
            click.echo(f"{key:<{width}}  {value}")


@click.group()
@click.option("--url", default=None, help="remote service URL (default: in-process)")
@click.option(
    "--format",
    "fmt",
    type=click.Choice(["json", "table", "csv"]),
    default="json",
    show_default=True,
)
@click.option("--tol", type=float, default=None, help="tolerance override")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--jobs", type=int, default=1, show_default=True)
@click.option(
    "--budget",
    type=int,
    default=None,
    help="enumeration budget (or env COVERCERT_BUDGET)",
)
@click.pass_context
def main(ctx, url, fmt, tol, seed, jobs, budget):
    """Verify uniform-cover volume inequalities on convex polytopes."""
    if budget is None and "COVERCERT_BUDGET" in os.environ:
        budget = int(os.environ["COVERCERT_BUDGET"])
    if tol is not None and tol <= 0:
        raise click.UsageError("--tol must be positive")
    ctx.obj = RunConfig(url=url, fmt=fmt, tol=tol, seed=seed, jobs=jobs, budget=budget)


@main.command()
@click.argument("body_file", type=click.Path(exists=True))
@click.pass_obj
def volume(cfg: RunConfig, body_file):
    """Exact rational volume of a body JSON file."""
    data = _call(cfg, "POST", "/volume", {"body": _load_json(body_file)})
    if cfg.fmt == "json":
        _emit(cfg, data)
    else:
        click.echo(f"{data['volume']} ({data['decimal']})")


def _check_payload(cfg, body, cover, weighted, system):
    payload = {"body": body}
    if cover:
        payload["cover"] = cover
    if weighted:
        payload["weighted"] = _load_json(weighted)
    if system:
        payload["system"] = _load_json(system)
    if cfg.tol is not None:
        payload["tol"] = cfg.tol
    return payload


@main.command()
@click.argument(
    "kind",
    type=click.Choice(
        [
            "bt",
            "dual-bt",
            "lw",
            "meyer",
            "weighted-bt",
            "weighted-dual-bt",
            "ball",
            "dual-ball",
        ]
    ),
)
@click.option("--body", "body_file", required=True, type=click.Path(exists=True))
@click.option("--cover", default=None, help='cover text, e.g. "1,2;1,3;2,3"')
@click.option("--weighted", default=None, type=click.Path(exists=True))
@click.option("--system", default=None, type=click.Path(exists=True))
@click.option(
    "--all-covers",
    nargs=2,
    type=int,
    default=None,
    metavar="N S",
    help="run the check over every s-uniform cover of [n]",
)
@click.pass_obj
def check(cfg: RunConfig, kind, body_file, cover, weighted, system, all_covers):
    """Check one inequality; exit 0 on pass, 1 on fail."""
    body = _load_json(body_file)
    if all_covers:
        if kind not in ("bt", "dual-bt"):
            raise click.UsageError("--all-covers applies to bt/dual-bt only")
        n, s = all_covers
        listing = _call(
            cfg,
            "POST",
            "/covers",
            {"n": n, "s": s, "max_parts": 2 * n, "budget": cfg.budget},
        )["covers"]

        def one(text):
            payload = _check_payload(cfg, body, text, None, None)
            return text, _call(cfg, "POST", f"/check/{kind}", payload)

        if cfg.jobs > 1:
            with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
                results = list(pool.map(one, listing))
        else:
            results = [one(text) for text in listing]
        ok = all(rep["pass"] for _, rep in results)
        if cfg.fmt == "csv":
            buf = io.StringIO()
            writer = csv.writer(buf)
            writer.writerow(["cover", "slack", "pass"])
            for text, rep in results:
                writer.writerow([text, rep["slack"], rep["pass"]])
            click.echo(buf.getvalue(), nl=False)
        elif cfg.fmt == "table":
            for text, rep in results:
                click.echo(f"{text}  slack={rep['slack']}  pass={rep['pass']}")
            click.echo(f"{len(results)} covers, all pass: {ok}")
        else:
            _emit(
                cfg,
                {
                    "kind": kind,
                    "count": len(results),
                    "all_pass": ok,
                    "reports": {text: rep for text, rep in results},
                },
            )
        sys.exit(EXIT_PASS if ok else EXIT_FAIL)
    payload = _check_payload(cfg, body, cover, weighted, system)
    report = _call(cfg, "POST", f"/check/{kind}", payload)
    _emit(cfg, report)
    sys.exit(EXIT_PASS if report["pass"] else EXIT_FAIL)


@main.command()
@click.option("--body", "body_file", required=True, type=click.Path(exists=True))
@click.pass_obj
def certify(cfg: RunConfig, body_file):
    """Construct and verify an affine cross-polytope certificate."""
    payload = {"body": _load_json(body_file)}
    if cfg.tol is not None:
        payload["tol"] = cfg.tol
    data = _call(cfg, "POST", "/certify", payload)
    _emit(cfg, data)
    sys.exit(EXIT_PASS if data["pass"] else EXIT_FAIL)


@main.command()
@click.argument("n", type=int)
@click.argument("s", type=int, required=False)
@click.option("--irreducible", is_flag=True)
@click.option("--max-parts", type=int, default=None)
@click.pass_obj
def covers(cfg: RunConfig, n, s, irreducible, max_parts):
    """List s-uniform (or all irreducible) covers of [n]."""
    if s is None and not irreducible:
        raise click.UsageError("S is required unless --irreducible")
    data = _call(
        cfg,
        "POST",
        "/covers",
        {
            "n": n,
            "s": s,
            "max_parts": max_parts,
            "irreducible": irreducible,
            "budget": cfg.budget,
        },
    )
    if cfg.fmt == "json":
        _emit(cfg, data)
    elif cfg.fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["cover"])
        for text in data["covers"]:
            writer.writerow([text])
        click.echo(buf.getvalue(), nl=False)
    else:
        for text in data["covers"]:
            click.echo(text)
        click.echo(f"count: {data['count']}")


@main.command()
@click.argument(
    "action", type=click.Choice(["integrate", "check", "pointwise", "gaussian"])
)
@click.option("--density", "density_file", default=None, type=click.Path(exists=True))
@click.option("--weighted", "weighted_file", default=None, type=click.Path(exists=True))
@click.option("--sigma", default=None, help='1-based indices, e.g. "1,3"')
@click.option("--points-per-axis", type=int, default=64, show_default=True)
@click.option("--scheme", type=click.Choice(["tensor-grid", "quasi-random"]),
              default="tensor-grid", show_default=True)
@click.option("--samples", type=int, default=10000, show_default=True)
@click.pass_obj
def functional(cfg, action, density_file, weighted_file, sigma, points_per_axis,
               scheme, samples):
    """Numerical checks on log-concave densities."""
    quad = {"scheme": scheme, "points_per_axis": points_per_axis}
    if action == "integrate":
        if density_file is None:
            raise click.UsageError("integrate needs --density")
        payload = {"density": _load_json(density_file), "quadrature": quad}
        if sigma:
            payload["sigma"] = [int(t) for t in sigma.split(",")]
        _emit(cfg, _call(cfg, "POST", "/functional/integrate", payload))
        return
    if action == "gaussian":
        if weighted_file is None:
            raise click.UsageError("gaussian needs --weighted")
        payload = {"weighted": _load_json(weighted_file)}
        if cfg.tol is not None:
            payload["tol"] = cfg.tol
        data = _call(cfg, "POST", "/functional/gaussian-extremal", payload)
        _emit(cfg, data)
        sys.exit(EXIT_PASS if data["pass"] else EXIT_FAIL)
    if density_file is None or weighted_file is None:
        raise click.UsageError(f"{action} needs --density and --weighted")
    payload = {
        "density": _load_json(density_file),
        "weighted": _load_json(weighted_file),
    }
    if action == "pointwise":
        payload["samples"] = samples
        if cfg.tol is not None:
            payload["tol"] = cfg.tol
        data = _call(cfg, "POST", "/functional/pointwise", payload)
    else:
        payload["quadrature"] = quad
        if cfg.tol is not None:
            payload["tol"] = cfg.tol
        data = _call(cfg, "POST", "/functional/check", payload)
    _emit(cfg, data)
    sys.exit(EXIT_PASS if data["pass"] else EXIT_FAIL)


@main.command()
@click.argument("action", type=click.Choice(["john", "renormalize", "discretize"]))
@click.option("--system", "system_file", default=None, type=click.Path(exists=True))
@click.option("--measure", "measure_file", default=None, type=click.Path(exists=True))
@click.option("--density", default="uniform", show_default=True,
              help='built-in density name ("uniform", "von-mises-fisher")')
@click.option("--density-params", default="{}", help="JSON parameters for the density")
@click.option("--n", type=int, default=2, show_default=True)
@click.option("--eps", type=float, default=None)
@click.option("--no-renormalize", is_flag=True)
@click.pass_obj
def isotropic(cfg, action, system_file, measure_file, density, density_params,
              n, eps, no_renormalize):
    """John systems and sphere-measure utilities."""
    if action == "john":
        if system_file is None:
            raise click.UsageError("john needs --system")
        payload = {"system": _load_json(system_file)}
        if cfg.tol is not None:
            payload["tol"] = cfg.tol
        data = _call(cfg, "POST", "/isotropic/john", payload)
        _emit(cfg, data)
        sys.exit(EXIT_PASS if data["pass"] else EXIT_FAIL)
    if action == "renormalize":
        if measure_file is None:
            raise click.UsageError("renormalize needs --measure")
        payload = {"measure": _load_json(measure_file)}
        _emit(cfg, _call(cfg, "POST", "/isotropic/renormalize", payload))
        return
    if eps is None:
        raise click.UsageError("discretize needs --eps")
    try:
        params = json.loads(density_params)
    except json.JSONDecodeError as exc:
        raise click.UsageError(f"bad --density-params: {exc}")
    payload = {
        "density": density,
        "n": n,
        "eps": eps,
        "params": params,
        "renormalize": not no_renormalize,
    }
    _emit(cfg, _call(cfg, "POST", "/isotropic/discretize", payload))


if __name__ == "__main__":
    main()
