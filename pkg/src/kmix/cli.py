"""Command-line client for the kmix service.

Every subcommand speaks to the HTTP API: against a remote server when
``--server`` is given, otherwise against an in-process instance of the
app, so no network or daemon is needed for local work.

Subcommands:

* ``kmix run --config sweep.yaml``   run a sweep, write its CSV
* ``kmix census --mixer xy-full --n 6``   commutation census
* ``kmix error-scan --n 5 --k 2``   step error vs bound, scaling exponent
* ``kmix tsp-check --cities 3``   tour-mixer feasibility checks
* ``kmix serve``   run the HTTP service with uvicorn
"""

from __future__ import annotations

import argparse
import json
import sys

import yaml

from .experiments import ExperimentConfig


def _client(server: str | None):
    if server:
        import httpx

        return httpx.Client(base_url=server, timeout=None)
    from fastapi.testclient import TestClient

    from .service import app

    return TestClient(app)


def _post(client, path: str, payload: dict) -> dict:
    resp = client.post(path, json=payload)
    if resp.status_code != 200:
        try:
            detail = resp.json().get("detail", resp.text)
        except Exception:  # noqa: BLE001 - non-JSON error body
            detail = resp.text
        print(f"error: {detail}", file=sys.stderr)
        raise SystemExit(2)
    return resp.json()


def _cmd_run(args) -> int:
    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            raw = yaml.safe_load(fh) or {}
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 2
    try:
        config = ExperimentConfig.from_dict(raw)
    except (TypeError, ValueError) as exc:
        print(f"error: invalid config: {exc}", file=sys.stderr)
        return 2
    payload = config.to_dict()
    output = args.output or payload.pop("output")
    payload.pop("output", None)
    with _client(args.server) as client:
        data = _post(client, "/run", payload)
    with open(output, "w", encoding="utf-8", newline="") as fh:
        fh.write(data["csv"])
    print(f"wrote {data['rows']} rows to {output}")
    if data["failed_rows"]:
        print(f"{data['failed_rows']} rows failed", file=sys.stderr)
        return 1
    return 0


def _blocks_arg(text: str | None) -> list[str] | None:
    if not text:
        return None
    return [part.strip() for part in text.split(",") if part.strip()]


def _cmd_census(args) -> int:
    payload = {
        "mixer": args.mixer,
        "n": args.n,
        "k": args.k,
        "blocks": _blocks_arg(args.blocks),
    }
    with _client(args.server) as client:
        data = _post(client, "/census", payload)
    print(json.dumps(data, indent=2))
    return 0


def _cmd_error_scan(args) -> int:
    payload = {
        "mixer": args.mixer,
        "n": args.n,
        "k": args.k,
        "blocks": _blocks_arg(args.blocks),
    }
    if args.betas:
        payload["betas"] = [float(b) for b in args.betas.split(",")]
    with _client(args.server) as client:
        data = _post(client, "/error-scan", payload)
    print(json.dumps(data, indent=2))
    return 0


def _cmd_tsp_check(args) -> int:
    payload = {"cities": args.cities, "steps": args.steps, "beta": args.beta}
    with _client(args.server) as client:
        data = _post(client, "/tsp-check", payload)
    print(json.dumps(data, indent=2))
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import app

    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kmix")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run an experiment sweep from a config file")
    p_run.add_argument("--config", required=True, help="YAML sweep configuration")
    p_run.add_argument("--output", help="CSV path (overrides the config's output)")
    p_run.add_argument("--server", help="remote service URL; default is in-process")
    p_run.set_defaults(fn=_cmd_run)

    p_census = sub.add_parser("census", help="commutator census of a mixer")
    p_census.add_argument("--mixer", default="xy-full", help="x | xy-full | xy-blocked | xy-ring")
    p_census.add_argument("--n", type=int, required=True)
    p_census.add_argument("--k", type=int, default=None)
    p_census.add_argument("--blocks", help="size:k pairs, e.g. 3:1,3:2")
    p_census.add_argument("--server")
    p_census.set_defaults(fn=_cmd_census)

    p_scan = sub.add_parser("error-scan", help="empirical step error vs first-order bound")
    p_scan.add_argument("--mixer", default="xy-full")
    p_scan.add_argument("--n", type=int, required=True)
    p_scan.add_argument("--k", type=int, default=None)
    p_scan.add_argument("--blocks")
    p_scan.add_argument("--betas", help="comma-separated step sizes")
    p_scan.add_argument("--server")
    p_scan.set_defaults(fn=_cmd_error_scan)

    p_tsp = sub.add_parser("tsp-check", help="tour-mixer feasibility preservation checks")
    p_tsp.add_argument("--cities", type=int, required=True)
    p_tsp.add_argument("--steps", type=int, default=100)
    p_tsp.add_argument("--beta", type=float, default=0.1)
    p_tsp.add_argument("--server")
    p_tsp.set_defaults(fn=_cmd_tsp_check)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.set_defaults(fn=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    raise SystemExit(main())
