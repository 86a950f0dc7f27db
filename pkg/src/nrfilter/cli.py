"""Command-line client for the analysis service.

Subcommands sweep, converge, optimize, oracle and metrics post the
design file to the HTTP service and write its artifacts; by default the
service runs in-process, with --server they go over the network to a
running instance. ``serve`` starts such an instance.

Exit codes: 0 success, 2 configuration error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources

import httpx

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3


def _load_design_text(name: str) -> str:
    """Read a design file path, falling back to the bundled designs."""
    try:
        with open(name) as fh:
            return fh.read()
    except OSError:
        pass
    ref = resources.files("nrfilter").joinpath("designs", name)
    if ref.is_file():
        return ref.read_text()
    ref = resources.files("nrfilter").joinpath("designs", name + ".design")
    if ref.is_file():
        return ref.read_text()
    raise FileNotFoundError(f"design file not found: {name}")


def _client(server: str | None) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server, timeout=600.0)
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DeprecationWarning)
        from starlette.testclient import TestClient

    from .service.app import app

    # sync httpx client bound directly to the in-process ASGI app
    return TestClient(app, base_url="http://nrfilter.local")


class _RequestFailed(Exception):
    def __init__(self, code: int):
        self.code = code


def _post(client: httpx.Client, path: str, payload: dict) -> dict:
    resp = client.post(path, json=payload)
    if resp.status_code == 200:
        return resp.json()
    try:
        detail = resp.json()
    except ValueError:
        detail = {"kind": "config", "error": resp.text.strip()}
    kind = detail.get("kind", "config")
    message = detail.get("error", "request failed")
    print(f"error: {kind}: {message}", file=sys.stderr)
    raise _RequestFailed(EXIT_NUMERIC if kind == "numeric" else EXIT_CONFIG)


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _common_payload(args) -> dict:
    payload = {"design": _load_design_text(args.design)}
    for key in ("mode", "nhar", "points"):
        value = getattr(args, key, None)
        if value is not None:
            payload[key] = value
    return payload


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="nrfilter",
        description="Analysis of non-reciprocal bandpass filters built from "
        "time-modulated resonators.",
    )
    parser.add_argument(
        "--server",
        help="base URL of a running service; default runs the service in-process",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--design", required=True, help="design file path or bundled name")
        p.add_argument("--out", help="output file (default stdout)")
        p.add_argument("--mode", choices=("rigorous", "cm_approx"))
        p.add_argument("--nhar", type=int, help="override the number of harmonics")
        p.add_argument("--points", type=int, help="override the sweep grid size")

    add_common(sub.add_parser("sweep", help="S-parameter sweep to CSV"))
    p = sub.add_parser("converge", help="harmonic-count convergence table")
    add_common(p)
    p.add_argument(
        "--nhar-values",
        help="comma-separated odd harmonic counts (default 3,5,7,9,11)",
    )
    p = sub.add_parser("metrics", help="headline figures of merit as JSON")
    add_common(p)
    p.add_argument("--rl-level", type=float, default=11.0, help="bandwidth RL level in dB")
    add_common(sub.add_parser("optimize", help="search modulation settings"))
    p = sub.add_parser("oracle", help="transient vs frequency-domain comparison CSV")
    add_common(p)
    p.add_argument(
        "--frequencies", help="comma-separated frequencies in Hz (default 5 in-band)"
    )
    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8421)

    args = parser.parse_args(argv)

    if args.command == "serve":
        import uvicorn

        from .service.app import app

        uvicorn.run(app, host=args.host, port=args.port)
        return EXIT_OK

    try:
        payload = _common_payload(args)
    except FileNotFoundError as exc:
        print(f"error: config: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        return _run(args, payload)
    except _RequestFailed as exc:
        return exc.code


def _run(args, payload) -> int:
    with _client(args.server) as client:
        if args.command == "sweep":
            body = _post(client, "/sweep", payload)
            _emit(body["csv"], args.out)
        elif args.command == "metrics":
            payload["rl_level_db"] = args.rl_level
            body = _post(client, "/metrics", payload)
            _emit(json.dumps(body, indent=2) + "\n", args.out)
        elif args.command == "converge":
            if args.nhar_values:
                try:
                    payload["nhar_values"] = [
                        int(v) for v in args.nhar_values.split(",")
                    ]
                except ValueError:
                    print("error: config: cannot parse --nhar-values", file=sys.stderr)
                    return EXIT_CONFIG
            body = _post(client, "/converge", payload)
            _emit(body["csv"], args.out)
        elif args.command == "optimize":
            body = _post(client, "/optimize", payload)
            _emit(json.dumps(body["result"], indent=2) + "\n", args.out)
        elif args.command == "oracle":
            if args.frequencies:
                try:
                    payload["frequencies"] = [
                        float(v) for v in args.frequencies.split(",")
                    ]
                except ValueError:
                    print("error: config: cannot parse --frequencies", file=sys.stderr)
                    return EXIT_CONFIG
            body = _post(client, "/oracle", payload)
            _emit(body["csv"], args.out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
