"""Command-line client for the guardnet service.

The CLI is a thin client: it reads files, posts them to the service, and
renders the responses.  By default requests run against an in-process copy
of the service (no server required); ``--server URL`` targets a remote one.

Exit codes: 0 success/reachable, 1 not reachable or failed validation or
failed checks, 2 inconclusive, 64 usage, 65 bad data, 69 service
unavailable, 70 internal error.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import os
import sys
from pathlib import Path
from typing import Optional

import httpx

EXIT_OK = 0
EXIT_NO = 1
EXIT_INCONCLUSIVE = 2
EXIT_USAGE = 64
EXIT_DATA = 65
EXIT_UNAVAILABLE = 69
EXIT_INTERNAL = 70

STATE_CAP_ENV = "GUARDNET_STATE_CAP"


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


class ClientError(Exception):
    def __init__(self, status: int, detail: str):
        self.status = status
        self.detail = detail
        super().__init__(detail)


class ServiceClient:
    """POSTs to a remote server, or to the in-process app when none is given."""

    def __init__(self, server: Optional[str] = None):
        self.server = server.rstrip("/") if server else None

    def post(self, path: str, payload: dict) -> dict:
        if self.server is not None:
            response = httpx.post(self.server + path, json=payload, timeout=300.0)
        else:
            response = asyncio.run(self._in_process(path, payload))
        if response.status_code >= 500:
            raise ClientError(response.status_code, response.text)
        data = response.json()
        if response.status_code >= 400:
            raise ClientError(response.status_code, data.get("detail", response.text))
        return data

    async def _in_process(self, path: str, payload: dict):
        from .service import app

        transport = httpx.ASGITransport(app=app)
        async with httpx.AsyncClient(transport=transport, base_url="http://guardnet") as client:
            return await client.post(path, json=payload, timeout=300.0)


def _read_json(path: str) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ClientError(0, f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ClientError(0, f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


def _emit(payload: dict, args, human: str) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    elif human:
        print(human)


def _write_or_print(text: str, output: Optional[str]) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        print(text, end="" if text.endswith("\n") else "\n")


def _marking_ref(bundle_data: dict, name: str):
    markings = bundle_data.get("markings", {})
    if name in markings:
        return name
    known = ", ".join(sorted(markings)) or "(none)"
    raise ClientError(0, f"unknown marking {name!r}; bundle defines: {known}")


def _cmd_validate(args, client: ServiceClient) -> int:
    data = _read_json(args.bundle)
    response = client.post("/validate", {"bundle": data})
    lines = [("ok" if response["valid"] else "invalid")] + response["diagnostics"]
    _emit(response, args, "\n".join(lines))
    return EXIT_OK if response["valid"] else EXIT_NO


def _cmd_internalize(args, client: ServiceClient) -> int:
    data = _read_json(args.bundle)
    response = client.post("/internalize", {"bundle": data})
    text = json.dumps(response["bundle"], indent=2, sort_keys=True) + "\n"
    if args.format == "json":
        print(json.dumps(response, indent=2, sort_keys=True))
    else:
        _write_or_print(text, args.output)
        if args.output:
            print(f"{response['places']} places, {response['transitions']} transitions -> {args.output}")
    if args.output and args.format == "json":
        Path(args.output).write_text(text, encoding="utf-8")
    if args.dot:
        dot = client.post("/export-dot", {"bundle": response["bundle"]})
        Path(args.dot).write_text(dot["dot"], encoding="utf-8")
    return EXIT_OK


def _cmd_reach(args, client: ServiceClient) -> int:
    data = _read_json(args.bundle)
    state_cap = args.state_cap
    if state_cap is None and os.environ.get(STATE_CAP_ENV):
        try:
            state_cap = int(os.environ[STATE_CAP_ENV])
        except ValueError:
            raise ClientError(0, f"{STATE_CAP_ENV} must be an integer")
    payload = {
        "bundle": data,
        "source": _marking_ref(data, args.source),
        "target": _marking_ref(data, args.target),
    }
    if args.depth_bound is not None:
        payload["depth_bound"] = args.depth_bound
    if state_cap is not None:
        payload["state_cap"] = state_cap
    response = client.post("/reach", payload)
    lines = [response["outcome"]]
    if response.get("sequence"):
        lines.append("steps: " + " ".join(response["sequence"]))
    if response.get("run"):
        for step in response["run"]:
            witness = f" [{step['witness']}]" if step.get("witness") else ""
            lines.append(
                f"  {step['transition']}({','.join(step['inputs'])})"
                f" -> ({','.join(step['outputs'])}){witness}"
            )
    _emit(response, args, "\n".join(lines))
    return response["exit_code"]


def _cmd_fire(args, client: ServiceClient) -> int:
    data = _read_json(args.bundle)
    payload = {
        "bundle": data,
        "marking": _marking_ref(data, args.marking),
        "transition": args.transition,
    }
    if args.inputs is not None:
        payload["inputs"] = args.inputs.split(",") if args.inputs else []
    if args.witness is not None:
        payload["witness"] = args.witness
    response = client.post("/fire", payload)
    tokens = response["marking"]["tokens"]
    rendered = ", ".join(
        f"{t[0]}:{t[1]}" if isinstance(t, list) else t for t in tokens
    )
    _emit(response, args, f"marking after {args.transition}: {rendered or '(empty)'}")
    return EXIT_OK


def _save_compose(args, response: dict) -> None:
    text = json.dumps(response["bundle"], indent=2, sort_keys=True) + "\n"
    if args.format == "json":
        print(json.dumps(response, indent=2, sort_keys=True))
        if args.output:
            Path(args.output).write_text(text, encoding="utf-8")
    else:
        _write_or_print(text, args.output)


def _cmd_compose(args, client: ServiceClient) -> int:
    data = _read_json(args.bundle)
    if args.operation == "identify":
        witness = _read_json(args.witness_net)
        payload = {
            "bundle": data,
            "witness_net": witness.get("net", witness),
            "left": _read_json(args.left),
            "right": _read_json(args.right),
        }
        response = client.post("/compose/identify", payload)
    elif args.operation == "add":
        generators = _read_json(args.generators)
        payload = {
            "bundle": data,
            "generators": generators.get("net", generators),
            "along": _read_json(args.along),
        }
        response = client.post("/compose/add", payload)
    elif args.operation == "erase":
        payload = {"bundle": data, "victims": args.victims.split(",") if args.victims else []}
        response = client.post("/compose/erase", payload)
    else:
        generators = _read_json(args.generators)
        payload = {
            "bundle": data,
            "victims": args.victims.split(",") if args.victims else [],
            "generators": generators.get("net", generators),
            "along": _read_json(args.along),
        }
        response = client.post("/compose/sync", payload)
    _save_compose(args, response)
    return EXIT_OK


def _cmd_export_dot(args, client: ServiceClient) -> int:
    data = _read_json(args.bundle)
    response = client.post("/export-dot", {"bundle": data})
    if args.format == "json":
        print(json.dumps(response, indent=2, sort_keys=True))
        if args.output:
            Path(args.output).write_text(response["dot"], encoding="utf-8")
    else:
        _write_or_print(response["dot"], args.output)
    return EXIT_OK


def _cmd_check(args, client: ServiceClient) -> int:
    payload: dict = {"suite": args.suite}
    if args.samples is not None:
        payload["samples"] = args.samples
    if args.seed is not None:
        payload["seed"] = args.seed
    response = client.post("/check", payload)
    lines = [
        f"{'PASS' if item['passed'] else 'FAIL'} {item['name']}"
        + (f" - {item['detail']}" if item["detail"] else "")
        for item in response["results"]
    ]
    lines.append("all passed" if response["passed"] else "FAILURES present")
    _emit(response, args, "\n".join(lines))
    return EXIT_OK if response["passed"] else EXIT_NO


def _cmd_serve(args, _client: ServiceClient) -> int:
    import uvicorn

    from .service import app

    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="guardnet", description="Guarded-net analysis client")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--server", help="remote service URL (default: in-process)")
    common.add_argument("--format", choices=("text", "json"), default="text")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("validate", parents=[common], help="validate a bundle file")
    p.add_argument("bundle")
    p.set_defaults(handler=_cmd_validate)

    p = sub.add_parser("internalize", parents=[common], help="compile the guard into a plain net")
    p.add_argument("bundle")
    p.add_argument("-o", "--output", help="write the compiled bundle here")
    p.add_argument("--dot", help="also write a DOT rendering here")
    p.set_defaults(handler=_cmd_internalize)

    p = sub.add_parser("reach", parents=[common], help="bounded reachability between named markings")
    p.add_argument("bundle")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--depth-bound", type=int)
    p.add_argument("--state-cap", type=int)
    p.set_defaults(handler=_cmd_reach)

    p = sub.add_parser("fire", parents=[common], help="fire one transition at a named marking")
    p.add_argument("bundle")
    p.add_argument("marking")
    p.add_argument("transition")
    p.add_argument("--inputs", help="comma-separated input colors (colored markings)")
    p.add_argument("--witness", help="witness id (span guards)")
    p.set_defaults(handler=_cmd_fire)

    p = sub.add_parser("compose", parents=[common], help="net surgery operations")
    p.add_argument("operation", choices=("identify", "add", "erase", "sync"))
    p.add_argument("bundle")
    p.add_argument("--witness-net", help="bundle file with the identification witness net")
    p.add_argument("--left", help="functor file (identify)")
    p.add_argument("--right", help="functor file (identify)")
    p.add_argument("--generators", help="bundle file with the new generators (add/sync)")
    p.add_argument("--along", help="functor file mapping the generators (add/sync)")
    p.add_argument("--victims", help="comma-separated transitions to erase (erase/sync)")
    p.add_argument("-o", "--output")
    p.set_defaults(handler=_cmd_compose)

    p = sub.add_parser("export-dot", parents=[common], help="deterministic DOT rendering")
    p.add_argument("bundle")
    p.add_argument("-o", "--output")
    p.set_defaults(handler=_cmd_export_dot)

    p = sub.add_parser("check", parents=[common], help="run a property suite")
    p.add_argument(
        "suite",
        choices=("all", "reachability", "lifting", "monoidality", "counterexamples"),
    )
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)
    p.set_defaults(handler=_cmd_check)

    p = sub.add_parser("serve", parents=[common], help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(handler=_cmd_serve)

    return parser


def _missing_options(args) -> Optional[str]:
    if args.command != "compose":
        return None
    need = {
        "identify": ("witness_net", "left", "right"),
        "add": ("generators", "along"),
        "erase": ("victims",),
        "sync": ("victims", "generators", "along"),
    }[args.operation]
    for option in need:
        if getattr(args, option) is None:
            return f"compose {args.operation} requires --{option.replace('_', '-')}"
    return None


def run_command(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    if getattr(args, "command", None) is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    usage = _missing_options(args)
    if usage:
        print(f"error: {usage}", file=sys.stderr)
        return EXIT_USAGE
    client = ServiceClient(args.server)
    try:
        return args.handler(args, client)
    except ClientError as exc:
        print(f"error: {exc.detail}", file=sys.stderr)
        return EXIT_INTERNAL if exc.status >= 500 else EXIT_DATA
    except httpx.ConnectError as exc:
        print(f"error: cannot reach service: {exc}", file=sys.stderr)
        return EXIT_UNAVAILABLE


def main() -> None:
    try:
        sys.exit(run_command(sys.argv[1:]))
    except KeyboardInterrupt:
        sys.exit(130)


if __name__ == "__main__":
    main()
