"""Command line front end.

    qudstab run circuit.qst [--mode enumerate|sample|fixed] [--shots N]
            [--seed S] [--fix name=k,...] [--oracle] [--emit-tableau]
            [--branch-cap B] [--json out.json] [--server URL]
    qudstab serve [--host H] [--port P]

Exit codes: 0 success, 1 diagnostics or bad arguments, 2 a pinned outcome has
probability zero, 3 the branch cap was exceeded.

By default `run` executes in-process; `--server URL` sends the same request
to a running service instead.
"""

from __future__ import annotations

import argparse
import json
import sys

from .circuit import (
    ResourceLimitError,
    parse_program,
    result_dict,
    run_program,
)
from .measurement import UnsupportedOutcomeError

EXIT_OK = 0
EXIT_DIAGNOSTICS = 1
EXIT_UNSUPPORTED_OUTCOME = 2
EXIT_RESOURCE = 3


def _parse_fix(text: str) -> dict[str, int]:
    fix = {}
    if not text:
        return fix
    for part in text.split(","):
        name, sep, val = part.partition("=")
        if not sep or not name:
            raise ValueError(f"bad --fix entry {part!r}; expected name=k")
        fix[name.strip()] = int(val)
    return fix


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qudstab", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="simulate a circuit file")
    run.add_argument("file", help="circuit program path")
    run.add_argument(
        "--mode", choices=("enumerate", "sample", "fixed"), default="enumerate"
    )
    run.add_argument("--shots", type=int, default=1)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--fix", default="", help="comma-separated name=k pins")
    run.add_argument("--oracle", action="store_true",
                     help="cross-check each trajectory against the dense backend")
    run.add_argument("--emit-tableau", action="store_true")
    run.add_argument("--branch-cap", type=int, default=4096)
    run.add_argument("--json", dest="json_out", default=None,
                     help="also write the result to this file")
    run.add_argument("--server", default=None,
                     help="send the request to a running service URL")

    serve = sub.add_parser("serve", help="start the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    return ap


def _emit(result: dict, json_out: str | None) -> None:
    text = json.dumps(result, indent=2)
    print(text)
    if json_out:
        with open(json_out, "w") as f:
            f.write(text + "\n")


def _run_remote(args, circuit: str, fix: dict) -> int:
    import httpx

    payload = {
        "circuit": circuit,
        "mode": args.mode,
        "shots": args.shots,
        "seed": args.seed,
        "fix": fix,
        "oracle": args.oracle,
        "emit_tableau": args.emit_tableau,
        "branch_cap": args.branch_cap,
    }
    resp = httpx.post(args.server.rstrip("/") + "/simulate", json=payload,
                      timeout=300.0)
    if resp.status_code == 200:
        _emit(resp.json(), args.json_out)
        return EXIT_OK
    print(f"server error {resp.status_code}: {resp.text}", file=sys.stderr)
    return {409: EXIT_UNSUPPORTED_OUTCOME, 413: EXIT_RESOURCE}.get(
        resp.status_code, EXIT_DIAGNOSTICS
    )


def _run_local(args, circuit: str, fix: dict) -> int:
    program, diags = parse_program(circuit)
    if diags:
        for d in diags:
            print(str(d), file=sys.stderr)
        return EXIT_DIAGNOSTICS
    try:
        trajectories = run_program(
            program,
            mode=args.mode,
            shots=args.shots,
            seed=args.seed,
            fix=fix,
            branch_cap=args.branch_cap,
        )
    except UnsupportedOutcomeError as e:
        print(str(e), file=sys.stderr)
        return EXIT_UNSUPPORTED_OUTCOME
    except ResourceLimitError as e:
        print(str(e), file=sys.stderr)
        return EXIT_RESOURCE
    except ValueError as e:
        print(str(e), file=sys.stderr)
        return EXIT_DIAGNOSTICS
    result = result_dict(
        program,
        trajectories,
        emit_tableau=args.emit_tableau,
        with_oracle=args.oracle,
    )
    _emit(result, args.json_out)
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "serve":
        import uvicorn

        from .service import app

        uvicorn.run(app, host=args.host, port=args.port)
        return EXIT_OK
    try:
        fix = _parse_fix(args.fix)
    except ValueError as e:
        print(str(e), file=sys.stderr)
        return EXIT_DIAGNOSTICS
    try:
        with open(args.file) as f:
            circuit = f.read()
    except OSError as e:
        print(str(e), file=sys.stderr)
        return EXIT_DIAGNOSTICS
    if args.server:
        return _run_remote(args, circuit, fix)
    return _run_local(args, circuit, fix)


if __name__ == "__main__":
    sys.exit(main())
