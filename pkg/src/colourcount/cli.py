"""Command line for the colouring-count toolkit.

Every subcommand is a thin client of the HTTP service: it reads the input
files, ships their text to the corresponding endpoint (in-process by default,
remote with --server) and renders the returned report.  Exit codes: 0 when no
check failed, 1 when a check failed, 2 on capacity or generation limits,
3 on usage errors.

Defaults can come from a flat key=value config file (--config) or, for the
work budget only, from the COLOURCOUNT_BUDGET environment variable.
Precedence: command-line flags, then the config file, then the environment,
then built-in defaults.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
import warnings

from .errors import CapacityError, GenerationError, InputError, ToolkitError
from .reports import VerificationReport, report_from_json

_ENV_BUDGET = "COLOURCOUNT_BUDGET"

_CONFIG_KEYS = {
    "graph": str, "lists": str, "uniform": int, "ell": float, "seed": int,
    "trials": int, "budget": int, "out": str, "format": str, "order": str,
    "jobs": int, "server": str, "traces": str, "vertex": int, "exact": bool,
    "colours": str, "deltas": str, "fs": str, "qs": str, "n_ref": int,
    "spec": str, "host": str, "port": int, "include_runtimes": bool,
}


def _parse_bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise InputError(f"not a boolean: {text!r}")


def _read_config(path: str) -> dict:
    out = {}
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise InputError(f"{path}:{lineno}: expected key = value")
            key, value = line.split("=", 1)
            key = key.strip().replace("-", "_")
            if key not in _CONFIG_KEYS:
                raise InputError(f"{path}:{lineno}: unknown config key {key!r}")
            caster = _parse_bool if _CONFIG_KEYS[key] is bool else _CONFIG_KEYS[key]
            out[key] = caster(value.strip())
    return out


def _apply_defaults(args: argparse.Namespace) -> None:
    """Fill unset options from the config file, then the environment."""
    config = _read_config(args.config) if args.config else {}
    for key, value in config.items():
        if getattr(args, key, None) is None:
            setattr(args, key, value)
    if getattr(args, "budget", None) is None and os.environ.get(_ENV_BUDGET):
        try:
            args.budget = int(os.environ[_ENV_BUDGET])
        except ValueError:
            raise InputError(
                f"{_ENV_BUDGET} must be an integer, got "
                f"{os.environ[_ENV_BUDGET]!r}") from None


# ---------------------------------------------------------------------------
# transport

def _client(server: str | None):
    if server:
        import httpx
        return httpx.Client(base_url=server, timeout=None)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient
    from .service import app
    return TestClient(app)


def _post(args: argparse.Namespace, path: str, payload: dict):
    with _client(getattr(args, "server", None)) as client:
        return client.post(path, json=payload)


def _http_failure(resp) -> int:
    try:
        body = resp.json()
    except ValueError:
        body = {"detail": resp.text}
    name = body.get("error", f"http {resp.status_code}")
    detail = body.get("detail", "")
    if not isinstance(detail, str):
        detail = json.dumps(detail)
    print(f"error: {name}: {detail}", file=sys.stderr)
    return 2 if resp.status_code == 409 else 3


# ---------------------------------------------------------------------------
# shared payload pieces

def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as handle:
        return handle.read()


def _instance_payload(args: argparse.Namespace) -> dict:
    if getattr(args, "graph", None) is None:
        raise InputError("--graph is required")
    if getattr(args, "lists", None) is not None and getattr(args, "uniform", None) is not None:
        raise InputError("give --lists or --uniform, not both")
    payload: dict = {"graph": _read_text(args.graph),
                     "source": "<stdin>" if args.graph == "-" else args.graph}
    if getattr(args, "lists", None) is not None:
        payload["lists"] = _read_text(args.lists)
    if getattr(args, "uniform", None) is not None:
        payload["uniform"] = args.uniform
    if getattr(args, "budget", None) is not None:
        payload["budget"] = {"nodes": args.budget, "enumeration": args.budget}
    return payload


def _parse_order(text: str) -> list[int]:
    try:
        return [int(part) for part in text.replace(",", " ").split()]
    except ValueError:
        raise InputError(f"--order expects integers, got {text!r}") from None


def _parse_int_list(text: str, flag: str) -> list[int]:
    try:
        return [int(part) for part in text.replace(",", " ").split()]
    except ValueError:
        raise InputError(f"{flag} expects integers, got {text!r}") from None


def _parse_float_list(text: str, flag: str) -> list[float]:
    try:
        return [float(part) for part in text.replace(",", " ").split()]
    except ValueError:
        raise InputError(f"{flag} expects numbers, got {text!r}") from None


# ---------------------------------------------------------------------------
# rendering

def _render(rep: VerificationReport) -> str:
    info = rep.instance
    lines = [f"{rep.command}  toolkit {rep.version}  source={info.source}  "
             f"n={info.n} m={info.m}"]
    if info.profile:
        lines.append("profile: " + "  ".join(
            f"{key}={info.profile[key]}" for key in sorted(info.profile)))
    for c in rep.checks:
        note = f"  {c.note}" if c.note else ""
        lines.append(f"[{c.status.value.upper():<13}] {c.name:<26} "
                     f"{c.lhs.render()} {c.comparison} {c.rhs.render()}"
                     f"  ({c.anchor}){note}")
    cnt = rep.counts()
    lines.append(f"checks: {len(rep.checks)}  pass={cnt['pass']} "
                 f"fail={cnt['fail']} marginal={cnt['marginal']} "
                 f"informational={cnt['informational']}")
    return "\n".join(lines)


def _output_format(args: argparse.Namespace) -> str:
    fmt = getattr(args, "format", None)
    if fmt is None and getattr(args, "out", None):
        if args.out.endswith(".csv"):
            fmt = "csv"
    return fmt or "json"


def _write_report(rep: VerificationReport, args: argparse.Namespace) -> None:
    fmt = _output_format(args)
    if fmt == "csv":
        text = rep.to_csv()
    else:
        text = rep.to_json(include_runtime=bool(getattr(args, "include_runtimes", None)))
    with open(args.out, "w", encoding="utf-8") as handle:
        handle.write(text)
    print(f"report written to {args.out} ({fmt})")


def _finish_report(resp, args: argparse.Namespace) -> int:
    if resp.status_code != 200:
        return _http_failure(resp)
    data = resp.json()
    rep = report_from_json(json.dumps(data["report"]))
    print(_render(rep))
    if getattr(args, "out", None):
        _write_report(rep, args)
    if getattr(args, "traces", None) is not None and "traces" in data:
        with open(args.traces, "w", encoding="utf-8") as handle:
            for trace in data["traces"]:
                handle.write(json.dumps(trace, sort_keys=True) + "\n")
        print(f"{len(data['traces'])} traces written to {args.traces}")
    return data["exit_code"]


# ---------------------------------------------------------------------------
# subcommands

def _cmd_verify_thm1(args: argparse.Namespace) -> int:
    if args.ell is None:
        raise InputError("--ell is required for verify-thm1")
    payload = _instance_payload(args)
    payload["ell"] = args.ell
    if args.order is not None:
        payload["order"] = _parse_order(args.order)
    return _finish_report(_post(args, "/verify/thm1", payload), args)


def _cmd_verify_thm4(args: argparse.Namespace) -> int:
    payload = _instance_payload(args)
    if args.order is not None:
        payload["order"] = _parse_order(args.order)
    return _finish_report(_post(args, "/verify/thm4", payload), args)


def _cmd_check_lemma2(args: argparse.Namespace) -> int:
    payload = _instance_payload(args)
    if args.colours is not None:
        payload["colours"] = _parse_int_list(args.colours, "--colours")
    return _finish_report(_post(args, "/check/lemma2", payload), args)


def _cmd_check_markov(args: argparse.Namespace) -> int:
    if args.ell is None:
        raise InputError("--ell is required for check-markov")
    payload = _instance_payload(args)
    payload["ell"] = args.ell
    if args.vertex is not None:
        payload["vertex"] = args.vertex
    return _finish_report(_post(args, "/check/markov", payload), args)


def _cmd_experiment(args: argparse.Namespace) -> int:
    if args.vertex is None:
        raise InputError("--vertex is required for experiment")
    payload = _instance_payload(args)
    payload["vertex"] = args.vertex
    if args.ell is not None:
        payload["ell"] = args.ell
    payload["trials"] = args.trials if args.trials is not None else 0
    payload["exact"] = bool(args.exact)
    payload["seed"] = args.seed if args.seed is not None else 0
    if args.threshold:
        thresholds = {}
        for item in args.threshold:
            if ":" not in item:
                raise InputError(f"--threshold expects U:VALUE, got {item!r}")
            u, value = item.split(":", 1)
            try:
                key, t_u = int(u), float(value)
            except ValueError:
                raise InputError(f"--threshold expects U:VALUE, got {item!r}") from None
            if math.isnan(t_u):
                raise InputError("--threshold value cannot be NaN")
            # JSON cannot carry Infinity; the service coerces the string form
            thresholds[key] = t_u if math.isfinite(t_u) else "inf"
        payload["thresholds"] = thresholds
    if args.traces is not None:
        payload["include_traces"] = True
    return _finish_report(_post(args, "/experiment", payload), args)


def _cmd_bounds(args: argparse.Namespace) -> int:
    payload = {
        "deltas": _parse_int_list(args.deltas or "3 6 12 30 100 300", "--deltas"),
        "fs": _parse_float_list(args.fs or "10 30 100 300", "--fs"),
        "qs": _parse_int_list(args.qs or "7 13 23 40", "--qs"),
    }
    if args.n_ref is not None:
        payload["n_ref"] = args.n_ref
    if args.jobs is not None:
        payload["jobs"] = args.jobs
    resp = _post(args, "/bounds", payload)
    if resp.status_code != 200:
        return _http_failure(resp)
    data = resp.json()
    fmt = getattr(args, "format", None) or "csv"
    if fmt == "json":
        text = json.dumps(data, indent=2, sort_keys=True) + "\n"
    else:
        from .reports import grid_to_csv
        text = grid_to_csv(data["fields"], data["rows"])
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
        print(f"{len(data['rows'])} grid rows written to {args.out} ({fmt})")
    else:
        sys.stdout.write(text)
    return 0


def _spec_without_seed(text: str) -> str:
    """Drop seed assignments so a --seed override does not duplicate the key."""
    kept = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0]
        key = line.partition("=")[0].strip() if "=" in line else ""
        if key != "seed":
            kept.append(raw)
    return "\n".join(kept)


def _cmd_generate(args: argparse.Namespace) -> int:
    if args.spec is None:
        raise InputError("--spec is required for generate")
    spec_text = _read_text(args.spec)
    if args.seed is not None:
        spec_text = _spec_without_seed(spec_text) + f"\nseed = {args.seed}\n"
    resp = _post(args, "/generate", {"spec": spec_text})
    if resp.status_code != 200:
        return _http_failure(resp)
    data = resp.json()
    header = ["# " + line for line in data["spec"].strip().splitlines()]
    header += [f"# {key} = {data['profile'][key]}"
               for key in sorted(data["profile"])]
    text = "\n".join(header) + "\n" + data["graph"]
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
        print(f"graph with n={data['n']} m={data['m']} written to {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import app
    uvicorn.run(app, host=args.host or "127.0.0.1",
                port=args.port if args.port is not None else 8000)
    return 0


# ---------------------------------------------------------------------------
# parser

def _add_common(sub: argparse.ArgumentParser, *, lists: bool = True) -> None:
    sub.add_argument("--graph", help="graph file ('-' for stdin)")
    if lists:
        sub.add_argument("--lists", help="list-assignment file")
        sub.add_argument("--uniform", type=int, help="uniform list size")
    sub.add_argument("--budget", type=int,
                     help="work budget (backtracking nodes and enumerated colourings)")
    sub.add_argument("--out", help="write the report to this file")
    sub.add_argument("--format", choices=("csv", "json"),
                     help="file format for --out")
    sub.add_argument("--include-runtimes", action="store_true", default=None,
                     help="keep per-check runtimes in JSON output "
                          "(breaks byte-stability)")
    sub.add_argument("--server", help="base URL of a running service "
                                      "(default: in-process)")
    sub.add_argument("--config", help="flat key=value defaults file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="colourcount",
        description="Exact counting, sampling and bound verification "
                    "for list colourings of locally sparse graphs.")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("verify-thm1",
                        help="hypotheses, prefix counting chain and |C| vs ell^n")
    _add_common(p)
    p.add_argument("--ell", type=float, help="target per-step factor")
    p.add_argument("--order", help="elimination order, comma-separated")
    p.set_defaults(func=_cmd_verify_thm1)

    p = subs.add_parser("verify-thm4",
                        help="q(v) chain diagnostics and |C| vs (q/sqrt(D))^n")
    _add_common(p)
    p.add_argument("--order", help="elimination order, comma-separated")
    p.set_defaults(func=_cmd_verify_thm4)

    p = subs.add_parser("check-lemma2",
                        help="exact colour-avoidance probabilities vs product bound")
    _add_common(p)
    p.add_argument("--colours", help="colours to test, comma-separated "
                                     "(default: all)")
    p.set_defaults(func=_cmd_check_lemma2)

    p = subs.add_parser("check-markov",
                        help="pair counting inequality and exact tail bounds")
    _add_common(p)
    p.add_argument("--ell", type=float, help="witnessed per-step factor")
    p.add_argument("--vertex", type=int,
                   help="centre vertex (default: maximum degree)")
    p.set_defaults(func=_cmd_check_markov)

    p = subs.add_parser("experiment",
                        help="four-step recolouring experiment at a vertex")
    _add_common(p)
    p.add_argument("--vertex", type=int, help="experiment vertex")
    p.add_argument("--ell", type=float,
                   help="per-step factor fixing default thresholds")
    p.add_argument("--trials", type=int, help="Monte-Carlo trials")
    p.add_argument("--exact", action="store_true", default=None,
                   help="exact distribution over all randomness branches")
    p.add_argument("--seed", type=int, help="random seed")
    p.add_argument("--threshold", action="append", metavar="U:VALUE",
                   help="override threshold t_u (repeatable; inf allowed)")
    p.add_argument("--traces", help="write per-trial JSON lines to this file")
    p.set_defaults(func=_cmd_experiment)

    p = subs.add_parser("bounds", help="bound formulas over a (Delta, f, q) grid")
    p.add_argument("--deltas", help="comma-separated maximum degrees")
    p.add_argument("--fs", help="comma-separated f values")
    p.add_argument("--qs", help="comma-separated list sizes")
    p.add_argument("--n-ref", type=int, help="reference n for the count bound")
    p.add_argument("--jobs", type=int, help="parallel workers")
    p.add_argument("--out", help="write the grid to this file")
    p.add_argument("--format", choices=("csv", "json"), help="output format")
    p.add_argument("--server", help="base URL of a running service")
    p.add_argument("--config", help="flat key=value defaults file")
    p.set_defaults(func=_cmd_bounds)

    p = subs.add_parser("generate", help="generate a graph from a spec file")
    p.add_argument("--spec", help="generator spec file ('-' for stdin)")
    p.add_argument("--seed", type=int, help="override the spec seed")
    p.add_argument("--out", help="write the graph to this file")
    p.add_argument("--server", help="base URL of a running service")
    p.add_argument("--config", help="flat key=value defaults file")
    p.set_defaults(func=_cmd_generate)

    p = subs.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", help="bind address (default 127.0.0.1)")
    p.add_argument("--port", type=int, help="port (default 8000)")
    p.add_argument("--config", help="flat key=value defaults file")
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        _apply_defaults(args)
        return args.func(args)
    except (CapacityError, GenerationError) as err:
        print(f"error: {type(err).__name__}: {err}", file=sys.stderr)
        return 2
    except ToolkitError as err:
        print(f"error: {type(err).__name__}: {err}", file=sys.stderr)
        return 3
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
