"""Command-line front end; a thin client of the HTTP service.

Every command assembles a request, sends it through the service (in
process by default, or to --server over the network), and writes the
returned artifact.  Exit codes: 0 success/pass, 2 usage error, 3
numerical or truncation failure (including failed verifications).
"""

import argparse
import json
import os
import sys


def _cap_threads():
    cap = os.environ.get("PHASE_OVM_THREADS")
    if cap:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ.setdefault(var, cap)


_cap_threads()

USAGE_EXIT = 2
NUMERICAL_EXIT = 3


# ---------------------------------------------------------------------------
# shorthand parsers


def parse_region(text: str) -> dict:
    """Region descriptor from canonical JSON or a compact shorthand:
    circle:a=1, disc:a=1, segment:a=2, interval:-1,1, union:-2,-1;1,2,
    fourier:a0=1,a=1;0.5,L=3.14159, integers:n=3,
    rectangle:-1,1,-1,1, indicator:FILE, disk:dim=32."""
    text = text.strip()
    if text.startswith("{"):
        return json.loads(text)
    kind, _, rest = text.partition(":")
    kind = kind.lower()

    def scalar(default_key="a"):
        if "=" in rest:
            key, _, val = rest.partition("=")
            if key.strip() != default_key:
                raise ValueError(f"expected {default_key}=..., got {rest!r}")
            return float(val)
        return float(rest)

    if kind in ("circle", "disc", "segment"):
        return {"type": kind, "a": scalar()}
    if kind == "interval":
        lo, hi = (float(x) for x in rest.split(","))
        return {"type": "interval", "lo": lo, "hi": hi}
    if kind == "union":
        pieces = [[float(x) for x in piece.split(",")] for piece in rest.split(";")]
        return {"type": "union", "intervals": pieces}
    if kind == "fourier":
        fields = {}
        for item in rest.split(","):
            key, _, val = item.partition("=")
            fields[key.strip()] = val
        out = {"type": "fourier", "a0": float(fields.get("a0", 0.0))}
        if "a" in fields:
            out["a"] = [float(x) for x in fields["a"].split(";")]
        if "b" in fields:
            out["b"] = [float(x) for x in fields["b"].split(";")]
        if "L" in fields:
            out["L"] = float(fields["L"])
        return out
    if kind == "integers":
        n = rest.partition("=")[2] if "=" in rest else rest
        return {"type": "integer_comb", "n": int(n)}
    if kind == "rectangle":
        q0, q1, p0, p1 = (float(x) for x in rest.split(","))
        return {"type": "rectangle", "q0": q0, "q1": q1, "p0": p0, "p1": p1}
    if kind == "indicator":
        from .regions2d import read_indicator, region2d_to_json

        return region2d_to_json(read_indicator(rest))
    if kind == "disk":
        n = rest.partition("=")[2] if "=" in rest else rest
        return {"type": "reliable_disk", "dim": int(n)}
    raise ValueError(f"unknown region shorthand {text!r}")


def parse_state(text: str) -> dict:
    """State descriptor from JSON or shorthand: fock:0,1 (coefficients),
    number:1, coherent:0.7, squeezed:0.3."""
    text = text.strip()
    if text.startswith("{"):
        return json.loads(text)
    kind, _, rest = text.partition(":")
    kind = kind.lower()
    if kind == "fock":
        return {"type": "fock", "coefficients": [float(x) for x in rest.split(",")]}
    if kind == "number":
        return {"type": "number", "n": int(rest)}
    if kind == "coherent":
        return {"type": "coherent", "alpha": rest}
    if kind == "squeezed":
        return {"type": "squeezed", "r": float(rest)}
    raise ValueError(f"unknown state shorthand {text!r}")


def parse_grid(text: str) -> dict:
    parts = text.split(",")
    if len(parts) != 6:
        raise ValueError("grid needs qmin,qmax,pmin,pmax,nq,np")
    qmin, qmax, pmin, pmax = (float(x) for x in parts[:4])
    return {
        "qmin": qmin,
        "qmax": qmax,
        "pmin": pmin,
        "pmax": pmax,
        "nq": int(parts[4]),
        "np": int(parts[5]),
    }


# ---------------------------------------------------------------------------
# transport


def call_service(path: str, payload: dict, server: str | None):
    """POST a request either to a remote server or to the in-process app."""
    import httpx

    if server:
        response = httpx.post(server.rstrip("/") + path, json=payload, timeout=600.0)
        return response.status_code, response.json()

    import asyncio

    from .service import app

    async def _go():
        transport = httpx.ASGITransport(app=app)
        async with httpx.AsyncClient(
            transport=transport, base_url="http://service", timeout=600.0
        ) as client:
            response = await client.post(path, json=payload)
            return response.status_code, response.json()

    return asyncio.run(_go())


def _exit_for_status(status: int, data: dict) -> int:
    if status in (400, 422):
        detail = data.get("error", {}).get("detail") or data.get("detail")
        print(f"error: {detail}", file=sys.stderr)
        return USAGE_EXIT
    if status == 409:
        detail = data.get("error", {}).get("detail")
        print(f"numerical error: {detail}", file=sys.stderr)
        return NUMERICAL_EXIT
    print(f"error: unexpected status {status}: {data}", file=sys.stderr)
    return NUMERICAL_EXIT


def _write_json(path: str | None, data: dict):
    text = json.dumps(data, indent=2)
    if path:
        with open(path, "w", encoding="ascii") as fh:
            fh.write(text + "\n")
        print(f"wrote {path}")
    else:
        print(text)


# ---------------------------------------------------------------------------
# commands


def cmd_build(args) -> int:
    payload = {
        "region": parse_region(args.region),
        "dim": args.dim,
        "path": args.path,
        "quadrature_points": args.quadrature_points,
    }
    if args.grid:
        payload["grid"] = parse_grid(args.grid)
    status, data = call_service("/build", payload, args.server)
    if status != 200:
        return _exit_for_status(status, data)
    summary = {k: data[k] for k in ("path", "dim", "hermitian", "complex_valued", "symbol_complex", "parity_commutes")}
    print(json.dumps(summary))
    _write_json(args.output, data)
    return 0


def cmd_mass(args) -> int:
    payload = {
        "region": parse_region(args.region),
        "state": parse_state(args.state),
        "dim": args.dim,
        "s": args.s,
        "convention": args.convention,
    }
    if args.grid:
        payload["grid"] = parse_grid(args.grid)
    status, data = call_service("/mass", payload, args.server)
    if status != 200:
        return _exit_for_status(status, data)
    print(f"convention: {data['convention']}  s: {data['s']}")
    print(f"field integral: {data['field_integral']:.12g}")
    if data["operator_trace"] is not None:
        print(f"operator trace: {data['operator_trace']:.12g}")
        print(f"deviation: {data['deviation']:.3e}")
    elif data.get("note"):
        print(f"note: {data['note']}")
    if args.output:
        _write_json(args.output, data)
    return 0


_VERIFY_PARAM_FLAGS = (
    ("a", float),
    ("a0", float),
    ("L", float),
    ("lo", float),
    ("hi", float),
    ("c", float),
    ("r", float),
    ("dim", int),
    ("n", int),
    ("quadrature_points", int),
    ("tolerance", float),
)


def cmd_verify(args) -> int:
    params = {}
    for name, _ in _VERIFY_PARAM_FLAGS:
        value = getattr(args, name, None)
        if value is not None:
            params[name] = value
    if "L" in params:
        params["period"] = params.pop("L")
    if "n" in params:
        params["n_values"] = (params.pop("n"),)
    if args.harmonics:
        params["a"] = [float(x) for x in args.harmonics.split(",")]
    status, data = call_service(
        "/verify", {"target": args.target, "params": params}, args.server
    )
    if status != 200:
        return _exit_for_status(status, data)
    for report in data["reports"]:
        flag = "PASS" if report["passed"] else "FAIL"
        tol = report["tolerance"]
        tol_text = f" tol={tol:.1e}" if tol is not None else " (informational)"
        print(f"{flag} {report['label']}: deviation {report['absolute_deviation']:.3e}{tol_text}")
    if args.output:
        _write_json(args.output, data)
    if not data["passed"]:
        print("verification failed", file=sys.stderr)
        return NUMERICAL_EXIT
    return 0


def cmd_field(args) -> int:
    payload = {
        "state": parse_state(args.state),
        "dim": args.dim,
        "s": args.s,
        "convention": args.convention,
    }
    if args.grid:
        payload["grid"] = parse_grid(args.grid)
    status, data = call_service("/field", payload, args.server)
    if status != 200:
        return _exit_for_status(status, data)

    import numpy as np

    from .quasiprob import QuasiField, write_field_csv, write_field_raster
    from .regions2d import PhaseGrid

    grid = PhaseGrid.from_json(data["provenance"]["grid"])
    field = QuasiField(
        grid,
        np.array(data["values"]),
        data["s"],
        data["convention"],
        args.state,
    )
    if args.format == "json":
        _write_json(args.output, data)
        return 0
    if not args.output:
        print("error: csv/bin formats need --output", file=sys.stderr)
        return USAGE_EXIT
    if args.format == "csv":
        write_field_csv(args.output, field)
    else:
        write_field_raster(args.output, field)
    print(f"wrote {args.output}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("phaseovm.service:app", host=args.host, port=args.port)
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="phaseovm",
        description="Build and verify operator-valued measures over "
        "phase-space regions in a truncated Fock basis.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--dim", type=int, default=48, help="Fock truncation dimension")
        p.add_argument("--server", default=None, help="remote service URL (default: in-process)")
        p.add_argument("--output", default=None, help="artifact file path")

    p_build = sub.add_parser("build", help="build a region operator")
    common(p_build)
    p_build.add_argument("--region", required=True, help="region descriptor (JSON or shorthand)")
    p_build.add_argument("--path", choices=("analytic", "smeared", "oracle"), default="analytic")
    p_build.add_argument("--quadrature-points", type=int, default=64, dest="quadrature_points")
    p_build.add_argument("--grid", default=None, help="qmin,qmax,pmin,pmax,nq,np")
    p_build.set_defaults(func=cmd_build)

    p_mass = sub.add_parser("mass", help="quasi-probability mass of a 2D region")
    common(p_mass)
    p_mass.set_defaults(dim=32)
    p_mass.add_argument("--region", required=True)
    p_mass.add_argument("--state", required=True, help="state descriptor (JSON or shorthand)")
    p_mass.add_argument("--grid", default=None)
    p_mass.add_argument("--s", type=float, default=0.0, help="ordering parameter")
    p_mass.add_argument("--convention", choices=("bare", "two_over_pi"), default="bare")
    p_mass.set_defaults(func=cmd_mass)

    p_verify = sub.add_parser("verify", help="run a named verification target")
    common(p_verify)
    p_verify.set_defaults(dim=None)
    p_verify.add_argument(
        "--target",
        required=True,
        help="circle | disc | segment | interval | kraus | dilation | "
        "parity-sum | quasiprob | rotation | shift | squeeze | comb",
    )
    p_verify.add_argument("--a", type=float, default=None)
    p_verify.add_argument("--a0", type=float, default=None)
    p_verify.add_argument("--harmonics", default=None, help="comma-separated cosine coefficients")
    p_verify.add_argument("--L", type=float, default=None, dest="L")
    p_verify.add_argument("--lo", type=float, default=None)
    p_verify.add_argument("--hi", type=float, default=None)
    p_verify.add_argument("--c", type=float, default=None)
    p_verify.add_argument("--r", type=float, default=None)
    p_verify.add_argument("--n", type=int, default=None)
    p_verify.add_argument("--quadrature-points", type=int, default=None, dest="quadrature_points")
    p_verify.add_argument("--tolerance", type=float, default=None)
    p_verify.set_defaults(func=cmd_verify)

    p_field = sub.add_parser("field", help="quasi-probability field raster")
    common(p_field)
    p_field.set_defaults(dim=32)
    p_field.add_argument("--state", required=True)
    p_field.add_argument("--grid", default=None)
    p_field.add_argument("--s", type=float, default=0.0)
    p_field.add_argument("--convention", choices=("bare", "two_over_pi"), default="bare")
    p_field.add_argument("--format", choices=("json", "csv", "bin"), default="csv")
    p_field.set_defaults(func=cmd_field)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8134)
    p_serve.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE_EXIT if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (ValueError, json.JSONDecodeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_EXIT


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
