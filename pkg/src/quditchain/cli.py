"""Command-line client for the transfer service.

Subcommands: ``generators``, ``pst-time``, ``transfer``, ``noisy-sweep``.
By default requests are served by an in-process copy of the HTTP app;
``--server URL`` points the same requests at a running instance instead.

Exit codes: 0 success, 2 usage or configuration error, 3 when the chain has
no transfer time in the scan window.

Numeric columns in CSV output carry 12 significant digits, so a repeated run
from the same manifest is byte-identical.
"""

from __future__ import annotations

import argparse
import asyncio
import csv
import io
import sys

import httpx
import numpy as np

from . import __version__
from .manifest import ManifestError, RunManifest, manifest_from_text, manifest_to_text
from .svgplot import line_chart

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NO_PST = 3


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_USAGE):
        super().__init__(message)
        self.code = code


def _request(server: str | None, method: str, path: str, payload: dict | None = None):
    """Issue one HTTP request, against a remote server or the in-process app."""
    if server:
        with httpx.Client(base_url=server, timeout=600.0) as client:
            response = client.request(method, path, json=payload)
    else:
        from .service import create_app

        async def _call():
            transport = httpx.ASGITransport(app=create_app())
            async with httpx.AsyncClient(transport=transport, base_url="http://service") as client:
                return await client.request(method, path, json=payload)

        response = asyncio.run(_call())
    if response.status_code >= 400:
        detail = response.json().get("detail", response.text)
        if isinstance(detail, dict) and detail.get("error") == "pst_not_found":
            raise CliError(detail.get("message", "no transfer time found"), EXIT_NO_PST)
        raise CliError(f"service rejected the request: {detail}", EXIT_USAGE)
    return response.json()


def _fmt(value: float) -> str:
    return f"{value:.12g}"


def _fmt_complex(z: complex, digits: int = 6) -> str:
    re, im = z.real, z.imag
    if abs(im) < 1e-12:
        return f"{re:.{digits}g}"
    if abs(re) < 1e-12:
        return f"{im:.{digits}g}i"
    sign = "+" if im >= 0 else "-"
    return f"{re:.{digits}g}{sign}{abs(im):.{digits}g}i"


def _write_text(path: str | None, content: str):
    if path is None or path == "-":
        sys.stdout.write(content)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(content)


# ---------------------------------------------------------------------------
# manifest <-> argparse plumbing


def _parse_pair(raw: str, name: str) -> tuple[int, int]:
    parts = raw.split(",")
    if len(parts) != 2:
        raise CliError(f"--{name} expects 'p,q', got {raw!r}")
    try:
        return int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise CliError(f"--{name} expects integers: {exc}") from exc


def _parse_floats(raw: str, name: str) -> tuple[float, ...]:
    try:
        values = tuple(float(v) for v in raw.split(",") if v.strip() != "")
    except ValueError as exc:
        raise CliError(f"--{name} expects comma-separated numbers: {exc}") from exc
    if not values:
        raise CliError(f"--{name} got an empty list")
    return values


def _parse_amplitudes(raw: str) -> tuple[complex, ...]:
    try:
        return tuple(complex(v) for v in raw.split(","))
    except ValueError as exc:
        raise CliError(f"--single expects amplitudes like '0.6,0.8' or '0.6,0.8j': {exc}") from exc


def _load_manifest(args: argparse.Namespace, experiment: str) -> RunManifest:
    """Build the run manifest from --config (if any) with flags on top."""
    if getattr(args, "config", None):
        try:
            with open(args.config) as fh:
                manifest = manifest_from_text(fh.read())
        except OSError as exc:
            raise CliError(f"cannot read config file: {exc}") from exc
        except ManifestError as exc:
            raise CliError(f"bad config file: {exc}") from exc
    else:
        manifest = RunManifest()
    manifest.experiment = experiment
    for name in ("d", "n", "steps", "input_site", "total_time", "noise_p",
                 "seed", "jobs", "out", "plot"):
        value = getattr(args, name.replace("-", "_"), None)
        if value is not None:
            setattr(manifest, name, value)
    if getattr(args, "bell", None) is not None:
        manifest.bell = _parse_pair(args.bell, "bell")
        manifest.single = None
    if getattr(args, "single", None) is not None:
        if args.single == "random":
            manifest.single = _random_amplitudes(manifest.d, manifest.seed)
        else:
            manifest.single = _parse_amplitudes(args.single)
        manifest.bell = None
    if getattr(args, "couplings", None) is not None:
        manifest.couplings = _parse_floats(args.couplings, "couplings")
    if getattr(args, "p_grid", None) is not None:
        manifest.p_grid = _parse_floats(args.p_grid, "p-grid")
    manifest.version = __version__
    return manifest


def _random_amplitudes(d: int, seed: int | None) -> tuple[complex, ...]:
    rng = np.random.default_rng(seed)
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    v = v / np.linalg.norm(v)
    return tuple(complex(z) for z in v)


def _payload_input(manifest: RunManifest) -> dict:
    if manifest.bell is not None:
        return {"bell": list(manifest.bell)}
    if manifest.single is not None:
        return {"single": [[z.real, z.imag] for z in manifest.single]}
    raise CliError("no input state: give --bell p,q or --single amplitudes")


def _base_payload(manifest: RunManifest) -> dict:
    payload = {"d": manifest.d, "n": manifest.n, "input_site": manifest.input_site}
    if manifest.couplings is not None:
        payload["couplings"] = list(manifest.couplings)
    if manifest.steps is not None:
        payload["steps"] = manifest.steps
    if manifest.total_time is not None:
        payload["total_time"] = manifest.total_time
    payload.update(_payload_input(manifest))
    return payload


# ---------------------------------------------------------------------------
# subcommands


def _cmd_generators(args: argparse.Namespace) -> int:
    data = _request(args.server, "GET", f"/generators/{args.d}")
    for gen in data["generators"]:
        matrix = [[complex(re, im) for re, im in row] for row in gen["matrix"]]
        cells = [[_fmt_complex(z) for z in row] for row in matrix]
        width = max(len(c) for row in cells for c in row)
        print(gen["name"])
        for row in cells:
            print("  [ " + "  ".join(c.rjust(width) for c in row) + " ]")
        print()
    return EXIT_OK


def _cmd_pst_time(args: argparse.Namespace) -> int:
    payload = {"d": args.d, "n": args.n}
    if args.couplings is not None:
        payload["couplings"] = list(_parse_floats(args.couplings, "couplings"))
    data = _request(args.server, "POST", "/pst-time", payload)
    print(f"t_star = {_fmt(data['t_star'])}")
    print(f"fidelity = {_fmt(data['fidelity'])}")
    return EXIT_OK


def _trace_csv(data: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(["step", "time", "fidelity_raw", "fidelity_bell", "entropy", "support_size"])
    for rec in data["records"]:
        # noisy runs report fidelity against the noiseless final target state
        raw = rec["fidelity_arrival"] if data["noisy"] else rec["fidelity_raw"]
        writer.writerow([
            rec["step"],
            _fmt(rec["time"]),
            _fmt(raw),
            _fmt(rec["fidelity_bell"]),
            _fmt(rec["entropy"]),
            len(rec["support"]),
        ])
    return buf.getvalue()


def _cmd_transfer(args: argparse.Namespace) -> int:
    manifest = _load_manifest(args, "transfer")
    payload = _base_payload(manifest)
    if manifest.noise_p is not None:
        payload["noise_p"] = manifest.noise_p
    data = _request(args.server, "POST", "/transfer", payload)

    _write_text(manifest.out, _trace_csv(data))
    if manifest.plot:
        steps = [r["step"] for r in data["records"]]
        series = [
            ("fidelity_raw", steps, [r["fidelity_raw"] for r in data["records"]]),
            ("fidelity_bell", steps, [r["fidelity_bell"] for r in data["records"]]),
            ("entropy", steps, [r["entropy"] for r in data["records"]]),
        ]
        _write_text(manifest.plot, line_chart(series, "transfer trace", "step", "value"))

    final = data["records"][-1]
    label = final["bell_label"]
    summary = [
        f"t_star = {_fmt(data['total_time'])}",
        f"final fidelity_raw = {_fmt(final['fidelity_raw'])}",
        f"final fidelity_bell = {_fmt(final['fidelity_bell'])}"
        + (f" at bell({label[0]},{label[1]})" if label else ""),
        f"final entropy = {_fmt(final['entropy'])}",
    ]
    if data["noisy"]:
        summary.insert(1, f"final fidelity vs noiseless target = {_fmt(final['fidelity_arrival'])}")
    if data["arrival_leakage"] is not None:
        summary.append(f"arrival leakage = {_fmt(data['arrival_leakage'])}")
    print("; ".join(summary))
    return EXIT_OK


def _sweep_csv(data: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(["p", "step", "fidelity"])
    for point in data["points"]:
        for rec in point["records"]:
            writer.writerow([_fmt(point["p"]), rec["step"], _fmt(rec["fidelity"])])
    return buf.getvalue()


def _cmd_noisy_sweep(args: argparse.Namespace) -> int:
    manifest = _load_manifest(args, "noisy-sweep")
    if manifest.bell is None and manifest.single is None:
        manifest.bell = (0, 0)
    if manifest.p_grid is None:
        raise CliError("noisy-sweep needs --p-grid, e.g. --p-grid 0,0.25,0.5,0.75,1")
    payload = _base_payload(manifest)
    payload["p_grid"] = list(manifest.p_grid)
    payload["jobs"] = manifest.jobs
    data = _request(args.server, "POST", "/noisy-sweep", payload)

    _write_text(manifest.out, _sweep_csv(data))
    if manifest.plot:
        series = [
            (
                f"p = {point['p']:g}",
                [r["step"] for r in point["records"]],
                [r["fidelity"] for r in point["records"]],
            )
            for point in data["points"]
        ]
        _write_text(
            manifest.plot,
            line_chart(series, "fidelity under phase damping", "step", "fidelity"),
        )
    finals = ", ".join(
        f"p={point['p']:g}: {_fmt(point['records'][-1]['fidelity'])}" for point in data["points"]
    )
    print(f"t_star = {_fmt(data['total_time'])}; final fidelities: {finals}")
    return EXIT_OK


def _cmd_manifest(args: argparse.Namespace) -> int:
    experiment = "noisy-sweep" if args.p_grid is not None else "transfer"
    manifest = _load_manifest(args, experiment)
    sys.stdout.write(manifest_to_text(manifest))
    return EXIT_OK


# ---------------------------------------------------------------------------


def _add_chain_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--d", type=int, default=None, help="levels per qudit")
    parser.add_argument("--n", type=int, default=None, help="chain length")
    parser.add_argument("--couplings", help="comma-separated link couplings (default: transfer profile)")
    parser.add_argument("--steps", type=int, default=None, help="evolution slices (8 unitary, 16 noisy)")
    parser.add_argument("--total-time", type=float, default=None, dest="total_time",
                        help="evolution time (default: derived transfer time)")
    parser.add_argument("--input-site", type=int, default=None, dest="input_site",
                        help="leftmost site carrying the input (default 0)")
    parser.add_argument("--bell", help="generalized Bell input 'p,q'")
    parser.add_argument("--single", help="single-qudit amplitudes 'a0,a1,...' or 'random'")
    parser.add_argument("--seed", type=int, default=None, help="seed for --single random")
    parser.add_argument("--config", help="manifest file; flags override its values")
    parser.add_argument("--out", help="CSV output path ('-' or omitted: stdout)")
    parser.add_argument("--plot", help="SVG plot output path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quditchain",
        description="Qudit chain state-transfer experiments.",
    )
    parser.add_argument("--server", help="base URL of a running service (default: in-process)")
    parser.add_argument("--version", action="version", version=f"quditchain {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("generators", help="print the SU(d) generator matrices")
    p_gen.add_argument("--d", type=int, required=True, help="levels per qudit (2..6)")
    p_gen.set_defaults(func=_cmd_generators)

    p_pst = sub.add_parser("pst-time", help="derive the transfer time of a chain")
    p_pst.add_argument("--d", type=int, required=True)
    p_pst.add_argument("--n", type=int, required=True)
    p_pst.add_argument("--couplings")
    p_pst.set_defaults(func=_cmd_pst_time)

    p_tr = sub.add_parser("transfer", help="run one transfer and emit its trace")
    _add_chain_flags(p_tr)
    p_tr.add_argument("--noise-p", type=float, default=None, dest="noise_p",
                      help="phase-damping parameter (1 = noiseless)")
    p_tr.set_defaults(func=_cmd_transfer)

    p_sw = sub.add_parser("noisy-sweep", help="sweep the phase-damping parameter")
    _add_chain_flags(p_sw)
    p_sw.add_argument("--p-grid", dest="p_grid", help="comma-separated damping parameters")
    p_sw.add_argument("--jobs", type=int, default=None, help="concurrent sweep points")
    p_sw.set_defaults(func=_cmd_noisy_sweep)

    p_mf = sub.add_parser("manifest", help="print the resolved manifest for a run")
    _add_chain_flags(p_mf)
    p_mf.add_argument("--noise-p", type=float, default=None, dest="noise_p")
    p_mf.add_argument("--p-grid", dest="p_grid")
    p_mf.add_argument("--jobs", type=int, default=None)
    p_mf.set_defaults(func=_cmd_manifest)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except ManifestError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except httpx.HTTPError as exc:
        print(f"error: cannot reach the service: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
