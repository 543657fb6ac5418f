"""Flat key = value run manifests.

A manifest captures everything needed to reproduce a run: the experiment
name, the chain and input parameters, the seed for random inputs, output
paths and the tool version. The text form is one ``key = value`` line per
field, so manifests diff cleanly; parsing the written form yields an equal
manifest.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

from . import __version__


class ManifestError(ValueError):
    """Malformed manifest text or field value."""


@dataclass
class RunManifest:
    experiment: str = "transfer"
    d: int = 2
    n: int = 4
    steps: int | None = None
    bell: tuple[int, int] | None = None
    single: tuple[complex, ...] | None = None
    input_site: int = 0
    total_time: float | None = None
    noise_p: float | None = None
    p_grid: tuple[float, ...] | None = None
    couplings: tuple[float, ...] | None = None
    seed: int | None = None
    jobs: int = 1
    out: str | None = None
    plot: str | None = None
    version: str = __version__


def _format(value) -> str:
    if value is None:
        return ""
    if isinstance(value, tuple):
        return ",".join(_format(v) for v in value)
    if isinstance(value, complex):
        return repr(value).strip("()")
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _parse(raw: str, kind: str):
    raw = raw.strip()
    if raw == "":
        return None
    try:
        if kind == "int":
            return int(raw)
        if kind == "float":
            return float(raw)
        if kind == "str":
            return raw
        if kind == "ints":
            return tuple(int(v) for v in raw.split(","))
        if kind == "floats":
            return tuple(float(v) for v in raw.split(","))
        if kind == "complexes":
            return tuple(complex(v) for v in raw.split(","))
    except ValueError as exc:
        raise ManifestError(f"cannot parse {raw!r} as {kind}: {exc}") from exc
    raise ManifestError(f"unknown field kind {kind!r}")


_FIELD_KINDS = {
    "experiment": "str",
    "d": "int",
    "n": "int",
    "steps": "int",
    "bell": "ints",
    "single": "complexes",
    "input_site": "int",
    "total_time": "float",
    "noise_p": "float",
    "p_grid": "floats",
    "couplings": "floats",
    "seed": "int",
    "jobs": "int",
    "out": "str",
    "plot": "str",
    "version": "str",
}


def manifest_to_text(manifest: RunManifest) -> str:
    lines = []
    for f in fields(RunManifest):
        lines.append(f"{f.name} = {_format(getattr(manifest, f.name))}")
    return "\n".join(lines) + "\n"


def manifest_from_text(text: str) -> RunManifest:
    values: dict = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ManifestError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, _, raw = line.partition("=")
        key = key.strip()
        if key not in _FIELD_KINDS:
            raise ManifestError(f"line {lineno}: unknown key {key!r}")
        values[key] = _parse(raw, _FIELD_KINDS[key])
    manifest = RunManifest()
    for key, value in values.items():
        if value is None and key in ("experiment", "d", "n", "input_site", "jobs", "version"):
            continue  # required fields keep their defaults when blank
        if key == "bell" and value is not None:
            if len(value) != 2:
                raise ManifestError(f"bell needs exactly two indices, got {value}")
            value = (value[0], value[1])
        setattr(manifest, key, value)
    return manifest
