"""External validators described in a TOML file and driven as subprocesses.

Example::

    [[adapter]]
    name = "my-validator"
    command = "my-validator --data {graph} --shapes {schema}"
    graph_format = "nt"
    timeout = 5
    decode.yes = "^conforms"
    decode.no = "does not conform"
    exit_codes = { "0" = "yes", "1" = "no" }
"""

from __future__ import annotations

import re
import shlex
import shutil
import subprocess
import sys
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import RecshapeError
from ..model import serialize_ntriples
from ..schema.io import dump_schema
from .corpus import TestCase
from .outcome import Outcome

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover - exercised on 3.10
    import tomli as tomllib

DEFAULT_TIMEOUT = 5.0
GRAPH_FORMATS = ("nt",)
SCHEMA_FORMATS = ("json",)


class AdapterConfigError(RecshapeError, ValueError):
    pass


@dataclass(frozen=True)
class EngineAdapter:
    name: str
    command: str
    yes: str
    no: str
    graph_format: str = "nt"
    schema_format: str = "json"
    timeout: float = DEFAULT_TIMEOUT
    exit_codes: dict = field(default_factory=dict, compare=False)

    def argv(self, graph: Path, schema: Path) -> list[str]:
        return [tok.format(graph=str(graph), schema=str(schema)) for tok in shlex.split(self.command)]

    def decode(self, returncode: int, output: str) -> Outcome:
        """Map an exit status and combined output to exactly one outcome."""
        mapped = self.exit_codes.get(str(returncode))
        if mapped is not None:
            return Outcome.parse(mapped)
        said_yes = re.search(self.yes, output, re.MULTILINE) is not None
        said_no = re.search(self.no, output, re.MULTILINE) is not None
        if said_yes != said_no:
            return Outcome.yes() if said_yes else Outcome.no()
        if returncode != 0:
            return Outcome.fail("crash" if not output.strip() else "error")
        return Outcome.fail("undecodable")


def _adapter(entry: dict) -> EngineAdapter:
    try:
        name, command = entry["name"], entry["command"]
        decode = entry["decode"]
        yes, no = decode["yes"], decode["no"]
    except (KeyError, TypeError) as exc:
        raise AdapterConfigError(f"adapter entry is missing {exc}") from None
    for pattern in (yes, no):
        try:
            re.compile(pattern)
        except re.error as exc:
            raise AdapterConfigError(f"adapter {name}: bad pattern {pattern!r}: {exc}") from None
    graph_format = entry.get("graph_format", "nt")
    schema_format = entry.get("schema_format", "json")
    if graph_format not in GRAPH_FORMATS:
        raise AdapterConfigError(f"adapter {name}: unsupported graph_format {graph_format!r}")
    if schema_format not in SCHEMA_FORMATS:
        raise AdapterConfigError(f"adapter {name}: unsupported schema_format {schema_format!r}")
    codes = {str(k): str(v) for k, v in entry.get("exit_codes", {}).items()}
    for v in codes.values():
        try:
            Outcome.parse(v)
        except ValueError:
            raise AdapterConfigError(f"adapter {name}: bad exit-code outcome {v!r}") from None
    return EngineAdapter(
        name=name,
        command=command,
        yes=yes,
        no=no,
        graph_format=graph_format,
        schema_format=schema_format,
        timeout=float(entry.get("timeout", DEFAULT_TIMEOUT)),
        exit_codes=codes,
    )


def parse_adapters(text: str) -> list[EngineAdapter]:
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise AdapterConfigError(f"bad adapter config: {exc}") from None
    entries = doc.get("adapter", [])
    if not isinstance(entries, list):
        raise AdapterConfigError("expected [[adapter]] tables")
    return [_adapter(e) for e in entries]


def load_adapters(path: str | Path) -> list[EngineAdapter]:
    return parse_adapters(Path(path).read_text(encoding="utf-8"))


def export_test(t: TestCase, directory: Path) -> tuple[Path, Path]:
    """Write a test's graph and schema into ``directory``."""
    directory.mkdir(parents=True, exist_ok=True)
    graph = directory / f"{t.id}.nt"
    schema = directory / f"{t.id}.json"
    graph.write_text(serialize_ntriples(t.graph), encoding="utf-8")
    schema.write_text(dump_schema(t.schema), encoding="utf-8")
    return graph, schema


def run_external(a: EngineAdapter, t: TestCase, workdir: str | Path) -> Outcome:
    """Run one adapter on one test; every failure is returned, not raised."""
    work = Path(workdir) / a.name / t.id
    graph, schema = export_test(t, work)
    argv = a.argv(graph.resolve(), schema.resolve())
    if not argv or shutil.which(argv[0]) is None:
        return Outcome.fail("crash")
    try:
        proc = subprocess.run(argv, cwd=work, capture_output=True, text=True, timeout=a.timeout)
    except subprocess.TimeoutExpired:
        return Outcome.fail("timeout")
    except OSError:
        return Outcome.fail("crash")
    return a.decode(proc.returncode, proc.stdout + proc.stderr)
