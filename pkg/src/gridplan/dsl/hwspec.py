"""Hardware specification file: INI sections keyed by device name.

::

    # Beaglebone Black
    [bbb]
    cores = 1
    max_cpu = 0.7   # inline comments allowed
    mem = 512
    max_mem = 0.7
    spc = 4096
    max_spc = 0.7

NIC rate/ceiling values are deliberately absent here — they come from the
platform configuration (``[network]`` section or CLI flags).
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass

from ..errors import BadNumber, MissingField, ParseError

REQUIRED_FIELDS = ("cores", "max_cpu", "mem", "max_mem", "spc", "max_spc")


@dataclass(frozen=True)
class HardwareRecord:
    cores: int
    max_cpu: float
    mem_mb: float
    max_mem: float
    spc_mb: float
    max_spc: float


@dataclass(frozen=True)
class HardwareSpecFile:
    records: tuple[tuple[str, HardwareRecord], ...] = ()

    def __contains__(self, key: str) -> bool:
        return any(k == key for k, _ in self.records)

    def __getitem__(self, key: str) -> HardwareRecord:
        for k, record in self.records:
            if k == key:
                return record
        raise KeyError(key)

    def keys(self) -> list[str]:
        return [k for k, _ in self.records]


def _make_parser() -> configparser.ConfigParser:
    parser = configparser.ConfigParser(interpolation=None,
                                       inline_comment_prefixes=("#", ";"),
                                       delimiters=("=",), strict=True)
    parser.optionxform = str
    return parser


def parse_hwspec(text: str) -> HardwareSpecFile:
    parser = _make_parser()
    try:
        parser.read_string(text)
    except configparser.MissingSectionHeaderError as exc:
        raise ParseError("content before any [section] header", exc.lineno) from exc
    except configparser.ParsingError as exc:
        lineno = exc.errors[0][0] if getattr(exc, "errors", None) else None
        raise ParseError(f"malformed line: {exc.message.splitlines()[0]}",
                         lineno) from exc
    except configparser.Error as exc:
        raise ParseError(str(exc)) from exc

    records = []
    for section in parser.sections():
        values = {}
        for name in REQUIRED_FIELDS:
            if not parser.has_option(section, name):
                raise MissingField(f"section [{section}] is missing field {name!r}")
            raw = parser.get(section, name)
            try:
                values[name] = float(raw)
            except ValueError:
                raise BadNumber(
                    f"section [{section}]: field {name!r} is not a number: {raw!r}") from None
            if not values[name] > 0:
                raise BadNumber(
                    f"section [{section}]: field {name!r} must be positive, got {raw}")
        if values["cores"] != int(values["cores"]):
            raise BadNumber(f"section [{section}]: cores must be an integer")
        records.append((section, HardwareRecord(
            cores=int(values["cores"]), max_cpu=values["max_cpu"],
            mem_mb=values["mem"], max_mem=values["max_mem"],
            spc_mb=values["spc"], max_spc=values["max_spc"])))
    return HardwareSpecFile(records=tuple(records))


def _fmt(value: float) -> str:
    return str(int(value)) if value == int(value) else repr(value)


def print_hwspec(spec: HardwareSpecFile) -> str:
    """Canonical INI text; parse(print(x)) == x."""
    chunks = []
    for key, record in spec.records:
        chunks.append(f"[{key}]\n"
                      f"cores = {record.cores}\n"
                      f"max_cpu = {_fmt(record.max_cpu)}\n"
                      f"mem = {_fmt(record.mem_mb)}\n"
                      f"max_mem = {_fmt(record.max_mem)}\n"
                      f"spc = {_fmt(record.spc_mb)}\n"
                      f"max_spc = {_fmt(record.max_spc)}\n")
    return "\n".join(chunks)
