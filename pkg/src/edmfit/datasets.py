"""Built-in count datasets and the dataset file format.

File grammar: one ``count,frequency`` record per line, counts contiguous
from zero, ``#`` starts a comment, and a trailing ``+`` on the last count
marks an open tail ("K or more").  UTF-8; LF or CRLF.

The six built-in tables ship with per-dataset chi-square pooling pins and
SHA-256 fingerprints; ``verify_builtins`` re-hashes them so any drift in
the frequencies fails the self-check command.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from pathlib import Path

from .errors import DatasetFormatError
from .inference import CountDataset


@dataclass(frozen=True)
class BuiltinDataset:
    data: CountDataset
    source: str
    explicit_cut: int | None
    sha256: str


def canonical_text(data: CountDataset) -> str:
    """Serialization used for fingerprinting a dataset."""
    body = ",".join(str(f) for f in data.frequencies)
    return f"{data.name};{body};open={int(data.open_tail)}"


def fingerprint(data: CountDataset) -> str:
    return hashlib.sha256(canonical_text(data).encode("utf-8")).hexdigest()


BUILTINS: dict[str, BuiltinDataset] = {
    "set1": BuiltinDataset(
        CountDataset("set1", (103704, 14075, 1766, 255, 45, 6, 2)),
        "Automobile insurance claims, Switzerland 1961",
        explicit_cut=5,
        sha256="afeb26bea0a78d365255b753f0c08e42111ff74dfa6953334fd616f97064560b",
    ),
    "set2": BuiltinDataset(
        CountDataset("set2", (3719, 232, 38, 7, 3, 1)),
        "Automobile insurance claims, Zaire 1974",
        explicit_cut=4,
        sha256="cdd49b87bdaaf2b6a50769b1416277d4cf1c3fbbee51104567a0e0efaca67679",
    ),
    "set3": BuiltinDataset(
        CountDataset("set3", (20592, 2651, 297, 41, 7, 0, 1)),
        "Automobile insurance claims, Germany 1960",
        explicit_cut=4,
        sha256="4bfdc52f4da23a07ba8138febd2064335c1b32968c63d4071d1617db73e7892f",
    ),
    "set4": BuiltinDataset(
        CountDataset("set4", (70, 38, 17, 10, 9, 3, 2, 1, 0)),
        "European red mites on apple leaves",
        explicit_cut=7,
        sha256="fa427153f6bc10d0f371f57c371b9da16a33a0375f2a98fbf995a2089a2a8c80",
    ),
    "set5": BuiltinDataset(
        CountDataset("set5", (296, 74, 26, 8, 4, 4, 1, 0, 1)),
        "Accidents among machinists",
        explicit_cut=5,
        sha256="9b1771cce4334ac77341f53ee6b9844312fdd3084230979a925dd30cd2c06a54",
    ),
    "set6": BuiltinDataset(
        CountDataset("set6", (2659, 244, 19, 2, 0), open_tail=True),
        "Hospitalizations per family per year",
        explicit_cut=None,
        sha256="b53d0586cad1aedf9380990823866c709441e18a115b4b993c5dc5d50ceef612",
    ),
}


def get_builtin(name: str) -> BuiltinDataset:
    try:
        return BUILTINS[name]
    except KeyError:
        raise DatasetFormatError(
            f"unknown builtin dataset {name!r}; available: {', '.join(sorted(BUILTINS))}"
        ) from None


def verify_builtins() -> list[str]:
    """Names whose frequencies no longer match their pinned fingerprint."""
    return [
        name for name, b in BUILTINS.items() if fingerprint(b.data) != b.sha256
    ]


def parse_dataset(text: str, name: str = "dataset") -> CountDataset:
    """Parse the ``count,frequency`` format; raises with 1-based line numbers."""
    records: list[tuple[int, int, bool, int]] = []  # (count, freq, open, line)
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise DatasetFormatError(
                f"expected 'count,frequency', got {raw!r}", line=lineno
            )
        count_text, freq_text = parts[0].strip(), parts[1].strip()
        open_flag = count_text.endswith("+")
        if open_flag:
            count_text = count_text[:-1]
        try:
            count = int(count_text)
            freq = int(freq_text)
        except ValueError:
            raise DatasetFormatError(
                f"count and frequency must be integers, got {raw!r}", line=lineno
            ) from None
        if freq < 0:
            raise DatasetFormatError(f"negative frequency {freq}", line=lineno)
        records.append((count, freq, open_flag, lineno))
    if not records:
        raise DatasetFormatError("no data records found")
    for idx, (count, _, open_flag, lineno) in enumerate(records):
        if count != idx:
            raise DatasetFormatError(
                f"counts must be contiguous from 0; expected {idx}, got {count}",
                line=lineno,
            )
        if open_flag and idx != len(records) - 1:
            raise DatasetFormatError(
                "only the last count may carry a '+' open-tail marker", line=lineno
            )
    return CountDataset(
        name,
        tuple(freq for _, freq, _, _ in records),
        open_tail=records[-1][2],
    )


def load_dataset_file(path: str | Path) -> CountDataset:
    path = Path(path)
    return parse_dataset(path.read_text(encoding="utf-8"), name=path.stem)
