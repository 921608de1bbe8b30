# The MIT License (MIT)
#
# Copyright (c) 2024- unlevents contributors
#
# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in
# all copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
# SOFTWARE.

"""Versioned line-oriented persistence

Every artifact starts with a "#<HEADER> v1" line, followed by one JSON
object per line. Readers refuse files whose header does not match.
"""

import json
from pathlib import Path
from typing import Any, Iterable, List, Mapping, Text, Union

FORMAT_VERSION = "v1"


class FormatVersionMismatch(ValueError):
    """Raised when an artifact is missing or carries an unexpected header"""


class IoFailure(OSError):
    """Raised when an artifact cannot be read or written"""


class MissingArtifact(FileNotFoundError):
    """Raised when a stage needs an artifact that was not produced yet"""


def header_line(header: Text) -> Text:
    return f"#{header} {FORMAT_VERSION}"


def dumps(row: Any, sort_keys: bool = True) -> Text:
    return json.dumps(row, ensure_ascii=False, sort_keys=sort_keys)


def write_text(path: Union[Text, Path], text: Text) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
    except OSError as e:
        raise IoFailure(f"cannot write {path}: {e}") from e


def read_text(path: Union[Text, Path]) -> Text:
    try:
        return Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise IoFailure(f"cannot decode {path}: {e}") from e
    except OSError as e:
        raise IoFailure(f"cannot read {path}: {e}") from e


def write_jsonl(
    path: Union[Text, Path],
    header: Text,
    rows: Iterable[Mapping],
    sort_keys: bool = True,
) -> None:
    """Write `rows` to `path`, one JSON object per line, after the header

    Keys are sorted unless `sort_keys` is False, in which case they keep
    their insertion order.
    """
    lines = [header_line(header)] + [dumps(row, sort_keys=sort_keys) for row in rows]
    write_text(path, "\n".join(lines) + "\n")


def read_jsonl(path: Union[Text, Path], header: Text) -> List[Any]:
    """Read rows written by `write_jsonl`

    Raises
    ------
    FormatVersionMismatch
        When the file is missing, its header is not the expected one or one of
        its lines is not valid JSON.
    IoFailure
        When the file exists but cannot be read.
    """

    path = Path(path)
    if not path.is_file():
        raise FormatVersionMismatch(f"{path} not found (expected '{header_line(header)}')")

    lines = read_text(path).splitlines()
    if not lines or lines[0].strip() != header_line(header):
        found = lines[0].strip() if lines else ""
        raise FormatVersionMismatch(
            f"{path}: expected '{header_line(header)}' header, found {found!r}"
        )

    rows = []
    for number, line in enumerate(lines[1:], 2):
        if not line.strip():
            continue
        try:
            rows.append(json.loads(line))
        except json.JSONDecodeError as e:
            raise FormatVersionMismatch(f"{path}:{number}: invalid row ({e})") from e
    return rows


def require(path: Union[Text, Path]) -> Path:
    """Check that an artifact produced by an earlier stage exists"""
    path = Path(path)
    if not path.is_file():
        raise MissingArtifact(f"{path} not found: run the previous stage first")
    return path
