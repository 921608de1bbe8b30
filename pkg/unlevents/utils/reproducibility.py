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

"""Run manifest

Every stage writes `manifest.json` next to its artifacts: library version,
effective configuration and SHA-256 digests of the corpus files. The
manifest holds no timestamp, so that two runs over the same corpus with
the same configuration produce identical output directories.
"""

import hashlib
import json
import warnings
from pathlib import Path
from typing import Dict, Iterable, Mapping, Optional, Text, Union

from unlevents import __version__
from unlevents.utils.serialization import IoFailure, read_text, write_text
from unlevents.utils.version import check_version

MANIFEST_NAME = "manifest.json"


class ReproducibilityWarning(UserWarning):
    ...


def file_digests(paths: Iterable[Union[Text, Path]]) -> Dict[Text, Text]:
    """SHA-256 digest of each file, keyed by file name"""
    digests = {}
    for path in sorted(Path(p) for p in paths):
        try:
            digests[path.name] = hashlib.sha256(path.read_bytes()).hexdigest()
        except OSError as e:
            raise IoFailure(f"cannot read {path}: {e}") from e
    return digests


def load_manifest(out_dir: Union[Text, Path]) -> Optional[Dict]:
    path = Path(out_dir) / MANIFEST_NAME
    if not path.is_file():
        return None
    try:
        return json.loads(read_text(path))
    except json.JSONDecodeError:
        warnings.warn(
            ReproducibilityWarning(f"{path} is not valid JSON and will be overwritten.")
        )
        return None


def update_manifest(
    out_dir: Union[Text, Path],
    config: Mapping,
    inputs: Optional[Mapping[Text, Text]] = None,
) -> Dict:
    """Write manifest of `out_dir`

    Parameters
    ----------
    out_dir : Path or str
        Output directory.
    config : Mapping
        Effective configuration.
    inputs : Mapping, optional
        Digests of the corpus files. Defaults to those of the existing
        manifest, for stages that do not read the corpus.

    Warns
    -----
    ReproducibilityWarning
        When artifacts already in `out_dir` were produced with another
        configuration or from another corpus.
    """

    previous = load_manifest(out_dir)

    if previous is not None:
        if "version" in previous:
            check_version("unlevents", previous["version"], __version__, what="Output directory")
        if previous.get("config") != dict(config):
            warnings.warn(
                ReproducibilityWarning(
                    f"Artifacts in {out_dir} were produced with another configuration."
                )
            )
        if inputs is not None and previous.get("inputs") != dict(inputs):
            warnings.warn(
                ReproducibilityWarning(
                    f"Artifacts in {out_dir} were produced from another corpus."
                )
            )
        if inputs is None:
            inputs = previous.get("inputs", {})

    manifest = {
        "version": __version__,
        "config": dict(config),
        "inputs": dict(inputs or {}),
    }
    write_text(
        Path(out_dir) / MANIFEST_NAME,
        json.dumps(manifest, indent=2, sort_keys=True, ensure_ascii=False) + "\n",
    )
    return manifest
