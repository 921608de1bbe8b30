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

import warnings
from typing import Text

from semver import VersionInfo


class VersionWarning(UserWarning):
    """Emitted when an artifact was produced by another version"""


def check_version(library: Text, theirs: Text, mine: Text, what: Text = "Pipeline"):
    """Warn when `theirs` and `mine` versions of `library` may not be compatible"""

    theirs = ".".join(str(theirs).split(".")[:3])
    mine = ".".join(str(mine).split(".")[:3])

    theirs = VersionInfo.parse(theirs)
    mine = VersionInfo.parse(mine)

    if theirs.major > mine.major:
        warnings.warn(
            f"{what} was produced with {library} {theirs}, yours is {mine}. "
            f"Bad things will probably happen unless you upgrade {library} to {theirs.major}.x.",
            VersionWarning,
        )

    elif theirs.major < mine.major:
        warnings.warn(
            f"{what} was produced with {library} {theirs}, yours is {mine}. "
            f"Bad things might happen unless you revert {library} to {theirs.major}.x.",
            VersionWarning,
        )

    elif theirs.minor > mine.minor:
        warnings.warn(
            f"{what} was produced with {library} {theirs}, yours is {mine}. "
            f"This should be OK but you might want to upgrade {library}.",
            VersionWarning,
        )
