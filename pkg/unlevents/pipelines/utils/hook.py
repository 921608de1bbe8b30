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

"""Pipeline hooks

Pipelines call `hook(step_name, step_artifact, file=file)` after each
step, plus `total` and `completed` keyword arguments for steps that
iterate over documents.
"""

from typing import Any, Callable, List, Mapping, Optional, Text

from rich.console import Console
from rich.progress import (
    BarColumn,
    MofNCompleteColumn,
    Progress,
    TextColumn,
    TimeElapsedColumn,
)


class ArtifactHook:
    """Hook to save artifacts of internal steps as soon as they are produced

    Parameters
    ----------
    writers : mapping
        Step name (e.g. "segments", "clustering") to a callable that saves
        the artifact of this step. Other steps are ignored.

    Usage
    -----
    >>> writers = {"segments": lambda segments: save_segments("segments.jsonl", segments)}
    >>> with ArtifactHook(writers) as hook:
    ...     output = pipeline("/path/to/corpus", hook=hook)
    >>> hook.saved
    ['segments']
    """

    def __init__(self, writers: Mapping[Text, Callable[[Any], None]]):
        self.writers = dict(writers)
        self.saved: List[Text] = []

    def __enter__(self):
        return self

    def __exit__(self, *args):
        pass

    def __call__(
        self,
        step_name: Text,
        step_artifact: Any,
        file: Optional[Mapping] = None,
        total: Optional[int] = None,
        completed: Optional[int] = None,
    ):
        writer = self.writers.get(step_name)
        if writer is None or step_artifact is None:
            return

        writer(step_artifact)
        self.saved.append(step_name)


class ProgressHook:
    """Hook to show progress of each internal step

    Parameters
    ----------
    transient: bool, optional
        Clear the progress on exit. Defaults to False.
    console: rich.console.Console, optional
        Where to render progress. Defaults to standard error.

    Example
    -------
    with ProgressHook() as hook:
       output = pipeline("/path/to/corpus", hook=hook)
    """

    def __init__(self, transient: bool = False, console: Optional[Console] = None):
        self.transient = transient
        self.console = console or Console(stderr=True)

    def __enter__(self):
        self.progress = Progress(
            TextColumn("[progress.description]{task.description}"),
            BarColumn(),
            MofNCompleteColumn(),
            TimeElapsedColumn(),
            console=self.console,
            transient=self.transient,
        )
        self.progress.start()
        return self

    def __exit__(self, *args):
        self.progress.stop()

    def __call__(
        self,
        step_name: Text,
        step_artifact: Any,
        file: Optional[Mapping] = None,
        total: Optional[int] = None,
        completed: Optional[int] = None,
    ):
        if completed is None:
            completed = total = 1

        if not hasattr(self, "step_name") or step_name != self.step_name:
            self.step_name = step_name
            self.step = self.progress.add_task(self.step_name)

        self.progress.update(self.step, completed=completed, total=total)

        if completed >= total:
            self.progress.refresh()


class Hooks:
    """List of hooks

    Usage
    -----
    >>> with Hooks(ProgressHook(), ArtifactHook(writers)) as hook:
    ...     output = pipeline("/path/to/corpus", hook=hook)

    """

    def __init__(self, *hooks):
        self.hooks = hooks

    def __enter__(self):
        for hook in self.hooks:
            if hasattr(hook, "__enter__"):
                hook.__enter__()
        return self

    def __exit__(self, *args):
        for hook in self.hooks:
            if hasattr(hook, "__exit__"):
                hook.__exit__(*args)

    def __call__(
        self,
        step_name: Text,
        step_artifact: Any,
        file: Optional[Mapping] = None,
        total: Optional[int] = None,
        completed: Optional[int] = None,
    ):
        for hook in self.hooks:
            hook(step_name, step_artifact, file=file, total=total, completed=completed)
