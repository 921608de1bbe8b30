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

import os
import warnings
from functools import partial
from pathlib import Path
from typing import Callable, Optional, Text, Union

import yaml
from pyannote.core.utils.helper import get_class_by_name
from pyannote.pipeline import Pipeline as _Pipeline

from unlevents import __version__
from unlevents.utils.version import check_version


class Pipeline(_Pipeline):
    """Base class for unlevents pipelines

    Sub-classes declare their hyper-parameters (and sub-pipelines) as
    attributes in `__init__`, provide `default_parameters` and implement
    `apply`. Hyper-parameter values are checked by `check_parameters` every
    time the pipeline is instantiated.
    """

    @classmethod
    def from_pretrained(
        cls,
        checkpoint_path: Union[Text, Path],
        hparams_file: Union[Text, Path] = None,
    ) -> "Pipeline":
        """Load pipeline from a YAML configuration file

        Parameters
        ----------
        checkpoint_path : Path or str
            Path to pipeline configuration file, e.g.

                version: 0.1.0
                pipeline:
                  name: unlevents.pipelines.EventExtraction
                  params:
                    keep_singletons: false
                params:
                  segmentation:
                    threshold: 0.8
        hparams_file: Path or str, optional
            Path to a hyperparameters file.

        Returns
        -------
        Pipeline
            An instance of the requested pipeline.
        """

        checkpoint_path = str(checkpoint_path)
        if not os.path.isfile(checkpoint_path):
            raise FileNotFoundError(f"Pipeline file not found: {checkpoint_path}")

        with open(checkpoint_path, "r") as fp:
            config = yaml.load(fp, Loader=yaml.SafeLoader)

        if "version" in config:
            check_version("unlevents", config["version"], __version__, what="Pipeline")

        pipeline_name = config["pipeline"]["name"]
        Klass = get_class_by_name(
            pipeline_name, default_module_name="unlevents.pipelines"
        )
        params = config["pipeline"].get("params", {})
        pipeline = Klass(**params)

        if "freeze" in config:
            pipeline.freeze(config["freeze"])

        if "params" in config:
            pipeline.instantiate(config["params"])

        if hparams_file is not None:
            pipeline.load_params(hparams_file)

        return pipeline

    @staticmethod
    def setup_hook(file, hook: Optional[Callable] = None) -> Callable:
        def noop(*args, **kwargs):
            return

        return partial(hook or noop, file=file)

    def default_parameters(self):
        raise NotImplementedError()

    def check_parameters(self):
        """Raise ValueError when instantiated hyper-parameters are out of range"""
        pass

    def instantiate(self, params) -> "Pipeline":
        super().instantiate(params)
        self.check_parameters()
        return self

    def __call__(self, *args, **kwargs):
        if not self.instantiated:
            try:
                default_parameters = self.default_parameters()
            except NotImplementedError:
                raise RuntimeError(
                    "A pipeline must be instantiated with `pipeline.instantiate(parameters)` before it can be applied."
                )

            self.instantiate(default_parameters)
            warnings.warn(
                f"The pipeline has been automatically instantiated with {default_parameters}."
            )

        return self.apply(*args, **kwargs)
