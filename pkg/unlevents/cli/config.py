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

"""Command line configuration

Settings are resolved in this order (last wins): defaults below, YAML
configuration file (--config), command line options.

    # config.yaml
    threshold: 0.8
    weights: [1.0, 1.0, 3.0]
    idf: false
    loose_features: false
    keep_singletons: false
    verbatim_fig2: false
    fig8: false
"""

from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Text, Union

import yaml
from omegaconf import OmegaConf
from omegaconf.errors import OmegaConfBaseException

from unlevents.pipelines.ranking import DEFAULT_WEIGHTS, check_weights
from unlevents.pipelines.utils.scoring import check_threshold


class ConfigError(ValueError):
    ...


@dataclass
class PipelineConfig:
    threshold: float = 0.8
    weights: List[float] = field(default_factory=lambda: list(DEFAULT_WEIGHTS))
    idf: bool = False
    loose_features: bool = False
    keep_singletons: bool = False
    verbatim_fig2: bool = False
    fig8: bool = False

    def check(self) -> "PipelineConfig":
        try:
            check_threshold(self.threshold)
            check_weights(self.weights)
        except ValueError as e:
            raise ConfigError(str(e)) from e
        return self

    def parameters(self) -> Dict:
        """Hyper-parameters of EventExtraction"""
        w_df, w_tf, w_title = self.weights
        return {
            "segmentation": {"threshold": self.threshold},
            "clustering": {"threshold": self.threshold},
            "ranking": {"w_df": w_df, "w_tf": w_tf, "w_title": w_title},
        }

    def to_dict(self) -> Dict:
        return asdict(self)


def parse_weights(text: Text) -> List[float]:
    """Parse "df,tf,title" weights, e.g. "1,1,3" """
    try:
        weights = [float(w) for w in text.split(",")]
    except ValueError as e:
        raise ConfigError(f"invalid weights {text!r} (expected e.g. '1,1,3').") from e
    if len(weights) != 3:
        raise ConfigError(f"invalid weights {text!r} (expected three values).")
    return weights


def load_config(
    config_file: Optional[Union[Text, Path]] = None, **overrides
) -> PipelineConfig:
    """Resolve configuration

    Parameters
    ----------
    config_file : Path or str, optional
        YAML configuration file.
    **overrides
        Command line values. None values are ignored.

    Raises
    ------
    ConfigError
        On unreadable file, unknown key, wrong type or out-of-range value.
    """

    config = OmegaConf.structured(PipelineConfig)
    try:
        if config_file is not None:
            config = OmegaConf.merge(config, OmegaConf.load(config_file))
        config = OmegaConf.merge(
            config, {k: v for k, v in overrides.items() if v is not None}
        )
        config = OmegaConf.to_object(config)
    except (OmegaConfBaseException, yaml.YAMLError, OSError) as e:
        raise ConfigError(f"invalid configuration: {e}") from e

    return config.check()
