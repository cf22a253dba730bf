"""
Run settings shared by the command line and the library entry points.
"""

import json
import os
from pathlib import Path
from typing import Optional

from attrs import asdict, define, evolve, field, fields
from attrs.validators import gt, in_, instance_of
from loguru import logger

from polytile.utils import EXPORT_FORMATS


ENV_VAR = "POLYTILE_CONFIG"


@define(frozen=True)
class Config:
    """
    Attributes
    ----------
    node_budget : int
        Tile placements tried by the torus solver.
    offset_budget : int
        Choices tried by the offset search.
    max_torus : int
        Largest torus side tried by ``solve --auto``.
    torus_repeat_limit : int
        Largest repetition factor tried when offsets cannot close a torus.
    outdir : str
        Default output directory.
    export_format : str
        One of ``cells``, ``layers``, ``obj``, ``npz``.
    """

    node_budget: int = field(default=1_000_000, converter=int, validator=gt(0))
    offset_budget: int = field(default=100_000, converter=int, validator=gt(0))
    max_torus: int = field(default=4, converter=int, validator=gt(0))
    torus_repeat_limit: int = field(default=3, converter=int, validator=gt(0))
    outdir: str = field(default="polytile_out", validator=instance_of(str))
    export_format: str = field(default="cells", validator=in_(EXPORT_FORMATS))

    @classmethod
    def load(cls, path: Optional[str] = None) -> "Config":
        """
        Read settings from a JSON file.

        Parameters
        ----------
        path : str, optional
            Falls back to ``$POLYTILE_CONFIG``; defaults when neither is set.

        Raises
        ------
        ValueError
            On unknown keys or invalid values.
        """
        path = path or os.environ.get(ENV_VAR)
        if not path:
            return cls()
        data = json.loads(Path(path).read_text())
        known = {a.name for a in fields(cls)}
        unknown = set(data) - known
        if unknown:
            logger.error(f"Unknown config keys in {path}: {sorted(unknown)}")
            raise ValueError(f"Unknown config keys in {path}: {sorted(unknown)}")
        try:
            config = cls(**data)
        except TypeError as err:
            logger.error(f"Invalid config in {path}: {err}")
            raise ValueError(f"Invalid config in {path}: {err}") from err
        logger.debug(f"Config loaded from {path}")
        return config

    def override(self, **kwargs) -> "Config":
        """A copy with every non-None keyword applied."""
        return evolve(self, **{k: v for k, v in kwargs.items() if v is not None})

    def to_dict(self) -> dict:
        return asdict(self)
