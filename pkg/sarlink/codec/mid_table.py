"""Maritime Identification Digits (country code) lookup."""

import functools
import logging
from pathlib import Path
from typing import Dict, Optional, Union

import pandas as pd

from .beacon import CountryError

DEFAULT_MIDS_FILE = Path(__file__).parent / "data" / "mids.csv"
MAX_MID = 1023


class MidTable:
    """Immutable MID -> country name table loaded from a ``mid,name`` CSV file."""

    def __init__(self, path: Union[str, Path] = DEFAULT_MIDS_FILE):
        self.logger = logging.getLogger(__name__)
        self.path = Path(path)
        self._names = self._load(self.path)

    def _load(self, path: Path) -> Dict[int, str]:
        df = pd.read_csv(path, dtype={"mid": int, "name": str})
        df["name"] = df["name"].str.strip()
        out_of_range = df[(df["mid"] < 0) | (df["mid"] > MAX_MID)]
        if not out_of_range.empty:
            raise CountryError(f"{path}: MIDs outside 0..{MAX_MID}: {out_of_range['mid'].tolist()}")
        names = dict(zip(df["mid"].tolist(), df["name"].tolist()))
        self.logger.debug(f"Loaded {len(names)} MID assignments from {path}")
        return names

    def __len__(self) -> int:
        return len(self._names)

    def lookup(self, mid: int) -> Optional[str]:
        """Country name for a MID, or None if unassigned."""
        if not 0 <= mid <= MAX_MID:
            raise CountryError(f"MID must be in 0..{MAX_MID}, got {mid}")
        return self._names.get(int(mid))


@functools.lru_cache(maxsize=None)
def default_mid_table() -> MidTable:
    return MidTable()


def country_name(mid: int) -> Optional[str]:
    """Country name from the bundled MID table; None if unassigned."""
    return default_mid_table().lookup(mid)
