# note: the doctsring code below within
# """ is converted to a restructuredText
# .rst file by sphinx to automatically
# generate the api's documentation
#
# docstring style used: Google style
"""
    Data engineering module: channel and precoder files, result tables and
    their JSON sidecars

    Copyright 2026 by the z3ro authors, GNU license
"""

import json
import os
from typing import Any, Dict

import numpy as np
import pandas as pd

from .. import __version__
from .errors import ConfigError, InvalidParameter
from .models.precoder import EXPLICIT, Precoder

# number format and line ending of the result tables
FLOAT_FORMAT = "%.12g"
LINE_TERMINATOR = "\r\n"


def read_channel_csv(file_path: str) -> np.ndarray:
    """load a channel vector from a CSV with columns index, re, im

    Args:
        file_path (str): file path

    Raises:
        ConfigError: missing file, columns or antennas

    Returns:
        np.ndarray: complex channel, ordered by index
    """
    try:
        data = pd.read_csv(file_path)
    except (OSError, pd.errors.ParserError) as error:
        raise ConfigError([("channel.path", f"cannot read {file_path}: {error}")]) from error
    missing = {"index", "re", "im"} - set(data.columns)
    if missing:
        raise ConfigError([("channel.path", f"missing columns {sorted(missing)}")])
    data = data.sort_values("index")
    if not np.array_equal(data["index"].to_numpy(), np.arange(len(data))):
        raise ConfigError([("channel.path", "index must run over 0..M-1")])
    return data["re"].to_numpy(dtype=float) + 1j * data["im"].to_numpy(dtype=float)


def write_channel_csv(h, file_path: str):
    """write a channel vector as index, re, im"""
    h = np.asarray(getattr(h, "h", h))
    pd.DataFrame(
        {"index": np.arange(h.size), "re": h.real, "im": h.imag}
    ).to_csv(file_path, index=False, float_format=FLOAT_FORMAT, lineterminator=LINE_TERMINATOR)


def write_precoder_csv(precoder: Precoder, file_path: str, antennas=None):
    """write precoder weights as index, re, im, is_saturated

    Args:
        precoder (Precoder): weights
        file_path (str): CSV path, parent folders are created
        antennas (array-like, optional): antenna index of each weight when
            inactive antennas were dropped, 0..M-1 by default
    """
    index = np.arange(precoder.M) if antennas is None else np.asarray(antennas, dtype=int)
    if index.size != precoder.M:
        raise InvalidParameter(
            f"""{index.size} antenna indices for {precoder.M} weights"""
        )
    saturated = np.zeros(precoder.M, dtype=bool)
    saturated[list(precoder.saturated_set)] = True
    parent = os.path.dirname(file_path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    pd.DataFrame(
        {
            "index": index,
            "re": precoder.w.real,
            "im": precoder.w.imag,
            "is_saturated": saturated,
        }
    ).to_csv(file_path, index=False, float_format=FLOAT_FORMAT, lineterminator=LINE_TERMINATOR)


def read_precoder_csv(file_path: str) -> Precoder:
    """load precoder weights written by `write_precoder_csv`

    Weights are ordered by index; gaps left by dropped antennas are closed.

    Raises:
        InvalidParameter: missing columns or duplicated indices

    Returns:
        Precoder: weights of kind "explicit"
    """
    data = pd.read_csv(file_path)
    missing = {"index", "re", "im", "is_saturated"} - set(data.columns)
    if missing:
        raise InvalidParameter(f"""{file_path}: missing columns {sorted(missing)}""")
    if data["index"].duplicated().any():
        raise InvalidParameter(f"""{file_path}: duplicated antenna indices""")
    data = data.sort_values("index").reset_index(drop=True)
    return Precoder(
        w=data["re"].to_numpy(dtype=float) + 1j * data["im"].to_numpy(dtype=float),
        saturated_set=np.flatnonzero(data["is_saturated"].astype(bool).to_numpy()),
        kind=EXPLICIT,
    )


def write_results(table: pd.DataFrame, file_path: str):
    """write a result table as CSV

    Rows keep their order; reals are written with 12 significant digits
    and lines end with CRLF.

    Args:
        table (pd.DataFrame): results
        file_path (str): CSV path, parent folders are created
    """
    parent = os.path.dirname(file_path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    table.to_csv(
        file_path,
        index=False,
        float_format=FLOAT_FORMAT,
        lineterminator=LINE_TERMINATOR,
    )


def sidecar_path(file_path: str) -> str:
    """path of the JSON sidecar of a result file"""
    return os.path.splitext(file_path)[0] + ".json"


def write_sidecar(file_path: str, config: Dict[str, Any], extra: Dict[str, Any] = None):
    """write the resolved config of a run next to its result file

    Args:
        file_path (str): result CSV path
        config (Dict[str, Any]): resolved config
        extra (Dict[str, Any], optional): run facts (version, rows, ...)
    """
    sidecar = {"version": __version__, "config": config, **(extra or {})}
    with open(sidecar_path(file_path), "w", encoding="utf8") as f:
        json.dump(sidecar, f, indent=2, sort_keys=True, default=_jsonable)


def _jsonable(value):
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, complex):
        return [value.real, value.imag]
    return str(value)
