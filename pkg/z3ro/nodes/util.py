# note: the doctsring code below within
# """ is converted to a restructuredText
# .rst file by sphinx to automatically
# generate the api's documentation
#
# docstring style used: Google style
"""
    Useful functions shared by every node: complex vectors,
    dB conversions and reproducible random streams

    Copyright 2026 by the z3ro authors, GNU license
"""

import hashlib
from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np

from .errors import InvalidParameter

# largest master seed
MAX_SEED = 2**64 - 1


def as_complex_vec(values: Iterable, name: str = "vector") -> np.ndarray:
    """cast values to a finite, non-empty 1-D complex vector

    Args:
        values (Iterable): complex amplitudes (x_m, w_m, h_m ...)
        name (str): name reported in errors

    Raises:
        InvalidParameter: empty, not 1-D or non-finite entries

    Returns:
        np.ndarray: complex128 vector of length M >= 1
    """
    vec = np.asarray(values, dtype=np.complex128)
    if vec.ndim == 0:
        vec = vec.reshape(1)
    if vec.ndim != 1 or vec.size == 0:
        raise InvalidParameter(
            f"""{name} must be a non-empty 1-D sequence, got shape {vec.shape}"""
        )
    if not np.all(np.isfinite(vec)):
        raise InvalidParameter(f"""{name} contains NaN or Inf entries""")
    return vec


def db_to_linear(x_db):
    """convert decibels to a linear power ratio

    Args:
        x_db (float | np.ndarray): value(s) in dB

    Usage:
        .. code-block:: python

            from z3ro.nodes.util import db_to_linear
            db_to_linear(26)

            # Out: 398.1071705534973

    Returns:
        float | np.ndarray: 10^(x/10)
    """
    if not np.all(np.isfinite(x_db)):
        raise InvalidParameter("""dB values must be finite""")
    value = 10.0 ** (np.asarray(x_db, dtype=float) / 10.0)
    return value if np.ndim(value) else float(value)


def linear_to_db(x, floor_db: float = None):
    """convert a linear power ratio to decibels

    Args:
        x (float | np.ndarray): non-negative power ratio(s)
        floor_db (float, optional): values below this floor are clipped
            to it (zero power maps to -inf otherwise)

    Returns:
        float | np.ndarray: 10·log10(x)
    """
    with np.errstate(divide="ignore"):
        x_db = 10.0 * np.log10(np.asarray(x, dtype=float))
    if floor_db is not None:
        x_db = np.maximum(x_db, floor_db)
    return x_db if np.ndim(x_db) else float(x_db)


def is_all_in(x: set, y: set) -> bool:
    """check if all x are in y"""
    return len(set(x) - set(y)) == 0


@dataclass(frozen=True)
class RngStream:
    """An independent random stream keyed by (master seed, stream id)

    Two streams with the same key always produce the same draws, whatever
    the number of workers or the order they run in.

    Args:
        master_seed (int): experiment seed, 64-bit unsigned
        stream_id (int): stream key, 64-bit unsigned
    """

    master_seed: int
    stream_id: int

    def __post_init__(self):
        for field in ("master_seed", "stream_id"):
            value = getattr(self, field)
            if not isinstance(value, (int, np.integer)) or not 0 <= value <= MAX_SEED:
                raise InvalidParameter(
                    f"""{field} must be a 64-bit unsigned integer, got {value!r}"""
                )

    def generator(self) -> np.random.Generator:
        """get a fresh numpy generator positioned at the start of the stream

        Returns:
            np.random.Generator: PCG64 generator
        """
        seq = np.random.SeedSequence(
            entropy=int(self.master_seed), spawn_key=(int(self.stream_id),)
        )
        return np.random.Generator(np.random.PCG64(seq))


def derive_stream(master_seed: int, label: Union[str, bytes]) -> RngStream:
    """derive the stream of one Monte Carlo trial from the experiment seed

    Args:
        master_seed (int): experiment seed
        label (str | bytes): trial label (e.g., "point-3", "channel-17")

    Usage:
        .. code-block:: python

            from z3ro.nodes.util import derive_stream
            rng = derive_stream(42, "trial-0").generator()

    Returns:
        RngStream: a stream keyed by the hash of the label
    """
    if isinstance(label, str):
        label = label.encode("utf-8")
    digest = hashlib.blake2b(bytes(label), digest_size=8).digest()
    return RngStream(
        master_seed=int(master_seed),
        stream_id=int.from_bytes(digest, "little"),
    )


def complex_gaussian(
    rng: np.random.Generator, size, power: float = 1.0
) -> np.ndarray:
    """draw circularly-symmetric complex Gaussian samples CN(0, power)

    The real parts are drawn first, then the imaginary parts.

    Args:
        rng (np.random.Generator): generator
        size (int | tuple): output shape
        power (float): variance E|s|^2

    Returns:
        np.ndarray: (a + jb)·sqrt(power/2)
    """
    real = rng.standard_normal(size)
    imag = rng.standard_normal(size)
    return (real + 1j * imag) * np.sqrt(power / 2.0)


def as_generator(rng) -> np.random.Generator:
    """get a numpy generator from a stream or pass a generator through

    Args:
        rng (RngStream | np.random.Generator): random source

    Returns:
        np.random.Generator: generator
    """
    if isinstance(rng, RngStream):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    raise InvalidParameter(
        f"""rng must be an RngStream or a numpy Generator, got {type(rng).__name__}"""
    )
