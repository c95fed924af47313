# note: the doctsring code below within
# """ is converted to a restructuredText
# .rst file by sphinx to automatically
# generate the api's documentation
#
# docstring style used: Google style
"""
    Memoryless power amplifier (PA) models

    All models have a unit linear gain and map 0 to 0. The soft limiter is
    also the model of a PA linearized by a perfect per-antenna digital
    pre-distortion (DPD): linear up to saturation, then clipped.

    Copyright 2026 by the z3ro authors, GNU license
"""

from dataclasses import dataclass, replace

import numpy as np

from ..errors import InvalidParameter
from ..util import as_complex_vec
from .abstract_model import Model


class PaModel(Model):
    """Parent class of the PA transfer functions"""

    def __call__(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def with_p_sat(self, p_sat: float) -> "PaModel":
        """get the same model saturating at another power

        Models without saturation are returned unchanged.
        """
        return self


@dataclass(frozen=True)
class IdealLinear(PaModel):
    """Linear PA, y = x"""

    kind = "linear"

    def __call__(self, x):
        return np.asarray(x, dtype=np.complex128)


@dataclass(frozen=True)
class ThirdOrder(PaModel):
    """Third-order polynomial PA, y = x + a3·x·|x|^2

    A complex a3 models both AM/AM and AM/PM conversion. A real negative
    a3 is compressive.

    Args:
        a3 (complex): third-order coefficient
    """

    a3: complex = -0.05
    kind = "third-order"

    def __post_init__(self):
        object.__setattr__(self, "a3", complex(self.a3))
        if not np.isfinite(self.a3):
            raise InvalidParameter(f"""a3 must be finite, got {self.a3}""")

    def __call__(self, x):
        x = np.asarray(x, dtype=np.complex128)
        return x + self.a3 * x * np.abs(x) ** 2


def _check_p_sat(p_sat: float):
    if not np.isfinite(p_sat) or p_sat <= 0:
        raise InvalidParameter(f"""p_sat must be > 0, got {p_sat}""")


@dataclass(frozen=True)
class Rapp(PaModel):
    """Rapp PA, y = x / (1 + |x/sqrt(p_sat)|^(2S))^(1/(2S))

    Args:
        S (float): smoothness, the soft limiter is the S -> inf limit
        p_sat (float): saturation power
    """

    S: float = 2.0
    p_sat: float = 1.0
    kind = "rapp"
    flag_names = {"p_sat": "psat"}

    def __post_init__(self):
        if not np.isfinite(self.S) or self.S <= 0:
            raise InvalidParameter(f"""S must be > 0, got {self.S}""")
        _check_p_sat(self.p_sat)

    def __call__(self, x):
        x = np.asarray(x, dtype=np.complex128)
        level = np.abs(x) / np.sqrt(self.p_sat)
        two_s = 2.0 * self.S

        # factor out the level above saturation so large S does not overflow
        with np.errstate(all="ignore"):
            below = (1.0 + level**two_s) ** (-1.0 / two_s)
            above = (1.0 + level ** (-two_s)) ** (-1.0 / two_s) / level
        return x * np.where(level <= 1.0, below, above)

    def with_p_sat(self, p_sat):
        return replace(self, p_sat=float(p_sat))


@dataclass(frozen=True)
class SoftLimiter(PaModel):
    """Soft limiter: linear up to sqrt(p_sat), phase-preserving clip above

    Args:
        p_sat (float): saturation power
    """

    p_sat: float = 1.0
    kind = "softlim"
    flag_names = {"p_sat": "psat"}

    def __post_init__(self):
        _check_p_sat(self.p_sat)

    def __call__(self, x):
        x = np.asarray(x, dtype=np.complex128)
        with np.errstate(divide="ignore"):
            scale = np.minimum(1.0, np.sqrt(self.p_sat) / np.abs(x))
        return x * scale

    def with_p_sat(self, p_sat):
        return replace(self, p_sat=float(p_sat))


def amplify(model: PaModel, x: complex) -> complex:
    """amplify one complex sample

    Args:
        model (PaModel): PA model
        x (complex): PA input

    Usage:
        .. code-block:: python

            from z3ro.nodes.models.pa import Rapp, amplify
            amplify(Rapp(S=2, p_sat=1), 1.0)

            # Out: (0.8408964152537145+0j)

    Returns:
        complex: PA output
    """
    if not np.isfinite(x):
        raise InvalidParameter("""PA input must be finite""")
    return complex(model(np.complex128(x)))


def amplify_vec(model: PaModel, x) -> np.ndarray:
    """amplify a vector element-wise, one PA per entry

    Args:
        model (PaModel): PA model shared by all antennas
        x (array-like): PA inputs

    Returns:
        np.ndarray: PA outputs, same length as x
    """
    return model(as_complex_vec(x, "PA input"))


# --pa grammar
PA_KINDS = {
    IdealLinear.kind: IdealLinear,
    ThirdOrder.kind: ThirdOrder,
    Rapp.kind: Rapp,
    SoftLimiter.kind: SoftLimiter,
}
_FLAG_TO_FIELD = {"a3": "a3", "S": "S", "psat": "p_sat", "p_sat": "p_sat"}


def parse_pa(text: str) -> PaModel:
    """parse a PA specification

    Grammar: ``linear`` | ``third-order:a3=-0.05`` | ``rapp:S=2,psat=1``
    | ``softlim:psat=1``. a3 accepts complex values (e.g., ``-0.05+0.01j``).

    Args:
        text (str): PA specification

    Raises:
        InvalidParameter: unknown model or parameter, bad value

    Returns:
        PaModel: the model
    """
    kind, _, params_text = str(text).strip().partition(":")
    if kind not in PA_KINDS:
        raise InvalidParameter(
            f"""unknown PA model "{kind}", choose one of {sorted(PA_KINDS)}"""
        )

    # parse key=value pairs
    params = {}
    for item in filter(None, (s.strip() for s in params_text.split(","))):
        key, sep, value = item.partition("=")
        if not sep or key.strip() not in _FLAG_TO_FIELD:
            raise InvalidParameter(f"""bad PA parameter "{item}" in "{text}" """)
        field = _FLAG_TO_FIELD[key.strip()]
        try:
            params[field] = (
                complex(value.strip().replace("i", "j"))
                if field == "a3"
                else float(value)
            )
        except ValueError as error:
            raise InvalidParameter(
                f"""bad value for {key} in "{text}" """
            ) from error
    try:
        return PA_KINDS[kind](**params)
    except TypeError as error:
        raise InvalidParameter(
            f"""parameters {sorted(params)} do not apply to "{kind}" """
        ) from error
