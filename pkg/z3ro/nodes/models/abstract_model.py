# note: the doctsring code below within
# """ is converted to a restructuredText
# .rst file by sphinx to automatically
# generate the api's documentation
#
# docstring style used: Google style
"""
    Model abstractions

    Copyright 2026 by the z3ro authors, GNU license
"""


class Model:
    """Abstract model class

    This is the parent class to all power amplifier models.
    It contains generic attributes inherited by all models.
    """

    # name used in the --pa grammar
    kind = "model"

    # attribute names spelled differently in the --pa grammar
    flag_names = {}

    def get_attributes(self):
        """get model attributes

        Args:
            self (Model): the model

        Returns:
            (list): list the model attributes
        """
        return [
            k
            for k, v in vars(self).items()
            if not (k.startswith("_") or callable(v))
        ]

    def describe(self) -> str:
        """get the model in the --pa flag grammar

        Returns:
            (str): e.g., "rapp:S=2,psat=1"
        """
        attributes = self.get_attributes()
        if not attributes:
            return self.kind
        params = ",".join(
            f"{self.flag_names.get(k, k)}={_format_value(getattr(self, k))}"
            for k in attributes
        )
        return f"{self.kind}:{params}"


def _format_value(value) -> str:
    """format a parameter value for the --pa grammar"""
    if isinstance(value, complex):
        if value.imag == 0:
            return f"{value.real:g}"
        return f"{value.real:g}{value.imag:+g}j"
    return f"{value:g}"
