"""Exception and warning types raised by the solvers."""


class NieError(Exception):
    """Base class for all errors raised by :mod:`nie`."""


class ZeroDecayRate(NieError):
    pass


class UnsupportedScheme(NieError):
    pass


class DegenerateSystem(NieError):
    """The 2x2 population system is numerically singular."""


class NormalizationUndefined(NieError):
    """A zero-field population difference vanishes, so chi/chi0 is undefined."""


class NotApplicable(NieError):
    pass


class NoBracket(NieError):
    pass


class NonFinite(NieError):
    pass


class NoConvergence(NieError):
    pass


class UnknownPreset(NieError, KeyError):
    pass


class IncompatibleRegime(NieError):
    pass


class ScanPointError(NieError):
    """A numeric failure at a specific scan point."""

    def __init__(self, index, value, cause):
        self.index = index
        self.value = value
        self.cause = cause
        super().__init__(f"scan point {index} (value={value!r}): {cause}")


class ValidityWarning(UserWarning):
    """An asymptotic formula is used outside its regime of validity."""
