"""Exception hierarchy shared by the kernels and the experiment harness."""


class HankelError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(HankelError, ValueError):
    """A sequence or vector has a length incompatible with the operation."""


class IndexOutOfRangeError(HankelError, IndexError):
    """A matrix or limb index lies outside the valid range."""


class ParameterError(HankelError, ValueError):
    """A numeric parameter (limb size, cutoff, depth, transform length) is invalid."""


class LimbError(HankelError, ValueError):
    """A limb value does not fit in its base."""


class ScaleError(HankelError, ArithmeticError):
    """A value cannot be represented in standard floating precision."""


class ConfigError(HankelError):
    """The experiment configuration is inconsistent."""


class ValidationError(HankelError):
    """An asserted invariant or operation-count bound failed."""
