"""Exception hierarchy."""


class HyperMinHashError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(HyperMinHashError, ValueError):
    """A configuration value is outside its supported range."""


class IncompatibleSketchError(HyperMinHashError, ValueError):
    """Two sketches were built with different parameters, seed or hash."""


class EmptySketchError(HyperMinHashError, ValueError):
    """The requested estimate is undefined because both sketches are empty."""


class SaturatedSketchError(HyperMinHashError, ArithmeticError):
    """Cardinality fallback found no usable register mass."""


class CardinalityTooLargeError(HyperMinHashError, ValueError):
    """Cardinality is beyond the validity range of the approximation."""


class InfeasibleError(HyperMinHashError, ValueError):
    """No parameter choice satisfies the requested accuracy/range."""


class SketchFileError(HyperMinHashError):
    """Base class for malformed sketch files."""


class CorruptFileError(SketchFileError):
    pass


class UnsupportedVersionError(SketchFileError):
    pass


class TruncatedFileError(SketchFileError):
    pass
