"""Exception types shared across the modem library."""


class GfdmError(Exception):
    """Base class for all library errors."""


class ConfigError(GfdmError):
    """Invalid parameter, shape, or configuration value."""


class SingularWindow(GfdmError):
    """Zero-forcing window requested but the transmit window has (near-)zero entries.

    For critically sampled block geometries this signals a genuine Gabor-frame
    singularity rather than a numerical accident.
    """


class SingularMatrix(GfdmError):
    """The dense modulation matrix is not numerically invertible."""


class SingularChannel(GfdmError):
    """The channel frequency response has a (near-)zero bin, one-tap inversion fails."""


class ChainLimitExceeded(GfdmError):
    """A direct-convolution run needs more parallel multiplier chains than available."""


class OverlapTooLarge(GfdmError):
    """The frequency support of a pulse spans more subcarrier bands than chains exist."""


class MissingCostEntry(GfdmError):
    """The cycle-cost table has no entry for a requested transform size."""
