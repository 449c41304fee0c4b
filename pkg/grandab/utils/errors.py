# Custom error classes


class GrandabError(Exception):
    """Base exception for the decoder library"""

    pass


class DimensionError(GrandabError, ValueError):
    """Vector or matrix shapes do not match (caller bug)"""

    pass


class CodeConstructionError(GrandabError):
    """A linear code could not be built from the given generator or parity-check data"""

    pass


class ParityCheckFileError(CodeConstructionError):
    """Malformed parity-check matrix file"""

    pass


class DecoderStateError(GrandabError):
    """Invalid operation on the dial architecture state"""

    pass


class ConfigurationError(GrandabError, ValueError):
    """Invalid configuration or command-line value"""

    pass
