"""Exception types raised across the package."""


class LackLabError(Exception):
    """Base class for all package-specific errors."""


class MalformedPcap(LackLabError):
    """Input bytes are not a well-formed classic pcap capture."""


class InvalidProfile(LackLabError):
    """Codec profile violates its invariants."""


class FrameTooSmall(LackLabError):
    """Configured frame length cannot hold the full header stack plus payload."""


class NoEligiblePackets(LackLabError):
    """No carrier packet exceeds the embedding size threshold."""


class SecretTooLarge(LackLabError):
    """Secret exceeds carrier capacity and strict mode is on."""


class ChunkTooLarge(LackLabError):
    """Secret chunk does not fit the target payload."""


class FramingError(LackLabError):
    """A packet classified as covert does not de-frame cleanly."""


class StreamTooShort(LackLabError):
    """Operation needs more packets than the stream holds."""


class EmptyStream(LackLabError):
    """Operation is undefined on a stream with no packets."""
