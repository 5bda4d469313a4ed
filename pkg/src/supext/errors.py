"""Exception hierarchy shared by all supext modules."""


class SupextError(Exception):
    """Base class for all errors raised by this package."""


class GroundTooLarge(SupextError):
    pass


class PointOutOfRange(SupextError):
    pass


class GroundMismatch(SupextError):
    pass


class NotLinked(SupextError):
    pass


class EmptySet(SupextError):
    pass


class EqualSystems(SupextError):
    pass


class InSubspace(SupextError):
    pass


class Inconsistent(SupextError):
    pass


class NotSurjective(SupextError):
    pass


class NotAnExtender(SupextError):
    pass


class TooLarge(SupextError):
    pass


class InvalidOperator(SupextError):
    pass


class CarrierMismatch(SupextError):
    pass


class NotUsco(SupextError):
    pass


class NotPointFixed(SupextError):
    pass


class UnknownSuite(SupextError):
    pass


class InputError(SupextError):
    """Malformed input file or CLI argument."""
