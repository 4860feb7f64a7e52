"""Exception hierarchy shared by all modules."""


class IntervalCoverError(Exception):
    """Base class for every error raised by this package."""


class CycleDetected(IntervalCoverError, ValueError):
    pass


class ElementOutOfRange(IntervalCoverError, IndexError):
    pass


class NotRanked(IntervalCoverError, ValueError):
    pass


class NotDominated(IntervalCoverError, ValueError):
    """Raised when A <= B fails for a pair of subsets."""


class NotAntichain(IntervalCoverError, ValueError):
    pass


class NotALattice(IntervalCoverError, ValueError):
    pass


class NotDistributive(IntervalCoverError, ValueError):
    pass


class Infeasible(IntervalCoverError, ValueError):
    """Some span element lies in no candidate interval."""


class SizeLimit(IntervalCoverError, ValueError):
    pass


class MaxChain(IntervalCoverError, ValueError):
    """phi is undefined on a chain of maximum length."""


class PreconditionViolated(IntervalCoverError, ValueError):
    pass


class SizeOrder(IntervalCoverError, ValueError):
    pass


class SurjectionInvalid(IntervalCoverError, ValueError):
    pass


class TooSmall(IntervalCoverError, ValueError):
    pass


class LevelSizeMismatch(IntervalCoverError, ValueError):
    pass


class NotLevels(IntervalCoverError, ValueError):
    pass


class ParamTooSmall(IntervalCoverError, ValueError):
    pass


class InternalConsistencyError(IntervalCoverError, RuntimeError):
    """A construction that is guaranteed to succeed did not; always a bug."""


class UsageError(IntervalCoverError, ValueError):
    pass
