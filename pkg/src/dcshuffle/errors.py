"""Exception hierarchy shared by all dcshuffle modules."""


class DcShuffleError(Exception):
    """Base class for every error raised by this package."""


class InvalidInstance(DcShuffleError):
    def __init__(self, violations):
        self.violations = list(violations)
        msg = "; ".join(f"[{v.code}] {v.message}" for v in self.violations)
        super().__init__(msg or "invalid instance")


class DivisibilityError(DcShuffleError, ValueError):
    pass


class UndeliverableMessage(DcShuffleError):
    pass


class UnknownVertex(DcShuffleError, KeyError):
    pass


class BudgetExceeded(DcShuffleError):
    """An explicit search budget ran out before the answer was known."""


class BlowupBudgetExceeded(BudgetExceeded):
    """Fourier-Motzkin intermediate row count passed the hard cap."""


class Unbounded(DcShuffleError):
    pass


class Infeasible(DcShuffleError):
    pass


class MissingCoordinate(DcShuffleError, KeyError):
    pass


class DimensionCapExceeded(DcShuffleError):
    pass


class UnboundedPolytope(DcShuffleError):
    pass


class IncompleteChoice(DcShuffleError):
    pass


class StrategyExhausted(DcShuffleError):
    def __init__(self, summaries):
        self.summaries = list(summaries)
        super().__init__(
            f"no decoding choice achieves the target ({len(self.summaries)} tried)")


class NonuniformCapacity(DcShuffleError, ValueError):
    pass
