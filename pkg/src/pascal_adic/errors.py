"""Exception hierarchy shared by every module of the package."""


class PascalAdicError(Exception):
    """Base class; the CLI maps any subclass to exit code 3."""


class OutOfWindow(PascalAdicError):
    """A vertex, or one of the vertices a query needs, lies outside the constructed region."""


class CapExceeded(PascalAdicError):
    def __init__(self, count, cap):
        super().__init__(f"{count} paths exceed the enumeration cap {cap}")
        self.count = count
        self.cap = cap


class ConsistencyError(PascalAdicError):
    """Two forced labels collide on one fiber."""


class GreedyDriftError(PascalAdicError):
    """A greedy guide path left the distance band around its target ray."""


class InjectivityError(PascalAdicError):
    pass


class MissingGuide(PascalAdicError):
    pass


class CycleError(PascalAdicError):
    pass


class EmptyLevel(PascalAdicError):
    pass
