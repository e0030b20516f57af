"""Exception types shared across the toolkit."""


class CmtkError(ValueError):
    """Invalid user input (bad complex, bad flag, violated precondition)."""


class NotAFace(CmtkError):
    pass


class NotPure(CmtkError):
    def __init__(self, what="operation"):
        super().__init__(f"{what} requires pure complex")


class NonGenericWeights(CmtkError):
    """Two distinct nonempty flats carry the same weight."""

    def __init__(self, first, second, weight):
        self.pair = (first, second)
        self.weight = weight
        super().__init__(
            f"weights are not generic: flats {sorted(map(str, first))} and "
            f"{sorted(map(str, second))} both have weight {weight}"
        )


class OracleDisagreement(RuntimeError):
    """Two independent computations of the same property disagree.

    This signals a bug in the toolkit, never bad input.
    """


class TheoremViolation(RuntimeError):
    """A computation contradicts a proven theorem (a bug trap).

    ``components`` carries the witness partition for disconnected walk graphs.
    """

    def __init__(self, message, components=None):
        super().__init__(message)
        self.components = components
