"""Exception types shared across the solver modules."""


class ConvergenceError(RuntimeError):
    """An iterative routine (dual bisection, projected descent) exhausted its
    iteration cap without meeting its tolerance."""


class EnergyThresholdError(ValueError):
    """A closed form was requested below the energy threshold 2*B*(B-1)*log(2)
    where its all-positive-durations hypothesis breaks down."""
