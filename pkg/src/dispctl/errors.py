"""Exception types shared across the package."""


class ConfigError(Exception):
    """Invalid scenario configuration (CLI exit code 1)."""


class HypothesisViolation(Exception):
    """A structural assumption failed at the current truncation (CLI exit code 2)."""


class SingularClusterError(HypothesisViolation):
    """A cluster block of the moment matrix is numerically singular."""

    def __init__(self, cluster, detail=""):
        self.cluster = list(cluster)
        msg = f"singular moment block for eigenvalue cluster {self.cluster}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class IllConditionedGramError(HypothesisViolation):
    """The exponential Gram matrix is too ill-conditioned to invert reliably."""

    def __init__(self, condition, lower, horizon):
        self.condition = condition
        self.lower = lower
        self.horizon = horizon
        super().__init__(
            f"Gram matrix condition {condition:.3e} (lower frame bound {lower:.3e}) "
            f"at horizon T={horizon:g}; increase the horizon to separate the "
            f"exponentials"
        )


class UnobservableError(HypothesisViolation):
    """The damping Gramian is not positive definite at this truncation."""


class CriterionInapplicableError(HypothesisViolation):
    """The eigenvalue multiplicity pattern matches neither supported tail structure."""


class AmbiguousClusteringError(HypothesisViolation):
    """Eigenvalue grouping changes under a tolerance refinement."""
