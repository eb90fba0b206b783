"""Domain errors raised by the simulation and optimization modules."""


class SingularPrecoderError(ValueError):
    """A zero-forcing Gram matrix is rank deficient or too ill-conditioned."""


class GroupSizeError(ValueError):
    """The distributed group is too large for the antenna count (needs L > K_d)."""


class DegenerateVectorError(ValueError):
    """A zero vector was passed where a direction is required."""


class QosInfeasibleError(RuntimeError):
    """The first convex subproblem is infeasible under the QoS constraints."""


class SolverError(RuntimeError):
    """The conic solver failed to return a usable solution."""


class NoFeasibleGroupingError(RuntimeError):
    """No (K_c, K_d) candidate satisfies the fronthaul and antenna caps."""
