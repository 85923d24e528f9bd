from enum import Enum, IntEnum


class CouplingMode(Enum):
    SHARED_NOISE = "shared-noise"
    INDEPENDENT = "independent"
    SHARED_CLOCK_INDEPENDENT_SHOCKS = "shared-clock"


class DrawChannel(IntEnum):
    CLOCK = 0
    MARKS = 1
    DERIVE = 2


class ClockSlot(IntEnum):
    """Fixed clock-channel slots shared by every event-driven kernel."""
    WAITING_TIME = 0
    EVENT_TYPE = 1


class FigureId(Enum):
    WAGE = "wage"
    BELIEF = "belief"
    INCOME_JUMP = "income-jump"
    INCOME_DRIFT = "income-drift"


class ExitCode(IntEnum):
    OK = 0
    BAD_CONFIG = 2
    SIMULATION_ERROR = 3
    INSUFFICIENT_TAIL = 4
    CHECK_FAILED = 5


class ConvergenceStatus(Enum):
    FITTED = "fitted"
    ALREADY_CONVERGED = "already_converged"
    TOO_FEW_POINTS = "too_few_points"


DOMINANCE_TOLERANCE = 1e-12
WEIGHT_SUM_TOLERANCE = 1e-12
SEMI_FLOW_TOLERANCE = 1e-9
ANALYTIC_GRID_POINTS = 4096
ANALYTIC_REFINE_TOLERANCE = 1e-10
EFFECTIVE_SUPPORT_TAIL = 1e-12
DEFAULT_CONFIDENCE = 0.999
NOISE_FLOOR_MULTIPLE = 4.0
MIN_TAIL_EXCEEDANCES = 10
BOOTSTRAP_RESAMPLES = 200
DEFAULT_CHECKPOINTS = (0.0, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0)
