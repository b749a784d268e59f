"""
Custom exceptions untuk weakgraph

Every error carries an exit code, the CLI counterpart of an HTTP status:
2 configuration, 3 infeasible inference (never raised), 4 numerical/data failure.
"""
from pydantic import ValidationError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3
EXIT_NUMERICAL = 4


class WeakGraphError(Exception):
    """Base exception for every failure raised by weakgraph services"""
    exit_code: int = EXIT_NUMERICAL

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


# Configuration errors

class ConfigError(WeakGraphError):
    """Invalid experiment or graph configuration"""
    exit_code = EXIT_CONFIG


class InvalidSpec(ConfigError):
    """Parameters outside their admissible range"""


class RetryExhausted(ConfigError):
    """Graph resampling could not satisfy the structural constraints"""
    def __init__(self, attempts: int, reason: str):
        super().__init__(
            f"Could not draw a valid weak graph after {attempts} attempts "
            f"(last rejection: {reason}). "
            "Increase the connection probabilities or max_retries."
        )
        self.attempts = attempts


class ArtifactMissing(ConfigError):
    """A command needs an artifact produced by an earlier command"""
    def __init__(self, path: str, producer: str):
        super().__init__(f"Missing artifact {path}. Run `weakgraph {producer}` first.")
        self.path = path


class WrongConfiguration(ConfigError):
    """Operation invoked outside the configuration it is defined for"""


class InvalidCorrelation(ConfigError):
    """Equicorrelation coefficient outside (-1/(n-1), 1)"""


class InvalidShape(ConfigError):
    """Beta shape parameters would not stay positive"""


class DegenerateMeans(ConfigError):
    """Two likelihood means coincide"""


class DegeneratePoints(ConfigError):
    """EDM triple with a zero distance"""


class DimensionMismatch(ConfigError):
    """Array shapes do not agree"""


# Data / model errors

class StructureViolation(WeakGraphError):
    """Combination matrix breaks the weak-graph block structure"""


class OutOfSupport(WeakGraphError):
    """Observation outside the support of a descriptor"""


class DivergenceInfinite(WeakGraphError):
    """Likelihood vanishes on the truth support"""


class AllZeroLikelihood(WeakGraphError):
    """Every hypothesis assigns zero likelihood to an observation"""


class InvalidBelief(WeakGraphError):
    """Belief with zero mass or broken normalization"""


class InconsistentData(WeakGraphError):
    """Belief data disagrees with the hypothesis used to build a system"""


class MissingRecord(WeakGraphError):
    """Trajectory does not contain the requested snapshot"""


class AmbiguousMinimizer(WeakGraphError):
    """Network divergence has more than one minimizer"""
    def __init__(self, candidates: list[int]):
        super().__init__(
            f"Network divergence has tied minimizers at hypotheses {candidates}; "
            "the limiting hypothesis is not unique"
        )
        self.candidates = candidates


# Numerical failures

class NumericalError(WeakGraphError):
    """Generic numerical failure"""


class NoConvergence(NumericalError):
    """Iterative method exceeded its iteration budget"""


class SingularSystem(NumericalError):
    """Linear system is numerically singular"""


class CertificateViolation(NumericalError):
    """Closed-form certificate failed its identity checks"""


def handle_error(error: Exception) -> tuple[int, str]:
    """
    Map an exception to a CLI exit code and message

    Args:
        error: Exception raised while running a command

    Returns:
        Tuple (exit_code, message)
    """
    if isinstance(error, WeakGraphError):
        return error.exit_code, f"{type(error).__name__}: {error.detail}"

    if isinstance(error, ValidationError):
        messages = []
        for item in error.errors():
            field = " -> ".join(str(loc) for loc in item.get("loc", []))
            messages.append(f"{field}: {item.get('msg', 'Validation error')}")
        return EXIT_CONFIG, "Invalid configuration: " + "; ".join(messages)

    if isinstance(error, FileNotFoundError):
        return EXIT_CONFIG, f"File not found: {error.filename}"

    return EXIT_NUMERICAL, f"{type(error).__name__}: {error}"
