from typing import List, Optional


class GrembedError(Exception):
    """Base class for every error raised by the grembed pipeline."""


class MalformedLineError(GrembedError, ValueError):
    """A JSON-lines input file holds a line that cannot be decoded."""

    def __init__(self, path: str, line_number: int, reason: str):
        self.path = path
        self.line_number = line_number
        super().__init__(f"Malformed record in {path} at line {line_number}: {reason}")


class MissingFieldError(GrembedError, KeyError):
    """A record lacks one of its required fields."""

    def __init__(self, path: str, line_number: int, field: str):
        self.path = path
        self.line_number = line_number
        self.field = field
        super().__init__(f"Required field '{field}' is missing in {path} at line {line_number}")

    def __str__(self) -> str:
        return self.args[0]


class EmptyInputError(GrembedError, ValueError):
    """An input file holds no records."""


class EmptyResultError(GrembedError, ValueError):
    """A filter left nothing behind; the thresholds are too strict for the dataset."""


class EmptyGraphError(GrembedError, ValueError):
    """No edge survived graph construction."""


class DisconnectedGraphError(GrembedError, ValueError):
    """The graph has several components and the caller asked for strict connectivity."""


class NoConvergenceError(GrembedError, ArithmeticError):
    """An iterative solver hit its iteration cap before meeting its tolerance."""


class BetaTooLargeError(GrembedError, ValueError):
    """The Katz decay factor makes the proximity series diverge."""


class SolverFailureError(GrembedError, ArithmeticError):
    """A dense linear solve failed."""


class DegenerateEmbeddingError(GrembedError, ValueError):
    """An embedding holds an all-zero or non-finite row."""


class KTooLargeError(GrembedError, ValueError):
    """More clusters were requested than there are distinct points."""


class ColdUserError(GrembedError, KeyError):
    """The query user has no row in the embedding."""

    def __str__(self) -> str:
        return self.args[0]


class MissingRecommendationError(GrembedError, KeyError):
    """A cohort user has no recommendation list for one of the embeddings."""

    def __init__(self, user: str, method: str):
        self.user = user
        self.method = method
        super().__init__(f"No {method} recommendations for user '{user}'")

    def __str__(self) -> str:
        return self.args[0]


class DivergenceError(GrembedError, ArithmeticError):
    """Training produced a non-finite loss."""


class ZeroRecommendationError(GrembedError, ValueError):
    """A user with an empty recommendation list reached the MAE formula."""


class ZeroRatedUserError(GrembedError, ValueError):
    """A user with an empty ground-truth set reached the coverage formula."""


class ConfigValidationError(GrembedError, ValueError):
    """The pipeline configuration violates one or more constraints."""

    def __init__(self, violations: List[str]):
        self.violations = list(violations)
        super().__init__("Invalid configuration: " + "; ".join(self.violations))


class MissingArtifactError(GrembedError, FileNotFoundError):
    """A stage input is absent from the output directory."""

    def __init__(self, path: str, stage: Optional[str] = None):
        self.path = path
        self.stage = stage
        prefix = f"Stage '{stage}' requires" if stage else "Missing"
        super().__init__(f"{prefix} artifact {path}, which does not exist")

    def __str__(self) -> str:
        return self.args[0]
