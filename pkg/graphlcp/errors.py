from __future__ import annotations

from typing import Any, Optional


class GraphLcpError(Exception):
    """Base class; `exit_code` is what the CLI returns for it."""

    exit_code = 1


class GraphError(GraphLcpError):
    pass


class GraphFormatError(GraphError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class GraphValidationError(GraphError):
    def __init__(self, report: Any):
        self.report = report
        details = ", ".join(f"{v.kind}: node {v.node}" for v in report.violations)
        super().__init__(f"validation failed: {details}")


class ItemError(GraphLcpError):
    pass


class IndexBuildError(GraphLcpError):
    pass


class IndexDocumentError(GraphLcpError):
    pass


class ConsistencyError(GraphLcpError):
    """An internal invariant broke. Never a valid answer, always a bug."""

    exit_code = 2


class CheckFailure(GraphLcpError):
    exit_code = 3

    def __init__(self, check: str, counterexample: dict):
        self.check = check
        self.counterexample = counterexample
        super().__init__(f"{check} check failed")
