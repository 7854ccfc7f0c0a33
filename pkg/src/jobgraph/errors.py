"""Exception types shared across the toolkit.

Loading, clustering, graph, and analysis operations raise the most specific
class that applies; callers that only care about "bad input file" vs "bad
analysis call" can catch the two bases.
"""

from __future__ import annotations


class JobgraphError(Exception):
    """Base class for all toolkit errors."""


# -- corpus ingestion ---------------------------------------------------------

class MalformedRecordError(JobgraphError):
    """A corpus record violates the line format or a posting invariant."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class MissingFieldError(MalformedRecordError):
    def __init__(self, line_no: int, field: str):
        super().__init__(line_no, f"missing or invalid field {field!r}")
        self.field = field


class BadIscoError(MalformedRecordError):
    def __init__(self, line_no: int, value: str):
        super().__init__(line_no, f"isco4 must be 4 digits, got {value!r}")
        self.value = value


class DuplicateIdError(JobgraphError):
    def __init__(self, posting_id: str):
        super().__init__(f"duplicate posting id {posting_id!r}")
        self.posting_id = posting_id


class BadConfigError(JobgraphError):
    """A configuration object violates its invariants."""


# -- risk ---------------------------------------------------------------------

class EmptyTaskListError(JobgraphError):
    pass


class OutOfRangeError(JobgraphError):
    pass


# -- clustering / validation --------------------------------------------------

class ProviderFailureError(JobgraphError):
    """An embedding provider could not produce a vector."""


class EmptyLabelsError(JobgraphError):
    pass


class BadCountsError(JobgraphError):
    pass


class MissingJudgmentError(JobgraphError):
    def __init__(self, canonical_id: str):
        super().__init__(f"no judgment recorded for sampled cluster {canonical_id!r}")
        self.canonical_id = canonical_id


# -- graph --------------------------------------------------------------------

class UnresolvedMentionError(JobgraphError):
    def __init__(self, form: str):
        super().__init__(f"mention {form!r} does not map to any cluster member")
        self.form = form


class EmptyGraphError(JobgraphError):
    pass


class TooFewPointsError(JobgraphError):
    pass


class DegenerateDegreesError(JobgraphError):
    """All degrees equal; the power-law exponent is not identifiable."""


class PartialAssignmentError(JobgraphError):
    def __init__(self, node: str):
        super().__init__(f"node {node!r} has no community assignment")
        self.node = node


# -- transitions / queries ----------------------------------------------------

class UnknownJobError(JobgraphError):
    def __init__(self, job_id: str):
        super().__init__(f"unknown job {job_id!r}")
        self.job_id = job_id


class UnknownActivityError(JobgraphError):
    def __init__(self, activity_id: str):
        super().__init__(f"unknown activity {activity_id!r}")
        self.activity_id = activity_id


class EmptySourceNeighborhoodError(JobgraphError):
    def __init__(self, job_id: str):
        super().__init__(f"job {job_id!r} has no activities; transfer rate undefined")
        self.job_id = job_id


# -- reporting ----------------------------------------------------------------

class IoFailureError(JobgraphError):
    pass
