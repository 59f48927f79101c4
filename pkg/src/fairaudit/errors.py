"""Exception hierarchy.

Every error carries a stable ``code`` (the class name) so the CLI can emit
machine-readable error objects.
"""


class FairAuditError(Exception):
    """Base class for all domain errors raised by the toolkit."""

    @property
    def code(self) -> str:
        return type(self).__name__


class MissingColumn(FairAuditError, KeyError):
    def __init__(self, name):
        super().__init__(f"column {name!r} not found")
        self.name = name

    def __str__(self):
        return self.args[0]


class NonNumericCell(FairAuditError, ValueError):
    def __init__(self, row, column, value=None):
        super().__init__(f"row {row}, column {column!r}: cannot parse {value!r} as a finite real")
        self.row = row
        self.column = column


class EmptyDataset(FairAuditError, ValueError):
    pass


class DuplicateRole(FairAuditError, ValueError):
    pass


class InvalidDataset(FairAuditError, ValueError):
    pass


class RankDeficient(FairAuditError, ValueError):
    pass


class Underdetermined(FairAuditError, ValueError):
    pass


class ArityMismatch(FairAuditError, ValueError):
    pass


class SensitiveRequired(FairAuditError, ValueError):
    pass


class SensitiveForbidden(FairAuditError, ValueError):
    pass


class ZeroVariance(FairAuditError, ValueError):
    def __init__(self, feature_index):
        super().__init__(f"feature {feature_index} has zero variance")
        self.feature_index = feature_index


class NotFullModel(FairAuditError, ValueError):
    pass


class EmptyGroup(FairAuditError, ValueError):
    pass


class InvalidGroups(FairAuditError, ValueError):
    pass


class InvalidSpec(FairAuditError, ValueError):
    pass
