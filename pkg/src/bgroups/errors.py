"""Exception hierarchy shared by every module.

Every error carries a machine-readable ``code`` so the CLI can map it to a
structured report without parsing messages.
"""


class BGroupError(Exception):
    code = "error"

    def __init__(self, message, code=None, **detail):
        super().__init__(message)
        if code is not None:
            self.code = code
        self.detail = detail

    def to_dict(self):
        out = {"code": self.code, "message": str(self)}
        out.update({k: v for k, v in self.detail.items() if v is not None})
        return out


class InputError(BGroupError, ValueError):
    """Malformed or out-of-range input."""

    code = "input_error"


class PreconditionError(BGroupError, ValueError):
    code = "precondition_failed"


class ResourceError(BGroupError):
    """A documented size cap was exceeded."""

    code = "resource_cap"


class ValidationError(BGroupError, ValueError):
    """Raised when a model value violates its invariants.

    ``report`` holds the full :class:`~bgroups.groups.ValidationReport`.
    """

    code = "validation_failed"

    def __init__(self, report):
        first = report.violations[0] if report.violations else None
        msg = first.message if first else "validation failed"
        super().__init__(msg, code=first.code if first else None)
        self.report = report

    def to_dict(self):
        return {"code": self.code, "message": str(self), "violations": self.report.to_dict()["violations"]}


class ParseError(InputError):
    """Syntax or schema error in a textual / JSON input.

    ``location`` is a line number (text inputs) or a JSON pointer-ish path.
    """

    code = "parse_error"

    def __init__(self, message, location=None):
        super().__init__(message, location=location)
        self.location = location
