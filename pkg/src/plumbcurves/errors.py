"""Exception hierarchy.

Every error carries a short machine-readable ``code`` so the CLI can emit
stable JSON envelopes and exit codes.
"""

from __future__ import annotations


class PlumbcurvesError(Exception):
    """Base class for all domain errors raised by this package."""

    code = "error"

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.message = message
        self.details = details


class InvalidTreeError(PlumbcurvesError):
    """A tree document or tree structure failed validation.

    Codes: ``malformed``, ``duplicate-id``, ``unknown-root``,
    ``unknown-endpoint``, ``cycle``, ``disconnected``.
    """

    def __init__(self, code: str, message: str, **details):
        super().__init__(message, **details)
        self.code = code


class EmptyWordError(PlumbcurvesError):
    code = "empty-word"


class PureAlphaError(PlumbcurvesError):
    """A homologically beta-trivial pure alpha-power component where pairing
    with the horizontal curve is meaningless."""

    code = "pure-alpha-component"


class MergePreconditionError(PlumbcurvesError):
    """Neither merge input reduces to only c-letters in loop calculus."""

    code = "merge-precondition"


class NotSymmetricError(PlumbcurvesError):
    code = "not-symmetric"


class SymmetryUndefinedError(PlumbcurvesError):
    """Both letter parities even: the fixed-point labelling convention, and
    hence the symmetry area, is undefined."""

    code = "symmetry-undefined"


class DistinguishedCurveError(PlumbcurvesError):
    code = "distinguished-curve"


class NotZ2SolidTorusError(PlumbcurvesError):
    """The rooted tree does not have exactly two relative Wu sets."""

    code = "not-z2-solid-torus"


class WuConditionError(PlumbcurvesError):
    code = "wu-condition"


class RootSelectionError(PlumbcurvesError):
    code = "root-selection"


class SpincError(PlumbcurvesError):
    """Generators lie in different filling classes, or the filling is not a
    rational homology sphere (vertical period zero)."""

    code = "spinc"


class TypeAlphaRequiredError(PlumbcurvesError):
    code = "type-alpha-required"


class DegenerateFormError(PlumbcurvesError):
    code = "degenerate-form"


class PathGeometryError(PlumbcurvesError):
    """Malformed rectilinear path: interior reversal or open polygon."""

    code = "path-geometry"


class IdentityViolationError(PlumbcurvesError):
    """The batch verifier found an instance violating the quarter identity."""

    code = "identity-violation"
