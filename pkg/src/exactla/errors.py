"""Exception types shared by every package in the project."""


class DimensionMismatchError(ValueError):
    pass


class ParityError(ValueError):
    pass


class NotInSpanError(ValueError):
    pass


class DecompositionError(ValueError):
    pass


class ShapeError(ValueError):
    """Algebra outside the shape an operation supports."""


class DegenerateFormError(ValueError):
    pass


class CatalogError(ValueError):
    """Malformed catalog data or a failed check on import."""
