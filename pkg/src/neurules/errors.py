"""Exception types shared across the package."""


class DataError(ValueError):
    """Invalid or unusable input data (bad CSV, degenerate labels, wrong width)."""


class DegenerateSplitError(RuntimeError):
    """A criterion sub-fit received a single-class subset and cannot be trained."""


class ModelFormatError(ValueError):
    """A model file is malformed or carries an unsupported format version."""
