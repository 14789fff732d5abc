"""Exception hierarchy. Pipeline errors carry a `stage` tag so callers can
map failures to exit codes and logs without string matching."""


class ChartLensError(Exception):
    stage = "general"


class DimensionMismatchError(ChartLensError):
    """Two regions or masks do not live on the same image dimensions."""

    stage = "geometry"


class SegmentationError(ChartLensError):
    stage = "segmentation"


class PieTooSmallError(SegmentationError):
    pass


class SectorBoundariesError(SegmentationError):
    pass


class ExtractorUnavailableError(SegmentationError):
    """Remote line extractor could not be reached."""


class MllmError(ChartLensError):
    stage = "mllm"


class DatasetSchemaError(ChartLensError):
    stage = "dataset"

    def __init__(self, message, lines=None):
        super().__init__(message)
        self.lines = tuple(lines or ())
