"""ChartLens: fine-grained visual attribution for chart images.

Segments chart elements (bars, pie sectors, line traces), overlays labeled
marks, asks a multimodal LLM which marks substantiate a response, and scores
attributions against ground truth. Includes a deterministic synthetic chart
generator used as the segmentation oracle.
"""

__version__ = "0.1.0"
