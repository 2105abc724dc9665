"""Random-features / neural-tangent models and kernel ridge regression on
the sphere S^{d-1}(sqrt(d)), with the Gegenbauer/Hermite machinery needed to
compute kernel spectra, low-degree projections, and risk plateaus."""

from ._accel import backend

__all__ = ["backend"]
__version__ = "0.1.0"
