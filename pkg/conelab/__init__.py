"""ConeLab - numerical laboratory for the uniqueness of tangent cones at infinity."""

__version__ = "0.1.0"
__description__ = (
    "Weighted Einstein-Hilbert functionals, Lojasiewicz inequalities and "
    "monotone cone quantities checked at desk scale"
)
