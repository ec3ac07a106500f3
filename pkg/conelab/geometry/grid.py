"""Quadrature grids and spectral differentiation on the cross-section.

`SphereGrid` places Gauss-Legendre nodes in colatitude (the poles are never
sampled) and uniform nodes in longitude. Chart derivatives are spectral:
Fourier in longitude, and in colatitude a Legendre collocation derivative in
x = cos(theta) applied per Fourier mode with the parity that smooth tensor
components carry near the poles.

`TorusGrid` is a periodic square with the same interface, used as a
zero-curvature oracle.
"""

from abc import ABC, abstractmethod
from functools import cached_property

import numpy as np
from numpy.polynomial.legendre import leggauss
from numpy.typing import NDArray

from conelab.errors import GridMismatchError


class Grid(ABC):
    """Common interface of the chart grids."""

    dim = 2
    n_lat: int
    n_lon: int

    @property
    def shape(self) -> tuple[int, int]:
        """Node array shape."""
        return (self.n_lat, self.n_lon)

    @property
    def size(self) -> int:
        """Number of nodes."""
        return self.n_lat * self.n_lon

    @property
    @abstractmethod
    def chart_weights(self) -> NDArray:
        """Weights w such that sum(f * sqrt(det g) * w) integrates f."""

    @property
    @abstractmethod
    def quad_weights(self) -> NDArray:
        """Area weights of the reference metric."""

    def check(self, field: NDArray) -> None:
        """Reject fields that do not live on this grid."""
        if field.shape[:2] != self.shape:
            msg = f"field of shape {field.shape} does not live on a {self.shape} grid"
            raise GridMismatchError(msg)

    @abstractmethod
    def d_theta(self, f: NDArray, theta_indices: int) -> NDArray:
        """Derivative along the first chart coordinate."""

    def d_phi(self, f: NDArray) -> NDArray:
        """Derivative along the periodic second chart coordinate."""
        coeffs = np.fft.rfft(f, axis=1)
        m = np.arange(coeffs.shape[1])
        factor = 1j * m
        if self.n_lon % 2 == 0:
            factor[-1] = 0.0
        return np.fft.irfft(coeffs * factor[None, :], n=self.n_lon, axis=1)

    def partials(self, field: NDArray) -> NDArray:
        """Chart partial derivatives of a covariant field, appended as a last index.

        Every trailing index of `field` is treated as a covariant chart index;
        the number of theta indices of a component fixes its pole parity.
        """
        self.check(field)
        out = np.empty((*field.shape, self.dim))
        for idx in np.ndindex(field.shape[2:]):
            component = field[(slice(None), slice(None), *idx)]
            k = sum(1 for i in idx if i == 0)
            out[(slice(None), slice(None), *idx, 0)] = self.d_theta(component, k)
            out[(slice(None), slice(None), *idx, 1)] = self.d_phi(component)
        return out

    def integrate(self, f: NDArray, density: NDArray) -> float:
        """Quadrature of f against a chart volume density sqrt(det g)."""
        self.check(f)
        return float(np.sum(f * density * self.chart_weights))


class SphereGrid(Grid):
    """Gauss-Legendre by uniform-longitude grid on the unit sphere S^2."""

    def __init__(self, n_lat: int = 48, n_lon: int = 96) -> None:
        """Initialize nodes, weights and the colatitude differentiation matrix."""
        if n_lat < 2 or n_lon < 4:
            msg = f"grid too small: n_lat={n_lat}, n_lon={n_lon}"
            raise ValueError(msg)
        self.n_lat = n_lat
        self.n_lon = n_lon
        x, lam = leggauss(n_lat)
        # ascending colatitude
        self.x = x[::-1].copy()
        self.lam = lam[::-1].copy()
        self.theta = np.arccos(self.x)
        self.phi = 2.0 * np.pi * np.arange(n_lon) / n_lon
        self.sin_theta = np.sqrt(1.0 - self.x**2)

    def __eq__(self, other: object) -> bool:
        """Grids are equal when they sample the same nodes."""
        return isinstance(other, SphereGrid) and other.shape == self.shape

    def __hash__(self) -> int:
        """Hash on the node counts."""
        return hash(("sphere", self.n_lat, self.n_lon))

    def __repr__(self) -> str:
        """Short description."""
        return f"SphereGrid(n_lat={self.n_lat}, n_lon={self.n_lon})"

    @cached_property
    def mesh(self) -> tuple[NDArray, NDArray]:
        """Node coordinates (theta, phi) as 2-d arrays."""
        return np.meshgrid(self.theta, self.phi, indexing="ij")

    @property
    def nodes(self) -> NDArray:
        """Chart coordinates of every node, shape (n_lat, n_lon, 2)."""
        th, ph = self.mesh
        return np.stack([th, ph], axis=-1)

    @cached_property
    def quad_weights(self) -> NDArray:
        """Area weights of the unit sphere; they sum to 4*pi."""
        return np.broadcast_to(
            self.lam[:, None] * (2.0 * np.pi / self.n_lon), self.shape
        ).copy()

    @cached_property
    def chart_weights(self) -> NDArray:
        """Weights of d(theta) d(phi) quadrature."""
        return self.quad_weights / self.sin_theta[:, None]

    @cached_property
    def legendre_derivative(self) -> NDArray:
        """Collocation derivative in x on the Gauss nodes (barycentric form)."""
        x = self.x
        w = (-1.0) ** np.arange(self.n_lat) * np.sqrt((1.0 - x**2) * self.lam)
        diff = x[:, None] - x[None, :]
        np.fill_diagonal(diff, 1.0)
        d = (w[None, :] / w[:, None]) / diff
        np.fill_diagonal(d, 0.0)
        np.fill_diagonal(d, -d.sum(axis=1))
        return d

    def d_theta(self, f: NDArray, theta_indices: int) -> NDArray:
        """Colatitude derivative of one component with the given theta-index count."""
        coeffs = np.fft.rfft(f, axis=1)
        m = np.arange(coeffs.shape[1])
        odd = (m + theta_indices) % 2 == 1
        s = self.sin_theta[:, None]
        c = self.x[:, None]
        d = self.legendre_derivative
        out = np.empty_like(coeffs)
        even_part = coeffs[:, ~odd]
        out[:, ~odd] = -s * (d @ even_part)
        q = coeffs[:, odd] / s
        out[:, odd] = c * q - s**2 * (d @ q)
        return np.fft.irfft(out, n=self.n_lon, axis=1)


class TorusGrid(Grid):
    """Uniform grid on the periodic square [0, 2 pi)^2."""

    def __init__(self, n_lat: int = 32, n_lon: int = 32) -> None:
        """Initialize a uniform periodic grid."""
        self.n_lat = n_lat
        self.n_lon = n_lon
        self.theta = 2.0 * np.pi * np.arange(n_lat) / n_lat
        self.phi = 2.0 * np.pi * np.arange(n_lon) / n_lon

    def __repr__(self) -> str:
        """Short description."""
        return f"TorusGrid(n_lat={self.n_lat}, n_lon={self.n_lon})"

    @cached_property
    def mesh(self) -> tuple[NDArray, NDArray]:
        """Node coordinates as 2-d arrays."""
        return np.meshgrid(self.theta, self.phi, indexing="ij")

    @cached_property
    def quad_weights(self) -> NDArray:
        """Uniform weights; they sum to 4*pi^2."""
        return np.full(self.shape, (2.0 * np.pi) ** 2 / self.size)

    @property
    def chart_weights(self) -> NDArray:
        """Chart and area weights coincide on the square."""
        return self.quad_weights

    def d_theta(self, f: NDArray, theta_indices: int) -> NDArray:
        """Fourier derivative along the first axis; parity plays no role."""
        del theta_indices
        coeffs = np.fft.rfft(f, axis=0)
        k = np.arange(coeffs.shape[0])
        factor = 1j * k
        if self.n_lat % 2 == 0:
            factor[-1] = 0.0
        return np.fft.irfft(coeffs * factor[:, None], n=self.n_lat, axis=0)
