"""Uniform linear arrays: steering vectors and DFT codebooks."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError


@dataclass(frozen=True)
class ArrayGeometry:
    """A uniform linear array.

    Parameters
    ----------
    num_elements : int
        Number of antenna elements.
    element_spacing : float
        Spacing between adjacent elements, in carrier wavelengths.
    """

    num_elements: int
    element_spacing: float = 0.5

    def __post_init__(self):
        if int(self.num_elements) != self.num_elements or self.num_elements < 1:
            raise InvalidArgumentError(f"num_elements must be a positive integer, got {self.num_elements}")
        if not np.isfinite(self.element_spacing) or self.element_spacing <= 0:
            raise InvalidArgumentError(f"element_spacing must be > 0, got {self.element_spacing}")


@dataclass(frozen=True)
class Codebook:
    beams: np.ndarray  # (num_elements, num_beams), one unit-norm beam per column
    kind: str = "dft"

    @property
    def size(self) -> int:
        return self.beams.shape[1]

    @property
    def num_elements(self) -> int:
        return self.beams.shape[0]


def steering_vector(geometry: ArrayGeometry, angle) -> np.ndarray:
    """Array response of a ULA toward ``angle`` (radians from broadside).

    Entries are unit modulus, ``exp(j 2 pi d n sin(angle))``; no 1/sqrt(N)
    normalization is applied. A 1-D array of angles returns one response
    per column.
    """
    angle = np.asarray(angle, dtype=float)
    if not np.all(np.isfinite(angle)):
        raise InvalidArgumentError("steering angle must be finite")
    n = np.arange(geometry.num_elements)
    phase = 2 * np.pi * geometry.element_spacing * np.multiply.outer(n, np.sin(angle))
    return np.exp(1j * phase)


def dft_codebook(geometry: ArrayGeometry) -> Codebook:
    """Critically sampled DFT codebook: N orthonormal beams for N elements."""
    n = geometry.num_elements
    idx = np.arange(n)
    beams = np.exp(2j * np.pi * np.outer(idx, idx) / n) / np.sqrt(n)
    return Codebook(beams=beams, kind="dft")
