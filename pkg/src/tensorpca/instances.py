"""Two bundled 3-dimensional quartics with known leading components.

Both are small enough to check against the sphere-grid oracle, and both
have leading components pinned down to four decimals, which makes them
useful as smoke tests for the whole pipeline.
"""

from __future__ import annotations

import numpy as np

from .tensors import SuperSymmetricTensor, multinomial

__all__ = ["demo_quartic", "poly_quartic", "DEMO_QUARTIC_X", "POLY_QUARTIC_X"]

# leading unit argmax of each instance (sign convention: free)
DEMO_QUARTIC_X = np.array([-0.6671, -0.2472, 0.7027])
POLY_QUARTIC_X = np.array([0.0116, 0.9992, 0.0382])

_DEMO_ENTRIES = {
    (0, 0, 0, 0): 0.2883,
    (0, 0, 0, 1): -0.0031,
    (0, 0, 0, 2): 0.1973,
    (0, 0, 1, 1): -0.2485,
    (0, 0, 1, 2): -0.2939,
    (0, 0, 2, 2): 0.3847,
    (0, 1, 1, 1): 0.2972,
    (0, 1, 1, 2): 0.1862,
    (0, 1, 2, 2): 0.0919,
    (0, 2, 2, 2): -0.3619,
    (1, 1, 1, 1): 0.1241,
    (1, 1, 1, 2): -0.3420,
    (1, 1, 2, 2): 0.2127,
    (1, 2, 2, 2): 0.2727,
    (2, 2, 2, 2): -0.3054,
}

# quartic polynomial coefficients keyed by exponent signature; the tensor
# entry for signature k is the coefficient divided by multinomial(4, k)
_POLY_COEFFS = {
    (4, 0, 0): 0.74694,
    (3, 1, 0): -0.435103,
    (3, 0, 1): 0.37089,
    (2, 2, 0): 0.454945,
    (2, 1, 1): -0.29883,
    (2, 0, 2): 1.24733,
    (1, 3, 0): 0.0657818,
    (1, 2, 1): -0.795157,
    (1, 1, 2): 0.714359,
    (1, 0, 3): -0.397391,
    (0, 4, 0): 1.0,
    (0, 3, 1): 0.139751,
    (0, 2, 2): 0.316264,
    (0, 1, 3): -0.405544,
    (0, 0, 4): 0.794869,
}


def demo_quartic() -> SuperSymmetricTensor:
    """Dense random-looking quartic; leading component DEMO_QUARTIC_X up to sign."""
    return SuperSymmetricTensor(3, 4, _DEMO_ENTRIES)


def poly_quartic() -> SuperSymmetricTensor:
    """Quartic given by polynomial coefficients; leading component POLY_QUARTIC_X."""
    entries = {}
    for signature, coeff in _POLY_COEFFS.items():
        key = tuple(j for j, count in enumerate(signature) for _ in range(count))
        entries[key] = coeff / multinomial(4, signature)
    return SuperSymmetricTensor(3, 4, entries)
