"""Two-level density matrices and their n-fold tensor powers.

Rows and columns of every 2^n x 2^n matrix are indexed by subsets of
{1, ..., n} encoded as bit masks: element ``i`` is bit ``i - 1``, and the
order is ascending mask value.  Under this layout the tensor power is the
Kronecker product with qubit 1 as the *least* significant factor.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "BlochState",
    "OverlapProfile",
    "DENSE_CAP",
    "popcount",
    "subset_mask",
    "mask_elements",
    "overlap_profile",
    "density_matrix",
    "von_neumann_entropy_2x2",
    "binary_entropy_nats",
    "tensor_entry",
    "tensor_product_matrix",
]

DENSE_CAP = 12
_BALL_SLACK = 1e-12


@dataclass(frozen=True)
class BlochState:
    x: float
    y: float
    z: float

    def __post_init__(self):
        if self.x * self.x + self.y * self.y + self.z * self.z > 1.0 + _BALL_SLACK:
            raise ValueError(f"Bloch vector {self.as_tuple()} lies outside the unit ball")

    @classmethod
    def from_spherical(cls, r: float, theta: float = 0.0, phi: float = 0.0) -> "BlochState":
        st = math.sin(theta)
        return cls(r * st * math.cos(phi), r * st * math.sin(phi), r * math.cos(theta))

    @property
    def r(self) -> float:
        return min(1.0, math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z))

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)


@dataclass(frozen=True)
class OverlapProfile:
    """Counts of positions by membership in (I, J)."""

    n_in_in: int
    n_out_out: int
    n_out_in: int
    n_in_out: int

    @property
    def n(self) -> int:
        return self.n_in_in + self.n_out_out + self.n_out_in + self.n_in_out


def popcount(mask):
    """Number of set bits; works elementwise on integer arrays."""
    if isinstance(mask, (int, np.integer)):
        return int(mask).bit_count()
    m = np.asarray(mask, dtype=np.int64)
    count = np.zeros_like(m)
    while np.any(m):
        count += m & 1
        m = m >> 1
    return count


def subset_mask(elements, n: int | None = None) -> int:
    """Bit mask of a subset of {1, ..., n}."""
    mask = 0
    for e in elements:
        if e < 1 or (n is not None and e > n):
            raise ValueError(f"element {e} outside 1..{n}")
        mask |= 1 << (e - 1)
    return mask


def mask_elements(mask: int) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def _check_mask(mask: int, n: int) -> None:
    if mask < 0 or mask >> n:
        raise ValueError(f"subset mask {mask:#b} uses positions outside 1..{n}")


def overlap_profile(n: int, i_mask: int, j_mask: int) -> OverlapProfile:
    _check_mask(i_mask, n)
    _check_mask(j_mask, n)
    full = (1 << n) - 1
    return OverlapProfile(
        n_in_in=popcount(i_mask & j_mask),
        n_out_out=popcount(full & ~(i_mask | j_mask)),
        n_out_in=popcount(j_mask & ~i_mask),
        n_in_out=popcount(i_mask & ~j_mask),
    )


def density_matrix(s: BlochState) -> np.ndarray:
    x, y, z = s.as_tuple()
    return 0.5 * np.array([[1 + z, x - 1j * y], [x + 1j * y, 1 - z]], dtype=complex)


def binary_entropy_nats(r):
    """Entropy of the eigenvalue pair ((1-r)/2, (1+r)/2), with 0 log 0 = 0."""
    r = np.asarray(r, dtype=float)
    lo = 0.5 * (1.0 - r)
    hi = 0.5 * (1.0 + r)
    with np.errstate(divide="ignore", invalid="ignore"):
        t_lo = np.where(lo > 0, lo * np.log(np.where(lo > 0, lo, 1.0)), 0.0)
    t_hi = hi * np.log(hi)
    out = -(t_lo + t_hi)
    return float(out) if out.ndim == 0 else out


def von_neumann_entropy_2x2(s: BlochState) -> float:
    """-Tr rho log rho in nats."""
    return binary_entropy_nats(s.r)


def tensor_entry(s: BlochState, n: int, i_mask: int, j_mask: int) -> complex:
    p = overlap_profile(n, i_mask, j_mask)
    x, y, z = s.as_tuple()
    # Python's 0.0 ** 0 == 1.0 gives the boundary convention directly.
    val = (
        (1 + z) ** p.n_in_in
        * (1 - z) ** p.n_out_out
        * complex(x, y) ** p.n_out_in
        * complex(x, -y) ** p.n_in_out
    )
    return val / 2**n


def tensor_product_matrix(s: BlochState, n: int, cap: int = DENSE_CAP) -> np.ndarray:
    """Dense 2^n x 2^n matrix of the n-fold tensor power, built from entry formula."""
    if n < 1:
        raise ValueError("n must be positive")
    if n > cap:
        raise ValueError(f"n={n} exceeds the dense-matrix cap {cap}")
    x, y, z = s.as_tuple()
    idx = np.arange(1 << n, dtype=np.int64)
    I = idx[:, None]
    J = idx[None, :]
    full = (1 << n) - 1
    n_ii = popcount(I & J)
    n_oo = popcount(full & ~(I | J))
    n_oi = popcount(J & ~I)
    n_io = popcount(I & ~J)
    # complex powers via log-free tables, since exponents are small integers
    def table(base):
        return np.array([base**k for k in range(n + 1)], dtype=complex)

    out = (
        table(1 + z)[n_ii]
        * table(1 - z)[n_oo]
        * table(complex(x, y))[n_oi]
        * table(complex(x, -y))[n_io]
    )
    return out / 2**n
