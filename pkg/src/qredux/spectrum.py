"""Closed-form spectra of the Bayesian density matrices.

The 2^n x 2^n matrix zeta_n(u) has only floor(n/2) + 1 distinct
eigenvalues.  A :class:`SpectrumSummary` holds them together with their
multiplicities, which is all the entropy formulas need, so nothing here
ever allocates a dense matrix.

Eigenvectors are indexed by ballot paths: lattice paths of up and down
steps that never go below the axis.  For a path with ``h`` down steps,
``A_P`` is the set of labels of its first ``h`` up steps and ``B_P`` the
labels of its down steps.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .priors import PriorSpec
from .qstate import subset_mask
from .specfun import binomial, catalan, log_gamma, log_gamma_ratio

__all__ = [
    "Level",
    "SpectrumSummary",
    "BallotPath",
    "EigenbasisVector",
    "log_eigenvalues",
    "eigenvalue",
    "multiplicity",
    "ballot_count",
    "spectrum",
    "catalan_leading_eigenvalue_check",
    "ballot_paths",
    "eigenvector",
    "eigenbasis",
    "sparse_to_dense",
    "check_symmetric",
    "generalized_eigenvalues",
    "spectrum_from_radial_prior",
]

MAX_BLOCK = 4096
ENUMERATION_CAP = 2_000_000


def _check_u(u: float) -> None:
    if not u < 1:
        raise ValueError(f"prior parameter u must be < 1, got {u}")


def _check_level(n: int, h: int) -> None:
    if n < 1:
        raise ValueError("block length n must be positive")
    if not 0 <= h <= n // 2:
        raise ValueError(f"level h={h} outside 0..{n // 2}")


@dataclass(frozen=True)
class Level:
    h: int
    lam: float
    log_lam: float
    multiplicity: int
    # log(multiplicity * lam), computed without passing through either factor
    log_mass: float | None = None

    @property
    def mass(self) -> float:
        if self.log_mass is None:
            return math.exp(self.log_lam + math.log(self.multiplicity))
        return math.exp(self.log_mass)


@dataclass(frozen=True)
class SpectrumSummary:
    """Distinct eigenvalues with multiplicities, in order of increasing h."""

    n: int
    levels: tuple[Level, ...]
    u: float | None = None
    source: str = "closed-form"

    @property
    def lambdas(self) -> np.ndarray:
        return np.array([lv.lam for lv in self.levels])

    @property
    def log_lambdas(self) -> np.ndarray:
        return np.array([lv.log_lam for lv in self.levels])

    @property
    def multiplicities(self) -> list[int]:
        return [lv.multiplicity for lv in self.levels]

    @property
    def dimension(self) -> int:
        return sum(self.multiplicities)

    @property
    def trace(self) -> float:
        return math.fsum(lv.mass for lv in self.levels)

    @property
    def trace_error(self) -> float:
        return abs(self.trace - 1.0)

    @property
    def is_strictly_decreasing(self) -> bool:
        logs = self.log_lambdas
        return bool(np.all(np.diff(logs) < 0))

    def expanded(self) -> np.ndarray:
        """All 2^n eigenvalues, descending (only sensible for small n)."""
        return np.repeat(self.lambdas, self.multiplicities)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "u": self.u,
            "source": self.source,
            "levels": [
                {"h": lv.h, "lambda": lv.lam, "log_lambda": lv.log_lam, "multiplicity": lv.multiplicity}
                for lv in self.levels
            ],
            "trace_error": self.trace_error,
        }


# --- eigenvalues and multiplicities --------------------------------------------

_EXACT_MAX = 400


def _exact_eigenvalues(n: int, u: float) -> np.ndarray:
    """Correctly rounded lambda_h from rational arithmetic on the float u.

    Every gamma ratio in lambda_0 has an integer argument shift, so with
    m = n // 2 it collapses to 2^-n prod_k (a + k) / (5/2 - u + k), k < m,
    where a = 2 + m - u for even n and 3 + m - u for odd n.  Successive
    levels follow from lambda_h / lambda_{h-1} = (h - u) / (2 + n - h - u).
    """
    fu = Fraction(u)
    m = n // 2
    a = (2 + m if n % 2 == 0 else 3 + m) - fu
    num, den = Fraction(1), Fraction(2) ** n
    for k in range(m):
        num *= a + k
        den *= Fraction(5, 2) - fu + k
    lam = num / den
    out = [lam]
    for h in range(1, m + 1):
        lam = lam * (h - fu) / (2 + n - h - fu)
        out.append(lam)
    return np.array([float(x) for x in out])


def _log_masses(n: int, u: float) -> np.ndarray:
    """log(multiplicity_h * lambda_h) for every level.

    Writing the binomial in the multiplicity as gamma functions and applying
    the duplication formula to Gamma(n + 2) turns the product into gamma
    ratios whose arguments differ by -u or 1 - u only.  Each such ratio is
    O(log n), whereas the individual log-gammas are O(n log n) and would
    leave ~1e-12 relative error in every mass at n in the thousands.
    """
    common = (
        math.log(2.0)
        - 0.5 * math.log(math.pi)
        + log_gamma_ratio(1.0 - u, 1.5)
        - log_gamma_ratio(n / 2 + 1.0, 1.0 - u)
        - log_gamma_ratio(n / 2 + 1.5, 1.0 - u)
        - math.log(n + 1)
    )
    out = np.empty(n // 2 + 1)
    for h in range(n // 2 + 1):
        out[h] = (
            common
            + 2.0 * math.log(n - 2 * h + 1)
            + log_gamma_ratio(n + 2.0 - h, -u)
            + log_gamma_ratio(h + 1.0, -u)
        )
    return out


def _levels(n: int, u: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(lambda_h, log lambda_h, log(multiplicity_h lambda_h)) for h = 0..n//2."""
    if n < 1:
        raise ValueError("block length n must be positive")
    _check_u(u)
    h = np.arange(n // 2 + 1, dtype=float)
    log_mass = _log_masses(n, u)
    if n <= _EXACT_MAX:
        lam = _exact_eigenvalues(n, u)
        if np.all(lam > 0):
            return lam, np.log(lam), log_mass
    # multiplicities outgrow float range near n = 1030, so take logs of the exact ints
    logs = log_mass - np.array([math.log(multiplicity(n, int(k))) for k in h])
    return np.exp(logs), logs, log_mass


def log_eigenvalues(n: int, u: float) -> np.ndarray:
    """log lambda_h for h = 0..floor(n/2)."""
    return _levels(n, u)[1]


def eigenvalue(n: int, u: float, h: int) -> tuple[float, float]:
    """(lambda_h, log lambda_h) of zeta_n(u)."""
    _check_level(n, h)
    lam, logs, _ = _levels(n, u)
    return float(lam[h]), float(logs[h])


def ballot_count(n: int, h: int) -> int:
    """Number of ballot paths with n - h up steps and h down steps."""
    _check_level(n, h)
    num = (n - 2 * h + 1) * binomial(n + 1, h)
    q, rem = divmod(num, n + 1)
    assert rem == 0
    return q


def multiplicity(n: int, h: int) -> int:
    """Dimension of the lambda_h eigenspace: (n-2h+1)^2 C(n+1, h) / (n+1)."""
    return (n - 2 * h + 1) * ballot_count(n, h)


def spectrum(n: int, u: float) -> SpectrumSummary:
    if n > MAX_BLOCK:
        raise ValueError(f"n={n} exceeds supported block length {MAX_BLOCK}")
    lams, logs, masses = _levels(n, u)
    levels = tuple(
        Level(h, float(lams[h]), float(logs[h]), multiplicity(n, h), float(masses[h]))
        for h in range(len(lams))
    )
    return SpectrumSummary(n, levels, u=u)


def catalan_leading_eigenvalue_check(n: int) -> tuple[float, float]:
    """(lambda_0 at u = 1/2, C_{n+1} / 4^n); the two agree."""
    if n < 1:
        raise ValueError("n must be positive")
    closed = eigenvalue(n, 0.5, 0)[0]
    cat = catalan(n + 1) / 4**n
    return closed, cat


# --- ballot paths and eigenvectors ---------------------------------------------

@dataclass(frozen=True)
class BallotPath:
    """A ballot path, with steps as +1 (up) / -1 (down) and 1-based labels."""

    steps: tuple[int, ...]

    def __post_init__(self):
        height = 0
        for st in self.steps:
            if st not in (1, -1):
                raise ValueError("steps must be +1 or -1")
            height += st
            if height < 0:
                raise ValueError("path goes below the axis")

    @classmethod
    def from_string(cls, s: str) -> "BallotPath":
        return cls(tuple(1 if c in "Uu" else -1 for c in s))

    @property
    def n(self) -> int:
        return len(self.steps)

    @property
    def h(self) -> int:
        return sum(1 for st in self.steps if st < 0)

    @property
    def down_labels(self) -> tuple[int, ...]:
        return tuple(i + 1 for i, st in enumerate(self.steps) if st < 0)

    @property
    def up_labels(self) -> tuple[int, ...]:
        """Labels of the first h up steps."""
        ups = [i + 1 for i, st in enumerate(self.steps) if st > 0]
        return tuple(ups[: self.h])

    def __str__(self) -> str:
        return "".join("U" if st > 0 else "D" for st in self.steps)


def ballot_paths(n: int, h: int, cap: int = ENUMERATION_CAP) -> list[BallotPath]:
    """All ballot paths from (0, 0) to (n, n - 2h), in lexicographic U < D order."""
    count = ballot_count(n, h)
    if count > cap:
        raise ValueError(f"{count} ballot paths exceed the enumeration cap {cap}")
    out: list[BallotPath] = []
    steps: list[int] = []

    def walk(ups_left, downs_left, height):
        if ups_left == 0 and downs_left == 0:
            out.append(BallotPath(tuple(steps)))
            return
        if ups_left:
            steps.append(1)
            walk(ups_left - 1, downs_left, height + 1)
            steps.pop()
        if downs_left and height > 0:
            steps.append(-1)
            walk(ups_left, downs_left - 1, height - 1)
            steps.pop()

    walk(n - h, h, 0)
    return out


def eigenvector(n: int, h: int, s: int, A, B) -> dict[int, int]:
    """Sparse eigenvector v_{h,s}(A, B) as {subset mask: coefficient}.

    The complement X' of X in B pairs elements by rank: dropping the i-th
    largest element of A from the complement drops the i-th largest of B.
    """
    A = tuple(sorted(A, reverse=True))
    B = tuple(sorted(B, reverse=True))
    if len(A) != h or len(B) != h:
        raise ValueError("A and B must both have h elements")
    if set(A) & set(B):
        raise ValueError("A and B must be disjoint")
    if not 0 <= h <= s <= n - h:
        raise ValueError(f"need 0 <= h <= s <= n - h, got h={h}, s={s}, n={n}")
    for e in A + B:
        if not 1 <= e <= n:
            raise ValueError(f"element {e} outside 1..{n}")
    rest = [e for e in range(1, n + 1) if e not in A and e not in B]
    vec: dict[int, int] = {}
    y_masks = [subset_mask(Y) for Y in itertools.combinations(rest, s - h)]
    for size in range(h + 1):
        for ranks in itertools.combinations(range(h), size):
            x_mask = subset_mask(A[k] for k in ranks)
            xp_mask = subset_mask(B[k] for k in range(h) if k not in ranks)
            sign = -1 if size % 2 else 1
            base = x_mask | xp_mask
            for ym in y_masks:
                vec[base | ym] = vec.get(base | ym, 0) + sign
    return vec


@dataclass(frozen=True)
class EigenbasisVector:
    h: int
    s: int
    path: BallotPath
    vector: dict = field(repr=False)


def eigenbasis(n: int, cap: int = 10) -> list[EigenbasisVector]:
    """The 2^n vectors v_{h,s}(P), 0 <= h <= s <= n - h, P a ballot path."""
    if n > cap:
        raise ValueError(f"n={n} exceeds the eigenbasis cap {cap}")
    out = []
    for h in range(n // 2 + 1):
        for path in ballot_paths(n, h):
            A, B = path.up_labels, path.down_labels
            for s in range(h, n - h + 1):
                out.append(EigenbasisVector(h, s, path, eigenvector(n, h, s, A, B)))
    return out


def sparse_to_dense(vec: dict, n: int) -> np.ndarray:
    out = np.zeros(1 << n)
    for mask, c in vec.items():
        out[mask] = c
    return out


# --- generalized family --------------------------------------------------------

def check_symmetric(f: Callable, n: int) -> None:
    for x in range(0, n + 1):
        a, b = f(x), f(-x)
        if abs(a - b) > 1e-12 * max(1.0, abs(a)):
            raise ValueError(f"f is not symmetric: f({x})={a} but f({-x})={b}")


def generalized_eigenvalues(n: int, u: float, f: Callable) -> list[tuple[int, int, float, int]]:
    """(h, s, lambda_{h,s}, multiplicity) for the generalized matrix family."""
    _check_u(u)
    check_symmetric(f, n)
    out = []
    for h in range(n // 2 + 1):
        mult = ballot_count(n, h)
        for s in range(h, n - h + 1):
            log_ratio = (
                log_gamma(2.0 + n - h - u)
                + log_gamma(1.0 + h - u)
                - log_gamma(2.0 + n - s - u)
                - log_gamma(2.0 + s - u)
                - log_gamma(1.0 - u)
            )
            out.append((h, s, f(n - 2 * s) * math.exp(log_ratio), mult))
    return out


# --- arbitrary spherically symmetric prior ------------------------------------------

def spectrum_from_radial_prior(
    n: int, p: PriorSpec, order: int = 128, tol: float = 1e-11, max_order: int = 4096
) -> SpectrumSummary:
    """Eigenvalues of the prior average of the n-fold tensor power.

    lambda_h = pi / (2^{n-1} (n-2h+1)) * int_{-1}^{1} r (1+r)^{n-h+1} (1-r)^h w(|r|) dr,
    integrated on both halves of [-1, 1] with the prior's radial rule; the
    order is doubled until successive values agree to ``tol`` relative.
    """
    from .oracle import NonConvergenceError, radial_rule

    if n < 1:
        raise ValueError("n must be positive")
    hs = np.arange(n // 2 + 1)

    def integrals(order_):
        rho, omr, w = radial_rule(p, order_)
        wts = w * p.cartesian(rho, omr)
        opr = 1.0 + rho
        total = np.zeros(len(hs))
        # positive half: r = rho; negative half: r = -rho, so 1 + r = 1 - rho
        for r, one_plus, one_minus in ((rho, opr, omr), (-rho, omr, opr)):
            a = (n - hs[:, None] + 1) * np.log(one_plus / 2.0)
            b = hs[:, None] * np.log(one_minus / 2.0)
            total += np.sum(wts * r * np.exp(a + b), axis=1)
        return 4.0 * np.pi * total / (n - 2 * hs + 1)

    prev = integrals(order)
    while True:
        order *= 2
        cur = integrals(order)
        rel = float(np.max(np.abs(cur - prev) / np.abs(cur)))
        if rel <= tol:
            break
        if order >= max_order:
            raise NonConvergenceError(
                f"radial eigenvalue quadrature did not converge (relative change {rel:.3e})",
                prev, cur, rel,
            )
        prev = cur
    levels = tuple(
        Level(int(h), float(lam), math.log(lam), multiplicity(n, int(h))) for h, lam in zip(hs, cur)
    )
    return SpectrumSummary(n, levels, u=p.u, source=f"radial:{p.label}")
