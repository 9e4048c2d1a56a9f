"""Observation distributions over exact and oversized cyclic domains.

A length-p state alpha has an ideal observation distribution given by the
squared transform magnitudes over [0, p).  Carrying the same state into a
larger domain q moves the interesting mass to the primed indices
i' = floor(q*i/p); conditioning on seeing a primed index yields the
approximate-domain distribution.  This module builds both distributions,
measures their total-variation (L1) distance, draws seeded samples, and
rounds raw q-domain observations back to ideal indices.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDistributionError, InvalidSizeError
from .transform import MultiSuperposition, Superposition, dft, dft_at, multidim_dft_at

# A conditional distribution whose total captured mass falls below this is
# reported as degenerate rather than silently renormalized from noise.
_DEGENERATE_MASS = 1e-15

_SUM_TOL = 1e-9


@dataclass(frozen=True)
class IndexSet:
    """A subset of [0, size), kept sorted and duplicate-free."""

    indices: tuple
    size: int

    def __post_init__(self):
        size = int(self.size)
        if size < 1:
            raise InvalidSizeError(f"ambient size must be positive, got {size}")
        idx = tuple(int(i) for i in self.indices)
        if any(i < 0 or i >= size for i in idx):
            raise ValueError(f"indices must lie in [0, {size})")
        if len(set(idx)) != len(idx):
            raise ValueError("indices must be distinct")
        object.__setattr__(self, "indices", tuple(sorted(idx)))
        object.__setattr__(self, "size", size)

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def __contains__(self, i) -> bool:
        return int(i) in set(self.indices)

    @classmethod
    def of(cls, indices, size: int) -> "IndexSet":
        return cls(tuple(indices), size)

    @classmethod
    def full(cls, size: int) -> "IndexSet":
        return cls(tuple(range(int(size))), size)

    def mask(self) -> np.ndarray:
        m = np.zeros(self.size, dtype=bool)
        m[list(self.indices)] = True
        return m


@dataclass(frozen=True)
class PrimedMap:
    """The index transport i -> floor(q*i/p) from [0, p) into [0, q).

    Strictly increasing, hence injective, whenever q > p; the constructor
    rejects q <= p so that property always holds.
    """

    p: int
    q: int

    def __post_init__(self):
        p, q = int(self.p), int(self.q)
        if p < 1:
            raise InvalidSizeError(f"source size must be positive, got {p}")
        if q <= p:
            raise InvalidSizeError(f"target size must exceed source size, got q={q} <= p={p}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    def index(self, i: int) -> int:
        i = int(i)
        if not 0 <= i < self.p:
            raise ValueError(f"index {i} outside [0, {self.p})")
        return (self.q * i) // self.p

    def array(self, indices=None) -> np.ndarray:
        if indices is None:
            indices = range(self.p)
        return np.fromiter((self.index(i) for i in indices), dtype=np.int64)


def primed_index(i: int, pm: PrimedMap) -> int:
    """floor(q*i/p), computed in exact integer arithmetic."""
    return pm.index(i)


def primed_set(s: IndexSet, pm: PrimedMap) -> IndexSet:
    """Transport an index set through the primed map; sizes are preserved."""
    if s.size != pm.p:
        raise ValueError(f"index set lives in [0, {s.size}) but the map expects [0, {pm.p})")
    return IndexSet.of((pm.index(i) for i in s), pm.q)


def restrict(values, s: IndexSet) -> np.ndarray:
    """Zero a vector outside the given index set; returns a raw array."""
    vec = values.amplitudes if isinstance(values, Superposition) else np.asarray(
        values, dtype=np.complex128
    )
    if vec.ndim != 1 or vec.shape[0] != s.size:
        raise ValueError(f"vector of shape {vec.shape} does not match ambient size {s.size}")
    out = np.zeros_like(vec)
    idx = list(s.indices)
    out[idx] = vec[idx]
    return out


@dataclass(frozen=True, eq=False)
class Distribution:
    """A probability vector over [0, p)."""

    masses: np.ndarray

    def __post_init__(self):
        arr = np.ascontiguousarray(np.asarray(self.masses, dtype=np.float64))
        if arr.ndim != 1 or arr.size < 1:
            raise InvalidSizeError(f"distribution needs a nonempty 1-d vector, got {arr.shape}")
        if np.any(arr < -1e-12):
            raise ValueError("masses must be nonnegative")
        total = float(arr.sum())
        if abs(total - 1.0) > _SUM_TOL:
            raise ValueError(f"masses must sum to 1 within {_SUM_TOL}, got {total!r}")
        arr.flags.writeable = False
        object.__setattr__(self, "masses", arr)

    @property
    def p(self) -> int:
        return self.masses.shape[0]

    def to_json_dict(self) -> dict:
        return {"p": self.p, "masses": [float(m) for m in self.masses]}

    @classmethod
    def from_json_dict(cls, obj: dict) -> "Distribution":
        masses = np.asarray(obj["masses"], dtype=np.float64)
        if int(obj["p"]) != masses.shape[0]:
            raise ValueError("declared support size disagrees with the mass vector")
        return cls(masses)

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    def csv_rows(self):
        """Yield (index, mass) pairs, the two-column external form."""
        for i, m in enumerate(self.masses):
            yield i, float(m)


def dist_beta(alpha: Superposition) -> Distribution:
    """Ideal-domain observation distribution: squared transform magnitudes."""
    beta = dft(alpha, alpha.length, "forward")
    return Distribution(np.abs(beta.amplitudes) ** 2)


def _primed_amplitudes(alpha: Superposition, q: int) -> np.ndarray:
    pm = PrimedMap(alpha.length, q)
    return dft_at(alpha.amplitudes, q, pm.array(), "forward")


def primed_point_mass(alpha: Superposition, q: int) -> float:
    """Unnormalized probability of observing any primed index at all.

    This is the quantity a sampling experiment pays as a repetition factor:
    the q-domain observation lands on some primed point with this mass.
    """
    return float(np.sum(np.abs(_primed_amplitudes(alpha, q)) ** 2))


def dist_gamma(alpha: Superposition, q: int) -> Distribution:
    """Approximate-domain distribution conditioned on primed observations.

    Transforms alpha over the oversized domain q, reads the amplitudes at
    the p primed indices only (direct summation at selected coefficients,
    so q may be very large), and normalizes the squared magnitudes.
    """
    gamma_primed = _primed_amplitudes(alpha, q)
    masses = np.abs(gamma_primed) ** 2
    total = float(masses.sum())
    if total < _DEGENERATE_MASS:
        raise DegenerateDistributionError(
            f"primed mass {total!r} is below {_DEGENERATE_MASS}; nothing to condition on"
        )
    return Distribution(masses / total)


def multidim_dist_beta(alpha: MultiSuperposition) -> Distribution:
    """Ideal product-domain distribution, flattened in row-major order."""
    from .transform import multidim_dft

    beta = multidim_dft(alpha, alpha.dims, "forward")
    return Distribution((np.abs(beta.amplitudes) ** 2).ravel())


def multidim_dist_gamma(alpha: MultiSuperposition, sizes) -> Distribution:
    """Product-domain analogue of dist_gamma, flattened in row-major order.

    The primed map applies the floor rule on every axis independently.
    """
    dims = alpha.dims
    sizes = tuple(int(s) for s in sizes)
    maps = [PrimedMap(p_i, q_i) for p_i, q_i in zip(dims, sizes)]
    points = [
        tuple(m.index(i) for m, i in zip(maps, idx))
        for idx in np.ndindex(*dims)
    ]
    vals = multidim_dft_at(alpha, sizes, points, "forward")
    masses = np.abs(vals) ** 2
    total = float(masses.sum())
    if total < _DEGENERATE_MASS:
        raise DegenerateDistributionError(
            f"primed mass {total!r} is below {_DEGENERATE_MASS}; nothing to condition on"
        )
    return Distribution(masses / total)


def l1_distance(d1: Distribution, d2: Distribution) -> float:
    """Total variation style L1 distance; supports must match exactly."""
    if d1.p != d2.p:
        raise ValueError(f"cannot compare distributions on [0,{d1.p}) and [0,{d2.p})")
    return float(np.sum(np.abs(d1.masses - d2.masses)))


def _as_rng(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def sample(dist: Distribution, rng, size: int | None = None):
    """Draw indices from a distribution; deterministic for a given generator.

    ``rng`` may be a numpy Generator or an integer seed.  With ``size``
    omitted a single int is returned, otherwise an int64 array.
    """
    gen = _as_rng(rng)
    cum = np.cumsum(dist.masses)
    total = cum[-1]
    draws = gen.random(1 if size is None else size) * total
    picked = np.searchsorted(cum, draws, side="right")
    picked = np.minimum(picked, dist.p - 1).astype(np.int64)
    return int(picked[0]) if size is None else picked


def round_observation(c: int, pm: PrimedMap) -> int | None:
    """Map a raw q-domain observation back to its ideal index, if any.

    Returns the i with round(c*p/q) = i and floor(q*i/p) = c, or None when
    the observation is not a primed point.  The rounding is done in exact
    integer arithmetic with ties broken to even.
    """
    c = int(c)
    if not 0 <= c < pm.q:
        raise ValueError(f"observation {c} outside [0, {pm.q})")
    num = c * pm.p
    i, rem = divmod(num, pm.q)
    twice = 2 * rem
    if twice > pm.q or (twice == pm.q and i % 2 == 1):
        i += 1
    if not 0 <= i < pm.p:
        return None
    return i if pm.index(i) == c else None
