"""Hidden linear structure recovery through two-dimensional Fourier sampling.

A function f(x, y) = h(x + alpha*y mod q_bl) is constant on lines of slope
-alpha; sampling the 2D transform of a value-conditioned state concentrates
observations on primed pairs (floor(q*z1/r), floor(q*z2/r)) with
z2 = alpha*z1 modulo the smallest period of h.  Rounding both coordinates
to fractions recovers residues of the hidden coefficient.

The ideal state lives on [r]^2 with r taken from instance ground truth;
that mirrors the idealized setup in which the transform domain, not the
state preparation, is the object under study.  Observations condition on
the primed pairs, matching the one-axis observation distributions: the
reported triple distribution has r^2 cells however large the simulation
domain, and collapses to the exact r-domain distribution whenever the
domain is an exact multiple of r.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .bounds import BoundReport
from .errors import DegenerateDistributionError, DomainTooSmallError, InvalidSizeError
from .numtheory import round_to_fraction

# Conditioning on primed pairs is meaningless when they carry almost none
# of the transform mass.  The healthy captured mass scales like (r/q)^2
# (exactly so at multiples), so the cutoff is relative to that reference.
_DEGENERATE_FRACTION = 1e-15


@dataclass(frozen=True)
class HiddenLinearInstance:
    """Ground truth for one hidden-linear-structure problem.

    ``labels`` tabulates h on [0, q_bl); r is the smallest period, alpha
    the hidden coefficient, m the order bound (no value of h is taken by
    more than m points of the fundamental domain).  q_bl is the publicly
    known period, always a multiple of r.
    """

    labels: tuple
    r: int
    alpha: int
    m: int
    q_bl: int

    def __post_init__(self):
        r, q_bl = int(self.r), int(self.q_bl)
        labels = tuple(self.labels)
        object.__setattr__(self, "labels", labels)
        if r < 1 or q_bl < 1:
            raise InvalidSizeError(f"need r, q_bl >= 1, got r={r}, q_bl={q_bl}")
        if q_bl % r != 0:
            raise ValueError(f"known period {q_bl} must be a multiple of the smallest period {r}")
        if len(labels) != q_bl:
            raise ValueError(f"labels must tabulate [0, {q_bl}), got {len(labels)} entries")
        if not 0 <= self.alpha < q_bl:
            raise ValueError(f"alpha must lie in [0, {q_bl})")
        for i in range(q_bl):
            if labels[i] != labels[i % r]:
                raise ValueError("labels are not periodic with the claimed period")
        for d in range(1, r):
            if r % d == 0 and all(labels[i] == labels[(i + d) % r] for i in range(r)):
                raise ValueError(f"{d} is a smaller period than the claimed {r}")
        counts: dict = {}
        for i in range(r):
            counts[labels[i]] = counts.get(labels[i], 0) + 1
        if max(counts.values()) > self.m:
            raise ValueError(
                f"order bound {self.m} violated: a value has {max(counts.values())} preimages"
            )

    @property
    def meets_divisor_condition(self) -> bool:
        """Whether m is below the smallest prime divisor of r.

        Needed by the output-testing recursion of the recovery theorem,
        not by the sampling pipeline itself; kept advisory so boundary
        instances like r=6, m=2 remain constructible.
        """
        if self.r == 1:
            return True
        d = 2
        while self.r % d != 0:
            d += 1
        return self.m < d

    def h(self, i: int) -> int:
        return self.labels[int(i) % self.q_bl]

    def f(self, x: int, y: int) -> int:
        return self.labels[(int(x) + self.alpha * int(y)) % self.q_bl]

    def value_classes(self) -> dict:
        """Map b -> sorted tuple of t in [0, r) with h(t) = b."""
        classes: dict = {}
        for t in range(self.r):
            classes.setdefault(self.labels[t], []).append(t)
        return {b: tuple(ts) for b, ts in classes.items()}

    def to_json_dict(self) -> dict:
        return {
            "r": self.r,
            "alpha": self.alpha,
            "m": self.m,
            "q_bl": self.q_bl,
            "labels": list(self.labels),
        }


def random_hidden_linear_instance(
    rng: np.random.Generator, r: int, m: int, q_bl_multiple: int = 1
) -> HiddenLinearInstance:
    """Labels take each value on a block of consecutive points.

    Block labels are distinct and shuffled, so no divisor of r short of r
    itself is a period; the order bound is tight for full blocks when
    m < r.  Block size caps at r - 1 so a single all-equal block (which
    would collapse the period to 1) can never arise.
    """
    r, m = int(r), int(m)
    if not 1 <= m <= r:
        raise ValueError(f"need 1 <= m <= r, got m={m}, r={r}")
    width = max(1, min(m, r - 1))
    n_blocks = -(-r // width)
    block_labels = rng.permutation(n_blocks)
    base = [int(block_labels[i // width]) for i in range(r)]
    q_bl = r * int(q_bl_multiple)
    labels = tuple(base[i % r] for i in range(q_bl))
    alpha = int(rng.integers(0, q_bl))
    return HiddenLinearInstance(labels=labels, r=r, alpha=alpha, m=m, q_bl=q_bl)


def counting_bound_check(b_values, r: int) -> BoundReport:
    """At least r/m of the x in [r] keep |sum_i w_r^(x*b_i)| above 1/2.

    Exact count by direct evaluation; the 1/2 cut admits 1e-12 slop so
    boundary instances (b_i spaced r/m apart) count their equality cases.
    """
    r = int(r)
    if r < 1:
        raise InvalidSizeError(f"need r >= 1, got {r}")
    b_arr = np.asarray(list(b_values), dtype=np.int64)
    m = b_arr.size
    if m < 1:
        raise ValueError("need at least one b value")
    x = np.arange(r, dtype=np.int64)
    phases = np.exp((2j * np.pi / r) * ((x[:, None] * b_arr[None, :]) % r))
    mags = np.abs(phases.sum(axis=1))
    count = int(np.count_nonzero(mags >= 0.5 - 1e-12))
    return BoundReport(
        check="bl-counting",
        params={"r": r, "m": int(m)},
        computed=float(count),
        bound=r / m,
        direction="lower",
    )


@dataclass(frozen=True)
class BLJoint:
    """Exact primed-pair observation distribution of the 2D pipeline.

    ``values`` lists the observable b's; ``weights[i]`` their measurement
    probabilities |A_b|/r^2; ``grids[i]`` the conditional distribution over
    cells (z1, z2) in [r]^2, where cell (z1, z2) stands for the raw
    observation (floor(q_sim*z1/r), floor(q_sim*z2/r)).  ``captured[i]`` is
    the raw transform mass the primed pairs hold before conditioning; at an
    exact multiple q_sim = k*r it is exactly 1/k^2 per axis-pair counting.
    """

    q_sim: int
    r: int
    values: tuple
    weights: np.ndarray
    grids: np.ndarray
    captured: np.ndarray

    def primed(self, z: int) -> int:
        return (self.q_sim * int(z)) // self.r

    def sample(self, rng) -> tuple:
        return self.sample_many(rng, 1)[0]

    def sample_many(self, rng, n: int) -> list:
        """n independent raw triples; one cumulative table per value."""
        rng = np.random.default_rng(rng) if not isinstance(rng, np.random.Generator) else rng
        n = int(n)
        b_idx = np.minimum(
            np.searchsorted(np.cumsum(self.weights), rng.random(n), side="right"),
            len(self.values) - 1,
        )
        cells = np.empty(n, dtype=np.int64)
        for bi in range(len(self.values)):
            where = np.flatnonzero(b_idx == bi)
            if where.size == 0:
                continue
            cum = np.cumsum(self.grids[bi].ravel())
            cells[where] = np.minimum(
                np.searchsorted(cum, rng.random(where.size) * cum[-1], side="right"),
                cum.size - 1,
            )
        return [
            (self.primed(cell // self.r), self.primed(cell % self.r), self.values[bi])
            for cell, bi in zip(cells, b_idx)
        ]


def _coset_points(inst: HiddenLinearInstance, ts) -> tuple:
    """Index pairs (x1, x2) in [r]^2 with x1 + alpha*x2 = t mod r, flattened."""
    r = inst.r
    x2 = np.arange(r, dtype=np.int64)
    x1 = (np.asarray(ts, dtype=np.int64)[:, None] - inst.alpha * x2[None, :]) % r
    return x1.ravel(), np.tile(x2, len(ts))


@lru_cache(maxsize=4)
def joint_distribution(inst: HiddenLinearInstance, q_sim: int) -> BLJoint:
    """Exact triple distribution at the r^2 primed pairs of a q_sim^2 transform.

    Amplitudes come from a direct two-sided phase product over the coset,
    grouped as an (r x coset) by (coset x r) matrix product; exact integer
    phase reduction keeps the roots of unity faithful, and only selected
    coefficients are touched, so q_sim may be astronomically large.
    """
    q = int(q_sim)
    r = inst.r
    if q < r:
        raise InvalidSizeError(f"simulation domain {q} smaller than the period {r}")
    classes = inst.value_classes()
    values = tuple(sorted(classes))
    primed = (q * np.arange(r, dtype=np.int64)) // r
    weights = []
    grids = []
    captured = []
    for b in values:
        ts = classes[b]
        x1, x2 = _coset_points(inst, ts)
        coset_size = x1.size
        left = np.exp((2j * np.pi / q) * ((primed[:, None] * x1[None, :]) % q))
        right = np.exp((2j * np.pi / q) * ((x2[:, None] * primed[None, :]) % q))
        amp = (left @ right) / (q * math.sqrt(coset_size))
        raw = np.abs(amp) ** 2
        total = float(raw.sum())
        floor = _DEGENERATE_FRACTION * (r / q) ** 2
        if total < floor:
            raise DegenerateDistributionError(
                f"primed mass {total!r} is below {floor!r}; nothing to condition on"
            )
        grids.append(raw / total)
        captured.append(total)
        weights.append(coset_size / (r * r))
    return BLJoint(
        q_sim=q,
        r=r,
        values=values,
        weights=np.asarray(weights),
        grids=np.stack(grids),
        captured=np.asarray(captured),
    )


def observe_triple(inst: HiddenLinearInstance, q_sim: int, rng) -> tuple:
    """One sampled (y1, y2, b) from the exact pipeline distribution."""
    q = int(q_sim)
    if q <= 2 * inst.r:
        raise DomainTooSmallError(
            f"sampling needs q_sim > 2r for invertible rounding, got q_sim={q}, r={inst.r}"
        )
    return joint_distribution(inst, q).sample(rng)


def _good_first_coordinates(inst: HiddenLinearInstance) -> dict:
    """Per value b, the z1 in [r] meeting the amplitude condition.

    z1 qualifies when |sum over the value class of w_r^(t*z1)| >= 1/2,
    with 1e-12 slop so boundary classes keep their equality cases.
    """
    out: dict = {}
    for b, ts in inst.value_classes().items():
        keep = []
        for z1 in range(inst.r):
            total = sum(np.exp(2j * np.pi * ((t * z1) % inst.r) / inst.r) for t in ts)
            if abs(total) >= 0.5 - 1e-12:
                keep.append(z1)
        out[b] = tuple(keep)
    return out


def good_pairs(inst: HiddenLinearInstance, q_sim: int) -> dict:
    """Per value b, the raw pairs the recovery argument calls good.

    The pair for a qualifying z1 is
    (floor(q*z1/r), floor(q*((alpha*z1) mod r)/r)).
    """
    q = int(q_sim)
    r = inst.r
    return {
        b: tuple((q * z1 // r, q * ((inst.alpha * z1) % r) // r) for z1 in zs)
        for b, zs in _good_first_coordinates(inst).items()
    }


def good_triple_mass(inst: HiddenLinearInstance, q_sim: int) -> float:
    """Exact probability that a sampled triple is good, any domain size.

    Sums the conditioned triple distribution over the good cells; this is
    the quantity a Monte Carlo draw frequency estimates.
    """
    joint = joint_distribution(inst, int(q_sim))
    goods = _good_first_coordinates(inst)
    total = 0.0
    for bi, b in enumerate(joint.values):
        for z1 in goods[b]:
            z2 = (inst.alpha * z1) % inst.r
            total += float(joint.weights[bi] * joint.grids[bi][z1, z2])
    return total


def predicted_good_frequency(inst: HiddenLinearInstance, q_sim: int) -> float:
    """The recovery argument's claimed rate 1/(2 m^2 t) with t = q_sim/r."""
    t_eff = int(q_sim) / inst.r
    return 1.0 / (2.0 * inst.m * inst.m * t_eff)


def bl_threshold(inst: HiddenLinearInstance) -> int:
    """Domain size above which the 2D closeness guarantee applies.

    Two-axis version of the closeness threshold with accuracy s = 2 m^2,
    mass parameters r_th = 4s, c = 1/(2s), the full r x r grid as the
    index set, and per-axis extent r.  Sign-corrected like its 1D cousin.
    """
    k = 2
    s = 2.0 * inst.m * inst.m
    r_th = 4.0 * s
    c = 1.0 / (2.0 * s)
    set_size = inst.r ** 2
    t_mult = (
        2.0 ** (k + 2)
        * float(k) ** (k + 1)
        * 800.0
        * r_th
        * math.log(max(inst.r, 2)) ** k
        * math.sqrt(abs(math.log(c / (100.0 * r_th * set_size))))
        / math.sqrt(c * abs(math.log(1.0 - 1.0 / (100.0 * r_th))))
    )
    return math.ceil(1.5 * t_mult * inst.r)


def recover_ratios(triple, q_sim: int, den_bound: int) -> tuple:
    """Round both observed coordinates to fractions; good samples yield
    denominators dividing the period, exposing it and a residue of alpha."""
    y1, y2, _ = triple
    return (
        round_to_fraction(int(y1), int(q_sim), int(den_bound)),
        round_to_fraction(int(y2), int(q_sim), int(den_bound)),
    )
