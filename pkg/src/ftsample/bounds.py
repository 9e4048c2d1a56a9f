"""Mechanical checks of the concentration and mass bounds.

Each check computes one side of an inequality from first principles (exact
transforms, exact sums) and the other side from its closed-form expression,
then packages both in a BoundReport.  A report passes when the computed
value respects the bound within an absolute tolerance of 1e-12; reports
whose printed bound is meaningless for the given parameters (for example a
negative lower bound) pass vacuously and say so.

Every function here is pure; reports are frozen value objects.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainTooSmallError, InvalidSizeError, UndefinedBoundError
from .sampling import IndexSet, PrimedMap, dist_beta, dist_gamma, l1_distance, restrict
from .transform import (
    MultiSuperposition,
    Superposition,
    dft,
    dft_at,
    embed,
    multidim_dft,
    multidim_dft_at,
)

PASS_TOL = 1e-12


@dataclass(frozen=True)
class BoundReport:
    """Outcome of a single inequality check.

    ``direction`` says which side the computed value must fall on; slack is
    signed so that a nonnegative slack always means the bound holds with
    margin, regardless of direction.
    """

    check: str
    params: dict = field(compare=False)
    computed: float
    bound: float
    direction: str
    vacuous: bool = False

    def __post_init__(self):
        if self.direction not in ("lower", "upper"):
            raise ValueError(f"direction must be 'lower' or 'upper', got {self.direction!r}")

    @property
    def slack(self) -> float:
        if self.direction == "lower":
            return self.computed - self.bound
        return self.bound - self.computed

    @property
    def passed(self) -> bool:
        return self.vacuous or self.slack >= -PASS_TOL

    def to_json_dict(self) -> dict:
        return {
            "check": self.check,
            "params": dict(self.params),
            "computed": self.computed,
            "bound": self.bound,
            "slack": self.slack,
            "pass": self.passed,
            "vacuous": self.vacuous,
        }

    def csv_row(self) -> tuple:
        return (
            self.check,
            json.dumps(self.params, sort_keys=True),
            self.computed,
            self.bound,
            self.slack,
            self.passed,
            self.vacuous,
        )


CSV_HEADER = ("check", "params", "computed", "bound", "slack", "pass", "vacuous")


def signed_mod(x: float, p: float) -> float:
    """Distance from x to the nearest multiple of p; lands in [0, p/2]."""
    if p <= 0:
        raise InvalidSizeError(f"modulus must be positive, got {p}")
    y = math.fmod(float(x), p)
    if y < 0:
        y += p
    return min(y, p - y)


def _nearest_int_distance(x: float) -> float:
    return abs(x - round(x))


def delta_response(j: int, p: int, q: int) -> Superposition:
    """Transform of a point mass carried through the inverse/forward pair.

    Starting from the delta state at j over [0, p), apply the inverse
    transform over p, embed in [0, q), and transform forward.  The result
    shows how a single ideal frequency spreads over the larger domain: a
    spike near floor(q*j/p) with inverse-distance sidelobes.
    """
    if not 0 <= j < p:
        raise ValueError(f"index {j} outside [0, {p})")
    if q < p:
        raise DomainTooSmallError(f"target domain {q} smaller than source {p}")
    alpha = dft(Superposition.delta(p, j), p, "inverse")
    return dft(embed(alpha, q), q, "forward")


def _gamma_at_primed(beta: Superposition, q: int, indices=None) -> np.ndarray:
    """Amplitudes of the q-domain transform at primed indices of beta's domain."""
    p = beta.length
    pm = PrimedMap(p, q)
    alpha = dft(beta, p, "inverse")
    return dft_at(alpha.amplitudes, q, pm.array(indices), "forward")


def concentration_check(j: int, p: int, q: int) -> tuple[BoundReport, BoundReport]:
    """Center and off-center bounds for a transported point mass.

    For the delta state at j, the amplitude at the primed center must be at
    least sqrt(p/q) * (1 - 20 p^2/q^2), and at every other primed index k'
    at most sqrt(p/q) * (2/|k-j|_p) * (p/q).  Requires q > 2p; the second
    report records the k with the least slack.
    """
    p, q = int(p), int(q)
    if p < 2:
        raise InvalidSizeError(f"need p >= 2 for an off-center index, got {p}")
    if q <= 2 * p:
        raise DomainTooSmallError(f"the concentration bounds need q > 2p, got q={q}, p={p}")
    if not 0 <= j < p:
        raise ValueError(f"index {j} outside [0, {p})")

    beta = Superposition.delta(p, j)
    gamma = np.abs(_gamma_at_primed(beta, q))
    ratio = p / q
    scale = math.sqrt(ratio)

    center_bound = scale * (1.0 - 20.0 * ratio * ratio)
    center = BoundReport(
        check="delta-concentration-center",
        params={"j": j, "p": p, "q": q},
        computed=float(gamma[j]),
        bound=center_bound,
        direction="lower",
        vacuous=center_bound < 0,
    )

    worst = None
    for k in range(p):
        if k == j:
            continue
        bound_k = scale * (2.0 / signed_mod(k - j, p)) * ratio
        slack_k = bound_k - float(gamma[k])
        if worst is None or slack_k < worst[0]:
            worst = (slack_k, k, bound_k)
    _, k, bound_k = worst
    off = BoundReport(
        check="delta-concentration-offcenter",
        params={"j": j, "p": p, "q": q, "k": k},
        computed=float(gamma[k]),
        bound=bound_k,
        direction="upper",
    )
    return center, off


def phase_sum_check(x: float, p: int) -> BoundReport:
    """Geometric phase-sum bound: |mean of w_p^(i*x)| <= delta / |x|_p.

    delta is the distance from x to the nearest integer and |x|_p the
    distance to the nearest multiple of p.  When x is a multiple of p the
    right side has no content and an UndefinedBoundError is raised.
    """
    p = int(p)
    if p < 1:
        raise InvalidSizeError(f"need p >= 1, got {p}")
    x = float(x)
    m = signed_mod(x, p)
    if m == 0.0:
        raise UndefinedBoundError(f"x={x} is a multiple of p={p}; the bound is undefined")
    i = np.arange(p)
    computed = abs(np.exp((2j * np.pi * x / p) * i).mean())
    bound = _nearest_int_distance(x) / m
    return BoundReport(
        check="phase-sum-bound",
        params={"x": x, "p": p},
        computed=float(computed),
        bound=float(bound),
        direction="upper",
    )


def amplitude_lower_check(beta: Superposition, j: int, q: int) -> BoundReport:
    """Lower bound on a primed amplitude for an arbitrary state.

    |gamma_{j'}| is at least the center term for beta_j minus the summed
    off-center leakage of every other component.  The printed bound can go
    negative for adversarial states, in which case it is vacuous.
    """
    p = beta.length
    if p < 2:
        raise InvalidSizeError(f"need p >= 2, got {p}")
    if q <= 2 * p:
        raise DomainTooSmallError(f"the concentration bounds need q > 2p, got q={q}, p={p}")
    if not 0 <= j < p:
        raise ValueError(f"index {j} outside [0, {p})")
    ratio = p / q
    scale = math.sqrt(ratio)
    mags = np.abs(beta.amplitudes)
    bound = mags[j] * scale * (1.0 - 20.0 * ratio * ratio)
    for k in range(p):
        if k != j:
            bound -= mags[k] * scale * (2.0 / signed_mod(k - j, p)) * ratio
    gamma_j = np.abs(_gamma_at_primed(beta, q, [j]))[0]
    return BoundReport(
        check="amplitude-lower",
        params={"j": j, "p": p, "q": q},
        computed=float(gamma_j),
        bound=float(bound),
        direction="lower",
        vacuous=bool(bound < 0),
    )


def cross_term_check(beta: Superposition, s: IndexSet, q: int) -> BoundReport:
    """Summed off-center leakage into a set of primed indices.

    The exact double sum over s in S and t != s of
    |beta_t| * sqrt(p/q) * (2/|t-s|_p) * (p/q) must stay below
    (p/q)^(3/2) * 8 * sqrt(|S|) * ln(p).  Needs p >= 3 for the log factor.
    """
    p = beta.length
    if p < 3:
        raise InvalidSizeError(f"the leakage bound needs p >= 3, got {p}")
    if s.size != p:
        raise ValueError(f"index set lives in [0, {s.size}), expected [0, {p})")
    if len(s) == 0:
        raise ValueError("index set must be nonempty")
    q = int(q)
    if q < 1:
        raise InvalidSizeError(f"need q >= 1, got {q}")
    ratio = p / q
    scale = math.sqrt(ratio) * ratio
    mags = np.abs(beta.amplitudes)
    total = 0.0
    for si in s:
        for t in range(p):
            if t != si:
                total += mags[t] * (2.0 / signed_mod(t - si, p))
    computed = scale * total
    bound = ratio ** 1.5 * 8.0 * math.sqrt(len(s)) * math.log(p)
    return BoundReport(
        check="cross-term-sum",
        params={"p": p, "q": q, "set_size": len(s)},
        computed=float(computed),
        bound=float(bound),
        direction="upper",
    )


def is_delta_uniform(values, delta: float) -> bool:
    """True when all nonzero magnitudes lie within a factor delta of each other.

    Boundary ratios count as uniform; the comparison allows 1e-12 relative
    play so band edges produced by log arithmetic do not flap.
    """
    if not 0 < delta <= 1:
        raise ValueError(f"delta must lie in (0, 1], got {delta}")
    vec = values.amplitudes if isinstance(values, Superposition) else np.asarray(values)
    mags = np.abs(vec)
    nz = mags[mags > 0]
    if nz.size <= 1:
        return True
    return float(nz.min()) >= delta * float(nz.max()) * (1.0 - 1e-12)


@dataclass(frozen=True)
class ThresholdParams:
    """Inputs to the domain-size threshold for distribution closeness.

    r and c are the mass-bound parameters, set_size the size of the index
    set the mass bound is applied to, delta the uniformity ratio of one
    magnitude band.  k tags the number of axes for bookkeeping; it does not
    enter the one-dimensional formula.
    """

    p: int
    s_n: float
    r: float
    c: float
    set_size: int
    delta: float
    k: int = 1

    def __post_init__(self):
        if self.p < 2:
            raise InvalidSizeError(f"need p >= 2, got {self.p}")
        if self.r < 1:
            raise ValueError(f"need r >= 1, got {self.r}")
        if not 0 < self.c <= 1:
            raise ValueError(f"need 0 < c <= 1, got {self.c}")
        if self.set_size < 1:
            raise ValueError(f"need a nonempty set, got {self.set_size}")
        if not 0 < self.delta < 1:
            raise ValueError(f"need 0 < delta < 1, got {self.delta}")
        if self.k < 1:
            raise ValueError(f"need k >= 1, got {self.k}")

    @property
    def n(self) -> float:
        return math.log2(self.p)

    @classmethod
    def from_accuracy(cls, p: int, s_n: float, set_size: int | None = None, k: int = 1) -> "ThresholdParams":
        """Standard parameterization: r = 4*s_n and c = 1/(2*s_n)."""
        if s_n < 0.5:
            raise ValueError(f"need s_n >= 0.5 so that c <= 1, got {s_n}")
        r = 4.0 * s_n
        return cls(
            p=int(p),
            s_n=float(s_n),
            r=r,
            c=1.0 / (2.0 * s_n),
            set_size=int(p if set_size is None else set_size),
            delta=1.0 - 1.0 / (100.0 * r),
            k=k,
        )


def closeness_threshold(params: ThresholdParams) -> float:
    """Domain multiplier above which the L1 closeness guarantee kicks in.

    t = 6400 * r * ln(p) * sqrt(|ln(c / (100 r |S|))|)
        / sqrt(c * |ln(1 - 1/(100 r))|)

    Both inner logarithms are of quantities in (0, 1), so their absolute
    values are what make the square roots real.  The required domain size
    is then q >= t * p.  Monotone increasing in both s_n and p under the
    from_accuracy parameterization.
    """
    r, c = params.r, params.c
    num = math.sqrt(abs(math.log(c / (100.0 * r * params.set_size))))
    den = math.sqrt(c * abs(math.log(1.0 - 1.0 / (100.0 * r))))
    return 6400.0 * r * math.log(params.p) * num / den


def uniform_mass_check(
    beta: Superposition, s: IndexSet, delta: float, r: float, q: int
) -> BoundReport:
    """Mass retention at primed indices for a delta-uniform restriction.

    With c the restricted mass and beta delta-uniform on S, the primed mass
    sum_{s in S} |gamma_{s'}|^2 must reach (p/q) * delta^2 * (1 - 1/(100r)) * c
    once q clears (3200 r ln(p) / (delta sqrt(c))) * p.  Below that domain
    size the check still runs but is flagged advisory via
    params["hypothesis_met"].
    """
    p = beta.length
    if p < 2:
        raise InvalidSizeError(f"need p >= 2, got {p}")
    if r < 1:
        raise ValueError(f"need r >= 1, got {r}")
    if s.size != p:
        raise ValueError(f"index set lives in [0, {s.size}), expected [0, {p})")
    restricted = restrict(beta, s)
    if not is_delta_uniform(restricted, delta):
        raise ValueError("beta restricted to S is not delta-uniform at the given delta")
    c = float(np.sum(np.abs(restricted) ** 2))
    if c <= 0:
        raise ValueError("restriction carries no mass")
    q_min = (3200.0 * r * math.log(p) / (delta * math.sqrt(c))) * p
    gamma = _gamma_at_primed(beta, q, list(s))
    computed = float(np.sum(np.abs(gamma) ** 2))
    bound = (p / q) * delta * delta * (1.0 - 1.0 / (100.0 * r)) * c
    return BoundReport(
        check="uniform-mass-lower",
        params={
            "p": p,
            "q": q,
            "r": r,
            "delta": delta,
            "c": c,
            "set_size": len(s),
            "q_min": q_min,
            "hypothesis_met": bool(q > q_min),
        },
        computed=computed,
        bound=float(bound),
        direction="lower",
    )


@dataclass(frozen=True)
class DeltaUniformPartition:
    """Split of an index set into geometric magnitude bands.

    ``cells`` are delta-uniform pieces ordered by decreasing magnitude;
    ``discarded`` holds the indices whose amplitude fell below the cutoff
    sqrt(c / (100 r |S|)).  Cells and discarded together tile the input set.
    """

    delta: float
    cutoff: float
    cells: tuple
    discarded: IndexSet


def partition_delta_uniform(beta: Superposition, s: IndexSet, r: float) -> DeltaUniformPartition:
    """Partition S by amplitude magnitude into delta-uniform bands.

    Band i collects indices with delta^i < |beta_s| <= delta^(i-1) where
    delta = 1 - 1/(100 r); indices below the cutoff are discarded.  The
    discarded mass is at most c/(100 r) by construction of the cutoff.
    """
    p = beta.length
    if s.size != p:
        raise ValueError(f"index set lives in [0, {s.size}), expected [0, {p})")
    if r < 1:
        raise ValueError(f"need r >= 1, got {r}")
    if len(s) == 0:
        raise ValueError("cannot partition an empty set")
    mags = np.abs(beta.amplitudes)
    c = float(np.sum(mags[list(s)] ** 2))
    if c <= 0:
        raise ValueError("restriction carries no mass")
    delta = 1.0 - 1.0 / (100.0 * r)
    cutoff = math.sqrt(c / (100.0 * r * len(s)))
    log_inv_delta = -math.log(delta)

    discarded = []
    bands: dict[int, list] = {}
    for idx in s:
        m = float(mags[idx])
        if m < cutoff:
            discarded.append(idx)
            continue
        band = max(1, math.floor(-math.log(m) / log_inv_delta) + 1) if m < 1.0 else 1
        bands.setdefault(band, []).append(idx)
    cells = tuple(
        IndexSet.of(bands[b], p) for b in sorted(bands)
    )
    return DeltaUniformPartition(
        delta=delta,
        cutoff=cutoff,
        cells=cells,
        discarded=IndexSet.of(discarded, p),
    )


def restricted_mass_check(beta: Superposition, s: IndexSet, r: float, q: int) -> BoundReport:
    """Mass retention at primed indices for an arbitrary restriction.

    sum_{s in S} |gamma_{s'}|^2 must reach (p/q) * (1 - 1/r) * c once q
    clears the closeness threshold multiplier times p, with c the restricted
    mass.  Sub-threshold domains run advisory, as in uniform_mass_check.
    """
    p = beta.length
    if p < 2:
        raise InvalidSizeError(f"need p >= 2, got {p}")
    if r < 1:
        raise ValueError(f"need r >= 1, got {r}")
    if s.size != p:
        raise ValueError(f"index set lives in [0, {s.size}), expected [0, {p})")
    if len(s) == 0:
        raise ValueError("index set must be nonempty")
    restricted = restrict(beta, s)
    c = float(np.sum(np.abs(restricted) ** 2))
    if c <= 0:
        raise ValueError("restriction carries no mass")
    tp = ThresholdParams(
        p=p, s_n=max(0.5, r / 4.0), r=float(r), c=min(1.0, c),
        set_size=len(s), delta=1.0 - 1.0 / (100.0 * r),
    )
    q_min = closeness_threshold(tp) * p
    gamma = _gamma_at_primed(beta, q, list(s))
    computed = float(np.sum(np.abs(gamma) ** 2))
    bound = (p / q) * (1.0 - 1.0 / r) * c
    return BoundReport(
        check="restricted-mass-lower",
        params={
            "p": p,
            "q": q,
            "r": r,
            "c": c,
            "set_size": len(s),
            "q_min": q_min,
            "hypothesis_met": bool(q >= q_min),
        },
        computed=computed,
        bound=float(bound),
        direction="lower",
    )


def closeness_check(alpha: Superposition, s_n: float, q: int) -> BoundReport:
    """End-to-end distribution closeness: L1(D_beta, D_gamma) <= 1/s_n.

    Uses the standard parameterization r = 4 s_n, c = 1/(2 s_n).  The
    minimal compliant q is ceil(threshold * p); smaller q runs advisory.
    """
    p = alpha.length
    params = ThresholdParams.from_accuracy(p, s_n)
    q_min = math.ceil(closeness_threshold(params) * p)
    computed = l1_distance(dist_beta(alpha), dist_gamma(alpha, q))
    return BoundReport(
        check="distribution-closeness",
        params={
            "p": p,
            "q": q,
            "s_n": s_n,
            "q_min": q_min,
            "hypothesis_met": bool(q >= q_min),
        },
        computed=float(computed),
        bound=1.0 / s_n,
        direction="upper",
    )


def _delta_tensor_inverse(y, dims) -> MultiSuperposition:
    """Inverse transform of a product delta state, built axis by axis."""
    parts = []
    for y_i, p_i in zip(y, dims):
        col = np.exp((-2j * np.pi * int(y_i) / p_i) * np.arange(p_i)) / math.sqrt(p_i)
        parts.append(col)
    arr = parts[0]
    for col in parts[1:]:
        arr = np.multiply.outer(arr, col)
    return MultiSuperposition(arr)


def multidim_concentration_check(y, dims_p, dims_q) -> tuple[BoundReport, BoundReport]:
    """Product-domain version of concentration_check.

    Center bound: product over axes of sqrt(p_i/q_i)(1 - 20 p_i^2/q_i^2).
    Off-center: product of sqrt(p_i/q_i) times, per differing axis,
    (2/|z_i - y_i|_{p_i}) * (p_i/q_i).  Requires q_i > 2 p_i on every axis.
    """
    dims_p = tuple(int(v) for v in dims_p)
    dims_q = tuple(int(v) for v in dims_q)
    y = tuple(int(v) for v in y)
    if len(dims_p) != len(dims_q) or len(y) != len(dims_p):
        raise ValueError("y, dims_p, dims_q must have equal rank")
    for axis, (p_i, q_i) in enumerate(zip(dims_p, dims_q)):
        if p_i < 2:
            raise InvalidSizeError(f"axis {axis}: need p >= 2, got {p_i}")
        if q_i <= 2 * p_i:
            raise DomainTooSmallError(
                f"axis {axis}: the concentration bounds need q > 2p, got q={q_i}, p={p_i}"
            )
        if not 0 <= y[axis] < p_i:
            raise ValueError(f"axis {axis}: index {y[axis]} outside [0, {p_i})")

    alpha = _delta_tensor_inverse(y, dims_p)
    maps = [PrimedMap(p_i, q_i) for p_i, q_i in zip(dims_p, dims_q)]
    points = [tuple(m.index(i) for m, i in zip(maps, z)) for z in np.ndindex(*dims_p)]
    mags = np.abs(multidim_dft_at(alpha, dims_q, points)).reshape(dims_p)

    scale = math.prod(math.sqrt(p_i / q_i) for p_i, q_i in zip(dims_p, dims_q))
    center_factors = [1.0 - 20.0 * (p_i / q_i) ** 2 for p_i, q_i in zip(dims_p, dims_q)]
    center_bound = scale * math.prod(center_factors)
    center = BoundReport(
        check="multidim-concentration-center",
        params={"y": list(y), "dims_p": list(dims_p), "dims_q": list(dims_q)},
        computed=float(mags[y]),
        bound=float(center_bound),
        direction="lower",
        vacuous=any(f < 0 for f in center_factors),
    )

    worst = None
    for z in np.ndindex(*dims_p):
        if z == y:
            continue
        bound_z = scale
        for z_i, y_i, p_i, q_i in zip(z, y, dims_p, dims_q):
            if z_i != y_i:
                bound_z *= (2.0 / signed_mod(z_i - y_i, p_i)) * (p_i / q_i)
        slack_z = bound_z - float(mags[z])
        if worst is None or slack_z < worst[0]:
            worst = (slack_z, z, bound_z)
    _, z, bound_z = worst
    off = BoundReport(
        check="multidim-concentration-offcenter",
        params={"y": list(y), "z": list(z), "dims_p": list(dims_p), "dims_q": list(dims_q)},
        computed=float(mags[z]),
        bound=float(bound_z),
        direction="upper",
    )
    return center, off


def _check_tuple_set(indices, dims) -> list:
    pts = [tuple(int(v) for v in t) for t in indices]
    if not pts:
        raise ValueError("index set must be nonempty")
    if len(set(pts)) != len(pts):
        raise ValueError("index tuples must be distinct")
    for t in pts:
        if len(t) != len(dims):
            raise ValueError(f"index tuple {t} does not match rank {len(dims)}")
        for axis, (v, p_i) in enumerate(zip(t, dims)):
            if not 0 <= v < p_i:
                raise ValueError(f"axis {axis}: index {v} outside [0, {p_i})")
    return pts


def multidim_cross_term_check(beta: MultiSuperposition, indices, dims_q) -> BoundReport:
    """Product-domain leakage sum against its closed-form ceiling.

    The exact sum over x in S and z != x of |beta_z| times the per-axis
    leakage factors must stay below
    2^(k+2) * k^(k+1) * sqrt(|S|) * (ln p)^k * min_i(p_i/q_i), p = max p_i.
    """
    dims_p = beta.dims
    dims_q = tuple(int(v) for v in dims_q)
    if len(dims_q) != len(dims_p):
        raise ValueError("dims_q must match the tensor rank")
    for axis, p_i in enumerate(dims_p):
        if p_i < 3:
            raise InvalidSizeError(f"axis {axis}: the leakage bound needs p >= 3, got {p_i}")
    pts = _check_tuple_set(indices, dims_p)
    k = len(dims_p)
    mags = np.abs(beta.amplitudes)
    total = 0.0
    for x in pts:
        for z in np.ndindex(*dims_p):
            if z == x:
                continue
            term = float(mags[z])
            for z_i, x_i, p_i, q_i in zip(z, x, dims_p, dims_q):
                if z_i != x_i:
                    term *= (2.0 / signed_mod(z_i - x_i, p_i)) * (p_i / q_i)
            total += term
    p_max = max(dims_p)
    bound = (
        2.0 ** (k + 2)
        * float(k) ** (k + 1)
        * math.sqrt(len(pts))
        * math.log(p_max) ** k
        * min(p_i / q_i for p_i, q_i in zip(dims_p, dims_q))
    )
    return BoundReport(
        check="multidim-cross-term",
        params={"dims_p": list(dims_p), "dims_q": list(dims_q), "set_size": len(pts)},
        computed=float(total),
        bound=float(bound),
        direction="upper",
    )


def multidim_restricted_mass_check(
    beta: MultiSuperposition, indices, r: float, dims_q
) -> BoundReport:
    """Product-domain mass retention at primed tuples.

    sum over S of |gamma at the primed tuple|^2 must reach
    prod(p_i/q_i) * (1 - 1/r) * c.  The per-axis hypothesis requires
    q_i > T * p_i with T = 2^(k+2) k^(k+1) 800 r (ln p)^k
    * sqrt(|ln(c/(100 r |S|))|) / sqrt(c |ln(1 - 1/(100 r))|).
    """
    dims_p = beta.dims
    dims_q = tuple(int(v) for v in dims_q)
    if len(dims_q) != len(dims_p):
        raise ValueError("dims_q must match the tensor rank")
    if r < 1:
        raise ValueError(f"need r >= 1, got {r}")
    for axis, (p_i, q_i) in enumerate(zip(dims_p, dims_q)):
        if p_i < 2:
            raise InvalidSizeError(f"axis {axis}: need p >= 2, got {p_i}")
        if q_i <= p_i:
            raise DomainTooSmallError(f"axis {axis}: need q > p, got q={q_i}, p={p_i}")
    pts = _check_tuple_set(indices, dims_p)
    k = len(dims_p)
    mags = np.abs(beta.amplitudes)
    c = float(sum(mags[x] ** 2 for x in pts))
    if c <= 0:
        raise ValueError("restriction carries no mass")

    alpha = multidim_dft(beta, dims_p, "inverse")
    maps = [PrimedMap(p_i, q_i) for p_i, q_i in zip(dims_p, dims_q)]
    primed = [tuple(m.index(v) for m, v in zip(maps, x)) for x in pts]
    gamma = multidim_dft_at(alpha, dims_q, primed)
    computed = float(np.sum(np.abs(gamma) ** 2))

    p_max = max(dims_p)
    t_mult = (
        2.0 ** (k + 2)
        * float(k) ** (k + 1)
        * 800.0
        * r
        * math.log(p_max) ** k
        * math.sqrt(abs(math.log(c / (100.0 * r * len(pts)))))
        / math.sqrt(c * abs(math.log(1.0 - 1.0 / (100.0 * r))))
    )
    bound = math.prod(p_i / q_i for p_i, q_i in zip(dims_p, dims_q)) * (1.0 - 1.0 / r) * c
    return BoundReport(
        check="multidim-restricted-mass",
        params={
            "dims_p": list(dims_p),
            "dims_q": list(dims_q),
            "r": r,
            "c": c,
            "set_size": len(pts),
            "q_min_multiplier": t_mult,
            "hypothesis_met": bool(all(q_i > t_mult * p_i for p_i, q_i in zip(dims_p, dims_q))),
        },
        computed=computed,
        bound=float(bound),
        direction="lower",
    )
