"""Bit commitment built on the partially secure transfer protocol.

The committer picks N strings of M bits each, all with parity equal to her
bit, and transfers every bit through the partial OT. Classically the cheat
probabilities Nq^M (receiver) and p^N (committer) vanish for large M, N.
Quantumly they do not: keeping the string choices in superposition leaves
the receiver holding one of

    W_0 = rho_even^(x)N        W_1 = rho_odd^(x)N

where rho_even / rho_odd are equal mixtures of the even / odd parity tensor
products of the two signal states. The committer then unveils the bit of
her choice with probability (1 + f^2)/2 for f = F(W_0, W_1), while a
receiver measuring parity jointly guesses the commitment with probability
(1 + d)/2 for d = D(W_0, W_1). For this strategy pair f + d >= 1 for every
(M, N, theta): the two failure modes cannot both be driven to zero.

Fidelity is multiplicative under tensor products, so f = F(rho_E, rho_O)^N;
the single-string fidelity is evaluated exactly for any M by reducing the
pair (rho_E, rho_O) to invariant 2x2 blocks (see ``mixture_fidelity``).
Trace distance has no such product rule, so d is computed by brute
eigendecomposition of W_0 - W_1 up to the exact-computation cap and bracketed
by the Fuchs-van de Graaf interval [1 - f, sqrt(1 - f^2)] beyond it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg, ot

# Largest M*N for which W_0, W_1 are built densely (dimension 2^(M*N)).
EXACT_CAP = 12

EVEN = "even"
ODD = "odd"


@dataclass(frozen=True)
class BcParams:
    """Commitment knobs: m bits per string, n strings, transfer angle theta."""

    m: int
    n: int
    theta: float

    def __post_init__(self):
        if int(self.m) < 1 or int(self.n) < 1:
            raise ValueError(f"m and n must be positive integers, got ({self.m}, {self.n})")
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "n", int(self.n))
        # delegates the (0, pi/4] range check
        object.__setattr__(self, "theta", ot.OtParams(self.theta).theta)

    @property
    def ot_params(self) -> ot.OtParams:
        return ot.OtParams(self.theta)


@dataclass(frozen=True)
class ParityMixture:
    """Equal mixture of all same-parity m-fold signal-state products."""

    parity: str
    m: int
    theta: float
    operator: np.ndarray


def build_parity_mixture(
    m: int,
    theta: float,
    parity: str,
    *,
    dim_cap: int = linalg.DEFAULT_DIM_CAP,
) -> ParityMixture:
    """Dense 2^m-dimensional parity mixture (1/2^(m-1)) sum over matching strings.

    Built by the two-track recursion over string length: appending a bit to
    an even-parity prefix keeps parity for signal 0 and flips it for signal 1.
    """
    if parity not in (EVEN, ODD):
        raise ValueError(f"parity must be {EVEN!r} or {ODD!r}, got {parity!r}")
    if m < 1:
        raise ValueError("m must be >= 1")
    if 2**m > dim_cap:
        raise linalg.DimensionCapError(
            f"parity mixture dimension 2^{m} exceeds cap {dim_cap}"
        )
    psi0, psi1 = ot.make_states(theta)
    p0, p1 = linalg.projector(psi0), linalg.projector(psi1)
    even, odd = p0, p1
    for _ in range(m - 1):
        even, odd = (
            0.5 * (np.kron(even, p0) + np.kron(odd, p1)),
            0.5 * (np.kron(even, p1) + np.kron(odd, p0)),
        )
    return ParityMixture(parity, m, float(theta), even if parity == EVEN else odd)


def mixture_fidelity(m: int, theta: float) -> float:
    """Exact F(rho_even, rho_odd) for m-bit strings, for any m.

    The pair commutes with every two-site parity operator Z_i Z_j, which
    splits both mixtures into 2x2 blocks spanned by a basis string and its
    bitwise complement. Within the block labelled by a weight-k string the
    matrices are [[a_k, g], [g, a_{m-k}]] with a_k = cos^2(th)^(m-k)
    sin^2(th)^k and g = (sin th cos th)^m; both blocks are rank one with
    det = a_k a_{m-k} - g^2 = 0, so each block contributes |a_k - a_{m-k}|
    and the total reduces to a binomial tail difference:

        F = (1/2) sum_k C(m,k) |a_k - a_{m-k}|
          = |P[X < m/2] - P[X > m/2]|,   X ~ Binomial(m, sin^2 th).

    Cross-checked against the dense fidelity of the built mixtures in the
    test suite.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    s2 = math.sin(theta) ** 2
    c2 = math.cos(theta) ** 2
    if s2 == 0.0:
        return 1.0
    log_s2, log_c2 = math.log(s2), math.log(c2)
    log_pmf = [
        math.lgamma(m + 1) - math.lgamma(k + 1) - math.lgamma(m - k + 1)
        + (m - k) * log_c2 + k * log_s2
        for k in range(m + 1)
    ]
    pmf = np.exp(np.array(log_pmf))
    f = 0.5 * float(np.abs(pmf - pmf[::-1]).sum())
    return min(max(f, 0.0), 1.0)


def mixture_trace_distance(m: int, theta: float) -> float:
    """Exact D(rho_even, rho_odd) = sin(2 theta)^m.

    The difference of the two mixtures is 2^(1-m) sin(2 theta)^m X^(x)m,
    whose 2^m eigenvalues are all +-sin(2 theta)^m 2^(1-m); cross-checked
    densely in the test suite.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    return math.sin(2 * theta) ** m


def build_w(
    params: BcParams,
    bit: int,
    *,
    dim_cap: int = linalg.DEFAULT_DIM_CAP,
) -> np.ndarray:
    """N-fold tensor power W_bit of the matching parity mixture (dim 2^(MN))."""
    if bit not in (0, 1):
        raise ValueError(f"bit must be 0 or 1, got {bit!r}")
    mixture = build_parity_mixture(
        params.m, params.theta, EVEN if bit == 0 else ODD, dim_cap=dim_cap
    )
    return linalg.tensor_power(mixture.operator, params.n, dim_cap=dim_cap)


def compute_f(
    params: BcParams,
    *,
    cross_check: bool = False,
    dim_cap: int = linalg.DEFAULT_DIM_CAP,
) -> float:
    """Committer's steering fidelity f = F(W_0, W_1) = F(rho_E, rho_O)^N.

    With ``cross_check`` the multiplicative value is verified against the
    dense F(W_0, W_1) (possible only while 2^(MN) fits under the cap);
    disagreement beyond 1e-8 raises.
    """
    f = mixture_fidelity(params.m, params.theta) ** params.n
    if cross_check:
        direct = linalg.fidelity(
            build_w(params, 0, dim_cap=dim_cap), build_w(params, 1, dim_cap=dim_cap)
        )
        if abs(f - direct) > 1e-8:
            raise ArithmeticError(
                f"multiplicative fidelity {f!r} disagrees with dense value {direct!r}"
            )
    return f


@dataclass(frozen=True)
class TraceDistanceBound:
    """Exact value (lo == hi) or a rigorous Fuchs-van de Graaf interval."""

    lo: float
    hi: float
    exact: bool

    @property
    def value(self) -> float:
        """The exact value; for interval results, the conservative lower bound."""
        return self.lo


def compute_d(
    params: BcParams,
    *,
    exact_cap: int = EXACT_CAP,
    dim_cap: int = linalg.DEFAULT_DIM_CAP,
) -> TraceDistanceBound:
    """Receiver's parity distinguishability d = D(W_0, W_1).

    Exact via eigendecomposition of W_0 - W_1 while M*N <= exact_cap;
    beyond the cap, returns the interval [1 - f, sqrt(1 - f^2)].
    """
    if params.m * params.n <= exact_cap:
        d = linalg.trace_distance(
            build_w(params, 0, dim_cap=max(dim_cap, 2 ** (params.m * params.n))),
            build_w(params, 1, dim_cap=max(dim_cap, 2 ** (params.m * params.n))),
        )
        return TraceDistanceBound(d, d, True)
    f = compute_f(params)
    lo = max(0.0, 1.0 - f)
    hi = math.sqrt(max(0.0, 1.0 - f * f))
    return TraceDistanceBound(lo, hi, False)


@dataclass(frozen=True)
class ClassicalBounds:
    """The composition argument's cheat bounds for transfer ceilings (p, q)."""

    alice: float          # p^N
    bob_raw: float        # N q^M, can exceed 1
    bob: float            # min(1, N q^M)
    clipped: bool


def classical_bounds(p: float, q: float, m: int, n: int) -> ClassicalBounds:
    """alice = p^N and bob = min(1, N q^M); the raw union bound is kept alongside."""
    raw = n * q**m
    return ClassicalBounds(alice=p**n, bob_raw=raw, bob=min(1.0, raw), clipped=raw > 1.0)


@dataclass(frozen=True)
class BcCheatReport:
    """Cheat probabilities for one (M, N, theta) choice.

    ``d`` may be an interval; the flat ``bob_quantum`` and ``f_plus_d``
    accessors use its conservative lower end.
    """

    params: BcParams
    f: float
    d: TraceDistanceBound
    alice_quantum: float      # (1 + f^2)/2
    classical: ClassicalBounds

    @property
    def bob_quantum(self) -> float:
        return 0.5 * (1.0 + self.d.lo)

    @property
    def bob_quantum_hi(self) -> float:
        return 0.5 * (1.0 + self.d.hi)

    @property
    def f_plus_d(self) -> float:
        return self.f + self.d.lo


def cheat_report(
    params: BcParams,
    *,
    exact_cap: int = EXACT_CAP,
    cross_check: bool = False,
    dim_cap: int = linalg.DEFAULT_DIM_CAP,
) -> BcCheatReport:
    """Full report: quantum f, d and the classical composition bounds."""
    sec = ot.partial_security(params.ot_params)
    f = compute_f(params, cross_check=cross_check, dim_cap=dim_cap)
    d = compute_d(params, exact_cap=exact_cap, dim_cap=dim_cap)
    return BcCheatReport(
        params=params,
        f=f,
        d=d,
        alice_quantum=0.5 * (1.0 + f * f),
        classical=classical_bounds(sec.p, sec.q, params.m, params.n),
    )


def sweep(
    theta: float,
    m_values,
    n_values,
    *,
    exact_cap: int = EXACT_CAP,
    allow_interval: bool = True,
    cross_check: bool = False,
    dim_cap: int = linalg.DEFAULT_DIM_CAP,
) -> list[BcCheatReport]:
    """Cheat reports over an (M, N) grid, ordered by (M, N).

    Rows above the exact cap are interval rows; pass ``allow_interval=False``
    to refuse them instead.
    """
    rows: list[BcCheatReport] = []
    for m in sorted(set(int(v) for v in m_values)):
        for n in sorted(set(int(v) for v in n_values)):
            if m * n > exact_cap and not allow_interval:
                raise linalg.DimensionCapError(
                    f"M*N = {m * n} exceeds the exact-computation cap {exact_cap}; "
                    "enable interval mode to emit bounded rows"
                )
            rows.append(
                cheat_report(
                    BcParams(m, n, theta),
                    exact_cap=exact_cap,
                    cross_check=cross_check,
                    dim_cap=dim_cap,
                )
            )
    return rows
