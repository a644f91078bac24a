"""
Jordan-block relative position operators
========================================

A single complex Jordan block couples a rotary phase to a nilpotent
polynomial response.  The generator of one block is

    J_m = (-gamma + i*omega) I + eta N_m,        N_m^m = 0,

and because the nilpotent series truncates, its exponential has the
closed form

    G_m(d) = exp(d J_m)
           = e^{(-gamma + i*omega) d} * sum_{r<m} (eta d)^r / r! * N_m^r.

Entry (p, p+r) is therefore e^{(-gamma+i*omega)d} (eta d)^r / r!; all
entries below the diagonal and beyond the chain length are exactly zero.

Three families are supported:

* ``raw``     - the operator above; nilpotent channels grow like d^r.
* ``scaled``  - generator (-(c/L) + i*omega) I + (eta/L) N_m, which keeps
  the one-parameter law G(d1+d2) = G(d1) G(d2) while normalizing damping
  and shear by a training length L.
* ``damped``  - raw with eta pinned to 0 (damped rotary phase only).

A fourth, non-group object is the bounded-coordinate kernel
``stabilized_operator``: it substitutes tau(d) = d / (1 + d/L) for d in
every nilpotent channel.  tau(d) = d + O(d^2/L), so the local response
matches the raw operator, but tau(d1+d2) != tau(d1) + tau(d2) and the
one-parameter law fails; ``group_law_defect`` makes that failure
measurable.

Realification replaces each complex entry a+bi by the 2x2 real block
[[a, -b], [b, a]], so an order-m block acts on 2m real coordinates and
its entries span the real feature family

    d^r e^{-gamma d} cos(omega d),   d^r e^{-gamma d} sin(omega d),

returned directly by ``jet_features``.  Up to constants these are the
frequency derivatives  d_omega^r e^{i omega d} = (i d)^r e^{i omega d},
which ``frequency_jet_check`` verifies by central finite differences.

All functions are pure; matrices are returned with read-only storage.
Entries are assembled from real exp/cos/sin evaluations (scalar complex
exponentials are never called), so construction is bit-reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

RAW = "raw"
SCALED = "scaled"
DAMPED = "damped"
VARIANTS = (RAW, SCALED, DAMPED)

COMPLEX = "complex"
REALIFIED = "realified"

# Default magnitude cap used to flag (not clamp) overflowing raw operators.
OVERFLOW_CAP = math.exp(60.0)

# 2x2 building blocks of realification: a+bi -> a*I2 + b*J2.
_I2 = np.array([[1.0, 0.0], [0.0, 1.0]])
_J2 = np.array([[0.0, -1.0], [1.0, 0.0]])


@dataclass(frozen=True)
class JordanGenerator:
    """Parameters of one complex Jordan block.

    ``gamma`` is a nonnegative damping rate per unit lag (the causal-lag
    convention d = i - j >= 0 makes e^{-gamma d} decay into the past),
    ``omega`` an angular frequency in radians per unit lag, ``eta`` the
    nilpotent amplitude, and ``order`` the chain length m >= 1.  For the
    scaled variant, ``c`` and ``L`` define the normalized generator; any
    extra ``gamma`` is additional damping on top of c/L (zero by default,
    which reproduces the plain scaled family).
    """

    gamma: float = 0.0
    omega: float = 0.0
    eta: float = 0.0
    order: int = 1
    variant: str = RAW
    c: float = 1.0
    L: float = 1024.0

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.gamma < 0:
            raise ValueError("gamma must be nonnegative")
        if self.order < 1:
            raise ValueError("order must be >= 1")
        if self.variant == SCALED:
            if self.L <= 0:
                raise ValueError("scaled variant requires L > 0")
            if self.c < 0:
                raise ValueError("scaled variant requires c >= 0")
        if self.variant == DAMPED and self.eta != 0.0:
            object.__setattr__(self, "eta", 0.0)

    @property
    def damping_rate(self) -> float:
        """Total decay rate of the diagonal (gamma, plus c/L when scaled)."""
        if self.variant == SCALED:
            return self.gamma + self.c / self.L
        return self.gamma

    @property
    def shear_rate(self) -> float:
        """Effective superdiagonal amplitude (eta, or eta/L when scaled)."""
        if self.variant == SCALED:
            return self.eta / self.L
        return self.eta


@dataclass(frozen=True)
class BlockMatrix:
    """Dense square matrix of one block: complex (m x m) or realified (2m x 2m).

    ``overflow`` is set when any entry magnitude exceeded the cap chosen
    by the operation that produced the matrix; entries are kept as
    computed so the caller decides what to do with a flagged result.
    """

    entries: np.ndarray
    overflow: bool = False

    def __post_init__(self):
        if self.entries.ndim != 2 or self.entries.shape[0] != self.entries.shape[1]:
            raise ValueError("BlockMatrix entries must be square")
        self.entries.setflags(write=False)

    @property
    def kind(self) -> str:
        return COMPLEX if np.iscomplexobj(self.entries) else REALIFIED

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    def __matmul__(self, other: "BlockMatrix") -> "BlockMatrix":
        return BlockMatrix(self.entries @ other.entries,
                           overflow=self.overflow or other.overflow)


@dataclass(frozen=True)
class LagGrid:
    """Ordered nonnegative lags with a training cutoff L (train lags are d < L)."""

    values: np.ndarray
    train_cutoff: float

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1:
            raise ValueError("lag grid must be one dimensional")
        if values.size and values[0] < 0:
            raise ValueError("lags must be nonnegative")
        if np.any(np.diff(values) <= 0):
            raise ValueError("lags must be strictly increasing")
        object.__setattr__(self, "values", values)
        values.setflags(write=False)

    @classmethod
    def regular(cls, eval_len: int = 8192, train_len: int = 1024) -> "LagGrid":
        """Integer lags 0 .. eval_len-1 with training lags d < train_len."""
        return cls(np.arange(eval_len, dtype=float), float(train_len))

    @property
    def train_mask(self) -> np.ndarray:
        return self.values < self.train_cutoff


def bounded_coordinate(d, L: float):
    """tau(d) = d / (1 + d/L), the saturating substitute for the linear lag."""
    d = np.asarray(d, dtype=float)
    out = d / (1.0 + d / L)
    return float(out) if out.ndim == 0 else out


def signed_bounded_coordinate(t, L: float):
    """Odd extension tau(t) = t / (1 + |t|/L), bounded for all real t.

    The plain tau is only meant for lags d >= 0; position-wise transforms
    evaluate at negated positions, where the odd extension is the only
    bounded choice.
    """
    t = np.asarray(t, dtype=float)
    out = t / (1.0 + np.abs(t) / L)
    return float(out) if out.ndim == 0 else out


def _phase(re: float, im: float) -> complex:
    """exp(re + i*im) assembled from real exp/cos/sin (overflow -> inf)."""
    if re > 709.0:
        scale = math.inf
    else:
        scale = math.exp(re)
    return complex(scale * math.cos(im), scale * math.sin(im))


def jordan_exponential(exponent: complex, coordinate: float, order: int) -> np.ndarray:
    """Upper triangular e^{exponent} * sum_r coordinate^r / r! N^r (complex m x m)."""
    phase = _phase(exponent.real, exponent.imag)
    out = np.zeros((order, order), dtype=complex)
    coef = 1.0
    for r in range(order):
        if r > 0:
            coef *= coordinate / r
        val = phase * coef
        for p in range(order - r):
            out[p, p + r] = val
    return out


def generator_matrix(gen: JordanGenerator) -> BlockMatrix:
    """The m x m generator: effective eigenvalue on the diagonal, shear above it."""
    m = gen.order
    diag = complex(-gen.damping_rate, gen.omega)
    out = np.zeros((m, m), dtype=complex)
    out[np.arange(m), np.arange(m)] = diag
    if m > 1:
        out[np.arange(m - 1), np.arange(1, m)] = gen.shear_rate
    return BlockMatrix(out)


def relative_operator(gen: JordanGenerator, d: float,
                      cap: float = OVERFLOW_CAP) -> BlockMatrix:
    """Closed-form exp(d J): entry (p, p+r) = e^{lambda d} (eta_eff d)^r / r!.

    Negative d is accepted for algebraic checks (it is the group inverse).
    The result is flagged when any entry magnitude exceeds ``cap``.
    """
    exponent = complex(-gen.damping_rate * d, gen.omega * d)
    entries = jordan_exponential(exponent, gen.shear_rate * d, gen.order)
    overflow = bool(np.max(np.abs(entries)) > cap)
    return BlockMatrix(entries, overflow=overflow)


def realify(M: BlockMatrix) -> BlockMatrix:
    """Replace each complex entry a+bi by [[a, -b], [b, a]] (2m x 2m real).

    Acting on interleaved real vectors (re0, im0, re1, im1, ...) reproduces
    the complex action, and the map is a ring homomorphism, so realified
    exponentials multiply exactly like their complex counterparts.
    """
    entries = np.kron(M.entries.real, _I2) + np.kron(M.entries.imag, _J2)
    return BlockMatrix(entries, overflow=M.overflow)


def interleave(v: np.ndarray) -> np.ndarray:
    """Complex vector -> interleaved real vector matching ``realify``."""
    v = np.asarray(v, dtype=complex)
    out = np.empty(2 * v.size)
    out[0::2] = v.real
    out[1::2] = v.imag
    return out


def stabilized_operator(gen: JordanGenerator, d: float, L: float) -> BlockMatrix:
    """Bounded-tau relative kernel, realified.

    Every nilpotent channel uses tau(d)^r / r! instead of d^r / r!; the
    rotary/damping factor e^{(-gamma + i omega) d} is unchanged.  For
    order two this is

        e^{-gamma d} [[R_{omega d}, eta tau(d) R_{omega d}],
                      [0,           R_{omega d}]].

    The damping is gamma-based regardless of variant, matching the raw
    family this kernel approximates near d = 0.
    """
    exponent = complex(-gen.gamma * d, gen.omega * d)
    tau = bounded_coordinate(d, L)
    entries = jordan_exponential(exponent, gen.eta * tau, gen.order)
    return realify(BlockMatrix(entries))


def group_law_defect(gen: JordanGenerator, d1: float, d2: float,
                     stabilized: bool = False, L: float | None = None) -> float:
    """Frobenius norm of G(d1+d2) - G(d1) G(d2) in the selected family.

    Exactly zero (to rounding) for raw/scaled; strictly positive for the
    stabilized kernel whenever eta != 0, order >= 2 and d1, d2 > 0.
    """
    if stabilized:
        L = gen.L if L is None else L
        whole = stabilized_operator(gen, d1 + d2, L)
        left = stabilized_operator(gen, d1, L)
        right = stabilized_operator(gen, d2, L)
    else:
        whole = relative_operator(gen, d1 + d2)
        left = relative_operator(gen, d1)
        right = relative_operator(gen, d2)
    diff = whole.entries - left.entries @ right.entries
    return float(np.linalg.norm(diff))


def jet_features(gen: JordanGenerator, d: float) -> np.ndarray:
    """The 2m primitive features [x^r env cos(omega d), x^r env sin(omega d)].

    Raw/damped use x = d with env = e^{-gamma d}; scaled uses x = d/L with
    env = e^{-(c/L + gamma) d}.  The eta^r / r! coefficients that appear in
    the operator entries are deliberately not folded in: these are the
    basis functions the operator entries are constant multiples of.
    """
    if gen.variant == SCALED:
        x = d / gen.L
    else:
        x = d
    env = math.exp(-gen.damping_rate * d)
    co, si = math.cos(gen.omega * d), math.sin(gen.omega * d)
    out = np.empty(2 * gen.order)
    power = 1.0
    for r in range(gen.order):
        if r > 0:
            power *= x
        out[2 * r] = power * env * co
        out[2 * r + 1] = power * env * si
    return out


def jet_coefficients(gen: JordanGenerator, order: int | None = None) -> np.ndarray:
    """Constants eta_eff^r / r! mapping jet_features onto operator entries."""
    m = gen.order if order is None else order
    out = np.empty(m)
    coef = 1.0
    for r in range(m):
        if r > 0:
            coef *= gen.shear_rate / r
        out[r] = coef
    return out


# Fourth-order-accurate central stencils for the r-th derivative; the
# usual O(h^2) stencils are too coarse once |h*d| reaches ~1e-2.
_STENCILS = {
    1: ((-2, 1.0 / 12), (-1, -8.0 / 12), (1, 8.0 / 12), (2, -1.0 / 12)),
    2: ((-2, -1.0 / 12), (-1, 16.0 / 12), (0, -30.0 / 12), (1, 16.0 / 12), (2, -1.0 / 12)),
    3: ((-3, 1.0 / 8), (-2, -1.0), (-1, 13.0 / 8), (1, -13.0 / 8), (2, 1.0), (3, -1.0 / 8)),
}


def frequency_jet_check(omega: float, d: float, r: int,
                        h: float) -> tuple[complex, complex, float]:
    """Compare (i d)^r e^{i omega d} against a finite difference in omega.

    Returns (analytic, numeric, rel_error); the error is relative to the
    analytic value, or absolute when the analytic value vanishes (d = 0).
    """
    if r not in _STENCILS:
        raise ValueError("derivative order r must be 1, 2 or 3")
    if h <= 0:
        raise ValueError("step h must be positive")
    analytic = (1j * d) ** r * _phase(0.0, omega * d)
    acc = 0.0 + 0.0j
    for offset, weight in _STENCILS[r]:
        acc += weight * _phase(0.0, (omega + offset * h) * d)
    numeric = acc / h ** r
    denom = abs(analytic)
    rel_error = abs(analytic - numeric) / (denom if denom > 0 else 1.0)
    return analytic, numeric, rel_error

