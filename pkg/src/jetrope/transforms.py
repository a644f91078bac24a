"""
Contragredient position-wise query/key transforms
=================================================

For a one-parameter family G(d) = exp(d J), define the absolute map
A(t) = G(-t).  Transforming queries with the inverse transpose and keys
with the primal map,

    q~_i = A(i)^{-T} q_i,        k~_j = A(j) k_j,

makes the bilinear score a pure function of the causal lag:

    <q~_i, k~_j> = q_i^T A(i)^{-1} A(j) k_j = q_i^T G(i - j) k_j.

The dual action on queries is what distinguishes this from ordinary
rotary encoding: Jordan blocks are not orthogonal, so applying the same
map to both sides would not cancel.  Because A(t) is itself a group
element, its inverse is A evaluated at the negated coordinate; no dense
inversion is ever performed.

The stabilized mode applies per-position factors with the bounded
coordinate tau substituted for the linear one.  Composing two such
factors gives a nilpotent coefficient eta*(sigma(-j) - sigma(-i)) that
depends on the absolute pair (i, j), not only on i - j, so the
position-wise stabilized score and the explicit pairwise stabilized
kernel genuinely differ; ``relative_score_check`` and
``sigma_obstruction`` expose the gap.

Head layout: the head dimension is split into contiguous groups of 2m
real coordinates, one group per frequency (frequency-major), so a head
of width d_h carries d_h / (2m) frequencies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .operators import (
    DAMPED,
    OVERFLOW_CAP,
    RAW,
    SCALED,
    BlockMatrix,
    JordanGenerator,
    jordan_exponential,
    realify,
    relative_operator,
    signed_bounded_coordinate,
    stabilized_operator,
)

STABILIZED = "stabilized"
LAYOUT_VARIANTS = (RAW, SCALED, DAMPED, STABILIZED)

GAMMA_FLOOR = 1e-4
ETA_SCALE = 0.1


def constrain_damping(a):
    """softplus(a) + 1e-4: the nonnegative damping parameterization."""
    return np.logaddexp(0.0, np.asarray(a, dtype=float)) + GAMMA_FLOOR


def constrain_shear(b):
    """0.1 * tanh(b): the bounded nilpotent-amplitude parameterization."""
    return ETA_SCALE * np.tanh(np.asarray(b, dtype=float))


def damping_raw_value(gamma: float) -> float:
    """Inverse of constrain_damping (gamma must exceed the 1e-4 floor)."""
    if gamma <= GAMMA_FLOOR:
        raise ValueError("gamma must exceed the 1e-4 floor")
    return float(np.log(np.expm1(gamma - GAMMA_FLOOR)))


def shear_raw_value(eta: float) -> float:
    """Inverse of constrain_shear (|eta| must be below 0.1)."""
    if abs(eta) >= ETA_SCALE:
        raise ValueError("|eta| must be below 0.1")
    return float(np.arctanh(eta / ETA_SCALE))


def default_frequencies(head_dim: int, order: int, theta: float) -> np.ndarray:
    """The rotary grid omega_k = theta^(-2k/d_h), one entry per 2m-wide block."""
    count = head_dim // (2 * order)
    k = np.arange(count, dtype=float)
    return theta ** (-2.0 * k / head_dim)


@dataclass(frozen=True)
class HeadLayout:
    """Per-head block structure: frequencies and per-frequency parameters.

    ``dampings`` and ``etas`` have one entry per frequency (tied parameters
    are simply equal entries).  ``gamma_raw`` / ``eta_raw`` optionally hold
    the unconstrained values a, b with gamma = softplus(a)+1e-4 and
    eta = 0.1 tanh(b); they are None when parameters were given directly.
    """

    head_dim: int
    order: int
    frequencies: np.ndarray
    dampings: np.ndarray
    etas: np.ndarray
    variant: str = RAW
    theta: float = 10000.0
    c: float = 1.0
    L: float = 1024.0
    gamma_raw: np.ndarray | None = field(default=None, repr=False)
    eta_raw: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.variant not in LAYOUT_VARIANTS:
            raise ValueError(f"unknown layout variant {self.variant!r}")
        if self.head_dim % (2 * self.order) != 0:
            raise ValueError("head_dim must be divisible by 2*order")
        n = self.head_dim // (2 * self.order)
        for name in ("frequencies", "dampings", "etas"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.shape != (n,):
                raise ValueError(f"{name} must have one entry per frequency ({n})")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if np.any(self.dampings < 0):
            raise ValueError("dampings must be nonnegative")
        if self.L <= 0:
            raise ValueError("L must be positive")

    @classmethod
    def create(cls, head_dim: int, order: int = 2, variant: str = RAW,
               theta: float = 10000.0, gamma: float = 0.01, eta: float = 0.0,
               c: float = 1.0, L: float = 1024.0,
               frequencies: np.ndarray | None = None) -> "HeadLayout":
        """Layout with the default frequency grid and tied gamma/eta."""
        if frequencies is None:
            frequencies = default_frequencies(head_dim, order, theta)
        n = len(frequencies)
        return cls(head_dim=head_dim, order=order,
                   frequencies=np.asarray(frequencies, dtype=float),
                   dampings=np.full(n, float(gamma)),
                   etas=np.full(n, float(eta)),
                   variant=variant, theta=theta, c=c, L=L)

    @classmethod
    def from_raw_params(cls, head_dim: int, order: int, a: np.ndarray,
                        b: np.ndarray, variant: str = RAW,
                        theta: float = 10000.0, c: float = 1.0,
                        L: float = 1024.0) -> "HeadLayout":
        """Layout from unconstrained parameters via the softplus/tanh maps."""
        frequencies = default_frequencies(head_dim, order, theta)
        a = np.broadcast_to(np.asarray(a, dtype=float), frequencies.shape).copy()
        b = np.broadcast_to(np.asarray(b, dtype=float), frequencies.shape).copy()
        return cls(head_dim=head_dim, order=order, frequencies=frequencies,
                   dampings=constrain_damping(a), etas=constrain_shear(b),
                   variant=variant, theta=theta, c=c, L=L,
                   gamma_raw=a, eta_raw=b)

    @property
    def n_frequencies(self) -> int:
        return self.head_dim // (2 * self.order)

    def generator(self, k: int) -> JordanGenerator:
        """JordanGenerator of frequency block k (stabilized maps to raw fields)."""
        variant = RAW if self.variant == STABILIZED else self.variant
        return JordanGenerator(gamma=float(self.dampings[k]),
                               omega=float(self.frequencies[k]),
                               eta=float(self.etas[k]), order=self.order,
                               variant=variant, c=self.c, L=self.L)


@dataclass(frozen=True)
class AttentionTensors:
    """Query/key arrays shaped batch x heads x time x head_dim plus positions."""

    q: np.ndarray
    k: np.ndarray
    positions: np.ndarray
    allow_unordered: bool = False

    def __post_init__(self):
        q, k = np.asarray(self.q, dtype=float), np.asarray(self.k, dtype=float)
        positions = np.asarray(self.positions)
        if q.ndim != 4 or k.ndim != 4:
            raise ValueError("q and k must be 4-dimensional (B, H, T, d_h)")
        if q.shape != k.shape:
            raise ValueError("q and k must have identical shapes")
        if positions.shape != (q.shape[2],):
            raise ValueError("positions must have one entry per time step")
        if not self.allow_unordered:
            if np.any(positions < 0) or np.any(np.diff(positions) <= 0):
                raise ValueError("positions must be nonnegative and strictly increasing")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "positions", positions)


@dataclass(frozen=True)
class PositionwiseTransform:
    """Per-position block factors A(t) and the query-side A(t)^{-T}.

    ``blocks`` and ``inverse_t_blocks`` are shaped (T, F, 2m, 2m); the
    transform is immutable and applying it is a pure map, so it can be
    shared across threads freely.
    """

    layout: HeadLayout
    positions: np.ndarray
    center: float
    blocks: np.ndarray
    inverse_t_blocks: np.ndarray
    overflow: bool = False

    def __post_init__(self):
        for name in ("positions", "blocks", "inverse_t_blocks"):
            np.asarray(getattr(self, name)).setflags(write=False)


def _position_factor(layout: HeadLayout, k: int, t: float,
                     inverse: bool = False) -> np.ndarray:
    """Realified A(t) block (or its inverse) for frequency k, in closed form.

    A(t) is the relative operator at coordinate -t; being a group element,
    its inverse is the same closed form with the exponent and nilpotent
    coordinate negated.  The stabilized mode keeps the exact rotary and
    damping factors but routes the nilpotent coordinate through the odd
    bounded map tau.
    """
    gen = layout.generator(k)
    sign = -1.0 if inverse else 1.0
    exponent = complex(gen.damping_rate * t * sign, -gen.omega * t * sign)
    if layout.variant == STABILIZED:
        coord = gen.eta * signed_bounded_coordinate(-t, layout.L) * sign
    else:
        coord = gen.shear_rate * (-t) * sign
    return realify(BlockMatrix(jordan_exponential(exponent, coord, gen.order))).entries


def build_transform(layout: HeadLayout, positions, center: float | None = None,
                    cap: float = OVERFLOW_CAP) -> PositionwiseTransform:
    """Assemble A(t - c0) and A(t - c0)^{-T} for every position and frequency.

    When ``center`` is None positions are used as-is; for exact variants
    any center leaves relative scores unchanged (A(i-c0)^{-1} A(j-c0) =
    G(i-j)) while shrinking the largest absolute rescaling, so centering
    near the window middle is the numerically gentle choice.
    """
    positions = np.asarray(positions, dtype=float)
    c0 = 0.0 if center is None else float(center)
    T, F, m = positions.size, layout.n_frequencies, layout.order
    blocks = np.empty((T, F, 2 * m, 2 * m))
    inv_t = np.empty_like(blocks)
    for i, t in enumerate(positions - c0):
        for k in range(F):
            blocks[i, k] = _position_factor(layout, k, t)
            inv_t[i, k] = _position_factor(layout, k, t, inverse=True).T
    overflow = bool(max(np.max(np.abs(blocks)), np.max(np.abs(inv_t))) > cap)
    return PositionwiseTransform(layout=layout, positions=positions, center=c0,
                                 blocks=blocks, inverse_t_blocks=inv_t,
                                 overflow=overflow)


def window_center(positions) -> float:
    """Default centering policy: the middle of the position window."""
    positions = np.asarray(positions, dtype=float)
    return float((positions.min() + positions.max()) / 2.0)


def apply(layout: HeadLayout, tensors: AttentionTensors,
          center: float | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Transform queries with A(t)^{-T} and keys with A(t), per block.

    Returns (q~, k~) with the input shapes.  The map is linear in q and k
    separately and independent across batch, head and position.
    """
    if tensors.q.shape[-1] != layout.head_dim:
        raise ValueError("tensor head dimension does not match layout")
    transform = build_transform(layout, tensors.positions, center=center)
    return apply_transform(transform, tensors.q, tensors.k)


def apply_transform(transform: PositionwiseTransform, q: np.ndarray,
                    k: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    layout = transform.layout
    B, H, T, D = q.shape
    width = 2 * layout.order
    qb = q.reshape(B, H, T, layout.n_frequencies, width)
    kb = k.reshape(B, H, T, layout.n_frequencies, width)
    q_out = np.einsum("tfij,bhtfj->bhtfi", transform.inverse_t_blocks, qb)
    k_out = np.einsum("tfij,bhtfj->bhtfi", transform.blocks, kb)
    return q_out.reshape(B, H, T, D), k_out.reshape(B, H, T, D)


def pairwise_kernel(layout: HeadLayout, lag: float) -> np.ndarray:
    """Explicit relative kernel blocks G(lag), shaped (F, 2m, 2m).

    For exact variants this equals the composed position-wise factors;
    for the stabilized family it is the pairwise bounded-tau kernel,
    which the position-wise factorization does not reproduce.
    """
    F, m = layout.n_frequencies, layout.order
    out = np.empty((F, 2 * m, 2 * m))
    for k in range(F):
        gen = layout.generator(k)
        if layout.variant == STABILIZED:
            out[k] = stabilized_operator(gen, lag, layout.L).entries
        else:
            out[k] = realify(relative_operator(gen, lag)).entries
    return out


def _blockwise_score(blocks_q: np.ndarray, kernel: np.ndarray,
                     blocks_k: np.ndarray | None, q: np.ndarray,
                     k: np.ndarray, width: int) -> float:
    qb = q.reshape(-1, width)
    kb = k.reshape(-1, width)
    total = 0.0
    for f in range(qb.shape[0]):
        left = blocks_q[f] @ qb[f] if blocks_q is not None else qb[f]
        right = kernel[f] @ kb[f] if kernel is not None else kb[f]
        if blocks_k is not None:
            right = blocks_k[f] @ right
        total += float(left @ right)
    return total


def relative_score_check(layout: HeadLayout, q: np.ndarray, k: np.ndarray,
                         i: float, j: float,
                         center: float | None = None) -> tuple[float, float, float]:
    """Position-wise score vs explicit relative kernel at lag i - j.

    lhs = <A(i)^{-T} q, A(j) k>, rhs = q^T G(i-j) k.  For raw and scaled
    variants the two agree to rounding; for the stabilized mode the gap
    is real and the returned relative error measures it.
    """
    width = 2 * layout.order
    transform = build_transform(layout, np.array([i, j], dtype=float), center=center)
    qt = np.einsum("fij,fj->fi", transform.inverse_t_blocks[0],
                   q.reshape(-1, width))
    kt = np.einsum("fij,fj->fi", transform.blocks[1], k.reshape(-1, width))
    lhs = float(np.sum(qt * kt))
    kernel = pairwise_kernel(layout, i - j)
    rhs = _blockwise_score(None, kernel, None, q, k, width)
    denom = max(abs(rhs), 1e-300)
    return lhs, rhs, abs(lhs - rhs) / denom


def sigma_obstruction(sigma, eta: float, i: float, j: float) -> float:
    """Nilpotent coefficient of B(-i)^{-1} B(-j) for B(t) = I + eta*sigma(t)*N.

    Equals eta * (sigma(-j) - sigma(-i)); for sigma(t) = t this is
    eta * (i - j), a pure lag function, while any nonlinear sigma makes it
    depend on the absolute pair.
    """
    return float(eta * (sigma(-j) - sigma(-i)))


def norm_profile(layout: HeadLayout, positions,
                 probe: np.ndarray | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Positioned query/key norm ratios along ``positions``.

    Uses a fixed probe vector e (uniform unit vector by default) and
    returns (|A(t)^{-T} e| ratios, |A(t) e| ratios), each normalized by
    its value at the first position.  For exact variants the two sides
    rescale in complementary directions, which is the expected signature
    of a non-orthogonal contragredient factorization.
    """
    positions = np.asarray(positions, dtype=float)
    if probe is None:
        probe = np.full(layout.head_dim, 1.0 / math.sqrt(layout.head_dim))
    transform = build_transform(layout, positions)
    width = 2 * layout.order
    pb = probe.reshape(layout.n_frequencies, width)
    q_norms = np.empty(positions.size)
    k_norms = np.empty(positions.size)
    for idx in range(positions.size):
        qv = np.einsum("fij,fj->fi", transform.inverse_t_blocks[idx], pb)
        kv = np.einsum("fij,fj->fi", transform.blocks[idx], pb)
        q_norms[idx] = np.linalg.norm(qv)
        k_norms[idx] = np.linalg.norm(kv)
    return q_norms / q_norms[0], k_norms / k_norms[0]


def scalar_factors(transform: PositionwiseTransform) -> tuple[np.ndarray, np.ndarray]:
    """Pre-cancellation scalar prefactor of each block, shaped (T, F).

    The top-left 2x2 of every factor is the scalar damping factor times a
    rotation, so the norm of its first column is exactly |e^{lambda t'}|.
    Returns (key-side factors from A, query-side factors from A^{-T}).
    """
    key = np.hypot(transform.blocks[..., 0, 0], transform.blocks[..., 1, 0])
    query = np.hypot(transform.inverse_t_blocks[..., 0, 0],
                     transform.inverse_t_blocks[..., 0, 1])
    return key, query


def max_scalar_factor(transform: PositionwiseTransform) -> float:
    """Largest pre-cancellation scalar factor over positions, blocks and sides."""
    key, query = scalar_factors(transform)
    return float(max(key.max(), query.max()))
