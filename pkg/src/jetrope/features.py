"""
Fixed relative-position feature banks and ridge readouts
========================================================

Each compared method is frozen into a deterministic matrix of
relative-position features over a lag grid; a linear readout is then fit
on training lags (d < L) by ridge least squares and scored on the full
evaluation grid.  This isolates what the primitive bilinear basis of a
positional mechanism can represent, independent of any trained network.

Method identifiers (comma-free so they embed safely in CSV):

    rope                    cos/sin phase pairs per frequency
    alibi                   {1, d} (a linear bias after a constant lift)
    rope_alibi              rope columns plus {1, d}
    direct_sum              rope columns plus {1, d} (separate subspaces)
    damped_rope             e^{-d/L} phase pairs
    raw_jordan              order-2 jets d^r e^{-d/L} {cos, sin} plus the
                            undamped growth channels d {cos, sin}
    jordan_gamma0           order-2 jets with damping disabled
    stabilized_jordan       order-2 with tau(d) in nilpotent columns
    jordan_m3               order-3 bounded-tau variant
    scaled_exact_m{M}_c{C}  x^r e^{-c x} {cos, sin}, x = d/L
    norm_jet_m{M}_c{C}_a{a0-a1-...}  scaled jets with a jet-order
                            spectrum (nonnegative, summing to one) that
                            rescales each order's column group

Frequency grids follow the rotary rule omega_k = theta^(-2k/d_h) with
the effective head width set by the method's channel budget (an order-m
block spends 2m coordinates per frequency), so every method carries the
same number of frequencies over a budget-matched grid.  The probe
frequency is appended to the grid by default so that span claims are not
confounded by frequency mismatch (set ``include_target_omega=False`` to
study the mismatched regime).

Note on the jet spectrum: the readout standardizes columns to unit RMS
over the training lags before solving, which absorbs any column-group
rescaling at small ridge strengths.  Fit a norm_jet bank with
standardize=False to see the spectrum act.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .operators import LagGrid, bounded_coordinate
from .transforms import default_frequencies

DEFAULT_OMEGA = 0.05
DEFAULT_L = 1024.0
DEFAULT_THETA = 10000.0
DEFAULT_N_FREQUENCIES = 8
# Damping rates. Each bank family carries a single damping chain: a grid
# of near-duplicate envelopes makes the columns nearly collinear, and
# ridge readouts then spread weight across train-indistinguishable
# columns whose extrapolations differ wildly.  The damped/raw chains use
# the training-length rate 1/L; the bounded-tau chains use the softplus
# parameterization floor 1e-4 (tau itself does the long-lag bounding).
GAMMA_FLOOR_RATE = 1e-4


def family_dampings(L: float = DEFAULT_L) -> tuple[float, ...]:
    return (1.0 / L,)
JET_DAMPING = 0.1

BASE_METHODS = ("rope", "alibi", "rope_alibi", "direct_sum", "damped_rope",
                "raw_jordan", "jordan_gamma0", "stabilized_jordan", "jordan_m3")


@dataclass(frozen=True)
class MethodSpec:
    """Parsed method identifier."""

    kind: str
    order: int = 2
    c: float = 0.1
    alpha: tuple[float, ...] | None = None

    @property
    def block_order(self) -> int:
        """Channel-budget order: how many 2-wide coordinate pairs per frequency."""
        if self.kind in ("rope", "alibi", "rope_alibi", "direct_sum"):
            return 1
        return self.order


_SCALED_RE = re.compile(r"^scaled_exact_m(\d+)_c([0-9.]+)$")
_NORMJET_RE = re.compile(r"^norm_jet_m(\d+)(?:_c([0-9.]+))?(?:_a([0-9.]+(?:-[0-9.]+)*))?$")


def parse_method(method: str) -> MethodSpec:
    """Parse a method identifier into its family and parameters."""
    if method in ("rope", "alibi", "rope_alibi", "direct_sum", "damped_rope"):
        return MethodSpec(kind=method, order=1 if method != "damped_rope" else 2)
    if method in ("raw_jordan", "jordan_gamma0", "stabilized_jordan"):
        return MethodSpec(kind=method, order=2)
    if method == "jordan_m3":
        return MethodSpec(kind="jordan_m3", order=3)
    m = _SCALED_RE.match(method)
    if m:
        return MethodSpec(kind="scaled_exact", order=int(m.group(1)),
                          c=float(m.group(2)))
    m = _NORMJET_RE.match(method)
    if m:
        order = int(m.group(1))
        c = float(m.group(2)) if m.group(2) else 0.1
        if m.group(3):
            alpha = tuple(float(x) for x in m.group(3).split("-"))
        else:
            weights = [2.0 ** -r for r in range(order)]
            alpha = tuple(w / sum(weights) for w in weights)
        if len(alpha) != order:
            raise ValueError(f"{method}: spectrum must have {order} entries")
        if any(a < 0 for a in alpha) or abs(sum(alpha) - 1.0) > 1e-9:
            raise ValueError(f"{method}: spectrum must be nonnegative and sum to one")
        return MethodSpec(kind="norm_jet", order=order, c=c, alpha=alpha)
    raise ValueError(f"unknown method {method!r}")


@dataclass(frozen=True)
class BankConfig:
    """Shared knobs for bank construction."""

    L: float = DEFAULT_L
    theta: float = DEFAULT_THETA
    target_omega: float = DEFAULT_OMEGA
    n_frequencies: int = DEFAULT_N_FREQUENCIES
    dampings: tuple[float, ...] | None = None  # None -> family_dampings(L)
    include_target_omega: bool = True
    frequencies: tuple[float, ...] | None = None  # explicit override

    @property
    def damping_grid(self) -> tuple[float, ...]:
        return self.dampings if self.dampings is not None else family_dampings(self.L)


@dataclass(frozen=True)
class FeatureBank:
    """lags x features matrix for one method, with documented column order."""

    method: str
    config: BankConfig
    grid: LagGrid
    matrix: np.ndarray
    column_names: tuple[str, ...]

    def __post_init__(self):
        self.matrix.setflags(write=False)

    @property
    def n_features(self) -> int:
        return self.matrix.shape[1]


@dataclass(frozen=True)
class ProbeTarget:
    """A named scalar function of lag with its parameters."""

    name: str
    fn: Callable[[np.ndarray], np.ndarray]
    params: dict = field(default_factory=dict)

    def __call__(self, lags: np.ndarray) -> np.ndarray:
        return self.fn(np.asarray(lags, dtype=float))


@dataclass(frozen=True)
class FitResult:
    """Ridge readout weights plus train/eval metrics."""

    weights: np.ndarray
    ridge_lambda: float
    train_mse: float
    eval_mse: float
    r_squared: float
    condition_number: float


# ---------------------------------------------------------------------------
# target functions (shared with the synthetic task generator)
# ---------------------------------------------------------------------------

def mixed_value(lags, omega: float = DEFAULT_OMEGA, L: float = DEFAULT_L):
    """(d/L) cos(omega d), the first-jet teacher kernel."""
    lags = np.asarray(lags, dtype=float)
    return (lags / L) * np.cos(omega * lags)


def scaled_jet_value(lags, r: int, omega: float = DEFAULT_OMEGA,
                     L: float = DEFAULT_L, damping: float = JET_DAMPING):
    """x^r e^{-damping x} cos(omega d) with x = d/L."""
    lags = np.asarray(lags, dtype=float)
    x = lags / L
    return x ** r * np.exp(-damping * x) * np.cos(omega * lags)


def _motif_spacing(lags, period: float, width: float, limit: float):
    out = np.zeros_like(lags)
    p = 1
    while p * period <= limit + width:
        out += np.maximum(0.0, 1.0 - np.abs(lags - p * period) / width)
        p += 1
    return out


def evaluate_targets(omega: float = DEFAULT_OMEGA, L: float = DEFAULT_L,
                     max_lag: float = 8191.0) -> dict[str, ProbeTarget]:
    """The full probe-target catalogue, keyed by name.

    Core targets: phase cos(wd), linear d/L, mixed (d/L)cos(wd), and the
    scaled jets y_r = x^r e^{-0.1x} cos(wd) for r = 1, 2, 3 (the undamped
    first jet x cos(wd) and its damping-matched twin are both present).
    The five structured targets realize drifting phase, trend plus slow
    season, a decaying wave packet, a rhythmically modulated swell-and-
    decay carrier, and evenly spaced motif bumps, each with minimal
    parameters.  The wave-packet and rhythm envelopes are products of
    training-length decay with at most linear lag growth, the regime the
    nilpotent channels exist for.
    """
    drift = 0.01 * omega
    seasonal_omega = 0.01
    targets = {
        "phase": ProbeTarget("phase", lambda d: np.cos(omega * d),
                             {"omega": omega}),
        "linear": ProbeTarget("linear", lambda d: d / L, {"L": L}),
        "mixed": ProbeTarget("mixed", lambda d: mixed_value(d, omega, L),
                             {"omega": omega, "L": L}),
        "jet1_undamped": ProbeTarget(
            "jet1_undamped", lambda d: (d / L) * np.cos(omega * d),
            {"omega": omega, "L": L, "r": 1}),
        "jet1_matched": ProbeTarget(
            "jet1_matched", lambda d: scaled_jet_value(d, 1, omega, L),
            {"omega": omega, "L": L, "r": 1, "damping": JET_DAMPING}),
        "jet2": ProbeTarget(
            "jet2", lambda d: scaled_jet_value(d, 2, omega, L),
            {"omega": omega, "L": L, "r": 2, "damping": JET_DAMPING}),
        "jet3": ProbeTarget(
            "jet3", lambda d: scaled_jet_value(d, 3, omega, L),
            {"omega": omega, "L": L, "r": 3, "damping": JET_DAMPING}),
        "phase_drift": ProbeTarget(
            "phase_drift", lambda d: np.cos((omega + drift * d / L) * d),
            {"omega": omega, "delta": drift, "L": L}),
        "seasonal_trend": ProbeTarget(
            "seasonal_trend",
            lambda d: d / L + 0.5 * np.cos(seasonal_omega * d),
            {"L": L, "seasonal_omega": seasonal_omega}),
        "damped_wave": ProbeTarget(
            "damped_wave",
            lambda d: (1.0 + d / L) * np.exp(-d / L) * np.cos(omega * d),
            {"omega": omega, "L": L}),
        "rhythm_envelope": ProbeTarget(
            "rhythm_envelope",
            lambda d: (d / L) * np.exp(-d / L)
                      * (np.cos(omega * d) + 0.5 * np.cos(2.0 * omega * d)),
            {"omega": omega, "overtone": 2.0 * omega, "L": L}),
        "motif_spacing": ProbeTarget(
            "motif_spacing",
            lambda d: _motif_spacing(d, 200.0, 20.0, max_lag),
            {"period": 200.0, "width": 20.0}),
    }
    return targets

# Minimal chain order needed to represent each jet target exactly.
MINIMAL_ORDER = {"jet1_undamped": 2, "jet1_matched": 2, "jet2": 3, "jet3": 4}


# ---------------------------------------------------------------------------
# bank construction
# ---------------------------------------------------------------------------

def _bank_frequencies(spec: MethodSpec, config: BankConfig) -> np.ndarray:
    if config.frequencies is not None:
        freqs = np.asarray(config.frequencies, dtype=float)
    else:
        head_dim = 2 * spec.block_order * config.n_frequencies
        freqs = default_frequencies(head_dim, spec.block_order, config.theta)
    if config.include_target_omega and not np.any(
            np.isclose(freqs, config.target_omega, rtol=0, atol=0)):
        freqs = np.append(freqs, config.target_omega)
    return freqs


def _phase_pair(columns, names, lags, omega, envelope, tag):
    columns.append(envelope * np.cos(omega * lags))
    names.append(f"cos[{tag}]")
    columns.append(envelope * np.sin(omega * lags))
    names.append(f"sin[{tag}]")


def build_bank(method: str, config: BankConfig, grid: LagGrid) -> FeatureBank:
    """Deterministic feature matrix for one method over a lag grid.

    Column order: frequencies in grid order (appended probe frequency
    last), then the damping grid, then jet order r = 0..m-1, with the
    cosine column immediately before its sine partner.  Bias columns
    {1, d} come after all phase columns.
    """
    spec = parse_method(method)
    lags = grid.values
    columns: list[np.ndarray] = []
    names: list[str] = []

    def bias_columns():
        columns.append(np.ones_like(lags))
        names.append("const")
        columns.append(lags.copy())
        names.append("lag")

    if spec.kind == "alibi":
        bias_columns()
    else:
        freqs = _bank_frequencies(spec, config)
        if spec.kind in ("rope", "rope_alibi", "direct_sum"):
            ones = np.ones_like(lags)
            for w in freqs:
                _phase_pair(columns, names, lags, w, ones, f"w={w:.8g}")
            if spec.kind in ("rope_alibi", "direct_sum"):
                bias_columns()
        elif spec.kind == "damped_rope":
            for w in freqs:
                for g in config.damping_grid:
                    env = np.exp(-g * lags)
                    _phase_pair(columns, names, lags, w, env,
                                f"w={w:.8g},g={g:.8g}")
        elif spec.kind == "jordan_gamma0":
            for w in freqs:
                for r in range(spec.order):
                    _phase_pair(columns, names, lags, w, lags ** r,
                                f"w={w:.8g},g=0,r={r}")
        elif spec.kind == "raw_jordan":
            # Damped chain plus the undamped nilpotent channels; the
            # undamped rotary (r = 0) channel is omitted because the
            # damped chain already carries it over the training range.
            for w in freqs:
                for g in config.damping_grid:
                    env = np.exp(-g * lags)
                    for r in range(spec.order):
                        _phase_pair(columns, names, lags, w, lags ** r * env,
                                    f"w={w:.8g},g={g:.8g},r={r}")
                for r in range(1, spec.order):
                    _phase_pair(columns, names, lags, w, lags ** r,
                                f"w={w:.8g},g=0,r={r}")
        elif spec.kind in ("stabilized_jordan", "jordan_m3"):
            tau = bounded_coordinate(lags, config.L)
            env = np.exp(-GAMMA_FLOOR_RATE * lags)
            for w in freqs:
                for r in range(spec.order):
                    _phase_pair(columns, names, lags, w, tau ** r * env,
                                f"w={w:.8g},g={GAMMA_FLOOR_RATE:.8g},r={r},tau")
        elif spec.kind in ("scaled_exact", "norm_jet"):
            x = lags / config.L
            env = np.exp(-spec.c * x)
            for w in freqs:
                for r in range(spec.order):
                    weight = spec.alpha[r] if spec.alpha is not None else 1.0
                    _phase_pair(columns, names, lags, w, weight * x ** r * env,
                                f"w={w:.8g},c={spec.c:.8g},r={r}")
        else:  # pragma: no cover - parse_method exhausts the kinds
            raise ValueError(f"unhandled method kind {spec.kind!r}")

    matrix = np.column_stack(columns)
    return FeatureBank(method=method, config=config, grid=grid,
                       matrix=matrix, column_names=tuple(names))


# ---------------------------------------------------------------------------
# ridge readout
# ---------------------------------------------------------------------------

def fit_readout(bank: FeatureBank, target: ProbeTarget, ridge_lambda: float,
                train_mask: np.ndarray | None = None,
                standardize: bool = True) -> FitResult:
    """Ridge least squares on training lags, scored on the full grid.

    Solves argmin |Phi w - y|^2 + lambda |w|^2 through the orthogonal
    (SVD) decomposition of the augmented system [Phi; sqrt(lambda) I]; at
    lambda = 0 the same decomposition yields the minimum-norm solution of
    a rank-deficient system.  Columns are standardized to unit RMS over
    the training lags before solving (weights are mapped back), and the
    condition number of the standardized training matrix is reported.
    """
    if ridge_lambda < 0:
        raise ValueError("ridge_lambda must be nonnegative")
    lags = bank.grid.values
    y = target(lags)
    if train_mask is None:
        train_mask = bank.grid.train_mask
    phi_train = bank.matrix[train_mask]
    y_train = y[train_mask]

    if standardize:
        scale = np.sqrt(np.mean(phi_train ** 2, axis=0))
        scale[scale == 0.0] = 1.0
    else:
        scale = np.ones(bank.matrix.shape[1])
    phi_s = phi_train / scale

    condition = float(np.linalg.cond(phi_s))
    if ridge_lambda > 0:
        n = phi_s.shape[1]
        A = np.vstack([phi_s, math.sqrt(ridge_lambda) * np.eye(n)])
        b = np.concatenate([y_train, np.zeros(n)])
    else:
        A, b = phi_s, y_train
    w_s, *_ = np.linalg.lstsq(A, b, rcond=None)
    weights = w_s / scale

    pred = bank.matrix @ weights
    train_mse = float(np.mean((pred[train_mask] - y_train) ** 2))
    eval_mse = float(np.mean((pred - y) ** 2))
    ss_res = float(np.sum((pred - y) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    if ss_tot > 0:
        r_squared = 1.0 - ss_res / ss_tot
    else:
        r_squared = 1.0 if ss_res == 0 else -math.inf
    return FitResult(weights=weights, ridge_lambda=float(ridge_lambda),
                     train_mse=train_mse, eval_mse=eval_mse,
                     r_squared=r_squared, condition_number=condition)
