"""
Teacher-kernel labeled bit sequences
====================================

Each sequence is T tokens long: T-1 random bits in {-1, +1} followed by a
query token at index T-1.  The label is the sign of the kernel-weighted
sum of the bits over their causal lags from the query,

    label = sign( sum_{j < T-1} K(T-1-j) * bits[j] ),

so the bit at index j contributes with lag d = T-1-j in 1..T-1.  The
teacher kernels are the first, second and third scaled jet functions
shared with the feature-bank targets (single source of truth for the
formulas):

    first_jet   K(d) = (d/L) cos(omega d)
    second_jet  K(d) = x^2 e^{-0.1 x} cos(omega d),  x = d/L
    third_jet   K(d) = x^3 e^{-0.1 x} cos(omega d)

Bits are drawn from numpy's PCG64 generator seeded per sequence, so
(kernel, T, seed) fully determines a sequence and its label.  Sums with
|sum| < 1e-12 are labeled +1 and counted as ties (they have probability
zero under random bits; the rule only pins the edge case down).

``oracle_label`` recomputes the label in a deliberately plain scalar
loop, independent of the vectorized path used by ``generate``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .features import DEFAULT_L, DEFAULT_OMEGA, JET_DAMPING, mixed_value, scaled_jet_value

FIRST_JET = "first_jet"
SECOND_JET = "second_jet"
THIRD_JET = "third_jet"
KERNEL_KINDS = (FIRST_JET, SECOND_JET, THIRD_JET)

TIE_EPS = 1e-12


@dataclass(frozen=True)
class TeacherKernel:
    """A labeling kernel: which jet, the training length, the frequency."""

    kind: str = FIRST_JET
    L: float = DEFAULT_L
    omega: float = DEFAULT_OMEGA

    def __post_init__(self):
        if self.kind not in KERNEL_KINDS:
            raise ValueError(f"unknown kernel kind {self.kind!r}")
        if self.L <= 0:
            raise ValueError("L must be positive")

    def values(self, lags) -> np.ndarray:
        """Kernel weights K(d), delegated to the shared target formulas."""
        if self.kind == FIRST_JET:
            return mixed_value(lags, self.omega, self.L)
        order = 2 if self.kind == SECOND_JET else 3
        return scaled_jet_value(lags, order, self.omega, self.L)


@dataclass(frozen=True)
class QuerySequence:
    """One labeled sequence: T-1 bits, query token at index T-1."""

    bits: np.ndarray
    label: int
    seed: int
    tie: bool = False

    def __post_init__(self):
        self.bits.setflags(write=False)

    @property
    def length(self) -> int:
        """Total sequence length T, counting the query token."""
        return self.bits.size + 1

    @property
    def query_position(self) -> int:
        return self.bits.size


def sign_with_tie(value: float) -> tuple[int, bool]:
    """Sign of the weighted sum; near-zero sums resolve to +1 and flag a tie."""
    if abs(value) < TIE_EPS:
        return 1, True
    return (1, False) if value > 0 else (-1, False)


def generate(kernel: TeacherKernel, T: int, seed: int) -> QuerySequence:
    """Sample T-1 uniform bits (PCG64, per-sequence seed) and label them."""
    if T < 2:
        raise ValueError("sequence length T must be at least 2")
    rng = np.random.Generator(np.random.PCG64(seed))
    bits = rng.integers(0, 2, size=T - 1) * 2 - 1
    lags = np.arange(T - 1, 0, -1, dtype=float)  # bit j sits at lag T-1-j
    weighted = float(np.dot(kernel.values(lags), bits))
    label, tie = sign_with_tie(weighted)
    return QuerySequence(bits=bits, label=label, seed=seed, tie=tie)


def oracle_label(bits, kernel: TeacherKernel) -> int:
    """Independent plain-loop recomputation of the label.

    Kernel values are recomputed inline with scalar math, one bit at a
    time; only the tie rule is shared with the generator.
    """
    bits = np.asarray(bits)
    T = bits.size + 1
    total = 0.0
    for j in range(bits.size):
        d = float(T - 1 - j)
        x = d / kernel.L
        if kernel.kind == FIRST_JET:
            k = x * math.cos(kernel.omega * d)
        elif kernel.kind == SECOND_JET:
            k = x * x * math.exp(-JET_DAMPING * x) * math.cos(kernel.omega * d)
        else:
            k = x * x * x * math.exp(-JET_DAMPING * x) * math.cos(kernel.omega * d)
        total += k * float(bits[j])
    label, _ = sign_with_tie(total)
    return label


def format_line(seq: QuerySequence) -> str:
    """`seed,T,label,bitstring` with bits rendered as '+'/'-'."""
    bitstring = "".join("+" if b > 0 else "-" for b in seq.bits)
    label = "+1" if seq.label > 0 else "-1"
    return f"{seq.seed},{seq.length},{label},{bitstring}"


def parse_line(line: str) -> QuerySequence:
    seed_s, T_s, label_s, bitstring = line.strip().split(",")
    bits = np.array([1 if ch == "+" else -1 for ch in bitstring])
    if bits.size + 1 != int(T_s):
        raise ValueError("bitstring length does not match the declared T")
    return QuerySequence(bits=bits, label=int(label_s), seed=int(seed_s))


def write_dataset(path: Path, sequences) -> None:
    """Line-oriented export, one sequence per line, newline-terminated."""
    text = "".join(format_line(seq) + "\n" for seq in sequences)
    Path(path).write_text(text, encoding="ascii")


def read_dataset(path: Path) -> list[QuerySequence]:
    lines = Path(path).read_text(encoding="ascii").splitlines()
    return [parse_line(line) for line in lines if line]
