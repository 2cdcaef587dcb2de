"""Affine maps W·x + b between rational coordinate spaces."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .linalg import ONE, ZERO, Mat, Vec, dot, mat, mat_mul, mat_vec, vec


@dataclass(frozen=True)
class AffineMap:
    """x ↦ weights·x + bias, one weight row and one bias entry per output."""

    weights: Mat
    bias: Vec

    def __post_init__(self):
        if len(self.weights) != len(self.bias):
            raise ValueError("bias length must equal the number of weight rows")
        if self.weights and any(len(r) != len(self.weights[0]) for r in self.weights):
            raise ValueError("ragged weight matrix")

    @property
    def out_dim(self) -> int:
        return len(self.weights)

    @property
    def in_dim(self) -> int:
        return len(self.weights[0]) if self.weights else 0

    @staticmethod
    def of(weights, bias) -> "AffineMap":
        return AffineMap(mat(weights), vec(bias))

    @staticmethod
    def identity(n: int) -> "AffineMap":
        w = tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))
        return AffineMap(w, (ZERO,) * n)

    def apply(self, x: Sequence[Fraction]) -> Vec:
        if len(x) != self.in_dim:
            raise ValueError(f"dimension mismatch: point in R^{len(x)}, map on R^{self.in_dim}")
        return tuple(dot(row, x) + b for row, b in zip(self.weights, self.bias))

    def row(self, j: int) -> tuple[Vec, Fraction]:
        """The affine form of output coordinate j, as (weight row, bias)."""
        return self.weights[j], self.bias[j]

    def compose(self, inner: "AffineMap") -> "AffineMap":
        """self ∘ inner."""
        if inner.out_dim != self.in_dim:
            raise ValueError("dimension mismatch in composition")
        w = mat_mul(self.weights, inner.weights)
        b = tuple(v + c for v, c in zip(mat_vec(self.weights, inner.bias), self.bias))
        return AffineMap(w, b)

    def masked(self, bits: Sequence[int]) -> "AffineMap":
        """Zero out the output rows (weights and bias) whose bit is 0."""
        if len(bits) != self.out_dim:
            raise ValueError("mask length must equal the output dimension")
        n = self.in_dim
        w = tuple(
            row if bit else (ZERO,) * n for row, bit in zip(self.weights, bits)
        )
        b = tuple(v if bit else ZERO for v, bit in zip(self.bias, bits))
        return AffineMap(w, b)
