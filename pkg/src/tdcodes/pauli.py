"""Signed Hermitian Pauli products in binary symplectic form."""

from __future__ import annotations

from typing import Iterable

import numpy as np

from .errors import DimensionMismatch


def phase_exponent(x1: np.ndarray, z1: np.ndarray, x2: np.ndarray, z2: np.ndarray) -> np.ndarray:
    """Power of ``i`` picked up qubit-wise when multiplying letters (x1,z1)(x2,z2).

    Letters are the Hermitian Paulis: (1,0)=X, (1,1)=Y, (0,1)=Z.  Works on any
    broadcastable integer arrays and returns values in {-1, 0, 1}.
    """
    x1 = x1.astype(np.int8)
    z1 = z1.astype(np.int8)
    x2 = x2.astype(np.int8)
    z2 = z2.astype(np.int8)
    y = z2 - x2
    xo = z2 * (2 * x2 - 1)
    zo = x2 * (1 - 2 * z2)
    return np.where(x1 & z1, y, np.where(x1 & (1 - z1), xo, np.where((1 - x1) & z1, zo, 0)))


class PauliOp:
    """``sign * prod_j sigma_j`` with ``sigma_j`` encoded by the bits (x_j, z_j)."""

    __slots__ = ("x", "z", "sign")

    def __init__(self, x: Iterable[int], z: Iterable[int], sign: int = 1):
        self.x = np.asarray(x, dtype=np.uint8).reshape(-1) & 1
        self.z = np.asarray(z, dtype=np.uint8).reshape(-1) & 1
        if self.x.shape != self.z.shape:
            raise DimensionMismatch("x and z parts differ in length")
        if sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {sign}")
        self.sign = int(sign)

    @classmethod
    def identity(cls, n: int) -> "PauliOp":
        return cls(np.zeros(n, np.uint8), np.zeros(n, np.uint8))

    @classmethod
    def from_supports(cls, n: int, x_support: Iterable[int] = (), z_support: Iterable[int] = (), sign: int = 1):
        x = np.zeros(n, dtype=np.uint8)
        z = np.zeros(n, dtype=np.uint8)
        for q in x_support:
            x[q] ^= 1
        for q in z_support:
            z[q] ^= 1
        return cls(x, z, sign)

    @classmethod
    def from_label(cls, label: str) -> "PauliOp":
        """Parse strings such as ``"+XIZ"`` or ``"-YY"`` (qubit 0 first)."""
        sign = 1
        if label and label[0] in "+-":
            sign = -1 if label[0] == "-" else 1
            label = label[1:]
        x = [1 if ch in "XY" else 0 for ch in label]
        z = [1 if ch in "ZY" else 0 for ch in label]
        if set(label) - set("IXYZ"):
            raise ValueError(f"bad Pauli label {label!r}")
        return cls(x, z, sign)

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @property
    def x_support(self) -> list[int]:
        return np.flatnonzero(self.x).tolist()

    @property
    def z_support(self) -> list[int]:
        return np.flatnonzero(self.z).tolist()

    @property
    def weight(self) -> int:
        return int(np.count_nonzero(self.x | self.z))

    def is_pure_x(self) -> bool:
        return not self.z.any()

    def is_pure_z(self) -> bool:
        return not self.x.any()

    def commutes_with(self, other: "PauliOp") -> bool:
        self._check(other)
        overlap = np.count_nonzero(self.x & other.z) + np.count_nonzero(self.z & other.x)
        return overlap % 2 == 0

    def __mul__(self, other: "PauliOp") -> "PauliOp":
        self._check(other)
        power = int(phase_exponent(self.x, self.z, other.x, other.z).sum()) % 4
        if power % 2:
            raise ValueError("product of anticommuting Paulis is not Hermitian")
        sign = self.sign * other.sign * (-1 if power == 2 else 1)
        return PauliOp(self.x ^ other.x, self.z ^ other.z, sign)

    def __neg__(self) -> "PauliOp":
        return PauliOp(self.x, self.z, -self.sign)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PauliOp):
            return NotImplemented
        return (
            self.sign == other.sign
            and np.array_equal(self.x, other.x)
            and np.array_equal(self.z, other.z)
        )

    def __hash__(self) -> int:
        return hash((self.sign, self.x.tobytes(), self.z.tobytes()))

    def label(self) -> str:
        letters = np.array(["I", "X", "Z", "Y"])[self.x + 2 * self.z]
        return ("+" if self.sign > 0 else "-") + "".join(letters)

    def __repr__(self) -> str:
        if self.n <= 24:
            return f"PauliOp({self.label()})"
        return f"PauliOp(n={self.n}, sign={self.sign:+d}, x={self.x_support}, z={self.z_support})"

    def _check(self, other: "PauliOp") -> None:
        if other.n != self.n:
            raise DimensionMismatch(f"Pauli lengths {self.n} and {other.n} differ")
