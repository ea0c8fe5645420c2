"""Signed Pauli strings over a fixed qubit register."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_PHASES = (1, -1, 1j, -1j)

_SINGLE = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# letter products: (a, b) -> (phase, letter) with a*b = phase * letter
_MUL = {
    ("I", "I"): (1, "I"), ("I", "X"): (1, "X"), ("I", "Y"): (1, "Y"), ("I", "Z"): (1, "Z"),
    ("X", "I"): (1, "X"), ("Y", "I"): (1, "Y"), ("Z", "I"): (1, "Z"),
    ("X", "X"): (1, "I"), ("Y", "Y"): (1, "I"), ("Z", "Z"): (1, "I"),
    ("X", "Y"): (1j, "Z"), ("Y", "X"): (-1j, "Z"),
    ("Y", "Z"): (1j, "X"), ("Z", "Y"): (-1j, "X"),
    ("Z", "X"): (1j, "Y"), ("X", "Z"): (-1j, "Y"),
}


@dataclass(frozen=True)
class PauliString:
    """phase * tensor product of single-qubit Pauli letters."""

    letters: str
    phase: complex = 1

    def __post_init__(self):
        if self.phase not in _PHASES:
            raise ValueError(f"phase must be a fourth root of unity, got {self.phase}")
        if any(ch not in "IXYZ" for ch in self.letters):
            raise ValueError(f"invalid Pauli letters {self.letters!r}")

    @property
    def n_qubits(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "PauliString") -> "PauliString":
        if self.n_qubits != other.n_qubits:
            raise ValueError("qubit count mismatch")
        phase = self.phase * other.phase
        letters = []
        for a, b in zip(self.letters, other.letters):
            ph, c = _MUL[(a, b)]
            phase *= ph
            letters.append(c)
        return PauliString("".join(letters), _canonical_phase(phase))

    def __neg__(self) -> "PauliString":
        return PauliString(self.letters, _canonical_phase(-self.phase))

    def commutes_with(self, other: "PauliString") -> bool:
        anti = sum(1 for a, b in zip(self.letters, other.letters)
                   if a != "I" and b != "I" and a != b)
        return anti % 2 == 0

    def apply(self, state: np.ndarray) -> np.ndarray:
        """Apply to a dense state vector of matching qubit count."""
        n = self.n_qubits
        if state.size != 2 ** n:
            raise ValueError("state size does not match qubit count")
        psi = state.reshape([2] * n)
        for q, ch in enumerate(self.letters):
            if ch == "I":
                continue
            psi = np.moveaxis(psi, q, 0)
            psi = np.tensordot(_SINGLE[ch], psi, axes=(1, 0))
            psi = np.moveaxis(psi, 0, q)
        return self.phase * psi.reshape(-1)

    def __str__(self) -> str:
        sign = {1: "+", -1: "-", 1j: "+i", -1j: "-i"}[self.phase]
        return sign + self.letters


def _canonical_phase(value: complex) -> complex:
    for p in _PHASES:
        if value == p:
            return p
    raise ValueError(f"phase {value} is not a fourth root of unity")


def identity(n: int) -> PauliString:
    return PauliString("I" * n)


def single(n: int, qubit: int, letter: str, phase: complex = 1) -> PauliString:
    letters = ["I"] * n
    letters[qubit] = letter
    return PauliString("".join(letters), phase)


def from_factors(n: int, factors: dict[int, str], phase: complex = 1) -> PauliString:
    """Build a string from {qubit: letter}; repeated qubits are invalid."""
    letters = ["I"] * n
    for q, ch in factors.items():
        if letters[q] != "I":
            raise ValueError(f"qubit {q} assigned twice")
        letters[q] = ch
    return PauliString("".join(letters), phase)
