"""Standard qubit gate matrices, by name.

Two-qubit matrices order the basis |q_first q_second> with the first
listed qubit as the most significant bit, matching the register frame.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError

_INV_SQRT2 = 1.0 / math.sqrt(2.0)


def identity_gate() -> np.ndarray:
    return np.eye(2, dtype=complex)


def pauli_x() -> np.ndarray:
    return np.array([[0, 1], [1, 0]], dtype=complex)


def pauli_y() -> np.ndarray:
    return np.array([[0, -1j], [1j, 0]], dtype=complex)


def pauli_z() -> np.ndarray:
    return np.array([[1, 0], [0, -1]], dtype=complex)


def hadamard() -> np.ndarray:
    return _INV_SQRT2 * np.array([[1, 1], [1, -1]], dtype=complex)


def phase_s() -> np.ndarray:
    return np.diag([1.0 + 0j, 1j])


def phase_t() -> np.ndarray:
    return np.diag([1.0 + 0j, np.exp(0.25j * math.pi)])


def rx(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def ry(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rz(theta: float) -> np.ndarray:
    return np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])


def cnot() -> np.ndarray:
    return np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
    )


def cz() -> np.ndarray:
    return np.diag([1.0 + 0j, 1.0, 1.0, -1.0])


def swap() -> np.ndarray:
    return np.array(
        [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
    )


_FIXED = {
    "i": (identity_gate, 1),
    "x": (pauli_x, 1),
    "y": (pauli_y, 1),
    "z": (pauli_z, 1),
    "h": (hadamard, 1),
    "s": (phase_s, 1),
    "sdg": (lambda: phase_s().conj().T, 1),
    "t": (phase_t, 1),
    "tdg": (lambda: phase_t().conj().T, 1),
    "cx": (cnot, 2),
    "cz": (cz, 2),
    "swap": (swap, 2),
}

_PARAMETRIC = {
    "rx": (rx, 1),
    "ry": (ry, 1),
    "rz": (rz, 1),
}


def named_gate(name: str, params=()) -> tuple[np.ndarray, int]:
    """Resolve a gate name (plus rotation angle when needed) to its matrix.

    Returns (matrix, qubit count).
    """
    key = name.lower()
    params = tuple(float(p) for p in params)
    if key in _FIXED:
        if params:
            raise DomainError(f"gate {name!r} takes no parameters")
        builder, arity = _FIXED[key]
        return builder(), arity
    if key in _PARAMETRIC:
        builder, arity = _PARAMETRIC[key]
        if len(params) != 1:
            raise DomainError(f"gate {name!r} takes exactly one angle parameter")
        return builder(params[0]), arity
    raise DomainError(f"unknown gate {name!r}")
