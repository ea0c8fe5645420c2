"""Dense state vectors and the site-local operators of the construction.

Every spin-3/2 site is three virtual qubits.  The symmetric projector
keeps the four-dimensional spin-3/2 subspace spanned by
|000>, |W>, |Wbar>, |111>; the three measurement elements F_a are
sqrt(2/3) times rank-two projectors onto the S_a = +-3/2 pair in axis
a's product basis.  Qubit order in a state is site-major, slot-minor
(site s owns qubits 3s, 3s+1, 3s+2), with any terminating qubits
appended after all site qubits.
"""

from __future__ import annotations

import numpy as np

from .pauli import PauliString

AXES = "xyz"

_KET0 = np.array([1, 0], dtype=complex)
_KET1 = np.array([0, 1], dtype=complex)

# +-3/2 single-qubit eigenvectors per axis
_AXIS_PAIR = {
    "z": (_KET0, _KET1),
    "x": ((_KET0 + _KET1) / np.sqrt(2), (_KET0 - _KET1) / np.sqrt(2)),
    "y": ((_KET0 + 1j * _KET1) / np.sqrt(2), (_KET0 - 1j * _KET1) / np.sqrt(2)),
}

SINGLET = np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2)


def _kron(*vs: np.ndarray) -> np.ndarray:
    out = vs[0]
    for v in vs[1:]:
        out = np.kron(out, v)
    return out


def axis_triple(axis: str, sign: int) -> np.ndarray:
    """|aaa> (sign=+1) or |a-bar a-bar a-bar> (sign=-1) on three qubits."""
    up, down = _AXIS_PAIR[axis]
    v = up if sign > 0 else down
    return _kron(v, v, v)


def w_state() -> np.ndarray:
    return (_kron(_KET0, _KET0, _KET1) + _kron(_KET0, _KET1, _KET0)
            + _kron(_KET1, _KET0, _KET0)) / np.sqrt(3)


def w_bar_state() -> np.ndarray:
    return (_kron(_KET1, _KET1, _KET0) + _kron(_KET1, _KET0, _KET1)
            + _kron(_KET0, _KET1, _KET1)) / np.sqrt(3)


def symmetric_projector() -> np.ndarray:
    """Rank-4 projector onto the spin-3/2 subspace of three qubits."""
    vs = [axis_triple("z", +1), w_state(), w_bar_state(), axis_triple("z", -1)]
    out = np.zeros((8, 8), dtype=complex)
    for v in vs:
        out += np.outer(v, v.conj())
    return out


def povm_element(axis: str) -> np.ndarray:
    """F_a = sqrt(2/3) (|aaa><aaa| + |abar...><abar...|), an 8x8 operator."""
    if axis not in AXES:
        raise ValueError(f"axis must be one of {AXES!r}")
    up = axis_triple(axis, +1)
    down = axis_triple(axis, -1)
    return np.sqrt(2.0 / 3.0) * (np.outer(up, up.conj()) + np.outer(down, down.conj()))


def povm_gram(axis: str) -> np.ndarray:
    f = povm_element(axis)
    return f.conj().T @ f


def traced_gram(axis: str, n_keep: int) -> np.ndarray:
    """F_a^dag F_a partially traced down to the first n_keep slots.

    Equals the Gram operator seen by the bonded slots of a site whose
    remaining slots are terminated by singlet halves (those halves
    reduce to maximally mixed states).  Values: (2/3) times the rank-two
    projector onto span{|a..a>, |abar..abar>} for n_keep in {1, 2, 3},
    which degenerates to (2/3) I at n_keep = 1, and the scalar 4/3 at
    n_keep = 0.
    """
    if n_keep == 3:
        return povm_gram(axis)
    if n_keep == 0:
        return np.array([[4.0 / 3.0]], dtype=complex)
    up, down = _AXIS_PAIR[axis]
    u = _kron(*([up] * n_keep))
    d = _kron(*([down] * n_keep))
    return (2.0 / 3.0) * (np.outer(u, u.conj()) + np.outer(d, d.conj()))


def apply_local(state: np.ndarray, op: np.ndarray, qubits: tuple[int, ...],
                n_qubits: int) -> np.ndarray:
    """Apply a 2^k x 2^k operator to the given qubits of a dense state."""
    k = len(qubits)
    if op.shape != (2 ** k, 2 ** k):
        raise ValueError("operator shape does not match qubit count")
    psi = state.reshape([2] * n_qubits)
    psi = np.moveaxis(psi, qubits, range(k))
    shape = psi.shape
    psi = op @ psi.reshape(2 ** k, -1)
    psi = np.moveaxis(psi.reshape(shape), range(k), qubits)
    return np.ascontiguousarray(psi).reshape(-1)


def product_of_singlets(pairs: list[tuple[int, int]], n_qubits: int) -> np.ndarray:
    """Tensor product of singlets on the given qubit pairs.

    The pairs must cover every qubit exactly once.  Pair order (i, j)
    matters for the singlet sign convention: the state is
    (|0_i 1_j> - |1_i 0_j>)/sqrt(2).
    """
    seen = [False] * n_qubits
    for i, j in pairs:
        if seen[i] or seen[j]:
            raise ValueError("qubit used by two singlets")
        seen[i] = seen[j] = True
    if not all(seen):
        raise ValueError("singlet pairs must cover all qubits")

    state = np.ones(1, dtype=complex)
    order: list[int] = []
    for i, j in pairs:
        state = np.kron(state, SINGLET)
        order.extend((i, j))
    psi = state.reshape([2] * n_qubits)
    perm = np.argsort(np.array(order))
    return np.ascontiguousarray(psi.transpose(perm)).reshape(-1)


def norm(state: np.ndarray) -> float:
    return float(np.linalg.norm(state))


def is_stabilized(state: np.ndarray, p: PauliString, tol: float = 1e-12) -> bool:
    """True iff p fixes the state: ||p psi - psi|| <= tol ||psi||."""
    ns = norm(state)
    if ns == 0.0:
        raise ValueError("zero state has no stabilizer eigenvalues")
    return norm(p.apply(state) - state) <= tol * ns


def resolve_sign(state: np.ndarray, p: PauliString, tol: float = 1e-12) -> int:
    """Return s in {+1, -1} such that s*p stabilizes the state.

    Raises if both or neither sign stabilizes.
    """
    plus = is_stabilized(state, p, tol)
    minus = is_stabilized(state, -p, tol)
    if plus == minus:
        raise ValueError(f"sign of {p} not uniquely resolved (both={plus})")
    return 1 if plus else -1
