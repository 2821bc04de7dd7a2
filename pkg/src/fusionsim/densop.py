"""Dense density-matrix engine for small labeled qubit registers.

Registers hold at most 8 qubits (dense 256x256 matrices at worst), which
covers every instance in this package: two spins, four photonic occupation
qubits, and a couple of ancillas.  States are immutable; every operation
returns a new ``DensityMatrix``.

Basis convention: the first label in the register is the most significant
bit of the computational-basis index.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

MAX_QUBITS = 8

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
POSITIVITY_TOL = 1e-10
UNITARITY_TOL = 1e-10
COMPLETENESS_TOL = 1e-10
NULL_PROB_TOL = 1e-14

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)

_PAULI = {"I": I2, "X": X, "Y": Y, "Z": Z}


class RegisterError(ValueError):
    """Label collisions, unknown labels, or register-size violations."""


class StateError(ValueError):
    """Matrix fails a density-matrix / unitarity / completeness invariant."""


@dataclass(frozen=True, order=True)
class QubitLabel:
    """Identifies one register qubit.

    ``kind`` is ``"spin"`` (the emitter spin at clock cycle ``cycle``) or
    ``"photon"`` (occupation of one time-bin mode: ``slot`` is ``"e"`` or
    ``"l"``).  Spin labels carry ``slot=""``.
    """

    kind: str
    cycle: int
    slot: str = ""

    def __post_init__(self):
        if self.kind not in ("spin", "photon"):
            raise RegisterError(f"unknown label kind {self.kind!r}")
        if self.kind == "photon" and self.slot not in ("e", "l"):
            raise RegisterError(f"photon label needs slot 'e' or 'l', got {self.slot!r}")
        if self.kind == "spin" and self.slot:
            raise RegisterError("spin labels carry no slot")

    def __str__(self):
        if self.kind == "spin":
            return f"spin{self.cycle}"
        return f"ph{self.cycle}{self.slot}"


def spin(cycle: int = 0) -> QubitLabel:
    return QubitLabel("spin", cycle)


def photon(cycle: int, slot: str) -> QubitLabel:
    return QubitLabel("photon", cycle, slot)


@dataclass(frozen=True)
class PauliString:
    """Tensor product of single-qubit Paulis with an overall sign.

    ``letters`` has one character in ``IXYZ`` per register qubit, aligned
    with the register's label order.
    """

    letters: str
    sign: int = 1

    def __post_init__(self):
        if any(c not in _PAULI for c in self.letters):
            raise ValueError(f"invalid Pauli letters {self.letters!r}")
        if self.sign not in (+1, -1):
            raise ValueError("sign must be +1 or -1")

    def __len__(self):
        return len(self.letters)

    def matrix(self) -> np.ndarray:
        m = np.array([[self.sign]], dtype=complex)
        for c in self.letters:
            m = np.kron(m, _PAULI[c])
        return m

    def weight(self) -> int:
        return sum(c != "I" for c in self.letters)


@dataclass(frozen=True)
class KrausChannel:
    """A channel given by Kraus operators on ``k`` qubits.

    ``heralded=True`` marks deliberately trace-decreasing channels
    (post-selected branches); completeness is then relaxed to sum(K'K) <= I.
    """

    operators: tuple
    heralded: bool = False

    def __post_init__(self):
        ops = tuple(np.asarray(k, dtype=complex) for k in self.operators)
        object.__setattr__(self, "operators", ops)
        dim = ops[0].shape[0]
        if any(k.shape != (dim, dim) for k in ops):
            raise StateError("Kraus operators must share one square shape")
        total = sum(k.conj().T @ k for k in ops)
        if self.heralded:
            if np.linalg.eigvalsh(np.eye(dim) - total).min() < -COMPLETENESS_TOL:
                raise StateError("heralded channel exceeds identity")
        elif np.abs(total - np.eye(dim)).max() > COMPLETENESS_TOL:
            raise StateError("Kraus operators do not sum to identity")

    @property
    def n_qubits(self) -> int:
        return int(round(np.log2(self.operators[0].shape[0])))


def bit_flip(p: float) -> KrausChannel:
    return KrausChannel((np.sqrt(1 - p) * I2, np.sqrt(p) * X))


def phase_flip(p: float) -> KrausChannel:
    return KrausChannel((np.sqrt(1 - p) * I2, np.sqrt(p) * Z))


def amplitude_damping(gamma: float) -> KrausChannel:
    k0 = np.array([[1, 0], [0, np.sqrt(1 - gamma)]], dtype=complex)
    k1 = np.array([[0, np.sqrt(gamma)], [0, 0]], dtype=complex)
    return KrausChannel((k0, k1))


def reset_to_zero(p: float) -> KrausChannel:
    """With probability p, discard the qubit and reload |0>."""
    ops = (
        np.sqrt(1 - p) * I2,
        np.sqrt(p) * np.array([[1, 0], [0, 0]], dtype=complex),
        np.sqrt(p) * np.array([[0, 1], [0, 0]], dtype=complex),
    )
    return KrausChannel(ops)


class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite state over labeled qubits."""

    __slots__ = ("labels", "matrix")

    def __init__(self, matrix: np.ndarray, labels: Sequence[QubitLabel], check: bool = True):
        labels = tuple(labels)
        if len(set(labels)) != len(labels):
            raise RegisterError("duplicate labels in register")
        if len(labels) > MAX_QUBITS:
            raise RegisterError(f"register capped at {MAX_QUBITS} qubits")
        m = np.array(matrix, dtype=complex)
        dim = 2 ** len(labels)
        if m.shape != (dim, dim):
            raise StateError(f"matrix shape {m.shape} does not match {len(labels)} qubits")
        if check:
            if np.abs(m - m.conj().T).max() > HERMITICITY_TOL:
                raise StateError("matrix not Hermitian")
            if abs(np.trace(m).real - 1.0) > TRACE_TOL or abs(np.trace(m).imag) > TRACE_TOL:
                raise StateError(f"trace {np.trace(m)} != 1")
            if np.linalg.eigvalsh(m).min() < -POSITIVITY_TOL:
                raise StateError("matrix has a significantly negative eigenvalue")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "labels", labels)

    def __setattr__(self, name, value):
        raise AttributeError("DensityMatrix is immutable")

    @property
    def n_qubits(self) -> int:
        return len(self.labels)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def position(self, label: QubitLabel) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise RegisterError(f"label {label} not in register") from None

    def positions(self, labels: Iterable[QubitLabel]) -> list:
        return [self.position(l) for l in labels]

    @classmethod
    def from_ket(cls, amplitudes: np.ndarray, labels: Sequence[QubitLabel]) -> "DensityMatrix":
        v = np.asarray(amplitudes, dtype=complex).reshape(-1)
        v = v / np.linalg.norm(v)
        return cls(np.outer(v, v.conj()), labels)

    @classmethod
    def basis_state(cls, bits: str, labels: Sequence[QubitLabel]) -> "DensityMatrix":
        idx = int(bits, 2)
        v = np.zeros(2 ** len(bits), dtype=complex)
        v[idx] = 1.0
        return cls.from_ket(v, labels)

    @classmethod
    def maximally_mixed(cls, labels: Sequence[QubitLabel]) -> "DensityMatrix":
        dim = 2 ** len(labels)
        return cls(np.eye(dim, dtype=complex) / dim, labels)

    def expect(self, pauli: PauliString) -> float:
        return expect(self, pauli)

    def fidelity_to_pure(self, ket: np.ndarray) -> float:
        v = np.asarray(ket, dtype=complex).reshape(-1)
        v = v / np.linalg.norm(v)
        val = (v.conj() @ self.matrix @ v).real
        return float(val)


def _embed_operator(op: np.ndarray, positions: Sequence[int], n: int) -> np.ndarray:
    """Lift an operator on the given qubit positions to the full register."""
    k = len(positions)
    rest = [q for q in range(n) if q not in positions]
    order = list(positions) + rest
    dim = 2 ** n
    idx = np.arange(dim)
    old_idx = np.zeros(dim, dtype=np.int64)
    for j, q in enumerate(order):
        bit = (idx >> (n - 1 - j)) & 1
        old_idx |= bit << (n - 1 - q)
    big = np.kron(op, np.eye(2 ** (n - k), dtype=complex))
    out = np.zeros((dim, dim), dtype=complex)
    out[np.ix_(old_idx, old_idx)] = big
    return out


def tensor(a: DensityMatrix, b: DensityMatrix) -> DensityMatrix:
    if set(a.labels) & set(b.labels):
        raise RegisterError("tensor factors share labels")
    return DensityMatrix(np.kron(a.matrix, b.matrix), a.labels + b.labels)


def apply_unitary(rho: DensityMatrix, u: np.ndarray, targets: Sequence[QubitLabel]) -> DensityMatrix:
    u = np.asarray(u, dtype=complex)
    k = len(targets)
    if u.shape != (2 ** k, 2 ** k):
        raise StateError(f"unitary shape {u.shape} does not match {k} targets")
    if np.abs(u @ u.conj().T - np.eye(2 ** k)).max() > UNITARITY_TOL:
        raise StateError("operator is not unitary")
    pos = rho.positions(targets)
    if len(set(pos)) != len(pos):
        raise RegisterError("duplicate targets")
    full = _embed_operator(u, pos, rho.n_qubits)
    return DensityMatrix(full @ rho.matrix @ full.conj().T, rho.labels)


def apply_channel(rho: DensityMatrix, channel: KrausChannel, targets: Sequence[QubitLabel]) -> DensityMatrix:
    if channel.n_qubits != len(targets):
        raise StateError("channel arity does not match target count")
    pos = rho.positions(targets)
    out = np.zeros_like(rho.matrix)
    for k in channel.operators:
        full = _embed_operator(k, pos, rho.n_qubits)
        out += full @ rho.matrix @ full.conj().T
    out = (out + out.conj().T) / 2  # bound float drift over long sequences
    if channel.heralded:
        p = np.trace(out).real
        if p < NULL_PROB_TOL:
            raise StateError("heralded channel annihilated the state")
        out = out / p
    return DensityMatrix(out, rho.labels)


def expect(rho: DensityMatrix, pauli: PauliString) -> float:
    if len(pauli) != rho.n_qubits:
        raise StateError(f"Pauli length {len(pauli)} != register size {rho.n_qubits}")
    val = np.trace(pauli.matrix() @ rho.matrix)
    if abs(val.imag) > POSITIVITY_TOL:
        raise StateError(f"expectation has imaginary part {val.imag}")
    return float(val.real)


def partial_trace(rho: DensityMatrix, keep: Sequence[QubitLabel]) -> DensityMatrix:
    keep = list(keep)
    pos = rho.positions(keep)
    n = rho.n_qubits
    t = rho.matrix.reshape((2,) * (2 * n))
    # einsum: traced qubits share a row/col letter; kept qubits keep both.
    letters = "abcdefghijklmnop"
    row = list(letters[:n])
    col = [letters[n + q] if q in pos else letters[q] for q in range(n)]
    out_sub = [row[q] for q in pos] + [col[q] for q in pos]
    sub = "".join(row) + "".join(col) + "->" + "".join(out_sub)
    reduced = np.einsum(sub, t).reshape(2 ** len(pos), 2 ** len(pos))
    return DensityMatrix(reduced, keep)


def permute(rho: DensityMatrix, new_order: Sequence[QubitLabel]) -> DensityMatrix:
    """Same state with register labels listed in a new order."""
    if set(new_order) != set(rho.labels) or len(new_order) != rho.n_qubits:
        raise RegisterError("new order must be a permutation of the labels")
    n = rho.n_qubits
    pos = rho.positions(new_order)
    t = rho.matrix.reshape((2,) * (2 * n))
    axes = pos + [p + n for p in pos]
    m = t.transpose(axes).reshape(rho.dim, rho.dim)
    return DensityMatrix(m, tuple(new_order), check=False)


def project(rho: DensityMatrix, m: np.ndarray, targets: Sequence[QubitLabel]):
    """Measurement-operator update: returns (state, probability).

    ``m`` must satisfy m'm <= I.  Branches with probability below
    ``NULL_PROB_TOL`` return ``(None, 0.0)`` so Monte Carlo loops can skip
    impossible outcomes.
    """
    m = np.asarray(m, dtype=complex)
    k = len(targets)
    mm = m.conj().T @ m
    if np.linalg.eigvalsh(np.eye(2 ** k) - mm).min() < -POSITIVITY_TOL:
        raise StateError("measurement operator exceeds identity")
    pos = rho.positions(targets)
    full = _embed_operator(m, pos, rho.n_qubits)
    out = full @ rho.matrix @ full.conj().T
    p = np.trace(out).real
    if p < NULL_PROB_TOL:
        return None, 0.0
    out = (out + out.conj().T) / 2 / p
    return DensityMatrix(out, rho.labels), float(p)


def trace_distance(a: DensityMatrix, b: DensityMatrix) -> float:
    if a.labels != b.labels:
        b = permute(b, a.labels)
    return float(0.5 * np.abs(np.linalg.eigvalsh(a.matrix - b.matrix)).sum())


def fidelity(a: DensityMatrix, b: DensityMatrix) -> float:
    """Uhlmann fidelity F(a, b) = (tr sqrt(sqrt(a) b sqrt(a)))^2."""
    if a.labels != b.labels:
        b = permute(b, a.labels)
    w, v = np.linalg.eigh(a.matrix)
    w = np.clip(w, 0, None)
    sqrt_a = (v * np.sqrt(w)) @ v.conj().T
    inner = sqrt_a @ b.matrix @ sqrt_a
    ev = np.clip(np.linalg.eigvalsh(inner), 0, None)
    return float(np.sqrt(ev).sum() ** 2)
