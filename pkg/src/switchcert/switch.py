"""Quantum-switch process matrix construction and two-slot supermap application.

The process matrix acts on eight subsystems: the two operation slots
(I1, O1) and (I2, O2) of dimension d each, a d-dimensional target register
(PT past, FT future) and a control qubit (PC past, FC future).  Canonical
storage order is (I1, O1, I2, O2, PT, FT, PC, FC); the global past and
future spaces of the produced channel are P = PC (x) PT and F = FC (x) FT,
so the control qubit is the leading factor of the 2d-dimensional output
channel, and control state |0> means the slot-1 operation acts first.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import ChoiChannel, KrausChannel, choi_from_kraus, choi_matrix, \
    haar_random_unitary, unitary_choi
from .linalg import Operator, SpaceLayout, frobenius, permute_systems
from .report import Timer, check_leq, check_close, make_report

CANONICAL_ORDER = ("I1", "O1", "I2", "O2", "PT", "FT", "PC", "FC")
SECTION_ORDER = ("PC", "PT", "I1", "O1", "I2", "O2", "FC", "FT")


def process_layout(d: int) -> SpaceLayout:
    dims = {"PC": 2, "FC": 2}
    return SpaceLayout(tuple((lbl, dims.get(lbl, d)) for lbl in CANONICAL_ORDER))


def output_layout(d: int) -> SpaceLayout:
    return SpaceLayout((("PT", d), ("FT", d), ("PC", 2), ("FC", 2)))


@dataclass(frozen=True)
class TwoSlotProcess:
    """Process matrix of a two-slot supermap in canonical storage order."""

    d: int
    op: Operator

    def __post_init__(self):
        if self.op.layout != process_layout(self.d):
            raise ValueError("operator layout does not match the canonical "
                             f"two-slot layout for d = {self.d}")


def switch_choi_vector(d: int) -> np.ndarray:
    """The rank-1 process vector: sum_ijk (|ijjkik00> + |jkijik11>).

    Component order follows CANONICAL_ORDER; every amplitude is 0 or 1 and
    there are exactly 2 d^3 ones.
    """
    if d < 2:
        raise ValueError("the switch needs slot dimension d >= 2")
    dims = (d, d, d, d, d, d, 2, 2)
    w = np.zeros(int(np.prod(dims)), dtype=complex)
    strides = np.cumprod((dims + (1,))[::-1])[::-1][1:]

    def flat(idx):
        return int(sum(i * s for i, s in zip(idx, strides)))

    for i in range(d):
        for j in range(d):
            for k in range(d):
                w[flat((i, j, j, k, i, k, 0, 0))] = 1.0
                w[flat((j, k, i, j, i, k, 1, 1))] = 1.0
    return w


def build_switch_choi(d: int) -> TwoSlotProcess:
    """Dense process matrix W0 = |W0><W0| of the quantum switch."""
    w = switch_choi_vector(d)
    return TwoSlotProcess(d, Operator(process_layout(d), np.outer(w, w.conj())))


def to_section_order(proc: TwoSlotProcess) -> Operator:
    """Reindex a process matrix to the global order P (x) slots (x) F."""
    return permute_systems(proc.op, SECTION_ORDER)


def controlled_order_unitary(u1: np.ndarray, u2: np.ndarray) -> np.ndarray:
    """|0><0| (x) U2 U1 + |1><1| (x) U1 U2 on C^2 (x) C^d (control first)."""
    u1 = np.asarray(u1, dtype=complex)
    u2 = np.asarray(u2, dtype=complex)
    p0 = np.diag([1.0, 0.0]).astype(complex)
    p1 = np.diag([0.0, 1.0]).astype(complex)
    return np.kron(p0, u2 @ u1) + np.kron(p1, u1 @ u2)


def _slot_matrix(x, d: int, slot: int) -> np.ndarray:
    if isinstance(x, ChoiChannel):
        if x.dim_in != d or x.dim_out != d:
            raise ValueError(f"slot-{slot} channel must act on dimension {d}")
        return x.matrix
    m = np.asarray(x, dtype=complex)
    if m.shape != (d * d, d * d):
        raise ValueError(f"slot-{slot} operator must be {d * d} x {d * d}")
    return m


def apply_two_slot(proc: TwoSlotProcess, a, b) -> ChoiChannel:
    """Choi operator of the output channel, Tr_in[W (I (x) A (x) B (x) I)^t].

    Only the slot systems are transposed; the identity factors on the global
    past/future are transpose-invariant, so this equals the full transpose.
    ``a`` and ``b`` may be ChoiChannel objects or plain d^2 x d^2 matrices
    (linearity in each slot holds for arbitrary operators).
    """
    d = proc.d
    amat = _slot_matrix(a, d, 1)
    bmat = _slot_matrix(b, d, 2)
    nin, nout = d ** 4, 4 * d * d
    w4 = proc.op.entries.reshape(nin, nout, nin, nout)
    ab = np.kron(amat, bmat)
    out = np.einsum("aobp,ab->op", w4, ab)
    # reorder output from (PT, FT, PC, FC) to P (x) F with P = (PC, PT)
    out = out.reshape(d, d, 2, 2, d, d, 2, 2)
    out = out.transpose(2, 0, 3, 1, 6, 4, 7, 5).reshape(nout, nout)
    return choi_matrix(2 * d, 2 * d, out)


def switch_kraus_output(k: KrausChannel, l: KrausChannel) -> ChoiChannel:
    """Kraus-level switch output: W_ij = |0><0| (x) L_j K_i + |1><1| (x) K_i L_j."""
    if not (k.dim_in == k.dim_out == l.dim_in == l.dim_out):
        raise ValueError("both slot channels must be square and equal-dimensional")
    if k.dim_in != l.dim_in:
        raise ValueError("slot channels must share the same dimension")
    d = k.dim_in
    ops = []
    for ki in k.kraus:
        for lj in l.kraus:
            w = np.zeros((2 * d, 2 * d), dtype=complex)
            w[:d, :d] = lj @ ki
            w[d:, d:] = ki @ lj
            ops.append(w)
    return choi_from_kraus(KrausChannel(2 * d, 2 * d, tuple(ops)))


def _check_indices(d: int, idx) -> tuple[int, ...]:
    idx = tuple(int(v) for v in idx)
    if len(idx) != 4 or any(v < 0 or v >= d for v in idx):
        raise ValueError(f"indices {idx} out of range for dimension {d}")
    return idx


def w0_action_pairs(d: int, ket, bra):
    """Nonzero entries of Tr_in[W0 (|ket><bra|)^t] as flat (row, col) pairs.

    Rows and columns index the output space in (PT, FT, PC, FC) order; every
    listed entry has value exactly 1.  At most four pairs fire, one per
    surviving Kronecker-delta term.
    """
    i, j, k, l = _check_indices(d, ket)
    i2, j2, k2, l2 = _check_indices(d, bra)

    def flat00(a, b):
        return (a * d + b) * 4

    def flat11(a, b):
        return (a * d + b) * 4 + 3

    pairs = []
    if j == k and j2 == k2:
        pairs.append((flat00(i, l), flat00(i2, l2)))
    if i == l and i2 == l2:
        pairs.append((flat11(k, j), flat11(k2, j2)))
    if j == k and i2 == l2:
        pairs.append((flat00(i, l), flat11(k2, j2)))
    if i == l and j2 == k2:
        pairs.append((flat11(k, j), flat00(i2, l2)))
    return pairs


def fast_w0_action(d: int, ket, bra) -> Operator:
    """Closed-form action of W0 on a slot basis ket-bra, no dense contraction.

    Evaluates Tr_in[W0 (|ijkl><i'j'k'l'|)^t] on the output space
    PT (x) FT (x) PC (x) FC via the four-delta formula.
    """
    n = 4 * d * d
    m = np.zeros((n, n), dtype=complex)
    for r, c in w0_action_pairs(d, ket, bra):
        m[r, c] += 1.0
    return Operator(output_layout(d), m)


def verify_unitary_action(d: int, trials: int, seed, process: TwoSlotProcess | None = None,
                          tol: float = 1e-9) -> "CertificateReport":
    """Check the switch turns Haar pairs (U1, U2) into the controlled-order unitary.

    For each pair, compares apply_two_slot(W0, J_U1, J_U2) against the Choi
    operator of |0><0| (x) U2 U1 + |1><1| (x) U1 U2 in Frobenius norm.
    """
    timer = Timer()
    rng = np.random.default_rng(seed)
    proc = process if process is not None else build_switch_choi(d)
    worst = 0.0
    for _ in range(trials):
        u1 = haar_random_unitary(d, rng)
        u2 = haar_random_unitary(d, rng)
        got = apply_two_slot(proc, unitary_choi(u1), unitary_choi(u2))
        want = unitary_choi(controlled_order_unitary(u1, u2))
        worst = max(worst, frobenius(got.matrix, want.matrix))
    eye = np.eye(d)
    exact = frobenius(
        apply_two_slot(proc, unitary_choi(eye), unitary_choi(eye)).matrix,
        unitary_choi(np.eye(2 * d)).matrix)
    checks = [
        check_leq("max_frobenius_distance", worst, tol),
        check_close("identity_pair_distance", exact, 0.0,
                    0.0 if process is None else tol),
    ]
    return make_report(f"switch_unitary_action_d{d}", checks, timer,
                       notes=(f"trials={trials}",))
