"""Empirical uniqueness probe via alternating projections (Dykstra scheme).

A process is pinned down by two convex constraints: positivity of its matrix
and an affine set fixing its action on a spanning family of unitary-channel
Choi operators.  Starting from random perturbations of a reference process,
alternating projections converge to a point of the intersection.  For the
processes whose extension is unique the runs collapse back onto the
reference; for the deliberately non-unique family they land on feasible
points far from it.

The affine projection uses the tensor-factor structure of the constraints:
the row space of the constraint map is (conjugated slot span) (x) L(out), so
projecting the slot-pair index of the difference with one small precomputed
projector is the exact orthogonal projection onto the affine set.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .report import CertificateReport, Timer, check_leq, check_true, make_report
from .span import span_dimension_formula, unitary_span_basis
from .switch import build_switch_choi
from .uniqueness import (
    build_cp_family,
    build_derived_one_slot,
    build_identity_process,
)

UNIQUE_KINDS = ("identity", "switch", "transpose", "conjugate_qubit")
KINDS = UNIQUE_KINDS + ("cp_family",)


@dataclass(frozen=True)
class ConstraintSystem:
    """Affine action constraints plus the PSD cone for one probe problem."""

    kind: str
    d: int
    nin: int
    nout: int
    reference: np.ndarray
    family: tuple[np.ndarray, ...]
    targets: tuple[np.ndarray, ...]
    in_projector: np.ndarray
    family_rank: int

    def __post_init__(self):
        for name in ("reference", "in_projector"):
            arr = np.array(getattr(self, name), dtype=complex, copy=True)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)


def _contract_in(x4: np.ndarray, slot_op: np.ndarray) -> np.ndarray:
    return np.einsum("aobp,ab->op", x4, slot_op)


def build_constraint_system(kind: str, d: int, seed: int = 0,
                            process=None, samples: int | None = None,
                            allow_large_switch: bool = False) -> ConstraintSystem:
    """Assemble the spanning family, its target actions, and the projector.

    The switch probe is restricted to d = 2 by default (the process matrix is
    256 x 256 there; each extra dimension multiplies the eigensolve cost).
    """
    if kind not in KINDS:
        raise ValueError(f"unknown probe kind {kind!r}; choose from {KINDS}")
    if kind == "switch" and d != 2 and not allow_large_switch:
        raise ValueError("switch probe is restricted to d = 2 by default "
                         "(pass allow_large_switch=True to override)")
    if kind in ("conjugate_qubit", "cp_family") and d != 2:
        raise ValueError(f"{kind} probe is a qubit construction (d = 2)")

    basis = unitary_span_basis(d, samples=samples, seed=seed)
    slot_ops = [row.reshape(d * d, d * d) for row in basis]
    if kind == "switch":
        ref_proc = process if process is not None else build_switch_choi(d)
        reference = ref_proc.op.entries
        nin, nout = d ** 4, 4 * d * d
        rows = np.array([np.kron(a, b).reshape(-1) for a in slot_ops for b in slot_ops])
        family = tuple(np.kron(a, b) for a in slot_ops for b in slot_ops)
    else:
        if process is not None:
            ref_proc = process
        elif kind == "identity":
            ref_proc = build_identity_process(d)
        elif kind == "cp_family":
            ref_proc = build_cp_family(1.0)
        else:
            ref_proc = build_derived_one_slot(kind, d)
        reference = ref_proc.op.entries
        nin, nout = d * d, d * d
        rows = basis
        family = tuple(slot_ops)

    ref4 = reference.reshape(nin, nout, nin, nout)
    targets = tuple(_contract_in(ref4, b) for b in family)
    # constraints say (X - ref) is orthogonal to conj(span) (x) L(out);
    # rows are orthonormal, so the projector onto the conjugated row span is
    in_projector = rows.conj().T @ rows
    return ConstraintSystem(kind=kind, d=d, nin=nin, nout=nout,
                            reference=reference, family=family, targets=targets,
                            in_projector=in_projector, family_rank=len(family))


def expected_family_rank(sys: ConstraintSystem) -> int:
    per_slot = span_dimension_formula(sys.d)
    return per_slot ** 2 if sys.kind == "switch" else per_slot


def affine_project(sys: ConstraintSystem, x: np.ndarray) -> np.ndarray:
    """Exact orthogonal projection onto {X Hermitian : action constraints hold}."""
    diff = x - sys.reference
    n, m = sys.nin, sys.nout
    d4 = diff.reshape(n, m, n, m).transpose(0, 2, 1, 3).reshape(n * n, m * m)
    removed = (sys.in_projector @ d4).reshape(n, n, m, m) \
        .transpose(0, 2, 1, 3).reshape(n * m, n * m)
    out = x - removed
    return (out + out.conj().T) / 2


def psd_project(x: np.ndarray) -> np.ndarray:
    """Projection onto the PSD cone by eigenvalue clipping."""
    h = (x + x.conj().T) / 2
    w, v = np.linalg.eigh(h)
    w = np.clip(w, 0.0, None)
    return (v * w) @ v.conj().T


def constraint_residual(sys: ConstraintSystem, x: np.ndarray) -> float:
    """Largest Frobenius deviation of the action of x from the targets."""
    x4 = x.reshape(sys.nin, sys.nout, sys.nin, sys.nout)
    worst = 0.0
    for b, t in zip(sys.family, sys.targets):
        worst = max(worst, float(np.linalg.norm(_contract_in(x4, b) - t)))
    return worst


def random_hermitian_direction(n: int, rng) -> np.ndarray:
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    h = (g + g.conj().T) / 2
    return h / np.linalg.norm(h)


def _run_single(sys: ConstraintSystem, start: np.ndarray, max_iter: int, tol: float,
                stop_at_tol: bool):
    x = affine_project(sys, start)
    p = np.zeros_like(x)
    dist = float(np.linalg.norm(x - sys.reference))
    iters = 0
    for iters in range(1, max_iter + 1):
        y = psd_project(x + p)
        p = x + p - y
        x_new = affine_project(sys, y)
        step = float(np.linalg.norm(x_new - x))
        x = x_new
        dist = float(np.linalg.norm(x - sys.reference))
        if stop_at_tol and dist <= tol:
            break
        if step <= 1e-13:
            break
    return x, dist, iters


def _min_eig(x: np.ndarray) -> float:
    return float(np.linalg.eigvalsh((x + x.conj().T) / 2)[0])


def _polish_witness(sys: ConstraintSystem, start: np.ndarray, feas_tol: float,
                    max_iter: int):
    """Plain alternating projections until the iterate is feasible within tol.

    Used on the non-uniqueness witness point, where every feasible point sits
    on the boundary of the cone and the terminal approach is tangential; the
    cheap projection pair is iterated until the negative part is below tol.
    """
    x = affine_project(sys, start)
    iters = 0
    while iters < max_iter:
        for _ in range(2000):
            x = affine_project(sys, psd_project(x))
        iters += 2000
        if _min_eig(x) >= -feas_tol:
            break
    return x, iters


def alternating_projection_probe(sys: ConstraintSystem, starts: int = 10,
                                 max_iter: int = 5000, tol: float = 1e-6,
                                 seed: int = 0, feas_tol: float = 1e-6,
                                 witness_threshold: float = 0.1,
                                 witness_amplitude: float = 0.25,
                                 witness_max_iter: int = 400_000) -> CertificateReport:
    """Run the probe from several perturbed starts and certify the outcome.

    Each start is the reference plus a random Hermitian perturbation of unit
    Frobenius norm, projected onto the affine set.  Unique kinds pass when
    every start converges back to the reference within tol.  The cp_family
    kind instead certifies a non-uniqueness witness: the escape direction
    found by the random starts is rescaled to ``witness_amplitude`` and
    polished into a feasible point whose distance from the reference must
    exceed ``witness_threshold``.
    """
    timer = Timer()
    seeds = np.random.SeedSequence(seed).spawn(starts)
    n = sys.reference.shape[0]
    results = []
    for s in seeds:
        rng = np.random.default_rng(s)
        start = sys.reference + random_hermitian_direction(n, rng)
        results.append(_run_single(sys, start, max_iter, tol,
                                   stop_at_tol=sys.kind != "cp_family"))
    dists = [r[1] for r in results]
    iters_used = [r[2] for r in results]

    checks = [check_true("family_rank_full",
                         sys.family_rank == expected_family_rank(sys))]
    notes = [f"starts={starts}", f"iterations={iters_used}",
             f"distances=[{', '.join(f'{v:.3e}' for v in dists)}]"]
    if sys.kind == "cp_family":
        best = results[int(np.argmax(dists))][0]
        escape = best - sys.reference
        scale = float(np.linalg.norm(escape))
        if scale > 0:
            escape = escape / scale
        witness_start = sys.reference + witness_amplitude * escape
        witness, polish_iters = _polish_witness(sys, witness_start, feas_tol,
                                                witness_max_iter)
        wdist = float(np.linalg.norm(witness - sys.reference))
        checks += [
            check_true("witness_distance_exceeds_threshold",
                       wdist >= witness_threshold),
            check_leq("witness_constraint_residual",
                      constraint_residual(sys, witness), feas_tol),
            check_leq("witness_negative_eigenvalue", -_min_eig(witness), feas_tol),
        ]
        notes.append(f"witness_distance={wdist:.4f} polish_iterations={polish_iters}")
    else:
        feas_resid = max(constraint_residual(sys, r[0]) for r in results)
        worst_eig = min(_min_eig(r[0]) for r in results)
        checks += [
            check_leq("final_constraint_residual", feas_resid, feas_tol),
            check_leq("final_negative_eigenvalue", -worst_eig, feas_tol),
            check_leq("max_distance_to_reference", max(dists), tol),
        ]
    return make_report(f"probe_{sys.kind}_d{sys.d}", checks, timer,
                       notes=tuple(notes))
