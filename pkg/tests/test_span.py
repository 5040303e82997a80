import numpy as np
import pytest

from switchcert.channels import choi_from_kraus, haar_random_unitary, \
    standard_channel, unitary_choi
from switchcert.linalg import frobenius
from switchcert.span import (
    build_group,
    build_span_generator,
    enumerate_generators,
    estimate_span_dimension,
    group_size_formulas,
    listed_operator_count,
    membership_residual,
    phase_average,
    scale_match_residual,
    scaled_unitary_deviation,
    span_dimension_formula,
    unitary_span_basis,
    verify_group_combinatorics,
    verify_span_lemmas,
)


def ketbra(d, a, b, c, e):
    m = np.zeros((d * d, d * d), dtype=complex)
    m[a * d + b, c * d + e] = 1.0
    return m


def test_generator_validation():
    with pytest.raises(ValueError):
        build_span_generator("A1", (0, 1, 1, 0), 1)
    with pytest.raises(ValueError):
        build_span_generator("A1", (0, 1, 0, 1), 2)   # not a recognized pattern
    with pytest.raises(ValueError):
        build_span_generator("A2", (0, 1, 1, 2), 3)   # not pairwise distinct
    with pytest.raises(ValueError):
        build_span_generator("A3", (0, 1, 2, 3), 4)   # no coincidence
    with pytest.raises(ValueError):
        build_span_generator("A4", (5,), 3)
    with pytest.raises(ValueError):
        build_span_generator("A5", (1, 1), 2)
    with pytest.raises(ValueError):
        build_span_generator("A9", (0, 1), 2)


def test_a1_state_matches_construction():
    gen = build_span_generator("A1", (0, 0, 1, 1), 2)
    th, ph = 0.7, 1.9
    psi = gen.state(0, (th, ph))
    want = np.zeros(4, dtype=complex)
    want[0] = 1.0
    want[3] = np.exp(1j * th)   # complement empty at d = 2
    assert np.allclose(psi, want)


def test_a4_state_matches_construction():
    gen = build_span_generator("A4", (1,), 3)
    phases = np.array([0.3, 1.1, 2.7])
    psi = gen.state(0, phases)
    want = np.zeros(9, dtype=complex)
    for i in range(3):
        want[i * 3 + (i + 1) % 3] = np.exp(1j * phases[i])
    assert np.allclose(psi, want)


def test_phase_average_examples():
    avg = phase_average(build_span_generator("A1", (0, 0, 1, 1), 2), 4)
    resid, s = scale_match_residual(avg, ketbra(2, 0, 0, 1, 1))
    assert resid <= 1e-14 and s.real > 0

    avg = phase_average(build_span_generator("A4", (0,), 2), 3)
    want = ketbra(2, 0, 0, 0, 0) + ketbra(2, 1, 1, 1, 1)
    resid, _ = scale_match_residual(avg, want)
    assert resid <= 1e-14

    avg = phase_average(build_span_generator("A5", (0, 1), 2), 4)
    want = ketbra(2, 0, 1, 0, 0) - ketbra(2, 1, 1, 1, 0)
    resid, s = scale_match_residual(avg, want)
    assert resid <= 1e-14 and abs(s - 0.25) < 1e-13

    avg = phase_average(build_span_generator("A5-variant", (0, 1), 2), 4)
    want = ketbra(2, 1, 0, 0, 0) - ketbra(2, 1, 1, 0, 1)
    resid, _ = scale_match_residual(avg, want)
    assert resid <= 1e-14


def test_phase_average_grid_threshold():
    gen = build_span_generator("A5", (0, 1), 2)
    with pytest.raises(ValueError):
        phase_average(gen, 3)
    a4 = phase_average(gen, 4)
    a8 = phase_average(gen, 8)
    assert frobenius(a4, a8) <= 1e-13


def test_a3_compensated_targets():
    # the sampled states stay exactly unitary after reshaping
    rng = np.random.default_rng(0)
    for idx in ((0, 1, 0, 2), (0, 1, 2, 1)):
        gen = build_span_generator("A3", idx, 3)
        for _ in range(5):
            ph = rng.uniform(0, 2 * np.pi, gen.phase_count)
            assert scaled_unitary_deviation(gen.state(0, ph), 3) <= 1e-12
        avg = phase_average(gen)
        resid, _ = scale_match_residual(avg, gen.target)
        assert resid <= 1e-13
        # and the compensated difference of lone ket-bras is in the span
        assert membership_residual(gen.target, 3) <= 1e-9


def test_same_side_lone_ketbras_are_outside_span():
    # |ij><ik| and |ij><kj| alone have a non-identity partial trace, so they
    # cannot be combinations of unitary-channel Choi operators
    assert membership_residual(ketbra(3, 0, 1, 0, 2), 3) > 0.5
    assert membership_residual(ketbra(3, 0, 1, 2, 1), 3) > 0.5
    diff = ketbra(3, 0, 1, 0, 2) - ketbra(3, 1, 1, 1, 2)
    assert membership_residual(diff, 3) <= 1e-9


def test_partial_trace_characterization_cross_check():
    # independent membership oracle: both partial traces proportional to the
    # identity with the same constant
    rng = np.random.default_rng(1)
    d = 3

    def marginals_dev(op):
        j4 = op.reshape(d, d, d, d)
        lam = np.trace(op.reshape(d * d, d * d)) / d
        tr_out = np.einsum("iaja->ij", j4.reshape(d, d, d, d))
        tr_in = np.einsum("iaib->ab", j4.reshape(d, d, d, d))
        return max(frobenius(tr_out, lam * np.eye(d)),
                   frobenius(tr_in, lam * np.eye(d)))

    combo = sum(complex(*rng.standard_normal(2))
                * unitary_choi(haar_random_unitary(d, rng)).matrix
                for _ in range(5))
    assert marginals_dev(combo) <= 1e-10
    assert membership_residual(combo, d) <= 1e-9

    outside = choi_from_kraus(standard_channel("replace_zero", d)).matrix
    assert marginals_dev(outside) > 0.5
    assert membership_residual(outside, d) > 0.1


def test_membership_residual_examples():
    for d in (2, 3):
        assert membership_residual(np.eye(d * d) / d, d) <= 1e-10
        u = haar_random_unitary(d, 7)
        assert membership_residual(unitary_choi(u).matrix, d) <= 1e-12
        outside = choi_from_kraus(standard_channel("replace_zero", d)).matrix
        assert membership_residual(outside, d) > 0.1


def test_estimate_span_dimension():
    assert estimate_span_dimension(1, 10, seed=0) == 1
    assert estimate_span_dimension(2, 60, seed=0) == 10
    assert estimate_span_dimension(2, 200, seed=1) == 10
    assert estimate_span_dimension(3, 200, seed=0) == 65
    assert span_dimension_formula(2) == 10
    assert span_dimension_formula(3) == 65
    with pytest.raises(ValueError):
        estimate_span_dimension(2, 8, seed=0)


def test_unitary_span_basis_rank():
    for d in (2, 3):
        basis = unitary_span_basis(d, seed=0)
        assert basis.shape[0] == span_dimension_formula(d)
        gram = basis.conj() @ basis.T
        assert frobenius(gram, np.eye(basis.shape[0])) <= 1e-10


def test_enumerate_generators_count():
    for d in (2, 3, 4):
        gens = enumerate_generators(d)
        assert len(gens) == listed_operator_count(d) == d * (d ** 3 - 3 * d + 3)


def test_verify_span_lemmas():
    for d in (2, 3):
        rep = verify_span_lemmas(d, seed=0)
        assert rep.passed, [c for c in rep.checks if not c.passed]
    rep2 = verify_span_lemmas(2, seed=0)
    assert rep2.check("listed_item_count").measured == 10


def test_group_sizes_and_cover():
    for d in (2, 3, 4):
        forms = group_size_formulas(d)
        sizes = {gid: len(build_group(gid, d)) for gid in ("G1", "G2", "G3")}
        assert sizes == forms
        assert sizes["G1"] + d * sizes["G2"] + 2 * sizes["G3"] == d ** 4
        rep = verify_group_combinatorics(d)
        assert rep.passed
    assert {len(build_group(g, 3)) for g in ("G3p", "G3pp")} == {6}
    with pytest.raises(ValueError):
        build_group("G4", 2)


def test_group_membership_in_span():
    # G2 and G3 elements always lie in the span; G1 elements do except for
    # the two same-side coincidence patterns
    d = 3
    for gid in ("G2", "G3"):
        for el in build_group(gid, d):
            assert membership_residual(el.operator, d) <= 1e-9
    outside = 0
    for el in build_group("G1", d):
        i, j, i2, j2 = el.indices
        if len({i, j, i2, j2}) == 3 and (i == i2 or j == j2):
            assert membership_residual(el.operator, d) > 0.1
            outside += 1
        else:
            assert membership_residual(el.operator, d) <= 1e-9
    assert outside == 2 * d * (d - 1) * (d - 2)
