"""Acceptance suite: one test and one printed pass/fail line per criterion.

Run ``pytest tests/test_acceptance.py -s`` to see the per-criterion lines.
Tolerances are pinned here, in code, and match the shipped defaults.
"""

import time
from dataclasses import replace

import numpy as np
import pytest

from eplab import bethe, cli, schur, tl_algebra
from eplab.config import load_config
from eplab.impurity import (ImpurityParams, build_himp, detect_ep_beta,
                            ep_locus, jordan_data, kondo_scale,
                            pseudospectrum_radius, resolvent_pole_order,
                            verify_pseudo_hermiticity)
from eplab.numerics import opnorm


def criterion(num, name, ok, detail=""):
    tag = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE {num:>2} [{tag}] {name}" + (f" :: {detail}" if detail else ""))
    assert ok, f"criterion {num} ({name}) failed: {detail}"


@pytest.fixture(scope="module")
def desk_model():
    return bethe.BetheModel(system_length=50.0, n_particles=8, gamma0=1.0,
                            impurity=ImpurityParams(0.0, 0.9, 1.0, 0.0))


@pytest.fixture(scope="module")
def desk_sweep(desk_model):
    t0 = time.time()
    sweep = bethe.ep_sweep(desk_model, np.logspace(-6, -1, 13))
    sweep_seconds = time.time() - t0
    return sweep, sweep_seconds


def test_criterion_1_algebra_suite():
    cfg = load_config(None)
    t0 = time.time()
    out = cli.run_verify_algebra(cfg, "/tmp")
    elapsed = time.time() - t0
    failed = [v["name"] for v in out["verdicts"] if not v["passed"]]
    criterion(1, "algebraic identity suite",
              not failed and elapsed < 30.0,
              f"worst={max(out['residuals'].values()):.2e}, "
              f"{elapsed:.1f}s" + (f", failed={failed}" if failed else ""))


def test_criterion_2_contact_universality():
    rng = np.random.default_rng(2024)
    worst = 0.0
    for draw in range(100):
        gamma = float(rng.uniform(0.4, 2.0))
        if draw % 3 == 2:
            beta = gamma * float(rng.uniform(1.1, 2.0))     # broken
        elif draw % 3 == 1:
            beta = gamma - 1e-4                             # near the EP
        else:
            beta = gamma * float(rng.uniform(0.1, 0.9))     # unbroken
        m = tl_algebra.build_contact_generator(
            ImpurityParams(0.0, beta, gamma, 0.0), "biorthogonal").matrix
        worst = max(worst, float(np.max(np.abs(m - tl_algebra.UNIVERSAL_CONTACT))))
    criterion(2, "eigenbasis contact generator universal", worst <= 1e-13,
              f"max deviation {worst:.2e}")


def test_criterion_3_ep_contraction():
    out = tl_algebra.ep_rescaled_generator(1.0, [1e-1, 1e-2, 1e-3, 1e-5])
    rel = max(res / (s * s) for s, res in
              zip(out["s"][:3], out["center_block_residual"][:3]))
    tail = float(np.max(np.abs(out["rescaled"][-1])))
    criterion(3, "rescaled contact generator contraction",
              rel <= 1e-12 and tail <= 1e-9,
              f"rel block residual {rel:.2e}, tail max-entry {tail:.2e}")


def test_criterion_4_commuting_charges():
    chain = tl_algebra.build_chain(ImpurityParams(0.0, 0.6, 1.0, 0.0), 4)
    charges = tl_algebra.extract_charges(chain, 4)
    pairwise = charges.pairwise_commutator_norm()
    vs_t = max(opnorm(q @ chain.transfer(u) - chain.transfer(u) @ q)
               for q in charges.charges
               for u in (0.11, -0.23, 0.31, 0.07 + 0.18j, -0.29j))
    criterion(4, "charge hierarchy commutes",
              pairwise <= 1e-9 and vs_t <= 1e-9,
              f"pairwise {pairwise:.2e}, vs transfer {vs_t:.2e}")


def test_criterion_5_ep_sweep(desk_sweep):
    sweep, seconds = desk_sweep
    ok_conv = bool(sweep.converged.all())
    max_res = float(np.nanmax(sweep.residuals))
    ratio = float(sweep.sigma_min[-1] / sweep.sigma_rest_min[-1])
    ok = (ok_conv and max_res <= 1e-12
          and 0.45 <= sweep.separation_exponent <= 0.55
          and sweep.sigma_min_monotone and ratio <= 1e-3
          and sweep.sigma_rest_window() <= 3.0 and seconds < 60.0)
    criterion(5, "coalescence and Gaudin-collapse sweep", ok,
              f"res {max_res:.1e}, sep exp {sweep.separation_exponent:.3f}, "
              f"smin ratio {ratio:.1e}, rest window "
              f"{sweep.sigma_rest_window():.2f}, "
              f"smin exp {sweep.sigma_min_exponent:.3f} (reported only), "
              f"{seconds:.1f}s")


def test_criterion_6_monodromy(desk_model):
    p, q = desk_model.pair_indices
    expected = list(range(desk_model.n_particles))
    expected[p], expected[q] = q, p
    details = []
    ok = True
    for delta0 in (1e-2, 1e-3):
        for steps in (64, 256):
            tr = bethe.monodromy_loop(desk_model, delta0, steps)
            good = (list(tr.permutation) == expected and tr.parity == -1
                    and tr.max_spectator_return <= 1e-8)
            ok = ok and good
            details.append(f"d0={delta0:g}/{steps}: parity {tr.parity}, "
                           f"spect {tr.max_spectator_return:.1e}")
    criterion(6, "Z2 monodromy around the defective point", ok,
              "; ".join(details))


def test_criterion_7_kondo_contrast(desk_model, desk_sweep):
    sweep, _ = desk_sweep
    kondo = bethe.kondo_string_scenario(desk_model, 1.0)
    lsys = desk_model.system_length
    ep_smin = float(sweep.sigma_min[-1])          # delta = 1e-6 endpoint
    ok = kondo["sigma_min"] >= 0.1 * lsys and ep_smin <= 1e-3 * lsys
    criterion(7, "Kondo-string versus defective-point contrast", ok,
              f"string smin {kondo['sigma_min']:.2f} >= {0.1 * lsys:.1f}; "
              f"EP smin {ep_smin:.2e} <= {1e-3 * lsys:.2e}")


def test_criterion_8_diagnostic_table():
    p_ep = ImpurityParams(0.0, 1.0, 1.0, 0.0)
    p_herm = ImpurityParams(0.0, 0.0, 1.0, 0.0)
    p_kondo = ImpurityParams(0.0, 0.3, 1.0, 1.0)
    order_ep = resolvent_pole_order(p_ep)
    order_h = resolvent_pole_order(p_herm)
    order_k = resolvent_pole_order(p_kondo)
    _, slope_ep = pseudospectrum_radius(p_ep)
    _, slope_h = pseudospectrum_radius(p_herm)
    _, slope_k = pseudospectrum_radius(p_kondo)
    jd = jordan_data(p_ep)
    conds = [float(np.linalg.cond(np.linalg.eig(build_himp(p))[1]))
             for p in (p_herm, p_kondo)]
    ok = (abs(order_ep + 2) <= 0.1 and abs(order_h + 1) <= 0.05
          and abs(order_k + 1) <= 0.05
          and abs(slope_ep - 0.5) <= 0.05 and abs(slope_h - 1.0) <= 0.05
          and abs(slope_k - 1.0) <= 0.05
          and jd.similarity_residual <= 1e-10 and max(conds) < 1e3)
    criterion(8, "resolvent/pseudospectrum/Jordan classification", ok,
              f"orders ({order_ep:.2f}, {order_h:.2f}, {order_k:.2f}), "
              f"slopes ({slope_ep:.2f}, {slope_h:.2f}, {slope_k:.2f}), "
              f"jordan {jd.similarity_residual:.1e}, "
              f"eigvec cond {max(conds):.1f}")


def test_criterion_9_interaction_ep_locus():
    worst = 0.0
    for gamma in (0.5, 1.0, 2.0):
        for j in (0.0, 1.0, 2.0):
            found = detect_ep_beta(gamma, j)
            worst = max(worst, abs(found - ep_locus(gamma, j)))
    t_vals = [kondo_scale(ImpurityParams(-1.0, 0.0, 1.0, j)) for j in
              (0.0, 1.0, 2.0)]
    monotone = t_vals[0] < t_vals[1] < t_vals[2]
    criterion(9, "interaction-shifted defectiveness onset",
              worst <= 1e-8 and monotone,
              f"locus mismatch {worst:.1e}, scale {t_vals[0]:.3f} -> "
              f"{t_vals[2]:.3f}")


def test_criterion_10_schur_emergence():
    drive = schur.DriveParams(v0=1.0, phi=np.pi / 4, delta_o=20.0,
                              bandwidth=1.0)
    worst = 0.0
    for phi in np.linspace(0.0, 2 * np.pi, 32, endpoint=False):
        d = schur.DriveParams(v0=1.0, phi=float(phi), delta_o=20.0,
                              bandwidth=1.0)
        eff = schur.assemble_effective(d, 0.1, 0.8)
        worst = max(worst,
                    abs(eff.beta_eff - d.g0 * np.sin(2 * phi)) / d.g0,
                    abs(eff.epsilon_eff - (0.1 - d.g0 * np.cos(2 * phi)))
                    / d.g0,
                    verify_pseudo_hermiticity(eff.markovian))
    scan = schur.error_bound_scan(0.1, 0.8, drive,
                                  [20.0, 40.0, 80.0, 160.0, 320.0])
    avg = schur.time_average_null_test(drive, 0.1, 0.8, 32)
    avg_res = max(opnorm(schur.split_hermitian(avg)[1]),
                  abs(avg[0, 0] - 0.1), abs(avg[1, 1] - 0.1))
    sysb = schur.build_drive_block_system(drive, 0.1, 0.8, n_bath=8,
                                          bath_coupling=0.05)
    pt_res = schur.pt_covariance_check(sysb, 0.1 + 0.01j)
    ok = (worst <= 1e-10 and 0.9 <= scan["exponent"] <= 1.1
          and avg_res <= 1e-12 and pt_res <= 1e-12)
    criterion(10, "emergent block coefficients and error bound", ok,
              f"coeff dev {worst:.1e}, exponent {scan['exponent']:.3f}, "
              f"average {avg_res:.1e}, PT {pt_res:.1e}")


def test_criterion_11_quantum_number_audit(desk_model, desk_sweep):
    sweep, _ = desk_sweep
    model = desk_model
    # (a) recovered numbers on lattice, identical left and right sets
    state = sweep.states[-1]          # delta = 1e-6
    d_min = float(sweep.deltas[-1])
    audit = bethe.quantum_number_audit(state, model,
                                       width=model.width_at(d_min))
    lattice_ok = (audit["imag_defects"].max() <= 1e-8
                  and audit["lattice_defects"].max() <= 1e-8)
    left = replace(model, impurity=replace(model.impurity,
                                           beta=model.impurity.gamma_eff
                                           - d_min), sector="L")
    seed = bethe.RootSet(rapidities=np.conj(state.rapidities), sector="L",
                         pair_indices=state.pair_indices)
    roots_left = bethe.newton_solve(seed, left, tol=1e-12,
                                    width=left.width_at(d_min))
    audit_left = bethe.quantum_number_audit(roots_left, left,
                                            width=left.width_at(d_min))
    same_sets = float(np.max(np.abs(
        np.sort(np.real(audit_left["recovered"]))
        - np.sort(np.real(audit["recovered"]))))) <= 1e-8
    # (b) merged-pair drift tracks the closed-form pair phase
    merge_dev = abs(audit["pair_phase_deficit"])            # bound side
    split_dev = 0.0
    for d in (-1e-5, -1e-6):
        st, _ = bethe.solve_ground_state(model, delta=d)
        a = bethe.quantum_number_audit(st, model, width=model.width_at(d))
        split_dev = max(split_dev, abs(a["pair_phase_deficit"]
                                       - a["pair_phase_gap_formula"]))
    drift_ok = merge_dev <= 1e-6 and split_dev <= 1e-6
    # (c) broken phase: conjugate pairing under the bare Breit-Wigner width
    broken = bethe.BetheModel(system_length=50.0, n_particles=6, gamma0=1.0,
                              impurity=ImpurityParams(0.0, 1.25, 1.0, 0.0),
                              width_law="breit_wigner",
                              quantum_numbers=np.arange(6) - 2.5)
    seed_b = bethe.RootSet(
        rapidities=(2 * np.pi * np.asarray(broken.quantum_numbers)
                    / 50.0).astype(complex),
        pair_indices=broken.pair_indices)
    roots_b = bethe.newton_solve(seed_b, broken, tol=1e-12)
    rec = bethe.quantum_number_audit(roots_b, broken,
                                     width=broken.width)["recovered"]
    conj_paired = all(float(np.min(np.abs(rec - np.conj(v)))) <= 1e-9
                      for v in rec)
    image = -np.conj(roots_b.rapidities)[::-1]
    image_res = float(np.max(np.abs(bethe.bethe_map(
        image, replace(broken, sector="L")))))
    ok = lattice_ok and same_sets and drift_ok and conj_paired and \
        image_res <= 1e-10
    criterion(11, "quantum-number closure, merge drift, conjugate pairing",
              ok,
              f"lattice {audit['lattice_defects'].max():.1e}, "
              f"merge {merge_dev:.1e}, split-track {split_dev:.1e}, "
              f"image residual {image_res:.1e}")
