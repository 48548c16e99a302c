"""Command-line scenario runner.

Subcommands
  verify-algebra     contact/TL/YBE/RLL/RTT/commutator/charge residual suite
  sweep-ep           coalescence and Gaudin-spectrum sweep toward the EP
  solve-bethe        single ground-state solve, both sectors, number audit
  monodromy          encirclement of the defective point in the delta plane
  schur-scan         emergent-block coefficients, error-bound scan, averages
  diagnostics-table  consolidated EP / unbroken / Kondo classification

Every run writes ``report.json`` (byte-stable for a fixed seed) plus CSV
curve tables and PNG figures into the output directory.  Exit status: 0
when every asserted check passes, 1 on a numerical failure (the failing
check is named), 2 on configuration errors.
"""

from __future__ import annotations

import argparse
import platform
import sys
import time
from dataclasses import replace

import numpy as np

from . import __version__, bethe, impurity, schur, tl_algebra
from .config import ConfigError, ScenarioConfig, load_config, sweep_grid
from .numerics import opnorm, permutation_operator, two_site_embed
from .report import Verdict, emit_csv, emit_json, sanitize

PI4 = permutation_operator(2)


def _provenance(cfg: ScenarioConfig) -> dict:
    return {
        "config_hash": cfg.config_hash(),
        "eplab_version": __version__,
        "numpy_version": np.__version__,
        "python_version": platform.python_version(),
        "seed": cfg["seed"],
    }


def _draw_params(rng, regime: str) -> impurity.ImpurityParams:
    gamma = float(rng.uniform(0.5, 2.0))
    j = float(rng.choice([0.0, rng.uniform(0.0, 2.0)]))
    ge = impurity.ep_locus(gamma, j)
    if regime == "unbroken":
        beta = ge * float(rng.uniform(0.1, 0.9))
    elif regime == "near_ep":
        beta = ge - 1e-4
    else:
        beta = ge * float(rng.uniform(1.1, 2.0))
    return impurity.ImpurityParams(float(rng.uniform(-0.5, 0.5)), beta,
                                   gamma, j)


def _draw_u(rng) -> complex:
    # spectral samples on a disk, safely away from the f(u) pole at 1
    while True:
        u = complex(rng.uniform(-0.45, 0.45), rng.uniform(-0.45, 0.45))
        if abs(1.0 - u) > 0.3 and abs(1.0 + u) > 0.3:
            return u


def run_verify_algebra(cfg: ScenarioConfig, out: str) -> dict:
    """Randomized residual suite over all three spectral regimes."""
    rng = np.random.default_rng(cfg["seed"])
    alg = cfg.section("algebra")
    tol = cfg.section("tolerances")
    regimes = ["unbroken", "near_ep", "broken"]
    worst = {"tl": 0.0, "ybe_braid": 0.0, "ybe_ordinary": 0.0,
             "unitarity": 0.0, "r0_pi": 0.0, "rll": 0.0, "rtt": 0.0,
             "transfer_comm": 0.0, "universality": 0.0}
    rtt_sizes = set()
    for draw in range(alg["n_draws"]):
        p = _draw_params(rng, regimes[draw % 3])
        r = tl_algebra.baxterized_r(p)
        worst["tl"] = max(worst["tl"], max(
            tl_algebra.verify_tl_relations(p, 3).values()))
        bio = tl_algebra.build_contact_generator(p, "biorthogonal").matrix
        worst["universality"] = max(
            worst["universality"],
            float(np.max(np.abs(bio - tl_algebra.UNIVERSAL_CONTACT))))
        worst["r0_pi"] = max(worst["r0_pi"], opnorm(r.ordinary_form(0.0) - PI4))
        n_rtt = 1 + draw % 4
        rtt_sizes.add(n_rtt)
        chain = tl_algebra.build_chain(p, n_rtt)
        chain_tc = tl_algebra.build_chain(p, min(4, max(2, n_rtt)))
        for _ in range(alg["n_spectral"]):
            u, v = _draw_u(rng), _draw_u(rng)
            worst["ybe_braid"] = max(worst["ybe_braid"],
                                     opnorm(_braid_ybe(r, u, v)))
            worst["ybe_ordinary"] = max(worst["ybe_ordinary"],
                                        tl_algebra.ybe_residual(r, u, v))
            worst["unitarity"] = max(worst["unitarity"],
                                     tl_algebra.unitarity_check(r, u))
            worst["rll"] = max(worst["rll"], tl_algebra.rll_residual(p, u, v))
            worst["rtt"] = max(worst["rtt"],
                               tl_algebra.rtt_residual(chain, u, v))
            worst["transfer_comm"] = max(
                worst["transfer_comm"],
                tl_algebra.transfer_commutator(chain_tc, [(u, v)]))
    # charge hierarchy once, on a fixed representative
    p4 = impurity.ImpurityParams(0.0, 0.6, 1.0, 0.0)
    chain4 = tl_algebra.build_chain(p4, 4)
    charges = tl_algebra.extract_charges(chain4, 4)
    charge_comm = charges.pairwise_commutator_norm()
    charge_vs_t = max(
        opnorm(qn @ chain4.transfer(u) - chain4.transfer(u) @ qn)
        for qn in charges.charges
        for u in (0.12, -0.27, 0.08 + 0.15j, -0.33j, 0.41))
    # EP contraction ramp at gamma = 1
    ramp = tl_algebra.ep_rescaled_generator(
        1.0, [1e-1, 1e-2, 1e-3, 1e-5])
    contraction_rel = max(
        res / (s * s) for s, res in zip(ramp["s"][:3],
                                        ramp["center_block_residual"][:3]))
    contraction_tail = ramp["center_block_residual"][-1] + ramp["s"][-1] ** 2
    verdicts = [
        Verdict("tl_relations", worst["tl"] <= tol["algebra_small"],
                worst["tl"], tol["algebra_small"]),
        Verdict("ybe_braid", worst["ybe_braid"] <= tol["algebra_small"],
                worst["ybe_braid"], tol["algebra_small"]),
        Verdict("ybe_ordinary", worst["ybe_ordinary"] <= tol["algebra_small"],
                worst["ybe_ordinary"], tol["algebra_small"]),
        Verdict("unitarity", worst["unitarity"] <= tol["algebra_small"],
                worst["unitarity"], tol["algebra_small"]),
        Verdict("r_at_zero_is_permutation",
                worst["r0_pi"] <= tol["algebra_small"], worst["r0_pi"],
                tol["algebra_small"]),
        Verdict("rll", worst["rll"] <= tol["algebra_small"], worst["rll"],
                tol["algebra_small"]),
        Verdict("rtt", worst["rtt"] <= tol["algebra_large"], worst["rtt"],
                tol["algebra_large"], sizes=sorted(rtt_sizes)),
        Verdict("transfer_commutator",
                worst["transfer_comm"] <= tol["algebra_large"],
                worst["transfer_comm"], tol["algebra_large"]),
        Verdict("contact_universality",
                worst["universality"] <= tol["universality"],
                worst["universality"], tol["universality"]),
        Verdict("charges_pairwise", charge_comm <= tol["charges"],
                charge_comm, tol["charges"]),
        Verdict("charges_vs_transfer", charge_vs_t <= tol["charges"],
                charge_vs_t, tol["charges"]),
        Verdict("ep_contraction_blocks", contraction_rel <= 1e-12,
                contraction_rel, 1e-12),
        Verdict("ep_contraction_limit", contraction_tail <= 1e-9,
                contraction_tail, 1e-9),
    ]
    return {"verdicts": verdicts, "residuals": sanitize(worst)}


def _braid_ybe(r, u, v):
    lhs = (two_site_embed(r.braid_form(u), 3, 0, 1)
           @ two_site_embed(r.braid_form(u + v), 3, 1, 2)
           @ two_site_embed(r.braid_form(v), 3, 0, 1))
    rhs = (two_site_embed(r.braid_form(v), 3, 1, 2)
           @ two_site_embed(r.braid_form(u + v), 3, 0, 1)
           @ two_site_embed(r.braid_form(u), 3, 1, 2))
    return lhs - rhs


def _model_from_cfg(cfg: ScenarioConfig) -> bethe.BetheModel:
    imp_cfg = cfg.section("impurity")
    b = cfg.section("bethe")
    return bethe.BetheModel(
        system_length=b["system_length"], n_particles=b["n_particles"],
        gamma0=b["gamma0"], width_law=b["width_law"],
        impurity=impurity.ImpurityParams(**imp_cfg))


def run_sweep_ep(cfg: ScenarioConfig, out: str) -> dict:
    tol = cfg.section("tolerances")
    model = _model_from_cfg(cfg)
    sweep = bethe.ep_sweep(model, sweep_grid(cfg))
    ok = sweep.converged
    emit_csv({
        "delta": sweep.deltas[ok],
        "separation": sweep.separations[ok],
        "sigma_min": sweep.sigma_min[ok],
        "sigma_rest_min": sweep.sigma_rest_min[ok],
    }, f"{out}/sweep_ep.csv")
    if cfg["figures"]:
        from .figures import render_sweep
        render_sweep(sweep, f"{out}/sweep_ep.png")
    max_res = float(np.nanmax(sweep.residuals[ok]))
    ratio = float(sweep.sigma_min[ok][-1] / sweep.sigma_rest_min[ok][-1])
    verdicts = [
        Verdict("sweep_all_converged", bool(ok.all()), int(ok.sum()),
                int(len(ok))),
        Verdict("sweep_residuals", max_res <= tol["bethe_residual"], max_res,
                tol["bethe_residual"]),
        Verdict("separation_exponent",
                0.45 <= sweep.separation_exponent <= 0.55,
                sweep.separation_exponent, [0.45, 0.55],
                stderr=sweep.separation_exponent_err),
        Verdict("sigma_min_monotone", sweep.sigma_min_monotone),
        Verdict("sigma_min_collapse", ratio <= 1e-3, ratio, 1e-3),
        Verdict("sigma_rest_window", sweep.sigma_rest_window() <= 3.0,
                sweep.sigma_rest_window(), 3.0),
    ]
    return {
        "verdicts": verdicts,
        "critical_width": model.critical_width,
        "sigma_min_exponent_reported": sweep.sigma_min_exponent,
        "sigma_min_exponent_err": sweep.sigma_min_exponent_err,
    }


def run_solve_bethe(cfg: ScenarioConfig, out: str) -> dict:
    tol = cfg.section("tolerances")
    model = _model_from_cfg(cfg)
    roots, _ = bethe.solve_ground_state(model)
    res = float(np.max(np.abs(bethe.bethe_map(roots, model))))
    left = replace(model, sector="L")
    seed_left = bethe.RootSet(rapidities=np.conj(roots.rapidities),
                              sector="L", pair_indices=roots.pair_indices)
    roots_left = bethe.newton_solve(seed_left, left, tol=tol["bethe_residual"])
    conj_res = float(np.max(np.abs(roots_left.rapidities
                                   - np.conj(roots.rapidities))))
    audit = bethe.quantum_number_audit(roots, model)
    emit_csv({
        "re_k": roots.rapidities.real,
        "im_k": roots.rapidities.imag,
        "recovered_re": np.real(audit["recovered"]),
        "recovered_im": np.imag(audit["recovered"]),
    }, f"{out}/bethe_roots.csv")
    verdicts = [
        Verdict("bethe_residual", res <= tol["bethe_residual"], res,
                tol["bethe_residual"]),
        Verdict("left_right_conjugation", conj_res <= tol["conjugation"],
                conj_res, tol["conjugation"]),
        Verdict("quantum_number_imag_defects",
                float(audit["imag_defects"].max())
                <= tol["quantum_number_imag"],
                float(audit["imag_defects"].max()),
                tol["quantum_number_imag"]),
        Verdict("quantum_number_lattice",
                float(audit["lattice_defects"].max())
                <= tol["quantum_number_imag"],
                float(audit["lattice_defects"].max()),
                tol["quantum_number_imag"]),
    ]
    return {
        "verdicts": verdicts,
        "classification": list(roots.classification),
        "pair_separation": roots.pair_separation(),
        "audit": {k: sanitize(v) for k, v in audit.items()},
    }


def run_monodromy(cfg: ScenarioConfig, out: str) -> dict:
    tol = cfg.section("tolerances")
    model = _model_from_cfg(cfg)
    mono = cfg.section("monodromy")
    trace = bethe.monodromy_loop(model, mono["delta0"], mono["n_steps"])
    cols = {"theta": trace.thetas}
    for j in range(trace.trajectories.shape[1]):
        cols[f"re_k{j}"] = trace.trajectories[:, j].real
        cols[f"im_k{j}"] = trace.trajectories[:, j].imag
    emit_csv(cols, f"{out}/monodromy_trace.csv")
    if cfg["figures"]:
        from .figures import render_monodromy
        render_monodromy(trace, f"{out}/monodromy_trace.png")
    p, q = model.pair_indices
    expected = list(range(model.n_particles))
    expected[p], expected[q] = q, p
    verdicts = [
        Verdict("monodromy_is_pair_transposition",
                list(trace.permutation) == expected,
                list(trace.permutation), expected),
        Verdict("monodromy_parity", trace.parity == -1, trace.parity, -1),
        Verdict("spectators_return",
                trace.max_spectator_return <= tol["spectator_return"],
                trace.max_spectator_return, tol["spectator_return"]),
    ]
    return {"verdicts": verdicts,
            "pair_swap_residual": trace.pair_swap_residual}


def run_schur_scan(cfg: ScenarioConfig, out: str) -> dict:
    tol = cfg.section("tolerances")
    sc = cfg.section("schur")
    imp_cfg = cfg.section("impurity")
    eps0, gam = imp_cfg["epsilon"], imp_cfg["gamma"]
    base = schur.DriveParams(v0=sc["v0"], phi=sc["phi"], delta_o=sc["delta_o"],
                             bandwidth=sc["bandwidth"])
    phis = np.linspace(0.0, 2.0 * np.pi, 32, endpoint=False)
    beta_err = eps_err = 0.0
    beta_vals, eps_vals = [], []
    for phi in phis:
        d = schur.DriveParams(v0=sc["v0"], phi=float(phi),
                              delta_o=sc["delta_o"], bandwidth=sc["bandwidth"])
        eff = schur.assemble_effective(d, eps0, gam)
        beta_vals.append(eff.beta_eff)
        eps_vals.append(eff.epsilon_eff)
        beta_err = max(beta_err,
                       abs(eff.beta_eff - d.g0 * np.sin(2 * phi)) / d.g0)
        eps_err = max(eps_err,
                      abs(eff.epsilon_eff - (eps0 - d.g0 * np.cos(2 * phi)))
                      / d.g0)
        ph_res = impurity.verify_pseudo_hermiticity(eff.markovian)
        beta_err = max(beta_err, ph_res / d.g0)
    scan = schur.error_bound_scan(eps0, gam, base, sc["delta_o_grid"])
    avg = schur.time_average_null_test(base, eps0, gam,
                                       sc["n_phase_samples"])
    avg_anti = opnorm(schur.split_hermitian(avg)[1])
    avg_diag = float(max(abs(avg[0, 0] - eps0), abs(avg[1, 1] - eps0)))
    sysb = schur.build_drive_block_system(base, eps0, gam,
                                          n_bath=int(sc["n_bath"]),
                                          bath_coupling=sc["bath_coupling"])
    pt_res = schur.pt_covariance_check(sysb, 0.1 + 0.01j)
    emit_csv({
        "phi": phis,
        "beta_eff": beta_vals,
        "epsilon_eff": eps_vals,
    }, f"{out}/schur_phi_grid.csv")
    emit_csv({
        "delta_o": scan["gaps"],
        "error": scan["errors"],
    }, f"{out}/schur_gap_scan.csv")
    if cfg["figures"]:
        from .figures import render_schur_scan
        render_schur_scan(phis, np.array(beta_vals),
                          eps0 - np.array(eps_vals), base.g0,
                          scan["gaps"], scan["errors"],
                          f"{out}/schur_scan.png")
    verdicts = [
        Verdict("markovian_coefficients",
                max(beta_err, eps_err) <= tol["schur_coefficients"],
                max(beta_err, eps_err), tol["schur_coefficients"]),
        Verdict("error_bound_exponent",
                0.9 <= scan["exponent"] <= 1.1, scan["exponent"], [0.9, 1.1],
                stderr=scan["exponent_err"]),
        Verdict("time_average_hermitian",
                max(avg_anti, avg_diag) <= tol["schur_hermitian"],
                max(avg_anti, avg_diag), tol["schur_hermitian"]),
        Verdict("pt_covariance", pt_res <= tol["pt_covariance"], pt_res,
                tol["pt_covariance"]),
    ]
    return {"verdicts": verdicts, "c_measured": scan["c_measured"]}


def run_diagnostics_table(cfg: ScenarioConfig, out: str) -> dict:
    """Three-regime classification table with per-cell tolerances."""
    tol = cfg.section("tolerances")
    imp_cfg = cfg.section("impurity")
    gam = imp_cfg["gamma"]
    t_start = time.time()
    regimes = {
        "ep": impurity.ImpurityParams(imp_cfg["epsilon"],
                                      impurity.ep_locus(gam, 0.0), gam, 0.0),
        "unbroken": impurity.ImpurityParams(imp_cfg["epsilon"], 0.0, gam, 0.0),
        "kondo": impurity.ImpurityParams(imp_cfg["epsilon"], 0.3 * gam, gam,
                                         1.0),
    }
    rows, verdicts = {}, []
    for label, p in regimes.items():
        pairs, ps_slope = impurity.pseudospectrum_radius(p)
        dist, norms = impurity.resolvent_curve(p)
        order = float(np.polyfit(np.log(dist), np.log(norms), 1)[0])
        row = {
            "pseudospectrum_pairs": pairs,
            "pseudospectrum_exponent": ps_slope,
            "resolvent_distances": dist,
            "resolvent_norms": norms,
            "resolvent_pole_order": order,
        }
        if label == "ep":
            jd = impurity.jordan_data(p)
            row["jordan_block_size"] = 2
            row["jordan_similarity_residual"] = jd.similarity_residual
            verdicts.append(Verdict(
                "ep_jordan_similarity",
                jd.similarity_residual <= tol["jordan_similarity"],
                jd.similarity_residual, tol["jordan_similarity"]))
            verdicts.append(Verdict("ep_resolvent_order",
                                    abs(order + 2.0) <= 0.1, order, -2.0))
            verdicts.append(Verdict("ep_pseudospectrum_exponent",
                                    abs(ps_slope - 0.5) <= 0.05, ps_slope,
                                    0.5))
        else:
            evals, vecs = np.linalg.eig(impurity.build_himp(p))
            row["jordan_block_size"] = 1
            row["eigenvector_condition"] = float(np.linalg.cond(vecs))
            verdicts.append(Verdict(
                f"{label}_diagonalizable",
                row["eigenvector_condition"] < 1e3,
                row["eigenvector_condition"], 1e3))
            verdicts.append(Verdict(f"{label}_resolvent_order",
                                    abs(order + 1.0) <= 0.05, order, -1.0))
            verdicts.append(Verdict(f"{label}_pseudospectrum_exponent",
                                    abs(ps_slope - 1.0) <= 0.05, ps_slope,
                                    1.0))
        rows[label] = row
    # Gaudin trends: short EP sweep against the Kondo string surrogate
    model = _model_from_cfg(cfg)
    sweep = bethe.ep_sweep(model, np.logspace(-6, -2, 6))
    kondo = bethe.kondo_string_scenario(model, 1.0)
    det_trend = [float(np.prod(s)) for s in sweep.spectra if s is not None]
    rows["gaudin"] = {
        "sweep_deltas": sweep.deltas,
        "sweep_sigma_min": sweep.sigma_min,
        "det_g": det_trend,
        "kondo_sigma_min": kondo["sigma_min"],
    }
    l_sys = model.system_length
    verdicts += [
        Verdict("ep_sigma_min_collapse",
                sweep.sigma_min_monotone
                and sweep.sigma_min[-1] <= 1e-3 * l_sys,
                float(sweep.sigma_min[-1]), 1e-3 * l_sys),
        Verdict("kondo_sigma_min_order_one",
                kondo["sigma_min"] >= kondo["lower_bound"],
                kondo["sigma_min"], kondo["lower_bound"]),
        Verdict("ep_coalescence_exponent",
                0.45 <= sweep.separation_exponent <= 0.55,
                sweep.separation_exponent, [0.45, 0.55]),
    ]
    # monodromy group: transposition around the EP, trivial away from it
    mono = bethe.monodromy_loop(model, 1e-2, 64)
    away = _offset_loop(model, center=2e-2, radius=5e-3, n_steps=64)
    rows["monodromy"] = {
        "ep_permutation": list(mono.permutation),
        "ep_parity": mono.parity,
        "away_permutation": list(away.permutation),
        "away_parity": away.parity,
    }
    verdicts += [
        Verdict("ep_monodromy_z2", mono.parity == -1, mono.parity, -1),
        Verdict("away_monodromy_trivial",
                list(away.permutation) == list(range(model.n_particles)),
                list(away.permutation)),
    ]
    if cfg["figures"]:
        from .figures import render_diagnostics
        render_diagnostics({k: rows[k] for k in regimes},
                           f"{out}/diagnostics_table.png")
    table = {
        "rows": sanitize(rows),
        "verdicts": [dict(v) for v in verdicts],
        "provenance": dict(_provenance(cfg),
                           wall_time_seconds=time.time() - t_start),
    }
    emit_json(table, f"{out}/diagnostics_table.json")
    return {"verdicts": verdicts, "table_path": f"{out}/diagnostics_table.json"}


def _offset_loop(model, center, radius, n_steps):
    """Loop in the delta plane that does not enclose the defective point."""
    start, _ = bethe.solve_ground_state(
        replace(model, impurity=replace(model.impurity,
                                        beta=model.impurity.gamma_eff - center)),
        delta=center)
    k = np.array(start.rapidities, dtype=complex)
    pt = replace(model, impurity=replace(model.impurity,
                                         beta=model.impurity.gamma_eff - center))
    for t in range(1, n_steps + 1):
        d = center + radius * np.exp(2j * np.pi * t / n_steps)
        w = model.width_at(d)
        for _ in range(50):
            f = bethe.bethe_map(k, pt, width=w)
            if np.max(np.abs(f)) < 1e-12:
                break
            k = k - np.linalg.solve(bethe._gaudin_matrix(k, pt, width=w), f)
        else:
            raise bethe.TrackingError(t / n_steps)
    perm = [int(np.argmin(np.abs(start.rapidities - k[j])))
            for j in range(len(k))]
    from .bethe import MonodromyTrace, _permutation_parity
    return MonodromyTrace(
        thetas=np.array([]), trajectories=np.array([start.rapidities, k]),
        permutation=tuple(perm), parity=_permutation_parity(perm),
        max_spectator_return=float(np.max(np.abs(k - start.rapidities))),
        pair_swap_residual=np.nan)


COMMANDS = {
    "verify-algebra": run_verify_algebra,
    "sweep-ep": run_sweep_ep,
    "solve-bethe": run_solve_bethe,
    "monodromy": run_monodromy,
    "schur-scan": run_schur_scan,
    "diagnostics-table": run_diagnostics_table,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="eplab",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("command", choices=sorted(COMMANDS),
                        help="scenario to run")
    parser.add_argument("--config", metavar="PATH", default=None,
                        help="JSON scenario file (strict keys; defaults: "
                             "see eplab.config.DEFAULTS)")
    parser.add_argument("--seed", type=int, default=None,
                        help="override the random seed (default 12345)")
    parser.add_argument("--tol", type=float, default=None,
                        help="override every check tolerance with this value")
    parser.add_argument("--out", metavar="DIR", default="eplab_out",
                        help="output directory (default ./eplab_out)")
    parser.add_argument("--no-figures", action="store_true",
                        help="skip PNG rendering")
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config, seed=args.seed, tol=args.tol)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    if args.no_figures:
        cfg = ScenarioConfig(data=dict(cfg.data, figures=False))
    t0 = time.time()
    try:
        result = COMMANDS[args.command](cfg, args.out)
    except (ArithmeticError, ValueError) as exc:
        print(f"numerical failure in {args.command}: {exc}", file=sys.stderr)
        return 1
    verdicts = result.pop("verdicts")
    report = {
        "command": args.command,
        "provenance": _provenance(cfg),
        "verdicts": [dict(v) for v in verdicts],
        "results": sanitize(result),
    }
    emit_json(report, f"{args.out}/report.json")
    failed = [v["name"] for v in verdicts if not v["passed"]]
    for v in verdicts:
        status = "PASS" if v["passed"] else "FAIL"
        print(f"[{status}] {v['name']}"
              + (f" value={v.get('value')}" if "value" in v else ""))
    print(f"report: {args.out}/report.json ({time.time() - t0:.1f}s)")
    if failed:
        print("failed checks: " + ", ".join(failed), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
