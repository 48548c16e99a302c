import numpy as np
import pytest

from eplab.impurity import EPDegeneracyError, ImpurityParams
from eplab.numerics import opnorm, permutation_operator, two_site_embed
from eplab.tl_algebra import (UNIVERSAL_CONTACT, PoleProximityError,
                              baxterized_r, build_chain, build_contact_generator,
                              build_ep_contact_generator, ep_linear_baxterization,
                              ep_rescaled_generator, extract_charges,
                              jordan_pair_nilpotent, rll_residual, rtt_residual,
                              spectral_fn, transfer_commutator, unitarity_check,
                              verify_tl_relations, ybe_residual)

P_UNB = ImpurityParams(0.0, 0.6, 1.0, 0.0)
P_BRK = ImpurityParams(0.0, 1.25, 1.0, 0.0)


def test_contact_generator_biorthogonal_universal():
    cg = build_contact_generator(P_UNB, basis="biorthogonal")
    assert np.max(np.abs(cg.matrix - UNIVERSAL_CONTACT)) < 1e-13
    cg = build_contact_generator(P_BRK, basis="biorthogonal")
    assert np.max(np.abs(cg.matrix - UNIVERSAL_CONTACT)) < 1e-13


def test_contact_generator_spin_vector_and_normalization():
    cg = build_contact_generator(P_UNB, basis="spin")
    assert np.allclose(cg.omega, 1.6 * np.array([0, 1, -1, 0]), atol=1e-14)
    assert abs(cg.normalization - 2.0) < 1e-13
    # prefactors cancel in the outer product, spin basis included
    assert np.max(np.abs(cg.matrix - UNIVERSAL_CONTACT)) < 1e-13


def test_contact_generator_broken_phase_real_hermitian():
    cg = build_contact_generator(P_BRK, basis="spin")
    assert np.max(np.abs(cg.matrix.imag)) < 1e-12
    assert opnorm(cg.matrix - cg.matrix.conj().T) < 1e-12


def test_contact_universality_across_draws():
    rng = np.random.default_rng(42)
    for _ in range(100):
        gamma = float(rng.uniform(0.4, 2.0))
        beta = float(rng.uniform(0.05, 2.0)) * gamma
        if abs(beta - gamma) < 1e-3:
            beta = 0.5 * gamma
        p = ImpurityParams(0.0, beta, gamma, 0.0)
        m = build_contact_generator(p, basis="biorthogonal").matrix
        assert np.max(np.abs(m - UNIVERSAL_CONTACT)) < 1e-13


def test_contact_generator_rejects_ep():
    with pytest.raises(EPDegeneracyError):
        build_contact_generator(ImpurityParams(0.0, 1.0, 1.0, 0.0))


def test_ep_contact_generator_from_jordan_pair():
    cg = build_ep_contact_generator(ImpurityParams(0.0, 1.0, 1.0, 0.0))
    assert abs(cg.normalization - 2.0) < 1e-12
    # the pairing is again the universal antisymmetrizer; record its
    # contact-algebra residuals (not asserted by contract, but tiny here)
    e = cg.matrix
    assert opnorm(e @ e - 2 * e) < 1e-12


def test_tl_relations_unbroken_and_broken():
    res = verify_tl_relations(P_UNB, 3)
    assert max(res.values()) <= 1e-13
    res = verify_tl_relations(ImpurityParams(0.0, 2.0, 1.0, 0.0), 3)
    assert max(res.values()) <= 1e-12


def test_tl_disjoint_commutator_exact():
    res = verify_tl_relations(P_UNB, 4)
    assert res["distant"] == 0.0


def test_spectral_fn_functional_equation():
    rng = np.random.default_rng(1)
    for _ in range(25):
        u = complex(rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4))
        v = complex(rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4))
        fu, fv, fuv = spectral_fn(u), spectral_fn(v), spectral_fn(u + v)
        assert abs(fuv - (fu + fv + 2 * fu * fv) / (1 - fu * fv)) < 1e-12


def test_spectral_fn_pole_guard():
    with pytest.raises(PoleProximityError):
        spectral_fn(1.0 + 1e-9)


def test_ybe_residuals():
    r = baxterized_r(P_UNB)
    assert ybe_residual(r, 0.3, 0.1) <= 1e-13
    assert ybe_residual(r, 0.2, 0.2) <= 1e-13     # u = v, structural
    assert ybe_residual(r, 0.2 + 0.4j, -0.1j) <= 1e-12
    r_b = baxterized_r(P_BRK)
    assert ybe_residual(r_b, 0.2 + 0.4j, -0.1j) <= 1e-12


def test_unitarity_and_boundary():
    r = baxterized_r(P_UNB)
    assert unitarity_check(r, 0.0) <= 1e-15
    assert unitarity_check(r, 0.37) <= 1e-13
    assert opnorm(r.ordinary_form(0.0) - permutation_operator(2)) == 0.0


def test_rll_residuals():
    assert rll_residual(P_UNB, 0.3, 0.1) <= 1e-13
    assert rll_residual(P_UNB, 0.25, 0.25) <= 1e-13
    assert rll_residual(ImpurityParams(0.0, 1.7, 1.0, 0.0), 0.3, -0.2) <= 1e-12


def test_rtt_residuals():
    for n, tol in ((1, 1e-13), (3, 1e-11)):
        chain = build_chain(P_UNB, n)
        assert rtt_residual(chain, 0.25, -0.4) <= tol
    chain = build_chain(P_BRK, 2)
    assert rtt_residual(chain, 0.2, 0.05) <= 1e-11


def test_rtt_base_case_matches_rll():
    chain = build_chain(P_UNB, 1)
    assert np.isclose(rtt_residual(chain, 0.3, 0.1),
                      rll_residual(P_UNB, 0.3, 0.1), atol=1e-14)


def test_chain_shapes_and_shift():
    c1 = build_chain(P_UNB, 1)
    assert c1.transfer(0.2).shape == (2, 2)
    c3 = build_chain(P_UNB, 3)
    assert c3.monodromy(0.2).shape == (16, 16)
    # t(0) is the two-site cyclic shift: brute-force oracle
    c2 = build_chain(P_UNB, 2)
    t0 = c2.transfer(0.0)
    shift = np.zeros((4, 4))
    for i in range(2):
        for j in range(2):
            shift[j * 2 + i, i * 2 + j] = 1.0   # |v1 v2> -> |v2 v1>
    assert opnorm(t0 - shift) < 1e-13


def test_transfer_commutator():
    chain = build_chain(P_UNB, 4)
    assert transfer_commutator(chain, [(0.2, 0.2)]) <= 1e-14
    rng = np.random.default_rng(17)
    samples = [(complex(rng.uniform(-0.4, 0.4), rng.uniform(-0.3, 0.3)),
                complex(rng.uniform(-0.4, 0.4), rng.uniform(-0.3, 0.3)))
               for _ in range(20)]
    assert transfer_commutator(chain, samples) <= 1e-10


def test_charges_commute_and_are_local():
    chain = build_chain(P_UNB, 3)
    charges = extract_charges(chain, 3)
    assert charges.pairwise_commutator_norm() <= 1e-9
    for u in (0.15, -0.22, 0.1 + 0.2j):
        t = chain.transfer(u)
        for q in charges.charges:
            assert opnorm(q @ t - t @ q) <= 1e-9
    # locality: Q1 lies in the span of 1 and the periodic contact terms
    chain2 = build_chain(P_UNB, 2)
    q1 = extract_charges(chain2, 1).charges[0]
    basis = [np.eye(4, dtype=complex),
             two_site_embed(UNIVERSAL_CONTACT, 2, 0, 1),
             two_site_embed(UNIVERSAL_CONTACT, 2, 1, 0)]
    a = np.array([b.ravel() for b in basis]).T
    coef, *_ = np.linalg.lstsq(a, q1.ravel(), rcond=None)
    recon = sum(c * b for c, b in zip(coef, basis))
    assert opnorm(recon - q1) <= 1e-10


def test_transfer_continuity_toward_ep():
    # || t(u; s) - t(u; s/2) || -> 0 along a splitting ramp
    u = 0.23
    diffs = []
    for s in (1e-2, 1e-3, 1e-4):
        betas = [float(np.sqrt(1.0 - s**2)), float(np.sqrt(1.0 - (s / 2)**2))]
        ts = [build_chain(ImpurityParams(0.0, b, 1.0, 0.0), 2).transfer(u)
              for b in betas]
        diffs.append(opnorm(ts[0] - ts[1]))
    assert diffs[0] < 1e-12 and diffs[-1] < 1e-12


def test_ep_rescaled_generator_ramp():
    out = ep_rescaled_generator(1.0, [1e-1, 1e-2, 1e-3, 1e-5])
    m = out["rescaled"][0]
    assert np.allclose(m[1:3, 1:3], [[0.01, -0.01], [-0.01, 0.01]],
                       rtol=1e-12)
    for s, res in zip(out["s"][:3], out["center_block_residual"][:3]):
        assert res <= 1e-12 * s * s
    assert np.max(np.abs(out["rescaled"][-1])) <= 1e-9
    for s, res, rate in zip(out["s"], out["nilpotency_residual"],
                            out["quadratic_rate"]):
        assert res <= 1e-12
        assert np.isclose(rate, 2 * s * s, rtol=1e-10)


def test_ep_rescaled_rejects_bad_s():
    with pytest.raises(ValueError):
        ep_rescaled_generator(1.0, [2.0])


def test_ep_linear_baxterization():
    zero = np.zeros((4, 4))
    out = ep_linear_baxterization(1.0, 0.3, 0.5, zero)
    assert out["braid_residual"] == 0.0 and out["det_residual"] == 0.0
    out = ep_linear_baxterization(2.0, 0.3, 0.5, jordan_pair_nilpotent(1.0))
    assert out["additivity"] == 0.0          # g(0.8) = 1.6 exactly
    assert out["det_residual"] <= 1e-13
    assert out["braid_residual"] <= 1e-13
    with pytest.raises(ValueError):
        ep_linear_baxterization(1.0, 0.1, 0.2, UNIVERSAL_CONTACT)


def test_build_chain_bounds():
    with pytest.raises(ValueError):
        build_chain(P_UNB, 7)
