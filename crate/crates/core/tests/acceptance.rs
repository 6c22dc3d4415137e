//! Acceptance suite: one test per release criterion, each printing a
//! PASS line with the measured numbers when it holds.
//!
//! Run with `cargo test -p decaylaw --test acceptance -- --nocapture` to see
//! the per-criterion report.

use std::time::Instant;

use decaylaw::amplitude::{
    self, amplitude_series, gamma_m, linear_grid, survival_momentum, survival_rest,
    survival_velocity, survival_velocity_direct, Preparation,
};
use decaylaw::analysis::dilation_report;
use decaylaw::quadrature::{integrate_oracle, integrate_oscillatory, OscillatorySpec};
use decaylaw::spectral::{BreitWignerDensity, MassDensity};
use decaylaw::twomass::{
    effective_gamma_tilde, osc_probability_equal_weights, oscillation_period, TwoMassState,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

fn bw(m: f64, width: f64, tail: f64) -> MassDensity {
    MassDensity::BreitWigner(BreitWignerDensity::new(m, width, tail).unwrap())
}

#[test]
fn criterion_1_contraction_identity() {
    // BW(m=1, Γ=0.01), v=0.6: the direct-integration velocity path must
    // reproduce the rest law at 1.25t pointwise to 1e-9 over [0, 300].
    let d = bw(1.0, 0.01, 1e4);
    let start = Instant::now();
    let grid = linear_grid(0.0, 300.0, 200).unwrap();
    let max_gap = grid
        .par_iter()
        .map(|&t| {
            let moving = survival_velocity_direct(&d, 0.6, t).unwrap().norm_sqr();
            let rest = survival_rest(&d, 1.25 * t).unwrap().norm_sqr();
            (moving - rest).abs()
        })
        .reduce(|| 0.0, f64::max);
    let elapsed = start.elapsed();
    assert!(
        max_gap <= 1e-9,
        "criterion 1 (contraction identity): FAIL — max |F_v(t) - F_0(1.25t)| = {max_gap:e}"
    );
    assert!(
        elapsed.as_secs_f64() < 10.0,
        "criterion 1 (contraction identity): FAIL — runtime {elapsed:?} not within seconds"
    );
    println!(
        "criterion 1 (contraction identity): PASS — max gap {max_gap:e} over 200 points in {:.2?}",
        elapsed
    );
}

#[test]
fn criterion_2_momentum_dilation() {
    // fitted τ_p/τ₀ at p = m must match γ_m = √2 within 1%
    let d = bw(1.0, 0.01, 1e4);
    let report = dilation_report(&d, Preparation::DefiniteMomentum(1.0), None).unwrap();
    let target = 2.0f64.sqrt();
    let rel = (report.ratio_measured - target).abs() / target;
    assert!(
        rel < 0.01,
        "criterion 2 (momentum dilation): FAIL — τ_p/τ₀ = {} is {rel:e} away from √2",
        report.ratio_measured
    );
    println!(
        "criterion 2 (momentum dilation): PASS — τ_p/τ₀ = {:.6} vs √2 = {:.6} (rel dev {:.2e})",
        report.ratio_measured, target, rel
    );
}

#[test]
fn criterion_3_exponential_regime() {
    // |A₀(t)|² within 2% of e^{-Γt} across [0.2/Γ, 3/Γ]; the observed
    // maximum — about 0.34%, at the early edge — is printed for the record.
    let d = bw(1.0, 0.01, 1e4);
    let grid = linear_grid(20.0, 300.0, 57).unwrap();
    let series = amplitude_series(&d, Preparation::Rest, &grid).unwrap();
    let mut max_rel = 0.0f64;
    let mut argmax = 0.0f64;
    for (i, &t) in grid.iter().enumerate() {
        let reference = (-0.01 * t).exp();
        let rel = (series.probabilities[i] - reference).abs() / reference;
        if rel > max_rel {
            max_rel = rel;
            argmax = t;
        }
    }
    assert!(
        max_rel <= 0.02,
        "criterion 3 (exponential regime): FAIL — max rel deviation {max_rel:e} at t = {argmax}"
    );
    println!(
        "criterion 3 (exponential regime): PASS — max rel deviation {max_rel:.3e} at t = {argmax}"
    );
}

#[test]
fn criterion_4_two_mass_closed_forms() {
    // the generic discrete-density amplitude path must agree with the cos²
    // closed forms to 1e-12 absolute on randomized kinematics
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let m1: f64 = rng.random_range(0.05..5.0);
        let m2: f64 = m1 + rng.random_range(0.05..5.0);
        let t: f64 = rng.random_range(0.0..50.0);
        let state = TwoMassState::equal_weights(m1, m2).unwrap();
        let d = state.to_density();
        let prep = match rng.random_range(0..3) {
            0 => Preparation::Rest,
            1 => Preparation::DefiniteVelocity(rng.random_range(0.0..0.95)),
            _ => Preparation::DefiniteMomentum(rng.random_range(0.0..10.0)),
        };
        let generic = amplitude::survival(&d, prep, t).unwrap().norm_sqr();
        let closed = osc_probability_equal_weights(&state, prep, t).unwrap();
        worst = worst.max((generic - closed).abs());
    }
    assert!(
        worst <= 1e-12,
        "criterion 4 (two-mass closed forms): FAIL — worst |generic - cos²| = {worst:e}"
    );

    // γ̃ must reproduce the momentum-path period ratio to 1e-12
    let mut worst_period = 0.0f64;
    for _ in 0..1000 {
        let m1: f64 = rng.random_range(0.05..5.0);
        let m2: f64 = m1 + rng.random_range(0.05..5.0);
        let p: f64 = rng.random_range(0.0..10.0);
        let state = TwoMassState::equal_weights(m1, m2).unwrap();
        let ratio = oscillation_period(&state, Preparation::DefiniteMomentum(p)).unwrap()
            / oscillation_period(&state, Preparation::Rest).unwrap();
        let gt = effective_gamma_tilde(p, m1, m2).unwrap();
        worst_period = worst_period.max((ratio - gt).abs() / gt);
    }
    assert!(
        worst_period <= 1e-12,
        "criterion 4 (two-mass closed forms): FAIL — period ratio off γ̃ by {worst_period:e}"
    );
    println!(
        "criterion 4 (two-mass closed forms): PASS — worst probability gap {worst:.2e}, worst period-ratio gap {worst_period:.2e}"
    );
}

#[test]
fn criterion_5_non_einsteinian_dilation() {
    // m1=1, m2=2, p=2: the measured period dilation is γ̃ = (√5+√8)/3 and
    // is at least 1e-2 away from every Lorentz factor built from m1, m2,
    // or the mean mass
    let state = TwoMassState::equal_weights(1.0, 2.0).unwrap();
    let p = 2.0;
    let measured = oscillation_period(&state, Preparation::DefiniteMomentum(p)).unwrap()
        / oscillation_period(&state, Preparation::Rest).unwrap();
    let gt = (5.0f64.sqrt() + 8.0f64.sqrt()) / 3.0;
    assert!(
        (measured - gt).abs() <= 1e-12,
        "criterion 5 (non-Einsteinian dilation): FAIL — measured {measured} vs γ̃ {gt}"
    );
    let mut min_distance = f64::INFINITY;
    for m_ref in [1.0, 2.0, 1.5] {
        let lorentz = gamma_m(p, m_ref).unwrap();
        min_distance = min_distance.min((gt - lorentz).abs());
    }
    assert!(
        min_distance > 1e-2,
        "criterion 5 (non-Einsteinian dilation): FAIL — some Lorentz candidate is within {min_distance:e} of γ̃"
    );
    println!(
        "criterion 5 (non-Einsteinian dilation): PASS — period ratio {measured:.12} = γ̃, nearest Lorentz candidate {min_distance:.4} away"
    );
}

#[test]
fn criterion_6_degenerate_limits() {
    // p=0 and v=0 must reproduce the rest series pointwise to 1e-12
    let d = bw(1.0, 0.01, 1e4);
    let grid = linear_grid(0.0, 200.0, 41).unwrap();
    let mut worst = 0.0f64;
    for &t in &grid {
        let rest = survival_rest(&d, t).unwrap();
        let p0 = survival_momentum(&d, 0.0, t).unwrap();
        let v0 = survival_velocity(&d, 0.0, t).unwrap();
        worst = worst.max((rest - p0).norm()).max((rest - v0).norm());
    }
    assert!(
        worst <= 1e-12,
        "criterion 6 (degenerate limits): FAIL — worst preparation gap {worst:e}"
    );

    // degenerate masses turn γ̃ into γ_m exactly
    for (p, m) in [(0.5f64, 1.0f64), (2.0, 1.0), (7.0, 3.0), (0.0, 2.5)] {
        let gt = effective_gamma_tilde(p, m, m).unwrap();
        let reference = gamma_m(p, m).unwrap();
        assert!(
            gt == reference,
            "criterion 6 (degenerate limits): FAIL — γ̃(p={p}, m=m={m}) = {gt} != γ_m = {reference}"
        );
    }
    println!(
        "criterion 6 (degenerate limits): PASS — worst p=0/v=0 gap {worst:.2e}, γ̃(m,m) ≡ γ_m exactly"
    );
}

#[test]
fn criterion_7_oracle_equivalence() {
    // 50 randomized (density, phase, t) cases: adaptive engine within 1e-6
    // relative of the 1e7-point midpoint oracle, engine ≤ 100 ms per case
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce97a);
    let mut worst_rel = 0.0f64;
    let mut slowest_ms = 0.0f64;
    for case in 0..50 {
        let m: f64 = rng.random_range(0.5..2.0);
        let width_ratio = 10f64.powf(rng.random_range(-3.0..-1.0));
        let width = width_ratio * m;
        let tail: f64 = rng.random_range(50.0..500.0);
        let d = bw(m, width, tail);
        let cutoff = d.cutoff_hi().unwrap();
        let t_cap = (3.0 / width).min(1e3 / m);
        let t: f64 = rng.random_range(0.0..t_cap);
        let p: f64 = if rng.random_range(0..2) == 0 {
            0.0
        } else {
            rng.random_range(0.0..2.0 * m)
        };
        let phase = move |mu: f64| {
            if p == 0.0 {
                mu * t
            } else {
                t * (p * p + mu * mu).sqrt()
            }
        };
        let spec = OscillatorySpec::new(&d, phase, (0.0, cutoff)).unwrap();
        let start = Instant::now();
        let engine = integrate_oscillatory(&spec).unwrap();
        let ms = start.elapsed().as_secs_f64() * 1e3;
        let oracle = integrate_oracle(&spec, 10_000_000).unwrap();
        let rel = (engine.value - oracle).norm() / oracle.norm();
        assert!(
            rel <= 1e-6,
            "criterion 7 (oracle equivalence): FAIL — case {case} (m={m}, Γ={width}, t={t}, p={p}) off by {rel:e}"
        );
        assert!(
            ms <= 100.0,
            "criterion 7 (oracle equivalence): FAIL — case {case} took {ms:.1} ms"
        );
        worst_rel = worst_rel.max(rel);
        slowest_ms = slowest_ms.max(ms);
    }
    println!(
        "criterion 7 (oracle equivalence): PASS — worst rel dev {worst_rel:.2e}, slowest engine call {slowest_ms:.1} ms"
    );
}

#[test]
fn criterion_8_long_time_tail() {
    // recorded t* where the truncated-spectrum tail dominates the
    // exponential law by more than a decade
    const T_STAR: f64 = 3400.0;
    let d = bw(1.0, 0.01, 1e3);
    let f = survival_rest(&d, T_STAR).unwrap().norm_sqr();
    let reference = (-0.01 * T_STAR).exp();
    let ratio = f / reference;
    assert!(
        ratio > 10.0,
        "criterion 8 (long-time tail): FAIL — |A₀(t*)|²/e^{{-Γt*}} = {ratio}"
    );
    // independent cross-check of the tiny amplitude with a dense oracle
    let spec = OscillatorySpec::new(&d, |mu| mu * T_STAR, (0.0, 11.0)).unwrap();
    let oracle = integrate_oracle(&spec, 30_000_000).unwrap();
    let engine = survival_rest(&d, T_STAR).unwrap();
    let rel = (engine - oracle).norm() / engine.norm();
    assert!(
        rel < 0.5,
        "criterion 8 (long-time tail): FAIL — engine and oracle disagree by {rel}"
    );
    println!(
        "criterion 8 (long-time tail): PASS — t* = {T_STAR}, |A₀|²/e^(-Γt*) = {ratio:.1}, oracle agrees to {rel:.1e}"
    );
}
