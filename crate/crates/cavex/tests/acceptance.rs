//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! with the measured numbers. Tolerances are pinned in the asserts.

use cavex::forces::{find_reff, force_profile, integrate_wing, total_force};
use cavex::geometry::{
    limit_angles_left, limit_angles_right, limit_angles_right_unshifted, validate, CavityConfig,
    WingSide,
};
use cavex::kernel::{
    a1_closed, a1_quad, a2_closed, a2_quad, classical_casimir_pressure, specific_force,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const DEG: f64 = std::f64::consts::PI / 180.0;

fn cfg(a: f64, r_wing: f64, width: f64, phi: f64, dx: f64) -> cavex::ValidatedConfig64 {
    validate(CavityConfig::new(a, r_wing, width, phi, dx)).expect("valid acceptance config")
}

fn report(criterion: u32, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("[acceptance] criterion {criterion}: {verdict} - {detail}");
}

/// Criterion 1: closed kernels match the adaptive quadrature oracle to
/// 1e-12 over 10,000 randomized windows.
#[test]
fn criterion_01_kernel_oracle_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0001);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let phi = rng.gen_range(0.0..std::f64::consts::FRAC_PI_4);
        let t1 = rng.gen_range(0.0..std::f64::consts::PI);
        let t2 = rng.gen_range(0.0..std::f64::consts::PI);
        let d1 = (a1_closed(phi, t1, t2) - a1_quad(phi, t1, t2).unwrap()).abs();
        let d2 = (a2_closed(phi, t1, t2) - a2_quad(phi, t1, t2).unwrap()).abs();
        worst = worst.max(d1).max(d2);
    }
    let pass = worst < 1e-12;
    report(1, pass, &format!("worst |closed - quad| = {worst:.3e} over 10000 windows"));
    assert!(pass);
}

/// Criterion 2: the shifted limit-angle forms reduce to the unshifted ones
/// at dx = 0 within 1e-12 rad over 1,000 randomized configurations.
#[test]
fn criterion_02_shift_reduction() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0002);
    let mut worst: f64 = 0.0;
    for _ in 0..1_000 {
        let a = 10f64.powf(rng.gen_range(-9.0..-5.0));
        let r_wing = a * 10f64.powf(rng.gen_range(-1.0..2.0));
        let phi = rng.gen_range(0.0..1.4);
        let c = cfg(a, r_wing, 1.0, phi, 0.0);
        let r = rng.gen_range(0.0..=r_wing);
        let shifted = limit_angles_right(&c, r).unwrap();
        let unshifted = limit_angles_right_unshifted(&c, r).unwrap();
        worst = worst
            .max((shifted.theta1 - unshifted.theta1).abs())
            .max((shifted.theta2 - unshifted.theta2).abs());
    }
    let pass = worst < 1e-12;
    report(2, pass, &format!("worst angle deviation = {worst:.3e} rad over 1000 configs"));
    assert!(pass);
}

/// Criterion 3: parallel-plate edge ratios at R/a = 100.
#[test]
fn criterion_03_parallel_plate_edge_ratios() {
    let a = 4e-7;
    let c = cfg(a, 100.0 * a, 1.0, 0.0, 0.0);
    let edge = specific_force(&c, 0.0, WingSide::Right).unwrap();
    let center = specific_force(&c, 50.0 * a, WingSide::Right).unwrap();
    let classical = classical_casimir_pressure::<f64>(a).unwrap();

    let half = edge.p_z / center.p_z;
    let three_eighths = edge.p_x / edge.p_z;
    let fifth = (edge.p_x / classical).abs();

    let pass = (half - 0.5).abs() <= 0.02 * 0.5
        && (three_eighths - 0.375).abs() <= 0.02 * 0.375
        && (fifth - 0.2).abs() <= 0.02 * 0.2;
    report(
        3,
        pass,
        &format!("p_z(0)/p_z(R/2) = {half:.6}, p_x/p_z = {three_eighths:.6}, |p_x|/|classical| = {fifth:.6}"),
    );
    assert!(pass);
}

/// Criterion 4: parallel unshifted wings compensate: |F_x| < 1e-9 |F_z|.
#[test]
fn criterion_04_compensation() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0004);
    let mut worst: f64 = 0.0;
    for _ in 0..8 {
        let a = 10f64.powf(rng.gen_range(-9.0..-6.0));
        let r_wing = a * 10f64.powf(rng.gen_range(0.0..2.0));
        let width = rng.gen_range(0.5..2.0);
        let t = total_force(&cfg(a, r_wing, width, 0.0, 0.0)).unwrap();
        worst = worst.max((t.f_x_total / t.f_z_total).abs());
    }
    let pass = worst < 1e-9;
    report(4, pass, &format!("worst |F_x/F_z| = {worst:.3e} over 8 random parallel cavities"));
    assert!(pass);
}

/// Criterion 5: restoring structure and clockwise torque for shifted
/// parallel wings.
#[test]
fn criterion_05_restoring_force_and_torque() {
    let a = 4e-7;
    let mut pass = true;
    let mut lines = Vec::new();
    for dx_over_a in [0.25, 1.0, 2.5] {
        let t = total_force(&cfg(a, 10.0 * a, 1.0, 0.0, dx_over_a * a)).unwrap();
        let [right, left] = t.per_wing;
        let opposite = right.f_x != 0.0 && (left.f_x + right.f_x).abs() <= 1e-9 * right.f_x.abs();
        let clockwise = t.torque_y < 0.0;
        pass &= opposite && clockwise;
        lines.push(format!(
            "dx/a={dx_over_a}: f_x_right={:.3e}, f_x_left={:.3e}, torque={:.3e}",
            right.f_x, left.f_x, t.torque_y
        ));
    }
    report(5, pass, &lines.join("; "));
    assert!(pass);
}

/// Criterion 6: the shifted parallel profile has its interior extremum
/// within one grid cell of r = R - dx.
#[test]
fn criterion_06_extremum_location() {
    let a = 4e-7;
    let big_r = 4e-6;
    let c = cfg(a, big_r, 1.0, 0.0, a);
    let profile = force_profile(&c, WingSide::Right, 512).unwrap();
    let cell = big_r / 511.0;
    let target = big_r - a;
    let mut nearest = f64::INFINITY;
    for w in profile.samples.windows(3) {
        let (l, m, r) = (w[0].p_x, w[1].p_x, w[2].p_x);
        if (m > l && m > r) || (m < l && m < r) {
            nearest = nearest.min((w[1].position * big_r - target).abs());
        }
    }
    let pass = nearest <= cell;
    report(
        6,
        pass,
        &format!("nearest interior extremum sits {nearest:.3e} m from R - dx (cell {cell:.3e} m)"),
    );
    assert!(pass);
}

/// Criterion 7: attempted reproduction of the effectiveness optimum at
/// a = 4e-10 m: r_eff = 1.85e-9 +- 10% and |F_x(r_eff)| = 5.7 N +- 15%;
/// otherwise the fallback property (unique interior maximum; at dx/a = 0.5
/// the optimum moves to a +- 25% with the force rising by a factor in
/// [2, 6]).
#[test]
fn criterion_07_reff_reproduction_attempt() {
    let a = 4e-10;
    let unshifted = cfg(a, a, 1.0, DEG, 0.0);
    let eff = find_reff(&unshifted, 0.1 * a, 100.0 * a).unwrap();
    let best = cfg(a, eff.r_eff, 1.0, DEG, 0.0);
    let per_wing = integrate_wing(&best, WingSide::Right).unwrap().f_x;

    let r_ok = (eff.r_eff - 1.85e-9).abs() <= 0.10 * 1.85e-9;
    let f_wing_ok = (per_wing.abs() - 5.7).abs() <= 0.15 * 5.7;
    let f_total_ok = (eff.f_at_reff.abs() - 5.7).abs() <= 0.15 * 5.7;
    let strict = r_ok && (f_wing_ok || f_total_ok);

    // fallback: unique interior maximum (find_reff succeeded), optimum at
    // dx/a = 0.5 moving to a +- 25%, force rising by a factor in [2, 6]
    let shifted = cfg(a, a, 1.0, DEG, 0.5 * a);
    let eff_shifted = find_reff(&shifted, 0.1 * a, 100.0 * a).unwrap();
    let move_ok = (eff_shifted.r_eff - a).abs() <= 0.25 * a;
    let factor = (eff_shifted.f_at_reff / eff.f_at_reff).abs();
    let factor_ok = (2.0..=6.0).contains(&factor);
    let fallback = move_ok && factor_ok;

    let pass = strict || fallback;
    report(
        7,
        pass,
        &format!(
            "r_eff = {:.4e} m (target 1.85e-9 +-10%: {r_ok}), |F_x| per wing = {:.3} N / total = {:.3} N \
             (target 5.7 +-15%: wing {f_wing_ok}, total {f_total_ok}); fallback: shifted r_eff = {:.4e} m \
             (target a = {a:.1e} +-25%: {move_ok}), force factor = {factor:.3} (target [2, 6]: {factor_ok})",
            eff.r_eff, per_wing.abs(), eff.f_at_reff.abs(), eff_shifted.r_eff
        ),
    );
    assert!(pass, "neither the direct reproduction nor the fallback property holds");
}

/// Criterion 8: force-ratio asymptotics at phi = 1 deg: 4.2e-3 unshifted at
/// R/a >= 1e3; 1.3e-2 at dx/a = 0.5; 0.46 at R = r_eff ~ a with dx/a = 0.5.
#[test]
fn criterion_08_ratio_asymptotics() {
    let a = 4e-10;
    let big = 1000.0 * a;

    let t = total_force(&cfg(a, big, 1.0, DEG, 0.0)).unwrap();
    let unshifted = (t.f_x_total / t.f_z_total).abs();
    let unshifted_ok = (unshifted - 4.2e-3).abs() <= 0.15 * 4.2e-3;

    let t = total_force(&cfg(a, big, 1.0, DEG, 0.5 * a)).unwrap();
    let shifted = (t.f_x_total / t.f_z_total).abs();
    let shifted_ok = (shifted - 1.3e-2).abs() <= 0.15 * 1.3e-2;

    let t = total_force(&cfg(a, a, 1.0, DEG, 0.5 * a)).unwrap();
    let at_reff = (t.f_x_total / t.f_z_total).abs();
    let at_reff_ok = (at_reff - 0.46).abs() <= 0.15 * 0.46;

    let pass = unshifted_ok && shifted_ok && at_reff_ok;
    report(
        8,
        pass,
        &format!(
            "unshifted |F_x/F_z| = {unshifted:.4e} (target 4.2e-3 +-15%: {unshifted_ok}); \
             dx/a=0.5 |F_x/F_z| = {shifted:.4e} (target 1.3e-2 +-15%: {shifted_ok}); \
             R=a dx/a=0.5 |F_x/F_z| = {at_reff:.4e} (target 0.46 +-15%: {at_reff_ok})"
        ),
    );
    assert!(pass);
}

/// Criterion 9: 99% force retention at dx/R = 0.05, and sign-constant
/// monotone decay toward zero over dx/R in {1.2, 2, 5, 10}.
#[test]
fn criterion_09_shift_retention_and_decay() {
    let a = 4e-7;
    let big_r = 2.0 * a;
    let f0 = total_force(&cfg(a, big_r, 1.0, DEG, 0.0)).unwrap().f_x_total;
    let f_small = total_force(&cfg(a, big_r, 1.0, DEG, 0.05 * big_r))
        .unwrap()
        .f_x_total;
    let retention = (f_small / f0).abs();
    let retention_ok = (retention - 0.99).abs() <= 0.02 * 0.99;

    let mut decay = Vec::new();
    for k in [1.2, 2.0, 5.0, 10.0] {
        decay.push(
            total_force(&cfg(a, big_r, 1.0, DEG, k * big_r))
                .unwrap()
                .f_x_total,
        );
    }
    let sign_constant = decay.iter().all(|f| f.signum() == decay[0].signum());
    let monotone = decay.windows(2).all(|w| w[1].abs() < w[0].abs());
    let toward_zero = decay.last().unwrap().abs() < 1e-3 * f0.abs();

    let pass = retention_ok && sign_constant && monotone && toward_zero;
    report(
        9,
        pass,
        &format!(
            "retention = {retention:.4} (target 0.99 +-2%: {retention_ok}); decay sequence = {:?} \
             (sign constant {sign_constant}, monotone {monotone}, toward zero {toward_zero})",
            decay
        ),
    );
    assert!(pass);
}

/// Criterion 10: uniform length scaling sends pressures to lambda^-4 and
/// forces to lambda^-3, relative tolerance 1e-9.
#[test]
fn criterion_10_scaling_laws() {
    let (a, big_r, phi, dx) = (4e-7, 4e-6, DEG, 2e-7);
    let base = cfg(a, big_r, 1.0, phi, dx);
    let r_probe = 0.3 * big_r;
    let p0 = specific_force(&base, r_probe, WingSide::Right).unwrap();
    let f0 = total_force(&base).unwrap();

    let mut worst: f64 = 0.0;
    for lambda in [0.5, 2.0, 10.0] {
        let scaled = cfg(lambda * a, lambda * big_r, 1.0, phi, lambda * dx);
        let p = specific_force(&scaled, lambda * r_probe, WingSide::Right).unwrap();
        let f = total_force(&scaled).unwrap();
        let p4 = lambda.powi(-4);
        let p3 = lambda.powi(-3);
        worst = worst
            .max(((p.p_x - p0.p_x * p4) / (p0.p_x * p4)).abs())
            .max(((p.p_z - p0.p_z * p4) / (p0.p_z * p4)).abs())
            .max(((f.f_x_total - f0.f_x_total * p3) / (f0.f_x_total * p3)).abs())
            .max(((f.f_z_total - f0.f_z_total * p3) / (f0.f_z_total * p3)).abs());
    }
    let pass = worst <= 1e-9;
    report(10, pass, &format!("worst relative scaling deviation = {worst:.3e}"));
    assert!(pass);
}

/// Criterion 11: reproduce is byte-identical across runs, including under
/// forced parallel row evaluation.
#[test]
fn criterion_11_reproduction_determinism() {
    let tags = ["fig2b", "fig7a", "fig5c", "fig3c"];
    let serial = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let parallel = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();

    let mut pass = true;
    for tag in tags {
        let dir_a = tempfile::tempdir().unwrap();
        let dir_b = tempfile::tempdir().unwrap();
        serial.install(|| cavex::catalog::reproduce(tag, dir_a.path()).unwrap());
        parallel.install(|| cavex::catalog::reproduce(tag, dir_b.path()).unwrap());
        for name in [
            format!("{tag}.csv"),
            format!("{tag}.json"),
            format!("{tag}.manifest.json"),
        ] {
            let a = std::fs::read(dir_a.path().join(&name)).unwrap();
            let b = std::fs::read(dir_b.path().join(&name)).unwrap();
            if a != b {
                pass = false;
                println!("[acceptance] criterion 11: {name} differs between serial and parallel runs");
            }
        }
    }
    report(11, pass, &format!("{} tags byte-identical across thread pools", tags.len()));
    assert!(pass);
}
