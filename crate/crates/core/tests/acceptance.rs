//! Exit criteria for the library. Run with
//! `cargo test -p catphase-core --test acceptance -- --nocapture`
//! to see one PASS/FAIL line per criterion.

use std::f64::consts::PI;
use std::time::Instant;

use catphase_core::analytic::{self, CatParams};
use catphase_core::fock::{self, TruncationPolicy};
use catphase_core::interferometer::{self, IfoConfig, Topology};
use catphase_core::montecarlo::{self, RngSpec};
use catphase_core::optimizer;
use nalgebra::Matrix2;
use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TAIL: f64 = 1e-14;
const GRID_ALPHAS: [f64; 6] = [0.5, 1.0, 1.5, 2.0, 3.0, 4.0];

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn grid() -> impl Iterator<Item = (f64, f64)> {
    GRID_ALPHAS
        .into_iter()
        .flat_map(|a| (0..=40).map(move |i| (a, i as f64 * 0.05)))
}

fn displaced_cat(alpha: f64, delta: f64) -> (fock::FockVector, fock::FockVector) {
    let policy = TruncationPolicy::for_cat(alpha, delta, TAIL).unwrap();
    let cat = fock::cat_state(alpha, &policy).unwrap();
    let moved = fock::displace(&cat, delta, &policy).unwrap();
    (cat, moved)
}

fn c1_overlap_oracle() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for (a, d) in grid() {
        let (cat, moved) = displaced_cat(a, d);
        let closed = analytic::overlap(&CatParams::new(a, d).unwrap());
        let err = (fock::inner(&cat, &moved).unwrap() - Complex64::new(closed, 0.0)).norm();
        worst = worst.max(err);
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(worst <= 1e-9, format!("max |overlap - inner| = {worst:.3e} > 1e-9"))?;
    ensure(secs <= 30.0, format!("took {secs:.1} s > 30 s"))?;
    Ok(format!("max error {worst:.2e}, {secs:.2} s"))
}

fn c2_parity_and_distribution_oracle() -> Outcome {
    let (mut parity_err, mut pn_err, mut sum_err) = (0.0f64, 0.0f64, 0.0f64);
    for (a, d) in grid() {
        let params = CatParams::new(a, d).unwrap();
        let (_, moved) = displaced_cat(a, d);
        parity_err = parity_err.max((analytic::parity(&params) - fock::parity_expectation(&moved)).abs());
        let oracle = fock::photon_distribution(&moved);
        let closed = analytic::photon_distribution(&params, oracle.len() - 1);
        for (x, y) in oracle.iter().zip(&closed) {
            pn_err = pn_err.max((x - y).abs());
        }
        sum_err = sum_err.max((closed.iter().sum::<f64>() - 1.0).abs());
    }
    ensure(parity_err <= 1e-9, format!("parity error {parity_err:.3e}"))?;
    ensure(pn_err <= 1e-9, format!("p_n error {pn_err:.3e}"))?;
    ensure(sum_err <= 1e-10, format!("|sum p_n - 1| = {sum_err:.3e}"))?;
    Ok(format!(
        "parity {parity_err:.2e}, p_n {pn_err:.2e}, sum {sum_err:.2e}"
    ))
}

fn c3_first_overlap_zero() -> Outcome {
    let d0 = analytic::overlap_zero(1.5, 0).map_err(|e| e.to_string())?;
    let expected = (-(-4.5f64).exp()).acos() / 3.0;
    ensure((d0 - expected).abs() <= 1e-6, format!("delta_0 = {d0}"))?;
    ensure((d0 - 0.52730).abs() <= 1e-5, format!("delta_0 = {d0} not ~0.52730"))?;
    let h = 1e-4;
    let left = analytic::overlap(&CatParams::new(1.5, d0 - h).unwrap());
    let right = analytic::overlap(&CatParams::new(1.5, d0 + h).unwrap());
    ensure(left > 0.0 && right < 0.0, format!("no sign change: {left} {right}"))?;
    // No earlier zero on a fine grid.
    let earlier = (1..5000)
        .map(|i| i as f64 * (d0 - h) / 5000.0)
        .all(|d| analytic::overlap(&CatParams::new(1.5, d).unwrap()) > 0.0);
    ensure(earlier, "overlap vanishes before delta_0")?;
    Ok(format!("delta_0 = {d0:.8}"))
}

fn c4_approximation_gap() -> Outcome {
    let exact = analytic::detectable_phase(1.5, 1e6).map_err(|e| e.to_string())?;
    let approx = analytic::detectable_phase_approx(1.5, 1e6).map_err(|e| e.to_string())?;
    let gap = (exact - approx).abs() / approx;
    ensure((0.001..=0.015).contains(&gap), format!("relative gap {gap:.4e}"))?;
    Ok(format!("relative gap {:.3}%", 100.0 * gap))
}

fn c5_parity_minimum() -> Outcome {
    let opt = optimizer::minimize_parity(1.5, optimizer::DEFAULT_TOLERANCE).map_err(|e| e.to_string())?;
    let series = optimizer::parity_min_series(1.5);
    ensure((series - 0.47188).abs() < 1e-5, format!("series {series}"))?;
    let rel = (opt.delta_star - series).abs() / series;
    ensure(rel <= 0.02, format!("delta* {} vs series {series}", opt.delta_star))?;
    ensure(opt.parity_at_min < 0.0, format!("parity at min {}", opt.parity_at_min))?;
    let points = 100_000;
    let step = PI / 3.0 / points as f64;
    let (scan, _) = (1..=points)
        .map(|i| i as f64 * step)
        .map(|d| (d, analytic::parity(&CatParams::new(1.5, d).unwrap())))
        .fold((0.0, f64::INFINITY), |best, x| if x.1 < best.1 { x } else { best });
    ensure((scan - opt.delta_star).abs() <= step, format!("scan {scan} vs {}", opt.delta_star))?;
    Ok(format!(
        "delta* = {:.6}, series gap {:.2}%, P = {:.4}",
        opt.delta_star,
        100.0 * rel,
        opt.parity_at_min
    ))
}

fn c6_error_curve() -> Outcome {
    let tol = optimizer::DEFAULT_TOLERANCE;
    let at2 = optimizer::false_negative_curve(&[2.0], tol).map_err(|e| e.to_string())?[0];
    ensure(at2.p_even <= 0.13, format!("p_even(2.0) = {}", at2.p_even))?;
    let large: Vec<f64> = (0..=30).map(|i| 2.5 + 0.25 * i as f64).collect();
    for pt in optimizer::false_negative_curve(&large, tol).map_err(|e| e.to_string())? {
        ensure(pt.p_even <= 0.10, format!("p_even({}) = {}", pt.alpha, pt.p_even))?;
    }
    let sweep: Vec<f64> = (0..=8).map(|i| 1.5 + 0.25 * i as f64).collect();
    let curve = optimizer::false_negative_curve(&sweep, tol).map_err(|e| e.to_string())?;
    for w in curve.windows(2) {
        ensure(
            w[1].p_even < w[0].p_even,
            format!("not decreasing at alpha {} -> {}", w[0].alpha, w[1].alpha),
        )?;
    }
    let p25 = curve.iter().find(|p| p.alpha == 2.5).unwrap().p_even;
    Ok(format!("p_even(2.0) = {:.4}, p_even(2.5) = {p25:.4}", at2.p_even))
}

fn c7_false_positive_exactness() -> Outcome {
    let p = CatParams::new(1.5, 0.0).unwrap();
    for seed in [1u64, 2, 3, 5, 8] {
        let h = montecarlo::sample_counts(&p, 10_000_000, &RngSpec::new(seed)).map_err(|e| e.to_string())?;
        ensure(h.total() == 10_000_000, "shot count mismatch")?;
        ensure(h.odd() == 0, format!("seed {seed}: {} odd counts", h.odd()))?;
    }
    Ok("0 odd counts in 5 x 1e7 shots".into())
}

fn c8_monte_carlo_consistency() -> Outcome {
    let shots = 100_000u64;
    let p = CatParams::new(1.5, 0.5236).unwrap();
    let h = montecarlo::sample_counts(&p, shots, &RngSpec::new(20_240_601)).map_err(|e| e.to_string())?;
    let sigma = (0.7826f64 * (1.0 - 0.7826) / shots as f64).sqrt();
    let frac = h.odd() as f64 / shots as f64;
    ensure((frac - 0.7826).abs() <= 4.0 * sigma, format!("odd fraction {frac}"))?;
    Ok(format!("odd fraction {frac:.5} (sigma {sigma:.2e})"))
}

fn c9_interferometer() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let t: f64 = rng.random();
        let r = (1.0 - t * t).sqrt();
        let phi1 = rng.random_range(-0.1..0.1);
        let phi2 = rng.random_range(-0.1..0.1);
        let cfg = IfoConfig::new(Topology::General, r, t, phi1, phi2, 1.0).map_err(|e| e.to_string())?;
        let m = interferometer::transfer_matrix(&cfg);
        let defect = m.adjoint() * m - Matrix2::identity();
        worst = defect.iter().fold(worst, |w, x| w.max(x.norm()));
    }
    ensure(worst <= 1e-12, format!("unitarity defect {worst:.3e}"))?;

    let a = 1000.0;
    for phi in [1e-2, 1e-3, 1e-4] {
        let cfg = IfoConfig::antisymmetric(a).unwrap().with_signal(phi);
        let (_, d2) = interferometer::propagate_classical(&cfg, Complex64::new(a, 0.0), Complex64::new(0.0, 0.0));
        let err = (d2.im - a * phi).abs();
        let bound = a * phi.powi(3) / 6.0 * (1.0 + 1e-6);
        ensure(err <= bound, format!("phi {phi}: error {err:.3e} > {bound:.3e}"))?;
        ensure(d2.re == 0.0, format!("phi {phi}: real part {}", d2.re))?;
    }

    let inputs = (Complex64::new(1e3, 0.0), Complex64::new(0.25, -1.5));
    for cfg in [
        IfoConfig::antisymmetric(a).unwrap(),
        IfoConfig::asymmetric(0.1, a).unwrap(),
        IfoConfig::new(Topology::General, 0.6, 0.8, 0.0, 0.0, a).unwrap(),
    ] {
        let out = interferometer::propagate_classical(&cfg, inputs.0, inputs.1);
        ensure(out == inputs, format!("{:?} does not reproduce inputs", cfg.topology()))?;
    }
    Ok(format!("unitarity defect {worst:.2e}"))
}

fn c10_end_to_end() -> Outcome {
    let phi = analytic::detectable_phase(1.5, 1e6).map_err(|e| e.to_string())?;
    ensure((phi - 5.2730e-4).abs() < 1e-8, format!("phi = {phi}"))?;
    let cfg = IfoConfig::antisymmetric(1000.0).unwrap();
    let disp = interferometer::displacement_of(&cfg, phi).map_err(|e| e.to_string())?;
    ensure(disp.n_photons == 1e6, format!("N = {}", disp.n_photons))?;
    let policy = TruncationPolicy::for_cat(1.5, disp.delta, TAIL).unwrap();
    let out = interferometer::end_to_end_state(&cfg, 1.5, phi, &policy).map_err(|e| e.to_string())?;
    let cat = fock::cat_state(1.5, &policy).unwrap();
    let overlap = fock::inner(&cat, &out).unwrap().norm();
    ensure(overlap <= 1e-6, format!("|overlap| = {overlap:.3e}"))?;
    Ok(format!("phi = {phi:.6e}, |overlap| = {overlap:.2e}"))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("C1 overlap oracle equivalence", c1_overlap_oracle),
        ("C2 parity and p_n oracle equivalence", c2_parity_and_distribution_oracle),
        ("C3 first overlap zero at alpha=1.5", c3_first_overlap_zero),
        ("C4 detectable-phase approximation gap", c4_approximation_gap),
        ("C5 parity minimum at alpha=1.5", c5_parity_minimum),
        ("C6 false-negative curve", c6_error_curve),
        ("C7 zero false positives", c7_false_positive_exactness),
        ("C8 Monte-Carlo odd fraction", c8_monte_carlo_consistency),
        ("C9 interferometer transfer matrix", c9_interferometer),
        ("C10 end-to-end orthogonality", c10_end_to_end),
    ];
    let mut failed = Vec::new();
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                println!("FAIL  {name}: {why}");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
