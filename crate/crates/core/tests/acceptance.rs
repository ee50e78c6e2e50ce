//! Acceptance run. One line per criterion, nonzero exit if any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use common::{c, svd_norm, to_na};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use semigroup_calculus::calculus::*;
use semigroup_calculus::complexfn::geometry::segments_intersect;
use semigroup_calculus::complexfn::{babylem_radius, jordan_curve, ray_max, CurveOptions, DEFAULT_DECAY_FLOOR};
use semigroup_calculus::measures::standard::{four_point, step_density, two_point};
use semigroup_calculus::measures::{CompactDistribution, CompactMeasure};
use semigroup_calculus::semigroups::{
    equispaced_times, feller_renorm, standard_probes, DiagonalSemigroup, FellerOptions, NilpotentShift,
    RiemannLiouville,
};
use semigroup_calculus::spectral::{
    bounded_generator_check, build_idempotents, character_set, criterion_check, separation_certificate, sharpness_demo,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        let holds: bool = $cond;
        if !holds {
            return Err(format!($($fmt)+));
        }
    };
}

/// `|S^k - S^{2k}|` on the `n`-dimensional shift, from the singular values
/// of the path-graph difference operator with `ceil(n / k)` vertices.
fn shift_two_point_norm(n: usize, k: usize) -> f64 {
    let l = n.div_ceil(k);
    if l <= 1 {
        0.0
    } else {
        2.0 * (std::f64::consts::PI / (2 * l - 1) as f64).cos()
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let n = 512;
    let s = NilpotentShift::new(n);
    let rep = sweep(&s, &two_point(), &grid_aligned(n, 1, 255)).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed().as_secs_f64();
    let mut worst_margin = f64::INFINITY;
    for (k, row) in (1..).zip(&rep.rows) {
        ensure!(row.norm_f - 0.25 > 0.1, "u={} margin {}", row.u, row.norm_f - 0.25);
        let want = shift_two_point_norm(n, k);
        ensure!((row.norm_f - want).abs() <= 1e-8 * want, "u={} norm {} vs {}", row.u, row.norm_f, want);
        worst_margin = worst_margin.min(row.norm_f - 0.25);
    }
    for k in [1, 64, 200] {
        let f = func_calc(&s, &two_point(), k as f64 / n as f64).operator;
        let oracle = svd_norm(&f);
        let row = &rep.rows[k - 1];
        ensure!((row.norm_f - oracle).abs() <= 1e-8 * oracle, "svd mismatch at k={k}");
    }
    ensure!(elapsed < 60.0, "runtime {elapsed:.1}s");
    Ok(format!(
        "{} rows, min margin {worst_margin:.6}, u=1/512 norm {:.10}, {elapsed:.1}s",
        rep.rows.len(),
        rep.rows[0].norm_f
    ))
}

fn criterion_2() -> Outcome {
    let s = NilpotentShift::new(512);
    let grid = grid_aligned(512, 1, 64);
    let a = sweep(&s, &four_point(), &grid).map_err(|e| e.to_string())?;
    let b = sweep(&s, &step_density(), &grid).map_err(|e| e.to_string())?;
    let min_a = a.rows.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
    let min_b = b.rows.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
    let budget = b.rows.iter().map(|r| r.quadrature_budget).fold(0.0, f64::max);
    ensure!(min_a > 0.0, "four_point margin {min_a}");
    ensure!(min_b > 0.0, "step_density margin {min_b}");
    ensure!(budget < 1e-8, "density budget {budget}");
    Ok(format!("min margins {min_a:.4} / {min_b:.4}, density budget {budget:.1e}"))
}

fn lemma_grid() -> Vec<C64> {
    let mut g = vec![c(0.0, 0.0), c(0.0, 4.0)];
    for r in [1.0, 2.5, 5.0] {
        for j in 0..6 {
            let theta = -std::f64::consts::FRAC_PI_2 + std::f64::consts::PI * j as f64 / 5.0;
            g.push(C64::from_polar(r, theta));
        }
    }
    g
}

fn criterion_3() -> Outcome {
    let s = NilpotentShift::new(512);
    let grid = lemma_grid();
    ensure!(grid.len() == 20 && grid.iter().all(|l| l.re >= -1e-15 && l.norm() <= 5.0 + 1e-12), "bad grid");
    let rep = lemma_24_check(&s, &two_point(), &grid, &Lemma24Options::default()).map_err(|e| e.to_string())?;
    let worst = rep.rows.iter().map(|r| r.lhs).fold(0.0, f64::max);
    ensure!(rep.rows.iter().all(|r| r.lhs <= 3.0 + 1e-6), "lhs {worst}");
    ensure!(rep.max_identity_residual < 1e-7, "identity residual {}", rep.max_identity_residual);
    Ok(format!("max lhs {worst:.6} <= 3, identity residual {:.1e}", rep.max_identity_residual))
}

fn criterion_4() -> Outcome {
    let s = NilpotentShift::new(512);
    let mu = two_point().scale(c(1.0, 1.0));
    let rep = symmetrized_sweep(&s, &mu, &grid_aligned(512, 1, 128)).map_err(|e| e.to_string())?;
    let min = rep.rows.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
    ensure!((rep.target - 0.125).abs() < 1e-12, "target {}", rep.target);
    ensure!(min > 0.0, "margin {min}");
    ensure!(rep.max_path_residual < 1e-9, "paths differ by {}", rep.max_path_residual);
    Ok(format!("min margin {min:.4}, path residual {:.1e}", rep.max_path_residual))
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let mu = two_point();
    let ray = ray_max(&mu, DEFAULT_DECAY_FLOOR).map_err(|e| e.to_string())?;
    let curve = jordan_curve(&mu, &ray, &CurveOptions::default()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed().as_secs_f64();
    ensure!(curve.m == 2, "m = {}", curve.m);
    ensure!(curve.delta > 0.0, "delta = {}", curve.delta);
    ensure!(curve.samples_per_segment >= 1000, "samples {}", curve.samples_per_segment);
    // condition (ii) resampled here along the polyline
    let level = mu.laplace(curve.a0).norm();
    let mut path = curve.gamma1_vertices.clone();
    path.push(curve.a3);
    for w in path.windows(2) {
        for k in 0..=1000 {
            let z = w[0] + (w[1] - w[0]) * (k as f64 / 1000.0);
            ensure!(mu.laplace(z).norm() > level, "condition (ii) fails at {z}");
        }
    }
    let p = &curve.full_vertices;
    let n = p.len();
    for i in 0..n {
        for j in (i + 2)..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            ensure!(!segments_intersect(p[i], p[(i + 1) % n], p[j], p[(j + 1) % n]), "segments {i}, {j} cross");
        }
    }
    ensure!(curve.simple, "simplicity flag unset");
    ensure!(elapsed < 30.0, "construction {elapsed:.1}s");
    Ok(format!("m=2, delta={:.4}, {} vertices, {elapsed:.2}s", curve.delta, n))
}

fn criterion_6() -> Outcome {
    let mut parts = Vec::new();
    for (name, mu) in [("two_point", two_point()), ("four_point", four_point()), ("step_density", step_density())] {
        let b = babylem_radius(&mu).map_err(|e| e.to_string())?;
        ensure!(b.r < b.big_r, "{name}: r >= R");
        ensure!(b.margin() >= 1e-3, "{name}: margin {}", b.margin());
        parts.push(format!("{name} {:.3}", b.margin()));
    }
    Ok(format!("margins {}", parts.join(", ")))
}

fn criterion_7() -> Outcome {
    let us = [0.1, 0.5, 1.0, 2.0];
    let reports = [1_000, 10_000, 100_000]
        .iter()
        .map(|&n| sharpness_demo(n, &two_point(), &us))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    for row in &reports[2].rows {
        ensure!((row.norm - 0.25).abs() <= 1e-4, "u={} norm {}", row.u, row.norm);
    }
    for (i, u) in us.iter().enumerate() {
        let g: Vec<f64> = reports.iter().map(|r| r.rows[i].gap).collect();
        ensure!(g[1] <= g[0] && g[2] <= g[1], "u={u}: gaps {g:?}");
    }
    let worst = reports[2].rows.iter().map(|r| r.gap).fold(0.0, f64::max);
    Ok(format!("max gap at n=1e5 {worst:.2e}, monotone in n"))
}

fn criterion_8() -> Outcome {
    let b = DiagonalSemigroup::integers(200);
    let cs = character_set(&b).map_err(|e| e.to_string())?;
    let row = criterion_check(&cs, &two_point(), &[1e-3]).map_err(|e| e.to_string())?.remove(0);
    ensure!(row.satisfied && row.rho < 0.25, "rho {}", row.rho);
    let chain = build_idempotents(&cs, &[50, 100, 150, 200]);
    let chk = chain.check();
    ensure!(chk.all(), "chain {chk:?}");
    let gens = bounded_generator_check(&b, &chain, &[1e-3, 1e-4]);
    let g100 = gens.iter().find(|g| g.m == 100).ok_or("no m=100 row")?;
    let gap = g100.gaps.iter().find(|g| g.0 == 1e-3).ok_or("no t=1e-3 gap")?.1;
    let want = 1.0 - (-0.1f64).exp();
    ensure!((gap - want).abs() < 1e-10, "gap {gap} vs {want}");
    let cert = separation_certificate(&cs, &two_point(), 1e-3, 50).map_err(|e| e.to_string())?;
    ensure!(cert.passed, "certificate failed");
    let inside = cert.lambdas.iter().filter(|l| l.in_slice).all(|l| l.winding == 1 && l.modulus_margin > 0.0);
    ensure!(inside, "slice not strictly inside");
    Ok(format!(
        "rho {:.6}, gap error {:.1e}, radius {:.1} > R_m {}",
        row.rho,
        (gap - want).abs(),
        cert.radius,
        cert.r_m
    ))
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let n = rng.gen_range(2..16);
        let lambdas: Vec<C64> = (0..n).map(|_| c(rng.gen_range(0.0..50.0), rng.gen_range(-20.0..20.0))).collect();
        let atoms: Vec<(f64, f64)> =
            (0..rng.gen_range(1..6)).map(|_| (rng.gen_range(0.05..5.0), rng.gen_range(-3.0..3.0))).collect();
        let u = rng.gen_range(1e-3..2.0);
        let mu = CompactMeasure::from_atoms(&atoms).map_err(|e| e.to_string())?;
        let f = func_calc(&DiagonalSemigroup::new(lambdas.clone()), &mu, u);
        let eig = to_na(&f.operator.to_dense()).eigenvalues().ok_or("eigen solver failed")?;
        for l in &lambdas {
            let want: C64 = atoms.iter().map(|&(t, w)| w * (-l * u * t).exp()).sum();
            let best = eig.iter().map(|e| (e - want).norm()).fold(f64::INFINITY, f64::min);
            worst = worst.max(best);
        }
    }
    ensure!(worst < 1e-10, "max mismatch {worst}");
    Ok(format!("100 draws, max mismatch {worst:.1e}"))
}

fn criterion_10() -> Outcome {
    let lambdas: Vec<C64> = (1..=30).map(|k| c(k as f64 / 3.0, 0.2 * k as f64)).collect();
    let b = DiagonalSemigroup::new(lambdas.clone());
    let comps: Vec<Vec<(f64, f64)>> =
        vec![vec![(1.0, 1.0), (2.0, -1.0)], vec![(0.5, 2.0), (1.5, -1.0)], vec![(1.0, -0.5)]];
    let phi = CompactDistribution::new(
        comps
            .iter()
            .map(|a| CompactMeasure::from_atoms(a))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?,
    )
    .map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for u in [0.05, 0.3, 1.0] {
        let f = ep_calc(&b, &phi, u).map_err(|e| e.to_string())?;
        let d = f.operator.diagonal();
        for (k, l) in lambdas.iter().enumerate() {
            let z = l * u;
            let want: C64 = comps
                .iter()
                .enumerate()
                .map(|(j, a)| (-z).powu(j as u32) * a.iter().map(|&(t, w)| w * (-z * t).exp()).sum::<C64>())
                .sum();
            worst = worst.max((d[k] - want).norm());
        }
    }
    ensure!(worst < 1e-9, "scalar oracle mismatch {worst}");
    let rep = lemma_27_check(&b, &phi, &lemma_grid(), &Lemma27Options::default()).map_err(|e| e.to_string())?;
    ensure!(rep.passed && rep.min_margin >= 0.0, "bound violated, margin {}", rep.min_margin);

    // exploratory only
    let rl = RiemannLiouville::new(64);
    let two = CompactDistribution::new(vec![two_point(), two_point()]).map_err(|e| e.to_string())?;
    let explore = match ep_sweep(&rl, &two, &[0.05, 0.1, 0.2, 0.4]) {
        Ok(r) => {
            let cells: Vec<String> = r.rows.iter().map(|x| format!("u={} margin={:.3e}", x.u, x.margin)).collect();
            format!("exploratory rl(64) sweep [{}]", cells.join("; "))
        }
        Err(e) => format!("exploratory rl(64) sweep unavailable: {e}"),
    };
    Ok(format!("oracle mismatch {worst:.1e}, min bound margin {:.3}; {explore}", rep.min_margin))
}

fn criterion_11() -> Outcome {
    let rl = RiemannLiouville::new(256);
    let rep = feller_renorm(&rl, &equispaced_times(64, 1.0 / 64.0), &standard_probes(&rl), &FellerOptions::default())
        .map_err(|e| e.to_string())?;
    ensure!(rep.contraction_margin >= -1e-6, "contraction margin {}", rep.contraction_margin);
    for chk in &rep.commutant_bound_checks {
        ensure!(chk.norm1_estimate <= chk.norm + 1e-6, "{}: {} > {}", chk.tag, chk.norm1_estimate, chk.norm);
    }
    Ok(format!(
        "contraction margin {:.2e}, commutant excess {:.2e} over {} probes",
        rep.contraction_margin,
        rep.commutant_excess(),
        rep.commutant_bound_checks.len()
    ))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("shift sweep, two-point measure", criterion_1),
        ("shift sweep, four-point and step density", criterion_2),
        ("resolvent bound and two-path identity", criterion_3),
        ("symmetrized complex sweep", criterion_4),
        ("Jordan curve", criterion_5),
        ("small-disk radius", criterion_6),
        ("sharpness on C_0[0,1]", criterion_7),
        ("diagonal pipeline and certificate", criterion_8),
        ("spectral mapping", criterion_9),
        ("distribution calculus and bound", criterion_10),
        ("Feller renorming", criterion_11),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
