use std::fmt::Write as _;
use std::path::Path;

use semigroup_calculus::calculus::{
    lemma_24_check, lemma_27_check, resolvent_check, rows_to_csv, sweep, symmetrized_sweep, CalcError, Lemma24Options,
    Lemma27Options, SweepRow,
};
use semigroup_calculus::complexfn::{
    babylem_radius, jordan_curve, ray_max, vertices_csv, ComplexFnError, DEFAULT_DECAY_FLOOR,
};
use semigroup_calculus::semigroups;
use semigroup_calculus::spectral::{
    bounded_generator_check, build_idempotents, character_set, criterion_check, separation_certificate, sharpness_csv,
    sharpness_demo, SpectralError,
};
use serde::Serialize;
use serde_json::json;

use crate::config::*;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Module(String),
}

macro_rules! module_error {
    ($($t:ty),*) => {
        $(impl From<$t> for RunError {
            fn from(e: $t) -> Self {
                RunError::Module(e.to_string())
            }
        })*
    };
}

module_error!(CalcError, SpectralError, ComplexFnError, semigroups::ConfigError);

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Signed slack; positive means the check holds with room to spare.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
    pub detail: String,
}

impl Check {
    fn slack(name: &str, margin: f64, detail: String) -> Self {
        Check { name: name.into(), passed: margin > 0.0, margin: Some(margin), detail }
    }

    fn flag(name: &str, passed: bool, detail: String) -> Self {
        Check { name: name.into(), passed, margin: None, detail }
    }
}

#[derive(Debug, Default)]
pub struct Outcome {
    /// `(file name, contents)`, written in order.
    pub files: Vec<(String, String)>,
    pub checks: Vec<Check>,
}

impl Outcome {
    fn file(&mut self, name: &str, contents: String) {
        self.files.push((name.into(), contents));
    }

    fn json(&mut self, name: &str, value: &impl Serialize) {
        let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
        s.push('\n');
        self.file(name, s);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Two whitespace-separated columns, one point per line.
fn plot_data(points: impl IntoIterator<Item = (f64, f64)>) -> String {
    let mut s = String::new();
    for (x, y) in points {
        writeln!(s, "{x:e} {y:e}").expect("write to string");
    }
    s
}

fn margin_check(rows: &[SweepRow], below: Option<f64>, min_margin: f64) -> Check {
    let selected: Vec<&SweepRow> = rows.iter().filter(|r| below.is_none_or(|b| r.u < b)).collect();
    let worst = selected.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
    let scope = match below {
        Some(b) => format!("{} rows with u < {b}", selected.len()),
        None => format!("all {} rows", selected.len()),
    };
    if selected.is_empty() {
        return Check::flag("margin_positive", false, "no rows selected".into());
    }
    Check::slack("margin_positive", worst - min_margin, format!("min margin {worst:e} over {scope}"))
}

pub fn run_task(task: &Task, base: &Path, seed: u64) -> Result<Outcome, RunError> {
    match task {
        Task::Sweep(t) => run_sweep(t, base),
        Task::SymmetrizedSweep(t) => run_symmetrized(t, base),
        Task::Curve(t) => run_curve(t, base),
        Task::Lemma24(t) => run_lemma24(t, base, seed),
        Task::Lemma27(t) => run_lemma27(t, base, seed),
        Task::ResolventCheck(t) => run_resolvent(t, seed),
        Task::Idempotents(t) => run_idempotents(t, base),
        Task::Sharpness(t) => run_sharpness(t, base),
        Task::VerifyAll(_) => Err(ConfigError::Invalid("verify-all cannot be nested".into()).into()),
    }
}

fn run_sweep(t: &SweepTask, base: &Path) -> Result<Outcome, RunError> {
    let backend = t.backend.build()?;
    let mu = t.measure.load(base)?;
    let grid = t.u_grid.values()?;
    let rep = sweep(backend.as_ref(), &mu, &grid)?;
    let mut out = Outcome::default();
    out.file("sweep.csv", rows_to_csv(&rep.rows));
    out.json("sweep.json", &rep);
    out.file("sweep_norm.dat", plot_data(rep.rows.iter().map(|r| (r.u, r.norm_f))));
    out.checks.push(margin_check(&rep.rows, t.positive_below, t.min_margin));
    if let Some(limit) = t.max_budget {
        let budget = rep.rows.iter().map(|r| r.quadrature_budget).fold(0.0, f64::max);
        out.checks.push(Check::slack(
            "quadrature_budget",
            positive(limit, "max_budget")? - budget,
            format!("max budget {budget:e}"),
        ));
    }
    Ok(out)
}

fn run_symmetrized(t: &SymmetrizedTask, base: &Path) -> Result<Outcome, RunError> {
    let backend = t.backend.build()?;
    let mu = t.measure.load(base)?;
    let grid = t.u_grid.values()?;
    let tol = positive(t.path_tol, "path_tol")?;
    let rep = symmetrized_sweep(backend.as_ref(), &mu, &grid)?;
    let mut out = Outcome::default();
    out.file("symmetrized.csv", rows_to_csv(&rep.rows));
    out.json("symmetrized.json", &rep);
    out.file("symmetrized_norm.dat", plot_data(rep.rows.iter().map(|r| (r.u, r.norm_f))));
    out.checks.push(margin_check(&rep.rows, t.positive_below, t.min_margin));
    out.checks.push(Check {
        passed: rep.max_path_residual <= tol,
        ..Check::slack(
            "path_agreement",
            tol - rep.max_path_residual,
            format!("max path residual {:e}", rep.max_path_residual),
        )
    });
    Ok(out)
}

fn run_curve(t: &CurveTask, base: &Path) -> Result<Outcome, RunError> {
    let mu = t.measure.load(base)?;
    let tol = positive(t.babylem_margin, "babylem_margin")?;
    let ray = ray_max(&mu, DEFAULT_DECAY_FLOOR)?;
    let baby = babylem_radius(&mu)?;
    let curve = jordan_curve(&mu, &ray, &t.options)?;
    let mut out = Outcome::default();
    out.file("curve_vertices.csv", curve.vertices_csv());
    out.json("curve_params.json", &json!({ "ray": ray, "babylem": baby, "curve": curve.params() }));
    out.file("curve.dat", plot_data(curve.full_vertices.iter().map(|z| (z.re, z.im))));
    out.checks.push(Check::slack(
        "condition_i",
        curve.margins.condition_i,
        format!("delta {:e}, m {}", curve.delta, curve.m),
    ));
    out.checks.push(Check::slack(
        "condition_ii",
        curve.margins.condition_ii,
        format!("{} samples per segment", curve.samples_per_segment),
    ));
    out.checks.push(Check::flag("simple", curve.simple, format!("{} vertices", curve.full_vertices.len())));
    out.checks.push(Check {
        passed: baby.margin() >= tol,
        ..Check::slack("babylem_margin", baby.margin() - tol, format!("r {:e}, R {:e}", baby.r, baby.big_r))
    });
    if let Some(m) = t.expect_m {
        out.checks.push(Check::flag("vanishing_order", curve.m == m, format!("m = {}, expected {m}", curve.m)));
    }
    Ok(out)
}

fn run_lemma24(t: &Lemma24Task, base: &Path, seed: u64) -> Result<Outcome, RunError> {
    let backend = t.backend.build()?;
    let mu = t.measure.load(base)?;
    let lambdas = t.lambdas.values(seed)?;
    let opts = Lemma24Options { u: positive(t.u, "u")?, tol: positive(t.tol, "tol")?, check_hypotheses: true };
    let identity_tol = positive(t.identity_tol, "identity_tol")?;
    let rep = lemma_24_check(backend.as_ref(), &mu, &lambdas, &opts)?;
    let mut out = Outcome::default();
    out.json("lemma24.json", &rep);
    out.checks.push(Check {
        passed: rep.passed,
        ..Check::slack("bound", rep.min_margin, format!("bound {} over {} points", rep.bound, rep.rows.len()))
    });
    out.checks.push(Check {
        passed: rep.max_identity_residual <= identity_tol,
        ..Check::slack(
            "identity",
            identity_tol - rep.max_identity_residual,
            format!("max identity residual {:e}", rep.max_identity_residual),
        )
    });
    Ok(out)
}

fn run_lemma27(t: &Lemma27Task, base: &Path, seed: u64) -> Result<Outcome, RunError> {
    let backend = t.backend.build()?;
    let phi = t.distribution.load(base)?;
    let lambdas = t.lambdas.values(seed)?;
    let opts = Lemma27Options { u: positive(t.u, "u")?, tol: positive(t.tol, "tol")? };
    let identity_tol = positive(t.identity_tol, "identity_tol")?;
    let rep = lemma_27_check(backend.as_ref(), &phi, &lambdas, &opts)?;
    let mut out = Outcome::default();
    out.json("lemma27.json", &rep);
    out.checks.push(Check {
        passed: rep.passed,
        ..Check::slack("bound", rep.min_margin, format!("order {} over {} points", rep.order, rep.rows.len()))
    });
    out.checks.push(Check {
        passed: rep.max_identity_residual <= identity_tol,
        ..Check::slack(
            "identity",
            identity_tol - rep.max_identity_residual,
            format!("max identity residual {:e}", rep.max_identity_residual),
        )
    });
    Ok(out)
}

fn run_resolvent(t: &ResolventTask, seed: u64) -> Result<Outcome, RunError> {
    let backend = t.backend.build()?;
    let pairs = t.pair_values(seed)?;
    let rep = resolvent_check(backend.as_ref(), &pairs, positive(t.tol, "tol")?)?;
    let mut out = Outcome::default();
    out.json("resolvent.json", &rep);
    out.checks.push(Check {
        passed: rep.max_identity_residual <= rep.tol,
        ..Check::slack(
            "resolvent_identity",
            rep.tol - rep.max_identity_residual,
            format!("{} pairs, max residual {:e}", rep.rows.len(), rep.max_identity_residual),
        )
    });
    if let Some(g) = rep.max_generator_residual {
        out.checks.push(Check {
            passed: g <= rep.tol,
            ..Check::slack("generator_identity", rep.tol - g, format!("max residual {g:e}"))
        });
    }
    Ok(out)
}

fn run_idempotents(t: &IdempotentsTask, base: &Path) -> Result<Outcome, RunError> {
    let backend = t.backend.build()?;
    let mu = t.measure.load(base)?;
    let u = positive(t.u, "u")?;
    let tol = positive(t.tol, "tol")?;
    validate_grid(
        &{
            let mut ts = t.t_grid.clone();
            ts.sort_by(f64::total_cmp);
            ts
        },
        "t_grid",
    )?;
    let cs = character_set(backend.as_ref())?;
    let criterion = criterion_check(&cs, &mu, &[u])?.remove(0);
    let chain = build_idempotents(&cs, &t.m_list);
    let chain_check = chain.check();
    let generators = bounded_generator_check(backend.as_ref(), &chain, &t.t_grid);

    let mut out = Outcome::default();
    let mut csv = String::from("m,t,gap,closed_form_error\n");
    for g in &generators {
        for &(time, gap) in &g.gaps {
            writeln!(csv, "{},{time:e},{gap:e},{:e}", g.m, g.closed_form_error).expect("write to string");
        }
    }
    out.file("generators.csv", csv);
    out.json(
        "idempotents.json",
        &json!({
            "criterion": criterion,
            "m_list": chain.m_list,
            "chain_check": chain_check,
            "covered_indices": chain.covered_indices,
            "generators": generators,
        }),
    );
    out.checks.push(Check {
        passed: criterion.satisfied,
        ..Check::slack(
            "criterion",
            criterion.margin,
            format!("rho {:e} against sup {:e}", criterion.rho, criterion.sup),
        )
    });
    out.checks.push(Check::flag("chain_exact", chain_check.all(), format!("{chain_check:?}")));
    let worst = generators.iter().map(|g| g.closed_form_error).fold(0.0, f64::max);
    out.checks.push(Check {
        passed: worst <= tol,
        ..Check::slack("generator_closed_form", tol - worst, format!("max error {worst:e}"))
    });

    if let Some(m) = t.certificate_m {
        match separation_certificate(&cs, &mu, u, m) {
            Ok(cert) => {
                out.json("certificate.json", &cert);
                out.file("certificate_vertices.csv", vertices_csv(&cert.vertices));
                out.file("certificate.dat", plot_data(cert.vertices.iter().map(|z| (z.re, z.im))));
                let inside = cert.lambdas.iter().filter(|l| l.in_slice).count();
                out.checks.push(Check::flag(
                    "certificate",
                    cert.passed,
                    format!("radius {:e} > R_m {:e}, {inside} characters enclosed", cert.radius, cert.r_m),
                ));
            }
            Err(SpectralError::CertificateFailed { point, reason }) => {
                out.checks.push(Check::flag("certificate", false, format!("fails at {point}: {reason}")));
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(out)
}

fn run_sharpness(t: &SharpnessTask, base: &Path) -> Result<Outcome, RunError> {
    let mu = t.measure.load(base)?;
    let tol = positive(t.tol, "tol")?;
    if t.n_list.is_empty() || t.n_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(ConfigError::Invalid("n_list must be nonempty and strictly increasing".into()).into());
    }
    let mut us = t.u_list.clone();
    us.sort_by(f64::total_cmp);
    validate_grid(&us, "u_list")?;
    let reports = t.n_list.iter().map(|&n| sharpness_demo(n, &mu, &t.u_list)).collect::<Result<Vec<_>, _>>()?;
    let last = reports.last().expect("nonempty n_list");
    let mut out = Outcome::default();
    out.file("sharpness.csv", sharpness_csv(&reports));
    out.json("sharpness.json", &reports);
    out.file("sharpness.dat", plot_data(last.rows.iter().map(|r| (r.u, r.gap))));
    let worst = last.rows.iter().map(|r| r.gap).fold(0.0, f64::max);
    out.checks.push(Check {
        passed: worst <= tol,
        ..Check::slack("gap_at_largest_n", tol - worst, format!("n = {}, max gap {worst:e}", last.n))
    });
    let monotone = (0..t.u_list.len()).all(|i| reports.windows(2).all(|w| w[1].rows[i].gap <= w[0].rows[i].gap));
    out.checks.push(Check::flag("gap_monotone_in_n", monotone, format!("over n = {:?}", t.n_list)));
    Ok(out)
}
