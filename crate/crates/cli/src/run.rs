//! Job execution: every grid point is solved independently on a bounded
//! pool and collected back in row-major order.

use anyhow::Context;
use num_complex::Complex64;
use rayon::prelude::*;
use spinsync::analytics::{
    blockade_width, blockade_width_numeric, locate_all, m1ab_blockade_ratio, LocusOptions, LocusTarget,
};
use spinsync::liouvillian::{build_liouvillian, steady_state, solve_steady_state};
use spinsync::measures::{moments, s1, s2_joint, s2_relative, s3_ab_bc, site_label, uniform_angles, MomentRecord};
use spinsync::perturbation::{extract_coefficients, perturb_expand, ExpansionTemplate};
use spinsync::SystemConfig;

use crate::config::{JobSpec, LocusKind, Mode};
use crate::quantity::{chain_pairs, EntropyBase, Quantity};

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    /// Per-row diagnostics, written as a trailing `error` column; empty text means success.
    pub errors: Option<Vec<String>>,
}

impl Table {
    fn new(columns: Vec<String>) -> Self {
        Self { columns, rows: Vec::new(), errors: None }
    }

    fn with_errors(columns: Vec<String>, rows: Vec<(Vec<f64>, String)>) -> Self {
        let (rows, errors) = rows.into_iter().unzip();
        Self { columns, rows, errors: Some(errors) }
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct JobOutput {
    pub main: Table,
    /// Two-angle distribution of `dist` jobs.
    pub joint: Option<Table>,
}

fn output_columns(outputs: &[Quantity]) -> Vec<String> {
    outputs.iter().flat_map(|q| q.columns()).collect()
}

/// Solves one configuration and evaluates every output; failures become NaN plus a message.
pub fn evaluate_point(config: &SystemConfig, outputs: &[Quantity], base: EntropyBase) -> (Vec<f64>, String) {
    let width: usize = outputs.iter().map(|q| q.columns().len()).sum();
    let solved = build_liouvillian(config).and_then(|l| steady_state(&l).map(|rho| (l, rho)));
    let (l, rho) = match solved {
        Ok(s) => s,
        Err(e) => return (vec![f64::NAN; width], e.to_string()),
    };
    let mut values = Vec::with_capacity(width);
    let mut errors = Vec::new();
    for q in outputs {
        match q.evaluate(&rho, &l, base) {
            Ok(v) => values.extend(v),
            Err(m) => {
                values.extend(std::iter::repeat(f64::NAN).take(q.columns().len()));
                errors.push(m);
            }
        }
    }
    (values, errors.join("; "))
}

fn pool(workers: usize) -> anyhow::Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .context("cannot start the worker pool")
}

/// Runs the job and returns its tables without touching the filesystem.
pub fn execute(spec: &JobSpec) -> anyhow::Result<JobOutput> {
    spec.validate()?;
    // worker threads own all the parallelism
    faer::set_global_parallelism(faer::Par::Seq);
    let pool = pool(spec.workers)?;
    pool.install(|| match spec.mode {
        Mode::Steady => Ok(JobOutput { main: steady(spec), joint: None }),
        Mode::Sweep2d | Mode::Entangle => Ok(JobOutput { main: sweep(spec), joint: None }),
        Mode::Dist => dist(spec),
        Mode::Locus => Ok(JobOutput { main: locus(spec), joint: None }),
        Mode::Perturb => Ok(JobOutput { main: perturb(spec)?, joint: None }),
    })
}

fn steady(spec: &JobSpec) -> Table {
    let outputs = spec.effective_outputs();
    let row = evaluate_point(&spec.system, &outputs, spec.entropy_base);
    Table::with_errors(output_columns(&outputs), vec![row])
}

fn sweep(spec: &JobSpec) -> Table {
    let outputs = spec.effective_outputs();
    let (xa, ya) = (&spec.grid.x, &spec.grid.y);
    let points: Vec<(f64, f64)> = xa
        .values()
        .into_iter()
        .flat_map(|x| ya.values().into_iter().map(move |y| (x, y)))
        .collect();
    let rows = points
        .par_iter()
        .map(|&(x, y)| {
            let mut config = spec.system.clone();
            xa.apply(&mut config, x);
            ya.apply(&mut config, y);
            let (values, err) = evaluate_point(&config, &outputs, spec.entropy_base);
            let mut row = vec![x, y];
            row.extend(values);
            (row, err)
        })
        .collect();
    let mut columns = vec![xa.label(), ya.label()];
    columns.extend(output_columns(&outputs));
    Table::with_errors(columns, rows)
}

fn pair_name(i: usize, j: usize) -> String {
    format!("{}{}", site_label(i), site_label(j))
}

fn dist(spec: &JobSpec) -> anyhow::Result<JobOutput> {
    let rho = solve_steady_state(&spec.system)?;
    let n = rho.n_spins();
    let phis = uniform_angles(spec.dist.samples);
    let mut columns = vec!["phi".to_string()];
    let mut series = Vec::new();
    for site in 0..n {
        columns.push(format!("S1_{}", site_label(site)));
        series.push(s1(&rho, site, &phis)?.values);
    }
    for (i, j) in chain_pairs(n) {
        columns.push(format!("S2_{}", pair_name(i, j)));
        series.push(s2_relative(&rho, i, j, &phis)?.values);
    }
    let mut main = Table::new(columns);
    for (k, &phi) in phis.iter().enumerate() {
        let mut row = vec![phi];
        row.extend(series.iter().map(|s| s[k]));
        main.rows.push(row);
    }

    let joint = match (spec.dist.joint, n) {
        (true, 2) => Some((vec!["phi_A", "phi_B", "S2_AB"], s2_joint(&rho, 0, 1, &phis, &phis)?)),
        (true, 3) => Some((vec!["phi_AB", "phi_BC", "S3"], s3_ab_bc(&rho, &phis, &phis)?)),
        _ => None,
    };
    let joint = joint.map(|(columns, d)| {
        let mut t = Table::new(columns.into_iter().map(String::from).collect());
        let (a, b) = (&d.axes[0], &d.axes[1]);
        for (k, v) in d.values.iter().enumerate() {
            t.rows.push(vec![a[k / b.len()], b[k % b.len()], *v]);
        }
        t
    });
    Ok(JobOutput { main, joint })
}

fn locus(spec: &JobSpec) -> Table {
    let l = &spec.locus;
    let opts = LocusOptions {
        omega_a: l.omega,
        units: l.units.into(),
        bracket: l.bracket,
        scan: (l.scan_min, l.scan_max, l.scan_count),
        tolerance: l.tolerance,
    };
    let nan = f64::NAN;
    let per_g: Vec<Vec<(Vec<f64>, String)>> = l
        .g
        .par_iter()
        .map(|&g| match l.target {
            LocusKind::Width => {
                let (fl, fu) = blockade_width(g, 1.0);
                vec![match blockade_width_numeric(g, l.solver.into(), l.omega) {
                    Ok((lo, hi)) => (vec![g, lo, hi, fl, fu], String::new()),
                    Err(e) => (vec![g, nan, nan, fl, fu], e.to_string()),
                }]
            }
            LocusKind::M1A | LocusKind::M1AB => {
                let target = if l.target == LocusKind::M1A { LocusTarget::M1A } else { LocusTarget::M1AB };
                match locate_all(target, g, l.solver.into(), &opts) {
                    Ok(roots) if roots.is_empty() => vec![(vec![g, nan, nan, nan, nan], "no root in the scanned ratios".into())],
                    Ok(roots) => roots
                        .iter()
                        .enumerate()
                        .map(|(k, &r)| {
                            let formula = match target {
                                // roots come in pairs r, 1/r under exchange of the rates
                                LocusTarget::M1AB if r < 1.0 => m1ab_blockade_ratio(g, 1.0),
                                LocusTarget::M1AB => 1.0 / m1ab_blockade_ratio(g, 1.0),
                                LocusTarget::M1A => nan,
                            };
                            (vec![g, k as f64, r, formula, (r - formula) / formula], String::new())
                        })
                        .collect(),
                    Err(e) => vec![(vec![g, nan, nan, nan, nan], e.to_string())],
                }
            }
        })
        .collect();
    let columns: &[&str] = match l.target {
        LocusKind::Width => &["g", "lower", "upper", "formula_lower", "formula_upper"],
        _ => &["g", "root_index", "ratio", "formula", "rel_dev"],
    };
    Table::with_errors(columns.iter().map(|s| s.to_string()).collect(), per_g.into_iter().flatten().collect())
}

fn complex_columns(prefix: &str) -> Vec<String> {
    ["re", "im", "abs", "phase"].iter().map(|s| format!("{prefix}_{s}")).collect()
}

fn complex_cells(target: spinsync::measures::MomentTarget, order: u8, value: Complex64) -> [f64; 4] {
    let phase = MomentRecord { target, order, value }.locking_phase();
    [value.re, value.im, value.norm(), phase]
}

fn perturb(spec: &JobSpec) -> anyhow::Result<Table> {
    let p = &spec.perturb;
    if p.monomials.is_empty() {
        let series = perturb_expand(&spec.system, p.max_order)?;
        let exact = solve_steady_state(&spec.system)
            .and_then(|rho| moments(&rho, p.target, p.moment_order))
            .ok();
        let mut columns = vec!["order".to_string()];
        columns.extend(complex_columns("term"));
        columns.extend(complex_columns("sum"));
        columns.extend(["deviation", "residual", "parity_defect"].map(String::from));
        let mut t = Table::new(columns);
        for n in 0..=p.max_order {
            let term = series.moment_at_order(p.target, p.moment_order, n)?;
            let sum = series.moment_partial(p.target, p.moment_order, n)?;
            let deviation = exact.map_or(f64::NAN, |e| (sum - e.value).norm());
            let mut row = vec![n as f64];
            row.extend([term, sum].into_iter().flat_map(|z| complex_cells(p.target, p.moment_order, z)));
            row.extend([deviation, series.residuals[n], series.parity_defect(n)]);
            t.rows.push(row);
        }
        return Ok(t);
    }
    let rates = spec.system.dissipative_part();
    let mut template = ExpansionTemplate::drive_first_site(rates);
    if let Some(d) = &p.drive {
        template.drive = d.clone();
    }
    if let Some(c) = &p.coupling {
        template.coupling = c.clone();
    }
    let fit = extract_coefficients(&template, p.target, p.moment_order, &p.monomials)?;
    let mut t = Table::new(["a", "b", "coef_re", "coef_im", "condition"].map(String::from).to_vec());
    for &(a, b) in &p.monomials {
        let c = fit.get(a, b).context("missing coefficient")?;
        t.rows.push(vec![a as f64, b as f64, c.re, c.im, fit.conditions[&(a + b)]]);
    }
    Ok(t)
}
