use guespec::charpoly::{expected_charpoly, ratio_kernel, second_moment, ComplexSpectralPoint};
use guespec::ensemble::dump::{write_binary, write_csv};
use guespec::ensemble::ou::stationary_variances;
use guespec::ensemble::{
    mc_charpoly, mc_counting, ou_relaxation, sample_spectrum, CharpolyMoment, HermitianMatrix, SpectrumSample,
};
use guespec::kernels::{fit_scale, hole_series_small_s, poisson_baseline, PoissonStat};
use guespec::{
    airy::edge_density, hole_probability, number_variance_asymptotic, number_variance_exact, semicircle,
    sine_kernel, FiniteNKernel, HoleKernel,
};
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Map, Value};
use std::f64::consts::PI;

use crate::table::{Cell, Table};
use crate::{Cli, CliError, Command, Format, HoleKernelArg, McArgs, RunConfig, RunOutput};

type Res<T> = Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn base_config(cli: &Cli, command: &'static str) -> RunConfig {
    RunConfig {
        command,
        n: None,
        seed: cli.global.seed,
        grid: None,
        samples: None,
        output: cli.global.output.as_ref().map(|p| p.display().to_string()),
        format: cli.global.format,
        options: Map::new(),
    }
}

fn render(cfg: &RunConfig, table: &Table) -> RunOutput {
    let header = serde_json::to_value(cfg).expect("config always serializes");
    let text = match cfg.format {
        Format::Csv => table.to_csv(&header),
        Format::Json => table.to_json(&header),
    };
    RunOutput { bytes: text.into_bytes() }
}

pub fn execute(cli: &Cli) -> Res<RunOutput> {
    match &cli.command {
        Command::Density { n, grid } => {
            let mut cfg = base_config(cli, "density");
            cfg.n = Some(*n);
            cfg.grid = Some(*grid);
            let k = FiniteNKernel::<f64>::new(*n)?;
            let mut t = Table::new(&["x", "finite_n_density", "semicircle"]);
            for x in grid.points() {
                t.push(vec![x.into(), k.mean_density(x, true)?.into(), semicircle(x).into()]);
            }
            Ok(render(&cfg, &t))
        }
        Command::Edge { n, xi } => {
            let mut cfg = base_config(cli, "edge");
            cfg.n = Some(*n);
            cfg.grid = Some(*xi);
            let k = FiniteNKernel::<f64>::new(*n)?;
            let pts = xi.points();
            let finite: Vec<f64> = pts.iter().map(|&x| k.edge_rescaled(x, x)).collect::<Result<_, _>>()?;
            let airy: Vec<f64> = pts.iter().map(|&x| edge_density(x)).collect::<Result<_, _>>()?;
            let (scale, _) = fit_scale(&finite, &airy);
            let mut t = Table::new(&["xi", "rescaled_finite_n", "airy_edge_density", "fitted_scale"]);
            for i in 0..pts.len() {
                t.push(vec![pts[i].into(), finite[i].into(), airy[i].into(), scale.into()]);
            }
            Ok(render(&cfg, &t))
        }
        Command::Kernel { n, r } => {
            let mut cfg = base_config(cli, "kernel");
            cfg.n = Some(*n);
            cfg.grid = Some(*r);
            let k = FiniteNKernel::<f64>::new(*n)?;
            let mut t = Table::new(&["r", "bulk_scaled_kernel", "sine_kernel"]);
            for r in r.points() {
                t.push(vec![r.into(), k.bulk_scaling_check(r)?.into(), sine_kernel(r).into()]);
            }
            Ok(render(&cfg, &t))
        }
        Command::Numvar { s, mc } => numvar(cli, *s, *mc),
        Command::Hole { s, kernel, mc } => hole(cli, *s, *kernel, *mc),
        Command::Charpoly { n, mu, nu, mc_samples, sampler } => {
            let mut cfg = base_config(cli, "charpoly");
            cfg.n = Some(*n);
            cfg.samples = Some(*mc_samples);
            let show = |v: &[Complex64]| Value::from(v.iter().map(|z| z.to_string()).collect::<Vec<_>>());
            cfg.options.insert("mu".into(), show(mu));
            cfg.options.insert("nu".into(), show(nu));
            cfg.options.insert("sampler".into(), json!(sampler));
            charpoly(cfg, *n, mu, nu, *mc_samples, (*sampler).into(), cli.global.seed)
        }
        Command::Sample { n, count, binary, sampler } => {
            let mut cfg = base_config(cli, "sample");
            cfg.n = Some(*n);
            cfg.samples = Some(*count);
            cfg.options.insert("binary".into(), json!(binary));
            cfg.options.insert("sampler".into(), json!(sampler));
            if *binary && cli.global.output.is_none() {
                return Err(usage("--binary needs --output"));
            }
            if *n == 0 {
                return Err(usage("--n must be at least 1"));
            }
            let seed = cli.global.seed;
            let samples: Vec<SpectrumSample<f64>> = (0..*count as u64)
                .into_par_iter()
                .map(|i| {
                    sample_spectrum(*n, seed, i, (*sampler).into())
                        .map(|eigenvalues| SpectrumSample { eigenvalues, source_seed: seed })
                })
                .collect::<Result<_, _>>()?;
            if *binary {
                let mut bytes = Vec::new();
                write_binary(&mut bytes, *n, &samples)?;
                return Ok(RunOutput { bytes });
            }
            match cfg.format {
                Format::Csv => {
                    let header = serde_json::to_value(&cfg).expect("config always serializes");
                    let mut bytes = format!("# {header}\n").into_bytes();
                    write_csv(&mut bytes, *n, &samples)?;
                    Ok(RunOutput { bytes })
                }
                Format::Json => {
                    let cols: Vec<String> = (1..=*n).map(|i| format!("lambda_{i}")).collect();
                    let mut t = Table { columns: cols, rows: Vec::new() };
                    for s in &samples {
                        t.push(s.eigenvalues.iter().map(|&x| x.into()).collect());
                    }
                    Ok(render(&cfg, &t))
                }
            }
        }
        Command::Ou { n, t_max, steps, paths, start_scale } => {
            let mut cfg = base_config(cli, "ou");
            cfg.n = Some(*n);
            cfg.samples = Some(*paths);
            cfg.options.insert("t_max".into(), json!(t_max));
            cfg.options.insert("steps".into(), json!(steps));
            cfg.options.insert("start_scale".into(), json!(start_scale));
            if *n == 0 {
                return Err(usage("--n must be at least 1"));
            }
            let diag: Vec<f64> = (0..*n)
                .map(|i| if *n == 1 { *start_scale } else { start_scale * (1.0 - 2.0 * i as f64 / (*n - 1) as f64) })
                .collect();
            let start = HermitianMatrix::diagonal(&diag)?;
            let snaps = ou_relaxation(&start, *t_max, *steps, *paths, cli.global.seed)?;
            let target = stationary_variances::<f64>(*n);
            let mut t = Table::new(&["t", "max_mean_deviation", "max_second_moment_deviation", "max_mean_z", "max_second_moment_z"]);
            for s in &snaps {
                let dm = s.mean.iter().fold(0.0f64, |a, m| a.max(m.abs()));
                let dv = s.second_moment.iter().zip(&target).fold(0.0f64, |a, (m, v)| a.max((m - v).abs()));
                t.push(vec![s.time.into(), dm.into(), dv.into(), s.max_mean_z().into(), s.max_second_moment_z().into()]);
            }
            Ok(render(&cfg, &t))
        }
    }
}

fn mc_config(cfg: &mut RunConfig, mc: McArgs) {
    cfg.options.insert("mc".into(), json!(mc.mc));
    if mc.mc {
        cfg.n = Some(mc.n);
        cfg.samples = Some(mc.samples);
    }
}

fn numvar(cli: &Cli, s: crate::Grid, mc: McArgs) -> Res<RunOutput> {
    let mut cfg = base_config(cli, "numvar");
    cfg.grid = Some(s);
    mc_config(&mut cfg, mc);
    let mut cols = vec!["s", "exact", "asymptotic", "poisson"];
    if mc.mc {
        cols.extend(["mc", "mc_stderr"]);
    }
    let mut t = Table::new(&cols);
    for s in s.points() {
        let asym = if s > 0.0 { Some(number_variance_asymptotic(s)?) } else { None };
        let mut row = vec![
            s.into(),
            number_variance_exact(s)?.into(),
            asym.into(),
            poisson_baseline(PoissonStat::NumberVariance, s)?.into(),
        ];
        if mc.mc {
            let (v, e) = if s > 0.0 {
                let st = mc_counting::<f64>(mc.n, mc.samples, s, cli.global.seed)?;
                (st.variance, st.variance_stderr)
            } else {
                (0.0, 0.0)
            };
            row.extend([Cell::from(v), Cell::from(e)]);
        }
        t.push(row);
    }
    Ok(render(&cfg, &t))
}

fn hole(cli: &Cli, s: crate::Grid, kernel: HoleKernelArg, mc: McArgs) -> Res<RunOutput> {
    let mut cfg = base_config(cli, "hole");
    cfg.grid = Some(s);
    cfg.options.insert("kernel".into(), json!(kernel));
    mc_config(&mut cfg, mc);
    let finite = match kernel {
        HoleKernelArg::FiniteN => {
            cfg.n = Some(mc.n);
            Some(FiniteNKernel::<f64>::new(mc.n)?)
        }
        HoleKernelArg::Sine => None,
    };
    let mut cols = vec!["s", "fredholm"];
    if finite.is_none() {
        cols.push("series_trunc");
    }
    if mc.mc {
        cols.extend(["mc", "mc_stderr"]);
    }
    cols.push("poisson");
    let mut t = Table::new(&cols);
    for s in s.points() {
        if s < 0.0 {
            return Err(usage("hole lengths must be non-negative"));
        }
        let mut row = vec![Cell::from(s)];
        match &finite {
            // The window holds s mean spacings at the centre, where the spacing is pi / N.
            Some(k) => row.push(hole_probability(HoleKernel::FiniteN(k), s * PI / k.size() as f64)?.into()),
            None => {
                row.push(hole_probability::<f64>(HoleKernel::SineUnfolded, s)?.into());
                row.push(hole_series_small_s(s).into());
            }
        }
        if mc.mc {
            let (g, e) = if s > 0.0 {
                let st = mc_counting::<f64>(mc.n, mc.samples, s, cli.global.seed)?;
                (st.gap_fraction, st.gap_stderr)
            } else {
                (1.0, 0.0)
            };
            row.extend([Cell::from(g), Cell::from(e)]);
        }
        row.push(poisson_baseline(PoissonStat::Hole, s)?.into());
        t.push(row);
    }
    Ok(render(&cfg, &t))
}

fn charpoly(
    cfg: RunConfig,
    n: usize,
    mu: &[Complex64],
    nu: &[Complex64],
    mc_samples: usize,
    sampler: guespec::ensemble::Sampler,
    seed: u64,
) -> Res<RunOutput> {
    if mu.is_empty() {
        return Err(usage("--mu needs at least one point"));
    }
    // (label, mu, nu, analytic, moment)
    let mut items: Vec<(&str, Complex64, Option<Complex64>, Complex64, CharpolyMoment<f64>)> = Vec::new();
    for &m in mu {
        items.push(("mean", m, None, expected_charpoly(m, n)?, CharpolyMoment::power(m, 1)));
        if m.im == 0.0 {
            let v = Complex64::new(second_moment(m.re, n)?, 0.0);
            items.push(("second", m, None, v, CharpolyMoment::power(m, 2)));
        }
        for &v in nu {
            let r = ratio_kernel(m, ComplexSpectralPoint::new(v)?, n)?.value;
            items.push(("ratio", m, Some(v), r, CharpolyMoment::ratio(m, v)));
        }
    }
    let estimates = if mc_samples > 0 {
        let moments: Vec<_> = items.iter().map(|i| i.4.clone()).collect();
        Some(mc_charpoly(n, mc_samples, &moments, seed, sampler)?)
    } else {
        None
    };
    let mut cols = vec!["moment", "mu", "nu", "analytic_re", "analytic_im"];
    if estimates.is_some() {
        cols.extend(["mc_re", "mc_im", "mc_stderr_re", "mc_stderr_im"]);
    }
    let mut t = Table::new(&cols);
    for (i, (label, m, v, a, _)) in items.iter().enumerate() {
        let mut row = vec![
            Cell::from(*label),
            Cell::Text(m.to_string()),
            v.map_or(Cell::Empty, |v| Cell::Text(v.to_string())),
            a.re.into(),
            a.im.into(),
        ];
        if let Some(est) = &estimates {
            let e = &est[i];
            row.extend([e.mean.re, e.mean.im, e.stderr.re, e.stderr.im].map(Cell::from));
        }
        t.push(row);
    }
    Ok(render(&cfg, &t))
}
