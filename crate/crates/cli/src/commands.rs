use std::io::Write;

use anyhow::{Context, Result};
use rayon::prelude::*;
use serde::Serialize;

use nhimpurity::acceptance::{Suite, CRITERIA};
use nhimpurity::analysis::{
    c_eff_complex, c_eff_continuation, c_eff_unitary, entropy_curve, fit_curve, phase_point, FormulaPrediction,
};
use nhimpurity::correlation::assemble_correlation;
use nhimpurity::entanglement::entanglement;
use nhimpurity::spectral::{bound_states, build_hamiltonian, solve_biorthogonal, ModelParams};

use crate::config::{Command, RunConfig};
use crate::output::{sig12, sig12_opt, Sink};

/// Parameters echoed on every row.
#[derive(Serialize)]
struct Echo {
    t: f64,
    mu: f64,
    #[serde(rename = "N")]
    n: usize,
    partition: String,
    #[serde(rename = "L0")]
    l0: usize,
    route: String,
    /// Subsystem sizes joined by ';', for commands that use a window.
    window: Option<String>,
}

impl Echo {
    fn new(cfg: &RunConfig, window: Option<&[usize]>) -> Self {
        Self {
            t: sig12(cfg.params.t),
            mu: sig12(cfg.params.mu),
            n: cfg.params.n,
            partition: cfg.kind.to_string(),
            l0: cfg.l0,
            route: cfg.route.to_string(),
            window: window.map(|w| w.iter().map(usize::to_string).collect::<Vec<_>>().join(";")),
        }
    }
}

#[derive(Serialize)]
struct SpectrumRow {
    #[serde(rename = "t_R")]
    t_r: f64,
    #[serde(rename = "t_L")]
    t_l: f64,
    kind: &'static str,
    index: usize,
    re_energy: f64,
    im_energy: f64,
    occupied: bool,
    #[serde(flatten)]
    echo: Echo,
}

#[derive(Serialize)]
struct CorrRow {
    #[serde(rename = "t_R")]
    t_r: f64,
    #[serde(rename = "t_L")]
    t_l: f64,
    l: usize,
    m: usize,
    re_corr: f64,
    im_corr: f64,
    #[serde(flatten)]
    echo: Echo,
}

#[derive(Serialize)]
struct EeRow {
    #[serde(rename = "t_R")]
    t_r: f64,
    #[serde(rename = "t_L")]
    t_l: f64,
    #[serde(rename = "L_A")]
    la: usize,
    re_entropy: f64,
    im_entropy: f64,
    norm: f64,
    xi_min_re: f64,
    xi_max_re: f64,
    xi_outside: usize,
    branch: &'static str,
    #[serde(flatten)]
    echo: Echo,
}

#[derive(Serialize)]
struct FitRow {
    #[serde(rename = "t_R")]
    t_r: f64,
    #[serde(rename = "t_L")]
    t_l: f64,
    re_ceff: f64,
    im_ceff: f64,
    re_g: f64,
    im_g: f64,
    rms_residual: f64,
    re_unitary: Option<f64>,
    re_complex: Option<f64>,
    im_complex: Option<f64>,
    re_continuation: Option<f64>,
    im_continuation: Option<f64>,
    #[serde(flatten)]
    echo: Echo,
}

#[derive(Serialize)]
struct SweepRow {
    #[serde(rename = "t_R")]
    t_r: f64,
    #[serde(rename = "t_L")]
    t_l: f64,
    re_ceff: Option<f64>,
    im_ceff: Option<f64>,
    norm: f64,
    phase: &'static str,
    re_formula: Option<f64>,
    im_formula: Option<f64>,
    #[serde(flatten)]
    echo: Echo,
}

#[derive(Serialize)]
struct VerifyRow {
    criterion: &'static str,
    name: &'static str,
    passed: bool,
    detail: String,
}

/// What a command produced, for the exit status.
pub enum Completion {
    Done,
    VerifyFailed(usize),
}

pub fn run<W: Write>(cfg: &RunConfig, sink: &mut Sink<W>) -> Result<Completion> {
    match cfg.command {
        Command::Spectrum => spectrum(cfg, sink),
        Command::Corr => corr(cfg, sink),
        Command::Ee => ee(cfg, sink),
        Command::Fit => fit(cfg, sink),
        Command::Sweep => sweep(cfg, sink),
        Command::Verify => verify(sink),
    }
}

fn spectrum<W: Write>(cfg: &RunConfig, sink: &mut Sink<W>) -> Result<Completion> {
    let p = &cfg.params;
    let h = build_hamiltonian(p).context("spectrum: build_hamiltonian")?;
    let eig = solve_biorthogonal(h.as_ref()).context("spectrum: solve_biorthogonal")?;
    let bound = bound_states(p).context("spectrum: bound_states")?;
    let rows = eig
        .energies
        .iter()
        .zip(&eig.occupied)
        .map(|(e, &occ)| ("eigenvalue", *e, occ))
        .chain(bound.iter().map(|b| ("bound", b.energy, b.occupied)));
    for (index, (kind, e, occupied)) in rows.enumerate() {
        let row = SpectrumRow {
            t_r: sig12(p.t_r),
            t_l: sig12(p.t_l),
            kind,
            index,
            re_energy: sig12(e.re),
            im_energy: sig12(e.im),
            occupied,
            echo: Echo::new(cfg, None),
        };
        sink.write(&row)?;
    }
    Ok(Completion::Done)
}

fn single_size(cfg: &RunConfig) -> usize {
    cfg.la_list.as_ref().and_then(|l| l.last().copied()).unwrap_or(64)
}

fn corr<W: Write>(cfg: &RunConfig, sink: &mut Sink<W>) -> Result<Completion> {
    let part = cfg.partition(single_size(cfg));
    let c = assemble_correlation(&cfg.params, &part, cfg.route).context("corr: assemble_correlation")?;
    for l in c.offset..=c.last_site() {
        for m in c.offset..=c.last_site() {
            let v = c.at(l, m);
            let row = CorrRow {
                t_r: sig12(cfg.params.t_r),
                t_l: sig12(cfg.params.t_l),
                l,
                m,
                re_corr: sig12(v.re),
                im_corr: sig12(v.im),
                echo: Echo::new(cfg, Some(&[part.la])),
            };
            sink.write(&row)?;
        }
    }
    Ok(Completion::Done)
}

fn ee<W: Write>(cfg: &RunConfig, sink: &mut Sink<W>) -> Result<Completion> {
    let window = cfg.window();
    let largest = window.iter().copied().max().context("ee: empty --LA-list")?;
    let full = assemble_correlation(&cfg.params, &cfg.partition(largest), cfg.route).context("ee: assemble_correlation")?;
    for &la in &window {
        let res = entanglement(&full, &cfg.partition(la)).context("ee: entanglement")?;
        let row = EeRow {
            t_r: sig12(cfg.params.t_r),
            t_l: sig12(cfg.params.t_l),
            la,
            re_entropy: sig12(res.entropy.re),
            im_entropy: sig12(res.entropy.im),
            norm: sig12(res.norm),
            xi_min_re: sig12(res.xi_min_re()),
            xi_max_re: sig12(res.xi_max_re()),
            xi_outside: res.out_of_range(1e-8),
            branch: res.branch,
            echo: Echo::new(cfg, Some(&window)),
        };
        sink.write(&row)?;
    }
    Ok(Completion::Done)
}

fn fit<W: Write>(cfg: &RunConfig, sink: &mut Sink<W>) -> Result<Completion> {
    let settings = cfg.fit_settings();
    let curve = entropy_curve(&cfg.params, &settings).context("fit: entropy_curve")?;
    let res = fit_curve(&curve).context("fit: fit_log_scaling")?;
    let (t_r, t_l) = (cfg.params.t_r, cfg.params.t_l);
    let re = |p: nhimpurity::Result<FormulaPrediction>| p.ok().map(|p| sig12(p.c_eff.re));
    let im = |p: nhimpurity::Result<FormulaPrediction>| p.ok().map(|p| sig12(p.c_eff.im));
    let row = FitRow {
        t_r: sig12(t_r),
        t_l: sig12(t_l),
        re_ceff: sig12(res.c_eff.re),
        im_ceff: sig12(res.c_eff.im),
        re_g: sig12(res.g.re),
        im_g: sig12(res.g.im),
        rms_residual: sig12(res.rms_residual),
        re_unitary: re(c_eff_unitary(t_r, t_l)),
        re_complex: re(c_eff_complex(t_r, t_l)),
        im_complex: im(c_eff_complex(t_r, t_l)),
        re_continuation: re(c_eff_continuation(t_r, t_l)),
        im_continuation: im(c_eff_continuation(t_r, t_l)),
        echo: Echo::new(cfg, Some(&settings.window)),
    };
    sink.write(&row)?;
    Ok(Completion::Done)
}

fn sweep<W: Write>(cfg: &RunConfig, sink: &mut Sink<W>) -> Result<Completion> {
    let settings = cfg.fit_settings();
    let grid: Vec<(f64, f64)> =
        cfg.t_r_values.iter().flat_map(|&r| cfg.t_l_values.iter().map(move |&l| (r, l))).collect();
    let base = ModelParams { t_r: 0.0, t_l: 0.0, ..cfg.params };
    let evaluate = || -> Vec<Result<SweepRow>> {
        grid.par_iter()
            .map(|&(t_r, t_l)| {
                let point = phase_point(t_r, t_l, &base, &settings)
                    .with_context(|| format!("sweep: phase_point at t_R = {t_r}, t_L = {t_l}"))?;
                Ok(SweepRow {
                    t_r: sig12(t_r),
                    t_l: sig12(t_l),
                    re_ceff: sig12_opt(point.c_eff_fit.map(|c| c.re)),
                    im_ceff: sig12_opt(point.c_eff_fit.map(|c| c.im)),
                    norm: sig12(point.norm),
                    phase: point.phase.as_str(),
                    re_formula: sig12_opt(point.c_eff_formula.map(|c| c.re)),
                    im_formula: sig12_opt(point.c_eff_formula.map(|c| c.im)),
                    echo: Echo::new(cfg, Some(&settings.window)),
                })
            })
            .collect()
    };
    let rows = match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n).build()?.install(evaluate),
        None => evaluate(),
    };
    for row in rows {
        sink.write(&row?)?;
    }
    Ok(Completion::Done)
}

fn verify<W: Write>(sink: &mut Sink<W>) -> Result<Completion> {
    let suite = Suite::new();
    let mut failed = 0;
    for id in CRITERIA {
        let outcome = suite.run(id).expect("listed criterion");
        eprintln!("{outcome}");
        failed += usize::from(!outcome.passed);
        sink.write(&VerifyRow { criterion: outcome.id, name: outcome.name, passed: outcome.passed, detail: outcome.detail })?;
    }
    Ok(if failed == 0 { Completion::Done } else { Completion::VerifyFailed(failed) })
}
