use eitkerr::ensemble::{
    detuning_penalty, ensemble_rho_cb_exact, j_curve, optimal_detuning, InhomLine,
};
use eitkerr::lambda3::{
    bandwidth_for_absorption, dispersion_rcb, group_velocity, steady_state3, LambdaParams,
};
use eitkerr::level::{B, C};
use eitkerr::parallel::Execution;
use eitkerr::qnd::{
    distinguishability, q_function, t_scalings, table_group_velocity_reference, CoherenceMode,
    EvolveOptions, MaterialParams, PhaseShiftModel, ProbeState, QGrid, QWindow, TimeModel,
};
use num_complex::Complex64;

use crate::config::Config;
use crate::output::{num, Table};
use crate::sweep::{Axis, SweepSpec};
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Spectrum,
    DispersionMap,
    BandwidthMap,
    Jcurve,
    Scalings,
    Qnd,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::DispersionMap => "dispersion-map",
            Command::BandwidthMap => "bandwidth-map",
            Command::Jcurve => "jcurve",
            Command::Scalings => "scalings",
            Command::Qnd => "qnd",
        }
    }
}

/// The main table plus any side files, each named by a suffix appended to the
/// output path's stem.
#[derive(Clone, Debug, PartialEq)]
pub struct CommandOutput {
    pub primary: String,
    pub extras: Vec<(String, String)>,
}

impl CommandOutput {
    fn single(table: Table) -> Self {
        Self {
            primary: table.render(),
            extras: Vec::new(),
        }
    }
}

pub fn run(cmd: Command, config: &Config, exec: Execution) -> Result<CommandOutput, CliError> {
    match cmd {
        Command::Spectrum => cmd_spectrum(config, exec),
        Command::DispersionMap => cmd_dispersion_map(config, exec),
        Command::BandwidthMap => cmd_bandwidth_map(config, exec),
        Command::Jcurve => cmd_jcurve(config),
        Command::Scalings => cmd_scalings(config),
        Command::Qnd => cmd_qnd(config, exec),
    }
}

fn params_line(config: &Config, prefixes: &[&str]) -> String {
    format!("params: {}", config.describe(prefixes))
}

fn lambda_params(config: &Config) -> Result<LambdaParams, CliError> {
    let p = LambdaParams::new(config.f64("lambda.omega1")?, config.f64("lambda.omega2")?)
        .with_detunings(
            config.f64("lambda.delta")?,
            config.f64("lambda.two_photon")?,
        );
    p.validate()?;
    Ok(p)
}

fn spec(quantity: &str, config: &Config, axes: &[&str]) -> Result<SweepSpec, CliError> {
    let axes = axes
        .iter()
        .map(|name| Ok((name.to_string(), Axis::from_config(config, name)?)))
        .collect::<Result<Vec<_>, CliError>>()?;
    let s = SweepSpec {
        quantity: quantity.into(),
        axes,
        overrides: Vec::new(),
        output: None,
    };
    s.validate()?;
    Ok(s)
}

/// Single-emitter and line-averaged ρ_cb against δ for each mutual detuning.
pub fn cmd_spectrum(config: &Config, exec: Execution) -> Result<CommandOutput, CliError> {
    let base = lambda_params(config)?;
    let deltas = Axis::from_config(config, "spectrum.delta")?.points();
    let mutual = config.f64_list("spectrum.mutual")?;
    if mutual.is_empty() {
        return Err(CliError::Config("spectrum.mutual is empty".into()));
    }
    let ensemble = config.bool("spectrum.ensemble")?;
    let (gamma, nodes) = (config.f64("line.gamma")?, config.count("line.nodes")?);
    let points: Vec<(f64, f64)> = mutual
        .iter()
        .flat_map(|&m| deltas.iter().map(move |&d| (m, d)))
        .collect();
    let rows = exec.try_map(&points, |&(m, d)| -> Result<Vec<f64>, CliError> {
        let p = base.with_detunings(m, d);
        let single = steady_state3(&p)?.element(C, B);
        let mut row = vec![m, d, single.re, single.im];
        if ensemble {
            let line = InhomLine::with_nodes(m, gamma, nodes)?;
            let avg = ensemble_rho_cb_exact(&p, &line)?;
            row.extend([avg.re, avg.im]);
        }
        Ok(row)
    })?;
    let header: &[&str] = if ensemble {
        &[
            "mutual",
            "delta",
            "re_rho_cb",
            "im_rho_cb",
            "re_rho_cb_ensemble",
            "im_rho_cb_ensemble",
        ]
    } else {
        &["mutual", "delta", "re_rho_cb", "im_rho_cb"]
    };
    let mut t = Table::new(header);
    t.comment(params_line(config, &["lambda.", "line.", "spectrum."]));
    for row in rows {
        t.push_nums(&row);
    }
    Ok(CommandOutput::single(t))
}

/// `log10(−R_cb)` over an Ω1 × Ω2 grid, with the Ω1 = √3 Ω2 ridge for each
/// Ω1 alongside.
pub fn cmd_dispersion_map(config: &Config, exec: Execution) -> Result<CommandOutput, CliError> {
    let sweep = spec("dispersion-map", config, &["map.omega1", "map.omega2"])?;
    let grid = sweep.grid();
    let rows = exec.try_map(&grid, |pt| -> Result<Vec<f64>, CliError> {
        let (o1, o2) = (pt[0], pt[1]);
        let r = dispersion_rcb(o1, o2)?;
        let ridge_o2 = o1 / 3f64.sqrt();
        let ridge = dispersion_rcb(o1, ridge_o2)?;
        Ok(vec![o1, o2, r, (-r).log10(), ridge_o2, (-ridge).log10()])
    })?;
    let mut t = Table::new(&[
        "omega1",
        "omega2",
        "rcb",
        "log10_neg_rcb",
        "ridge_omega2",
        "ridge_log10_neg_rcb",
    ]);
    t.comment(params_line(config, &["map."]));
    t.comment("ridge: omega1 = sqrt(3) omega2, rcb = -3 sqrt(3) / (16 omega1)");
    for row in rows {
        t.push_nums(&row);
    }
    Ok(CommandOutput::single(t))
}

/// Largest pulse bandwidth keeping the absorption at `bandwidth.absorption`.
pub fn cmd_bandwidth_map(config: &Config, exec: Execution) -> Result<CommandOutput, CliError> {
    let sweep = spec(
        "bandwidth-map",
        config,
        &["bandwidth.omega1", "bandwidth.omega2"],
    )?;
    let target = config.f64("bandwidth.absorption")?;
    let gamma_sp = config.f64("material.gamma_sp")?;
    let grid = sweep.grid();
    let rows = exec.try_map(&grid, |pt| -> Result<Vec<f64>, CliError> {
        let f = bandwidth_for_absorption(pt[0], pt[1], target)?;
        Ok(vec![pt[0], pt[1], f, f * gamma_sp])
    })?;
    let mut t = Table::new(&["omega1", "omega2", "bandwidth", "bandwidth_si"]);
    t.comment(params_line(config, &["bandwidth.", "material.gamma_sp"]));
    for row in rows {
        t.push_nums(&row);
    }
    Ok(CommandOutput::single(t))
}

/// `J(d)` with the two detuning-penalty readings and the optimum.
pub fn cmd_jcurve(config: &Config) -> Result<CommandOutput, CliError> {
    let d_axis = Axis::from_config(config, "jcurve.d")?;
    let mut t = Table::new(&["d", "j", "penalty_vs_homogeneous", "penalty_vs_optimal"]);
    t.comment(params_line(config, &["jcurve."]));
    let d_star = optimal_detuning();
    t.comment(format!(
        "optimum: d={} j={}",
        num(d_star),
        num(j_curve(d_star))
    ));
    for d in d_axis.points() {
        let p = detuning_penalty(d);
        t.push_nums(&[
            d,
            j_curve(d),
            p.vs_homogeneous_same_detuning,
            p.vs_optimal_detuning,
        ]);
    }
    Ok(CommandOutput::single(t))
}

/// `T_ab`, `T_cd` against `n1`, with the single-signal-photon phase shifts
/// and group velocities of the material at `scalings.kappa`.
pub fn cmd_scalings(config: &Config) -> Result<CommandOutput, CliError> {
    let kappa = config.f64("scalings.kappa")?;
    let m = MaterialParams {
        kappa,
        ..config.material()?
    };
    let model = PhaseShiftModel::new(&m, CoherenceMode::Lossless)?;
    let mut t = Table::new(&[
        "n1",
        "x",
        "t_ab",
        "t_cd",
        "k_ab",
        "k_cd",
        "group_velocity",
        "group_velocity_table",
    ]);
    t.comment(params_line(config, &["scalings.", "material."]));
    for n1 in Axis::from_config(config, "scalings.n1")?.points() {
        let s = t_scalings(kappa, n1);
        t.push_nums(&[
            n1,
            kappa * kappa * n1,
            s.t_ab,
            s.t_cd,
            model.kab(n1, 1.0).re,
            model.kcd(n1, 1.0).re,
            group_velocity(&m, m.omega2, m.single_photon_omega1(), n1),
            table_group_velocity_reference(n1),
        ]);
    }
    Ok(CommandOutput::single(t))
}

fn evolve_options(config: &Config) -> Result<EvolveOptions, CliError> {
    let time_model = match config.str("qnd.time_model")? {
        "per-fock" => TimeModel::PerFock,
        "fixed" => TimeModel::Fixed,
        other => {
            return Err(CliError::Config(format!(
                "qnd.time_model must be `per-fock` or `fixed`, got `{other}`"
            )))
        }
    };
    let coherence = match config.str("qnd.coherence")? {
        "lossless" => CoherenceMode::Lossless,
        "exact" => CoherenceMode::Exact,
        other => {
            return Err(CliError::Config(format!(
                "qnd.coherence must be `lossless` or `exact`, got `{other}`"
            )))
        }
    };
    let n_max = match config.count("qnd.n_max")? {
        0 => None,
        n => Some(n),
    };
    Ok(EvolveOptions {
        time_model,
        coherence,
        n_max,
    })
}

fn n3_list(config: &Config) -> Result<Vec<u32>, CliError> {
    let raw = config.int_list("qnd.n3")?;
    if raw.is_empty() {
        return Err(CliError::Config("qnd.n3 is empty".into()));
    }
    raw.iter()
        .map(|&n| {
            u32::try_from(n)
                .map_err(|_| CliError::Config(format!("qnd.n3 entries must be ≥ 0, got {n}")))
        })
        .collect()
}

fn q_window(config: &Config, alpha: Complex64) -> Result<QWindow, CliError> {
    let mut w = QWindow::covering(alpha);
    match config.count("qnd.q_resolution")? {
        0 => {}
        1 => {
            return Err(CliError::Config(
                "qnd.q_resolution must be 0 (auto) or ≥ 2".into(),
            ))
        }
        r => w.resolution = r,
    }
    Ok(w)
}

fn q_dump(grid: &QGrid, alpha: f64, n3: u32) -> String {
    let w = &grid.window;
    let mut out = format!(
        "# qgrid alpha={} n3={n3} re_min={} re_max={} im_min={} im_max={} resolution={}\n",
        num(alpha),
        num(w.re_min),
        num(w.re_max),
        num(w.im_min),
        num(w.im_max),
        w.resolution
    );
    out.push_str("# rows: im from im_min to im_max; columns: re from re_min to re_max\n");
    for row in grid.rows() {
        out.push_str(&row.iter().map(|&v| num(v)).collect::<Vec<_>>().join(","));
        out.push('\n');
    }
    out
}

/// Probe states for every (α, n3), their pairwise overlaps, Fock amplitudes
/// and Q-functions.
pub fn cmd_qnd(config: &Config, exec: Execution) -> Result<CommandOutput, CliError> {
    let m = config.material()?;
    m.validate()?;
    let alphas = config.f64_list("qnd.alpha")?;
    if alphas.is_empty() {
        return Err(CliError::Config("qnd.alpha is empty".into()));
    }
    let n3s = n3_list(config)?;
    let opts = evolve_options(config)?;
    let with_q = config.bool("qnd.q_grids")?;
    let params = params_line(config, &["qnd.", "material."]);

    let mut header = vec![
        "alpha",
        "n3",
        "n_max",
        "norm",
        "mean_photon_number",
        "mean_field_re",
        "mean_field_im",
        "mean_phase",
        "tail_weight",
        "fidelity_to_input",
    ];
    if with_q {
        header.extend(["q_mass", "q_min", "q_max", "q_peak_re", "q_peak_im"]);
    }
    let mut summary = Table::new(&header);
    summary.comment(params.clone());
    let mut overlaps = Table::new(&["alpha", "n3_i", "n3_j", "overlap", "phase_separation"]);
    overlaps.comment(params.clone());
    let mut amplitudes = Table::new(&["alpha", "n3", "n", "re", "im"]);
    amplitudes.comment(params);
    let mut extras = Vec::new();

    for &a in alphas {
        let alpha = Complex64::new(a, 0.0);
        let d = distinguishability(&m, alpha, &n3s, &opts, exec)?;
        let n_max = d.states[0].n_max();
        let input = ProbeState::coherent(alpha, n_max);
        let window = q_window(config, alpha)?;
        for (k, (state, &n3)) in d.states.iter().zip(&d.n3).enumerate() {
            let norm = state.norm_sqr();
            let tail = state.amplitudes[state.n_max()].norm_sqr() / norm;
            let mf = state.mean_field();
            let mut row = vec![
                num(a),
                n3.to_string(),
                state.n_max().to_string(),
                num(norm),
                num(state.mean_photon_number()),
                num(mf.re),
                num(mf.im),
                num(d.mean_phases[k]),
                num(tail),
                num(input.fidelity(state)),
            ];
            if with_q {
                let grid = q_function(state, &window, exec)?;
                let peak = grid.argmax();
                row.extend([grid.mass(), grid.min(), grid.max(), peak.re, peak.im].map(num));
                extras.push((format!("q_alpha{a}_n3{n3}.csv"), q_dump(&grid, a, n3)));
            }
            summary.push(row);
            for (n, c) in state.amplitudes.iter().enumerate() {
                amplitudes.push(vec![
                    num(a),
                    n3.to_string(),
                    n.to_string(),
                    num(c.re),
                    num(c.im),
                ]);
            }
        }
        for (i, &ni) in d.n3.iter().enumerate() {
            for (j, &nj) in d.n3.iter().enumerate() {
                overlaps.push(vec![
                    num(a),
                    ni.to_string(),
                    nj.to_string(),
                    num(d.overlaps[i][j]),
                    num(d.phase_separation[i][j]),
                ]);
            }
        }
    }
    extras.insert(0, ("overlaps.csv".into(), overlaps.render()));
    extras.insert(1, ("amplitudes.csv".into(), amplitudes.render()));
    Ok(CommandOutput {
        primary: summary.render(),
        extras,
    })
}

/// `√3`-ridge dispersion in closed form, for checks against the map.
pub fn ridge_rcb(omega1: f64) -> f64 {
    -3.0 * 3f64.sqrt() / (16.0 * omega1)
}
