//! Convergence, trade-off and error-versus-`Q_max` sweeps on the sech signal.

use std::path::Path;
use std::time::Instant;

use thiserror::Error;
use zsnft::reference::{rel_error, sech_analytic_ab, sech_signal, SechSpec, Target};
use zsnft::scattering::principal_spectrum;
use zsnft::{build_grid, Kappa, Method, NftError, Pipeline, SpectralGrid};

#[derive(Debug, Error)]
pub enum StudyError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Nft(#[from] NftError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyConfig {
    pub methods: Vec<Method>,
    /// Sech amplitudes; convergence and trade-off sweeps use each in turn.
    pub amplitudes: Vec<f64>,
    pub kappa: Kappa,
    pub t1: f64,
    pub t2: f64,
    /// Sample counts `N = 2 Ns`, ascending powers of two.
    pub nlist: Vec<usize>,
    pub target: Target,
    pub repeats: usize,
}

impl StudyConfig {
    /// The `[-30, 30]`, `A = 4.4` convergence setup over all six methods.
    pub fn sech(amplitude: f64, nlist: Vec<usize>) -> Self {
        StudyConfig {
            methods: Method::ALL.to_vec(),
            amplitudes: vec![amplitude],
            kappa: Kappa::Focusing,
            t1: -30.0,
            t2: 30.0,
            nlist,
            target: Target::B,
            repeats: 1,
        }
    }

    pub fn validate(&self) -> Result<(), StudyError> {
        let bad = |m: String| Err(StudyError::Config(m));
        if self.methods.is_empty() {
            return bad("no methods".into());
        }
        if self.amplitudes.is_empty() || self.amplitudes.iter().any(|a| !a.is_finite()) {
            return bad("amplitudes must be finite and non-empty".into());
        }
        if self.kappa != Kappa::Focusing {
            return bad("the sech reference is only available for kappa = -1".into());
        }
        if self.nlist.is_empty() {
            return bad("empty N list".into());
        }
        if let Some(n) = self.nlist.iter().find(|n| !n.is_power_of_two() || **n < 2) {
            return bad(format!("N = {n} is not a power of two >= 2"));
        }
        if self.nlist.windows(2).any(|w| w[1] <= w[0]) {
            return bad("N list must be strictly ascending".into());
        }
        if self.repeats == 0 {
            return bad("repeats must be at least 1".into());
        }
        for &n in &self.nlist {
            build_grid(self.t1, self.t2, n / 2)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyRow {
    pub method: Method,
    pub n: usize,
    pub amplitude: f64,
    /// `h ‖q‖∞`.
    pub q_max: f64,
    pub e_rel: Option<f64>,
    /// Median over the repeats, seconds.
    pub wall_time: Option<f64>,
    pub observed_order: Option<f64>,
    pub note: Option<String>,
}

impl StudyRow {
    pub fn is_complete(&self) -> bool {
        self.e_rel.is_some() && self.note.is_none()
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(|a, b| a.total_cmp(b));
    v[v.len() / 2]
}

/// One cell: spectrum on the shared principal nodes, relative error against
/// the analytic coefficients, median wall time of the spectrum computation.
fn cell(cfg: &StudyConfig, method: Method, n: usize, amplitude: f64) -> StudyRow {
    let mut row = StudyRow {
        method,
        n,
        amplitude,
        q_max: 0.0,
        e_rel: None,
        wall_time: None,
        observed_order: None,
        note: None,
    };
    let grid = match build_grid(cfg.t1, cfg.t2, n / 2) {
        Ok(g) => g,
        Err(e) => {
            row.note = Some(e.to_string());
            return row;
        }
    };
    row.q_max = grid.h() * amplitude.abs();
    let sech = SechSpec { amplitude, kappa: cfg.kappa };
    let pot = sech_signal(&sech, &grid);
    let pipeline = Pipeline::preferred(method);

    let mut times = Vec::with_capacity(cfg.repeats);
    let mut spectrum = None;
    for _ in 0..cfg.repeats {
        let start = Instant::now();
        let s = principal_spectrum(method, &pot, &grid, pipeline);
        times.push(start.elapsed().as_secs_f64().max(f64::MIN_POSITIVE));
        match s {
            Ok(s) => spectrum = Some(s),
            Err(e) => {
                row.note = Some(e.to_string());
                return row;
            }
        }
    }
    row.wall_time = Some(median(times));
    let spectrum = spectrum.expect("at least one repeat");
    let domain = SpectralGrid::principal(&grid);
    let reference = match sech_analytic_ab(&sech, domain.xi()) {
        Ok(r) => r,
        Err(e) => {
            row.note = Some(e.to_string());
            return row;
        }
    };
    match rel_error(&spectrum, &reference, &domain, cfg.target) {
        Ok(rep) => {
            row.e_rel = Some(rep.e_rel);
            if rep.excluded > 0 {
                row.note = Some(format!("{} nodes excluded", rep.excluded));
            }
        }
        Err(NftError::ZeroReference) => row.note = Some("e_rel undefined: reference has zero norm".into()),
        Err(e) => row.note = Some(e.to_string()),
    }
    row
}

fn sweep(cfg: &StudyConfig) -> Vec<StudyRow> {
    let mut rows = Vec::new();
    for &amp in &cfg.amplitudes {
        for &m in &cfg.methods {
            let mut prev: Option<f64> = None;
            for &n in &cfg.nlist {
                let mut row = cell(cfg, m, n, amp);
                if let (Some(p), Some(e)) = (prev, row.e_rel) {
                    if p > 0.0 && e > 0.0 {
                        row.observed_order = Some((p / e).log2());
                    }
                }
                prev = row.e_rel;
                rows.push(row);
            }
        }
    }
    rows
}

/// Error against `N` for every method; observed order between consecutive N.
pub fn run_convergence(cfg: &StudyConfig) -> Result<Vec<StudyRow>, StudyError> {
    cfg.validate()?;
    Ok(sweep(cfg))
}

/// Same sweep with at least three timed repeats per cell.
pub fn run_tradeoff(cfg: &StudyConfig) -> Result<Vec<StudyRow>, StudyError> {
    if cfg.repeats < 3 {
        return Err(StudyError::Config(format!("trade-off needs repeats >= 3, got {}", cfg.repeats)));
    }
    cfg.validate()?;
    Ok(sweep(cfg))
}

/// Error against `Q_max = h A` at a single `N`, sweeping the amplitudes.
pub fn run_errmax(cfg: &StudyConfig) -> Result<Vec<StudyRow>, StudyError> {
    if cfg.nlist.len() != 1 {
        return Err(StudyError::Config("errmax takes exactly one N".into()));
    }
    cfg.validate()?;
    let n = cfg.nlist[0];
    let mut rows = Vec::new();
    for &m in &cfg.methods {
        for &amp in &cfg.amplitudes {
            rows.push(cell(cfg, m, n, amp));
        }
    }
    Ok(rows)
}

pub const HEADER: [&str; 8] = ["method", "N", "amplitude", "q_max", "e_rel", "wall_time", "observed_order", "note"];

fn opt(v: Option<f64>) -> String {
    // shortest round-trip form, so re-reading is exact
    v.map(|x| format!("{x:e}")).unwrap_or_default()
}

pub fn write_rows(path: &Path, rows: &[StudyRow]) -> Result<(), StudyError> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(HEADER)?;
    for r in rows {
        w.write_record([
            r.method.label().to_string(),
            r.n.to_string(),
            format!("{}", r.amplitude),
            format!("{:e}", r.q_max),
            opt(r.e_rel),
            opt(r.wall_time),
            opt(r.observed_order),
            r.note.clone().unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_rows(path: &Path) -> Result<Vec<StudyRow>, StudyError> {
    let mut rdr = csv::Reader::from_path(path)?;
    let parse_opt = |s: &str| -> Result<Option<f64>, StudyError> {
        if s.is_empty() {
            Ok(None)
        } else {
            s.parse().map(Some).map_err(|e| StudyError::Config(format!("`{s}`: {e}")))
        }
    };
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let get = |i: usize| rec.get(i).unwrap_or("");
        rows.push(StudyRow {
            method: get(0).parse()?,
            n: get(1).parse().map_err(|e| StudyError::Config(format!("N `{}`: {e}", get(1))))?,
            amplitude: parse_opt(get(2))?.unwrap_or(0.0),
            q_max: parse_opt(get(3))?.unwrap_or(0.0),
            e_rel: parse_opt(get(4))?,
            wall_time: parse_opt(get(5))?,
            observed_order: parse_opt(get(6))?,
            note: Some(get(7).to_string()).filter(|s| !s.is_empty()),
        });
    }
    Ok(rows)
}
