use std::fmt::{self, Write as _};
use std::path::Path;

use entorder::geometry::{arch_line_point, future_polytope};
use entorder::locc::{can_convert, classify, conversion_probability, incomparability_fraction};
use entorder::measures::{measure_suite, vidal_monotones};
use entorder::mixedstates::{apply_channel, evolution_class};
use entorder::random::{rng_for_sample, rng_from_seed};
use entorder::schmidt::{haar_random_state, schmidt_angle, schmidt_coefficients, schmidt_decompose, state_from_hyperspherical};
use entorder::spectra::{renyi_entropy, shannon_entropy, sorted_desc};
use entorder::{
    Combinatorics, Complex64, DensityMatrix, EntropyOrder, HypersphericalAngles, ProbabilityVector,
    PureBipartiteState, RandomFieldChannel, SchmidtVector,
};
use serde::Deserialize;
use serde_json::json;

use crate::{Command, GridArgs};

const ANGLE_BINS: usize = 20;
const CORNERS: [&str; 4] = ["mm", "mp", "pm", "pp"];
const LOGGED_ORDERS: [EntropyOrder; 4] = [EntropyOrder::ZERO, EntropyOrder::ONE, EntropyOrder::TWO, EntropyOrder::INFINITY];

#[derive(Debug)]
pub enum CliError {
    Domain(entorder::Error),
    Io(String),
    Parse(String),
}

impl CliError {
    pub fn tag(&self) -> &'static str {
        match self {
            CliError::Domain(e) => e.name(),
            CliError::Io(_) => "Io",
            CliError::Parse(_) => "Parse",
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Domain(e) => write!(f, "{e}"),
            CliError::Io(m) | CliError::Parse(m) => f.write_str(m),
        }
    }
}

impl From<entorder::Error> for CliError {
    fn from(e: entorder::Error) -> Self {
        CliError::Domain(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

pub fn run(cmd: Command) -> Result<String> {
    match cmd {
        Command::Schmidt { state } => schmidt(&state),
        Command::Measures { lambda, alpha } => measures(lambda.0, alpha),
        Command::Convert { from, to } => convert(from.0, to.0),
        Command::ClassifyGrid(g) | Command::ProbGrid(g) => simplex_grid(&g),
        Command::SurfaceGrid { alpha, resolution } => surface_grid(alpha, resolution as usize),
        Command::Sample { seed, samples, max_n } => sample(seed, samples, max_n as usize),
        Command::Polytope {
            lambda,
            arch,
            vertices_only,
        } => polytope(lambda.map(|l| l.0), arch, vertices_only),
        Command::Evolve {
            lambda,
            seed,
            steps,
            terms,
        } => evolve(lambda.0, seed, steps, terms as usize),
    }
}

pub fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values always serialize");
    s.push('\n');
    s
}

#[derive(Deserialize)]
struct StateFile {
    dim_a: usize,
    dim_b: usize,
    re: Vec<f64>,
    #[serde(default)]
    im: Option<Vec<f64>>,
}

fn read_state(path: &Path) -> Result<PureBipartiteState> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let raw: StateFile = serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    let im = raw.im.unwrap_or_else(|| vec![0.0; raw.re.len()]);
    if im.len() != raw.re.len() {
        return Err(entorder::Error::LengthMismatch {
            left: raw.re.len(),
            right: im.len(),
        }
        .into());
    }
    let amps = raw.re.iter().zip(&im).map(|(&r, &i)| Complex64::new(r, i)).collect();
    Ok(PureBipartiteState::from_amplitudes(raw.dim_a, raw.dim_b, amps)?)
}

fn schmidt(path: &Path) -> Result<String> {
    let psi = read_state(path)?;
    let decomp = schmidt_decompose(&psi)?;
    Ok(pretty(&json!({
        "dim_a": psi.dim_a(),
        "dim_b": psi.dim_b(),
        "lambda": decomp.lambda,
        "measures": measure_suite(&decomp.lambda),
    })))
}

fn measures(lambda: Vec<f64>, alpha: Option<EntropyOrder>) -> Result<String> {
    let lambda = SchmidtVector::new(lambda)?;
    let mut report = json!({
        "lambda": lambda,
        "measures": measure_suite(&lambda),
        "vidal_monotones": vidal_monotones(&lambda),
    });
    if let Some(a) = alpha {
        report["renyi"] = json!({ "alpha": a, "value": renyi_entropy(&lambda, a) });
    }
    Ok(pretty(&report))
}

fn convert(from: Vec<f64>, to: Vec<f64>) -> Result<String> {
    let (psi, phi) = (SchmidtVector::new(from)?, SchmidtVector::new(to)?);
    let ok = can_convert(&psi, &phi)?;
    let p = conversion_probability(&psi, &phi)?;
    Ok(format!("can_convert={ok}\np={p:.6}\n"))
}

/// Barycentric grid `(i, j, R - i - j) / R` over the N = 3 simplex, in row order.
fn simplex_points(r: usize) -> impl Iterator<Item = [f64; 3]> {
    let rf = r as f64;
    (0..=r).flat_map(move |i| (0..=r - i).map(move |j| [i as f64 / rf, j as f64 / rf, (r - i - j) as f64 / rf]))
}

fn simplex_grid(g: &GridArgs) -> Result<String> {
    let reference = SchmidtVector::new(g.reference.0.clone())?;
    if reference.len() != 3 {
        return Err(entorder::Error::WrongDimension {
            expected: 3,
            got: reference.len(),
        }
        .into());
    }
    let mut out = String::from("lambda1,lambda2,class,p\n");
    for q in simplex_points(g.resolution as usize) {
        let qv = SchmidtVector::from_probability(ProbabilityVector::normalized(q.to_vec())?);
        let class = classify(&reference, &qv)?;
        let p = conversion_probability(&reference, &qv)?;
        writeln!(out, "{},{},{},{}", q[0], q[1], class, p).unwrap();
    }
    Ok(out)
}

fn surface_grid(alpha: EntropyOrder, r: usize) -> Result<String> {
    let mut out = String::from("face,w_mm,w_mp,w_pm,w_pp,entropy\n");
    for (face, missing) in CORNERS.iter().enumerate() {
        let others: Vec<usize> = (0..4).filter(|&c| c != face).collect();
        for b in simplex_points(r) {
            let mut w = [0.0; 4];
            for (&c, &x) in others.iter().zip(&b) {
                w[c] = x;
            }
            let psi = state_from_hyperspherical(&HypersphericalAngles::from_weights(w))?;
            let h = renyi_entropy(schmidt_coefficients(&psi)?.as_probability(), alpha);
            writeln!(out, "no_{missing},{},{},{},{},{h}", w[0], w[1], w[2], w[3]).unwrap();
        }
    }
    Ok(out)
}

/// Probability mass of the Schmidt angle in `[lo, hi]`; the CDF is `1 - cos³ 2β`.
fn angle_mass(lo: f64, hi: f64) -> f64 {
    (2.0 * lo).cos().powi(3) - (2.0 * hi).cos().powi(3)
}

fn sample(seed: u64, samples: u64, max_n: usize) -> Result<String> {
    let width = std::f64::consts::FRAC_PI_4 / ANGLE_BINS as f64;
    let mut counts = [0usize; ANGLE_BINS];
    let (mut h_sum, mut beta_sum) = (0.0, 0.0);
    for i in 0..samples {
        let psi = haar_random_state(2, 2, &mut rng_for_sample(seed, i));
        let lambda = schmidt_coefficients(&psi)?;
        let beta = schmidt_angle(&lambda)?;
        h_sum += shannon_entropy(lambda.as_probability());
        beta_sum += beta;
        counts[((beta / width) as usize).min(ANGLE_BINS - 1)] += 1;
    }
    let m = samples as f64;
    let histogram: Vec<_> = counts
        .iter()
        .enumerate()
        .map(|(k, &c)| {
            let (lo, hi) = (k as f64 * width, (k + 1) as f64 * width);
            json!({ "lo": lo, "hi": hi, "observed": c as f64 / m, "expected": angle_mass(lo, hi) })
        })
        .collect();
    let incomparability = (2..=max_n)
        .map(|n| incomparability_fraction(n, samples as usize, seed))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(pretty(&json!({
        "seed": seed,
        "samples": samples,
        "mean_entropy": h_sum / m,
        "mean_schmidt_angle": beta_sum / m,
        "schmidt_angle_histogram": histogram,
        "incomparability": incomparability,
    })))
}

fn polytope(lambda: Option<Vec<f64>>, arch: Option<f64>, vertices_only: bool) -> Result<String> {
    let d = match (lambda, arch) {
        (Some(l), _) => ProbabilityVector::new(l)?,
        (None, Some(x)) => arch_line_point(x)?,
        (None, None) => unreachable!("clap requires one of --lambda and --arch"),
    };
    let depth = if vertices_only {
        Combinatorics::VerticesOnly
    } else {
        Combinatorics::Full
    };
    let poly = future_polytope(&d, depth)?;
    let mut s = serde_json::to_string_pretty(&poly).map_err(|e| CliError::Parse(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn evolve(lambda: Vec<f64>, seed: u64, steps: usize, terms: usize) -> Result<String> {
    let start = ProbabilityVector::new(lambda)?;
    let mut rng = rng_from_seed(seed);
    let mut rho = DensityMatrix::diagonal(&start);
    let mut trajectory = Vec::with_capacity(steps + 1);
    for step in 0..=steps {
        if step > 0 {
            let ch = RandomFieldChannel::random(start.len(), terms, &mut rng);
            rho = apply_channel(&rho, &ch)?;
        }
        let spectrum = rho.spectrum()?;
        let entropies: serde_json::Map<_, _> = LOGGED_ORDERS
            .iter()
            .map(|&a| (a.to_string(), json!(renyi_entropy(&spectrum, a))))
            .collect();
        trajectory.push(json!({
            "step": step,
            "spectrum": sorted_desc(spectrum.as_slice()),
            "entropies": entropies,
            "class": evolution_class(&start, &spectrum)?,
        }));
    }
    Ok(pretty(&json!({
        "seed": seed,
        "terms": terms,
        "trajectory": trajectory,
    })))
}
