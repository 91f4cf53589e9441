//! Reproducible experiments behind the command-line tool: field sweeps of
//! the two-qubit model, Haar typicality of the Pauli spectrum, bound reports
//! and CSV output.

use std::fmt;
use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bounds::{
    bound_report, filtered_sre_grid, gap_from_fidelity_1q, min_relative_entropy_1q, stabilizer_fidelity_1q, BoundReport,
};
use crate::clifford::{single_qubit_cliffords, MAX_EXHAUSTIVE_QUBITS};
use crate::ergotropy::{
    clifford_min_energy_exact, clifford_min_energy_heuristic, ergotropy, ergotropy_pure, ground_energy, orbit_energy,
    standard_ergotropy, HeuristicBudget, DENSE_LIMIT, LANCZOS_LIMIT,
};
use crate::error::{Error, Result};
use crate::haar::haar_state;
use crate::models::{
    classical_ising_ground_energy, clifford_ergotropy_1q, clifford_ergotropy_2q_analytic, hamiltonian_2q,
    hamiltonian_classical_ising, hamiltonian_tfim, product_state_gap_bound, site_spectrum, t_state,
    tfim_bound_crossings, tfim_ground_energy, tfim_ground_energy_asymptotic, tt_state, ProductBoundReport,
};
use crate::operator::PauliOperator;
use crate::spectrum::{pauli_spectrum, PauliTable};
use crate::state::{DensityMatrix, QuantumState};

/// Slack allowed when checking `ℰ_Cl ≤ r·h bound ≤ r₁‖H‖₁ bound`.
pub const SANDWICH_TOL: f64 = 1e-10;

/// Formats a number with 15 significant digits: plain decimal for moderate
/// magnitudes, scientific otherwise. Trailing zeros are trimmed.
pub fn fmt_num(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let mag = v.abs().log10().floor() as i32;
    if (-4..15).contains(&mag) {
        let decimals = (14 - mag).max(0) as usize;
        let s = format!("{v:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let s = format!("{v:.14e}");
        let (mant, exp) = s.split_once('e').expect("scientific format");
        let mant = if mant.contains('.') {
            mant.trim_end_matches('0').trim_end_matches('.')
        } else {
            mant
        };
        format!("{mant}e{exp}")
    }
}

fn write_csv<W: Write>(out: &mut W, header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Result<()> {
    writeln!(out, "{}", header.join(","))?;
    for r in rows {
        writeln!(out, "{}", r.join(","))?;
    }
    Ok(())
}

/// `n` evenly spaced points from `lo` to `hi` inclusive.
pub fn grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if n < 2 || !lo.is_finite() || !hi.is_finite() || lo > hi {
        return Err(Error::InvalidArgument(format!(
            "grid needs at least 2 points and lo <= hi, got {n} on [{lo}, {hi}]"
        )));
    }
    Ok((0..n)
        .map(|i| {
            if i + 1 == n {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub g: f64,
    pub initial_energy: f64,
    pub ergotropy: f64,
    pub clifford_ergotropy_exact: f64,
    pub clifford_ergotropy_analytic: f64,
    pub bound_rearrangement: f64,
    pub bound_holder: f64,
    pub gap: f64,
}

impl SweepRow {
    pub const HEADER: [&'static str; 8] = [
        "g",
        "initial_energy",
        "ergotropy",
        "clifford_ergotropy_exact",
        "clifford_ergotropy_analytic",
        "bound_rearrangement",
        "bound_holder",
        "gap",
    ];

    fn fields(&self) -> Vec<String> {
        [
            self.g,
            self.initial_energy,
            self.ergotropy,
            self.clifford_ergotropy_exact,
            self.clifford_ergotropy_analytic,
            self.bound_rearrangement,
            self.bound_holder,
            self.gap,
        ]
        .iter()
        .map(|v| fmt_num(*v))
        .collect()
    }

    /// `ℰ_Cl ≤ r·h bound ≤ r₁‖H‖₁ bound` within [`SANDWICH_TOL`].
    pub fn sandwich_holds(&self) -> bool {
        self.clifford_ergotropy_exact <= self.bound_rearrangement + SANDWICH_TOL
            && self.bound_rearrangement <= self.bound_holder + SANDWICH_TOL
    }
}

/// Exact Clifford ergotropy of `|TT⟩` under the two-qubit Ising model.
pub fn clifford_ergotropy_tt(g: f64, h: f64) -> Result<f64> {
    let ham = hamiltonian_2q(g, h);
    let tt = tt_state();
    Ok(ham.energy(&tt)? - clifford_min_energy_exact(&tt, &ham, false)?.energy)
}

/// Standard ergotropy of `|TT⟩` under the two-qubit Ising model.
pub fn ergotropy_tt(g: f64, h: f64) -> Result<f64> {
    ergotropy_pure(&tt_state(), &hamiltonian_2q(g, h))
}

fn sweep_row(g: f64, h: f64) -> Result<SweepRow> {
    let ham = hamiltonian_2q(g, h);
    let tt = tt_state();
    let report = bound_report(&tt, &ham)?;
    let erg = ergotropy_pure(&tt, &ham)?;
    let exact = report.initial_energy - clifford_min_energy_exact(&tt, &ham, false)?.energy;
    let row = SweepRow {
        g,
        initial_energy: report.initial_energy,
        ergotropy: erg,
        clifford_ergotropy_exact: exact,
        clifford_ergotropy_analytic: clifford_ergotropy_2q_analytic(g, h),
        bound_rearrangement: report.bound_rearrangement,
        bound_holder: report.bound_holder,
        gap: erg - exact,
    };
    if !row.sandwich_holds() {
        return Err(Error::Internal(format!("bound ordering violated at g = {g}, h = {h}")));
    }
    Ok(row)
}

/// One row per grid point of the transverse field, in grid order.
pub fn sweep_2q(h: f64, g_min: f64, g_max: f64, steps: usize) -> Result<Vec<SweepRow>> {
    if !h.is_finite() {
        return Err(Error::InvalidArgument(format!("longitudinal field {h} is not finite")));
    }
    grid(g_min, g_max, steps)?
        .into_par_iter()
        .map(|g| sweep_row(g, h))
        .collect()
}

pub fn write_sweep_csv<W: Write>(out: &mut W, rows: &[SweepRow]) -> Result<()> {
    write_csv(out, &SweepRow::HEADER, rows.iter().map(SweepRow::fields))
}

/// Left and right difference quotients of `f` at `x` with step `delta`.
pub fn one_sided_slopes<F: Fn(f64) -> Result<f64>>(f: &F, x: f64, delta: f64) -> Result<(f64, f64)> {
    let c = f(x)?;
    Ok(((c - f(x - delta)?) / delta, (f(x + delta)? - c) / delta))
}

/// `(x, |right slope − left slope|)` at every point of `xs`.
pub fn slope_jumps<F>(f: &F, xs: &[f64], delta: f64) -> Result<Vec<(f64, f64)>>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    xs.par_iter()
        .map(|&x| {
            let (l, r) = one_sided_slopes(f, x, delta)?;
            Ok((x, (r - l).abs()))
        })
        .collect()
}

/// Grid points where the one-sided slopes differ by more than `threshold`.
pub fn find_cusps<F>(f: &F, xs: &[f64], delta: f64, threshold: f64) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    Ok(slope_jumps(f, xs, delta)?
        .into_iter()
        .filter(|&(_, j)| j > threshold)
        .map(|(x, _)| x)
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct TypicalityConfig {
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    /// Tail exponent `a > 1` in `ε = √(16 a ln d / d)`.
    pub a: f64,
    /// Transverse field of the periodic Ising chain used for `initial_energy`.
    pub g: f64,
}

impl TypicalityConfig {
    pub fn new(n: usize, samples: usize, seed: u64) -> Self {
        Self {
            n,
            samples,
            seed,
            a: 2.0,
            g: 1.0,
        }
    }

    pub fn threshold(&self) -> f64 {
        let d = (1u64 << self.n) as f64;
        (16.0 * self.a * d.ln() / d).sqrt()
    }

    /// `e^π / d^{2(a−1)}`, the probability bound for exceeding the threshold.
    pub fn tail_bound(&self) -> f64 {
        let d = (1u64 << self.n) as f64;
        std::f64::consts::PI.exp() / d.powf(2.0 * (self.a - 1.0))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TypicalityRow {
    pub sample_index: usize,
    pub r1: f64,
    pub m_infinity: f64,
    pub initial_energy: f64,
    pub violation: bool,
}

impl TypicalityRow {
    pub const HEADER: [&'static str; 5] = ["sample_index", "r1", "m_infinity", "initial_energy", "violation_flag"];

    fn fields(&self) -> Vec<String> {
        vec![
            self.sample_index.to_string(),
            fmt_num(self.r1),
            fmt_num(self.m_infinity),
            fmt_num(self.initial_energy),
            u8::from(self.violation).to_string(),
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TypicalitySummary {
    pub n: usize,
    pub samples: usize,
    pub a: f64,
    pub threshold: f64,
    pub violations: usize,
    pub violation_fraction: f64,
    pub median_m_infinity: f64,
    pub max_r1: f64,
    pub tail_bound: f64,
}

impl fmt::Display for TypicalitySummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={} samples={} a={} threshold={} violations={} violation_fraction={} median_m_infinity={} max_r1={} tail_bound={}",
            self.n,
            self.samples,
            fmt_num(self.a),
            fmt_num(self.threshold),
            self.violations,
            fmt_num(self.violation_fraction),
            fmt_num(self.median_m_infinity),
            fmt_num(self.max_r1),
            fmt_num(self.tail_bound)
        )
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k % 2 == 1 {
        v[k / 2]
    } else {
        0.5 * (v[k / 2 - 1] + v[k / 2])
    }
}

/// Haar samples on `n` qubits. Sample `i` draws from stream `i` of a ChaCha
/// generator seeded with `seed`, so results do not depend on thread count.
pub fn typicality(cfg: &TypicalityConfig) -> Result<(Vec<TypicalityRow>, TypicalitySummary)> {
    if !(2..=DENSE_LIMIT).contains(&cfg.n) {
        return Err(Error::InvalidQubitCount(cfg.n));
    }
    if cfg.samples == 0 {
        return Err(Error::InvalidArgument("need at least one sample".into()));
    }
    if !(cfg.a > 1.0) || !cfg.a.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "tail exponent a must exceed 1, got {}",
            cfg.a
        )));
    }
    let ham = hamiltonian_tfim(cfg.n, cfg.g)?;
    let threshold = cfg.threshold();
    let rows: Vec<TypicalityRow> = (0..cfg.samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(i as u64);
            let psi = haar_state(cfg.n, &mut rng);
            let r1 = pauli_spectrum(&psi)?.r1();
            Ok(TypicalityRow {
                sample_index: i,
                r1,
                m_infinity: -2.0 * r1.ln(),
                initial_energy: ham.energy(&psi)?,
                violation: r1 >= threshold,
            })
        })
        .collect::<Result<_>>()?;
    let violations = rows.iter().filter(|r| r.violation).count();
    let summary = TypicalitySummary {
        n: cfg.n,
        samples: cfg.samples,
        a: cfg.a,
        threshold,
        violations,
        violation_fraction: violations as f64 / cfg.samples as f64,
        median_m_infinity: median(rows.iter().map(|r| r.m_infinity).collect()),
        max_r1: rows.iter().map(|r| r.r1).fold(0.0, f64::max),
        tail_bound: cfg.tail_bound(),
    };
    Ok((rows, summary))
}

pub fn write_typicality_csv<W: Write>(out: &mut W, rows: &[TypicalityRow]) -> Result<()> {
    write_csv(out, &TypicalityRow::HEADER, rows.iter().map(TypicalityRow::fields))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundsOptions {
    /// Largest N for exhaustive orbit minimization (at most 3).
    pub exact_n_limit: usize,
    pub budget: HeuristicBudget,
    pub seed: u64,
    /// Report charging quantities by working with `−H`.
    pub maximize: bool,
}

impl Default for BoundsOptions {
    fn default() -> Self {
        Self {
            exact_n_limit: 2,
            budget: HeuristicBudget::default(),
            seed: 0,
            maximize: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundsOutput {
    pub n: usize,
    pub maximize: bool,
    pub report: BoundReport,
    /// Standard ergotropy, when the ground or passive energy is computable.
    pub ergotropy: Option<f64>,
    /// `ergotropy − clifford_ergotropy`; a lower estimate when the Clifford
    /// value is heuristic.
    pub gap: Option<f64>,
    /// `−E_passive − r·h`.
    pub gap_lower_bound: Option<f64>,
    pub sre: Vec<(Option<f64>, f64)>,
}

impl BoundsOutput {
    /// Labeled `key=value` lines in a fixed order.
    pub fn lines(&self) -> Vec<String> {
        let r = &self.report;
        let opt = |v: Option<f64>| v.map_or_else(|| "NA".to_string(), fmt_num);
        let mut out = vec![
            format!("n_qubits={}", self.n),
            format!("mode={}", if self.maximize { "charge" } else { "extract" }),
            format!("initial_energy={}", fmt_num(r.initial_energy)),
            format!("l1_norm={}", fmt_num(r.l1_norm)),
            format!("r1={}", fmt_num(r.r1)),
            format!("m_infinity={}", opt(r.m_infinity)),
            format!("rh={}", fmt_num(r.rh)),
            format!("bound_rearrangement={}", fmt_num(r.bound_rearrangement)),
            format!("bound_holder={}", fmt_num(r.bound_holder)),
            format!("bound_sre={}", opt(r.bound_sre)),
            format!("clifford_ergotropy={}", opt(r.clifford_ergotropy)),
            format!(
                "clifford_method={}",
                match r.clifford_ergotropy {
                    None => "none",
                    Some(_) if r.clifford_exact => "exact",
                    Some(_) => "heuristic",
                }
            ),
            format!("ergotropy={}", opt(self.ergotropy)),
            format!("gap={}", opt(self.gap)),
            format!("gap_lower_bound={}", opt(self.gap_lower_bound)),
        ];
        for (alpha, m) in &self.sre {
            let label = alpha.map_or_else(|| "inf".to_string(), fmt_num);
            out.push(format!("sre_alpha_{label}={}", fmt_num(*m)));
        }
        out
    }
}

/// Bounds, Clifford ergotropy (exact up to `exact_n_limit`, heuristic
/// beyond) and the standard ergotropy for a state and Hamiltonian.
pub fn bounds_for<S: QuantumState + ?Sized>(
    state: &S,
    h: &PauliOperator,
    opts: &BoundsOptions,
) -> Result<BoundsOutput> {
    if opts.exact_n_limit > MAX_EXHAUSTIVE_QUBITS {
        return Err(Error::InvalidArgument(format!(
            "exact limit {} exceeds the largest enumerable size {MAX_EXHAUSTIVE_QUBITS}",
            opts.exact_n_limit
        )));
    }
    let n = state.n_qubits();
    let ham = if opts.maximize { h.negated() } else { h.clone() };
    let mut report = bound_report(state, &ham)?;
    let (orbit_min, exact) = if n <= opts.exact_n_limit {
        (clifford_min_energy_exact(state, &ham, true)?.energy, true)
    } else {
        (
            clifford_min_energy_heuristic(state, &ham, opts.budget, opts.seed)?.energy,
            false,
        )
    };
    let cl = report.initial_energy - orbit_min;
    if exact && cl > report.bound_rearrangement + SANDWICH_TOL {
        return Err(Error::Internal(format!(
            "exact Clifford ergotropy {cl} exceeds its upper bound"
        )));
    }
    report = report.with_clifford(cl, exact);

    let passive = if state.is_pure() {
        if n <= LANCZOS_LIMIT {
            Some(ground_energy(&ham)?)
        } else {
            None
        }
    } else if n <= DENSE_LIMIT {
        Some(standard_ergotropy(&state.density_matrix(), &ham)?.passive_energy)
    } else {
        None
    };
    let erg = passive.map(|p| report.initial_energy - p);
    let sre = if state.is_pure() {
        filtered_sre_grid(state)?
    } else {
        Vec::new()
    };
    Ok(BoundsOutput {
        n,
        maximize: opts.maximize,
        ergotropy: erg,
        gap: erg.map(|e| e - cl),
        gap_lower_bound: passive.map(|p| -p - report.rh),
        report,
        sre,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsingModel {
    Tfim,
    Classical,
}

impl std::str::FromStr for IsingModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tfim" => Ok(Self::Tfim),
            "classical" => Ok(Self::Classical),
            _ => Err(Error::InvalidArgument(format!(
                "unknown model {s:?}; expected tfim or classical"
            ))),
        }
    }
}

impl fmt::Display for IsingModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Tfim => "tfim",
            Self::Classical => "classical",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IsingBoundReport {
    pub model: IsingModel,
    pub field: f64,
    pub product: ProductBoundReport,
    /// `N(1+|g|)[(2/π)𝔈 − 1/√2]` for the TFIM.
    pub asymptotic_bound: Option<f64>,
    pub crossings: Option<(f64, f64)>,
}

impl IsingBoundReport {
    pub fn lines(&self) -> Vec<String> {
        let p = &self.product;
        let mut out = vec![
            format!("model={}", self.model),
            format!("n_sites={}", p.n_sites),
            format!("field={}", fmt_num(self.field)),
            format!("ground_energy={}", fmt_num(p.ground_energy.value)),
            format!(
                "ground_energy_source={}",
                if p.ground_energy.asymptotic {
                    "asymptotic"
                } else {
                    "exact"
                }
            ),
            format!("l1_norm={}", fmt_num(p.l1_norm)),
            format!("max_r1_site={}", fmt_num(p.max_r1_site)),
            format!("gap_lower_bound={}", fmt_num(p.gap_lower_bound)),
            format!("gap_lower_bound_rh={}", fmt_num(p.gap_lower_bound_rh)),
        ];
        if let Some(b) = self.asymptotic_bound {
            out.push(format!("asymptotic_gap_lower_bound={}", fmt_num(b)));
        }
        if let Some((lo, hi)) = self.crossings {
            out.push(format!("crossing_low={}", fmt_num(lo)));
            out.push(format!("crossing_high={}", fmt_num(hi)));
        }
        out
    }
}

/// Product-state gap bounds for `|T⟩^{⊗n}` on a periodic Ising chain.
pub fn ising_bound(model: IsingModel, field: f64, n: usize) -> Result<IsingBoundReport> {
    if !field.is_finite() {
        return Err(Error::InvalidArgument(format!("field {field} is not finite")));
    }
    let sites = vec![site_spectrum(&t_state())?; n];
    let (ham, ground) = match model {
        IsingModel::Classical => (
            hamiltonian_classical_ising(n, field)?,
            classical_ising_ground_energy(n, field)?,
        ),
        IsingModel::Tfim => (hamiltonian_tfim(n, field)?, tfim_ground_energy(n, field)?),
    };
    let product = product_state_gap_bound(&sites, &ham, ground)?;
    let (asymptotic_bound, crossings) = match model {
        IsingModel::Classical => (None, None),
        IsingModel::Tfim => {
            let per_site =
                -tfim_ground_energy_asymptotic(field) - std::f64::consts::FRAC_1_SQRT_2 * (1.0 + field.abs());
            (Some(n as f64 * per_site), Some(tfim_bound_crossings()))
        }
    };
    Ok(IsingBoundReport {
        model,
        field,
        product,
        asymptotic_bound,
        crossings,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingleQubitReport {
    pub bloch: [f64; 3],
    pub field: f64,
    pub initial_energy: f64,
    pub ergotropy: f64,
    /// Closed form `h(ρ_z + r₁)`.
    pub clifford_ergotropy: f64,
    /// Best of the 24 single-qubit Clifford actions.
    pub clifford_ergotropy_enumerated: f64,
    pub gap: f64,
    pub stabilizer_fidelity: f64,
    pub min_relative_entropy: f64,
    /// `h(1 + |ρ| − 2F_STAB)`.
    pub gap_from_fidelity: f64,
}

impl SingleQubitReport {
    pub fn lines(&self) -> Vec<String> {
        vec![
            format!(
                "bloch={},{},{}",
                fmt_num(self.bloch[0]),
                fmt_num(self.bloch[1]),
                fmt_num(self.bloch[2])
            ),
            format!("field={}", fmt_num(self.field)),
            format!("initial_energy={}", fmt_num(self.initial_energy)),
            format!("ergotropy={}", fmt_num(self.ergotropy)),
            format!("clifford_ergotropy={}", fmt_num(self.clifford_ergotropy)),
            format!(
                "clifford_ergotropy_enumerated={}",
                fmt_num(self.clifford_ergotropy_enumerated)
            ),
            format!("gap={}", fmt_num(self.gap)),
            format!("stabilizer_fidelity={}", fmt_num(self.stabilizer_fidelity)),
            format!("min_relative_entropy={}", fmt_num(self.min_relative_entropy)),
            format!("gap_from_fidelity={}", fmt_num(self.gap_from_fidelity)),
        ]
    }
}

fn z_field(field: f64) -> PauliOperator {
    PauliOperator::from_terms(1, [("Z".parse().expect("static word"), field)]).expect("single qubit")
}

/// Minimum of `E(CρC†)` over the 24 single-qubit Clifford actions.
pub fn single_qubit_orbit_minimum(rho: &DensityMatrix, field: f64) -> Result<f64> {
    let ham = z_field(field);
    let table = PauliTable::compute(rho)?;
    single_qubit_cliffords()
        .iter()
        .map(|c| orbit_energy(&table, c, &ham))
        .try_fold(f64::INFINITY, |m, e| Ok(m.min(e?)))
}

/// Single-qubit state with Bloch vector `bloch` under `H = h Z`.
pub fn single_qubit(bloch: [f64; 3], field: f64) -> Result<SingleQubitReport> {
    if !field.is_finite() {
        return Err(Error::InvalidArgument(format!("field {field} is not finite")));
    }
    let rho = DensityMatrix::from_bloch(bloch)?;
    let ham = z_field(field);
    let initial_energy = field * bloch[2];
    let erg = ergotropy(&rho, &ham)?;
    let cl = clifford_ergotropy_1q(bloch, field)?;
    Ok(SingleQubitReport {
        bloch,
        field,
        initial_energy,
        ergotropy: erg,
        clifford_ergotropy: cl,
        clifford_ergotropy_enumerated: initial_energy - single_qubit_orbit_minimum(&rho, field)?,
        gap: erg - cl,
        stabilizer_fidelity: stabilizer_fidelity_1q(bloch)?,
        min_relative_entropy: min_relative_entropy_1q(bloch)?,
        gap_from_fidelity: gap_from_fidelity_1q(bloch, field)?,
    })
}
