//! Seeded random ensembles and Monte-Carlo property checks.
//!
//! Every sample `i` draws from its own ChaCha stream derived from
//! `(seed, stream, i)`, so results do not depend on evaluation order and a
//! `(seed, count)` pair reproduces a report byte for byte.

use std::fmt;

use nalgebra::{Matrix2, Matrix4, Vector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::{self, epr_delta_unchecked};
use crate::error::{Error, Result};
use crate::symmetrization;
use crate::symplectic::{self, CovarianceMatrix, StandardForm};

/// Acceptance rate below which rejection sampling gives up.
const MIN_ACCEPTANCE: f64 = 1e-3;
const REJECTION_WINDOW: usize = 1_000_000;

/// Slack on `Delta(mixture) >= sum p_j Delta(component)`.
pub const CONCAVITY_SLACK: f64 = 1e-12;
/// Relative slack on `sum p_j <R>_j^2 >= (sum p_j <R>_j)^2`.
pub const CAUCHY_SCHWARZ_SLACK: f64 = 1e-14;
/// Pairwise agreement required between the three first-bound routes.
pub const PIPELINE_AGREEMENT: f64 = 1e-8;
/// Agreement of bounds before and after a random local symplectic.
pub const INVARIANCE_AGREEMENT: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
}

impl Range {
    pub const fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    fn sample(&self, rng: &mut impl Rng) -> f64 {
        if self.lo == self.hi {
            self.lo
        } else {
            rng.random_range(self.lo..self.hi)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleConfig {
    pub seed: u64,
    pub count: usize,
    pub n: Range,
    pub m: Range,
    pub kx: Range,
    pub kp: Range,
    /// Bound on `|log s|` for each single-mode squeeze; `2.0` keeps squeezes
    /// within `e^2`.
    pub max_log_squeeze: f64,
}

impl Default for EnsembleConfig {
    fn default() -> Self {
        Self {
            seed: 0x0005_eed0_fe0f,
            count: 1000,
            n: Range::new(1.0, 4.0),
            m: Range::new(1.0, 4.0),
            kx: Range::new(0.0, 2.5),
            kp: Range::new(-2.5, 0.0),
            max_log_squeeze: 2.0,
        }
    }
}

impl EnsembleConfig {
    pub fn with_seed(seed: u64, count: usize) -> Self {
        Self {
            seed,
            count,
            ..Self::default()
        }
    }

    /// Restricts the box to `n = m`.
    pub fn symmetric(mut self) -> Self {
        self.m = self.n;
        self
    }
}

/// Deterministic sub-stream for one sample.
pub fn substream(seed: u64, stream: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng.set_word_pos(u128::from(index) << 40);
    rng
}

const STREAM_STATES: u64 = 1;
const STREAM_SYMPLECTIC: u64 = 2;
const STREAM_MIXTURES: u64 = 3;

fn draw_quadruple(cfg: &EnsembleConfig, rng: &mut impl Rng, symmetric: bool) -> Option<StandardForm> {
    let n = cfg.n.sample(rng);
    let m = if symmetric { n } else { cfg.m.sample(rng) };
    let (kx, kp) = (cfg.kx.sample(rng), cfg.kp.sample(rng));
    let canonical = m >= n && kp <= 0.0 && kx >= kp.abs();
    let sf = StandardForm::new(n, m, kx, kp);
    (canonical && symplectic::classify(&sf).is_entangled()).then_some(sf)
}

/// Draws one canonical entangled quadruple from the box, rejecting the rest.
/// Returns the sample and the number of draws it took.
fn draw_entangled(cfg: &EnsembleConfig, rng: &mut impl Rng, symmetric: bool) -> Result<(StandardForm, usize)> {
    for draw in 1..=REJECTION_WINDOW {
        if let Some(sf) = draw_quadruple(cfg, rng, symmetric) {
            return Ok((sf, draw));
        }
    }
    Err(Error::ExhaustedRejection {
        accepted: 0,
        draws: REJECTION_WINDOW,
    })
}

fn sample_ensemble(cfg: &EnsembleConfig, symmetric: bool) -> Result<Vec<StandardForm>> {
    let mut out = Vec::with_capacity(cfg.count);
    let mut draws = 0;
    for i in 0..cfg.count {
        let mut rng = substream(cfg.seed, STREAM_STATES, i as u64);
        let (sf, used) = draw_entangled(cfg, &mut rng, symmetric)?;
        out.push(sf);
        draws += used;
        if draws >= REJECTION_WINDOW && (out.len() as f64) < MIN_ACCEPTANCE * draws as f64 {
            return Err(Error::ExhaustedRejection {
                accepted: out.len(),
                draws,
            });
        }
    }
    Ok(out)
}

/// Canonical entangled quadruples drawn uniformly from the configured box.
pub fn random_entangled_standard_form(cfg: &EnsembleConfig) -> Result<Vec<StandardForm>> {
    sample_ensemble(cfg, false)
}

/// As [`random_entangled_standard_form`] with `n = m`.
pub fn random_symmetric_entangled_standard_form(cfg: &EnsembleConfig) -> Result<Vec<StandardForm>> {
    sample_ensemble(cfg, true)
}

/// Rotation-squeeze-rotation with unit determinant.
fn random_mode_block(rng: &mut impl Rng, max_log_squeeze: f64) -> Matrix2<f64> {
    let rot = |t: f64| Matrix2::new(t.cos(), -t.sin(), t.sin(), t.cos());
    let (t1, t2) = (
        rng.random_range(0.0..std::f64::consts::TAU),
        rng.random_range(0.0..std::f64::consts::TAU),
    );
    let r = if max_log_squeeze > 0.0 {
        rng.random_range(-max_log_squeeze..max_log_squeeze)
    } else {
        0.0
    };
    let s = r.exp();
    rot(t1) * Matrix2::new(s, 0.0, 0.0, 1.0 / s) * rot(t2)
}

/// Block-diagonal local symplectic from the sample stream `(seed, index)`.
pub fn random_local_symplectic(seed: u64, index: u64, max_log_squeeze: f64) -> Matrix4<f64> {
    let mut rng = substream(seed, STREAM_SYMPLECTIC, index);
    let b1 = random_mode_block(&mut rng, max_log_squeeze);
    let b2 = random_mode_block(&mut rng, max_log_squeeze);
    symplectic::local_symplectic(&b1, &b2)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub index: usize,
    pub detail: String,
}

/// Outcome of one Monte-Carlo suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationReport {
    pub suite: String,
    pub seed: u64,
    pub samples: usize,
    pub tolerance: f64,
    /// Largest observed deviation, in the suite's own metric.
    pub max_deviation: f64,
    pub violations: Vec<Violation>,
}

impl ViolationReport {
    fn new(suite: &str, seed: u64, tolerance: f64) -> Self {
        Self {
            suite: suite.to_owned(),
            seed,
            samples: 0,
            tolerance,
            max_deviation: 0.0,
            violations: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn record(&mut self, index: usize, detail: String) {
        self.violations.push(Violation { index, detail });
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for ViolationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<22} {}  samples={} max_deviation={:.3e} tolerance={:.0e} violations={}",
            self.suite,
            if self.passed() { "PASS" } else { "FAIL" },
            self.samples,
            self.max_deviation,
            self.tolerance,
            self.violations.len()
        )?;
        for v in self.violations.iter().take(20) {
            writeln!(f, "    #{}: {}", v.index, v.detail)?;
        }
        if self.violations.len() > 20 {
            writeln!(f, "    ... {} more", self.violations.len() - 20)?;
        }
        Ok(())
    }
}

/// One Gaussian component of a mixture: a covariance matrix plus means.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Component {
    pub weight: f64,
    pub cm: CovarianceMatrix,
    pub mean: Vector4<f64>,
}

/// Covariance matrix of a mixture. Covariances are `gamma / 2`, so the
/// spread of the means enters with a factor 2.
pub fn mixture_cm(components: &[Component]) -> Matrix4<f64> {
    let mean: Vector4<f64> = components.iter().map(|c| c.mean * c.weight).sum();
    let mut second = Matrix4::zeros();
    for c in components {
        second += c.weight * (c.cm.entries() + 2.0 * c.mean * c.mean.transpose());
    }
    second - 2.0 * mean * mean.transpose()
}

/// Expectations of `X1 - X2` and `P1 + P2` for a mean vector.
fn epr_means(mean: &Vector4<f64>) -> (f64, f64) {
    (mean[0] - mean[2], mean[1] + mean[3])
}

fn random_component_cm(cfg: &EnsembleConfig, rng: &mut impl Rng) -> Result<CovarianceMatrix> {
    let sf = match rng.random_range(0..3) {
        // entangled
        0 => draw_entangled(cfg, rng, false)?.0,
        // thermal product
        1 => StandardForm::new(rng.random_range(1.0..4.0), rng.random_range(1.0..4.0), 0.0, 0.0),
        // pure two-mode squeezed
        _ => {
            let r: f64 = rng.random_range(0.0..1.5);
            let (c, s) = ((2.0 * r).cosh(), (2.0 * r).sinh());
            StandardForm::new(c, c, s, -s)
        }
    };
    let b1 = random_mode_block(rng, cfg.max_log_squeeze.min(1.0));
    let b2 = random_mode_block(rng, cfg.max_log_squeeze.min(1.0));
    symplectic::apply_local_symplectic(
        &symplectic::cm_from_standard_form(&sf),
        &symplectic::local_symplectic(&b1, &b2),
    )
}

/// Random finite mixture for sample `index`: 1 to 5 components, random
/// weights, and means that are zero for about a quarter of the mixtures.
pub fn random_mixture(cfg: &EnsembleConfig, index: u64) -> Result<Vec<Component>> {
    let mut rng = substream(cfg.seed, STREAM_MIXTURES, index);
    let k = rng.random_range(1..=5usize);
    let zero_mean = rng.random_bool(0.25);
    let raw: Vec<f64> = (0..k).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let mut out = Vec::with_capacity(k);
    for w in raw {
        let cm = random_component_cm(cfg, &mut rng)?;
        let mean = if zero_mean {
            Vector4::zeros()
        } else {
            Vector4::from_fn(|_, _| rng.random_range(-2.0..2.0))
        };
        out.push(Component {
            weight: w / total,
            cm,
            mean,
        });
    }
    Ok(out)
}

/// Concavity of the EPR correlation under mixing, and the Cauchy-Schwarz
/// step on the component means that it rests on.
pub fn concavity_check(cfg: &EnsembleConfig) -> Result<ViolationReport> {
    let mut report = ViolationReport::new("concavity", cfg.seed, CONCAVITY_SLACK);
    for i in 0..cfg.count {
        let components = random_mixture(cfg, i as u64)?;
        let mixed = CovarianceMatrix::symmetrize_within(mixture_cm(&components), 1e-9, symplectic::Role::State)?;
        let delta_mix = epr_delta_unchecked(&mixed);
        let weighted: f64 = components.iter().map(|c| c.weight * epr_delta_unchecked(&c.cm)).sum();
        let gap = weighted - delta_mix;
        report.max_deviation = report.max_deviation.max(gap);
        if gap > CONCAVITY_SLACK {
            report.record(
                i,
                format!("Delta(mix) = {delta_mix:.17e} < sum p Delta = {weighted:.17e}"),
            );
        }
        for (name, pick) in [("X1-X2", 0usize), ("P1+P2", 1usize)] {
            let values: Vec<(f64, f64)> = components
                .iter()
                .map(|c| {
                    let (x, p) = epr_means(&c.mean);
                    (c.weight, if pick == 0 { x } else { p })
                })
                .collect();
            let lhs: f64 = values.iter().map(|(w, r)| w * r * r).sum();
            let mean: f64 = values.iter().map(|(w, r)| w * r).sum();
            let rhs = mean * mean;
            if rhs - lhs > CAUCHY_SCHWARZ_SLACK * lhs.max(1.0) {
                report.record(i, format!("Cauchy-Schwarz on {name}: {lhs:.17e} < {rhs:.17e}"));
            }
        }
        report.samples += 1;
    }
    Ok(report)
}

/// The three routes to the first bound on each sampled state, with the
/// pipeline and invariant routes fed a locally scrambled covariance matrix.
pub fn pipeline_equivalence_check(cfg: &EnsembleConfig) -> Result<ViolationReport> {
    let mut report = ViolationReport::new("pipeline_equivalence", cfg.seed, PIPELINE_AGREEMENT);
    let states = random_entangled_standard_form(cfg)?;
    for (i, sf) in states.iter().enumerate() {
        let s = random_local_symplectic(cfg.seed, i as u64, cfg.max_log_squeeze);
        let gamma = symplectic::apply_local_symplectic(&symplectic::cm_from_standard_form(sf), &s)?;
        let routes = (
            bounds::lb1(sf),
            symmetrization::lb1_via_invariant_chain(&gamma),
            symmetrization::lb1_via_pipeline(&gamma),
        );
        match routes {
            (Ok(closed), Ok(chain), Ok(pipe)) => {
                let dev = (closed - chain)
                    .abs()
                    .max((closed - pipe).abs())
                    .max((chain - pipe).abs());
                report.max_deviation = report.max_deviation.max(dev);
                if dev > PIPELINE_AGREEMENT {
                    report.record(
                        i,
                        format!(
                            "{:?}: closed={closed:.15e} chain={chain:.15e} pipeline={pipe:.15e}",
                            sf.as_tuple()
                        ),
                    );
                }
            }
            (a, b, c) => report.record(i, format!("{:?}: {a:?} / {b:?} / {c:?}", sf.as_tuple())),
        }
        report.samples += 1;
    }
    Ok(report)
}

/// Both bounds recomputed from `standard_form(S g S^T)` for random local `S`.
pub fn invariance_check(cfg: &EnsembleConfig) -> Result<ViolationReport> {
    let mut report = ViolationReport::new("local_invariance", cfg.seed, INVARIANCE_AGREEMENT);
    let states = random_entangled_standard_form(cfg)?;
    for (i, sf) in states.iter().enumerate() {
        let s = random_local_symplectic(cfg.seed, i as u64, cfg.max_log_squeeze);
        let scrambled = symplectic::apply_local_symplectic(&symplectic::cm_from_standard_form(sf), &s)?;
        let outcome = symplectic::standard_form(&scrambled).and_then(|recovered| {
            Ok((
                bounds::lb1(sf)?,
                bounds::lb1(&recovered)?,
                bounds::lb2(sf)?,
                bounds::lb2(&recovered)?,
            ))
        });
        match outcome {
            Ok((l1, l1s, l2, l2s)) => {
                let dev = (l1 - l1s).abs().max((l2 - l2s).abs());
                report.max_deviation = report.max_deviation.max(dev);
                if dev > INVARIANCE_AGREEMENT {
                    report.record(
                        i,
                        format!(
                            "{:?}: lb1 {l1:.15e} -> {l1s:.15e}, lb2 {l2:.15e} -> {l2s:.15e}",
                            sf.as_tuple()
                        ),
                    );
                }
            }
            Err(e) => report.record(i, format!("{:?}: {e}", sf.as_tuple())),
        }
        report.samples += 1;
    }
    Ok(report)
}

/// Runs every suite with the same configuration.
pub fn run_all(cfg: &EnsembleConfig) -> Result<Vec<ViolationReport>> {
    Ok(vec![
        concavity_check(cfg)?,
        pipeline_equivalence_check(cfg)?,
        invariance_check(cfg)?,
    ])
}
