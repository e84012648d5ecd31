//! Verification campaigns over many function tables.
//!
//! Every campaign checks, per instance, the average collision-probability
//! bound (exactly), the equality case for coordinate-wise tables (exactly),
//! and the average Rényi-entropy bound and Jensen step (to [`H2_TOLERANCE`]).
//! Results are deterministic in `(config, seed)`; wall time is kept out of
//! the serialized form for that reason.

use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dist::Rational;
use crate::error::{Error, Result};
use crate::family::{
    self, bounds, collision_total, family_averages, image_stats, joint_collision,
    shell_decomposition, square_family, tightness_predictions, Budget, FunctionTable, ImageStats,
    Predictions, ShellDecomposition, TableFile, TheoremReport,
};
use crate::gf::{field_of_order, FieldSpec, FieldVector};
use crate::serial::{float15, round_sig15};

/// Floating tolerance for entropy comparisons.
pub const H2_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Random,
    Hillclimb,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub q: u32,
    pub n: usize,
    pub mode: Mode,
    pub samples: usize,
    pub iters: usize,
    pub restarts: usize,
    pub seed: u64,
    pub budget: Budget,
    /// How many sampled instances also get the joint-collision and shell checks.
    pub identity_checks: usize,
}

impl CampaignConfig {
    pub fn new(q: u32, n: usize, mode: Mode) -> Self {
        CampaignConfig {
            q,
            n,
            mode,
            samples: 1000,
            iters: 5000,
            restarts: 4,
            seed: 0,
            budget: Budget::default(),
            identity_checks: 50,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }
}

/// One row of a campaign: the CSV columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceSummary {
    pub digest: String,
    pub avg_cp: Rational,
    #[serde(with = "float15")]
    pub avg_h2: f64,
    #[serde(with = "float15")]
    pub avg_shannon: f64,
    pub coordinatewise: bool,
    pub equality: bool,
}

/// Distance to the bounds: `cp_bound - avg_cp` and `avg_h2 - h2_bound`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlackSummary {
    pub cp_slack_min: Rational,
    pub cp_slack_max: Rational,
    #[serde(with = "float15")]
    pub h2_slack_min: f64,
    #[serde(with = "float15")]
    pub h2_slack_mean: f64,
    #[serde(with = "float15")]
    pub h2_slack_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub iter: usize,
    pub avg_cp: Rational,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignResult {
    pub config: CampaignConfig,
    pub cp_bound: Rational,
    #[serde(with = "float15")]
    pub h2_bound: f64,
    pub instances: Vec<InstanceSummary>,
    pub slack: Option<SlackSummary>,
    pub max_avg_cp: Rational,
    /// Tables attaining `max_avg_cp` (exhaustive and hill-climb modes).
    pub argmax: Vec<TableFile>,
    pub argmax_all_coordinatewise: bool,
    pub coordinatewise_count: usize,
    /// Instances that also went through the joint-collision and shell checks.
    pub identity_checked: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trajectories: Vec<Vec<TrajectoryPoint>>,
    pub violations: Vec<String>,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl CampaignResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("campaign results serialize")
    }

    /// One row per instance.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("digest,avg_cp,avg_h2,avg_shannon,coordinatewise,equality\n");
        for s in &self.instances {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                s.digest,
                s.avg_cp,
                round_sig15(s.avg_h2),
                round_sig15(s.avg_shannon),
                s.coordinatewise,
                s.equality
            ));
        }
        out
    }
}

/// Checks the bound, equality clause, entropy bound and Jensen step of one report.
pub fn check_report(label: &str, report: &TheoremReport) -> Vec<String> {
    let mut v = Vec::new();
    if report.avg_cp > report.cp_bound {
        v.push(format!("{label}: avg_cp {} exceeds bound {}", report.avg_cp, report.cp_bound));
    }
    if report.coordinatewise && !report.equality_holds {
        v.push(format!(
            "{label}: coordinate-wise table has avg_cp {} != bound {}",
            report.avg_cp, report.cp_bound
        ));
    }
    if report.avg_h2 < report.h2_bound - H2_TOLERANCE {
        v.push(format!(
            "{label}: avg_h2 {} below bound {}",
            report.avg_h2, report.h2_bound
        ));
    }
    let jensen = report.avg_cp.neg_log2();
    if report.avg_h2 < jensen - H2_TOLERANCE {
        v.push(format!("{label}: avg_h2 {} below -log2(avg_cp) {jensen}", report.avg_h2));
    }
    if report.avg_shannon < report.avg_h2 - H2_TOLERANCE {
        v.push(format!(
            "{label}: avg Shannon {} below avg Rényi {}",
            report.avg_shannon, report.avg_h2
        ));
    }
    v
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Checks the joint-collision identity and the shell decomposition against `avg_cp`.
pub fn check_identities(
    label: &str,
    f: &FunctionTable,
    report: &TheoremReport,
    joint: &Rational,
    shells: &ShellDecomposition,
) -> Vec<String> {
    let mut v = Vec::new();
    let q = f.field().q() as u128;
    let n = f.n();
    if *joint != report.avg_cp {
        v.push(format!("{label}: joint collision {joint} != avg_cp {}", report.avg_cp));
    }
    if shells.total != *joint {
        v.push(format!("{label}: shell total {} != joint collision {joint}", shells.total));
    }
    for sh in &shells.shells {
        let mass = Rational::new(binomial(n, sh.d) * (q - 1).pow(sh.d as u32), q.pow(n as u32));
        if sh.shell_mass != mass {
            v.push(format!("{label}: shell {} mass {} != {mass}", sh.d, sh.shell_mass));
        }
        let cap = Rational::new(1u32, q.pow(sh.d as u32));
        if sh.conditional_collision > cap {
            v.push(format!("{label}: shell {} collision exceeds q^-d", sh.d));
        }
        if report.coordinatewise && sh.pairs > 0 && sh.conditional_collision != cap {
            v.push(format!("{label}: coordinate-wise shell {} below q^-d", sh.d));
        }
        if sh.irregular_pairs > 0 {
            v.push(format!(
                "{label}: shell {} has {} pairs with key probability outside {{0, q^-d}}",
                sh.d, sh.irregular_pairs
            ));
        }
    }
    v
}

/// Checks the univariate image-size corollaries.
pub fn check_images(label: &str, stats: &ImageStats) -> Vec<String> {
    let mut v = Vec::new();
    if stats.max_exceeds_half == Some(false) {
        v.push(format!("{label}: no key has image size above q/2"));
    }
    if stats.average_meets_bound == Some(false) {
        v.push(format!("{label}: average image size {} below q^2/(2q-1)", stats.average));
    }
    v
}

fn summarize(f: &FunctionTable, r: &TheoremReport) -> InstanceSummary {
    InstanceSummary {
        digest: f.digest(),
        avg_cp: r.avg_cp.clone(),
        avg_h2: r.avg_h2,
        avg_shannon: r.avg_shannon,
        coordinatewise: r.coordinatewise,
        equality: r.equality_holds,
    }
}

struct Evaluated {
    summary: InstanceSummary,
    report: TheoremReport,
    identity_checked: bool,
    violations: Vec<String>,
}

fn evaluate(
    f: &FunctionTable,
    label: String,
    with_identities: bool,
    with_images: bool,
    budget: Budget,
) -> Result<Evaluated> {
    let report = family_averages(f, false, budget)?;
    let mut violations = check_report(&label, &report);
    if with_identities {
        let joint = joint_collision(f, budget)?;
        let shells = shell_decomposition(f, budget)?;
        violations.extend(check_identities(&label, f, &report, &joint, &shells));
    }
    if with_images {
        violations.extend(check_images(&label, &image_stats(f, budget)?));
    }
    Ok(Evaluated {
        summary: summarize(f, &report),
        report,
        identity_checked: with_identities,
        violations,
    })
}

fn campaign_field(config: &CampaignConfig) -> Result<Arc<FieldSpec>> {
    if config.n == 0 {
        return Err(Error::Invalid("dimension n must be at least 1".into()));
    }
    let field = Arc::new(field_of_order(config.q as u64)?);
    let size = (config.q as u128).pow(config.n as u32);
    config.budget.check("per-instance averaging", size * size)?;
    Ok(field)
}

fn slack_summary(evals: &[Evaluated]) -> Option<SlackSummary> {
    if evals.is_empty() {
        return None;
    }
    let cp: Vec<Rational> = evals
        .iter()
        .map(|e| &e.report.cp_bound - &e.report.avg_cp)
        .collect();
    let h2: Vec<f64> = evals
        .iter()
        .map(|e| e.report.avg_h2 - e.report.h2_bound)
        .collect();
    Some(SlackSummary {
        cp_slack_min: cp.iter().min().cloned().unwrap(),
        cp_slack_max: cp.iter().max().cloned().unwrap(),
        h2_slack_min: h2.iter().copied().fold(f64::INFINITY, f64::min),
        h2_slack_mean: h2.iter().sum::<f64>() / h2.len() as f64,
        h2_slack_max: h2.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    })
}

fn assemble(
    config: &CampaignConfig,
    evals: Vec<Evaluated>,
    argmax: Vec<FunctionTable>,
    trajectories: Vec<Vec<TrajectoryPoint>>,
    mut violations: Vec<String>,
    started: Instant,
) -> CampaignResult {
    let b = bounds(config.q, config.n);
    let max_avg_cp = evals
        .iter()
        .map(|e| e.report.avg_cp.clone())
        .max()
        .unwrap_or_else(Rational::zero);
    if max_avg_cp > b.cp_bound {
        violations.push(format!("max avg_cp {max_avg_cp} exceeds bound {}", b.cp_bound));
    }
    for e in &evals {
        violations.extend(e.violations.iter().cloned());
    }
    CampaignResult {
        config: config.clone(),
        cp_bound: b.cp_bound,
        h2_bound: b.h2_bound,
        slack: slack_summary(&evals),
        max_avg_cp,
        argmax_all_coordinatewise: argmax.iter().all(family::is_coordinatewise),
        argmax: argmax.iter().map(FunctionTable::to_file).collect(),
        coordinatewise_count: evals.iter().filter(|e| e.report.coordinatewise).count(),
        identity_checked: evals.iter().filter(|e| e.identity_checked).count(),
        instances: evals.into_iter().map(|e| e.summary).collect(),
        trajectories,
        violations,
        wall_time: started.elapsed(),
    }
}

/// Table number `index` in the mixed-radix order over the output table
/// (input 0 is the least significant digit).
fn nth_table(field: &Arc<FieldSpec>, n: usize, mut index: u128) -> FunctionTable {
    let q = field.q();
    let size = (q as usize).pow(n as u32);
    let mut flat = Vec::with_capacity(size * n);
    for _ in 0..size {
        let out = (index % size as u128) as usize;
        index /= size as u128;
        flat.extend(
            FieldVector::from_linear_index(out, q, n)
                .entries()
                .iter()
                .map(|e| e.index() as u16),
        );
    }
    FunctionTable::from_flat(field.clone(), n, flat)
}

/// Every function `GF(q)^n -> GF(q)^n`, with the identity and image checks
/// applied to each.
pub fn exhaustive_campaign(config: &CampaignConfig) -> Result<CampaignResult> {
    let started = Instant::now();
    let field = campaign_field(config)?;
    let size = (config.q as u128).pow(config.n as u32);
    let count = size
        .checked_pow(size as u32)
        .filter(|&c| c <= config.budget.0 as u128)
        .ok_or(Error::BudgetExceeded {
            what: "exhaustive function space",
            needed: size.checked_pow(size as u32).unwrap_or(u128::MAX),
            budget: config.budget.0 as u128,
        })?;

    let univariate = config.n == 1;
    let evals: Vec<Evaluated> = (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let f = nth_table(&field, config.n, i as u128);
            evaluate(&f, format!("f#{i}"), true, univariate, config.budget)
        })
        .collect::<Result<_>>()?;

    let max = evals.iter().map(|e| &e.report.avg_cp).max().cloned();
    let argmax = evals
        .iter()
        .enumerate()
        .filter(|(_, e)| Some(&e.report.avg_cp) == max.as_ref())
        .map(|(i, _)| nth_table(&field, config.n, i as u128))
        .collect();
    Ok(assemble(config, evals, argmax, Vec::new(), Vec::new(), started))
}

/// A table with every output drawn uniformly from GF(q)^n.
pub fn random_table<R: Rng>(field: &Arc<FieldSpec>, n: usize, rng: &mut R) -> FunctionTable {
    let q = field.q();
    let size = (q as usize).pow(n as u32);
    let flat = (0..size * n).map(|_| rng.random_range(0..q) as u16).collect();
    FunctionTable::from_flat(field.clone(), n, flat)
}

/// `samples` seeded random tables; the first `identity_checks` of them
/// also go through the joint-collision and shell checks.
pub fn random_campaign(config: &CampaignConfig) -> Result<CampaignResult> {
    let started = Instant::now();
    let field = campaign_field(config)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let tables: Vec<FunctionTable> = (0..config.samples)
        .map(|_| random_table(&field, config.n, &mut rng))
        .collect();
    let evals: Vec<Evaluated> = tables
        .par_iter()
        .enumerate()
        .map(|(i, f)| {
            evaluate(
                f,
                format!("sample#{i}"),
                i < config.identity_checks,
                false,
                config.budget,
            )
        })
        .collect::<Result<_>>()?;
    Ok(assemble(config, evals, Vec::new(), Vec::new(), Vec::new(), started))
}

/// Strict-improvement hill climb on the average collision probability.
///
/// Each restart starts from a seeded random table and proposes `iters`
/// single-entry changes; a change is kept only if it strictly increases the
/// objective. The trajectory records the starting value and every accepted
/// improvement.
pub fn hillclimb_search(config: &CampaignConfig) -> Result<CampaignResult> {
    let started = Instant::now();
    let field = campaign_field(config)?;
    let q = field.q();
    let n = config.n;
    let size = (q as usize).pow(n as u32);
    let cube = (size as u128).pow(3);
    let as_rational = |total: u128| Rational::new(total, cube);

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut finals = Vec::with_capacity(config.restarts);
    let mut trajectories = Vec::with_capacity(config.restarts);
    let mut proposal = vec![0u16; n];
    for _ in 0..config.restarts {
        let mut table = random_table(&field, n, &mut rng);
        let mut value = collision_total(&table);
        let mut trajectory = vec![TrajectoryPoint {
            iter: 0,
            avg_cp: as_rational(value),
        }];
        for iter in 1..=config.iters {
            let x = rng.random_range(0..size);
            for p in proposal.iter_mut() {
                *p = rng.random_range(0..q) as u16;
            }
            let old = table.output_raw(x).to_vec();
            if old == proposal {
                continue;
            }
            table.set_output_raw(x, &proposal);
            let candidate = collision_total(&table);
            if candidate > value {
                value = candidate;
                trajectory.push(TrajectoryPoint {
                    iter,
                    avg_cp: as_rational(value),
                });
            } else {
                table.set_output_raw(x, &old);
            }
        }
        finals.push(table);
        trajectories.push(trajectory);
    }

    let evals: Vec<Evaluated> = finals
        .iter()
        .enumerate()
        .map(|(i, f)| evaluate(f, format!("restart#{i}"), false, false, config.budget))
        .collect::<Result<_>>()?;
    let max = evals.iter().map(|e| &e.report.avg_cp).max().cloned();
    let mut argmax: Vec<FunctionTable> = Vec::new();
    for (f, e) in finals.iter().zip(&evals) {
        if Some(&e.report.avg_cp) == max.as_ref() && !argmax.iter().any(|g| g == f) {
            argmax.push(f.clone());
        }
    }
    Ok(assemble(config, evals, argmax, trajectories, Vec::new(), started))
}

pub fn run_campaign(config: &CampaignConfig) -> Result<CampaignResult> {
    match config.mode {
        Mode::Exhaustive => exhaustive_campaign(config),
        Mode::Random => random_campaign(config),
        Mode::Hillclimb => hillclimb_search(config),
    }
}

/// Full single-table verification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceReport {
    pub digest: String,
    pub table: TableFile,
    pub report: TheoremReport,
    /// Absent when the decomposition does not fit the budget.
    pub joint_collision: Option<Rational>,
    pub shells: Option<ShellDecomposition>,
    pub images: Option<ImageStats>,
    pub square_map: bool,
    pub predictions: Option<Predictions>,
    pub violations: Vec<String>,
}

impl InstanceReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance reports serialize")
    }
}

/// Evaluates every check that applies to `f`, including the square-map
/// predictions when `f` is the square map.
pub fn verify_instance(f: &FunctionTable, keep_per_k: bool, budget: Budget) -> Result<InstanceReport> {
    let label = "instance";
    let report = family_averages(f, keep_per_k, budget)?;
    let mut violations = check_report(label, &report);

    let size = f.size() as u128;
    let q = f.field().q() as u128;
    let (joint, shells) = if size * size * q <= budget.0 as u128 {
        let joint = joint_collision(f, budget)?;
        let shells = shell_decomposition(f, budget)?;
        violations.extend(check_identities(label, f, &report, &joint, &shells));
        (Some(joint), Some(shells))
    } else {
        (None, None)
    };

    let images = image_stats(f, budget)?;
    violations.extend(check_images(label, &images));

    let square_map = *f == square_family(f.field().clone(), f.n());
    let predictions = square_map.then(|| tightness_predictions(f.field().q(), f.n()));
    if let Some(p) = &predictions {
        if (report.avg_shannon - p.avg_shannon).abs() > H2_TOLERANCE {
            violations.push(format!(
                "square map: avg Shannon {} != predicted {}",
                report.avg_shannon, p.avg_shannon
            ));
        }
        if (report.avg_h2 - p.avg_h2).abs() > H2_TOLERANCE {
            violations.push(format!(
                "square map: avg Rényi {} != predicted {}",
                report.avg_h2, p.avg_h2
            ));
        }
    }

    Ok(InstanceReport {
        digest: f.digest(),
        table: f.to_file(),
        report,
        joint_collision: joint,
        shells,
        images: Some(images),
        square_map,
        predictions,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(q: u64) -> Arc<FieldSpec> {
        Arc::new(field_of_order(q).unwrap())
    }

    #[test]
    fn exhaustive_gf2_all_equal() {
        let r = exhaustive_campaign(&CampaignConfig::new(2, 1, Mode::Exhaustive)).unwrap();
        assert_eq!(r.instances.len(), 4);
        assert!(r.instances.iter().all(|s| s.avg_cp == Rational::new(3u32, 4u32)));
        assert!(r.violations.is_empty());
        assert_eq!(r.argmax.len(), 4);
        assert_eq!(r.identity_checked, 4);
    }

    #[test]
    fn exhaustive_gf3_all_equal() {
        let r = exhaustive_campaign(&CampaignConfig::new(3, 1, Mode::Exhaustive)).unwrap();
        assert_eq!(r.instances.len(), 27);
        assert!(r.instances.iter().all(|s| s.avg_cp == Rational::new(5u32, 9u32)));
        assert!(r.violations.is_empty());
    }

    #[test]
    fn identity_table_is_hand_checkable() {
        // f = id over GF(2): k = 0 gives cp 1/2, k = 1 gives g = 0 with cp 1.
        let f = FunctionTable::from_rows(field(2), 1, &[vec![0], vec![1]]).unwrap();
        let r = family_averages(&f, true, Budget::default()).unwrap();
        let cps: Vec<Rational> = r.per_k.unwrap().into_iter().map(|k| k.cp).collect();
        assert_eq!(cps, vec![Rational::new(1u32, 2u32), Rational::one()]);
        assert_eq!(r.avg_cp, Rational::new(3u32, 4u32));
    }

    #[test]
    fn exhaustive_order_is_mixed_radix() {
        let f = field(2);
        let t = nth_table(&f, 1, 2);
        assert_eq!(t.to_file().outputs, vec![vec![0], vec![1]]);
        let t = nth_table(&f, 2, 4 * 4 * 4 * 3 + 1);
        assert_eq!(t.to_file().outputs, vec![vec![1, 0], vec![0, 0], vec![0, 0], vec![1, 1]]);
    }

    #[test]
    fn exhaustive_budget_is_enforced() {
        let mut cfg = CampaignConfig::new(2, 2, Mode::Exhaustive);
        cfg.budget = Budget(255);
        assert!(matches!(exhaustive_campaign(&cfg), Err(Error::BudgetExceeded { .. })));
        let cfg = CampaignConfig::new(3, 2, Mode::Exhaustive);
        let mut small = cfg.clone();
        small.budget = Budget(1 << 20);
        assert!(exhaustive_campaign(&small).is_err());
    }

    #[test]
    fn random_campaign_small() {
        let cfg = CampaignConfig::new(3, 2, Mode::Random).with_seed(42).with_samples(100);
        let r = random_campaign(&cfg).unwrap();
        assert!(r.violations.is_empty(), "{:?}", r.violations);
        assert_eq!(r.instances.len(), 100);
        assert_eq!(r.identity_checked, 50);
        let again = random_campaign(&cfg).unwrap();
        assert_eq!(r.to_json(), again.to_json());
        let other = random_campaign(&cfg.clone().with_seed(43)).unwrap();
        assert_ne!(r.to_json(), other.to_json());
    }

    #[test]
    fn univariate_random_is_exact() {
        let cfg = CampaignConfig::new(8, 1, Mode::Random).with_samples(200);
        let r = random_campaign(&cfg).unwrap();
        assert!(r.instances.iter().all(|s| s.avg_cp == Rational::new(15u32, 64u32)));
    }

    #[test]
    fn hillclimb_is_monotone() {
        let mut cfg = CampaignConfig::new(2, 2, Mode::Hillclimb).with_seed(7);
        cfg.iters = 2000;
        let r = hillclimb_search(&cfg).unwrap();
        assert_eq!(r.trajectories.len(), 4);
        for t in &r.trajectories {
            assert!(t.windows(2).all(|w| w[0].avg_cp < w[1].avg_cp && w[0].iter < w[1].iter));
        }
        assert!(r.max_avg_cp <= r.cp_bound);
        assert!(r.violations.is_empty());
    }

    #[test]
    fn hillclimb_univariate_stays_optimal() {
        let mut cfg = CampaignConfig::new(3, 1, Mode::Hillclimb).with_seed(1);
        cfg.iters = 200;
        let r = hillclimb_search(&cfg).unwrap();
        assert_eq!(r.max_avg_cp, Rational::new(5u32, 9u32));
        // Every table is optimal, so nothing is ever accepted.
        assert!(r.trajectories.iter().all(|t| t.len() == 1));
    }

    #[test]
    fn verify_square_maps() {
        let r = verify_instance(&square_family(field(2), 1), false, Budget::default()).unwrap();
        assert!(r.square_map);
        assert_eq!(r.report.avg_h2, 0.5);
        assert!(r.violations.is_empty());

        let r = verify_instance(&square_family(field(5), 2), false, Budget::default()).unwrap();
        let expected = 2.0 * 5f64.log2() - 2.0 * (9.0f64 / 5.0).log2();
        assert!((r.report.avg_h2 - expected).abs() < 1e-9);
        assert!(r.violations.is_empty(), "{:?}", r.violations);
    }

    #[test]
    fn verify_swap() {
        let f = FunctionTable::from_fn(field(2), 2, |x| {
            let e = x.entries();
            FieldVector::new(vec![e[1], e[0]]).unwrap()
        })
        .unwrap();
        let r = verify_instance(&f, false, Budget::default()).unwrap();
        assert!(!r.report.equality_holds);
        assert_eq!(r.report.avg_cp, Rational::new(5u32, 16u32));
        assert!(!r.square_map);
        assert!(r.violations.is_empty());
    }

    #[test]
    fn broken_reports_are_flagged() {
        let mut r = family_averages(&square_family(field(3), 1), false, Budget::default()).unwrap();
        assert!(check_report("ok", &r).is_empty());
        r.avg_cp = Rational::new(2u32, 3u32);
        r.equality_holds = false;
        let v = check_report("bad", &r);
        assert!(v.iter().any(|s| s.contains("exceeds bound")));
        assert!(v.iter().any(|s| s.contains("coordinate-wise")));
    }

    #[test]
    fn csv_has_one_row_per_instance() {
        let r = exhaustive_campaign(&CampaignConfig::new(2, 1, Mode::Exhaustive)).unwrap();
        let csv = r.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[0], "digest,avg_cp,avg_h2,avg_shannon,coordinatewise,equality");
        assert!(lines[1].contains(",3/4,"));
    }
}
