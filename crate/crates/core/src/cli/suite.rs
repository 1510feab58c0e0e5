//! Seeded property suites behind `biqap property-suite`.

use serde::Serialize;

use crate::channels::{apply_kraus, random_channel_kraus, BidirectionalChannel};
use crate::conic::SolverSettings;
use crate::divergences::{d_max_eigen, d_max_sdp, sandwiched_renyi};
use crate::measures::amortization_check_rains;
use crate::protocols::{privacy_test, random_private_state, sample_separable};
use crate::qcore::{afw_bound, cnot, conditional_entropy, random_density, relative_entropy, seeded_rng, swap_gate, trace_norm};
use crate::Result;

#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub trials: usize,
    pub failures: usize,
    /// largest observed violation of the checked inequality (≤ 0 when it holds)
    pub worst_margin: f64,
    pub skipped: usize,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteSummary {
    pub seed: u64,
    pub trials: usize,
    pub all_passed: bool,
    pub warnings: Vec<String>,
    pub suites: Vec<SuiteResult>,
}

struct Tally {
    name: &'static str,
    trials: usize,
    failures: usize,
    worst: f64,
    skipped: usize,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally { name, trials: 0, failures: 0, worst: f64::NEG_INFINITY, skipped: 0 }
    }

    /// Record `lhs ≤ rhs + tol`.
    fn leq(&mut self, lhs: f64, rhs: f64, tol: f64) {
        self.trials += 1;
        let m = lhs - rhs;
        self.worst = self.worst.max(m);
        if !(m <= tol) {
            self.failures += 1;
        }
    }

    fn finish(self) -> SuiteResult {
        SuiteResult {
            name: self.name.into(),
            trials: self.trials,
            failures: self.failures,
            worst_margin: if self.trials == 0 { 0.0 } else { self.worst },
            skipped: self.skipped,
            passed: self.failures == 0,
        }
    }
}

fn amortization(name: &'static str, gate: &crate::qcore::CMat, trials: usize, seed: u64, settings: &SolverSettings) -> Result<SuiteResult> {
    let n = BidirectionalChannel::from_unitary(gate, 2, 2)?;
    let rep = amortization_check_rains(&n, trials, seed, settings)?;
    let mut t = Tally::new(name);
    for d in &rep.differences {
        t.leq(*d, rep.bound, 1e-6);
    }
    t.skipped = rep.skipped;
    Ok(t.finish())
}

pub fn run_suites(seed: u64, trials: usize, settings: &SolverSettings) -> Result<SuiteSummary> {
    let mut warnings = Vec::new();
    if trials == 0 {
        warnings.push("trials = 0: every suite passes vacuously".to_string());
    }
    let mut suites = vec![
        amortization("amortization_cnot", &cnot(), trials, seed, settings)?,
        amortization("amortization_swap", &swap_gate(2), trials, seed.wrapping_add(1_000_003), settings)?,
    ];

    let mut rng = seeded_rng(seed);
    let mut dp = Tally::new("data_processing");
    let mut mono = Tally::new("alpha_monotonicity");
    let mut dmax = Tally::new("dmax_eigen_vs_sdp");
    for k in 0..trials {
        let r = random_density(2, &mut rng);
        let s = random_density(2, &mut rng);
        let ks = random_channel_kraus(2, 2, 2, &mut rng)?;
        let (nr, ns) = (apply_kraus(&ks, &r), apply_kraus(&ks, &s));
        dp.leq(relative_entropy(&nr, &ns), relative_entropy(&r, &s), 1e-7);
        for a in [0.5, 2.0] {
            dp.leq(sandwiched_renyi(&nr, &ns, a)?.value, sandwiched_renyi(&r, &s, a)?.value, 1e-7);
        }
        let alphas = [0.5, 0.8, 1.5, 2.0, 3.0];
        let vals: Vec<f64> = alphas.iter().map(|a| sandwiched_renyi(&r, &s, *a).map(|v| v.value)).collect::<Result<_>>()?;
        for w in vals.windows(2) {
            mono.leq(w[0], w[1], 1e-9);
        }
        if k < 20 {
            match d_max_sdp(&r, &s, settings) {
                Ok(v) => {
                    let e = d_max_eigen(&r, &s)?;
                    dmax.leq((v.value - e).abs(), 0.0, 1e-6);
                }
                Err(_) => dmax.skipped += 1,
            }
        }
    }
    suites.push(dp.finish());
    suites.push(mono.finish());
    suites.push(dmax.finish());

    let mut priv_pass = Tally::new("privacy_test_private_states");
    let mut priv_sep = Tally::new("privacy_test_separable");
    for _ in 0..trials {
        let g = random_private_state(2, [2, 2], &mut rng)?;
        let t = privacy_test(&g);
        priv_pass.leq((t.pass_probability(&g.gamma) - 1.0).abs(), 0.0, 1e-10);
        for _ in 0..4 {
            let s = sample_separable(g.dims(), 8, &mut rng);
            priv_sep.leq(t.pass_probability(&s), 0.5, 1e-9);
        }
    }
    suites.push(priv_pass.finish());
    suites.push(priv_sep.finish());

    let mut afw = Tally::new("afw_continuity");
    for _ in 0..trials {
        let r = random_density(4, &mut rng);
        let s = random_density(4, &mut rng);
        let eps = 0.5 * trace_norm(&(&r - &s));
        let diff = (conditional_entropy(&r, &[2, 2], &[0]) - conditional_entropy(&s, &[2, 2], &[0])).abs();
        afw.leq(diff, afw_bound(eps, 2), 1e-9);
    }
    suites.push(afw.finish());

    let all_passed = suites.iter().all(|s| s.passed);
    Ok(SuiteSummary { seed, trials, all_passed, warnings, suites })
}
