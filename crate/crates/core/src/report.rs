//! Verification suites and their machine-readable reports.
//!
//! Each suite runs a set of checks against pinned expected values and
//! tolerances. The structured rendering is line-delimited `key=value`
//! records, byte-identical across runs of the same configuration.

use std::fmt::Write as _;

use crate::algorithms::{
    self, dj_kernel, grover_kernel, grover_n4, perm_partition, simon_kernel,
    synthesize_rotation, x_distribution,
};
use crate::bits::BitString;
use crate::classical::{self, Objective};
use crate::families::{self, good_half_tables, Advice, BitAdvice};
use crate::hilbert::{self, state_distance, BlockState, Projector, Register};
use crate::histories::{branch_through_rotation, enumerate_histories, phased_sum, AdviceMode};
use crate::reference::{self, TEST_PHASES};
use crate::relational::{
    self, backdate, even_share_check, grover2_entropy_ledger, grover2_half_observables,
    Perspective,
};
use crate::SimError;

/// One verified fact: an identifier, what was expected, what was
/// observed, and at which tolerance.
#[derive(Clone, Debug)]
pub struct Check {
    pub id: String,
    pub description: String,
    pub expected: String,
    pub actual: String,
    pub tolerance: String,
    pub pass: bool,
}

impl Check {
    pub fn close(id: &str, description: &str, expected: f64, actual: f64, tol: f64) -> Self {
        Self {
            id: id.into(),
            description: description.into(),
            expected: format!("{expected:.9}"),
            actual: format!("{actual:.9}"),
            tolerance: format!("{tol:e}"),
            pass: (expected - actual).abs() <= tol,
        }
    }

    pub fn count(id: &str, description: &str, expected: usize, actual: usize) -> Self {
        Self {
            id: id.into(),
            description: description.into(),
            expected: expected.to_string(),
            actual: actual.to_string(),
            tolerance: "exact".into(),
            pass: expected == actual,
        }
    }

    pub fn text(id: &str, description: &str, expected: &str, actual: &str) -> Self {
        Self {
            id: id.into(),
            description: description.into(),
            expected: expected.into(),
            actual: actual.into(),
            tolerance: "exact".into(),
            pass: expected == actual,
        }
    }

    pub fn holds(id: &str, description: &str, actual: bool) -> Self {
        Self {
            id: id.into(),
            description: description.into(),
            expected: "true".into(),
            actual: actual.to_string(),
            tolerance: "exact".into(),
            pass: actual,
        }
    }

    /// Phase-insensitive state comparison; the actual value is the
    /// residual distance.
    pub fn state(
        id: &str,
        description: &str,
        expected: &BlockState,
        actual: &BlockState,
        tol: f64,
    ) -> Self {
        let (dist, pass) = match state_distance(expected, actual) {
            Ok(d) => (format!("{d:.3e}"), d <= tol),
            Err(e) => (format!("error: {e}"), false),
        };
        Self {
            id: id.into(),
            description: description.into(),
            expected: "0".into(),
            actual: dist,
            tolerance: format!("{tol:e}"),
            pass,
        }
    }

    pub fn info(id: &str, description: &str, actual: &str) -> Self {
        Self {
            id: id.into(),
            description: description.into(),
            expected: "reported".into(),
            actual: actual.into(),
            tolerance: "none".into(),
            pass: true,
        }
    }
}

/// A named set of checks.
#[derive(Clone, Debug)]
pub struct Report {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(suite: &str) -> Self {
        Self { suite: suite.into(), checks: Vec::new() }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn overall(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.pass)
    }

    /// Deterministic ordered merge by check id.
    pub fn merge(suite: &str, reports: Vec<Report>) -> Report {
        let mut checks: Vec<Check> = reports.into_iter().flat_map(|r| r.checks).collect();
        checks.sort_by(|a, b| a.id.cmp(&b.id));
        Report { suite: suite.into(), checks }
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let verdict = if c.pass { "PASS" } else { "FAIL" };
            writeln!(
                out,
                "[{verdict}] {:<42} expected={} actual={} tol={}",
                c.id, c.expected, c.actual, c.tolerance
            )
            .expect("string write");
        }
        let failures = self.checks.iter().filter(|c| !c.pass).count();
        writeln!(
            out,
            "suite {}: {} ({} checks, {} failures)",
            self.suite,
            if self.overall() { "PASS" } else { "FAIL" },
            self.checks.len(),
            failures
        )
        .expect("string write");
        out
    }

    /// Line-delimited records, one per check, plus a trailing summary
    /// record.
    pub fn render_structured(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            writeln!(
                out,
                "suite={}\tcheck={}\texpected={}\tactual={}\ttol={}\tverdict={}",
                self.suite,
                c.id,
                c.expected,
                c.actual,
                c.tolerance,
                if c.pass { "PASS" } else { "FAIL" }
            )
            .expect("string write");
        }
        let failures = self.checks.iter().filter(|c| !c.pass).count();
        writeln!(
            out,
            "suite={}\toverall={}\tchecks={}\tfailures={}",
            self.suite,
            if self.overall() { "PASS" } else { "FAIL" },
            self.checks.len(),
            failures
        )
        .expect("string write");
        out
    }
}

fn tol() -> f64 {
    crate::TOL_STATE
}

/// State reproduction: every kernel stage and projection outcome against
/// the independently constructed reference states.
pub fn verify_states() -> Report {
    let mut r = Report::new("states");
    match grover_n4() {
        Ok(trace) => {
            r.push(Check::state(
                "states.grover.initial",
                "uniform extended search state",
                &reference::grover2_initial(),
                trace.stage("initial").expect("stage"),
                tol(),
            ));
            r.push(Check::state(
                "states.grover.post_oracle",
                "search state after the oracle stage",
                &reference::grover2_post_oracle(),
                trace.stage("post_oracle").expect("stage"),
                tol(),
            ));
            r.push(Check::state(
                "states.grover.final",
                "maximally correlated search output",
                &reference::grover2_final(),
                trace.stage("final").expect("stage"),
                tol(),
            ));
        }
        Err(e) => r.push(Check::holds("states.grover.run", &format!("kernel ran: {e}"), false)),
    }

    // coherent phased representatives through the observer perspective
    let family = families::grover_family(2).expect("fixed family");
    let phased_in = reference::grover2_phased_initial(&TEST_PHASES);
    match relational::evolve_member(Perspective::Alice, &family, &phased_in) {
        Ok(out) => {
            r.push(Check::state(
                "states.grover.phased_output",
                "phased output state of the observer perspective",
                &reference::grover2_phased_final(&TEST_PHASES),
                &out,
                tol(),
            ));
            let obs_x = grover2_half_observables(Register::X);
            let obs_k = grover2_half_observables(Register::K);
            let half_x0 = obs_x[0].projector(0).expect("projector");
            if let Ok((p, Some(state))) = hilbert::project(&out, &half_x0) {
                r.push(Check::close(
                    "states.grover.half_first_bit.prob",
                    "probability of the first-bit half projection",
                    0.5,
                    p,
                    1e-12,
                ));
                r.push(Check::state(
                    "states.grover.half_first_bit",
                    "output projected by the first X bit",
                    &reference::grover2_half_projected_first_bit(&TEST_PHASES),
                    &state,
                    tol(),
                ));
            }
            let half_k1 = obs_k[1].projector(0).expect("projector");
            if let Ok((_, Some(state))) = hilbert::project(&out, &half_k1) {
                r.push(Check::state(
                    "states.grover.half_second_bit",
                    "output projected by the second K bit",
                    &reference::grover2_half_projected_second_bit(&TEST_PHASES),
                    &state,
                    tol(),
                ));
            }
            let full = Projector::new(Register::X, vec![BitString::zero(2)]).expect("projector");
            if let Ok((p, Some(state))) = hilbert::project(&out, &full) {
                r.push(Check::close(
                    "states.grover.solution.prob",
                    "probability of the full projection",
                    0.25,
                    p,
                    1e-12,
                ));
                r.push(Check::state(
                    "states.grover.solution",
                    "output projected on the solution",
                    &reference::grover2_solution_projected(),
                    &state,
                    tol(),
                ));
            }
            // backdated initial states on both sides
            let back_k = obs_k[0].projector(0).expect("projector");
            if let Ok((_, Some(state))) = hilbert::project(&phased_in, &back_k) {
                r.push(Check::state(
                    "states.grover.backdated_observer",
                    "initial state after backdating the first-bit projection",
                    &reference::grover2_backdated_observer(&TEST_PHASES),
                    &state,
                    tol(),
                ));
            }
            let oracle_in = reference::oracle_view_initial(&TEST_PHASES);
            let back_x = obs_x[1].projector(0).expect("projector");
            if let Ok((_, Some(state))) = hilbert::project(&oracle_in, &back_x) {
                r.push(Check::state(
                    "states.grover.backdated_oracle",
                    "swapped-perspective initial state after backdating",
                    &reference::grover2_backdated_oracle(&TEST_PHASES),
                    &state,
                    tol(),
                ));
            }
            // the swapped perspective reaches the same output state
            match relational::evolve_member(Perspective::Oracle, &family, &oracle_in) {
                Ok(oracle_out) => r.push(Check::state(
                    "states.grover.swapped_output",
                    "swapped perspective reaches the common output",
                    &reference::grover2_phased_final(&TEST_PHASES),
                    &oracle_out,
                    tol(),
                )),
                Err(e) => r.push(Check::holds(
                    "states.grover.swapped_output",
                    &format!("swapped evolution ran: {e}"),
                    false,
                )),
            }
        }
        Err(e) => r.push(Check::holds(
            "states.grover.phased_output",
            &format!("phased evolution ran: {e}"),
            false,
        )),
    }

    match dj_kernel() {
        Ok(trace) => {
            r.push(Check::state(
                "states.dj.initial",
                "uniform extended promise state",
                &reference::dj_initial(),
                trace.stage("initial").expect("stage"),
                tol(),
            ));
            r.push(Check::state(
                "states.dj.post_oracle",
                "promise state after the oracle stage",
                &reference::dj_post_oracle(),
                trace.stage("post_oracle").expect("stage"),
                tol(),
            ));
            r.push(Check::state(
                "states.dj.final",
                "promise state after Hadamard",
                &reference::dj_final(),
                trace.stage("final").expect("stage"),
                tol(),
            ));
        }
        Err(e) => r.push(Check::holds("states.dj.run", &format!("kernel ran: {e}"), false)),
    }

    match simon_kernel(0) {
        Ok(run) => {
            r.push(Check::state(
                "states.simon.initial",
                "uniform extended periodic state",
                &reference::simon_initial(),
                run.trace.stage("initial").expect("stage"),
                tol(),
            ));
            r.push(Check::state(
                "states.simon.post_oracle",
                "periodic state after the oracle stage",
                &reference::simon_post_oracle(),
                run.trace.stage("post_oracle").expect("stage"),
                tol(),
            ));
            r.push(Check::state(
                "states.simon.final",
                "periodic state after Hadamard",
                &reference::simon_final(),
                run.trace.stage("final").expect("stage"),
                tol(),
            ));
        }
        Err(e) => r.push(Check::holds("states.simon.run", &format!("kernel ran: {e}"), false)),
    }

    match perm_partition() {
        Ok(run) => {
            r.push(Check::state(
                "states.perm.initial",
                "uniform extended permutation state",
                &reference::perm_initial(),
                run.trace.stage("initial").expect("stage"),
                tol(),
            ));
            r.push(Check::state(
                "states.perm.final",
                "permutation state after oracle and Hadamard",
                &reference::perm_final(),
                run.trace.stage("final").expect("stage"),
                tol(),
            ));
        }
        Err(e) => r.push(Check::holds("states.perm.run", &format!("kernel ran: {e}"), false)),
    }
    r
}

/// Entropy accounting: two bits through the unitary part, one after any
/// half projection, zero after the full projection.
pub fn verify_entropy() -> Report {
    let mut r = Report::new("entropy");
    let family = families::grover_family(2).expect("fixed family");
    match grover2_entropy_ledger(&family) {
        Ok(ledger) => {
            for (stage, expected) in [
                ("initial", 2.0),
                ("post_oracle", 2.0),
                ("post_rotation", 2.0),
                ("after_half_projection", 1.0),
                ("after_full_projection", 0.0),
            ] {
                r.push(Check::close(
                    &format!("entropy.{stage}"),
                    &format!("K entropy in bits at stage {stage}"),
                    expected,
                    ledger.get(stage).unwrap_or(f64::NAN),
                    crate::TOL_ENTROPY,
                ));
            }
        }
        Err(e) => r.push(Check::holds("entropy.ledger", &format!("ledger ran: {e}"), false)),
    }
    // one bit after each of the six halved projections
    for (i, obs) in grover2_half_observables(Register::K).iter().enumerate() {
        for outcome in 0..2 {
            match backdate(Perspective::Alice, obs, outcome, &family) {
                Ok(result) => {
                    r.push(Check::close(
                        &format!("entropy.half.{i}.{outcome}"),
                        &format!("backdated entropy for {} = {outcome}", obs.name()),
                        1.0,
                        result.ledger.get("backdated").unwrap_or(f64::NAN),
                        crate::TOL_ENTROPY,
                    ));
                }
                Err(e) => r.push(Check::holds(
                    &format!("entropy.half.{i}.{outcome}"),
                    &format!("backdating ran: {e}"),
                    false,
                )),
            }
        }
    }
    r
}

/// Even-share structure of the solution projection.
pub fn verify_evenshare() -> Report {
    let mut r = Report::new("evenshare");
    let family = families::grover_family(2).expect("fixed family");
    match even_share_check(&family) {
        Ok(report) => {
            r.push(Check::count(
                "evenshare.halved_projections",
                "halved projections available",
                6,
                report.halved_projection_count,
            ));
            r.push(Check::count(
                "evenshare.determining_pairs",
                "ordered pairs of distinct observables",
                6,
                report.determining_pairs,
            ));
            r.push(Check::count(
                "evenshare.solution_checks",
                "outcome combinations landing on a single solution",
                24,
                report.solution_checks,
            ));
            r.push(Check::count(
                "evenshare.same_pair_rejected",
                "same-observable pairs adding no information",
                3,
                report.same_observable_rejected,
            ));
            r.push(Check::close(
                "evenshare.observer_share",
                "bits backdated on the observer side",
                1.0,
                report.alice_share_bits,
                crate::TOL_ENTROPY,
            ));
            r.push(Check::close(
                "evenshare.oracle_share",
                "bits backdated on the oracle side",
                1.0,
                report.oracle_share_bits,
                crate::TOL_ENTROPY,
            ));
            r.push(Check::close(
                "evenshare.full_backdate_drop",
                "bits dropped when the full projection is backdated",
                2.0,
                report.full_backdate_drop_bits,
                crate::TOL_ENTROPY,
            ));
            r.push(Check::close(
                "evenshare.trivial_residual",
                "bits left for the other perspective after a full backdate",
                0.0,
                report.trivial_residual_drop_bits,
                crate::TOL_ENTROPY,
            ));
            r.push(Check::holds(
                "evenshare.backdating_exact",
                "projector and unitary commute on the identity register",
                report.backdating_exact,
            ));
        }
        Err(e) => r.push(Check::holds("evenshare.run", &format!("check ran: {e}"), false)),
    }
    r
}

/// History reconstruction of the oracle stage and rotation branching.
pub fn verify_histories() -> Report {
    let mut r = Report::new("histories");
    let family = families::grover_family(2).expect("fixed family");
    match enumerate_histories(&family, AdviceMode::HalvedProjections) {
        Ok(bag) => {
            r.push(Check::count(
                "histories.distinct_transitions",
                "distinct basis transitions",
                32,
                bag.distinct_transitions().len(),
            ));
            r.push(Check::count(
                "histories.total_with_multiplicity",
                "histories counted with multiplicity",
                48,
                bag.total_count(),
            ));
            r.push(Check::count(
                "histories.advice_choices",
                "halved projections enumerated",
                6,
                bag.advice_count(),
            ));
            let per_advice_ok = (0..4)
                .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
                .all(|(i, j)| {
                    let name = format!(
                        "k∈{{{},{}}}",
                        BitString::new(2, i).expect("label"),
                        BitString::new(2, j).expect("label")
                    );
                    bag.histories_for_advice(&name).len() == 8
                });
            r.push(Check::holds(
                "histories.eight_per_projection",
                "each halved projection originates eight histories",
                per_advice_ok,
            ));
            let input = reference::grover2_initial();
            match phased_sum(&bag, &input, false) {
                Ok(sum) => r.push(Check::state(
                    "histories.phased_sum",
                    "phased history sum reproduces the oracle stage",
                    &reference::grover2_post_oracle(),
                    &sum,
                    tol(),
                )),
                Err(e) => r.push(Check::holds(
                    "histories.phased_sum",
                    &format!("phased sum ran: {e}"),
                    false,
                )),
            }
            match algorithms::diffusion_unitary(2)
                .and_then(|d| branch_through_rotation(&bag, &d, &input))
            {
                Ok(report) => {
                    r.push(Check::holds(
                        "histories.four_branches",
                        "each history branches into four under the rotation",
                        report.branch_counts().iter().all(|&c| c == 4),
                    ));
                    r.push(Check::state(
                        "histories.interference",
                        "branch interference reproduces the final state",
                        &reference::grover2_final(),
                        &report.interference,
                        tol(),
                    ));
                }
                Err(e) => r.push(Check::holds(
                    "histories.branching",
                    &format!("branching ran: {e}"),
                    false,
                )),
            }
        }
        Err(e) => r.push(Check::holds("histories.run", &format!("enumeration ran: {e}"), false)),
    }

    // the half-table representations reconstruct the other kernels
    for (fam, initial, post) in [
        (families::dj_family(), reference::dj_initial(), reference::dj_post_oracle()),
        (
            families::simon_family(),
            reference::simon_initial(),
            reference::simon_post_oracle(),
        ),
    ] {
        let id = fam.id().to_string();
        match enumerate_histories(&fam, AdviceMode::GoodHalfTables)
            .and_then(|bag| phased_sum(&bag, &initial, false))
        {
            Ok(sum) => r.push(Check::state(
                &format!("histories.{id}.phased_sum"),
                "phased history sum reproduces the oracle stage",
                &post,
                &sum,
                tol(),
            )),
            Err(e) => r.push(Check::holds(
                &format!("histories.{id}.phased_sum"),
                &format!("phased sum ran: {e}"),
                false,
            )),
        }
    }
    r
}

/// General-size search kernel against the closed form.
pub fn verify_kernels() -> Report {
    let mut r = Report::new("kernels");
    for n in [2usize, 4, 6, 8] {
        match grover_kernel(n) {
            Ok(run) => {
                let worst_dev = run
                    .trace
                    .success
                    .values()
                    .map(|p| (p - run.closed_form_success).abs())
                    .fold(0.0, f64::max);
                r.push(Check::close(
                    &format!("kernels.n{n}.success_vs_closed_form"),
                    "max deviation of simulated success from the closed form",
                    0.0,
                    worst_dev,
                    1e-9,
                ));
                let ratio = run.iterations as f64 / ((1usize << (n / 2)) - 1) as f64;
                r.push(Check::holds(
                    &format!("kernels.n{n}.iteration_ratio"),
                    &format!(
                        "T / (2^(n/2) − 1) = {ratio:.3} within [0.5, 1.5] (T = {})",
                        run.iterations
                    ),
                    (0.5..=1.5).contains(&ratio),
                ));
                r.push(Check::info(
                    &format!("kernels.n{n}.ideal_fidelity"),
                    "overlap with the maximally correlated state (no threshold)",
                    &format!("{:.9}", run.ideal_fidelity),
                ));
            }
            Err(e) => r.push(Check::holds(
                &format!("kernels.n{n}.run"),
                &format!("kernel ran: {e}"),
                false,
            )),
        }
    }
    r
}

/// Measurement-basis synthesis from the post-oracle states.
pub fn verify_synthesis() -> Report {
    let mut r = Report::new("synthesis");
    match grover_n4().map(|t| (t.stage("post_oracle").expect("stage").clone(), t)) {
        Ok((post, trace)) => match synthesize_rotation(&post) {
            Ok(result) => {
                r.push(Check::count(
                    "synthesis.grover.classes",
                    "distinguishable post-oracle classes",
                    4,
                    result.classes.len(),
                ));
                r.push(Check::close(
                    "synthesis.grover.readable_bits",
                    "readable information equals log2 of the class count",
                    2.0,
                    result.readable_info_bits,
                    1e-9,
                ));
                // outcomes agree with the final trace stage: X reads K
                let agree = result
                    .outcomes
                    .iter()
                    .all(|(label, &outcome)| outcome == label.value());
                r.push(Check::holds(
                    "synthesis.grover.matches_rotation",
                    "synthesized outcomes equal the kernel's X readout",
                    agree,
                ));
                let _ = trace;
            }
            Err(e) => r.push(Check::holds(
                "synthesis.grover.run",
                &format!("synthesis ran: {e}"),
                false,
            )),
        },
        Err(e) => {
            r.push(Check::holds("synthesis.grover.run", &format!("kernel ran: {e}"), false))
        }
    }
    match dj_kernel() {
        Ok(trace) => match synthesize_rotation(trace.stage("post_oracle").expect("stage")) {
            Ok(result) => {
                r.push(Check::count(
                    "synthesis.dj.classes",
                    "distinguishable post-oracle classes",
                    4,
                    result.classes.len(),
                ));
                r.push(Check::close(
                    "synthesis.dj.readable_bits",
                    "readable information equals log2 of the class count",
                    2.0,
                    result.readable_info_bits,
                    1e-9,
                ));
                // each synthesized class is exactly one final-state
                // X-outcome class
                let final_state = trace.final_state();
                let classes_ok = result.classes.iter().all(|class| {
                    let outcomes: std::collections::BTreeSet<usize> = class
                        .iter()
                        .map(|label| {
                            x_distribution(final_state, label)
                                .iter()
                                .enumerate()
                                .max_by(|a, b| {
                                    a.1.partial_cmp(b.1).expect("finite probability")
                                })
                                .expect("nonempty")
                                .0
                        })
                        .collect();
                    outcomes.len() == 1 && class.len() == 2
                });
                r.push(Check::holds(
                    "synthesis.dj.outcome_classes",
                    "synthesized classes equal the kernel's X-outcome classes",
                    classes_ok,
                ));
            }
            Err(e) => {
                r.push(Check::holds("synthesis.dj.run", &format!("synthesis ran: {e}"), false))
            }
        },
        Err(e) => r.push(Check::holds("synthesis.dj.run", &format!("kernel ran: {e}"), false)),
    }
    r
}

fn family_by_id(id: &str) -> Result<families::FunctionFamily, SimError> {
    match id {
        "grover" => families::grover_family(2),
        "grover4" => families::grover_family(4),
        "dj" => Ok(families::dj_family()),
        "simon" => Ok(families::simon_family()),
        "perm" => Ok(families::perm_family()),
        other => Err(SimError::InvalidArgument(format!("unknown family id {other:?}"))),
    }
}

/// Query-count comparison for one family: quantum calls versus the
/// classical baselines with and without advance information.
pub fn verify_fifty(family_id: &str, seed: u64) -> Result<Report, SimError> {
    let mut r = Report::new(&format!("fifty.{family_id}"));
    let family = family_by_id(family_id)?;
    let quantum_calls = match family_id {
        "grover" => grover_n4()?.oracle_calls,
        "grover4" => grover_kernel(4)?.trace.oracle_calls,
        "dj" => dj_kernel()?.oracle_calls,
        "simon" => simon_kernel(seed)?.trace.oracle_calls,
        "perm" => perm_partition()?.trace.oracle_calls,
        _ => unreachable!("family_by_id covers the ids"),
    };
    let report = classical::fifty_rule_report(&family, quantum_calls)?;
    let prefix = format!("fifty.{family_id}");
    r.push(Check::count(
        &format!("{prefix}.quantum_calls"),
        "oracle calls used by the kernel",
        if family_id == "grover4" { 3 } else { 1 },
        report.quantum_calls,
    ));
    r.push(Check::count(
        &format!("{prefix}.advice_worst"),
        "worst-case queries with good advance information",
        if family_id == "grover4" { 3 } else { 1 },
        report.advice_worst,
    ));
    if family_id != "grover4" {
        r.push(Check::count(
            &format!("{prefix}.no_advice_worst"),
            "worst-case queries without advance information",
            3,
            report.no_advice_worst.unwrap_or(usize::MAX),
        ));
    }
    r.push(Check::holds(
        &format!("{prefix}.verdict"),
        "quantum count equals the advised classical count",
        report.pass,
    ));
    match family_id {
        "grover" => {
            r.push(Check::text(
                &format!("{prefix}.no_advice_expected"),
                "expected queries without advice, exact rational",
                "9/4",
                &report
                    .no_advice_expected
                    .map(|e| e.to_string())
                    .unwrap_or_else(|| "missing".into()),
            ));
            // any good advice resolves in one query, in both views
            let complexity = classical::advice_complexity(&family)?;
            r.push(Check::holds(
                &format!("{prefix}.every_good_half_table"),
                "every good half table yields a one-query strategy",
                complexity.witnesses.iter().all(|w| w.worst_case == 1),
            ));
            let advice = Advice::Labels(BitAdvice::new(
                "k0=0",
                [BitString::zero(2), BitString::new(2, 1).expect("label")]
                    .into_iter()
                    .collect(),
            )?);
            let (_, stats) = classical::optimal_strategy(&family, &advice, Objective::Worst)?;
            r.push(Check::count(
                &format!("{prefix}.bit_advice_worst"),
                "worst-case queries knowing one label bit",
                1,
                stats.worst_case,
            ));
            r.push(Check::text(
                &format!("{prefix}.bit_advice_expected"),
                "expected queries knowing one label bit",
                "1",
                &classical::optimal_strategy(&family, &advice, Objective::Expected)?
                    .1
                    .expected
                    .to_string(),
            ));
        }
        "dj" => {
            let trace = dj_kernel()?;
            let final_state = trace.final_state();
            let mut exact = true;
            for label in final_state.layout().k_labels() {
                let p00 = x_distribution(final_state, label)[0];
                let expect = match family.solution(label).expect("member") {
                    families::SOLUTION_CONSTANT => 1.0,
                    _ => 0.0,
                };
                if (p00 - expect).abs() > 1e-12 {
                    exact = false;
                }
            }
            r.push(Check::holds(
                &format!("{prefix}.readout_exact"),
                "all-zero readout probability is 1 for constant, 0 for balanced",
                exact,
            ));
            let balanced_ok = family
                .labels()
                .into_iter()
                .filter(|k| family.solution(k) == Some(families::SOLUTION_BALANCED))
                .all(|k| good_half_tables(&family, &k).is_ok_and(|v| v.len() == 2));
            r.push(Check::holds(
                &format!("{prefix}.two_good_half_tables"),
                "every balanced member has exactly two good half tables",
                balanced_ok,
            ));
        }
        "simon" => {
            let run = simon_kernel(seed)?;
            let mut recovered_ok = true;
            for (label, rec) in &run.recovered {
                if Some(rec.period.to_string().as_str()) != family.solution(label) {
                    recovered_ok = false;
                }
            }
            r.push(Check::holds(
                &format!("{prefix}.period_recovered"),
                "GF(2) solving recovers the period for every member",
                recovered_ok,
            ));
            // 10^4 samples per member: all orthogonal, balanced within 5σ
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
            let final_state = run.trace.final_state();
            let mut violations = 0usize;
            let mut balanced = true;
            let samples = 10_000usize;
            for label in final_state.layout().k_labels() {
                let h = BitString::parse(family.solution(label).expect("member"))
                    .expect("period token");
                let mut zero_count = 0usize;
                for _ in 0..samples {
                    let s = algorithms::sample_x(final_state, label, &mut rng);
                    if s.dot(&h) != 0 {
                        violations += 1;
                    }
                    if s.is_zero() {
                        zero_count += 1;
                    }
                }
                // binomial(10^4, 1/2): 5σ = 250
                if (zero_count as f64 - 5000.0).abs() > 250.0 {
                    balanced = false;
                }
            }
            r.push(Check::count(
                &format!("{prefix}.orthogonality_violations"),
                "sampled strings violating s·h = 0 in 10^4 draws per member",
                0,
                violations,
            ));
            r.push(Check::holds(
                &format!("{prefix}.outcome_uniformity"),
                "outcome frequencies uniform over the orthogonal set within 5σ",
                balanced,
            ));
        }
        "perm" => {
            let run = perm_partition()?;
            let never_zero = run.partition.values().all(|x| !x.is_zero());
            r.push(Check::holds(
                &format!("{prefix}.outcome_never_zero"),
                "X outcome is never the all-zero string",
                never_zero,
            ));
            let mut sizes: std::collections::BTreeMap<BitString, usize> =
                std::collections::BTreeMap::new();
            for outcome in run.partition.values() {
                *sizes.entry(*outcome).or_insert(0) += 1;
            }
            r.push(Check::holds(
                &format!("{prefix}.partition_sizes"),
                "the three X outcomes split the members eight/eight/eight",
                sizes.len() == 3 && sizes.values().all(|&c| c == 8),
            ));
            let rerun = perm_partition()?;
            r.push(Check::holds(
                &format!("{prefix}.deterministic"),
                "the outcome map is a function of the member only",
                run.partition == rerun.partition,
            ));
        }
        _ => {}
    }
    Ok(r)
}

/// Every suite, merged and ordered by check id.
pub fn verify_all(seed: u64) -> Report {
    let mut reports = vec![
        verify_states(),
        verify_entropy(),
        verify_evenshare(),
        verify_histories(),
        verify_kernels(),
        verify_synthesis(),
    ];
    for id in ["grover", "grover4", "dj", "simon", "perm"] {
        match verify_fifty(id, seed) {
            Ok(r) => reports.push(r),
            Err(e) => {
                let mut r = Report::new(&format!("fifty.{id}"));
                r.push(Check::holds(
                    &format!("fifty.{id}.run"),
                    &format!("suite ran: {e}"),
                    false,
                ));
                reports.push(r);
            }
        }
    }
    Report::merge("all", reports)
}
