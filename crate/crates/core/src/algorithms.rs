//! The quantum algorithm kernels in the extended representation.
//!
//! Each kernel runs the simplified core of its algorithm — preparation,
//! oracle stage, basis rotation — on the joint (K, X, V) state, keeping a
//! named trace of every stage. Oracle applications go through a counter
//! so the reported query count is asserted, not inferred.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bits::BitString;
use crate::families::{self, FunctionFamily, VPrep};
use crate::hilbert::{
    apply_local_unitary, apply_oracle, tensor_init, BlockState, Register, RegisterLayout,
};
use crate::SimError;

/// Named sequence of states produced by one kernel run, with the audited
/// oracle-call count and the per-member probability of reading the
/// correct answer off X.
#[derive(Clone, Debug)]
pub struct AlgorithmTrace {
    pub algorithm: String,
    pub stages: Vec<(String, BlockState)>,
    pub oracle_calls: usize,
    pub success: BTreeMap<BitString, f64>,
}

impl AlgorithmTrace {
    pub fn stage(&self, name: &str) -> Option<&BlockState> {
        self.stages
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, s)| s)
    }

    pub fn final_state(&self) -> &BlockState {
        &self.stages.last().expect("trace has stages").1
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if self.oracle_calls == 0 || self.stages.is_empty() {
            return Err(SimError::InvalidArgument(
                "trace must hold at least one stage and one oracle call".into(),
            ));
        }
        for (name, state) in &self.stages {
            if (state.norm_sqr() - 1.0).abs() > crate::TOL_STATE {
                return Err(SimError::InvalidArgument(format!(
                    "stage {name} is not normalized"
                )));
            }
        }
        if self.success.values().any(|&p| !(0.0..=1.0 + 1e-12).contains(&p)) {
            return Err(SimError::InvalidArgument(
                "success probabilities out of range".into(),
            ));
        }
        Ok(())
    }

    /// Stage-by-stage amplitude dumps followed by the summary line
    /// `algorithm, oracle_calls, success_prob_min, success_prob_max`.
    pub fn export(&self) -> String {
        let mut out = String::new();
        for (name, state) in &self.stages {
            writeln!(out, "# stage: {name}").expect("string write");
            out.push_str(&state.amplitude_dump());
        }
        let min = self.success.values().cloned().fold(f64::INFINITY, f64::min);
        let max = self.success.values().cloned().fold(0.0, f64::max);
        writeln!(
            out,
            "{}, {}, {:.9}, {:.9}",
            self.algorithm, self.oracle_calls, min, max
        )
        .expect("string write");
        out
    }
}

/// Counts oracle invocations for one run.
struct OracleCounter<'a> {
    family: &'a FunctionFamily,
    calls: usize,
}

impl<'a> OracleCounter<'a> {
    fn new(family: &'a FunctionFamily) -> Self {
        Self { family, calls: 0 }
    }

    fn apply(&mut self, state: &BlockState) -> Result<BlockState, SimError> {
        self.calls += 1;
        apply_oracle(state, self.family)
    }
}

/// Layout induced by a family: its labels over K, n argument qubits, m
/// result qubits.
pub fn family_layout(family: &FunctionFamily) -> Result<Arc<RegisterLayout>, SimError> {
    RegisterLayout::new(family.labels(), family.arg_bits(), family.value_bits())
}

/// Amplitudes of the family's V preparation.
pub fn v_prep_amplitudes(family: &FunctionFamily) -> Vec<Complex64> {
    let dim = 1usize << family.value_bits();
    match family.v_prep() {
        VPrep::Kickback => (0..dim)
            .map(|v| {
                if v.count_ones() % 2 == 0 {
                    Complex64::ONE
                } else {
                    -Complex64::ONE
                }
            })
            .collect(),
        VPrep::Zero => {
            let mut amps = vec![Complex64::ZERO; dim];
            amps[0] = Complex64::ONE;
            amps
        }
    }
}

/// Uniform superposition over K and X with the family's V preparation.
pub fn initial_state(family: &FunctionFamily) -> Result<BlockState, SimError> {
    let layout = family_layout(family)?;
    let k_amps: BTreeMap<BitString, Complex64> =
        layout.k_labels().iter().map(|&l| (l, Complex64::ONE)).collect();
    let x_amps = vec![Complex64::ONE; layout.x_dim()];
    tensor_init(&layout, &k_amps, &x_amps, &v_prep_amplitudes(family))
}

/// Hadamard transform on n qubits.
pub fn hadamard_matrix(n: usize) -> DMatrix<Complex64> {
    let dim = 1usize << n;
    let scale = 1.0 / (dim as f64).sqrt();
    DMatrix::from_fn(dim, dim, |i, j| {
        let sign = if (i & j).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        Complex64::new(sign * scale, 0.0)
    })
}

/// Inversion about the mean on n qubits: 2|s⟩⟨s| − I with s the uniform
/// state.
pub fn diffusion_unitary(n: usize) -> Result<DMatrix<Complex64>, SimError> {
    if !(1..=8).contains(&n) {
        return Err(SimError::InvalidArgument(format!(
            "diffusion size 2^{n} out of range"
        )));
    }
    let dim = 1usize << n;
    let off = 2.0 / dim as f64;
    Ok(DMatrix::from_fn(dim, dim, |i, j| {
        Complex64::new(if i == j { off - 1.0 } else { off }, 0.0)
    }))
}

/// Inversion about the mean applied directly, one (block, v) slice at a
/// time. Matches multiplying by [`diffusion_unitary`] but stays O(2^n)
/// per slice, which keeps the larger kernels fast.
fn apply_diffusion_fast(state: &BlockState) -> Result<BlockState, SimError> {
    let layout = state.layout().clone();
    let x_dim = layout.x_dim();
    let v_dim = layout.v_dim();
    let mut blocks = BTreeMap::new();
    for (ki, amps) in state.blocks() {
        let mut out = amps.to_vec();
        for v in 0..v_dim {
            let mean: Complex64 = (0..x_dim)
                .map(|x| amps[layout.amp_index(x, v)])
                .sum::<Complex64>()
                / x_dim as f64;
            for x in 0..x_dim {
                let idx = layout.amp_index(x, v);
                out[idx] = 2.0 * mean - amps[idx];
            }
        }
        blocks.insert(ki, out);
    }
    BlockState::from_blocks(layout, blocks)
}

/// Probability distribution of an X measurement conditioned on K = label.
pub fn x_distribution(state: &BlockState, label: &BitString) -> Vec<f64> {
    let layout = state.layout();
    let mut dist = vec![0.0; layout.x_dim()];
    if let Some(amps) = state.block(label) {
        for x in 0..layout.x_dim() {
            for v in 0..layout.v_dim() {
                dist[x] += amps[layout.amp_index(x, v)].norm_sqr();
            }
        }
        let total: f64 = dist.iter().sum();
        if total > 0.0 {
            for p in dist.iter_mut() {
                *p /= total;
            }
        }
    }
    dist
}

/// Draws one X outcome conditioned on K = label.
pub fn sample_x<R: Rng>(state: &BlockState, label: &BitString, rng: &mut R) -> BitString {
    let dist = x_distribution(state, label);
    let mut r: f64 = rng.gen();
    for (x, p) in dist.iter().enumerate() {
        r -= p;
        if r <= 0.0 {
            return BitString::new(state.layout().x_bits(), x).expect("x width");
        }
    }
    BitString::new(state.layout().x_bits(), dist.len() - 1).expect("x width")
}

fn success_x_equals_k(state: &BlockState) -> BTreeMap<BitString, f64> {
    let layout = state.layout().clone();
    layout
        .k_labels()
        .iter()
        .map(|label| {
            let p = x_distribution(state, label)[label.value()];
            (*label, p)
        })
        .collect()
}

/// The database-search kernel for four items: one oracle call, one
/// inversion about the mean, X then reads out K's choice with certainty.
pub fn grover_n4() -> Result<AlgorithmTrace, SimError> {
    let family = families::grover_family(2)?;
    let mut counter = OracleCounter::new(&family);
    let initial = initial_state(&family)?;
    let post_oracle = counter.apply(&initial)?;
    let final_state =
        apply_local_unitary(&post_oracle, Register::X, &diffusion_unitary(2)?)?;
    let success = success_x_equals_k(&final_state);
    let trace = AlgorithmTrace {
        algorithm: "grover".into(),
        stages: vec![
            ("initial".into(), initial),
            ("post_oracle".into(), post_oracle),
            ("final".into(), final_state),
        ],
        oracle_calls: counter.calls,
        success,
    };
    trace.validate()?;
    Ok(trace)
}

/// Result of a general-size search kernel run.
#[derive(Clone, Debug)]
pub struct GroverKernelRun {
    pub trace: AlgorithmTrace,
    pub iterations: usize,
    /// sin²((2T+1)·asin(2^(−n/2))) — what the simulation must reproduce.
    pub closed_form_success: f64,
    /// Overlap squared with the ideal maximally correlated state.
    pub ideal_fidelity: f64,
}

/// Optimal iteration count for a single marked item among 2^n.
pub fn grover_iterations(n: usize) -> usize {
    let theta = (2.0_f64.powi(-(n as i32) / 2)).asin();
    (PI / (4.0 * theta)).floor() as usize
}

/// Closed-form per-member success probability after t iterations.
pub fn grover_success_closed_form(n: usize, t: usize) -> f64 {
    let theta = (2.0_f64.powi(-(n as i32) / 2)).asin();
    ((2 * t + 1) as f64 * theta).sin().powi(2)
}

/// The search kernel for 2^n items, n even: T rounds of oracle plus
/// inversion about the mean from the uniform extended state.
pub fn grover_kernel(n: usize) -> Result<GroverKernelRun, SimError> {
    if !n.is_multiple_of(2) || !(2..=8).contains(&n) {
        return Err(SimError::InvalidArgument(format!(
            "kernel size n = {n} must be even and within 2..=8"
        )));
    }
    let family = families::grover_family(n)?;
    let mut counter = OracleCounter::new(&family);
    let iterations = grover_iterations(n);
    let mut stages = vec![("initial".to_string(), initial_state(&family)?)];
    for i in 1..=iterations {
        let post_oracle = counter.apply(&stages.last().expect("nonempty").1)?;
        stages.push((format!("post_oracle_{i}"), post_oracle));
        let post_diffusion = apply_diffusion_fast(&stages.last().expect("nonempty").1)?;
        stages.push((format!("post_diffusion_{i}"), post_diffusion));
    }
    let final_state = stages.last().expect("nonempty").1.clone();
    let success = success_x_equals_k(&final_state);
    let ideal_fidelity = {
        let layout = final_state.layout().clone();
        let v_amps = v_prep_amplitudes(&family);
        let v_norm: f64 = v_amps.iter().map(|a| a.norm_sqr()).sum::<f64>();
        let scale = 1.0 / (layout.k_labels().len() as f64 * v_norm).sqrt();
        let mut overlap = Complex64::ZERO;
        for label in layout.k_labels() {
            for (v, va) in v_amps.iter().enumerate() {
                let ideal = scale * va;
                overlap += final_state.amplitude(label, label.value(), v) * ideal.conj();
            }
        }
        overlap.norm_sqr()
    };
    let trace = AlgorithmTrace {
        algorithm: format!("grover_kernel_n{n}"),
        stages,
        oracle_calls: counter.calls,
        success,
    };
    trace.validate()?;
    Ok(GroverKernelRun {
        trace,
        iterations,
        closed_form_success: grover_success_closed_form(n, iterations),
        ideal_fidelity,
    })
}

/// The constant-vs-balanced kernel: one oracle call, Hadamard on X;
/// constant members put all X weight on 00, balanced members none.
pub fn dj_kernel() -> Result<AlgorithmTrace, SimError> {
    let family = families::dj_family();
    let mut counter = OracleCounter::new(&family);
    let initial = initial_state(&family)?;
    let post_oracle = counter.apply(&initial)?;
    let final_state = apply_local_unitary(&post_oracle, Register::X, &hadamard_matrix(2))?;
    let success = final_state
        .layout()
        .k_labels()
        .iter()
        .map(|label| {
            let p00 = x_distribution(&final_state, label)[0];
            let p = match family.solution(label).expect("member") {
                families::SOLUTION_CONSTANT => p00,
                _ => 1.0 - p00,
            };
            (*label, p)
        })
        .collect();
    let trace = AlgorithmTrace {
        algorithm: "dj".into(),
        stages: vec![
            ("initial".into(), initial),
            ("post_oracle".into(), post_oracle),
            ("final".into(), final_state),
        ],
        oracle_calls: counter.calls,
        success,
    };
    trace.validate()?;
    Ok(trace)
}

/// Per-member outcome of the period-finding measurement loop.
#[derive(Clone, Debug)]
pub struct SimonRecovery {
    pub period: BitString,
    pub samples: Vec<BitString>,
    /// Oracle calls spent: one per X sample drawn.
    pub iterations: usize,
}

/// Result of the period-finding kernel plus its classical post-loop.
#[derive(Clone, Debug)]
pub struct SimonRun {
    pub trace: AlgorithmTrace,
    pub recovered: BTreeMap<BitString, SimonRecovery>,
}

/// The period-finding kernel: one oracle call yields a uniformly random
/// string orthogonal to the hidden period. K is measured once to fix the
/// member; the right part is then re-run until n−1 distinct nonzero
/// strings allow solving for the period over GF(2).
pub fn simon_kernel(seed: u64) -> Result<SimonRun, SimError> {
    let family = families::simon_family();
    let n = family.arg_bits();
    let mut counter = OracleCounter::new(&family);
    let initial = initial_state(&family)?;
    let post_oracle = counter.apply(&initial)?;
    let final_state = apply_local_unitary(&post_oracle, Register::X, &hadamard_matrix(n))?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut recovered = BTreeMap::new();
    for label in final_state.layout().k_labels().to_vec() {
        let mut samples = Vec::new();
        let mut distinct = std::collections::BTreeSet::new();
        while distinct.len() < n - 1 {
            let s = sample_x(&final_state, &label, &mut rng);
            samples.push(s);
            if !s.is_zero() {
                distinct.insert(s);
            }
        }
        let period = families::gf2_solve(&distinct, n)?;
        recovered.insert(
            label,
            SimonRecovery { period, iterations: samples.len(), samples },
        );
    }

    let success = final_state
        .layout()
        .k_labels()
        .iter()
        .map(|label| {
            let h = BitString::parse(family.solution(label).expect("member"))
                .expect("period token");
            let p: f64 = x_distribution(&final_state, label)
                .iter()
                .enumerate()
                .filter(|(x, _)| {
                    BitString::new(n, *x).expect("x width").dot(&h) == 0
                })
                .map(|(_, p)| p)
                .sum();
            (*label, p)
        })
        .collect();
    let trace = AlgorithmTrace {
        algorithm: "simon".into(),
        stages: vec![
            ("initial".into(), initial),
            ("post_oracle".into(), post_oracle),
            ("final".into(), final_state),
        ],
        oracle_calls: counter.calls,
        success,
    };
    trace.validate()?;
    Ok(SimonRun { trace, recovered })
}

/// Result of the permutation-partition kernel.
#[derive(Clone, Debug)]
pub struct PermRun {
    pub trace: AlgorithmTrace,
    /// Deterministic X outcome per member; its preimages form the
    /// partition.
    pub partition: BTreeMap<BitString, BitString>,
}

/// The permutation-partition kernel: both V qubits in the kickback
/// state, one oracle call, Hadamard on X. The X outcome names one of
/// three blocks of eight permutations and is never 00.
pub fn perm_partition() -> Result<PermRun, SimError> {
    let family = families::perm_family();
    let mut counter = OracleCounter::new(&family);
    let initial = initial_state(&family)?;
    let post_oracle = counter.apply(&initial)?;
    let final_state = apply_local_unitary(&post_oracle, Register::X, &hadamard_matrix(2))?;

    let mut partition = BTreeMap::new();
    let mut success = BTreeMap::new();
    for label in final_state.layout().k_labels().to_vec() {
        let dist = x_distribution(&final_state, &label);
        let (x_max, p_max) = dist
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).expect("finite probability"))
            .expect("nonempty distribution");
        if (p_max - 1.0).abs() > 1e-9 {
            return Err(SimError::InvalidArgument(format!(
                "outcome for member {label} is not deterministic (p = {p_max})"
            )));
        }
        partition.insert(label, BitString::new(2, x_max).expect("x width"));
        success.insert(label, *p_max);
    }
    let trace = AlgorithmTrace {
        algorithm: "perm".into(),
        stages: vec![
            ("initial".into(), initial),
            ("post_oracle".into(), post_oracle),
            ("final".into(), final_state),
        ],
        oracle_calls: counter.calls,
        success,
    };
    trace.validate()?;
    Ok(PermRun { trace, partition })
}

/// Which space a synthesized rotation acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SynthesisSpace {
    /// The V part factored out as a common state; the rotation acts on X.
    X,
    /// The rotation acts on the joint X⊗V space.
    XV,
}

/// A measurement basis synthesized from per-member post-oracle states.
#[derive(Clone, Debug)]
pub struct SynthesisResult {
    pub unitary: DMatrix<Complex64>,
    pub space: SynthesisSpace,
    /// Mutual information between the member and the measurement outcome
    /// under a uniform prior, in bits.
    pub readable_info_bits: f64,
    /// Members grouped by identical (up to phase) post-oracle states.
    pub classes: Vec<Vec<BitString>>,
    /// Most likely measurement outcome per member.
    pub outcomes: BTreeMap<BitString, usize>,
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Extracts the per-member X states when every block factors as
/// χ_k(X) ⊗ φ(V) with a common φ.
fn try_factor_common_v(state: &BlockState) -> Option<Vec<(BitString, Vec<Complex64>)>> {
    let layout = state.layout();
    let x_dim = layout.x_dim();
    let v_dim = layout.v_dim();
    let mut phi: Option<Vec<Complex64>> = None;
    let mut out = Vec::new();
    for (ki, amps) in state.blocks() {
        let label = layout.k_labels()[ki];
        if phi.is_none() {
            let best_x = (0..x_dim)
                .max_by(|&a, &b| {
                    let na: f64 =
                        (0..v_dim).map(|v| amps[layout.amp_index(a, v)].norm_sqr()).sum();
                    let nb: f64 =
                        (0..v_dim).map(|v| amps[layout.amp_index(b, v)].norm_sqr()).sum();
                    na.partial_cmp(&nb).expect("finite norms")
                })
                .expect("nonempty block");
            let mut row: Vec<Complex64> =
                (0..v_dim).map(|v| amps[layout.amp_index(best_x, v)]).collect();
            let n = norm(&row);
            if n < 1e-12 {
                return None;
            }
            for a in row.iter_mut() {
                *a /= n;
            }
            phi = Some(row);
        }
        let phi = phi.as_ref().expect("set above");
        let mut chi = vec![Complex64::ZERO; x_dim];
        for x in 0..x_dim {
            let row: Vec<Complex64> =
                (0..v_dim).map(|v| amps[layout.amp_index(x, v)]).collect();
            let coeff = inner(&row, phi);
            for v in 0..v_dim {
                if (row[v] - coeff * phi[v]).norm() > 1e-10 {
                    return None;
                }
            }
            chi[x] = coeff;
        }
        let n = norm(&chi);
        if n < 1e-12 {
            return None;
        }
        for a in chi.iter_mut() {
            *a /= n;
        }
        out.push((label, chi));
    }
    Some(out)
}

/// Builds the basis rotation that maximizes the information about the
/// member readable from a computational-basis measurement.
///
/// Members whose states coincide up to phase are grouped into classes;
/// mutually orthogonal class representatives are rotated onto distinct
/// basis states. Non-orthogonal representatives fall back to a
/// projective measurement on their orthonormalized span, and the
/// returned information is then a lower bound on what is accessible.
pub fn synthesize_rotation(post_oracle: &BlockState) -> Result<SynthesisResult, SimError> {
    let layout = post_oracle.layout().clone();
    let (space, vectors) = match try_factor_common_v(post_oracle) {
        Some(v) => (SynthesisSpace::X, v),
        None => {
            let dim = layout.block_len();
            let mut vectors = Vec::new();
            for (ki, amps) in post_oracle.blocks() {
                let mut v = amps.to_vec();
                let n = norm(&v);
                if n < 1e-12 {
                    continue;
                }
                for a in v.iter_mut() {
                    *a /= n;
                }
                debug_assert_eq!(v.len(), dim);
                vectors.push((layout.k_labels()[ki], v));
            }
            (SynthesisSpace::XV, vectors)
        }
    };
    if vectors.is_empty() {
        return Err(SimError::DegenerateState);
    }
    let dim = vectors[0].1.len();

    // Group members whose states agree up to a global phase.
    let mut classes: Vec<Vec<BitString>> = Vec::new();
    let mut reps: Vec<Vec<Complex64>> = Vec::new();
    for (label, v) in &vectors {
        match reps.iter().position(|r| inner(v, r).norm() >= 1.0 - 1e-9) {
            Some(i) => classes[i].push(*label),
            None => {
                reps.push(v.clone());
                classes.push(vec![*label]);
            }
        }
    }
    if reps.len() < 2 {
        return Err(SimError::IndistinguishableOracleChoices);
    }

    // Orthonormalize the representatives in discovery order.
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    for rep in &reps {
        let mut v = rep.clone();
        for b in &basis {
            let c = inner(&v, b);
            for (a, bv) in v.iter_mut().zip(b) {
                *a -= c * bv;
            }
        }
        let n = norm(&v);
        if n > 1e-9 {
            for a in v.iter_mut() {
                *a /= n;
            }
            basis.push(v);
        }
    }
    let class_dirs = basis.len();
    // Complete to a full orthonormal basis from the computational basis.
    for t in 0..dim {
        if basis.len() == dim {
            break;
        }
        let mut v = vec![Complex64::ZERO; dim];
        v[t] = Complex64::ONE;
        for b in &basis {
            let c = inner(&v, b);
            for (a, bv) in v.iter_mut().zip(b) {
                *a -= c * bv;
            }
        }
        let n = norm(&v);
        if n > 1e-9 {
            for a in v.iter_mut() {
                *a /= n;
            }
            basis.push(v);
        }
    }
    debug_assert_eq!(basis.len(), dim);

    // Assign measurement targets greedily by overlap, class directions
    // first, ties to the smallest index.
    let mut targets = vec![usize::MAX; dim];
    let mut used = vec![false; dim];
    for (i, b) in basis.iter().enumerate().take(class_dirs) {
        let mut best = None;
        for (t, u) in used.iter().enumerate() {
            if *u {
                continue;
            }
            let w = b[t].norm_sqr();
            if best.is_none_or(|(_, bw)| w > bw + 1e-12) {
                best = Some((t, w));
            }
        }
        let (t, _) = best.expect("free target exists");
        targets[i] = t;
        used[t] = true;
    }
    let mut free = (0..dim).filter(|&t| !used[t]);
    for t in targets.iter_mut().skip(class_dirs) {
        *t = free.next().expect("enough targets");
    }

    let mut unitary = DMatrix::<Complex64>::zeros(dim, dim);
    for (i, b) in basis.iter().enumerate() {
        for (col, amp) in b.iter().enumerate() {
            unitary[(targets[i], col)] += amp.conj();
        }
    }

    // Outcome channel p(o | member) and its mutual information under a
    // uniform prior.
    let members = vectors.len() as f64;
    let mut p_outcome = vec![0.0; dim];
    let mut cond_entropy = 0.0;
    let mut outcomes = BTreeMap::new();
    for (label, v) in &vectors {
        let mut p = vec![0.0; dim];
        for o in 0..dim {
            let mut amp = Complex64::ZERO;
            for (col, a) in v.iter().enumerate() {
                amp += unitary[(o, col)] * a;
            }
            p[o] = amp.norm_sqr();
        }
        let mut h = 0.0;
        for (o, &q) in p.iter().enumerate() {
            p_outcome[o] += q / members;
            if q > 1e-15 {
                h -= q * q.log2();
            }
        }
        cond_entropy += h / members;
        let best = p
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).expect("finite probability"))
            .expect("nonempty")
            .0;
        outcomes.insert(*label, best);
    }
    let mut outcome_entropy = 0.0;
    for &q in &p_outcome {
        if q > 1e-15 {
            outcome_entropy -= q * q.log2();
        }
    }
    Ok(SynthesisResult {
        unitary,
        space,
        readable_info_bits: outcome_entropy - cond_entropy,
        classes,
        outcomes,
    })
}
