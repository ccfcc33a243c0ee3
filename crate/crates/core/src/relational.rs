//! The two time-symmetric perspectives on a kernel run, entropy
//! accounting, half-observable projections, and backdating.
//!
//! In the observer's perspective the unitary part is the identity on K,
//! so a projector on K commutes with it exactly; projecting the output
//! and projecting the input are the same operation. Backdating a half
//! projection therefore turns half of the information read out at the
//! end into knowledge available before the first oracle call. In the
//! swapped perspective the roles of K and X are exchanged.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::algorithms::{diffusion_unitary, hadamard_matrix, v_prep_amplitudes};
use crate::bits::BitString;
use crate::families::FunctionFamily;
use crate::hilbert::{
    apply_local_unitary, apply_oracle, entropy_bits, reduced_density_k, BlockState,
    DensityEnsemble, Projector, Register, RegisterLayout,
};
use crate::{SimError, TOL_STATE};

/// Who the relational state is conditioned on: Alice controls X, the
/// oracle controls K.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Perspective {
    Alice,
    Oracle,
}

impl Perspective {
    pub fn swap(self) -> Self {
        match self {
            Perspective::Alice => Perspective::Oracle,
            Perspective::Oracle => Perspective::Alice,
        }
    }

    /// The register on which this perspective's unitary is the identity.
    pub fn identity_register(self) -> Register {
        match self {
            Perspective::Alice => Register::K,
            Perspective::Oracle => Register::X,
        }
    }
}

/// A binary observable splitting a basis into two equal halves.
#[derive(Clone, Debug)]
pub struct HalfObservable {
    register: Register,
    name: String,
    blocks: [Vec<BitString>; 2],
}

impl HalfObservable {
    pub fn new(
        register: Register,
        name: &str,
        universe: &[BitString],
        block0: Vec<BitString>,
    ) -> Result<Self, SimError> {
        if register == Register::V {
            return Err(SimError::InvalidArgument(
                "half observables act on K or X".into(),
            ));
        }
        let all: BTreeSet<BitString> = universe.iter().copied().collect();
        let zero: BTreeSet<BitString> = block0.iter().copied().collect();
        if zero.len() != block0.len() || !zero.is_subset(&all) {
            return Err(SimError::InvalidArgument(format!(
                "observable {name} block is not a subset of its basis"
            )));
        }
        if 2 * zero.len() != all.len() {
            return Err(SimError::InvalidArgument(format!(
                "observable {name} does not split the basis in half"
            )));
        }
        let block1: Vec<BitString> = all.difference(&zero).copied().collect();
        let mut block0: Vec<BitString> = zero.into_iter().collect();
        block0.sort();
        Ok(Self { register, name: name.to_string(), blocks: [block0, block1] })
    }

    /// Partition by the value of bit `i` of the label.
    pub fn bit(
        register: Register,
        universe: &[BitString],
        i: usize,
    ) -> Result<Self, SimError> {
        let block0 = universe.iter().filter(|l| l.bit(i) == 0).copied().collect();
        let tag = match register {
            Register::K => "K",
            Register::X => "X",
            Register::V => "V",
        };
        Self::new(register, &format!("[{tag}{i}]"), universe, block0)
    }

    /// Partition by the parity of all label bits.
    pub fn parity(register: Register, universe: &[BitString]) -> Result<Self, SimError> {
        let block0 = universe
            .iter()
            .filter(|l| (0..l.width()).map(|i| l.bit(i)).sum::<usize>() % 2 == 0)
            .copied()
            .collect();
        let tag = match register {
            Register::K => "K",
            Register::X => "X",
            Register::V => "V",
        };
        Self::new(register, &format!("[{tag}+]"), universe, block0)
    }

    pub fn register(&self) -> Register {
        self.register
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn outcome_block(&self, outcome: usize) -> &[BitString] {
        &self.blocks[outcome & 1]
    }

    pub fn projector(&self, outcome: usize) -> Result<Projector, SimError> {
        Projector::new(self.register, self.outcome_block(outcome).to_vec())
    }

    /// The same split read on the other register, valid when K labels
    /// and X strings coincide.
    pub fn partner(&self) -> Self {
        let register = match self.register {
            Register::K => Register::X,
            Register::X => Register::K,
            Register::V => unreachable!("constructor rejects V"),
        };
        Self {
            register,
            name: format!("{}'", self.name),
            blocks: self.blocks.clone(),
        }
    }
}

/// The three halved projections of the four-item search instance, read
/// on the given register: first bit, second bit, parity.
pub fn grover2_half_observables(register: Register) -> Vec<HalfObservable> {
    let universe: Vec<BitString> = BitString::all(2).collect();
    vec![
        HalfObservable::bit(register, &universe, 0).expect("valid split"),
        HalfObservable::bit(register, &universe, 1).expect("valid split"),
        HalfObservable::parity(register, &universe).expect("valid split"),
    ]
}

/// Stage-labeled entropy readings in bits.
#[derive(Clone, Debug, Default)]
pub struct EntropyLedger {
    entries: Vec<(String, f64)>,
}

impl EntropyLedger {
    pub fn push(&mut self, stage: &str, bits: f64) {
        self.entries.push((stage.to_string(), bits));
    }

    pub fn entries(&self) -> &[(String, f64)] {
        &self.entries
    }

    pub fn get(&self, stage: &str) -> Option<f64> {
        self.entries
            .iter()
            .find(|(s, _)| s == stage)
            .map(|(_, b)| *b)
    }

    /// `stage, entropy_bits` rows, 9 decimal places.
    pub fn export(&self) -> String {
        let mut out = String::new();
        for (stage, bits) in &self.entries {
            writeln!(out, "{stage}, {bits:.9}").expect("string write");
        }
        out
    }
}

/// Relabels |k⟩|x⟩ → |x⟩|k⟩. Requires the K labels to coincide with the
/// X basis strings; an involution.
pub fn swap_registers_state(state: &BlockState) -> Result<BlockState, SimError> {
    let layout = state.layout().clone();
    check_swappable(&layout)?;
    let n = layout.x_bits();
    BlockState::from_amplitudes(layout.clone(), |b, j, v| {
        let label = BitString::new(n, j).expect("x width");
        state.amplitude(&label, b.value(), v)
    })
}

/// Member-wise [`swap_registers_state`] on an ensemble.
pub fn swap_registers(ensemble: &DensityEnsemble) -> Result<DensityEnsemble, SimError> {
    ensemble.map(swap_registers_state)
}

fn check_swappable(layout: &RegisterLayout) -> Result<(), SimError> {
    let n = layout.x_bits();
    let ok = layout.k_labels().len() == layout.x_dim()
        && layout
            .k_labels()
            .iter()
            .enumerate()
            .all(|(i, l)| l.width() == n && l.value() == i);
    if ok {
        Ok(())
    } else {
        Err(SimError::InvalidArgument(
            "K labels do not coincide with the X basis; registers not swappable".into(),
        ))
    }
}

/// Phase-averaged initial ensemble of a perspective. The observer's side
/// is a k-diagonal uniform mixture with coherent uniform X; the oracle's
/// side is its K/X swap.
pub fn relational_initial(
    perspective: Perspective,
    family: &FunctionFamily,
) -> Result<DensityEnsemble, SimError> {
    let layout = crate::algorithms::family_layout(family)?;
    let v_amps = v_prep_amplitudes(family);
    let members = layout
        .k_labels()
        .iter()
        .map(|&label| {
            let state = BlockState::from_amplitudes(layout.clone(), |k, _, v| {
                if *k == label {
                    v_amps[v]
                } else {
                    Complex64::ZERO
                }
            })?;
            Ok((1.0 / layout.k_labels().len() as f64, state))
        })
        .collect::<Result<Vec<_>, SimError>>()?;
    let alice = DensityEnsemble::new(members)?;
    match perspective {
        Perspective::Alice => Ok(alice),
        Perspective::Oracle => swap_registers(&alice),
    }
}

/// The unitary part of the kernel seen from a perspective: oracle stage
/// then basis rotation on the perspective's readout register, iterated
/// on the search family's schedule (a single pass for the others).
pub fn evolve_member(
    perspective: Perspective,
    family: &FunctionFamily,
    state: &BlockState,
) -> Result<BlockState, SimError> {
    let rotation = kernel_rotation(family)?;
    let passes = if family.id().starts_with("grover") {
        crate::algorithms::grover_iterations(family.arg_bits())
    } else {
        1
    };
    let mut current = state.clone();
    for _ in 0..passes {
        let post_oracle = apply_oracle(&current, family)?;
        current = match perspective {
            Perspective::Alice => {
                apply_local_unitary(&post_oracle, Register::X, &rotation)?
            }
            Perspective::Oracle => {
                let swapped = swap_registers_state(&post_oracle)?;
                let rotated = apply_local_unitary(&swapped, Register::X, &rotation)?;
                swap_registers_state(&rotated)?
            }
        };
    }
    Ok(current)
}

/// The basis rotation a kernel applies after its oracle stage: inversion
/// about the mean for the search family, Hadamard otherwise.
pub fn kernel_rotation(
    family: &FunctionFamily,
) -> Result<nalgebra::DMatrix<Complex64>, SimError> {
    if family.id().starts_with("grover") {
        diffusion_unitary(family.arg_bits())
    } else {
        Ok(hadamard_matrix(family.arg_bits()))
    }
}

/// Entropy of the register the perspective's observer does not control.
pub fn ignorance_entropy(
    perspective: Perspective,
    ensemble: &DensityEnsemble,
) -> Result<f64, SimError> {
    let ens = match perspective {
        Perspective::Alice => ensemble.clone(),
        Perspective::Oracle => swap_registers(ensemble)?,
    };
    Ok(entropy_bits(&reduced_density_k(&ens)))
}

/// Outcome of backdating a projection through a perspective's unitary.
#[derive(Clone, Debug)]
pub struct BackdateResult {
    pub probability: f64,
    pub initial_projected: DensityEnsemble,
    pub output_projected: DensityEnsemble,
    pub ledger: EntropyLedger,
}

/// Backdates the projector along the perspective: projects the output
/// ensemble, and applies the same projector to the initial ensemble,
/// which is exact because the unitary is the identity on the projected
/// register.
pub fn backdate_with_projector(
    perspective: Perspective,
    projector: &Projector,
    family: &FunctionFamily,
) -> Result<BackdateResult, SimError> {
    if projector.register() != perspective.identity_register() {
        return Err(SimError::InvalidArgument(format!(
            "projector acts on {:?}; this perspective backdates on {:?}",
            projector.register(),
            perspective.identity_register()
        )));
    }
    let initial = relational_initial(perspective, family)?;
    let output = initial.map(|s| evolve_member(perspective, family, s))?;
    let (probability, output_projected) = output.project(projector)?;
    let output_projected =
        output_projected.ok_or_else(|| SimError::InvalidArgument(
            "zero-probability outcome".into(),
        ))?;
    let (p0, initial_projected) = initial.project(projector)?;
    let initial_projected = initial_projected
        .ok_or_else(|| SimError::InvalidArgument("zero-probability outcome".into()))?;
    debug_assert!((p0 - probability).abs() < 1e-12);
    let mut ledger = EntropyLedger::default();
    ledger.push("initial", ignorance_entropy(perspective, &initial)?);
    ledger.push("backdated", ignorance_entropy(perspective, &initial_projected)?);
    Ok(BackdateResult { probability, initial_projected, output_projected, ledger })
}

/// Backdates a half observable's outcome. The observable may be stated
/// on either register; when it is stated on the perspective's readout
/// register it is first carried over to the perfectly correlated partner
/// on the identity register.
pub fn backdate(
    perspective: Perspective,
    observable: &HalfObservable,
    outcome: usize,
    family: &FunctionFamily,
) -> Result<BackdateResult, SimError> {
    let id_reg = perspective.identity_register();
    let obs = if observable.register() == id_reg {
        observable.clone()
    } else {
        let layout = crate::algorithms::family_layout(family)?;
        check_swappable(&layout)?;
        observable.partner()
    };
    backdate_with_projector(perspective, &obs.projector(outcome)?, family)
}

fn support_key(state: &BlockState) -> Vec<(usize, Vec<usize>)> {
    state
        .blocks()
        .map(|(ki, amps)| {
            let support: Vec<usize> = (0..amps.len())
                .filter(|&t| amps[t].norm() > 1e-9)
                .collect();
            (ki, support)
        })
        .collect()
}

/// Member-by-member ensemble comparison, matching members by their
/// amplitude support.
pub fn ensembles_equal(
    a: &DensityEnsemble,
    b: &DensityEnsemble,
    tol: f64,
) -> Result<bool, SimError> {
    if a.members().len() != b.members().len() {
        return Ok(false);
    }
    let mut used = vec![false; b.members().len()];
    for (pa, sa) in a.members() {
        let key = support_key(sa);
        let mut matched = false;
        for (i, (pb, sb)) in b.members().iter().enumerate() {
            if used[i] || support_key(sb) != key {
                continue;
            }
            if (pa - pb).abs() <= tol && crate::hilbert::states_equal(sa, sb, tol)? {
                used[i] = true;
                matched = true;
                break;
            }
        }
        if !matched {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Structure report for the even split of the solution projection
/// between the two perspectives, four-item search instance.
#[derive(Clone, Debug)]
pub struct EvenShareReport {
    /// Halved projections available: 3 observables × 2 outcomes.
    pub halved_projection_count: usize,
    /// Ordered pairs of distinct observables, one per perspective, whose
    /// joint outcome always projects on a single solution.
    pub determining_pairs: usize,
    /// Outcome combinations checked to land on a single solution with
    /// final entropy zero.
    pub solution_checks: usize,
    /// Same-observable pairs rejected: the repeated half adds no
    /// information.
    pub same_observable_rejected: usize,
    /// Entropy drop in bits seen by each perspective when one half is
    /// backdated on each side (must be 1.0 and 1.0).
    pub alice_share_bits: f64,
    pub oracle_share_bits: f64,
    /// Drop when the full projection is backdated along one perspective.
    pub full_backdate_drop_bits: f64,
    /// Drop left for the other perspective afterwards: its projector is
    /// trivial (rank preserving).
    pub trivial_residual_drop_bits: f64,
    /// Projector–unitary commutation verified on every halved projection
    /// in both perspectives.
    pub backdating_exact: bool,
}

/// Enumerates the halved projections of the n = 2 search instance and
/// verifies the even-share structure.
pub fn even_share_check(family: &FunctionFamily) -> Result<EvenShareReport, SimError> {
    let layout = crate::algorithms::family_layout(family)?;
    check_swappable(&layout)?;
    if layout.x_bits() != 2 {
        return Err(SimError::InvalidArgument(
            "even-share enumeration is defined for the four-item instance".into(),
        ));
    }
    let obs_k = grover2_half_observables(Register::K);
    let obs_x = grover2_half_observables(Register::X);
    let halved_projection_count = obs_k.len() * 2;

    let initial = relational_initial(Perspective::Alice, family)?;
    let output = initial.map(|s| evolve_member(Perspective::Alice, family, s))?;

    // One half per perspective: distinct observables always compose to
    // the full solution projector.
    let mut determining_pairs = 0usize;
    let mut solution_checks = 0usize;
    let mut same_observable_rejected = 0usize;
    for (i, a) in obs_k.iter().enumerate() {
        for (j, b) in obs_x.iter().enumerate() {
            if i == j {
                // second half repeats the first: zero information added
                for outcome in 0..2 {
                    let (p1, ens1) = output.project(&a.projector(outcome)?)?;
                    let ens1 = ens1.expect("half projection has probability 1/2");
                    let before = ignorance_entropy(Perspective::Alice, &ens1)?;
                    let (p2, ens2) = ens1.project(&b.projector(outcome)?)?;
                    let ens2 = ens2.expect("repeat projection keeps the state");
                    let after = ignorance_entropy(Perspective::Alice, &ens2)?;
                    if (p1 - 0.5).abs() > 1e-9
                        || (p2 - 1.0).abs() > 1e-9
                        || (before - after).abs() > 1e-9
                    {
                        return Err(SimError::InvalidArgument(
                            "repeated observable changed the state".into(),
                        ));
                    }
                }
                same_observable_rejected += 1;
                continue;
            }
            determining_pairs += 1;
            for oa in 0..2 {
                for ob in 0..2 {
                    let (pa, ens) = output.project(&a.projector(oa)?)?;
                    let ens = ens.expect("half projection has probability 1/2");
                    let (pb, ens) = ens.project(&b.projector(ob)?)?;
                    let ens = ens.expect("cross projection has probability 1/2");
                    let sol: BTreeSet<BitString> = a
                        .outcome_block(oa)
                        .iter()
                        .filter(|l| b.outcome_block(ob).contains(l))
                        .copied()
                        .collect();
                    let entropy = ignorance_entropy(Perspective::Alice, &ens)?;
                    let support: BTreeSet<BitString> = ens
                        .members()
                        .iter()
                        .flat_map(|(_, s)| {
                            s.blocks().map(|(ki, _)| layout.k_labels()[ki])
                        })
                        .collect();
                    if sol.len() != 1
                        || support != sol
                        || entropy.abs() > 1e-9
                        || (pa * pb - 0.25).abs() > 1e-9
                    {
                        return Err(SimError::InvalidArgument(format!(
                            "pair ({}, {}) outcomes ({oa}, {ob}) do not determine a solution",
                            a.name(),
                            b.name()
                        )));
                    }
                    solution_checks += 1;
                }
            }
        }
    }

    // Even share: backdating one half on each side drops one bit in each
    // perspective.
    let alice_back = backdate(Perspective::Alice, &obs_k[0], 0, family)?;
    let alice_share_bits = alice_back.ledger.get("initial").expect("entry")
        - alice_back.ledger.get("backdated").expect("entry");
    let oracle_back = backdate(Perspective::Oracle, &obs_x[1], 0, family)?;
    let oracle_share_bits = oracle_back.ledger.get("initial").expect("entry")
        - oracle_back.ledger.get("backdated").expect("entry");

    // Backdating the full projection on one side leaves a trivial,
    // rank-preserving projection for the other.
    let solution: Vec<BitString> = obs_k[0]
        .outcome_block(0)
        .iter()
        .filter(|l| obs_k[1].outcome_block(0).contains(l))
        .copied()
        .collect();
    let full =
        backdate_with_projector(Perspective::Alice, &Projector::new(Register::K, solution)?, family)?;
    let full_backdate_drop_bits = full.ledger.get("initial").expect("entry")
        - full.ledger.get("backdated").expect("entry");
    let all_x: Vec<BitString> = BitString::all(2).collect();
    let trivial = backdate_with_projector(
        Perspective::Oracle,
        &Projector::new(Register::X, all_x)?,
        family,
    )?;
    let trivial_residual_drop_bits = trivial.ledger.get("initial").expect("entry")
        - trivial.ledger.get("backdated").expect("entry");

    // Projector–unitary commutation on every halved projection, both
    // perspectives: project-then-evolve equals evolve-then-project.
    let mut backdating_exact = true;
    for perspective in [Perspective::Alice, Perspective::Oracle] {
        let observables = match perspective {
            Perspective::Alice => &obs_k,
            Perspective::Oracle => &obs_x,
        };
        let init = relational_initial(perspective, family)?;
        let out = init.map(|s| evolve_member(perspective, family, s))?;
        for obs in observables {
            for outcome in 0..2 {
                let p = obs.projector(outcome)?;
                let (q1, projected_then) = init.project(&p)?;
                let projected_then = projected_then
                    .expect("half projection has probability 1/2")
                    .map(|s| evolve_member(perspective, family, s))?;
                let (q2, then_projected) = out.project(&p)?;
                let then_projected =
                    then_projected.expect("half projection has probability 1/2");
                if (q1 - q2).abs() > TOL_STATE
                    || !ensembles_equal(&projected_then, &then_projected, TOL_STATE)?
                {
                    backdating_exact = false;
                }
            }
        }
    }

    Ok(EvenShareReport {
        halved_projection_count,
        determining_pairs,
        solution_checks,
        same_observable_rejected,
        alice_share_bits,
        oracle_share_bits,
        full_backdate_drop_bits,
        trivial_residual_drop_bits,
        backdating_exact,
    })
}

/// Entropy readings across a full observer-perspective run of the
/// four-item search: through the unitary part, after one half
/// projection, and after the full projection.
pub fn grover2_entropy_ledger(family: &FunctionFamily) -> Result<EntropyLedger, SimError> {
    let layout = crate::algorithms::family_layout(family)?;
    check_swappable(&layout)?;
    let initial = relational_initial(Perspective::Alice, family)?;
    let post_oracle = initial.map(|s| apply_oracle(s, family))?;
    let rotation = kernel_rotation(family)?;
    let output =
        post_oracle.map(|s| apply_local_unitary(s, Register::X, &rotation))?;
    let mut ledger = EntropyLedger::default();
    ledger.push("initial", ignorance_entropy(Perspective::Alice, &initial)?);
    ledger.push("post_oracle", ignorance_entropy(Perspective::Alice, &post_oracle)?);
    ledger.push("post_rotation", ignorance_entropy(Perspective::Alice, &output)?);
    let half = grover2_half_observables(Register::K)[0].projector(0)?;
    let (_, half_ens) = output.project(&half)?;
    ledger.push(
        "after_half_projection",
        ignorance_entropy(
            Perspective::Alice,
            &half_ens.ok_or(SimError::DegenerateState)?,
        )?,
    );
    let solution = Projector::new(Register::K, vec![layout.k_labels()[0]])?;
    let (_, full_ens) = output.project(&solution)?;
    ledger.push(
        "after_full_projection",
        ignorance_entropy(
            Perspective::Alice,
            &full_ens.ok_or(SimError::DegenerateState)?,
        )?,
    );
    Ok(ledger)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::hilbert::states_equal;
    use crate::reference::{self, TEST_PHASES};

    fn grover2() -> FunctionFamily {
        families::grover_family(2).unwrap()
    }

    fn bs(s: &str) -> BitString {
        BitString::parse(s).unwrap()
    }

    #[test]
    fn observer_initial_ensemble_is_maximally_mixed_on_k() {
        let ens = relational_initial(Perspective::Alice, &grover2()).unwrap();
        assert!(ensembles_equal(&ens, &reference::grover2_observer_ensemble(), TOL_STATE)
            .unwrap());
        assert!(
            (ignorance_entropy(Perspective::Alice, &ens).unwrap() - 2.0).abs() < 1e-9
        );
    }

    #[test]
    fn oracle_initial_ensemble_is_the_swap_of_the_observer_one() {
        let family = grover2();
        let alice = relational_initial(Perspective::Alice, &family).unwrap();
        let oracle = relational_initial(Perspective::Oracle, &family).unwrap();
        assert!(ensembles_equal(&oracle, &swap_registers(&alice).unwrap(), TOL_STATE)
            .unwrap());
        assert!(ensembles_equal(&oracle, &reference::grover2_oracle_ensemble(), TOL_STATE)
            .unwrap());
        assert!(
            (ignorance_entropy(Perspective::Oracle, &oracle).unwrap() - 2.0).abs() < 1e-9
        );
    }

    #[test]
    fn single_member_family_has_zero_initial_entropy() {
        let fam = families::FunctionFamily::from_tables(
            "single",
            2,
            1,
            vec![(
                bs("00"),
                vec![
                    BitString::new(1, 1).unwrap(),
                    BitString::zero(1),
                    BitString::zero(1),
                    BitString::zero(1),
                ],
                "00".into(),
            )],
            families::VPrep::Kickback,
        )
        .unwrap();
        let ens = relational_initial(Perspective::Alice, &fam).unwrap();
        assert!(ignorance_entropy(Perspective::Alice, &ens).unwrap().abs() < 1e-12);
    }

    #[test]
    fn swap_is_an_involution_and_fixes_the_output_state() {
        let phased = reference::grover2_phased_final(&TEST_PHASES);
        let swapped = swap_registers_state(&phased).unwrap();
        assert!(states_equal(&phased, &swapped, 1e-12).unwrap());

        let input = reference::grover2_phased_initial(&TEST_PHASES);
        let once = swap_registers_state(&input).unwrap();
        assert!(states_equal(&once, &reference::oracle_view_initial(&TEST_PHASES), 1e-12)
            .unwrap());
        let twice = swap_registers_state(&once).unwrap();
        assert!(states_equal(&input, &twice, 1e-12).unwrap());
    }

    #[test]
    fn swap_rejects_label_mismatched_layouts() {
        let dj = crate::reference::dj_initial();
        assert!(swap_registers_state(&dj).is_err());
    }

    #[test]
    fn oracle_perspective_evolution_reaches_the_same_output() {
        // the coherent phased representatives evolve into the common
        // output state under both perspectives
        let family = grover2();
        let alice_in = reference::grover2_phased_initial(&TEST_PHASES);
        let alice_out = evolve_member(Perspective::Alice, &family, &alice_in).unwrap();
        assert!(states_equal(
            &alice_out,
            &reference::grover2_phased_final(&TEST_PHASES),
            crate::TOL_STATE
        )
        .unwrap());

        let oracle_in = reference::oracle_view_initial(&TEST_PHASES);
        let oracle_out = evolve_member(Perspective::Oracle, &family, &oracle_in).unwrap();
        assert!(states_equal(
            &oracle_out,
            &reference::grover2_phased_final(&TEST_PHASES),
            crate::TOL_STATE
        )
        .unwrap());
    }

    #[test]
    fn swap_conjugation_maps_perspective_traces_stage_by_stage() {
        let family = grover2();
        let alice_in = reference::grover2_phased_initial(&TEST_PHASES);
        let oracle_in = reference::oracle_view_initial(&TEST_PHASES);

        // stage 1: initial states are swaps of each other
        assert!(states_equal(
            &swap_registers_state(&alice_in).unwrap(),
            &oracle_in,
            1e-12
        )
        .unwrap());

        // stage 2: post-oracle states are swaps of each other
        let alice_mid = apply_oracle(&alice_in, &family).unwrap();
        let oracle_mid = apply_oracle(&oracle_in, &family).unwrap();
        assert!(states_equal(
            &swap_registers_state(&alice_mid).unwrap(),
            &oracle_mid,
            1e-12
        )
        .unwrap());

        // stage 3: rotating X for Alice corresponds to rotating K for
        // the oracle
        let rotation = kernel_rotation(&family).unwrap();
        let alice_out =
            apply_local_unitary(&alice_mid, Register::X, &rotation).unwrap();
        let oracle_out = {
            let swapped = swap_registers_state(&oracle_mid).unwrap();
            let rotated = apply_local_unitary(&swapped, Register::X, &rotation).unwrap();
            swap_registers_state(&rotated).unwrap()
        };
        assert!(states_equal(
            &swap_registers_state(&alice_out).unwrap(),
            &oracle_out,
            1e-12
        )
        .unwrap());
    }

    #[test]
    fn backdating_first_bit_restricts_the_observer_side() {
        let family = grover2();
        let obs = &grover2_half_observables(Register::K)[0];
        let result = backdate(Perspective::Alice, obs, 0, &family).unwrap();
        assert!((result.probability - 0.5).abs() < 1e-12);
        assert!((result.ledger.get("initial").unwrap() - 2.0).abs() < 1e-9);
        assert!((result.ledger.get("backdated").unwrap() - 1.0).abs() < 1e-9);
        // support of the backdated initial ensemble: k ∈ {00, 01}
        let support: BTreeSet<String> = result
            .initial_projected
            .members()
            .iter()
            .flat_map(|(_, s)| {
                let layout = s.layout().clone();
                s.blocks()
                    .map(move |(ki, _)| layout.k_labels()[ki].to_string())
                    .collect::<Vec<_>>()
            })
            .collect();
        assert_eq!(support, ["00".to_string(), "01".to_string()].into());

        // stating the same observable on X gives the identical result
        let obs_x = &grover2_half_observables(Register::X)[0];
        let via_x = backdate(Perspective::Alice, obs_x, 0, &family).unwrap();
        assert!(ensembles_equal(
            &result.initial_projected,
            &via_x.initial_projected,
            crate::TOL_STATE
        )
        .unwrap());
    }

    #[test]
    fn backdating_second_bit_restricts_the_oracle_side() {
        let family = grover2();
        let obs = &grover2_half_observables(Register::K)[1];
        let result = backdate(Perspective::Oracle, obs, 0, &family).unwrap();
        assert!((result.probability - 0.5).abs() < 1e-12);
        assert!((result.ledger.get("backdated").unwrap() - 1.0).abs() < 1e-9);
        // x-support of the backdated oracle-side ensemble: {00, 10}
        let layout = result.initial_projected.layout().clone();
        let mut x_support = BTreeSet::new();
        for (_, s) in result.initial_projected.members() {
            for (_, amps) in s.blocks() {
                for x in 0..layout.x_dim() {
                    for v in 0..layout.v_dim() {
                        if amps[layout.amp_index(x, v)].norm() > 1e-9 {
                            x_support.insert(x);
                        }
                    }
                }
            }
        }
        assert_eq!(x_support, [0usize, 2].into());
    }

    #[test]
    fn trivial_projector_backdates_to_the_unchanged_initial_state() {
        let family = grover2();
        let all: Vec<BitString> = BitString::all(2).collect();
        let result = backdate_with_projector(
            Perspective::Alice,
            &Projector::new(Register::K, all).unwrap(),
            &family,
        )
        .unwrap();
        assert!((result.probability - 1.0).abs() < 1e-12);
        assert!((result.ledger.get("initial").unwrap() - 2.0).abs() < 1e-9);
        assert!((result.ledger.get("backdated").unwrap() - 2.0).abs() < 1e-9);
        let plain = relational_initial(Perspective::Alice, &family).unwrap();
        assert!(ensembles_equal(&result.initial_projected, &plain, crate::TOL_STATE)
            .unwrap());
    }

    #[test]
    fn pure_state_backdating_projects_the_expected_subspaces() {
        // coherent route: project the phased output by the first X bit,
        // then undo the unitary on the projected input
        let output = reference::grover2_phased_final(&TEST_PHASES);
        let p = grover2_half_observables(Register::X)[0].projector(0).unwrap();
        let (prob, projected) = crate::hilbert::project(&output, &p).unwrap();
        assert!((prob - 0.5).abs() < 1e-12);
        assert!(states_equal(
            &projected.unwrap(),
            &reference::grover2_half_projected_first_bit(&TEST_PHASES),
            crate::TOL_STATE
        )
        .unwrap());

        // same projection read on K, then backdated to the input
        let pk = grover2_half_observables(Register::K)[0].projector(0).unwrap();
        let (prob_k, projected_k) = crate::hilbert::project(&output, &pk).unwrap();
        assert!((prob_k - 0.5).abs() < 1e-12);
        assert!(states_equal(
            &projected_k.unwrap(),
            &reference::grover2_half_projected_first_bit(&TEST_PHASES),
            crate::TOL_STATE
        )
        .unwrap());

        let input = reference::grover2_phased_initial(&TEST_PHASES);
        let (_, backdated) = crate::hilbert::project(&input, &pk).unwrap();
        assert!(states_equal(
            &backdated.unwrap(),
            &reference::grover2_backdated_observer(&TEST_PHASES),
            crate::TOL_STATE
        )
        .unwrap());

        // second bit read on K projects the output on {00, 10} and
        // backdates along the oracle perspective
        let pk1 = grover2_half_observables(Register::K)[1].projector(0).unwrap();
        let (_, projected) = crate::hilbert::project(&output, &pk1).unwrap();
        assert!(states_equal(
            &projected.unwrap(),
            &reference::grover2_half_projected_second_bit(&TEST_PHASES),
            crate::TOL_STATE
        )
        .unwrap());
        let oracle_input = reference::oracle_view_initial(&TEST_PHASES);
        let px1 = grover2_half_observables(Register::X)[1].projector(0).unwrap();
        let (_, backdated) = crate::hilbert::project(&oracle_input, &px1).unwrap();
        assert!(states_equal(
            &backdated.unwrap(),
            &reference::grover2_backdated_oracle(&TEST_PHASES),
            crate::TOL_STATE
        )
        .unwrap());

        // full measurement projects on the solution, read on either register
        for register in [Register::X, Register::K] {
            let full = Projector::new(register, vec![bs("00")]).unwrap();
            let (prob, solution) = crate::hilbert::project(&output, &full).unwrap();
            assert!((prob - 0.25).abs() < 1e-12);
            assert!(states_equal(
                &solution.unwrap(),
                &reference::grover2_solution_projected(),
                crate::TOL_STATE
            )
            .unwrap());
        }
    }

    #[test]
    fn zero_probability_backdating_is_flagged() {
        let fam = families::FunctionFamily::from_tables(
            "single",
            2,
            1,
            vec![(
                bs("00"),
                vec![
                    BitString::new(1, 1).unwrap(),
                    BitString::zero(1),
                    BitString::zero(1),
                    BitString::zero(1),
                ],
                "00".into(),
            )],
            families::VPrep::Kickback,
        )
        .unwrap();
        let p = Projector::new(Register::K, vec![bs("11")]).unwrap();
        let err = backdate_with_projector(Perspective::Alice, &p, &fam);
        assert!(matches!(err, Err(SimError::InvalidArgument(msg)) if msg.contains("zero-probability")));
    }

    #[test]
    fn even_share_report_counts_and_exactness() {
        let report = even_share_check(&grover2()).unwrap();
        assert_eq!(report.halved_projection_count, 6);
        assert_eq!(report.determining_pairs, 6);
        assert_eq!(report.solution_checks, 24);
        assert_eq!(report.same_observable_rejected, 3);
        assert!((report.alice_share_bits - 1.0).abs() < 1e-9);
        assert!((report.oracle_share_bits - 1.0).abs() < 1e-9);
        assert!((report.full_backdate_drop_bits - 2.0).abs() < 1e-9);
        assert!(report.trivial_residual_drop_bits.abs() < 1e-9);
        assert!(report.backdating_exact);
    }

    #[test]
    fn entropy_ledger_follows_two_one_zero() {
        let ledger = grover2_entropy_ledger(&grover2()).unwrap();
        assert!((ledger.get("initial").unwrap() - 2.0).abs() < 1e-9);
        assert!((ledger.get("post_oracle").unwrap() - 2.0).abs() < 1e-9);
        assert!((ledger.get("post_rotation").unwrap() - 2.0).abs() < 1e-9);
        assert!((ledger.get("after_half_projection").unwrap() - 1.0).abs() < 1e-9);
        assert!(ledger.get("after_full_projection").unwrap().abs() < 1e-9);
        let text = ledger.export();
        assert!(text.contains("initial, 2.000000000"));
        assert!(text.contains("after_half_projection, 1.000000000"));
    }

    #[test]
    fn prefix_bit_backdating_generalizes_to_larger_even_sizes() {
        // sixteen items: one label bit backdates one bit of entropy, the
        // two-bit prefix chain backdates the even share of two
        let family = families::grover_family(4).unwrap();
        let universe: Vec<BitString> = BitString::all(4).collect();
        let obs = HalfObservable::bit(Register::K, &universe, 0).unwrap();
        let result = backdate(Perspective::Alice, &obs, 0, &family).unwrap();
        assert!((result.ledger.get("initial").unwrap() - 4.0).abs() < 1e-9);
        assert!((result.ledger.get("backdated").unwrap() - 3.0).abs() < 1e-9);

        let prefix: Vec<BitString> =
            universe.iter().filter(|l| l.bit(0) == 0 && l.bit(1) == 0).copied().collect();
        let chain = Projector::new(Register::K, prefix).unwrap();
        let result =
            backdate_with_projector(Perspective::Alice, &chain, &family).unwrap();
        assert!((result.probability - 0.25).abs() < 1e-9);
        assert!((result.ledger.get("backdated").unwrap() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn half_observable_invariants() {
        let universe: Vec<BitString> = BitString::all(2).collect();
        let obs = HalfObservable::bit(Register::K, &universe, 0).unwrap();
        assert_eq!(obs.outcome_block(0), &[bs("00"), bs("01")]);
        assert_eq!(obs.outcome_block(1), &[bs("10"), bs("11")]);
        let parity = HalfObservable::parity(Register::K, &universe).unwrap();
        assert_eq!(parity.outcome_block(0), &[bs("00"), bs("11")]);
        assert!(HalfObservable::new(
            Register::K,
            "bad",
            &universe,
            vec![bs("00")]
        )
        .is_err());
    }
}
