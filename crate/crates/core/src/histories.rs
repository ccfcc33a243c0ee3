//! Classical computation histories with advance information, and the
//! reconstruction of the oracle stage as their phased superposition.
//!
//! One history is: an advice choice, an admissible query, a consistent
//! member, an initial V value, and the basis-state transition the oracle
//! performs. Summing the distinct transitions with phases inherited from
//! the input superposition, then normalizing, reproduces the quantum
//! oracle stage exactly; pushing each history through the basis rotation
//! makes the branches interfere into the final state.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::bits::BitString;
use crate::families::{good_half_tables, members_matching_rows, FunctionFamily};
use crate::hilbert::BlockState;
use crate::SimError;

/// How the advance information is represented.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AdviceMode {
    /// The six halved projections of the four-item search instance:
    /// candidate pairs of K labels.
    HalvedProjections,
    /// Every distinct good half table of the family.
    GoodHalfTables,
}

/// One classical computation record.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct History {
    /// Which advice originated the history (provenance metadata).
    pub advice: String,
    pub query_x: BitString,
    pub k: BitString,
    pub v_init: usize,
    pub v_out: usize,
}

/// A basis-state transition |k, x, v_in⟩ → |k, x, v_out⟩.
pub type Transition = (BitString, usize, usize, usize);

impl History {
    pub fn transition(&self) -> Transition {
        (self.k, self.query_x.value(), self.v_init, self.v_out)
    }
}

/// All histories of a family's advance-information strategies, with
/// multiplicities.
#[derive(Clone, Debug)]
pub struct HistoryBag {
    family_id: String,
    arg_bits: usize,
    value_bits: usize,
    advice_count: usize,
    histories: Vec<History>,
}

impl HistoryBag {
    pub fn family_id(&self) -> &str {
        &self.family_id
    }

    pub fn histories(&self) -> &[History] {
        &self.histories
    }

    /// Number of advice choices enumerated.
    pub fn advice_count(&self) -> usize {
        self.advice_count
    }

    /// Histories counted with multiplicity.
    pub fn total_count(&self) -> usize {
        self.histories.len()
    }

    pub fn histories_for_advice(&self, advice: &str) -> Vec<&History> {
        self.histories.iter().filter(|h| h.advice == advice).collect()
    }

    pub fn distinct_transitions(&self) -> BTreeSet<Transition> {
        self.histories.iter().map(History::transition).collect()
    }

    pub fn multiplicities(&self) -> BTreeMap<Transition, usize> {
        let mut out = BTreeMap::new();
        for h in &self.histories {
            *out.entry(h.transition()).or_insert(0) += 1;
        }
        out
    }

    /// `advice, query_x, k, v_init, out_v` rows in enumeration order.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for h in &self.histories {
            writeln!(
                out,
                "{}, {}, {}, {}, {}",
                h.advice, h.query_x, h.k, h.v_init, h.v_out
            )
            .expect("string write");
        }
        out
    }
}

/// Queries whose value is not forced by the advice over the consistent
/// members.
fn admissible_queries(
    family: &FunctionFamily,
    consistent: &[BitString],
) -> Vec<usize> {
    (0..1usize << family.arg_bits())
        .filter(|&x| {
            let first = family.value(&consistent[0], x).expect("member");
            consistent
                .iter()
                .any(|k| family.value(k, x).expect("member") != first)
        })
        .collect()
}

fn push_histories(
    family: &FunctionFamily,
    advice_name: &str,
    consistent: &[BitString],
    out: &mut Vec<History>,
) {
    let v_dim = 1usize << family.value_bits();
    for &x in &admissible_queries(family, consistent) {
        for k in consistent {
            let fx = family.value(k, x).expect("member").value();
            for v_init in 0..v_dim {
                out.push(History {
                    advice: advice_name.to_string(),
                    query_x: BitString::new(family.arg_bits(), x).expect("x width"),
                    k: *k,
                    v_init,
                    v_out: v_init ^ fx,
                });
            }
        }
    }
}

/// Enumerates every history: for every advice choice, every admissible
/// query, every consistent member, every initial V value.
pub fn enumerate_histories(
    family: &FunctionFamily,
    mode: AdviceMode,
) -> Result<HistoryBag, SimError> {
    if family.arg_bits() != 2 {
        return Err(SimError::InvalidArgument(
            "history enumeration is defined for the two-argument-bit instances".into(),
        ));
    }
    let mut histories = Vec::new();
    let advice_count;
    match mode {
        AdviceMode::HalvedProjections => {
            let labels = family.labels();
            if labels.len() != 4 || labels.iter().enumerate().any(|(i, l)| l.value() != i)
            {
                return Err(SimError::InvalidArgument(
                    "halved projections need the four-item search labels".into(),
                ));
            }
            // all balanced 2-subsets: the outcomes of the three binary
            // observables
            let mut subsets: Vec<Vec<BitString>> = Vec::new();
            for i in 0..4 {
                for j in i + 1..4 {
                    subsets.push(vec![labels[i], labels[j]]);
                }
            }
            advice_count = subsets.len();
            for subset in subsets {
                let name = format!("k∈{{{},{}}}", subset[0], subset[1]);
                push_histories(family, &name, &subset, &mut histories);
            }
        }
        AdviceMode::GoodHalfTables => {
            let mut seen = BTreeSet::new();
            for member in family.labels() {
                for advice in good_half_tables(family, &member)? {
                    if !seen.insert(advice.clone()) {
                        continue;
                    }
                    let consistent = members_matching_rows(family, advice.revealed());
                    push_histories(family, &advice.to_string(), &consistent, &mut histories);
                }
            }
            advice_count = seen.len();
        }
    }
    Ok(HistoryBag {
        family_id: family.id().to_string(),
        arg_bits: family.arg_bits(),
        value_bits: family.value_bits(),
        advice_count,
        histories,
    })
}

/// Sums the distinct history transitions, each weighted by the input
/// state's amplitude on its initial basis state, and normalizes. With
/// `weighted` set, each transition is additionally scaled by its
/// multiplicity; that variant carries no reconstruction claim.
pub fn phased_sum(
    bag: &HistoryBag,
    input: &BlockState,
    weighted: bool,
) -> Result<BlockState, SimError> {
    let layout = input.layout().clone();
    if layout.x_bits() != bag.arg_bits || layout.v_bits() != bag.value_bits {
        return Err(SimError::LayoutMismatch);
    }
    let transitions = bag.multiplicities();
    let covered: BTreeSet<(BitString, usize, usize)> = transitions
        .keys()
        .map(|&(k, x, v_in, _)| (k, x, v_in))
        .collect();
    for (ki, amps) in input.blocks() {
        let label = layout.k_labels()[ki];
        for x in 0..layout.x_dim() {
            for v in 0..layout.v_dim() {
                if amps[layout.amp_index(x, v)].norm() > 1e-12
                    && !covered.contains(&(label, x, v))
                {
                    return Err(SimError::HistorySetIncomplete(format!(
                        "|{label}, {x:0width$b}, {v}⟩",
                        width = layout.x_bits()
                    )));
                }
            }
        }
    }
    let mut blocks: BTreeMap<usize, Vec<Complex64>> = BTreeMap::new();
    for (&(k, x, v_in, v_out), &mult) in &transitions {
        let weight = input.amplitude(&k, x, v_in)
            * if weighted {
                Complex64::new(mult as f64, 0.0)
            } else {
                Complex64::ONE
            };
        if weight.norm() <= 1e-15 {
            continue;
        }
        let ki = layout.label_index(&k).ok_or(SimError::LayoutMismatch)?;
        blocks
            .entry(ki)
            .or_insert_with(|| vec![Complex64::ZERO; layout.block_len()])
            [layout.amp_index(x, v_out)] += weight;
    }
    let snapshot = blocks;
    BlockState::from_amplitudes(layout.clone(), |label, x, v| {
        layout
            .label_index(label)
            .and_then(|ki| snapshot.get(&ki))
            .map(|amps| amps[layout.amp_index(x, v)])
            .unwrap_or(Complex64::ZERO)
    })
}

/// One history pushed through the basis rotation.
#[derive(Clone, Debug)]
pub struct HistoryBranches {
    pub transition: Transition,
    /// Weight the transition carries in the phased sum.
    pub weight: Complex64,
    /// (x outcome, rotation coefficient) pairs with nonzero coefficient.
    pub branches: Vec<(usize, Complex64)>,
}

/// Branch decomposition of the rotation stage over the history set.
#[derive(Clone, Debug)]
pub struct BranchReport {
    pub per_history: Vec<HistoryBranches>,
    /// The weighted interference sum of all branches, normalized.
    pub interference: BlockState,
}

impl BranchReport {
    /// Branch counts per history (branches with nonzero amplitude).
    pub fn branch_counts(&self) -> Vec<usize> {
        self.per_history.iter().map(|h| h.branches.len()).collect()
    }

    /// Per-history branch amplitudes, 12 significant digits.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for h in &self.per_history {
            let (k, x, v_in, v_out) = h.transition;
            write!(out, "{k}, {x}, {v_in}, {v_out}:").expect("string write");
            for (xo, c) in &h.branches {
                write!(out, " {xo}:{:.11e}{:+.11e}i", c.re, c.im).expect("string write");
            }
            out.push('\n');
        }
        out
    }
}

/// Applies the rotation to each distinct history's output X state,
/// recording the branches, and verifies that their weighted interference
/// reproduces the post-rotation state.
pub fn branch_through_rotation(
    bag: &HistoryBag,
    rotation: &DMatrix<Complex64>,
    input: &BlockState,
) -> Result<BranchReport, SimError> {
    let layout = input.layout().clone();
    let x_dim = layout.x_dim();
    if rotation.nrows() != x_dim || rotation.ncols() != x_dim {
        return Err(SimError::LayoutMismatch);
    }
    let mut per_history = Vec::new();
    let mut blocks: BTreeMap<usize, Vec<Complex64>> = BTreeMap::new();
    for &(k, x, v_in, v_out) in bag.distinct_transitions().iter() {
        let weight = input.amplitude(&k, x, v_in);
        let branches: Vec<(usize, Complex64)> = (0..x_dim)
            .map(|xo| (xo, rotation[(xo, x)]))
            .filter(|(_, c)| c.norm() > 1e-12)
            .collect();
        if weight.norm() > 1e-15 {
            let ki = layout.label_index(&k).ok_or(SimError::LayoutMismatch)?;
            let amps = blocks
                .entry(ki)
                .or_insert_with(|| vec![Complex64::ZERO; layout.block_len()]);
            for &(xo, c) in &branches {
                amps[layout.amp_index(xo, v_out)] += weight * c;
            }
        }
        per_history.push(HistoryBranches { transition: (k, x, v_in, v_out), weight, branches });
    }
    let snapshot = blocks;
    let interference = BlockState::from_amplitudes(layout.clone(), |label, x, v| {
        layout
            .label_index(label)
            .and_then(|ki| snapshot.get(&ki))
            .map(|amps| amps[layout.amp_index(x, v)])
            .unwrap_or(Complex64::ZERO)
    })?;
    Ok(BranchReport { per_history, interference })
}
