//! Reference states for the fixed n = 2 instances, constructed directly
//! from explicit amplitude patterns.
//!
//! Everything here is assembled from literal sign tables and closed-form
//! coefficients, deliberately bypassing [`apply_oracle`] and
//! [`apply_local_unitary`], so that simulator output can be checked
//! against an independent construction. The phased variants take the
//! relational phases (φ01, φ10, φ11) as arguments; the averaged-ensemble
//! variants realize the uniform-phase average as a diagonal mixture.
//!
//! [`apply_oracle`]: crate::hilbert::apply_oracle
//! [`apply_local_unitary`]: crate::hilbert::apply_local_unitary

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;

use crate::bits::BitString;
use crate::hilbert::{BlockState, DensityEnsemble, RegisterLayout};

/// Relational phases attached to the labels 01, 10, 11 (the label 00
/// carries phase zero by convention).
pub type Phases = [f64; 3];

/// A fixed nonzero phase assignment exercised by the verification suite.
pub const TEST_PHASES: Phases = [0.7, 1.3, 2.1];

fn phase(phases: &Phases, label: usize) -> Complex64 {
    match label {
        0 => Complex64::ONE,
        1 => Complex64::from_polar(1.0, phases[0]),
        2 => Complex64::from_polar(1.0, phases[1]),
        3 => Complex64::from_polar(1.0, phases[2]),
        _ => unreachable!("two-bit label"),
    }
}

/// Sign of the kickback component: (−1)^popcount(v).
fn kick(v: usize) -> f64 {
    if v.count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn build<F>(layout: &Arc<RegisterLayout>, f: F) -> BlockState
where
    F: Fn(&BitString, usize, usize) -> Complex64,
{
    BlockState::from_amplitudes(layout.clone(), f).expect("reference state is normalizable")
}

pub fn grover2_layout() -> Arc<RegisterLayout> {
    RegisterLayout::new(BitString::all(2).collect(), 2, 1).expect("valid layout")
}

/// Uniform product state over K and X with V in the kickback state; all
/// 32 amplitudes are ±1/(4√2).
pub fn grover2_initial() -> BlockState {
    build(&grover2_layout(), |_, _, v| Complex64::new(kick(v), 0.0))
}

/// The post-oracle state: within block k the amplitude of x = k changes
/// sign.
pub fn grover2_post_oracle() -> BlockState {
    build(&grover2_layout(), |k, x, v| {
        let delta = if x == k.value() { -1.0 } else { 1.0 };
        Complex64::new(delta * kick(v), 0.0)
    })
}

/// Maximal K–X correlation: Σ_k |k⟩|k⟩ with V factored out.
pub fn grover2_final() -> BlockState {
    build(&grover2_layout(), |k, x, v| {
        if x == k.value() {
            Complex64::new(kick(v), 0.0)
        } else {
            Complex64::ZERO
        }
    })
}

/// The initial state with explicit relational phases on K.
pub fn grover2_phased_initial(phases: &Phases) -> BlockState {
    build(&grover2_layout(), |k, _, v| phase(phases, k.value()) * kick(v))
}

/// The phased output state: (1/(2√2)) Σ_k e^{iφ_k} |k⟩|k⟩ (|0⟩−|1⟩).
pub fn grover2_phased_final(phases: &Phases) -> BlockState {
    build(&grover2_layout(), |k, x, v| {
        if x == k.value() {
            phase(phases, k.value()) * kick(v)
        } else {
            Complex64::ZERO
        }
    })
}

/// The swapped perspective's initial state: phases ride on X instead of K.
pub fn oracle_view_initial(phases: &Phases) -> BlockState {
    build(&grover2_layout(), |_, x, v| phase(phases, x) * kick(v))
}

/// The fully projected output: (1/√2)|00⟩|00⟩(|0⟩−|1⟩).
pub fn grover2_solution_projected() -> BlockState {
    build(&grover2_layout(), |k, x, v| {
        if k.value() == 0 && x == 0 {
            Complex64::new(kick(v), 0.0)
        } else {
            Complex64::ZERO
        }
    })
}

/// Output state after measuring the first X (or K) bit as 0: support on
/// k = x ∈ {00, 01}.
pub fn grover2_half_projected_first_bit(phases: &Phases) -> BlockState {
    build(&grover2_layout(), |k, x, v| {
        if x == k.value() && k.value() < 2 {
            phase(phases, k.value()) * kick(v)
        } else {
            Complex64::ZERO
        }
    })
}

/// Backdated initial state on the observer's side: K restricted to
/// {00, 01}, X still uniform.
pub fn grover2_backdated_observer(phases: &Phases) -> BlockState {
    build(&grover2_layout(), |k, _, v| {
        if k.value() < 2 {
            phase(phases, k.value()) * kick(v)
        } else {
            Complex64::ZERO
        }
    })
}

/// Output state after measuring the second K (or X) bit as 0: support on
/// k = x ∈ {00, 10}.
pub fn grover2_half_projected_second_bit(phases: &Phases) -> BlockState {
    build(&grover2_layout(), |k, x, v| {
        if x == k.value() && k.value() & 1 == 0 {
            phase(phases, k.value()) * kick(v)
        } else {
            Complex64::ZERO
        }
    })
}

/// Backdated initial state on the oracle's side: X restricted to
/// {00, 10}, K still uniform.
pub fn grover2_backdated_oracle(phases: &Phases) -> BlockState {
    build(&grover2_layout(), |_, x, v| {
        if x & 1 == 0 {
            phase(phases, x) * kick(v)
        } else {
            Complex64::ZERO
        }
    })
}

fn product_member(
    layout: &Arc<RegisterLayout>,
    keep: impl Fn(&BitString, usize) -> bool,
    v_sign: impl Fn(usize) -> f64,
) -> BlockState {
    build(layout, |k, x, v| {
        if keep(k, x) {
            Complex64::new(v_sign(v), 0.0)
        } else {
            Complex64::ZERO
        }
    })
}

/// Phase-averaged initial ensemble of the observer perspective: uniform
/// mixture over k of |k⟩ ⊗ uniform X ⊗ kickback V.
pub fn grover2_observer_ensemble() -> DensityEnsemble {
    let layout = grover2_layout();
    let members = layout
        .k_labels()
        .to_vec()
        .into_iter()
        .map(|label| {
            (0.25, product_member(&layout, |k, _| *k == label, kick))
        })
        .collect();
    DensityEnsemble::new(members).expect("valid ensemble")
}

/// Phase-averaged initial ensemble of the oracle perspective: uniform
/// mixture over x of uniform K ⊗ |x⟩ ⊗ kickback V.
pub fn grover2_oracle_ensemble() -> DensityEnsemble {
    let layout = grover2_layout();
    let members = (0..4)
        .map(|x0| (0.25, product_member(&layout, move |_, x| x == x0, kick)))
        .collect();
    DensityEnsemble::new(members).expect("valid ensemble")
}

/// Phase-averaged output ensemble: uniform mixture over k of |k⟩|k⟩ with
/// kickback V.
pub fn grover2_final_ensemble() -> DensityEnsemble {
    let layout = grover2_layout();
    let members = layout
        .k_labels()
        .to_vec()
        .into_iter()
        .map(|label| {
            (
                0.25,
                product_member(&layout, move |k, x| *k == label && x == label.value(), kick),
            )
        })
        .collect();
    DensityEnsemble::new(members).expect("valid ensemble")
}

const DJ_TABLES: [(&str, [usize; 4]); 8] = [
    ("0000", [0, 0, 0, 0]),
    ("0011", [0, 0, 1, 1]),
    ("0101", [0, 1, 0, 1]),
    ("0110", [0, 1, 1, 0]),
    ("1001", [1, 0, 0, 1]),
    ("1010", [1, 0, 1, 0]),
    ("1100", [1, 1, 0, 0]),
    ("1111", [1, 1, 1, 1]),
];

fn dj_table(label: &BitString) -> [usize; 4] {
    DJ_TABLES
        .iter()
        .find(|(l, _)| *l == label.to_string())
        .expect("known constant/balanced label")
        .1
}

pub fn dj_layout() -> Arc<RegisterLayout> {
    let labels = DJ_TABLES
        .iter()
        .map(|(l, _)| BitString::parse(l).expect("label"))
        .collect();
    RegisterLayout::new(labels, 2, 1).expect("valid layout")
}

/// Uniform product over the eight constant/balanced labels; all 64
/// amplitudes are ±1/8.
pub fn dj_initial() -> BlockState {
    build(&dj_layout(), |_, _, v| Complex64::new(kick(v), 0.0))
}

/// Post-oracle state: sign (−1)^{f_k(x)} on each term.
pub fn dj_post_oracle() -> BlockState {
    build(&dj_layout(), |k, x, v| {
        let sign = if dj_table(k)[x] == 1 { -1.0 } else { 1.0 };
        Complex64::new(sign * kick(v), 0.0)
    })
}

/// X amplitude at y of the two-qubit Hadamard transform applied to a
/// ±1 sign pattern, up to overall scale.
fn hadamard_component(signs: &[f64], y: usize) -> f64 {
    signs
        .iter()
        .enumerate()
        .map(|(x, s)| {
            let dot = (x & y).count_ones() as usize & 1;
            if dot == 1 {
                -s
            } else {
                *s
            }
        })
        .sum()
}

/// Post-Hadamard state: each block concentrates on a single X outcome
/// (all zeroes exactly for the constant members).
pub fn dj_final() -> BlockState {
    build(&dj_layout(), |k, x, v| {
        let signs: Vec<f64> = dj_table(k)
            .iter()
            .map(|&f| if f == 1 { -1.0 } else { 1.0 })
            .collect();
        Complex64::new(hadamard_component(&signs, x) * kick(v), 0.0)
    })
}

const SIMON_TABLES: [(&str, [usize; 4], &str); 6] = [
    ("0011", [0, 0, 1, 1], "01"),
    ("0101", [0, 1, 0, 1], "10"),
    ("0110", [0, 1, 1, 0], "11"),
    ("1001", [1, 0, 0, 1], "11"),
    ("1010", [1, 0, 1, 0], "10"),
    ("1100", [1, 1, 0, 0], "01"),
];

fn simon_table(label: &BitString) -> [usize; 4] {
    SIMON_TABLES
        .iter()
        .find(|(l, _, _)| *l == label.to_string())
        .expect("known periodic label")
        .1
}

/// Period of a periodic member, from the frozen table.
pub fn simon_period(label: &BitString) -> BitString {
    let h = SIMON_TABLES
        .iter()
        .find(|(l, _, _)| *l == label.to_string())
        .expect("known periodic label")
        .2;
    BitString::parse(h).expect("period")
}

pub fn simon_layout() -> Arc<RegisterLayout> {
    let labels = SIMON_TABLES
        .iter()
        .map(|(l, _, _)| BitString::parse(l).expect("label"))
        .collect();
    RegisterLayout::new(labels, 2, 1).expect("valid layout")
}

/// Uniform product over the six periodic labels with V in |0⟩.
pub fn simon_initial() -> BlockState {
    build(&simon_layout(), |_, _, v| {
        if v == 0 {
            Complex64::ONE
        } else {
            Complex64::ZERO
        }
    })
}

/// Post-oracle state: V carries the function value, |k, x, f_k(x)⟩.
pub fn simon_post_oracle() -> BlockState {
    build(&simon_layout(), |k, x, v| {
        if simon_table(k)[x] == v {
            Complex64::ONE
        } else {
            Complex64::ZERO
        }
    })
}

/// Post-Hadamard state: for each k, X holds even-weighted superpositions
/// of the strings orthogonal to the period, with V-dependent signs.
pub fn simon_final() -> BlockState {
    build(&simon_layout(), |k, y, v| {
        let table = simon_table(k);
        let amp: f64 = (0..4)
            .filter(|&x| table[x] == v)
            .map(|x| {
                if (x & y).count_ones() % 2 == 1 {
                    -1.0
                } else {
                    1.0
                }
            })
            .sum();
        Complex64::new(amp, 0.0)
    })
}

/// The 24 permutation tables of {0,1}², label = concatenated values.
fn perm_tables() -> Vec<(BitString, [usize; 4])> {
    let mut out = Vec::new();
    let mut perm = [0usize, 1, 2, 3];
    loop {
        let label = BitString::concat(
            &perm
                .iter()
                .map(|&v| BitString::new(2, v).expect("value"))
                .collect::<Vec<_>>(),
        )
        .expect("8-bit label");
        out.push((label, perm));
        let mut i = 3;
        while i > 0 && perm[i - 1] >= perm[i] {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        let mut j = 3;
        while perm[j] <= perm[i - 1] {
            j -= 1;
        }
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
    out.sort_by_key(|(l, _)| *l);
    out
}

pub fn perm_layout() -> Arc<RegisterLayout> {
    let labels = perm_tables().into_iter().map(|(l, _)| l).collect();
    RegisterLayout::new(labels, 2, 2).expect("valid layout")
}

/// Uniform product over the 24 permutation labels with both V qubits in
/// the kickback state; all amplitudes ±1/(8√6).
pub fn perm_initial() -> BlockState {
    build(&perm_layout(), |_, _, v| Complex64::new(kick(v), 0.0))
}

/// State after one oracle call and Hadamard on X: each block concentrates
/// on the X outcome naming its partition class, never 00.
pub fn perm_final() -> BlockState {
    let tables: BTreeMap<BitString, [usize; 4]> = perm_tables().into_iter().collect();
    build(&perm_layout(), |k, y, v| {
        let table = tables[k];
        let signs: Vec<f64> = table
            .iter()
            .map(|&f| if f.count_ones() % 2 == 1 { -1.0 } else { 1.0 })
            .collect();
        Complex64::new(hadamard_component(&signs, y) * kick(v), 0.0)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert;

    #[test]
    fn reference_states_are_normalized() {
        let phases = TEST_PHASES;
        let states = [
            grover2_initial(),
            grover2_post_oracle(),
            grover2_final(),
            grover2_phased_initial(&phases),
            grover2_phased_final(&phases),
            oracle_view_initial(&phases),
            grover2_solution_projected(),
            grover2_half_projected_first_bit(&phases),
            grover2_backdated_observer(&phases),
            grover2_half_projected_second_bit(&phases),
            grover2_backdated_oracle(&phases),
            dj_initial(),
            dj_post_oracle(),
            dj_final(),
            simon_initial(),
            simon_post_oracle(),
            simon_final(),
            perm_initial(),
            perm_final(),
        ];
        for state in &states {
            assert!((state.norm_sqr() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn amplitude_spot_checks() {
        let a = 1.0 / (4.0 * 2.0_f64.sqrt());
        let input = grover2_initial();
        let k01 = BitString::parse("01").unwrap();
        assert!((input.amplitude(&k01, 1, 1).re + a).abs() < 1e-12);

        // post-oracle block 01 over x: (+,−,+,+) with kickback V
        let second = grover2_post_oracle();
        assert!((second.amplitude(&k01, 0, 0).re - a).abs() < 1e-12);
        assert!((second.amplitude(&k01, 1, 0).re + a).abs() < 1e-12);
        assert!((second.amplitude(&k01, 2, 0).re - a).abs() < 1e-12);
        assert!((second.amplitude(&k01, 3, 0).re - a).abs() < 1e-12);

        let b = 1.0 / (2.0 * 2.0_f64.sqrt());
        let output = grover2_final();
        assert!((output.amplitude(&k01, 1, 0).re - b).abs() < 1e-12);
        assert!((output.amplitude(&k01, 1, 1).re + b).abs() < 1e-12);
        assert_eq!(output.amplitude(&k01, 0, 0), Complex64::ZERO);

        // constant block concentrates on x = 00, first balanced block on 10
        let hdj = dj_final();
        let quarter = 0.25;
        let k0000 = BitString::parse("0000").unwrap();
        let k0011 = BitString::parse("0011").unwrap();
        let k1111 = BitString::parse("1111").unwrap();
        assert!((hdj.amplitude(&k0000, 0, 0).re - quarter).abs() < 1e-12);
        assert!((hdj.amplitude(&k1111, 0, 0).re + quarter).abs() < 1e-12);
        assert!((hdj.amplitude(&k0011, 2, 0).re - quarter).abs() < 1e-12);
        assert_eq!(hdj.amplitude(&k0011, 0, 0), Complex64::ZERO);

        // periodic member 0011: (|00⟩+|10⟩)|0⟩ + (|00⟩−|10⟩)|1⟩ within its block
        let hs = simon_final();
        let c = 1.0 / (2.0 * 6.0_f64.sqrt());
        assert!((hs.amplitude(&k0011, 0, 0).re - c).abs() < 1e-12);
        assert!((hs.amplitude(&k0011, 2, 0).re - c).abs() < 1e-12);
        assert!((hs.amplitude(&k0011, 0, 1).re - c).abs() < 1e-12);
        assert!((hs.amplitude(&k0011, 2, 1).re + c).abs() < 1e-12);
        assert_eq!(hs.amplitude(&k0011, 1, 0), Complex64::ZERO);

        // permutation member 00011110 lands on X outcome 01
        let pf = perm_final();
        let k_perm = BitString::parse("00011110").unwrap();
        let d = 1.0 / (4.0 * 6.0_f64.sqrt());
        assert!((pf.amplitude(&k_perm, 1, 0).re - d).abs() < 1e-12);
        assert_eq!(pf.amplitude(&k_perm, 0, 0), Complex64::ZERO);
        assert_eq!(pf.amplitude(&k_perm, 2, 0), Complex64::ZERO);
    }

    #[test]
    fn phased_states_carry_the_phases_coherently() {
        let phases = TEST_PHASES;
        let state = grover2_phased_final(&phases);
        let k00 = BitString::parse("00").unwrap();
        let k10 = BitString::parse("10").unwrap();
        let ratio = state.amplitude(&k10, 2, 0) / state.amplitude(&k00, 0, 0);
        assert!((ratio - Complex64::from_polar(1.0, phases[1])).norm() < 1e-12);
    }

    #[test]
    fn ensembles_have_uniform_weights() {
        for ens in [
            grover2_observer_ensemble(),
            grover2_oracle_ensemble(),
            grover2_final_ensemble(),
        ] {
            assert_eq!(ens.members().len(), 4);
            for (p, state) in ens.members() {
                assert!((p - 0.25).abs() < 1e-12);
                assert!((state.norm_sqr() - 1.0).abs() < 1e-12);
            }
        }
        let rho = hilbert::reduced_density_k(&grover2_observer_ensemble());
        assert!((hilbert::entropy_bits(&rho) - 2.0).abs() < 1e-12);
    }
}
