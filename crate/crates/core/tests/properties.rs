//! Property tests for the state machinery and the advice combinatorics.

use std::sync::Arc;

use num_complex::Complex64;
use proptest::prelude::*;

use oraclesim::bits::BitString;
use oraclesim::families::{self, gf2_solve, good_half_tables, members_matching_rows};
use oraclesim::hilbert::{
    apply_local_unitary, apply_oracle, entropy_bits, project, reduced_density_k,
    states_equal, BlockState, DensityEnsemble, Projector, Register, RegisterLayout,
};

fn layout(k_width: usize, x_bits: usize, v_bits: usize) -> Arc<RegisterLayout> {
    RegisterLayout::new(BitString::all(k_width).collect(), x_bits, v_bits).unwrap()
}

fn arb_dims() -> impl Strategy<Value = (usize, usize, usize)> {
    (1usize..=2, 1usize..=2, 1usize..=2)
}

fn arb_amps(len: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), len)
}

fn build_state(
    layout: &Arc<RegisterLayout>,
    raw: &[(f64, f64)],
) -> Option<BlockState> {
    let block_len = layout.block_len();
    let norm_sqr: f64 = raw.iter().map(|(re, im)| re * re + im * im).sum();
    if norm_sqr < 0.1 {
        return None;
    }
    BlockState::from_amplitudes(layout.clone(), |k, x, v| {
        let ki = layout.label_index(k).unwrap();
        let (re, im) = raw[ki * block_len + layout.amp_index(x, v)];
        Complex64::new(re, im)
    })
    .ok()
}

fn build_family(
    layout: &Arc<RegisterLayout>,
    values: &[usize],
) -> families::FunctionFamily {
    let rows = layout.x_dim();
    let tables = layout
        .k_labels()
        .iter()
        .enumerate()
        .map(|(ki, &label)| {
            let table = (0..rows)
                .map(|x| {
                    BitString::new(layout.v_bits(), values[ki * rows + x] % layout.v_dim())
                        .unwrap()
                })
                .collect();
            (label, table, label.to_string())
        })
        .collect();
    families::FunctionFamily::from_tables(
        "prop",
        layout.x_bits(),
        layout.v_bits(),
        tables,
        families::VPrep::Kickback,
    )
    .unwrap()
}

fn random_unitary(dim: usize, seed: &[(f64, f64)]) -> nalgebra::DMatrix<Complex64> {
    let m = nalgebra::DMatrix::from_fn(dim, dim, |i, j| {
        let (re, im) = seed[i * dim + j];
        Complex64::new(re + if i == j { 1.5 } else { 0.0 }, im)
    });
    m.qr().q()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn oracle_and_local_unitaries_preserve_norm_and_block_weights(
        (kw, xb, vb) in arb_dims(),
        raw in arb_amps(4 * 16),
        values in prop::collection::vec(0usize..4, 4 * 4),
        useed in arb_amps(16),
        on_v in any::<bool>(),
    ) {
        let layout = layout(kw, xb, vb);
        let raw = &raw[..layout.k_labels().len() * layout.block_len()];
        let state = match build_state(&layout, raw) {
            Some(s) => s,
            None => return Ok(()),
        };
        let family = build_family(&layout, &values);

        let oracled = apply_oracle(&state, &family).unwrap();
        prop_assert!((oracled.norm_sqr() - 1.0).abs() < 1e-12);

        let (register, dim) = if on_v {
            (Register::V, layout.v_dim())
        } else {
            (Register::X, layout.x_dim())
        };
        let u = random_unitary(dim, &useed);
        let rotated = apply_local_unitary(&state, register, &u).unwrap();
        prop_assert!((rotated.norm_sqr() - 1.0).abs() < 1e-12);

        // amplitude never moves between k-blocks
        for label in layout.k_labels() {
            let before = state.block_weight(label);
            prop_assert!((oracled.block_weight(label) - before).abs() < 1e-12);
            prop_assert!((rotated.block_weight(label) - before).abs() < 1e-12);
        }
    }

    #[test]
    fn oracle_is_an_involution(
        (kw, xb, vb) in arb_dims(),
        raw in arb_amps(4 * 16),
        values in prop::collection::vec(0usize..4, 4 * 4),
    ) {
        let layout = layout(kw, xb, vb);
        let raw = &raw[..layout.k_labels().len() * layout.block_len()];
        let state = match build_state(&layout, raw) {
            Some(s) => s,
            None => return Ok(()),
        };
        let family = build_family(&layout, &values);
        let twice = apply_oracle(&apply_oracle(&state, &family).unwrap(), &family).unwrap();
        prop_assert!(states_equal(&state, &twice, 1e-12).unwrap());
    }

    #[test]
    fn projection_is_idempotent_and_outcomes_complete(
        (kw, xb, vb) in arb_dims(),
        raw in arb_amps(4 * 16),
        subset_bits in 1usize..15,
        on_x in any::<bool>(),
    ) {
        let layout = layout(kw, xb, vb);
        let raw = &raw[..layout.k_labels().len() * layout.block_len()];
        let state = match build_state(&layout, raw) {
            Some(s) => s,
            None => return Ok(()),
        };
        let (register, basis): (Register, Vec<BitString>) = if on_x {
            (Register::X, BitString::all(layout.x_bits()).collect())
        } else {
            (Register::K, layout.k_labels().to_vec())
        };
        let kept: Vec<BitString> = basis
            .iter()
            .enumerate()
            .filter(|(i, _)| subset_bits >> (i % 4) & 1 == 1)
            .map(|(_, b)| *b)
            .collect();
        if kept.is_empty() || kept.len() == basis.len() {
            return Ok(());
        }
        let p = Projector::new(register, kept.clone()).unwrap();
        let (prob, post) = project(&state, &p).unwrap();
        if let Some(post) = post {
            let (prob2, post2) = project(&post, &p).unwrap();
            prop_assert!(
                (prob2 - 1.0).abs() < 1e-10,
                "prob={prob} prob2={prob2}"
            );
            let dist = oraclesim::hilbert::state_distance(&post, &post2.unwrap()).unwrap();
            prop_assert!(dist <= 1e-10, "prob={prob} prob2={prob2} dist={dist}");
        }
        // complement completes the outcome partition
        let rest: Vec<BitString> =
            basis.iter().filter(|b| !kept.contains(b)).copied().collect();
        let q = Projector::new(register, rest).unwrap();
        let (prob_rest, _) = project(&state, &q).unwrap();
        prop_assert!((prob + prob_rest - 1.0).abs() < 1e-10);
    }

    #[test]
    fn k_entropy_is_invariant_under_local_unitaries(
        (kw, xb, vb) in arb_dims(),
        raw in arb_amps(2 * 4 * 16),
        weights in prop::collection::vec(0.1f64..1.0, 2),
        useed in arb_amps(16),
        on_v in any::<bool>(),
    ) {
        let layout = layout(kw, xb, vb);
        let span = layout.k_labels().len() * layout.block_len();
        let mut members = Vec::new();
        let total: f64 = weights.iter().sum();
        for (i, w) in weights.iter().enumerate() {
            match build_state(&layout, &raw[i * span..(i + 1) * span]) {
                Some(s) => members.push((w / total, s)),
                None => return Ok(()),
            }
        }
        let ens = DensityEnsemble::new(members).unwrap();
        let rho = reduced_density_k(&ens);
        // valid density operator: Hermitian, unit trace
        prop_assert!((rho.trace() - 1.0).abs() < 1e-10);
        let data = rho.data();
        for i in 0..data.nrows() {
            for j in 0..data.ncols() {
                prop_assert!((data[(i, j)] - data[(j, i)].conj()).norm() < 1e-12);
            }
        }
        let before = entropy_bits(&rho);
        let (register, dim) = if on_v {
            (Register::V, layout.v_dim())
        } else {
            (Register::X, layout.x_dim())
        };
        let u = random_unitary(dim, &useed);
        let after = entropy_bits(&reduced_density_k(
            &ens.map(|s| apply_local_unitary(s, register, &u)).unwrap(),
        ));
        prop_assert!((before - after).abs() < 1e-9);
    }

    #[test]
    fn period_solving_round_trips_on_random_independent_subsets(
        n in 5usize..=6,
        h_raw in 1usize..64,
        picks in prop::collection::vec(any::<u32>(), 8),
    ) {
        let h_val = h_raw & ((1 << n) - 1);
        if h_val == 0 {
            return Ok(());
        }
        let h = BitString::new(n, h_val).unwrap();
        let orthogonal: Vec<BitString> = families::orthogonal_strings(&h)
            .unwrap()
            .into_iter()
            .filter(|s| !s.is_zero())
            .collect();
        // greedy-pick an independent set of n−1 strings steered by the
        // random indices
        let mut chosen = std::collections::BTreeSet::new();
        let mut basis: Vec<usize> = Vec::new();
        let mut cursor = 0usize;
        while chosen.len() < n - 1 && cursor < 64 {
            let idx = picks[cursor % picks.len()] as usize + cursor;
            let s = orthogonal[idx % orthogonal.len()];
            cursor += 1;
            let mut r = s.value();
            for &b in &basis {
                let lead = 1usize << (usize::BITS - 1 - b.leading_zeros()) as usize;
                if r & lead != 0 {
                    r ^= b;
                }
            }
            if r != 0 {
                basis.push(r);
                basis.sort_by_key(|&b| std::cmp::Reverse(b));
                chosen.insert(s);
            }
        }
        prop_assume!(chosen.len() == n - 1);
        prop_assert_eq!(gf2_solve(&chosen, n).unwrap(), h);
    }
}

#[test]
fn period_solving_round_trips_exhaustively_for_small_widths() {
    for n in 2usize..=4 {
        for h in BitString::all(n).filter(|h| !h.is_zero()) {
            let orthogonal: Vec<BitString> = families::orthogonal_strings(&h)
                .unwrap()
                .into_iter()
                .filter(|s| !s.is_zero())
                .collect();
            let m = orthogonal.len();
            // every (n−1)-subset that is independent must solve back to h
            let mut independent_found = 0usize;
            for mask in 0..1usize << m {
                if (mask as u32).count_ones() as usize != n - 1 {
                    continue;
                }
                let subset: std::collections::BTreeSet<BitString> = (0..m)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| orthogonal[i])
                    .collect();
                // dependent subsets are rejected; independent ones must
                // recover h
                if let Ok(found) = gf2_solve(&subset, n) {
                    independent_found += 1;
                    assert_eq!(found, h);
                }
            }
            assert!(independent_found > 0, "no independent subset for h = {h}");
        }
    }
}

#[test]
fn good_half_tables_leave_exactly_one_more_query() {
    // for each family, member, and good half table, the value observed at
    // any admissible query pins the solution token
    for family in [
        families::grover_family(2).unwrap(),
        families::dj_family(),
        families::simon_family(),
        families::perm_family(),
    ] {
        for member in family.labels() {
            for advice in good_half_tables(&family, &member).unwrap() {
                let mut determined_by_one = true;
                for x in 0..4usize {
                    let xs = BitString::new(2, x).unwrap();
                    if advice.contains_row(&xs) {
                        continue;
                    }
                    let mut rows = advice.revealed().clone();
                    rows.insert(xs, family.value(&member, x).unwrap());
                    let consistent = members_matching_rows(&family, &rows);
                    let tokens: std::collections::BTreeSet<&str> = consistent
                        .iter()
                        .map(|k| family.solution(k).unwrap())
                        .collect();
                    if tokens.len() != 1 {
                        determined_by_one = false;
                    }
                }
                assert!(
                    determined_by_one,
                    "family {}, member {member}, advice {advice}",
                    family.id()
                );
            }
        }
    }
}
