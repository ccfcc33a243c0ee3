//! Registry of oracle function families, their tables, solution maps,
//! and half-table advice machinery.
//!
//! A family is a finite set of functions f_k: {0,1}^n → {0,1}^m indexed
//! by a bit-string label k, together with a solution token per member.
//! The token is what a classical strategy must determine: the label
//! itself for database search, constant-vs-balanced for the promise
//! problem, the period for the two-to-one family, and the partition
//! class for the permutation family.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::bits::BitString;
use crate::SimError;

/// Initial preparation of the result register V.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VPrep {
    /// Every V qubit in (|0⟩ − |1⟩)/√2, so function values kick back as
    /// signs.
    Kickback,
    /// V in the all-zeroes basis state; values land in V itself.
    Zero,
}

#[derive(Clone, Debug)]
struct Member {
    table: Vec<BitString>,
    solution: String,
}

/// A finite set of oracle functions with a solution map.
#[derive(Clone, Debug)]
pub struct FunctionFamily {
    id: String,
    arg_bits: usize,
    value_bits: usize,
    members: BTreeMap<BitString, Member>,
    v_prep: VPrep,
}

impl FunctionFamily {
    /// Builds a family from explicit tables. Each table lists f_k(x) for
    /// ascending x and must have exactly 2^n entries of m bits.
    pub fn from_tables(
        id: &str,
        arg_bits: usize,
        value_bits: usize,
        tables: Vec<(BitString, Vec<BitString>, String)>,
        v_prep: VPrep,
    ) -> Result<Self, SimError> {
        if tables.is_empty() {
            return Err(SimError::InvalidFamily("no members".into()));
        }
        let rows = 1usize << arg_bits;
        let mut members = BTreeMap::new();
        for (label, table, solution) in tables {
            if table.len() != rows {
                return Err(SimError::InvalidFamily(format!(
                    "member {label} has {} rows, expected {rows}",
                    table.len()
                )));
            }
            if table.iter().any(|v| v.width() != value_bits) {
                return Err(SimError::InvalidFamily(format!(
                    "member {label} has a value of the wrong width"
                )));
            }
            if members.insert(label, Member { table, solution }).is_some() {
                return Err(SimError::InvalidFamily(format!("duplicate member {label}")));
            }
        }
        Ok(Self { id: id.to_string(), arg_bits, value_bits, members, v_prep })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn arg_bits(&self) -> usize {
        self.arg_bits
    }

    pub fn value_bits(&self) -> usize {
        self.value_bits
    }

    pub fn v_prep(&self) -> VPrep {
        self.v_prep
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn labels(&self) -> Vec<BitString> {
        self.members.keys().copied().collect()
    }

    pub fn table(&self, label: &BitString) -> Option<&[BitString]> {
        self.members.get(label).map(|m| m.table.as_slice())
    }

    pub fn value(&self, label: &BitString, x: usize) -> Option<BitString> {
        self.members.get(label).map(|m| m.table[x])
    }

    pub fn solution(&self, label: &BitString) -> Option<&str> {
        self.members.get(label).map(|m| m.solution.as_str())
    }

    /// Serializes to the plain-text table format: header row of k-labels,
    /// one row per argument value.
    pub fn to_table_string(&self) -> String {
        let mut out = String::from("x");
        for label in self.members.keys() {
            write!(out, "\t{label}").expect("string write");
        }
        out.push('\n');
        for x in 0..1usize << self.arg_bits {
            let xs = BitString::new(self.arg_bits, x).expect("x width");
            write!(out, "{xs}").expect("string write");
            for member in self.members.values() {
                write!(out, "\t{}", member.table[x]).expect("string write");
            }
            out.push('\n');
        }
        out
    }

    /// Parses the table format produced by [`to_table_string`]. Loaded
    /// members get their own label as solution token, so the induced
    /// problem is to identify the oracle's choice.
    ///
    /// [`to_table_string`]: FunctionFamily::to_table_string
    pub fn from_table_str(id: &str, text: &str, v_prep: VPrep) -> Result<Self, SimError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| SimError::InvalidFamily("empty table file".into()))?;
        let mut cols = header.split('\t');
        if cols.next() != Some("x") {
            return Err(SimError::InvalidFamily("header must start with 'x'".into()));
        }
        let labels: Vec<BitString> =
            cols.map(BitString::parse).collect::<Result<_, _>>()?;
        if labels.is_empty() {
            return Err(SimError::InvalidFamily("no members in header".into()));
        }
        let mut rows: Vec<(BitString, Vec<BitString>)> = Vec::new();
        for line in lines {
            let mut cols = line.split('\t');
            let x = BitString::parse(
                cols.next()
                    .ok_or_else(|| SimError::InvalidFamily("short row".into()))?,
            )?;
            let values: Vec<BitString> =
                cols.map(BitString::parse).collect::<Result<_, _>>()?;
            if values.len() != labels.len() {
                return Err(SimError::InvalidFamily(format!(
                    "row {x} has {} values for {} members",
                    values.len(),
                    labels.len()
                )));
            }
            rows.push((x, values));
        }
        let arg_bits = rows
            .first()
            .ok_or_else(|| SimError::InvalidFamily("no rows".into()))?
            .0
            .width();
        if rows.len() != 1 << arg_bits {
            return Err(SimError::InvalidFamily(format!(
                "{} rows for {arg_bits} argument bits",
                rows.len()
            )));
        }
        rows.sort_by_key(|(x, _)| *x);
        for (i, (x, _)) in rows.iter().enumerate() {
            if x.value() != i {
                return Err(SimError::InvalidFamily(format!("missing row {i}")));
            }
        }
        let value_bits = rows[0].1[0].width();
        let tables = labels
            .iter()
            .enumerate()
            .map(|(col, &label)| {
                let table: Vec<BitString> = rows.iter().map(|(_, vs)| vs[col]).collect();
                (label, table, label.to_string())
            })
            .collect();
        Self::from_tables(id, arg_bits, value_bits, tables, v_prep)
    }
}

/// Database-search family: f_k(x) = 1 iff x = k, for all n-bit k.
pub fn grover_family(n: usize) -> Result<FunctionFamily, SimError> {
    if !(1..=8).contains(&n) {
        return Err(SimError::InvalidArgument(format!(
            "search family size 2^{n} out of range"
        )));
    }
    let tables = BitString::all(n)
        .map(|k| {
            let table = BitString::all(n)
                .map(|x| BitString::new(1, usize::from(x == k)).expect("bit"))
                .collect();
            (k, table, k.to_string())
        })
        .collect();
    FunctionFamily::from_tables("grover", n, 1, tables, VPrep::Kickback)
}

pub const SOLUTION_CONSTANT: &str = "constant";
pub const SOLUTION_BALANCED: &str = "balanced";

/// The constant-vs-balanced family on 2 argument bits: the two constant
/// functions plus the six with an even number of zeroes and ones. The
/// label is the table read downward.
pub fn dj_family() -> FunctionFamily {
    let mut tables = Vec::new();
    for k in BitString::all(4) {
        let ones = (0..4).filter(|&x| k.bit(x) == 1).count();
        let solution = match ones {
            0 | 4 => SOLUTION_CONSTANT,
            2 => SOLUTION_BALANCED,
            _ => continue,
        };
        let table = (0..4)
            .map(|x| BitString::new(1, k.bit(x)).expect("bit"))
            .collect();
        tables.push((k, table, solution.to_string()));
    }
    FunctionFamily::from_tables("dj", 2, 1, tables, VPrep::Kickback)
        .expect("fixed family is valid")
}

/// The two-to-one family on 2 argument bits: f_k(x) = f_k(x ⊕ h) with a
/// hidden nonzero period h. The label is the table read downward and the
/// solution token is h.
pub fn simon_family() -> FunctionFamily {
    let mut tables = Vec::new();
    for k in BitString::all(4) {
        let column: Vec<usize> = (0..4).map(|x| k.bit(x)).collect();
        // Two-to-one on one value bit means exactly two ones.
        if column.iter().sum::<usize>() != 2 {
            continue;
        }
        let h = match BitString::all(2)
            .filter(|h| !h.is_zero())
            .find(|h| (0..4).all(|x| column[x] == column[x ^ h.value()]))
        {
            Some(h) => h,
            None => continue,
        };
        let table = column
            .iter()
            .map(|&v| BitString::new(1, v).expect("bit"))
            .collect();
        tables.push((k, table, h.to_string()));
    }
    FunctionFamily::from_tables("simon", 2, 1, tables, VPrep::Zero)
        .expect("fixed family is valid")
}

/// Partition class of a permutation member: the 2-bit string s such that
/// the output parity satisfies parity(f(x)) = s·x ⊕ c. Every balanced
/// 2-bit pattern is affine, so s is well defined.
fn perm_class(table: &[BitString]) -> BitString {
    let parity = |v: &BitString| (v.value().count_ones() as usize) & 1;
    let p00 = parity(&table[0]);
    let s0 = parity(&table[2]) ^ p00; // x = 10 isolates the first bit
    let s1 = parity(&table[1]) ^ p00; // x = 01 isolates the second bit
    BitString::new(2, (s0 << 1) | s1).expect("2-bit class")
}

/// All 24 bijections on {0,1}²; the label is the concatenated table and
/// the solution token is the partition class of the output parities.
pub fn perm_family() -> FunctionFamily {
    let values: Vec<BitString> = BitString::all(2).collect();
    let mut tables = Vec::new();
    let mut perm = [0usize, 1, 2, 3];
    loop {
        let table: Vec<BitString> = perm.iter().map(|&i| values[i]).collect();
        let label = BitString::concat(&table).expect("8-bit label");
        tables.push((label, table.clone(), perm_class(&table).to_string()));
        // next_permutation in lexicographic order
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
    FunctionFamily::from_tables("perm", 2, 2, tables, VPrep::Kickback)
        .expect("fixed family is valid")
}

/// A revealed half of a function table: exactly 2^(n−1) rows with their
/// values.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct AdviceSet {
    revealed: BTreeMap<BitString, BitString>,
}

impl AdviceSet {
    pub fn new(
        arg_bits: usize,
        pairs: Vec<(BitString, BitString)>,
    ) -> Result<Self, SimError> {
        let half = 1usize << (arg_bits - 1);
        if pairs.len() != half {
            return Err(SimError::InvalidArgument(format!(
                "advice reveals {} rows, expected exactly half ({half})",
                pairs.len()
            )));
        }
        let mut revealed = BTreeMap::new();
        for (x, v) in pairs {
            if x.width() != arg_bits {
                return Err(SimError::InvalidArgument(format!(
                    "advice row {x} has wrong width"
                )));
            }
            if revealed.insert(x, v).is_some() {
                return Err(SimError::InvalidArgument(format!(
                    "advice repeats row {x}"
                )));
            }
        }
        Ok(Self { revealed })
    }

    pub fn revealed(&self) -> &BTreeMap<BitString, BitString> {
        &self.revealed
    }

    pub fn contains_row(&self, x: &BitString) -> bool {
        self.revealed.contains_key(x)
    }
}

impl std::fmt::Display for AdviceSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (x, v) in &self.revealed {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{x}={v}")?;
            first = false;
        }
        Ok(())
    }
}

/// Advance knowledge given as a set of candidate labels: the outcome of a
/// balanced partition (or chain of balanced partitions) of the label set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct BitAdvice {
    candidates: BTreeSet<BitString>,
    name: String,
}

impl BitAdvice {
    pub fn new(name: &str, candidates: BTreeSet<BitString>) -> Result<Self, SimError> {
        if candidates.is_empty() {
            return Err(SimError::InvalidArgument("empty candidate set".into()));
        }
        Ok(Self { candidates, name: name.to_string() })
    }

    pub fn candidates(&self) -> &BTreeSet<BitString> {
        &self.candidates
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Checks that the candidate set is a 2^j-fold balanced restriction
    /// of the family's label set.
    pub fn validate_for(&self, family: &FunctionFamily) -> Result<(), SimError> {
        let total = family.len();
        let size = self.candidates.len();
        if size >= total
            || !total.is_multiple_of(size)
            || !(total / size).is_power_of_two()
            || self
                .candidates
                .iter()
                .any(|c| family.table(c).is_none())
        {
            return Err(SimError::InvalidArgument(format!(
                "candidate set {} is not a balanced restriction of {}",
                self.name,
                family.id()
            )));
        }
        Ok(())
    }
}

/// Advance information for a classical strategy.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Advice {
    None,
    Table(AdviceSet),
    Labels(BitAdvice),
}

impl std::fmt::Display for Advice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Advice::None => write!(f, "none"),
            Advice::Table(a) => write!(f, "table[{a}]"),
            Advice::Labels(b) => write!(f, "labels[{}]", b.name()),
        }
    }
}

/// Members whose table matches every revealed row.
pub fn members_matching_rows(
    family: &FunctionFamily,
    rows: &BTreeMap<BitString, BitString>,
) -> Vec<BitString> {
    family
        .labels()
        .into_iter()
        .filter(|k| {
            rows.iter()
                .all(|(x, v)| family.value(k, x.value()) == Some(*v))
        })
        .collect()
}

/// All k whose table matches the advice (all labels for `Advice::None`).
pub fn consistent_members(
    family: &FunctionFamily,
    advice: &Advice,
) -> Result<Vec<BitString>, SimError> {
    match advice {
        Advice::None => Ok(family.labels()),
        Advice::Table(a) => {
            for x in a.revealed().keys() {
                if x.width() != family.arg_bits() {
                    return Err(SimError::InvalidArgument(format!(
                        "advice row {x} does not fit {}-bit arguments",
                        family.arg_bits()
                    )));
                }
            }
            Ok(members_matching_rows(family, a.revealed()))
        }
        Advice::Labels(b) => {
            b.validate_for(family)?;
            Ok(family
                .labels()
                .into_iter()
                .filter(|k| b.candidates().contains(k))
                .collect())
        }
    }
}

/// Whether a half table is *good* advice for member k: it is consistent
/// with k and does not by itself determine the solution token.
pub fn is_good_half_table(
    family: &FunctionFamily,
    k: &BitString,
    advice: &AdviceSet,
) -> Result<bool, SimError> {
    let consistent = members_matching_rows(family, advice.revealed());
    if !consistent.contains(k) {
        return Err(SimError::AdviceInconsistent(k.to_string()));
    }
    let tokens: BTreeSet<&str> = consistent
        .iter()
        .map(|j| family.solution(j).expect("consistent member"))
        .collect();
    Ok(tokens.len() > 1)
}

/// Every good half table of member k.
pub fn good_half_tables(
    family: &FunctionFamily,
    k: &BitString,
) -> Result<Vec<AdviceSet>, SimError> {
    if family.table(k).is_none() {
        return Err(SimError::InvalidFamily(format!("no member {k}")));
    }
    let n = family.arg_bits();
    let rows = 1usize << n;
    let half = rows / 2;
    let mut out = Vec::new();
    for mask in 0..1usize << rows {
        if (mask as u32).count_ones() as usize != half {
            continue;
        }
        let pairs: Vec<(BitString, BitString)> = (0..rows)
            .filter(|x| mask >> x & 1 == 1)
            .map(|x| {
                (
                    BitString::new(n, x).expect("x width"),
                    family.value(k, x).expect("member exists"),
                )
            })
            .collect();
        let advice = AdviceSet::new(n, pairs)?;
        if is_good_half_table(family, k, &advice)? {
            out.push(advice);
        }
    }
    Ok(out)
}

/// All strings s with s·h = 0 (mod 2). There are 2^(n−1) of them.
pub fn orthogonal_strings(h: &BitString) -> Result<BTreeSet<BitString>, SimError> {
    if h.is_zero() {
        return Err(SimError::InvalidArgument(
            "period must be nonzero".into(),
        ));
    }
    Ok(BitString::all(h.width()).filter(|s| s.dot(h) == 0).collect())
}

/// The unique nonzero h orthogonal to all given strings, found by
/// elimination over GF(2). The strings must span an (n−1)-dimensional
/// space.
pub fn gf2_solve(strings: &BTreeSet<BitString>, n: usize) -> Result<BitString, SimError> {
    // Incremental row reduction keeping one row per pivot bit, highest
    // pivot first.
    let mut rows: Vec<usize> = Vec::new();
    for s in strings {
        if s.width() != n {
            return Err(SimError::InvalidArgument(format!(
                "string {s} does not have width {n}"
            )));
        }
        let mut r = s.value();
        for &row in &rows {
            if r & leading_bit(row) != 0 {
                r ^= row;
            }
        }
        if r != 0 {
            rows.push(r);
            rows.sort_by_key(|&row| std::cmp::Reverse(row));
        }
    }
    if rows.len() < n - 1 {
        return Err(SimError::InsufficientStrings);
    }
    if rows.len() >= n {
        return Err(SimError::InvalidArgument(
            "strings span the full space; no nonzero solution".into(),
        ));
    }
    // Rank n−1 leaves exactly one nonzero vector orthogonal to every row.
    let solutions: Vec<usize> = (1..1usize << n)
        .filter(|&h| rows.iter().all(|&r| (r & h).count_ones() & 1 == 0))
        .collect();
    match solutions.as_slice() {
        [h] => BitString::new(n, *h),
        _ => Err(SimError::InsufficientStrings),
    }
}

fn leading_bit(v: usize) -> usize {
    debug_assert!(v != 0);
    1usize << (usize::BITS - 1 - v.leading_zeros()) as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitString {
        BitString::parse(s).unwrap()
    }

    #[test]
    fn grover_tables_are_kronecker_deltas() {
        let fam = grover_family(2).unwrap();
        assert_eq!(fam.len(), 4);
        for k in fam.labels() {
            for x in 0..4 {
                let expect = usize::from(x == k.value());
                assert_eq!(fam.value(&k, x).unwrap().value(), expect);
            }
            assert_eq!(fam.solution(&k).unwrap(), k.to_string());
        }
    }

    #[test]
    fn grover_one_bit_family() {
        let fam = grover_family(1).unwrap();
        assert_eq!(fam.len(), 2);
        assert_eq!(fam.value(&bs("0"), 0).unwrap().value(), 1);
        assert_eq!(fam.value(&bs("0"), 1).unwrap().value(), 0);
        assert_eq!(fam.value(&bs("1"), 0).unwrap().value(), 0);
        assert_eq!(fam.value(&bs("1"), 1).unwrap().value(), 1);
        assert!(grover_family(0).is_err());
        assert!(grover_family(9).is_err());
    }

    #[test]
    fn grover_three_bit_tables_have_one_marked_entry() {
        let fam = grover_family(3).unwrap();
        assert_eq!(fam.len(), 8);
        for k in fam.labels() {
            let ones: usize = (0..8).map(|x| fam.value(&k, x).unwrap().value()).sum();
            assert_eq!(ones, 1);
            assert_eq!(fam.value(&k, k.value()).unwrap().value(), 1);
        }
    }

    #[test]
    fn dj_family_tables_and_solutions() {
        let fam = dj_family();
        assert_eq!(fam.len(), 8);
        let table: Vec<usize> = (0..4)
            .map(|x| fam.value(&bs("0011"), x).unwrap().value())
            .collect();
        assert_eq!(table, [0, 0, 1, 1]);
        assert_eq!(fam.solution(&bs("0000")).unwrap(), SOLUTION_CONSTANT);
        assert_eq!(fam.solution(&bs("1111")).unwrap(), SOLUTION_CONSTANT);
        let balanced = fam
            .labels()
            .into_iter()
            .filter(|k| fam.solution(k).unwrap() == SOLUTION_BALANCED)
            .count();
        assert_eq!(balanced, 6); // C(4,2) weight-2 tables
    }

    #[test]
    fn simon_family_periods_and_two_to_one_structure() {
        let fam = simon_family();
        assert_eq!(fam.len(), 6);
        assert_eq!(fam.solution(&bs("0101")).unwrap(), "10");
        assert_eq!(fam.solution(&bs("0011")).unwrap(), "01");
        for k in fam.labels() {
            let h = BitString::parse(fam.solution(&k).unwrap()).unwrap();
            let mut counts = BTreeMap::new();
            for x in 0..4 {
                let v = fam.value(&k, x).unwrap();
                *counts.entry(v).or_insert(0usize) += 1;
                assert_eq!(v, fam.value(&k, x ^ h.value()).unwrap());
            }
            assert!(counts.values().all(|&c| c == 2));
        }
    }

    #[test]
    fn perm_family_members_are_bijections() {
        let fam = perm_family();
        assert_eq!(fam.len(), 24);
        let table: Vec<String> = (0..4)
            .map(|x| fam.value(&bs("00011110"), x).unwrap().to_string())
            .collect();
        assert_eq!(table, ["00", "01", "11", "10"]);
        for k in fam.labels() {
            let values: BTreeSet<usize> =
                (0..4).map(|x| fam.value(&k, x).unwrap().value()).collect();
            assert_eq!(values.len(), 4);
        }
        // classes split 8/8/8 and two specific members land where expected
        let mut sizes: BTreeMap<String, usize> = BTreeMap::new();
        for k in fam.labels() {
            *sizes.entry(fam.solution(&k).unwrap().to_string()).or_insert(0) += 1;
        }
        assert_eq!(sizes.len(), 3);
        assert!(sizes.values().all(|&c| c == 8));
        assert_eq!(fam.solution(&bs("00011110")).unwrap(), "01");
        assert_eq!(fam.solution(&bs("00110110")).unwrap(), "10");
    }

    #[test]
    fn consistent_members_for_half_tables() {
        let dj = dj_family();
        let advice = Advice::Table(
            AdviceSet::new(2, vec![(bs("00"), bs("0")), (bs("01"), bs("0"))]).unwrap(),
        );
        let members = consistent_members(&dj, &advice).unwrap();
        assert_eq!(members, vec![bs("0000"), bs("0011")]);

        let simon = simon_family();
        let advice = Advice::Table(
            AdviceSet::new(2, vec![(bs("00"), bs("0")), (bs("11"), bs("1"))]).unwrap(),
        );
        let members = consistent_members(&simon, &advice).unwrap();
        assert_eq!(members, vec![bs("0011"), bs("0101")]);
    }

    #[test]
    fn advice_set_rejects_repeated_rows() {
        assert!(AdviceSet::new(2, vec![(bs("00"), bs("0")), (bs("00"), bs("1"))]).is_err());
        assert!(AdviceSet::new(2, vec![(bs("00"), bs("0"))]).is_err());
    }

    #[test]
    fn good_half_table_counts_per_family() {
        let dj = dj_family();
        let good = AdviceSet::new(2, vec![(bs("00"), bs("0")), (bs("01"), bs("0"))]).unwrap();
        assert!(is_good_half_table(&dj, &bs("0011"), &good).unwrap());
        let bad = AdviceSet::new(2, vec![(bs("01"), bs("0")), (bs("10"), bs("1"))]).unwrap();
        assert!(!is_good_half_table(&dj, &bs("0011"), &bad).unwrap());
        assert!(is_good_half_table(&dj, &bs("0000"), &good).unwrap());
        assert!(matches!(
            is_good_half_table(&dj, &bs("1111"), &good),
            Err(SimError::AdviceInconsistent(_))
        ));

        for k in dj.labels() {
            let count = good_half_tables(&dj, &k).unwrap().len();
            match dj.solution(&k).unwrap() {
                SOLUTION_BALANCED => assert_eq!(count, 2),
                _ => assert_eq!(count, 6),
            }
        }

        // search members: the half tables avoiding the marked row
        let grover = grover_family(2).unwrap();
        for k in grover.labels() {
            let halves = good_half_tables(&grover, &k).unwrap();
            assert_eq!(halves.len(), 3);
            for advice in halves {
                assert!(!advice.contains_row(&k));
                assert!(advice.revealed().values().all(|v| v.is_zero()));
            }
        }

        let simon = simon_family();
        for k in simon.labels() {
            let halves = good_half_tables(&simon, &k).unwrap();
            assert_eq!(halves.len(), 4);
            for advice in halves {
                let values: Vec<_> = advice.revealed().values().collect();
                assert_ne!(values[0], values[1]);
            }
        }

        let perm = perm_family();
        for k in perm.labels() {
            assert_eq!(good_half_tables(&perm, &k).unwrap().len(), 4);
        }
    }

    #[test]
    fn orthogonal_strings_enumeration() {
        let set = orthogonal_strings(&bs("01")).unwrap();
        assert_eq!(set, [bs("00"), bs("10")].into_iter().collect());
        for width in 1..=4 {
            for h in BitString::all(width).filter(|h| !h.is_zero()) {
                let set = orthogonal_strings(&h).unwrap();
                assert_eq!(set.len(), 1 << (width - 1));
                assert!(set.contains(&BitString::zero(width)));
                // brute force cross-check
                for s in BitString::all(width) {
                    assert_eq!(set.contains(&s), s.dot(&h) == 0);
                }
            }
        }
        assert!(orthogonal_strings(&BitString::zero(2)).is_err());
    }

    #[test]
    fn gf2_solve_small_cases() {
        let h = gf2_solve(&[bs("10")].into_iter().collect(), 2).unwrap();
        assert_eq!(h, bs("01"));
        let h = gf2_solve(&[bs("110"), bs("011")].into_iter().collect(), 3).unwrap();
        assert_eq!(h, bs("111"));
        assert!(matches!(
            gf2_solve(&[bs("00")].into_iter().collect(), 2),
            Err(SimError::InsufficientStrings)
        ));
    }

    #[test]
    fn table_round_trip() {
        for fam in [grover_family(2).unwrap(), dj_family(), simon_family(), perm_family()]
        {
            let text = fam.to_table_string();
            let loaded =
                FunctionFamily::from_table_str(fam.id(), &text, fam.v_prep()).unwrap();
            assert_eq!(loaded.len(), fam.len());
            for k in fam.labels() {
                assert_eq!(loaded.table(&k).unwrap(), fam.table(&k).unwrap());
            }
        }
    }
}
