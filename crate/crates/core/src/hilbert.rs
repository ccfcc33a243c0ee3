//! Complex-amplitude states over the three registers K, X, V.
//!
//! The choice register K is a labeled finite set rather than a qubit
//! space: only the valid function labels are ever populated. A state is
//! stored as one amplitude vector over X⊗V per K label (a "block").
//! Every unitary of interest acts inside the blocks, so the block map is
//! preserved by construction. Amplitude vectors are indexed by (x, v) in
//! row-major order with x major; labels are kept sorted.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::bits::BitString;
use crate::{SimError, TOL_STATE};

/// One of the three computer registers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Register {
    K,
    X,
    V,
}

/// Shape of the joint space: the K labels plus the qubit counts of X and V.
#[derive(Clone, Debug, PartialEq)]
pub struct RegisterLayout {
    k_labels: Vec<BitString>,
    x_bits: usize,
    v_bits: usize,
}

impl RegisterLayout {
    pub fn new(
        mut k_labels: Vec<BitString>,
        x_bits: usize,
        v_bits: usize,
    ) -> Result<Arc<Self>, SimError> {
        if k_labels.is_empty() {
            return Err(SimError::InvalidArgument("empty label set".into()));
        }
        if x_bits == 0 || v_bits == 0 {
            return Err(SimError::InvalidArgument(
                "x_bits and v_bits must be at least 1".into(),
            ));
        }
        let width = k_labels[0].width();
        if k_labels.iter().any(|l| l.width() != width) {
            return Err(SimError::InvalidArgument(
                "labels must share one width".into(),
            ));
        }
        k_labels.sort();
        if k_labels.windows(2).any(|w| w[0] == w[1]) {
            return Err(SimError::InvalidArgument("duplicate labels".into()));
        }
        Ok(Arc::new(Self { k_labels, x_bits, v_bits }))
    }

    pub fn k_labels(&self) -> &[BitString] {
        &self.k_labels
    }

    pub fn label_index(&self, label: &BitString) -> Option<usize> {
        self.k_labels.binary_search(label).ok()
    }

    pub fn x_bits(&self) -> usize {
        self.x_bits
    }

    pub fn v_bits(&self) -> usize {
        self.v_bits
    }

    pub fn x_dim(&self) -> usize {
        1 << self.x_bits
    }

    pub fn v_dim(&self) -> usize {
        1 << self.v_bits
    }

    /// Length of one block vector: 2^(x_bits + v_bits).
    pub fn block_len(&self) -> usize {
        1 << (self.x_bits + self.v_bits)
    }

    pub fn amp_index(&self, x: usize, v: usize) -> usize {
        debug_assert!(x < self.x_dim() && v < self.v_dim());
        (x << self.v_bits) | v
    }
}

/// Pure joint state Σ_k c_k |k⟩ ⊗ ψ_k(X, V), stored per k-block.
///
/// Absent blocks are identically zero. The total squared norm over all
/// blocks is 1 for any state produced by the public constructors.
#[derive(Clone, Debug)]
pub struct BlockState {
    layout: Arc<RegisterLayout>,
    blocks: BTreeMap<usize, Vec<Complex64>>,
}

impl BlockState {
    /// Builds a state from explicit blocks without rescaling. The blocks
    /// must already be normalized as a whole.
    pub fn from_blocks(
        layout: Arc<RegisterLayout>,
        blocks: BTreeMap<usize, Vec<Complex64>>,
    ) -> Result<Self, SimError> {
        let len = layout.block_len();
        if blocks.is_empty() {
            return Err(SimError::DegenerateState);
        }
        for (&idx, amps) in &blocks {
            if idx >= layout.k_labels().len() || amps.len() != len {
                return Err(SimError::LayoutMismatch);
            }
        }
        let state = Self { layout, blocks };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > TOL_STATE {
            return Err(SimError::InvalidArgument(format!(
                "state norm² = {norm}, expected 1"
            )));
        }
        Ok(state)
    }

    /// Builds a state from an amplitude assignment and normalizes it.
    pub fn from_amplitudes<F>(layout: Arc<RegisterLayout>, f: F) -> Result<Self, SimError>
    where
        F: Fn(&BitString, usize, usize) -> Complex64,
    {
        let mut blocks = BTreeMap::new();
        let labels: Vec<BitString> = layout.k_labels().to_vec();
        for (ki, label) in labels.iter().enumerate() {
            let mut amps = vec![Complex64::ZERO; layout.block_len()];
            let mut nonzero = false;
            for x in 0..layout.x_dim() {
                for v in 0..layout.v_dim() {
                    let a = f(label, x, v);
                    if a != Complex64::ZERO {
                        nonzero = true;
                    }
                    amps[layout.amp_index(x, v)] = a;
                }
            }
            if nonzero {
                blocks.insert(ki, amps);
            }
        }
        let mut state = Self { layout, blocks };
        state.normalize()?;
        Ok(state)
    }

    pub fn layout(&self) -> &Arc<RegisterLayout> {
        &self.layout
    }

    pub fn blocks(&self) -> impl Iterator<Item = (usize, &[Complex64])> {
        self.blocks.iter().map(|(&k, v)| (k, v.as_slice()))
    }

    pub fn block(&self, label: &BitString) -> Option<&[Complex64]> {
        let idx = self.layout.label_index(label)?;
        self.blocks.get(&idx).map(|v| v.as_slice())
    }

    pub fn amplitude(&self, label: &BitString, x: usize, v: usize) -> Complex64 {
        match self.block(label) {
            Some(amps) => amps[self.layout.amp_index(x, v)],
            None => Complex64::ZERO,
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.blocks
            .values()
            .flat_map(|amps| amps.iter())
            .map(|a| a.norm_sqr())
            .sum()
    }

    fn normalize(&mut self) -> Result<(), SimError> {
        let norm = self.norm_sqr().sqrt();
        if norm < 1e-150 {
            return Err(SimError::DegenerateState);
        }
        for amps in self.blocks.values_mut() {
            for a in amps.iter_mut() {
                *a /= norm;
            }
        }
        Ok(())
    }

    /// Squared-norm weight of one k-block.
    pub fn block_weight(&self, label: &BitString) -> f64 {
        self.block(label)
            .map(|amps| amps.iter().map(|a| a.norm_sqr()).sum())
            .unwrap_or(0.0)
    }

    /// One line per nonzero amplitude:
    /// `k-label<TAB>x-bits<TAB>v-bits<TAB>re<TAB>im`, sorted by (k, x, v),
    /// 12 significant digits.
    pub fn amplitude_dump(&self) -> String {
        let mut out = String::new();
        for (&ki, amps) in &self.blocks {
            let label = self.layout.k_labels()[ki];
            for x in 0..self.layout.x_dim() {
                for v in 0..self.layout.v_dim() {
                    let a = amps[self.layout.amp_index(x, v)];
                    if a.norm() <= 1e-12 {
                        continue;
                    }
                    let xs = BitString::new(self.layout.x_bits(), x).expect("x width");
                    let vs = BitString::new(self.layout.v_bits(), v).expect("v width");
                    writeln!(out, "{label}\t{xs}\t{vs}\t{:.11e}\t{:.11e}", a.re, a.im)
                        .expect("string write");
                }
            }
        }
        out
    }
}

/// Probability-weighted set of block states sharing one layout. Uniform
/// random phases on K kill the off-diagonal K terms of the averaged
/// density operator, so the average is represented directly as this
/// k-diagonal mixture.
#[derive(Clone, Debug)]
pub struct DensityEnsemble {
    members: Vec<(f64, BlockState)>,
}

impl DensityEnsemble {
    pub fn new(members: Vec<(f64, BlockState)>) -> Result<Self, SimError> {
        if members.is_empty() {
            return Err(SimError::DegenerateState);
        }
        let layout = members[0].1.layout().clone();
        let mut total = 0.0;
        for (p, state) in &members {
            if *p <= 0.0 {
                return Err(SimError::InvalidArgument(
                    "ensemble probabilities must be positive".into(),
                ));
            }
            if **state.layout() != *layout {
                return Err(SimError::LayoutMismatch);
            }
            total += p;
        }
        if (total - 1.0).abs() > TOL_STATE {
            return Err(SimError::InvalidArgument(format!(
                "ensemble probabilities sum to {total}, expected 1"
            )));
        }
        Ok(Self { members })
    }

    pub fn pure(state: BlockState) -> Self {
        Self { members: vec![(1.0, state)] }
    }

    pub fn members(&self) -> &[(f64, BlockState)] {
        &self.members
    }

    pub fn layout(&self) -> &Arc<RegisterLayout> {
        self.members[0].1.layout()
    }

    /// Applies a pure-state map to every member.
    pub fn map<F>(&self, f: F) -> Result<Self, SimError>
    where
        F: Fn(&BlockState) -> Result<BlockState, SimError>,
    {
        let mut members = Vec::with_capacity(self.members.len());
        for (p, state) in &self.members {
            members.push((*p, f(state)?));
        }
        Self::new(members)
    }

    /// Projects every member, dropping zero-probability branches and
    /// reweighting the survivors. Returns the overall Born probability
    /// and the post-projection ensemble, or `None` at probability zero.
    pub fn project(&self, p: &Projector) -> Result<(f64, Option<Self>), SimError> {
        let mut members = Vec::new();
        let mut total = 0.0;
        for (w, state) in &self.members {
            let (q, post) = project(state, p)?;
            if let Some(post) = post {
                members.push((w * q, post));
                total += w * q;
            }
        }
        if total <= 1e-20 {
            return Ok((0.0, None));
        }
        for (w, _) in members.iter_mut() {
            *w /= total;
        }
        Ok((total, Some(Self::new(members)?)))
    }
}

/// Projection onto a subset of the K or X basis; V is always retained.
#[derive(Clone, Debug)]
pub struct Projector {
    register: Register,
    kept: Vec<BitString>,
}

impl Projector {
    pub fn new(register: Register, mut kept: Vec<BitString>) -> Result<Self, SimError> {
        if register == Register::V {
            return Err(SimError::InvalidArgument(
                "projectors act on K or X".into(),
            ));
        }
        if kept.is_empty() {
            return Err(SimError::InvalidArgument(
                "projector keeps an empty set".into(),
            ));
        }
        kept.sort();
        kept.dedup();
        Ok(Self { register, kept })
    }

    pub fn register(&self) -> Register {
        self.register
    }

    pub fn kept(&self) -> &[BitString] {
        &self.kept
    }

    fn keeps_label(&self, label: &BitString) -> bool {
        self.kept.binary_search(label).is_ok()
    }
}

/// Returns the normalized product state Σ_k c_k |k⟩ ⊗ x_amps ⊗ v_amps.
pub fn tensor_init(
    layout: &Arc<RegisterLayout>,
    k_amps: &BTreeMap<BitString, Complex64>,
    x_amps: &[Complex64],
    v_amps: &[Complex64],
) -> Result<BlockState, SimError> {
    if x_amps.len() != layout.x_dim() || v_amps.len() != layout.v_dim() {
        return Err(SimError::LayoutMismatch);
    }
    for label in k_amps.keys() {
        if layout.label_index(label).is_none() {
            return Err(SimError::LayoutMismatch);
        }
    }
    BlockState::from_amplitudes(layout.clone(), |label, x, v| {
        k_amps.get(label).copied().unwrap_or(Complex64::ZERO) * x_amps[x] * v_amps[v]
    })
}

/// Basis map |k, x, v⟩ → |k, x, v ⊕ f_k(x)⟩ applied amplitude-wise.
pub fn apply_oracle(
    state: &BlockState,
    family: &crate::families::FunctionFamily,
) -> Result<BlockState, SimError> {
    let layout = state.layout();
    if family.arg_bits() != layout.x_bits() || family.value_bits() != layout.v_bits() {
        return Err(SimError::FamilyLayoutMismatch(format!(
            "family is {}→{} bits, layout has x={}, v={}",
            family.arg_bits(),
            family.value_bits(),
            layout.x_bits(),
            layout.v_bits()
        )));
    }
    let v_dim = layout.v_dim();
    let mut blocks = BTreeMap::new();
    for (ki, amps) in state.blocks() {
        let label = layout.k_labels()[ki];
        let table = family.table(&label).ok_or_else(|| {
            SimError::FamilyLayoutMismatch(format!("family has no member {label}"))
        })?;
        let mut out = vec![Complex64::ZERO; amps.len()];
        for x in 0..layout.x_dim() {
            let fx = table[x].value();
            for v in 0..v_dim {
                out[layout.amp_index(x, v ^ fx)] = amps[layout.amp_index(x, v)];
            }
        }
        blocks.insert(ki, out);
    }
    BlockState::from_blocks(layout.clone(), blocks)
}

fn unitarity_deviation(u: &DMatrix<Complex64>) -> f64 {
    let prod = u.adjoint() * u;
    let mut dev: f64 = 0.0;
    for i in 0..prod.nrows() {
        for j in 0..prod.ncols() {
            let expected = if i == j { Complex64::ONE } else { Complex64::ZERO };
            dev = dev.max((prod[(i, j)] - expected).norm());
        }
    }
    dev
}

/// Applies a unitary to the X or V register inside every block.
pub fn apply_local_unitary(
    state: &BlockState,
    register: Register,
    u: &DMatrix<Complex64>,
) -> Result<BlockState, SimError> {
    let layout = state.layout();
    let dim = match register {
        Register::X => layout.x_dim(),
        Register::V => layout.v_dim(),
        Register::K => {
            return Err(SimError::InvalidArgument(
                "local unitaries act on X or V".into(),
            ))
        }
    };
    if u.nrows() != dim || u.ncols() != dim {
        return Err(SimError::LayoutMismatch);
    }
    let dev = unitarity_deviation(u);
    if dev > 1e-10 {
        return Err(SimError::NonUnitary(dev));
    }
    let v_dim = layout.v_dim();
    let x_dim = layout.x_dim();
    let mut blocks = BTreeMap::new();
    for (ki, amps) in state.blocks() {
        let mut out = vec![Complex64::ZERO; amps.len()];
        match register {
            Register::X => {
                for v in 0..v_dim {
                    for xo in 0..x_dim {
                        let mut acc = Complex64::ZERO;
                        for xi in 0..x_dim {
                            acc += u[(xo, xi)] * amps[layout.amp_index(xi, v)];
                        }
                        out[layout.amp_index(xo, v)] = acc;
                    }
                }
            }
            Register::V => {
                for x in 0..x_dim {
                    for vo in 0..v_dim {
                        let mut acc = Complex64::ZERO;
                        for vi in 0..v_dim {
                            acc += u[(vo, vi)] * amps[layout.amp_index(x, vi)];
                        }
                        out[layout.amp_index(x, vo)] = acc;
                    }
                }
            }
            Register::K => unreachable!(),
        }
        blocks.insert(ki, out);
    }
    BlockState::from_blocks(layout.clone(), blocks)
}

/// Born probability and renormalized post-projection state. A zero
/// probability is a valid outcome and returns `None` in place of a state.
pub fn project(
    state: &BlockState,
    p: &Projector,
) -> Result<(f64, Option<BlockState>), SimError> {
    let layout = state.layout();
    let mut blocks: BTreeMap<usize, Vec<Complex64>> = BTreeMap::new();
    match p.register() {
        Register::K => {
            for (ki, amps) in state.blocks() {
                let label = layout.k_labels()[ki];
                if p.keeps_label(&label) {
                    blocks.insert(ki, amps.to_vec());
                }
            }
        }
        Register::X => {
            let width = layout.x_bits();
            for kept in p.kept() {
                if kept.width() != width {
                    return Err(SimError::LayoutMismatch);
                }
            }
            for (ki, amps) in state.blocks() {
                let mut out = vec![Complex64::ZERO; amps.len()];
                let mut nonzero = false;
                for x in 0..layout.x_dim() {
                    let xs = BitString::new(width, x).expect("x width");
                    if !p.keeps_label(&xs) {
                        continue;
                    }
                    for v in 0..layout.v_dim() {
                        let a = amps[layout.amp_index(x, v)];
                        if a != Complex64::ZERO {
                            nonzero = true;
                        }
                        out[layout.amp_index(x, v)] = a;
                    }
                }
                if nonzero {
                    blocks.insert(ki, out);
                }
            }
        }
        Register::V => unreachable!("projector constructor rejects V"),
    }
    let prob: f64 = blocks
        .values()
        .flat_map(|amps| amps.iter())
        .map(|a| a.norm_sqr())
        .sum();
    if prob <= 1e-20 {
        return Ok((0.0, None));
    }
    let scale = prob.sqrt();
    for amps in blocks.values_mut() {
        for a in amps.iter_mut() {
            *a /= scale;
        }
    }
    Ok((prob, Some(BlockState::from_blocks(layout.clone(), blocks)?)))
}

/// Density matrix over the K labels of a layout.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    labels: Vec<BitString>,
    data: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn labels(&self) -> &[BitString] {
        &self.labels
    }

    pub fn data(&self) -> &DMatrix<Complex64> {
        &self.data
    }

    pub fn entry(&self, a: &BitString, b: &BitString) -> Complex64 {
        let i = self.labels.binary_search(a).expect("label in matrix");
        let j = self.labels.binary_search(b).expect("label in matrix");
        self.data[(i, j)]
    }

    pub fn trace(&self) -> f64 {
        (0..self.labels.len()).map(|i| self.data[(i, i)].re).sum()
    }

    /// Eigenvalues, ascending. Hermiticity is relied on; tiny negative
    /// values from rounding are clamped to zero.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let eig = self.data.clone().symmetric_eigen();
        let mut vals: Vec<f64> = eig.eigenvalues.iter().map(|v| v.max(0.0)).collect();
        vals.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
        vals
    }
}

/// Partial trace over X⊗V of the ensemble average.
pub fn reduced_density_k(ensemble: &DensityEnsemble) -> DensityMatrix {
    let layout = ensemble.layout().clone();
    let n = layout.k_labels().len();
    let mut data = DMatrix::<Complex64>::zeros(n, n);
    for (p, state) in ensemble.members() {
        let blocks: Vec<(usize, &[Complex64])> = state.blocks().collect();
        for &(i, amps_i) in &blocks {
            for &(j, amps_j) in &blocks {
                let mut acc = Complex64::ZERO;
                for t in 0..amps_i.len() {
                    acc += amps_i[t] * amps_j[t].conj();
                }
                data[(i, j)] += Complex64::new(*p, 0.0) * acc;
            }
        }
    }
    DensityMatrix { labels: layout.k_labels().to_vec(), data }
}

/// Von Neumann entropy in bits: −Σ λ log₂ λ with 0·log 0 = 0.
pub fn entropy_bits(rho: &DensityMatrix) -> f64 {
    let mut s = 0.0;
    for lambda in rho.eigenvalues() {
        if lambda > 1e-15 {
            s -= lambda * lambda.log2();
        }
    }
    s.max(0.0)
}

/// min over a global phase θ of ‖a − e^{iθ}b‖. The distance is
/// phase-insensitive on the whole state but phase-sensitive between
/// blocks.
pub fn state_distance(a: &BlockState, b: &BlockState) -> Result<f64, SimError> {
    if **a.layout() != **b.layout() {
        return Err(SimError::LayoutMismatch);
    }
    let all_blocks: std::collections::BTreeSet<usize> = a
        .blocks()
        .map(|(k, _)| k)
        .chain(b.blocks().map(|(k, _)| k))
        .collect();
    let layout = a.layout();
    let mut overlap = Complex64::ZERO;
    for &ki in &all_blocks {
        let label = layout.k_labels()[ki];
        if let (Some(ba), Some(bb)) = (a.block(&label), b.block(&label)) {
            for t in 0..ba.len() {
                overlap += ba[t] * bb[t].conj();
            }
        }
    }
    // Align b's phase with a, then subtract component-wise; the direct
    // difference avoids the cancellation that 2 − 2|⟨a,b⟩| suffers near
    // zero distance.
    let phase = if overlap.norm() > 1e-300 {
        overlap / overlap.norm()
    } else {
        Complex64::ONE
    };
    let mut dist_sqr = 0.0;
    for &ki in &all_blocks {
        let label = layout.k_labels()[ki];
        match (a.block(&label), b.block(&label)) {
            (Some(ba), Some(bb)) => {
                for t in 0..ba.len() {
                    dist_sqr += (ba[t] - phase * bb[t]).norm_sqr();
                }
            }
            (Some(ba), None) => dist_sqr += ba.iter().map(|x| x.norm_sqr()).sum::<f64>(),
            (None, Some(bb)) => dist_sqr += bb.iter().map(|x| x.norm_sqr()).sum::<f64>(),
            (None, None) => {}
        }
    }
    Ok(dist_sqr.sqrt())
}

/// True iff [`state_distance`] is within `tol`.
pub fn states_equal(a: &BlockState, b: &BlockState, tol: f64) -> Result<bool, SimError> {
    Ok(state_distance(a, b)? <= tol)
}
