//! Moment-angle complex cohomology: the Koszul complex
//! `(Λ(U) ⊗ Q[K], d)` with `du_j = v_j`, its finite reduced model
//! `Λ(U) ⊗ Q[K] / (u_j v_j, v_j^2)`, and the resulting bigraded Betti
//! numbers of `H*(Z_K; Q) = Tor_{S(V)}(Q[K], Q)`.
//!
//! Both differentials preserve the Z^m multidegree that counts `u` and
//! `v` exponents together, so every computation splits into independent
//! multidegree blocks; the reduced model is the square-free part and is
//! finite, while the full model serves as a truncated oracle.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::complex::SimplicialComplex;
use crate::exactlin::rat;
use crate::facering::Monomial;
use crate::graded::{ChainComplexWindow, Direction};
use crate::par;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum KoszulError {
    #[error("exterior part {0:?} is not a subset of the vertex set")]
    SigmaOutOfRange(Vec<usize>),
    #[error("polynomial part has support {0:?}, which is not a face")]
    SupportNotFace(Vec<usize>),
    #[error("exterior part {sigma:?} meets the face {tau:?}")]
    SigmaMeetsTau { sigma: Vec<usize>, tau: Vec<usize> },
    #[error("face {0:?} does not belong to the complex")]
    NotAFace(Vec<usize>),
    #[error("full-model truncation degree must be at least 2, got {0}")]
    MaxDegreeTooSmall(usize),
}

/// Basis element `u_σ ⊗ v^a` of the Koszul complex, with `support(a)` a
/// face of `K`. Its cohomological degree is `|σ| + 2|a|`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct KoszulBasisElement {
    /// Sorted 1-based vertex labels of the exterior part.
    pub sigma: Vec<usize>,
    /// Exponent vector of the polynomial part.
    pub monomial: Monomial,
}

impl KoszulBasisElement {
    pub fn degree(&self) -> usize {
        self.sigma.len() + 2 * self.monomial.total() as usize
    }

    /// Bidegree `(-i, 2j)` in the Tor convention: `i = |σ|` and
    /// `2j = 2(|σ| + |a|)`.
    pub fn bidegree(&self) -> (i64, usize) {
        let i = self.sigma.len();
        (-(i as i64), 2 * (i + self.monomial.total() as usize))
    }
}

/// Basis element `u_σ ⊗ v_τ` of the reduced model: `τ ∈ K` and
/// `σ ∩ τ = ∅`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ReducedBasisElement {
    pub sigma: Vec<usize>,
    pub tau: Vec<usize>,
}

impl ReducedBasisElement {
    pub fn degree(&self) -> usize {
        self.sigma.len() + 2 * self.tau.len()
    }
}

fn labels_to_mask(labels: &[usize], m: usize) -> Option<u64> {
    let mut mask = 0u64;
    for &v in labels {
        if v == 0 || v > m {
            return None;
        }
        mask |= 1 << (v - 1);
    }
    Some(mask)
}

fn mask_to_labels(mask: u64) -> Vec<usize> {
    (0..64)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| i + 1)
        .collect()
}

/// Position sign `(-1)^{#elements of σ smaller than j}`.
fn position_sign(mask_sigma: u64, j: usize) -> i64 {
    let below = mask_sigma & ((1u64 << (j - 1)) - 1);
    if below.count_ones().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// The Koszul differential `d(u_σ ⊗ v^a) = Σ_{j∈σ} ± u_{σ∖j} ⊗ v_j v^a`,
/// dropping terms whose polynomial support leaves `K`. It raises the
/// cohomological degree by 1.
pub fn koszul_differential(
    k: &SimplicialComplex,
    e: &KoszulBasisElement,
) -> Result<Vec<(KoszulBasisElement, i64)>, KoszulError> {
    let m = k.vertex_count();
    let sigma_mask =
        labels_to_mask(&e.sigma, m).ok_or_else(|| KoszulError::SigmaOutOfRange(e.sigma.clone()))?;
    if e.monomial.len() != m || !k.is_face_mask(e.monomial.support_mask()) {
        return Err(KoszulError::SupportNotFace(e.monomial.support()));
    }
    let mut out = Vec::new();
    for &j in &e.sigma {
        let bigger = e.monomial.times_vertex(j);
        if !k.is_face_mask(bigger.support_mask()) {
            continue;
        }
        let rest: Vec<usize> = e.sigma.iter().copied().filter(|&x| x != j).collect();
        out.push((
            KoszulBasisElement {
                sigma: rest,
                monomial: bigger,
            },
            position_sign(sigma_mask, j),
        ));
    }
    Ok(out)
}

/// The reduced-model differential: the same formula with `u_j v_j` and
/// `v_j^2` set to zero, so `d(u_σ ⊗ v_τ) = Σ ± u_{σ∖j} ⊗ v_{τ∪j}` over
/// `j ∈ σ` with `τ ∪ j ∈ K`.
pub fn reduced_differential(
    k: &SimplicialComplex,
    e: &ReducedBasisElement,
) -> Result<Vec<(ReducedBasisElement, i64)>, KoszulError> {
    let m = k.vertex_count();
    let sigma_mask =
        labels_to_mask(&e.sigma, m).ok_or_else(|| KoszulError::SigmaOutOfRange(e.sigma.clone()))?;
    let tau_mask = labels_to_mask(&e.tau, m).ok_or_else(|| KoszulError::NotAFace(e.tau.clone()))?;
    if !k.is_face_mask(tau_mask) {
        return Err(KoszulError::NotAFace(e.tau.clone()));
    }
    if sigma_mask & tau_mask != 0 {
        return Err(KoszulError::SigmaMeetsTau {
            sigma: e.sigma.clone(),
            tau: e.tau.clone(),
        });
    }
    let mut out = Vec::new();
    for &j in &e.sigma {
        let new_tau = tau_mask | 1 << (j - 1);
        if !k.is_face_mask(new_tau) {
            continue;
        }
        let rest: Vec<usize> = e.sigma.iter().copied().filter(|&x| x != j).collect();
        out.push((
            ReducedBasisElement {
                sigma: rest,
                tau: mask_to_labels(new_tau),
            },
            position_sign(sigma_mask, j),
        ));
    }
    Ok(out)
}

/// Betti numbers of `Z_K` over `Q`, with the bigraded refinement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZkBetti {
    /// Total cohomological degree -> dimension, nonzero entries only.
    pub total: BTreeMap<usize, usize>,
    /// `(i, 2j)` -> dimension of `Tor^{-i, 2j}`, where `i` counts
    /// exterior generators and `2j` is the internal degree.
    pub bigraded: BTreeMap<(usize, usize), usize>,
}

impl ZkBetti {
    /// Dimension in a single total degree.
    pub fn dim(&self, degree: usize) -> usize {
        self.total.get(&degree).copied().unwrap_or(0)
    }

    /// Top nonzero degree.
    pub fn top_degree(&self) -> usize {
        self.total.keys().next_back().copied().unwrap_or(0)
    }
}

/// The window of one square-free block of the reduced model, padded so
/// every populated degree is interior. Labels are the `τ`-masks.
fn reduced_block_window(k: &SimplicialComplex, eps: u64) -> ChainComplexWindow<u64> {
    let size = eps.count_ones() as usize;
    // degree |eps| + |τ|, τ ranging over faces inside eps
    let mut per_tau_size: Vec<Vec<u64>> = vec![Vec::new(); size + 1];
    let mut sub = eps;
    loop {
        if k.is_face_mask(sub) {
            per_tau_size[sub.count_ones() as usize].push(sub);
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & eps;
    }
    for layer in per_tau_size.iter_mut() {
        layer.sort_unstable();
    }
    // index maps per τ-cardinality
    let index: Vec<BTreeMap<u64, usize>> = per_tau_size
        .iter()
        .map(|layer| layer.iter().enumerate().map(|(i, &t)| (t, i)).collect())
        .collect();
    let min_degree = size as i64 - 1;
    let mut basis: Vec<Vec<u64>> = vec![Vec::new()];
    basis.extend(per_tau_size.iter().cloned());
    basis.push(Vec::new());
    let per_tau = per_tau_size;
    ChainComplexWindow::build(Direction::Cohomological, min_degree, basis, |deg, idx| {
        let t = (deg - size as i64) as usize; // |τ| at this layer
        let tau_mask = per_tau[t][idx];
        let sigma_mask = eps & !tau_mask;
        let e = ReducedBasisElement {
            sigma: mask_to_labels(sigma_mask),
            tau: mask_to_labels(tau_mask),
        };
        reduced_differential(k, &e)
            .expect("block elements are valid")
            .into_iter()
            .map(|(el, coeff)| {
                let new_tau = labels_to_mask(&el.tau, k.vertex_count()).unwrap();
                (index[t + 1][&new_tau], rat(coeff))
            })
            .collect()
    })
}

/// Betti numbers of `H*(Z_K; Q)` from the complete finite reduced model,
/// in every degree `0 ..= m + dim K + 1`.
pub fn zk_betti(k: &SimplicialComplex) -> ZkBetti {
    let blocks: Vec<u64> = all_submasks(k.vertex_mask());
    let results = par::map_collect(blocks, |eps| {
        let w = reduced_block_window(k, eps);
        let dims = w
            .homology_dims()
            .expect("padded block window has interior degrees");
        let size = eps.count_ones() as usize;
        let mut out = Vec::new();
        for (deg, dim) in dims {
            if dim > 0 {
                let total = deg as usize;
                let tau = total - size;
                let sigma = size - tau;
                out.push((total, (sigma, 2 * size), dim));
            }
        }
        out
    });
    let mut total = BTreeMap::new();
    let mut bigraded = BTreeMap::new();
    for block in results {
        for (deg, bi, dim) in block {
            *total.entry(deg).or_insert(0) += dim;
            *bigraded.entry(bi).or_insert(0) += dim;
        }
    }
    ZkBetti { total, bigraded }
}

fn all_submasks(mask: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut sub = mask;
    loop {
        out.push(sub);
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & mask;
    }
    out.sort_unstable();
    out
}

/// The window of one multidegree block of the full Koszul complex.
/// Labels are the `σ`-masks; the polynomial part is `e - 1_σ`.
fn full_block_window(k: &SimplicialComplex, e: &[u32]) -> ChainComplexWindow<u64> {
    let m = k.vertex_count();
    let total: u32 = e.iter().sum();
    let supp_mask: u64 = e
        .iter()
        .enumerate()
        .filter(|(_, &x)| x > 0)
        .fold(0u64, |acc, (i, _)| acc | 1 << i);
    let smax = supp_mask.count_ones() as usize;
    // collect valid σ per cardinality: supp(e - 1_σ) must be a face
    let mut per_sigma_size: Vec<Vec<u64>> = vec![Vec::new(); smax + 1];
    for sigma in all_submasks(supp_mask) {
        let a_supp = (0..m)
            .filter(|&i| e[i] > 1 || (e[i] == 1 && sigma >> i & 1 == 0))
            .fold(0u64, |acc, i| acc | 1 << i);
        if k.is_face_mask(a_supp) {
            per_sigma_size[sigma.count_ones() as usize].push(sigma);
        }
    }
    for layer in per_sigma_size.iter_mut() {
        layer.sort_unstable();
    }
    let index: Vec<BTreeMap<u64, usize>> = per_sigma_size
        .iter()
        .map(|layer| layer.iter().enumerate().map(|(i, &s)| (s, i)).collect())
        .collect();
    // cohomological degree 2|e| - |σ|; layer order must ascend in degree
    let min_degree = 2 * total as i64 - smax as i64 - 1;
    let mut basis: Vec<Vec<u64>> = vec![Vec::new()];
    basis.extend(per_sigma_size.iter().rev().cloned());
    basis.push(Vec::new());
    let per_sigma = per_sigma_size;
    let e = e.to_vec();
    ChainComplexWindow::build(
        Direction::Cohomological,
        min_degree,
        basis,
        move |deg, idx| {
            let s = (2 * total as i64 - deg) as usize; // |σ| at this layer
            let sigma_mask = per_sigma[s][idx];
            let monomial = Monomial::new(
                (0..m)
                    .map(|i| e[i] - u32::from(sigma_mask >> i & 1 == 1))
                    .collect(),
            );
            let el = KoszulBasisElement {
                sigma: mask_to_labels(sigma_mask),
                monomial,
            };
            koszul_differential(k, &el)
                .expect("block elements are valid")
                .into_iter()
                .map(|(el2, coeff)| {
                    let new_sigma = labels_to_mask(&el2.sigma, m).unwrap();
                    (index[s - 1][&new_sigma], rat(coeff))
                })
                .collect()
        },
    )
}

/// Betti numbers of `Z_K` from the truncated full Koszul complex,
/// block by multidegree block over all multidegrees of weight at most
/// `max_degree`. Serves as an independent oracle for [`zk_betti`].
pub fn zk_betti_via_full_model(
    k: &SimplicialComplex,
    max_degree: usize,
) -> Result<BTreeMap<usize, usize>, KoszulError> {
    if max_degree < 2 {
        return Err(KoszulError::MaxDegreeTooSmall(max_degree));
    }
    let m = k.vertex_count();
    let mut multidegrees: Vec<Vec<u32>> = Vec::new();
    enumerate_multidegrees(m, max_degree as u32, &mut multidegrees);
    let results = par::map_collect(multidegrees, |e| {
        let w = full_block_window(k, &e);
        let dims = w
            .homology_dims()
            .expect("padded block window has interior degrees");
        dims.into_iter()
            .filter(|&(deg, dim)| dim > 0 && deg >= 0 && (deg as usize) <= max_degree)
            .map(|(deg, dim)| (deg as usize, dim))
            .collect::<Vec<_>>()
    });
    let mut out = BTreeMap::new();
    for block in results {
        for (deg, dim) in block {
            *out.entry(deg).or_insert(0) += dim;
        }
    }
    Ok(out)
}

/// All vectors in `N^m` of weight at most `cap`, in lexicographic order.
fn enumerate_multidegrees(m: usize, cap: u32, out: &mut Vec<Vec<u32>>) {
    fn go(m: usize, left: u32, buf: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if buf.len() == m {
            out.push(buf.clone());
            return;
        }
        for x in 0..=left {
            buf.push(x);
            go(m, left - x, buf, out);
            buf.pop();
        }
    }
    go(m, cap, &mut Vec::with_capacity(m), out);
}

/// Negative-control hook for the verification suite: flips one entry of
/// a reduced-model differential sitting between two nonzero composites
/// and reports whether `d∘d` still vanishes (it must not). Returns
/// `None` when the complex has no pair of consecutive nonzero
/// differentials to corrupt.
pub fn corrupted_reduced_d_squared_is_zero(k: &SimplicialComplex) -> Option<bool> {
    for eps in all_submasks(k.vertex_mask()).into_iter().rev() {
        let mut w = reduced_block_window(k, eps);
        for deg in w.interior_degrees() {
            let Some(din) = w.differential_into(deg) else {
                continue;
            };
            let Some(dout) = w.differential_from(deg) else {
                continue;
            };
            let mut spot = None;
            'win: for (r, c, _) in din.iter() {
                for (_, cc, _) in dout.iter() {
                    if cc == r {
                        spot = Some((r, c));
                        break 'win;
                    }
                }
            }
            let Some((r, c)) = spot else { continue };
            let mut corrupted = din.clone();
            let bumped = corrupted.get(r, c) + crate::exactlin::rat(1);
            corrupted.set(r, c, bumped);
            // cohomological window: the differential into `deg` is the
            // one out of `deg - 1`
            w.replace_differential_from(deg - 1, corrupted);
            return Some(w.d_squared_is_zero());
        }
    }
    None
}

/// Composite-is-zero check for both Koszul models; used by the
/// verification suite. Returns the failing descriptions, empty on pass.
pub fn d_squared_failures(k: &SimplicialComplex, full_max_degree: usize) -> Vec<String> {
    let mut failures = Vec::new();
    for eps in all_submasks(k.vertex_mask()) {
        if !reduced_block_window(k, eps).d_squared_is_zero() {
            failures.push(format!("reduced model block {:?}", mask_to_labels(eps)));
        }
    }
    let mut multidegrees = Vec::new();
    enumerate_multidegrees(k.vertex_count(), full_max_degree as u32, &mut multidegrees);
    for e in multidegrees {
        if !full_block_window(k, &e).d_squared_is_zero() {
            failures.push(format!("full model block {e:?}"));
        }
    }
    failures
}
