//! Finite simplicial complexes: construction from facets, face
//! enumeration, f/h-vectors, missing faces, flag detection, skeleta and
//! the face poset.
//!
//! Vertices are labelled `1..=m`. Faces are stored as bitmasks
//! internally; the empty face is always present. Vertices that appear in
//! no facet are permitted and tracked as ghost vertices.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// Masks support up to 64 vertices, far beyond the desk scale at which
/// exhaustive face enumeration is feasible anyway.
pub const MAX_VERTICES: usize = 64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ComplexError {
    #[error("facet {facet:?} references vertex {label}, outside 1..={m}")]
    VertexOutOfRange {
        facet: Vec<usize>,
        label: usize,
        m: usize,
    },
    #[error("vertex count {0} exceeds the supported maximum of {MAX_VERTICES}")]
    TooManyVertices(usize),
}

/// A face given as a sorted list of 1-based vertex labels.
pub type Face = Vec<usize>;

fn mask_to_face(mask: u64) -> Face {
    (0..MAX_VERTICES)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| i + 1)
        .collect()
}

fn face_to_mask(face: &[usize]) -> u64 {
    face.iter().fold(0u64, |acc, &v| acc | 1 << (v - 1))
}

/// A finite simplicial complex on the vertex set `{1..m}`.
///
/// The face family is closed under subsets and includes the empty face;
/// facets never contain one another.
#[derive(Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    m: usize,
    facets: Vec<u64>,
    /// all faces, sorted by (cardinality, mask); starts with the empty face
    faces: Vec<u64>,
    face_set: BTreeSet<u64>,
}

impl SimplicialComplex {
    /// Builds the downward closure of the given facets, dropping
    /// dominated facets and adding the empty face.
    pub fn from_facets(m: usize, facets: &[Vec<usize>]) -> Result<Self, ComplexError> {
        if m > MAX_VERTICES {
            return Err(ComplexError::TooManyVertices(m));
        }
        let mut masks = Vec::new();
        for facet in facets {
            for &label in facet {
                if label == 0 || label > m {
                    return Err(ComplexError::VertexOutOfRange {
                        facet: facet.clone(),
                        label,
                        m,
                    });
                }
            }
            masks.push(face_to_mask(facet));
        }
        // drop dominated facets (and duplicates)
        masks.sort_unstable();
        masks.dedup();
        let maximal: Vec<u64> = masks
            .iter()
            .copied()
            .filter(|&f| !masks.iter().any(|&g| g != f && g & f == f))
            .collect();

        let mut face_set = BTreeSet::new();
        face_set.insert(0u64);
        for &f in &maximal {
            let mut sub = f;
            // iterate over all submasks of f
            loop {
                face_set.insert(sub);
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & f;
            }
        }
        let mut faces: Vec<u64> = face_set.iter().copied().collect();
        faces.sort_by_key(|&f| (f.count_ones(), f));
        let mut facets_sorted = maximal;
        facets_sorted.sort_by_key(|&f| (f.count_ones(), f));
        Ok(SimplicialComplex {
            m,
            facets: facets_sorted,
            faces,
            face_set,
        })
    }

    /// The full simplex on `n` vertices (dimension `n - 1`).
    pub fn simplex(n: usize) -> Self {
        Self::from_facets(n, &[(1..=n).collect()]).expect("simplex is valid")
    }

    /// The boundary of the `n`-simplex, on `n + 1` vertices.
    pub fn boundary_simplex(n: usize) -> Self {
        let m = n + 1;
        let facets: Vec<Vec<usize>> = (1..=m)
            .map(|skip| (1..=m).filter(|&v| v != skip).collect())
            .collect();
        Self::from_facets(m, &facets).expect("boundary is valid")
    }

    /// `m` isolated vertices.
    pub fn discrete(m: usize) -> Self {
        let facets: Vec<Vec<usize>> = (1..=m).map(|v| vec![v]).collect();
        Self::from_facets(m, &facets).expect("discrete complex is valid")
    }

    /// The boundary of the square: the 4-cycle 12, 23, 34, 14.
    pub fn four_cycle() -> Self {
        Self::from_facets(4, &[vec![1, 2], vec![2, 3], vec![3, 4], vec![1, 4]])
            .expect("4-cycle is valid")
    }

    /// The cycle graph on `k >= 3` vertices.
    pub fn cycle(k: usize) -> Self {
        assert!(k >= 3);
        let mut facets: Vec<Vec<usize>> = (1..k).map(|v| vec![v, v + 1]).collect();
        facets.push(vec![1, k]);
        Self::from_facets(k, &facets).expect("cycle is valid")
    }

    pub fn vertex_count(&self) -> usize {
        self.m
    }

    /// Number of faces, including the empty face.
    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    /// Dimension of the complex; the empty complex `{∅}` has dimension -1.
    pub fn dim(&self) -> i64 {
        self.facets
            .iter()
            .map(|f| f.count_ones() as i64 - 1)
            .max()
            .unwrap_or(-1)
    }

    pub fn facets(&self) -> Vec<Face> {
        self.facets.iter().map(|&f| mask_to_face(f)).collect()
    }

    /// All faces, including the empty face, sorted by (cardinality, mask).
    pub fn faces(&self) -> Vec<Face> {
        self.faces.iter().map(|&f| mask_to_face(f)).collect()
    }

    /// Faces with exactly `k` vertices.
    pub fn faces_with_size(&self, k: usize) -> Vec<Face> {
        self.faces
            .iter()
            .filter(|f| f.count_ones() as usize == k)
            .map(|&f| mask_to_face(f))
            .collect()
    }

    pub fn is_face(&self, face: &[usize]) -> bool {
        face.iter().all(|&v| v >= 1 && v <= self.m) && self.is_face_mask(face_to_mask(face))
    }

    pub(crate) fn is_face_mask(&self, mask: u64) -> bool {
        self.face_set.contains(&mask)
    }

    pub(crate) fn vertex_mask(&self) -> u64 {
        if self.m == MAX_VERTICES {
            u64::MAX
        } else {
            (1u64 << self.m) - 1
        }
    }

    /// Vertices in `1..=m` that appear in no face.
    pub fn ghost_vertices(&self) -> Vec<usize> {
        let support: u64 = self.facets.iter().fold(0, |acc, f| acc | f);
        (1..=self.m)
            .filter(|&v| support >> (v - 1) & 1 == 0)
            .collect()
    }

    /// f- and h-vectors, with the h-vector solved exactly from the
    /// polynomial identity `sum_i f_{i-1} t^i (1-t)^{n-i} = sum_i h_i t^i`.
    pub fn f_h_vectors(&self) -> FHVectors {
        let n = (self.dim() + 1) as usize;
        let mut f = vec![0i64; n + 1]; // f[i] = f_{i-1} = #faces with i vertices
        for &face in &self.faces {
            f[face.count_ones() as usize] += 1;
        }
        // h_k = sum_i f_{i-1} * [t^k] t^i (1-t)^{n-i}
        let mut h = vec![0i64; n + 1];
        for (i, &fi) in f.iter().enumerate() {
            // t^i (1-t)^{n-i} = sum_j (-1)^j C(n-i, j) t^{i+j}
            for j in 0..=(n - i) {
                let k = i + j;
                let c = binomial(n - i, j);
                let term = if j % 2 == 0 { fi * c } else { -fi * c };
                h[k] += term;
            }
        }
        FHVectors { n, f, h }
    }

    /// All minimal non-faces with at least two vertices. Singleton
    /// non-faces are ghost vertices and reported by [`ghost_vertices`].
    ///
    /// [`ghost_vertices`]: SimplicialComplex::ghost_vertices
    pub fn missing_faces(&self) -> Vec<Face> {
        let mut missing = Vec::new();
        // candidates: S not a face, every (|S|-1)-subset a face
        let mut frontier: BTreeSet<u64> = BTreeSet::new();
        // start from pairs and grow through faces only: a minimal non-face
        // of size k has all its proper subsets in K, so it is a pair of a
        // (k-1)-face with one extra vertex.
        for size in 2..=self.m {
            let mut candidates: BTreeSet<u64> = BTreeSet::new();
            for &face in self
                .faces
                .iter()
                .filter(|f| f.count_ones() as usize == size - 1)
            {
                for v in 0..self.m {
                    if face >> v & 1 == 0 {
                        candidates.insert(face | 1 << v);
                    }
                }
            }
            for &cand in &candidates {
                if self.is_face_mask(cand) {
                    continue;
                }
                // all proper maximal subsets must be faces
                let all_subsets_faces = (0..self.m)
                    .filter(|&v| cand >> v & 1 == 1)
                    .all(|v| self.is_face_mask(cand & !(1 << v)));
                if all_subsets_faces {
                    frontier.insert(cand);
                }
            }
        }
        for &mask in &frontier {
            missing.push(mask_to_face(mask));
        }
        missing.sort_by_key(|f| (f.len(), f.clone()));
        missing
    }

    /// True iff every missing face has exactly 2 vertices.
    pub fn is_flag(&self) -> bool {
        self.missing_faces().iter().all(|f| f.len() == 2)
    }

    /// The subcomplex of all faces with at most `d + 1` vertices.
    pub fn skeleton(&self, d: usize) -> SimplicialComplex {
        let small: Vec<Face> = self
            .faces
            .iter()
            .filter(|f| f.count_ones() as usize <= d + 1 && f.count_ones() > 0)
            .map(|&f| mask_to_face(f))
            .collect();
        SimplicialComplex::from_facets(self.m, &small).expect("skeleton of valid complex")
    }

    /// The flag complex generated by the 1-skeleton: every pairwise
    /// connected vertex set spans a face.
    pub fn flagification(&self) -> SimplicialComplex {
        let vertices: Vec<usize> = self
            .faces
            .iter()
            .filter(|f| f.count_ones() == 1)
            .map(|&f| mask_to_face(f)[0])
            .collect();
        let edge = |a: usize, b: usize| self.is_face_mask(1 << (a - 1) | 1 << (b - 1));
        // grow cliques greedily: all cliques of the edge graph
        let mut cliques: Vec<Vec<usize>> = vertices.iter().map(|&v| vec![v]).collect();
        let mut all: BTreeSet<Vec<usize>> = cliques.iter().cloned().collect();
        while let Some(c) = cliques.pop() {
            let last = *c.last().unwrap();
            for &v in vertices.iter().filter(|&&v| v > last) {
                if c.iter().all(|&u| edge(u, v)) {
                    let mut bigger = c.clone();
                    bigger.push(v);
                    if all.insert(bigger.clone()) {
                        cliques.push(bigger);
                    }
                }
            }
        }
        let facets: Vec<Vec<usize>> = all.into_iter().collect();
        SimplicialComplex::from_facets(self.m, &facets).expect("flagification of valid complex")
    }

    /// All covering pairs `(σ, τ)` with `σ ⊂ τ` and `|τ| = |σ| + 1`:
    /// the object/morphism data of the face category of `K`.
    pub fn face_poset(&self) -> Vec<(Face, Face)> {
        let mut pairs = Vec::new();
        for &tau in &self.faces {
            if tau == 0 {
                continue;
            }
            for v in 0..self.m {
                if tau >> v & 1 == 1 {
                    pairs.push((mask_to_face(tau & !(1 << v)), mask_to_face(tau)));
                }
            }
        }
        pairs.sort();
        pairs
    }

    /// A canonical label for the isomorphism class: the lexicographically
    /// smallest facet encoding over all vertex relabellings. Only
    /// practical for small `m`.
    pub fn canonical_key(&self) -> (usize, Vec<u64>) {
        let perms = permutations(self.m);
        let mut best: Option<Vec<u64>> = None;
        for p in &perms {
            let mut relabeled: Vec<u64> = self
                .facets
                .iter()
                .map(|&f| {
                    (0..self.m)
                        .filter(|&v| f >> v & 1 == 1)
                        .fold(0u64, |acc, v| acc | 1 << p[v])
                })
                .collect();
            relabeled.sort_unstable();
            if best.as_ref().is_none_or(|b| relabeled < *b) {
                best = Some(relabeled);
            }
        }
        (self.m, best.unwrap_or_default())
    }
}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "SimplicialComplex(m={}, facets={:?})",
            self.m,
            self.facets()
        )
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    heap_permute(&mut items, n, &mut out);
    out
}

fn heap_permute(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == 1 {
        out.push(items.clone());
        return;
    }
    for i in 0..k {
        heap_permute(items, k - 1, out);
        if k.is_multiple_of(2) {
            items.swap(i, k - 1);
        } else {
            items.swap(0, k - 1);
        }
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> i64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    acc as i64
}

/// The f- and h-vector of a complex of dimension `n - 1`.
///
/// `f[i]` holds `f_{i-1}` (the number of faces with `i` vertices, so
/// `f[0] = 1` counts the empty face) and `h` has length `n + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FHVectors {
    pub n: usize,
    pub f: Vec<i64>,
    pub h: Vec<i64>,
}

impl FHVectors {
    /// Checks the defining polynomial identity exactly.
    pub fn identity_holds(&self) -> bool {
        // sum_i f_{i-1} t^i (1-t)^{n-i} == sum_k h_k t^k
        let n = self.n;
        let mut lhs = vec![0i64; n + 1];
        for (i, &fi) in self.f.iter().enumerate() {
            for j in 0..=(n - i) {
                let c = binomial(n - i, j);
                let term = if j % 2 == 0 { fi * c } else { -fi * c };
                lhs[i + j] += term;
            }
        }
        lhs == self.h
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_triangle_has_seven_faces() {
        let k = SimplicialComplex::from_facets(3, &[vec![1, 2], vec![2, 3], vec![1, 3]]).unwrap();
        assert_eq!(k.face_count(), 7);
        assert_eq!(k.dim(), 1);
        assert_eq!(k, SimplicialComplex::boundary_simplex(2));
    }

    #[test]
    fn full_triangle_is_power_set() {
        let k = SimplicialComplex::from_facets(3, &[vec![1, 2, 3]]).unwrap();
        assert_eq!(k.face_count(), 8);
    }

    #[test]
    fn discrete_three_points() {
        let k = SimplicialComplex::from_facets(3, &[vec![1], vec![2], vec![3]]).unwrap();
        assert_eq!(k.face_count(), 4);
        assert_eq!(k, SimplicialComplex::discrete(3));
    }

    #[test]
    fn dominated_facets_are_dropped() {
        let k = SimplicialComplex::from_facets(3, &[vec![1, 2, 3], vec![1, 2], vec![3]]).unwrap();
        assert_eq!(k.facets(), vec![vec![1, 2, 3]]);
    }

    #[test]
    fn vertex_out_of_range_is_rejected() {
        let err = SimplicialComplex::from_facets(2, &[vec![1, 3]]).unwrap_err();
        assert!(matches!(
            err,
            ComplexError::VertexOutOfRange { label: 3, .. }
        ));
        let err = SimplicialComplex::from_facets(2, &[vec![0]]).unwrap_err();
        assert!(matches!(
            err,
            ComplexError::VertexOutOfRange { label: 0, .. }
        ));
    }

    #[test]
    fn ghost_vertices_are_tracked() {
        let k = SimplicialComplex::from_facets(4, &[vec![1, 2]]).unwrap();
        assert_eq!(k.ghost_vertices(), vec![3, 4]);
        assert!(SimplicialComplex::discrete(3).ghost_vertices().is_empty());
    }

    #[test]
    fn h_vector_simplex_and_boundary() {
        for n in 1..=5 {
            let fh = SimplicialComplex::simplex(n).f_h_vectors();
            let mut expect = vec![0i64; n + 1];
            expect[0] = 1;
            assert_eq!(fh.h, expect, "h-vector of simplex on {n} vertices");
            assert!(fh.identity_holds());

            let fh = SimplicialComplex::boundary_simplex(n).f_h_vectors();
            assert_eq!(
                fh.h,
                vec![1i64; n + 1],
                "h-vector of boundary of {n}-simplex"
            );
            assert!(fh.identity_holds());
        }
    }

    #[test]
    fn four_cycle_f_and_h() {
        let fh = SimplicialComplex::four_cycle().f_h_vectors();
        assert_eq!(fh.f, vec![1, 4, 4]);
        assert_eq!(fh.h, vec![1, 2, 1]);
        assert!(fh.identity_holds());
    }

    #[test]
    fn missing_faces_examples() {
        assert_eq!(
            SimplicialComplex::boundary_simplex(2).missing_faces(),
            vec![vec![1, 2, 3]]
        );
        assert_eq!(
            SimplicialComplex::four_cycle().missing_faces(),
            vec![vec![1, 3], vec![2, 4]]
        );
        assert!(SimplicialComplex::simplex(3).missing_faces().is_empty());
    }

    #[test]
    fn flag_examples() {
        assert!(SimplicialComplex::four_cycle().is_flag());
        assert!(!SimplicialComplex::boundary_simplex(2).is_flag());
        // 1-skeleton of the 3-simplex: four missing triangles
        let k = SimplicialComplex::simplex(4).skeleton(1);
        assert!(!k.is_flag());
        assert_eq!(k.missing_faces().len(), 4);
        assert!(k.missing_faces().iter().all(|f| f.len() == 3));
    }

    #[test]
    fn skeleton_examples() {
        let k4 = SimplicialComplex::simplex(4).skeleton(1);
        assert_eq!(k4.faces_with_size(2).len(), 6);
        assert_eq!(k4.dim(), 1);
        let k = SimplicialComplex::four_cycle();
        assert_eq!(k.skeleton(k.dim() as usize), k);
        assert_eq!(
            SimplicialComplex::boundary_simplex(2).skeleton(0),
            SimplicialComplex::discrete(3)
        );
    }

    #[test]
    fn face_poset_examples() {
        let delta1 = SimplicialComplex::simplex(2);
        let pairs = delta1.face_poset();
        assert_eq!(
            pairs,
            vec![
                (vec![], vec![1]),
                (vec![], vec![2]),
                (vec![1], vec![1, 2]),
                (vec![2], vec![1, 2]),
            ]
        );
        assert_eq!(SimplicialComplex::discrete(2).face_poset().len(), 2);
        let pairs = SimplicialComplex::boundary_simplex(2).face_poset();
        assert_eq!(pairs.len(), 9);
        // |covering pairs| = sum of |σ| over nonempty faces
        let k = SimplicialComplex::four_cycle();
        let total: usize = k.faces().iter().map(|f| f.len()).sum();
        assert_eq!(k.face_poset().len(), total);
    }

    #[test]
    fn downward_closure_property() {
        let k = SimplicialComplex::from_facets(5, &[vec![1, 2, 3], vec![3, 4], vec![5]]).unwrap();
        for face in k.faces() {
            for skip in 0..face.len() {
                let mut sub = face.clone();
                sub.remove(skip);
                assert!(k.is_face(&sub), "{sub:?} missing below {face:?}");
            }
        }
    }

    #[test]
    fn flagification_contains_k_with_equality_iff_flag() {
        let flag = SimplicialComplex::four_cycle();
        assert_eq!(flag.flagification(), flag);
        let nonflag = SimplicialComplex::boundary_simplex(2);
        let fl = nonflag.flagification();
        assert_eq!(fl, SimplicialComplex::simplex(3));
        for face in nonflag.faces() {
            assert!(fl.is_face(&face));
        }
    }

    #[test]
    fn empty_complex() {
        let k = SimplicialComplex::from_facets(0, &[]).unwrap();
        assert_eq!(k.face_count(), 1);
        assert_eq!(k.dim(), -1);
        let fh = k.f_h_vectors();
        assert_eq!(fh.f, vec![1]);
        assert_eq!(fh.h, vec![1]);
    }
}
