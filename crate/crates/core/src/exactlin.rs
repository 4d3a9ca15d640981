//! Exact rational sparse linear algebra: rank, kernel and echelon
//! computations over `Q`, the arithmetic substrate for every homology
//! calculation in this crate.
//!
//! Matrices are indexed against explicit ordered bases supplied by the
//! callers; this module never sees a monomial.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational number, always in lowest terms with a
/// positive denominator (`num_rational` maintains both invariants).
pub type Rational = num_rational::BigRational;

/// Rational `n/1`.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// A sparse matrix over `Q`. Zero entries are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Rational>,
}

impl SparseMatrix {
    /// The zero matrix of the given shape.
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    /// The identity matrix of size `n`.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Builds a matrix from integer triplets, accumulating repeats.
    pub fn from_int_triplets(rows: usize, cols: usize, triplets: &[(usize, usize, i64)]) -> Self {
        let mut m = Self::zero(rows, cols);
        for &(r, c, v) in triplets {
            let cur = m.get(r, c) + rat(v);
            m.set(r, c, cur);
        }
        m
    }

    /// Builds a matrix from dense integer rows.
    pub fn from_int_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Self::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, rat(*v));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        assert!(r < self.rows && c < self.cols, "index out of range");
        self.entries
            .get(&(r, c))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Sets an entry; storing zero removes it.
    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        assert!(r < self.rows && c < self.cols, "index out of range");
        if v.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    /// Adds `v` to the entry at `(r, c)`.
    pub fn add_to(&mut self, r: usize, c: usize, v: &Rational) {
        if v.is_zero() {
            return;
        }
        let cur = self.get(r, c) + v;
        self.set(r, c, cur);
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in mul");
        // rhs by rows for cache-friendly accumulation
        let mut rhs_rows: Vec<Vec<(usize, &Rational)>> = vec![Vec::new(); rhs.rows];
        for (r, c, v) in rhs.iter() {
            rhs_rows[r].push((c, v));
        }
        let mut out = SparseMatrix::zero(self.rows, rhs.cols);
        for (r, k, v) in self.iter() {
            for &(c, w) in &rhs_rows[k] {
                out.add_to(r, c, &(v * w));
            }
        }
        out
    }

    /// Applies the matrix to a column vector.
    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols, "shape mismatch in apply");
        let mut out = vec![Rational::zero(); self.rows];
        for (r, c, a) in self.iter() {
            if !v[c].is_zero() {
                out[r] += a * &v[c];
            }
        }
        out
    }

    fn to_row_major(&self) -> Vec<Vec<(usize, Rational)>> {
        let mut rows: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); self.rows];
        for (r, c, v) in self.iter() {
            rows[r].push((c, v.clone()));
        }
        rows
    }

    /// Rank over `Q`.
    pub fn rank(&self) -> usize {
        Echelon::reduce(self).pivots.len()
    }

    /// Exact basis of the right null space; its size is `cols - rank`.
    ///
    /// Basis vectors are indexed by the free columns in increasing order
    /// and carry entry `1` at their free column, so the output is
    /// deterministic.
    pub fn kernel_basis(&self) -> Vec<Vec<Rational>> {
        let ech = Echelon::reduce(self);
        let pivot_of_col: BTreeMap<usize, usize> = ech
            .pivots
            .iter()
            .enumerate()
            .map(|(i, &c)| (c, i))
            .collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_of_col.contains_key(&free) {
                continue;
            }
            let mut v = vec![Rational::zero(); self.cols];
            v[free] = Rational::one();
            // each pivot row reads x_pivot = -sum_{free cols} coeff * x_free
            for (row, &pc) in ech.rows.iter().zip(&ech.pivots) {
                for (c, a) in row {
                    if *c == free {
                        v[pc] = -a.clone();
                    }
                }
            }
            basis.push(v);
        }
        basis
    }

    /// `ambient_dim - rank` of the span of the given row vectors.
    pub fn quotient_dimension(span_gens: &[Vec<Rational>], ambient_dim: usize) -> usize {
        let mut rref = RowSpace::new(ambient_dim);
        for g in span_gens {
            assert_eq!(g.len(), ambient_dim, "generator has wrong length");
            rref.insert(g.clone());
        }
        ambient_dim - rref.rank()
    }
}

impl fmt::Debug for SparseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "SparseMatrix {}x{} ({} nnz)",
            self.rows,
            self.cols,
            self.nnz()
        )?;
        for r in 0..self.rows.min(16) {
            let row: Vec<String> = (0..self.cols.min(16))
                .map(|c| self.get(r, c).to_string())
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Reduced row echelon form with pivot bookkeeping.
///
/// Pivot selection scans the sparsest unprocessed row and picks its entry
/// whose column has the fewest other nonzeros, a cheap minimal-fill
/// heuristic that keeps desk-scale eliminations fast.
struct Echelon {
    /// Echelon rows, each normalised to a leading 1 and fully reduced.
    rows: Vec<Vec<(usize, Rational)>>,
    /// Pivot column of each echelon row, in insertion order.
    pivots: Vec<usize>,
}

impl Echelon {
    fn reduce(m: &SparseMatrix) -> Echelon {
        let mut work = m.to_row_major();
        let mut out = Echelon {
            rows: Vec::new(),
            pivots: Vec::new(),
        };
        loop {
            // column occupancy among the remaining rows
            let mut col_count: BTreeMap<usize, usize> = BTreeMap::new();
            for row in &work {
                for (c, _) in row {
                    *col_count.entry(*c).or_insert(0) += 1;
                }
            }
            // sparsest nonempty row, ties by index for determinism
            let Some(best_row) = (0..work.len())
                .filter(|&i| !work[i].is_empty())
                .min_by_key(|&i| (work[i].len(), i))
            else {
                break;
            };
            let row = work.swap_remove(best_row);
            let pc = row
                .iter()
                .map(|(c, _)| *c)
                .min_by_key(|c| (col_count[c], *c))
                .unwrap();
            let pivot_val = row.iter().find(|(c, _)| *c == pc).unwrap().1.clone();
            let norm: Vec<(usize, Rational)> =
                row.into_iter().map(|(c, v)| (c, v / &pivot_val)).collect();
            // eliminate pc from every other working row
            for other in work.iter_mut() {
                if let Some(coeff) = other.iter().find(|(c, _)| *c == pc).map(|(_, v)| v.clone()) {
                    *other = row_axpy(other, &norm, &-coeff);
                }
            }
            // and from the already-collected echelon rows, for full RREF
            for existing in out.rows.iter_mut() {
                if let Some(coeff) = existing
                    .iter()
                    .find(|(c, _)| *c == pc)
                    .map(|(_, v)| v.clone())
                {
                    *existing = row_axpy(existing, &norm, &-coeff);
                }
            }
            out.rows.push(norm);
            out.pivots.push(pc);
        }
        // sort by pivot column for reproducible downstream reads
        let mut order: Vec<usize> = (0..out.pivots.len()).collect();
        order.sort_by_key(|&i| out.pivots[i]);
        out.rows = order.iter().map(|&i| out.rows[i].clone()).collect();
        out.pivots = order.iter().map(|&i| out.pivots[i]).collect();
        out
    }
}

/// `a + coeff * b` on sparse rows sorted by column.
fn row_axpy(
    a: &[(usize, Rational)],
    b: &[(usize, Rational)],
    coeff: &Rational,
) -> Vec<(usize, Rational)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some((ca, va)), Some((cb, vb))) if ca == cb => {
                let v = va + vb * coeff;
                if !v.is_zero() {
                    out.push((*ca, v));
                }
                i += 1;
                j += 1;
            }
            (Some((ca, va)), Some((cb, _))) if ca < cb => {
                out.push((*ca, va.clone()));
                i += 1;
            }
            (Some(_), Some((cb, vb))) => {
                let v = vb * coeff;
                if !v.is_zero() {
                    out.push((*cb, v));
                }
                j += 1;
            }
            (Some((ca, va)), None) => {
                out.push((*ca, va.clone()));
                i += 1;
            }
            (None, Some((cb, vb))) => {
                let v = vb * coeff;
                if !v.is_zero() {
                    out.push((*cb, v));
                }
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

/// Incremental row space: insert vectors one at a time and watch the rank
/// grow. Used for quotient dimensions and for splitting cycles modulo
/// boundaries.
pub struct RowSpace {
    dim: usize,
    /// rows in echelon form, keyed by pivot column
    rows: BTreeMap<usize, Vec<Rational>>,
}

impl RowSpace {
    pub fn new(dim: usize) -> Self {
        RowSpace {
            dim,
            rows: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the current rows; returns the residue.
    pub fn reduce(&self, mut v: Vec<Rational>) -> Vec<Rational> {
        assert_eq!(v.len(), self.dim);
        for (&pc, row) in &self.rows {
            if !v[pc].is_zero() {
                let coeff = v[pc].clone();
                for (x, y) in v.iter_mut().zip(row) {
                    *x -= &coeff * y;
                }
            }
        }
        v
    }

    /// Inserts `v`; returns `true` if it enlarged the span.
    pub fn insert(&mut self, v: Vec<Rational>) -> bool {
        let mut v = self.reduce(v);
        let Some(pc) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let lead = v[pc].clone();
        for x in v.iter_mut() {
            *x /= &lead;
        }
        // back-substitute into existing rows to stay fully reduced
        for row in self.rows.values_mut() {
            if !row[pc].is_zero() {
                let coeff = row[pc].clone();
                for (x, y) in row.iter_mut().zip(&v) {
                    *x -= &coeff * y;
                }
            }
        }
        self.rows.insert(pc, v);
        true
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.reduce(v.to_vec()).iter().all(|x| x.is_zero())
    }
}

/// Formats a rational vector for diagnostics.
pub fn format_vector(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

/// True when every coordinate is an integer.
pub fn is_integral(v: &Rational) -> bool {
    v.denom().abs() == BigInt::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_identity_and_zero() {
        assert_eq!(SparseMatrix::identity(3).rank(), 3);
        assert_eq!(SparseMatrix::zero(2, 5).rank(), 0);
    }

    #[test]
    fn rank_proportional_rows() {
        let m = SparseMatrix::from_int_rows(&[vec![1, 2], vec![2, 4], vec![3, 6]]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn kernel_single_row() {
        let m = SparseMatrix::from_int_rows(&[vec![1, 1]]);
        let ker = m.kernel_basis();
        assert_eq!(ker.len(), 1);
        let v = &ker[0];
        // (1, -1) up to scaling
        assert_eq!(v[0].clone() * rat(-1), v[1].clone());
        assert!(m.apply(v).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn kernel_identity_empty() {
        assert!(SparseMatrix::identity(4).kernel_basis().is_empty());
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let m = SparseMatrix::from_int_rows(&[vec![1, 2, 3]]);
        let ker = m.kernel_basis();
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert!(m.apply(v).iter().all(|x| x.is_zero()), "A*v != 0");
        }
    }

    #[test]
    fn rank_plus_nullity() {
        let m =
            SparseMatrix::from_int_rows(&[vec![1, 0, 2, -1], vec![0, 1, 1, 1], vec![1, 1, 3, 0]]);
        assert_eq!(m.rank() + m.kernel_basis().len(), m.cols());
    }

    #[test]
    fn quotient_dimension_cases() {
        assert_eq!(SparseMatrix::quotient_dimension(&[], 4), 4);
        let std_basis: Vec<Vec<Rational>> = (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| if i == j { rat(1) } else { rat(0) })
                    .collect()
            })
            .collect();
        assert_eq!(SparseMatrix::quotient_dimension(&std_basis, 3), 0);
        let gens = vec![vec![rat(1), rat(1), rat(0)], vec![rat(0), rat(1), rat(1)]];
        assert_eq!(SparseMatrix::quotient_dimension(&gens, 3), 1);
    }

    #[test]
    fn mul_identity() {
        let m = SparseMatrix::from_int_rows(&[vec![1, 2], vec![3, 4]]);
        assert_eq!(m.mul(&SparseMatrix::identity(2)), m);
    }

    #[test]
    fn row_space_membership() {
        let mut rs = RowSpace::new(3);
        assert!(rs.insert(vec![rat(1), rat(1), rat(0)]));
        assert!(rs.insert(vec![rat(0), rat(0), rat(2)]));
        assert!(!rs.insert(vec![rat(2), rat(2), rat(6)]));
        assert_eq!(rs.rank(), 2);
        assert!(rs.contains(&[rat(3), rat(3), rat(1)]));
        assert!(!rs.contains(&[rat(1), rat(0), rat(0)]));
    }
}
