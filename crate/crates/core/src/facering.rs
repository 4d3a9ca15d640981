//! The Stanley-Reisner algebra `Q[K]` and its dual coalgebra `Q<K>`:
//! graded monomial bases, the coproduct dual to multiplication, exact
//! Poincaré series, and quotients by linear systems of parameters
//! (quasitoric cohomology).

use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::complex::SimplicialComplex;
use crate::exactlin::{rat, Rational, RowSpace};
use crate::graded::{GradedError, IntPoly, PoincareSeries};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FaceRingError {
    #[error("monomial support {0:?} is not a face of the complex")]
    SupportNotFace(Vec<usize>),
    #[error("monomial has {got} exponents but the complex has {expected} vertices")]
    WrongLength { got: usize, expected: usize },
    #[error("parameter matrix has {rows} rows but only {m} vertices are available")]
    TooManyParameters { rows: usize, m: usize },
    #[error("parameter matrix row {row} has {got} columns, expected {expected}")]
    RaggedMatrix {
        row: usize,
        got: usize,
        expected: usize,
    },
    #[error(transparent)]
    Graded(#[from] GradedError),
}

/// A monomial in the vertex variables, stored as an exponent vector of
/// length `m`. It lies in the `Q[K]`-basis iff its support is a face;
/// the same data indexes the dual basis of the coalgebra `Q<K>`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    exponents: Vec<u32>,
}

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial { exponents }
    }

    pub fn unit(m: usize) -> Self {
        Monomial {
            exponents: vec![0; m],
        }
    }

    /// The square-free monomial supported on a face.
    pub fn from_face(face: &[usize], m: usize) -> Self {
        let mut e = vec![0; m];
        for &v in face {
            e[v - 1] = 1;
        }
        Monomial { exponents: e }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    /// Total exponent sum.
    pub fn total(&self) -> u32 {
        self.exponents.iter().sum()
    }

    /// Support as 1-based vertex labels.
    pub fn support(&self) -> Vec<usize> {
        self.exponents
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, _)| i + 1)
            .collect()
    }

    pub(crate) fn support_mask(&self) -> u64 {
        self.exponents
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .fold(0u64, |acc, (i, _)| acc | 1 << i)
    }

    /// Whether this monomial survives in `Q[K]`.
    pub fn is_basis_element(&self, k: &SimplicialComplex) -> bool {
        self.len() == k.vertex_count() && k.is_face_mask(self.support_mask())
    }

    /// Componentwise sum (the product of monomials in the ambient
    /// polynomial ring).
    pub fn mul(&self, rhs: &Monomial) -> Monomial {
        assert_eq!(self.len(), rhs.len());
        Monomial {
            exponents: self
                .exponents
                .iter()
                .zip(&rhs.exponents)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// Adds one to the exponent of a 1-based vertex.
    pub fn times_vertex(&self, v: usize) -> Monomial {
        let mut e = self.exponents.clone();
        e[v - 1] += 1;
        Monomial { exponents: e }
    }

    /// Degree under the chosen grading convention.
    pub fn degree(&self, g: GradingConvention) -> u32 {
        g.vertex_degree() * self.total()
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.exponents.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "v{}", i + 1)?;
            } else {
                write!(f, "v{}^{}", i + 1, e)?;
            }
        }
        Ok(())
    }
}

/// Vertices carry degree 2 in the cohomological grading of `Q[K]` and
/// degree 1 in the regrading used for loop-space series.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GradingConvention {
    VertexDegreeOne,
    VertexDegreeTwo,
}

impl GradingConvention {
    pub fn vertex_degree(self) -> u32 {
        match self {
            GradingConvention::VertexDegreeOne => 1,
            GradingConvention::VertexDegreeTwo => 2,
        }
    }
}

/// All monomials of the given total exponent whose support is a face,
/// in lexicographic order on exponent vectors.
pub fn sr_basis(k: &SimplicialComplex, total_exponent: u32) -> Vec<Monomial> {
    let m = k.vertex_count();
    if total_exponent == 0 {
        return vec![Monomial::unit(m)];
    }
    let mut out = Vec::new();
    for face in k.faces() {
        let s = face.len();
        if s == 0 || (s as u32) > total_exponent {
            continue;
        }
        for_each_composition(total_exponent, s, &mut |parts| {
            let mut mono = Monomial::unit(m);
            for (i, &v) in face.iter().enumerate() {
                mono.exponents[v - 1] = parts[i];
            }
            out.push(mono);
        });
    }
    out.sort();
    out
}

/// Calls `f` on every composition of `total` into `parts` positive parts.
fn for_each_composition(total: u32, parts: usize, f: &mut impl FnMut(&[u32])) {
    fn go(remaining: u32, slots_left: usize, buf: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
        if slots_left == 1 {
            buf.push(remaining);
            f(buf);
            buf.pop();
            return;
        }
        for first in 1..=(remaining - slots_left as u32 + 1) {
            buf.push(first);
            go(remaining - first, slots_left - 1, buf, f);
            buf.pop();
        }
    }
    if parts == 0 || (parts as u32) > total {
        return;
    }
    go(total, parts, &mut Vec::with_capacity(parts), f);
}

/// The coproduct of `Q<K>` on a dual-basis element: all ordered pairs
/// `(b, c)` with `b + c = a` componentwise, each with coefficient `+1`,
/// including the two unit-flanked terms.
pub fn sr_coproduct(
    k: &SimplicialComplex,
    a: &Monomial,
) -> Result<Vec<(Monomial, Monomial)>, FaceRingError> {
    if a.len() != k.vertex_count() {
        return Err(FaceRingError::WrongLength {
            got: a.len(),
            expected: k.vertex_count(),
        });
    }
    if !k.is_face_mask(a.support_mask()) {
        return Err(FaceRingError::SupportNotFace(a.support()));
    }
    let mut out = Vec::new();
    let mut left = Monomial::unit(a.len());
    loop {
        let right = Monomial {
            exponents: a
                .exponents
                .iter()
                .zip(&left.exponents)
                .map(|(x, y)| x - y)
                .collect(),
        };
        out.push((left.clone(), right));
        // advance left through all vectors <= a, odometer style
        let mut i = 0;
        loop {
            if i == a.len() {
                out.sort();
                return Ok(out);
            }
            if left.exponents[i] < a.exponents[i] {
                left.exponents[i] += 1;
                break;
            }
            left.exponents[i] = 0;
            i += 1;
        }
    }
}

/// The Poincaré series of `Q[K]`, computed from the face-count sum
/// `Σ_σ (t/(1-t))^{|σ|}` over all faces; with degree-1 vertices this
/// equals the h-polynomial over `(1-t)^n`, and the degree-2 grading is
/// the substitution `t -> t^2`.
pub fn sr_poincare_series(k: &SimplicialComplex, g: GradingConvention) -> PoincareSeries {
    let n = (k.dim() + 1) as usize;
    let one_minus_t = IntPoly::from_i64(&[1, -1]);
    // sum over faces of t^{|σ|} (1-t)^{n-|σ|}, all over (1-t)^n
    let mut num = IntPoly::zero();
    for face in k.faces() {
        let s = face.len();
        num = num.add(&IntPoly::monomial(1, s).mul(&one_minus_t.pow(n - s)));
    }
    let series = PoincareSeries::new(num, one_minus_t.pow(n))
        .expect("face-count series has unit denominator constant");
    match g {
        GradingConvention::VertexDegreeOne => series,
        GradingConvention::VertexDegreeTwo => series.substitute_square(),
    }
}

/// Outcome of a linear-system-of-parameters quotient computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LsopQuotient {
    /// Quotient dimension in each exponent degree `0..=last computed`.
    pub dims: Vec<usize>,
    /// True when the quotient vanished for `m` consecutive degrees, which
    /// forces it to vanish forever after.
    pub finite_dimensional: bool,
    /// Degree cap that stopped the scan, when the quotient never died.
    pub capped_at: Option<u32>,
}

impl LsopQuotient {
    pub fn total_dimension(&self) -> Option<usize> {
        self.finite_dimensional.then(|| self.dims.iter().sum())
    }
}

/// Dimensions of `Q[K]/(l_1, ..., l_n)` degree by degree, where row `i`
/// of `lambda` gives the coefficients of the linear form `l_i`.
///
/// The scan stops at the first run of `m` consecutive zero degrees (the
/// quotient is then zero forever, since the relation span is an ideal
/// generated in degree 1) or at `degree_cap`.
pub fn lsop_quotient(
    k: &SimplicialComplex,
    lambda: &[Vec<i64>],
    degree_cap: u32,
) -> Result<LsopQuotient, FaceRingError> {
    let m = k.vertex_count();
    if lambda.len() > m {
        return Err(FaceRingError::TooManyParameters {
            rows: lambda.len(),
            m,
        });
    }
    for (i, row) in lambda.iter().enumerate() {
        if row.len() != m {
            return Err(FaceRingError::RaggedMatrix {
                row: i,
                got: row.len(),
                expected: m,
            });
        }
    }
    let mut dims = Vec::new();
    let mut zero_run = 0usize;
    let mut degree = 0u32;
    loop {
        let ambient = sr_basis(k, degree);
        let index: std::collections::HashMap<&Monomial, usize> =
            ambient.iter().enumerate().map(|(i, mo)| (mo, i)).collect();
        let dim = if degree == 0 {
            ambient.len()
        } else {
            let below = sr_basis(k, degree - 1);
            let mut span = RowSpace::new(ambient.len());
            for b in &below {
                for row in lambda {
                    let mut vec = vec![Rational::zero(); ambient.len()];
                    for (j, &coeff) in row.iter().enumerate() {
                        if coeff == 0 {
                            continue;
                        }
                        let prod = b.times_vertex(j + 1);
                        if let Some(&idx) = index.get(&prod) {
                            vec[idx] += rat(coeff);
                        }
                        // products with non-face support vanish in Q[K]
                    }
                    span.insert(vec);
                }
            }
            ambient.len() - span.rank()
        };
        dims.push(dim);
        zero_run = if dim == 0 { zero_run + 1 } else { 0 };
        if zero_run >= m.max(1) {
            return Ok(LsopQuotient {
                dims,
                finite_dimensional: true,
                capped_at: None,
            });
        }
        if degree >= degree_cap {
            return Ok(LsopQuotient {
                dims,
                finite_dimensional: false,
                capped_at: Some(degree),
            });
        }
        degree += 1;
    }
}

/// Default degree cap for [`lsop_quotient`]: generous at desk scale.
pub fn default_lsop_cap(k: &SimplicialComplex) -> u32 {
    2 * (k.vertex_count() as u32 + 1)
}
