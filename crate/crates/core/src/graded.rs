//! Graded bookkeeping shared by the algebraic modules: finite windows of
//! chain complexes with exact homology, and Poincaré series stored as
//! rational functions with integer-coefficient numerator and denominator.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exactlin::{Rational, RowSpace, SparseMatrix};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GradedError {
    #[error("window spans degrees {lo}..={hi}, which has no interior degree")]
    WindowTooNarrow { lo: i64, hi: i64 },
    #[error("degree {0} is not interior to the window")]
    NotInterior(i64),
    #[error("denominator has zero constant term")]
    ZeroDenominatorConstant,
    #[error("denominator constant term {0} is not invertible over the integers")]
    NonUnitDenominatorConstant(BigInt),
    #[error("division by the zero series")]
    DivisionByZero,
}

/// Whether the differential lowers degree by 1 (homological) or raises
/// it by 1 (cohomological).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Homological,
    Cohomological,
}

/// A finite slice of a graded complex: per-degree ordered bases of opaque
/// labels and the differentials between adjacent degrees.
///
/// Homology is reported only at interior degrees, where both the incoming
/// and the outgoing differential lie inside the window; producers pad
/// with empty degrees when a slice is actually complete.
#[derive(Clone, Debug)]
pub struct ChainComplexWindow<L> {
    direction: Direction,
    min_degree: i64,
    basis: Vec<Vec<L>>,
    /// `diffs[i]` is the differential out of degree `min_degree + i`;
    /// `None` exactly where the target leaves the window.
    diffs: Vec<Option<SparseMatrix>>,
}

impl<L: Clone> ChainComplexWindow<L> {
    /// Assembles a window from per-degree bases and a callback mapping
    /// (degree, basis index) to the column of the differential out of
    /// that degree, expressed in the adjacent basis.
    pub fn build<F>(direction: Direction, min_degree: i64, basis: Vec<Vec<L>>, column: F) -> Self
    where
        F: Fn(i64, usize) -> Vec<(usize, Rational)>,
    {
        let n = basis.len();
        let mut diffs: Vec<Option<SparseMatrix>> = Vec::with_capacity(n);
        for i in 0..n {
            let target = match direction {
                Direction::Homological => i.checked_sub(1),
                Direction::Cohomological => (i + 1 < n).then_some(i + 1),
            };
            let Some(t) = target else {
                diffs.push(None);
                continue;
            };
            let mut m = SparseMatrix::zero(basis[t].len(), basis[i].len());
            for j in 0..basis[i].len() {
                for (row, val) in column(min_degree + i as i64, j) {
                    m.add_to(row, j, &val);
                }
            }
            diffs.push(Some(m));
        }
        ChainComplexWindow {
            direction,
            min_degree,
            basis,
            diffs,
        }
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn min_degree(&self) -> i64 {
        self.min_degree
    }

    pub fn max_degree(&self) -> i64 {
        self.min_degree + self.basis.len() as i64 - 1
    }

    pub fn basis_at(&self, degree: i64) -> &[L] {
        match self.index_of(degree) {
            Some(i) => &self.basis[i],
            None => &[],
        }
    }

    fn index_of(&self, degree: i64) -> Option<usize> {
        if degree < self.min_degree || degree > self.max_degree() {
            None
        } else {
            Some((degree - self.min_degree) as usize)
        }
    }

    /// The differential out of `degree`, if its target is in the window.
    pub fn differential_from(&self, degree: i64) -> Option<&SparseMatrix> {
        self.index_of(degree).and_then(|i| self.diffs[i].as_ref())
    }

    /// The differential into `degree`, if its source is in the window.
    pub fn differential_into(&self, degree: i64) -> Option<&SparseMatrix> {
        let source = match self.direction {
            Direction::Homological => degree + 1,
            Direction::Cohomological => degree - 1,
        };
        self.differential_from(source)
    }

    /// Replaces the differential out of `degree`; test hook for negative
    /// controls that corrupt a window on purpose.
    pub fn replace_differential_from(&mut self, degree: i64, m: SparseMatrix) {
        let i = self.index_of(degree).expect("degree inside window");
        assert!(self.diffs[i].is_some(), "no differential at this degree");
        self.diffs[i] = Some(m);
    }

    /// Degrees with both differentials inside the window.
    pub fn interior_degrees(&self) -> Vec<i64> {
        (self.min_degree + 1..self.max_degree()).collect()
    }

    /// Checks `d∘d = 0` matrix-exactly everywhere both composites exist.
    pub fn d_squared_is_zero(&self) -> bool {
        for k in self.interior_degrees() {
            let (Some(din), Some(dout)) = (self.differential_into(k), self.differential_from(k))
            else {
                continue;
            };
            if !dout.mul(din).is_zero() {
                return false;
            }
        }
        true
    }

    /// Per-degree homology dimensions at every interior degree.
    pub fn homology_dims(&self) -> Result<Vec<(i64, usize)>, GradedError> {
        let interior = self.interior_degrees();
        if interior.is_empty() {
            return Err(GradedError::WindowTooNarrow {
                lo: self.min_degree,
                hi: self.max_degree(),
            });
        }
        let mut out = Vec::with_capacity(interior.len());
        for k in interior {
            let i = self.index_of(k).expect("interior degree");
            let dim_k = self.basis[i].len();
            let rank_out = self.differential_from(k).map_or(0, |m| m.rank());
            let rank_in = self.differential_into(k).map_or(0, |m| m.rank());
            out.push((k, dim_k - rank_out - rank_in));
        }
        Ok(out)
    }

    /// Cycle representatives spanning a complement of the boundaries at
    /// an interior degree `k`; their count equals `dim H_k`.
    ///
    /// Candidates come from the kernel basis in its deterministic order,
    /// so the output is reproducible.
    pub fn homology_representatives(&self, k: i64) -> Result<Vec<Vec<Rational>>, GradedError> {
        if k <= self.min_degree || k >= self.max_degree() {
            return Err(GradedError::NotInterior(k));
        }
        let i = self.index_of(k).expect("interior degree");
        let dim_k = self.basis[i].len();
        let cycles = match self.differential_from(k) {
            Some(m) => m.kernel_basis(),
            None => identity_vectors(dim_k),
        };
        let mut span = RowSpace::new(dim_k);
        if let Some(din) = self.differential_into(k) {
            let mut cols: Vec<Vec<Rational>> = vec![vec![Rational::zero(); dim_k]; din.cols()];
            for (r, c, val) in din.iter() {
                cols[c][r] = val.clone();
            }
            for v in cols {
                span.insert(v);
            }
        }
        let mut reps = Vec::new();
        for z in cycles {
            if span.insert(z.clone()) {
                reps.push(z);
            }
        }
        Ok(reps)
    }
}

fn identity_vectors(n: usize) -> Vec<Vec<Rational>> {
    (0..n)
        .map(|i| {
            let mut v = vec![Rational::zero(); n];
            v[i] = Rational::one();
            v
        })
        .collect()
}

/// A polynomial in one variable with `BigInt` coefficients. Trailing
/// zeros are trimmed; zero is the empty coefficient list.
#[derive(Clone, PartialEq, Eq)]
pub struct IntPoly(Vec<BigInt>);

impl IntPoly {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut c = coeffs;
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        IntPoly(c)
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero() -> Self {
        IntPoly(Vec::new())
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    /// The monomial `c t^k`.
    pub fn monomial(c: i64, k: usize) -> Self {
        let mut v = vec![BigInt::zero(); k + 1];
        v[k] = BigInt::from(c);
        Self::new(v)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.0.get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn add(&self, rhs: &IntPoly) -> IntPoly {
        let n = self.0.len().max(rhs.0.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }

    pub fn sub(&self, rhs: &IntPoly) -> IntPoly {
        let n = self.0.len().max(rhs.0.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }

    pub fn mul(&self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly::new(self.0.iter().map(|x| -x).collect())
    }

    pub fn pow(&self, e: usize) -> IntPoly {
        let mut acc = IntPoly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Substitutes `t -> -t`.
    pub fn substitute_neg(&self) -> IntPoly {
        IntPoly::new(
            self.0
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// Substitutes `t -> t^2`.
    pub fn substitute_square(&self) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); 2 * (self.0.len() - 1) + 1];
        for (i, c) in self.0.iter().enumerate() {
            out[2 * i] = c.clone();
        }
        IntPoly::new(out)
    }

    fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.0 {
            g = num_integer::gcd(g, c.clone());
        }
        g
    }

    /// Primitive part with positive leading coefficient.
    fn primitive(&self) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut g = self.content();
        if self.0.last().unwrap().is_negative() {
            g = -g;
        }
        IntPoly::new(self.0.iter().map(|c| c / &g).collect())
    }

    /// Polynomial GCD (primitive, positive leading coefficient) via
    /// rational-coefficient Euclid; the inputs here are always small.
    fn gcd(&self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() {
            return rhs.primitive();
        }
        if rhs.is_zero() {
            return self.primitive();
        }
        let mut a: Vec<Rational> = self
            .0
            .iter()
            .map(|c| Rational::from_integer(c.clone()))
            .collect();
        let mut b: Vec<Rational> = rhs
            .0
            .iter()
            .map(|c| Rational::from_integer(c.clone()))
            .collect();
        while !b.is_empty() {
            poly_rem_in_place(&mut a, &b);
            std::mem::swap(&mut a, &mut b);
        }
        let mut denom_lcm = BigInt::one();
        for c in &a {
            denom_lcm = num_integer::lcm(denom_lcm, c.denom().clone());
        }
        let ints: Vec<BigInt> = a
            .iter()
            .map(|c| c.numer() * &denom_lcm / c.denom())
            .collect();
        IntPoly::new(ints).primitive()
    }

    /// Exact division; panics on a nonzero remainder (only used to divide
    /// out a known common factor).
    fn div_exact(&self, rhs: &IntPoly) -> IntPoly {
        assert!(!rhs.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut rem: Vec<Rational> = self
            .0
            .iter()
            .map(|c| Rational::from_integer(c.clone()))
            .collect();
        let den: Vec<Rational> = rhs
            .0
            .iter()
            .map(|c| Rational::from_integer(c.clone()))
            .collect();
        let mut q = vec![Rational::zero(); self.0.len().saturating_sub(rhs.0.len()) + 1];
        trim_zeros(&mut rem);
        while rem.len() >= den.len() && !rem.is_empty() {
            let shift = rem.len() - den.len();
            let coeff = rem.last().unwrap() / den.last().unwrap();
            q[shift] = coeff.clone();
            for i in 0..den.len() {
                let t = &coeff * &den[i];
                rem[i + shift] -= t;
            }
            trim_zeros(&mut rem);
        }
        assert!(rem.is_empty(), "non-exact polynomial division");
        IntPoly::new(
            q.iter()
                .map(|c| {
                    assert!(c.is_integer(), "non-integer quotient coefficient");
                    c.numer().clone()
                })
                .collect(),
        )
    }
}

fn trim_zeros(v: &mut Vec<Rational>) {
    while v.last().is_some_and(|x| x.is_zero()) {
        v.pop();
    }
}

/// Replaces `a` with `a mod b` (rational coefficients, `b` nonzero).
fn poly_rem_in_place(a: &mut Vec<Rational>, b: &[Rational]) {
    trim_zeros(a);
    while a.len() >= b.len() && !a.is_empty() {
        let shift = a.len() - b.len();
        let coeff = a.last().unwrap() / b.last().unwrap();
        for i in 0..b.len() {
            let t = &coeff * &b[i];
            a[i + shift] -= t;
        }
        trim_zeros(a);
    }
}

fn write_poly(p: &IntPoly, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if p.is_zero() {
        return write!(f, "0");
    }
    let mut first = true;
    for (i, c) in p.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let sign = if c.is_negative() {
            "-"
        } else if first {
            ""
        } else {
            "+"
        };
        let abs = c.abs();
        let body = match (i, abs == BigInt::one()) {
            (0, _) => abs.to_string(),
            (1, true) => "t".to_string(),
            (1, false) => format!("{abs}t"),
            (_, true) => format!("t^{i}"),
            (_, false) => format!("{abs}t^{i}"),
        };
        if first {
            write!(f, "{sign}{body}")?;
            first = false;
        } else {
            write!(f, " {sign} {body}")?;
        }
    }
    Ok(())
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(self, f)
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(self, f)
    }
}

/// A Poincaré series stored exactly as a rational function in lowest
/// terms, with the denominator's constant term normalised to `+1` so an
/// integer power-series expansion always exists.
#[derive(Clone, PartialEq, Eq)]
pub struct PoincareSeries {
    numerator: IntPoly,
    denominator: IntPoly,
}

impl PoincareSeries {
    pub fn new(numerator: IntPoly, denominator: IntPoly) -> Result<Self, GradedError> {
        if denominator.coeff(0).is_zero() {
            return Err(GradedError::ZeroDenominatorConstant);
        }
        let mut num = numerator;
        let mut den = denominator;
        if num.is_zero() {
            den = IntPoly::one();
        } else {
            let g = num.gcd(&den);
            if g.degree().is_some_and(|d| d > 0) {
                num = num.div_exact(&g);
                den = den.div_exact(&g);
            }
            let cg = num_integer::gcd(num.content(), den.content());
            if cg > BigInt::one() {
                num = IntPoly::new(num.coeffs().iter().map(|c| c / &cg).collect());
                den = IntPoly::new(den.coeffs().iter().map(|c| c / &cg).collect());
            }
        }
        if den.coeff(0).is_negative() {
            num = num.neg();
            den = den.neg();
        }
        let c0 = den.coeff(0);
        if c0 != BigInt::one() {
            return Err(GradedError::NonUnitDenominatorConstant(c0));
        }
        Ok(PoincareSeries {
            numerator: num,
            denominator: den,
        })
    }

    pub fn from_polynomial(p: IntPoly) -> Self {
        PoincareSeries {
            numerator: p,
            denominator: IntPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_polynomial(IntPoly::one())
    }

    pub fn zero() -> Self {
        Self::from_polynomial(IntPoly::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn numerator(&self) -> &IntPoly {
        &self.numerator
    }

    pub fn denominator(&self) -> &IntPoly {
        &self.denominator
    }

    pub fn mul(&self, rhs: &PoincareSeries) -> Result<PoincareSeries, GradedError> {
        PoincareSeries::new(
            self.numerator.mul(&rhs.numerator),
            self.denominator.mul(&rhs.denominator),
        )
    }

    pub fn div(&self, rhs: &PoincareSeries) -> Result<PoincareSeries, GradedError> {
        if rhs.is_zero() {
            return Err(GradedError::DivisionByZero);
        }
        PoincareSeries::new(
            self.numerator.mul(&rhs.denominator),
            self.denominator.mul(&rhs.numerator),
        )
    }

    pub fn add(&self, rhs: &PoincareSeries) -> Result<PoincareSeries, GradedError> {
        PoincareSeries::new(
            self.numerator
                .mul(&rhs.denominator)
                .add(&rhs.numerator.mul(&self.denominator)),
            self.denominator.mul(&rhs.denominator),
        )
    }

    pub fn sub(&self, rhs: &PoincareSeries) -> Result<PoincareSeries, GradedError> {
        self.add(&PoincareSeries {
            numerator: rhs.numerator.neg(),
            denominator: rhs.denominator.clone(),
        })
    }

    /// Substitutes `t -> -t`.
    pub fn substitute_neg(&self) -> PoincareSeries {
        PoincareSeries::new(
            self.numerator.substitute_neg(),
            self.denominator.substitute_neg(),
        )
        .expect("sign substitution keeps the constant term a unit")
    }

    /// Substitutes `t -> t^2`.
    pub fn substitute_square(&self) -> PoincareSeries {
        PoincareSeries::new(
            self.numerator.substitute_square(),
            self.denominator.substitute_square(),
        )
        .expect("square substitution keeps the constant term a unit")
    }

    /// Exact power-series coefficients `c_0..=c_n` by long division.
    pub fn expand(&self, n: usize) -> Vec<BigInt> {
        debug_assert!(self.denominator.coeff(0) == BigInt::one());
        let mut c: Vec<BigInt> = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut acc = self.numerator.coeff(k);
            for j in 1..=k {
                let dj = self.denominator.coeff(j);
                if !dj.is_zero() {
                    acc -= dj * &c[k - j];
                }
            }
            c.push(acc);
        }
        c
    }
}

impl fmt::Display for PoincareSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator == IntPoly::one() {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "({}) / ({})", self.numerator, self.denominator)
        }
    }
}

impl fmt::Debug for PoincareSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}) / ({:?})", self.numerator, self.denominator)
    }
}
