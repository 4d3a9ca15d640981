//! Loop-space homology: the cobar construction on the Stanley-Reisner
//! coalgebra `Q<K>`, whose homology is the rational Pontrjagin ring of
//! the loop space of the Davis-Januszkiewicz space; the quadratic-dual
//! comparison algebra (a graph product of rank-one exterior algebras);
//! flag-complex series identities; and higher-commutator detection.
//!
//! The cobar differential preserves the Z^m multidegree that counts the
//! total exponent of each vertex across a word's letters, so windows
//! split into finite multidegree blocks that are computed independently.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::complex::SimplicialComplex;
use crate::exactlin::{rat, Rational};
use crate::facering::{sr_basis, sr_coproduct, sr_poincare_series, GradingConvention, Monomial};
use crate::graded::{ChainComplexWindow, Direction, GradedError, IntPoly, PoincareSeries};
use crate::par;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CobarError {
    #[error("generator must have a nonzero exponent vector")]
    ZeroGenerator,
    #[error("generator support {0:?} is not a face of the complex")]
    SupportNotFace(Vec<usize>),
    #[error("generator has {got} exponents but the complex has {expected} vertices")]
    WrongLength { got: usize, expected: usize },
    #[error(
        "word basis in degree {degree} needs {needed} words, beyond the cap of {cap}; \
         raise the word cap to continue"
    )]
    WordCapExceeded {
        degree: usize,
        needed: u128,
        cap: usize,
    },
    #[error("the complex is not flag, so the quadratic-dual formula does not apply")]
    NotFlag,
    #[error("word count overflowed the 128-bit accumulator at degree {0}")]
    CountOverflow(usize),
    #[error("series coefficient at degree {degree} is negative ({value}); inconsistent input")]
    NegativeCoefficient { degree: usize, value: BigInt },
    #[error("series is not of PBW type: extracted rank at degree {degree} is {value}")]
    NotPbw { degree: usize, value: BigInt },
    #[error("series must start with constant term 1")]
    BadConstantTerm,
    #[error(transparent)]
    Graded(#[from] GradedError),
}

/// A cobar generator `χ_a`: the desuspension of a dual basis element of
/// the Stanley-Reisner coalgebra, with `a` a nonzero exponent vector
/// whose support is a face. Its homological degree is `2|a| - 1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CobarGenerator {
    monomial: Monomial,
}

impl CobarGenerator {
    pub fn new(k: &SimplicialComplex, monomial: Monomial) -> Result<Self, CobarError> {
        if monomial.len() != k.vertex_count() {
            return Err(CobarError::WrongLength {
                got: monomial.len(),
                expected: k.vertex_count(),
            });
        }
        if monomial.is_unit() {
            return Err(CobarError::ZeroGenerator);
        }
        if !k.is_face_mask(monomial.support_mask()) {
            return Err(CobarError::SupportNotFace(monomial.support()));
        }
        Ok(CobarGenerator { monomial })
    }

    /// `χ` on a single vertex or a set of distinct vertices.
    pub fn from_vertices(k: &SimplicialComplex, vertices: &[usize]) -> Result<Self, CobarError> {
        Self::new(k, Monomial::from_face(vertices, k.vertex_count()))
    }

    pub fn monomial(&self) -> &Monomial {
        &self.monomial
    }

    pub fn degree(&self) -> usize {
        2 * self.monomial.total() as usize - 1
    }
}

/// A word in cobar generators; the basis of the tensor algebra underlying
/// the cobar construction. The empty word is the unit.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TensorWord {
    letters: Vec<CobarGenerator>,
}

impl TensorWord {
    pub fn new(letters: Vec<CobarGenerator>) -> Self {
        TensorWord { letters }
    }

    pub fn unit() -> Self {
        TensorWord {
            letters: Vec::new(),
        }
    }

    pub fn letters(&self) -> &[CobarGenerator] {
        &self.letters
    }

    pub fn degree(&self) -> usize {
        self.letters.iter().map(|l| l.degree()).sum()
    }
}

/// Splittings of a generator: every ordered pair `(b, c)` of nonzero
/// monomials with `b + c = a`. Supports stay inside `K` by downward
/// closure, and every coproduct coefficient is `+1`.
fn generator_splittings(
    k: &SimplicialComplex,
    a: &Monomial,
) -> Result<Vec<(Monomial, Monomial)>, CobarError> {
    let terms = sr_coproduct(k, a).map_err(|_| CobarError::SupportNotFace(a.support()))?;
    Ok(terms
        .into_iter()
        .filter(|(b, c)| !b.is_unit() && !c.is_unit())
        .collect())
}

/// The cobar differential, extended to words by the graded Leibniz rule
/// `d(x ⊗ y) = dx ⊗ y + (-1)^{deg x} x ⊗ dy`. On a generator every
/// splitting appears with coefficient `+1`; since every letter has odd
/// degree, splitting the letter at 0-based position `i` contributes the
/// sign `(-1)^i`.
pub fn cobar_d(
    k: &SimplicialComplex,
    w: &TensorWord,
) -> Result<Vec<(TensorWord, i64)>, CobarError> {
    let mut acc: BTreeMap<TensorWord, i64> = BTreeMap::new();
    for (i, letter) in w.letters.iter().enumerate() {
        let sign = if i % 2 == 0 { 1 } else { -1 };
        for (b, c) in generator_splittings(k, letter.monomial())? {
            let mut letters = Vec::with_capacity(w.letters.len() + 1);
            letters.extend_from_slice(&w.letters[..i]);
            letters.push(CobarGenerator { monomial: b });
            letters.push(CobarGenerator { monomial: c });
            letters.extend_from_slice(&w.letters[i + 1..]);
            *acc.entry(TensorWord { letters }).or_insert(0) += sign;
        }
    }
    Ok(acc.into_iter().filter(|(_, c)| *c != 0).collect())
}

/// Tunables for cobar windows.
#[derive(Clone, Copy, Debug)]
pub struct CobarOptions {
    /// Hard cap on the number of words in any single homological degree;
    /// exceeding it is an explicit error, never a silent truncation.
    pub word_cap: usize,
}

impl Default for CobarOptions {
    fn default() -> Self {
        CobarOptions { word_cap: 200_000 }
    }
}

/// Interned generator table for one window computation.
struct GeneratorTable {
    monomials: Vec<Monomial>,
    splittings: Vec<Vec<(u32, u32)>>,
    totals: Vec<u32>,
}

impl GeneratorTable {
    fn build(k: &SimplicialComplex, max_total: u32) -> Self {
        let mut monomials = Vec::new();
        for t in 1..=max_total {
            monomials.extend(sr_basis(k, t));
        }
        let id_of: HashMap<&Monomial, u32> = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m, i as u32))
            .collect();
        let mut splittings = Vec::with_capacity(monomials.len());
        for a in &monomials {
            let pairs = generator_splittings(k, a).expect("basis monomials are valid");
            splittings.push(
                pairs
                    .into_iter()
                    .map(|(b, c)| (id_of[&b], id_of[&c]))
                    .collect::<Vec<(u32, u32)>>(),
            );
        }
        let totals = monomials.iter().map(|m| m.total()).collect();
        GeneratorTable {
            monomials,
            splittings,
            totals,
        }
    }
}

/// One multidegree block of a cobar window: all words whose letter
/// exponents sum to `multidegree`, sliced by homological degree.
struct CobarBlock {
    multidegree: Vec<u32>,
    /// generator ids usable inside this block
    gens: Vec<u32>,
    /// total exponent weight
    weight: u32,
}

impl CobarBlock {
    fn new(table: &GeneratorTable, multidegree: Vec<u32>) -> Self {
        let gens = (0..table.monomials.len() as u32)
            .filter(|&g| {
                table.monomials[g as usize]
                    .exponents()
                    .iter()
                    .zip(&multidegree)
                    .all(|(a, b)| a <= b)
            })
            .collect();
        let weight = multidegree.iter().sum();
        CobarBlock {
            multidegree,
            gens,
            weight,
        }
    }

    /// Word lengths and degrees populated inside the window cut at
    /// `max_window_degree`: length `ℓ` sits in degree `2s - ℓ`.
    fn length_range(&self, max_window_degree: usize) -> (usize, usize) {
        let s = self.weight as usize;
        let len_min = if 2 * s > max_window_degree {
            2 * s - max_window_degree
        } else {
            1
        };
        (len_min, s)
    }

    /// Exact word counts per length, by dynamic programming over the
    /// sub-multidegrees; no enumeration.
    fn word_counts(&self, table: &GeneratorTable, max_window_degree: usize) -> Vec<(usize, u128)> {
        let (len_min, len_max) = self.length_range(max_window_degree);
        let m = self.multidegree.len();
        // mixed-radix indexing of sub-multidegrees v <= multidegree
        let mut strides = Vec::with_capacity(m);
        let mut states = 1usize;
        for &e in &self.multidegree {
            strides.push(states);
            states *= e as usize + 1;
        }
        // sub-multidegrees in index order (odometer on the least
        // significant coordinate first)
        let mut subs: Vec<Vec<u32>> = Vec::with_capacity(states);
        let mut cur = vec![0u32; m];
        loop {
            subs.push(cur.clone());
            let mut i = 0;
            while i < m && cur[i] == self.multidegree[i] {
                cur[i] = 0;
                i += 1;
            }
            if i == m {
                break;
            }
            cur[i] += 1;
        }
        debug_assert_eq!(subs.len(), states);
        let gen_steps: Vec<(usize, &[u32])> = self
            .gens
            .iter()
            .map(|&g| {
                let ge = table.monomials[g as usize].exponents();
                let off: usize = ge
                    .iter()
                    .zip(&strides)
                    .map(|(&x, &st)| x as usize * st)
                    .sum();
                (off, ge)
            })
            .collect();
        let full = states - 1;
        let mut current = vec![0u128; states];
        current[0] = 1;
        let mut out = Vec::new();
        for len in 1..=len_max {
            let mut next = vec![0u128; states];
            for (si, v) in subs.iter().enumerate() {
                if current[si] == 0 {
                    continue;
                }
                'gens: for &(off, ge) in &gen_steps {
                    for i in 0..m {
                        if v[i] + ge[i] > self.multidegree[i] {
                            continue 'gens;
                        }
                    }
                    next[si + off] = next[si + off].saturating_add(current[si]);
                }
            }
            if len >= len_min {
                out.push((2 * self.weight as usize - len, next[full]));
            }
            current = next;
        }
        out
    }

    /// Enumerates words grouped by length within the window.
    fn enumerate_words(
        &self,
        table: &GeneratorTable,
        max_window_degree: usize,
    ) -> Vec<(usize, Vec<Vec<u32>>)> {
        let (len_min, len_max) = self.length_range(max_window_degree);
        struct Ctx<'a> {
            gens: &'a [u32],
            table: &'a GeneratorTable,
            len_min: usize,
            len_max: usize,
        }
        fn dfs(
            ctx: &Ctx,
            word: &mut Vec<u32>,
            remaining: &mut [u32],
            remaining_total: u32,
            by_len: &mut [Vec<Vec<u32>>],
        ) {
            if remaining_total == 0 {
                if word.len() >= ctx.len_min {
                    by_len[word.len()].push(word.clone());
                }
                return;
            }
            if word.len() == ctx.len_max {
                return;
            }
            'gens: for &g in ctx.gens {
                let ge = ctx.table.monomials[g as usize].exponents();
                let gt = ctx.table.totals[g as usize];
                if gt > remaining_total {
                    continue;
                }
                for (i, &x) in ge.iter().enumerate() {
                    if x > remaining[i] {
                        continue 'gens;
                    }
                }
                for (i, &x) in ge.iter().enumerate() {
                    remaining[i] -= x;
                }
                word.push(g);
                dfs(ctx, word, remaining, remaining_total - gt, by_len);
                word.pop();
                for (i, &x) in ge.iter().enumerate() {
                    remaining[i] += x;
                }
            }
        }
        let ctx = Ctx {
            gens: &self.gens,
            table,
            len_min,
            len_max,
        };
        let mut word = Vec::with_capacity(len_max);
        let mut remaining = self.multidegree.clone();
        let mut by_len: Vec<Vec<Vec<u32>>> = vec![Vec::new(); len_max + 1];
        dfs(&ctx, &mut word, &mut remaining, self.weight, &mut by_len);
        let s = self.weight as usize;
        (len_min..=len_max)
            .map(|l| (2 * s - l, std::mem::take(&mut by_len[l])))
            .collect()
    }

    /// Builds the chain-complex window of this block, padded so that
    /// every reportable degree is interior.
    fn window(
        &self,
        table: &GeneratorTable,
        max_window_degree: usize,
    ) -> ChainComplexWindow<Vec<u32>> {
        let (len_min, _) = self.length_range(max_window_degree);
        let mut layers = self.enumerate_words(table, max_window_degree);
        // ascending homological degree = descending length
        layers.sort_by_key(|(deg, _)| *deg);
        let s = self.weight as usize;
        let min_degree = s as i64 - 1;
        let mut basis: Vec<Vec<Vec<u32>>> = vec![Vec::new()];
        basis.extend(layers.iter().map(|(_, words)| words.clone()));
        if len_min == 1 {
            // block complete at the top: no incoming differential there
            basis.push(Vec::new());
        }
        let index: Vec<HashMap<Vec<u32>, usize>> = basis
            .iter()
            .map(|layer| {
                layer
                    .iter()
                    .enumerate()
                    .map(|(i, w)| (w.clone(), i))
                    .collect()
            })
            .collect();
        let basis_for_closure = basis.clone();
        ChainComplexWindow::build(
            Direction::Homological,
            min_degree,
            basis,
            move |deg, idx| {
                let layer = (deg - min_degree) as usize;
                let w = &basis_for_closure[layer][idx];
                let target = &index[layer - 1];
                differentiate_interned(table, w)
                    .into_iter()
                    .map(|(t, sign)| (target[&t], rat(sign)))
                    .collect()
            },
        )
    }
}

fn block_multidegrees(m: usize, max_weight: u32) -> Vec<Vec<u32>> {
    fn go(m: usize, left: u32, buf: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if buf.len() == m {
            if buf.iter().any(|&x| x > 0) {
                out.push(buf.clone());
            }
            return;
        }
        for x in 0..=left {
            buf.push(x);
            go(m, left - x, buf, out);
            buf.pop();
        }
    }
    let mut out = Vec::new();
    go(m, max_weight, &mut Vec::with_capacity(m), &mut out);
    out
}

/// Shared plumbing: the generator table and the nonempty blocks of the
/// cobar window up to `max_degree + 1`.
struct CobarWindowPlan {
    table: GeneratorTable,
    blocks: Vec<CobarBlock>,
    max_window_degree: usize,
}

impl CobarWindowPlan {
    fn new(k: &SimplicialComplex, max_degree: usize) -> Self {
        let max_window_degree = max_degree + 1;
        // blocks of weight > max_degree only populate degrees above the
        // reporting range, and nothing maps from them into it
        let max_weight = max_degree as u32;
        let table = GeneratorTable::build(k, max_weight);
        let blocks: Vec<CobarBlock> = block_multidegrees(k.vertex_count(), max_weight)
            .into_iter()
            .map(|e| CobarBlock::new(&table, e))
            .filter(|b| !b.gens.is_empty())
            .collect();
        CobarWindowPlan {
            table,
            blocks,
            max_window_degree,
        }
    }

    /// Word counts per degree over all blocks; errors when any degree
    /// exceeds the cap, naming the smallest failing degree.
    fn check_cap(&self, opts: &CobarOptions) -> Result<(), CobarError> {
        let counts = par::map_collect((0..self.blocks.len()).collect::<Vec<_>>(), |i| {
            self.blocks[i].word_counts(&self.table, self.max_window_degree)
        });
        let mut per_degree: BTreeMap<usize, u128> = BTreeMap::new();
        for block in counts {
            for (deg, n) in block {
                let e = per_degree.entry(deg).or_insert(0);
                *e = e.saturating_add(n);
            }
        }
        for (&deg, &n) in &per_degree {
            if n > opts.word_cap as u128 {
                return Err(CobarError::WordCapExceeded {
                    degree: deg,
                    needed: n,
                    cap: opts.word_cap,
                });
            }
        }
        Ok(())
    }
}

/// Homology dimensions of the cobar construction in degrees
/// `0..=max_degree`: the additive rational Pontrjagin ring data of the
/// loop space of the Davis-Januszkiewicz space.
pub fn loop_homology(
    k: &SimplicialComplex,
    max_degree: usize,
    opts: &CobarOptions,
) -> Result<BTreeMap<usize, usize>, CobarError> {
    let plan = CobarWindowPlan::new(k, max_degree);
    plan.check_cap(opts)?;
    let dims_per_block = par::map_collect((0..plan.blocks.len()).collect::<Vec<_>>(), |i| {
        let w = plan.blocks[i].window(&plan.table, plan.max_window_degree);
        w.homology_dims()
            .expect("padded block windows have interior degrees")
            .into_iter()
            .filter(|&(deg, dim)| dim > 0 && deg >= 0 && (deg as usize) <= max_degree)
            .collect::<Vec<_>>()
    });
    let mut out: BTreeMap<usize, usize> = (0..=max_degree).map(|d| (d, 0)).collect();
    out.insert(0, 1); // the unit of the tensor algebra
    for block in dims_per_block {
        for (deg, dim) in block {
            *out.get_mut(&(deg as usize)).unwrap() += dim;
        }
    }
    Ok(out)
}

/// Cycle representatives for the cobar homology in one degree, as linear
/// combinations of tensor words; the list is deterministic and its
/// length is `dim H_degree`.
pub fn loop_homology_representatives(
    k: &SimplicialComplex,
    degree: usize,
    opts: &CobarOptions,
) -> Result<Vec<Vec<(TensorWord, Rational)>>, CobarError> {
    if degree == 0 {
        return Ok(vec![vec![(TensorWord::unit(), rat(1))]]);
    }
    let plan = CobarWindowPlan::new(k, degree);
    plan.check_cap(opts)?;
    let mut reps = Vec::new();
    for block in &plan.blocks {
        let s = block.weight as usize;
        if s > degree || 2 * s - 1 < degree {
            continue;
        }
        let w = block.window(&plan.table, plan.max_window_degree);
        let words = w.basis_at(degree as i64).to_vec();
        for vec in w.homology_representatives(degree as i64)? {
            let combo: Vec<(TensorWord, Rational)> = vec
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| {
                    let letters = words[i]
                        .iter()
                        .map(|&g| CobarGenerator {
                            monomial: plan.table.monomials[g as usize].clone(),
                        })
                        .collect();
                    (TensorWord::new(letters), c.clone())
                })
                .collect();
            reps.push(combo);
        }
    }
    Ok(reps)
}

/// Differential of an interned word: splittings of each letter with the
/// alternating Leibniz sign.
fn differentiate_interned(table: &GeneratorTable, w: &[u32]) -> Vec<(Vec<u32>, i64)> {
    let mut out = Vec::new();
    for (i, &g) in w.iter().enumerate() {
        let sign = if i % 2 == 0 { 1 } else { -1 };
        for &(b, c) in &table.splittings[g as usize] {
            let mut t = Vec::with_capacity(w.len() + 1);
            t.extend_from_slice(&w[..i]);
            t.push(b);
            t.push(c);
            t.extend_from_slice(&w[i + 1..]);
            out.push((t, sign));
        }
    }
    out
}

/// `d∘d = 0` check for the cobar window, block by block. The composite
/// is expanded symbolically word by word (one column of the composite
/// matrix at a time), so nothing large is ever materialised. Returns
/// failing block descriptions, empty on success.
pub fn cobar_d_squared_failures(
    k: &SimplicialComplex,
    max_degree: usize,
    opts: &CobarOptions,
) -> Result<Vec<String>, CobarError> {
    let plan = CobarWindowPlan::new(k, max_degree);
    plan.check_cap(opts)?;
    let failures = par::map_collect((0..plan.blocks.len()).collect::<Vec<_>>(), |i| {
        let block = &plan.blocks[i];
        let layers = block.enumerate_words(&plan.table, plan.max_window_degree);
        let mut acc: HashMap<Vec<u32>, i64> = HashMap::new();
        for (_, words) in &layers {
            for w in words {
                acc.clear();
                for (t1, c1) in differentiate_interned(&plan.table, w) {
                    for (t2, c2) in differentiate_interned(&plan.table, &t1) {
                        *acc.entry(t2).or_insert(0) += c1 * c2;
                    }
                }
                if acc.values().any(|&c| c != 0) {
                    return Some(format!("cobar block {:?}", block.multidegree));
                }
            }
        }
        None
    });
    Ok(failures.into_iter().flatten().collect())
}

/// Letters of the graph-product algebra: the non-ghost vertices.
fn graph_letters(k: &SimplicialComplex) -> Vec<usize> {
    (1..=k.vertex_count())
        .filter(|&v| k.is_face(&[v]))
        .collect()
}

fn is_edge(k: &SimplicialComplex, a: usize, b: usize) -> bool {
    a != b && k.is_face(&[a, b])
}

/// All nonempty cliques of the 1-skeleton (sets of pairwise anticommuting
/// letters), as bitmasks over vertex labels.
fn skeleton_cliques(k: &SimplicialComplex) -> Vec<u64> {
    let letters = graph_letters(k);
    let mut cliques: Vec<u64> = Vec::new();
    let mut stack: Vec<(u64, usize)> = letters.iter().map(|&v| (1u64 << (v - 1), v)).collect();
    while let Some((mask, last)) = stack.pop() {
        cliques.push(mask);
        for &v in letters.iter().filter(|&&v| v > last) {
            if (0..64)
                .filter(|i| mask >> i & 1 == 1)
                .all(|i| is_edge(k, i + 1, v))
            {
                stack.push((mask | 1 << (v - 1), v));
            }
        }
    }
    cliques.sort_unstable();
    cliques
}

/// Dimensions of `T(U)/(u_i^2 = 0, u_i u_j + u_j u_i = 0 for edges)` per
/// degree, counted through normal-form words. Depends only on the
/// 1-skeleton.
///
/// A normal word is a clique factorization `C_1 C_2 ... C_r` (each
/// clique written in increasing order) in which every letter of
/// `C_{i+1}` fails to anticommute past `C_i`: it has a non-edge in `C_i`
/// and does not occur in `C_i` itself (an occurrence in consecutive
/// cliques collapses to a square, which is zero). Local adjacent-pair
/// rewriting alone is not confluent, so counting is done over these
/// factorizations.
pub fn graph_product_dims(
    k: &SimplicialComplex,
    max_degree: usize,
) -> Result<Vec<u128>, CobarError> {
    let letters = graph_letters(k);
    let mut dims = vec![0u128; max_degree + 1];
    dims[0] = 1;
    if max_degree == 0 || letters.is_empty() {
        return Ok(dims);
    }
    let cliques = skeleton_cliques(k);
    let sizes: Vec<usize> = cliques.iter().map(|c| c.count_ones() as usize).collect();
    // nonedge_mask[v]: letters that block v from sliding left past a clique
    let mut nonedge_mask = vec![0u64; k.vertex_count() + 1];
    for &v in &letters {
        for &w in &letters {
            if v != w && !is_edge(k, v, w) {
                nonedge_mask[v] |= 1 << (w - 1);
            }
        }
    }
    let allowed = |from: u64, to: u64| -> bool {
        if from & to != 0 {
            return false;
        }
        (0..64)
            .filter(|i| to >> i & 1 == 1)
            .all(|i| nonedge_mask[i + 1] & from != 0)
    };
    // ways[len][ci]: factorizations of total size len ending in clique ci
    let mut ways: Vec<Vec<u128>> = vec![vec![0; cliques.len()]; max_degree + 1];
    for deg in 1..=max_degree {
        for (ci, &c) in cliques.iter().enumerate() {
            if sizes[ci] > deg {
                continue;
            }
            let mut acc: u128 = if sizes[ci] == deg { 1 } else { 0 };
            let prev = deg - sizes[ci];
            if prev > 0 {
                for (cj, &cfrom) in cliques.iter().enumerate() {
                    if ways[prev][cj] > 0 && allowed(cfrom, c) {
                        acc = acc
                            .checked_add(ways[prev][cj])
                            .ok_or(CobarError::CountOverflow(deg))?;
                    }
                }
            }
            ways[deg][ci] = acc;
        }
        let mut total: u128 = 0;
        for &w in &ways[deg] {
            total = total.checked_add(w).ok_or(CobarError::CountOverflow(deg))?;
        }
        dims[deg] = total;
    }
    Ok(dims)
}

/// Rewrites a word in the graph-product letters to its canonical clique
/// factorization, tracking the sign of the anticommuting swaps; returns
/// `None` when the word is zero (two equal letters separated only by
/// letters anticommuting with them).
pub fn normalize_graph_word(k: &SimplicialComplex, letters: &[usize]) -> Option<(i64, Vec<usize>)> {
    // stack each letter into the earliest clique after its last blocker
    let mut cliques: Vec<Vec<(usize, usize)>> = Vec::new();
    for (orig, &x) in letters.iter().enumerate() {
        let mut place = 0;
        for (ci, c) in cliques.iter().enumerate().rev() {
            if c.iter().any(|&(y, _)| y == x || !is_edge(k, x, y)) {
                place = ci + 1;
                break;
            }
        }
        if place == cliques.len() {
            cliques.push(Vec::new());
        }
        cliques[place].push((x, orig));
    }
    // a letter shared by consecutive cliques collapses to a square
    for pair in cliques.windows(2) {
        for &(y, _) in &pair[1] {
            if pair[0].iter().any(|&(z, _)| z == y) {
                return None;
            }
        }
    }
    let mut flat: Vec<(usize, usize)> = Vec::with_capacity(letters.len());
    for c in &mut cliques {
        c.sort_unstable();
        flat.extend_from_slice(c);
    }
    // every crossed pair anticommutes, so the sign is the inversion parity
    let mut inversions = 0usize;
    for i in 0..flat.len() {
        for j in i + 1..flat.len() {
            if flat[i].1 > flat[j].1 {
                inversions += 1;
            }
        }
    }
    let sign = if inversions.is_multiple_of(2) { 1 } else { -1 };
    Some((sign, flat.into_iter().map(|(x, _)| x).collect()))
}

/// The loop-space Poincaré series for a flag complex, from the h-vector:
/// `(1+t)^n / (1 - h_1 t + h_2 t^2 - ... + (-1)^n h_n t^n)`.
pub fn flag_loop_series(k: &SimplicialComplex) -> Result<PoincareSeries, CobarError> {
    if !k.is_flag() {
        return Err(CobarError::NotFlag);
    }
    let fh = k.f_h_vectors();
    let n = fh.n;
    let num = IntPoly::from_i64(&[1, 1]).pow(n);
    let den = IntPoly::new(
        fh.h.iter()
            .enumerate()
            .map(|(i, &hi)| {
                let c = BigInt::from(hi);
                if i % 2 == 1 {
                    -c
                } else {
                    c
                }
            })
            .collect(),
    );
    Ok(PoincareSeries::new(num, den)?)
}

/// Checks the identity `F(Q[K]; -t) * F(H_*(ΩDJ(K)); t) = 1` exactly up
/// to `t^n`, for flag complexes.
pub fn froberg_check(k: &SimplicialComplex, n: usize) -> Result<bool, CobarError> {
    let flag_series = flag_loop_series(k)?;
    let face_series = sr_poincare_series(k, GradingConvention::VertexDegreeOne).substitute_neg();
    let product = face_series.mul(&flag_series)?;
    let coeffs = product.expand(n);
    Ok(coeffs[0] == BigInt::one() && coeffs[1..].iter().all(|c| c.is_zero()))
}

/// First degree (up to `max_degree`) where the cobar homology exceeds
/// the graph-product dimensions, with the excess; `None` when they agree
/// everywhere tested, as they must for flag complexes.
pub fn flag_divergence(
    k: &SimplicialComplex,
    max_degree: usize,
    opts: &CobarOptions,
) -> Result<Option<(usize, u128)>, CobarError> {
    let loop_dims = loop_homology(k, max_degree, opts)?;
    let graph_dims = graph_product_dims(k, max_degree)?;
    for (deg, &g) in graph_dims.iter().enumerate() {
        let l = loop_dims.get(&deg).copied().unwrap_or(0) as u128;
        if l > g {
            return Ok(Some((deg, l - g)));
        }
    }
    Ok(None)
}

/// Expansion of `F(H_*(ΩZ_K); t) = F_flag(t) / (1+t)^m` to order `n`,
/// using the splitting of the loop space off the torus; coefficients
/// must be non-negative integers since they are dimensions.
pub fn omega_zk_series(k: &SimplicialComplex, n: usize) -> Result<Vec<BigInt>, CobarError> {
    let flag_series = flag_loop_series(k)?;
    let torus = PoincareSeries::from_polynomial(IntPoly::from_i64(&[1, 1]).pow(k.vertex_count()));
    let series = flag_series.div(&torus)?;
    let coeffs = series.expand(n);
    for (deg, c) in coeffs.iter().enumerate() {
        if c.is_negative() {
            return Err(CobarError::NegativeCoefficient {
                degree: deg,
                value: c.clone(),
            });
        }
    }
    Ok(coeffs)
}

/// Solves the PBW factorization
/// `F(t) = Π_{k odd} (1+t^k)^{l_k} · Π_{k even} (1-t^k)^{-l_k}`
/// for the ranks `l_k`, degree by degree up to `n`. The input is the
/// coefficient list of a series with constant term 1.
pub fn lie_ranks(coeffs: &[BigInt], n: usize) -> Result<BTreeMap<usize, BigInt>, CobarError> {
    if coeffs.first().is_none_or(|c| *c != BigInt::one()) {
        return Err(CobarError::BadConstantTerm);
    }
    let top = n.min(coeffs.len().saturating_sub(1));
    let mut residual: Vec<BigInt> = coeffs[..=top].to_vec();
    let mut ranks = BTreeMap::new();
    for deg in 1..=top {
        let l = residual[deg].clone();
        if l.is_negative() {
            return Err(CobarError::NotPbw {
                degree: deg,
                value: l,
            });
        }
        if !l.is_zero() {
            if deg % 2 == 1 {
                // divide by (1+t^deg)^l, truncated
                let factor = binomial_poly(&l, deg, top, false);
                residual = truncated_div(&residual, &factor, top);
            } else {
                // multiply by (1-t^deg)^l, truncated
                let factor = binomial_poly(&l, deg, top, true);
                residual = truncated_mul(&residual, &factor, top);
            }
        }
        ranks.insert(deg, l);
    }
    Ok(ranks)
}

/// Reassembles the truncated series from PBW ranks; inverse of
/// [`lie_ranks`] on series of PBW type.
pub fn pbw_series(ranks: &BTreeMap<usize, BigInt>, n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n + 1];
    out[0] = BigInt::one();
    for (&deg, l) in ranks {
        if deg > n || l.is_zero() {
            continue;
        }
        let factor = binomial_poly(l, deg, n, deg % 2 == 0);
        if deg % 2 == 1 {
            out = truncated_mul(&out, &factor, n);
        } else {
            out = truncated_div(&out, &factor, n);
        }
    }
    out
}

/// `(1 ± t^k)^l` truncated at `t^top`: coefficients `(∓1)^j C(l, j)` at
/// `t^{jk}`; `minus` selects `(1 - t^k)^l`.
fn binomial_poly(l: &BigInt, k: usize, top: usize, minus: bool) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); top + 1];
    let mut c = BigInt::one();
    let mut j = 0usize;
    while j * k <= top {
        let coeff = if minus && j % 2 == 1 { -&c } else { c.clone() };
        out[j * k] = coeff;
        // next binomial coefficient C(l, j+1) = C(l, j) * (l - j) / (j+1)
        let jj = BigInt::from(j as u64);
        c = c * (l - &jj) / (jj + BigInt::one());
        if c.is_zero() {
            break;
        }
        j += 1;
    }
    out
}

fn truncated_mul(a: &[BigInt], b: &[BigInt], top: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); top + 1];
    for i in 0..=top.min(a.len() - 1) {
        if a[i].is_zero() {
            continue;
        }
        for j in 0..=(top - i).min(b.len() - 1) {
            if !b[j].is_zero() {
                out[i + j] += &a[i] * &b[j];
            }
        }
    }
    out
}

/// Truncated division by a series with constant term 1.
fn truncated_div(a: &[BigInt], b: &[BigInt], top: usize) -> Vec<BigInt> {
    debug_assert!(b[0] == BigInt::one());
    let mut out = vec![BigInt::zero(); top + 1];
    for kdeg in 0..=top {
        let mut acc = if kdeg < a.len() {
            a[kdeg].clone()
        } else {
            BigInt::zero()
        };
        for j in 1..=kdeg.min(b.len() - 1) {
            if !b[j].is_zero() {
                acc -= &b[j] * &out[kdeg - j];
            }
        }
        out[kdeg] = acc;
    }
    out
}
