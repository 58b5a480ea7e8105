//! Exact sparse linear algebra over the rationals.
//!
//! Matrices are stored column-major. Elimination clears denominators per
//! column and works fraction-free over the integers, dividing out the
//! content after every step. Pivots are chosen deterministically: columns
//! are processed left to right and a column that survives reduction pivots
//! on its smallest row.

use std::collections::HashMap;
use std::io::{self, Write};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::cochain::Rational;
use crate::error::{Error, Result};

/// Sorted `(index, value)` pairs without zeros.
pub type SparseVec = Vec<(usize, Rational)>;

type IntCol = Vec<(usize, BigInt)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    cols: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SparseMatrix { nrows, ncols, cols: vec![Vec::new(); ncols] }
    }

    pub fn identity(n: usize) -> Self {
        let cols = (0..n).map(|i| vec![(i, Rational::one())]).collect();
        SparseMatrix { nrows: n, ncols: n, cols }
    }

    /// An `nrows x 0` matrix to which columns are appended.
    pub fn with_rows(nrows: usize) -> Self {
        SparseMatrix { nrows, ncols: 0, cols: Vec::new() }
    }

    pub fn from_columns(nrows: usize, cols: Vec<SparseVec>) -> Result<Self> {
        let mut m = SparseMatrix::with_rows(nrows);
        for c in cols {
            m.push_column(c)?;
        }
        Ok(m)
    }

    /// Builds from `(row, col, value)` triplets; repeated positions are summed.
    pub fn from_triplets(nrows: usize, ncols: usize, entries: &[(usize, usize, Rational)]) -> Result<Self> {
        let mut cols: Vec<SparseVec> = vec![Vec::new(); ncols];
        for (r, c, v) in entries {
            if *c >= ncols {
                return Err(Error::IndexOutOfRange { index: *c as u64, len: ncols as u64 });
            }
            cols[*c].push((*r, v.clone()));
        }
        let mut m = SparseMatrix::with_rows(nrows);
        for c in cols {
            m.push_column(c)?;
        }
        Ok(m)
    }

    /// Appends a column given in any order; repeated rows are summed and zeros dropped.
    pub fn push_column(&mut self, mut col: SparseVec) -> Result<()> {
        col.sort_by_key(|(r, _)| *r);
        let mut merged: SparseVec = Vec::with_capacity(col.len());
        for (r, v) in col {
            if r >= self.nrows {
                return Err(Error::IndexOutOfRange { index: r as u64, len: self.nrows as u64 });
            }
            match merged.last_mut() {
                Some((lr, lv)) if *lr == r => *lv += v,
                _ => merged.push((r, v)),
            }
        }
        merged.retain(|(_, v)| !v.is_zero());
        self.cols.push(merged);
        self.ncols += 1;
        Ok(())
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn column(&self, j: usize) -> &SparseVec {
        &self.cols[j]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.cols
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    pub fn get(&self, row: usize, col: usize) -> Rational {
        self.cols[col]
            .binary_search_by_key(&row, |(r, _)| *r)
            .map(|k| self.cols[col][k].1.clone())
            .unwrap_or_else(|_| Rational::zero())
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut cols: Vec<SparseVec> = vec![Vec::new(); self.nrows];
        for (j, col) in self.cols.iter().enumerate() {
            for (i, v) in col {
                cols[*i].push((j, v.clone()));
            }
        }
        SparseMatrix { nrows: self.ncols, ncols: self.nrows, cols }
    }

    pub fn mul_vec(&self, v: &SparseVec) -> Result<SparseVec> {
        let mut acc: HashMap<usize, Rational> = HashMap::new();
        for (j, x) in v {
            if *j >= self.ncols {
                return Err(Error::DimensionMismatch { expected: self.ncols, got: *j + 1 });
            }
            for (i, a) in &self.cols[*j] {
                *acc.entry(*i).or_insert_with(Rational::zero) += a * x;
            }
        }
        let mut out: SparseVec = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        out.sort_by_key(|(i, _)| *i);
        Ok(out)
    }

    /// `self * other`.
    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.ncols != other.nrows {
            return Err(Error::DimensionMismatch { expected: self.ncols, got: other.nrows });
        }
        let cols = other.cols.iter().map(|c| self.mul_vec(c)).collect::<Result<Vec<_>>>()?;
        Ok(SparseMatrix { nrows: self.nrows, ncols: other.ncols, cols })
    }

    /// Dumps entries as `row col num/den` lines, column by column.
    pub fn write_triplets<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "# {} {}", self.nrows, self.ncols)?;
        for (j, col) in self.cols.iter().enumerate() {
            for (i, v) in col {
                writeln!(w, "{} {} {}/{}", i, j, v.numer(), v.denom())?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankProfile {
    pub rank: usize,
    pub pivot_cols: Vec<usize>,
    pub kernel_dim: usize,
}

fn to_primitive(col: &SparseVec) -> IntCol {
    let lcm = col.iter().fold(BigInt::one(), |acc, (_, v)| acc.lcm(v.denom()));
    let mut out: IntCol = col.iter().map(|(i, v)| (*i, v.numer() * (&lcm / v.denom()))).collect();
    divide_content(&mut out, None);
    out
}

fn content(col: &IntCol) -> BigInt {
    col.iter().fold(BigInt::zero(), |g, (_, v)| g.gcd(v))
}

/// Divides `col` (and `track`, if given) by their joint content.
fn divide_content(col: &mut IntCol, track: Option<&mut IntCol>) {
    let mut g = content(col);
    if let Some(t) = &track {
        g = g.gcd(&content(t));
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for (_, v) in col.iter_mut() {
        *v /= &g;
    }
    if let Some(t) = track {
        for (_, v) in t.iter_mut() {
            *v /= &g;
        }
    }
}

/// `a * x + b * y` on sorted sparse integer columns.
fn lincomb(a: &BigInt, x: &IntCol, b: &BigInt, y: &IntCol) -> IntCol {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j >= y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i >= x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push((x[i].0, a * &x[i].1));
            i += 1;
        } else if take_y {
            out.push((y[j].0, b * &y[j].1));
            j += 1;
        } else {
            let v = a * &x[i].1 + b * &y[j].1;
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

struct Pivot {
    col: IntCol,
    combo: IntCol,
}

/// Incremental column reduction keyed by leading (smallest) row.
struct Eliminator {
    pivots: HashMap<usize, Pivot>,
    track: bool,
}

impl Eliminator {
    fn new(track: bool) -> Self {
        Eliminator { pivots: HashMap::new(), track }
    }

    fn reduce(&self, mut col: IntCol, mut combo: IntCol) -> (IntCol, IntCol) {
        while let Some((lead, _)) = col.first() {
            let Some(p) = self.pivots.get(lead) else { break };
            let a = &col[0].1;
            let b = &p.col[0].1;
            let g = a.gcd(b);
            let (ka, kb) = (b / &g, -(a / &g));
            let next = lincomb(&ka, &col, &kb, &p.col);
            debug_assert!(next.first().is_none_or(|(r, _)| r > lead));
            col = next;
            if self.track {
                combo = lincomb(&ka, &combo, &kb, &p.combo);
                divide_content(&mut col, Some(&mut combo));
            } else {
                divide_content(&mut col, None);
            }
        }
        (col, combo)
    }

    /// Reduces and, if nonzero, stores as a new pivot. Returns the reduced
    /// column and its combination.
    fn insert(&mut self, col: IntCol, combo: IntCol) -> (bool, IntCol) {
        let (col, combo) = self.reduce(col, combo);
        match col.first() {
            Some((lead, _)) => {
                let lead = *lead;
                self.pivots.insert(lead, Pivot { col, combo: Vec::new() });
                if self.track {
                    self.pivots.get_mut(&lead).unwrap().combo = combo;
                }
                (true, Vec::new())
            }
            None => (false, combo),
        }
    }
}

fn unit(j: usize) -> IntCol {
    vec![(j, BigInt::one())]
}

fn to_rational(col: IntCol) -> SparseVec {
    col.into_iter().map(|(i, v)| (i, Rational::from_integer(v))).collect()
}

pub fn rank(m: &SparseMatrix) -> RankProfile {
    let mut elim = Eliminator::new(false);
    let mut pivot_cols = Vec::new();
    for (j, c) in m.cols.iter().enumerate() {
        if elim.insert(to_primitive(c), Vec::new()).0 {
            pivot_cols.push(j);
        }
    }
    let rank = pivot_cols.len();
    RankProfile { rank, pivot_cols, kernel_dim: m.ncols - rank }
}

/// A basis of the null space, one vector per non-pivot column, each with
/// primitive integer entries.
pub fn kernel_basis(m: &SparseMatrix) -> Vec<SparseVec> {
    let mut elim = Eliminator::new(true);
    let mut out = Vec::new();
    for (j, c) in m.cols.iter().enumerate() {
        let (is_pivot, combo) = elim.insert(to_primitive(c), unit(j));
        if !is_pivot {
            // combo weights the primitive rescalings of the columns
            let v: SparseVec =
                combo.into_iter().map(|(k, w)| (k, Rational::from_integer(w) * primitive_scale(&m.cols[k]))).collect();
            out.push(to_rational(to_primitive(&v)));
        }
    }
    out
}

/// Coordinates `x` with `columns * x = v`, or `None` if `v` is outside the span.
pub fn in_span(columns: &SparseMatrix, v: &SparseVec) -> Result<Option<SparseVec>> {
    check_len(columns.nrows, v)?;
    let mut elim = Eliminator::new(true);
    for (j, c) in columns.cols.iter().enumerate() {
        elim.insert(to_primitive(c), unit(j));
    }
    let extra = columns.ncols;
    let (rest, combo) = elim.reduce(to_primitive(v), unit(extra));
    if !rest.is_empty() {
        return Ok(None);
    }
    // combo . [columns | v] = 0 with a nonzero weight on v
    let weight = combo
        .iter()
        .find(|(j, _)| *j == extra)
        .map(|(_, w)| w.clone())
        .expect("v keeps a nonzero weight through reduction");
    // the eliminator saw primitive rescalings of every column and of v
    let scale = Rational::from_integer(-weight).recip() / primitive_scale(v);
    let witness = combo
        .into_iter()
        .filter(|(j, _)| *j != extra)
        .map(|(j, c)| (j, Rational::from_integer(c) * &scale * primitive_scale(columns.column(j))))
        .filter(|(_, c)| !c.is_zero())
        .collect();
    Ok(Some(witness))
}

/// `a` with `to_primitive(v) = a * v`.
fn primitive_scale(v: &SparseVec) -> Rational {
    match v.first() {
        None => Rational::one(),
        Some((_, x)) => Rational::from_integer(to_primitive(v)[0].1.clone()) / x,
    }
}

/// `rank([columns | candidates]) - rank(columns)`.
pub fn independent_mod(columns: &SparseMatrix, candidates: &[SparseVec]) -> Result<usize> {
    for c in candidates {
        check_len(columns.nrows, c)?;
    }
    let mut elim = Eliminator::new(false);
    for c in &columns.cols {
        elim.insert(to_primitive(c), Vec::new());
    }
    Ok(candidates.iter().filter(|c| elim.insert(to_primitive(c), Vec::new()).0).count())
}

/// Greedy selection: indices of candidates that are independent of the span
/// of `columns` and of the previously selected candidates.
pub fn select_independent_mod(columns: &SparseMatrix, candidates: &[SparseVec], limit: usize) -> Result<Vec<usize>> {
    for c in candidates {
        check_len(columns.nrows, c)?;
    }
    let mut elim = Eliminator::new(false);
    for c in &columns.cols {
        elim.insert(to_primitive(c), Vec::new());
    }
    let mut picked = Vec::new();
    for (k, c) in candidates.iter().enumerate() {
        if picked.len() == limit {
            break;
        }
        if elim.insert(to_primitive(c), Vec::new()).0 {
            picked.push(k);
        }
    }
    Ok(picked)
}

fn check_len(nrows: usize, v: &SparseVec) -> Result<()> {
    match v.last() {
        Some((i, _)) if *i >= nrows => Err(Error::DimensionMismatch { expected: nrows, got: *i + 1 }),
        _ => Ok(()),
    }
}

pub const MERSENNE_31: u64 = (1 << 31) - 1;

fn mod_p(v: &Rational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let num = v.numer().mod_floor(&pb);
    let den = v.denom().mod_floor(&pb);
    let den: u64 = den.try_into().ok()?;
    if den == 0 {
        return None;
    }
    let num: u64 = num.try_into().ok()?;
    Some(num * pow_mod(den, p - 2, p) % p)
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Rank over GF(p), `p < 2^32` prime. Returns `None` if some denominator
/// vanishes mod `p`.
pub fn rank_mod_p(m: &SparseMatrix, p: u64) -> Option<usize> {
    let mut pivots: HashMap<usize, Vec<(usize, u64)>> = HashMap::new();
    for col in &m.cols {
        let mut v: Vec<(usize, u64)> = Vec::with_capacity(col.len());
        for (i, x) in col {
            let y = mod_p(x, p)?;
            if y != 0 {
                v.push((*i, y));
            }
        }
        while let Some(&(lead, a)) = v.first() {
            let Some(pv) = pivots.get(&lead) else { break };
            let f = a * pow_mod(pv[0].1, p - 2, p) % p;
            let mut out = Vec::with_capacity(v.len() + pv.len());
            let (mut i, mut j) = (0, 0);
            while i < v.len() || j < pv.len() {
                if j >= pv.len() || (i < v.len() && v[i].0 < pv[j].0) {
                    out.push(v[i]);
                    i += 1;
                } else if i >= v.len() || pv[j].0 < v[i].0 {
                    out.push((pv[j].0, (p - f * pv[j].1 % p) % p));
                    j += 1;
                } else {
                    let y = (v[i].1 + p - f * pv[j].1 % p) % p;
                    if y != 0 {
                        out.push((v[i].0, y));
                    }
                    i += 1;
                    j += 1;
                }
            }
            v = out;
        }
        if let Some(&(lead, _)) = v.first() {
            pivots.insert(lead, v);
        }
    }
    Some(pivots.len())
}
