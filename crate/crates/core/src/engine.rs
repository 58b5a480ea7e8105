//! Coboundary matrices, cohomology dimensions and representatives.
//!
//! `D` maps a cochain with target `t` to cochains with target `t` (the
//! `phi o d` part) and to targets of the `d` terms that read `t` (the
//! `d o phi` part). The weakly connected components of that target graph
//! split the complex into a direct sum of target blocks; every rank is
//! computed per block.
//!
//! Coordinates inside a block are target-major: the cochain `phi^I_t` sits
//! at `slot(t) * (r+s)^n + rank(I)`.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::basis::{GeneratorId, GradedBasis};
use crate::closed_form::TheoremVariant;
use crate::cochain::{BasisCochain, Cochain, Codifferential};
use crate::error::{Error, Result};
use crate::linalg::{self, SparseMatrix, SparseVec};

/// Coordinates on `C^n` restricted to a set of targets.
#[derive(Debug, Clone)]
pub struct CochainSpace {
    basis: GradedBasis,
    degree: usize,
    targets: Vec<GeneratorId>,
    words: usize,
}

impl CochainSpace {
    pub fn new(basis: &GradedBasis, degree: usize, targets: &[GeneratorId]) -> Result<Self> {
        let mut targets = targets.to_vec();
        targets.sort();
        targets.dedup();
        for &t in &targets {
            basis.check(t)?;
        }
        let words = basis.word_count(degree).unwrap_or(u64::MAX);
        let needed = words.saturating_mul(targets.len() as u64);
        if needed > basis.cap() {
            return Err(Error::CapExceeded { needed, cap: basis.cap() });
        }
        Ok(CochainSpace { basis: *basis, degree, targets, words: words as usize })
    }

    pub fn full(basis: &GradedBasis, degree: usize) -> Result<Self> {
        Self::new(basis, degree, &basis.generators())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn targets(&self) -> &[GeneratorId] {
        &self.targets
    }

    pub fn dim(&self) -> usize {
        self.words * self.targets.len()
    }

    /// Range of coordinates carrying target `t`.
    pub fn target_range(&self, t: GeneratorId) -> Option<std::ops::Range<usize>> {
        let slot = self.targets.iter().position(|&x| x == t)?;
        Some(slot * self.words..(slot + 1) * self.words)
    }

    pub fn index_of(&self, bc: &BasisCochain) -> Option<usize> {
        if bc.degree() != self.degree {
            return None;
        }
        let slot = self.targets.iter().position(|&x| x == bc.target)?;
        let rank = self.basis.rank_of(&bc.inputs).ok()?;
        Some(slot * self.words + rank)
    }

    pub fn basis_cochain(&self, index: usize) -> BasisCochain {
        let slot = index / self.words;
        let word = self.basis.unrank(self.degree, index % self.words).expect("index in range");
        BasisCochain::new(word, self.targets[slot])
    }

    pub fn to_vec(&self, c: &Cochain) -> Result<SparseVec> {
        let mut out = Vec::with_capacity(c.len());
        for (bc, v) in c.terms() {
            let i = self.index_of(bc).ok_or_else(|| {
                Error::Inhomogeneous(format!("{bc} is not in degree {} over {:?}", self.degree, self.target_names()))
            })?;
            out.push((i, v.clone()));
        }
        out.sort_by_key(|(i, _)| *i);
        Ok(out)
    }

    /// Rebuilds a cochain from coordinates; the terms must be homogeneous.
    pub fn from_vec(&self, v: &SparseVec) -> Result<Cochain> {
        let parity = v.first().map_or(0, |(i, _)| self.basis_cochain(*i).parity());
        Cochain::from_terms(self.degree, parity, v.iter().map(|(i, x)| (self.basis_cochain(*i), x.clone())))
    }

    fn target_names(&self) -> Vec<String> {
        self.targets.iter().map(|t| t.to_string()).collect()
    }
}

/// Finest partition of the targets into sets closed under `D`.
pub fn target_blocks(d: &Codifferential, basis: &GradedBasis) -> Vec<Vec<GeneratorId>> {
    let gens = basis.generators();
    let mut parent: Vec<usize> = (0..gens.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &t in &gens {
        for u in d.targets_fed_by(t) {
            if !basis.contains(u) {
                continue;
            }
            let (a, b) = (find(&mut parent, basis.position(t)), find(&mut parent, basis.position(u)));
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut groups: BTreeMap<usize, Vec<GeneratorId>> = BTreeMap::new();
    for (k, &g) in gens.iter().enumerate() {
        let root = find(&mut parent, k);
        groups.entry(root).or_default().push(g);
    }
    groups.into_values().collect()
}

pub fn block_label(targets: &[GeneratorId]) -> String {
    targets.iter().map(|t| t.to_string()).collect::<Vec<_>>().join("+")
}

/// Matrix of `D: C^n_T -> C^{n+1}_T` for a `D`-closed target set `T`.
pub fn build_block_matrix(
    d: &Codifferential,
    basis: &GradedBasis,
    n: usize,
    targets: &[GeneratorId],
) -> Result<SparseMatrix> {
    let src = CochainSpace::new(basis, n, targets)?;
    let dst = CochainSpace::new(basis, n + 1, targets)?;
    let cols: Vec<SparseVec> = (0..src.dim())
        .into_par_iter()
        .map(|j| {
            let image = d.coboundary(&Cochain::basis(src.basis_cochain(j)));
            dst.to_vec(&image)
        })
        .collect::<Result<_>>()?;
    SparseMatrix::from_columns(dst.dim(), cols)
}

/// Matrix of `D: C^n -> C^{n+1}`, columns in [`CochainSpace::full`] order.
pub fn build_coboundary_matrix(d: &Codifferential, basis: &GradedBasis, n: usize) -> Result<SparseMatrix> {
    build_block_matrix(d, basis, n, &basis.generators())
}

/// `D_n` and `D_{n-1}` around degree `n` together with the block layout.
#[derive(Debug, Clone)]
pub struct DegreeComplex {
    pub n: usize,
    pub d_n: SparseMatrix,
    pub d_prev: SparseMatrix,
    pub blocks: Vec<(Vec<GeneratorId>, std::ops::Range<usize>)>,
}

impl DegreeComplex {
    /// The block ranges refer to column positions of `d_n` and `d_prev`
    /// rows; with target-major coordinates each target owns `(r+s)^n`
    /// consecutive columns.
    pub fn build(d: &Codifferential, basis: &GradedBasis, n: usize) -> Result<Self> {
        let d_n = build_coboundary_matrix(d, basis, n)?;
        let d_prev = match n {
            0 => SparseMatrix::zeros(d_n.ncols(), 0),
            _ => build_coboundary_matrix(d, basis, n - 1)?,
        };
        let space = CochainSpace::full(basis, n)?;
        let blocks =
            basis.generators().into_iter().map(|t| (vec![t], space.target_range(t).expect("full space"))).collect();
        Ok(DegreeComplex { n, d_n, d_prev, blocks })
    }

    pub fn composite_vanishes(&self) -> Result<bool> {
        Ok(self.d_n.mul(&self.d_prev)?.is_zero())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Dims {
    pub z: usize,
    pub b: usize,
    pub h: usize,
}

impl Dims {
    fn from_ranks(dim: usize, rank_out: usize, rank_in: usize) -> Self {
        let z = dim - rank_out;
        debug_assert!(z >= rank_in);
        Dims { z, b: rank_in, h: z - rank_in }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockDims {
    pub targets: Vec<GeneratorId>,
    /// `dim C^n` of the block.
    pub dim: usize,
    pub dims: Dims,
}

/// Ranks of the block coboundaries, computed once per `(block, degree)`.
#[derive(Debug, Clone)]
pub struct RankTable {
    blocks: Vec<Vec<GeneratorId>>,
    dims: Vec<Vec<usize>>,
    ranks: Vec<Vec<usize>>,
}

impl RankTable {
    /// Ranks of `D_k` for `k = 0..=top` on every block.
    pub fn compute(engine: &Engine, top: usize) -> Result<Self> {
        let jobs: Vec<(usize, usize)> = (0..engine.blocks.len()).flat_map(|b| (0..=top).map(move |k| (b, k))).collect();
        let results: Vec<(usize, usize)> = jobs
            .par_iter()
            .map(|&(b, k)| {
                let m = engine.block_matrix(k, &engine.blocks[b])?;
                Ok((m.ncols(), linalg::rank(&m).rank))
            })
            .collect::<Result<_>>()?;
        let mut dims = vec![vec![0; top + 1]; engine.blocks.len()];
        let mut ranks = vec![vec![0; top + 1]; engine.blocks.len()];
        for (&(b, k), (dim, rank)) in jobs.iter().zip(results) {
            dims[b][k] = dim;
            ranks[b][k] = rank;
        }
        Ok(RankTable { blocks: engine.blocks.clone(), dims, ranks })
    }

    /// Highest degree with known `z, b, h`.
    pub fn top_degree(&self) -> usize {
        self.ranks.first().map_or(0, |r| r.len() - 1)
    }

    pub fn block_dims(&self, n: usize) -> Vec<BlockDims> {
        self.blocks
            .iter()
            .enumerate()
            .map(|(b, targets)| {
                let rank_in = if n == 0 { 0 } else { self.ranks[b][n - 1] };
                BlockDims {
                    targets: targets.clone(),
                    dim: self.dims[b][n],
                    dims: Dims::from_ranks(self.dims[b][n], self.ranks[b][n], rank_in),
                }
            })
            .collect()
    }

    pub fn dims(&self, n: usize) -> Dims {
        self.block_dims(n).iter().fold(Dims::default(), |acc, b| Dims {
            z: acc.z + b.dims.z,
            b: acc.b + b.dims.b,
            h: acc.h + b.dims.h,
        })
    }

    /// `rank D_n` on block `b`, i.e. `b^{n+1}` of that block.
    pub fn rank(&self, block: usize, n: usize) -> usize {
        self.ranks[block][n]
    }

    pub fn blocks(&self) -> &[Vec<GeneratorId>] {
        &self.blocks
    }
}

/// Cohomology of one codifferential on one graded space.
#[derive(Debug, Clone)]
pub struct Engine {
    basis: GradedBasis,
    d: Codifferential,
    variant: Option<TheoremVariant>,
    blocks: Vec<Vec<GeneratorId>>,
}

impl Engine {
    pub fn new(d: Codifferential, basis: GradedBasis) -> Result<Self> {
        for (bc, _) in d.cochain().terms() {
            basis.check(bc.target)?;
            for &g in bc.inputs.letters() {
                basis.check(g)?;
            }
        }
        let blocks = target_blocks(&d, &basis);
        Ok(Engine { basis, d, variant: None, blocks })
    }

    pub fn for_variant(variant: TheoremVariant) -> Self {
        let basis = *variant.basis();
        let d = variant.codifferential();
        let blocks = target_blocks(&d, &basis);
        Engine { basis, d, variant: Some(variant), blocks }
    }

    pub fn basis(&self) -> &GradedBasis {
        &self.basis
    }

    pub fn codifferential(&self) -> &Codifferential {
        &self.d
    }

    pub fn variant(&self) -> Option<&TheoremVariant> {
        self.variant.as_ref()
    }

    pub fn blocks(&self) -> &[Vec<GeneratorId>] {
        &self.blocks
    }

    /// The block containing target `t`.
    pub fn block_of(&self, t: GeneratorId) -> Option<&[GeneratorId]> {
        self.blocks.iter().find(|b| b.contains(&t)).map(Vec::as_slice)
    }

    pub fn block_matrix(&self, n: usize, targets: &[GeneratorId]) -> Result<SparseMatrix> {
        build_block_matrix(&self.d, &self.basis, n, targets)
    }

    pub fn coboundary_matrix(&self, n: usize) -> Result<SparseMatrix> {
        build_coboundary_matrix(&self.d, &self.basis, n)
    }

    /// `(z^n, b^n, h^n)` from the full matrices, without block splitting.
    pub fn cohomology_dim(&self, n: usize) -> Result<Dims> {
        let (rank_out, rank_in) = rayon::join(
            || self.coboundary_matrix(n).map(|m| (m.ncols(), linalg::rank(&m).rank)),
            || match n {
                0 => Ok(0),
                _ => self.coboundary_matrix(n - 1).map(|m| linalg::rank(&m).rank),
            },
        );
        let (dim, rank_out) = rank_out?;
        Ok(Dims::from_ranks(dim, rank_out, rank_in?))
    }

    pub fn ranks(&self, n_max: usize) -> Result<RankTable> {
        RankTable::compute(self, n_max)
    }

    pub fn cohomology_dims_by_target(&self, n: usize) -> Result<Vec<BlockDims>> {
        Ok(self.ranks(n)?.block_dims(n))
    }

    fn require_variant(&self) -> Result<&TheoremVariant> {
        self.variant
            .as_ref()
            .ok_or_else(|| Error::InvalidVariant("operation needs a theorem-family codifferential".into()))
    }

    /// `(dim Hf^n, dim He^n)`: the image of the top-target cohomology in the
    /// cohomology of the interacting pair block, and its complement.
    pub fn hf_he_dims(&self, n: usize) -> Result<(usize, usize)> {
        let v = self.require_variant()?;
        let (lead, top) = v.pair();
        let pair = [lead, top];
        let pair_space = CochainSpace::new(&self.basis, n, &pair)?;
        let top_space = CochainSpace::new(&self.basis, n, &[top])?;

        let boundaries = match n {
            0 => SparseMatrix::with_rows(pair_space.dim()),
            _ => self.block_matrix(n - 1, &pair)?,
        };
        let pair_out = self.block_matrix(n, &pair)?;
        let top_out = self.block_matrix(n, &[top])?;

        let offset = pair_space.target_range(top).expect("top in pair").start;
        let cocycles: Vec<SparseVec> = linalg::kernel_basis(&top_out)
            .into_iter()
            .map(|v| v.into_iter().map(|(i, x)| (i + offset, x)).collect())
            .collect();
        debug_assert_eq!(top_space.dim(), top_out.ncols());

        let hf = linalg::independent_mod(&boundaries, &cocycles)?;
        let z_pair = pair_out.ncols() - linalg::rank(&pair_out).rank;
        let h_pair = z_pair - linalg::rank(&boundaries).rank;
        Ok((hf, h_pair - hf))
    }

    /// A basis of `H^n` as explicit cocycles. Within each block the
    /// recursive cocycle list of every target is tried first, then kernel
    /// vectors fill the remainder.
    pub fn cohomology_representatives(&self, n: usize) -> Result<Vec<Cochain>> {
        let mut out = Vec::new();
        for block in &self.blocks {
            let space = CochainSpace::new(&self.basis, n, block)?;
            let outgoing = self.block_matrix(n, block)?;
            let boundaries = match n {
                0 => SparseMatrix::with_rows(space.dim()),
                _ => self.block_matrix(n - 1, block)?,
            };
            let z = outgoing.ncols() - linalg::rank(&outgoing).rank;
            let h = z - linalg::rank(&boundaries).rank;
            if h == 0 {
                continue;
            }
            let mut candidates: Vec<SparseVec> = Vec::new();
            if let Some(v) = &self.variant {
                for &x in block {
                    for c in v.ctilde_basis(x, n)? {
                        if self.d.coboundary(&c).is_zero() {
                            candidates.push(space.to_vec(&c)?);
                        }
                    }
                }
            }
            candidates.extend(linalg::kernel_basis(&outgoing));
            let picked = linalg::select_independent_mod(&boundaries, &candidates, h)?;
            debug_assert_eq!(picked.len(), h);
            for k in picked {
                out.push(space.from_vec(&candidates[k])?);
            }
        }
        Ok(out)
    }

    /// Columns spanning `B^n` over the whole space, as an `C^n`-rows matrix.
    pub fn boundary_matrix(&self, n: usize) -> Result<SparseMatrix> {
        match n {
            0 => Ok(SparseMatrix::with_rows(CochainSpace::full(&self.basis, 0)?.dim())),
            _ => self.coboundary_matrix(n - 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct LadderBlockRow {
    pub block: String,
    /// `b^{n+1}_a + b^n_a`.
    pub boundary_sum: usize,
    /// `(r+s)^n - (r+s-1)^n`, the value forced on a free block.
    pub boundary_target: u128,
    pub h: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct LadderRow {
    pub n: usize,
    /// `b^{n+1} + b^n`.
    pub boundary_sum: usize,
    /// `(r+s)^{n+1} - (r+s-1)^{n+1}`.
    pub boundary_bound: u128,
    pub boundary_margin: i128,
    pub h: usize,
    /// `(r+s-1)^n`.
    pub h_bound: u128,
    pub h_margin: i128,
    /// Blocks not meeting the interacting pair.
    pub free_blocks: Vec<LadderBlockRow>,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct LadderReport {
    pub rows: Vec<LadderRow>,
    /// `b^{n+1} + b^n >= (r+s)^{n+1} - (r+s-1)^{n+1}` for every row.
    pub boundary_inequality: bool,
    /// `(r+s-1)^n <= h^n` for every row.
    pub h_inequality: bool,
    /// `h^n_a = (r+s-1)^n` on every free block.
    pub free_blocks_equal: bool,
    /// `b^{n+1}_a + b^n_a = (r+s)^n - (r+s-1)^n` on every free block.
    pub free_block_boundaries: bool,
}

impl Engine {
    /// Both ladder inequalities for `n <= n_max`, with margins.
    pub fn verify_inequality_ladder(&self, n_max: usize) -> Result<LadderReport> {
        let table = self.ranks(n_max)?;
        let g = self.basis.dim() as u128;
        let pair: Vec<GeneratorId> = self.variant.map(|v| vec![v.lead(), v.top()]).unwrap_or_default();
        let mut rows = Vec::new();
        for n in 0..=n_max {
            let dims = table.dims(n);
            let next_b: usize = (0..self.blocks.len()).map(|b| table.rank(b, n)).sum();
            let boundary_sum = next_b + dims.b;
            let boundary_bound = g.pow(n as u32 + 1) - (g - 1).pow(n as u32 + 1);
            let h_bound = (g - 1).pow(n as u32);
            let free_blocks = table
                .block_dims(n)
                .iter()
                .enumerate()
                .filter(|(_, blk)| self.variant.is_some() && !blk.targets.iter().any(|t| pair.contains(t)))
                .map(|(b, blk)| LadderBlockRow {
                    block: block_label(&blk.targets),
                    boundary_sum: table.rank(b, n) + blk.dims.b,
                    boundary_target: g.pow(n as u32) - h_bound,
                    h: blk.dims.h,
                })
                .collect();
            rows.push(LadderRow {
                n,
                boundary_sum,
                boundary_bound,
                boundary_margin: boundary_sum as i128 - boundary_bound as i128,
                h: dims.h,
                h_bound,
                h_margin: dims.h as i128 - h_bound as i128,
                free_blocks,
            });
        }
        let free: Vec<&LadderBlockRow> = rows.iter().flat_map(|r| r.free_blocks.iter()).collect();
        Ok(LadderReport {
            boundary_inequality: rows.iter().all(|r| r.boundary_margin >= 0),
            h_inequality: rows.iter().all(|r| r.h_margin >= 0),
            free_blocks_equal: rows.iter().all(|r| r.free_blocks.iter().all(|b| b.h as u128 == r.h_bound)),
            free_block_boundaries: free.iter().all(|b| b.boundary_sum as u128 == b.boundary_target),
            rows,
        })
    }
}
