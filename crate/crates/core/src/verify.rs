//! Algebraic identity checks: exhaustive over small bases, seeded random
//! samples elsewhere.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::basis::{GeneratorId, GradedBasis};
use crate::closed_form::TheoremVariant;
use crate::cochain::{
    bracket_with, lambda_plus_rho, rat, tau, theta, BasisCochain, Cochain, Codifferential, SignConvention,
};
use crate::engine::{CochainSpace, Engine, RankTable};
use crate::error::Result;
use crate::linalg::{self, SparseVec};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, cases: usize, failure: Option<String>) -> Self {
        let passed = failure.is_none();
        Check { name: name.into(), passed, cases, detail: failure.unwrap_or_default() }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Degree bound for the exhaustive `D^2 = 0` check.
    pub d_squared_degree: usize,
    /// Degree bound for the other exhaustive checks.
    pub exhaustive_degree: usize,
    pub jacobi_samples: usize,
    pub random_samples: usize,
    /// Highest block degree used for rank-nullity.
    pub rank_degree: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            seed: 0x5eed,
            d_squared_degree: 4,
            exhaustive_degree: 3,
            jacobi_samples: 200,
            random_samples: 50,
            rank_degree: 4,
        }
    }
}

fn basis_cochains(basis: &GradedBasis, degree: usize, targets: &[GeneratorId]) -> Result<Vec<Cochain>> {
    let space = CochainSpace::new(basis, degree, targets)?;
    Ok((0..space.dim()).map(|k| Cochain::basis(space.basis_cochain(k))).collect())
}

/// A random homogeneous cochain with up to `terms` terms and small nonzero
/// integer coefficients.
pub fn random_cochain<R: Rng>(rng: &mut R, basis: &GradedBasis, degree: usize, parity: u8, terms: usize) -> Cochain {
    let gens = basis.generators();
    let words = basis.word_count(degree).expect("small degree") as usize;
    let mut c = Cochain::zero(degree, parity);
    let mut placed = 0;
    while placed < terms {
        let word = basis.unrank(degree, rng.gen_range(0..words)).expect("in range");
        let candidates: Vec<GeneratorId> =
            gens.iter().copied().filter(|t| t.parity() ^ word.parity() == parity).collect();
        let Some(&t) = candidates.choose(rng) else { continue };
        let k = [-3, -2, -1, 1, 2, 3][rng.gen_range(0..6)];
        c = c.combine(&Cochain::basis(BasisCochain::new(word, t)), &rat(k)).expect("same shape");
        placed += 1;
    }
    c
}

fn random_shaped<R: Rng>(rng: &mut R, basis: &GradedBasis, lo: usize, hi: usize, terms: usize) -> Cochain {
    let degree = rng.gen_range(lo..=hi);
    let parity = rng.gen_range(0..2);
    random_cochain(rng, basis, degree, parity, terms)
}

fn first_failure<T>(
    items: impl IntoIterator<Item = T>,
    mut bad: impl FnMut(&T) -> Option<String>,
) -> (usize, Option<String>) {
    let mut count = 0;
    for it in items {
        count += 1;
        if let Some(msg) = bad(&it) {
            return (count, Some(msg));
        }
    }
    (count, None)
}

/// `D(D(x)) = 0` for every basis cochain of degree `<= max_degree`, and
/// `D_{n+1} D_n = 0` on the matrices.
pub fn check_d_squared(engine: &Engine, max_degree: usize) -> Result<Check> {
    let d = engine.codifferential();
    let mut all = Vec::new();
    for n in 0..=max_degree {
        all.extend(basis_cochains(engine.basis(), n, &engine.basis().generators())?);
    }
    let (mut cases, mut fail) = first_failure(all, |x| {
        let dd = d.coboundary(&d.coboundary(x));
        (!dd.is_zero()).then(|| format!("D(D({x})) = {dd}"))
    });
    if fail.is_none() {
        for n in 0..max_degree {
            cases += 1;
            let prod = engine.coboundary_matrix(n + 1)?.mul(&engine.coboundary_matrix(n)?)?;
            if !prod.is_zero() {
                fail = Some(format!("D_{} D_{} has {} nonzero entries", n + 1, n, prod.nnz()));
                break;
            }
        }
    }
    Ok(Check::new("D^2 = 0", cases, fail))
}

fn sign(p: u8) -> i64 {
    if p == 0 {
        1
    } else {
        -1
    }
}

/// `[phi, psi] = -(-1)^{pq} [psi, phi]` on random pairs.
pub fn check_antisymmetry(
    basis: &GradedBasis,
    conv: SignConvention,
    max_degree: usize,
    samples: usize,
    seed: u64,
) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(Cochain, Cochain)> = (0..samples)
        .map(|_| {
            let a = random_shaped(&mut rng, basis, 0, max_degree, 3);
            let b = random_shaped(&mut rng, basis, 0, max_degree, 3);
            (a, b)
        })
        .collect();
    let (cases, fail) = first_failure(pairs, |(a, b)| {
        let lhs = bracket_with(conv, a, b);
        let rhs = bracket_with(conv, b, a).scale(&rat(-sign(a.parity() & b.parity())));
        (lhs != rhs).then(|| format!("[{a}, {b}] = {lhs}, expected {rhs}"))
    });
    Check::new(format!("graded antisymmetry ({conv})"), cases, fail)
}

/// `[a,[b,c]] = [[a,b],c] + (-1)^{|a||b|} [b,[a,c]]` on random triples.
pub fn check_jacobi(basis: &GradedBasis, conv: SignConvention, max_degree: usize, samples: usize, seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let triples: Vec<[Cochain; 3]> =
        (0..samples).map(|_| [(); 3].map(|_| random_shaped(&mut rng, basis, 1, max_degree, 2))).collect();
    let (cases, fail) = first_failure(triples, |[a, b, c]| {
        let br = |x: &Cochain, y: &Cochain| bracket_with(conv, x, y);
        let lhs = br(a, &br(b, c));
        let rhs = br(&br(a, b), c).combine(&br(b, &br(a, c)), &rat(sign(a.parity() & b.parity())));
        match rhs {
            Ok(rhs) if rhs == lhs => None,
            Ok(rhs) => Some(format!("a={a}, b={b}, c={c}: lhs {lhs}, rhs {rhs}")),
            Err(e) => Some(e.to_string()),
        }
    });
    Check::new(format!("Jacobi identity ({conv})"), cases, fail)
}

/// `D theta = (-1)^{|theta|} theta D` on every basis cochain of degree
/// `<= max_degree` whose target lies outside the interacting pair. For the
/// even square family `theta` is odd and the two anticommute.
pub fn check_theta_commutation(engine: &Engine, variant: &TheoremVariant, max_degree: usize) -> Result<Check> {
    let d = engine.codifferential();
    let free = variant.free_letters();
    let theta_parity = variant.lead().parity() ^ variant.top().parity();
    let mut all = Vec::new();
    for n in 0..=max_degree {
        all.extend(basis_cochains(engine.basis(), n, &free)?);
    }
    let (cases, fail) = first_failure(all, |x| {
        let lhs = d.coboundary(&theta(variant, x));
        let rhs = theta(variant, &d.coboundary(x)).scale(&rat(sign(theta_parity)));
        (lhs != rhs).then(|| format!("x = {x}: D theta x = {lhs}, theta D x = {rhs}"))
    });
    let name = if theta_parity == 1 { "theta anticommutes with D_a" } else { "theta commutes with D_a" };
    Ok(Check::new(name, cases, fail))
}

fn restrict_target(c: &Cochain, t: GeneratorId) -> Cochain {
    Cochain::from_terms(
        c.degree(),
        c.parity(),
        c.terms().filter(|(b, _)| b.target == t).map(|(b, v)| (b.clone(), v.clone())),
    )
    .expect("subset of a homogeneous cochain")
}

/// The `fs` component of `D` on `e1`-target cochains equals
/// `(lambda^{e1} + rho^{e1}) tau`. Exhaustive up to `max_degree`.
pub fn check_cross_component(engine: &Engine, variant: &TheoremVariant, max_degree: usize) -> Result<Check> {
    let (u, top) = variant.pair();
    let d = engine.codifferential();
    let mut all = Vec::new();
    for n in 0..=max_degree {
        all.extend(basis_cochains(engine.basis(), n, &[u])?);
    }
    let mut err = None;
    let (cases, fail) = first_failure(all, |x| {
        let lhs = restrict_target(&d.coboundary(x), top);
        let rhs = match tau(u, top, x) {
            Ok(t) => lambda_plus_rho(u, &t),
            Err(e) => {
                err = Some(e);
                return Some("tau failed".into());
            }
        };
        (lhs != rhs).then(|| format!("x = {x}: D^{top}_{u} x = {lhs}, (lambda+rho) tau x = {rhs}"))
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok(Check::new(format!("D_{u}^{top} = (lambda^{u} + rho^{u}) tau"), cases, fail))
}

/// `z^n_a + b^{n+1}_a = dim C^n_a` for every block and every degree below
/// the top of the table.
pub fn check_rank_nullity(table: &RankTable) -> Check {
    let top = table.top_degree();
    let mut cases = 0;
    let mut fail = None;
    'outer: for n in 0..top {
        let here = table.block_dims(n);
        for (b, blk) in here.iter().enumerate() {
            cases += 1;
            let next_b = table.rank(b, n);
            if blk.dims.z + next_b != blk.dim {
                fail =
                    Some(format!("block {:?} n={n}: z={} b^(n+1)={} dim={}", blk.targets, blk.dims.z, next_b, blk.dim));
                break 'outer;
            }
        }
    }
    Check::new("rank-nullity z^n_a + b^(n+1)_a = dim C^n_a", cases, fail)
}

fn random_combo<R: Rng>(rng: &mut R, vecs: &[&SparseVec]) -> SparseVec {
    let mut acc: std::collections::BTreeMap<usize, crate::cochain::Rational> = Default::default();
    let k = rng.gen_range(1..=vecs.len().min(3));
    for v in vecs.choose_multiple(rng, k) {
        let c = rat([-2, -1, 1, 2][rng.gen_range(0..4)]);
        for (i, x) in v.iter() {
            *acc.entry(*i).or_default() += x * &c;
        }
    }
    acc.into_iter().filter(|(_, x)| *x != rat(0)).collect()
}

/// `theta` maps boundaries of a free block into boundaries: for random
/// `beta = D_a y` with `y` in `C^{n-1}_a`, `theta beta` lies in `B^{n+2}_a`.
pub fn check_theta_boundaries(
    engine: &Engine,
    variant: &TheoremVariant,
    max_degree: usize,
    samples: usize,
    seed: u64,
) -> Result<Check> {
    let free = variant.free_letters();
    if free.is_empty() || max_degree == 0 {
        return Ok(Check::new("theta maps B^n_a into B^(n+2)_a", 0, None));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = engine.codifferential();
    let mut fail = None;
    let mut cases = 0;
    for _ in 0..samples {
        let a = *free.choose(&mut rng).expect("nonempty");
        let n = rng.gen_range(1..=max_degree);
        let y = random_cochain_on(&mut rng, engine.basis(), n - 1, a);
        let beta = d.coboundary(&y);
        if beta.is_zero() {
            continue;
        }
        cases += 1;
        let image = theta(variant, &beta);
        let space = CochainSpace::new(engine.basis(), n + 2, &[a])?;
        let cols = engine.block_matrix(n + 1, &[a])?;
        if linalg::in_span(&cols, &space.to_vec(&image)?)?.is_none() {
            fail = Some(format!("beta = {beta}: theta beta not a boundary"));
            break;
        }
    }
    Ok(Check::new("theta maps B^n_a into B^(n+2)_a", cases, fail))
}

fn random_cochain_on<R: Rng>(rng: &mut R, basis: &GradedBasis, degree: usize, target: GeneratorId) -> Cochain {
    let words = basis.word_count(degree).expect("small degree") as usize;
    let parity = rng.gen_range(0..2u8);
    let mut c = Cochain::zero(degree, parity);
    for _ in 0..3 {
        let word = basis.unrank(degree, rng.gen_range(0..words)).expect("in range");
        if word.parity() ^ target.parity() != parity {
            continue;
        }
        let k = rat([-2, -1, 1, 2][rng.gen_range(0..4)]);
        c = c.combine(&Cochain::basis(BasisCochain::new(word, target)), &k).expect("same shape");
    }
    c
}

/// `theta (lambda + rho) x - (lambda + rho) theta x` lies in `im D` for random
/// `fs`-target cocycles `x` of degree `<= max_degree`.
pub fn check_homotopy(
    engine: &Engine,
    variant: &TheoremVariant,
    max_degree: usize,
    samples: usize,
    seed: u64,
) -> Result<Check> {
    let (u, top) = variant.pair();
    let pair = [u, top];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = engine.codifferential();

    // fs-target cocycles grouped by degree and parity
    let mut pools: Vec<(usize, Vec<Cochain>)> = Vec::new();
    for n in 0..=max_degree {
        let space = CochainSpace::new(engine.basis(), n, &[top])?;
        let kernel = linalg::kernel_basis(&engine.block_matrix(n, &[top])?);
        let cochains = kernel.iter().map(|v| space.from_vec(v)).collect::<Result<Vec<_>>>()?;
        pools.push((n, cochains));
    }
    let mut cases = 0;
    let mut fail = None;
    for _ in 0..samples {
        let (n, pool) = pools.choose(&mut rng).expect("nonempty");
        if pool.is_empty() {
            continue;
        }
        let parity = pool.choose(&mut rng).unwrap().parity();
        let same: Vec<&Cochain> = pool.iter().filter(|c| c.parity() == parity).collect();
        let space_n = CochainSpace::new(engine.basis(), *n, &[top])?;
        let vecs: Vec<SparseVec> = same.iter().map(|c| space_n.to_vec(c)).collect::<Result<_>>()?;
        let x = space_n.from_vec(&random_combo(&mut rng, &vecs.iter().collect::<Vec<_>>()))?;
        if x.is_zero() {
            continue;
        }
        debug_assert!(d.coboundary(&x).is_zero());
        cases += 1;
        let lhs = theta(variant, &lambda_plus_rho(u, &x));
        let rhs = lambda_plus_rho(u, &theta(variant, &x));
        let delta = lhs.try_sub(&rhs)?;
        let space = CochainSpace::new(engine.basis(), n + 3, &pair)?;
        let cols = engine.block_matrix(n + 2, &pair)?;
        if linalg::in_span(&cols, &space.to_vec(&delta)?)?.is_none() {
            fail = Some(format!("x = {x}: difference {delta} is not a coboundary"));
            break;
        }
    }
    Ok(Check::new("theta (lambda+rho) - (lambda+rho) theta lands in im D", cases, fail))
}

/// `D^2 = 0` with `D = [d, -]` computed under an arbitrary sign convention,
/// exhaustive up to `max_degree`.
pub fn check_d_squared_with(
    d: &Cochain,
    basis: &GradedBasis,
    conv: SignConvention,
    max_degree: usize,
) -> Result<Check> {
    let mut all = Vec::new();
    for n in 0..=max_degree {
        all.extend(basis_cochains(basis, n, &basis.generators())?);
    }
    let dd = bracket_with(conv, d, d);
    if !dd.is_zero() {
        return Ok(Check::new(format!("D^2 = 0 ({conv})"), 1, Some(format!("[d,d] = {dd}"))));
    }
    let (cases, fail) = first_failure(all, |x| {
        let once = bracket_with(conv, d, x);
        let twice = bracket_with(conv, d, &once);
        (!twice.is_zero()).then(|| format!("D(D({x})) = {twice}"))
    });
    Ok(Check::new(format!("D^2 = 0 ({conv})"), cases, fail))
}

/// D^2, antisymmetry, Jacobi and graded theta commutation under every
/// candidate sign convention.
pub fn compare_conventions(variant: &TheoremVariant, options: &SuiteOptions) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let d = variant.codifferential_cochain();
    for conv in [SignConvention::Prefix, SignConvention::PrefixInclusive, SignConvention::Suffix] {
        out.push(check_d_squared_with(&d, variant.basis(), conv, options.exhaustive_degree)?);
        out.push(check_antisymmetry(
            variant.basis(),
            conv,
            options.exhaustive_degree,
            options.jacobi_samples,
            options.seed,
        ));
        out.push(check_jacobi(variant.basis(), conv, 2, options.jacobi_samples, options.seed));
        let check = match Codifferential::with_convention(d.clone(), conv) {
            Ok(cd) => {
                let engine = Engine::new(cd, *variant.basis())?;
                let mut c = check_theta_commutation(&engine, variant, options.exhaustive_degree)?;
                c.name = format!("{} ({conv})", c.name);
                c
            }
            Err(e) => Check::new(format!("theta commutation ({conv})"), 1, Some(e.to_string())),
        };
        out.push(check);
    }
    Ok(out)
}

/// The full identity suite for a theorem-family codifferential.
pub fn run_identity_suite(variant: &TheoremVariant, options: &SuiteOptions) -> Result<Vec<Check>> {
    let engine = Engine::for_variant(*variant);
    let basis = variant.basis();
    let conv = engine.codifferential().convention();
    let table = engine.ranks(options.rank_degree)?;
    let mut out = vec![
        check_d_squared(&engine, options.d_squared_degree)?,
        check_antisymmetry(basis, conv, options.exhaustive_degree, options.jacobi_samples, options.seed),
        check_jacobi(basis, conv, 2, options.jacobi_samples, options.seed),
        check_theta_commutation(&engine, variant, options.exhaustive_degree)?,
    ];
    if variant.family() == crate::closed_form::Family::EvenSquare {
        out.push(check_cross_component(&engine, variant, options.exhaustive_degree)?);
    }
    out.push(check_rank_nullity(&table));
    out.push(check_theta_boundaries(&engine, variant, 2, options.random_samples, options.seed)?);
    out.push(check_homotopy(&engine, variant, 2, options.random_samples, options.seed)?);
    Ok(out)
}

/// Generic checks for any codifferential.
pub fn run_generic_suite(d: &Codifferential, basis: &GradedBasis, options: &SuiteOptions) -> Result<Vec<Check>> {
    let engine = Engine::new(d.clone(), *basis)?;
    let table = engine.ranks(options.rank_degree.min(3))?;
    Ok(vec![
        check_d_squared(&engine, options.d_squared_degree.min(3))?,
        check_antisymmetry(basis, d.convention(), options.exhaustive_degree, options.jacobi_samples, options.seed),
        check_jacobi(basis, d.convention(), 2, options.jacobi_samples, options.seed),
        check_rank_nullity(&table),
    ])
}
