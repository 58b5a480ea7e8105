//! Cochains `phi^I_i` with exact rational coefficients, the composition
//! product with Koszul signs, the graded bracket and the auxiliary
//! word-extension maps.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::basis::{parity_of, GeneratorId, MultiIndex};
use crate::closed_form::{Family, TheoremVariant};
use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Which letters of the outer word the inserted cochain is moved past when
/// it is substituted into slot `k`.
///
/// The graded Jacobi identity, `D^2 = 0` and graded commutation of the
/// two-letter prefix map with the restricted coboundary together single out
/// [`SignConvention::Suffix`]; the other two are kept so the property suite
/// can show why.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignConvention {
    /// `(i_1 + .. + i_{k-1})(|J| + |j|)`
    Prefix,
    /// `(i_1 + .. + i_k)(|J| + |j|)`
    PrefixInclusive,
    /// `(i_{k+1} + .. + i_n)(|J| + |j|)`
    Suffix,
}

pub const CONVENTION: SignConvention = SignConvention::Suffix;

impl SignConvention {
    pub fn name(self) -> &'static str {
        match self {
            SignConvention::Prefix => "prefix",
            SignConvention::PrefixInclusive => "prefix-inclusive",
            SignConvention::Suffix => "suffix",
        }
    }

    /// Parity of the letters the inserted map passes at `slot`.
    fn passed_parity(self, word: &[GeneratorId], slot: usize) -> u8 {
        match self {
            SignConvention::Prefix => parity_of(&word[..slot]),
            SignConvention::PrefixInclusive => parity_of(&word[..=slot]),
            SignConvention::Suffix => parity_of(&word[slot + 1..]),
        }
    }
}

impl fmt::Display for SignConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `phi^I_i`: sends the word `I` to the generator `i`, every other word to 0.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisCochain {
    pub inputs: MultiIndex,
    pub target: GeneratorId,
}

impl BasisCochain {
    pub fn new(inputs: impl Into<MultiIndex>, target: GeneratorId) -> Self {
        BasisCochain { inputs: inputs.into(), target }
    }

    pub fn degree(&self) -> usize {
        self.inputs.len()
    }

    /// Coderivation parity `|I| + |i|`.
    pub fn parity(&self) -> u8 {
        self.inputs.parity() ^ self.target.parity()
    }
}

impl fmt::Display for BasisCochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "phi[{}->{}]", self.inputs, self.target)
    }
}

/// A homogeneous finite sum of basis cochains. Zero coefficients are never
/// stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cochain {
    terms: BTreeMap<BasisCochain, Rational>,
    degree: usize,
    parity: u8,
}

impl Cochain {
    pub fn zero(degree: usize, parity: u8) -> Self {
        Cochain { terms: BTreeMap::new(), degree, parity: parity & 1 }
    }

    pub fn basis(bc: BasisCochain) -> Self {
        Self::term(bc, Rational::one())
    }

    pub fn term(bc: BasisCochain, coeff: Rational) -> Self {
        let mut c = Self::zero(bc.degree(), bc.parity());
        if !coeff.is_zero() {
            c.terms.insert(bc, coeff);
        }
        c
    }

    /// Collects terms, summing repeats. Fails if the nonzero terms do not share
    /// degree and parity; an empty result is the zero cochain of the given shape.
    pub fn from_terms<I>(degree: usize, parity: u8, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (BasisCochain, Rational)>,
    {
        let mut acc = Accumulator::new();
        for (bc, c) in terms {
            acc.add(bc, c);
        }
        acc.finish(degree, parity)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn parity(&self) -> u8 {
        self.parity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisCochain, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, bc: &BasisCochain) -> Rational {
        self.terms.get(bc).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, k: &Rational) -> Cochain {
        if k.is_zero() {
            return Cochain::zero(self.degree, self.parity);
        }
        Cochain {
            terms: self.terms.iter().map(|(b, c)| (b.clone(), c * k)).collect(),
            degree: self.degree,
            parity: self.parity,
        }
    }

    pub fn neg(&self) -> Cochain {
        self.scale(&rat(-1))
    }

    pub fn try_add(&self, other: &Cochain) -> Result<Cochain> {
        self.combine(other, &Rational::one())
    }

    pub fn try_sub(&self, other: &Cochain) -> Result<Cochain> {
        self.combine(other, &rat(-1))
    }

    /// `self + k * other`.
    pub fn combine(&self, other: &Cochain, k: &Rational) -> Result<Cochain> {
        if other.is_zero() || k.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.scale(k));
        }
        if self.degree != other.degree || self.parity != other.parity {
            return Err(Error::Inhomogeneous(format!(
                "cannot add degree {} parity {} to degree {} parity {}",
                other.degree, other.parity, self.degree, self.parity
            )));
        }
        let mut acc = Accumulator { terms: self.terms.clone() };
        for (b, c) in &other.terms {
            acc.add(b.clone(), c * k);
        }
        Ok(acc.finish_unchecked(self.degree, self.parity))
    }

    /// Applies `f` termwise to basis cochains, keeping coefficients.
    fn map_terms<F>(&self, degree: usize, parity: u8, mut f: F) -> Cochain
    where
        F: FnMut(&BasisCochain) -> (BasisCochain, Rational),
    {
        let mut acc = Accumulator::new();
        for (b, c) in &self.terms {
            let (nb, sign) = f(b);
            acc.add(nb, c * sign);
        }
        acc.finish_unchecked(degree, parity)
    }
}

impl fmt::Display for Cochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (b, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// Sparse term accumulator that drops cancelled terms.
#[derive(Default)]
pub(crate) struct Accumulator {
    terms: BTreeMap<BasisCochain, Rational>,
}

impl Accumulator {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    pub(crate) fn add(&mut self, bc: BasisCochain, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(bc) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub(crate) fn finish(self, degree: usize, parity: u8) -> Result<Cochain> {
        let mut shape: Option<(usize, u8)> = None;
        for b in self.terms.keys() {
            let s = (b.degree(), b.parity());
            match shape {
                None => shape = Some(s),
                Some(prev) if prev != s => {
                    return Err(Error::Inhomogeneous(format!(
                        "terms of degree {} parity {} and degree {} parity {}",
                        prev.0, prev.1, s.0, s.1
                    )))
                }
                _ => {}
            }
        }
        let (degree, parity) = shape.unwrap_or((degree, parity & 1));
        Ok(Cochain { terms: self.terms, degree, parity })
    }

    fn finish_unchecked(self, degree: usize, parity: u8) -> Cochain {
        let c = Cochain { terms: self.terms, degree, parity: parity & 1 };
        debug_assert!(c.terms.keys().all(|b| b.degree() == c.degree && b.parity() == c.parity));
        c
    }
}

fn sign(exponent: u8) -> Rational {
    if exponent & 1 == 0 {
        Rational::one()
    } else {
        rat(-1)
    }
}

/// Composition of basis cochains under an explicit sign convention.
fn compose_basis_into(
    conv: SignConvention,
    outer: &BasisCochain,
    inner: &BasisCochain,
    coeff: &Rational,
    acc: &mut Accumulator,
) {
    let word = outer.inputs.letters();
    let inner_parity = inner.parity();
    for (slot, &letter) in word.iter().enumerate() {
        if letter != inner.target {
            continue;
        }
        let e = conv.passed_parity(word, slot) & inner_parity;
        let w = outer.inputs.insert_at(slot, &inner.inputs);
        acc.add(BasisCochain::new(w, outer.target), coeff * sign(e));
    }
}

pub fn compose_with(conv: SignConvention, phi: &Cochain, psi: &Cochain) -> Cochain {
    let degree = (phi.degree + psi.degree).saturating_sub(1);
    let parity = phi.parity ^ psi.parity;
    let mut acc = Accumulator::new();
    for (a, ca) in &phi.terms {
        for (b, cb) in &psi.terms {
            compose_basis_into(conv, a, b, &(ca * cb), &mut acc);
        }
    }
    acc.finish_unchecked(degree, parity)
}

/// `phi o psi`: substitute `psi` into every matching input slot of `phi`.
pub fn compose(phi: &Cochain, psi: &Cochain) -> Cochain {
    compose_with(CONVENTION, phi, psi)
}

pub fn bracket_with(conv: SignConvention, phi: &Cochain, psi: &Cochain) -> Cochain {
    let left = compose_with(conv, phi, psi);
    let right = compose_with(conv, psi, phi);
    let k = -sign(phi.parity & psi.parity);
    // shapes agree unless one side is zero, which `combine` handles
    left.combine(&right, &k).expect("bracket terms share degree and parity")
}

/// `[phi, psi] = phi o psi - (-1)^{|phi||psi|} psi o phi`.
pub fn bracket(phi: &Cochain, psi: &Cochain) -> Cochain {
    bracket_with(CONVENTION, phi, psi)
}

pub fn is_codifferential(d: &Cochain) -> Result<bool> {
    check_quadratic_odd(d)?;
    Ok(bracket(d, d).is_zero())
}

fn check_quadratic_odd(d: &Cochain) -> Result<()> {
    if d.degree != 2 || d.parity != 1 {
        return Err(Error::WrongShape { degree: 2, parity: 1, got_degree: d.degree, got_parity: d.parity });
    }
    Ok(())
}

/// An odd quadratic cochain with `[d, d] = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codifferential {
    d: Cochain,
    conv: SignConvention,
}

impl Codifferential {
    pub fn new(d: Cochain) -> Result<Self> {
        Self::with_convention(d, CONVENTION)
    }

    pub fn with_convention(d: Cochain, conv: SignConvention) -> Result<Self> {
        check_quadratic_odd(&d)?;
        let dd = bracket_with(conv, &d, &d);
        if !dd.is_zero() {
            return Err(Error::NotCodifferential(dd.to_string()));
        }
        Ok(Codifferential { d, conv })
    }

    pub fn cochain(&self) -> &Cochain {
        &self.d
    }

    pub fn convention(&self) -> SignConvention {
        self.conv
    }

    /// `D(phi) = [d, phi]`.
    pub fn coboundary(&self, phi: &Cochain) -> Cochain {
        bracket_with(self.conv, &self.d, phi)
    }

    /// Targets reached by `d o phi^I_t`: every target of a `d` term with a slot
    /// equal to `t`.
    pub fn targets_fed_by(&self, t: GeneratorId) -> Vec<GeneratorId> {
        let mut out: Vec<GeneratorId> =
            self.d.terms().filter(|(b, _)| b.inputs.letters().contains(&t)).map(|(b, _)| b.target).collect();
        out.sort();
        out.dedup();
        out
    }
}

impl fmt::Display for Codifferential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.d.fmt(f)
    }
}

/// `lambda^J phi^I_i = phi^{JI}_i`.
pub fn lambda_map(prefix: &MultiIndex, phi: &Cochain) -> Cochain {
    let parity = phi.parity ^ prefix.parity();
    phi.map_terms(phi.degree + prefix.len(), parity, |b| {
        (BasisCochain::new(prefix.concat(&b.inputs), b.target), Rational::one())
    })
}

/// `rho^J phi^I_i = (-1)^{|I||J|} phi^{IJ}_i`.
pub fn rho_map(suffix: &MultiIndex, phi: &Cochain) -> Cochain {
    let pj = suffix.parity();
    let parity = phi.parity ^ pj;
    phi.map_terms(phi.degree + suffix.len(), parity, |b| {
        (BasisCochain::new(b.inputs.concat(suffix), b.target), sign(b.inputs.parity() & pj))
    })
}

/// `(lambda^u + rho^u) phi` for a single letter `u`.
pub fn lambda_plus_rho(u: GeneratorId, phi: &Cochain) -> Cochain {
    let w = MultiIndex::new(vec![u]);
    lambda_map(&w, phi).try_add(&rho_map(&w, phi)).expect("same shape")
}

/// The two-letter prefix map: `lambda^{e1 fs} - lambda^{fs e1}` for the even
/// square family, `lambda^{f1 fs} + lambda^{fs f1}` for the odd square family.
pub fn theta(variant: &TheoremVariant, phi: &Cochain) -> Cochain {
    let u = variant.lead();
    let top = variant.top();
    let first = lambda_map(&MultiIndex::new(vec![u, top]), phi);
    let second = lambda_map(&MultiIndex::new(vec![top, u]), phi);
    let k = match variant.family() {
        Family::EvenSquare => rat(-1),
        Family::OddSquare => rat(1),
    };
    first.combine(&second, &k).expect("same shape")
}

/// Swaps the targets `first <-> second` termwise.
pub fn tau(first: GeneratorId, second: GeneratorId, phi: &Cochain) -> Result<Cochain> {
    let parity = if first.parity() == second.parity() { phi.parity } else { phi.parity ^ 1 };
    let mut acc = Accumulator::new();
    for (b, c) in phi.terms() {
        let target = if b.target == first {
            second
        } else if b.target == second {
            first
        } else {
            return Err(Error::TargetOutsidePair {
                target: b.target.to_string(),
                first: first.to_string(),
                second: second.to_string(),
            });
        };
        acc.add(BasisCochain::new(b.inputs.clone(), target), c.clone());
    }
    Ok(acc.finish_unchecked(phi.degree, parity))
}
