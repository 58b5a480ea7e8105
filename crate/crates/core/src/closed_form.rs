//! Closed-form predictions for the two square-type codifferentials and the
//! recursive construction of their non-trivial cocycles.
//!
//! * [`Family::EvenSquare`]: `d = psi^{e1 e1}_{fs}`, `r, s >= 1`.
//! * [`Family::OddSquare`]: `d = psi^{f1 f1}_{fs}`, `s >= 2`.
//!
//! Write `g = r + s`. Both families have `h^n = (g-1)^{n+1} + c(n)` where
//! `c(n)` is 1 for `n = 2, 3 mod 4` (even square) or always 1 (odd square).

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::basis::{GeneratorId, GradedBasis, MultiIndex};
use crate::cochain::{lambda_map, lambda_plus_rho, theta, BasisCochain, Cochain, Codifferential};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    /// `d = psi^{e1 e1}_{fs}`
    #[serde(rename = "thm1")]
    EvenSquare,
    /// `d = psi^{f1 f1}_{fs}`
    #[serde(rename = "thm2")]
    OddSquare,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::EvenSquare => "thm1",
            Family::OddSquare => "thm2",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "thm1" => Ok(Family::EvenSquare),
            "thm2" => Ok(Family::OddSquare),
            other => Err(Error::Parse(format!("unknown codifferential family `{other}`"))),
        }
    }
}

/// A family together with the graded space it lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TheoremVariant {
    family: Family,
    basis: GradedBasis,
}

impl TheoremVariant {
    /// The even square family needs `r, s >= 1`; the odd square family needs
    /// `s >= 2` and accepts any `r`.
    pub fn new(family: Family, basis: GradedBasis) -> Result<Self> {
        let (r, s) = (basis.r(), basis.s());
        match family {
            Family::EvenSquare if r < 1 || s < 1 => {
                Err(Error::InvalidVariant(format!("thm1 requires r, s >= 1 (got r={r}, s={s})")))
            }
            Family::OddSquare if s < 2 => Err(Error::InvalidVariant(format!("thm2 requires s >= 2 (got s={s})"))),
            _ => Ok(TheoremVariant { family, basis }),
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn basis(&self) -> &GradedBasis {
        &self.basis
    }

    /// `g - 1` where `g = r + s`.
    fn reduced_dim(&self) -> u128 {
        self.basis.dim() as u128 - 1
    }

    /// The letter squared by `d`: `e1` or `f1`.
    pub fn lead(&self) -> GeneratorId {
        match self.family {
            Family::EvenSquare => GeneratorId::even(1),
            Family::OddSquare => GeneratorId::odd(1),
        }
    }

    /// The target of `d`: `fs`.
    pub fn top(&self) -> GeneratorId {
        GeneratorId::odd(self.basis.s())
    }

    /// The two targets whose blocks interact under `D`.
    pub fn pair(&self) -> (GeneratorId, GeneratorId) {
        (self.lead(), self.top())
    }

    pub fn in_pair(&self, g: GeneratorId) -> bool {
        g == self.lead() || g == self.top()
    }

    /// Generators other than the interacting pair, in basis order.
    pub fn free_letters(&self) -> Vec<GeneratorId> {
        self.basis.generators().into_iter().filter(|&g| !self.in_pair(g)).collect()
    }

    pub fn codifferential_cochain(&self) -> Cochain {
        let u = self.lead();
        Cochain::basis(BasisCochain::new(vec![u, u], self.top()))
    }

    pub fn codifferential(&self) -> Codifferential {
        Codifferential::new(self.codifferential_cochain()).expect("both families square to zero")
    }

    /// Predicted `dim H^n`.
    pub fn predicted_h(&self, n: usize) -> u128 {
        self.reduced_dim().pow(n as u32 + 1) + u128::from(self.correction(n))
    }

    /// The `+1` on top of `(g-1)^{n+1}`.
    pub fn correction(&self, n: usize) -> u8 {
        match self.family {
            Family::EvenSquare => u8::from(matches!(n % 4, 2 | 3)),
            Family::OddSquare => 1,
        }
    }

    /// `(dim He, dim Hf)` contributed by powers of the prefix map, by `n mod 4`.
    pub fn base_table(&self, n: usize) -> (u8, u8) {
        match self.family {
            Family::EvenSquare => match n % 4 {
                0 => (0, 1),
                1 => (1, 0),
                _ => (1, 1),
            },
            Family::OddSquare => (1, 1),
        }
    }

    /// `(g-2) * sum_{i=1}^{floor(n/2)} (g-1)^{n-2i}`.
    fn prefix_sum(&self, n: usize) -> u128 {
        let g1 = self.reduced_dim();
        let g2 = g1.saturating_sub(1);
        g2 * (1..=n / 2).map(|i| g1.pow((n - 2 * i) as u32)).sum::<u128>()
    }

    /// Upper bound on `dim Hf^n`:
    /// `(g-1)^n - (g-2) sum_{i=1}^{floor(n/2)} (g-1)^{n-2i} + (Hf table entry - 1)`.
    ///
    /// For the even square family the last term is `-1` exactly when
    /// `n = 1 mod 4`; for the odd square family it vanishes.
    pub fn predicted_hf_bound(&self, n: usize) -> i128 {
        let (_, hf) = self.base_table(n);
        self.reduced_dim().pow(n as u32) as i128 - self.prefix_sum(n) as i128 + i128::from(hf) - 1
    }

    /// The part of `(dim He^n, dim Hf^n)` not accounted for by powers of the
    /// prefix map. Subtracting it from the computed pair leaves the base table.
    pub fn bulk_split(&self, n: usize) -> (u128, u128) {
        let total = self.reduced_dim().pow(n as u32) - 1;
        let he = self.prefix_sum(n);
        (he, total - he)
    }

    /// Predicted `dim He^n + dim Hf^n`.
    pub fn predicted_pair_h(&self, n: usize) -> u128 {
        self.reduced_dim().pow(n as u32) + u128::from(self.correction(n))
    }

    /// The recursive cocycle list for target `x`:
    ///
    /// * degree 0: `phi_x`
    /// * degree 1: `phi^{u}_x`, then `lambda^a phi_x`
    /// * degree n: `lambda^a C[n-1]`, then `theta C[n-2]`, then `(lambda^u + rho^u) lambda^a C[n-2]`
    ///
    /// with `u` the lead letter and `a` ranging over the free letters in
    /// basis order. The list has `(g-1)^n` entries.
    pub fn ctilde_basis(&self, x: GeneratorId, n: usize) -> Result<Vec<Cochain>> {
        self.basis.check(x)?;
        let needed = self.reduced_dim().pow(n as u32);
        if needed > u128::from(self.basis.cap()) {
            return Err(Error::CapExceeded { needed: needed.min(u64::MAX as u128) as u64, cap: self.basis.cap() });
        }
        let free: Vec<MultiIndex> = self.free_letters().into_iter().map(|a| MultiIndex::new(vec![a])).collect();
        let u = self.lead();
        let base = Cochain::basis(BasisCochain::new(MultiIndex::empty(), x));
        let mut levels: Vec<Vec<Cochain>> = vec![vec![base.clone()]];
        if n >= 1 {
            let mut first = vec![Cochain::basis(BasisCochain::new(vec![u], x))];
            first.extend(free.iter().map(|a| lambda_map(a, &base)));
            levels.push(first);
        }
        for _ in 2..=n {
            let k = levels.len();
            let prev = &levels[k - 1];
            let prev2 = &levels[k - 2];
            let mut next = Vec::with_capacity(needed as usize);
            for a in &free {
                next.extend(prev.iter().map(|c| lambda_map(a, c)));
            }
            next.extend(prev2.iter().map(|c| theta(self, c)));
            for a in &free {
                next.extend(prev2.iter().map(|c| lambda_plus_rho(u, &lambda_map(a, c))));
            }
            levels.push(next);
        }
        Ok(levels.swap_remove(n))
    }
}
