//! The split extension `R = G ⋊ ⟨σ, τ⟩` of order `4 p^m`.
//!
//! An element `(g, α)` stands for the product `g α`. Multiplication is
//!
//! ```text
//! (g1, α1) (g2, α2) = (g1 · α1(g2), α1 α2)
//! ```
//!
//! Every label is an involution and the labels commute, so conjugating `g2`
//! past `α1` is just applying `α1`; no inverse is ever taken on the label side.

use std::fmt;

use indexmap::IndexSet;
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::autos::{AutoLabel, GeneratorImageTable};
use crate::closure::{closure, CapExceeded};
use crate::json::BigNum;
use crate::pgroup::{Group, GroupElement};

/// Default bound on explicit enumerations of `R` and its subgroups.
pub const DEFAULT_CLOSURE_CAP: usize = 400_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtElement {
    g: GroupElement,
    label: AutoLabel,
}

impl ExtElement {
    pub fn new(g: GroupElement, label: AutoLabel) -> Self {
        ExtElement { g, label }
    }

    pub fn group_part(&self) -> &GroupElement {
        &self.g
    }

    pub fn label(&self) -> AutoLabel {
        self.label
    }
}

impl Serialize for ExtElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let a: Vec<BigNum<'_>> = self.g.exponents().iter().map(BigNum).collect();
        let mut st = s.serialize_struct("ExtElement", 4)?;
        st.serialize_field("a", &a)?;
        st.serialize_field("b", &self.g.beta_exponent())?;
        st.serialize_field("sigma", &u8::from(self.label.sigma))?;
        st.serialize_field("tau", &u8::from(self.label.tau))?;
        st.end()
    }
}

impl fmt::Display for ExtElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.label.is_identity() {
            write!(f, "{}", self.g)
        } else {
            write!(f, "{}·{}", self.g, self.label)
        }
    }
}

#[derive(Debug, Clone)]
pub struct Extension {
    group: Group,
    table: GeneratorImageTable,
}

impl Extension {
    pub fn new(group: Group) -> Self {
        let table = GeneratorImageTable::new(&group);
        Extension { group, table }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn table(&self) -> &GeneratorImageTable {
        &self.table
    }

    pub fn identity(&self) -> ExtElement {
        ExtElement::new(self.group.identity(), AutoLabel::IDENTITY)
    }

    /// `g ↦ (g, 1)`.
    pub fn embed(&self, g: GroupElement) -> ExtElement {
        ExtElement::new(g, AutoLabel::IDENTITY)
    }

    /// `(1, α)`.
    pub fn label(&self, label: AutoLabel) -> ExtElement {
        ExtElement::new(self.group.identity(), label)
    }

    pub fn apply_auto(&self, label: AutoLabel, g: &GroupElement) -> GroupElement {
        self.table.apply(&self.group, label, g)
    }

    pub fn multiply(&self, x: &ExtElement, y: &ExtElement) -> ExtElement {
        let twisted = self.apply_auto(x.label, &y.g);
        ExtElement::new(self.group.multiply(&x.g, &twisted), x.label ^ y.label)
    }

    /// `(g, α)^{-1} = (α(g^{-1}), α)`.
    pub fn inverse(&self, x: &ExtElement) -> ExtElement {
        let inv = self.group.inverse(&x.g);
        ExtElement::new(self.apply_auto(x.label, &inv), x.label)
    }

    pub fn pow(&self, x: &ExtElement, k: u64) -> ExtElement {
        let mut acc = self.identity();
        let mut sq = x.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.multiply(&acc, &sq);
            }
            k >>= 1;
            if k > 0 {
                sq = self.multiply(&sq, &sq);
            }
        }
        acc
    }

    /// Least `k >= 1` with `x^k = 1`, found by iterated multiplication.
    /// `None` if no power within `|R| = 4p^m` steps returns to the identity,
    /// which only happens when the arithmetic is not that of a group.
    pub fn order(&self, x: &ExtElement) -> Option<u64> {
        let cap = self
            .group
            .params()
            .extension_order()
            .to_u64()
            .unwrap_or(u64::MAX);
        let id = self.identity();
        let mut y = x.clone();
        let mut k = 1u64;
        while y != id {
            if k >= cap {
                return None;
            }
            y = self.multiply(&y, x);
            k += 1;
        }
        Some(k)
    }

    /// The subgroup generated by `generators`, in breadth-first order.
    pub fn closure(
        &self,
        generators: &[ExtElement],
        cap: usize,
    ) -> Result<IndexSet<ExtElement>, CapExceeded> {
        closure(self.identity(), generators, cap, |x, y| self.multiply(x, y))
    }

    /// `|R| <= cap`, so full enumerations are allowed.
    pub fn fits(&self, cap: usize) -> bool {
        self.group.params().extension_order() <= BigUint::from(cap)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pgroup::GroupParams;

    fn ext(p: u64, e: u32, r: u64) -> Extension {
        Extension::new(Group::new(GroupParams::new(p, e, r).unwrap()))
    }

    #[test]
    fn rho_products() {
        let r = ext(5, 1, 3);
        let g = r.group();
        let st = AutoLabel::SIGMA_TAU;
        let rho0 = ExtElement::new(g.s(1), st);
        let rho1 = ExtElement::new(g.beta(), st);
        assert_eq!(r.multiply(&rho1, &rho1), r.identity());
        assert_eq!(r.multiply(&rho0, &rho0), r.identity());
        let prod = r.multiply(&rho0, &rho1);
        assert_eq!(prod, r.embed(g.multiply(&g.s(1), &g.beta_pow(-1))));
    }

    #[test]
    fn identity_is_neutral_and_inverse_works() {
        let r = ext(3, 2, 2);
        let g = r.group();
        let x = ExtElement::new(g.multiply(&g.s(2), &g.beta()), AutoLabel::SIGMA);
        assert_eq!(r.multiply(&r.identity(), &x), x);
        assert_eq!(r.multiply(&x, &r.identity()), x);
        assert_eq!(r.multiply(&x, &r.inverse(&x)), r.identity());
        assert_eq!(r.multiply(&r.inverse(&x), &x), r.identity());
    }

    #[test]
    fn orders() {
        let r = ext(5, 1, 2);
        let g = r.group();
        assert_eq!(r.order(&r.identity()), Some(1));
        assert_eq!(r.order(&r.embed(g.beta_pow(2))), Some(5));
        // ρ1ρ2 = (β, τ)
        assert_eq!(
            r.order(&ExtElement::new(g.beta(), AutoLabel::TAU)),
            Some(10)
        );
        assert_eq!(r.order(&r.label(AutoLabel::SIGMA)), Some(2));
    }

    #[test]
    fn pow_matches_iteration() {
        let r = ext(3, 2, 1);
        let g = r.group();
        let x = ExtElement::new(g.multiply(&g.s(1), &g.beta()), AutoLabel::TAU);
        let mut acc = r.identity();
        for k in 0..20 {
            assert_eq!(r.pow(&x, k), acc);
            acc = r.multiply(&acc, &x);
        }
    }

    #[test]
    fn closure_sizes() {
        let r = ext(3, 1, 2);
        let g = r.group();
        let st = AutoLabel::SIGMA_TAU;
        let rho0 = ExtElement::new(g.s(1), st);
        let rho1 = ExtElement::new(g.beta(), st);
        let rho2 = r.label(AutoLabel::SIGMA);
        assert_eq!(r.closure(&[r.identity()], 10).unwrap().len(), 1);
        assert_eq!(
            r.closure(&[rho0.clone(), rho1.clone()], 1000)
                .unwrap()
                .len(),
            6
        );
        assert_eq!(
            r.closure(&[rho1.clone(), rho2.clone()], 1000)
                .unwrap()
                .len(),
            12
        );
        assert_eq!(r.closure(&[rho0, rho1, rho2], 1000).unwrap().len(), 108);
    }

    #[test]
    fn closure_cap() {
        let r = ext(3, 1, 2);
        let g = r.group();
        let err = r
            .closure(&[r.embed(g.s(1)), r.embed(g.beta())], 10)
            .unwrap_err();
        assert_eq!(err.cap, 10);
    }

    #[test]
    fn serialization_shape() {
        let r = ext(3, 2, 1);
        let g = r.group();
        let x = ExtElement::new(g.element_i64(&[4, 2], 1), AutoLabel::SIGMA_TAU);
        let json = serde_json::to_string(&x).unwrap();
        assert_eq!(json, r#"{"a":[4,2],"b":1,"sigma":1,"tau":1}"#);
    }
}
