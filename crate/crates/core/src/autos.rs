//! The automorphisms σ (`s_1 ↦ s_1`, `β ↦ β^{-1}`) and τ (`s_1 ↦ s_1^{-1}`,
//! `β ↦ β`) of `G`.
//!
//! Both are stored as generator-image tables. Because `A` is abelian, the
//! image of `s_1^{a_1} ... s_{p-1}^{a_{p-1}}` is a linear function of the
//! exponent vector, so applying an automorphism is one matrix-vector step.

use std::fmt;
use std::ops::BitXor;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use rand::Rng;
use serde::Serialize;

use crate::arith::{binom, u_coefficients, UCoefficients};
use crate::pgroup::{Group, GroupElement};

/// `σ^u τ^v`. Labels compose by XOR and form a Klein four-group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
pub struct AutoLabel {
    pub sigma: bool,
    pub tau: bool,
}

impl AutoLabel {
    pub const IDENTITY: AutoLabel = AutoLabel {
        sigma: false,
        tau: false,
    };
    pub const SIGMA: AutoLabel = AutoLabel {
        sigma: true,
        tau: false,
    };
    pub const TAU: AutoLabel = AutoLabel {
        sigma: false,
        tau: true,
    };
    pub const SIGMA_TAU: AutoLabel = AutoLabel {
        sigma: true,
        tau: true,
    };

    pub const ALL: [AutoLabel; 4] = [
        AutoLabel::IDENTITY,
        AutoLabel::SIGMA,
        AutoLabel::TAU,
        AutoLabel::SIGMA_TAU,
    ];

    pub fn is_identity(self) -> bool {
        !self.sigma && !self.tau
    }
}

impl BitXor for AutoLabel {
    type Output = AutoLabel;

    fn bitxor(self, rhs: AutoLabel) -> AutoLabel {
        AutoLabel {
            sigma: self.sigma ^ rhs.sigma,
            tau: self.tau ^ rhs.tau,
        }
    }
}

impl fmt::Display for AutoLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.sigma, self.tau) {
            (false, false) => f.write_str("1"),
            (true, false) => f.write_str("σ"),
            (false, true) => f.write_str("τ"),
            (true, true) => f.write_str("στ"),
        }
    }
}

/// Images of the generators under σ and τ.
#[derive(Debug, Clone)]
pub struct GeneratorImageTable {
    sigma_images: Vec<GroupElement>,
    tau_images: Vec<GroupElement>,
    beta_sigma_image: GroupElement,
    beta_tau_image: GroupElement,
}

impl GeneratorImageTable {
    /// σ-images from the parity rule: `s_k^σ = s_k^{β^{1-k}}` for odd `k`
    /// and its inverse for even `k`.
    pub fn new(group: &Group) -> Self {
        let n = group.params().rank();
        let sigma_images = (1..=n).map(|k| parity_rule_image(group, k)).collect();
        let tau_images = (1..=n).map(|k| group.inverse(&group.s(k))).collect();
        GeneratorImageTable {
            sigma_images,
            tau_images,
            beta_sigma_image: group.beta_pow(-1),
            beta_tau_image: group.beta(),
        }
    }

    /// Image of `s_i` (1-based) under σ.
    pub fn sigma_image(&self, i: usize) -> &GroupElement {
        &self.sigma_images[i - 1]
    }

    pub fn tau_image(&self, i: usize) -> &GroupElement {
        &self.tau_images[i - 1]
    }

    pub fn beta_sigma_image(&self) -> &GroupElement {
        &self.beta_sigma_image
    }

    pub fn beta_tau_image(&self) -> &GroupElement {
        &self.beta_tau_image
    }

    /// Image of `x` under `σ^u τ^v`.
    pub fn apply(&self, group: &Group, label: AutoLabel, x: &GroupElement) -> GroupElement {
        if label.is_identity() {
            return x.clone();
        }
        let params = group.params();
        let p = group.p();
        let mut a: Vec<BigUint> = if label.sigma {
            let n = params.rank();
            let mut acc = vec![BigUint::zero(); n];
            for (ai, img) in x.exponents().iter().zip(&self.sigma_images) {
                if ai.is_zero() {
                    continue;
                }
                for (slot, v) in acc.iter_mut().zip(img.exponents()) {
                    if !v.is_zero() {
                        *slot += ai * v;
                    }
                }
            }
            acc.into_iter()
                .zip(params.moduli())
                .map(|(v, m)| v % m)
                .collect()
        } else {
            x.exponents().to_vec()
        };
        if label.tau {
            // τ inverts every s_i and fixes β, so it negates the A-part.
            for (v, m) in a.iter_mut().zip(params.moduli()) {
                if !v.is_zero() {
                    *v = m - &*v;
                }
            }
        }
        let b = x.beta_exponent();
        let b = if label.sigma { (p - b) % p } else { b };
        GroupElement::from_reduced(a, b)
    }
}

/// `s_k^{β^{1-k}}` by conjugating with `β^{-1}` repeatedly.
pub fn iterated_conjugate(group: &Group, k: usize) -> GroupElement {
    let beta_inv = group.beta_pow(-1);
    let mut x = group.generator(k);
    for _ in 1..k {
        x = group.conjugate(&x, &beta_inv);
    }
    x
}

/// `Π_{i=k}^{p+1} s_i^{C(p+1-k, i-k)}`, using the derived `s_p`, `s_{p+1}`.
pub fn binomial_conjugate(group: &Group, k: usize) -> GroupElement {
    let p = group.p() as usize;
    assert!(k >= 1 && k <= p, "k must lie in [1, p]");
    let top = (p + 1 - k) as u64;
    (k..=p + 1).fold(group.identity(), |acc, i| {
        let e = binom(top, (i - k) as i64);
        group.multiply(&acc, &group.power(&group.generator(i), &e))
    })
}

fn parity_rule_image(group: &Group, k: usize) -> GroupElement {
    let c = group.conjugate(&group.generator(k), &group.beta_pow(1 - k as i64));
    if k % 2 == 1 {
        c
    } else {
        group.inverse(&c)
    }
}

/// σ-images obtained from the definition alone: `s_1^σ = s_1` and
/// `s_{k+1}^σ = [s_k^σ, β^{-1}]`. Returns `s_1^σ .. s_p^σ`.
pub fn recursive_sigma_images(group: &Group) -> Vec<GroupElement> {
    let p = group.p() as usize;
    let beta_inv = group.beta_pow(-1);
    let mut out = vec![group.s(1)];
    for k in 1..p {
        let next = group.commutator(&out[k - 1], &beta_inv);
        out.push(next);
    }
    out
}

/// Indices `k` in `[1, p]` where the parity rule disagrees with the
/// recursive definition of σ.
pub fn parity_rule_failures(group: &Group) -> Vec<usize> {
    recursive_sigma_images(group)
        .iter()
        .enumerate()
        .filter(|(i, img)| parity_rule_image(group, i + 1) != **img)
        .map(|(i, _)| i + 1)
        .collect()
}

/// Indices `k` in `[1, p]` where the closed form disagrees with iterated
/// conjugation.
pub fn binomial_conjugate_failures(group: &Group) -> Vec<usize> {
    (1..=group.p() as usize)
        .filter(|&k| binomial_conjugate(group, k) != iterated_conjugate(group, k))
        .collect()
}

/// Checks `Π_{i<p} (s_i^σ)^{-C(p,i)} = s_1^{u_1} ... s_{p+1}^{u_{p+1}}
/// = s_p s_{p+1} = s_p^σ` for the given coefficients.
pub fn u_identity_failures(
    group: &Group,
    table: &GeneratorImageTable,
    u: &UCoefficients,
) -> Vec<String> {
    let p = group.p();
    let mut out = Vec::new();
    let lhs = (1..p as usize).fold(group.identity(), |acc, i| {
        let e = -binom(p, i as i64);
        group.multiply(&acc, &group.power(table.sigma_image(i), &e))
    });
    let expanded = (1..=p as usize + 1).fold(group.identity(), |acc, i| {
        group.multiply(&acc, &group.power(&group.generator(i), u.get(i)))
    });
    let sp_sp1 = group.multiply(&group.derived_sp(), &group.derived_sp1());
    let sp_sigma = table.apply(group, AutoLabel::SIGMA, &group.derived_sp());
    if lhs != expanded {
        out.push(format!(
            "Π (s_i^σ)^(-C(p,i)) = {lhs} but Π s_i^u_i = {expanded}"
        ));
    }
    if expanded != sp_sp1 {
        out.push(format!("Π s_i^u_i = {expanded} but s_p s_(p+1) = {sp_sp1}"));
    }
    if sp_sigma != sp_sp1 {
        out.push(format!("s_p^σ = {sp_sigma} but s_p s_(p+1) = {sp_sp1}"));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationOutcome {
    pub label: AutoLabel,
    pub generator_pairs: usize,
    pub random_pairs: usize,
    pub failures: Vec<String>,
}

impl VerificationOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks that `label` acts as an automorphism: homomorphism on all
/// generator pairs and `samples` random pairs, involution on generators and
/// random elements, and that every defining relation maps to a relation.
pub fn verify_automorphism<R: Rng + ?Sized>(
    group: &Group,
    table: &GeneratorImageTable,
    label: AutoLabel,
    samples: usize,
    rng: &mut R,
) -> VerificationOutcome {
    let params = group.params();
    let n = params.rank();
    let p = group.p();
    let id = group.identity();
    let apply = |x: &GroupElement| table.apply(group, label, x);
    let mut failures = Vec::new();

    let mut gens: Vec<GroupElement> = (1..=n).map(|i| group.s(i)).collect();
    gens.push(group.beta());

    let check_pair = |x: &GroupElement, y: &GroupElement, failures: &mut Vec<String>| {
        let lhs = apply(&group.multiply(x, y));
        let rhs = group.multiply(&apply(x), &apply(y));
        if lhs != rhs {
            failures.push(format!(
                "{label}({x} · {y}) = {lhs}, product of images {rhs}"
            ));
        }
    };
    for x in &gens {
        for y in &gens {
            check_pair(x, y, &mut failures);
        }
    }
    for _ in 0..samples {
        let x = group.random_element(rng);
        let y = group.random_element(rng);
        check_pair(&x, &y, &mut failures);
    }

    let randoms: Vec<GroupElement> = (0..samples).map(|_| group.random_element(rng)).collect();
    for x in gens.iter().chain(&randoms) {
        if apply(&apply(x)) != *x {
            failures.push(format!("{label} applied twice moves {x}"));
        }
    }

    let img_s: Vec<GroupElement> = (1..=n).map(|i| apply(&group.s(i))).collect();
    let img_b = apply(&group.beta());
    for (i, img) in img_s.iter().enumerate() {
        let m = BigInt::from(params.modulus(i + 1).clone());
        if group.power(img, &m) != id {
            failures.push(format!("image of s_{} does not satisfy s^{m} = 1", i + 1));
        }
        for (j, other) in img_s.iter().enumerate().skip(i + 1) {
            if group.commutator(img, other) != id {
                failures.push(format!(
                    "images of s_{} and s_{} do not commute",
                    i + 1,
                    j + 1
                ));
            }
        }
    }
    if group.pow(&img_b, p as i64) != id {
        failures.push("image of β does not satisfy β^p = 1".into());
    }
    for k in 1..n {
        if group.commutator(&img_s[k - 1], &img_b) != img_s[k] {
            failures.push(format!(
                "image of s_{} is not [image of s_{k}, image of β]",
                k + 1
            ));
        }
    }
    let last = group.commutator(&img_s[n - 1], &img_b);
    let product = img_s.iter().enumerate().fold(id.clone(), |acc, (i, img)| {
        group.multiply(&acc, &group.power(img, &-binom(p, i as i64 + 1)))
    });
    if last != product {
        failures.push(format!(
            "[image of s_{n}, image of β] = {last} but Π (image of s_i)^(-C(p,i)) = {product}"
        ));
    }
    if label.sigma {
        match u_coefficients(p) {
            Ok(u) => failures.extend(u_identity_failures(group, table, &u)),
            Err(e) => failures.push(e.to_string()),
        }
    }

    VerificationOutcome {
        label,
        generator_pairs: gens.len() * gens.len(),
        random_pairs: samples,
        failures,
    }
}

/// `σ² = τ² = (στ)² = 1` and `στ = τσ`, checked on every generator.
pub fn verify_klein_four(group: &Group, table: &GeneratorImageTable) -> bool {
    let n = group.params().rank();
    let mut gens: Vec<GroupElement> = (1..=n).map(|i| group.s(i)).collect();
    gens.push(group.beta());
    let ap = |l: AutoLabel, x: &GroupElement| table.apply(group, l, x);
    gens.iter().all(|x| {
        let squares = [AutoLabel::SIGMA, AutoLabel::TAU, AutoLabel::SIGMA_TAU]
            .iter()
            .all(|&l| ap(l, &ap(l, x)) == *x);
        let st = ap(AutoLabel::SIGMA, &ap(AutoLabel::TAU, x));
        let ts = ap(AutoLabel::TAU, &ap(AutoLabel::SIGMA, x));
        squares && st == ts && st == ap(AutoLabel::SIGMA_TAU, x)
    })
}
