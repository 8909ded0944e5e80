//! The involutions `ρ0 = s_1 τσ`, `ρ1 = β τσ`, `ρ2 = σ` and the string
//! C-group checks on `(R, {ρ0, ρ1, ρ2})`.

use std::collections::HashSet;

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::u_coefficients;
use crate::autos::{
    binomial_conjugate_failures, parity_rule_failures, u_identity_failures, verify_automorphism,
    verify_klein_four, AutoLabel,
};
use crate::extension::{ExtElement, Extension, DEFAULT_CLOSURE_CAP};
use crate::json;
use crate::pgroup::{BetaAction, Group, GroupParams, ParamError, DEFAULT_ENUMERATION_CAP};

/// Outcome of one check. `Skipped` means an enumeration cap prevented it
/// from running.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Pass,
    Fail,
    Skipped,
}

impl Check {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Check::Pass
        } else {
            Check::Fail
        }
    }

    pub fn is_fail(self) -> bool {
        self == Check::Fail
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Check::Pass => "pass",
            Check::Fail => "fail",
            Check::Skipped => "skipped",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CGroupGenerators {
    pub rho0: ExtElement,
    pub rho1: ExtElement,
    pub rho2: ExtElement,
}

impl CGroupGenerators {
    pub fn as_array(&self) -> [ExtElement; 3] {
        [self.rho0.clone(), self.rho1.clone(), self.rho2.clone()]
    }

    /// The generators of the parabolic subgroup omitting `ρ_i`.
    pub fn omitting(&self, i: usize) -> [ExtElement; 2] {
        match i {
            0 => [self.rho1.clone(), self.rho2.clone()],
            1 => [self.rho0.clone(), self.rho2.clone()],
            2 => [self.rho0.clone(), self.rho1.clone()],
            _ => panic!("rank-3 generators are indexed 0..3"),
        }
    }
}

pub fn build_generators(ext: &Extension) -> CGroupGenerators {
    let g = ext.group();
    CGroupGenerators {
        rho0: ExtElement::new(g.s(1), AutoLabel::SIGMA_TAU),
        rho1: ExtElement::new(g.beta(), AutoLabel::SIGMA_TAU),
        rho2: ext.label(AutoLabel::SIGMA),
    }
}

/// `ρ_i^2 = 1` for each `i` and `(ρ0 ρ2)^2 = 1`.
pub fn check_sggi(ext: &Extension, gens: &CGroupGenerators) -> bool {
    let id = ext.identity();
    let sq = |x: &ExtElement| ext.multiply(x, x);
    let r02 = ext.multiply(&gens.rho0, &gens.rho2);
    sq(&gens.rho0) == id && sq(&gens.rho1) == id && sq(&gens.rho2) == id && sq(&r02) == id
}

/// Orders of `ρ0ρ1` and `ρ1ρ2`; 0 stands for "no finite order found".
pub fn schlafli_type(ext: &Extension, gens: &CGroupGenerators) -> (u64, u64) {
    let a = ext
        .order(&ext.multiply(&gens.rho0, &gens.rho1))
        .unwrap_or(0);
    let b = ext
        .order(&ext.multiply(&gens.rho1, &gens.rho2))
        .unwrap_or(0);
    (a, b)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionOutcome {
    pub holds: bool,
    pub left_order: usize,
    pub right_order: usize,
    pub intersection: Vec<ExtElement>,
}

/// `⟨ρ0, ρ1⟩ ∩ ⟨ρ1, ρ2⟩ = {1, ρ1}`, by intersecting explicit element sets.
pub fn check_intersection_property(
    ext: &Extension,
    gens: &CGroupGenerators,
    cap: usize,
) -> Result<IntersectionOutcome, crate::closure::CapExceeded> {
    let left = ext.closure(&[gens.rho0.clone(), gens.rho1.clone()], cap)?;
    let right = ext.closure(&[gens.rho1.clone(), gens.rho2.clone()], cap)?;
    let mut intersection: Vec<ExtElement> = left
        .iter()
        .filter(|x| right.contains(*x))
        .cloned()
        .collect();
    intersection.sort();
    let want: HashSet<ExtElement> = [ext.identity(), gens.rho1.clone()].into_iter().collect();
    let got: HashSet<ExtElement> = intersection.iter().cloned().collect();
    Ok(IntersectionOutcome {
        holds: got == want,
        left_order: left.len(),
        right_order: right.len(),
        intersection,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SubgroupOrders {
    pub rho01: usize,
    pub rho12: usize,
    pub rho02: usize,
}

pub fn subgroup_orders(
    ext: &Extension,
    gens: &CGroupGenerators,
    cap: usize,
) -> Result<SubgroupOrders, crate::closure::CapExceeded> {
    Ok(SubgroupOrders {
        rho01: ext.closure(&gens.omitting(2), cap)?.len(),
        rho12: ext.closure(&gens.omitting(0), cap)?.len(),
        rho02: ext.closure(&gens.omitting(1), cap)?.len(),
    })
}

/// Every pair of generators generates a subgroup of the expected order
/// (`2p`, `4p`, `4`), each strictly smaller than `|R|`. For three
/// generators this is exactly minimality of the generating set.
pub fn check_minimality(
    ext: &Extension,
    gens: &CGroupGenerators,
    cap: usize,
) -> Result<bool, crate::closure::CapExceeded> {
    let p = ext.group().p() as usize;
    let orders = subgroup_orders(ext, gens, cap)?;
    let total = ext.group().params().extension_order();
    let proper = [orders.rho01, orders.rho12, orders.rho02]
        .iter()
        .all(|&n| BigUint::from(n) < total);
    Ok(proper && orders.rho01 == 2 * p && orders.rho12 == 4 * p && orders.rho02 == 4)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenerationOutcome {
    /// `(ρ1ρ2)^p = τ`, `(ρ1ρ2)^{p+1} = β`, `ρ2 = σ`, `(ρ0ρ2)(ρ1ρ2)^p = s_1`.
    pub witnesses: bool,
    /// `|⟨s_1, β⟩| = p^m`.
    pub base_closure: Check,
    /// `|⟨ρ0, ρ1, ρ2⟩| = 4p^m`.
    pub full_closure: Check,
    pub full_order: Option<usize>,
}

impl GenerationOutcome {
    pub fn check(&self) -> Check {
        if !self.witnesses || self.base_closure.is_fail() || self.full_closure.is_fail() {
            Check::Fail
        } else if self.base_closure == Check::Skipped || self.full_closure == Check::Skipped {
            Check::Skipped
        } else {
            Check::Pass
        }
    }
}

pub fn check_generation(ext: &Extension, gens: &CGroupGenerators, cap: usize) -> GenerationOutcome {
    let g = ext.group();
    let params = g.params();
    let p = g.p();
    let r12 = ext.multiply(&gens.rho1, &gens.rho2);
    let tau = ext.pow(&r12, p);
    let beta = ext.pow(&r12, p + 1);
    let s1 = ext.multiply(&ext.multiply(&gens.rho0, &gens.rho2), &tau);
    let witnesses = tau == ext.label(AutoLabel::TAU)
        && beta == ext.embed(g.beta())
        && gens.rho2 == ext.label(AutoLabel::SIGMA)
        && s1 == ext.embed(g.s(1));

    let base_closure = if params.group_order() <= &BigUint::from(cap) {
        match g.generated_subgroup(&[g.s(1), g.beta()], cap) {
            Ok(set) => Check::from_bool(BigUint::from(set.len()) == *params.group_order()),
            Err(_) => Check::Fail,
        }
    } else {
        Check::Skipped
    };
    let (full_closure, full_order) = if ext.fits(cap) {
        match ext.closure(&gens.as_array(), cap) {
            Ok(set) => (
                Check::from_bool(BigUint::from(set.len()) == params.extension_order()),
                Some(set.len()),
            ),
            Err(_) => (Check::Fail, None),
        }
    } else {
        (Check::Skipped, None)
    };
    GenerationOutcome {
        witnesses,
        base_closure,
        full_closure,
        full_order,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyConfig {
    /// Largest explicit enumeration of `R` or one of its subgroups.
    pub cap: usize,
    /// Largest `|G|` for the exhaustive order check outside `A`.
    pub hughes_cap: u64,
    /// Random pairs per automorphism check.
    pub samples: usize,
    /// Random triples for the commutator identities.
    pub commutator_samples: usize,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            cap: DEFAULT_CLOSURE_CAP,
            hughes_cap: DEFAULT_ENUMERATION_CAP,
            samples: 500,
            commutator_samples: 1000,
            seed: 0,
        }
    }
}

/// Deliberate corruptions of the construction, used to show the checks can
/// fail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Mutation {
    /// Replace `ρ1` by `(β^k, στ)`.
    Rho1BetaPower(i64),
    /// Replace `ρ1` by an arbitrary element.
    Rho1(ExtElementSpec),
    /// Add `delta` to entry `(row, col)` (0-based) of the β-action matrix.
    ActionEntry { row: usize, col: usize, delta: i64 },
    /// Add `delta` to `u_index` (1-based).
    UCoefficient { index: usize, delta: i64 },
}

/// Plain description of an element of `R`, resolved against a group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtElementSpec {
    pub a: Vec<i64>,
    pub b: i64,
    pub label: AutoLabel,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParamsSummary {
    pub p: u64,
    pub e: u32,
    pub r: u64,
    pub m: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub params: ParamsSummary,
    pub valid: bool,
    #[serde(serialize_with = "opt_biguint")]
    pub group_order: Option<BigUint>,
    pub group_order_enumerated: bool,
    pub schlafli: Option<[u64; 2]>,
    pub relations_ok: Check,
    pub sggi_ok: Check,
    pub type_ok: Check,
    pub generation_ok: Check,
    pub minimality_ok: Check,
    pub intersection_ok: Check,
    pub hughes_ok: Check,
    pub automorphisms_ok: Check,
    pub klein_four_ok: Check,
    pub conjugate_form_ok: Check,
    pub parity_rule_ok: Check,
    pub u_identity_ok: Check,
    pub commutator_identities_ok: Check,
    pub subgroup_orders: Option<SubgroupOrders>,
    pub intersection_size: Option<usize>,
    pub notes: Vec<String>,
}

fn opt_biguint<S: serde::Serializer>(v: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => json::biguint(v, s),
        None => s.serialize_none(),
    }
}

impl VerificationReport {
    fn invalid(p: u64, e: u32, r: u64, err: &ParamError) -> Self {
        VerificationReport {
            params: ParamsSummary { p, e, r, m: None },
            valid: false,
            group_order: None,
            group_order_enumerated: false,
            schlafli: None,
            relations_ok: Check::Skipped,
            sggi_ok: Check::Skipped,
            type_ok: Check::Skipped,
            generation_ok: Check::Skipped,
            minimality_ok: Check::Skipped,
            intersection_ok: Check::Skipped,
            hughes_ok: Check::Skipped,
            automorphisms_ok: Check::Skipped,
            klein_four_ok: Check::Skipped,
            conjugate_form_ok: Check::Skipped,
            parity_rule_ok: Check::Skipped,
            u_identity_ok: Check::Skipped,
            commutator_identities_ok: Check::Skipped,
            subgroup_orders: None,
            intersection_size: None,
            notes: vec![format!("invalid parameters: {err}")],
        }
    }

    /// Named checks in a fixed order.
    pub fn checks(&self) -> [(&'static str, Check); 13] {
        [
            ("relations", self.relations_ok),
            ("sggi", self.sggi_ok),
            ("type", self.type_ok),
            ("generation", self.generation_ok),
            ("minimality", self.minimality_ok),
            ("intersection", self.intersection_ok),
            ("hughes", self.hughes_ok),
            ("automorphisms", self.automorphisms_ok),
            ("klein_four", self.klein_four_ok),
            ("conjugate_form", self.conjugate_form_ok),
            ("parity_rule", self.parity_rule_ok),
            ("u_identity", self.u_identity_ok),
            ("commutator_identities", self.commutator_identities_ok),
        ]
    }

    /// Valid parameters and no failed check.
    pub fn passed(&self) -> bool {
        self.valid && self.checks().iter().all(|(_, c)| !c.is_fail())
    }

    pub fn failed_checks(&self) -> Vec<&'static str> {
        self.checks()
            .iter()
            .filter(|(_, c)| c.is_fail())
            .map(|(n, _)| *n)
            .collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let m = self.params.m.map_or("-".to_string(), |m| m.to_string());
        out.push_str(&format!(
            "instance       p={} e={} r={} m={}\n",
            self.params.p, self.params.e, self.params.r, m
        ));
        if let Some(order) = &self.group_order {
            let how = if self.group_order_enumerated {
                "enumerated"
            } else {
                "closed form"
            };
            out.push_str(&format!("group order    {order} ({how})\n"));
        }
        if let Some([a, b]) = self.schlafli {
            out.push_str(&format!("schlafli       {{{a}, {b}}}\n"));
        }
        for (name, c) in self.checks() {
            out.push_str(&format!("{name:<22} {}\n", c.as_str()));
        }
        for note in &self.notes {
            out.push_str(&format!("note: {note}\n"));
        }
        out.push_str(&format!(
            "overall        {}\n",
            if self.passed() { "PASS" } else { "FAIL" }
        ));
        out
    }
}

/// Runs every check for one parameter triple. Invalid triples produce a
/// report with the error in `notes`.
pub fn verify_instance(p: u64, e: u32, r: u64, config: &VerifyConfig) -> VerificationReport {
    verify_instance_with(p, e, r, config, &[])
}

pub fn verify_instance_with(
    p: u64,
    e: u32,
    r: u64,
    config: &VerifyConfig,
    mutations: &[Mutation],
) -> VerificationReport {
    match GroupParams::new(p, e, r) {
        Ok(params) => verify_params(&params, config, mutations),
        Err(err) => VerificationReport::invalid(p, e, r, &err),
    }
}

pub fn verify_params(
    params: &GroupParams,
    config: &VerifyConfig,
    mutations: &[Mutation],
) -> VerificationReport {
    let mut notes = Vec::new();
    let p = params.p();

    let mut matrix = BetaAction::standard(params).matrix().to_vec();
    let mut action_mutated = false;
    for m in mutations {
        if let Mutation::ActionEntry { row, col, delta } = m {
            matrix[*row][*col] += BigInt::from(*delta);
            action_mutated = true;
        }
    }
    let group = if action_mutated {
        Group::with_action(params.clone(), BetaAction::from_matrix(params, matrix))
    } else {
        Group::new(params.clone())
    };
    let ext = Extension::new(group);
    let group = ext.group();

    let mut gens = build_generators(&ext);
    for m in mutations {
        match m {
            Mutation::Rho1BetaPower(k) => {
                gens.rho1 = ExtElement::new(group.beta_pow(*k), AutoLabel::SIGMA_TAU);
            }
            Mutation::Rho1(spec) => {
                gens.rho1 = ExtElement::new(group.element_i64(&spec.a, spec.b), spec.label);
            }
            _ => {}
        }
    }
    if params.has_degenerate_tail() {
        notes.push(format!(
            "degenerate tail generators: s_{}..s_{} are trivial (e = 1)",
            params.r() + 1,
            p - 1
        ));
    }

    let relation_failures = group.relation_failures();
    notes.extend(relation_failures.iter().take(5).cloned());
    let relations_ok = Check::from_bool(relation_failures.is_empty());

    let sggi_ok = Check::from_bool(check_sggi(&ext, &gens));
    let (a, b) = schlafli_type(&ext, &gens);
    let type_ok = Check::from_bool(a == p && b == 2 * p);

    let generation = check_generation(&ext, &gens, config.cap);
    if !generation.witnesses {
        notes.push("generation witnesses (ρ1ρ2)^p = τ, (ρ1ρ2)^(p+1) = β failed".into());
    } else if generation.full_closure == Check::Skipped {
        notes.push("generation witnesses hold; full closure skipped (over cap)".into());
    }

    let (minimality_ok, subgroup_orders_v) = match subgroup_orders(&ext, &gens, config.cap) {
        Ok(orders) => {
            let ok = check_minimality(&ext, &gens, config.cap).unwrap_or(false);
            (Check::from_bool(ok), Some(orders))
        }
        Err(e) => {
            notes.push(format!("rank-2 subgroup enumeration failed: {e}"));
            (Check::Fail, None)
        }
    };

    let (intersection_ok, intersection_size) =
        match check_intersection_property(&ext, &gens, config.cap) {
            Ok(out) => (Check::from_bool(out.holds), Some(out.intersection.len())),
            Err(e) => {
                notes.push(format!("intersection enumeration failed: {e}"));
                (Check::Fail, None)
            }
        };

    let hughes_ok = match group.hughes_check(config.hughes_cap) {
        Ok(ok) => Check::from_bool(ok),
        Err(_) => {
            notes.push(format!(
                "order check outside A skipped: p^m exceeds {}",
                config.hughes_cap
            ));
            Check::Skipped
        }
    };

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let table = ext.table();
    let mut auto_ok = true;
    for label in [AutoLabel::SIGMA, AutoLabel::TAU] {
        let out = verify_automorphism(group, table, label, config.samples, &mut rng);
        if !out.passed() {
            auto_ok = false;
            notes.extend(out.failures.into_iter().take(3));
        }
    }
    let automorphisms_ok = Check::from_bool(auto_ok);
    let klein_four_ok = Check::from_bool(verify_klein_four(group, table));
    let conjugate_form_ok = Check::from_bool(binomial_conjugate_failures(group).is_empty());
    let parity_rule_ok = Check::from_bool(parity_rule_failures(group).is_empty());

    let u_identity_ok = match u_coefficients(p) {
        Ok(mut u) => {
            for m in mutations {
                if let Mutation::UCoefficient { index, delta } = m {
                    let v = u.get(*index) + BigInt::from(*delta);
                    u = u.with_value(*index, v);
                }
            }
            let fails = u_identity_failures(group, table, &u);
            notes.extend(fails.iter().take(3).cloned());
            Check::from_bool(fails.is_empty())
        }
        Err(e) => {
            notes.push(e.to_string());
            Check::Fail
        }
    };

    let comm = group.commutator_identity_failures(config.commutator_samples, &mut rng);
    let commutator_identities_ok = Check::from_bool(comm.is_empty());

    notes.push("other polytopes with the same group are not ruled out".into());
    if p == 3 {
        notes.push("toroidal map parameters (b, c) not identified".into());
    }

    let (group_order, group_order_enumerated) = match generation.full_order {
        Some(n) => (BigUint::from(n), true),
        None => (params.extension_order(), false),
    };

    VerificationReport {
        params: ParamsSummary {
            p,
            e: params.e(),
            r: params.r(),
            m: Some(params.m()),
        },
        valid: true,
        group_order: Some(group_order),
        group_order_enumerated,
        schlafli: Some([a, b]),
        relations_ok,
        sggi_ok,
        type_ok,
        generation_ok: generation.check(),
        minimality_ok,
        intersection_ok,
        hughes_ok,
        automorphisms_ok,
        klein_four_ok,
        conjugate_form_ok,
        parity_rule_ok,
        u_identity_ok,
        commutator_identities_ok,
        subgroup_orders: subgroup_orders_v,
        intersection_size,
        notes,
    }
}

/// Every valid `(p, e, r)` with `p` an odd prime up to `p_max` and
/// `4 p^m <= order_cap`, sorted by `(p, e, r)`.
pub fn sweep_params(p_max: u64, order_cap: u64) -> Vec<GroupParams> {
    let mut out = Vec::new();
    for p in 3..=p_max.min(crate::pgroup::MAX_P) {
        if !crate::arith::is_odd_prime(p) {
            continue;
        }
        // For fixed r, m grows with e; once no r fits, no larger e will.
        for e in 1u32.. {
            let mut any_small = false;
            for r in 1..p {
                let Ok(params) = GroupParams::new(p, e, r) else {
                    continue;
                };
                let fits = params
                    .extension_order()
                    .to_u64()
                    .is_some_and(|n| n <= order_cap);
                if fits {
                    any_small = true;
                    out.push(params);
                }
            }
            if !any_small {
                break;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ext(p: u64, e: u32, r: u64) -> Extension {
        Extension::new(Group::new(GroupParams::new(p, e, r).unwrap()))
    }

    #[test]
    fn generators_are_involutions() {
        let r = ext(3, 1, 2);
        let gens = build_generators(&r);
        for x in gens.as_array() {
            assert_eq!(r.order(&x), Some(2));
        }
        let r02 = r.multiply(&gens.rho0, &gens.rho2);
        assert_eq!(r.multiply(&r02, &r02), r.identity());
    }

    #[test]
    fn sggi_and_negative_control() {
        for (p, e, rr) in [(3, 1, 2), (5, 1, 3)] {
            let r = ext(p, e, rr);
            let mut gens = build_generators(&r);
            assert!(check_sggi(&r, &gens));
            gens.rho0 = ExtElement::new(r.group().s(1), AutoLabel::SIGMA);
            assert!(!check_sggi(&r, &gens));
        }
    }

    #[test]
    fn schlafli_examples() {
        for (p, e, rr) in [(3, 1, 2), (5, 1, 2), (7, 1, 2)] {
            let r = ext(p, e, rr);
            let gens = build_generators(&r);
            assert_eq!(schlafli_type(&r, &gens), (p, 2 * p));
        }
    }

    #[test]
    fn rho12_squared_is_beta_squared() {
        let r = ext(5, 2, 1);
        let gens = build_generators(&r);
        let r12 = r.multiply(&gens.rho1, &gens.rho2);
        assert_eq!(r.multiply(&r12, &r12), r.embed(r.group().beta_pow(2)));
        let r01 = r.multiply(&gens.rho0, &gens.rho1);
        assert!(!r01.group_part().in_abelian());
        assert!(r01.label().is_identity());
    }

    #[test]
    fn intersection_examples() {
        for (p, e, rr) in [(3, 1, 2), (5, 1, 4), (3, 2, 2)] {
            let r = ext(p, e, rr);
            let gens = build_generators(&r);
            let out = check_intersection_property(&r, &gens, 10_000).unwrap();
            assert!(out.holds);
            assert_eq!(out.intersection.len(), 2);
            assert_eq!(out.left_order, 2 * p as usize);
            assert_eq!(out.right_order, 4 * p as usize);
        }
    }

    #[test]
    fn minimality_examples() {
        let r = ext(3, 1, 2);
        let gens = build_generators(&r);
        let orders = subgroup_orders(&r, &gens, 1000).unwrap();
        assert_eq!(
            orders,
            SubgroupOrders {
                rho01: 6,
                rho12: 12,
                rho02: 4
            }
        );
        assert_eq!(check_minimality(&r, &gens, 1000), Ok(true));
        let r = ext(5, 2, 1);
        let gens = build_generators(&r);
        assert_eq!(check_minimality(&r, &gens, 1000), Ok(true));
    }

    #[test]
    fn generation_examples() {
        let r = ext(3, 1, 2);
        let gens = build_generators(&r);
        let out = check_generation(&r, &gens, 1000);
        assert!(out.witnesses);
        assert_eq!(out.base_closure, Check::Pass);
        assert_eq!(out.full_closure, Check::Pass);
        assert_eq!(out.full_order, Some(108));
        // over cap: witnesses only
        let out = check_generation(&r, &gens, 50);
        assert!(out.witnesses);
        assert_eq!(out.full_closure, Check::Skipped);
        assert_eq!(out.check(), Check::Skipped);
    }

    #[test]
    fn wrong_rho1_breaks_generation_witness() {
        let r = ext(5, 1, 2);
        let mut gens = build_generators(&r);
        gens.rho1 = ExtElement::new(r.group().beta_pow(2), AutoLabel::SIGMA_TAU);
        assert!(!check_generation(&r, &gens, 10_000).witnesses);
    }

    #[test]
    fn verify_small_instances() {
        let config = VerifyConfig::default();
        let rep = verify_instance(3, 1, 2, &config);
        assert!(rep.passed(), "{}", rep.to_text());
        assert_eq!(rep.schlafli, Some([3, 6]));
        assert_eq!(rep.group_order, Some(BigUint::from(108u32)));
        assert!(rep.group_order_enumerated);
        let rep = verify_instance(5, 1, 2, &config);
        assert!(rep.passed(), "{}", rep.to_text());
        assert_eq!(rep.schlafli, Some([5, 10]));
        assert_eq!(rep.group_order, Some(BigUint::from(500u32)));
    }

    #[test]
    fn invalid_params_surface_in_notes() {
        let rep = verify_instance(3, 1, 1, &VerifyConfig::default());
        assert!(!rep.valid);
        assert!(!rep.passed());
        assert!(rep.notes[0].contains("m = e*r + (e-1)*(p-r-1) + 1 = 2"));
    }

    #[test]
    fn over_cap_instance_is_skipped_not_failed() {
        let config = VerifyConfig {
            cap: 500,
            hughes_cap: 100,
            samples: 20,
            commutator_samples: 20,
            seed: 1,
        };
        let rep = verify_instance(3, 2, 2, &config);
        assert_eq!(rep.generation_ok, Check::Skipped);
        assert_eq!(rep.hughes_ok, Check::Skipped);
        assert!(!rep.group_order_enumerated);
        assert!(rep.passed(), "{}", rep.to_text());
    }

    #[test]
    fn sweep_grid() {
        let grid: Vec<(u64, u32, u64)> = sweep_params(7, 400_000)
            .iter()
            .map(|g| (g.p(), g.e(), g.r()))
            .collect();
        assert_eq!(
            grid,
            vec![
                (3, 1, 2),
                (3, 2, 1),
                (3, 2, 2),
                (3, 3, 1),
                (3, 3, 2),
                (3, 4, 1),
                (3, 4, 2),
                (3, 5, 1),
                (5, 1, 2),
                (5, 1, 3),
                (5, 1, 4),
                (5, 2, 1),
                (5, 2, 2),
                (7, 1, 2),
                (7, 1, 3),
                (7, 1, 4),
            ]
        );
    }
}
