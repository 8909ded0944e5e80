//! Normal-form arithmetic in the group `G` of order `p^m`.
//!
//! `G` is generated by `s_1, ..., s_{p-1}` and `β`. The `s_i` generate an
//! abelian normal subgroup `A` of index `p`, and conjugation by `β` acts on
//! `A` linearly:
//!
//! ```text
//! s_k^β     = s_k s_{k+1}                        (1 <= k <= p-2)
//! s_{p-1}^β = s_{p-1} s_1^{-C(p,1)} ... s_{p-1}^{-C(p,p-1)}
//! ```
//!
//! Every element is written uniquely as `s_1^{a_1} ... s_{p-1}^{a_{p-1}} β^b`
//! with `0 <= a_i < modulus(i)` and `0 <= b < p`. Exponent vectors are row
//! vectors and `β` acts on the right: the exponent vector of `x^β` (with
//! `x^y = y^{-1} x y`) is `a · M`.

use std::fmt;

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::arith::{binom, is_odd_prime, residue};
use crate::closure::{closure, CapExceeded};
use crate::json::BigNum;

/// Largest prime accepted by [`GroupParams::new`]. The cached action powers
/// take `p (p-1)^2` integers.
pub const MAX_P: u64 = 97;

/// Exhaustive checks over `G` are run only when `p^m` is at most this.
pub const DEFAULT_ENUMERATION_CAP: u64 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("p must be an odd prime (got {0})")]
    NotOddPrime(u64),
    #[error("p = {0} is larger than the supported maximum {MAX_P}")]
    PrimeTooLarge(u64),
    #[error("e must be at least 1 (got {0})")]
    ExponentTooSmall(u32),
    #[error("r must lie in [1, {max}] (got {r})")]
    RankOutOfRange { r: u64, max: u64 },
    #[error("m = e*r + (e-1)*(p-r-1) + 1 = {0} must be at least 3")]
    OrderTooSmall(u64),
}

/// A validated triple `(p, e, r)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupParams {
    p: u64,
    e: u32,
    r: u64,
    m: u64,
    moduli: Vec<BigUint>,
    order: BigUint,
}

impl GroupParams {
    pub fn new(p: u64, e: u32, r: u64) -> Result<Self, ParamError> {
        if !is_odd_prime(p) {
            return Err(ParamError::NotOddPrime(p));
        }
        if p > MAX_P {
            return Err(ParamError::PrimeTooLarge(p));
        }
        if e < 1 {
            return Err(ParamError::ExponentTooSmall(e));
        }
        if r < 1 || r > p - 1 {
            return Err(ParamError::RankOutOfRange { r, max: p - 1 });
        }
        let e64 = u64::from(e);
        let m = e64 * r + (e64 - 1) * (p - r - 1) + 1;
        if m < 3 {
            return Err(ParamError::OrderTooSmall(m));
        }
        let pb = BigUint::from(p);
        let high = num_traits::pow(pb.clone(), e as usize);
        let low = num_traits::pow(pb.clone(), e as usize - 1);
        let moduli = (1..p)
            .map(|i| if i <= r { high.clone() } else { low.clone() })
            .collect();
        let order = num_traits::pow(pb, m as usize);
        Ok(GroupParams {
            p,
            e,
            r,
            m,
            moduli,
            order,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    /// Number of `s` generators, `p - 1`.
    pub fn rank(&self) -> usize {
        self.p as usize - 1
    }

    /// Order of `s_i`, 1-based.
    pub fn modulus(&self, i: usize) -> &BigUint {
        &self.moduli[i - 1]
    }

    pub fn moduli(&self) -> &[BigUint] {
        &self.moduli
    }

    /// `|G| = p^m`.
    pub fn group_order(&self) -> &BigUint {
        &self.order
    }

    /// `|A| = p^{m-1}`.
    pub fn abelian_order(&self) -> BigUint {
        &self.order / self.p
    }

    /// `|R| = 4 p^m`.
    pub fn extension_order(&self) -> BigUint {
        &self.order * 4u32
    }

    /// With `e = 1` the generators `s_{r+1}..s_{p-1}` have modulus 1.
    pub fn has_degenerate_tail(&self) -> bool {
        self.e == 1 && self.r < self.p - 1
    }
}

impl fmt::Display for GroupParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(p={}, e={}, r={}, m={})",
            self.p, self.e, self.r, self.m
        )
    }
}

/// `s_1^{a_1} ... s_{p-1}^{a_{p-1}} β^b` in canonical form.
///
/// The derived ordering is lexicographic on `(a_1, ..., a_{p-1}, b)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    a: Vec<BigUint>,
    b: u64,
}

impl GroupElement {
    /// Caller guarantees the fields are already reduced.
    pub(crate) fn from_reduced(a: Vec<BigUint>, b: u64) -> Self {
        GroupElement { a, b }
    }

    pub fn exponents(&self) -> &[BigUint] {
        &self.a
    }

    pub fn beta_exponent(&self) -> u64 {
        self.b
    }

    /// Membership in the abelian maximal subgroup `A`.
    pub fn in_abelian(&self) -> bool {
        self.b == 0
    }
}

impl Serialize for GroupElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let a: Vec<BigNum<'_>> = self.a.iter().map(BigNum).collect();
        let mut st = s.serialize_struct("GroupElement", 2)?;
        st.serialize_field("a", &a)?;
        st.serialize_field("b", &self.b)?;
        st.end()
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, a) in self.a.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            if a.is_one() {
                write!(f, "s{}", i + 1)?;
            } else {
                write!(f, "s{}^{}", i + 1, a)?;
            }
        }
        if self.b != 0 {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            if self.b == 1 {
                f.write_str("b")?;
            } else {
                write!(f, "b^{}", self.b)?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// Conjugation by `β` on `A` as a `(p-1) x (p-1)` integer matrix, with the
/// powers `M^0 .. M^{p-1}` cached. Cached entries are reduced modulo the
/// modulus of their column.
#[derive(Debug, Clone)]
pub struct BetaAction {
    matrix: Vec<Vec<BigInt>>,
    powers: Vec<Vec<Vec<BigUint>>>,
}

impl BetaAction {
    /// The action read off the defining relations.
    pub fn standard(params: &GroupParams) -> Self {
        let n = params.rank();
        let p = params.p;
        let mut matrix = vec![vec![BigInt::zero(); n]; n];
        for (i, row) in matrix.iter_mut().enumerate().take(n - 1) {
            row[i] = BigInt::one();
            row[i + 1] = BigInt::one();
        }
        for (j, entry) in matrix[n - 1].iter_mut().enumerate() {
            *entry = -binom(p, j as i64 + 1);
        }
        matrix[n - 1][n - 1] += 1;
        Self::from_matrix(params, matrix)
    }

    /// Any integer matrix; used for negative controls.
    pub fn from_matrix(params: &GroupParams, matrix: Vec<Vec<BigInt>>) -> Self {
        let n = params.rank();
        assert_eq!(matrix.len(), n, "action matrix must be (p-1) x (p-1)");
        assert!(matrix.iter().all(|row| row.len() == n));
        let mut identity = vec![vec![BigUint::zero(); n]; n];
        for (i, row) in identity.iter_mut().enumerate() {
            row[i] = residue(&BigInt::one(), &params.moduli[i]);
        }
        let mut powers = Vec::with_capacity(params.p as usize);
        powers.push(identity);
        for _ in 1..params.p {
            let next = mul_reduced(powers.last().unwrap(), &matrix, params);
            powers.push(next);
        }
        BetaAction { matrix, powers }
    }

    pub fn matrix(&self) -> &[Vec<BigInt>] {
        &self.matrix
    }

    /// `M^k` for `0 <= k < p`.
    pub fn power(&self, k: usize) -> &[Vec<BigUint>] {
        &self.powers[k]
    }

    /// `M^p ≡ I`, entrywise modulo the column modulus.
    pub fn is_cyclic(&self, params: &GroupParams) -> bool {
        let top = mul_reduced(self.powers.last().unwrap(), &self.matrix, params);
        top.iter().enumerate().all(|(i, row)| {
            row.iter().enumerate().all(|(j, v)| {
                let want = if i == j {
                    residue(&BigInt::one(), &params.moduli[j])
                } else {
                    BigUint::zero()
                };
                *v == want
            })
        })
    }

    /// `modulus(i) * M[i][j] ≡ 0 (mod modulus(j))`, so the action is
    /// compatible with reducing exponents.
    pub fn is_well_defined(&self, params: &GroupParams) -> bool {
        self.matrix.iter().enumerate().all(|(i, row)| {
            row.iter().enumerate().all(|(j, v)| {
                let prod = v * BigInt::from(params.moduli[i].clone());
                residue(&prod, &params.moduli[j]).is_zero()
            })
        })
    }
}

fn mul_reduced(
    lhs: &[Vec<BigUint>],
    rhs: &[Vec<BigInt>],
    params: &GroupParams,
) -> Vec<Vec<BigUint>> {
    let n = lhs.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let acc: BigInt = (0..n)
                        .map(|l| BigInt::from(lhs[i][l].clone()) * &rhs[l][j])
                        .sum();
                    residue(&acc, &params.moduli[j])
                })
                .collect()
        })
        .collect()
}

/// One of the five commutator identities, with the triple that broke it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutatorViolation {
    /// 1: `[xy,z] = [x,z]^y [y,z]`, 2: `[x,yz] = [x,z][x,y]^z`,
    /// 3: `[x,y^-1]^y = [x,y]^-1`, 4: `[x^-1,y]^x = [x,y]^-1`,
    /// 5: `[x^-1,y^-1]^{xy} = [x,y]`.
    pub identity: u8,
    pub x: GroupElement,
    pub y: GroupElement,
    pub z: GroupElement,
}

/// `G` together with its β-action.
#[derive(Debug, Clone)]
pub struct Group {
    params: GroupParams,
    action: BetaAction,
}

impl Group {
    pub fn new(params: GroupParams) -> Self {
        let action = BetaAction::standard(&params);
        Group { params, action }
    }

    /// Arithmetic driven by an arbitrary action matrix. Nothing guarantees
    /// the result is a group; the verification routines will say so.
    pub fn with_action(params: GroupParams, action: BetaAction) -> Self {
        Group { params, action }
    }

    pub fn params(&self) -> &GroupParams {
        &self.params
    }

    pub fn action(&self) -> &BetaAction {
        &self.action
    }

    pub fn p(&self) -> u64 {
        self.params.p
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            a: vec![BigUint::zero(); self.params.rank()],
            b: 0,
        }
    }

    /// Canonical element from arbitrary integer exponents.
    pub fn element(&self, a: &[BigInt], b: &BigInt) -> GroupElement {
        assert_eq!(a.len(), self.params.rank(), "exponent vector length");
        let a = a
            .iter()
            .zip(&self.params.moduli)
            .map(|(x, m)| residue(x, m))
            .collect();
        let b = residue(b, &BigUint::from(self.params.p))
            .to_u64()
            .expect("reduced mod p");
        GroupElement { a, b }
    }

    pub fn element_i64(&self, a: &[i64], b: i64) -> GroupElement {
        let a: Vec<BigInt> = a.iter().map(|&x| BigInt::from(x)).collect();
        self.element(&a, &BigInt::from(b))
    }

    /// Element of `A` with the given exponents.
    pub fn abelian(&self, a: &[BigInt]) -> GroupElement {
        self.element(a, &BigInt::zero())
    }

    /// Basis generator `s_i` for `1 <= i <= p-1`.
    pub fn s(&self, i: usize) -> GroupElement {
        assert!(
            i >= 1 && i <= self.params.rank(),
            "s_{i} is not a basis generator"
        );
        let mut x = self.identity();
        x.a[i - 1] = residue(&BigInt::one(), &self.params.moduli[i - 1]);
        x
    }

    pub fn beta(&self) -> GroupElement {
        self.beta_pow(1)
    }

    pub fn beta_pow(&self, k: i64) -> GroupElement {
        let mut x = self.identity();
        x.b = k.rem_euclid(self.params.p as i64) as u64;
        x
    }

    /// `a · M^k` for an exponent vector of `A`.
    pub fn act(&self, a: &[BigUint], k: u64) -> Vec<BigUint> {
        let k = (k % self.params.p) as usize;
        if k == 0 {
            return a.to_vec();
        }
        let pw = self.action.power(k);
        let n = a.len();
        (0..n)
            .map(|j| {
                let mut acc = BigUint::zero();
                for (i, ai) in a.iter().enumerate() {
                    if !ai.is_zero() && !pw[i][j].is_zero() {
                        acc += ai * &pw[i][j];
                    }
                }
                acc % &self.params.moduli[j]
            })
            .collect()
    }

    /// `(a_x β^{b_x})(a_y β^{b_y}) = (a_x + a_y · M^{-b_x}) β^{b_x + b_y}`.
    pub fn multiply(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        let p = self.params.p;
        let shifted = self.act(&y.a, (p - x.b) % p);
        let a =
            x.a.iter()
                .zip(shifted)
                .zip(&self.params.moduli)
                .map(|((l, r), m)| {
                    let s = l + r;
                    if &s >= m {
                        s - m
                    } else {
                        s
                    }
                })
                .collect();
        GroupElement {
            a,
            b: (x.b + y.b) % p,
        }
    }

    /// `(a β^b)^{-1} = ((-a) · M^b) β^{-b}`.
    pub fn inverse(&self, x: &GroupElement) -> GroupElement {
        let neg: Vec<BigUint> =
            x.a.iter()
                .zip(&self.params.moduli)
                .map(|(v, m)| if v.is_zero() { v.clone() } else { m - v })
                .collect();
        let p = self.params.p;
        GroupElement {
            a: self.act(&neg, x.b),
            b: (p - x.b) % p,
        }
    }

    pub fn power(&self, x: &GroupElement, k: &BigInt) -> GroupElement {
        let base = if k.is_negative() {
            self.inverse(x)
        } else {
            x.clone()
        };
        let mut exp = k.magnitude().clone();
        let mut acc = self.identity();
        let mut sq = base;
        while !exp.is_zero() {
            if exp.is_odd() {
                acc = self.multiply(&acc, &sq);
            }
            exp >>= 1;
            if !exp.is_zero() {
                sq = self.multiply(&sq, &sq);
            }
        }
        acc
    }

    pub fn pow(&self, x: &GroupElement, k: i64) -> GroupElement {
        self.power(x, &BigInt::from(k))
    }

    /// `x^y = y^{-1} x y`.
    pub fn conjugate(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        self.multiply(&self.multiply(&self.inverse(y), x), y)
    }

    /// `[x, y] = x^{-1} y^{-1} x y`.
    pub fn commutator(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        let xy = self.multiply(x, y);
        let yx = self.multiply(y, x);
        self.multiply(&self.inverse(&yx), &xy)
    }

    /// Order of `x`. Since `|G|` is a power of `p`, the order is the least
    /// `p^j` with `x^{p^j} = 1`.
    pub fn element_order(&self, x: &GroupElement) -> BigUint {
        let id = self.identity();
        let p = BigInt::from(self.params.p);
        let mut order = BigUint::one();
        let mut y = x.clone();
        let mut steps = 0;
        while y != id {
            y = self.power(&y, &p);
            order *= self.params.p;
            steps += 1;
            assert!(
                steps <= self.params.m,
                "element order exceeds |G|; the action is not a valid p-group action"
            );
        }
        order
    }

    /// `s_p = [s_{p-1}, β] = Π s_i^{-C(p,i)}`, from the binomials.
    pub fn derived_sp(&self) -> GroupElement {
        let p = self.params.p;
        let a: Vec<BigInt> = (1..p).map(|i| -binom(p, i as i64)).collect();
        self.abelian(&a)
    }

    /// `s_{p+1} = [s_p, β] = Π s_{i+1}^{-C(p,i)}`, with `s_p` the derived
    /// generator.
    pub fn derived_sp1(&self) -> GroupElement {
        let p = self.params.p;
        let mut acc = self.identity();
        for i in 1..p {
            let g = self.generator(i as usize + 1);
            acc = self.multiply(&acc, &self.power(&g, &-binom(p, i as i64)));
        }
        acc
    }

    /// `s_k` for `1 <= k <= p+1`, using the derived elements for `k = p, p+1`.
    pub fn generator(&self, k: usize) -> GroupElement {
        let p = self.params.p as usize;
        match k {
            k if k >= 1 && k < p => self.s(k),
            k if k == p => self.derived_sp(),
            k if k == p + 1 => self.derived_sp1(),
            _ => panic!("s_{k} is not defined for p = {p}"),
        }
    }

    /// Checks every defining relation against the multiplication, plus the
    /// structural conditions on the action. Returns a description of each
    /// failure.
    pub fn relation_failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        let n = self.params.rank();
        let id = self.identity();
        let beta = self.beta();
        if !self.action.is_well_defined(&self.params) {
            out.push("β-action is not compatible with the generator moduli".into());
        }
        if !self.action.is_cyclic(&self.params) {
            out.push("β-action does not satisfy M^p = I".into());
        }
        for i in 1..=n {
            let m = BigInt::from(self.params.moduli[i - 1].clone());
            if self.power(&self.s(i), &m) != id {
                out.push(format!("s_{i}^{m} != 1"));
            }
            for j in i + 1..=n {
                if self.commutator(&self.s(i), &self.s(j)) != id {
                    out.push(format!("[s_{i}, s_{j}] != 1"));
                }
            }
        }
        if self.pow(&beta, self.params.p as i64) != id {
            out.push("β^p != 1".into());
        }
        for k in 1..n {
            if self.commutator(&self.s(k), &beta) != self.s(k + 1) {
                out.push(format!("[s_{k}, β] != s_{}", k + 1));
            }
        }
        if self.commutator(&self.s(n), &beta) != self.derived_sp() {
            out.push(format!("[s_{n}, β] != Π s_i^(-C(p,i))"));
        }
        out
    }

    /// Calls `f` on every element of `G`, in index order. Requires `|G|` to
    /// fit in 64 bits.
    pub fn for_each_element<F: FnMut(GroupElement)>(&self, mut f: F) {
        let moduli: Vec<u64> = self
            .params
            .moduli
            .iter()
            .map(|m| m.to_u64().expect("modulus fits in u64"))
            .collect();
        let abelian = self
            .params
            .abelian_order()
            .to_u64()
            .expect("|A| fits in u64");
        for b in 0..self.params.p {
            for mut idx in 0..abelian {
                let a = moduli
                    .iter()
                    .map(|&m| {
                        let digit = idx % m;
                        idx /= m;
                        BigUint::from(digit)
                    })
                    .collect();
                f(GroupElement { a, b });
            }
        }
    }

    /// Every element outside `A` has order exactly `p`. Checked by direct
    /// iteration over all such elements.
    pub fn hughes_check(&self, cap: u64) -> Result<bool, CapExceeded> {
        if self.params.order > BigUint::from(cap) {
            return Err(CapExceeded { cap, partial: 0 });
        }
        let id = self.identity();
        let p = self.params.p;
        let mut ok = true;
        self.for_each_element(|x| {
            if !ok || x.in_abelian() {
                return;
            }
            let mut y = x.clone();
            for _ in 1..p {
                if y == id {
                    ok = false;
                    return;
                }
                y = self.multiply(&y, &x);
            }
            if y != id {
                ok = false;
            }
        });
        Ok(ok)
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> GroupElement {
        let a = self
            .params
            .moduli
            .iter()
            .map(|m| rng.gen_biguint_below(m))
            .collect();
        GroupElement {
            a,
            b: rng.gen_range(0..self.params.p),
        }
    }

    /// The five elementary commutator identities on random triples.
    pub fn commutator_identity_failures<R: Rng + ?Sized>(
        &self,
        samples: usize,
        rng: &mut R,
    ) -> Vec<CommutatorViolation> {
        let mut out = Vec::new();
        for _ in 0..samples {
            let x = self.random_element(rng);
            let y = self.random_element(rng);
            let z = self.random_element(rng);
            for (id, ok) in self
                .commutator_identities(&x, &y, &z)
                .into_iter()
                .enumerate()
            {
                if !ok {
                    out.push(CommutatorViolation {
                        identity: id as u8 + 1,
                        x: x.clone(),
                        y: y.clone(),
                        z: z.clone(),
                    });
                }
            }
        }
        out
    }

    fn commutator_identities(
        &self,
        x: &GroupElement,
        y: &GroupElement,
        z: &GroupElement,
    ) -> [bool; 5] {
        let c = |a: &GroupElement, b: &GroupElement| self.commutator(a, b);
        let conj = |a: &GroupElement, b: &GroupElement| self.conjugate(a, b);
        let mul = |a: &GroupElement, b: &GroupElement| self.multiply(a, b);
        let inv = |a: &GroupElement| self.inverse(a);
        let xy = mul(x, y);
        let cxy = c(x, y);
        [
            c(&xy, z) == mul(&conj(&c(x, z), y), &c(y, z)),
            c(x, &mul(y, z)) == mul(&c(x, z), &conj(&cxy, z)),
            conj(&c(x, &inv(y)), y) == inv(&cxy),
            conj(&c(&inv(x), y), x) == inv(&cxy),
            conj(&c(&inv(x), &inv(y)), &xy) == cxy,
        ]
    }

    /// The subgroup generated by `generators`, if it has at most `cap`
    /// elements.
    pub fn generated_subgroup(
        &self,
        generators: &[GroupElement],
        cap: usize,
    ) -> Result<indexmap::IndexSet<GroupElement>, CapExceeded> {
        closure(self.identity(), generators, cap, |x, y| self.multiply(x, y))
    }
}
