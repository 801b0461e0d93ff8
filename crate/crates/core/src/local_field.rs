//! Truncated arithmetic in F = Q_p and the unramified quadratic extension E = F(α), α² = z.
//!
//! A [`PadicNum`] is `p^val · unit` known modulo `p^(val + prec)`; zero carries only the
//! absolute precision to which it is known (exact zero has infinite precision).

use crate::error::{Error, Result};
use rand::Rng;
use serde::Serialize;
use std::fmt;

const EXACT: i32 = i32::MAX;

pub(crate) fn pow_u64(p: u64, k: u32) -> u64 {
    let mut r = 1u64;
    for _ in 0..k {
        r = r.checked_mul(p).expect("p-power overflow");
    }
    r
}

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn reduce_i128(n: i128, m: u64) -> u64 {
    n.rem_euclid(m as i128) as u64
}

/// Inverse of `a` modulo `m` by the extended Euclidean algorithm.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let t = r0 / r1;
        (r0, r1) = (r1, r0 - t * r1);
        (s0, s1) = (s1, s0 - t * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(reduce_i128(s0, m))
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn is_square_mod(x: i64, p: u32) -> bool {
    let x = x.rem_euclid(p as i64) as u64;
    (0..p as u64).any(|t| t * t % p as u64 == x)
}

/// Prime, non-square unit z with α² = z, and working precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FieldParams {
    pub p: u32,
    pub z: i64,
    pub prec: u32,
}

impl FieldParams {
    /// Uses the smallest positive non-residue for z.
    pub fn new(p: u32, prec: u32) -> Result<Self> {
        if p < 3 || !is_prime(p) {
            return Err(Error::InvalidParams(format!(
                "p = {p} must be an odd prime"
            )));
        }
        let z = (2..p as i64).find(|&z| !is_square_mod(z, p)).unwrap();
        Self::with_z(p, z, prec)
    }

    pub fn with_z(p: u32, z: i64, prec: u32) -> Result<Self> {
        if p < 3 || !is_prime(p) {
            return Err(Error::InvalidParams(format!(
                "p = {p} must be an odd prime"
            )));
        }
        if z.rem_euclid(p as i64) == 0 || is_square_mod(z, p) {
            return Err(Error::InvalidParams(format!(
                "z = {z} is not a non-square unit mod {p}"
            )));
        }
        if prec == 0 {
            return Err(Error::InvalidParams("precision must be at least 1".into()));
        }
        let limit = (62.0 / (p as f64).log2()).floor() as u32;
        if prec > limit {
            return Err(Error::InvalidParams(format!(
                "precision {prec} too large for p = {p} (max {limit})"
            )));
        }
        Ok(FieldParams { p, z, prec })
    }

    pub fn q(&self) -> u64 {
        self.p as u64
    }

    pub fn int(&self, n: i64) -> PadicNum {
        PadicNum::from_int(self.p, n as i128, self.prec)
    }

    pub fn rational(&self, num: i64, den: i64) -> Result<PadicNum> {
        self.int(num).div(&self.int(den))
    }

    /// p^k as an element of F.
    pub fn pi_pow(&self, k: i32) -> PadicNum {
        PadicNum::from_parts(self.p, k, 1, self.prec)
    }

    pub fn zero(&self) -> PadicNum {
        PadicNum::zero(self.p)
    }

    pub fn one(&self) -> PadicNum {
        self.int(1)
    }

    pub fn half(&self) -> PadicNum {
        self.int(2).inv().expect("p is odd")
    }

    pub fn ext(&self, a: PadicNum, b: PadicNum) -> ExtNum {
        ExtNum::new(a, b, self.z)
    }

    pub fn ext_int(&self, a: i64, b: i64) -> ExtNum {
        self.ext(self.int(a), self.int(b))
    }

    pub fn alpha(&self) -> ExtNum {
        self.ext_int(0, 1)
    }

    /// Uniform residue mod p^prec, scaled by p^min_val.
    pub fn random_padic<R: Rng + ?Sized>(&self, rng: &mut R, min_val: i32) -> PadicNum {
        let m = pow_u64(self.p as u64, self.prec);
        let r = rng.gen_range(0..m);
        self.int(r as i64).mul(&self.pi_pow(min_val))
    }

    pub fn random_ext<R: Rng + ?Sized>(&self, rng: &mut R, min_val: i32) -> ExtNum {
        self.ext(
            self.random_padic(rng, min_val),
            self.random_padic(rng, min_val),
        )
    }

    /// Random element of E¹ built as μ/μ̄ from random μ (every element of E¹ arises this way).
    pub fn random_e1<R: Rng + ?Sized>(&self, rng: &mut R) -> ExtNum {
        loop {
            let mu = self.random_ext(rng, 0);
            if mu.valuation() == Ok(Some(0)) {
                return mu.mul(&mu.conj().inv().unwrap());
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Repr {
    Zero { abs: i32 },
    Unit { val: i32, unit: u64, prec: u32 },
}

/// Element of Q_p at finite precision.
#[derive(Clone, Copy, Debug)]
pub struct PadicNum {
    p: u32,
    repr: Repr,
}

impl PadicNum {
    pub fn zero(p: u32) -> Self {
        PadicNum {
            p,
            repr: Repr::Zero { abs: EXACT },
        }
    }

    pub fn zero_mod(p: u32, abs: i32) -> Self {
        PadicNum {
            p,
            repr: Repr::Zero { abs },
        }
    }

    /// p^val · unit; `unit` must be prime to p.
    pub fn from_parts(p: u32, val: i32, unit: u64, prec: u32) -> Self {
        debug_assert!(!unit.is_multiple_of(p as u64));
        let m = pow_u64(p as u64, prec);
        PadicNum {
            p,
            repr: Repr::Unit {
                val,
                unit: unit % m,
                prec,
            },
        }
    }

    pub fn from_int(p: u32, n: i128, prec: u32) -> Self {
        if n == 0 {
            return Self::zero(p);
        }
        let mut n = n;
        let mut val = 0;
        while n % p as i128 == 0 {
            n /= p as i128;
            val += 1;
        }
        let m = pow_u64(p as u64, prec);
        PadicNum {
            p,
            repr: Repr::Unit {
                val,
                unit: reduce_i128(n, m),
                prec,
            },
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero { .. })
    }

    pub fn is_exact_zero(&self) -> bool {
        self.repr == Repr::Zero { abs: EXACT }
    }

    /// None for zero.
    pub fn valuation(&self) -> Option<i32> {
        match self.repr {
            Repr::Zero { .. } => None,
            Repr::Unit { val, .. } => Some(val),
        }
    }

    /// Lower bound for the valuation: the valuation itself, or the known precision of zero.
    pub fn lower_val(&self) -> i32 {
        match self.repr {
            Repr::Zero { abs } => abs,
            Repr::Unit { val, .. } => val,
        }
    }

    /// Exponent e such that the value is known modulo p^e.
    pub fn abs_prec(&self) -> i32 {
        match self.repr {
            Repr::Zero { abs } => abs,
            Repr::Unit { val, prec, .. } => val.saturating_add(prec as i32),
        }
    }

    pub fn rel_prec(&self) -> u32 {
        match self.repr {
            Repr::Zero { .. } => 0,
            Repr::Unit { prec, .. } => prec,
        }
    }

    pub fn unit(&self) -> Option<u64> {
        match self.repr {
            Repr::Zero { .. } => None,
            Repr::Unit { unit, .. } => Some(unit),
        }
    }

    /// Decides v(x) ≥ r.
    pub fn val_at_least(&self, r: i32) -> Result<bool> {
        match self.repr {
            Repr::Unit { val, .. } => Ok(val >= r),
            Repr::Zero { abs } if abs >= r => Ok(true),
            Repr::Zero { abs } => Err(Error::InsufficientPrecision {
                needed: r as i64,
                have: abs as i64,
            }),
        }
    }

    fn aligned(&self, v: i32, span: u32) -> u64 {
        match self.repr {
            Repr::Zero { .. } => 0,
            Repr::Unit { val, unit, .. } => {
                let shift = (val - v) as u32;
                if shift >= span {
                    0
                } else {
                    let m = pow_u64(self.p as u64, span);
                    mul_mod(unit % m, pow_u64(self.p as u64, shift), m)
                }
            }
        }
    }

    fn normalize(p: u32, v: i32, s: u64, abs: i32) -> Self {
        if s == 0 {
            return Self::zero_mod(p, abs);
        }
        let mut s = s;
        let mut val = v;
        while s.is_multiple_of(p as u64) {
            s /= p as u64;
            val += 1;
        }
        PadicNum {
            p,
            repr: Repr::Unit {
                val,
                unit: s,
                prec: (abs - val) as u32,
            },
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        debug_assert_eq!(self.p, o.p);
        let abs = self.abs_prec().min(o.abs_prec());
        if o.lower_val() >= abs && o.is_zero() {
            return self.truncate_abs(abs);
        }
        if self.lower_val() >= abs && self.is_zero() {
            return o.truncate_abs(abs);
        }
        let v = self.lower_val().min(o.lower_val());
        if v >= abs {
            return Self::zero_mod(self.p, abs);
        }
        let span = (abs - v) as u32;
        let m = pow_u64(self.p as u64, span);
        let s = (self.aligned(v, span) + o.aligned(v, span)) % m;
        Self::normalize(self.p, v, s, abs)
    }

    /// Forget digits at or beyond p^abs.
    pub fn truncate_abs(&self, abs: i32) -> Self {
        match self.repr {
            Repr::Zero { abs: a } => Self::zero_mod(self.p, a.min(abs)),
            Repr::Unit { val, unit, prec } => {
                if val >= abs {
                    Self::zero_mod(self.p, abs)
                } else {
                    let np = prec.min((abs - val) as u32);
                    Self::from_parts(self.p, val, unit, np)
                }
            }
        }
    }

    pub fn neg(&self) -> Self {
        match self.repr {
            Repr::Zero { .. } => *self,
            Repr::Unit { val, unit, prec } => {
                let m = pow_u64(self.p as u64, prec);
                PadicNum {
                    p: self.p,
                    repr: Repr::Unit {
                        val,
                        unit: (m - unit) % m,
                        prec,
                    },
                }
            }
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        debug_assert_eq!(self.p, o.p);
        match (self.repr, o.repr) {
            (Repr::Zero { abs: a }, Repr::Zero { abs: b }) => {
                Self::zero_mod(self.p, a.saturating_add(b))
            }
            (Repr::Zero { abs }, Repr::Unit { val, .. })
            | (Repr::Unit { val, .. }, Repr::Zero { abs }) => {
                Self::zero_mod(self.p, abs.saturating_add(val))
            }
            (
                Repr::Unit {
                    val: v1,
                    unit: u1,
                    prec: p1,
                },
                Repr::Unit {
                    val: v2,
                    unit: u2,
                    prec: p2,
                },
            ) => {
                let prec = p1.min(p2);
                let m = pow_u64(self.p as u64, prec);
                PadicNum {
                    p: self.p,
                    repr: Repr::Unit {
                        val: v1 + v2,
                        unit: mul_mod(u1 % m, u2 % m, m),
                        prec,
                    },
                }
            }
        }
    }

    pub fn inv(&self) -> Result<Self> {
        match self.repr {
            Repr::Zero { abs: EXACT } => Err(Error::DivisionByZero),
            Repr::Zero { .. } => Err(Error::PrecisionExhausted),
            Repr::Unit { val, unit, prec } => {
                let m = pow_u64(self.p as u64, prec);
                let u = inv_mod(unit, m).expect("unit is prime to p");
                Ok(PadicNum {
                    p: self.p,
                    repr: Repr::Unit {
                        val: -val,
                        unit: u,
                        prec,
                    },
                })
            }
        }
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = PadicNum::from_int(self.p, 1, self.rel_prec().max(1));
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    pub fn mul_int(&self, n: i64) -> Self {
        if n == 0 {
            return PadicNum::zero(self.p);
        }
        self.mul(&PadicNum::from_int(
            self.p,
            n as i128,
            self.rel_prec().max(1),
        ))
    }

    /// Residue of an integral element modulo p^k.
    pub fn residue(&self, k: u32) -> Result<u64> {
        let abs = self.abs_prec();
        if (abs as i64) < k as i64 {
            if let Repr::Unit { val, .. } = self.repr {
                if val < 0 {
                    return Err(Error::NotIntegral);
                }
            }
            return Err(Error::InsufficientPrecision {
                needed: k as i64,
                have: abs as i64,
            });
        }
        match self.repr {
            Repr::Zero { .. } => Ok(0),
            Repr::Unit { val, unit, .. } => {
                if val < 0 {
                    return Err(Error::NotIntegral);
                }
                let m = pow_u64(self.p as u64, k);
                if val as u32 >= k {
                    Ok(0)
                } else {
                    Ok(mul_mod(unit % m, pow_u64(self.p as u64, val as u32), m))
                }
            }
        }
    }

    /// Rough real magnitude, for display only.
    pub fn to_f64_approx(&self) -> f64 {
        match self.repr {
            Repr::Zero { .. } => 0.0,
            Repr::Unit { val, unit, .. } => unit as f64 * (self.p as f64).powi(val),
        }
    }
}

impl PartialEq for PadicNum {
    fn eq(&self, o: &Self) -> bool {
        self.p == o.p && PadicNum::sub(self, o).is_zero()
    }
}

impl fmt::Display for PadicNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.repr {
            Repr::Zero { abs: EXACT } => write!(f, "0"),
            Repr::Zero { abs } => write!(f, "O({}^{})", self.p, abs),
            Repr::Unit { val, unit, prec } => write!(
                f,
                "{}*{}^{} + O({}^{})",
                unit,
                self.p,
                val,
                self.p,
                val + prec as i32
            ),
        }
    }
}

/// Element a + bα of E.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtNum {
    pub a: PadicNum,
    pub b: PadicNum,
    z: i64,
}

impl ExtNum {
    pub fn new(a: PadicNum, b: PadicNum, z: i64) -> Self {
        ExtNum { a, b, z }
    }

    pub fn z(&self) -> i64 {
        self.z
    }

    pub fn p(&self) -> u32 {
        self.a.p()
    }

    pub fn from_f(x: PadicNum, z: i64) -> Self {
        ExtNum {
            a: x,
            b: PadicNum::zero(x.p()),
            z,
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        ExtNum {
            a: self.a.add(&o.a),
            b: self.b.add(&o.b),
            z: self.z,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        ExtNum {
            a: self.a.sub(&o.a),
            b: self.b.sub(&o.b),
            z: self.z,
        }
    }

    pub fn neg(&self) -> Self {
        ExtNum {
            a: self.a.neg(),
            b: self.b.neg(),
            z: self.z,
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let a = self.a.mul(&o.a).add(&self.b.mul(&o.b).mul_int(self.z));
        let b = self.a.mul(&o.b).add(&self.b.mul(&o.a));
        ExtNum { a, b, z: self.z }
    }

    pub fn scale(&self, x: &PadicNum) -> Self {
        ExtNum {
            a: self.a.mul(x),
            b: self.b.mul(x),
            z: self.z,
        }
    }

    pub fn mul_int(&self, n: i64) -> Self {
        ExtNum {
            a: self.a.mul_int(n),
            b: self.b.mul_int(n),
            z: self.z,
        }
    }

    pub fn conj(&self) -> Self {
        ExtNum {
            a: self.a,
            b: self.b.neg(),
            z: self.z,
        }
    }

    pub fn norm(&self) -> PadicNum {
        self.a
            .mul(&self.a)
            .sub(&self.b.mul(&self.b).mul_int(self.z))
    }

    pub fn trace(&self) -> PadicNum {
        self.a.mul_int(2)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.a.is_exact_zero() && self.b.is_exact_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm().inv()?;
        Ok(self.conj().scale(&n))
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Ok(None) for exact zero; error when the valuation is not determined at this precision.
    pub fn valuation(&self) -> Result<Option<i32>> {
        valuation_of(&[self.a, self.b])
    }

    pub fn val_at_least(&self, r: i32) -> Result<bool> {
        Ok(self.a.val_at_least(r)? && self.b.val_at_least(r)?)
    }

    pub fn lower_val(&self) -> i32 {
        self.a.lower_val().min(self.b.lower_val())
    }

    pub fn is_in_f(&self) -> bool {
        self.b.is_zero()
    }

    pub fn one_like(&self) -> Self {
        self.one_with_prec(self.max_rel_prec())
    }

    pub fn max_rel_prec(&self) -> u32 {
        self.a.rel_prec().max(self.b.rel_prec())
    }

    pub fn one_with_prec(&self, prec: u32) -> Self {
        ExtNum::from_f(PadicNum::from_int(self.p(), 1, prec.max(1)), self.z)
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut r = self.one_like();
        let mut b = *self;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        r
    }

    /// Residues (a mod p^k, b mod p^k) of an integral element.
    pub fn residue(&self, k: u32) -> Result<[u64; 2]> {
        Ok([self.a.residue(k)?, self.b.residue(k)?])
    }

    pub fn is_member(&self, which: E1Subgroup) -> Result<bool> {
        subgroup_member(which, self)
    }
}

pub(crate) fn valuation_of(parts: &[PadicNum]) -> Result<Option<i32>> {
    let nonzero = parts.iter().filter_map(|x| x.valuation()).min();
    let zero_floor = parts
        .iter()
        .filter(|x| x.is_zero())
        .map(|x| x.lower_val())
        .min();
    match (nonzero, zero_floor) {
        (Some(v), None) => Ok(Some(v)),
        (Some(v), Some(z)) if z >= v => Ok(Some(v)),
        (Some(v), Some(z)) => Err(Error::InsufficientPrecision {
            needed: v as i64,
            have: z as i64,
        }),
        (None, Some(EXACT)) => Ok(None),
        (None, Some(_)) => Err(Error::PrecisionExhausted),
        (None, None) => Ok(None),
    }
}

/// Subgroups of E^× with membership tests.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum E1Subgroup {
    /// Norm one.
    E1,
    /// Trace zero (an additive subgroup).
    E0,
    /// λ ∈ E¹ with λ ≡ 1 mod P_E^r.
    E1R(u32),
    /// E¹ ∩ F^×(1 + P_E).
    E1Zero,
}

pub fn subgroup_member(which: E1Subgroup, x: &ExtNum) -> Result<bool> {
    let one = x.one_like();
    match which {
        E1Subgroup::E1 => Ok(x.norm().sub(&one.a).is_zero()),
        E1Subgroup::E0 => Ok(x.trace().is_zero()),
        E1Subgroup::E1R(r) => {
            if !subgroup_member(E1Subgroup::E1, x)? {
                return Ok(false);
            }
            x.sub(&one).val_at_least(r as i32)
        }
        E1Subgroup::E1Zero => {
            // x = f(1 + π) with f ∈ F^× forces f ≡ a mod P and v(b) ≥ 1.
            if !subgroup_member(E1Subgroup::E1, x)? {
                return Ok(false);
            }
            Ok(x.a.valuation() == Some(0) && x.b.val_at_least(1)?)
        }
    }
}

/// A root of unity exp(2πi·exp/order) in lowest terms; order 1 is the value 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CycVal {
    order: u64,
    exp: u64,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl CycVal {
    pub const ONE: CycVal = CycVal { order: 1, exp: 0 };

    pub fn new(order: u64, exp: i64) -> Self {
        assert!(order > 0);
        let e = exp.rem_euclid(order as i64) as u64;
        let g = gcd(e, order);
        if e == 0 {
            return Self::ONE;
        }
        CycVal {
            order: order / g,
            exp: e / g,
        }
    }

    /// ζ_{p^m}^e.
    pub fn from_p_power(p: u32, m: u32, e: i64) -> Self {
        Self::new(pow_u64(p as u64, m), e)
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn exp(&self) -> u64 {
        self.exp
    }

    /// m with order = p^m, if the order is a power of p.
    pub fn p_level(&self, p: u32) -> Option<u32> {
        let mut o = self.order;
        let mut m = 0;
        while o.is_multiple_of(p as u64) {
            o /= p as u64;
            m += 1;
        }
        (o == 1).then_some(m)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let l = self.order / gcd(self.order, o.order) * o.order;
        let e = (self.exp as u128 * (l / self.order) as u128
            + o.exp as u128 * (l / o.order) as u128)
            % l as u128;
        Self::new(l, e as i64)
    }

    pub fn inv(&self) -> Self {
        Self::new(self.order, -(self.exp as i64))
    }

    pub fn pow(&self, k: i64) -> Self {
        let e = (self.exp as i128 * k as i128).rem_euclid(self.order as i128);
        Self::new(self.order, e as i64)
    }

    pub fn is_one(&self) -> bool {
        self.order == 1
    }

    /// Value as an angle fraction in [0, 1).
    pub fn angle(&self) -> f64 {
        self.exp as f64 / self.order as f64
    }
}

impl fmt::Display for CycVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.order == 1 {
            write!(f, "1")
        } else {
            write!(f, "z{}^{}", self.order, self.exp)
        }
    }
}

/// ψ(x) = exp(2πi·frac_p(x/p)), conductor P_F.
pub fn psi(x: &PadicNum) -> Result<CycVal> {
    let abs = x.abs_prec();
    if abs < 1 {
        return Err(Error::InsufficientPrecision {
            needed: 1,
            have: abs as i64,
        });
    }
    match x.valuation() {
        None => Ok(CycVal::ONE),
        Some(v) if v >= 1 => Ok(CycVal::ONE),
        Some(v) => {
            let m = (1 - v) as u32;
            let order = pow_u64(x.p() as u64, m);
            let u = x.unit().unwrap() % order;
            Ok(CycVal::new(order, u as i64))
        }
    }
}

/// χ(x) = ψ(ϖx), conductor 𝒪_F.
pub fn chi(x: &PadicNum) -> Result<CycVal> {
    psi(&x.mul(&PadicNum::from_parts(x.p(), 1, 1, x.rel_prec().max(1))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fp(p: u32) -> FieldParams {
        FieldParams::new(p, 10).unwrap()
    }

    #[test]
    fn z_choice() {
        assert_eq!(FieldParams::new(3, 4).unwrap().z, 2);
        assert_eq!(FieldParams::new(5, 4).unwrap().z, 2);
        assert_eq!(FieldParams::new(7, 4).unwrap().z, 3);
        assert!(FieldParams::new(9, 4).is_err());
        assert!(FieldParams::with_z(3, 1, 4).is_err());
    }

    #[test]
    fn examples() {
        let f = FieldParams::new(3, 2).unwrap();
        let x = f.pi_pow(1).mul(&f.pi_pow(-1));
        assert_eq!(x, f.one());
        let s = f.int(1).add(&f.int(2));
        assert_eq!(s.valuation(), Some(1));
        assert_eq!(s.unit(), Some(1));
        let i = f.int(2).inv().unwrap();
        assert_eq!((i.valuation(), i.unit()), (Some(0), Some(5)));
        assert_eq!(f.zero().inv(), Err(Error::DivisionByZero));
        assert_eq!(
            f.int(1).sub(&f.int(1)).inv(),
            Err(Error::PrecisionExhausted)
        );
    }

    #[test]
    fn ext_examples() {
        let f = FieldParams::new(3, 6).unwrap();
        assert_eq!(f.ext_int(1, 0).norm(), f.one());
        assert!(f.alpha().trace().is_zero());
        assert_eq!(f.ext_int(1, 1).norm(), f.int(-1));
        assert_eq!(f.ext_int(1, 1).norm().residue(1).unwrap(), 2);
    }

    #[test]
    fn alpha_membership_decided_exactly() {
        let f = FieldParams::new(3, 2).unwrap();
        let a = f.alpha();
        assert!(subgroup_member(E1Subgroup::E0, &a).unwrap());
        // N(α) = -2 ≡ 1 mod 3 but not mod 9.
        assert_eq!(a.norm().residue(1).unwrap(), 1);
        assert!(!subgroup_member(E1Subgroup::E1, &a).unwrap());
    }

    #[test]
    fn one_is_in_everything() {
        let f = fp(3);
        let one = f.ext_int(1, 0);
        for r in 0..9 {
            assert!(subgroup_member(E1Subgroup::E1R(r), &one).unwrap());
        }
        assert!(subgroup_member(E1Subgroup::E1Zero, &one).unwrap());
        assert!(subgroup_member(E1Subgroup::E1, &one).unwrap());
    }

    #[test]
    fn residue_norm_one_count() {
        for p in [3u64, 5, 7] {
            let z = FieldParams::new(p as u32, 2).unwrap().z;
            let mut c = 0;
            for a in 0..p {
                for b in 0..p {
                    if (a * a + p * p - (z as u64 * b * b) % p) % p == 1 {
                        c += 1;
                    }
                }
            }
            assert_eq!(c, p + 1);
        }
    }

    #[test]
    fn psi_examples() {
        let f = FieldParams::new(3, 6).unwrap();
        assert!(psi(&f.int(3 * 7)).unwrap().is_one());
        assert_eq!(psi(&f.one()).unwrap(), CycVal::from_p_power(3, 1, 1));
        assert_eq!(psi(&f.pi_pow(-1)).unwrap(), CycVal::from_p_power(3, 2, 1));
        assert!(chi(&f.int(5)).unwrap().is_one());
        assert_eq!(chi(&f.pi_pow(-1)).unwrap(), CycVal::from_p_power(3, 1, 1));
        assert!(!psi(&f.one()).unwrap().is_one());
        let g = FieldParams::new(3, 2).unwrap();
        assert!(psi(&g.pi_pow(-2)).is_err());
    }

    #[test]
    fn psi_additive_on_residues() {
        for p in [3u32, 5] {
            let f = FieldParams::new(p, 4).unwrap();
            let m = (p * p) as i64;
            for x in 0..m {
                for y in 0..m {
                    let a = f.int(x).mul(&f.pi_pow(-2));
                    let b = f.int(y).mul(&f.pi_pow(-2));
                    assert_eq!(
                        psi(&a.add(&b)).unwrap(),
                        psi(&a).unwrap().mul(&psi(&b).unwrap())
                    );
                }
            }
        }
    }

    #[test]
    fn e1_zero_is_pm_e1_one() {
        let f = fp(5);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let l = f.random_e1(&mut rng);
            let in0 = subgroup_member(E1Subgroup::E1Zero, &l).unwrap();
            let pm = subgroup_member(E1Subgroup::E1R(1), &l).unwrap()
                || subgroup_member(E1Subgroup::E1R(1), &l.neg()).unwrap();
            assert_eq!(in0, pm);
        }
    }

    #[test]
    fn norm_multiplicative_random() {
        let f = fp(5);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let x = f.random_ext(&mut rng, -1);
            let y = f.random_ext(&mut rng, 0);
            assert_eq!(x.mul(&y).norm(), x.norm().mul(&y.norm()));
            assert_eq!(x.add(&y).trace(), x.trace().add(&y.trace()));
        }
    }

    proptest! {
        #[test]
        fn valuation_laws(a in 1i64..100000, b in 1i64..100000, s in -3i32..3, t in -3i32..3) {
            let f = fp(3);
            let x = f.int(a).mul(&f.pi_pow(s));
            let y = f.int(b).mul(&f.pi_pow(t));
            let vx = x.valuation().unwrap();
            let vy = y.valuation().unwrap();
            prop_assert_eq!(x.mul(&y).valuation().unwrap(), vx + vy);
            let sum = x.add(&y);
            prop_assert!(sum.lower_val() >= vx.min(vy));
            if vx != vy {
                prop_assert_eq!(sum.valuation(), Some(vx.min(vy)));
            }
        }

        #[test]
        fn inverse_roundtrip(a in 1i64..1000000, s in -4i32..4) {
            let f = fp(5);
            let x = f.int(a).mul(&f.pi_pow(s));
            prop_assert_eq!(x.mul(&x.inv().unwrap()), f.one());
        }

        #[test]
        fn conj_involution(a in -10000i64..10000, b in -10000i64..10000) {
            let f = fp(3);
            let x = f.ext_int(a, b);
            prop_assert_eq!(x.conj().conj(), x);
            prop_assert_eq!(x.mul(&x.conj()).a, x.norm());
        }

        #[test]
        fn cycval_inverse(o in 1u64..500, e in -1000i64..1000) {
            let c = CycVal::new(o, e);
            prop_assert!(c.mul(&c.inv()).is_one());
            prop_assert_eq!(c.pow(o as i64), CycVal::ONE);
        }

        #[test]
        fn chi_additive(a in -100000i64..100000, b in -100000i64..100000) {
            let f = fp(3);
            let x = f.int(a).mul(&f.pi_pow(-3));
            let y = f.int(b).mul(&f.pi_pow(-2));
            prop_assert_eq!(chi(&x.add(&y)).unwrap(), chi(&x).unwrap().mul(&chi(&y).unwrap()));
        }
    }
}
