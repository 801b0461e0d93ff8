//! The quaternion division algebra D = E ⊕ Eδ with δ² = ϖ and δe = ēδ.

use crate::error::{Error, Result};
use crate::local_field::{ExtNum, FieldParams, PadicNum};
use rand::Rng;

/// ⌈x/2⌉ for any integer x.
pub(crate) fn ceil_half(x: i32) -> i32 {
    -((-x).div_euclid(2))
}

/// Rings that admit a Cayley transform.
pub trait UnitalRing: Sized + Clone {
    fn one_like(&self) -> Self;
    fn r_add(&self, o: &Self) -> Self;
    fn r_sub(&self, o: &Self) -> Self;
    fn r_mul(&self, o: &Self) -> Self;
    fn r_inv(&self) -> Result<Self>;
    fn r_scale(&self, x: &PadicNum) -> Self;
}

/// c(x) = (1 − x)(1 + x)⁻¹.
pub fn cayley<T: UnitalRing>(x: &T) -> Result<T> {
    let one = x.one_like();
    let d = one
        .r_add(x)
        .r_inv()
        .map_err(|_| Error::NotInvertible("1 + x in Cayley transform".into()))?;
    Ok(one.r_sub(x).r_mul(&d))
}

/// Σ_{i=1}^{terms} (−1)^i (x/2)^i, which equals c(1 + x) when x is topologically nilpotent.
pub fn cayley_series<T: UnitalRing>(x: &T, half: &PadicNum, terms: usize) -> T {
    let y = x.r_scale(half);
    let mut pow = y.clone();
    let mut acc = y.r_sub(&y).r_sub(&y);
    for i in 2..=terms {
        pow = pow.r_mul(&y);
        acc = if i % 2 == 0 {
            acc.r_add(&pow)
        } else {
            acc.r_sub(&pow)
        };
    }
    acc
}

/// a + cδ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuatNum {
    pub a: ExtNum,
    pub c: ExtNum,
}

impl QuatNum {
    pub fn new(a: ExtNum, c: ExtNum) -> Self {
        QuatNum { a, c }
    }

    /// a + δc, normalized to a + c̄δ.
    pub fn from_left_delta(a: ExtNum, c: ExtNum) -> Self {
        QuatNum { a, c: c.conj() }
    }

    pub fn from_e(a: ExtNum) -> Self {
        let zero = ExtNum::from_f(PadicNum::zero(a.p()), a.z());
        QuatNum { a, c: zero }
    }

    pub fn one(f: &FieldParams) -> Self {
        Self::from_e(f.ext_int(1, 0))
    }

    pub fn delta(f: &FieldParams) -> Self {
        QuatNum {
            a: f.ext_int(0, 0),
            c: f.ext_int(1, 0),
        }
    }

    pub fn p(&self) -> u32 {
        self.a.p()
    }

    fn pi(&self) -> PadicNum {
        let prec = self
            .a
            .a
            .rel_prec()
            .max(self.c.a.rel_prec())
            .max(self.a.b.rel_prec())
            .max(self.c.b.rel_prec())
            .max(1);
        PadicNum::from_parts(self.p(), 1, 1, prec)
    }

    pub fn add(&self, o: &Self) -> Self {
        QuatNum {
            a: self.a.add(&o.a),
            c: self.c.add(&o.c),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        QuatNum {
            a: self.a.sub(&o.a),
            c: self.c.sub(&o.c),
        }
    }

    pub fn neg(&self) -> Self {
        QuatNum {
            a: self.a.neg(),
            c: self.c.neg(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let pi = self.pi();
        let a = self.a.mul(&o.a).add(&self.c.mul(&o.c.conj()).scale(&pi));
        let c = self.a.mul(&o.c).add(&self.c.mul(&o.a.conj()));
        QuatNum { a, c }
    }

    pub fn scale(&self, x: &PadicNum) -> Self {
        QuatNum {
            a: self.a.scale(x),
            c: self.c.scale(x),
        }
    }

    /// Left multiplication by an element of E.
    pub fn scale_e(&self, e: &ExtNum) -> Self {
        QuatNum {
            a: e.mul(&self.a),
            c: e.mul(&self.c),
        }
    }

    /// Main involution τ_D(a + cδ) = ā − cδ.
    pub fn invol(&self) -> Self {
        QuatNum {
            a: self.a.conj(),
            c: self.c.neg(),
        }
    }

    pub fn norm(&self) -> PadicNum {
        self.a.norm().sub(&self.c.norm().mul(&self.pi()))
    }

    pub fn trace(&self) -> PadicNum {
        self.a.trace()
    }

    /// Tr_{D/E} = 2·(E-component).
    pub fn trace_de(&self) -> ExtNum {
        self.a.add(&self.a)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.a.a.is_exact_zero()
            && self.a.b.is_exact_zero()
            && self.c.a.is_exact_zero()
            && self.c.b.is_exact_zero()
        {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm().inv()?;
        Ok(self.invol().scale(&n))
    }

    /// v_D = min(2v(a), 2v(c) + 1); Ok(None) for exact zero.
    pub fn valuation(&self) -> Result<Option<i32>> {
        let da = self.a.valuation().map(|v| v.map(|x| 2 * x));
        let dc = self.c.valuation().map(|v| v.map(|x| 2 * x + 1));
        let la = 2i64 * self.a.lower_val() as i64;
        let lc = 2i64 * self.c.lower_val() as i64 + 1;
        match (da, dc) {
            (Ok(Some(x)), Ok(Some(y))) => Ok(Some(x.min(y))),
            (Ok(x), Ok(y)) => Ok(x.or(y)),
            (Ok(Some(x)), Err(_)) if (x as i64) < lc => Ok(Some(x)),
            (Err(_), Ok(Some(y))) if (y as i64) < la => Ok(Some(y)),
            (Err(e), _) | (_, Err(e)) => Err(e),
        }
    }

    /// Decides v_D(x) ≥ r.
    pub fn val_at_least(&self, r: i32) -> Result<bool> {
        Ok(self.a.val_at_least(ceil_half(r))? && self.c.val_at_least(ceil_half(r - 1))?)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.c.is_zero()
    }

    /// Residues of the four F-coordinates (a₀, a₁, c₀, c₁) of an integral element mod p^k.
    pub fn residue(&self, k: u32) -> Result<[u64; 4]> {
        let [a0, a1] = self.a.residue(k)?;
        let [c0, c1] = self.c.residue(k)?;
        Ok([a0, a1, c0, c1])
    }

    pub fn is_member(&self, which: QuatSubgroup) -> Result<bool> {
        quat_subgroup_member(which, self)
    }
}

impl UnitalRing for QuatNum {
    fn one_like(&self) -> Self {
        let prec = self.a.max_rel_prec().max(self.c.max_rel_prec());
        QuatNum::from_e(self.a.one_with_prec(prec))
    }
    fn r_add(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn r_sub(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn r_mul(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn r_inv(&self) -> Result<Self> {
        self.inv()
    }
    fn r_scale(&self, x: &PadicNum) -> Self {
        self.scale(x)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuatSubgroup {
    D1,
    D0,
    D1R(u32),
}

pub fn quat_subgroup_member(which: QuatSubgroup, x: &QuatNum) -> Result<bool> {
    match which {
        QuatSubgroup::D1 => Ok(x.norm().sub(&x.one_like().a.a).is_zero()),
        QuatSubgroup::D0 => Ok(x.trace().is_zero()),
        QuatSubgroup::D1R(r) => {
            if !quat_subgroup_member(QuatSubgroup::D1, x)? {
                return Ok(false);
            }
            x.sub(&x.one_like()).val_at_least(r as i32)
        }
    }
}

/// Random quaternion with v_D ≥ m.
pub fn random_quat<R: Rng + ?Sized>(f: &FieldParams, rng: &mut R, m: i32) -> QuatNum {
    QuatNum::new(
        f.random_ext(rng, ceil_half(m)),
        f.random_ext(rng, ceil_half(m - 1)),
    )
}

/// Random traceless quaternion with v_D ≥ m.
pub fn random_traceless<R: Rng + ?Sized>(f: &FieldParams, rng: &mut R, m: i32) -> QuatNum {
    let b = f.random_padic(rng, ceil_half(m));
    QuatNum::new(f.ext(f.zero(), b), f.random_ext(rng, ceil_half(m - 1)))
}

/// Random element of D¹_m (m ≥ 1) as a Cayley transform of a traceless element of P_D^m.
pub fn random_d1<R: Rng + ?Sized>(f: &FieldParams, rng: &mut R, m: u32) -> QuatNum {
    let y = random_traceless(f, rng, m.max(1) as i32);
    cayley(&y).expect("1 + y is a unit")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fp() -> FieldParams {
        FieldParams::new(3, 10).unwrap()
    }

    #[test]
    fn delta_examples() {
        let f = fp();
        let d = QuatNum::delta(&f);
        assert_eq!(d.norm(), f.int(-3));
        assert!(d.trace().is_zero());
        let a = QuatNum::from_e(f.alpha());
        assert_eq!(d.mul(&a), QuatNum::new(f.ext_int(0, 0), f.ext_int(0, -1)));
        assert_eq!(d.mul(&d), QuatNum::from_e(f.ext_int(3, 0)));
        assert!(!d.is_member(QuatSubgroup::D1).unwrap());
        assert!(a.mul(&d).is_member(QuatSubgroup::D0).unwrap());
        assert_eq!(d.valuation(), Ok(Some(1)));
        assert_eq!(
            QuatNum::from_left_delta(f.ext_int(0, 0), f.alpha()),
            d.mul(&a)
        );
    }

    #[test]
    fn one_in_filtration() {
        let f = fp();
        let one = QuatNum::one(&f);
        for r in 0..15 {
            assert!(one.is_member(QuatSubgroup::D1R(r)).unwrap());
        }
    }

    #[test]
    fn cayley_fixed_points() {
        let f = fp();
        let one = QuatNum::one(&f);
        let zero = one.sub(&one);
        assert!(cayley(&one).unwrap().is_zero());
        assert_eq!(cayley(&zero).unwrap(), one);
        assert!(cayley(&one.neg()).is_err());
    }

    #[test]
    fn random_samples() {
        let f = FieldParams::new(5, 12).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let x = random_quat(&f, &mut rng, -2);
            let y = random_quat(&f, &mut rng, 1);
            assert_eq!(x.mul(&y).norm(), x.norm().mul(&y.norm()));
            if !x.is_zero() {
                assert_eq!(x.inv().unwrap().mul(&x), QuatNum::one(&f));
                if !y.is_zero() {
                    assert!(!x.mul(&y).is_zero());
                }
            }
        }
    }

    #[test]
    fn cayley_involutive_and_series() {
        let f = FieldParams::new(3, 14).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let half = f.half();
        for _ in 0..100 {
            let x = random_quat(&f, &mut rng, 0);
            if let Ok(c) = cayley(&x) {
                assert_eq!(cayley(&c).unwrap(), x);
            }
            let t = random_quat(&f, &mut rng, 1);
            let closed = cayley(&QuatNum::one(&f).add(&t)).unwrap();
            assert_eq!(cayley_series(&t, &half, 40), closed);
            assert!(closed.val_at_least(1).unwrap());
        }
    }

    #[test]
    fn f_cap_pd_n() {
        let f = fp();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let x = f.random_padic(&mut rng, 0);
            let q = QuatNum::from_e(f.ext(x, f.zero()));
            if let Ok(Some(vd)) = q.valuation() {
                assert!(x.valuation().unwrap() >= ceil_half(vd));
            }
        }
    }

    #[test]
    fn trace_norm_identities_on_grid() {
        let f = fp();
        for a0 in 0..3 {
            for a1 in 0..3 {
                for c0 in 0..3 {
                    for c1 in 0..3 {
                        let x = QuatNum::new(f.ext_int(a0, a1), f.ext_int(c0, c1));
                        let t = QuatNum::from_e(f.ext(x.trace(), f.zero()));
                        let n = QuatNum::from_e(f.ext(x.norm(), f.zero()));
                        assert_eq!(x.add(&x.invol()), t);
                        assert_eq!(x.mul(&x.invol()), n);
                    }
                }
            }
        }
    }

    #[test]
    fn d1_mod_d1_1_has_q_plus_1_classes() {
        // D¹/D¹₁ is detected on a mod P_E: units with N(a) ≡ 1 mod p
        let p = 3u64;
        let z = fp().z as u64;
        let count = (0..p)
            .flat_map(|a| (0..p).map(move |b| (a, b)))
            .filter(|&(a, b)| (a * a + p * p - z * b * b % p) % p == 1)
            .count();
        assert_eq!(count as u64, p + 1);
    }

    proptest! {
        #[test]
        fn d1_filtration_matches_valuation(seed in 0u64..1000, m in 1u32..6) {
            let f = FieldParams::new(3, 12).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let h = random_d1(&f, &mut rng, m);
            prop_assert!(h.is_member(QuatSubgroup::D1R(m)).unwrap());
            let y = cayley(&h).unwrap();
            prop_assert!(y.val_at_least(m as i32).unwrap());
            prop_assert!(y.trace().is_zero());
        }

        #[test]
        fn ceil_half_matches(x in -50i32..50) {
            prop_assert_eq!(ceil_half(x), (x as f64 / 2.0).ceil() as i32);
        }
    }
}
