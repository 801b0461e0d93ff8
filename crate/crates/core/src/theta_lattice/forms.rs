//! The forms on V = E², W = D and 𝒲 = V ⊗_E W.

use crate::error::Result;
use crate::local_field::{ExtNum, PadicNum};
use crate::quaternion::QuatNum;
use crate::unitary_groups::Mat2;

/// (a, b) = a·u + b·v in the hyperbolic basis of V.
pub type VVec = [ExtNum; 2];

/// ⟨x, y⟩ = xᵗ·J·ȳ, J = (0 1; −1 0).
pub fn form_v(x: &VVec, y: &VVec) -> ExtNum {
    x[0].mul(&y[1].conj()).sub(&x[1].mul(&y[0].conj()))
}

/// ⟨u, w⟩′ = ½Tr_{D/E}(u·τ_D(w)) = u₁w̄₁ − ϖ·u₂w̄₂.
pub fn form_w(u: &QuatNum, w: &QuatNum) -> ExtNum {
    u.mul(&w.invol()).a
}

fn pi_at(prec: u32, p: u32) -> PadicNum {
    PadicNum::from_parts(p, 1, 1, prec.max(1))
}

/// Element of 𝒲 in the coordinates (u⊗1, u⊗δ, v⊗1, v⊗δ).
///
/// W carries the conjugate E-structure inside the tensor product, so the pure tensor
/// (a, b) ⊗ (w₁ + w₂δ) has coordinates (a·w̄₁, a·w̄₂, b·w̄₁, b·w̄₂).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BigVec(pub [ExtNum; 4]);

impl BigVec {
    pub fn pure(v: &VVec, w: &QuatNum) -> Self {
        let (w1, w2) = (w.a.conj(), w.c.conj());
        BigVec([v[0].mul(&w1), v[0].mul(&w2), v[1].mul(&w1), v[1].mul(&w2)])
    }

    pub fn p(&self) -> u32 {
        self.0[0].p()
    }

    fn prec(&self) -> u32 {
        self.0.iter().map(|x| x.max_rel_prec()).max().unwrap_or(1)
    }

    pub fn add(&self, o: &Self) -> Self {
        BigVec(std::array::from_fn(|i| self.0[i].add(&o.0[i])))
    }

    pub fn sub(&self, o: &Self) -> Self {
        BigVec(std::array::from_fn(|i| self.0[i].sub(&o.0[i])))
    }

    pub fn neg(&self) -> Self {
        BigVec(self.0.map(|x| x.neg()))
    }

    pub fn scale(&self, x: &PadicNum) -> Self {
        BigVec(self.0.map(|c| c.scale(x)))
    }

    pub fn scale_e(&self, x: &ExtNum) -> Self {
        BigVec(self.0.map(|c| x.mul(&c)))
    }

    /// v ↦ g·v on the V factor.
    pub fn act_left(&self, g: &Mat2) -> Self {
        let [a, b, c, d] = g.m;
        let [x0, x1, x2, x3] = self.0;
        BigVec([
            a.mul(&x0).add(&b.mul(&x2)),
            a.mul(&x1).add(&b.mul(&x3)),
            c.mul(&x0).add(&d.mul(&x2)),
            c.mul(&x1).add(&d.mul(&x3)),
        ])
    }

    /// w ↦ w·m on the W factor.
    pub fn act_right(&self, m: &QuatNum) -> Self {
        let pi = pi_at(
            self.prec().max(m.a.max_rel_prec()).max(m.c.max_rel_prec()),
            self.p(),
        );
        let (m1, m2) = (m.a, m.c);
        let half = |y1: &ExtNum, y2: &ExtNum| {
            [
                y1.mul(&m1.conj()).add(&y2.mul(&m2).scale(&pi)),
                y1.mul(&m2.conj()).add(&y2.mul(&m1)),
            ]
        };
        let [u1, u2] = half(&self.0[0], &self.0[1]);
        let [v1, v2] = half(&self.0[2], &self.0[3]);
        BigVec([u1, u2, v1, v2])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    /// Coordinate i lies in P_E^{shifts[i]} for every i.
    pub fn in_shifted(&self, shifts: [i32; 4]) -> Result<bool> {
        for (x, s) in self.0.iter().zip(shifts) {
            if !x.val_at_least(s)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// ⟨⟨x, y⟩⟩ = Tr_{E/F}(x₀ȳ₂ − x₂ȳ₀ − ϖ(x₁ȳ₃ − x₃ȳ₁)).
///
/// On pure tensors this is Tr_{E/F}(⟨v₁, v₂⟩·conj⟨w₁, w₂⟩′).
pub fn form_ww(x: &BigVec, y: &BigVec) -> PadicNum {
    let pi = pi_at(x.prec().max(y.prec()), x.p());
    let (x, y) = (&x.0, &y.0);
    let h0 = x[0].mul(&y[2].conj()).sub(&x[2].mul(&y[0].conj()));
    let h1 = x[1].mul(&y[3].conj()).sub(&x[3].mul(&y[1].conj()));
    h0.sub(&h1.scale(&pi)).trace()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local_field::FieldParams;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn vv(f: &FieldParams, a: (i64, i64), b: (i64, i64)) -> VVec {
        [f.ext_int(a.0, a.1), f.ext_int(b.0, b.1)]
    }

    #[test]
    fn basis_values() {
        let f = FieldParams::new(3, 8).unwrap();
        let (u, v) = (vv(&f, (1, 0), (0, 0)), vv(&f, (0, 0), (1, 0)));
        assert_eq!(form_v(&u, &v), f.ext_int(1, 0));
        assert!(form_v(&u, &u).is_zero());
        let one = QuatNum::one(&f);
        let d = QuatNum::delta(&f);
        assert_eq!(form_w(&one, &one), f.ext_int(1, 0));
        assert_eq!(form_w(&d, &d), f.ext(f.pi_pow(1).neg(), f.zero()));
    }

    fn rand_pure(f: &FieldParams, rng: &mut ChaCha8Rng) -> (VVec, QuatNum) {
        let v = [f.random_ext(rng, -1), f.random_ext(rng, 0)];
        let w = QuatNum::new(f.random_ext(rng, 0), f.random_ext(rng, -1));
        (v, w)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn symmetry_laws(seed in any::<u64>(), p in prop::sample::select(vec![3u32, 5, 7])) {
            let f = FieldParams::new(p, 12).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (v1, w1) = rand_pure(&f, &mut rng);
            let (v2, w2) = rand_pure(&f, &mut rng);
            prop_assert!(form_v(&v2, &v1).add(&form_v(&v1, &v2).conj()).is_zero());
            prop_assert!(form_w(&w2, &w1).sub(&form_w(&w1, &w2).conj()).is_zero());
            prop_assert!(form_w(&w1, &w1).sub(&f.ext(w1.norm(), f.zero())).is_zero());
            let (x, y) = (BigVec::pure(&v1, &w1), BigVec::pure(&v2, &w2));
            prop_assert!(form_ww(&x, &y).add(&form_ww(&y, &x)).is_zero());
            let direct = form_v(&v1, &v2).mul(&form_w(&w1, &w2).conj()).trace();
            prop_assert!(form_ww(&x, &y).sub(&direct).is_zero());
        }

        #[test]
        fn actions_on_pure_tensors(seed in any::<u64>()) {
            let f = FieldParams::new(5, 12).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (v, w) = rand_pure(&f, &mut rng);
            let x = BigVec::pure(&v, &w);
            let g = Mat2::new(f.random_ext(&mut rng, 0), f.random_ext(&mut rng, 0), f.random_ext(&mut rng, 0), f.random_ext(&mut rng, 0));
            let m = QuatNum::new(f.random_ext(&mut rng, 0), f.random_ext(&mut rng, 0));
            prop_assert!(x.act_left(&g).sub(&BigVec::pure(&g.apply(&v), &w)).is_zero());
            prop_assert!(x.act_right(&m).sub(&BigVec::pure(&v, &w.mul(&m))).is_zero());
        }
    }

    #[test]
    fn e_balanced() {
        let f = FieldParams::new(3, 10).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (v, w) = rand_pure(&f, &mut rng);
        let e = f.random_ext(&mut rng, 0);
        let lhs = BigVec::pure(&[e.mul(&v[0]), e.mul(&v[1])], &w);
        let rhs = BigVec::pure(&v, &QuatNum::new(e.conj().mul(&w.a), e.conj().mul(&w.c)));
        assert!(lhs.sub(&rhs).is_zero());
    }
}
