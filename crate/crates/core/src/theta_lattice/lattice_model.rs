//! Functions in the lattice model supported on single A*-cosets, and the action of H_M on them.

use crate::cyclotomic::CycField;
use crate::error::{Error, Result};
use crate::local_field::{chi, CycVal, FieldParams};
use crate::quaternion::{cayley, QuatNum};
use crate::unitary_groups::Mat2;
use rustc_hash::FxHashMap;
use std::cell::RefCell;
use std::sync::Arc;

use super::forms::{form_ww, BigVec};
use super::heisenberg::{FiniteHeisenberg, MonoOp};
use super::lattice::A_DUAL_SHIFTS;

/// Z-linear combination of roots of unity, sorted and with nonzero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CycSum(Vec<(CycVal, i64)>);

thread_local! {
    static FIELDS: RefCell<FxHashMap<u64, Arc<CycField>>> = RefCell::new(FxHashMap::default());
}

fn field_of(n: u64) -> Arc<CycField> {
    FIELDS.with(|m| {
        m.borrow_mut()
            .entry(n)
            .or_insert_with(|| CycField::new(n))
            .clone()
    })
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl CycSum {
    pub fn zero() -> Self {
        CycSum(Vec::new())
    }

    pub fn root(c: CycVal) -> Self {
        CycSum(vec![(c, 1)])
    }

    fn normalized(mut v: Vec<(CycVal, i64)>) -> Self {
        v.sort_by_key(|t| t.0);
        let mut out: Vec<(CycVal, i64)> = Vec::with_capacity(v.len());
        for (c, k) in v {
            match out.last_mut() {
                Some(last) if last.0 == c => last.1 += k,
                _ => out.push((c, k)),
            }
        }
        out.retain(|t| t.1 != 0);
        CycSum(out)
    }

    pub fn terms(&self) -> &[(CycVal, i64)] {
        &self.0
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::normalized(self.0.iter().chain(&o.0).copied().collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::normalized(
            self.0
                .iter()
                .copied()
                .chain(o.0.iter().map(|&(c, k)| (c, -k)))
                .collect(),
        )
    }

    pub fn mul_root(&self, r: &CycVal) -> Self {
        Self::normalized(self.0.iter().map(|&(c, k)| (c.mul(r), k)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut v = Vec::with_capacity(self.0.len() * o.0.len());
        for &(c, k) in &self.0 {
            for &(d, l) in &o.0 {
                v.push((c.mul(&d), k * l));
            }
        }
        Self::normalized(v)
    }

    /// Exact vanishing in Q(ζ_n), n the lcm of the orders present.
    pub fn is_zero(&self) -> bool {
        match self.0.len() {
            0 => true,
            1 => false,
            _ => {
                let n = self
                    .0
                    .iter()
                    .fold(1u64, |l, t| l / gcd(l, t.0.order()) * t.0.order());
                let field = field_of(n);
                let mut counts = vec![0i64; n as usize];
                for &(c, k) in &self.0 {
                    counts[field.exponent(&c) as usize] += k;
                }
                field.from_counts(&counts).is_zero()
            }
        }
    }

    pub fn same(&self, o: &Self) -> bool {
        self == o || self.sub(o).is_zero()
    }
}

/// Vector in the q²-dimensional model space.
pub type XVec = Vec<CycSum>;

pub fn apply_op(op: &MonoOp, v: &XVec) -> XVec {
    op.src
        .iter()
        .zip(&op.scal)
        .map(|(&s, c)| v[s].mul_root(c))
        .collect()
}

fn scale_vec(v: &XVec, c: &CycVal) -> XVec {
    v.iter().map(|x| x.mul_root(c)).collect()
}

pub fn same_vec(a: &XVec, b: &XVec) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.same(y))
}

/// Both nonzero and of rank one together.
pub fn proportional_vec(a: &XVec, b: &XVec) -> bool {
    if a.iter().all(|x| x.is_zero()) || b.iter().all(|x| x.is_zero()) {
        return false;
    }
    let nz: Vec<usize> = (0..a.len())
        .filter(|&i| !a[i].is_zero() || !b[i].is_zero())
        .collect();
    nz.iter()
        .all(|&i| nz.iter().all(|&j| a[i].mul(&b[j]).same(&a[j].mul(&b[i]))))
}

/// An element of G or G′ acting on 𝒲: G by v ↦ g·v, G′ through w ↦ w·m.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WOp {
    Left(Mat2),
    Right(QuatNum),
}

impl WOp {
    pub fn from_g(g: &Mat2) -> Self {
        WOp::Left(*g)
    }

    /// h ∈ D¹ acts by w ↦ w·h⁻¹ = w·τ_D(h).
    pub fn from_gprime(h: &QuatNum) -> Self {
        WOp::Right(h.invol())
    }

    pub fn apply(&self, x: &BigVec) -> BigVec {
        match self {
            WOp::Left(g) => x.act_left(g),
            WOp::Right(m) => x.act_right(m),
        }
    }

    /// c(L_g) = L_{c(g)} and c(R_m) = R_{c(m)}.
    pub fn cayley(&self) -> Result<WOp> {
        Ok(match self {
            WOp::Left(g) => WOp::Left(cayley(g)?),
            WOp::Right(m) => WOp::Right(cayley(m)?),
        })
    }
}

/// y_{w,x}: supported on w + A* with value x at w.
#[derive(Clone, Debug, PartialEq)]
pub struct YFunc {
    pub support: BigVec,
    pub value: XVec,
}

#[derive(Clone, Debug)]
pub struct LatticeModel {
    pub f: FieldParams,
    pub heis: FiniteHeisenberg,
}

impl LatticeModel {
    pub fn new(f: &FieldParams) -> Self {
        LatticeModel {
            f: *f,
            heis: FiniteHeisenberg::new(f),
        }
    }

    pub fn dim(&self) -> usize {
        self.heis.dim
    }

    pub fn basis_vector(&self, j: usize) -> XVec {
        (0..self.dim())
            .map(|i| {
                if i == j {
                    CycSum::root(CycVal::ONE)
                } else {
                    CycSum::zero()
                }
            })
            .collect()
    }

    pub fn in_a_dual(&self, x: &BigVec) -> Result<bool> {
        x.in_shifted(A_DUAL_SHIFTS)
    }

    pub fn in_a(&self, x: &BigVec) -> Result<bool> {
        x.in_shifted([0; 4])
    }

    /// ρ_L(e(a)) for a ∈ A*, through Ā.
    pub fn rho_l(&self, a: &BigVec) -> Result<MonoOp> {
        Ok(self.heis.op(&self.heis.residue_of(a)?, 0))
    }

    fn chi_half(&self, x: &BigVec, y: &BigVec) -> Result<CycVal> {
        chi(&form_ww(x, y).mul(&self.f.half()))
    }

    pub fn y(&self, w: BigVec, x: XVec) -> YFunc {
        YFunc {
            support: w,
            value: x,
        }
    }

    /// f(w + a) = χ(⟨⟨w, a⟩⟩/2)·ρ_L(e(a))·f(w) for a ∈ A*, zero off the support.
    pub fn eval(&self, f: &YFunc, u: &BigVec) -> Result<XVec> {
        let a = u.sub(&f.support);
        if !self.in_a_dual(&a)? {
            return Ok(vec![CycSum::zero(); self.dim()]);
        }
        let c = self.chi_half(&f.support, &a)?;
        Ok(scale_vec(&apply_op(&self.rho_l(&a)?, &f.value), &c))
    }

    /// Supports agree modulo A* and the values at a common point are proportional.
    pub fn y_proportional(&self, f: &YFunc, g: &YFunc) -> Result<bool> {
        if !self.in_a_dual(&g.support.sub(&f.support))? {
            return Ok(false);
        }
        Ok(proportional_vec(&f.value, &self.eval(g, &f.support)?))
    }

    pub fn same_func(&self, f: &YFunc, g: &YFunc) -> Result<bool> {
        if !self.in_a_dual(&g.support.sub(&f.support))? {
            return Ok(f.value.iter().all(|x| x.is_zero()) && g.value.iter().all(|x| x.is_zero()));
        }
        Ok(same_vec(&f.value, &self.eval(g, &f.support)?))
    }

    /// F-basis of (M^k)* = P^{−k}A*.
    pub fn m_dual_basis(&self, k: i32) -> Vec<BigVec> {
        let f = &self.f;
        let mut out = Vec::with_capacity(8);
        for i in 0..4 {
            let s = A_DUAL_SHIFTS[i] - k;
            for e in [f.ext_int(1, 0), f.alpha()] {
                let mut c = [f.ext_int(0, 0); 4];
                c[i] = e.scale(&f.pi_pow(s));
                out.push(BigVec(c));
            }
        }
        out
    }

    /// (g − 1)(M^k)* ⊆ A*, checked on a basis.
    pub fn in_h_m(&self, op: &WOp, k: i32) -> Result<bool> {
        for e in self.m_dual_basis(k) {
            if !self.in_a_dual(&op.apply(&e).sub(&e))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The operator ρ_L(2c(h)w)·χ(⟨⟨w, c(h)w⟩⟩) applied at w.
    pub fn hm_operator(&self, c: &WOp, w: &BigVec) -> Result<MonoOp> {
        let cw = c.apply(w);
        let s = chi(&form_ww(w, &cw))?;
        Ok(self.rho_l(&cw.add(&cw))?.times(&s))
    }

    /// ω(h)f for h ∈ H_M and f supported in (M^k)*.
    pub fn weil_hm_action(&self, op: &WOp, k: i32, f: &YFunc) -> Result<YFunc> {
        if !self.in_h_m(op, k)? {
            return Err(Error::OutsideDomain("h is not in H_M".into()));
        }
        let sk = A_DUAL_SHIFTS.map(|s| s - k);
        if !f.support.in_shifted(sk)? {
            return Err(Error::OutsideDomain("support is not in (M^k)*".into()));
        }
        let c = op.cayley()?;
        let t = self.hm_operator(&c, &f.support)?;
        Ok(YFunc {
            support: f.support,
            value: apply_op(&t, &f.value),
        })
    }

    /// The action scalar χ(⟨⟨w, c(h)w⟩⟩) when 2c(h)w ∈ A.
    pub fn hm_scalar(&self, op: &WOp, w: &BigVec) -> Result<Option<CycVal>> {
        let cw = op.cayley()?.apply(w);
        if !self.in_a(&cw.add(&cw))? {
            return Ok(None);
        }
        Ok(Some(chi(&form_ww(w, &cw))?))
    }

    /// The transformed function evaluated at w + a by the defining formula, against covariance transport.
    pub fn action_is_covariant(&self, op: &WOp, k: i32, f: &YFunc, a: &BigVec) -> Result<bool> {
        let g = self.weil_hm_action(op, k, f)?;
        let u = f.support.add(a);
        let direct = apply_op(&self.hm_operator(&op.cayley()?, &u)?, &self.eval(f, &u)?);
        Ok(same_vec(&direct, &self.eval(&g, &u)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quaternion::random_d1;
    use crate::unitary_groups::random_sl2;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rand_in(f: &FieldParams, rng: &mut ChaCha8Rng, shifts: [i32; 4]) -> BigVec {
        BigVec(shifts.map(|s| f.random_ext(rng, s)))
    }

    #[test]
    fn cyc_sum_relations() {
        let z3 = |e| CycSum::root(CycVal::new(3, e));
        assert!(z3(0).add(&z3(1)).add(&z3(2)).is_zero());
        assert!(!z3(0).add(&z3(1)).is_zero());
        assert!(z3(1).mul(&z3(2)).same(&CycSum::root(CycVal::ONE)));
    }

    #[test]
    fn proportionality() {
        let f = FieldParams::new(3, 12).unwrap();
        let m = LatticeModel::new(&f);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = m.basis_vector(4);
        let mut disjoint = 0;
        for _ in 0..100 {
            let w = rand_in(&f, &mut rng, [-1, -2, -1, -2]);
            let y = m.y(w, x.clone());
            assert!(m.y_proportional(&y, &y).unwrap());
            let a = rand_in(&f, &mut rng, [0; 4]);
            assert!(m.y_proportional(&m.y(w.add(&a), x.clone()), &y).unwrap());
            let astar = rand_in(&f, &mut rng, A_DUAL_SHIFTS);
            let moved = apply_op(&m.rho_l(&astar).unwrap(), &x);
            assert!(m.y_proportional(&m.y(w.add(&astar), moved), &y).unwrap());
            let w2 = rand_in(&f, &mut rng, [-1, -2, -1, -2]);
            if !m.in_a_dual(&w2.sub(&w)).unwrap() {
                disjoint += 1;
                assert!(!m.y_proportional(&m.y(w2, x.clone()), &y).unwrap());
            }
        }
        assert!(disjoint > 80);
    }

    #[test]
    fn shift_without_rho_breaks_proportionality() {
        let f = FieldParams::new(3, 12).unwrap();
        let m = LatticeModel::new(&f);
        let w = rand_in(&f, &mut ChaCha8Rng::seed_from_u64(9), [-1, -2, -1, -2]);
        let x = m.basis_vector(0);
        let mut astar = BigVec([f.ext_int(0, 0); 4]);
        astar.0[1] = f.ext(f.pi_pow(-1), f.zero());
        assert!(!m
            .y_proportional(&m.y(w.add(&astar), x.clone()), &m.y(w, x))
            .unwrap());
    }

    #[test]
    fn identity_acts_trivially() {
        let f = FieldParams::new(5, 12).unwrap();
        let m = LatticeModel::new(&f);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let y = m.y(rand_in(&f, &mut rng, [-2, -3, -2, -3]), m.basis_vector(7));
        let one = WOp::from_g(&Mat2::identity(&f));
        assert_eq!(m.weil_hm_action(&one, 2, &y).unwrap(), y);
    }

    #[test]
    fn h_m_membership() {
        let f = FieldParams::new(3, 14).unwrap();
        let m = LatticeModel::new(&f);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for k in 1..=2 {
            assert!(m
                .in_h_m(&WOp::from_g(&random_sl2(&f, &mut rng, k as u32)), k)
                .unwrap());
            assert!(m
                .in_h_m(&WOp::from_gprime(&random_d1(&f, &mut rng, 2 * k as u32)), k)
                .unwrap());
        }
        let g = Mat2::from_ints(&f, 1, 1, 0, 1);
        assert!(!m.in_h_m(&WOp::from_g(&g), 1).unwrap());
        assert!(m
            .weil_hm_action(
                &WOp::from_g(&g),
                1,
                &m.y(m.m_dual_basis(1)[0], m.basis_vector(0))
            )
            .is_err());
    }

    #[test]
    fn action_respects_covariance() {
        let f = FieldParams::new(3, 14).unwrap();
        let m = LatticeModel::new(&f);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..30 {
            let k = rng.gen_range(1..=2);
            let w = rand_in(&f, &mut rng, A_DUAL_SHIFTS.map(|s| s - k));
            let y = m.y(w, m.basis_vector(rng.gen_range(0..9)));
            let a = rand_in(&f, &mut rng, A_DUAL_SHIFTS);
            let op = if rng.gen() {
                WOp::from_g(&random_sl2(&f, &mut rng, k as u32))
            } else {
                WOp::from_gprime(&random_d1(&f, &mut rng, 2 * k as u32))
            };
            assert!(m.action_is_covariant(&op, k, &y, &a).unwrap());
        }
    }
}
