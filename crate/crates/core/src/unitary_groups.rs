//! Matrix models of G = U(1,1) = SL₂(F) ⋊ E¹ and G′ = U(2) = D¹ ⋊ E¹.
//!
//! The splitting of G uses the section d(λ) = μ̄⁻¹·embed(μ̄) where λ = μ/μ̄ (Hilbert 90);
//! it is a homomorphism E¹ → U(1,1) with det d(λ) = λ, and σ_λ is conjugation by embed(μ̄).

use crate::error::{Error, Result};
use crate::local_field::{E1Subgroup, ExtNum, FieldParams, PadicNum};
use crate::quaternion::{cayley, ceil_half, QuatNum, QuatSubgroup, UnitalRing};
use rand::Rng;

/// 2×2 matrix over E, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2 {
    pub m: [ExtNum; 4],
}

impl Mat2 {
    pub fn new(a: ExtNum, b: ExtNum, c: ExtNum, d: ExtNum) -> Self {
        Mat2 { m: [a, b, c, d] }
    }

    pub fn from_f(f: &FieldParams, a: PadicNum, b: PadicNum, c: PadicNum, d: PadicNum) -> Self {
        let e = |x| f.ext(x, f.zero());
        Mat2::new(e(a), e(b), e(c), e(d))
    }

    pub fn from_ints(f: &FieldParams, a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2::from_f(f, f.int(a), f.int(b), f.int(c), f.int(d))
    }

    pub fn identity(f: &FieldParams) -> Self {
        Mat2::from_ints(f, 1, 0, 0, 1)
    }

    /// J = (0 1; −1 0).
    pub fn j(f: &FieldParams) -> Self {
        Mat2::from_ints(f, 0, 1, -1, 0)
    }

    /// diag(1, −δ²) = diag(1, −ϖ).
    pub fn h_form(f: &FieldParams) -> Self {
        Mat2::from_f(f, f.one(), f.zero(), f.zero(), f.pi_pow(1).neg())
    }

    /// w = (0 1; ϖ 0).
    pub fn w(f: &FieldParams) -> Self {
        Mat2::from_f(f, f.zero(), f.one(), f.pi_pow(1), f.zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        Mat2 {
            m: std::array::from_fn(|i| self.m[i].add(&o.m[i])),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Mat2 {
            m: std::array::from_fn(|i| self.m[i].sub(&o.m[i])),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let [a, b, c, d] = self.m;
        let [e, f, g, h] = o.m;
        Mat2::new(
            a.mul(&e).add(&b.mul(&g)),
            a.mul(&f).add(&b.mul(&h)),
            c.mul(&e).add(&d.mul(&g)),
            c.mul(&f).add(&d.mul(&h)),
        )
    }

    pub fn scale(&self, x: &PadicNum) -> Self {
        Mat2 {
            m: self.m.map(|e| e.scale(x)),
        }
    }

    pub fn scale_e(&self, x: &ExtNum) -> Self {
        Mat2 {
            m: self.m.map(|e| e.mul(x)),
        }
    }

    pub fn det(&self) -> ExtNum {
        let [a, b, c, d] = self.m;
        a.mul(&d).sub(&b.mul(&c))
    }

    pub fn trace(&self) -> ExtNum {
        self.m[0].add(&self.m[3])
    }

    pub fn inv(&self) -> Result<Self> {
        let di = self.det().inv()?;
        let [a, b, c, d] = self.m;
        Ok(Mat2::new(d, b.neg(), c.neg(), a).scale_e(&di))
    }

    pub fn conj(&self) -> Self {
        Mat2 {
            m: self.m.map(|e| e.conj()),
        }
    }

    pub fn transpose(&self) -> Self {
        let [a, b, c, d] = self.m;
        Mat2::new(a, c, b, d)
    }

    pub fn conj_transpose(&self) -> Self {
        self.conj().transpose()
    }

    pub fn is_f_matrix(&self) -> bool {
        self.m.iter().all(|e| e.is_in_f())
    }

    pub fn val_at_least(&self, r: i32) -> Result<bool> {
        for e in &self.m {
            if !e.val_at_least(r)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Entries of an integral F-matrix mod p^k.
    pub fn residue(&self, k: u32) -> Result<[u64; 4]> {
        if !self.is_f_matrix() {
            return Err(Error::OutsideDomain("matrix has entries outside F".into()));
        }
        let mut out = [0u64; 4];
        for (o, e) in out.iter_mut().zip(&self.m) {
            *o = e.a.residue(k)?;
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[ExtNum; 2]) -> [ExtNum; 2] {
        let [a, b, c, d] = self.m;
        [
            a.mul(&v[0]).add(&b.mul(&v[1])),
            c.mul(&v[0]).add(&d.mul(&v[1])),
        ]
    }
}

impl UnitalRing for Mat2 {
    fn one_like(&self) -> Self {
        let one = self.m[0].one_like();
        let zero = one.sub(&one);
        Mat2::new(one, zero, zero, one)
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

/// x + yα ↦ (x yz; y x).
pub fn embed(x: &ExtNum) -> Mat2 {
    let f = |t: PadicNum| ExtNum::from_f(t, x.z());
    Mat2::new(f(x.a), f(x.b.mul_int(x.z())), f(x.b), f(x.a))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupKind {
    U11,
    U2,
    SU,
}

/// J = x·J·x̄ᵗ (U11, SU) or diag(1,−δ²) = x·diag(1,−δ²)·x̄ᵗ (U2).
pub fn is_in_group(which: GroupKind, f: &FieldParams, x: &Mat2) -> Result<bool> {
    let form = match which {
        GroupKind::U2 => Mat2::h_form(f),
        _ => Mat2::j(f),
    };
    let rel = x.mul(&form).mul(&x.conj_transpose()).sub(&form);
    let ok = rel.m.iter().all(|e| e.is_zero());
    if which == GroupKind::SU {
        return Ok(ok && x.det().sub(&x.m[0].one_like()).is_zero());
    }
    Ok(ok)
}

/// The Hilbert-90 lift μ with λ = μ/μ̄.
pub fn hilbert90(lam: &ExtNum) -> ExtNum {
    let one = lam.one_like();
    let mu = one.add(lam);
    if mu.valuation() == Ok(Some(0)) {
        mu
    } else {
        let alpha = ExtNum::new(PadicNum::zero(lam.p()), one.a, lam.z());
        alpha.mul(&one.sub(lam))
    }
}

/// d(λ) = μ̄⁻¹·embed(μ̄).
pub fn section_d(lam: &ExtNum) -> Mat2 {
    let mb = hilbert90(lam).conj();
    embed(&mb).scale_e(&mb.inv().expect("μ is a unit"))
}

/// σ_λ(g) = d(λ)·g·d(λ)⁻¹.
pub fn sigma(lam: &ExtNum, g: &Mat2) -> Mat2 {
    let e = embed(&hilbert90(lam).conj());
    e.mul(g).mul(&e.inv().expect("embed of a unit"))
}

/// σ′_λ(h) = λhλ⁻¹ in D^×; on a + cδ this is a + λ²cδ.
pub fn sigma_prime(lam: &ExtNum, h: &QuatNum) -> QuatNum {
    QuatNum::new(h.a, h.c.mul(&lam.mul(lam)))
}

/// Element (g, λ) of SL₂(F) ⋊ E¹.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GrpElemU11 {
    pub g: Mat2,
    pub lam: ExtNum,
}

impl GrpElemU11 {
    pub fn new(g: Mat2, lam: ExtNum) -> Self {
        GrpElemU11 { g, lam }
    }

    pub fn identity(f: &FieldParams) -> Self {
        GrpElemU11 {
            g: Mat2::identity(f),
            lam: f.ext_int(1, 0),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        GrpElemU11 {
            g: self.g.mul(&sigma(&self.lam, &o.g)),
            lam: self.lam.mul(&o.lam),
        }
    }

    pub fn inv(&self) -> Self {
        let li = self.lam.conj();
        GrpElemU11 {
            g: sigma(&li, &self.g.inv().expect("det 1")),
            lam: li,
        }
    }

    /// g·d(λ).
    pub fn mat(&self) -> Mat2 {
        self.g.mul(&section_d(&self.lam))
    }

    /// Recover the pair from a matrix in U(1,1): λ = det, g = x·d(λ)⁻¹.
    pub fn from_mat(x: &Mat2) -> Result<Self> {
        let lam = x.det();
        let g = x.mul(&section_d(&lam).inv()?);
        Ok(GrpElemU11 { g, lam })
    }

    /// The central copy λ ↦ (embed(λ), λ²).
    pub fn central(lam: &ExtNum) -> Self {
        GrpElemU11 {
            g: embed(lam),
            lam: lam.mul(lam),
        }
    }
}

/// Element (h, λ) of D¹ ⋊ E¹ with σ′_λ = conjugation by λ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GrpElemU2 {
    pub h: QuatNum,
    pub lam: ExtNum,
}

impl GrpElemU2 {
    pub fn new(h: QuatNum, lam: ExtNum) -> Self {
        GrpElemU2 { h, lam }
    }

    pub fn identity(f: &FieldParams) -> Self {
        GrpElemU2 {
            h: QuatNum::one(f),
            lam: f.ext_int(1, 0),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        GrpElemU2 {
            h: self.h.mul(&sigma_prime(&self.lam, &o.h)),
            lam: self.lam.mul(&o.lam),
        }
    }

    pub fn inv(&self) -> Self {
        let li = self.lam.conj();
        GrpElemU2 {
            h: sigma_prime(&li, &self.h.invol()),
            lam: li,
        }
    }

    /// Action on W = D: w ↦ λ·w·τ_D(hλ).
    pub fn act(&self, w: &QuatNum) -> QuatNum {
        let y = self.h.mul(&QuatNum::from_e(self.lam)).invol();
        QuatNum::from_e(self.lam).mul(w).mul(&y)
    }

    /// Matrix of the action in the convention of the defining relation x·H·x̄ᵗ = H
    /// (coordinates w = w₁ + w₂δ, contragredient of the column matrix).
    pub fn mat(&self) -> Mat2 {
        let f1 = self.act(&QuatNum::from_e(self.lam.one_like()));
        let one = self.lam.one_like();
        let zero = one.sub(&one);
        let fd = self.act(&QuatNum::new(zero, one));
        let col = Mat2::new(f1.a, fd.a, f1.c, fd.c);
        col.transpose().inv().expect("isometry")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Filtration {
    /// x ≡ 1 mod P^r, x ∈ SL₂(𝒪_F).
    Sl2R(u32),
    /// Diagonal ≡ 1 mod P^{r−1}, off-diagonal ≡ 0 mod P^r.
    Sl2RMinus(u32),
    /// E¹SL₂^r(𝒪_F) ⋊ E¹.
    K1R(u32),
    /// w⁻¹·K1R·w.
    K2R(u32),
    /// E¹D¹_r ⋊ E¹.
    D1RSemidirect(u32),
}

fn is_sl2_integral(g: &Mat2) -> Result<bool> {
    Ok(g.is_f_matrix() && g.val_at_least(0)? && g.det().sub(&g.m[0].one_like()).is_zero())
}

fn sl2_level(g: &Mat2, diag: i32, off: i32) -> Result<bool> {
    if !is_sl2_integral(g)? {
        return Ok(false);
    }
    let one = g.m[0].one_like();
    Ok(g.m[0].sub(&one).val_at_least(diag)?
        && g.m[3].sub(&one).val_at_least(diag)?
        && g.m[1].val_at_least(off)?
        && g.m[2].val_at_least(off)?)
}

/// g ∈ E¹SL₂^r(𝒪_F): g ≡ embed(λ) mod P^r.
fn in_e1_sl2r(g: &Mat2, r: u32) -> Result<bool> {
    if !is_sl2_integral(g)? {
        return Ok(false);
    }
    let r = r as i32;
    let zc = g.m[2].mul_int(g.m[2].z());
    Ok(g.m[0].sub(&g.m[3]).val_at_least(r)? && g.m[1].sub(&zc).val_at_least(r)?)
}

/// Membership of a matrix in SL₂-type filtration subgroups.
pub fn filtration_member_mat(which: Filtration, g: &Mat2) -> Result<bool> {
    match which {
        Filtration::Sl2R(r) => sl2_level(g, r as i32, r as i32),
        Filtration::Sl2RMinus(r) => sl2_level(g, r as i32 - 1, r as i32),
        _ => Err(Error::OutsideDomain(
            "filtration needs a group element".into(),
        )),
    }
}

pub fn filtration_member_u11(which: Filtration, f: &FieldParams, x: &GrpElemU11) -> Result<bool> {
    if !x.lam.is_member(E1Subgroup::E1)? {
        return Ok(false);
    }
    match which {
        Filtration::Sl2R(_) | Filtration::Sl2RMinus(_) => {
            Ok(x.lam.sub(&x.lam.one_like()).is_zero() && filtration_member_mat(which, &x.g)?)
        }
        Filtration::K1R(r) => in_e1_sl2r(&x.g, r),
        Filtration::K2R(r) => {
            let w = Mat2::w(f);
            let y = w.mul(&x.mat()).mul(&w.inv()?);
            let pair = GrpElemU11::from_mat(&y)?;
            in_e1_sl2r(&pair.g, r)
        }
        Filtration::D1RSemidirect(_) => Err(Error::OutsideDomain(
            "D¹ filtration on a U(1,1) element".into(),
        )),
    }
}

pub fn filtration_member_u2(which: Filtration, x: &GrpElemU2) -> Result<bool> {
    match which {
        Filtration::D1RSemidirect(r) => Ok(x.h.is_member(QuatSubgroup::D1)?
            && x.lam.is_member(E1Subgroup::E1)?
            && x.h.c.val_at_least(ceil_half(r as i32 - 1))?),
        _ => Err(Error::OutsideDomain(
            "SL₂ filtration on a U(2) element".into(),
        )),
    }
}

/// Random traceless F-matrix with entries in P^r.
pub fn random_traceless_mat<R: Rng + ?Sized>(f: &FieldParams, rng: &mut R, r: i32) -> Mat2 {
    let a = f.random_padic(rng, r);
    Mat2::from_f(
        f,
        a,
        f.random_padic(rng, r),
        f.random_padic(rng, r),
        a.neg(),
    )
}

/// Random element of SL₂^r(𝒪_F); r = 0 gives SL₂(𝒪_F).
pub fn random_sl2<R: Rng + ?Sized>(f: &FieldParams, rng: &mut R, r: u32) -> Mat2 {
    if r >= 1 {
        return cayley(&random_traceless_mat(f, rng, r as i32)).expect("1 + X is invertible");
    }
    loop {
        let (a, b, c, d) = (
            f.random_padic(rng, 0),
            f.random_padic(rng, 0),
            f.random_padic(rng, 0),
            f.random_padic(rng, 0),
        );
        if a.valuation() == Some(0) {
            let d = f.one().add(&b.mul(&c)).div(&a).unwrap();
            return Mat2::from_f(f, a, b, c, d);
        }
        if c.valuation() == Some(0) {
            let b = a.mul(&d).sub(&f.one()).div(&c).unwrap();
            return Mat2::from_f(f, a, b, c, d);
        }
    }
}

pub fn random_u11<R: Rng + ?Sized>(f: &FieldParams, rng: &mut R) -> GrpElemU11 {
    GrpElemU11::new(random_sl2(f, rng, 0), f.random_e1(rng))
}

pub fn random_u2<R: Rng + ?Sized>(f: &FieldParams, rng: &mut R) -> GrpElemU2 {
    GrpElemU2::new(
        crate::quaternion::random_d1(f, rng, 1).mul(&QuatNum::from_e(f.random_e1(rng))),
        f.random_e1(rng),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fp(p: u32) -> FieldParams {
        FieldParams::new(p, 12).unwrap()
    }

    fn rng(s: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(s)
    }

    #[test]
    fn embed_basics() {
        let f = fp(3);
        assert_eq!(embed(&f.ext_int(1, 0)), Mat2::identity(&f));
        let a = embed(&f.alpha());
        assert_eq!(a.mul(&a), Mat2::identity(&f).scale(&f.int(f.z)));
        let mut r = rng(1);
        for _ in 0..100 {
            let x = f.random_ext(&mut r, -1);
            let y = f.random_ext(&mut r, 0);
            assert_eq!(embed(&x).det().a, x.norm());
            assert_eq!(embed(&x).trace().a, x.trace());
            assert_eq!(embed(&x.mul(&y)), embed(&x).mul(&embed(&y)));
        }
        assert!(embed(&f.alpha()).trace().is_zero());
    }

    #[test]
    fn group_membership_examples() {
        let f = fp(3);
        let id = Mat2::identity(&f);
        assert!(is_in_group(GroupKind::U11, &f, &id).unwrap());
        assert!(is_in_group(GroupKind::U2, &f, &id).unwrap());
        let mut r = rng(2);
        for _ in 0..50 {
            let g = random_sl2(&f, &mut r, 0);
            assert!(is_in_group(GroupKind::SU, &f, &g).unwrap());
            let lam = f.random_e1(&mut r);
            if lam.sub(&f.ext_int(1, 0)).is_zero() {
                continue;
            }
            let zero = f.ext_int(0, 0);
            let dg = Mat2::new(f.ext_int(1, 0), zero, zero, lam);
            assert!(is_in_group(GroupKind::U2, &f, &dg).unwrap());
            assert!(!is_in_group(GroupKind::U11, &f, &dg).unwrap());
        }
    }

    #[test]
    fn section_d_properties() {
        for p in [3, 5] {
            let f = fp(p);
            let one = f.ext_int(1, 0);
            assert_eq!(section_d(&one), Mat2::identity(&f));
            assert_eq!(section_d(&one.neg()).det(), one.neg());
            let mut r = rng(3);
            for _ in 0..100 {
                let l1 = f.random_e1(&mut r);
                let l2 = f.random_e1(&mut r);
                let d1 = section_d(&l1);
                assert_eq!(d1.det(), l1);
                assert!(is_in_group(GroupKind::U11, &f, &d1).unwrap());
                assert_eq!(section_d(&l1.mul(&l2)), d1.mul(&section_d(&l2)));
                let g = random_sl2(&f, &mut r, 2);
                let s = sigma(&l1, &g);
                assert!(filtration_member_mat(Filtration::Sl2R(2), &s).unwrap());
                assert_eq!(s, d1.mul(&g).mul(&d1.inv().unwrap()));
            }
        }
    }

    #[test]
    fn semidirect_u11_realization() {
        let f = fp(3);
        let mut r = rng(4);
        let e = GrpElemU11::identity(&f);
        for _ in 0..100 {
            let (x, y, z) = (
                random_u11(&f, &mut r),
                random_u11(&f, &mut r),
                random_u11(&f, &mut r),
            );
            assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
            assert_eq!(x.mul(&y).mat(), x.mat().mul(&y.mat()));
            assert_eq!(x.mul(&x.inv()), e);
            assert_eq!(e.mul(&x), x);
            assert!(is_in_group(GroupKind::U11, &f, &x.mat()).unwrap());
            let det = x.mat().det();
            assert_eq!(det.mul(&det.conj()), f.ext_int(1, 0));
            assert_eq!(GrpElemU11::from_mat(&x.mat()).unwrap(), x);
        }
    }

    #[test]
    fn three_e1_copies_commute() {
        let f = fp(5);
        let mut r = rng(5);
        for _ in 0..200 {
            let (l1, l2, l3) = (
                f.random_e1(&mut r),
                f.random_e1(&mut r),
                f.random_e1(&mut r),
            );
            let a = GrpElemU11::new(embed(&l1), f.ext_int(1, 0)).mat();
            let b = section_d(&l2);
            let c = GrpElemU11::central(&l3).mat();
            assert_eq!(a.mul(&b), b.mul(&a));
            assert_eq!(a.mul(&c), c.mul(&a));
            assert_eq!(b.mul(&c), c.mul(&b));
            let g = random_u11(&f, &mut r).mat();
            assert_eq!(g.mul(&c), c.mul(&g));
        }
    }

    #[test]
    fn semidirect_u2() {
        let f = fp(3);
        let mut r = rng(6);
        let e = GrpElemU2::identity(&f);
        for _ in 0..100 {
            let (x, y, z) = (
                random_u2(&f, &mut r),
                random_u2(&f, &mut r),
                random_u2(&f, &mut r),
            );
            assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
            assert_eq!(x.mul(&x.inv()), e);
            assert_eq!(x.mul(&y).mat(), x.mat().mul(&y.mat()));
            assert!(is_in_group(GroupKind::U2, &f, &x.mat()).unwrap());
            let w = crate::quaternion::random_quat(&f, &mut r, 0);
            assert_eq!(x.mul(&y).act(&w), x.act(&y.act(&w)));
        }
    }

    #[test]
    fn sigma_prime_preserves_d1_levels() {
        let f = fp(3);
        let mut r = rng(7);
        for _ in 0..200 {
            let lam = f.random_e1(&mut r);
            for m in 1..=4 {
                let h = crate::quaternion::random_d1(&f, &mut r, m);
                let s = sigma_prime(&lam, &h);
                let direct = QuatNum::from_e(lam)
                    .mul(&h)
                    .mul(&QuatNum::from_e(lam.conj()));
                assert_eq!(s, direct);
                assert!(s.is_member(QuatSubgroup::D1R(m)).unwrap());
            }
        }
    }

    #[test]
    fn k1_closed_and_k2_conjugate() {
        let f = fp(3);
        let mut r = rng(8);
        let w = Mat2::w(&f);
        for _ in 0..100 {
            let x = GrpElemU11::new(
                embed(&f.random_e1(&mut r)).mul(&random_sl2(&f, &mut r, 2)),
                f.random_e1(&mut r),
            );
            let y = GrpElemU11::new(
                embed(&f.random_e1(&mut r)).mul(&random_sl2(&f, &mut r, 2)),
                f.random_e1(&mut r),
            );
            assert!(filtration_member_u11(Filtration::K1R(2), &f, &x).unwrap());
            assert!(filtration_member_u11(Filtration::K1R(2), &f, &x.mul(&y)).unwrap());
            assert!(filtration_member_u11(Filtration::K1R(2), &f, &x.inv()).unwrap());
            let conj = GrpElemU11::from_mat(&w.inv().unwrap().mul(&x.mat()).mul(&w)).unwrap();
            assert!(filtration_member_u11(Filtration::K2R(2), &f, &conj).unwrap());
        }
        assert!(filtration_member_u11(Filtration::K2R(3), &f, &GrpElemU11::identity(&f)).unwrap());
    }

    #[test]
    fn sl2_minus_sandwich_examples() {
        let f = fp(3);
        let mut r = rng(9);
        for _ in 0..200 {
            let g = random_sl2(&f, &mut r, 2);
            assert!(filtration_member_mat(Filtration::Sl2RMinus(2), &g).unwrap());
            assert!(filtration_member_mat(Filtration::Sl2R(1), &g).unwrap());
        }
        let x = Mat2::from_f(&f, f.int(4), f.zero(), f.zero(), f.rational(1, 4).unwrap());
        assert!(filtration_member_mat(Filtration::Sl2RMinus(2), &x).unwrap());
        assert!(!filtration_member_mat(Filtration::Sl2R(2), &x).unwrap());
    }

    proptest! {
        #[test]
        fn cayley_of_traceless_is_special(seed in 0u64..500, lvl in 2i32..4) {
            let f = fp(5);
            let mut r = rng(seed);
            let x = random_traceless_mat(&f, &mut r, lvl);
            let g = cayley(&x).unwrap();
            prop_assert!(filtration_member_mat(Filtration::Sl2R(lvl as u32), &g).unwrap());
            prop_assert_eq!(cayley(&g).unwrap(), x);
        }
    }
}
