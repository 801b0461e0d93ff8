//! The characters ψ_{b₁}, ψ_{b₂} read off from the lattice model, and their matching.

use crate::beta_characters::{psi_b_mat, psi_b_quat, Side};
use crate::error::Result;
use crate::local_field::{chi, ExtNum, FieldParams, PadicNum};
use crate::quaternion::{cayley_series, random_d1, QuatNum, UnitalRing};
use crate::unitary_groups::{random_sl2, Mat2};
use rand::Rng;
use serde::Serialize;

use super::forms::{form_ww, BigVec, VVec};
use super::lattice::A_DUAL_SHIFTS;
use super::lattice_model::{same_vec, LatticeModel, WOp};

/// b₁ = −(ϖ^{−k+2}/2)·N(w)·ϖ^{−k−1}·(−s, 2aā; −2bb̄, s) with s = āb + ab̄.
pub fn extract_b1(f: &FieldParams, a: &ExtNum, b: &ExtNum, w: &QuatNum, k: i32) -> Mat2 {
    let pre = f
        .pi_pow(2 - k)
        .mul(&f.half())
        .mul(&w.norm())
        .neg()
        .mul(&f.pi_pow(-k - 1));
    let s = a.conj().mul(b).add(&a.mul(&b.conj())).a;
    let e = |x: PadicNum| f.ext(x.mul(&pre), f.zero());
    Mat2::new(
        e(s.neg()),
        e(a.norm().mul_int(2)),
        e(b.norm().mul_int(-2)),
        e(s),
    )
}

/// b₂ = −(ϖ/2)(ab̄ − āb)·N(w′).
pub fn extract_b2(f: &FieldParams, a: &ExtNum, b: &ExtNum, wp: &QuatNum) -> QuatNum {
    let t = a.mul(&b.conj()).sub(&a.conj().mul(b));
    let c = f.pi_pow(1).mul(&f.half()).neg().mul(&wp.norm());
    QuatNum::from_e(t.scale(&c))
}

/// −(ϖ^{−4k+2}/4)·N(w)²·(ab̄ − āb)².
pub fn closed_form(f: &FieldParams, a: &ExtNum, b: &ExtNum, w: &QuatNum, k: i32) -> ExtNum {
    let t = a.mul(&b.conj()).sub(&a.conj().mul(b));
    let n = w.norm();
    let quarter = f.half().mul(&f.half());
    t.mul(&t)
        .scale(&f.pi_pow(2 - 4 * k).mul(&quarter).mul(&n).mul(&n).neg())
}

#[derive(Clone, Debug, Serialize)]
pub struct MatchOutcome {
    pub det_b1: String,
    pub norm_b2: String,
    pub det_equals_norm: bool,
    pub charpolys_equal: bool,
    pub closed_form_holds: bool,
    pub b1_traceless: bool,
    pub b2_traceless: bool,
}

impl MatchOutcome {
    pub fn holds(&self) -> bool {
        self.det_equals_norm
            && self.charpolys_equal
            && self.closed_form_holds
            && self.b1_traceless
            && self.b2_traceless
    }
}

/// b₁ from w ∈ (Γ′)*, b₂ from w′ = ϖ^{−k}w.
pub fn match_check(f: &FieldParams, a: &ExtNum, b: &ExtNum, w: &QuatNum, k: i32) -> MatchOutcome {
    let b1 = extract_b1(f, a, b, w, k);
    let b2 = extract_b2(f, a, b, &w.scale(&f.pi_pow(-k)));
    let det = b1.det();
    let nrd = f.ext(b2.norm(), f.zero());
    let tr = b1.trace();
    let trd = f.ext(b2.trace(), f.zero());
    let closed = closed_form(f, a, b, w, k);
    MatchOutcome {
        det_b1: format!("{:?}", det.a),
        norm_b2: format!("{:?}", nrd.a),
        det_equals_norm: det.sub(&nrd).is_zero(),
        charpolys_equal: det.sub(&nrd).is_zero() && tr.sub(&trd).is_zero(),
        closed_form_holds: det.sub(&closed).is_zero() && nrd.sub(&closed).is_zero(),
        b1_traceless: tr.is_zero(),
        b2_traceless: b2.trace().is_zero(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MatchReport {
    pub p: u32,
    pub trials: usize,
    pub failures: usize,
    pub det_norm_failures: usize,
    pub closed_form_failures: usize,
}

/// Random (a, b, w, k) with a, b ∈ 𝒪_E, w ∈ (Γ′)*, k ∈ ks.
pub fn match_random<R: Rng + ?Sized>(
    f: &FieldParams,
    ks: &[i32],
    trials: usize,
    rng: &mut R,
) -> MatchReport {
    let mut rep = MatchReport {
        p: f.p,
        trials,
        failures: 0,
        det_norm_failures: 0,
        closed_form_failures: 0,
    };
    for _ in 0..trials {
        let k = ks[rng.gen_range(0..ks.len())];
        let (a, b) = (f.random_ext(rng, 0), f.random_ext(rng, 0));
        let w = QuatNum::new(f.random_ext(rng, 0), f.random_ext(rng, -1));
        let out = match_check(f, &a, &b, &w, k);
        rep.failures += usize::from(!out.holds());
        rep.det_norm_failures += usize::from(!out.det_equals_norm);
        rep.closed_form_failures += usize::from(!out.closed_form_holds);
    }
    rep
}

fn random_e1_level<R: Rng + ?Sized>(f: &FieldParams, rng: &mut R, j: i32) -> ExtNum {
    let mu = f.ext_int(1, 0).add(&f.random_ext(rng, j));
    mu.mul(&mu.conj().inv().expect("unit"))
}

/// U₁^j as E¹_j·SL₂^j, acting by v ↦ g·v.
pub fn random_u1_level<R: Rng + ?Sized>(f: &FieldParams, rng: &mut R, j: u32) -> Mat2 {
    random_sl2(f, rng, j).scale_e(&random_e1_level(f, rng, j as i32))
}

#[derive(Clone, Debug, Serialize)]
pub struct FixedVectorReport {
    pub p: u32,
    pub k: i32,
    pub side: Side,
    pub trials: usize,
    pub outside_h_m: usize,
    pub not_fixed: usize,
}

impl FixedVectorReport {
    pub fn holds(&self) -> bool {
        self.outside_h_m == 0 && self.not_fixed == 0
    }
}

/// h ∈ U₁^{2k+1} (resp. U₂^{4k+2}) against random y_{w,x} with w ∈ (M^k)*.
pub fn fixed_vectors<R: Rng + ?Sized>(
    f: &FieldParams,
    side: Side,
    k: i32,
    trials: usize,
    rng: &mut R,
) -> Result<FixedVectorReport> {
    let m = LatticeModel::new(f);
    let mut rep = FixedVectorReport {
        p: f.p,
        k,
        side,
        trials,
        outside_h_m: 0,
        not_fixed: 0,
    };
    for _ in 0..trials {
        let op = match side {
            Side::Sl2 => WOp::from_g(&random_u1_level(f, rng, (2 * k + 1) as u32)),
            Side::Quat => WOp::from_gprime(&random_d1(f, rng, (4 * k + 2) as u32)),
        };
        let w = BigVec(A_DUAL_SHIFTS.map(|s| f.random_ext(rng, s - k)));
        let y = m.y(w, m.basis_vector(rng.gen_range(0..m.dim())));
        if !m.in_h_m(&op, k)? {
            rep.outside_h_m += 1;
            continue;
        }
        if m.weil_hm_action(&op, k, &y)? != y {
            rep.not_fixed += 1;
        }
    }
    Ok(rep)
}

#[derive(Clone, Debug, Serialize)]
pub struct ScalarCharacterReport {
    pub p: u32,
    pub k: i32,
    pub side: Side,
    pub trials: usize,
    pub outside_h_m: usize,
    pub rho_nontrivial: usize,
    pub mismatches: usize,
    pub series_mismatches: usize,
    pub character_failures: usize,
}

impl ScalarCharacterReport {
    pub fn holds(&self) -> bool {
        self.outside_h_m == 0
            && self.rho_nontrivial == 0
            && self.mismatches == 0
            && self.series_mismatches == 0
            && self.character_failures == 0
    }
}

#[derive(Clone, Copy)]
enum Elem {
    G(Mat2),
    Gp(QuatNum),
}

impl Elem {
    fn random<R: Rng + ?Sized>(f: &FieldParams, side: Side, k: i32, rng: &mut R) -> Elem {
        match side {
            Side::Sl2 => Elem::G(random_sl2(f, rng, (k + 1) as u32)),
            Side::Quat => Elem::Gp(random_d1(f, rng, (2 * k + 2) as u32)),
        }
    }

    fn mul(&self, o: &Elem) -> Elem {
        match (self, o) {
            (Elem::G(a), Elem::G(b)) => Elem::G(a.mul(b)),
            (Elem::Gp(a), Elem::Gp(b)) => Elem::Gp(a.mul(b)),
            _ => unreachable!("elements of different groups"),
        }
    }

    fn op(&self) -> WOp {
        match self {
            Elem::G(g) => WOp::from_g(g),
            Elem::Gp(h) => WOp::from_gprime(h),
        }
    }

    /// First term −x/2 of c(1 + x) = Σ_{i≥1} (−1)^i (x/2)^i.
    fn head(&self, f: &FieldParams) -> WOp {
        match self.op() {
            WOp::Left(g) => WOp::Left(cayley_series(&g.sub(&g.one_like()), &f.half(), 1)),
            WOp::Right(m) => WOp::Right(cayley_series(&m.sub(&m.one_like()), &f.half(), 1)),
        }
    }
}

/// Lattice-model scalar against ψ_{b₁}(h) for h ∈ SL₂^{k+1}(𝒪_F), v⊗w ∈ (P^{−k}Γ)⊗(Γ′)*,
/// or ψ_{b₂}(h) for h ∈ D¹_{2k+2}, v⊗w′ ∈ Γ⊗P^{−k}(Γ′)*.
pub fn scalar_character<R: Rng + ?Sized>(
    f: &FieldParams,
    side: Side,
    k: i32,
    trials: usize,
    rng: &mut R,
) -> Result<ScalarCharacterReport> {
    let m = LatticeModel::new(f);
    let mut rep = ScalarCharacterReport {
        p: f.p,
        k,
        side,
        trials,
        outside_h_m: 0,
        rho_nontrivial: 0,
        mismatches: 0,
        series_mismatches: 0,
        character_failures: 0,
    };
    for _ in 0..trials {
        let (a, b) = (f.random_ext(rng, 0), f.random_ext(rng, 0));
        let w = QuatNum::new(f.random_ext(rng, 0), f.random_ext(rng, -1));
        let h = Elem::random(f, side, k, rng);
        let h2 = Elem::random(f, side, k, rng);
        let (x, expected) = match h {
            Elem::G(g) => {
                let pk = f.pi_pow(-k);
                let v: VVec = [a.scale(&pk), b.scale(&pk)];
                (
                    BigVec::pure(&v, &w),
                    psi_b_mat(&extract_b1(f, &a, &b, &w, k), &g)?,
                )
            }
            Elem::Gp(q) => {
                let wp = w.scale(&f.pi_pow(-k));
                (
                    BigVec::pure(&[a, b], &wp),
                    psi_b_quat(&extract_b2(f, &a, &b, &wp), &q)?,
                )
            }
        };
        let op = h.op();
        if !m.in_h_m(&op, k)? {
            rep.outside_h_m += 1;
            continue;
        }
        let y = m.y(x, m.basis_vector(rng.gen_range(0..m.dim())));
        let out = m.weil_hm_action(&op, k, &y)?;
        let want: Vec<_> = y.value.iter().map(|v| v.mul_root(&expected)).collect();
        if !same_vec(&out.value, &want) {
            rep.mismatches += 1;
        }
        let Some(scalar) = m.hm_scalar(&op, &x)? else {
            rep.rho_nontrivial += 1;
            continue;
        };
        let head_cw = h.head(f).apply(&x);
        if chi(&form_ww(&x, &head_cw))? != scalar {
            rep.series_mismatches += 1;
        }
        match (
            m.hm_scalar(&h.mul(&h2).op(), &x)?,
            m.hm_scalar(&h2.op(), &x)?,
        ) {
            (Some(s12), Some(s2)) if s12 == scalar.mul(&s2) => {}
            _ => rep.character_failures += 1,
        }
    }
    Ok(rep)
}
