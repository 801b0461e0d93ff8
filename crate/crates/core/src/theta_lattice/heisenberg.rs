//! The Schrödinger model of the Heisenberg group of Ā = A*/A ≅ k_E² with form ⟨,⟩_d = ϖ⟨⟨,⟩⟩ mod P.
//!
//! Polarization: X̄ is the u⊗δ slot, Ȳ the v⊗δ slot. Functions live on X̄ ≅ k_E, so dim = q².

use crate::cyclotomic::{CycField, CycNum};
use crate::error::{Error, Result};
use crate::local_field::{CycVal, FieldParams};
use std::sync::Arc;

use super::forms::BigVec;
use super::lattice::A_DUAL_SHIFTS;

/// (ξ₁, ξ₂) ∈ k_E², each as (a, b) ↔ a + bα mod p.
pub type Abar = [u32; 4];

/// Operator f ↦ (η ↦ scal[η]·f(src[η])).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoOp {
    pub src: Vec<usize>,
    pub scal: Vec<CycVal>,
}

impl MonoOp {
    pub fn identity(dim: usize) -> Self {
        MonoOp {
            src: (0..dim).collect(),
            scal: vec![CycVal::ONE; dim],
        }
    }

    /// self ∘ o.
    pub fn compose(&self, o: &MonoOp) -> MonoOp {
        let src = self.src.iter().map(|&s| o.src[s]).collect();
        let scal = self
            .src
            .iter()
            .zip(&self.scal)
            .map(|(&s, c)| c.mul(&o.scal[s]))
            .collect();
        MonoOp { src, scal }
    }

    pub fn times(&self, c: &CycVal) -> MonoOp {
        MonoOp {
            src: self.src.clone(),
            scal: self.scal.iter().map(|s| s.mul(c)).collect(),
        }
    }

    pub fn apply(&self, field: &Arc<CycField>, v: &[CycNum]) -> Result<Vec<CycNum>> {
        self.src
            .iter()
            .zip(&self.scal)
            .map(|(&s, c)| Ok(lift(field, c)?.mul(&v[s])))
            .collect()
    }

    pub fn trace(&self, field: &Arc<CycField>) -> Result<CycNum> {
        let mut t = field.zero();
        for (i, (&s, c)) in self.src.iter().zip(&self.scal).enumerate() {
            if s == i {
                t = t.add(&lift(field, c)?);
            }
        }
        Ok(t)
    }
}

/// A root of unity as an element of `field`, or an error if its order does not divide the field's.
pub fn lift(field: &Arc<CycField>, c: &CycVal) -> Result<CycNum> {
    if !field.n().is_multiple_of(c.order()) {
        return Err(Error::OutsideDomain(format!(
            "root of order {} not in Q(ζ_{})",
            c.order(),
            field.n()
        )));
    }
    Ok(field.from_cyc(c))
}

#[derive(Clone, Debug)]
pub struct FiniteHeisenberg {
    pub p: u32,
    pub z: u32,
    pub dim: usize,
}

impl FiniteHeisenberg {
    pub fn new(f: &FieldParams) -> Self {
        let p = f.p;
        FiniteHeisenberg {
            p,
            z: f.z.rem_euclid(p as i64) as u32,
            dim: (p * p) as usize,
        }
    }

    fn m(&self, x: u64) -> u32 {
        (x % self.p as u64) as u32
    }

    /// Tr_{k_E/k_F}(x·ȳ).
    fn tr_conj(&self, x: [u32; 2], y: [u32; 2]) -> u32 {
        let p = self.p as u64;
        let s = x[0] as u64 * y[0] as u64
            + (p - self.z as u64) * self.m(x[1] as u64 * y[1] as u64) as u64;
        self.m(2 * s)
    }

    /// ⟨ā, b̄⟩_d = Tr(ξ₂η̄₁ − ξ₁η̄₂).
    pub fn form_d(&self, a: &Abar, b: &Abar) -> u32 {
        let t1 = self.tr_conj([a[2], a[3]], [b[0], b[1]]);
        let t2 = self.tr_conj([a[0], a[1]], [b[2], b[3]]);
        self.m((t1 + self.p - t2) as u64)
    }

    pub fn chi_prime(&self, t: u32) -> CycVal {
        CycVal::new(self.p as u64, t as i64)
    }

    pub fn half(&self) -> u32 {
        self.p.div_ceil(2)
    }

    pub fn add(&self, a: &Abar, b: &Abar) -> Abar {
        std::array::from_fn(|i| (a[i] + b[i]) % self.p)
    }

    pub fn all(&self) -> Vec<Abar> {
        let p = self.p;
        let n = p.pow(4);
        (0..n)
            .map(|i| [i % p, (i / p) % p, (i / p / p) % p, i / p / p / p])
            .collect()
    }

    fn index(&self, x: [u32; 2]) -> usize {
        (x[0] + self.p * x[1]) as usize
    }

    fn point(&self, i: usize) -> [u32; 2] {
        [i as u32 % self.p, i as u32 / self.p]
    }

    /// ρ(ā, t) = χ′(t − ½⟨x, y⟩_d)·ρ(x)ρ(y) for ā = x + y, x ∈ X̄, y ∈ Ȳ;
    /// ρ(x)f(η) = f(η + ξ₁) and ρ(y)f(η) = χ′(⟨η, y⟩_d)f(η).
    pub fn op(&self, a: &Abar, t: u32) -> MonoOp {
        let x: Abar = [a[0], a[1], 0, 0];
        let y: Abar = [0, 0, a[2], a[3]];
        let rx = MonoOp {
            src: (0..self.dim)
                .map(|i| {
                    let e = self.point(i);
                    self.index([(e[0] + a[0]) % self.p, (e[1] + a[1]) % self.p])
                })
                .collect(),
            scal: vec![CycVal::ONE; self.dim],
        };
        let ry = MonoOp {
            src: (0..self.dim).collect(),
            scal: (0..self.dim)
                .map(|i| {
                    let e = self.point(i);
                    self.chi_prime(self.form_d(&[e[0], e[1], 0, 0], &y))
                })
                .collect(),
        };
        let shift = self.m(t as u64
            + (self.p as u64 - self.m(self.half() as u64 * self.form_d(&x, &y) as u64) as u64));
        rx.compose(&ry).times(&self.chi_prime(shift))
    }

    /// Image in Ā of w ∈ A*.
    pub fn residue_of(&self, w: &BigVec) -> Result<Abar> {
        if !w.in_shifted(A_DUAL_SHIFTS)? {
            return Err(Error::OutsideDomain("vector is not in A*".into()));
        }
        let pi = crate::local_field::PadicNum::from_parts(self.p, 1, 1, 1);
        let r1 = w.0[1].scale(&pi).residue(1)?;
        let r2 = w.0[3].scale(&pi).residue(1)?;
        Ok([r1[0] as u32, r1[1] as u32, r2[0] as u32, r2[1] as u32])
    }
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct FiniteHeisenbergReport {
    pub p: u32,
    pub dim: usize,
    pub form_skew: bool,
    pub form_nondegenerate: bool,
    pub pairs: u64,
    pub commutation_failures: u64,
    pub law_failures: u64,
    pub central_failures: u64,
    pub irreducible: bool,
}

impl FiniteHeisenbergReport {
    pub fn holds(&self, q: u64) -> bool {
        self.dim as u64 == q * q
            && self.form_skew
            && self.form_nondegenerate
            && self.commutation_failures == 0
            && self.law_failures == 0
            && self.central_failures == 0
            && self.irreducible
    }
}

/// Exhaustive check of the Heisenberg relations on all pairs of residues.
pub fn heisenberg_model_check(f: &FieldParams, budget: u64) -> Result<FiniteHeisenbergReport> {
    let h = FiniteHeisenberg::new(f);
    let all = h.all();
    crate::group::check_budget((all.len() * all.len()) as u64, budget)?;
    let ops: Vec<MonoOp> = all.iter().map(|a| h.op(a, 0)).collect();
    let idx = |a: &Abar| (a[0] + h.p * (a[1] + h.p * (a[2] + h.p * a[3]))) as usize;
    let mut skew = true;
    let mut comm = 0;
    let mut law = 0;
    for (i, a) in all.iter().enumerate() {
        let mut degenerate = true;
        for (j, b) in all.iter().enumerate() {
            let s = h.form_d(a, b);
            skew &= (s + h.form_d(b, a)).is_multiple_of(h.p);
            degenerate &= s == 0;
            let ab = ops[i].compose(&ops[j]);
            let ba = ops[j].compose(&ops[i]);
            if ab != ba.times(&h.chi_prime(s)) {
                comm += 1;
            }
            let half = (h.half() as u64 * s as u64 % h.p as u64) as u32;
            if ab != ops[idx(&h.add(a, b))].times(&h.chi_prime(half)) {
                law += 1;
            }
        }
        if degenerate && i != 0 {
            return Ok(report(&h, skew, false, comm, law, 0, false, all.len()));
        }
    }
    let mut central = 0;
    for t in 0..h.p {
        for a in &all {
            if h.op(a, t) != h.op(a, 0).times(&h.chi_prime(t)) {
                central += 1;
            }
        }
        if h.op(&[0; 4], t) != MonoOp::identity(h.dim).times(&h.chi_prime(t)) {
            central += 1;
        }
    }
    // Σ_ā |tr ρ(ā)|² = |Ā| exactly when ρ is irreducible
    let field = CycField::new(h.p as u64);
    let mut total = 0i64;
    for op in &ops {
        let t = op.trace(&field)?;
        total += t
            .mul(&t.conj())
            .as_integer()
            .ok_or_else(|| Error::OutsideDomain("|tr|² is not rational".into()))?;
    }
    let irreducible = total == all.len() as i64;
    Ok(report(
        &h,
        skew,
        true,
        comm,
        law,
        central,
        irreducible,
        all.len(),
    ))
}

#[allow(clippy::too_many_arguments)]
fn report(
    h: &FiniteHeisenberg,
    skew: bool,
    nondeg: bool,
    comm: u64,
    law: u64,
    central: u64,
    irr: bool,
    n: usize,
) -> FiniteHeisenbergReport {
    FiniteHeisenbergReport {
        p: h.p,
        dim: h.dim,
        form_skew: skew,
        form_nondegenerate: nondeg,
        pairs: (n * n) as u64,
        commutation_failures: comm,
        law_failures: law,
        central_failures: central,
        irreducible: irr,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model_p3() {
        let f = FieldParams::new(3, 6).unwrap();
        let rep = heisenberg_model_check(&f, 1_000_000).unwrap();
        assert_eq!(rep.dim, 9);
        assert_eq!(rep.pairs, 81 * 81);
        assert!(rep.holds(3), "{rep:?}");
    }

    #[test]
    fn model_p5() {
        let f = FieldParams::new(5, 6).unwrap();
        let rep = heisenberg_model_check(&f, 1_000_000).unwrap();
        assert!(rep.holds(5), "{rep:?}");
    }

    #[test]
    fn budget() {
        let f = FieldParams::new(3, 6).unwrap();
        assert!(heisenberg_model_check(&f, 100).is_err());
    }

    #[test]
    fn residues_of_a_dual() {
        let f = FieldParams::new(3, 6).unwrap();
        let h = FiniteHeisenberg::new(&f);
        let pinv = f.pi_pow(-1);
        let w = BigVec([
            f.ext_int(4, 1),
            f.ext_int(2, 1).scale(&pinv),
            f.ext_int(0, 0),
            f.ext_int(1, 5).scale(&pinv),
        ]);
        assert_eq!(h.residue_of(&w).unwrap(), [2, 1, 1, 2]);
        let bad = BigVec([
            f.ext_int(1, 0).scale(&pinv),
            f.ext_int(0, 0),
            f.ext_int(0, 0),
            f.ext_int(0, 0),
        ]);
        assert!(h.residue_of(&bad).is_err());
    }
}
