//! Characters ψ_β of filtration subgroups, their E¹-extensions, duality and stabilizers.

use crate::error::{Error, Result};
use crate::group::{check_budget, FiniteGroup};
use crate::local_field::{psi, CycVal, ExtNum, FieldParams};
use crate::quaternion::{QuatNum, QuatSubgroup, UnitalRing};
use crate::residue::{
    d1_elements, d1_quotient_order, e1_elements, embed_res, sl2_level, sl2_level_minus, sl2_order,
    D1Law, E1Law, E1Part, GroupLaw, ResRing, Sl2Law, Sl2PairLaw,
};
use crate::unitary_groups::{embed, filtration_member_mat, Filtration, Mat2};
use rand::Rng;
use rustc_hash::{FxHashMap, FxHashSet};
use serde::Serialize;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Sl2,
    Quat,
}

#[derive(Clone, Debug)]
pub enum BetaElem {
    Sl2(ExtNum),
    Quat(QuatNum),
}

/// β ∈ E⁰ (acting through embed) or β ∈ D⁰, with v(β) = −n and r = ⌊(n+2)/2⌋.
#[derive(Clone, Debug)]
pub struct BetaDatum {
    pub f: FieldParams,
    pub beta: BetaElem,
    pub n: u32,
    pub r: u32,
}

/// ψ_b(x) = ψ(Tr(b(x − 1))) for 2×2 matrices.
pub fn psi_b_mat(b: &Mat2, x: &Mat2) -> Result<CycVal> {
    let t = b.mul(&x.sub(&x.one_like())).trace();
    if !t.b.is_zero() {
        return Err(Error::OutsideDomain("Tr(b(x−1)) is not in F".into()));
    }
    psi(&t.a)
}

/// ψ_b(h) = ψ(Tr_{D/F}(b(h − 1))).
pub fn psi_b_quat(b: &QuatNum, h: &QuatNum) -> Result<CycVal> {
    let one = QuatNum::new(h.a.one_like(), h.c.mul_int(0));
    psi(&b.mul(&h.sub(&one)).trace())
}

impl BetaDatum {
    pub fn sl2(f: FieldParams, beta: ExtNum) -> Result<Self> {
        if !beta.trace().is_zero() {
            return Err(Error::OutsideDomain("β must be traceless".into()));
        }
        let n = match beta.valuation()? {
            Some(v) if v < 0 => (-v) as u32,
            _ => {
                return Err(Error::OutsideDomain(
                    "β must have negative valuation".into(),
                ))
            }
        };
        Ok(BetaDatum {
            f,
            beta: BetaElem::Sl2(beta),
            n,
            r: (n + 2) / 2,
        })
    }

    pub fn quat(f: FieldParams, beta: QuatNum) -> Result<Self> {
        if !beta.trace().is_zero() {
            return Err(Error::OutsideDomain("β must be traceless".into()));
        }
        let n = match beta.valuation()? {
            Some(v) if v < 0 => (-v) as u32,
            _ => {
                return Err(Error::OutsideDomain(
                    "β must have negative valuation".into(),
                ))
            }
        };
        Ok(BetaDatum {
            f,
            beta: BetaElem::Quat(beta),
            n,
            r: (n + 2) / 2,
        })
    }

    /// ϖ^{-n}α on the SL₂ side; ϖ^{-n/2}α (n even) or ϖ^{-(n+1)/2}δ (n odd) on the quaternion side.
    pub fn standard(f: FieldParams, side: Side, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParams("n must be positive".into()));
        }
        match side {
            Side::Sl2 => Self::sl2(f, f.alpha().scale(&f.pi_pow(-(n as i32)))),
            Side::Quat => {
                let b = if n.is_multiple_of(2) {
                    QuatNum::from_e(f.alpha().scale(&f.pi_pow(-(n as i32) / 2)))
                } else {
                    QuatNum::delta(&f).scale(&f.pi_pow(-(n as i32 + 1) / 2))
                };
                Self::quat(f, b)
            }
        }
    }

    pub fn side(&self) -> Side {
        match self.beta {
            BetaElem::Sl2(_) => Side::Sl2,
            BetaElem::Quat(_) => Side::Quat,
        }
    }

    pub fn beta_matrix(&self) -> Option<Mat2> {
        match &self.beta {
            BetaElem::Sl2(b) => Some(embed(b)),
            BetaElem::Quat(_) => None,
        }
    }

    /// ψ_β on SL₂^r(𝒪_F).
    pub fn psi_beta_mat(&self, x: &Mat2) -> Result<CycVal> {
        let b = self
            .beta_matrix()
            .ok_or_else(|| Error::OutsideDomain("quaternion datum".into()))?;
        if !filtration_member_mat(Filtration::Sl2R(self.r), x)? {
            return Err(Error::OutsideDomain(format!("x ∉ SL₂^{}", self.r)));
        }
        psi_b_mat(&b, x)
    }

    /// ψ_β on D¹_r.
    pub fn psi_beta_quat(&self, h: &QuatNum) -> Result<CycVal> {
        let BetaElem::Quat(b) = &self.beta else {
            return Err(Error::OutsideDomain("SL₂ datum".into()));
        };
        if !h.is_member(QuatSubgroup::D1R(self.r))? {
            return Err(Error::OutsideDomain(format!("h ∉ D¹_{}", self.r)));
        }
        psi_b_quat(b, h)
    }

    /// ψ(Tr(β(x̃ − 1))) for a residue matrix x mod p^k (k ≥ n + 1), no domain check.
    pub fn psi_beta_res_sl2(&self, x: &[u32; 4]) -> Result<CycVal> {
        let b = self
            .beta_matrix()
            .ok_or_else(|| Error::OutsideDomain("quaternion datum".into()))?;
        let f = &self.f;
        let xm = Mat2::from_ints(f, x[0] as i64, x[1] as i64, x[2] as i64, x[3] as i64);
        psi_b_mat(&b, &xm)
    }

    /// The same on the quaternion side for h = [a0, a1, c0, c1] mod P_D^k, k ≥ n + 1.
    pub fn psi_beta_res_quat(&self, h: &[u32; 4]) -> Result<CycVal> {
        let BetaElem::Quat(b) = &self.beta else {
            return Err(Error::OutsideDomain("SL₂ datum".into()));
        };
        let f = &self.f;
        let hq = QuatNum::new(
            f.ext_int(h[0] as i64, h[1] as i64),
            f.ext_int(h[2] as i64, h[3] as i64),
        );
        psi_b_quat(b, &hq)
    }

    /// Conjugate of the datum by λ ∈ E^×: the character h ↦ ψ_β(λhλ⁻¹) is ψ_{λ⁻¹βλ}.
    pub fn sigma_prime_twist(&self, lam: &ExtNum) -> Result<QuatNum> {
        let BetaElem::Quat(b) = &self.beta else {
            return Err(Error::OutsideDomain("SL₂ datum".into()));
        };
        let l = QuatNum::from_e(*lam);
        Ok(l.inv()?.mul(b).mul(&l))
    }
}

fn ring_for(f: &FieldParams, k: u32) -> Result<ResRing> {
    ResRing::new(f.p, k)
}

fn z_res(f: &FieldParams, r: &ResRing) -> u32 {
    r.red(f.z)
}

/// Values of a residue character on a list of elements.
fn table<E: Copy + Eq + std::hash::Hash>(
    els: &[E],
    val: impl Fn(&E) -> Result<CycVal>,
) -> Result<FxHashMap<E, CycVal>> {
    els.iter().map(|x| Ok((*x, val(x)?))).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ConductorReport {
    pub side: Side,
    pub n: u32,
    pub r: u32,
    pub domain_order: usize,
    pub homomorphism_failures: usize,
    pub trivial_on_level_n1: bool,
    pub nontrivial_on_level_n: bool,
}

impl ConductorReport {
    pub fn holds(&self) -> bool {
        self.homomorphism_failures == 0 && self.trivial_on_level_n1 && self.nontrivial_on_level_n
    }
}

/// Exhaustive check of ψ_β on the level-r domain modulo level n + 2: homomorphism,
/// trivial on level n + 1, nontrivial somewhere on level n.
pub fn conductor_check(d: &BetaDatum, budget: u64) -> Result<ConductorReport> {
    let (n, r) = (d.n, d.r);
    let k = n + 2;
    match d.side() {
        Side::Sl2 => {
            let ring = ring_for(&d.f, k)?;
            check_budget(d.f.q().pow(3 * (k - r)).pow(2), budget)?;
            let law = Sl2Law { ring };
            let dom = sl2_level(&ring, r);
            let t = table(&dom, |x| d.psi_beta_res_sl2(x))?;
            let mut bad = 0;
            for x in &dom {
                for y in &dom {
                    if t[&law.mul(x, y)] != t[x].mul(&t[y]) {
                        bad += 1;
                    }
                }
            }
            let lev = |m: u32| dom.iter().filter(move |x| sl2_residue_level(&ring, x) >= m);
            Ok(ConductorReport {
                side: Side::Sl2,
                n,
                r,
                domain_order: dom.len(),
                homomorphism_failures: bad,
                trivial_on_level_n1: lev(n + 1).all(|x| t[x].is_one()),
                nontrivial_on_level_n: lev(n).any(|x| !t[x].is_one()),
            })
        }
        Side::Quat => {
            let law = d1_law(&d.f, k)?;
            let dom = d1_elements(&law, r);
            check_budget((dom.len() as u64).pow(2), budget)?;
            let t = table(&dom, |x| d.psi_beta_res_quat(x))?;
            let mut bad = 0;
            for x in &dom {
                for y in &dom {
                    if t[&law.mul(x, y)] != t[x].mul(&t[y]) {
                        bad += 1;
                    }
                }
            }
            let lr = &law;
            let lev = |m: u32| dom.iter().filter(move |x| lr.level(x) >= m);
            Ok(ConductorReport {
                side: Side::Quat,
                n,
                r,
                domain_order: dom.len(),
                homomorphism_failures: bad,
                trivial_on_level_n1: lev(n + 1).all(|x| t[x].is_one()),
                nontrivial_on_level_n: lev(n).any(|x| !t[x].is_one()),
            })
        }
    }
}

/// Level of x − 1 for a residue matrix, capped at k.
pub fn sl2_residue_level(r: &ResRing, x: &[u32; 4]) -> u32 {
    [r.sub(x[0], 1), x[1], x[2], r.sub(x[3], 1)]
        .iter()
        .map(|&v| r.val(v))
        .min()
        .unwrap()
}

#[derive(Clone, Debug, Serialize)]
pub struct DualityReport {
    pub n: u32,
    pub r: u32,
    pub lie_side: u64,
    pub group_side: u64,
    pub distinct_characters: u64,
    pub zero_gives_trivial: bool,
}

impl DualityReport {
    pub fn holds(&self) -> bool {
        self.lie_side == self.group_side
            && self.distinct_characters == self.lie_side
            && self.zero_gives_trivial
    }
}

/// b ↦ ψ_b from traceless ϖ^{-n}M₂(𝒪_F) mod ϖ^{1−r} to characters of SL₂^r/SL₂^{n+1}.
pub fn duality_check(f: &FieldParams, n: u32, r: u32, budget: u64) -> Result<DualityReport> {
    if r == 0 || r > n + 1 {
        return Err(Error::InvalidParams(format!(
            "need 1 ≤ r ≤ n + 1, got r = {r}, n = {n}"
        )));
    }
    let span = n + 1 - r;
    let lie = f.q().pow(3 * span);
    check_budget(lie.saturating_mul(16), budget)?;
    let ring = ring_for(f, n + 1)?;
    let law = Arc::new(Sl2Law { ring });
    let g = FiniteGroup::from_elements(law, sl2_level(&ring, r));
    let gens = g.generators();
    let gm: Vec<Mat2> = gens
        .iter()
        .map(|x| Mat2::from_ints(f, x[0] as i64, x[1] as i64, x[2] as i64, x[3] as i64))
        .collect();
    let m = f.q().pow(span) as i64;
    let s = f.pi_pow(-(n as i32));
    let mut seen = FxHashSet::default();
    let mut zero_trivial = false;
    for x in 0..m {
        for y in 0..m {
            for w in 0..m {
                let b = Mat2::from_ints(f, x, y, w, -x).scale(&s);
                let vals: Vec<CycVal> =
                    gm.iter().map(|h| psi_b_mat(&b, h)).collect::<Result<_>>()?;
                if x == 0 && y == 0 && w == 0 {
                    zero_trivial = vals.iter().all(|v| v.is_one());
                }
                seen.insert(vals);
            }
        }
    }
    Ok(DualityReport {
        n,
        r,
        lie_side: lie,
        group_side: g.order() as u64,
        distinct_characters: seen.len() as u64,
        zero_gives_trivial: zero_trivial,
    })
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct InvarianceReport {
    pub checked: u64,
    pub failures: Vec<String>,
}

/// ψ_β(σ_λ(x)) = ψ_β(x) over all x ∈ domain mod level n + 1 and all λ ∈ E¹ mod the same level.
pub fn invariance_exhaustive(d: &BetaDatum, budget: u64) -> Result<InvarianceReport> {
    let k = d.n + 1;
    let mut rep = InvarianceReport::default();
    match d.side() {
        Side::Sl2 => {
            let ring = ring_for(&d.f, k)?;
            let z = z_res(&d.f, &ring);
            let law = Sl2PairLaw::new(ring, z);
            let dom = sl2_level(&ring, d.r);
            let lams = e1_elements(&ring, z, E1Part::All);
            check_budget((dom.len() * lams.len()) as u64, budget)?;
            let t = table(&dom, |x| d.psi_beta_res_sl2(x))?;
            for l in &lams {
                for x in &dom {
                    rep.checked += 1;
                    let y = law.sigma(*l, x);
                    if t.get(&y) != Some(&t[x]) {
                        rep.failures.push(format!("λ = {l:?}, x = {x:?}"));
                    }
                }
            }
        }
        Side::Quat => {
            let law = d1_law(&d.f, k)?;
            let dom = d1_elements(&law, d.r);
            let lams = e1_elements(&law.ra, law.z, E1Part::All);
            check_budget((dom.len() * lams.len()) as u64, budget)?;
            let t = table(&dom, |x| d.psi_beta_res_quat(x))?;
            for l in &lams {
                for x in &dom {
                    rep.checked += 1;
                    let y = law.sigma_prime(*l, x);
                    if t.get(&y) != Some(&t[x]) {
                        rep.failures.push(format!("λ = {l:?}, h = {x:?}"));
                    }
                }
            }
        }
    }
    Ok(rep)
}

/// Random p-adic trials of the same identity.
pub fn invariance_random<R: Rng + ?Sized>(
    d: &BetaDatum,
    trials: u64,
    rng: &mut R,
) -> Result<InvarianceReport> {
    use crate::quaternion::random_d1;
    use crate::unitary_groups::{random_sl2, sigma, sigma_prime};
    let mut rep = InvarianceReport::default();
    for _ in 0..trials {
        let lam = d.f.random_e1(rng);
        rep.checked += 1;
        let (a, b) = match d.side() {
            Side::Sl2 => {
                let x = random_sl2(&d.f, rng, d.r);
                (d.psi_beta_mat(&x)?, d.psi_beta_mat(&sigma(&lam, &x))?)
            }
            Side::Quat => {
                let h = random_d1(&d.f, rng, d.r);
                (
                    d.psi_beta_quat(&h)?,
                    d.psi_beta_quat(&sigma_prime(&lam, &h))?,
                )
            }
        };
        if a != b {
            rep.failures
                .push(format!("λ = {}, {a} ≠ {b}", lam_str(&lam)));
        }
    }
    Ok(rep)
}

fn lam_str(l: &ExtNum) -> String {
    format!("{} + {}α", l.a, l.b)
}

pub(crate) fn d1_law(f: &FieldParams, k: u32) -> Result<D1Law> {
    let law = D1Law::new(f.p, 0, k)?;
    Ok(D1Law {
        z: law.ra.red(f.z),
        ..law
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilizerReport {
    pub side: Side,
    pub n: u32,
    pub r: u32,
    pub group_order: usize,
    pub stabilizer_order: usize,
    pub orbit_size: usize,
    /// Largest m with stabilizer = E¹·(level m), if any.
    pub level: Option<u32>,
}

impl StabilizerReport {
    pub fn orbit_stabilizer_holds(&self) -> bool {
        self.orbit_size * self.stabilizer_order == self.group_order
    }
}

/// Stabilizer of ψ_β under conjugation in SL₂(𝒪_F) (resp. D¹), computed modulo level n + 1.
pub fn stabilizer(d: &BetaDatum, budget: u64) -> Result<StabilizerReport> {
    let k = d.n + 1;
    let q = d.f.q();
    match d.side() {
        Side::Sl2 => {
            check_budget(sl2_order(q, k), budget)?;
            let ring = ring_for(&d.f, k)?;
            let z = z_res(&d.f, &ring);
            let law = Arc::new(Sl2Law { ring });
            let dom = FiniteGroup::from_elements(law.clone(), sl2_level(&ring, d.r));
            let gens = dom.generators();
            let t = table(dom.elems(), |x| d.psi_beta_res_sl2(x))?;
            let all = sl2_level(&ring, 0);
            let e1: Vec<[u32; 4]> = e1_elements(&ring, z, E1Part::All)
                .into_iter()
                .map(|l| embed_res(&ring, z, l))
                .collect();
            let candidates = (0..=k).map(|m| sl2_level(&ring, m)).collect::<Vec<_>>();
            stabilizer_common(d, &*law, &all, &gens, &t, &e1, &candidates)
        }
        Side::Quat => {
            check_budget(d1_quotient_order(q, k), budget)?;
            let law = Arc::new(d1_law(&d.f, k)?);
            let dom = FiniteGroup::from_elements(law.clone(), d1_elements(&law, d.r));
            let gens = dom.generators();
            let t = table(dom.elems(), |x| d.psi_beta_res_quat(x))?;
            let all = d1_elements(&law, 0);
            let e1: Vec<[u32; 4]> = e1_elements(&law.ra, law.z, E1Part::All)
                .into_iter()
                .map(|l| [l[0], l[1], 0, 0])
                .collect();
            let candidates = (0..=k).map(|m| d1_elements(&law, m)).collect::<Vec<_>>();
            stabilizer_common(d, &*law, &all, &gens, &t, &e1, &candidates)
        }
    }
}

fn stabilizer_common<L: GroupLaw<Elem = [u32; 4]>>(
    d: &BetaDatum,
    law: &L,
    all: &[[u32; 4]],
    dom_gens: &[[u32; 4]],
    t: &FxHashMap<[u32; 4], CycVal>,
    e1: &[[u32; 4]],
    candidates: &[Vec<[u32; 4]>],
) -> Result<StabilizerReport> {
    let mut stab = Vec::new();
    let mut orbit = FxHashSet::default();
    for g in all {
        // ψ_β^g(s) = ψ_β(g s g⁻¹), recorded on the domain generators
        let vals: Vec<CycVal> = dom_gens.iter().map(|s| t[&law.conj_by(g, s)]).collect();
        if vals.iter().zip(dom_gens).all(|(v, s)| *v == t[s]) {
            stab.push(*g);
        }
        orbit.insert(vals);
    }
    stab.sort_unstable();
    let mut level = None;
    for (m, lev) in candidates.iter().enumerate() {
        let mut prod: Vec<[u32; 4]> = e1
            .iter()
            .flat_map(|l| lev.iter().map(move |s| law.mul(l, s)))
            .collect();
        prod.sort_unstable();
        prod.dedup();
        if prod == stab {
            level = Some(m as u32);
        }
    }
    Ok(StabilizerReport {
        side: d.side(),
        n: d.n,
        r: d.r,
        group_order: all.len(),
        stabilizer_order: stab.len(),
        orbit_size: orbit.len(),
        level,
    })
}

/// Whether conjugation by embed(E¹) preserves SL₂^{r_} modulo level n + 1.
pub fn e1_normalizes_sl2_r_minus(f: &FieldParams, n: u32, r: u32) -> Result<bool> {
    let ring = ring_for(f, n + 1)?;
    let z = z_res(f, &ring);
    let law = Sl2Law { ring };
    let sub: FxHashSet<[u32; 4]> = sl2_level_minus(&ring, r).into_iter().collect();
    let e1 = e1_elements(&ring, z, E1Part::All);
    Ok(e1.iter().all(|l| {
        let g = embed_res(&ring, z, *l);
        sub.iter().all(|s| sub.contains(&law.conj_by(&g, s)))
    }))
}

/// A character of the cyclic group E¹ mod p^k: t^i ↦ ζ_ord^{e·i} for a fixed generator t.
#[derive(Clone, Debug)]
pub struct E1Char {
    pub ring: ResRing,
    pub z: u32,
    pub order: u64,
    pub exp: u64,
    log: Arc<FxHashMap<[u32; 2], u64>>,
}

impl E1Char {
    /// Table of E¹ mod p^k with the least generator; character exponent e.
    pub fn new(f: &FieldParams, k: u32, exp: u64) -> Result<Self> {
        let ring = ring_for(f, k)?;
        let z = z_res(f, &ring);
        let law = E1Law { ring, z };
        let els = e1_elements(&ring, z, E1Part::All);
        let order = els.len() as u64;
        let gen = *els
            .iter()
            .find(|x| crate::group::element_order(&law, x) == order)
            .ok_or_else(|| Error::NotInvertible("E¹ quotient is not cyclic".into()))?;
        let mut log = FxHashMap::default();
        let mut y = law.identity();
        for i in 0..order {
            log.insert(y, i);
            y = law.mul(&y, &gen);
        }
        Ok(E1Char {
            ring,
            z,
            order,
            exp: exp % order,
            log: Arc::new(log),
        })
    }

    pub fn with_exp(&self, exp: u64) -> Self {
        E1Char {
            exp: exp % self.order,
            ..self.clone()
        }
    }

    /// Value at λ (any residue at the table level or finer).
    pub fn eval(&self, lam: &[u32; 2]) -> Result<CycVal> {
        let key = [lam[0] % self.ring.m, lam[1] % self.ring.m];
        let i = self
            .log
            .get(&key)
            .ok_or_else(|| Error::OutsideDomain(format!("{lam:?} ∉ E¹")))?;
        Ok(CycVal::new(self.order, (self.exp * i) as i64))
    }
}

/// (β, φ, η): the extension φ_(β,η) on (E¹·level r) ⋊ E¹.
#[derive(Clone, Debug)]
pub struct CharSpec {
    pub datum: BetaDatum,
    pub phi: E1Char,
    pub eta: E1Char,
    psi_table: Arc<FxHashMap<[u32; 4], CycVal>>,
    lams: Arc<Vec<[u32; 2]>>,
}

impl CharSpec {
    /// Verifies φ ∈ Λ_β: φ = ψ_β on E¹ ∩ (level r).
    pub fn new(datum: BetaDatum, phi: E1Char, eta: E1Char) -> Result<Self> {
        let k = datum.n + 1;
        let psi_table = match datum.side() {
            Side::Sl2 => table(&sl2_level(&ring_for(&datum.f, k)?, datum.r), |x| {
                datum.psi_beta_res_sl2(x)
            })?,
            Side::Quat => table(&d1_elements(&d1_law(&datum.f, k)?, datum.r), |x| {
                datum.psi_beta_res_quat(x)
            })?,
        };
        let lr = lam_ring(&datum)?;
        let z = z_res(&datum.f, &lr);
        let lams = e1_elements(&lr, z, E1Part::All);
        let spec = CharSpec {
            datum,
            phi,
            eta,
            psi_table: Arc::new(psi_table),
            lams: Arc::new(lams),
        };
        for l in spec.lams.iter() {
            if let Some(v) = spec.psi_table.get(&spec.embed_lam(l)) {
                if spec.phi.eval(l)? != *v {
                    return Err(Error::OutsideDomain(format!(
                        "φ ∉ Λ_β: differs from ψ_β at {l:?}"
                    )));
                }
            }
        }
        Ok(spec)
    }

    /// All φ exponents in Λ_β for a table at depth k.
    pub fn lambda_beta(datum: &BetaDatum, k: u32) -> Result<Vec<u64>> {
        let base = E1Char::new(&datum.f, k, 0)?;
        let eta = base.clone();
        Ok((0..base.order)
            .filter(|&e| CharSpec::new(datum.clone(), base.with_exp(e), eta.clone()).is_ok())
            .collect())
    }

    fn embed_lam(&self, l: &[u32; 2]) -> [u32; 4] {
        match self.datum.side() {
            Side::Sl2 => {
                let r = ring_for(&self.datum.f, self.datum.n + 1).unwrap();
                embed_res(&r, z_res(&self.datum.f, &r), *l)
            }
            Side::Quat => [l[0], l[1], 0, 0],
        }
    }

    fn in_domain_value(&self, s: &[u32; 4]) -> Option<CycVal> {
        self.psi_table.get(s).copied()
    }

    /// φ_β(g) for g ∈ E¹·(level r) mod level n + 1, over every factorization g = λ·s.
    pub fn phi_beta(&self, g: &[u32; 4]) -> Result<CycVal> {
        let mut val: Option<CycVal> = None;
        for l in self.lams.iter() {
            let li = [l[0], self.lam_ring().neg(l[1])];
            let s = match self.datum.side() {
                Side::Sl2 => {
                    let r = self.lam_ring();
                    r.mat_mul(&self.embed_lam(&li), g)
                }
                Side::Quat => {
                    let law = d1_law(&self.datum.f, self.datum.n + 1).unwrap();
                    law.mul(&self.embed_lam(&li), g)
                }
            };
            if let Some(ps) = self.in_domain_value(&s) {
                let v = self.phi.eval(l)?.mul(&ps);
                match val {
                    None => val = Some(v),
                    Some(w) if w != v => {
                        return Err(Error::InconsistentFactorization(format!(
                            "{g:?}: {w} vs {v}"
                        )));
                    }
                    _ => {}
                }
            }
        }
        val.ok_or_else(|| {
            Error::OutsideDomain(format!("{g:?} is not in E¹·(level {})", self.datum.r))
        })
    }

    /// φ_(β,η)(g, γ) = φ_β(g)·η(γ).
    pub fn extended_char(&self, g: &[u32; 4], gamma: &[u32; 2]) -> Result<CycVal> {
        Ok(self.phi_beta(g)?.mul(&self.eta.eval(gamma)?))
    }

    fn lam_ring(&self) -> ResRing {
        lam_ring(&self.datum).unwrap()
    }
}

/// Table of g = embed(λ)·s ↦ φ(λ)·ψ_β(s) over λ ∈ `lams`, s ∈ `dom` (SL₂ side, residues mod p^{n+1}).
/// Errors when two factorizations of the same g disagree.
pub fn factored_table_sl2(
    d: &BetaDatum,
    phi: &E1Char,
    lams: &[[u32; 2]],
    dom: &[[u32; 4]],
) -> Result<FxHashMap<[u32; 4], CycVal>> {
    let ring = ring_for(&d.f, d.n + 1)?;
    let z = z_res(&d.f, &ring);
    let psi_s = table(dom, |x| d.psi_beta_res_sl2(x))?;
    let mut out: FxHashMap<[u32; 4], CycVal> = FxHashMap::default();
    for l in lams {
        let e = embed_res(&ring, z, *l);
        let pl = phi.eval(l)?;
        for s in dom {
            let g = ring.mat_mul(&e, s);
            let v = pl.mul(&psi_s[s]);
            if let Some(w) = out.insert(g, v) {
                if w != v {
                    return Err(Error::InconsistentFactorization(format!(
                        "{g:?}: {w} vs {v}"
                    )));
                }
            }
        }
    }
    Ok(out)
}

/// Modulus for the E¹ part paired with elements mod level n + 1.
fn lam_ring(d: &BetaDatum) -> Result<ResRing> {
    match d.side() {
        Side::Sl2 => ring_for(&d.f, d.n + 1),
        Side::Quat => ring_for(&d.f, (d.n + 1).div_ceil(2)),
    }
}
