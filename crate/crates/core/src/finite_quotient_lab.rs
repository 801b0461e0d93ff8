//! Finite quotient computations: coset counts for the U(1,1) Heisenberg construction,
//! the structure of D¹ near the identity, and the induced-character identity for τ¹.

use crate::beta_characters::{d1_law, factored_table_sl2, BetaDatum, E1Char, Side};
use crate::cyclotomic::CycField;
use crate::error::{Error, Result};
use crate::group::{check_budget, closure, element_order, ClassFunction, FiniteGroup};
use crate::local_field::{CycVal, FieldParams};
use crate::quaternion::{cayley, QuatNum, QuatSubgroup};
use crate::residue::{
    d1_elements, e1_elements, embed_res, sl2_level, sl2_level_minus, D1PairLaw, E1Part, GroupLaw,
    ResRing, Sl2PairLaw,
};
use num_rational::Ratio;
use rand::Rng;
use rustc_hash::{FxHashMap, FxHashSet};
use serde::Serialize;
use std::sync::Arc;

type Pair = [u32; 6];

/// The five groups (matrix part) ⋊ E¹₁ modulo p^{n+1}, r = n/2 + 1:
/// A = E¹₀SL^{r−1}, B = E¹₀SL^{r_}, C = E¹₀SL^r, Dd = E¹SL^{r−1}, F = E¹SL^r.
pub struct DoubleCosetGroups {
    pub n: u32,
    pub r: u32,
    pub ring: ResRing,
    pub z: u32,
    pub law: Arc<Sl2PairLaw>,
    pub a: FiniteGroup<Sl2PairLaw>,
    pub b: FiniteGroup<Sl2PairLaw>,
    pub c: FiniteGroup<Sl2PairLaw>,
    pub dd: FiniteGroup<Sl2PairLaw>,
    pub ff: FiniteGroup<Sl2PairLaw>,
    pub e1: Vec<[u32; 2]>,
    pub e10: Vec<[u32; 2]>,
    pub e11: Vec<[u32; 2]>,
}

/// Predicted |E¹SL^{r−1} ⋊ E¹₁| modulo p^{n+1}.
pub fn double_coset_predicted_order(q: u64, n: u32, r: u32) -> u64 {
    let k = n + 1;
    // |E¹ mod p^k| · |SL^{r−1}| / |E¹_{r−1}| · |E¹₁|
    let e1 = (q + 1) * q.pow(k - 1);
    let sl = q.pow(3 * (k - (r - 1)));
    let e1r = q.pow(k - (r - 1));
    e1 * sl / e1r * q.pow(k - 1)
}

impl DoubleCosetGroups {
    pub fn new(f: &FieldParams, n: u32, budget: u64) -> Result<Self> {
        if n == 0 || n % 2 == 1 {
            return Err(Error::InvalidParams(format!(
                "n = {n} must be even and positive"
            )));
        }
        let r = n / 2 + 1;
        check_budget(double_coset_predicted_order(f.q(), n, r), budget)?;
        let ring = ResRing::new(f.p, n + 1)?;
        let z = ring.red(f.z);
        let law = Arc::new(Sl2PairLaw::new(ring, z));
        let e1 = e1_elements(&ring, z, E1Part::All);
        let e10 = e1_elements(&ring, z, E1Part::Zero);
        let e11 = e1_elements(&ring, z, E1Part::Level(1));
        let slr1 = sl2_level(&ring, r - 1);
        let slr = sl2_level(&ring, r);
        let slm = sl2_level_minus(&ring, r);
        let mk = |lams: &[[u32; 2]], dom: &[[u32; 4]]| {
            let mats = matrix_products(&ring, z, lams, dom);
            let mut els = Vec::with_capacity(mats.len() * e11.len());
            for g in &mats {
                for l in &e11 {
                    els.push(Sl2PairLaw::join(*g, *l));
                }
            }
            FiniteGroup::from_elements(law.clone(), els)
        };
        Ok(DoubleCosetGroups {
            n,
            r,
            ring,
            z,
            a: mk(&e10, &slr1),
            b: mk(&e10, &slm),
            c: mk(&e10, &slr),
            dd: mk(&e1, &slr1),
            ff: mk(&e1, &slr),
            law,
            e1,
            e10,
            e11,
        })
    }
}

/// {embed(λ)·s}, deduplicated.
fn matrix_products(ring: &ResRing, z: u32, lams: &[[u32; 2]], dom: &[[u32; 4]]) -> Vec<[u32; 4]> {
    let mut set = FxHashSet::default();
    for l in lams {
        let e = embed_res(ring, z, *l);
        for s in dom {
            set.insert(ring.mat_mul(&e, s));
        }
    }
    let mut v: Vec<_> = set.into_iter().collect();
    v.sort_unstable();
    v
}

#[derive(Clone, Debug, Serialize)]
pub struct DoubleCosetReport {
    pub p: u32,
    pub n: u32,
    pub r: u32,
    pub orders: [usize; 5],
    pub counts: [u64; 6],
    pub expected: [u64; 6],
    /// Σ |HxK| = |G| for every double coset decomposition computed.
    pub partitions_ok: bool,
    pub subgroups_ok: bool,
}

impl DoubleCosetReport {
    pub fn holds(&self) -> bool {
        self.counts == self.expected && self.partitions_ok && self.subgroups_ok
    }
}

/// {q, q², q, q²(q+1)/2, q², 2q−1}.
pub fn double_coset_expected(q: u64) -> [u64; 6] {
    [q, q * q, q, q * q * (q + 1) / 2, q * q, 2 * q - 1]
}

pub fn double_coset_counts(f: &FieldParams, n: u32, budget: u64) -> Result<DoubleCosetReport> {
    let g = DoubleCosetGroups::new(f, n, budget)?;
    Ok(double_coset_report(f, &g))
}

pub fn double_coset_report(f: &FieldParams, g: &DoubleCosetGroups) -> DoubleCosetReport {
    let dc = |big: &FiniteGroup<Sl2PairLaw>,
              h: &FiniteGroup<Sl2PairLaw>,
              k: &FiniteGroup<Sl2PairLaw>| {
        let d = big.double_cosets(h, k);
        (
            d.len() as u64,
            d.iter().map(|x| x.1).sum::<usize>() == big.order(),
        )
    };
    let subgroups_ok = g.b.is_subset_of(&g.a)
        && g.c.is_subset_of(&g.a)
        && g.a.is_subset_of(&g.dd)
        && g.ff.is_subset_of(&g.dd)
        && g.c.is_subset_of(&g.ff);
    let (c3, ok3) = dc(&g.a, &g.c, &g.b);
    let (c4, ok4) = dc(&g.dd, &g.c, &g.c);
    let (c5, ok5) = dc(&g.dd, &g.ff, &g.c);
    let (c6, ok6) = dc(&g.dd, &g.ff, &g.ff);
    DoubleCosetReport {
        p: f.p,
        n: g.n,
        r: g.r,
        orders: [
            g.a.order(),
            g.b.order(),
            g.c.order(),
            g.dd.order(),
            g.ff.order(),
        ],
        counts: [
            (g.a.order() / g.b.order()) as u64,
            (g.a.order() / g.c.order()) as u64,
            c3,
            c4,
            c5,
            c6,
        ],
        expected: double_coset_expected(f.q()),
        partitions_ok: ok3 && ok4 && ok5 && ok6,
        subgroups_ok,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct D1StructureReport {
    pub p: u32,
    pub order: u64,
    pub expected_order: u64,
    pub generator: Option<[u32; 4]>,
    pub character_count: u64,
    /// [G′, G′] ⊇ D¹₁ ⋊ {1} modulo D¹₂.
    pub commutators_contain_d1_1: bool,
}

impl D1StructureReport {
    pub fn holds(&self) -> bool {
        self.order == self.expected_order
            && self.generator.is_some()
            && self.commutators_contain_d1_1
    }
}

pub fn d1_structure(f: &FieldParams, budget: u64) -> Result<D1StructureReport> {
    let q = f.q();
    check_budget(
        (q + 1).pow(2) * q.pow(2) * (q + 1).pow(2) * q.pow(2),
        budget,
    )?;
    let law1 = d1_law(f, 1)?;
    let els = d1_elements(&law1, 0);
    let order = els.len() as u64;
    let generator = els
        .iter()
        .copied()
        .find(|x| element_order(&law1, x) == order);
    // cyclic of order N has N characters: t ↦ ζ_N^j
    let character_count = if generator.is_some() { order } else { 0 };

    let law2 = d1_law(f, 2)?;
    let pair = D1PairLaw { d: law2.clone() };
    let hs = d1_elements(&law2, 0);
    let lams = e1_elements(&law2.ra, law2.z, E1Part::All);
    let g: Vec<Pair> = hs
        .iter()
        .flat_map(|h| lams.iter().map(move |l| D1PairLaw::join(*h, *l)))
        .collect();
    let mut comms = FxHashSet::default();
    for x in &g {
        for y in &g {
            comms.insert(pair.commutator(x, y));
        }
    }
    let comms: Vec<Pair> = comms.into_iter().collect();
    let span: FxHashSet<Pair> = closure(&pair, &comms, budget)?.into_iter().collect();
    let contains = d1_elements(&law2, 1)
        .iter()
        .all(|h| span.contains(&D1PairLaw::join(*h, [1, 0])));
    Ok(D1StructureReport {
        p: f.p,
        order,
        expected_order: q + 1,
        generator,
        character_count,
        commutators_contain_d1_1: contains,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ROddReport {
    pub p: u32,
    pub n: u32,
    pub r: u32,
    pub lower_order: usize,
    pub upper_order: usize,
    pub equal: bool,
    pub contains: bool,
    pub samples: usize,
    pub decomposition_failures: Vec<String>,
}

impl ROddReport {
    pub fn holds(&self) -> bool {
        self.equal && self.contains && self.decomposition_failures.is_empty()
    }
}

/// (E¹D¹_{r−1})/D¹_{n+1} = (E¹D¹_r)/D¹_{n+1} for 4 | n, r = n/2 + 1, by set comparison,
/// and the factorization c(aδ^{r−1}) = c(a₀δ^{r−1})·c(a₁δ^r)·h₃ on random a.
pub fn r_odd_lemma<R: Rng + ?Sized>(
    f: &FieldParams,
    n: u32,
    samples: usize,
    budget: u64,
    rng: &mut R,
) -> Result<ROddReport> {
    if n == 0 || !n.is_multiple_of(4) {
        return Err(Error::InvalidParams(format!(
            "n = {n} must be a positive multiple of 4"
        )));
    }
    let r = n / 2 + 1;
    let k = n + 1;
    check_budget(crate::residue::d1_quotient_order(f.q(), k), budget)?;
    let law = d1_law(f, k)?;
    let e1: Vec<[u32; 4]> = e1_elements(&law.ra, law.z, E1Part::All)
        .into_iter()
        .map(|l| [l[0], l[1], 0, 0])
        .collect();
    let prod = |lev: u32| -> FxHashSet<[u32; 4]> {
        let dom = d1_elements(&law, lev);
        e1.iter()
            .flat_map(|l| dom.iter().map(|s| law.mul(l, s)))
            .collect()
    };
    let lower = prod(r - 1);
    let upper = prod(r);
    let contains = upper.iter().all(|x| lower.contains(x));
    let equal = contains && lower.len() == upper.len();

    let mut failures = Vec::new();
    let m = (r - 1) as i32;
    for i in 0..samples {
        // a = a₀ + a₁δ with a₀ ∈ αO_F so that aδ^{r−1} is traceless
        let a0 = f.alpha().scale(&f.random_padic(rng, 0));
        let a1 = f.random_ext(rng, 0);
        // δ^{r−1} = ϖ^{m/2} is central since m is even
        let dm = f.pi_pow(m / 2);
        let zero = a1.mul_int(0);
        let h = cayley(&QuatNum::new(a0, a1).scale(&dm))?;
        let f1 = cayley(&QuatNum::from_e(a0.scale(&dm)))?;
        let f2 = cayley(&QuatNum::new(zero, a1).scale(&dm))?;
        let f3 = f1.mul(&f2).inv()?.mul(&h);
        let ok1 = f1.c.is_zero() && f1.is_member(QuatSubgroup::D1)?;
        let ok2 = f2.is_member(QuatSubgroup::D1R(r))?;
        let ok3 = f3.is_member(QuatSubgroup::D1R(k))?;
        let okh = h.is_member(QuatSubgroup::D1R(r - 1))?;
        if !(ok1 && ok2 && ok3 && okh) {
            failures.push(format!(
                "sample {i}: E¹ {ok1}, D¹_r {ok2}, D¹_(n+1) {ok3}, h {okh}"
            ));
        }
    }
    Ok(ROddReport {
        p: f.p,
        n,
        r,
        lower_order: lower.len(),
        upper_order: upper.len(),
        equal,
        contains,
        samples,
        decomposition_failures: failures,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct HeisenbergReport {
    pub p: u32,
    pub n: u32,
    pub phi_exp: u64,
    pub eta_exp: u64,
    pub classes: usize,
    pub h_integral: bool,
    pub h_degree: Option<Ratio<i64>>,
    pub h_norm: Option<Ratio<i64>>,
    pub restriction_is_rho0: bool,
    pub rho0_degree: Option<Ratio<i64>>,
    pub rho0_norm: Option<Ratio<i64>>,
    pub rho_rho0: Option<Ratio<i64>>,
    pub frobenius_pairs: usize,
    pub frobenius_failures: usize,
}

impl HeisenbergReport {
    pub fn holds(&self, q: u64) -> bool {
        let q = Ratio::from_integer(q as i64);
        let one = Ratio::from_integer(1);
        self.h_integral
            && self.h_degree == Some(q)
            && self.h_norm == Some(one)
            && self.restriction_is_rho0
            && self.rho0_degree == Some(q)
            && self.rho0_norm == Some(one)
            && self.rho_rho0 == Some(q)
            && self.frobenius_failures == 0
    }
}

/// Character of (E¹-part·level) ⋊ E¹₁ built from a factored table and η.
fn pair_char<'a>(
    tab: &'a FxHashMap<[u32; 4], CycVal>,
    eta: &'a E1Char,
) -> impl Fn(&Pair) -> CycVal + 'a {
    move |x| {
        let (g, l) = Sl2PairLaw::split(x);
        tab[&g].mul(&eta.eval(&l).expect("E¹₁ element"))
    }
}

/// Checks that h = 2q⁻¹g − f is an irreducible character of degree q restricting to ρ°,
/// plus Frobenius reciprocity on `frob_pairs` random (χ, θ).
pub fn heisenberg_virtual_check<R: Rng + ?Sized>(
    f: &FieldParams,
    n: u32,
    budget: u64,
    frob_pairs: usize,
    rng: &mut R,
) -> Result<HeisenbergReport> {
    let gr = DoubleCosetGroups::new(f, n, budget)?;
    let q = f.q() as i64;
    let datum = BetaDatum::standard(*f, Side::Sl2, n)?;
    let (r, ring) = (gr.r, gr.ring);
    let slr = sl2_level(&ring, r);
    let slm = sl2_level_minus(&ring, r);

    // φ ∈ Λ_β: the least exponent whose factored tables are consistent on every domain used
    let base = E1Char::new(f, n + 1, 0)?;
    let tables = |e: u64| -> Result<[FxHashMap<[u32; 4], CycVal>; 3]> {
        let phi = base.with_exp(e);
        Ok([
            factored_table_sl2(&datum, &phi, &gr.e1, &slr)?,
            factored_table_sl2(&datum, &phi, &gr.e10, &slr)?,
            factored_table_sl2(&datum, &phi, &gr.e10, &slm)?,
        ])
    };
    let admissible: Vec<u64> = (0..base.order).filter(|&e| tables(e).is_ok()).collect();
    let phi_exp = *admissible
        .first()
        .ok_or_else(|| Error::OutsideDomain("Λ_β is empty".into()))?;
    let eta_exp = 1;
    let eta = base.with_exp(eta_exp);
    let [t_f, t_g, t_o] = tables(phi_exp)?;

    let field = CycField::new((f.q() + 1) * f.q().pow(n + 1));
    let big = &gr.dd;
    let small = &gr.a;
    let cl = big.classes();
    let cl0 = small.classes();
    let fc = big.induce_linear(&cl, &gr.ff, pair_char(&t_f, &eta), &field);
    let gc = big.induce_linear(&cl, &gr.c, pair_char(&t_g, &eta), &field);
    let h = ClassFunction::combination(&[(2, &gc), (-q, &fc)], q);
    let h_integral = h.denom == 1;
    let id_class = big.class_index(&cl, &gr.law.identity()).unwrap();
    let id_class0 = small.class_index(&cl0, &gr.law.identity()).unwrap();
    let rho0 = small.induce_linear(&cl0, &gr.b, pair_char(&t_o, &eta), &field);
    let rho = small.induce_linear(&cl0, &gr.c, pair_char(&t_g, &eta), &field);
    let res = big.restrict(&cl, &h, &cl0);
    let diff = ClassFunction::combination(&[(1, &res), (-1, &rho0)], 1);
    let restriction_is_rho0 = diff.values.iter().all(|v| v.is_zero());

    // Frobenius reciprocity: ⟨Ind χ, θ⟩_G = ⟨χ, Res θ⟩_H on H = E¹SL^r ⋊ E¹₁
    let hsub = &gr.ff;
    let clh = hsub.classes();
    let mut failures = 0;
    for _ in 0..frob_pairs {
        let pe = admissible[rng.gen_range(0..admissible.len())];
        let ee = rng.gen_range(0..base.order);
        let tf = factored_table_sl2(&datum, &base.with_exp(pe), &gr.e1, &slr)?;
        let et = base.with_exp(ee);
        let chi = pair_char(&tf, &et);
        let ind = big.induce_linear(&cl, hsub, &chi, &field);
        let theta = ClassFunction {
            values: (0..cl.len())
                .map(|_| field.int(rng.gen_range(-3..=3)))
                .collect(),
            denom: 1,
        };
        let chi_h = ClassFunction {
            values: clh.reps.iter().map(|x| field.from_cyc(&chi(x))).collect(),
            denom: 1,
        };
        let res_theta = big.restrict(&cl, &theta, &clh);
        if ind.inner(&theta, &cl) != chi_h.inner(&res_theta, &clh) {
            failures += 1;
        }
    }
    Ok(HeisenbergReport {
        p: f.p,
        n,
        phi_exp,
        eta_exp,
        classes: cl.len(),
        h_integral,
        h_degree: h.rational_at(id_class),
        h_norm: h.inner(&h, &cl),
        restriction_is_rho0,
        rho0_degree: rho0.rational_at(id_class0),
        rho0_norm: rho0.inner(&rho0, &cl0),
        rho_rho0: rho.inner(&rho0, &cl0),
        frobenius_pairs: frob_pairs,
        frobenius_failures: failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::residue::D1Law;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn quotient_orders() {
        let r = ResRing::new(3, 3).unwrap();
        assert_eq!(sl2_level(&r, 1).len(), 729);
        assert_eq!(
            e1_elements(&ResRing::new(3, 1).unwrap(), 2, E1Part::All).len(),
            4
        );
        let law = D1Law::new(3, 2, 2).unwrap();
        assert_eq!(d1_elements(&law, 1).len(), 9);
        assert_eq!(double_coset_predicted_order(3, 2, 2), 26244);
    }

    #[test]
    fn double_coset_p3() {
        let f = FieldParams::new(3, 6).unwrap();
        let rep = double_coset_counts(&f, 2, 10_000_000).unwrap();
        assert_eq!(rep.counts, [3, 9, 3, 18, 9, 5]);
        assert_eq!(rep.orders[3] as u64, double_coset_predicted_order(3, 2, 2));
        assert!(rep.holds());
    }

    #[test]
    fn double_coset_budget() {
        let f = FieldParams::new(3, 6).unwrap();
        assert!(matches!(
            double_coset_counts(&f, 2, 1000),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn d1_structure_small_primes() {
        for p in [3, 5] {
            let f = FieldParams::new(p, 6).unwrap();
            let rep = d1_structure(&f, 10_000_000).unwrap();
            assert_eq!(rep.order, p as u64 + 1);
            assert_eq!(rep.character_count, p as u64 + 1);
            assert!(rep.holds(), "{rep:?}");
        }
    }

    #[test]
    fn r_odd_p3() {
        let f = FieldParams::new(3, 10).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let rep = r_odd_lemma(&f, 4, 50, 10_000_000, &mut rng).unwrap();
        assert!(rep.holds(), "{rep:?}");
        assert!(r_odd_lemma(&f, 2, 1, 10_000_000, &mut rng).is_err());
    }

    #[test]
    fn heisenberg_p3() {
        let f = FieldParams::new(3, 8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let rep = heisenberg_virtual_check(&f, 2, 10_000_000, 4, &mut rng).unwrap();
        assert!(rep.holds(3), "{rep:?}");
    }
}
