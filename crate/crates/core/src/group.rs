//! Enumerated finite groups: closure, generators, cosets, double cosets, classes, class functions.

use crate::cyclotomic::{CycField, CycNum};
use crate::error::{Error, Result};
use crate::local_field::CycVal;
use crate::residue::GroupLaw;
use num_rational::Ratio;
use rustc_hash::{FxHashMap, FxHashSet};
use std::sync::Arc;

pub fn check_budget(predicted: u64, budget: u64) -> Result<()> {
    if predicted > budget {
        Err(Error::BudgetExceeded { predicted, budget })
    } else {
        Ok(())
    }
}

/// A finite group given by its full element list, sorted.
pub struct FiniteGroup<L: GroupLaw> {
    law: Arc<L>,
    elems: Vec<L::Elem>,
    index: FxHashMap<L::Elem, u32>,
}

impl<L: GroupLaw> FiniteGroup<L> {
    /// Wraps an element list that is assumed closed; `verify_closed` checks it.
    pub fn from_elements(law: Arc<L>, mut elems: Vec<L::Elem>) -> Self {
        elems.sort_unstable();
        elems.dedup();
        let index = elems
            .iter()
            .enumerate()
            .map(|(i, e)| (*e, i as u32))
            .collect();
        FiniteGroup { law, elems, index }
    }

    /// Closure of `gens` under the law; errors once more than `budget` elements appear.
    pub fn generate(law: Arc<L>, gens: &[L::Elem], budget: u64) -> Result<Self> {
        let elems = closure(&*law, gens, budget)?;
        Ok(Self::from_elements(law, elems))
    }

    /// {a·b : a ∈ A, b ∈ B}; a subgroup when AB = BA.
    pub fn product(law: Arc<L>, a: &[L::Elem], b: &[L::Elem], budget: u64) -> Result<Self> {
        let mut set = FxHashSet::default();
        for x in a {
            for y in b {
                set.insert(law.mul(x, y));
            }
            if set.len() as u64 > budget {
                return Err(Error::BudgetExceeded {
                    predicted: set.len() as u64,
                    budget,
                });
            }
        }
        Ok(Self::from_elements(law, set.into_iter().collect()))
    }

    pub fn law(&self) -> &Arc<L> {
        &self.law
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn elems(&self) -> &[L::Elem] {
        &self.elems
    }

    pub fn index_of(&self, x: &L::Elem) -> Option<usize> {
        self.index.get(x).map(|&i| i as usize)
    }

    pub fn contains(&self, x: &L::Elem) -> bool {
        self.index.contains_key(x)
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.elems.iter().all(|x| other.contains(x))
    }

    /// Checks closure under multiplication by a generating set and the presence of the identity.
    pub fn verify_closed(&self) -> bool {
        let gens = self.generators();
        self.contains(&self.law.identity())
            && self
                .elems
                .iter()
                .all(|x| gens.iter().all(|g| self.contains(&self.law.mul(x, g))))
    }

    /// Greedy generating set: scan the elements and keep any not yet in the span.
    pub fn generators(&self) -> Vec<L::Elem> {
        let mut gens = Vec::new();
        let id = self.law.identity();
        let mut span: FxHashSet<L::Elem> = [id].into_iter().collect();
        // stride through the list so early picks are spread out
        let n = self.elems.len();
        let stride = (1..)
            .map(|s| n / 3 + s)
            .find(|&s| gcd(s, n.max(1)) == 1)
            .unwrap_or(1)
            .max(1);
        for i in 0..n {
            let x = self.elems[(i * stride) % n];
            if span.contains(&x) {
                continue;
            }
            gens.push(x);
            span = closure(&*self.law, &gens, u64::MAX)
                .expect("unbounded")
                .into_iter()
                .collect();
            if span.len() == n {
                break;
            }
        }
        gens
    }

    /// Representatives t of the left cosets tH.
    pub fn left_coset_reps(&self, h: &Self) -> Vec<L::Elem> {
        let mut seen = vec![false; self.elems.len()];
        let mut reps = Vec::new();
        for (i, t) in self.elems.iter().enumerate() {
            if seen[i] {
                continue;
            }
            reps.push(*t);
            for y in &h.elems {
                seen[self.index[&self.law.mul(t, y)] as usize] = true;
            }
        }
        reps
    }

    /// H\G/K as (least representative, size) pairs; H and K must be subgroups of G.
    pub fn double_cosets(&self, h: &Self, k: &Self) -> Vec<(L::Elem, usize)> {
        let hg = h.generators();
        let kg = k.generators();
        let mut seen = vec![false; self.elems.len()];
        let mut out = Vec::new();
        let mut stack = Vec::new();
        for i in 0..self.elems.len() {
            if seen[i] {
                continue;
            }
            seen[i] = true;
            stack.push(i as u32);
            let mut size = 0;
            while let Some(j) = stack.pop() {
                size += 1;
                let x = self.elems[j as usize];
                let nexts = hg
                    .iter()
                    .map(|g| self.law.mul(g, &x))
                    .chain(kg.iter().map(|g| self.law.mul(&x, g)));
                for y in nexts {
                    let yi = self.index[&y];
                    if !seen[yi as usize] {
                        seen[yi as usize] = true;
                        stack.push(yi);
                    }
                }
            }
            out.push((self.elems[i], size));
        }
        out
    }

    /// Conjugacy classes, each represented by its least element.
    pub fn classes(&self) -> Classes<L::Elem> {
        let gens = self.generators();
        let mut class_of = vec![u32::MAX; self.elems.len()];
        let mut reps = Vec::new();
        let mut sizes = Vec::new();
        let mut stack = Vec::new();
        for i in 0..self.elems.len() {
            if class_of[i] != u32::MAX {
                continue;
            }
            let c = reps.len() as u32;
            class_of[i] = c;
            stack.push(i as u32);
            let mut size = 0;
            while let Some(j) = stack.pop() {
                size += 1;
                let x = self.elems[j as usize];
                for g in &gens {
                    let yi = self.index[&self.law.conj_by(g, &x)] as usize;
                    if class_of[yi] == u32::MAX {
                        class_of[yi] = c;
                        stack.push(yi as u32);
                    }
                }
            }
            reps.push(self.elems[i]);
            sizes.push(size);
        }
        Classes {
            order: self.elems.len(),
            reps,
            sizes,
            class_of,
        }
    }

    /// Class index of an element of G.
    pub fn class_index(&self, classes: &Classes<L::Elem>, x: &L::Elem) -> Option<usize> {
        self.index_of(x).map(|i| classes.class_of[i] as usize)
    }

    /// Values on the class representatives of Ind_H^G of a linear character χ of H.
    pub fn induce_linear(
        &self,
        classes: &Classes<L::Elem>,
        h: &Self,
        chi: impl Fn(&L::Elem) -> CycVal,
        field: &Arc<CycField>,
    ) -> ClassFunction {
        let reps = self.left_coset_reps(h);
        let n = field.n() as usize;
        let values = classes
            .reps
            .iter()
            .map(|x| {
                let mut counts = vec![0i64; n];
                for t in &reps {
                    let y = self.law.mul(&self.law.inv(t), &self.law.mul(x, t));
                    if h.contains(&y) {
                        counts[field.exponent(&chi(&y)) as usize] += 1;
                    }
                }
                field.from_counts(&counts)
            })
            .collect();
        ClassFunction { values, denom: 1 }
    }

    /// Restriction of a class function of G to the subgroup S with classes `sc`.
    pub fn restrict(
        &self,
        classes: &Classes<L::Elem>,
        f: &ClassFunction,
        sc: &Classes<L::Elem>,
    ) -> ClassFunction {
        let values = sc
            .reps
            .iter()
            .map(|x| f.values[self.class_index(classes, x).expect("subgroup")].clone())
            .collect();
        ClassFunction {
            values,
            denom: f.denom,
        }
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn closure<L: GroupLaw>(law: &L, gens: &[L::Elem], budget: u64) -> Result<Vec<L::Elem>> {
    let id = law.identity();
    let mut seen: FxHashSet<L::Elem> = [id].into_iter().collect();
    let mut out = vec![id];
    let mut i = 0;
    while i < out.len() {
        let x = out[i];
        i += 1;
        for g in gens {
            let y = law.mul(&x, g);
            if seen.insert(y) {
                out.push(y);
                if out.len() as u64 > budget {
                    return Err(Error::BudgetExceeded {
                        predicted: out.len() as u64,
                        budget,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Order of an element.
pub fn element_order<L: GroupLaw>(law: &L, x: &L::Elem) -> u64 {
    let id = law.identity();
    let mut y = *x;
    let mut n = 1;
    while y != id {
        y = law.mul(&y, x);
        n += 1;
    }
    n
}

#[derive(Clone, Debug)]
pub struct Classes<E> {
    pub order: usize,
    pub reps: Vec<E>,
    pub sizes: Vec<usize>,
    pub class_of: Vec<u32>,
}

impl<E> Classes<E> {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }
}

/// A class function with values in Q(ζ_n): values[i] / denom on class i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassFunction {
    pub values: Vec<CycNum>,
    pub denom: i64,
}

impl ClassFunction {
    /// Σ c_i f_i / d.
    pub fn combination(terms: &[(i64, &ClassFunction)], d: i64) -> ClassFunction {
        let l = terms
            .iter()
            .fold(1i64, |acc, (_, f)| num_integer::lcm(acc, f.denom));
        let len = terms[0].1.values.len();
        let values = (0..len)
            .map(|i| {
                terms
                    .iter()
                    .fold(terms[0].1.values[i].field().zero(), |acc, (c, f)| {
                        acc.add(&f.values[i].scale(c * (l / f.denom)))
                    })
            })
            .collect();
        ClassFunction {
            values,
            denom: l * d,
        }
        .normalized()
    }

    fn normalized(mut self) -> Self {
        let g = self
            .values
            .iter()
            .flat_map(|v| v.coeffs().iter())
            .fold(self.denom, |acc, &c| num_integer::gcd(acc, c));
        if g > 1 {
            self.values = self
                .values
                .iter()
                .map(|v| v.div_exact(g).unwrap())
                .collect();
            self.denom /= g;
        }
        self
    }

    /// Value at class i as an exact rational when it is one.
    pub fn rational_at(&self, i: usize) -> Option<Ratio<i64>> {
        self.values[i]
            .as_integer()
            .map(|v| Ratio::new(v, self.denom))
    }

    /// (1/|G|) Σ |C| f(C) conj(g(C)), exact; None when the result is irrational.
    pub fn inner<E>(&self, other: &ClassFunction, classes: &Classes<E>) -> Option<Ratio<i64>> {
        let field = self.values[0].field().clone();
        let s = self
            .values
            .iter()
            .zip(&other.values)
            .zip(&classes.sizes)
            .fold(field.zero(), |acc, ((a, b), &n)| {
                acc.add(&a.mul(&b.conj()).scale(n as i64))
            });
        s.as_integer()
            .map(|v| Ratio::new(v, classes.order as i64 * self.denom * other.denom))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::residue::{sl2_level, E1Law, ResRing, Sl2Law};

    /// Symmetric group S_n as permutations of 0..n.
    struct Sym<const N: usize>;

    impl<const N: usize> GroupLaw for Sym<N> {
        type Elem = [u8; N];
        fn identity(&self) -> [u8; N] {
            std::array::from_fn(|i| i as u8)
        }
        fn mul(&self, a: &[u8; N], b: &[u8; N]) -> [u8; N] {
            std::array::from_fn(|i| a[b[i] as usize])
        }
        fn inv(&self, a: &[u8; N]) -> [u8; N] {
            let mut r = [0u8; N];
            for i in 0..N {
                r[a[i] as usize] = i as u8;
            }
            r
        }
    }

    #[test]
    fn symmetric_group_basics() {
        let law = Arc::new(Sym::<4>);
        let g = FiniteGroup::generate(law.clone(), &[[1, 0, 2, 3], [1, 2, 3, 0]], 100).unwrap();
        assert_eq!(g.order(), 24);
        assert!(g.verify_closed());
        assert_eq!(g.classes().len(), 5);
        let s3 = FiniteGroup::generate(law.clone(), &[[1, 0, 2, 3], [1, 2, 0, 3]], 100).unwrap();
        assert_eq!(g.left_coset_reps(&s3).len(), 4);
        // S3\S4/S3 has two double cosets, of sizes 6 and 18
        let mut dc: Vec<usize> = g.double_cosets(&s3, &s3).into_iter().map(|x| x.1).collect();
        dc.sort();
        assert_eq!(dc, vec![6, 18]);
        assert!(FiniteGroup::generate(law, &[[1, 0, 2, 3], [1, 2, 3, 0]], 10).is_err());
    }

    #[test]
    fn induced_trivial_is_permutation_character() {
        let law = Arc::new(Sym::<4>);
        let g = FiniteGroup::generate(law.clone(), &[[1, 0, 2, 3], [1, 2, 3, 0]], 100).unwrap();
        let s3 = FiniteGroup::generate(law, &[[1, 0, 2, 3], [1, 2, 0, 3]], 100).unwrap();
        let cl = g.classes();
        let f = CycField::new(1);
        let ind = g.induce_linear(&cl, &s3, |_| CycVal::ONE, &f);
        // the permutation character counts fixed points
        for (i, x) in cl.reps.iter().enumerate() {
            let fixed = (0..4).filter(|&j| x[j] == j as u8).count() as i64;
            assert_eq!(ind.values[i].as_integer(), Some(fixed));
        }
        // 1 + standard: norm 2
        assert_eq!(ind.inner(&ind, &cl), Some(Ratio::from_integer(2)));
        let trivial = ClassFunction {
            values: vec![f.int(1); cl.len()],
            denom: 1,
        };
        assert_eq!(ind.inner(&trivial, &cl), Some(Ratio::from_integer(1)));
        let std = ClassFunction::combination(&[(1, &ind), (-1, &trivial)], 1);
        assert_eq!(std.inner(&std, &cl), Some(Ratio::from_integer(1)));
    }

    #[test]
    fn sl2_mod_3_classes() {
        // SL₂(F_3) has 7 conjugacy classes
        let r = ResRing::new(3, 1).unwrap();
        let law = Arc::new(Sl2Law { ring: r });
        let g = FiniteGroup::from_elements(law, sl2_level(&r, 0));
        assert_eq!(g.order(), 24);
        assert!(g.verify_closed());
        let cl = g.classes();
        assert_eq!(cl.len(), 7);
        assert_eq!(cl.sizes.iter().sum::<usize>(), 24);
    }

    #[test]
    fn e1_is_cyclic() {
        let r = ResRing::new(3, 3).unwrap();
        let law = E1Law { ring: r, z: 2 };
        let els = crate::residue::e1_elements(&r, 2, crate::residue::E1Part::All);
        assert!(els.iter().any(|x| element_order(&law, x) == 36));
    }
}
