//! Exact arithmetic in Z[ζ_n], elements stored in the power basis modulo Φ_n.

use crate::local_field::CycVal;
use serde::Serialize;
use std::sync::Arc;

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut r = num.to_vec();
    let dl = den.len();
    let lead = *den.last().unwrap();
    assert!(lead == 1 || lead == -1);
    let mut q = vec![0i64; num.len() + 1 - dl];
    for i in (0..q.len()).rev() {
        let c = r[i + dl - 1] * lead;
        q[i] = c;
        for j in 0..dl {
            r[i + j] -= c * den[j];
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    q
}

/// Coefficients of Φ_n, lowest degree first.
pub fn cyclotomic_poly(n: u64) -> Vec<i64> {
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    let mut q = num;
    for d in 1..n {
        if n.is_multiple_of(d) {
            q = poly_div_exact(&q, &cyclotomic_poly(d));
        }
    }
    q
}

/// Q(ζ_n) with a precomputed table of ζ^k in the power basis.
#[derive(Debug)]
pub struct CycField {
    n: u64,
    degree: usize,
    powers: Vec<Vec<i64>>,
}

impl CycField {
    pub fn new(n: u64) -> Arc<Self> {
        let phi = cyclotomic_poly(n);
        let degree = phi.len() - 1;
        let mut powers = Vec::with_capacity(n as usize);
        let mut cur = vec![0i64; degree];
        cur[0] = 1;
        for _ in 0..n {
            powers.push(cur.clone());
            // multiply by x and reduce with x^degree = -Σ phi[i] x^i
            let top = cur[degree - 1];
            let mut next = vec![0i64; degree];
            for i in (1..degree).rev() {
                next[i] = cur[i - 1];
            }
            for i in 0..degree {
                next[i] -= top * phi[i];
            }
            cur = next;
        }
        Arc::new(CycField { n, degree, powers })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn zero(self: &Arc<Self>) -> CycNum {
        CycNum {
            field: self.clone(),
            c: vec![0; self.degree],
        }
    }

    pub fn int(self: &Arc<Self>, k: i64) -> CycNum {
        let mut z = self.zero();
        z.c[0] = k;
        z
    }

    /// ζ_n^k.
    pub fn root(self: &Arc<Self>, k: i64) -> CycNum {
        let i = k.rem_euclid(self.n as i64) as usize;
        CycNum {
            field: self.clone(),
            c: self.powers[i].clone(),
        }
    }

    pub fn from_cyc(self: &Arc<Self>, v: &CycVal) -> CycNum {
        assert!(
            self.n.is_multiple_of(v.order()),
            "order {} does not divide {}",
            v.order(),
            self.n
        );
        self.root((v.exp() * (self.n / v.order())) as i64)
    }

    /// Σ counts[k]·ζ^k.
    pub fn from_counts(self: &Arc<Self>, counts: &[i64]) -> CycNum {
        let mut c = vec![0i64; self.degree];
        for (k, &m) in counts.iter().enumerate() {
            if m != 0 {
                for (ci, pk) in c.iter_mut().zip(&self.powers[k % self.n as usize]) {
                    *ci += m * pk;
                }
            }
        }
        CycNum {
            field: self.clone(),
            c,
        }
    }

    /// Exponent of v on the scale ζ_n.
    pub fn exponent(&self, v: &CycVal) -> u64 {
        assert!(
            self.n.is_multiple_of(v.order()),
            "order {} does not divide {}",
            v.order(),
            self.n
        );
        v.exp() * (self.n / v.order())
    }
}

/// Element of Z[ζ_n].
#[derive(Clone, Debug)]
pub struct CycNum {
    field: Arc<CycField>,
    c: Vec<i64>,
}

impl PartialEq for CycNum {
    fn eq(&self, o: &Self) -> bool {
        self.field.n == o.field.n && self.c == o.c
    }
}

impl Eq for CycNum {}

impl Serialize for CycNum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.c.serialize(s)
    }
}

impl CycNum {
    pub fn field(&self) -> &Arc<CycField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.c
    }

    pub fn add(&self, o: &Self) -> Self {
        CycNum {
            field: self.field.clone(),
            c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        CycNum {
            field: self.field.clone(),
            c: self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, k: i64) -> Self {
        CycNum {
            field: self.field.clone(),
            c: self.c.iter().map(|a| a * k).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let d = self.field.degree;
        let mut full = vec![0i64; 2 * d];
        for (i, &a) in self.c.iter().enumerate() {
            if a != 0 {
                for (j, &b) in o.c.iter().enumerate() {
                    full[i + j] += a * b;
                }
            }
        }
        let mut c = full[..d].to_vec();
        for (k, &m) in full.iter().enumerate().skip(d) {
            if m != 0 {
                for (ci, pk) in c
                    .iter_mut()
                    .zip(&self.field.powers[k % self.field.n as usize])
                {
                    *ci += m * pk;
                }
            }
        }
        CycNum {
            field: self.field.clone(),
            c,
        }
    }

    /// Complex conjugation ζ ↦ ζ⁻¹.
    pub fn conj(&self) -> Self {
        let n = self.field.n as usize;
        let mut c = vec![0i64; self.field.degree];
        for (i, &a) in self.c.iter().enumerate() {
            if a != 0 {
                for (ci, pk) in c.iter_mut().zip(&self.field.powers[(n - i) % n]) {
                    *ci += a * pk;
                }
            }
        }
        CycNum {
            field: self.field.clone(),
            c,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }

    /// The value when it is a rational integer.
    pub fn as_integer(&self) -> Option<i64> {
        self.c[1..].iter().all(|&x| x == 0).then_some(self.c[0])
    }

    /// Whether every coefficient is divisible by d (the power basis is an integral basis).
    pub fn divisible_by(&self, d: i64) -> bool {
        self.c.iter().all(|&x| x % d == 0)
    }

    pub fn div_exact(&self, d: i64) -> Option<Self> {
        self.divisible_by(d).then(|| CycNum {
            field: self.field.clone(),
            c: self.c.iter().map(|x| x / d).collect(),
        })
    }

    pub fn to_complex(&self) -> (f64, f64) {
        let n = self.field.n as f64;
        self.c
            .iter()
            .enumerate()
            .fold((0.0, 0.0), |(re, im), (k, &a)| {
                let t = 2.0 * std::f64::consts::PI * k as f64 / n;
                (re + a as f64 * t.cos(), im + a as f64 * t.sin())
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_cyclotomic_polys() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(9), vec![1, 0, 0, 1, 0, 0, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_poly(108).len() - 1, 36);
    }

    #[test]
    fn sum_of_all_roots_vanishes() {
        for n in [3u64, 9, 12, 27, 36, 108] {
            let f = CycField::new(n);
            let s = (0..n as i64).fold(f.zero(), |acc, k| acc.add(&f.root(k)));
            assert!(s.is_zero(), "n = {n}");
            let prim = f.root(1);
            assert_eq!(prim.mul(&prim.conj()), f.int(1));
        }
    }

    #[test]
    fn gauss_sum_norm() {
        // |Σ_x ζ_p^{x²}|² = p
        let f = CycField::new(5);
        let g = (0..5i64).fold(f.zero(), |acc, x| acc.add(&f.root(x * x)));
        assert_eq!(g.mul(&g.conj()).as_integer(), Some(5));
    }

    proptest! {
        #[test]
        fn roots_multiply_by_exponent(a in -500i64..500, b in -500i64..500) {
            let f = CycField::new(36);
            prop_assert_eq!(f.root(a).mul(&f.root(b)), f.root(a + b));
            prop_assert_eq!(f.root(a).conj(), f.root(-a));
        }

        #[test]
        fn cycval_embedding(o in prop::sample::select(vec![1u64, 2, 3, 4, 6, 9, 12, 18, 27, 36, 54, 108]), e in 0i64..200) {
            let f = CycField::new(108);
            let v = CycVal::new(o, e);
            prop_assert_eq!(f.from_cyc(&v).mul(&f.from_cyc(&v.inv())), f.int(1));
        }
    }
}
