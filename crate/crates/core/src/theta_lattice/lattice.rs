//! 𝒪_F-lattices in 𝒲 as rational 8×8 basis matrices.
//!
//! The F-basis is (e₀, αe₀, e₁, αe₁, e₂, αe₂, e₃, αe₃) where e_i runs over the
//! `BigVec` coordinates; basis vectors of a lattice are the columns.

use crate::error::{Error, Result};
use crate::local_field::{ExtNum, PadicNum};
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use super::forms::BigVec;

pub type Q = Ratio<i128>;
pub type QMat = [[Q; 8]; 8];

fn zero_mat() -> QMat {
    std::array::from_fn(|_| std::array::from_fn(|_| Q::zero()))
}

fn ident() -> QMat {
    let mut m = zero_mat();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Q::one();
    }
    m
}

pub fn mat_mul(a: &QMat, b: &QMat) -> QMat {
    let mut c = zero_mat();
    for i in 0..8 {
        for k in 0..8 {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..8 {
                c[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    c
}

pub fn transpose(a: &QMat) -> QMat {
    std::array::from_fn(|i| std::array::from_fn(|j| a[j][i]))
}

/// Gauss–Jordan inverse together with the determinant.
pub fn inverse(a: &QMat) -> Option<(QMat, Q)> {
    let mut m = *a;
    let mut inv = ident();
    let mut det = Q::one();
    for col in 0..8 {
        let piv = (col..8).find(|&r| !m[r][col].is_zero())?;
        if piv != col {
            m.swap(piv, col);
            inv.swap(piv, col);
            det = -det;
        }
        let d = m[col][col];
        det *= d;
        for j in 0..8 {
            m[col][j] /= d;
            inv[col][j] /= d;
        }
        for r in 0..8 {
            if r != col && !m[r][col].is_zero() {
                let t = m[r][col];
                for j in 0..8 {
                    let (mc, ic) = (m[col][j], inv[col][j]);
                    m[r][j] -= t * mc;
                    inv[r][j] -= t * ic;
                }
            }
        }
    }
    Some((inv, det))
}

/// v_p of a nonzero rational.
pub fn val_q(x: &Q, p: u32) -> Option<i32> {
    if x.is_zero() {
        return None;
    }
    let p = p as i128;
    let (mut n, mut d, mut v) = (x.numer().abs(), *x.denom(), 0);
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    while d % p == 0 {
        d /= p;
        v -= 1;
    }
    Some(v)
}

fn p_integral(x: &Q, p: u32) -> bool {
    x.denom() % p as i128 != 0
}

fn pow_q(p: u32, k: i32) -> Q {
    let base = Q::from_integer(p as i128);
    if k >= 0 {
        base.pow(k)
    } else {
        Q::one() / base.pow(-k)
    }
}

/// Gram matrix of ⟨⟨·,·⟩⟩ in the F-basis, computed from Tr_{E/F}(1) = 2, Tr_{E/F}(α·ᾱ) = −2z
/// and the coordinate pairing (e₀,e₂) ↦ 1, (e₁,e₃) ↦ −ϖ.
pub fn gram(p: u32, z: i64) -> QMat {
    let pi = p as i128;
    let mut h = [[0i128; 4]; 4];
    h[0][2] = 1;
    h[2][0] = -1;
    h[1][3] = -pi;
    h[3][1] = pi;
    let t = [[2, 0], [0, -2 * z as i128]];
    std::array::from_fn(|i| {
        std::array::from_fn(|j| Q::from_integer(h[i / 2][j / 2] * t[i % 2][j % 2]))
    })
}

/// Rational value of a p-adic number via the balanced lift of its unit; zeros at any precision map to 0.
pub fn padic_to_q(x: &PadicNum) -> Option<Q> {
    if x.is_zero() {
        return Some(Q::zero());
    }
    let (v, u, prec) = (x.valuation()?, x.unit()? as i128, x.rel_prec());
    let m = (x.p() as i128).checked_pow(prec)?;
    let u = if u > m / 2 { u - m } else { u };
    Some(Q::from_integer(u) * pow_q(x.p(), v))
}

/// F-coordinates of a `BigVec`.
pub fn bigvec_to_q(x: &BigVec) -> Option<[Q; 8]> {
    let mut out = [Q::zero(); 8];
    for (i, c) in x.0.iter().enumerate() {
        out[2 * i] = padic_to_q(&c.a)?;
        out[2 * i + 1] = padic_to_q(&c.b)?;
    }
    Some(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Lattice {
    pub p: u32,
    pub basis: QMat,
}

impl Lattice {
    pub fn from_columns(p: u32, cols: &[[Q; 8]]) -> Result<Self> {
        if cols.len() != 8 {
            return Err(Error::InvalidParams(
                "a lattice in 𝒲 needs 8 basis vectors".into(),
            ));
        }
        let basis = std::array::from_fn(|i| std::array::from_fn(|j| cols[j][i]));
        let l = Lattice { p, basis };
        if inverse(&l.basis).is_none() {
            return Err(Error::InvalidParams("basis vectors are dependent".into()));
        }
        Ok(l)
    }

    /// ⊕ P_F^{s_i} in the F-basis.
    pub fn diagonal(p: u32, shifts: [i32; 8]) -> Self {
        let mut basis = zero_mat();
        for (i, s) in shifts.iter().enumerate() {
            basis[i][i] = pow_q(p, *s);
        }
        Lattice { p, basis }
    }

    /// Coordinate i ranges over P_E^{s_i}.
    pub fn e_diagonal(p: u32, shifts: [i32; 4]) -> Self {
        Self::diagonal(p, std::array::from_fn(|i| shifts[i / 2]))
    }

    /// ϖ^k·L.
    pub fn scale(&self, k: i32) -> Self {
        let s = pow_q(self.p, k);
        Lattice {
            p: self.p,
            basis: self.basis.map(|r| r.map(|x| x * s)),
        }
    }

    /// L* = {x : ⟨⟨x, L⟩⟩ ⊆ 𝒪_F}, basis (G·B)^{−T}.
    pub fn dual(&self, gram: &QMat) -> Result<Self> {
        let gb = mat_mul(gram, &self.basis);
        let (inv, _) =
            inverse(&gb).ok_or_else(|| Error::InvalidParams("degenerate form".into()))?;
        Ok(Lattice {
            p: self.p,
            basis: transpose(&inv),
        })
    }

    fn relative(&self, other: &Lattice) -> (QMat, Q) {
        let (inv, _) = inverse(&self.basis).expect("basis is invertible");
        let rel = mat_mul(&inv, &other.basis);
        let (_, det) = inverse(&rel).expect("basis is invertible");
        (rel, det)
    }

    /// other ⊆ self.
    pub fn contains(&self, other: &Lattice) -> bool {
        self.relative(other)
            .0
            .iter()
            .flatten()
            .all(|x| p_integral(x, self.p))
    }

    pub fn same(&self, other: &Lattice) -> bool {
        self.contains(other) && other.contains(self)
    }

    /// log_p [self : other] for other ⊆ self.
    pub fn index_exponent(&self, other: &Lattice) -> Option<i32> {
        let (_, det) = self.relative(other);
        val_q(&det, self.p)
    }

    pub fn contains_vec(&self, x: &[Q; 8]) -> bool {
        let (inv, _) = inverse(&self.basis).expect("basis is invertible");
        (0..8).all(|i| p_integral(&(0..8).map(|j| inv[i][j] * x[j]).sum::<Q>(), self.p))
    }
}

/// Lattice spanned over 𝒪_F by Γ ⊗ L′ where L′ = 𝒪_E·w₁ + 𝒪_E·w₂, built from pure tensors.
pub fn tensor_lattice(
    p: u32,
    gamma: &[[ExtNum; 2]; 2],
    lprime: &[crate::quaternion::QuatNum; 2],
) -> Result<Lattice> {
    let mut cols = Vec::with_capacity(8);
    let err = || Error::InsufficientPrecision { needed: 1, have: 0 };
    for v in gamma {
        for w in lprime {
            let x = BigVec::pure(v, w);
            let alpha = ext_alpha(&v[0]);
            cols.push(bigvec_to_q(&x).ok_or_else(err)?);
            cols.push(bigvec_to_q(&x.scale_e(&alpha)).ok_or_else(err)?);
        }
    }
    Lattice::from_columns(p, &cols)
}

fn ext_alpha(like: &ExtNum) -> ExtNum {
    let one = like.one_like();
    ExtNum::new(one.b, one.a, like.z())
}

/// Geometry of A = Γ ⊗ Γ′ and its duals.
#[derive(Clone, Debug, serde::Serialize)]
pub struct LatticeReport {
    pub p: u32,
    pub a_dual_is_expected: bool,
    pub a_dual_is_tensor: bool,
    pub sandwich: bool,
    pub strict: bool,
    pub quotient_exponent: Option<i32>,
    pub mk_duals: Vec<(i32, bool)>,
    pub double_duals: bool,
}

impl LatticeReport {
    pub fn holds(&self) -> bool {
        self.a_dual_is_expected
            && self.a_dual_is_tensor
            && self.sandwich
            && self.strict
            && self.quotient_exponent == Some(4)
            && self.mk_duals.iter().all(|&(_, ok)| ok)
            && self.double_duals
    }
}

pub const A_SHIFTS: [i32; 4] = [0, 0, 0, 0];
pub const A_DUAL_SHIFTS: [i32; 4] = [0, -1, 0, -1];

pub fn lattice_report(f: &crate::local_field::FieldParams, ks: &[i32]) -> Result<LatticeReport> {
    let g = gram(f.p, f.z);
    let a = Lattice::e_diagonal(f.p, A_SHIFTS);
    let ad = a.dual(&g)?;
    let expected = Lattice::e_diagonal(f.p, A_DUAL_SHIFTS);
    let one = f.ext_int(1, 0);
    let zero = f.ext_int(0, 0);
    let gamma = [[one, zero], [zero, one]];
    let dual_prime = [
        crate::quaternion::QuatNum::new(one, zero),
        crate::quaternion::QuatNum::new(zero, f.ext(f.pi_pow(-1), f.zero())),
    ];
    let tensor = tensor_lattice(f.p, &gamma, &dual_prime)?;
    let mut mk = Vec::new();
    for &k in ks {
        let m = a.scale(k);
        mk.push((k, m.dual(&g)?.same(&ad.scale(-k))));
    }
    let mut double = true;
    for l in [&a, &ad, &a.scale(2), &tensor] {
        double &= l.dual(&g)?.dual(&g)?.same(l);
    }
    Ok(LatticeReport {
        p: f.p,
        a_dual_is_expected: ad.same(&expected),
        a_dual_is_tensor: ad.same(&tensor),
        sandwich: a.contains(&ad.scale(1)) && ad.contains(&a),
        strict: !a.contains(&ad),
        quotient_exponent: ad.index_exponent(&a),
        mk_duals: mk,
        double_duals: double,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local_field::FieldParams;
    use crate::theta_lattice::forms::form_ww;
    use proptest::prelude::*;

    #[test]
    fn gram_matches_form() {
        let f = FieldParams::new(5, 8).unwrap();
        let g = gram(5, f.z);
        let basis: Vec<BigVec> = (0..8)
            .map(|i| {
                let mut c = [f.ext_int(0, 0); 4];
                c[i / 2] = if i % 2 == 0 {
                    f.ext_int(1, 0)
                } else {
                    f.alpha()
                };
                BigVec(c)
            })
            .collect();
        for i in 0..8 {
            for j in 0..8 {
                assert_eq!(
                    padic_to_q(&form_ww(&basis[i], &basis[j])),
                    Some(g[i][j]),
                    "{i} {j}"
                );
            }
        }
    }

    #[test]
    fn good_lattice() {
        for p in [3, 5, 7] {
            let f = FieldParams::new(p, 8).unwrap();
            let rep = lattice_report(&f, &[0, 1, 2]).unwrap();
            assert!(rep.holds(), "{rep:?}");
        }
    }

    #[test]
    fn dual_membership() {
        let g = gram(3, 2);
        let a = Lattice::e_diagonal(3, A_SHIFTS);
        let ad = a.dual(&g).unwrap();
        assert!(!ad.same(&a));
        assert!(ad.contains_vec(&std::array::from_fn(|i| if i == 2 {
            Q::new(1, 3)
        } else {
            Q::zero()
        })));
        assert!(!ad.contains_vec(&std::array::from_fn(|i| if i == 0 {
            Q::new(1, 3)
        } else {
            Q::zero()
        })));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn double_dual(entries in prop::collection::vec(-4i128..=4, 64), shift in -2i32..=2) {
            let g = gram(3, 2);
            let mut basis = zero_mat();
            for i in 0..8 {
                for j in 0..8 {
                    basis[i][j] = Q::from_integer(entries[8 * i + j] + if i == j { 9 } else { 0 });
                }
            }
            prop_assume!(inverse(&basis).is_some());
            let l = Lattice { p: 3, basis }.scale(shift);
            let dd = l.dual(&g).unwrap().dual(&g).unwrap();
            prop_assert!(dd.same(&l));
        }
    }
}
