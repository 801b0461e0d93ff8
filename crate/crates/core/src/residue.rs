//! Residue rings Z/p^k and the truncated group laws used for finite enumeration.

use crate::error::{Error, Result};
use crate::local_field::inv_mod;
use std::fmt::Debug;
use std::hash::Hash;

/// Z/p^k with elements stored as u32 in [0, p^k).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ResRing {
    pub p: u32,
    pub k: u32,
    pub m: u32,
}

impl ResRing {
    pub fn new(p: u32, k: u32) -> Result<Self> {
        let m = (p as u64).checked_pow(k).filter(|&m| m < (1 << 31));
        match m {
            Some(m) => Ok(ResRing { p, k, m: m as u32 }),
            None => Err(Error::InvalidParams(format!(
                "{p}^{k} does not fit the residue representation"
            ))),
        }
    }

    #[inline]
    pub fn red(&self, x: i64) -> u32 {
        x.rem_euclid(self.m as i64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.m as u64) as u32
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.m as u64 - b as u64) % self.m as u64) as u32
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.sub(0, a)
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.m as u64) as u32
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        inv_mod(a as u64, self.m as u64).map(|x| x as u32)
    }

    pub fn is_unit(&self, a: u32) -> bool {
        !a.is_multiple_of(self.p)
    }

    /// p^j mod p^k.
    pub fn p_pow(&self, j: u32) -> u32 {
        if j >= self.k {
            0
        } else {
            self.p.pow(j)
        }
    }

    /// Largest j ≤ k with p^j | a.
    pub fn val(&self, a: u32) -> u32 {
        if a == 0 {
            return self.k;
        }
        let mut a = a;
        let mut j = 0;
        while a.is_multiple_of(self.p) {
            a /= self.p;
            j += 1;
        }
        j
    }

    /// Multiplication in (Z/p^k)[α], α² = z.
    #[inline]
    pub fn ext_mul(&self, z: u32, x: [u32; 2], y: [u32; 2]) -> [u32; 2] {
        let m = self.m as u64;
        let (a, b, c, d) = (x[0] as u64, x[1] as u64, y[0] as u64, y[1] as u64);
        [
            ((a * c + (b * d % m) * z as u64) % m) as u32,
            ((a * d + b * c) % m) as u32,
        ]
    }

    #[inline]
    pub fn ext_conj(&self, x: [u32; 2]) -> [u32; 2] {
        [x[0], self.neg(x[1])]
    }

    #[inline]
    pub fn ext_norm(&self, z: u32, x: [u32; 2]) -> u32 {
        self.sub(self.mul(x[0], x[0]), self.mul(z, self.mul(x[1], x[1])))
    }

    #[inline]
    pub fn mat_mul(&self, x: &[u32; 4], y: &[u32; 4]) -> [u32; 4] {
        let m = self.m as u64;
        let f = |a: u32, b: u32, c: u32, d: u32| {
            ((a as u64 * b as u64 + c as u64 * d as u64) % m) as u32
        };
        [
            f(x[0], y[0], x[1], y[2]),
            f(x[0], y[1], x[1], y[3]),
            f(x[2], y[0], x[3], y[2]),
            f(x[2], y[1], x[3], y[3]),
        ]
    }
}

/// A finite group law on a Copy element type.
pub trait GroupLaw: Sync {
    type Elem: Copy + Eq + Hash + Ord + Debug + Send + Sync;
    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;

    fn conj_by(&self, g: &Self::Elem, x: &Self::Elem) -> Self::Elem {
        self.mul(&self.mul(g, x), &self.inv(g))
    }

    fn commutator(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.mul(&self.mul(a, b), &self.mul(&self.inv(a), &self.inv(b)))
    }
}

/// SL₂(Z/p^k), row-major.
#[derive(Clone, Debug)]
pub struct Sl2Law {
    pub ring: ResRing,
}

impl GroupLaw for Sl2Law {
    type Elem = [u32; 4];

    fn identity(&self) -> [u32; 4] {
        [1, 0, 0, 1]
    }

    fn mul(&self, a: &[u32; 4], b: &[u32; 4]) -> [u32; 4] {
        self.ring.mat_mul(a, b)
    }

    fn inv(&self, a: &[u32; 4]) -> [u32; 4] {
        let r = &self.ring;
        [a[3], r.neg(a[1]), r.neg(a[2]), a[0]]
    }
}

/// E¹ mod p^k inside (Z/p^k)[α].
#[derive(Clone, Debug)]
pub struct E1Law {
    pub ring: ResRing,
    pub z: u32,
}

impl GroupLaw for E1Law {
    type Elem = [u32; 2];

    fn identity(&self) -> [u32; 2] {
        [1, 0]
    }

    fn mul(&self, a: &[u32; 2], b: &[u32; 2]) -> [u32; 2] {
        self.ring.ext_mul(self.z, *a, *b)
    }

    fn inv(&self, a: &[u32; 2]) -> [u32; 2] {
        self.ring.ext_conj(*a)
    }
}

/// embed(a + bα) = [[a, bz], [b, a]].
pub fn embed_res(r: &ResRing, z: u32, l: [u32; 2]) -> [u32; 4] {
    [l[0], r.mul(l[1], z), l[1], l[0]]
}

/// SL₂(Z/p^k) ⋊ E¹ with λ acting by conjugation with embed(μ̄), μ̄/μ = λ.
#[derive(Clone, Debug)]
pub struct Sl2PairLaw {
    pub ring: ResRing,
    pub z: u32,
    // indexed by a·p^k + b: (embed(μ̄), N(μ)⁻¹)
    sigma: Vec<([u32; 4], u32)>,
}

impl Sl2PairLaw {
    pub fn new(ring: ResRing, z: u32) -> Self {
        let m = ring.m as usize;
        let mut sigma = vec![([1, 0, 0, 1], 1); m * m];
        for a in 0..ring.m {
            for b in 0..ring.m {
                let l = [a, b];
                let onep = [ring.add(1, a), b];
                let mu = if ring.is_unit(ring.ext_norm(z, onep)) {
                    onep
                } else {
                    // α(1 − λ)
                    ring.ext_mul(z, [0, 1], [ring.sub(1, a), ring.neg(b)])
                };
                let n = ring.ext_norm(z, mu);
                let Some(ninv) = ring.inv(n) else { continue };
                sigma[(l[0] as usize) * m + l[1] as usize] =
                    (embed_res(&ring, z, ring.ext_conj(mu)), ninv);
            }
        }
        Sl2PairLaw { ring, z, sigma }
    }

    /// σ_λ(g) = E·g·E⁻¹.
    pub fn sigma(&self, lam: [u32; 2], g: &[u32; 4]) -> [u32; 4] {
        let r = &self.ring;
        let (e, ninv) = &self.sigma[lam[0] as usize * r.m as usize + lam[1] as usize];
        let adj = [e[3], r.neg(e[1]), r.neg(e[2]), e[0]];
        let x = r.mat_mul(&r.mat_mul(e, g), &adj);
        x.map(|v| r.mul(v, *ninv))
    }

    pub fn split(x: &[u32; 6]) -> ([u32; 4], [u32; 2]) {
        ([x[0], x[1], x[2], x[3]], [x[4], x[5]])
    }

    pub fn join(g: [u32; 4], l: [u32; 2]) -> [u32; 6] {
        [g[0], g[1], g[2], g[3], l[0], l[1]]
    }
}

impl GroupLaw for Sl2PairLaw {
    type Elem = [u32; 6];

    fn identity(&self) -> [u32; 6] {
        [1, 0, 0, 1, 1, 0]
    }

    fn mul(&self, a: &[u32; 6], b: &[u32; 6]) -> [u32; 6] {
        let (g1, l1) = Self::split(a);
        let (g2, l2) = Self::split(b);
        let g = self.ring.mat_mul(&g1, &self.sigma(l1, &g2));
        Self::join(g, self.ring.ext_mul(self.z, l1, l2))
    }

    fn inv(&self, a: &[u32; 6]) -> [u32; 6] {
        let r = &self.ring;
        let (g, l) = Self::split(a);
        let li = r.ext_conj(l);
        let gi = [g[3], r.neg(g[1]), r.neg(g[2]), g[0]];
        Self::join(self.sigma(li, &gi), li)
    }
}

/// D¹ modulo P_D^k: h = a + cδ with a mod p^⌈k/2⌉ and c mod p^⌊k/2⌋, stored as [a0, a1, c0, c1].
#[derive(Clone, Debug)]
pub struct D1Law {
    pub k: u32,
    pub z: u32,
    /// Ring for the a-part; c-parts are reduced into `rc`.
    pub ra: ResRing,
    pub rc: ResRing,
}

impl D1Law {
    pub fn new(p: u32, z: u32, k: u32) -> Result<Self> {
        Ok(D1Law {
            k,
            z,
            ra: ResRing::new(p, k.div_ceil(2))?,
            rc: ResRing::new(p, k / 2)?,
        })
    }

    pub fn p(&self) -> u32 {
        self.ra.p
    }

    fn rc_red(&self, x: [u32; 2]) -> [u32; 2] {
        [x[0] % self.rc.m, x[1] % self.rc.m]
    }

    /// Reduce an element known modulo a finer level.
    pub fn reduce(&self, x: &[u32; 4]) -> [u32; 4] {
        [
            x[0] % self.ra.m,
            x[1] % self.ra.m,
            x[2] % self.rc.m,
            x[3] % self.rc.m,
        ]
    }

    /// Level of h − 1 in the P_D-adic filtration, capped at k.
    pub fn level(&self, x: &[u32; 4]) -> u32 {
        let va = self.ra.val(self.ra.sub(x[0], 1)).min(self.ra.val(x[1]));
        let vc = self.rc.val(x[2]).min(self.rc.val(x[3]));
        let da = if va >= self.ra.k { self.k } else { 2 * va };
        let dc = if vc >= self.rc.k { self.k } else { 2 * vc + 1 };
        da.min(dc).min(self.k)
    }

    /// σ′_λ(a + cδ) = a + λ²cδ, λ given modulo p^⌊k/2⌋ or finer.
    pub fn sigma_prime(&self, lam: [u32; 2], h: &[u32; 4]) -> [u32; 4] {
        let r = &self.ra;
        let l = [lam[0] % r.m, lam[1] % r.m];
        let l2 = r.ext_mul(self.z, l, l);
        let c = self.rc_red(r.ext_mul(self.z, l2, [h[2], h[3]]));
        [h[0], h[1], c[0], c[1]]
    }
}

impl GroupLaw for D1Law {
    type Elem = [u32; 4];

    fn identity(&self) -> [u32; 4] {
        [1, 0, 0, 0]
    }

    fn mul(&self, x: &[u32; 4], y: &[u32; 4]) -> [u32; 4] {
        // (a1 + c1δ)(a2 + c2δ) = (a1a2 + ϖc1c̄2) + (a1c2 + c1ā2)δ
        let r = &self.ra;
        let (a1, c1, a2, c2) = ([x[0], x[1]], [x[2], x[3]], [y[0], y[1]], [y[2], y[3]]);
        let pi = self.p();
        let cc = r.ext_mul(self.z, c1, r.ext_conj(c2));
        let aa = r.ext_mul(self.z, a1, a2);
        let a = [
            r.add(aa[0], r.mul(pi, cc[0])),
            r.add(aa[1], r.mul(pi, cc[1])),
        ];
        let s = r.ext_mul(self.z, a1, c2);
        let t = r.ext_mul(self.z, c1, r.ext_conj(a2));
        let c = self.rc_red([r.add(s[0], t[0]), r.add(s[1], t[1])]);
        [a[0], a[1], c[0], c[1]]
    }

    fn inv(&self, x: &[u32; 4]) -> [u32; 4] {
        // τ(a + cδ) = ā − cδ, and N = 1
        let a = self.ra.ext_conj([x[0], x[1]]);
        [a[0], a[1], self.rc.neg(x[2]), self.rc.neg(x[3])]
    }
}

/// (D¹/D¹_k) ⋊ E¹, λ stored modulo p^⌈k/2⌉.
#[derive(Clone, Debug)]
pub struct D1PairLaw {
    pub d: D1Law,
}

impl D1PairLaw {
    pub fn split(x: &[u32; 6]) -> ([u32; 4], [u32; 2]) {
        ([x[0], x[1], x[2], x[3]], [x[4], x[5]])
    }

    pub fn join(h: [u32; 4], l: [u32; 2]) -> [u32; 6] {
        [h[0], h[1], h[2], h[3], l[0], l[1]]
    }
}

impl GroupLaw for D1PairLaw {
    type Elem = [u32; 6];

    fn identity(&self) -> [u32; 6] {
        [1, 0, 0, 0, 1, 0]
    }

    fn mul(&self, a: &[u32; 6], b: &[u32; 6]) -> [u32; 6] {
        let (h1, l1) = Self::split(a);
        let (h2, l2) = Self::split(b);
        let h = self.d.mul(&h1, &self.d.sigma_prime(l1, &h2));
        Self::join(h, self.d.ra.ext_mul(self.d.z, l1, l2))
    }

    fn inv(&self, a: &[u32; 6]) -> [u32; 6] {
        let (h, l) = Self::split(a);
        let li = self.d.ra.ext_conj(l);
        Self::join(self.d.sigma_prime(li, &self.d.inv(&h)), li)
    }
}

/// SL₂(Z/p^k) elements with diagonal ≡ 1 mod p^diag and off-diagonal ≡ 0 mod p^off.
pub fn sl2_congruence(r: &ResRing, diag: u32, off: u32) -> Vec<[u32; 4]> {
    let offs: Vec<u32> = if off >= r.k {
        vec![0]
    } else {
        (0..r.m).step_by(r.p_pow(off) as usize).collect()
    };
    let diag_ok = |x: u32| {
        if diag >= r.k {
            x == 1
        } else {
            r.sub(x, 1).is_multiple_of(r.p_pow(diag))
        }
    };
    let mut out = Vec::new();
    for a in (0..r.m).filter(|&a| diag_ok(a)) {
        match r.inv(a) {
            Some(ai) => {
                for &b in &offs {
                    for &c in &offs {
                        let d = r.mul(r.add(1, r.mul(b, c)), ai);
                        if diag_ok(d) {
                            out.push([a, b, c, d]);
                        }
                    }
                }
            }
            None => {
                // a non-unit forces b to be a unit; solve for c given d
                for &b in &offs {
                    let Some(bi) = r.inv(b) else { continue };
                    for d in (0..r.m).filter(|&d| diag_ok(d)) {
                        out.push([a, b, r.mul(r.sub(r.mul(a, d), 1), bi), d]);
                    }
                }
            }
        }
    }
    out.sort_unstable();
    out
}

/// SL₂^m(Z/p^k): x ≡ 1 mod p^m.
pub fn sl2_level(r: &ResRing, m: u32) -> Vec<[u32; 4]> {
    sl2_congruence(r, m, m)
}

/// Diagonal ≡ 1 mod p^{m−1}, off-diagonal ≡ 0 mod p^m.
pub fn sl2_level_minus(r: &ResRing, m: u32) -> Vec<[u32; 4]> {
    sl2_congruence(r, m.saturating_sub(1), m)
}

/// Which part of E¹ to enumerate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum E1Part {
    All,
    /// ±(1 + P_E) ∩ E¹, i.e. b ≡ 0 mod p.
    Zero,
    /// λ ≡ 1 mod p^j.
    Level(u32),
}

/// Elements of E¹ mod p^k: norm one, solutions lifted by brute force over (a, b).
pub fn e1_elements(r: &ResRing, z: u32, part: E1Part) -> Vec<[u32; 2]> {
    let mut out = Vec::new();
    for a in 0..r.m {
        for b in 0..r.m {
            if r.ext_norm(z, [a, b]) != 1 {
                continue;
            }
            let keep = match part {
                E1Part::All => true,
                E1Part::Zero => b % r.p == 0,
                E1Part::Level(j) => {
                    let pj = r.p_pow(j);
                    if pj == 0 {
                        a == 1 && b == 0
                    } else {
                        r.sub(a, 1).is_multiple_of(pj) && b % pj == 0
                    }
                }
            };
            if keep {
                out.push([a, b]);
            }
        }
    }
    out
}

/// D¹ modulo P_D^k restricted to level ≥ j.
pub fn d1_elements(law: &D1Law, j: u32) -> Vec<[u32; 4]> {
    let (ra, rc, z) = (&law.ra, &law.rc, law.z);
    let p = law.p() as u64;
    let mut out = Vec::new();
    for a0 in 0..ra.m {
        for a1 in 0..ra.m {
            for c0 in 0..rc.m {
                for c1 in 0..rc.m {
                    // N(a + cδ) = N(a) − ϖN(c) ≡ 1 mod p^⌈k/2⌉
                    let na = ra.ext_norm(z, [a0, a1]) as u64;
                    let nc = ra.ext_norm(z, [c0, c1]) as u64;
                    let n = (na + ra.m as u64 - (p * nc) % ra.m as u64) % ra.m as u64;
                    let x = [a0, a1, c0, c1];
                    if n == 1 && law.level(&x) >= j {
                        out.push(x);
                    }
                }
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// |SL₂(Z/p^k)| = p^{3k}(1 − p⁻²).
pub fn sl2_order(p: u64, k: u32) -> u64 {
    p.pow(3 * k - 2) * (p * p - 1)
}

/// |D¹/D¹_k| = (q + 1)·∏_{j=1}^{k−1} (q² for odd j, q for even j).
pub fn d1_quotient_order(q: u64, k: u32) -> u64 {
    if k == 0 {
        return 1;
    }
    (1..k).fold(q + 1, |acc, j| acc * if j % 2 == 1 { q * q } else { q })
}
