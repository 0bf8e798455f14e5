//! The loop cohomology of BG as a BV algebra, and the dual string cobracket
//! with its gravity extension on ℋ = (HH̃/Im Δ) ⊕ ℚ[u].
//!
//! ℍ*(LBG) = ℚ[y₁..y_N] ⊗ ∧(x₁^∨..x_N^∨) with |y_i| = 2m_i, |x_i^∨| = −(2m_i − 1).
//! A cokernel class of a monomial of ℍ-degree k has ℋ-degree k − 2, and u^l
//! has ℋ-degree 2l − dim G − 1.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::algebra::{mul, q, Algebra, Element, Generator, Mono, Tag, Q};
use crate::linalg::{Echelon, SVec};
use crate::model_io::format_element;
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct BgAlgebra {
    pub m: Vec<u32>,
    pub alg: Algebra,
}

impl BgAlgebra {
    /// From the exponents m_i of H*(BG) = ℚ[y_i], |y_i| = 2m_i.
    pub fn new(m: &[u32]) -> Result<Self> {
        if m.is_empty() || m.contains(&0) {
            return Err(Error::Domain("BG degrees must be a nonempty list of positive m_i".into()));
        }
        let mut gens: Vec<Generator> =
            m.iter().enumerate().map(|(i, &k)| Generator::new(&format!("y{}", i + 1), 2 * k as i32, Tag::Base)).collect();
        gens.extend(m.iter().enumerate().map(|(i, &k)| Generator::new(&format!("x{}v", i + 1), 1 - 2 * k as i32, Tag::Base)));
        Ok(BgAlgebra { m: m.to_vec(), alg: Algebra::new(gens) })
    }

    pub fn rank(&self) -> usize {
        self.m.len()
    }

    pub fn dim_g(&self) -> i64 {
        self.m.iter().map(|&k| 2 * k as i64 - 1).sum()
    }

    pub fn y(&self, i: usize) -> usize {
        i
    }

    pub fn xv(&self, i: usize) -> usize {
        self.rank() + i
    }

    /// y^k times x_{i₁}^∨⋯x_{i_s}^∨ in the order given.
    pub fn mono(&self, k: &[u16], xs: &[usize]) -> Element {
        let n = self.alg.len();
        let mut e = vec![0u16; n];
        e[..k.len()].copy_from_slice(k);
        let mut out = Element::mono(Mono(e), Q::one());
        for &i in xs {
            out = mul(&self.alg, &out, &Element::mono(Mono::gen(n, self.xv(i)), Q::one()));
        }
        out
    }

    /// x₁^∨⋯x_N^∨, the image of u⁰ under π.
    pub fn top(&self) -> Element {
        self.mono(&[], &(0..self.rank()).collect::<Vec<_>>())
    }

    pub fn degree(&self, m: &Mono) -> i64 {
        self.alg.degree(m)
    }

    /// Δ(y^k x_{i₁}^∨⋯x_{i_s}^∨) = Σ_j (−1)^{d_j} k_{i_j} y^{k−e_{i_j}} x_{i₁}^∨⋯x̂_{i_j}^∨⋯x_{i_s}^∨.
    pub fn delta_mono(&self, m: &Mono) -> Element {
        let n = self.rank();
        let mut out = Element::zero();
        let mut before = 0usize;
        for i in 0..n {
            if m.0[self.xv(i)] == 0 {
                continue;
            }
            let k = m.0[self.y(i)];
            if k > 0 {
                let mut e = m.0.clone();
                e[self.y(i)] -= 1;
                e[self.xv(i)] = 0;
                let c = if before % 2 == 0 { q(k as i64) } else { -q(k as i64) };
                out.add_term(Mono(e), c);
            }
            before += 1;
        }
        out
    }

    pub fn delta(&self, a: &Element) -> Element {
        let mut out = Element::zero();
        for (m, c) in &a.terms {
            out.add_scaled(&self.delta_mono(m), c);
        }
        out
    }

    pub fn odot(&self, a: &Element, b: &Element) -> Element {
        mul(&self.alg, a, b)
    }

    /// Δ preserves the weight k_i − [x_i^∨ present] in each index.
    fn weight(&self, m: &Mono) -> Vec<i64> {
        (0..self.rank()).map(|i| m.0[self.y(i)] as i64 - m.0[self.xv(i)] as i64).collect()
    }

    fn weight_space(&self, w: &[i64]) -> Vec<Mono> {
        let n = self.rank();
        let mut out = vec![];
        for mask in 0u32..(1 << n) {
            let mut e = vec![0u16; 2 * n];
            let mut ok = true;
            for i in 0..n {
                let x = (mask >> i) & 1;
                let k = w[i] + x as i64;
                if k < 0 {
                    ok = false;
                    break;
                }
                e[self.y(i)] = k as u16;
                e[self.xv(i)] = x as u16;
            }
            if ok {
                out.push(Mono(e));
            }
        }
        out.sort();
        out
    }

    /// Canonical representative of a modulo Im Δ, with the constant part
    /// (the multiple of x₁^∨⋯x_N^∨) dropped.
    pub fn coker_reduce(&self, a: &Element) -> Element {
        let mut by_weight: BTreeMap<Vec<i64>, Element> = BTreeMap::new();
        for (m, c) in &a.terms {
            by_weight.entry(self.weight(m)).or_default().add_term(m.clone(), c.clone());
        }
        let mut out = Element::zero();
        for (w, part) in by_weight {
            if w.iter().all(|&x| x == -1) {
                continue;
            }
            let basis = self.weight_space(&w);
            let index = |m: &Mono| basis.iter().position(|b| b == m).expect("monomial in its weight space");
            let to_vec = |e: &Element| -> SVec {
                let mut v: SVec = e.terms.iter().map(|(m, c)| (index(m), c.clone())).collect();
                v.sort_by_key(|t| t.0);
                v
            };
            let mut ech = Echelon::new();
            for b in &basis {
                ech.insert(&to_vec(&self.delta_mono(b)), &Vec::new());
            }
            let (r, _) = ech.reduce(&to_vec(&part), &Vec::new());
            for (i, c) in r {
                out.add_term(basis[i].clone(), c);
            }
        }
        out
    }

    pub fn h_degree(&self, c: &BgClass) -> Option<i64> {
        let mut degs = c.coker.terms.keys().map(|m| self.degree(m) - 2);
        let mut udegs = c.u.keys().map(|&l| 2 * l as i64 - self.dim_g() - 1);
        let first = degs.next().or_else(|| udegs.next())?;
        degs.chain(udegs).all(|d| d == first).then_some(first)
    }

    pub fn coker(&self, a: &Element) -> BgClass {
        BgClass { coker: self.coker_reduce(a), u: BTreeMap::new() }
    }

    pub fn u(&self, l: u32) -> BgClass {
        BgClass { coker: Element::zero(), u: BTreeMap::from([(l, Q::one())]) }
    }

    /// π: Coker a ↦ Δa, u⁰ ↦ x₁^∨⋯x_N^∨, u^l ↦ 0 for l ≥ 1.
    pub fn pi(&self, c: &BgClass) -> Element {
        let mut out = self.delta(&c.coker);
        if let Some(c0) = c.u.get(&0) {
            out.add_scaled(&self.top(), c0);
        }
        out
    }

    /// [a, b] = (−1)^{|a|} Coker(π(a) ⊙ π(b)).
    pub fn bracket(&self, a: &BgClass, b: &BgClass) -> Result<BgClass> {
        self.gravity(&[a.clone(), b.clone()])
    }

    /// [a₁,…,a_n] = (−1)^{Σ_k (n−k)|a_k|} Coker(π(a₁) ⊙ ⋯ ⊙ π(a_n)).
    pub fn gravity(&self, args: &[BgClass]) -> Result<BgClass> {
        if args.len() < 2 {
            return Err(Error::Domain("a gravity bracket needs at least two arguments".into()));
        }
        let n = args.len();
        let mut exp = 0i64;
        let mut prod = Element::one(&self.alg);
        for (k, a) in args.iter().enumerate() {
            if a.is_zero() {
                return Ok(BgClass::zero());
            }
            let d = self.h_degree(a).ok_or_else(|| Error::Domain("bracket argument is not homogeneous".into()))?;
            exp += (n - 1 - k) as i64 * d;
            prod = self.odot(&prod, &self.pi(a));
        }
        let out = self.coker(&prod);
        Ok(if exp.rem_euclid(2) == 1 { out.neg() } else { out })
    }

    pub fn format(&self, c: &BgClass) -> String {
        let mut parts = vec![];
        if !c.coker.is_zero() {
            parts.push(format!("[{}]", format_element(&self.alg, &c.coker)));
        }
        for (l, x) in &c.u {
            parts.push(format!("{x}*u^{l}"));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// An element of ℋ: a cokernel class (stored in normal form) plus a ℚ[u] part.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct BgClass {
    pub coker: Element,
    pub u: BTreeMap<u32, Q>,
}

impl BgClass {
    pub fn zero() -> Self {
        BgClass::default()
    }

    pub fn is_zero(&self) -> bool {
        self.coker.is_zero() && self.u.values().all(|c| c.is_zero())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Q::one())
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut u = BTreeMap::new();
        for (l, x) in &self.u {
            let y = x * c;
            if !y.is_zero() {
                u.insert(*l, y);
            }
        }
        BgClass { coker: self.coker.scale(c), u }
    }

    pub fn plus(&self, other: &BgClass) -> Self {
        let mut u = self.u.clone();
        for (l, x) in &other.u {
            let e = u.entry(*l).or_insert_with(Q::zero);
            *e += x;
            if e.is_zero() {
                u.remove(l);
            }
        }
        BgClass { coker: self.coker.plus(&other.coker), u }
    }
}
