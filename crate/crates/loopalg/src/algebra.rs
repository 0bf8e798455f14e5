//! Free graded-commutative algebras over the rationals.
//!
//! Generators carry a cohomological degree; odd generators anticommute and
//! square to zero. A monomial is an exponent vector in generator order, and
//! every sign in this crate is produced by [`transpositions`].

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::Error;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tag {
    Base,
    Bar,
    U,
    E,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    Plain,
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub degree: i32,
    pub tag: Tag,
    pub slot: Slot,
}

impl Generator {
    pub fn new(name: &str, degree: i32, tag: Tag) -> Self {
        Generator { name: name.to_string(), degree, tag, slot: Slot::Plain }
    }

    pub fn odd(&self) -> bool {
        self.degree.rem_euclid(2) == 1
    }

    /// Symbol as written in the element grammar: bars get a trailing prime.
    pub fn symbol(&self) -> String {
        match self.tag {
            Tag::Bar => format!("{}'", self.name),
            _ => self.name.clone(),
        }
    }
}

/// Exponent vector. Ordered so that higher powers of earlier generators come
/// first, which is the canonical print and basis order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mono(pub Vec<u16>);

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        other.0.cmp(&self.0)
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Mono {
    pub fn one(n: usize) -> Self {
        Mono(vec![0; n])
    }

    pub fn gen(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        Mono(v)
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

#[derive(Clone, Debug)]
pub struct Algebra {
    pub gens: Vec<Generator>,
    odd: Vec<bool>,
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        self.gens == other.gens
    }
}

impl Algebra {
    pub fn new(gens: Vec<Generator>) -> Self {
        let odd = gens.iter().map(|g| g.odd()).collect();
        Algebra { gens, odd }
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_odd(&self, i: usize) -> bool {
        self.odd[i]
    }

    pub fn find(&self, name: &str, tag: Tag, slot: Slot) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name && g.tag == tag && g.slot == slot)
    }

    pub fn degree(&self, m: &Mono) -> i64 {
        m.0.iter().zip(&self.gens).map(|(&e, g)| e as i64 * g.degree as i64).sum()
    }

    /// Parity of the degree of `m`.
    pub fn parity(&self, m: &Mono) -> bool {
        let mut p = false;
        for (i, &e) in m.0.iter().enumerate() {
            if self.odd[i] && e % 2 == 1 {
                p = !p;
            }
        }
        p
    }

    pub fn count(&self, m: &Mono, tag: Tag) -> i64 {
        m.0.iter().zip(&self.gens).filter(|(_, g)| g.tag == tag).map(|(&e, _)| e as i64).sum()
    }

    pub fn word_length(&self, m: &Mono) -> i64 {
        self.count(m, Tag::Bar)
    }

    /// Product of two monomials with its Koszul sign, or `None` if an odd
    /// generator would appear twice.
    pub fn mono_mul(&self, a: &Mono, b: &Mono) -> Option<(bool, Mono)> {
        let mut out = Vec::with_capacity(a.0.len());
        for i in 0..a.0.len() {
            let e = a.0[i] + b.0[i];
            if self.odd[i] && e > 1 {
                return None;
            }
            out.push(e);
        }
        Some((transpositions(&self.odd, a, b) % 2 == 1, Mono(out)))
    }

    pub fn check(&self, e: &Element) -> Result<(), Error> {
        for m in e.terms.keys() {
            if m.0.len() != self.len() {
                return Err(Error::AlgebraMismatch);
            }
        }
        Ok(())
    }
}

/// Number of odd transpositions needed to bring `a * b` into canonical order:
/// the pairs (odd generator i in a, odd generator j in b) with i > j.
pub fn transpositions(odd: &[bool], a: &Mono, b: &Mono) -> usize {
    let mut count = 0;
    let mut later = 0;
    for i in (0..a.0.len()).rev() {
        if odd[i] {
            if b.0[i] % 2 == 1 {
                count += later;
            }
            if a.0[i] % 2 == 1 {
                later += 1;
            }
        }
    }
    count
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Element {
    pub terms: BTreeMap<Mono, Q>,
}

impl Element {
    pub fn zero() -> Self {
        Element { terms: BTreeMap::new() }
    }

    pub fn one(alg: &Algebra) -> Self {
        Element::mono(Mono::one(alg.len()), Q::one())
    }

    pub fn mono(m: Mono, c: Q) -> Self {
        let mut e = Element::zero();
        if !c.is_zero() {
            e.terms.insert(m, c);
        }
        e
    }

    pub fn gen(alg: &Algebra, i: usize) -> Self {
        Element::mono(Mono::gen(alg.len(), i), Q::one())
    }

    pub fn scalar(alg: &Algebra, c: Q) -> Self {
        Element::mono(Mono::one(alg.len()), c)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Mono, c: Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Element, c: &Q) {
        if c.is_zero() {
            return;
        }
        for (m, v) in &other.terms {
            self.add_term(m.clone(), v * c);
        }
    }

    pub fn plus(&self, other: &Element) -> Element {
        let mut r = self.clone();
        r.add_scaled(other, &Q::one());
        r
    }

    pub fn minus(&self, other: &Element) -> Element {
        let mut r = self.clone();
        r.add_scaled(other, &-Q::one());
        r
    }

    pub fn scale(&self, c: &Q) -> Element {
        let mut r = Element::zero();
        r.add_scaled(self, c);
        r
    }

    pub fn neg(&self) -> Element {
        self.scale(&-Q::one())
    }

    pub fn coeff(&self, m: &Mono) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    /// Common degree of all terms, `None` for zero or inhomogeneous elements.
    pub fn degree(&self, alg: &Algebra) -> Option<i64> {
        let mut it = self.terms.keys().map(|m| alg.degree(m));
        let d = it.next()?;
        if it.all(|e| e == d) {
            Some(d)
        } else {
            None
        }
    }

    pub fn is_homogeneous(&self, alg: &Algebra) -> bool {
        self.is_zero() || self.degree(alg).is_some()
    }

    pub fn max_abs_coeff(&self) -> Q {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_else(Q::zero)
    }
}

pub fn multiply(alg: &Algebra, a: &Element, b: &Element) -> Result<Element, Error> {
    alg.check(a)?;
    alg.check(b)?;
    Ok(mul(alg, a, b))
}

/// Unchecked product; callers guarantee both operands live in `alg`.
pub fn mul(alg: &Algebra, a: &Element, b: &Element) -> Element {
    let mut r = Element::zero();
    for (ma, ca) in &a.terms {
        for (mb, cb) in &b.terms {
            if let Some((neg, m)) = alg.mono_mul(ma, mb) {
                let c = ca * cb;
                r.add_term(m, if neg { -c } else { c });
            }
        }
    }
    r
}

pub fn mul_mono(alg: &Algebra, a: &Mono, b: &Element) -> Element {
    let mut r = Element::zero();
    for (mb, cb) in &b.terms {
        if let Some((neg, m)) = alg.mono_mul(a, mb) {
            r.add_term(m, if neg { -cb.clone() } else { cb.clone() });
        }
    }
    r
}

pub fn power(alg: &Algebra, a: &Element, k: u32) -> Element {
    let mut r = Element::one(alg);
    for _ in 0..k {
        r = mul(alg, &r, a);
    }
    r
}

/// A derivation given by its values on generators. Missing values are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct Derivation {
    pub degree: i32,
    pub values: Vec<Element>,
}

impl Derivation {
    pub fn zero(alg: &Algebra, degree: i32) -> Self {
        Derivation { degree, values: vec![Element::zero(); alg.len()] }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    pub fn apply_mono(&self, alg: &Algebra, m: &Mono) -> Element {
        let odd_theta = self.degree.rem_euclid(2) == 1;
        let mut r = Element::zero();
        let mut prefix_odd = false;
        for i in 0..m.0.len() {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            if !self.values[i].is_zero() {
                let mut rest = m.clone();
                rest.0[i] -= 1;
                // split rest into generators before i and from i on
                let mut pre = Mono::one(m.0.len());
                let mut post = Mono::one(m.0.len());
                for j in 0..m.0.len() {
                    if j < i {
                        pre.0[j] = rest.0[j];
                    } else {
                        post.0[j] = rest.0[j];
                    }
                }
                let neg = odd_theta && prefix_odd;
                let mut c = Q::from_integer(BigInt::from(e));
                if neg {
                    c = -c;
                }
                let mid = mul_mono(alg, &pre, &self.values[i]);
                let tail = Element::mono(post, c);
                r.add_scaled(&mul(alg, &mid, &tail), &Q::one());
            }
            if alg.is_odd(i) && e % 2 == 1 {
                prefix_odd = !prefix_odd;
            }
        }
        r
    }

    pub fn apply(&self, alg: &Algebra, a: &Element) -> Element {
        let mut r = Element::zero();
        for (m, c) in &a.terms {
            r.add_scaled(&self.apply_mono(alg, m), c);
        }
        r
    }
}

pub fn apply_derivation(alg: &Algebra, theta: &Derivation, a: &Element) -> Result<Element, Error> {
    alg.check(a)?;
    if theta.values.len() != alg.len() {
        return Err(Error::AlgebraMismatch);
    }
    Ok(theta.apply(alg, a))
}

/// [θ₁, θ₂] = θ₁θ₂ − (−1)^{|θ₁||θ₂|} θ₂θ₁, returned by its generator values.
pub fn graded_commutator(alg: &Algebra, t1: &Derivation, t2: &Derivation) -> Derivation {
    let sign_odd = (t1.degree * t2.degree).rem_euclid(2) == 1;
    let values = (0..alg.len())
        .map(|i| {
            let g = Element::gen(alg, i);
            let a = t1.apply(alg, &t2.apply(alg, &g));
            let b = t2.apply(alg, &t1.apply(alg, &g));
            if sign_odd {
                a.plus(&b)
            } else {
                a.minus(&b)
            }
        })
        .collect();
    Derivation { degree: t1.degree + t2.degree, values }
}

/// An algebra map given by images of generators.
#[derive(Clone, Debug)]
pub struct AlgebraMap {
    pub values: Vec<Element>,
}

impl AlgebraMap {
    pub fn apply_mono(&self, target: &Algebra, m: &Mono) -> Element {
        let mut r = Element::one(target);
        for (i, &e) in m.0.iter().enumerate() {
            for _ in 0..e {
                r = mul(target, &r, &self.values[i]);
                if r.is_zero() {
                    return r;
                }
            }
        }
        r
    }

    pub fn apply(&self, target: &Algebra, a: &Element) -> Element {
        let mut r = Element::zero();
        for (m, c) in &a.terms {
            r.add_scaled(&self.apply_mono(target, m), c);
        }
        r
    }
}

/// A free commutative DGA: generators plus a degree +1 differential.
#[derive(Clone, Debug)]
pub struct Cdga {
    pub name: String,
    pub alg: Algebra,
    pub d: Derivation,
    pub weights: Option<Vec<i64>>,
}

impl Cdga {
    pub fn new(name: &str, alg: Algebra, d: Derivation) -> Result<Self, Error> {
        let c = Cdga { name: name.to_string(), alg, d, weights: None };
        c.check_square_zero()?;
        Ok(c)
    }

    pub fn diff(&self, a: &Element) -> Element {
        self.d.apply(&self.alg, a)
    }

    pub fn check_square_zero(&self) -> Result<(), Error> {
        for i in 0..self.alg.len() {
            let dd = self.diff(&self.diff(&Element::gen(&self.alg, i)));
            if !dd.is_zero() {
                return Err(Error::NotSquareZero {
                    generator: self.alg.gens[i].symbol(),
                    value: crate::model_io::format_element(&self.alg, &dd),
                });
            }
        }
        Ok(())
    }

    pub fn base_indices(&self) -> Vec<usize> {
        (0..self.alg.len()).filter(|&i| self.alg.gens[i].tag == Tag::Base).collect()
    }
}

/// Monomial basis of the degree-n part, canonically ordered.
/// Every generator must have positive degree.
pub fn degree_basis(alg: &Algebra, n: i64) -> Vec<Mono> {
    basis_where(alg, n, |_| true)
}

/// Degree-n monomials satisfying `keep`, canonically ordered.
pub fn basis_where(alg: &Algebra, n: i64, keep: impl Fn(&Mono) -> bool) -> Vec<Mono> {
    assert!(alg.gens.iter().all(|g| g.degree > 0), "degree_basis needs positive degrees");
    let mut out = Vec::new();
    let mut cur = vec![0u16; alg.len()];
    fn rec(alg: &Algebra, i: usize, rem: i64, cur: &mut Vec<u16>, out: &mut Vec<Mono>, keep: &dyn Fn(&Mono) -> bool) {
        if i == alg.len() {
            if rem == 0 {
                let m = Mono(cur.clone());
                if keep(&m) {
                    out.push(m);
                }
            }
            return;
        }
        let d = alg.gens[i].degree as i64;
        let max = if alg.is_odd(i) { 1.min(rem / d) } else { rem / d };
        for e in (0..=max).rev() {
            cur[i] = e as u16;
            rec(alg, i + 1, rem - e * d, cur, out, keep);
        }
        cur[i] = 0;
    }
    if n >= 0 {
        rec(alg, 0, n, &mut cur, &mut out, &keep);
    }
    out
}

/// Coefficients of ∏_{odd}(1+t^d) ∏_{even}(1−t^d)^{-1} up to t^max.
pub fn hilbert_series(alg: &Algebra, max: usize) -> Vec<u128> {
    let mut h = vec![0u128; max + 1];
    h[0] = 1;
    for g in &alg.gens {
        let d = g.degree as usize;
        if g.odd() {
            for n in (d..=max).rev() {
                h[n] += h[n - d];
            }
        } else {
            for n in d..=max {
                h[n] += h[n - d];
            }
        }
    }
    h
}

/// Generators of the two-slot copy of `c`, left slot first.
pub fn tensor_square(c: &Cdga) -> Cdga {
    let n = c.alg.len();
    let mut gens = Vec::with_capacity(2 * n);
    for slot in [Slot::Left, Slot::Right] {
        for g in &c.alg.gens {
            let mut h = g.clone();
            h.slot = slot;
            gens.push(h);
        }
    }
    let alg = Algebra::new(gens);
    let left = AlgebraMap { values: (0..n).map(|i| Element::gen(&alg, i)).collect() };
    let right = AlgebraMap { values: (0..n).map(|i| Element::gen(&alg, n + i)).collect() };
    let mut values = Vec::with_capacity(2 * n);
    for i in 0..n {
        values.push(left.apply(&alg, &c.d.values[i]));
    }
    for i in 0..n {
        values.push(right.apply(&alg, &c.d.values[i]));
    }
    Cdga {
        name: format!("{}^2", c.name),
        alg,
        d: Derivation { degree: c.d.degree, values },
        weights: None,
    }
}

/// The slot embeddings of `c` into its tensor square.
pub fn slot_maps(c: &Cdga, sq: &Cdga) -> (AlgebraMap, AlgebraMap) {
    let n = c.alg.len();
    let left = AlgebraMap { values: (0..n).map(|i| Element::gen(&sq.alg, i)).collect() };
    let right = AlgebraMap { values: (0..n).map(|i| Element::gen(&sq.alg, n + i)).collect() };
    (left, right)
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

pub fn binomial(n: u64, k: u64) -> Q {
    if k > n {
        return Q::zero();
    }
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Q::from_integer(r)
}

pub fn factorial(n: u64) -> Q {
    let mut r = BigInt::one();
    for i in 2..=n {
        r *= BigInt::from(i);
    }
    Q::from_integer(r)
}
