//! The homology side: loop homology as functionals on HH, the loop product
//! as the transpose of Dlp, Δ as the transpose of s, and the string bracket
//! table as the transpose of Dsb.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::{Pipeline, TensorClass};
use crate::algebra::{q, Element, Q};
use crate::linalg::SVec;
use crate::{Error, Result};

/// A functional on H^k(𝓛), in the dual of the homology basis.
#[derive(Clone, Debug, PartialEq)]
pub struct LoopClass {
    pub hh_degree: i64,
    pub coords: BTreeMap<usize, Q>,
}

impl LoopClass {
    pub fn zero(k: i64) -> Self {
        LoopClass { hh_degree: k, coords: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.values().all(|c| c.is_zero())
    }

    pub fn eval(&self, v: &SVec) -> Q {
        v.iter().filter_map(|(i, c)| self.coords.get(i).map(|x| x * c)).fold(Q::zero(), |a, b| a + b)
    }

    pub fn scale(&self, c: &Q) -> Self {
        let coords = self.coords.iter().map(|(i, x)| (*i, x * c)).filter(|(_, x)| !x.is_zero()).collect();
        LoopClass { hh_degree: self.hh_degree, coords }
    }

    /// c with c·other == self, if self is a multiple of other.
    pub fn ratio(&self, other: &LoopClass) -> Option<Q> {
        if self.hh_degree != other.hh_degree || other.is_zero() {
            return None;
        }
        let (i, x) = other.coords.iter().find(|(_, x)| !x.is_zero())?;
        let c = self.coords.get(i).cloned().unwrap_or_else(Q::zero) / x;
        (other.scale(&c) == *self).then_some(c)
    }
}

impl Pipeline {
    /// The dual basis functional of the class of `e`, which must be a basis class.
    pub fn dual_of(&self, e: &Element) -> Result<LoopClass> {
        let (k, v) = self.hh_coords(e)?;
        match v.as_slice() {
            [(i, c)] if c == &q(1) => Ok(LoopClass { hh_degree: k, coords: BTreeMap::from([(*i, c.clone())]) }),
            _ => Err(Error::Domain("element is not a homology basis class".into())),
        }
    }

    /// (a•b)(w) = (a⊗b)(Dlp w), a functional on H^{|a|+|b|−d}.
    pub fn loop_product(&self, a: &LoopClass, b: &LoopClass) -> Result<LoopClass> {
        let d = self.shriek.degree;
        let k = a.hh_degree + b.hh_degree - d;
        let mut out = LoopClass::zero(k);
        for (i, w) in self.hh_deg(k)?.reps().iter().enumerate() {
            let mut val = Q::zero();
            for ((da, ia, db, ib), c) in self.dlp(w)? {
                if da == a.hh_degree && db == b.hh_degree {
                    if let (Some(x), Some(y)) = (a.coords.get(&ia), b.coords.get(&ib)) {
                        val += c * x * y;
                    }
                }
            }
            if !val.is_zero() {
                out.coords.insert(i, val);
            }
        }
        Ok(out)
    }

    /// (Δa)(w) = a(s w), a functional on H^{|a|+1}.
    pub fn loop_delta(&self, a: &LoopClass) -> Result<LoopClass> {
        let k = a.hh_degree + 1;
        let mut out = LoopClass::zero(k);
        for (i, w) in self.hh_deg(k)?.reps().iter().enumerate() {
            let sw = self.lm.s_apply(w);
            let val = if sw.is_zero() { Q::zero() } else { a.eval(&self.hh_coords(&sw)?.1) };
            if !val.is_zero() {
                out.coords.insert(i, val);
            }
        }
        Ok(out)
    }

    /// [a₁,…,a_n] = (−1)^{Σ_k (n−k)|a_k|} Δ(a₁•⋯•a_n) on ker Δ̃, with |a| the HH
    /// degree of the functional.
    pub fn loop_gravity(&self, args: &[LoopClass]) -> Result<LoopClass> {
        if args.len() < 2 {
            return Err(Error::Domain("a gravity bracket needs at least two arguments".into()));
        }
        let n = args.len();
        let mut prod = args[0].clone();
        for a in &args[1..] {
            prod = self.loop_product(&prod, a)?;
        }
        let exp: i64 = args.iter().enumerate().map(|(k, a)| (n - 1 - k) as i64 * a.hh_degree).sum();
        let out = self.loop_delta(&prod)?;
        Ok(if exp.rem_euclid(2) == 1 { out.scale(&-q(1)) } else { out })
    }

    /// M(α) = α∘β, the functional on H^{n+1}(𝓛) induced by a functional α on
    /// H^n(𝓔) given in the dual of the HC⁻ basis.
    pub fn beta_dual(&self, n: i64, alpha: &BTreeMap<usize, Q>) -> Result<LoopClass> {
        let b = self.beta(n + 1)?;
        let mut out = LoopClass::zero(n + 1);
        for (i, col) in b.columns.iter().enumerate() {
            let val: Q = col.iter().filter_map(|(k, x)| alpha.get(k).map(|a| a * x)).fold(Q::zero(), |a, b| a + b);
            if !val.is_zero() {
                out.coords.insert(i, val);
            }
        }
        Ok(out)
    }

    /// The bracket on the dual of HC⁻ with HC⁻ source degrees up to `max`:
    /// [e_{a,i}^∨, e_{b,j}^∨] = Σ_{n,k} Dsb(e_{n,k})[a,i ⊗ b,j] e_{n,k}^∨.
    pub fn string_bracket_table(&self, max: i64) -> Result<BracketTable> {
        let mut entries: BracketEntries = BTreeMap::new();
        for n in 0..=max {
            for (k, c) in self.hc_deg(n)?.reps().iter().enumerate() {
                for ((da, ia, db, ib), x) in self.dsb(c)? {
                    entries.entry(((da, ia), (db, ib))).or_default().insert((n, k), x);
                }
            }
        }
        Ok(BracketTable { max, dim: self.shriek.degree, entries })
    }
}

pub type BracketEntries = BTreeMap<((i64, usize), (i64, usize)), BTreeMap<(i64, usize), Q>>;

/// Nonzero brackets of dual basis classes, keyed by the argument pair.
#[derive(Clone, Debug)]
pub struct BracketTable {
    pub max: i64,
    /// Dimension of the manifold; the Lie grading of a dual class is |a| + dim.
    pub dim: i64,
    pub entries: BracketEntries,
}

impl BracketTable {
    pub fn is_zero(&self) -> bool {
        self.entries.values().all(|v| v.values().all(|c| c.is_zero()))
    }

    /// Pairs violating [a,b] = −(−1)^{(|a|+d)(|b|+d)}[b,a], with degrees those of
    /// the HC⁻ classes the arguments are dual to.
    pub fn antisymmetry_defects(&self) -> Vec<((i64, usize), (i64, usize))> {
        let d = self.dim;
        let mut bad = vec![];
        for ((a, b), v) in &self.entries {
            let sign = if (a.0 + d) * (b.0 + d) % 2 != 0 { q(1) } else { -q(1) };
            let w = self.entries.get(&(*b, *a));
            let ok = v.iter().all(|(k, x)| w.and_then(|w| w.get(k)) == Some(&(&sign * x)))
                && w.map_or(true, |w| w.keys().all(|k| v.contains_key(k)));
            if !ok {
                bad.push((*a, *b));
            }
        }
        bad
    }
}

/// Defect of graded antisymmetry of a Künneth tensor in the Lie grading
/// |a| + d, for a manifold of dimension d.
pub fn tensor_antisymmetry_defect(t: &TensorClass, d: i64) -> TensorClass {
    let mut out = t.clone();
    for ((da, i, db, j), c) in t {
        let sign = if (da + d) * (db + d) % 2 != 0 { -c.clone() } else { c.clone() };
        let e = out.entry((*db, *j, *da, *i)).or_insert_with(Q::zero);
        *e += sign;
        if e.is_zero() {
            out.remove(&(*db, *j, *da, *i));
        }
    }
    out
}
