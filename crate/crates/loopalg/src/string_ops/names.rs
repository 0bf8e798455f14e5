//! Named bases of HC⁻ and the closed formulas for the nonformal 11-manifold
//! model dz = xy.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::{Pipeline, TensorClass};
use crate::algebra::{binomial, factorial, q, Element, Mono, Q};
use crate::linalg::{solve, svec_unit, SVec};
use crate::{Error, Result};

/// A basis class of HC⁻.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Named {
    U(u32),
    Zeta(u32, u32),
    Eta(u32, u32),
    Theta(u32),
    /// Basis vector `index` of HC⁻ in `degree`, when no names apply.
    Class(i64, usize),
}

impl Named {
    pub fn degree(&self) -> i64 {
        match *self {
            Named::U(k) => 2 * k as i64,
            Named::Zeta(p, q) => 2 * (p + q) as i64,
            Named::Eta(p, q) => 5 + 2 * (p + q) as i64,
            Named::Theta(r) => 6 + 4 * r as i64,
            Named::Class(n, _) => n,
        }
    }
}

impl fmt::Display for Named {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Named::U(0) => write!(f, "1"),
            Named::U(k) => write!(f, "u^{k}"),
            Named::Zeta(p, q) => write!(f, "zeta_{{{p},{q}}}"),
            Named::Eta(p, q) => write!(f, "eta_{{{p},{q}}}"),
            Named::Theta(r) => write!(f, "theta_{r}"),
            Named::Class(n, i) => write!(f, "[{n}:{i}]"),
        }
    }
}

/// Coefficients on pairs of named classes.
pub type NamedTensor = BTreeMap<(Named, Named), Q>;

/// Whether the base model is x, y of degree 3, z of degree 5, dz = xy.
pub fn is_m11(p: &Pipeline) -> bool {
    let b = &p.lm.base;
    let g = &b.alg.gens;
    if g.len() != 3 || [g[0].degree, g[1].degree, g[2].degree] != [3, 3, 5] {
        return false;
    }
    let xy = Element::mono(Mono(vec![1, 1, 0]), Q::one());
    b.d.values[0].is_zero() && b.d.values[1].is_zero() && b.d.values[2] == xy
}

/// Monomial of 𝓛 (exponents of x, y, z, x̄, ȳ, z̄) for the 11-manifold model.
pub fn l_mono(e: [u16; 6]) -> Element {
    Element::mono(Mono(e.to_vec()), Q::one())
}

fn e_mono(e: [u16; 6], c: Q) -> Element {
    let mut v = e.to_vec();
    v.push(0);
    Element::mono(Mono(v), c)
}

fn inv_fact(p: u32, q: u32) -> Q {
    Q::one() / (factorial(p as u64) * factorial(q as u64))
}

/// The unnormalised cocycle behind η_{p,q} in 𝓛: z x̄^p ȳ^q − x x̄^{p−1} ȳ^q z̄
/// for p ≥ 1 and z ȳ^q − y ȳ^{q−1} z̄ for p = 0.
pub fn eta_cocycle(p: u32, q: u32) -> Element {
    let (p16, q16) = (p as u16, q as u16);
    let a = l_mono([0, 0, 1, p16, q16, 0]);
    let b = if p >= 1 { l_mono([1, 0, 0, p16 - 1, q16, 1]) } else { l_mono([0, 1, 0, 0, q16 - 1, 1]) };
    a.minus(&b)
}

/// Representative in 𝓔 of a named class of the 11-manifold model.
pub fn named_rep(p: &Pipeline, c: Named) -> Element {
    match c {
        Named::U(k) => {
            let mut v = vec![0u16; 7];
            v[6] = k as u16;
            Element::mono(Mono(v), Q::one())
        }
        Named::Zeta(p, q) => e_mono([0, 0, 0, p as u16, q as u16, 0], inv_fact(p, q)),
        Named::Eta(p, q) => {
            let mut r = Element::zero();
            for (m, c) in &eta_cocycle(p, q).terms {
                let mut v = m.0.clone();
                v.push(0);
                r.add_term(Mono(v), c * inv_fact(p, q));
            }
            r
        }
        Named::Theta(r) => {
            // β̃(xyz z̄^{r−1}), whose image in HH is (r+1)/r · xy z̄^r
            let a = l_mono([1, 1, 1, 0, 0, r as u16 - 1]);
            p.cm.lift(&p.lm.s_apply(&a))
        }
        Named::Class(..) => Element::zero(),
    }
}

/// Named classes of the 11-manifold model in degree n: u^k, ζ_{p,q} and
/// η_{p,q} with (p, q) ≠ (0, 0), θ_r with r ≥ 1.
pub fn named_in_degree(n: i64) -> Vec<Named> {
    let mut out = Vec::new();
    if n < 0 {
        return out;
    }
    if n % 2 == 0 {
        out.push(Named::U((n / 2) as u32));
        let s = (n / 2) as u32;
        for p in (0..=s).rev() {
            if s > 0 {
                out.push(Named::Zeta(p, s - p));
            }
        }
        if n >= 10 && (n - 6) % 4 == 0 {
            out.push(Named::Theta(((n - 6) / 4) as u32));
        }
    } else if n >= 7 {
        let s = ((n - 5) / 2) as u32;
        for p in (0..=s).rev() {
            out.push(Named::Eta(p, s - p));
        }
    }
    out
}

/// Change of basis from HC⁻ coordinates to named classes, per degree.
pub struct Naming {
    /// Named coordinates of each HC⁻ basis vector.
    per_degree: std::sync::Mutex<BTreeMap<i64, Option<(Vec<Named>, Vec<SVec>)>>>,
    active: bool,
}

impl Naming {
    pub fn new(p: &Pipeline) -> Self {
        Naming { per_degree: std::sync::Mutex::new(BTreeMap::new()), active: is_m11(p) }
    }

    fn table(&self, p: &Pipeline, n: i64) -> Result<Option<(Vec<Named>, Vec<SVec>)>> {
        if let Some(t) = self.per_degree.lock().unwrap().get(&n) {
            return Ok(t.clone());
        }
        let t = if self.active { self.build(p, n)? } else { None };
        self.per_degree.lock().unwrap().insert(n, t.clone());
        Ok(t)
    }

    fn build(&self, p: &Pipeline, n: i64) -> Result<Option<(Vec<Named>, Vec<SVec>)>> {
        let hc = p.hc_deg(n)?;
        let names = named_in_degree(n);
        if names.len() != hc.dim() {
            return Ok(None);
        }
        let mut cols = Vec::new();
        for c in &names {
            match hc.coords(&named_rep(p, *c)) {
                Some(v) => cols.push(v),
                None => return Err(Error::Consistency(format!("{c} is not a cocycle of E"))),
            }
        }
        let mut inv = Vec::new();
        for k in 0..hc.dim() {
            match solve(&cols, &svec_unit(k)) {
                Some(x) => inv.push(x),
                None => return Ok(None),
            }
        }
        Ok(Some((names, inv)))
    }

    /// Express HC⁻ coordinates of degree n as named coordinates; falls back
    /// to raw basis labels when the names do not form a basis.
    pub fn express(&self, p: &Pipeline, n: i64, v: &SVec) -> Result<Vec<(Named, Q)>> {
        let mut acc: BTreeMap<Named, Q> = BTreeMap::new();
        match self.table(p, n)? {
            Some((names, inv)) => {
                for (k, c) in v {
                    for (i, x) in &inv[*k] {
                        *acc.entry(names[*i]).or_insert_with(Q::zero) += c * x;
                    }
                }
            }
            None => {
                for (k, c) in v {
                    acc.insert(Named::Class(n, *k), c.clone());
                }
            }
        }
        Ok(acc.into_iter().filter(|(_, c)| !c.is_zero()).collect())
    }

    pub fn express_tensor(&self, p: &Pipeline, t: &TensorClass) -> Result<NamedTensor> {
        let mut out = NamedTensor::new();
        for ((da, i, db, j), c) in t {
            let a = self.express(p, *da, &svec_unit(*i))?;
            let b = self.express(p, *db, &svec_unit(*j))?;
            for (na, x) in &a {
                for (nb, y) in &b {
                    *out.entry((*na, *nb)).or_insert_with(Q::zero) += c * x * y;
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        Ok(out)
    }
}

fn push(t: &mut NamedTensor, k: (Named, Named), c: Q) {
    if c.is_zero() {
        return;
    }
    let e = t.entry(k).or_insert_with(Q::zero);
    *e += c;
    if e.is_zero() {
        t.remove(&k);
    }
}

fn zeta_or_one(i: u32, j: u32) -> Named {
    if i == 0 && j == 0 {
        Named::U(0)
    } else {
        Named::Zeta(i, j)
    }
}

/// Closed formula for Dsb(ζ_{p,q}).
pub fn closed_dsb_zeta(p: u32, q: u32) -> NamedTensor {
    let mut t = NamedTensor::new();
    for i in 0..=p + 1 {
        for j in 0..=q + 1 {
            let c = Q::from_integer((i as i64 * (q as i64 + 1) - j as i64 * (p as i64 + 1)).into());
            let (a, b) = (p + 1 - i, q + 1 - j);
            if (a, b) != (0, 0) {
                push(&mut t, (zeta_or_one(i, j), Named::Eta(a, b)), c.clone());
            }
            if (i, j) != (0, 0) {
                push(&mut t, (Named::Eta(i, j), zeta_or_one(a, b)), c);
            }
        }
    }
    t
}

/// Closed formula for Dsb(η_{p,q}).
pub fn closed_dsb_eta(p: u32, q: u32) -> NamedTensor {
    let mut t = NamedTensor::new();
    push(&mut t, (Named::Theta(2), zeta_or_one(p, q)), Q::one());
    push(&mut t, (zeta_or_one(p, q), Named::Theta(2)), -Q::one());
    for i in 0..=p + 1 {
        for j in 0..=q + 1 {
            let c = Q::from_integer((i as i64 * (q as i64 + 1) - j as i64 * (p as i64 + 1)).into());
            let (a, b) = (p + 1 - i, q + 1 - j);
            if (i, j) != (0, 0) && (a, b) != (0, 0) {
                push(&mut t, (Named::Eta(i, j), Named::Eta(a, b)), -c);
            }
        }
    }
    t
}

/// Graded antisymmetry of a named tensor under the flip, with degrees
/// shifted by one (the Lie grading).
pub fn antisymmetry_defect(t: &NamedTensor) -> NamedTensor {
    let mut out = t.clone();
    for ((a, b), c) in t {
        let odd = (a.degree() + 1) * (b.degree() + 1) % 2 != 0;
        let sign = if odd { -Q::one() } else { Q::one() };
        push(&mut out, (*b, *a), sign * c);
    }
    out
}

/// The displayed expansions of Dlp, as elements of 𝓛^{⊗2}. `fix_sign`
/// negates the xyz⊗(·) term, the sign the product of slot differences
/// actually produces.
pub fn printed_dlp_xy(p: &Pipeline, pp: u32, qq: u32, fix_sign: bool) -> Element {
    let (p16, q16) = (pp as u16, qq as u16);
    let w = l_mono([0, 0, 0, p16, q16, 0]);
    let xyz = l_mono([1, 1, 1, 0, 0, 0]);
    let lead = if fix_sign { -Q::one() } else { Q::one() };
    let mut r = p.tp(&xyz, &w).scale(&lead);
    r.add_scaled(&p.tp(&w, &xyz), &Q::one());
    for i in 0..=p16 {
        for j in 0..=q16 {
            let c = binomial(pp as u64, i as u64) * binomial(qq as u64, j as u64);
            let (a, b) = (p16 - i, q16 - j);
            let terms: [([u16; 6], [u16; 6], i64); 4] = [
                ([1, 0, 0, i, j, 0], [0, 1, 1, a, b, 0], -1),
                ([0, 1, 0, i, j, 0], [1, 0, 1, a, b, 0], 1),
                ([1, 0, 1, i, j, 0], [0, 1, 0, a, b, 0], -1),
                ([0, 1, 1, i, j, 0], [1, 0, 0, a, b, 0], 1),
            ];
            for (l, rr, s) in terms {
                r.add_scaled(&p.tp(&l_mono(l), &l_mono(rr)), &(&c * q(s)));
            }
        }
    }
    r
}

/// Displayed Dlp of z x̄^p ȳ^q − x x̄^{p−1} ȳ^q z̄, p ≥ 1.
pub fn printed_dlp_eta(p: &Pipeline, pp: u32, qq: u32, fix_sign: bool) -> Element {
    let (p16, q16) = (pp as u16, qq as u16);
    let eta = eta_cocycle(pp, qq);
    let xyz = l_mono([1, 1, 1, 0, 0, 0]);
    let lead = if fix_sign { -Q::one() } else { Q::one() };
    let mut r = p.tp(&xyz, &eta).scale(&lead);
    r.add_scaled(&p.tp(&eta, &xyz), &Q::one());
    let fixed: [([u16; 6], [u16; 6], i64); 4] = [
        ([1, 1, 1, 0, 0, 1], [1, 0, 0, p16 - 1, q16, 0], -1),
        ([1, 0, 0, p16 - 1, q16, 0], [1, 1, 1, 0, 0, 1], 1),
        ([1, 1, 0, 0, 0, 1], [1, 0, 1, p16 - 1, q16, 0], -1),
        ([1, 0, 1, p16 - 1, q16, 0], [1, 1, 0, 0, 0, 1], -1),
    ];
    for (l, rr, s) in fixed {
        r.add_scaled(&p.tp(&l_mono(l), &l_mono(rr)), &q(s));
    }
    for i in 0..=p16 {
        for j in 0..=q16 {
            let c = binomial(pp as u64, i as u64) * binomial(qq as u64, j as u64);
            let (a, b) = (p16 - i, q16 - j);
            r.add_scaled(&p.tp(&l_mono([1, 0, 1, i, j, 0]), &l_mono([0, 1, 1, a, b, 0])), &-c.clone());
            r.add_scaled(&p.tp(&l_mono([0, 1, 1, i, j, 0]), &l_mono([1, 0, 1, a, b, 0])), &c);
        }
    }
    r
}

/// Displayed Dlp of x y z̄^r.
pub fn printed_dlp_theta(p: &Pipeline, r: u32) -> Element {
    let r16 = r as u16;
    let mut out = Element::zero();
    for i in 0..=r16 {
        let c = binomial(r as u64, i as u64);
        out.add_scaled(&p.tp(&l_mono([1, 1, 1, 0, 0, i]), &l_mono([1, 1, 0, 0, 0, r16 - i])), &-c.clone());
        out.add_scaled(&p.tp(&l_mono([1, 1, 0, 0, 0, i]), &l_mono([1, 1, 1, 0, 0, r16 - i])), &c);
    }
    out
}

/// Difference of two Künneth coordinate vectors.
pub fn tensor_diff(a: &TensorClass, b: &TensorClass) -> TensorClass {
    let mut out = a.clone();
    for (k, c) in b {
        let e = out.entry(*k).or_insert_with(Q::zero);
        *e -= c;
        if e.is_zero() {
            out.remove(k);
        }
    }
    out
}

/// Dsb of a named class of the 11-manifold model, in named coordinates.
pub fn dsb_named(p: &Pipeline, naming: &Naming, c: Named) -> Result<NamedTensor> {
    let t = p.dsb(&named_rep(p, c))?;
    naming.express_tensor(p, &t)
}

pub fn format_named_tensor(t: &NamedTensor) -> String {
    if t.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (k, ((a, b), c)) in t.iter().enumerate() {
        let neg = c < &Q::zero();
        let abs = if neg { -c.clone() } else { c.clone() };
        if k == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        if !abs.is_one() {
            if abs.is_integer() {
                s.push_str(&format!("{} ", abs.numer()));
            } else {
                s.push_str(&format!("{}/{} ", abs.numer(), abs.denom()));
            }
        }
        s.push_str(&format!("{a}(x){b}"));
    }
    s
}
