//! The word-length spectral sequence: component complexes ₍N₎𝒦 filtered by
//! u-power, pages E_r^{p} = Z_r^p / (Z_{r−1}^{p+1} + B_{r−1}^p) per total degree,
//! page differentials, the S-map between components and r-BV exactness.
//!
//! Column p of ₍N₎𝒦 is 𝓛̃^{(N+p)}·u^p. D = δ + u·s keeps or raises the column by one,
//! so E_r^p only sees columns p − r + 1 ..= p + r − 1; pages are computed on
//! that truncation.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::algebra::{Algebra, Element, Mono, Q};
use crate::homology::{ChainSpace, Complex};
use crate::linalg::{kernel_image, rank, svec_combine, SVec, Subquotient};
use crate::loop_models::{CyclicModel, LoopModel};
use crate::{Error, Result};

/// ₍N₎𝒦: monomials x·u^k of 𝓔 with x ∈ 𝓛̃ of word length N + k.
pub struct KComponent<'a> {
    pub lm: &'a LoopModel,
    pub cm: &'a CyclicModel,
    pub n_comp: i64,
}

impl KComponent<'_> {
    pub fn min_col(&self) -> i64 {
        (-self.n_comp).max(0)
    }

    /// Basis of the columns lo..=hi in total degree n, ordered by column.
    pub fn slice_basis(&self, n: i64, lo: i64, hi: i64) -> Vec<Mono> {
        let mut out = Vec::new();
        for k in lo.max(self.min_col())..=hi {
            if n - 2 * k < 1 {
                break;
            }
            for m in self.lm.component_basis(n - 2 * k, self.n_comp + k) {
                let mut v = m.0;
                v.push(k as u16);
                out.push(Mono(v));
            }
        }
        out
    }

    pub fn max_col(&self, n: i64) -> i64 {
        (n - 1).div_euclid(2)
    }
}

impl Complex for KComponent<'_> {
    fn algebra(&self) -> &Algebra {
        self.cm.alg()
    }
    fn basis(&self, n: i64) -> Vec<Mono> {
        self.slice_basis(n, 0, self.max_col(n).max(0))
    }
    fn diff_mono(&self, m: &Mono) -> Element {
        self.cm.e.d.apply_mono(self.cm.alg(), m)
    }
}

fn col_of(m: &Mono, u: usize) -> i64 {
    m.0[u] as i64
}

/// Keep the terms of `e` lying in columns lo..=hi.
fn clip(e: &Element, u: usize, lo: i64, hi: i64) -> Element {
    let mut r = Element::zero();
    for (m, c) in &e.terms {
        let k = col_of(m, u);
        if k >= lo && k <= hi {
            r.add_term(m.clone(), c.clone());
        }
    }
    r
}

/// One slot E_r^p in total degree n, with explicit Z_r lifts in columns p..=p+r−1.
#[derive(Clone, Debug)]
pub struct PageEntry {
    pub n_comp: i64,
    pub r: usize,
    pub p: i64,
    pub degree: i64,
    pub space: ChainSpace,
    pub quotient: Subquotient,
}

impl PageEntry {
    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    /// Z_r lifts of a basis of E_r^p.
    pub fn reps(&self) -> Vec<Element> {
        self.quotient.reps.iter().map(|v| self.space.element(v)).collect()
    }

    /// Coordinates in E_r^p of an element of Z_r^p (terms in columns ≥ p + r are ignored).
    pub fn coords(&self, e: &Element, u: usize) -> Option<SVec> {
        let e = clip(e, u, self.p, self.p + self.r as i64 - 1);
        if e.terms.keys().any(|m| col_of(m, u) < self.p) {
            return None;
        }
        self.quotient.coords(&self.space.vec(&e)?)
    }
}

impl KComponent<'_> {
    /// Image of the basis of columns lo..=hi in degree n under D, clipped to columns < cut.
    fn d_images(&self, space: &ChainSpace, lo_keep: i64, cut: i64) -> Vec<Element> {
        let u = self.cm.u;
        space
            .basis
            .iter()
            .map(|m| clip(&self.diff_mono(m), u, lo_keep, cut - 1))
            .collect()
    }

    /// Kernel (in `space` coordinates) of x ↦ D(x) restricted to columns < cut.
    fn z_space(&self, space: &ChainSpace, cut: i64, n: i64) -> Result<Vec<SVec>> {
        let lo = 0;
        let tgt = ChainSpace::new(n + 1, self.slice_basis(n + 1, lo, cut - 1));
        let imgs = self.d_images(space, lo, cut);
        let cols = imgs
            .iter()
            .map(|e| tgt.vec(e).ok_or_else(|| Error::Consistency("page differential leaves its component".into())))
            .collect::<Result<Vec<_>>>()?;
        Ok(kernel_image(&cols).kernel)
    }

    /// E_r^p in total degree n.
    pub fn page_entry(&self, r: usize, p: i64, n: i64) -> Result<PageEntry> {
        assert!(r >= 1);
        let ri = r as i64;
        let top = p + ri - 1;
        let space = ChainSpace::new(n, self.slice_basis(n, p, top));
        // Z_r^p: columns p..=top with D x vanishing below p + r
        let z = self.z_space(&space, p + ri, n)?;
        // Z_{r−1}^{p+1}
        let sub = ChainSpace::new(n, self.slice_basis(n, p + 1, top));
        let z_sub: Vec<SVec> = if r >= 2 {
            self.z_space(&sub, p + ri, n)?
                .iter()
                .map(|v| embed(&sub, &space, v))
                .collect()
        } else {
            Vec::new()
        };
        // B_{r−1}^p = D(Z_{r−1}^{p−r+1}) from degree n − 1
        let lo_b = p - ri + 1;
        let prev = ChainSpace::new(n - 1, self.slice_basis(n - 1, lo_b, top));
        let below = ChainSpace::new(n, self.slice_basis(n, lo_b.max(self.min_col()), p - 1));
        let imgs = self.d_images(&prev, 0, p + ri);
        let mut low_cols = Vec::with_capacity(imgs.len());
        let mut high = Vec::with_capacity(imgs.len());
        for e in &imgs {
            let lowpart = clip(e, self.cm.u, 0, p - 1);
            low_cols.push(below.vec(&lowpart).ok_or_else(|| Error::Consistency("boundary outside slice".into()))?);
            high.push(clip(e, self.cm.u, p, top));
        }
        let kz = kernel_image(&low_cols).kernel;
        let mut w = z_sub;
        for k in &kz {
            let mut e = Element::zero();
            for (i, c) in k {
                e.add_scaled(&high[*i], c);
            }
            if !e.is_zero() {
                w.push(space.vec(&e).ok_or_else(|| Error::Consistency("boundary outside slice".into()))?);
            }
        }
        let quotient = Subquotient::new(space.dim(), &z, &w);
        if quotient.dim_sub > z.len() + w.len() {
            return Err(Error::Consistency("page subquotient".into()));
        }
        Ok(PageEntry { n_comp: self.n_comp, r, p, degree: n, space, quotient })
    }
}

fn embed(from: &ChainSpace, to: &ChainSpace, v: &SVec) -> SVec {
    let mut out: SVec = v.iter().map(|(i, c)| (to.index_of(&from.basis[*i]).unwrap(), c.clone())).collect();
    out.sort_by_key(|x| x.0);
    out
}

/// Matrix of d_r: E_r^p(n) → E_r^{p+r}(n+1).
pub fn page_differential(k: &KComponent, src: &PageEntry, tgt: &PageEntry) -> Result<Vec<SVec>> {
    let u = k.cm.u;
    src.reps()
        .iter()
        .map(|x| {
            let dx = k.diff_mono_el(x);
            if dx.terms.keys().any(|m| col_of(m, u) < tgt.p) {
                return Err(Error::Consistency("d_r image below its target filtration".into()));
            }
            tgt.coords(&dx, u).ok_or_else(|| Error::Consistency("d_r image not in Z_r".into()))
        })
        .collect()
}

impl KComponent<'_> {
    fn diff_mono_el(&self, e: &Element) -> Element {
        self.cm.e.diff(e)
    }
}

/// Pages E_r of one component over a (degree, filtration) window.
#[derive(Clone, Debug)]
pub struct SpectralPage {
    pub n_comp: i64,
    pub r: usize,
    pub max_degree: i64,
    pub max_filtration: i64,
    pub entries: BTreeMap<(i64, i64), PageEntry>,
}

impl SpectralPage {
    pub fn dim(&self, p: i64, n: i64) -> usize {
        self.entries.get(&(p, n)).map(|e| e.dim()).unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.values().all(|e| e.dim() == 0)
    }

    /// Nonzero slots as (p, n, dim).
    pub fn support(&self) -> Vec<(i64, i64, usize)> {
        self.entries.iter().filter(|(_, e)| e.dim() > 0).map(|(&(p, n), e)| (p, n, e.dim())).collect()
    }
}

/// Slots (p, n) of a component inside the window.
fn slots(k: &KComponent, max_degree: i64, max_filtration: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for n in 1..=max_degree {
        for p in k.min_col()..=max_filtration.min(k.max_col(n)) {
            out.push((p, n));
        }
    }
    out
}

pub fn page(lm: &LoopModel, cm: &CyclicModel, n_comp: i64, r: usize, max_degree: i64, max_filtration: i64) -> Result<SpectralPage> {
    let k = KComponent { lm, cm, n_comp };
    let entries = slots(&k, max_degree, max_filtration)
        .par_iter()
        .map(|&(p, n)| k.page_entry(r, p, n).map(|e| ((p, n), e)))
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectralPage { n_comp, r, max_degree, max_filtration, entries: entries.into_iter().collect() })
}

/// Verify d_r² = 0 and E_{r+1} ≅ H(E_r, d_r) on every slot whose neighbours lie in the window.
pub fn check_page_law(lm: &LoopModel, cm: &CyclicModel, n_comp: i64, r: usize, max_degree: i64, max_filtration: i64) -> Result<usize> {
    let k = KComponent { lm, cm, n_comp };
    let ri = r as i64;
    let ext_deg = max_degree + 1;
    let ext_fil = max_filtration + 2 * ri;
    let er = page(lm, cm, n_comp, r, ext_deg, ext_fil)?;
    let er1 = page(lm, cm, n_comp, r + 1, max_degree, max_filtration)?;
    let mut dmaps: BTreeMap<(i64, i64), Vec<SVec>> = BTreeMap::new();
    for (&(p, n), src) in &er.entries {
        if let Some(tgt) = er.entries.get(&(p + ri, n + 1)) {
            dmaps.insert((p, n), page_differential(&k, src, tgt)?);
        }
    }
    let mut checked = 0;
    for (&(p, n), e1) in &er1.entries {
        let e = &er.entries[&(p, n)];
        let out = dmaps.get(&(p, n));
        let inc = dmaps.get(&(p - ri, n - 1));
        if let (Some(out), Some(inc)) = (out, inc) {
            // d_r ∘ d_r = 0
            for col in inc {
                let terms: Vec<(Q, &SVec)> = col.iter().map(|(i, c)| (c.clone(), &out[*i])).collect();
                if !svec_combine(&terms).is_empty() {
                    return Err(Error::Consistency(format!("d_{r}^2 != 0 at p={p}, n={n}")));
                }
            }
        }
        let rank_out = out.map(|m| rank(m)).unwrap_or(0);
        let incoming_possible = p - ri >= k.min_col() && n - 1 >= 1;
        let rank_in = match inc {
            Some(m) => rank(m),
            None if incoming_possible && er.entries.contains_key(&(p - ri, n - 1)) => {
                return Err(Error::Consistency("missing incoming page differential".into()))
            }
            None => 0,
        };
        if out.is_none() && er.entries.contains_key(&(p + ri, n + 1)) {
            return Err(Error::Consistency("missing outgoing page differential".into()));
        }
        let expected = e.dim() - rank_out - rank_in;
        if e1.dim() != expected {
            return Err(Error::Consistency(format!(
                "E_{} != H(E_{r}) at component {n_comp}, p={p}, n={n}: {} vs {expected}",
                r + 1,
                e1.dim()
            )));
        }
        checked += 1;
    }
    Ok(checked)
}

/// Lemma-7.4-type comparison: multiplication by u^N maps ₍N₎E_r^{l}(n) isomorphically
/// onto ₍0₎E_r^{l+N}(n+2N) for l ≥ r − 1. Returns the number of slots checked.
pub fn page_checks(lm: &LoopModel, cm: &CyclicModel, r: usize, n_max: i64, max_degree: i64, max_filtration: i64) -> Result<usize> {
    let k0 = KComponent { lm, cm, n_comp: 0 };
    let mut checked = 0;
    for nc in 1..=n_max {
        let k = KComponent { lm, cm, n_comp: nc };
        let work: Vec<(i64, i64)> = slots(&k, max_degree, max_filtration)
            .into_iter()
            .filter(|&(l, _)| l >= r as i64 - 1)
            .collect();
        let results = work
            .par_iter()
            .map(|&(l, n)| -> Result<()> {
                let src = k.page_entry(r, l, n)?;
                let tgt = k0.page_entry(r, l + nc, n + 2 * nc)?;
                if src.dim() != tgt.dim() {
                    return Err(Error::Consistency(format!(
                        "u^{nc}: E_{r}^{l} of component {nc} (dim {}) vs E_{r}^{} of component 0 (dim {}) at degree {n}",
                        src.dim(),
                        l + nc,
                        tgt.dim()
                    )));
                }
                let cols = src
                    .reps()
                    .iter()
                    .map(|x| {
                        tgt.coords(&cm.times_u(x, nc as u16), cm.u)
                            .ok_or_else(|| Error::Consistency("u^N image not in Z_r".into()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                if rank(&cols) != src.dim() {
                    return Err(Error::Consistency(format!("u^{nc} is not injective on E_{r}^{l} at degree {n}")));
                }
                Ok(())
            })
            .collect::<Result<Vec<_>>>()?;
        checked += results.len();
    }
    Ok(checked)
}

/// S = ×u from ₍N₎E_r to ₍N−1₎E_r commutes with d_r. Returns slots checked.
pub fn s_commutes_with_dr(lm: &LoopModel, cm: &CyclicModel, n_comp: i64, r: usize, max_degree: i64, max_filtration: i64) -> Result<usize> {
    let ks = KComponent { lm, cm, n_comp };
    let kt = KComponent { lm, cm, n_comp: n_comp - 1 };
    let ri = r as i64;
    let mut checked = 0;
    for (p, n) in slots(&ks, max_degree, max_filtration) {
        let a = ks.page_entry(r, p, n)?;
        let c = kt.page_entry(r, p + 1, n + 2)?;
        let d = kt.page_entry(r, p + 1 + ri, n + 3)?;
        for x in a.reps() {
            let ux = cm.times_u(&x, 1);
            // S then d_r
            let lhs = d.coords(&cm.e.diff(&ux), cm.u);
            // d_r then S
            let rhs = d.coords(&cm.times_u(&cm.e.diff(&x), 1), cm.u);
            if c.coords(&ux, cm.u).is_none() || lhs != rhs || lhs.is_none() {
                return Err(Error::Consistency(format!("S does not commute with d_{r} at p={p}, n={n}")));
            }
        }
        checked += 1;
    }
    Ok(checked)
}

#[derive(Clone, Debug)]
pub struct RbvReport {
    pub max_degree: i64,
    pub max_filtration: i64,
    /// Smallest r ≤ r_max with ₍0₎E_{r+1} = 0 on the window.
    pub r: Option<usize>,
    /// Support of ₍0₎E_{r+1} for each r tested.
    pub supports: Vec<(usize, Vec<(i64, i64, usize)>)>,
}

pub fn r_bv_exactness(lm: &LoopModel, cm: &CyclicModel, r_max: usize, max_degree: i64, max_filtration: i64) -> Result<RbvReport> {
    let mut supports = Vec::new();
    for r in 1..=r_max {
        let e = page(lm, cm, 0, r + 1, max_degree, max_filtration)?;
        let sup = e.support();
        let zero = sup.is_empty();
        supports.push((r, sup));
        if zero {
            return Ok(RbvReport { max_degree, max_filtration, r: Some(r), supports });
        }
    }
    Ok(RbvReport { max_degree, max_filtration, r: None, supports })
}

/// d₂ of the class of a word-0 cocycle ω with s̃ω = δα: the lift ω − α·u lies in
/// Z₂⁰ and D(ω − αu) = −s̃(α)·u². Returns whether [ω] ∈ ₍0₎E₂⁰ and d₂[ω] ≠ 0 in ₍0₎E₂².
pub fn d2_of_witness(lm: &LoopModel, cm: &CyclicModel, omega: &Element, alpha: &Element) -> Result<D2Check> {
    let n = omega
        .degree(lm.alg())
        .ok_or_else(|| Error::Domain("omega must be homogeneous".into()))?;
    if lm.s_apply(omega) != lm.delta(alpha) {
        return Ok(D2Check { degree: n, lifts: false, source_nonzero: false, image_nonzero: false });
    }
    let k = KComponent { lm, cm, n_comp: 0 };
    let lift = cm.lift(omega).minus(&cm.times_u(&cm.lift(alpha), 1));
    let d = cm.e.diff(&lift);
    let expected = cm.times_u(&cm.lift(&lm.s_apply(alpha)), 2).neg();
    if d != expected {
        return Err(Error::Consistency("D(omega - alpha u) != -s(alpha) u^2".into()));
    }
    let tgt = k.page_entry(2, 2, n + 1)?;
    let img = tgt.coords(&d, cm.u).ok_or_else(|| Error::Consistency("d_2 image not in Z_2".into()))?;
    let image_nonzero = !img.is_empty();
    let src = k.page_entry(2, 0, n)?;
    let source_nonzero = matches!(src.coords(&lift, cm.u), Some(c) if !c.is_empty());
    Ok(D2Check { degree: n, lifts: true, source_nonzero, image_nonzero })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct D2Check {
    pub degree: i64,
    /// s̃ω = δα holds exactly.
    pub lifts: bool,
    pub source_nonzero: bool,
    pub image_nonzero: bool,
}

/// Σ_N dim(₍N₎𝒦)ⁿ + dim ℚ[u]ⁿ, to compare against dim 𝓔ⁿ.
pub fn component_dimension_total(lm: &LoopModel, cm: &CyclicModel, n: i64) -> usize {
    let lowest = -(n / 2);
    let mut total = if n % 2 == 0 { 1 } else { 0 };
    for nc in lowest..=lm.max_word(n) {
        total += KComponent { lm, cm, n_comp: nc }.basis(n).len();
    }
    total
}
