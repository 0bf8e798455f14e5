//! BV exactness of 𝓛̃ under H(s̃), triviality of the reduced S-action on HC⁻,
//! positive weights, and the ker s̃ model with its connecting map c.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::algebra::{Cdga, Element, Mono, Q};
use crate::emss::KComponent;
use crate::homology::{homology_deg, induced_map, matrix_of, ChainSpace, HomologyDeg, InducedDeg};
use crate::linalg::{kernel_image, solve, Echelon, SVec};
use crate::loop_models::{CyclicModel, LoopModel, WordComponent};
use crate::model_io::format_element;
use crate::{Error, Result};

/// Homology of 𝓛̃^{(N)} keyed by (degree, word).
pub type WordHomology = HashMap<(i64, i64), HomologyDeg>;

/// H(𝓛̃^{(N)}) for every degree in [lo, hi] and every word length that occurs.
pub fn word_homology(lm: &LoopModel, lo: i64, hi: i64) -> Result<WordHomology> {
    let keys: Vec<(i64, i64)> =
        (lo.max(0)..=hi).flat_map(|n| (0..=lm.max_word(n)).map(move |w| (n, w))).collect();
    let out = keys
        .par_iter()
        .map(|&(n, w)| homology_deg(&WordComponent { lm, word: w }, n).map(|h| ((n, w), h)))
        .collect::<Result<Vec<_>>>()?;
    Ok(out.into_iter().collect())
}

fn empty_homology(n: i64) -> HomologyDeg {
    HomologyDeg::from_spaces(ChainSpace::new(n, Vec::new()), &[], Vec::new())
}

/// H s̃ from H^n(𝓛̃^{(w)}) to H^{n−1}(𝓛̃^{(w+1)}).
fn hs_map(lm: &LoopModel, wh: &WordHomology, n: i64, w: i64) -> Result<InducedDeg> {
    let empty = empty_homology(n - 1);
    let src = &wh[&(n, w)];
    let tgt = wh.get(&(n - 1, w + 1)).unwrap_or(&empty);
    let f = |a: &Element| lm.s_apply(a);
    induced_map(&f, src, tgt)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BvRow {
    pub degree: i64,
    pub word: i64,
    pub dim_homology: usize,
    pub dim_ker: usize,
    pub dim_im: usize,
}

#[derive(Clone, Debug)]
pub struct BvWitness {
    pub degree: i64,
    pub word: i64,
    pub cocycle: Element,
}

#[derive(Clone, Debug)]
pub struct BvReport {
    /// Degrees decided: every m in [lo, hi].
    pub lo: i64,
    pub hi: i64,
    pub rows: Vec<BvRow>,
    pub exact: bool,
    /// Degrees at which Im B̃ ≠ ker B̃.
    pub failures: Vec<i64>,
    /// Lowest-degree witness.
    pub witness: Option<BvWitness>,
    /// One witness for each failing (degree, word).
    pub witnesses: Vec<BvWitness>,
}

/// BV exactness decided on degrees 1..=max_deg − 1 (homology is computed up to max_deg).
pub fn bv_exactness(lm: &LoopModel, max_deg: i64) -> Result<BvReport> {
    if max_deg < 2 {
        return Err(Error::Domain("bv-exact needs a window of at least 2 degrees".into()));
    }
    bv_exactness_range(lm, 1, max_deg - 1)
}

/// Compare Im B̃ with ker B̃ on H^m(𝓛̃) for m in [lo, hi], word by word.
pub fn bv_exactness_range(lm: &LoopModel, lo: i64, hi: i64) -> Result<BvReport> {
    let lo = lo.max(1);
    let wh = word_homology(lm, lo - 1, hi + 1)?;
    let mut keys: Vec<(i64, i64)> = wh.keys().filter(|(n, _)| *n >= lo).cloned().collect();
    keys.sort();
    let maps: HashMap<(i64, i64), InducedDeg> = keys
        .par_iter()
        .map(|&(n, w)| hs_map(lm, &wh, n, w).map(|m| ((n, w), m)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .collect();
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    let mut witnesses = Vec::new();
    for m in lo..=hi {
        for w in 0..=lm.max_word(m) {
            let h = &wh[&(m, w)];
            let out = &maps[&(m, w)];
            let ker = out.kernel();
            let incoming = if w >= 1 { maps.get(&(m + 1, w - 1)) } else { None };
            let mut im = Echelon::new();
            if let Some(inc) = incoming {
                if !inc.then(out).is_zero() {
                    return Err(Error::Consistency(format!("B~^2 != 0 at degree {m}, word {w}")));
                }
                for c in &inc.columns {
                    im.insert(c, &Vec::new());
                }
            }
            let mut ker_ech = Echelon::new();
            for k in &ker {
                ker_ech.insert(k, &Vec::new());
            }
            if im.rows().any(|r| !ker_ech.contains(r)) {
                return Err(Error::Consistency(format!("Im B~ not inside ker B~ at degree {m}, word {w}")));
            }
            rows.push(BvRow { degree: m, word: w, dim_homology: h.dim(), dim_ker: ker.len(), dim_im: im.rank() });
            if ker.len() != im.rank() {
                if failures.last() != Some(&m) {
                    failures.push(m);
                }
                let k = ker.iter().find(|k| !im.contains(k)).expect("strict inclusion");
                let reps = h.reps();
                let mut cocycle = Element::zero();
                for (i, c) in k {
                    cocycle.add_scaled(&reps[*i], c);
                }
                witnesses.push(BvWitness { degree: m, word: w, cocycle });
            }
        }
    }
    Ok(BvReport { lo, hi, rows, exact: failures.is_empty(), failures, witness: witnesses.first().cloned(), witnesses })
}

/// Verify that `omega` is a BV witness: a nonzero class in H(𝓛̃^{(w)}) with H s̃[ω] = 0,
/// outside the image of H s̃. With `alpha`, also checks s̃ω = δα exactly.
pub fn check_witness(lm: &LoopModel, omega: &Element, alpha: Option<&Element>) -> Result<bool> {
    let alg = lm.alg();
    let n = omega.degree(alg).ok_or_else(|| Error::Domain("witness must be homogeneous".into()))?;
    let words: Vec<i64> = omega.terms.keys().map(|m| lm.word_length(m)).collect();
    let w = words[0];
    if words.iter().any(|&x| x != w) {
        return Err(Error::Domain("witness must have a single word length".into()));
    }
    let s_omega = lm.s_apply(omega);
    if let Some(a) = alpha {
        if s_omega != lm.delta(a) {
            return Ok(false);
        }
    }
    let h = homology_deg(&WordComponent { lm, word: w }, n)?;
    let c = match h.coords(omega) {
        Some(c) if !c.is_empty() => c,
        _ => return Ok(false),
    };
    let h_next = homology_deg(&WordComponent { lm, word: w + 1 }, n - 1)?;
    if !h_next.is_boundary(&s_omega) {
        return Ok(false);
    }
    if w == 0 {
        return Ok(true);
    }
    let wh_src = homology_deg(&WordComponent { lm, word: w - 1 }, n + 1)?;
    let f = |a: &Element| lm.s_apply(a);
    let inc = induced_map(&f, &wh_src, &h)?;
    let mut im = Echelon::new();
    for col in &inc.columns {
        im.insert(col, &Vec::new());
    }
    Ok(!im.contains(&c))
}

/// Reduced S-action S: H^n(₍N₎𝒦) → H^{n+2}(₍N−1₎𝒦).
#[derive(Clone, Debug)]
pub struct SRow {
    pub degree: i64,
    pub component: i64,
    pub dim_source: usize,
    pub rank: usize,
}

#[derive(Clone, Debug)]
pub struct SReport {
    pub max_degree: i64,
    pub decided_lo: i64,
    /// Source degrees whose S-image lies in the window.
    pub decided_hi: i64,
    pub rows: Vec<SRow>,
    pub trivial: bool,
    pub nonzero_at: Vec<i64>,
    pub witness: Option<(i64, i64, Element)>,
    /// Outcome of the comparison with BV exactness, when one was supplied.
    pub cross_check: Option<String>,
}

/// Homology of the components ₍N₎𝒦 for 0 ≤ N ≤ max word, degrees [lo, hi].
pub fn component_homology(lm: &LoopModel, cm: &CyclicModel, lo: i64, hi: i64) -> Result<HashMap<(i64, i64), HomologyDeg>> {
    let keys: Vec<(i64, i64)> =
        (lo.max(0)..=hi).flat_map(|n| (0..=lm.max_word(n)).map(move |c| (n, c))).collect();
    let out = keys
        .par_iter()
        .map(|&(n, c)| homology_deg(&KComponent { lm, cm, n_comp: c }, n).map(|h| ((n, c), h)))
        .collect::<Result<Vec<_>>>()?;
    Ok(out.into_iter().collect())
}

/// S̃ on reduced HC⁻ for source degrees 0..=max_deg − 2. With a BV report on the
/// same model, a BV failure at m must be matched by S̃ ≠ 0 at source m or m − 3;
/// a provable mismatch is an internal-consistency error.
pub fn s_action_triviality(lm: &LoopModel, cm: &CyclicModel, max_deg: i64, bv: Option<&BvReport>) -> Result<SReport> {
    if max_deg < 2 {
        return Err(Error::Domain("s-action needs a window of at least 2 degrees".into()));
    }
    s_action_range(lm, cm, 0, max_deg - 2, bv)
}

/// S̃ for source degrees lo..=hi.
pub fn s_action_range(lm: &LoopModel, cm: &CyclicModel, lo: i64, hi: i64, bv: Option<&BvReport>) -> Result<SReport> {
    let lo = lo.max(0);
    let max_deg = hi + 2;
    let ch = component_homology(lm, cm, lo, max_deg)?;
    let decided_hi = hi;
    let mut rows = Vec::new();
    let mut nonzero_at = Vec::new();
    let mut witness = None;
    for n in lo..=max_deg {
        if let Some(h) = ch.get(&(n, 0)) {
            if h.dim() != 0 {
                return Err(Error::Consistency(format!("H^{n} of the word-0 component is nonzero")));
            }
        }
    }
    let f = |a: &Element| cm.times_u(a, 1);
    for n in lo..=decided_hi {
        for c in 1..=lm.max_word(n) {
            let src = &ch[&(n, c)];
            let empty = empty_homology(n + 2);
            let tgt = ch.get(&(n + 2, c - 1)).unwrap_or(&empty);
            let m = induced_map(&f, src, tgt)?;
            let r = m.rank();
            rows.push(SRow { degree: n, component: c, dim_source: src.dim(), rank: r });
            if r > 0 {
                if nonzero_at.last() != Some(&n) {
                    nonzero_at.push(n);
                }
                if witness.is_none() {
                    let i = m.columns.iter().position(|col| !col.is_empty()).unwrap();
                    witness = Some((n, c, src.reps()[i].clone()));
                }
            }
        }
    }
    let cross_check = bv.map(|b| {
        let mut msg = String::from("consistent");
        for &m in &b.failures {
            if [m, m - 3].iter().any(|k| nonzero_at.contains(k)) {
                continue;
            }
            if m <= decided_hi && m - 3 >= lo {
                return format!("mismatch: BV fails at degree {m} but S~ vanishes at source degrees {m} and {}", m - 3);
            }
            msg = format!("indeterminate: BV failure at degree {m} needs S~ beyond the window");
        }
        if b.exact {
            if let Some(n) = nonzero_at.first() {
                msg = format!("indeterminate: S~ nonzero at source degree {n}, BV failure expected at degree >= {}", n + 3);
            }
        }
        msg
    });
    if let Some(m) = &cross_check {
        if m.starts_with("mismatch") {
            return Err(Error::Consistency(format!("BV exactness and S-triviality disagree: {m}")));
        }
    }
    Ok(SReport {
        max_degree: max_deg,
        decided_lo: lo,
        decided_hi,
        trivial: nonzero_at.is_empty(),
        rows,
        nonzero_at,
        witness,
        cross_check,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightReport {
    pub weights: Option<Vec<i64>>,
    pub valid: bool,
    /// Offending generator and term of its differential.
    pub offending: Option<(String, String)>,
    pub note: String,
}

fn mono_weight(m: &Mono, w: &[i64]) -> i64 {
    m.0.iter().zip(w).map(|(&e, &x)| e as i64 * x).sum()
}

/// Check a weight map: positive, and every term of d(v) has weight wt(v).
pub fn weight_check_with(model: &Cdga, w: &[i64]) -> WeightReport {
    let alg = &model.alg;
    let bad = |g: usize, note: &str, term: String| WeightReport {
        weights: Some(w.to_vec()),
        valid: false,
        offending: Some((alg.gens[g].name.clone(), term)),
        note: note.to_string(),
    };
    for (i, &x) in w.iter().enumerate() {
        if x < 1 {
            return bad(i, "weights must be positive", x.to_string());
        }
    }
    for i in 0..alg.len() {
        for (m, c) in &model.d.values[i].terms {
            if mono_weight(m, w) != w[i] {
                let t = format_element(alg, &Element::mono(m.clone(), c.clone()));
                return bad(i, "differential is not weight-homogeneous", t);
            }
        }
    }
    WeightReport {
        weights: Some(w.to_vec()),
        valid: true,
        offending: None,
        note: "positive weights: BV exact on every window".into(),
    }
}

pub fn weight_check(model: &Cdga) -> WeightReport {
    match &model.weights {
        Some(w) => weight_check_with(model, w),
        None => WeightReport { weights: None, valid: false, offending: None, note: "no weight data".into() },
    }
}

/// Every positive weight assignment with entries ≤ max_w, searched exhaustively
/// with pruning on fully assigned differentials. Returns the valid ones and the
/// number of assignments covered.
pub fn weight_search(model: &Cdga, max_w: i64) -> (Vec<Vec<i64>>, u128) {
    let n = model.alg.len();
    // generators each differential depends on
    let deps: Vec<usize> = (0..n)
        .map(|i| {
            let mut top = i;
            for m in model.d.values[i].terms.keys() {
                for (j, &e) in m.0.iter().enumerate() {
                    if e > 0 {
                        top = top.max(j);
                    }
                }
            }
            top
        })
        .collect();
    let mut found = Vec::new();
    let mut cur = vec![0i64; n];
    fn rec(
        k: usize,
        model: &Cdga,
        deps: &[usize],
        max_w: i64,
        cur: &mut Vec<i64>,
        found: &mut Vec<Vec<i64>>,
    ) {
        let n = cur.len();
        // prune: any differential whose generators are all assigned must be homogeneous
        for i in 0..n {
            if deps[i] < k {
                for m in model.d.values[i].terms.keys() {
                    if mono_weight(m, cur) != cur[i] {
                        return;
                    }
                }
            }
        }
        if k == n {
            found.push(cur.clone());
            return;
        }
        for x in 1..=max_w {
            cur[k] = x;
            rec(k + 1, model, deps, max_w, cur, found);
        }
        cur[k] = 0;
    }
    rec(0, model, &deps, max_w, &mut cur, &mut found);
    let total = (max_w as u128).pow(n as u32);
    (found, total)
}

/// H(ker s̃) with the connecting map c([s̃α]) = [δα], compared against HC⁻ through Φ.
#[derive(Clone, Debug)]
pub struct KerSRow {
    pub degree: i64,
    pub word: i64,
    pub dim_ker_s: usize,
    pub dim_hc: usize,
    pub c_rank: usize,
}

#[derive(Clone, Debug)]
pub struct KerSModel {
    pub max_degree: i64,
    pub rows: Vec<KerSRow>,
    pub c_trivial: bool,
}

/// H^n of (ker s̃ ∩ 𝓛̃^{(w)}, δ) with ambient coordinates in 𝓛̃^{(w)}_n.
pub fn ker_s_homology(lm: &LoopModel, n: i64, w: i64) -> Result<HomologyDeg> {
    let here = ChainSpace::new(n, lm.component_basis(n, w));
    let ker_at = |k: i64| -> Result<(ChainSpace, Vec<SVec>)> {
        let src = ChainSpace::new(k, lm.component_basis(k, w));
        let tgt = ChainSpace::new(k - 1, lm.component_basis(k - 1, w + 1));
        let s_mat = matrix_of(&src, &tgt, |m| lm.s.apply_mono(lm.alg(), m), "s")?;
        Ok((src, kernel_image(&s_mat).kernel))
    };
    let (_, k_here) = ker_at(n)?;
    let (prev, k_prev) = ker_at(n - 1)?;
    let next = ChainSpace::new(n + 1, lm.component_basis(n + 1, w));
    let d_mat = matrix_of(&here, &next, |m| lm.l.d.apply_mono(lm.alg(), m), "delta")?;
    // cycles: kernel of δ restricted to ker s̃
    let images: Vec<SVec> = k_here.iter().map(|v| apply_cols(&d_mat, v)).collect();
    let cyc = kernel_image(&images).kernel;
    let cycles: Vec<SVec> = cyc.iter().map(|c| combine(&k_here, c)).collect();
    let d_prev = matrix_of(&prev, &here, |m| lm.l.d.apply_mono(lm.alg(), m), "delta")?;
    let boundaries: Vec<SVec> = k_prev.iter().map(|v| apply_cols(&d_prev, v)).filter(|v| !v.is_empty()).collect();
    Ok(HomologyDeg::from_spaces(here, &cycles, boundaries))
}

fn apply_cols(cols: &[SVec], v: &SVec) -> SVec {
    let terms: Vec<(Q, &SVec)> = v.iter().map(|(i, c)| (c.clone(), &cols[*i])).collect();
    crate::linalg::svec_combine(&terms)
}

fn combine(basis: &[SVec], c: &SVec) -> SVec {
    let terms: Vec<(Q, &SVec)> = c.iter().map(|(i, x)| (x.clone(), &basis[*i])).collect();
    crate::linalg::svec_combine(&terms)
}

/// Build H(ker s̃) per (degree, word), check HΦ is an isomorphism onto H(₍N₎𝒦)
/// and S∘HΦ = −HΦ∘c on every degree whose image lies in the window.
pub fn ker_s_model(lm: &LoopModel, cm: &CyclicModel, max_deg: i64) -> Result<KerSModel> {
    let keys: Vec<(i64, i64)> =
        (1..=max_deg).flat_map(|n| (1..=lm.max_word(n).max(1)).map(move |w| (n, w))).collect();
    let ks: HashMap<(i64, i64), HomologyDeg> = keys
        .par_iter()
        .map(|&(n, w)| ker_s_homology(lm, n, w).map(|h| ((n, w), h)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .collect();
    let hc = component_homology(lm, cm, 1, max_deg)?;
    let mut rows = Vec::new();
    let mut c_trivial = true;
    let phi = |a: &Element| cm.lift(a);
    for &(n, w) in &keys {
        let k = &ks[&(n, w)];
        let empty = empty_homology(n);
        let h = hc.get(&(n, w)).unwrap_or(&empty);
        let hphi = induced_map(&phi, k, h)?;
        if k.dim() != h.dim() || hphi.rank() != k.dim() {
            return Err(Error::Consistency(format!(
                "H(Phi) is not an isomorphism at degree {n}, component {w}: {} vs {}",
                k.dim(),
                h.dim()
            )));
        }
        let mut c_rank = 0;
        if n + 2 <= max_deg && w >= 1 {
            // c: H^n(K^{(w)}) → H^{n+2}(K^{(w−1)}); K^{(0)} = 0
            let empty_k = empty_homology(n + 2);
            let tgt_k = if w >= 2 { ks.get(&(n + 2, w - 1)).unwrap_or(&empty_k) } else { &empty_k };
            let tgt_h = hc.get(&(n + 2, w - 1)).unwrap_or(&empty_k);
            let src_s = ChainSpace::new(n + 1, lm.component_basis(n + 1, w - 1));
            let s_cols = matrix_of(&src_s, &k.chains, |m| lm.s.apply_mono(lm.alg(), m), "s")?;
            let mut cols = Vec::new();
            for rep in k.reps() {
                let y = k.chains.vec(&rep).unwrap();
                let alpha = solve(&s_cols, &y)
                    .ok_or_else(|| Error::Consistency(format!("ker s~ != Im s~ at degree {n}, word {w}")))?;
                let alpha = src_s.element(&alpha);
                let da = lm.delta(&alpha);
                let c_val = if w >= 2 {
                    tgt_k.coords(&da).ok_or_else(|| Error::Consistency("c image is not a cocycle".into()))?
                } else {
                    if !da.is_zero() && !da.terms.keys().all(|m| lm.word_length(m) == 0) {
                        return Err(Error::Consistency("c image has the wrong word length".into()));
                    }
                    Vec::new()
                };
                // S∘HΦ = −HΦ∘c
                let lhs = tgt_h
                    .coords(&cm.times_u(&cm.lift(&rep), 1))
                    .ok_or_else(|| Error::Consistency("S image is not a cocycle".into()))?;
                let rhs = tgt_h
                    .coords(&cm.lift(&da).neg())
                    .ok_or_else(|| Error::Consistency("Phi c image is not a cocycle".into()))?;
                if lhs != rhs {
                    return Err(Error::Consistency(format!("S Phi != -Phi c at degree {n}, word {w}")));
                }
                cols.push(c_val);
            }
            c_rank = crate::linalg::rank(&cols);
            if c_rank > 0 {
                c_trivial = false;
            }
        }
        rows.push(KerSRow { degree: n, word: w, dim_ker_s: k.dim(), dim_hc: h.dim(), c_rank });
    }
    Ok(KerSModel { max_degree: max_deg, rows, c_trivial })
}
