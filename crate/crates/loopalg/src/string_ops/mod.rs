//! String brackets.
//!
//! Manifold side: a representative of path composition, a section of
//! ε_𝓟 ⊗ 1 and the shriek class give the composite
//! 𝓛 → 𝓛⊗_{∧V}𝓛 → 𝓟⊗_{(∧V)⊗2}𝓛^{⊗2} → 𝓛^{⊗2} inducing Dlp, and the dual
//! string bracket is Dsb = (β⊗β)∘Dlp∘π. Classifying spaces live in [`bg`].

pub mod bg;
pub mod loop_homology;
pub mod names;

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};

use crate::algebra::{basis_where, mul, tensor_square, Algebra, AlgebraMap, Cdga, Derivation, Element, Generator, Mono, Q, Slot, Tag};
use crate::homology::{homology_deg, induced_map, HomologyDeg, InducedDeg};
use crate::linalg::{solve, svec_from_map, svec_unit, Projection, SVec};
use crate::loop_models::{build_e, build_l, pad, CyclicModel, FullE, FullL, LoopModel};
use crate::model_io::{format_element, ModelFile};
use crate::{Error, Result};

pub use names::Named;

fn gen_like(g: &Generator, degree: i32, tag: Tag, slot: Slot) -> Generator {
    Generator { name: g.name.clone(), degree, tag, slot }
}

fn gens_map(alg: &Algebra, idx: impl Fn(usize) -> usize, n: usize) -> AlgebraMap {
    AlgebraMap { values: (0..n).map(|i| Element::gen(alg, idx(i))).collect() }
}

fn hat_count(m: &Mono, hats: &[usize]) -> u32 {
    hats.iter().map(|&i| m.0[i] as u32).sum()
}

/// Some x in the span of `unknowns` with `maps[k](x) = targets[k]` for every k.
fn solve_affine(unknowns: &[Mono], maps: &[&dyn Fn(&Mono) -> Element], targets: &[Element]) -> Option<Element> {
    let mut index: HashMap<(usize, Mono), usize> = HashMap::new();
    let mut slot = |k: usize, m: &Mono| {
        let n = index.len();
        *index.entry((k, m.clone())).or_insert(n)
    };
    let mut cols = Vec::with_capacity(unknowns.len());
    for u in unknowns {
        let mut col = BTreeMap::new();
        for (k, f) in maps.iter().enumerate() {
            for (m, c) in &f(u).terms {
                *col.entry(slot(k, m)).or_insert_with(Q::zero) += c;
            }
        }
        cols.push(svec_from_map(col));
    }
    let mut b = BTreeMap::new();
    for (k, t) in targets.iter().enumerate() {
        for (m, c) in &t.terms {
            *b.entry(slot(k, m)).or_insert_with(Q::zero) += c;
        }
    }
    let x = solve(&cols, &svec_from_map(b))?;
    let mut e = Element::zero();
    for (i, c) in x {
        e.add_term(unknowns[i].clone(), c);
    }
    Some(e)
}

/// Base generators sorted by degree, ties by position.
fn degree_order(base: &Cdga) -> Vec<usize> {
    let mut order: Vec<usize> = (0..base.alg.len()).collect();
    order.sort_by_key(|&i| (base.alg.gens[i].degree, i));
    order
}

/// The relative model 𝓟 = ∧(V', V'', V̂) of the free path space, with
/// D(v̂) = v'' − v' + c_v, the correction c_v chosen τ-antisymmetric and
/// restricting to δv̄ on the diagonal.
#[derive(Clone, Debug)]
pub struct PathModel {
    pub p: Cdga,
    /// c_v per base generator.
    pub corrections: Vec<Element>,
}

impl PathModel {
    fn n(&self) -> usize {
        self.p.alg.len() / 3
    }

    pub fn hat(&self, i: usize) -> usize {
        2 * self.n() + i
    }
}

pub fn build_path(lm: &LoopModel) -> Result<PathModel> {
    let base = &lm.base;
    let n = base.alg.len();
    let mut gens = Vec::with_capacity(3 * n);
    for slot in [Slot::Left, Slot::Right] {
        for g in &base.alg.gens {
            gens.push(gen_like(g, g.degree, Tag::Base, slot));
        }
    }
    for g in &base.alg.gens {
        gens.push(gen_like(g, g.degree - 1, Tag::Bar, Slot::Plain));
    }
    let alg = Algebra::new(gens);
    let first = gens_map(&alg, |i| i, n);
    let second = gens_map(&alg, |i| n + i, n);
    let to_l = AlgebraMap {
        values: (0..3 * n).map(|i| if i < 2 * n { Element::gen(lm.alg(), i % n) } else { Element::gen(lm.alg(), lm.bar(i - 2 * n)) }).collect(),
    };
    let tau = AlgebraMap {
        values: (0..3 * n)
            .map(|i| match i / n {
                0 => Element::gen(&alg, n + i),
                1 => Element::gen(&alg, i - n),
                _ => Element::gen(&alg, i).neg(),
            })
            .collect(),
    };
    let mut d = Derivation::zero(&alg, 1);
    for i in 0..n {
        d.values[i] = first.apply(&alg, &base.d.values[i]);
        d.values[n + i] = second.apply(&alg, &base.d.values[i]);
    }
    let hats: Vec<usize> = (2 * n..3 * n).collect();
    let mut done = vec![false; n];
    let mut corrections = vec![Element::zero(); n];
    for v in degree_order(base) {
        let dv = &base.d.values[v];
        let target = first.apply(&alg, dv).minus(&second.apply(&alg, dv));
        let diag = lm.l.d.values[lm.bar(v)].clone();
        let unknowns = basis_where(&alg, base.alg.gens[v].degree as i64, |m| {
            hat_count(m, &hats) >= 1 && (0..n).all(|j| done[j] || m.0[2 * n + j] == 0)
        });
        let dd = d.clone();
        let f_d = |m: &Mono| dd.apply_mono(&alg, m);
        let f_diag = |m: &Mono| to_l.apply_mono(lm.alg(), m);
        let c0 = solve_affine(&unknowns, &[&f_d, &f_diag], &[target.clone(), diag.clone()]).ok_or_else(|| {
            Error::Domain(format!(
                "no path-space correction for {}: obstruction {}",
                base.alg.gens[v].name,
                format_element(&alg, &target)
            ))
        })?;
        let c = c0.minus(&tau.apply(&alg, &c0)).scale(&Q::new(1.into(), 2.into()));
        if d.apply(&alg, &c) != target || to_l.apply(lm.alg(), &c) != diag {
            return Err(Error::Consistency(format!("antisymmetrised path correction for {} fails", base.alg.gens[v].name)));
        }
        d.values[2 * n + v] = Element::gen(&alg, n + v).minus(&Element::gen(&alg, v)).plus(&c);
        corrections[v] = c;
        done[v] = true;
    }
    let p = Cdga::new("P", alg, d).map_err(|e| Error::Consistency(format!("path model: {e}")))?;
    Ok(PathModel { p, corrections })
}

/// Representative of path composition: Φ: 𝓟 → 𝓟⊗_{∧V}𝓟 and the induced
/// M_Comp: 𝓛 → 𝓛⊗_{∧V}𝓛. The target of M_Comp is realised inside 𝓛^{⊗2}
/// with every base generator placed in the left slot.
#[derive(Clone, Debug)]
pub struct CompRepresentative {
    /// ∧(V', V_m, V'', V̂¹, V̂²).
    pub composite: Cdga,
    /// Φ(v̂) per base generator.
    pub phi: Vec<Element>,
    /// M_Comp on the generators of 𝓛, as elements of 𝓛^{⊗2}.
    pub map: AlgebraMap,
}

impl CompRepresentative {
    /// The part of M_Comp(v̄) beyond 1⊗v̄ + v̄⊗1.
    pub fn correction(&self, lm: &LoopModel, sq: &Cdga, i: usize) -> Element {
        let n = lm.rank();
        let naive = Element::gen(&sq.alg, n + i).plus(&Element::gen(&sq.alg, 3 * n + i));
        self.map.values[lm.bar(i)].minus(&naive)
    }
}

/// 𝓛^{⊗2} → 𝓛^{⊗2} identifying right base generators with left ones; this
/// realises the quotient onto 𝓛⊗_{∧V}𝓛.
fn collapse_map(sq: &Cdga, n: usize) -> AlgebraMap {
    AlgebraMap { values: (0..4 * n).map(|i| Element::gen(&sq.alg, if (2 * n..3 * n).contains(&i) { i - 2 * n } else { i })).collect() }
}

pub fn build_comp(lm: &LoopModel, path: &PathModel, sq: &Cdga) -> Result<CompRepresentative> {
    let base = &lm.base;
    let n = base.alg.len();
    let pa = &path.p.alg;
    // generator blocks: V', V_m, V'', V̂¹, V̂²
    let mut gens = Vec::with_capacity(5 * n);
    for slot in [Slot::Left, Slot::Plain, Slot::Right] {
        for g in &base.alg.gens {
            gens.push(gen_like(g, g.degree, Tag::Base, slot));
        }
    }
    for slot in [Slot::Left, Slot::Right] {
        for g in &base.alg.gens {
            gens.push(gen_like(g, g.degree - 1, Tag::Bar, slot));
        }
    }
    let alg = Algebra::new(gens);
    let blk = |b: usize, i: usize| Element::gen(&alg, b * n + i);
    let j1 = AlgebraMap { values: (0..3 * n).map(|i| blk([0, 1, 3][i / n], i % n)).collect() };
    let j2 = AlgebraMap { values: (0..3 * n).map(|i| blk([1, 2, 4][i / n], i % n)).collect() };
    let mut d = Derivation::zero(&alg, 1);
    for i in 0..n {
        for b in 0..3 {
            let m = gens_map(&alg, |j| b * n + j, n);
            d.values[b * n + i] = m.apply(&alg, &base.d.values[i]);
        }
        let dh = &path.p.d.values[path.hat(i)];
        d.values[3 * n + i] = j1.apply(&alg, dh);
        d.values[4 * n + i] = j2.apply(&alg, dh);
    }
    let composite = Cdga::new("PxP", alg.clone(), d).map_err(|e| Error::Consistency(format!("composite path model: {e}")))?;
    let tau = AlgebraMap {
        values: (0..5 * n)
            .map(|i| match i / n {
                0 => blk(2, i % n),
                1 => blk(1, i % n),
                2 => blk(0, i % n),
                3 => blk(4, i % n).neg(),
                _ => blk(3, i % n).neg(),
            })
            .collect(),
    };
    let mut phi_vals: Vec<Element> = (0..3 * n)
        .map(|i| match i / n {
            0 => blk(0, i),
            1 => blk(2, i - n),
            _ => Element::zero(),
        })
        .collect();
    let hats: Vec<usize> = (3 * n..5 * n).collect();
    for v in degree_order(base) {
        let c = &path.corrections[v];
        let phi = AlgebraMap { values: phi_vals.clone() };
        let target = phi.apply(&alg, c).minus(&j1.apply(&alg, c)).minus(&j2.apply(&alg, c));
        let unknowns = basis_where(&alg, base.alg.gens[v].degree as i64 - 1, |m| hat_count(m, &hats) >= 1);
        let f_d = |m: &Mono| composite.d.apply_mono(&alg, m);
        let e0 = solve_affine(&unknowns, &[&f_d], &[target.clone()]).ok_or_else(|| {
            Error::Domain(format!(
                "no composition correction for {}: obstruction {}",
                base.alg.gens[v].name,
                format_element(&alg, &target)
            ))
        })?;
        let e = e0.minus(&tau.apply(&alg, &e0)).scale(&Q::new(1.into(), 2.into()));
        if composite.diff(&e) != target {
            return Err(Error::Consistency(format!("antisymmetrised composition correction for {} fails", base.alg.gens[v].name)));
        }
        phi_vals[2 * n + v] = blk(3, v).plus(&blk(4, v)).plus(&e);
    }
    let phi = AlgebraMap { values: phi_vals };
    for g in 0..3 * n {
        let lhs = composite.diff(&phi.values[g]);
        let rhs = phi.apply(&alg, &path.p.d.values[g]);
        if lhs != rhs {
            return Err(Error::NotChainMap(format!("composition map on {}", pa.gens[g].symbol())));
        }
    }
    // reduction to 𝓛⊗_{∧V}𝓛 ⊂ 𝓛^{⊗2}
    let sqa = &sq.alg;
    let rho = AlgebraMap {
        values: (0..5 * n)
            .map(|i| match i / n {
                0..=2 => Element::gen(sqa, i % n),
                3 => Element::gen(sqa, n + i % n),
                _ => Element::gen(sqa, 3 * n + i % n),
            })
            .collect(),
    };
    let mut mvals = Vec::with_capacity(2 * n);
    for i in 0..n {
        mvals.push(Element::gen(sqa, i));
    }
    for i in 0..n {
        mvals.push(rho.apply(sqa, &phi.values[2 * n + i]));
    }
    let map = AlgebraMap { values: mvals };
    let collapse = collapse_map(sq, n);
    for g in 0..2 * n {
        let lhs = collapse.apply(sqa, &sq.diff(&map.values[g]));
        let rhs = map.apply(sqa, &lm.l.d.values[g]);
        if lhs != rhs {
            return Err(Error::NotChainMap(format!("M_Comp on {}", lm.alg().gens[g].symbol())));
        }
    }
    Ok(CompRepresentative { composite, phi: phi.values[2 * n..].to_vec(), map })
}

/// A section σ of ε_𝓟 ⊗ 1, from 𝓛⊗_{∧V}𝓛 (inside 𝓛^{⊗2}) to
/// 𝓟⊗_{(∧V)⊗2}𝓛^{⊗2} = ∧(V̂) ⊗ 𝓛^{⊗2}.
#[derive(Clone, Debug)]
pub struct SectionMap {
    /// Generators: those of 𝓛^{⊗2} followed by the path hats.
    pub target: Cdga,
    pub map: AlgebraMap,
}

impl SectionMap {
    fn hats(&self) -> std::ops::Range<usize> {
        let n = self.target.alg.len() / 5;
        4 * n..5 * n
    }

    /// (ε_𝓟 ⊗ 1): hats to zero, right base generators identified with left ones.
    pub fn epsilon(&self, sq: &Cdga, e: &Element) -> Element {
        let n = self.target.alg.len() / 5;
        let collapse = collapse_map(sq, n);
        let mut r = Element::zero();
        for (m, c) in &e.terms {
            if self.hats().any(|i| m.0[i] > 0) {
                continue;
            }
            let mono = Mono(m.0[..4 * n].to_vec());
            r.add_scaled(&collapse.apply_mono(&sq.alg, &mono), c);
        }
        r
    }
}

pub fn build_section(lm: &LoopModel, path: &PathModel, sq: &Cdga) -> Result<SectionMap> {
    let base = &lm.base;
    let n = base.alg.len();
    let mut gens = sq.alg.gens.clone();
    gens.extend(path.p.alg.gens[2 * n..].iter().cloned());
    let alg = Algebra::new(gens);
    let kappa = AlgebraMap {
        values: (0..3 * n)
            .map(|i| match i / n {
                0 => Element::gen(&alg, i),
                1 => Element::gen(&alg, 2 * n + i - n),
                _ => Element::gen(&alg, 4 * n + i - 2 * n),
            })
            .collect(),
    };
    let mut d = Derivation::zero(&alg, 1);
    for i in 0..4 * n {
        d.values[i] = pad(&sq.d.values[i], 5 * n);
    }
    for i in 0..n {
        d.values[4 * n + i] = kappa.apply(&alg, &path.p.d.values[path.hat(i)]);
    }
    let target = Cdga::new("PL2", alg.clone(), d).map_err(|e| Error::Consistency(format!("section target: {e}")))?;
    let collapse = collapse_map(sq, n);
    let mut vals: Vec<Element> = (0..4 * n)
        .map(|i| match i / n {
            0 | 2 => Element::gen(&alg, i % n),
            _ => Element::zero(),
        })
        .collect();
    let hats: Vec<usize> = (4 * n..5 * n).collect();
    for v in degree_order(base) {
        for g in [n + v, 3 * n + v] {
            let sigma = AlgebraMap { values: vals.clone() };
            let naive = Element::gen(&alg, g);
            let want = sigma.apply(&alg, &collapse.apply(&sq.alg, &sq.d.values[g]));
            let rhs = want.minus(&target.diff(&naive));
            let unknowns = basis_where(&alg, sq.alg.gens[g].degree as i64, |m| hat_count(m, &hats) >= 1);
            let f_d = |m: &Mono| target.d.apply_mono(&alg, m);
            let k = solve_affine(&unknowns, &[&f_d], &[rhs.clone()]).ok_or_else(|| {
                Error::Domain(format!("no section correction for {}: obstruction {}", sq.alg.gens[g].symbol(), format_element(&alg, &rhs)))
            })?;
            vals[g] = naive.plus(&k);
        }
    }
    let section = SectionMap { target, map: AlgebraMap { values: vals } };
    for g in 0..4 * n {
        let lhs = section.target.diff(&section.map.values[g]);
        let rhs = section.map.apply(&alg, &collapse.apply(&sq.alg, &sq.d.values[g]));
        if lhs != rhs {
            return Err(Error::NotChainMap(format!("section on {}", sq.alg.gens[g].symbol())));
        }
        let back = section.epsilon(sq, &section.map.values[g]);
        if back != collapse.apply(&sq.alg, &Element::gen(&sq.alg, g)) {
            return Err(Error::Consistency(format!("(eps x 1) o sigma != id on {}", sq.alg.gens[g].symbol())));
        }
    }
    Ok(section)
}

/// Which side the shriek class multiplies from; the two choices differ by
/// (−1)^{d·|w|} on a class of degree |w|.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShriekSide {
    Left,
    Right,
}

/// Diag!: (∧V)^{⊗2}-linear of degree d, zero on positive hat words, given by
/// its value on 1.
#[derive(Clone, Debug)]
pub struct ShriekData {
    pub degree: i64,
    /// Diag!(1) in 𝓛^{⊗2}.
    pub class: Element,
}

impl ShriekData {
    /// From a class in the slot algebra of the base (`L`/`R` slots).
    pub fn from_slots(lm: &LoopModel, sq: &Cdga, class: &Element) -> Result<Self> {
        let n = lm.rank();
        let emb = gens_map(&sq.alg, |i| if i < n { i } else { 2 * n + i - n }, 2 * n);
        let class = emb.apply(&sq.alg, class);
        let degree = class.degree(&sq.alg).ok_or_else(|| Error::Domain("shriek class is zero or inhomogeneous".into()))?;
        let s = ShriekData { degree, class };
        s.validate(lm, sq)?;
        Ok(s)
    }

    /// ∏ (−g⊗1 + 1⊗g) over the base generators, in generator order.
    pub fn product_of_differences(lm: &LoopModel, sq: &Cdga) -> Result<Self> {
        let n = lm.rank();
        let mut c = Element::one(&sq.alg);
        for i in 0..n {
            let f = Element::gen(&sq.alg, 2 * n + i).minus(&Element::gen(&sq.alg, i));
            c = mul(&sq.alg, &c, &f);
        }
        let degree = c.degree(&sq.alg).unwrap_or(0);
        let s = ShriekData { degree, class: c };
        s.validate(lm, sq)?;
        Ok(s)
    }

    /// Diag! commutes with the differentials: the class is a cocycle and is
    /// killed by every v⊗1 − 1⊗v.
    pub fn validate(&self, lm: &LoopModel, sq: &Cdga) -> Result<()> {
        let n = lm.rank();
        if self.class.is_zero() {
            return Err(Error::Domain("shriek class is zero".into()));
        }
        if !sq.diff(&self.class).is_zero() {
            return Err(Error::NotChainMap("shriek class is not a cocycle".into()));
        }
        for i in 0..n {
            let f = Element::gen(&sq.alg, 2 * n + i).minus(&Element::gen(&sq.alg, i));
            if !mul(&sq.alg, &self.class, &f).is_zero() {
                return Err(Error::NotChainMap(format!(
                    "shriek class is not annihilated by 1x{0} - {0}x1",
                    lm.base.alg.gens[i].name
                )));
            }
        }
        Ok(())
    }
}

/// Class coordinates in H(𝓛)⊗H(𝓛): keys (deg a, index a, deg b, index b).
pub type TensorClass = BTreeMap<(i64, usize, i64, usize), Q>;

fn tensor_add(t: &mut TensorClass, k: (i64, usize, i64, usize), c: Q) {
    let e = t.entry(k).or_insert_with(Q::zero);
    *e += c;
    if e.is_zero() {
        t.remove(&k);
    }
}

struct HhDeg {
    h: HomologyDeg,
    proj: Projection,
}

/// The full manifold-side pipeline for one model and shriek class.
pub struct Pipeline {
    pub lm: LoopModel,
    pub cm: CyclicModel,
    pub sq: Cdga,
    pub path: PathModel,
    pub comp: CompRepresentative,
    pub section: SectionMap,
    pub shriek: ShriekData,
    pub side: ShriekSide,
    hh: Mutex<BTreeMap<i64, Arc<HhDeg>>>,
    hc: Mutex<BTreeMap<i64, Arc<HomologyDeg>>>,
    beta: Mutex<BTreeMap<i64, Arc<InducedDeg>>>,
}

impl Pipeline {
    pub fn new(lm: LoopModel, shriek_slots: Option<&Element>) -> Result<Self> {
        let cm = build_e(&lm)?;
        let sq = tensor_square(&lm.l);
        let path = build_path(&lm)?;
        let comp = build_comp(&lm, &path, &sq)?;
        let section = build_section(&lm, &path, &sq)?;
        let shriek = match shriek_slots {
            Some(c) => ShriekData::from_slots(&lm, &sq, c)?,
            None => ShriekData::product_of_differences(&lm, &sq)?,
        };
        Ok(Pipeline {
            lm,
            cm,
            sq,
            path,
            comp,
            section,
            shriek,
            side: ShriekSide::Left,
            hh: Mutex::new(BTreeMap::new()),
            hc: Mutex::new(BTreeMap::new()),
            beta: Mutex::new(BTreeMap::new()),
        })
    }

    /// From a parsed model file; the file's shriek block is required unless
    /// `heuristic` allows the product-of-differences guess.
    pub fn from_model(mf: &ModelFile, heuristic: bool) -> Result<Self> {
        let lm = build_l(&mf.cdga)?;
        match (&mf.shriek, heuristic) {
            (Some(c), _) => Pipeline::new(lm, Some(c)),
            (None, true) => Pipeline::new(lm, None),
            (None, false) => Err(Error::Domain(format!("model {} carries no shriek block", mf.cdga.name))),
        }
    }

    pub fn n(&self) -> usize {
        self.lm.rank()
    }

    /// M_Comp(v̄) for base generator i, in 𝓛^{⊗2}.
    pub fn comp_bar(&self, i: usize) -> &Element {
        &self.comp.map.values[self.lm.bar(i)]
    }

    /// σ on a generator of 𝓛^{⊗2}.
    pub fn section_gen(&self, g: usize) -> &Element {
        &self.section.map.values[g]
    }

    fn hh(&self, n: i64) -> Result<Arc<HhDeg>> {
        if let Some(h) = self.hh.lock().unwrap().get(&n) {
            return Ok(h.clone());
        }
        let h = homology_deg(&FullL(&self.lm), n)?;
        let proj = h.quotient.projection();
        let a = Arc::new(HhDeg { h, proj });
        self.hh.lock().unwrap().insert(n, a.clone());
        Ok(a)
    }

    pub fn hh_deg(&self, n: i64) -> Result<HomologyDeg> {
        Ok(self.hh(n)?.h.clone())
    }

    pub fn hc_deg(&self, n: i64) -> Result<Arc<HomologyDeg>> {
        if let Some(h) = self.hc.lock().unwrap().get(&n) {
            return Ok(h.clone());
        }
        let a = Arc::new(homology_deg(&FullE(&self.cm), n)?);
        self.hc.lock().unwrap().insert(n, a.clone());
        Ok(a)
    }

    /// β: H^n(𝓛) → H^{n−1}(𝓔), induced by s.
    pub fn beta(&self, n: i64) -> Result<Arc<InducedDeg>> {
        if let Some(b) = self.beta.lock().unwrap().get(&n) {
            return Ok(b.clone());
        }
        let src = self.hh(n)?;
        let tgt = self.hc_deg(n - 1)?;
        let f = |e: &Element| self.cm.lift(&self.lm.s_apply(e));
        let b = Arc::new(induced_map(&f, &src.h, &tgt)?);
        self.beta.lock().unwrap().insert(n, b.clone());
        Ok(b)
    }

    /// Coordinates of an 𝓛-cocycle in the homology basis of its degree.
    pub fn hh_coords(&self, e: &Element) -> Result<(i64, SVec)> {
        let n = e.degree(self.lm.alg()).unwrap_or(0);
        let h = self.hh(n)?;
        let c = h.h.coords(e).ok_or_else(|| Error::Domain("element is not a cocycle of L".into()))?;
        Ok((n, c))
    }

    /// Projection of an arbitrary 𝓛 monomial to homology coordinates; a chain
    /// map to (H, 0), so its tensor square computes Künneth coordinates.
    fn project_mono(&self, m: &Mono) -> Result<(i64, SVec)> {
        let n = self.lm.alg().degree(m);
        let h = self.hh(n)?;
        let i = h.h.chains.index_of(m).ok_or_else(|| Error::Consistency("monomial outside its degree basis".into()))?;
        Ok((n, h.proj.apply(&svec_unit(i))))
    }

    /// Künneth coordinates of a cocycle of 𝓛^{⊗2}.
    pub fn tensor_coords(&self, c: &Element) -> Result<TensorClass> {
        if !self.sq.diff(c).is_zero() {
            return Err(Error::NotChainMap("element of L^2 is not a cocycle".into()));
        }
        let k = 2 * self.n();
        let mut out = TensorClass::new();
        let mut cache: HashMap<Mono, (i64, SVec)> = HashMap::new();
        for (m, coef) in &c.terms {
            let a = Mono(m.0[..k].to_vec());
            let b = Mono(m.0[k..].to_vec());
            for x in [&a, &b] {
                if !cache.contains_key(x) {
                    let p = self.project_mono(x)?;
                    cache.insert(x.clone(), p);
                }
            }
            let (da, va) = &cache[&a];
            let (db, vb) = &cache[&b];
            for (i, ca) in va {
                for (j, cb) in vb {
                    tensor_add(&mut out, (*da, *i, *db, *j), coef * ca * cb);
                }
            }
        }
        Ok(out)
    }

    /// a⊗b as an element of 𝓛^{⊗2}.
    pub fn tp(&self, a: &Element, b: &Element) -> Element {
        let (l, r) = crate::algebra::slot_maps(&self.lm.l, &self.sq);
        mul(&self.sq.alg, &l.apply(&self.sq.alg, a), &r.apply(&self.sq.alg, b))
    }

    /// Chain-level composite (Diag!⊗1)∘σ∘M_Comp.
    pub fn dlp_chain(&self, w: &Element) -> Element {
        let sqa = &self.sq.alg;
        let m = self.comp.map.apply(sqa, w);
        let s = self.section.map.apply(&self.section.target.alg, &m);
        let k = 4 * self.n();
        let mut r = Element::zero();
        for (mono, c) in &s.terms {
            if mono.0[k..].iter().any(|&e| e > 0) {
                continue;
            }
            let body = Element::mono(Mono(mono.0[..k].to_vec()), c.clone());
            let t = match self.side {
                ShriekSide::Left => mul(sqa, &self.shriek.class, &body),
                ShriekSide::Right => mul(sqa, &body, &self.shriek.class),
            };
            r.add_scaled(&t, &Q::one());
        }
        r
    }

    /// Dlp of the class of a δ-cocycle.
    pub fn dlp(&self, w: &Element) -> Result<TensorClass> {
        if !self.lm.delta(w).is_zero() {
            return Err(Error::Domain("Dlp input is not a cocycle".into()));
        }
        self.tensor_coords(&self.dlp_chain(w))
    }

    /// (β⊗β) on Künneth coordinates, with sign (−1)^{|a| + d|b|} on a⊗b: the
    /// Koszul sign of β past a and of the degree-d shriek class past b.
    pub fn beta_tensor(&self, t: &TensorClass) -> Result<TensorClass> {
        let d = self.shriek.degree;
        let mut out = TensorClass::new();
        for ((da, i, db, j), c) in t {
            let ba = self.beta(*da)?;
            let bb = self.beta(*db)?;
            let sign = if (da + d * db).rem_euclid(2) == 1 { -Q::one() } else { Q::one() };
            for (k, x) in &ba.columns[*i] {
                for (l, y) in &bb.columns[*j] {
                    tensor_add(&mut out, (da - 1, *k, db - 1, *l), &sign * c * x * y);
                }
            }
        }
        Ok(out)
    }

    /// Dsb of the class of a D-cocycle of 𝓔, in HC⁻⊗HC⁻ coordinates.
    pub fn dsb(&self, c: &Element) -> Result<TensorClass> {
        if !self.cm.e.diff(c).is_zero() {
            return Err(Error::Domain("Dsb input is not a cocycle of E".into()));
        }
        let w = self.cm.project(c);
        self.beta_tensor(&self.dlp(&w)?)
    }
}

#[cfg(test)]
mod tests;
