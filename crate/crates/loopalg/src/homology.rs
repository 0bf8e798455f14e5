//! Degree-wise homology by exact sparse elimination, induced maps and the
//! Connes maps π, β, S between HH = H(𝓛) and HC⁻ = H(𝓔).

use std::collections::HashMap;

use rayon::prelude::*;

use crate::algebra::{Algebra, Element, Mono, Q};
use crate::linalg::{kernel_image, rank, svec_from_map, SVec, Subquotient};
use crate::loop_models::{CyclicModel, FullE, FullL, LoopModel};
use crate::{Error, Result};

/// A cochain complex spanned by monomials of a free algebra, with a degree +1 differential.
pub trait Complex: Sync {
    fn algebra(&self) -> &Algebra;
    fn basis(&self, n: i64) -> Vec<Mono>;
    fn diff_mono(&self, m: &Mono) -> Element;
}

/// Soft cap on matrix workspace from `LOOPALG_MAX_MEM_MB`, in bytes.
pub fn mem_budget() -> Option<usize> {
    std::env::var("LOOPALG_MAX_MEM_MB").ok()?.trim().parse::<usize>().ok().map(|mb| mb << 20)
}

// rough bytes per stored rational entry, tags included
const ENTRY_BYTES: usize = 160;

fn check_budget(nnz: usize, what: &str) -> Result<()> {
    if let Some(b) = mem_budget() {
        if nnz.saturating_mul(ENTRY_BYTES) > b {
            return Err(Error::Domain(format!(
                "{what}: about {} MB of matrix workspace exceeds LOOPALG_MAX_MEM_MB",
                nnz * ENTRY_BYTES >> 20
            )));
        }
    }
    Ok(())
}

/// A finite monomial basis with coordinate conversion.
#[derive(Clone, Debug)]
pub struct ChainSpace {
    pub degree: i64,
    pub basis: Vec<Mono>,
    index: HashMap<Mono, usize>,
}

impl ChainSpace {
    pub fn new(degree: i64, basis: Vec<Mono>) -> Self {
        let index = basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        ChainSpace { degree, basis, index }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, m: &Mono) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Coordinates of `e`; `None` if a term lies outside the basis.
    pub fn vec(&self, e: &Element) -> Option<SVec> {
        let mut v = Vec::with_capacity(e.terms.len());
        for (m, c) in &e.terms {
            v.push((*self.index.get(m)?, c.clone()));
        }
        v.sort_by_key(|x| x.0);
        Some(v)
    }

    pub fn element(&self, v: &SVec) -> Element {
        let mut e = Element::zero();
        for (i, c) in v {
            e.add_term(self.basis[*i].clone(), c.clone());
        }
        e
    }
}

/// Coordinates of the images of every basis monomial of `src` under `f`, in `tgt`.
pub fn matrix_of(
    src: &ChainSpace,
    tgt: &ChainSpace,
    f: impl Fn(&Mono) -> Element,
    what: &str,
) -> Result<Vec<SVec>> {
    src.basis
        .iter()
        .map(|m| {
            let img = f(m);
            tgt.vec(&img).ok_or_else(|| {
                Error::Consistency(format!("{what}: image of a degree-{} basis element leaves the target", src.degree))
            })
        })
        .collect()
}

/// Homology in one degree as cycles modulo boundaries.
#[derive(Clone, Debug)]
pub struct HomologyDeg {
    pub degree: i64,
    pub chains: ChainSpace,
    pub quotient: Subquotient,
    pub boundaries: Vec<SVec>,
}

impl HomologyDeg {
    /// Build from spanning sets of cycles and boundaries inside `chains`.
    pub fn from_spaces(chains: ChainSpace, cycles: &[SVec], boundaries: Vec<SVec>) -> Self {
        let quotient = Subquotient::new(chains.dim(), cycles, &boundaries);
        HomologyDeg { degree: chains.degree, chains, quotient, boundaries }
    }

    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    /// Representative cocycles, one per basis class.
    pub fn reps(&self) -> Vec<Element> {
        self.quotient.reps.iter().map(|v| self.chains.element(v)).collect()
    }

    /// Class coordinates of a cocycle; `None` if `e` is not a cocycle of this complex.
    pub fn coords(&self, e: &Element) -> Option<SVec> {
        self.quotient.coords(&self.chains.vec(e)?)
    }

    pub fn coords_vec(&self, v: &SVec) -> Option<SVec> {
        self.quotient.coords(v)
    }

    pub fn is_boundary(&self, e: &Element) -> bool {
        matches!(self.coords(e), Some(c) if c.is_empty())
    }
}

/// Homology of `c` in degree n.
pub fn homology_deg(c: &dyn Complex, n: i64) -> Result<HomologyDeg> {
    let prev = ChainSpace::new(n - 1, c.basis(n - 1));
    let here = ChainSpace::new(n, c.basis(n));
    let next = ChainSpace::new(n + 1, c.basis(n + 1));
    let out = matrix_of(&here, &next, |m| c.diff_mono(m), "differential")?;
    let inc = matrix_of(&prev, &here, |m| c.diff_mono(m), "differential")?;
    let nnz: usize = out.iter().chain(inc.iter()).map(|v| v.len()).sum();
    check_budget(nnz + here.dim() * 2, &format!("degree {n}"))?;
    let cycles = kernel_image(&out).kernel;
    let ki = kernel_image(&inc);
    let boundaries: Vec<SVec> = ki.image.rows().cloned().collect();
    Ok(HomologyDeg::from_spaces(here, &cycles, boundaries))
}

#[derive(Clone, Debug)]
pub struct HomologyWindow {
    pub lo: i64,
    pub hi: i64,
    pub degrees: Vec<HomologyDeg>,
}

impl HomologyWindow {
    pub fn get(&self, n: i64) -> Option<&HomologyDeg> {
        if n < self.lo || n > self.hi {
            return None;
        }
        self.degrees.get((n - self.lo) as usize)
    }

    pub fn dims(&self) -> Vec<usize> {
        self.degrees.iter().map(|h| h.dim()).collect()
    }
}

/// Homology of `c` in every degree of [lo, hi], computed degree-parallel.
pub fn homology_window(c: &dyn Complex, lo: i64, hi: i64) -> Result<HomologyWindow> {
    let degrees = (lo..=hi).into_par_iter().map(|n| homology_deg(c, n)).collect::<Result<Vec<_>>>()?;
    Ok(HomologyWindow { lo, hi, degrees })
}

/// Matrix of an induced map in one degree, by columns (source class → target coordinates).
#[derive(Clone, Debug)]
pub struct InducedDeg {
    pub src_degree: i64,
    pub tgt_degree: i64,
    pub src_dim: usize,
    pub tgt_dim: usize,
    pub columns: Vec<SVec>,
}

impl InducedDeg {
    pub fn rank(&self) -> usize {
        rank(&self.columns)
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.is_empty())
    }

    pub fn apply(&self, v: &SVec) -> SVec {
        let mut acc = std::collections::BTreeMap::new();
        for (i, c) in v {
            for (j, x) in &self.columns[*i] {
                *acc.entry(*j).or_insert_with(|| Q::from_integer(0.into())) += c * x;
            }
        }
        svec_from_map(acc)
    }

    /// Matrix of `other ∘ self`.
    pub fn then(&self, other: &InducedDeg) -> InducedDeg {
        InducedDeg {
            src_degree: self.src_degree,
            tgt_degree: other.tgt_degree,
            src_dim: self.src_dim,
            tgt_dim: other.tgt_dim,
            columns: self.columns.iter().map(|c| other.apply(c)).collect(),
        }
    }

    /// Kernel of the matrix, as source coordinate vectors.
    pub fn kernel(&self) -> Vec<SVec> {
        kernel_image(&self.columns).kernel
    }
}

/// Map `f` induced on homology from `src` to `tgt`. Representatives must map
/// to cocycles and boundaries to boundaries; otherwise `f` is not a chain map.
pub fn induced_map(
    f: &(dyn Fn(&Element) -> Element + Sync),
    src: &HomologyDeg,
    tgt: &HomologyDeg,
) -> Result<InducedDeg> {
    let mut columns = Vec::with_capacity(src.dim());
    for r in src.reps() {
        let img = f(&r);
        match tgt.coords(&img) {
            Some(c) => columns.push(c),
            None => {
                return Err(Error::NotChainMap(format!(
                    "image of a degree-{} cocycle is not a cocycle in degree {}",
                    src.degree, tgt.degree
                )))
            }
        }
    }
    for b in &src.boundaries {
        let img = f(&src.chains.element(b));
        if !tgt.is_boundary(&img) {
            return Err(Error::NotChainMap(format!("a boundary in degree {} maps to a nonzero class", src.degree)));
        }
    }
    Ok(InducedDeg { src_degree: src.degree, tgt_degree: tgt.degree, src_dim: src.dim(), tgt_dim: tgt.dim(), columns })
}

/// The Connes maps with their exactness verdicts on a window.
#[derive(Clone, Debug)]
pub struct ConnesMaps {
    pub hh: HomologyWindow,
    pub hc: HomologyWindow,
    /// π: HC⁻ⁿ → HHⁿ.
    pub pi: Vec<InducedDeg>,
    /// β: HHⁿ → HC⁻ⁿ⁻¹.
    pub beta: Vec<InducedDeg>,
    /// S: HC⁻ⁿ → HC⁻ⁿ⁺².
    pub s: Vec<InducedDeg>,
}

impl ConnesMaps {
    pub fn pi_at(&self, n: i64) -> Option<&InducedDeg> {
        self.pi.iter().find(|m| m.src_degree == n)
    }
    pub fn beta_at(&self, n: i64) -> Option<&InducedDeg> {
        self.beta.iter().find(|m| m.src_degree == n)
    }
    pub fn s_at(&self, n: i64) -> Option<&InducedDeg> {
        self.s.iter().find(|m| m.src_degree == n)
    }
}

/// π, β and S on degrees 0..=max_degree, with rank-exactness of
/// ⋯ → HC⁻ⁿ⁻² →S HC⁻ⁿ →π HHⁿ →β HC⁻ⁿ⁻¹ →S HC⁻ⁿ⁺¹ → ⋯ checked at every joint inside the window.
pub fn connes_maps(lm: &LoopModel, cm: &CyclicModel, max_degree: i64) -> Result<ConnesMaps> {
    let hh = homology_window(&FullL(lm), 0, max_degree)?;
    let hc = homology_window(&FullE(cm), 0, max_degree)?;
    let pi_f = |a: &Element| cm.project(a);
    let beta_f = |a: &Element| cm.lift(&lm.s_apply(a));
    let s_f = |a: &Element| cm.times_u(a, 1);
    let mut pi = Vec::new();
    let mut beta = Vec::new();
    let mut s = Vec::new();
    for n in 0..=max_degree {
        pi.push(induced_map(&pi_f, hc.get(n).unwrap(), hh.get(n).unwrap())?);
        if n >= 1 {
            beta.push(induced_map(&beta_f, hh.get(n).unwrap(), hc.get(n - 1).unwrap())?);
        }
        if n + 2 <= max_degree {
            s.push(induced_map(&s_f, hc.get(n).unwrap(), hc.get(n + 2).unwrap())?);
        }
    }
    let cmaps = ConnesMaps { hh, hc, pi, beta, s };
    check_connes_exactness(&cmaps, max_degree)?;
    Ok(cmaps)
}

fn exact_at(incoming: Option<&InducedDeg>, outgoing: &InducedDeg, dim: usize, joint: &str) -> Result<()> {
    let r_in = incoming.map(|m| m.rank()).unwrap_or(0);
    if let Some(m) = incoming {
        if !m.then(outgoing).is_zero() {
            return Err(Error::Consistency(format!("Connes sequence: composite through {joint} is nonzero")));
        }
    }
    let ker = dim - outgoing.rank();
    if ker != r_in {
        return Err(Error::Consistency(format!(
            "Connes sequence not exact at {joint}: dim ker = {ker}, rank of incoming map = {r_in}"
        )));
    }
    Ok(())
}

fn check_connes_exactness(c: &ConnesMaps, max_degree: i64) -> Result<()> {
    for n in 0..=max_degree {
        // at HC⁻ⁿ: ker π = Im S
        let s_in = if n >= 2 { c.s_at(n - 2) } else { None };
        exact_at(s_in, c.pi_at(n).unwrap(), c.hc.get(n).unwrap().dim(), &format!("HC^{n}"))?;
        // at HHⁿ: ker β = Im π
        if let Some(b) = c.beta_at(n) {
            exact_at(c.pi_at(n), b, c.hh.get(n).unwrap().dim(), &format!("HH^{n}"))?;
        }
        // at HC⁻ⁿ⁻¹: ker S = Im β
        if n >= 1 {
            if let Some(sm) = c.s_at(n - 1) {
                exact_at(c.beta_at(n), sm, c.hc.get(n - 1).unwrap().dim(), &format!("HC^{}", n - 1))?;
            }
        }
    }
    Ok(())
}
