//! Sparse exact linear algebra: echelon forms with tracked combinations,
//! kernels, images and quotient coordinates.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::algebra::Q;

/// Sparse vector as sorted (index, nonzero value) pairs.
pub type SVec = Vec<(usize, Q)>;

pub fn svec_unit(i: usize) -> SVec {
    vec![(i, Q::one())]
}

pub fn svec_from_map(m: BTreeMap<usize, Q>) -> SVec {
    m.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

pub fn svec_axpy(a: &SVec, c: &Q, b: &SVec) -> SVec {
    // a + c*b
    let mut m: BTreeMap<usize, Q> = a.iter().cloned().collect();
    for (i, v) in b {
        let e = m.entry(*i).or_insert_with(Q::zero);
        *e += c * v;
    }
    svec_from_map(m)
}

pub fn svec_scale(a: &SVec, c: &Q) -> SVec {
    if c.is_zero() {
        return Vec::new();
    }
    a.iter().map(|(i, v)| (*i, v * c)).collect()
}

pub fn svec_dense(a: &SVec, n: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); n];
    for (i, c) in a {
        v[*i] = c.clone();
    }
    v
}

pub fn svec_combine(terms: &[(Q, &SVec)]) -> SVec {
    let mut m: BTreeMap<usize, Q> = BTreeMap::new();
    for (c, v) in terms {
        if c.is_zero() {
            continue;
        }
        for (i, x) in v.iter() {
            *m.entry(*i).or_insert_with(Q::zero) += c * x;
        }
    }
    svec_from_map(m)
}

#[derive(Clone, Debug)]
struct Row {
    vec: SVec,
    tag: SVec,
}

/// Row echelon form. Each row is normalised so that its leading (smallest)
/// index has coefficient one, and leading indices are distinct. Every row
/// carries a tag vector that is transformed alongside it.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<Row>,
    pivot: HashMap<usize, usize>,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> Vec<usize> {
        let mut p: Vec<usize> = self.pivot.keys().cloned().collect();
        p.sort();
        p
    }

    pub fn row(&self, i: usize) -> &SVec {
        &self.rows[i].vec
    }

    pub fn rows(&self) -> impl Iterator<Item = &SVec> {
        self.rows.iter().map(|r| &r.vec)
    }

    /// Reduce `v` (with tag `t`) against the rows; returns remainder and tag.
    pub fn reduce(&self, v: &SVec, t: &SVec) -> (SVec, SVec) {
        let mut w: BTreeMap<usize, Q> = v.iter().cloned().collect();
        let mut tag: BTreeMap<usize, Q> = t.iter().cloned().collect();
        let mut cursor = 0usize;
        loop {
            let next = w
                .range(cursor..)
                .find(|(k, c)| !c.is_zero() && self.pivot.contains_key(k))
                .map(|(k, c)| (*k, c.clone()));
            let (k, c) = match next {
                None => break,
                Some(x) => x,
            };
            let row = &self.rows[self.pivot[&k]];
            for (i, x) in &row.vec {
                let e = w.entry(*i).or_insert_with(Q::zero);
                *e -= &c * x;
            }
            for (i, x) in &row.tag {
                let e = tag.entry(*i).or_insert_with(Q::zero);
                *e -= &c * x;
            }
            w.remove(&k);
            cursor = k + 1;
        }
        (svec_from_map(w), svec_from_map(tag))
    }

    pub fn contains(&self, v: &SVec) -> bool {
        self.reduce(v, &Vec::new()).0.is_empty()
    }

    /// Insert `v` if independent. Returns true on insertion.
    pub fn insert(&mut self, v: &SVec, t: &SVec) -> bool {
        let (r, tag) = self.reduce(v, t);
        if r.is_empty() {
            return false;
        }
        self.push_reduced(r, tag);
        true
    }

    fn push_reduced(&mut self, r: SVec, tag: SVec) {
        let lead = r[0].1.clone();
        let inv = Q::one() / lead;
        let vec = svec_scale(&r, &inv);
        let tag = svec_scale(&tag, &inv);
        self.pivot.insert(vec[0].0, self.rows.len());
        self.rows.push(Row { vec, tag });
    }
}

/// Kernel and image of a linear map given by the images of basis vectors.
pub struct KernelImage {
    pub kernel: Vec<SVec>,
    pub image: Echelon,
}

pub fn kernel_image(images: &[SVec]) -> KernelImage {
    let mut ech = Echelon::new();
    let mut kernel = Vec::new();
    for (i, v) in images.iter().enumerate() {
        let (r, tag) = ech.reduce(v, &svec_unit(i));
        if r.is_empty() {
            kernel.push(tag);
        } else {
            ech.push_reduced(r, tag);
        }
    }
    KernelImage { kernel, image: ech }
}

/// Solve A x = b where A is given by columns; returns one solution if any.
pub fn solve(columns: &[SVec], b: &SVec) -> Option<SVec> {
    let ki = kernel_image(columns);
    let (r, tag) = ki.image.reduce(b, &Vec::new());
    if r.is_empty() {
        // b - sum c_i row_i = 0 and the tag records -sum c_i (preimage of row_i)
        Some(svec_scale(&tag, &-Q::one()))
    } else {
        None
    }
}

/// A subquotient U / W of a coordinate space, with W ⊆ U. Stores a basis of
/// representatives for U / W and computes quotient coordinates.
#[derive(Clone, Debug)]
pub struct Subquotient {
    pub dim_ambient: usize,
    pub reps: Vec<SVec>,
    ech: Echelon,
    pub dim_sub: usize,
}

impl Subquotient {
    /// `w` spans the subspace quotiented out; `u` spans the bigger space.
    pub fn new(dim_ambient: usize, u: &[SVec], w: &[SVec]) -> Self {
        let mut ech = Echelon::new();
        for v in w {
            ech.insert(v, &Vec::new());
        }
        let dim_sub = ech.rank();
        let mut reps = Vec::new();
        for v in u {
            let (r, _) = ech.reduce(v, &Vec::new());
            if !r.is_empty() {
                let k = reps.len();
                ech.insert(&r, &svec_unit(k));
                reps.push(r);
            }
        }
        Subquotient { dim_ambient, reps, ech, dim_sub }
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    /// Quotient coordinates of `v`, or `None` if `v` is not in U.
    pub fn coords(&self, v: &SVec) -> Option<SVec> {
        let (r, tag) = self.ech.reduce(v, &Vec::new());
        if r.is_empty() {
            Some(svec_scale(&tag, &-Q::one()))
        } else {
            None
        }
    }

    /// Whether `v` lies in the subspace W.
    pub fn in_sub(&self, v: &SVec) -> bool {
        match self.coords(v) {
            Some(c) => c.is_empty(),
            None => false,
        }
    }

    /// A linear projection of the whole ambient space onto U / W, zero on a
    /// complement of U spanned by coordinate vectors.
    pub fn projection(&self) -> Projection {
        let mut ech = self.ech.clone();
        for i in 0..self.dim_ambient {
            if ech.rank() == self.dim_ambient {
                break;
            }
            ech.insert(&svec_unit(i), &Vec::new());
        }
        Projection { ech }
    }
}

#[derive(Clone, Debug)]
pub struct Projection {
    ech: Echelon,
}

impl Projection {
    pub fn apply(&self, v: &SVec) -> SVec {
        let (r, tag) = self.ech.reduce(v, &Vec::new());
        debug_assert!(r.is_empty());
        svec_scale(&tag, &-Q::one())
    }
}

/// Rank of a list of vectors.
pub fn rank(vs: &[SVec]) -> usize {
    let mut e = Echelon::new();
    for v in vs {
        e.insert(v, &Vec::new());
    }
    e.rank()
}
