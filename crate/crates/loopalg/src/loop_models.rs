//! The Hochschild model 𝓛 = (∧(V ⊕ V̄), δ) with its derivation s, the cyclic
//! model 𝓔 = (𝓛[u], D = δ + u·s), word-length components and the Gysin model.

use num_traits::One;

use crate::algebra::{
    basis_where, graded_commutator, Algebra, Cdga, Derivation, Element, Generator, Mono, Q, Tag,
};
use crate::homology::Complex;
use crate::model_io::format_element;
use crate::{Error, Result};

/// Pad exponent vectors of `e` with zeros up to `len` generators.
pub fn pad(e: &Element, len: usize) -> Element {
    let mut r = Element::zero();
    for (m, c) in &e.terms {
        let mut v = m.0.clone();
        v.resize(len, 0);
        r.add_term(Mono(v), c.clone());
    }
    r
}

/// Drop trailing generators; terms using them are discarded.
pub fn truncate(e: &Element, len: usize) -> Element {
    let mut r = Element::zero();
    for (m, c) in &e.terms {
        if m.0[len..].iter().all(|&x| x == 0) {
            r.add_term(Mono(m.0[..len].to_vec()), c.clone());
        }
    }
    r
}

#[derive(Clone, Debug)]
pub struct LoopModel {
    pub base: Cdga,
    /// (𝓛, δ); generators are the base generators followed by their bars.
    pub l: Cdga,
    pub s: Derivation,
}

impl LoopModel {
    pub fn alg(&self) -> &Algebra {
        &self.l.alg
    }

    /// Number of base generators.
    pub fn rank(&self) -> usize {
        self.base.alg.len()
    }

    pub fn bar(&self, i: usize) -> usize {
        self.rank() + i
    }

    pub fn delta(&self, a: &Element) -> Element {
        self.l.diff(a)
    }

    pub fn s_apply(&self, a: &Element) -> Element {
        self.s.apply(self.alg(), a)
    }

    pub fn word_length(&self, m: &Mono) -> i64 {
        self.alg().word_length(m)
    }

    /// Basis of 𝓛̃ in degree n (the constant 1 removed).
    pub fn reduced_basis(&self, n: i64) -> Vec<Mono> {
        basis_where(self.alg(), n, |m| !m.is_one())
    }

    /// Basis of 𝓛̃^{(word)} in degree n.
    pub fn component_basis(&self, n: i64, word: i64) -> Vec<Mono> {
        if word < 0 {
            return Vec::new();
        }
        let alg = self.alg();
        basis_where(alg, n, |m| !m.is_one() && alg.word_length(m) == word)
    }

    /// Largest word length occurring in degree n.
    pub fn max_word(&self, n: i64) -> i64 {
        let min_bar = (0..self.rank()).map(|i| self.alg().gens[self.bar(i)].degree as i64).min();
        match min_bar {
            Some(b) if n > 0 => n / b,
            _ => 0,
        }
    }
}

/// Build 𝓛 from a base Sullivan algebra, with δ(v̄) = −s(dv).
pub fn build_l(base: &Cdga) -> Result<LoopModel> {
    for g in &base.alg.gens {
        if g.degree < 2 {
            return Err(Error::NotSimplyConnected(g.name.clone()));
        }
    }
    let n = base.alg.len();
    let mut gens: Vec<Generator> = base.alg.gens.clone();
    for g in &base.alg.gens {
        gens.push(Generator::new(&g.name, g.degree - 1, Tag::Bar));
    }
    let alg = Algebra::new(gens);
    let mut s = Derivation::zero(&alg, -1);
    for i in 0..n {
        s.values[i] = Element::gen(&alg, n + i);
    }
    let mut d = Derivation::zero(&alg, 1);
    for i in 0..n {
        d.values[i] = pad(&base.d.values[i], 2 * n);
    }
    for i in 0..n {
        d.values[n + i] = s.apply(&alg, &d.values[i]).neg();
    }
    let l = Cdga { name: format!("L({})", base.name), alg, d, weights: None };
    let lm = LoopModel { base: base.clone(), l, s };
    check_loop_model(&lm)?;
    Ok(lm)
}

/// δ² = 0, s² = 0 and δs + sδ = 0 on every generator.
pub fn check_loop_model(lm: &LoopModel) -> Result<()> {
    let alg = lm.alg();
    let checks = [
        ("delta^2", graded_commutator(alg, &lm.l.d, &lm.l.d)),
        ("s^2", graded_commutator(alg, &lm.s, &lm.s)),
        ("delta s + s delta", graded_commutator(alg, &lm.l.d, &lm.s)),
    ];
    for (what, c) in checks {
        if let Some(i) = c.values.iter().position(|v| !v.is_zero()) {
            return Err(Error::Consistency(format!(
                "{what} is nonzero on {}: {}",
                alg.gens[i].symbol(),
                format_element(alg, &c.values[i])
            )));
        }
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct CyclicModel {
    /// (𝓔, D); generators are those of 𝓛 followed by u.
    pub e: Cdga,
    pub u: usize,
}

impl CyclicModel {
    pub fn alg(&self) -> &Algebra {
        &self.e.alg
    }

    pub fn lift(&self, a: &Element) -> Element {
        pad(a, self.u + 1)
    }

    /// Setting u = 0.
    pub fn project(&self, a: &Element) -> Element {
        truncate(a, self.u)
    }

    pub fn u_power(&self, m: &Mono) -> i64 {
        m.0[self.u] as i64
    }

    pub fn times_u(&self, a: &Element, k: u16) -> Element {
        let mut r = Element::zero();
        for (m, c) in &a.terms {
            let mut v = m.0.clone();
            v[self.u] += k;
            r.add_term(Mono(v), c.clone());
        }
        r
    }
}

pub fn build_e(lm: &LoopModel) -> Result<CyclicModel> {
    let n2 = lm.alg().len();
    let mut gens = lm.alg().gens.clone();
    gens.push(Generator::new("u", 2, Tag::U));
    let alg = Algebra::new(gens);
    let u = Element::gen(&alg, n2);
    let mut d = Derivation::zero(&alg, 1);
    for i in 0..n2 {
        let dv = pad(&lm.l.d.values[i], n2 + 1);
        let sv = pad(&lm.s.values[i], n2 + 1);
        d.values[i] = dv.plus(&crate::algebra::mul(&alg, &u, &sv));
    }
    let e = Cdga::new(&format!("E({})", lm.base.name), alg, d)
        .map_err(|e| Error::Consistency(format!("D^2 != 0: {e}")))?;
    Ok(CyclicModel { e, u: n2 })
}

/// The reduced complex (𝓛̃, δ).
pub struct ReducedL<'a>(pub &'a LoopModel);

impl Complex for ReducedL<'_> {
    fn algebra(&self) -> &Algebra {
        self.0.alg()
    }
    fn basis(&self, n: i64) -> Vec<Mono> {
        self.0.reduced_basis(n)
    }
    fn diff_mono(&self, m: &Mono) -> Element {
        self.0.l.d.apply_mono(self.0.alg(), m)
    }
}

/// The full complex (𝓛, δ).
pub struct FullL<'a>(pub &'a LoopModel);

impl Complex for FullL<'_> {
    fn algebra(&self) -> &Algebra {
        self.0.alg()
    }
    fn basis(&self, n: i64) -> Vec<Mono> {
        crate::algebra::degree_basis(self.0.alg(), n)
    }
    fn diff_mono(&self, m: &Mono) -> Element {
        self.0.l.d.apply_mono(self.0.alg(), m)
    }
}

/// 𝓛̃^{(N)} with differential δ.
pub struct WordComponent<'a> {
    pub lm: &'a LoopModel,
    pub word: i64,
}

impl Complex for WordComponent<'_> {
    fn algebra(&self) -> &Algebra {
        self.lm.alg()
    }
    fn basis(&self, n: i64) -> Vec<Mono> {
        self.lm.component_basis(n, self.word)
    }
    fn diff_mono(&self, m: &Mono) -> Element {
        self.lm.l.d.apply_mono(self.lm.alg(), m)
    }
}

pub fn word_components(lm: &LoopModel, n_max: i64) -> Vec<WordComponent<'_>> {
    (0..=n_max).map(|word| WordComponent { lm, word }).collect()
}

/// The full complex (𝓔, D).
pub struct FullE<'a>(pub &'a CyclicModel);

impl Complex for FullE<'_> {
    fn algebra(&self) -> &Algebra {
        self.0.alg()
    }
    fn basis(&self, n: i64) -> Vec<Mono> {
        crate::algebra::degree_basis(self.0.alg(), n)
    }
    fn diff_mono(&self, m: &Mono) -> Element {
        self.0.e.d.apply_mono(self.0.alg(), m)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GysinReport {
    pub max_degree: i64,
    pub checked: usize,
    pub pass: bool,
    /// First failing identity and the offending element.
    pub witness: Option<(String, String)>,
}

/// The Gysin model 𝓛^∧ = 𝓔 ⊗ ∧(e) with δ̂e = u, checked against ι(α) = α + (−1)^{|α|} s(α)e.
///
/// Verified for every monomial α of 𝓛 up to `max_degree`: ρι = id, ι is a chain
/// map and multiplicative on pairs of generators, and ∫_e ι(α) = (−1)^{|α|} s(α),
/// where ∫_e takes the coefficient of e written on the right.
pub fn gysin_check(lm: &LoopModel, max_degree: i64) -> Result<GysinReport> {
    let cm = build_e(lm)?;
    let n_l = lm.alg().len();
    let mut gens = cm.alg().gens.clone();
    gens.push(Generator::new("e", 1, Tag::E));
    let hat = Algebra::new(gens);
    let e_idx = n_l + 1;
    let mut d = Derivation::zero(&hat, 1);
    for i in 0..=n_l {
        d.values[i] = pad(&cm.e.d.values[i], n_l + 2);
    }
    d.values[e_idx] = Element::gen(&hat, cm.u);
    let hat = Cdga::new("L^", hat, d).map_err(|e| Error::Consistency(format!("gysin model: {e}")))?;
    let alg = &hat.alg;
    let e_gen = Element::gen(alg, e_idx);
    let iota = |a: &Element| -> Element {
        let mut r = pad(a, n_l + 2);
        for (m, c) in &a.terms {
            let sa = lm.s.apply_mono(lm.alg(), m);
            let sign = if lm.alg().parity(m) { -Q::one() } else { Q::one() };
            let t = crate::algebra::mul(alg, &pad(&sa, n_l + 2), &e_gen);
            r.add_scaled(&t, &(sign * c));
        }
        r
    };
    let rho = |a: &Element| truncate(a, n_l);
    let integral = |a: &Element| {
        let mut r = Element::zero();
        for (m, c) in &a.terms {
            if m.0[e_idx] == 1 {
                let mut v = m.0.clone();
                v[e_idx] = 0;
                r.add_term(Mono(v[..=n_l].to_vec()), c.clone());
            }
        }
        r
    };
    let mut checked = 0;
    let fail = |what: &str, x: &Element, a: &LoopModel| GysinReport {
        max_degree,
        checked: 0,
        pass: false,
        witness: Some((what.to_string(), format_element(a.alg(), x))),
    };
    for n in 0..=max_degree {
        for m in crate::algebra::degree_basis(lm.alg(), n) {
            let a = Element::mono(m.clone(), Q::one());
            let ia = iota(&a);
            if rho(&ia) != a {
                return Ok(fail("rho iota = id", &a, lm));
            }
            let sa = lm.s_apply(&a);
            let sign = if lm.alg().parity(&m) { -Q::one() } else { Q::one() };
            if integral(&ia) != cm.lift(&sa).scale(&sign) {
                return Ok(fail("integral_e iota = (-1)^|a| s", &a, lm));
            }
            if hat.diff(&ia) != iota(&lm.delta(&a)) {
                return Ok(fail("D^ iota = iota delta", &a, lm));
            }
            checked += 1;
        }
    }
    for i in 0..n_l {
        for j in 0..n_l {
            let a = Element::gen(lm.alg(), i);
            let b = Element::gen(lm.alg(), j);
            let ab = crate::algebra::mul(lm.alg(), &a, &b);
            if iota(&ab) != crate::algebra::mul(alg, &iota(&a), &iota(&b)) {
                return Ok(fail("iota multiplicative", &ab, lm));
            }
        }
    }
    Ok(GysinReport { max_degree, checked, pass: true, witness: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model_io::parse_element;
    use crate::models;

    #[test]
    fn m11_bar_differentials() {
        let lm = build_l(&models::m11().cdga).unwrap();
        let alg = lm.alg();
        let zb = Element::gen(alg, lm.bar(2));
        assert_eq!(lm.delta(&zb), parse_element(alg, "-x'*y + x*y'").unwrap());
        assert!(lm.delta(&Element::gen(alg, lm.bar(0))).is_zero());
        let z = parse_element(alg, "z").unwrap();
        assert_eq!(lm.s_apply(&z), zb);
        let xy = parse_element(alg, "x*y").unwrap();
        assert_eq!(lm.s_apply(&xy), parse_element(alg, "x'*y - x*y'").unwrap());
    }

    #[test]
    fn m11_cyclic_differential() {
        let lm = build_l(&models::m11().cdga).unwrap();
        let cm = build_e(&lm).unwrap();
        let alg = cm.alg();
        let z = parse_element(alg, "z").unwrap();
        assert_eq!(cm.e.diff(&z), parse_element(alg, "x*y + u*z'").unwrap());
        let zb = parse_element(alg, "z'").unwrap();
        assert_eq!(cm.e.diff(&zb), parse_element(alg, "-x'*y + x*y'").unwrap());
        assert!(cm.e.diff(&parse_element(alg, "u").unwrap()).is_zero());
    }

    #[test]
    fn setting_u_zero_gives_delta() {
        let lm = build_l(&models::appendix_a().cdga).unwrap();
        let cm = build_e(&lm).unwrap();
        for i in 0..lm.alg().len() {
            let g = Element::gen(lm.alg(), i);
            assert_eq!(cm.project(&cm.e.diff(&cm.lift(&g))), lm.delta(&g));
        }
    }

    #[test]
    fn appendix_a_bar_y1() {
        let lm = build_l(&models::appendix_a().cdga).unwrap();
        let alg = lm.alg();
        let y1b = parse_element(alg, "y1'").unwrap();
        let dy1 = parse_element(alg, "x1^3*x2").unwrap();
        // independent oracle: s is an even-sign derivation on the even generators x1, x2
        let expected = parse_element(alg, "-3 x1^2*x1'*x2 - x1^3*x2'").unwrap();
        assert_eq!(lm.delta(&y1b), expected);
        assert_eq!(lm.delta(&y1b), lm.s_apply(&dy1).neg());
    }

    #[test]
    fn trivial_differential_model() {
        let lm = build_l(&models::s3().cdga).unwrap();
        assert!(lm.l.d.is_zero());
    }

    #[test]
    fn word_lengths() {
        let lm = build_l(&models::m11().cdga).unwrap();
        let e = parse_element(lm.alg(), "x*y*z'^2").unwrap();
        let m = e.terms.keys().next().unwrap();
        assert_eq!(lm.word_length(m), 2);
        for n in 0..=16 {
            let total: usize = (0..=n).map(|w| lm.component_basis(n, w).len()).sum();
            assert_eq!(total, lm.reduced_basis(n).len());
        }
    }

    #[test]
    fn rejects_degree_one() {
        use crate::algebra::Derivation;
        let alg = Algebra::new(vec![Generator::new("a", 1, Tag::Base)]);
        let d = Derivation::zero(&alg, 1);
        let c = Cdga::new("bad", alg, d).unwrap();
        assert!(matches!(build_l(&c), Err(Error::NotSimplyConnected(_))));
    }

    #[test]
    fn gysin_passes() {
        let lm = build_l(&models::m11().cdga).unwrap();
        let r = gysin_check(&lm, 20).unwrap();
        assert!(r.pass, "{:?}", r.witness);
        let lm = build_l(&models::s3().cdga).unwrap();
        assert!(gysin_check(&lm, 12).unwrap().pass);
    }
}
