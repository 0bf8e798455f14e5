//! Shared helpers for the integration tests: seeded random minimal models,
//! generator permutations and random elements.
#![allow(dead_code)]

use loopalg::algebra::{basis_where, degree_basis, mul, q, Algebra, AlgebraMap, Cdga, Derivation, Element, Generator, Mono, Tag};
use loopalg::homology::ChainSpace;
use loopalg::linalg::kernel_image;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

/// A minimal Sullivan model with 2 to 4 generators of degree 2..=8. Each
/// differential is a random decomposable cocycle in the earlier generators,
/// so d² = 0 by construction.
pub fn random_model(seed: u64) -> Cdga {
    let mut rng = StdRng::seed_from_u64(seed);
    let k = rng.gen_range(2..=4);
    let mut degs: Vec<i32> = (0..k).map(|_| rng.gen_range(2..=8)).collect();
    degs.sort();
    let gens = degs.iter().enumerate().map(|(i, &d)| Generator::new(&format!("v{i}"), d, Tag::Base)).collect();
    let alg = Algebra::new(gens);
    let mut d = Derivation::zero(&alg, 1);
    for i in 0..k {
        let n = degs[i] as i64 + 1;
        let basis = basis_where(&alg, n, |m| m.0[i..].iter().all(|&e| e == 0) && m.0.iter().map(|&e| e as u32).sum::<u32>() >= 2);
        if basis.is_empty() || rng.gen_bool(0.2) {
            continue;
        }
        let tgt = ChainSpace::new(n + 1, degree_basis(&alg, n + 1));
        let images: Vec<_> = basis.iter().map(|m| tgt.vec(&d.apply_mono(&alg, m)).expect("homogeneous")).collect();
        let ki = kernel_image(&images);
        let mut v = Element::zero();
        for kv in &ki.kernel {
            let c = q(rng.gen_range(-2..=2));
            for (j, x) in kv {
                v.add_term(basis[*j].clone(), x * &c);
            }
        }
        d.values[i] = v;
    }
    Cdga::new(&format!("random{seed}"), alg, d).expect("random model has d^2 = 0")
}

/// The same model with its generators listed in the order `perm`.
pub fn permuted(c: &Cdga, perm: &[usize]) -> Cdga {
    let gens = perm.iter().map(|&i| c.alg.gens[i].clone()).collect();
    let alg = Algebra::new(gens);
    let mut to_new = AlgebraMap { values: vec![Element::zero(); c.alg.len()] };
    for (new, &old) in perm.iter().enumerate() {
        to_new.values[old] = Element::gen(&alg, new);
    }
    let mut d = Derivation::zero(&alg, 1);
    for (new, &old) in perm.iter().enumerate() {
        d.values[new] = to_new.apply(&alg, &c.d.values[old]);
    }
    Cdga::new(&c.name, alg, d).expect("permuted model has d^2 = 0")
}

pub fn random_perm(n: usize, seed: u64) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(&mut StdRng::seed_from_u64(seed));
    p
}

/// A random homogeneous element of degree n with small integer coefficients.
pub fn random_element(alg: &Algebra, n: i64, seed: u64) -> Element {
    let mut rng = StdRng::seed_from_u64(seed);
    let basis = degree_basis(alg, n);
    let mut e = Element::zero();
    for m in basis.iter() {
        if rng.gen_bool(0.4) {
            e.add_term(m.clone(), q(rng.gen_range(-3..=3)));
        }
    }
    e
}

pub fn sign(k: i64) -> i64 {
    if k.rem_euclid(2) == 1 {
        -1
    } else {
        1
    }
}

/// D(ab) − (Da)b − (−1)^{|a|}a(Db) for a derivation given as a closure.
pub fn leibniz_defect(alg: &Algebra, f: &dyn Fn(&Element) -> Element, a: &Element, b: &Element, deg_a: i64) -> Element {
    let lhs = f(&mul(alg, a, b));
    let r1 = mul(alg, &f(a), b);
    let r2 = mul(alg, a, &f(b)).scale(&q(sign(deg_a)));
    lhs.minus(&r1).minus(&r2)
}

pub fn mono_of(alg: &Algebra, e: &[u16]) -> Element {
    assert_eq!(e.len(), alg.len());
    Element::mono(Mono(e.to_vec()), q(1))
}
