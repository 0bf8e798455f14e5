//! Acceptance run: one PASS/FAIL line per criterion. All comparisons are exact.

mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::OnceLock;
use std::time::Instant;

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use loopalg::algebra::{q, Cdga, Element, Mono, Q};
use loopalg::appendix::{ALPHA, OMEGA};
use loopalg::bv_exact::{bv_exactness, bv_exactness_range, check_witness, s_action_range, s_action_triviality, weight_check_with, weight_search, BvReport};
use loopalg::emss::{check_page_law, d2_of_witness, page, page_checks};
use loopalg::homology::{connes_maps, homology_deg, ChainSpace};
use loopalg::linalg::{kernel_image, rank, SVec};
use loopalg::loop_models::{build_e, build_l, FullE, FullL, LoopModel, ReducedL};
use loopalg::model_io::parse_element;
use loopalg::models;
use loopalg::string_ops::bg::BgAlgebra;
use loopalg::string_ops::loop_homology::LoopClass;
use loopalg::string_ops::names::{
    antisymmetry_defect, closed_dsb_eta, closed_dsb_zeta, dsb_named, eta_cocycle, l_mono, named_rep, printed_dlp_eta, printed_dlp_theta,
    printed_dlp_xy, tensor_diff, Named, NamedTensor, Naming,
};
use loopalg::string_ops::Pipeline;

use common::{leibniz_defect, permuted, random_element, random_model, random_perm};

type Outcome = Result<String, String>;

fn main() {
    let criteria: [(u32, &str, fn() -> Outcome); 8] = [
        (1, "Hochschild basis of the 11-manifold", c1),
        (2, "BV exactness verdicts", c2),
        (3, "BV exactness vs reduced S-action", c3),
        (4, "Dsb and Dlp against the closed formulas", c4),
        (5, "classifying-space brackets", c5),
        (6, "word-length spectral sequence", c6),
        (7, "universal properties on random and shipped models", c7),
        (8, "positive weights", c8),
    ];
    let mut passed = 0;
    for (k, name, f) in criteria {
        let t = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = t.elapsed().as_secs_f64();
        match res {
            Ok(msg) => {
                passed += 1;
                println!("criterion {k} PASS {name}: {msg} ({secs:.1}s)");
            }
            Err(msg) => println!("criterion {k} FAIL {name}: {msg} ({secs:.1}s)"),
        }
    }
    println!("acceptance: {passed}/8 criteria pass");
}

fn check(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn lm_of(c: &Cdga) -> LoopModel {
    build_l(c).expect("loop model")
}

// 1

/// The nine families of representatives, in 𝓛 with generators x, y, z, x̄, ȳ, z̄.
fn hochschild_families(max: i64) -> BTreeMap<i64, Vec<Element>> {
    let mono = |e: [u16; 6]| Element::mono(Mono(e.to_vec()), q(1));
    let deg = |e: &[u16; 6]| 3 * (e[0] + e[1]) as i64 + 5 * e[2] as i64 + 2 * (e[3] + e[4]) as i64 + 4 * e[5] as i64;
    let mut out: BTreeMap<i64, Vec<Element>> = BTreeMap::new();
    let mut push = |e: [u16; 6], el: Element| {
        let n = deg(&e);
        if n <= max {
            out.entry(n).or_default().push(el);
        }
    };
    let k = max as u16;
    for p in 0..=k {
        for qq in 0..=k {
            push([0, 0, 0, p, qq, 0], mono([0, 0, 0, p, qq, 0]));
            push([1, 0, 0, p, qq, 0], mono([1, 0, 0, p, qq, 0]));
            push([1, 0, 1, p, qq, 0], mono([1, 0, 1, p, qq, 0]));
            push([0, 0, 1, p + 1, qq, 0], mono([0, 0, 1, p + 1, qq, 0]).minus(&mono([1, 0, 0, p, qq, 1])));
        }
    }
    for qq in 0..=k {
        push([0, 1, 0, 0, qq, 0], mono([0, 1, 0, 0, qq, 0]));
        push([0, 1, 1, 0, qq, 0], mono([0, 1, 1, 0, qq, 0]));
        push([0, 0, 1, 0, qq + 1, 0], mono([0, 0, 1, 0, qq + 1, 0]).minus(&mono([0, 1, 0, 0, qq, 1])));
    }
    for r in 0..=k {
        push([1, 1, 0, 0, 0, r + 1], mono([1, 1, 0, 0, 0, r + 1]));
        push([1, 1, 1, 0, 0, r], mono([1, 1, 1, 0, 0, r]));
    }
    out
}

fn c1() -> Outcome {
    let lm = lm_of(&models::m11().cdga);
    let fam = hochschild_families(40);
    let bad: Vec<String> = (0..=40i64)
        .into_par_iter()
        .filter_map(|n| {
            let h = homology_deg(&FullL(&lm), n).unwrap();
            let reps = fam.get(&n).cloned().unwrap_or_default();
            if h.dim() != reps.len() {
                return Some(format!("degree {n}: dim {} vs {} listed", h.dim(), reps.len()));
            }
            let coords: Option<Vec<SVec>> = reps.iter().map(|r| h.coords(r)).collect();
            match coords {
                None => Some(format!("degree {n}: a listed element is not a cocycle")),
                Some(c) if rank(&c) != h.dim() => Some(format!("degree {n}: listed elements are not a basis")),
                _ => None,
            }
        })
        .collect();
    check(bad.is_empty(), bad.join("; "))?;
    let total: usize = fam.values().map(|v| v.len()).sum();
    Ok(format!("degrees 0..40, {total} classes, dims equal family counts, change of basis invertible in every degree"))
}

// 2

fn appendix_lm() -> &'static LoopModel {
    static LM: OnceLock<LoopModel> = OnceLock::new();
    LM.get_or_init(|| lm_of(&models::appendix_a().cdga))
}

fn appendix_bv() -> &'static BvReport {
    static BV: OnceLock<BvReport> = OnceLock::new();
    BV.get_or_init(|| bv_exactness_range(appendix_lm(), 224, 229).expect("appendix window"))
}

fn c2() -> Outcome {
    let mut notes = vec![];
    for (name, max) in [("m11", 41), ("s3", 41), ("cp2", 41)] {
        let bv = bv_exactness(&lm_of(&models::load(name).unwrap().cdga), max).map_err(|e| e.to_string())?;
        check(bv.exact, format!("{name} not BV exact: failures {:?}", bv.failures))?;
        notes.push(format!("{name} exact on [{}, {}]", bv.lo, bv.hi));
    }
    let lm = appendix_lm();
    let omega = parse_element(lm.alg(), OMEGA).unwrap();
    let alpha = parse_element(lm.alg(), ALPHA).unwrap();
    check(lm.s_apply(&omega) == lm.delta(&alpha), "s(omega) != delta(alpha)")?;
    check(check_witness(lm, &omega, Some(&alpha)).map_err(|e| e.to_string())?, "omega is not a BV witness")?;
    let bv = appendix_bv();
    check(!bv.exact && bv.failures.contains(&228), format!("appendix window verdict {:?}", bv.failures))?;
    notes.push(format!(
        "appendix_a not exact on [{}, {}] (failures {:?}), s(omega) = delta(alpha) exactly, omega a witness at 228",
        bv.lo, bv.hi, bv.failures
    ));
    Ok(notes.join("; "))
}

// 3

fn c3() -> Outcome {
    let mut notes = vec![];
    for name in ["m11", "s3", "cp2", "lie_rank2"] {
        let lm = lm_of(&models::load(name).unwrap().cdga);
        let cm = build_e(&lm).unwrap();
        let bv = bv_exactness(&lm, 41).map_err(|e| e.to_string())?;
        let s = s_action_triviality(&lm, &cm, 41, Some(&bv)).map_err(|e| format!("{name}: {e}"))?;
        check(bv.exact == s.trivial, format!("{name}: BV {} vs S-trivial {}", bv.exact, s.trivial))?;
        notes.push(format!("{name} {}", bv.exact));
    }
    let lm = appendix_lm();
    let cm = build_e(lm).unwrap();
    let bv = appendix_bv();
    let s = s_action_range(lm, &cm, bv.lo - 3, bv.hi - 1, Some(bv)).map_err(|e| format!("appendix_a: {e}"))?;
    check(bv.exact == s.trivial, format!("appendix_a: BV {} vs S-trivial {}", bv.exact, s.trivial))?;
    notes.push(format!("appendix_a {} (S nonzero at {:?})", bv.exact, s.nonzero_at));
    Ok(format!("verdicts agree: {}", notes.join(", ")))
}

// 4

fn flip(t: &NamedTensor, key: (Named, Named)) -> NamedTensor {
    let mut t = t.clone();
    if let Some(v) = t.remove(&key) {
        t.insert(key, -v);
    }
    t
}

fn c4() -> Outcome {
    let p = Pipeline::from_model(&models::m11(), false).map_err(|e| e.to_string())?;
    let naming = Naming::new(&p);
    let mut literal_bad = vec![];
    let mut unexplained = vec![];
    let (mut total, mut literal_ok) = (0, 0);

    for a in 0..3 {
        for b in 0..3 {
            let c = if a + b == 0 { Named::U(0) } else { Named::Zeta(a, b) };
            total += 1;
            if dsb_named(&p, &naming, c).unwrap() == closed_dsb_zeta(a, b) {
                literal_ok += 1;
            } else {
                literal_bad.push(format!("Dsb({c})"));
                unexplained.push(format!("Dsb({c})"));
            }
        }
    }
    for r in 1..4 {
        total += 1;
        if p.dsb(&named_rep(&p, Named::Theta(r))).unwrap().is_empty() {
            literal_ok += 1;
        } else {
            literal_bad.push(format!("Dsb(theta_{r})"));
            unexplained.push(format!("Dsb(theta_{r})"));
        }
    }
    // η_{0,0} is not a class; the formula is stated for p + q ≥ 1.
    for a in 0..3 {
        for b in 0..3 {
            if a + b == 0 {
                continue;
            }
            total += 1;
            let c = Named::Eta(a, b);
            let got = dsb_named(&p, &naming, c).unwrap();
            let printed = closed_dsb_eta(a, b);
            if got == printed {
                literal_ok += 1;
                continue;
            }
            literal_bad.push(format!("Dsb({c})"));
            let key = (Named::Zeta(a, b), Named::Theta(2));
            let explained = got == flip(&printed, key)
                && !antisymmetry_defect(&printed).is_empty()
                && antisymmetry_defect(&got).is_empty();
            if !explained {
                unexplained.push(format!("Dsb({c})"));
            }
        }
    }

    let cocommutative_partner_bad = |want: &loopalg::string_ops::TensorClass, diff: &loopalg::string_ops::TensorClass| {
        diff.keys().all(|(da, i, db, j)| {
            let c = want.get(&(*da, *i, *db, *j)).cloned().unwrap_or_else(Q::zero);
            let partner = want.get(&(*db, *j, *da, *i)).cloned().unwrap_or_else(Q::zero);
            let expect = if (da * db) % 2 == 0 { -c } else { c };
            partner != expect
        })
    };
    for a in 0..3 {
        for b in 0..3 {
            total += 1;
            let got = p.dlp(&l_mono([0, 0, 0, a as u16, b as u16, 0])).unwrap();
            let printed = p.tensor_coords(&printed_dlp_xy(&p, a, b, false)).unwrap();
            if got == printed {
                literal_ok += 1;
                continue;
            }
            literal_bad.push(format!("Dlp(x'^{a}y'^{b})"));
            let fixed = p.tensor_coords(&printed_dlp_xy(&p, a, b, true)).unwrap();
            if got != fixed || !cocommutative_partner_bad(&printed, &tensor_diff(&got, &printed)) {
                unexplained.push(format!("Dlp(x'^{a}y'^{b})"));
            }
        }
    }
    // The displayed expansion of Dlp(η) is for z x̄^p ȳ^q − x x̄^{p−1}ȳ^q z̄, p ≥ 1.
    for a in 1..3 {
        for b in 0..3 {
            total += 1;
            let got = p.dlp(&eta_cocycle(a, b)).unwrap();
            let printed = p.tensor_coords(&printed_dlp_eta(&p, a, b, false)).unwrap();
            if got == printed {
                literal_ok += 1;
                continue;
            }
            literal_bad.push(format!("Dlp(eta-cocycle {a},{b})"));
            // the xyz⊗w term carries the same sign typo as Dlp(x̄^pȳ^q); once it is
            // negated its partner w⊗xyz must flip too, the rest are asymmetric pairs
            let fixed = p.tensor_coords(&printed_dlp_eta(&p, a, b, true)).unwrap();
            let typo = tensor_diff(&fixed, &printed);
            let rest: loopalg::string_ops::TensorClass = tensor_diff(&got, &fixed)
                .into_iter()
                .filter(|((da, i, db, j), _)| !typo.contains_key(&(*db, *j, *da, *i)))
                .collect();
            let pair_flipped = typo.iter().all(|((da, i, db, j), c)| {
                got.get(&(*da, *i, *db, *j)) == fixed.get(&(*da, *i, *db, *j))
                    && got.get(&(*db, *j, *da, *i)).cloned() == printed.get(&(*db, *j, *da, *i)).map(|x| -x)
                    && !c.is_zero()
            });
            if !pair_flipped || !cocommutative_partner_bad(&fixed, &rest) {
                unexplained.push(format!("Dlp(eta-cocycle {a},{b})"));
            }
        }
    }
    for r in 1..4 {
        total += 1;
        let got = p.dlp(&l_mono([1, 1, 0, 0, 0, r as u16])).unwrap();
        if got == p.tensor_coords(&printed_dlp_theta(&p, r)).unwrap() {
            literal_ok += 1;
        } else {
            literal_bad.push(format!("Dlp(xyz'^{r})"));
            unexplained.push(format!("Dlp(xyz'^{r})"));
        }
    }
    let summary = format!("{literal_ok}/{total} literal matches");
    if literal_bad.is_empty() {
        return Ok(summary);
    }
    let why = if unexplained.is_empty() {
        "the printed xyz(x)w term of Dlp has the wrong sign (in Dlp(eta) its partner w(x)xyz flips with it); every other \
         mismatched coefficient sits in a pair the printed formula gives with the sign forbidden by graded (co)commutativity; \
         the computed values are graded (co)commutative"
            .to_string()
    } else {
        format!("unexplained: {}", unexplained.join(", "))
    };
    Err(format!("{summary}; mismatched: {}; {why}", literal_bad.join(", ")))
}

// 5

fn c5() -> Outcome {
    let su2 = BgAlgebra::new(&[2]).unwrap();
    let x = |n: u16| su2.coker(&su2.mono(&[n], &[0]));
    let mut count = 0;
    for n in 1..=6u16 {
        // x^0 is not a class of ℋ, so [x, 1] = 0
        let want = x(n - 1).scale(&q(-(n as i64)));
        check(su2.bracket(&x(n), &su2.u(0)).unwrap() == want, format!("[x^{n}, 1]"))?;
        count += 1;
        for m in 1..=6u16 {
            check(su2.bracket(&x(n), &x(m)).unwrap().is_zero(), format!("[x^{n}, x^{m}]"))?;
            count += 1;
        }
        for l in 1..=3 {
            check(su2.bracket(&su2.u(l), &x(n)).unwrap().is_zero(), format!("[u^{l}, x^{n}]"))?;
            check(su2.bracket(&su2.u(l), &su2.u(0)).unwrap().is_zero(), format!("[u^{l}, 1]"))?;
            count += 2;
        }
    }
    check(su2.bracket(&su2.u(0), &su2.u(0)).unwrap().is_zero(), "[1, 1]")?;

    let a = BgAlgebra::new(&[2, 3]).unwrap();
    let left = a.coker(&a.mono(&[0, 1], &[1, 0]));
    let mut signs = BTreeMap::new();
    for l in 1..=5u16 {
        for n in 1..=3u16.min(l) {
            let mut cur = a.coker(&a.mono(&[l, 0], &[0, 1]));
            for _ in 0..n {
                cur = a.bracket(&left, &cur).unwrap();
            }
            let coef: i64 = (0..n).map(|i| (l - i) as i64).product();
            // for n = l the target is the dropped constant class
            let target = a.coker(&a.mono(&[l - n, 0], &[0, 1])).scale(&q(coef));
            check(target.is_zero() == (n == l), format!("target at l={l} n={n}"))?;
            let s = if target.is_zero() {
                check(cur.is_zero(), format!("iterated bracket l={l} n={n} should vanish: {}", a.format(&cur)))?;
                continue;
            } else if cur == target {
                1
            } else if cur == target.neg() {
                -1
            } else {
                return Err(format!("iterated bracket l={l} n={n}: {}", a.format(&cur)));
            };
            signs.insert((l, n), s);
        }
    }
    let iterated_exact = signs.values().all(|&s| s == 1);

    // gravity, rank two: [y_i x_i^∨ (k copies), y₂x₂^∨x₁^∨, y₁^l x₁^∨x₂^∨] = ±l y₁^{l−1}x₁^∨x₂^∨
    let mut gravity = 0;
    for i in 0..2 {
        for k in 0..=2usize {
            for l in 2..=5u16 {
                let mut y = [0u16; 2];
                y[i] = 1;
                let mut args = vec![a.coker(&a.mono(&y, &[i])); k];
                args.push(a.coker(&a.mono(&[0, 1], &[1, 0])));
                args.push(a.coker(&a.mono(&[l, 0], &[0, 1])));
                let g = a.gravity(&args).unwrap();
                let t = a.coker(&a.mono(&[l - 1, 0], &[0, 1])).scale(&q(l as i64));
                check(g == t || g == t.neg(), format!("rank-two gravity i={i} k={k} l={l}: {}", a.format(&g)))?;
                gravity += 1;
            }
        }
    }
    // gravity, rank one: [x², …, x², 1] = ±2^{n−1}x^{n−1}
    for n in 2..=5usize {
        let mut args = vec![x(2); n - 1];
        args.push(su2.u(0));
        let g = su2.gravity(&args).unwrap();
        let t = x(n as u16 - 1).scale(&q(1 << (n - 1)));
        check(g == t || g == t.neg(), format!("rank-one gravity n={n}: {}", su2.format(&g)))?;
        gravity += 1;
    }
    // gravity on the Lie group side: [x_j, s⁻¹x_j, …, s⁻¹x_j] = ±k (s⁻¹x_j)^{k−1}
    let p = Pipeline::from_model(&models::lie_rank2(), false).map_err(|e| e.to_string())?;
    let mono = |e: [u16; 4]| Element::mono(Mono(e.to_vec()), q(1));
    let power = |b: &LoopClass, k: usize| {
        let mut out = b.clone();
        for _ in 1..k {
            out = p.loop_product(&out, b).unwrap();
        }
        out
    };
    for (xe, se) in [([0, 1, 0, 0], [1, 1, 1, 0]), ([1, 0, 0, 0], [1, 1, 0, 1])] {
        let xj = p.dual_of(&mono(xe)).unwrap();
        let sj = p.dual_of(&mono(se)).unwrap();
        for k in 2..=5usize {
            let mut args = vec![xj.clone()];
            args.extend(std::iter::repeat(sj.clone()).take(k));
            let g = p.loop_gravity(&args).unwrap();
            let r = g.ratio(&power(&sj, k - 1)).ok_or("manifold gravity not a multiple of the power")?;
            check(r.abs() == q(k as i64), format!("manifold gravity k={k}: ratio {r}"))?;
            gravity += 1;
        }
    }
    let sign_note = if iterated_exact { "iterated brackets exact with sign" } else { "iterated brackets exact up to one global sign" };
    check(iterated_exact, format!("iterated bracket signs {signs:?}"))?;
    Ok(format!("SU(2) table {count} entries exact; {sign_note} for l <= 5, n <= 3; {gravity} gravity values match in absolute value"))
}

// 6

fn c6() -> Outcome {
    let m = models::m11();
    let lm = lm_of(&m.cdga);
    let cm = build_e(&lm).unwrap();
    let e2 = page(&lm, &cm, 0, 2, 30, 6).map_err(|e| e.to_string())?;
    check(e2.is_zero(), format!("m11 E_2 support {:?}", e2.support()))?;

    let alm = appendix_lm();
    let acm = build_e(alm).unwrap();
    let omega = parse_element(alm.alg(), OMEGA).unwrap();
    let alpha = parse_element(alm.alg(), ALPHA).unwrap();
    let d2 = d2_of_witness(alm, &acm, &omega, &alpha).map_err(|e| e.to_string())?;
    check(d2.lifts && d2.source_nonzero && d2.image_nonzero, format!("appendix d2 {d2:?}"))?;

    let mut slots = 0;
    for (name, src) in models::ALL {
        let c = loopalg::model_io::parse_model_file(src).unwrap().cdga;
        let lm = lm_of(&c);
        let cm = build_e(&lm).unwrap();
        let max = if name == "appendix_a" { 60 } else { 24 };
        for r in 1..=3 {
            slots += page_checks(&lm, &cm, r, 3, max, 6).map_err(|e| format!("{name} r={r}: {e}"))?;
        }
    }
    Ok(format!(
        "m11 (0)E_2 = 0 on degree <= 30, filtration <= 6; appendix d_2[omega] != 0 at degree {}; u^N page isomorphisms on {slots} slots (r <= 3, N <= 3, all shipped models)",
        d2.degree
    ))
}

// 7

fn reduced_s_exact(lm: &LoopModel, max: i64) -> Result<(), String> {
    let space = |n: i64| ChainSpace::new(n, <ReducedL as loopalg::homology::Complex>::basis(&ReducedL(lm), n));
    let s_images = |n: i64| -> Vec<SVec> {
        let (src, tgt) = (space(n), space(n - 1));
        src.basis.iter().map(|m| tgt.vec(&lm.s_apply(&Element::mono(m.clone(), q(1)))).expect("s lands in reduced part")).collect()
    };
    for n in 1..=max {
        let ker = kernel_image(&s_images(n)).kernel.len();
        let im = rank(&s_images(n + 1));
        check(ker == im, format!("degree {n}: dim ker s = {ker}, dim im s = {im}"))?;
    }
    Ok(())
}

fn universal(c: &Cdga, window: i64, seed: u64) -> Result<usize, String> {
    let name = &c.name;
    let err = |e: loopalg::Error| format!("{name}: {e}");
    c.check_square_zero().map_err(err)?;
    let lm = build_l(c).map_err(err)?;
    let cm = build_e(&lm).map_err(err)?;
    let alg = lm.alg();
    let mut checks = 0;
    for n in 1..=window.min(10) {
        let a = random_element(alg, n, seed ^ n as u64);
        check(lm.delta(&lm.delta(&a)).is_zero(), format!("{name}: delta^2 != 0 in degree {n}"))?;
        check(lm.delta(&lm.s_apply(&a)).plus(&lm.s_apply(&lm.delta(&a))).is_zero(), format!("{name}: delta s + s delta != 0"))?;
        let b = random_element(alg, 2 + (n % 4), seed.wrapping_mul(31) ^ n as u64);
        let delta = |e: &Element| lm.delta(e);
        let s = |e: &Element| lm.s_apply(e);
        check(leibniz_defect(alg, &delta, &a, &b, n).is_zero(), format!("{name}: Leibniz for delta"))?;
        check(leibniz_defect(alg, &s, &a, &b, n).is_zero(), format!("{name}: Leibniz for s"))?;
        let (ea, eb) = (cm.lift(&a), cm.lift(&b));
        let dd = |e: &Element| cm.e.diff(e);
        check(leibniz_defect(cm.alg(), &dd, &ea, &eb, n).is_zero(), format!("{name}: Leibniz for D"))?;
        check(cm.e.diff(&cm.e.diff(&ea)).is_zero(), format!("{name}: D^2 != 0"))?;
        checks += 6;
    }
    reduced_s_exact(&lm, window).map_err(|e| format!("{name}: ker s != im s, {e}"))?;
    connes_maps(&lm, &cm, window).map_err(err)?;
    let bv = bv_exactness(&lm, window).map_err(err)?;
    for n_comp in 0..=1 {
        for r in 1..=2 {
            check_page_law(&lm, &cm, n_comp, r, window, 4).map_err(err)?;
        }
    }
    checks += 4;
    let perm = random_perm(c.alg.len(), seed);
    let pc = permuted(c, &perm);
    let plm = build_l(&pc).map_err(err)?;
    let pcm = build_e(&plm).map_err(err)?;
    for n in 0..=window {
        let a = homology_deg(&FullL(&lm), n).map_err(err)?.dim();
        let b = homology_deg(&FullL(&plm), n).map_err(err)?.dim();
        let ea = homology_deg(&FullE(&cm), n).map_err(err)?.dim();
        let eb = homology_deg(&FullE(&pcm), n).map_err(err)?.dim();
        check(a == b && ea == eb, format!("{name}: permutation {perm:?} changes dimensions in degree {n}"))?;
    }
    let pbv = bv_exactness(&plm, window).map_err(err)?;
    check(pbv.exact == bv.exact && pbv.failures == bv.failures, format!("{name}: permutation changes the BV verdict"))?;
    Ok(checks + 5 + window as usize)
}

fn c7() -> Outcome {
    let seeds: Vec<u64> = (0..24).collect();
    let randoms: Vec<Cdga> = seeds.iter().map(|&s| random_model(s)).collect();
    let mut jobs: Vec<(Cdga, i64, u64)> = randoms.into_iter().zip(seeds).map(|(c, s)| (c, 12, s)).collect();
    for (name, src) in models::ALL {
        let c = loopalg::model_io::parse_model_file(src).unwrap().cdga;
        let w = if name == "appendix_a" { 40 } else { 16 };
        jobs.push((c, w, 7));
    }
    let results: Vec<Result<usize, String>> = jobs.par_iter().map(|(c, w, s)| universal(c, *w, *s)).collect();
    let bad: Vec<String> = results.iter().filter_map(|r| r.clone().err()).collect();
    check(bad.is_empty(), bad.join("; "))?;
    let n = results.len();
    let total: usize = results.iter().map(|r| *r.as_ref().unwrap()).sum();
    Ok(format!("{n} models (24 random, 5 shipped), {total} checks: d^2, delta s + s delta, Leibniz, ker s = im s, Connes exactness, B^2 = 0, Im B in ker B, page law, permutation invariance"))
}

// 8

/// Dimension of the space of rational weight maps making d homogeneous.
fn weight_solutions_dim(c: &Cdga) -> usize {
    let n = c.alg.len();
    let mut rows: Vec<SVec> = vec![];
    for (i, v) in c.d.values.iter().enumerate() {
        for m in v.terms.keys() {
            let mut row: BTreeMap<usize, Q> = BTreeMap::new();
            for (j, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    *row.entry(j).or_insert_with(Q::zero) += q(e as i64);
                }
            }
            *row.entry(i).or_insert_with(Q::zero) -= q(1);
            rows.push(row.into_iter().filter(|(_, x)| !x.is_zero()).collect());
        }
    }
    n - rank(&rows)
}

fn c8() -> Outcome {
    let m = models::m11().cdga;
    let w = weight_check_with(&m, &[1, 1, 2]);
    check(w.valid, format!("(1,1,2) rejected: {:?}", w.offending))?;
    let bv = bv_exactness(&lm_of(&m), 41).map_err(|e| e.to_string())?;
    check(bv.exact, "weights predict BV exactness but the computation disagrees")?;
    let a = models::appendix_a().cdga;
    let (found, covered) = weight_search(&a, 12);
    check(found.is_empty(), format!("appendix_a admits weights {found:?}"))?;
    let expected: u128 = 12u128.pow(a.alg.len() as u32);
    check(covered == expected, format!("search covered {covered} of {expected} assignments"))?;
    let dim = weight_solutions_dim(&a);
    check(dim == 0, format!("linear system has a {dim}-dimensional solution space"))?;
    Ok(format!("m11 (1,1,2) valid and BV exact on [1, 40]; appendix_a: 0 of {covered} assignments with weights <= 12 valid, the weight equations have only the zero solution"))
}
