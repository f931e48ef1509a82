//! The reproduction suite: thirteen numbered checks covering character
//! varieties, censuses, substitutions, MIC-POVMs and singular points.
//! Each check returns a row with a verdict and a one-line detail.

use std::time::Instant;

use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::census::low_index_subgroups;
use crate::charvar::{
    character_variety, factor_library, hypersurface_part, ideal_generator_records, match_variables,
    match_variables_any,
};
use crate::fp::{Endomorphism, Letter, Presentation, Word};
use crate::mic::{
    build_povm, fiducial_candidates, pauli_group, triple_product_geometry, Fiducial, PauliStructure,
};
use crate::poly::{gcd, SparsePoly};
use crate::substitution::{invariance_check, pf_analysis, substitution_matrix};
use crate::surface::{
    search_singular, search_singular_at_infinity, verify_singular_int, ProjectiveSurface,
};
use crate::trace::{basic_traces, numeric_trace_oracle, IntSl2, TraceEngine};

/// Named presentations used throughout the suite.
pub const PRESENTATIONS: &[(&str, &str)] = &[
    ("hopf", "a,b | [a,b]"),
    ("gamma0-2", "a,b | [a,b^2]"),
    ("gamma0-3", "a,b | [a,b^3]"),
    ("L5a1", "a,b | ab^3a^2bAB^3A^2B"),
    ("L13n5885", "a,b | a^2bAb^2A^2BaB^2"),
    ("L6a2", "a,b | ab^3a^2b^2AB^3A^2B^2"),
    ("E6", "a,b | a^3b^3, ab^2aBA^2B"),
    ("D4", "a,b,c | a^2c^2, b^2c^2, aBCaBc"),
    ("modular", "a,b | a^2, b^3"),
];

/// Looks up a presentation by name.
pub fn named(name: &str) -> Option<Presentation> {
    PRESENTATIONS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, s)| s.parse().expect("bundled presentation parses"))
}

/// A bundled factor by its library name.
pub fn library_factor(nvars: usize, name: &str) -> SparsePoly {
    factor_library(nvars)
        .into_iter()
        .find(|(n, _)| *n == name)
        .map(|(_, p)| p)
        .unwrap_or_else(|| panic!("factor {name} not in library"))
}

pub const CRITERIA: [(u32, &str); 13] = [
    (1, "Hopf character variety"),
    (2, "Gamma0(2) and Gamma0(3) hypersurfaces"),
    (3, "Whitehead link L5a1 factors"),
    (4, "L13n5885 and L6a2 canonical components"),
    (5, "E6 six-factor character variety"),
    (6, "D4 deformed Hopf factor"),
    (7, "census sequences"),
    (8, "substitution eigenvalues and invariance"),
    (9, "qutrit MIC from the modular group"),
    (10, "two-qubit MIC"),
    (11, "triple-product geometry"),
    (12, "singular points of the Hopf surface"),
    (13, "property checks"),
];

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2} {} ({:.2} s): {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.seconds,
            self.detail
        )
    }
}

/// Runs one numbered check. Panics on an unknown id.
pub fn run_criterion(id: u32) -> CriterionResult {
    let name = CRITERIA
        .iter()
        .find(|(i, _)| *i == id)
        .map(|(_, n)| *n)
        .unwrap_or_else(|| panic!("no criterion {id}"));
    let start = Instant::now();
    let (pass, detail) = match id {
        1 => hopf(),
        2 => gamma0(),
        3 => whitehead(),
        4 => canonical_components(),
        5 => e6(),
        6 => d4(),
        7 => censuses(),
        8 => substitutions(),
        9 => qutrit(),
        10 => two_qubit(),
        11 => triples(),
        12 => singular_points(),
        13 => properties(),
        _ => unreachable!(),
    };
    CriterionResult {
        id,
        name,
        pass,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

pub fn run_all() -> Vec<CriterionResult> {
    CRITERIA.iter().map(|(id, _)| run_criterion(*id)).collect()
}

type Outcome = (bool, String);

fn f_h() -> SparsePoly {
    library_factor(3, "f_H")
}

fn show(p: &SparsePoly) -> String {
    p.display_with(&["x", "y", "z"])
}

fn hopf() -> Outcome {
    let p = named("hopf").unwrap();
    let recs = match ideal_generator_records(&p) {
        Ok(r) => r,
        Err(e) => return (false, e.to_string()),
    };
    let first = recs
        .iter()
        .find(|r| r.test_word.is_empty())
        .map(|r| r.poly.clone());
    let first_ok = first.as_ref() == Some(&-&f_h());
    let polys: Vec<SparsePoly> = recs.iter().map(|r| r.poly.clone()).collect();
    let h = hypersurface_part(&polys).unwrap();
    let ok = first_ok && h.eq_up_to_sign(&f_h());
    (
        ok,
        format!(
            "generator(s=1) = -f_H: {first_ok}; hypersurface {}",
            show(&h)
        ),
    )
}

fn hypersurface_of(name: &str) -> Result<(SparsePoly, Vec<SparsePoly>), String> {
    let p = named(name).unwrap();
    let recs = ideal_generator_records(&p).map_err(|e| e.to_string())?;
    let gens: Vec<SparsePoly> = recs.into_iter().map(|r| r.poly).collect();
    let h = hypersurface_part(&gens).map_err(|e| e.to_string())?;
    Ok((h, gens))
}

fn gamma0() -> Outcome {
    let y = SparsePoly::var(3, 1);
    let expected = [
        ("gamma0-2", &y * &f_h()),
        ("gamma0-3", &(&(&y * &y) - &SparsePoly::one(3)) * &f_h()),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, want) in expected {
        match hypersurface_of(name) {
            Ok((h, _)) => {
                let ok = h.eq_up_to_sign(&want);
                pass &= ok;
                parts.push(format!(
                    "{name}: {} ({})",
                    show(&h),
                    if ok { "match" } else { "MISMATCH" }
                ));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("{name}: {e}"));
            }
        }
    }
    (pass, parts.join("; "))
}

/// Factor table for a bundled presentation against named library factors.
fn factor_check(name: &str, factors: &[&str]) -> Result<(bool, SparsePoly, String), String> {
    let p = named(name).unwrap();
    let cands: Vec<SparsePoly> = factors.iter().map(|f| library_factor(3, f)).collect();
    let r = character_variety(&p, &cands).map_err(|e| e.to_string())?;
    let all = r.factors.iter().all(|f| f.divides);
    let table = factors
        .iter()
        .zip(&r.factors)
        .map(|(n, f)| {
            format!(
                "{n}^{} (divides {}/{} generators)",
                f.multiplicity,
                f.generators_divided,
                r.generators.len()
            )
        })
        .collect::<Vec<_>>()
        .join(", ");
    Ok((
        all,
        r.residual,
        format!("hypersurface {}; {table}", show(&r.hypersurface)),
    ))
}

fn whitehead() -> Outcome {
    match factor_check("L5a1", &["f_H", "L5a1"]) {
        Ok((all, residual, detail)) => {
            let unit = residual.is_constant() && residual.eq_up_to_sign(&SparsePoly::one(3));
            (
                all && unit,
                format!("{detail}; residual {}", show(&residual)),
            )
        }
        Err(e) => (false, e),
    }
}

fn canonical_components() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, factor) in [("L13n5885", "L13n5885"), ("L6a2", "L6a2")] {
        match factor_check(name, &[factor]) {
            Ok((all, _, detail)) => {
                pass &= all;
                parts.push(format!("{name}: {detail}"));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("{name}: {e}"));
            }
        }
    }
    (pass, parts.join("; "))
}

fn e6() -> Outcome {
    let names = ["f_H", "x-y", "xy-z+1", "x^2+xy+y^2-3", "f_1", "f_2"];
    match factor_check("E6", &names) {
        Ok((all, _, detail)) => (all, detail),
        Err(e) => (false, e),
    }
}

fn d4() -> Outcome {
    let cand = library_factor(7, "f_H+wxk-2k^2");
    let (h, gens) = match hypersurface_of("D4") {
        Ok(v) => v,
        Err(e) => return (false, e),
    };
    let names = ["k", "x", "y", "z", "u", "v", "w"];
    let main = match_variables(&h, &cand);
    if let Some(perm) = main {
        return (
            true,
            format!("hypersurface divisible under assignment {perm:?}"),
        );
    }
    let fallback = match_variables_any(&gens, &cand);
    let detail = format!(
        "hypersurface {} ({} generators); no assignment of 5040 makes the factor divide it; fallback (divides some generator): {}",
        h.display_with(&names),
        gens.len(),
        match &fallback {
            Some((perm, i)) => format!("generator {i} under {perm:?}"),
            None => "none".into(),
        }
    );
    (fallback.is_some(), detail)
}

fn censuses() -> Outcome {
    let cases: [(&str, usize, &[u64]); 3] = [
        ("hopf", 8, &[1, 3, 4, 7, 6, 12, 8, 15]),
        ("L5a1", 6, &[1, 3, 6, 17, 22, 79]),
        ("L13n5885", 6, &[1, 3, 5, 12, 19, 60]),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, n, want) in cases {
        let p = named(name).unwrap();
        let tables = low_index_subgroups(&p, n);
        let valid = tables.iter().all(|t| t.satisfies(&p));
        let mut counts = vec![0u64; n];
        for t in &tables {
            counts[t.index() - 1] += 1;
        }
        let ok = valid && counts == want;
        pass &= ok;
        parts.push(format!(
            "{name} {counts:?}{}",
            if ok { "" } else { " MISMATCH" }
        ));
    }
    (pass, parts.join("; "))
}

fn substitutions() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, e, want) in [
        ("golden", Endomorphism::golden(), 1.618_033_988_749_895),
        ("silver", Endomorphism::silver(), 1.0 + 2f64.sqrt()),
        (
            "tribonacci",
            Endomorphism::tribonacci(),
            1.839_286_755_214_161,
        ),
    ] {
        match pf_analysis(&substitution_matrix(&e)) {
            Ok(a) => {
                let ok = a.primitive && (a.pf_eigenvalue - want).abs() < 1e-9;
                pass &= ok;
                parts.push(format!(
                    "{name} λ={} char {}",
                    &a.pf_decimal[..12],
                    a.char_poly.display_with(&["λ"])
                ));
            }
            Err(err) => {
                pass = false;
                parts.push(format!("{name}: {err}"));
            }
        }
    }
    for pres in ["hopf", "L5a1"] {
        let p = named(pres).unwrap();
        for (mname, e) in [
            ("golden", Endomorphism::golden()),
            ("silver", Endomorphism::silver()),
        ] {
            for repeats in 1..=2 {
                let ok = invariance_check(&p, &e, 5, repeats).is_ok_and(|r| r.all_equal());
                pass &= ok;
                if !ok {
                    parts.push(format!("{pres} under {mname}^{repeats}: census differs"));
                }
            }
        }
    }
    parts.push(
        "census invariance at N=5 for hopf and L5a1 under golden and silver, repeats 1-2".into(),
    );
    (pass, parts.join("; "))
}

/// Index-3 tables of the modular group and the magic eigenvectors of their
/// permutation matrices.
fn modular_fiducials() -> Vec<Fiducial> {
    let p = named("modular").unwrap();
    low_index_subgroups(&p, 3)
        .into_iter()
        .filter(|t| t.index() == 3)
        .flat_map(|t| fiducial_candidates(&t.perm_rep()))
        .filter(|f| f.magic)
        .collect()
}

fn qutrit() -> Outcome {
    let target = Fiducial::qutrit();
    let Some(f) = modular_fiducials()
        .into_iter()
        .find(|f| target.same_ray(&f.vector))
    else {
        return (
            false,
            "no index-3 permutation matrix has eigenvector (0,1,-1)".into(),
        );
    };
    let paulis = pauli_group(3, PauliStructure::SingleQudit).unwrap();
    let ps = build_povm(&f, &paulis).unwrap();
    let ok = ps.gram_rank == 9 && ps.twirl_error < 1e-10;
    (
        ok,
        format!(
            "fiducial from {}; Gram rank {}; |ΣΠ - 3I| = {:.1e}",
            f.source, ps.gram_rank, ps.twirl_error
        ),
    )
}

fn two_qubit() -> Outcome {
    let f = Fiducial::two_qubit();
    let paulis = pauli_group(4, PauliStructure::TwoQubit).unwrap();
    let ps = build_povm(&f, &paulis).unwrap();
    let ok = ps.gram_rank == 16 && ps.twirl_error < 1e-10;
    (
        ok,
        format!(
            "magic {}; Gram rank {}; |ΣΠ - 4I| = {:.1e}",
            f.magic, ps.gram_rank, ps.twirl_error
        ),
    )
}

fn triples() -> Outcome {
    let q = build_povm(
        &Fiducial::qutrit(),
        &pauli_group(3, PauliStructure::SingleQudit).unwrap(),
    )
    .unwrap();
    let g = triple_product_geometry(&q, 1e-9);
    let hesse = g.lines.as_ref().filter(|l| {
        l.lines.len() == 12 && l.lines_per_point.iter().all(|&c| c == 4) && l.verdict.is_some()
    });
    let q_detail = match &g.lines {
        Some(l) => format!(
            "qutrit: {} triples, line cluster {:.4} with {} lines, {:?} per point",
            g.total,
            l.value.re,
            l.lines.len(),
            l.lines_per_point
        ),
        None => format!("qutrit: {} triples, no real cluster", g.total),
    };
    let t = build_povm(
        &Fiducial::two_qubit(),
        &pauli_group(4, PauliStructure::TwoQubit).unwrap(),
    )
    .unwrap();
    let tg = triple_product_geometry(&t, 1e-9);
    let summary: Vec<String> = tg
        .clusters
        .iter()
        .take(4)
        .map(|c| format!("{:.3}{:+.3}i x{}", c.value.re, c.value.im, c.count()))
        .collect();
    let verdict = tg
        .lines
        .as_ref()
        .and_then(|l| l.verdict.clone())
        .unwrap_or_else(|| "no configuration matched".into());
    (
        hesse.is_some() && g.total == 84,
        format!(
            "{q_detail}; two-qubit (heuristic): {} triples, clusters [{}], {verdict}",
            tg.total,
            summary.join(", ")
        ),
    )
}

fn singular_points() -> Outcome {
    let s = ProjectiveSurface::from_affine(&f_h()).unwrap();
    let pts = search_singular(&s, 4).unwrap();
    let want = [[-2, -2, 2, 1], [-2, 2, -2, 1], [2, -2, -2, 1], [2, 2, 2, 1]];
    let consistent = pts.iter().all(|p| verify_singular_int(&s, *p) == Ok(true));
    let inf = search_singular_at_infinity(&s, 2).unwrap();
    let ok = pts == want && consistent;
    (
        ok,
        format!(
            "{} affine singular points {pts:?}; {} at infinity",
            pts.len(),
            inf.len()
        ),
    )
}

fn random_word(rng: &mut StdRng, rank: u8, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    Word::new(
        (0..len)
            .map(|_| Letter::new(rng.gen_range(0..rank), rng.gen()))
            .collect(),
    )
}

fn random_sl2(rng: &mut StdRng) -> IntSl2 {
    (0..rng.gen_range(1..=4)).fold(IntSl2::identity(), |m, _| {
        let k = rng.gen_range(-3i64..=3);
        let e = if rng.gen() {
            IntSl2::new(1, k, 0, 1)
        } else {
            IntSl2::new(1, 0, k, 1)
        };
        m.mul(&e.unwrap())
    })
}

fn random_poly(rng: &mut StdRng, nvars: usize) -> SparsePoly {
    let n = rng.gen_range(1..=4);
    SparsePoly::from_terms(
        nvars,
        (0..n).map(|_| {
            let e: Vec<u32> = (0..nvars).map(|_| rng.gen_range(0..=2)).collect();
            (e, BigInt::from(rng.gen_range(-20i64..=20)))
        }),
    )
}

fn properties() -> Outcome {
    let mut rng = StdRng::seed_from_u64(2024);
    let mut failures = Vec::new();

    // numeric trace oracle, 1000 words split over ranks 2 and 3
    let mut engines = [TraceEngine::new(2).unwrap(), TraceEngine::new(3).unwrap()];
    let mut trace_bad = 0;
    for i in 0..1000 {
        let rank = 2 + i % 2;
        let w = random_word(&mut rng, rank as u8, 12);
        let mats: Vec<IntSl2> = (0..rank).map(|_| random_sl2(&mut rng)).collect();
        let engine = &mut engines[rank - 2];
        let ok = engine.trace_poly(&w).ok().and_then(|p| {
            let b = basic_traces(engine.coordinates(), &mats).ok()?;
            Some(p.evaluate_int(&b).ok()? == numeric_trace_oracle(&w, &mats).ok()?)
        });
        if ok != Some(true) {
            trace_bad += 1;
        }
    }
    if trace_bad > 0 {
        failures.push(format!("{trace_bad} trace mismatches"));
    }

    // ring and gcd laws
    let mut ring_bad = 0;
    for _ in 0..200 {
        let (f, g, h) = (
            random_poly(&mut rng, 3),
            random_poly(&mut rng, 3),
            random_poly(&mut rng, 3),
        );
        let ring = &f * &(&g + &h) == &(&f * &g) + &(&f * &h)
            && &f * &g == &g * &f
            && (f.is_zero() || (&f * &g).exact_divide(&f).ok() == Some(g.clone()));
        let gcd_ok = h.is_zero() || gcd(&(&f * &h), &(&g * &h)) == (&h * &gcd(&f, &g)).canonical();
        if !(ring && gcd_ok) {
            ring_bad += 1;
        }
    }
    if ring_bad > 0 {
        failures.push(format!("{ring_bad} ring/gcd law failures"));
    }

    // every census output is closed and kills every relator
    let mut tables = 0;
    for (name, n) in [
        ("hopf", 6),
        ("L5a1", 5),
        ("L13n5885", 5),
        ("modular", 6),
        ("E6", 5),
        ("D4", 4),
    ] {
        let p = named(name).unwrap();
        for t in low_index_subgroups(&p, n) {
            tables += 1;
            if !t.satisfies(&p) {
                failures.push(format!(
                    "{name}: table of index {} violates a relator",
                    t.index()
                ));
            }
        }
    }

    // twirl identity on every POVM built from a magic candidate
    let mut povms = 0;
    let mut fids = modular_fiducials();
    fids.push(Fiducial::qutrit());
    fids.push(Fiducial::two_qubit());
    for f in &fids {
        let paulis = pauli_group(f.dim(), PauliStructure::default_for(f.dim())).unwrap();
        let ps = build_povm(f, &paulis).unwrap();
        povms += 1;
        if ps.twirl_error > 1e-10 || ps.projector_error > 1e-10 {
            failures.push(format!("twirl identity fails for {}", f.source));
        }
    }

    let detail = format!(
        "1000 trace words, 200 polynomial triples, {tables} census tables, {povms} POVMs{}",
        if failures.is_empty() {
            String::new()
        } else {
            format!("; {}", failures.join("; "))
        }
    );
    (failures.is_empty(), detail)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_presentations_parse() {
        for (name, _) in PRESENTATIONS {
            assert!(named(name).is_some());
        }
        assert!(named("nope").is_none());
        assert_eq!(named("D4").unwrap().rank(), 3);
    }

    #[test]
    fn quick_criteria() {
        for id in [1, 9, 10, 12] {
            let r = run_criterion(id);
            assert!(r.pass, "{}", r.line());
        }
    }
}
