//! Acceptance suite: one PASS/FAIL line per criterion; exits nonzero when any criterion fails.

use std::collections::BTreeMap;
use std::process::ExitCode;

use liequant::extension::{check_cocycle, Extension};
use liequant::fixtures::load;
use liequant::lie::maurer_cartan_residuals;
use liequant::polarization::{self, classify, detect_anomaly, Verdict};
use liequant::representation::{self, limit_operators, metaplectic_representation, su2_representation};
use liequant::specfile::{parse_combination, GroupSpec, SpecFile};
use liequant::symbolic::{parse_expr, Expr, Scalar};
use liequant::virasoro::{
    central_slope, characteristic_modes, classical_anomaly_line, kac_h, resonance, sugawara_commutator, Branch,
    FockSpace, VirasoroSpec,
};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn group(name: &str) -> GroupSpec {
    match load(name).expect("bundled fixture") {
        SpecFile::Group(g) => *g,
        _ => panic!("{name} is not a group fixture"),
    }
}

fn extension(g: &GroupSpec) -> Extension {
    let xi = g.cocycle.clone().unwrap_or_else(Expr::zero);
    Extension::build(&g.law, &xi, &g.theta_scale).expect("extension")
}

fn cocycles() -> Outcome {
    let mut failures = Vec::new();
    let cases = [("galilei", "V'^2/2", "V'^2"), ("hw", "q'*v - v'*q", "q'*v^2 - v'*q")];
    for (name, from, to) in cases {
        let g = group(name);
        let xi = g.cocycle.clone().expect("cocycle");
        let r = check_cocycle(&xi, &g.law).expect("cocycle check");
        if !r.passed() {
            failures.push(format!("{name}: {:?}", r.residual));
        }
        let text = liequant::fixtures::fixture_text(name).unwrap();
        assert!(text.contains(from), "mutation anchor missing in {name}");
        let mutated = match liequant::specfile::parse_spec(&text.replace(from, to)).unwrap() {
            SpecFile::Group(m) => m,
            _ => unreachable!(),
        };
        let bad = check_cocycle(mutated.cocycle.as_ref().unwrap(), &mutated.law).unwrap();
        if bad.passed() {
            failures.push(format!("{name}: mutation `{to}` still passes"));
        }
    }
    outcome(failures.is_empty(), if failures.is_empty() { "zero residuals; both mutations rejected".into() } else { failures.join("; ") })
}

/// Compares every bracket of the full algebra with a reference table (unlisted pairs vanish).
fn table_mismatches(name: &str, reference: &[(&str, &str, &str)]) -> Vec<String> {
    let g = group(name);
    let ext = extension(&g);
    let full = ext.algebra.full_algebra();
    let names = full.names.clone();
    let mut expected: BTreeMap<(usize, usize), Vec<Expr>> = BTreeMap::new();
    for (a, b, value) in reference {
        let (i, j) = (full.index(a).unwrap(), full.index(b).unwrap());
        let v = parse_combination(value, &names[..names.len() - 1], &g.law.table).expect("reference bracket");
        let neg: Vec<Expr> = v.iter().map(|x| -x.clone()).collect();
        expected.insert((i, j), v);
        expected.insert((j, i), neg);
    }
    let mut out = Vec::new();
    for i in 0..full.dim() {
        for j in 0..full.dim() {
            let want = expected.remove(&(i, j)).unwrap_or_else(|| vec![Expr::zero(); full.dim()]);
            if full.c[i][j] != want {
                out.push(format!(
                    "{name} [{}, {}] = {} (reference {})",
                    names[i],
                    names[j],
                    full.render_vector(&full.c[i][j]),
                    full.render_vector(&want)
                ));
            }
        }
    }
    out
}

fn structure_constants() -> Outcome {
    let mut bad = table_mismatches("hw", &[("q", "v", "(m/hbar)*Xi")]);
    bad.extend(table_mismatches(
        "su2",
        &[
            ("z1", "z2", "z2"),
            ("z1", "z1c", "0"),
            ("z1", "z2c", "-z2c"),
            ("z1c", "z2", "-z2"),
            ("z1c", "z2c", "z2c"),
            ("z2", "z2c", "-z1 + z1c"),
        ],
    ));
    bad.extend(table_mismatches(
        "schrodinger",
        &[
            ("A", "B", "B"),
            ("A", "C", "-C"),
            ("A", "D", "0"),
            ("B", "C", "A - D"),
            ("B", "D", "B"),
            ("C", "D", "-C"),
            ("x1", "x2", "(m*omega/hbar)*Xi"),
            ("A", "x1", "x1/2"),
            ("A", "x2", "-x2/2"),
            ("B", "x1", "0"),
            ("B", "x2", "x1"),
            ("C", "x1", "x2"),
            ("C", "x2", "0"),
            ("D", "x1", "-x1/2"),
            ("D", "x2", "x2/2"),
        ],
    ));
    outcome(bad.is_empty(), if bad.is_empty() { "hw, su2, schrodinger tables identical".into() } else { bad.join("; ") })
}

fn maurer_cartan() -> Outcome {
    let mut bad = Vec::new();
    for name in ["galilei", "hw", "rk", "schrodinger", "su2"] {
        let ext = extension(&group(name));
        let r = maurer_cartan_residuals(&ext.lie.forms, &ext.lie.algebra, &ext.law.coords);
        if !r.is_empty() {
            bad.push(format!("{name}: {}", r.join(", ")));
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { "identically zero on 5 extended groups".into() } else { bad.join("; ") })
}

fn spans(alg: &liequant::extension::ExtendedAlgebra, got: &[Vec<Expr>], texts: &[&str], table: &liequant::symbolic::SymbolTable) -> bool {
    let want: Vec<Vec<Expr>> = texts.iter().map(|t| parse_combination(t, alg.names(), table).unwrap()).collect();
    got.len() == want.len()
        && want.iter().all(|w| liequant::linalg::in_span(got, w))
        && got.iter().all(|g| liequant::linalg::in_span(&want, g))
}

fn characteristic_subalgebras() -> Outcome {
    let mut bad = Vec::new();
    let cases: [(&str, &[&str]); 3] =
        [("rk", &["a"]), ("su2", &["z1", "z2", "z1c", "z2c"]), ("schrodinger", &["A + D", "A - D", "B", "C"])];
    for (name, want) in cases {
        let g = group(name);
        let ext = extension(&g);
        let k = polarization::characteristic_subalgebra(&ext.algebra);
        if !(k.closed && spans(&ext.algebra, &k.basis, want, &g.law.table)) {
            let got: Vec<String> = k.basis.iter().map(|v| polarization::render(&ext.algebra, v)).collect();
            bad.push(format!("{name}: got <{}>", got.join(", ")));
        }
    }
    for (c, r) in [(1, 1), (1, 2), (1, 3), (2, 2), (3, 4)] {
        let spec = VirasoroSpec::new(6, Expr::int(c), Expr::int(c * r * r)).unwrap();
        let ch = characteristic_modes(&spec);
        if ch.kernel_modes != vec![-r, 0, r] || !ch.routes_agree || !ch.closed {
            bad.push(format!("virasoro c={c} r={r}: {:?}", ch.kernel_modes));
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { "rk, su2 (trivial), schrodinger, virasoro r = 1..4 match".into() } else { bad.join("; ") })
}

fn noether_relations() -> Outcome {
    let g = group("schrodinger");
    let ext = extension(&g);
    let names = &ext.lie.algebra.names;
    let f: BTreeMap<&str, Expr> = names.iter().map(String::as_str).zip(ext.noether_invariants()).collect();
    let c = parse_expr("hbar/(2*m*omega)", &g.law.table).unwrap();
    let two = Expr::int(2);
    let sq = |e: &Expr| e * e;
    let relations = [
        ("F_B = (hbar/2m omega) F_x2^2", &f["B"] - &(&c * &sq(&f["x2"]))),
        ("F_C = -(hbar/2m omega) F_x1^2", &f["C"] + &(&c * &sq(&f["x1"]))),
        ("F_A + F_D = 0", &f["A"] + &f["D"]),
        ("F_A - F_D = -(hbar/m omega) F_x1 F_x2", &(&f["A"] - &f["D"]) + &(&(&two * &c) * &(&f["x1"] * &f["x2"]))),
    ];
    let failed: Vec<&str> = relations.iter().filter(|(_, r)| !r.is_zero()).map(|(n, _)| *n).collect();
    // Diagnostic only: the two squared relations with x1 and x2 exchanged.
    let swapped = (&f["B"] - &(&c * &sq(&f["x1"]))).is_zero() && (&f["C"] + &(&c * &sq(&f["x2"]))).is_zero();
    if failed.is_empty() {
        outcome(true, "all four relations hold identically")
    } else {
        outcome(false, format!("nonzero residual for {}; with x1 and x2 exchanged they hold: {swapped}", failed.join(", ")))
    }
}

fn anomaly_detection() -> Outcome {
    let sch = detect_anomaly(&extension(&group("schrodinger")).algebra);
    let tpl = match load("template").unwrap() {
        SpecFile::Algebra(a) => *a,
        _ => unreachable!(),
    };
    let t = detect_anomaly(&tpl.algebra);
    let witnesses_ok = t.witnesses.len() == 2
        && t.witnesses.iter().all(|w| classify(&tpl.algebra, w).is_ok_and(|p| p.full && p.symplectic));
    let passed = sch.verdict == Verdict::Absent && t.verdict == Verdict::Exists && witnesses_ok;
    outcome(
        passed,
        format!("schrodinger: {:?} ({}); template: {:?}, {} full+symplectic witnesses", sch.verdict, sch.method, t.verdict, t.witnesses.len()),
    )
}

fn su2_representations() -> Outcome {
    let mut bad = Vec::new();
    for lambda in 0..=6i64 {
        match su2_representation(&Scalar::from_int(lambda)) {
            Ok(r) => {
                let j = Scalar::from_ratio(lambda, 2);
                let want = (&j * &(&j + &Scalar::one())).to_string();
                let ok = r.dimension == (lambda + 1) as usize
                    && r.casimir.as_deref() == Some(want.as_str())
                    && r.commutation_residuals.is_empty()
                    && r.matrix_residuals.is_empty()
                    && r.triple;
                if !ok {
                    bad.push(format!("lambda={lambda}: dim {} casimir {:?}", r.dimension, r.casimir));
                }
            }
            Err(e) => bad.push(format!("lambda={lambda}: {e}")),
        }
    }
    for rejected in [Scalar::from_ratio(1, 2), Scalar::from_ratio(3, 2), Scalar::from_int(-1)] {
        if su2_representation(&rejected).is_ok() {
            bad.push(format!("lambda={rejected} accepted"));
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { "lambda 0..6 exact; 1/2, 3/2, -1 rejected".into() } else { bad.join("; ") })
}

fn metaplectic() -> Outcome {
    match metaplectic_representation(12) {
        Ok(r) => {
            let passed = r.casimir.as_deref() == Some("-3/16")
                && r.parity_split
                && r.commutant_dimension == 2
                && r.j_fourth.scalar.as_deref() == Some("-1");
            outcome(
                passed,
                format!(
                    "casimir {:?} on {} stable columns, parity split {}, commutant {}, J^4 {:?}",
                    r.casimir, r.stable_columns, r.parity_split, r.commutant_dimension, r.j_fourth.scalar
                ),
            )
        }
        Err(e) => outcome(false, e.to_string()),
    }
}

fn higher_order() -> Outcome {
    match (representation::ho_polarization_v(true), representation::ho_polarization_v(false)) {
        (Ok(sym), Ok(desym)) => outcome(
            sym.passed() && !desym.passed(),
            format!("symmetrized passes: {}; de-symmetrized defects: {}", sym.passed(), desym.defects.join("; ")),
        ),
        (a, b) => outcome(false, format!("{:?} / {:?}", a.err(), b.err())),
    }
}

fn limit() -> Outcome {
    match limit_operators(12) {
        Ok(r) => outcome(
            r.weyl_matrix_holds && r.energy_matrix_holds && r.omega_absent,
            format!(
                "p = {}, q = {}, E = {}; [q,p] on stable rows = {:?} (want {}); E = p^2/2m as matrices: {}; omega absent: {}",
                r.momentum, r.position, r.energy, r.weyl_matrix, r.expected_commutator, r.energy_matrix_holds, r.omega_absent
            ),
        ),
        Err(e) => outcome(false, e.to_string()),
    }
}

fn virasoro_kac() -> Outcome {
    let mut bad = Vec::new();
    let cs = [Scalar::one(), Scalar::from_ratio(1, 2), Scalar::from_int(3), Scalar::from_int(-2)];
    let mut resonant = 0;
    for c in &cs {
        let mut primes: Vec<Scalar> = (1..=4).map(|r| c * &Scalar::from_int(r * r)).collect();
        primes.extend([2, 3, 5, -1, 0].map(|k| c * &Scalar::from_int(k)));
        primes.push(c * &Scalar::from_ratio(1, 4));
        for cp in primes {
            let spec = VirasoroSpec::new(6, Expr::constant(c.clone()), Expr::constant(cp.clone())).unwrap();
            let ch = characteristic_modes(&spec);
            let shape = match ch.roots.as_slice() {
                [a, 0, b] if *a == -*b && *b > 0 => Some(*b),
                _ => None,
            };
            let r = resonance(c, &cp);
            if shape != r || !ch.routes_agree {
                bad.push(format!("c={c} c'={cp}: modes {:?}, resonance {r:?}", ch.roots));
            }
            if let Some(r) = shape {
                resonant += 1;
                let h = &(c - &cp) / &Scalar::from_int(24);
                if h != classical_anomaly_line(c, r) {
                    bad.push(format!("c={c} r={r}: (c-c')/24 = {h}"));
                }
            }
        }
    }
    let mut coincidences = 0;
    for c in [Scalar::from_ratio(1, 2), Scalar::from_int(7), Scalar::from_ratio(-3, 5)] {
        for k in 1..=5 {
            coincidences += 1;
            if kac_h(&c, k, k, Branch::Plus) != kac_h(&c, k, k, Branch::Minus) {
                bad.push(format!("k=s={k}, c={c}: branches differ"));
            }
        }
    }
    for c in [1, 25] {
        let c = Scalar::from_int(c);
        for k in 1..=5 {
            for s in 1..=5 {
                coincidences += 1;
                if kac_h(&c, k, s, Branch::Plus) != kac_h(&c, k, s, Branch::Minus) {
                    bad.push(format!("c={c}, k={k}, s={s}: branches differ"));
                }
            }
        }
    }
    outcome(
        bad.is_empty(),
        if bad.is_empty() {
            format!("{resonant} resonant cases on the classical line; {coincidences} branch coincidences")
        } else {
            bad.join("; ")
        },
    )
}

fn sugawara() -> Outcome {
    let mut bad = Vec::new();
    let mut windows = Vec::new();
    for d in 1..=4 {
        let space = FockSpace::new(d, 4).unwrap();
        let c = sugawara_commutator(&space, 1, -1);
        windows.push(c.checked_columns);
        if !c.holds() {
            bad.push(format!("d={d}: [L1,L-1] - 2L0 = {:?} on {} columns", c.central, c.checked_columns));
        }
    }
    let slope = central_slope(2, 4, 4).unwrap();
    if !slope.holds() {
        bad.push(format!("[L2,L-2] central values {:?}", slope.values));
    }
    outcome(
        bad.is_empty(),
        if bad.is_empty() {
            format!("[L1,L-1] = 2L0 on {windows:?} exact columns; [L2,L-2] - 4L0 = d * {}", slope.slope.unwrap_or_default())
        } else {
            bad.join("; ")
        },
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("cocycle suite", cocycles),
        ("structure constants", structure_constants),
        ("Maurer-Cartan", maurer_cartan),
        ("characteristic subalgebras", characteristic_subalgebras),
        ("Noether relations", noether_relations),
        ("anomaly detection", anomaly_detection),
        ("SU(2) representations", su2_representations),
        ("metaplectic suite", metaplectic),
        ("higher-order polarization", higher_order),
        ("Weyl/limit operators", limit),
        ("Virasoro/Kac", virasoro_kac),
        ("Sugawara", sugawara),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        failed += usize::from(!o.passed);
        println!("criterion {:>2} {name}: {} ({})", k + 1, if o.passed { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {} of 12 criteria pass", 12 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
