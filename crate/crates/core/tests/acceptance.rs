//! Acceptance suite: one line per criterion, nonzero exit on any failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use ainfty::ainfty::{deform_by_b, from_dga, mc_residual, verify_ainfty, verify_homomorphism, FilteredAInfinity};
use ainfty::bimodule::{
    curvature_identity, deform_bimodule, dga_as_bimodule, diagonal, from_dg_bimodule, verify_bimodule,
};
use ainfty::complex::{Chain, SparseVec};
use ainfty::homotopy::{build_interval_model, verify_model_axioms};
use ainfty::io::{self, ImportCutoffs};
use ainfty::linalg::reduce_fully;
use ainfty::linalg::{cohomology_ranks, Matrix};
use ainfty::morse::{
    fundamental_cycle, hexagon, morse_flow_data, morse_transfer, rp2, torus7, GradientMatching, SimplicialComplex,
};
use ainfty::novikov::{Energy, Field, GapClass, Monomial};
use ainfty::samples::{
    cone, dual_numbers, exterior_truncated, heisenberg, random_dga, random_filtered, random_transfer_data, rng,
    triangular,
};
use ainfty::transfer::{apply_matrix, oracle_transfer_low_arity, transfer, verify_transfer, TransferData};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const Q: Field = Field::Rational;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(t: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let e = t.elapsed();
    ensure(e < limit, || format!("{what} took {e:?}, limit {limit:?}"))
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn dga_sign_suite() -> Outcome {
    let mut r = rng(1);
    let mut slowest = Duration::ZERO;
    for i in 0..20 {
        let s = random_dga(&mut r, Q);
        ensure(
            s.dga.basis.len() <= 8 && s.dga.differential.iter().any(|v| !v.is_zero()),
            || format!("case {i}: bad sample"),
        )?;
        let t = Instant::now();
        let a = from_dga(&s.dga, Energy::int(1), 3).map_err(err)?;
        let rep = verify_ainfty(&a);
        ensure(rep.passed(), || format!("case {i} ({}): {rep}", s.label))?;
        within(t, Duration::from_secs(1), &format!("case {i}"))?;
        slowest = slowest.max(t.elapsed());
    }
    Ok(format!("20 random DGAs, slowest {slowest:?}"))
}

fn massey_regression() -> Outcome {
    let t = Instant::now();
    let s = heisenberg(Q);
    let a = from_dga(&s.dga, Energy::int(1), 3)
        .map_err(err)?
        .into_verified()
        .map_err(err)?;
    let data = TransferData::from_reduction(&a, &reduce_fully(&a.differential())).map_err(err)?;
    let oracle: Vec<_> = (1..=3)
        .map(|k| oracle_transfer_low_arity(&a, &data, k))
        .collect::<Result<_, _>>()
        .map_err(err)?;
    let out = transfer(&a, &data).map_err(err)?;
    ensure(out.model.differential().is_zero(), || "m'_1 is not zero".into())?;
    for k in 1..=3 {
        let got = out.model.ops.get(k, &GapClass::ZERO).cloned().unwrap_or_default();
        ensure(got == oracle[k - 1], || {
            format!("arity {k} differs from the direct formula")
        })?;
    }
    // the induced product, straight from the matrices
    let m2 = out.model.ops.get(2, &GapClass::ZERO).cloned().unwrap_or_default();
    for x in 0..data.basis.len() {
        for y in 0..data.basis.len() {
            let ix = data.iota.column(x);
            let iy = data.iota.column(y);
            let mut prod = vec![Q.zero(); a.dim()];
            for (i, cx) in ix.iter().enumerate() {
                for (j, cy) in iy.iter().enumerate() {
                    if cx.is_zero() || cy.is_zero() {
                        continue;
                    }
                    if let Some(v) = a.ops.get(2, &GapClass::ZERO).and_then(|t| t.get(&[i, j])) {
                        for (&o, c) in v.iter() {
                            prod[o] = &prod[o] + &(&(cx * cy) * c);
                        }
                    }
                }
            }
            let want: SparseVec = data
                .p
                .apply(&prod)
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .collect();
            let got = m2.get(&[x, y]).cloned().unwrap_or_default();
            ensure(got == want, || {
                format!("m'_2({}, {})", data.basis.name(x), data.basis.name(y))
            })?;
        }
    }
    let (x, y) = (
        data.basis.lookup("x").map_err(err)?,
        data.basis.lookup("y").map_err(err)?,
    );
    let m3 = out
        .model
        .ops
        .get(3, &GapClass::ZERO)
        .and_then(|t| t.get(&[x, x, y]).cloned());
    ensure(m3.is_some(), || "m'_3(x, x, y) vanishes".into())?;
    within(t, Duration::from_secs(1), "Heisenberg transfer")?;
    Ok(format!(
        "m'_3(x,x,y) = {}",
        ainfty::complex::format_chain(&ainfty::complex::lift(&m3.unwrap(), Monomial::ONE), &data.basis)
    ))
}

fn oracle_equivalence() -> Outcome {
    let t = Instant::now();
    let mut r = rng(3);
    for i in 0..50 {
        let s = random_dga(&mut r, Q);
        let a = from_dga(&s.dga, Energy::int(1), 3)
            .map_err(err)?
            .into_verified()
            .map_err(err)?;
        let data = random_transfer_data(&mut r, &a, i % 2 == 0).map_err(err)?;
        let out = transfer(&a, &data).map_err(err)?;
        for k in 1..=3 {
            let want = oracle_transfer_low_arity(&a, &data, k).map_err(err)?;
            let got = out.model.ops.get(k, &GapClass::ZERO).cloned().unwrap_or_default();
            ensure(got == want, || format!("case {i} ({}), arity {k}", s.label))?;
        }
    }
    within(t, Duration::from_secs(10), "50 cases")?;
    Ok(format!("50 pairs in {:?}", t.elapsed()))
}

fn filtered_transfer() -> Outcome {
    let mut r = rng(4);
    let mut slowest = Duration::ZERO;
    for i in 0..20 {
        let (s, a) = random_filtered(&mut r, Q, Energy::int(3), 4).map_err(err)?;
        ensure(a.monoid.generators().len() == 2, || {
            format!("case {i}: monoid has generators {:?}", a.monoid.generators())
        })?;
        let a = a.into_verified().map_err(err)?;
        let data = random_transfer_data(&mut r, &a, true).map_err(err)?;
        let t = Instant::now();
        let out = transfer(&a, &data).map_err(err)?;
        let (rm, rh) = verify_transfer(&out, &a).map_err(err)?;
        ensure(rm.passed() && rh.passed(), || {
            format!("case {i} ({}): {rm}\n{rh}", s.label)
        })?;
        within(t, Duration::from_secs(60), &format!("case {i}"))?;
        slowest = slowest.max(t.elapsed());
    }
    Ok(format!("20 filtered inputs, slowest {slowest:?}"))
}

fn curved_exterior() -> FilteredAInfinity {
    let s = exterior_truncated(Q);
    let a = from_dga(&s.dga, Energy::int(3), 3).unwrap();
    let mut ops = a.ops.clone();
    let y = a.basis.lookup("y").unwrap();
    ops.add_entry(
        0,
        GapClass::new(Energy::int(1), 0).unwrap(),
        vec![],
        &SparseVec::single(y, Q.from_i64(2)),
    );
    FilteredAInfinity::new(Q, a.basis.clone(), ops, Energy::int(3), 3, None, None).unwrap()
}

fn interval_models() -> Outcome {
    let t = Instant::now();
    let mut algebras: Vec<(String, FilteredAInfinity)> = [
        heisenberg(Q),
        cone(Q),
        exterior_truncated(Q),
        dual_numbers(Q),
        triangular(Q),
    ]
    .into_iter()
    .map(|s| (s.label.clone(), from_dga(&s.dga, Energy::int(2), 3).unwrap()))
    .collect();
    algebras.push(("curved exterior".into(), curved_exterior()));
    for (label, a) in &algebras {
        let a = a.clone().into_verified().map_err(err)?;
        let m = build_interval_model(&a).map_err(err)?;
        let rv = verify_ainfty(&m.algebra);
        ensure(rv.passed(), || format!("{label}: {rv}"))?;
        let ax = verify_model_axioms(&m, &a).map_err(err)?;
        ensure(ax.passed(), || format!("{label}: {ax}"))?;
        for (name, f, src, tgt) in [
            ("Incl", &m.incl, &a, &m.algebra),
            ("Eval0", &m.eval0, &m.algebra, &a),
            ("Eval1", &m.eval1, &m.algebra, &a),
        ] {
            let r = verify_homomorphism(f, src, tgt).map_err(err)?;
            ensure(r.passed(), || format!("{label}, {name}: {r}"))?;
        }
    }
    within(t, Duration::from_secs(10), "interval models")?;
    Ok(format!("{} algebras", algebras.len()))
}

fn maurer_cartan() -> Outcome {
    let t1 = Monomial::new(Energy::int(1), 0);
    let mut cases = Vec::new();
    let h = heisenberg(Q);
    let a = from_dga(&h.dga, Energy::int(3), 3).map_err(err)?;
    cases.push((
        "Heisenberg, b = T x",
        a.clone(),
        Chain::single((t1, a.basis.lookup("x").unwrap()), Q.one()),
    ));
    let c = curved_exterior();
    // m0 = 2 T y and m1(x) = -y, so b = 2 T x cancels the curvature
    cases.push((
        "curved exterior, b = 2 T x",
        c.clone(),
        Chain::single((t1, c.basis.lookup("x").unwrap()), Q.from_i64(2)),
    ));
    for (label, a, b) in &cases {
        let r = mc_residual(a, b).map_err(err)?;
        ensure(r.is_solution(), || {
            format!(
                "{label}: residual {}",
                ainfty::complex::format_chain(&r.residual, &a.basis)
            )
        })?;
        let d = deform_by_b(a, b).map_err(err)?;
        ensure(d.curvature().is_zero(), || format!("{label}: deformed curvature"))?;
        let h = ainfty::ainfty::relation_horizon(&d, 1);
        let m1 = d.ops.filtered(|k, _| k == 1);
        for i in 0..d.dim() {
            let x = Chain::single((Monomial::ONE, i), Q.one());
            let mut sq = m1.eval_chains(&[&m1.eval_chains(&[&x])]);
            sq.retain(|(m, _)| m.lambda < h);
            ensure(sq.is_zero(), || format!("{label}: m1^b m1^b on {}", d.basis.name(i)))?;
        }
        let rep = verify_ainfty(&d);
        ensure(rep.passed(), || format!("{label}: {rep}"))?;
    }
    Ok(format!("{} solutions", cases.len()))
}

fn bimodule_suite() -> Outcome {
    for s in [heisenberg(Q), exterior_truncated(Q), triangular(Q), cone(Q)] {
        let a = from_dga(&s.dga, Energy::int(2), 3)
            .map_err(err)?
            .into_verified()
            .map_err(err)?;
        let d = from_dg_bimodule(&dga_as_bimodule(&s.dga), &a, &a, 2, 2).map_err(err)?;
        let r = verify_bimodule(&d);
        ensure(r.passed(), || format!("{}: {r}", s.label))?;
    }
    let c = curved_exterior().into_verified().map_err(err)?;
    let d = diagonal(&c, 2, 2).map_err(err)?;
    let r = verify_bimodule(&d);
    ensure(r.passed(), || format!("curved diagonal: {r}"))?;
    let ci = curvature_identity(&d);
    ensure(ci.passed(), || format!("{ci}"))?;
    let b = Chain::single(
        (Monomial::new(Energy::int(1), 0), c.basis.lookup("x").unwrap()),
        Q.from_i64(2),
    );
    ensure(mc_residual(&c, &b).map_err(err)?.is_solution(), || {
        "b is not a solution".into()
    })?;
    let dd = deform_bimodule(&d, &b, &b).map_err(err)?;
    let h = dd.horizon(0, 0);
    for y in 0..dd.basis.len() {
        let mut sq = Chain::new();
        for ((m, z), c1) in dd.ops.eval(&[], y, &[]).iter() {
            for ((m2, o), c2) in dd.ops.eval(&[], *z, &[]).iter() {
                sq.add_term((*m * *m2, *o), c1 * c2);
            }
        }
        sq.retain(|(m, _)| m.lambda < h);
        ensure(sq.is_zero(), || format!("deformed n00 squared on {}", dd.basis.name(y)))?;
    }
    Ok("DG imports, curvature identity, deformed square zero".into())
}

fn homology_by_dim(k: &SimplicialComplex, d: &Matrix, degrees: &[i64]) -> Vec<usize> {
    let ranks = cohomology_ranks(d, degrees);
    let top = k.dim() as i64;
    (0..=k.dim())
        .map(|j| ranks.get(&(top - j as i64)).copied().unwrap_or(0))
        .collect()
}

fn morse_suite() -> Outcome {
    let f2 = Field::prime(2).map_err(err)?;
    let mut lines = Vec::new();
    for (label, k, field, want) in [
        ("hexagon", hexagon(), Q, vec![1, 1]),
        ("torus", torus7(), Q, vec![1, 2, 1]),
        ("RP2", rp2(), Q, vec![1, 0, 0]),
        ("RP2 mod 2", rp2(), f2, vec![1, 1, 1]),
    ] {
        let t = Instant::now();
        let a = k.chain_algebra(field, Energy::int(1), 3).map_err(err)?;
        let m = GradientMatching::greedy(&k);
        let pkg = morse_flow_data(&a, &k, &m).map_err(err)?;
        let td = &pkg.data;
        let n = a.dim();
        let d = a.differential();
        ensure(d.mul(&d).is_zero(), || format!("{label}: d d"))?;
        let id = Matrix::identity(field, n);
        ensure(id.sub(&td.proj) == d.mul(&td.g).add(&td.g.mul(&d)).neg(), || {
            format!("{label}: homotopy identity")
        })?;
        ensure(td.g.mul(&td.g).is_zero(), || format!("{label}: G G"))?;
        ensure(td.proj.mul(&td.g).is_zero() && td.g.mul(&td.iota).is_zero(), || {
            format!("{label}: side conditions")
        })?;
        ensure(td.p.mul(&td.iota) == Matrix::identity(field, td.basis.len()), || {
            format!("{label}: p iota")
        })?;
        ensure(td.proj.mul(&td.proj) == td.proj, || format!("{label}: idempotence"))?;
        let morse = homology_by_dim(&k, &td.p.mul(&d).mul(&td.iota), td.basis.degrees());
        ensure(morse == want, || {
            format!("{label}: Morse ranks {morse:?}, expected {want:?}")
        })?;
        ensure(k.homology_ranks(field) == want, || format!("{label}: simplicial ranks"))?;
        ensure(pkg.critical.len() >= want.iter().sum::<usize>(), || {
            format!("{label}: Morse inequality")
        })?;
        within(t, Duration::from_secs(5), label)?;
        lines.push(format!("{label} {morse:?}"));
    }
    Ok(lines.join(", "))
}

fn morse_filtered() -> Outcome {
    let t = Instant::now();
    let k = hexagon();
    let cutoff = Energy::int(3);
    let base = k.chain_algebra(Q, cutoff, 3).map_err(err)?;
    let cycle = fundamental_cycle(&k, Q).ok_or("no fundamental cycle")?;
    let beta = GapClass::new(Energy::int(1), 2).map_err(err)?;
    let c = Q.from_i64(5);
    let mut ops = base.ops.clone();
    ops.add_entry(0, beta, vec![], &cycle.scaled(&c));
    let disc = FilteredAInfinity::new(Q, base.basis.clone(), ops, cutoff, 3, None, None).map_err(err)?;
    let m = GradientMatching::greedy(&k);
    let (pkg, out) = morse_transfer(&k, &m, &disc).map_err(err)?;
    ensure(out.model.dim() == 2, || {
        format!("model has {} generators", out.model.dim())
    })?;
    let (rm, rh) = verify_transfer(&out, &disc).map_err(err)?;
    ensure(rm.passed() && rh.passed(), || format!("{rm}\n{rh}"))?;
    // the oracle: p applied once to the disc output, as a matrix product
    let mut column = vec![Q.zero(); disc.dim()];
    for (&i, x) in cycle.iter() {
        column[i] = x * &c;
    }
    let projected = pkg.data.p.apply(&column);
    let want: Chain = projected
        .iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| ((beta.monomial(), i), x.clone()))
        .collect();
    ensure(out.model.curvature() == want, || "m'_0 differs from p m_0".into())?;
    let lifted: Chain = cycle.iter().map(|(&i, x)| ((beta.monomial(), i), x * &c)).collect();
    ensure(apply_matrix(&pkg.data.p, &lifted) == want, || {
        "matrix oracles disagree".into()
    })?;
    within(t, Duration::from_secs(5), "circle")?;
    Ok(format!(
        "m'_0 = {}",
        ainfty::complex::format_chain(&want, &out.model.basis)
    ))
}

struct Run {
    code: i32,
    stdout: String,
}

fn ainfty(args: &[&str]) -> Run {
    let o = Command::new(env!("CARGO_BIN_EXE_ainfty"))
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        code: o.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&o.stdout).into_owned(),
    }
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap()
}

fn round_trip() -> Outcome {
    let dir = tempfile::tempdir().map_err(err)?;
    let p = |name: &str| dir.path().join(name);
    let s = |path: &Path| path.to_str().unwrap().to_string();
    let cut = ImportCutoffs {
        energy: Energy::int(2),
        arity: 3,
    };

    io::write_text(&p("h.dga.json"), &io::to_text(&io::dga_doc(&heisenberg(Q).dga))).map_err(err)?;
    let curved = curved_exterior();
    io::write_text(&p("curved.json"), &io::to_text(&io::algebra_doc(&curved))).map_err(err)?;
    let b = Chain::single(
        (Monomial::new(Energy::int(1), 0), curved.basis.lookup("x").unwrap()),
        Q.from_i64(2),
    );
    io::write_text(&p("b.json"), &io::to_text(&io::chain_doc(&b, &curved.basis))).map_err(err)?;
    let diag = diagonal(&curved, 1, 1).map_err(err)?;
    io::write_text(&p("diag.json"), &io::to_text(&io::bimodule_doc(&diag))).map_err(err)?;
    let k = hexagon();
    io::write_text(&p("hex.json"), &io::to_text(&io::complex_doc(&k))).map_err(err)?;
    let mut disc = k.chain_algebra(Q, Energy::int(3), 3).map_err(err)?;
    let beta = GapClass::new(Energy::int(1), 2).map_err(err)?;
    disc.ops.add_entry(0, beta, vec![], &fundamental_cycle(&k, Q).unwrap());
    let disc =
        FilteredAInfinity::new(Q, disc.basis.clone(), disc.ops.clone(), Energy::int(3), 3, None, None).map_err(err)?;
    io::write_text(&p("disc.json"), &io::to_text(&io::algebra_doc(&disc))).map_err(err)?;
    io::write_text(
        &p("match.json"),
        &io::to_text(&io::matching_doc(&GradientMatching::greedy(&k), &k)),
    )
    .map_err(err)?;

    let runs: Vec<(Vec<String>, Vec<&str>)> = vec![
        (
            vec![
                "verify".into(),
                s(&p("h.dga.json")),
                "--energy-cutoff".into(),
                "2".into(),
                "--emit".into(),
                s(&p("h.json")),
            ],
            vec!["h.json"],
        ),
        (
            vec![
                "transfer".into(),
                s(&p("h.json")),
                "--emit".into(),
                s(&p("model.json")),
                "--ledger".into(),
                s(&p("ledger.json")),
                "--emit-hom".into(),
                s(&p("hom.json")),
            ],
            vec!["model.json", "ledger.json", "hom.json"],
        ),
        (
            vec![
                "interval-model".into(),
                s(&p("h.json")),
                "--emit".into(),
                s(&p("interval.json")),
            ],
            vec!["interval.json"],
        ),
        (
            vec![
                "mc-check".into(),
                s(&p("curved.json")),
                "--b".into(),
                s(&p("b.json")),
                "--emit".into(),
                s(&p("residual.json")),
            ],
            vec!["residual.json"],
        ),
        (
            vec![
                "deform".into(),
                s(&p("curved.json")),
                "--b".into(),
                s(&p("b.json")),
                "--emit".into(),
                s(&p("deformed.json")),
            ],
            vec!["deformed.json"],
        ),
        (
            vec![
                "bimodule-deform".into(),
                "--left".into(),
                s(&p("curved.json")),
                "--right".into(),
                s(&p("curved.json")),
                "--bimodule".into(),
                s(&p("diag.json")),
                "--b0".into(),
                s(&p("b.json")),
                "--b1".into(),
                s(&p("b.json")),
                "--emit".into(),
                s(&p("bideformed.json")),
            ],
            vec!["bideformed.json"],
        ),
        (
            vec![
                "morse".into(),
                "--complex".into(),
                s(&p("hex.json")),
                "--matching".into(),
                s(&p("match.json")),
                "--disc-ops".into(),
                s(&p("disc.json")),
                "--emit".into(),
                s(&p("morse.json")),
                "--ledger".into(),
                s(&p("morse-ledger.json")),
            ],
            vec!["morse.json", "morse-ledger.json"],
        ),
    ];
    let mut artifacts = 0;
    for (args, outputs) in &runs {
        let argv: Vec<&str> = args.iter().map(String::as_str).collect();
        let first = ainfty(&argv);
        ensure(first.code == 0, || {
            format!("`{}` exited {}:\n{}", args[0], first.code, first.stdout)
        })?;
        let bytes: Vec<String> = outputs.iter().map(|o| read(&p(o))).collect();
        let second = ainfty(&argv);
        ensure(second.stdout == first.stdout, || {
            format!("`{}` output is not deterministic", args[0])
        })?;
        for (o, before) in outputs.iter().zip(&bytes) {
            ensure(&read(&p(o)) == before, || format!("{o} is not deterministic"))?;
            artifacts += 1;
        }
    }

    let reparse = |name: &str| -> Result<FilteredAInfinity, String> {
        let text = read(&p(name));
        let a = io::parse_algebra(&text, name, cut).map_err(err)?;
        ensure(io::to_text(&io::algebra_doc(&a)) == text, || {
            format!("{name} does not re-emit identically")
        })?;
        let v = ainfty(&["verify", &s(&p(name))]);
        ensure(v.code == 0, || format!("verify {name} exited {}: {}", v.code, v.stdout))?;
        Ok(a)
    };
    let h = reparse("h.json")?;
    let model = reparse("model.json")?;
    reparse("interval.json")?;
    reparse("deformed.json")?;
    let morse_model = reparse("morse.json")?;

    let same = |name: &str, text: String| {
        ensure(read(&p(name)) == text, || {
            format!("{name} does not re-emit identically")
        })
    };
    let ledger = io::ledger_from_doc(
        &io::read_json(&p("ledger.json")).map_err(err)?,
        &model.basis,
        &h.basis,
        Q,
        "ledger",
    )
    .map_err(err)?;
    same(
        "ledger.json",
        io::to_text(&io::ledger_doc(&ledger, &model.basis, &h.basis)),
    )?;
    let ml = io::ledger_from_doc(
        &io::read_json(&p("morse-ledger.json")).map_err(err)?,
        &morse_model.basis,
        &disc.basis,
        Q,
        "ledger",
    )
    .map_err(err)?;
    same(
        "morse-ledger.json",
        io::to_text(&io::ledger_doc(&ml, &morse_model.basis, &disc.basis)),
    )?;
    let hom = io::load_hom(&p("hom.json"), &model, &h).map_err(err)?;
    same("hom.json", io::to_text(&io::hom_doc(&hom, &model.basis, &h.basis)))?;
    ensure(verify_homomorphism(&hom, &model, &h).map_err(err)?.passed(), || {
        "emitted hom fails".into()
    })?;
    let res = io::load_chain(&p("residual.json"), &curved.basis, Q).map_err(err)?;
    same("residual.json", io::to_text(&io::chain_doc(&res, &curved.basis)))?;
    let bd = io::bimodule_from_doc(
        &io::read_json(&p("bideformed.json")).map_err(err)?,
        &curved,
        &curved,
        "bideformed",
    )
    .map_err(err)?;
    same("bideformed.json", io::to_text(&io::bimodule_doc(&bd)))?;
    let v = ainfty(&[
        "bimodule-verify",
        "--left",
        &s(&p("curved.json")),
        "--right",
        &s(&p("curved.json")),
        "--bimodule",
        &s(&p("bideformed.json")),
    ]);
    ensure(v.code == 0, || {
        format!("bimodule-verify exited {}: {}", v.code, v.stdout)
    })?;
    Ok(format!("{artifacts} artifacts from {} commands", runs.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("DGA sign suite", dga_sign_suite),
        ("Massey regression", massey_regression),
        ("oracle equivalence", oracle_equivalence),
        ("filtered transfer relations", filtered_transfer),
        ("interval model", interval_models),
        ("Maurer-Cartan", maurer_cartan),
        ("bimodule suite", bimodule_suite),
        ("Morse suite", morse_suite),
        ("Morse filtered transfer", morse_filtered),
        ("determinism and round trip", round_trip),
    ];
    let only: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        if !only.is_empty()
            && !only
                .iter()
                .any(|o| name.contains(o.as_str()) || o == &(i + 1).to_string())
        {
            continue;
        }
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({:.2?}): {detail}", i + 1, t.elapsed()),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({:.2?}): {why}", i + 1, t.elapsed());
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
