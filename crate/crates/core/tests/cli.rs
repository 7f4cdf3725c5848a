use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ainfty::ainfty::FilteredAInfinity;
use ainfty::complex::Chain;
use ainfty::io;
use ainfty::morse::{fundamental_cycle, SimplicialComplex};
use ainfty::novikov::{Energy, Field, GapClass, Monomial};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ainfty")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn text(o: &Output) -> String {
    format!(
        "{}{}",
        String::from_utf8_lossy(&o.stdout),
        String::from_utf8_lossy(&o.stderr)
    )
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn hexagon_file() -> SimplicialComplex {
    io::complex_from_doc(&io::read_json(&data("hexagon.complex.json")).unwrap(), "hexagon").unwrap()
}

fn circle_disc() -> FilteredAInfinity {
    let k = hexagon_file();
    let base = k.chain_algebra(Field::Rational, Energy::int(3), 3).unwrap();
    let mut ops = base.ops.clone();
    let beta = GapClass::new(Energy::int(1), 2).unwrap();
    ops.add_entry(0, beta, vec![], &fundamental_cycle(&k, Field::Rational).unwrap());
    FilteredAInfinity::new(Field::Rational, base.basis, ops, Energy::int(3), 3, None, None).unwrap()
}

fn heisenberg_b() -> String {
    let a = ainfty::samples::heisenberg(Field::Rational);
    let basis = ainfty::ainfty::from_dga(&a.dga, Energy::int(2), 3).unwrap().basis;
    let b = Chain::single(
        (Monomial::new(Energy::int(1), 0), basis.lookup("x").unwrap()),
        Field::Rational.one(),
    );
    io::to_text(&io::chain_doc(&b, &basis))
}

/// Fixture files match what the library emits; `BLESS=1` rewrites them.
#[test]
fn fixtures_are_current() {
    for (name, want) in [
        ("hexagon-disc.json", io::to_text(&io::algebra_doc(&circle_disc()))),
        ("heisenberg-b.chain.json", heisenberg_b()),
    ] {
        if std::env::var_os("BLESS").is_some() {
            io::write_text(&data(name), &want).unwrap();
        }
        assert_eq!(std::fs::read_to_string(data(name)).unwrap(), want, "{name}");
    }
}

#[test]
fn passing_runs_exit_zero() {
    let h = data("heisenberg.dga.json");
    let o = run(&["verify", path(&h), "--energy-cutoff", "2"]);
    assert_eq!(code(&o), 0, "{}", text(&o));
    assert!(text(&o).contains("A-infinity relations: pass"));

    let o = run(&[
        "mc-check",
        path(&h),
        "--energy-cutoff",
        "2",
        "--b",
        path(&data("heisenberg-b.chain.json")),
    ]);
    assert_eq!(code(&o), 0, "{}", text(&o));

    let o = run(&[
        "morse",
        "--complex",
        path(&data("hexagon.complex.json")),
        "--disc-ops",
        path(&data("hexagon-disc.json")),
    ]);
    assert_eq!(code(&o), 0, "{}", text(&o));
}

#[test]
fn failing_reports_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let h = data("heisenberg.dga.json");
    // b = T x + T z leaves m1(b) = T xy
    let a = ainfty::samples::heisenberg(Field::Rational);
    let basis = ainfty::ainfty::from_dga(&a.dga, Energy::int(2), 3).unwrap().basis;
    let t = Monomial::new(Energy::int(1), 0);
    let mut b = Chain::single((t, basis.lookup("z").unwrap()), Field::Rational.one());
    b.add_term((t, basis.lookup("x").unwrap()), Field::Rational.one());
    let bp = dir.path().join("b.json");
    io::write_text(&bp, &io::to_text(&io::chain_doc(&b, &basis))).unwrap();
    let o = run(&["mc-check", path(&h), "--energy-cutoff", "2", "--b", path(&bp)]);
    assert_eq!(code(&o), 1, "{}", text(&o));
}

#[test]
fn bad_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, "{\"format\": \"ainfty-dga\",").unwrap();
    let o = run(&["verify", path(&broken)]);
    assert_eq!(code(&o), 2);
    assert!(text(&o).contains("line"), "{}", text(&o));

    let unknown = dir.path().join("unknown.json");
    std::fs::write(
        &unknown,
        "{\"terms\": [{\"element\": \"w\", \"energy\": \"1\", \"coeff\": 1}]}",
    )
    .unwrap();
    let o = run(&["mc-check", path(&data("heisenberg.dga.json")), "--b", path(&unknown)]);
    assert_eq!(code(&o), 2);
    assert!(text(&o).contains("`w`"), "{}", text(&o));

    let o = run(&["verify"]);
    assert_eq!(code(&o), 2);
    let o = run(&["frobnicate"]);
    assert_eq!(code(&o), 2);
    let o = run(&["verify", path(&data("heisenberg.dga.json")), "--field", "F4"]);
    assert_eq!(code(&o), 2, "{}", text(&o));
}

#[test]
fn ledger_only_from_transfers() {
    let o = run(&[
        "mc-check",
        path(&data("heisenberg.dga.json")),
        "--b",
        path(&data("heisenberg-b.chain.json")),
        "--ledger",
        "x.json",
    ]);
    assert_eq!(code(&o), 2, "{}", text(&o));
}
