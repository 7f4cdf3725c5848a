//! The `ainfty` command line. Exit status: 0 when every check passes, 1 when
//! a report fails, 2 on usage or input errors.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::ainfty::{
    deform_by_b, mc_residual, potential, relation_horizon, verify_ainfty, verify_ainfty_sampled, verify_ank, Exactness,
    FilteredAInfinity,
};
use crate::bimodule::{curvature_identity, deform_bimodule, verify_bimodule};
use crate::complex::{format_chain, GappedFamily};
use crate::error::{Error, Result};
use crate::homotopy::{build_interval_model, check_gauge_equivalence, check_homotopy, verify_model_axioms};
use crate::io::{self, ImportCutoffs};
use crate::linalg::{cohomology_ranks, reduce_fully};
use crate::morse::{morse_transfer, GradientMatching, SimplicialComplex};
use crate::novikov::{monoid_closure, Energy, Field, Monomial};
use crate::report::Report;
use crate::transfer::{trace_configuration, transfer, verify_transfer, CanonicalModelResult, TransferData};

#[derive(Parser, Debug)]
#[command(
    name = "ainfty",
    version,
    about = "Exact filtered A-infinity algebras: checks, transfer, deformations, Morse models"
)]
pub struct Cli {
    #[command(flatten)]
    pub session: Session,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CheckLevel {
    Fast,
    Full,
}

#[derive(Args, Debug, Clone)]
pub struct Session {
    /// Coefficient field: Q or F<p>.
    #[arg(long, global = true)]
    pub field: Option<String>,
    /// Energy cutoff for DGA imports and simplicial models, or a lower cutoff
    /// to restrict an algebra to.
    #[arg(long, global = true)]
    pub energy_cutoff: Option<String>,
    /// Arity cutoff, used the same way as the energy cutoff.
    #[arg(long, global = true)]
    pub arity_cutoff: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Where to write the command's artifact.
    #[arg(long, global = true)]
    pub emit: Option<PathBuf>,
    /// Where to write the tree ledger of a transfer.
    #[arg(long, global = true)]
    pub ledger: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = CheckLevel::Full)]
    pub check_level: CheckLevel,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the A-infinity relations.
    Verify { algebra: PathBuf },
    /// Check the relations indexed below (n, K).
    VerifyAnk {
        algebra: PathBuf,
        #[arg(long)]
        n: i64,
        #[arg(long = "k")]
        big_k: i64,
    },
    /// Transfer to the sub-complex given by transfer data (by default a
    /// full cancellation of the energy-zero differential).
    Transfer {
        algebra: PathBuf,
        #[arg(long)]
        data: Option<PathBuf>,
        /// Also write the homomorphism from the model to the input.
        #[arg(long)]
        emit_hom: Option<PathBuf>,
    },
    /// Build the interval model and check its axioms.
    IntervalModel { algebra: PathBuf },
    /// Check a witness F of a homotopy between f0 and f1.
    CheckHomotopy {
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        f0: PathBuf,
        #[arg(long)]
        f1: PathBuf,
        #[arg(long)]
        witness: PathBuf,
    },
    /// Check a witness of gauge equivalence between b and b'.
    CheckGauge {
        algebra: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        b_prime: PathBuf,
        #[arg(long)]
        witness: PathBuf,
    },
    /// Evaluate the Maurer-Cartan equation at b.
    McCheck {
        algebra: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Deform the structure by b.
    Deform {
        algebra: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Potential value of a weak solution b.
    Potential {
        algebra: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        unit: String,
    },
    /// Check the bimodule relations.
    BimoduleVerify {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[arg(long)]
        bimodule: PathBuf,
    },
    /// Deform a bimodule by cochains of the right (b0) and left (b1) algebras.
    BimoduleDeform {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[arg(long)]
        bimodule: PathBuf,
        #[arg(long)]
        b0: Option<PathBuf>,
        #[arg(long)]
        b1: Option<PathBuf>,
    },
    /// Morse model of a simplicial complex.
    Morse {
        #[command(flatten)]
        input: MorseInput,
        #[arg(long)]
        trace: Option<String>,
        #[arg(long, value_delimiter = ',')]
        inputs: Vec<String>,
    },
    /// Describe one tree of a transfer.
    Trace {
        /// Algebra to transfer (omit with --complex).
        algebra: Option<PathBuf>,
        #[arg(long)]
        data: Option<PathBuf>,
        #[command(flatten)]
        morse: OptionalMorse,
        #[arg(long)]
        tree: String,
        #[arg(long, value_delimiter = ',')]
        inputs: Vec<String>,
    },
}

#[derive(Args, Debug, Clone)]
pub struct MorseInput {
    #[arg(long)]
    pub complex: PathBuf,
    #[arg(long)]
    pub matching: Option<PathBuf>,
    #[arg(long)]
    pub disc_ops: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct OptionalMorse {
    #[arg(long)]
    pub complex: Option<PathBuf>,
    #[arg(long)]
    pub matching: Option<PathBuf>,
    #[arg(long)]
    pub disc_ops: Option<PathBuf>,
}

/// Parses arguments and runs; output goes to stdout, errors to stderr.
pub fn main_with(args: impl IntoIterator<Item = impl Into<OsString> + Clone>) -> ExitCode {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut out = String::new();
    let status = match run(&cli, &mut out) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            print!("{out}");
            eprintln!("error: {e}");
            if let Error::Verification { report, .. } = &e {
                eprintln!("{report}");
            }
            return ExitCode::from(exit_code(&e));
        }
    };
    print!("{out}");
    ExitCode::from(status)
}

/// 1 for failed checks, 2 for bad input.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Verification { .. } | Error::NotWeakSolution { .. } | Error::Witness { .. } => 1,
        _ => 2,
    }
}

struct Ctx<'a> {
    s: &'a Session,
}

impl Ctx<'_> {
    fn field(&self) -> Result<Option<Field>> {
        self.s.field.as_deref().map(Field::parse).transpose()
    }

    fn energy(&self) -> Result<Option<Energy>> {
        self.s.energy_cutoff.as_deref().map(Energy::parse).transpose()
    }

    fn cutoffs(&self) -> Result<ImportCutoffs> {
        Ok(ImportCutoffs {
            energy: self.energy()?.unwrap_or(Energy::int(1)),
            arity: self.s.arity_cutoff.unwrap_or(3),
        })
    }

    /// Loads an algebra or DGA file and applies the session's field check
    /// and cutoffs.
    fn algebra(&self, path: &Path) -> Result<FilteredAInfinity> {
        let a = io::load_algebra(path, self.cutoffs()?)?;
        if let Some(f) = self.field()? {
            if f != a.field {
                return Err(Error::Mismatch(format!(
                    "{} is over {}, not {f}",
                    path.display(),
                    a.field
                )));
            }
        }
        restrict(&a, self.energy()?, self.s.arity_cutoff)
    }

    fn emit(&self, text: impl FnOnce() -> String) -> Result<()> {
        if let Some(p) = &self.s.emit {
            io::write_text(p, &text())?;
        }
        Ok(())
    }

    fn no_emit(&self, cmd: &str) -> Result<()> {
        if self.s.emit.is_some() || self.s.ledger.is_some() {
            return Err(Error::invalid(format!("`{cmd}` writes no artifacts")));
        }
        Ok(())
    }

    fn no_ledger(&self, cmd: &str) -> Result<()> {
        if self.s.ledger.is_some() {
            return Err(Error::invalid(format!("`{cmd}` writes no ledger")));
        }
        Ok(())
    }
}

/// Restricts to lower cutoffs; raising a cutoff is an error.
pub fn restrict(a: &FilteredAInfinity, energy: Option<Energy>, arity: Option<usize>) -> Result<FilteredAInfinity> {
    let e = energy.unwrap_or(a.energy_cutoff);
    let k = arity.unwrap_or(a.arity_cutoff);
    if e == a.energy_cutoff && k == a.arity_cutoff {
        return Ok(a.clone());
    }
    if e > a.energy_cutoff || k > a.arity_cutoff {
        return Err(Error::invalid(format!(
            "cutoffs ({e}, {k}) exceed the data's ({}, {})",
            a.energy_cutoff, a.arity_cutoff
        )));
    }
    let ops: GappedFamily = a.ops.filtered(|j, b| j <= k && b.lambda < e);
    let dropped_tail = a.ops.arities().any(|j| j > k);
    let exactness = Exactness {
        known_below: a.exactness.known_below[..=k].iter().map(|x| (*x).min(e)).collect(),
        tail_zero: a.exactness.tail_zero && !dropped_tail,
    };
    let mut gens: Vec<_> = a.monoid.generators().into_iter().filter(|g| g.lambda < e).collect();
    gens.extend(ops.classes());
    let monoid = monoid_closure(&gens, e)?;
    FilteredAInfinity::new(a.field, a.basis.clone(), ops, e, k, Some(monoid), Some(exactness))
}

fn line(out: &mut String, s: impl AsRef<str>) {
    out.push_str(s.as_ref());
    out.push('\n');
}

fn report(out: &mut String, r: &Report) -> bool {
    line(out, r.to_string());
    r.passed()
}

/// Runs a parsed command, appending human-readable output. Returns whether
/// every check passed.
pub fn run(cli: &Cli, out: &mut String) -> Result<bool> {
    let ctx = Ctx { s: &cli.session };
    match &cli.command {
        Command::Verify { algebra } => {
            let a = ctx.algebra(algebra)?;
            let r = match cli.session.check_level {
                CheckLevel::Full => verify_ainfty(&a),
                CheckLevel::Fast => verify_ainfty_sampled(&a, cli.session.seed, 256),
            };
            ctx.emit(|| io::to_text(&io::algebra_doc(&a)))?;
            ctx.no_ledger("verify")?;
            Ok(report(out, &r))
        }
        Command::VerifyAnk { algebra, n, big_k } => {
            ctx.no_emit("verify-ank")?;
            let a = ctx.algebra(algebra)?;
            Ok(report(out, &verify_ank(&a, *n, *big_k)?))
        }
        Command::Transfer {
            algebra,
            data,
            emit_hom,
        } => {
            let a = ctx.algebra(algebra)?.into_verified()?;
            let t = match data {
                Some(p) => io::transfer_data_from_doc(&io::read_json(p)?, &a, &p.display().to_string())?,
                None => TransferData::from_reduction(&a, &reduce_fully(&a.differential()))?,
            };
            let result = transfer(&a, &t)?;
            let ok = describe_transfer(out, &result, &a)?;
            ctx.emit(|| io::to_text(&io::algebra_doc(&result.model)))?;
            if let Some(p) = emit_hom {
                io::write_text(
                    p,
                    &io::to_text(&io::hom_doc(&result.hom, &result.model.basis, &a.basis)),
                )?;
            }
            if let Some(p) = &cli.session.ledger {
                io::write_text(
                    p,
                    &io::to_text(&io::ledger_doc(&result.ledger, &result.model.basis, &a.basis)),
                )?;
            }
            Ok(ok)
        }
        Command::IntervalModel { algebra } => {
            ctx.no_ledger("interval-model")?;
            let a = ctx.algebra(algebra)?.into_verified()?;
            let m = build_interval_model(&a)?;
            line(out, format!("interval model of dimension {}", m.algebra.dim()));
            let ok = report(out, &verify_ainfty(&m.algebra)) & report(out, &verify_model_axioms(&m, &a)?);
            ctx.emit(|| io::to_text(&io::algebra_doc(&m.algebra)))?;
            Ok(ok)
        }
        Command::CheckHomotopy {
            source,
            target,
            f0,
            f1,
            witness,
        } => {
            ctx.no_emit("check-homotopy")?;
            let a = ctx.algebra(source)?.into_verified()?;
            let b = ctx.algebra(target)?.into_verified()?;
            let m = build_interval_model(&b)?;
            let f0 = io::load_hom(f0, &a, &b)?;
            let f1 = io::load_hom(f1, &a, &b)?;
            let w = io::load_hom(witness, &a, &m.algebra)?;
            Ok(report(out, &check_homotopy(&f0, &f1, &w, &a, &b, &m)?))
        }
        Command::CheckGauge {
            algebra,
            b,
            b_prime,
            witness,
        } => {
            ctx.no_emit("check-gauge")?;
            let a = ctx.algebra(algebra)?.into_verified()?;
            let m = build_interval_model(&a)?;
            let b = io::load_chain(b, &a.basis, a.field)?;
            let b2 = io::load_chain(b_prime, &a.basis, a.field)?;
            let w = io::load_chain(witness, &m.algebra.basis, a.field)?;
            Ok(report(out, &check_gauge_equivalence(&b, &b2, &w, &m)?))
        }
        Command::McCheck { algebra, b } => {
            ctx.no_ledger("mc-check")?;
            let a = ctx.algebra(algebra)?;
            let b = io::load_chain(b, &a.basis, a.field)?;
            let r = mc_residual(&a, &b)?;
            let status = if r.is_solution() { "solution" } else { "not a solution" };
            line(
                out,
                format!(
                    "Maurer-Cartan residual below energy {}: {}",
                    r.horizon,
                    format_chain(&r.residual, &a.basis)
                ),
            );
            line(out, status);
            ctx.emit(|| io::to_text(&io::chain_doc(&r.residual, &a.basis)))?;
            Ok(r.is_solution())
        }
        Command::Deform { algebra, b } => {
            ctx.no_ledger("deform")?;
            let a = ctx.algebra(algebra)?;
            let b = io::load_chain(b, &a.basis, a.field)?;
            let d = deform_by_b(&a, &b)?;
            let ok = report(out, &verify_ainfty(&d));
            line(
                out,
                format!(
                    "curvature of the deformation: {}",
                    format_chain(&d.curvature(), &d.basis)
                ),
            );
            if d.curvature().is_zero() {
                let h = relation_horizon(&d, 1);
                let m1 = d.ops.filtered(|k, _| k == 1);
                let nonzero = (0..d.dim())
                    .filter(|&i| {
                        let x =
                            crate::complex::lift(&crate::complex::SparseVec::single(i, d.field.one()), Monomial::ONE);
                        let mut sq = m1.eval_chains(&[&m1.eval_chains(&[&x])]);
                        sq.retain(|(m, _)| m.lambda < h);
                        !sq.is_zero()
                    })
                    .count();
                line(
                    out,
                    format!(
                        "m1 o m1 below energy {h}: {}",
                        if nonzero == 0 {
                            "zero".to_string()
                        } else {
                            format!("nonzero on {nonzero} basis elements")
                        }
                    ),
                );
            }
            ctx.emit(|| io::to_text(&io::algebra_doc(&d)))?;
            Ok(ok)
        }
        Command::Potential { algebra, b, unit } => {
            ctx.no_emit("potential")?;
            let a = ctx.algebra(algebra)?;
            let b = io::load_chain(b, &a.basis, a.field)?;
            let p = potential(&a, &b, unit)?;
            line(out, format!("potential below energy {}: {}", p.horizon, p.value));
            Ok(true)
        }
        Command::BimoduleVerify { left, right, bimodule } => {
            ctx.no_emit("bimodule-verify")?;
            let (_, _, d) = load_bimodule(&ctx, left, right, bimodule)?;
            Ok(report(out, &verify_bimodule(&d)) & report(out, &curvature_identity(&d)))
        }
        Command::BimoduleDeform {
            left,
            right,
            bimodule,
            b0,
            b1,
        } => {
            ctx.no_ledger("bimodule-deform")?;
            let (l, r, d) = load_bimodule(&ctx, left, right, bimodule)?;
            let b0 = b0
                .as_ref()
                .map(|p| io::load_chain(p, &r.basis, r.field))
                .transpose()?
                .unwrap_or_default();
            let b1 = b1
                .as_ref()
                .map(|p| io::load_chain(p, &l.basis, l.field))
                .transpose()?
                .unwrap_or_default();
            let dd = deform_bimodule(&d, &b0, &b1)?;
            let ok = report(out, &verify_bimodule(&dd)) & report(out, &curvature_identity(&dd));
            ctx.emit(|| io::to_text(&io::bimodule_doc(&dd)))?;
            Ok(ok)
        }
        Command::Morse { input, trace, inputs } => {
            let (k, m, disc) = load_morse(
                &ctx,
                &input.complex,
                input.matching.as_deref(),
                input.disc_ops.as_deref(),
            )?;
            let (pkg, result) = morse_transfer(&k, &m, &disc)?;
            let names: Vec<String> = pkg.critical.iter().map(|&i| k.name(i)).collect();
            line(out, format!("critical simplices: {}", names.join(" ")));
            let dm = result.model.differential();
            let ranks = cohomology_ranks(&dm, result.model.basis.degrees());
            let top = k.dim() as i64;
            let by_dim: Vec<String> = (0..=k.dim())
                .map(|j| ranks.get(&(top - j as i64)).copied().unwrap_or(0).to_string())
                .collect();
            line(
                out,
                format!("Morse homology ranks by dimension: ({})", by_dim.join(", ")),
            );
            let ok = describe_transfer(out, &result, &disc)?;
            if let Some(tree) = trace {
                let idx = model_inputs(&result, inputs)?;
                line(out, trace_configuration(&result.ledger, tree, &idx, &result, &disc)?);
            }
            ctx.emit(|| io::to_text(&io::algebra_doc(&result.model)))?;
            if let Some(p) = &cli.session.ledger {
                io::write_text(
                    p,
                    &io::to_text(&io::ledger_doc(&result.ledger, &result.model.basis, &disc.basis)),
                )?;
            }
            Ok(ok)
        }
        Command::Trace {
            algebra,
            data,
            morse,
            tree,
            inputs,
        } => {
            ctx.no_emit("trace")?;
            let (a, result) = match (algebra, &morse.complex) {
                (Some(p), None) => {
                    let a = ctx.algebra(p)?.into_verified()?;
                    let t = match data {
                        Some(d) => io::transfer_data_from_doc(&io::read_json(d)?, &a, &d.display().to_string())?,
                        None => TransferData::from_reduction(&a, &reduce_fully(&a.differential()))?,
                    };
                    let r = transfer(&a, &t)?;
                    (a, r)
                }
                (None, Some(c)) => {
                    let (k, m, disc) = load_morse(&ctx, c, morse.matching.as_deref(), morse.disc_ops.as_deref())?;
                    let (_, r) = morse_transfer(&k, &m, &disc)?;
                    (disc, r)
                }
                _ => return Err(Error::invalid("give either an algebra or --complex")),
            };
            let idx = model_inputs(&result, inputs)?;
            line(out, trace_configuration(&result.ledger, tree, &idx, &result, &a)?);
            Ok(true)
        }
    }
}

fn model_inputs(result: &CanonicalModelResult, inputs: &[String]) -> Result<Vec<usize>> {
    inputs
        .iter()
        .filter(|s| !s.is_empty())
        .map(|s| result.model.basis.lookup(s))
        .collect()
}

fn describe_transfer(out: &mut String, result: &CanonicalModelResult, a: &FilteredAInfinity) -> Result<bool> {
    let classes: BTreeSet<String> = result.model.ops.classes().iter().map(|b| b.to_string()).collect();
    line(
        out,
        format!(
            "model of dimension {} ({}), {} trees, classes {}",
            result.model.dim(),
            result.model.basis.names().join(" "),
            result.ledger.len(),
            classes.into_iter().collect::<Vec<_>>().join(" ")
        ),
    );
    let (rm, rh) = verify_transfer(result, a)?;
    Ok(report(out, &rm) & report(out, &rh))
}

fn load_bimodule(
    ctx: &Ctx,
    left: &Path,
    right: &Path,
    bimodule: &Path,
) -> Result<(FilteredAInfinity, FilteredAInfinity, crate::bimodule::FilteredBimodule)> {
    let l = ctx.algebra(left)?.into_verified()?;
    let r = ctx.algebra(right)?.into_verified()?;
    let d = io::bimodule_from_doc(&io::read_json(bimodule)?, &l, &r, &bimodule.display().to_string())?;
    Ok((l, r, d))
}

fn load_morse(
    ctx: &Ctx,
    complex: &Path,
    matching: Option<&Path>,
    disc_ops: Option<&Path>,
) -> Result<(SimplicialComplex, GradientMatching, FilteredAInfinity)> {
    let k = io::complex_from_doc(&io::read_json(complex)?, &complex.display().to_string())?;
    let m = match matching {
        Some(p) => io::matching_from_doc(&io::read_json(p)?, &k, &p.display().to_string())?,
        None => GradientMatching::greedy(&k),
    };
    let disc = match disc_ops {
        Some(p) => ctx.algebra(p)?,
        None => {
            let c = ctx.cutoffs()?;
            k.chain_algebra(ctx.field()?.unwrap_or(Field::Rational), c.energy, c.arity)?
        }
    };
    Ok((k, m, disc))
}
