//! JSON artifact formats. Every document carries a `format` tag and a
//! `version`; emitted documents parse back to the same value.

use std::collections::BTreeMap;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::ainfty::{from_dga, AInfinityHom, Dga, Exactness, FilteredAInfinity};
use crate::bimodule::{BiFamily, FilteredBimodule};
use crate::complex::{Chain, GappedFamily, GradedBasis, SparseVec};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::morse::{GradientMatching, SimplicialComplex};
use crate::novikov::{monoid_closure, Energy, Field, GapClass, Monomial, Scalar};
use crate::transfer::{LedgerEntry, TransferData};

pub const VERSION: u32 = 1;

pub const ALGEBRA: &str = "ainfty-algebra";
pub const DGA: &str = "ainfty-dga";
pub const CHAIN: &str = "ainfty-chain";
pub const HOM: &str = "ainfty-hom";
pub const TRANSFER_DATA: &str = "ainfty-transfer-data";
pub const LEDGER: &str = "ainfty-ledger";
pub const BIMODULE: &str = "ainfty-bimodule";
pub const COMPLEX: &str = "ainfty-complex";
pub const MATCHING: &str = "ainfty-matching";

/// A scalar written as a string (`"-3/2"`, `"0.25"`) or an integer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coeff {
    Int(i64),
    Text(String),
}

impl Coeff {
    fn of(c: &Scalar) -> Coeff {
        match c {
            Scalar::Fp { v, .. } => Coeff::Int(*v as i64),
            _ => Coeff::Text(c.to_string()),
        }
    }

    fn parse(&self, field: Field, at: &str) -> Result<Scalar> {
        let c = match self {
            Coeff::Int(n) => Ok(field.from_i64(*n)),
            Coeff::Text(s) => field.parse_scalar(s),
        };
        c.map_err(|e| parse_error(at, e.to_string()))
    }
}

fn parse_error(at: &str, message: impl Into<String>) -> Error {
    Error::Parse {
        path: at.to_string(),
        message: message.into(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisEntry {
    pub name: String,
    pub degree: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpEntry {
    pub arity: usize,
    pub energy: String,
    pub maslov: i64,
    pub inputs: Vec<String>,
    pub output: BTreeMap<String, Coeff>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassEntry {
    pub energy: String,
    pub maslov: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExactnessDoc {
    pub known_below: Vec<String>,
    pub tail_zero: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDoc {
    #[serde(default)]
    pub format: Option<String>,
    #[serde(default)]
    pub version: Option<u32>,
    pub field: String,
    pub energy_cutoff: String,
    pub arity_cutoff: usize,
    pub basis: Vec<BasisEntry>,
    pub operations: Vec<OpEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monoid_generators: Option<Vec<ClassEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exactness: Option<ExactnessDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductEntry {
    pub left: String,
    pub right: String,
    pub output: BTreeMap<String, Coeff>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DgaDoc {
    #[serde(default)]
    pub format: Option<String>,
    #[serde(default)]
    pub version: Option<u32>,
    pub field: String,
    pub basis: Vec<BasisEntry>,
    #[serde(default)]
    pub differential: BTreeMap<String, BTreeMap<String, Coeff>>,
    #[serde(default)]
    pub product: Vec<ProductEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermEntry {
    pub element: String,
    pub energy: String,
    #[serde(default)]
    pub e: i64,
    pub coeff: Coeff,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainDoc {
    #[serde(default)]
    pub format: Option<String>,
    #[serde(default)]
    pub version: Option<u32>,
    pub terms: Vec<TermEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomDoc {
    #[serde(default)]
    pub format: Option<String>,
    #[serde(default)]
    pub version: Option<u32>,
    pub maps: Vec<OpEntry>,
    pub exactness: ExactnessDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixEntry {
    pub row: String,
    pub col: String,
    pub coeff: Coeff,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransferDataDoc {
    #[serde(default)]
    pub format: Option<String>,
    #[serde(default)]
    pub version: Option<u32>,
    pub basis: Vec<BasisEntry>,
    pub iota: Vec<MatrixEntry>,
    pub proj: Vec<MatrixEntry>,
    pub p: Vec<MatrixEntry>,
    pub g: Vec<MatrixEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValueEntry {
    pub inputs: Vec<String>,
    pub output: Vec<TermEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeEntry {
    pub tree: String,
    pub leaves: usize,
    pub energy: String,
    pub operation: Vec<ValueEntry>,
    pub homomorphism: Vec<ValueEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LedgerDoc {
    #[serde(default)]
    pub format: Option<String>,
    #[serde(default)]
    pub version: Option<u32>,
    pub trees: Vec<TreeEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BiOpEntry {
    pub energy: String,
    pub maslov: i64,
    pub left: Vec<String>,
    pub module: String,
    pub right: Vec<String>,
    pub output: BTreeMap<String, Coeff>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BimoduleDoc {
    #[serde(default)]
    pub format: Option<String>,
    #[serde(default)]
    pub version: Option<u32>,
    pub basis: Vec<BasisEntry>,
    pub max_left: usize,
    pub max_right: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact_below: Option<String>,
    pub operations: Vec<BiOpEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDoc {
    #[serde(default)]
    pub format: Option<String>,
    #[serde(default)]
    pub version: Option<u32>,
    pub vertices: Vec<String>,
    pub simplices: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatchingDoc {
    Tagged {
        #[serde(default)]
        format: Option<String>,
        #[serde(default)]
        version: Option<u32>,
        pairs: Vec<(Vec<String>, Vec<String>)>,
    },
    Bare(Vec<(Vec<String>, Vec<String>)>),
}

fn check_header(format: &Option<String>, version: &Option<u32>, expected: &str, at: &str) -> Result<()> {
    if let Some(f) = format {
        if f != expected {
            return Err(parse_error(at, format!("expected format `{expected}`, found `{f}`")));
        }
    }
    if let Some(v) = version {
        if *v != VERSION {
            return Err(parse_error(at, format!("unsupported version {v}")));
        }
    }
    Ok(())
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Parses JSON text; syntax and shape errors carry line and column.
pub fn parse_json<T: DeserializeOwned>(text: &str, at: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| parse_error(at, e.to_string()))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    parse_json(&read_text(path)?, &path.display().to_string())
}

/// The `format` tag of a document, if any.
pub fn format_of(text: &str, at: &str) -> Result<Option<String>> {
    let v: serde_json::Value = parse_json(text, at)?;
    Ok(v.get("format").and_then(|f| f.as_str()).map(str::to_string))
}

pub fn to_text<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn energy(s: &str, at: &str) -> Result<Energy> {
    Energy::parse(s).map_err(|e| parse_error(at, e.to_string()))
}

fn signed_energy(s: &str, at: &str) -> Result<Energy> {
    Energy::parse_signed(s).map_err(|e| parse_error(at, e.to_string()))
}

fn lookup(basis: &GradedBasis, name: &str, at: &str) -> Result<usize> {
    basis
        .index_of(name)
        .ok_or_else(|| parse_error(at, format!("unknown basis element `{name}`")))
}

fn basis_of(entries: &[BasisEntry], at: &str) -> Result<GradedBasis> {
    GradedBasis::new(entries.iter().map(|b| (b.name.clone(), b.degree))).map_err(|e| parse_error(at, e.to_string()))
}

fn basis_doc(basis: &GradedBasis) -> Vec<BasisEntry> {
    (0..basis.len())
        .map(|i| BasisEntry {
            name: basis.name(i).to_string(),
            degree: basis.degree(i),
        })
        .collect()
}

fn vector(map: &BTreeMap<String, Coeff>, basis: &GradedBasis, field: Field, at: &str) -> Result<SparseVec> {
    let mut out = SparseVec::new();
    for (name, c) in map {
        let i = lookup(basis, name, at)?;
        out.add_term(i, c.parse(field, &format!("{at}.{name}"))?);
    }
    Ok(out)
}

fn vector_doc(v: &SparseVec, basis: &GradedBasis) -> BTreeMap<String, Coeff> {
    v.iter()
        .map(|(&i, c)| (basis.name(i).to_string(), Coeff::of(c)))
        .collect()
}

fn exactness_doc(e: &Exactness) -> ExactnessDoc {
    ExactnessDoc {
        known_below: e.known_below.iter().map(|x| x.to_string()).collect(),
        tail_zero: e.tail_zero,
    }
}

fn exactness_of(d: &ExactnessDoc, at: &str) -> Result<Exactness> {
    if d.known_below.is_empty() {
        return Err(parse_error(at, "exactness needs at least arity 0"));
    }
    Ok(Exactness {
        known_below: d.known_below.iter().map(|s| energy(s, at)).collect::<Result<_>>()?,
        tail_zero: d.tail_zero,
    })
}

fn family_doc(f: &GappedFamily, source: &GradedBasis, target: &GradedBasis) -> Vec<OpEntry> {
    let mut out = Vec::new();
    for (k, beta, t) in f.iter() {
        for (w, v) in t.entries() {
            out.push(OpEntry {
                arity: k,
                energy: beta.lambda.to_string(),
                maslov: beta.mu,
                inputs: w.iter().map(|&i| source.name(i).to_string()).collect(),
                output: vector_doc(v, target),
            });
        }
    }
    out
}

fn family_of(
    entries: &[OpEntry],
    degree: i64,
    source: &GradedBasis,
    target: &GradedBasis,
    field: Field,
    at: &str,
) -> Result<GappedFamily> {
    let mut f = GappedFamily::new(degree);
    for (n, op) in entries.iter().enumerate() {
        let here = format!("{at}[{n}]");
        if op.inputs.len() != op.arity {
            return Err(parse_error(
                &here,
                format!("arity {} but {} inputs", op.arity, op.inputs.len()),
            ));
        }
        let beta =
            GapClass::new(energy(&op.energy, &here)?, op.maslov).map_err(|e| parse_error(&here, e.to_string()))?;
        let w = op
            .inputs
            .iter()
            .map(|name| lookup(source, name, &format!("{here}.inputs")))
            .collect::<Result<Vec<_>>>()?;
        let v = vector(&op.output, target, field, &format!("{here}.output"))?;
        f.add_entry(op.arity, beta, w, &v);
    }
    Ok(f)
}

pub fn algebra_doc(a: &FilteredAInfinity) -> AlgebraDoc {
    let gens = a.monoid.generators();
    let closure = monoid_closure(&a.ops.classes().into_iter().collect::<Vec<_>>(), a.energy_cutoff).ok();
    AlgebraDoc {
        format: Some(ALGEBRA.into()),
        version: Some(VERSION),
        field: a.field.to_string(),
        energy_cutoff: a.energy_cutoff.to_string(),
        arity_cutoff: a.arity_cutoff,
        basis: basis_doc(&a.basis),
        operations: family_doc(&a.ops, &a.basis, &a.basis),
        monoid_generators: (closure.as_ref() != Some(&a.monoid)).then(|| {
            gens.iter()
                .map(|b| ClassEntry {
                    energy: b.lambda.to_string(),
                    maslov: b.mu,
                })
                .collect()
        }),
        exactness: (a.exactness != Exactness::exact(a.arity_cutoff, a.energy_cutoff))
            .then(|| exactness_doc(&a.exactness)),
    }
}

pub fn algebra_from_doc(d: &AlgebraDoc, at: &str) -> Result<FilteredAInfinity> {
    check_header(&d.format, &d.version, ALGEBRA, at)?;
    let field = Field::parse(&d.field).map_err(|e| parse_error(at, e.to_string()))?;
    let basis = basis_of(&d.basis, &format!("{at}: basis"))?;
    basis
        .check_nonnegative()
        .map_err(|e| parse_error(&format!("{at}: basis"), e.to_string()))?;
    let cutoff = energy(&d.energy_cutoff, &format!("{at}: energy_cutoff"))?;
    let ops = family_of(&d.operations, 1, &basis, &basis, field, &format!("{at}: operations"))?;
    let monoid = match &d.monoid_generators {
        Some(g) => {
            let mut gens = g
                .iter()
                .map(|c| GapClass::new(energy(&c.energy, at)?, c.maslov).map_err(|e| parse_error(at, e.to_string())))
                .collect::<Result<Vec<_>>>()?;
            gens.extend(ops.classes());
            Some(monoid_closure(&gens, cutoff)?)
        }
        None => None,
    };
    let exactness = d
        .exactness
        .as_ref()
        .map(|e| exactness_of(e, &format!("{at}: exactness")))
        .transpose()?;
    FilteredAInfinity::new(field, basis, ops, cutoff, d.arity_cutoff, monoid, exactness)
        .map_err(|e| parse_error(at, e.to_string()))
}

pub fn dga_from_doc(d: &DgaDoc, at: &str) -> Result<Dga> {
    check_header(&d.format, &d.version, DGA, at)?;
    let field = Field::parse(&d.field).map_err(|e| parse_error(at, e.to_string()))?;
    let basis = basis_of(&d.basis, &format!("{at}: basis"))?;
    basis
        .check_nonnegative()
        .map_err(|e| parse_error(&format!("{at}: basis"), e.to_string()))?;
    let mut differential = vec![SparseVec::new(); basis.len()];
    for (name, out) in &d.differential {
        let i = lookup(&basis, name, &format!("{at}: differential"))?;
        differential[i] = vector(out, &basis, field, &format!("{at}: differential.{name}"))?;
    }
    let mut product = BTreeMap::new();
    for (n, p) in d.product.iter().enumerate() {
        let here = format!("{at}: product[{n}]");
        let l = lookup(&basis, &p.left, &here)?;
        let r = lookup(&basis, &p.right, &here)?;
        product.insert((l, r), vector(&p.output, &basis, field, &here)?);
    }
    let dga = Dga {
        field,
        basis,
        differential,
        product,
    };
    dga.check().map_err(|e| parse_error(at, e.to_string()))?;
    Ok(dga)
}

pub fn dga_doc(d: &Dga) -> DgaDoc {
    DgaDoc {
        format: Some(DGA.into()),
        version: Some(VERSION),
        field: d.field.to_string(),
        basis: basis_doc(&d.basis),
        differential: d
            .differential
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| (d.basis.name(i).to_string(), vector_doc(v, &d.basis)))
            .collect(),
        product: d
            .product
            .iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(&(l, r), v)| ProductEntry {
                left: d.basis.name(l).to_string(),
                right: d.basis.name(r).to_string(),
                output: vector_doc(v, &d.basis),
            })
            .collect(),
    }
}

/// Cutoffs used when importing a DGA.
#[derive(Clone, Copy, Debug)]
pub struct ImportCutoffs {
    pub energy: Energy,
    pub arity: usize,
}

/// Loads an algebra document, or a DGA document imported with the given
/// cutoffs.
pub fn load_algebra(path: &Path, cutoffs: ImportCutoffs) -> Result<FilteredAInfinity> {
    let at = path.display().to_string();
    let text = read_text(path)?;
    parse_algebra(&text, &at, cutoffs)
}

pub fn parse_algebra(text: &str, at: &str, cutoffs: ImportCutoffs) -> Result<FilteredAInfinity> {
    match format_of(text, at)?.as_deref() {
        Some(DGA) => {
            let d = dga_from_doc(&parse_json(text, at)?, at)?;
            from_dga(&d, cutoffs.energy, cutoffs.arity)
        }
        _ => algebra_from_doc(&parse_json(text, at)?, at),
    }
}

pub fn chain_doc(x: &Chain, basis: &GradedBasis) -> ChainDoc {
    ChainDoc {
        format: Some(CHAIN.into()),
        version: Some(VERSION),
        terms: terms_doc(x, basis),
    }
}

fn terms_doc(x: &Chain, basis: &GradedBasis) -> Vec<TermEntry> {
    x.iter()
        .map(|((m, i), c)| TermEntry {
            element: basis.name(*i).to_string(),
            energy: m.lambda.to_string(),
            e: m.e,
            coeff: Coeff::of(c),
        })
        .collect()
}

fn terms_of(terms: &[TermEntry], basis: &GradedBasis, field: Field, at: &str) -> Result<Chain> {
    let mut out = Chain::new();
    for (n, t) in terms.iter().enumerate() {
        let here = format!("{at}[{n}]");
        let i = lookup(basis, &t.element, &here)?;
        let m = Monomial::new(energy(&t.energy, &here)?, t.e);
        out.add_term((m, i), t.coeff.parse(field, &here)?);
    }
    Ok(out)
}

pub fn chain_from_doc(d: &ChainDoc, basis: &GradedBasis, field: Field, at: &str) -> Result<Chain> {
    check_header(&d.format, &d.version, CHAIN, at)?;
    terms_of(&d.terms, basis, field, &format!("{at}: terms"))
}

pub fn load_chain(path: &Path, basis: &GradedBasis, field: Field) -> Result<Chain> {
    chain_from_doc(&read_json(path)?, basis, field, &path.display().to_string())
}

pub fn hom_doc(f: &AInfinityHom, source: &GradedBasis, target: &GradedBasis) -> HomDoc {
    HomDoc {
        format: Some(HOM.into()),
        version: Some(VERSION),
        maps: family_doc(&f.maps, source, target),
        exactness: exactness_doc(&f.exactness),
    }
}

pub fn hom_from_doc(
    d: &HomDoc,
    source: &GradedBasis,
    target: &GradedBasis,
    field: Field,
    at: &str,
) -> Result<AInfinityHom> {
    check_header(&d.format, &d.version, HOM, at)?;
    let maps = family_of(&d.maps, 0, source, target, field, &format!("{at}: maps"))?;
    maps.check_homogeneous(source, target)
        .map_err(|e| parse_error(at, e.to_string()))?;
    AInfinityHom::new(maps, exactness_of(&d.exactness, at)?).map_err(|e| parse_error(at, e.to_string()))
}

pub fn load_hom(path: &Path, source: &FilteredAInfinity, target: &FilteredAInfinity) -> Result<AInfinityHom> {
    hom_from_doc(
        &read_json(path)?,
        &source.basis,
        &target.basis,
        source.field,
        &path.display().to_string(),
    )
}

fn matrix_doc(m: &Matrix, rows: &GradedBasis, cols: &GradedBasis) -> Vec<MatrixEntry> {
    let mut out = Vec::new();
    for c in 0..m.cols() {
        for r in 0..m.rows() {
            if !m.get(r, c).is_zero() {
                out.push(MatrixEntry {
                    row: rows.name(r).to_string(),
                    col: cols.name(c).to_string(),
                    coeff: Coeff::of(m.get(r, c)),
                });
            }
        }
    }
    out
}

fn matrix_of(
    entries: &[MatrixEntry],
    rows: &GradedBasis,
    cols: &GradedBasis,
    field: Field,
    at: &str,
) -> Result<Matrix> {
    let mut m = Matrix::zeros(field, rows.len(), cols.len());
    for (n, e) in entries.iter().enumerate() {
        let here = format!("{at}[{n}]");
        let r = lookup(rows, &e.row, &here)?;
        let c = lookup(cols, &e.col, &here)?;
        m.set(r, c, e.coeff.parse(field, &here)?);
    }
    Ok(m)
}

pub fn transfer_data_doc(t: &TransferData, a: &FilteredAInfinity) -> TransferDataDoc {
    TransferDataDoc {
        format: Some(TRANSFER_DATA.into()),
        version: Some(VERSION),
        basis: basis_doc(&t.basis),
        iota: matrix_doc(&t.iota, &a.basis, &t.basis),
        proj: matrix_doc(&t.proj, &a.basis, &a.basis),
        p: matrix_doc(&t.p, &t.basis, &a.basis),
        g: matrix_doc(&t.g, &a.basis, &a.basis),
    }
}

pub fn transfer_data_from_doc(d: &TransferDataDoc, a: &FilteredAInfinity, at: &str) -> Result<TransferData> {
    check_header(&d.format, &d.version, TRANSFER_DATA, at)?;
    let h = basis_of(&d.basis, &format!("{at}: basis"))?;
    let c = &a.basis;
    let f = a.field;
    let t = TransferData {
        iota: matrix_of(&d.iota, c, &h, f, &format!("{at}: iota"))?,
        proj: matrix_of(&d.proj, c, c, f, &format!("{at}: proj"))?,
        p: matrix_of(&d.p, &h, c, f, &format!("{at}: p"))?,
        g: matrix_of(&d.g, c, c, f, &format!("{at}: g"))?,
        basis: h,
    };
    t.check(a)?;
    Ok(t)
}

fn values_doc(v: &[(Vec<usize>, Chain)], inputs: &GradedBasis, outputs: &GradedBasis) -> Vec<ValueEntry> {
    v.iter()
        .map(|(w, x)| ValueEntry {
            inputs: w.iter().map(|&i| inputs.name(i).to_string()).collect(),
            output: terms_doc(x, outputs),
        })
        .collect()
}

fn values_of(
    v: &[ValueEntry],
    inputs: &GradedBasis,
    outputs: &GradedBasis,
    field: Field,
    at: &str,
) -> Result<Vec<(Vec<usize>, Chain)>> {
    v.iter()
        .enumerate()
        .map(|(n, e)| {
            let here = format!("{at}[{n}]");
            let w = e
                .inputs
                .iter()
                .map(|s| lookup(inputs, s, &here))
                .collect::<Result<Vec<_>>>()?;
            Ok((w, terms_of(&e.output, outputs, field, &here)?))
        })
        .collect()
}

/// The ledger of a transfer onto `model` from `source`: operation values
/// live on the model, homomorphism values on the source.
pub fn ledger_doc(ledger: &[LedgerEntry], model: &GradedBasis, source: &GradedBasis) -> LedgerDoc {
    LedgerDoc {
        format: Some(LEDGER.into()),
        version: Some(VERSION),
        trees: ledger
            .iter()
            .map(|e| TreeEntry {
                tree: e.tree.clone(),
                leaves: e.leaves,
                energy: e.energy.to_string(),
                operation: values_doc(&e.operation, model, model),
                homomorphism: values_doc(&e.homomorphism, model, source),
            })
            .collect(),
    }
}

pub fn ledger_from_doc(
    d: &LedgerDoc,
    model: &GradedBasis,
    source: &GradedBasis,
    field: Field,
    at: &str,
) -> Result<Vec<LedgerEntry>> {
    check_header(&d.format, &d.version, LEDGER, at)?;
    d.trees
        .iter()
        .enumerate()
        .map(|(n, t)| {
            let here = format!("{at}: trees[{n}]");
            crate::transfer::Node::parse(&t.tree).map_err(|e| parse_error(&here, e.to_string()))?;
            Ok(LedgerEntry {
                tree: t.tree.clone(),
                leaves: t.leaves,
                energy: energy(&t.energy, &here)?,
                operation: values_of(&t.operation, model, model, field, &format!("{here}.operation"))?,
                homomorphism: values_of(&t.homomorphism, model, source, field, &format!("{here}.homomorphism"))?,
            })
        })
        .collect()
}

pub fn bimodule_doc(d: &FilteredBimodule) -> BimoduleDoc {
    let mut operations = Vec::new();
    for ((k1, _), beta, t) in d.ops.iter() {
        for (w, v) in t.entries() {
            operations.push(BiOpEntry {
                energy: beta.lambda.to_string(),
                maslov: beta.mu,
                left: w[..k1].iter().map(|&i| d.left.basis.name(i).to_string()).collect(),
                module: d.basis.name(w[k1]).to_string(),
                right: w[k1 + 1..].iter().map(|&i| d.right.basis.name(i).to_string()).collect(),
                output: vector_doc(v, &d.basis),
            });
        }
    }
    BimoduleDoc {
        format: Some(BIMODULE.into()),
        version: Some(VERSION),
        basis: basis_doc(&d.basis),
        max_left: d.max_left,
        max_right: d.max_right,
        exact_below: (d.exact_below != d.energy_cutoff).then(|| d.exact_below.to_string()),
        operations,
    }
}

pub fn bimodule_from_doc(
    d: &BimoduleDoc,
    left: &FilteredAInfinity,
    right: &FilteredAInfinity,
    at: &str,
) -> Result<FilteredBimodule> {
    check_header(&d.format, &d.version, BIMODULE, at)?;
    let basis = basis_of(&d.basis, &format!("{at}: basis"))?;
    let field = left.field;
    let mut ops = BiFamily::new();
    for (n, op) in d.operations.iter().enumerate() {
        let here = format!("{at}: operations[{n}]");
        let beta =
            GapClass::new(energy(&op.energy, &here)?, op.maslov).map_err(|e| parse_error(&here, e.to_string()))?;
        let mut w = op
            .left
            .iter()
            .map(|s| lookup(&left.basis, s, &format!("{here}.left")))
            .collect::<Result<Vec<_>>>()?;
        w.push(lookup(&basis, &op.module, &format!("{here}.module"))?);
        for s in &op.right {
            w.push(lookup(&right.basis, s, &format!("{here}.right"))?);
        }
        let v = vector(&op.output, &basis, field, &format!("{here}.output"))?;
        ops.add_entry(op.left.len(), op.right.len(), beta, w, &v);
    }
    let mut out = FilteredBimodule::new(basis, left.clone(), right.clone(), ops, d.max_left, d.max_right)
        .map_err(|e| parse_error(at, e.to_string()))?;
    if let Some(e) = &d.exact_below {
        out.exact_below = signed_energy(e, &format!("{at}: exact_below"))?;
    }
    Ok(out)
}

pub fn complex_doc(k: &SimplicialComplex) -> ComplexDoc {
    ComplexDoc {
        format: Some(COMPLEX.into()),
        version: Some(VERSION),
        vertices: k.vertices.clone(),
        simplices: k
            .simplices
            .iter()
            .map(|s| s.iter().map(|&v| k.vertices[v].clone()).collect())
            .collect(),
    }
}

pub fn complex_from_doc(d: &ComplexDoc, at: &str) -> Result<SimplicialComplex> {
    check_header(&d.format, &d.version, COMPLEX, at)?;
    let mut simplices = Vec::new();
    for (n, s) in d.simplices.iter().enumerate() {
        let vs =
            s.iter()
                .map(|name| {
                    d.vertices.iter().position(|v| v == name).ok_or_else(|| {
                        parse_error(&format!("{at}: simplices[{n}]"), format!("unknown vertex `{name}`"))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
        simplices.push(vs);
    }
    SimplicialComplex::new(d.vertices.clone(), simplices).map_err(|e| parse_error(at, e.to_string()))
}

pub fn matching_doc(m: &GradientMatching, k: &SimplicialComplex) -> MatchingDoc {
    let names = |i: usize| {
        k.simplices[i]
            .iter()
            .map(|&v| k.vertices[v].clone())
            .collect::<Vec<_>>()
    };
    MatchingDoc::Tagged {
        format: Some(MATCHING.into()),
        version: Some(VERSION),
        pairs: m.pairs.iter().map(|&(s, t)| (names(s), names(t))).collect(),
    }
}

pub fn matching_from_doc(d: &MatchingDoc, k: &SimplicialComplex, at: &str) -> Result<GradientMatching> {
    let pairs = match d {
        MatchingDoc::Tagged { format, version, pairs } => {
            check_header(format, version, MATCHING, at)?;
            pairs
        }
        MatchingDoc::Bare(p) => p,
    };
    let mut out = Vec::new();
    for (n, (s, t)) in pairs.iter().enumerate() {
        let here = format!("{at}: pairs[{n}]");
        let s = k.lookup(s).map_err(|e| parse_error(&here, e.to_string()))?;
        let t = k.lookup(t).map_err(|e| parse_error(&here, e.to_string()))?;
        out.push((s, t));
    }
    GradientMatching::new(k, out)
}
