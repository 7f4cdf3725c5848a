//! Gapped filtered A-infinity algebras and homomorphisms: relation checks,
//! DGA import, Maurer-Cartan residuals, deformation by a bounding cochain,
//! and potential values.
//!
//! Stored data only covers arities up to the arity cutoff `K`, and some
//! constructions (deformation, transfer) only determine their output up to
//! some energy. [`Exactness`] records, per arity, below which energy the
//! stored map is the true one, and whether maps above `K` vanish. Every
//! check derives from it the energy below which a relation is decidable,
//! and reports that horizon.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::complex::{
    coalgebra_extend, coderivation_extend, exp_bar, tensor_bar, valuation, words, BarElement, Chain, GappedFamily,
    GradedBasis, SparseVec, Truncation,
};
use crate::error::{Error, Result};
use crate::novikov::{monoid_closure, Energy, Field, GapClass, GapMonoid, Monomial, NovElement};
use crate::report::Report;

/// Per-arity accuracy of stored maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exactness {
    /// `known_below[k]`: the stored arity-`k` map is exact below this energy.
    pub known_below: Vec<Energy>,
    /// Whether all maps above the arity cutoff vanish.
    pub tail_zero: bool,
}

impl Exactness {
    pub fn exact(arity_cutoff: usize, cutoff: Energy) -> Exactness {
        Exactness {
            known_below: vec![cutoff; arity_cutoff + 1],
            tail_zero: true,
        }
    }

    /// Maps of arity above the cutoff are unknown (and may have zero energy).
    pub fn open(arity_cutoff: usize, cutoff: Energy) -> Exactness {
        Exactness {
            known_below: vec![cutoff; arity_cutoff + 1],
            tail_zero: false,
        }
    }

    pub fn arity_cutoff(&self) -> usize {
        self.known_below.len() - 1
    }

    /// Energy below which arity `n` is known; `None` means known exactly.
    pub fn known(&self, n: usize) -> Option<Energy> {
        match self.known_below.get(n) {
            Some(e) => Some(*e),
            None if self.tail_zero => None,
            None => Some(Energy::ZERO),
        }
    }

    /// Accuracy of `sum_n op_n` on words of length `k` after inserting
    /// extra letters of energy at least `v` each. With `shorter`, maps of
    /// arity below `k` (blocks merging letters) also contribute.
    pub fn insertion_horizon(&self, k: usize, v: Option<Energy>, shorter: bool) -> Option<Energy> {
        let mut h = self.known(k);
        if shorter {
            for n in 0..k {
                h = min_opt(h, self.known(n));
            }
        }
        if let Some(v) = v {
            let top = self.arity_cutoff().max(k) + 1;
            for n in k + 1..=top {
                h = min_opt(h, self.known(n).map(|x| x + v.times((n - k) as i64)));
            }
        }
        h
    }
}

pub fn min_opt(a: Option<Energy>, b: Option<Energy>) -> Option<Energy> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn cap(h: Option<Energy>, cutoff: Energy) -> Energy {
    h.map_or(cutoff, |h| h.min(cutoff))
}

/// A gapped filtered A-infinity algebra on a finite graded basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredAInfinity {
    pub field: Field,
    pub basis: GradedBasis,
    pub monoid: GapMonoid,
    pub ops: GappedFamily,
    pub energy_cutoff: Energy,
    pub arity_cutoff: usize,
    pub exactness: Exactness,
    verified: bool,
}

impl FilteredAInfinity {
    /// Validates and assembles a structure. The monoid defaults to the
    /// closure of the classes carried by `ops`.
    pub fn new(
        field: Field,
        basis: GradedBasis,
        ops: GappedFamily,
        energy_cutoff: Energy,
        arity_cutoff: usize,
        monoid: Option<GapMonoid>,
        exactness: Option<Exactness>,
    ) -> Result<FilteredAInfinity> {
        if !energy_cutoff.is_positive() {
            return Err(Error::invalid("energy cutoff must be positive"));
        }
        if ops.degree() != 1 {
            return Err(Error::invalid("structure maps have shifted degree 1"));
        }
        let classes = ops.classes();
        for (k, beta, t) in ops.iter() {
            if k == 0 && beta.is_zero() {
                return Err(Error::invalid("m_{0,(0,0)} must vanish"));
            }
            if k > arity_cutoff {
                return Err(Error::invalid(format!(
                    "operation of arity {k} exceeds the arity cutoff {arity_cutoff}"
                )));
            }
            if beta.lambda >= energy_cutoff {
                return Err(Error::invalid(format!(
                    "class {beta} is not below the energy cutoff {energy_cutoff}"
                )));
            }
            GapClass::new(beta.lambda, beta.mu)?;
            for (w, v) in t.entries() {
                if v.iter().any(|(&o, c)| o >= basis.len() || c.field() != field) {
                    return Err(Error::invalid("operation output outside the basis or field"));
                }
                if w.iter().any(|&i| i >= basis.len()) {
                    return Err(Error::invalid("operation input outside the basis"));
                }
            }
        }
        ops.check_homogeneous(&basis, &basis)?;
        let monoid = match monoid {
            Some(m) => {
                if m.cutoff() != energy_cutoff {
                    return Err(Error::Mismatch("monoid and energy cutoffs differ".into()));
                }
                for b in &classes {
                    if !m.contains(b) {
                        return Err(Error::invalid(format!("class {b} is not in the monoid")));
                    }
                }
                m
            }
            None => monoid_closure(&classes.into_iter().collect::<Vec<_>>(), energy_cutoff)?,
        };
        let exactness = exactness.unwrap_or_else(|| Exactness::exact(arity_cutoff, energy_cutoff));
        if exactness.arity_cutoff() != arity_cutoff {
            return Err(Error::Mismatch("exactness data and arity cutoff differ".into()));
        }
        Ok(FilteredAInfinity {
            field,
            basis,
            monoid,
            ops,
            energy_cutoff,
            arity_cutoff,
            exactness,
            verified: false,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    /// Runs [`verify_ainfty`] and marks the structure verified on success.
    pub fn into_verified(mut self) -> Result<FilteredAInfinity> {
        let r = verify_ainfty(&self);
        if !r.passed() {
            return Err(Error::Verification {
                context: "A-infinity relations".into(),
                report: Box::new(r),
            });
        }
        self.verified = true;
        Ok(self)
    }

    pub(crate) fn mark_verified(&mut self) {
        self.verified = true;
    }

    /// The energy-zero differential `m_{1,(0,0)}` as a matrix.
    pub fn differential(&self) -> crate::linalg::Matrix {
        let n = self.dim();
        let mut d = crate::linalg::Matrix::zeros(self.field, n, n);
        if let Some(t) = self.ops.get(1, &GapClass::ZERO) {
            for (w, v) in t.entries() {
                for (&o, c) in v.iter() {
                    d.set(o, w[0], c.clone());
                }
            }
        }
        d
    }

    /// `m_0(1)`.
    pub fn curvature(&self) -> Chain {
        self.ops.curvature()
    }

    pub fn unit_truncation(&self, energy: Energy) -> Truncation {
        Truncation {
            energy,
            max_len: self.arity_cutoff,
        }
    }
}

/// A differential graded algebra on a finite basis.
#[derive(Clone, Debug)]
pub struct Dga {
    pub field: Field,
    pub basis: GradedBasis,
    /// `d(e_i)` for every basis element.
    pub differential: Vec<SparseVec>,
    /// `e_i * e_j` for the nonzero products.
    pub product: BTreeMap<(usize, usize), SparseVec>,
}

impl Dga {
    pub fn d(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (&i, c) in v.iter() {
            out.add_scaled(&self.differential[i], c);
        }
        out
    }

    pub fn mul(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (&i, c) in a.iter() {
            for (&j, c2) in b.iter() {
                if let Some(p) = self.product.get(&(i, j)) {
                    out.add_scaled(p, &(c * c2));
                }
            }
        }
        out
    }

    fn unit(&self, i: usize) -> SparseVec {
        SparseVec::single(i, self.field.one())
    }

    /// Checks degrees, `d^2 = 0`, associativity and the Leibniz rule,
    /// reporting a witness for the first failure.
    pub fn check(&self) -> Result<()> {
        let b = &self.basis;
        let n = b.len();
        b.check_nonnegative()?;
        if self.differential.len() != n {
            return Err(Error::invalid("differential must list every basis element"));
        }
        for i in 0..n {
            for (&o, _) in self.differential[i].iter() {
                if b.degree(o) != b.degree(i) + 1 {
                    return Err(Error::witness(
                        "degree of d",
                        format!("d({}) contains {}", b.name(i), b.name(o)),
                    ));
                }
            }
        }
        for (&(i, j), p) in &self.product {
            for (&o, _) in p.iter() {
                if b.degree(o) != b.degree(i) + b.degree(j) {
                    return Err(Error::witness(
                        "degree of the product",
                        format!("{}*{} contains {}", b.name(i), b.name(j), b.name(o)),
                    ));
                }
            }
        }
        for i in 0..n {
            if !self.d(&self.differential[i]).is_zero() {
                return Err(Error::witness("d^2 = 0", format!("({})", b.name(i))));
            }
        }
        for i in 0..n {
            for j in 0..n {
                let ij = self.mul(&self.unit(i), &self.unit(j));
                for k in 0..n {
                    let left = self.mul(&ij, &self.unit(k));
                    let right = self.mul(&self.unit(i), &self.mul(&self.unit(j), &self.unit(k)));
                    if left != right {
                        return Err(Error::witness(
                            "associativity",
                            format!("({}, {}, {})", b.name(i), b.name(j), b.name(k)),
                        ));
                    }
                }
                let mut lhs = self.d(&ij);
                let mut rhs = self.mul(&self.differential[i], &self.unit(j));
                let sign = if b.degree(i) % 2 == 0 {
                    self.field.one()
                } else {
                    -self.field.one()
                };
                rhs.add_scaled(&self.mul(&self.unit(i), &self.differential[j]), &sign);
                lhs.sub_all(&rhs);
                if !lhs.is_zero() {
                    return Err(Error::witness(
                        "Leibniz rule",
                        format!("({}, {}, d)", b.name(i), b.name(j)),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Unfiltered A-infinity algebra of a DGA:
/// `m_1(x) = (-1)^{deg x} dx`, `m_2(x, y) = (-1)^{deg x (deg y + 1)} xy`.
pub fn from_dga(dga: &Dga, energy_cutoff: Energy, arity_cutoff: usize) -> Result<FilteredAInfinity> {
    dga.check()?;
    let b = &dga.basis;
    let f = dga.field;
    let sign = |odd: bool| if odd { -f.one() } else { f.one() };
    let mut ops = GappedFamily::new(1);
    for i in 0..b.len() {
        let s = sign(b.degree(i).rem_euclid(2) == 1);
        ops.add_entry(1, GapClass::ZERO, vec![i], &dga.differential[i].scaled(&s));
    }
    if arity_cutoff >= 2 {
        for (&(i, j), p) in &dga.product {
            let s = sign((b.degree(i) * (b.degree(j) + 1)).rem_euclid(2) == 1);
            ops.add_entry(2, GapClass::ZERO, vec![i, j], &p.scaled(&s));
        }
    }
    let mut a = FilteredAInfinity::new(
        f,
        b.clone(),
        ops,
        energy_cutoff,
        arity_cutoff.max(1),
        Some(GapMonoid::trivial(energy_cutoff)),
        None,
    )?;
    a.mark_verified();
    Ok(a)
}

/// `sum_n m_n` applied to a bar element, truncated.
pub fn apply_family(ops: &GappedFamily, x: &BarElement, below: Energy) -> Chain {
    let mut out = Chain::new();
    for ((m, w), c) in x.iter() {
        for ((m2, o), c2) in ops.eval(w).iter() {
            let mono = *m * *m2;
            if mono.lambda < below {
                out.add_term((mono, *o), c * c2);
            }
        }
    }
    out
}

/// Energy below which the A-infinity relation on words of length `k` is
/// decidable from the stored data.
pub fn relation_horizon(a: &FilteredAInfinity, k: usize) -> Energy {
    let ex = &a.exactness;
    let mut h = None;
    for j in 0..=k {
        h = min_opt(h, ex.known(j));
    }
    if let Some(v) = a.ops.curvature_valuation() {
        h = min_opt(h, ex.known(k + 1).map(|x| x + v));
    }
    cap(h, a.energy_cutoff)
}

/// Residual of the A-infinity relation `m_*(d^(w))` on a basis word.
pub fn relation_residual(a: &FilteredAInfinity, word: &[usize], below: Energy) -> Chain {
    let x = BarElement::single((Monomial::ONE, word.to_vec()), a.field.one());
    let dx = coderivation_extend(
        &a.ops,
        &a.basis,
        &x,
        Truncation {
            energy: below,
            max_len: word.len() + 1,
        },
    );
    apply_family(&a.ops, &dx, below)
}

fn names(basis: &GradedBasis, word: &[usize]) -> Vec<String> {
    word.iter().map(|&i| basis.name(i).to_string()).collect()
}

/// Checks the A-infinity relations on every basis word up to the arity
/// cutoff, at every energy below the decidable horizon.
pub fn verify_ainfty(a: &FilteredAInfinity) -> Report {
    verify_words(a, "A-infinity relations", |k| words(a.dim(), k))
}

/// Like [`verify_ainfty`], but checks at most `per_arity` random words of
/// each arity.
pub fn verify_ainfty_sampled(a: &FilteredAInfinity, seed: u64, per_arity: usize) -> Report {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let n = a.dim();
    let mut picks: Vec<Vec<Vec<usize>>> = Vec::new();
    for k in 0..=a.arity_cutoff {
        let total = (n as f64).powi(k as i32);
        if total <= per_arity as f64 {
            picks.push(words(n, k));
        } else {
            let set: BTreeSet<Vec<usize>> = (0..per_arity)
                .map(|_| (0..k).map(|_| rng.gen_range(0..n)).collect())
                .collect();
            picks.push(set.into_iter().collect());
        }
    }
    verify_words(a, "A-infinity relations (sampled)", |k| picks[k].clone())
}

fn verify_words(a: &FilteredAInfinity, check: &str, pick: impl Fn(usize) -> Vec<Vec<usize>>) -> Report {
    let mut report = Report::new(check);
    for k in 0..=a.arity_cutoff {
        let h = relation_horizon(a, k);
        report.horizons.insert(k, h);
        let ws = pick(k);
        let found: Vec<(Vec<usize>, Chain)> = ws
            .par_iter()
            .filter_map(|w| {
                let r = relation_residual(a, w, h);
                (!r.is_zero()).then(|| (w.clone(), r))
            })
            .collect();
        for (w, r) in found {
            report.push_residual(k, names(&a.basis, &w), &r, &a.basis);
        }
    }
    report.sort();
    report
}

/// `||beta||`: the largest number of nonzero parts of `beta` plus the
/// integer part of its energy, minus one; `-1` for the zero class.
pub fn beta_norm(monoid: &GapMonoid, beta: &GapClass) -> Result<i64> {
    if beta.is_zero() {
        return Ok(-1);
    }
    let parts = monoid
        .max_parts(beta)
        .ok_or_else(|| Error::invalid(format!("class {beta} is not in the monoid")))?;
    Ok(parts as i64 + beta.lambda.floor() - 1)
}

/// Position of an index `(beta, k)` in the order: `(||beta|| + k, ||beta||)`
/// compared lexicographically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct AnkIndex {
    pub total: i64,
    pub norm: i64,
}

impl AnkIndex {
    pub fn of(monoid: &GapMonoid, beta: &GapClass, k: usize) -> Result<AnkIndex> {
        let norm = beta_norm(monoid, beta)?;
        Ok(AnkIndex {
            total: norm + k as i64,
            norm,
        })
    }

    /// The bound `(n, K)` itself.
    pub fn bound(n: i64, k: i64) -> AnkIndex {
        AnkIndex { total: n + k, norm: n }
    }
}

/// `Less` for `a < b`, `Equal` when `a ~ b`, `Greater` for `a > b`.
pub fn ank_compare(monoid: &GapMonoid, a: (&GapClass, usize), b: (&GapClass, usize)) -> Result<Ordering> {
    Ok(AnkIndex::of(monoid, a.0, a.1)?.cmp(&AnkIndex::of(monoid, b.0, b.1)?))
}

/// Checks the relations at every index `(beta, k)` below `(n, K)`.
pub fn verify_ank(a: &FilteredAInfinity, n: i64, big_k: i64) -> Result<Report> {
    let bound = AnkIndex::bound(n, big_k);
    let max_k = (n + big_k + 1).max(0) as usize;
    for beta in a.monoid.classes() {
        for k in 0..=max_k {
            if k == 0 && beta.is_zero() {
                continue;
            }
            if AnkIndex::of(&a.monoid, beta, k)? < bound && k > a.arity_cutoff {
                return Err(Error::Missing(format!(
                    "(beta = {beta}, k = {k}) is below ({n}, {big_k}) but the arity cutoff is {}",
                    a.arity_cutoff
                )));
            }
        }
    }
    let mut report = Report::new(format!("A_{{{n},{big_k}}} relations"));
    for k in 0..=a.arity_cutoff.min(max_k) {
        let mut h = None;
        for j in 0..=(k + 1).min(a.arity_cutoff) {
            h = min_opt(h, a.exactness.known(j));
        }
        let h = cap(h, a.energy_cutoff);
        report.horizons.insert(k, h);
        let ws = words(a.dim(), k);
        let found: Vec<(Vec<usize>, Chain)> = ws
            .par_iter()
            .filter_map(|w| {
                let mut r = relation_residual(a, w, h);
                r.retain(|(m, _)| {
                    let beta = m.class();
                    !(k == 0 && beta.is_zero()) && AnkIndex::of(&a.monoid, &beta, k).map_or(true, |i| i < bound)
                });
                (!r.is_zero()).then(|| (w.clone(), r))
            })
            .collect();
        for (w, r) in found {
            report.push_residual(k, names(&a.basis, &w), &r, &a.basis);
        }
    }
    report.sort();
    Ok(report)
}

/// Checks that `b` is a valid Maurer-Cartan candidate: shifted degree 0
/// and strictly positive valuation.
pub fn check_candidate(basis: &GradedBasis, b: &Chain) -> Result<()> {
    for ((m, i), _) in b.iter() {
        if basis.shifted(*i) + m.degree() != 0 {
            return Err(Error::invalid(format!(
                "term {m} {} of b has shifted degree {}, not 0",
                basis.name(*i),
                basis.shifted(*i) + m.degree()
            )));
        }
        if !m.lambda.is_positive() {
            return Err(Error::invalid(format!(
                "term {} of b has zero energy; b needs positive valuation",
                basis.name(*i)
            )));
        }
    }
    Ok(())
}

/// The truncated Maurer-Cartan sum together with the energy below which it
/// is exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct McResidual {
    pub residual: Chain,
    pub horizon: Energy,
}

impl McResidual {
    pub fn is_solution(&self) -> bool {
        self.residual.is_zero()
    }
}

/// `m_0(1) + m_1(b) + m_2(b, b) + ...`, truncated.
pub fn mc_residual(a: &FilteredAInfinity, b: &Chain) -> Result<McResidual> {
    check_candidate(&a.basis, b)?;
    let v = valuation(b);
    let horizon = cap(a.exactness.insertion_horizon(0, v, false), a.energy_cutoff);
    let e = exp_bar(
        b,
        a.field,
        Truncation {
            energy: horizon,
            max_len: a.arity_cutoff,
        },
    )?;
    Ok(McResidual {
        residual: apply_family(&a.ops, &e, horizon),
        horizon,
    })
}

/// `e^b x_1 e^b x_2 ... x_k e^b`, truncated.
pub fn interleave(b_exp: &BarElement, word: &[usize], field: Field, trunc: Truncation) -> BarElement {
    let mut acc = b_exp.clone();
    for &i in word {
        let letter = BarElement::single((Monomial::ONE, vec![i]), field.one());
        acc = tensor_bar(&tensor_bar(&acc, &letter, trunc), b_exp, trunc);
    }
    acc
}

/// The deformed structure `m^b_k = m_* o Phi^b`.
pub fn deform_by_b(a: &FilteredAInfinity, b: &Chain) -> Result<FilteredAInfinity> {
    check_candidate(&a.basis, b)?;
    if b.is_zero() {
        return Ok(a.clone());
    }
    let v = valuation(b);
    let big_k = a.arity_cutoff;
    let horizons: Vec<Energy> = (0..=big_k)
        .map(|k| cap(a.exactness.insertion_horizon(k, v, false), a.energy_cutoff))
        .collect();
    let top = *horizons.iter().max().unwrap();
    let e = exp_bar(
        b,
        a.field,
        Truncation {
            energy: top,
            max_len: big_k,
        },
    )?;
    let mut ops = GappedFamily::new(1);
    for k in 0..=big_k {
        let trunc = Truncation {
            energy: horizons[k],
            max_len: big_k,
        };
        let ws = words(a.dim(), k);
        let outs: Vec<(Vec<usize>, Chain)> = ws
            .par_iter()
            .map(|w| {
                let phi = interleave(&e, w, a.field, trunc);
                (w.clone(), apply_family(&a.ops, &phi, horizons[k]))
            })
            .collect();
        for (w, out) in outs {
            for ((m, o), c) in out {
                ops.add_entry(k, m.class(), w.clone(), &SparseVec::single(o, c));
            }
        }
    }
    let mut gens: Vec<GapClass> = a.monoid.classes().iter().copied().collect();
    gens.extend(b.iter().map(|((m, _), _)| m.class()));
    gens.extend(ops.classes());
    let monoid = monoid_closure(&gens, a.energy_cutoff)?;
    FilteredAInfinity::new(
        a.field,
        a.basis.clone(),
        ops,
        a.energy_cutoff,
        big_k,
        Some(monoid),
        Some(Exactness {
            known_below: horizons,
            tail_zero: a.exactness.tail_zero,
        }),
    )
}

/// Potential value of a weak bounding cochain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Potential {
    pub value: NovElement,
    pub horizon: Energy,
}

/// Reads off `c` from `mc_residual(b) = c * unit`.
pub fn potential(a: &FilteredAInfinity, b: &Chain, unit: &str) -> Result<Potential> {
    let u = a.basis.lookup(unit)?;
    let r = mc_residual(a, b)?;
    let support: BTreeSet<usize> = r.residual.iter().map(|((_, i), _)| *i).collect();
    if support.iter().any(|&i| i != u) {
        return Err(Error::NotWeakSolution {
            support: support.iter().map(|&i| a.basis.name(i).to_string()).collect(),
        });
    }
    let value = NovElement::from_terms(a.field, r.horizon, r.residual.iter().map(|((m, _), c)| (*m, c.clone())));
    Ok(Potential {
        value,
        horizon: r.horizon,
    })
}

/// A gapped filtered A-infinity homomorphism, as a degree-0 family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AInfinityHom {
    pub maps: GappedFamily,
    pub exactness: Exactness,
}

impl AInfinityHom {
    pub fn new(maps: GappedFamily, exactness: Exactness) -> Result<AInfinityHom> {
        if maps.degree() != 0 {
            return Err(Error::invalid("homomorphisms have degree 0"));
        }
        for (k, beta, _) in maps.iter() {
            if k == 0 && !beta.lambda.is_positive() {
                return Err(Error::invalid("f_0 needs strictly positive energy"));
            }
            if k > exactness.arity_cutoff() {
                return Err(Error::invalid(format!("map of arity {k} beyond the arity cutoff")));
            }
        }
        Ok(AInfinityHom { maps, exactness })
    }

    pub fn identity(a: &FilteredAInfinity) -> AInfinityHom {
        let mut maps = GappedFamily::new(0);
        for i in 0..a.dim() {
            maps.add_entry(1, GapClass::ZERO, vec![i], &SparseVec::single(i, a.field.one()));
        }
        AInfinityHom {
            maps,
            exactness: Exactness::exact(a.arity_cutoff, a.energy_cutoff),
        }
    }

    /// Strict map with only a linear energy-zero part.
    pub fn linear(m: &crate::linalg::Matrix, arity_cutoff: usize, cutoff: Energy) -> AInfinityHom {
        let mut maps = GappedFamily::new(0);
        for c in 0..m.cols() {
            let v: SparseVec = (0..m.rows()).map(|r| (r, m.get(r, c).clone())).collect();
            maps.add_entry(1, GapClass::ZERO, vec![c], &v);
        }
        AInfinityHom {
            maps,
            exactness: Exactness::exact(arity_cutoff, cutoff),
        }
    }

    /// Matrix of `f_{1,(0,0)}`.
    pub fn linear_part(&self, source_dim: usize, target_dim: usize, field: Field) -> crate::linalg::Matrix {
        let mut m = crate::linalg::Matrix::zeros(field, target_dim, source_dim);
        if let Some(t) = self.maps.get(1, &GapClass::ZERO) {
            for (w, v) in t.entries() {
                for (&o, c) in v.iter() {
                    m.set(o, w[0], c.clone());
                }
            }
        }
        m
    }

    /// Applies `f_1` (all classes) to a chain.
    pub fn apply_linear(&self, x: &Chain) -> Chain {
        let mut out = Chain::new();
        for ((m, i), c) in x.iter() {
            for ((m2, o), c2) in self.maps.eval(&[*i]).iter() {
                out.add_term((*m * *m2, *o), c * c2);
            }
        }
        out
    }
}

fn same_cutoff(a: &FilteredAInfinity, b: &FilteredAInfinity) -> Result<Energy> {
    if a.field != b.field {
        return Err(Error::Mismatch(format!("fields {} and {}", a.field, b.field)));
    }
    if a.energy_cutoff != b.energy_cutoff {
        return Err(Error::Mismatch(format!(
            "energy cutoffs {} and {}",
            a.energy_cutoff, b.energy_cutoff
        )));
    }
    Ok(a.energy_cutoff)
}

/// Energy below which the homomorphism relation on words of length `k`
/// is decidable.
pub fn hom_horizon(f: &AInfinityHom, a: &FilteredAInfinity, target: &FilteredAInfinity, k: usize) -> Energy {
    let mut h = None;
    for j in 0..=k {
        h = min_opt(h, a.exactness.known(j));
        h = min_opt(h, f.exactness.known(j));
    }
    if let Some(v) = a.ops.curvature_valuation() {
        h = min_opt(h, f.exactness.known(k + 1).map(|x| x + v));
    }
    let vf = f.maps.curvature_valuation();
    h = min_opt(h, target.exactness.insertion_horizon(k, vf, true));
    cap(h, a.energy_cutoff.min(target.energy_cutoff))
}

/// Residual `f_*(d^ w) - m'_*(f^ w)` on a basis word.
pub fn hom_residual(
    f: &AInfinityHom,
    a: &FilteredAInfinity,
    target: &FilteredAInfinity,
    word: &[usize],
    below: Energy,
) -> Result<Chain> {
    let x = BarElement::single((Monomial::ONE, word.to_vec()), a.field.one());
    let dx = coderivation_extend(
        &a.ops,
        &a.basis,
        &x,
        Truncation {
            energy: below,
            max_len: word.len() + 1,
        },
    );
    let mut r = apply_family(&f.maps, &dx, below);
    let fx = coalgebra_extend(
        &f.maps,
        &x,
        Truncation {
            energy: below,
            max_len: target.arity_cutoff.max(word.len()),
        },
    )?;
    r.sub_all(&apply_family(&target.ops, &fx, below));
    Ok(r)
}

/// Checks `d'^ o f^ = f^ o d^` projected to the target, on every basis
/// word up to the arity cutoff of the source.
pub fn verify_homomorphism(f: &AInfinityHom, a: &FilteredAInfinity, target: &FilteredAInfinity) -> Result<Report> {
    same_cutoff(a, target)?;
    check_hom_shape(f, a, target)?;
    let mut report = Report::new("homomorphism relations");
    let top = a.arity_cutoff.min(f.exactness.arity_cutoff());
    for k in 0..=top {
        let h = hom_horizon(f, a, target, k);
        report.horizons.insert(k, h);
        let ws = words(a.dim(), k);
        let found: Vec<Result<Option<(Vec<usize>, Chain)>>> = ws
            .par_iter()
            .map(|w| {
                let r = hom_residual(f, a, target, w, h)?;
                Ok((!r.is_zero()).then(|| (w.clone(), r)))
            })
            .collect();
        for item in found {
            if let Some((w, r)) = item? {
                report.push_residual(k, names(&a.basis, &w), &r, &target.basis);
            }
        }
    }
    report.sort();
    Ok(report)
}

fn check_hom_shape(f: &AInfinityHom, a: &FilteredAInfinity, target: &FilteredAInfinity) -> Result<()> {
    for (k, beta, t) in f.maps.iter() {
        for (w, v) in t.entries() {
            if w.len() != k || w.iter().any(|&i| i >= a.dim()) {
                return Err(Error::Mismatch(format!(
                    "map ({k}, {beta}) has inputs outside the source"
                )));
            }
            if v.iter().any(|(&o, _)| o >= target.dim()) {
                return Err(Error::Mismatch(format!(
                    "map ({k}, {beta}) has outputs outside the target"
                )));
            }
        }
    }
    f.maps.check_homogeneous(&a.basis, &target.basis)
}

/// `(g o f)_k = sum g_n(f_{k_1}, ..., f_{k_n})` including `f_0` insertions.
pub fn compose_homomorphisms(
    f: &AInfinityHom,
    g: &AInfinityHom,
    a: &FilteredAInfinity,
    b: &FilteredAInfinity,
    c: &FilteredAInfinity,
) -> Result<AInfinityHom> {
    same_cutoff(a, b)?;
    same_cutoff(b, c)?;
    check_hom_shape(f, a, b)?;
    check_hom_shape(g, b, c)?;
    let big_k = f.exactness.arity_cutoff().min(a.arity_cutoff);
    let vf = f.maps.curvature_valuation();
    let mut known = Vec::with_capacity(big_k + 1);
    for k in 0..=big_k {
        let mut h = None;
        for j in 0..=k {
            h = min_opt(h, f.exactness.known(j));
        }
        h = min_opt(h, g.exactness.insertion_horizon(k, vf, true));
        known.push(cap(h, a.energy_cutoff));
    }
    let mut maps = GappedFamily::new(0);
    for k in 0..=big_k {
        let trunc = Truncation {
            energy: known[k],
            max_len: g.exactness.arity_cutoff().max(k),
        };
        let ws = words(a.dim(), k);
        let outs: Vec<Result<(Vec<usize>, Chain)>> = ws
            .par_iter()
            .map(|w| {
                let x = BarElement::single((Monomial::ONE, w.clone()), a.field.one());
                let fx = coalgebra_extend(&f.maps, &x, trunc)?;
                Ok((w.clone(), apply_family(&g.maps, &fx, known[k])))
            })
            .collect();
        for item in outs {
            let (w, out) = item?;
            for ((m, o), coeff) in out {
                if k == 0 && m.lambda.is_zero() {
                    continue;
                }
                maps.add_entry(k, m.class(), w.clone(), &SparseVec::single(o, coeff));
            }
        }
    }
    AInfinityHom::new(
        maps,
        Exactness {
            known_below: known,
            tail_zero: f.exactness.tail_zero && g.exactness.tail_zero,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::lift;

    fn q() -> Field {
        Field::Rational
    }

    /// Exterior algebra on x, y in degree 1 with unit.
    fn exterior() -> Dga {
        let basis = GradedBasis::new([("1", 0), ("x", 1), ("y", 1), ("xy", 2)]).unwrap();
        let one = q().one();
        let mut product = BTreeMap::new();
        for i in 0..4 {
            product.insert((0, i), SparseVec::single(i, one.clone()));
            if i > 0 {
                product.insert((i, 0), SparseVec::single(i, one.clone()));
            }
        }
        product.insert((1, 2), SparseVec::single(3, one.clone()));
        product.insert((2, 1), SparseVec::single(3, -one.clone()));
        Dga {
            field: q(),
            basis,
            differential: vec![SparseVec::new(); 4],
            product,
        }
    }

    #[test]
    fn exterior_signs() {
        let a = from_dga(&exterior(), Energy::int(2), 3).unwrap();
        let m2 = a.ops.get(2, &GapClass::ZERO).unwrap();
        assert_eq!(m2.get(&[1, 2]).unwrap(), &SparseVec::single(3, q().one()));
        assert!(m2.get(&[1, 1]).is_none());
        assert!(verify_ainfty(&a).passed());
    }

    #[test]
    fn dga_checks_give_witnesses() {
        let mut d = exterior();
        d.product.remove(&(0, 1));
        let err = d.check().unwrap_err();
        assert!(
            matches!(&err, Error::Witness { what, .. } if what == "associativity"),
            "{err}"
        );
        let mut d = exterior();
        d.differential[0] = SparseVec::single(1, q().one());
        let err = d.check().unwrap_err().to_string();
        assert!(err.contains("Leibniz"), "{err}");
        let mut d = exterior();
        d.differential[1] = SparseVec::single(1, q().one());
        assert!(d.check().unwrap_err().to_string().contains("degree of d"));
    }

    #[test]
    fn curvature_residual_reported() {
        // m0 = T c with m1 = 0 and m2(c, x) != +-m2(x, c) breaks the relation.
        let basis = GradedBasis::new([("c", 2), ("x", 1), ("z", 3)]).unwrap();
        let mut ops = GappedFamily::new(1);
        let beta = GapClass::new(Energy::int(1), 0).unwrap();
        ops.add_entry(0, beta, vec![], &SparseVec::single(0, q().one()));
        ops.add_entry(2, GapClass::ZERO, vec![0, 1], &SparseVec::single(2, q().one()));
        let a = FilteredAInfinity::new(q(), basis, ops, Energy::int(2), 2, None, None).unwrap();
        let r = verify_ainfty(&a);
        assert!(!r.passed());
        let e = &r.entries[0];
        assert_eq!(e.arity, 1);
        assert_eq!(e.energy, Energy::int(1));
        assert_eq!(e.word, vec!["x".to_string()]);
    }

    #[test]
    fn mutation_is_localized() {
        let a = from_dga(&exterior(), Energy::int(2), 3).unwrap();
        let mut ops = a.ops.clone();
        ops.add_entry(2, GapClass::ZERO, vec![0, 0], &SparseVec::single(0, q().one()));
        let b = FilteredAInfinity::new(q(), a.basis.clone(), ops, Energy::int(2), 3, None, None).unwrap();
        let r = verify_ainfty(&b);
        assert!(!r.passed());
        assert!(r.entries.iter().all(|e| e.arity == 3));
    }

    #[test]
    fn norms() {
        let g = |l, d, m| GapClass::new(Energy::new(l, d), m).unwrap();
        let m = monoid_closure(&[g(3, 2, 2)], Energy::int(4)).unwrap();
        assert_eq!(beta_norm(&m, &GapClass::ZERO).unwrap(), -1);
        assert_eq!(beta_norm(&m, &g(3, 2, 2)).unwrap(), 1);
        assert_eq!(beta_norm(&m, &g(3, 1, 4)).unwrap(), 4);
        let m1 = monoid_closure(&[g(1, 2, 2)], Energy::int(4)).unwrap();
        assert_eq!(beta_norm(&m1, &g(1, 2, 2)).unwrap(), 0);
        assert_eq!(
            ank_compare(&m, (&GapClass::ZERO, 2), (&g(3, 2, 2), 0)).unwrap(),
            Ordering::Less
        );
        assert_eq!(
            ank_compare(&m1, (&GapClass::ZERO, 2), (&g(1, 2, 2), 1)).unwrap(),
            Ordering::Less
        );
        assert_eq!(
            ank_compare(&m1, (&g(1, 2, 2), 1), (&g(1, 2, 2), 1)).unwrap(),
            Ordering::Equal
        );
    }

    #[test]
    fn ank_restriction_of_valid_structure() {
        let a = from_dga(&exterior(), Energy::int(2), 3).unwrap();
        assert!(verify_ank(&a, 0, 2).unwrap().passed());
        assert!(matches!(verify_ank(&a, 0, 5), Err(Error::Missing(_))));
    }

    fn curved_pair() -> FilteredAInfinity {
        // m0 = T c, m1(u) = -c, so b = T u solves the MC equation.
        let basis = GradedBasis::new([("u", 1), ("c", 2)]).unwrap();
        let mut ops = GappedFamily::new(1);
        let beta = GapClass::new(Energy::int(1), 0).unwrap();
        ops.add_entry(0, beta, vec![], &SparseVec::single(1, q().one()));
        ops.add_entry(1, GapClass::ZERO, vec![0], &SparseVec::single(1, -q().one()));
        FilteredAInfinity::new(q(), basis, ops, Energy::int(3), 3, None, None).unwrap()
    }

    #[test]
    fn mc_examples() {
        let a = curved_pair();
        assert!(verify_ainfty(&a).passed());
        let t1 = Monomial::new(Energy::int(1), 0);
        let r = mc_residual(&a, &Chain::new()).unwrap();
        assert_eq!(r.residual, Chain::single((t1, 1), q().one()));
        let b = Chain::single((t1, 0), q().one());
        let r = mc_residual(&a, &b).unwrap();
        assert!(r.is_solution());
        assert_eq!(r.horizon, Energy::int(3));
        let bad = Chain::single((Monomial::ONE, 0), q().one());
        assert!(mc_residual(&a, &bad).is_err());
        let d = deform_by_b(&a, &b).unwrap();
        assert!(d.curvature().is_zero());
        assert!(verify_ainfty(&d).passed());
        assert_eq!(deform_by_b(&a, &Chain::new()).unwrap(), a);
    }

    #[test]
    fn potential_reads_coefficient() {
        let a = curved_pair();
        let p = potential(&a, &Chain::new(), "c").unwrap();
        assert_eq!(
            p.value,
            NovElement::monomial(q(), Energy::int(3), Monomial::new(Energy::int(1), 0), q().one())
        );
        assert!(matches!(
            potential(&a, &Chain::new(), "u"),
            Err(Error::NotWeakSolution { .. })
        ));
        let b = Chain::single((Monomial::new(Energy::int(1), 0), 0), q().one());
        assert!(potential(&a, &b, "c").unwrap().value.is_zero());
    }

    #[test]
    fn identity_and_composition() {
        let a = from_dga(&exterior(), Energy::int(2), 3).unwrap();
        let id = AInfinityHom::identity(&a);
        assert!(verify_homomorphism(&id, &a, &a).unwrap().passed());
        let comp = compose_homomorphisms(&id, &id, &a, &a, &a).unwrap();
        assert_eq!(comp.maps, id.maps);
        let mut broken = id.maps.clone();
        broken.add_entry(1, GapClass::ZERO, vec![3], &SparseVec::single(3, -q().one()));
        let bad = AInfinityHom::new(broken, id.exactness.clone()).unwrap();
        let r = verify_homomorphism(&bad, &a, &a).unwrap();
        assert!(!r.passed());
        assert_eq!(r.lowest_level(), Some(Energy::ZERO));
    }

    #[test]
    fn first_order_deformation() {
        let a = from_dga(&exterior(), Energy::int(3), 2).unwrap();
        let t = Monomial::new(Energy::int(1), 0);
        let b = Chain::single((t, 1), q().one());
        let d = deform_by_b(&a, &b).unwrap();
        // m1^b(y) at energy 1 = m2(b, y) + m2(y, b) = x y - y x = 2 xy, up to the m2 signs.
        let mut want = Chain::new();
        for (w, s) in [(vec![1, 2], 1), (vec![2, 1], 1)] {
            let m2 = a.ops.get(2, &GapClass::ZERO).unwrap();
            if let Some(v) = m2.get(&w) {
                want.add_all(&lift(&v.scaled(&q().from_i64(s)), t));
            }
        }
        let got: Chain = d.ops.eval(&[2]).into_iter().filter(|((m, _), _)| *m == t).collect();
        assert_eq!(got, want);
    }
}
