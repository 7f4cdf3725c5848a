//! Filtered A-infinity bimodules over a left algebra `C1` and a right
//! algebra `C0`: relation checks, deformation by a pair of bounding
//! cochains, and homomorphisms with bounded energy loss.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::ainfty::{check_candidate, interleave, verify_homomorphism, AInfinityHom, Dga, FilteredAInfinity};
use crate::complex::{
    coalgebra_extend, coderivation_extend, exp_bar, valuation, words, BarElement, Chain, GradedBasis, SparseVec,
    Tensor, Truncation,
};
use crate::error::{Error, Result};
use crate::novikov::{Energy, Field, GapClass, Monomial};
use crate::report::{Report, ReportEntry};

/// A word `x_1 .. x_k1 (x) y (x) z_1 .. z_k0` with a Novikov monomial.
pub type BiWord = (Vec<usize>, usize, Vec<usize>);

/// Families `n_{k1,k0,beta}`, stored as tensors on the concatenated word
/// `left ++ [y] ++ right`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BiFamily {
    ops: BTreeMap<(usize, usize), BTreeMap<GapClass, Tensor>>,
}

impl BiFamily {
    pub fn new() -> BiFamily {
        BiFamily::default()
    }

    pub fn add_entry(&mut self, k1: usize, k0: usize, beta: GapClass, word: Vec<usize>, out: &SparseVec) {
        let slot = self.ops.entry((k1, k0)).or_default();
        slot.entry(beta).or_default().add(word, out);
        slot.retain(|_, t| !t.is_zero());
        self.ops.retain(|_, m| !m.is_empty());
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), &GapClass, &Tensor)> {
        self.ops
            .iter()
            .flat_map(|(k, m)| m.iter().map(move |(b, t)| (*k, b, t)))
    }

    pub fn get(&self, k1: usize, k0: usize, beta: &GapClass) -> Option<&Tensor> {
        self.ops.get(&(k1, k0)).and_then(|m| m.get(beta))
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Sum over classes on one basis word.
    pub fn eval(&self, left: &[usize], y: usize, right: &[usize]) -> Chain {
        let mut out = Chain::new();
        if let Some(m) = self.ops.get(&(left.len(), right.len())) {
            let mut w = left.to_vec();
            w.push(y);
            w.extend_from_slice(right);
            for (beta, t) in m {
                if let Some(v) = t.get(&w) {
                    for (&o, c) in v.iter() {
                        out.add_term((beta.monomial(), o), c.clone());
                    }
                }
            }
        }
        out
    }

    /// Applies the family to a combination of words, keeping energies below
    /// `below`.
    pub fn apply(&self, x: &BiBar, below: Energy) -> Chain {
        let mut out = Chain::new();
        for ((m, (l, y, r)), c) in x.iter() {
            for ((m2, o), c2) in self.eval(l, *y, r).iter() {
                let mono = *m * *m2;
                if mono.lambda < below {
                    out.add_term((mono, *o), c * c2);
                }
            }
        }
        out
    }

    /// Checks `deg'(out) = degree - mu + sum deg'(in)`.
    fn check_homogeneous(
        &self,
        degree: i64,
        c1: &GradedBasis,
        d: &GradedBasis,
        c0: &GradedBasis,
        target: &GradedBasis,
    ) -> Result<()> {
        for ((k1, k0), beta, t) in self.iter() {
            for (w, v) in t.entries() {
                if w.len() != k1 + k0 + 1 {
                    return Err(Error::invalid(format!(
                        "entry of length {} in slot ({k1}, {k0})",
                        w.len()
                    )));
                }
                if w[..k1].iter().any(|&i| i >= c1.len())
                    || w[k1] >= d.len()
                    || w[k1 + 1..].iter().any(|&i| i >= c0.len())
                {
                    return Err(Error::invalid(format!(
                        "entry in slot ({k1}, {k0}) refers outside the bases"
                    )));
                }
                let deg_in: i64 = w[..k1].iter().map(|&i| c1.shifted(i)).sum::<i64>()
                    + d.shifted(w[k1])
                    + w[k1 + 1..].iter().map(|&i| c0.shifted(i)).sum::<i64>();
                for (&o, _) in v.iter() {
                    if o >= target.len() {
                        return Err(Error::invalid(format!("output index {o} outside the module basis")));
                    }
                    if target.shifted(o) != degree - beta.mu + deg_in {
                        return Err(Error::invalid(format!(
                            "slot ({k1}, {k0}), class {beta}: output `{}` has the wrong degree",
                            target.name(o)
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

pub type BiBar = crate::complex::LinComb<(Monomial, BiWord)>;

#[derive(Clone, Debug)]
pub struct FilteredBimodule {
    pub basis: GradedBasis,
    pub left: FilteredAInfinity,
    pub right: FilteredAInfinity,
    pub ops: BiFamily,
    pub energy_cutoff: Energy,
    pub max_left: usize,
    pub max_right: usize,
    /// The stored operations are exact below this energy; operations
    /// beyond the arity cutoffs vanish.
    pub exact_below: Energy,
}

impl FilteredBimodule {
    pub fn new(
        basis: GradedBasis,
        left: FilteredAInfinity,
        right: FilteredAInfinity,
        ops: BiFamily,
        max_left: usize,
        max_right: usize,
    ) -> Result<FilteredBimodule> {
        if left.field != right.field {
            return Err(Error::Mismatch("left and right algebras have different fields".into()));
        }
        if left.energy_cutoff != right.energy_cutoff {
            return Err(Error::Mismatch(
                "left and right algebras have different energy cutoffs".into(),
            ));
        }
        basis.check_nonnegative()?;
        ops.check_homogeneous(1, &left.basis, &basis, &right.basis, &basis)?;
        for ((k1, k0), beta, _) in ops.iter() {
            if k1 > max_left || k0 > max_right {
                return Err(Error::invalid(format!("slot ({k1}, {k0}) exceeds the arity cutoffs")));
            }
            if beta.lambda.is_negative() || beta.lambda >= left.energy_cutoff {
                return Err(Error::invalid(format!("class {beta} is outside [0, cutoff)")));
            }
        }
        let cutoff = left.energy_cutoff;
        Ok(FilteredBimodule {
            basis,
            left,
            right,
            ops,
            energy_cutoff: cutoff,
            max_left,
            max_right,
            exact_below: cutoff,
        })
    }

    pub fn field(&self) -> Field {
        self.left.field
    }

    /// The energy-zero differential `n_{0,0,(0,0)}` on basis indices.
    pub fn differential(&self, y: usize) -> SparseVec {
        let mut out = SparseVec::new();
        if let Some(t) = self.ops.get(0, 0, &GapClass::ZERO) {
            if let Some(v) = t.get(&[y]) {
                out = v.clone();
            }
        }
        out
    }

    fn odd_prefix(&self, left: &[usize]) -> bool {
        left.iter().fold(false, |a, &i| a ^ self.left.basis.odd(i))
    }

    /// The total coderivation on one word.
    pub fn coderivation(&self, word: &BiWord, m: Monomial, below: Energy) -> BiBar {
        let (l, y, r) = word;
        let field = self.field();
        let one = field.one();
        let mut out = BiBar::new();
        let left_bar = BarElement::single((m, l.clone()), one.clone());
        let left_trunc = Truncation {
            energy: below,
            max_len: self.max_left,
        };
        for ((m2, w), c) in coderivation_extend(&self.left.ops, &self.left.basis, &left_bar, left_trunc).iter() {
            out.add_term((*m2, (w.clone(), *y, r.clone())), c.clone());
        }
        for a in 0..=l.len() {
            for c0 in 0..=r.len() {
                let split = l.len() - a;
                let value = self.ops.eval(&l[split..], *y, &r[..c0]);
                if value.is_zero() {
                    continue;
                }
                let negate = self.odd_prefix(&l[..split]);
                for ((m2, o), c) in value.iter() {
                    let mono = m * *m2;
                    if mono.lambda >= below {
                        continue;
                    }
                    let word = (l[..split].to_vec(), *o, r[c0..].to_vec());
                    out.add_term((mono, word), c.clone().signed(negate));
                }
            }
        }
        let negate = self.odd_prefix(l) ^ self.basis.odd(*y);
        let right_bar = BarElement::single((m, r.clone()), one);
        let right_trunc = Truncation {
            energy: below,
            max_len: self.max_right,
        };
        for ((m2, w), c) in coderivation_extend(&self.right.ops, &self.right.basis, &right_bar, right_trunc).iter() {
            out.add_term((*m2, (l.clone(), *y, w.clone())), c.clone().signed(negate));
        }
        out
    }

    /// Energy below which relations on `(k1, k0)` words are decidable.
    pub fn horizon(&self, k1: usize, k0: usize) -> Energy {
        let mut h = self.exact_below.min(self.energy_cutoff);
        for j in 0..=k1 {
            if let Some(e) = self.left.exactness.known(j) {
                h = h.min(e);
            }
        }
        for j in 0..=k0 {
            if let Some(e) = self.right.exactness.known(j) {
                h = h.min(e);
            }
        }
        h
    }
}

/// All basis words with `k1` left letters and `k0` right letters.
pub fn biwords(d: &FilteredBimodule, k1: usize, k0: usize) -> Vec<BiWord> {
    let mut out = Vec::new();
    for l in words(d.left.dim(), k1) {
        for y in 0..d.basis.len() {
            for r in words(d.right.dim(), k0) {
                out.push((l.clone(), y, r));
            }
        }
    }
    out
}

fn biword_names(d: &FilteredBimodule, w: &BiWord) -> Vec<String> {
    let mut out: Vec<String> = w.0.iter().map(|&i| d.left.basis.name(i).to_string()).collect();
    out.push(format!("[{}]", d.basis.name(w.1)));
    out.extend(w.2.iter().map(|&i| d.right.basis.name(i).to_string()));
    out
}

/// Residual of `n_{*,*} o d^_n` on every basis word within the cutoffs.
pub fn verify_bimodule(d: &FilteredBimodule) -> Report {
    let mut report = Report::new("bimodule relations");
    for k1 in 0..=d.max_left {
        for k0 in 0..=d.max_right {
            let h = d.horizon(k1, k0);
            let arity = k1 + k0 + 1;
            report
                .horizons
                .entry(arity)
                .and_modify(|x| *x = (*x).min(h))
                .or_insert(h);
            let ws = biwords(d, k1, k0);
            let found: Vec<(BiWord, Chain)> = ws
                .par_iter()
                .filter_map(|w| {
                    let dx = d.coderivation(w, Monomial::ONE, h);
                    let r = d.ops.apply(&dx, h);
                    (!r.is_zero()).then(|| (w.clone(), r))
                })
                .collect();
            for (w, r) in found {
                report.push_residual(arity, biword_names(d, &w), &r, &d.basis);
            }
        }
    }
    report.sort();
    report
}

/// `n00 n00(y) + n10(m0, y) + (-1)^{deg' y} n01(y, m0)` on every `y`,
/// written out directly.
pub fn curvature_identity(d: &FilteredBimodule) -> Report {
    let mut report = Report::new("curvature identity");
    let h = d.horizon(1, 1);
    let m0_left = d.left.curvature();
    let m0_right = d.right.curvature();
    for y in 0..d.basis.len() {
        let mut r = Chain::new();
        for ((m, z), c) in d.ops.eval(&[], y, &[]).iter() {
            for ((m2, o), c2) in d.ops.eval(&[], *z, &[]).iter() {
                r.add_term((*m * *m2, *o), c * c2);
            }
        }
        for ((m, x), c) in m0_left.iter() {
            for ((m2, o), c2) in d.ops.eval(&[*x], y, &[]).iter() {
                r.add_term((*m * *m2, *o), c * c2);
            }
        }
        for ((m, z), c) in m0_right.iter() {
            for ((m2, o), c2) in d.ops.eval(&[], y, &[*z]).iter() {
                r.add_term((*m * *m2, *o), (c * c2).signed(d.basis.odd(y)));
            }
        }
        r.retain(|(m, _)| m.lambda < h);
        report.push_residual(1, vec![d.basis.name(y).to_string()], &r, &d.basis);
    }
    report.horizons.insert(1, h);
    report.sort();
    report
}

/// `n^{b0,b1}(x, y, z) = n(e^{b1} x_1 e^{b1} .. x_k1 e^{b1}, y, e^{b0} z_1 .. e^{b0})`.
pub fn deform_bimodule(d: &FilteredBimodule, b0: &Chain, b1: &Chain) -> Result<FilteredBimodule> {
    check_candidate(&d.right.basis, b0)?;
    check_candidate(&d.left.basis, b1)?;
    if b0.is_zero() && b1.is_zero() {
        return Ok(d.clone());
    }
    let field = d.field();
    let below = d.exact_below.min(d.energy_cutoff);
    let lt = Truncation {
        energy: below,
        max_len: d.max_left,
    };
    let rt = Truncation {
        energy: below,
        max_len: d.max_right,
    };
    let e1 = exp_bar(b1, field, lt)?;
    let e0 = exp_bar(b0, field, rt)?;
    let mut ops = BiFamily::new();
    for k1 in 0..=d.max_left {
        for k0 in 0..=d.max_right {
            let ws = biwords(d, k1, k0);
            let outs: Vec<(BiWord, Chain)> = ws
                .par_iter()
                .map(|w| {
                    let left = interleave(&e1, &w.0, field, lt);
                    let right = interleave(&e0, &w.2, field, rt);
                    let mut arg = BiBar::new();
                    for ((ml, l), cl) in left.iter() {
                        for ((mr, r), cr) in right.iter() {
                            let m = *ml * *mr;
                            if m.lambda < below {
                                arg.add_term((m, (l.clone(), w.1, r.clone())), cl * cr);
                            }
                        }
                    }
                    (w.clone(), d.ops.apply(&arg, below))
                })
                .collect();
            for (w, out) in outs {
                let mut word = w.0.clone();
                word.push(w.1);
                word.extend_from_slice(&w.2);
                for ((m, o), c) in out {
                    ops.add_entry(k1, k0, m.class(), word.clone(), &SparseVec::single(o, c));
                }
            }
        }
    }
    let left = crate::ainfty::deform_by_b(&d.left, b1)?;
    let right = crate::ainfty::deform_by_b(&d.right, b0)?;
    let mut out = FilteredBimodule::new(d.basis.clone(), left, right, ops, d.max_left, d.max_right)?;
    out.exact_below = below;
    Ok(out)
}

/// The algebra as a bimodule over itself: `n_{k1,k0} = m_{k1+k0+1}`.
pub fn diagonal(a: &FilteredAInfinity, max_left: usize, max_right: usize) -> Result<FilteredBimodule> {
    let mut ops = BiFamily::new();
    for (k, beta, t) in a.ops.iter() {
        for k1 in 0..k {
            let k0 = k - 1 - k1;
            if k1 > max_left || k0 > max_right {
                continue;
            }
            for (w, v) in t.entries() {
                ops.add_entry(k1, k0, *beta, w.clone(), v);
            }
        }
    }
    FilteredBimodule::new(a.basis.clone(), a.clone(), a.clone(), ops, max_left, max_right)
}

/// A differential graded bimodule over two DGAs.
#[derive(Clone, Debug)]
pub struct DgBimodule {
    pub basis: GradedBasis,
    pub differential: Vec<SparseVec>,
    /// `x . y` for `x` in the left algebra.
    pub left_action: BTreeMap<(usize, usize), SparseVec>,
    /// `y . z` for `z` in the right algebra.
    pub right_action: BTreeMap<(usize, usize), SparseVec>,
}

/// Imports a DG bimodule with the same sign rules as for DGAs:
/// `n00(y) = (-1)^{deg y} dy`, `n10(x, y) = (-1)^{deg x (deg y + 1)} x.y`,
/// `n01(y, z) = (-1)^{deg y (deg z + 1)} y.z`.
pub fn from_dg_bimodule(
    m: &DgBimodule,
    left: &FilteredAInfinity,
    right: &FilteredAInfinity,
    max_left: usize,
    max_right: usize,
) -> Result<FilteredBimodule> {
    let f = left.field;
    let sign = |odd: bool| if odd { -f.one() } else { f.one() };
    let deg = |b: &GradedBasis, i: usize| b.degree(i);
    let mut ops = BiFamily::new();
    for (y, v) in m.differential.iter().enumerate() {
        ops.add_entry(
            0,
            0,
            GapClass::ZERO,
            vec![y],
            &v.scaled(&sign(deg(&m.basis, y).rem_euclid(2) == 1)),
        );
    }
    for (&(x, y), v) in &m.left_action {
        let s = sign((deg(&left.basis, x) * (deg(&m.basis, y) + 1)).rem_euclid(2) == 1);
        ops.add_entry(1, 0, GapClass::ZERO, vec![x, y], &v.scaled(&s));
    }
    for (&(y, z), v) in &m.right_action {
        let s = sign((deg(&m.basis, y) * (deg(&right.basis, z) + 1)).rem_euclid(2) == 1);
        ops.add_entry(0, 1, GapClass::ZERO, vec![y, z], &v.scaled(&s));
    }
    FilteredBimodule::new(
        m.basis.clone(),
        left.clone(),
        right.clone(),
        ops,
        max_left.max(1),
        max_right.max(1),
    )
}

/// A DGA as a DG bimodule over itself.
pub fn dga_as_bimodule(a: &Dga) -> DgBimodule {
    DgBimodule {
        basis: a.basis.clone(),
        differential: a.differential.clone(),
        left_action: a.product.clone(),
        right_action: a.product.clone(),
    }
}

/// A homomorphism of bimodules over algebra homomorphisms `left_hom`
/// (`C1 -> C1'`) and `right_hom` (`C0 -> C0'`). Classes may have energy
/// down to `-energy_loss`.
#[derive(Clone, Debug)]
pub struct BimoduleHom {
    pub maps: BiFamily,
    pub energy_loss: Energy,
    pub left_hom: AInfinityHom,
    pub right_hom: AInfinityHom,
}

impl BimoduleHom {
    pub fn identity(d: &FilteredBimodule) -> BimoduleHom {
        let mut maps = BiFamily::new();
        let one = d.field().one();
        for y in 0..d.basis.len() {
            maps.add_entry(0, 0, GapClass::ZERO, vec![y], &SparseVec::single(y, one.clone()));
        }
        BimoduleHom {
            maps,
            energy_loss: Energy::ZERO,
            left_hom: AInfinityHom::identity(&d.left),
            right_hom: AInfinityHom::identity(&d.right),
        }
    }
}

/// `phi^(x (x) y (x) z) = sum f1^(x') (x) phi(x'', y, z') (x) f0^(z'')`.
fn hom_extend(phi: &BimoduleHom, w: &BiWord, below: Energy, d2: &FilteredBimodule) -> Result<BiBar> {
    let (l, y, r) = w;
    let field = d2.field();
    let one = field.one();
    let lt = Truncation {
        energy: below + phi.energy_loss,
        max_len: d2.max_left,
    };
    let rt = Truncation {
        energy: below + phi.energy_loss,
        max_len: d2.max_right,
    };
    let mut out = BiBar::new();
    for p in 0..=l.len() {
        for q in 0..=r.len() {
            let mid = phi.maps.eval(&l[p..], *y, &r[..q]);
            if mid.is_zero() {
                continue;
            }
            let fl = coalgebra_extend(
                &phi.left_hom.maps,
                &BarElement::single((Monomial::ONE, l[..p].to_vec()), one.clone()),
                lt,
            )?;
            let fr = coalgebra_extend(
                &phi.right_hom.maps,
                &BarElement::single((Monomial::ONE, r[q..].to_vec()), one.clone()),
                rt,
            )?;
            for ((mm, o), cm) in mid.iter() {
                for ((ml, wl), cl) in fl.iter() {
                    for ((mr, wr), cr) in fr.iter() {
                        let m = *mm * *ml * *mr;
                        if m.lambda < below {
                            out.add_term((m, (wl.clone(), *o, wr.clone())), &(cm * cl) * cr);
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Checks the declared energy loss, then `phi_* o d^_n = n'_* o phi^` on
/// every basis word, below the source cutoff minus the energy loss.
pub fn verify_bimodule_hom(phi: &BimoduleHom, d: &FilteredBimodule, d2: &FilteredBimodule) -> Result<Report> {
    if phi.energy_loss.is_negative() {
        return Err(Error::invalid("the energy loss must be nonnegative"));
    }
    for ((k1, k0), beta, _) in phi.maps.iter() {
        if beta.lambda + phi.energy_loss < Energy::ZERO {
            return Err(Error::witness(
                "energy loss",
                format!(
                    "(k1 = {k1}, k0 = {k0}, class {beta}) shifts energy by more than {}",
                    phi.energy_loss
                ),
            ));
        }
    }
    phi.maps
        .check_homogeneous(0, &d.left.basis, &d.basis, &d.right.basis, &d2.basis)?;
    for (name, f, a, b) in [
        ("left", &phi.left_hom, &d.left, &d2.left),
        ("right", &phi.right_hom, &d.right, &d2.right),
    ] {
        let r = verify_homomorphism(f, a, b)?;
        if !r.passed() {
            return Err(Error::Verification {
                context: format!("{name} algebra homomorphism"),
                report: Box::new(r),
            });
        }
    }
    let mut report = Report::new("bimodule homomorphism relations");
    for k1 in 0..=d.max_left {
        for k0 in 0..=d.max_right {
            let h = d.horizon(k1, k0).min(d2.horizon(k1, k0)) - phi.energy_loss;
            let arity = k1 + k0 + 1;
            report
                .horizons
                .entry(arity)
                .and_modify(|x| *x = (*x).min(h))
                .or_insert(h);
            let ws = biwords(d, k1, k0);
            let found: Vec<Result<Option<(BiWord, Chain)>>> = ws
                .par_iter()
                .map(|w| {
                    let dx = d.coderivation(w, Monomial::ONE, h + phi.energy_loss);
                    let mut r = phi.maps.apply(&dx, h);
                    let fx = hom_extend(phi, w, h, d2)?;
                    r.sub_all(&d2.ops.apply(&fx, h));
                    Ok((!r.is_zero()).then(|| (w.clone(), r)))
                })
                .collect();
            for item in found {
                if let Some((w, r)) = item? {
                    report.push_residual(arity, biword_names(d, &w), &r, &d2.basis);
                }
            }
        }
    }
    if phi.energy_loss.is_zero() {
        for y in 0..d.basis.len() {
            let zero = |c: &Chain| -> Chain {
                c.iter()
                    .filter(|((m, _), _)| m.lambda.is_zero())
                    .map(|(k, c)| (*k, c.clone()))
                    .collect()
            };
            let mut lhs = Chain::new();
            for ((_, z), c) in zero(&d.ops.eval(&[], y, &[])).iter() {
                lhs.add_scaled(&zero(&phi.maps.eval(&[], *z, &[])), c);
            }
            let mut rhs = Chain::new();
            for ((_, z), c) in zero(&phi.maps.eval(&[], y, &[])).iter() {
                rhs.add_scaled(&zero(&d2.ops.eval(&[], *z, &[])), c);
            }
            if lhs != rhs {
                report.push(ReportEntry::violation(
                    1,
                    Energy::ZERO,
                    vec![d.basis.name(y).to_string()],
                    "the energy-zero part of phi_00 is not a chain map",
                ));
            }
        }
    }
    report.sort();
    Ok(report)
}

/// Minimal valuation of a pair of cochains, for reporting.
pub fn pair_valuation(b0: &Chain, b1: &Chain) -> Option<Energy> {
    match (valuation(b0), valuation(b1)) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, None) => a,
        (None, b) => b,
    }
}
