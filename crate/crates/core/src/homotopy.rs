//! The interval model `[0,1] x C`: three copies of the basis (the middle one
//! raised by one degree), the inclusion and the two evaluations, and
//! witness-based checks of homotopy and gauge equivalence.

use crate::ainfty::{
    check_candidate, compose_homomorphisms, mc_residual, min_opt, verify_homomorphism, AInfinityHom, FilteredAInfinity,
};
use crate::complex::{valuation, Chain, GappedFamily, GradedBasis, SparseVec};
use crate::error::{Error, Result};
use crate::linalg::{indices_by_degree, is_quasi_isomorphism, Matrix};
use crate::novikov::{Energy, GapClass};
use crate::report::{Report, ReportEntry};

/// Which copy of `C` a model basis element lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    Start,
    Middle,
    End,
}

#[derive(Clone, Debug)]
pub struct IntervalModel {
    pub algebra: FilteredAInfinity,
    pub incl: AInfinityHom,
    pub eval0: AInfinityHom,
    pub eval1: AInfinityHom,
    /// Dimension of the underlying algebra.
    pub base_dim: usize,
}

impl IntervalModel {
    pub fn index(&self, copy: Slot, i: usize) -> usize {
        model_index(self.base_dim, copy, i)
    }

    /// Pushes a chain of `C` into one copy.
    pub fn embed(&self, copy: Slot, x: &Chain) -> Chain {
        x.iter()
            .map(|((m, i), c)| ((*m, self.index(copy, *i)), c.clone()))
            .collect()
    }
}

fn model_index(n: usize, copy: Slot, i: usize) -> usize {
    match copy {
        Slot::Start => i,
        Slot::Middle => n + i,
        Slot::End => 2 * n + i,
    }
}

fn strict(n_src: usize, image: impl Fn(usize) -> SparseVec, a: &FilteredAInfinity) -> AInfinityHom {
    let mut maps = GappedFamily::new(0);
    for i in 0..n_src {
        let v = image(i);
        if !v.is_zero() {
            maps.add_entry(1, GapClass::ZERO, vec![i], &v);
        }
    }
    AInfinityHom {
        maps,
        exactness: crate::ainfty::Exactness::exact(a.arity_cutoff, a.energy_cutoff),
    }
}

/// Builds the model with exactly the listed operations; everything else is
/// zero. The output is re-verified.
pub fn build_interval_model(a: &FilteredAInfinity) -> Result<IntervalModel> {
    let n = a.dim();
    let field = a.field;
    let one = field.one();
    let mut elements = Vec::with_capacity(3 * n);
    for (prefix, shift) in [("0", 0), ("I", 1), ("1", 0)] {
        for i in 0..n {
            elements.push((format!("{prefix}:{}", a.basis.name(i)), a.basis.degree(i) + shift));
        }
    }
    let basis = GradedBasis::new(elements)?;
    let idx = |c: Slot, i: usize| model_index(n, c, i);
    let move_to = |c: Slot, v: &SparseVec| -> SparseVec { v.iter().map(|(&o, s)| (idx(c, o), s.clone())).collect() };
    let sign = |odd: bool| if odd { -one.clone() } else { one.clone() };

    let mut ops = GappedFamily::new(1);
    for (k, beta, t) in a.ops.iter() {
        for (w, v) in t.entries() {
            for end in [Slot::Start, Slot::End] {
                let word = w.iter().map(|&i| idx(end, i)).collect();
                ops.add_entry(k, *beta, word, &move_to(end, v));
            }
            for p in 0..k {
                let word: Vec<usize> = w
                    .iter()
                    .enumerate()
                    .map(|(j, &i)| {
                        let c = match j.cmp(&p) {
                            std::cmp::Ordering::Less => Slot::Start,
                            std::cmp::Ordering::Equal => Slot::Middle,
                            std::cmp::Ordering::Greater => Slot::End,
                        };
                        idx(c, i)
                    })
                    .collect();
                let tail: i64 = w[p + 1..].iter().map(|&i| a.basis.shifted(i)).sum();
                let out = move_to(Slot::Middle, v).scaled(&sign(tail.rem_euclid(2) == 1));
                ops.add_entry(k, *beta, word, &out);
            }
        }
    }
    for i in 0..n {
        let s = sign(a.basis.shifted(i).rem_euclid(2) == 1);
        let mid = SparseVec::single(idx(Slot::Middle, i), s.clone());
        ops.add_entry(1, GapClass::ZERO, vec![idx(Slot::Start, i)], &mid);
        ops.add_entry(1, GapClass::ZERO, vec![idx(Slot::End, i)], &mid.scaled(&-one.clone()));
    }

    let mut algebra = FilteredAInfinity::new(
        field,
        basis,
        ops,
        a.energy_cutoff,
        a.arity_cutoff,
        Some(a.monoid.clone()),
        Some(a.exactness.clone()),
    )?;
    let incl = strict(
        n,
        |i| {
            let mut v = SparseVec::single(idx(Slot::Start, i), one.clone());
            v.add_term(idx(Slot::End, i), one.clone());
            v
        },
        a,
    );
    let eval_at = |c: Slot| {
        strict(
            3 * n,
            |j| {
                let (copy, i) = (j / n, j % n);
                let hit = matches!((c, copy), (Slot::Start, 0) | (Slot::End, 2));
                if hit {
                    SparseVec::single(i, one.clone())
                } else {
                    SparseVec::new()
                }
            },
            a,
        )
    };
    let eval0 = eval_at(Slot::Start);
    let eval1 = eval_at(Slot::End);
    algebra = algebra.into_verified()?;
    Ok(IntervalModel {
        algebra,
        incl,
        eval0,
        eval1,
        base_dim: n,
    })
}

fn axiom(report: &mut Report, message: String) {
    report.push(ReportEntry::violation(1, Energy::ZERO, Vec::new(), message));
}

fn concentrated(f: &AInfinityHom) -> bool {
    f.maps.iter().all(|(k, b, _)| k == 1 && b.is_zero())
}

/// Checks the model axioms: the structure maps are homomorphisms
/// concentrated in `(1, 0)`, `Incl` and `Eval_0` are quasi-isomorphisms,
/// `Eval_i o Incl = id`, and `Eval_0 + Eval_1` is onto in every degree.
pub fn verify_model_axioms(m: &IntervalModel, a: &FilteredAInfinity) -> Result<Report> {
    let mut report = Report::new("interval model axioms");
    let model = &m.algebra;
    for (name, f, src, tgt) in [
        ("Incl", &m.incl, a, model),
        ("Eval0", &m.eval0, model, a),
        ("Eval1", &m.eval1, model, a),
    ] {
        if !concentrated(f) {
            axiom(&mut report, format!("{name} has components outside arity 1, energy 0"));
        }
        let r = verify_homomorphism(f, src, tgt)?;
        for mut e in r.entries {
            e.message = format!("{name} is not a homomorphism");
            report.push(e);
        }
    }
    let field = a.field;
    let (n, nm) = (a.dim(), model.dim());
    let incl = m.incl.linear_part(n, nm, field);
    let e0 = m.eval0.linear_part(nm, n, field);
    let e1 = m.eval1.linear_part(nm, n, field);
    let (d, dm) = (a.differential(), model.differential());
    if !is_quasi_isomorphism(&incl, &d, a.basis.degrees(), &dm, model.basis.degrees()) {
        axiom(&mut report, "Incl is not a quasi-isomorphism".into());
    }
    if !is_quasi_isomorphism(&e0, &dm, model.basis.degrees(), &d, a.basis.degrees()) {
        axiom(&mut report, "Eval0 is not a quasi-isomorphism".into());
    }
    let id = Matrix::identity(field, n);
    if e0.mul(&incl) != id {
        axiom(&mut report, "Eval0 o Incl is not the identity".into());
    }
    if e1.mul(&incl) != id {
        axiom(&mut report, "Eval1 o Incl is not the identity".into());
    }
    let mut both = Matrix::zeros(field, 2 * n, nm);
    for r in 0..n {
        for c in 0..nm {
            both.set(r, c, e0.get(r, c).clone());
            both.set(n + r, c, e1.get(r, c).clone());
        }
    }
    let src = indices_by_degree(model.basis.degrees());
    let tgt = indices_by_degree(a.basis.degrees());
    for (deg, rows) in &tgt {
        let rows2: Vec<usize> = rows.iter().copied().chain(rows.iter().map(|r| n + r)).collect();
        let cols = src.get(deg).cloned().unwrap_or_default();
        if both.select(&rows2, &cols).rank() != rows2.len() {
            axiom(&mut report, format!("Eval0 + Eval1 is not onto in degree {deg}"));
        }
    }
    Ok(report)
}

/// Compares two homomorphisms word by word below their common horizons.
fn compare_homs(
    label: &str,
    got: &AInfinityHom,
    want: &AInfinityHom,
    source: &FilteredAInfinity,
    target: &FilteredAInfinity,
    report: &mut Report,
) {
    let top = got.exactness.arity_cutoff().min(want.exactness.arity_cutoff());
    for k in 0..=top {
        let h = min_opt(got.exactness.known(k), want.exactness.known(k))
            .unwrap_or(source.energy_cutoff)
            .min(source.energy_cutoff);
        for w in crate::complex::words(source.dim(), k) {
            let mut diff = got.maps.eval(&w);
            diff.sub_all(&want.maps.eval(&w));
            diff.retain(|(m, _)| m.lambda < h);
            if !diff.is_zero() {
                let names = w.iter().map(|&i| source.basis.name(i).to_string()).collect();
                let before = report.entries.len();
                report.push_residual(k, names, &diff, &target.basis);
                for e in &mut report.entries[before..] {
                    e.message = label.to_string();
                }
            }
        }
    }
}

/// Certifies `f0 ~ f1` via `F: C1 -> model of C2`.
pub fn check_homotopy(
    f0: &AInfinityHom,
    f1: &AInfinityHom,
    big_f: &AInfinityHom,
    source: &FilteredAInfinity,
    target: &FilteredAInfinity,
    m: &IntervalModel,
) -> Result<Report> {
    let mut report = verify_homomorphism(big_f, source, &m.algebra)?;
    report.check = "homotopy witness".into();
    for (label, eval, f) in [
        ("Eval0 o F differs from f0", &m.eval0, f0),
        ("Eval1 o F differs from f1", &m.eval1, f1),
    ] {
        let composite = compose_homomorphisms(big_f, eval, source, &m.algebra, target)?;
        compare_homs(label, &composite, f, source, target, &mut report);
    }
    report.sort();
    Ok(report)
}

/// Certifies `b ~ b'` via a Maurer-Cartan element `bt` of the model.
pub fn check_gauge_equivalence(b: &Chain, b_prime: &Chain, bt: &Chain, m: &IntervalModel) -> Result<Report> {
    if valuation(bt).is_some_and(|v| !v.is_positive()) {
        return Err(Error::invalid("the gauge witness needs positive valuation"));
    }
    check_candidate(&m.algebra.basis, bt)?;
    let r = mc_residual(&m.algebra, bt)?;
    let mut report = Report::new("gauge equivalence");
    report.horizons.insert(0, r.horizon);
    report.push_residual(0, vec!["witness".into()], &r.residual, &m.algebra.basis);
    let n = m.base_dim;
    let base_basis =
        GradedBasis::new((0..n).map(|i| (m.algebra.basis.name(i)[2..].to_string(), m.algebra.basis.degree(i))))?;
    for (label, eval, want) in [
        ("Eval0(witness) differs from b", &m.eval0, b),
        ("Eval1(witness) differs from b'", &m.eval1, b_prime),
    ] {
        let mut diff = eval.apply_linear(bt);
        diff.sub_all(want);
        diff.retain(|(mono, _)| mono.lambda < r.horizon);
        let before = report.entries.len();
        report.push_residual(1, vec!["witness".into()], &diff, &base_basis);
        for e in &mut report.entries[before..] {
            e.severity = crate::report::Severity::Violation;
            e.message = label.into();
        }
    }
    report.sort();
    Ok(report)
}

/// Whether `f_{1,0}` induces isomorphisms on the cohomology of the
/// energy-zero differentials.
pub fn is_weak_homotopy_equivalence(f: &AInfinityHom, a: &FilteredAInfinity, target: &FilteredAInfinity) -> bool {
    let lin = f.linear_part(a.dim(), target.dim(), a.field);
    is_quasi_isomorphism(
        &lin,
        &a.differential(),
        a.basis.degrees(),
        &target.differential(),
        target.basis.degrees(),
    )
}

/// `Incl o f` as a homotopy witness of `f ~ f`.
pub fn reflexive_witness(
    f: &AInfinityHom,
    source: &FilteredAInfinity,
    target: &FilteredAInfinity,
    m: &IntervalModel,
) -> Result<AInfinityHom> {
    compose_homomorphisms(f, &m.incl, source, target, &m.algebra)
}

/// `Incl(b)` as a gauge witness of `b ~ b`.
pub fn reflexive_gauge(b: &Chain, m: &IntervalModel) -> Chain {
    let mut out = m.embed(Slot::Start, b);
    out.add_all(&m.embed(Slot::End, b));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ainfty::{from_dga, verify_ainfty, Dga};
    use crate::linalg::cohomology_ranks;
    use crate::novikov::{Field, Monomial};
    use std::collections::BTreeMap;

    fn q() -> Field {
        Field::Rational
    }

    fn point() -> FilteredAInfinity {
        let basis = GradedBasis::new([("p", 0)]).unwrap();
        FilteredAInfinity::new(q(), basis, GappedFamily::new(1), Energy::int(2), 2, None, None).unwrap()
    }

    /// u in degree 0, v in degree 1, m1 u = v.
    fn arrow() -> FilteredAInfinity {
        let dga = Dga {
            field: q(),
            basis: GradedBasis::new([("u", 0), ("v", 1)]).unwrap(),
            differential: vec![SparseVec::single(1, q().one()), SparseVec::new()],
            product: BTreeMap::new(),
        };
        let mut a = from_dga(&dga, Energy::int(3), 2).unwrap();
        a.exactness.tail_zero = true;
        a
    }

    #[test]
    fn point_model() {
        let a = point();
        let m = build_interval_model(&a).unwrap();
        assert!(verify_ainfty(&m.algebra).passed());
        let d = m.algebra.differential();
        // deg' p = -1
        assert_eq!(d.get(1, 0), &(-q().one()));
        assert_eq!(d.get(1, 2), &q().one());
        let h = cohomology_ranks(&d, m.algebra.basis.degrees());
        assert_eq!(h.get(&0), Some(&1));
        assert_eq!(h.get(&1), Some(&0));
        assert!(verify_model_axioms(&m, &a).unwrap().passed());
    }

    #[test]
    fn dropping_the_middle_breaks_equivalence() {
        let a = point();
        let m = build_interval_model(&a).unwrap();
        let keep = |j: usize| j != 1;
        let ops = m.algebra.ops.filtered(|_, _| true);
        let mut trimmed = GappedFamily::new(1);
        for (k, b, t) in ops.iter() {
            for (w, v) in t.entries() {
                if w.iter().all(|&j| keep(j)) {
                    let v2: SparseVec = v
                        .iter()
                        .filter(|(o, _)| keep(**o))
                        .map(|(o, c)| (if *o == 2 { 1 } else { *o }, c.clone()))
                        .collect();
                    let w2 = w.iter().map(|&j| if j == 2 { 1 } else { j }).collect();
                    trimmed.add_entry(k, *b, w2, &v2);
                }
            }
        }
        let basis = GradedBasis::new([("0:p", 0), ("1:p", 0)]).unwrap();
        let alg = FilteredAInfinity::new(q(), basis, trimmed, Energy::int(2), 2, None, None).unwrap();
        let incl = AInfinityHom::linear(&Matrix::from_fn(q(), 2, 1, |_, _| q().one()), 2, Energy::int(2));
        let e0 = AInfinityHom::linear(
            &Matrix::from_fn(q(), 1, 2, |_, c| if c == 0 { q().one() } else { q().zero() }),
            2,
            Energy::int(2),
        );
        let e1 = AInfinityHom::linear(
            &Matrix::from_fn(q(), 1, 2, |_, c| if c == 1 { q().one() } else { q().zero() }),
            2,
            Energy::int(2),
        );
        let bad = IntervalModel {
            algebra: alg,
            incl,
            eval0: e0.clone(),
            eval1: e1,
            base_dim: 1,
        };
        let r = verify_model_axioms(&bad, &a).unwrap();
        assert!(r.entries.iter().any(|e| e.message.contains("quasi-isomorphism")));
        assert!(!r.entries.iter().any(|e| e.message.contains("onto")));
        let twin = IntervalModel {
            eval1: m.eval0.clone(),
            ..m
        };
        let r = verify_model_axioms(&twin, &a).unwrap();
        assert!(r.entries.iter().any(|e| e.message.contains("onto")));
    }

    #[test]
    fn arrow_model_and_gauge() {
        let a = arrow();
        let m = build_interval_model(&a).unwrap();
        assert!(verify_model_axioms(&m, &a).unwrap().passed());
        let t = Monomial::new(Energy::int(1), 0);
        let b = Chain::single((t, 1), q().from_i64(2));
        let b2 = Chain::single((t, 1), q().from_i64(5));
        let mut bt = m.embed(Slot::Start, &b);
        bt.add_all(&m.embed(Slot::End, &b2));
        bt.add_all(&m.embed(Slot::Middle, &Chain::single((t, 0), q().from_i64(3))));
        assert!(check_gauge_equivalence(&b, &b2, &bt, &m).unwrap().passed());
        assert!(check_gauge_equivalence(&b, &b, &reflexive_gauge(&b, &m), &m)
            .unwrap()
            .passed());
        let r = check_gauge_equivalence(&b, &b, &bt, &m).unwrap();
        assert!(r.entries.iter().any(|e| e.message.contains("Eval1")));
        let zero = Chain::single((Monomial::ONE, m.index(Slot::Middle, 0)), q().one());
        assert!(check_gauge_equivalence(&b, &b, &zero, &m).is_err());
    }

    #[test]
    fn homotopy_witnesses() {
        let a = arrow();
        let m = build_interval_model(&a).unwrap();
        let id = AInfinityHom::identity(&a);
        let w = reflexive_witness(&id, &a, &a, &m).unwrap();
        assert!(check_homotopy(&id, &id, &w, &a, &a, &m).unwrap().passed());
        let zero = AInfinityHom::new(GappedFamily::new(0), id.exactness.clone()).unwrap();
        let r = check_homotopy(&zero, &id, &w, &a, &a, &m).unwrap();
        assert!(!r.passed());
        assert!(r.entries.iter().all(|e| e.message.contains("f0")));
        assert_eq!(r.entries[0].arity, 1);
        let mut broken = w.maps.clone();
        broken.add_entry(
            1,
            GapClass::ZERO,
            vec![0],
            &SparseVec::single(m.index(Slot::Start, 0), q().one()),
        );
        let bad = AInfinityHom::new(broken, w.exactness.clone()).unwrap();
        let r = check_homotopy(&id, &id, &bad, &a, &a, &m).unwrap();
        assert!(r.entries.iter().any(|e| e.message.is_empty()));
    }

    #[test]
    fn weak_equivalences() {
        let a = arrow();
        let p = point();
        let id = AInfinityHom::identity(&a);
        assert!(is_weak_homotopy_equivalence(&id, &a, &a));
        let zero = AInfinityHom::new(GappedFamily::new(0), id.exactness.clone()).unwrap();
        assert!(is_weak_homotopy_equivalence(&zero, &a, &a));
        let pzero = AInfinityHom::new(GappedFamily::new(0), id.exactness.clone()).unwrap();
        assert!(!is_weak_homotopy_equivalence(&pzero, &p, &p));
        let m = build_interval_model(&p).unwrap();
        assert!(is_weak_homotopy_equivalence(&m.incl, &p, &m.algebra));
        assert!(is_weak_homotopy_equivalence(&m.eval1, &m.algebra, &p));
    }

    #[test]
    fn model_of_algebra_with_products_and_curvature() {
        // Exterior algebra on x, y plus a curvature T c with c central of degree 2.
        let basis = GradedBasis::new([("1", 0), ("x", 1), ("y", 1), ("c", 2)]).unwrap();
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
        let dga = Dga {
            field: q(),
            basis,
            differential: vec![SparseVec::new(); 4],
            product,
        };
        let a = from_dga(&dga, Energy::int(2), 3).unwrap();
        let mut ops = a.ops.clone();
        ops.add_entry(
            0,
            GapClass::new(Energy::int(1), 0).unwrap(),
            vec![],
            &SparseVec::single(3, one.clone()),
        );
        let curved = FilteredAInfinity::new(q(), a.basis.clone(), ops, Energy::int(2), 3, None, None).unwrap();
        assert!(verify_ainfty(&curved).passed());
        for alg in [a, curved] {
            let m = build_interval_model(&alg).unwrap();
            assert!(verify_model_axioms(&m, &alg).unwrap().passed());
        }
    }
}
