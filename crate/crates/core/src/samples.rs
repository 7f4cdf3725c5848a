//! Reproducible random inputs: associative DGAs built from small blocks by
//! tensor products and basis changes, transfer data from randomized
//! cancellations, and filtered algebras obtained by adding a central
//! curvature and deforming.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ainfty::{deform_by_b, from_dga, Dga, FilteredAInfinity};
use crate::complex::{Chain, GradedBasis, SparseVec};
use crate::error::Result;
use crate::linalg::{indices_by_degree, Matrix, Reducer};
use crate::novikov::{Energy, Field, GapClass, Monomial, Scalar};
use crate::transfer::{normalize_homotopy, TransferData};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A unital DGA; `unit` is the unit as a vector.
#[derive(Clone, Debug)]
pub struct Sample {
    pub dga: Dga,
    pub unit: SparseVec,
    pub label: String,
}

fn build(
    field: Field,
    names: &[(&str, i64)],
    d: &[(usize, usize, i64)],
    mul: &[(usize, usize, usize, i64)],
    unit: SparseVec,
    label: &str,
) -> Sample {
    let basis = GradedBasis::new(names.iter().map(|(n, k)| (n.to_string(), *k))).expect("distinct names");
    let mut differential = vec![SparseVec::new(); names.len()];
    for &(i, o, c) in d {
        differential[i].add_term(o, field.from_i64(c));
    }
    let mut product: BTreeMap<(usize, usize), SparseVec> = BTreeMap::new();
    for &(i, j, o, c) in mul {
        product.entry((i, j)).or_default().add_term(o, field.from_i64(c));
    }
    Sample {
        dga: Dga {
            field,
            basis,
            differential,
            product,
        },
        unit,
        label: label.into(),
    }
}

fn unit_products(n: usize, unit: usize) -> Vec<(usize, usize, usize, i64)> {
    let mut out = Vec::new();
    for i in 0..n {
        out.push((unit, i, i, 1));
        if i != unit {
            out.push((i, unit, i, 1));
        }
    }
    out
}

/// Exterior algebra on `x, y, z` in degree 1 with `dz = xy`.
pub fn heisenberg(field: Field) -> Sample {
    let names = [
        ("1", 0),
        ("x", 1),
        ("y", 1),
        ("z", 1),
        ("xy", 2),
        ("xz", 2),
        ("yz", 2),
        ("xyz", 3),
    ];
    let mut mul = unit_products(8, 0);
    mul.extend([
        (1, 2, 4, 1),
        (2, 1, 4, -1),
        (1, 3, 5, 1),
        (3, 1, 5, -1),
        (2, 3, 6, 1),
        (3, 2, 6, -1),
        (1, 6, 7, 1),
        (6, 1, 7, 1),
        (2, 5, 7, -1),
        (5, 2, 7, -1),
        (4, 3, 7, 1),
        (3, 4, 7, 1),
    ]);
    build(
        field,
        &names,
        &[(3, 4, 1)],
        &mul,
        SparseVec::single(0, field.one()),
        "heisenberg",
    )
}

/// `1, x, y` with `dx = y` in degrees 1, 2 and all products of `x, y` zero.
pub fn cone(field: Field) -> Sample {
    build(
        field,
        &[("1", 0), ("x", 1), ("y", 2)],
        &[(1, 2, 1)],
        &unit_products(3, 0),
        SparseVec::single(0, field.one()),
        "cone",
    )
}

/// Exterior on `x` (degree 1) times truncated polynomial on `y` (degree 2),
/// `dx = y`.
pub fn exterior_truncated(field: Field) -> Sample {
    let mut mul = unit_products(4, 0);
    mul.extend([(1, 2, 3, 1), (2, 1, 3, 1)]);
    build(
        field,
        &[("1", 0), ("x", 1), ("y", 2), ("xy", 3)],
        &[(1, 2, 1)],
        &mul,
        SparseVec::single(0, field.one()),
        "exterior-truncated",
    )
}

/// Dual numbers `1, e` with `e` in degree 1 and `e e = 0`.
pub fn dual_numbers(field: Field) -> Sample {
    build(
        field,
        &[("1", 0), ("e", 1)],
        &[],
        &unit_products(2, 0),
        SparseVec::single(0, field.one()),
        "dual",
    )
}

/// Upper triangular 2x2 matrices with the off-diagonal unit in degree 1 and
/// `d e11 = e12 = -d e22`.
pub fn triangular(field: Field) -> Sample {
    let mul = [(0, 0, 0, 1), (2, 2, 2, 1), (0, 1, 1, 1), (1, 2, 1, 1)];
    let mut unit = SparseVec::single(0, field.one());
    unit.add_term(2, field.one());
    build(
        field,
        &[("e11", 0), ("e12", 1), ("e22", 0)],
        &[(0, 1, 1), (2, 1, -1)],
        &mul,
        unit,
        "triangular",
    )
}

/// Graded tensor product: `d(a b) = da b + (-1)^|a| a db`,
/// `(a b)(a' b') = (-1)^{|b||a'|} aa' bb'`.
pub fn tensor(x: &Sample, y: &Sample) -> Sample {
    let (a, b) = (&x.dga, &y.dga);
    let f = a.field;
    let (na, nb) = (a.basis.len(), b.basis.len());
    let idx = |i: usize, j: usize| i * nb + j;
    let names: Vec<(String, i64)> = (0..na)
        .flat_map(|i| {
            (0..nb).map(move |j| {
                (
                    format!("{}.{}", a.basis.name(i), b.basis.name(j)),
                    a.basis.degree(i) + b.basis.degree(j),
                )
            })
        })
        .collect();
    let sign = |odd: bool| if odd { -f.one() } else { f.one() };
    let mut differential = vec![SparseVec::new(); na * nb];
    for i in 0..na {
        for j in 0..nb {
            let out = &mut differential[idx(i, j)];
            for (&o, c) in a.differential[i].iter() {
                out.add_term(idx(o, j), c.clone());
            }
            let s = sign(a.basis.degree(i).rem_euclid(2) == 1);
            for (&o, c) in b.differential[j].iter() {
                out.add_term(idx(i, o), &s * c);
            }
        }
    }
    let mut product: BTreeMap<(usize, usize), SparseVec> = BTreeMap::new();
    for (&(i, i2), pa) in &a.product {
        for (&(j, j2), pb) in &b.product {
            let s = sign((b.basis.degree(j) * a.basis.degree(i2)).rem_euclid(2) == 1);
            let slot = product.entry((idx(i, j), idx(i2, j2))).or_default();
            for (&oa, ca) in pa.iter() {
                for (&ob, cb) in pb.iter() {
                    slot.add_term(idx(oa, ob), &s * &(ca * cb));
                }
            }
        }
    }
    product.retain(|_, v| !v.is_zero());
    let mut unit = SparseVec::new();
    for (&i, ci) in x.unit.iter() {
        for (&j, cj) in y.unit.iter() {
            unit.add_term(idx(i, j), ci * cj);
        }
    }
    Sample {
        dga: Dga {
            field: f,
            basis: GradedBasis::new(names).expect("distinct names"),
            differential,
            product,
        },
        unit,
        label: format!("{} x {}", x.label, y.label),
    }
}

fn small(rng: &mut impl Rng, field: Field, nonzero: bool) -> Scalar {
    loop {
        let s = field.from_i64(rng.gen_range(-3..=3));
        if !nonzero || !s.is_zero() {
            return s;
        }
    }
}

/// Random invertible change of basis preserving degrees, as a matrix whose
/// columns are the new basis vectors in old coordinates.
pub fn random_change(rng: &mut impl Rng, basis: &GradedBasis, field: Field) -> Matrix {
    let n = basis.len();
    let mut m = Matrix::identity(field, n);
    for idx in indices_by_degree(basis.degrees()).values() {
        loop {
            let mut block = Matrix::zeros(field, idx.len(), idx.len());
            for r in 0..idx.len() {
                for c in 0..idx.len() {
                    let v = if r == c {
                        small(rng, field, true)
                    } else if rng.gen_bool(0.5) {
                        small(rng, field, false)
                    } else {
                        field.zero()
                    };
                    block.set(r, c, v);
                }
            }
            if block.rank() == idx.len() {
                for (r, &i) in idx.iter().enumerate() {
                    for (c, &j) in idx.iter().enumerate() {
                        m.set(i, j, block.get(r, c).clone());
                    }
                }
                break;
            }
        }
    }
    m
}

fn column(m: &Matrix, c: usize) -> SparseVec {
    (0..m.rows()).map(|r| (r, m.get(r, c).clone())).collect()
}

fn apply(m: &Matrix, v: &SparseVec) -> SparseVec {
    let mut out = SparseVec::new();
    for (&i, c) in v.iter() {
        out.add_scaled(&column(m, i), c);
    }
    out
}

/// The same DGA written in the basis given by the columns of `change`.
pub fn change_basis(s: &Sample, change: &Matrix) -> Sample {
    let a = &s.dga;
    let inv = change.inverse().expect("invertible change of basis");
    let n = a.basis.len();
    let names: Vec<(String, i64)> = (0..n).map(|i| (format!("b{i}"), a.basis.degree(i))).collect();
    let vecs: Vec<SparseVec> = (0..n).map(|i| column(change, i)).collect();
    let differential = (0..n).map(|i| apply(&inv, &a.d(&vecs[i]))).collect();
    let mut product = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            let p = apply(&inv, &a.mul(&vecs[i], &vecs[j]));
            if !p.is_zero() {
                product.insert((i, j), p);
            }
        }
    }
    Sample {
        dga: Dga {
            field: a.field,
            basis: GradedBasis::new(names).expect("distinct names"),
            differential,
            product,
        },
        unit: apply(&inv, &s.unit),
        label: format!("{} (changed basis)", s.label),
    }
}

/// A random unital associative DGA of dimension at most 8 with nonzero
/// differential.
pub fn random_dga(rng: &mut impl Rng, field: Field) -> Sample {
    let blocks = [heisenberg, cone, exterior_truncated, triangular];
    let base = blocks[rng.gen_range(0..blocks.len())](field);
    let mut s = base;
    let extra: Vec<fn(Field) -> Sample> = vec![dual_numbers, cone, triangular];
    if s.dga.basis.len() <= 4 && rng.gen_bool(0.6) {
        let other = extra[rng.gen_range(0..extra.len())](field);
        if s.dga.basis.len() * other.dga.basis.len() <= 8 {
            s = if rng.gen_bool(0.5) {
                tensor(&s, &other)
            } else {
                tensor(&other, &s)
            };
        }
    }
    let change = random_change(rng, &s.dga.basis, field);
    change_basis(&s, &change)
}

/// Transfer data from a randomized sequence of cancellations, stopping
/// early with some probability, so the sub-complex may keep a differential.
pub fn random_transfer_data(rng: &mut impl Rng, a: &FilteredAInfinity, full: bool) -> Result<TransferData> {
    let mut r = Reducer::new(&a.differential());
    loop {
        let pairs = r.invertible_incidences();
        let Some(&(x, y)) = pairs.choose(rng) else { break };
        if !full && rng.gen_bool(0.25) {
            break;
        }
        r.cancel(x, y)?;
    }
    let red = r.finish();
    let t = TransferData::from_reduction(a, &red)?;
    normalize_homotopy(a, t.basis, t.iota, t.proj, t.g)
}

/// A filtered algebra over a monoid with two generators: a central
/// curvature `c T^{3/2} e * unit` on the DGA, deformed by a random `b` of
/// energy 1 on degree-one elements.
pub fn random_filtered(
    rng: &mut impl Rng,
    field: Field,
    energy_cutoff: Energy,
    arity_cutoff: usize,
) -> Result<(Sample, FilteredAInfinity)> {
    let s = random_dga(rng, field);
    let a = from_dga(&s.dga, energy_cutoff, arity_cutoff)?;
    let mut ops = a.ops.clone();
    let curvature = GapClass::new(Energy::new(3, 2), 2)?;
    ops.add_entry(0, curvature, vec![], &s.unit.scaled(&small(rng, field, true)));
    let curved = FilteredAInfinity::new(field, a.basis.clone(), ops, energy_cutoff, arity_cutoff, None, None)?;
    let t = Monomial::new(Energy::int(1), 0);
    let mut b = Chain::new();
    for i in 0..a.dim() {
        if a.basis.degree(i) == 1 && rng.gen_bool(0.7) {
            b.add_term((t, i), small(rng, field, false));
        }
    }
    let mut out = deform_by_b(&curved, &b)?;
    let gens = [GapClass::new(Energy::int(1), 0)?, curvature];
    out.monoid = out.monoid.extended(gens)?;
    Ok((s, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ainfty::verify_ainfty;

    #[test]
    fn blocks_are_dgas() {
        for f in [Field::Rational, Field::Prime(2), Field::Prime(5)] {
            for s in [
                heisenberg(f),
                cone(f),
                exterior_truncated(f),
                dual_numbers(f),
                triangular(f),
            ] {
                s.dga.check().unwrap_or_else(|e| panic!("{}: {e}", s.label));
            }
            tensor(&cone(f), &triangular(f)).dga.check().unwrap();
            tensor(&dual_numbers(f), &exterior_truncated(f)).dga.check().unwrap();
        }
    }

    #[test]
    fn random_dgas_are_valid_and_seeded() {
        let mut r = rng(7);
        for _ in 0..20 {
            let s = random_dga(&mut r, Field::Rational);
            s.dga.check().unwrap();
            assert!(s.dga.basis.len() <= 8);
            assert!(s.dga.differential.iter().any(|v| !v.is_zero()));
            let u = &s.unit;
            for i in 0..s.dga.basis.len() {
                let e = SparseVec::single(i, Field::Rational.one());
                assert_eq!(s.dga.mul(u, &e), e);
                assert_eq!(s.dga.mul(&e, u), e);
            }
        }
        let a = random_dga(&mut rng(3), Field::Rational);
        let b = random_dga(&mut rng(3), Field::Rational);
        assert_eq!(a.dga.product, b.dga.product);
    }

    #[test]
    fn filtered_samples_verify() {
        let mut r = rng(11);
        let (_, a) = random_filtered(&mut r, Field::Rational, Energy::int(3), 3).unwrap();
        assert!(verify_ainfty(&a).passed());
        assert!(a.monoid.levels().len() > 2);
    }
}
