use proptest::prelude::*;

use ainfty::ainfty::{from_dga, verify_ainfty, FilteredAInfinity};
use ainfty::bimodule::{deform_bimodule, diagonal, verify_bimodule, FilteredBimodule};
use ainfty::complex::Chain;
use ainfty::io;
use ainfty::linalg::Matrix;
use ainfty::morse::{morse_flow_data, GradientMatching, SimplicialComplex};
use ainfty::novikov::{Energy, Field, GapClass, Monomial, NovElement};
use ainfty::samples::{heisenberg, random_dga, random_transfer_data, rng};
use ainfty::transfer::transfer;

fn field() -> impl Strategy<Value = Field> {
    prop_oneof![
        Just(Field::Rational),
        Just(Field::prime(5).unwrap()),
        Just(Field::prime(2).unwrap())
    ]
}

fn element(f: Field) -> impl Strategy<Value = NovElement> {
    prop::collection::vec((0i64..7, 1i64..4, -2i64..3, -4i64..5), 0..5).prop_map(move |terms| {
        NovElement::from_terms(
            f,
            Energy::int(2),
            terms
                .into_iter()
                .map(|(n, d, e, c)| (Monomial::new(Energy::new(n, d), e), f.from_i64(c))),
        )
    })
}

fn triple() -> impl Strategy<Value = (NovElement, NovElement, NovElement)> {
    field().prop_flat_map(|f| (element(f), element(f), element(f)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn novikov_ring_laws((x, y, z) in triple()) {
        prop_assert_eq!(x.mul(&y).unwrap(), y.mul(&x).unwrap());
        prop_assert_eq!(x.mul(&y).unwrap().mul(&z).unwrap(), x.mul(&y.mul(&z).unwrap()).unwrap());
        prop_assert_eq!(
            x.mul(&y.add(&z).unwrap()).unwrap(),
            x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap()
        );
        let one = NovElement::one(x.field(), x.cutoff());
        prop_assert_eq!(x.mul(&one).unwrap(), x.clone());
        prop_assert!(x.add(&x.neg()).unwrap().is_zero());
    }

    #[test]
    fn valuation_is_additive_below_the_cutoff((x, y, _z) in triple()) {
        if let (Some(a), Some(b)) = (x.valuation(), y.valuation()) {
            let lowest = |v: &NovElement, e: Energy| -> NovElement {
                NovElement::from_terms(v.field(), v.cutoff(), v.terms().iter().filter(|(m, _)| m.lambda == e).map(|(m, c)| (*m, c.clone())))
            };
            // the lowest-energy parts multiply to a Laurent product in e, never zero over a field
            let lead = lowest(&x, a).mul(&lowest(&y, b)).unwrap();
            if a + b < x.cutoff() {
                prop_assert!(!lead.is_zero());
                prop_assert_eq!(x.mul(&y).unwrap().valuation(), Some(a + b));
            } else {
                prop_assert!(x.mul(&y).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn truncation_is_a_ring_map((x, y, _z) in triple(), n in 0i64..4) {
        let c = Energy::new(n, 2);
        prop_assert_eq!(x.mul(&y).unwrap().truncate(c), x.truncate(c).mul(&y.truncate(c)).unwrap());
        prop_assert_eq!(x.add(&y).unwrap().truncate(c), x.truncate(c).add(&y.truncate(c)).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_dgas_satisfy_the_relations(seed in any::<u64>()) {
        let s = random_dga(&mut rng(seed), Field::Rational);
        let a = from_dga(&s.dga, Energy::int(1), 3).unwrap();
        let r = verify_ainfty(&a);
        prop_assert!(r.passed(), "{}: {}", s.label, r);
    }

    #[test]
    fn transfer_data_meets_the_side_conditions(seed in any::<u64>(), full in any::<bool>()) {
        let mut r = rng(seed);
        let s = random_dga(&mut r, Field::Rational);
        let a = from_dga(&s.dga, Energy::int(1), 3).unwrap().into_verified().unwrap();
        let data = random_transfer_data(&mut r, &a, full).unwrap();
        prop_assert!(data.check(&a).is_ok());
        let (g, proj) = (&data.g, &data.proj);
        prop_assert!(g.mul(g).is_zero());
        prop_assert!(proj.mul(g).is_zero());
        prop_assert!(g.mul(&data.iota).is_zero());
        prop_assert!(data.p.mul(g).is_zero());
    }

    #[test]
    fn transfer_is_deterministic(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = random_dga(&mut r, Field::Rational);
        let a = from_dga(&s.dga, Energy::int(1), 3).unwrap().into_verified().unwrap();
        let data = random_transfer_data(&mut r, &a, true).unwrap();
        let one = transfer(&a, &data).unwrap();
        let two = transfer(&a, &data).unwrap();
        prop_assert_eq!(io::to_text(&io::algebra_doc(&one.model)), io::to_text(&io::algebra_doc(&two.model)));
        prop_assert_eq!(one.ledger, two.ledger);
    }
}

fn heisenberg_at(cutoff: Energy) -> FilteredAInfinity {
    from_dga(&heisenberg(Field::Rational).dga, cutoff, 3)
        .unwrap()
        .into_verified()
        .unwrap()
}

fn deformed_at(cutoff: Energy, c: i64, lambda: Energy) -> FilteredBimodule {
    let a = heisenberg_at(cutoff);
    let x = a.basis.lookup("x").unwrap();
    let b = Chain::single((Monomial::new(lambda, 0), x), Field::Rational.from_i64(c));
    deform_bimodule(&diagonal(&a, 1, 1).unwrap(), &b, &b).unwrap()
}

fn below(d: &FilteredBimodule, e: Energy) -> Vec<((usize, usize), GapClass, String)> {
    d.ops
        .iter()
        .filter(|(_, g, _)| g.lambda < e)
        .map(|(k, g, t)| (k, *g, format!("{t:?}")))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn bimodule_deformation_commutes_with_truncation(c in -3i64..4, half in 1i64..4) {
        let lambda = Energy::new(half, 2);
        let low = deformed_at(Energy::new(3, 2), c, lambda);
        let high = deformed_at(Energy::new(5, 2), c, lambda);
        prop_assert!(verify_bimodule(&high).passed());
        prop_assert_eq!(below(&low, low.exact_below), below(&high, low.exact_below));
    }
}

fn betti(k: &SimplicialComplex, f: Field) -> usize {
    k.homology_ranks(f).iter().sum()
}

fn complex_from(mask: u16) -> SimplicialComplex {
    let mut triangles = Vec::new();
    for a in 0..5 {
        for b in a + 1..5 {
            for c in b + 1..5 {
                triangles.push(vec![a, b, c]);
            }
        }
    }
    let facets: Vec<Vec<usize>> = triangles
        .into_iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, t)| t)
        .collect();
    SimplicialComplex::numbered(5, &facets).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn morse_inequalities_hold(mask in 1u16..1024, f in field()) {
        let k = complex_from(mask);
        let m = GradientMatching::greedy(&k);
        let crit = m.critical(&k);
        prop_assert!(crit.len() >= betti(&k, f));
        prop_assert_eq!(crit.len() + 2 * m.pairs.len(), k.len());
    }

    #[test]
    fn morse_flow_data_is_a_contraction(mask in 1u16..1024, f in field()) {
        let k = complex_from(mask);
        let a = k.chain_algebra(f, Energy::int(1), 2).unwrap();
        let pkg = morse_flow_data(&a, &k, &GradientMatching::greedy(&k)).unwrap();
        let d = a.differential();
        let td = &pkg.data;
        let lhs = Matrix::identity(f, a.dim()).sub(&td.proj);
        prop_assert_eq!(lhs, d.mul(&td.g).add(&td.g.mul(&d)).neg());
        prop_assert_eq!(td.p.mul(&td.iota), Matrix::identity(f, pkg.critical.len()));
        prop_assert!(td.g.mul(&td.g).is_zero());
    }
}

#[test]
fn zero_cutoff_is_empty() {
    let x = NovElement::one(Field::Rational, Energy::ZERO);
    assert!(x.is_zero());
}
