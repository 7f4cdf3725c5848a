//! Exact arithmetic in the truncated universal Novikov ring and the gap monoid.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Ground field of a session.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rational,
    Prime(u32),
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn prime(p: u32) -> Result<Field> {
        if is_prime(p) {
            Ok(Field::Prime(p))
        } else {
            Err(Error::Invalid(format!("{p} is not prime")))
        }
    }

    /// Parses `Q`, `QQ`, `F7`, `GF(7)` or a bare prime.
    pub fn parse(s: &str) -> Result<Field> {
        let t = s.trim();
        match t {
            "Q" | "QQ" | "q" | "rational" | "rationals" => return Ok(Field::Rational),
            _ => {}
        }
        let digits = t
            .trim_start_matches("GF(")
            .trim_end_matches(')')
            .trim_start_matches(['F', 'f'])
            .trim_start_matches("p=");
        let p: u32 = digits
            .parse()
            .map_err(|_| Error::Invalid(format!("unknown field `{s}`")))?;
        Field::prime(p)
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match *self {
            Field::Rational => Scalar::Q(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => Scalar::Fp {
                v: n.rem_euclid(p as i64) as u32,
                p,
            },
        }
    }

    pub fn from_ratio(&self, q: &BigRational) -> Result<Scalar> {
        match *self {
            Field::Rational => Ok(Scalar::Q(q.clone())),
            Field::Prime(p) => {
                let pb = BigInt::from(p);
                let num = (q.numer() % &pb + &pb) % &pb;
                let den = (q.denom() % &pb + &pb) % &pb;
                if den.is_zero() {
                    return Err(Error::Invalid(format!(
                        "coefficient {q} has denominator divisible by {p}"
                    )));
                }
                let n = Scalar::Fp {
                    v: num.to_u32().unwrap(),
                    p,
                };
                let d = Scalar::Fp {
                    v: den.to_u32().unwrap(),
                    p,
                };
                Ok(&n * &d.inv().unwrap())
            }
        }
    }

    /// Parses `a`, `-a/b` or a decimal like `0.25`.
    pub fn parse_scalar(&self, s: &str) -> Result<Scalar> {
        self.from_ratio(&parse_ratio(s)?)
    }

    pub fn characteristic(&self) -> u32 {
        match *self {
            Field::Rational => 0,
            Field::Prime(p) => p,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F{p}"),
        }
    }
}

fn parse_ratio(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let bad = || Error::Invalid(format!("not an exact rational: `{s}`"));
    if let Some((a, b)) = t.split_once('/') {
        let a: BigInt = a.trim().parse().map_err(|_| bad())?;
        let b: BigInt = b.trim().parse().map_err(|_| bad())?;
        if b.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(a, b));
    }
    if let Some((ip, fp)) = t.split_once('.') {
        if fp.is_empty() || !fp.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = ip.starts_with('-');
        let ip = ip.trim_start_matches(['-', '+']);
        let whole: BigInt = if ip.is_empty() {
            BigInt::zero()
        } else {
            ip.parse().map_err(|_| bad())?
        };
        let frac: BigInt = fp.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), fp.len());
        let mut q = BigRational::new(whole * &scale + frac, scale);
        if neg {
            q = -q;
        }
        return Ok(q);
    }
    let a: BigInt = t.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(a))
}

/// An element of the ground field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    Fp { v: u32, p: u32 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Rational,
            Scalar::Fp { p, .. } => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_zero(),
            Scalar::Fp { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_one(),
            Scalar::Fp { v, .. } => *v == 1,
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Q(q) => Scalar::Q(q.recip()),
            Scalar::Fp { v, p } => {
                let (mut base, mut e, mut acc) = (*v as u64, (*p - 2) as u64, 1u64);
                let m = *p as u64;
                while e > 0 {
                    if e & 1 == 1 {
                        acc = acc * base % m;
                    }
                    base = base * base % m;
                    e >>= 1;
                }
                Scalar::Fp { v: acc as u32, p: *p }
            }
        })
    }

    /// Multiplies by `(-1)^parity`.
    pub fn signed(self, odd: bool) -> Scalar {
        if odd {
            -self
        } else {
            self
        }
    }

    /// Textual form used in files: `a/b` over Q, the residue over F_p.
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Scalar::Q(q) => serde_json::Value::String(q.to_string()),
            Scalar::Fp { v, .. } => serde_json::Value::from(*v),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(q) => write!(f, "{q}"),
            Scalar::Fp { v, .. } => write!(f, "{v}"),
        }
    }
}

fn check_same(a: &Scalar, b: &Scalar) -> u32 {
    match (a, b) {
        (Scalar::Fp { p, .. }, Scalar::Fp { p: q, .. }) if p == q => *p,
        _ => panic!("scalars from different fields: {a:?} and {b:?}"),
    }
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Fp { v: a, .. }, Scalar::Fp { v: b, .. }) => {
                let p = check_same(self, rhs);
                Scalar::Fp {
                    v: ((*a as u64 + *b as u64) % p as u64) as u32,
                    p,
                }
            }
            _ => panic!("scalars from different fields: {self:?} and {rhs:?}"),
        }
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs.clone())
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Fp { v: a, .. }, Scalar::Fp { v: b, .. }) => {
                let p = check_same(self, rhs);
                Scalar::Fp {
                    v: ((*a as u64 * *b as u64) % p as u64) as u32,
                    p,
                }
            }
            _ => panic!("scalars from different fields: {self:?} and {rhs:?}"),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Q(q) => Scalar::Q(-q),
            Scalar::Fp { v, p } => Scalar::Fp {
                v: if v == 0 { 0 } else { p - v },
                p,
            },
        }
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

/// An exact rational energy. Algebra inputs only ever carry nonnegative
/// values; negative values appear as filtration shifts of bimodule maps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Energy(pub Rational64);

impl Energy {
    pub const ZERO: Energy = Energy(Rational64::new_raw(0, 1));

    pub fn new(num: i64, den: i64) -> Energy {
        Energy(Rational64::new(num, den))
    }

    pub fn int(n: i64) -> Energy {
        Energy(Rational64::from_integer(n))
    }

    /// Parses an exact, nonnegative rational.
    pub fn parse(s: &str) -> Result<Energy> {
        let e = Energy::parse_signed(s)?;
        if e.is_negative() {
            return Err(Error::Invalid(format!("negative energy `{s}`")));
        }
        Ok(e)
    }

    pub fn parse_signed(s: &str) -> Result<Energy> {
        let q = parse_ratio(s)?;
        let num = q.numer().to_i64();
        let den = q.denom().to_i64();
        match (num, den) {
            (Some(n), Some(d)) => Ok(Energy(Rational64::new(n, d))),
            _ => Err(Error::Invalid(format!("energy `{s}` out of range"))),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn times(&self, n: i64) -> Energy {
        Energy(self.0 * Rational64::from_integer(n))
    }

    /// Largest integer not above the value.
    pub fn floor(&self) -> i64 {
        self.0.floor().to_integer()
    }
}

impl Add for Energy {
    type Output = Energy;
    fn add(self, rhs: Energy) -> Energy {
        Energy(self.0 + rhs.0)
    }
}

impl Sub for Energy {
    type Output = Energy;
    fn sub(self, rhs: Energy) -> Energy {
        Energy(self.0 - rhs.0)
    }
}

impl fmt::Display for Energy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `T^lambda e^e`; the degree of the monomial is `2 e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial {
    pub lambda: Energy,
    pub e: i64,
}

impl Monomial {
    pub const ONE: Monomial = Monomial {
        lambda: Energy::ZERO,
        e: 0,
    };

    pub fn new(lambda: Energy, e: i64) -> Monomial {
        Monomial { lambda, e }
    }

    pub fn degree(&self) -> i64 {
        2 * self.e
    }

    pub fn class(&self) -> GapClass {
        GapClass {
            lambda: self.lambda,
            mu: 2 * self.e,
        }
    }
}

impl Mul for Monomial {
    type Output = Monomial;
    fn mul(self, rhs: Monomial) -> Monomial {
        Monomial {
            lambda: self.lambda + rhs.lambda,
            e: self.e + rhs.e,
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.lambda.is_zero(), self.e) {
            (true, 0) => write!(f, "1"),
            (false, 0) => write!(f, "T^{}", self.lambda),
            (true, e) => write!(f, "e^{e}"),
            (false, e) => write!(f, "T^{} e^{e}", self.lambda),
        }
    }
}

/// A truncated element of the Novikov ring: terms with energy at or above
/// the cutoff are dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NovElement {
    field: Field,
    cutoff: Energy,
    terms: BTreeMap<Monomial, Scalar>,
}

impl NovElement {
    pub fn zero(field: Field, cutoff: Energy) -> NovElement {
        NovElement {
            field,
            cutoff,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(field: Field, cutoff: Energy) -> NovElement {
        NovElement::monomial(field, cutoff, Monomial::ONE, field.one())
    }

    pub fn monomial(field: Field, cutoff: Energy, m: Monomial, c: Scalar) -> NovElement {
        let mut x = NovElement::zero(field, cutoff);
        x.add_term(m, c);
        x
    }

    pub fn from_terms(field: Field, cutoff: Energy, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> NovElement {
        let mut x = NovElement::zero(field, cutoff);
        for (m, c) in terms {
            x.add_term(m, c);
        }
        x
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn cutoff(&self) -> Energy {
        self.cutoff
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if m.lambda >= self.cutoff || c.is_zero() {
            return;
        }
        assert_eq!(c.field(), self.field, "coefficient from another field");
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// Lowest energy carrying a nonzero coefficient.
    pub fn valuation(&self) -> Option<Energy> {
        self.terms.keys().map(|m| m.lambda).min()
    }

    fn compatible(&self, other: &NovElement) -> Result<()> {
        if self.field != other.field {
            return Err(Error::Mismatch(format!("fields {} and {}", self.field, other.field)));
        }
        if self.cutoff != other.cutoff {
            return Err(Error::Mismatch(format!("cutoffs {} and {}", self.cutoff, other.cutoff)));
        }
        Ok(())
    }

    pub fn add(&self, other: &NovElement) -> Result<NovElement> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn mul(&self, other: &NovElement) -> Result<NovElement> {
        self.compatible(other)?;
        let mut out = NovElement::zero(self.field, self.cutoff);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(*m1 * *m2, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> NovElement {
        NovElement {
            field: self.field,
            cutoff: self.cutoff,
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }

    /// Re-truncates at a lower cutoff.
    pub fn truncate(&self, cutoff: Energy) -> NovElement {
        let cutoff = cutoff.min(self.cutoff);
        NovElement {
            field: self.field,
            cutoff,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.lambda < cutoff)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|(m, c)| serde_json::json!({"lambda": m.lambda.to_string(), "e": m.e, "coeff": c.to_json()}))
                .collect(),
        )
    }
}

impl fmt::Display for NovElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if *m == Monomial::ONE {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "({c}) {m}")?;
            }
        }
        Ok(())
    }
}

/// An (energy, Maslov) class `beta = (lambda, mu)` with `mu` even.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GapClass {
    pub lambda: Energy,
    pub mu: i64,
}

impl GapClass {
    pub const ZERO: GapClass = GapClass {
        lambda: Energy::ZERO,
        mu: 0,
    };

    pub fn new(lambda: Energy, mu: i64) -> Result<GapClass> {
        if mu % 2 != 0 {
            return Err(Error::Invalid(format!("odd Maslov index {mu}")));
        }
        if lambda.is_negative() {
            return Err(Error::Invalid(format!("negative energy {lambda}")));
        }
        if lambda.is_zero() && mu != 0 {
            return Err(Error::Invalid(format!(
                "class (0, {mu}): zero energy forces zero Maslov index"
            )));
        }
        Ok(GapClass { lambda, mu })
    }

    /// A class of a filtration-shifting map; the energy may be negative.
    pub fn shifted(lambda: Energy, mu: i64) -> Result<GapClass> {
        if mu % 2 != 0 {
            return Err(Error::Invalid(format!("odd Maslov index {mu}")));
        }
        Ok(GapClass { lambda, mu })
    }

    pub fn is_zero(&self) -> bool {
        *self == GapClass::ZERO
    }

    pub fn monomial(&self) -> Monomial {
        Monomial {
            lambda: self.lambda,
            e: self.mu / 2,
        }
    }
}

impl Add for GapClass {
    type Output = GapClass;
    fn add(self, rhs: GapClass) -> GapClass {
        GapClass {
            lambda: self.lambda + rhs.lambda,
            mu: self.mu + rhs.mu,
        }
    }
}

impl fmt::Display for GapClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lambda, self.mu)
    }
}

/// The classes of a gapped monoid below an energy cutoff.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapMonoid {
    classes: BTreeSet<GapClass>,
    levels: Vec<Energy>,
    cutoff: Energy,
}

impl GapMonoid {
    /// The trivial monoid `{(0,0)}`.
    pub fn trivial(cutoff: Energy) -> GapMonoid {
        GapMonoid {
            classes: BTreeSet::from([GapClass::ZERO]),
            levels: vec![Energy::ZERO],
            cutoff,
        }
    }

    pub fn classes(&self) -> &BTreeSet<GapClass> {
        &self.classes
    }

    /// Sorted distinct energies, starting with 0.
    pub fn levels(&self) -> &[Energy] {
        &self.levels
    }

    pub fn cutoff(&self) -> Energy {
        self.cutoff
    }

    pub fn contains(&self, b: &GapClass) -> bool {
        self.classes.contains(b)
    }

    pub fn level_of(&self, lambda: Energy) -> Option<usize> {
        self.levels.binary_search(&lambda).ok()
    }

    /// Classes with positive energy, which serve as indecomposable candidates.
    pub fn generators(&self) -> Vec<GapClass> {
        self.classes
            .iter()
            .copied()
            .filter(|b| !b.is_zero())
            .filter(|b| {
                !self.classes.iter().any(|a| {
                    !a.is_zero()
                        && a.lambda < b.lambda
                        && self.classes.contains(&GapClass {
                            lambda: b.lambda - a.lambda,
                            mu: b.mu - a.mu,
                        })
                })
            })
            .collect()
    }

    /// Largest number of nonzero classes of the monoid summing to `b`.
    pub fn max_parts(&self, b: &GapClass) -> Option<usize> {
        if b.is_zero() {
            return Some(0);
        }
        let mut best: BTreeMap<GapClass, Option<usize>> = BTreeMap::new();
        for c in self.classes.iter().filter(|c| c.lambda <= b.lambda) {
            if c.is_zero() {
                best.insert(*c, Some(0));
                continue;
            }
            let mut top = None;
            for a in self.classes.iter().filter(|a| !a.is_zero() && a.lambda <= c.lambda) {
                let rest = GapClass {
                    lambda: c.lambda - a.lambda,
                    mu: c.mu - a.mu,
                };
                if let Some(Some(n)) = best.get(&rest) {
                    top = top.max(Some(n + 1));
                }
            }
            best.insert(*c, top);
        }
        best.get(b).copied().flatten()
    }

    /// Closes the monoid under adding another set of classes.
    pub fn extended(&self, extra: impl IntoIterator<Item = GapClass>) -> Result<GapMonoid> {
        let gens: Vec<GapClass> = self.classes.iter().copied().chain(extra).collect();
        monoid_closure(&gens, self.cutoff)
    }
}

/// All finite sums of the generators with energy below the cutoff.
pub fn monoid_closure(generators: &[GapClass], cutoff: Energy) -> Result<GapMonoid> {
    for g in generators {
        GapClass::new(g.lambda, g.mu)?;
    }
    let gens: Vec<GapClass> = generators.iter().copied().filter(|g| !g.is_zero()).collect();
    let mut classes = BTreeSet::from([GapClass::ZERO]);
    let mut frontier = vec![GapClass::ZERO];
    while let Some(c) = frontier.pop() {
        for g in &gens {
            let s = c + *g;
            if s.lambda < cutoff && classes.insert(s) {
                frontier.push(s);
            }
        }
    }
    let levels: BTreeSet<Energy> = classes.iter().map(|c| c.lambda).collect();
    Ok(GapMonoid {
        classes,
        levels: levels.into_iter().collect(),
        cutoff,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rational
    }

    fn mono(l: i64, d: i64, e: i64) -> Monomial {
        Monomial::new(Energy::new(l, d), e)
    }

    #[test]
    fn add_cancels() {
        let c = Energy::int(5);
        let a = NovElement::from_terms(q(), c, [(mono(1, 1, 0), q().one()), (mono(2, 1, 1), q().one())]);
        let b = NovElement::monomial(q(), c, mono(1, 1, 0), q().from_i64(-1));
        let s = a.add(&b).unwrap();
        assert_eq!(s, NovElement::monomial(q(), c, mono(2, 1, 1), q().one()));
        assert_eq!(a.add(&NovElement::zero(q(), c)).unwrap(), a);
    }

    #[test]
    fn characteristic_two() {
        let f = Field::prime(2).unwrap();
        let h = NovElement::monomial(f, Energy::int(3), mono(1, 2, 0), f.one());
        assert!(h.add(&h).unwrap().is_zero());
    }

    #[test]
    fn multiplication_truncates() {
        let c = Energy::int(3);
        let h = NovElement::monomial(q(), c, mono(1, 2, 0), q().one());
        assert_eq!(
            h.mul(&h).unwrap(),
            NovElement::monomial(q(), c, mono(1, 1, 0), q().one())
        );
        let a = NovElement::monomial(q(), c, mono(1, 1, 1), q().one());
        let b = NovElement::monomial(q(), c, mono(2, 1, -1), q().one());
        assert!(a.mul(&b).unwrap().is_zero());
        let x = a.add(&b).unwrap();
        assert_eq!(NovElement::one(q(), c).mul(&x).unwrap(), x);
    }

    #[test]
    fn mismatched_cutoffs_rejected() {
        let a = NovElement::one(q(), Energy::int(3));
        let b = NovElement::one(q(), Energy::int(2));
        assert!(a.add(&b).is_err());
        let f2 = NovElement::one(Field::Prime(2), Energy::int(3));
        assert!(a.mul(&f2).is_err());
    }

    #[test]
    fn closure_examples() {
        let g = |l, d, m| GapClass::new(Energy::new(l, d), m).unwrap();
        let m = monoid_closure(&[g(1, 1, 2)], Energy::int(3)).unwrap();
        assert_eq!(
            m.classes().iter().copied().collect::<Vec<_>>(),
            vec![GapClass::ZERO, g(1, 1, 2), g(2, 1, 4)]
        );
        let m = monoid_closure(&[], Energy::int(5)).unwrap();
        assert_eq!(m.classes().len(), 1);
        let m = monoid_closure(&[g(1, 1, 0), g(3, 2, 2)], Energy::int(3)).unwrap();
        let expected: BTreeSet<_> = [GapClass::ZERO, g(1, 1, 0), g(2, 1, 0), g(3, 2, 2), g(5, 2, 2)].into();
        assert_eq!(m.classes(), &expected);
        assert_eq!(
            m.levels(),
            &[
                Energy::ZERO,
                Energy::int(1),
                Energy::new(3, 2),
                Energy::int(2),
                Energy::new(5, 2)
            ]
        );
    }

    #[test]
    fn closure_rejects_zero_energy_maslov() {
        let bad = GapClass {
            lambda: Energy::ZERO,
            mu: 2,
        };
        assert!(monoid_closure(&[bad], Energy::int(2)).is_err());
        assert!(GapClass::new(Energy::int(1), 1).is_err());
    }

    #[test]
    fn parts_counts() {
        let g = |l, d, m| GapClass::new(Energy::new(l, d), m).unwrap();
        let m = monoid_closure(&[g(1, 1, 0), g(3, 2, 2)], Energy::int(4)).unwrap();
        assert_eq!(m.max_parts(&g(3, 2, 2)), Some(1));
        assert_eq!(m.max_parts(&g(2, 1, 0)), Some(2));
        assert_eq!(m.max_parts(&g(5, 2, 2)), Some(2));
        assert_eq!(m.max_parts(&GapClass::ZERO), Some(0));
        assert_eq!(m.generators(), vec![g(1, 1, 0), g(3, 2, 2)]);
    }

    #[test]
    fn scalar_parsing() {
        let f7 = Field::prime(7).unwrap();
        assert_eq!(f7.parse_scalar("1/2").unwrap(), f7.from_i64(4));
        assert!(f7.parse_scalar("1/7").is_err());
        assert_eq!(q().parse_scalar("0.25").unwrap(), q().parse_scalar("1/4").unwrap());
        assert!(q().parse_scalar("sqrt(2)").is_err());
        assert!(Energy::parse("-1").is_err());
        assert_eq!(Energy::parse("5/2").unwrap(), Energy::new(5, 2));
        assert!(Field::parse("F4").is_err());
        assert_eq!(Field::parse("F2").unwrap(), Field::Prime(2));
    }
}
