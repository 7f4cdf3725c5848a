//! Graded bases, Novikov-valued chains, the bar coalgebra, and the
//! coderivation / coalgebra-map extensions of multilinear families.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::novikov::{Energy, Field, GapClass, Monomial, NovElement, Scalar};

/// An ordered list of named, graded basis elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedBasis {
    names: Vec<String>,
    degrees: Vec<i64>,
    index: HashMap<String, usize>,
}

impl GradedBasis {
    pub fn new<S: Into<String>>(elements: impl IntoIterator<Item = (S, i64)>) -> Result<GradedBasis> {
        let mut b = GradedBasis {
            names: Vec::new(),
            degrees: Vec::new(),
            index: HashMap::new(),
        };
        for (name, deg) in elements {
            let name = name.into();
            if name.is_empty() {
                return Err(Error::invalid("empty basis name"));
            }
            if b.index.insert(name.clone(), b.names.len()).is_some() {
                return Err(Error::invalid(format!("duplicate basis name `{name}`")));
            }
            b.names.push(name);
            b.degrees.push(deg);
        }
        Ok(b)
    }

    /// Algebra inputs live in nonnegative degrees.
    pub fn check_nonnegative(&self) -> Result<()> {
        match self.degrees.iter().position(|&d| d < 0) {
            Some(i) => Err(Error::invalid(format!(
                "basis element `{}` has negative degree {}",
                self.names[i], self.degrees[i]
            ))),
            None => Ok(()),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.degrees[i]
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn shifted(&self, i: usize) -> i64 {
        self.degrees[i] - 1
    }

    /// Whether the shifted degree is odd.
    pub fn odd(&self, i: usize) -> bool {
        self.shifted(i).rem_euclid(2) == 1
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn lookup(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::invalid(format!("unknown basis element `{name}`")))
    }

    pub fn word_names(&self, word: &[usize]) -> String {
        let parts: Vec<&str> = word.iter().map(|&i| self.name(i)).collect();
        format!("({})", parts.join(", "))
    }

    /// Shifted degree of a word with an overall monomial.
    pub fn word_degree(&self, word: &[usize], m: &Monomial) -> i64 {
        word.iter().map(|&i| self.shifted(i)).sum::<i64>() + m.degree()
    }

    /// Parity of the shifted degrees of a word.
    pub fn word_odd(&self, word: &[usize]) -> bool {
        word.iter().filter(|&&i| self.odd(i)).count() % 2 == 1
    }
}

/// Shifted degree `deg - 1` of a single element of the given degree.
pub fn shifted_degree(degree: i64) -> i64 {
    degree - 1
}

/// A finite linear combination with field coefficients; zero coefficients
/// are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinComb<K: Ord> {
    terms: BTreeMap<K, Scalar>,
}

impl<K: Ord> Default for LinComb<K> {
    fn default() -> Self {
        LinComb { terms: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> LinComb<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(k: K, c: Scalar) -> Self {
        let mut x = Self::new();
        x.add_term(k, c);
        x
    }

    pub fn add_term(&mut self, k: K, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(k) {
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

    pub fn add_scaled(&mut self, other: &Self, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (k, v) in &other.terms {
            self.add_term(k.clone(), v * c);
        }
    }

    pub fn add_all(&mut self, other: &Self) {
        for (k, v) in &other.terms {
            self.add_term(k.clone(), v.clone());
        }
    }

    pub fn sub_all(&mut self, other: &Self) {
        for (k, v) in &other.terms {
            self.add_term(k.clone(), -v.clone());
        }
    }

    pub fn scaled(&self, c: &Scalar) -> Self {
        let mut out = Self::new();
        out.add_scaled(self, c);
        out
    }

    pub fn get(&self, k: &K) -> Option<&Scalar> {
        self.terms.get(k)
    }

    pub fn terms(&self) -> &BTreeMap<K, Scalar> {
        &self.terms
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Scalar)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn retain(&mut self, mut f: impl FnMut(&K) -> bool) {
        self.terms.retain(|k, _| f(k));
    }
}

impl<K: Ord> IntoIterator for LinComb<K> {
    type Item = (K, Scalar);
    type IntoIter = std::collections::btree_map::IntoIter<K, Scalar>;
    fn into_iter(self) -> Self::IntoIter {
        self.terms.into_iter()
    }
}

impl<K: Ord + Clone> FromIterator<(K, Scalar)> for LinComb<K> {
    fn from_iter<I: IntoIterator<Item = (K, Scalar)>>(iter: I) -> Self {
        let mut x = Self::new();
        for (k, c) in iter {
            x.add_term(k, c);
        }
        x
    }
}

/// A field-valued vector over basis indices.
pub type SparseVec = LinComb<usize>;

/// A chain with Novikov coefficients, keyed by (monomial, basis index).
pub type Chain = LinComb<(Monomial, usize)>;

/// An element of the bar coalgebra, keyed by (monomial, word).
pub type BarElement = LinComb<(Monomial, Vec<usize>)>;

/// Lowest energy carried by a chain or bar element.
pub fn valuation<T: Ord + Clone>(x: &LinComb<(Monomial, T)>) -> Option<Energy> {
    x.terms().keys().map(|(m, _)| m.lambda).min()
}

/// Drops every term with energy at or above `cutoff`.
pub fn truncate<T: Ord + Clone>(x: &mut LinComb<(Monomial, T)>, cutoff: Energy) {
    x.retain(|(m, _)| m.lambda < cutoff);
}

/// Attaches a monomial to a field-valued vector.
pub fn lift(v: &SparseVec, m: Monomial) -> Chain {
    v.iter().map(|(&i, c)| ((m, i), c.clone())).collect()
}

/// Per-basis Novikov coefficients of a chain.
pub fn chain_coefficients(x: &Chain, field: Field, cutoff: Energy) -> BTreeMap<usize, NovElement> {
    let mut out: BTreeMap<usize, NovElement> = BTreeMap::new();
    for ((m, i), c) in x.iter() {
        out.entry(*i)
            .or_insert_with(|| NovElement::zero(field, cutoff))
            .add_term(*m, c.clone());
    }
    out.retain(|_, v| !v.is_zero());
    out
}

pub fn chain_from_coefficients(coeffs: &BTreeMap<usize, NovElement>) -> Chain {
    let mut out = Chain::new();
    for (i, x) in coeffs {
        for (m, c) in x.terms() {
            out.add_term((*m, *i), c.clone());
        }
    }
    out
}

/// Renders a chain like `3/2 T^1 e^1 [x] + ...`.
pub fn format_chain(x: &Chain, basis: &GradedBasis) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let parts: Vec<String> = x
        .iter()
        .map(|((m, i), c)| {
            let coeff = if c.is_one() { String::new() } else { format!("({c}) ") };
            let mono = if *m == Monomial::ONE {
                String::new()
            } else {
                format!("{m} ")
            };
            format!("{coeff}{mono}{}", basis.name(*i))
        })
        .collect();
    parts.join(" + ")
}

/// Degree bookkeeping per chain term: `deg(basis) + deg(monomial)`.
pub fn chain_degrees(x: &Chain, basis: &GradedBasis) -> BTreeSet<i64> {
    x.iter().map(|((m, i), _)| basis.degree(*i) + m.degree()).collect()
}

/// A sparse multilinear map on basis words: input word to output vector.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Tensor {
    entries: BTreeMap<Vec<usize>, SparseVec>,
}

impl Tensor {
    pub fn new() -> Tensor {
        Tensor::default()
    }

    pub fn add(&mut self, inputs: Vec<usize>, output: &SparseVec) {
        let slot = self.entries.entry(inputs.clone()).or_default();
        slot.add_all(output);
        if slot.is_zero() {
            self.entries.remove(&inputs);
        }
    }

    pub fn add_term(&mut self, inputs: Vec<usize>, out: usize, c: Scalar) {
        self.add(inputs, &SparseVec::single(out, c));
    }

    pub fn get(&self, inputs: &[usize]) -> Option<&SparseVec> {
        self.entries.get(inputs)
    }

    pub fn entries(&self) -> &BTreeMap<Vec<usize>, SparseVec> {
        &self.entries
    }

    pub fn entries_mut(&mut self) -> &mut BTreeMap<Vec<usize>, SparseVec> {
        &mut self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Applies the map to chains, one per slot. No signs arise: inputs are
    /// fed in their given order.
    pub fn apply_chains(&self, args: &[&Chain], factor: Monomial) -> Chain {
        let mut out = Chain::new();
        if self.entries.is_empty() {
            return out;
        }
        if args.is_empty() {
            if let Some(v) = self.entries.get(&Vec::new()) {
                out.add_all(&lift(v, factor));
            }
            return out;
        }
        let slots: Vec<BTreeMap<usize, Vec<(Monomial, Scalar)>>> = args
            .iter()
            .map(|c| {
                let mut m: BTreeMap<usize, Vec<(Monomial, Scalar)>> = BTreeMap::new();
                for ((mono, i), s) in c.iter() {
                    m.entry(*i).or_default().push((*mono, s.clone()));
                }
                m
            })
            .collect();
        if slots.iter().any(|s| s.is_empty()) {
            return out;
        }
        let one = args[0].iter().next().map(|(_, c)| c.field().one()).unwrap();
        let product_size: usize = slots.iter().map(|s| s.len()).product();
        if product_size <= self.entries.len() {
            let mut word = vec![0usize; slots.len()];
            let keys: Vec<Vec<usize>> = slots.iter().map(|s| s.keys().copied().collect()).collect();
            let mut pos = vec![0usize; slots.len()];
            loop {
                for (j, p) in pos.iter().enumerate() {
                    word[j] = keys[j][*p];
                }
                if let Some(v) = self.entries.get(&word) {
                    self.accumulate(&mut out, &slots, &word, v, factor, &one);
                }
                let mut j = slots.len();
                loop {
                    if j == 0 {
                        return out;
                    }
                    j -= 1;
                    pos[j] += 1;
                    if pos[j] < keys[j].len() {
                        break;
                    }
                    pos[j] = 0;
                }
            }
        } else {
            for (word, v) in &self.entries {
                if word.len() == slots.len() && word.iter().zip(&slots).all(|(i, s)| s.contains_key(i)) {
                    self.accumulate(&mut out, &slots, word, v, factor, &one);
                }
            }
            out
        }
    }

    fn accumulate(
        &self,
        out: &mut Chain,
        slots: &[BTreeMap<usize, Vec<(Monomial, Scalar)>>],
        word: &[usize],
        v: &SparseVec,
        factor: Monomial,
        one: &Scalar,
    ) {
        let mut coeffs: Vec<(Monomial, Scalar)> = vec![(factor, one.clone())];
        for (j, &i) in word.iter().enumerate() {
            let mut next = Vec::new();
            for (m, c) in &coeffs {
                for (m2, c2) in &slots[j][&i] {
                    next.push((*m * *m2, c * c2));
                }
            }
            coeffs = next;
        }
        for (m, c) in coeffs {
            for (&o, s) in v.iter() {
                out.add_term((m, o), &c * s);
            }
        }
    }
}

/// A gapped family of multilinear maps `T^lambda e^{mu/2} op_{k,beta}`,
/// indexed by arity then class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GappedFamily {
    /// Shifted degree of the whole family: 1 for structure maps, 0 for
    /// homomorphisms.
    degree: i64,
    ops: BTreeMap<usize, BTreeMap<GapClass, Tensor>>,
}

impl GappedFamily {
    pub fn new(degree: i64) -> GappedFamily {
        GappedFamily {
            degree,
            ops: BTreeMap::new(),
        }
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn odd(&self) -> bool {
        self.degree.rem_euclid(2) == 1
    }

    /// Adds a tensor into slot `(k, beta)`.
    pub fn insert(&mut self, k: usize, beta: GapClass, t: Tensor) {
        let slot = self.ops.entry(k).or_default().entry(beta).or_default();
        for (w, v) in t.entries {
            slot.add(w, &v);
        }
        self.prune();
    }

    pub fn add_entry(&mut self, k: usize, beta: GapClass, inputs: Vec<usize>, out: &SparseVec) {
        self.ops.entry(k).or_default().entry(beta).or_default().add(inputs, out);
        self.prune();
    }

    fn prune(&mut self) {
        for m in self.ops.values_mut() {
            m.retain(|_, t| !t.is_zero());
        }
        self.ops.retain(|_, m| !m.is_empty());
    }

    pub fn get(&self, k: usize, beta: &GapClass) -> Option<&Tensor> {
        self.ops.get(&k).and_then(|m| m.get(beta))
    }

    pub fn at_arity(&self, k: usize) -> impl Iterator<Item = (&GapClass, &Tensor)> {
        self.ops.get(&k).into_iter().flat_map(|m| m.iter())
    }

    pub fn arities(&self) -> impl Iterator<Item = usize> + '_ {
        self.ops.keys().copied()
    }

    pub fn max_arity(&self) -> Option<usize> {
        self.ops.keys().next_back().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &GapClass, &Tensor)> {
        self.ops
            .iter()
            .flat_map(|(k, m)| m.iter().map(move |(b, t)| (*k, b, t)))
    }

    pub fn classes(&self) -> BTreeSet<GapClass> {
        self.iter().map(|(_, b, _)| *b).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Sum over classes of the arity-`|word|` maps on a basis word.
    pub fn eval(&self, word: &[usize]) -> Chain {
        let mut out = Chain::new();
        for (beta, t) in self.at_arity(word.len()) {
            if let Some(v) = t.get(word) {
                out.add_all(&lift(v, beta.monomial()));
            }
        }
        out
    }

    /// Sum over classes of `op(args...)` for chain arguments.
    pub fn eval_chains(&self, args: &[&Chain]) -> Chain {
        let mut out = Chain::new();
        for (beta, t) in self.at_arity(args.len()) {
            out.add_all(&t.apply_chains(args, beta.monomial()));
        }
        out
    }

    /// Output of the arity-zero maps, `op_0(1)`.
    pub fn curvature(&self) -> Chain {
        self.eval(&[])
    }

    /// Energy of the lowest arity-zero term.
    pub fn curvature_valuation(&self) -> Option<Energy> {
        self.at_arity(0).map(|(b, _)| b.lambda).min()
    }

    /// Restricts to the given arities and classes.
    pub fn filtered(&self, mut keep: impl FnMut(usize, &GapClass) -> bool) -> GappedFamily {
        let mut out = GappedFamily::new(self.degree);
        for (k, b, t) in self.iter() {
            if keep(k, b) {
                out.insert(k, *b, t.clone());
            }
        }
        out
    }

    /// Checks that every entry has the expected output degree:
    /// `deg'(out) = degree - mu + sum deg'(in)`.
    pub fn check_homogeneous(&self, source: &GradedBasis, target: &GradedBasis) -> Result<()> {
        for (k, beta, t) in self.iter() {
            for (word, v) in t.entries() {
                if word.len() != k {
                    return Err(Error::invalid(format!(
                        "entry {} in arity-{k} slot",
                        source.word_names(word)
                    )));
                }
                let want = self.degree - beta.mu + word.iter().map(|&i| source.shifted(i)).sum::<i64>();
                for (&o, _) in v.iter() {
                    if target.shifted(o) != want {
                        return Err(Error::invalid(format!(
                            "class {beta}, inputs {}: output `{}` has shifted degree {} but {} is required",
                            source.word_names(word),
                            target.name(o),
                            target.shifted(o),
                            want
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Where bar elements are cut off: words longer than `max_len` and
/// energies at or above `energy` are dropped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Truncation {
    pub energy: Energy,
    pub max_len: usize,
}

/// Applies the coderivation extending `ops` to a bar element:
/// `sum_i (-1)^{parity * sum_{j<i} deg' x_j} x_1 .. op(x_i ..) .. x_N`.
/// Arity-0 maps are inserted in all gaps.
pub fn coderivation_extend(ops: &GappedFamily, basis: &GradedBasis, x: &BarElement, trunc: Truncation) -> BarElement {
    let mut out = BarElement::new();
    for ((m, word), c) in x.iter() {
        extend_word(ops, basis, word, *m, c, trunc, &mut out);
    }
    out
}

fn extend_word(
    ops: &GappedFamily,
    basis: &GradedBasis,
    word: &[usize],
    m: Monomial,
    c: &Scalar,
    trunc: Truncation,
    out: &mut BarElement,
) {
    let n = word.len();
    let mut prefix_odd = vec![false; n + 1];
    for i in 0..n {
        prefix_odd[i + 1] = prefix_odd[i] ^ basis.odd(word[i]);
    }
    for k in ops.arities() {
        if k > n || n + 1 - k > trunc.max_len {
            continue;
        }
        for i in 0..=(n - k) {
            let value = ops.eval(&word[i..i + k]);
            if value.is_zero() {
                continue;
            }
            let negate = ops.odd() && prefix_odd[i];
            for ((m2, o), c2) in value.iter() {
                let mono = m * *m2;
                if mono.lambda >= trunc.energy {
                    continue;
                }
                let mut w = Vec::with_capacity(n + 1 - k);
                w.extend_from_slice(&word[..i]);
                w.push(*o);
                w.extend_from_slice(&word[i + k..]);
                out.add_term((mono, w), (c * c2).signed(negate));
            }
        }
    }
}

/// Concatenation product of bar elements, truncated.
pub fn tensor_bar(a: &BarElement, b: &BarElement, trunc: Truncation) -> BarElement {
    let mut out = BarElement::new();
    for ((m1, w1), c1) in a.iter() {
        for ((m2, w2), c2) in b.iter() {
            let m = *m1 * *m2;
            if m.lambda >= trunc.energy || w1.len() + w2.len() > trunc.max_len {
                continue;
            }
            let mut w = w1.clone();
            w.extend_from_slice(w2);
            out.add_term((m, w), c1 * c2);
        }
    }
    out
}

/// A chain viewed as a bar element of length one.
pub fn chain_to_bar(x: &Chain) -> BarElement {
    x.iter().map(|((m, i), c)| ((*m, vec![*i]), c.clone())).collect()
}

/// The unit `1` of the bar coalgebra.
pub fn bar_unit(field: Field) -> BarElement {
    BarElement::single((Monomial::ONE, Vec::new()), field.one())
}

/// Sum over `n` of `x^{tensor n}` (including the unit), truncated; `x`
/// must have strictly positive valuation or be zero.
pub fn exp_bar(x: &Chain, field: Field, trunc: Truncation) -> Result<BarElement> {
    if let Some(v) = valuation(x) {
        if !v.is_positive() {
            return Err(Error::invalid(
                "insertion with zero energy: the series does not converge",
            ));
        }
    }
    let letter = chain_to_bar(x);
    let mut acc = bar_unit(field);
    let mut power = bar_unit(field);
    loop {
        power = tensor_bar(&power, &letter, trunc);
        if power.is_zero() {
            return Ok(acc);
        }
        acc.add_all(&power);
    }
}

/// Applies the coalgebra map induced by a degree-0 family `f` (including
/// `f_0(1)` insertions) to a bar element.
pub fn coalgebra_extend(f: &GappedFamily, x: &BarElement, trunc: Truncation) -> Result<BarElement> {
    if f.odd() {
        return Err(Error::invalid("coalgebra maps are induced by degree-0 families"));
    }
    let f0 = f.curvature();
    let field = match x.iter().next() {
        Some((_, c)) => c.field(),
        None => return Ok(BarElement::new()),
    };
    let f0_bar = chain_to_bar(&f0);
    if let Some(v) = valuation(&f0) {
        if !v.is_positive() {
            return Err(Error::invalid(
                "f_0(1) has a zero-energy term: the induced coalgebra map diverges",
            ));
        }
    }
    let mut out = BarElement::new();
    for ((m, word), c) in x.iter() {
        let images = extend_word_hom(f, &f0_bar, word, field, trunc);
        for ((m2, w), c2) in images.iter() {
            let mono = *m * *m2;
            if mono.lambda < trunc.energy {
                out.add_term((mono, w.clone()), c * c2);
            }
        }
    }
    Ok(out)
}

/// `f^(w[p..])` for all suffixes, by `F(p) = sum_n f0^n (sum_j f_j(w[p..p+j]) F(p+j))`.
fn extend_word_hom(
    f: &GappedFamily,
    f0_bar: &BarElement,
    word: &[usize],
    field: Field,
    trunc: Truncation,
) -> BarElement {
    let n = word.len();
    let mut suffix: Vec<BarElement> = vec![BarElement::new(); n + 1];
    for p in (0..=n).rev() {
        let mut rest = if p == n { bar_unit(field) } else { BarElement::new() };
        for j in 1..=(n - p) {
            let value = f.eval(&word[p..p + j]);
            if value.is_zero() || suffix[p + j].is_zero() {
                continue;
            }
            rest.add_all(&tensor_bar(&chain_to_bar(&value), &suffix[p + j], trunc));
        }
        let mut acc = rest.clone();
        let mut power = rest;
        if !f0_bar.is_zero() {
            loop {
                power = tensor_bar(f0_bar, &power, trunc);
                if power.is_zero() {
                    break;
                }
                acc.add_all(&power);
            }
        }
        suffix[p] = acc;
    }
    suffix.swap_remove(0)
}

/// All ordered splittings of a word into `parts` consecutive (possibly
/// empty) pieces.
pub fn coproduct_split(word: &[usize], parts: usize) -> Vec<Vec<Vec<usize>>> {
    if parts == 0 {
        return if word.is_empty() { vec![vec![]] } else { vec![] };
    }
    if parts == 1 {
        return vec![vec![word.to_vec()]];
    }
    let mut out = Vec::new();
    for i in 0..=word.len() {
        for mut rest in coproduct_split(&word[i..], parts - 1) {
            rest.insert(0, word[..i].to_vec());
            out.push(rest);
        }
    }
    out
}

/// All basis words of length `k` over `n` letters, in lexicographic order.
pub fn words(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::with_capacity(out.len() * n);
        for w in &out {
            for i in 0..n {
                let mut w2 = w.clone();
                w2.push(i);
                next.push(w2);
            }
        }
        out = next;
    }
    out
}

impl fmt::Display for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (w, v) in &self.entries {
            writeln!(f, "{w:?} -> {v:?}")?;
        }
        Ok(())
    }
}
