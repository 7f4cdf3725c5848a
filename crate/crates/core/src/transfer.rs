//! Homotopy transfer to a sub-complex: decorated planar rooted trees, their
//! evaluation, assembly of the transferred structure and the comparison
//! homomorphism, and a per-tree ledger.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::ainfty::{verify_ainfty, verify_homomorphism, AInfinityHom, Exactness, FilteredAInfinity};
use crate::complex::{words, Chain, GappedFamily, GradedBasis, SparseVec, Tensor};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Reduction};
use crate::novikov::{Energy, GapClass, Monomial};
use crate::report::Report;

/// Inclusion of a sub-complex with a projection and a homotopy:
/// `id - proj = -(m1 g + g m1)`, `g g = 0`, `proj g = 0`, `g iota = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferData {
    pub basis: GradedBasis,
    /// `dim C x dim H`.
    pub iota: Matrix,
    /// Idempotent on `C` with image spanned by `iota`.
    pub proj: Matrix,
    /// `dim H x dim C`, with `iota p = proj`.
    pub p: Matrix,
    /// Degree `-1` endomorphism of `C`.
    pub g: Matrix,
}

fn check_degrees(m: &Matrix, rows: &GradedBasis, cols: &GradedBasis, shift: i64, what: &str) -> Result<()> {
    for c in 0..m.cols() {
        for r in 0..m.rows() {
            if !m.get(r, c).is_zero() && rows.degree(r) != cols.degree(c) + shift {
                return Err(Error::witness(
                    format!("degree of {what}"),
                    format!("{} -> {}", cols.name(c), rows.name(r)),
                ));
            }
        }
    }
    Ok(())
}

fn first_difference(a: &Matrix, b: &Matrix, basis: &GradedBasis, what: &str) -> Result<()> {
    for c in 0..a.cols() {
        for r in 0..a.rows() {
            if a.get(r, c) != b.get(r, c) {
                return Err(Error::witness(
                    what,
                    format!("degree {}, element {}", basis.degree(c), basis.name(c)),
                ));
            }
        }
    }
    Ok(())
}

impl TransferData {
    /// Checks every invariant against the energy-zero differential of `a`.
    pub fn check(&self, a: &FilteredAInfinity) -> Result<()> {
        let c = &a.basis;
        let (n, h) = (c.len(), self.basis.len());
        let field = a.field;
        if self.iota.rows() != n || self.iota.cols() != h || self.proj.rows() != n || self.proj.cols() != n {
            return Err(Error::Mismatch("transfer matrices do not match the complex".into()));
        }
        if self.g.rows() != n || self.g.cols() != n || self.p.rows() != h || self.p.cols() != n {
            return Err(Error::Mismatch("transfer matrices do not match the complex".into()));
        }
        check_degrees(&self.iota, c, &self.basis, 0, "the inclusion")?;
        check_degrees(&self.proj, c, c, 0, "the projection")?;
        check_degrees(&self.g, c, c, -1, "the homotopy")?;
        if self.iota.rank() != h {
            return Err(Error::invalid("the sub-basis is linearly dependent"));
        }
        first_difference(&self.proj.mul(&self.proj), &self.proj, c, "projection idempotence")?;
        first_difference(&self.iota.mul(&self.p), &self.proj, c, "projection factorization")?;
        if self.p.mul(&self.iota) != Matrix::identity(field, h) {
            return Err(Error::invalid("the projection does not fix the sub-complex"));
        }
        let d = a.differential();
        if self.iota.solve(&d.mul(&self.iota)).is_none() {
            return Err(Error::invalid("the sub-basis does not span a sub-complex"));
        }
        let id = Matrix::identity(field, n);
        let lhs = id.sub(&self.proj);
        let rhs = d.mul(&self.g).add(&self.g.mul(&d)).neg();
        first_difference(&lhs, &rhs, c, "homotopy identity")?;
        first_difference(&self.g.mul(&self.g), &Matrix::zeros(field, n, n), c, "g g = 0")?;
        first_difference(&self.proj.mul(&self.g), &Matrix::zeros(field, n, n), c, "proj g = 0")?;
        if !self.g.mul(&self.iota).is_zero() {
            return Err(Error::invalid("g iota = 0 fails"));
        }
        Ok(())
    }

    /// Transfer data from a cancellation of the energy-zero differential.
    pub fn from_reduction(a: &FilteredAInfinity, red: &Reduction) -> Result<TransferData> {
        let basis = GradedBasis::new(
            red.kept
                .iter()
                .map(|&i| (a.basis.name(i).to_string(), a.basis.degree(i))),
        )?;
        let t = TransferData {
            basis,
            proj: red.iota.mul(&red.proj),
            iota: red.iota.clone(),
            p: red.proj.clone(),
            g: red.homotopy.neg(),
        };
        t.check(a)?;
        Ok(t)
    }

    /// `H = C`, `proj = id`, `g = 0`.
    pub fn trivial(a: &FilteredAInfinity) -> TransferData {
        let n = a.dim();
        let id = Matrix::identity(a.field, n);
        TransferData {
            basis: a.basis.clone(),
            iota: id.clone(),
            proj: id.clone(),
            p: id,
            g: Matrix::zeros(a.field, n, n),
        }
    }
}

/// Checks the homotopy identity for `g_raw` and replaces it with
/// `-(g' m1 g')`, `g' = (1 - proj) g_raw (1 - proj)`, which also satisfies
/// the side conditions.
pub fn normalize_homotopy(
    a: &FilteredAInfinity,
    basis: GradedBasis,
    iota: Matrix,
    proj: Matrix,
    g_raw: Matrix,
) -> Result<TransferData> {
    let c = &a.basis;
    let n = c.len();
    let field = a.field;
    if iota.rows() != n
        || iota.cols() != basis.len()
        || proj.rows() != n
        || proj.cols() != n
        || g_raw.rows() != n
        || g_raw.cols() != n
    {
        return Err(Error::Mismatch("transfer matrices do not match the complex".into()));
    }
    let d = a.differential();
    let id = Matrix::identity(field, n);
    let lhs = id.sub(&proj);
    let rhs = d.mul(&g_raw).add(&g_raw.mul(&d)).neg();
    first_difference(&lhs, &rhs, c, "homotopy identity")?;
    let p = iota
        .solve(&proj)
        .ok_or_else(|| Error::invalid("the projection does not land in the sub-complex"))?;
    let q = id.sub(&proj);
    let g1 = q.mul(&g_raw).mul(&q);
    let g = g1.mul(&d).mul(&g1).neg();
    let t = TransferData {
        basis,
        iota,
        proj,
        p,
        g,
    };
    t.check(a)?;
    Ok(t)
}

/// A planar rooted tree with energy levels on interior vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Leaf,
    Vertex { level: usize, children: Vec<Arc<Node>> },
}

impl Node {
    pub fn leaves(&self) -> usize {
        match self {
            Node::Leaf => 1,
            Node::Vertex { children, .. } => children.iter().map(|c| c.leaves()).sum(),
        }
    }

    pub fn energy(&self, levels: &[Energy]) -> Energy {
        match self {
            Node::Leaf => Energy::ZERO,
            Node::Vertex { level, children } => children.iter().fold(levels[*level], |e, c| e + c.energy(levels)),
        }
    }

    pub fn vertices(&self) -> usize {
        match self {
            Node::Leaf => 0,
            Node::Vertex { children, .. } => 1 + children.iter().map(|c| c.vertices()).sum::<usize>(),
        }
    }

    /// Parses the identifier produced by `Display`.
    pub fn parse(s: &str) -> Result<Node> {
        let bytes = s.as_bytes();
        let (node, used) = parse_node(bytes, 0).ok_or_else(|| Error::invalid(format!("malformed tree `{s}`")))?;
        if used != bytes.len() {
            return Err(Error::invalid(format!("malformed tree `{s}`")));
        }
        Ok(node)
    }
}

fn parse_node(b: &[u8], at: usize) -> Option<(Node, usize)> {
    if b.get(at) == Some(&b'L') {
        return Some((Node::Leaf, at + 1));
    }
    let mut end = at;
    while end < b.len() && b[end].is_ascii_digit() {
        end += 1;
    }
    let level: usize = std::str::from_utf8(&b[at..end]).ok()?.parse().ok()?;
    if b.get(end) != Some(&b'(') {
        return None;
    }
    let mut pos = end + 1;
    let mut children = Vec::new();
    if b.get(pos) == Some(&b')') {
        return Some((Node::Vertex { level, children }, pos + 1));
    }
    loop {
        let (child, next) = parse_node(b, pos)?;
        children.push(Arc::new(child));
        match b.get(next) {
            Some(b',') => pos = next + 1,
            Some(b')') => return Some((Node::Vertex { level, children }, next + 1)),
            _ => return None,
        }
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Leaf => write!(f, "L"),
            Node::Vertex { level, children } => {
                write!(f, "{level}(")?;
                for (i, c) in children.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecoratedTree {
    pub root: Arc<Node>,
    pub id: String,
    pub leaves: usize,
    pub energy: Energy,
}

impl DecoratedTree {
    fn new(root: Arc<Node>, levels: &[Energy]) -> DecoratedTree {
        DecoratedTree {
            id: root.to_string(),
            leaves: root.leaves(),
            energy: root.energy(levels),
            root,
        }
    }
}

struct Enumerator<'a> {
    levels: &'a [Energy],
    cutoff: Energy,
    arity_cutoff: usize,
    allowed: &'a dyn Fn(usize, usize) -> bool,
    memo: HashMap<(usize, Energy), Vec<(Arc<Node>, Energy)>>,
}

impl Enumerator<'_> {
    /// Subtrees with `k` leaves and energy below `budget`; a bare leaf only
    /// when `k = 1`.
    fn trees(&mut self, k: usize, budget: Energy) -> Vec<(Arc<Node>, Energy)> {
        if let Some(v) = self.memo.get(&(k, budget)) {
            return v.clone();
        }
        let mut out = Vec::new();
        if k == 1 {
            out.push((Arc::new(Node::Leaf), Energy::ZERO));
        }
        for (level, &lambda) in self.levels.iter().enumerate() {
            if lambda >= budget {
                break;
            }
            for arity in 0..=self.arity_cutoff {
                if arity < 2 && level == 0 || !(self.allowed)(arity, level) {
                    continue;
                }
                for kids in self.children(arity, k, budget - lambda) {
                    let e = kids.iter().fold(lambda, |e, (_, x)| e + *x);
                    let children = kids.into_iter().map(|(n, _)| n).collect();
                    out.push((Arc::new(Node::Vertex { level, children }), e));
                }
            }
        }
        self.memo.insert((k, budget), out.clone());
        out
    }

    /// Ordered lists of `slots` subtrees with `k` leaves in total and energy
    /// below `budget`. Leafless subtrees cost at least the smallest positive
    /// level, which is reserved before recursing so the recursion shrinks.
    fn children(&mut self, slots: usize, k: usize, budget: Energy) -> Vec<Vec<(Arc<Node>, Energy)>> {
        if slots == 0 {
            return if k == 0 { vec![Vec::new()] } else { Vec::new() };
        }
        let mut out = Vec::new();
        for first_k in 0..=k {
            let empty_rest = (slots - 1).saturating_sub(k - first_k);
            let reserve = match (empty_rest, self.levels.get(1)) {
                (0, _) => Energy::ZERO,
                (n, Some(l)) => l.times(n as i64),
                (_, None) => continue,
            };
            if first_k == 0 && self.levels.len() < 2 || reserve >= budget {
                continue;
            }
            let firsts = self.trees(first_k, budget - reserve);
            for (node, e) in firsts {
                for mut rest in self.children(slots - 1, k - first_k, budget - e) {
                    rest.insert(0, (node.clone(), e));
                    out.push(rest);
                }
            }
        }
        out
    }
}

/// Trees with `k` leaves, energy below the cutoff, interior vertices with
/// at most `arity_cutoff` children, and positive level on every vertex with
/// fewer than two children. `allowed(arity, level)` prunes vertex types.
pub fn enumerate_trees_with(
    k: usize,
    levels: &[Energy],
    energy_cutoff: Energy,
    arity_cutoff: usize,
    allowed: &dyn Fn(usize, usize) -> bool,
) -> Vec<DecoratedTree> {
    let mut en = Enumerator {
        levels,
        cutoff: energy_cutoff,
        arity_cutoff,
        allowed,
        memo: HashMap::new(),
    };
    let cutoff = en.cutoff;
    let mut out: Vec<DecoratedTree> = en
        .trees(k, cutoff)
        .into_iter()
        .map(|(n, _)| DecoratedTree::new(n, levels))
        .collect();
    out.sort_by(|a, b| (a.energy, &a.id).cmp(&(b.energy, &b.id)));
    out
}

pub fn enumerate_trees(k: usize, levels: &[Energy], energy_cutoff: Energy, arity_cutoff: usize) -> Vec<DecoratedTree> {
    enumerate_trees_with(k, levels, energy_cutoff, arity_cutoff, &|_, _| true)
}

/// `m` applied to a chain.
pub fn apply_matrix(m: &Matrix, x: &Chain) -> Chain {
    let mut out = Chain::new();
    for ((mono, i), c) in x.iter() {
        for r in 0..m.rows() {
            let e = m.get(r, *i);
            if !e.is_zero() {
                out.add_term((*mono, r), c * e);
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Root applies the projection, giving a transferred operation.
    Operation,
    /// Root applies the homotopy, giving a homomorphism component.
    Homomorphism,
}

/// Vertex operations grouped by arity and level.
struct VertexOps<'a> {
    by_level: BTreeMap<(usize, usize), Vec<(GapClass, &'a Tensor)>>,
}

impl<'a> VertexOps<'a> {
    fn new(a: &'a FilteredAInfinity) -> VertexOps<'a> {
        let mut by_level: BTreeMap<(usize, usize), Vec<(GapClass, &Tensor)>> = BTreeMap::new();
        for (k, beta, t) in a.ops.iter() {
            let level = a.monoid.level_of(beta.lambda).expect("class in monoid");
            by_level.entry((k, level)).or_default().push((*beta, t));
        }
        VertexOps { by_level }
    }

    fn has(&self, arity: usize, level: usize) -> bool {
        self.by_level.contains_key(&(arity, level))
    }

    fn apply(&self, arity: usize, level: usize, args: &[&Chain]) -> Chain {
        let mut out = Chain::new();
        if let Some(list) = self.by_level.get(&(arity, level)) {
            for (beta, t) in list {
                out.add_all(&t.apply_chains(args, beta.monomial()));
            }
        }
        out
    }
}

struct TreeEval<'a> {
    ops: &'a VertexOps<'a>,
    data: &'a TransferData,
    word: &'a [usize],
    cache: HashMap<(*const Node, usize), Chain>,
}

impl TreeEval<'_> {
    /// Value of a subtree on the letters starting at `start`, seen as an
    /// interior subtree (root edge carries `g`, a leaf is the inclusion).
    fn inner(&mut self, node: &Arc<Node>, start: usize) -> Chain {
        let key = (Arc::as_ptr(node), start);
        if let Some(v) = self.cache.get(&key) {
            return v.clone();
        }
        let v = match node.as_ref() {
            Node::Leaf => {
                let x = self.word[start];
                (0..self.data.iota.rows())
                    .filter(|&r| !self.data.iota.get(r, x).is_zero())
                    .map(|r| ((Monomial::ONE, r), self.data.iota.get(r, x).clone()))
                    .collect()
            }
            Node::Vertex { .. } => apply_matrix(&self.data.g, &self.vertex(node, start)),
        };
        self.cache.insert(key, v.clone());
        v
    }

    fn vertex(&mut self, node: &Arc<Node>, start: usize) -> Chain {
        let Node::Vertex { level, children } = node.as_ref() else {
            unreachable!()
        };
        let mut args = Vec::with_capacity(children.len());
        let mut pos = start;
        for c in children {
            args.push(self.inner(c, pos));
            pos += c.leaves();
        }
        let refs: Vec<&Chain> = args.iter().collect();
        self.ops.apply(children.len(), *level, &refs)
    }
}

/// Evaluates one tree on a word of the sub-basis. Outputs live in `H` for
/// [`Mode::Operation`] and in `C` for [`Mode::Homomorphism`].
pub fn eval_tree(
    tree: &DecoratedTree,
    word: &[usize],
    data: &TransferData,
    a: &FilteredAInfinity,
    mode: Mode,
) -> Result<Chain> {
    if word.len() != tree.leaves {
        return Err(Error::invalid(format!(
            "tree {} has {} leaves but the word has {} letters",
            tree.id,
            tree.leaves,
            word.len()
        )));
    }
    let ops = VertexOps::new(a);
    let mut ev = TreeEval {
        ops: &ops,
        data,
        word,
        cache: HashMap::new(),
    };
    Ok(root_value(&mut ev, tree, a, mode))
}

fn root_value(ev: &mut TreeEval, tree: &DecoratedTree, a: &FilteredAInfinity, mode: Mode) -> Chain {
    match (tree.root.as_ref(), mode) {
        (Node::Leaf, Mode::Homomorphism) => ev.inner(&tree.root, 0),
        (Node::Leaf, Mode::Operation) => {
            let x = ev.inner(&tree.root, 0);
            let mut m1 = Chain::new();
            if let Some(t) = a.ops.get(1, &GapClass::ZERO) {
                m1 = t.apply_chains(&[&x], Monomial::ONE);
            }
            apply_matrix(&ev.data.p, &m1)
        }
        (Node::Vertex { .. }, Mode::Operation) => apply_matrix(&ev.data.p, &ev.vertex(&tree.root, 0)),
        (Node::Vertex { .. }, Mode::Homomorphism) => ev.inner(&tree.root, 0),
    }
}

/// Contributions of one tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LedgerEntry {
    pub tree: String,
    pub leaves: usize,
    pub energy: Energy,
    /// Nonzero values of the transferred operation, per input word.
    pub operation: Vec<(Vec<usize>, Chain)>,
    /// Nonzero values of the homomorphism component, per input word.
    pub homomorphism: Vec<(Vec<usize>, Chain)>,
}

#[derive(Clone, Debug)]
pub struct CanonicalModelResult {
    pub model: FilteredAInfinity,
    pub hom: AInfinityHom,
    pub ledger: Vec<LedgerEntry>,
}

fn add_chain(family: &mut GappedFamily, k: usize, word: &[usize], x: &Chain) {
    for ((m, o), c) in x.iter() {
        family.add_entry(k, m.class(), word.to_vec(), &SparseVec::single(*o, c.clone()));
    }
}

/// Transfers without verifying the output.
pub fn transfer_unverified(a: &FilteredAInfinity, data: &TransferData) -> Result<CanonicalModelResult> {
    data.check(a)?;
    let big_k = a.arity_cutoff;
    let levels = a.monoid.levels().to_vec();
    let ops = VertexOps::new(a);
    let allowed = |arity: usize, level: usize| ops.has(arity, level);
    let smallest = levels.get(1).copied();
    let known: Vec<Energy> = (0..=big_k)
        .map(|k| {
            a.exactness
                .insertion_horizon(k, smallest, true)
                .map_or(a.energy_cutoff, |h| h.min(a.energy_cutoff))
        })
        .collect();

    let mut m_fam = GappedFamily::new(1);
    let mut f_fam = GappedFamily::new(0);
    let mut ledger = Vec::new();
    let h = data.basis.len();
    for k in 0..=big_k {
        let trees = enumerate_trees_with(k, &levels, a.energy_cutoff, big_k, &allowed);
        let ws = words(h, k);
        let per_word: Vec<Vec<(Chain, Chain)>> = ws
            .par_iter()
            .map(|w| {
                let mut ev = TreeEval {
                    ops: &ops,
                    data,
                    word: w,
                    cache: HashMap::new(),
                };
                trees
                    .iter()
                    .map(|t| {
                        (
                            root_value(&mut ev, t, a, Mode::Operation),
                            root_value(&mut ev, t, a, Mode::Homomorphism),
                        )
                    })
                    .collect()
            })
            .collect();
        for (ti, t) in trees.iter().enumerate() {
            let mut entry = LedgerEntry {
                tree: t.id.clone(),
                leaves: k,
                energy: t.energy,
                operation: Vec::new(),
                homomorphism: Vec::new(),
            };
            for (w, vals) in ws.iter().zip(&per_word) {
                let (mv, fv) = &vals[ti];
                if !mv.is_zero() {
                    add_chain(&mut m_fam, k, w, mv);
                    entry.operation.push((w.clone(), mv.clone()));
                }
                if !fv.is_zero() {
                    add_chain(&mut f_fam, k, w, fv);
                    entry.homomorphism.push((w.clone(), fv.clone()));
                }
            }
            if !entry.operation.is_empty() || !entry.homomorphism.is_empty() {
                ledger.push(entry);
            }
        }
    }
    let exactness = Exactness {
        known_below: known,
        tail_zero: false,
    };
    let monoid = a.monoid.clone();
    let model = FilteredAInfinity::new(
        a.field,
        data.basis.clone(),
        m_fam,
        a.energy_cutoff,
        big_k,
        Some(monoid),
        Some(exactness.clone()),
    )?;
    let hom = AInfinityHom::new(f_fam, exactness)?;
    Ok(CanonicalModelResult { model, hom, ledger })
}

/// Transfers and verifies both the transferred relations and the
/// homomorphism relations; any residual is an error.
pub fn transfer(a: &FilteredAInfinity, data: &TransferData) -> Result<CanonicalModelResult> {
    let mut out = transfer_unverified(a, data)?;
    let (ra, rh) = verify_transfer(&out, a)?;
    for (context, r) in [("transferred A-infinity relations", ra), ("transfer homomorphism", rh)] {
        if !r.passed() {
            return Err(Error::Verification {
                context: context.into(),
                report: Box::new(r),
            });
        }
    }
    out.model.mark_verified();
    Ok(out)
}

pub fn verify_transfer(out: &CanonicalModelResult, a: &FilteredAInfinity) -> Result<(Report, Report)> {
    Ok((verify_ainfty(&out.model), verify_homomorphism(&out.hom, &out.model, a)?))
}

/// Direct formulas for the transferred operations of an unfiltered algebra
/// in arities up to three, written without trees:
/// `m'_1 = p m1 i`, `m'_2 = p m2(i, i)`,
/// `m'_3 = p (m3(i, i, i) + m2(g m2(i, i), i) + m2(i, g m2(i, i)))`.
pub fn oracle_transfer_low_arity(a: &FilteredAInfinity, data: &TransferData, k: usize) -> Result<Tensor> {
    if k > 3 {
        return Err(Error::invalid("the direct formulas only cover arities up to 3"));
    }
    if a.ops.iter().any(|(_, b, _)| !b.is_zero()) {
        return Err(Error::invalid("the direct formulas need an unfiltered algebra"));
    }
    let n = a.dim();
    let h = data.basis.len();
    let f = a.field;
    let col =
        |m: &Matrix, c: usize| -> Vec<crate::novikov::Scalar> { (0..m.rows()).map(|r| m.get(r, c).clone()).collect() };
    let op = |arity: usize, args: &[Vec<crate::novikov::Scalar>]| -> Vec<crate::novikov::Scalar> {
        let mut out = vec![f.zero(); n];
        if let Some(t) = a.ops.get(arity, &GapClass::ZERO) {
            for (w, v) in t.entries() {
                let mut coeff = f.one();
                for (j, &i) in w.iter().enumerate() {
                    coeff = &coeff * &args[j][i];
                    if coeff.is_zero() {
                        break;
                    }
                }
                if coeff.is_zero() {
                    continue;
                }
                for (&o, c) in v.iter() {
                    out[o] = &out[o] + &(&coeff * c);
                }
            }
        }
        out
    };
    let mut t = Tensor::new();
    for w in words(h, k) {
        let ins: Vec<_> = w.iter().map(|&x| col(&data.iota, x)).collect();
        let mut total = op(k, &ins);
        if k == 3 {
            let g_ab = data.g.apply(&op(2, &ins[0..2]));
            let g_bc = data.g.apply(&op(2, &ins[1..3]));
            let left = op(2, &[g_ab, ins[2].clone()]);
            let right = op(2, &[ins[0].clone(), g_bc]);
            for i in 0..n {
                total[i] = &(&total[i] + &left[i]) + &right[i];
            }
        }
        let out = data.p.apply(&total);
        for (o, c) in out.into_iter().enumerate() {
            if !c.is_zero() {
                t.add_term(w.clone(), o, c);
            }
        }
    }
    Ok(t)
}

/// Human-readable listing of one tree's configuration: input cells, the
/// operation class at each vertex, the homotopy on interior edges, and the
/// output.
pub fn trace_configuration(
    ledger: &[LedgerEntry],
    tree: &str,
    inputs: &[usize],
    out: &CanonicalModelResult,
    a: &FilteredAInfinity,
) -> Result<String> {
    let entry = ledger
        .iter()
        .find(|e| e.tree == tree)
        .ok_or_else(|| Error::Missing(format!("tree {tree} is not in the ledger")))?;
    let node = Node::parse(tree)?;
    if inputs.len() != entry.leaves {
        return Err(Error::invalid(format!(
            "tree {tree} takes {} inputs, got {}",
            entry.leaves,
            inputs.len()
        )));
    }
    let h = &out.model.basis;
    let names: Vec<&str> = inputs.iter().map(|&i| h.name(i)).collect();
    let mut lines = vec![format!(
        "tree {tree}: weight T^{} ({} interior vertices)",
        entry.energy,
        node.vertices()
    )];
    lines.push(format!("inputs: {}", names.join(", ")));
    let mut leaf = 0;
    describe(&node, 1, a, &names, &mut leaf, true, &mut lines);
    let value = entry
        .operation
        .iter()
        .find(|(w, _)| w == inputs)
        .map(|(_, c)| crate::complex::format_chain(c, h))
        .unwrap_or_else(|| "0".into());
    lines.push(format!("output: {value}"));
    Ok(lines.join("\n"))
}

fn describe(
    node: &Node,
    depth: usize,
    a: &FilteredAInfinity,
    names: &[&str],
    leaf: &mut usize,
    root: bool,
    lines: &mut Vec<String>,
) {
    let pad = "  ".repeat(depth);
    match node {
        Node::Leaf if root => {
            lines.push(format!("{pad}{} -> energy-zero m1 -> projection", names[0]));
        }
        Node::Leaf => {
            lines.push(format!("{pad}leaf {} (inclusion)", names[*leaf]));
            *leaf += 1;
        }
        Node::Vertex { level, children } => {
            let lambda = a.monoid.levels()[*level];
            let classes: Vec<String> = a
                .ops
                .at_arity(children.len())
                .filter(|(b, _)| b.lambda == lambda)
                .map(|(b, _)| b.to_string())
                .collect();
            let after = if root {
                "projection"
            } else {
                "homotopy g along the edge"
            };
            lines.push(format!(
                "{pad}vertex m_{} at energy {} (classes {}) then {after}",
                children.len(),
                lambda,
                classes.join(" ")
            ));
            for c in children {
                describe(c, depth + 1, a, names, leaf, false, lines);
            }
        }
    }
}
