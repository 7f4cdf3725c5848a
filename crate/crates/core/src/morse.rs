//! Discrete Morse frontend: simplicial chain complexes, acyclic matchings,
//! and the transfer data they induce.

use std::collections::{BTreeMap, BTreeSet};

use crate::ainfty::{verify_ainfty, FilteredAInfinity};
use crate::complex::{GappedFamily, GradedBasis, SparseVec};
use crate::error::{Error, Result};
use crate::linalg::{cohomology_ranks, Matrix, Reducer};
use crate::novikov::{Energy, Field, GapClass};
use crate::transfer::{transfer, CanonicalModelResult, TransferData};

/// A finite simplicial complex. Simplices are sorted vertex tuples ordered
/// by dimension and then lexicographically; orientations follow the vertex
/// order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    pub vertices: Vec<String>,
    pub simplices: Vec<Vec<usize>>,
    index: BTreeMap<Vec<usize>, usize>,
}

impl SimplicialComplex {
    pub fn new(vertices: Vec<String>, simplices: impl IntoIterator<Item = Vec<usize>>) -> Result<SimplicialComplex> {
        let names: BTreeSet<&String> = vertices.iter().collect();
        if names.len() != vertices.len() {
            return Err(Error::invalid("duplicate vertex names"));
        }
        let mut set = BTreeSet::new();
        for mut s in simplices {
            s.sort_unstable();
            if s.is_empty() || s.windows(2).any(|w| w[0] == w[1]) || s.iter().any(|&v| v >= vertices.len()) {
                return Err(Error::invalid(format!("malformed simplex {s:?}")));
            }
            set.insert(s);
        }
        for s in &set {
            if s.len() > 1 {
                for i in 0..s.len() {
                    let mut f = s.clone();
                    f.remove(i);
                    if !set.contains(&f) {
                        return Err(Error::witness(
                            "face closure",
                            format!(
                                "{} is missing its face {}",
                                name_of(&vertices, s),
                                name_of(&vertices, &f)
                            ),
                        ));
                    }
                }
            }
        }
        let mut simplices: Vec<Vec<usize>> = set.into_iter().collect();
        simplices.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let index = simplices.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Ok(SimplicialComplex {
            vertices,
            simplices,
            index,
        })
    }

    /// The closure of a list of facets.
    pub fn from_facets(vertices: Vec<String>, facets: &[Vec<usize>]) -> Result<SimplicialComplex> {
        let mut all = BTreeSet::new();
        for f in facets {
            let mut f = f.clone();
            f.sort_unstable();
            let n = f.len();
            for mask in 1..(1u64 << n) {
                all.insert(
                    (0..n)
                        .filter(|i| mask & (1 << i) != 0)
                        .map(|i| f[i])
                        .collect::<Vec<_>>(),
                );
            }
        }
        SimplicialComplex::new(vertices, all)
    }

    /// Vertices named `0 .. n-1`.
    pub fn numbered(n: usize, facets: &[Vec<usize>]) -> Result<SimplicialComplex> {
        SimplicialComplex::from_facets((0..n).map(|i| i.to_string()).collect(), facets)
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.simplices.last().map_or(0, |s| s.len() - 1)
    }

    pub fn simplex_dim(&self, i: usize) -> usize {
        self.simplices[i].len() - 1
    }

    pub fn index_of(&self, s: &[usize]) -> Option<usize> {
        let mut s = s.to_vec();
        s.sort_unstable();
        self.index.get(&s).copied()
    }

    pub fn name(&self, i: usize) -> String {
        name_of(&self.vertices, &self.simplices[i])
    }

    /// Looks up a simplex written as vertex names.
    pub fn lookup(&self, names: &[String]) -> Result<usize> {
        let vs = names
            .iter()
            .map(|n| {
                self.vertices
                    .iter()
                    .position(|v| v == n)
                    .ok_or_else(|| Error::invalid(format!("unknown vertex `{n}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        self.index_of(&vs)
            .ok_or_else(|| Error::invalid(format!("[{}] is not a simplex", names.join(","))))
    }

    /// Chain basis with the degree of a simplex `dim L - dim sigma`.
    pub fn basis(&self) -> GradedBasis {
        let top = self.dim() as i64;
        GradedBasis::new((0..self.len()).map(|i| (self.name(i), top - self.simplex_dim(i) as i64)))
            .expect("simplex names are distinct")
    }

    /// `(face index, sign)` pairs of the simplicial boundary.
    pub fn faces(&self, i: usize) -> Vec<(usize, bool)> {
        let s = &self.simplices[i];
        if s.len() == 1 {
            return Vec::new();
        }
        (0..s.len())
            .map(|k| {
                let mut f = s.clone();
                f.remove(k);
                (self.index[&f], k % 2 == 1)
            })
            .collect()
    }

    /// `(-1)^{dim L}` times the simplicial boundary, as a matrix acting on
    /// columns.
    pub fn boundary_operator(&self, field: Field) -> Matrix {
        let n = self.len();
        let global = self.dim() % 2 == 1;
        let mut d = Matrix::zeros(field, n, n);
        for i in 0..n {
            for (f, odd) in self.faces(i) {
                d.set(f, i, field.one().signed(odd ^ global));
            }
        }
        d
    }

    /// The chain complex as an algebra with only `m_1`.
    pub fn chain_algebra(&self, field: Field, energy_cutoff: Energy, arity_cutoff: usize) -> Result<FilteredAInfinity> {
        let d = self.boundary_operator(field);
        let mut ops = GappedFamily::new(1);
        for c in 0..self.len() {
            let out: SparseVec = (0..self.len())
                .filter(|&r| !d.get(r, c).is_zero())
                .map(|r| (r, d.get(r, c).clone()))
                .collect();
            if !out.is_zero() {
                ops.add_entry(1, GapClass::ZERO, vec![c], &out);
            }
        }
        FilteredAInfinity::new(field, self.basis(), ops, energy_cutoff, arity_cutoff, None, None)
    }

    /// Homology ranks indexed by simplex dimension.
    pub fn homology_ranks(&self, field: Field) -> Vec<usize> {
        let basis = self.basis();
        let ranks = cohomology_ranks(&self.boundary_operator(field), basis.degrees());
        let top = self.dim() as i64;
        (0..=self.dim())
            .map(|k| ranks.get(&(top - k as i64)).copied().unwrap_or(0))
            .collect()
    }
}

fn name_of(vertices: &[String], s: &[usize]) -> String {
    let names: Vec<&str> = s.iter().map(|&v| vertices[v].as_str()).collect();
    format!("[{}]", names.join(","))
}

/// Pairs `(face, coface)` of simplex indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradientMatching {
    pub pairs: Vec<(usize, usize)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Greedy,
}

impl GradientMatching {
    /// Checks incidences, disjointness and the absence of closed V-paths.
    pub fn new(k: &SimplicialComplex, pairs: Vec<(usize, usize)>) -> Result<GradientMatching> {
        let mut used = BTreeSet::new();
        for &(s, t) in &pairs {
            if s >= k.len() || t >= k.len() || !k.faces(t).iter().any(|&(f, _)| f == s) {
                return Err(Error::invalid(format!("({s}, {t}) is not a face-coface pair")));
            }
            if !used.insert(s) || !used.insert(t) {
                return Err(Error::invalid(format!(
                    "simplex in more than one pair: {} or {}",
                    k.name(s),
                    k.name(t)
                )));
            }
        }
        let m = GradientMatching { pairs };
        if let Some(cycle) = m.closed_path(k) {
            let names: Vec<String> = cycle.iter().map(|&i| k.name(i)).collect();
            return Err(Error::witness(
                "acyclicity",
                format!("closed V-path {}", names.join(" -> ")),
            ));
        }
        Ok(m)
    }

    /// Deterministic collapse: repeatedly pairs the first free face with
    /// its unique coface, and otherwise declares the first top-dimensional
    /// remaining simplex critical.
    pub fn greedy(k: &SimplicialComplex) -> GradientMatching {
        let n = k.len();
        let mut cofaces: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        for i in 0..n {
            for (f, _) in k.faces(i) {
                cofaces[f].insert(i);
            }
        }
        let mut alive: BTreeSet<usize> = (0..n).collect();
        let mut pairs = Vec::new();
        let remove = |x: usize, alive: &mut BTreeSet<usize>, cofaces: &mut Vec<BTreeSet<usize>>| {
            alive.remove(&x);
            for (f, _) in k.faces(x) {
                cofaces[f].remove(&x);
            }
        };
        while !alive.is_empty() {
            let free = alive.iter().copied().find(|&s| cofaces[s].len() == 1);
            match free {
                Some(s) => {
                    let t = *cofaces[s].iter().next().expect("one coface");
                    pairs.push((s, t));
                    remove(t, &mut alive, &mut cofaces);
                    remove(s, &mut alive, &mut cofaces);
                }
                None => {
                    let top = alive.iter().map(|&i| k.simplex_dim(i)).max().expect("nonempty");
                    let c = alive
                        .iter()
                        .copied()
                        .find(|&i| k.simplex_dim(i) == top)
                        .expect("nonempty");
                    remove(c, &mut alive, &mut cofaces);
                }
            }
        }
        GradientMatching { pairs }
    }

    pub fn build(k: &SimplicialComplex, strategy: Strategy) -> GradientMatching {
        match strategy {
            Strategy::Greedy => GradientMatching::greedy(k),
        }
    }

    pub fn critical(&self, k: &SimplicialComplex) -> Vec<usize> {
        let used: BTreeSet<usize> = self.pairs.iter().flat_map(|&(s, t)| [s, t]).collect();
        (0..k.len()).filter(|i| !used.contains(i)).collect()
    }

    /// A closed V-path `s_0 -> t_0 -> s_1 -> ... -> s_0`, listed as
    /// alternating faces and cofaces.
    fn closed_path(&self, k: &SimplicialComplex) -> Option<Vec<usize>> {
        let up: BTreeMap<usize, usize> = self.pairs.iter().copied().collect();
        // s -> s' when s' != s is a face of up(s) that is itself matched up
        let next = |s: usize| -> Vec<usize> {
            k.faces(up[&s])
                .into_iter()
                .map(|(f, _)| f)
                .filter(|&f| f != s && up.contains_key(&f))
                .collect()
        };
        let mut state: BTreeMap<usize, u8> = BTreeMap::new();
        for &start in up.keys() {
            if state.contains_key(&start) {
                continue;
            }
            let mut stack: Vec<(usize, Vec<usize>, usize)> = vec![(start, next(start), 0)];
            state.insert(start, 1);
            while let Some((node, succ, pos)) = stack.last_mut() {
                if *pos == succ.len() {
                    state.insert(*node, 2);
                    stack.pop();
                    continue;
                }
                let s = succ[*pos];
                *pos += 1;
                match state.get(&s) {
                    Some(1) => {
                        let from = stack.iter().position(|(x, _, _)| *x == s).expect("on the stack");
                        let mut path = Vec::new();
                        for (x, _, _) in &stack[from..] {
                            path.push(*x);
                            path.push(up[x]);
                        }
                        path.push(s);
                        return Some(path);
                    }
                    Some(_) => {}
                    None => {
                        state.insert(s, 1);
                        let succ = next(s);
                        stack.push((s, succ, 0));
                    }
                }
            }
        }
        None
    }
}

/// The chain complex of a triangulation together with transfer data onto
/// its critical simplices.
#[derive(Clone, Debug)]
pub struct MorsePackage {
    pub complex: SimplicialComplex,
    pub chains: FilteredAInfinity,
    pub critical: Vec<usize>,
    pub data: TransferData,
}

/// Cancels matched pairs in order. For an acyclic matching every matched
/// incidence stays a unit, and the result equals the V-path sums.
pub fn morse_flow_data(
    chains: &FilteredAInfinity,
    k: &SimplicialComplex,
    matching: &GradientMatching,
) -> Result<MorsePackage> {
    if chains.basis != k.basis() {
        return Err(Error::Mismatch(
            "the chain algebra does not live on this complex".into(),
        ));
    }
    let mut r = Reducer::new(&chains.differential());
    for &(s, t) in &matching.pairs {
        r.cancel(t, s)?;
    }
    let red = r.finish();
    let data = TransferData::from_reduction(chains, &red)?;
    data.check(chains)?;
    Ok(MorsePackage {
        complex: k.clone(),
        chains: chains.clone(),
        critical: red.kept,
        data,
    })
}

/// Verifies the disc operations, then transfers them to the critical
/// simplices.
pub fn morse_transfer(
    k: &SimplicialComplex,
    matching: &GradientMatching,
    disc_ops: &FilteredAInfinity,
) -> Result<(MorsePackage, CanonicalModelResult)> {
    if disc_ops.basis != k.basis() {
        return Err(Error::Mismatch(
            "disc operations do not live on the simplicial basis".into(),
        ));
    }
    if disc_ops.differential() != k.boundary_operator(disc_ops.field) {
        return Err(Error::Mismatch(
            "the energy-zero m1 of the disc operations is not the boundary operator".into(),
        ));
    }
    let report = verify_ainfty(disc_ops);
    if !report.passed() {
        return Err(Error::Verification {
            context: "disc operations".into(),
            report: Box::new(report),
        });
    }
    let disc_ops = disc_ops.clone().into_verified()?;
    let package = morse_flow_data(&disc_ops, k, matching)?;
    let out = transfer(&disc_ops, &package.data)?;
    Ok((package, out))
}

/// The hexagon triangulation of the circle.
pub fn hexagon() -> SimplicialComplex {
    let facets: Vec<Vec<usize>> = (0..6).map(|i| vec![i, (i + 1) % 6]).collect();
    SimplicialComplex::numbered(6, &facets).expect("valid")
}

/// The minimal 7-vertex triangulation of the torus.
pub fn torus7() -> SimplicialComplex {
    let mut facets = Vec::new();
    for i in 0..7 {
        facets.push(vec![i, (i + 1) % 7, (i + 3) % 7]);
        facets.push(vec![i, (i + 2) % 7, (i + 3) % 7]);
    }
    SimplicialComplex::numbered(7, &facets).expect("valid")
}

/// The minimal 6-vertex triangulation of the real projective plane.
pub fn rp2() -> SimplicialComplex {
    let facets = [
        [0, 1, 2],
        [0, 2, 3],
        [0, 3, 4],
        [0, 4, 5],
        [0, 5, 1],
        [1, 2, 4],
        [2, 3, 5],
        [3, 4, 1],
        [4, 5, 2],
        [5, 1, 3],
    ];
    let facets: Vec<Vec<usize>> = facets.iter().map(|f| f.to_vec()).collect();
    SimplicialComplex::numbered(6, &facets).expect("valid")
}

/// The full simplex on `n + 1` vertices.
pub fn simplex(n: usize) -> SimplicialComplex {
    SimplicialComplex::numbered(n + 1, &[(0..=n).collect()]).expect("valid")
}

/// The sum of top simplices with signs making it a cycle, if the complex
/// is an orientable pseudomanifold over `field`.
pub fn fundamental_cycle(k: &SimplicialComplex, field: Field) -> Option<SparseVec> {
    let d = k.boundary_operator(field);
    let top: Vec<usize> = (0..k.len()).filter(|&i| k.simplex_dim(i) == k.dim()).collect();
    let all: Vec<usize> = (0..k.len()).collect();
    let kernel = d.select(&all, &top).kernel();
    (0..kernel.cols())
        .map(|c| -> SparseVec {
            top.iter()
                .enumerate()
                .filter(|(r, _)| !kernel.get(*r, c).is_zero())
                .map(|(r, &i)| (i, kernel.get(r, c).clone()))
                .collect()
        })
        .find(|v| v.len() == top.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::Chain;
    use crate::transfer::apply_matrix;

    const Q: Field = Field::Rational;

    fn f2() -> Field {
        Field::prime(2).unwrap()
    }

    #[test]
    fn boundary_signs() {
        let k = hexagon();
        let d = k.boundary_operator(Q);
        let e = k.lookup(&["0".into(), "1".into()]).unwrap();
        let v0 = k.lookup(&["0".into()]).unwrap();
        let v1 = k.lookup(&["1".into()]).unwrap();
        assert_eq!(*d.get(v1, e), -Q.one());
        assert_eq!(*d.get(v0, e), Q.one());
        assert_eq!(d.rank(), 5);
        for k in [hexagon(), torus7(), rp2(), simplex(3)] {
            assert!(k.boundary_operator(Q).mul(&k.boundary_operator(Q)).is_zero());
        }
    }

    #[test]
    fn face_closure_is_enforced() {
        let err = SimplicialComplex::new(vec!["a".into(), "b".into()], [vec![0, 1], vec![0]]).unwrap_err();
        assert!(err.to_string().contains("[b]"), "{err}");
    }

    #[test]
    fn homology() {
        assert_eq!(hexagon().homology_ranks(Q), vec![1, 1]);
        assert_eq!(torus7().homology_ranks(Q), vec![1, 2, 1]);
        assert_eq!(rp2().homology_ranks(Q), vec![1, 0, 0]);
        assert_eq!(rp2().homology_ranks(f2()), vec![1, 1, 1]);
        assert_eq!(simplex(2).homology_ranks(Q), vec![1, 0, 0]);
    }

    #[test]
    fn greedy_counts() {
        let k = hexagon();
        let m = GradientMatching::greedy(&k);
        let crit = m.critical(&k);
        assert_eq!(crit.iter().map(|&i| k.simplex_dim(i)).collect::<Vec<_>>(), vec![0, 1]);
        let s = simplex(2);
        assert_eq!(GradientMatching::greedy(&s).critical(&s).len(), 1);
        for k in [torus7(), rp2()] {
            let m = GradientMatching::greedy(&k);
            assert_eq!(GradientMatching::new(&k, m.pairs.clone()).unwrap(), m);
        }
    }

    #[test]
    fn cyclic_matching_is_rejected() {
        let k = hexagon();
        let v = |i: usize| k.lookup(&[i.to_string()]).unwrap();
        let e = |i: usize, j: usize| k.lookup(&[i.to_string(), j.to_string()]).unwrap();
        let pairs: Vec<(usize, usize)> = (0..6).map(|i| (v(i), e(i, (i + 1) % 6))).collect();
        let err = GradientMatching::new(&k, pairs).unwrap_err().to_string();
        assert!(err.contains("closed V-path"), "{err}");
    }

    #[test]
    fn flow_data_on_test_complexes() {
        for (k, field, ranks) in [
            (hexagon(), Q, vec![1, 1]),
            (torus7(), Q, vec![1, 2, 1]),
            (rp2(), Q, vec![1, 0, 0]),
            (rp2(), f2(), vec![1, 1, 1]),
        ] {
            let a = k.chain_algebra(field, Energy::int(1), 3).unwrap();
            let m = GradientMatching::greedy(&k);
            let pkg = morse_flow_data(&a, &k, &m).unwrap();
            let crit = m.critical(&k);
            assert_eq!(pkg.critical, crit);
            assert!(crit.len() >= ranks.iter().sum::<usize>());
            let n = a.dim();
            let t = &pkg.data;
            assert!(t.g.mul(&t.g).is_zero());
            assert!(t.proj.mul(&t.g).is_zero());
            assert!(t.g.mul(&t.iota).is_zero());
            assert_eq!(t.p.mul(&t.iota), Matrix::identity(field, crit.len()));
            let d = a.differential();
            assert_eq!(
                Matrix::identity(field, n).sub(&t.proj),
                d.mul(&t.g).add(&t.g.mul(&d)).neg()
            );
            let dm = t.p.mul(&d).mul(&t.iota);
            let got = cohomology_ranks(&dm, t.basis.degrees());
            let top = k.dim() as i64;
            let got: Vec<usize> = (0..=k.dim())
                .map(|j| got.get(&(top - j as i64)).copied().unwrap_or(0))
                .collect();
            assert_eq!(got, ranks);
        }
    }

    #[test]
    fn projection_fixes_critical_cells() {
        let k = hexagon();
        let a = k.chain_algebra(Q, Energy::int(1), 3).unwrap();
        let m = GradientMatching::greedy(&k);
        let pkg = morse_flow_data(&a, &k, &m).unwrap();
        for (j, &c) in pkg.critical.iter().enumerate() {
            for r in 0..pkg.critical.len() {
                let expect = if r == j { Q.one() } else { Q.zero() };
                assert_eq!(*pkg.data.p.get(r, c), expect);
            }
            assert_eq!(pkg.data.basis.name(j), k.name(c));
        }
    }

    #[test]
    fn maslov_two_disc_on_the_circle() {
        let k = hexagon();
        let cutoff = Energy::int(3);
        let base = k.chain_algebra(Q, cutoff, 3).unwrap();
        let cycle = fundamental_cycle(&k, Q).unwrap();
        let c = Q.from_i64(3);
        let beta = GapClass::new(Energy::int(1), 2).unwrap();
        let mut ops = base.ops.clone();
        ops.add_entry(0, beta, vec![], &cycle.scaled(&c));
        let disc = FilteredAInfinity::new(Q, base.basis.clone(), ops, cutoff, 3, None, None).unwrap();
        let m = GradientMatching::greedy(&k);
        let (pkg, out) = morse_transfer(&k, &m, &disc).unwrap();
        assert_eq!(out.model.dim(), 2);
        let lifted: Chain = cycle.iter().map(|(&i, x)| ((beta.monomial(), i), x * &c)).collect();
        let expected = apply_matrix(&pkg.data.p, &lifted);
        assert_eq!(out.model.curvature(), expected);
        assert!(!expected.is_zero());

        let mut bad = disc.ops.clone();
        let edge = k.lookup(&["0".into(), "1".into()]).unwrap();
        bad.add_entry(1, beta, vec![0], &SparseVec::single(edge, Q.one()));
        let wrong = FilteredAInfinity::new(Q, base.basis.clone(), bad, cutoff, 3, None, None).unwrap();
        let err = morse_transfer(&k, &m, &wrong).unwrap_err();
        assert!(matches!(err, Error::Verification { .. }), "{err}");
    }
}
