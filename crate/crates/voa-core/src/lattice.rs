//! Even positive-definite lattices and their symmetry machinery: exact short
//! vector enumeration, root systems, reflection and orthogonal groups as
//! finite integer matrix groups, coset decompositions, ADE classification,
//! and the root datum attached to a lattice.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{rational_rank, IntMatrix, RatMatrix};

/// Default ceiling on group closure and enumeration sizes. Exceeding it is a
/// resource condition, reported as `Error::CapExceeded`.
pub const DEFAULT_GROUP_CAP: usize = 1_000_000;

/// Integer coordinate vector in the basis the Gram matrix is written in.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct LatticeVector(pub Vec<i64>);

impl LatticeVector {
    pub fn zero(rank: usize) -> Self {
        LatticeVector(vec![0; rank])
    }

    pub fn basis(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        LatticeVector(v)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        LatticeVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn neg(&self) -> Self {
        LatticeVector(self.0.iter().map(|a| -a).collect())
    }

    pub fn add_scaled(&self, k: i64, other: &Self) -> Self {
        LatticeVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + k * b)
                .collect(),
        )
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", x)?;
        }
        write!(f, ")")
    }
}

/// Even positive-definite lattice presented by its Gram matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Lattice {
    rank: usize,
    gram: IntMatrix,
}

impl Lattice {
    /// Validates symmetry, even diagonal, and positive definiteness.
    pub fn new(gram_rows: &[Vec<i64>]) -> Result<Self> {
        let gram = IntMatrix::from_rows(gram_rows)
            .map_err(|_| Error::InvalidLattice("Gram matrix must be square".into()))?;
        let n = gram.n;
        if n == 0 {
            return Err(Error::InvalidLattice("rank must be positive".into()));
        }
        for i in 0..n {
            for j in 0..n {
                if gram.at(i, j) != gram.at(j, i) {
                    return Err(Error::InvalidLattice(format!(
                        "Gram matrix is not symmetric at ({},{})",
                        i, j
                    )));
                }
            }
            if gram.at(i, i) % 2 != 0 {
                return Err(Error::InvalidLattice(format!(
                    "diagonal entry {} at ({},{}) is odd; the lattice must be even",
                    gram.at(i, i),
                    i,
                    i
                )));
            }
        }
        // Positive definiteness via leading principal minors.
        for k in 1..=n {
            let sub: Vec<Vec<i64>> = (0..k)
                .map(|i| (0..k).map(|j| gram.at(i, j)).collect())
                .collect();
            let d = IntMatrix::from_rows(&sub).unwrap().det();
            if d <= BigInt::zero() {
                return Err(Error::InvalidLattice(format!(
                    "leading {}x{} minor is {} (not positive); the form is not positive definite",
                    k, k, d
                )));
            }
        }
        Ok(Lattice { rank: n, gram })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn det(&self) -> BigInt {
        self.gram.det()
    }

    pub fn gram_inverse(&self) -> RatMatrix {
        self.gram
            .to_rational()
            .inverse()
            .expect("positive-definite Gram matrix is invertible")
    }

    pub fn inner(&self, x: &LatticeVector, y: &LatticeVector) -> i64 {
        assert_eq!(x.rank(), self.rank, "vector rank mismatch");
        assert_eq!(y.rank(), self.rank, "vector rank mismatch");
        let mut acc: i128 = 0;
        for i in 0..self.rank {
            for j in 0..self.rank {
                acc += x.0[i] as i128 * self.gram.at(i, j) as i128 * y.0[j] as i128;
            }
        }
        i64::try_from(acc).expect("inner product overflow")
    }

    /// Pairing of the i-th basis vector against y; a row of G applied to y.
    pub fn inner_basis(&self, i: usize, y: &LatticeVector) -> i64 {
        let mut acc: i128 = 0;
        for j in 0..self.rank {
            acc += self.gram.at(i, j) as i128 * y.0[j] as i128;
        }
        i64::try_from(acc).expect("inner product overflow")
    }

    pub fn norm(&self, x: &LatticeVector) -> i64 {
        self.inner(x, x)
    }

    /// Half the norm; integral because the lattice is even.
    pub fn half_norm(&self, x: &LatticeVector) -> i64 {
        let n = self.norm(x);
        debug_assert_eq!(n % 2, 0);
        n / 2
    }

    /// All nonzero vectors of norm at most `max_norm`, in lexicographic
    /// order. Exact rational Cholesky bounds prune the search; no floating
    /// point is involved.
    pub fn short_vectors(&self, max_norm: i64) -> Vec<LatticeVector> {
        if max_norm <= 0 {
            return Vec::new();
        }
        let n = self.rank;
        // Q(x) = sum_i d_i (x_i + sum_{j>i} u_{ij} x_j)^2.
        let mut a = self.gram.to_rational();
        let mut d = vec![BigRational::zero(); n];
        let mut u = RatMatrix::zero(n);
        for i in 0..n {
            let di = a.at(i, i).clone();
            assert!(di > BigRational::zero());
            for j in i + 1..n {
                u.set(i, j, a.at(i, j) / &di);
            }
            for j in i + 1..n {
                for k in i + 1..n {
                    let v = a.at(j, k) - a.at(j, i) * a.at(i, k) / &di;
                    a.set(j, k, v);
                }
            }
            d[i] = di;
        }

        let bound = BigRational::from_integer(BigInt::from(max_norm));
        let mut out: Vec<LatticeVector> = Vec::new();
        let mut x = vec![0i64; n];
        // Depth-first from the last coordinate; `budget` is what remains of
        // the bound after the outer levels are fixed.
        fn descend(
            level: isize,
            budget: &BigRational,
            x: &mut Vec<i64>,
            d: &[BigRational],
            u: &RatMatrix,
            out: &mut Vec<LatticeVector>,
        ) {
            if level < 0 {
                if x.iter().any(|&c| c != 0) {
                    out.push(LatticeVector(x.clone()));
                }
                return;
            }
            let i = level as usize;
            let n = x.len();
            let mut center = BigRational::zero();
            for j in i + 1..n {
                center += u.at(i, j) * BigRational::from_integer(BigInt::from(x[j]));
            }
            // |x_i + center|^2 <= budget / d_i; enumerate candidates around
            // -center using an integer square-root overestimate.
            let radius2 = budget / &d[i];
            let m = radius2.to_integer().sqrt() + BigInt::one();
            let c_floor = (-&center).floor().to_integer();
            let lo = i64::try_from(&c_floor - &m).expect("enumeration bound overflow");
            let hi =
                i64::try_from(&c_floor + &m + BigInt::one()).expect("enumeration bound overflow");
            for t in lo..=hi {
                let off = BigRational::from_integer(BigInt::from(t)) + &center;
                let used = &d[i] * &off * &off;
                if used <= *budget {
                    x[i] = t;
                    let next_budget = budget - used;
                    descend(level - 1, &next_budget, x, d, u, out);
                    x[i] = 0;
                }
            }
        }
        descend(n as isize - 1, &bound, &mut x, &d, &u, &mut out);
        for v in &out {
            debug_assert!(self.norm(v) <= max_norm && !v.is_zero());
        }
        out.sort();
        out
    }

    /// Norm-2 vectors.
    pub fn roots(&self) -> Vec<LatticeVector> {
        self.short_vectors(2)
            .into_iter()
            .filter(|v| self.norm(v) == 2)
            .collect()
    }

    /// Reflection in a norm-2 vector: x -> x - <x,a> a. Integral exactly
    /// because the norm is 2.
    pub fn reflection(&self, a: &LatticeVector) -> Result<IntMatrix> {
        let norm = self.norm(a);
        if norm != 2 {
            return Err(Error::NotARoot(norm));
        }
        let n = self.rank;
        let mut m = IntMatrix::identity(n);
        for j in 0..n {
            let pair = self.inner_basis(j, a);
            for i in 0..n {
                let v = m.at(i, j) - pair * a.0[i];
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    pub fn weyl_group(&self, cap: usize) -> Result<IntegerMatrixGroup> {
        let mut gens = Vec::new();
        let mut seen = HashSet::new();
        for a in self.roots() {
            let s = self.reflection(&a)?;
            if seen.insert(s.clone()) {
                gens.push(s);
            }
        }
        IntegerMatrixGroup::closure(self.rank, gens, cap)
    }

    /// Full orthogonal group by backtracking over images of the basis,
    /// pruned by matching norms and pairwise inner products.
    pub fn orthogonal_group(&self, cap: usize) -> Result<IntegerMatrixGroup> {
        let n = self.rank;
        let max_diag = (0..n).map(|i| self.gram.at(i, i)).max().unwrap();
        let pool = self.short_vectors(max_diag);
        let candidates: Vec<Vec<&LatticeVector>> = (0..n)
            .map(|j| {
                pool.iter()
                    .filter(|v| self.norm(v) == self.gram.at(j, j))
                    .collect()
            })
            .collect();
        let mut elements = Vec::new();
        let mut chosen: Vec<&LatticeVector> = Vec::new();
        self.assign_images(&candidates, &mut chosen, &mut elements, cap)?;
        elements.sort();
        let gens = elements.clone();
        Ok(IntegerMatrixGroup::from_elements(elements, gens))
    }

    fn assign_images<'a>(
        &self,
        candidates: &[Vec<&'a LatticeVector>],
        chosen: &mut Vec<&'a LatticeVector>,
        out: &mut Vec<IntMatrix>,
        cap: usize,
    ) -> Result<()> {
        let j = chosen.len();
        if j == self.rank {
            let mut m = IntMatrix::zero(self.rank);
            for (col, v) in chosen.iter().enumerate() {
                for row in 0..self.rank {
                    m.set(row, col, v.0[row]);
                }
            }
            debug_assert_eq!(m.transpose().mul(self.gram()).mul(&m), *self.gram());
            out.push(m);
            if out.len() > cap {
                return Err(Error::CapExceeded { cap });
            }
            return Ok(());
        }
        'cand: for v in &candidates[j] {
            for (i, w) in chosen.iter().enumerate() {
                if self.inner(w, v) != self.gram.at(i, j) {
                    continue 'cand;
                }
            }
            chosen.push(v);
            self.assign_images(candidates, chosen, out, cap)?;
            chosen.pop();
        }
        Ok(())
    }

    /// Inverse of an orthogonal matrix: G^{-1} M^T G, integral for M in O(L).
    pub fn orthogonal_inverse(&self, m: &IntMatrix) -> IntMatrix {
        self.gram_inverse()
            .mul(&m.transpose().to_rational())
            .mul(&self.gram.to_rational())
            .to_integer()
    }

    /// Representatives of the right cosets of the reflection group inside the
    /// orthogonal group, deterministic (first representative in sorted order).
    pub fn outer_classes(
        &self,
        weyl: &IntegerMatrixGroup,
        orth: &IntegerMatrixGroup,
    ) -> Vec<IntMatrix> {
        let mut reps: Vec<IntMatrix> = Vec::new();
        'outer: for g in &orth.elements {
            for r in &reps {
                let r_inv = self.orthogonal_inverse(r);
                if weyl.contains(&g.mul(&r_inv)) {
                    continue 'outer;
                }
            }
            reps.push(g.clone());
        }
        assert_eq!(
            reps.len() * weyl.order(),
            orth.order(),
            "coset decomposition must tile the group"
        );
        reps
    }

    pub fn root_datum(&self) -> Result<RootDatum> {
        let roots = self.roots();
        let root_set: HashSet<&LatticeVector> = roots.iter().collect();
        for a in &roots {
            // Coroot identified with the root itself (norm 2), so <a, a*> = 2
            // is the norm; reflections must permute the root set; the system
            // must be reduced.
            let s = self.reflection(a)?;
            for b in &roots {
                let img = LatticeVector(s.apply(&b.0));
                if !root_set.contains(&img) {
                    return Err(Error::InvalidLattice(format!(
                        "reflection in {} does not preserve the root set",
                        a
                    )));
                }
            }
            for b in &roots {
                if b != a && *b != a.neg() {
                    let parallel = (0..self.rank)
                        .flat_map(|i| (0..self.rank).map(move |j| (i, j)))
                        .all(|(i, j)| a.0[i] * b.0[j] == a.0[j] * b.0[i]);
                    if parallel {
                        return Err(Error::InvalidLattice("root system is not reduced".into()));
                    }
                }
            }
        }
        let rows: Vec<Vec<BigRational>> = roots
            .iter()
            .map(|a| {
                a.0.iter()
                    .map(|&c| BigRational::from_integer(BigInt::from(c)))
                    .collect()
            })
            .collect();
        let semisimple = rational_rank(rows) == self.rank;
        Ok(RootDatum {
            rank: self.rank,
            roots,
            coroot_gram_inverse: self.gram_inverse(),
            semisimple,
        })
    }

    /// ADE decomposition of the root system via a simple system extracted
    /// with the lexicographic positivity convention.
    pub fn cartan_type(&self) -> Result<Vec<CartanComponent>> {
        let roots = self.roots();
        let positive: Vec<&LatticeVector> = roots
            .iter()
            .filter(|v| {
                v.0.iter()
                    .find(|&&c| c != 0)
                    .map(|&c| c > 0)
                    .unwrap_or(false)
            })
            .collect();
        let pos_set: HashSet<&LatticeVector> = positive.iter().copied().collect();
        let simple: Vec<&LatticeVector> = positive
            .iter()
            .filter(|&&a| {
                // Simple iff not a sum of two positive roots.
                !positive.iter().any(|&b| {
                    if b == a {
                        return false;
                    }
                    let diff = a.add(&b.neg());
                    pos_set.contains(&diff)
                })
            })
            .copied()
            .collect();
        let k = simple.len();
        if k == 0 {
            return Ok(Vec::new());
        }
        let mut adj = vec![Vec::new(); k];
        for i in 0..k {
            for j in i + 1..k {
                let p = self.inner(simple[i], simple[j]);
                if !(p == 0 || p == -1) {
                    return Err(Error::InvalidLattice(format!(
                        "simple roots pair to {}; expected 0 or -1",
                        p
                    )));
                }
                if p == -1 {
                    adj[i].push(j);
                    adj[j].push(i);
                }
            }
        }
        let mut seen = vec![false; k];
        let mut comps = Vec::new();
        for start in 0..k {
            if seen[start] {
                continue;
            }
            let mut stack = vec![start];
            let mut comp = Vec::new();
            seen[start] = true;
            while let Some(v) = stack.pop() {
                comp.push(v);
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            comps.push(classify_component(&comp, &adj)?);
        }
        comps.sort();
        Ok(comps)
    }
}

/// Root datum attached to the lattice: characters are the lattice itself,
/// roots the norm-2 vectors, cocharacters the dual lattice presented by the
/// inverse Gram matrix, and coroots identified with the roots (valid exactly
/// because every root has norm 2).
#[derive(Clone, Debug)]
pub struct RootDatum {
    pub rank: usize,
    pub roots: Vec<LatticeVector>,
    pub coroot_gram_inverse: RatMatrix,
    pub semisimple: bool,
}

/// One irreducible factor of the ADE decomposition.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, serde::Serialize)]
pub struct CartanComponent {
    pub family: char,
    pub rank: usize,
}

impl fmt::Display for CartanComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

pub fn cartan_type_string(comps: &[CartanComponent]) -> String {
    if comps.is_empty() {
        return "trivial".to_string();
    }
    comps
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join("+")
}

fn classify_component(nodes: &[usize], adj: &[Vec<usize>]) -> Result<CartanComponent> {
    let n = nodes.len();
    let degree = |v: usize| adj[v].iter().filter(|w| nodes.contains(w)).count();
    let degrees: Vec<usize> = nodes.iter().map(|&v| degree(v)).collect();
    let edges: usize = degrees.iter().sum::<usize>() / 2;
    if edges != n - 1 {
        return Err(Error::InvalidLattice(
            "Dynkin graph component has a cycle".into(),
        ));
    }
    if degrees.iter().all(|&d| d <= 2) {
        return Ok(CartanComponent {
            family: 'A',
            rank: n,
        });
    }
    let branch_nodes: Vec<usize> = nodes.iter().copied().filter(|&v| degree(v) >= 3).collect();
    if branch_nodes.len() != 1 || degree(branch_nodes[0]) != 3 {
        return Err(Error::InvalidLattice(
            "Dynkin graph is not of ADE shape".into(),
        ));
    }
    let center = branch_nodes[0];
    let mut lengths: Vec<usize> = adj[center]
        .iter()
        .map(|&start| {
            let mut len = 1;
            let mut prev = center;
            let mut cur = start;
            loop {
                let next: Vec<usize> = adj[cur].iter().copied().filter(|&w| w != prev).collect();
                match next.len() {
                    0 => break,
                    1 => {
                        prev = cur;
                        cur = next[0];
                        len += 1;
                    }
                    _ => unreachable!("second branch point already excluded"),
                }
            }
            len
        })
        .collect();
    lengths.sort();
    let comp = match (lengths[0], lengths[1], lengths[2]) {
        (1, 1, c) => CartanComponent {
            family: 'D',
            rank: c + 3,
        },
        (1, 2, 2) => CartanComponent {
            family: 'E',
            rank: 6,
        },
        (1, 2, 3) => CartanComponent {
            family: 'E',
            rank: 7,
        },
        (1, 2, 4) => CartanComponent {
            family: 'E',
            rank: 8,
        },
        _ => {
            return Err(Error::InvalidLattice(
                "Dynkin graph is not of ADE shape".into(),
            ))
        }
    };
    assert_eq!(comp.rank, n);
    Ok(comp)
}

/// Finite group of integer matrices with constant-time membership.
#[derive(Clone, Debug)]
pub struct IntegerMatrixGroup {
    pub elements: Vec<IntMatrix>,
    index: HashSet<IntMatrix>,
    pub generators: Vec<IntMatrix>,
}

impl IntegerMatrixGroup {
    pub fn from_elements(elements: Vec<IntMatrix>, generators: Vec<IntMatrix>) -> Self {
        let index = elements.iter().cloned().collect();
        IntegerMatrixGroup {
            elements,
            index,
            generators,
        }
    }

    /// Breadth-first closure under multiplication. Finiteness comes from the
    /// cap; every element of a finite group of invertible matrices has its
    /// inverse among its own powers, so closure under products suffices.
    pub fn closure(rank: usize, generators: Vec<IntMatrix>, cap: usize) -> Result<Self> {
        let mut index: HashSet<IntMatrix> = HashSet::new();
        let mut elements = Vec::new();
        let mut queue = std::collections::VecDeque::new();
        let id = IntMatrix::identity(rank);
        index.insert(id.clone());
        elements.push(id.clone());
        queue.push_back(id);
        while let Some(m) = queue.pop_front() {
            for g in &generators {
                let next = m.mul(g);
                if index.insert(next.clone()) {
                    if elements.len() + 1 > cap {
                        return Err(Error::CapExceeded { cap });
                    }
                    elements.push(next.clone());
                    queue.push_back(next);
                }
            }
        }
        elements.sort();
        Ok(IntegerMatrixGroup {
            elements,
            index,
            generators,
        })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, m: &IntMatrix) -> bool {
        self.index.contains(m)
    }
}

/// Gram matrices of the built-in test lattices.
pub mod presets {
    use super::Lattice;
    use crate::error::{Error, Result};

    pub const NAMES: [&str; 5] = ["A1", "A2", "A1A1", "D4", "E8"];

    pub fn gram_rows(name: &str) -> Result<Vec<Vec<i64>>> {
        Ok(match name {
            "A1" => vec![vec![2]],
            "A2" => vec![vec![2, -1], vec![-1, 2]],
            "A1A1" => vec![vec![2, 0], vec![0, 2]],
            "D4" => vec![
                vec![2, -1, 0, 0],
                vec![-1, 2, -1, -1],
                vec![0, -1, 2, 0],
                vec![0, -1, 0, 2],
            ],
            "E8" => vec![
                vec![2, 0, -1, 0, 0, 0, 0, 0],
                vec![0, 2, 0, -1, 0, 0, 0, 0],
                vec![-1, 0, 2, -1, 0, 0, 0, 0],
                vec![0, -1, -1, 2, -1, 0, 0, 0],
                vec![0, 0, 0, -1, 2, -1, 0, 0],
                vec![0, 0, 0, 0, -1, 2, -1, 0],
                vec![0, 0, 0, 0, 0, -1, 2, -1],
                vec![0, 0, 0, 0, 0, 0, -1, 2],
            ],
            _ => {
                return Err(Error::InvalidLattice(format!(
                    "unknown preset {:?} (expected A1, A2, A1A1, D4, or E8)",
                    name
                )))
            }
        })
    }

    pub fn lattice(name: &str) -> Result<Lattice> {
        Lattice::new(&gram_rows(name)?)
    }
}

#[cfg(test)]
mod tests {
    use super::presets;
    use super::*;

    fn lv(coords: &[i64]) -> LatticeVector {
        LatticeVector(coords.to_vec())
    }

    #[test]
    fn rejects_bad_gram_matrices() {
        assert!(Lattice::new(&[vec![1]]).is_err()); // odd diagonal
        assert!(Lattice::new(&[vec![2, 3], vec![3, 2]]).is_err()); // not positive definite
        assert!(Lattice::new(&[vec![2, 1], vec![0, 2]]).is_err()); // not symmetric
        assert!(Lattice::new(&[vec![0]]).is_err()); // degenerate
    }

    #[test]
    fn inner_products() {
        let a2 = presets::lattice("A2").unwrap();
        assert_eq!(a2.inner(&lv(&[1, 0]), &lv(&[0, 1])), -1);
        assert_eq!(a2.norm(&lv(&[1, 1])), 2);
        let a1 = presets::lattice("A1").unwrap();
        assert_eq!(a1.norm(&lv(&[3])), 18);
    }

    #[test]
    fn short_vectors_of_a1() {
        let a1 = presets::lattice("A1").unwrap();
        assert_eq!(a1.short_vectors(2), vec![lv(&[-1]), lv(&[1])]);
        assert_eq!(a1.short_vectors(8).len(), 4); // +-1, +-2
        assert!(a1.short_vectors(1).is_empty());
    }

    #[test]
    fn root_counts() {
        assert_eq!(presets::lattice("A1").unwrap().roots().len(), 2);
        assert_eq!(presets::lattice("A2").unwrap().roots().len(), 6);
        assert_eq!(presets::lattice("A1A1").unwrap().roots().len(), 4);
        assert_eq!(presets::lattice("D4").unwrap().roots().len(), 24);
        assert_eq!(presets::lattice("E8").unwrap().roots().len(), 240);
    }

    #[test]
    fn short_vector_enumeration_matches_box_scan() {
        // Independent check on A2: scan a crude coordinate box.
        let a2 = presets::lattice("A2").unwrap();
        for bound in [2i64, 6, 12] {
            let mut expect = Vec::new();
            for x in -6i64..=6 {
                for y in -6i64..=6 {
                    let v = lv(&[x, y]);
                    if !v.is_zero() && a2.norm(&v) <= bound {
                        expect.push(v);
                    }
                }
            }
            expect.sort();
            assert_eq!(a2.short_vectors(bound), expect, "bound {}", bound);
        }
    }

    #[test]
    fn reflection_matrices() {
        let a1 = presets::lattice("A1").unwrap();
        let s = a1.reflection(&lv(&[1])).unwrap();
        assert_eq!(s, IntMatrix::from_rows(&[vec![-1]]).unwrap());

        let a2 = presets::lattice("A2").unwrap();
        let s = a2.reflection(&lv(&[1, 1])).unwrap();
        assert_eq!(
            s,
            IntMatrix::from_rows(&[vec![0, -1], vec![-1, 0]]).unwrap()
        );
        assert!(s.mul(&s).is_identity());
        // Gram preservation.
        assert_eq!(s.transpose().mul(a2.gram()).mul(&s), *a2.gram());

        assert!(matches!(
            a2.reflection(&lv(&[2, 2])),
            Err(Error::NotARoot(8))
        ));
    }

    #[test]
    fn weyl_group_orders() {
        let cap = DEFAULT_GROUP_CAP;
        assert_eq!(
            presets::lattice("A1")
                .unwrap()
                .weyl_group(cap)
                .unwrap()
                .order(),
            2
        );
        assert_eq!(
            presets::lattice("A2")
                .unwrap()
                .weyl_group(cap)
                .unwrap()
                .order(),
            6
        );
        assert_eq!(
            presets::lattice("A1A1")
                .unwrap()
                .weyl_group(cap)
                .unwrap()
                .order(),
            4
        );
        assert_eq!(
            presets::lattice("D4")
                .unwrap()
                .weyl_group(cap)
                .unwrap()
                .order(),
            192
        );
    }

    #[test]
    fn weyl_closure_cap_is_enforced() {
        let d4 = presets::lattice("D4").unwrap();
        assert!(matches!(
            d4.weyl_group(100),
            Err(Error::CapExceeded { cap: 100 })
        ));
    }

    #[test]
    fn orthogonal_group_orders() {
        let cap = DEFAULT_GROUP_CAP;
        assert_eq!(
            presets::lattice("A1")
                .unwrap()
                .orthogonal_group(cap)
                .unwrap()
                .order(),
            2
        );
        assert_eq!(
            presets::lattice("A2")
                .unwrap()
                .orthogonal_group(cap)
                .unwrap()
                .order(),
            12
        );
        assert_eq!(
            presets::lattice("A1A1")
                .unwrap()
                .orthogonal_group(cap)
                .unwrap()
                .order(),
            8
        );
    }

    #[test]
    fn orthogonal_group_matches_brute_force_on_rank_two() {
        let a2 = presets::lattice("A2").unwrap();
        let mut brute = Vec::new();
        let range = -2i64..=2;
        for a in range.clone() {
            for b in range.clone() {
                for c in range.clone() {
                    for d in range.clone() {
                        let m = IntMatrix::from_rows(&[vec![a, b], vec![c, d]]).unwrap();
                        if m.transpose().mul(a2.gram()).mul(&m) == *a2.gram() {
                            brute.push(m);
                        }
                    }
                }
            }
        }
        brute.sort();
        let got = a2.orthogonal_group(DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(got.elements, brute);
    }

    #[test]
    fn weyl_group_sits_inside_orthogonal_group() {
        for name in ["A1", "A2", "A1A1", "D4"] {
            let l = presets::lattice(name).unwrap();
            let w = l.weyl_group(DEFAULT_GROUP_CAP).unwrap();
            let o = l.orthogonal_group(DEFAULT_GROUP_CAP).unwrap();
            assert!(w.elements.iter().all(|m| o.contains(m)), "{}", name);
        }
    }

    #[test]
    fn outer_class_counts() {
        for (name, expect) in [("A1", 1), ("A2", 2), ("A1A1", 2), ("D4", 6)] {
            let l = presets::lattice(name).unwrap();
            let w = l.weyl_group(DEFAULT_GROUP_CAP).unwrap();
            let o = l.orthogonal_group(DEFAULT_GROUP_CAP).unwrap();
            assert_eq!(l.outer_classes(&w, &o).len(), expect, "{}", name);
        }
    }

    #[test]
    fn cartan_types() {
        let t = |name: &str| {
            cartan_type_string(&presets::lattice(name).unwrap().cartan_type().unwrap())
        };
        assert_eq!(t("A1"), "A1");
        assert_eq!(t("A2"), "A2");
        assert_eq!(t("A1A1"), "A1+A1");
        assert_eq!(t("D4"), "D4");
        assert_eq!(t("E8"), "E8");
        let no_roots = Lattice::new(&[vec![4]]).unwrap();
        assert_eq!(
            cartan_type_string(&no_roots.cartan_type().unwrap()),
            "trivial"
        );
    }

    #[test]
    fn root_datum_invariants() {
        let a2 = presets::lattice("A2").unwrap();
        let rd = a2.root_datum().unwrap();
        assert_eq!(rd.roots.len(), 6);
        assert!(rd.semisimple);
        // <x, a*> = <x, a> under the norm-2 identification of coroots.
        for a in &rd.roots {
            assert_eq!(a2.inner(a, a), 2);
        }

        // A1 + a norm-4 line: root datum exists but is not semisimple.
        let mixed = Lattice::new(&[vec![2, 0], vec![0, 4]]).unwrap();
        let rd = mixed.root_datum().unwrap();
        assert_eq!(rd.roots.len(), 2);
        assert!(!rd.semisimple);
    }

    #[test]
    fn preset_determinants() {
        assert_eq!(presets::lattice("A2").unwrap().det(), BigInt::from(3));
        assert_eq!(presets::lattice("D4").unwrap().det(), BigInt::from(4));
        assert_eq!(presets::lattice("E8").unwrap().det(), BigInt::from(1));
    }
}
