//! The Fock-space model underlying the lattice vertex algebra: monomial
//! states indexed by a lattice point and a multiset of creation modes,
//! sparse rational vectors over those states, Heisenberg operators, the
//! exponential creation polynomials, graded dimensions, and the integral
//! form membership test.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lattice::{Lattice, LatticeVector};
use crate::linalg::{echelon_contains, int_echelon};
use crate::ring::{Ring, RingElement};

pub(crate) fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Monomial state: a product of creation modes applied to the lowest-weight
/// vector of one lattice point. `modes` holds (depth, basis index) pairs with
/// depth >= 1, kept sorted; the multiset determines the state because
/// creation operators commute.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct FockState {
    pub lattice_point: LatticeVector,
    pub modes: Vec<(u32, u32)>,
}

impl FockState {
    pub fn lowest(lattice_point: LatticeVector) -> Self {
        FockState {
            lattice_point,
            modes: Vec::new(),
        }
    }

    pub fn vacuum(rank: usize) -> Self {
        Self::lowest(LatticeVector::zero(rank))
    }

    pub fn mode_depth_sum(&self) -> i64 {
        self.modes.iter().map(|&(n, _)| n as i64).sum()
    }

    pub fn max_mode_depth(&self) -> u32 {
        self.modes.iter().map(|&(n, _)| n).max().unwrap_or(0)
    }

    pub fn weight(&self, lattice: &Lattice) -> i64 {
        lattice.half_norm(&self.lattice_point) + self.mode_depth_sum()
    }

    fn with_mode(&self, depth: u32, index: u32) -> Self {
        let mut modes = self.modes.clone();
        let pos = modes.partition_point(|&m| m <= (depth, index));
        modes.insert(pos, (depth, index));
        FockState {
            lattice_point: self.lattice_point.clone(),
            modes,
        }
    }

    fn without_mode_at(&self, pos: usize) -> Self {
        let mut modes = self.modes.clone();
        modes.remove(pos);
        FockState {
            lattice_point: self.lattice_point.clone(),
            modes,
        }
    }
}

impl fmt::Display for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut i = 0;
        while i < self.modes.len() {
            let (n, idx) = self.modes[i];
            let mut mult = 1;
            while i + mult < self.modes.len() && self.modes[i + mult] == (n, idx) {
                mult += 1;
            }
            write!(f, "a{}(-{})", idx + 1, n)?;
            if mult > 1 {
                write!(f, "^{}", mult)?;
            }
            write!(f, " ")?;
            i += mult;
        }
        write!(f, "e{}", self.lattice_point)
    }
}

/// Sparse rational linear combination of monomial states. The map is ordered,
/// so iteration (and printing) is canonical.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Default)]
pub struct FockVector {
    pub terms: BTreeMap<FockState, BigRational>,
}

impl FockVector {
    pub fn zero() -> Self {
        FockVector {
            terms: BTreeMap::new(),
        }
    }

    pub fn from_state(s: FockState) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(s, BigRational::one());
        FockVector { terms }
    }

    pub fn vacuum(rank: usize) -> Self {
        Self::from_state(FockState::vacuum(rank))
    }

    pub fn lowest(lattice_point: LatticeVector) -> Self {
        Self::from_state(FockState::lowest(lattice_point))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, s: FockState, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self
            .terms
            .entry(s.clone())
            .or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&s);
        }
    }

    pub fn add_scaled(&mut self, other: &FockVector, c: &BigRational) {
        if c.is_zero() {
            return;
        }
        for (s, x) in &other.terms {
            self.add_term(s.clone(), x * c);
        }
    }

    pub fn add(&self, other: &FockVector) -> FockVector {
        let mut out = self.clone();
        out.add_scaled(other, &BigRational::one());
        out
    }

    pub fn sub(&self, other: &FockVector) -> FockVector {
        let mut out = self.clone();
        out.add_scaled(other, &rat(-1));
        out
    }

    pub fn scale(&self, c: &BigRational) -> FockVector {
        let mut out = FockVector::zero();
        out.add_scaled(self, c);
        out
    }

    /// Largest weight among the terms, or None for the zero vector.
    pub fn top_weight(&self, lattice: &Lattice) -> Option<i64> {
        self.terms.keys().map(|s| s.weight(lattice)).max()
    }

    /// All terms share one (lattice point, weight) bidegree?
    pub fn bidegree(&self, lattice: &Lattice) -> Option<(LatticeVector, i64)> {
        let mut it = self.terms.keys();
        let first = it.next()?;
        let bd = (first.lattice_point.clone(), first.weight(lattice));
        for s in it {
            if s.lattice_point != bd.0 || s.weight(lattice) != bd.1 {
                return None;
            }
        }
        Some(bd)
    }

    /// Reduces every coefficient into the ring; errors if a denominator is
    /// not invertible there.
    pub fn specialize(&self, ring: &Ring) -> Result<BTreeMap<FockState, RingElement>> {
        let mut out = BTreeMap::new();
        for (s, c) in &self.terms {
            let v = ring.from_rational(c)?;
            if !ring.is_zero(&v) {
                out.insert(s.clone(), v);
            }
        }
        Ok(out)
    }
}

impl fmt::Display for FockVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (s, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({}) {}", c, s)?;
        }
        Ok(())
    }
}

/// Creation operator for a single basis direction: appends the mode (n, i).
pub fn create_basis(i: u32, n: u32, v: &FockVector) -> FockVector {
    assert!(n >= 1);
    let mut out = FockVector::zero();
    for (s, c) in &v.terms {
        out.add_term(s.with_mode(n, i), c.clone());
    }
    out
}

/// Annihilation operator for a basis direction at positive depth n: contracts
/// each matching mode with the factor n <alpha_i, alpha_j> coming from the
/// Heisenberg commutation rule.
pub fn annihilate_basis(lattice: &Lattice, i: u32, n: u32, v: &FockVector) -> FockVector {
    assert!(n >= 1);
    let mut out = FockVector::zero();
    for (s, c) in &v.terms {
        let mut pos = 0;
        while pos < s.modes.len() {
            let (depth, j) = s.modes[pos];
            if depth == n {
                let factor = rat(n as i64 * lattice.gram().at(i as usize, j as usize));
                out.add_term(s.without_mode_at(pos), c * factor);
            }
            pos += 1;
        }
    }
    out
}

/// Heisenberg operator b(n) for a rational vector b (coordinates in the
/// lattice basis): creation for n < 0, the pairing <b, lattice point> for
/// n = 0, contraction for n > 0.
pub fn apply_heisenberg(
    lattice: &Lattice,
    b: &[BigRational],
    n: i64,
    v: &FockVector,
) -> FockVector {
    assert_eq!(b.len(), lattice.rank());
    let mut out = FockVector::zero();
    if n < 0 {
        let depth = u32::try_from(-n).expect("mode depth overflow");
        for (i, coeff) in b.iter().enumerate() {
            if !coeff.is_zero() {
                out.add_scaled(&create_basis(i as u32, depth, v), coeff);
            }
        }
    } else if n == 0 {
        for (s, c) in &v.terms {
            let mut pairing = BigRational::zero();
            for (i, coeff) in b.iter().enumerate() {
                pairing += coeff * rat(lattice.inner_basis(i, &s.lattice_point));
            }
            out.add_term(s.clone(), c * pairing);
        }
    } else {
        let depth = u32::try_from(n).unwrap();
        for (i, coeff) in b.iter().enumerate() {
            if !coeff.is_zero() {
                out.add_scaled(&annihilate_basis(lattice, i as u32, depth, v), coeff);
            }
        }
    }
    out
}

/// Integer-vector convenience wrapper around `apply_heisenberg`.
pub fn apply_heisenberg_int(
    lattice: &Lattice,
    a: &LatticeVector,
    n: i64,
    v: &FockVector,
) -> FockVector {
    let b: Vec<BigRational> = a.0.iter().map(|&c| rat(c)).collect();
    apply_heisenberg(lattice, &b, n, v)
}

/// Partitions of n as (part, multiplicity) lists with parts descending.
pub(crate) fn partitions(n: u32) -> Vec<Vec<(u32, u32)>> {
    fn rec(
        remaining: u32,
        max_part: u32,
        current: &mut Vec<(u32, u32)>,
        out: &mut Vec<Vec<(u32, u32)>>,
    ) {
        if remaining == 0 {
            out.push(current.clone());
            return;
        }
        for part in (1..=max_part.min(remaining)).rev() {
            for mult in (1..=remaining / part).rev() {
                current.push((part, mult));
                rec(remaining - part * mult, part - 1, current, out);
                current.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// Degree-n coefficient of the exponential of the creation half of a lattice
/// vector's field: sum over partitions mu of n of
/// prod_k a(-k)^{m_k} / (m_k! k^{m_k}), applied to v.
pub fn apply_s(lattice: &Lattice, a: &LatticeVector, n: u32, v: &FockVector) -> FockVector {
    if n == 0 {
        return v.clone();
    }
    let mut out = FockVector::zero();
    for partition in partitions(n) {
        let mut term = v.clone();
        let mut denom = BigInt::one();
        for &(k, mult) in &partition {
            for _ in 0..mult {
                term = apply_heisenberg_int(lattice, a, -(k as i64), &term);
            }
            let mut fact = BigInt::one();
            for f in 1..=mult as i64 {
                fact *= BigInt::from(f);
            }
            denom *= fact * BigInt::from(k as i64).pow(mult);
        }
        out.add_scaled(&term, &BigRational::new(BigInt::one(), denom));
    }
    out
}

/// All monomial states of the given lattice point and total weight.
pub fn graded_states(
    lattice: &Lattice,
    lattice_point: &LatticeVector,
    weight: i64,
) -> Vec<FockState> {
    let m = weight - lattice.half_norm(lattice_point);
    if m < 0 {
        return Vec::new();
    }
    // Multisets of (depth, index) pairs with total depth m: walk a fixed
    // pair list, never stepping backwards, repeats allowed.
    let mut pairs = Vec::new();
    for depth in 1..=m as u32 {
        for index in 0..lattice.rank() as u32 {
            pairs.push((depth, index));
        }
    }
    fn rec(
        pairs: &[(u32, u32)],
        start: usize,
        remaining: u32,
        current: &mut Vec<(u32, u32)>,
        out: &mut Vec<Vec<(u32, u32)>>,
    ) {
        if remaining == 0 {
            out.push(current.clone());
            return;
        }
        for k in start..pairs.len() {
            if pairs[k].0 <= remaining {
                current.push(pairs[k]);
                rec(pairs, k, remaining - pairs[k].0, current, out);
                current.pop();
            }
        }
    }
    let mut multisets = Vec::new();
    rec(&pairs, 0, m as u32, &mut Vec::new(), &mut multisets);
    let mut out = Vec::new();
    for mut modes in multisets {
        modes.sort();
        out.push(FockState {
            lattice_point: lattice_point.clone(),
            modes,
        });
    }
    out.sort();
    out
}

/// Lattice points of half-norm at most `max`, zero included, sorted.
pub fn lattice_points_up_to(lattice: &Lattice, max_half_norm: i64) -> Vec<LatticeVector> {
    let mut pts = vec![LatticeVector::zero(lattice.rank())];
    pts.extend(lattice.short_vectors(2 * max_half_norm));
    pts.sort();
    pts
}

/// Counts of lattice points by half-norm, up to `max` inclusive.
pub fn theta_counts(lattice: &Lattice, max: i64) -> Vec<BigUint> {
    let mut counts = vec![BigUint::zero(); (max + 1) as usize];
    counts[0] = BigUint::one();
    for v in lattice.short_vectors(2 * max) {
        let m = lattice.half_norm(&v);
        if m <= max {
            counts[m as usize] += BigUint::one();
        }
    }
    counts
}

/// Partition counts with `colors` colors: coefficients of
/// prod_{k>=1} (1 - q^k)^{-colors} through degree `max`.
pub fn colored_partition_counts(colors: usize, max: i64) -> Vec<BigUint> {
    let max = max as usize;
    let mut dp = vec![BigUint::zero(); max + 1];
    dp[0] = BigUint::one();
    for _ in 0..colors {
        for k in 1..=max {
            for t in k..=max {
                let add = dp[t - k].clone();
                dp[t] += add;
            }
        }
    }
    dp
}

/// Dimension of the weight-`weight` piece by the theta-series/partition
/// convolution. This route never enumerates monomial states, so it serves as
/// an independent oracle for the basis enumeration.
pub fn graded_dimension(lattice: &Lattice, weight: i64) -> BigUint {
    assert!(weight >= 0);
    let theta = theta_counts(lattice, weight);
    let parts = colored_partition_counts(lattice.rank(), weight);
    let mut acc = BigUint::zero();
    for m in 0..=weight {
        acc += &theta[m as usize] * &parts[(weight - m) as usize];
    }
    acc
}

/// Default composition-depth bound for the integral-form spanning set.
pub fn default_zform_depth(weight: i64) -> usize {
    (2 * weight.max(1)) as usize
}

/// Spanning vectors of the integral form at one bidegree: all composites of
/// exponential creation coefficients s_{a,n} applied to the lowest-weight
/// vector, with the direction vectors drawn from the signed basis and the
/// lattice point itself, total degree matching the weight, and at most
/// `depth_bound` factors.
pub fn zform_spanning_set(
    lattice: &Lattice,
    lattice_point: &LatticeVector,
    weight: i64,
    depth_bound: usize,
) -> Vec<FockVector> {
    let m = weight - lattice.half_norm(lattice_point);
    if m < 0 {
        return Vec::new();
    }
    let base = FockVector::lowest(lattice_point.clone());
    if m == 0 {
        return vec![base];
    }
    let mut directions: Vec<LatticeVector> = Vec::new();
    for i in 0..lattice.rank() {
        directions.push(LatticeVector::basis(lattice.rank(), i));
        directions.push(LatticeVector::basis(lattice.rank(), i).neg());
    }
    if !lattice_point.is_zero() && !directions.contains(lattice_point) {
        directions.push(lattice_point.clone());
    }

    // Multisets of (direction index, degree) pairs, total degree m, at most
    // depth_bound factors. The s operators commute, so multisets suffice.
    let mut out: Vec<FockVector> = Vec::new();
    let mut stack: Vec<(usize, u32)> = Vec::new();
    fn rec(
        lattice: &Lattice,
        directions: &[LatticeVector],
        base: &FockVector,
        remaining: u32,
        depth_left: usize,
        min_pair: (usize, u32),
        stack: &mut Vec<(usize, u32)>,
        out: &mut Vec<FockVector>,
    ) {
        if remaining == 0 {
            let mut v = base.clone();
            for &(dir, deg) in stack.iter() {
                v = apply_s(lattice, &directions[dir], deg, &v);
            }
            if !v.is_zero() {
                out.push(v);
            }
            return;
        }
        if depth_left == 0 {
            return;
        }
        for dir in min_pair.0..directions.len() {
            let deg_start = if dir == min_pair.0 { min_pair.1 } else { 1 };
            for deg in deg_start..=remaining {
                stack.push((dir, deg));
                rec(
                    lattice,
                    directions,
                    base,
                    remaining - deg,
                    depth_left - 1,
                    (dir, deg),
                    stack,
                    out,
                );
                stack.pop();
            }
        }
    }
    rec(
        lattice,
        &directions,
        &base,
        m as u32,
        depth_bound,
        (0, 1),
        &mut stack,
        &mut out,
    );
    out.sort();
    out.dedup();
    out
}

/// Is `v` in the integer span of the spanning set at its bidegree? A `false`
/// answer means "not provably integral at this composition depth": the
/// spanning family is a truncation, so membership is certified but
/// non-membership is relative to the bound.
pub fn integral_membership(
    lattice: &Lattice,
    v: &FockVector,
    depth_bound: Option<usize>,
) -> Result<bool> {
    if v.is_zero() {
        return Ok(true);
    }
    let (lattice_point, weight) = v.bidegree(lattice).ok_or_else(|| {
        Error::Unsupported("integral membership needs a bidegree-homogeneous vector".into())
    })?;
    let depth = depth_bound.unwrap_or_else(|| default_zform_depth(weight));
    let span = zform_spanning_set(lattice, &lattice_point, weight, depth);
    let basis = graded_states(lattice, &lattice_point, weight);
    let index: HashMap<&FockState, usize> = basis.iter().enumerate().map(|(i, s)| (s, i)).collect();

    let mut denom_lcm = BigInt::one();
    for w in span.iter().chain(std::iter::once(v)) {
        for c in w.terms.values() {
            denom_lcm = denom_lcm.lcm(c.denom());
        }
    }
    let scale = |w: &FockVector| -> Option<Vec<BigInt>> {
        let mut row = vec![BigInt::zero(); basis.len()];
        for (s, c) in &w.terms {
            let scaled = c * BigRational::from_integer(denom_lcm.clone());
            if !scaled.is_integer() {
                return None;
            }
            row[*index.get(s).expect("state outside its graded piece")] = scaled.to_integer();
        }
        Some(row)
    };
    let rows: Vec<Vec<BigInt>> = span
        .iter()
        .map(|w| scale(w).expect("lcm clears spanning denominators"))
        .collect();
    let target = match scale(v) {
        Some(t) => t,
        // v has a denominator the spanning set never produces.
        None => return Ok(false),
    };
    let ech = int_echelon(rows, basis.len());
    Ok(echelon_contains(&ech, &target))
}

/// Ordered basis of all monomial states of weight <= max_weight, grouped by
/// weight; the scaffold for matrix realizations of symmetries.
#[derive(Clone, Debug)]
pub struct TruncationBasis {
    pub max_weight: i64,
    pub states: Vec<FockState>,
    pub index: HashMap<FockState, usize>,
    pub weights: Vec<i64>,
}

impl TruncationBasis {
    pub fn new(lattice: &Lattice, max_weight: i64) -> Self {
        let mut states = Vec::new();
        let points = lattice_points_up_to(lattice, max_weight);
        for w in 0..=max_weight {
            for p in &points {
                states.extend(graded_states(lattice, p, w));
            }
        }
        let weights = states.iter().map(|s| s.weight(lattice)).collect();
        let index = states
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, s)| (s, i))
            .collect();
        TruncationBasis {
            max_weight,
            states,
            index,
            weights,
        }
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }
}
