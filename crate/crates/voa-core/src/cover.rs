//! The sign double cover of an even lattice realized through an explicit
//! bimultiplicative 2-cocycle, the twisted group ring it produces, and lifts
//! of lattice isometries to automorphisms of that ring.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::lattice::{IntegerMatrixGroup, Lattice, LatticeVector};
use crate::linalg::IntMatrix;
use crate::ring::{Ring, RingElement};

/// Bimultiplicative cocycle fixed on an ordered basis: basis pairs with
/// i > j contribute the parity of the Gram entry, pairs with i <= j
/// contribute +1. Its commutator is (-1)^<a,b>, which is what the twisted
/// multiplication needs.
#[derive(Clone, Debug)]
pub struct Cocycle {
    rank: usize,
    /// parity[i][j] = G_ij mod 2 for i > j, else false.
    parity: Vec<Vec<bool>>,
}

impl Cocycle {
    pub fn new(lattice: &Lattice) -> Self {
        let rank = lattice.rank();
        let mut parity = vec![vec![false; rank]; rank];
        for i in 0..rank {
            for j in 0..i {
                parity[i][j] = lattice.gram().at(i, j).rem_euclid(2) == 1;
            }
        }
        Cocycle { rank, parity }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// ε(a,b) as a plain sign.
    pub fn eval(&self, a: &LatticeVector, b: &LatticeVector) -> i8 {
        let mut odd = false;
        for i in 0..self.rank {
            if a.0[i].rem_euclid(2) == 0 {
                continue;
            }
            for j in 0..i {
                if self.parity[i][j] && b.0[j].rem_euclid(2) == 1 {
                    odd = !odd;
                }
            }
        }
        if odd {
            -1
        } else {
            1
        }
    }
}

/// Sparse element of the twisted group ring over a chosen coefficient ring.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TwistedGroupElement {
    pub terms: BTreeMap<LatticeVector, RingElement>,
}

impl TwistedGroupElement {
    pub fn zero() -> Self {
        TwistedGroupElement {
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(a: LatticeVector, ring: &Ring) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(a, ring.one());
        TwistedGroupElement { terms }
    }

    pub fn add_term(&mut self, ring: &Ring, a: LatticeVector, c: RingElement) {
        let entry = self.terms.entry(a.clone()).or_insert_with(|| ring.zero());
        *entry = ring.add(entry, &c);
        if ring.is_zero(entry) {
            self.terms.remove(&a);
        }
    }

    pub fn add(&self, ring: &Ring, other: &Self) -> Self {
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_term(ring, a.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, ring: &Ring, c: &RingElement) -> Self {
        let mut out = TwistedGroupElement::zero();
        for (a, x) in &self.terms {
            out.add_term(ring, a.clone(), ring.mul(x, c));
        }
        out
    }
}

impl fmt::Display for TwistedGroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (a, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}*e{}", c, a)?;
        }
        Ok(())
    }
}

/// ι(e_a) ι(e_b) = ε(a,b) ι(e_{a+b}), extended bilinearly.
pub fn twisted_multiply(
    cocycle: &Cocycle,
    ring: &Ring,
    x: &TwistedGroupElement,
    y: &TwistedGroupElement,
) -> TwistedGroupElement {
    let mut out = TwistedGroupElement::zero();
    for (a, ca) in &x.terms {
        for (b, cb) in &y.terms {
            let sign = ring.from_i64(cocycle.eval(a, b) as i64);
            let c = ring.mul(&ring.mul(ca, cb), &sign);
            out.add_term(ring, a.add(b), c);
        }
    }
    out
}

/// Ring automorphism of the twisted group ring covering a lattice isometry:
/// ι(e_a) -> η(a) ι(e_{h a}). η is stored on the basis only; every other
/// value comes from the extension rule η(a+b) = η(a) η(b) ε(ha,hb) ε(a,b).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoverAutomorphism {
    pub ring: Ring,
    pub h: IntMatrix,
    pub eta_basis: Vec<RingElement>,
}

impl CoverAutomorphism {
    pub fn identity(ring: Ring, rank: usize) -> Self {
        CoverAutomorphism {
            ring,
            h: IntMatrix::identity(rank),
            eta_basis: vec![ring.one(); rank],
        }
    }

    /// Column i of h, the image of the i-th basis vector.
    fn h_image(&self, i: usize) -> LatticeVector {
        LatticeVector((0..self.h.n).map(|r| self.h.at(r, i)).collect())
    }

    pub fn apply_to_vector(&self, a: &LatticeVector) -> LatticeVector {
        LatticeVector(self.h.apply(&a.0))
    }

    /// Polarization sign δ(α_i, α_j) = ε(hα_i, hα_j) ε(α_i, α_j).
    fn delta(&self, cocycle: &Cocycle, i: usize, j: usize) -> i8 {
        let ai = LatticeVector::basis(self.h.n, i);
        let aj = LatticeVector::basis(self.h.n, j);
        cocycle.eval(&self.h_image(i), &self.h_image(j)) * cocycle.eval(&ai, &aj)
    }

    /// η at an arbitrary lattice vector, reconstructed coordinate by
    /// coordinate from the basis values and the polarization signs.
    pub fn eta(&self, cocycle: &Cocycle, a: &LatticeVector) -> RingElement {
        let ring = &self.ring;
        let mut acc = ring.one();
        let mut sign = 1i8;
        for i in 0..self.h.n {
            let c = a.0[i];
            if c.rem_euclid(2) == 1 {
                acc = ring.mul(&acc, &self.eta_basis[i]);
            }
            // δ_ii^{C(c,2)}  (divided-square contribution of one coordinate)
            let pairs = (c as i128) * (c as i128 - 1) / 2;
            if pairs.rem_euclid(2) == 1 && self.delta(cocycle, i, i) == -1 {
                sign = -sign;
            }
            for j in i + 1..self.h.n {
                let cross = (c as i128) * (a.0[j] as i128);
                if cross.rem_euclid(2) == 1 && self.delta(cocycle, i, j) == -1 {
                    sign = -sign;
                }
            }
        }
        if sign == -1 {
            ring.mul(&acc, &ring.from_i64(-1))
        } else {
            acc
        }
    }

    /// η as a plain sign, for coefficient rings that embed it in {+1,-1}.
    pub fn eta_sign(&self, cocycle: &Cocycle, a: &LatticeVector) -> Result<i8> {
        self.ring.as_sign(&self.eta(cocycle, a))
    }

    pub fn apply(&self, cocycle: &Cocycle, x: &TwistedGroupElement) -> TwistedGroupElement {
        let mut out = TwistedGroupElement::zero();
        for (a, c) in &x.terms {
            let coeff = self.ring.mul(c, &self.eta(cocycle, a));
            out.add_term(&self.ring, self.apply_to_vector(a), coeff);
        }
        out
    }
}

impl fmt::Display for CoverAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "h={:?} eta=[", self.h.data)?;
        for (i, e) in self.eta_basis.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", e)?;
        }
        write!(f, "]")
    }
}

/// Builds the lift of an isometry with prescribed η values on the basis.
/// Fails if h does not preserve the form, if some η value is not a square
/// root of 1, or if the extension rule self-test fails.
pub fn lift_orthogonal(
    lattice: &Lattice,
    cocycle: &Cocycle,
    ring: Ring,
    h: IntMatrix,
    eta_basis: Vec<RingElement>,
) -> Result<CoverAutomorphism> {
    let rank = lattice.rank();
    if h.n != rank || eta_basis.len() != rank {
        return Err(Error::DimensionMismatch(
            "lift data does not match the lattice rank".into(),
        ));
    }
    if h.transpose().mul(lattice.gram()).mul(&h) != *lattice.gram() {
        return Err(Error::InconsistentLift(
            "the matrix does not preserve the bilinear form".into(),
        ));
    }
    for e in &eta_basis {
        if !ring.is_mu2(e) {
            return Err(Error::InconsistentLift(format!(
                "{} is not a square root of 1 in {}",
                e, ring
            )));
        }
    }
    let lift = CoverAutomorphism { ring, h, eta_basis };
    // Extension-rule self-test on a fixed family of vector pairs; a failure
    // here would mean the cocycle or the polarization computation is wrong.
    let mut family = Vec::new();
    for i in 0..rank {
        family.push(LatticeVector::basis(rank, i));
        family.push(LatticeVector::basis(rank, i).neg());
        for j in 0..rank {
            family.push(LatticeVector::basis(rank, i).add(&LatticeVector::basis(rank, j)));
        }
    }
    for a in &family {
        for b in &family {
            let lhs = lift.eta(cocycle, &a.add(b));
            let delta = cocycle.eval(&lift.apply_to_vector(a), &lift.apply_to_vector(b)) as i64
                * cocycle.eval(a, b) as i64;
            let rhs = ring.mul(
                &ring.mul(&lift.eta(cocycle, a), &lift.eta(cocycle, b)),
                &ring.from_i64(delta),
            );
            if lhs != rhs {
                return Err(Error::InconsistentLift(format!(
                    "extension rule fails at a={} b={}",
                    a, b
                )));
            }
        }
    }
    Ok(lift)
}

/// (f ∘ g): h multiplies, η composes as f.η(g.h a) g.η(a).
pub fn compose(
    cocycle: &Cocycle,
    f: &CoverAutomorphism,
    g: &CoverAutomorphism,
) -> CoverAutomorphism {
    assert_eq!(f.ring, g.ring, "cover automorphisms over different rings");
    let rank = f.h.n;
    let ring = f.ring;
    let eta_basis = (0..rank)
        .map(|i| {
            let gi = g.h_image(i);
            ring.mul(&f.eta(cocycle, &gi), &g.eta_basis[i])
        })
        .collect();
    CoverAutomorphism {
        ring,
        h: f.h.mul(&g.h),
        eta_basis,
    }
}

pub fn inverse(lattice: &Lattice, cocycle: &Cocycle, f: &CoverAutomorphism) -> CoverAutomorphism {
    let h_inv = lattice.orthogonal_inverse(&f.h);
    let rank = f.h.n;
    // Square roots of 1 are their own inverses, so the inverse η at a is just
    // η at h^{-1} a.
    let eta_basis = (0..rank)
        .map(|i| {
            let col = LatticeVector((0..rank).map(|r| h_inv.at(r, i)).collect());
            f.eta(cocycle, &col)
        })
        .collect();
    CoverAutomorphism {
        ring: f.ring,
        h: h_inv,
        eta_basis,
    }
}

/// The full group of cover automorphisms over a ring: every isometry paired
/// with every choice of η on the basis, in a deterministic order.
#[derive(Clone, Debug)]
pub struct CoverGroup {
    pub ring: Ring,
    pub elements: Vec<CoverAutomorphism>,
}

impl CoverGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Elements covering the identity isometry.
    pub fn kernel_order(&self) -> usize {
        self.elements.iter().filter(|e| e.h.is_identity()).count()
    }

    /// Distinct isometries covered.
    pub fn image_order(&self) -> usize {
        let mut seen = std::collections::HashSet::new();
        for e in &self.elements {
            seen.insert(e.h.clone());
        }
        seen.len()
    }
}

pub fn cover_group(
    lattice: &Lattice,
    cocycle: &Cocycle,
    ring: Ring,
    orth: &IntegerMatrixGroup,
) -> Result<CoverGroup> {
    let rank = lattice.rank();
    let mu2 = ring.mu2_elements();
    let mut elements = Vec::new();
    let mut combo = vec![0usize; rank];
    for h in &orth.elements {
        loop {
            let eta_basis: Vec<RingElement> = combo.iter().map(|&k| mu2[k].clone()).collect();
            elements.push(lift_orthogonal(
                lattice,
                cocycle,
                ring,
                h.clone(),
                eta_basis,
            )?);
            // Next η combination in lexicographic order.
            let mut pos = rank;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                combo[pos] += 1;
                if combo[pos] < mu2.len() {
                    break;
                }
                combo[pos] = 0;
            }
            if combo.iter().all(|&k| k == 0) {
                break;
            }
        }
    }
    Ok(CoverGroup { ring, elements })
}
