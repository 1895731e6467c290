//! Symmetries of the lattice vertex algebra realized as graded maps on
//! truncations: torus characters, root exponentials, lifts from the lattice
//! cover, and compositions such as the extended Weyl (Tits) elements.
//!
//! Each action is checked against the defining property
//! g(u_n v) = g(u)_n g(v), then frozen into an exact matrix on a
//! `TruncationBasis` so group-theoretic statements (orders, set equalities,
//! centralizers) become finite computations.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cover::{self, CoverAutomorphism};
use crate::error::{Error, Result};
use crate::fock::{apply_heisenberg_int, rat, FockState, FockVector, TruncationBasis};
use crate::lattice::{IntegerMatrixGroup, Lattice, LatticeVector};
use crate::linalg::{IntMatrix, RatMatrix};
use crate::ring::{Ring, RingElement};
use crate::vertex::Engine;

/// Character of the torus: a unit scalar per basis direction, acting on a
/// monomial state through the lattice point only.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TorusCharacter {
    pub values: Vec<BigRational>,
}

impl TorusCharacter {
    pub fn new(values: Vec<BigRational>) -> Result<Self> {
        if values.iter().any(|v| v.is_zero()) {
            return Err(Error::InvalidRing(
                "torus character values must be units".into(),
            ));
        }
        Ok(TorusCharacter { values })
    }

    /// The character lambda -> (-1)^{sum of coordinates with sign -1}.
    pub fn from_signs(signs: &[i8]) -> Self {
        TorusCharacter {
            values: signs.iter().map(|&s| rat(s as i64)).collect(),
        }
    }

    /// Value on an arbitrary lattice vector: product of basis values raised
    /// to the coordinates.
    pub fn eval(&self, a: &LatticeVector) -> BigRational {
        let mut acc = BigRational::one();
        for (i, &c) in a.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let base = if c > 0 {
                self.values[i].clone()
            } else {
                self.values[i].recip()
            };
            for _ in 0..c.unsigned_abs() {
                acc *= &base;
            }
        }
        acc
    }

    /// The character lambda -> self(h lambda).
    pub fn precompose(&self, h: &IntMatrix) -> TorusCharacter {
        let rank = self.values.len();
        let values = (0..rank)
            .map(|i| {
                let img = LatticeVector(h.apply(&LatticeVector::basis(rank, i).0));
                self.eval(&img)
            })
            .collect();
        TorusCharacter { values }
    }
}

/// All 2^rank characters with values in {+1, -1}.
pub fn sign_characters(rank: usize) -> Vec<TorusCharacter> {
    (0..1usize << rank)
        .map(|mask| {
            let signs: Vec<i8> = (0..rank)
                .map(|i| if mask >> i & 1 == 1 { -1 } else { 1 })
                .collect();
            TorusCharacter::from_signs(&signs)
        })
        .collect()
}

/// A character with distinct prime values, so lambda -> value is injective
/// on lattice points: its centralizer computations cannot alias.
pub fn prime_character(rank: usize) -> TorusCharacter {
    const PRIMES: [i64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];
    assert!(
        rank <= PRIMES.len(),
        "prime character table covers rank <= 8"
    );
    TorusCharacter {
        values: PRIMES[..rank].iter().map(|&p| rat(p)).collect(),
    }
}

/// A graded symmetry of the algebra, applied exactly over the rationals.
#[derive(Clone, Debug)]
pub enum SymmetryAction {
    Torus(TorusCharacter),
    /// exp(amount * x_0) for x = e_alpha, alpha a norm-2 vector; the zero
    /// mode is a derivation, so the exponential respects all products.
    RootExp {
        alpha: LatticeVector,
        amount: BigRational,
    },
    /// Lift (h, eta) from the lattice cover, acting by h on modes and
    /// lattice points and by the sign eta(lambda) on coefficients.
    Cover(CoverAutomorphism),
    /// Deliberately broken cover action carrying an extra non-multiplicative
    /// sign; a negative control for the automorphism checker.
    CoverTwisted(CoverAutomorphism),
    /// Composition, applied rightmost factor first.
    Composite(Vec<SymmetryAction>),
}

/// Constructor guard for root exponentials: the direction must have norm 2,
/// so that e_alpha has weight one and its zero mode is a derivation.
pub fn root_exp(
    lattice: &Lattice,
    alpha: LatticeVector,
    amount: BigRational,
) -> Result<SymmetryAction> {
    let norm = lattice.norm(&alpha);
    if norm != 2 {
        return Err(Error::NotARoot(norm));
    }
    Ok(SymmetryAction::RootExp { alpha, amount })
}

/// h-transform of one monomial state with no eta factor: the lattice point
/// moves to h lambda and every mode a_i(-n) becomes (h a_i)(-n), expanded
/// back into basis modes.
fn transported_state(engine: &Engine, auto: &CoverAutomorphism, s: &FockState) -> FockVector {
    let rank = engine.rank();
    let mut acc = FockVector::lowest(auto.apply_to_vector(&s.lattice_point));
    for &(n, i) in &s.modes {
        let ha = auto.apply_to_vector(&LatticeVector::basis(rank, i as usize));
        acc = apply_heisenberg_int(engine.lattice(), &ha, -(n as i64), &acc);
    }
    acc
}

impl SymmetryAction {
    pub fn apply(&self, engine: &Engine, v: &FockVector) -> FockVector {
        match self {
            SymmetryAction::Torus(t) => {
                let mut out = FockVector::zero();
                for (s, c) in &v.terms {
                    out.add_term(s.clone(), c * t.eval(&s.lattice_point));
                }
                out
            }
            SymmetryAction::RootExp { alpha, amount } => {
                let x = FockVector::lowest(alpha.clone());
                let mut out = v.clone();
                let mut term = v.clone();
                let mut k = 1i64;
                loop {
                    term = engine
                        .mode_product(&x, 0, &term)
                        .scale(&(amount / BigRational::from_integer(BigInt::from(k))));
                    if term.is_zero() {
                        break;
                    }
                    out.add_scaled(&term, &BigRational::one());
                    k += 1;
                }
                out
            }
            SymmetryAction::Cover(auto) => {
                let mut out = FockVector::zero();
                for (s, c) in &v.terms {
                    let sign = auto
                        .eta_sign(engine.cocycle(), &s.lattice_point)
                        .expect("rational cover action needs sign-valued eta");
                    let img = transported_state(engine, auto, s);
                    out.add_scaled(&img, &(c * rat(sign as i64)));
                }
                out
            }
            SymmetryAction::CoverTwisted(auto) => {
                let mut out = FockVector::zero();
                for (s, c) in &v.terms {
                    let sign = auto
                        .eta_sign(engine.cocycle(), &s.lattice_point)
                        .expect("rational cover action needs sign-valued eta");
                    // Extra (-1)^{C(c_1,2)} on the first coordinate: not
                    // multiplicative across lattice addition, hence not a
                    // vertex automorphism.
                    let c1 = s.lattice_point.0[0];
                    let twist = if (c1 * (c1 - 1) / 2).rem_euclid(2) == 1 {
                        -1
                    } else {
                        1
                    };
                    let img = transported_state(engine, auto, s);
                    out.add_scaled(&img, &(c * rat((sign as i64) * twist)));
                }
                out
            }
            SymmetryAction::Composite(parts) => {
                let mut cur = v.clone();
                for part in parts.iter().rev() {
                    cur = part.apply(engine, &cur);
                }
                cur
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            SymmetryAction::Torus(t) => {
                let vals: Vec<String> = t.values.iter().map(|v| v.to_string()).collect();
                format!("torus({})", vals.join(","))
            }
            SymmetryAction::RootExp { alpha, amount } => {
                format!("exp({} * x0[e{}])", amount, alpha)
            }
            SymmetryAction::Cover(a) => format!("cover[{}]", a),
            SymmetryAction::CoverTwisted(a) => format!("cover-twisted[{}]", a),
            SymmetryAction::Composite(parts) => {
                let inner: Vec<String> = parts.iter().map(|p| p.label()).collect();
                inner.join(" . ")
            }
        }
    }
}

impl fmt::Display for SymmetryAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// Outcome of testing g(u_n v) = g(u)_n g(v) across a truncation.
#[derive(Clone, Debug)]
pub struct AutomorphismCheck {
    pub label: String,
    pub vacuum_fixed: bool,
    pub instances: usize,
    pub failures: usize,
    pub first_failures: Vec<String>,
}

impl AutomorphismCheck {
    pub fn passed(&self) -> bool {
        self.vacuum_fixed && self.failures == 0
    }
}

/// Verifies the automorphism property on all pairs of monomial states of
/// weight <= max_weight, over the mode window
/// n in [-(max_weight+1), 2 max_weight - 1]. Above the window every product
/// of truncation states vanishes for weight reasons; below it the identity
/// instances keep repeating the same creation patterns. With
/// `samples = (count, seed)` the triples are drawn at random instead of
/// exhaustively; the products themselves stay exact either way.
pub fn check_vertex_automorphism(
    engine: &Engine,
    action: &SymmetryAction,
    max_weight: i64,
    samples: Option<(usize, u64)>,
) -> AutomorphismCheck {
    let basis = TruncationBasis::new(engine.lattice(), max_weight);
    let vacuum = engine.vacuum();
    let vacuum_fixed = action.apply(engine, &vacuum) == vacuum;

    let vectors: Vec<FockVector> = basis
        .states
        .iter()
        .map(|s| FockVector::from_state(s.clone()))
        .collect();
    let images: Vec<FockVector> = vectors.iter().map(|v| action.apply(engine, v)).collect();
    let n_lo = -(max_weight + 1);
    let n_hi = 2 * max_weight - 1;

    let mut check = AutomorphismCheck {
        label: action.label(),
        vacuum_fixed,
        instances: 0,
        failures: 0,
        first_failures: Vec::new(),
    };
    let run = |ui: usize, vi: usize, n: i64, check: &mut AutomorphismCheck| {
        let lhs = action.apply(engine, &engine.mode_product(&vectors[ui], n, &vectors[vi]));
        let rhs = engine.mode_product(&images[ui], n, &images[vi]);
        check.instances += 1;
        if lhs != rhs {
            check.failures += 1;
            if check.first_failures.len() < 5 {
                check.first_failures.push(format!(
                    "u={} v={} n={}: g(u_n v) = {} but g(u)_n g(v) = {}",
                    basis.states[ui], basis.states[vi], n, lhs, rhs
                ));
            }
        }
    };
    match samples {
        None => {
            for ui in 0..vectors.len() {
                for vi in 0..vectors.len() {
                    for n in n_lo..=n_hi {
                        run(ui, vi, n, &mut check);
                    }
                }
            }
        }
        Some((count, seed)) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..count {
                let ui = rng.gen_range(0..vectors.len());
                let vi = rng.gen_range(0..vectors.len());
                let n = rng.gen_range(n_lo..=n_hi);
                run(ui, vi, n, &mut check);
            }
        }
    }
    check
}

/// Exact matrix of a weight-preserving action on a truncation basis. Errors
/// if the action leaves the truncation or mixes weights, which would mean it
/// is not graded.
pub fn action_matrix(
    engine: &Engine,
    basis: &TruncationBasis,
    action: &SymmetryAction,
) -> Result<RatMatrix> {
    let mut m = RatMatrix::zero(basis.dim());
    for (j, s) in basis.states.iter().enumerate() {
        let img = action.apply(engine, &FockVector::from_state(s.clone()));
        for (t, c) in &img.terms {
            let i = *basis.index.get(t).ok_or_else(|| {
                Error::DimensionMismatch(format!("action image leaves the truncation at {}", t))
            })?;
            if basis.weights[i] != basis.weights[j] {
                return Err(Error::DimensionMismatch(format!(
                    "action mixes weights {} and {}",
                    basis.weights[j], basis.weights[i]
                )));
            }
            m.set(i, j, c.clone());
        }
    }
    Ok(m)
}

/// Matrix with entries in a coefficient ring; the shape used when cover
/// symmetries are realized over rings where eta is not a sign.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RingMatrix {
    pub ring: Ring,
    pub n: usize,
    pub data: Vec<RingElement>,
}

impl RingMatrix {
    pub fn identity(ring: Ring, n: usize) -> Self {
        let mut data = vec![ring.zero(); n * n];
        for i in 0..n {
            data[i * n + i] = ring.one();
        }
        RingMatrix { ring, n, data }
    }

    pub fn at(&self, i: usize, j: usize) -> &RingElement {
        &self.data[i * self.n + j]
    }

    pub fn mul(&self, other: &RingMatrix) -> RingMatrix {
        assert_eq!(self.n, other.n);
        assert_eq!(self.ring, other.ring);
        let n = self.n;
        let mut data = vec![self.ring.zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.at(i, k);
                if self.ring.is_zero(a) {
                    continue;
                }
                for j in 0..n {
                    let prod = self.ring.mul(a, other.at(k, j));
                    data[i * n + j] = self.ring.add(&data[i * n + j], &prod);
                }
            }
        }
        RingMatrix {
            ring: self.ring,
            n,
            data,
        }
    }
}

/// Entry-wise reduction of a rational matrix into a ring.
pub fn specialize_matrix(ring: &Ring, m: &RatMatrix) -> Result<RingMatrix> {
    let mut data = Vec::with_capacity(m.n * m.n);
    for i in 0..m.n {
        for j in 0..m.n {
            data.push(ring.from_rational(m.at(i, j))?);
        }
    }
    Ok(RingMatrix {
        ring: *ring,
        n: m.n,
        data,
    })
}

/// Matrix of a cover element over its own coefficient ring: the h-transport
/// has integer coordinates, and eta(lambda) multiplies each column in the
/// ring.
pub fn cover_matrix_over_ring(
    engine: &Engine,
    basis: &TruncationBasis,
    auto: &CoverAutomorphism,
) -> Result<RingMatrix> {
    let ring = auto.ring;
    let mut data = vec![ring.zero(); basis.dim() * basis.dim()];
    for (j, s) in basis.states.iter().enumerate() {
        let img = transported_state(engine, auto, s);
        let eta = auto.eta(engine.cocycle(), &s.lattice_point);
        for (t, c) in &img.terms {
            let i = *basis.index.get(t).ok_or_else(|| {
                Error::DimensionMismatch(format!("cover image leaves the truncation at {}", t))
            })?;
            let entry = ring.mul(&ring.from_rational(c)?, &eta);
            data[i * basis.dim() + j] = ring.add(&data[i * basis.dim() + j], &entry);
        }
    }
    Ok(RingMatrix {
        ring,
        n: basis.dim(),
        data,
    })
}

/// Closure of a generating set under an associative product, breadth first,
/// bounded by `cap`.
pub fn close_group<T, F>(generators: &[T], identity: T, mul: F, cap: usize) -> Result<Vec<T>>
where
    T: Clone + Eq + std::hash::Hash,
    F: Fn(&T, &T) -> T,
{
    let mut seen: HashSet<T> = HashSet::new();
    seen.insert(identity.clone());
    let mut frontier = vec![identity];
    while let Some(x) = frontier.pop() {
        for g in generators {
            let y = mul(&x, g);
            if seen.insert(y.clone()) {
                if seen.len() > cap {
                    return Err(Error::CapExceeded { cap });
                }
                frontier.push(y);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// The extended Weyl element attached to a root:
/// exp(x_alpha) exp(-c x_{-alpha}) exp(x_alpha) with the normalization
/// c = epsilon(alpha, -alpha) read off from (e_alpha)_1 e_{-alpha} = c vacuum.
pub fn tits_element(engine: &Engine, alpha: &LatticeVector) -> Result<SymmetryAction> {
    let lattice = engine.lattice();
    let norm = lattice.norm(alpha);
    if norm != 2 {
        return Err(Error::NotARoot(norm));
    }
    let eps = engine.cocycle().eval(alpha, &alpha.neg()) as i64;
    let outer = root_exp(lattice, alpha.clone(), BigRational::one())?;
    let middle = root_exp(lattice, alpha.neg(), rat(-eps))?;
    Ok(SymmetryAction::Composite(vec![
        outer.clone(),
        middle,
        outer,
    ]))
}

/// Matrix group generated by the extended Weyl elements of all roots
/// together with the sign characters of the torus.
pub fn tits_group(engine: &Engine, basis: &TruncationBasis, cap: usize) -> Result<Vec<RatMatrix>> {
    let mut generators = Vec::new();
    for alpha in engine.lattice().roots() {
        generators.push(action_matrix(
            engine,
            basis,
            &tits_element(engine, &alpha)?,
        )?);
    }
    for t in sign_characters(engine.rank()) {
        generators.push(action_matrix(engine, basis, &SymmetryAction::Torus(t))?);
    }
    close_group(
        &generators,
        RatMatrix::identity(basis.dim()),
        |a, b| a.mul(b),
        cap,
    )
}

/// Matrices of every cover element (h, eta) with h in the given isometry
/// group and eta an arbitrary sign vector, over the rationals.
pub fn cover_lift_matrices(
    engine: &Engine,
    basis: &TruncationBasis,
    isometries: &IntegerMatrixGroup,
) -> Result<Vec<RatMatrix>> {
    let lattice = engine.lattice();
    let cocycle = engine.cocycle();
    let mut out = Vec::new();
    for h in &isometries.elements {
        for mask in 0..1usize << engine.rank() {
            let eta: Vec<RingElement> = (0..engine.rank())
                .map(|i| Ring::Rationals.from_i64(if mask >> i & 1 == 1 { -1 } else { 1 }))
                .collect();
            let auto = cover::lift_orthogonal(lattice, cocycle, Ring::Rationals, h.clone(), eta)?;
            out.push(action_matrix(engine, basis, &SymmetryAction::Cover(auto))?);
        }
    }
    Ok(out)
}

/// The decomposition evidence for the symmetry group on a truncation: group
/// orders, the extended-Weyl/cover-preimage identification, the outer
/// quotient, and the torus-centralizer computation.
#[derive(Clone, Debug)]
pub struct GroupRealizationReport {
    pub truncation: i64,
    pub dim: usize,
    pub weyl_order: usize,
    pub orthogonal_order: usize,
    pub outer_class_count: usize,
    pub outer_quotient_consistent: bool,
    pub cover_order: usize,
    pub cover_kernel_order: usize,
    pub cover_matrix_order: usize,
    pub cover_matrix_kernel_order: usize,
    pub cover_matrix_faithful: bool,
    pub tits_order: usize,
    pub weyl_preimage_order: usize,
    pub tits_equals_weyl_preimage: bool,
    pub torus_centralizer_order: usize,
    pub centralizer_equals_kernel: bool,
}

impl GroupRealizationReport {
    pub fn all_checks_pass(&self) -> bool {
        self.outer_quotient_consistent
            && self.cover_matrix_faithful
            && self.tits_equals_weyl_preimage
            && self.centralizer_equals_kernel
    }
}

/// Assembles the report over one coefficient ring. The extended-Weyl and
/// centralizer statements are rational-coefficient statements and are always
/// computed over the rationals; the cover matrix realization uses `ring`, so
/// collapsing sign groups (trivial mu_2) show up here.
pub fn group_realization_report(
    engine: &Engine,
    ring: &Ring,
    truncation: i64,
    cap: usize,
) -> Result<GroupRealizationReport> {
    let lattice = engine.lattice();
    let weyl = lattice.weyl_group(cap)?;
    let orth = lattice.orthogonal_group(cap)?;
    let outer = lattice.outer_classes(&weyl, &orth);
    let basis = TruncationBasis::new(lattice, truncation);

    let cover = cover::cover_group(lattice, engine.cocycle(), *ring, &orth)?;
    let mut matrix_set: HashSet<RingMatrix> = HashSet::new();
    let mut kernel_matrix_set: HashSet<RingMatrix> = HashSet::new();
    for auto in &cover.elements {
        let m = cover_matrix_over_ring(engine, &basis, auto)?;
        if auto.h.is_identity() {
            kernel_matrix_set.insert(m.clone());
        }
        matrix_set.insert(m);
    }

    let tits = tits_group(engine, &basis, cap)?;
    let tits_set: HashSet<RatMatrix> = tits.iter().cloned().collect();
    let preimage = cover_lift_matrices(engine, &basis, &weyl)?;
    let preimage_set: HashSet<RatMatrix> = preimage.iter().cloned().collect();

    // Centralizer of the torus inside the rational cover image: because the
    // probe character has distinct prime values, only lifts with h = id can
    // commute with it.
    let probe = action_matrix(
        engine,
        &basis,
        &SymmetryAction::Torus(prime_character(engine.rank())),
    )?;
    let full_lifts = cover_lift_matrices(engine, &basis, &orth)?;
    let full_set: HashSet<RatMatrix> = full_lifts.iter().cloned().collect();
    let centralizer: HashSet<RatMatrix> = full_set
        .iter()
        .filter(|m| m.mul(&probe) == probe.mul(m))
        .cloned()
        .collect();
    let trivial_group =
        IntegerMatrixGroup::from_elements(vec![IntMatrix::identity(engine.rank())], Vec::new());
    let rational_kernel: HashSet<RatMatrix> = cover_lift_matrices(engine, &basis, &trivial_group)?
        .into_iter()
        .collect();

    Ok(GroupRealizationReport {
        truncation,
        dim: basis.dim(),
        weyl_order: weyl.order(),
        orthogonal_order: orth.order(),
        outer_class_count: outer.len(),
        outer_quotient_consistent: weyl.order() * outer.len() == orth.order(),
        cover_order: cover.order(),
        cover_kernel_order: cover.kernel_order(),
        cover_matrix_order: matrix_set.len(),
        cover_matrix_kernel_order: kernel_matrix_set.len(),
        cover_matrix_faithful: matrix_set.len() == cover.order(),
        tits_order: tits_set.len(),
        weyl_preimage_order: preimage_set.len(),
        tits_equals_weyl_preimage: tits_set == preimage_set,
        torus_centralizer_order: centralizer.len(),
        centralizer_equals_kernel: centralizer == rational_kernel,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::create_basis;
    use crate::lattice::presets;
    use crate::lattice::DEFAULT_GROUP_CAP;

    fn lv(coords: &[i64]) -> LatticeVector {
        LatticeVector(coords.to_vec())
    }

    fn a1_engine() -> Engine {
        Engine::new(presets::lattice("A1").unwrap())
    }

    #[test]
    fn torus_character_scales_lattice_points_only() {
        let e = a1_engine();
        let t = TorusCharacter::new(vec![rat(3)]).unwrap();
        let action = SymmetryAction::Torus(t);
        let ea = FockVector::lowest(lv(&[1]));
        let em = FockVector::lowest(lv(&[-1]));
        let h = create_basis(0, 1, &e.vacuum());
        assert_eq!(action.apply(&e, &ea), ea.scale(&rat(3)));
        assert_eq!(
            action.apply(&e, &em),
            em.scale(&BigRational::new(1.into(), 3.into()))
        );
        assert_eq!(action.apply(&e, &h), h);
    }

    #[test]
    fn torus_characters_are_vertex_automorphisms() {
        let e = a1_engine();
        let t = SymmetryAction::Torus(TorusCharacter::new(vec![rat(5)]).unwrap());
        let check = check_vertex_automorphism(&e, &t, 2, None);
        assert!(check.passed(), "failures: {:?}", check.first_failures);
        assert!(check.instances > 0);
    }

    #[test]
    fn root_exponential_hand_expansion() {
        let e = a1_engine();
        let g = root_exp(e.lattice(), lv(&[1]), BigRational::one()).unwrap();
        let em = FockVector::lowest(lv(&[-1]));
        // exp(x_0) e_{-a} = e_{-a} + a(-1) vacuum - e_a, the series stopping
        // at the third term.
        let expect = em
            .add(&create_basis(0, 1, &e.vacuum()))
            .sub(&FockVector::lowest(lv(&[1])));
        assert_eq!(g.apply(&e, &em), expect);
        // The vacuum is fixed: x_0 vacuum = 0.
        assert_eq!(g.apply(&e, &e.vacuum()), e.vacuum());
    }

    #[test]
    fn root_exponential_rejects_non_roots() {
        let l = presets::lattice("A1").unwrap();
        assert!(matches!(
            root_exp(&l, lv(&[2]), BigRational::one()),
            Err(Error::NotARoot(8))
        ));
    }

    #[test]
    fn root_exponentials_are_vertex_automorphisms() {
        let e = a1_engine();
        let g = root_exp(e.lattice(), lv(&[1]), BigRational::one()).unwrap();
        let check = check_vertex_automorphism(&e, &g, 2, None);
        assert!(check.passed(), "failures: {:?}", check.first_failures);
    }

    #[test]
    fn cover_action_passes_and_twisted_control_fails() {
        let e = a1_engine();
        // Lift of negation with eta = 1.
        let h = IntMatrix::from_rows(&[vec![-1]]).unwrap();
        let auto = cover::lift_orthogonal(
            e.lattice(),
            e.cocycle(),
            Ring::Rationals,
            h,
            vec![Ring::Rationals.one()],
        )
        .unwrap();
        let good = check_vertex_automorphism(&e, &SymmetryAction::Cover(auto.clone()), 2, None);
        assert!(good.passed(), "failures: {:?}", good.first_failures);
        let bad = check_vertex_automorphism(&e, &SymmetryAction::CoverTwisted(auto), 2, None);
        assert!(!bad.passed());
        assert!(bad.failures > 0);
    }

    #[test]
    fn action_matrices_are_block_diagonal_and_invertible() {
        let e = a1_engine();
        let basis = TruncationBasis::new(e.lattice(), 2);
        let g = root_exp(e.lattice(), lv(&[1]), BigRational::one()).unwrap();
        let m = action_matrix(&e, &basis, &g).unwrap();
        assert!(m.inverse().is_ok());
        let t = SymmetryAction::Torus(TorusCharacter::new(vec![rat(2)]).unwrap());
        let mt = action_matrix(&e, &basis, &t).unwrap();
        // Diagonal: e_a gets 2, e_{-a} gets 1/2, mode states get 1.
        for (i, s) in basis.states.iter().enumerate() {
            for j in 0..basis.dim() {
                if i != j {
                    assert!(mt.at(i, j).is_zero());
                }
            }
            let expect = match s.lattice_point.0[0] {
                1 => rat(2),
                -1 => BigRational::new(1.into(), 2.into()),
                2 => rat(4),
                -2 => BigRational::new(1.into(), 4.into()),
                _ => BigRational::one(),
            };
            assert_eq!(mt.at(i, i), &expect, "state {}", s);
        }
    }

    /// The pairing character lambda -> (-1)^{<alpha, lambda>}.
    fn pairing_character(l: &Lattice, alpha: &LatticeVector) -> TorusCharacter {
        let signs: Vec<i8> = (0..l.rank())
            .map(|i| {
                if l.inner(alpha, &LatticeVector::basis(l.rank(), i))
                    .rem_euclid(2)
                    == 1
                {
                    -1
                } else {
                    1
                }
            })
            .collect();
        TorusCharacter::from_signs(&signs)
    }

    #[test]
    fn tits_element_squares_to_the_pairing_character() {
        // On A1 every pairing <alpha, lambda> is even, so the square is the
        // identity while the element itself is not.
        let e = a1_engine();
        let basis = TruncationBasis::new(e.lattice(), 2);
        let alpha = lv(&[1]);
        let m = action_matrix(&e, &basis, &tits_element(&e, &alpha).unwrap()).unwrap();
        let square = m.mul(&m);
        let t = SymmetryAction::Torus(pairing_character(e.lattice(), &alpha));
        let mt = action_matrix(&e, &basis, &t).unwrap();
        assert_eq!(square, mt);
        assert!(mt.is_identity());
        assert!(!m.is_identity());

        // On A2 the simple roots pair oddly, so the square is a genuine
        // sign character.
        let e2 = Engine::new(presets::lattice("A2").unwrap());
        let basis2 = TruncationBasis::new(e2.lattice(), 1);
        let alpha1 = lv(&[1, 0]);
        let m2 = action_matrix(&e2, &basis2, &tits_element(&e2, &alpha1).unwrap()).unwrap();
        let square2 = m2.mul(&m2);
        let t2 = SymmetryAction::Torus(pairing_character(e2.lattice(), &alpha1));
        let mt2 = action_matrix(&e2, &basis2, &t2).unwrap();
        assert_eq!(square2, mt2);
        assert!(!square2.is_identity());
        assert!(square2.mul(&square2).is_identity());
    }

    #[test]
    fn tits_conjugation_reflects_torus_characters() {
        let e = a1_engine();
        let basis = TruncationBasis::new(e.lattice(), 2);
        let n_alpha = tits_element(&e, &lv(&[1])).unwrap();
        let m = action_matrix(&e, &basis, &n_alpha).unwrap();
        let m_inv = m.inverse().unwrap();
        let t = TorusCharacter::new(vec![rat(7)]).unwrap();
        let mt = action_matrix(&e, &basis, &SymmetryAction::Torus(t.clone())).unwrap();
        let conj = m.mul(&mt).mul(&m_inv);
        let s_alpha = e.lattice().reflection(&lv(&[1])).unwrap();
        let reflected = t.precompose(&s_alpha);
        let expect = action_matrix(&e, &basis, &SymmetryAction::Torus(reflected)).unwrap();
        assert_eq!(conj, expect);
    }

    #[test]
    fn realization_report_for_a1() {
        let e = a1_engine();
        let report = group_realization_report(&e, &Ring::Rationals, 1, DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(report.dim, 4);
        assert_eq!(report.weyl_order, 2);
        assert_eq!(report.orthogonal_order, 2);
        assert_eq!(report.outer_class_count, 1);
        assert_eq!(report.cover_order, 4);
        assert_eq!(report.cover_kernel_order, 2);
        assert_eq!(report.cover_matrix_order, 4);
        assert_eq!(report.tits_order, 4);
        assert_eq!(report.weyl_preimage_order, 4);
        assert_eq!(report.torus_centralizer_order, 2);
        assert!(report.all_checks_pass());
    }

    #[test]
    fn kernel_realization_collapses_mod_two() {
        let e = a1_engine();
        let f2 = Ring::prime_field(2).unwrap();
        let rep_q = group_realization_report(&e, &Ring::Rationals, 1, DEFAULT_GROUP_CAP).unwrap();
        let rep_f2 = group_realization_report(&e, &f2, 1, DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(rep_q.cover_matrix_kernel_order, 2);
        assert_eq!(rep_f2.cover_order, 2);
        assert_eq!(rep_f2.cover_kernel_order, 1);
        assert_eq!(rep_f2.cover_matrix_kernel_order, 1);
        assert!(rep_f2.cover_matrix_faithful);
    }
}
