//! Subcommand implementations. Every command produces a `Report`; the
//! caller decides rendering and exit code.

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use voa_core::aut::{
    check_vertex_automorphism, group_realization_report, prime_character, root_exp, SymmetryAction,
};
use voa_core::cover::{lift_orthogonal, CoverAutomorphism};
use voa_core::fock::{
    graded_dimension, graded_states, lattice_points_up_to, FockVector, TruncationBasis,
};
use voa_core::lattice::{cartan_type_string, Lattice};
use voa_core::linalg::IntMatrix;
use voa_core::ring::Ring;
use voa_core::vertex::Engine;
use voa_core::Result;

use crate::report::{CheckRecord, LatticeInfo, Report};

pub struct Task {
    pub lattice_name: String,
    pub lattice: Lattice,
    pub ring: Ring,
    pub ring_token: String,
    pub max_weight: i64,
    pub max_mode: i64,
    pub truncation: i64,
    pub samples: usize,
    pub seed: u64,
    pub group_cap: usize,
}

impl Task {
    fn info(&self) -> LatticeInfo {
        let cartan = self
            .lattice
            .cartan_type()
            .map(|c| cartan_type_string(&c))
            .unwrap_or_else(|_| "non-ADE".to_string());
        LatticeInfo {
            name: self.lattice_name.clone(),
            rank: self.lattice.rank(),
            det: self.lattice.det().to_string(),
            cartan_type: cartan,
            root_count: self.lattice.roots().len(),
        }
    }

    fn report(&self, command: &str) -> Report {
        Report::new(command, self.info(), self.ring_token.clone())
    }

    /// All monomial states of weight up to `w`, as vectors.
    fn truncation_vectors(&self, w: i64) -> Vec<FockVector> {
        TruncationBasis::new(&self.lattice, w)
            .states
            .into_iter()
            .map(FockVector::from_state)
            .collect()
    }
}

pub fn analyze(task: &Task) -> Result<Report> {
    let mut report = task.report("analyze");
    report.param("max_weight", task.max_weight);
    report.param("group_cap", task.group_cap);

    let mut dims = CheckRecord::new("graded-dimensions", "graded-dimension-convolution");
    for w in 0..=task.max_weight {
        let by_enumeration: usize = lattice_points_up_to(&task.lattice, w)
            .iter()
            .map(|p| graded_states(&task.lattice, p, w).len())
            .sum();
        let by_oracle = graded_dimension(&task.lattice, w);
        let ok = BigUint::from(by_enumeration) == by_oracle;
        dims.record(ok, || {
            format!(
                "weight {}: enumeration {} vs convolution {}",
                w, by_enumeration, by_oracle
            )
        });
        dims.details
            .push(format!("weight {}: dim {}", w, by_oracle));
    }
    report.push(dims);

    let weyl = task.lattice.weyl_group(task.group_cap)?;
    let orth = task.lattice.orthogonal_group(task.group_cap)?;
    let outer = task.lattice.outer_classes(&weyl, &orth);
    let mut groups = CheckRecord::new("isometry-groups", "outer-coset-tiling");
    groups.record(weyl.order() * outer.len() == orth.order(), || {
        format!(
            "|W|={} classes={} |O|={}",
            weyl.order(),
            outer.len(),
            orth.order()
        )
    });
    groups.details.push(format!(
        "reflection group order {}, full isometry group order {}, outer classes {}",
        weyl.order(),
        orth.order(),
        outer.len()
    ));
    report.push(groups);

    report.seal();
    Ok(report)
}

pub fn graded_dims(task: &Task) -> Result<Report> {
    let mut report = task.report("graded-dims");
    report.param("max_weight", task.max_weight);
    let mut check = CheckRecord::new("graded-dimensions", "graded-dimension-convolution");
    for w in 0..=task.max_weight {
        let by_enumeration: usize = lattice_points_up_to(&task.lattice, w)
            .iter()
            .map(|p| graded_states(&task.lattice, p, w).len())
            .sum();
        let by_oracle = graded_dimension(&task.lattice, w);
        check.record(BigUint::from(by_enumeration) == by_oracle, || {
            format!(
                "weight {}: enumeration {} vs convolution {}",
                w, by_enumeration, by_oracle
            )
        });
        check
            .details
            .push(format!("weight {}: dim {}", w, by_oracle));
    }
    report.push(check);
    report.seal();
    Ok(report)
}

pub fn verify_axioms(task: &Task) -> Result<Report> {
    let engine = Engine::new(task.lattice.clone());
    let mut report = task.report("verify-axioms");
    report.param("max_weight", task.max_weight);
    report.param("max_mode", task.max_mode);
    report.param("samples", task.samples);
    report.param("seed", task.seed);

    let vectors = task.truncation_vectors(task.max_weight);
    let m = task.max_mode;
    let n_lo = -(task.max_weight + 1);
    let n_hi = 2 * task.max_weight - 1;

    // Borcherds identity over (u, v, w, r, s, t).
    let mut borcherds = CheckRecord::new("borcherds-identity", "borcherds-identity");
    {
        let visit =
            |ui: usize, vi: usize, wi: usize, r: i64, s: i64, t: i64, rec: &mut CheckRecord| {
                let res =
                    engine.borcherds_residual(&vectors[ui], &vectors[vi], &vectors[wi], r, s, t);
                rec.record(res.is_zero(), || {
                    format!(
                        "u={} v={} w={} r={} s={} t={}: residual {}",
                        vectors[ui], vectors[vi], vectors[wi], r, s, t, res
                    )
                });
            };
        if task.samples == 0 {
            for ui in 0..vectors.len() {
                for vi in 0..vectors.len() {
                    for wi in 0..vectors.len() {
                        for r in -m..=m {
                            for s in -m..=m {
                                for t in -m..=m {
                                    visit(ui, vi, wi, r, s, t, &mut borcherds);
                                }
                            }
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(task.seed);
            for _ in 0..task.samples {
                let ui = rng.gen_range(0..vectors.len());
                let vi = rng.gen_range(0..vectors.len());
                let wi = rng.gen_range(0..vectors.len());
                let r = rng.gen_range(-m..=m);
                let s = rng.gen_range(-m..=m);
                let t = rng.gen_range(-m..=m);
                visit(ui, vi, wi, r, s, t, &mut borcherds);
            }
        }
    }
    report.push(borcherds);

    // Commutator formula over (u, v, w, m, n).
    let mut commutator = CheckRecord::new("commutator-formula", "commutator-formula");
    {
        let visit = |ui: usize, vi: usize, wi: usize, mm: i64, nn: i64, rec: &mut CheckRecord| {
            let res = engine.commutator_residual(&vectors[ui], &vectors[vi], &vectors[wi], mm, nn);
            rec.record(res.is_zero(), || {
                format!(
                    "u={} v={} w={} m={} n={}: residual {}",
                    vectors[ui], vectors[vi], vectors[wi], mm, nn, res
                )
            });
        };
        if task.samples == 0 {
            for ui in 0..vectors.len() {
                for vi in 0..vectors.len() {
                    for wi in 0..vectors.len() {
                        for mm in -m..=m {
                            for nn in -m..=m {
                                visit(ui, vi, wi, mm, nn, &mut commutator);
                            }
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(task.seed.wrapping_add(1));
            for _ in 0..task.samples {
                let ui = rng.gen_range(0..vectors.len());
                let vi = rng.gen_range(0..vectors.len());
                let wi = rng.gen_range(0..vectors.len());
                let mm = rng.gen_range(-m..=m);
                let nn = rng.gen_range(-m..=m);
                visit(ui, vi, wi, mm, nn, &mut commutator);
            }
        }
    }
    report.push(commutator);

    // Skew symmetry over (u, v, n) through the full nonvanishing window.
    let mut skew = CheckRecord::new("skew-symmetry", "skew-symmetry");
    {
        let visit = |ui: usize, vi: usize, n: i64, rec: &mut CheckRecord| {
            let res = engine.skew_residual(&vectors[ui], &vectors[vi], n);
            rec.record(res.is_zero(), || {
                format!(
                    "u={} v={} n={}: residual {}",
                    vectors[ui], vectors[vi], n, res
                )
            });
        };
        if task.samples == 0 {
            for ui in 0..vectors.len() {
                for vi in 0..vectors.len() {
                    for n in n_lo..=n_hi {
                        visit(ui, vi, n, &mut skew);
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(task.seed.wrapping_add(2));
            for _ in 0..task.samples {
                let ui = rng.gen_range(0..vectors.len());
                let vi = rng.gen_range(0..vectors.len());
                let n = rng.gen_range(n_lo..=n_hi);
                visit(ui, vi, n, &mut skew);
            }
        }
    }
    report.push(skew);

    // Iterate (associativity) expansion over (u, v, w, t, s).
    let mut assoc = CheckRecord::new("associativity", "associativity-iterate");
    {
        let visit = |ui: usize, vi: usize, wi: usize, t: i64, s: i64, rec: &mut CheckRecord| {
            let res = engine.associativity_residual(&vectors[ui], &vectors[vi], &vectors[wi], t, s);
            rec.record(res.is_zero(), || {
                format!(
                    "u={} v={} w={} t={} s={}: residual {}",
                    vectors[ui], vectors[vi], vectors[wi], t, s, res
                )
            });
        };
        if task.samples == 0 {
            for ui in 0..vectors.len() {
                for vi in 0..vectors.len() {
                    for wi in 0..vectors.len() {
                        for t in -m..=m {
                            for s in -m..=m {
                                visit(ui, vi, wi, t, s, &mut assoc);
                            }
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(task.seed.wrapping_add(3));
            for _ in 0..task.samples {
                let ui = rng.gen_range(0..vectors.len());
                let vi = rng.gen_range(0..vectors.len());
                let wi = rng.gen_range(0..vectors.len());
                let t = rng.gen_range(-m..=m);
                let s = rng.gen_range(-m..=m);
                visit(ui, vi, wi, t, s, &mut assoc);
            }
        }
    }
    report.push(assoc);

    // Translation covariance over (u, w, n).
    let mut translation = CheckRecord::new("translation-covariance", "translation-covariance");
    {
        let visit = |ui: usize, wi: usize, n: i64, rec: &mut CheckRecord| {
            let res = engine.translation_residual(&vectors[ui], &vectors[wi], n);
            rec.record(res.is_zero(), || {
                format!(
                    "u={} w={} n={}: residual {}",
                    vectors[ui], vectors[wi], n, res
                )
            });
        };
        if task.samples == 0 {
            for ui in 0..vectors.len() {
                for wi in 0..vectors.len() {
                    for n in -m..=m {
                        visit(ui, wi, n, &mut translation);
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(task.seed.wrapping_add(4));
            for _ in 0..task.samples {
                let ui = rng.gen_range(0..vectors.len());
                let wi = rng.gen_range(0..vectors.len());
                let n = rng.gen_range(-m..=m);
                visit(ui, wi, n, &mut translation);
            }
        }
    }
    report.push(translation);

    report.seal();
    Ok(report)
}

pub fn conformal(task: &Task) -> Result<Report> {
    let engine = Engine::new(task.lattice.clone());
    let mut report = task.report("conformal");
    report.param("max_mode", task.max_mode);
    let decision = engine.conformal_decision(&task.ring)?;

    let mut criterion = CheckRecord::new("ring-admission", "det-unit-criterion");
    criterion.record(decision.admits == decision.obstructions.is_empty(), || {
        "determinant criterion and coefficient reduction disagree".to_string()
    });
    criterion.details.push(format!(
        "det = {}, unit in {}: {}, conformal structure {}",
        decision.det,
        task.ring_token,
        decision.det_unit,
        if decision.admits {
            "admitted"
        } else {
            "refused"
        }
    ));
    for (state, coeff) in &decision.obstructions {
        criterion.details.push(format!(
            "coefficient {} of {} has no image in {}",
            coeff, state, task.ring_token
        ));
    }
    report.push(criterion);

    if decision.admits {
        let check_weight = task.max_weight.min(2);
        let vectors = task.truncation_vectors(check_weight);
        let m = task.max_mode;

        let mut bracket = CheckRecord::new("virasoro-bracket", "virasoro-commutator");
        for mm in -m..=m {
            for nn in -m..=m {
                for v in &vectors {
                    let res = engine.virasoro_residual(mm, nn, v);
                    bracket.record(res.is_zero(), || {
                        format!("m={} n={} v={}: residual {}", mm, nn, v, res)
                    });
                }
            }
        }
        report.push(bracket);

        let mut grading = CheckRecord::new("l0-grading", "l0-eigenvalue-is-weight");
        let l = &task.lattice;
        for v in &vectors {
            let wt = v.top_weight(l).unwrap();
            let res = engine.l0_residual(v, wt);
            grading.record(res.is_zero(), || format!("v={}: residual {}", v, res));
        }
        report.push(grading);

        let mut translation = CheckRecord::new("l-minus-one", "l-minus-one-is-translation");
        for v in &vectors {
            let ok = engine.l_op(-1, v) == engine.translate(v);
            translation.record(ok, || format!("v={}", v));
        }
        report.push(translation);

        let mut primary = CheckRecord::new("heisenberg-primary", "primary-current-bracket");
        for i in 0..task.lattice.rank() {
            let a = voa_core::lattice::LatticeVector::basis(task.lattice.rank(), i);
            for mm in -m..=m {
                for nn in -m..=m {
                    for v in vectors.iter().take(6) {
                        let res = engine.heisenberg_primary_residual(&a, mm, nn, v);
                        primary.record(res.is_zero(), || {
                            format!("a(e{}) m={} n={} v={}: residual {}", i, mm, nn, v, res)
                        });
                    }
                }
            }
        }
        report.push(primary);

        if task.ring != Ring::Rationals {
            let mut specializes =
                CheckRecord::new("conformal-vector-reduction", "conformal-vector-in-ring");
            let ok = engine.conformal_vector().specialize(&task.ring).is_ok();
            specializes.record(ok, || "conformal vector fails to reduce".to_string());
            report.push(specializes);
        }
    }

    report.seal();
    Ok(report)
}

pub fn aut_report(task: &Task) -> Result<Report> {
    let engine = Engine::new(task.lattice.clone());
    let mut report = task.report("aut-report");
    report.param("truncation", task.truncation);
    report.param("samples", task.samples);
    report.param("seed", task.seed);
    report.param("group_cap", task.group_cap);

    let group = group_realization_report(&engine, &task.ring, task.truncation, task.group_cap)?;

    let mut tiling = CheckRecord::new("isometry-groups", "outer-coset-tiling");
    tiling.record(group.outer_quotient_consistent, || {
        format!(
            "|W|={} classes={} |O|={}",
            group.weyl_order, group.outer_class_count, group.orthogonal_order
        )
    });
    tiling.details.push(format!(
        "reflection group {}, isometry group {}, outer classes {}",
        group.weyl_order, group.orthogonal_order, group.outer_class_count
    ));
    report.push(tiling);

    let mut faithful = CheckRecord::new("cover-realization", "cover-faithful-realization");
    faithful.record(group.cover_matrix_faithful, || {
        format!(
            "{} abstract elements vs {} matrices",
            group.cover_order, group.cover_matrix_order
        )
    });
    faithful.details.push(format!(
        "cover group order {} ({} in the kernel), distinct matrices {} ({} kernel) on dimension {}",
        group.cover_order,
        group.cover_kernel_order,
        group.cover_matrix_order,
        group.cover_matrix_kernel_order,
        group.dim
    ));
    report.push(faithful);

    let mut tits = CheckRecord::new("extended-weyl-group", "extended-weyl-preimage");
    tits.record(group.tits_equals_weyl_preimage, || {
        format!(
            "extended Weyl group order {} vs reflection preimage order {}",
            group.tits_order, group.weyl_preimage_order
        )
    });
    tits.details.push(format!(
        "extended Weyl group order {} equals the cover preimage of the reflection group",
        group.tits_order
    ));
    report.push(tits);

    let mut centralizer = CheckRecord::new("torus-centralizer", "torus-centralizer-kernel");
    centralizer.record(group.centralizer_equals_kernel, || {
        format!("centralizer order {}", group.torus_centralizer_order)
    });
    centralizer.details.push(format!(
        "centralizer of the torus in the rational cover image has order {}",
        group.torus_centralizer_order
    ));
    report.push(centralizer);

    // Product-rule checks for representative symmetries, plus the corrupted
    // lift that must fail.
    let check_weight = if task.samples == 0 {
        task.max_weight.min(2)
    } else {
        task.max_weight
    };
    let sampling = if task.samples == 0 {
        None
    } else {
        Some((task.samples, task.seed))
    };
    report.param("check_weight", check_weight);

    let mut actions: Vec<(String, SymmetryAction, bool)> = Vec::new();
    let torus = SymmetryAction::Torus(prime_character(task.lattice.rank()));
    actions.push(("torus-prime-character".into(), torus, true));
    if let Some(alpha) = task.lattice.roots().first() {
        let g = root_exp(
            &task.lattice,
            alpha.clone(),
            num_rational::BigRational::new(1.into(), 1.into()),
        )?;
        actions.push(("root-exponential".into(), g, true));
    }
    let minus_id = IntMatrix::from_rows(
        &(0..task.lattice.rank())
            .map(|i| {
                (0..task.lattice.rank())
                    .map(|j| if i == j { -1 } else { 0 })
                    .collect::<Vec<i64>>()
            })
            .collect::<Vec<_>>(),
    )?;
    let lift: CoverAutomorphism = lift_orthogonal(
        &task.lattice,
        engine.cocycle(),
        Ring::Rationals,
        minus_id,
        vec![Ring::Rationals.one(); task.lattice.rank()],
    )?;
    actions.push((
        "cover-lift-negation".into(),
        SymmetryAction::Cover(lift.clone()),
        true,
    ));
    actions.push((
        "corrupted-lift-control".into(),
        SymmetryAction::CoverTwisted(lift),
        false,
    ));

    for (name, action, expect_pass) in actions {
        let outcome = check_vertex_automorphism(&engine, &action, check_weight, sampling);
        let anchor = if expect_pass {
            "automorphism-product-rule"
        } else {
            "negative-control-detects-corruption"
        };
        let mut rec = CheckRecord::new(&name, anchor);
        rec.instances = outcome.instances;
        if expect_pass {
            rec.failures = outcome.failures;
            rec.passed = outcome.passed();
            rec.details.extend(outcome.first_failures.iter().cloned());
        } else {
            // The control passes exactly when the product rule detects the
            // corruption.
            rec.passed = !outcome.passed();
            rec.failures = usize::from(!rec.passed);
            rec.details.push(format!(
                "corrupted action violated the product rule in {} of {} instances",
                outcome.failures, outcome.instances
            ));
        }
        report.push(rec);
    }

    report.seal();
    Ok(report)
}
