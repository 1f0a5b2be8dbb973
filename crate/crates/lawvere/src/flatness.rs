//! Flatness classification of left modules.
//!
//! The authoritative predicates go through the filter calculus: a module
//! is P1-flat when it is reconstructed from its unit set, aleph-flat when
//! that set additionally carries an internal witness, and a left adjoint
//! when it forms an adjoint pair with its canonical candidate. The lattice
//! equations — preservation of the terminal object, of conical limits of
//! small families, and of cotensors — quantify over all right modules, so
//! they are checked by (optionally exhaustive) search over a value grid
//! and serve as an independent cross-check of the same classification.

use std::collections::HashMap;
use std::fmt;

use crate::filter::filter_of_module;
use crate::module::{
    compose, enumerate_right_modules, is_adjoint_pair, right_adjoint_candidate, LeftModule,
};
use crate::quantale::Value;
use crate::Aleph;

/// The classes of weights whose flatness the toolkit decides, ordered by
/// inclusion: left adjoints inside aleph-flat inside P1-flat.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlatnessClass {
    P1,
    Aleph(Aleph),
    /// Small projectives, i.e. left adjoint modules.
    Adjoint,
}

impl fmt::Display for FlatnessClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FlatnessClass::P1 => write!(f, "p1"),
            FlatnessClass::Aleph(a) => write!(f, "{a}"),
            FlatnessClass::Adjoint => write!(f, "adjoint"),
        }
    }
}

/// P1-flat: the join of all values is the unit and the module is the
/// lower-distance module of its own unit-set filter.
pub fn is_p1_flat(m: &LeftModule) -> bool {
    match filter_of_module(m) {
        None => false,
        Some(f) => f.module_minus().values() == m.values(),
    }
}

/// Aleph-flat: P1-flat with an internal witness on the unit set. All
/// infinite regular cardinal tags agree on finite instances.
pub fn is_aleph_flat(m: &LeftModule, aleph: Aleph) -> bool {
    match filter_of_module(m) {
        None => false,
        Some(f) => f.module_minus().values() == m.values() && f.is_type_aleph(aleph),
    }
}

/// Left adjoint: the module forms an adjoint pair with its canonical
/// right-adjoint candidate. If any right adjoint exists this is it.
pub fn is_left_adjoint(m: &LeftModule) -> bool {
    let candidate = right_adjoint_candidate(m);
    is_adjoint_pair(m, &candidate).expect("candidate lives on the same space")
}

/// Small projectives are exactly the left adjoint modules.
pub fn is_small_projective(m: &LeftModule) -> bool {
    is_left_adjoint(m)
}

pub fn satisfies(m: &LeftModule, class: &FlatnessClass) -> bool {
    match class {
        FlatnessClass::P1 => is_p1_flat(m),
        FlatnessClass::Aleph(a) => is_aleph_flat(m, *a),
        FlatnessClass::Adjoint => is_left_adjoint(m),
    }
}

/// Budget for the lattice-equation check.
#[derive(Debug, Clone)]
pub struct LatticeCheckConfig {
    /// Largest family size used for the conical condition. Families beyond
    /// this size cannot cut finer on small finite spaces.
    pub family_cap: usize,
    /// Stop after this many evaluated instances; `None` runs the scan to
    /// exhaustion over the grid.
    pub max_instances: Option<u64>,
    /// Value grid for the quantified right modules. Defaults to every
    /// value occurring in the hom matrix and the module, plus the top and
    /// bottom of the base.
    pub grid: Option<Vec<Value>>,
}

impl Default for LatticeCheckConfig {
    fn default() -> Self {
        LatticeCheckConfig {
            family_cap: 4,
            max_instances: None,
            grid: None,
        }
    }
}

/// One failed lattice-equation instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeViolation {
    /// The terminal object is not preserved: the join of the module's
    /// values is not the unit.
    Terminal { join: Value },
    /// A family of right modules on which weighting by the module fails
    /// to commute with the conical limit.
    Conical {
        family: Vec<Vec<Value>>,
        lhs: Value,
        rhs: Value,
    },
    /// A cotensor `(v, N)` that weighting by the module fails to preserve.
    Cotensor {
        v: Value,
        module: Vec<Value>,
        lhs: Value,
        rhs: Value,
    },
}

impl fmt::Display for LatticeViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeViolation::Terminal { join } => {
                write!(f, "terminal object not preserved: join of values = {join}")
            }
            LatticeViolation::Conical { family, lhs, rhs } => write!(
                f,
                "conical limit not preserved on a family of {} right modules: {lhs} != {rhs}",
                family.len()
            ),
            LatticeViolation::Cotensor { v, lhs, rhs, .. } => {
                write!(f, "cotensor by {v} not preserved: {lhs} != {rhs}")
            }
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct LatticeReport {
    /// Number of instances (families and cotensor pairs) evaluated.
    pub instances: u64,
    pub violations: Vec<LatticeViolation>,
}

impl LatticeReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Derive the check grid from the inputs: values of the hom matrix and the
/// module, plus top and bottom, sorted along the arrow order.
pub fn derived_grid(m: &LeftModule) -> Vec<Value> {
    let space = m.space();
    let mut grid: Vec<Value> = vec![space.base().bottom(), space.base().top()];
    for row in space.hom_matrix() {
        grid.extend(row.iter().cloned());
    }
    grid.extend(m.values().iter().cloned());
    grid.sort_by(|a, b| a.cat_cmp(b));
    grid.dedup();
    grid
}

/// Checks the lattice-equation side of flatness for `m` against `class`
/// over a grid of right modules, reporting every violated instance found
/// within the budget.
///
/// The class picks the conditions: P1 checks terminal-object and cotensor
/// preservation; the aleph classes and the adjoint class additionally
/// check conical limits of families up to `family_cap`. Relative to the
/// grid the scan is complete when `max_instances` is `None`.
pub fn sampled_lattice_check(
    m: &LeftModule,
    class: &FlatnessClass,
    cfg: &LatticeCheckConfig,
) -> LatticeReport {
    let mut report = LatticeReport::default();
    scan_lattice(m, class, cfg, false, &mut |violation, instances| {
        report.instances = instances;
        report.violations.push(violation);
        true
    });
    report
}

/// Clean/violated verdict with the same semantics as
/// [`sampled_lattice_check`] run to exhaustion, stopping at the first
/// violation.
///
/// The conical condition is decided by scanning singletons and pairs
/// only: the enumerated right-module set is closed under pointwise meets
/// (meets select coordinates and preserve validity), so any violating
/// family splits into a violating pair by peeling off one member. The
/// verdict therefore agrees with the full family scan at every cap.
pub fn lattice_verdict(m: &LeftModule, class: &FlatnessClass, cfg: &LatticeCheckConfig) -> bool {
    let mut clean = true;
    scan_lattice(m, class, cfg, true, &mut |_violation, _instances| {
        clean = false;
        false
    });
    clean
}

fn scan_lattice(
    m: &LeftModule,
    class: &FlatnessClass,
    cfg: &LatticeCheckConfig,
    pairs_suffice: bool,
    on_violation: &mut dyn FnMut(LatticeViolation, u64) -> bool,
) {
    let space = m.space();
    let base = space.base();
    let grid = cfg.grid.clone().unwrap_or_else(|| derived_grid(m));
    let rights = enumerate_right_modules(space, &grid);
    let mut instances: u64 = 0;
    let budget = cfg.max_instances.unwrap_or(u64::MAX);

    // Terminal object: the empty conical limit.
    instances += 1;
    let join = base.join(m.values().iter());
    if !join.is_unit() && !on_violation(LatticeViolation::Terminal { join }, instances) {
        return;
    }

    let conical = matches!(class, FlatnessClass::Aleph(_) | FlatnessClass::Adjoint);
    if conical && !rights.is_empty() && instances < budget {
        // Composite of the module against every grid right module. The
        // pointwise meet of valid grid right modules is again a valid grid
        // right module, so family meets stay inside the enumerated set and
        // the scan reduces to table lookups on dense ranks.
        let composites: Vec<Value> = rights
            .iter()
            .map(|n| compose(n, m).expect("same space"))
            .collect();
        let mut sorted: Vec<Value> = composites.clone();
        sorted.sort_by(|a, b| a.cat_cmp(b));
        sorted.dedup();
        let rank_of = |v: &Value| sorted.binary_search_by(|w| w.cat_cmp(v)).unwrap();
        let ranks: Vec<usize> = composites.iter().map(&rank_of).collect();

        let position: HashMap<&[Value], usize> = rights
            .iter()
            .enumerate()
            .map(|(i, n)| (n.values(), i))
            .collect();
        let meet_table: Vec<Vec<u32>> = rights
            .iter()
            .map(|a| {
                rights
                    .iter()
                    .map(|b| {
                        let meet: Vec<Value> = a
                            .values()
                            .iter()
                            .zip(b.values())
                            .map(|(x, y)| base.meet([x, y]))
                            .collect();
                        position[meet.as_slice()] as u32
                    })
                    .collect()
            })
            .collect();

        // Families are strictly increasing index tuples of each size; a
        // violation on any family with repetitions already shows on its
        // support set.
        let count = rights.len();
        let cap = if pairs_suffice {
            cfg.family_cap.max(1).min(2)
        } else {
            cfg.family_cap.max(1)
        };
        let mut stack: Vec<usize> = Vec::with_capacity(cap);
        let mut meets: Vec<usize> = Vec::with_capacity(cap);
        let mut best: Vec<usize> = Vec::with_capacity(cap);

        fn descend(
            stack: &mut Vec<usize>,
            meets: &mut Vec<usize>,
            best: &mut Vec<usize>,
            next: usize,
            count: usize,
            cap: usize,
            ranks: &[usize],
            meet_table: &[Vec<u32>],
            rights: &[crate::module::RightModule],
            composites: &[Value],
            instances: &mut u64,
            budget: u64,
            on_violation: &mut dyn FnMut(LatticeViolation, u64) -> bool,
        ) -> bool {
            for i in next..count {
                if *instances >= budget {
                    return false;
                }
                let meet_idx = match meets.last() {
                    None => i,
                    Some(&prev) => meet_table[prev][i] as usize,
                };
                let best_rank = match best.last() {
                    None => ranks[i],
                    Some(&prev) => prev.min(ranks[i]),
                };
                stack.push(i);
                meets.push(meet_idx);
                best.push(best_rank);
                *instances += 1;
                if ranks[meet_idx] != best_rank {
                    let family: Vec<Vec<Value>> = stack
                        .iter()
                        .map(|&k| rights[k].values().to_vec())
                        .collect();
                    let violation = LatticeViolation::Conical {
                        family,
                        lhs: composites[meet_idx].clone(),
                        rhs: composites[stack
                            .iter()
                            .min_by_key(|&&k| ranks[k])
                            .copied()
                            .expect("family non-empty")]
                        .clone(),
                    };
                    if !on_violation(violation, *instances) {
                        return false;
                    }
                }
                if stack.len() < cap
                    && !descend(
                        stack,
                        meets,
                        best,
                        i + 1,
                        count,
                        cap,
                        ranks,
                        meet_table,
                        rights,
                        composites,
                        instances,
                        budget,
                        on_violation,
                    )
                {
                    return false;
                }
                stack.pop();
                meets.pop();
                best.pop();
            }
            true
        }

        if !descend(
            &mut stack,
            &mut meets,
            &mut best,
            0,
            count,
            cap,
            &ranks,
            &meet_table,
            &rights,
            &composites,
            &mut instances,
            budget,
            on_violation,
        ) {
            return;
        }
    }

    // Cotensor preservation:
    // join_x ( M(x) (x) [v, N(x)] ) = [v, join_x ( M(x) (x) N(x) )].
    for v in &grid {
        for n in &rights {
            if instances >= budget {
                return;
            }
            instances += 1;
            let terms: Vec<Value> = m
                .values()
                .iter()
                .zip(n.values())
                .map(|(mv, nv)| mv.tensor(&v.hom(nv)))
                .collect();
            let lhs = base.join(terms.iter());
            let rhs = v.hom(&compose(n, m).expect("same space"));
            if lhs != rhs {
                let violation = LatticeViolation::Cotensor {
                    v: v.clone(),
                    module: n.values().to_vec(),
                    lhs,
                    rhs,
                };
                if !on_violation(violation, instances) {
                    return;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::enumerate_left_modules;
    use crate::quantale::CostValue;
    use crate::space::{nonexpansive_maps, Functor, Space};

    fn z2() -> Space {
        Space::cost(&["p", "q"], &[&["0", "0"], &["1", "0"]]).unwrap()
    }

    fn t3() -> Space {
        Space::cost(
            &["a", "b", "c"],
            &[&["0", "1", "3"], &["2", "0", "2"], &["1", "1", "0"]],
        )
        .unwrap()
    }

    fn s2() -> Space {
        Space::cost(&["u", "v"], &[&["0", "2"], &["2", "0"]]).unwrap()
    }

    fn costs(strs: &[&str]) -> Vec<Value> {
        strs.iter()
            .map(|s| Value::Cost(s.parse::<CostValue>().unwrap()))
            .collect()
    }

    fn grid() -> Vec<Value> {
        costs(&["0", "1", "2", "inf"])
    }

    #[test]
    fn p1_examples() {
        let t3 = t3();
        let representable = LeftModule::new(&t3, costs(&["0", "2", "1"])).unwrap();
        assert!(is_p1_flat(&representable));
        let two_point = LeftModule::new(&t3, costs(&["0", "2", "0"])).unwrap();
        assert!(is_p1_flat(&two_point));
        let constant = LeftModule::new(&t3, costs(&["1", "1", "1"])).unwrap();
        assert!(!is_p1_flat(&constant));
    }

    #[test]
    fn aleph_examples() {
        let t3 = t3();
        let two_point = LeftModule::new(&t3, costs(&["0", "2", "0"])).unwrap();
        assert!(!is_aleph_flat(&two_point, Aleph::OMEGA));

        let z2 = z2();
        let m = LeftModule::new(&z2, costs(&["0", "0"])).unwrap();
        assert!(is_aleph_flat(&m, Aleph::OMEGA));

        for space in [t3.clone(), z2] {
            for a in 0..space.object_count() {
                let m = LeftModule::representable(&space, a).unwrap();
                assert!(is_aleph_flat(&m, Aleph::OMEGA));
                assert!(is_aleph_flat(&m, Aleph(7)));
            }
        }
    }

    #[test]
    fn adjoint_examples() {
        let t3 = t3();
        for a in 0..3 {
            assert!(is_left_adjoint(
                &LeftModule::representable(&t3, a).unwrap()
            ));
        }
        let z2 = z2();
        let m = LeftModule::new(&z2, costs(&["0", "0"])).unwrap();
        assert!(is_left_adjoint(&m));
        assert!(is_small_projective(&m));

        let two_point = LeftModule::new(&t3, costs(&["0", "2", "0"])).unwrap();
        assert!(!is_left_adjoint(&two_point));
    }

    #[test]
    fn hierarchy_over_enumerated_modules() {
        for space in [z2(), t3(), s2()] {
            for m in enumerate_left_modules(&space, &grid()) {
                if is_left_adjoint(&m) {
                    assert!(is_aleph_flat(&m, Aleph(3)));
                }
                if is_aleph_flat(&m, Aleph(3)) {
                    assert!(is_aleph_flat(&m, Aleph::OMEGA));
                }
                if is_aleph_flat(&m, Aleph::OMEGA) {
                    assert!(is_p1_flat(&m));
                }
            }
        }
    }

    #[test]
    fn lattice_check_on_flat_modules_is_clean() {
        let t3 = t3();
        let cfg = LatticeCheckConfig::default();
        let representable = LeftModule::new(&t3, costs(&["0", "2", "1"])).unwrap();
        assert!(sampled_lattice_check(&representable, &FlatnessClass::P1, &cfg).is_clean());
        let two_point = LeftModule::new(&t3, costs(&["0", "2", "0"])).unwrap();
        assert!(sampled_lattice_check(&two_point, &FlatnessClass::P1, &cfg).is_clean());
    }

    #[test]
    fn lattice_check_terminal_violation() {
        let t3 = t3();
        let constant = LeftModule::new(&t3, costs(&["1", "1", "1"])).unwrap();
        let report = sampled_lattice_check(&constant, &FlatnessClass::P1, &LatticeCheckConfig::default());
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, LatticeViolation::Terminal { join } if *join == costs(&["1"])[0])));
    }

    #[test]
    fn lattice_check_conical_violation_for_non_omega_module() {
        let t3 = t3();
        let two_point = LeftModule::new(&t3, costs(&["0", "2", "0"])).unwrap();
        let cfg = LatticeCheckConfig::default();
        let report =
            sampled_lattice_check(&two_point, &FlatnessClass::Aleph(Aleph::OMEGA), &cfg);
        let pair = report.violations.iter().find_map(|v| match v {
            LatticeViolation::Conical { family, .. } if family.len() == 2 => Some(family),
            _ => None,
        });
        assert!(pair.is_some(), "expected a violating pair of right modules");
    }

    #[test]
    fn oracle_and_lattice_check_agree() {
        // The check uses its derived grid (values of A and M plus top and
        // bottom); coarser grids are not complete test sets.
        let cfg = LatticeCheckConfig::default();
        for space in [z2(), t3(), s2()] {
            for m in enumerate_left_modules(&space, &grid()) {
                assert_eq!(
                    is_p1_flat(&m),
                    lattice_verdict(&m, &FlatnessClass::P1, &cfg),
                    "p1 disagreement on {:?} over {:?}",
                    m.values(),
                    space
                );
                assert_eq!(
                    is_aleph_flat(&m, Aleph::OMEGA),
                    lattice_verdict(&m, &FlatnessClass::Aleph(Aleph::OMEGA), &cfg),
                    "omega disagreement on {:?} over {:?}",
                    m.values(),
                    space
                );
            }
        }
    }

    #[test]
    fn budget_stops_the_scan() {
        let t3 = t3();
        let two_point = LeftModule::new(&t3, costs(&["0", "2", "0"])).unwrap();
        let cfg = LatticeCheckConfig {
            max_instances: Some(1),
            grid: Some(grid()),
            ..LatticeCheckConfig::default()
        };
        let report = sampled_lattice_check(&two_point, &FlatnessClass::Aleph(Aleph::OMEGA), &cfg);
        assert!(report.instances <= 1);
    }

    #[test]
    fn flatness_is_preserved_by_kan_extension() {
        let z2 = z2();
        let t3 = t3();
        for map in nonexpansive_maps(&z2, &t3) {
            let g = Functor::new(z2.clone(), t3.clone(), map).unwrap();
            for m in enumerate_left_modules(&z2, &grid()) {
                let lan = crate::module::left_kan_extension(&m, &g).unwrap();
                if is_p1_flat(&m) {
                    assert!(is_p1_flat(&lan));
                }
                if is_aleph_flat(&m, Aleph::OMEGA) {
                    assert!(is_aleph_flat(&lan, Aleph::OMEGA));
                }
                if is_left_adjoint(&m) {
                    assert!(is_left_adjoint(&lan));
                }
            }
        }
    }

    #[test]
    fn symmetric_spaces_collapse_omega_to_adjoint_and_hom_is_discrete() {
        let s2 = s2();
        for m in enumerate_left_modules(&s2, &grid()) {
            assert_eq!(is_aleph_flat(&m, Aleph::OMEGA), is_left_adjoint(&m));
        }
        // Adjoint modules at hom distance zero coincide.
        let adjoints: Vec<_> = enumerate_left_modules(&s2, &grid())
            .into_iter()
            .filter(is_left_adjoint)
            .collect();
        assert!(!adjoints.is_empty());
        for m in &adjoints {
            for n in &adjoints {
                if crate::module::presheaf_hom(m, n).unwrap().is_unit() {
                    assert_eq!(m.values(), n.values());
                }
            }
        }
    }

    #[test]
    fn separating_witnesses() {
        // (0,2,0) on T3 separates P1 from omega; representables are adjoint.
        let t3 = t3();
        let witness = LeftModule::new(&t3, costs(&["0", "2", "0"])).unwrap();
        assert!(is_p1_flat(&witness) && !is_aleph_flat(&witness, Aleph::OMEGA));
        // (0,0) on Z2 is omega-flat and adjoint, yet its unit-set filter is
        // not Cauchy: the hierarchy is strict only before the omega level.
        let z2 = z2();
        let m = LeftModule::new(&z2, costs(&["0", "0"])).unwrap();
        assert!(is_aleph_flat(&m, Aleph::OMEGA) && is_left_adjoint(&m));
        assert!(!filter_of_module(&m).unwrap().is_cauchy());
    }
}
