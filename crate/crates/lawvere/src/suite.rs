//! The batch theorem suite behind the `check` verb: generates seeded
//! instances, replays the toolkit's defining identities on them, and
//! reports per-property instance counts. Any violation carries a replay
//! document that the corresponding verb reproduces.

use serde::{Deserialize, Serialize};

use crate::completion::{
    cauchy_completion, check_universal_property, closure, is_complete, kind_cores, semi_hausdorff,
    type1_completion, type_aleph_completion, CompletionKind, UniversalPropertyLimits,
};
use crate::doc::{space_from_doc, space_to_doc, SpaceDoc};
use crate::filter::{filter_of_module, Filter, PeriodicSequence};
use crate::flatness::{
    is_aleph_flat, is_left_adjoint, is_p1_flat, lattice_verdict, FlatnessClass, LatticeCheckConfig,
};
use crate::generate;
use crate::module::{
    compose, enumerate_left_modules, enumerate_right_modules, is_adjoint_pair,
    left_kan_extension, presheaf_hom, right_adjoint_candidate, weighted_colimit,
};
use crate::preorder::{check_dcpo_universal_property, ideal_completion, poset_reflection, Downset};
use crate::quantale::{Base, CostValue, Value};
use crate::space::Space;
use crate::{Aleph, Error};

/// Reference spaces used throughout the suite and the documentation.
pub mod fixtures {
    use crate::space::Space;

    /// Two points at distance zero one way and one the other.
    pub fn z2() -> Space {
        Space::cost(&["p", "q"], &[&["0", "0"], &["1", "0"]]).unwrap()
    }

    /// Two points at distance zero both ways.
    pub fn z2_zero() -> Space {
        Space::cost(&["p", "q"], &[&["0", "0"], &["0", "0"]]).unwrap()
    }

    /// A non-symmetric three-point space with tight triangles.
    pub fn t3() -> Space {
        Space::cost(
            &["a", "b", "c"],
            &[&["0", "1", "3"], &["2", "0", "2"], &["1", "1", "0"]],
        )
        .unwrap()
    }

    /// A symmetric two-point space at distance two.
    pub fn s2() -> Space {
        Space::cost(&["u", "v"], &[&["0", "2"], &["2", "0"]]).unwrap()
    }

    pub fn one_point() -> Space {
        Space::cost(&["*"], &[&["0"]]).unwrap()
    }

    /// The three-element chain as a preorder.
    pub fn chain3() -> Space {
        Space::preorder(
            &["0", "1", "2"],
            &[&["1", "1", "1"], &["0", "1", "1"], &["0", "0", "1"]],
        )
        .unwrap()
    }

    pub fn discrete2() -> Space {
        Space::preorder(&["x", "y"], &[&["1", "0"], &["0", "1"]]).unwrap()
    }

    pub fn two_cycle() -> Space {
        Space::preorder(&["x", "y"], &[&["1", "1"], &["1", "1"]]).unwrap()
    }
}

/// Configuration of a `check` run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub seed: u64,
    /// Largest object count of generated spaces; at least 1.
    pub max_objects: usize,
    /// Cost grid values sampled into hom matrices; must contain 0.
    pub grid: Vec<CostValue>,
    /// Number of generated cost spaces (symmetric spaces and preorders
    /// are generated in proportion).
    pub space_count: usize,
    /// Extra space document included in the validation property.
    pub inject: Option<SpaceDoc>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 42,
            max_objects: 4,
            grid: ["0", "1/3", "1/2", "1", "2", "inf"]
                .iter()
                .map(|s| s.parse().unwrap())
                .collect(),
            space_count: 40,
            inject: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), Error> {
        if self.max_objects == 0 {
            return Err(Error::Document("max_objects must be at least 1".into()));
        }
        if !self.grid.iter().any(|v| v.is_zero()) {
            return Err(Error::Document("the value grid must contain 0".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PropertyOutcome {
    pub name: String,
    pub instances: u64,
    pub passed: bool,
}

/// What to run to reproduce a violation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Replay {
    pub verb: String,
    pub document: serde_json::Value,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Counterexample {
    pub property: String,
    pub detail: String,
    pub replay: Replay,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub max_objects: usize,
    pub grid: Vec<String>,
    pub properties: Vec<PropertyOutcome>,
    pub failure: Option<Counterexample>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

struct Corpus {
    cost_spaces: Vec<Space>,
    symmetric: Vec<Space>,
    preorders: Vec<Space>,
}

fn build_corpus(cfg: &RunConfig) -> Corpus {
    let mut rng = generate::rng(cfg.seed);
    let grid: Vec<Value> = cfg.grid.iter().map(|c| Value::Cost(c.clone())).collect();
    let mut cost_spaces = vec![
        fixtures::one_point(),
        fixtures::z2(),
        fixtures::z2_zero(),
        fixtures::s2(),
        fixtures::t3(),
    ];
    for i in 0..cfg.space_count {
        let n = 1 + (i % cfg.max_objects);
        cost_spaces.push(generate::random_space(&mut rng, Base::Cost, n, &grid));
    }
    let mut symmetric = vec![fixtures::s2(), fixtures::z2_zero()];
    for i in 0..cfg.space_count / 2 {
        let n = 1 + (i % cfg.max_objects.min(4));
        symmetric.push(generate::random_symmetric_space(&mut rng, n, &grid));
    }
    let mut preorders = vec![
        fixtures::chain3(),
        fixtures::discrete2(),
        fixtures::two_cycle(),
    ];
    for i in 0..cfg.space_count / 2 {
        let n = 1 + (i % cfg.max_objects.max(1).min(5));
        preorders.push(generate::random_preorder(&mut rng, n));
    }
    Corpus {
        cost_spaces,
        symmetric,
        preorders,
    }
}

fn all_filters(space: &Space) -> Vec<Filter> {
    let n = space.object_count();
    (1u32..(1 << n))
        .map(|mask| {
            let core = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
            Filter::new(space, core).expect("non-empty core")
        })
        .collect()
}

fn small_grid() -> Vec<Value> {
    ["0", "1", "2", "inf"]
        .iter()
        .map(|s| Value::Cost(s.parse::<CostValue>().unwrap()))
        .collect()
}

fn space_replay(verb: &str, space: &Space) -> Replay {
    Replay {
        verb: verb.to_string(),
        document: serde_json::to_value(space_to_doc(space)).expect("serializable"),
    }
}

fn fail(property: &str, detail: String, replay: Replay) -> Counterexample {
    Counterexample {
        property: property.to_string(),
        detail,
        replay,
    }
}

type PropertyFn<'a> = Box<dyn FnMut() -> Result<u64, Counterexample> + 'a>;

/// Runs the whole suite; the report lists one outcome per property in a
/// fixed order and the first counterexample encountered, if any.
pub fn run_suite(cfg: &RunConfig) -> Result<SuiteReport, Error> {
    cfg.validate()?;
    let corpus = build_corpus(cfg);
    let injected = match &cfg.inject {
        None => None,
        Some(doc) => Some((space_from_doc(doc)?, doc.clone())),
    };

    let grid_values: Vec<Value> = cfg.grid.iter().map(|c| Value::Cost(c.clone())).collect();
    let small: Vec<&Space> = corpus
        .cost_spaces
        .iter()
        .filter(|s| s.object_count() <= 3)
        .collect();
    let medium: Vec<&Space> = corpus
        .cost_spaces
        .iter()
        .filter(|s| s.object_count() <= 4)
        .collect();

    let mut properties: Vec<(&'static str, PropertyFn)> = Vec::new();

    properties.push((
        "quantale-residuation",
        Box::new(|| {
            let mut instances = 0;
            for a in &grid_values {
                for b in &grid_values {
                    for c in &grid_values {
                        instances += 1;
                        if a.tensor(b).entails(c) != a.entails(&b.hom(c)) {
                            return Err(fail(
                                "quantale-residuation",
                                format!("residuation fails at ({a}, {b}, {c})"),
                                space_replay("validate", &fixtures::one_point()),
                            ));
                        }
                    }
                }
            }
            let bools = [Value::Bool(false), Value::Bool(true)];
            for a in &bools {
                for b in &bools {
                    for c in &bools {
                        instances += 1;
                        if a.tensor(b).entails(c) != a.entails(&b.hom(c)) {
                            return Err(fail(
                                "quantale-residuation",
                                format!("Boolean residuation fails at ({a}, {b}, {c})"),
                                space_replay("validate", &fixtures::discrete2()),
                            ));
                        }
                    }
                }
            }
            Ok(instances)
        }),
    ));

    properties.push((
        "quantale-hom-meet",
        Box::new(|| {
            let mut instances = 0;
            let n = grid_values.len();
            for v in &grid_values {
                for size in 1usize..=4 {
                    let mut idx = vec![0usize; size];
                    'odometer: loop {
                        let family: Vec<&Value> = idx.iter().map(|&i| &grid_values[i]).collect();
                        instances += 1;
                        let lhs = v.hom(&Base::Cost.meet(family.iter().copied()));
                        let homs: Vec<Value> = family.iter().map(|a| v.hom(a)).collect();
                        let rhs = Base::Cost.meet(homs.iter());
                        if lhs != rhs {
                            return Err(fail(
                                "quantale-hom-meet",
                                format!("hom does not distribute at v={v}, family={family:?}"),
                                space_replay("validate", &fixtures::one_point()),
                            ));
                        }
                        let mut k = 0;
                        loop {
                            idx[k] += 1;
                            if idx[k] < n {
                                break;
                            }
                            idx[k] = 0;
                            k += 1;
                            if k == size {
                                break 'odometer;
                            }
                        }
                    }
                }
            }
            Ok(instances)
        }),
    ));

    let injected_ref = &injected;
    let corpus_ref = &corpus;
    properties.push((
        "space-validation",
        Box::new(move || {
            let mut instances = 0;
            for space in corpus_ref
                .cost_spaces
                .iter()
                .chain(&corpus_ref.symmetric)
                .chain(&corpus_ref.preorders)
            {
                instances += 1;
                let report = space.validate();
                if !report.is_valid() {
                    return Err(fail(
                        "space-validation",
                        format!("generated space failed validation:\n{report}"),
                        space_replay("validate", space),
                    ));
                }
            }
            if let Some((space, doc)) = injected_ref {
                instances += 1;
                let report = space.validate();
                if !report.is_valid() {
                    return Err(fail(
                        "space-validation",
                        format!("injected space failed validation:\n{report}"),
                        Replay {
                            verb: "validate".to_string(),
                            document: serde_json::to_value(doc).expect("serializable"),
                        },
                    ));
                }
            }
            Ok(instances)
        }),
    ));

    properties.push((
        "yoneda-isometry",
        Box::new(move || {
            let mut instances = 0;
            for space in &corpus_ref.cost_spaces {
                let comp = type1_completion(space).map_err(|e| {
                    fail(
                        "yoneda-isometry",
                        format!("completion failed: {e}"),
                        space_replay("complete", space),
                    )
                })?;
                for x in 0..space.object_count() {
                    for y in 0..space.object_count() {
                        instances += 1;
                        let embedded =
                            comp.space().hom(comp.embedding()[x], comp.embedding()[y]);
                        if embedded != space.hom(x, y) {
                            return Err(fail(
                                "yoneda-isometry",
                                format!(
                                    "embedding distorts ({x}, {y}): {embedded} vs {}",
                                    space.hom(x, y)
                                ),
                                space_replay("complete", space),
                            ));
                        }
                    }
                }
            }
            Ok(instances)
        }),
    ));

    properties.push((
        "filter-hom-max-min",
        Box::new(move || {
            let mut instances = 0;
            for space in &corpus_ref.cost_spaces {
                let filters = all_filters(space);
                for f1 in &filters {
                    for f2 in &filters {
                        instances += 1;
                        let lhs = presheaf_hom(&f1.module_minus(), &f2.module_minus())
                            .expect("same space");
                        let inner: Vec<Value> = f1
                            .core()
                            .iter()
                            .map(|&x| {
                                space
                                    .base()
                                    .join(f2.core().iter().map(|&y| space.hom(x, y)))
                            })
                            .collect();
                        let rhs = space.base().meet(inner.iter());
                        if lhs != rhs {
                            return Err(fail(
                                "filter-hom-max-min",
                                format!(
                                    "hom({:?}, {:?}) = {lhs}, max-min = {rhs}",
                                    f1.core(),
                                    f2.core()
                                ),
                                space_replay("distance", space),
                            ));
                        }
                    }
                }
            }
            Ok(instances)
        }),
    ));

    let small_ref = small.clone();
    properties.push((
        "compose-lim-minus",
        Box::new(move || {
            let mut instances = 0;
            for space in &small_ref {
                let rights = enumerate_right_modules(space, &small_grid());
                for f in all_filters(space) {
                    let m_minus = f.module_minus();
                    for n in &rights {
                        instances += 1;
                        let lhs = compose(n, &m_minus).expect("same space");
                        let rhs = f.lim_minus(n.values()).expect("same space");
                        if lhs != rhs {
                            return Err(fail(
                                "compose-lim-minus",
                                format!(
                                    "compose = {lhs}, lim- = {rhs} on core {:?}, N = {:?}",
                                    f.core(),
                                    n.values()
                                ),
                                space_replay("rep", space),
                            ));
                        }
                    }
                }
            }
            Ok(instances)
        }),
    ));

    let small_ref = small.clone();
    properties.push((
        "hom-lim-plus",
        Box::new(move || {
            let mut instances = 0;
            for space in &small_ref {
                let lefts = enumerate_left_modules(space, &small_grid());
                for f in all_filters(space) {
                    let m_minus = f.module_minus();
                    for m in &lefts {
                        instances += 1;
                        let lhs = presheaf_hom(&m_minus, m).expect("same space");
                        let rhs = f.lim_plus(m.values()).expect("same space");
                        if lhs != rhs {
                            return Err(fail(
                                "hom-lim-plus",
                                format!(
                                    "hom = {lhs}, lim+ = {rhs} on core {:?}, M = {:?}",
                                    f.core(),
                                    m.values()
                                ),
                                space_replay("rep", space),
                            ));
                        }
                    }
                }
            }
            Ok(instances)
        }),
    ));

    properties.push((
        "cauchy-minimax",
        Box::new(move || {
            let mut instances = 0;
            for space in &medium {
                let filters = all_filters(space);
                for f1 in filters.iter().filter(|f| f.is_cauchy()) {
                    for f2 in &filters {
                        instances += 1;
                        let max_min = space.base().meet(
                            f1.core()
                                .iter()
                                .map(|&x| {
                                    space
                                        .base()
                                        .join(f2.core().iter().map(|&y| space.hom(x, y)))
                                })
                                .collect::<Vec<_>>()
                                .iter(),
                        );
                        let min_max = space.base().join(
                            f2.core()
                                .iter()
                                .map(|&y| {
                                    space
                                        .base()
                                        .meet(f1.core().iter().map(|&x| space.hom(x, y)))
                                })
                                .collect::<Vec<_>>()
                                .iter(),
                        );
                        if max_min != min_max {
                            return Err(fail(
                                "cauchy-minimax",
                                format!(
                                    "exchange fails for Cauchy {:?} vs {:?}: {max_min} != {min_max}",
                                    f1.core(),
                                    f2.core()
                                ),
                                space_replay("distance", space),
                            ));
                        }
                    }
                }
            }
            Ok(instances)
        }),
    ));

    let small_ref = small.clone();
    properties.push((
        "flatness-hierarchy",
        Box::new(move || {
            let mut instances = 0;
            for space in &small_ref {
                for m in enumerate_left_modules(space, &small_grid()) {
                    instances += 1;
                    let chain = [
                        is_left_adjoint(&m),
                        is_aleph_flat(&m, Aleph(2)),
                        is_aleph_flat(&m, Aleph::OMEGA),
                        is_p1_flat(&m),
                    ];
                    if chain.windows(2).any(|w| w[0] && !w[1]) {
                        return Err(fail(
                            "flatness-hierarchy",
                            format!("hierarchy broken for {:?}: {chain:?}", m.values()),
                            space_replay("flat", space),
                        ));
                    }
                }
            }
            Ok(instances)
        }),
    ));

    let small_ref = small.clone();
    properties.push((
        "flatness-oracle-lattice",
        Box::new(move || {
            let mut instances = 0;
            // The check derives its grid from the hom matrix and the
            // module; modules are enumerated over the small fixed grid.
            let cfg = LatticeCheckConfig::default();
            for space in &small_ref {
                for m in enumerate_left_modules(space, &small_grid()) {
                    instances += 1;
                    let oracle_p1 = is_p1_flat(&m);
                    let lattice_p1 = lattice_verdict(&m, &FlatnessClass::P1, &cfg);
                    let oracle_omega = is_aleph_flat(&m, Aleph::OMEGA);
                    let lattice_omega =
                        lattice_verdict(&m, &FlatnessClass::Aleph(Aleph::OMEGA), &cfg);
                    if oracle_p1 != lattice_p1 || oracle_omega != lattice_omega {
                        return Err(fail(
                            "flatness-oracle-lattice",
                            format!(
                                "verdicts disagree on {:?}: oracle ({oracle_p1}, {oracle_omega}), lattice ({lattice_p1}, {lattice_omega})",
                                m.values()
                            ),
                            space_replay("flat", space),
                        ));
                    }
                }
            }
            Ok(instances)
        }),
    ));

    properties.push((
        "completion-completeness",
        Box::new(move || {
            let mut instances = 0;
            for space in corpus_ref
                .cost_spaces
                .iter()
                .filter(|s| s.object_count() <= 4)
            {
                instances += 1;
                let comp = type1_completion(space).expect("within limits");
                let complete = is_complete(comp.space(), &CompletionKind::Type1)
                    .expect("within limits");
                if !complete {
                    return Err(fail(
                        "completion-completeness",
                        "type-1 completion is not type-1 complete".to_string(),
                        space_replay("complete", space),
                    ));
                }
            }
            Ok(instances)
        }),
    ));

    properties.push((
        "completion-reflection",
        Box::new(move || {
            // The type-1 completion of a complete space is a reflection,
            // not an equivalence (free cocompletions of cocomplete spaces
            // grow), so the double completion is checked for the true
            // property: every point contains the embedded representative
            // of its core at distance zero. The witnessed and Cauchy
            // completions, in contrast, are idempotent and checked as such.
            let mut instances = 0;
            for space in corpus_ref
                .cost_spaces
                .iter()
                .filter(|s| s.object_count() <= 4)
            {
                let comp = type1_completion(space).expect("within limits");
                let double = type1_completion(comp.space()).expect("within limits");
                for (k, core) in double.carrier().iter().enumerate() {
                    instances += 1;
                    let filter = Filter::new(comp.space(), core.clone()).expect("non-empty");
                    let rep = match filter.representative() {
                        Some(r) => r,
                        None => {
                            return Err(fail(
                                "completion-reflection",
                                format!("double-completion core {core:?} has no representative"),
                                space_replay("complete", space),
                            ))
                        }
                    };
                    let image = double.embedding()[rep];
                    if !double.space().hom(k, image).is_unit() {
                        return Err(fail(
                            "completion-reflection",
                            format!(
                                "double-completion point {core:?} does not reflect onto its representative"
                            ),
                            space_replay("complete", space),
                        ));
                    }
                }

                let omega = type_aleph_completion(space, Aleph::OMEGA).expect("within limits");
                let omega2 =
                    type_aleph_completion(omega.space(), Aleph::OMEGA).expect("within limits");
                instances += 1;
                if omega.space().object_count() != omega2.space().object_count() {
                    return Err(fail(
                        "completion-reflection",
                        "witnessed completion is not idempotent".to_string(),
                        space_replay("complete", space),
                    ));
                }
                let cc = cauchy_completion(space).expect("no limits");
                let cc2 = cauchy_completion(cc.space()).expect("no limits");
                instances += 1;
                if cc.space().hom_matrix() != cc2.space().hom_matrix() {
                    return Err(fail(
                        "completion-reflection",
                        "Cauchy completion is not idempotent".to_string(),
                        space_replay("complete", space),
                    ));
                }
            }
            Ok(instances)
        }),
    ));

    properties.push((
        "symmetric-closed-subsets",
        Box::new(move || {
            let mut instances = 0;
            for space in &corpus_ref.symmetric {
                let comp = type1_completion(space).expect("within limits");
                let cc = cauchy_completion(space).expect("no limits");
                let cc_cores =
                    kind_cores(cc.space(), &CompletionKind::Type1).expect("within limits");
                if comp.carrier().len() != cc_cores.len() {
                    return Err(fail(
                        "symmetric-closed-subsets",
                        format!(
                            "carrier sizes differ: {} closed cores upstairs, {} downstairs",
                            comp.carrier().len(),
                            cc_cores.len()
                        ),
                        space_replay("complete", space),
                    ));
                }
                // Canonical bijection: push a closed core through the
                // Cauchy quotient.
                let images: Vec<Vec<usize>> = comp
                    .carrier()
                    .iter()
                    .map(|core| {
                        let mut image: Vec<usize> =
                            core.iter().map(|&x| cc.embedding()[x]).collect();
                        image.sort_unstable();
                        image.dedup();
                        image
                    })
                    .collect();
                for image in &images {
                    if !cc_cores.contains(image) {
                        return Err(fail(
                            "symmetric-closed-subsets",
                            format!("image {image:?} is not a closed core of the quotient"),
                            space_replay("complete", space),
                        ));
                    }
                }
                for (i, si) in comp.carrier().iter().enumerate() {
                    for (j, _) in comp.carrier().iter().enumerate() {
                        instances += 1;
                        let upstairs = comp.space().hom(i, j).clone();
                        let downstairs =
                            semi_hausdorff(cc.space(), &images[i], &images[j])
                                .expect("non-empty images");
                        if upstairs != downstairs {
                            return Err(fail(
                                "symmetric-closed-subsets",
                                format!(
                                    "semi-Hausdorff mismatch at core {si:?}: {upstairs} vs {downstairs}"
                                ),
                                space_replay("complete", space),
                            ));
                        }
                    }
                }
            }
            Ok(instances)
        }),
    ));

    properties.push((
        "symmetric-omega-cauchy",
        Box::new(move || {
            let mut instances = 0;
            for space in &corpus_ref.symmetric {
                for f in all_filters(space) {
                    instances += 1;
                    if f.is_type_aleph(Aleph::OMEGA) && !f.is_cauchy() {
                        return Err(fail(
                            "symmetric-omega-cauchy",
                            format!("omega filter {:?} is not Cauchy", f.core()),
                            space_replay("rep", space),
                        ));
                    }
                }
                let omega = type_aleph_completion(space, Aleph::OMEGA).expect("limits");
                let cc = cauchy_completion(space).expect("no limits");
                instances += 1;
                if omega.carrier().len() != cc.carrier().len() {
                    return Err(fail(
                        "symmetric-omega-cauchy",
                        format!(
                            "omega completion has {} points, Cauchy completion {}",
                            omega.carrier().len(),
                            cc.carrier().len()
                        ),
                        space_replay("complete", space),
                    ));
                }
                // class -> closure of its representative.
                let map: Vec<usize> = cc
                    .carrier()
                    .iter()
                    .map(|class| {
                        let cl = closure(space, &class[..1.min(class.len())])
                            .expect("non-empty");
                        omega
                            .carrier()
                            .iter()
                            .position(|c| *c == cl)
                            .expect("closures of points are omega cores")
                    })
                    .collect();
                for i in 0..map.len() {
                    for j in 0..map.len() {
                        if omega.space().hom(map[i], map[j]) != cc.space().hom(i, j) {
                            return Err(fail(
                                "symmetric-omega-cauchy",
                                "omega and Cauchy completions differ in distance".to_string(),
                                space_replay("complete", space),
                            ));
                        }
                    }
                }
            }
            Ok(instances)
        }),
    ));

    let seed = cfg.seed;
    properties.push((
        "kan-image-transport",
        Box::new(move || {
            let mut instances = 0;
            let mut rng = generate::rng(seed ^ 0x6b616e);
            let spaces = &corpus_ref.cost_spaces;
            for i in 0..spaces.len() {
                let a = &spaces[i];
                let b = &spaces[(i + 1) % spaces.len()];
                if a.object_count() == 0 || b.object_count() == 0 {
                    continue;
                }
                let g = match generate::random_functor(&mut rng, a, b) {
                    Some(g) => g,
                    None => continue,
                };
                let f = generate::random_filter(&mut rng, a);
                instances += 1;
                let image = f.direct_image(&g).expect("matching source");
                let lan = left_kan_extension(&f.module_minus(), &g).expect("matching source");
                if image.module_minus().values() != lan.values() {
                    return Err(fail(
                        "kan-image-transport",
                        format!(
                            "lower module of the image ({:?}) differs from the Kan extension ({:?})",
                            image.module_minus().values(),
                            lan.values()
                        ),
                        space_replay("kan", a),
                    ));
                }
                let rep = image.representative();
                let colim = weighted_colimit(&f.module_minus(), &g).expect("matching source");
                if rep != colim {
                    return Err(fail(
                        "kan-image-transport",
                        format!("representative {rep:?} differs from weighted colimit {colim:?}"),
                        space_replay("kan", a),
                    ));
                }
                let m = f.module_minus();
                for (holds_a, holds_b) in [
                    (is_p1_flat(&m), is_p1_flat(&lan)),
                    (
                        is_aleph_flat(&m, Aleph::OMEGA),
                        is_aleph_flat(&lan, Aleph::OMEGA),
                    ),
                    (is_left_adjoint(&m), is_left_adjoint(&lan)),
                ] {
                    if holds_a && !holds_b {
                        return Err(fail(
                            "kan-image-transport",
                            "flatness class dropped along a Kan extension".to_string(),
                            space_replay("kan", a),
                        ));
                    }
                }
            }
            Ok(instances)
        }),
    ));

    properties.push((
        "filter-unit-closure",
        Box::new(move || {
            let mut instances = 0;
            for space in corpus_ref
                .cost_spaces
                .iter()
                .filter(|s| s.object_count() <= 4)
            {
                for f in all_filters(space) {
                    instances += 1;
                    let back = filter_of_module(&f.module_minus())
                        .expect("lower modules reach the unit");
                    let expected = closure(space, f.core()).expect("non-empty");
                    if back.core() != expected.as_slice()
                        || !back.leq(&f).expect("same space")
                        || !f.leq(&back).expect("same space")
                    {
                        return Err(fail(
                            "filter-unit-closure",
                            format!(
                                "unit-set filter of the lower module of {:?} is {:?}, expected the closure {:?}",
                                f.core(),
                                back.core(),
                                expected
                            ),
                            space_replay("rep", space),
                        ));
                    }
                }
            }
            Ok(instances)
        }),
    ));

    properties.push((
        "sequence-forward-cauchy",
        Box::new(move || {
            let mut instances = 0;
            for space in corpus_ref
                .cost_spaces
                .iter()
                .filter(|s| s.object_count() >= 1 && s.object_count() <= 4)
            {
                let n = space.object_count();
                for a in 0..n {
                    for b in 0..n {
                        instances += 1;
                        let seq =
                            PeriodicSequence::new(space, vec![b], vec![a, b]).expect("in range");
                        if seq.is_forward_cauchy()
                            && !seq.filter().is_type_aleph(Aleph::OMEGA)
                        {
                            return Err(fail(
                                "sequence-forward-cauchy",
                                format!("forward Cauchy cycle [{a}, {b}] lacks type omega"),
                                space_replay("rep", space),
                            ));
                        }
                    }
                }
            }
            Ok(instances)
        }),
    ));

    let small_ref = small.clone();
    properties.push((
        "adjoint-canonicity",
        Box::new(move || {
            let mut instances = 0;
            for space in &small_ref {
                let lefts = enumerate_left_modules(space, &small_grid());
                let rights = enumerate_right_modules(space, &small_grid());
                for m in &lefts {
                    let candidate = right_adjoint_candidate(m);
                    for n in &rights {
                        instances += 1;
                        if is_adjoint_pair(m, n).expect("same space")
                            && n.values() != candidate.values()
                        {
                            return Err(fail(
                                "adjoint-canonicity",
                                format!(
                                    "module {:?} has a right adjoint {:?} different from the candidate {:?}",
                                    m.values(),
                                    n.values(),
                                    candidate.values()
                                ),
                                space_replay("flat", space),
                            ));
                        }
                    }
                }
            }
            Ok(instances)
        }),
    ));

    properties.push((
        "preorder-ideal-reflection",
        Box::new(move || {
            let mut instances = 0;
            for preorder in &corpus_ref.preorders {
                instances += 1;
                let idl = ideal_completion(preorder, Aleph::OMEGA).expect("bool base");
                let refl = poset_reflection(preorder).expect("bool base");
                if idl.space().object_count() != refl.space().object_count() {
                    return Err(fail(
                        "preorder-ideal-reflection",
                        format!(
                            "ideal completion has {} points, reflection {}",
                            idl.space().object_count(),
                            refl.space().object_count()
                        ),
                        space_replay("ideal-complete", preorder),
                    ));
                }
                let map: Vec<usize> = refl
                    .carrier()
                    .iter()
                    .map(|class| {
                        let principal = Downset::principal(preorder, class[0])
                            .expect("bool base")
                            .members()
                            .to_vec();
                        idl.carrier()
                            .iter()
                            .position(|c| *c == principal)
                            .expect("principal downsets are directed")
                    })
                    .collect();
                for i in 0..map.len() {
                    for j in 0..map.len() {
                        if refl.space().hom(i, j) != idl.space().hom(map[i], map[j]) {
                            return Err(fail(
                                "preorder-ideal-reflection",
                                "reflection and ideal completion orders disagree".to_string(),
                                space_replay("ideal-complete", preorder),
                            ));
                        }
                    }
                }
            }
            Ok(instances)
        }),
    ));

    properties.push((
        "universal-property-small",
        Box::new(move || {
            let mut instances = 0;
            let limits = UniversalPropertyLimits {
                max_source: 3,
                max_target: 8,
            };
            for space in [fixtures::one_point(), fixtures::z2()] {
                instances += 1;
                let comp = type1_completion(&space).expect("small");
                let report = check_universal_property(
                    &space,
                    comp.space(),
                    &CompletionKind::Type1,
                    &limits,
                )
                .expect("within limits");
                if !report.holds() {
                    return Err(fail(
                        "universal-property-small",
                        format!("universal property issues: {:?}", report.issues),
                        space_replay("complete", &space),
                    ));
                }
            }
            let dcpo_limits = UniversalPropertyLimits {
                max_source: 3,
                max_target: 3,
            };
            for (a, b) in [
                (fixtures::chain3(), fixtures::chain3()),
                (fixtures::discrete2(), fixtures::chain3()),
                (fixtures::two_cycle(), fixtures::discrete2()),
            ] {
                instances += 1;
                let report =
                    check_dcpo_universal_property(&a, &b, &dcpo_limits).expect("within limits");
                if !report.holds() {
                    return Err(fail(
                        "universal-property-small",
                        format!("dcpo universal property issues: {:?}", report.issues),
                        space_replay("check-dcpo", &a),
                    ));
                }
            }
            Ok(instances)
        }),
    ));

    let mut outcomes = Vec::new();
    let mut failure = None;
    for (name, mut property) in properties {
        match property() {
            Ok(instances) => outcomes.push(PropertyOutcome {
                name: name.to_string(),
                instances,
                passed: true,
            }),
            Err(counterexample) => {
                outcomes.push(PropertyOutcome {
                    name: name.to_string(),
                    instances: 0,
                    passed: false,
                });
                if failure.is_none() {
                    failure = Some(counterexample);
                }
            }
        }
    }

    Ok(SuiteReport {
        seed: cfg.seed,
        max_objects: cfg.max_objects,
        grid: cfg.grid.iter().map(|c| c.to_string()).collect(),
        properties: outcomes,
        failure,
    })
}
