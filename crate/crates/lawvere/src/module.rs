//! Left and right modules on a finite enriched category — presheaves and
//! copresheaves valued in the base quantale — with composition, presheaf
//! homs, adjoint pairs, pointwise Kan extensions, and search-based
//! weighted (co)limits.
//!
//! Over the cost base a left module is a "distance to a virtual point"
//! vector `M` with `M(y) + A(x, y) >= M(x)`; over the Boolean base it is
//! exactly a downset.

use std::fmt;

use crate::quantale::Value;
use crate::space::{Functor, Space};
use crate::Error;

/// A left module (presheaf): one value per object, satisfying
/// `M(y) (x) A(x, y)  entails  M(x)`.
#[derive(Clone, PartialEq, Eq)]
pub struct LeftModule {
    space: Space,
    values: Vec<Value>,
}

/// A right module (copresheaf): one value per object, satisfying
/// `A(x, y) (x) N(x)  entails  N(y)`.
#[derive(Clone, PartialEq, Eq)]
pub struct RightModule {
    space: Space,
    values: Vec<Value>,
}

/// Violations of the one-sided triangle inequality, as `(x, y)` pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleReport {
    pub violations: Vec<ModuleViolation>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleViolation {
    pub x: usize,
    pub y: usize,
    pub bound: Value,
    pub value: Value,
}

impl ModuleReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ModuleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(
                f,
                "module inequality fails at ({}, {}): bound = {}, value = {}",
                v.x, v.y, v.bound, v.value
            )?;
        }
        Ok(())
    }
}

fn check_well_formed(space: &Space, values: &[Value]) -> Result<(), Error> {
    if values.len() != space.object_count() {
        return Err(Error::LengthMismatch {
            expected: space.object_count(),
            got: values.len(),
        });
    }
    for v in values {
        if v.base() != space.base() {
            return Err(Error::BaseMismatch {
                expected: space.base(),
                got: v.base(),
            });
        }
    }
    Ok(())
}

impl LeftModule {
    /// Checks the left module inequality for a candidate value vector.
    pub fn validate(space: &Space, values: &[Value]) -> Result<ModuleReport, Error> {
        check_well_formed(space, values)?;
        let n = space.object_count();
        let mut violations = Vec::new();
        for x in 0..n {
            for y in 0..n {
                let bound = values[y].tensor(space.hom(x, y));
                if !bound.entails(&values[x]) {
                    violations.push(ModuleViolation {
                        x,
                        y,
                        bound,
                        value: values[x].clone(),
                    });
                }
            }
        }
        Ok(ModuleReport { violations })
    }

    pub fn new(space: &Space, values: Vec<Value>) -> Result<Self, Error> {
        let report = Self::validate(space, &values)?;
        if !report.is_valid() {
            return Err(Error::InvalidModule(report));
        }
        Ok(LeftModule {
            space: space.clone(),
            values,
        })
    }

    /// The representable presheaf `A(-, a)`: the column of the hom matrix.
    pub fn representable(space: &Space, a: usize) -> Result<Self, Error> {
        if a >= space.object_count() {
            return Err(Error::IndexOutOfRange {
                index: a,
                count: space.object_count(),
            });
        }
        let values = (0..space.object_count())
            .map(|x| space.hom(x, a).clone())
            .collect();
        Ok(LeftModule {
            space: space.clone(),
            values,
        })
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn values(&self) -> &[Value] {
        &self.values
    }

    pub fn value(&self, x: usize) -> &Value {
        &self.values[x]
    }
}

impl RightModule {
    pub fn validate(space: &Space, values: &[Value]) -> Result<ModuleReport, Error> {
        check_well_formed(space, values)?;
        let n = space.object_count();
        let mut violations = Vec::new();
        for x in 0..n {
            for y in 0..n {
                let bound = space.hom(x, y).tensor(&values[x]);
                if !bound.entails(&values[y]) {
                    violations.push(ModuleViolation {
                        x,
                        y,
                        bound,
                        value: values[y].clone(),
                    });
                }
            }
        }
        Ok(ModuleReport { violations })
    }

    pub fn new(space: &Space, values: Vec<Value>) -> Result<Self, Error> {
        let report = Self::validate(space, &values)?;
        if !report.is_valid() {
            return Err(Error::InvalidModule(report));
        }
        Ok(RightModule {
            space: space.clone(),
            values,
        })
    }

    /// The representable copresheaf `A(a, -)`: the row of the hom matrix.
    pub fn representable(space: &Space, a: usize) -> Result<Self, Error> {
        if a >= space.object_count() {
            return Err(Error::IndexOutOfRange {
                index: a,
                count: space.object_count(),
            });
        }
        let values = (0..space.object_count())
            .map(|y| space.hom(a, y).clone())
            .collect();
        Ok(RightModule {
            space: space.clone(),
            values,
        })
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn values(&self) -> &[Value] {
        &self.values
    }

    pub fn value(&self, x: usize) -> &Value {
        &self.values[x]
    }
}

impl fmt::Debug for LeftModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LeftModule({:?})", self.values)
    }
}

impl fmt::Debug for RightModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RightModule({:?})", self.values)
    }
}

/// Composite `N * M` of a right and a left module over the same space:
/// the join over objects of `M(x) (x) N(x)` (for costs, the infimum of
/// `M(x) + N(x)`).
pub fn compose(n: &RightModule, m: &LeftModule) -> Result<Value, Error> {
    if n.space != m.space {
        return Err(Error::SpaceMismatch);
    }
    let products: Vec<Value> = m
        .values
        .iter()
        .zip(&n.values)
        .map(|(mv, nv)| mv.tensor(nv))
        .collect();
    Ok(m.space.base().join(products.iter()))
}

/// Presheaf hom `[A^op, V](M1, M2)`: the meet over objects of
/// `[M1(x), M2(x)]` (for costs, the supremum of truncated differences).
pub fn presheaf_hom(m1: &LeftModule, m2: &LeftModule) -> Result<Value, Error> {
    if m1.space != m2.space {
        return Err(Error::SpaceMismatch);
    }
    let homs: Vec<Value> = m1
        .values
        .iter()
        .zip(&m2.values)
        .map(|(a, b)| a.hom(b))
        .collect();
    Ok(m1.space.base().meet(homs.iter()))
}

/// The canonical right-adjoint candidate `~M(x) = meet_y [M(y), A(y, x)]`.
///
/// This is always a valid right module, and whenever `M` has any right
/// adjoint at all, this is it (adjoints are unique here because the
/// presheaf order is antisymmetric).
pub fn right_adjoint_candidate(m: &LeftModule) -> RightModule {
    let space = &m.space;
    let n = space.object_count();
    let values: Vec<Value> = (0..n)
        .map(|x| {
            let homs: Vec<Value> = (0..n)
                .map(|y| m.values[y].hom(space.hom(y, x)))
                .collect();
            space.base().meet(homs.iter())
        })
        .collect();
    RightModule::new(space, values)
        .expect("the adjoint candidate always satisfies the right module inequality")
}

/// Adjointness: `compose(N, M)` is the unit and
/// `N(y) (x) M(x)  entails  A(x, y)` for all pairs.
pub fn is_adjoint_pair(m: &LeftModule, n: &RightModule) -> Result<bool, Error> {
    if m.space != n.space {
        return Err(Error::SpaceMismatch);
    }
    if !compose(n, m)?.is_unit() {
        return Ok(false);
    }
    let count = m.space.object_count();
    for x in 0..count {
        for y in 0..count {
            if !n.values[y].tensor(&m.values[x]).entails(m.space.hom(x, y)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Pointwise left Kan extension of `M` along `G`:
/// `Lan(b) = join_x ( M(x) (x) B(b, G x) )`.
pub fn left_kan_extension(m: &LeftModule, g: &Functor) -> Result<LeftModule, Error> {
    if *g.source() != m.space {
        return Err(Error::FunctorMismatch);
    }
    let target = g.target();
    let n = m.space.object_count();
    let values: Vec<Value> = (0..target.object_count())
        .map(|b| {
            let terms: Vec<Value> = (0..n)
                .map(|x| m.values[x].tensor(target.hom(b, g.apply(x))))
                .collect();
            target.base().join(terms.iter())
        })
        .collect();
    LeftModule::new(target, values)
}

/// The colimit of `G` weighted by `M`, if some object realizes it: the
/// lowest-index `b` with `A(b, a) = meet_k [M(k), A(G k, a)]` for all `a`.
pub fn weighted_colimit(m: &LeftModule, g: &Functor) -> Result<Option<usize>, Error> {
    if *g.source() != m.space {
        return Err(Error::FunctorMismatch);
    }
    let target = g.target();
    let k_count = m.space.object_count();
    let required: Vec<Value> = (0..target.object_count())
        .map(|a| {
            let homs: Vec<Value> = (0..k_count)
                .map(|k| m.values[k].hom(target.hom(g.apply(k), a)))
                .collect();
            target.base().meet(homs.iter())
        })
        .collect();
    Ok((0..target.object_count())
        .find(|&b| (0..target.object_count()).all(|a| *target.hom(b, a) == required[a])))
}

/// The limit of `G` weighted by `N`, dual to [`weighted_colimit`]: the
/// lowest-index `c` with `A(a, c) = meet_k [N(k), A(a, G k)]` for all `a`.
pub fn weighted_limit(n: &RightModule, g: &Functor) -> Result<Option<usize>, Error> {
    if *g.source() != n.space {
        return Err(Error::FunctorMismatch);
    }
    let target = g.target();
    let k_count = n.space.object_count();
    let required: Vec<Value> = (0..target.object_count())
        .map(|a| {
            let homs: Vec<Value> = (0..k_count)
                .map(|k| n.values[k].hom(target.hom(a, g.apply(k))))
                .collect();
            target.base().meet(homs.iter())
        })
        .collect();
    Ok((0..target.object_count())
        .find(|&c| (0..target.object_count()).all(|a| *target.hom(a, c) == required[a])))
}

/// Enumerates all valid left modules whose values are drawn from `grid`,
/// in lexicographic order of the value vector.
pub fn enumerate_left_modules(space: &Space, grid: &[Value]) -> Vec<LeftModule> {
    enumerate_vectors(space, grid)
        .into_iter()
        .filter_map(|values| LeftModule::new(space, values).ok())
        .collect()
}

/// Enumerates all valid right modules with values drawn from `grid`.
pub fn enumerate_right_modules(space: &Space, grid: &[Value]) -> Vec<RightModule> {
    enumerate_vectors(space, grid)
        .into_iter()
        .filter_map(|values| RightModule::new(space, values).ok())
        .collect()
}

fn enumerate_vectors(space: &Space, grid: &[Value]) -> Vec<Vec<Value>> {
    let n = space.object_count();
    let mut out = Vec::new();
    if grid.is_empty() {
        if n == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    let mut idx = vec![0usize; n];
    loop {
        out.push(idx.iter().map(|&i| grid[i].clone()).collect());
        let mut k = n;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < grid.len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantale::{Base, CostValue};

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

    fn costs(strs: &[&str]) -> Vec<Value> {
        strs.iter()
            .map(|s| Value::Cost(s.parse::<CostValue>().unwrap()))
            .collect()
    }

    fn cv(s: &str) -> Value {
        Value::Cost(s.parse::<CostValue>().unwrap())
    }

    #[test]
    fn module_validation() {
        let t3 = t3();
        assert!(LeftModule::new(&t3, costs(&["0", "2", "1"])).is_ok());
        // Representables are always valid.
        for a in 0..3 {
            assert!(LeftModule::representable(&t3, a).is_ok());
            assert!(RightModule::representable(&t3, a).is_ok());
        }
        let z2 = z2();
        let bad = LeftModule::validate(&z2, &costs(&["1", "0"])).unwrap();
        assert!(!bad.is_valid());
        // M(q) + d(p,q) = 0 < M(p) = 1.
        assert!(bad.violations.iter().any(|v| (v.x, v.y) == (0, 1)));
    }

    #[test]
    fn representables_read_rows_and_columns() {
        let t3 = t3();
        assert_eq!(
            LeftModule::representable(&t3, 0).unwrap().values(),
            costs(&["0", "2", "1"]).as_slice()
        );
        assert_eq!(
            RightModule::representable(&t3, 0).unwrap().values(),
            costs(&["0", "1", "3"]).as_slice()
        );
        let z2 = z2();
        assert_eq!(
            LeftModule::representable(&z2, 1).unwrap().values(),
            costs(&["0", "0"]).as_slice()
        );
        let one = Space::cost(&["*"], &[&["0"]]).unwrap();
        assert_eq!(
            LeftModule::representable(&one, 0).unwrap().values(),
            costs(&["0"]).as_slice()
        );
    }

    #[test]
    fn compose_examples() {
        let t3 = t3();
        // M = A(-, a), N = A(a, -): composite is the unit, witness x = a.
        for a in 0..3 {
            let m = LeftModule::representable(&t3, a).unwrap();
            let n = RightModule::representable(&t3, a).unwrap();
            assert!(compose(&n, &m).unwrap().is_unit());
        }
        let m = LeftModule::new(&t3, costs(&["0", "2", "1"])).unwrap();
        let n = RightModule::new(&t3, costs(&["0", "1", "3"])).unwrap();
        assert_eq!(compose(&n, &m).unwrap(), cv("0"));
    }

    #[test]
    fn compose_over_bool_is_intersection_nonemptiness() {
        let c3 = Space::preorder(
            &["0", "1", "2"],
            &[&["1", "1", "1"], &["0", "1", "1"], &["0", "0", "1"]],
        )
        .unwrap();
        // Downset {0,1} as a left module, upset {1,2} as a right module.
        let m = LeftModule::new(
            &c3,
            vec![Value::Bool(true), Value::Bool(true), Value::Bool(false)],
        )
        .unwrap();
        let n = RightModule::new(
            &c3,
            vec![Value::Bool(false), Value::Bool(true), Value::Bool(true)],
        )
        .unwrap();
        assert_eq!(compose(&n, &m).unwrap(), Value::Bool(true));
        let disjoint = RightModule::new(
            &c3,
            vec![Value::Bool(false), Value::Bool(false), Value::Bool(true)],
        )
        .unwrap();
        assert_eq!(compose(&disjoint, &m).unwrap(), Value::Bool(false));
    }

    #[test]
    fn presheaf_hom_examples() {
        let z2 = z2();
        let dp = LeftModule::representable(&z2, 0).unwrap(); // (0, 1)
        let dq = LeftModule::representable(&z2, 1).unwrap(); // (0, 0)
        assert!(presheaf_hom(&dp, &dp).unwrap().is_unit());
        assert_eq!(presheaf_hom(&dp, &dq).unwrap(), cv("0"));
        assert_eq!(presheaf_hom(&dq, &dp).unwrap(), cv("1"));
    }

    #[test]
    fn hom_zero_both_ways_is_equality() {
        let t3 = t3();
        let grid = costs(&["0", "1", "2", "inf"]);
        let modules = enumerate_left_modules(&t3, &grid);
        assert!(!modules.is_empty());
        for m1 in &modules {
            for m2 in &modules {
                let fwd = presheaf_hom(m1, m2).unwrap().is_unit();
                let bwd = presheaf_hom(m2, m1).unwrap().is_unit();
                assert_eq!(fwd && bwd, m1.values() == m2.values());
            }
        }
    }

    #[test]
    fn adjoint_candidate_examples() {
        let t3 = t3();
        let m = LeftModule::new(&t3, costs(&["0", "2", "1"])).unwrap();
        let cand = right_adjoint_candidate(&m);
        assert_eq!(cand.values(), costs(&["0", "1", "3"]).as_slice());
        assert!(is_adjoint_pair(&m, &cand).unwrap());

        // Representables: the candidate is the opposite representable.
        for a in 0..3 {
            let m = LeftModule::representable(&t3, a).unwrap();
            let cand = right_adjoint_candidate(&m);
            assert_eq!(
                cand.values(),
                RightModule::representable(&t3, a).unwrap().values()
            );
            assert!(is_adjoint_pair(&m, &cand).unwrap());
        }

        // Constant infinity: candidate is constant zero, adjointness fails
        // through condition (1).
        let inf = LeftModule::new(&t3, costs(&["inf", "inf", "inf"])).unwrap();
        let cand = right_adjoint_candidate(&inf);
        assert_eq!(cand.values(), costs(&["0", "0", "0"]).as_slice());
        assert!(!is_adjoint_pair(&inf, &cand).unwrap());
    }

    #[test]
    fn adjoint_pair_counterexample_on_z2() {
        let z2 = z2();
        let m = LeftModule::new(&z2, costs(&["0", "0"])).unwrap();
        let n = RightModule::new(&z2, costs(&["0", "0"])).unwrap();
        // Condition (2) fails at (x=q, y=p): 0 + 0 < d(q,p) = 1.
        assert!(!is_adjoint_pair(&m, &n).unwrap());
    }

    #[test]
    fn adjoint_canonicity_exhaustive() {
        // Any valid N forming an adjoint pair with M equals the candidate.
        let grid = costs(&["0", "1", "2", "inf"]);
        for space in [z2(), t3()] {
            let lefts = enumerate_left_modules(&space, &grid);
            let rights = enumerate_right_modules(&space, &grid);
            for m in &lefts {
                let cand = right_adjoint_candidate(m);
                for n in &rights {
                    if is_adjoint_pair(m, n).unwrap() {
                        assert_eq!(n.values(), cand.values());
                    }
                }
            }
        }
    }

    #[test]
    fn kan_extension_examples() {
        let t3 = t3();
        let z2 = z2();

        // Identity functor: Lan reproduces the module.
        let m = LeftModule::new(&t3, costs(&["0", "2", "1"])).unwrap();
        let id = Functor::identity(&t3);
        assert_eq!(left_kan_extension(&m, &id).unwrap().values(), m.values());

        // Constant functor at a from Z2 with M = (0,0): the column d(-, a).
        let g = Functor::constant(&z2, &t3, 0).unwrap();
        let m = LeftModule::new(&z2, costs(&["0", "0"])).unwrap();
        assert_eq!(
            left_kan_extension(&m, &g).unwrap().values(),
            costs(&["0", "2", "1"]).as_slice()
        );

        // Representables go to representables.
        for maps in crate::space::nonexpansive_maps(&z2, &t3) {
            let g = Functor::new(z2.clone(), t3.clone(), maps).unwrap();
            for a in 0..2 {
                let m = LeftModule::representable(&z2, a).unwrap();
                let lan = left_kan_extension(&m, &g).unwrap();
                assert_eq!(
                    lan.values(),
                    LeftModule::representable(&t3, g.apply(a)).unwrap().values()
                );
            }
        }
    }

    #[test]
    fn kan_extension_of_random_valid_modules_is_valid() {
        let t3 = t3();
        let z2 = z2();
        let grid = costs(&["0", "1/2", "1", "2", "inf"]);
        for maps in crate::space::nonexpansive_maps(&z2, &t3) {
            let g = Functor::new(z2.clone(), t3.clone(), maps).unwrap();
            for m in enumerate_left_modules(&z2, &grid) {
                // `new` inside revalidates; unwrap checks validity.
                let lan = left_kan_extension(&m, &g).unwrap();
                assert_eq!(lan.space(), &t3);
            }
        }
    }

    #[test]
    fn weighted_colimit_examples() {
        let t3 = t3();
        let z2 = z2();

        // Representable weights pick out the image point.
        for g_map in crate::space::nonexpansive_maps(&z2, &t3) {
            let g = Functor::new(z2.clone(), t3.clone(), g_map).unwrap();
            for k in 0..2 {
                let m = LeftModule::representable(&z2, k).unwrap();
                let col = weighted_colimit(&m, &g).unwrap();
                // Unique up to zero-distance; compare hom vectors.
                let b = col.expect("representable colimits exist");
                for a in 0..3 {
                    assert_eq!(t3.hom(b, a), t3.hom(g.apply(k), a));
                }
            }
        }

        let m = LeftModule::new(&t3, costs(&["0", "2", "0"])).unwrap();
        assert_eq!(weighted_colimit(&m, &Functor::identity(&t3)).unwrap(), None);

        let m = LeftModule::new(&z2, costs(&["0", "0"])).unwrap();
        assert_eq!(
            weighted_colimit(&m, &Functor::identity(&z2)).unwrap(),
            Some(1)
        );
    }

    #[test]
    fn weighted_limit_examples() {
        let t3 = t3();
        let one = Space::cost(&["*"], &[&["0"]]).unwrap();

        // Representable weights: co-Yoneda.
        let id = Functor::identity(&t3);
        for k in 0..3 {
            let n = RightModule::representable(&t3, k).unwrap();
            let lim = weighted_limit(&n, &id).unwrap().expect("exists");
            for a in 0..3 {
                assert_eq!(t3.hom(a, lim), t3.hom(a, k));
            }
        }

        // Cotensor of b = a by v = 1 in T3: no object realizes it.
        let n = RightModule::new(&one, costs(&["1"])).unwrap();
        let g = Functor::new(one.clone(), t3.clone(), vec![0]).unwrap();
        assert_eq!(weighted_limit(&n, &g).unwrap(), None);
    }

    #[test]
    fn cotensor_limit_equations_unfold() {
        // On the Boolean chain 0 <= 1 <= 2, the cotensor of the top by
        // v = 1 is the top itself.
        let c3 = Space::preorder(
            &["0", "1", "2"],
            &[&["1", "1", "1"], &["0", "1", "1"], &["0", "0", "1"]],
        )
        .unwrap();
        let one = Space::preorder(&["*"], &[&["1"]]).unwrap();
        let n = RightModule::new(&one, vec![Value::Bool(true)]).unwrap();
        let g = Functor::new(one.clone(), c3.clone(), vec![2]).unwrap();
        assert_eq!(weighted_limit(&n, &g).unwrap(), Some(2));
    }

    #[test]
    fn mismatches_are_reported() {
        let t3 = t3();
        let z2 = z2();
        let m = LeftModule::representable(&t3, 0).unwrap();
        let n = RightModule::representable(&z2, 0).unwrap();
        assert!(matches!(compose(&n, &m), Err(Error::SpaceMismatch)));
        assert!(matches!(
            LeftModule::new(&t3, costs(&["0", "0"])),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            LeftModule::new(&t3, vec![Value::Bool(true); 3]),
            Err(Error::BaseMismatch { .. })
        ));
        let g = Functor::identity(&z2);
        assert!(matches!(
            left_kan_extension(&m, &g),
            Err(Error::FunctorMismatch)
        ));
    }

    #[test]
    fn enumeration_is_exhaustive_on_small_grid() {
        let z2 = z2();
        let grid = costs(&["0", "1"]);
        let lefts = enumerate_left_modules(&z2, &grid);
        // Brute force: 4 vectors, check each by hand.
        let mut expected = 0;
        for a in ["0", "1"] {
            for b in ["0", "1"] {
                if LeftModule::validate(&z2, &costs(&[a, b]))
                    .unwrap()
                    .is_valid()
                {
                    expected += 1;
                }
            }
        }
        assert_eq!(lefts.len(), expected);
        assert_eq!(Base::Cost, lefts[0].space().base());
    }
}
